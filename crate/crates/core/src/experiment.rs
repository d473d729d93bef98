//! Seeded generators, threshold sweeps and tabular output.
//!
//! # Randomness
//!
//! All randomness is drawn from xoshiro256** (`rand_xoshiro::Xoshiro256StarStar`).
//! For global trial id `i` the generator is seeded as follows:
//!
//! 1. `s_i = SplitMix64(seed XOR i).next_u64()` (SplitMix64 state starts
//!    at `seed XOR i`);
//! 2. the xoshiro256** state is filled by `seed_from_u64(s_i)`, which
//!    expands `s_i` with SplitMix64.
//!
//! Bounded integers are drawn by rejection: `r = next_u64()` is accepted
//! when `r < 2^64 − 1 − ((2^64 − 1) mod n)` and mapped to `r mod n`.
//! Trial ids run `size_index · trials + trial`. Rows are ordered by
//! `(size_index, trial)` regardless of scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};
use serde::Serialize;

use crate::counting::{chain_report, ChainReport};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::geometry::{
    distance_set, sphere_labels, two_param_distance_set, NormSpec, PairSet, PointSet, Space,
};

/// Largest universe (q^d for sets, q^{2d} for pair sets) the samplers accept.
pub const MAX_SAMPLE_UNIVERSE: u64 = 1 << 24;

/// Statements a sweep can test; [`Theorem::name`] is the stable id used on
/// the command line and in output rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// `|E| ≫ q^{(3d+1)/2}` ⇒ `|Δ_{d,d}(E)| = q²` (usual distance).
    ExactPairs,
    /// `|E| ≫ q^{10/3}`, d = 2 ⇒ `|Δ_{2,2}(E)| ≫ q²`.
    PlanarPairs,
    /// `|E| ≫ q^{(3d+1)/2}` ⇒ `|Δ^s_{d,d}(E)| ≫ q²` (general norm).
    NormPairs,
    /// `|E| ≫ p^{13/4}` over F_p, d = 2 ⇒ `|Δ_{2,2}(E)| ≫ p²`.
    PrimePlanePairs,
    /// `|X||Y| ≫ q^{d+1}` ⇒ `|Δ^s(X, Y)| ≫ q`.
    ProductSets,
    /// `|X|, |Y| ≫ p^{5/4}` over F_p, d = 2 ⇒ `|Δ(X, Y)| ≫ p`.
    PrimePlaneSets,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::ExactPairs,
        Theorem::PlanarPairs,
        Theorem::NormPairs,
        Theorem::PrimePlanePairs,
        Theorem::ProductSets,
        Theorem::PrimePlaneSets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::ExactPairs => "thm11",
            Theorem::PlanarPairs => "thm12",
            Theorem::NormPairs => "thm13",
            Theorem::PrimePlanePairs => "thm14",
            Theorem::ProductSets => "lemma21",
            Theorem::PrimePlaneSets => "lemma31",
        }
    }

    /// Pair-set statements (about Δ_{d,d}) as opposed to set statements.
    pub fn is_two_parameter(self) -> bool {
        matches!(
            self,
            Theorem::ExactPairs
                | Theorem::PlanarPairs
                | Theorem::NormPairs
                | Theorem::PrimePlanePairs
        )
    }

    fn planar_only(self) -> bool {
        matches!(
            self,
            Theorem::PlanarPairs | Theorem::PrimePlanePairs | Theorem::PrimePlaneSets
        )
    }

    fn prime_only(self) -> bool {
        matches!(self, Theorem::PrimePlanePairs | Theorem::PrimePlaneSets)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown theorem {s:?}")))
    }
}

/// Size threshold of a statement: `q^{(3d+1)/2}` (thm11, thm13),
/// `q^{10/3}` (thm12), `p^{13/4}` (thm14), `q^{d+1}` (lemma21, a bound on
/// `|X||Y|`), `p^{5/4}` (lemma31). For the prime-field statements `q` is p.
pub fn threshold(theorem: Theorem, q: u64, d: usize) -> Result<f64> {
    if theorem.planar_only() && d != 2 {
        return Err(Error::usage(format!(
            "{} is stated for d = 2, got d = {d}",
            theorem.name()
        )));
    }
    let q = q as f64;
    let d = d as f64;
    Ok(match theorem {
        Theorem::ExactPairs | Theorem::NormPairs => q.powf((3.0 * d + 1.0) / 2.0),
        Theorem::PlanarPairs => q.powf(10.0 / 3.0),
        Theorem::PrimePlanePairs => q.powf(13.0 / 4.0),
        Theorem::ProductSets => q.powf(d + 1.0),
        Theorem::PrimePlaneSets => q.powf(5.0 / 4.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Distinct points drawn uniformly.
    UniformRandom,
    /// A Cartesian product: A × B for pair sets, a coordinate grid S^d for sets.
    Product,
    /// A union of spheres about the origin with randomly ordered radii.
    SphereUnion,
    /// A random subset of the smallest coordinate subspace that fits.
    Subspace,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::UniformRandom => "uniform-random",
            Generator::Product => "product",
            Generator::SphereUnion => "sphere-union",
            Generator::Subspace => "subspace",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Generator::UniformRandom,
            Generator::Product,
            Generator::SphereUnion,
            Generator::Subspace,
        ]
        .into_iter()
        .find(|g| g.name() == s)
        .ok_or_else(|| Error::usage(format!("unknown generator {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub norm: NormSpec,
    pub generator: Generator,
    pub sizes: Vec<u64>,
    pub trials: u32,
    pub seed: u64,
    pub theorem: Theorem,
}

impl ExperimentConfig {
    pub fn field(&self) -> &FieldSpec {
        self.norm.space().field()
    }

    pub fn dim(&self) -> usize {
        self.norm.space().dim()
    }

    /// Number of points sizes are measured against: q^{2d} or q^d.
    pub fn universe(&self) -> u64 {
        let n = self.norm.space().size() as u64;
        if self.theorem.is_two_parameter() {
            n * n
        } else {
            n
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::usage("trials must be at least 1"));
        }
        if self.theorem.planar_only() && self.dim() != 2 {
            return Err(Error::usage(format!(
                "{} requires d = 2",
                self.theorem.name()
            )));
        }
        if self.theorem.prime_only() && self.field().degree() != 1 {
            return Err(Error::usage(format!(
                "{} is stated over prime fields",
                self.theorem.name()
            )));
        }
        let universe = self.universe();
        if universe > MAX_SAMPLE_UNIVERSE {
            return Err(Error::capacity(
                "sampling universe",
                universe as u128,
                MAX_SAMPLE_UNIVERSE as u128,
            ));
        }
        if let Some(&bad) = self.sizes.iter().find(|&&s| s > universe) {
            return Err(Error::capacity(
                "requested size",
                bad as u128,
                universe as u128,
            ));
        }
        Ok(())
    }
}

/// The random source for one global trial id.
pub fn trial_rng(seed: u64, trial: u64) -> Xoshiro256StarStar {
    let mut mix = SplitMix64::seed_from_u64(seed ^ trial);
    Xoshiro256StarStar::seed_from_u64(mix.next_u64())
}

/// Uniform integer in `[0, n)` by rejection; `n > 0`.
pub fn below(rng: &mut impl RngCore, n: u64) -> u64 {
    debug_assert!(n > 0);
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let r = rng.next_u64();
        if r < zone {
            return r % n;
        }
    }
}

/// `size` distinct values of `[0, universe)`, sorted. Above half the
/// universe the complement is sampled instead.
pub fn sample_distinct(rng: &mut impl RngCore, universe: u64, size: u64) -> Result<Vec<u64>> {
    if size > universe {
        return Err(Error::capacity(
            "requested size",
            size as u128,
            universe as u128,
        ));
    }
    if universe > MAX_SAMPLE_UNIVERSE {
        return Err(Error::capacity(
            "sampling universe",
            universe as u128,
            MAX_SAMPLE_UNIVERSE as u128,
        ));
    }
    let complement = size * 2 > universe;
    let draws = if complement { universe - size } else { size };
    let mut marked = vec![false; universe as usize];
    let mut taken = 0;
    while taken < draws {
        let r = below(rng, universe) as usize;
        if !marked[r] {
            marked[r] = true;
            taken += 1;
        }
    }
    Ok((0..universe)
        .filter(|&i| marked[i as usize] != complement)
        .collect())
}

/// Random permutation of `0..n` (Fisher–Yates, drawing from the top).
fn permutation(rng: &mut impl RngCore, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        v.swap(i, j);
    }
    v
}

/// Generated input for one trial.
#[derive(Clone, Debug)]
pub enum Sample {
    Sets(PointSet, PointSet),
    Pairs(PairSet),
}

fn sample_set(
    rng: &mut impl RngCore,
    generator: Generator,
    norm: &NormSpec,
    size: u64,
) -> Result<Vec<u64>> {
    let space = norm.space();
    let q = space.field().order() as u64;
    let d = space.dim() as u32;
    let universe = space.size() as u64;
    match generator {
        Generator::UniformRandom => sample_distinct(rng, universe, size),
        Generator::Product => {
            // grid S^d with |S| = ⌈size^{1/d}⌉
            let mut m = 0u64;
            while m < q && m.pow(d) < size {
                m += 1;
            }
            let side = sample_distinct(rng, q, m)?;
            let mut pts = vec![0u64];
            for _ in 0..d {
                pts = pts
                    .iter()
                    .flat_map(|&p| side.iter().map(move |&c| p * q + c))
                    .collect();
            }
            if m == 0 {
                pts.clear();
            }
            pts.sort_unstable();
            Ok(pts)
        }
        Generator::SphereUnion => {
            let labels = sphere_labels(norm);
            let order = permutation(rng, q as usize);
            let mut chosen = vec![false; q as usize];
            let mut count = 0u64;
            let mut sizes = vec![0u64; q as usize];
            for l in &labels {
                sizes[l.index() as usize] += 1;
            }
            for r in order {
                if count >= size {
                    break;
                }
                chosen[r] = true;
                count += sizes[r];
            }
            Ok((0..universe)
                .filter(|&w| chosen[labels[w as usize].index() as usize])
                .collect())
        }
        Generator::Subspace => {
            // first m coordinates free, the rest zero
            let mut m = 0u32;
            while q.pow(m) < size {
                m += 1;
            }
            let sub = q.pow(m);
            let shift = q.pow(d - m);
            Ok(sample_distinct(rng, sub, size)?
                .into_iter()
                .map(|i| i * shift)
                .collect())
        }
    }
}

fn to_points(space: &Space, idx: Vec<u64>) -> Result<PointSet> {
    PointSet::from_indices(space, idx.into_iter().map(|i| i as u32).collect())
}

/// The doubled space F_q^{2d} with norm coefficients (a, a), used by the
/// pair-set sphere-union and subspace generators.
fn doubled_norm(norm: &NormSpec) -> Result<NormSpec> {
    let space = norm.space();
    let wide = Space::new(space.field(), 2 * space.dim())?;
    let mut coeffs = norm.coeffs().to_vec();
    coeffs.extend_from_slice(norm.coeffs());
    NormSpec::new(&wide, norm.exponent(), &coeffs)
}

/// Deterministic input for global trial id `trial` at target `size`.
///
/// Sizes are exact for uniform-random and subspace. Product and
/// sphere-union round up to the next attainable size.
pub fn generate(config: &ExperimentConfig, size: u64, trial: u64) -> Result<Sample> {
    let space = config.norm.space();
    let mut rng = trial_rng(config.seed, trial);
    if config.theorem.is_two_parameter() {
        let n = space.size() as u64;
        if size > n * n {
            return Err(Error::capacity(
                "requested size",
                size as u128,
                (n * n) as u128,
            ));
        }
        let pairs: Vec<(u32, u32)> = match config.generator {
            Generator::Product => {
                let mut a = 0u64;
                while a < n && a * a < size {
                    a += 1;
                }
                let b = if a == 0 { 0 } else { size.div_ceil(a).min(n) };
                let sa = sample_distinct(&mut rng, n, a)?;
                let sb = sample_distinct(&mut rng, n, b)?;
                sa.iter()
                    .flat_map(|&x| sb.iter().map(move |&y| (x as u32, y as u32)))
                    .collect()
            }
            g => {
                let wide = doubled_norm(&config.norm)?;
                sample_set(&mut rng, g, &wide, size)?
                    .into_iter()
                    .map(|i| ((i / n) as u32, (i % n) as u32))
                    .collect()
            }
        };
        Ok(Sample::Pairs(PairSet::from_index_pairs(space, pairs)?))
    } else {
        if size > space.size() as u64 {
            return Err(Error::capacity(
                "requested size",
                size as u128,
                space.size() as u128,
            ));
        }
        let x = sample_set(&mut rng, config.generator, &config.norm, size)?;
        let y = sample_set(&mut rng, config.generator, &config.norm, size)?;
        Ok(Sample::Sets(to_points(space, x)?, to_points(space, y)?))
    }
}

/// One (size, trial) measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub trial: u64,
    pub size: u64,
    pub theorem: Theorem,
    pub generator: Generator,
    pub q: u32,
    pub d: usize,
    pub s: u32,
    /// `|E|` for pair-set statements.
    pub e_size: Option<u64>,
    pub x_size: Option<u64>,
    pub y_size: Option<u64>,
    pub z_size: Option<u64>,
    /// `|Δ_{d,d}(E)|` or `|Δ(X, Y)|`.
    pub delta: u64,
    /// `delta / q²` or `delta / q`.
    pub ratio: f64,
    pub quadruples: Option<u128>,
    pub triples: Option<u128>,
    pub union_triples: Option<u128>,
    pub cs_lower: Option<Ratio<u128>>,
    pub triple_bound_ratio: Option<f64>,
    /// Whether the input size reaches the statement's threshold.
    pub above_threshold: bool,
    /// Exact conclusion `|Δ_{d,d}| = q²`; only thm11 has one.
    pub threshold_met: Option<bool>,
    /// Wall time of the trial; 0 where no clock is available (wasm32).
    pub elapsed_ms: f64,
}

impl SweepRow {
    fn chain(&self) -> Option<ChainReport> {
        Some(ChainReport {
            n_x: self.x_size?,
            n_y: self.y_size?,
            n_z: self.z_size?,
            delta: self.delta,
            quadruples: self.quadruples?,
            triples: self.triples?,
            union_triples: self.union_triples?,
            cs_lower: self.cs_lower,
            triple_bound: None,
            triple_bound_ratio: self.triple_bound_ratio,
        })
    }
}

/// Wall-clock timer; `std::time::Instant` panics on wasm32-unknown-unknown.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed_ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}

fn run_trial(config: &ExperimentConfig, size: u64, trial: u64, thr: f64) -> Result<SweepRow> {
    let start = Stopwatch::start();
    let q = config.field().order();
    let mut row = SweepRow {
        trial,
        size,
        theorem: config.theorem,
        generator: config.generator,
        q,
        d: config.dim(),
        s: config.norm.exponent(),
        e_size: None,
        x_size: None,
        y_size: None,
        z_size: None,
        delta: 0,
        ratio: 0.0,
        quadruples: None,
        triples: None,
        union_triples: None,
        cs_lower: None,
        triple_bound_ratio: None,
        above_threshold: false,
        threshold_met: None,
        elapsed_ms: 0.0,
    };
    match generate(config, size, trial)? {
        Sample::Pairs(e) => {
            let delta = two_param_distance_set(&e, &config.norm)?.len() as u64;
            row.e_size = Some(e.len() as u64);
            row.delta = delta;
            row.ratio = delta as f64 / (q as f64 * q as f64);
            row.above_threshold = e.len() as f64 >= thr;
            if config.theorem == Theorem::ExactPairs {
                row.threshold_met = Some(delta == q as u64 * q as u64);
            }
        }
        Sample::Sets(x, y) => {
            let report = chain_report(&x, &y, &config.norm)?;
            debug_assert_eq!(
                report.delta,
                distance_set(&x, &y, &config.norm)?.len() as u64
            );
            row.x_size = Some(report.n_x);
            row.y_size = Some(report.n_y);
            row.z_size = Some(report.n_z);
            row.delta = report.delta;
            row.ratio = report.delta as f64 / q as f64;
            row.quadruples = Some(report.quadruples);
            row.triples = Some(report.triples);
            row.union_triples = Some(report.union_triples);
            row.cs_lower = report.cs_lower;
            row.triple_bound_ratio = report.triple_bound_ratio;
            row.above_threshold = match config.theorem {
                Theorem::ProductSets => (report.n_x * report.n_y) as f64 >= thr,
                _ => report.n_x.min(report.n_y) as f64 >= thr,
            };
        }
    }
    row.elapsed_ms = start.elapsed_ms();
    Ok(row)
}

/// One row per (size, trial), ordered by size index then trial.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let thr = threshold(config.theorem, config.field().order() as u64, config.dim())?;
    let trials = config.trials as u64;
    let jobs: Vec<(u64, u64)> = config
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(si, &size)| (0..trials).map(move |t| (size, si as u64 * trials + t)))
        .collect();

    #[cfg(feature = "parallel")]
    let rows = {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|&(size, id)| run_trial(config, size, id, thr))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows = jobs
        .iter()
        .map(|&(size, id)| run_trial(config, size, id, thr))
        .collect::<Result<Vec<_>>>()?;

    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
    PlotData,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            "plot-data" => Ok(OutputFormat::PlotData),
            _ => Err(Error::usage(format!("unknown format {s:?}"))),
        }
    }
}

pub const CSV_HEADER: &str = "trial,size,theorem,generator,q,d,s,e_size,x_size,y_size,z_size,\
delta,ratio,quadruples,triples,union_triples,cs_lower,triple_bound_ratio,above_threshold,threshold_met";

/// `x` rounded to 6 significant digits, in plain decimal notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonRow<'a> {
    trial: u64,
    size: u64,
    theorem: &'a str,
    generator: &'a str,
    q: u32,
    d: usize,
    s: u32,
    e_size: Option<u64>,
    x_size: Option<u64>,
    y_size: Option<u64>,
    z_size: Option<u64>,
    delta: u64,
    ratio: String,
    quadruples: Option<String>,
    triples: Option<String>,
    union_triples: Option<String>,
    cs_lower: Option<String>,
    triple_bound_ratio: Option<String>,
    above_threshold: bool,
    threshold_met: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<String>,
}

/// Renders rows. Timing is excluded unless `timing` is set, so the output
/// is a pure function of the configuration. Every row carrying counts has
/// its inequality chain re-checked first.
pub fn emit(rows: &[SweepRow], format: OutputFormat, timing: bool) -> Result<String> {
    for row in rows {
        if let Some(chain) = row.chain() {
            chain.check()?;
        }
    }
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str(CSV_HEADER);
            if timing {
                out.push_str(",elapsed_ms");
            }
            out.push('\n');
            for r in rows {
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.trial,
                    r.size,
                    r.theorem.name(),
                    r.generator.name(),
                    r.q,
                    r.d,
                    r.s,
                    opt(&r.e_size),
                    opt(&r.x_size),
                    opt(&r.y_size),
                    opt(&r.z_size),
                    r.delta,
                    sig6(r.ratio),
                    opt(&r.quadruples),
                    opt(&r.triples),
                    opt(&r.union_triples),
                    opt(&r.cs_lower),
                    r.triple_bound_ratio.map(sig6).unwrap_or_default(),
                    r.above_threshold,
                    opt(&r.threshold_met),
                );
                if timing {
                    let _ = write!(out, ",{:.3}", r.elapsed_ms);
                }
                out.push('\n');
            }
        }
        OutputFormat::JsonLines => {
            for r in rows {
                let j = JsonRow {
                    trial: r.trial,
                    size: r.size,
                    theorem: r.theorem.name(),
                    generator: r.generator.name(),
                    q: r.q,
                    d: r.d,
                    s: r.s,
                    e_size: r.e_size,
                    x_size: r.x_size,
                    y_size: r.y_size,
                    z_size: r.z_size,
                    delta: r.delta,
                    ratio: sig6(r.ratio),
                    quadruples: r.quadruples.map(|v| v.to_string()),
                    triples: r.triples.map(|v| v.to_string()),
                    union_triples: r.union_triples.map(|v| v.to_string()),
                    cs_lower: r.cs_lower.map(|v| v.to_string()),
                    triple_bound_ratio: r.triple_bound_ratio.map(sig6),
                    above_threshold: r.above_threshold,
                    threshold_met: r.threshold_met,
                    elapsed_ms: timing.then(|| format!("{:.3}", r.elapsed_ms)),
                };
                let line = serde_json::to_string(&j)
                    .map_err(|e| Error::consistency(format!("json encoding failed: {e}")))?;
                out.push_str(&line);
                out.push('\n');
            }
        }
        OutputFormat::PlotData => {
            // size -> (sum, min, count), in first-appearance order
            let mut order = Vec::new();
            let mut agg: BTreeMap<u64, (u64, u64, u64)> = BTreeMap::new();
            for r in rows {
                let e = agg.entry(r.size).or_insert_with(|| {
                    order.push(r.size);
                    (0, u64::MAX, 0)
                });
                e.0 += r.delta;
                e.1 = e.1.min(r.delta);
                e.2 += 1;
            }
            for size in order {
                let (sum, min, n) = agg[&size];
                let _ = writeln!(out, "{size} {} {min}", sig6(sum as f64 / n as f64));
            }
        }
    }
    Ok(out)
}
