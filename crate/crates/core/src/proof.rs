//! Heavy-fiber extraction and witness composition.
//!
//! Given E ⊆ F_q^d × F_q^d and a threshold τ, the base points y whose fibers
//! `E_y = {x : (x, y) ∈ E}` have more than τ elements form the heavy set Y.
//! For each distance `u ∈ Δ^s(Y, Y)` a witness pair (z, t) of heavy points
//! with `‖z − t‖_s = u` is fixed, and every `v ∈ Δ^s(E_z, E_t)` yields a
//! certified member `(v, u)` of Δ_{d,d}^s(E): if `‖x − y‖_s = v` with
//! `x ∈ E_z`, `y ∈ E_t`, then `(x, z), (y, t) ∈ E` realize `(v, u)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::geometry::{distance_set, fibers, two_param_distance_set, NormSpec, PairSet, PointSet};

/// Heavy base points and all fiber sizes for one threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyFiberDecomposition {
    pub tau: u64,
    pub heavy: PointSet,
    /// `|E_y|` for every y with a nonempty fiber.
    pub fiber_sizes: BTreeMap<u32, u64>,
    pub total: u64,
    /// `max(0, ⌈(|E| − τ q^d) / q^d⌉)`, which `|heavy|` always meets.
    pub pigeonhole_bound: u64,
}

/// Splits the base points of E by fiber size and checks the counting step
/// `|E| ≤ q^d |heavy| + τ q^d`.
pub fn heavy_fibers(e: &PairSet, tau: u64) -> Result<HeavyFiberDecomposition> {
    let space = e.space();
    let mut fiber_sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &(_, y) in e.pairs() {
        *fiber_sizes.entry(y).or_default() += 1;
    }
    let heavy_idx: Vec<u32> = fiber_sizes
        .iter()
        .filter(|(_, &n)| n > tau)
        .map(|(&y, _)| y)
        .collect();
    let heavy = PointSet::from_indices(space, heavy_idx)?;

    let total = e.len() as u64;
    let qd = space.size() as u128;
    let slack = tau as u128 * qd;
    let pigeonhole_bound = (total as u128).saturating_sub(slack).div_ceil(qd) as u64;

    if fiber_sizes.values().sum::<u64>() != total {
        return Err(Error::consistency("fiber sizes do not sum to |E|"));
    }
    if total as u128 > qd * heavy.len() as u128 + slack {
        return Err(Error::consistency(format!(
            "pigeonhole violated: |E| = {total} > q^d·|heavy| + τ·q^d = {}",
            qd * heavy.len() as u128 + slack
        )));
    }
    if (heavy.len() as u64) < pigeonhole_bound {
        return Err(Error::consistency(
            "heavy set smaller than the pigeonhole bound",
        ));
    }
    Ok(HeavyFiberDecomposition {
        tau,
        heavy,
        fiber_sizes,
        total,
        pigeonhole_bound,
    })
}

/// `⌊(C/2) · q^{(d+1)/2}⌋`, computed exactly as `⌊√((C/2)² q^{d+1})⌋`.
pub fn default_tau(q: u64, d: u32, c: Ratio<u64>) -> Result<u64> {
    if *c.numer() == 0 {
        return Err(Error::usage("the constant C must be positive"));
    }
    let overflow = || Error::capacity("(C/2)² q^{d+1}", u128::MAX, u128::MAX);
    let num = (*c.numer() as u128)
        .checked_pow(2)
        .and_then(|n2| {
            (q as u128)
                .checked_pow(d + 1)
                .and_then(|qp| n2.checked_mul(qp))
        })
        .ok_or_else(overflow)?;
    let den = (*c.denom() as u128)
        .checked_pow(2)
        .and_then(|d2| d2.checked_mul(4))
        .ok_or_else(overflow)?;
    Ok((num / den).isqrt() as u64)
}

/// How many witness pairs back each distance u of the heavy set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WitnessMode {
    /// One lexicographically smallest (z, t) per u.
    #[default]
    Single,
    /// Every heavy pair (z, t), grouped by u.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub u: Elem,
    pub z: u32,
    pub t: u32,
    /// `Δ^s(E_z, E_t)`, sorted.
    pub values_v: Vec<Elem>,
}

/// Certified subset of Δ_{d,d}^s(E) with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    norm: NormSpec,
    tau: u64,
    mode: WitnessMode,
    source_len: usize,
    source_digest: u64,
    heavy_len: usize,
    entries: Vec<CertificateEntry>,
    certified: Vec<(Elem, Elem)>,
}

/// FNV-1a over the sorted index pairs; identifies the source set.
fn digest(e: &PairSet) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &(x, y) in e.pairs() {
        for b in x.to_le_bytes().into_iter().chain(y.to_le_bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl Certificate {
    pub fn entries(&self) -> &[CertificateEntry] {
        &self.entries
    }

    /// Sorted `(v, u)` pairs.
    pub fn certified_pairs(&self) -> &[(Elem, Elem)] {
        &self.certified
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn mode(&self) -> WitnessMode {
        self.mode
    }

    pub fn heavy_len(&self) -> usize {
        self.heavy_len
    }

    /// Number of distinct u values covered.
    pub fn distinct_u(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.u)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Smallest `|Δ^s(E_z, E_t)|` over entries.
    pub fn min_width(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.values_v.len()).min()
    }

    fn check_source(&self, e: &PairSet, n: &NormSpec) -> Result<()> {
        if &self.norm != n || self.source_len != e.len() || self.source_digest != digest(e) {
            return Err(Error::usage(
                "certificate was produced from a different pair set or norm",
            ));
        }
        Ok(())
    }

    /// Line-oriented text: a `#` header, then one tab-separated line per
    /// entry holding u, z, t and the space-separated v-list.
    pub fn to_text(&self) -> String {
        let space = self.norm.space();
        let f = space.field();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# certificate tau={} mode={} heavy={} entries={} certified={}",
            self.tau,
            match self.mode {
                WitnessMode::Single => "single",
                WitnessMode::Exhaustive => "exhaustive",
            },
            self.heavy_len,
            self.entries.len(),
            self.certified.len()
        );
        for entry in &self.entries {
            let vs: Vec<String> = entry.values_v.iter().map(|&v| f.encode(v)).collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                f.encode(entry.u),
                space.encode_vector(&space.vector(entry.z)),
                space.encode_vector(&space.vector(entry.t)),
                vs.join(" ")
            );
        }
        out
    }
}

/// Lexicographically smallest witness (z, t) for every u, by point index.
fn single_witnesses(heavy: &PointSet, n: &NormSpec) -> Vec<(Elem, u32, u32)> {
    let q = n.space().field().order() as usize;
    let mut seen = vec![false; q];
    let mut out = Vec::new();
    'outer: for i in 0..heavy.len() {
        for j in 0..heavy.len() {
            let u = n.eval_coords(heavy.point(i), heavy.point(j));
            if !seen[u.index() as usize] {
                seen[u.index() as usize] = true;
                out.push((u, heavy.indices()[i], heavy.indices()[j]));
                if out.len() == q {
                    break 'outer;
                }
            }
        }
    }
    out.sort_by_key(|&(u, z, t)| (u, z, t));
    out
}

fn all_witnesses(heavy: &PointSet, n: &NormSpec) -> Vec<(Elem, u32, u32)> {
    let mut out = Vec::with_capacity(heavy.len() * heavy.len());
    for i in 0..heavy.len() {
        for j in 0..heavy.len() {
            let u = n.eval_coords(heavy.point(i), heavy.point(j));
            out.push((u, heavy.indices()[i], heavy.indices()[j]));
        }
    }
    out.sort_by_key(|&(u, z, t)| (u, z, t));
    out
}

pub fn certify(e: &PairSet, n: &NormSpec, tau: u64) -> Result<Certificate> {
    certify_with(e, n, tau, WitnessMode::Single)
}

pub fn certify_with(e: &PairSet, n: &NormSpec, tau: u64, mode: WitnessMode) -> Result<Certificate> {
    if e.space() != n.space() {
        return Err(Error::usage("pair set and norm live in different spaces"));
    }
    let decomposition = heavy_fibers(e, tau)?;
    let heavy = &decomposition.heavy;
    let fib = fibers(e);
    let witnesses = match mode {
        WitnessMode::Single => single_witnesses(heavy, n),
        WitnessMode::Exhaustive => all_witnesses(heavy, n),
    };

    let build = |&(u, z, t): &(Elem, u32, u32)| -> Result<CertificateEntry> {
        let values_v = distance_set(&fib[&z], &fib[&t], n)?;
        Ok(CertificateEntry { u, z, t, values_v })
    };
    #[cfg(feature = "parallel")]
    let entries = {
        use rayon::prelude::*;
        witnesses
            .par_iter()
            .map(build)
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let entries = witnesses.iter().map(build).collect::<Result<Vec<_>>>()?;

    let certified: BTreeSet<(Elem, Elem)> = entries
        .iter()
        .flat_map(|en| en.values_v.iter().map(move |&v| (v, en.u)))
        .collect();

    Ok(Certificate {
        norm: n.clone(),
        tau,
        mode,
        source_len: e.len(),
        source_digest: digest(e),
        heavy_len: heavy.len(),
        entries,
        certified: certified.into_iter().collect(),
    })
}

/// Explicit witnesses `((x, z), (y, t))` in E for `(v, u)` through the
/// given entry, as point indices `(x, y)`.
pub fn find_witness(
    e: &PairSet,
    n: &NormSpec,
    entry: &CertificateEntry,
    v: Elem,
) -> Option<(u32, u32)> {
    let fib = fibers(e);
    let (ez, et) = (fib.get(&entry.z)?, fib.get(&entry.t)?);
    for i in 0..ez.len() {
        for j in 0..et.len() {
            if n.eval_coords(ez.point(i), et.point(j)) == v {
                return Some((ez.indices()[i], et.indices()[j]));
            }
        }
    }
    None
}

/// Re-checks every entry against E: heavy witnesses, `‖z − t‖_s = u`,
/// `values_v = Δ^s(E_z, E_t)`, and an explicit witness pair in E for
/// every certified `(v, u)`.
pub fn verify(cert: &Certificate, e: &PairSet, n: &NormSpec) -> Result<()> {
    cert.check_source(e, n)?;
    let space = n.space();
    let decomposition = heavy_fibers(e, cert.tau)?;
    let fib = fibers(e);
    let mut certified = BTreeSet::new();
    for entry in &cert.entries {
        for w in [entry.z, entry.t] {
            if !decomposition.heavy.contains_index(w) {
                return Err(Error::consistency(format!(
                    "witness base point {w} is not heavy"
                )));
            }
        }
        let u = n.eval_coords(
            space.vector(entry.z).coords(),
            space.vector(entry.t).coords(),
        );
        if u != entry.u {
            return Err(Error::consistency("witness pair does not realize u"));
        }
        if distance_set(&fib[&entry.z], &fib[&entry.t], n)? != entry.values_v {
            return Err(Error::consistency("values_v differs from Δ(E_z, E_t)"));
        }
        for &v in &entry.values_v {
            let (x, y) = find_witness(e, n, entry, v)
                .ok_or_else(|| Error::consistency("certified pair has no witness"))?;
            if !e.contains_indices(x, entry.z) || !e.contains_indices(y, entry.t) {
                return Err(Error::consistency("witness points are not in E"));
            }
            certified.insert((v, entry.u));
        }
    }
    if certified.into_iter().collect::<Vec<_>>() != cert.certified {
        return Err(Error::consistency(
            "certified pairs differ from entry union",
        ));
    }
    Ok(())
}

/// `|certified| / |Δ_{d,d}^s(E)|`; 1 when E is empty.
pub fn coverage_ratio(cert: &Certificate, e: &PairSet, n: &NormSpec) -> Result<Ratio<u64>> {
    cert.check_source(e, n)?;
    let full = two_param_distance_set(e, n)?;
    if full.is_empty() {
        return Ok(Ratio::from_integer(1));
    }
    Ok(Ratio::new(cert.certified.len() as u64, full.len() as u64))
}
