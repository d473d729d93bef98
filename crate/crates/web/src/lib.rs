//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function takes plain parameters and returns a JSON string.
//! The `*_view` functions hold the logic and are usable from Rust.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ffdist::counting::{chain_report, spectrum_fft};
use ffdist::experiment::{
    generate, run_sweep, sample_distinct, threshold, trial_rng, ExperimentConfig, Generator,
    Sample, Theorem,
};
use ffdist::geometry::two_param_occupancy;
use ffdist::proof::{certify, default_tau};
use ffdist::{Error, FieldSpec, NormSpec, PointSet, Result, Space};

fn usual_norm(field: &str, dim: usize, s: u32) -> Result<NormSpec> {
    let f: FieldSpec = field.parse()?;
    let space = Space::new(&f, dim)?;
    NormSpec::new(&space, s, &vec![f.one(); dim])
}

fn labels(f: &FieldSpec) -> Vec<String> {
    f.elements().map(|e| f.encode(e)).collect()
}

#[derive(Debug, Serialize)]
pub struct PairGrid {
    pub q: u32,
    pub labels: Vec<String>,
    pub e_size: usize,
    /// Row-major over (v1, v2): 0 absent, 1 attained, 2 attained and certified.
    pub cells: Vec<u8>,
    pub attained: usize,
    pub certified: usize,
    pub tau: u64,
    pub heavy: usize,
    pub threshold: f64,
}

/// Two-parameter distance set of a generated E, with the certified part marked.
pub fn pair_grid_view(
    field: &str,
    dim: usize,
    generator: &str,
    size: u64,
    seed: u64,
) -> Result<PairGrid> {
    let norm = usual_norm(field, dim, 2)?;
    let f = norm.space().field().clone();
    let q = f.order();
    let config = ExperimentConfig {
        norm: norm.clone(),
        generator: generator.parse::<Generator>()?,
        sizes: vec![size],
        trials: 1,
        seed,
        theorem: Theorem::NormPairs,
    };
    config.validate()?;
    let Sample::Pairs(e) = generate(&config, size, 0)? else {
        return Err(Error::consistency("pair generator returned sets"));
    };
    let occ = two_param_occupancy(&e, &norm)?;
    let tau = default_tau(q as u64, dim as u32, 2.into())?;
    let cert = certify(&e, &norm, tau)?;
    let mut cells: Vec<u8> = occ.iter().map(|&b| b as u8).collect();
    for &(v, u) in cert.certified_pairs() {
        cells[(v.index() * q + u.index()) as usize] = 2;
    }
    Ok(PairGrid {
        q,
        labels: labels(&f),
        e_size: e.len(),
        attained: occ.iter().filter(|&&b| b).count(),
        certified: cert.certified_pairs().len(),
        cells,
        tau,
        heavy: cert.heavy_len(),
        threshold: threshold(Theorem::ExactPairs, q as u64, dim)?,
    })
}

#[derive(Debug, Serialize)]
pub struct SpectrumView {
    pub q: u32,
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub delta: u64,
    pub quadruples: String,
    pub triples: String,
    pub union_triples: String,
    pub cs_lower: Option<String>,
    pub triple_bound_ratio: Option<f64>,
}

/// Distance spectrum and counting chain of random X, Y.
pub fn spectrum_view(
    field: &str,
    dim: usize,
    s: u32,
    nx: u64,
    ny: u64,
    seed: u64,
) -> Result<SpectrumView> {
    let norm = usual_norm(field, dim, s)?;
    let space = norm.space();
    let mut rng = trial_rng(seed, 0);
    let mut pick = |size: u64| -> Result<PointSet> {
        let idx = sample_distinct(&mut rng, space.size() as u64, size)?;
        PointSet::from_indices(space, idx.into_iter().map(|i| i as u32).collect())
    };
    let x = pick(nx)?;
    let y = pick(ny)?;
    let spec = spectrum_fft(&x, &y, &norm)?;
    let r = chain_report(&x, &y, &norm)?;
    Ok(SpectrumView {
        q: space.field().order(),
        labels: labels(space.field()),
        counts: spec.counts().to_vec(),
        delta: r.delta,
        quadruples: r.quadruples.to_string(),
        triples: r.triples.to_string(),
        union_triples: r.union_triples.to_string(),
        cs_lower: r.cs_lower.map(|c| c.to_string()),
        triple_bound_ratio: r.triple_bound_ratio,
    })
}

#[derive(Debug, Serialize, PartialEq)]
pub struct CurvePoint {
    pub size: u64,
    pub mean_ratio: f64,
    pub min_ratio: f64,
    /// Fraction of trials with the full range attained (ratio 1).
    pub full: f64,
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub theorem: String,
    pub threshold: f64,
    pub points: Vec<CurvePoint>,
}

/// Measured |Δ|/q² (pair statements) or |Δ|/q (set statements) against size.
pub fn curve_view(
    field: &str,
    dim: usize,
    theorem: &str,
    sizes: &[u64],
    trials: u32,
    seed: u64,
) -> Result<Curve> {
    let theorem: Theorem = theorem.parse()?;
    let norm = usual_norm(field, dim, 2)?;
    let q = norm.space().field().order() as u64;
    let config = ExperimentConfig {
        norm,
        generator: Generator::UniformRandom,
        sizes: sizes.to_vec(),
        trials,
        seed,
        theorem,
    };
    let rows = run_sweep(&config)?;
    let points = rows
        .chunks(trials as usize)
        .map(|chunk| {
            let n = chunk.len() as f64;
            CurvePoint {
                size: chunk[0].size,
                mean_ratio: chunk.iter().map(|r| r.ratio).sum::<f64>() / n,
                min_ratio: chunk.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
                full: chunk.iter().filter(|r| r.ratio >= 1.0).count() as f64 / n,
            }
        })
        .collect();
    Ok(Curve {
        theorem: theorem.name().to_string(),
        threshold: threshold(theorem, q, config.dim())?,
        points,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn pair_grid(
    field: &str,
    dim: usize,
    generator: &str,
    size: u32,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(pair_grid_view(
        field,
        dim,
        generator,
        size as u64,
        seed as u64,
    ))
}

#[wasm_bindgen]
pub fn spectrum(
    field: &str,
    dim: usize,
    s: u32,
    nx: u32,
    ny: u32,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(spectrum_view(
        field,
        dim,
        s,
        nx as u64,
        ny as u64,
        seed as u64,
    ))
}

/// `sizes` is a comma-separated list.
#[wasm_bindgen]
pub fn curve(
    field: &str,
    dim: usize,
    theorem: &str,
    sizes: &str,
    trials: u32,
    seed: u32,
) -> std::result::Result<String, JsError> {
    let sizes: Result<Vec<u64>> = sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::usage(format!("bad size {s:?}")))
        })
        .collect();
    to_js(sizes.and_then(|s| curve_view(field, dim, theorem, &s, trials, seed as u64)))
}
