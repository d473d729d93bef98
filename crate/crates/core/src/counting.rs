//! Distance spectra and the exact counts behind the isosceles-triple
//! argument: the quadruple count Q, the bipartite triple count T, and the
//! union triple count T′ over Z = X ∪ Y.
//!
//! The spectrum has two independent routes. [`spectrum_naive`] enumerates
//! X × Y. [`spectrum_fft`] cross-correlates the indicators of X and Y over
//! the additive group (F_q^d, +) ≅ (Z_p)^{kd} with floating-point DFTs of
//! length p along each of the kd axes, rounds, and bins the difference
//! counts by sphere.

use num_rational::Ratio;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::geometry::{sphere_labels, NormSpec, PointSet};

/// Largest q^d accepted by the transform path.
pub const MAX_TRANSFORM_POINTS: u32 = 1 << 20;

/// Largest distance of a rounded transform output from the nearest integer.
pub const ROUNDING_GUARD: f64 = 0.25;

/// Multiplicities `r(u) = #{(x, y) ∈ X × Y : ‖x − y‖_s = u}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSpectrum {
    field: FieldSpec,
    counts: Vec<u64>,
    n_x: u64,
    n_y: u64,
}

impl DistanceSpectrum {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Counts indexed by the canonical index of `u`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, u: Elem) -> u64 {
        self.counts[u.index() as usize]
    }

    pub fn n_x(&self) -> u64 {
        self.n_x
    }

    pub fn n_y(&self) -> u64 {
        self.n_y
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `|Δ^s(X, Y)|`.
    pub fn support_size(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    pub fn support(&self) -> Vec<Elem> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| Elem::from_index(i as u32))
            .collect()
    }
}

fn check_inputs(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<()> {
    if x.space() != n.space() || y.space() != n.space() {
        return Err(Error::usage("point sets and norm live in different spaces"));
    }
    Ok(())
}

fn histogram(apex: &[Elem], y: &PointSet, n: &NormSpec, hist: &mut [u64]) {
    for j in 0..y.len() {
        hist[n.eval_coords(apex, y.point(j)).index() as usize] += 1;
    }
}

/// Spectrum by direct enumeration of X × Y.
pub fn spectrum_naive(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<DistanceSpectrum> {
    check_inputs(x, y, n)?;
    let q = n.space().field().order() as usize;
    let per_apex = |i: usize| {
        let mut h = vec![0u64; q];
        histogram(x.point(i), y, n, &mut h);
        h
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(u, v)| *u += v);
        a
    };

    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        (0..x.len())
            .into_par_iter()
            .map(per_apex)
            .reduce(|| vec![0u64; q], merge)
    };
    #[cfg(not(feature = "parallel"))]
    let counts = (0..x.len()).map(per_apex).fold(vec![0u64; q], merge);

    Ok(DistanceSpectrum {
        field: n.space().field().clone(),
        counts,
        n_x: x.len() as u64,
        n_y: y.len() as u64,
    })
}

/// Applies a length-p DFT along each base-p digit axis of `data`.
fn transform_axes(data: &mut [Complex64], p: usize, axes: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(p)
    } else {
        planner.plan_fft_forward(p)
    };
    let mut line = vec![Complex64::new(0.0, 0.0); p];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let len = data.len();
    let mut stride = 1usize;
    for _ in 0..axes {
        let block = stride * p;
        for base in (0..len).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    data[start + t * stride] = *v;
                }
            }
        }
        stride = block;
    }
}

/// Difference counts `c(w) = #{(x, y) ∈ X × Y : x − y = w}` for every
/// `w ∈ F_q^d`, computed with the transform and rounded.
pub fn difference_counts_fft(x: &PointSet, y: &PointSet) -> Result<Vec<u64>> {
    if x.space() != y.space() {
        return Err(Error::usage("point sets live in different spaces"));
    }
    let space = x.space();
    let size = space.size();
    if size > MAX_TRANSFORM_POINTS {
        return Err(Error::capacity(
            "transform table size q^d",
            size as u128,
            MAX_TRANSFORM_POINTS as u128,
        ));
    }
    let p = space.field().characteristic() as usize;
    let axes = space.field().degree() as usize * space.dim();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut fx = vec![zero; size as usize];
    let mut fy = vec![zero; size as usize];
    for &i in x.indices() {
        fx[i as usize] = one;
    }
    for &i in y.indices() {
        fy[i as usize] = one;
    }
    transform_axes(&mut fx, p, axes, false);
    transform_axes(&mut fy, p, axes, false);
    for (a, b) in fx.iter_mut().zip(&fy) {
        *a *= b.conj();
    }
    transform_axes(&mut fx, p, axes, true);

    let scale = size as f64;
    fx.iter()
        .enumerate()
        .map(|(w, z)| {
            let v = z.re / scale;
            let r = v.round();
            if (v - r).abs() > ROUNDING_GUARD || r < 0.0 {
                Err(Error::consistency(format!(
                    "transform output {v} at difference index {w} is not a count"
                )))
            } else {
                Ok(r as u64)
            }
        })
        .collect()
}

/// Spectrum via the group transform, binned by sphere.
pub fn spectrum_fft(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<DistanceSpectrum> {
    check_inputs(x, y, n)?;
    let diffs = difference_counts_fft(x, y)?;
    let labels = sphere_labels(n);
    let q = n.space().field().order() as usize;
    let mut counts = vec![0u64; q];
    for (c, u) in diffs.iter().zip(&labels) {
        counts[u.index() as usize] += c;
    }
    Ok(DistanceSpectrum {
        field: n.space().field().clone(),
        counts,
        n_x: x.len() as u64,
        n_y: y.len() as u64,
    })
}

/// `Q = Σ_u r(u)²`, the number of quadruples with `‖x − y‖ = ‖x′ − y′‖`.
pub fn quadruple_count(spec: &DistanceSpectrum) -> u128 {
    spec.counts.iter().map(|&c| c as u128 * c as u128).sum()
}

/// `T = #{(x, y, y′) ∈ X × Y × Y : ‖x − y‖ = ‖x − y′‖}`, as a sum over apexes
/// x of the squared per-apex histogram.
pub fn triple_count(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<u128> {
    check_inputs(x, y, n)?;
    let q = n.space().field().order() as usize;
    let per_apex = |i: usize| -> u128 {
        let mut h = vec![0u64; q];
        histogram(x.point(i), y, n, &mut h);
        h.iter().map(|&c| c as u128 * c as u128).sum()
    };

    #[cfg(feature = "parallel")]
    let total = {
        use rayon::prelude::*;
        (0..x.len()).into_par_iter().map(per_apex).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let total = (0..x.len()).map(per_apex).sum();

    Ok(total)
}

/// `Z = X ∪ Y` and `T′ = #{(a, b, c) ∈ Z³ : ‖a − b‖ = ‖a − c‖}`.
pub fn union_triple_count(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<(PointSet, u128)> {
    check_inputs(x, y, n)?;
    let z = x.union(y)?;
    let t = triple_count(&z, &z, n)?;
    Ok((z, t))
}

/// Right-hand side `|Z|³/p + p^{2/3}|Z|^{5/3} + p^{1/4}|Z|²` of the
/// isosceles-triple bound over F_p².
pub fn triple_bound(p: u32, z: usize) -> f64 {
    let (p, z) = (p as f64, z as f64);
    z.powi(3) / p + p.powf(2.0 / 3.0) * z.powf(5.0 / 3.0) + p.powf(0.25) * z.powi(2)
}

/// Whether the triple bound applies: the usual distance on F_p².
pub fn triple_bound_applies(n: &NormSpec) -> bool {
    let f = n.space().field();
    f.degree() == 1
        && n.space().dim() == 2
        && n.exponent() == 2
        && n.coeffs().iter().all(|&a| a == f.one())
}

/// Every exact quantity of the counting argument for one pair (X, Y).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub n_x: u64,
    pub n_y: u64,
    pub n_z: u64,
    /// `|Δ(X, Y)|`.
    pub delta: u64,
    pub quadruples: u128,
    pub triples: u128,
    pub union_triples: u128,
    /// `|X|²|Y|² / Q`; `None` when Q = 0 (X or Y empty).
    pub cs_lower: Option<Ratio<u128>>,
    pub triple_bound: Option<f64>,
    pub triple_bound_ratio: Option<f64>,
}

impl ChainReport {
    /// Re-checks `delta·Q ≥ |X|²|Y|²`, `Q ≤ |X|·T`, `T ≤ T′` and
    /// `Σ r(u) = |X||Y|` (via `Q ≥ |X||Y|` when nonempty).
    pub fn check(&self) -> Result<()> {
        let nx = self.n_x as u128;
        let ny = self.n_y as u128;
        if self.delta as u128 * self.quadruples < nx * nx * ny * ny {
            return Err(Error::consistency(format!(
                "|Δ|·Q = {}·{} < |X|²|Y|² = {}",
                self.delta,
                self.quadruples,
                nx * nx * ny * ny
            )));
        }
        if self.quadruples > nx * self.triples {
            return Err(Error::consistency(format!(
                "Q = {} > |X|·T = {}",
                self.quadruples,
                nx * self.triples
            )));
        }
        if self.triples > self.union_triples {
            return Err(Error::consistency(format!(
                "T = {} > T′ = {}",
                self.triples, self.union_triples
            )));
        }
        if self.n_z < self.n_x.max(self.n_y) || self.n_z > self.n_x + self.n_y {
            return Err(Error::consistency("|Z| outside [max(|X|,|Y|), |X|+|Y|]"));
        }
        Ok(())
    }
}

/// Assembles and checks the full chain for (X, Y).
pub fn chain_report(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<ChainReport> {
    let spec = spectrum_naive(x, y, n)?;
    if spec.total() != spec.n_x * spec.n_y {
        return Err(Error::consistency("spectrum total differs from |X||Y|"));
    }
    let quadruples = quadruple_count(&spec);
    let triples = triple_count(x, y, n)?;
    let (z, union_triples) = union_triple_count(x, y, n)?;
    let nx = x.len() as u128;
    let ny = y.len() as u128;
    let cs_lower = (quadruples > 0).then(|| Ratio::new(nx * nx * ny * ny, quadruples));
    let (triple_bound, triple_bound_ratio) = if triple_bound_applies(n) && !z.is_empty() {
        let rhs = triple_bound(n.space().field().characteristic(), z.len());
        (Some(rhs), Some(union_triples as f64 / rhs))
    } else {
        (None, None)
    };
    let report = ChainReport {
        n_x: x.len() as u64,
        n_y: y.len() as u64,
        n_z: z.len() as u64,
        delta: spec.support_size(),
        quadruples,
        triples,
        union_triples,
        cs_lower,
        triple_bound,
        triple_bound_ratio,
    };
    report.check()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Space, Vector};

    fn setup(p: u32, d: usize) -> (FieldSpec, Space, NormSpec) {
        let f = FieldSpec::prime(p).unwrap();
        let s = Space::new(&f, d).unwrap();
        let n = NormSpec::usual(&s);
        (f, s, n)
    }

    fn set(space: &Space, pts: &[&[i64]]) -> PointSet {
        let f = space.field();
        let vs: Vec<Vector> = pts
            .iter()
            .map(|p| Vector(p.iter().map(|&c| f.from_int(c)).collect()))
            .collect();
        PointSet::from_vectors(space, &vs).unwrap()
    }

    #[test]
    fn singleton_spectrum() {
        let (f, s, n) = setup(3, 2);
        let x = set(&s, &[&[1, 2]]);
        for spec in [
            spectrum_naive(&x, &x, &n).unwrap(),
            spectrum_fft(&x, &x, &n).unwrap(),
        ] {
            assert_eq!(spec.counts(), &[1, 0, 0]);
            assert_eq!(quadruple_count(&spec), 1);
        }
        let c = difference_counts_fft(&x, &x).unwrap();
        assert_eq!(c[0], 1);
        assert_eq!(c.iter().sum::<u64>(), 1);
        assert_eq!(triple_count(&x, &x, &n).unwrap(), 1);
        assert_eq!(union_triple_count(&x, &x, &n).unwrap().1, 1);
        let _ = f;
    }

    #[test]
    fn small_spectrum_examples() {
        let (_, s, n) = setup(3, 2);
        let x = set(&s, &[&[0, 0]]);
        let y = set(&s, &[&[0, 0], &[1, 0], &[1, 1]]);
        let spec = spectrum_naive(&x, &y, &n).unwrap();
        assert_eq!(spec.counts(), &[1, 1, 1]);
        assert_eq!(spectrum_fft(&x, &y, &n).unwrap(), spec);
        assert_eq!(quadruple_count(&spec), 3);

        let full = PointSet::full(&s);
        let spec = spectrum_fft(&full, &full, &n).unwrap();
        assert_eq!(spec.counts(), &[9, 36, 36]);
        assert_eq!(spectrum_naive(&full, &full, &n).unwrap(), spec);
    }

    #[test]
    fn triple_examples() {
        let (_, s, n) = setup(3, 2);
        let x = set(&s, &[&[0, 0]]);
        let y = set(&s, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(triple_count(&x, &y, &n).unwrap(), 5);
        let (z, tp) = union_triple_count(&y, &y, &n).unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(tp, 11);
    }

    #[test]
    fn chain_examples() {
        let (_, s, n) = setup(3, 2);
        let pt = set(&s, &[&[2, 2]]);
        let r = chain_report(&pt, &pt, &n).unwrap();
        assert_eq!(
            (r.delta, r.quadruples, r.triples, r.union_triples),
            (1, 1, 1, 1)
        );
        assert_eq!(r.cs_lower, Some(Ratio::from_integer(1)));

        let x = set(&s, &[&[0, 0]]);
        let y = set(&s, &[&[0, 0], &[1, 0], &[1, 1]]);
        let r = chain_report(&x, &y, &n).unwrap();
        assert_eq!((r.delta, r.quadruples), (3, 3));
        assert_eq!(r.cs_lower, Some(Ratio::from_integer(3)));
        assert!(r.triple_bound_ratio.is_some());
    }

    #[test]
    fn triple_bound_reported_only_for_usual_plane_norm() {
        let (_, s, n) = setup(11, 2);
        let x = set(&s, &[&[0, 0], &[1, 3], &[4, 4]]);
        let r = chain_report(&x, &x, &n).unwrap();
        let rhs = r.triple_bound.unwrap();
        assert!((rhs - triple_bound(11, 3)).abs() < 1e-12);
        assert!((r.triple_bound_ratio.unwrap() - r.union_triples as f64 / rhs).abs() < 1e-12);

        let f = s.field().clone();
        let odd = NormSpec::new(&s, 3, &[f.one(), f.one()]).unwrap();
        assert!(chain_report(&x, &x, &odd)
            .unwrap()
            .triple_bound_ratio
            .is_none());
    }

    #[test]
    fn triple_bound_value() {
        // p = z = 8: 512/8 + 8^(2/3)·8^(5/3) + 8^(1/4)·64
        let v = triple_bound(8, 8);
        assert!((v - (64.0 + 128.0 + 8f64.powf(0.25) * 64.0)).abs() < 1e-9);
    }

    #[test]
    fn empty_inputs() {
        let (_, s, n) = setup(5, 2);
        let e = PointSet::empty(&s);
        let x = set(&s, &[&[1, 1]]);
        let r = chain_report(&e, &x, &n).unwrap();
        assert_eq!((r.delta, r.quadruples, r.triples), (0, 0, 0));
        assert!(r.cs_lower.is_none());
        assert_eq!(r.union_triples, 1);
    }

    #[test]
    fn check_rejects_broken_reports() {
        let bad = ChainReport {
            n_x: 2,
            n_y: 2,
            n_z: 2,
            delta: 1,
            quadruples: 4,
            triples: 4,
            union_triples: 4,
            cs_lower: None,
            triple_bound: None,
            triple_bound_ratio: None,
        };
        assert!(matches!(bad.check(), Err(Error::Consistency(_))));
    }

    #[test]
    fn transform_capacity_error() {
        let f = FieldSpec::prime(251).unwrap();
        let s = Space::new(&f, 3).unwrap();
        let x = PointSet::empty(&s);
        let n = NormSpec::usual(&s);
        assert!(matches!(
            spectrum_fft(&x, &x, &n),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn transform_handles_extension_fields() {
        let f = FieldSpec::extension(3, &[1, 0, 1]).unwrap();
        let s = Space::new(&f, 2).unwrap();
        let n = NormSpec::usual(&s);
        let x = PointSet::from_indices(&s, vec![0, 5, 17, 40, 80]).unwrap();
        let y = PointSet::from_indices(&s, vec![1, 9, 33, 61]).unwrap();
        assert_eq!(
            spectrum_fft(&x, &y, &n).unwrap(),
            spectrum_naive(&x, &y, &n).unwrap()
        );
    }
}
