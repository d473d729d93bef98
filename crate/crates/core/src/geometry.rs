//! Vectors in F_q^d, the generalized norm `Σ a_i (x_i − y_i)^s`, point sets,
//! spheres and the one- and two-parameter distance sets.
//!
//! Points are addressed by a mixed-radix index: `x = (x_1, ..., x_d)` maps to
//! `Σ_i idx(x_i) · q^(d−i)`, so numeric index order is lexicographic order
//! of coordinates. Because each coordinate index is itself a base-p number,
//! a point index is a base-p number with k·d digits, which is what the
//! transform path in `counting` relies on.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// Largest ambient point count q^d for which point sets are supported.
pub const MAX_POINTS: u64 = 1 << 24;

/// The ambient space F_q^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    field: FieldSpec,
    dim: usize,
    size: u32,
}

impl Space {
    pub fn new(field: &FieldSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("dimension must be at least 1"));
        }
        let size = (field.order() as u128).saturating_pow(dim as u32);
        if size > MAX_POINTS as u128 {
            return Err(Error::capacity(
                "ambient size q^d",
                size,
                MAX_POINTS as u128,
            ));
        }
        Ok(Space {
            field: field.clone(),
            dim,
            size: size as u32,
        })
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// q^d.
    #[inline]
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn index_of(&self, v: &Vector) -> Result<u32> {
        if v.0.len() != self.dim {
            return Err(Error::usage(format!(
                "vector has {} coordinates, space has dimension {}",
                v.0.len(),
                self.dim
            )));
        }
        let q = self.field.order();
        let mut idx = 0u32;
        for &c in &v.0 {
            if c.index() >= q {
                return Err(Error::usage("coordinate outside the field"));
            }
            idx = idx * q + c.index();
        }
        Ok(idx)
    }

    pub fn vector(&self, index: u32) -> Vector {
        let mut coords = vec![Elem::ZERO; self.dim];
        self.decode_into(index, &mut coords);
        Vector(coords)
    }

    #[inline]
    pub(crate) fn decode_into(&self, mut index: u32, out: &mut [Elem]) {
        let q = self.field.order();
        for c in out.iter_mut().rev() {
            *c = Elem::from_index(index % q);
            index /= q;
        }
    }

    pub fn add_vectors(&self, a: &Vector, b: &Vector) -> Vector {
        Vector(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        )
    }

    pub fn scale_vector(&self, lambda: Elem, a: &Vector) -> Vector {
        Vector(a.0.iter().map(|&x| self.field.mul(lambda, x)).collect())
    }

    pub fn encode_vector(&self, v: &Vector) -> String {
        v.0.iter()
            .map(|&c| self.field.encode(c))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A point of F_q^d as a tuple of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Vec<Elem>);

impl Vector {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }
}

/// The distance function `Σ a_i (x_i − y_i)^s`.
///
/// Construction precomputes `a_i · δ^s` for every coordinate `i` and every
/// field element `δ`, so evaluating a norm costs d subtractions, d lookups
/// and d − 1 additions.
#[derive(Clone)]
pub struct NormSpec {
    space: Space,
    s: u32,
    coeffs: Vec<Elem>,
    weighted_powers: Vec<Elem>,
}

impl PartialEq for NormSpec {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.s == other.s && self.coeffs == other.coeffs
    }
}

impl Eq for NormSpec {}

impl fmt::Debug for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormSpec")
            .field("field", self.space.field())
            .field("d", &self.space.dim)
            .field("s", &self.s)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl NormSpec {
    pub fn new(space: &Space, s: u32, coeffs: &[Elem]) -> Result<Self> {
        if s < 2 {
            return Err(Error::usage(format!("norm exponent must be >= 2, got {s}")));
        }
        if coeffs.len() != space.dim {
            return Err(Error::usage(format!(
                "expected {} norm coefficients, got {}",
                space.dim,
                coeffs.len()
            )));
        }
        let f = space.field();
        for &a in coeffs {
            f.elem(a.index())?;
            if a.is_zero() {
                return Err(Error::usage("norm coefficients must be nonzero"));
            }
        }
        let q = f.order() as usize;
        let mut weighted_powers = Vec::with_capacity(q * coeffs.len());
        for &a in coeffs {
            for delta in f.elements() {
                weighted_powers.push(f.mul(a, f.pow(delta, s as u64)));
            }
        }
        debug_assert_eq!(weighted_powers.len(), q * coeffs.len());
        Ok(NormSpec {
            space: space.clone(),
            s,
            coeffs: coeffs.to_vec(),
            weighted_powers,
        })
    }

    /// The usual distance: s = 2, all coefficients 1.
    pub fn usual(space: &Space) -> Self {
        let ones = vec![space.field().one(); space.dim];
        Self::new(space, 2, &ones).expect("usual norm is always valid")
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn exponent(&self) -> u32 {
        self.s
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Norm of a coordinate difference given as raw coordinates.
    #[inline]
    pub fn eval_coords(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = self.space.field();
        let q = f.order() as usize;
        let mut acc = Elem::ZERO;
        for i in 0..x.len() {
            let delta = f.sub(x[i], y[i]);
            acc = f.add(acc, self.weighted_powers[i * q + delta.index() as usize]);
        }
        acc
    }

    /// `‖x − y‖_s`.
    pub fn norm(&self, x: &Vector, y: &Vector) -> Result<Elem> {
        self.space.index_of(x)?;
        self.space.index_of(y)?;
        Ok(self.eval_coords(&x.0, &y.0))
    }

    /// Norm of the point with the given index, measured from the origin.
    pub fn norm_of_index(&self, index: u32) -> Elem {
        let mut w = vec![Elem::ZERO; self.space.dim];
        self.space.decode_into(index, &mut w);
        let zero = vec![Elem::ZERO; self.space.dim];
        self.eval_coords(&w, &zero)
    }

    fn check_space(&self, other: &Space) -> Result<()> {
        if &self.space == other {
            Ok(())
        } else {
            Err(Error::usage("point set and norm live in different spaces"))
        }
    }
}

/// A duplicate-free set of points of F_q^d.
///
/// Holds the sorted index list, a decoded coordinate cache, and a dense
/// membership table over F_q^d built on first use.
#[derive(Clone)]
pub struct PointSet {
    space: Space,
    indices: Vec<u32>,
    coords: Vec<Elem>,
    indicator: OnceLock<Vec<bool>>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("space", &self.space)
            .field("indices", &self.indices)
            .finish()
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.indices == other.indices
    }
}

impl Eq for PointSet {}

impl PointSet {
    /// Builds a set from point indices; duplicates are dropped.
    pub fn from_indices(space: &Space, mut indices: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= space.size) {
            return Err(Error::usage(format!(
                "point index {bad} outside F_q^d (size {})",
                space.size
            )));
        }
        indices.sort_unstable();
        indices.dedup();
        let mut coords = vec![Elem::ZERO; indices.len() * space.dim];
        for (chunk, &i) in coords.chunks_mut(space.dim).zip(&indices) {
            space.decode_into(i, chunk);
        }
        Ok(PointSet {
            space: space.clone(),
            indices,
            coords,
            indicator: OnceLock::new(),
        })
    }

    pub fn from_vectors(space: &Space, points: &[Vector]) -> Result<Self> {
        let idx = points
            .iter()
            .map(|v| space.index_of(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, idx)
    }

    pub fn empty(space: &Space) -> Self {
        Self::from_indices(space, Vec::new()).unwrap()
    }

    pub fn full(space: &Space) -> Self {
        Self::from_indices(space, (0..space.size).collect()).unwrap()
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Sorted point indices.
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Coordinates of the `i`-th point in sorted order.
    #[inline]
    pub fn point(&self, i: usize) -> &[Elem] {
        let d = self.space.dim;
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.len()).map(|i| Vector(self.point(i).to_vec()))
    }

    /// Dense membership table over F_q^d, materialized on first call.
    pub fn indicator(&self) -> &[bool] {
        self.indicator.get_or_init(|| {
            let mut t = vec![false; self.space.size as usize];
            for &i in &self.indices {
                t[i as usize] = true;
            }
            t
        })
    }

    pub fn contains_index(&self, index: u32) -> bool {
        match self.indicator.get() {
            Some(t) => t.get(index as usize).copied().unwrap_or(false),
            None => self.indices.binary_search(&index).is_ok(),
        }
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.space
            .index_of(v)
            .map(|i| self.contains_index(i))
            .unwrap_or(false)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::usage("union of point sets from different spaces"));
        }
        let mut idx = self.indices.clone();
        idx.extend_from_slice(&other.indices);
        PointSet::from_indices(&self.space, idx)
    }

    /// `{x + c : x ∈ self}`.
    pub fn translate(&self, c: &Vector) -> Result<PointSet> {
        self.space.index_of(c)?;
        let pts: Vec<Vector> = self
            .vectors()
            .map(|v| self.space.add_vectors(&v, c))
            .collect();
        PointSet::from_vectors(&self.space, &pts)
    }

    /// `{λx : x ∈ self}`.
    pub fn scale(&self, lambda: Elem) -> Result<PointSet> {
        let pts: Vec<Vector> = self
            .vectors()
            .map(|v| self.space.scale_vector(lambda, &v))
            .collect();
        PointSet::from_vectors(&self.space, &pts)
    }
}

/// A duplicate-free subset of F_q^d × F_q^d stored as sorted index pairs.
///
/// A dense q^{2d} membership table is built only when the set is larger
/// than a quarter of the ambient product.
#[derive(Clone)]
pub struct PairSet {
    space: Space,
    pairs: Vec<(u32, u32)>,
    dense: Option<Vec<bool>>,
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairSet")
            .field("space", &self.space)
            .field("pairs", &self.pairs)
            .finish()
    }
}

impl PartialEq for PairSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.pairs == other.pairs
    }
}

impl Eq for PairSet {}

impl PairSet {
    pub fn from_index_pairs(space: &Space, mut pairs: Vec<(u32, u32)>) -> Result<Self> {
        if let Some(bad) = pairs
            .iter()
            .find(|&&(x, y)| x >= space.size || y >= space.size)
        {
            return Err(Error::usage(format!("pair {bad:?} outside F_q^d × F_q^d")));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let n = space.size as u64;
        let total = n * n;
        let dense = if (pairs.len() as u64) * 4 > total {
            let mut t = vec![false; total as usize];
            for &(x, y) in &pairs {
                t[(x as u64 * n + y as u64) as usize] = true;
            }
            Some(t)
        } else {
            None
        };
        Ok(PairSet {
            space: space.clone(),
            pairs,
            dense,
        })
    }

    pub fn from_vectors(space: &Space, pairs: &[(Vector, Vector)]) -> Result<Self> {
        let idx = pairs
            .iter()
            .map(|(x, y)| Ok((space.index_of(x)?, space.index_of(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_index_pairs(space, idx)
    }

    /// `A × B`.
    pub fn product(a: &PointSet, b: &PointSet) -> Result<Self> {
        if a.space != b.space {
            return Err(Error::usage("product of point sets from different spaces"));
        }
        let pairs = a
            .indices
            .iter()
            .flat_map(|&x| b.indices.iter().map(move |&y| (x, y)))
            .collect();
        Self::from_index_pairs(&a.space, pairs)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sorted `(first, second)` index pairs.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn contains_indices(&self, x: u32, y: u32) -> bool {
        match &self.dense {
            Some(t) => {
                let n = self.space.size as u64;
                x < self.space.size && y < self.space.size && t[(x as u64 * n + y as u64) as usize]
            }
            None => self.pairs.binary_search(&(x, y)).is_ok(),
        }
    }

    pub fn has_dense_table(&self) -> bool {
        self.dense.is_some()
    }
}

/// A sorted set of field values.
pub type ValueSet = Vec<Elem>;

fn occupancy_to_values(occ: &[bool]) -> ValueSet {
    occ.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| Elem::from_index(i as u32))
        .collect()
}

fn distance_occupancy(x: &PointSet, y: &PointSet, n: &NormSpec) -> Vec<bool> {
    let q = n.space.field().order() as usize;
    let scan = |range: std::ops::Range<usize>| {
        let mut occ = vec![false; q];
        let mut hits = 0usize;
        for i in range {
            let a = x.point(i);
            for j in 0..y.len() {
                let v = n.eval_coords(a, y.point(j)).index() as usize;
                if !occ[v] {
                    occ[v] = true;
                    hits += 1;
                    if hits == q {
                        return occ;
                    }
                }
            }
        }
        occ
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunk = 64usize;
        if x.len() * y.len() > 1 << 14 {
            return (0..x.len().div_ceil(chunk))
                .into_par_iter()
                .map(|c| scan(c * chunk..((c + 1) * chunk).min(x.len())))
                .reduce(
                    || vec![false; q],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(u, v)| *u |= v);
                        a
                    },
                );
        }
    }
    scan(0..x.len())
}

/// `Δ^s(X, Y) = {‖x − y‖_s : x ∈ X, y ∈ Y}`, sorted.
pub fn distance_set(x: &PointSet, y: &PointSet, n: &NormSpec) -> Result<ValueSet> {
    n.check_space(&x.space)?;
    n.check_space(&y.space)?;
    Ok(occupancy_to_values(&distance_occupancy(x, y, n)))
}

/// Dense q × q occupancy grid of Δ_{d,d}^s(E), row-major in `(v1, v2)`.
pub fn two_param_occupancy(e: &PairSet, n: &NormSpec) -> Result<Vec<bool>> {
    n.check_space(&e.space)?;
    let space = &e.space;
    let d = space.dim;
    let q = space.field().order() as usize;
    let mut first = vec![Elem::ZERO; e.len() * d];
    let mut second = vec![Elem::ZERO; e.len() * d];
    for (i, &(a, b)) in e.pairs.iter().enumerate() {
        space.decode_into(a, &mut first[i * d..(i + 1) * d]);
        space.decode_into(b, &mut second[i * d..(i + 1) * d]);
    }
    let m = e.len();
    let scan = |range: std::ops::Range<usize>| {
        let mut occ = vec![false; q * q];
        let mut hits = 0usize;
        for i in range {
            let (x1, x2) = (&first[i * d..(i + 1) * d], &second[i * d..(i + 1) * d]);
            for j in 0..m {
                let v1 = n.eval_coords(x1, &first[j * d..(j + 1) * d]).index() as usize;
                let v2 = n.eval_coords(x2, &second[j * d..(j + 1) * d]).index() as usize;
                let cell = &mut occ[v1 * q + v2];
                if !*cell {
                    *cell = true;
                    hits += 1;
                    if hits == q * q {
                        return occ;
                    }
                }
            }
        }
        occ
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunk = 32usize;
        if m * m > 1 << 14 {
            return Ok((0..m.div_ceil(chunk))
                .into_par_iter()
                .map(|c| scan(c * chunk..((c + 1) * chunk).min(m)))
                .reduce(
                    || vec![false; q * q],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(u, v)| *u |= v);
                        a
                    },
                ));
        }
    }
    Ok(scan(0..m))
}

/// `Δ_{d,d}^s(E)`: all `(‖x1 − y1‖_s, ‖x2 − y2‖_s)` over ordered pairs of
/// elements `(x1, x2), (y1, y2)` of E, sorted.
pub fn two_param_distance_set(e: &PairSet, n: &NormSpec) -> Result<Vec<(Elem, Elem)>> {
    let q = n.space.field().order();
    let occ = two_param_occupancy(e, n)?;
    Ok(occ
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| {
            let i = i as u32;
            (Elem::from_index(i / q), Elem::from_index(i % q))
        })
        .collect())
}

/// `{w ∈ F_q^d : ‖w − 0‖_s = r}`.
pub fn sphere(r: Elem, n: &NormSpec) -> Result<PointSet> {
    n.space.field().elem(r.index())?;
    let idx = (0..n.space.size)
        .filter(|&w| n.norm_of_index(w) == r)
        .collect();
    PointSet::from_indices(&n.space, idx)
}

/// Norm of every point of F_q^d from the origin, indexed by point index.
/// Level sets of this table are the spheres.
pub fn sphere_labels(n: &NormSpec) -> Vec<Elem> {
    (0..n.space.size).map(|w| n.norm_of_index(w)).collect()
}

/// Nonempty fibers `E_y = {x : (x, y) ∈ E}`, keyed by the index of `y`.
pub fn fibers(e: &PairSet) -> BTreeMap<u32, PointSet> {
    let mut grouped: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(x, y) in &e.pairs {
        grouped.entry(y).or_default().push(x);
    }
    grouped
        .into_iter()
        .map(|(y, xs)| (y, PointSet::from_indices(&e.space, xs).unwrap()))
        .collect()
}
