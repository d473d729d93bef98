//! Exact arithmetic in F_q for odd prime powers q = p^k.
//!
//! An element is stored as a canonical index: the little-endian coefficient
//! vector `(c_0, ..., c_{k-1})` of its polynomial-basis representation maps to
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Every operation returns a fully
//! reduced index, so element equality is integer equality.
//!
//! The hot-path API works on bare [`Elem`] indices through a [`FieldSpec`]
//! context. [`FieldElement`] bundles an element with its field and checks
//! that both operands of a binary operation come from the same field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Largest supported extension degree for k > 1.
pub const MAX_EXT_DEGREE: u32 = 4;
/// Largest supported characteristic for k > 1.
pub const MAX_EXT_CHAR: u32 = 13;

/// Canonical index of an element of some F_q.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    /// Caller guarantees `i < q` for the field in use.
    #[inline]
    pub(crate) fn from_index(i: u32) -> Elem {
        Elem(i)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Little-endian monic modulus `c_0..c_k`, present iff k > 1.
    modulus: Option<Vec<u32>>,
    /// `place[i] = p^i`.
    place: Vec<u32>,
    /// Discrete exp/log tables relative to a primitive element (k > 1 only).
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field F_q with q = p^k, p an odd prime.
///
/// Cloning is cheap; clones share their tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "F_{}", self.0.p),
            Some(m) => write!(f, "F_{}^{}[{}]", self.0.p, self.0.k, join_colon(m)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Parses `p` or `p^k/c0:c1:..:ck` (little-endian monic modulus).
impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = || Error::usage(format!("bad field {spec:?}; expected p or p^k/c0:..:ck"));
        let (order, modulus) = match spec.trim().split_once('/') {
            Some((o, m)) => (o, Some(m)),
            None => (spec.trim(), None),
        };
        let (p, k) = match order.split_once('^') {
            Some((p, k)) => (
                p.parse::<u32>().map_err(|_| bad())?,
                k.parse::<u32>().map_err(|_| bad())?,
            ),
            None => (order.parse::<u32>().map_err(|_| bad())?, 1),
        };
        match modulus {
            Some(m) => {
                let coeffs = m
                    .split(':')
                    .map(|c| c.parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.len() != k as usize + 1 {
                    return Err(Error::usage(format!(
                        "field {spec:?}: modulus needs {} coefficients",
                        k + 1
                    )));
                }
                FieldSpec::extension(p, &coeffs)
            }
            None => FieldSpec::new(p, k, None),
        }
    }
}

fn join_colon(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(":")
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Remainder of `num` modulo the monic polynomial `den` over F_p (little-endian).
fn poly_rem_monic(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive factor search: a monic polynomial of degree k is reducible iff
/// it has a monic factor of degree between 1 and k/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for deg in 1..=k / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem_monic(modulus, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_p[t]/(modulus), with `modulus` given little-endian and monic.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::usage("modulus must have degree at least 1"));
        }
        let k = (modulus.len() - 1) as u32;
        Self::new(p, k, Some(modulus))
    }

    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if p == 2 {
            return Err(Error::usage("characteristic 2 is not supported"));
        }
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not an odd prime")));
        }
        if k == 0 {
            return Err(Error::usage("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::capacity(
                "field order q",
                q as u128,
                MAX_ORDER as u128,
            ));
        }
        let q = q as u32;
        let place: Vec<u32> = (0..k).map(|i| p.pow(i)).collect();

        if k == 1 {
            if let Some(m) = modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::usage("a prime field takes no modulus (or t - c)"));
                }
            }
            return Ok(FieldSpec(Arc::new(Inner {
                p,
                k,
                q,
                modulus: None,
                place,
                exp: Vec::new(),
                log: Vec::new(),
            })));
        }

        if k > MAX_EXT_DEGREE || p > MAX_EXT_CHAR {
            return Err(Error::usage(format!(
                "extension fields are supported for k <= {MAX_EXT_DEGREE}, p <= {MAX_EXT_CHAR}; got p={p}, k={k}"
            )));
        }
        let m = modulus.ok_or_else(|| Error::usage("k > 1 requires an irreducible modulus"))?;
        if m.len() != k as usize + 1 {
            return Err(Error::usage(format!(
                "modulus must have {} coefficients, got {}",
                k + 1,
                m.len()
            )));
        }
        if m.iter().any(|&c| c >= p) {
            return Err(Error::usage("modulus coefficients must lie in [0, p-1]"));
        }
        if m[k as usize] != 1 {
            return Err(Error::usage("modulus must be monic"));
        }
        if !is_irreducible(m, p) {
            return Err(Error::usage(format!(
                "modulus {} is reducible over F_{p}",
                join_colon(m)
            )));
        }

        let mut inner = Inner {
            p,
            k,
            q,
            modulus: Some(m.to_vec()),
            place,
            exp: Vec::new(),
            log: Vec::new(),
        };
        inner.build_log_tables();
        Ok(FieldSpec(Arc::new(inner)))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Element with canonical index `index`.
    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.0.q {
            Ok(Elem(index))
        } else {
            Err(Error::usage(format!(
                "index {index} outside F_{}",
                self.0.q
            )))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.k as usize {
            return Err(Error::usage(format!(
                "expected {} coefficients, got {}",
                self.0.k,
                coeffs.len()
            )));
        }
        let mut idx = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p {
                return Err(Error::usage(format!(
                    "coefficient {c} outside [0, {}]",
                    self.0.p - 1
                )));
            }
            idx += c * self.0.place[i];
        }
        Ok(Elem(idx))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.k as usize);
        let mut x = a.0;
        for _ in 0..self.0.k {
            out.push(x % self.0.p);
            x /= self.0.p;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &w in &self.0.place {
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * w;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut out) = (a.0, 0u32);
        for &w in &self.0.place {
            let c = x % p;
            out += if c == 0 { 0 } else { p - c } * w;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            return Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &w in &self.0.place {
            let (cx, cy) = (x % p, y % p);
            out += if cx >= cy { cx - cy } else { cx + p - cy } * w;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.k == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.0.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let n = self.0.q - 1;
        let e = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Elem(self.0.exp[(if e >= n { e - n } else { e }) as usize])
    }

    /// `a^s` by repeated squaring. `0^0 = 1` by convention.
    pub fn pow(&self, a: Elem, mut s: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while s > 0 {
            if s & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            s >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.0.q as u64 - 2))
        }
    }

    /// Text form: a decimal residue for k = 1, otherwise colon-separated
    /// little-endian coefficients (`"2:1"` is `2 + t`).
    pub fn encode(&self, a: Elem) -> String {
        if self.0.k == 1 {
            a.0.to_string()
        } else {
            join_colon(&self.coeffs(a))
        }
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != self.0.k as usize {
            return Err(Error::usage(format!(
                "element {s:?} must have {} colon-separated coefficient(s)",
                self.0.k
            )));
        }
        let coeffs = parts
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::usage(format!("bad coefficient {t:?} in element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&coeffs)
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }
}

impl Inner {
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p, self.k as usize);
        let m = self.modulus.as_ref().unwrap();
        let digits = |mut x: u32| {
            let mut v = vec![0u32; k];
            for d in v.iter_mut() {
                *d = x % p;
                x /= p;
            }
            v
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u32; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let r = poly_rem_monic(&prod, m, p);
        r.iter().enumerate().map(|(i, &c)| c * self.place[i]).sum()
    }

    fn build_log_tables(&mut self) {
        let n = (self.q - 1) as usize;
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(n);
            let mut cur = 1u32;
            let mut primitive = true;
            for i in 0..n {
                if i > 0 && cur == 1 {
                    primitive = false;
                    break;
                }
                exp.push(cur);
                cur = self.poly_mul(cur, g);
            }
            if primitive && cur == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

/// An element bundled with its field; binary operations check field identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: &FieldSpec, value: Elem) -> Result<Self> {
        field.elem(value.0)?;
        Ok(field.element(value))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "field mismatch: {:?} vs {:?}",
                self.field, other.field
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    /// `self^s`; total, with `0^0 = 1`.
    pub fn pow(&self, s: u64) -> Self {
        self.field.element(self.field.pow(self.value, s))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.encode(self.value))
    }
}
