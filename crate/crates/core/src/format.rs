//! The `ffdist-v1` point-set file format.
//!
//! ```text
//! ffdist-v1
//! p=3 k=2 d=2 s=2 a=1:0,1:0
//! modulus=1:0:1
//! # comment
//! 1:0 2:1
//! ```
//!
//! Line 1 is the magic, line 2 the field, dimension and norm, line 3 the
//! little-endian modulus (only when k > 1). Every further line holds one
//! point (d elements) or one pair (2d elements), whitespace-separated.
//! Lines starting with `#` and blank lines are ignored anywhere.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::geometry::{NormSpec, PairSet, PointSet, Space, Vector};

pub const MAGIC: &str = "ffdist-v1";

#[derive(Clone, Debug)]
pub enum Contents {
    Points(PointSet),
    Pairs(PairSet),
}

/// A parsed file: the norm (which carries field and dimension) and the set.
#[derive(Clone, Debug)]
pub struct Document {
    pub norm: NormSpec,
    pub contents: Contents,
}

impl Document {
    pub fn into_points(self) -> Result<(NormSpec, PointSet)> {
        match self.contents {
            Contents::Points(p) => Ok((self.norm, p)),
            Contents::Pairs(_) => Err(Error::usage("expected a point set, found a pair set")),
        }
    }

    /// An empty point set reads as an empty pair set.
    pub fn into_pairs(self) -> Result<(NormSpec, PairSet)> {
        match self.contents {
            Contents::Pairs(e) => Ok((self.norm, e)),
            Contents::Points(p) if p.is_empty() => {
                let e = PairSet::from_index_pairs(self.norm.space(), Vec::new())?;
                Ok((self.norm, e))
            }
            Contents::Points(_) => Err(Error::usage("expected a pair set, found a point set")),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Usage(msg) => parse_err(line, msg),
        other => other,
    }
}

fn parse_colon_list(s: &str, line: usize) -> Result<Vec<u32>> {
    s.split(':')
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_err(line, format!("bad integer {t:?}")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Document> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, magic) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if magic != MAGIC {
        return Err(parse_err(
            ln,
            format!("expected {MAGIC:?}, found {magic:?}"),
        ));
    }

    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(ln + 1, "missing header line"))?;
    let (mut p, mut k, mut d, mut s, mut a) = (None, None, None, None, None);
    for tok in header.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(hl, format!("malformed header token {tok:?}")))?;
        let num = || {
            val.parse::<u32>()
                .map_err(|_| parse_err(hl, format!("bad value for {key}: {val:?}")))
        };
        match key {
            "p" => p = Some(num()?),
            "k" => k = Some(num()?),
            "d" => d = Some(num()? as usize),
            "s" => s = Some(num()?),
            "a" => a = Some(val.to_string()),
            _ => return Err(parse_err(hl, format!("unknown header key {key:?}"))),
        }
    }
    let missing = |name: &str| parse_err(hl, format!("header is missing {name}="));
    let (p, k, d, s, a) = (
        p.ok_or_else(|| missing("p"))?,
        k.ok_or_else(|| missing("k"))?,
        d.ok_or_else(|| missing("d"))?,
        s.ok_or_else(|| missing("s"))?,
        a.ok_or_else(|| missing("a"))?,
    );

    let mut body: Vec<(usize, &str)> = lines.collect();
    let field = if k > 1 {
        if body.is_empty() || !body[0].1.starts_with("modulus=") {
            return Err(parse_err(hl + 1, "k > 1 requires a modulus= line"));
        }
        let (ml, mline) = body.remove(0);
        let coeffs = parse_colon_list(&mline["modulus=".len()..], ml)?;
        if coeffs.len() != k as usize + 1 {
            return Err(parse_err(
                ml,
                format!("modulus needs {} coefficients", k + 1),
            ));
        }
        FieldSpec::extension(p, &coeffs).map_err(at_line(ml))?
    } else {
        FieldSpec::new(p, k, None).map_err(at_line(hl))?
    };
    let space = Space::new(&field, d).map_err(at_line(hl))?;
    let coeffs = a
        .split(',')
        .map(|t| field.parse(t))
        .collect::<Result<Vec<_>>>()
        .map_err(at_line(hl))?;
    let norm = NormSpec::new(&space, s, &coeffs).map_err(at_line(hl))?;

    let mut points = Vec::new();
    let mut pairs = Vec::new();
    for (ln, l) in body {
        let elems = l
            .split_whitespace()
            .map(|t| field.parse(t))
            .collect::<Result<Vec<_>>>()
            .map_err(at_line(ln))?;
        if elems.len() == d && pairs.is_empty() {
            points.push(Vector(elems));
        } else if elems.len() == 2 * d && points.is_empty() {
            let (x, y) = elems.split_at(d);
            pairs.push((Vector(x.to_vec()), Vector(y.to_vec())));
        } else {
            let expected = if pairs.is_empty() && !points.is_empty() {
                d
            } else {
                2 * d
            };
            return Err(parse_err(
                ln,
                format!(
                    "expected {expected} elements per line, found {}",
                    elems.len()
                ),
            ));
        }
    }
    let contents = if pairs.is_empty() {
        Contents::Points(PointSet::from_vectors(&space, &points)?)
    } else {
        Contents::Pairs(PairSet::from_vectors(&space, &pairs)?)
    };
    Ok(Document { norm, contents })
}

pub fn read_file(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn header(norm: &NormSpec) -> String {
    let space = norm.space();
    let f = space.field();
    let a: Vec<String> = norm.coeffs().iter().map(|&c| f.encode(c)).collect();
    let mut out = format!(
        "{MAGIC}\np={} k={} d={} s={} a={}\n",
        f.characteristic(),
        f.degree(),
        space.dim(),
        norm.exponent(),
        a.join(",")
    );
    if let Some(m) = f.modulus() {
        let m: Vec<String> = m.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "modulus={}", m.join(":"));
    }
    out
}

pub fn write_points(norm: &NormSpec, set: &PointSet) -> String {
    let space = norm.space();
    let mut out = header(norm);
    for v in set.vectors() {
        let _ = writeln!(out, "{}", space.encode_vector(&v));
    }
    out
}

pub fn write_pairs(norm: &NormSpec, set: &PairSet) -> String {
    let space = norm.space();
    let mut out = header(norm);
    for &(x, y) in set.pairs() {
        let _ = writeln!(
            out,
            "{} {}",
            space.encode_vector(&space.vector(x)),
            space.encode_vector(&space.vector(y))
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_prime_point_file() {
        let text = "# leading comment\nffdist-v1\np=5 k=1 d=2 s=3 a=1,2\n0 0\n1 4\n\n# c\n1 4\n";
        let (norm, set) = parse(text).unwrap().into_points().unwrap();
        assert_eq!(norm.exponent(), 3);
        assert_eq!(set.len(), 2);
        assert_eq!(norm.space().field().order(), 5);
    }

    #[test]
    fn parses_extension_pair_file() {
        let text = "ffdist-v1\np=3 k=2 d=1 s=2 a=1:0\nmodulus=1:0:1\n2:1 0:0\n0:1 1:1\n";
        let (norm, set) = parse(text).unwrap().into_pairs().unwrap();
        assert_eq!(norm.space().field().order(), 9);
        assert_eq!(set.len(), 2);
        let back = write_pairs(&norm, &set);
        let (_, again) = parse(&back).unwrap().into_pairs().unwrap();
        assert_eq!(again, set);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse("ffdist-v2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse("ffdist-v1\np=5 k=1 d=2 s=2\n").is_err());
        assert!(matches!(
            parse("ffdist-v1\np=5 k=1 d=2 s=2 a=1,1\n0 0\n1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse("ffdist-v1\np=5 k=1 d=2 s=2 a=1,0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse("ffdist-v1\np=3 k=2 d=1 s=2 a=1:0\n0:0\n").is_err());
        assert!(parse("ffdist-v1\np=3 k=2 d=1 s=2 a=1:0\nmodulus=2:0:1\n").is_err());
        assert!(parse("ffdist-v1\np=5 k=1 d=2 s=2 a=1,1\n0 0\n1 1 2 2\n").is_err());
    }

    #[test]
    fn empty_body_reads_as_either_kind() {
        let text = "ffdist-v1\np=3 k=1 d=2 s=2 a=1,1\n";
        assert!(parse(text).unwrap().into_points().unwrap().1.is_empty());
        assert!(parse(text).unwrap().into_pairs().unwrap().1.is_empty());
    }

    #[test]
    fn write_then_read_points() {
        let f = FieldSpec::extension(5, &[2, 0, 1]).unwrap();
        let s = Space::new(&f, 2).unwrap();
        let n = NormSpec::new(&s, 4, &[f.from_int(2), f.parse("0:3").unwrap()]).unwrap();
        let set = PointSet::from_indices(&s, vec![0, 17, 300, 624]).unwrap();
        let text = write_points(&n, &set);
        assert!(text.starts_with("ffdist-v1\np=5 k=2 d=2 s=4 a=2:0,0:3\nmodulus=2:0:1\n"));
        let (n2, again) = parse(&text).unwrap().into_points().unwrap();
        assert_eq!(n2, n);
        assert_eq!(again, set);
    }
}
