//! Finite point sets in F_p^n and their text file format.
//!
//! One point per line as `n` whitespace-separated digits in `[0, p-1]`;
//! everything after `#` on a line is a comment. Points are encoded as base-`p`
//! integers with the first coordinate most significant.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    p: u32,
    n: u32,
    codes: Vec<u64>,
}

pub fn encode_point(coords: &[u32], p: u32) -> u64 {
    coords.iter().fold(0, |acc, &c| acc * p as u64 + c as u64)
}

pub fn decode_point(code: u64, n: u32, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; n as usize];
    let mut rem = code;
    for slot in out.iter_mut().rev() {
        *slot = (rem % p as u64) as u32;
        rem /= p as u64;
    }
    out
}

impl PointSet {
    pub fn from_codes(p: u32, n: u32, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let size = (p as u64).pow(n);
        let codes: BTreeSet<u64> = codes.into_iter().collect();
        if let Some(bad) = codes.iter().find(|&&c| c >= size) {
            return domain(format!("point code {bad} outside F_{p}^{n}"));
        }
        Ok(PointSet {
            p,
            n,
            codes: codes.into_iter().collect(),
        })
    }

    pub fn from_points(p: u32, n: u32, points: &[Vec<u32>]) -> Result<Self> {
        for pt in points {
            if pt.len() != n as usize || pt.iter().any(|&c| c >= p) {
                return domain(format!("point {pt:?} is not in F_{p}^{n}"));
            }
        }
        PointSet::from_codes(p, n, points.iter().map(|pt| encode_point(pt, p)))
    }

    /// All of F_p^n.
    pub fn full(p: u32, n: u32) -> Self {
        PointSet {
            p,
            n,
            codes: (0..(p as u64).pow(n)).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn contains(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    /// Coordinate vectors in canonical (encoding) order.
    pub fn points(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.codes
            .iter()
            .map(move |&c| decode_point(c, self.n, self.p))
    }

    pub fn complement(&self) -> Self {
        let size = (self.p as u64).pow(self.n);
        PointSet {
            p: self.p,
            n: self.n,
            codes: (0..size).filter(|c| !self.contains(*c)).collect(),
        }
    }

    /// Parse the text format. `n` is taken from the first point when not given.
    pub fn parse(text: &str, p: u32, n: Option<u32>) -> Result<Self> {
        let mut dim = n;
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let coords = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>()
                        .ok()
                        .filter(|&c| c < p)
                        .ok_or_else(|| Error::Parse {
                            line,
                            msg: format!("coordinate {tok:?} is not a digit in [0, {}]", p - 1),
                        })
                })
                .collect::<Result<Vec<u32>>>()?;
            let expected = *dim.get_or_insert(coords.len() as u32);
            if coords.len() != expected as usize {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {expected} coordinates, found {}", coords.len()),
                });
            }
            points.push(coords);
        }
        PointSet::from_points(p, dim.unwrap_or(0), &points)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("# n={} p={} size={}\n", self.n, self.p, self.len());
        for pt in self.points() {
            let line: Vec<String> = pt.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn read(path: &Path, p: u32, n: Option<u32>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read {}: {e}", path.display()),
        })?;
        PointSet::parse(&text, p, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_with_comments() {
        let text = "# a cap\n0 0\n0 1  # second\n\n1 0\n";
        let s = PointSet::parse(text, 3, None).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.codes(), &[0, 1, 3]);
    }

    #[test]
    fn parse_errors_carry_line() {
        match PointSet::parse("0 0\n0 3\n", 3, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(PointSet::parse("0 0\n0\n", 3, None).is_err());
        assert!(PointSet::parse("0 0\n", 3, Some(3)).is_err());
    }

    #[test]
    fn complement_partitions() {
        let s = PointSet::parse("0\n1\n", 3, None).unwrap();
        assert_eq!(s.complement().codes(), &[2]);
        assert_eq!(PointSet::full(3, 2).complement().len(), 0);
    }

    proptest! {
        #[test]
        fn file_round_trip(codes in proptest::collection::btree_set(0u64..243, 0..40)) {
            let s = PointSet::from_codes(3, 5, codes).unwrap();
            let back = PointSet::parse(&s.to_file_string(), 3, Some(5)).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
