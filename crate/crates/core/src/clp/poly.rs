//! Multivariate polynomials over F_p with every exponent below `p`.
//!
//! Such polynomials are in bijection with functions F_p^n -> F_p, so two
//! polynomials are equal as functions iff their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::linalg::{add_mod, is_prime, mul_mod, pow_mod, reduce};
use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn new(exponents: Vec<u8>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn eval(&self, x: &[u32], p: u32) -> u32 {
        self.0.iter().zip(x).fold(1 % p, |acc, (&e, &xi)| {
            mul_mod(acc, pow_mod(xi, e as u32, p), p)
        })
    }

    /// `(first n exponents, remaining exponents)`.
    pub fn split(&self, n: usize) -> (Monomial, Monomial) {
        (
            Monomial(self.0[..n].to_vec()),
            Monomial(self.0[n..].to_vec()),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{e}", i + 1)
                }
            })
            .collect();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// Monomials in `n` variables, exponents `< p`, total degree `<= d`,
/// ordered by degree then lexicographically.
pub fn monomials_up_to(n: usize, d: u32, p: u32) -> Vec<Monomial> {
    let mut all = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(i: usize, left: u32, p: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..p.min(left + 1) {
            cur[i] = e as u8;
            rec(i + 1, left - e, p, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, p, &mut cur, &mut all);
    all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    all
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldPoly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl FieldPoly {
    pub fn zero(p: u32, nvars: usize) -> Self {
        assert!(is_prime(p), "FieldPoly modulus {p} is not prime");
        FieldPoly {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        let mut f = FieldPoly::zero(p, nvars);
        f.add_term(Monomial::one(nvars), reduce(c, p));
        f
    }

    /// Build from `(exponents, coefficient)` pairs; coefficients are reduced mod `p`.
    pub fn from_terms<I>(p: u32, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, i64)>,
    {
        if !is_prime(p) {
            return domain(format!("modulus {p} is not prime"));
        }
        let mut f = FieldPoly::zero(p, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars || exps.iter().any(|&e| e as u32 >= p) {
                return domain(format!(
                    "monomial {exps:?} invalid for {nvars} variables over F_{p}"
                ));
            }
            f.add_term(Monomial(exps), reduce(c, p));
        }
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        debug_assert_eq!(m.nvars(), self.nvars);
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = add_mod(*o.get(), c, self.p);
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        assert_eq!((self.p, self.nvars), (other.p, other.nvars));
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    /// Product as functions: exponents `>= p` fold back via `x^p = x`.
    pub fn mul(&self, other: &FieldPoly) -> FieldPoly {
        assert_eq!((self.p, self.nvars), (other.p, other.nvars));
        let p = self.p;
        let mut out = FieldPoly::zero(p, self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let exps =
                    ma.0.iter()
                        .zip(&mb.0)
                        .map(|(&x, &y)| {
                            let e = x as u32 + y as u32;
                            if e >= p {
                                ((e - 1) % (p - 1) + 1) as u8
                            } else {
                                e as u8
                            }
                        })
                        .collect();
                out.add_term(Monomial(exps), mul_mod(ca, cb, p));
            }
        }
        out
    }

    /// Re-home into `total` variables, this polynomial's variables starting at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> FieldPoly {
        assert!(offset + self.nvars <= total);
        let mut out = FieldPoly::zero(self.p, total);
        for (m, &c) in &self.terms {
            let mut exps = vec![0u8; total];
            exps[offset..offset + self.nvars].copy_from_slice(&m.0);
            out.add_term(Monomial(exps), c);
        }
        out
    }

    pub fn from_monomial(p: u32, m: &Monomial) -> FieldPoly {
        let mut out = FieldPoly::zero(p, m.nvars());
        out.add_term(m.clone(), 1);
        out
    }

    /// Number of points of F_p^n where the polynomial is nonzero.
    pub fn support_size(&self) -> usize {
        let size = (self.p as u64).pow(self.nvars as u32);
        (0..size)
            .filter(|&code| {
                let x = super::pointset::decode_point(code, self.nvars as u32, self.p);
                self.eval_unchecked(&x) != 0
            })
            .count()
    }

    pub(crate) fn eval_unchecked(&self, x: &[u32]) -> u32 {
        self.terms.iter().fold(0, |acc, (m, &c)| {
            add_mod(acc, mul_mod(c, m.eval(x, self.p), self.p), self.p)
        })
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| match (c, m.degree()) {
                (_, 0) => c.to_string(),
                (1, _) => m.to_string(),
                _ => format!("{c}*{m}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Value of `P` at `x`; coordinates are reduced mod `p`.
pub fn eval_poly(poly: &FieldPoly, x: &[u32]) -> Result<u32> {
    if x.len() != poly.nvars {
        return domain(format!(
            "point has {} coordinates, polynomial has {} variables",
            x.len(),
            poly.nvars
        ));
    }
    let x: Vec<u32> = x.iter().map(|&v| v % poly.p).collect();
    Ok(poly.eval_unchecked(&x))
}

fn binomial_mod(n: u32, k: u32, p: u32) -> u32 {
    // n < p here, so the integer binomial is small enough and exact.
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * (n as u64 - i) / (i + 1);
    }
    (c % p as u64) as u32
}

/// `P(-b - c)` as a polynomial in `2n` variables `(b_1..b_n, c_1..c_n)`.
pub fn expand_neg_sum(poly: &FieldPoly) -> FieldPoly {
    let (p, n) = (poly.p, poly.nvars);
    let mut out = FieldPoly::zero(p, 2 * n);
    for (m, &coef) in &poly.terms {
        // Partial products: (exponents over 2n variables, coefficient).
        let mut partial: Vec<(Vec<u8>, u32)> = vec![(vec![0u8; 2 * n], coef)];
        for (i, &a) in m.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            // (-(b_i + c_i))^a = (-1)^a * sum_j C(a, j) b_i^j c_i^(a-j)
            let sign = if a % 2 == 1 { p - 1 } else { 1 };
            let mut next = Vec::with_capacity(partial.len() * (a as usize + 1));
            for (exps, c) in &partial {
                for j in 0..=a {
                    let w = mul_mod(sign, binomial_mod(a as u32, j as u32, p), p);
                    if w == 0 {
                        continue;
                    }
                    let mut e = exps.clone();
                    e[i] = j;
                    e[n + i] = a - j;
                    next.push((e, mul_mod(*c, w, p)));
                }
            }
            partial = next;
        }
        for (exps, c) in partial {
            out.add_term(Monomial(exps), c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, nvars: usize, terms: &[(&[u8], i64)]) -> FieldPoly {
        FieldPoly::from_terms(p, nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn evaluation() {
        let one_plus_x = poly(3, 1, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(eval_poly(&one_plus_x, &[2]).unwrap(), 0);
        let x2 = poly(3, 1, &[(&[2], 1)]);
        assert_eq!(eval_poly(&x2, &[2]).unwrap(), 1);
        assert_eq!(eval_poly(&FieldPoly::zero(3, 2), &[1, 2]).unwrap(), 0);
        assert!(eval_poly(&x2, &[1, 1]).is_err());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let f = poly(3, 1, &[(&[1], 2), (&[1], 1), (&[0], 3)]);
        assert!(f.is_zero());
        assert_eq!(f.degree(), -1);
        assert!(FieldPoly::from_terms(3, 1, [(vec![3u8], 1)]).is_err());
        assert!(FieldPoly::from_terms(4, 1, [(vec![1u8], 1)]).is_err());
    }

    #[test]
    fn expansion_examples() {
        let x = poly(3, 1, &[(&[1], 1)]);
        assert_eq!(
            expand_neg_sum(&x),
            poly(3, 2, &[(&[1, 0], 2), (&[0, 1], 2)])
        );
        let x2 = poly(3, 1, &[(&[2], 1)]);
        assert_eq!(
            expand_neg_sum(&x2),
            poly(3, 2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])
        );
        let one = FieldPoly::constant(3, 1, 1);
        assert_eq!(expand_neg_sum(&one), FieldPoly::constant(3, 2, 1));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_up_to(1, 1, 3).len(), 2);
        assert_eq!(monomials_up_to(3, 4, 3).len(), 23);
        assert_eq!(monomials_up_to(4, 8, 3).len(), 81);
        let ms = monomials_up_to(2, 2, 3);
        assert!(ms.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }

    #[test]
    fn function_product_folds_exponents() {
        // x * x^2 = x^3 = x on F_3.
        let x = poly(3, 1, &[(&[1], 1)]);
        let x2 = poly(3, 1, &[(&[2], 1)]);
        assert_eq!(x.mul(&x2), x);
    }

    #[test]
    fn display() {
        let f = poly(3, 2, &[(&[0, 0], 1), (&[1, 2], 2)]);
        assert_eq!(f.to_string(), "1 + 2*x1*x2^2");
    }
}
