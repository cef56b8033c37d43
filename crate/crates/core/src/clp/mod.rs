//! Mechanical check of the rank argument behind the cap set bound.
//!
//! For a progression-free `A` in F_3^n and a degree cutoff `d`, every
//! polynomial `P` of degree `<= d` that vanishes off `A` gives an `|A| x |A|`
//! matrix `P(-a - b)` that is diagonal (off-diagonal sums land outside `A`)
//! and splits into at most `2|M(n, floor(d/2))|` rank-one pieces. The
//! verifier builds a basis of that space and checks each step explicitly.

mod linalg;
mod pointset;
mod poly;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

pub use linalg::{rank_mod_p, FpMatrix};
pub use pointset::{decode_point, encode_point, PointSet};
pub use poly::{eval_poly, expand_neg_sum, monomials_up_to, FieldPoly, Monomial};

use crate::capsearch::{is_progression_free, CapSet};
use crate::error::{domain, Error, Result};
use crate::qnomial::mspace_size;

/// Basis of the polynomials of degree `<= d` vanishing on every point of `zeros`.
///
/// Null space of the `|zeros| x |M(n, d)|` evaluation matrix; the basis
/// contains only nonzero, linearly independent polynomials.
pub fn vanishing_space_basis(n: u32, d: u32, zeros: &PointSet) -> Result<Vec<FieldPoly>> {
    let p = zeros.p();
    if zeros.n() != n {
        return domain(format!(
            "point set lives in dimension {}, expected {n}",
            zeros.n()
        ));
    }
    if d > (p - 1) * n {
        return domain(format!("d = {d} exceeds the top degree {}", (p - 1) * n));
    }
    let monomials = monomials_up_to(n as usize, d, p);
    let eval = evaluation_matrix(&monomials, zeros);
    Ok(eval
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut f = FieldPoly::zero(p, n as usize);
            for (m, c) in monomials.iter().zip(v) {
                f.add_term(m.clone(), c);
            }
            f
        })
        .collect())
}

fn evaluation_matrix(monomials: &[Monomial], points: &PointSet) -> FpMatrix {
    let p = points.p();
    let mut m = FpMatrix::zeros(p, points.len(), monomials.len());
    for (i, x) in points.points().enumerate() {
        for (j, mono) in monomials.iter().enumerate() {
            m.set(i, j, mono.eval(&x, p));
        }
    }
    m
}

/// `Q(b, c) = sum_m m(b) F_m(c) + sum_m m(c) G_m(b)` with every key `m` of
/// degree `<= floor(d/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClpSplit {
    pub n: usize,
    pub d: u32,
    /// `m(b) -> F_m(c)`.
    pub b_side: BTreeMap<Monomial, FieldPoly>,
    /// `m(c) -> G_m(b)`.
    pub c_side: BTreeMap<Monomial, FieldPoly>,
}

impl ClpSplit {
    pub fn terms(&self) -> usize {
        self.b_side.len() + self.c_side.len()
    }

    pub fn max_key_degree(&self) -> Option<u32> {
        self.b_side
            .keys()
            .chain(self.c_side.keys())
            .map(Monomial::degree)
            .max()
    }

    /// Reassemble the `2n`-variable polynomial.
    pub fn reconstruct(&self, p: u32) -> FieldPoly {
        let n = self.n;
        let mut out = FieldPoly::zero(p, 2 * n);
        for (m, f) in &self.b_side {
            let term = FieldPoly::from_monomial(p, m)
                .embed(2 * n, 0)
                .mul(&f.embed(2 * n, n));
            out = out.add(&term);
        }
        for (m, g) in &self.c_side {
            let term = FieldPoly::from_monomial(p, m)
                .embed(2 * n, n)
                .mul(&g.embed(2 * n, 0));
            out = out.add(&term);
        }
        out
    }
}

/// Route each monomial `b^beta c^gamma` of `Q` by its `b`-degree.
///
/// Monomials with `deg beta <= floor(d/2)` go to the `b` side (keyed by
/// `b^beta`); the rest have `deg gamma <= floor(d/2)` and go to the `c` side.
pub fn clp_split(q: &FieldPoly, d: u32) -> Result<ClpSplit> {
    if !q.nvars().is_multiple_of(2) {
        return domain(format!("expected 2n variables, got {}", q.nvars()));
    }
    if q.degree() > d as i64 {
        return Err(Error::Precondition(format!(
            "polynomial degree {} exceeds d = {d}",
            q.degree()
        )));
    }
    let n = q.nvars() / 2;
    let half = d / 2;
    let p = q.p();
    let mut split = ClpSplit {
        n,
        d,
        b_side: BTreeMap::new(),
        c_side: BTreeMap::new(),
    };
    for (mono, &coef) in q.terms() {
        let (beta, gamma) = mono.split(n);
        if beta.degree() <= half {
            split
                .b_side
                .entry(beta)
                .or_insert_with(|| FieldPoly::zero(p, n))
                .add_term(gamma, coef);
        } else {
            debug_assert!(gamma.degree() <= half);
            split
                .c_side
                .entry(gamma)
                .or_insert_with(|| FieldPoly::zero(p, n))
                .add_term(beta, coef);
        }
    }
    Ok(split)
}

/// `|A| x |A|` matrix with entry `(a, b) = P(-a - b)`, rows in code order.
pub fn product_matrix(poly: &FieldPoly, set: &PointSet) -> Result<FpMatrix> {
    let p = poly.p();
    if set.p() != p || set.n() as usize != poly.nvars() {
        return domain("point set and polynomial disagree on field or dimension");
    }
    let points: Vec<Vec<u32>> = set.points().collect();
    let mut m = FpMatrix::zeros(p, points.len(), points.len());
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate() {
            let x: Vec<u32> = a
                .iter()
                .zip(b)
                .map(|(&u, &v)| (2 * p - u - v) % p)
                .collect();
            m.set(i, j, poly.eval_unchecked(&x));
        }
    }
    Ok(m)
}

/// Matrix `sum_m m(a) F_m(b) + sum_m G_m(a) m(b)` over `A`, built from rank-one pieces.
fn rank_one_sum(split: &ClpSplit, points: &[Vec<u32>], p: u32) -> FpMatrix {
    let k = points.len();
    let mut m = FpMatrix::zeros(p, k, k);
    let values =
        |f: &FieldPoly| -> Vec<u32> { points.iter().map(|x| f.eval_unchecked(x)).collect() };
    for (mono, f) in &split.b_side {
        let left: Vec<u32> = points.iter().map(|x| mono.eval(x, p)).collect();
        m.add_outer(&left, &values(f));
    }
    for (mono, g) in &split.c_side {
        let right: Vec<u32> = points.iter().map(|x| mono.eval(x, p)).collect();
        m.add_outer(&values(g), &right);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifierReport {
    pub n: u32,
    pub d: u32,
    pub set_size: usize,
    /// `|M(n, d)|`.
    pub mspace: usize,
    /// Rank of the evaluation matrix on the complement of `A`.
    pub eval_rank: usize,
    pub dim_v: usize,
    /// `|M(n, d)| - (3^n - |A|)`.
    pub dim_lower_bound: i64,
    pub max_support: usize,
    /// `2 |M(n, floor(d/2))|`.
    pub support_cap: usize,
    /// Largest rank of `P(-a - b)` over the basis.
    pub rank: usize,
    /// Largest number of rank-one pieces in a split.
    pub rank_one_terms: usize,
    pub diagonal_ok: bool,
    pub rank_ok: bool,
    pub support_ok: bool,
    pub bound_ok: bool,
    /// Split reconstructs `P(-b-c)` and its rank-one pieces sum to the matrix.
    pub decomposition_ok: bool,
}

impl VerifierReport {
    pub fn all_ok(&self) -> bool {
        self.diagonal_ok
            && self.rank_ok
            && self.support_ok
            && self.bound_ok
            && self.decomposition_ok
    }
}

struct ElementCheck {
    diagonal: bool,
    rank: usize,
    support: usize,
    support_consistent: bool,
    terms: usize,
    decomposition: bool,
}

fn check_element(
    poly: &FieldPoly,
    set: &PointSet,
    points: &[Vec<u32>],
    d: u32,
) -> Result<ElementCheck> {
    let p = poly.p();
    let matrix = product_matrix(poly, set)?;
    let support = poly.support_size();
    // On F_3, -a - a = a, so the diagonal is P restricted to A.
    let diag_matches = points
        .iter()
        .enumerate()
        .all(|(i, a)| matrix.get(i, i) == poly.eval_unchecked(a));
    let nonzero_diag = (0..points.len()).filter(|&i| matrix.get(i, i) != 0).count();

    let expanded = expand_neg_sum(poly);
    let split = clp_split(&expanded, d)?;
    let reconstructed = split.reconstruct(p) == expanded;
    let key_degrees_ok = split.max_key_degree().is_none_or(|deg| deg <= d / 2);
    let pieces_match = rank_one_sum(&split, points, p) == matrix;

    Ok(ElementCheck {
        diagonal: matrix.is_diagonal(),
        rank: matrix.rank(),
        support,
        support_consistent: diag_matches && nonzero_diag == support,
        terms: split.terms(),
        decomposition: reconstructed && key_degrees_ok && pieces_match,
    })
}

/// Verify the rank argument for a progression-free `A` in F_3^n at degree `d`.
pub fn verify_support_bound(n: u32, d: u32, set: &PointSet) -> Result<VerifierReport> {
    if set.p() != 3 {
        return Err(Error::Unsupported(format!(
            "the support bound is verified over F_3 only, got p = {}",
            set.p()
        )));
    }
    if set.n() != n {
        return domain(format!("point set has dimension {}, expected {n}", set.n()));
    }
    if d > 2 * n {
        return domain(format!("d = {d} outside [0, {}]", 2 * n));
    }
    if !is_progression_free(&CapSet::from_point_set(set)?) {
        return Err(Error::Precondition(
            "the point set contains three distinct points summing to zero".into(),
        ));
    }

    let complement = set.complement();
    let basis = vanishing_space_basis(n, d, &complement)?;
    let mspace = small(mspace_size(n, d as i64, 3)?);
    let support_cap = 2 * small(mspace_size(n, (d / 2) as i64, 3)?);
    let points: Vec<Vec<u32>> = set.points().collect();

    // Ordered collect keeps aggregation independent of scheduling.
    let checks = basis
        .par_iter()
        .map(|poly| check_element(poly, set, &points, d))
        .collect::<Result<Vec<_>>>()?;

    let dim_v = basis.len();
    let total = 3usize.pow(n);
    let dim_lower_bound = mspace as i64 - (total - set.len()) as i64;
    let max_support = checks.iter().map(|c| c.support).max().unwrap_or(0);
    let rank = checks.iter().map(|c| c.rank).max().unwrap_or(0);
    let rank_one_terms = checks.iter().map(|c| c.terms).max().unwrap_or(0);

    Ok(VerifierReport {
        n,
        d,
        set_size: set.len(),
        mspace,
        eval_rank: mspace - dim_v,
        dim_v,
        dim_lower_bound,
        max_support,
        support_cap,
        rank,
        rank_one_terms,
        diagonal_ok: checks.iter().all(|c| c.diagonal),
        rank_ok: checks
            .iter()
            .all(|c| c.rank <= support_cap && c.rank <= c.terms),
        support_ok: checks
            .iter()
            .all(|c| c.support <= support_cap && c.support_consistent),
        bound_ok: dim_v as i64 >= dim_lower_bound,
        decomposition_ok: checks
            .iter()
            .all(|c| c.decomposition && c.terms <= support_cap),
    })
}

fn small(v: num_bigint::BigUint) -> usize {
    v.to_usize()
        .expect("monomial counts at verifier scale fit in usize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: u32, pts: &[&[u32]]) -> PointSet {
        PointSet::from_points(3, n, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn poly(p: u32, nvars: usize, terms: &[(&[u8], i64)]) -> FieldPoly {
        FieldPoly::from_terms(p, nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn vanishing_basis_examples() {
        let basis = vanishing_space_basis(1, 1, &set(1, &[&[2]])).unwrap();
        assert_eq!(basis.len(), 1);
        // The basis vector is a nonzero multiple of 1 + x.
        let b = &basis[0];
        assert_eq!(eval_poly(b, &[2]).unwrap(), 0);
        let c = b.terms().values().next().copied().unwrap();
        let scaled = poly(3, 1, &[(&[0], c as i64), (&[1], c as i64)]);
        assert_eq!(b, &scaled);

        assert_eq!(vanishing_space_basis(1, 2, &set(1, &[])).unwrap().len(), 3);
        assert_eq!(
            vanishing_space_basis(1, 2, &PointSet::full(3, 1))
                .unwrap()
                .len(),
            0
        );
        assert!(vanishing_space_basis(1, 3, &set(1, &[])).is_err());
    }

    #[test]
    fn basis_elements_vanish_and_are_nonzero() {
        let zeros = set(2, &[&[0, 1], &[1, 1], &[2, 2], &[1, 0]]);
        let basis = vanishing_space_basis(2, 3, &zeros).unwrap();
        assert!(basis.len() >= monomials_up_to(2, 3, 3).len() - zeros.len());
        for b in &basis {
            assert!(!b.is_zero());
            assert!(b.degree() <= 3);
            for x in zeros.points() {
                assert_eq!(eval_poly(b, &x).unwrap(), 0);
            }
        }
    }

    #[test]
    fn split_worked_example() {
        let q = poly(3, 2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        let split = clp_split(&q, 2).unwrap();
        let b1 = Monomial::new(vec![1]);
        let one = Monomial::new(vec![0]);
        assert_eq!(split.b_side[&one], poly(3, 1, &[(&[2], 1)]));
        assert_eq!(split.b_side[&b1], poly(3, 1, &[(&[1], 2)]));
        assert_eq!(split.c_side.len(), 1);
        assert_eq!(split.c_side[&one], poly(3, 1, &[(&[2], 1)]));
        assert_eq!(split.reconstruct(3), q);
    }

    #[test]
    fn split_of_zero_and_degree_violation() {
        let split = clp_split(&FieldPoly::zero(3, 4), 3).unwrap();
        assert_eq!(split.terms(), 0);
        let q = poly(3, 2, &[(&[2, 1], 1)]);
        assert!(matches!(clp_split(&q, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn product_matrix_examples() {
        let a = set(1, &[&[0], &[1]]);
        let one_plus_x = poly(3, 1, &[(&[0], 1), (&[1], 1)]);
        let m = product_matrix(&one_plus_x, &a).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1, 0], vec![0, 2]]);
        let zero = product_matrix(&FieldPoly::zero(3, 1), &a).unwrap();
        assert_eq!(zero.to_rows(), vec![vec![0, 0], vec![0, 0]]);
        let ones = product_matrix(&FieldPoly::constant(3, 1, 1), &a).unwrap();
        assert_eq!(ones.to_rows(), vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn verify_smallest_case() {
        let r = verify_support_bound(1, 1, &set(1, &[&[0], &[1]])).unwrap();
        assert_eq!((r.dim_v, r.max_support, r.support_cap), (1, 2, 2));
        assert!(r.all_ok(), "{r:?}");
    }

    #[test]
    fn verify_rejects_progressions_and_other_fields() {
        let line = set(1, &[&[0], &[1], &[2]]);
        assert!(matches!(
            verify_support_bound(1, 1, &line),
            Err(Error::Precondition(_))
        ));
        let f5 = PointSet::from_points(5, 1, &[vec![0]]).unwrap();
        assert!(matches!(
            verify_support_bound(1, 1, &f5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn verify_searched_caps() {
        use crate::capsearch::max_capset;
        for (n, ds) in [(2u32, [2u32, 3]), (3, [3, 4])] {
            let witness = max_capset(n, None).unwrap().witness.to_point_set();
            for d in ds {
                let r = verify_support_bound(n, d, &witness).unwrap();
                assert!(r.all_ok(), "n={n} d={d}: {r:?}");
                assert_eq!(r.dim_v + r.eval_rank, r.mspace);
            }
        }
    }

    #[test]
    fn report_is_deterministic() {
        let witness = crate::capsearch::max_capset(2, None)
            .unwrap()
            .witness
            .to_point_set();
        let a = verify_support_bound(2, 3, &witness).unwrap();
        let b = verify_support_bound(2, 3, &witness).unwrap();
        assert_eq!(a, b);
    }

    fn arb_poly(n: usize, d: u32) -> impl Strategy<Value = FieldPoly> {
        let monos = monomials_up_to(n, d, 3);
        proptest::collection::vec(0i64..3, monos.len()).prop_map(move |coefs| {
            let mut f = FieldPoly::zero(3, n);
            for (m, c) in monos.iter().zip(coefs) {
                f.add_term(m.clone(), c as u32);
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn split_reconstructs(
            (d, p) in (1usize..=3, 0u32..=4).prop_flat_map(|(n, d)| {
                let d = d.min(2 * n as u32);
                (Just(d), arb_poly(n, d))
            })
        ) {
            let q = expand_neg_sum(&p);
            prop_assert!(q.degree() <= d as i64);
            let split = clp_split(&q, d).unwrap();
            prop_assert_eq!(split.reconstruct(3), q);
            prop_assert!(split.max_key_degree().is_none_or(|k| k <= d / 2));
        }

        #[test]
        fn eval_expand_consistency(
            p in arb_poly(3, 6),
            b in proptest::collection::vec(0u32..3, 3),
            c in proptest::collection::vec(0u32..3, 3),
        ) {
            let q = expand_neg_sum(&p);
            let bc: Vec<u32> = b.iter().chain(&c).copied().collect();
            let neg: Vec<u32> = b.iter().zip(&c).map(|(x, y)| (6 - x - y) % 3).collect();
            prop_assert_eq!(eval_poly(&q, &bc).unwrap(), eval_poly(&p, &neg).unwrap());
        }
    }
}
