//! Dense matrices over a prime field F_p with Gaussian elimination.

use serde::Serialize;

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    (a as u64 * b as u64 % p as u64) as u32
}

pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero element (Fermat).
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Rows of arbitrary integers, reduced mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = FpMatrix::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, reduce(v, p));
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// All off-diagonal entries vanish.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j) == 0))
    }

    /// `self += u v^T`.
    pub fn add_outer(&mut self, u: &[u32], v: &[u32]) {
        assert_eq!((u.len(), v.len()), (self.rows, self.cols));
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                let cur = self.get(i, j);
                self.set(i, j, add_mod(cur, mul_mod(ui, vj, self.p), self.p));
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(src) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if src != r {
                for j in 0..self.cols {
                    self.data.swap(src * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p);
            for j in c..self.cols {
                let v = mul_mod(self.get(r, j), inv, p);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = sub_mod(self.get(i, j), mul_mod(factor, self.get(r, j), p), p);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.get(r, free)) % p;
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| {
                    add_mod(acc, mul_mod(a, b, self.p), self.p)
                })
            })
            .collect()
    }
}

/// Rank over F_p of an integer matrix (entries reduced mod `p`).
pub fn rank_mod_p(rows: &[Vec<i64>], p: u32) -> usize {
    FpMatrix::from_rows(p, rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_mod_p(&[vec![1, 0], vec![0, 1]], 3), 2);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 5), 2);
        assert_eq!(rank_mod_p(&[vec![0, 0], vec![0, 0]], 3), 0);
    }

    /// 2x2 determinant oracle for the rank.
    #[test]
    fn two_by_two_rank_via_determinant() {
        for p in [2u32, 3, 5, 7] {
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    for c in 0..p as i64 {
                        for d in 0..p as i64 {
                            let det = reduce(a * d - b * c, p);
                            let want = if det != 0 {
                                2
                            } else if [a, b, c, d].iter().any(|&x| x != 0) {
                                1
                            } else {
                                0
                            };
                            assert_eq!(rank_mod_p(&[vec![a, b], vec![c, d]], p), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn field_helpers() {
        assert!(is_prime(3) && is_prime(31) && !is_prime(1) && !is_prime(9));
        for p in [3u32, 5, 7, 31] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    proptest! {
        #[test]
        fn outer_products_have_rank_one(
            u in proptest::collection::vec(0u32..5, 1..7),
            v in proptest::collection::vec(0u32..5, 1..7),
        ) {
            prop_assume!(u.iter().any(|&x| x != 0) && v.iter().any(|&x| x != 0));
            let mut m = FpMatrix::zeros(5, u.len(), v.len());
            m.add_outer(&u, &v);
            prop_assert_eq!(m.rank(), 1);
        }

        #[test]
        fn nullspace_dimension_and_kernel(
            entries in proptest::collection::vec(0i64..3, 12),
            rows in 1usize..4,
        ) {
            let cols = 12 / rows;
            let rows_v: Vec<Vec<i64>> = entries.chunks(cols).take(rows).map(|c| c.to_vec()).collect();
            let m = FpMatrix::from_rows(3, &rows_v);
            let ns = m.nullspace();
            prop_assert_eq!(ns.len() + m.rank(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            let basis = FpMatrix::from_rows(3, &ns.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>());
            if !ns.is_empty() {
                prop_assert_eq!(basis.rank(), ns.len());
            }
        }
    }
}
