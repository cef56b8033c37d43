//! Exact maximum progression-free sets (caps) in F_3^n by branch and bound.
//!
//! Points of F_3^n are encoded as base-3 integers in `[0, 3^n)`, first
//! coordinate most significant, so integer order is lexicographic order on
//! coordinate vectors.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::clp::PointSet;
use crate::error::{domain, Result};

/// Largest dimension the bitset representation can hold (3^5 = 243 points).
pub const MAX_DIM: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapSet {
    pub n: u32,
    pub points: Vec<u32>,
}

impl CapSet {
    /// Sorted, deduplicated set of encoded points; rejects out-of-range codes.
    pub fn new(n: u32, mut points: Vec<u32>) -> Result<Self> {
        let size = 3u32.pow(n);
        if let Some(bad) = points.iter().find(|&&p| p >= size) {
            return domain(format!("point code {bad} outside [0, {size}) for n = {n}"));
        }
        points.sort_unstable();
        points.dedup();
        Ok(CapSet { n, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::from_codes(3, self.n, self.points.iter().map(|&p| p as u64))
            .expect("cap set codes are in range")
    }

    pub fn from_point_set(set: &PointSet) -> Result<Self> {
        if set.p() != 3 {
            return domain(format!("cap sets live in F_3^n, got p = {}", set.p()));
        }
        CapSet::new(set.n(), set.codes().iter().map(|&c| c as u32).collect())
    }
}

pub fn digits(code: u32, n: u32) -> Vec<u8> {
    let mut out = vec![0u8; n as usize];
    let mut rem = code;
    for slot in out.iter_mut().rev() {
        *slot = (rem % 3) as u8;
        rem /= 3;
    }
    out
}

pub fn encode(coords: &[u8]) -> u32 {
    coords.iter().fold(0, |acc, &c| acc * 3 + c as u32)
}

/// The unique `c` with `a + b + c = 0` coordinatewise mod 3.
pub fn complete_triple(a: u32, b: u32, n: u32) -> u32 {
    let (da, db) = (digits(a, n), digits(b, n));
    let third: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (6 - x - y) % 3).collect();
    encode(&third)
}

/// No three pairwise-distinct members sum to zero.
///
/// Over F_3, `a + a + c = 0` forces `c = a`, so "pairwise distinct" and
/// "not all equal" describe the same triples.
pub fn is_progression_free(set: &CapSet) -> bool {
    let members: std::collections::HashSet<u32> = set.points.iter().copied().collect();
    for (i, &a) in set.points.iter().enumerate() {
        for &b in &set.points[i + 1..] {
            let c = complete_triple(a, b, set.n);
            if c != a && c != b && members.contains(&c) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: u32,
    pub max_size: usize,
    pub witness: CapSet,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
    /// Points assumed present, justified by affine invariance.
    pub fixed_prefix: Vec<u32>,
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Bits([u64; 4]);

impl Bits {
    fn full(len: usize) -> Self {
        let mut b = Bits::default();
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1 << (i & 63));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| (i << 6) + w.trailing_zeros() as usize)
    }

    /// Members strictly greater than `i`.
    fn above(&self, i: usize) -> Self {
        let mut out = *self;
        let word = i >> 6;
        for w in out.0.iter_mut().take(word) {
            *w = 0;
        }
        let bit = i & 63;
        out.0[word] &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
        out
    }
}

struct Searcher {
    size: usize,
    /// `third[a * size + b]` completes the line through `a` and `b`.
    third: Vec<u8>,
    best: AtomicUsize,
    best_witness: Mutex<Vec<u32>>,
    nodes: AtomicU64,
    budget: Option<u64>,
    exhausted: AtomicBool,
}

impl Searcher {
    fn new(n: u32, budget: Option<u64>) -> Self {
        let size = 3usize.pow(n);
        let mut third = vec![0u8; size * size];
        for a in 0..size {
            for b in 0..size {
                third[a * size + b] = complete_triple(a as u32, b as u32, n) as u8;
            }
        }
        Searcher {
            size,
            third,
            best: AtomicUsize::new(0),
            best_witness: Mutex::new(Vec::new()),
            nodes: AtomicU64::new(0),
            budget,
            exhausted: AtomicBool::new(false),
        }
    }

    fn third(&self, a: usize, b: usize) -> usize {
        self.third[a * self.size + b] as usize
    }

    /// Candidates left after adding `p` to `chosen`, given candidates above `p`.
    fn restrict(&self, chosen: &[u32], p: usize, above: Bits) -> Bits {
        let mut next = above;
        for &s in chosen {
            next.remove(self.third(p, s as usize));
        }
        next
    }

    fn tick(&self) -> bool {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(limit) = self.budget {
            if count > limit {
                self.exhausted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    fn record(&self, chosen: &[u32]) {
        if chosen.len() <= self.best.load(Ordering::Relaxed) {
            return;
        }
        let mut witness = self.best_witness.lock().expect("witness lock poisoned");
        if chosen.len() > witness.len() {
            *witness = chosen.to_vec();
            self.best.fetch_max(chosen.len(), Ordering::Relaxed);
        }
    }

    fn dfs(&self, chosen: &mut Vec<u32>, mut cand: Bits) {
        if !self.tick() {
            return;
        }
        self.record(chosen);
        while let Some(p) = cand.first() {
            if chosen.len() + cand.count() <= self.best.load(Ordering::Relaxed) {
                return;
            }
            cand.remove(p);
            let next = self.restrict(chosen, p, cand);
            chosen.push(p as u32);
            self.dfs(chosen, next);
            chosen.pop();
            if self.exhausted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    /// First set of exactly `target` points in canonical DFS order.
    fn first_of_size(&self, chosen: &mut Vec<u32>, mut cand: Bits, target: usize) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if chosen.len() == target {
            return true;
        }
        while let Some(p) = cand.first() {
            if chosen.len() + cand.count() < target {
                return false;
            }
            cand.remove(p);
            let next = self.restrict(chosen, p, cand);
            chosen.push(p as u32);
            if self.first_of_size(chosen, next, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Points every search starts from: `0`, `e_n`, and `e_(n-1)` when `n >= 2`.
///
/// Any two points of a cap are the image of `0, e_n` under an affine bijection,
/// and any three (never collinear in a cap) the image of `0, e_n, e_(n-1)`.
/// These codes are also the three smallest a lexicographically least cap can
/// start with, so fixing them loses neither maxima nor the least witness.
pub fn fixed_prefix(n: u32) -> Vec<u32> {
    if n >= 2 {
        vec![0, 1, 3]
    } else {
        vec![0, 1]
    }
}

/// Maximum cap in F_3^n by exhaustive branch and bound from [`fixed_prefix`].
///
/// Branches on the first free point run on the current rayon pool. When
/// `node_budget` runs out the result carries the best cap seen and
/// `proven_optimal = false`. A completed search reports the lexicographically
/// least maximum cap, independent of scheduling.
pub fn max_capset(n: u32, node_budget: Option<u64>) -> Result<SearchResult> {
    if n == 0 {
        return domain("cap search needs n >= 1");
    }
    if n > MAX_DIM {
        return domain(format!("cap search supports n <= {MAX_DIM}, got {n}"));
    }
    let s = Searcher::new(n, node_budget);
    let prefix = fixed_prefix(n);
    let mut root = Bits::full(s.size).above(*prefix.last().expect("nonempty prefix") as usize);
    for (i, &a) in prefix.iter().enumerate() {
        for &b in &prefix[i + 1..] {
            root.remove(s.third(a as usize, b as usize));
        }
    }
    s.record(&prefix);

    let firsts: Vec<usize> =
        std::iter::successors(root.first(), |&p| root.above(p).first()).collect();
    firsts.into_par_iter().for_each(|p| {
        let next = s.restrict(&prefix, p, root.above(p));
        if prefix.len() + 1 + next.count() <= s.best.load(Ordering::Relaxed) {
            return;
        }
        let mut chosen = prefix.clone();
        chosen.push(p as u32);
        s.dfs(&mut chosen, next);
    });

    let exhausted = s.exhausted.load(Ordering::Relaxed);
    let max_size = s.best.load(Ordering::Relaxed);
    let witness = if exhausted {
        s.best_witness
            .lock()
            .expect("witness lock poisoned")
            .clone()
    } else {
        let mut chosen = prefix.clone();
        let found = s.first_of_size(&mut chosen, root, max_size);
        debug_assert!(found, "a cap of the maximum size was recorded");
        chosen
    };

    Ok(SearchResult {
        n,
        max_size,
        witness: CapSet::new(n, witness)?,
        nodes_explored: s.nodes.load(Ordering::Relaxed),
        proven_optimal: !exhausted,
        fixed_prefix: prefix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_points(n: u32) -> CapSet {
        CapSet::new(n, (0..3u32.pow(n)).collect()).unwrap()
    }

    #[test]
    fn triple_completion() {
        assert_eq!(complete_triple(0, 0, 1), 0);
        assert_eq!(complete_triple(0, 1, 1), 2);
        let a = encode(&[1, 2]);
        let b = encode(&[2, 2]);
        assert_eq!(digits(complete_triple(a, b, 2), 2), vec![0, 2]);
    }

    #[test]
    fn progression_free_examples() {
        assert!(is_progression_free(&CapSet::new(1, vec![0, 1]).unwrap()));
        assert!(!is_progression_free(
            &CapSet::new(1, vec![0, 1, 2]).unwrap()
        ));
        assert!(!is_progression_free(&all_points(2)));
        assert!(is_progression_free(&CapSet::new(3, vec![]).unwrap()));
    }

    #[test]
    fn repeated_point_only_completes_to_itself() {
        for n in 1..=3 {
            for a in 0..3u32.pow(n) {
                assert_eq!(complete_triple(a, a, n), a);
            }
        }
    }

    #[test]
    fn out_of_range_codes_rejected() {
        assert!(CapSet::new(2, vec![9]).is_err());
    }

    #[test]
    fn bits_above() {
        let b = Bits::full(200);
        assert_eq!(b.above(0).count(), 199);
        assert_eq!(b.above(63).count(), 136);
        assert_eq!(b.above(63).first(), Some(64));
        assert_eq!(b.above(199).count(), 0);
    }

    /// Every subset of F_3^n, n <= 2.
    fn brute_force_max(n: u32) -> usize {
        let size = 3u32.pow(n);
        (0u32..1 << size)
            .filter_map(|mask| {
                let pts: Vec<u32> = (0..size).filter(|i| mask >> i & 1 == 1).collect();
                let set = CapSet::new(n, pts).unwrap();
                is_progression_free(&set).then_some(set.len())
            })
            .max()
            .unwrap()
    }

    #[test]
    fn matches_subset_enumeration() {
        assert_eq!(brute_force_max(1), 2);
        assert_eq!(brute_force_max(2), 4);
        for n in 1..=2 {
            let r = max_capset(n, None).unwrap();
            assert_eq!(r.max_size, brute_force_max(n));
            assert!(r.proven_optimal);
        }
    }

    /// Grow caps one point at a time in increasing order with no size pruning.
    /// The first cap of each new record size is the least one of that size.
    fn naive_growth(n: u32, current: &mut Vec<u32>, start: u32, best: &mut Vec<u32>) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for p in start..3u32.pow(n) {
            let ok = current.iter().enumerate().all(|(i, &a)| {
                current[i + 1..]
                    .iter()
                    .all(|&b| complete_triple(a, b, n) != p)
            });
            if ok {
                current.push(p);
                naive_growth(n, current, p + 1, best);
                current.pop();
            }
        }
    }

    #[test]
    fn dimension_three_against_naive_growth() {
        let mut best = Vec::new();
        naive_growth(3, &mut vec![0], 1, &mut best);
        assert_eq!(best.len(), 9);
        let r = max_capset(3, None).unwrap();
        assert_eq!(r.max_size, 9);
        assert!(is_progression_free(&r.witness));
        assert_eq!(r.witness.points, best);
        assert_eq!(r.fixed_prefix, vec![0, 1, 3]);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let r = max_capset(2, None).unwrap();
        assert_eq!(r.witness.points, vec![0, 1, 3, 4]);
        let again = max_capset(2, None).unwrap();
        assert_eq!(r.witness, again.witness);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = max_capset(4, Some(50)).unwrap();
        assert!(!r.proven_optimal);
        assert!(r.max_size >= 2);
        assert_eq!(r.witness.len(), r.max_size);
        assert!(is_progression_free(&r.witness));
    }

    #[test]
    fn bad_dimensions() {
        assert!(max_capset(0, None).is_err());
        assert!(max_capset(6, None).is_err());
    }

    #[test]
    fn affine_images_stay_progression_free() {
        use proptest::prelude::*;
        use proptest::test_runner::TestRunner;
        let witness = max_capset(3, None).unwrap().witness;
        let mut runner = TestRunner::default();
        let strategy = (
            Just(vec![0usize, 1, 2]).prop_shuffle(),
            proptest::collection::vec(0u8..3, 3),
        );
        runner
            .run(&strategy, |(perm, shift)| {
                let moved: Vec<u32> = witness
                    .points
                    .iter()
                    .map(|&p| {
                        let d = digits(p, 3);
                        let img: Vec<u8> = (0..3).map(|i| (d[perm[i]] + shift[i]) % 3).collect();
                        encode(&img)
                    })
                    .collect();
                let moved = CapSet::new(3, moved).unwrap();
                prop_assert_eq!(moved.len(), witness.len());
                prop_assert!(is_progression_free(&moved));
                Ok(())
            })
            .unwrap();
    }
}
