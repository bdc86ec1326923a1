//! Seeded random families and exhaustive monomial/tuple enumerations.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::exterior::{Frame, MultiVector};
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;

/// Knobs shared by every checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub degree_bound: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            degree_bound: 3,
            seed: 0,
            samples: 200,
        }
    }
}

/// A generator whose stream depends only on the seed and a label, so that
/// independent checks never share state.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, label: &str) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(fnv1a(label.as_bytes()));
        Sampler { rng }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Small nonzero rational, occasionally with denominator 2 or 3.
    pub fn rational(&mut self) -> Rational {
        let mut n = 0;
        while n == 0 {
            n = self.int(-4, 4);
        }
        let d = match self.index(5) {
            0 => 2,
            1 => 3,
            _ => 1,
        };
        Rational::new(n, d)
    }

    /// Random polynomial with up to `max_terms` terms of total degree ≤ `max_degree`.
    pub fn poly(&mut self, num_vars: usize, max_degree: u32, max_terms: usize) -> Poly {
        let k = 1 + self.index(max_terms.max(1));
        let mut terms = Vec::with_capacity(k);
        for _ in 0..k {
            let deg = self.index(max_degree as usize + 1) as u32;
            terms.push((self.monomial(num_vars, deg), self.rational()));
        }
        Poly::from_terms(num_vars, terms)
    }

    /// Random polynomial that is not constant (when `num_vars > 0`).
    pub fn nonconstant_poly(&mut self, num_vars: usize, max_degree: u32, max_terms: usize) -> Poly {
        loop {
            let p = self.poly(num_vars, max_degree.max(1), max_terms);
            if num_vars == 0 || !p.is_constant() {
                return p;
            }
        }
    }

    /// Random homogeneous element of the given degree over `frame`, with up to
    /// `max_terms` terms and coefficients of degree ≤ `coeff_degree`.
    pub fn multivector(&mut self, frame: Frame, degree: usize, coeff_degree: u32, max_terms: usize) -> MultiVector {
        let k = 1 + self.index(max_terms.max(1));
        let mut out = MultiVector::zero(frame);
        if degree > frame.rank {
            return out;
        }
        for _ in 0..k {
            let mut idx: Vec<usize> = (0..frame.rank).collect();
            for i in 0..degree {
                let j = i + self.index(frame.rank - i);
                idx.swap(i, j);
            }
            idx.truncate(degree);
            idx.sort_unstable();
            let c = self.poly(frame.base_dim, coeff_degree, 2);
            out.add_assign(&MultiVector::monomial(frame, &idx, c).expect("sorted indices"));
        }
        out
    }

    fn monomial(&mut self, num_vars: usize, degree: u32) -> Monomial {
        let mut m: Monomial = SmallVec::from_elem(0, num_vars);
        if num_vars == 0 {
            return m;
        }
        for _ in 0..degree {
            let i = self.index(num_vars);
            m[i] += 1;
        }
        m
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Exponent vectors of total degree in `min..=max`, graded by degree and
/// descending lexicographic inside a degree (so `x1` precedes `x2`).
pub fn exponent_vectors(num_vars: usize, min: u32, max: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in min..=max {
        let mut level = Vec::new();
        let mut cur: Monomial = SmallVec::from_elem(0, num_vars);
        compositions(num_vars, d, 0, &mut cur, &mut level);
        level.sort_unstable_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn compositions(n: usize, left: u32, i: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if i + 1 >= n {
        if n == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        cur[i] = left as u16;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for e in 0..=left {
        cur[i] = e as u16;
        compositions(n, left - e, i + 1, cur, out);
    }
    cur[i] = 0;
}

/// Monomials with coefficient one, ordered as [`exponent_vectors`].
pub fn monomials(num_vars: usize, min: u32, max: u32) -> Vec<Poly> {
    exponent_vectors(num_vars, min, max)
        .into_iter()
        .map(|m| Poly::monomial(&m, Rational::one()))
        .collect()
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..k).map(|_| 0..n).multi_cartesian_product().collect()
}

/// Increasing `k`-subsets of `items` (sorted by ascending degree) whose degrees
/// sum to at most `budget`, each with its degree sum.
pub fn budget_tuples<T: Clone>(items: &[(T, u32)], k: usize, budget: u32) -> Vec<(Vec<T>, u32)> {
    debug_assert!(items.windows(2).all(|w| w[0].1 <= w[1].1));
    fn go<T: Clone>(
        items: &[(T, u32)],
        k: usize,
        budget: u32,
        start: usize,
        cur: &mut Vec<usize>,
        sum: u32,
        out: &mut Vec<(Vec<T>, u32)>,
    ) {
        if cur.len() == k {
            out.push((cur.iter().map(|&i| items[i].0.clone()).collect(), sum));
            return;
        }
        for j in start..items.len() {
            let s = sum + items[j].1;
            if s > budget {
                break;
            }
            cur.push(j);
            go(items, k, budget, j + 1, cur, s, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, budget, 0, &mut Vec::with_capacity(k), 0, &mut out);
    out
}

/// Pairs `(a, b)` of budgeted tuples whose combined degree is at most `budget`.
pub fn budget_pairs<T: Clone>(a: &[(Vec<T>, u32)], b: &[(Vec<T>, u32)], budget: u32) -> Vec<(Vec<T>, Vec<T>)> {
    a.iter()
        .flat_map(|(x, dx)| b.iter().filter(move |(_, dy)| dx + dy <= budget).map(move |(y, _)| (x.clone(), y.clone())))
        .collect()
}

/// `x^a e_i` component vectors of rank `rank` with `deg a ≤ max`, ordered by
/// degree, then monomial, then frame index, each with its coefficient degree.
pub fn monomial_sections(num_vars: usize, rank: usize, max: u32) -> Vec<(Vec<Poly>, u32)> {
    let mut out = Vec::new();
    for e in exponent_vectors(num_vars, 0, max) {
        let d: u32 = e.iter().map(|&x| x as u32).sum();
        let c = Poly::monomial(&e, Rational::one());
        for i in 0..rank {
            let mut s = vec![Poly::zero(num_vars); rank];
            s[i] = c.clone();
            out.push((s, d));
        }
    }
    out
}
