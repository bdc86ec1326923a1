//! Brute-force fundamental-identity oracle on dense integer tensors, compared
//! with the table-based checker on every small test algebra.

use nambu_core::filippov::{a4, check_fundamental_identity, StructureConstants};
use nambu_core::{Poly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Raw = Vec<(Vec<usize>, Vec<i64>)>;

/// Dense bracket `c[t][l]` over all ordered tuples, filled by permuting each
/// raw entry and counting inversions.
struct Dense {
    dim: usize,
    arity: usize,
    c: Vec<Vec<i64>>,
}

fn flat(dim: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &i| acc * dim + i)
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn inversions(v: &[usize]) -> usize {
    (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).filter(|&(i, j)| v[i] > v[j]).count()
}

impl Dense {
    fn new(dim: usize, arity: usize, raw: &Raw) -> Self {
        let mut c = vec![vec![0i64; dim]; dim.pow(arity as u32)];
        for (idx, val) in raw {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let base = if inversions(idx) % 2 == 0 { 1 } else { -1 };
            for p in permutations(&sorted) {
                let s = if inversions(&p) % 2 == 0 { base } else { -base };
                c[flat(dim, &p)] = val.iter().map(|x| s * x).collect();
            }
        }
        Dense { dim, arity, c }
    }

    fn bracket(&self, t: &[usize]) -> &[i64] {
        &self.c[flat(self.dim, t)]
    }

    /// `[a, [b]] − Σ_i [b_1, …, [a, b_i], …, b_n]` in frame coordinates.
    fn defect(&self, a: &[usize], b: &[usize]) -> Vec<i64> {
        let mut out = vec![0i64; self.dim];
        let inner = self.bracket(b);
        for (l, &w) in inner.iter().enumerate() {
            if w != 0 {
                let mut t = a.to_vec();
                t.push(l);
                for (o, v) in out.iter_mut().zip(self.bracket(&t)) {
                    *o += w * v;
                }
            }
        }
        for i in 0..self.arity {
            let mut t = a.to_vec();
            t.push(b[i]);
            for (l, &w) in self.bracket(&t).iter().enumerate() {
                if w != 0 {
                    let mut bs = b.to_vec();
                    bs[i] = l;
                    for (o, v) in out.iter_mut().zip(self.bracket(&bs)) {
                        *o -= w * v;
                    }
                }
            }
        }
        out
    }

    /// Index of the first failing tuple in lexicographic order, and the count.
    fn first_failure(&self) -> (Option<(usize, Vec<usize>)>, usize) {
        let k = 2 * self.arity - 1;
        let total = self.dim.pow(k as u32);
        for code in 0..total {
            let mut t = vec![0usize; k];
            let mut c = code;
            for slot in (0..k).rev() {
                t[slot] = c % self.dim;
                c /= self.dim;
            }
            let (a, b) = t.split_at(self.arity - 1);
            if self.defect(a, b).iter().any(|&x| x != 0) {
                return (Some((code, t)), total);
            }
        }
        (None, total)
    }
}

fn table(dim: usize, arity: usize, raw: &Raw) -> StructureConstants {
    let mut sc = StructureConstants::new(dim, arity, 0).unwrap();
    for (idx, val) in raw {
        sc.set(idx, val.iter().map(|&v| Poly::constant(0, Rational::from_int(v))).collect()).unwrap();
    }
    sc
}

fn a4_raw() -> Raw {
    vec![
        (vec![0, 1, 2], vec![0, 0, 0, 1]),
        (vec![0, 1, 3], vec![0, 0, -1, 0]),
        (vec![0, 2, 3], vec![0, 1, 0, 0]),
        (vec![1, 2, 3], vec![-1, 0, 0, 0]),
    ]
}

fn random_raw(rng: &mut ChaCha8Rng, dim: usize, arity: usize, density: f64) -> Raw {
    let mut out = Raw::new();
    let mut idx: Vec<usize> = (0..arity).collect();
    loop {
        if rng.gen_bool(density) {
            let val: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            let mut shuffled = idx.clone();
            if rng.gen_bool(0.5) {
                shuffled.swap(0, 1);
            }
            out.push((shuffled, val));
        }
        // next increasing tuple
        let mut p = arity;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] < dim - arity + p {
                idx[p] += 1;
                for q in p + 1..arity {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

fn algebras() -> Vec<(String, usize, usize, Raw)> {
    let mut corrupted = a4_raw();
    corrupted[0].1 = vec![0, 0, 1, 0];
    let mut v = vec![
        ("a4".to_string(), 4, 3, a4_raw()),
        ("a4 redirected".to_string(), 4, 3, corrupted),
        ("two-entry".to_string(), 4, 3, vec![(vec![0, 1, 2], vec![0, 0, 0, 1]), (vec![1, 2, 3], vec![0, 0, 0, 1])]),
        ("zero".to_string(), 4, 3, Raw::new()),
        ("so3".to_string(), 3, 2, vec![(vec![0, 1], vec![0, 0, 1]), (vec![1, 2], vec![1, 0, 0]), (vec![2, 0], vec![0, 1, 0])]),
        ("not lie".to_string(), 3, 2, vec![(vec![0, 1], vec![0, 0, 1]), (vec![1, 2], vec![0, 1, 0])]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..12 {
        let (dim, arity) = [(3, 2), (4, 2), (4, 3), (3, 3)][k % 4];
        v.push((format!("random {k}"), dim, arity, random_raw(&mut rng, dim, arity, 0.4)));
    }
    v
}

#[test]
fn checker_agrees_with_dense_oracle() {
    let mut failures = 0;
    for (name, dim, arity, raw) in algebras() {
        let sc = table(dim, arity, &raw);
        let report = check_fundamental_identity(&sc);
        let (oracle, total) = Dense::new(dim, arity, &raw).first_failure();
        match oracle {
            None => {
                assert!(report.passed(), "{name}: {}", report.summary());
                assert_eq!(report.checked as usize, total, "{name}");
            }
            Some((code, t)) => {
                failures += 1;
                assert!(!report.passed(), "{name}: oracle fails at {t:?}");
                assert_eq!(report.checked as usize, code + 1, "{name}");
                let labels: Vec<String> = t.iter().map(|i| format!("e{}", i + 1)).collect();
                assert_eq!(report.witness.unwrap().inputs, labels, "{name}");
            }
        }
    }
    // both verdicts are exercised
    assert!(failures >= 3);
}

#[test]
fn oracle_reproduces_frozen_a4_values() {
    let (ok, total) = Dense::new(4, 3, &a4_raw()).first_failure();
    assert!(ok.is_none());
    assert_eq!(total, 1024);
    assert_eq!(table(4, 3, &a4_raw()), a4());
}
