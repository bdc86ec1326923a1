//! Filippov (n-Lie) brackets given by structure constants on a finite frame,
//! their Leibniz extension to sections, and exhaustive identity checks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{apply_components, det, sort_with_sign, Frame, Indices, MultiVector};
use crate::extension::AnchorMap;
use crate::linalg::RatMatrix;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::report::{self, VerificationReport, Witness};
use crate::sample::{all_tuples, increasing_tuples};

/// A section of a rank-`D` bundle as its component vector.
pub type Section = Vec<Poly>;

/// Values a bracket can produce: enough structure to form identity defects.
pub trait BracketValue: Clone + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn render(&self) -> String;
}

impl BracketValue for Poly {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl BracketValue for MultiVector {
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl BracketValue for Section {
    fn plus(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + b).collect()
    }
    fn minus(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a - b).collect()
    }
    fn negated(&self) -> Self {
        self.iter().map(|a| -a).collect()
    }
    fn is_zero_value(&self) -> bool {
        self.iter().all(Poly::is_zero)
    }
    fn render(&self) -> String {
        render_section(self)
    }
}

pub fn render_section(s: &[Poly]) -> String {
    let parts: Vec<String> = s
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| if c.is_one() { format!("e{}", i + 1) } else { format!("({c})*e{}", i + 1) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// A section rendered with the symbols of `frame`.
pub fn render_in(frame: Frame, s: &[Poly]) -> String {
    match MultiVector::from_components(frame, s) {
        Ok(x) => x.render(),
        Err(_) => render_section(s),
    }
}

/// `[a_1,…,a_{n−1},[b_1,…,b_n]] − Σ_i [b_1,…,[a_1,…,a_{n−1},b_i],…,b_n]`.
pub fn fi_defect<T: BracketValue>(
    bracket: &dyn Fn(&[T]) -> Result<T>,
    a: &[T],
    b: &[T],
) -> Result<T> {
    let inner = bracket(b)?;
    let mut args: Vec<T> = a.to_vec();
    args.push(inner);
    let mut defect = bracket(&args)?;
    for i in 0..b.len() {
        args.truncate(a.len());
        args.push(b[i].clone());
        let ab = bracket(&args)?;
        let mut bs = b.to_vec();
        bs[i] = ab;
        defect = defect.minus(&bracket(&bs)?);
    }
    Ok(defect)
}

/// Arity-`n` bracket table on a frame of size `D`; keys are strictly increasing
/// and the other orderings are reconstructed by permutation sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    arity: usize,
    num_vars: usize,
    table: BTreeMap<Indices, Section>,
}

impl StructureConstants {
    pub fn new(dim: usize, arity: usize, num_vars: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::Invalid(format!("arity must be at least 2, got {arity}")));
        }
        Ok(StructureConstants { dim, arity, num_vars, table: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Indices, &Section)> {
        self.table.iter()
    }

    /// Sets `[e_{i1},…,e_{in}] = value`, reordering the indices with sign.
    pub fn set(&mut self, indices: &[usize], value: Section) -> Result<()> {
        if indices.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: indices.len() });
        }
        if value.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: value.len() });
        }
        for &i in indices {
            if i >= self.dim {
                return Err(Error::IndexOutOfRange { index: i, bound: self.dim, what: "frame elements" });
            }
        }
        for v in &value {
            if v.num_vars() != self.num_vars {
                return Err(Error::VarMismatch { left: v.num_vars(), right: self.num_vars });
            }
        }
        let mut idx = indices.to_vec();
        let sign = sort_with_sign(&mut idx)
            .ok_or_else(|| Error::Invalid(format!("repeated index in {:?}", one_based(indices))))?;
        let key: Indices = idx.iter().map(|&i| i as u8).collect();
        let value = if sign < 0 { value.negated() } else { value };
        if value.is_zero_value() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, value);
        }
        Ok(())
    }

    pub fn zero_section(&self) -> Section {
        vec![Poly::zero(self.num_vars); self.dim]
    }

    pub fn basis_section(&self, i: usize) -> Section {
        let mut s = self.zero_section();
        s[i] = Poly::one(self.num_vars);
        s
    }

    /// Stored value for increasing indices.
    pub fn entry(&self, sorted: &[usize]) -> Section {
        let key: Indices = sorted.iter().map(|&i| i as u8).collect();
        self.table.get(&key).cloned().unwrap_or_else(|| self.zero_section())
    }

    /// `[e_{i1},…,e_{in}]` for arbitrary indices via sign reconstruction.
    pub fn frame_bracket(&self, indices: &[usize]) -> Section {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => self.zero_section(),
            Some(s) => {
                let v = self.entry(&idx);
                if s < 0 {
                    v.negated()
                } else {
                    v
                }
            }
        }
    }

    /// Poly-multilinear alternating bracket: `Σ_K det(v_a[K_b]) c_K`.
    pub fn sc_bracket(&self, vs: &[Section]) -> Result<Section> {
        if vs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: vs.len() });
        }
        for v in vs {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        let mut out = self.zero_section();
        for (k, c) in &self.table {
            let m: Vec<Vec<Poly>> = vs.iter().map(|v| k.iter().map(|&j| v[j as usize].clone()).collect()).collect();
            let d = det(&m, self.num_vars);
            if d.is_zero() {
                continue;
            }
            for (o, ci) in out.iter_mut().zip(c) {
                if !ci.is_zero() {
                    *o = &*o + &(&d * ci);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self { table: BTreeMap::new(), ..self.clone() };
        if r.is_zero() {
            return out;
        }
        for (k, v) in &self.table {
            out.table.insert(k.clone(), v.iter().map(|p| p.scale(r)).collect());
        }
        out
    }

    /// Table in the basis `f_i = Σ_j m[i][j] e_j` for a constant invertible `m`.
    pub fn change_basis(&self, m: &RatMatrix) -> Result<Self> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.rows() });
        }
        let inv = m.inverse().ok_or_else(|| Error::Invalid("basis change matrix is singular".into()))?;
        let nv = self.num_vars;
        let mut out = StructureConstants::new(self.dim, self.arity, nv)?;
        let rows: Vec<Section> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| Poly::constant(nv, m.get(i, j).clone())).collect())
            .collect();
        for k in increasing_tuples(self.dim, self.arity) {
            let args: Vec<Section> = k.iter().map(|&i| rows[i].clone()).collect();
            let v = self.sc_bracket(&args)?;
            // v in e-coordinates; f-coordinates are w with w^T m = v^T
            let w: Section = (0..self.dim)
                .map(|i| {
                    let mut acc = Poly::zero(nv);
                    for (j, vj) in v.iter().enumerate() {
                        acc = &acc + &vj.scale(inv.get(j, i));
                    }
                    acc
                })
                .collect();
            out.set(&k, w)?;
        }
        Ok(out)
    }
}

pub(crate) fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn tuple_label(idx: &[usize]) -> Vec<String> {
    idx.iter().map(|i| format!("e{}", i + 1)).collect()
}

/// `[X_1,…,X_n] = Σ_K det(X_a^{K_b}) c_K + Σ_k (−1)^{n−k} ρ(X_1∧…X̂_k…∧X_n)(X_k^j) e_j`,
/// the unique extension of the frame table that is alternating and satisfies
/// the anchor Leibniz rule in each slot.
pub fn section_bracket(sc: &StructureConstants, anchor: Option<&AnchorMap>, xs: &[Section]) -> Result<Section> {
    let mut out = sc.sc_bracket(xs)?;
    let Some(anchor) = anchor else { return Ok(out) };
    let n = xs.len();
    for k in 0..n {
        if xs[k].iter().all(|c| c.is_constant()) {
            continue;
        }
        let others: Vec<Section> = xs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect();
        let v = anchor.apply(&others)?;
        if v.iter().all(Poly::is_zero) {
            continue;
        }
        // 1-based position k+1, so the sign is (−1)^{n−k−1}
        let neg = (n - k - 1) % 2 == 1;
        for (j, c) in xs[k].iter().enumerate() {
            let d = apply_components(&v, c);
            if !d.is_zero() {
                out[j] = if neg { &out[j] - &d } else { &out[j] + &d };
            }
        }
    }
    Ok(out)
}

/// Exhaustive alternation check of a frame bracket over all `D^n` tuples: zero on
/// repeated indices and a sign flip under every adjacent transposition.
pub fn check_alternating_with<F>(dim: usize, arity: usize, bracket: F) -> VerificationReport
where
    F: Fn(&[usize]) -> Section + Sync,
{
    let tuples = all_tuples(dim, arity);
    report::check(
        "alternation",
        "n-lie-alternating",
        format!("all {dim}^{arity} frame tuples"),
        tuples.len(),
        |i| {
            let t = &tuples[i];
            let v = bracket(t);
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                if !v.is_zero_value() {
                    return Some(Witness::new(tuple_label(t), v.render()));
                }
                return None;
            }
            for p in 0..arity - 1 {
                let mut s = t.clone();
                s.swap(p, p + 1);
                let sum = v.plus(&bracket(&s));
                if !sum.is_zero_value() {
                    return Some(Witness::new(tuple_label(t), sum.render()));
                }
            }
            None
        },
    )
}

pub fn check_alternating(sc: &StructureConstants) -> VerificationReport {
    check_alternating_with(sc.dim, sc.arity, |t| sc.frame_bracket(t))
}

/// Exhaustive fundamental identity over all `D^{2n−1}` frame tuples
/// `(a_1,…,a_{n−1}, b_1,…,b_n)`, lexicographic order.
pub fn check_fundamental_identity(sc: &StructureConstants) -> VerificationReport {
    let n = sc.arity;
    let tuples = all_tuples(sc.dim, 2 * n - 1);
    let br = |xs: &[Section]| sc.sc_bracket(xs);
    report::check(
        "fundamental-identity",
        "n-lie-fundamental-identity",
        format!("all {}^{} frame tuples", sc.dim, 2 * n - 1),
        tuples.len(),
        |i| {
            let t = &tuples[i];
            let a: Vec<Section> = t[..n - 1].iter().map(|&j| sc.basis_section(j)).collect();
            let b: Vec<Section> = t[n - 1..].iter().map(|&j| sc.basis_section(j)).collect();
            let d = fi_defect(&br, &a, &b).expect("frame tuple arity");
            (!d.is_zero_value()).then(|| Witness::new(tuple_label(t), d.render()))
        },
    )
}

/// Fundamental identity for the anchored section bracket on explicit families:
/// `a_tuples` of length `n−1` and `b_tuples` of length `n`.
pub fn check_section_fi(
    sc: &StructureConstants,
    anchor: Option<&AnchorMap>,
    a_tuples: &[Vec<Section>],
    b_tuples: &[Vec<Section>],
    scope: &str,
) -> VerificationReport {
    let br = |xs: &[Section]| section_bracket(sc, anchor, xs);
    let nb = b_tuples.len();
    report::check(
        "fundamental-identity",
        "algebroid-fundamental-identity",
        scope,
        a_tuples.len() * nb,
        |i| {
            let (a, b) = (&a_tuples[i / nb], &b_tuples[i % nb]);
            let d = fi_defect(&br, a, b).expect("section arity");
            (!d.is_zero_value()).then(|| {
                Witness::new(a.iter().chain(b.iter()).map(|s| render_section(s)), d.render())
            })
        },
    )
}

/// Graded fundamental identity for degree-1 `a_i` against arbitrary `b_k`.
pub fn check_graded_fi(
    bracket: &(dyn Fn(&[MultiVector]) -> Result<MultiVector> + Sync),
    a_tuples: &[Vec<MultiVector>],
    b_tuples: &[Vec<MultiVector>],
    scope: &str,
) -> VerificationReport {
    let nb = b_tuples.len();
    report::check("graded-fundamental-identity", "graded-fi-degree-one", scope, a_tuples.len() * nb, |i| {
        let (a, b) = (&a_tuples[i / nb], &b_tuples[i % nb]);
        if a.iter().any(|x| !x.is_homogeneous_of(1)) {
            return Some(Witness::new(a.iter().map(|x| x.render()), "a_i must have degree 1"));
        }
        match fi_defect(&|xs: &[MultiVector]| bracket(xs), a, b) {
            Ok(d) if d.is_zero() => None,
            Ok(d) => Some(Witness::new(a.iter().chain(b.iter()).map(|x| x.render()), d.render())),
            Err(e) => Some(Witness::new(a.iter().chain(b.iter()).map(|x| x.render()), format!("error: {e}"))),
        }
    })
}

/// The simple 3-Lie algebra `A4`: `[e_i,e_j,e_k] = Σ_l ε_{ijkl} e_l`.
pub fn a4() -> StructureConstants {
    let mut sc = StructureConstants::new(4, 3, 0).expect("arity 3");
    for k in increasing_tuples(4, 3) {
        let l = (0..4).find(|x| !k.contains(x)).expect("complement");
        let mut perm = vec![k[0], k[1], k[2], l];
        let s = sort_with_sign(&mut perm).expect("distinct");
        let mut v = sc.zero_section();
        v[l] = Poly::constant(0, Rational::from_int(s as i64));
        sc.set(&k, v).expect("valid entry");
    }
    sc
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::sample::strategies::{poly, rational};

    fn table() -> impl Strategy<Value = StructureConstants> {
        prop::collection::vec(prop::collection::vec(poly(2, 2, 2), 4), 4).prop_map(|vals| {
            let mut sc = StructureConstants::new(4, 3, 2).unwrap();
            for (k, v) in increasing_tuples(4, 3).into_iter().zip(vals) {
                sc.set(&k, v).unwrap();
            }
            sc
        })
    }

    fn section() -> impl Strategy<Value = Section> {
        prop::collection::vec(poly(2, 2, 2), 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bracket_is_multilinear(
            sc in table(),
            args in prop::collection::vec(section(), 3),
            w in section(),
            g in poly(2, 2, 2),
            slot in 0usize..3,
        ) {
            let mut mixed = args.clone();
            mixed[slot] = args[slot].iter().zip(&w).map(|(a, b)| &(&g * a) + b).collect();
            let mut only_w = args.clone();
            only_w[slot] = w.clone();
            let lhs = sc.sc_bracket(&mixed).unwrap();
            let base: Section = sc.sc_bracket(&args).unwrap().iter().map(|c| &g * c).collect();
            prop_assert_eq!(lhs, base.plus(&sc.sc_bracket(&only_w).unwrap()));
        }

        #[test]
        fn fi_survives_change_of_basis(entries in prop::collection::vec(rational(), 16)) {
            let rows: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.to_vec()).collect();
            let m = RatMatrix::from_rows(rows);
            prop_assume!(m.inverse().is_some());
            let sc = a4().change_basis(&m).unwrap();
            prop_assert!(check_alternating(&sc).passed());
            prop_assert!(check_fundamental_identity(&sc).passed());
        }
    }
}
