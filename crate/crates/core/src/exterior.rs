//! Graded exterior algebra over a trivialized frame with polynomial coefficients.
//!
//! Frame indices are 0-based here; `∂1`, `dx1`, `e1`, `e^1` in printed output
//! are 1-based. Interior products of decomposables apply the first factor
//! first: `ι_{X1∧…∧Xk} = ι_{Xk} ∘ … ∘ ι_{X1}`, which makes `ι_{∂1∧∂2}` the
//! determinant pairing against `dx1∧dx2`.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    Tangent,
    Cotangent,
    Bundle,
    DualBundle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame {
    pub base_dim: usize,
    pub rank: usize,
    pub kind: FrameKind,
}

impl Frame {
    pub fn tangent(m: usize) -> Self {
        Frame { base_dim: m, rank: m, kind: FrameKind::Tangent }
    }

    pub fn cotangent(m: usize) -> Self {
        Frame { base_dim: m, rank: m, kind: FrameKind::Cotangent }
    }

    pub fn bundle(m: usize, r: usize) -> Self {
        Frame { base_dim: m, rank: r, kind: FrameKind::Bundle }
    }

    pub fn dual_bundle(m: usize, r: usize) -> Self {
        Frame { base_dim: m, rank: r, kind: FrameKind::DualBundle }
    }

    pub fn dual(&self) -> Self {
        let kind = match self.kind {
            FrameKind::Tangent => FrameKind::Cotangent,
            FrameKind::Cotangent => FrameKind::Tangent,
            FrameKind::Bundle => FrameKind::DualBundle,
            FrameKind::DualBundle => FrameKind::Bundle,
        };
        Frame { kind, ..*self }
    }

    pub fn is_covariant(&self) -> bool {
        matches!(self.kind, FrameKind::Cotangent | FrameKind::DualBundle)
    }

    fn symbol(&self, i: usize) -> String {
        match self.kind {
            FrameKind::Tangent => format!("∂{}", i + 1),
            FrameKind::Cotangent => format!("dx{}", i + 1),
            FrameKind::Bundle => format!("e{}", i + 1),
            FrameKind::DualBundle => format!("e^{}", i + 1),
        }
    }
}

/// Strictly increasing frame indices of one wedge monomial.
pub type Indices = SmallVec<[u8; 6]>;

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}

/// Graded element of `Γ(Λ•E)` for the frame `E`; non-homogeneous sums allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiVector {
    frame: Frame,
    terms: BTreeMap<Indices, Poly>,
}

/// Differential forms and dual-bundle sections share the representation.
pub type Form = MultiVector;

impl MultiVector {
    pub fn zero(frame: Frame) -> Self {
        MultiVector { frame, terms: BTreeMap::new() }
    }

    pub fn scalar(frame: Frame, f: Poly) -> Self {
        assert_eq!(f.num_vars(), frame.base_dim, "coefficient variable count");
        let mut mv = Self::zero(frame);
        if !f.is_zero() {
            mv.terms.insert(Indices::new(), f);
        }
        mv
    }

    /// `coeff · e_{i1} ∧ … ∧ e_{ik}` for indices in any order.
    pub fn monomial(frame: Frame, indices: &[usize], coeff: Poly) -> Result<Self> {
        let mut idx = indices.to_vec();
        for &i in &idx {
            if i >= frame.rank {
                return Err(Error::IndexOutOfRange { index: i, bound: frame.rank, what: "frame elements" });
            }
        }
        if coeff.num_vars() != frame.base_dim {
            return Err(Error::VarMismatch { left: coeff.num_vars(), right: frame.base_dim });
        }
        let mut mv = Self::zero(frame);
        if let Some(s) = sort_with_sign(&mut idx) {
            let c = if s < 0 { -coeff } else { coeff };
            if !c.is_zero() {
                mv.terms.insert(idx.iter().map(|&i| i as u8).collect(), c);
            }
        }
        Ok(mv)
    }

    /// A frame element `e_i` (0-based).
    pub fn basis(frame: Frame, i: usize) -> Self {
        Self::monomial(frame, &[i], Poly::one(frame.base_dim)).expect("basis index in range")
    }

    /// Degree-1 element from its component vector.
    pub fn from_components(frame: Frame, comps: &[Poly]) -> Result<Self> {
        if comps.len() != frame.rank {
            return Err(Error::DimensionMismatch { expected: frame.rank, got: comps.len() });
        }
        let mut mv = Self::zero(frame);
        for (i, c) in comps.iter().enumerate() {
            if c.num_vars() != frame.base_dim {
                return Err(Error::VarMismatch { left: c.num_vars(), right: frame.base_dim });
            }
            if !c.is_zero() {
                mv.terms.insert(SmallVec::from_slice(&[i as u8]), c.clone());
            }
        }
        Ok(mv)
    }

    pub fn from_terms(frame: Frame, terms: impl IntoIterator<Item = (Vec<usize>, Poly)>) -> Result<Self> {
        let mut acc = Self::zero(frame);
        for (idx, c) in terms {
            acc.add_assign(&Self::monomial(frame, &idx, c)?);
        }
        Ok(acc)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Indices, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with the given increasing indices.
    pub fn coeff(&self, indices: &[usize]) -> Poly {
        let key: Indices = indices.iter().map(|&i| i as u8).collect();
        self.terms.get(&key).cloned().unwrap_or_else(|| Poly::zero(self.frame.base_dim))
    }

    /// Degree of a homogeneous nonzero element.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|i| i.len() == k)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        MultiVector {
            frame: self.frame,
            terms: self.terms.iter().filter(|(i, _)| i.len() == k).map(|(i, c)| (i.clone(), c.clone())).collect(),
        }
    }

    /// Degree-0 part as a function.
    pub fn scalar_part(&self) -> Poly {
        self.coeff(&[])
    }

    /// Components of the degree-1 part.
    pub fn components(&self) -> Vec<Poly> {
        (0..self.frame.rank).map(|i| self.coeff(&[i])).collect()
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch(format!("{:?} vs {:?}", self.frame, other.frame)));
        }
        Ok(())
    }

    fn check_dual(&self, other: &Self) -> Result<()> {
        if self.frame.dual() != other.frame {
            return Err(Error::FrameMismatch(format!("{:?} is not dual to {:?}", self.frame, other.frame)));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.frame, other.frame, "frame mismatch");
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c);
        }
    }

    fn add_term(&mut self, k: Indices, c: &Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                *e = &*e + c;
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = self.clone();
        out.add_assign(&other.neg());
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("frame mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("frame mismatch")
    }

    pub fn neg(&self) -> Self {
        MultiVector {
            frame: self.frame,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, f: &Poly) -> Self {
        let mut out = Self::zero(self.frame);
        for (k, c) in &self.terms {
            let p = c * f;
            if !p.is_zero() {
                out.terms.insert(k.clone(), p);
            }
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Poly::constant(self.frame.base_dim, r.clone()))
    }

    /// Applies `op` to every coefficient.
    pub fn map_coeffs(&self, op: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.frame);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &op(c));
        }
        out
    }

    /// Same coefficients viewed over another frame of equal rank and base.
    pub fn reframe(&self, frame: Frame) -> Self {
        assert_eq!((frame.rank, frame.base_dim), (self.frame.rank, self.frame.base_dim));
        MultiVector { frame, terms: self.terms.clone() }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = Self::zero(self.frame);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((k, s)) = merge_indices(ka, kb) {
                    let p = ca * cb;
                    out.add_term(k, &if s < 0 { -p } else { p });
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Concatenates two increasing index lists and returns the sorted union with
/// the shuffle sign, or `None` if they intersect.
fn merge_indices(a: &[u8], b: &[u8]) -> Option<(Indices, i32)> {
    let mut out = Indices::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            // b[j] jumps over the remaining a's
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if inversions % 2 == 0 { 1 } else { -1 }))
}

pub fn wedge(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    a.wedge(b)
}

/// `⟨β, X⟩ = Σ β_i X_i` for a degree-1 form and a degree-1 multivector.
pub fn pairing(beta: &Form, x: &MultiVector) -> Result<Poly> {
    x.check_dual(beta)?;
    if !beta.is_homogeneous_of(1) || !x.is_homogeneous_of(1) {
        return Err(Error::DegreeMismatch("pairing needs degree-1 arguments".into()));
    }
    let mut acc = Poly::zero(beta.frame.base_dim);
    for (k, c) in &beta.terms {
        if let Some(xc) = x.terms.get(k) {
            acc = &acc + &(c * xc);
        }
    }
    Ok(acc)
}

/// `ι_{e_j}` on a single monomial: `(−1)^pos e^{I∖j}`.
fn contract_index(j: u8, idx: &[u8]) -> Option<(Indices, bool)> {
    let pos = idx.iter().position(|&i| i == j)?;
    let mut rest = Indices::from_slice(idx);
    rest.remove(pos);
    Some((rest, pos % 2 == 1))
}

/// Interior product `ι_X w`.
pub fn contract(x: &MultiVector, w: &Form) -> Result<Form> {
    x.check_dual(w)?;
    let mut out = MultiVector::zero(w.frame);
    for (kx, cx) in &x.terms {
        for (kw, cw) in &w.terms {
            if kx.len() > kw.len() {
                continue;
            }
            let mut cur = kw.clone();
            let mut neg = false;
            let mut alive = true;
            for &j in kx.iter() {
                match contract_index(j, &cur) {
                    Some((rest, s)) => {
                        cur = rest;
                        neg ^= s;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                let p = cx * cw;
                out.add_term(cur, &if neg { -p } else { p });
            }
        }
    }
    Ok(out)
}

/// Exterior derivative on forms over the cotangent frame.
pub fn de_rham_d(w: &Form) -> Result<Form> {
    if w.frame.kind != FrameKind::Cotangent {
        return Err(Error::FrameMismatch(format!("de Rham d needs a cotangent frame, got {:?}", w.frame.kind)));
    }
    let mut out = MultiVector::zero(w.frame);
    for (k, c) in &w.terms {
        for i in 0..w.frame.base_dim {
            let di = c.partial_unchecked(i);
            if di.is_zero() {
                continue;
            }
            if let Some((idx, s)) = merge_indices(&[i as u8], k) {
                out.add_term(idx, &if s < 0 { -di } else { di });
            }
        }
    }
    Ok(out)
}

/// `df` as a cotangent 1-form on ℝ^m.
pub fn exact(f: &Poly) -> Form {
    let frame = Frame::cotangent(f.num_vars());
    MultiVector::from_components(frame, &f.gradient()).expect("gradient length")
}

/// Directional derivative `X(f) = Σ X_i ∂f/∂x_i` for a tangent field.
pub fn apply_vf(x: &MultiVector, f: &Poly) -> Result<Poly> {
    if x.frame.kind != FrameKind::Tangent || !x.is_homogeneous_of(1) {
        return Err(Error::FrameMismatch("expected a tangent vector field".into()));
    }
    if f.num_vars() != x.frame.base_dim {
        return Err(Error::VarMismatch { left: f.num_vars(), right: x.frame.base_dim });
    }
    Ok(apply_components(&x.components(), f))
}

/// `Σ v_i ∂f/∂x_i` on raw component vectors.
pub fn apply_components(v: &[Poly], f: &Poly) -> Poly {
    let mut acc = Poly::zero(f.num_vars());
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let d = f.partial_unchecked(i);
        if !d.is_zero() {
            acc = &acc + &(vi * &d);
        }
    }
    acc
}

/// Cartan formula `L_X = ι_X d + d ι_X`.
pub fn lie_derivative(x: &MultiVector, w: &Form) -> Result<Form> {
    if x.frame.kind != FrameKind::Tangent || !x.is_homogeneous_of(1) {
        return Err(Error::FrameMismatch("Lie derivative needs a tangent vector field".into()));
    }
    let a = contract(x, &de_rham_d(w)?)?;
    let b = de_rham_d(&contract(x, w)?)?;
    Ok(a.add(&b))
}

/// Lie bracket of vector fields.
pub fn vf_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    x.check_frame(y)?;
    if x.frame.kind != FrameKind::Tangent || !x.is_homogeneous_of(1) || !y.is_homogeneous_of(1) {
        return Err(Error::FrameMismatch("vector field bracket needs tangent degree-1 fields".into()));
    }
    let xc = x.components();
    let yc = y.components();
    let comps: Vec<Poly> = (0..x.frame.rank)
        .map(|k| &apply_components(&xc, &yc[k]) - &apply_components(&yc, &xc[k]))
        .collect();
    MultiVector::from_components(x.frame, &comps)
}

/// Determinant by Laplace expansion along the first row, skipping zeros.
pub fn det(m: &[Vec<Poly>], num_vars: usize) -> Poly {
    let n = m.len();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols, num_vars)
}

fn det_rec(m: &[Vec<Poly>], row: usize, cols: &[usize], num_vars: usize) -> Poly {
    if cols.is_empty() {
        return Poly::one(num_vars);
    }
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = Poly::zero(num_vars);
    for (pos, &c) in cols.iter().enumerate() {
        let e = &m[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest, num_vars);
        if minor.is_zero() {
            continue;
        }
        let t = e * &minor;
        acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Full contraction `P(w1, …, wn) = Σ_J P_J det(⟨w_a, e_{J_b}⟩)`.
pub fn eval_multivector(p: &MultiVector, ws: &[Form]) -> Result<Poly> {
    let n = ws.len();
    if !p.is_homogeneous_of(n) {
        return Err(Error::DegreeMismatch(format!("multivector is not homogeneous of degree {n}")));
    }
    for w in ws {
        p.check_dual(w)?;
        if !w.is_homogeneous_of(1) {
            return Err(Error::DegreeMismatch("arguments must be 1-forms".into()));
        }
    }
    let m = p.frame.base_dim;
    let comps: Vec<Vec<Poly>> = ws.iter().map(|w| w.components()).collect();
    let mut acc = Poly::zero(m);
    for (k, c) in &p.terms {
        let mat: Vec<Vec<Poly>> = comps
            .iter()
            .map(|row| k.iter().map(|&j| row[j as usize].clone()).collect())
            .collect();
        let d = det(&mat, m);
        if !d.is_zero() {
            acc = &acc + &(c * &d);
        }
    }
    Ok(acc)
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if k.is_empty() {
                write!(f, "({c})")?;
                continue;
            }
            let basis = k.iter().map(|&i| self.frame.symbol(i as usize)).collect::<Vec<_>>().join("∧");
            if c.is_one() {
                write!(f, "{basis}")?;
            } else {
                write!(f, "({c})*{basis}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.frame.kind, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, m: usize) -> Poly {
        Poly::parse_x(s, m).unwrap()
    }

    fn dx(m: usize, idx: &[usize]) -> Form {
        MultiVector::monomial(Frame::cotangent(m), idx, Poly::one(m)).unwrap()
    }

    fn del(m: usize, idx: &[usize]) -> MultiVector {
        MultiVector::monomial(Frame::tangent(m), idx, Poly::one(m)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert!(dx(3, &[0]).wedge(&dx(3, &[0])).unwrap().is_zero());
        assert_eq!(dx(3, &[1]).wedge(&dx(3, &[0])).unwrap(), dx(3, &[0, 1]).neg());
        let a = dx(3, &[1]).scale(&p("x1", 3));
        assert_eq!(a.wedge(&dx(3, &[2])).unwrap(), dx(3, &[1, 2]).scale(&p("x1", 3)));
        assert!(dx(3, &[0]).wedge(&del(3, &[0])).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&dx(3, &[0]), &del(3, &[0])).unwrap(), Poly::one(3));
        assert!(pairing(&dx(3, &[0]), &del(3, &[1])).unwrap().is_zero());
        let beta = dx(3, &[0]).scale(&p("x2", 3)).add(&dx(3, &[2]));
        assert_eq!(pairing(&beta, &del(3, &[0])).unwrap(), p("x2", 3));
    }

    #[test]
    fn contract_examples() {
        assert_eq!(contract(&del(3, &[0]), &dx(3, &[0, 1])).unwrap(), dx(3, &[1]));
        assert!(contract(&del(3, &[1]), &dx(3, &[0])).unwrap().is_zero());
        assert_eq!(contract(&del(3, &[0, 1]), &dx(3, &[0, 1, 2])).unwrap(), dx(3, &[2]));
        // the determinant pairing: ι_{∂1∧∂2}(dx1∧dx2) = 1
        assert_eq!(contract(&del(3, &[0, 1]), &dx(3, &[0, 1])).unwrap().scalar_part(), Poly::one(3));
    }

    #[test]
    fn de_rham_examples() {
        assert_eq!(
            de_rham_d(&MultiVector::scalar(Frame::cotangent(3), p("x1*x2", 3))).unwrap(),
            dx(3, &[0]).scale(&p("x2", 3)).add(&dx(3, &[1]).scale(&p("x1", 3)))
        );
        assert_eq!(de_rham_d(&dx(3, &[1]).scale(&p("x1", 3))).unwrap(), dx(3, &[0, 1]));
        let w = dx(3, &[2]).scale(&p("x1^2*x2", 3));
        assert!(de_rham_d(&de_rham_d(&w).unwrap()).unwrap().is_zero());
        assert!(de_rham_d(&del(3, &[0])).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let f = MultiVector::scalar(Frame::cotangent(2), p("x1*x2", 2));
        assert_eq!(lie_derivative(&del(2, &[0]), &f).unwrap().scalar_part(), p("x2", 2));
        let w = dx(2, &[1]).scale(&p("x1", 2));
        assert_eq!(lie_derivative(&del(2, &[0]), &w).unwrap(), dx(2, &[1]));
        let x = del(2, &[0]).scale(&p("x1", 2));
        assert_eq!(lie_derivative(&x, &dx(2, &[0])).unwrap(), dx(2, &[0]));
    }

    #[test]
    fn vf_bracket_examples() {
        assert!(vf_bracket(&del(3, &[0]), &del(3, &[1])).unwrap().is_zero());
        let y = del(3, &[1]).scale(&p("x1", 3));
        assert_eq!(vf_bracket(&del(3, &[0]), &y).unwrap(), del(3, &[1]));
        let x = del(3, &[0]).scale(&p("x2", 3)).add(&del(3, &[2]).scale(&p("x1^2", 3)));
        assert!(vf_bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn eval_examples() {
        let vol = del(3, &[0, 1, 2]);
        assert_eq!(eval_multivector(&vol, &[dx(3, &[0]), dx(3, &[1]), dx(3, &[2])]).unwrap(), Poly::one(3));
        assert!(eval_multivector(&vol, &[dx(3, &[0]), dx(3, &[0]), dx(3, &[1])]).unwrap().is_zero());
        let fs = [p("x1^2", 3), p("x2", 3), p("x3", 3)].map(|f| exact(&f));
        assert_eq!(eval_multivector(&vol, &fs).unwrap(), p("2*x1", 3));
        assert!(eval_multivector(&vol, &fs[..2]).is_err());
    }

    #[test]
    fn sort_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        assert_eq!(v, vec![0, 1, 2]);
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        let mut v = vec![1, 2, 1];
        assert_eq!(sort_with_sign(&mut v), None);
    }

    #[test]
    fn display() {
        let w = dx(2, &[0, 1]).scale(&p("x1 + 1", 2)).add(&MultiVector::scalar(Frame::cotangent(2), p("3", 2)));
        assert_eq!(w.to_string(), "(3) + (x1 + 1)*dx1∧dx2");
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::sample::strategies::{multivector, poly};

    fn cot() -> Frame {
        Frame::cotangent(3)
    }

    fn tan() -> Frame {
        Frame::tangent(3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn wedge_is_graded_commutative(p in 0usize..=2, q in 0usize..=2, seed in any::<u64>()) {
            let mut s = crate::sample::Sampler::new(seed, "wedge");
            let a = s.multivector(cot(), p, 2, 3);
            let b = s.multivector(cot(), q, 2, 3);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            prop_assert_eq!(ab, if (p * q) % 2 == 0 { ba } else { ba.neg() });
        }

        #[test]
        fn wedge_is_associative(a in multivector(cot(), 1, 2, 2), b in multivector(cot(), 1, 2, 2), c in multivector(cot(), 1, 2, 2)) {
            prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        }

        #[test]
        fn d_squared_vanishes(k in 0usize..=3, seed in any::<u64>()) {
            let w = crate::sample::Sampler::new(seed, "dd").multivector(cot(), k, 3, 3);
            prop_assert!(de_rham_d(&de_rham_d(&w).unwrap()).unwrap().is_zero());
        }

        #[test]
        fn lie_derivative_is_a_derivation(
            x in multivector(tan(), 1, 2, 3),
            a in multivector(cot(), 1, 2, 2),
            b in multivector(cot(), 1, 2, 2),
        ) {
            let lhs = lie_derivative(&x, &a.wedge(&b).unwrap()).unwrap();
            let rhs = lie_derivative(&x, &a).unwrap().wedge(&b).unwrap().add(&a.wedge(&lie_derivative(&x, &b).unwrap()).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn lie_derivative_of_bracket(
            x in multivector(tan(), 1, 2, 2),
            y in multivector(tan(), 1, 2, 2),
            k in 0usize..=2,
            seed in any::<u64>(),
        ) {
            let w = crate::sample::Sampler::new(seed, "lxy").multivector(cot(), k, 2, 2);
            let lhs = lie_derivative(&vf_bracket(&x, &y).unwrap(), &w).unwrap();
            let xy = lie_derivative(&x, &lie_derivative(&y, &w).unwrap()).unwrap();
            let yx = lie_derivative(&y, &lie_derivative(&x, &w).unwrap()).unwrap();
            prop_assert_eq!(lhs, xy.sub(&yx));
        }

        #[test]
        fn evaluation_is_alternating(
            p in multivector(tan(), 2, 2, 3),
            a in multivector(cot(), 1, 1, 3),
            b in multivector(cot(), 1, 1, 3),
            f in poly(3, 2, 2),
        ) {
            let ab = eval_multivector(&p, &[a.clone(), b.clone()]).unwrap();
            let ba = eval_multivector(&p, &[b, a.clone()]).unwrap();
            prop_assert!((&ab + &ba).is_zero());
            prop_assert!(eval_multivector(&p, &[a.clone(), a.scale(&f)]).unwrap().is_zero());
        }
    }
}
