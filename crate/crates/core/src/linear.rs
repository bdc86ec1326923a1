//! Linear Nambu structures on the total space of the trivial bundle
//! `ℝ^m × ℝ^r` and the Filippov algebroid they induce on the dual bundle.
//!
//! Total-space variables are ordered `x1..xm, xi1..xir`.

use crate::error::{Error, Result};
use crate::exterior::{Form, Frame, MultiVector};
use crate::extension::{check_algebroid, AnchorMap};
use crate::filippov::{Section, StructureConstants};
use crate::nambu::NambuTensor;
use crate::poly::{Monomial, Poly};
use crate::report::{self, VerificationReport, Witness};
use crate::sample::{increasing_tuples, monomials, CheckConfig, Sampler};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearNambuData {
    base_dim: usize,
    fiber_rank: usize,
    tensor: NambuTensor,
}

/// Variable names `x1..xm, xi1..xir`.
pub fn total_space_names(m: usize, r: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).chain((1..=r).map(|i| format!("xi{i}"))).collect()
}

impl LinearNambuData {
    pub fn new(base_dim: usize, fiber_rank: usize, tensor: NambuTensor) -> Result<Self> {
        if tensor.base_dim() != base_dim + fiber_rank {
            return Err(Error::DimensionMismatch { expected: base_dim + fiber_rank, got: tensor.base_dim() });
        }
        Ok(LinearNambuData { base_dim, fiber_rank, tensor })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fiber_rank(&self) -> usize {
        self.fiber_rank
    }

    pub fn tensor(&self) -> &NambuTensor {
        &self.tensor
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }

    pub fn names(&self) -> Vec<String> {
        total_space_names(self.base_dim, self.fiber_rank)
    }

    fn total_vars(&self) -> usize {
        self.base_dim + self.fiber_rank
    }

    pub fn dual_frame(&self) -> Frame {
        Frame::dual_bundle(self.base_dim, self.fiber_rank)
    }

    /// `ξ_i` on the total space.
    pub fn fiber_var(&self, i: usize) -> Poly {
        Poly::var(self.total_vars(), self.base_dim + i)
    }

    /// `f ∘ p` for `f` on the base.
    pub fn basic(&self, f: &Poly) -> Poly {
        f.embed(self.total_vars(), 0)
    }

    /// `l_α = Σ_i α_i(x) ξ_i`.
    pub fn linear_function(&self, alpha: &Form) -> Result<Poly> {
        if alpha.frame() != self.dual_frame() {
            return Err(Error::FrameMismatch(format!("expected {:?}, got {:?}", self.dual_frame(), alpha.frame())));
        }
        if !alpha.is_homogeneous_of(1) && !alpha.is_zero() {
            return Err(Error::DegreeMismatch("expected a section of the dual bundle".into()));
        }
        Ok(self.linear_of(&alpha.components()))
    }

    fn linear_of(&self, comps: &[Poly]) -> Poly {
        let mut acc = Poly::zero(self.total_vars());
        for (i, c) in comps.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&self.basic(c) * &self.fiber_var(i));
            }
        }
        acc
    }

    /// Reads a ξ-linear polynomial back as base-coefficient components.
    pub fn split_linear(&self, p: &Poly) -> Result<Section> {
        let (m, r) = (self.base_dim, self.fiber_rank);
        let mut parts: Vec<Vec<(Monomial, crate::rational::Rational)>> = vec![Vec::new(); r];
        for (e, c) in p.terms() {
            let fiber: Vec<usize> = (0..r).filter(|&i| e[m + i] > 0).collect();
            if fiber.len() != 1 || e[m + fiber[0]] != 1 {
                return Err(Error::Invalid(format!("{} is not fibre-wise linear", p.display_with(&self.names()))));
            }
            parts[fiber[0]].push((e[..m].iter().copied().collect(), c.clone()));
        }
        Ok(parts.into_iter().map(|t| Poly::from_terms(m, t)).collect())
    }

    fn render(&self, p: &Poly) -> String {
        p.display_with(&self.names()).to_string()
    }

    /// The three linearity clauses on linear functions `x^a ξ_i` and basic
    /// functions `x^a` with `deg a ≤ bound`.
    pub fn check_linear(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        let n = self.order();
        let (m, r) = (self.base_dim, self.fiber_rank);
        let coeffs = monomials(m, 0, cfg.degree_bound);
        let linear: Vec<Poly> = coeffs
            .iter()
            .flat_map(|c| (0..r).map(move |i| (c, i)))
            .map(|(c, i)| &self.basic(c) * &self.fiber_var(i))
            .collect();
        let basic: Vec<Poly> = monomials(m, 1, cfg.degree_bound).iter().map(|f| self.basic(f)).collect();
        let fiber_range = m..m + r;
        let scope = format!("coefficient monomials of degree <= {}", cfg.degree_bound);
        let bracket = |fs: &[Poly]| self.tensor.nambu_bracket(fs).expect("arity");
        let witness = |fs: &[Poly], v: &Poly| Witness::new(fs.iter().map(|f| self.render(f)), self.render(v));

        let lin_t = increasing_tuples(linear.len(), n);
        let a = report::check("linear-closure", "linear-nambu-linear", scope.clone(), lin_t.len(), |i| {
            let fs: Vec<Poly> = lin_t[i].iter().map(|&k| linear[k].clone()).collect();
            let v = bracket(&fs);
            (!v.degrees_in(fiber_range.clone()).iter().all(|&d| d == 1)).then(|| witness(&fs, &v))
        });

        let mixed: Vec<Vec<Poly>> = increasing_tuples(linear.len(), n - 1)
            .into_iter()
            .flat_map(|t| {
                basic.iter().map(move |b| {
                    let mut v: Vec<usize> = t.clone();
                    v.push(usize::MAX);
                    (v, b)
                })
            })
            .map(|(t, b)| t.iter().map(|&k| if k == usize::MAX { b.clone() } else { linear[k].clone() }).collect())
            .collect();
        let b = report::check("basic-closure", "linear-nambu-basic", scope.clone(), mixed.len(), |i| {
            let fs = &mixed[i];
            let v = bracket(fs);
            (!v.degrees_in(fiber_range.clone()).iter().all(|&d| d == 0)).then(|| witness(fs, &v))
        });

        let mut many: Vec<Vec<Poly>> = Vec::new();
        for k in 2..=n {
            for lt in increasing_tuples(linear.len(), n - k) {
                for bt in increasing_tuples(basic.len(), k) {
                    many.push(lt.iter().map(|&j| linear[j].clone()).chain(bt.iter().map(|&j| basic[j].clone())).collect());
                }
            }
        }
        let c = report::check("basic-annihilation", "linear-nambu-two-basic", scope, many.len(), |i| {
            let fs = &many[i];
            let v = bracket(fs);
            (!v.is_zero()).then(|| witness(fs, &v))
        });
        vec![a, b, c]
    }

    /// `[e^K]` read off from `{ξ_{K1},…,ξ_{Kn}}`.
    pub fn induce_dual_bracket(&self) -> Result<StructureConstants> {
        let n = self.order();
        let mut sc = StructureConstants::new(self.fiber_rank, n, self.base_dim)?;
        for k in increasing_tuples(self.fiber_rank, n) {
            let fs: Vec<Poly> = k.iter().map(|&i| self.fiber_var(i)).collect();
            let v = self.tensor.nambu_bracket(&fs)?;
            sc.set(&k, self.split_linear(&v)?)?;
        }
        Ok(sc)
    }

    /// `ρ(e^K')` with components `{ξ_{K'1},…,ξ_{K'(n−1)}, x_k}`.
    pub fn induce_dual_anchor(&self) -> Result<AnchorMap> {
        let n = self.order();
        let m = self.base_dim;
        let mut anchor = AnchorMap::new(self.dual_frame(), n - 1);
        for k in increasing_tuples(self.fiber_rank, n - 1) {
            let mut fs: Vec<Poly> = k.iter().map(|&i| self.fiber_var(i)).collect();
            let mut value = Vec::with_capacity(m);
            for j in 0..m {
                fs.push(Poly::var(self.total_vars(), j));
                let v = self.tensor.nambu_bracket(&fs)?;
                fs.pop();
                value.push(v.project(0..m).ok_or_else(|| {
                    Error::Invalid(format!("anchor component {} depends on the fibre", self.render(&v)))
                })?);
            }
            anchor.set(&k, value)?;
        }
        Ok(anchor)
    }

    /// Fundamental identity, anchor compatibility and Leibniz law of the induced
    /// dual algebroid.
    pub fn verify_dual_algebroid(&self, cfg: &CheckConfig) -> Result<Vec<VerificationReport>> {
        let sc = self.induce_dual_bracket()?;
        let anchor = self.induce_dual_anchor()?;
        Ok(check_algebroid(&sc, &anchor, cfg, "dual"))
    }
}

/// The linear 3-vector on the dual of an n-Lie algebra with constant table:
/// `Σ_K (Σ_l c_K^l ξ_l) ∂_{ξ_K}` on `ℝ^D`.
pub fn linear_tensor_of_algebra(sc: &StructureConstants) -> Result<LinearNambuData> {
    let d = sc.dim();
    let frame = Frame::tangent(d);
    let mut p = MultiVector::zero(frame);
    for (k, v) in sc.entries() {
        let mut coeff = Poly::zero(d);
        for (l, c) in v.iter().enumerate() {
            if !c.is_constant() {
                return Err(Error::Invalid("table entries must be constant".into()));
            }
            coeff = &coeff + &Poly::var(d, l).scale(&c.constant_term());
        }
        let idx: Vec<usize> = k.iter().map(|&i| i as usize).collect();
        p.add_assign(&MultiVector::monomial(frame, &idx, coeff)?);
    }
    LinearNambuData::new(0, d, NambuTensor::new(p, sc.arity())?)
}

/// Random dual sections for the defining-equation consistency check.
pub fn random_dual_section(ld: &LinearNambuData, s: &mut Sampler, max_degree: u32) -> Form {
    let m = ld.base_dim();
    let comps: Vec<Poly> = (0..ld.fiber_rank()).map(|_| s.poly(m, max_degree, 2)).collect();
    MultiVector::from_components(ld.dual_frame(), &comps).expect("components")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filippov::a4;
    use crate::report::all_passed;

    fn tensor(s: &[(&str, &[usize])], m: usize, r: usize, order: usize) -> NambuTensor {
        let frame = Frame::tangent(m + r);
        let names = total_space_names(m, r);
        let mut p = MultiVector::zero(frame);
        for (c, idx) in s {
            p.add_assign(&MultiVector::monomial(frame, idx, Poly::parse(c, &names).unwrap()).unwrap());
        }
        NambuTensor::new(p, order).unwrap()
    }

    fn xi1_fixture() -> LinearNambuData {
        LinearNambuData::new(1, 3, tensor(&[("xi1", &[1, 2, 3])], 1, 3, 3)).unwrap()
    }

    fn dx_fixture() -> LinearNambuData {
        let frame = Frame::tangent(3);
        let p = MultiVector::monomial(frame, &[0, 1, 2], Poly::one(3)).unwrap();
        LinearNambuData::new(1, 2, NambuTensor::new(p, 3).unwrap()).unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig { degree_bound: 2, seed: 0, samples: 20 }
    }

    #[test]
    fn linear_function_examples() {
        let ld = xi1_fixture();
        let f = ld.dual_frame();
        assert_eq!(ld.linear_function(&MultiVector::basis(f, 0)).unwrap(), ld.fiber_var(0));
        let a = MultiVector::monomial(f, &[1], Poly::var(1, 0)).unwrap();
        assert_eq!(ld.render(&ld.linear_function(&a).unwrap()), "x1*xi2");
    }

    #[test]
    fn fixtures_pass_linearity_and_induce_algebroids() {
        let ld = xi1_fixture();
        assert!(all_passed(&ld.check_linear(&cfg())));
        let sc = ld.induce_dual_bracket().unwrap();
        assert_eq!(sc.entry(&[0, 1, 2]), vec![Poly::one(1), Poly::zero(1), Poly::zero(1)]);
        assert!(ld.induce_dual_anchor().unwrap().is_zero());
        assert!(all_passed(&ld.verify_dual_algebroid(&cfg()).unwrap()));

        let ld = dx_fixture();
        assert!(all_passed(&ld.check_linear(&cfg())));
        assert!(ld.induce_dual_bracket().unwrap().is_zero());
        let anchor = ld.induce_dual_anchor().unwrap();
        assert_eq!(anchor.entry(&[0, 1]), vec![Poly::one(1)]);
        assert!(all_passed(&ld.verify_dual_algebroid(&cfg()).unwrap()));
    }

    #[test]
    fn squared_coefficient_fails_clause_a() {
        let ld = LinearNambuData::new(1, 3, tensor(&[("xi1^2", &[1, 2, 3])], 1, 3, 3)).unwrap();
        let reps = ld.check_linear(&cfg());
        assert!(!reps[0].passed());
        let w = reps[0].witness.as_ref().unwrap();
        assert_eq!(w.inputs, vec!["xi1", "xi2", "xi3"]);
        assert_eq!(w.defect, "xi1^2");
        assert!(ld.induce_dual_bracket().is_err());
    }

    #[test]
    fn corrupted_dual_table_fails() {
        let frame = Frame::tangent(4);
        let p = MultiVector::monomial(frame, &[0, 1, 2], Poly::one(4)).unwrap();
        let ld = LinearNambuData::new(1, 3, NambuTensor::new(p, 3).unwrap()).unwrap();
        assert!(all_passed(&ld.verify_dual_algebroid(&cfg()).unwrap()));
        let mut sc = ld.induce_dual_bracket().unwrap();
        sc.set(&[0, 1, 2], vec![Poly::zero(1), Poly::one(1), Poly::zero(1)]).unwrap();
        let anchor = ld.induce_dual_anchor().unwrap();
        let reps = check_algebroid(&sc, &anchor, &cfg(), "dual");
        assert!(!reps[1].passed());
    }

    #[test]
    fn zero_tensor_induces_nothing() {
        let ld = LinearNambuData::new(1, 3, NambuTensor::new(MultiVector::zero(Frame::tangent(4)), 3).unwrap()).unwrap();
        assert!(ld.induce_dual_bracket().unwrap().is_zero());
        assert!(ld.induce_dual_anchor().unwrap().is_zero());
    }

    #[test]
    fn a4_dual_tensor_is_nambu_poisson() {
        // Σ ε_{ijkl} ξ_l ∂_{ijk} = ι_{dH}(∂1∧∂2∧∂3∧∂4) with H = |ξ|²/2
        let ld = linear_tensor_of_algebra(&a4()).unwrap();
        let h = Poly::parse_x("1/2*x1^2 + 1/2*x2^2 + 1/2*x3^2 + 1/2*x4^2", 4).unwrap();
        let vol = NambuTensor::volume(4);
        let mut s = Sampler::new(1, "a4-dual");
        for _ in 0..20 {
            let fs: Vec<Poly> = (0..3).map(|_| s.poly(4, 2, 3)).collect();
            let mut with_h = fs.clone();
            with_h.push(h.clone());
            assert_eq!(ld.tensor().nambu_bracket(&fs).unwrap(), vol.nambu_bracket(&with_h).unwrap());
        }
        assert!(all_passed(&ld.tensor().check_nambu_poisson(&cfg())));
    }

    #[test]
    fn split_algebra_dual_tensor_is_not_nambu_poisson() {
        let mut sc = StructureConstants::new(6, 3, 0).unwrap();
        sc.set(&[0, 1, 2], sc.basis_section(0)).unwrap();
        sc.set(&[3, 4, 5], sc.basis_section(3)).unwrap();
        assert!(crate::filippov::check_fundamental_identity(&sc).passed());
        let ld = linear_tensor_of_algebra(&sc).unwrap();
        let reps = ld.tensor().check_nambu_poisson(&cfg());
        assert!(!reps[1].passed());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::filippov::section_bracket;
    use crate::sample::strategies::poly;

    fn fixtures() -> Vec<LinearNambuData> {
        let x1xi1 = MultiVector::monomial(Frame::tangent(4), &[1, 2, 3], Poly::parse("x1*xi1", &total_space_names(1, 3)).unwrap()).unwrap();
        let dx = MultiVector::monomial(Frame::tangent(3), &[0, 1, 2], Poly::one(3)).unwrap();
        vec![
            LinearNambuData::new(1, 3, NambuTensor::new(x1xi1, 3).unwrap()).unwrap(),
            LinearNambuData::new(1, 2, NambuTensor::new(dx, 3).unwrap()).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn defining_equation_is_consistent(which in 0usize..2, seed in any::<u64>()) {
            let ld = &fixtures()[which];
            let mut s = Sampler::new(seed, "linear-props");
            let alphas: Vec<Form> = (0..3).map(|_| random_dual_section(ld, &mut s, 2)).collect();
            let sc = ld.induce_dual_bracket().unwrap();
            let anchor = ld.induce_dual_anchor().unwrap();
            let comps: Vec<Section> = alphas.iter().map(|a| a.components()).collect();
            let br = MultiVector::from_components(ld.dual_frame(), &section_bracket(&sc, Some(&anchor), &comps).unwrap()).unwrap();
            let ls: Vec<Poly> = alphas.iter().map(|a| ld.linear_function(a).unwrap()).collect();
            prop_assert_eq!(ld.linear_function(&br).unwrap(), ld.tensor().nambu_bracket(&ls).unwrap());
        }

        #[test]
        fn dual_anchor_is_poly_linear(which in 0usize..2, g in poly(1, 2, 2), slot in 0usize..2, seed in any::<u64>()) {
            let ld = &fixtures()[which];
            let mut s = Sampler::new(seed, "linear-anchor-props");
            let xs: Vec<Section> = (0..2).map(|_| random_dual_section(ld, &mut s, 2).components()).collect();
            let anchor = ld.induce_dual_anchor().unwrap();
            let mut scaled = xs.clone();
            scaled[slot] = xs[slot].iter().map(|c| &g * c).collect();
            let expect: Vec<Poly> = anchor.apply(&xs).unwrap().iter().map(|c| &g * c).collect();
            prop_assert_eq!(anchor.apply(&scaled).unwrap(), expect);
        }
    }
}
