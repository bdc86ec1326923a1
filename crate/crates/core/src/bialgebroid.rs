//! Lie algebroids with their differential `d_A`, weak and strong Lie-Filippov
//! bialgebroids, the Nambu-Poisson structure they induce on the base, and
//! morphisms.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exterior::{apply_components, sort_with_sign, Form, Frame, MultiVector};
use crate::extension::{
    check_algebroid, check_anchor_compatibility, check_anchor_leibniz, check_bracket_fi, AnchorMap, GeneratorBracket,
    GradedBracket,
};
use crate::filippov::{render_in, section_bracket, BracketValue, Section, StructureConstants};
use crate::linalg::RatMatrix;
use crate::nambu::NambuTensor;
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use crate::report::{self, VerificationReport, Witness};
use crate::sample::{budget_pairs, budget_tuples, increasing_tuples, monomial_sections, monomials, CheckConfig, Sampler};

/// A Lie algebroid on a trivial bundle: frame bracket table and anchor `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidData {
    frame: Frame,
    bracket: StructureConstants,
    anchor: AnchorMap,
}

fn section_degree(s: &[Poly]) -> u32 {
    s.iter().filter_map(Poly::total_degree).max().unwrap_or(0)
}

impl AlgebroidData {
    pub fn new(frame: Frame, bracket: StructureConstants, anchor: AnchorMap) -> Result<Self> {
        if bracket.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, got: bracket.arity() });
        }
        if bracket.dim() != frame.rank {
            return Err(Error::DimensionMismatch { expected: frame.rank, got: bracket.dim() });
        }
        if bracket.num_vars() != frame.base_dim {
            return Err(Error::VarMismatch { left: bracket.num_vars(), right: frame.base_dim });
        }
        if anchor.source() != frame || anchor.arity_in() != 1 {
            return Err(Error::FrameMismatch("the anchor must be a map A -> TM on the algebroid frame".into()));
        }
        Ok(AlgebroidData { frame, bracket, anchor })
    }

    /// `TM` with the coordinate frame: zero frame brackets, identity anchor.
    pub fn tangent(m: usize) -> Self {
        let frame = Frame::tangent(m);
        let mut anchor = AnchorMap::new(frame, 1);
        for i in 0..m {
            anchor.set(&[i], MultiVector::basis(frame, i).components()).expect("identity anchor");
        }
        let bracket = StructureConstants::new(m, 2, m).expect("arity 2");
        AlgebroidData { frame, bracket, anchor }
    }

    /// The trivial bundle of rank `m` identified with `TM` through a constant
    /// invertible matrix: `a(e_i) = Σ_j M[j][i] ∂_j`, zero frame brackets.
    pub fn transported(mat: &RatMatrix) -> Result<Self> {
        let m = mat.rows();
        if mat.cols() != m || mat.inverse().is_none() {
            return Err(Error::Invalid("transport matrix must be square and invertible".into()));
        }
        let frame = Frame::bundle(m, m);
        let mut anchor = AnchorMap::new(frame, 1);
        for i in 0..m {
            anchor.set(&[i], (0..m).map(|j| Poly::constant(m, mat.get(j, i).clone())).collect())?;
        }
        Self::new(frame, StructureConstants::new(m, 2, m)?, anchor)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dual_frame(&self) -> Frame {
        self.frame.dual()
    }

    pub fn bracket(&self) -> &StructureConstants {
        &self.bracket
    }

    pub fn anchor(&self) -> &AnchorMap {
        &self.anchor
    }

    pub fn base_dim(&self) -> usize {
        self.frame.base_dim
    }

    pub fn rank(&self) -> usize {
        self.frame.rank
    }

    /// `a(e_i)` components, indexed `[i][j]` for `∂_j`.
    pub fn anchor_matrix(&self) -> Vec<Vec<Poly>> {
        (0..self.rank()).map(|i| self.anchor.entry(&[i])).collect()
    }

    pub fn section_bracket(&self, x: &Section, y: &Section) -> Result<Section> {
        section_bracket(&self.bracket, Some(&self.anchor), &[x.clone(), y.clone()])
    }

    /// `d_A f` as dual-frame components `a(e_i)(f)`.
    pub fn d_function(&self, f: &Poly) -> Section {
        (0..self.rank()).map(|i| apply_components(&self.anchor.entry(&[i]), f)).collect()
    }

    /// `a*` on a 1-form: `(a*α)_i = Σ_j a(e_i)^j α_j`.
    pub fn anchor_dual(&self, alpha: &[Poly]) -> Section {
        let m = self.base_dim();
        self.anchor_matrix()
            .iter()
            .map(|row| row.iter().zip(alpha).fold(Poly::zero(m), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// The algebroid differential with trivial coefficients,
    /// `d_Aφ(X_0,…,X_k) = Σ_j (−1)^j a(X_j)φ(…X̂_j…) + Σ_{j<l} (−1)^{j+l} φ([X_j,X_l],…X̂_j…X̂_l…)`,
    /// evaluated on increasing frame tuples.
    pub fn d(&self, phi: &Form) -> Result<Form> {
        let dual = self.dual_frame();
        if phi.frame() != dual {
            return Err(Error::FrameMismatch(format!("expected {:?}, got {:?}", dual, phi.frame())));
        }
        let r = self.rank();
        let m = self.base_dim();
        let mut terms: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        let degrees: Vec<usize> = phi.terms().map(|(k, _)| k.len()).sorted().dedup().collect();
        for k in degrees {
            if k + 1 > r {
                continue;
            }
            let part = phi.homogeneous_part(k);
            // φ(e_c, e_rest) with sign reconstruction
            let eval_with = |c: usize, rest: &[usize]| -> Poly {
                let mut idx = vec![c];
                idx.extend_from_slice(rest);
                match sort_with_sign(&mut idx) {
                    None => Poly::zero(m),
                    Some(s) => {
                        let v = part.coeff(&idx);
                        if s < 0 {
                            -v
                        } else {
                            v
                        }
                    }
                }
            };
            for idx in increasing_tuples(r, k + 1) {
                let mut val = Poly::zero(m);
                for j in 0..=k {
                    let rest: Vec<usize> = idx.iter().enumerate().filter(|(p, _)| *p != j).map(|(_, &x)| x).collect();
                    let t = apply_components(&self.anchor.entry(&[idx[j]]), &part.coeff(&rest));
                    val = if j % 2 == 0 { &val + &t } else { &val - &t };
                }
                for j in 0..=k {
                    for l in j + 1..=k {
                        let y = self.bracket.frame_bracket(&[idx[j], idx[l]]);
                        let rest: Vec<usize> =
                            idx.iter().enumerate().filter(|(p, _)| *p != j && *p != l).map(|(_, &x)| x).collect();
                        let mut t = Poly::zero(m);
                        for (c, yc) in y.iter().enumerate() {
                            if !yc.is_zero() {
                                t = &t + &(yc * &eval_with(c, &rest));
                            }
                        }
                        val = if (j + l) % 2 == 0 { &val + &t } else { &val - &t };
                    }
                }
                if !val.is_zero() {
                    let e = terms.entry(idx).or_insert_with(|| Poly::zero(m));
                    *e = &*e + &val;
                }
            }
        }
        MultiVector::from_terms(dual, terms)
    }

    /// Jacobi identity, anchor compatibility and the Leibniz law on monomial
    /// sections.
    pub fn check(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        check_algebroid(&self.bracket, &self.anchor, cfg, "lie")
    }
}

/// `(A, A*)` with a Lie algebroid on `A` and an n-bracket with anchor `ρ` on
/// `Γ(A*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BialgebroidData {
    algebroid: AlgebroidData,
    dual: GradedBracket,
}

impl BialgebroidData {
    pub fn new(algebroid: AlgebroidData, dual: GradedBracket) -> Result<Self> {
        if dual.frame() != algebroid.dual_frame() {
            return Err(Error::FrameMismatch(format!(
                "dual bracket lives on {:?}, expected {:?}",
                dual.frame(),
                algebroid.dual_frame()
            )));
        }
        Ok(BialgebroidData { algebroid, dual })
    }

    pub fn from_parts(algebroid: AlgebroidData, dual_bracket: GeneratorBracket, rho: AnchorMap) -> Result<Self> {
        let frame = algebroid.dual_frame();
        Self::new(algebroid, GradedBracket::new(dual_bracket, rho, frame)?)
    }

    /// `(TM, T*M)` of a Nambu tensor: form bracket and `P♯`.
    pub fn tangent_cotangent(t: NambuTensor) -> Self {
        let m = t.base_dim();
        BialgebroidData { algebroid: AlgebroidData::tangent(m), dual: GradedBracket::nambu(t) }
    }

    /// `(TM, T*M)` moved to the trivial bundle through `a(e_i) = Σ_j M[j][i] ∂_j`:
    /// `[e^K] = a*[θ^K]` and `ρ(e^K') = P♯(θ^K')` with `a*θ^i = e^i`.
    pub fn transported(t: &NambuTensor, mat: &RatMatrix) -> Result<Self> {
        let algebroid = AlgebroidData::transported(mat)?;
        let m = t.base_dim();
        let n = t.order();
        let inv = mat.inverse().expect("checked invertible");
        let cot = Frame::cotangent(m);
        let theta: Vec<Form> = (0..m)
            .map(|i| {
                let comps: Vec<Poly> = (0..m).map(|j| Poly::constant(m, inv.get(i, j).clone())).collect();
                MultiVector::from_components(cot, &comps).expect("components")
            })
            .collect();
        let mut sc = StructureConstants::new(m, n, m)?;
        for k in increasing_tuples(m, n) {
            let args: Vec<Form> = k.iter().map(|&i| theta[i].clone()).collect();
            let v = t.form_bracket(&args)?;
            sc.set(&k, algebroid.anchor_dual(&v.components()))?;
        }
        let mut rho = AnchorMap::new(algebroid.dual_frame(), n - 1);
        for k in increasing_tuples(m, n - 1) {
            let args: Vec<Form> = k.iter().map(|&i| theta[i].clone()).collect();
            rho.set(&k, t.p_sharp(&args)?.components())?;
        }
        Self::from_parts(algebroid, GeneratorBracket::Table(sc), rho)
    }

    /// Same data with the bracket on `Γ(A*)` replaced.
    pub fn with_generator(&self, generator: GeneratorBracket) -> Result<Self> {
        Self::from_parts(self.algebroid.clone(), generator, self.rho().clone())
    }

    /// Same data with the anchor of `A*` replaced.
    pub fn with_rho(&self, rho: AnchorMap) -> Result<Self> {
        Self::from_parts(self.algebroid.clone(), self.dual.generator().clone(), rho)
    }

    pub fn algebroid(&self) -> &AlgebroidData {
        &self.algebroid
    }

    pub fn dual(&self) -> &GradedBracket {
        &self.dual
    }

    pub fn rho(&self) -> &AnchorMap {
        self.dual.anchor()
    }

    pub fn order(&self) -> usize {
        self.dual.arity()
    }

    fn base_dim(&self) -> usize {
        self.algebroid.base_dim()
    }

    fn rank(&self) -> usize {
        self.algebroid.rank()
    }

    fn dual_bracket(&self, xs: &[Section]) -> Result<Section> {
        self.dual.section_bracket(xs)
    }

    fn as_form(&self, s: &[Poly]) -> Form {
        MultiVector::from_components(self.algebroid.dual_frame(), s).expect("dual components")
    }

    /// Generating family of `d_A`-closed sections: `d_A f` for monomials
    /// `1 ≤ deg f ≤ bound`, then the constant sections in the kernel of `d_A`
    /// not already listed; sorted by coefficient degree.
    pub fn closed_family(&self, bound: u32) -> Vec<(Section, u32)> {
        let m = self.base_dim();
        let r = self.rank();
        let mut out: Vec<(Section, u32)> = Vec::new();
        for f in monomials(m, 1, bound) {
            let s = self.algebroid.d_function(&f);
            if !s.is_zero_value() && !out.iter().any(|(x, _)| *x == s) {
                let d = section_degree(&s);
                out.push((s, d));
            }
        }
        let images: Vec<Form> = (0..r)
            .map(|i| self.algebroid.d(&MultiVector::basis(self.algebroid.dual_frame(), i)).expect("dual frame"))
            .collect();
        let mut keys: Vec<(Vec<usize>, Monomial)> = Vec::new();
        for img in &images {
            for (k, c) in img.terms() {
                for (e, _) in c.terms() {
                    let key = (k.iter().map(|&i| i as usize).collect(), e.clone());
                    if !keys.contains(&key) {
                        keys.push(key);
                    }
                }
            }
        }
        let mut mat = RatMatrix::zeros(keys.len(), r);
        for (i, img) in images.iter().enumerate() {
            for (row, (k, e)) in keys.iter().enumerate() {
                mat.set(row, i, img.coeff(k).coeff(e));
            }
        }
        for v in mat.kernel() {
            let s: Section = v.iter().map(|c| Poly::constant(m, c.clone())).collect();
            if !out.iter().any(|(x, _)| *x == s) {
                out.push((s, 0));
            }
        }
        out.sort_by_key(|(_, d)| *d);
        out
    }

    /// Algebroid validity of `A`, skew-symmetry of the dual bracket, the
    /// fundamental identity and anchor compatibility for `d_A`-closed `α_i`,
    /// and the Leibniz law.
    pub fn check_weak(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        let n = self.order();
        let dual = self.algebroid.dual_frame();
        let (m, r) = (self.base_dim(), self.rank());
        let bound = cfg.degree_bound;
        let mut reports = self.algebroid.check(cfg);
        let secs = monomial_sections(m, r, bound);
        let closed = self.closed_family(bound);
        let scope = format!("monomial sections, summed degree <= {bound}; closed alpha from d_A of monomials and constant kernel");
        let br = |xs: &[Section]| self.dual_bracket(xs);

        let n_tuples = budget_tuples(&secs, n, bound);
        reports.push(report::check("skew-symmetry", "weak-skew-symmetry", scope.clone(), n_tuples.len(), |i| {
            let t = &n_tuples[i].0;
            let inputs = || t.iter().map(|s| render_in(dual, s));
            let base = match br(t) {
                Ok(v) => v,
                Err(e) => return Some(Witness::new(inputs(), format!("error: {e}"))),
            };
            for p in 0..n - 1 {
                let mut s = t.clone();
                s.swap(p, p + 1);
                match br(&s) {
                    Ok(v) => {
                        let d = base.plus(&v);
                        if !d.is_zero_value() {
                            return Some(Witness::new(inputs(), render_in(dual, &d)));
                        }
                    }
                    Err(e) => return Some(Witness::new(inputs(), format!("error: {e}"))),
                }
            }
            None
        }));

        let closed_a = budget_tuples(&closed, n - 1, bound);
        let fi_pairs = budget_pairs(&closed_a, &n_tuples, bound);
        reports.push(check_bracket_fi(&br, &fi_pairs, self.algebroid.dual_frame(), "weak-closed-fundamental-identity", &scope));

        let b_tuples = budget_tuples(&secs, n - 1, bound);
        let compat_pairs = budget_pairs(&closed_a, &b_tuples, bound);
        reports.push(check_anchor_compatibility(&br, self.rho(), &compat_pairs, "weak-closed-anchor-compatibility", &scope));

        let fs = monomials(m, 1, bound);
        let cases: Vec<(Vec<Section>, Poly)> = n_tuples
            .iter()
            .flat_map(|(t, d)| {
                fs.iter().filter(move |f| d + f.total_degree().unwrap_or(0) <= bound).map(move |f| (t.clone(), f.clone()))
            })
            .collect();
        reports.push(check_anchor_leibniz(&br, self.rho(), &cases, "weak-leibniz", &scope));
        reports
    }

    /// `d_A[α_1,…,α_n] = Σ_i [α_1,…,d_Aα_i,…,α_n]` and
    /// `d_A[α_1,…,α_{n−1},f] = Σ_i [α_1,…,d_Aα_i,…,α_{n−1},f] + [α_1,…,α_{n−1},d_A f]`
    /// on monomial sections, with the higher brackets from the graded extension.
    pub fn check_strong_compatibility(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        let n = self.order();
        let (m, r) = (self.base_dim(), self.rank());
        let bound = cfg.degree_bound;
        let frame = self.algebroid.dual_frame();
        let secs: Vec<(Form, u32)> = monomial_sections(m, r, bound).into_iter().map(|(s, d)| (self.as_form(&s), d)).collect();
        let scope = format!("monomial sections, summed degree <= {bound}");
        let render = |xs: &[Form]| xs.iter().map(|x| x.render()).collect::<Vec<_>>();
        let dd = |x: &Form| self.algebroid.d(x);

        let tuples = budget_tuples(&secs, n, bound);
        let main = report::check("strong-compatibility", "strong-compatibility", scope.clone(), tuples.len(), |i| {
            let a = &tuples[i].0;
            let run = || -> Result<Form> {
                let comps: Vec<Section> = a.iter().map(|x| x.components()).collect();
                let mut d = dd(&self.as_form(&self.dual_bracket(&comps)?))?;
                for k in 0..n {
                    let mut args = a.clone();
                    args[k] = dd(&a[k])?;
                    d = d.sub(&self.dual.extend(&args)?);
                }
                Ok(d)
            };
            match run() {
                Ok(d) if d.is_zero() => None,
                Ok(d) => Some(Witness::new(render(a), d.render())),
                Err(e) => Some(Witness::new(render(a), format!("error: {e}"))),
            }
        });

        let fs: Vec<(Form, u32)> = monomials(m, 1, bound)
            .into_iter()
            .map(|f| {
                let d = f.total_degree().unwrap_or(0);
                (MultiVector::scalar(frame, f), d)
            })
            .collect();
        let heads = budget_tuples(&secs, n - 1, bound);
        let cases: Vec<(Vec<Form>, Form)> = heads
            .iter()
            .flat_map(|(h, dh)| fs.iter().filter(move |(_, df)| dh + df <= bound).map(move |(f, _)| (h.clone(), f.clone())))
            .collect();
        let lemma = report::check("strong-compatibility-functions", "strong-compatibility-functions", scope, cases.len(), |i| {
            let (a, f) = &cases[i];
            let mut all = a.clone();
            all.push(f.clone());
            let run = || -> Result<Form> {
                let mut d = dd(&self.dual.extend(&all)?)?;
                for k in 0..n {
                    let mut args = all.clone();
                    args[k] = dd(&all[k])?;
                    d = d.sub(&self.dual.extend(&args)?);
                }
                Ok(d)
            };
            match run() {
                Ok(d) if d.is_zero() => None,
                Ok(d) => Some(Witness::new(render(&all), d.render())),
                Err(e) => Some(Witness::new(render(&all), format!("error: {e}"))),
            }
        });
        vec![main, lemma]
    }

    /// `{f_1,…,f_n} = ρ(d_A f_1∧…∧d_A f_{n−1})(f_n)`.
    pub fn induced_bracket(&self, fs: &[Poly]) -> Result<Poly> {
        let n = self.order();
        if fs.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: fs.len() });
        }
        let ds: Vec<Section> = fs[..n - 1].iter().map(|f| self.algebroid.d_function(f)).collect();
        let v = self.rho().apply(&ds)?;
        Ok(apply_components(&v, &fs[n - 1]))
    }

    /// The Nambu tensor on the base read off from coordinate functions, with
    /// the verification records that certify it. Any failing record aborts.
    pub fn induce_base_nambu(&self, cfg: &CheckConfig) -> Result<(NambuTensor, Vec<VerificationReport>)> {
        let n = self.order();
        let m = self.base_dim();
        if n > m {
            return Err(Error::Invalid(format!("order {n} exceeds the base dimension {m}")));
        }
        let tangent = Frame::tangent(m);
        let mut p = MultiVector::zero(tangent);
        for k in increasing_tuples(m, n) {
            let fs: Vec<Poly> = k.iter().map(|&i| Poly::var(m, i)).collect();
            p.add_assign(&MultiVector::monomial(tangent, &k, self.induced_bracket(&fs)?)?);
        }
        let t = NambuTensor::new(p, n)?;
        let bound = cfg.degree_bound;
        let mons = monomials(m, 1, bound);
        let render = |fs: &[Poly]| fs.iter().map(|f| f.to_string()).collect::<Vec<_>>();
        let br = |fs: &[Poly]| self.induced_bracket(fs).expect("arity");
        let scope = format!("monomials of degree <= {bound}");

        let skew_t: Vec<Vec<usize>> = (0..mons.len()).combinations_with_replacement(n).collect();
        let skew = report::check("skew-symmetry", "induced-skew-symmetry", scope.clone(), skew_t.len(), |i| {
            let fs: Vec<Poly> = skew_t[i].iter().map(|&k| mons[k].clone()).collect();
            let base = br(&fs);
            for p in 0..n - 1 {
                let mut s = fs.clone();
                s.swap(p, p + 1);
                let d = &base + &br(&s);
                if !d.is_zero() {
                    return Some(Witness::new(render(&fs), d));
                }
            }
            None
        });

        let rep_t = increasing_tuples(mons.len(), n);
        let representation = report::check("tensor-representation", "induced-tensor-representation", scope.clone(), rep_t.len(), |i| {
            let fs: Vec<Poly> = rep_t[i].iter().map(|&k| mons[k].clone()).collect();
            let d = &br(&fs) - &t.nambu_bracket(&fs).expect("arity");
            (!d.is_zero()).then(|| Witness::new(render(&fs), d))
        });

        let items: Vec<(Poly, u32)> = mons.iter().map(|f| (f.clone(), f.total_degree().unwrap_or(0))).collect();
        let der_budget = bound + n as u32;
        let pairs: Vec<(Poly, Poly, u32)> = (0..items.len())
            .combinations_with_replacement(2)
            .map(|v| (items[v[0]].0.clone(), items[v[1]].0.clone(), items[v[0]].1 + items[v[1]].1))
            .collect();
        let rests = budget_tuples(&items, n - 1, der_budget);
        let der_cases: Vec<(Poly, Poly, Vec<Poly>)> = pairs
            .iter()
            .flat_map(|(f, g, d)| {
                rests.iter().filter(move |(_, dr)| d + dr <= der_budget).map(move |(rest, _)| (f.clone(), g.clone(), rest.clone()))
            })
            .collect();
        let derivation = report::check(
            "derivation",
            "induced-derivation",
            format!("monomials of degree <= {bound}, summed degree <= {der_budget}"),
            der_cases.len(),
            |i| {
                let (f, g, rest) = &der_cases[i];
                let with = |h: Poly| {
                    let mut v = vec![h];
                    v.extend_from_slice(rest);
                    br(&v)
                };
                let d = &(&with(f * g) - &(f * &with(g.clone()))) - &(g * &with(f.clone()));
                (!d.is_zero()).then(|| {
                    let mut inputs = vec![f.to_string(), g.to_string()];
                    inputs.extend(render(rest));
                    Witness::new(inputs, d)
                })
            },
        );

        let fi = t.check_fi_monomials(bound);
        let reports = vec![skew, representation, derivation, fi];
        if let Some(bad) = reports.iter().find(|r| !r.passed()) {
            return Err(Error::Verification(Box::new(bad.clone())));
        }
        Ok((t, reports))
    }

    /// `d_A{f_1,…,f_n} = [d_A f_1,…,d_A f_n]` on random polynomial tuples.
    pub fn check_exact_bracket(&self, cfg: &CheckConfig) -> VerificationReport {
        let n = self.order();
        let m = self.base_dim();
        let mut s = Sampler::new(cfg.seed, "exact-bracket");
        let tuples: Vec<Vec<Poly>> =
            (0..cfg.samples).map(|_| (0..n).map(|_| s.poly(m, cfg.degree_bound, 3)).collect()).collect();
        report::check(
            "exact-bracket",
            "induced-exact-bracket",
            format!("{} random tuples, degree <= {}", cfg.samples, cfg.degree_bound),
            tuples.len(),
            |i| {
                let fs = &tuples[i];
                let inputs = || fs.iter().map(|f| f.to_string());
                let run = || -> Result<Section> {
                    let lhs = self.algebroid.d_function(&self.induced_bracket(fs)?);
                    let ds: Vec<Section> = fs.iter().map(|f| self.algebroid.d_function(f)).collect();
                    Ok(lhs.minus(&self.dual_bracket(&ds)?))
                };
                match run() {
                    Ok(d) if d.is_zero_value() => None,
                    Ok(d) => Some(Witness::new(inputs(), render_in(self.algebroid.dual_frame(), &d))),
                    Err(e) => Some(Witness::new(inputs(), format!("error: {e}"))),
                }
            },
        )
    }

    /// `a*[α_1,…,α_n]_P = [a*α_1,…,a*α_n]` and `ρ(a*α_1∧…∧a*α_{n−1}) = P♯(α_1∧…∧α_{n−1})`
    /// on monomial 1-forms.
    pub fn check_anchor_morphism(&self, t: &NambuTensor, cfg: &CheckConfig) -> Vec<VerificationReport> {
        let n = self.order();
        let m = self.base_dim();
        let bound = cfg.degree_bound;
        let cot = Frame::cotangent(m);
        let forms: Vec<(Section, u32)> = monomial_sections(m, m, bound);
        let scope = format!("monomial 1-forms, summed degree <= {bound}");
        let a_star = |x: &Section| self.algebroid.anchor_dual(x);
        let inputs = |xs: &[Section]| xs.iter().map(|x| MultiVector::from_components(cot, x).expect("components").render()).collect::<Vec<_>>();

        let tuples = budget_tuples(&forms, n, bound);
        let brackets = report::check("anchor-dual-bracket", "anchor-morphism-bracket", scope.clone(), tuples.len(), |i| {
            let xs = &tuples[i].0;
            let run = || -> Result<Section> {
                let fs: Vec<Form> = xs.iter().map(|x| MultiVector::from_components(cot, x)).collect::<Result<_>>()?;
                let lhs = a_star(&t.form_bracket(&fs)?.components());
                let pulled: Vec<Section> = xs.iter().map(a_star).collect();
                Ok(lhs.minus(&self.dual_bracket(&pulled)?))
            };
            match run() {
                Ok(d) if d.is_zero_value() => None,
                Ok(d) => Some(Witness::new(inputs(xs), render_in(self.algebroid.dual_frame(), &d))),
                Err(e) => Some(Witness::new(inputs(xs), format!("error: {e}"))),
            }
        });

        let heads = budget_tuples(&forms, n - 1, bound);
        let anchors = report::check("anchor-dual-anchor", "anchor-morphism-anchor", scope, heads.len(), |i| {
            let xs = &heads[i].0;
            let run = || -> Result<Vec<Poly>> {
                let fs: Vec<Form> = xs.iter().map(|x| MultiVector::from_components(cot, x)).collect::<Result<_>>()?;
                let pulled: Vec<Section> = xs.iter().map(a_star).collect();
                let lhs = self.rho().apply(&pulled)?;
                Ok(lhs.minus(&t.p_sharp(&fs)?.components()))
            };
            match run() {
                Ok(d) if d.is_zero_value() => None,
                Ok(d) => Some(Witness::new(inputs(xs), render_in(Frame::tangent(m), &d))),
                Err(e) => Some(Witness::new(inputs(xs), format!("error: {e}"))),
            }
        });
        vec![brackets, anchors]
    }
}

/// A bundle map `A → B` over the identity: `f(e_i) = Σ_j matrix[j][i] e'_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleMorphism {
    matrix: Vec<Vec<Poly>>,
}

impl BundleMorphism {
    pub fn new(matrix: Vec<Vec<Poly>>) -> Result<Self> {
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged morphism matrix".into()));
        }
        Ok(BundleMorphism { matrix })
    }

    pub fn identity(rank: usize, base_dim: usize) -> Self {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { Poly::one(base_dim) } else { Poly::zero(base_dim) }).collect())
            .collect();
        BundleMorphism { matrix }
    }

    /// The anchor of `A` as a map `A → TM`.
    pub fn from_anchor(a: &AlgebroidData) -> Self {
        let am = a.anchor_matrix();
        let m = a.base_dim();
        let matrix = (0..m).map(|j| (0..a.rank()).map(|i| am[i][j].clone()).collect()).collect();
        BundleMorphism { matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.matrix
    }

    pub fn scale(&self, r: &Rational) -> Self {
        BundleMorphism { matrix: self.matrix.iter().map(|row| row.iter().map(|p| p.scale(r)).collect()).collect() }
    }

    /// `f(X)`.
    pub fn push(&self, x: &[Poly]) -> Section {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(Poly::zero(x[0].num_vars()), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// `f*β` with `(f*β)_i = Σ_k matrix[k][i] β_k`.
    pub fn pull(&self, beta: &[Poly]) -> Section {
        let nv = beta[0].num_vars();
        (0..self.cols())
            .map(|i| (0..self.rows()).fold(Poly::zero(nv), |acc, k| &acc + &(&self.matrix[k][i] * &beta[k])))
            .collect()
    }
}

/// Lie algebroid morphism, preservation of the dual brackets and anchors under
/// `f*`, and equality of the induced base tensors.
pub fn check_morphism(
    src: &BialgebroidData,
    dst: &BialgebroidData,
    f: &BundleMorphism,
    cfg: &CheckConfig,
) -> Result<Vec<VerificationReport>> {
    let (m, ra, rb) = (src.base_dim(), src.rank(), dst.rank());
    if dst.base_dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: dst.base_dim() });
    }
    if f.rows() != rb || f.cols() != ra {
        return Err(Error::DimensionMismatch { expected: rb * ra, got: f.rows() * f.cols() });
    }
    if src.order() != dst.order() {
        return Err(Error::ArityMismatch { expected: src.order(), got: dst.order() });
    }
    for p in f.matrix.iter().flatten() {
        if p.num_vars() != m {
            return Err(Error::VarMismatch { left: p.num_vars(), right: m });
        }
    }
    let n = src.order();
    let bound = cfg.degree_bound;
    let scope = format!("monomial sections, summed degree <= {bound}");
    let err_w = |inputs: Vec<String>, e: Error| Some(Witness::new(inputs, format!("error: {e}")));
    let a_secs = monomial_sections(m, ra, bound);
    let b_secs = monomial_sections(m, rb, bound);
    let render = |frame: Frame, xs: &[Section]| xs.iter().map(|x| render_in(frame, x)).collect::<Vec<_>>();
    let (fa, fb) = (src.algebroid.frame(), dst.algebroid.frame());
    let tangent = Frame::tangent(m);

    let pairs = budget_tuples(&a_secs, 2, bound);
    let bracket = report::check("algebroid-bracket", "morphism-algebroid-bracket", scope.clone(), pairs.len(), |i| {
        let xy = &pairs[i].0;
        let run = || -> Result<Section> {
            let lhs = f.push(&src.algebroid.section_bracket(&xy[0], &xy[1])?);
            Ok(lhs.minus(&dst.algebroid.section_bracket(&f.push(&xy[0]), &f.push(&xy[1]))?))
        };
        match run() {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(render(fa, xy), render_in(fb, &d))),
            Err(e) => err_w(render(fa, xy), e),
        }
    });

    let anchor = report::check("algebroid-anchor", "morphism-algebroid-anchor", scope.clone(), a_secs.len(), |i| {
        let x = &a_secs[i].0;
        let run = || -> Result<Vec<Poly>> {
            let lhs = dst.algebroid.anchor.apply(&[f.push(x)])?;
            Ok(lhs.minus(&src.algebroid.anchor.apply(std::slice::from_ref(x))?))
        };
        match run() {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(render(fa, std::slice::from_ref(x)), render_in(tangent, &d))),
            Err(e) => err_w(render(fa, std::slice::from_ref(x)), e),
        }
    });

    let b_tuples = budget_tuples(&b_secs, n, bound);
    let dual_bracket = report::check("dual-bracket", "morphism-dual-bracket", scope.clone(), b_tuples.len(), |i| {
        let bs = &b_tuples[i].0;
        let run = || -> Result<Section> {
            let lhs = f.pull(&dst.dual_bracket(bs)?);
            let pulled: Vec<Section> = bs.iter().map(|b| f.pull(b)).collect();
            Ok(lhs.minus(&src.dual_bracket(&pulled)?))
        };
        match run() {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(render(fb.dual(), bs), render_in(fa.dual(), &d))),
            Err(e) => err_w(render(fb.dual(), bs), e),
        }
    });

    let heads = budget_tuples(&b_secs, n - 1, bound);
    let dual_anchor = report::check("dual-anchor", "morphism-dual-anchor", scope, heads.len(), |i| {
        let bs = &heads[i].0;
        let run = || -> Result<Vec<Poly>> {
            let pulled: Vec<Section> = bs.iter().map(|b| f.pull(b)).collect();
            Ok(src.rho().apply(&pulled)?.minus(&dst.rho().apply(bs)?))
        };
        match run() {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(render(fb.dual(), bs), render_in(tangent, &d))),
            Err(e) => err_w(render(fb.dual(), bs), e),
        }
    });

    let induced = {
        let scope = "coefficients of the induced base tensors";
        match (src.induce_base_nambu(cfg), dst.induce_base_nambu(cfg)) {
            (Ok((ts, _)), Ok((td, _))) => {
                let d = ts.tensor().sub(td.tensor());
                let w = (!d.is_zero()).then(|| Witness::new([ts.tensor().render(), td.tensor().render()], d.render()));
                VerificationReport::new("induced-tensor", "morphism-induced-tensor", scope, 1, w)
            }
            (Err(e), _) | (_, Err(e)) => {
                VerificationReport::new("induced-tensor", "morphism-induced-tensor", scope, 1, err_w(Vec::new(), e))
            }
        }
    };
    Ok(vec![bracket, anchor, dual_bracket, dual_anchor, induced])
}
