//! Nambu-Poisson tensors on ℝ^m: the bracket on functions, `P♯`, Hamiltonian
//! fields, the bracket on 1-forms and the identity checkers built on them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exterior::{
    apply_components, contract, de_rham_d, det, exact, lie_derivative, FrameKind, Frame, MultiVector, Form,
};
use crate::extension::{AnchorMap, GradedBracket};
use crate::poly::Poly;
use crate::report::{self, VerificationReport, Witness};
use crate::sample::{budget_tuples, increasing_tuples, monomial_sections, monomials, CheckConfig, Sampler};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NambuTensor {
    p: MultiVector,
    order: usize,
}

impl NambuTensor {
    pub fn new(p: MultiVector, order: usize) -> Result<Self> {
        let frame = p.frame();
        if frame.kind != FrameKind::Tangent {
            return Err(Error::FrameMismatch("a Nambu tensor lives on the tangent frame".into()));
        }
        if order < 2 || order > frame.base_dim {
            return Err(Error::Invalid(format!("order {order} outside 2..={}", frame.base_dim)));
        }
        if !p.is_homogeneous_of(order) {
            return Err(Error::DegreeMismatch(format!("tensor is not homogeneous of degree {order}")));
        }
        Ok(NambuTensor { p, order })
    }

    /// `∂1∧…∧∂m` on ℝ^m.
    pub fn volume(m: usize) -> Self {
        let idx: Vec<usize> = (0..m).collect();
        let p = MultiVector::monomial(Frame::tangent(m), &idx, Poly::one(m)).expect("volume indices");
        NambuTensor::new(p, m).expect("volume tensor")
    }

    pub fn tensor(&self) -> &MultiVector {
        &self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base_dim(&self) -> usize {
        self.p.frame().base_dim
    }

    /// `Σ_J P_J det(w_a[J_b])` on raw covector components.
    pub fn eval_components(&self, rows: &[&[Poly]]) -> Poly {
        let m = self.base_dim();
        let mut acc = Poly::zero(m);
        for (k, c) in self.p.terms() {
            let mat: Vec<Vec<Poly>> = rows.iter().map(|r| k.iter().map(|&j| r[j as usize].clone()).collect()).collect();
            let d = det(&mat, m);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// Components of `P♯` on `n−1` covectors: `P(w_1,…,w_{n−1}, dx_j)` expanded
    /// along the last row.
    pub fn sharp_components(&self, rows: &[&[Poly]]) -> Vec<Poly> {
        let m = self.base_dim();
        let n = self.order;
        let mut out = vec![Poly::zero(m); m];
        for (k, c) in self.p.terms() {
            for b in 0..n {
                let cols: Vec<usize> = k.iter().enumerate().filter(|(i, _)| *i != b).map(|(_, &j)| j as usize).collect();
                let mat: Vec<Vec<Poly>> = rows.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
                let d = det(&mat, m);
                if d.is_zero() {
                    continue;
                }
                let t = c * &d;
                let j = k[b] as usize;
                out[j] = if (n - 1 + b) % 2 == 0 { &out[j] + &t } else { &out[j] - &t };
            }
        }
        out
    }

    fn check_functions(&self, fs: &[Poly], expected: usize) -> Result<()> {
        if fs.len() != expected {
            return Err(Error::ArityMismatch { expected, got: fs.len() });
        }
        for f in fs {
            if f.num_vars() != self.base_dim() {
                return Err(Error::VarMismatch { left: f.num_vars(), right: self.base_dim() });
            }
        }
        Ok(())
    }

    fn check_forms(&self, alphas: &[Form], expected: usize) -> Result<()> {
        if alphas.len() != expected {
            return Err(Error::ArityMismatch { expected, got: alphas.len() });
        }
        let frame = self.p.frame().dual();
        for a in alphas {
            if a.frame() != frame {
                return Err(Error::FrameMismatch(format!("expected {:?}, got {:?}", frame, a.frame())));
            }
            if !a.is_homogeneous_of(1) {
                return Err(Error::DegreeMismatch("expected 1-forms".into()));
            }
        }
        Ok(())
    }

    /// `{f_1,…,f_n} = P(df_1,…,df_n)`.
    pub fn nambu_bracket(&self, fs: &[Poly]) -> Result<Poly> {
        self.check_functions(fs, self.order)?;
        let grads: Vec<Vec<Poly>> = fs.iter().map(Poly::gradient).collect();
        let rows: Vec<&[Poly]> = grads.iter().map(Vec::as_slice).collect();
        Ok(self.eval_components(&rows))
    }

    pub fn p_sharp(&self, alphas: &[Form]) -> Result<MultiVector> {
        self.check_forms(alphas, self.order - 1)?;
        let comps: Vec<Vec<Poly>> = alphas.iter().map(MultiVector::components).collect();
        let rows: Vec<&[Poly]> = comps.iter().map(Vec::as_slice).collect();
        MultiVector::from_components(self.p.frame(), &self.sharp_components(&rows))
    }

    /// `X_{f_1…f_{n−1}} = P♯(df_1,…,df_{n−1})`.
    pub fn hamiltonian_vf(&self, fs: &[Poly]) -> Result<MultiVector> {
        self.check_functions(fs, self.order - 1)?;
        let grads: Vec<Vec<Poly>> = fs.iter().map(Poly::gradient).collect();
        let rows: Vec<&[Poly]> = grads.iter().map(Vec::as_slice).collect();
        MultiVector::from_components(self.p.frame(), &self.sharp_components(&rows))
    }

    /// `P♯` as an anchor `Λ^{n−1}T*M → TM` on frame monomials.
    pub fn sharp_anchor(&self) -> AnchorMap {
        let m = self.base_dim();
        let frame = Frame::cotangent(m);
        let mut a = AnchorMap::new(frame, self.order - 1);
        for k in increasing_tuples(m, self.order - 1) {
            let rows: Vec<Vec<Poly>> = k
                .iter()
                .map(|&i| MultiVector::basis(frame, i).components())
                .collect();
            let refs: Vec<&[Poly]> = rows.iter().map(Vec::as_slice).collect();
            a.set(&k, self.sharp_components(&refs)).expect("anchor entry");
        }
        a
    }

    /// Both displayed expressions of the bracket on 1-forms.
    pub fn form_bracket_expressions(&self, alphas: &[Form]) -> Result<(Form, Form)> {
        self.check_forms(alphas, self.order)?;
        let n = self.order;
        let m = self.base_dim();
        let frame = Frame::cotangent(m);
        let comps: Vec<Vec<Poly>> = alphas.iter().map(MultiVector::components).collect();
        let rows: Vec<&[Poly]> = comps.iter().map(Vec::as_slice).collect();
        let pa = MultiVector::scalar(frame, self.eval_components(&rows));
        let dpa = de_rham_d(&pa)?;
        let mut first = dpa.clone();
        let mut second = dpa.scale_rational(&(-(n as i64 - 1)).into());
        for k in 0..n {
            let others: Vec<&[Poly]> = rows.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, r)| *r).collect();
            let sharp = MultiVector::from_components(self.p.frame(), &self.sharp_components(&others))?;
            if sharp.is_zero() {
                continue;
            }
            // (−1)^{n+k} with 1-based k
            let neg = (n + k + 1) % 2 == 1;
            let t1 = contract(&sharp, &de_rham_d(&alphas[k])?)?;
            let t2 = lie_derivative(&sharp, &alphas[k])?;
            if neg {
                first = first.sub(&t1);
                second = second.sub(&t2);
            } else {
                first = first.add(&t1);
                second = second.add(&t2);
            }
        }
        Ok((first, second))
    }

    /// The bracket on 1-forms; disagreement of the two defining expressions is
    /// reported as [`Error::Internal`].
    pub fn form_bracket(&self, alphas: &[Form]) -> Result<Form> {
        let (first, second) = self.form_bracket_expressions(alphas)?;
        if first != second {
            return Err(Error::Internal(format!(
                "form bracket expressions disagree on [{}]: {} vs {}",
                alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "),
                first,
                second
            )));
        }
        Ok(first)
    }

    /// Leibniz rule and fundamental identity on functions.
    pub fn check_nambu_poisson(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        vec![self.check_leibniz(cfg), self.check_fi(cfg)]
    }

    fn check_leibniz(&self, cfg: &CheckConfig) -> VerificationReport {
        let m = self.base_dim();
        let n = self.order;
        let mut s = Sampler::new(cfg.seed, "nambu-leibniz");
        let tuples: Vec<Vec<Poly>> = (0..cfg.samples)
            .map(|_| (0..n + 1).map(|_| s.poly(m, cfg.degree_bound, 3)).collect())
            .collect();
        report::check(
            "leibniz",
            "nambu-leibniz",
            format!("{} random tuples, degree <= {}", cfg.samples, cfg.degree_bound),
            tuples.len(),
            |i| {
                let t = &tuples[i];
                let (f, g, rest) = (&t[0], &t[1], &t[2..]);
                let with = |h: &Poly| {
                    let mut v = vec![h.clone()];
                    v.extend_from_slice(rest);
                    self.nambu_bracket(&v).expect("arity")
                };
                let defect = &(&with(&(f * g)) - &(f * &with(g))) - &(g * &with(f));
                (!defect.is_zero()).then(|| Witness::new(t.iter().map(|p| p.to_string()), defect))
            },
        )
    }

    fn check_fi(&self, cfg: &CheckConfig) -> VerificationReport {
        let exhaustive = self.check_fi_monomials(cfg.degree_bound);
        let m = self.base_dim();
        let n = self.order;
        let mut s = Sampler::new(cfg.seed, "nambu-fi");
        let tuples: Vec<Vec<Poly>> = (0..cfg.samples)
            .map(|_| (0..2 * n - 1).map(|_| s.nonconstant_poly(m, cfg.degree_bound, 3)).collect())
            .collect();
        let br = |fs: &[Poly]| self.nambu_bracket(fs);
        let random = report::check(
            "fundamental-identity",
            "nambu-fundamental-identity",
            format!("{} random tuples, degree <= {}", cfg.samples, cfg.degree_bound),
            tuples.len(),
            |i| {
                let t = &tuples[i];
                let d = crate::filippov::fi_defect(&br, &t[..n - 1], &t[n - 1..]).expect("arity");
                (!d.is_zero()).then(|| Witness::new(t.iter().map(|p| p.to_string()), d))
            },
        );
        report::merge("fundamental-identity", "nambu-fundamental-identity", vec![exhaustive, random])
    }

    /// Fundamental identity on every pair of an increasing `(n−1)`-tuple and an
    /// increasing `n`-tuple of non-constant monomials of degree ≤ `bound`.
    ///
    /// Tuples are enumerated by the largest monomial index they use, then
    /// lexicographically by `(f, g)`, so low-degree witnesses surface first and
    /// do not depend on the bound.
    pub fn check_fi_monomials(&self, bound: u32) -> VerificationReport {
        let m = self.base_dim();
        let n = self.order;
        let mons = monomials(m, 1, bound);
        let big_n = mons.len();
        let grads: Vec<Vec<Poly>> = mons.iter().map(Poly::gradient).collect();
        let mut f_tuples = increasing_tuples(big_n, n - 1);
        let mut g_tuples = increasing_tuples(big_n, n);
        let by_max = |a: &Vec<usize>, b: &Vec<usize>| (a.last(), a).cmp(&(b.last(), b));
        f_tuples.sort_by(by_max);
        g_tuples.sort_by(by_max);
        let f_index: HashMap<Vec<usize>, usize> = f_tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let ham: Vec<Vec<Poly>> = {
            use rayon::prelude::*;
            f_tuples
                .par_iter()
                .map(|t| {
                    let rows: Vec<&[Poly]> = t.iter().map(|&i| grads[i].as_slice()).collect();
                    self.sharp_components(&rows)
                })
                .collect()
        };
        let prefix = |ts: &[Vec<usize>], level: usize| ts.partition_point(|t| *t.last().unwrap() <= level);
        let mut g_vals: Vec<Poly> = Vec::with_capacity(g_tuples.len());
        let mut checked = 0u64;
        let scope = format!("all increasing monomial tuples, 1 <= degree <= {bound}");
        let render = |f: &[usize], g: &[usize]| -> Vec<String> {
            f.iter().chain(g.iter()).map(|&i| mons[i].to_string()).collect()
        };
        for level in 0..big_n {
            let (f_lo, f_hi) = (if level == 0 { 0 } else { prefix(&f_tuples, level - 1) }, prefix(&f_tuples, level));
            let (g_lo, g_hi) = (if level == 0 { 0 } else { prefix(&g_tuples, level - 1) }, prefix(&g_tuples, level));
            {
                use rayon::prelude::*;
                let new: Vec<Poly> = g_tuples[g_lo..g_hi]
                    .par_iter()
                    .map(|t| {
                        let rows: Vec<&[Poly]> = t.iter().map(|&i| grads[i].as_slice()).collect();
                        self.eval_components(&rows)
                    })
                    .collect();
                g_vals.extend(new);
            }
            let defect = |fi: usize, gi: usize| -> Poly {
                let xf = &ham[fi];
                let g = &g_tuples[gi];
                let mut d = apply_components(xf, &g_vals[gi]);
                for i in 0..n {
                    let h = apply_components(xf, &mons[g[i]]);
                    if h.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = g.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect();
                    let t = apply_components(&ham[f_index[&rest]], &h);
                    // h sits in slot i+1 of n; moving it last costs (−1)^{n−i−1}
                    d = if (n - i - 1) % 2 == 0 { &d - &t } else { &d + &t };
                }
                d
            };
            // part A: f at this level, g up to it
            let a_count = (f_hi - f_lo) * g_hi;
            let (c, w) = report::sweep(a_count, |i| {
                let (fi, gi) = (f_lo + i / g_hi, i % g_hi);
                let d = defect(fi, gi);
                (!d.is_zero()).then(|| Witness::new(render(&f_tuples[fi], &g_tuples[gi]), d))
            });
            checked += c;
            if w.is_some() {
                return VerificationReport::new("fundamental-identity", "nambu-fundamental-identity", scope, checked, w);
            }
            // part B: f below this level, g at it
            let g_count = g_hi - g_lo;
            let b_count = f_lo * g_count;
            let (c, w) = report::sweep(b_count, |i| {
                let (fi, gi) = (i / g_count, g_lo + i % g_count);
                let d = defect(fi, gi);
                (!d.is_zero()).then(|| Witness::new(render(&f_tuples[fi], &g_tuples[gi]), d))
            });
            checked += c;
            if w.is_some() {
                return VerificationReport::new("fundamental-identity", "nambu-fundamental-identity", scope, checked, w);
            }
        }
        VerificationReport::new("fundamental-identity", "nambu-fundamental-identity", scope, checked, None)
    }

    fn random_form(&self, s: &mut Sampler, max_degree: u32) -> Form {
        let m = self.base_dim();
        let comps: Vec<Poly> = (0..m)
            .map(|_| if s.index(3) == 0 { Poly::zero(m) } else { s.poly(m, max_degree, 2) })
            .collect();
        MultiVector::from_components(Frame::cotangent(m), &comps).expect("components")
    }

    /// Skew-symmetry, the exact-form property, the function Leibniz rule, the
    /// Lie-derivative identity and the `L_X`-derivation identity, each on
    /// `cfg.samples` random inputs.
    pub fn check_form_bracket_properties(&self, cfg: &CheckConfig) -> Vec<VerificationReport> {
        let m = self.base_dim();
        let n = self.order;
        let deg = cfg.degree_bound.min(2);
        let samples = cfg.samples;
        let scope = format!("{samples} random inputs, coefficient degree <= {deg}");
        let render = |fs: &[Form]| fs.iter().map(|a| a.to_string()).collect::<Vec<_>>();
        let err = |inputs: Vec<String>, e: Error| Some(Witness::new(inputs, format!("error: {e}")));

        let mut s = Sampler::new(cfg.seed, "form-skew");
        let skew: Vec<Vec<Form>> = (0..samples).map(|_| (0..n).map(|_| self.random_form(&mut s, deg)).collect()).collect();
        let r1 = report::check("skew-symmetry", "form-bracket-skew", scope.clone(), samples, |i| {
            let a = &skew[i];
            let base = match self.form_bracket(a) {
                Ok(v) => v,
                Err(e) => return err(render(a), e),
            };
            for p in 0..n - 1 {
                let mut b = a.clone();
                b.swap(p, p + 1);
                match self.form_bracket(&b) {
                    Ok(v) => {
                        let d = base.add(&v);
                        if !d.is_zero() {
                            return Some(Witness::new(render(a), d));
                        }
                    }
                    Err(e) => return err(render(a), e),
                }
            }
            None
        });

        let mut s = Sampler::new(cfg.seed, "form-exact");
        let exact_t: Vec<Vec<Poly>> = (0..samples).map(|_| (0..n).map(|_| s.poly(m, cfg.degree_bound, 3)).collect()).collect();
        let r2 = report::check("exact-forms", "form-bracket-exact", scope.clone(), samples, |i| {
            let fs = &exact_t[i];
            let dfs: Vec<Form> = fs.iter().map(exact).collect();
            let lhs = match self.form_bracket(&dfs) {
                Ok(v) => v,
                Err(e) => return err(fs.iter().map(|f| f.to_string()).collect(), e),
            };
            let rhs = exact(&self.nambu_bracket(fs).expect("arity"));
            let d = lhs.sub(&rhs);
            (!d.is_zero()).then(|| Witness::new(fs.iter().map(|f| f.to_string()), d))
        });

        let mut s = Sampler::new(cfg.seed, "form-function-leibniz");
        let fl: Vec<(Vec<Form>, Poly)> = (0..samples)
            .map(|_| ((0..n).map(|_| self.random_form(&mut s, deg)).collect(), s.poly(m, deg, 2)))
            .collect();
        let r3 = report::check("function-leibniz", "form-bracket-leibniz", scope.clone(), samples, |i| {
            let (a, f) = &fl[i];
            let mut inputs = render(a);
            inputs.push(f.to_string());
            let mut fa = a.clone();
            fa[n - 1] = a[n - 1].scale(f);
            let lhs = match self.form_bracket(&fa) {
                Ok(v) => v,
                Err(e) => return err(inputs, e),
            };
            let br = match self.form_bracket(a) {
                Ok(v) => v,
                Err(e) => return err(inputs, e),
            };
            let sharp = self.p_sharp(&a[..n - 1]).expect("forms");
            let xf = apply_components(&sharp.components(), f);
            let d = lhs.sub(&br.scale(f)).sub(&a[n - 1].scale(&xf));
            (!d.is_zero()).then(|| Witness::new(inputs, d))
        });

        let mut s = Sampler::new(cfg.seed, "form-lie-derivative");
        let ld: Vec<(Vec<Poly>, Form)> = (0..samples)
            .map(|_| ((0..n - 1).map(|_| s.poly(m, deg, 2)).collect(), self.random_form(&mut s, deg)))
            .collect();
        let r4 = report::check("lie-derivative", "form-bracket-hamiltonian", scope.clone(), samples, |i| {
            let (fs, alpha) = &ld[i];
            let mut inputs: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
            inputs.push(alpha.to_string());
            let mut args: Vec<Form> = fs.iter().map(exact).collect();
            args.push(alpha.clone());
            let lhs = match self.form_bracket(&args) {
                Ok(v) => v,
                Err(e) => return err(inputs, e),
            };
            let x = self.hamiltonian_vf(fs).expect("arity");
            let d = lhs.sub(&lie_derivative(&x, alpha).expect("frames"));
            (!d.is_zero()).then(|| Witness::new(inputs, d))
        });

        let mut s = Sampler::new(cfg.seed, "form-derivation");
        let dv: Vec<(Vec<Poly>, Vec<Form>)> = (0..samples)
            .map(|_| ((0..n - 1).map(|_| s.poly(m, deg, 2)).collect(), (0..n).map(|_| self.random_form(&mut s, deg)).collect()))
            .collect();
        let r5 = report::check("lie-derivation", "form-bracket-derivation", scope, samples, |i| {
            let (fs, a) = &dv[i];
            let mut inputs: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
            inputs.extend(render(a));
            let x = self.hamiltonian_vf(fs).expect("arity");
            let run = || -> Result<Form> {
                let mut d = lie_derivative(&x, &self.form_bracket(a)?)?;
                for k in 0..n {
                    let mut b = a.clone();
                    b[k] = lie_derivative(&x, &a[k])?;
                    d = d.sub(&self.form_bracket(&b)?);
                }
                Ok(d)
            };
            match run() {
                Ok(d) if d.is_zero() => None,
                Ok(d) => Some(Witness::new(inputs, d)),
                Err(e) => err(inputs, e),
            }
        });
        vec![r1, r2, r3, r4, r5]
    }

    /// `d[α_1,…,α_n] = Σ_i [α_1,…,dα_i,…,α_n]`, the right side through the
    /// graded extension with generator the form bracket and anchor `P♯`.
    pub fn check_d_compatibility(&self, cfg: &CheckConfig) -> VerificationReport {
        let m = self.base_dim();
        let n = self.order;
        let gb = GradedBracket::nambu(self.clone());
        let frame = Frame::cotangent(m);
        let basis: Vec<(Form, u32)> = monomial_sections(m, m, cfg.degree_bound)
            .into_iter()
            .map(|(c, d)| (MultiVector::from_components(frame, &c).expect("components"), d))
            .collect();
        let tuples = budget_tuples(&basis, n, cfg.degree_bound);
        let defect = |a: &[Form]| -> Result<Form> {
            let mut d = de_rham_d(&self.form_bracket(a)?)?;
            for i in 0..n {
                let mut args = a.to_vec();
                args[i] = de_rham_d(&a[i])?;
                d = d.sub(&gb.extend(&args)?);
            }
            Ok(d)
        };
        let witness = |a: &[Form]| match defect(a) {
            Ok(d) if d.is_zero() => None,
            Ok(d) => Some(Witness::new(a.iter().map(|x| x.to_string()), d)),
            Err(e) => Some(Witness::new(a.iter().map(|x| x.to_string()), format!("error: {e}"))),
        };
        let exhaustive = report::check(
            "d-compatibility",
            "form-bracket-d-compatibility",
            format!("increasing tuples of monomial*dx_j, summed degree <= {}", cfg.degree_bound),
            tuples.len(),
            |i| witness(&tuples[i].0),
        );
        let mut s = Sampler::new(cfg.seed, "d-compatibility");
        let random: Vec<Vec<Form>> = (0..cfg.samples)
            .map(|_| {
                (0..n)
                    .map(|_| exact(&s.poly(m, cfg.degree_bound, 2)).scale(&s.poly(m, cfg.degree_bound, 2)))
                    .collect()
            })
            .collect();
        let sampled = report::check(
            "d-compatibility",
            "form-bracket-d-compatibility",
            format!("{} random f*dg tuples, degree <= {}", cfg.samples, cfg.degree_bound),
            random.len(),
            |i| witness(&random[i]),
        );
        report::merge("d-compatibility", "form-bracket-d-compatibility", vec![exhaustive, sampled])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn p(s: &str, m: usize) -> Poly {
        Poly::parse_x(s, m).unwrap()
    }

    fn dx(m: usize, i: usize) -> Form {
        MultiVector::basis(Frame::cotangent(m), i)
    }

    fn small() -> CheckConfig {
        CheckConfig { degree_bound: 2, seed: 1, samples: 20 }
    }

    #[test]
    fn bracket_examples() {
        let t = NambuTensor::volume(3);
        assert_eq!(t.nambu_bracket(&[p("x1", 3), p("x2", 3), p("x3", 3)]).unwrap(), Poly::one(3));
        assert_eq!(t.nambu_bracket(&[p("x1^2", 3), p("x2", 3), p("x3", 3)]).unwrap(), p("2*x1", 3));
        let f = p("x1*x2 + x3", 3);
        assert!(t.nambu_bracket(&[f.clone(), f, p("x2", 3)]).unwrap().is_zero());
        assert!(t.nambu_bracket(&[p("x1", 3), p("x2", 3)]).is_err());
    }

    #[test]
    fn sharp_examples() {
        let t = NambuTensor::volume(3);
        let del3 = MultiVector::basis(Frame::tangent(3), 2);
        assert_eq!(t.p_sharp(&[dx(3, 0), dx(3, 1)]).unwrap(), del3);
        assert!(t.p_sharp(&[dx(3, 0), dx(3, 0)]).unwrap().is_zero());
        let f = p("x1*x3 + 2", 3);
        assert_eq!(t.p_sharp(&[dx(3, 0).scale(&f), dx(3, 1)]).unwrap(), del3.scale(&f));
        assert_eq!(t.hamiltonian_vf(&[p("x1", 3), p("x2", 3)]).unwrap(), del3);
        assert!(t.hamiltonian_vf(&[p("x1", 3), p("x1", 3)]).unwrap().is_zero());
    }

    #[test]
    fn form_bracket_examples() {
        let t = NambuTensor::volume(3);
        assert!(t.form_bracket(&[dx(3, 0), dx(3, 1), dx(3, 2)]).unwrap().is_zero());
        let fs = [p("x1^2*x2", 3), p("x3 + x1", 3), p("x2*x3", 3)];
        let lhs = t.form_bracket(&fs.clone().map(|f| exact(&f))).unwrap();
        assert_eq!(lhs, exact(&t.nambu_bracket(&fs).unwrap()));
    }

    #[test]
    fn volume_passes_nambu_checks() {
        let t = NambuTensor::volume(3);
        assert!(all_passed(&t.check_nambu_poisson(&small())));
        assert!(all_passed(&t.check_form_bracket_properties(&small())));
    }

    #[test]
    fn zero_tensor_passes() {
        let t = NambuTensor::new(MultiVector::zero(Frame::tangent(3)), 3).unwrap();
        assert!(all_passed(&t.check_nambu_poisson(&small())));
    }

    #[test]
    fn rejects_bad_order() {
        let vol = NambuTensor::volume(3);
        assert!(NambuTensor::new(vol.tensor().clone(), 2).is_err());
        assert!(NambuTensor::new(vol.tensor().clone(), 4).is_err());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::exterior::{det, exact, vf_bracket};
    use crate::sample::strategies::{multivector, poly};

    fn x1_volume() -> NambuTensor {
        let p = MultiVector::monomial(Frame::tangent(3), &[0, 1, 2], Poly::var(3, 0)).unwrap();
        NambuTensor::new(p, 3).unwrap()
    }

    fn one_form() -> impl Strategy<Value = Form> {
        multivector(Frame::cotangent(3), 1, 2, 3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn volume_bracket_is_jacobian(fs in prop::collection::vec(poly(3, 3, 3), 3)) {
            let jac: Vec<Vec<Poly>> = fs.iter().map(Poly::gradient).collect();
            prop_assert_eq!(NambuTensor::volume(3).nambu_bracket(&fs).unwrap(), det(&jac, 3));
        }

        #[test]
        fn sharp_is_alternating_and_linear(a in one_form(), b in one_form(), c in one_form(), g in poly(3, 2, 2)) {
            let t = x1_volume();
            let ab = t.p_sharp(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(&ab, &t.p_sharp(&[b.clone(), a.clone()]).unwrap().neg());
            let lhs = t.p_sharp(&[a.scale(&g).add(&c), b.clone()]).unwrap();
            prop_assert_eq!(lhs, ab.scale(&g).add(&t.p_sharp(&[c, b]).unwrap()));
        }

        #[test]
        fn form_bracket_expressions_agree(a in one_form(), b in one_form(), c in one_form()) {
            for t in [NambuTensor::volume(3), x1_volume()] {
                let (l, r) = t.form_bracket_expressions(&[a.clone(), b.clone(), c.clone()]).unwrap();
                prop_assert_eq!(l, r);
            }
        }

        #[test]
        fn hamiltonian_fields_close(fs in prop::collection::vec(poly(3, 2, 2), 2), gs in prop::collection::vec(poly(3, 2, 2), 2)) {
            let t = x1_volume();
            let xf = t.hamiltonian_vf(&fs).unwrap();
            let xg = t.hamiltonian_vf(&gs).unwrap();
            let mut rhs = MultiVector::zero(Frame::tangent(3));
            for i in 0..2 {
                let mut args = fs.clone();
                args.push(gs[i].clone());
                let mut hs = gs.clone();
                hs[i] = t.nambu_bracket(&args).unwrap();
                rhs = rhs.add(&t.hamiltonian_vf(&hs).unwrap());
            }
            prop_assert_eq!(vf_bracket(&xf, &xg).unwrap(), rhs);
            // P♯ of exact forms is the Hamiltonian field
            prop_assert_eq!(t.p_sharp(&[exact(&fs[0]), exact(&fs[1])]).unwrap(), xf);
        }
    }
}
