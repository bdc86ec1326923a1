//! Anchors and the graded extension of an n-bracket from degree-1 generators to
//! the whole exterior algebra by graded antisymmetry and the graded Leibniz rule.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exterior::{apply_components, det, sort_with_sign, vf_bracket, Frame, Indices, MultiVector};
use crate::filippov::{check_graded_fi, fi_defect, render_in, section_bracket, BracketValue, Section, StructureConstants};
use crate::nambu::NambuTensor;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::report::{self, VerificationReport, Witness};
use crate::sample::{budget_pairs, budget_tuples, increasing_tuples, monomial_sections, monomials, CheckConfig, Sampler};

/// Alternating `C∞`-multilinear map `Λ^k A → TM` given on increasing frame
/// tuples; values are tangent component vectors of length `base_dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorMap {
    arity_in: usize,
    source: Frame,
    table: BTreeMap<Indices, Vec<Poly>>,
}

impl AnchorMap {
    pub fn new(source: Frame, arity_in: usize) -> Self {
        AnchorMap { arity_in, source, table: BTreeMap::new() }
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn source(&self) -> Frame {
        self.source
    }

    pub fn base_dim(&self) -> usize {
        self.source.base_dim
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Indices, &Vec<Poly>)> {
        self.table.iter()
    }

    /// Sets `ρ(e_{i1}∧…∧e_{ik}) = value`, reordering the indices with sign.
    pub fn set(&mut self, indices: &[usize], value: Vec<Poly>) -> Result<()> {
        if indices.len() != self.arity_in {
            return Err(Error::ArityMismatch { expected: self.arity_in, got: indices.len() });
        }
        let m = self.base_dim();
        if value.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: value.len() });
        }
        for &i in indices {
            if i >= self.source.rank {
                return Err(Error::IndexOutOfRange { index: i, bound: self.source.rank, what: "anchor frame elements" });
            }
        }
        for v in &value {
            if v.num_vars() != m {
                return Err(Error::VarMismatch { left: v.num_vars(), right: m });
            }
        }
        let mut idx = indices.to_vec();
        let sign = sort_with_sign(&mut idx).ok_or_else(|| Error::Invalid(format!("repeated anchor index in {:?}", idx)))?;
        let key: Indices = idx.iter().map(|&i| i as u8).collect();
        let value: Vec<Poly> = if sign < 0 { value.negated() } else { value };
        if value.iter().all(Poly::is_zero) {
            self.table.remove(&key);
        } else {
            self.table.insert(key, value);
        }
        Ok(())
    }

    /// Stored value for increasing indices.
    pub fn entry(&self, sorted: &[usize]) -> Vec<Poly> {
        let key: Indices = sorted.iter().map(|&i| i as u8).collect();
        self.table.get(&key).cloned().unwrap_or_else(|| vec![Poly::zero(self.base_dim()); self.base_dim()])
    }

    /// `ρ(e_{i1}∧…∧e_{ik})` for arbitrary indices as a tangent vector field.
    pub fn value(&self, indices: &[usize]) -> MultiVector {
        let mut idx = indices.to_vec();
        let frame = Frame::tangent(self.base_dim());
        match sort_with_sign(&mut idx) {
            None => MultiVector::zero(frame),
            Some(s) => {
                let v = MultiVector::from_components(frame, &self.entry(&idx)).expect("anchor components");
                if s < 0 {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    /// `ρ(X_1∧…∧X_k) = Σ_K det(X_a^{K_b}) ρ(e_K)` on component vectors.
    pub fn apply(&self, xs: &[Section]) -> Result<Vec<Poly>> {
        if xs.len() != self.arity_in {
            return Err(Error::ArityMismatch { expected: self.arity_in, got: xs.len() });
        }
        for x in xs {
            if x.len() != self.source.rank {
                return Err(Error::DimensionMismatch { expected: self.source.rank, got: x.len() });
            }
        }
        let m = self.base_dim();
        let mut out = vec![Poly::zero(m); m];
        for (k, v) in &self.table {
            let mat: Vec<Vec<Poly>> = xs.iter().map(|x| k.iter().map(|&j| x[j as usize].clone()).collect()).collect();
            let d = det(&mat, m);
            if d.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(v) {
                if !c.is_zero() {
                    *o = &*o + &(&d * c);
                }
            }
        }
        Ok(out)
    }

    /// `ρ` on a homogeneous element of degree `arity_in`.
    pub fn apply_multivector(&self, x: &MultiVector) -> Result<MultiVector> {
        if x.frame() != self.source {
            return Err(Error::FrameMismatch(format!("anchor expects {:?}, got {:?}", self.source, x.frame())));
        }
        if !x.is_homogeneous_of(self.arity_in) {
            return Err(Error::DegreeMismatch(format!("anchor expects degree {}", self.arity_in)));
        }
        let m = self.base_dim();
        let mut out = vec![Poly::zero(m); m];
        for (k, c) in x.terms() {
            let key: Vec<usize> = k.iter().map(|&i| i as usize).collect();
            for (o, v) in out.iter_mut().zip(self.entry(&key)) {
                *o = &*o + &(c * &v);
            }
        }
        MultiVector::from_components(Frame::tangent(m), &out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = AnchorMap::new(self.source, self.arity_in);
        if r.is_zero() {
            return out;
        }
        for (k, v) in &self.table {
            out.table.insert(k.clone(), v.iter().map(|p| p.scale(r)).collect());
        }
        out
    }
}

/// The bracket on degree-1 generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorBracket {
    /// Frame table, extended to sections by the anchor Leibniz rule.
    Table(StructureConstants),
    /// The bracket of 1-forms induced by a Nambu tensor, evaluated directly.
    NambuForm(NambuTensor),
}

/// Which slot of degree ≥ 2 the recursion splits next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    /// Highest degree, rightmost among ties.
    Normal,
    LeftmostFirst,
    RightmostFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBracket {
    arity: usize,
    generator: GeneratorBracket,
    anchor: AnchorMap,
    frame: Frame,
}

type Slot = (Indices, Poly);

impl GradedBracket {
    pub fn new(generator: GeneratorBracket, anchor: AnchorMap, frame: Frame) -> Result<Self> {
        let arity = match &generator {
            GeneratorBracket::Table(sc) => {
                if sc.dim() != frame.rank {
                    return Err(Error::DimensionMismatch { expected: frame.rank, got: sc.dim() });
                }
                if sc.num_vars() != frame.base_dim {
                    return Err(Error::VarMismatch { left: sc.num_vars(), right: frame.base_dim });
                }
                sc.arity()
            }
            GeneratorBracket::NambuForm(t) => {
                if frame != Frame::cotangent(t.base_dim()) {
                    return Err(Error::FrameMismatch("a Nambu form bracket lives on the cotangent frame".into()));
                }
                t.order()
            }
        };
        if anchor.source() != frame {
            return Err(Error::FrameMismatch(format!("anchor source {:?} differs from {:?}", anchor.source(), frame)));
        }
        if anchor.arity_in() + 1 != arity {
            return Err(Error::ArityMismatch { expected: arity - 1, got: anchor.arity_in() });
        }
        Ok(GradedBracket { arity, generator, anchor, frame })
    }

    /// Generator = structure constants, anchor as given.
    pub fn from_table(sc: StructureConstants, anchor: AnchorMap, frame: Frame) -> Result<Self> {
        Self::new(GeneratorBracket::Table(sc), anchor, frame)
    }

    /// The bracket on `Γ(Λ•T*M)` of a Nambu tensor: form bracket on 1-forms and
    /// anchor `P♯`.
    pub fn nambu(t: NambuTensor) -> Self {
        let frame = Frame::cotangent(t.base_dim());
        let anchor = t.sharp_anchor();
        Self::new(GeneratorBracket::NambuForm(t), anchor, frame).expect("consistent Nambu data")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn anchor(&self) -> &AnchorMap {
        &self.anchor
    }

    pub fn generator(&self) -> &GeneratorBracket {
        &self.generator
    }

    fn zero_section(&self) -> Section {
        vec![Poly::zero(self.frame.base_dim); self.frame.rank]
    }

    /// The generator bracket on `n` sections given as component vectors.
    pub fn section_bracket(&self, xs: &[Section]) -> Result<Section> {
        match &self.generator {
            GeneratorBracket::Table(sc) => section_bracket(sc, Some(&self.anchor), xs),
            GeneratorBracket::NambuForm(t) => {
                let forms = xs
                    .iter()
                    .map(|x| MultiVector::from_components(self.frame, x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(t.form_bracket(&forms)?.components())
            }
        }
    }

    /// `[a_1,…,a_n]` on arbitrary elements of `Γ(Λ•)` over the frame.
    pub fn extend(&self, args: &[MultiVector]) -> Result<MultiVector> {
        self.extend_with(args, PeelOrder::Normal)
    }

    pub fn extend_with(&self, args: &[MultiVector], order: PeelOrder) -> Result<MultiVector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: args.len() });
        }
        for a in args {
            if a.frame() != self.frame {
                return Err(Error::FrameMismatch(format!("expected {:?}, got {:?}", self.frame, a.frame())));
            }
        }
        let terms: Vec<Vec<Slot>> = args.iter().map(|a| a.terms().map(|(k, c)| (k.clone(), c.clone())).collect()).collect();
        let mut out = MultiVector::zero(self.frame);
        for combo in terms.iter().map(|t| t.iter()).multi_cartesian_product() {
            let slots: Vec<Slot> = combo.into_iter().cloned().collect();
            out.add_assign(&self.extend_slots(slots, order)?);
        }
        Ok(out)
    }

    fn slot_section(&self, (idx, c): &Slot) -> Section {
        let mut s = self.zero_section();
        s[idx[0] as usize] = c.clone();
        s
    }

    fn slot_mv(&self, (idx, c): &Slot) -> MultiVector {
        let idx: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        MultiVector::monomial(self.frame, &idx, c.clone()).expect("sorted slot indices")
    }

    fn extend_slots(&self, mut slots: Vec<Slot>, order: PeelOrder) -> Result<MultiVector> {
        let n = slots.len();
        let degs: Vec<usize> = slots.iter().map(|s| s.0.len()).collect();
        let total: usize = degs.iter().sum();
        if total + 1 < n {
            return Ok(MultiVector::zero(self.frame));
        }
        if degs.iter().all(|&d| d == 1) {
            let xs: Vec<Section> = slots.iter().map(|s| self.slot_section(s)).collect();
            return MultiVector::from_components(self.frame, &self.section_bracket(&xs)?);
        }
        let zeros: Vec<usize> = (0..n).filter(|&i| degs[i] == 0).collect();
        if zeros.len() == 1 && degs.iter().all(|&d| d <= 1) {
            let k = zeros[0];
            let others: Vec<Section> = (0..n).filter(|&i| i != k).map(|i| self.slot_section(&slots[i])).collect();
            let v = self.anchor.apply(&others)?;
            let val = apply_components(&v, &slots[k].1);
            // moving the function past n−1−k degree-1 slots
            let val = if (n - 1 - k) % 2 == 1 { -val } else { val };
            return Ok(MultiVector::scalar(self.frame, val));
        }
        let candidates = (0..n).filter(|&i| degs[i] >= 2);
        let p = match order {
            PeelOrder::Normal => candidates.max_by_key(|&i| (degs[i], i)),
            PeelOrder::LeftmostFirst => candidates.min(),
            PeelOrder::RightmostFirst => candidates.max(),
        }
        .expect("a slot of degree at least 2");
        let dp = degs[p] as i64;
        let mut negative = false;
        for &dj in &degs[p + 1..] {
            // −(−1)^{(p−1)(q−1)} per adjacent swap
            if ((dp - 1) * (dj as i64 - 1)).rem_euclid(2) == 0 {
                negative = !negative;
            }
        }
        let last = slots.remove(p);
        let head_shift: i64 = slots.iter().map(|s| s.0.len() as i64 - 1).sum();
        let (idx, c) = last;
        let b: Slot = (idx[..1].iter().copied().collect(), c);
        let rest: Slot = (idx[1..].iter().copied().collect(), Poly::one(self.frame.base_dim));
        let b_mv = self.slot_mv(&b);
        let rest_mv = self.slot_mv(&rest);
        let mut with_b = slots.clone();
        with_b.push(b);
        let first = self.extend_slots(with_b, order)?.wedge(&rest_mv)?;
        let mut with_rest = slots;
        with_rest.push(rest);
        let second = b_mv.wedge(&self.extend_slots(with_rest, order)?)?;
        let mut out = if head_shift.rem_euclid(2) == 1 { first.sub(&second) } else { first.add(&second) };
        if negative {
            out = out.neg();
        }
        Ok(out)
    }
}

pub fn extend_bracket(gb: &GradedBracket, args: &[MultiVector]) -> Result<MultiVector> {
    gb.extend(args)
}

fn render_all(xs: &[MultiVector]) -> Vec<String> {
    xs.iter().map(MultiVector::render).collect()
}

fn error_witness(xs: &[MultiVector], e: Error) -> Option<Witness> {
    Some(Witness::new(render_all(xs), format!("error: {e}")))
}

fn homogeneous_degree(x: &MultiVector) -> Option<usize> {
    let d = x.degree()?;
    x.is_homogeneous_of(d).then_some(d)
}

/// Degree formula, graded antisymmetry, graded fundamental identity (with
/// `a_i` drawn from `fi_family`, all of degree 1), graded Leibniz rule and
/// peeling-order confluence, each on `cfg.samples` random tuples from
/// `samples`.
pub fn check_gerstenhaber_axioms(
    gb: &GradedBracket,
    samples: &[MultiVector],
    fi_family: &[MultiVector],
    cfg: &CheckConfig,
) -> Vec<VerificationReport> {
    let n = gb.arity;
    let count = cfg.samples;
    let draw = |label: &str, from: &[MultiVector], k: usize| -> Vec<Vec<MultiVector>> {
        let mut s = Sampler::new(cfg.seed, label);
        (0..count).map(|_| (0..k).map(|_| from[s.index(from.len())].clone()).collect()).collect()
    };
    let scope = format!("{count} random tuples from {} homogeneous samples", samples.len());

    let deg_t = draw("gerstenhaber-degree", samples, n);
    let degree = report::check("degree", "gerstenhaber-degree", scope.clone(), count, |i| {
        let a = &deg_t[i];
        let out = match gb.extend(a) {
            Ok(v) => v,
            Err(e) => return error_witness(a, e),
        };
        let total: i64 = a.iter().map(|x| homogeneous_degree(x).unwrap_or(0) as i64).sum::<i64>() - (n as i64 - 1);
        if out.is_zero() || (total >= 0 && out.is_homogeneous_of(total as usize)) {
            None
        } else {
            Some(Witness::new(render_all(a), format!("expected degree {total}, got {}", out.render())))
        }
    });

    let anti_t = draw("gerstenhaber-antisymmetry", samples, n);
    let antisymmetry = report::check("antisymmetry", "gerstenhaber-antisymmetry", scope.clone(), count, |i| {
        let a = &anti_t[i];
        let base = match gb.extend(a) {
            Ok(v) => v,
            Err(e) => return error_witness(a, e),
        };
        for p in 0..n - 1 {
            let mut b = a.clone();
            b.swap(p, p + 1);
            let swapped = match gb.extend(&b) {
                Ok(v) => v,
                Err(e) => return error_witness(a, e),
            };
            let dp = homogeneous_degree(&a[p]).unwrap_or(0) as i64 - 1;
            let dq = homogeneous_degree(&a[p + 1]).unwrap_or(0) as i64 - 1;
            let d = if (dp * dq).rem_euclid(2) == 0 { base.add(&swapped) } else { base.sub(&swapped) };
            if !d.is_zero() {
                return Some(Witness::new(render_all(a), d.render()));
            }
        }
        None
    });

    let fi_a = draw("gerstenhaber-fi-a", fi_family, n - 1);
    let fi_b = draw("gerstenhaber-fi-b", samples, n);
    let br = |xs: &[MultiVector]| gb.extend(xs);
    let fi = {
        let pairs: Vec<(Vec<MultiVector>, Vec<MultiVector>)> = fi_a.into_iter().zip(fi_b).collect();
        report::check("graded-fundamental-identity", "graded-fi-degree-one", scope.clone(), count, |i| {
            let (a, b) = &pairs[i];
            let r = check_graded_fi(&br, std::slice::from_ref(a), std::slice::from_ref(b), "");
            r.witness
        })
    };

    let lb_t = draw("gerstenhaber-leibniz", samples, n + 1);
    let leibniz = report::check("leibniz", "gerstenhaber-leibniz", scope.clone(), count, |i| {
        let t = &lb_t[i];
        let (a, b, c) = (&t[..n - 1], &t[n - 1], &t[n]);
        let run = || -> Result<MultiVector> {
            let with = |x: MultiVector| {
                let mut v = a.to_vec();
                v.push(x);
                gb.extend(&v)
            };
            let lhs = with(b.wedge(c)?)?;
            let shift: i64 = a.iter().map(|x| homogeneous_degree(x).unwrap_or(0) as i64 - 1).sum();
            let db = homogeneous_degree(b).unwrap_or(0) as i64;
            let first = with(b.clone())?.wedge(c)?;
            let second = b.wedge(&with(c.clone())?)?;
            let rhs = if (shift * db).rem_euclid(2) == 1 { first.sub(&second) } else { first.add(&second) };
            Ok(lhs.sub(&rhs))
        };
        match run() {
            Ok(d) if d.is_zero() => None,
            Ok(d) => Some(Witness::new(render_all(t), d.render())),
            Err(e) => error_witness(t, e),
        }
    });

    let cf_t = draw("gerstenhaber-confluence", samples, n);
    let confluence = report::check("confluence", "extension-confluence", scope, count, |i| {
        let a = &cf_t[i];
        let run = || -> Result<Option<MultiVector>> {
            let normal = gb.extend_with(a, PeelOrder::Normal)?;
            for o in [PeelOrder::LeftmostFirst, PeelOrder::RightmostFirst] {
                let d = normal.sub(&gb.extend_with(a, o)?);
                if !d.is_zero() {
                    return Ok(Some(d));
                }
            }
            Ok(None)
        };
        match run() {
            Ok(None) => None,
            Ok(Some(d)) => Some(Witness::new(render_all(a), d.render())),
            Err(e) => error_witness(a, e),
        }
    });
    vec![degree, antisymmetry, fi, leibniz, confluence]
}

/// Algebroid data read back from a graded bracket, with the checks that the
/// read-back is an n-Lie algebroid whose extension reproduces the bracket.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub bracket: StructureConstants,
    pub anchor: AnchorMap,
    pub reports: Vec<VerificationReport>,
}

/// `[e_K]` from the degree-1 slots and `ρ(e_K')(x_k)` from `[e_K', x_k]`.
pub fn restrict_to_algebroid(gb: &GradedBracket, cfg: &CheckConfig) -> Result<Restriction> {
    let n = gb.arity;
    let frame = gb.frame;
    let (m, r) = (frame.base_dim, frame.rank);
    let mut bracket = StructureConstants::new(r, n, m)?;
    for k in increasing_tuples(r, n) {
        let args: Vec<MultiVector> = k.iter().map(|&i| MultiVector::basis(frame, i)).collect();
        let v = gb.extend(&args)?;
        if !v.is_zero() && !v.is_homogeneous_of(1) {
            return Err(Error::Internal(format!("degree-1 bracket of frame elements has degree {:?}", v.degree())));
        }
        bracket.set(&k, v.components())?;
    }
    let mut anchor = AnchorMap::new(frame, n - 1);
    for k in increasing_tuples(r, n - 1) {
        let mut args: Vec<MultiVector> = k.iter().map(|&i| MultiVector::basis(frame, i)).collect();
        let mut value = Vec::with_capacity(m);
        for j in 0..m {
            args.push(MultiVector::scalar(frame, Poly::var(m, j)));
            value.push(gb.extend(&args)?.scalar_part());
            args.pop();
        }
        anchor.set(&k, value)?;
    }
    let rebuilt = GradedBracket::from_table(bracket.clone(), anchor.clone(), frame)?;
    let frame_x = increasing_tuples(r, n - 1);
    let fs = monomials(m, 1, cfg.degree_bound);
    let basis: Vec<Section> = (0..r).map(|i| bracket.basis_section(i)).collect();
    let sections = |t: &Vec<usize>| -> Vec<Section> { t.iter().map(|&i| basis[i].clone()).collect() };

    let cases: Vec<(Vec<Section>, Poly)> = frame_x
        .iter()
        .flat_map(|t| (0..r).map(move |y| (t, y)))
        .flat_map(|(t, y)| {
            let mut v = sections(t);
            v.push(basis[y].clone());
            fs.iter().map(move |f| (v.clone(), f.clone()))
        })
        .collect();
    let gbr = |xs: &[Section]| gb.section_bracket(xs);
    let leibniz = check_anchor_leibniz(
        &gbr,
        &anchor,
        &cases,
        "restriction-leibniz",
        &format!("frame sections, monomial f of degree <= {}", cfg.degree_bound),
    );
    let frame_tuples: Vec<Vec<Section>> = frame_x.iter().map(sections).collect();
    let pairs: Vec<(Vec<Section>, Vec<Section>)> = frame_tuples
        .iter()
        .flat_map(|a| frame_tuples.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let compat = check_anchor_compatibility(&gbr, &anchor, &pairs, "restriction-anchor-compatibility", "all frame tuples");

    let mut s = Sampler::new(cfg.seed, "restriction-round-trip");
    let trips: Vec<Vec<MultiVector>> = (0..cfg.samples)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let d = s.index(r.min(3) + 1);
                    s.multivector(frame, d, cfg.degree_bound.min(2), 2)
                })
                .collect()
        })
        .collect();
    let round_trip = report::check(
        "round-trip",
        "restriction-round-trip",
        format!("{} random tuples of degree <= 3", cfg.samples),
        trips.len(),
        |i| {
            let a = &trips[i];
            match (gb.extend(a), rebuilt.extend(a)) {
                (Ok(x), Ok(y)) => {
                    let d = x.sub(&y);
                    (!d.is_zero()).then(|| Witness::new(render_all(a), d.render()))
                }
                (Err(e), _) | (_, Err(e)) => error_witness(a, e),
            }
        },
    );
    Ok(Restriction { bracket, anchor, reports: vec![leibniz, compat, round_trip] })
}

/// `[X_1,…,X_{n−1}, fY] − f[X_1,…,X_{n−1}, Y] − ρ(X_1∧…∧X_{n−1})(f) Y` on
/// every case `(X_1,…,X_{n−1},Y; f)`.
pub fn check_anchor_leibniz(
    bracket: &(dyn Fn(&[Section]) -> Result<Section> + Sync),
    anchor: &AnchorMap,
    cases: &[(Vec<Section>, Poly)],
    clause: &str,
    scope: &str,
) -> VerificationReport {
    let frame = anchor.source();
    report::check("anchor-leibniz", clause, scope, cases.len(), |i| {
        let (t, f) = &cases[i];
        let n = t.len();
        let inputs = || t.iter().map(|s| render_in(frame, s)).chain(std::iter::once(f.to_string()));
        let run = || -> Result<Section> {
            let mut ft = t.clone();
            ft[n - 1] = t[n - 1].iter().map(|c| c * f).collect();
            let lhs = bracket(&ft)?;
            let base: Section = bracket(t)?.iter().map(|c| c * f).collect();
            let v = anchor.apply(&t[..n - 1])?;
            let xf = apply_components(&v, f);
            let corr: Section = t[n - 1].iter().map(|c| c * &xf).collect();
            Ok(lhs.minus(&base).minus(&corr))
        };
        match run() {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(inputs(), render_in(frame, &d))),
            Err(e) => Some(Witness::new(inputs(), format!("error: {e}"))),
        }
    })
}

/// `[ρ(X), ρ(Y)] − Σ_i ρ(Y_1∧…∧[X_1,…,X_{n−1},Y_i]∧…∧Y_{n−1})` on every pair of
/// `(n−1)`-tuples.
pub fn check_anchor_compatibility(
    bracket: &(dyn Fn(&[Section]) -> Result<Section> + Sync),
    anchor: &AnchorMap,
    pairs: &[(Vec<Section>, Vec<Section>)],
    clause: &str,
    scope: &str,
) -> VerificationReport {
    let tangent = Frame::tangent(anchor.base_dim());
    let frame = anchor.source();
    report::check("anchor-compatibility", clause, scope, pairs.len(), |i| {
        let (a, b) = &pairs[i];
        let inputs = || a.iter().chain(b.iter()).map(|s| render_in(frame, s));
        let run = || -> Result<MultiVector> {
            let ra = MultiVector::from_components(tangent, &anchor.apply(a)?)?;
            let rb = MultiVector::from_components(tangent, &anchor.apply(b)?)?;
            let mut d = vf_bracket(&ra, &rb)?;
            for k in 0..b.len() {
                let mut args = a.clone();
                args.push(b[k].clone());
                let mut bs = b.clone();
                bs[k] = bracket(&args)?;
                d = d.sub(&MultiVector::from_components(tangent, &anchor.apply(&bs)?)?);
            }
            Ok(d)
        };
        match run() {
            Ok(d) if d.is_zero() => None,
            Ok(d) => Some(Witness::new(inputs(), d.render())),
            Err(e) => Some(Witness::new(inputs(), format!("error: {e}"))),
        }
    })
}

/// Fundamental identity for a section bracket on explicit `(a, b)` pairs.
pub fn check_bracket_fi(
    bracket: &(dyn Fn(&[Section]) -> Result<Section> + Sync),
    pairs: &[(Vec<Section>, Vec<Section>)],
    frame: Frame,
    clause: &str,
    scope: &str,
) -> VerificationReport {
    report::check("fundamental-identity", clause, scope, pairs.len(), |i| {
        let (a, b) = &pairs[i];
        let inputs = || a.iter().chain(b.iter()).map(|s| render_in(frame, s));
        match fi_defect(bracket, a, b) {
            Ok(d) if d.is_zero_value() => None,
            Ok(d) => Some(Witness::new(inputs(), render_in(frame, &d))),
            Err(e) => Some(Witness::new(inputs(), format!("error: {e}"))),
        }
    })
}

/// n-Lie algebroid axioms for a table and an anchor on monomial section tuples
/// of summed coefficient degree ≤ the bound.
pub fn check_algebroid(sc: &StructureConstants, anchor: &AnchorMap, cfg: &CheckConfig, tag: &str) -> Vec<VerificationReport> {
    let n = sc.arity();
    let (m, r) = (sc.num_vars(), sc.dim());
    let bound = cfg.degree_bound;
    let secs = monomial_sections(m, r, bound);
    let br = |xs: &[Section]| section_bracket(sc, Some(anchor), xs);
    let a = budget_tuples(&secs, n - 1, bound);
    let b = budget_tuples(&secs, n, bound);
    let scope = format!("monomial section tuples, summed degree <= {bound}");
    let fi = check_bracket_fi(&br, &budget_pairs(&a, &b, bound), anchor.source(), &format!("{tag}-algebroid-fundamental-identity"), &scope);
    let compat = check_anchor_compatibility(
        &br,
        anchor,
        &budget_pairs(&a, &a, bound),
        &format!("{tag}-algebroid-anchor-compatibility"),
        &scope,
    );
    let fs = monomials(m, 1, bound);
    let cases: Vec<(Vec<Section>, Poly)> = b
        .iter()
        .flat_map(|(t, d)| {
            fs.iter()
                .filter(move |f| d + f.total_degree().unwrap_or(0) <= bound)
                .map(move |f| (t.clone(), f.clone()))
        })
        .collect();
    let leibniz = check_anchor_leibniz(&br, anchor, &cases, &format!("{tag}-algebroid-leibniz"), &scope);
    vec![fi, compat, leibniz]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::exact;
    use crate::filippov::a4;
    use crate::report::all_passed;

    fn a4_bracket() -> GradedBracket {
        let frame = Frame::bundle(0, 4);
        GradedBracket::from_table(a4(), AnchorMap::new(frame, 2), frame).unwrap()
    }

    fn e(frame: Frame, idx: &[usize]) -> MultiVector {
        MultiVector::monomial(frame, idx, Poly::one(frame.base_dim)).unwrap()
    }

    fn small() -> CheckConfig {
        CheckConfig { degree_bound: 2, seed: 3, samples: 25 }
    }

    #[test]
    fn nambu_function_slot_uses_anchor() {
        let gb = GradedBracket::nambu(NambuTensor::volume(3));
        let f = gb.frame();
        let x3 = MultiVector::scalar(f, Poly::var(3, 2));
        let v = gb.extend(&[e(f, &[0]), e(f, &[1]), x3.clone()]).unwrap();
        assert_eq!(v, MultiVector::scalar(f, Poly::one(3)));
        let w = gb.extend(&[x3, e(f, &[0]), e(f, &[1])]).unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn two_functions_give_zero() {
        let gb = GradedBracket::nambu(NambuTensor::volume(3));
        let f = gb.frame();
        let p = |s: &str| MultiVector::scalar(f, Poly::parse_x(s, 3).unwrap());
        assert!(gb.extend(&[p("x1"), p("x2*x3"), e(f, &[2])]).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_degree_one_wedge() {
        let gb = a4_bracket();
        let f = gb.frame();
        let (x1, x2, y, z) = (e(f, &[0]), e(f, &[1]), e(f, &[2]), e(f, &[3]));
        let lhs = gb.extend(&[x1.clone(), x2.clone(), y.wedge(&z).unwrap()]).unwrap();
        let a = gb.extend(&[x1.clone(), x2.clone(), y.clone()]).unwrap().wedge(&z).unwrap();
        let b = y.wedge(&gb.extend(&[x1, x2, z]).unwrap()).unwrap();
        assert_eq!(lhs, a.add(&b));
        // [e1,e2,e3∧e4] = e4∧e4 + e3∧[e1,e2,e4] = e3∧(−e3) = 0
        assert!(lhs.is_zero());
    }

    #[test]
    fn a4_extension_axioms() {
        let gb = a4_bracket();
        let mut s = Sampler::new(5, "a4-samples");
        let samples: Vec<MultiVector> = (0..30).map(|i| s.multivector(gb.frame(), i % 4, 0, 2)).collect();
        let deg1: Vec<MultiVector> = (0..10).map(|_| s.multivector(gb.frame(), 1, 0, 3)).collect();
        let reps = check_gerstenhaber_axioms(&gb, &samples, &deg1, &small());
        for r in &reps {
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn nambu_extension_axioms_with_closed_fi_family() {
        let gb = GradedBracket::nambu(NambuTensor::volume(3));
        let mut s = Sampler::new(6, "nambu-samples");
        let samples: Vec<MultiVector> = (0..20).map(|i| s.multivector(gb.frame(), i % 4, 1, 2)).collect();
        let closed: Vec<MultiVector> = (0..10).map(|_| exact(&s.poly(3, 2, 2))).collect();
        let reps = check_gerstenhaber_axioms(&gb, &samples, &closed, &CheckConfig { samples: 10, ..small() });
        assert!(all_passed(&reps), "{:?}", reps.iter().map(|r| r.summary()).collect::<Vec<_>>());
    }

    #[test]
    fn restrict_round_trips_a4() {
        let gb = a4_bracket();
        let r = restrict_to_algebroid(&gb, &small()).unwrap();
        assert_eq!(r.bracket, a4());
        assert!(r.anchor.is_zero());
        assert!(all_passed(&r.reports));
    }

    #[test]
    fn restrict_reads_sharp_anchor() {
        let t = NambuTensor::volume(3);
        let gb = GradedBracket::nambu(t.clone());
        let r = restrict_to_algebroid(&gb, &CheckConfig { samples: 10, ..small() }).unwrap();
        assert_eq!(r.anchor, t.sharp_anchor());
        assert!(all_passed(&r.reports), "{:?}", r.reports.iter().map(|x| x.summary()).collect::<Vec<_>>());
    }

    #[test]
    fn zero_bracket_restricts_to_zero() {
        let frame = Frame::bundle(2, 3);
        let sc = StructureConstants::new(3, 2, 2).unwrap();
        let gb = GradedBracket::from_table(sc.clone(), AnchorMap::new(frame, 1), frame).unwrap();
        let r = restrict_to_algebroid(&gb, &small()).unwrap();
        assert!(r.bracket.is_zero() && r.anchor.is_zero());
    }

    #[test]
    fn anchor_apply_is_alternating() {
        let t = NambuTensor::volume(3);
        let a = t.sharp_anchor();
        let f = Frame::cotangent(3);
        let dx = |i| MultiVector::basis(f, i).components();
        let v = a.apply(&[dx(0), dx(1)]).unwrap();
        let w = a.apply(&[dx(1), dx(0)]).unwrap();
        assert_eq!(v, w.negated());
        assert_eq!(a.value(&[1, 0]), MultiVector::basis(Frame::tangent(3), 2).neg());
    }
}
