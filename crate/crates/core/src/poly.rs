//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted ascending by exponent vector (lexicographic) with
//! no zero coefficients, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponent vector, one entry per coordinate.
pub type Monomial = SmallVec<[u16; 8]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    num_vars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly {
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(num_vars);
        }
        Poly {
            num_vars,
            terms: vec![(SmallVec::from_elem(0, num_vars), c)],
        }
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index {i} out of range {num_vars}");
        let mut m: Monomial = SmallVec::from_elem(0, num_vars);
        m[i] = 1;
        Poly {
            num_vars,
            terms: vec![(m, Rational::one())],
        }
    }

    pub fn monomial(exponents: &[u16], coeff: Rational) -> Self {
        let num_vars = exponents.len();
        if coeff.is_zero() {
            return Self::zero(num_vars);
        }
        Poly {
            num_vars,
            terms: vec![(SmallVec::from_slice(exponents), coeff)],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, zero) terms.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        for (m, _) in &v {
            assert_eq!(m.len(), num_vars, "exponent vector length");
        }
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly {
            num_vars,
            terms: combine_sorted(v),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        match self.terms.first() {
            Some((m, c)) if m.iter().all(|&e| e == 0) => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u16]) -> Rational {
        match self.terms.binary_search_by(|(m, _)| m.as_slice().cmp(exps)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().map(|&e| e as u32).sum())
            .max()
    }

    /// Set of total degrees in the variables `vars` over all terms.
    pub fn degrees_in(&self, vars: std::ops::Range<usize>) -> Vec<u32> {
        let mut d: Vec<u32> = self
            .terms
            .iter()
            .map(|(m, _)| m[vars.clone()].iter().map(|&e| e as u32).sum())
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        Poly {
            num_vars: self.num_vars,
            terms: out,
        }
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.num_vars);
        }
        let mut prod = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                prod.push((m, ca * cb));
            }
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            // monomial times polynomial preserves order
            return Poly {
                num_vars: self.num_vars,
                terms: prod,
            };
        }
        prod.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly {
            num_vars: self.num_vars,
            terms: combine_sorted(prod),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.num_vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to coordinate `i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.num_vars,
                what: "coordinates",
            });
        }
        Ok(self.partial_unchecked(i))
    }

    pub(crate) fn partial_unchecked(&self, i: usize) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] = e - 1;
            terms.push((m2, c * &Rational::from_int(e as i64)));
        }
        // lowering the same slot by one keeps lex order
        Poly {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.num_vars).map(|i| self.partial_unchecked(i)).collect()
    }

    /// Re-embeds into `num_vars` variables, placing the current variables at `offset`.
    pub fn embed(&self, num_vars: usize, offset: usize) -> Poly {
        assert!(offset + self.num_vars <= num_vars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2: Monomial = SmallVec::from_elem(0, num_vars);
                m2[offset..offset + self.num_vars].copy_from_slice(m);
                (m2, c.clone())
            })
            .collect::<Vec<_>>();
        Poly::from_terms(num_vars, terms)
    }

    /// Restricts to the variables `range`, failing if other variables occur.
    pub fn project(&self, range: std::ops::Range<usize>) -> Option<Poly> {
        let n = range.len();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            for (k, &e) in m.iter().enumerate() {
                if e != 0 && !range.contains(&k) {
                    return None;
                }
            }
            terms.push((SmallVec::from_slice(&m[range.clone()]), c.clone()));
        }
        Some(Poly::from_terms(n, terms))
    }

    /// Keeps only terms whose degree in `vars` equals `degree`.
    pub fn part_of_degree_in(&self, vars: std::ops::Range<usize>, degree: u32) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[vars.clone()].iter().map(|&e| e as u32).sum::<u32>() == degree)
                .cloned()
                .collect(),
        }
    }

    pub fn parse(s: &str, names: &[String]) -> Result<Poly> {
        parse::parse_poly(s, names)
    }

    /// Parses with the default coordinate names `x1..xm`.
    pub fn parse_x(s: &str, num_vars: usize) -> Result<Poly> {
        parse::parse_poly(s, &default_names(num_vars))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub fn default_names(num_vars: usize) -> Vec<String> {
    (1..=num_vars).map(|i| format!("x{i}")).collect()
}

fn combine_sorted(v: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some((_, lc)) = out.last() {
        if lc.is_zero() {
            out.pop();
        }
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a variable-count mismatch; use [`Poly::checked_add`] for a `Result`.
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "poly variable count mismatch");
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "poly variable count mismatch");
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "poly variable count mismatch");
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // highest term first
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            let mut first = true;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                first = false;
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.num_vars);
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.num_vars, self)
    }
}

mod parse {
    use super::*;

    struct Parser<'a> {
        s: &'a [u8],
        pos: usize,
        names: &'a [String],
        src: &'a str,
    }

    pub(super) fn parse_poly(s: &str, names: &[String]) -> Result<Poly> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
            names,
            src: s,
        };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }

    impl Parser<'_> {
        fn err(&self, msg: &str) -> Error {
            Error::Parse(format!("{msg} at column {} in `{}`", self.pos + 1, self.src))
        }

        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }

        fn sum(&mut self) -> Result<Poly> {
            let n = self.names.len();
            let mut acc = Poly::zero(n);
            let mut sign = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                _ => 1,
            };
            loop {
                let t = self.product()?;
                acc = if sign < 0 { &acc - &t } else { &acc + &t };
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        sign = 1;
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        sign = -1;
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn product(&mut self) -> Result<Poly> {
            let mut acc = self.factor()?;
            while self.peek() == Some(b'*') {
                self.pos += 1;
                let f = self.factor()?;
                acc = &acc * &f;
            }
            Ok(acc)
        }

        fn integer(&mut self) -> Result<&str> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer"));
            }
            Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
        }

        fn exponent(&mut self) -> Result<u32> {
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let e = self.integer()?;
                e.parse().map_err(|_| self.err("exponent too large"))
            } else {
                Ok(1)
            }
        }

        fn factor(&mut self) -> Result<Poly> {
            let n = self.names.len();
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.pos += 1;
                    let e = self.exponent()?;
                    Ok(inner.pow(e))
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?.to_string();
                    let lit = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.integer()?;
                        format!("{num}/{den}")
                    } else {
                        num
                    };
                    let r: Rational = lit.parse().map_err(|_| self.err("bad rational"))?;
                    Ok(Poly::constant(n, r))
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.s.len()
                        && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let ident = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                    let idx = self
                        .names
                        .iter()
                        .position(|v| v == ident)
                        .ok_or_else(|| self.err(&format!("unknown variable `{ident}`")))?;
                    let e = self.exponent()?;
                    let mut m: Monomial = SmallVec::from_elem(0, n);
                    m[idx] = u16::try_from(e).map_err(|_| self.err("exponent too large"))?;
                    Ok(Poly::monomial(&m, Rational::one()))
                }
                _ => Err(self.err("expected term")),
            }
        }
    }
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use crate::sample::strategies::poly;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn ring_axioms(a in poly(3, 4, 5), b in poly(3, 4, 5), c in poly(3, 4, 5)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn partial_is_a_derivation(a in poly(3, 4, 5), b in poly(3, 4, 5), i in 0usize..3) {
            let lhs = (&a * &b).partial(i).unwrap();
            let rhs = &(&a.partial(i).unwrap() * &b) + &(&a * &b.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn addition_is_canonical(a in poly(3, 4, 5), b in poly(3, 4, 5)) {
            let ab = &a + &b;
            let ba = &b + &a;
            prop_assert_eq!(format!("{ab:?}"), format!("{ba:?}"));
            prop_assert_eq!(ab.to_string(), ba.to_string());
        }
    }
}
