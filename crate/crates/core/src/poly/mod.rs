//! Exact multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] carries its variable list so that ideals built from
//! several sources can be merged by name. Terms live in a `BTreeMap` keyed by
//! exponent vectors; this storage order is only a default, every consumer
//! that needs a monomial order re-sorts.

mod map;
mod parse;
mod series;

pub use map::PolyMap;
pub use series::{substitute_arc, SeriesOrder, TruncatedSeries, DEFAULT_PRECISION};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered list of variable names shared between polynomials of one ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarList(Arc<[String]>);

impl VarList {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarList(names.into()))
    }

    /// Like [`VarList::new`] for literal lists known to be distinct.
    pub fn of(names: &[&str]) -> Self {
        Self::new(names.iter().copied()).expect("duplicate variable in literal list")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &VarList) -> Result<VarList> {
        VarList::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// Variables of `self` not listed in `drop`, in their original order.
    pub fn without(&self, drop: &[String]) -> VarList {
        VarList(
            self.0
                .iter()
                .filter(|n| !drop.contains(n))
                .cloned()
                .collect::<Vec<_>>()
                .into(),
        )
    }

    /// A name derived from `base` that does not occur in this list.
    pub fn fresh(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{base}{i}"))
            .find(|n| !self.contains(n))
            .unwrap()
    }

    /// `count` fresh names `base0, base1, ...` avoiding this list.
    pub fn fresh_block(&self, base: &str, count: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(count);
        let mut i = 0usize;
        while out.len() < count {
            let cand = format!("{base}{i}");
            if !self.contains(&cand) {
                out.push(cand);
            }
            i += 1;
        }
        out
    }
}

impl fmt::Display for VarList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(", "))
    }
}

/// Exponent vector, one entry per variable of the ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Degree-reverse-lexicographic comparison, used for printing.
pub(crate) fn grevlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        std::cmp::Ordering::Equal
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: VarList,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &VarList) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarList, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarList) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var_at(vars: &VarList, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms
            .insert(Monomial::var(vars.len(), i), Rational::one());
        p
    }

    pub fn var(vars: &VarList, name: &str) -> Result<Self> {
        Ok(Self::var_at(vars, vars.require(name)?))
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(vars: &VarList, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, vars: &VarList) -> Result<Self> {
        parse::parse_polynomial(text, vars)
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// Degree in the variables `block` if every term has the same one.
    pub fn homogeneous_degree_in(&self, block: &[usize]) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: u32 = block.iter().map(|&i| m.0[i]).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            self.vars == other.vars,
            "polynomials over different rings: {} vs {}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c * rat(e as i64));
        }
        out
    }

    pub fn derivative_by(&self, name: &str) -> Result<Polynomial> {
        Ok(self.derivative(self.vars.require(name)?))
    }

    /// Value at a rational point (one coordinate per variable).
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Replaces variable `i` by a rational value; the ring is unchanged.
    pub fn substitute_value(&self, i: usize, value: &Rational) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut nm = m.clone();
            nm.0[i] = 0;
            let factor = if e == 0 {
                Rational::one()
            } else {
                num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(nm, c * factor);
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`; every image lives in `target`.
    pub fn compose(&self, images: &[Polynomial], target: &VarList) -> Polynomial {
        assert_eq!(images.len(), self.vars.len());
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            for (k, v) in t.terms {
                out.add_term(k, v);
            }
        }
        out
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &VarList) -> Result<Polynomial> {
        if *target == self.vars {
            return Ok(self.clone());
        }
        let used = self.support();
        let mut idx = vec![usize::MAX; self.vars.len()];
        for i in used {
            idx[i] = target.require(&self.vars.names()[i])?;
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[idx[i]] = x;
                }
            }
            (Monomial(e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    pub fn is_monic_under(&self, lead: &Monomial) -> bool {
        self.terms.get(lead).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        self.check_ring(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let lead = |p: &Polynomial| {
            p.terms
                .iter()
                .max_by(|a, b| grevlex_cmp(&a.0 .0, &b.0 .0))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let (dm, dc) = lead(divisor).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((m, c)) = lead(&rem) {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = c / &dc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Terms in descending degree-reverse-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(&b.0 .0, &a.0 .0));
        v
    }

    /// Multiplies by the lcm of denominators and divides by the content, so
    /// the result has coprime integer coefficients and a positive leading
    /// coefficient under degrevlex.
    pub fn primitive(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den / c.denom());
            num = num.gcd(&v);
        }
        let sorted = self.sorted_terms();
        let sign = if sorted[0].1.is_negative() { -1 } else { 1 };
        let factor = Rational::new(den * sign, num);
        self.scale(&factor)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.names()[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vw() -> VarList {
        VarList::of(&["v", "w"])
    }

    #[test]
    fn parse_reads_terms_directly() {
        let p = Polynomial::parse("w^2 - v^3", &vw()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&Monomial(vec![0, 2])), rat(1));
        assert_eq!(p.coefficient(&Monomial(vec![3, 0])), rat(-1));
    }

    #[test]
    fn zero_has_no_terms() {
        let p = Polynomial::parse("0", &vw()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn binomial_identity() {
        let p = Polynomial::parse("(v+w)^2 - v^2 - 2*v*w", &vw()).unwrap();
        assert_eq!(p, Polynomial::parse("w^2", &vw()).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let vars = VarList::of(&["x", "y", "z"]);
        for s in [
            "-3/4*x^2*y + z - 7",
            "x",
            "-1",
            "1/2",
            "x*y*z - 2*x^3 + 5/3",
        ] {
            let p = Polynomial::parse(s, &vars).unwrap();
            let q = Polynomial::parse(&p.to_string(), &vars).unwrap();
            assert_eq!(p, q, "{s}");
            assert_eq!(q.to_string(), p.to_string());
        }
    }

    #[test]
    fn exact_division() {
        let vars = VarList::of(&["x", "y"]);
        let a = Polynomial::parse("x^2 - y^2", &vars).unwrap();
        let b = Polynomial::parse("x + y", &vars).unwrap();
        assert_eq!(a.div_exact(&b).unwrap().to_string(), "x - y");
        let c = Polynomial::parse("x + 1", &vars).unwrap();
        assert!(a.div_exact(&c).is_none());
    }

    #[test]
    fn compose_and_embed() {
        let vars = VarList::of(&["x", "y"]);
        let t = VarList::of(&["t"]);
        let p = Polynomial::parse("y^2 - x^3", &vars).unwrap();
        let images = [
            Polynomial::parse("t^2", &t).unwrap(),
            Polynomial::parse("t^3", &t).unwrap(),
        ];
        assert!(p.compose(&images, &t).is_zero());
        let big = VarList::of(&["a", "y", "x"]);
        let e = p.embed(&big).unwrap();
        assert_eq!(e.to_string(), "-x^3 + y^2");
        assert!(e.embed(&VarList::of(&["x"])).is_err());
    }

    #[test]
    fn primitive_normalizes_content() {
        let vars = VarList::of(&["x", "y"]);
        let p = Polynomial::parse("-2/3*x^2 + 4/9*y", &vars).unwrap();
        assert_eq!(p.primitive().to_string(), "3*x^2 - 2*y");
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let vars = VarList::of(&["s", "s0", "T0"]);
        assert_eq!(vars.fresh("s"), "s1");
        assert_eq!(vars.fresh_block("T", 2), vec!["T1", "T2"]);
        assert!(VarList::new(["a", "a"]).is_err());
    }
}
