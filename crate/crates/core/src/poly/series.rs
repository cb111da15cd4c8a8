//! Truncated univariate power series in `t` with exact coefficients.

use std::fmt;

use num_traits::{One, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Default truncation order for arcs and pullbacks.
pub const DEFAULT_PRECISION: usize = 64;

/// Order of vanishing of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrder {
    /// A nonzero coefficient was found at this power.
    Exact(usize),
    /// Every known coefficient vanishes; the true order is at least this.
    AtLeast(usize),
}

impl SeriesOrder {
    pub fn exact(self) -> Option<usize> {
        match self {
            SeriesOrder::Exact(v) => Some(v),
            SeriesOrder::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for SeriesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesOrder::Exact(v) => write!(f, "{v}"),
            SeriesOrder::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Coefficients of `t^0 .. t^(N-1)`; nothing is claimed at or beyond `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(precision: usize) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        TruncatedSeries {
            coeffs: vec![Rational::zero(); precision],
        }
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(Rational::one(), 0, precision)
    }

    /// `c * t^e`, truncated.
    pub fn monomial(c: Rational, e: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if e < precision {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>, precision: usize) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        coeffs.resize(precision, Rational::zero());
        TruncatedSeries { coeffs }
    }

    /// Reads a polynomial in a single variable as a series in that variable.
    pub fn from_univariate(p: &Polynomial, precision: usize) -> Result<Self> {
        if p.vars().len() > 1 && p.support().len() > 1 {
            return Err(Error::InvalidInput(format!("`{p}` is not univariate")));
        }
        let var = p.support().first().copied();
        let mut s = Self::zero(precision);
        for (m, c) in p.terms() {
            let e = var.map(|i| m.0[i] as usize).unwrap_or(0);
            if e < precision {
                s.coeffs[e] += c;
            }
        }
        Ok(s)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> SeriesOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => SeriesOrder::Exact(v),
            None => SeriesOrder::AtLeast(self.precision()),
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowest nonzero coefficient, if any.
    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision()).max(1);
        TruncatedSeries {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        TruncatedSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        TruncatedSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product; a factor of order `v` lets the other factor's unknown tail
    /// start `v` places later, so the result knows `min(N_a + v_b, N_b + v_a)`
    /// coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        let lo_a = self.coeffs.iter().position(|c| !c.is_zero());
        let lo_b = other.coeffs.iter().position(|c| !c.is_zero());
        let (pa, pb) = (self.precision(), other.precision());
        let n = (pa + lo_b.unwrap_or(pb)).min(pb + lo_a.unwrap_or(pa));
        let mut out = vec![Rational::zero(); n];
        if let (Some(la), Some(lb)) = (lo_a, lo_b) {
            for i in la..pa.min(n) {
                let a = &self.coeffs[i];
                if a.is_zero() {
                    continue;
                }
                for j in lb..pb.min(n - i) {
                    let b = &other.coeffs[j];
                    if !b.is_zero() {
                        out[i + j] += a * b;
                    }
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `t^k`; the known window grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// Division by `t^k`; requires the first `k` coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if k >= self.precision() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(TruncatedSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Quotient `self / other` in `Q[[t]]`. Requires an exact order `v` for
    /// `other` and at least `v` for `self`; the result knows `N - v`
    /// coefficients where `N` is the smaller input precision.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let v = other.order().exact()?;
        let n = self.precision().min(other.precision());
        if v >= n {
            return None;
        }
        let num = self.truncate(n).shift_down(v)?;
        let den = other.truncate(n).shift_down(v)?;
        let m = n - v;
        let inv0 = Rational::one() / &den.coeffs[0];
        let mut q = vec![Rational::zero(); m];
        for i in 0..m {
            let mut acc = num.coeffs[i].clone();
            for j in 1..=i {
                if !den.coeffs[j].is_zero() && !q[i - j].is_zero() {
                    acc -= &den.coeffs[j] * &q[i - j];
                }
            }
            q[i] = acc * &inv0;
        }
        Some(TruncatedSeries { coeffs: q })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let a = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{a}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

/// Pulls a polynomial back along an arc: `p(φ_1(t), ..., φ_m(t))`, truncated.
pub fn substitute_arc(p: &Polynomial, arc: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    if arc.len() != p.vars().len() {
        return Err(Error::InvalidInput(format!(
            "arc has {} components, ring has {} variables",
            arc.len(),
            p.vars().len()
        )));
    }
    let n = match arc.first() {
        Some(s) => s.precision(),
        None => {
            let c = p.constant_value().unwrap_or_else(Rational::zero);
            return Ok(TruncatedSeries::monomial(c, 0, DEFAULT_PRECISION));
        }
    };
    for s in arc {
        if s.precision() != n {
            return Err(Error::PrecisionMismatch {
                left: n,
                right: s.precision(),
            });
        }
    }
    let mut powers: Vec<Vec<TruncatedSeries>> = arc
        .iter()
        .map(|s| vec![TruncatedSeries::one(n), s.clone()])
        .collect();
    let mut total = TruncatedSeries::zero(n);
    for (m, c) in p.terms() {
        let mut term = TruncatedSeries::monomial(c.clone(), 0, n);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cache = &mut powers[i];
            while cache.len() <= e as usize {
                let next = cache[cache.len() - 1].mul(&cache[1]);
                cache.push(next);
            }
            term = term.mul(&cache[e as usize]);
        }
        total = total.add(&term);
    }
    Ok(total)
}
