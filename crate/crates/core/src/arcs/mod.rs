//! Arcs through the origin, strict dependence along arcs, and the arc-based
//! `A_f` and Whitney fiber tests.

mod checks;
mod dependence;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{substitute_arc, Polynomial, TruncatedSeries, VarList, DEFAULT_PRECISION};

pub use checks::{
    af_arcs, covector_in_fiber, fiber_arcs, limit_covector, main_theorem_pipeline,
    normalization_arc, space_arcs, special_fiber, trotman_criterion, trotman_family,
    whitney_fiber_check, PipelineConclusion, PipelineReport,
};
pub use dependence::{
    strict_dependence, strict_dependence_along, ArcCertificate, DependenceStatus, DependenceVerdict,
};

/// Safety margin between the residual precision and the largest pivot order.
pub const DEFAULT_MARGIN: usize = 4;
/// Largest exponent used for generated monomial arcs.
pub const DEFAULT_DEGREE_BOUND: u32 = 8;
/// Cap on the number of candidate monomial arcs enumerated.
pub const MAX_CANDIDATE_ARCS: usize = 2_000_000;

/// Precision, margin and arc-generation bound shared by the arc tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcOptions {
    pub precision: usize,
    pub margin: usize,
    pub degree_bound: u32,
}

impl Default for ArcOptions {
    fn default() -> Self {
        ArcOptions {
            precision: DEFAULT_PRECISION,
            margin: DEFAULT_MARGIN,
            degree_bound: DEFAULT_DEGREE_BOUND,
        }
    }
}

/// A germ `φ: (C,0) → (C^m,0)`, one truncated series per coordinate.
/// Arcs built from polynomials keep their exact images so pullbacks and
/// membership in a variety can be checked without truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    vars: VarList,
    coords: Vec<TruncatedSeries>,
    exact: Option<Vec<Polynomial>>,
}

/// The ring `Q[t]` the exact arc images live in.
pub fn arc_parameter() -> VarList {
    VarList::of(&["t"])
}

impl Arc {
    pub fn from_series(vars: &VarList, coords: Vec<TruncatedSeries>) -> Result<Self> {
        if coords.len() != vars.len() {
            return Err(Error::InvalidInput(format!(
                "arc has {} components, ring has {} variables",
                coords.len(),
                vars.len()
            )));
        }
        let n = coords
            .first()
            .map(TruncatedSeries::precision)
            .unwrap_or(DEFAULT_PRECISION);
        for (name, c) in vars.names().iter().zip(&coords) {
            if c.precision() != n {
                return Err(Error::PrecisionMismatch {
                    left: n,
                    right: c.precision(),
                });
            }
            if !c.coeff(0).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "arc component for `{name}` does not vanish at t = 0"
                )));
            }
        }
        Ok(Arc {
            vars: vars.clone(),
            coords,
            exact: None,
        })
    }

    /// An arc with polynomial components in `t` (see [`arc_parameter`]).
    pub fn from_polynomials(
        vars: &VarList,
        images: Vec<Polynomial>,
        precision: usize,
    ) -> Result<Self> {
        let t = arc_parameter();
        if images.iter().any(|p| *p.vars() != t) {
            return Err(Error::InvalidInput(
                "arc components must be polynomials in t".into(),
            ));
        }
        let coords = images
            .iter()
            .map(|p| TruncatedSeries::from_univariate(p, precision))
            .collect::<Result<Vec<_>>>()?;
        let mut arc = Self::from_series(vars, coords)?;
        arc.exact = Some(images);
        Ok(arc)
    }

    /// Parses `v = t^2; w = -t^3`. Unmentioned coordinates are zero.
    pub fn parse(vars: &VarList, text: &str, precision: usize) -> Result<Self> {
        let t = arc_parameter();
        let mut images: Vec<Option<Polynomial>> = vec![None; vars.len()];
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Parse {
                column: 0,
                message: format!("expected `var = series` in `{part}`"),
            })?;
            let i = vars.require(lhs.trim())?;
            if images[i].is_some() {
                return Err(Error::DuplicateVariable(lhs.trim().to_string()));
            }
            images[i] = Some(Polynomial::parse(rhs.trim(), &t)?);
        }
        let images = images
            .into_iter()
            .map(|p| p.unwrap_or_else(|| Polynomial::zero(&t)))
            .collect();
        Self::from_polynomials(vars, images, precision)
    }

    /// `x_i = c_i t^{e_i}`; a zero coefficient gives a zero coordinate.
    pub fn monomial(
        vars: &VarList,
        coeffs: &[i64],
        exps: &[u32],
        precision: usize,
    ) -> Result<Self> {
        let t = arc_parameter();
        let images = coeffs
            .iter()
            .zip(exps)
            .map(|(&c, &e)| Polynomial::var_at(&t, 0).pow(e).scale(&crate::poly::rat(c)))
            .collect();
        Self::from_polynomials(vars, images, precision)
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn precision(&self) -> usize {
        self.coords
            .first()
            .map(TruncatedSeries::precision)
            .unwrap_or(DEFAULT_PRECISION)
    }

    pub fn coords(&self) -> &[TruncatedSeries] {
        &self.coords
    }

    pub fn exact_images(&self) -> Option<&[Polynomial]> {
        self.exact.as_deref()
    }

    /// The same arc truncated at another order; only possible for exact arcs.
    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        match &self.exact {
            Some(images) => Self::from_polynomials(&self.vars, images.clone(), precision),
            None => Err(Error::InvalidInput(
                "only polynomial arcs can change precision".into(),
            )),
        }
    }

    /// `p ∘ φ` as a polynomial in `t`, when the arc is exact.
    pub fn pullback_exact(&self, p: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_ring(p)?;
        Ok(self
            .exact
            .as_ref()
            .map(|im| p.compose(im, &arc_parameter())))
    }

    /// `p ∘ φ` truncated at the arc's precision.
    pub fn pullback(&self, p: &Polynomial) -> Result<TruncatedSeries> {
        match self.pullback_exact(p)? {
            Some(q) => TruncatedSeries::from_univariate(&q, self.precision()),
            None => substitute_arc(p, &self.coords),
        }
    }

    /// Whether every polynomial vanishes along the arc: exactly for
    /// polynomial arcs, to precision otherwise.
    pub fn lies_on(&self, equations: &[Polynomial]) -> Result<bool> {
        for g in equations {
            let zero = match self.pullback_exact(g)? {
                Some(q) => q.is_zero(),
                None => substitute_arc(g, &self.coords)?.is_zero_to_precision(),
            };
            if !zero {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Errors unless the arc lies on `V(equations)`.
    pub fn require_on(&self, equations: &[Polynomial]) -> Result<()> {
        if self.lies_on(equations)? {
            Ok(())
        } else {
            Err(Error::ArcNotOnVariety(self.to_string()))
        }
    }

    fn check_ring(&self, p: &Polynomial) -> Result<()> {
        if *p.vars() != self.vars {
            return Err(Error::InvalidInput(format!(
                "polynomial over {} pulled back along an arc in {}",
                p.vars(),
                self.vars
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name) in self.vars.names().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match &self.exact {
                Some(im) => write!(f, "{name} = {}", im[i])?,
                None => write!(f, "{name} = {}", self.coords[i])?,
            }
        }
        Ok(())
    }
}

/// All arcs `x_i = ±t^{e_i}` or `x_i = 0` with `1 ≤ e_i ≤ bound` lying
/// exactly on `V(equations)`, skipping the zero arc and reparametrizations
/// `t ↦ t^k` of arcs already listed.
pub fn monomial_arcs(
    vars: &VarList,
    equations: &[Polynomial],
    bound: u32,
    precision: usize,
) -> Result<Vec<Arc>> {
    let m = vars.len();
    let choices = 2 * bound as usize + 1;
    let total = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(choices));
    if total.is_none_or(|t| t > MAX_CANDIDATE_ARCS) {
        return Err(Error::InvalidInput(format!(
            "{m} coordinates with degree bound {bound} give too many candidate arcs"
        )));
    }
    let mut out = Vec::new();
    // digit 0 is the zero coordinate; 2e-1 and 2e are +t^e and -t^e
    let mut digits = vec![0usize; m];
    loop {
        let mut i = 0;
        while i < m && digits[i] + 1 == choices {
            digits[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        digits[i] += 1;
        let exps: Vec<u32> = digits.iter().map(|&d| d.div_ceil(2) as u32).collect();
        let g = exps.iter().fold(0u32, |g, &e| g.gcd(&e));
        if g != 1 {
            continue;
        }
        let coeffs: Vec<i64> = digits
            .iter()
            .map(|&d| match d {
                0 => 0,
                d if d % 2 == 1 => 1,
                _ => -1,
            })
            .collect();
        let arc = Arc::monomial(vars, &coeffs, &exps, precision)?;
        if arc.lies_on(equations)? {
            out.push(arc);
        }
    }
    Ok(out)
}
