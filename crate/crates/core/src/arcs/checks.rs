//! The Whitney fiber condition, the arc form of `A_f`, the Trotman family
//! and the pipeline combining them with the conormal fiber dimension.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{
    monomial_arcs, strict_dependence, Arc, ArcOptions, DependenceStatus, DependenceVerdict,
};
use crate::conormal::{af_exact_from, relative_conormal, AfExactReport, SpaceWithFunction};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg::left_kernel_vector;
use crate::poly::{ratio, PolyMap, Polynomial, Rational, SeriesOrder, TruncatedSeries, VarList};
use crate::rees::PresentedModule;

/// `X_0 = X ∩ {y = 0}` in the fiber coordinates.
pub fn special_fiber(s: &SpaceWithFunction) -> (VarList, Vec<Polynomial>) {
    let z = VarList::of(
        &s.fiber_names()
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    let g0 = s
        .map()
        .components()
        .iter()
        .map(|g| at_y_zero(s, g, &z))
        .filter(|p| !p.is_zero())
        .collect();
    (z, g0)
}

fn at_y_zero(s: &SpaceWithFunction, p: &Polynomial, z: &VarList) -> Polynomial {
    let k = s.param_count();
    let images: Vec<Polynomial> = (0..s.vars().len())
        .map(|i| {
            if i < k {
                Polynomial::zero(z)
            } else {
                Polynomial::var_at(z, i - k)
            }
        })
        .collect();
    p.compose(&images, z)
}

/// Monomial arcs on `X_0`.
pub fn fiber_arcs(s: &SpaceWithFunction, opts: &ArcOptions) -> Result<Vec<Arc>> {
    let (z, g0) = special_fiber(s);
    monomial_arcs(&z, &g0, opts.degree_bound, opts.precision)
}

/// Monomial arcs on `X`.
pub fn space_arcs(s: &SpaceWithFunction, opts: &ArcOptions) -> Result<Vec<Arc>> {
    monomial_arcs(
        s.vars(),
        s.map().components(),
        opts.degree_bound,
        opts.precision,
    )
}

/// `∂G/∂y_j ∈ JM(X_0)†` along the given arcs on `X_0`, one verdict per `j`.
/// `JM(X_0)` is spanned by the `z`-partials of `G|_{y=0}`.
pub fn whitney_fiber_check(
    s: &SpaceWithFunction,
    arcs: &[Arc],
    opts: &ArcOptions,
) -> Result<Vec<DependenceVerdict>> {
    let (z, g0) = special_fiber(s);
    let restricted: Vec<Polynomial> = s
        .map()
        .components()
        .iter()
        .map(|g| at_y_zero(s, g, &z))
        .collect();
    let names: Vec<&str> = z.names().iter().map(String::as_str).collect();
    let jm = PresentedModule::jacobian_module(&PolyMap::new(z.clone(), restricted)?, &names)?;
    (0..s.param_count())
        .map(|j| {
            let u: Vec<Polynomial> = s
                .map()
                .components()
                .iter()
                .map(|g| at_y_zero(s, &g.derivative(j), &z))
                .collect();
            strict_dependence(&u, &jm, arcs, &g0, opts)
        })
        .collect()
}

fn h_map(s: &SpaceWithFunction) -> Vec<Polynomial> {
    std::iter::once(s.function().clone())
        .chain(s.map().components().iter().cloned())
        .collect()
}

/// `∂H/∂y_j ∈ JM(H)†` along the given arcs on `X`, with `H = (f, G)` and
/// `JM(H)` spanned by the partials in every variable.
pub fn af_arcs(
    s: &SpaceWithFunction,
    arcs: &[Arc],
    opts: &ArcOptions,
) -> Result<Vec<DependenceVerdict>> {
    let h = h_map(s);
    let names: Vec<&str> = s.vars().names().iter().map(String::as_str).collect();
    let jm = PresentedModule::jacobian_module(&PolyMap::new(s.vars().clone(), h.clone())?, &names)?;
    (0..s.param_count())
        .map(|j| {
            let u: Vec<Polynomial> = h.iter().map(|p| p.derivative(j)).collect();
            strict_dependence(&u, &jm, arcs, s.map().components(), opts)
        })
        .collect()
}

/// Basis of the limit at `t = 0` of the row space of a matrix of series.
fn limit_row_space(rows: &[Vec<TruncatedSeries>]) -> Option<Vec<Vec<Rational>>> {
    let mut rows: Vec<Vec<TruncatedSeries>> = rows.to_vec();
    let cap = rows
        .iter()
        .flatten()
        .map(TruncatedSeries::precision)
        .max()
        .unwrap_or(0)
        * (rows.len() + 1);
    for _ in 0..=cap {
        let mut normalized = Vec::with_capacity(rows.len());
        for row in &rows {
            let exact = row.iter().filter_map(|e| e.order().exact()).min();
            let Some(v) = exact else { continue };
            if row
                .iter()
                .any(|e| matches!(e.order(), SeriesOrder::AtLeast(n) if n <= v))
            {
                return None;
            }
            normalized.push(
                row.iter()
                    .map(|e| e.shift_down(v))
                    .collect::<Option<Vec<_>>>()?,
            );
        }
        rows = normalized;
        let leads: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|e| e.coeff(0).clone()).collect())
            .collect();
        let Some(lambda) = left_kernel_vector(&leads) else {
            return Some(leads);
        };
        let i = lambda.iter().position(|c| !c.is_zero())?;
        let width = rows[i].len();
        let mut combo: Vec<TruncatedSeries> = (0..width)
            .map(|c| TruncatedSeries::zero(rows[i][c].precision()))
            .collect();
        for (l, row) in lambda.iter().zip(&rows) {
            if l.is_zero() {
                continue;
            }
            for (acc, e) in combo.iter_mut().zip(row) {
                *acc = acc.add(&e.scale(l));
            }
        }
        rows[i] = combo;
    }
    None
}

/// A covector in the limit of the conormal spaces to the fibers of `f`
/// along `arc` whose `y`-part is nonzero, scaled to lead with 1. `None`
/// when every limit covector kills `T Y` or precision runs out.
pub fn limit_covector(s: &SpaceWithFunction, arc: &Arc) -> Result<Option<Vec<Rational>>> {
    let h = h_map(s);
    let m = s.vars().len();
    let rows = h
        .iter()
        .map(|p| {
            (0..m)
                .map(|i| arc.pullback(&p.derivative(i)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let Some(basis) = limit_row_space(&rows) else {
        return Ok(None);
    };
    let k = s.param_count();
    let Some(v) = basis
        .into_iter()
        .find(|b| b[..k].iter().any(|c| !c.is_zero()))
    else {
        return Ok(None);
    };
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap_or_else(Rational::one);
    Ok(Some(v.iter().map(|c| c / &lead).collect()))
}

/// Whether a covector lies on `V(fiber)`.
pub fn covector_in_fiber(fiber: &Ideal, covector: &[Rational]) -> bool {
    fiber
        .generators()
        .iter()
        .all(|g| g.evaluate(covector).is_zero())
}

/// Closed form for the family `w^a - y^b v^c - v^d`: holds when `b > 1`,
/// otherwise iff `c > min(d - 1, d - d/a)`.
pub fn trotman_criterion(a: u32, b: u32, c: u32, d: u32) -> Result<bool> {
    if a < 2 || d < 2 || b == 0 || c == 0 {
        return Err(Error::InvalidInput(format!(
            "need a, d >= 2 and b, c >= 1; got ({a}, {b}, {c}, {d})"
        )));
    }
    if b > 1 {
        return Ok(true);
    }
    let d_r = Rational::from_integer(d.into());
    let bound = (d_r.clone() - Rational::one()).min(d_r - ratio(d as i64, a as i64));
    Ok(Rational::from_integer(c.into()) > bound)
}

/// `X = V(w^a - y^b v^c - v^d)` over the `y`-line, with `f = v`.
pub fn trotman_family(a: u32, b: u32, c: u32, d: u32) -> Result<SpaceWithFunction> {
    let g = format!("w^{a} - y^{b}*v^{c} - v^{d}");
    SpaceWithFunction::parse(&["y"], &["v", "w"], &[g.as_str()], "v", 1)
}

/// `(v, w) = (t^{a/g}, t^{d/g})` with `g = gcd(a, d)`, a branch of the
/// normalization of `w^a = v^d`.
pub fn normalization_arc(a: u32, d: u32, precision: usize) -> Result<Arc> {
    let g = a.gcd(&d);
    Arc::monomial(
        &VarList::of(&["v", "w"]),
        &[1, 1],
        &[a / g, d / g],
        precision,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineConclusion {
    /// Both hypotheses hold; `A_f` follows up to the arcs tried.
    Certified,
    /// `dim C(X,f)_0 >= n`.
    DimensionHypothesisFails,
    /// Some arc on `X_0` violates the Whitney fiber condition.
    WhitneyFails,
    Inconclusive,
}

impl fmt::Display for PipelineConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PipelineConclusion::Certified => "A_f certified modulo arc bound",
            PipelineConclusion::DimensionHypothesisFails => {
                "hypothesis failure: dim C(X,f)_0 >= n, no conclusion"
            }
            PipelineConclusion::WhitneyFails => {
                "hypothesis failure: Whitney fiber condition fails, no conclusion"
            }
            PipelineConclusion::Inconclusive => {
                "inconclusive: Whitney fiber check ran out of precision"
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    /// Projective dimension of `C(X,f)_0`.
    pub fiber_dim: i64,
    pub n: usize,
    pub dimension_ok: bool,
    /// `df(0) = 0`, so the join term is absent.
    pub df_vanishes: bool,
    pub whitney: Vec<DependenceVerdict>,
    pub conclusion: PipelineConclusion,
    /// The exact test, unless it ran out of budget.
    pub af_exact: Option<AfExactReport>,
    /// For a certified conclusion, whether the exact test agrees.
    pub consistent: Option<bool>,
}

/// Dimension hypothesis, Whitney fiber condition along `arcs` on `X_0`,
/// and the resulting `A_f` conclusion cross-checked against the exact test.
pub fn main_theorem_pipeline(
    s: &SpaceWithFunction,
    arcs: &[Arc],
    opts: &ArcOptions,
) -> Result<PipelineReport> {
    let rel = relative_conormal(s)?;
    let fiber_dim = rel.projective_fiber_dimension(&s.origin())?;
    let n = s.fiber_count();
    let dimension_ok = fiber_dim < n as i64;
    let whitney = whitney_fiber_check(s, arcs, opts)?;
    let worst = whitney
        .iter()
        .map(|v| v.status)
        .max()
        .unwrap_or(DependenceStatus::Holds);
    let conclusion = if !dimension_ok {
        PipelineConclusion::DimensionHypothesisFails
    } else {
        match worst {
            DependenceStatus::Holds => PipelineConclusion::Certified,
            DependenceStatus::Fails => PipelineConclusion::WhitneyFails,
            DependenceStatus::Inconclusive => PipelineConclusion::Inconclusive,
        }
    };
    let af_exact = match af_exact_from(s, &rel) {
        Ok(r) => Some(r),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let consistent = match (&conclusion, &af_exact) {
        (PipelineConclusion::Certified, Some(r)) => Some(r.holds()),
        _ => None,
    };
    Ok(PipelineReport {
        fiber_dim,
        n,
        dimension_ok,
        df_vanishes: s.df_at_origin().iter().all(Zero::is_zero),
        whitney,
        conclusion,
        af_exact,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trotman_closed_form_examples() {
        assert!(trotman_criterion(2, 2, 1, 3).unwrap());
        assert!(!trotman_criterion(2, 1, 1, 2).unwrap());
        assert!(trotman_criterion(3, 1, 3, 4).unwrap());
        assert!(!trotman_criterion(3, 1, 2, 4).unwrap());
        assert!(trotman_criterion(1, 1, 1, 2).is_err());
    }

    #[test]
    fn limit_of_cusp_tangents_is_dy() {
        // (x, y) = (t^2, t^3) on y^2 = x^3: the gradient (-3t^4, 2t^3)
        // tends to the direction (0, 1).
        let row = vec![
            TruncatedSeries::monomial(ratio(-3, 1), 4, 16),
            TruncatedSeries::monomial(ratio(2, 1), 3, 16),
        ];
        let basis = limit_row_space(&[row]).unwrap();
        assert_eq!(basis, vec![vec![Rational::zero(), ratio(2, 1)]]);
    }

    #[test]
    fn limit_row_space_resolves_cancellation() {
        // rows (1, t) and (1, 2t) span the same line at t = 0 but the plane
        // for t ≠ 0
        let one = TruncatedSeries::one(8);
        let r1 = vec![one.clone(), TruncatedSeries::monomial(ratio(1, 1), 1, 8)];
        let r2 = vec![one, TruncatedSeries::monomial(ratio(2, 1), 1, 8)];
        let basis = limit_row_space(&[r1, r2]).unwrap();
        assert_eq!(crate::linalg::rank(&basis), 2);
    }
}
