//! Strict dependence `u ∈ M†` tested along finitely many arcs.

use std::fmt;

use super::{Arc, ArcOptions};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, SeriesOrder, TruncatedSeries};
use crate::rees::PresentedModule;

/// Ordered so that combining verdicts takes the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DependenceStatus {
    /// `φ*u ∈ t·φ*(M)` on every arc tried.
    Holds,
    /// Some arc ran out of precision.
    Inconclusive,
    /// Some arc is a genuine counterexample.
    Fails,
}

impl DependenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DependenceStatus::Holds => "holds_up_to_bound",
            DependenceStatus::Inconclusive => "inconclusive",
            DependenceStatus::Fails => "fails",
        }
    }
}

impl fmt::Display for DependenceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Order data for one arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCertificate {
    /// Position of the arc in the list it was tested from.
    pub arc: usize,
    pub status: DependenceStatus,
    /// Orders of the pivots of `φ*(M)`, in elimination order.
    pub pivot_orders: Vec<usize>,
    /// Orders of the entries of `φ*u` before elimination.
    pub element_orders: Vec<SeriesOrder>,
    /// Known coefficients of the residual after elimination.
    pub residual_precision: usize,
    /// Row at which `φ*u` escaped `t·φ*(M)`, for failures.
    pub failing_row: Option<usize>,
}

/// Aggregate over an arc set. Combining is commutative: fails dominates,
/// then inconclusive, then holds; the witness is the failing arc with the
/// smallest index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceVerdict {
    pub status: DependenceStatus,
    pub witness: Option<(usize, Arc)>,
    pub certificates: Vec<ArcCertificate>,
}

impl Default for DependenceVerdict {
    fn default() -> Self {
        DependenceVerdict {
            status: DependenceStatus::Holds,
            witness: None,
            certificates: Vec::new(),
        }
    }
}

impl DependenceVerdict {
    pub fn single(cert: ArcCertificate, arc: &Arc) -> Self {
        let witness = (cert.status == DependenceStatus::Fails).then(|| (cert.arc, arc.clone()));
        DependenceVerdict {
            status: cert.status,
            witness,
            certificates: vec![cert],
        }
    }

    pub fn combine(self, other: Self) -> Self {
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        let mut certificates = self.certificates;
        certificates.extend(other.certificates);
        certificates.sort_by_key(|c| c.arc);
        DependenceVerdict {
            status: self.status.max(other.status),
            witness,
            certificates,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == DependenceStatus::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == DependenceStatus::Fails
    }

    pub fn arcs_tested(&self) -> usize {
        self.certificates.len()
    }
}

/// Tests `φ*u ∈ t·φ*(M)` on each arc. Arcs must lie on `V(variety)`.
pub fn strict_dependence(
    u: &[Polynomial],
    m: &PresentedModule,
    arcs: &[Arc],
    variety: &[Polynomial],
    opts: &ArcOptions,
) -> Result<DependenceVerdict> {
    if u.len() != m.rank() {
        return Err(Error::InvalidInput(format!(
            "element has {} entries, module has rank {}",
            u.len(),
            m.rank()
        )));
    }
    let mut verdict = DependenceVerdict::default();
    for (i, arc) in arcs.iter().enumerate() {
        if arc.vars() != m.vars() {
            return Err(Error::InvalidInput(format!(
                "arc is over {}, module over {}",
                arc.vars(),
                m.vars()
            )));
        }
        arc.require_on(variety)?;
        let cert = arc_certificate(i, u, m, arc, opts)?;
        verdict = verdict.combine(DependenceVerdict::single(cert, arc));
    }
    Ok(verdict)
}

fn arc_certificate(
    index: usize,
    u: &[Polynomial],
    m: &PresentedModule,
    arc: &Arc,
    opts: &ArcOptions,
) -> Result<ArcCertificate> {
    let us = u
        .iter()
        .map(|p| arc.pullback(p))
        .collect::<Result<Vec<_>>>()?;
    let cols = m
        .columns()
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| arc.pullback(p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let u_exactly_zero = match arc.exact_images() {
        Some(_) => u.iter().all(|p| {
            arc.pullback_exact(p)
                .ok()
                .flatten()
                .is_some_and(|q| q.is_zero())
        }),
        None => false,
    };
    if u_exactly_zero {
        return Ok(ArcCertificate {
            arc: index,
            status: DependenceStatus::Holds,
            pivot_orders: Vec::new(),
            element_orders: us.iter().map(TruncatedSeries::order).collect(),
            residual_precision: arc.precision(),
            failing_row: None,
        });
    }
    let mut cert = strict_dependence_along(&us, &cols, opts.margin)?;
    cert.arc = index;
    Ok(cert)
}

/// Valuation-pivot column elimination deciding `u ∈ t·span(cols)` over
/// truncated series. Columns are vectors of the same length as `u`.
pub fn strict_dependence_along(
    u: &[TruncatedSeries],
    cols: &[Vec<TruncatedSeries>],
    margin: usize,
) -> Result<ArcCertificate> {
    let p = u.len();
    let element_orders: Vec<SeriesOrder> = u.iter().map(TruncatedSeries::order).collect();
    let mut u: Vec<TruncatedSeries> = u.to_vec();
    let mut cols: Vec<Vec<TruncatedSeries>> = cols.to_vec();
    let mut done = vec![false; p];
    let mut pivots: Vec<usize> = Vec::new();
    let cert = |status, pivots: Vec<usize>, u: &[TruncatedSeries], row| ArcCertificate {
        arc: 0,
        status,
        pivot_orders: pivots,
        element_orders: element_orders.clone(),
        residual_precision: u.iter().map(TruncatedSeries::precision).min().unwrap_or(0),
        failing_row: row,
    };
    loop {
        // smallest exact order among live entries, ties by row then column
        let mut best: Option<(usize, usize, usize)> = None;
        let mut unknown_floor = usize::MAX;
        for (ci, col) in cols.iter().enumerate() {
            for (r, e) in col.iter().enumerate() {
                if done[r] {
                    continue;
                }
                match e.order() {
                    SeriesOrder::Exact(v) => {
                        if best.is_none_or(|b| (v, r, ci) < b) {
                            best = Some((v, r, ci));
                        }
                    }
                    SeriesOrder::AtLeast(n) => unknown_floor = unknown_floor.min(n),
                }
            }
        }
        let Some((v, r, ci)) = best else { break };
        if unknown_floor <= v {
            return Ok(cert(DependenceStatus::Inconclusive, pivots, &u, None));
        }
        let pivot = cols.remove(ci);
        match u[r].order() {
            SeriesOrder::Exact(o) if o <= v => {
                pivots.push(v);
                return Ok(cert(DependenceStatus::Fails, pivots, &u, Some(r)));
            }
            SeriesOrder::AtLeast(n) if n <= v => {
                pivots.push(v);
                return Ok(cert(DependenceStatus::Inconclusive, pivots, &u, None));
            }
            _ => {}
        }
        let Some(q) = u[r].div(&pivot[r]) else {
            return Ok(cert(DependenceStatus::Inconclusive, pivots, &u, None));
        };
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = ui.sub(&q.mul(&pivot[i]));
        }
        for col in cols.iter_mut() {
            let Some(qc) = col[r].div(&pivot[r]) else {
                return Ok(cert(DependenceStatus::Inconclusive, pivots, &u, None));
            };
            for (i, e) in col.iter_mut().enumerate() {
                *e = e.sub(&qc.mul(&pivot[i]));
            }
        }
        done[r] = true;
        pivots.push(v);
    }
    // Every live column entry is zero to its precision; a surviving term of
    // u below all of them can never be matched.
    for (r, ur) in u.iter().enumerate() {
        if let SeriesOrder::Exact(o) = ur.order() {
            let reach = cols
                .iter()
                .map(|c| c[r].precision() + 1)
                .min()
                .unwrap_or(usize::MAX);
            let status = if done[r] || o >= reach {
                DependenceStatus::Inconclusive
            } else {
                DependenceStatus::Fails
            };
            return Ok(cert(
                status,
                pivots,
                &u,
                (status == DependenceStatus::Fails).then_some(r),
            ));
        }
    }
    if pivots.is_empty() && p > 0 {
        return Err(Error::PrecisionExhausted);
    }
    let residual = u.iter().map(TruncatedSeries::precision).min().unwrap_or(0);
    let largest = pivots.iter().copied().max().unwrap_or(0);
    let status = if residual >= largest + margin {
        DependenceStatus::Holds
    } else {
        DependenceStatus::Inconclusive
    };
    Ok(cert(status, pivots, &u, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarList;

    fn line() -> (VarList, PresentedModule, Vec<Arc>) {
        let v = VarList::of(&["x"]);
        let m = PresentedModule::parse(&v, &[vec!["x"]]).unwrap();
        let arcs = vec![Arc::parse(&v, "x = t", 32).unwrap()];
        (v, m, arcs)
    }

    #[test]
    fn square_depends_strictly_on_x() {
        let (v, m, arcs) = line();
        let u = Polynomial::parse("x^2", &v).unwrap();
        let r = strict_dependence(&[u], &m, &arcs, &[], &ArcOptions::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.certificates[0].pivot_orders, vec![1]);
    }

    #[test]
    fn x_is_not_strictly_dependent_on_itself() {
        let (v, m, arcs) = line();
        let u = Polynomial::parse("x", &v).unwrap();
        let r = strict_dependence(&[u], &m, &arcs, &[], &ArcOptions::default()).unwrap();
        assert!(r.fails());
        assert_eq!(r.witness.as_ref().unwrap().1.to_string(), "x = t");
        assert_eq!(r.certificates[0].failing_row, Some(0));
    }

    #[test]
    fn arcs_off_the_variety_are_rejected() {
        let (v, m, _) = line();
        let u = Polynomial::parse("x", &v).unwrap();
        let arcs = vec![Arc::parse(&v, "x = t", 8).unwrap()];
        let eq = Polynomial::parse("x", &v).unwrap();
        let e = strict_dependence(&[u], &m, &arcs, &[eq], &ArcOptions::default()).unwrap_err();
        assert!(matches!(e, Error::ArcNotOnVariety(_)));
    }

    #[test]
    fn zero_module_is_exhausted() {
        let v = VarList::of(&["x"]);
        let m = PresentedModule::parse(&v, &[vec!["0"]]).unwrap();
        let s = TruncatedSeries::zero(8);
        let e =
            strict_dependence_along(std::slice::from_ref(&s), &[vec![s.clone()]], 4).unwrap_err();
        assert_eq!(e, Error::PrecisionExhausted);
        // but a visible term of u is a definite failure
        let u = Polynomial::parse("x^3", &v).unwrap();
        let arcs = vec![Arc::parse(&v, "x = t", 8).unwrap()];
        let r = strict_dependence(&[u], &m, &arcs, &[], &ArcOptions::default()).unwrap();
        assert!(r.fails());
    }

    #[test]
    fn two_rows_need_both_pivots() {
        // M spanned by (x, 0) and (y, x^2) along (t, t): u = (0, x^3) lies in
        // t·φ*M, u = (0, x^2) does not.
        let v = VarList::of(&["x", "y"]);
        let m = PresentedModule::parse(&v, &[vec!["x", "0"], vec!["y", "x^2"]]).unwrap();
        let arcs = vec![Arc::parse(&v, "x = t; y = t", 32).unwrap()];
        let opts = ArcOptions::default();
        let u = |a: &str, b: &str| {
            vec![
                Polynomial::parse(a, &v).unwrap(),
                Polynomial::parse(b, &v).unwrap(),
            ]
        };
        assert!(strict_dependence(&u("0", "x^3"), &m, &arcs, &[], &opts)
            .unwrap()
            .holds());
        assert!(strict_dependence(&u("0", "x^2"), &m, &arcs, &[], &opts)
            .unwrap()
            .fails());
        assert!(strict_dependence(&u("x*y", "0"), &m, &arcs, &[], &opts)
            .unwrap()
            .holds());
    }

    #[test]
    fn combining_is_order_independent() {
        let v = VarList::of(&["x"]);
        let a = Arc::parse(&v, "x = t", 8).unwrap();
        let mk = |i, status| ArcCertificate {
            arc: i,
            status,
            pivot_orders: vec![],
            element_orders: vec![],
            residual_precision: 8,
            failing_row: None,
        };
        let xs = [
            DependenceVerdict::single(mk(0, DependenceStatus::Holds), &a),
            DependenceVerdict::single(mk(1, DependenceStatus::Fails), &a),
            DependenceVerdict::single(mk(2, DependenceStatus::Inconclusive), &a),
            DependenceVerdict::single(mk(3, DependenceStatus::Fails), &a),
        ];
        let fwd = xs
            .iter()
            .cloned()
            .fold(DependenceVerdict::default(), DependenceVerdict::combine);
        let rev = xs
            .iter()
            .rev()
            .cloned()
            .fold(DependenceVerdict::default(), DependenceVerdict::combine);
        assert_eq!(fwd, rev);
        assert_eq!(fwd.status, DependenceStatus::Fails);
        assert_eq!(fwd.witness.unwrap().0, 1);
    }
}
