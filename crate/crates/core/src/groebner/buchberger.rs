//! Buchberger's algorithm over Q with fraction-free integer reduction.
//!
//! Polynomials are converted to primitive integer form, reduced with
//! `a*f - b*m*g` steps and made primitive again, which keeps coefficient
//! growth far below plain rational arithmetic. Pairs are pruned with the
//! Gebauer-Moeller installation (product and chain criteria) and selected by
//! sugar degree, ties broken by the monomial order on the lcm.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, VarList};

pub(crate) const MAX_VARS: usize = 24;

/// Packed exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Exps {
    e: [u16; MAX_VARS],
    deg: u32,
}

impl Exps {
    fn from_slice(s: &[u32]) -> Result<Self> {
        if s.len() > MAX_VARS {
            return Err(Error::InvalidInput(format!(
                "rings with more than {MAX_VARS} variables are not supported"
            )));
        }
        let mut e = [0u16; MAX_VARS];
        let mut deg = 0u32;
        for (i, &x) in s.iter().enumerate() {
            e[i] = u16::try_from(x)
                .map_err(|_| Error::InvalidInput(format!("exponent {x} too large")))?;
            deg += x;
        }
        Ok(Exps { e, deg })
    }

    fn to_monomial(self, n: usize) -> Monomial {
        Monomial(self.e[..n].iter().map(|&x| x as u32).collect())
    }

    #[inline]
    fn mul(&self, o: &Exps) -> Exps {
        let mut e = [0u16; MAX_VARS];
        for (x, (a, b)) in e.iter_mut().zip(self.e.iter().zip(&o.e)) {
            *x = a + b;
        }
        Exps {
            e,
            deg: self.deg + o.deg,
        }
    }

    #[inline]
    fn divides(&self, o: &Exps) -> bool {
        self.deg <= o.deg && self.e.iter().zip(&o.e).all(|(a, b)| a <= b)
    }

    /// `o / self`.
    #[inline]
    fn quotient_of(&self, o: &Exps) -> Exps {
        let mut e = [0u16; MAX_VARS];
        for (x, (a, b)) in e.iter_mut().zip(o.e.iter().zip(&self.e)) {
            *x = a - b;
        }
        Exps {
            e,
            deg: o.deg - self.deg,
        }
    }

    fn lcm(&self, o: &Exps) -> Exps {
        let mut e = [0u16; MAX_VARS];
        let mut deg = 0;
        for (x, (a, b)) in e.iter_mut().zip(self.e.iter().zip(&o.e)) {
            *x = *a.max(b);
            deg += *x as u32;
        }
        Exps { e, deg }
    }

    fn coprime(&self, o: &Exps) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn exps(&self, n: usize) -> &[u16] {
        &self.e[..n]
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub order: MonomialOrder,
    pub n: usize,
}

impl Ctx {
    #[inline]
    fn cmp(&self, a: &Exps, b: &Exps) -> Ordering {
        if let MonomialOrder::DegRevLex = self.order {
            return a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..self.n).rev() {
                    if a.e[i] != b.e[i] {
                        return b.e[i].cmp(&a.e[i]);
                    }
                }
                Ordering::Equal
            });
        }
        self.order.cmp_slices(&a.e[..self.n], &b.e[..self.n])
    }
}

/// Integer polynomial with terms sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GPoly {
    pub terms: Vec<(Exps, BigInt)>,
}

impl GPoly {
    fn lm(&self) -> &Exps {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.deg == 0
    }

    /// Divides by the content; the leading coefficient becomes positive.
    /// Returns the divisor used (with sign).
    fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c = &*c / &g;
            }
        }
        g
    }

    pub fn from_poly(p: &Polynomial, ctx: &Ctx) -> Result<(GPoly, Rational)> {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let v = c.numer() * (&den / c.denom());
            terms.push((Exps::from_slice(m.exponents())?, v));
        }
        terms.sort_by(|a, b| ctx.cmp(&b.0, &a.0));
        let mut g = GPoly { terms };
        let content = g.make_primitive();
        // g = p * den / content
        Ok((g, Rational::new(den, content)))
    }

    pub fn to_monic_poly(&self, vars: &VarList, ctx: &Ctx) -> Polynomial {
        let lc = Rational::from_integer(self.lc().clone());
        Polynomial::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                (
                    e.to_monomial(ctx.n),
                    Rational::from_integer(c.clone()) / &lc,
                )
            }),
        )
    }

    pub fn to_poly_scaled(&self, vars: &VarList, ctx: &Ctx, scale: &Rational) -> Polynomial {
        Polynomial::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                (
                    e.to_monomial(ctx.n),
                    Rational::from_integer(c.clone()) * scale,
                )
            }),
        )
    }

    pub fn leading_exps(&self) -> Option<&Exps> {
        self.terms.first().map(|t| &t.0)
    }
}

/// `a*f - b*m*g` with `f`, `g` descending; exact cancellations are dropped.
fn axpy(
    f: &[(Exps, BigInt)],
    a: &BigInt,
    b: &BigInt,
    m: &Exps,
    g: &[(Exps, BigInt)],
    ctx: &Ctx,
) -> Vec<(Exps, BigInt)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let a_one = a.is_one();
    let (mut i, mut j) = (0, 0);
    while i < f.len() || j < g.len() {
        let take = if i == f.len() {
            Ordering::Less
        } else if j == g.len() {
            Ordering::Greater
        } else {
            let gm = m.mul(&g[j].0);
            ctx.cmp(&f[i].0, &gm)
        };
        match take {
            Ordering::Greater => {
                let c = if a_one { f[i].1.clone() } else { &f[i].1 * a };
                out.push((f[i].0, c));
                i += 1;
            }
            Ordering::Less => {
                out.push((m.mul(&g[j].0), -(&g[j].1 * b)));
                j += 1;
            }
            Ordering::Equal => {
                let fa = if a_one { f[i].1.clone() } else { &f[i].1 * a };
                let c = fa - &g[j].1 * b;
                if !c.is_zero() {
                    out.push((f[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Step budget shared by one Groebner computation.
#[derive(Debug)]
pub(crate) struct Budget {
    pub used: u64,
    pub max: u64,
}

impl Budget {
    pub fn new(max: u64) -> Self {
        Budget { used: 0, max }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.max {
            Err(Error::BudgetExceeded { steps: self.used })
        } else {
            Ok(())
        }
    }
}

/// Reduces `f` by `basis`. With `full`, every term is reduced, otherwise
/// only leading terms. Returns the remainder `r` and a rational `s` with
/// `r = s * (f mod basis)` in the sense of exact normal forms.
pub(crate) fn reduce(
    f: &GPoly,
    basis: &[&GPoly],
    full: bool,
    ctx: &Ctx,
    budget: &mut Budget,
) -> Result<(GPoly, Rational)> {
    let mut terms = f.terms.clone();
    let mut start = 0usize;
    let mut mult_num = BigInt::one();
    let mut mult_den = BigInt::one();
    let mut since_content = 0u32;
    while start < terms.len() {
        let lead = terms[start].0;
        let Some(g) = basis.iter().find(|g| g.lm().divides(&lead)) else {
            if !full {
                break;
            }
            start += 1;
            continue;
        };
        budget.tick()?;
        let m = g.lm().quotient_of(&lead);
        let lc = &terms[start].1;
        let gcd = lc.gcd(g.lc());
        let mut a = g.lc() / &gcd;
        let mut b = lc / &gcd;
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        let mut next = Vec::with_capacity(terms.len() + g.terms.len());
        if a.is_one() {
            next.extend(terms[..start].iter().cloned());
        } else {
            next.extend(terms[..start].iter().map(|(e, c)| (*e, c * &a)));
            mult_num *= &a;
        }
        // Leading terms cancel by construction; skip them.
        let tail = axpy(&terms[start + 1..], &a, &b, &m, &g.terms[1..], ctx);
        next.extend(tail);
        terms = next;
        since_content += 1;
        if since_content >= 8 {
            since_content = 0;
            let mut tmp = GPoly { terms };
            let c = tmp.make_primitive();
            mult_den *= c;
            terms = tmp.terms;
        }
    }
    let mut out = GPoly { terms };
    let c = out.make_primitive();
    mult_den *= c;
    Ok((out, Rational::new(mult_num, mult_den)))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
    sugar: u32,
}

struct Engine<'a> {
    ctx: &'a Ctx,
    polys: Vec<GPoly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'a> Engine<'a> {
    fn active_basis(&self) -> Vec<&GPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Exps) -> u32 {
        let si = self.sugar[i] + lcm.deg - self.polys[i].lm().deg;
        let sj = self.sugar[j] + lcm.deg - self.polys[j].lm().deg;
        si.max(sj)
    }

    /// Gebauer-Moeller installation of the new element `h`.
    fn update(&mut self, h: usize) {
        let hlm = *self.polys[h].lm();
        let mut c: Vec<(usize, Exps)> = (0..self.polys.len())
            .filter(|&g| g != h && self.active[g])
            .map(|g| (g, hlm.lcm(self.polys[g].lm())))
            .collect();
        let mut d: Vec<(usize, Exps)> = Vec::new();
        while let Some((g1, l1)) = c.pop() {
            let coprime = hlm.coprime(self.polys[g1].lm());
            if coprime
                || (!c.iter().any(|(_, l2)| l2.divides(&l1))
                    && !d.iter().any(|(_, l2)| l2.divides(&l1)))
            {
                d.push((g1, l1));
            }
        }
        let new_pairs: Vec<Pair> = d
            .into_iter()
            .filter(|(g, _)| !hlm.coprime(self.polys[*g].lm()))
            .map(|(g, l)| Pair {
                i: g,
                j: h,
                lcm: l,
                sugar: self.pair_sugar(g, h, &l),
            })
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let l1 = hlm.lcm(polys[p.i].lm());
            let l2 = hlm.lcm(polys[p.j].lm());
            !(hlm.divides(&p.lcm) && l1 != p.lcm && l2 != p.lcm)
        });
        self.pairs.extend(new_pairs);
        for g in 0..self.polys.len() {
            if g != h && self.active[g] && hlm.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
        self.active[h] = true;
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let a = &self.pairs[k];
            let b = &self.pairs[best];
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| self.ctx.cmp(&a.lcm, &b.lcm));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> GPoly {
        let f = &self.polys[p.i];
        let g = &self.polys[p.j];
        let mf = f.lm().quotient_of(&p.lcm);
        let mg = g.lm().quotient_of(&p.lcm);
        let gcd = f.lc().gcd(g.lc());
        let a = g.lc() / &gcd;
        let b = f.lc() / &gcd;
        // a*mf*f - b*mg*g
        let fm: Vec<(Exps, BigInt)> = f.terms[1..]
            .iter()
            .map(|(e, c)| (mf.mul(e), c.clone()))
            .collect();
        GPoly {
            terms: axpy(&fm, &a, &b, &mg, &g.terms[1..], self.ctx),
        }
    }

    fn insert(&mut self, mut h: GPoly, sugar: u32) {
        h.make_primitive();
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(false);
        let idx = self.polys.len() - 1;
        self.update(idx);
    }
}

/// Reduced Groebner basis (as primitive integer polynomials, sorted by
/// ascending leading monomial).
pub(crate) fn groebner(input: &[GPoly], ctx: &Ctx, budget: &mut Budget) -> Result<Vec<GPoly>> {
    let mut eng = Engine {
        ctx,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut sorted: Vec<&GPoly> = input.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by(|a, b| ctx.cmp(a.lm(), b.lm()));
    for f in sorted {
        let (h, _) = reduce(f, &eng.active_basis(), true, ctx, budget)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![unit()]);
        }
        let s = h.terms.iter().map(|t| t.0.deg).max().unwrap_or(0);
        eng.insert(h, s);
    }
    while let Some(p) = eng.select() {
        let s = eng.spoly(&p);
        if s.is_zero() {
            continue;
        }
        let (h, _) = reduce(&s, &eng.active_basis(), true, ctx, budget)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![unit()]);
        }
        eng.insert(h, p.sugar);
    }
    // The active set is minimal; interreduce tails.
    let minimal: Vec<GPoly> = eng
        .polys
        .iter()
        .zip(&eng.active)
        .filter(|(_, a)| **a)
        .map(|(p, _)| p.clone())
        .collect();
    let mut out = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p)
            .collect();
        let (r, _) = reduce(g, &others, true, ctx, budget)?;
        out.push(r);
    }
    out.sort_by(|a, b| ctx.cmp(a.lm(), b.lm()));
    Ok(out)
}

fn unit() -> GPoly {
    GPoly {
        terms: vec![(
            Exps {
                e: [0; MAX_VARS],
                deg: 0,
            },
            BigInt::one(),
        )],
    }
}

/// Buchberger's criterion: every S-polynomial reduces to zero, and the basis
/// is reduced (monic leading terms not dividing any other term).
pub(crate) fn audit(basis: &[GPoly], ctx: &Ctx) -> Result<bool> {
    let refs: Vec<&GPoly> = basis.iter().collect();
    let mut budget = Budget::new(u64::MAX);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lcm = basis[i].lm().lcm(basis[j].lm());
            let eng_pair = Pair {
                i,
                j,
                lcm,
                sugar: 0,
            };
            let eng = Engine {
                ctx,
                polys: basis.to_vec(),
                sugar: vec![0; basis.len()],
                active: vec![true; basis.len()],
                pairs: Vec::new(),
            };
            let s = eng.spoly(&eng_pair);
            let (r, _) = reduce(&s, &refs, true, ctx, &mut budget)?;
            if !r.is_zero() {
                return Ok(false);
            }
        }
        for (j, other) in basis.iter().enumerate() {
            if j == i {
                continue;
            }
            if other.terms.iter().any(|(e, _)| basis[i].lm().divides(e)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
