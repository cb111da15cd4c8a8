use std::cell::Cell;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;

use super::buchberger::{self, Budget, Ctx, GPoly};
use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, VarList};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

thread_local! {
    static STEPS: Cell<u64> = const { Cell::new(0) };
    static AMBIENT: Cell<Option<GbConfig>> = const { Cell::new(None) };
}

/// Reduction steps spent by Groebner computations on this thread.
pub fn reduction_steps() -> u64 {
    STEPS.with(Cell::get)
}

pub fn reset_reduction_steps() {
    STEPS.with(|s| s.set(0));
}

fn charge(budget: &Budget) {
    STEPS.with(|s| s.set(s.get() + budget.used));
}

/// Resource limits and checks applied to every Groebner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Reduction steps allowed per basis computation.
    pub max_steps: u64,
    /// Re-check Buchberger's criterion on every basis produced.
    pub audit: bool,
}

impl GbConfig {
    /// The built-in limits, ignoring any [`with_config`] scope.
    pub fn builtin() -> Self {
        GbConfig {
            max_steps: DEFAULT_MAX_STEPS,
            audit: cfg!(debug_assertions),
        }
    }
}

/// The configuration installed by the innermost [`with_config`] on this
/// thread, or the built-in one.
impl Default for GbConfig {
    fn default() -> Self {
        AMBIENT.with(Cell::get).unwrap_or_else(GbConfig::builtin)
    }
}

/// Runs `f` with `config` as the default for every ideal created on this
/// thread.
pub fn with_config<T>(config: GbConfig, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<GbConfig>);
    impl Drop for Restore {
        fn drop(&mut self) {
            AMBIENT.with(|a| a.set(self.0));
        }
    }
    let _restore = Restore(AMBIENT.with(|a| a.replace(Some(config))));
    f()
}

/// A reduced Groebner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: VarList,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    internal: Vec<GPoly>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let n = self.vars.len();
        self.internal
            .iter()
            .map(|g| {
                let e = g.leading_exps().expect("nonzero basis element");
                Monomial(e.exps(n).iter().map(|&x| x as u32).collect())
            })
            .collect()
    }

    /// Buchberger's criterion plus reducedness, recomputed from scratch.
    pub fn passes_audit(&self) -> Result<bool> {
        buchberger::audit(&self.internal, &self.ctx())
    }

    fn ctx(&self) -> Ctx {
        Ctx {
            order: self.order.clone(),
            n: self.vars.len(),
        }
    }

    fn from_internal(vars: &VarList, order: &MonomialOrder, internal: Vec<GPoly>) -> Self {
        let ctx = Ctx {
            order: order.clone(),
            n: vars.len(),
        };
        let polys = internal
            .iter()
            .map(|g| g.to_monic_poly(vars, &ctx))
            .collect();
        GroebnerBasis {
            vars: vars.clone(),
            order: order.clone(),
            polys,
            internal,
        }
    }

    /// Normal form of `f`, which must live in the basis ring.
    pub fn normal_form(&self, f: &Polynomial, max_steps: u64) -> Result<Polynomial> {
        let ctx = self.ctx();
        let (g, k) = GPoly::from_poly(f, &ctx)?;
        let refs: Vec<&GPoly> = self.internal.iter().collect();
        let mut budget = Budget::new(max_steps);
        let res = buchberger::reduce(&g, &refs, true, &ctx, &mut budget);
        charge(&budget);
        let (r, s) = res?;
        if r.is_zero() {
            return Ok(Polynomial::zero(&self.vars));
        }
        let scale = Rational::one() / (s * k);
        Ok(r.to_poly_scaled(&self.vars, &ctx, &scale))
    }
}

/// A finitely generated ideal with a monomial order and a write-once
/// Groebner basis cache shared between clones.
#[derive(Clone, Debug)]
pub struct Ideal {
    vars: VarList,
    gens: Vec<Polynomial>,
    order: MonomialOrder,
    config: GbConfig,
    cache: Arc<OnceLock<GroebnerBasis>>,
}

impl Ideal {
    pub fn new(vars: &VarList, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if g.vars() != vars {
                return Err(Error::InvalidInput(format!(
                    "generator `{g}` is not over {vars}"
                )));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            vars: vars.clone(),
            gens,
            order: MonomialOrder::default(),
            config: GbConfig::default(),
            cache: Arc::new(OnceLock::new()),
        })
    }

    pub fn parse(vars: &VarList, texts: &[&str]) -> Result<Self> {
        let gens = texts
            .iter()
            .map(|t| Polynomial::parse(t, vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, gens)
    }

    pub fn zero(vars: &VarList) -> Self {
        Self::new(vars, Vec::new()).unwrap()
    }

    pub fn unit(vars: &VarList) -> Self {
        Self::new(vars, vec![Polynomial::one(vars)]).unwrap()
    }

    /// Same ideal with another order; the cache starts empty.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if order == self.order {
            return self.clone();
        }
        Ideal {
            order,
            cache: Arc::new(OnceLock::new()),
            ..self.clone()
        }
    }

    pub fn with_config(&self, config: GbConfig) -> Self {
        Ideal {
            config,
            cache: if config.audit && !self.config.audit {
                Arc::new(OnceLock::new())
            } else {
                self.cache.clone()
            },
            ..self.clone()
        }
    }

    /// Builds an ideal sharing this one's configuration.
    fn derived(&self, vars: &VarList, gens: Vec<Polynomial>) -> Result<Self> {
        Ok(Self::new(vars, gens)?.with_config(self.config))
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn config(&self) -> GbConfig {
        self.config
    }

    fn ctx(&self) -> Ctx {
        Ctx {
            order: self.order.clone(),
            n: self.vars.len(),
        }
    }

    pub fn groebner_basis(&self) -> Result<&GroebnerBasis> {
        if let Some(b) = self.cache.get() {
            return Ok(b);
        }
        let ctx = self.ctx();
        let input = self
            .gens
            .iter()
            .map(|g| GPoly::from_poly(g, &ctx).map(|x| x.0))
            .collect::<Result<Vec<_>>>()?;
        let mut budget = Budget::new(self.config.max_steps);
        let res = buchberger::groebner(&input, &ctx, &mut budget);
        charge(&budget);
        let basis = GroebnerBasis::from_internal(&self.vars, &self.order, res?);
        if self.config.audit && !buchberger::audit(&basis.internal, &ctx)? {
            return Err(Error::AuditFailed);
        }
        let _ = self.cache.set(basis);
        Ok(self.cache.get().unwrap())
    }

    fn check_ring(&self, f: &Polynomial) -> Result<()> {
        if f.vars() != &self.vars {
            return Err(Error::InvalidInput(format!(
                "`{f}` is not over {}",
                self.vars
            )));
        }
        Ok(())
    }

    fn check_same_ring(&self, other: &Ideal) -> Result<()> {
        if other.vars != self.vars {
            return Err(Error::InvalidInput(format!(
                "ideals over different rings: {} vs {}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_ring(f)?;
        self.groebner_basis()?.normal_form(f, self.config.max_steps)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_same_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.groebner_basis()?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Re-expresses the ideal over `target`, matching variables by name.
    pub fn extend(&self, target: &VarList) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<Vec<_>>>()?;
        self.derived(target, gens)
    }

    /// `I ∩ k[remaining variables]`, over the ring without `block`.
    pub fn eliminate(&self, block: &[&str]) -> Result<Ideal> {
        for b in block {
            self.vars.require(b)?;
        }
        let drop: Vec<String> = block.iter().map(|s| s.to_string()).collect();
        let rest = self.vars.without(&drop);
        let perm = VarList::new(drop.iter().cloned().chain(rest.names().iter().cloned()))?;
        let lifted = self
            .extend(&perm)?
            .with_order(MonomialOrder::elimination(drop.len()));
        let basis = lifted.groebner_basis()?;
        let k = drop.len();
        let mut kept_internal = Vec::new();
        let mut kept = Vec::new();
        for (p, g) in basis.polys.iter().zip(&basis.internal) {
            if p.support().iter().all(|&i| i >= k) {
                kept.push(p.embed(&rest)?);
                kept_internal.push(g.clone());
            }
        }
        let out = self.derived(&rest, kept)?;
        // The kept elements form a reduced basis of the elimination ideal for
        // degrevlex on the remaining variables.
        let ctx = out.ctx();
        let internal = out
            .gens
            .iter()
            .map(|g| GPoly::from_poly(g, &ctx).map(|x| x.0))
            .collect::<Result<Vec<_>>>()?;
        let _ = out
            .cache
            .set(GroebnerBasis::from_internal(&rest, &out.order, internal));
        Ok(out)
    }

    /// `I : g^∞` via an auxiliary variable `s` and the relation `1 - s*g`.
    pub fn saturate_by(&self, g: &Polynomial) -> Result<Ideal> {
        self.check_ring(g)?;
        if g.is_zero() {
            return Ok(Ideal::unit(&self.vars).with_config(self.config));
        }
        if g.is_constant() || self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(i) = self.variable_index(g) {
            let n = self.vars.len();
            let all: Vec<usize> = (0..n).collect();
            for block in [all, vec![i]] {
                if self
                    .gens
                    .iter()
                    .all(|p| p.homogeneous_degree_in(&block).is_some())
                {
                    return self.saturate_by_variable(i, &block);
                }
            }
        }
        let s = self.vars.fresh("s");
        let big =
            VarList::new(std::iter::once(s.clone()).chain(self.vars.names().iter().cloned()))?;
        let mut gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|p| p.embed(&big))
            .collect::<Result<Vec<_>>>()?;
        let sv = Polynomial::var_at(&big, 0);
        gens.push(Polynomial::one(&big) - &sv * &g.embed(&big)?);
        let out = self.derived(&big, gens)?.eliminate(&[&s])?;
        out.extend(&self.vars)
    }

    fn variable_index(&self, g: &Polynomial) -> Option<usize> {
        (0..self.vars.len()).find(|&i| *g == Polynomial::var_at(&self.vars, i))
    }

    /// Saturation by variable `i` of an ideal homogeneous in the variables
    /// `block` (which contains `i`). Under an order refining the block degree
    /// with `i` reverse-lexicographically last, a homogeneous basis element is
    /// divisible by a power of the variable exactly when its leading term is,
    /// so dividing out those powers gives a basis of the saturation.
    fn saturate_by_variable(&self, i: usize, block: &[usize]) -> Result<Ideal> {
        let n = self.vars.len();
        let mut weight = vec![0i64; n];
        for &b in block {
            weight[b] = 1;
        }
        let mut last = vec![0i64; n];
        last[i] = -1;
        let order = MonomialOrder::Matrix {
            rows: vec![weight, last],
            tail: Box::new(MonomialOrder::DegRevLex),
        };
        let basis = self.with_order(order).groebner_basis()?.polys.clone();
        let gens = basis
            .iter()
            .map(|p| {
                let e = p.terms().map(|(m, _)| m.0[i]).min().unwrap_or(0);
                let mut div = Monomial::one(n);
                div.0[i] = e;
                Polynomial::from_terms(
                    &self.vars,
                    p.terms().map(|(m, c)| (div.quotient_of(m), c.clone())),
                )
            })
            .collect();
        self.derived(&self.vars, gens)
    }

    /// `I : J^∞ = ∩_j I : g_j^∞`.
    pub fn saturate(&self, j: &Ideal) -> Result<Ideal> {
        self.check_same_ring(j)?;
        if j.is_zero() {
            return Ok(Ideal::unit(&self.vars).with_config(self.config));
        }
        let mut acc: Option<Ideal> = None;
        for g in &j.gens {
            let s = self.saturate_by(g)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// `I ∩ J`, via `t*I + (1 - t)*J` with `t` eliminated.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.vars).with_config(self.config));
        }
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let t = self.vars.fresh("t");
        let big =
            VarList::new(std::iter::once(t.clone()).chain(self.vars.names().iter().cloned()))?;
        let tv = Polynomial::var_at(&big, 0);
        let omt = Polynomial::one(&big) - &tv;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&tv * &g.embed(&big)?);
        }
        for g in &other.gens {
            gens.push(&omt * &g.embed(&big)?);
        }
        let out = self.derived(&big, gens)?.eliminate(&[&t])?;
        out.extend(&self.vars)
    }

    /// `I : J`.
    pub fn quotient(&self, j: &Ideal) -> Result<Ideal> {
        self.check_same_ring(j)?;
        if j.is_zero() {
            return Ok(Ideal::unit(&self.vars).with_config(self.config));
        }
        let mut acc: Option<Ideal> = None;
        for g in &j.gens {
            let principal = self.derived(&self.vars, vec![g.clone()])?;
            let inter = self.intersect(&principal)?;
            let gens = inter
                .gens
                .iter()
                .map(|h| {
                    h.div_exact(g).ok_or_else(|| {
                        Error::InvalidInput(format!("`{h}` is not divisible by `{g}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let q = self.derived(&self.vars, gens)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same_ring(other)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        self.derived(&self.vars, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same_ring(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        self.derived(&self.vars, gens)
    }

    /// Adds generators to the ideal.
    pub fn with_generators(&self, extra: &[Polynomial]) -> Result<Ideal> {
        let gens = self.gens.iter().chain(extra).cloned().collect();
        self.derived(&self.vars, gens)
    }

    /// Whether `f` vanishes on `V(I)`: `1 ∈ I + (1 - u*f)` for a fresh `u`.
    pub fn radical_member(&self, f: &Polynomial) -> Result<bool> {
        self.check_ring(f)?;
        if self.contains(f)? {
            return Ok(true);
        }
        if self.is_unit()? {
            return Ok(true);
        }
        let u = self.vars.fresh("u");
        let big = VarList::new(self.vars.names().iter().cloned().chain(std::iter::once(u)))?;
        let mut gens: Vec<Polynomial> = self
            .groebner_basis()?
            .polys
            .iter()
            .map(|p| p.embed(&big))
            .collect::<Result<Vec<_>>>()?;
        let uv = Polynomial::var_at(&big, big.len() - 1);
        gens.push(Polynomial::one(&big) - &uv * &f.embed(&big)?);
        self.derived(&big, gens)?.is_unit()
    }

    /// `V(I) ⊆ V(J)`, that is every generator of `J` lies in `√I`.
    pub fn radical_contains(&self, j: &Ideal) -> Result<bool> {
        self.check_same_ring(j)?;
        for g in &j.gens {
            if !self.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `V(I) = V(J)`.
    pub fn radical_equal(&self, j: &Ideal) -> Result<bool> {
        Ok(self.radical_contains(j)? && j.radical_contains(self)?)
    }

    /// Krull dimension of `V(I)`; `-1` when `V(I)` is empty.
    pub fn dimension(&self) -> Result<i64> {
        if self.is_zero() {
            return Ok(self.vars.len() as i64);
        }
        let basis = self.groebner_basis()?;
        if basis.is_unit() {
            return Ok(-1);
        }
        let n = self.vars.len();
        let supports: Vec<u32> = basis
            .leading_monomials()
            .iter()
            .map(|m| {
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u32, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        let mut best = 0usize;
        max_independent(&supports, n, 0, 0, 0, &mut best);
        Ok(best as i64)
    }

    /// Substitutes rational values for the named variables and drops them
    /// from the ring.
    pub fn specialize(&self, assignment: &[(&str, Rational)]) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        let mut drop = Vec::new();
        for (name, value) in assignment {
            let i = self.vars.require(name)?;
            gens = gens.iter().map(|g| g.substitute_value(i, value)).collect();
            drop.push(name.to_string());
        }
        let target = self.vars.without(&drop);
        let gens = gens
            .iter()
            .map(|g| g.embed(&target))
            .collect::<Result<Vec<_>>>()?;
        self.derived(&target, gens)
    }

    /// Whether every generator is homogeneous in the named variables.
    pub fn is_homogeneous_in(&self, names: &[&str]) -> Result<bool> {
        let idx = names
            .iter()
            .map(|n| self.vars.require(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .gens
            .iter()
            .all(|g| g.homogeneous_degree_in(&idx).is_some()))
    }

    /// Generators of the reduced basis, or the generators themselves for the
    /// zero ideal.
    pub fn reduced_generators(&self) -> Result<Vec<Polynomial>> {
        Ok(self.groebner_basis()?.polys.clone())
    }
}

fn max_independent(supports: &[u32], n: usize, i: usize, set: u32, size: usize, best: &mut usize) {
    if size + (n - i) <= *best {
        return;
    }
    if i == n {
        *best = size;
        return;
    }
    let with = set | (1 << i);
    if supports.iter().all(|&s| s & !with != 0) {
        max_independent(supports, n, i + 1, with, size + 1, best);
    }
    max_independent(supports, n, i + 1, set, size, best);
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.gens.is_empty() {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for Ideal {
    /// Equality of ideals, decided by comparing reduced bases. Panics if a
    /// basis cannot be computed within budget.
    fn eq(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let a = self.with_order(MonomialOrder::DegRevLex);
        let b = other.with_order(MonomialOrder::DegRevLex);
        let ga = a.groebner_basis().expect("Groebner basis");
        let gb = b.groebner_basis().expect("Groebner basis");
        ga.polys == gb.polys
    }
}
