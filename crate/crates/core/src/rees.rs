//! Rees algebras of submodules of free modules over `O_X`, the fibers
//! `C_y` and `C(y)` of their Proj, and the comparison between them.

use num_traits::Zero;

use crate::conormal::{projective_dimension, BigradedIdeal};
use crate::error::{Error, Result};
use crate::groebner::{GbConfig, Ideal};
use crate::linalg;
use crate::poly::{PolyMap, Polynomial, Rational, VarList};

/// A submodule of `O^p` given by generator columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    vars: VarList,
    rank: usize,
    columns: Vec<Vec<Polynomial>>,
}

impl PresentedModule {
    pub fn new(vars: &VarList, rank: usize, columns: Vec<Vec<Polynomial>>) -> Result<Self> {
        for c in &columns {
            if c.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "generator has {} entries, expected {rank}",
                    c.len()
                )));
            }
            if c.iter().any(|p| p.vars() != vars) {
                return Err(Error::InvalidInput(format!(
                    "generator entries must be over {vars}"
                )));
            }
        }
        Ok(PresentedModule {
            vars: vars.clone(),
            rank,
            columns,
        })
    }

    /// Columns given as lists of polynomial texts.
    pub fn parse(vars: &VarList, columns: &[Vec<&str>]) -> Result<Self> {
        let rank = columns.first().map(Vec::len).unwrap_or(0);
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|t| Polynomial::parse(t, vars)).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, rank, cols)
    }

    /// `JM(G)`: the partial derivatives of `G` with respect to `wrt`.
    pub fn jacobian_module(g: &PolyMap, wrt: &[&str]) -> Result<Self> {
        let jac = g.jacobian(wrt)?;
        let columns = (0..wrt.len())
            .map(|j| jac.iter().map(|row| row[j].clone()).collect())
            .collect();
        Self::new(g.source_vars(), g.len(), columns)
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn columns(&self) -> &[Vec<Polynomial>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// The `p x s` matrix whose columns are the generators.
    pub fn matrix(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rank)
            .map(|i| self.columns.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    /// Substitutes values for some variables and drops them from the ring.
    pub fn specialize(&self, assignment: &[(&str, Rational)]) -> Result<Self> {
        let mut drop = Vec::new();
        let mut idx = Vec::new();
        for (n, v) in assignment {
            idx.push((self.vars.require(n)?, v.clone()));
            drop.push(n.to_string());
        }
        let target = self.vars.without(&drop);
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| {
                        let mut q = p.clone();
                        for (i, v) in &idx {
                            q = q.substitute_value(*i, v);
                        }
                        q.embed(&target)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&target, self.rank, columns)
    }

    /// The ideal of `k x k` minors of the generator matrix.
    pub fn fitting_minors(&self, k: usize) -> Vec<Polynomial> {
        linalg::minors(&self.matrix(), k, &self.vars)
    }
}

/// Data for comparing `C_y` with `C(y)`.
#[derive(Clone, Debug)]
pub struct ReesSetup {
    vars: VarList,
    k: usize,
    x: Vec<Polynomial>,
    module: PresentedModule,
    nonfree: Option<Vec<Polynomial>>,
    fiber_dim: usize,
    generic_rank: usize,
    direct_summand: bool,
    config: GbConfig,
}

impl ReesSetup {
    /// `vars` starts with the `k` parameters of `Y`; `x` generates `I(X)`;
    /// `fiber_dim` is `d`, `generic_rank` is `e`.
    pub fn new(
        vars: &VarList,
        k: usize,
        x: Vec<Polynomial>,
        module: PresentedModule,
        fiber_dim: usize,
        generic_rank: usize,
    ) -> Result<Self> {
        if module.vars() != vars || x.iter().any(|p| p.vars() != vars) {
            return Err(Error::InvalidInput(
                "ideal and module must be over the declared variables".into(),
            ));
        }
        if k > vars.len() {
            return Err(Error::InvalidInput("more parameters than variables".into()));
        }
        Ok(ReesSetup {
            vars: vars.clone(),
            k,
            x,
            module,
            nonfree: None,
            fiber_dim,
            generic_rank,
            direct_summand: false,
            config: GbConfig::default(),
        })
    }

    /// Declares the ideal of the non-free locus `S`.
    pub fn with_nonfree_locus(mut self, s: Vec<Polynomial>) -> Result<Self> {
        if s.iter().any(|p| p.vars() != &self.vars) {
            return Err(Error::InvalidInput(
                "non-free locus must be over the declared variables".into(),
            ));
        }
        self.nonfree = Some(s);
        Ok(self)
    }

    /// Records the user's assertion that `M` is a direct summand of `F` off `S`.
    pub fn with_direct_summand(mut self, asserted: bool) -> Self {
        self.direct_summand = asserted;
        self
    }

    pub fn with_config(mut self, config: GbConfig) -> Self {
        self.config = config;
        self
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn param_names(&self) -> &[String] {
        &self.vars.names()[..self.k]
    }

    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn generic_rank(&self) -> usize {
        self.generic_rank
    }

    /// `r = d + e - 1`.
    pub fn r(&self) -> i64 {
        self.fiber_dim as i64 + self.generic_rank as i64 - 1
    }

    pub fn direct_summand_asserted(&self) -> bool {
        self.direct_summand
    }

    pub fn ideal_x(&self) -> Result<Ideal> {
        Ok(Ideal::new(&self.vars, self.x.clone())?.with_config(self.config))
    }

    fn param_assignment(&self, y0: &[Rational]) -> Result<Vec<(&str, Rational)>> {
        if y0.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "parameter point has {} coordinates, expected {}",
                y0.len(),
                self.k
            )));
        }
        Ok(self.vars.names()[..self.k]
            .iter()
            .map(String::as_str)
            .zip(y0.iter().cloned())
            .collect())
    }

    /// The setup restricted to `X_{y0}`: no parameters left.
    pub fn restrict(&self, y0: &[Rational]) -> Result<ReesSetup> {
        let a = self.param_assignment(y0)?;
        let x = self.ideal_x()?.specialize(&a)?;
        let module = self.module.specialize(&a)?;
        let nonfree = match &self.nonfree {
            Some(s) => Some(
                Ideal::new(&self.vars, s.clone())?
                    .specialize(&a)?
                    .generators()
                    .to_vec(),
            ),
            None => None,
        };
        Ok(ReesSetup {
            vars: x.vars().clone(),
            k: 0,
            x: x.generators().to_vec(),
            module,
            nonfree,
            fiber_dim: self.fiber_dim,
            generic_rank: self.generic_rank,
            direct_summand: self.direct_summand,
            config: self.config,
        })
    }

    /// Whether `M` has rank `e` generically on `X`: some `e`-minor does not
    /// vanish on `X` while every `(e+1)`-minor does.
    pub fn generic_rank_consistent(&self) -> Result<bool> {
        let x = self.ideal_x()?;
        let e = self.generic_rank;
        let top = self.module.fitting_minors(e + 1);
        for m in &top {
            if !x.radical_member(m)? {
                return Ok(false);
            }
        }
        let lower = self.module.fitting_minors(e);
        for m in &lower {
            if !x.radical_member(m)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether the declared `S` is exactly the locus on `X` where the rank
    /// of the generators drops below `e`.
    pub fn nonfree_locus_consistent(&self) -> Result<Option<bool>> {
        let Some(s) = &self.nonfree else {
            return Ok(None);
        };
        let x = self.ideal_x()?;
        let declared = x.with_generators(s)?;
        let drop = x.with_generators(&self.module.fitting_minors(self.generic_rank))?;
        Ok(Some(declared.radical_equal(&drop)?))
    }
}

fn t_vars(base: &VarList, count: usize) -> Result<VarList> {
    let mut names = Vec::with_capacity(count);
    for i in 1..=count {
        names.push(base.fresh(&format!("T{i}")));
    }
    VarList::new(names)
}

/// The kernel of `O_X[T] -> O_X[w]`, `T_i ↦ Σ_j M_ji w_j`, computed by
/// eliminating `w` from `I(X) + (T_i - Σ_j M_ji w_j)`.
pub fn rees_presentation(r: &ReesSetup) -> Result<BigradedIdeal> {
    let base = r.vars.clone();
    let p = r.module.rank();
    let s = r.module.len();
    let tv = t_vars(&base, s)?;
    let xt = base.concat(&tv)?;
    let w = VarList::new(xt.fresh_block("w", p))?;
    let ring = w.concat(&xt)?;
    let mut gens: Vec<Polynomial> =
        r.x.iter()
            .map(|g| g.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
    for (i, col) in r.module.columns().iter().enumerate() {
        let mut rel = Polynomial::var_at(&ring, p + base.len() + i);
        for (j, entry) in col.iter().enumerate() {
            rel = rel - &Polynomial::var_at(&ring, j) * &entry.embed(&ring)?;
        }
        gens.push(rel);
    }
    let names: Vec<&str> = w.names().iter().map(String::as_str).collect();
    let ideal = Ideal::new(&ring, gens)?
        .with_config(r.config)
        .eliminate(&names)?;
    BigradedIdeal::new(base, tv, ideal)
}

/// Saturates by the ideal generated by the trailing `count` variables.
fn saturate_trailing(i: &Ideal, count: usize) -> Result<Ideal> {
    let vars = i.vars().clone();
    let n = vars.len();
    let irr = Ideal::new(
        &vars,
        (n - count..n)
            .map(|j| Polynomial::var_at(&vars, j))
            .collect(),
    )?
    .with_config(i.config());
    i.saturate(&irr)
}

/// `C_y`: the presentation with `y = y0` substituted, saturated by `(T)`;
/// an ideal over the fiber variables and `T`.
pub fn fiber_cy(r: &ReesSetup, pres: &BigradedIdeal, y0: &[Rational]) -> Result<Ideal> {
    let a = r.param_assignment(y0)?;
    let spec = pres.ideal().specialize(&a)?;
    saturate_trailing(&spec, pres.covector_vars().len())
}

/// `C(y)`: the Rees presentation of `M(y0)` over `X_{y0}`, saturated by `(T)`.
pub fn fiber_c_of_y(r: &ReesSetup, y0: &[Rational]) -> Result<Ideal> {
    let restricted = r.restrict(y0)?;
    let pres = rees_presentation(&restricted)?;
    saturate_trailing(pres.ideal(), pres.covector_vars().len())
}

#[derive(Clone, Debug)]
pub struct RemarkReport {
    pub c_y: Ideal,
    pub c_of_y: Ideal,
    /// `C_y` with everything over `S_{y0}` removed.
    pub c_y_saturated: Ideal,
    /// `C(y) ⊆ C_y`.
    pub c_of_y_in_c_y: bool,
    /// `C_y = C(y)` before removing anything.
    pub equal_before: bool,
    /// `(C_y - W)^- = C(y)`.
    pub equal_after: bool,
}

/// Compares `C(y0)` with `C_{y0}` after removing the components over `S_{y0}`.
pub fn remark_identity_check(r: &ReesSetup, y0: &[Rational]) -> Result<RemarkReport> {
    let s = r
        .nonfree
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the non-free locus S must be declared".into()))?;
    let pres = rees_presentation(r)?;
    let c_y = fiber_cy(r, &pres, y0)?;
    let c_of_y = fiber_c_of_y(r, y0)?;
    let a = r.param_assignment(y0)?;
    let s_y = Ideal::new(&r.vars, s.clone())?.specialize(&a)?;
    let s_y = s_y.extend(c_y.vars())?.with_config(r.config);
    let c_y_saturated = c_y.saturate(&s_y)?;
    let c_of_y = c_of_y.extend(c_y.vars())?;
    Ok(RemarkReport {
        c_of_y_in_c_y: c_of_y.radical_contains(&c_y)?,
        equal_before: c_y.radical_equal(&c_of_y)?,
        equal_after: c_y_saturated.radical_equal(&c_of_y)?,
        c_y,
        c_of_y,
        c_y_saturated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentsVerdict {
    /// The dimension hypothesis holds and `C_0` and `C(0)` agree as sets.
    Equal,
    /// The dimension hypothesis holds but the sets differ.
    Different,
    /// `dim c^{-1}(0) >= r`: no conclusion is drawn.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ComponentsReport {
    /// `dim c^{-1}(0)` over the origin of `X`.
    pub central_fiber_dim: i64,
    pub r: i64,
    pub hypothesis_holds: bool,
    pub direct_summand_asserted: bool,
    pub c_0: Option<Ideal>,
    pub c_of_0: Option<Ideal>,
    pub verdict: ComponentsVerdict,
}

/// Checks `dim c^{-1}(0) < r` and then whether `C_0` and `C(0)` agree.
pub fn theorem_components_check(r: &ReesSetup) -> Result<ComponentsReport> {
    let pres = rees_presentation(r)?;
    let origin = vec![Rational::zero(); r.vars.len()];
    let central = pres.fiber_at(&origin)?;
    let central_fiber_dim = projective_dimension(&central)?;
    let bound = r.r();
    let hypothesis_holds = central_fiber_dim < bound;
    let mut report = ComponentsReport {
        central_fiber_dim,
        r: bound,
        hypothesis_holds,
        direct_summand_asserted: r.direct_summand,
        c_0: None,
        c_of_0: None,
        verdict: ComponentsVerdict::Inconclusive,
    };
    if !hypothesis_holds {
        return Ok(report);
    }
    let y0 = vec![Rational::zero(); r.k];
    let c_0 = fiber_cy(r, &pres, &y0)?;
    let c_of_0 = fiber_c_of_y(r, &y0)?.extend(c_0.vars())?;
    report.verdict = if c_0.radical_equal(&c_of_0)? {
        ComponentsVerdict::Equal
    } else {
        ComponentsVerdict::Different
    };
    report.c_0 = Some(c_0);
    report.c_of_0 = Some(c_of_0);
    Ok(report)
}

/// Renames the `T` variables of a Rees presentation of `JM(X)` to the
/// covector names used by the conormal constructions.
pub fn as_conormal(pres: &BigradedIdeal, covectors: &VarList) -> Result<BigradedIdeal> {
    if covectors.len() != pres.covector_vars().len() {
        return Err(Error::InvalidInput(
            "covector count differs from generator count".into(),
        ));
    }
    let base = pres.base_vars().clone();
    let target = base.concat(covectors)?;
    let images: Vec<Polynomial> = (0..target.len())
        .map(|i| Polynomial::var_at(&target, i))
        .collect();
    let gens = pres
        .ideal()
        .generators()
        .iter()
        .map(|g| g.compose(&images, &target))
        .collect();
    BigradedIdeal::new(base, covectors.clone(), Ideal::new(&target, gens)?)
}
