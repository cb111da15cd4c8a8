//! Conormal and relative conormal spaces, the exceptional image of the
//! blow-up along the graph of `df`, joins, and the decomposition of the
//! relative conormal fiber over the origin.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg;
use crate::poly::{PolyMap, Polynomial, Rational, VarList};

/// An affine variety `X = V(G) ⊆ C^k × C^n` of codimension `c` with a
/// function `f`. The first `k` variables are the parameters `y`, the rest
/// the fiber coordinates `z`.
#[derive(Clone, Debug)]
pub struct SpaceWithFunction {
    vars: VarList,
    k: usize,
    g: PolyMap,
    f: Polynomial,
    codim: usize,
}

impl SpaceWithFunction {
    pub fn new(vars: VarList, k: usize, g: PolyMap, f: Polynomial, codim: usize) -> Result<Self> {
        if k > vars.len() {
            return Err(Error::InvalidInput(format!(
                "{k} parameters but only {} variables",
                vars.len()
            )));
        }
        if g.source_vars() != &vars || f.vars() != &vars {
            return Err(Error::InvalidInput(
                "equations and function must be over the declared variables".into(),
            ));
        }
        Ok(SpaceWithFunction {
            vars,
            k,
            g,
            f,
            codim,
        })
    }

    /// Builds a space from variable names and polynomial texts.
    pub fn parse(
        params: &[&str],
        fiber: &[&str],
        g: &[&str],
        f: &str,
        codim: usize,
    ) -> Result<Self> {
        let vars = VarList::new(params.iter().chain(fiber).copied())?;
        let map = PolyMap::parse(&vars, g)?;
        let f = Polynomial::parse(f, &vars)?;
        Self::new(vars, params.len(), map, f, codim)
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn param_count(&self) -> usize {
        self.k
    }

    pub fn fiber_count(&self) -> usize {
        self.vars.len() - self.k
    }

    pub fn param_names(&self) -> &[String] {
        &self.vars.names()[..self.k]
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.vars.names()[self.k..]
    }

    pub fn map(&self) -> &PolyMap {
        &self.g
    }

    pub fn function(&self) -> &Polynomial {
        &self.f
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn ideal_x(&self) -> Result<Ideal> {
        Ideal::new(&self.vars, self.g.components().to_vec())
    }

    pub fn origin(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.vars.len()]
    }

    /// Checks the declared codimension against `dim V(G)`.
    pub fn validate_codim(&self) -> Result<()> {
        let dim = self.ideal_x()?.dimension()?;
        let actual = self.vars.len() as i64 - dim;
        if dim < 0 || actual != self.codim as i64 {
            return Err(Error::CodimMismatch {
                declared: self.codim,
                actual,
            });
        }
        Ok(())
    }

    /// Whether `f` vanishes on `Y = {z = 0}`.
    pub fn f_vanishes_on_y(&self) -> bool {
        let mut p = self.f.clone();
        for i in self.k..self.vars.len() {
            p = p.substitute_value(i, &Rational::zero());
        }
        p.is_zero()
    }

    /// Whether `Y = {z = 0}` lies in `X`.
    pub fn y_in_x(&self) -> bool {
        self.g.components().iter().all(|g| {
            let mut p = g.clone();
            for i in self.k..self.vars.len() {
                p = p.substitute_value(i, &Rational::zero());
            }
            p.is_zero()
        })
    }

    /// `df(0)` read from the given polynomial.
    pub fn df_at_origin(&self) -> Vec<Rational> {
        let o = self.origin();
        (0..self.vars.len())
            .map(|j| self.f.derivative(j).evaluate(&o))
            .collect()
    }

    fn covectors(&self) -> VarList {
        covector_vars(&self.vars)
    }

    fn total_ring(&self) -> Result<VarList> {
        self.vars.concat(&self.covectors())
    }

    fn dg(&self) -> Vec<Vec<Polynomial>> {
        self.g.full_jacobian()
    }

    fn df(&self) -> Vec<Polynomial> {
        (0..self.vars.len()).map(|j| self.f.derivative(j)).collect()
    }
}

/// Covector coordinates `xi_<v>` dual to `base`, renamed when they clash.
pub fn covector_vars(base: &VarList) -> VarList {
    let mut taken = base.clone();
    let mut names = Vec::with_capacity(base.len());
    for v in base.names() {
        let n = taken.fresh(&format!("xi_{v}"));
        taken = taken
            .concat(&VarList::new([n.clone()]).expect("single name"))
            .expect("fresh name");
        names.push(n);
    }
    VarList::new(names).expect("distinct covector names")
}

/// An ideal in base variables plus covector variables, homogeneous in the
/// covectors: a closed subset of `C^m × P^{m-1}`.
#[derive(Clone, Debug)]
pub struct BigradedIdeal {
    base: VarList,
    covectors: VarList,
    ideal: Ideal,
}

impl BigradedIdeal {
    pub fn new(base: VarList, covectors: VarList, ideal: Ideal) -> Result<Self> {
        if ideal.vars() != &base.concat(&covectors)? {
            return Err(Error::InvalidInput(format!(
                "ideal is over {}, expected base {} and covectors {}",
                ideal.vars(),
                base,
                covectors
            )));
        }
        let b = BigradedIdeal {
            base,
            covectors,
            ideal,
        };
        if !b.is_covector_homogeneous() {
            return Err(Error::InvalidInput(
                "ideal is not homogeneous in the covector variables".into(),
            ));
        }
        Ok(b)
    }

    pub fn base_vars(&self) -> &VarList {
        &self.base
    }

    pub fn covector_vars(&self) -> &VarList {
        &self.covectors
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    fn covector_indices(&self) -> Vec<usize> {
        (self.base.len()..self.base.len() + self.covectors.len()).collect()
    }

    pub fn is_covector_homogeneous(&self) -> bool {
        let idx = self.covector_indices();
        self.ideal
            .generators()
            .iter()
            .all(|g| g.homogeneous_degree_in(&idx).is_some())
    }

    /// The fiber over a base point, as an ideal in the covector variables
    /// saturated by the irrelevant ideal.
    pub fn fiber_at(&self, point: &[Rational]) -> Result<Ideal> {
        if point.len() != self.base.len() {
            return Err(Error::InvalidInput(format!(
                "base point has {} coordinates, expected {}",
                point.len(),
                self.base.len()
            )));
        }
        let assignment: Vec<(&str, Rational)> = self
            .base
            .names()
            .iter()
            .map(String::as_str)
            .zip(point.iter().cloned())
            .collect();
        let spec = self.ideal.specialize(&assignment)?;
        saturate_irrelevant(&spec)
    }

    pub fn fiber_at_origin(&self) -> Result<Ideal> {
        self.fiber_at(&vec![Rational::zero(); self.base.len()])
    }

    /// Dimension of the projective fiber over `point`; `-1` when empty.
    pub fn projective_fiber_dimension(&self, point: &[Rational]) -> Result<i64> {
        projective_dimension(&self.fiber_at(point)?)
    }

    /// Adds generators over the base ring.
    pub fn restrict_base(&self, extra: &[Polynomial]) -> Result<BigradedIdeal> {
        let ring = self.ideal.vars().clone();
        let lifted = extra
            .iter()
            .map(|p| p.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
        BigradedIdeal::new(
            self.base.clone(),
            self.covectors.clone(),
            self.ideal.with_generators(&lifted)?,
        )
    }
}

/// `I : (ξ)^∞` for an ideal in covector variables only.
pub fn saturate_irrelevant(cone: &Ideal) -> Result<Ideal> {
    let vars = cone.vars().clone();
    let irrelevant = Ideal::new(
        &vars,
        (0..vars.len())
            .map(|i| Polynomial::var_at(&vars, i))
            .collect(),
    )?
    .with_config(cone.config());
    cone.saturate(&irrelevant)
}

/// Projective dimension of the set cut out by a homogeneous ideal.
pub fn projective_dimension(cone: &Ideal) -> Result<i64> {
    let d = cone.dimension()?;
    Ok(if d <= 0 { -1 } else { d - 1 })
}

/// Saturation of `ideal` by the ideal generated by `gens`, embedded.
fn saturate_by_polys(ideal: &Ideal, gens: &[Polynomial]) -> Result<Ideal> {
    let ring = ideal.vars().clone();
    let lifted = gens
        .iter()
        .map(|p| p.embed(&ring))
        .collect::<Result<Vec<_>>>()?;
    let j = Ideal::new(&ring, lifted)?.with_config(ideal.config());
    ideal.saturate(&j)
}

/// Minors of size `size` of `rows` with `xi` appended as the last row, each
/// using the last row.
fn minors_with_row(
    rows: &[Vec<Polynomial>],
    xi: Vec<Polynomial>,
    size: usize,
    ring: &VarList,
) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    if size == 0 {
        return Ok(out);
    }
    let m = xi.len();
    for rs in linalg::combinations(rows.len(), size - 1) {
        let mut mat: Vec<Vec<Polynomial>> = rs
            .iter()
            .map(|&r| {
                rows[r]
                    .iter()
                    .map(|p| p.embed(ring))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        mat.push(xi.clone());
        for cs in linalg::combinations(m, size) {
            let sub: Vec<Vec<Polynomial>> = mat
                .iter()
                .map(|row| cs.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let d = linalg::determinant(&sub, ring);
            if !d.is_zero() {
                let p = d.primitive();
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// `C(X)`: `I(X)` plus the `(c+1)`-minors of `DG` stacked over `ξ`,
/// saturated by the `c`-minors of `DG`.
pub fn conormal_space(s: &SpaceWithFunction) -> Result<BigradedIdeal> {
    s.validate_codim()?;
    let ring = s.total_ring()?;
    let cov = s.covectors();
    let m = s.vars.len();
    let xi: Vec<Polynomial> = (0..m).map(|j| Polynomial::var_at(&ring, m + j)).collect();
    let dg = s.dg();
    let mut gens: Vec<Polynomial> =
        s.g.components()
            .iter()
            .map(|g| g.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
    gens.extend(minors_with_row(&dg, xi, s.codim + 1, &ring)?);
    let base = Ideal::new(&ring, gens)?;
    let sat = saturate_by_polys(&base, &linalg::minors(&dg, s.codim, &s.vars))?;
    BigradedIdeal::new(s.vars.clone(), cov, sat)
}

/// `C(X)` from the multiplier parametrization `ξ = ψ·DG(x)`: the closure of
/// the image of `X × C^p`, which is the closure of its part over `X_sm`.
pub fn conormal_by_multipliers(s: &SpaceWithFunction) -> Result<BigradedIdeal> {
    s.validate_codim()?;
    let cov = s.covectors();
    let t = tstar_ideal(s, &cov)?;
    BigradedIdeal::new(s.vars.clone(), cov, t)
}

/// Ideal of the conormal cone `T*_X U` in `(x, u)`, `u` named by `cov`.
fn tstar_ideal(s: &SpaceWithFunction, cov: &VarList) -> Result<Ideal> {
    let m = s.vars.len();
    let p = s.g.len();
    let xu = s.vars.concat(cov)?;
    let psi = VarList::new(xu.fresh_block("psi", p))?;
    let ring = psi.concat(&xu)?;
    let dg = s.dg();
    let mut gens: Vec<Polynomial> =
        s.g.components()
            .iter()
            .map(|g| g.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
    for j in 0..m {
        let mut rel = Polynomial::var_at(&ring, p + m + j);
        for (i, row) in dg.iter().enumerate() {
            let coeff = row[j].embed(&ring)?;
            rel = rel - &Polynomial::var_at(&ring, i) * &coeff;
        }
        gens.push(rel);
    }
    let names: Vec<&str> = psi.names().iter().map(String::as_str).collect();
    Ideal::new(&ring, gens)?.eliminate(&names)
}

/// `C(Y)` for `Y = C^k × 0` inside the ambient space of `s`: `(z, ξ_y)`.
pub fn conormal_of_y_in(s: &SpaceWithFunction) -> Result<BigradedIdeal> {
    let cov = s.covectors();
    let ring = s.total_ring()?;
    let m = s.vars.len();
    let mut gens = Vec::new();
    for i in s.k..m {
        gens.push(Polynomial::var_at(&ring, i));
    }
    for j in 0..s.k {
        gens.push(Polynomial::var_at(&ring, m + j));
    }
    BigradedIdeal::new(s.vars.clone(), cov, Ideal::new(&ring, gens)?)
}

/// `C(Y)` for `Y = C^k × 0 ⊆ C^k × C^n` with variables `y1..yk, z1..zn`.
pub fn conormal_of_y(k: usize, n: usize) -> Result<BigradedIdeal> {
    let names: Vec<String> = (1..=k)
        .map(|i| format!("y{i}"))
        .chain((1..=n).map(|i| format!("z{i}")))
        .collect();
    let vars = VarList::new(names)?;
    let s = SpaceWithFunction::new(
        vars.clone(),
        k,
        PolyMap::new(vars.clone(), Vec::new())?,
        Polynomial::zero(&vars),
        0,
    )?;
    conormal_of_y_in(&s)
}

/// `C(X, f)`: `I(X)` plus the `(c+2)`-minors of `[DG; df; ξ]`, saturated by
/// the `(c+1)`-minors of `[DG; df]`.
pub fn relative_conormal(s: &SpaceWithFunction) -> Result<BigradedIdeal> {
    s.validate_codim()?;
    let ring = s.total_ring()?;
    let cov = s.covectors();
    let m = s.vars.len();
    let xi: Vec<Polynomial> = (0..m).map(|j| Polynomial::var_at(&ring, m + j)).collect();
    let mut dh = s.dg();
    dh.push(s.df());
    let mut gens: Vec<Polynomial> =
        s.g.components()
            .iter()
            .map(|g| g.embed(&ring))
            .collect::<Result<Vec<_>>>()?;
    gens.extend(minors_with_row(&dh, xi, s.codim + 2, &ring)?);
    let base = Ideal::new(&ring, gens)?;
    let sat = saturate_by_polys(&base, &linalg::minors(&dh, s.codim + 1, &s.vars))?;
    BigradedIdeal::new(s.vars.clone(), cov, sat)
}

/// `π(E_f)`: the projectivized normal cone of the graph of `df` inside
/// `T*_X U`. The cone is obtained by deformation: write `u = w·b + df(x)`,
/// saturate by `w` and set `w = 0`; `b` becomes the covector coordinate.
pub fn exceptional_image(s: &SpaceWithFunction) -> Result<BigradedIdeal> {
    s.validate_codim()?;
    let cov = s.covectors();
    let m = s.vars.len();
    let t = tstar_ideal(s, &cov)?;
    let xb = s.vars.concat(&cov)?;
    let w = xb.fresh("w");
    let ring = VarList::new(std::iter::once(w.clone()).chain(xb.names().iter().cloned()))?;
    let wv = Polynomial::var_at(&ring, 0);
    let mut images: Vec<Polynomial> = (0..m).map(|i| Polynomial::var_at(&ring, 1 + i)).collect();
    for (j, d) in s.df().iter().enumerate() {
        let b = Polynomial::var_at(&ring, 1 + m + j);
        images.push(&wv * &b + d.embed(&ring)?);
    }
    let gens: Vec<Polynomial> = t
        .reduced_generators()?
        .iter()
        .map(|g| g.compose(&images, &ring))
        .collect();
    let deformed = Ideal::new(&ring, gens)?.with_config(t.config());
    let sat = deformed.saturate_by(&wv)?;
    let cone = sat.specialize(&[(w.as_str(), Rational::zero())])?;
    let cone = cone.extend(&xb)?;
    BigradedIdeal::new(s.vars.clone(), cov, cone)
}

/// Ideal of the point `⟨p⟩`: the 2x2 minors of `[ξ; p]`.
pub fn point_ideal(p: &[Rational], vars: &VarList) -> Result<Ideal> {
    if p.iter().all(Zero::is_zero) {
        return Err(Error::ZeroCovector);
    }
    let mut gens = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let a = Polynomial::var_at(vars, i).scale(&p[j]);
            let b = Polynomial::var_at(vars, j).scale(&p[i]);
            gens.push(a - b);
        }
    }
    Ideal::new(vars, gens)
}

/// `P * V`: points on lines joining `P` to points of `V`, as the preimage
/// of the projection from `P`. When `V` is empty the result is `{P}`.
pub fn join_point_set(p: &[Rational], v: &Ideal) -> Result<Ideal> {
    let vars = v.vars().clone();
    if p.len() != vars.len() {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, expected {}",
            p.len(),
            vars.len()
        )));
    }
    if p.iter().all(Zero::is_zero) {
        return Err(Error::ZeroCovector);
    }
    let v = saturate_irrelevant(v)?;
    if v.is_unit()? {
        return Ok(point_ideal(p, &vars)?.with_config(v.config()));
    }
    let s = vars.fresh("s");
    let ring = VarList::new(std::iter::once(s.clone()).chain(vars.names().iter().cloned()))?;
    let sv = Polynomial::var_at(&ring, 0);
    let images: Vec<Polynomial> = (0..vars.len())
        .map(|i| Polynomial::var_at(&ring, 1 + i) - sv.scale(&p[i]))
        .collect();
    let gens = v
        .generators()
        .iter()
        .map(|g| g.compose(&images, &ring))
        .collect();
    let joined = Ideal::new(&ring, gens)?
        .with_config(v.config())
        .eliminate(&[&s])?;
    saturate_irrelevant(&joined.extend(&vars)?)
}

/// Both sides of the decomposition of `C(X,f)_0` and the verdicts.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub df0: Vec<Rational>,
    /// `C(X,f)_0`.
    pub lhs: Ideal,
    /// `π(E_f)_0`.
    pub exceptional: Ideal,
    /// `C(X)_0`.
    pub conormal: Ideal,
    /// `df(0) * C(X)_0`, absent when `df(0) = 0`.
    pub join: Option<Ideal>,
    pub rhs: Ideal,
    /// Whether `C(X)_0` is empty or the single point `⟨df(0)⟩`, so the join
    /// was taken to be that point.
    pub degenerate_join: bool,
    pub exceptional_in_lhs: bool,
    pub join_in_lhs: bool,
    pub equal: bool,
}

pub fn verify_decomposition(s: &SpaceWithFunction) -> Result<DecompositionReport> {
    let lhs = relative_conormal(s)?.fiber_at_origin()?;
    let exceptional = exceptional_image(s)?.fiber_at_origin()?;
    let conormal = conormal_space(s)?.fiber_at_origin()?;
    let df0 = s.df_at_origin();
    let (join, degenerate_join) = if df0.iter().all(Zero::is_zero) {
        (None, false)
    } else {
        let point = point_ideal(&df0, conormal.vars())?;
        let degenerate = conormal.is_unit()? || conormal.radical_equal(&point)?;
        (Some(join_point_set(&df0, &conormal)?), degenerate)
    };
    let rhs = match &join {
        Some(j) => exceptional.intersect(j)?,
        None => exceptional.clone(),
    };
    let exceptional_in_lhs = exceptional.radical_contains(&lhs)?;
    let join_in_lhs = match &join {
        Some(j) => j.radical_contains(&lhs)?,
        None => true,
    };
    let equal = lhs.radical_equal(&rhs)?;
    Ok(DecompositionReport {
        df0,
        lhs,
        exceptional,
        conormal,
        join,
        rhs,
        degenerate_join,
        exceptional_in_lhs,
        join_in_lhs,
        equal,
    })
}

/// Exact test of `C(X,f) ∩ c^{-1}(Y) ⊆ C(Y)` per parameter direction.
#[derive(Clone, Debug)]
pub struct AfExactReport {
    /// `C(X,f)_0`.
    pub fiber: Ideal,
    /// `ξ_{y_j}` vanishes on `C(X,f)_0`, for each `j`.
    pub at_origin: Vec<bool>,
    /// `ξ_{y_j}` vanishes on all of `C(X,f)|_Y`, for each `j`.
    pub along_y: Vec<bool>,
}

impl AfExactReport {
    /// The condition at the origin.
    pub fn holds(&self) -> bool {
        self.at_origin.iter().all(|&b| b)
    }

    pub fn holds_along_y(&self) -> bool {
        self.along_y.iter().all(|&b| b)
    }
}

pub fn af_exact(s: &SpaceWithFunction) -> Result<AfExactReport> {
    let rel = relative_conormal(s)?;
    af_exact_from(s, &rel)
}

/// Like [`af_exact`] with a precomputed relative conormal.
pub fn af_exact_from(s: &SpaceWithFunction, rel: &BigradedIdeal) -> Result<AfExactReport> {
    let fiber = rel.fiber_at_origin()?;
    let m = s.vars.len();
    let mut at_origin = Vec::with_capacity(s.k);
    for j in 0..s.k {
        at_origin.push(fiber.radical_member(&Polynomial::var_at(fiber.vars(), j))?);
    }
    let ring = rel.ideal().vars().clone();
    let zs: Vec<Polynomial> = (s.k..m).map(|i| Polynomial::var_at(&ring, i)).collect();
    let over_y = rel.ideal().with_generators(&zs)?;
    let mut along_y = Vec::with_capacity(s.k);
    for j in 0..s.k {
        along_y.push(over_y.radical_member(&Polynomial::var_at(&ring, m + j))?);
    }
    Ok(AfExactReport {
        fiber,
        at_origin,
        along_y,
    })
}
