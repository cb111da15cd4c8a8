//! One function per command, each turning a problem into a [`Report`].

use std::time::Instant;

use serde_json::{json, Map, Value};

use afcond::arcs::{
    self, af_arcs, covector_in_fiber, limit_covector, main_theorem_pipeline, normalization_arc,
    trotman_criterion, trotman_family, whitney_fiber_check, Arc, ArcOptions, DependenceStatus,
    DependenceVerdict, PipelineConclusion,
};
use afcond::conormal::{
    af_exact, conormal_space, join_point_set, projective_dimension, relative_conormal,
    verify_decomposition, SpaceWithFunction,
};
use afcond::groebner::{reduction_steps, reset_reduction_steps, with_config, GbConfig, Ideal};
use afcond::poly::{ratio, Rational};
use afcond::rees::{
    fiber_c_of_y, fiber_cy, rees_presentation, remark_identity_check, theorem_components_check,
    ComponentsVerdict,
};

use crate::problem::{ProblemError, ProblemFile};
use crate::report::{digest, Budget, Flags, Outcome, Report, SCHEMA};

/// Commands taking a problem file.
pub const FILE_COMMANDS: &[&str] = &[
    "gb",
    "dim",
    "conormal",
    "relconormal",
    "fiber",
    "join",
    "decompose",
    "af-exact",
    "af-arcs",
    "whitney-fiber",
    "rees-fiber",
    "remark-check",
    "components-check",
    "pipeline",
];

/// What a command reads.
#[derive(Clone, Debug)]
pub enum Input {
    File { name: String, bytes: Vec<u8> },
    Trotman([u32; 4]),
}

impl Input {
    fn name(&self) -> String {
        match self {
            Input::File { name, .. } => name.clone(),
            Input::Trotman(p) => format!("{} {} {} {}", p[0], p[1], p[2], p[3]),
        }
    }

    fn bytes(&self) -> Vec<u8> {
        match self {
            Input::File { bytes, .. } => bytes.clone(),
            Input::Trotman(_) => self.name().into_bytes(),
        }
    }
}

struct Done {
    outcome: Outcome,
    verdict: String,
    details: Map<String, Value>,
}

fn done(verdict: impl Into<String>, details: Map<String, Value>) -> Done {
    Done {
        outcome: Outcome::Verdict,
        verdict: verdict.into(),
        details,
    }
}

type Res = Result<Done, ProblemError>;

/// Runs `command` on `input` under the budgets in `flags`.
pub fn run(command: &str, input: &Input, flags: &Flags, timing: bool) -> Report {
    let start = Instant::now();
    reset_reduction_steps();
    let config = GbConfig {
        max_steps: flags.max_steps,
        ..GbConfig::builtin()
    };
    let result = with_config(config, || dispatch(command, input, flags));
    let steps = reduction_steps();
    let (outcome, verdict, details) = match result {
        Ok(d) => (d.outcome, d.verdict, d.details),
        Err(e) => {
            let outcome = match &e {
                ProblemError::Math(afcond::Error::BudgetExceeded { .. }) => Outcome::BudgetExceeded,
                _ => Outcome::InputError,
            };
            let mut m = Map::new();
            m.insert("error".into(), json!(e.to_string()));
            let verdict = match outcome {
                Outcome::BudgetExceeded => "budget exceeded",
                _ => "error",
            };
            (outcome, verdict.to_string(), m)
        }
    };
    Report {
        schema: SCHEMA,
        command: command.to_string(),
        input: Some(input.name()),
        input_digest: Some(digest(&input.bytes())),
        flags: *flags,
        outcome,
        verdict,
        details,
        budget: Budget {
            max_steps: flags.max_steps,
            reduction_steps: steps,
        },
        timing_ms: timing.then(|| start.elapsed().as_millis() as u64),
    }
}

fn dispatch(command: &str, input: &Input, flags: &Flags) -> Res {
    let opts = ArcOptions {
        precision: flags.precision,
        degree_bound: flags.arc_degree_bound,
        ..ArcOptions::default()
    };
    let problem = match input {
        Input::Trotman(p) => {
            if command != "trotman" {
                return Err(ProblemError::Math(afcond::Error::InvalidInput(format!(
                    "`{command}` needs a problem file"
                ))));
            }
            return trotman(*p, &opts);
        }
        Input::File { bytes, .. } => {
            let text = String::from_utf8(bytes.clone()).map_err(|_| {
                ProblemError::Math(afcond::Error::InvalidInput("input is not UTF-8".into()))
            })?;
            ProblemFile::parse(&text)?
        }
    };
    match command {
        "gb" => gb(&problem),
        "dim" => dim(&problem),
        "conormal" => conormal(&problem),
        "relconormal" => relconormal(&problem),
        "fiber" => fiber(&problem),
        "join" => join(&problem),
        "decompose" => decompose(&problem),
        "af-exact" => af_exact_cmd(&problem),
        "af-arcs" => af_arcs_cmd(&problem, &opts),
        "whitney-fiber" => whitney_cmd(&problem, &opts),
        "pipeline" => pipeline(&problem, &opts),
        "rees-fiber" => rees_fiber(&problem),
        "remark-check" => remark_check(&problem),
        "components-check" => components_check(&problem),
        other => Err(ProblemError::Math(afcond::Error::InvalidInput(format!(
            "unknown command `{other}`"
        )))),
    }
}

fn ideal_text(i: &Ideal) -> Result<String, ProblemError> {
    let gens = i.reduced_generators()?;
    if gens.is_empty() {
        return Ok("(0)".into());
    }
    let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    Ok(format!("({})", parts.join(", ")))
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| json!(r.to_string())).collect())
}

fn space(p: &ProblemFile) -> Result<SpaceWithFunction, ProblemError> {
    let s = p.space()?;
    s.validate_codim()?;
    Ok(s)
}

fn gb(p: &ProblemFile) -> Res {
    let i = p.ideal()?;
    let basis = i.groebner_basis()?;
    let polys: Vec<Value> = basis.polys().iter().map(|g| json!(g.to_string())).collect();
    let mut d = Map::new();
    d.insert("order".into(), json!(i.order().to_string()));
    d.insert("basis".into(), Value::Array(polys));
    d.insert("audit".into(), json!(basis.passes_audit()?));
    Ok(done(ideal_text(&i)?, d))
}

fn dim(p: &ProblemFile) -> Res {
    let i = p.ideal()?;
    let mut d = Map::new();
    d.insert("ideal".into(), json!(ideal_text(&i)?));
    Ok(done(i.dimension()?.to_string(), d))
}

fn conormal(p: &ProblemFile) -> Res {
    let s = space(p)?;
    let c = conormal_space(&s)?;
    let fib = c.fiber_at_origin()?;
    let dim = projective_dimension(&fib)?;
    let mut d = Map::new();
    d.insert("conormal".into(), json!(ideal_text(c.ideal())?));
    d.insert("fiber_at_origin".into(), json!(ideal_text(&fib)?));
    d.insert("fiber_dimension".into(), json!(dim));
    Ok(done(format!("fiber-dim {dim}"), d))
}

fn relconormal(p: &ProblemFile) -> Res {
    let s = space(p)?;
    let c = relative_conormal(&s)?;
    let fib = c.fiber_at_origin()?;
    let dim = projective_dimension(&fib)?;
    let mut d = Map::new();
    d.insert("relative_conormal".into(), json!(ideal_text(c.ideal())?));
    d.insert("fiber_at_origin".into(), json!(ideal_text(&fib)?));
    d.insert("fiber_dimension".into(), json!(dim));
    Ok(done(format!("fiber-dim {dim}"), d))
}

fn fiber(p: &ProblemFile) -> Res {
    let s = space(p)?;
    let point = p.point()?.unwrap_or_else(|| s.origin());
    let c = relative_conormal(&s)?;
    let fib = c.fiber_at(&point)?;
    let dim = projective_dimension(&fib)?;
    let mut d = Map::new();
    d.insert("point".into(), rationals(&point));
    d.insert("fiber".into(), json!(ideal_text(&fib)?));
    d.insert("fiber_dimension".into(), json!(dim));
    Ok(done(format!("fiber-dim {dim}"), d))
}

fn join(p: &ProblemFile) -> Res {
    let point = p.covector()?;
    let set = p.set()?;
    let j = join_point_set(&point, &set)?;
    let text = ideal_text(&j)?;
    let mut d = Map::new();
    d.insert("point".into(), rationals(&point));
    d.insert("set".into(), json!(ideal_text(&set)?));
    d.insert("join".into(), json!(text));
    Ok(done(text, d))
}

fn decompose(p: &ProblemFile) -> Res {
    let s = space(p)?;
    let r = verify_decomposition(&s)?;
    let mut d = Map::new();
    d.insert(
        "summary".into(),
        json!(format!(
            "decomposition {}: radical-equal = {}",
            if r.equal { "verified" } else { "refuted" },
            r.equal
        )),
    );
    d.insert("df_at_origin".into(), rationals(&r.df0));
    d.insert("lhs".into(), json!(ideal_text(&r.lhs)?));
    d.insert("exceptional".into(), json!(ideal_text(&r.exceptional)?));
    d.insert("conormal_fiber".into(), json!(ideal_text(&r.conormal)?));
    d.insert(
        "join".into(),
        match &r.join {
            Some(j) => json!(ideal_text(j)?),
            None => Value::Null,
        },
    );
    d.insert("rhs".into(), json!(ideal_text(&r.rhs)?));
    d.insert("degenerate_join".into(), json!(r.degenerate_join));
    d.insert("exceptional_in_lhs".into(), json!(r.exceptional_in_lhs));
    d.insert("join_in_lhs".into(), json!(r.join_in_lhs));
    d.insert("radical_equal".into(), json!(r.equal));
    Ok(done(r.equal.to_string(), d))
}

fn per_param(s: &SpaceWithFunction, values: &[bool]) -> Value {
    let mut m = Map::new();
    for (name, v) in s.param_names().iter().zip(values) {
        m.insert(name.clone(), json!(v));
    }
    Value::Object(m)
}

fn af_exact_cmd(p: &ProblemFile) -> Res {
    let s = space(p)?;
    let r = af_exact(&s)?;
    let mut d = Map::new();
    d.insert("fiber".into(), json!(ideal_text(&r.fiber)?));
    d.insert("at_origin".into(), per_param(&s, &r.at_origin));
    d.insert("along_y".into(), per_param(&s, &r.along_y));
    Ok(done(if r.holds() { "holds" } else { "fails" }, d))
}

/// User arcs followed by generated monomial arcs; generation is skipped
/// when the candidate set is too large.
fn with_generated(
    mut user: Vec<Arc>,
    generated: afcond::Result<Vec<Arc>>,
    d: &mut Map<String, Value>,
) -> Result<Vec<Arc>, ProblemError> {
    d.insert("user_arcs".into(), json!(user.len()));
    match generated {
        Ok(g) => {
            d.insert("generated_arcs".into(), json!(g.len()));
            user.extend(g);
        }
        Err(afcond::Error::InvalidInput(msg)) => {
            d.insert("generated_arcs".into(), json!(format!("skipped: {msg}")));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(user)
}

fn verdict_json(v: &DependenceVerdict) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), json!(v.status.as_str()));
    m.insert("arcs_tested".into(), json!(v.arcs_tested()));
    if let Some((i, arc)) = &v.witness {
        m.insert("witness_arc".into(), json!(arc.to_string()));
        if let Some(c) = v.certificates.iter().find(|c| c.arc == *i) {
            m.insert("pivot_orders".into(), json!(c.pivot_orders));
            let orders: Vec<String> = c.element_orders.iter().map(|o| o.to_string()).collect();
            m.insert("element_orders".into(), json!(orders));
            m.insert("failing_row".into(), json!(c.failing_row));
        }
    }
    let inconclusive = v
        .certificates
        .iter()
        .filter(|c| c.status == DependenceStatus::Inconclusive)
        .count();
    m.insert("inconclusive_arcs".into(), json!(inconclusive));
    Value::Object(m)
}

fn worst(vs: &[DependenceVerdict]) -> DependenceStatus {
    vs.iter()
        .map(|v| v.status)
        .max()
        .unwrap_or(DependenceStatus::Holds)
}

fn status_done(status: DependenceStatus, d: Map<String, Value>) -> Done {
    Done {
        outcome: match status {
            DependenceStatus::Inconclusive => Outcome::Inconclusive,
            _ => Outcome::Verdict,
        },
        verdict: status.as_str().to_string(),
        details: d,
    }
}

fn af_arcs_cmd(p: &ProblemFile, opts: &ArcOptions) -> Res {
    let s = space(p)?;
    let mut d = Map::new();
    let user = p.arcs(s.vars(), opts.precision)?;
    let arcs = with_generated(user, arcs::space_arcs(&s, opts), &mut d)?;
    let verdicts = af_arcs(&s, &arcs, opts)?;
    let exact = af_exact(&s)?;
    let mut per = Map::new();
    for (j, (name, v)) in s.param_names().iter().zip(&verdicts).enumerate() {
        let mut entry = verdict_json(v);
        if let (Some((_, arc)), Value::Object(m)) = (&v.witness, &mut entry) {
            match limit_covector(&s, arc)? {
                Some(cov) => {
                    m.insert("witness_covector".into(), rationals(&cov));
                    m.insert(
                        "covector_in_fiber".into(),
                        json!(covector_in_fiber(&exact.fiber, &cov)),
                    );
                }
                None => {
                    m.insert("witness_covector".into(), Value::Null);
                }
            }
        }
        if let Value::Object(m) = &mut entry {
            m.insert("af_exact".into(), json!(exact.at_origin[j]));
        }
        per.insert(name.clone(), entry);
    }
    d.insert("directions".into(), Value::Object(per));
    d.insert(
        "af_exact".into(),
        json!(if exact.holds() { "holds" } else { "fails" }),
    );
    let status = worst(&verdicts);
    let agree = match status {
        DependenceStatus::Holds => exact.holds(),
        DependenceStatus::Fails => !exact.holds(),
        DependenceStatus::Inconclusive => true,
    };
    d.insert("consistent_with_exact".into(), json!(agree));
    Ok(status_done(status, d))
}

fn fiber_arc_list(
    p: &ProblemFile,
    s: &SpaceWithFunction,
    opts: &ArcOptions,
    d: &mut Map<String, Value>,
) -> Result<Vec<Arc>, ProblemError> {
    let (z, _) = arcs::special_fiber(s);
    let user = p.fiber_arcs(&z, opts.precision)?;
    with_generated(user, arcs::fiber_arcs(s, opts), d)
}

fn whitney_cmd(p: &ProblemFile, opts: &ArcOptions) -> Res {
    let s = space(p)?;
    let mut d = Map::new();
    let arcs = fiber_arc_list(p, &s, opts, &mut d)?;
    let verdicts = whitney_fiber_check(&s, &arcs, opts)?;
    let mut per = Map::new();
    for (name, v) in s.param_names().iter().zip(&verdicts) {
        per.insert(name.clone(), verdict_json(v));
    }
    d.insert("directions".into(), Value::Object(per));
    Ok(status_done(worst(&verdicts), d))
}

fn pipeline(p: &ProblemFile, opts: &ArcOptions) -> Res {
    let s = space(p)?;
    let mut d = Map::new();
    let arcs = fiber_arc_list(p, &s, opts, &mut d)?;
    let r = main_theorem_pipeline(&s, &arcs, opts)?;
    let cmp = if r.dimension_ok { "<" } else { ">=" };
    d.insert(
        "dimension".into(),
        json!(format!("dim C(X,f)_0 = {} {cmp} n = {}", r.fiber_dim, r.n)),
    );
    let mut per = Map::new();
    for (name, v) in s.param_names().iter().zip(&r.whitney) {
        per.insert(name.clone(), verdict_json(v));
    }
    d.insert("whitney_fiber".into(), Value::Object(per));
    d.insert("join_term".into(), json!(!r.df_vanishes));
    d.insert("conclusion".into(), json!(r.conclusion.to_string()));
    d.insert(
        "af_exact".into(),
        match &r.af_exact {
            Some(a) => json!(if a.holds() { "holds" } else { "fails" }),
            None => json!("budget exceeded"),
        },
    );
    d.insert("consistent_with_exact".into(), json!(r.consistent));
    let (outcome, verdict) = match r.conclusion {
        PipelineConclusion::Certified => (Outcome::Verdict, "certified"),
        PipelineConclusion::DimensionHypothesisFails => {
            (Outcome::Inconclusive, "hypothesis-failure")
        }
        PipelineConclusion::WhitneyFails => (Outcome::Inconclusive, "whitney-fails"),
        PipelineConclusion::Inconclusive => (Outcome::Inconclusive, "inconclusive"),
    };
    Ok(Done {
        outcome,
        verdict: verdict.into(),
        details: d,
    })
}

fn base_point(p: &ProblemFile, k: usize) -> Result<Vec<Rational>, ProblemError> {
    let y0 = p.point()?.unwrap_or_else(|| vec![ratio(0, 1); k]);
    if y0.len() != k {
        return Err(ProblemError::Math(afcond::Error::InvalidInput(format!(
            "[point] needs {k} parameter values, got {}",
            y0.len()
        ))));
    }
    Ok(y0)
}

fn rees_fiber(p: &ProblemFile) -> Res {
    let r = p.rees_setup()?;
    let y0 = base_point(p, r.param_names().len())?;
    let pres = rees_presentation(&r)?;
    let c_y = fiber_cy(&r, &pres, &y0)?;
    let c_of_y = fiber_c_of_y(&r, &y0)?;
    let dim = projective_dimension(&c_y)?;
    let mut d = Map::new();
    d.insert("point".into(), rationals(&y0));
    d.insert("presentation".into(), json!(ideal_text(pres.ideal())?));
    d.insert("c_y".into(), json!(ideal_text(&c_y)?));
    d.insert("c_y_dimension".into(), json!(dim));
    d.insert("c_of_y".into(), json!(ideal_text(&c_of_y)?));
    d.insert(
        "c_of_y_dimension".into(),
        json!(projective_dimension(&c_of_y)?),
    );
    Ok(done(format!("fiber-dim {dim}"), d))
}

fn remark_check(p: &ProblemFile) -> Res {
    let r = p.rees_setup()?;
    let y0 = base_point(p, r.param_names().len())?;
    let rep = remark_identity_check(&r, &y0)?;
    let mut d = Map::new();
    d.insert("point".into(), rationals(&y0));
    d.insert("c_y".into(), json!(ideal_text(&rep.c_y)?));
    d.insert("c_of_y".into(), json!(ideal_text(&rep.c_of_y)?));
    d.insert(
        "c_y_saturated".into(),
        json!(ideal_text(&rep.c_y_saturated)?),
    );
    d.insert("c_of_y_in_c_y".into(), json!(rep.c_of_y_in_c_y));
    d.insert("equal_before_saturation".into(), json!(rep.equal_before));
    d.insert("equal_after_saturation".into(), json!(rep.equal_after));
    Ok(done(rep.equal_after.to_string(), d))
}

fn components_check(p: &ProblemFile) -> Res {
    let r = p.rees_setup()?;
    let rep = theorem_components_check(&r)?;
    let mut d = Map::new();
    d.insert(
        "central_fiber_dimension".into(),
        json!(rep.central_fiber_dim),
    );
    d.insert("r".into(), json!(rep.r));
    d.insert("hypothesis_holds".into(), json!(rep.hypothesis_holds));
    d.insert(
        "direct_summand_asserted".into(),
        json!(rep.direct_summand_asserted),
    );
    let opt = |i: &Option<Ideal>| -> Result<Value, ProblemError> {
        Ok(match i {
            Some(i) => json!(ideal_text(i)?),
            None => Value::Null,
        })
    };
    d.insert("c_0".into(), opt(&rep.c_0)?);
    d.insert("c_of_0".into(), opt(&rep.c_of_0)?);
    let (outcome, verdict) = match rep.verdict {
        ComponentsVerdict::Equal => (Outcome::Verdict, "equal"),
        ComponentsVerdict::Different => (Outcome::Verdict, "different"),
        ComponentsVerdict::Inconclusive => (Outcome::Inconclusive, "inconclusive"),
    };
    Ok(Done {
        outcome,
        verdict: verdict.into(),
        details: d,
    })
}

fn trotman(params: [u32; 4], opts: &ArcOptions) -> Res {
    let [a, b, c, d_] = params;
    let holds = trotman_criterion(a, b, c, d_)?;
    let verdict = if b > 1 {
        "holds (b>1)".to_string()
    } else {
        let d_r = Rational::from_integer(d_.into());
        let bound =
            (d_r.clone() - Rational::from_integer(1.into())).min(d_r - ratio(d_ as i64, a as i64));
        if holds {
            format!("holds (c > min(d-1, d-d/a) = {bound})")
        } else {
            format!("fails (c <= min(d-1, d-d/a) = {bound})")
        }
    };
    let s = trotman_family(a, b, c, d_)?;
    let arc = normalization_arc(a, d_, opts.precision)?;
    let v = whitney_fiber_check(&s, std::slice::from_ref(&arc), opts)?;
    let mut d = Map::new();
    d.insert("family".into(), json!(s.map().components()[0].to_string()));
    d.insert("normalization_arc".into(), json!(arc.to_string()));
    d.insert("arc_check".into(), verdict_json(&v[0]));
    d.insert("agree".into(), json!(v[0].holds() == holds));
    Ok(done(verdict, d))
}
