//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use afcond::arcs::{
    af_arcs, limit_covector, normalization_arc, space_arcs, trotman_criterion, trotman_family,
    whitney_fiber_check, ArcOptions, DependenceStatus,
};
use afcond::conormal::{
    af_exact, conormal_by_multipliers, exceptional_image, join_point_set, projective_dimension,
    relative_conormal, verify_decomposition,
};
use afcond::groebner::Ideal;
use afcond::poly::{ratio, Monomial, Polynomial, Rational, VarList};
use afcond::rees::{fiber_c_of_y, fiber_cy, rees_presentation, remark_identity_check};
use afcond_cli::commands::{run, Input};
use afcond_cli::corpus::{parse_expectations, run_corpus};
use afcond_cli::problem::ProblemFile;
use afcond_cli::report::{Flags, Outcome};

type Check = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Corpus problems whose sidecar lists `command`.
fn corpus_with(command: &str) -> Vec<(String, ProblemFile)> {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "prob"))
        .collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| {
            let expect = fs::read_to_string(p.with_extension("expect")).unwrap_or_default();
            parse_expectations(&expect)
                .unwrap_or_default()
                .iter()
                .any(|e| e.command == command)
        })
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = fs::read_to_string(&p).unwrap();
            (name, ProblemFile::parse(&text).unwrap())
        })
        .collect()
}

fn err<E: std::fmt::Display>(name: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{name}: {e}")
}

fn decomposition() -> Check {
    let mut cases = 0;
    let (mut m2, mut singular, mut degenerate) = (false, false, false);
    for (name, p) in corpus_with("decompose") {
        let s = p.space().map_err(err(&name))?;
        let start = Instant::now();
        let r = verify_decomposition(&s).map_err(err(&name))?;
        let took = start.elapsed();
        if !r.equal {
            return Err(format!("{name}: LHS and RHS differ"));
        }
        if took > Duration::from_secs(60) {
            return Err(format!("{name}: took {took:.1?}"));
        }
        let df_zero = r.df0.iter().all(Zero::is_zero);
        let origin = s.origin();
        let x_singular = !s.map().components().is_empty()
            && s.map()
                .components()
                .iter()
                .all(|g| (0..s.vars().len()).all(|i| g.derivative(i).evaluate(&origin).is_zero()));
        m2 |= df_zero;
        singular |= !df_zero && x_singular;
        degenerate |= r.degenerate_join;
        cases += 1;
    }
    if cases < 5 || !(m2 && singular && degenerate) {
        return Err(format!(
            "{cases} cases; f in m^2: {m2}, singular X with df(0) != 0: {singular}, degenerate join: {degenerate}"
        ));
    }
    Ok(format!(
        "{cases} cases radical-equal, all three regimes present"
    ))
}

/// The easy containments, with `C(X)_0` from the multiplier construction
/// rather than from minors.
fn containments() -> Check {
    let mut cases = 0;
    for (name, p) in corpus_with("decompose")
        .into_iter()
        .chain(corpus_with("af-exact"))
    {
        let s = p.space().map_err(err(&name))?;
        let lhs = relative_conormal(&s)
            .and_then(|c| c.fiber_at_origin())
            .map_err(err(&name))?;
        let exc = exceptional_image(&s)
            .and_then(|c| c.fiber_at_origin())
            .map_err(err(&name))?;
        if !exc.radical_contains(&lhs).map_err(err(&name))? {
            return Err(format!("{name}: exceptional image not inside C(X,f)_0"));
        }
        let df0 = s.df_at_origin();
        if df0.iter().any(|c| !c.is_zero()) {
            let cx = conormal_by_multipliers(&s)
                .and_then(|c| c.fiber_at_origin())
                .map_err(err(&name))?;
            let join = join_point_set(&df0, &cx).map_err(err(&name))?;
            if !join.radical_contains(&lhs).map_err(err(&name))? {
                return Err(format!("{name}: df(0) * C(X)_0 not inside C(X,f)_0"));
            }
        }
        cases += 1;
    }
    Ok(format!("both containments on {cases} cases"))
}

fn trotman_grid() -> Check {
    let start = Instant::now();
    let opts = ArcOptions::default();
    let mut cases = 0;
    for a in 2..=6 {
        for d in 2..=6 {
            let arc = normalization_arc(a, d, opts.precision).map_err(err("arc"))?;
            for b in 1..=2 {
                for c in 1..=4 {
                    let label = format!("({a},{b},{c},{d})");
                    let expected = trotman_criterion(a, b, c, d).map_err(err(&label))?;
                    let s = trotman_family(a, b, c, d).map_err(err(&label))?;
                    let v = whitney_fiber_check(&s, std::slice::from_ref(&arc), &opts)
                        .map_err(err(&label))?;
                    let got = match v[0].status {
                        DependenceStatus::Holds => true,
                        DependenceStatus::Fails => false,
                        DependenceStatus::Inconclusive => {
                            return Err(format!("{label}: inconclusive"))
                        }
                    };
                    if got != expected {
                        return Err(format!("{label}: arc says {got}, closed form {expected}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(300) {
        return Err(format!("took {took:.1?}"));
    }
    Ok(format!("{cases} parameter choices agree in {took:.1?}"))
}

fn remark_identity() -> Check {
    let mut cases = 0;
    let mut vertical = false;
    for (name, p) in corpus_with("remark-check") {
        let r = p.rees_setup().map_err(err(&name))?;
        let y0 = vec![Rational::zero(); r.param_names().len()];
        let rep = remark_identity_check(&r, &y0).map_err(err(&name))?;
        if !rep.equal_after {
            return Err(format!("{name}: saturated C_y differs from C(y)"));
        }
        vertical |= !rep.equal_before;
        cases += 1;
    }
    if cases < 3 || !vertical {
        return Err(format!(
            "{cases} cases, vertical component seen: {vertical}"
        ));
    }
    Ok(format!(
        "{cases} module cases, saturation removes a vertical component"
    ))
}

fn components() -> Check {
    let mut equal = 0;
    for (name, p) in corpus_with("components-check") {
        let r = p.rees_setup().map_err(err(&name))?;
        let pres = rees_presentation(&r).map_err(err(&name))?;
        let origin = vec![Rational::zero(); r.vars().len()];
        let central = pres.fiber_at(&origin).map_err(err(&name))?;
        let dim = projective_dimension(&central).map_err(err(&name))?;
        if dim >= r.r() {
            continue;
        }
        let y0 = vec![Rational::zero(); r.param_names().len()];
        let c0 = fiber_cy(&r, &pres, &y0).map_err(err(&name))?;
        let c_of_0 = fiber_c_of_y(&r, &y0)
            .and_then(|c| c.extend(c0.vars()))
            .map_err(err(&name))?;
        if !c0.radical_equal(&c_of_0).map_err(err(&name))? {
            return Err(format!("{name}: C_0 and C(0) differ"));
        }
        equal += 1;
    }
    if equal < 2 {
        return Err(format!("only {equal} families satisfy the hypothesis"));
    }
    let bytes = fs::read(corpus_dir().join("pipeline_fat_fiber.prob")).unwrap();
    let input = Input::File {
        name: "pipeline_fat_fiber.prob".into(),
        bytes,
    };
    let r = run("pipeline", &input, &Flags::default(), false);
    if r.outcome != Outcome::Inconclusive {
        return Err(format!("hypothesis-violating pipeline gave {}", r.verdict));
    }
    Ok(format!(
        "{equal} families with C_0 = C(0); fat fiber pipeline inconclusive ({})",
        r.verdict
    ))
}

fn af_consistency() -> Check {
    let opts = ArcOptions::default();
    let mut cases = 0;
    let mut witness = None;
    for (name, p) in corpus_with("af-arcs")
        .into_iter()
        .filter(|(n, _)| n.starts_with("af_"))
    {
        let s = p.space().map_err(err(&name))?;
        let exact = af_exact(&s).map_err(err(&name))?;
        let arcs = space_arcs(&s, &opts).map_err(err(&name))?;
        let verdicts = af_arcs(&s, &arcs, &opts).map_err(err(&name))?;
        for (j, v) in verdicts.iter().enumerate() {
            let ok = match v.status {
                DependenceStatus::Holds => exact.at_origin[j],
                DependenceStatus::Fails => !exact.at_origin[j],
                DependenceStatus::Inconclusive => false,
            };
            if !ok {
                return Err(format!(
                    "{name}: arcs {} but exact {}",
                    v.status.as_str(),
                    exact.at_origin[j]
                ));
            }
            if let (None, Some((_, arc))) = (&witness, &v.witness) {
                if let Some(cov) = limit_covector(&s, arc).map_err(err(&name))? {
                    let shown: Vec<String> = cov.iter().map(|c| c.to_string()).collect();
                    witness = Some(format!(
                        "{name}: arc {arc}, covector [{}]",
                        shown.join(", ")
                    ));
                }
            }
        }
        cases += 1;
    }
    match witness {
        Some(w) if cases >= 4 => Ok(format!("{cases} families agree; witness {w}")),
        _ => Err(format!(
            "{cases} families, witness found: {}",
            witness.is_some()
        )),
    }
}

fn random_poly(rng: &mut StdRng, vars: &VarList, point: &[Rational]) -> Polynomial {
    random_poly_in(rng, vars, point, 3, 2)
}

/// A sum of up to `max_terms` random terms, shifted to vanish at `point`.
fn random_poly_in(
    rng: &mut StdRng,
    vars: &VarList,
    point: &[Rational],
    max_terms: usize,
    max_exp: u32,
) -> Polynomial {
    let terms = rng.gen_range(1..=max_terms);
    let p = Polynomial::from_terms(
        vars,
        (0..terms).map(|_| {
            let e: Vec<u32> = (0..vars.len())
                .map(|_| rng.gen_range(0..=max_exp))
                .collect();
            (
                Monomial(e),
                ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
            )
        }),
    );
    let at = p.evaluate(point);
    p - Polynomial::constant(vars, at)
}

fn groebner_case(rng: &mut StdRng, vars: &VarList) -> Result<(), String> {
    let point: Vec<Rational> = (0..3).map(|_| ratio(rng.gen_range(-2..=2), 1)).collect();
    let gens: Vec<Polynomial> = (0..rng.gen_range(1..=2))
        .map(|_| random_poly(rng, vars, &point))
        .collect();
    let i = Ideal::new(vars, gens).map_err(err("ideal"))?;
    let shown = format!(
        "{:?}",
        i.generators()
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
    );
    let fail = |what: &str| format!("{what} on {shown}");
    if !i
        .groebner_basis()
        .and_then(|b| b.passes_audit())
        .map_err(err(&shown))?
    {
        return Err(fail("audit"));
    }
    let e = i.eliminate(&["x"]).map_err(err(&shown))?;
    for g in e.generators() {
        if !i
            .contains(&g.embed(vars).map_err(err(&shown))?)
            .map_err(err(&shown))?
        {
            return Err(fail("elimination escapes the ideal"));
        }
        if !g.evaluate(&point[1..]).is_zero() {
            return Err(fail("elimination misses the projected point"));
        }
    }
    let linear = Polynomial::from_terms(
        vars,
        (0..3).map(|k| (Monomial::var(3, k), ratio(rng.gen_range(-2..=2), 1))),
    );
    if !linear.is_zero() {
        let j = Ideal::new(vars, vec![linear]).map_err(err(&shown))?;
        let s = i.saturate(&j).map_err(err(&shown))?;
        if !s.contains_ideal(&i).map_err(err(&shown))? {
            return Err(fail("saturation shrinks"));
        }
        let twice = s.saturate(&j).map_err(err(&shown))?;
        if !(twice.contains_ideal(&s).map_err(err(&shown))?
            && s.contains_ideal(&twice).map_err(err(&shown))?)
        {
            return Err(fail("saturation not idempotent"));
        }
    }
    let other =
        Ideal::new(vars, vec![random_poly_in(rng, vars, &point, 2, 1)]).map_err(err(&shown))?;
    let prod = i.product(&other).map_err(err(&shown))?;
    let meet = i.intersect(&other).map_err(err(&shown))?;
    let eq = |a: &Ideal, b: &Ideal| a.radical_equal(b).map_err(err(&shown));
    if !(eq(&i, &i)? && eq(&prod, &meet)? && eq(&meet, &prod)?) {
        return Err(fail("radical equality not reflexive or symmetric"));
    }
    if eq(&prod, &i)? && eq(&i, &meet)? && !eq(&prod, &meet)? {
        return Err(fail("radical equality not transitive"));
    }
    let hyper = random_poly(rng, vars, &point);
    if !hyper.is_zero() {
        let d = Ideal::new(vars, vec![hyper]).and_then(|h| h.dimension());
        if d.map_err(err(&shown))? != 2 {
            return Err(fail("hypersurface dimension"));
        }
    }
    Ok(())
}

/// Rank of a small integer matrix by fraction-free elimination.
fn rank(mut rows: Vec<Vec<i64>>) -> usize {
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let (a, b) = (rows[r][col], rows[i][col]);
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(pivot) {
                    *x = *x * a - p * b;
                }
            }
        }
        r += 1;
    }
    r
}

fn linear_case(rng: &mut StdRng, vars: &VarList) -> Result<(), String> {
    let rows: Vec<Vec<i64>> = (0..rng.gen_range(1..=3))
        .map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect())
        .collect();
    let gens = rows
        .iter()
        .map(|row| {
            Polynomial::from_terms(
                vars,
                row.iter()
                    .enumerate()
                    .map(|(k, &c)| (Monomial::var(3, k), ratio(c, 1))),
            )
        })
        .collect();
    let d = Ideal::new(vars, gens)
        .and_then(|i| i.dimension())
        .map_err(err("linear"))?;
    let expected = 3 - rank(rows.clone()) as i64;
    if d != expected {
        return Err(format!(
            "linear space {rows:?}: dimension {d}, expected {expected}"
        ));
    }
    Ok(())
}

fn groebner_soundness() -> Check {
    let start = Instant::now();
    let vars = VarList::of(&["x", "y", "z"]);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        groebner_case(&mut rng, &vars)?;
        linear_case(&mut rng, &vars)?;
    }
    let took = start.elapsed();
    if took > Duration::from_secs(120) {
        return Err(format!("took {took:.1?}"));
    }
    Ok(format!("200 randomized cases in {took:.1?}"))
}

fn determinism() -> Check {
    let flags = Flags::default();
    let a = run_corpus(&corpus_dir(), &flags, 4, false);
    let b = run_corpus(&corpus_dir(), &flags, 1, false);
    if a.outcome != Outcome::Verdict {
        return Err(format!("corpus did not pass: {}", a.verdict));
    }
    if a.to_json() != b.to_json() || a.to_text() != b.to_text() {
        return Err("reports differ between runs".into());
    }
    Ok(format!("two corpus runs byte-identical ({})", a.verdict))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("decomposition is radical-equal", decomposition),
        ("easy containments", containments),
        ("Trotman grid", trotman_grid),
        ("saturation identity for modules", remark_identity),
        ("central fiber components", components),
        ("A_f exact and arc methods agree", af_consistency),
        ("Groebner engine soundness", groebner_soundness),
        ("corpus determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("PASS criterion {}: {title}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
