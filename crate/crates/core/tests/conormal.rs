use std::time::Instant;

use afcond::conormal::{
    af_exact, conormal_by_multipliers, conormal_space, exceptional_image, join_point_set,
    relative_conormal, verify_decomposition, SpaceWithFunction,
};
use afcond::groebner::Ideal;
use afcond::poly::{rat, VarList};

fn space(params: &[&str], fiber: &[&str], g: &[&str], f: &str, codim: usize) -> SpaceWithFunction {
    SpaceWithFunction::parse(params, fiber, g, f, codim).unwrap()
}

fn sorted(i: &Ideal) -> Vec<String> {
    let mut v: Vec<String> = i
        .reduced_generators()
        .unwrap()
        .iter()
        .map(|p| p.to_string())
        .collect();
    v.sort();
    v
}

fn check_decomposition(name: &str, s: &SpaceWithFunction) -> afcond::conormal::DecompositionReport {
    let start = Instant::now();
    let r = verify_decomposition(s).unwrap();
    eprintln!(
        "{name}: lhs {} rhs {} equal={} ({:.2?})",
        r.lhs,
        r.rhs,
        r.equal,
        start.elapsed()
    );
    assert!(
        r.exceptional_in_lhs,
        "{name}: exceptional image not in C(X,f)_0"
    );
    assert!(r.join_in_lhs, "{name}: join not in C(X,f)_0");
    assert!(r.equal, "{name}: decomposition fails");
    r
}

/// Parametrization-limit oracle: along the cusp arc (t^2, t^3) the gradient
/// (3x^2, -2y) becomes (3t^4, -2t^3), whose direction tends to (0, 1).
#[test]
fn cusp_conormal_fiber_is_dy() {
    let s = space(&[], &["x", "y"], &["x^3 - y^2"], "y", 1);
    let c = conormal_space(&s).unwrap();
    let fiber = c.fiber_at_origin().unwrap();
    let dy = Ideal::parse(fiber.vars(), &["xi_x"]).unwrap();
    assert!(fiber.radical_equal(&dy).unwrap());
    assert_eq!(c.projective_fiber_dimension(&s.origin()).unwrap(), 0);
}

#[test]
fn minor_and_multiplier_conormals_agree() {
    for (g, vars) in [
        ("x^3 - y^2", vec!["x", "y"]),
        ("x^2 - z*y^2", vec!["x", "y", "z"]),
        ("x*y", vec!["x", "y"]),
    ] {
        let s = space(&[], &vars, &[g], "x", 1);
        let a = conormal_space(&s).unwrap();
        let b = conormal_by_multipliers(&s).unwrap();
        assert!(a.ideal().radical_equal(b.ideal()).unwrap(), "{g}");
        let fa = a.fiber_at_origin().unwrap();
        let fb = b.fiber_at_origin().unwrap();
        assert!(fa.radical_equal(&fb).unwrap(), "{g}");
    }
}

/// Direction-sweep oracle: on the line through 0 with direction (a, b), the
/// tangent covector of f = x^2 + y^2 is proportional to (a, b), so every
/// point of P^1 is a limit and the fiber over 0 is all of P^1.
#[test]
fn sum_of_squares_relative_fiber_is_everything() {
    let s = space(&[], &["x", "y"], &[], "x^2 + y^2", 0);
    let r = relative_conormal(&s).unwrap();
    assert!(r.fiber_at_origin().unwrap().is_zero());
    assert_eq!(r.projective_fiber_dimension(&s.origin()).unwrap(), 1);
    let e = exceptional_image(&s).unwrap();
    assert!(e.fiber_at_origin().unwrap().is_zero());
}

#[test]
fn linear_function_has_no_exceptional_divisor() {
    let s = space(&[], &["x", "y"], &[], "x", 0);
    let e = exceptional_image(&s).unwrap();
    assert!(e.fiber_at_origin().unwrap().is_unit().unwrap());
    let r = check_decomposition("plane, f=x", &s);
    assert!(r.degenerate_join);
    assert_eq!(sorted(&r.lhs), vec!["xi_y"]);
}

#[test]
fn decomposition_sum_of_squares() {
    let s = space(&[], &["x", "y"], &[], "x^2 + y^2", 0);
    let r = check_decomposition("plane, f=x^2+y^2", &s);
    assert!(r.join.is_none());
}

#[test]
fn decomposition_whitney_umbrella() {
    let s = space(&[], &["x", "y", "z"], &["x^2 - z*y^2"], "z", 1);
    let r = check_decomposition("umbrella, f=z", &s);
    assert!(r.join.is_some());
}

/// The branch where `C(X)_0` is the single point `⟨df(0)⟩`.
#[test]
fn decomposition_cusp_degenerate_branch() {
    let s = space(&[], &["x", "y"], &["x^3 - y^2"], "y", 1);
    let r = check_decomposition("cusp, f=y", &s);
    assert!(r.degenerate_join);
    // ⟨dy⟩ must come from the exceptional image.
    let dy = Ideal::parse(r.exceptional.vars(), &["xi_x"]).unwrap();
    assert!(dy.radical_contains(&r.exceptional).unwrap());
}

#[test]
fn decomposition_cusp_cylinder_degenerate_branch() {
    let s = space(&[], &["x", "y", "u"], &["x^3 - y^2"], "y", 1);
    let r = check_decomposition("cusp cylinder, f=y", &s);
    assert!(r.degenerate_join);
    assert_eq!(sorted(&r.lhs), vec!["xi_u"]);
    let dy = Ideal::parse(r.exceptional.vars(), &["xi_x", "xi_u"]).unwrap();
    assert!(dy.radical_contains(&r.exceptional).unwrap());
}

#[test]
fn decomposition_cusp_transverse_function() {
    let s = space(&[], &["x", "y"], &["x^3 - y^2"], "x", 1);
    check_decomposition("cusp, f=x", &s);
}

#[test]
fn decomposition_node() {
    let s = space(&[], &["x", "y"], &["x*y"], "x + y", 1);
    check_decomposition("node, f=x+y", &s);
}

/// Two-point join oracle in P^1: the line through two distinct points is
/// everything.
#[test]
fn join_of_distinct_points_in_p1() {
    let v = VarList::of(&["a", "b"]);
    let dy = Ideal::parse(&v, &["a"]).unwrap();
    let j = join_point_set(&[rat(1), rat(0)], &dy).unwrap();
    assert!(j.reduced_generators().unwrap().is_empty());
}

#[test]
fn af_exact_product_family_holds() {
    let s = space(&["y"], &["v", "w"], &["w^2 - v^3"], "v", 1);
    let r = af_exact(&s).unwrap();
    assert!(r.holds());
    assert!(r.holds_along_y());
}

#[test]
fn af_exact_detects_failure() {
    let s = space(&["y"], &["z"], &[], "z*(z - y)", 0);
    let r = af_exact(&s).unwrap();
    assert!(!r.holds());
}
