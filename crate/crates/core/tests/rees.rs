use std::time::Instant;

use afcond::conormal::{conormal_space, SpaceWithFunction};
use afcond::poly::{rat, PolyMap, Polynomial, VarList};
use afcond::rees::{
    as_conormal, fiber_c_of_y, fiber_cy, rees_presentation, remark_identity_check,
    theorem_components_check, ComponentsVerdict, PresentedModule, ReesSetup,
};

fn polys(vars: &VarList, texts: &[&str]) -> Vec<Polynomial> {
    texts
        .iter()
        .map(|t| Polynomial::parse(t, vars).unwrap())
        .collect()
}

fn jacobian_setup(params: &[&str], fiber: &[&str], g: &str, s: &[&str]) -> ReesSetup {
    let vars = VarList::new(params.iter().chain(fiber).copied()).unwrap();
    let map = PolyMap::parse(&vars, &[g]).unwrap();
    let names: Vec<&str> = vars.names().iter().map(String::as_str).collect();
    let m = PresentedModule::jacobian_module(&map, &names).unwrap();
    ReesSetup::new(
        &vars,
        params.len(),
        map.components().to_vec(),
        m,
        fiber.len() - 1,
        1,
    )
    .unwrap()
    .with_nonfree_locus(polys(&vars, s))
    .unwrap()
}

/// `M = (x, y) ⊆ O` on `C^2` with `y` the parameter: over `y = 0` the fiber
/// `C_0` has the whole `P^1` over `x = 0`, which `C(0)` lacks.
fn koszul_setup() -> ReesSetup {
    let vars = VarList::of(&["y", "x"]);
    let m = PresentedModule::parse(&vars, &[vec!["x"], vec!["y"]]).unwrap();
    ReesSetup::new(&vars, 1, Vec::new(), m, 1, 1)
        .unwrap()
        .with_nonfree_locus(polys(&vars, &["x", "y"]))
        .unwrap()
}

#[test]
fn free_module_has_no_relations() {
    let vars = VarList::of(&["y", "x"]);
    let m = PresentedModule::parse(&vars, &[vec!["1", "0"], vec!["0", "1"]]).unwrap();
    let r = ReesSetup::new(&vars, 1, Vec::new(), m, 1, 2)
        .unwrap()
        .with_nonfree_locus(polys(&vars, &["1"]))
        .unwrap();
    let pres = rees_presentation(&r).unwrap();
    assert!(pres.ideal().reduced_generators().unwrap().is_empty());
    assert!(r.generic_rank_consistent().unwrap());
    let rep = remark_identity_check(&r, &[rat(0)]).unwrap();
    assert!(rep.equal_before && rep.equal_after);
    let c = theorem_components_check(&r).unwrap();
    assert_eq!(c.verdict, ComponentsVerdict::Equal);
}

#[test]
fn ideal_of_two_elements_has_koszul_relation() {
    let r = koszul_setup();
    let pres = rees_presentation(&r).unwrap();
    let koszul = Polynomial::parse("x*T2 - y*T1", pres.ideal().vars()).unwrap();
    assert!(pres.ideal().contains(&koszul).unwrap());
    // kernel property: T_i ↦ Σ M_ji w_j kills every generator
    let ring = VarList::of(&["y", "x", "w"]);
    let images = polys(&ring, &["y", "x", "x*w", "y*w"]);
    for g in pres.ideal().generators() {
        assert!(g.compose(&images, &ring).is_zero());
    }
    assert!(r.nonfree_locus_consistent().unwrap().unwrap());
    // the Koszul relation persists over y0 = 2
    let c = fiber_c_of_y(&r, &[rat(2)]).unwrap();
    let rel = Polynomial::parse("x*T2 - 2*T1", c.vars()).unwrap();
    assert!(c.contains(&rel).unwrap());
}

#[test]
fn saturation_removes_vertical_component() {
    let r = koszul_setup();
    let rep = remark_identity_check(&r, &[rat(0)]).unwrap();
    assert!(rep.c_of_y_in_c_y);
    assert!(
        !rep.equal_before,
        "vertical component should make C_0 larger"
    );
    assert!(rep.equal_after);
    let c = theorem_components_check(&r).unwrap();
    assert_eq!(c.central_fiber_dim, 1);
    assert_eq!(c.r, 1);
    assert_eq!(c.verdict, ComponentsVerdict::Inconclusive);
}

#[test]
fn cusp_cylinder_fibers_agree() {
    let start = Instant::now();
    let r = jacobian_setup(&["u"], &["x", "y"], "y^2 - x^3", &["x", "y"]);
    let c = theorem_components_check(&r).unwrap();
    assert_eq!(c.central_fiber_dim, 0);
    assert_eq!(c.verdict, ComponentsVerdict::Equal);
    let rep = remark_identity_check(&r, &[rat(0)]).unwrap();
    assert!(rep.equal_after);
    eprintln!("cusp cylinder: {:.2?}", start.elapsed());
}

#[test]
fn deformed_cusp_fibers_agree() {
    let start = Instant::now();
    let r = jacobian_setup(&["u"], &["x", "y"], "y^2 - x^3 - u*x^4", &["x", "y"]);
    assert!(r.nonfree_locus_consistent().unwrap().unwrap());
    let c = theorem_components_check(&r).unwrap();
    assert_eq!(c.central_fiber_dim, 0);
    assert_eq!(c.verdict, ComponentsVerdict::Equal);
    let rep = remark_identity_check(&r, &[rat(0)]).unwrap();
    assert!(rep.equal_after);
    eprintln!("deformed cusp: {:.2?}", start.elapsed());
}

#[test]
fn trotman_member_remark_identity() {
    let r = jacobian_setup(&["y"], &["v", "w"], "w^2 - y*v - v^3", &["v", "w", "y"]);
    let pres = rees_presentation(&r).unwrap();
    let c_y = fiber_cy(&r, &pres, &[rat(0)]).unwrap();
    let c_of_y = fiber_c_of_y(&r, &[rat(0)])
        .unwrap()
        .extend(c_y.vars())
        .unwrap();
    assert!(c_of_y.radical_contains(&c_y).unwrap());
    let rep = remark_identity_check(&r, &[rat(0)]).unwrap();
    assert!(rep.equal_after);
}

/// The Rees algebra of `JM(X)` is the conormal space under `T_j ↔ ξ_j`.
#[test]
fn jacobian_rees_matches_conormal() {
    for (g, vars) in [
        ("x^3 - y^2", vec!["x", "y"]),
        ("x^2 - z*y^2", vec!["x", "y", "z"]),
    ] {
        let s = SpaceWithFunction::parse(&[], &vars, &[g], "x", 1).unwrap();
        let c = conormal_space(&s).unwrap();
        let r = jacobian_setup(&[], &vars, g, &["1"]);
        let pres = rees_presentation(&r).unwrap();
        let renamed = as_conormal(&pres, c.covector_vars()).unwrap();
        assert!(renamed.ideal().radical_equal(c.ideal()).unwrap(), "{g}");
    }
}

#[test]
fn empty_fiber_off_the_family() {
    // X = {y = 1} has nothing over y = 0.
    let vars = VarList::of(&["y", "x"]);
    let m = PresentedModule::parse(&vars, &[vec!["x"]]).unwrap();
    let r = ReesSetup::new(&vars, 1, polys(&vars, &["y - 1"]), m, 1, 1).unwrap();
    let pres = rees_presentation(&r).unwrap();
    let fib = fiber_cy(&r, &pres, &[rat(0)]).unwrap();
    assert!(fib.is_unit().unwrap());
}
