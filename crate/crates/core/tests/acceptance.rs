//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p porder --test acceptance -- --nocapture --test-threads 1`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use porder::schema::named_group;
use porder::strata::{induced_poisson, skew_fiber, stabilizer_strata, verify_leaf_claims};
use porder::{
    build_sra, build_weyl, invariant_generators, parse_poly, CoreComparison, Ideal, MatrixGroup, Poly, PoissonStructure,
    PolyRing, RootSystemSpec, Scalar, SraEngine, TParam,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    id: u32,
    title: &'static str,
    limit: Duration,
    start: Instant,
    failures: Vec<String>,
}

impl Verdict {
    fn new(id: u32, title: &'static str, limit_secs: u64) -> Verdict {
        Verdict { id, title, limit: Duration::from_secs(limit_secs), start: Instant::now(), failures: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.limit {
            self.failures.push(format!("took {elapsed:?}, limit {:?}", self.limit));
        }
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2}: {} [{} ms]", self.id, self.title, elapsed.as_millis());
        for f in &self.failures {
            println!("      - {f}");
        }
        assert!(self.failures.is_empty(), "criterion {} failed: {:?}", self.id, self.failures);
    }
}

fn q(v: i64) -> Scalar {
    Scalar::from_int(v)
}

fn pt(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| q(x)).collect()
}

fn structure(brackets: &[(&str, &str, &str)]) -> PoissonStructure {
    let ring = PolyRing::rational(&["x", "y", "z"]);
    PoissonStructure::from_brackets(&ring, Ideal::zero(&ring), brackets).unwrap()
}

fn dixmier_moeglin() -> PoissonStructure {
    structure(&[("x", "z", "x"), ("y", "z", "y")])
}

fn alpha_structure() -> PoissonStructure {
    structure(&[("x", "z", "-x"), ("y", "z", "y")])
}

fn ideal(p: &PoissonStructure, gens: &[&str]) -> Ideal {
    Ideal::parse(p.ring(), gens).unwrap()
}

fn engine(group: &str, t: TParam, c: i64) -> SraEngine {
    let g = named_group(group).unwrap();
    let classes = g.symplectic_reflections().unwrap().iter().map(|r| r.class + 1).max().unwrap_or(0);
    let cmap: BTreeMap<usize, Scalar> = (0..classes).map(|k| (k, q(c))).collect();
    build_sra(&g, t, &cmap).unwrap()
}

fn z2() -> MatrixGroup {
    MatrixGroup::cyclic(2)
}

fn random_nonzero_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..n).map(|_| q(rng.gen_range(-5..=5))).collect();
        if v.iter().any(|s| !s.is_zero()) {
            return v;
        }
    }
}

#[test]
fn criterion_01_dixmier_moeglin() {
    let mut v = Verdict::new(1, "Dixmier-Moeglin casimirs and Poisson ideals", 5);
    let p = dixmier_moeglin();
    let cas: Vec<String> = p.casimirs(6).unwrap().iter().map(ToString::to_string).collect();
    v.check(format!("casimirs(6) = {cas:?}, expected [\"1\"]"), cas == ["1"]);
    let mut poisson = vec![vec!["y".to_string()], vec!["x".to_string(), "y".to_string()]];
    for a in [0, 1, 2, -3] {
        poisson.push(vec![format!("x - ({a})*y")]);
    }
    for gens in &poisson {
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let ok = p.is_poisson_ideal(&ideal(&p, &refs)).unwrap();
        v.check(format!("{gens:?} should be Poisson"), ok);
    }
    for gens in [["z"], ["x - 1"]] {
        let ok = p.is_poisson_ideal(&ideal(&p, &gens)).unwrap();
        v.check(format!("{gens:?} should not be Poisson"), !ok);
    }
    v.finish();
}

#[test]
fn criterion_02_poisson_cores() {
    let mut v = Verdict::new(2, "Poisson cores of points", 30);
    let p = dixmier_moeglin();
    for (a, b, c) in [(1, 1, 0), (2, 2, 7), (3, 1, -1)] {
        let r = p.core_at_point(&pt(&[a, b, c])).unwrap();
        let want = ideal(&p, &[&format!("x - ({a}/{b})*y")]);
        v.check(format!("({a},{b},{c}) core certified"), r.certified);
        v.check(
            format!("({a},{b},{c}) core {:?} equals <x - (a/b) y>", r.core.canonical_strings().unwrap()),
            r.core.equals(&want).unwrap(),
        );
    }
    let r = p.core_at_point(&pt(&[0, 0, 5])).unwrap();
    v.check("(0,0,5) core certified", r.certified);
    v.check(
        format!("(0,0,5) core {:?} equals <x, y>", r.core.canonical_strings().unwrap()),
        r.core.equals(&ideal(&p, &["x", "y"])).unwrap(),
    );
    v.finish();
}

#[test]
fn criterion_03_alpha_leaves() {
    let mut v = Verdict::new(3, "alpha-leaves: x y is a Casimir and cores are its level sets", 30);
    let p = alpha_structure();
    let xy = parse_poly("x*y", p.ring()).unwrap();
    let cas = p.casimirs(2).unwrap();
    v.check("x*y lies in the degree-2 Casimir space", {
        let z = Poly::var(p.ring(), 2);
        p.bracket(&xy, &z).unwrap().is_zero() && cas.iter().any(|c| c == &xy)
    });
    for point in [[2, 3, 1], [-1, 5, 2], [4, -2, -3]] {
        let r = p.core_at_point(&pt(&point)).unwrap();
        let c = point[0] * point[1];
        let want = ideal(&p, &[&format!("x*y - ({c})")]);
        v.check(format!("{point:?} core certified"), r.certified);
        v.check(
            format!("{point:?} core {:?} equals <x y - {c}>", r.core.canonical_strings().unwrap()),
            r.core.equals(&want).unwrap(),
        );
    }
    v.finish();
}

#[test]
fn criterion_04_quotient_stratification() {
    let mut v = Verdict::new(4, "V/Gamma stratification for {+-I} on C^2", 60);
    let g = z2();
    let pres = invariant_generators(&g).unwrap();
    let strata = stabilizer_strata(&g, &pres).unwrap();
    v.check(format!("{} strata, expected 2", strata.len()), strata.len() == 2);
    let closed = strata.iter().find(|s| s.subgroup.order == 2);
    let irrelevant = Ideal::parse(&pres.target, &["A", "B", "C"]).unwrap();
    v.check(
        "J(Gamma) is the irrelevant ideal <A, B, C>",
        closed.is_some_and(|s| s.j_ideal.equals(&irrelevant).unwrap()),
    );
    let bracket = induced_poisson(&g, &pres).unwrap();
    v.check("rank 0 at the cone point", bracket.rank_at_point(&pt(&[0, 0, 0])).unwrap() == 0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut smooth = Vec::new();
    for _ in 0..5 {
        let w = pres.project(&random_nonzero_vector(&mut rng, 2)).unwrap();
        let r = bracket.rank_at_point(&w).unwrap();
        v.check(format!("rank {r} at smooth point {w:?}, expected 2"), r == 2);
        smooth.push(w);
    }
    for w in &smooth[1..] {
        let same = bracket.same_core(&smooth[0], w).unwrap();
        v.check(format!("same core within the open stratum ({same:?})"), same == CoreComparison::Same);
    }
    let across = bracket.same_core(&smooth[0], &pt(&[0, 0, 0])).unwrap();
    v.check(format!("different cores across strata ({across:?})"), across == CoreComparison::Different);
    let report = verify_leaf_claims(&g, &pres, 5, 4).unwrap();
    v.check("leaf report passes", report.pass);
    v.finish();
}

#[test]
fn criterion_05_fiber_jump() {
    let mut v = Verdict::new(5, "fiber jump of the skew group algebra", 60);
    let g = z2();
    let pres = invariant_generators(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let x = random_nonzero_vector(&mut rng, 2);
        let inv = skew_fiber(&g, &pres, &x).unwrap().invariants().unwrap();
        v.check(format!("generic fiber at {x:?}: {:?}, expected (4,1,0,4)", inv.as_tuple()), inv.as_tuple() == (4, 1, 0, 4));
    }
    let origin = skew_fiber(&g, &pres, &pt(&[0, 0])).unwrap().invariants().unwrap();
    v.check(format!("origin fiber dim {}, expected 6", origin.dim), origin.dim == 6);
    v.check(format!("origin radical dim {}, expected 4", origin.radical_dim), origin.radical_dim == 4);
    v.finish();
}

#[test]
fn criterion_06_weyl_census() {
    let mut v = Verdict::new(6, "Weyl parabolic versus eigenvalue census", 60);
    for sys in ["A1", "A2", "A3", "A2xA1"] {
        let w = build_weyl(&RootSystemSpec::parse(sys).unwrap(), 1152).unwrap();
        let t = w.compare_census();
        v.check(format!("{sys}: p {:?} vs e {:?} should agree", t.parabolic(), t.elements()), t.agree);
    }
    let b2 = build_weyl(&RootSystemSpec::parse("B2").unwrap(), 1152).unwrap().compare_census();
    let bad: Vec<usize> = b2.rows.iter().filter(|r| !r.equal).map(|r| r.k).collect();
    v.check(format!("B2 disagrees exactly at k = 2 (got {bad:?})"), bad == [2]);
    let row2 = b2.rows.iter().find(|r| r.k == 2);
    v.check("B2 p_2 = 1, e_2 = 2", row2.is_some_and(|r| r.parabolic == 1 && r.elements == 2));
    let b3 = build_weyl(&RootSystemSpec::parse("B3").unwrap(), 1152).unwrap().compare_census();
    println!("      B3 (informational): p {:?} e {:?} agree {}", b3.parabolic(), b3.elements(), b3.agree);
    v.finish();
}

#[test]
fn criterion_07_pbw() {
    let mut v = Verdict::new(7, "PBW dimensions to degree 6 and a corrupted control", 120);
    let cases = [
        ("z2", TParam::Value(q(0)), 0),
        ("z2", TParam::Value(q(0)), 1),
        ("z4", TParam::Value(q(0)), 1),
        ("trivial", TParam::Value(q(1)), 0),
    ];
    for (grp, t, c) in cases {
        let e = engine(grp, t.clone(), c);
        let r = e.pbw_dimension_check(6);
        v.check(format!("{grp} t={t} c={c}: dims {:?} expected {:?}", r.dims, r.expected), r.pass);
    }
    let bad = engine("z2", TParam::Value(q(0)), 1).with_flipped_action_sign(0).pbw_dimension_check(3);
    v.check(
        format!("corrupted control should fail by degree 3 (first failure {:?})", bad.first_failure),
        !bad.pass && bad.first_failure.is_some_and(|d| d <= 3),
    );
    v.finish();
}

#[test]
fn criterion_08_center_triviality() {
    let mut v = Verdict::new(8, "trivial center at t = 1", 60);
    for grp in ["trivial", "z2"] {
        for c in [0, 1] {
            let e = engine(grp, TParam::Value(q(1)), c);
            let basis: Vec<String> = e.center_basis(4).unwrap().iter().map(|z| e.display(z)).collect();
            v.check(format!("{grp} c={c}: center basis {basis:?}, expected [\"1\"]"), basis == ["1"]);
        }
    }
    v.finish();
}

#[test]
fn criterion_09_quantized_bracket() {
    let mut v = Verdict::new(9, "quantized bracket on the center", 60);
    let weyl = engine("trivial", TParam::Value(q(0)), 0);
    let el = |e: &SraEngine, s: &str| e.parse_element(s).unwrap();
    let xy = weyl.quantized_bracket(&el(&weyl, "x"), &el(&weyl, "y")).unwrap();
    v.check(format!("{{x,y}} = {}", weyl.display(&xy)), weyl.display(&xy) == "1");
    let sq = weyl.quantized_bracket(&el(&weyl, "x^2"), &el(&weyl, "y^2")).unwrap();
    v.check(format!("{{x^2,y^2}} = {}", weyl.display(&sq)), weyl.display(&sq) == "4*x*y");

    let e = engine("z2", TParam::Value(q(0)), 1);
    let pres = e.center_presentation(2).unwrap();
    let n = pres.generators.len();
    for i in 0..n {
        for j in 0..n {
            match e.quantized_bracket(&pres.generators[i], &pres.generators[j]) {
                Ok(b) => {
                    v.check(format!("bracket ({i},{j}) central"), e.is_central(&b));
                    let bound = (pres.degrees[i] + pres.degrees[j]).saturating_sub(2);
                    let deg = b.degree().unwrap_or(0);
                    v.check(format!("bracket ({i},{j}) degree {deg} <= {bound}"), b.is_zero() || deg <= bound);
                }
                Err(err) => v.check(format!("bracket ({i},{j}): {err}"), false),
            }
        }
    }
    v.check("Jacobi on the center presentation", pres.poisson.validate().unwrap().valid);
    v.finish();
}

#[test]
fn criterion_10_deformed_center() {
    let mut v = Verdict::new(10, "deformed Kleinian center", 120);
    for c in [1i64, 0] {
        let e = engine("z2", TParam::Value(q(0)), c);
        let pres = e.center_presentation(2).unwrap();
        let ring = &pres.target;
        let want = Ideal::parse(ring, &[&format!("C^2 - 4*A*B - ({c})^2")]).unwrap();
        v.check(
            format!("c={c}: relations {:?}", pres.relations.canonical_strings().unwrap()),
            pres.relations.equals(&want).unwrap(),
        );
        let sing = pres.relations.singular_locus().unwrap();
        if c == 1 {
            v.check("c=1: singular locus empty", sing.is_unit().unwrap());
        } else {
            v.check("c=0: singular locus is the origin", sing.equals(&Ideal::parse(ring, &["A", "B", "C"]).unwrap()).unwrap());
        }
        if c == 1 {
            // Points on C^2 - 4AB = 1: pick A != 0 and C, solve for B.
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            for _ in 0..5 {
                let a = loop {
                    let a: i64 = rng.gen_range(-6..=6);
                    if a != 0 {
                        break a;
                    }
                };
                let cc: i64 = rng.gen_range(-6..=6);
                let b = Scalar::frac(cc * cc - 1, 4 * a);
                let point = vec![q(a), b, q(cc)];
                let r = pres.poisson.rank_at_point(&point).unwrap();
                v.check(format!("c=1: rank {r} at {point:?}, expected 2"), r == 2);
            }
        }
    }
    v.finish();
}

#[test]
fn criterion_11_property_suites() {
    let mut v = Verdict::new(11, "Leibniz/Jacobi, Groebner invariance, core postconditions, determinism", 180);
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let z2_bracket = {
        let g = z2();
        induced_poisson(&g, &invariant_generators(&g).unwrap()).unwrap()
    };
    for (name, p) in [("dixmier-moeglin", dixmier_moeglin()), ("alpha", alpha_structure()), ("z2 quotient", z2_bracket)] {
        let (mut leibniz, mut jacobi) = (0, 0);
        for _ in 0..500 {
            let f = common::random_poly(&mut rng, p.ring(), 2, 3);
            let g = common::random_poly(&mut rng, p.ring(), 2, 3);
            let h = common::random_poly(&mut rng, p.ring(), 2, 3);
            let lhs = p.bracket(&f, &(&g * &h)).unwrap();
            let rhs = &(&p.bracket(&f, &g).unwrap() * &h) + &(&g * &p.bracket(&f, &h).unwrap());
            if !p.relations().normal_form(&(&lhs - &rhs)).unwrap().is_zero() {
                leibniz += 1;
            }
            let cyc = &(&p.bracket(&f, &p.bracket(&g, &h).unwrap()).unwrap() + &p.bracket(&g, &p.bracket(&h, &f).unwrap()).unwrap())
                + &p.bracket(&h, &p.bracket(&f, &g).unwrap()).unwrap();
            if !p.relations().normal_form(&cyc).unwrap().is_zero() {
                jacobi += 1;
            }
        }
        v.check(format!("{name}: {leibniz} Leibniz failures in 500 triples"), leibniz == 0);
        v.check(format!("{name}: {jacobi} Jacobi failures in 500 triples"), jacobi == 0);
    }

    let ring = PolyRing::rational(&["x", "y", "z"]);
    let mut variant = 0;
    for _ in 0..100 {
        let gens: Vec<Poly> = (0..rng.gen_range(1..=3)).map(|_| common::random_poly(&mut rng, &ring, 2, 3)).collect();
        let a = Ideal::new(&ring, gens.clone()).unwrap();
        let b = Ideal::new(&ring, common::recombine(&mut rng, &gens)).unwrap();
        if a.canonical_strings().unwrap() != b.canonical_strings().unwrap() {
            variant += 1;
        }
    }
    v.check(format!("{variant} of 100 ideals changed basis under re-presentation"), variant == 0);

    let dm = dixmier_moeglin();
    let mut bad_cores = Vec::new();
    for point in [[1, 1, 0], [2, 2, 7], [3, 1, -1], [0, 0, 5], [-2, 3, 4]] {
        let p = pt(&point);
        let r = dm.core_at_point(&p).unwrap();
        if r.certified {
            let m = Ideal::point(dm.ring(), &p).unwrap();
            if !(dm.is_poisson_ideal(&r.core).unwrap() && m.contains_ideal(&r.core).unwrap()) {
                bad_cores.push(point);
            }
        }
    }
    v.check(format!("certified cores violating postconditions: {bad_cores:?}"), bad_cores.is_empty());

    let fingerprint = || {
        let e = engine("z4", TParam::Value(q(0)), 1);
        let pbw = e.pbw_dimension_check(4);
        let g = z2();
        let pres = invariant_generators(&g).unwrap();
        let strata: Vec<Vec<String>> =
            stabilizer_strata(&g, &pres).unwrap().iter().map(|s| s.j_ideal.canonical_strings().unwrap()).collect();
        let cores: Vec<Vec<String>> =
            [[1, 1, 0], [3, 1, -1]].iter().map(|p| dm.core_at_point(&pt(p)).unwrap().core.canonical_strings().unwrap()).collect();
        format!("{:?} {:?} {:?}", pbw.dims, strata, cores)
    };
    let runs: Vec<String> = [1, 2, 4]
        .iter()
        .map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(fingerprint))
        .collect();
    v.check("results identical across 1, 2 and 4 threads", runs.windows(2).all(|w| w[0] == w[1]));
    v.finish();
}

mod common;
