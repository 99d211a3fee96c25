use porder::schema::PoissonJson;
use porder::{Ideal, PoissonStructure, Poly, Scalar};
use rayon::ThreadPoolBuilder;

fn from_json(text: &str) -> PoissonStructure {
    serde_json::from_str::<PoissonJson>(text).unwrap().to_structure().unwrap()
}

const DM: &str = r#"{"variables": ["x", "y", "z"], "bracket": [["0", "x"], ["y"]]}"#;

fn pt(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

#[test]
fn rank_strata_of_dixmier_moeglin() {
    let p = from_json(DM);
    assert_eq!(p.rank_at_point(&pt(&[1, 1, 0])).unwrap(), 2);
    assert_eq!(p.rank_at_point(&pt(&[0, 0, 3])).unwrap(), 0);
    let strata = p.rank_stratum_ideals().unwrap();
    let zero_locus = strata.iter().find(|s| s.rank == 0).unwrap();
    assert!(zero_locus.ideal.equals(&Ideal::parse(p.ring(), &["x", "y"]).unwrap()).unwrap());
}

#[test]
fn invalid_jacobi_is_reported() {
    let p = from_json(r#"{"variables": ["x", "y", "z"], "bracket": [["z", "x"], ["1"]]}"#);
    let r = p.validate().unwrap();
    assert!(!r.valid);
    assert!(!r.jacobi_failures.is_empty());
    assert!(p.bracket(&Poly::var(p.ring(), 0), &Poly::var(p.ring(), 1)).is_err());
}

#[test]
fn cores_independent_of_thread_count() {
    let p = from_json(DM);
    let points = [[1, 1, 0], [2, 2, 7], [3, 1, -1], [0, 0, 5]];
    let run = |n: usize| {
        ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| {
            points.iter().map(|q| p.core_at_point(&pt(q)).unwrap().core.canonical_strings().unwrap()).collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}
