use std::sync::Arc;

use fexlab::simplicial::{count_maps, hom_enumerate, SimplicialJson, SimplicialSet};
use fexlab::subdivision::fsd;
use proptest::prelude::*;

const BUDGET: u64 = 1_000_000;

#[test]
fn standard_shapes() {
    assert_eq!(SimplicialSet::standard_simplex(0).counts(), vec![1]);
    assert_eq!(SimplicialSet::boundary(2).counts(), vec![3, 3]);
    let h = SimplicialSet::horn(2, 0).unwrap();
    assert_eq!(h.counts(), vec![3, 2]);
    assert!(h.find(1, "0<1").is_some() && h.find(1, "0<2").is_some() && h.find(1, "1<2").is_none());
    assert_eq!(SimplicialSet::quotient_circle().counts(), vec![1, 1]);
    assert!(SimplicialSet::standard_simplex(2).validate().ok);
}

#[test]
fn corrupted_face_is_reported() {
    let mut j = SimplicialSet::standard_simplex(2).to_json();
    let top = j.simplices.iter_mut().find(|s| s.dim == 2).unwrap();
    top.faces[0].id = "0<1".into();
    let x = SimplicialSet::from_json(&j).unwrap();
    let r = x.validate();
    assert!(!r.ok);
    assert!(
        r.violations.iter().any(|v| v.contains("0<1<2")),
        "{:?}",
        r.violations
    );
}

#[test]
fn json_round_trip() {
    let x = SimplicialSet::nerve(&fsd(2).unwrap().poset);
    let text = serde_json::to_string(&x.to_json()).unwrap();
    let j: SimplicialJson = serde_json::from_str(&text).unwrap();
    assert_eq!(SimplicialSet::from_json(&j).unwrap(), x);
}

#[test]
fn hom_counts() {
    let d1 = Arc::new(SimplicialSet::standard_simplex(1));
    let s1 = Arc::new(SimplicialSet::quotient_circle());
    let f1 = Arc::new(SimplicialSet::nerve(&fsd(1).unwrap().poset));
    assert_eq!(hom_enumerate(&d1, &d1, BUDGET).unwrap().len(), 3);
    // vertex triples (a, c, b) with a <= c >= b
    let brute = (0..8).filter(|m: &u32| {
        let (a, c, b) = (m & 1, (m >> 1) & 1, (m >> 2) & 1);
        a <= c && b <= c
    });
    assert_eq!(
        hom_enumerate(&f1, &d1, BUDGET).unwrap().len(),
        brute.count()
    );
    assert_eq!(hom_enumerate(&f1, &s1, BUDGET).unwrap().len(), 4);
    let d0 = Arc::new(SimplicialSet::standard_simplex(0));
    assert_eq!(hom_enumerate(&d0, &f1, BUDGET).unwrap().len(), 3);
}

fn small_space() -> impl Strategy<Value = SimplicialSet> {
    prop_oneof![
        (0usize..3).prop_map(SimplicialSet::standard_simplex),
        (1usize..4).prop_map(SimplicialSet::boundary),
        Just(SimplicialSet::quotient_circle()),
        (0usize..3).prop_map(|k| SimplicialSet::horn(2, k).unwrap()),
        (0usize..3).prop_map(|m| SimplicialSet::nerve(&fsd(m).unwrap().poset)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Maps out of the n-simplex are the n-simplices, degenerate ones included.
    #[test]
    fn yoneda(y in small_space(), n in 0usize..3) {
        let y = Arc::new(y);
        let d = Arc::new(SimplicialSet::standard_simplex(n));
        prop_assert_eq!(count_maps(&d, &y, BUDGET).unwrap(), y.all_simplices(n).len());
    }

    #[test]
    fn composites_are_maps(w in small_space(), x in small_space(), y in small_space()) {
        let (w, x, y) = (Arc::new(w), Arc::new(x), Arc::new(y));
        let fs = hom_enumerate(&w, &x, BUDGET).unwrap();
        let gs = hom_enumerate(&x, &y, BUDGET).unwrap();
        prop_assume!(fs.len() * gs.len() <= 400);
        let all = hom_enumerate(&w, &y, BUDGET).unwrap();
        for f in &fs {
            for g in &gs {
                prop_assert!(all.contains(&g.compose(f)));
            }
        }
    }
}
