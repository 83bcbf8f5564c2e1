use fexlab::homology::chain_complex;
use fexlab::poset::{Poset, PosetMap};
use fexlab::simplicial::SimplicialSet;
use fexlab::subdivision::{fsd, fsd_coface};
use fexlab::Error;
use proptest::prelude::*;

#[test]
fn chain_and_cycle() {
    let p = Poset::from_generators(&["a", "b"], &[("a", "b")]).unwrap();
    assert_eq!(p.leq_labels("a", "b"), Some(true));
    assert_eq!(p.leq_labels("b", "a"), Some(false));
    let e = Poset::from_generators(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
    assert!(matches!(e, Error::CycleDetected(..)));
}

#[test]
fn fsd_one_shape() {
    let p = Poset::from_generators(&["0", "1", "01"], &[("0", "01"), ("1", "01")]).unwrap();
    assert_eq!(p, *fsd(1).unwrap().poset);
    let n = SimplicialSet::nerve(&p);
    assert_eq!(n.counts(), vec![3, 2]);
}

#[test]
fn nerves_of_small_posets() {
    assert_eq!(SimplicialSet::nerve(&Poset::chain(1)).counts(), vec![2, 1]);
    assert_eq!(SimplicialSet::nerve(&Poset::discrete(3)).counts(), vec![3]);
    for m in 0..3 {
        assert!(SimplicialSet::nerve(&fsd(m).unwrap().poset).validate().ok);
    }
}

#[test]
fn opposite_sub_union() {
    let p = Poset::from_generators(&["a", "b"], &[("a", "b")]).unwrap();
    assert_eq!(p.opposite().leq_labels("b", "a"), Some(true));
    let f2 = fsd(2).unwrap();
    let s = f2.poset.sub(&["0", "1", "01"]).unwrap();
    assert_eq!(
        s.generator_labels(),
        fsd(1).unwrap().poset.generator_labels()
    );
    // two faces share exactly the vertex they have in common
    let face = |i| {
        let d = fsd_coface(2, i).unwrap();
        let labels: Vec<String> = d.image_labels().into_iter().collect();
        f2.poset.sub(&labels).unwrap()
    };
    let (x, y) = (face(0), face(1));
    let common: Vec<&String> = x
        .elements()
        .iter()
        .filter(|l| y.elements().contains(l))
        .collect();
    assert_eq!(common, vec!["2"]);
    let u = Poset::union(&f2.poset, &[x, y]).unwrap();
    assert_eq!(u.len(), 5);
}

#[test]
fn json_and_dot() {
    let p = fsd(2).unwrap().poset.clone();
    let q = Poset::from_json(&p.to_json()).unwrap();
    assert_eq!(*p, q);
    assert!(p.to_dot().contains("\"0\" -> \"01\";"));
}

#[test]
fn poset_maps_must_be_monotone() {
    let c = std::sync::Arc::new(Poset::chain(1));
    assert!(PosetMap::new(c.clone(), c.clone(), vec![1, 0]).is_err());
    assert!(PosetMap::new(c.clone(), c, vec![0, 0]).is_ok());
}

fn dag() -> impl Strategy<Value = Poset> {
    (1usize..7).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.35), n * n).prop_map(move |bits| {
            let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let arrows: Vec<(String, String)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * n + j])
                .map(|(i, j)| (labels[i].clone(), labels[j].clone()))
                .collect();
            Poset::from_generators(&labels, &arrows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn rebuilding_is_idempotent(p in dag()) {
        let q = Poset::from_generators(p.elements(), &p.generator_labels()).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(p.rebuilt().unwrap(), p);
    }

    #[test]
    fn nerves_validate_and_opposites_share_homology(p in dag()) {
        let n = SimplicialSet::nerve(&p);
        prop_assert!(n.validate().ok);
        let a = chain_complex(&n).all_homology();
        let b = chain_complex(&SimplicialSet::nerve(&p.opposite())).all_homology();
        prop_assert_eq!(a, b);
    }
}
