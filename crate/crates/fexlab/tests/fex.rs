use std::sync::Arc;

use fexlab::fex::*;
use fexlab::homology::{homology, iso_on_pi0_and_h1};
use fexlab::simplicial::{FiniteCategory, SimplicialSet};

const B: u64 = DEFAULT_BUDGET;

fn simplex(m: usize) -> Arc<SimplicialSet> {
    Arc::new(SimplicialSet::standard_simplex(m))
}

#[test]
fn level_counts() {
    for m in 0..4 {
        assert_eq!(fex_level(&simplex(0), m, B).unwrap().len(), 1);
    }
    assert_eq!(fex_level(&simplex(1), 1, B).unwrap().len(), 5);
    let s1 = Arc::new(SimplicialSet::quotient_circle());
    assert_eq!(fex_level(&s1, 1, B).unwrap().len(), 4);
}

#[test]
fn truncated_is_simplicial() {
    for x in [simplex(1), Arc::new(SimplicialSet::quotient_circle())] {
        let f = fex_truncated(&x, 2, B).unwrap();
        let rep = f.set.validate();
        assert!(rep.ok, "{:?}", rep.violations);
        // normal forms agree with the face tables
        for m in 1..=2 {
            for (idx, g) in f.maps[m].iter().enumerate() {
                let s = &f.repr[m][idx];
                for i in 0..=m {
                    let d = fexlab::subdivision::fsd_coface(m, i).unwrap();
                    let nm = fsd_nerve(m - 1).unwrap();
                    let dn =
                        fexlab::simplicial::SimplicialMap::nerve_of(&d, nm, fsd_nerve(m).unwrap());
                    let h = g.compose(&dn);
                    assert_eq!(f.set.face(s, i), f.simplex_of(m - 1, &h).unwrap());
                }
            }
        }
    }
}

#[test]
fn unit_on_circle_and_boundary() {
    let s1 = Arc::new(SimplicialSet::quotient_circle());
    let f = fex_truncated(&s1, 2, B).unwrap();
    assert_eq!(homology(&f.set, 1).unwrap().to_string(), "Z");
    let u = unit(&s1, &f).unwrap();
    assert!(u.check().ok);
    assert!(iso_on_pi0_and_h1(&u));
    let bd = Arc::new(SimplicialSet::boundary(2));
    let f = fex_truncated(&bd, 2, B).unwrap();
    let u = unit(&bd, &f).unwrap();
    assert!(u.check().ok);
    assert!(iso_on_pi0_and_h1(&u));
}

#[test]
fn adjunction_counts() {
    let r = check_adjunction(1, &[vec![0, 1]], &simplex(1), B).unwrap();
    assert_eq!((r.lhs, r.rhs, r.bijective), (5, 5, true));
    let s1 = Arc::new(SimplicialSet::quotient_circle());
    let r = check_adjunction(0, &[vec![0]], &s1, B).unwrap();
    assert_eq!((r.lhs, r.rhs, r.bijective), (1, 1, true));
    let r = check_adjunction(2, &[vec![0, 1], vec![0, 2]], &simplex(1), B).unwrap();
    assert!(r.bijective, "{r:?}");
    let r = check_adjunction(2, &[vec![0, 1, 2]], &simplex(1), B).unwrap();
    assert!(r.bijective, "{r:?}");
}

#[test]
fn kan_checks() {
    assert!(!check_kan(&simplex(1), 2, B).unwrap().ok());
    let bz2 = Arc::new(SimplicialSet::nerve_category(
        &FiniteCategory::cyclic_group(2),
        3,
    ));
    assert!(check_kan(&bz2, 2, B).unwrap().ok());
}
