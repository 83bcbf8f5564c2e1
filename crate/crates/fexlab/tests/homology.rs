use fexlab::homology::{chain_complex, homology, is_contractible_proxy, AbGroup};
use fexlab::simplicial::SimplicialSet;
use fexlab::snf::{determinant, matmul, smith, smith_normal_form, to_big};
use fexlab::subdivision::fsd;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn diag_of(m: &[Vec<i64>]) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    smith(&to_big(m), cols).diag
}

#[test]
fn snf_examples() {
    let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]]), b(&[1, 6]));
    assert_eq!(diag_of(&[vec![0, 0], vec![0, 0]]), b(&[0, 0]));
    assert_eq!(diag_of(&[vec![2, 4], vec![6, 8]]), b(&[2, 4]));
}

#[test]
fn boundary_layouts() {
    let c = chain_complex(&SimplicialSet::standard_simplex(1));
    assert_eq!(c.boundaries[1].dense(), vec![vec![-1], vec![1]]);
    let s = chain_complex(&SimplicialSet::quotient_circle());
    assert_eq!(s.boundaries[1].dense(), vec![vec![0]]);
    for m in 0..4 {
        assert!(chain_complex(&SimplicialSet::nerve(&fsd(m).unwrap().poset)).is_complex());
    }
}

#[test]
fn homology_examples() {
    assert_eq!(
        homology(&SimplicialSet::quotient_circle(), 1),
        Some(AbGroup::free(1))
    );
    assert!(is_contractible_proxy(&SimplicialSet::nerve(
        &fsd(2).unwrap().poset
    )));
    assert!(!is_contractible_proxy(&SimplicialSet::boundary(2)));
    assert_eq!(
        homology(&SimplicialSet::boundary(3), 2),
        Some(AbGroup::free(1))
    );
}

#[test]
fn opposite_invariance_on_fsd() {
    for m in 0..4 {
        let p = fsd(m).unwrap().poset.clone();
        let a = chain_complex(&SimplicialSet::nerve(&p)).all_homology();
        let b = chain_complex(&SimplicialSet::nerve(&p.opposite())).all_homology();
        assert_eq!(a, b);
    }
}

#[test]
fn euler_characteristic_from_homology() {
    let spaces = [
        SimplicialSet::boundary(2),
        SimplicialSet::boundary(3),
        SimplicialSet::quotient_circle(),
        SimplicialSet::nerve(&fsd(3).unwrap().poset),
        SimplicialSet::horn(3, 1).unwrap(),
    ];
    for x in spaces {
        let c = chain_complex(&x);
        let from_h: i64 = c
            .all_homology()
            .iter()
            .enumerate()
            .map(|(n, g)| (g.as_ref().unwrap().rank as i64) * if n % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(c.euler_characteristic(), from_h);
    }
}

fn gcd_all(m: &[Vec<i64>]) -> BigInt {
    m.iter()
        .flatten()
        .fold(BigInt::zero(), |g, &x| g.gcd(&BigInt::from(x)))
}

proptest! {
    #[test]
    fn snf_is_certified(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 4 + c]).collect()).collect();
        let big = to_big(&m);
        let (u, d, v) = smith_normal_form(&big);
        prop_assert_eq!(matmul(&matmul(&u, &big, rows), &v, cols), d.clone());
        prop_assert!(determinant(&u).abs().is_one());
        prop_assert!(determinant(&v).abs().is_one());
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative() && (w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero())));
        }
        // first divisor is the gcd of the entries
        prop_assert_eq!(diag[0].clone(), gcd_all(&m));
        if rows == cols {
            prop_assert_eq!(determinant(&big).abs(), diag.iter().fold(BigInt::one(), |p, x| p * x));
        }
    }
}
