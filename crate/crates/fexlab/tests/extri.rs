use fexlab::extcat::pi0::pi0;
use fexlab::extcat::resolution::Ext1Cache;
use fexlab::extri::*;
use fexlab::modcat::{hom_enumerate, sample, ModMorphism, Module, Ring, ShortExact};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 20;

fn z4_ext(ring: Ring) -> ShortExact {
    let z2 = Module::cyclic(ring, 2).unwrap();
    let z4 = Module::cyclic(ring, 4).unwrap();
    let i = ModMorphism::new(&z2, &z4, vec![vec![2]]).unwrap();
    let p = ModMorphism::new(&z4, &z2, vec![vec![1]]).unwrap();
    ShortExact::new(i, p).unwrap()
}

#[test]
fn realize_zero_and_nonzero() {
    let mut ext = Ext1Cache::default();
    let z2 = Module::cyclic(Ring::Z, 2).unwrap();
    let zero = EExtension::zero(&mut ext, &z2, &z2).unwrap();
    let split = SeqClass {
        rep: ShortExact::split(&z2, &z2).unwrap(),
    };
    assert!(realize(&mut ext, &zero)
        .unwrap()
        .equivalent(&split)
        .unwrap());
    let report = pi0(&z2, &z2, 1, None, BUDGET).unwrap();
    let nonzero = report
        .classes
        .iter()
        .find(|c| c.cocycle.iter().any(|&x| x != 0))
        .unwrap();
    let xi = EExtension::of_pi0(nonzero).unwrap();
    let r = realize(&mut ext, &xi).unwrap();
    assert!(r
        .equivalent(&SeqClass {
            rep: z4_ext(Ring::Z)
        })
        .unwrap());
    assert!(!r.equivalent(&split).unwrap());
}

#[test]
fn morphism_check_examples() {
    let mut ext = Ext1Cache::default();
    let s = z4_ext(Ring::Z);
    let xi = EExtension::of_ses(&mut ext, &s).unwrap();
    let id = ModMorphism::identity(s.a());
    assert!(morphism_check(&mut ext, &id, &id, &xi, &xi).unwrap());
    let zero = ModMorphism::zero(s.a(), s.a());
    assert!(!morphism_check(&mut ext, &zero, &id, &xi, &xi).unwrap());
    let bad = ModMorphism::identity(s.e());
    assert!(morphism_check(&mut ext, &bad, &id, &xi, &xi).is_err());
}

#[test]
fn morphism_check_iff_ladder_exists() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ext = Ext1Cache::default();
    let mut seen = [0usize; 2];
    for _ in 0..40 {
        let s = sample::ses(&mut rng, Ring::Zn(4), 2);
        let t = sample::ses(&mut rng, Ring::Zn(4), 2);
        let (x, y) = (
            EExtension::of_ses(&mut ext, &s).unwrap(),
            EExtension::of_ses(&mut ext, &t).unwrap(),
        );
        for a in hom_enumerate(s.a(), t.a(), BUDGET).unwrap().iter().take(6) {
            for b in hom_enumerate(s.b(), t.b(), BUDGET).unwrap().iter().take(6) {
                let m = morphism_check(&mut ext, a, b, &x, &y).unwrap();
                let ladder = ladder_middle(&s, &t, a, b, BUDGET).unwrap().is_some();
                assert_eq!(m, ladder);
                seen[m as usize] += 1;
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn et3_examples() {
    let mut ext = Ext1Cache::default();
    let s = z4_ext(Ring::Zn(4));
    let id_a = ModMorphism::identity(s.a());
    let id_e = ModMorphism::identity(s.e());
    let c = et3_witness(&mut ext, &s, &s, &id_a, &id_e, BUDGET)
        .unwrap()
        .unwrap();
    assert_eq!(c, ModMorphism::identity(s.b()));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let m = sample::ses_map(&mut rng, Ring::Zn(4), 2);
        let c = et3_witness(&mut ext, &m.from, &m.to, &m.fa, &m.fe, BUDGET).unwrap();
        assert!(c.is_some());
    }
}

#[test]
fn et4_split_and_sampled() {
    let mut ext = Ext1Cache::default();
    let r = Ring::Zn(4);
    let z2 = Module::cyclic(r, 2).unwrap();
    let s1 = ShortExact::split(&z2, &z2).unwrap();
    let s2 = ShortExact::split(s1.e(), &z2).unwrap();
    let w = et4_checked(&mut ext, &s1, &s2).unwrap();
    assert!(w.xi3.is_zero());
    let mut nonsplit = 0;
    for (seed, ring) in [(11u64, r), (12, Ring::Z)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s1 = z4_ext(ring);
        for _ in 0..20 {
            let s2 = sample::ses_from(&mut rng, s1.e(), 2);
            let w = et4_checked(&mut ext, &s1, &s2).unwrap();
            nonsplit += usize::from(!w.xi3.is_zero());
        }
    }
    assert!(nonsplit > 0);
}

#[test]
fn additivity_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ext = Ext1Cache::default();
    for _ in 0..15 {
        let s = sample::ses(&mut rng, Ring::Zn(4), 2);
        let t = sample::ses(&mut rng, Ring::Zn(4), 2);
        let (x, y) = (
            EExtension::of_ses(&mut ext, &s).unwrap(),
            EExtension::of_ses(&mut ext, &t).unwrap(),
        );
        let rep = additivity_check(&mut ext, &x, &y).unwrap();
        assert!(rep.ok(), "{rep:?}");
    }
}
