use fexlab::extcat::horn::*;
use fexlab::extcat::pi0::*;
use fexlab::extcat::resolution::*;
use fexlab::extcat::*;
use fexlab::modcat::*;

fn cyc(r: Ring, d: u64) -> Module {
    Module::cyclic(r, d).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |Ext^n_R(Z/b, Z/a)| by brute force on the Hom complex of the periodic resolution of Z/b.
fn ext_order_oracle(ring: Ring, b: u64, a: u64, n: usize) -> u64 {
    // multiplier of P_k -> P_{k-1}
    let coeff = |k: usize| -> Option<u64> {
        match ring {
            Ring::Z => match k {
                0 => Some(1),
                1 => Some(b),
                _ => None,
            },
            Ring::Zn(m) => {
                if k == 0 {
                    Some(1)
                } else if b == m {
                    None
                } else if k % 2 == 1 {
                    Some(b)
                } else {
                    Some(m / b)
                }
            }
        }
    };
    if coeff(n).is_none() {
        return 1;
    }
    let cycles: Vec<u64> = (0..a)
        .filter(|x| coeff(n + 1).is_none_or(|c| (c * x) % a == 0))
        .collect();
    let bounds: std::collections::BTreeSet<u64> = if n == 0 {
        [0].into()
    } else {
        (0..a).map(|x| (coeff(n).unwrap() * x) % a).collect()
    };
    cycles.len() as u64 / bounds.len() as u64
}

/// Non-split 1-extension Z/2 -> Z/4 -> Z/2.
fn z4_ext(r: Ring) -> ShortExact {
    let z2 = cyc(r, 2);
    let z4 = cyc(r, 4);
    ShortExact::new(
        ModMorphism::new(&z2, &z4, vec![vec![2]]).unwrap(),
        ModMorphism::new(&z4, &z2, vec![vec![1]]).unwrap(),
    )
    .unwrap()
}

fn nonsplit_2ext() -> NExtension {
    let s = z4_ext(Ring::Zn(4));
    splice(&NExtension::from_ses(&s), &s).unwrap()
}

#[test]
fn basepoints_and_rho() {
    let z2 = cyc(Ring::Z, 2);
    let s1 = sigma(1, &z2, &z2).unwrap();
    assert_eq!(s1.middle(1).inv, vec![2, 2]);
    let r = rho(&z2).unwrap();
    assert!(r.p.compose(&r.i).unwrap().is_zero());
    let s3 = sigma(3, &z2, &cyc(Ring::Z, 3)).unwrap();
    assert!(s3.hinge(1).is_zero() && s3.hinge(2).is_zero());
    assert_eq!(s3.n(), 3);
}

#[test]
fn retakh0_is_a_homomorphism() {
    let r = Ring::Zn(4);
    for (b, a) in [
        (cyc(r, 2), cyc(r, 4)),
        (cyc(r, 4), cyc(r, 4)),
        (cyc(r, 4), cyc(r, 2)),
    ] {
        let zero = ModMorphism::zero(&b, &a);
        assert_eq!(
            retakh0(&zero).unwrap(),
            ExtMap::identity(&sigma(1, &b, &a).unwrap())
        );
        let homs = hom_enumerate(&b, &a, 1000).unwrap();
        for f in &homs {
            for g in &homs {
                let lhs = retakh0(f).unwrap().compose(&retakh0(g).unwrap()).unwrap();
                assert_eq!(lhs, retakh0(&f.add(g).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn retakh_legs_differ_only_at_b() {
    let r = Ring::Zn(4);
    let e = sigma(2, &cyc(r, 2), &cyc(r, 4)).unwrap();
    let l = retakh(&e).unwrap();
    let last = l.center.objs.len() - 1;
    for k in 0..=last {
        assert_eq!(
            l.legs[0].comps[k] == l.legs[1].comps[k],
            k != last - 1,
            "component {k}"
        );
    }
}

#[test]
fn resolution_matches_brute_force() {
    for ring in [Ring::Z, Ring::Zn(4), Ring::Zn(8), Ring::Zn(6)] {
        let ds: Vec<u64> = match ring {
            Ring::Z => vec![2, 3, 4, 6],
            Ring::Zn(m) => (2..=m).filter(|d| m % d == 0).collect(),
        };
        for &b in &ds {
            for &a in &ds {
                for n in 0..4 {
                    let g = ext_resolution(&cyc(ring, b), &cyc(ring, a), n).unwrap();
                    assert_eq!(
                        g.order(),
                        Some(ext_order_oracle(ring, b, a, n)),
                        "{ring} {b} {a} {n}"
                    );
                }
            }
        }
    }
    // sums of cyclics
    let r = Ring::Zn(4);
    let b = Module::new(r, vec![2, 4]).unwrap();
    let a = cyc(r, 2);
    let g = ext_resolution(&b, &a, 1).unwrap();
    assert_eq!(
        g.order(),
        Some(ext_order_oracle(r, 2, 2, 1) * ext_order_oracle(r, 4, 2, 1))
    );
    let z = Ring::Z;
    let g = ext_resolution(&cyc(z, 2), &cyc(z, 2), 1).unwrap();
    assert_eq!(g.torsion, vec![2]);
}

#[test]
fn split_extensions_have_zero_cocycle() {
    for ring in [Ring::Z, Ring::Zn(4)] {
        let (b, a) = (cyc(ring, 2), cyc(ring, 2));
        for n in 1..=3 {
            let g = ext_group(&b, &a, n).unwrap();
            let z = cocycle_of_extension(&sigma(n, &b, &a).unwrap(), &g).unwrap();
            assert!(z.iter().all(|&x| x == 0));
        }
    }
}

#[test]
fn realization_round_trips() {
    let cases = [
        (Ring::Z, vec![2], vec![2]),
        (Ring::Z, vec![4], vec![6]),
        (Ring::Z, vec![2, 4], vec![2]),
        (Ring::Zn(4), vec![2], vec![2]),
        (Ring::Zn(4), vec![2, 4], vec![2, 2]),
        (Ring::Zn(8), vec![4], vec![2]),
    ];
    for (ring, b, a) in cases {
        let (b, a) = (Module::new(ring, b).unwrap(), Module::new(ring, a).unwrap());
        let g = ext_group(&b, &a, 1).unwrap();
        for x in g.elements() {
            let s = realize_class(&g, &x).unwrap();
            assert_eq!(
                cocycle_of_extension(&NExtension::from_ses(&s), &g).unwrap(),
                x
            );
        }
    }
}

#[test]
fn splice_of_z4_extensions_is_nonsplit() {
    let e = nonsplit_2ext();
    assert_eq!(e.middle_orders(), vec![4, 4]);
    let g = ext_group(e.b(), e.a(), 2).unwrap();
    assert_eq!(g.order(), 2);
    let z = cocycle_of_extension(&e, &g).unwrap();
    assert!(z.iter().any(|&x| x != 0));
}

#[test]
fn baer_sum_examples() {
    let r = Ring::Z;
    let z2 = cyc(r, 2);
    let split = ShortExact::split(&z2, &z2).unwrap();
    let x = z4_ext(r);
    let g = ext_group(&z2, &z2, 1).unwrap();
    let class = |s: &ShortExact| cocycle_of_extension(&NExtension::from_ses(s), &g).unwrap();
    assert_eq!(class(&baer_sum(&split, &x).unwrap()), class(&x));
    assert_eq!(class(&baer_sum(&x, &x).unwrap()), class(&split));
    assert!(baer_sum(&x, &x).unwrap().is_split(1000).unwrap());
    assert!(baer_sum(&x, &ShortExact::split(&z2, &cyc(r, 4)).unwrap()).is_err());
}

#[test]
fn baer_sum_is_cocycle_addition() {
    for ring in [Ring::Z, Ring::Zn(4), Ring::Zn(8)] {
        let mods = [cyc(ring, 2), cyc(ring, 4)];
        for b in &mods {
            for a in &mods {
                let g = ext_group(b, a, 1).unwrap();
                for x in g.elements() {
                    for y in g.elements() {
                        let s = baer_sum(
                            &realize_class(&g, &x).unwrap(),
                            &realize_class(&g, &y).unwrap(),
                        )
                        .unwrap();
                        let z = cocycle_of_extension(&NExtension::from_ses(&s), &g).unwrap();
                        assert_eq!(z, g.add(&x, &y));
                    }
                }
            }
        }
    }
}

#[test]
fn cylinder_of_identity_on_nonsplit_2ext() {
    let e = nonsplit_2ext();
    let c = cylinder(&ExtMap::identity(&e)).unwrap();
    assert!(c.f_prime.is_termwise_mono());
    assert!(c.m.is_termwise_mono());
    assert_eq!(c.p.compose(&c.f_prime).unwrap(), ExtMap::identity(&e));
    assert_eq!(c.p.compose(&c.m).unwrap(), ExtMap::identity(&e));
    // F_1 + E_2 and F_2 + E_2
    assert_eq!(c.cyl.middle_orders(), vec![16, 16]);
}

#[test]
fn cylinder_of_a_retraction() {
    let e = nonsplit_2ext();
    let c1 = cylinder(&ExtMap::identity(&e)).unwrap();
    // p is not mono; factor it again
    assert!(!c1.p.is_termwise_mono());
    let c2 = cylinder(&c1.p).unwrap();
    assert!(c2.f_prime.is_termwise_mono());
    assert_eq!(c2.p.compose(&c2.f_prime).unwrap(), c1.p);
    assert_eq!(c2.p.compose(&c2.m).unwrap(), ExtMap::identity(&e));
}

#[test]
fn cylinder_n1_is_trivial() {
    let s = NExtension::from_ses(&z4_ext(Ring::Z));
    let c = cylinder(&ExtMap::identity(&s)).unwrap();
    assert_eq!(c.f_prime, ExtMap::identity(&s));
    assert_eq!(c.p, ExtMap::identity(&s));
}

#[test]
fn universal_loop_of_retakh_has_b_one() {
    for e in [
        NExtension::from_ses(&z4_ext(Ring::Z)),
        nonsplit_2ext(),
        sigma(1, &cyc(Ring::Zn(4), 2), &cyc(Ring::Zn(4), 4)).unwrap(),
    ] {
        let u = universal_loop_map(&retakh(&e).unwrap()).unwrap();
        assert_eq!(u.b, ModMorphism::identity(e.b()));
        let g = ext_group(e.b(), e.a(), e.n()).unwrap();
        assert_eq!(
            cocycle_of_extension(&u.e, &g).unwrap(),
            cocycle_of_extension(&e, &g).unwrap()
        );
    }
}

#[test]
fn universal_loop_with_equal_legs_has_b_zero() {
    let e = NExtension::from_ses(&z4_ext(Ring::Z));
    let l = retakh(&e).unwrap();
    let same = Loop::new(l.center.clone(), l.legs[0].clone(), l.legs[0].clone()).unwrap();
    let u = universal_loop_map(&same).unwrap();
    assert!(u.b.is_zero());
}

#[test]
fn pi0_examples() {
    let z = Ring::Z;
    let r = pi0(&cyc(z, 2), &cyc(z, 2), 1, None, 1_000_000).unwrap();
    assert_eq!(r.count(), 2);
    assert!(r.class_invariant && r.bijective);
    let mids: Vec<Vec<u64>> = r
        .classes
        .iter()
        .map(|c| c.rep.middle(1).inv.clone())
        .collect();
    assert!(mids.contains(&vec![4]) && mids.contains(&vec![2, 2]));
    let r = pi0(&cyc(z, 2), &cyc(z, 3), 1, None, 1_000_000).unwrap();
    assert_eq!(r.count(), 1);
    let r4 = Ring::Zn(4);
    let r = pi0(&cyc(r4, 2), &cyc(r4, 2), 2, None, 10_000_000).unwrap();
    assert_eq!(r.count(), 2);
    assert!(r.class_invariant && r.bijective);
    assert_eq!(r.stable, Some(true));
}

#[test]
fn pi0_grid_over_z() {
    for a in 2..=4u64 {
        for b in 2..=4u64 {
            let r = pi0(&cyc(Ring::Z, a), &cyc(Ring::Z, b), 1, None, 1_000_000).unwrap();
            assert_eq!(r.count() as u64, gcd(a, b), "Ext(Z/{b}, Z/{a})");
            assert!(r.class_invariant && r.bijective);
        }
    }
}

#[test]
fn pi0_group_law() {
    let z = Ring::Z;
    let r = pi0(&cyc(z, 4), &cyc(z, 4), 1, None, 1_000_000).unwrap();
    assert_eq!(r.group().unwrap().inv, vec![4]);
    let g = ext_group(&cyc(z, 4), &cyc(z, 4), 1).unwrap();
    for x in &r.classes {
        for y in &r.classes {
            let s = baer_sum(&x.rep.station(1), &y.rep.station(1)).unwrap();
            assert_eq!(Some(classify(&r, &s).unwrap()), r.add(x.id, y.id));
            assert_eq!(
                cocycle_of_extension(&NExtension::from_ses(&s), &g).unwrap(),
                g.add(&x.cocycle, &y.cocycle)
            );
        }
    }
}

#[test]
fn modules_of_order_counts() {
    // partitions of the exponents
    assert_eq!(modules_of_order(Ring::Z, 16).len(), 5);
    assert_eq!(modules_of_order(Ring::Z, 12).len(), 2);
    assert_eq!(modules_of_order(Ring::Zn(4), 16).len(), 3);
    assert_eq!(modules_of_order(Ring::Z, 1), vec![Module::zero(Ring::Z)]);
}

fn automorphisms_of(e: &NExtension) -> Vec<ExtMap> {
    hom_enumerate(e.middle(1), e.middle(1), 1000)
        .unwrap()
        .into_iter()
        .filter_map(|f| ext_map_1(e, e, f).ok())
        .collect()
}

#[test]
fn fill_m1() {
    let e = NExtension::from_ses(&z4_ext(Ring::Z));
    let horn = constant_horn(1, &e, &[]).unwrap();
    let f = fill_horn(1, 0, &horn).unwrap();
    assert_eq!(f.poset.len(), 3);
    assert!(f.arrows.values().all(|a| *a == ExtMap::identity(&e)));
}

#[test]
fn fill_all_z_fixture_horns() {
    let z2 = cyc(Ring::Z, 2);
    let reps = [
        NExtension::from_ses(&ShortExact::split(&z2, &z2).unwrap()),
        NExtension::from_ses(&z4_ext(Ring::Z)),
    ];
    let mut filled = 0;
    for e in &reps {
        let autos = automorphisms_of(e);
        assert_eq!(autos.len(), 2);
        for mask in 0..16u32 {
            let choice: Vec<ExtMap> = (0..4)
                .map(|i| autos[((mask >> i) & 1) as usize].clone())
                .collect();
            let horn = constant_horn(2, e, &choice).unwrap();
            let f = fill_horn(2, 0, &horn).unwrap();
            f.validate().unwrap();
            // the filler restricts to the horn
            for (l, o) in horn.poset.elements().iter().zip(&horn.objs) {
                assert_eq!(&f.objs[f.index(l).unwrap()], o);
            }
            for (&(a, b), g) in &horn.arrows {
                let (fa, fb) = (
                    f.index(horn.poset.label(a)).unwrap(),
                    f.index(horn.poset.label(b)).unwrap(),
                );
                assert_eq!(&f.map(fa, fb).unwrap(), g);
            }
            filled += 1;
        }
    }
    assert_eq!(filled, 32);
}

#[test]
fn fill_m2_with_non_mono_arrows() {
    let e = nonsplit_2ext();
    let c = cylinder(&ExtMap::identity(&e)).unwrap();
    let horn_poset = std::sync::Arc::new(fexlab::subdivision::fsd_horn(2, 0).unwrap());
    let objs: Vec<NExtension> = horn_poset
        .elements()
        .iter()
        .map(|l| {
            if l.len() == 1 {
                c.cyl.clone()
            } else {
                e.clone()
            }
        })
        .collect();
    let arrows = horn_poset
        .covers()
        .into_iter()
        .map(|cv| (cv, c.p.clone()))
        .collect();
    let d = Diagram::new(horn_poset, objs, arrows).unwrap();
    let cof = make_cofibrant(&d).unwrap();
    assert!(cof.h0.all_termwise_mono());
    let f = fill_horn(2, 0, &d).unwrap();
    f.validate().unwrap();
}

#[test]
fn cocone_of_a_span_is_the_pushout() {
    let e = nonsplit_2ext();
    let c = cylinder(&ExtMap::identity(&e)).unwrap();
    let p = std::sync::Arc::new(
        fexlab::poset::Poset::from_generators(&["i", "a", "b"], &[("i", "a"), ("i", "b")]).unwrap(),
    );
    let (i, a, b) = (
        p.index_of("i").unwrap(),
        p.index_of("a").unwrap(),
        p.index_of("b").unwrap(),
    );
    let mut objs = vec![c.cyl.clone(); 3];
    objs[i] = e.clone();
    let d = Diagram::new(
        p.clone(),
        objs,
        [((i, a), c.m.clone()), ((i, b), c.f_prime.clone())]
            .into_iter()
            .collect(),
    )
    .unwrap();
    let cc = cocone(&d).unwrap();
    for (&(a, b), f) in &d.arrows {
        assert_eq!(cc.legs[b].compose(f).unwrap(), cc.legs[a]);
    }
    // |P_j| = |cyl_j|^2 / |E_j|
    let expect: Vec<u128> = (1..=2)
        .map(|j| c.cyl.middle(j).order().pow(2) / e.middle(j).order())
        .collect();
    assert_eq!(cc.apex.middle_orders(), expect);
}

#[test]
fn diagram_json_round_trip() {
    let e = NExtension::from_ses(&z4_ext(Ring::Z));
    let autos = automorphisms_of(&e);
    let horn = constant_horn(
        2,
        &e,
        &[
            autos[0].clone(),
            autos[1].clone(),
            autos[1].clone(),
            autos[0].clone(),
        ],
    )
    .unwrap();
    let j = horn.to_json();
    let back = Diagram::from_json(horn.poset.clone(), &j).unwrap();
    assert_eq!(back.arrows, horn.arrows);
}
