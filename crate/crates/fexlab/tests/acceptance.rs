//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every expected value is recomputed here from first principles (mod p ranks of
//! order complexes, brute force counts, element enumeration, explicit resolutions)
//! rather than read back from the library.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use fexlab::coend::{comparison, higher_ext};
use fexlab::extcat::horn::{constant_horn, fill_horn, Diagram};
use fexlab::extcat::pi0::pi0;
use fexlab::extcat::resolution::{ext_resolution, Ext1Cache};
use fexlab::extcat::{
    cylinder, ext_map_1, retakh, retakh0, universal_loop_map, ExtMap, NExtension,
};
use fexlab::extri::{additivity_check, et3_witness, et4_witness, ladder_middle, EExtension};
use fexlab::fex::{check_adjunction, fex_level, fex_truncated, unit, DEFAULT_BUDGET};
use fexlab::homology::{cone_acyclic_through, homology, iso_on_pi0_and_h1, AbGroup};
use fexlab::modcat::{
    grid_from_submodule, hom_enumerate, pullback_ses, pushout_ses, sample, ses_equivalence,
    three_by_three_check, ModMorphism, Module, Ring, ShortExact,
};
use fexlab::poset::{Poset, PosetMap};
use fexlab::simplicial::{Simplex, SimplicialMap, SimplicialSet};
use fexlab::subdivision::{
    ell, fsd, fsd_boundary, fsd_codegeneracy, fsd_coface, fsd_horn, fsd_subcomplex,
};
use fexlab::verify::{loop_fixtures, random_ext_map};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

const SEED: u64 = 0;
const PRIMES: [u64; 4] = [2, 3, 5, 7];

// ---------- oracles ----------

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|x| x * rows[rank][c] % p == 1).unwrap();
        let pivot_row: Vec<u64> = rows[rank].iter().map(|v| v * inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - k * y % p) % p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Reduced Betti numbers mod p of a chain complex given by its boundary matrices
/// (entry [i][j]: coefficient of face i in the boundary of cell j), augmented in degree 0.
fn reduced_betti(sizes: &[usize], boundaries: &[Vec<Vec<i64>>], p: u64) -> Vec<usize> {
    let to_p = |m: &Vec<Vec<i64>>| -> Vec<Vec<u64>> {
        m.iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
            .collect()
    };
    let mut ranks = vec![usize::from(sizes[0] > 0)];
    for b in boundaries {
        ranks.push(rank_mod_p(to_p(b), p));
    }
    ranks.push(0);
    (0..sizes.len())
        .map(|k| sizes[k] - ranks[k] - ranks[k + 1])
        .collect()
}

/// Chains x0 < ... < xk of a poset, by dimension.
fn order_complex(p: &Poset) -> Vec<Vec<Vec<usize>>> {
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..p.len()).map(|x| vec![x]).collect()];
    loop {
        let next: Vec<Vec<usize>> = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|c| {
                let top = *c.last().unwrap();
                (0..p.len()).filter(move |&y| p.lt(top, y)).map(move |y| {
                    let mut d = c.clone();
                    d.push(y);
                    d
                })
            })
            .collect();
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

fn poset_betti(p: &Poset, prime: u64) -> Vec<usize> {
    let levels = order_complex(p);
    let sizes: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    let mut bds = Vec::new();
    for k in 1..levels.len() {
        let index: std::collections::HashMap<&Vec<usize>, usize> = levels[k - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let mut m = vec![vec![0i64; levels[k].len()]; levels[k - 1].len()];
        for (j, c) in levels[k].iter().enumerate() {
            for i in 0..c.len() {
                let mut f = c.clone();
                f.remove(i);
                m[index[&f]][j] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        bds.push(m);
    }
    reduced_betti(&sizes, &bds, prime)
}

fn poset_acyclic(p: &Poset) -> bool {
    PRIMES
        .iter()
        .all(|&q| poset_betti(p, q).iter().all(|&b| b == 0))
}

/// Unreduced Betti numbers b0, b1 mod p from normalized chains of a simplicial set.
fn low_betti(x: &SimplicialSet, prime: u64) -> (usize, usize) {
    let sizes: Vec<usize> = (0..3)
        .map(|d| if d <= x.dim() { x.count(d) } else { 0 })
        .collect();
    let bd = |d: usize| -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; sizes[d]]; sizes[d - 1]];
        for j in 0..sizes[d] {
            for i in 0..=d {
                let f = x.face(&Simplex::nondegenerate(d, j), i);
                if !f.is_degenerate() {
                    m[f.nd][j] += if i % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        m
    };
    let to_p = |m: Vec<Vec<i64>>| -> Vec<Vec<u64>> {
        m.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| v.rem_euclid(prime as i64) as u64)
                    .collect()
            })
            .collect()
    };
    let r1 = rank_mod_p(to_p(bd(1)), prime);
    let r2 = if sizes[2] > 0 {
        rank_mod_p(to_p(bd(2)), prime)
    } else {
        0
    };
    (sizes[0] - r1, sizes[1] - r1 - r2)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |Ext^n(Z/b, Z/a)| over Z or over Z/N, from the standard periodic resolution, counting elements.
fn ext_order_oracle(ring: Ring, b: u64, a: u64, n: usize) -> u64 {
    let count = |keep: &dyn Fn(u64) -> bool| (0..a).filter(|&x| keep(x)).count() as u64;
    let image = |k: u64| (0..a).map(|x| x * k % a).collect::<BTreeSet<_>>().len() as u64;
    match ring {
        Ring::Z => match n {
            1 => a / image(b),
            _ => 1,
        },
        Ring::Zn(big) => {
            let (kill, from) = if n % 2 == 1 {
                (big / b, b)
            } else {
                (b, big / b)
            };
            count(&|x| x * kill % a == 0) / image(from)
        }
    }
}

fn injective_by_elements(f: &ModMorphism) -> bool {
    let imgs: BTreeSet<Vec<i64>> = f
        .source
        .elements()
        .iter()
        .map(|v| f.target.reduce(&f.apply(v)))
        .collect();
    imgs.len() as u128 == f.source.order()
}

fn image_size(f: &ModMorphism) -> usize {
    f.source
        .elements()
        .iter()
        .map(|v| f.target.reduce(&f.apply(v)))
        .collect::<BTreeSet<_>>()
        .len()
}

fn kernel_size(f: &ModMorphism) -> usize {
    let z = f.target.zero_vec();
    f.source
        .elements()
        .iter()
        .filter(|v| f.target.reduce(&f.apply(v)) == z)
        .count()
}

fn exact_by_elements(f: &ModMorphism, g: &ModMorphism) -> bool {
    let z = g.target.zero_vec();
    f.source
        .elements()
        .iter()
        .all(|v| g.target.reduce(&g.apply(&f.apply(v))) == z)
        && image_size(f) == kernel_size(g)
}

fn ses_by_elements(f: &ModMorphism, g: &ModMorphism) -> bool {
    injective_by_elements(f) && image_size(g) as u128 == g.target.order() && exact_by_elements(f, g)
}

/// Every station hinge -> middle -> hinge is short exact.
fn sequence_exact_by_elements(e: &NExtension) -> bool {
    e.maps.chunks(2).all(|w| ses_by_elements(&w[0], &w[1]))
}

fn cyc(ring: Ring, d: u64) -> Module {
    Module::cyclic(ring, d).unwrap()
}

fn grid() -> Vec<(Ring, u64, u64, usize)> {
    let mut g = Vec::new();
    for a in [2, 3, 4] {
        for b in [2, 3, 4] {
            g.push((Ring::Z, b, a, 1));
        }
    }
    g.push((Ring::Zn(4), 2, 2, 1));
    g.push((Ring::Zn(4), 2, 2, 2));
    g
}

// ---------- criteria ----------

fn read_golden(name: &str) -> BTreeSet<(String, String)> {
    let path = format!("{}/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .expect("golden file")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (a, b) = l.split_once("->").expect("arrow line");
            (a.trim().to_string(), b.trim().to_string())
        })
        .collect()
}

fn c1() -> Outcome {
    let counts: Vec<usize> = (0..4)
        .map(|m| fsd(m).map(|s| s.poset.len()))
        .collect::<Result<_, _>>()?;
    let g1: BTreeSet<_> = fsd(1)?.poset.generator_labels().into_iter().collect();
    let g2: BTreeSet<_> = fsd(2)?.poset.generator_labels().into_iter().collect();
    let (e1, e2) = (read_golden("fsd1.txt"), read_golden("fsd2.txt"));
    let ok = counts == [1, 3, 10, 49] && g1 == e1 && g2 == e2;
    Ok((
        ok,
        format!(
            "counts {counts:?}; generators {}/{} and {}/{}",
            g1.len(),
            e1.len(),
            g2.len(),
            e2.len()
        ),
    ))
}

fn after(g: &PosetMap, f: &PosetMap) -> Vec<usize> {
    f.assignment.iter().map(|&i| g.assignment[i]).collect()
}

fn c2() -> Outcome {
    let (mut checked, mut bad) = (0, 0);
    let mut eq = |a: Vec<usize>, b: Vec<usize>| {
        checked += 1;
        bad += usize::from(a != b);
    };
    for n in 1..4 {
        for j in 0..=n + 1 {
            for i in 0..j {
                eq(
                    after(&fsd_coface(n + 1, j)?, &fsd_coface(n, i)?),
                    after(&fsd_coface(n + 1, i)?, &fsd_coface(n, j - 1)?),
                );
            }
        }
        for j in 0..n {
            for i in 0..=j {
                eq(
                    after(&fsd_codegeneracy(n, j)?, &fsd_codegeneracy(n + 1, i)?),
                    after(&fsd_codegeneracy(n, i)?, &fsd_codegeneracy(n + 1, j + 1)?),
                );
            }
        }
    }
    for n in 0..4 {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = after(&fsd_codegeneracy(n + 1, j)?, &fsd_coface(n + 1, i)?);
                let rhs = if i < j {
                    after(&fsd_coface(n, i)?, &fsd_codegeneracy(n, j - 1)?)
                } else if i <= j + 1 {
                    (0..fsd(n)?.poset.len()).collect()
                } else {
                    after(&fsd_coface(n, i - 1)?, &fsd_codegeneracy(n, j)?)
                };
                eq(lhs, rhs);
            }
        }
    }
    Ok((
        bad == 0,
        format!("{checked} identities up to fsd[4], {bad} failures"),
    ))
}

fn lib_acyclic(x: &SimplicialSet) -> bool {
    (0..=x.dim()).all(|d| match homology(x, d) {
        Some(g) if d == 0 => g == AbGroup::free(1),
        Some(g) => g.is_trivial(),
        None => false,
    })
}

fn c3() -> Outcome {
    let mut posets = Vec::new();
    for m in 0..4 {
        posets.push((*fsd(m)?.poset).clone());
        if m > 0 {
            for k in 0..=m {
                posets.push(fsd_horn(m, k)?);
            }
        }
    }
    let ok_oracle = posets.iter().all(poset_acyclic);
    let ok_lib = posets.iter().all(|p| lib_acyclic(&SimplicialSet::nerve(p)));
    let bd = fsd_boundary(2)?;
    let control_oracle = PRIMES.iter().all(|&q| poset_betti(&bd, q) == vec![0, 1]);
    let control_lib = homology(&SimplicialSet::nerve(&bd), 1) == Some(AbGroup::free(1));
    let ok = ok_oracle && ok_lib && control_oracle && control_lib;
    Ok((ok, format!("{} nerves acyclic (oracle {ok_oracle}, library {ok_lib}); boundary H_1 = Z ({control_oracle}, {control_lib})", posets.len())))
}

fn c4() -> Outcome {
    let mut ok = true;
    for m in 0..4 {
        let e = ell(m)?;
        // both ends acyclic, so a map between them is a homology iso exactly when it is on H_0
        ok &= poset_acyclic(&e.source) && poset_acyclic(&e.target);
        let x = Arc::new(SimplicialSet::nerve(&e.source));
        let y = Arc::new(SimplicialSet::nerve(&e.target));
        ok &= cone_acyclic_through(&SimplicialMap::nerve_of(&e, x.clone(), y), x.dim() + 1);
    }
    let mut bettis = Vec::new();
    for x in [
        SimplicialSet::standard_simplex(1),
        SimplicialSet::boundary(2),
        SimplicialSet::quotient_circle(),
    ] {
        let x = Arc::new(x);
        let f = fex_truncated(&x, 2, DEFAULT_BUDGET)?;
        let u = unit(&x, &f)?;
        ok &= u.check().ok && iso_on_pi0_and_h1(&u);
        for q in [2, 3] {
            let (bx, bf) = (low_betti(&x, q), low_betti(&f.set, q));
            ok &= bx == bf;
            bettis.push(bx);
        }
    }
    let level = fex_level(
        &Arc::new(SimplicialSet::standard_simplex(1)),
        1,
        DEFAULT_BUDGET,
    )?
    .len();
    ok &= level == 5;
    Ok((ok, format!("ell_m acyclic cones; (b0, b1) of X and fEx X agree {bettis:?}; fEx(Delta^1)_1 = {level}")))
}

/// Maps nerve(P) -> Delta^1 are monotone maps P -> [1].
fn maps_to_interval(p: &Poset) -> usize {
    (0..1u64 << p.len())
        .filter(|bits| {
            p.relations()
                .iter()
                .all(|&(a, b)| (bits >> a) & 1 <= (bits >> b) & 1)
        })
        .count()
}

/// Maps nerve(P) -> S^1 = Delta^1 / boundary: 0/1 labels on strict relations, additive along chains.
fn maps_to_circle(p: &Poset) -> usize {
    let rels: Vec<(usize, usize)> = p.relations().into_iter().filter(|&(a, b)| a != b).collect();
    let idx = |a: usize, b: usize| rels.iter().position(|&r| r == (a, b)).unwrap();
    let mut triples = Vec::new();
    for &(x, y) in &rels {
        for &(y2, z) in &rels {
            if y == y2 {
                triples.push((idx(x, y), idx(y, z), idx(x, z)));
            }
        }
    }
    (0..1u64 << rels.len())
        .filter(|bits| {
            triples
                .iter()
                .all(|&(a, b, c)| ((bits >> a) & 1) + ((bits >> b) & 1) == (bits >> c) & 1)
        })
        .count()
}

fn c5() -> Outcome {
    let ks: [(usize, Vec<Vec<usize>>); 3] = [
        (0, vec![vec![0]]),
        (1, vec![vec![0, 1]]),
        (2, vec![vec![0, 1], vec![0, 2]]),
    ];
    let mut ok = true;
    let mut out = Vec::new();
    for (m, faces) in &ks {
        let p = if *m == 2 {
            fsd_subcomplex(*m, faces)?
        } else {
            (*fsd(*m)?.poset).clone()
        };
        for (y, expect) in [
            (SimplicialSet::standard_simplex(1), maps_to_interval(&p)),
            (SimplicialSet::quotient_circle(), maps_to_circle(&p)),
        ] {
            let r = check_adjunction(*m, faces, &Arc::new(y), DEFAULT_BUDGET)?;
            ok &= r.bijective && r.lhs == expect && r.rhs == expect;
            out.push(format!("{}={}", r.rhs, expect));
        }
    }
    Ok((ok, format!("|Hom(K, fEx Y)| = oracle: {}", out.join(" "))))
}

fn c6() -> Outcome {
    let mut ok = true;
    let mut out = Vec::new();
    for (ring, b, a, n) in grid() {
        let expect = ext_order_oracle(ring, b, a, n);
        if ring == Ring::Z {
            ok &= expect == gcd(a, b);
        }
        let (bm, am) = (cyc(ring, b), cyc(ring, a));
        let r = pi0(&am, &bm, n, None, DEFAULT_BUDGET)?;
        let ord = ext_resolution(&bm, &am, n)?.order();
        ok &= r.bijective
            && r.stable == Some(true)
            && r.count() as u64 == expect
            && ord == Some(expect);
        out.push(format!("{}", r.count()));
    }
    Ok((ok, format!("class counts {}", out.join(","))))
}

fn same_matrices(f: &ExtMap, g: &ExtMap) -> bool {
    f.comps.len() == g.comps.len()
        && f.comps.iter().zip(&g.comps).all(|(x, y)| {
            x.source
                .elements()
                .iter()
                .all(|v| x.target.reduce(&x.apply(v)) == y.target.reduce(&y.apply(v)))
        })
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let total = 50;
    let mut passed = 0;
    for k in 0..total {
        let f = random_ext_map(&mut rng, 1 + k % 2, DEFAULT_BUDGET)?;
        let c = cylinder(&f)?;
        let pf = c.p.compose(&c.f_prime)?;
        let pm = c.p.compose(&c.m)?;
        let ok = same_matrices(&pf, &f)
            && same_matrices(&pm, &ExtMap::identity(&f.target))
            && c.f_prime.comps.iter().all(injective_by_elements)
            && sequence_exact_by_elements(&c.cyl);
        passed += usize::from(ok);
    }
    Ok((
        passed == total,
        format!("{passed}/{total} maps, seed {SEED}"),
    ))
}

fn is_identity(f: &ModMorphism) -> bool {
    f.source == f.target
        && f.source
            .elements()
            .iter()
            .all(|v| f.target.reduce(&f.apply(v)) == f.source.reduce(v))
}

fn c8() -> Outcome {
    let mut ok = true;
    let fixtures = loop_fixtures()?;
    for e in &fixtures {
        let u = universal_loop_map(&retakh(e)?)?;
        ok &= is_identity(&u.b);
        ok &=
            u.u.comps
                .iter()
                .all(|c| injective_by_elements(c) && c.source.order() == c.target.order());
        // identity on both ends means the comparison keeps the class
        ok &= is_identity(&u.u.comps[0]) && is_identity(u.u.comps.last().unwrap());
    }
    let mut pairs = 0;
    for ring in [Ring::Z, Ring::Zn(4)] {
        let v = Module::new(ring, vec![2, 2])?;
        let homs = hom_enumerate(&v, &v, DEFAULT_BUDGET)?;
        ok &= homs.len() == 16;
        for f in &homs {
            for g in &homs {
                let lhs = retakh0(f)?.compose(&retakh0(g)?)?;
                ok &= same_matrices(&lhs, &retakh0(&f.add(g)?)?);
                pairs += 1;
            }
        }
    }
    Ok((ok, format!("{} fixtures, {pairs} pairs", fixtures.len())))
}

fn commutes_everywhere(d: &Diagram) -> Result<bool, Box<dyn std::error::Error>> {
    let p = &d.poset;
    for x in 0..p.len() {
        for y in 0..p.len() {
            for z in 0..p.len() {
                if p.leq(x, y)
                    && p.leq(y, z)
                    && !same_matrices(&d.map(y, z)?.compose(&d.map(x, y)?)?, &d.map(x, z)?)
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn extends(f: &Diagram, h: &Diagram) -> Result<bool, Box<dyn std::error::Error>> {
    for (l, o) in h.poset.elements().iter().zip(&h.objs) {
        if &f.objs[f.index(l)?] != o {
            return Ok(false);
        }
    }
    for (&(a, b), g) in &h.arrows {
        if !same_matrices(
            &f.map(f.index(h.poset.label(a))?, f.index(h.poset.label(b))?)?,
            g,
        ) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn c9() -> Outcome {
    let (z2, z4) = (cyc(Ring::Z, 2), cyc(Ring::Z, 4));
    let nonsplit = ShortExact::new(
        ModMorphism::new(&z2, &z4, vec![vec![2]])?,
        ModMorphism::new(&z4, &z2, vec![vec![1]])?,
    )?;
    let mut ok = true;
    let mut filled = 0;
    for s in [ShortExact::split(&z2, &z2)?, nonsplit] {
        let e = NExtension::from_ses(&s);
        let one = fill_horn(1, 0, &constant_horn(1, &e, &[])?)?;
        ok &= one.validate().is_ok() && commutes_everywhere(&one)?;
        let autos: Vec<ExtMap> = hom_enumerate(s.e(), s.e(), DEFAULT_BUDGET)?
            .into_iter()
            .filter_map(|f| ext_map_1(&e, &e, f).ok())
            .collect();
        let mut idx = [0usize; 4];
        loop {
            let choice: Vec<ExtMap> = idx.iter().map(|&i| autos[i].clone()).collect();
            let horn = constant_horn(2, &e, &choice)?;
            let f = fill_horn(2, 0, &horn)?;
            ok &= f.validate().is_ok() && commutes_everywhere(&f)? && extends(&f, &horn)?;
            filled += 1;
            let Some(p) = idx.iter().position(|&i| i + 1 < autos.len()) else {
                break;
            };
            idx[p] += 1;
            idx[..p].iter_mut().for_each(|i| *i = 0);
        }
    }
    Ok((ok, format!("{filled} horns of dimension 2 filled")))
}

fn c10() -> Outcome {
    let mut ok = true;
    let mut out = Vec::new();
    for (ring, b, a, n) in grid() {
        let expect = ext_order_oracle(ring, b, a, n);
        let (bm, am) = (cyc(ring, b), cyc(ring, a));
        let h = higher_ext(&bm, &am, n, None, DEFAULT_BUDGET)?;
        let res = ext_resolution(&bm, &am, n)?;
        let classes = pi0(&am, &bm, n, None, DEFAULT_BUDGET)?.count() as u64;
        ok &= h.group == res
            && h.stable == Some(true)
            && h.group.order() == Some(expect)
            && classes == expect;
        if n == 2 {
            ok &= comparison(&bm, &am, n, None, DEFAULT_BUDGET)?.ok();
        }
        out.push(h.group.to_string());
    }
    Ok((ok, out.join(", ")))
}

fn equivalent(s: &ShortExact, t: &ShortExact) -> Result<bool, Box<dyn std::error::Error>> {
    Ok(ses_equivalence(s, t)?.is_some())
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ext = Ext1Cache::default();
    let r = Ring::Zn(4);
    let total = 20;
    let mut passed = 0;
    let mut nonsplit = 0;
    for _ in 0..total {
        let s1 = sample::ses(&mut rng, r, 2);
        let s2 = sample::ses_from(&mut rng, s1.e(), 2);
        let w = et4_witness(&mut ext, &s1, &s2)?;
        // the three conditions as equivalences of sequences
        let et41 = equivalent(&w.bottom, &pushout_ses(&s2, &s1.p)?.0)?;
        let et42 = equivalent(&pullback_ses(&w.third, &w.bottom.i)?.0, &s1)?;
        let et43 = equivalent(
            &pushout_ses(&w.third, &s1.i)?.0,
            &pullback_ses(&s2, &w.bottom.p)?.0,
        )?;
        let oracle4 = w.commutes
            && et41
            && et42
            && et43
            && ses_by_elements(&w.bottom.i, &w.bottom.p)
            && ses_by_elements(&w.third.i, &w.third.p);
        nonsplit += usize::from(!w.third.is_split(DEFAULT_BUDGET)?);
        let m = sample::ses_map(&mut rng, r, 2);
        let et3 = match et3_witness(&mut ext, &m.from, &m.to, &m.fa, &m.fe, DEFAULT_BUDGET)? {
            Some(c) => {
                c.compose(&m.from.p)? == m.to.p.compose(&m.fe)?
                    && ladder_middle(&m.from, &m.to, &m.fa, &c, DEFAULT_BUDGET)?.is_some()
            }
            None => false,
        };
        let x = EExtension::of_ses(&mut ext, &s1)?;
        let y = EExtension::of_ses(&mut ext, &s2)?;
        let add = additivity_check(&mut ext, &x, &y)?.ok();
        passed += usize::from(w.ok() && oracle4 && et3 && add);
    }
    Ok((
        passed == total,
        format!("{passed}/{total} pairs, {nonsplit} nonsplit third sequences, seed {SEED}"),
    ))
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let r = Ring::Zn(4);
    let total = 100;
    let (mut five, mut grid_ok) = (0, 0);
    let bijective =
        |f: &ModMorphism| injective_by_elements(f) && image_size(f) as u128 == f.target.order();
    let onto = |f: &ModMorphism| image_size(f) as u128 == f.target.order();
    for _ in 0..total {
        let m = sample::ses_map(&mut rng, r, 3);
        let mono = !(injective_by_elements(&m.fa) && injective_by_elements(&m.fb))
            || injective_by_elements(&m.fe);
        let epi = !(onto(&m.fa) && onto(&m.fb)) || onto(&m.fe);
        let iso = !(bijective(&m.fa) && bijective(&m.fb)) || bijective(&m.fe);
        five += usize::from(mono && epi && iso);
        let s = sample::ses(&mut rng, r, 3);
        let sub = sample::ses_in(&mut rng, s.e(), 3).i;
        let g = grid_from_submodule(&s, &sub)?;
        let rep = three_by_three_check(&g)?;
        let exact = g
            .rows
            .iter()
            .chain(&g.cols)
            .all(|(f, h)| ses_by_elements(f, h));
        grid_ok += usize::from(rep.commutes && exact);
    }
    Ok((
        five == total && grid_ok == total,
        format!("five lemma {five}/{total}, 3x3 {grid_ok}/{total}, seed {SEED}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("fsd generation", c1),
        ("cosimplicial identities", c2),
        ("contractibility", c3),
        ("last vertex map and unit", c4),
        ("adjunction counts", c5),
        ("Ext grid", c6),
        ("cylinder factorization", c7),
        ("universal loop map", c8),
        ("horn filling", c9),
        ("higher Ext", c10),
        ("extriangulation", c11),
        ("five lemma and 3x3", c12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
