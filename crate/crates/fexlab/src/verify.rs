//! Batch verification of the headline checks, shared by the CLI.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coend::{comparison, higher_ext};
use crate::error::Result;
use crate::extcat::horn::{constant_horn, fill_horn};
use crate::extcat::pi0::pi0;
use crate::extcat::resolution::{cocycle_of_extension, ext_group, ext_resolution, Ext1Cache};
use crate::extcat::{
    cylinder, ext_map_1, hinge_map, retakh, retakh0, sigma, splice, universal_loop_map, ExtMap,
    NExtension,
};
use crate::extri::{additivity_check, et3_witness, et4_witness, EExtension};
use crate::fex::{check_adjunction, fex_level, fex_truncated, unit, DEFAULT_BUDGET};
use crate::homology::{cone_acyclic_through, homology, iso_on_pi0_and_h1, AbGroup};
use crate::modcat::{
    five_lemma_check, grid_from_submodule, hom_enumerate, sample, three_by_three_check,
    ModMorphism, Module, Ring, ShortExact,
};
use crate::simplicial::{SimplicialMap, SimplicialSet};
use crate::subdivision::{check_cosimplicial_identities, ell, fsd, fsd_boundary, fsd_horn};

pub const FSD1_GOLDEN: &str = include_str!("../golden/fsd1.txt");
pub const FSD2_GOLDEN: &str = include_str!("../golden/fsd2.txt");

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub budget: u64,
    /// sample counts as listed; otherwise four times as many
    pub quick: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            budget: DEFAULT_BUDGET,
            quick: true,
        }
    }
}

impl VerifyConfig {
    fn samples(&self, n: usize) -> usize {
        if self.quick {
            n
        } else {
            4 * n
        }
    }
}

pub const TITLES: [&str; 12] = [
    "fsd object counts and generator sets",
    "cosimplicial identities",
    "contractibility of fsd and its horns",
    "last vertex map and unit",
    "fsd / fEx adjunction",
    "pi0 against the resolution",
    "cylinder factorization",
    "universal loop map and Retakh law",
    "horn filling",
    "higher Ext from coends",
    "extriangulated witnesses",
    "five lemma and 3x3 lemma",
];

type Check = fn(&VerifyConfig) -> Result<(bool, String)>;

pub fn run(id: usize, cfg: &VerifyConfig) -> Criterion {
    let checks: [Check; 12] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12];
    let t = Instant::now();
    let (pass, detail) = match checks[id - 1](cfg) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Criterion {
        id,
        title: TITLES[id - 1].to_string(),
        pass,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<Criterion> {
    (1..=12).map(|id| run(id, cfg)).collect()
}

pub fn golden_arrows(text: &str) -> BTreeSet<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once("->"))
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .collect()
}

fn c1(_: &VerifyConfig) -> Result<(bool, String)> {
    let counts = (0..4)
        .map(|m| Ok(fsd(m)?.poset.len()))
        .collect::<Result<Vec<_>>>()?;
    let g1: BTreeSet<_> = fsd(1)?.poset.generator_labels().into_iter().collect();
    let g2: BTreeSet<_> = fsd(2)?.poset.generator_labels().into_iter().collect();
    let ok = counts == [1, 3, 10, 49]
        && g1 == golden_arrows(FSD1_GOLDEN)
        && g2 == golden_arrows(FSD2_GOLDEN);
    Ok((
        ok,
        format!(
            "counts {counts:?}, generators {} and {}",
            g1.len(),
            g2.len()
        ),
    ))
}

fn c2(_: &VerifyConfig) -> Result<(bool, String)> {
    let r = check_cosimplicial_identities(4)?;
    Ok((
        r.ok(),
        format!(
            "{} identities checked, {} failures",
            r.checked,
            r.failures.len()
        ),
    ))
}

fn acyclic(x: &SimplicialSet) -> bool {
    (0..=x.dim()).all(|d| match homology(x, d) {
        Some(g) if d == 0 => g == AbGroup::free(1),
        Some(g) => g.is_trivial(),
        None => false,
    })
}

fn c3(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut ok = true;
    for m in 0..4 {
        ok &= acyclic(&SimplicialSet::nerve(&fsd(m)?.poset));
        checked += 1;
        for k in 0..=m {
            if m > 0 {
                ok &= acyclic(&SimplicialSet::nerve(&fsd_horn(m, k)?));
                checked += 1;
            }
        }
    }
    let h1 = homology(&SimplicialSet::nerve(&fsd_boundary(2)?), 1);
    ok &= h1 == Some(AbGroup::free(1));
    Ok((
        ok,
        format!(
            "{checked} nerves acyclic; boundary of fsd[2] has H_1 = {}",
            h1.map(|g| g.to_string()).unwrap_or_default()
        ),
    ))
}

fn c4(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut ok = true;
    for m in 0..4 {
        let e = ell(m)?;
        let x = Arc::new(SimplicialSet::nerve(&e.source));
        let y = Arc::new(SimplicialSet::nerve(&e.target));
        ok &= cone_acyclic_through(&SimplicialMap::nerve_of(&e, x.clone(), y), x.dim() + 1);
    }
    let xs = [
        SimplicialSet::standard_simplex(1),
        SimplicialSet::boundary(2),
        SimplicialSet::quotient_circle(),
    ];
    for x in xs {
        let x = Arc::new(x);
        let f = fex_truncated(&x, 2, cfg.budget)?;
        let u = unit(&x, &f)?;
        ok &= u.check().ok && iso_on_pi0_and_h1(&u);
    }
    let level = fex_level(&Arc::new(SimplicialSet::standard_simplex(1)), 1, cfg.budget)?.len();
    ok &= level == 5;
    Ok((
        ok,
        format!("ell_m for m <= 3, unit on 3 spaces, fEx(Delta^1)_1 = {level}"),
    ))
}

fn c5(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let ks: [(usize, Vec<Vec<usize>>); 3] = [
        (0, vec![vec![0]]),
        (1, vec![vec![0, 1]]),
        (2, vec![vec![0, 1], vec![0, 2]]),
    ];
    let ys = [
        SimplicialSet::standard_simplex(1),
        SimplicialSet::quotient_circle(),
    ];
    let mut ok = true;
    let mut counts = Vec::new();
    for (m, faces) in &ks {
        for y in &ys {
            let r = check_adjunction(*m, faces, &Arc::new(y.clone()), cfg.budget)?;
            ok &= r.bijective && r.lhs == r.rhs;
            counts.push(r.lhs);
        }
    }
    Ok((ok, format!("hom counts {counts:?}")))
}

/// The grid of criterion 6: (ring, B, A, n).
pub fn ext_grid() -> Vec<(Ring, u64, u64, usize)> {
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

fn cyc(ring: Ring, d: u64) -> Result<Module> {
    Module::cyclic(ring, d)
}

fn c6(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut out = Vec::new();
    for (ring, b, a, n) in ext_grid() {
        let (bm, am) = (cyc(ring, b)?, cyc(ring, a)?);
        let r = pi0(&am, &bm, n, None, cfg.budget)?;
        let ord = ext_resolution(&bm, &am, n)?.order();
        ok &= r.bijective && r.stable == Some(true) && Some(r.count() as u64) == ord;
        out.push(r.count().to_string());
    }
    Ok((ok, format!("class counts {}", out.join(","))))
}

/// A random map of extensions of length 1 or 2 over Z/4 with identity ends.
pub fn random_ext_map<R: Rng>(rng: &mut R, n: usize, budget: u64) -> Result<ExtMap> {
    let r = Ring::Zn(4);
    if n == 1 {
        loop {
            let s = sample::ses(rng, r, 2);
            let e = NExtension::from_ses(&s);
            let autos: Vec<ExtMap> = hom_enumerate(s.e(), s.e(), budget)?
                .into_iter()
                .filter_map(|f| ext_map_1(&e, &e, f).ok())
                .collect();
            if !autos.is_empty() {
                return Ok(autos[rng.gen_range(0..autos.len())].clone());
            }
        }
    }
    let x = sample::ses(rng, r, 2);
    let c = sample::module(rng, r, 2);
    let y = sample::ses_from(rng, &c, 2);
    let f = sample::morphism(rng, &c, x.b());
    hinge_map(&x, &y, &f)
}

fn c7(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = cfg.samples(50);
    let mut passed = 0;
    for k in 0..total {
        let f = random_ext_map(&mut rng, 1 + k % 2, cfg.budget)?;
        let c = cylinder(&f)?;
        let id = ExtMap::identity(&f.target);
        let exact = NExtension::new(c.cyl.objs.clone(), c.cyl.maps.clone()).is_ok();
        if c.p.compose(&c.f_prime)? == f
            && c.p.compose(&c.m)? == id
            && c.f_prime.is_termwise_mono()
            && exact
        {
            passed += 1;
        }
    }
    Ok((
        passed == total,
        format!("{passed}/{total} seeded maps (seed {})", cfg.seed),
    ))
}

/// Extensions of length 1 and 2 used as fixtures.
pub fn loop_fixtures() -> Result<Vec<NExtension>> {
    let mut out = Vec::new();
    for ring in [Ring::Z, Ring::Zn(4)] {
        let (z2, z4) = (cyc(ring, 2)?, cyc(ring, 4)?);
        let s = ShortExact::new(
            ModMorphism::new(&z2, &z4, vec![vec![2]])?,
            ModMorphism::new(&z4, &z2, vec![vec![1]])?,
        )?;
        out.push(NExtension::from_ses(&s));
        out.push(NExtension::from_ses(&ShortExact::split(&z2, &z2)?));
        if ring != Ring::Z {
            out.push(splice(&NExtension::from_ses(&s), &s)?);
            out.push(sigma(2, &z2, &z4)?);
        }
    }
    Ok(out)
}

fn c8(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let fixtures = loop_fixtures()?;
    for e in &fixtures {
        let u = universal_loop_map(&retakh(e)?)?;
        let g = ext_group(e.b(), e.a(), e.n())?;
        ok &= u.b == ModMorphism::identity(e.b()) && u.u.is_iso();
        ok &= cocycle_of_extension(&u.e, &g)? == cocycle_of_extension(e, &g)?;
    }
    let mut pairs = 0;
    for ring in [Ring::Z, Ring::Zn(4)] {
        let v = Module::new(ring, vec![2, 2])?;
        let homs = hom_enumerate(&v, &v, cfg.budget)?;
        for f in &homs {
            for g in &homs {
                ok &= retakh0(f)?.compose(&retakh0(g)?)? == retakh0(&f.add(g)?)?;
                pairs += 1;
            }
        }
    }
    Ok((
        ok,
        format!("{} fixtures, {pairs} pairs of homs", fixtures.len()),
    ))
}

fn c9(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let z2 = cyc(Ring::Z, 2)?;
    let z4 = cyc(Ring::Z, 4)?;
    let nonsplit = ShortExact::new(
        ModMorphism::new(&z2, &z4, vec![vec![2]])?,
        ModMorphism::new(&z4, &z2, vec![vec![1]])?,
    )?;
    let mut ok = true;
    let mut filled = 0;
    for s in [ShortExact::split(&z2, &z2)?, nonsplit] {
        let e = NExtension::from_ses(&s);
        let one = fill_horn(1, 0, &constant_horn(1, &e, &[])?)?;
        ok &= one.validate().is_ok();
        let autos: Vec<ExtMap> = hom_enumerate(s.e(), s.e(), cfg.budget)?
            .into_iter()
            .filter_map(|f| ext_map_1(&e, &e, f).ok())
            .collect();
        let covers = 4;
        let mut idx = vec![0usize; covers];
        loop {
            let choice: Vec<ExtMap> = idx.iter().map(|&i| autos[i].clone()).collect();
            let horn = constant_horn(2, &e, &choice)?;
            let f = fill_horn(2, 0, &horn)?;
            ok &= f.validate().is_ok() && restricts(&f, &horn)?;
            filled += 1;
            let Some(p) = idx.iter().position(|&i| i + 1 < autos.len()) else {
                break;
            };
            idx[p] += 1;
            idx[..p].iter_mut().for_each(|i| *i = 0);
        }
    }
    Ok((ok, format!("{filled} horns filled")))
}

fn restricts(f: &crate::extcat::horn::Diagram, h: &crate::extcat::horn::Diagram) -> Result<bool> {
    for (l, o) in h.poset.elements().iter().zip(&h.objs) {
        if &f.objs[f.index(l)?] != o {
            return Ok(false);
        }
    }
    for (&(a, b), g) in &h.arrows {
        if &f.map(f.index(h.poset.label(a))?, f.index(h.poset.label(b))?)? != g {
            return Ok(false);
        }
    }
    Ok(true)
}

fn c10(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut out = Vec::new();
    for (ring, b, a, n) in ext_grid() {
        let (bm, am) = (cyc(ring, b)?, cyc(ring, a)?);
        let h = higher_ext(&bm, &am, n, None, cfg.budget)?;
        let res = ext_resolution(&bm, &am, n)?;
        let classes = pi0(&am, &bm, n, None, cfg.budget)?.count() as u64;
        ok &= h.group == res && h.stable == Some(true) && h.group.order() == Some(classes);
        if n == 2 {
            ok &= comparison(&bm, &am, n, None, cfg.budget)?.ok();
        }
        out.push(h.group.to_string());
    }
    Ok((ok, out.join(", ")))
}

fn c11(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ext = Ext1Cache::default();
    let r = Ring::Zn(4);
    let total = cfg.samples(20);
    let mut passed = 0;
    for _ in 0..total {
        let s1 = sample::ses(&mut rng, r, 2);
        let s2 = sample::ses_from(&mut rng, s1.e(), 2);
        let w = et4_witness(&mut ext, &s1, &s2)?;
        let m = sample::ses_map(&mut rng, r, 2);
        let et3 = et3_witness(&mut ext, &m.from, &m.to, &m.fa, &m.fe, cfg.budget)?.is_some();
        let x = EExtension::of_ses(&mut ext, &s1)?;
        let y = EExtension::of_ses(&mut ext, &s2)?;
        let add = additivity_check(&mut ext, &x, &y)?.ok();
        if w.ok() && et3 && add {
            passed += 1;
        }
    }
    Ok((
        passed == total,
        format!("{passed}/{total} sampled pairs (seed {})", cfg.seed),
    ))
}

fn c12(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = Ring::Zn(4);
    let total = cfg.samples(100);
    let (mut five, mut grid) = (0, 0);
    for _ in 0..total {
        five += usize::from(five_lemma_check(&sample::ses_map(&mut rng, r, 3)).ok());
        let s = sample::ses(&mut rng, r, 3);
        let sub = sample::ses_in(&mut rng, s.e(), 3).i;
        let rep = three_by_three_check(&grid_from_submodule(&s, &sub)?)?;
        grid += usize::from(rep.commutes && rep.columns_exact && rep.rows_exact.iter().all(|&x| x));
    }
    Ok((
        five == total && grid == total,
        format!(
            "five lemma {five}/{total}, 3x3 {grid}/{total} (seed {})",
            cfg.seed
        ),
    ))
}
