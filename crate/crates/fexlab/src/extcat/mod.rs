//! n-extensions of finite modules and their maps, in the strict model.
//!
//! An n-extension is stored as the chain A -> E_1 -> E_1.5 -> E_2 -> ... -> E_n -> B,
//! alternating mono and epi, so objs has 2n+1 entries and maps has 2n.

pub mod horn;
pub mod pi0;
pub mod resolution;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modcat::{
    biproduct, exact_at, lift_through_mono, pullback, pullback_ses, pushout_ses, ModMorphism,
    Module, ModuleJson, Ring, ShortExact,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NExtension {
    pub objs: Vec<Module>,
    pub maps: Vec<ModMorphism>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NExtensionJson {
    pub ring: String,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub middles: Vec<Vec<u64>>,
    pub hinges: Vec<Vec<u64>>,
    /// d0, p_1, i_1, ..., p_{n-1}, i_{n-1}, d_n
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl NExtension {
    pub fn new(objs: Vec<Module>, maps: Vec<ModMorphism>) -> Result<NExtension> {
        if objs.len() < 3 || objs.len().is_multiple_of(2) || maps.len() + 1 != objs.len() {
            return Err(Error::ShapeMismatch(
                "an n-extension needs 2n+1 objects and 2n maps".into(),
            ));
        }
        for (k, f) in maps.iter().enumerate() {
            if f.source != objs[k] || f.target != objs[k + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "structure map {k} has the wrong ends"
                )));
            }
        }
        let e = NExtension { objs, maps };
        for j in 1..=e.n() {
            let (i, p) = (&e.maps[2 * j - 2], &e.maps[2 * j - 1]);
            if !i.is_mono() || !p.is_epi() || !exact_at(i, p)? {
                return Err(Error::ExactnessViolated(format!(
                    "station {j} is not short exact"
                )));
            }
        }
        Ok(e)
    }

    pub fn from_ses(s: &ShortExact) -> NExtension {
        NExtension {
            objs: vec![s.a().clone(), s.e().clone(), s.b().clone()],
            maps: vec![s.i.clone(), s.p.clone()],
        }
    }

    pub fn n(&self) -> usize {
        self.maps.len() / 2
    }

    pub fn ring(&self) -> Ring {
        self.objs[0].ring
    }

    pub fn a(&self) -> &Module {
        &self.objs[0]
    }

    pub fn b(&self) -> &Module {
        self.objs.last().unwrap()
    }

    /// E_j for 1 <= j <= n.
    pub fn middle(&self, j: usize) -> &Module {
        &self.objs[2 * j - 1]
    }

    /// E_{j.5} for 1 <= j < n.
    pub fn hinge(&self, j: usize) -> &Module {
        &self.objs[2 * j]
    }

    /// Station j as a short exact sequence.
    pub fn station(&self, j: usize) -> ShortExact {
        ShortExact {
            i: self.maps[2 * j - 2].clone(),
            p: self.maps[2 * j - 1].clone(),
        }
    }

    /// Differential E_j -> E_{j+1} of the spliced complex, with E_0 = A and E_{n+1} = B.
    pub fn differential(&self, j: usize) -> ModMorphism {
        let n = self.n();
        if j == 0 {
            self.maps[0].clone()
        } else if j == n {
            self.maps[2 * n - 1].clone()
        } else {
            self.maps[2 * j]
                .compose(&self.maps[2 * j - 1])
                .expect("composable")
        }
    }

    pub fn middle_orders(&self) -> Vec<u128> {
        (1..=self.n()).map(|j| self.middle(j).order()).collect()
    }

    pub fn to_json(&self) -> NExtensionJson {
        let n = self.n();
        NExtensionJson {
            ring: self.ring().to_string(),
            a: self.a().inv.clone(),
            b: self.b().inv.clone(),
            middles: (1..=n).map(|j| self.middle(j).inv.clone()).collect(),
            hinges: (1..n).map(|j| self.hinge(j).inv.clone()).collect(),
            maps: self.maps.iter().map(|f| f.matrix.clone()).collect(),
        }
    }

    pub fn from_json(j: &NExtensionJson) -> Result<NExtension> {
        let n = j.middles.len();
        if n == 0 || j.hinges.len() + 1 != n || j.maps.len() != 2 * n {
            return Err(Error::Parse(
                "extension json: need n middles, n-1 hinges, 2n maps".into(),
            ));
        }
        let ring = Ring::parse(&j.ring)?;
        let m = |inv: &Vec<u64>| {
            Module::from_json(&ModuleJson {
                ring: ring.to_string(),
                invariants: inv.clone(),
            })
        };
        let mut objs = vec![m(&j.a)?];
        for k in 0..n {
            objs.push(m(&j.middles[k])?);
            if k + 1 < n {
                objs.push(m(&j.hinges[k])?);
            }
        }
        objs.push(m(&j.b)?);
        let maps = j
            .maps
            .iter()
            .enumerate()
            .map(|(k, mat)| ModMorphism::new(&objs[k], &objs[k + 1], mat.clone()))
            .collect::<Result<Vec<_>>>()?;
        NExtension::new(objs, maps)
    }
}

/// Componentwise map of n-extensions, identity on A and B.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtMap {
    pub source: NExtension,
    pub target: NExtension,
    pub comps: Vec<ModMorphism>,
}

impl ExtMap {
    pub fn new(
        source: &NExtension,
        target: &NExtension,
        comps: Vec<ModMorphism>,
    ) -> Result<ExtMap> {
        Self::check(source, target, &comps, true)?;
        Ok(ExtMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    /// A map that may move the end objects (used for diagram colimits).
    pub fn new_free_ends(
        source: &NExtension,
        target: &NExtension,
        comps: Vec<ModMorphism>,
    ) -> Result<ExtMap> {
        Self::check(source, target, &comps, false)?;
        Ok(ExtMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    fn check(
        source: &NExtension,
        target: &NExtension,
        comps: &[ModMorphism],
        fixed_ends: bool,
    ) -> Result<()> {
        if source.objs.len() != target.objs.len() || comps.len() != source.objs.len() {
            return Err(Error::ShapeMismatch(
                "extension map between different lengths".into(),
            ));
        }
        for (k, c) in comps.iter().enumerate() {
            if c.source != source.objs[k] || c.target != target.objs[k] {
                return Err(Error::ShapeMismatch(format!(
                    "component {k} has the wrong ends"
                )));
            }
        }
        let last = comps.len() - 1;
        if fixed_ends
            && (comps[0] != ModMorphism::identity(source.a())
                || comps[last] != ModMorphism::identity(source.b()))
        {
            return Err(Error::NotAMap(
                "extension maps must be the identity on A and B".into(),
            ));
        }
        for k in 0..last {
            if target.maps[k].compose(&comps[k])? != comps[k + 1].compose(&source.maps[k])? {
                return Err(Error::NotAMap(format!("square {k} does not commute")));
            }
        }
        Ok(())
    }

    pub fn identity(e: &NExtension) -> ExtMap {
        ExtMap {
            source: e.clone(),
            target: e.clone(),
            comps: e.objs.iter().map(ModMorphism::identity).collect(),
        }
    }

    /// self after other
    pub fn compose(&self, other: &ExtMap) -> Result<ExtMap> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch("extension maps do not compose".into()));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<_>>()?;
        Ok(ExtMap {
            source: other.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }

    pub fn is_termwise_mono(&self) -> bool {
        self.comps.iter().all(|c| c.is_mono())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|c| c.is_iso())
    }

    /// Hinge components f_{j.5}.
    pub fn hinge_comps(&self) -> Vec<&ModMorphism> {
        (1..self.source.n()).map(|j| &self.comps[2 * j]).collect()
    }
}

/// The split base point sigma_n(B, A).
pub fn sigma(n: usize, b: &Module, a: &Module) -> Result<NExtension> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("sigma needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(NExtension::from_ses(&ShortExact::split(a, b)?));
    }
    let zero = Module::zero(a.ring);
    let mut objs = vec![a.clone(), a.clone()];
    for _ in 1..n - 1 {
        objs.push(zero.clone());
        objs.push(zero.clone());
    }
    objs.push(zero.clone());
    objs.push(b.clone());
    objs.push(b.clone());
    let last = objs.len() - 1;
    let maps = (0..last)
        .map(|k| {
            if objs[k] == objs[k + 1] && (k == 0 || k + 1 == last) {
                ModMorphism::identity(&objs[k])
            } else {
                ModMorphism::zero(&objs[k], &objs[k + 1])
            }
        })
        .collect();
    NExtension::new(objs, maps)
}

/// B -> B + B -> B with (-1; 1) and (1 1).
pub fn rho(b: &Module) -> Result<ShortExact> {
    let id = ModMorphism::identity(b);
    let i = ModMorphism::vstack(&[&id.neg(), &id])?;
    let p = ModMorphism::hstack(&[&id, &id])?;
    ShortExact::new(i, p)
}

/// Concatenate E (ending at C) with a short exact sequence starting at C.
pub fn splice(e: &NExtension, s: &ShortExact) -> Result<NExtension> {
    if e.b() != s.a() {
        return Err(Error::EndpointMismatch(format!(
            "extension ends at {} but sequence starts at {}",
            e.b(),
            s.a()
        )));
    }
    let mut objs = e.objs.clone();
    objs.push(s.e().clone());
    objs.push(s.b().clone());
    let mut maps = e.maps.clone();
    maps.push(s.i.clone());
    maps.push(s.p.clone());
    NExtension::new(objs, maps)
}

/// Two maps from the split base point of length n+1 into a common centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    pub center: NExtension,
    pub legs: [ExtMap; 2],
}

impl Loop {
    pub fn new(center: NExtension, g1: ExtMap, g2: ExtMap) -> Result<Loop> {
        let base = sigma(center.n(), center.b(), center.a())?;
        for g in [&g1, &g2] {
            if g.source != base || g.target != center {
                return Err(Error::NotAMap(
                    "loop legs must run from the split base point to the centre".into(),
                ));
            }
        }
        Ok(Loop {
            center,
            legs: [g1, g2],
        })
    }
}

/// The loop through splice(E, rho_B).
pub fn retakh(e: &NExtension) -> Result<Loop> {
    let b = e.b();
    let center = splice(e, &rho(b)?)?;
    let base = sigma(e.n() + 1, b, e.a())?;
    let last = center.objs.len() - 1;
    let leg = |which: usize| -> Result<ExtMap> {
        let comps = (0..=last)
            .map(|k| {
                if k == 0 || k == last {
                    Ok(ModMorphism::identity(&center.objs[k]))
                } else if k == 1 {
                    Ok(e.maps[0].clone())
                } else if k == last - 1 {
                    let id = ModMorphism::identity(b);
                    let z = ModMorphism::zero(b, b);
                    if which == 0 {
                        ModMorphism::vstack(&[&id, &z])
                    } else {
                        ModMorphism::vstack(&[&z, &id])
                    }
                } else {
                    Ok(ModMorphism::zero(&base.objs[k], &center.objs[k]))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ExtMap::new(&base, &center, comps)
    };
    Loop::new(center.clone(), leg(0)?, leg(1)?)
}

/// Automorphism (1 f; 0 1) of sigma_1(B, A).
pub fn retakh0(f: &ModMorphism) -> Result<ExtMap> {
    let (b, a) = (&f.source, &f.target);
    let s = sigma(1, b, a)?;
    let mid = ModMorphism::block(&[
        vec![&ModMorphism::identity(a), f],
        vec![&ModMorphism::zero(a, b), &ModMorphism::identity(b)],
    ])?;
    ExtMap::new(
        &s,
        &s,
        vec![ModMorphism::identity(a), mid, ModMorphism::identity(b)],
    )
}

pub struct Cylinder {
    pub f_prime: ExtMap,
    pub cyl: NExtension,
    pub p: ExtMap,
    pub m: ExtMap,
}

/// Factor f: E -> F as a termwise mono followed by a retraction p with section m.
pub fn cylinder(f: &ExtMap) -> Result<Cylinder> {
    let (e, fx) = (&f.source, &f.target);
    let n = e.n();
    if n == 1 {
        let inv = f
            .comps
            .iter()
            .map(|c| c.inverse())
            .collect::<Result<Vec<_>>>()?;
        let m = ExtMap::new(fx, e, inv)?;
        return Ok(Cylinder {
            f_prime: ExtMap::identity(e),
            cyl: e.clone(),
            p: f.clone(),
            m,
        });
    }
    multi_cylinder(fx, &[f]).map(|mc| Cylinder {
        f_prime: mc.f_primes.into_iter().next().unwrap(),
        cyl: mc.cyl,
        p: mc.p,
        m: mc.m,
    })
}

pub struct MultiCylinder {
    pub f_primes: Vec<ExtMap>,
    pub cyl: NExtension,
    pub p: ExtMap,
    pub m: ExtMap,
}

/// Cylinder for several maps into F at once: F plus one contractible block per source.
pub fn multi_cylinder(fx: &NExtension, fs: &[&ExtMap]) -> Result<MultiCylinder> {
    let n = fx.n();
    if n < 2 {
        return Err(Error::Unsupported("the block cylinder needs n >= 2".into()));
    }
    for f in fs {
        if f.target != *fx {
            return Err(Error::ShapeMismatch(
                "cylinder maps must share a target".into(),
            ));
        }
    }
    let last = 2 * n;
    // block objects per source at position k
    // middle j (k = 2j-1): E_{j+1} + E_j, except j = 1 (E_2) and j = n (E_n); hinge j (k = 2j): E_{j+1}
    let block_parts = |k: usize| -> Vec<usize> {
        if k == 0 || k == last {
            vec![]
        } else if k.is_multiple_of(2) {
            vec![k + 1]
        } else {
            let j = k.div_ceil(2);
            if j == 1 && n > 1 {
                vec![k + 2]
            } else if j == n {
                vec![k]
            } else {
                vec![k + 2, k]
            }
        }
    };
    let mut objs = Vec::new();
    for k in 0..=last {
        let mut parts: Vec<&Module> = vec![&fx.objs[k]];
        for f in fs {
            for &q in &block_parts(k) {
                parts.push(&f.source.objs[q]);
            }
        }
        objs.push(Module::direct_sum(&parts)?);
    }
    // structure maps as block matrices
    let mut maps = Vec::new();
    for k in 0..last {
        let src_parts = block_parts(k);
        let tgt_parts = block_parts(k + 1);
        let mut rows: Vec<Vec<ModMorphism>> = Vec::new();
        // F row
        let mut frow = vec![fx.maps[k].clone()];
        for f in fs {
            for &q in &src_parts {
                frow.push(ModMorphism::zero(&f.source.objs[q], &fx.objs[k + 1]));
            }
        }
        rows.push(frow);
        for (si, f) in fs.iter().enumerate() {
            for &tq in &tgt_parts {
                let mut row = vec![ModMorphism::zero(&fx.objs[k], &f.source.objs[tq])];
                for (sj, g) in fs.iter().enumerate() {
                    for &sq in &src_parts {
                        let x = &g.source.objs[sq];
                        let y = &f.source.objs[tq];
                        // identity between equal block slots of the same source
                        row.push(if si == sj && sq == tq {
                            ModMorphism::identity(x)
                        } else {
                            ModMorphism::zero(x, y)
                        });
                    }
                }
                rows.push(row);
            }
        }
        let refs: Vec<Vec<&ModMorphism>> = rows.iter().map(|r| r.iter().collect()).collect();
        let mut mm = ModMorphism::block(&refs)?;
        mm.source = objs[k].clone();
        mm.target = objs[k + 1].clone();
        maps.push(mm);
    }
    let cyl = NExtension::new(objs.clone(), maps)?;
    // f'_i: E^i -> C is (f; block components)
    let mut f_primes = Vec::new();
    for (si, f) in fs.iter().enumerate() {
        let e = &f.source;
        let mut comps = Vec::new();
        for k in 0..=last {
            if k == 0 || k == last {
                comps.push(ModMorphism::identity(&objs[k]));
                continue;
            }
            let mut rows: Vec<ModMorphism> = vec![f.comps[k].clone()];
            for (sj, g) in fs.iter().enumerate() {
                for &q in &block_parts(k) {
                    let y = &g.source.objs[q];
                    rows.push(if sj != si {
                        ModMorphism::zero(&e.objs[k], y)
                    } else if q == k {
                        ModMorphism::identity(y)
                    } else if k % 2 == 1 {
                        // middle: differential E_j -> E_{j+1}
                        e.maps[k + 1].compose(&e.maps[k])?
                    } else {
                        e.maps[k].clone()
                    });
                }
            }
            let mut c = ModMorphism::vstack(&rows.iter().collect::<Vec<_>>())?;
            c.target = objs[k].clone();
            comps.push(c);
        }
        f_primes.push(ExtMap::new(e, &cyl, comps)?);
    }
    let bp: Vec<_> = (0..=last)
        .map(|k| {
            let mut parts: Vec<&Module> = vec![&fx.objs[k]];
            for f in fs {
                for &q in &block_parts(k) {
                    parts.push(&f.source.objs[q]);
                }
            }
            biproduct(&parts)
        })
        .collect::<Result<_>>()?;
    let fix = |mut f: ModMorphism, s: &Module, t: &Module| {
        f.source = s.clone();
        f.target = t.clone();
        f
    };
    let p_comps: Vec<ModMorphism> = (0..=last)
        .map(|k| fix(bp[k].proj[0].clone(), &objs[k], &fx.objs[k]))
        .collect();
    let m_comps: Vec<ModMorphism> = (0..=last)
        .map(|k| fix(bp[k].inj[0].clone(), &fx.objs[k], &objs[k]))
        .collect();
    let p = ExtMap::new(&cyl, fx, p_comps)?;
    let m = ExtMap::new(fx, &cyl, m_comps)?;
    Ok(MultiCylinder {
        f_primes,
        cyl,
        p,
        m,
    })
}

/// Yoneda sum of two 1-extensions: pull back over B, push out along the codiagonal.
pub fn baer_sum(x: &ShortExact, y: &ShortExact) -> Result<ShortExact> {
    if x.a() != y.a() || x.b() != y.b() {
        return Err(Error::EndpointMismatch(
            "Baer sum needs equal end terms".into(),
        ));
    }
    let a = x.a();
    let sq = pullback(&x.p, &y.p)?;
    let q = ModMorphism::hstack(&[&x.p, &y.p.neg()])?;
    let (_, incl) = crate::modcat::kernel(&q)?;
    let ia = ModMorphism::vstack(&[&x.i, &ModMorphism::zero(a, y.e())])?;
    let ib = ModMorphism::vstack(&[&ModMorphism::zero(a, x.e()), &y.i])?;
    let i2 = lift_through_mono(&incl, &ModMorphism::hstack(&[&ia, &ib])?)?;
    let p2 = x.p.compose(&sq.left)?;
    let big = ShortExact::new(i2, p2)?;
    let id = ModMorphism::identity(a);
    let codiag = ModMorphism::hstack(&[&id, &id])?;
    Ok(pushout_ses(&big, &codiag)?.0)
}

/// Data produced by the universal loop map.
pub struct UniversalLoop {
    pub e: NExtension,
    pub b: ModMorphism,
    /// centre map splice(E, rho_B) -> centre of the loop
    pub u: ExtMap,
}

pub fn universal_loop_map(g: &Loop) -> Result<UniversalLoop> {
    let f = &g.center;
    let n1 = f.n();
    if n1 < 2 {
        return Err(Error::ShapeMismatch(
            "loops live on extensions of length at least 2".into(),
        ));
    }
    let n = n1 - 1;
    let last_mid = 2 * n1 - 1;
    let diff = g.legs[1].comps[last_mid].sub(&g.legs[0].comps[last_mid])?;
    let i_n = &f.maps[2 * n];
    let b = lift_through_mono(i_n, &diff)?;
    let station = f.station(n);
    let (s2, leg) = pullback_ses(&station, &b)?;
    let mut objs: Vec<Module> = f.objs[..2 * n - 1].to_vec();
    objs.push(s2.e().clone());
    objs.push(s2.b().clone());
    let mut maps: Vec<ModMorphism> = f.maps[..2 * n - 2].to_vec();
    maps.push(s2.i.clone());
    maps.push(s2.p.clone());
    let e = NExtension::new(objs, maps)?;
    let r = retakh(&e)?;
    let mut comps: Vec<ModMorphism> = (0..2 * n - 1)
        .map(|k| ModMorphism::identity(&f.objs[k]))
        .collect();
    comps.push(leg);
    comps.push(b.clone());
    comps.push(ModMorphism::hstack(&[
        &g.legs[0].comps[last_mid],
        &g.legs[1].comps[last_mid],
    ])?);
    comps.push(ModMorphism::identity(f.b()));
    // hstack builds B+B as the direct sum; align with the centre's object
    comps[last_mid] = {
        let mut c = comps[last_mid].clone();
        c.source = r.center.objs[last_mid].clone();
        c
    };
    let u = ExtMap::new(&r.center, f, comps)?;
    for k in 0..2 {
        if u.compose(&r.legs[k])? != g.legs[k] {
            return Err(Error::NotAMap(
                "universal map does not carry the legs".into(),
            ));
        }
    }
    Ok(UniversalLoop { e, b, u })
}

/// ExtMap E -> E' when the middle map of a 1-extension is given.
pub fn ext_map_1(e: &NExtension, e2: &NExtension, mid: ModMorphism) -> Result<ExtMap> {
    ExtMap::new(
        e,
        e2,
        vec![
            ModMorphism::identity(e.a()),
            mid,
            ModMorphism::identity(e.b()),
        ],
    )
}

/// Map of 2-extensions splice(f^* x, y) -> splice(x, f_* y) with hinge f.
pub fn hinge_map(x: &ShortExact, y: &ShortExact, f: &ModMorphism) -> Result<ExtMap> {
    let (xs, to_x) = pullback_ses(x, f)?;
    let (yp, from_y) = pushout_ses(y, f)?;
    let src = splice(&NExtension::from_ses(&xs), y)?;
    let tgt = splice(&NExtension::from_ses(x), &yp)?;
    let comps = vec![
        ModMorphism::identity(x.a()),
        to_x,
        f.clone(),
        from_y,
        ModMorphism::identity(y.b()),
    ];
    ExtMap::new(&src, &tgt, comps)
}
