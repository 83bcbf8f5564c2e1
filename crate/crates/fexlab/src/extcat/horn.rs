//! Poset-indexed diagrams of n-extensions, cofibrant replacement, cocones and horn fillers.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modcat::{biproduct, cokernel, factor_through_epi, ModMorphism, Module};
use crate::poset::{Poset, PosetMap};
use crate::subdivision::{fat_horn, fsd, fsd_horn, FsdObject};

use super::{multi_cylinder, ExtMap, NExtension, NExtensionJson};

/// A strictly commuting diagram; arrows are stored on covering relations.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub poset: Arc<Poset>,
    pub objs: Vec<NExtension>,
    pub arrows: BTreeMap<(usize, usize), ExtMap>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowJson {
    pub source: String,
    pub target: String,
    pub comps: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub elements: Vec<String>,
    pub objects: Vec<NExtensionJson>,
    pub arrows: Vec<ArrowJson>,
}

/// Input of the horn filler: a diagram on the fsd of the 0-horn of the m-simplex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HornJson {
    pub m: usize,
    #[serde(default)]
    pub k: usize,
    pub diagram: DiagramJson,
}

impl Diagram {
    pub fn new(
        poset: Arc<Poset>,
        objs: Vec<NExtension>,
        arrows: BTreeMap<(usize, usize), ExtMap>,
    ) -> Result<Diagram> {
        let d = Diagram {
            poset,
            objs,
            arrows,
        };
        d.validate()?;
        Ok(d)
    }

    /// Every cover carries a map with the right ends, and parallel paths agree.
    pub fn validate(&self) -> Result<()> {
        let p = &self.poset;
        if self.objs.len() != p.len() {
            return Err(Error::ShapeMismatch(
                "one extension per poset element".into(),
            ));
        }
        let covers = p.covers();
        if covers.len() != self.arrows.len() {
            return Err(Error::ShapeMismatch(
                "arrows must sit exactly on the covering relations".into(),
            ));
        }
        for &(a, b) in &covers {
            let f = self.arrows.get(&(a, b)).ok_or_else(|| {
                Error::ShapeMismatch(format!("missing arrow {} -> {}", p.label(a), p.label(b)))
            })?;
            if f.source != self.objs[a] || f.target != self.objs[b] {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} -> {} has the wrong ends",
                    p.label(a),
                    p.label(b)
                )));
            }
        }
        let mut into: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in &covers {
            into.entry(b).or_default().push(a);
        }
        let order = p.linear_extension();
        for x in 0..p.len() {
            let mut from_x: HashMap<usize, ExtMap> = HashMap::new();
            from_x.insert(x, ExtMap::identity(&self.objs[x]));
            for &y in &order {
                if y == x || !p.leq(x, y) {
                    continue;
                }
                let mut got: Option<ExtMap> = None;
                for &z in into.get(&y).into_iter().flatten() {
                    if !p.leq(x, z) {
                        continue;
                    }
                    let c = self.arrows[&(z, y)].compose(&from_x[&z])?;
                    match &got {
                        None => got = Some(c),
                        Some(g) if *g != c => {
                            return Err(Error::NotAMap(format!(
                                "paths {} -> {} do not commute",
                                p.label(x),
                                p.label(y)
                            )))
                        }
                        _ => {}
                    }
                }
                from_x.insert(y, got.expect("x < y has a cover below y"));
            }
        }
        Ok(())
    }

    /// Composite along any chain from x to y.
    pub fn map(&self, x: usize, y: usize) -> Result<ExtMap> {
        if x == y {
            return Ok(ExtMap::identity(&self.objs[x]));
        }
        if !self.poset.leq(x, y) {
            return Err(Error::NotAMap(format!(
                "{} is not below {}",
                self.poset.label(x),
                self.poset.label(y)
            )));
        }
        for (&(a, b), f) in &self.arrows {
            if b == y && self.poset.leq(x, a) {
                return f.compose(&self.map(x, a)?);
            }
        }
        unreachable!("x < y has a cover below y")
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.poset
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn all_termwise_mono(&self) -> bool {
        self.arrows.values().all(|f| f.is_termwise_mono())
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            elements: self.poset.elements().to_vec(),
            objects: self.objs.iter().map(|e| e.to_json()).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|(&(a, b), f)| ArrowJson {
                    source: self.poset.label(a).to_string(),
                    target: self.poset.label(b).to_string(),
                    comps: f.comps.iter().map(|c| c.matrix.clone()).collect(),
                })
                .collect(),
        }
    }

    /// Read a diagram on a given poset; element labels must match.
    pub fn from_json(poset: Arc<Poset>, j: &DiagramJson) -> Result<Diagram> {
        if j.elements.len() != poset.len() || j.objects.len() != poset.len() {
            return Err(Error::ShapeMismatch(
                "diagram does not match the indexing poset".into(),
            ));
        }
        let mut objs: Vec<Option<NExtension>> = vec![None; poset.len()];
        for (l, o) in j.elements.iter().zip(&j.objects) {
            let i = poset
                .index_of(l)
                .ok_or_else(|| Error::UnknownLabel(l.clone()))?;
            objs[i] = Some(NExtension::from_json(o)?);
        }
        let objs: Vec<NExtension> = objs
            .into_iter()
            .map(|o| o.expect("labels are distinct"))
            .collect();
        let mut arrows = BTreeMap::new();
        for a in &j.arrows {
            let s = poset
                .index_of(&a.source)
                .ok_or_else(|| Error::UnknownLabel(a.source.clone()))?;
            let t = poset
                .index_of(&a.target)
                .ok_or_else(|| Error::UnknownLabel(a.target.clone()))?;
            let (es, et) = (&objs[s], &objs[t]);
            if a.comps.len() != es.objs.len() {
                return Err(Error::ShapeMismatch(
                    "arrow has the wrong number of components".into(),
                ));
            }
            let comps = a
                .comps
                .iter()
                .enumerate()
                .map(|(k, m)| ModMorphism::new(&es.objs[k], &et.objs[k], m.clone()))
                .collect::<Result<_>>()?;
            arrows.insert((s, t), ExtMap::new(es, et, comps)?);
        }
        Diagram::new(poset, objs, arrows)
    }
}

/// H_0 with the natural map H_0 -> D; identity on minimal objects.
#[derive(Clone, Debug)]
pub struct Cofibrant {
    pub h0: Diagram,
    pub to_d: Vec<ExtMap>,
}

/// Replace every arrow by a termwise mono.
///
/// Diagrams that are already termwise mono are returned unchanged. Otherwise the poset must have
/// height at most one, and each target is replaced by the block cylinder of all arrows into it.
pub fn make_cofibrant(d: &Diagram) -> Result<Cofibrant> {
    if d.all_termwise_mono() {
        return Ok(Cofibrant {
            h0: d.clone(),
            to_d: d.objs.iter().map(ExtMap::identity).collect(),
        });
    }
    let heights = d.poset.heights();
    if heights.iter().any(|&h| h > 1) {
        return Err(Error::Unsupported(
            "strict cofibrant replacement is implemented for diagrams of height at most one".into(),
        ));
    }
    let mut objs = d.objs.clone();
    let mut to_d: Vec<ExtMap> = d.objs.iter().map(ExtMap::identity).collect();
    let mut arrows = BTreeMap::new();
    for j in 0..d.poset.len() {
        let incoming: Vec<(usize, &ExtMap)> = d
            .arrows
            .iter()
            .filter(|(&(_, b), _)| b == j)
            .map(|(&(a, _), f)| (a, f))
            .collect();
        if incoming.is_empty() {
            continue;
        }
        let fs: Vec<&ExtMap> = incoming.iter().map(|&(_, f)| f).collect();
        let mc = multi_cylinder(&d.objs[j], &fs)?;
        objs[j] = mc.cyl.clone();
        to_d[j] = mc.p;
        for ((a, _), fp) in incoming.iter().zip(mc.f_primes) {
            arrows.insert((*a, j), fp);
        }
    }
    let h0 = Diagram::new(d.poset.clone(), objs, arrows)?;
    Ok(Cofibrant { h0, to_d })
}

/// Cocone with its legs, one per poset element.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub apex: NExtension,
    pub legs: Vec<ExtMap>,
}

/// Colimit computed position by position, with the end terms identified with A and B.
pub fn cocone(d: &Diagram) -> Result<Cocone> {
    if !d.poset.is_connected() {
        return Err(Error::HypothesisViolated(
            "cocones need a connected indexing poset".into(),
        ));
    }
    if !d.all_termwise_mono() {
        return Err(Error::HypothesisViolated(
            "cocone needs termwise mono arrows".into(),
        ));
    }
    let p = &d.poset;
    let count = p.len();
    if let Some(t) = (0..count).find(|&t| (0..count).all(|x| p.leq(x, t))) {
        let legs = (0..count).map(|x| d.map(x, t)).collect::<Result<_>>()?;
        return Ok(Cocone {
            apex: d.objs[t].clone(),
            legs,
        });
    }
    let e0 = &d.objs[0];
    let last = e0.objs.len() - 1;
    let mut apex_objs = Vec::new();
    let mut quot = Vec::new();
    let mut sums = Vec::new();
    for k in 0..=last {
        let parts: Vec<&Module> = d.objs.iter().map(|e| &e.objs[k]).collect();
        let bp = biproduct(&parts)?;
        let rel_src = Module {
            ring: e0.ring(),
            inv: d
                .arrows
                .keys()
                .flat_map(|&(a, _)| d.objs[a].objs[k].inv.iter().copied())
                .collect(),
        };
        let mut cols: Vec<ModMorphism> = Vec::new();
        for (&(a, b), f) in &d.arrows {
            cols.push(bp.inj[b].compose(&f.comps[k])?.sub(&bp.inj[a])?);
        }
        let rel = if cols.is_empty() {
            ModMorphism::zero(&rel_src, &bp.sum)
        } else {
            let mut r = ModMorphism::hstack(&cols.iter().collect::<Vec<_>>())?;
            r.source = rel_src;
            r
        };
        let (obj, q) = cokernel(&rel)?;
        apex_objs.push(obj);
        quot.push(q);
        sums.push(bp);
    }
    let mut maps = Vec::new();
    for k in 0..last {
        let diag: Vec<&ModMorphism> = d.objs.iter().map(|e| &e.maps[k]).collect();
        let mut dm = ModMorphism::diag(&diag)?;
        dm.source = sums[k].sum.clone();
        dm.target = sums[k + 1].sum.clone();
        maps.push(factor_through_epi(&quot[k], &quot[k + 1].compose(&dm)?)?);
    }
    let leg = |x: usize, k: usize| quot[k].compose(&sums[k].inj[x]);
    let alpha = leg(0, 0)?;
    let beta = leg(0, last)?;
    if !alpha.is_iso() || !beta.is_iso() {
        return Err(Error::HypothesisViolated(
            "end terms of the colimit are not A and B".into(),
        ));
    }
    apex_objs[0] = e0.a().clone();
    apex_objs[last] = e0.b().clone();
    maps[0] = maps[0].compose(&alpha)?;
    maps[last - 1] = beta.inverse()?.compose(&maps[last - 1])?;
    let apex = NExtension::new(apex_objs, maps)
        .map_err(|e| Error::HypothesisViolated(format!("colimit is not an extension: {e}")))?;
    let mut legs = Vec::new();
    for x in 0..count {
        if leg(x, 0)? != alpha || leg(x, last)? != beta {
            return Err(Error::HypothesisViolated(
                "legs disagree on the end terms".into(),
            ));
        }
        let mut comps = vec![ModMorphism::identity(e0.a())];
        for k in 1..last {
            comps.push(leg(x, k)?);
        }
        comps.push(ModMorphism::identity(e0.b()));
        legs.push(ExtMap::new(&d.objs[x], &apex, comps)?);
    }
    Ok(Cocone { apex, legs })
}

/// Where an element of the fat horn sits relative to the horn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Place {
    /// boundary object of the horn itself
    Orig(usize),
    /// thickening of a horn object; singletons count as their own thickening
    Thick(usize),
    Central,
}

fn places(m: usize, horn: &Poset, fat: &Poset) -> Result<Vec<Place>> {
    let central = fsd(m)?.central().label();
    let mut thick: HashMap<String, usize> = HashMap::new();
    for (i, l) in horn.elements().iter().enumerate() {
        let o = FsdObject::parse(l)?;
        if o.is_singleton() {
            thick.insert(l.clone(), i);
        } else {
            thick.insert(o.thicken(m).label(), i);
        }
    }
    fat.elements()
        .iter()
        .map(|l| {
            if *l == central {
                Ok(Place::Central)
            } else if let Some(&i) = thick.get(l) {
                Ok(Place::Thick(i))
            } else if let Some(i) = horn.index_of(l) {
                Ok(Place::Orig(i))
            } else {
                Err(Error::UnknownLabel(format!("{l} is not in the fat horn")))
            }
        })
        .collect()
}

/// Extend a diagram on fsd of the 0-horn to the fat horn.
pub fn fill_fat_horn(m: usize, d: &Diagram) -> Result<Diagram> {
    let horn = fsd_horn(m, 0)?;
    if d.poset.elements() != horn.elements() {
        return Err(Error::ShapeMismatch(
            "diagram is not indexed by the 0-horn".into(),
        ));
    }
    let fat = Arc::new(fat_horn(m)?);
    let pl = places(m, &horn, &fat)?;
    let cof = make_cofibrant(d)?;
    let cc = cocone(&cof.h0)?;
    let obj = |p: Place| match p {
        Place::Orig(i) => d.objs[i].clone(),
        Place::Thick(i) => cof.h0.objs[i].clone(),
        Place::Central => cc.apex.clone(),
    };
    let arrow = |x: Place, y: Place| -> Result<ExtMap> {
        match (x, y) {
            (Place::Orig(a), Place::Orig(b)) => d.map(a, b),
            (Place::Thick(a), Place::Thick(b)) => cof.h0.map(a, b),
            (Place::Thick(a), Place::Orig(b)) => d.map(a, b)?.compose(&cof.to_d[a]),
            (Place::Thick(a), Place::Central) => Ok(cc.legs[a].clone()),
            (Place::Central, Place::Central) => Ok(ExtMap::identity(&cc.apex)),
            _ => Err(Error::NotAMap(
                "no arrow of this shape in the fat horn".into(),
            )),
        }
    };
    let objs: Vec<NExtension> = pl.iter().map(|&p| obj(p)).collect();
    let mut arrows = BTreeMap::new();
    for (a, b) in fat.covers() {
        arrows.insert((a, b), arrow(pl[a], pl[b])?);
    }
    Diagram::new(fat, objs, arrows)
}

/// Fill a 0-horn to a diagram on fsd[m].
pub fn fill_horn(m: usize, k: usize, d: &Diagram) -> Result<Diagram> {
    if k != 0 {
        return Err(Error::Unsupported(
            "horns are filled at k = 0; relabel vertices first".into(),
        ));
    }
    let full = fsd(m)?;
    if m == 1 {
        // F(0) = F(01) = F(1)
        if d.objs.len() != 1 {
            return Err(Error::ShapeMismatch(
                "the 0-horn of the 1-simplex is a single vertex".into(),
            ));
        }
        let e = &d.objs[0];
        let objs = vec![e.clone(); full.poset.len()];
        let arrows = full
            .poset
            .covers()
            .into_iter()
            .map(|c| (c, ExtMap::identity(e)))
            .collect();
        return Diagram::new(full.poset.clone(), objs, arrows);
    }
    let plus = fill_fat_horn(m, d)?;
    let central = plus.index(&full.central().label())?;
    // everything outside the fat horn collapses onto the central point
    let assignment: Vec<usize> = full
        .poset
        .elements()
        .iter()
        .map(|l| plus.poset.index_of(l).unwrap_or(central))
        .collect();
    let r = PosetMap::new(full.poset.clone(), plus.poset.clone(), assignment)?;
    let objs = (0..full.poset.len())
        .map(|x| plus.objs[r.apply(x)].clone())
        .collect();
    let mut arrows = BTreeMap::new();
    for (a, b) in full.poset.covers() {
        arrows.insert((a, b), plus.map(r.apply(a), r.apply(b))?);
    }
    Diagram::new(full.poset.clone(), objs, arrows)
}

/// Horn diagram whose objects all equal e, with the given automorphisms on the covers (in cover order).
pub fn constant_horn(m: usize, e: &NExtension, autos: &[ExtMap]) -> Result<Diagram> {
    let horn = Arc::new(fsd_horn(m, 0)?);
    let covers = horn.covers();
    if autos.len() != covers.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} covers need as many maps",
            covers.len()
        )));
    }
    let objs = vec![e.clone(); horn.len()];
    let arrows = covers.into_iter().zip(autos.iter().cloned()).collect();
    Diagram::new(horn, objs, arrows)
}
