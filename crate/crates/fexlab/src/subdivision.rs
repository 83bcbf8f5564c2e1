//! The factorized subdivision fsd[m], the barycentric subdivision sd[m], and the maps between them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Poset, PosetMap};

/// Ordered tuple of pairwise disjoint nonempty subsets of {0..m}, as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FsdObject(pub Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FsdClass {
    Singleton,
    Boundary,
    Thickening,
    Central,
}

fn set_label(mask: u32) -> String {
    (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i.to_string())
        .collect()
}

impl FsdObject {
    pub fn label(&self) -> String {
        if self.0.len() == 1 {
            set_label(self.0[0])
        } else {
            format!(
                "({})",
                self.0
                    .iter()
                    .map(|&c| set_label(c))
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }

    pub fn parse(s: &str) -> Result<FsdObject> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        let mut comps = Vec::new();
        for part in inner.split(',') {
            let mut mask = 0u32;
            for ch in part.trim().chars() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad fsd label {s}")))?;
                mask |= 1 << d;
            }
            if mask == 0 {
                return Err(Error::Parse(format!("empty component in {s}")));
            }
            comps.push(mask);
        }
        Ok(FsdObject(comps))
    }

    pub fn union(&self) -> u32 {
        self.0.iter().fold(0, |a, &b| a | b)
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1 && self.0[0].count_ones() == 1
    }

    pub fn coface(&self, i: usize) -> FsdObject {
        FsdObject(self.0.iter().map(|&c| delta_mask(c, i)).collect())
    }

    /// Inverse of coface i; requires i not in the union.
    pub fn uncoface(&self, i: usize) -> FsdObject {
        FsdObject(
            self.0
                .iter()
                .map(|&c| {
                    let low = c & ((1u32 << i) - 1);
                    let high = (c >> (i + 1)) << i;
                    low | high
                })
                .collect(),
        )
    }

    /// Thickening (M_1, .., M_k, complement) inside [m].
    pub fn thicken(&self, m: usize) -> FsdObject {
        let all = (1u32 << (m + 1)) - 1;
        let mut c = self.0.clone();
        c.push(all & !self.union());
        FsdObject(c)
    }
}

fn delta_mask(c: u32, i: usize) -> u32 {
    let low = c & ((1u32 << i) - 1);
    let high = (c >> i) << (i + 1);
    low | high
}

/// A generated fsd[m] or sd[m].
#[derive(Debug)]
pub struct Subdivision {
    pub m: usize,
    pub poset: Arc<Poset>,
    /// Objects aligned with poset element indices.
    pub objects: Vec<FsdObject>,
    pub classes: Vec<FsdClass>,
    index: HashMap<FsdObject, usize>,
}

impl Subdivision {
    fn build(
        m: usize,
        objs: BTreeMap<FsdObject, FsdClass>,
        gens: BTreeSet<(FsdObject, FsdObject)>,
    ) -> Result<Subdivision> {
        for o in objs.keys() {
            let mut seen = 0u32;
            for &c in &o.0 {
                if c == 0 || seen & c != 0 {
                    return Err(Error::HypothesisViolated(format!(
                        "object {} has an empty or overlapping component",
                        o.label()
                    )));
                }
                seen |= c;
            }
        }
        let labels: Vec<String> = objs.keys().map(|o| o.label()).collect();
        let arrows: Vec<(String, String)> =
            gens.iter().map(|(a, b)| (a.label(), b.label())).collect();
        let poset = Poset::from_generators(&labels, &arrows)?;
        let by_label: HashMap<String, (FsdObject, FsdClass)> =
            objs.into_iter().map(|(o, c)| (o.label(), (o, c))).collect();
        let mut objects = Vec::new();
        let mut classes = Vec::new();
        for l in poset.elements() {
            let (o, c) = by_label[l].clone();
            objects.push(o);
            classes.push(c);
        }
        let index = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        Ok(Subdivision {
            m,
            poset: Arc::new(poset),
            objects,
            classes,
            index,
        })
    }

    pub fn index_of(&self, o: &FsdObject) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn class_of(&self, o: &FsdObject) -> Option<FsdClass> {
        self.index_of(o).map(|i| self.classes[i])
    }

    pub fn central(&self) -> FsdObject {
        FsdObject(vec![(1u32 << (self.m + 1)) - 1])
    }

    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(format!("{c:?}")).or_insert(0) += 1;
        }
        m
    }

    pub fn classification(&self) -> Vec<(String, FsdClass)> {
        self.objects
            .iter()
            .zip(&self.classes)
            .map(|(o, c)| (o.label(), *c))
            .collect()
    }
}

fn cache() -> &'static Mutex<HashMap<(bool, usize), Arc<Subdivision>>> {
    static C: OnceLock<Mutex<HashMap<(bool, usize), Arc<Subdivision>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// fsd[m] generated by the object rules O1-O3 and arrow rules M1-M4.
pub fn fsd(m: usize) -> Result<Arc<Subdivision>> {
    if let Some(s) = cache().lock().unwrap().get(&(true, m)) {
        return Ok(s.clone());
    }
    let s = Arc::new(generate(m, true)?);
    cache().lock().unwrap().insert((true, m), s.clone());
    Ok(s)
}

/// sd[m]: the recursion without thickenings, boundary objects pointing to the centre.
pub fn sd(m: usize) -> Result<Arc<Subdivision>> {
    if let Some(s) = cache().lock().unwrap().get(&(false, m)) {
        return Ok(s.clone());
    }
    let s = Arc::new(generate(m, false)?);
    cache().lock().unwrap().insert((false, m), s.clone());
    Ok(s)
}

fn generate(m: usize, factorized: bool) -> Result<Subdivision> {
    let mut objs: BTreeMap<FsdObject, FsdClass> = BTreeMap::new();
    let mut gens: BTreeSet<(FsdObject, FsdObject)> = BTreeSet::new();
    if m == 0 {
        objs.insert(FsdObject(vec![1]), FsdClass::Singleton);
        return Subdivision::build(0, objs, gens);
    }
    let prev = if factorized { fsd(m - 1)? } else { sd(m - 1)? };
    // O1 and M1: images of the faces
    let mut face_gens = BTreeSet::new();
    for i in 0..=m {
        for o in &prev.objects {
            let x = o.coface(i);
            let c = if x.is_singleton() {
                FsdClass::Singleton
            } else {
                FsdClass::Boundary
            };
            objs.insert(x, c);
        }
        for &(a, b) in prev.poset.generators() {
            face_gens.insert((prev.objects[a].coface(i), prev.objects[b].coface(i)));
        }
    }
    gens.extend(face_gens.iter().cloned());
    let boundary: Vec<FsdObject> = objs.keys().cloned().collect();
    let central = FsdObject(vec![(1u32 << (m + 1)) - 1]);
    if factorized {
        // O2, M2, M4
        for x in boundary.iter().filter(|x| !x.is_singleton()) {
            let t = x.thicken(m);
            objs.insert(t.clone(), FsdClass::Thickening);
            gens.insert((t.clone(), x.clone()));
            gens.insert((t, central.clone()));
        }
        // M3
        for (a, b) in &face_gens {
            if b.is_singleton() {
                continue;
            }
            if a.is_singleton() {
                gens.insert((a.clone(), b.thicken(m)));
            } else {
                gens.insert((a.thicken(m), b.thicken(m)));
            }
        }
        // fsd[1] has no thickenings; its two vertices point straight at the centre
        if m == 1 {
            for x in &boundary {
                gens.insert((x.clone(), central.clone()));
            }
        }
    } else {
        for x in &boundary {
            gens.insert((x.clone(), central.clone()));
        }
    }
    objs.insert(central, FsdClass::Central);
    Subdivision::build(m, objs, gens)
}

/// Coface fsd[m-1] -> fsd[m] applying delta_i componentwise.
pub fn fsd_coface(m: usize, i: usize) -> Result<PosetMap> {
    if m == 0 || i > m {
        return Err(Error::IndexOutOfRange(format!("coface({m},{i})")));
    }
    let src = fsd(m - 1)?;
    let tgt = fsd(m)?;
    let asg = src
        .objects
        .iter()
        .map(|o| {
            tgt.index_of(&o.coface(i))
                .ok_or_else(|| Error::UnknownLabel(o.coface(i).label()))
        })
        .collect::<Result<Vec<_>>>()?;
    PosetMap::new(src.poset.clone(), tgt.poset.clone(), asg)
}

/// Image of an object of fsd[m] under sigma_j: fsd[m] -> fsd[m-1].
pub fn sigma_object(m: usize, j: usize, x: &FsdObject) -> Result<FsdObject> {
    if m == 0 || j >= m {
        return Err(Error::IndexOutOfRange(format!("codegeneracy({m},{j})")));
    }
    if m == 1 {
        return Ok(FsdObject(vec![1]));
    }
    let f = fsd(m)?;
    let class = f
        .class_of(x)
        .ok_or_else(|| Error::UnknownLabel(x.label()))?;
    match class {
        FsdClass::Central => Ok(FsdObject(vec![(1u32 << m) - 1])),
        FsdClass::Thickening => {
            // follow the boundary partner, re-thickening when it lands on a boundary object
            let partner = FsdObject(x.0[..x.0.len() - 1].to_vec());
            let y = sigma_object(m, j, &partner)?;
            let lower = fsd(m - 1)?;
            match lower.class_of(&y) {
                Some(FsdClass::Boundary) => Ok(y.thicken(m - 1)),
                _ => Ok(y),
            }
        }
        FsdClass::Boundary | FsdClass::Singleton => {
            let u = x.union();
            let mut result: Option<FsdObject> = None;
            for i in (0..=m).filter(|&i| u & (1 << i) == 0) {
                let o = x.uncoface(i);
                let r = if i < j {
                    sigma_object(m - 1, j - 1, &o)?.coface(i)
                } else if i == j || i == j + 1 {
                    o
                } else {
                    sigma_object(m - 1, j, &o)?.coface(i - 1)
                };
                match &result {
                    None => result = Some(r),
                    Some(prev) if *prev != r => {
                        return Err(Error::HypothesisViolated(format!(
                            "codegeneracy of {} depends on the chosen face",
                            x.label()
                        )))
                    }
                    _ => {}
                }
            }
            result
                .ok_or_else(|| Error::HypothesisViolated(format!("{} lies in no face", x.label())))
        }
    }
}

/// Codegeneracy fsd[m] -> fsd[m-1].
pub fn fsd_codegeneracy(m: usize, j: usize) -> Result<PosetMap> {
    if m == 0 || j >= m {
        return Err(Error::IndexOutOfRange(format!("codegeneracy({m},{j})")));
    }
    let src = fsd(m)?;
    let tgt = fsd(m - 1)?;
    let mut asg = Vec::new();
    for o in &src.objects {
        let y = sigma_object(m, j, o)?;
        asg.push(
            tgt.index_of(&y)
                .ok_or_else(|| Error::UnknownLabel(y.label()))?,
        );
    }
    PosetMap::new(src.poset.clone(), tgt.poset.clone(), asg)
}

/// Collapse fsd[m] -> sd[m]: an object goes to its first component.
pub fn ell(m: usize) -> Result<PosetMap> {
    let src = fsd(m)?;
    let tgt = sd(m)?;
    let asg = src
        .objects
        .iter()
        .map(|o| {
            let y = FsdObject(vec![o.0[0]]);
            tgt.index_of(&y)
                .ok_or_else(|| Error::UnknownLabel(y.label()))
        })
        .collect::<Result<Vec<_>>>()?;
    PosetMap::new(src.poset.clone(), tgt.poset.clone(), asg)
}

/// Last vertex map sd[m] -> [m].
pub fn last_vertex(m: usize) -> Result<PosetMap> {
    let src = sd(m)?;
    let tgt = Arc::new(Poset::chain(m));
    let asg = src
        .objects
        .iter()
        .map(|o| {
            let top = 31 - o.union().leading_zeros();
            tgt.index_of(&top.to_string()).unwrap()
        })
        .collect();
    PosetMap::new(src.poset.clone(), tgt, asg)
}

/// v_m after ell_m: fsd[m] -> [m].
pub fn collapse_to_simplex(m: usize) -> Result<PosetMap> {
    last_vertex(m)?.compose(&ell(m)?)
}

fn face_masks(m: usize, faces: &[Vec<usize>]) -> Result<Vec<u32>> {
    let all = (1u32 << (m + 1)) - 1;
    let mut out = Vec::new();
    for f in faces {
        let mut mask = 0u32;
        for &v in f {
            if v > m {
                return Err(Error::NotAFace(format!("{f:?} in [{m}]")));
            }
            mask |= 1 << v;
        }
        if mask == 0 || mask == all {
            return Err(Error::NotAFace(format!(
                "{f:?} is not a proper face of [{m}]"
            )));
        }
        out.push(mask);
    }
    Ok(out)
}

/// Induced subposet of fsd[m] on the union of the coface images of the listed faces.
pub fn fsd_subcomplex(m: usize, faces: &[Vec<usize>]) -> Result<Poset> {
    let masks = face_masks(m, faces)?;
    let f = fsd(m)?;
    let labels: Vec<String> = f
        .objects
        .iter()
        .filter(|o| masks.iter().any(|&mk| o.union() & !mk == 0))
        .map(|o| o.label())
        .collect();
    f.poset.sub(&labels)
}

pub fn codim_one_faces(m: usize, skip: Option<usize>) -> Vec<Vec<usize>> {
    (0..=m)
        .filter(|&i| Some(i) != skip)
        .map(|i| (0..=m).filter(|&v| v != i).collect())
        .collect()
}

/// fsd of the k-horn of the m-simplex.
pub fn fsd_horn(m: usize, k: usize) -> Result<Poset> {
    if m == 0 || k > m {
        return Err(Error::IndexOutOfRange(format!("horn({m},{k})")));
    }
    fsd_subcomplex(m, &codim_one_faces(m, Some(k)))
}

pub fn fsd_boundary(m: usize) -> Result<Poset> {
    fsd_subcomplex(m, &codim_one_faces(m, None))
}

/// Objects of the fat k-horn: the horn, thickenings of its non-singleton objects, the centre.
pub fn fat_horn_objects(m: usize, k: usize) -> Result<Vec<FsdObject>> {
    let horn = fsd_horn(m, k)?;
    let f = fsd(m)?;
    let mut out: BTreeSet<FsdObject> = BTreeSet::new();
    for l in horn.elements() {
        let o = FsdObject::parse(l)?;
        if !o.is_singleton() {
            out.insert(o.thicken(m));
        }
        out.insert(o);
    }
    out.insert(f.central());
    Ok(out.into_iter().collect())
}

pub fn fat_horn(m: usize) -> Result<Poset> {
    fat_horn_k(m, 0)
}

pub fn fat_horn_k(m: usize, k: usize) -> Result<Poset> {
    let objs = fat_horn_objects(m, k)?;
    let labels: Vec<String> = objs.iter().map(|o| o.label()).collect();
    fsd(m)?.poset.sub(&labels)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct CosimplicialReport {
    pub m_max: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CosimplicialReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the cosimplicial identities among fsd cofaces and codegeneracies up to fsd[m_max].
pub fn check_cosimplicial_identities(m_max: usize) -> Result<CosimplicialReport> {
    let mut rep = CosimplicialReport {
        m_max,
        ..Default::default()
    };
    let mut check = |name: String, a: PosetMap, b: PosetMap| {
        rep.checked += 1;
        if a != b {
            rep.failures.push(name);
        }
    };
    // delta_j delta_i = delta_i delta_{j-1}, i < j : fsd[n-1] -> fsd[n+1]
    for n in 1..m_max {
        for j in 0..=n + 1 {
            for i in 0..j {
                let a = fsd_coface(n + 1, j)?.compose(&fsd_coface(n, i)?)?;
                let b = fsd_coface(n + 1, i)?.compose(&fsd_coface(n, j - 1)?)?;
                check(format!("d{j} d{i} = d{i} d{} at {n}", j - 1), a, b);
            }
        }
    }
    // sigma_j delta_i : fsd[n] -> fsd[n+1] -> fsd[n]
    for n in 0..m_max {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = fsd_codegeneracy(n + 1, j)?.compose(&fsd_coface(n + 1, i)?)?;
                let rhs = if i < j {
                    fsd_coface(n, i)?.compose(&fsd_codegeneracy(n, j - 1)?)?
                } else if i == j || i == j + 1 {
                    PosetMap::identity(fsd(n)?.poset.clone())
                } else {
                    fsd_coface(n, i - 1)?.compose(&fsd_codegeneracy(n, j)?)?
                };
                check(format!("s{j} d{i} at {n}"), lhs, rhs);
            }
        }
    }
    // sigma_j sigma_i = sigma_i sigma_{j+1}, i <= j : fsd[n+1] -> fsd[n-1]
    for n in 1..m_max {
        for j in 0..n {
            for i in 0..=j {
                let a = fsd_codegeneracy(n, j)?.compose(&fsd_codegeneracy(n + 1, i)?)?;
                let b = fsd_codegeneracy(n, i)?.compose(&fsd_codegeneracy(n + 1, j + 1)?)?;
                check(format!("s{j} s{i} = s{i} s{} at {n}", j + 1), a, b);
            }
        }
    }
    Ok(rep)
}
