//! Finite simplicial sets presented by nondegenerate simplices.
//!
//! A simplex of dimension n is a pair (x, s) with x nondegenerate of dimension k
//! and s a monotone surjection [n] -> [k], stored as its image vector.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Poset, PosetMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub nd_dim: usize,
    pub nd: usize,
    pub surj: Vec<u8>,
}

impl Simplex {
    pub fn nondegenerate(dim: usize, nd: usize) -> Simplex {
        Simplex {
            nd_dim: dim,
            nd,
            surj: (0..=dim as u8).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.surj.len() != self.nd_dim + 1
    }

    /// Positions p with s(p) = s(p+1).
    pub fn degens(&self) -> Vec<usize> {
        (0..self.surj.len().saturating_sub(1))
            .filter(|&p| self.surj[p] == self.surj[p + 1])
            .collect()
    }

    /// Precompose with a surjection given by its image vector.
    pub fn precompose(&self, s: &[u8]) -> Simplex {
        Simplex {
            nd_dim: self.nd_dim,
            nd: self.nd,
            surj: s.iter().map(|&v| self.surj[v as usize]).collect(),
        }
    }
}

pub fn surj_from_degens(dim: usize, degens: &[usize]) -> Vec<u8> {
    let mut s = Vec::with_capacity(dim + 1);
    let mut v = 0u8;
    s.push(0);
    for p in 0..dim {
        if !degens.contains(&p) {
            v += 1;
        }
        s.push(v);
    }
    s
}

/// All monotone surjections [n] -> [k].
pub fn surjections(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // choose which of the n gaps are increments (exactly k of them)
    fn rec(n: usize, k: usize, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == n {
            if *cur.last().unwrap() as usize == k {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        let remaining = n - pos;
        // stay
        if (k - last as usize) < remaining {
            cur.push(last);
            rec(n, k, pos + 1, cur, out);
            cur.pop();
        }
        if (last as usize) < k {
            cur.push(last + 1);
            rec(n, k, pos + 1, cur, out);
            cur.pop();
        }
    }
    let mut cur = vec![0u8];
    rec(n, k, 0, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdSimplex {
    pub label: String,
    pub faces: Vec<Simplex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    levels: Vec<Vec<NdSimplex>>,
    truncation: Option<usize>,
    label_index: Vec<HashMap<String, usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceJson {
    pub id: String,
    pub degens: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplexJson {
    pub dim: usize,
    pub id: String,
    pub faces: Vec<FaceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplicialJson {
    pub simplices: Vec<SimplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl SimplicialSet {
    pub fn new(levels: Vec<Vec<NdSimplex>>, truncation: Option<usize>) -> SimplicialSet {
        let mut levels = levels;
        while levels.len() > 1 && levels.last().map(|l| l.is_empty()).unwrap_or(false) {
            levels.pop();
        }
        if let Some(t) = truncation {
            levels.truncate(t + 1);
        }
        let label_index = levels
            .iter()
            .map(|l| {
                l.iter()
                    .enumerate()
                    .map(|(i, s)| (s.label.clone(), i))
                    .collect()
            })
            .collect();
        SimplicialSet {
            levels,
            truncation,
            label_index,
        }
    }

    /// Highest dimension with a nondegenerate simplex.
    pub fn dim(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Highest dimension for which simplices are known.
    pub fn known_dim(&self) -> usize {
        self.truncation.unwrap_or(usize::MAX)
    }

    pub fn count(&self, n: usize) -> usize {
        self.levels.get(n).map(|l| l.len()).unwrap_or(0)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn level(&self, n: usize) -> &[NdSimplex] {
        self.levels.get(n).map(|l| l.as_slice()).unwrap_or(&[])
    }

    pub fn nd(&self, dim: usize, i: usize) -> &NdSimplex {
        &self.levels[dim][i]
    }

    pub fn find(&self, dim: usize, label: &str) -> Option<usize> {
        self.label_index.get(dim)?.get(label).copied()
    }

    pub fn label_of(&self, s: &Simplex) -> String {
        let base = &self.levels[s.nd_dim][s.nd].label;
        if s.is_degenerate() {
            format!("s{:?}({})", s.degens(), base)
        } else {
            base.clone()
        }
    }

    pub fn face(&self, x: &Simplex, i: usize) -> Simplex {
        let n = x.dim();
        assert!(n >= 1 && i <= n, "face index out of range");
        let mut s: Vec<u8> = x.surj.clone();
        let v = s.remove(i);
        let k = x.nd_dim;
        if s.contains(&v) {
            return Simplex {
                nd_dim: k,
                nd: x.nd,
                surj: s,
            };
        }
        // value v is missed: go to d_v of the nondegenerate part
        let s2: Vec<u8> = s.iter().map(|&w| if w > v { w - 1 } else { w }).collect();
        let f = &self.levels[k][x.nd].faces[v as usize];
        f.precompose(&s2)
    }

    pub fn degeneracy(&self, x: &Simplex, j: usize) -> Simplex {
        let mut s = x.surj.clone();
        let v = s[j];
        s.insert(j, v);
        Simplex {
            nd_dim: x.nd_dim,
            nd: x.nd,
            surj: s,
        }
    }

    /// x composed with a monotone map alpha: [k] -> [dim x].
    pub fn apply_operator(&self, x: &Simplex, alpha: &[usize]) -> Simplex {
        let comp: Vec<u8> = alpha.iter().map(|&a| x.surj[a]).collect();
        // factor comp = injection after surjection
        let mut image: Vec<u8> = comp.clone();
        image.dedup();
        let surj: Vec<u8> = comp
            .iter()
            .map(|v| image.iter().position(|w| w == v).unwrap() as u8)
            .collect();
        // apply faces to the nondegenerate part, highest missing value first
        let mut y = Simplex::nondegenerate(x.nd_dim, x.nd);
        for v in (0..=x.nd_dim as u8).rev() {
            if !image.contains(&v) {
                y = self.face(&y, v as usize);
            }
        }
        y.precompose(&surj)
    }

    /// All n-simplices, degenerate ones included.
    pub fn all_simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in 0..=n.min(self.levels.len().saturating_sub(1)) {
            let ss = surjections(n, k);
            for i in 0..self.count(k) {
                for s in &ss {
                    out.push(Simplex {
                        nd_dim: k,
                        nd: i,
                        surj: s.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (n, level) in self.levels.iter().enumerate() {
            for (idx, x) in level.iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if x.faces.len() != expected {
                    violations.push(format!(
                        "{} has {} faces, expected {}",
                        x.label,
                        x.faces.len(),
                        expected
                    ));
                    continue;
                }
                let mut bad = false;
                for f in &x.faces {
                    let ok_surj = f.surj.len() == n
                        && f.surj.first() == Some(&0)
                        && f.surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
                        && *f.surj.last().unwrap() as usize == f.nd_dim
                        && f.nd < self.count(f.nd_dim);
                    if !ok_surj {
                        violations.push(format!("{} has a malformed face", x.label));
                        bad = true;
                    }
                }
                if bad || n < 2 {
                    continue;
                }
                let xs = Simplex::nondegenerate(n, idx);
                for j in 1..=n {
                    for i in 0..j {
                        let a = self.face(&self.face(&xs, j), i);
                        let b = self.face(&self.face(&xs, i), j - 1);
                        if a != b {
                            violations.push(format!(
                                "{}: d{} d{} != d{} d{}",
                                x.label,
                                i,
                                j,
                                j - 1,
                                i
                            ));
                        }
                    }
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn truncate(&self, m: usize) -> SimplicialSet {
        let mut levels = self.levels.clone();
        levels.truncate(m + 1);
        let t = Some(match self.truncation {
            Some(t) => t.min(m),
            None => m,
        });
        SimplicialSet::new(levels, t)
    }

    /// Ordered simplicial complex from a down-closed family of sorted vertex lists.
    pub fn from_complex(
        vertex_labels: &[String],
        simplices: &BTreeSet<Vec<usize>>,
    ) -> Result<SimplicialSet> {
        let maxd = simplices.iter().map(|s| s.len()).max().unwrap_or(1).max(1) - 1;
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); maxd + 1];
        for s in simplices {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::ShapeMismatch(format!("bad simplex {s:?}")));
            }
            by_dim[s.len() - 1].push(s.clone());
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = by_dim
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut levels = Vec::new();
        for (d, l) in by_dim.iter().enumerate() {
            let mut lev = Vec::new();
            for s in l {
                let label = s
                    .iter()
                    .map(|&v| vertex_labels[v].as_str())
                    .collect::<Vec<_>>()
                    .join("<");
                let mut faces = Vec::new();
                if d > 0 {
                    for i in 0..=d {
                        let mut f = s.clone();
                        f.remove(i);
                        let fi = *index[d - 1].get(&f).ok_or_else(|| {
                            Error::ShapeMismatch(format!("family not down-closed at {s:?}"))
                        })?;
                        faces.push(Simplex::nondegenerate(d - 1, fi));
                    }
                }
                lev.push(NdSimplex { label, faces });
            }
            levels.push(lev);
        }
        Ok(SimplicialSet::new(levels, None))
    }

    pub fn standard_simplex(m: usize) -> SimplicialSet {
        Self::simplex_faces(m, |_| true)
    }

    pub fn boundary(m: usize) -> SimplicialSet {
        Self::simplex_faces(m, |s| s.len() <= m)
    }

    pub fn horn(m: usize, k: usize) -> Result<SimplicialSet> {
        if k > m || m == 0 {
            return Err(Error::IndexOutOfRange(format!("horn({m},{k})")));
        }
        Ok(Self::simplex_faces(m, |s| {
            s.len() < m || (s.len() == m && s.contains(&k))
        }))
    }

    /// Subcomplex of the m-simplex spanned by the listed vertex subsets.
    pub fn simplex_subcomplex(m: usize, faces: &[Vec<usize>]) -> Result<SimplicialSet> {
        for f in faces {
            if f.is_empty() || f.iter().any(|&v| v > m) {
                return Err(Error::NotAFace(format!("{f:?}")));
            }
        }
        let sets: Vec<BTreeSet<usize>> =
            faces.iter().map(|f| f.iter().copied().collect()).collect();
        Ok(Self::simplex_faces(m, |s| {
            sets.iter().any(|f| s.iter().all(|v| f.contains(v)))
        }))
    }

    fn simplex_faces<F: Fn(&[usize]) -> bool>(m: usize, keep: F) -> SimplicialSet {
        let labels: Vec<String> = (0..=m).map(|i| i.to_string()).collect();
        let mut set = BTreeSet::new();
        for mask in 1u32..(1 << (m + 1)) {
            let s: Vec<usize> = (0..=m).filter(|&i| mask & (1 << i) != 0).collect();
            if keep(&s) {
                set.insert(s);
            }
        }
        SimplicialSet::from_complex(&labels, &set).expect("faces of a simplex")
    }

    pub fn nerve(p: &Poset) -> SimplicialSet {
        let n = p.len();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            for y in 0..n {
                if p.lt(last, y) {
                    let mut c2 = c.clone();
                    c2.push(y);
                    stack.push(c2);
                }
            }
            all.insert(c);
        }
        Self::from_chains(p.elements(), all)
    }

    fn from_chains(labels: &[String], chains: BTreeSet<Vec<usize>>) -> SimplicialSet {
        let maxd = chains.iter().map(|c| c.len()).max().unwrap_or(1) - 1;
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); maxd + 1];
        for c in chains {
            by_dim[c.len() - 1].push(c);
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = by_dim
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut levels = Vec::new();
        for (d, l) in by_dim.iter().enumerate() {
            let mut lev = Vec::with_capacity(l.len());
            for c in l {
                let label = c
                    .iter()
                    .map(|&v| labels[v].as_str())
                    .collect::<Vec<_>>()
                    .join("<");
                let mut faces = Vec::new();
                if d > 0 {
                    for i in 0..=d {
                        let mut f = c.clone();
                        f.remove(i);
                        faces.push(Simplex::nondegenerate(d - 1, index[d - 1][&f]));
                    }
                }
                lev.push(NdSimplex { label, faces });
            }
            levels.push(lev);
        }
        SimplicialSet::new(levels, None)
    }

    /// Chain (as element indices) of a nondegenerate simplex of a nerve.
    pub fn nerve_chain(p: &Poset, x: &NdSimplex) -> Vec<usize> {
        if x.label.is_empty() {
            return vec![];
        }
        x.label
            .split('<')
            .map(|l| p.index_of(l).expect("nerve label"))
            .collect()
    }

    /// One vertex, one nondegenerate edge.
    pub fn quotient_circle() -> SimplicialSet {
        let v = NdSimplex {
            label: "v".into(),
            faces: vec![],
        };
        let e = NdSimplex {
            label: "e".into(),
            faces: vec![Simplex::nondegenerate(0, 0), Simplex::nondegenerate(0, 0)],
        };
        SimplicialSet::new(vec![vec![v], vec![e]], None)
    }

    /// Nerve of a finite category, truncated at `max_dim`.
    pub fn nerve_category(c: &FiniteCategory, max_dim: usize) -> SimplicialSet {
        let ids: BTreeSet<usize> = c.identity.iter().copied().collect();
        let mut strings: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 1];
        // dim 0 strings are represented by the object index alone
        for d in 1..=max_dim {
            let mut next = Vec::new();
            if d == 1 {
                for (m, _) in c.morphisms.iter().enumerate() {
                    if !ids.contains(&m) {
                        next.push(vec![m]);
                    }
                }
            } else {
                for s in &strings[d - 1] {
                    let last = *s.last().unwrap();
                    for (m, mm) in c.morphisms.iter().enumerate() {
                        if !ids.contains(&m) && mm.0 == c.morphisms[last].1 {
                            let mut s2 = s.clone();
                            s2.push(m);
                            next.push(s2);
                        }
                    }
                }
            }
            next.sort();
            strings[d] = next;
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = strings
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut levels = vec![c
            .objects
            .iter()
            .map(|o| NdSimplex {
                label: o.clone(),
                faces: vec![],
            })
            .collect::<Vec<_>>()];
        for d in 1..=max_dim {
            let mut lev = Vec::new();
            for s in &strings[d] {
                let label = s
                    .iter()
                    .map(|&m| c.morphisms[m].2.as_str())
                    .collect::<Vec<_>>()
                    .join("|");
                let mut faces = Vec::new();
                for i in 0..=d {
                    let f: Vec<usize> = if i == 0 {
                        s[1..].to_vec()
                    } else if i == d {
                        s[..d - 1].to_vec()
                    } else {
                        let mut f = s[..i - 1].to_vec();
                        f.push(c.compose(s[i], s[i - 1]));
                        f.extend_from_slice(&s[i + 1..]);
                        f
                    };
                    // vertices of the face: first object then targets
                    let first_obj = if i == 0 {
                        c.morphisms[s[0]].1
                    } else {
                        c.morphisms[s[0]].0
                    };
                    let mut surj = vec![0u8];
                    let mut reduced = Vec::new();
                    for &m in &f {
                        if ids.contains(&m) {
                            surj.push(*surj.last().unwrap());
                        } else {
                            reduced.push(m);
                            surj.push(*surj.last().unwrap() + 1);
                        }
                    }
                    let face = if reduced.is_empty() {
                        Simplex {
                            nd_dim: 0,
                            nd: first_obj,
                            surj,
                        }
                    } else {
                        Simplex {
                            nd_dim: reduced.len(),
                            nd: index[reduced.len()][&reduced],
                            surj,
                        }
                    };
                    faces.push(face);
                }
                lev.push(NdSimplex { label, faces });
            }
            levels.push(lev);
        }
        SimplicialSet::new(levels, Some(max_dim))
    }

    pub fn to_json(&self) -> SimplicialJson {
        let mut simplices = Vec::new();
        for (d, l) in self.levels.iter().enumerate() {
            for x in l {
                simplices.push(SimplexJson {
                    dim: d,
                    id: x.label.clone(),
                    faces: x
                        .faces
                        .iter()
                        .map(|f| FaceJson {
                            id: self.levels[f.nd_dim][f.nd].label.clone(),
                            degens: f.degens(),
                        })
                        .collect(),
                });
            }
        }
        SimplicialJson {
            simplices,
            truncation: self.truncation,
        }
    }

    pub fn from_json(j: &SimplicialJson) -> Result<SimplicialSet> {
        let maxd = j.simplices.iter().map(|s| s.dim).max().unwrap_or(0);
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); maxd + 1];
        for s in &j.simplices {
            labels[s.dim].push(s.id.clone());
        }
        let index: Vec<HashMap<String, usize>> = labels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        for (d, idx) in index.iter().enumerate() {
            if idx.len() != labels[d].len() {
                return Err(Error::DuplicateLabel(format!(
                    "duplicate simplex id in dimension {d}"
                )));
            }
        }
        let mut levels: Vec<Vec<NdSimplex>> = vec![Vec::new(); maxd + 1];
        for s in &j.simplices {
            let mut faces = Vec::new();
            for f in &s.faces {
                if s.dim == 0 {
                    return Err(Error::Parse("vertices have no faces".into()));
                }
                let fd = s.dim - 1;
                let mut dg = f.degens.clone();
                dg.sort();
                dg.dedup();
                if dg.iter().any(|&p| p >= fd) || dg.len() > fd {
                    return Err(Error::Parse(format!(
                        "bad degeneracy word on face of {}",
                        s.id
                    )));
                }
                let nd_dim = fd - dg.len();
                let nd = *index
                    .get(nd_dim)
                    .and_then(|m| m.get(&f.id))
                    .ok_or_else(|| Error::UnknownLabel(f.id.clone()))?;
                faces.push(Simplex {
                    nd_dim,
                    nd,
                    surj: surj_from_degens(fd, &dg),
                });
            }
            levels[s.dim].push(NdSimplex {
                label: s.id.clone(),
                faces,
            });
        }
        Ok(SimplicialSet::new(levels, j.truncation))
    }
}

/// Finite category with a composition table.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    /// (source, target, label)
    pub morphisms: Vec<(usize, usize, String)>,
    pub identity: Vec<usize>,
    /// compose[(g, f)] = g after f
    pub table: HashMap<(usize, usize), usize>,
}

impl FiniteCategory {
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.table[&(g, f)]
    }

    /// One-object category of a finite group given by a multiplication table.
    pub fn group(
        name: &str,
        elements: &[String],
        mult: &dyn Fn(usize, usize) -> usize,
        unit: usize,
    ) -> FiniteCategory {
        let morphisms = elements.iter().map(|e| (0, 0, e.clone())).collect();
        let mut table = HashMap::new();
        for g in 0..elements.len() {
            for f in 0..elements.len() {
                table.insert((g, f), mult(g, f));
            }
        }
        FiniteCategory {
            objects: vec![name.to_string()],
            morphisms,
            identity: vec![unit],
            table,
        }
    }

    pub fn cyclic_group(order: usize) -> FiniteCategory {
        let els: Vec<String> = (0..order).map(|i| format!("g{i}")).collect();
        Self::group("*", &els, &|a, b| (a + b) % order, 0)
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<SimplicialSet>,
    pub target: Arc<SimplicialSet>,
    pub images: Vec<Vec<Simplex>>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}
impl Eq for SimplicialMap {}

impl SimplicialMap {
    pub fn apply(&self, x: &Simplex) -> Simplex {
        self.images[x.nd_dim][x.nd].precompose(&x.surj)
    }

    /// self after other
    pub fn compose(&self, other: &SimplicialMap) -> SimplicialMap {
        let images = other
            .images
            .iter()
            .map(|l| l.iter().map(|s| self.apply(s)).collect())
            .collect();
        SimplicialMap {
            source: other.source.clone(),
            target: self.target.clone(),
            images,
        }
    }

    pub fn identity(x: Arc<SimplicialSet>) -> SimplicialMap {
        let images = (0..x.levels.len())
            .map(|d| {
                (0..x.count(d))
                    .map(|i| Simplex::nondegenerate(d, i))
                    .collect()
            })
            .collect();
        SimplicialMap {
            source: x.clone(),
            target: x,
            images,
        }
    }

    /// Checks dimensions and compatibility with faces.
    pub fn check(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for d in 0..self.source.levels.len() {
            for i in 0..self.source.count(d) {
                let img = &self.images[d][i];
                if img.dim() != d {
                    violations.push(format!(
                        "image of {} has wrong dimension",
                        self.source.levels[d][i].label
                    ));
                    continue;
                }
                if d == 0 {
                    continue;
                }
                let x = Simplex::nondegenerate(d, i);
                for k in 0..=d {
                    let a = self.target.face(img, k);
                    let b = self.apply(&self.source.face(&x, k));
                    if a != b {
                        violations.push(format!(
                            "d{} fails at {}",
                            k, self.source.levels[d][i].label
                        ));
                    }
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// Nerve of a monotone map.
    pub fn nerve_of(
        f: &PosetMap,
        src: Arc<SimplicialSet>,
        tgt: Arc<SimplicialSet>,
    ) -> SimplicialMap {
        let mut images = Vec::new();
        for d in 0..src.levels.len() {
            let mut lev = Vec::new();
            for x in &src.levels[d] {
                let chain = SimplicialSet::nerve_chain(&f.source, x);
                let img: Vec<usize> = chain.iter().map(|&c| f.apply(c)).collect();
                let mut distinct = img.clone();
                distinct.dedup();
                let surj: Vec<u8> = {
                    let mut s = Vec::new();
                    let mut v = 0u8;
                    for (p, _) in img.iter().enumerate() {
                        if p > 0 && img[p] != img[p - 1] {
                            v += 1;
                        }
                        s.push(v);
                    }
                    s
                };
                let label = distinct
                    .iter()
                    .map(|&c| f.target.label(c))
                    .collect::<Vec<_>>()
                    .join("<");
                let nd = tgt
                    .find(distinct.len() - 1, &label)
                    .expect("chain in target nerve");
                lev.push(Simplex {
                    nd_dim: distinct.len() - 1,
                    nd,
                    surj,
                });
            }
            images.push(lev);
        }
        SimplicialMap {
            source: src,
            target: tgt,
            images,
        }
    }
}

fn closure_order(x: &SimplicialSet) -> Vec<(usize, usize)> {
    let mut placed: Vec<Vec<bool>> = (0..x.levels.len())
        .map(|d| vec![false; x.count(d)])
        .collect();
    let mut order = Vec::new();
    for v in 0..x.count(0) {
        placed[0][v] = true;
        order.push((0, v));
        for d in 1..x.levels.len() {
            for i in 0..x.count(d) {
                if !placed[d][i] && x.levels[d][i].faces.iter().all(|f| placed[f.nd_dim][f.nd]) {
                    placed[d][i] = true;
                    order.push((d, i));
                }
            }
        }
    }
    order
}

/// All simplicial maps X -> Y, in canonical order.
pub fn hom_enumerate(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
    budget: u64,
) -> Result<Vec<SimplicialMap>> {
    let xd = x.dim();
    if x.count(0) == 0 {
        let images = (0..x.levels.len()).map(|_| Vec::new()).collect();
        return Ok(vec![SimplicialMap {
            source: x.clone(),
            target: y.clone(),
            images,
        }]);
    }
    if y.known_dim() < xd {
        return Err(Error::ShapeMismatch(format!(
            "target known only up to dimension {} but source has dimension {}",
            y.known_dim(),
            xd
        )));
    }
    let mut cands: Vec<HashMap<Vec<Simplex>, Vec<Simplex>>> = Vec::new();
    let vertices: Vec<Simplex> = y.all_simplices(0);
    cands.push(HashMap::new());
    for d in 1..=xd {
        let mut m: HashMap<Vec<Simplex>, Vec<Simplex>> = HashMap::new();
        for s in y.all_simplices(d) {
            let key: Vec<Simplex> = (0..=d).map(|i| y.face(&s, i)).collect();
            m.entry(key).or_default().push(s);
        }
        for v in m.values_mut() {
            v.sort();
        }
        cands.push(m);
    }
    let order = closure_order(x);
    let mut images: Vec<Vec<Option<Simplex>>> = (0..x.levels.len())
        .map(|d| vec![None; x.count(d)])
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    struct Ctx<'a> {
        x: &'a SimplicialSet,
        y: &'a SimplicialSet,
        order: &'a [(usize, usize)],
        cands: &'a [HashMap<Vec<Simplex>, Vec<Simplex>>],
        vertices: &'a [Simplex],
        budget: u64,
    }
    fn rec(
        ctx: &Ctx,
        pos: usize,
        images: &mut Vec<Vec<Option<Simplex>>>,
        out: &mut Vec<Vec<Vec<Simplex>>>,
        nodes: &mut u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > ctx.budget {
            return Err(Error::BudgetExceeded(ctx.budget));
        }
        if pos == ctx.order.len() {
            out.push(
                images
                    .iter()
                    .map(|l| l.iter().map(|s| s.clone().unwrap()).collect())
                    .collect(),
            );
            return Ok(());
        }
        let (d, i) = ctx.order[pos];
        let options: Vec<Simplex> = if d == 0 {
            ctx.vertices.to_vec()
        } else {
            let key: Vec<Simplex> = ctx.x.levels[d][i]
                .faces
                .iter()
                .map(|f| images[f.nd_dim][f.nd].as_ref().unwrap().precompose(&f.surj))
                .collect();
            match ctx.cands[d].get(&key) {
                Some(v) => v.clone(),
                None => return Ok(()),
            }
        };
        let _ = ctx.y;
        for o in options {
            images[d][i] = Some(o);
            rec(ctx, pos + 1, images, out, nodes)?;
        }
        images[d][i] = None;
        Ok(())
    }
    let ctx = Ctx {
        x,
        y,
        order: &order,
        cands: &cands,
        vertices: &vertices,
        budget,
    };
    let mut raw = Vec::new();
    rec(&ctx, 0, &mut images, &mut raw, &mut nodes)?;
    raw.sort();
    for r in raw {
        out.push(SimplicialMap {
            source: x.clone(),
            target: y.clone(),
            images: r,
        });
    }
    Ok(out)
}

/// Maps from Δ^n to Y correspond to n-simplices of Y.
pub fn count_maps(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>, budget: u64) -> Result<usize> {
    hom_enumerate(x, y, budget).map(|v| v.len())
}
