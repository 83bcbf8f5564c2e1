//! Finite posets given by generating arrows, with the closure materialized.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    generators: BTreeSet<(usize, usize)>,
    leq: Vec<bool>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.leq == other.leq
    }
}
impl Eq for Poset {}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub generators: Vec<(String, String)>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `arrows` on `elements`.
    /// Elements are stored in lexicographic label order.
    pub fn from_generators<S: AsRef<str>>(elements: &[S], arrows: &[(S, S)]) -> Result<Poset> {
        let mut elems: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        elems.sort();
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0].clone()));
            }
        }
        let index: HashMap<String, usize> = elems
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut gens = BTreeSet::new();
        for (a, b) in arrows {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownLabel(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownLabel(b.as_ref().to_string()))?;
            gens.insert((ia, ib));
        }
        Self::from_parts(elems, index, gens)
    }

    fn from_parts(
        elements: Vec<String>,
        index: HashMap<String, usize>,
        generators: BTreeSet<(usize, usize)>,
    ) -> Result<Poset> {
        let n = elements.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &generators {
            if a != b {
                succ[a].push(b);
            }
        }
        let mut leq = vec![false; n * n];
        for s in 0..n {
            let mut stack = vec![s];
            leq[s * n + s] = true;
            while let Some(x) = stack.pop() {
                for &y in &succ[x] {
                    if !leq[s * n + y] {
                        leq[s * n + y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::CycleDetected(
                        elements[a].clone(),
                        elements[b].clone(),
                    ));
                }
            }
        }
        Ok(Poset {
            elements,
            index,
            generators,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn leq_labels(&self, a: &str, b: &str) -> Option<bool> {
        Some(self.leq(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn generators(&self) -> &BTreeSet<(usize, usize)> {
        &self.generators
    }

    pub fn generator_labels(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = self
            .generators
            .iter()
            .map(|&(a, b)| (self.elements[a].clone(), self.elements[b].clone()))
            .collect();
        v.sort();
        v
    }

    /// Strict relations x < y.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering relations of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self.lt(a, b) {
                    continue;
                }
                if !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&b| !(0..self.len()).any(|a| self.lt(a, b)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(a, b)))
            .collect()
    }

    /// Length of the longest chain of covers ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&y| self.leq(y, x)).count());
        let mut h = vec![0usize; n];
        for &x in &order {
            for y in 0..n {
                if self.lt(y, x) {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h
    }

    /// A linear extension (every element after everything below it).
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| ((0..n).filter(|&y| self.lt(y, x)).count(), x));
        order
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if !seen[y] && (self.leq(x, y) || self.leq(y, x)) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn opposite(&self) -> Poset {
        let gens = self.generators.iter().map(|&(a, b)| (b, a)).collect();
        Self::from_parts(self.elements.clone(), self.index.clone(), gens)
            .expect("opposite of a poset is a poset")
    }

    /// Induced subposet. Generators are the ambient generators inside the subset,
    /// topped up with covers of the induced order that they do not already generate.
    pub fn sub<S: AsRef<str>>(&self, labels: &[S]) -> Result<Poset> {
        let mut keep = BTreeSet::new();
        for l in labels {
            let i = self.index_of(l.as_ref()).ok_or_else(|| {
                Error::NotSubposet(format!("{} not in ambient poset", l.as_ref()))
            })?;
            keep.insert(i);
        }
        let keep: Vec<usize> = keep.into_iter().collect();
        let elems: Vec<String> = keep.iter().map(|&i| self.elements[i].clone()).collect();
        let index: HashMap<String, usize> = elems
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut gens: BTreeSet<(usize, usize)> = self
            .generators
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        let first = Self::from_parts(elems.clone(), index.clone(), gens.clone())?;
        for (x, &a) in keep.iter().enumerate() {
            for (y, &b) in keep.iter().enumerate() {
                if x == y || !self.leq(a, b) || first.leq(x, y) {
                    continue;
                }
                let is_cover = !keep
                    .iter()
                    .any(|&c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if is_cover {
                    gens.insert((x, y));
                }
            }
        }
        let p = Self::from_parts(elems, index, gens)?;
        debug_assert!(p.is_induced_in(self));
        Ok(p)
    }

    /// True if every element lives in `ambient` and the order is the induced one.
    pub fn is_induced_in(&self, ambient: &Poset) -> bool {
        let map: Option<Vec<usize>> = self.elements.iter().map(|l| ambient.index_of(l)).collect();
        let Some(map) = map else { return false };
        (0..self.len())
            .all(|a| (0..self.len()).all(|b| self.leq(a, b) == ambient.leq(map[a], map[b])))
    }

    /// Union of induced subposets of one ambient poset.
    pub fn union(ambient: &Poset, parts: &[Poset]) -> Result<Poset> {
        let mut labels = BTreeSet::new();
        for p in parts {
            if !p.is_induced_in(ambient) {
                return Err(Error::NotSubposet("part is not an induced subposet".into()));
            }
            labels.extend(p.elements.iter().cloned());
        }
        let labels: Vec<String> = labels.into_iter().collect();
        ambient.sub(&labels)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.elements.clone(),
            generators: self.generator_labels(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<Poset> {
        Poset::from_generators(&j.elements, &j.generators)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n");
        for e in &self.elements {
            let _ = writeln!(s, "  \"{e}\";");
        }
        for (a, b) in self.generator_labels() {
            let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
        }
        s.push_str("}\n");
        s
    }

    /// Rebuild from the materialized closure.
    pub fn rebuilt(&self) -> Result<Poset> {
        let rel = self.relations();
        let arrows: Vec<(String, String)> = rel
            .into_iter()
            .map(|(a, b)| (self.elements[a].clone(), self.elements[b].clone()))
            .collect();
        Poset::from_generators(&self.elements, &arrows)
    }

    pub fn chain(n: usize) -> Poset {
        let elems: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String)> = (0..n)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        Poset::from_generators(&elems, &arrows).expect("chain")
    }

    pub fn discrete(n: usize) -> Poset {
        let elems: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String)> = vec![];
        Poset::from_generators(&elems, &arrows).expect("discrete")
    }
}

/// Monotone map between posets, stored as target indices.
#[derive(Clone, Debug)]
pub struct PosetMap {
    pub source: Arc<Poset>,
    pub target: Arc<Poset>,
    pub assignment: Vec<usize>,
}

impl PartialEq for PosetMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && self.source.elements() == other.source.elements()
            && self.target.elements() == other.target.elements()
    }
}
impl Eq for PosetMap {}

impl PosetMap {
    /// Checks monotonicity on every strict relation of the source.
    pub fn new(source: Arc<Poset>, target: Arc<Poset>, assignment: Vec<usize>) -> Result<PosetMap> {
        if assignment.len() != source.len() || assignment.iter().any(|&t| t >= target.len()) {
            return Err(Error::ShapeMismatch(
                "assignment does not fit source/target".into(),
            ));
        }
        for (a, b) in source.relations() {
            if !target.leq(assignment[a], assignment[b]) {
                return Err(Error::NotMonotone(
                    source.label(a).to_string(),
                    source.label(b).to_string(),
                ));
            }
        }
        Ok(PosetMap {
            source,
            target,
            assignment,
        })
    }

    pub fn from_labels<F: Fn(&str) -> String>(
        source: Arc<Poset>,
        target: Arc<Poset>,
        f: F,
    ) -> Result<PosetMap> {
        let mut asg = Vec::with_capacity(source.len());
        for l in source.elements() {
            let t = f(l);
            asg.push(target.index_of(&t).ok_or(Error::UnknownLabel(t))?);
        }
        PosetMap::new(source, target, asg)
    }

    pub fn identity(p: Arc<Poset>) -> PosetMap {
        let n = p.len();
        PosetMap {
            source: p.clone(),
            target: p,
            assignment: (0..n).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn apply_label(&self, l: &str) -> Option<&str> {
        Some(self.target.label(self.assignment[self.source.index_of(l)?]))
    }

    /// self after other.
    pub fn compose(&self, other: &PosetMap) -> Result<PosetMap> {
        if other.target.elements() != self.source.elements() {
            return Err(Error::ShapeMismatch("non-composable poset maps".into()));
        }
        let asg = other
            .assignment
            .iter()
            .map(|&i| self.assignment[i])
            .collect();
        Ok(PosetMap {
            source: other.source.clone(),
            target: self.target.clone(),
            assignment: asg,
        })
    }

    pub fn is_injective(&self) -> bool {
        let s: BTreeSet<usize> = self.assignment.iter().copied().collect();
        s.len() == self.assignment.len()
    }

    /// Injective and reflecting the order.
    pub fn is_full_embedding(&self) -> bool {
        self.is_injective()
            && (0..self.source.len()).all(|a| {
                (0..self.source.len()).all(|b| {
                    self.source.leq(a, b) == self.target.leq(self.assignment[a], self.assignment[b])
                })
            })
    }

    pub fn image_labels(&self) -> BTreeSet<String> {
        self.assignment
            .iter()
            .map(|&i| self.target.label(i).to_string())
            .collect()
    }
}
