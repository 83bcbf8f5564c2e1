//! Connected components of n-extension categories.
//!
//! n = 1: every short exact sequence with middle of order |A||B| is enumerated and classes are
//! found with single maps. n >= 2: an extension is determined up to maps with identity hinges by
//! its hinge modules and the classes of its n stations, so vertices are such tuples (hinges of
//! order at most the cap) and edges are hinge maps along which the stations are compatible.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::modcat::{
    automorphisms, cokernel, hom_enumerate, ses_equivalence, ModMorphism, Module, Ring, ShortExact,
};

use super::resolution::{
    cocycle_of_extension, ext_group, realize_class, Ext1Cache, ExtGroup, Station,
};
use super::{splice, NExtension};

#[derive(Clone, Debug)]
pub struct ExtClass {
    pub id: usize,
    pub ring: Ring,
    pub a: Module,
    pub b: Module,
    pub n: usize,
    pub rep: NExtension,
    /// element of Ext^n(B, A) computed from the resolution
    pub cocycle: Vec<i64>,
    /// enumerated extensions (n = 1) or station tuples (n >= 2) in the class
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct Pi0Report {
    pub ring: Ring,
    pub a: Module,
    pub b: Module,
    pub n: usize,
    pub cap: Option<u64>,
    pub vertices: usize,
    pub classes: Vec<ExtClass>,
    /// cocycle is constant on every class
    pub class_invariant: bool,
    /// classes -> Ext^n(B, A) is a bijection
    pub bijective: bool,
    pub ext: Module,
    /// None when no larger cap was tried
    pub stable: Option<bool>,
}

impl Pi0Report {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// Group structure transported from the cocycles, when the transport is bijective.
    pub fn group(&self) -> Option<&Module> {
        self.bijective.then_some(&self.ext)
    }

    /// Class of the sum of two classes.
    pub fn add(&self, x: usize, y: usize) -> Option<usize> {
        let g = self.group()?;
        let s = g.add(&self.classes[x].cocycle, &self.classes[y].cocycle);
        self.classes.iter().position(|c| c.cocycle == s)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Normal forms d_1 | d_2 | ... of modules of the given order.
pub fn modules_of_order(ring: Ring, ord: u64) -> Vec<Module> {
    fn rec(ring: Ring, rem: u64, last: u64, cur: &mut Vec<u64>, out: &mut Vec<Module>) {
        if rem == 1 {
            out.push(Module {
                ring,
                inv: cur.clone(),
            });
            return;
        }
        for d in divisors(rem) {
            if d < 2 || d % last != 0 {
                continue;
            }
            if let Ring::Zn(n) = ring {
                if n % d != 0 {
                    continue;
                }
            }
            cur.push(d);
            rec(ring, rem / d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(ring, ord, 1, &mut Vec::new(), &mut out);
    // the divisibility chain must close: every later factor is a multiple of the earlier ones
    out.retain(|m| m.is_normal());
    out
}

pub fn modules_up_to(ring: Ring, cap: u64) -> Vec<Module> {
    (1..=cap).flat_map(|o| modules_of_order(ring, o)).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so representatives are the least vertices
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn check_endpoints(a: &Module, b: &Module) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring.to_string(), b.ring.to_string()));
    }
    if !a.is_normal() || !b.is_normal() {
        return Err(Error::HypothesisViolated(
            "end terms must be given by invariant factors".into(),
        ));
    }
    Ok(())
}

/// All short exact sequences A -> E -> B with E in normal form.
pub fn enumerate_ses(a: &Module, b: &Module, budget: u64) -> Result<Vec<ShortExact>> {
    check_endpoints(a, b)?;
    let ord = (a.order() * b.order()) as u64;
    let autb = automorphisms(b, budget)?;
    let mut out = Vec::new();
    for e in modules_of_order(a.ring, ord) {
        for i in hom_enumerate(a, &e, budget)? {
            if !i.is_mono() {
                continue;
            }
            let (c, q) = cokernel(&i)?;
            if c.inv != b.inv {
                continue;
            }
            for alpha in &autb {
                let p = ModMorphism {
                    source: q.source.clone(),
                    target: b.clone(),
                    matrix: alpha.compose(&q)?.matrix,
                };
                out.push(ShortExact { i: i.clone(), p });
            }
            if out.len() as u64 > budget {
                return Err(Error::BudgetExceeded(budget));
            }
        }
    }
    Ok(out)
}

fn pi0_one(a: &Module, b: &Module, budget: u64) -> Result<Pi0Report> {
    let g = ext_group(b, a, 1)?;
    let all = enumerate_ses(a, b, budget)?;
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(all.len());
    for (k, s) in all.iter().enumerate() {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate() {
            if ses_equivalence(&all[r], s)?.is_some() {
                found = Some(c);
                break;
            }
        }
        match found {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(reps.len());
                reps.push(k);
            }
        }
    }
    let cocycles: Vec<Vec<i64>> = all
        .iter()
        .map(|s| cocycle_of_extension(&NExtension::from_ses(s), &g))
        .collect::<Result<_>>()?;
    let classes: Vec<ExtClass> = reps
        .iter()
        .enumerate()
        .map(|(c, &r)| ExtClass {
            id: c,
            ring: a.ring,
            a: a.clone(),
            b: b.clone(),
            n: 1,
            rep: NExtension::from_ses(&all[r]),
            cocycle: cocycles[r].clone(),
            size: class_of.iter().filter(|&&x| x == c).count(),
        })
        .collect();
    finish(a, b, 1, None, all.len(), classes, &class_of, &cocycles, &g)
}

fn finish(
    a: &Module,
    b: &Module,
    n: usize,
    cap: Option<u64>,
    vertices: usize,
    classes: Vec<ExtClass>,
    class_of: &[usize],
    cocycles: &[Vec<i64>],
    g: &ExtGroup,
) -> Result<Pi0Report> {
    let class_invariant = class_of
        .iter()
        .zip(cocycles)
        .all(|(&c, z)| classes[c].cocycle == *z);
    let mut seen: Vec<&Vec<i64>> = classes.iter().map(|c| &c.cocycle).collect();
    seen.sort();
    seen.dedup();
    let bijective =
        class_invariant && seen.len() == classes.len() && classes.len() as u128 == g.order();
    Ok(Pi0Report {
        ring: a.ring,
        a: a.clone(),
        b: b.clone(),
        n,
        cap,
        vertices,
        classes,
        class_invariant,
        bijective,
        ext: g.group.clone(),
        stable: None,
    })
}

/// One hinge tuple with its station groups; vertices are numbered in mixed radix over the stations.
struct Tuple {
    hinges: Vec<Module>,
    stations: Vec<Rc<Station>>,
    elems: Vec<Vec<Vec<i64>>>,
    offset: usize,
    size: usize,
}

impl Tuple {
    fn vertex(&self, pick: &[usize]) -> usize {
        let mut v = 0;
        for (j, &k) in pick.iter().enumerate() {
            v = v * self.elems[j].len() + k;
        }
        self.offset + v
    }

    fn unpack(&self, mut v: usize) -> Vec<usize> {
        let mut pick = vec![0; self.elems.len()];
        for j in (0..self.elems.len()).rev() {
            let l = self.elems[j].len();
            pick[j] = v % l;
            v /= l;
        }
        pick
    }

    /// C_0 = A, C_1..C_{n-1} hinges, C_n = B.
    fn chain<'a>(&'a self, a: &'a Module, b: &'a Module) -> Vec<&'a Module> {
        let mut c = vec![a];
        c.extend(self.hinges.iter());
        c.push(b);
        c
    }
}

fn hinge_tuples(mods: &[Module], len: usize) -> Vec<Vec<Module>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                mods.iter().map(move |m| {
                    let mut t2 = t.clone();
                    t2.push(m.clone());
                    t2
                })
            })
            .collect();
    }
    out
}

fn all_hom_tuples(src: &[Module], tgt: &[Module], budget: u64) -> Result<Vec<Vec<ModMorphism>>> {
    let mut out = vec![Vec::new()];
    for (s, t) in src.iter().zip(tgt) {
        let homs = hom_enumerate(s, t, budget)?;
        let mut next = Vec::new();
        for prefix in &out {
            for h in &homs {
                let mut p: Vec<ModMorphism> = prefix.clone();
                p.push(h.clone());
                next.push(p);
            }
        }
        if next.len() as u64 > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        out = next;
    }
    Ok(out)
}

fn pi0_higher(a: &Module, b: &Module, n: usize, cap: u64, budget: u64) -> Result<Pi0Report> {
    let ring = a.ring;
    let mut ctx = Ext1Cache::default();
    let mods = modules_up_to(ring, cap);
    let mut tuples = Vec::new();
    let mut total = 0usize;
    for hinges in hinge_tuples(&mods, n - 1) {
        let mut chain = vec![a.clone()];
        chain.extend(hinges.iter().cloned());
        chain.push(b.clone());
        let stations: Vec<Rc<Station>> = (1..=n)
            .map(|j| ctx.station(&chain[j], &chain[j - 1]))
            .collect::<Result<_>>()?;
        let elems: Vec<Vec<Vec<i64>>> = stations.iter().map(|s| s.g.elements()).collect();
        let size = elems.iter().map(|e| e.len()).product();
        tuples.push(Tuple {
            hinges,
            stations,
            elems,
            offset: total,
            size,
        });
        total += size;
        if total as u64 > budget {
            return Err(Error::BudgetExceeded(budget));
        }
    }
    let mut dsu = Dsu::new(total);
    for s in &tuples {
        for t in &tuples {
            let cs = s.chain(a, b);
            let ct = t.chain(a, b);
            for hs in all_hom_tuples(&s.hinges, &t.hinges, budget)? {
                // h_0 = id_A, h_n = id_B
                let mut h = vec![ModMorphism::identity(a)];
                h.extend(hs);
                h.push(ModMorphism::identity(b));
                // per station j, pairs (x in G_j, y in G'_j) with (h_{j-1})_* x = h_j^* y
                let mut rel: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
                for j in 1..=n {
                    let push = ctx.push(cs[j], &h[j - 1])?;
                    let pull = ctx.pull(&h[j], ct[j - 1])?;
                    let mut by_value: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
                    for (yk, y) in t.elems[j - 1].iter().enumerate() {
                        by_value.entry(pull.apply(y)).or_default().push(yk);
                    }
                    let mut pairs = Vec::new();
                    for (xk, x) in s.elems[j - 1].iter().enumerate() {
                        if let Some(ys) = by_value.get(&push.apply(x)) {
                            pairs.extend(ys.iter().map(|&yk| (xk, yk)));
                        }
                    }
                    rel.push(pairs);
                }
                if rel.iter().any(|r| r.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; n];
                'pairs: loop {
                    let xs: Vec<usize> = (0..n).map(|j| rel[j][idx[j]].0).collect();
                    let ys: Vec<usize> = (0..n).map(|j| rel[j][idx[j]].1).collect();
                    dsu.union(s.vertex(&xs), t.vertex(&ys));
                    let mut p = n;
                    loop {
                        if p == 0 {
                            break 'pairs;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < rel[p].len() {
                            break;
                        }
                        idx[p] = 0;
                    }
                }
            }
        }
    }
    let g = ext_group(b, a, n)?;
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(total);
    let mut cocycles = Vec::with_capacity(total);
    let mut classes: Vec<ExtClass> = Vec::new();
    for t in &tuples {
        for v in 0..t.size {
            let vertex = t.offset + v;
            let e = realize_vertex(t, &t.unpack(v))?;
            let z = cocycle_of_extension(&e, &g)?;
            let r = dsu.find(vertex);
            let c = *root_class.entry(r).or_insert_with(|| {
                classes.push(ExtClass {
                    id: classes.len(),
                    ring,
                    a: a.clone(),
                    b: b.clone(),
                    n,
                    rep: e.clone(),
                    cocycle: z.clone(),
                    size: 0,
                });
                classes.len() - 1
            });
            classes[c].size += 1;
            class_of.push(c);
            cocycles.push(z);
        }
    }
    finish(a, b, n, Some(cap), total, classes, &class_of, &cocycles, &g)
}

/// Splice of realized station classes.
fn realize_vertex(t: &Tuple, pick: &[usize]) -> Result<NExtension> {
    let mut e: Option<NExtension> = None;
    for (j, &k) in pick.iter().enumerate() {
        let st = &t.stations[j];
        let s = realize_class(&st.g, &t.elems[j][k])?;
        e = Some(match e {
            None => NExtension::from_ses(&s),
            Some(prev) => splice(&prev, &s)?,
        });
    }
    Ok(e.expect("n >= 1"))
}

/// Default hinge cap for n >= 2: |A| |B|.
pub fn default_cap(a: &Module, b: &Module) -> u64 {
    ((a.order() * b.order()) as u64).max(2)
}

/// Classes at a fixed cap (ignored for n = 1).
pub fn pi0_at_cap(a: &Module, b: &Module, n: usize, cap: u64, budget: u64) -> Result<Pi0Report> {
    check_endpoints(a, b)?;
    match n {
        0 => Err(Error::Unsupported("n must be at least 1".into())),
        1 => pi0_one(a, b, budget),
        _ => pi0_higher(a, b, n, cap, budget),
    }
}

/// Classes with the stabilization check at twice the cap.
pub fn pi0(a: &Module, b: &Module, n: usize, cap: Option<u64>, budget: u64) -> Result<Pi0Report> {
    if n == 1 {
        let mut r = pi0_at_cap(a, b, 1, 0, budget)?;
        r.stable = Some(true);
        return Ok(r);
    }
    let cap = cap.unwrap_or_else(|| default_cap(a, b));
    let mut r = pi0_at_cap(a, b, n, cap, budget)?;
    let bigger = pi0_at_cap(a, b, n, cap * 2, budget)?;
    if bigger.count() != r.count() {
        return Err(Error::CapTooSmall(format!(
            "{} classes at hinge cap {cap}, {} at {}",
            r.count(),
            bigger.count(),
            cap * 2
        )));
    }
    r.stable = Some(true);
    Ok(r)
}

/// Class of a short exact sequence in a report for n = 1.
pub fn classify(report: &Pi0Report, s: &ShortExact) -> Result<usize> {
    for c in &report.classes {
        if ses_equivalence(&c.rep.station(1), s)?.is_some() {
            return Ok(c.id);
        }
    }
    Err(Error::NoWitness(
        "sequence matches no enumerated class".into(),
    ))
}
