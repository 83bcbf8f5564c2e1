//! Ext through the periodic free resolution of a sum of cyclic modules.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::homology::AbGroup;
use crate::modcat::{
    cokernel, factor_through_epi, kernel, lift_through_mono, pullback_ses, pushout_ses, solve,
    ModMorphism, Module, Ring, ShortExact,
};

use super::NExtension;

/// Multiplier of d_k: P_k -> P_{k-1} on summand i, or None once the resolution has stopped.
pub fn res_coeff(ring: Ring, b: u64, k: usize) -> Option<u64> {
    if k == 0 {
        return Some(1);
    }
    match ring {
        Ring::Z => (k == 1).then_some(b),
        Ring::Zn(n) => {
            if b == n {
                None
            } else if k % 2 == 1 {
                Some(b)
            } else {
                Some(n / b)
            }
        }
    }
}

fn alive(ring: Ring, b: &Module, k: usize) -> Vec<usize> {
    (0..b.rank())
        .filter(|&i| res_coeff(ring, b.inv[i], k).is_some())
        .collect()
}

/// Ext^n(B, A) with the data to read off classes of cocycles.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub n: usize,
    pub b: Module,
    pub a: Module,
    /// summands of P_n, one copy of A each
    pub summands: Vec<usize>,
    pub cochains: Module,
    pub cycles_incl: ModMorphism,
    pub to_class: ModMorphism,
    pub group: Module,
}

fn cochain_module(a: &Module, count: usize) -> Result<Module> {
    Ok(Module {
        ring: a.ring,
        inv: (0..count).flat_map(|_| a.inv.iter().copied()).collect(),
    })
}

/// delta^k: C^k -> C^{k+1}.
fn coboundary(ring: Ring, b: &Module, a: &Module, k: usize) -> Result<ModMorphism> {
    let src_s = alive(ring, b, k);
    let tgt_s = alive(ring, b, k + 1);
    let src = cochain_module(a, src_s.len())?;
    let tgt = cochain_module(a, tgt_s.len())?;
    let r = a.rank();
    let mut m = vec![vec![0i64; src.rank()]; tgt.rank()];
    for (ti, &i) in tgt_s.iter().enumerate() {
        let si = src_s
            .iter()
            .position(|&x| x == i)
            .expect("alive summands shrink");
        let c = res_coeff(ring, b.inv[i], k + 1).unwrap() as i64;
        for q in 0..r {
            m[ti * r + q][si * r + q] = c;
        }
    }
    ModMorphism::new(&src, &tgt, m)
}

pub fn ext_group(b: &Module, a: &Module, n: usize) -> Result<ExtGroup> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring.to_string(), b.ring.to_string()));
    }
    let ring = a.ring;
    let dn = coboundary(ring, b, a, n)?;
    let (_, incl) = kernel(&dn)?;
    let boundaries = if n == 0 {
        ModMorphism::zero(&Module::zero(ring), &incl.source)
    } else {
        let prev = coboundary(ring, b, a, n - 1)?;
        lift_through_mono(&incl, &prev)?
    };
    let (group, to_class) = cokernel(&boundaries)?;
    Ok(ExtGroup {
        n,
        b: b.clone(),
        a: a.clone(),
        summands: alive(ring, b, n),
        cochains: dn.source,
        cycles_incl: incl,
        to_class,
        group,
    })
}

/// The oracle group Ext^n_R(B, A).
pub fn ext_resolution(b: &Module, a: &Module, n: usize) -> Result<AbGroup> {
    let g = ext_group(b, a, n)?;
    Ok(AbGroup::from_cyclic(&g.group.inv))
}

impl ExtGroup {
    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Class of a cocycle in C^n.
    pub fn class_of_cochain(&self, phi: &[i64]) -> Result<Vec<i64>> {
        let z = solve(&self.cycles_incl, phi)
            .ok_or_else(|| Error::HypothesisViolated("cochain is not a cocycle".into()))?;
        Ok(self.to_class.apply(&z))
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        self.group.elements()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.group.add(x, y)
    }

    /// Cocycle representing a class.
    pub fn cochain_of_class(&self, x: &[i64]) -> Result<Vec<i64>> {
        let z = solve(&self.to_class, x)
            .ok_or_else(|| Error::NoSolution("class outside the group".into()))?;
        Ok(self.cycles_incl.apply(&z))
    }
}

/// Lift the identity of B along the resolution into the spliced complex of E; read off degree n.
pub fn cocycle_of_extension(e: &NExtension, g: &ExtGroup) -> Result<Vec<i64>> {
    let n = e.n();
    if g.n != n || g.a != *e.a() || g.b != *e.b() {
        return Err(Error::EndpointMismatch(
            "extension does not match the Ext group".into(),
        ));
    }
    let ring = e.ring();
    let b = e.b();
    let r = e.a().rank();
    let mut phi = vec![0i64; g.cochains.rank()];
    for i in 0..b.rank() {
        // x_0 in E_n over the generator of summand i
        let d = e.differential(n);
        let mut x =
            solve(&d, &b.basis(i)).ok_or_else(|| Error::NoSolution("d_n is not onto".into()))?;
        let mut ok = true;
        for k in 1..=n {
            let Some(c) = res_coeff(ring, b.inv[i], k) else {
                ok = false;
                break;
            };
            let pos = n - k;
            let d = e.differential(pos);
            let prev_obj = &d.target;
            let y: Vec<i64> = prev_obj.reduce(&x.iter().map(|v| v * c as i64).collect::<Vec<_>>());
            x = solve(&d, &y)
                .ok_or_else(|| Error::NoSolution("spliced complex is not exact".into()))?;
        }
        if ok {
            let slot = g
                .summands
                .iter()
                .position(|&s| s == i)
                .expect("summand alive at n");
            phi[slot * r..slot * r + r].copy_from_slice(&x);
        }
    }
    g.class_of_cochain(&phi)
}

/// A short exact sequence with the given class in Ext^1(B, A).
pub fn realize_class(g: &ExtGroup, x: &[i64]) -> Result<ShortExact> {
    if g.n != 1 {
        return Err(Error::Unsupported(
            "realization from cocycles is for n = 1".into(),
        ));
    }
    let (a, b) = (&g.a, &g.b);
    let ring = a.ring;
    let phi = g.cochain_of_class(x)?;
    let r = a.rank();
    let exp_a = a.inv.iter().copied().max().unwrap_or(1);
    // A + one cyclic generator per summand of B, large enough to carry b_i g_i = phi_i
    let mut inv = a.inv.clone();
    inv.extend(b.inv.iter().map(|&d| match ring {
        Ring::Z => d * exp_a,
        Ring::Zn(n) => n,
    }));
    let big = Module { ring, inv };
    let k = big.rank();
    let l = big
        .inv
        .iter()
        .fold(1u64, |acc, &d| num_integer::lcm(acc, d));
    let rel_src = Module {
        ring,
        inv: vec![l; b.rank()],
    };
    let mut rel = vec![vec![0i64; b.rank()]; k];
    for (i, &d) in b.inv.iter().enumerate() {
        if let Some(s) = g.summands.iter().position(|&s| s == i) {
            for q in 0..r {
                rel[q][i] = -phi[s * r + q];
            }
        }
        rel[r + i][i] = d as i64;
    }
    let rel = ModMorphism::new(&rel_src, &big, rel)?;
    let (_, proj) = cokernel(&rel)?;
    let mut im = vec![vec![0i64; r]; k];
    for (t, row) in im.iter_mut().enumerate().take(r) {
        row[t] = 1;
    }
    let i = proj.compose(&ModMorphism::new(a, &big, im)?)?;
    let mut pm = vec![vec![0i64; k]; b.rank()];
    for (t, row) in pm.iter_mut().enumerate() {
        row[r + t] = 1;
    }
    let p = factor_through_epi(&proj, &ModMorphism::new(&big, b, pm)?)?;
    ShortExact::new(i, p)
}

/// Ext^1 group with realized generators.
pub struct Station {
    pub g: ExtGroup,
    pub gens: Vec<ShortExact>,
}

/// Ext^1 groups and the maps induced on them, memoized.
#[derive(Default)]
pub struct Ext1Cache {
    stations: HashMap<(Module, Module), Rc<Station>>,
    pushes: HashMap<(Module, ModMorphism), ModMorphism>,
    pulls: HashMap<(ModMorphism, Module), ModMorphism>,
}

impl Ext1Cache {
    /// Ext^1(b, a).
    pub fn station(&mut self, b: &Module, a: &Module) -> Result<Rc<Station>> {
        let key = (b.clone(), a.clone());
        if let Some(s) = self.stations.get(&key) {
            return Ok(s.clone());
        }
        let g = ext_group(b, a, 1)?;
        let gens = (0..g.group.rank())
            .map(|k| realize_class(&g, &g.group.basis(k)))
            .collect::<Result<_>>()?;
        let s = Rc::new(Station { g, gens });
        self.stations.insert(key, s.clone());
        Ok(s)
    }

    /// h_*: Ext^1(B, A) -> Ext^1(B, A') for h: A -> A'.
    pub fn push(&mut self, b: &Module, h: &ModMorphism) -> Result<ModMorphism> {
        let key = (b.clone(), h.clone());
        if let Some(m) = self.pushes.get(&key) {
            return Ok(m.clone());
        }
        let src = self.station(b, &h.source)?;
        let tgt = self.station(b, &h.target)?;
        let cols = src
            .gens
            .iter()
            .map(|s| {
                let (s2, _) = pushout_ses(s, h)?;
                cocycle_of_extension(&NExtension::from_ses(&s2), &tgt.g)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = columns(&src.g.group, &tgt.g.group, &cols)?;
        self.pushes.insert(key, m.clone());
        Ok(m)
    }

    /// h^*: Ext^1(B', A) -> Ext^1(B, A) for h: B -> B'.
    pub fn pull(&mut self, h: &ModMorphism, a: &Module) -> Result<ModMorphism> {
        let key = (h.clone(), a.clone());
        if let Some(m) = self.pulls.get(&key) {
            return Ok(m.clone());
        }
        let src = self.station(&h.target, a)?;
        let tgt = self.station(&h.source, a)?;
        let cols = src
            .gens
            .iter()
            .map(|s| {
                let (s2, _) = pullback_ses(s, h)?;
                cocycle_of_extension(&NExtension::from_ses(&s2), &tgt.g)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = columns(&src.g.group, &tgt.g.group, &cols)?;
        self.pulls.insert(key, m.clone());
        Ok(m)
    }
}

fn columns(src: &Module, tgt: &Module, cols: &[Vec<i64>]) -> Result<ModMorphism> {
    let matrix = (0..tgt.rank())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    ModMorphism::new(src, tgt, matrix)
}
