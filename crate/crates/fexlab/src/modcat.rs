//! Finite modules over Z or Z/N presented as sums of cyclic groups, with the exact-category toolkit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::{smith, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Zn(u64),
}

impl Ring {
    pub fn parse(s: &str) -> Result<Ring> {
        let t = s.trim();
        if t == "Z" {
            return Ok(Ring::Z);
        }
        let n = t
            .strip_prefix("Z/")
            .and_then(|x| x.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("ring {s}")))?;
        if n < 2 {
            return Err(Error::Parse(format!("modulus must be at least 2, got {n}")));
        }
        Ok(Ring::Zn(n))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Zn(n) => write!(f, "Z/{n}"),
        }
    }
}

/// Direct sum of cyclic groups Z/d_1 + ... + Z/d_k, every d_i >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Module {
    pub ring: Ring,
    pub inv: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleJson {
    pub ring: String,
    pub invariants: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismJson {
    pub matrix: Vec<Vec<i64>>,
}

impl Module {
    pub fn new(ring: Ring, inv: Vec<u64>) -> Result<Module> {
        for &d in &inv {
            if d == 0 {
                return Err(Error::Unsupported(
                    "free summands are not supported; modules must be finite".into(),
                ));
            }
            if let Ring::Zn(n) = ring {
                if n % d != 0 {
                    return Err(Error::RingMismatch(format!("Z/{d}"), ring.to_string()));
                }
            }
        }
        Ok(Module {
            ring,
            inv: inv.into_iter().filter(|&d| d != 1).collect(),
        })
    }

    pub fn cyclic(ring: Ring, d: u64) -> Result<Module> {
        Module::new(ring, vec![d])
    }

    pub fn zero(ring: Ring) -> Module {
        Module { ring, inv: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.inv.len()
    }

    pub fn order(&self) -> u128 {
        self.inv.iter().map(|&d| d as u128).product()
    }

    pub fn is_zero(&self) -> bool {
        self.inv.is_empty()
    }

    /// Invariant factors d_1 | d_2 | ... of the underlying group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        crate::homology::invariant_factors(&self.inv)
    }

    pub fn is_normal(&self) -> bool {
        self.inv.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn is_iso(&self, other: &Module) -> bool {
        self.ring == other.ring && self.invariant_factors() == other.invariant_factors()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.inv)
            .map(|(&x, &d)| x.rem_euclid(d as i64))
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|x| -x).collect::<Vec<_>>())
    }

    pub fn zero_vec(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn basis(&self, j: usize) -> Vec<i64> {
        let mut v = self.zero_vec();
        v[j] = 1;
        self.reduce(&v)
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.inv {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for x in 0..d as i64 {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    pub fn direct_sum(parts: &[&Module]) -> Result<Module> {
        let ring = parts.first().map(|m| m.ring).unwrap_or(Ring::Z);
        for p in parts {
            if p.ring != ring {
                return Err(Error::RingMismatch(p.ring.to_string(), ring.to_string()));
            }
        }
        Ok(Module {
            ring,
            inv: parts.iter().flat_map(|m| m.inv.iter().copied()).collect(),
        })
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            ring: self.ring.to_string(),
            invariants: self.inv.clone(),
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<Module> {
        Module::new(Ring::parse(&j.ring)?, j.invariants.clone())
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.inv.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Module map given by a matrix with one row per target generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMorphism {
    pub source: Module,
    pub target: Module,
    pub matrix: Vec<Vec<i64>>,
}

impl ModMorphism {
    pub fn new(source: &Module, target: &Module, matrix: Vec<Vec<i64>>) -> Result<ModMorphism> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(
                source.ring.to_string(),
                target.ring.to_string(),
            ));
        }
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "matrix shape does not match {} -> {}",
                source, target
            )));
        }
        let mut m = matrix;
        for (i, row) in m.iter_mut().enumerate() {
            let e = target.inv[i] as i64;
            for (j, x) in row.iter_mut().enumerate() {
                *x = x.rem_euclid(e);
                let d = source.inv[j] as i128;
                if (*x as i128 * d) % e as i128 != 0 {
                    return Err(Error::NotAMap(format!(
                        "entry ({i},{j}) = {x} does not respect Z/{d} -> Z/{e}"
                    )));
                }
            }
        }
        Ok(ModMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: m,
        })
    }

    pub fn zero(source: &Module, target: &Module) -> ModMorphism {
        ModMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn identity(m: &Module) -> ModMorphism {
        let k = m.rank();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1 } else { 0 }).collect())
            .collect();
        ModMorphism {
            source: m.clone(),
            target: m.clone(),
            matrix,
        }
    }

    /// Multiplication by an integer.
    pub fn scalar(m: &Module, c: i64) -> ModMorphism {
        let k = m.rank();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { c } else { 0 }).collect())
            .collect();
        ModMorphism::new(m, m, matrix).expect("scalar map")
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let w: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0i128, |a, (&x, &y)| a + x as i128 * y as i128)
            })
            .zip(&self.target.inv)
            .map(|(s, &d)| s.rem_euclid(d as i128) as i64)
            .collect();
        w
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    /// self after other
    pub fn compose(&self, other: &ModMorphism) -> Result<ModMorphism> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let cols: Vec<Vec<i64>> = (0..other.source.rank())
            .map(|j| self.apply(&other.column(j)))
            .collect();
        let matrix = (0..self.target.rank())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        Ok(ModMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }

    pub fn add(&self, other: &ModMorphism) -> Result<ModMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "sum of maps with different ends".into(),
            ));
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        ModMorphism::new(&self.source, &self.target, matrix)
    }

    pub fn neg(&self) -> ModMorphism {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        ModMorphism::new(&self.source, &self.target, matrix).expect("negation")
    }

    pub fn sub(&self, other: &ModMorphism) -> Result<ModMorphism> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn is_mono(&self) -> bool {
        kernel(self).map(|(k, _)| k.is_zero()).unwrap_or(false)
    }

    pub fn is_epi(&self) -> bool {
        cokernel(self).map(|(c, _)| c.is_zero()).unwrap_or(false)
    }

    pub fn is_iso(&self) -> bool {
        self.source.order() == self.target.order() && self.is_mono()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<ModMorphism> {
        if !self.is_iso() {
            return Err(Error::HypothesisViolated("map is not invertible".into()));
        }
        factor_through_epi(self, &ModMorphism::identity(&self.source))
    }

    /// (f g): M + M' -> N
    pub fn hstack(parts: &[&ModMorphism]) -> Result<ModMorphism> {
        let target = parts[0].target.clone();
        let source = Module::direct_sum(&parts.iter().map(|p| &p.source).collect::<Vec<_>>())?;
        let mut matrix = vec![Vec::new(); target.rank()];
        for p in parts {
            if p.target != target {
                return Err(Error::ShapeMismatch("hstack with different targets".into()));
            }
            for (i, row) in p.matrix.iter().enumerate() {
                matrix[i].extend_from_slice(row);
            }
        }
        ModMorphism::new(&source, &target, matrix)
    }

    /// (f; g): M -> N + N'
    pub fn vstack(parts: &[&ModMorphism]) -> Result<ModMorphism> {
        let source = parts[0].source.clone();
        let target = Module::direct_sum(&parts.iter().map(|p| &p.target).collect::<Vec<_>>())?;
        let mut matrix = Vec::new();
        for p in parts {
            if p.source != source {
                return Err(Error::ShapeMismatch("vstack with different sources".into()));
            }
            matrix.extend(p.matrix.iter().cloned());
        }
        ModMorphism::new(&source, &target, matrix)
    }

    pub fn diag(parts: &[&ModMorphism]) -> Result<ModMorphism> {
        let source = Module::direct_sum(&parts.iter().map(|p| &p.source).collect::<Vec<_>>())?;
        let target = Module::direct_sum(&parts.iter().map(|p| &p.target).collect::<Vec<_>>())?;
        let mut matrix = vec![vec![0; source.rank()]; target.rank()];
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for (i, row) in p.matrix.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    matrix[r0 + i][c0 + j] = x;
                }
            }
            r0 += p.target.rank();
            c0 += p.source.rank();
        }
        ModMorphism::new(&source, &target, matrix)
    }

    /// Block matrix from a grid of maps, rows indexed by target summands.
    pub fn block(rows: &[Vec<&ModMorphism>]) -> Result<ModMorphism> {
        let r: Vec<ModMorphism> = rows
            .iter()
            .map(|row| ModMorphism::hstack(row))
            .collect::<Result<_>>()?;
        ModMorphism::vstack(&r.iter().collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            matrix: self.matrix.clone(),
        }
    }
}

pub struct Biproduct {
    pub sum: Module,
    pub inj: Vec<ModMorphism>,
    pub proj: Vec<ModMorphism>,
}

pub fn biproduct(parts: &[&Module]) -> Result<Biproduct> {
    let sum = Module::direct_sum(parts)?;
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    let mut off = 0;
    for p in parts {
        let mut m = vec![vec![0; p.rank()]; sum.rank()];
        for j in 0..p.rank() {
            m[off + j][j] = 1;
        }
        let i = ModMorphism::new(p, &sum, m)?;
        let mut q = vec![vec![0; sum.rank()]; p.rank()];
        for j in 0..p.rank() {
            q[j][off + j] = 1;
        }
        proj.push(ModMorphism::new(&sum, p, q)?);
        inj.push(i);
        off += p.rank();
    }
    Ok(Biproduct { sum, inj, proj })
}

fn big(x: i128) -> BigInt {
    BigInt::from(x)
}

fn small(x: &BigInt, modulus: u64) -> i64 {
    x.mod_floor(&BigInt::from(modulus))
        .to_i64()
        .expect("reduced below the modulus")
}

fn relations(m: &Module) -> Mat<BigInt> {
    let k = m.rank();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::from(m.inv[i])
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn hcat(a: &Mat<BigInt>, b: &Mat<BigInt>, rows: usize) -> Mat<BigInt> {
    (0..rows)
        .map(|i| {
            let mut r = a.get(i).cloned().unwrap_or_default();
            r.extend(b.get(i).cloned().unwrap_or_default());
            r
        })
        .collect()
}

fn lift(f: &ModMorphism) -> Mat<BigInt> {
    f.matrix
        .iter()
        .map(|r| r.iter().map(|&x| big(x as i128)).collect())
        .collect()
}

/// Z^k / (columns of gens + relations of m), with the projection from m.
fn quotient_by(m: &Module, gens: &Mat<BigInt>, ngens: usize) -> Result<(Module, ModMorphism)> {
    let k = m.rank();
    let a = hcat(gens, &relations(m), k);
    let s = smith(&a, ngens + k);
    let mut inv = Vec::new();
    let mut rows = Vec::new();
    for i in 0..k {
        let d = s.diag[i].to_u64().expect("quotient of a finite module");
        if d != 1 {
            inv.push(d);
            rows.push(s.u[i].iter().map(|x| small(x, d)).collect::<Vec<_>>());
        }
    }
    let q = Module::new(m.ring, inv)?;
    let p = ModMorphism::new(m, &q, rows)?;
    Ok((q, p))
}

/// Submodule generated by the columns of gens, with its inclusion.
fn submodule_of(m: &Module, gens: &Mat<BigInt>, ngens: usize) -> Result<(Module, ModMorphism)> {
    let k = m.rank();
    if k == 0 {
        return Ok((
            Module::zero(m.ring),
            ModMorphism::zero(&Module::zero(m.ring), m),
        ));
    }
    let rel = relations(m);
    let a = hcat(gens, &rel, k);
    let s = smith(&a, ngens + k);
    // lattice basis B = U^-1 diag(s), reduced row by row
    let b: Mat<BigInt> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| BigInt::from(small(&(&s.u_inv[i][j] * &s.diag[j]), m.inv[i])))
                .collect()
        })
        .collect();
    // C = diag(s)^-1 U D
    let c: Mat<BigInt> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| &s.u[i][j] * &rel[j][j] / &s.diag[i])
                .collect()
        })
        .collect();
    let t = smith(&c, k);
    let mut inv = Vec::new();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for j in 0..k {
        let d = t.diag[j].to_u64().expect("finite submodule");
        if d != 1 {
            inv.push(d);
            // column j of B U2^-1
            let col: Vec<i64> = (0..k)
                .map(|r| {
                    let v: BigInt = (0..k).map(|l| &b[r][l] * &t.u_inv[l][j]).sum();
                    small(&v, m.inv[r])
                })
                .collect();
            cols.push(col);
        }
    }
    let sub = Module::new(m.ring, inv)?;
    let matrix = (0..k)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let incl = ModMorphism::new(&sub, m, matrix)?;
    Ok((sub, incl))
}

pub fn kernel(f: &ModMorphism) -> Result<(Module, ModMorphism)> {
    let k = f.source.rank();
    let l = f.target.rank();
    if l == 0 {
        return submodule_of(&f.source, &lift(&ModMorphism::identity(&f.source)), k);
    }
    let a = hcat(&lift(f), &relations(&f.target), l);
    let s = smith(&a, k + l);
    let gens: Mat<BigInt> = (0..k)
        .map(|r| {
            (s.rank..k + l)
                .map(|c| BigInt::from(small(&s.v[r][c], f.source.inv[r])))
                .collect()
        })
        .collect();
    let ng = k + l - s.rank;
    submodule_of(&f.source, &gens, ng)
}

pub fn cokernel(f: &ModMorphism) -> Result<(Module, ModMorphism)> {
    quotient_by(&f.target, &lift(f), f.source.rank())
}

/// Image with inclusion and the corestriction of f.
pub fn image(f: &ModMorphism) -> Result<(Module, ModMorphism, ModMorphism)> {
    let (im, incl) = submodule_of(&f.target, &lift(f), f.source.rank())?;
    let co = lift_through_mono(&incl, f)?;
    Ok((im, incl, co))
}

/// Some x with f(x) = y.
pub fn solve(f: &ModMorphism, y: &[i64]) -> Option<Vec<i64>> {
    let k = f.source.rank();
    let l = f.target.rank();
    if l == 0 {
        return Some(f.source.zero_vec());
    }
    let a = hcat(&lift(f), &relations(&f.target), l);
    let s = smith(&a, k + l);
    let uy: Vec<BigInt> = (0..l)
        .map(|i| (0..l).map(|j| &s.u[i][j] * BigInt::from(y[j])).sum())
        .collect();
    let mut w = vec![BigInt::zero(); k + l];
    for i in 0..l {
        if i < s.rank {
            if !uy[i].is_multiple_of(&s.diag[i]) {
                return None;
            }
            w[i] = &uy[i] / &s.diag[i];
        } else if !uy[i].is_zero() {
            return None;
        }
    }
    let x: Vec<i64> = (0..k)
        .map(|r| {
            let v: BigInt = (0..k + l).map(|c| &s.v[r][c] * &w[c]).sum();
            small(&v, f.source.inv[r])
        })
        .collect();
    Some(x)
}

/// h with i h = g, for a mono i whose image contains that of g.
pub fn lift_through_mono(i: &ModMorphism, g: &ModMorphism) -> Result<ModMorphism> {
    if i.target != g.target {
        return Err(Error::ShapeMismatch(
            "lift through mono: targets differ".into(),
        ));
    }
    let cols: Vec<Vec<i64>> = (0..g.source.rank())
        .map(|j| {
            solve(i, &g.column(j))
                .ok_or_else(|| Error::NoSolution("image not contained in the mono".into()))
        })
        .collect::<Result<_>>()?;
    let matrix = (0..i.source.rank())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    ModMorphism::new(&g.source, &i.source, matrix)
}

/// h' with h' p = h, for an epi p whose kernel h kills.
pub fn factor_through_epi(p: &ModMorphism, h: &ModMorphism) -> Result<ModMorphism> {
    if p.source != h.source {
        return Err(Error::ShapeMismatch(
            "factor through epi: sources differ".into(),
        ));
    }
    let cols: Vec<Vec<i64>> = (0..p.target.rank())
        .map(|j| {
            let e = solve(p, &p.target.basis(j))
                .ok_or_else(|| Error::NoSolution("map is not epi".into()))?;
            Ok(h.apply(&e))
        })
        .collect::<Result<_>>()?;
    let matrix = (0..h.target.rank())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let out = ModMorphism::new(&p.target, &h.target, matrix)?;
    if out.compose(p)? != *h {
        return Err(Error::NoSolution(
            "map does not vanish on the kernel".into(),
        ));
    }
    Ok(out)
}

/// Number of module maps M -> N.
pub fn hom_count(m: &Module, n: &Module) -> u128 {
    let mut c: u128 = 1;
    for &e in &n.inv {
        for &d in &m.inv {
            c *= e.gcd(&d) as u128;
        }
    }
    c
}

/// All maps M -> N in lexicographic order of their matrices.
pub fn hom_enumerate(m: &Module, n: &Module, budget: u64) -> Result<Vec<ModMorphism>> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch(m.ring.to_string(), n.ring.to_string()));
    }
    let total = hom_count(m, n);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(budget));
    }
    let choices: Vec<Vec<Vec<i64>>> = n
        .inv
        .iter()
        .map(|&e| {
            m.inv
                .iter()
                .map(|&d| {
                    let g = e.gcd(&d);
                    let step = (e / g) as i64;
                    (0..g as i64).map(|t| t * step).collect()
                })
                .collect()
        })
        .collect();
    let slots: Vec<(usize, usize)> = (0..n.rank())
        .flat_map(|i| (0..m.rank()).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut matrix = vec![vec![0; m.rank()]; n.rank()];
        for (s, &(i, j)) in slots.iter().enumerate() {
            matrix[i][j] = choices[i][j][idx[s]];
        }
        out.push(ModMorphism {
            source: m.clone(),
            target: n.clone(),
            matrix,
        });
        // odometer, last slot fastest
        let mut p = slots.len();
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            let (i, j) = slots[p];
            idx[p] += 1;
            if idx[p] < choices[i][j].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

pub fn automorphisms(m: &Module, budget: u64) -> Result<Vec<ModMorphism>> {
    Ok(hom_enumerate(m, m, budget)?
        .into_iter()
        .filter(|f| f.is_iso())
        .collect())
}

/// Normal form of a module, with an isomorphism into it.
pub fn normalize(m: &Module) -> Result<(Module, ModMorphism)> {
    quotient_by(m, &vec![Vec::new(); m.rank()], 0)
}

/// A -> E -> B with i mono, p epi, im i = ker p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShortExact {
    pub i: ModMorphism,
    pub p: ModMorphism,
}

impl ShortExact {
    pub fn new(i: ModMorphism, p: ModMorphism) -> Result<ShortExact> {
        if i.target != p.source {
            return Err(Error::ShapeMismatch(
                "short exact sequence maps do not compose".into(),
            ));
        }
        if !i.is_mono() || !p.is_epi() || !exact_at(&i, &p)? {
            return Err(Error::ExactnessViolated(
                "sequence is not short exact".into(),
            ));
        }
        Ok(ShortExact { i, p })
    }

    pub fn a(&self) -> &Module {
        &self.i.source
    }
    pub fn e(&self) -> &Module {
        &self.i.target
    }
    pub fn b(&self) -> &Module {
        &self.p.target
    }

    pub fn split(a: &Module, b: &Module) -> Result<ShortExact> {
        let bp = biproduct(&[a, b])?;
        ShortExact::new(bp.inj[0].clone(), bp.proj[1].clone())
    }

    /// True when p admits a section.
    pub fn is_split(&self, budget: u64) -> Result<bool> {
        let id = ModMorphism::identity(self.b());
        Ok(hom_enumerate(self.b(), self.e(), budget)?
            .iter()
            .any(|s| self.p.compose(s).map(|c| c == id).unwrap_or(false)))
    }
}

/// im f = ker g.
pub fn exact_at(f: &ModMorphism, g: &ModMorphism) -> Result<bool> {
    if !g.compose(f)?.is_zero() {
        return Ok(false);
    }
    let (im, _, _) = image(f)?;
    let (ker, _) = kernel(g)?;
    Ok(im.order() == ker.order())
}

pub struct Square {
    pub obj: Module,
    /// legs from the two corners
    pub left: ModMorphism,
    pub right: ModMorphism,
}

/// Pushout of i: A -> E and f: A -> C, with legs E -> F and C -> F.
pub fn pushout(i: &ModMorphism, f: &ModMorphism) -> Result<Square> {
    if i.source != f.source {
        return Err(Error::ShapeMismatch(
            "pushout legs have different sources".into(),
        ));
    }
    let q = ModMorphism::vstack(&[&i.neg(), f])?;
    let (obj, proj) = cokernel(&q)?;
    let bp = biproduct(&[&i.target, &f.target])?;
    Ok(Square {
        left: proj.compose(&bp.inj[0])?,
        right: proj.compose(&bp.inj[1])?,
        obj,
    })
}

/// Pullback of p: E -> B and g: C -> B, with legs P -> E and P -> C.
pub fn pullback(p: &ModMorphism, g: &ModMorphism) -> Result<Square> {
    if p.target != g.target {
        return Err(Error::ShapeMismatch(
            "pullback legs have different targets".into(),
        ));
    }
    let q = ModMorphism::hstack(&[p, &g.neg()])?;
    let (obj, incl) = kernel(&q)?;
    let bp = biproduct(&[&p.source, &g.source])?;
    Ok(Square {
        left: bp.proj[0].compose(&incl)?,
        right: bp.proj[1].compose(&incl)?,
        obj,
    })
}

/// Pushforward a_* s with the middle map E -> E'.
pub fn pushout_ses(s: &ShortExact, a: &ModMorphism) -> Result<(ShortExact, ModMorphism)> {
    let sq = pushout(&s.i, a)?;
    // E' -> B induced by (p, 0)
    let zero = ModMorphism::zero(&a.target, s.b());
    let h = ModMorphism::hstack(&[&s.p, &zero])?;
    let q = ModMorphism::vstack(&[&s.i.neg(), a])?;
    let (_, proj) = cokernel(&q)?;
    let p2 = factor_through_epi(&proj, &h)?;
    Ok((ShortExact::new(sq.right, p2)?, sq.left))
}

/// Pullback b^* s with the middle map E' -> E.
pub fn pullback_ses(s: &ShortExact, b: &ModMorphism) -> Result<(ShortExact, ModMorphism)> {
    let sq = pullback(&s.p, b)?;
    // A -> E' induced by (i, 0)
    let zero = ModMorphism::zero(s.a(), &b.source);
    let h = ModMorphism::vstack(&[&s.i, &zero])?;
    let q = ModMorphism::hstack(&[&s.p, &b.neg()])?;
    let (_, incl) = kernel(&q)?;
    let i2 = lift_through_mono(&incl, &h)?;
    Ok((ShortExact::new(i2, sq.right)?, sq.left))
}

/// The square x -a-> y, x -b-> x2, y -c-> w, x2 -d-> w is bicartesian:
/// x -> y + x2 -> w is short exact.
pub fn is_bicartesian(
    a: &ModMorphism,
    b: &ModMorphism,
    c: &ModMorphism,
    d: &ModMorphism,
) -> Result<bool> {
    if c.compose(a)? != d.compose(b)? {
        return Ok(false);
    }
    let left = ModMorphism::vstack(&[a, &b.neg()])?;
    let right = ModMorphism::hstack(&[c, d])?;
    Ok(left.is_mono() && right.is_epi() && exact_at(&left, &right)?)
}

/// A map of short exact sequences (f', f, f'').
#[derive(Clone, Debug)]
pub struct SesMap {
    pub from: ShortExact,
    pub to: ShortExact,
    pub fa: ModMorphism,
    pub fe: ModMorphism,
    pub fb: ModMorphism,
}

impl SesMap {
    pub fn new(
        from: ShortExact,
        to: ShortExact,
        fa: ModMorphism,
        fe: ModMorphism,
        fb: ModMorphism,
    ) -> Result<SesMap> {
        if fe.compose(&from.i)? != to.i.compose(&fa)?
            || to.p.compose(&fe)? != fb.compose(&from.p)?
        {
            return Err(Error::NotAMap(
                "squares of the map of sequences do not commute".into(),
            ));
        }
        Ok(SesMap {
            from,
            to,
            fa,
            fe,
            fb,
        })
    }
}

pub struct Factorization {
    /// A' -> Z -> B
    pub middle: ShortExact,
    /// E -> Z
    pub to_middle: ModMorphism,
    /// Z -> E'
    pub from_middle: ModMorphism,
    pub left_bicartesian: bool,
    pub right_bicartesian: bool,
}

/// Splits a map of sequences into a pushout square followed by a pullback square.
pub fn factor_map_of_ses(f: &SesMap) -> Result<Factorization> {
    let (middle, to_middle) = pushout_ses(&f.from, &f.fa)?;
    // Z -> E' from (f_E, i') on E + A'
    let q = ModMorphism::vstack(&[&f.from.i.neg(), &f.fa])?;
    let (_, proj) = cokernel(&q)?;
    let h = ModMorphism::hstack(&[&f.fe, &f.to.i])?;
    let from_middle = factor_through_epi(&proj, &h)?;
    let left_bicartesian = is_bicartesian(&f.from.i, &f.fa, &to_middle, &middle.i)?;
    let right_bicartesian = is_bicartesian(&from_middle, &middle.p, &f.to.p, &f.fb)?;
    Ok(Factorization {
        middle,
        to_middle,
        from_middle,
        left_bicartesian,
        right_bicartesian,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct FiveLemmaReport {
    pub iso_ok: bool,
    pub mono_ok: bool,
    pub epi_ok: bool,
}

impl FiveLemmaReport {
    pub fn ok(&self) -> bool {
        self.iso_ok && self.mono_ok && self.epi_ok
    }
}

/// The three implications of the short five lemma on a given map of sequences.
pub fn five_lemma_check(f: &SesMap) -> FiveLemmaReport {
    let imp = |h: bool, c: bool| !h || c;
    FiveLemmaReport {
        iso_ok: imp(f.fa.is_iso() && f.fb.is_iso(), f.fe.is_iso()),
        mono_ok: imp(f.fa.is_mono() && f.fb.is_mono(), f.fe.is_mono()),
        epi_ok: imp(f.fa.is_epi() && f.fb.is_epi(), f.fe.is_epi()),
    }
}

/// 3x3 grid: rows[r] = (h1, h2) maps X[r][0] -> X[r][1] -> X[r][2], cols[c] = (v1, v2).
#[derive(Clone, Debug)]
pub struct Grid {
    pub rows: [(ModMorphism, ModMorphism); 3],
    pub cols: [(ModMorphism, ModMorphism); 3],
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct GridReport {
    pub commutes: bool,
    pub columns_exact: bool,
    pub rows_exact: [bool; 3],
}

fn ses_holds(f: &ModMorphism, g: &ModMorphism) -> Result<bool> {
    Ok(f.is_mono() && g.is_epi() && exact_at(f, g)?)
}

pub fn three_by_three_check(g: &Grid) -> Result<GridReport> {
    let mut commutes = true;
    for r in 0..2 {
        for c in 0..2 {
            let h_top = if c == 0 { &g.rows[r].0 } else { &g.rows[r].1 };
            let h_bot = if c == 0 {
                &g.rows[r + 1].0
            } else {
                &g.rows[r + 1].1
            };
            let v_left = if r == 0 { &g.cols[c].0 } else { &g.cols[c].1 };
            let v_right = if r == 0 {
                &g.cols[c + 1].0
            } else {
                &g.cols[c + 1].1
            };
            commutes &= v_right.compose(h_top)? == h_bot.compose(v_left)?;
        }
    }
    let mut columns_exact = true;
    for c in &g.cols {
        columns_exact &= ses_holds(&c.0, &c.1)?;
    }
    let mut rows_exact = [false; 3];
    for (r, row) in g.rows.iter().enumerate() {
        rows_exact[r] = ses_holds(&row.0, &row.1)?;
    }
    Ok(GridReport {
        commutes,
        columns_exact,
        rows_exact,
    })
}

/// The grid cut out of s by a submodule e0 of its middle term.
pub fn grid_from_submodule(s: &ShortExact, e0: &ModMorphism) -> Result<Grid> {
    // top row: i^-1(e0) -> e0 -> p(e0)
    let sq = pullback(&s.i, e0)?;
    let a0_to_a = sq.left.clone();
    let a0_to_e0 = sq.right.clone();
    let (_, b0_incl, e0_to_b0) = image(&s.p.compose(e0)?)?;
    // bottom row: quotients
    let (_, qa) = cokernel(&a0_to_a)?;
    let (_, qe) = cokernel(e0)?;
    let (_, qb) = cokernel(&b0_incl)?;
    let ia = factor_through_epi(&qa, &qe.compose(&s.i)?)?;
    let pb = factor_through_epi(&qe, &qb.compose(&s.p)?)?;
    Ok(Grid {
        rows: [(a0_to_e0, e0_to_b0), (s.i.clone(), s.p.clone()), (ia, pb)],
        cols: [(a0_to_a, qa), (e0.clone(), qe), (b0_incl, qb)],
    })
}

/// Random fixtures for property checks.
pub mod sample {
    use rand::Rng;

    use super::*;

    pub fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    pub fn module<R: Rng>(rng: &mut R, ring: Ring, max_rank: usize) -> Module {
        let n = match ring {
            Ring::Zn(n) => n,
            Ring::Z => 4,
        };
        let ds = divisors(n);
        let k = rng.gen_range(0..=max_rank);
        Module::new(
            ring,
            (0..k).map(|_| ds[rng.gen_range(0..ds.len())]).collect(),
        )
        .expect("divisors of N")
    }

    pub fn morphism<R: Rng>(rng: &mut R, m: &Module, n: &Module) -> ModMorphism {
        let matrix = n
            .inv
            .iter()
            .map(|&e| {
                m.inv
                    .iter()
                    .map(|&d| {
                        let g = e.gcd(&d);
                        (rng.gen_range(0..g) * (e / g)) as i64
                    })
                    .collect()
            })
            .collect();
        ModMorphism::new(m, n, matrix).expect("sampled entries are admissible")
    }

    /// A submodule of E (image of a random map) and its quotient.
    pub fn ses_in<R: Rng>(rng: &mut R, e: &Module, max_rank: usize) -> ShortExact {
        let src = module(rng, e.ring, max_rank);
        let f = morphism(rng, &src, e);
        let (_, incl, _) = image(&f).expect("image");
        let (_, p) = cokernel(&incl).expect("cokernel");
        ShortExact::new(incl, p).expect("image and cokernel form a short exact sequence")
    }

    /// A sequence starting at A: the pushout of a random sequence along a random map into A.
    pub fn ses_from<R: Rng>(rng: &mut R, a: &Module, max_rank: usize) -> ShortExact {
        let s = ses(rng, a.ring, max_rank);
        let u = morphism(rng, s.a(), a);
        pushout_ses(&s, &u).expect("pushout of a sequence").0
    }

    pub fn ses<R: Rng>(rng: &mut R, ring: Ring, max_rank: usize) -> ShortExact {
        let e = module(rng, ring, max_rank);
        ses_in(rng, &e, max_rank)
    }

    /// Map of sequences induced by a submodule inclusion E0 -> E.
    pub fn ses_map<R: Rng>(rng: &mut R, ring: Ring, max_rank: usize) -> SesMap {
        let s = ses(rng, ring, max_rank);
        let sub = ses_in(rng, s.e(), max_rank).i;
        let g = grid_from_submodule(&s, &sub).expect("grid");
        let top = ShortExact::new(g.rows[0].0.clone(), g.rows[0].1.clone()).expect("top row");
        SesMap::new(
            top,
            s,
            g.cols[0].0.clone(),
            g.cols[1].0.clone(),
            g.cols[2].0.clone(),
        )
        .expect("commuting")
    }
}

/// Hom(M, N) as a module: coordinate t_ij scales the entry (i, j) by e_i / gcd(e_i, d_j).
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: Module,
    pub target: Module,
    pub module: Module,
    slots: Vec<(usize, usize, i64)>,
}

impl HomModule {
    pub fn new(m: &Module, n: &Module) -> Result<HomModule> {
        if m.ring != n.ring {
            return Err(Error::RingMismatch(m.ring.to_string(), n.ring.to_string()));
        }
        let mut slots = Vec::new();
        let mut inv = Vec::new();
        for (i, &e) in n.inv.iter().enumerate() {
            for (j, &d) in m.inv.iter().enumerate() {
                let g = e.gcd(&d);
                if g > 1 {
                    slots.push((i, j, (e / g) as i64));
                    inv.push(g);
                }
            }
        }
        Ok(HomModule {
            source: m.clone(),
            target: n.clone(),
            module: Module::new(m.ring, inv)?,
            slots,
        })
    }

    pub fn encode(&self, f: &ModMorphism) -> Vec<i64> {
        let v: Vec<i64> = self
            .slots
            .iter()
            .map(|&(i, j, s)| f.matrix[i][j] / s)
            .collect();
        self.module.reduce(&v)
    }

    pub fn decode(&self, t: &[i64]) -> ModMorphism {
        let mut f = ModMorphism::zero(&self.source, &self.target);
        for (k, &(i, j, s)) in self.slots.iter().enumerate() {
            f.matrix[i][j] = (t[k] * s).rem_euclid(self.target.inv[i] as i64);
        }
        f
    }

    /// Matrix of a linear operation Hom(M, N) -> Hom(M', N').
    pub fn linear_map<F: Fn(&ModMorphism) -> Result<ModMorphism>>(
        &self,
        to: &HomModule,
        op: F,
    ) -> Result<ModMorphism> {
        let cols: Vec<Vec<i64>> = (0..self.module.rank())
            .map(|k| Ok(to.encode(&op(&self.decode(&self.module.basis(k)))?)))
            .collect::<Result<_>>()?;
        let matrix = (0..to.module.rank())
            .map(|r| cols.iter().map(|c| c[r]).collect())
            .collect();
        ModMorphism::new(&self.module, &to.module, matrix)
    }
}

/// Some map phi: E -> E2 with phi i = i2 and p2 phi = p, when one exists.
pub fn ses_equivalence(s: &ShortExact, s2: &ShortExact) -> Result<Option<ModMorphism>> {
    if s.a() != s2.a() || s.b() != s2.b() {
        return Err(Error::EndpointMismatch(
            "sequences have different end terms".into(),
        ));
    }
    if !s.e().is_iso(s2.e()) {
        return Ok(None);
    }
    let h = HomModule::new(s.e(), s2.e())?;
    let ha = HomModule::new(s.a(), s2.e())?;
    let hb = HomModule::new(s.e(), s.b())?;
    let pre = h.linear_map(&ha, |phi| phi.compose(&s.i))?;
    let post = h.linear_map(&hb, |phi| s2.p.compose(phi))?;
    let l = ModMorphism::vstack(&[&pre, &post])?;
    let mut y = ha.encode(&s2.i);
    y.extend(hb.encode(&s.p));
    Ok(solve(&l, &y).map(|t| h.decode(&t)))
}
