//! Integral homology of finite simplicial sets through normalized chains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::simplicial::{Simplex, SimplicialMap, SimplicialSet};
use crate::snf;

/// Finitely generated abelian group: free rank plus invariant factors d_1 | d_2 | ...
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct AbGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbGroup {
    pub fn zero() -> AbGroup {
        AbGroup::default()
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup {
            rank,
            torsion: vec![],
        }
    }

    /// Normalizes any list of cyclic orders (0 = free, 1 dropped) to invariant factors.
    pub fn from_cyclic(orders: &[u64]) -> AbGroup {
        let rank = orders.iter().filter(|&&d| d == 0).count();
        let tors: Vec<u64> = orders.iter().copied().filter(|&d| d > 1).collect();
        AbGroup {
            rank,
            torsion: invariant_factors(&tors),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group; None when there is a free part.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn parse(s: &str) -> Option<AbGroup> {
        let s = s.trim();
        if s == "0" {
            return Some(AbGroup::zero());
        }
        let mut orders = Vec::new();
        for part in s.split('+') {
            let p = part.trim();
            if let Some(d) = p.strip_prefix("Z/") {
                orders.push(d.trim().parse().ok()?);
            } else if p == "Z" {
                orders.push(0);
            } else {
                let r = p.strip_prefix("Z^")?;
                let r: usize = r.trim().parse().ok()?;
                orders.extend(std::iter::repeat_n(0, r));
            }
        }
        Some(AbGroup::from_cyclic(&orders))
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariant factors of a direct sum of cyclic groups of the given (positive) orders.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let n = orders.len();
    let m: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { orders[i] as i64 } else { 0 })
                .collect()
        })
        .collect();
    let r = snf::smith(&m, n);
    let mut out: Vec<u64> = r
        .diag
        .iter()
        .map(|&d| d as u64)
        .filter(|&d| d > 1)
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), i64>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let e = self.entries.entry((r, c)).or_insert(0);
        *e += v;
        if *e == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for (&(r, c), &v) in &self.entries {
            m[r][c] = v;
        }
        m
    }

    /// Product self * other.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (&(r, k), &v) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, w) in row {
                    out.add(r, c, v * w);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rank and non-unit elementary divisors.
    pub fn elementary_divisors(&self) -> (usize, Vec<BigInt>) {
        match sparse_reduce(self) {
            Some(r) => r,
            None => dense_divisors(&snf::to_big(&self.dense())),
        }
    }
}

fn dense_divisors(m: &snf::Mat<BigInt>) -> (usize, Vec<BigInt>) {
    if m.is_empty() {
        return (0, vec![]);
    }
    let cols = m[0].len();
    let r = snf::smith(m, cols);
    let divs = r
        .diag
        .iter()
        .filter(|d| !d.is_zero() && d.abs() > BigInt::from(1))
        .cloned()
        .collect();
    (r.rank, divs)
}

/// Unit-pivot elimination on the sparse matrix, then dense SNF on what is left.
/// Returns None on overflow of the machine-word entries.
fn sparse_reduce(m: &SparseMatrix) -> Option<(usize, Vec<BigInt>)> {
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (&(r, c), &v) in &m.entries {
        rows[r].insert(c, v);
        cols[c].insert(r);
    }
    let mut alive_row = vec![true; m.rows];
    let mut pivots = 0usize;
    loop {
        // choose a unit entry minimizing (row length - 1) * (col length - 1)
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, cs) in cols.iter().enumerate() {
            if cs.is_empty() {
                continue;
            }
            for &r in cs {
                let v = rows[r][&c];
                if v == 1 || v == -1 {
                    let cost = (rows[r].len() - 1) * (cs.len() - 1);
                    if best.map(|b| cost < b.2).unwrap_or(true) {
                        best = Some((r, c, cost));
                        if cost == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        pivots += 1;
        let prow: Vec<(usize, i64)> = rows[pr].iter().map(|(&c, &v)| (c, v)).collect();
        let pv = rows[pr][&pc];
        let others: Vec<usize> = cols[pc].iter().copied().filter(|&r| r != pr).collect();
        for r in others {
            let f = rows[r][&pc].checked_mul(pv)?;
            for &(c, v) in &prow {
                let old = rows[r].get(&c).copied().unwrap_or(0);
                let new = old.checked_sub(f.checked_mul(v)?)?;
                if new == 0 {
                    rows[r].remove(&c);
                    cols[c].remove(&r);
                } else {
                    rows[r].insert(c, new);
                    cols[c].insert(r);
                }
            }
        }
        for &(c, _) in &prow {
            cols[c].remove(&pr);
        }
        rows[pr].clear();
        alive_row[pr] = false;
        cols[pc].clear();
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !cols[c].is_empty()).collect();
    if live_rows.is_empty() {
        return Some((pivots, vec![]));
    }
    let cidx: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: snf::Mat<BigInt> = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (&c, &v) in &rows[r] {
                row[cidx[&c]] = BigInt::from(v);
            }
            row
        })
        .collect();
    let (rk, divs) = dense_divisors(&dense);
    Some((pivots + rk, divs))
}

/// Chain complex with boundaries[n]: C_n -> C_{n-1} (boundaries[0] is the zero map).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
    /// Homology is determined in degrees below this bound.
    pub determined_below: Option<usize>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    fn boundary(&self, n: usize) -> Option<&SparseMatrix> {
        if n == 0 || n >= self.boundaries.len() {
            None
        } else {
            Some(&self.boundaries[n])
        }
    }

    /// d_{n-1} d_n = 0 for all n.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len())
            .all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// H_n, or None when the truncation leaves it undetermined.
    pub fn homology(&self, n: usize) -> Option<AbGroup> {
        if let Some(b) = self.determined_below {
            if n >= b {
                return None;
            }
        }
        let cn = self.dims.get(n).copied().unwrap_or(0);
        let (rk_out, _) = self
            .boundary(n)
            .map(|m| m.elementary_divisors())
            .unwrap_or((0, vec![]));
        let (rk_in, divs) = self
            .boundary(n + 1)
            .map(|m| m.elementary_divisors())
            .unwrap_or((0, vec![]));
        let rank = cn - rk_out - rk_in;
        let tors: Vec<u64> = divs
            .iter()
            .map(|d| d.abs().to_u64().expect("torsion fits in u64"))
            .collect();
        Some(AbGroup {
            rank,
            torsion: invariant_factors(&tors),
        })
    }

    pub fn all_homology(&self) -> Vec<Option<AbGroup>> {
        let top = match self.determined_below {
            Some(b) => b.min(self.dims.len()),
            None => self.dims.len(),
        };
        let mut divs: Vec<(usize, Vec<BigInt>)> = Vec::new();
        for n in 0..=self.dims.len() {
            divs.push(
                self.boundary(n)
                    .map(|m| m.elementary_divisors())
                    .unwrap_or((0, vec![])),
            );
        }
        (0..top)
            .map(|n| {
                let rank = self.dims[n] - divs[n].0 - divs[n + 1].0;
                let tors: Vec<u64> = divs[n + 1]
                    .1
                    .iter()
                    .map(|d| d.abs().to_u64().unwrap())
                    .collect();
                Some(AbGroup {
                    rank,
                    torsion: invariant_factors(&tors),
                })
            })
            .collect()
    }
}

pub fn chain_complex(x: &SimplicialSet) -> ChainComplex {
    let top = x.dim();
    let dims: Vec<usize> = (0..=top).map(|n| x.count(n)).collect();
    let mut boundaries = vec![SparseMatrix::new(0, dims[0])];
    for n in 1..=top {
        let mut m = SparseMatrix::new(dims[n - 1], dims[n]);
        for (j, s) in x.level(n).iter().enumerate() {
            for (i, f) in s.faces.iter().enumerate() {
                if !f.is_degenerate() {
                    m.add(f.nd, j, if i % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex {
        dims,
        boundaries,
        determined_below: x.truncation(),
    }
}

pub fn homology(x: &SimplicialSet, n: usize) -> Option<AbGroup> {
    chain_complex(x).homology(n)
}

/// Connected and reduced homology vanishes in every determined degree up to dim(X).
pub fn is_contractible_proxy(x: &SimplicialSet) -> bool {
    let h = chain_complex(x).all_homology();
    h.iter().enumerate().all(|(n, g)| match g {
        Some(g) => {
            if n == 0 {
                *g == AbGroup::free(1)
            } else {
                g.is_trivial()
            }
        }
        None => true,
    })
}

/// Induced chain map C_n(X) -> C_n(Y) (degenerate images go to zero).
pub fn chain_map(f: &SimplicialMap, n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::new(f.target.count(n), f.source.count(n));
    for j in 0..f.source.count(n) {
        let img = f.apply(&Simplex::nondegenerate(n, j));
        if !img.is_degenerate() {
            m.add(img.nd, j, 1);
        }
    }
    m
}

/// Mapping cone of the chain map induced by f, in degrees up to `top`.
pub fn mapping_cone(f: &SimplicialMap, top: usize) -> ChainComplex {
    let x = chain_complex(&f.source);
    let y = chain_complex(&f.target);
    let dx = |n: usize| if n < x.dims.len() { x.dims[n] } else { 0 };
    let dy = |n: usize| if n < y.dims.len() { y.dims[n] } else { 0 };
    let mut dims = Vec::new();
    for n in 0..=top {
        dims.push(if n == 0 { 0 } else { dx(n - 1) } + dy(n));
    }
    let mut boundaries = vec![SparseMatrix::new(0, dims[0])];
    for n in 1..=top {
        // C_n = X_{n-1} + Y_n  ->  C_{n-1} = X_{n-2} + Y_{n-1}
        let mut m = SparseMatrix::new(dims[n - 1], dims[n]);
        let off_rows = if n >= 2 { dx(n - 2) } else { 0 };
        if n >= 2 && n - 1 < x.boundaries.len() {
            for (&(r, c), &v) in &x.boundaries[n - 1].entries {
                m.add(r, c, -v);
            }
        }
        if dx(n - 1) > 0 {
            for (&(r, c), &v) in &chain_map(f, n - 1).entries {
                m.add(off_rows + r, c, v);
            }
        }
        if n < y.boundaries.len() {
            for (&(r, c), &v) in &y.boundaries[n].entries {
                m.add(off_rows + r, dx(n - 1) + c, v);
            }
        }
        boundaries.push(m);
    }
    let bound = match (x.determined_below, y.determined_below) {
        (Some(a), Some(b)) => Some((a + 1).min(b)),
        (Some(a), None) => Some(a + 1),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    };
    ChainComplex {
        dims,
        boundaries,
        determined_below: bound.map(|b| b.min(top)),
    }
}

/// True when the cone has zero homology in degrees 0..=top_degree.
pub fn cone_acyclic_through(f: &SimplicialMap, top_degree: usize) -> bool {
    let cone = mapping_cone(f, top_degree + 1);
    (0..=top_degree).all(|n| cone.homology(n).map(|g| g.is_trivial()).unwrap_or(false))
}

/// f induces a bijection on components and an isomorphism on H_1.
///
/// H_0 and H_1 of the cone vanish exactly when f_* is onto in degree 1 and
/// bijective in degree 0; an onto endomorphism-type map between isomorphic
/// finitely generated abelian groups is an isomorphism.
pub fn iso_on_pi0_and_h1(f: &SimplicialMap) -> bool {
    let hx = homology(&f.source, 1);
    let hy = homology(&f.target, 1);
    match (hx, hy) {
        (Some(a), Some(b)) if a == b => cone_acyclic_through(f, 1),
        _ => false,
    }
}

/// Number of connected components.
pub fn components(x: &SimplicialSet) -> usize {
    chain_complex(x).homology(0).map(|g| g.rank).unwrap_or(0)
}
