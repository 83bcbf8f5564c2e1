//! The factorizing Ex functor on finite simplicial sets, truncated at a chosen level.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::simplicial::{hom_enumerate, NdSimplex, Simplex, SimplicialMap, SimplicialSet};
use crate::subdivision::{collapse_to_simplex, fsd, fsd_codegeneracy, fsd_coface, FsdObject};

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Nerve of fsd[m], shared.
pub fn fsd_nerve(m: usize) -> Result<Arc<SimplicialSet>> {
    Ok(Arc::new(SimplicialSet::nerve(&fsd(m)?.poset)))
}

/// All maps nerve(fsd[m]) -> X.
pub fn fex_level(x: &Arc<SimplicialSet>, m: usize, budget: u64) -> Result<Vec<SimplicialMap>> {
    hom_enumerate(&fsd_nerve(m)?, x, budget)
}

/// fEx X up to level m_max, with the maps behind each simplex kept for reuse.
pub struct FexTruncated {
    pub m_max: usize,
    pub target: Arc<SimplicialSet>,
    /// levels[m] = all maps fsd[m] -> X (degenerate ones included)
    pub maps: Vec<Vec<SimplicialMap>>,
    index: Vec<HashMap<Vec<Vec<Simplex>>, usize>>,
    /// position of each map as a simplex of `set`
    pub repr: Vec<Vec<Simplex>>,
    pub set: Arc<SimplicialSet>,
}

fn key(f: &SimplicialMap) -> Vec<Vec<Simplex>> {
    f.images.clone()
}

impl FexTruncated {
    pub fn level_size(&self, m: usize) -> usize {
        self.maps[m].len()
    }

    pub fn lookup(&self, m: usize, f: &SimplicialMap) -> Option<usize> {
        self.index[m].get(&key(f)).copied()
    }

    /// Simplex of fEx X represented by a map fsd[m] -> X.
    pub fn simplex_of(&self, m: usize, f: &SimplicialMap) -> Option<Simplex> {
        self.lookup(m, f).map(|i| self.repr[m][i].clone())
    }
}

/// fEx X truncated at m_max; faces and degeneracies are precomposition with cofaces and codegeneracies.
pub fn fex_truncated(x: &Arc<SimplicialSet>, m_max: usize, budget: u64) -> Result<FexTruncated> {
    let mut maps = Vec::new();
    let mut index = Vec::new();
    for m in 0..=m_max {
        let l = fex_level(x, m, budget)?;
        index.push(
            l.iter()
                .enumerate()
                .map(|(i, f)| (key(f), i))
                .collect::<HashMap<_, _>>(),
        );
        maps.push(l);
    }
    let nerves: Vec<Arc<SimplicialSet>> = (0..=m_max + 1).map(fsd_nerve).collect::<Result<_>>()?;
    let cof = |m: usize, i: usize| -> Result<SimplicialMap> {
        Ok(SimplicialMap::nerve_of(
            &fsd_coface(m, i)?,
            nerves[m - 1].clone(),
            nerves[m].clone(),
        ))
    };
    let codeg = |m: usize, j: usize| -> Result<SimplicialMap> {
        Ok(SimplicialMap::nerve_of(
            &fsd_codegeneracy(m, j)?,
            nerves[m].clone(),
            nerves[m - 1].clone(),
        ))
    };
    // face tables: faces[m][f][i] = index of f . delta_i in level m-1
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for m in 1..=m_max {
        let ds: Vec<SimplicialMap> = (0..=m).map(|i| cof(m, i)).collect::<Result<_>>()?;
        let mut t = Vec::with_capacity(maps[m].len());
        for f in &maps[m] {
            let mut row = Vec::with_capacity(m + 1);
            for d in &ds {
                let g = f.compose(d);
                row.push(
                    *index[m - 1]
                        .get(&key(&g))
                        .ok_or_else(|| Error::NotAMap("face of an fEx simplex".into()))?,
                );
            }
            t.push(row);
        }
        faces.push(t);
    }
    // degeneracy tables: degs[m][g][j] = index of g . sigma_j in level m+1
    let mut degs: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..m_max {
        let ss: Vec<SimplicialMap> = (0..=m).map(|j| codeg(m + 1, j)).collect::<Result<_>>()?;
        let mut t = Vec::with_capacity(maps[m].len());
        for g in &maps[m] {
            let mut row = Vec::with_capacity(m + 1);
            for s in &ss {
                let h = g.compose(s);
                row.push(
                    *index[m + 1]
                        .get(&key(&h))
                        .ok_or_else(|| Error::NotAMap("degeneracy of an fEx simplex".into()))?,
                );
            }
            t.push(row);
        }
        degs.push(t);
    }
    // Eilenberg-Zilber normal forms
    let mut repr: Vec<Vec<Simplex>> = Vec::new();
    let mut levels: Vec<Vec<NdSimplex>> = Vec::new();
    for m in 0..=m_max {
        let mut r: Vec<Option<Simplex>> = vec![None; maps[m].len()];
        let mut lev = Vec::new();
        if m > 0 {
            for (g, row) in degs[m - 1].iter().enumerate() {
                for (j, &f) in row.iter().enumerate() {
                    if r[f].is_none() {
                        let base = &repr[m - 1][g];
                        let surj: Vec<u8> = (0..=m)
                            .map(|p| base.surj[if p <= j { p } else { p - 1 }])
                            .collect();
                        r[f] = Some(Simplex {
                            nd_dim: base.nd_dim,
                            nd: base.nd,
                            surj,
                        });
                    }
                }
            }
        }
        for (f, slot) in r.iter_mut().enumerate() {
            if slot.is_none() {
                let nd = lev.len();
                let face_list = if m == 0 {
                    Vec::new()
                } else {
                    faces[m][f]
                        .iter()
                        .map(|&g| repr[m - 1][g].clone())
                        .collect()
                };
                lev.push(NdSimplex {
                    label: format!("f{m}_{f}"),
                    faces: face_list,
                });
                *slot = Some(Simplex::nondegenerate(m, nd));
            }
        }
        repr.push(r.into_iter().map(|s| s.unwrap()).collect());
        levels.push(lev);
    }
    let set = Arc::new(SimplicialSet::new(levels, Some(m_max)));
    Ok(FexTruncated {
        m_max,
        target: x.clone(),
        maps,
        index,
        repr,
        set,
    })
}

/// The m-simplex x of X as a map nerve(fsd[m]) -> X through v_m after ell_m.
pub fn unit_image(
    x: &Arc<SimplicialSet>,
    s: &Simplex,
    nerve_m: &Arc<SimplicialSet>,
) -> Result<SimplicialMap> {
    let m = s.dim();
    let c = collapse_to_simplex(m)?;
    let p: &Poset = &c.source;
    let mut images = Vec::new();
    for d in 0..nerve_m.counts().len() {
        let mut lev = Vec::new();
        for nds in nerve_m.level(d) {
            let chain = SimplicialSet::nerve_chain(p, nds);
            let alpha: Vec<usize> = chain.iter().map(|&e| c.apply(e)).collect();
            lev.push(x.apply_operator(s, &alpha));
        }
        images.push(lev);
    }
    Ok(SimplicialMap {
        source: nerve_m.clone(),
        target: x.clone(),
        images,
    })
}

/// The unit X -> fEx X on the m_max-skeleton of X.
pub fn unit(x: &Arc<SimplicialSet>, fex: &FexTruncated) -> Result<SimplicialMap> {
    let src = Arc::new(x.truncate(fex.m_max));
    let mut images = Vec::new();
    for m in 0..=fex.m_max.min(x.dim()) {
        let nerve_m = fsd_nerve(m)?;
        let mut lev = Vec::new();
        for i in 0..x.count(m) {
            let f = unit_image(x, &Simplex::nondegenerate(m, i), &nerve_m)?;
            lev.push(
                fex.simplex_of(m, &f)
                    .ok_or_else(|| Error::NotAMap("unit image".into()))?,
            );
        }
        images.push(lev);
    }
    while images.len() < src.counts().len() {
        images.push(Vec::new());
    }
    Ok(SimplicialMap {
        source: src,
        target: fex.set.clone(),
        images,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub lhs: usize,
    pub rhs: usize,
    pub bijective: bool,
}

/// Compares maps nerve(fsd K) -> Y with maps K -> fEx Y for K spanned by faces of the m-simplex.
pub fn check_adjunction(
    m: usize,
    faces: &[Vec<usize>],
    y: &Arc<SimplicialSet>,
    budget: u64,
) -> Result<AdjunctionReport> {
    let full = faces.iter().any(|f| f.len() == m + 1);
    let k = Arc::new(if full {
        SimplicialSet::standard_simplex(m)
    } else {
        SimplicialSet::simplex_subcomplex(m, faces)?
    });
    let kdim = k.dim();
    let fsd_k: Poset = if full {
        (*fsd(m)?.poset).clone()
    } else {
        crate::subdivision::fsd_subcomplex(m, faces)?
    };
    let fsd_k_nerve = Arc::new(SimplicialSet::nerve(&fsd_k));
    let lhs = hom_enumerate(&fsd_k_nerve, y, budget)?;
    let fex = fex_truncated(y, kdim, budget)?;
    let rhs = hom_enumerate(&k, &fex.set, budget)?;
    // glue each g: K -> fEx Y to a map on nerve(fsd K) through the top simplices of K
    let mut glued: Vec<Vec<Vec<Simplex>>> = Vec::new();
    let tops: Vec<(usize, Vec<usize>)> = (0..=kdim)
        .flat_map(|d| (0..k.count(d)).map(move |i| (d, i)))
        .map(|(d, i)| {
            let verts: Vec<usize> = k
                .nd(d, i)
                .label
                .split('<')
                .map(|v| v.parse().unwrap())
                .collect();
            (d, verts)
        })
        .collect();
    for g in &rhs {
        let mut images = Vec::new();
        for d in 0..fsd_k_nerve.counts().len() {
            let mut lev = Vec::new();
            for s in fsd_k_nerve.level(d) {
                let chain: Vec<FsdObject> = s
                    .label
                    .split('<')
                    .map(FsdObject::parse)
                    .collect::<Result<_>>()?;
                let u = chain.iter().fold(0u32, |a, o| a | o.union());
                // smallest face of K containing the chain
                let (fd, verts) = tops
                    .iter()
                    .filter(|(_, v)| v.iter().fold(0u32, |a, &x| a | (1 << x)) & u == u)
                    .min_by_key(|(d, _)| *d)
                    .ok_or_else(|| Error::HypothesisViolated("chain leaves K".into()))?;
                let idx = k
                    .find(
                        *fd,
                        &verts
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("<"),
                    )
                    .unwrap();
                let simplex = &g.images[*fd][idx];
                let map_idx = fex.repr[*fd]
                    .iter()
                    .position(|r| r == simplex)
                    .ok_or_else(|| Error::NotAMap("fEx simplex".into()))?;
                let f = &fex.maps[*fd][map_idx];
                // pull the chain back into fsd[fd] through the face inclusion
                let local: Vec<String> = chain
                    .iter()
                    .map(|o| restrict_to_face(o, verts).label())
                    .collect();
                let lf = fsd_nerve(*fd)?;
                let li = lf
                    .find(d, &local.join("<"))
                    .ok_or_else(|| Error::UnknownLabel(local.join("<")))?;
                lev.push(f.images[d][li].clone());
            }
            images.push(lev);
        }
        glued.push(images);
    }
    let mut sorted = glued.clone();
    sorted.sort();
    sorted.dedup();
    let lhs_keys: std::collections::HashSet<Vec<Vec<Simplex>>> =
        lhs.iter().map(|f| f.images.clone()).collect();
    let bijective = sorted.len() == glued.len()
        && lhs.len() == rhs.len()
        && glued.iter().all(|g| lhs_keys.contains(g));
    Ok(AdjunctionReport {
        lhs: lhs.len(),
        rhs: rhs.len(),
        bijective,
    })
}

/// Re-index an object supported on the vertex list `verts` as an object of fsd[|verts|-1].
fn restrict_to_face(o: &FsdObject, verts: &[usize]) -> FsdObject {
    FsdObject(
        o.0.iter()
            .map(|&c| {
                verts.iter().enumerate().fold(0u32, |a, (i, &v)| {
                    if c & (1 << v) != 0 {
                        a | (1 << i)
                    } else {
                        a
                    }
                })
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct KanReport {
    pub dim: usize,
    pub horns_checked: usize,
    pub unfilled: Vec<String>,
}

impl KanReport {
    pub fn ok(&self) -> bool {
        self.unfilled.is_empty()
    }
}

/// Exhaustive horn filling check for horns of dimension 2..=dim.
pub fn check_kan(x: &Arc<SimplicialSet>, dim: usize, budget: u64) -> Result<KanReport> {
    if x.known_dim() < dim {
        return Err(Error::ShapeMismatch(format!(
            "simplices known only up to dimension {}",
            x.known_dim()
        )));
    }
    let mut rep = KanReport {
        dim,
        ..Default::default()
    };
    for m in 1..=dim {
        let tops = x.all_simplices(m);
        for k in 0..=m {
            let horn = Arc::new(SimplicialSet::horn(m, k)?);
            let face_idx: Vec<(usize, usize)> = (0..=m)
                .filter(|&i| i != k)
                .map(|i| {
                    let l = (0..=m)
                        .filter(|&v| v != i)
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("<");
                    (i, horn.find(m - 1, &l).unwrap())
                })
                .collect();
            let fillable: std::collections::HashSet<Vec<Simplex>> = tops
                .iter()
                .map(|s| face_idx.iter().map(|&(i, _)| x.face(s, i)).collect())
                .collect();
            for h in hom_enumerate(&horn, x, budget)? {
                rep.horns_checked += 1;
                let key: Vec<Simplex> = face_idx
                    .iter()
                    .map(|&(_, j)| h.images[m - 1][j].clone())
                    .collect();
                if !fillable.contains(&key) {
                    let desc: Vec<String> = key.iter().map(|s| x.label_of(s)).collect();
                    rep.unfilled
                        .push(format!("Λ^{k}[{m}]: {}", desc.join(", ")));
                }
            }
        }
    }
    Ok(rep)
}
