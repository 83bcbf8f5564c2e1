//! E-extensions over finite modules: realization, morphisms, and witnesses for ET3 and ET4.

use crate::error::{Error, Result};
use crate::extcat::pi0::ExtClass;
use crate::extcat::resolution::{cocycle_of_extension, realize_class, Ext1Cache};
use crate::extcat::NExtension;
use crate::modcat::{
    biproduct, cokernel, factor_through_epi, hom_enumerate, ses_equivalence, ModMorphism, Module,
    ShortExact,
};

/// An element of Ext^1(B, A), in the coordinates of the resolution group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EExtension {
    pub a: Module,
    pub b: Module,
    pub class: Vec<i64>,
}

impl EExtension {
    pub fn new(ext: &mut Ext1Cache, a: &Module, b: &Module, class: Vec<i64>) -> Result<EExtension> {
        let g = ext.station(b, a)?;
        if class.len() != g.g.group.rank() {
            return Err(Error::ShapeMismatch(format!(
                "class has {} coordinates, Ext^1 has {}",
                class.len(),
                g.g.group.rank()
            )));
        }
        Ok(EExtension {
            a: a.clone(),
            b: b.clone(),
            class: g.g.group.reduce(&class),
        })
    }

    pub fn zero(ext: &mut Ext1Cache, a: &Module, b: &Module) -> Result<EExtension> {
        let r = ext.station(b, a)?.g.group.rank();
        EExtension::new(ext, a, b, vec![0; r])
    }

    pub fn of_ses(ext: &mut Ext1Cache, s: &ShortExact) -> Result<EExtension> {
        let g = ext.station(s.b(), s.a())?;
        let class = cocycle_of_extension(&NExtension::from_ses(s), &g.g)?;
        Ok(EExtension {
            a: s.a().clone(),
            b: s.b().clone(),
            class,
        })
    }

    pub fn of_pi0(c: &ExtClass) -> Result<EExtension> {
        if c.n != 1 {
            return Err(Error::ShapeMismatch("E-extensions live at n = 1".into()));
        }
        Ok(EExtension {
            a: c.a.clone(),
            b: c.b.clone(),
            class: c.cocycle.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.class.iter().all(|&x| x == 0)
    }
}

/// Short exact sequence up to isomorphism of the middle term over both legs.
#[derive(Clone, Debug)]
pub struct SeqClass {
    pub rep: ShortExact,
}

impl SeqClass {
    pub fn equivalent(&self, other: &SeqClass) -> Result<bool> {
        Ok(ses_equivalence(&self.rep, &other.rep)?.is_some())
    }
}

pub fn realize(ext: &mut Ext1Cache, xi: &EExtension) -> Result<SeqClass> {
    let g = ext.station(&xi.b, &xi.a)?;
    Ok(SeqClass {
        rep: realize_class(&g.g, &xi.class)?,
    })
}

/// a_* xi = b^* xi' in Ext^1(B, A') for a: A -> A', b: B -> B'.
pub fn morphism_check(
    ext: &mut Ext1Cache,
    a: &ModMorphism,
    b: &ModMorphism,
    xi: &EExtension,
    xi2: &EExtension,
) -> Result<bool> {
    if a.source != xi.a || a.target != xi2.a || b.source != xi.b || b.target != xi2.b {
        return Err(Error::ShapeMismatch(
            "(a, b) does not run between the end terms".into(),
        ));
    }
    let left = ext.push(&xi.b, a)?.apply(&xi.class);
    let right = ext.pull(b, &xi2.a)?.apply(&xi2.class);
    Ok(left == right)
}

/// Some middle map completing the ladder between two realizations, by exhaustive search.
pub fn ladder_middle(
    s: &ShortExact,
    s2: &ShortExact,
    a: &ModMorphism,
    b: &ModMorphism,
    budget: u64,
) -> Result<Option<ModMorphism>> {
    for e in hom_enumerate(s.e(), s2.e(), budget)? {
        if e.compose(&s.i)? == s2.i.compose(a)? && s2.p.compose(&e)? == b.compose(&s.p)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// ET3: given a square (a, e) from s to s2, a map c of the third terms making (a, c) a morphism.
pub fn et3_witness(
    ext: &mut Ext1Cache,
    s: &ShortExact,
    s2: &ShortExact,
    a: &ModMorphism,
    e: &ModMorphism,
    budget: u64,
) -> Result<Option<ModMorphism>> {
    if e.compose(&s.i)? != s2.i.compose(a)? {
        return Err(Error::HypothesisViolated(
            "the square on the first two terms does not commute".into(),
        ));
    }
    let (x, y) = (EExtension::of_ses(ext, s)?, EExtension::of_ses(ext, s2)?);
    let target = s2.p.compose(e)?;
    for c in hom_enumerate(s.b(), s2.b(), budget)? {
        if c.compose(&s.p)? == target && morphism_check(ext, a, &c, &x, &y)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The octahedral diagram built from A -f-> B -f'-> D and B -g-> C -g'-> F.
#[derive(Clone, Debug)]
pub struct Et4Witness {
    /// A -gf-> C -h'-> E
    pub third: ShortExact,
    /// D -d-> E -e-> F
    pub bottom: ShortExact,
    pub xi3: EExtension,
    pub commutes: bool,
    /// D -> E -> F realizes f'_* xi2
    pub et4_1: bool,
    /// d^* xi3 = xi1
    pub et4_2: bool,
    /// f_* xi3 = e^* xi2
    pub et4_3: bool,
}

impl Et4Witness {
    pub fn ok(&self) -> bool {
        self.commutes && self.et4_1 && self.et4_2 && self.et4_3
    }

    pub fn failing(&self) -> Vec<&'static str> {
        [
            (self.commutes, "diagram"),
            (self.et4_1, "ET4.1"),
            (self.et4_2, "ET4.2"),
            (self.et4_3, "ET4.3"),
        ]
        .into_iter()
        .filter(|p| !p.0)
        .map(|p| p.1)
        .collect()
    }
}

pub fn et4_witness(ext: &mut Ext1Cache, s1: &ShortExact, s2: &ShortExact) -> Result<Et4Witness> {
    if s1.e() != s2.a() {
        return Err(Error::EndpointMismatch(
            "the second sequence must start at the middle of the first".into(),
        ));
    }
    let (f, f2) = (&s1.i, &s1.p);
    let (g, g2) = (&s2.i, &s2.p);
    let h = g.compose(f)?;
    let (_, h2) = cokernel(&h)?;
    let third = ShortExact::new(h.clone(), h2.clone())?;
    // d: D -> E from h' g = d f', e: E -> F from g' = e h'
    let d = factor_through_epi(f2, &h2.compose(g)?)?;
    let e = factor_through_epi(&h2, g2)?;
    let bottom = ShortExact::new(d.clone(), e.clone())
        .map_err(|err| Error::NoWitness(format!("D -> E -> F is not exact: {err}")))?;
    let commutes = d.compose(f2)? == h2.compose(g)? && e.compose(&h2)? == *g2;
    let xi1 = EExtension::of_ses(ext, s1)?;
    let xi2 = EExtension::of_ses(ext, s2)?;
    let xi3 = EExtension::of_ses(ext, &third)?;
    let bottom_class = EExtension::of_ses(ext, &bottom)?;
    let et4_1 = bottom_class.class == ext.push(&xi2.b, f2)?.apply(&xi2.class);
    let et4_2 = ext.pull(&d, &xi3.a)?.apply(&xi3.class) == xi1.class;
    let et4_3 = ext.push(&xi3.b, f)?.apply(&xi3.class) == ext.pull(&e, &xi2.a)?.apply(&xi2.class);
    Ok(Et4Witness {
        third,
        bottom,
        xi3,
        commutes,
        et4_1,
        et4_2,
        et4_3,
    })
}

/// The ET4 witness, as an error naming the failing conditions when one does not hold.
pub fn et4_checked(ext: &mut Ext1Cache, s1: &ShortExact, s2: &ShortExact) -> Result<Et4Witness> {
    let w = et4_witness(ext, s1, s2)?;
    if !w.ok() {
        return Err(Error::NoWitness(format!(
            "failing: {}",
            w.failing().join(", ")
        )));
    }
    Ok(w)
}

/// The class of xi1 (+) xi2 in Ext^1(B1 + B2, A1 + A2), built from the summand inclusions and projections.
pub fn direct_sum(ext: &mut Ext1Cache, x: &EExtension, y: &EExtension) -> Result<EExtension> {
    let sa = biproduct(&[&x.a, &y.a])?;
    let sb = biproduct(&[&x.b, &y.b])?;
    let mut total = EExtension::zero(ext, &sa.sum, &sb.sum)?;
    for (k, xi) in [x, y].into_iter().enumerate() {
        let pushed = ext.push(&xi.b, &sa.inj[k])?.apply(&xi.class);
        let part = ext.pull(&sb.proj[k], &sa.sum)?.apply(&pushed);
        total.class = ext
            .station(&sb.sum, &sa.sum)?
            .g
            .group
            .add(&total.class, &part);
    }
    Ok(total)
}

fn ses_sum(s: &ShortExact, t: &ShortExact) -> Result<ShortExact> {
    ShortExact::new(
        ModMorphism::diag(&[&s.i, &t.i])?,
        ModMorphism::diag(&[&s.p, &t.p])?,
    )
}

/// realize(0) is the split sequence, and realize(x (+) y) = realize(x) (+) realize(y).
#[derive(Clone, Debug, Default)]
pub struct AdditivityReport {
    pub zero_is_split: bool,
    pub sum_compatible: bool,
}

impl AdditivityReport {
    pub fn ok(&self) -> bool {
        self.zero_is_split && self.sum_compatible
    }
}

pub fn additivity_check(
    ext: &mut Ext1Cache,
    x: &EExtension,
    y: &EExtension,
) -> Result<AdditivityReport> {
    let zero = EExtension::zero(ext, &x.a, &x.b)?;
    let split = SeqClass {
        rep: ShortExact::split(&x.a, &x.b)?,
    };
    let zero_is_split = realize(ext, &zero)?.equivalent(&split)?;
    let total = direct_sum(ext, x, y)?;
    let sum = realize(ext, &total)?;
    let parts = SeqClass {
        rep: ses_sum(&realize(ext, x)?.rep, &realize(ext, y)?.rep)?,
    };
    Ok(AdditivityReport {
        zero_is_split,
        sum_compatible: sum.equivalent(&parts)?,
    })
}

/// Seeded run of `additivity_check` over sampled pairs; returns (passed, total).
pub fn additivity_samples(
    ring: crate::modcat::Ring,
    samples: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ext = Ext1Cache::default();
    let mut passed = 0;
    for _ in 0..samples {
        let s1 = crate::modcat::sample::ses(&mut rng, ring, 2);
        let s2 = crate::modcat::sample::ses(&mut rng, ring, 2);
        let (x, y) = (
            EExtension::of_ses(&mut ext, &s1)?,
            EExtension::of_ses(&mut ext, &s2)?,
        );
        passed += usize::from(additivity_check(&mut ext, &x, &y)?.ok());
    }
    Ok((passed, samples))
}
