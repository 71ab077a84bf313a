//! Atoric `p`-groups, atoric parts, the block idempotents `c_M^P` and `b_L^P`,
//! central resolutions and the extraspecial-type predicates.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{defres, identity, indinf, AlgebraElement, Space};
use crate::character::{hom_group, out_orbit, PairTag};
use crate::error::{precondition, Error, Result};
use crate::functor::image_rank;
use crate::group::{is_isomorphic, minimal_sections, Group, GroupId, Subgroup};
use crate::idempotents::{epsilon, epsilon_indices, phi_bouc, phi_orbit};
use crate::scalar::Scalar;

/// Largest order on which the direct-factor criterion is evaluated.
pub const DIRECT_FACTOR_MAX_ORDER: usize = 32;

fn require_p_group(p: &Group) -> Result<()> {
    if p.order() > 1 && p.prime_hint().is_none() {
        return precondition(format!("{} is not a p-group", p.name()));
    }
    Ok(())
}

/// The three atoricity criteria evaluated separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atoricity {
    /// No nontrivial elementary abelian direct factor; `None` above [`DIRECT_FACTOR_MAX_ORDER`].
    pub no_elementary_factor: Option<bool>,
    /// Every nontrivial normal subgroup meets `Φ(P)` nontrivially.
    pub normals_meet_frattini: bool,
    /// `Ω₁Z(P) ≤ Φ(P)`.
    pub omega_in_frattini: bool,
}

pub fn atoricity(p: &Group) -> Result<Atoricity> {
    require_p_group(p)?;
    if p.order() == 1 {
        return Ok(Atoricity { no_elementary_factor: Some(true), normals_meet_frattini: true, omega_in_frattini: true });
    }
    let lat = p.lattice()?;
    let phi = p.frattini()?;
    let normals: Vec<&Subgroup> = lat.normal_subgroups().into_iter().map(|i| lat.get(i)).collect();
    let normals_meet_frattini = normals
        .iter()
        .filter(|n| !n.is_trivial())
        .all(|n| !p.intersection(n, &phi).is_trivial());
    let omega = p.omega1_center(None)?;
    let omega_in_frattini = omega.is_subset(&phi);
    let no_elementary_factor = (p.order() <= DIRECT_FACTOR_MAX_ORDER).then(|| {
        // P = N × E with E ≤ Ω₁Z(P) nontrivial
        let central: Vec<&Subgroup> =
            lat.below(&omega).into_iter().map(|i| lat.get(i)).filter(|e| !e.is_trivial()).collect();
        !central.iter().any(|e| {
            normals.iter().any(|n| n.order() * e.order() == p.order() && p.intersection(n, e).is_trivial())
        })
    });
    Ok(Atoricity { no_elementary_factor, normals_meet_frattini, omega_in_frattini })
}

/// Whether `P` is atoric; errors if the criteria disagree.
pub fn is_atoric(p: &Group) -> Result<bool> {
    let a = atoricity(p)?;
    let agree = a.normals_meet_frattini == a.omega_in_frattini
        && a.no_elementary_factor.is_none_or(|b| b == a.omega_in_frattini);
    if !agree {
        return Err(Error::Mismatch(format!("atoricity criteria disagree on {}: {a:?}", p.name())));
    }
    Ok(a.omega_in_frattini)
}

/// `P^@ = P/N` together with the chosen `N`.
#[derive(Clone, Debug)]
pub struct AtoricPart {
    pub quotient: Arc<Group>,
    pub kernel: Subgroup,
}

type PartCache = Mutex<HashMap<GroupId, AtoricPart>>;

fn part_cache() -> &'static PartCache {
    static CACHE: OnceLock<PartCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The atoric part, with `N` the least maximal normal subgroup meeting `Φ(P)` trivially.
pub fn atoric_part(p: &Group) -> Result<AtoricPart> {
    require_p_group(p)?;
    if let Some(a) = part_cache().lock().unwrap().get(&p.id()) {
        return Ok(a.clone());
    }
    let lat = p.lattice()?;
    let phi = p.frattini()?;
    let admissible: Vec<&Subgroup> = lat
        .normal_subgroups()
        .into_iter()
        .map(|i| lat.get(i))
        .filter(|n| p.intersection(n, &phi).is_trivial())
        .collect();
    let mut maximal: Vec<&Subgroup> = admissible
        .iter()
        .filter(|n| !admissible.iter().any(|m| m.order() > n.order() && n.is_subset(m)))
        .copied()
        .collect();
    maximal.sort();
    let kernel = maximal[0].clone();
    let (quotient, _) = p.quotient(&kernel, format!("{}^@", p.name()))?;
    if !is_atoric(&quotient)? {
        return Err(Error::Mismatch(format!("{}/N is not atoric", p.name())));
    }
    for n in &maximal[1..] {
        let (q, _) = p.quotient(n, "P/N")?;
        if is_isomorphic(&q, &quotient).is_none() {
            return Err(Error::Mismatch(format!("maximal choices of N give different quotients of {}", p.name())));
        }
    }
    let part = AtoricPart { quotient, kernel };
    part_cache().lock().unwrap().insert(p.id(), part.clone());
    Ok(part)
}

fn require_atoric(m: &Group) -> Result<()> {
    if !is_atoric(m)? {
        return precondition(format!("{} is not atoric", m.name()));
    }
    Ok(())
}

fn same_class(a: &Group, b: &Group) -> bool {
    a.order() == b.order() && is_isomorphic(a, b).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialTag {
    Cyclic,
    QuasiExtraspecial,
    GeneralizedExtraspecial,
    None,
}

/// The structural subgroups the predicates were evaluated on.
#[derive(Clone, Debug)]
pub struct SpecialEvidence {
    pub center: Subgroup,
    pub frattini: Subgroup,
    pub derived: Subgroup,
}

#[derive(Clone, Debug)]
pub struct SpecialClass {
    pub tag: SpecialTag,
    /// Non-abelian, `Z(P)` cyclic and `Φ(P) ≤ Z(P)`.
    pub quasi_extraspecial: bool,
    /// Non-abelian, `Φ(P) = P′ ≤ Z(P)` of order `p`.
    pub generalized_extraspecial: bool,
    pub evidence: SpecialEvidence,
}

pub fn special_class(p: &Group) -> Result<SpecialClass> {
    require_p_group(p)?;
    let s = p.structural()?;
    let evidence = SpecialEvidence { center: s.center.clone(), frattini: s.frattini.clone(), derived: s.derived.clone() };
    let nonabelian = !p.is_abelian();
    let central_frattini = s.frattini.is_subset(&s.center);
    let (zg, _) = p.subgroup_as_group(&s.center, "Z");
    let quasi = nonabelian && central_frattini && zg.is_cyclic();
    let generalized = nonabelian
        && central_frattini
        && s.frattini == s.derived
        && p.prime_hint().is_some_and(|q| s.derived.order() == q as usize);
    let tag = if p.is_cyclic() {
        SpecialTag::Cyclic
    } else if quasi {
        SpecialTag::QuasiExtraspecial
    } else if generalized {
        SpecialTag::GeneralizedExtraspecial
    } else {
        SpecialTag::None
    };
    Ok(SpecialClass { tag, quasi_extraspecial: quasi, generalized_extraspecial: generalized, evidence })
}

/// One block idempotent together with its atoric label.
#[derive(Clone, Debug)]
pub struct Block<C: Scalar> {
    pub atoric: Arc<Group>,
    pub idempotent: AlgebraElement<C>,
}

fn push_block<C: Scalar>(blocks: &mut Vec<Block<C>>, m: Arc<Group>, x: AlgebraElement<C>) -> Result<()> {
    match blocks.iter_mut().find(|b| same_class(&b.atoric, &m)) {
        Some(b) => b.idempotent = b.idempotent.add(&x)?,
        None => blocks.push(Block { atoric: m, idempotent: x }),
    }
    Ok(())
}

/// All nonzero `c_M^P`, one per isomorphism class of `M`, ordered by `|M|`.
pub fn blocks<C: Scalar>(p: &Arc<Group>) -> Result<Vec<Block<C>>> {
    require_p_group(p)?;
    let idxs = epsilon_indices(p)?;
    let parts = idxs
        .par_iter()
        .map(|idx| {
            let (q, _) = idx.quotient.quotient(&idx.orbit[0].k, "(T/S)/K")?;
            Ok((atoric_part(&q)?.quotient, epsilon::<C>(p, idx)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (m, x) in parts {
        push_block(&mut out, m, x)?;
    }
    out.sort_by_key(|b| b.atoric.order());
    Ok(out)
}

/// `c_M^P`; zero when `M` does not occur.
pub fn c_m<C: Scalar>(p: &Arc<Group>, m: &Group) -> Result<AlgebraElement<C>> {
    require_atoric(m)?;
    let found = blocks::<C>(p)?.into_iter().find(|b| same_class(&b.atoric, m));
    Ok(found.map_or_else(|| AlgebraElement::zero(Space::get(p, p)), |b| b.idempotent))
}

/// All nonzero ordinary block idempotents `b_L^P`, ordered by `|L|`.
pub fn bouc_blocks<C: Scalar>(p: &Arc<Group>) -> Result<Vec<Block<C>>> {
    require_p_group(p)?;
    let sections = minimal_sections(p)?;
    let parts = sections
        .par_iter()
        .map(|ms| {
            let sec = &ms.section;
            let (q, _) = sec.quotient(p)?;
            let ph = phi_bouc::<C>(&q, &q.trivial())?;
            let x = indinf::<C>(p, sec)?.mul(&ph)?.mul(&defres::<C>(p, sec)?)?;
            Ok((atoric_part(&q)?.quotient, x.scale(&C::from_ratio(1, ms.normalizer_index() as i64))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (l, x) in parts {
        push_block(&mut out, l, x)?;
    }
    out.sort_by_key(|b| b.atoric.order());
    Ok(out)
}

/// `b_L^P`; zero when `L` does not occur.
pub fn b_l<C: Scalar>(p: &Arc<Group>, l: &Group) -> Result<AlgebraElement<C>> {
    require_atoric(l)?;
    let found = bouc_blocks::<C>(p)?.into_iter().find(|b| same_class(&b.atoric, l));
    Ok(found.map_or_else(|| AlgebraElement::zero(Space::get(p, p)), |b| b.idempotent))
}

/// `b_L^P · c_M^P`.
pub fn check_restriction_block<C: Scalar>(p: &Arc<Group>, l: &Group, m: &Group) -> Result<AlgebraElement<C>> {
    b_l::<C>(p, l)?.mul(&c_m::<C>(p, m)?)
}

/// `(Q, K, S)` with `K` central cyclic, `K, S ⊴ Q` inside `Φ(Q)` and `K ∩ S = 1`.
#[derive(Clone, Debug)]
pub struct ResolutionWitness {
    pub q: Arc<Group>,
    pub k: Subgroup,
    pub s: Subgroup,
}

#[derive(Clone, Debug)]
pub enum Resolution {
    Found(ResolutionWitness),
    /// Nothing up to this order; not a proof of non-existence.
    NoneInCatalog { bound: usize },
}

impl Resolution {
    pub fn witness(&self) -> Option<&ResolutionWitness> {
        match self {
            Resolution::Found(w) => Some(w),
            Resolution::NoneInCatalog { .. } => None,
        }
    }
}

fn witness_in(q: &Arc<Group>, m: &Group, l: &Group, trivial_s: bool) -> Result<Option<ResolutionWitness>> {
    if q.order() < m.order().max(l.order()) || q.prime_hint() != l.prime_hint().or(m.prime_hint()).or(q.prime_hint()) {
        return Ok(None);
    }
    if !is_atoric(q)? {
        return Ok(None);
    }
    let lat = q.lattice()?;
    let phi = q.frattini()?;
    let z = q.center();
    let inside: Vec<&Subgroup> = lat
        .normal_subgroups()
        .into_iter()
        .map(|i| lat.get(i))
        .filter(|n| n.is_subset(&phi))
        .collect();
    for k in inside.iter().filter(|k| k.is_subset(&z)) {
        if q.order() / k.order() < m.order() || !q.subgroup_as_group(k, "K").0.is_cyclic() {
            continue;
        }
        let (qk, _) = q.quotient(k, "Q/K")?;
        if !same_class(&atoric_part(&qk)?.quotient, m) {
            continue;
        }
        for s in inside.iter().filter(|s| q.intersection(k, s).is_trivial() && (!trivial_s || s.is_trivial())) {
            if q.order() / s.order() < l.order() {
                continue;
            }
            let (qs, _) = q.quotient(s, "Q/S")?;
            if same_class(&atoric_part(&qs)?.quotient, l) {
                return Ok(Some(ResolutionWitness { q: q.clone(), k: (*k).clone(), s: (*s).clone() }));
            }
        }
    }
    Ok(None)
}

/// A central resolution `M ⇝ L` from `catalog`, searched over atoric `Q` in order.
///
/// Witnesses with `S = 1` are preferred: the whole catalog is searched for one before any other is taken.
pub fn central_resolution(m: &Group, l: &Group, catalog: &[Arc<Group>]) -> Result<Resolution> {
    require_atoric(m)?;
    require_atoric(l)?;
    for trivial_s in [true, false] {
        let found = catalog
            .par_iter()
            .map(|q| witness_in(q, m, l, trivial_s))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(r) = found {
            return Ok(Resolution::Found(r?.unwrap()));
        }
    }
    Ok(Resolution::NoneInCatalog { bound: catalog.iter().map(|g| g.order()).max().unwrap_or(1) })
}

/// Order up to which certificates use the full `b_L · c_M` product.
pub const FULL_CERTIFICATE_MAX_ORDER: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `b_L^Q · c_M^Q ≠ 0`.
    Full,
    /// `φ_S · φ_[K,κ] ≠ 0` at `Q` with `κ` faithful.
    Reduced,
}

/// Whether the witness gives a nonzero product at `Q`, and which product was used.
pub fn certify<C: Scalar>(m: &Group, l: &Group, w: &ResolutionWitness) -> Result<(CertificateKind, bool)> {
    let q = &w.q;
    if q.order() <= FULL_CERTIFICATE_MAX_ORDER {
        let x = check_restriction_block::<C>(q, l, m)?;
        return Ok((CertificateKind::Full, !x.is_zero()));
    }
    let kappa = hom_group(q, &w.k)
        .iter()
        .find(|c| c.is_faithful())
        .cloned()
        .ok_or_else(|| Error::Precondition("K has no faithful character".into()))?;
    let orbit = out_orbit(q, &PairTag::new(q, w.k.clone(), kappa)?)?;
    let x = phi_bouc::<C>(q, &w.s)?.mul(&phi_orbit::<C>(q, &orbit)?)?;
    Ok((CertificateKind::Reduced, !x.is_zero()))
}

/// Whether `Σ_M c_M^P` and `Σ_L b_L^P` are both the identity.
pub fn blocks_complete<C: Scalar>(p: &Arc<Group>) -> Result<bool> {
    let id = identity::<C>(p);
    let space = Space::get(p, p);
    let c = blocks::<C>(p)?;
    let b = bouc_blocks::<C>(p)?;
    let sc = AlgebraElement::sum(space.clone(), c.iter().map(|x| &x.idempotent))?;
    let sb = AlgebraElement::sum(space, b.iter().map(|x| &x.idempotent))?;
    Ok(sc == id && sb == id)
}

/// `dim c_M^P · F(P)` for every block of `P`, with `F` the monomial Burnside functor.
pub fn vertex_support<C: Scalar>(p: &Arc<Group>) -> Result<Vec<(Arc<Group>, usize)>> {
    blocks::<C>(p)?.into_iter().map(|b| Ok((b.atoric, image_rank(&b.idempotent)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::group::{build_group, is_subquotient};
    use crate::Rational;

    fn g(s: &str) -> Arc<Group> {
        build_group(s).unwrap()
    }

    #[test]
    fn atoricity_examples() {
        assert!(is_atoric(&g("C4")).unwrap());
        assert!(is_atoric(&g("C9")).unwrap());
        assert!(!is_atoric(&g("C2")).unwrap());
        assert!(!is_atoric(&g("C2 x C4")).unwrap());
        assert!(is_atoric(&g("D8")).unwrap());
        assert!(is_atoric(&g("Q8")).unwrap());
        assert!(is_atoric(&g("1")).unwrap());
        assert!(is_atoric(&g("C6")).is_err());
    }

    #[test]
    fn criteria_agree_on_the_catalog() {
        for p in catalog(32).unwrap() {
            let a = atoricity(&p).unwrap();
            assert_eq!(a.normals_meet_frattini, a.omega_in_frattini, "{}", p.name());
            assert_eq!(a.no_elementary_factor, Some(a.omega_in_frattini), "{}", p.name());
        }
    }

    #[test]
    fn atoric_parts() {
        let v = atoric_part(&g("C2 x C2")).unwrap();
        assert_eq!(v.quotient.order(), 1);
        let p = atoric_part(&g("C2 x C4")).unwrap();
        assert!(same_class(&p.quotient, &g("C4")));
        assert_eq!(p.kernel.order(), 2);
        for s in ["D8", "Q8", "C8"] {
            let a = atoric_part(&g(s)).unwrap();
            assert!(a.kernel.is_trivial());
        }
        for s in ["D8", "Q8"] {
            let x = g(s);
            let (q, _) = x.quotient(&x.center(), "P/Z").unwrap();
            assert_eq!(atoric_part(&q).unwrap().quotient.order(), 1);
        }
    }

    #[test]
    fn atoric_part_is_idempotent_on_the_catalog() {
        for p in catalog(32).unwrap() {
            let a = atoric_part(&p).unwrap();
            let b = atoric_part(&a.quotient).unwrap();
            assert!(b.kernel.is_trivial(), "{}", p.name());
            assert_eq!(is_atoric(&p).unwrap(), a.kernel.is_trivial(), "{}", p.name());
        }
    }

    #[test]
    fn special_classes() {
        let q8 = special_class(&g("Q8")).unwrap();
        assert_eq!(q8.tag, SpecialTag::QuasiExtraspecial);
        assert!(q8.generalized_extraspecial);
        assert_eq!(special_class(&g("D8")).unwrap().tag, SpecialTag::QuasiExtraspecial);
        assert_eq!(special_class(&g("C9")).unwrap().tag, SpecialTag::Cyclic);
        assert_eq!(special_class(&g("C2 x C2")).unwrap().tag, SpecialTag::None);
        let c2d8 = special_class(&g("C2 x D8")).unwrap();
        assert_eq!(c2d8.tag, SpecialTag::GeneralizedExtraspecial);
        assert!(!c2d8.quasi_extraspecial);
    }

    #[test]
    fn blocks_of_small_groups() {
        for s in ["C2", "C4", "C2 x C2", "D8"] {
            let p = g(s);
            assert!(blocks_complete::<Rational>(&p).unwrap(), "{s}");
        }
        let c2 = g("C2");
        let bs = blocks::<Rational>(&c2).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].atoric.order(), 1);
        let d8 = g("D8");
        let orders: Vec<usize> = blocks::<Rational>(&d8).unwrap().iter().map(|b| b.atoric.order()).collect();
        assert_eq!(orders, vec![1, 4, 8]);
        let v = g("C2 x C2");
        let bl = bouc_blocks::<Rational>(&v).unwrap();
        assert_eq!(bl.len(), 1);
        assert_eq!(bl[0].idempotent, identity::<Rational>(&v));
    }

    #[test]
    fn c_m_vanishes_off_subquotients_of_the_atoric_part() {
        let d8 = g("D8");
        for m in ["1", "C4", "C8", "Q8", "D8"] {
            let mg = g(m);
            let x = c_m::<Rational>(&d8, &mg).unwrap();
            assert_eq!(!x.is_zero(), is_subquotient(&mg, &d8).unwrap(), "{m}");
        }
        assert!(c_m::<Rational>(&d8, &g("C2")).is_err());
    }

    #[test]
    fn resolutions() {
        let cat = catalog(16).unwrap();
        let one = g("1");
        let w = central_resolution(&one, &g("Q8"), &cat).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.q.name(), "Q8");
        assert_eq!(w.k, w.q.center());
        assert!(w.s.is_trivial());
        assert_eq!(certify::<Rational>(&one, &g("Q8"), w).unwrap(), (CertificateKind::Full, true));
        let r = central_resolution(&one, &g("C2 x C4"), &cat);
        assert!(r.is_err());
        let d8 = g("D8");
        assert!(central_resolution(&d8, &g("C2 x C2"), &cat).is_err());
        let q8 = g("Q8");
        let w = central_resolution(&q8, &one, &cat).unwrap();
        let w = w.witness().unwrap();
        assert_eq!((w.q.name(), w.k.order(), w.s.order()), ("Q8", 1, 2));
        assert_eq!(certify::<Rational>(&q8, &one, w).unwrap(), (CertificateKind::Full, false));
        let r = central_resolution(&g("C4"), &g("Q8"), &cat).unwrap();
        assert!(matches!(r, Resolution::NoneInCatalog { bound: 16 } | Resolution::Found(_)));
    }

    #[test]
    fn monomial_burnside_vertex_is_trivial() {
        for s in ["C2", "D8", "Q8"] {
            let p = g(s);
            let support = vertex_support::<Rational>(&p).unwrap();
            let rank = crate::functor::module_basis(&p).unwrap().len();
            let total: usize = support.iter().map(|(_, d)| d).sum();
            assert_eq!(total, rank, "{s}");
            for (m, d) in support {
                assert_eq!(d, if m.order() == 1 { rank } else { 0 }, "{s}");
            }
        }
    }

    #[test]
    fn restriction_block_on_q8() {
        let q8 = g("Q8");
        let x = check_restriction_block::<Rational>(&q8, &q8, &g("1")).unwrap();
        assert!(!x.is_zero());
        assert!(check_restriction_block::<Rational>(&g("C4"), &g("C2 x C2"), &g("1")).is_err());
    }
}
