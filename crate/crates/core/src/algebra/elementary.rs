//! Elementary bisets and the pair idempotents `e_(K,κ)`.

use std::sync::Arc;

use super::element::AlgebraElement;
use super::space::{LabelId, Space};
use crate::character::{Character, PairTag};
use crate::error::{precondition, Result};
use crate::group::{Elem, Group, GroupMap, Section, Subgroup};
use crate::phase::Phase;
use crate::scalar::Scalar;

/// The one-term element on `{(a, b)}` with trivial character in `B(G, H)`.
pub fn graph<C: Scalar>(g: &Arc<Group>, h: &Arc<Group>, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> AlgebraElement<C> {
    let space = Space::get(g, h);
    let codes: Vec<Elem> = pairs.into_iter().map(|(a, b)| space.code(a, b)).collect();
    let id = space.intern_trivial(codes);
    AlgebraElement::basis(space, id)
}

/// `[(U, υ)]` for a character on a subgroup of the product group `G × H`.
pub fn transitive<C: Scalar>(g: &Arc<Group>, h: &Arc<Group>, chi: &Character) -> Result<AlgebraElement<C>> {
    let space = Space::get(g, h);
    if chi.domain().parent() != space.product_group()?.id() {
        return precondition("pair does not live in the product group");
    }
    let id = space.intern_character(chi);
    Ok(AlgebraElement::basis(space, id))
}

/// `[Δ(G), 1]`, the identity of `B(G, G)`.
pub fn identity<C: Scalar>(g: &Arc<Group>) -> AlgebraElement<C> {
    graph(g, g, g.elements().map(|x| (x, x)))
}

/// `Ind_H^G ∈ B(G, H)`.
pub fn ind<C: Scalar>(g: &Arc<Group>, h: &Subgroup) -> Result<AlgebraElement<C>> {
    if h.parent() != g.id() {
        return precondition("subgroup of a different group");
    }
    let (hg, iota) = g.subgroup_as_group(h, format!("{}-sub{}", g.name(), h.order()));
    Ok(graph(g, &hg, hg.elements().map(|x| (iota.apply(x), x))))
}

/// `Res_H^G ∈ B(H, G)`.
pub fn res<C: Scalar>(g: &Arc<Group>, h: &Subgroup) -> Result<AlgebraElement<C>> {
    Ok(ind::<C>(g, h)?.opposite())
}

/// `Inf_{G/N}^G ∈ B(G, G/N)`.
pub fn inf<C: Scalar>(g: &Arc<Group>, n: &Subgroup) -> Result<AlgebraElement<C>> {
    if n.parent() != g.id() {
        return precondition("subgroup of a different group");
    }
    let (q, pi) = g.quotient(n, format!("{}/{}", g.name(), n.order()))?;
    Ok(graph(g, &q, g.elements().map(|x| (x, pi.apply(x)))))
}

/// `Def_{G/N}^G ∈ B(G/N, G)`.
pub fn def<C: Scalar>(g: &Arc<Group>, n: &Subgroup) -> Result<AlgebraElement<C>> {
    Ok(inf::<C>(g, n)?.opposite())
}

/// `Iso(f) ∈ B(dst, src)` for an isomorphism `f: src → dst`.
pub fn iso<C: Scalar>(src: &Arc<Group>, dst: &Arc<Group>, f: &GroupMap) -> Result<AlgebraElement<C>> {
    if f.src() != src.id() || f.dst() != dst.id() || !f.is_injective() || !f.is_surjective() {
        return precondition("Iso needs an isomorphism between the given groups");
    }
    Ok(graph(dst, src, src.elements().map(|x| (f.apply(x), x))))
}

/// `Iso(c_x)` for the inner automorphism `y ↦ x y x⁻¹`.
pub fn conj_iso<C: Scalar>(g: &Arc<Group>, x: Elem) -> AlgebraElement<C> {
    graph(g, g, g.elements().map(|y| (g.conj(x, y), y)))
}

/// `Indinf_{T/S}^G ∈ B(G, T/S)` on `{(t, tS)}`.
pub fn indinf<C: Scalar>(g: &Arc<Group>, sec: &Section) -> Result<AlgebraElement<C>> {
    let (q, pi) = sec.quotient(g)?;
    Ok(graph(g, &q, sec.t.elems().iter().map(|&t| (t, pi[t as usize]))))
}

/// `Defres_{T/S}^G ∈ B(T/S, G)`.
pub fn defres<C: Scalar>(g: &Arc<Group>, sec: &Section) -> Result<AlgebraElement<C>> {
    Ok(indinf::<C>(g, sec)?.opposite())
}

/// Codes and values of `(Δ_K(G), φ_κ)`, `φ_κ(a, b) = κ(b⁻¹a)`.
pub(crate) fn delta_pair(space: &Space, g: &Group, tag: &PairTag) -> (Vec<Elem>, Vec<Phase>) {
    let mut pairs: Vec<(Elem, Phase)> = Vec::with_capacity(g.order() * tag.k.order());
    for b in g.elements() {
        for (&k, &v) in tag.k.elems().iter().zip(tag.kappa.values()) {
            pairs.push((space.code(g.mul(b, k), b), v));
        }
    }
    pairs.sort_unstable_by_key(|p| p.0);
    pairs.into_iter().unzip()
}

/// Label of `e_(K,κ)` in `B(G, G)`.
pub fn e_pair_label(g: &Arc<Group>, tag: &PairTag) -> Result<(Arc<Space>, LabelId)> {
    PairTag::new(g, tag.k.clone(), tag.kappa.clone())?;
    let space = Space::get(g, g);
    let (e, v) = delta_pair(&space, g, tag);
    let id = space.intern(e, v);
    Ok((space, id))
}

/// `e_(K,κ) = [Δ_K(G), φ_κ]`.
pub fn e_pair<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    let (space, id) = e_pair_label(g, tag)?;
    Ok(AlgebraElement::basis(space, id))
}

/// The five factors `Ind_P^G, Inf_{P/K̂}^P, X, Def_{Q/L̂}^Q, Res_Q^H` of a basis element.
pub fn canonical_factors<C: Scalar>(space: &Arc<Space>, id: LabelId) -> Result<[AlgebraElement<C>; 5]> {
    let (g, h) = (space.left().clone(), space.right().clone());
    let inv = space.invariants(id);
    let (pg, _) = g.subgroup_as_group(&inv.p1, format!("{}-sub{}", g.name(), inv.p1.order()));
    let (qg, _) = h.subgroup_as_group(&inv.p2, format!("{}-sub{}", h.name(), inv.p2.order()));
    let ppos = inv.p1.position_map(g.order());
    let qpos = inv.p2.position_map(h.order());
    let kp = pg.subgroup(&inv.kernel1.elems().iter().map(|&x| ppos[x as usize]).collect::<Vec<_>>())?;
    let lq = qg.subgroup(&inv.kernel2.elems().iter().map(|&x| qpos[x as usize]).collect::<Vec<_>>())?;
    let (pk, pi1) = pg.quotient(&kp, "P/K")?;
    let (ql, pi2) = qg.quotient(&lq, "Q/L")?;
    let xs = Space::get(&pk, &ql);
    let l = space.label(id);
    let mut pairs: Vec<(Elem, Phase)> = l
        .elems()
        .iter()
        .zip(l.values())
        .map(|(&c, &v)| {
            let (a, b) = space.split(c);
            (xs.code(pi1.apply(ppos[a as usize]), pi2.apply(qpos[b as usize])), v)
        })
        .collect();
    pairs.sort_unstable_by_key(|p| p.0);
    pairs.dedup();
    let (e, v): (Vec<Elem>, Vec<Phase>) = pairs.into_iter().unzip();
    let x = AlgebraElement::basis(xs.clone(), xs.intern(e, v));
    Ok([ind(&g, &inv.p1)?, inf(&pg, &kp)?, x, def(&qg, &lq)?, res(&h, &inv.p2)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::Rational;

    type E = AlgebraElement<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn res_ind_on_c2() {
        let c2 = build_group("C2").unwrap();
        let one = c2.trivial();
        let x: E = res(&c2, &one).unwrap().mul(&ind(&c2, &one).unwrap()).unwrap();
        let triv = build_group("1").unwrap();
        assert_eq!(x, identity::<Rational>(&triv).scale(&r(2, 1)));
        let y: E = ind(&c2, &one).unwrap().mul(&res(&c2, &one).unwrap()).unwrap();
        assert_eq!(y.len(), 1);
        assert_eq!(y.space().label(*y.terms().keys().next().unwrap()).order(), 1);
    }

    #[test]
    fn identity_is_neutral() {
        for s in ["C4", "D8", "C2 x C2"] {
            let g = build_group(s).unwrap();
            let id: E = identity(&g);
            let sp = Space::get(&g, &g);
            for &b in sp.basis().unwrap() {
                let x = E::basis(sp.clone(), b);
                assert_eq!(id.mul(&x).unwrap(), x);
                assert_eq!(x.mul(&id).unwrap(), x);
            }
        }
    }

    #[test]
    fn pair_multiplication_rule() {
        let c4 = build_group("C4").unwrap();
        let c2 = c4.closure(&[2]);
        let tags: Vec<PairTag> = crate::character::hom_group(&c4, &c2)
            .iter()
            .map(|k| PairTag::new(&c4, c2.clone(), k.clone()).unwrap())
            .collect();
        let (triv, sigma) = (&tags[0], &tags[1]);
        let e1: E = e_pair(&c4, triv).unwrap();
        let es: E = e_pair(&c4, sigma).unwrap();
        assert!(es.mul(&e1).unwrap().is_zero());
        assert_eq!(es.mul(&es).unwrap(), es);
        assert_eq!(e1.mul(&e1).unwrap(), e1);
        let e0: E = e_pair(&c4, &PairTag::trivial(&c4)).unwrap();
        assert_eq!(e0, identity(&c4));
        assert_eq!(e0.mul(&es).unwrap(), es);
    }

    #[test]
    fn inflation_and_defres() {
        let d8 = build_group("D8").unwrap();
        let z = d8.center();
        let x: E = inf(&d8, &z).unwrap();
        assert_eq!(x.space().label(*x.terms().keys().next().unwrap()).order(), 8);
        let t = d8
            .lattice()
            .unwrap()
            .subgroups()
            .iter()
            .find(|s| s.order() == 4 && !d8.subgroup_as_group(s, "T").0.is_cyclic())
            .unwrap()
            .clone();
        let tg = d8.subgroup_as_group(&t, "T").0;
        let zt = tg.subgroup(&z.elems().iter().map(|&e| t.position_map(8)[e as usize]).collect::<Vec<_>>()).unwrap();
        let sec = Section::new(&d8, t.clone(), z.clone()).unwrap();
        let two: E = def(&tg, &zt).unwrap().mul(&res(&d8, &t).unwrap()).unwrap();
        let one: E = defres(&d8, &sec).unwrap();
        assert_eq!(two.dst().id(), one.dst().id());
        assert_eq!(two, one);
    }

    #[test]
    fn opposite_swaps_ind_and_res() {
        let q8 = build_group("Q8").unwrap();
        let z = q8.center();
        let i: E = ind(&q8, &z).unwrap();
        assert_eq!(i.opposite(), res(&q8, &z).unwrap());
        assert_eq!(i.opposite().opposite(), i);
    }

    #[test]
    fn canonical_decomposition_recomposes() {
        for s in ["C4", "C2 x C2", "D8"] {
            let g = build_group(s).unwrap();
            let sp = Space::get(&g, &g);
            for &b in sp.basis().unwrap() {
                let f = canonical_factors::<Rational>(&sp, b).unwrap();
                let x = f[0].mul(&f[1]).unwrap().mul(&f[2]).unwrap().mul(&f[3]).unwrap().mul(&f[4]).unwrap();
                assert_eq!(x, E::basis(sp.clone(), b), "{s}");
            }
        }
    }

    #[test]
    fn conjugation_iso_is_inner() {
        let d8 = build_group("D8").unwrap();
        for x in d8.elements() {
            assert_eq!(conj_iso::<Rational>(&d8, x), identity(&d8));
        }
    }
}
