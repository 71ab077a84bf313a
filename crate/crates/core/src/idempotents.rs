//! Idempotent systems of `B_ℚ^{ℂ×}(G, G)`: `ẽ_H^G`, `Y`, `ẽ_(K,κ)`, `f_(K,κ)`, `φ_(K,κ)`
//! and the section idempotents `ε_{T,S,[K,κ]}`.

use std::sync::Arc;

use crate::algebra::{defres, e_pair, graph, ind, indinf, res, AlgebraElement, LabelId, Space};
use crate::character::{out_orbits, pair_poset, Character, PairTag, PosetVariant};
use crate::error::{precondition, Error, Result};
use crate::group::{minimal_sections, Elem, Group, MinimalSection, Subgroup};
use crate::mobius::{mobius_normal, mobius_subgroup};
use crate::scalar::Scalar;

/// `[(Δ(K), 1)]` in `B(G, G)`.
pub fn delta<C: Scalar>(g: &Arc<Group>, k: &Subgroup) -> AlgebraElement<C> {
    graph(g, g, k.elems().iter().map(|&x| (x, x)))
}

/// `ẽ_H^G = (1/|N_G(H)|) Σ_{K ≤ H} |K| μ(K, H) [(Δ(K), 1)]`.
pub fn e_tilde<C: Scalar>(g: &Arc<Group>, h: &Subgroup) -> Result<AlgebraElement<C>> {
    let lat = g.lattice()?;
    let nh = g.normalizer(h).order() as i64;
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for i in lat.below(h) {
        let k = lat.get(i);
        let mu = mobius_subgroup(g, k, h)?;
        if mu != 0 {
            let c = C::from_ratio(k.order() as i64 * mu, nh);
            for (id, x) in delta::<C>(g, k).terms() {
                acc.add_term(*id, x.clone() * c.clone());
            }
        }
    }
    Ok(acc)
}

/// `ẽ_G^G`.
pub fn e_tilde_top<C: Scalar>(g: &Arc<Group>) -> Result<AlgebraElement<C>> {
    e_tilde(g, &g.whole())
}

/// `Y_{U,υ} = ẽ_G^G [U, υ] ẽ_G^G` for a covering label.
pub fn y_element<C: Scalar>(g: &Arc<Group>, id: LabelId) -> Result<AlgebraElement<C>> {
    let space = Space::get(g, g);
    if !space.is_covering(id) {
        return precondition("Y needs a covering pair");
    }
    let e = e_tilde_top::<C>(g)?;
    e.mul(&AlgebraElement::basis(space, id))?.mul(&e)
}

/// Labels of covering pairs of `G × G`, in encoding order.
pub fn covering_basis(g: &Arc<Group>) -> Result<Vec<LabelId>> {
    let space = Space::get(g, g);
    Ok(space.basis()?.iter().copied().filter(|&b| space.is_covering(b)).collect())
}

/// `ẽ_(K,κ) = ẽ_G^G · e_(K,κ)` for `K ≤ Φ(G)`; the other one-sided form is checked.
pub fn e_tilde_pair<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    if !tag.k.is_subset(&g.frattini()?) {
        return precondition("K is not contained in the Frattini subgroup");
    }
    let e = e_tilde_top::<C>(g)?;
    let x = e_pair::<C>(g, tag)?;
    let left = e.mul(&x)?;
    if x.mul(&e)? != left {
        return Err(Error::Mismatch("ẽ·e and e·ẽ differ".into()));
    }
    Ok(left)
}

/// `f_(K,κ) = Σ_{(K′,κ′) ≥ (K,κ)} μ_⊴(K, K′) e_(K′,κ′)`.
pub fn f_pair<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    let poset = pair_poset(g, PosetVariant::All)?;
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for t in poset.tags.iter().filter(|t| tag.leq(t)) {
        let mu = mobius_normal(g, &tag.k, &t.k)?;
        if mu != 0 {
            acc = acc.add(&e_pair::<C>(g, t)?.scale(&C::from_int(mu)))?;
        }
    }
    Ok(acc)
}

fn frattini_tag(g: &Group, tag: &PairTag) -> Result<()> {
    PairTag::new(g, tag.k.clone(), tag.kappa.clone())?;
    if !tag.k.is_subset(&g.frattini()?) {
        return precondition("K is not contained in the Frattini subgroup");
    }
    Ok(())
}

/// `φ_(K,κ) = Σ_{(K,κ) ≤ (L,λ) ∈ 𝓜_Φ} μ_⊴(K, L) ẽ_(L,λ)`.
pub fn phi<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    frattini_tag(g, tag)?;
    let poset = pair_poset(g, PosetVariant::Frattini)?;
    let e = e_tilde_top::<C>(g)?;
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for t in poset.tags.iter().filter(|t| tag.leq(t)) {
        let mu = mobius_normal(g, &tag.k, &t.k)?;
        if mu != 0 {
            acc = acc.add(&e.mul(&e_pair::<C>(g, t)?)?.scale(&C::from_int(mu)))?;
        }
    }
    Ok(acc)
}

/// The `p`-group form of `φ_(K,κ)` for faithful `κ`: a signed sum over `L/K ≤ Ω₁Z(P/K)`.
pub fn phi_fast<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    frattini_tag(g, tag)?;
    let p = match g.prime_hint() {
        Some(p) => p,
        None => return precondition("the fast form needs a p-group"),
    };
    if !tag.kappa.is_faithful() {
        return precondition("the fast form needs a faithful character");
    }
    let (q, pi) = g.quotient(&tag.k, "P/K")?;
    let omega = q.omega1_center(Some(p))?;
    let bound = pi.preimage(g, &omega);
    let poset = pair_poset(g, PosetVariant::Frattini)?;
    let mut sum = AlgebraElement::zero(Space::get(g, g));
    for t in poset.tags.iter().filter(|t| tag.leq(t) && t.k.is_subset(&bound)) {
        let r = match rank_of(t.k.order() / tag.k.order(), p as usize) {
            Some(r) => r,
            None => return precondition("L/K is not a p-group"),
        };
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let coeff = sign * (p as i64).pow(r * r.saturating_sub(1) / 2);
        sum = sum.add(&e_pair::<C>(g, t)?.scale(&C::from_int(coeff)))?;
    }
    e_tilde_top::<C>(g)?.mul(&sum)
}

fn rank_of(mut n: usize, p: usize) -> Option<u32> {
    let mut r = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        r += 1;
    }
    Some(r)
}

/// The Ind/Res expansion of `φ_(K,κ)` over `Φ(G) ≤ X ≤ G`, with `e_(L,λ)^X` the pair idempotent of `X`.
pub fn phi_explicit<C: Scalar>(g: &Arc<Group>, tag: &PairTag) -> Result<AlgebraElement<C>> {
    frattini_tag(g, tag)?;
    let poset = pair_poset(g, PosetVariant::Frattini)?;
    let lat = g.lattice()?;
    let phi_g = g.frattini()?;
    let whole = g.whole();
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for xi in lat.above(&phi_g) {
        let x = lat.get(xi);
        let mu_x = mobius_subgroup(g, x, &whole)?;
        if mu_x == 0 {
            continue;
        }
        let (i, r) = (ind::<C>(g, x)?, res::<C>(g, x)?);
        let (xg, _) = g.subgroup_as_group(x, format!("{}-sub{}", g.name(), x.order()));
        let pos = x.position_map(g.order());
        for t in poset.tags.iter().filter(|t| tag.leq(t)) {
            let mu = mobius_normal(g, &tag.k, &t.k)?;
            if mu == 0 {
                continue;
            }
            let lx = xg.subgroup(&t.k.elems().iter().map(|&e| pos[e as usize]).collect::<Vec<_>>())?;
            let kappa = Character::from_parts(lx.clone(), t.kappa.values().to_vec());
            let ex = e_pair::<C>(&xg, &PairTag::new(&xg, lx, kappa)?)?;
            let term = i.mul(&ex)?.mul(&r)?;
            acc = acc.add(&term.scale(&C::from_ratio(x.order() as i64 * mu_x * mu, g.order() as i64)))?;
        }
    }
    Ok(acc)
}

/// `φ_[K,κ]`, the sum over an orbit.
pub fn phi_orbit<C: Scalar>(g: &Arc<Group>, orbit: &[PairTag]) -> Result<AlgebraElement<C>> {
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for t in orbit {
        acc = acc.add(&phi::<C>(g, t)?)?;
    }
    Ok(acc)
}

/// The ordinary `φ_N = Σ_{N ≤ L ≤ Φ(G), L ⊴ G} μ_⊴(N, L) Y_L`.
pub fn phi_bouc<C: Scalar>(g: &Arc<Group>, n: &Subgroup) -> Result<AlgebraElement<C>> {
    let phi_g = g.frattini()?;
    if !n.is_subset(&phi_g) || !g.is_normal(n) {
        return precondition("N must be normal and contained in the Frattini subgroup");
    }
    let lat = g.lattice()?;
    let e = e_tilde_top::<C>(g)?;
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for li in lat.above(n) {
        let l = lat.get(li);
        if !lat.is_normal(li) || !l.is_subset(&phi_g) {
            continue;
        }
        let mu = mobius_normal(g, n, l)?;
        if mu != 0 {
            let tag = PairTag { k: l.clone(), kappa: Character::trivial(l.clone()) };
            acc = acc.add(&e.mul(&e_pair::<C>(g, &tag)?)?.scale(&C::from_int(mu)))?;
        }
    }
    Ok(acc)
}

/// An index `(T, S, [K, κ])` of the section idempotents.
#[derive(Clone, Debug)]
pub struct EpsilonIndex {
    pub section: MinimalSection,
    /// `T/S`; the orbit's tags live in this group.
    pub quotient: Arc<Group>,
    pub orbit: Vec<PairTag>,
}

impl EpsilonIndex {
    pub fn normalizer_index(&self) -> usize {
        self.section.normalizer_index()
    }
}

/// All indices: minimal section representatives times faithful-pair orbits of `T/S`.
pub fn epsilon_indices(g: &Arc<Group>) -> Result<Vec<EpsilonIndex>> {
    let mut out = Vec::new();
    for ms in minimal_sections(g)? {
        let (q, _) = ms.section.quotient(g)?;
        for orbit in out_orbits(&q, PosetVariant::FaithfulFrattini)? {
            out.push(EpsilonIndex { section: ms.clone(), quotient: q.clone(), orbit });
        }
    }
    Ok(out)
}

/// `(u, v) = (Indinf φ_[K,κ], φ_[K,κ] Defres)`.
pub fn uv<C: Scalar>(g: &Arc<Group>, idx: &EpsilonIndex) -> Result<(AlgebraElement<C>, AlgebraElement<C>)> {
    let ph = phi_orbit::<C>(&idx.quotient, &idx.orbit)?;
    let u = indinf::<C>(g, &idx.section.section)?.mul(&ph)?;
    let v = ph.mul(&defres::<C>(g, &idx.section.section)?)?;
    Ok((u, v))
}

/// `ε = (1/|N_G(T,S):T|) Indinf φ_[K,κ] Defres`.
pub fn epsilon<C: Scalar>(g: &Arc<Group>, idx: &EpsilonIndex) -> Result<AlgebraElement<C>> {
    let (u, _) = uv::<C>(g, idx)?;
    let x = u.mul(&defres::<C>(g, &idx.section.section)?)?;
    Ok(x.scale(&C::from_ratio(1, idx.normalizer_index() as i64)))
}

/// `Iso(c_g)` on `T/S` for coset representatives `g` of `N_G(T,S)/T`.
pub fn normalizer_isos<C: Scalar>(g: &Arc<Group>, idx: &EpsilonIndex) -> Result<Vec<AlgebraElement<C>>> {
    let sec = &idx.section.section;
    let (q, pi) = sec.quotient(g)?;
    let n = &idx.section.normalizer;
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for &x in n.elems() {
        if seen[x as usize] {
            continue;
        }
        for &t in sec.t.elems() {
            seen[g.mul(x, t) as usize] = true;
        }
        // c_x on T/S: tS ↦ x t x⁻¹ S
        let mut img = vec![0 as Elem; q.order()];
        for &t in sec.t.elems() {
            img[pi[t as usize] as usize] = pi[g.conj(x, t) as usize];
        }
        out.push(graph(&q, &q, q.elements().map(|y| (img[y as usize], y))));
    }
    Ok(out)
}

/// `Σ_{g ∈ N_G(T,S)/T} Iso(c_g)` on `T/S`.
pub fn normalizer_iso_sum<C: Scalar>(g: &Arc<Group>, idx: &EpsilonIndex) -> Result<AlgebraElement<C>> {
    let (q, _) = idx.section.section.quotient(g)?;
    let isos = normalizer_isos::<C>(g, idx)?;
    AlgebraElement::sum(Space::get(&q, &q), &isos)
}

/// `Σ_H ẽ_H^G` over conjugacy class representatives.
pub fn e_tilde_sum<C: Scalar>(g: &Arc<Group>) -> Result<AlgebraElement<C>> {
    let lat = g.lattice()?;
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for i in lat.class_reps() {
        acc = acc.add(&e_tilde::<C>(g, lat.get(i))?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::identity;
    use crate::character::hom_group;
    use crate::group::build_group;
    use crate::{Element, Rational};

    fn c2_tags(c4: &Arc<Group>) -> Vec<PairTag> {
        let c2 = c4.closure(&[2]);
        hom_group(c4, &c2).iter().map(|k| PairTag::new(c4, c2.clone(), k.clone()).unwrap()).collect()
    }

    #[test]
    fn e_tilde_on_c2() {
        let c2 = build_group("C2").unwrap();
        let e: Element = e_tilde(&c2, &c2.whole()).unwrap();
        let want = delta::<Rational>(&c2, &c2.whole()).sub(&delta(&c2, &c2.trivial()).scale(&Rational::from_ratio(1, 2))).unwrap();
        assert_eq!(e, want);
        let e1: Element = e_tilde(&c2, &c2.trivial()).unwrap();
        assert_eq!(e1, delta(&c2, &c2.trivial()).scale(&Rational::from_ratio(1, 2)));
    }

    #[test]
    fn e_tilde_complete_system() {
        for s in ["C4", "D8", "Q8"] {
            let g = build_group(s).unwrap();
            assert_eq!(e_tilde_sum::<Rational>(&g).unwrap(), identity(&g), "{s}");
        }
    }

    #[test]
    fn f_pairs_on_c4() {
        let c4 = build_group("C4").unwrap();
        let tags = c2_tags(&c4);
        let f: Element = f_pair(&c4, &PairTag::trivial(&c4)).unwrap();
        let e0: Element = identity(&c4);
        let want = e0.sub(&e_pair(&c4, &tags[0]).unwrap()).unwrap().sub(&e_pair(&c4, &tags[1]).unwrap()).unwrap();
        assert_eq!(f, want);
        assert!(f.is_idempotent().unwrap());
    }

    #[test]
    fn phi_on_c4() {
        let c4 = build_group("C4").unwrap();
        let tags = c2_tags(&c4);
        let p0: Element = phi(&c4, &PairTag::trivial(&c4)).unwrap();
        let want = e_tilde_pair::<Rational>(&c4, &PairTag::trivial(&c4))
            .unwrap()
            .sub(&e_tilde_pair(&c4, &tags[0]).unwrap())
            .unwrap()
            .sub(&e_tilde_pair(&c4, &tags[1]).unwrap())
            .unwrap();
        assert_eq!(p0, want);
        let ps: Element = phi(&c4, &tags[1]).unwrap();
        assert_eq!(ps, e_tilde_pair(&c4, &tags[1]).unwrap());
        assert_eq!(phi_fast::<Rational>(&c4, &tags[1]).unwrap(), ps);
        assert_eq!(phi_fast::<Rational>(&c4, &PairTag::trivial(&c4)).unwrap(), p0);
        assert_eq!(phi_explicit::<Rational>(&c4, &tags[0]).unwrap(), phi(&c4, &tags[0]).unwrap());
        let e1: Element = e_tilde_pair(&c4, &tags[0]).unwrap();
        assert!(e1.mul(&e_tilde_pair(&c4, &tags[1]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn bouc_phi_on_c4() {
        let c4 = build_group("C4").unwrap();
        let tags = c2_tags(&c4);
        let b: Element = phi_bouc(&c4, &c4.trivial()).unwrap();
        let want = e_tilde_top::<Rational>(&c4).unwrap().sub(&e_tilde_pair(&c4, &tags[0]).unwrap()).unwrap();
        assert_eq!(b, want);
    }

    #[test]
    fn epsilon_counts_and_sum() {
        for (s, n) in [("C2", 2), ("C4", 5)] {
            let g = build_group(s).unwrap();
            let idx = epsilon_indices(&g).unwrap();
            assert_eq!(idx.len(), n, "{s}");
            let eps: Vec<Element> = idx.iter().map(|i| epsilon(&g, i).unwrap()).collect();
            assert_eq!(Element::sum(Space::get(&g, &g), &eps).unwrap(), identity(&g));
            for (i, a) in eps.iter().enumerate() {
                for (j, b) in eps.iter().enumerate() {
                    let p = a.mul(b).unwrap();
                    if i == j {
                        assert_eq!(&p, a);
                    } else {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon_on_c2_matches_closed_forms() {
        let c2 = build_group("C2").unwrap();
        let idx = epsilon_indices(&c2).unwrap();
        let one = c2.trivial();
        let half_ir: Element = ind::<Rational>(&c2, &one)
            .unwrap()
            .mul(&res(&c2, &one).unwrap())
            .unwrap()
            .scale(&Rational::from_ratio(1, 2));
        let e0: Element = epsilon(&c2, &idx[0]).unwrap();
        let e1: Element = epsilon(&c2, &idx[1]).unwrap();
        assert_eq!(e0, half_ir);
        assert_eq!(e1, e_tilde_top(&c2).unwrap());
    }
}
