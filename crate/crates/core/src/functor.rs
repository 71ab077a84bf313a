//! Evaluations `F(G) = B_ℚ^{ℂ×}(G, 1)` of the monomial Burnside functor and their
//! decomposition by the section idempotents.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, LabelId, Space};
use crate::error::{Error, Result};
use crate::group::{trivial_group, Group};
use crate::idempotents::{epsilon, epsilon_indices, normalizer_isos, uv, EpsilonIndex};
use crate::linalg::{rank, RowSpace};
use crate::scalar::Scalar;
use crate::serial::ElementJson;
use crate::Rational;

/// A vector of `F(G)`: an element of `B(G, 1)`.
pub type ModuleVector<C = Rational> = AlgebraElement<C>;

pub fn module_space(g: &Arc<Group>) -> Arc<Space> {
    Space::get(g, &trivial_group())
}

/// Classes of pairs `(U, υ)` up to `G`-conjugacy.
pub fn module_basis(g: &Arc<Group>) -> Result<Vec<LabelId>> {
    Ok(module_space(g).basis()?.to_vec())
}

/// `x · v` for `x ∈ B(G, H)` and `v ∈ F(H)`.
pub fn act<C: Scalar>(x: &AlgebraElement<C>, v: &ModuleVector<C>) -> Result<ModuleVector<C>> {
    if v.src().order() != 1 {
        return Err(Error::Mismatch("module vectors live in B(G, 1)".into()));
    }
    x.mul(v)
}

/// Coordinates of `v` against `basis`.
pub fn coordinates<C: Scalar>(v: &ModuleVector<C>, basis: &[LabelId]) -> Vec<C> {
    basis.iter().map(|&b| v.coefficient(b)).collect()
}

/// Images `x · b` of every basis vector of `F(H)`.
pub fn images<C: Scalar>(x: &AlgebraElement<C>) -> Result<Vec<ModuleVector<C>>> {
    let h = x.src().clone();
    let space = module_space(&h);
    let basis = space.basis()?.to_vec();
    basis.par_iter().map(|&b| act(x, &AlgebraElement::basis(space.clone(), b))).collect()
}

/// Dimension of `x · F(H)` inside `F(G)`.
pub fn image_rank<C: Scalar>(x: &AlgebraElement<C>) -> Result<usize> {
    let basis = module_basis(x.dst())?;
    Ok(rank(basis.len(), images(x)?.iter().map(|v| coordinates(v, &basis))))
}

/// One summand `(φ_[K,κ] F(T/S))^{N/T}` of `F(G)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Component {
    pub t: Vec<u16>,
    pub s: Vec<u16>,
    /// Tags of the orbit, as `K` elements of `T/S` with `κ` values.
    pub orbit: Vec<String>,
    pub dimension: usize,
    /// `rank(v · F(G))` inside `F(T/S)`; equals `dimension`.
    pub component_rank: usize,
    /// Every image vector in `F(T/S)` is fixed by all `Iso(c_g)`, `g ∈ N_G(T,S)`.
    pub invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub image: Option<Vec<ElementJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub group: String,
    pub total_rank: usize,
    /// Largest sections `T/S` first.
    pub components: Vec<Component>,
    /// Rank of the union of all `ε`-images.
    pub joint_rank: usize,
    /// `U ∘ V` is the identity on the basis of `F(G)`.
    pub uv_identity: bool,
    /// `V ∘ U` is the identity on spanning sets of every summand.
    pub vu_identity: bool,
}

impl DecompositionReport {
    pub fn dimensions(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dimension).collect()
    }

    pub fn passed(&self) -> bool {
        let sum: usize = self.components.iter().map(|c| c.dimension).sum();
        sum == self.total_rank
            && self.joint_rank == self.total_rank
            && self.uv_identity
            && self.vu_identity
            && self.components.iter().all(|c| c.invariant && c.component_rank == c.dimension)
    }
}

fn tag_label(t: &crate::character::PairTag) -> String {
    let vals: Vec<String> = t.kappa.values().iter().map(|v| v.to_string()).collect();
    format!("K={:?} κ=[{}]", t.k.elems(), vals.join(","))
}

struct Piece {
    idx: EpsilonIndex,
    u: AlgebraElement<Rational>,
    v: AlgebraElement<Rational>,
    scale: Rational,
    /// `v · b` for the basis of `F(G)`.
    spanning: Vec<ModuleVector>,
}

/// Decomposes `F(G)` along the section idempotents and checks the forward and backward maps.
pub fn decompose(g: &Arc<Group>, with_images: bool) -> Result<DecompositionReport> {
    let space = module_space(g);
    let basis = space.basis()?.to_vec();
    let idxs = epsilon_indices(g)?;
    let pieces: Vec<Piece> = idxs
        .into_par_iter()
        .map(|idx| {
            let (u, v) = uv::<Rational>(g, &idx)?;
            let spanning = basis
                .iter()
                .map(|&b| act(&v, &AlgebraElement::basis(space.clone(), b)))
                .collect::<Result<_>>()?;
            let scale = Rational::from_ratio(1, idx.normalizer_index() as i64);
            Ok(Piece { idx, u, v, scale, spanning })
        })
        .collect::<Result<_>>()?;

    let mut joint = RowSpace::<Rational>::new(basis.len());
    let mut components = Vec::new();
    for p in &pieces {
        let eps = epsilon::<Rational>(g, &p.idx)?;
        let imgs = images(&eps)?;
        let mut own = RowSpace::new(basis.len());
        for v in &imgs {
            let c = coordinates(v, &basis);
            own.insert(c.clone());
            joint.insert(c);
        }
        let (q, _) = p.idx.section.section.quotient(g)?;
        let qbasis = module_basis(&q)?;
        let component_rank = rank(qbasis.len(), p.spanning.iter().map(|y| coordinates(y, &qbasis)));
        let isos = normalizer_isos::<Rational>(g, &p.idx)?;
        let mut invariant = true;
        'outer: for y in &p.spanning {
            for c in &isos {
                if act(c, y)? != *y {
                    invariant = false;
                    break 'outer;
                }
            }
        }
        let image = with_images.then(|| imgs.iter().filter(|v| !v.is_zero()).map(ElementJson::from_element).collect());
        let sec = &p.idx.section.section;
        components.push(Component {
            t: sec.t.elems().to_vec(),
            s: sec.s.elems().to_vec(),
            orbit: p.idx.orbit.iter().map(tag_label).collect(),
            dimension: own.rank(),
            component_rank,
            invariant,
            image,
        });
    }

    components.sort_by_key(|c| std::cmp::Reverse(c.t.len() / c.s.len()));

    // U ∘ V = Σ (1/n) u v
    let mut uv_identity = true;
    for &b in &basis {
        let e = AlgebraElement::basis(space.clone(), b);
        let mut acc = AlgebraElement::zero(space.clone());
        for p in &pieces {
            acc = acc.add(&act(&p.u, &act(&p.v, &e)?)?.scale(&p.scale))?;
        }
        if acc != e {
            uv_identity = false;
            break;
        }
    }
    // V ∘ U: v_j (1/n_i) u_i y = δ_ij y
    let vu_identity = pieces
        .par_iter()
        .enumerate()
        .map(|(i, pi)| -> Result<bool> {
            for y in &pi.spanning {
                let back = act(&pi.u, y)?.scale(&pi.scale);
                for (j, pj) in pieces.iter().enumerate() {
                    let z = act(&pj.v, &back)?;
                    let ok = if i == j { z == *y } else { z.is_zero() };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);

    Ok(DecompositionReport {
        group: g.name().to_string(),
        total_rank: basis.len(),
        components,
        joint_rank: joint.rank(),
        uv_identity,
        vu_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{conj_iso, identity};
    use crate::group::build_group;
    use crate::idempotents::e_tilde_top;
    use crate::phase::Phase;

    #[test]
    fn module_ranks() {
        assert_eq!(module_basis(&build_group("1").unwrap()).unwrap().len(), 1);
        assert_eq!(module_basis(&build_group("C2").unwrap()).unwrap().len(), 3);
        assert_eq!(module_basis(&build_group("C3").unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn identity_and_inner_isos_act_trivially() {
        let g = build_group("D8").unwrap();
        let space = module_space(&g);
        for &b in module_basis(&g).unwrap().iter() {
            let v = AlgebraElement::<Rational>::basis(space.clone(), b);
            assert_eq!(act(&identity(&g), &v).unwrap(), v);
            for x in g.elements() {
                assert_eq!(act(&conj_iso(&g, x), &v).unwrap(), v);
            }
        }
    }

    #[test]
    fn top_etilde_on_c2() {
        let c2 = build_group("C2").unwrap();
        let space = module_space(&c2);
        let e = e_tilde_top::<Rational>(&c2).unwrap();
        let free = space.intern_trivial(vec![0]);
        let v = AlgebraElement::basis(space.clone(), free);
        assert!(act(&e, &v).unwrap().is_zero());
        let half = Rational::from_ratio(1, 2);
        for kappa in [Phase::ZERO, Phase::new(1, 2)] {
            let id = space.intern(vec![0, 1], vec![Phase::ZERO, kappa]);
            let got = act(&e, &AlgebraElement::basis(space.clone(), id)).unwrap();
            let want = AlgebraElement::from_terms(space.clone(), [(id, Rational::from_int(1)), (free, -half.clone())]);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn decompositions() {
        let c2 = decompose(&build_group("C2").unwrap(), false).unwrap();
        assert_eq!(c2.total_rank, 3);
        assert_eq!(c2.dimensions(), vec![2, 1]);
        let big_first: Vec<usize> = c2.components.iter().filter(|c| c.t.len() == 2).map(|c| c.dimension).collect();
        assert_eq!(big_first, vec![2]);
        assert!(c2.passed());
        let one = decompose(&build_group("1").unwrap(), true).unwrap();
        assert_eq!(one.dimensions(), vec![1]);
        for s in ["C4", "C2 x C2", "D8"] {
            let r = decompose(&build_group(s).unwrap(), false).unwrap();
            assert!(r.passed(), "{s}: {r:?}");
        }
    }
}
