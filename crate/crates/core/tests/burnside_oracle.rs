//! The embedding `B(G) → B(G, G)`, `[G/K] ↦ [(Δ(K), 1)]`, against the independent Burnside-ring model.

use std::sync::Arc;

use fibered_core::algebra::{AlgebraElement, Space};
use fibered_core::group::{build_group, Group};
use fibered_core::idempotents::{delta, e_tilde};
use fibered_core::mobius::{burnside_idempotent_coeffs, BurnsideElement};
use fibered_core::{Element, Rational};

fn embed(g: &Arc<Group>, x: &BurnsideElement<Rational>) -> Element {
    let lat = g.lattice().unwrap();
    let mut acc = AlgebraElement::zero(Space::get(g, g));
    for (&class, c) in &x.coeffs {
        let k = lat.get(lat.classes()[class].rep());
        acc = acc.add(&delta::<Rational>(g, k).scale(c)).unwrap();
    }
    acc
}

#[test]
fn embedding_is_multiplicative() {
    for s in ["C4", "C2 x C2", "D8", "Q8", "C3 x C3", "C9"] {
        let g = build_group(s).unwrap();
        let classes = g.lattice().unwrap().classes().len();
        for a in 0..classes {
            for b in 0..classes {
                let (x, y) = (BurnsideElement::basis(a), BurnsideElement::basis(b));
                let want = embed(&g, &x.mul(&y, &g).unwrap());
                let got = embed(&g, &x).mul(&embed(&g, &y)).unwrap();
                assert_eq!(got, want, "{s}: classes {a}, {b}");
            }
        }
    }
}

#[test]
fn e_tilde_is_the_image_of_the_burnside_idempotent() {
    for s in ["C2", "C4", "C2 x C2", "D8", "Q8", "C3 x C3", "C2 x C4"] {
        let g = build_group(s).unwrap();
        let lat = g.lattice().unwrap();
        for i in lat.class_reps() {
            let h = lat.get(i);
            let e = burnside_idempotent_coeffs::<Rational>(&g, h).unwrap();
            assert_eq!(e_tilde::<Rational>(&g, h).unwrap(), embed(&g, &e), "{s}: H = {:?}", h.elems());
        }
    }
}
