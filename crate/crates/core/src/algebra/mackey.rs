//! The Mackey formula on basis labels, and the star product of pairs.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use super::space::{Label, LabelId, Space};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupId};
use crate::phase::Phase;

type ProductKey = (GroupId, GroupId, GroupId, LabelId, LabelId);
static PRODUCTS: OnceLock<DashMap<ProductKey, Arc<Vec<(LabelId, i64)>>>> = OnceLock::new();

/// `U * ᵗV` with its composite character, or `None` when the character is ill-defined.
///
/// `t = 0` gives the plain star product `U * V`.
pub(crate) fn twisted_star(
    s1: &Space,
    u: &Label,
    s2: &Space,
    v: &Label,
    t: Elem,
) -> Option<(Vec<Elem>, Vec<Phase>)> {
    let g = s1.left();
    let h = s1.right();
    let k = s2.right();
    let n = g.order() * k.order();
    let mut buf: Vec<Option<Phase>> = vec![None; n];
    let ti = h.inv(t);
    for hp in h.elements() {
        let left = &u.by_second[hp as usize];
        if left.is_empty() {
            continue;
        }
        let right = &v.by_first[h.mul(h.mul(ti, hp), t) as usize];
        for &(a, x) in left {
            for &(c, y) in right {
                let code = a as usize * k.order() + c as usize;
                let val = x + y;
                match buf[code] {
                    None => buf[code] = Some(val),
                    Some(w) if w != val => return None,
                    _ => {}
                }
            }
        }
    }
    let mut elems = Vec::new();
    let mut values = Vec::new();
    for (c, v) in buf.into_iter().enumerate() {
        if let Some(v) = v {
            elems.push(c as Elem);
            values.push(v);
        }
    }
    Some((elems, values))
}

/// The star product of two labels as a label of `(G, K)`.
pub fn star(s1: &Space, a: LabelId, s2: &Space, b: LabelId, out: &Space) -> Result<LabelId> {
    let (u, v) = (s1.label(a), s2.label(b));
    match twisted_star(s1, &u, s2, &v, 0) {
        Some((e, vals)) => Ok(out.intern(e, vals)),
        None => Err(Error::IllDefined("characters disagree on k2(U) ∩ k1(V)".into())),
    }
}

/// Representatives (least element) of `p2(U)\H/p1(V)`.
pub(crate) fn double_coset_reps(s1: &Space, u: &Label, v: &Label) -> Vec<Elem> {
    let h = s1.right();
    let left: Vec<Elem> = h.elements().filter(|&x| !u.by_second[x as usize].is_empty()).collect();
    let right: Vec<Elem> = h.elements().filter(|&x| !v.by_first[x as usize].is_empty()).collect();
    let mut seen = vec![false; h.order()];
    let mut reps = Vec::new();
    for t in h.elements() {
        if seen[t as usize] {
            continue;
        }
        reps.push(t);
        for &a in &left {
            let at = h.mul(a, t);
            for &b in &right {
                seen[h.mul(at, b) as usize] = true;
            }
        }
    }
    reps
}

/// `[U, υ] ·_H [V, ω]` as multiplicities of labels of `out = (G, K)`, sorted by label id.
pub fn label_product(s1: &Space, a: LabelId, s2: &Space, b: LabelId, out: &Space) -> Arc<Vec<(LabelId, i64)>> {
    let (g, h) = s1.key();
    let key = (g, h, s2.key().1, a, b);
    let memo = PRODUCTS.get_or_init(DashMap::new);
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let (u, v) = (s1.label(a), s2.label(b));
    let mut terms: Vec<(LabelId, i64)> = Vec::new();
    for t in double_coset_reps(s1, &u, &v) {
        if let Some((e, vals)) = twisted_star(s1, &u, s2, &v, t) {
            let id = out.intern(e, vals);
            match terms.iter_mut().find(|p| p.0 == id) {
                Some(p) => p.1 += 1,
                None => terms.push((id, 1)),
            }
        }
    }
    terms.sort_unstable();
    let r = Arc::new(terms);
    memo.insert(key, r.clone());
    r
}
