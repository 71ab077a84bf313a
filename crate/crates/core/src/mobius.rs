//! Möbius functions of the subgroup lattice and of the normal-subgroup poset,
//! deflation numbers, and the ordinary Burnside ring.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::{precondition, Result};
use crate::group::{Elem, Group, GroupId, Subgroup};
use crate::scalar::Scalar;

/// `μ(X, H)` for every `X ≤ H`, keyed by lattice index, for one upper subgroup `H`.
#[derive(Debug)]
pub struct MobiusTable {
    pub group: GroupId,
    pub upper: usize,
    pub values: HashMap<usize, i64>,
}

type Memo = DashMap<(GroupId, usize, bool), Arc<MobiusTable>>;
static MEMO: OnceLock<Memo> = OnceLock::new();

fn table(g: &Group, upper: usize, normal_only: bool) -> Result<Arc<MobiusTable>> {
    let memo = MEMO.get_or_init(DashMap::new);
    if let Some(t) = memo.get(&(g.id(), upper, normal_only)) {
        return Ok(t.clone());
    }
    let lat = g.lattice()?;
    let h = lat.get(upper);
    let mut below: Vec<usize> = lat.below(h);
    if normal_only {
        below.retain(|&i| lat.is_normal(i));
    }
    below.sort_by_key(|&i| std::cmp::Reverse(lat.get(i).order()));
    let mut values: HashMap<usize, i64> = HashMap::with_capacity(below.len());
    for (pos, &x) in below.iter().enumerate() {
        if x == upper {
            values.insert(x, 1);
            continue;
        }
        let sx = lat.get(x);
        let s: i64 = below[..pos]
            .iter()
            .filter(|&&y| lat.get(y).order() > sx.order() && sx.is_subset(lat.get(y)))
            .map(|y| values[y])
            .sum();
        values.insert(x, -s);
    }
    let t = Arc::new(MobiusTable { group: g.id(), upper, values });
    Ok(memo.entry((g.id(), upper, normal_only)).or_insert(t).clone())
}

fn index(g: &Group, s: &Subgroup) -> Result<usize> {
    let lat = g.lattice()?;
    match lat.index_of(s) {
        Some(i) if s.parent() == g.id() => Ok(i),
        _ => precondition("subgroup does not belong to this group"),
    }
}

/// `μ(K, H)` in the subgroup lattice.
pub fn mobius_subgroup(g: &Group, k: &Subgroup, h: &Subgroup) -> Result<i64> {
    if !k.is_subset(h) {
        return precondition("mobius_subgroup needs K ≤ H");
    }
    let t = table(g, index(g, h)?, false)?;
    Ok(t.values[&index(g, k)?])
}

/// `μ_⊴G(K, L)` in the poset of normal subgroups of `G`.
pub fn mobius_normal(g: &Group, k: &Subgroup, l: &Subgroup) -> Result<i64> {
    if !k.is_subset(l) {
        return precondition("mobius_normal needs K ≤ L");
    }
    if !g.is_normal(k) || !g.is_normal(l) {
        return precondition("mobius_normal needs normal subgroups");
    }
    let t = table(g, index(g, l)?, true)?;
    Ok(t.values[&index(g, k)?])
}

/// `m_{G,N} = (1/|G|) Σ_{X ≤ G, XN = G} |X| μ(X, G)`.
pub fn deflation_number<C: Scalar>(g: &Group, n: &Subgroup) -> Result<C> {
    if !g.is_normal(n) {
        return precondition("deflation number needs a normal subgroup");
    }
    let lat = g.lattice()?;
    let top = lat.len() - 1;
    let t = table(g, top, false)?;
    let mut acc: i64 = 0;
    for (&x, &mu) in &t.values {
        let sx = lat.get(x);
        let meet = sx.elems().iter().filter(|&&e| n.contains(e)).count();
        if sx.order() * n.order() / meet == g.order() {
            acc += sx.order() as i64 * mu;
        }
    }
    Ok(C::from_ratio(acc, g.order() as i64))
}

/// An element of `ℚ ⊗ B(G)`: coefficients on conjugacy-class indices of the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct BurnsideElement<C: Scalar> {
    pub coeffs: BTreeMap<usize, C>,
}

impl<C: Scalar> BurnsideElement<C> {
    pub fn zero() -> Self {
        BurnsideElement { coeffs: BTreeMap::new() }
    }

    pub fn basis(class: usize) -> Self {
        BurnsideElement { coeffs: BTreeMap::from([(class, C::one())]) }
    }

    pub fn add_term(&mut self, class: usize, c: C) {
        let e = self.coeffs.entry(class).or_insert_with(C::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.coeffs.remove(&class);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&k, c) in &other.coeffs {
            r.add_term(k, c.clone());
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplication of `G`-sets: `[G/K]·[G/L] = Σ_{KgL} [G/(K ∩ gLg⁻¹)]`.
    pub fn mul(&self, other: &Self, g: &Group) -> Result<Self> {
        let lat = g.lattice()?;
        let mut r = Self::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                let k = lat.get(lat.classes()[a].rep());
                let l = lat.get(lat.classes()[b].rep());
                for (class, m) in transitive_product(g, k, l)? {
                    r.add_term(class, ca.clone() * cb.clone() * C::from_int(m));
                }
            }
        }
        Ok(r)
    }
}

fn transitive_product(g: &Group, k: &Subgroup, l: &Subgroup) -> Result<Vec<(usize, i64)>> {
    let lat = g.lattice()?;
    let mut seen = vec![false; g.order()];
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        for &a in k.elems() {
            for &b in l.elems() {
                seen[g.mul(g.mul(a, x), b) as usize] = true;
            }
        }
        let lx = g.conjugate(l, x);
        let meet: Vec<Elem> = k.elems().iter().copied().filter(|&e| lx.contains(e)).collect();
        let i = lat.index_of_elems(&meet).expect("intersection is a subgroup");
        *out.entry(lat.class_of(i)).or_insert(0) += 1;
    }
    Ok(out.into_iter().collect())
}

/// Coefficients of the primitive idempotent `e_H^G` on `[G/K]`, aggregated by conjugacy class.
pub fn burnside_idempotent_coeffs<C: Scalar>(g: &Group, h: &Subgroup) -> Result<BurnsideElement<C>> {
    let lat = g.lattice()?;
    let hi = index(g, h)?;
    let t = table(g, hi, false)?;
    let nh = g.normalizer(h).order() as i64;
    let mut e = BurnsideElement::zero();
    for (&k, &mu) in &t.values {
        if mu != 0 {
            e.add_term(lat.class_of(k), C::from_ratio(lat.get(k).order() as i64 * mu, nh));
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::Rational;

    #[test]
    fn small_values() {
        for p in [2, 3, 5] {
            let g = build_group(&format!("C{p}")).unwrap();
            assert_eq!(mobius_subgroup(&g, &g.trivial(), &g.whole()).unwrap(), -1);
            assert_eq!(mobius_subgroup(&g, &g.whole(), &g.whole()).unwrap(), 1);
        }
        for p in [2, 3] {
            let g = build_group(&format!("C{p} x C{p}")).unwrap();
            assert_eq!(mobius_subgroup(&g, &g.trivial(), &g.whole()).unwrap(), p as i64);
        }
        let c4 = build_group("C4").unwrap();
        let c2 = c4.closure(&[2]);
        assert_eq!(mobius_normal(&c4, &c4.trivial(), &c2).unwrap(), -1);
        let q8 = build_group("Q8").unwrap();
        assert_eq!(mobius_normal(&q8, &q8.trivial(), &q8.center()).unwrap(), -1);
        let d8 = build_group("D8").unwrap();
        let v = d8.lattice().unwrap().subgroups().iter().find(|s| s.order() == 2 && !d8.is_normal(s)).unwrap().clone();
        assert!(mobius_normal(&d8, &d8.trivial(), &v).is_err());
    }

    #[test]
    fn hall_vanishing() {
        for s in ["C4", "C8", "D8", "Q8", "C2 x C4", "C9", "C3 x C3", "D6", "C2 x C2 x C2"] {
            let g = build_group(s).unwrap();
            let phi = g.frattini().unwrap();
            for x in g.lattice().unwrap().subgroups() {
                if !phi.is_subset(x) {
                    assert_eq!(mobius_subgroup(&g, x, &g.whole()).unwrap(), 0, "{s}");
                }
            }
        }
    }

    #[test]
    fn deflation_numbers() {
        let d8 = build_group("D8").unwrap();
        assert_eq!(deflation_number::<Rational>(&d8, &d8.trivial()).unwrap(), Rational::from_int(1));
        for p in [2, 3] {
            let g = build_group(&format!("C{p}")).unwrap();
            assert_eq!(deflation_number::<Rational>(&g, &g.whole()).unwrap(), Rational::from_ratio(p - 1, p));
        }
        let v = build_group("C2 x C2").unwrap();
        let c2 = v.closure(&[1]);
        assert_eq!(deflation_number::<Rational>(&v, &c2).unwrap(), Rational::from_int(0));
    }

    #[test]
    fn burnside_idempotents() {
        let c2 = build_group("C2").unwrap();
        let e = burnside_idempotent_coeffs::<Rational>(&c2, &c2.whole()).unwrap();
        assert_eq!(e.coeffs[&1], Rational::from_int(1));
        assert_eq!(e.coeffs[&0], Rational::from_ratio(-1, 2));
        for s in ["C4", "D8", "Q8", "C3 x C3"] {
            let g = build_group(s).unwrap();
            let lat = g.lattice().unwrap();
            let es: Vec<_> = lat
                .class_reps()
                .into_iter()
                .map(|i| burnside_idempotent_coeffs::<Rational>(&g, lat.get(i)).unwrap())
                .collect();
            let sum = es.iter().fold(BurnsideElement::zero(), |a, b| a.add(b));
            assert_eq!(sum, BurnsideElement::basis(lat.classes().len() - 1), "{s}");
            for (i, a) in es.iter().enumerate() {
                for (j, b) in es.iter().enumerate() {
                    let p = a.mul(b, &g).unwrap();
                    if i == j {
                        assert_eq!(&p, a);
                    } else {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }
}
