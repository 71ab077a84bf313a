//! Sections, Goursat data and subquotient tests.

use std::sync::Arc;

use super::{is_isomorphic, Elem, Group, Subgroup};
use crate::error::{precondition, Result};

/// A pair `S ⊴ T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub t: Subgroup,
    pub s: Subgroup,
}

impl Section {
    pub fn new(g: &Group, t: Subgroup, s: Subgroup) -> Result<Section> {
        if !s.is_subset(&t) || !g.normalizes(&t, &s) {
            return precondition("section requires S normal in T");
        }
        Ok(Section { t, s })
    }

    pub fn order(&self) -> usize {
        self.t.order() / self.s.order()
    }

    /// `T/S` as a group and the projection as a dense map on `G` (`Elem::MAX` off `T`).
    pub fn quotient(&self, g: &Group) -> Result<(Arc<Group>, Vec<Elem>)> {
        let (tg, _) = g.subgroup_as_group(&self.t, "T");
        let pos = self.t.position_map(g.order());
        let s_in_t: Vec<Elem> = self.s.elems().iter().map(|&x| pos[x as usize]).collect();
        let s2 = tg.subgroup(&s_in_t)?;
        let (q, pi) = tg.quotient(&s2, format!("{}-section({}/{})", g.name(), self.t.order(), self.s.order()))?;
        let mut dense = vec![Elem::MAX; g.order()];
        for (i, &x) in self.t.elems().iter().enumerate() {
            dense[x as usize] = pi.apply(i as Elem);
        }
        Ok((q, dense))
    }

    /// Joint normaliser `N_G(T) ∩ N_G(S)`.
    pub fn normalizer(&self, g: &Group) -> Subgroup {
        g.intersection(&g.normalizer(&self.t), &g.normalizer(&self.s))
    }
}

#[derive(Clone, Debug)]
pub struct MinimalSection {
    pub section: Section,
    /// `N_G(T, S)`.
    pub normalizer: Subgroup,
    /// Size of the `G`-conjugacy class of the pair.
    pub orbit_size: usize,
}

impl MinimalSection {
    pub fn normalizer_index(&self) -> usize {
        self.normalizer.order() / self.section.t.order()
    }
}

/// Representatives of the `G`-classes of pairs `S ⊴ T ≤ G` with `S ≤ Φ(T)`.
pub fn minimal_sections(g: &Group) -> Result<Vec<MinimalSection>> {
    let lat = g.lattice()?;
    let mut out = Vec::new();
    for t_idx in lat.class_reps() {
        let t = lat.get(t_idx).clone();
        let phi = lat.frattini_of(g, &t);
        let nt = g.normalizer(&t);
        let ntg = g.subgroup_generators(&nt);
        let cands: Vec<Subgroup> = lat
            .below(&phi)
            .into_iter()
            .map(|i| lat.get(i).clone())
            .filter(|s| g.normalizes(&t, s))
            .collect();
        let mut done = vec![false; cands.len()];
        for i in 0..cands.len() {
            if done[i] {
                continue;
            }
            let mut orbit = vec![i];
            done[i] = true;
            let mut k = 0;
            while k < orbit.len() {
                let s = cands[orbit[k]].clone();
                for &x in &ntg {
                    let c = g.conjugate(&s, x);
                    if let Some(j) = cands.iter().position(|y| *y == c) {
                        if !done[j] {
                            done[j] = true;
                            orbit.push(j);
                        }
                    }
                }
                k += 1;
            }
            let rep = orbit.iter().map(|&j| &cands[j]).min().unwrap().clone();
            let section = Section { t: t.clone(), s: rep };
            let normalizer = section.normalizer(g);
            out.push(MinimalSection { orbit_size: g.order() / normalizer.order(), section, normalizer });
        }
    }
    out.sort_by(|a, b| a.section.cmp(&b.section));
    Ok(out)
}

/// Whether `M` is isomorphic to a subquotient of `P`.
pub fn is_subquotient(m: &Group, p: &Group) -> Result<bool> {
    if !p.order().is_multiple_of(m.order()) {
        return Ok(false);
    }
    if m.order() == 1 {
        return Ok(true);
    }
    let lat = p.lattice()?;
    for t_idx in lat.class_reps() {
        let t = lat.get(t_idx);
        if t.order() % m.order() != 0 {
            continue;
        }
        let want = t.order() / m.order();
        for s_idx in lat.below(t) {
            let s = lat.get(s_idx);
            if s.order() != want || !p.normalizes(t, s) {
                continue;
            }
            let (q, _) = Section { t: t.clone(), s: s.clone() }.quotient(p)?;
            if is_isomorphic(&q, m).is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Goursat data `(p1, k1, η, k2, p2)` of `U ≤ G × H`.
#[derive(Clone, Debug)]
pub struct Goursat {
    pub p1: Subgroup,
    pub k1: Subgroup,
    pub p2: Subgroup,
    pub k2: Subgroup,
    /// `(h, g)`: coset representative `h k2` of `p2/k2` and the representative of its image `g k1`.
    pub eta: Vec<(Elem, Elem)>,
}

pub(crate) fn goursat_of_codes(g: &Group, h: &Group, codes: &[Elem]) -> Goursat {
    let k = h.order();
    let split = |c: Elem| ((c as usize / k) as Elem, (c as usize % k) as Elem);
    let mut p1 = Vec::new();
    let mut k1 = Vec::new();
    let mut p2 = Vec::new();
    let mut k2 = Vec::new();
    let mut partner = vec![Elem::MAX; k];
    for &c in codes {
        let (a, b) = split(c);
        p1.push(a);
        p2.push(b);
        if b == 0 {
            k1.push(a);
        }
        if a == 0 {
            k2.push(b);
        }
        if partner[b as usize] == Elem::MAX || a < partner[b as usize] {
            partner[b as usize] = a;
        }
    }
    let fin = |mut v: Vec<Elem>, grp: &Group| {
        v.sort_unstable();
        v.dedup();
        Subgroup::from_sorted(grp.id(), grp.order(), v)
    };
    let (p1, k1, p2, k2) = (fin(p1, g), fin(k1, g), fin(p2, h), fin(k2, h));
    let mut seen = vec![false; k];
    let mut eta = Vec::new();
    for &y in p2.elems() {
        if seen[y as usize] {
            continue;
        }
        for &z in k2.elems() {
            seen[h.mul(y, z) as usize] = true;
        }
        eta.push((y, partner[y as usize]));
    }
    Goursat { p1, k1, p2, k2, eta }
}

/// Goursat data of a subgroup of a registered direct product.
pub fn goursat(product: &Group, u: &Subgroup) -> Result<Goursat> {
    let (g, h) = match product.factors() {
        Some(f) => f,
        None => return precondition("goursat needs a subgroup of a direct product"),
    };
    if u.parent() != product.id() {
        return precondition("subgroup does not belong to this product");
    }
    Ok(goursat_of_codes(g, h, u.elems()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, direct_product};

    #[test]
    fn minimal_section_counts() {
        let c2 = build_group("C2").unwrap();
        assert_eq!(minimal_sections(&c2).unwrap().len(), 2);
        let c4 = build_group("C4").unwrap();
        let ms = minimal_sections(&c4).unwrap();
        let shape: Vec<_> = ms.iter().map(|m| (m.section.t.order(), m.section.s.order())).collect();
        assert_eq!(shape, vec![(1, 1), (2, 1), (4, 1), (4, 2)]);
        let v = build_group("C2 x C2").unwrap();
        assert!(minimal_sections(&v).unwrap().iter().all(|m| m.section.s.is_trivial()));
    }

    #[test]
    fn goursat_invariants() {
        let d8 = build_group("D8").unwrap();
        let p = direct_product(&d8, &d8).unwrap();
        let lat = p.lattice().unwrap();
        for u in lat.subgroups() {
            let gd = goursat(&p, u).unwrap();
            assert_eq!(u.order(), gd.p1.order() * gd.k2.order());
            assert_eq!(u.order(), gd.p2.order() * gd.k1.order());
            assert!(d8.normalizes(&gd.p1, &gd.k1) && d8.normalizes(&gd.p2, &gd.k2));
            assert_eq!(gd.eta.len(), gd.p2.order() / gd.k2.order());
        }
        let diag: Vec<Elem> = d8.elements().map(|x| Group::pair_code(x, x, 8)).collect();
        let gd = goursat(&p, &p.subgroup(&diag).unwrap()).unwrap();
        assert!(gd.k1.is_trivial() && gd.k2.is_trivial() && gd.p1.order() == 8);
        assert!(gd.eta.iter().all(|&(h, g)| h == g));
        assert!(goursat(&d8, &d8.whole()).is_err());
    }

    #[test]
    fn subquotients() {
        let d8 = build_group("D8").unwrap();
        assert!(is_subquotient(&build_group("C4").unwrap(), &d8).unwrap());
        assert!(!is_subquotient(&build_group("Q8").unwrap(), &d8).unwrap());
        assert!(is_subquotient(&d8, &d8).unwrap());
        assert!(is_subquotient(&build_group("1").unwrap(), &d8).unwrap());
    }
}
