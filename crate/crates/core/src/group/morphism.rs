//! Isomorphism tests and automorphism groups by generator-image search.

use std::collections::HashSet;
use std::sync::Arc;

use super::{Caps, Elem, Group, GroupMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub map: GroupMap,
    pub inner: bool,
}

fn centralizer_sizes(g: &Group) -> Vec<usize> {
    g.elements()
        .map(|x| g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count())
        .collect()
}

fn invariants_match(g: &Group, h: &Group) -> bool {
    g.order() == h.order()
        && g.order_profile() == h.order_profile()
        && g.is_abelian() == h.is_abelian()
        && g.center().order() == h.center().order()
        && g.derived().order() == h.derived().order()
}

struct Search<'a> {
    g: &'a Group,
    h: &'a Group,
    gens: Vec<Elem>,
    cands: Vec<Vec<Elem>>,
    images: Vec<Elem>,
    limit: usize,
    found: Vec<Vec<Elem>>,
}

impl Search<'_> {
    /// Extends the assignment of the first `k + 1` generators over the subgroup
    /// they generate; `None` if it is not a well-defined injective homomorphism.
    fn extend(&self, k: usize) -> Option<Vec<Elem>> {
        let n = self.g.order();
        let mut phi = vec![Elem::MAX; n];
        let mut used = vec![false; self.h.order()];
        phi[0] = 0;
        used[0] = true;
        let mut queue = vec![0 as Elem];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for i in 0..=k {
                let y = self.g.mul(x, self.gens[i]);
                let im = self.h.mul(phi[x as usize], self.images[i]);
                let slot = &mut phi[y as usize];
                if *slot == Elem::MAX {
                    if used[im as usize] {
                        return None;
                    }
                    used[im as usize] = true;
                    *slot = im;
                    queue.push(y);
                } else if *slot != im {
                    return None;
                }
            }
        }
        Some(phi)
    }

    fn run(&mut self, k: usize) -> bool {
        if k == self.gens.len() {
            return true;
        }
        for ci in 0..self.cands[k].len() {
            self.images[k] = self.cands[k][ci];
            if let Some(phi) = self.extend(k) {
                if k + 1 == self.gens.len() {
                    if phi.iter().all(|&x| x != Elem::MAX) {
                        self.found.push(phi);
                        if self.found.len() >= self.limit {
                            return false;
                        }
                    }
                } else if !self.run(k + 1) {
                    return false;
                }
            }
        }
        true
    }
}

fn search(g: &Group, h: &Group, limit: usize) -> Vec<Vec<Elem>> {
    if g.order() == 1 {
        return vec![vec![0]];
    }
    let gens = g.generators().to_vec();
    let cg = centralizer_sizes(g);
    let ch = centralizer_sizes(h);
    let cands = gens
        .iter()
        .map(|&x| {
            h.elements()
                .filter(|&y| h.elem_order(y) == g.elem_order(x) && ch[y as usize] == cg[x as usize])
                .collect()
        })
        .collect();
    let mut s = Search { g, h, images: vec![0; gens.len()], gens, cands, limit, found: Vec::new() };
    s.run(0);
    s.found
}

/// An explicit isomorphism `G → H`, or `None`.
pub fn is_isomorphic(g: &Group, h: &Group) -> Option<GroupMap> {
    if g.id() == h.id() {
        return Some(GroupMap::new_unchecked(g, h, g.elements().collect()));
    }
    if !invariants_match(g, h) {
        return None;
    }
    search(g, h, 1).pop().map(|images| GroupMap::new_unchecked(g, h, images))
}

/// The full automorphism group, inner automorphisms tagged.
pub fn automorphisms(g: &Group) -> Result<Arc<Vec<Automorphism>>> {
    if let Some(a) = g.cache.automorphisms.get() {
        return Ok(a.clone());
    }
    let cap = Caps::automorphism_order();
    if g.order() > cap {
        return Err(Error::CapExceeded { what: "automorphism search on a group", size: g.order(), cap });
    }
    let limit = Caps::automorphism_count();
    let found = search(g, g, limit + 1);
    if found.len() > limit {
        return Err(Error::CapExceeded { what: "automorphism count", size: found.len(), cap: limit });
    }
    let inner: HashSet<Vec<Elem>> = g.elements().map(|x| g.elements().map(|y| g.conj(x, y)).collect()).collect();
    let mut auts: Vec<Automorphism> = found
        .into_iter()
        .map(|images| Automorphism { inner: inner.contains(&images), map: GroupMap::new_unchecked(g, g, images) })
        .collect();
    auts.sort_by(|a, b| a.map.images().cmp(b.map.images()));
    let a = Arc::new(auts);
    Ok(g.cache.automorphisms.get_or_init(|| a).clone())
}

/// Installs an automorphism list loaded from a cache after validating it.
pub(crate) fn install_automorphisms(g: &Group, lists: Vec<(Vec<Elem>, bool)>) -> Result<()> {
    let mut auts = Vec::with_capacity(lists.len());
    for (images, inner) in lists {
        let map = GroupMap::new(g, g, images)?;
        if !(map.is_injective() && map.is_surjective()) {
            return Err(Error::Precondition("cached map is not bijective".into()));
        }
        auts.push(Automorphism { map, inner });
    }
    let _ = g.cache.automorphisms.set(Arc::new(auts));
    Ok(())
}

impl Group {
    pub fn install_automorphisms(&self, lists: Vec<(Vec<Elem>, bool)>) -> Result<()> {
        install_automorphisms(self, lists)
    }
    pub fn automorphisms_cached(&self) -> bool {
        self.cache.automorphisms.get().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, direct_product, cyclic};

    /// Counts bijections preserving the table, by brute force over generator images.
    fn brute_aut_count(g: &Group) -> usize {
        let gens = g.generators().to_vec();
        let n = g.order() as Elem;
        let mut count = 0;
        let mut imgs = vec![0; gens.len()];
        fn rec(g: &Group, gens: &[Elem], imgs: &mut Vec<Elem>, k: usize, n: Elem, count: &mut usize) {
            if k == gens.len() {
                let mut phi = vec![Elem::MAX; g.order()];
                phi[0] = 0;
                let mut q = vec![0];
                let mut i = 0;
                while i < q.len() {
                    let x = q[i];
                    i += 1;
                    for (j, &s) in gens.iter().enumerate() {
                        let y = g.mul(x, s);
                        let im = g.mul(phi[x as usize], imgs[j]);
                        if phi[y as usize] == Elem::MAX {
                            phi[y as usize] = im;
                            q.push(y);
                        } else if phi[y as usize] != im {
                            return;
                        }
                    }
                }
                let set: HashSet<_> = phi.iter().collect();
                if set.len() == g.order() {
                    *count += 1;
                }
                return;
            }
            for y in 0..n {
                imgs[k] = y;
                rec(g, gens, imgs, k + 1, n, count);
            }
        }
        rec(g, &gens, &mut imgs, 0, n, &mut count);
        count
    }

    #[test]
    fn automorphism_counts() {
        let v = build_group("C2 x C2").unwrap();
        assert_eq!(automorphisms(&v).unwrap().len(), 6);
        assert_eq!(automorphisms(&cyclic(8)).unwrap().len(), 4);
        for p in [2, 3, 5] {
            assert_eq!(automorphisms(&cyclic(p)).unwrap().len(), p - 1);
        }
        for s in ["D8", "Q8", "C2 x C4", "C3 x C3"] {
            let g = build_group(s).unwrap();
            assert_eq!(automorphisms(&g).unwrap().len(), brute_aut_count(&g), "{s}");
        }
    }

    #[test]
    fn inner_automorphisms_form_normal_subgroup() {
        let g = build_group("D8").unwrap();
        let auts = automorphisms(&g).unwrap();
        let inner: Vec<_> = auts.iter().filter(|a| a.inner).collect();
        assert_eq!(inner.len(), 4);
        assert_eq!(auts.len() / inner.len(), 2);
        for a in auts.iter() {
            let ai = a.map.inverse().unwrap();
            for b in &inner {
                let c = a.map.compose(&b.map).compose(&ai);
                assert!(inner.iter().any(|x| x.map == c));
            }
            for b in auts.iter() {
                let c = a.map.compose(&b.map);
                assert!(auts.iter().any(|x| x.map == c));
            }
        }
    }

    #[test]
    fn isomorphism_tests() {
        let d8 = build_group("D8").unwrap();
        let q8 = build_group("Q8").unwrap();
        assert!(is_isomorphic(&d8, &q8).is_none());
        let a = direct_product(&cyclic(2), &cyclic(4)).unwrap();
        let b = direct_product(&cyclic(4), &cyclic(2)).unwrap();
        let f = is_isomorphic(&a, &b).unwrap();
        assert!(GroupMap::new(&a, &b, f.images().to_vec()).is_ok());
        let cp1 = build_group("cp(Q8@center-involution, C4@2)").unwrap();
        let cp2 = build_group("cp(D8@center-involution, C4@2)").unwrap();
        assert!(is_isomorphic(&cp1, &cp2).is_some());
        assert!(is_isomorphic(&build_group("C4 x C4").unwrap(), &build_group("C2 x C8").unwrap()).is_none());
    }

    #[test]
    fn automorphism_cap() {
        let g = build_group("C2 x C4 x C8").unwrap();
        assert!(matches!(automorphisms(&g), Err(Error::CapExceeded { .. })));
    }
}
