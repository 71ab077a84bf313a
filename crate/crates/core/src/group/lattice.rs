//! Subgroup lattices.

use std::collections::HashMap;

use super::{Caps, Elem, Group, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Lattice indices, ascending; the first is the representative.
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn rep(&self) -> usize {
        self.members[0]
    }
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All subgroups of a group, sorted by `(order, elements)`.
#[derive(Debug)]
pub struct Lattice {
    subs: Vec<Subgroup>,
    index: HashMap<Vec<Elem>, usize>,
    class_of: Vec<usize>,
    classes: Vec<ConjugacyClass>,
}

impl Lattice {
    pub(crate) fn enumerate(g: &Group) -> Result<Lattice> {
        let cap = Caps::subgroup_count();
        let mut index: HashMap<Vec<Elem>, usize> = HashMap::new();
        let mut subs: Vec<Subgroup> = Vec::new();
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut cyclic: Vec<(Elem, usize)> = Vec::new();
        let mut add = |s: Subgroup, gs: Vec<Elem>, subs: &mut Vec<Subgroup>, gens: &mut Vec<Vec<Elem>>| -> Result<Option<usize>> {
            if index.contains_key(s.elems()) {
                return Ok(None);
            }
            if subs.len() >= cap {
                return Err(Error::CapExceeded { what: "subgroup count", size: subs.len() + 1, cap });
            }
            index.insert(s.elems().to_vec(), subs.len());
            subs.push(s);
            gens.push(gs);
            Ok(Some(subs.len() - 1))
        };
        add(g.trivial(), vec![], &mut subs, &mut gens)?;
        for x in g.elements().skip(1) {
            if let Some(i) = add(g.closure(&[x]), vec![x], &mut subs, &mut gens)? {
                cyclic.push((x, i));
            }
        }
        let mut frontier: Vec<usize> = cyclic.iter().map(|&(_, i)| i).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &i in &frontier {
                for &(c, _) in &cyclic {
                    if subs[i].contains(c) {
                        continue;
                    }
                    let mut gs = gens[i].clone();
                    gs.push(c);
                    let j = g.closure_from(subs[i].elems(), &gs);
                    if let Some(k) = add(j, gs, &mut subs, &mut gens)? {
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        Ok(Lattice::finish(g, subs))
    }

    pub(crate) fn from_subgroups(g: &Group, lists: Vec<Vec<Elem>>) -> Result<Lattice> {
        let mut subs = Vec::with_capacity(lists.len());
        for l in lists {
            let s = g.subgroup(&l)?;
            subs.push(s);
        }
        let mut seen = std::collections::HashSet::new();
        if !subs.iter().all(|s| seen.insert(s.elems().to_vec())) {
            return Err(Error::Precondition("duplicate subgroup in lattice".into()));
        }
        if !seen.contains(&vec![0]) || !seen.contains(g.whole().elems()) {
            return Err(Error::Precondition("incomplete lattice".into()));
        }
        Ok(Lattice::finish(g, subs))
    }

    fn finish(g: &Group, mut subs: Vec<Subgroup>) -> Lattice {
        subs.sort();
        let index: HashMap<Vec<Elem>, usize> = subs.iter().enumerate().map(|(i, s)| (s.elems().to_vec(), i)).collect();
        let mut class_of = vec![usize::MAX; subs.len()];
        let mut classes = Vec::new();
        let ggens = g.generators().to_vec();
        for i in 0..subs.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![i];
            class_of[i] = c;
            // Orbit under conjugation, grown by the generators of G.
            let mut k = 0;
            while k < members.len() {
                let s = subs[members[k]].clone();
                for &x in &ggens {
                    let t = g.conjugate(&s, x);
                    let j = index[t.elems()];
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(ConjugacyClass { members });
        }
        Lattice { subs, index, class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }
    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }
    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s.elems()).copied()
    }
    pub fn index_of_elems(&self, e: &[Elem]) -> Option<usize> {
        self.index.get(e).copied()
    }
    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }
    pub fn is_normal(&self, i: usize) -> bool {
        self.classes[self.class_of[i]].size() == 1
    }
    /// Representatives of conjugacy classes, ascending.
    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.rep()).collect()
    }
    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.subs.len()).filter(|&i| self.is_normal(i)).collect()
    }
    /// Indices of subgroups contained in `t` (including `t` itself when it is in the lattice).
    pub fn below(&self, t: &Subgroup) -> Vec<usize> {
        (0..self.subs.len())
            .take_while(|&i| self.subs[i].order() <= t.order())
            .filter(|&i| self.subs[i].is_subset(t))
            .collect()
    }
    /// Indices of subgroups containing `k`.
    pub fn above(&self, k: &Subgroup) -> Vec<usize> {
        (0..self.subs.len())
            .filter(|&i| self.subs[i].order() >= k.order() && k.is_subset(&self.subs[i]))
            .collect()
    }

    /// Maximal subgroups of `t`.
    pub fn maximal_in(&self, t: &Subgroup) -> Vec<usize> {
        let inside: Vec<usize> = self.below(t).into_iter().filter(|&i| self.subs[i].order() < t.order()).collect();
        inside
            .iter()
            .copied()
            .filter(|&m| {
                !inside
                    .iter()
                    .any(|&l| self.subs[l].order() > self.subs[m].order() && self.subs[m].is_subset(&self.subs[l]))
            })
            .collect()
    }

    /// Intersection of the maximal subgroups of `t`.
    pub fn frattini_of(&self, g: &Group, t: &Subgroup) -> Subgroup {
        let maxes = self.maximal_in(t);
        let mut acc = t.clone();
        for m in maxes {
            acc = g.intersection(&acc, &self.subs[m]);
        }
        acc
    }
}
