//! Linear characters with values in ℚ/ℤ and the pair posets built from them.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::{precondition, Result};
use crate::group::{automorphisms, Elem, Group, GroupId, GroupMap, Subgroup};
use crate::phase::Phase;

/// A homomorphism `U → ℚ/ℤ`, stored as the value list aligned with `U`'s sorted elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    domain: Subgroup,
    values: Vec<Phase>,
}

impl Character {
    pub fn trivial(domain: Subgroup) -> Character {
        let values = vec![Phase::ZERO; domain.order()];
        Character { domain, values }
    }

    /// Validates the homomorphism property.
    pub fn new(g: &Group, domain: Subgroup, values: Vec<Phase>) -> Result<Character> {
        if values.len() != domain.order() {
            return precondition("character value list has the wrong length");
        }
        let c = Character { domain, values };
        if !c.is_homomorphism(g) {
            return precondition("values do not define a homomorphism");
        }
        Ok(c)
    }

    pub(crate) fn from_parts(domain: Subgroup, values: Vec<Phase>) -> Character {
        Character { domain, values }
    }

    /// Extends values given on generators; `None` if inconsistent.
    pub fn from_generators(g: &Group, domain: Subgroup, gens: &[(Elem, Phase)]) -> Option<Character> {
        let pos = domain.position_map(g.order());
        let mut vals: Vec<Option<Phase>> = vec![None; domain.order()];
        vals[0] = Some(Phase::ZERO);
        let mut queue = vec![0 as Elem];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let vx = vals[pos[x as usize] as usize].unwrap();
            for &(s, vs) in gens {
                let y = g.mul(x, s);
                let py = pos[y as usize];
                if py == Elem::MAX {
                    return None;
                }
                let v = vx + vs;
                match vals[py as usize] {
                    None => {
                        vals[py as usize] = Some(v);
                        queue.push(y);
                    }
                    Some(w) if w != v => return None,
                    _ => {}
                }
            }
        }
        let values: Option<Vec<Phase>> = vals.into_iter().collect();
        Some(Character { domain, values: values? })
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }
    pub fn values(&self) -> &[Phase] {
        &self.values
    }
    pub fn value(&self, x: Elem) -> Phase {
        self.values[self.domain.index_of(x).expect("element outside the character's domain")]
    }
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_homomorphism(&self, g: &Group) -> bool {
        let pos = self.domain.position_map(g.order());
        let e = self.domain.elems();
        e.iter().enumerate().all(|(i, &a)| {
            e.iter().enumerate().all(|(j, &b)| {
                let p = pos[g.mul(a, b) as usize];
                p != Elem::MAX && self.values[p as usize] == self.values[i] + self.values[j]
            })
        })
    }

    pub fn product(&self, other: &Character) -> Result<Character> {
        if self.domain != other.domain {
            return precondition("product of characters on different domains");
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Ok(Character { domain: self.domain.clone(), values })
    }

    pub fn inverse(&self) -> Character {
        Character { domain: self.domain.clone(), values: self.values.iter().map(|&v| -v).collect() }
    }

    pub fn restrict(&self, v: &Subgroup) -> Result<Character> {
        if !v.is_subset(&self.domain) {
            return precondition("restriction to a subgroup outside the domain");
        }
        let values = v.elems().iter().map(|&x| self.value(x)).collect();
        Ok(Character { domain: v.clone(), values })
    }

    /// Pullback along a surjection `π: G → Q`; the domain becomes `π⁻¹(dom χ̄)`.
    pub fn inflate(&self, g: &Group, pi: &GroupMap) -> Result<Character> {
        if !pi.is_surjective() || pi.src() != g.id() || pi.dst() != self.domain.parent() {
            return precondition("inflation needs a surjection onto the character's group");
        }
        let domain = pi.preimage(g, &self.domain);
        let values = domain.elems().iter().map(|&x| self.value(pi.apply(x))).collect();
        Ok(Character { domain, values })
    }

    /// `χ ∘ f` on `f⁻¹(dom χ)` for an arbitrary homomorphism `f: G → domain's parent`.
    pub fn pullback(&self, g: &Group, f: &GroupMap) -> Character {
        let domain = f.preimage(g, &self.domain);
        let values = domain.elems().iter().map(|&x| self.value(f.apply(x))).collect();
        Character { domain, values }
    }

    /// Transport along an isomorphism: `χ ∘ f⁻¹` on `f(dom χ)`.
    pub fn transport(&self, g: &Group, h: &Group, f: &GroupMap) -> Character {
        let domain = f.image(g, h, &self.domain);
        let inv = f.inverse().expect("transport needs an isomorphism");
        let values = domain.elems().iter().map(|&y| self.value(inv.apply(y))).collect();
        Character { domain, values }
    }

    pub fn kernel(&self, g: &Group) -> Subgroup {
        let v: Vec<Elem> = self
            .domain
            .elems()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_zero())
            .map(|(&x, _)| x)
            .collect();
        g.subgroup(&v).expect("kernel is a subgroup")
    }

    pub fn is_faithful(&self) -> bool {
        self.values.iter().filter(|v| v.is_zero()).count() == 1
    }

    /// Invariance under conjugation by every element of `by`.
    pub fn is_invariant(&self, g: &Group, by: &Subgroup) -> bool {
        let gens = g.subgroup_generators(by);
        gens.iter().all(|&x| {
            self.domain.elems().iter().zip(&self.values).all(|(&k, &v)| {
                let c = g.conj(x, k);
                self.domain.contains(c) && self.value(c) == v
            })
        })
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u32 {
        crate::phase::common_order(&self.values)
    }
}

type HomKey = (GroupId, Vec<Elem>);
static HOM_CACHE: OnceLock<DashMap<HomKey, Arc<Vec<Character>>>> = OnceLock::new();

/// All characters of `U`, sorted by value list.
pub fn hom_group(g: &Group, u: &Subgroup) -> Arc<Vec<Character>> {
    let cache = HOM_CACHE.get_or_init(DashMap::new);
    let key = (g.id(), u.elems().to_vec());
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let gens = g.subgroup_generators(u);
    let mut out = Vec::new();
    let mut assign: Vec<(Elem, Phase)> = Vec::with_capacity(gens.len());
    enumerate(g, u, &gens, &mut assign, &mut out);
    out.sort();
    let v = Arc::new(out);
    cache.entry(key).or_insert(v).clone()
}

fn enumerate(g: &Group, u: &Subgroup, gens: &[Elem], assign: &mut Vec<(Elem, Phase)>, out: &mut Vec<Character>) {
    let k = assign.len();
    if k == gens.len() {
        if let Some(c) = Character::from_generators(g, u.clone(), assign) {
            out.push(c);
        }
        return;
    }
    let n = g.elem_order(gens[k]);
    for j in 0..n {
        assign.push((gens[k], Phase::new(j as i64, n)));
        let prefix = g.closure(&gens[..=k]);
        if Character::from_generators(g, prefix, assign).is_some() {
            enumerate(g, u, gens, assign, out);
        }
        assign.pop();
    }
}

/// An element `(K, κ)` of the poset of pairs with `K ⊴ G` and `κ` `G`-invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairTag {
    pub k: Subgroup,
    pub kappa: Character,
}

impl PairTag {
    pub fn new(g: &Group, k: Subgroup, kappa: Character) -> Result<PairTag> {
        if kappa.domain() != &k {
            return precondition("character is not defined on K");
        }
        if !g.is_normal(&k) {
            return precondition("K is not normal");
        }
        if !kappa.is_invariant(g, &g.whole()) {
            return precondition("character is not G-invariant");
        }
        Ok(PairTag { k, kappa })
    }

    pub fn trivial(g: &Group) -> PairTag {
        let k = g.trivial();
        PairTag { kappa: Character::trivial(k.clone()), k }
    }

    /// `(K, κ) ≤ (L, λ)` iff `K ≤ L` and `λ|_K = κ`.
    pub fn leq(&self, other: &PairTag) -> bool {
        self.k.is_subset(&other.k) && self.k.elems().iter().zip(self.kappa.values()).all(|(&x, &v)| other.kappa.value(x) == v)
    }

    /// `ψ·(K, κ) = (ψ(K), κ∘ψ⁻¹)`.
    pub fn act(&self, g: &Group, psi: &GroupMap) -> PairTag {
        let kappa = self.kappa.transport(g, g, psi);
        PairTag { k: kappa.domain().clone(), kappa }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosetVariant {
    All,
    Frattini,
    FaithfulFrattini,
}

/// Pairs of a variant, ascending, with the strict order relation as an edge list.
#[derive(Clone, Debug)]
pub struct PairPoset {
    pub tags: Vec<PairTag>,
    /// `(i, j)` with `tags[i] < tags[j]`.
    pub edges: Vec<(usize, usize)>,
}

impl PairPoset {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.edges.binary_search(&(i, j)).is_ok()
    }
    pub fn position(&self, t: &PairTag) -> Option<usize> {
        self.tags.binary_search(t).ok()
    }
}

pub fn pair_poset(g: &Group, variant: PosetVariant) -> Result<PairPoset> {
    let lat = g.lattice()?;
    let phi = match variant {
        PosetVariant::All => g.whole(),
        _ => g.frattini()?,
    };
    let whole = g.whole();
    let mut tags = Vec::new();
    for i in lat.normal_subgroups() {
        let k = lat.get(i);
        if !k.is_subset(&phi) {
            continue;
        }
        for kappa in hom_group(g, k).iter() {
            if variant == PosetVariant::FaithfulFrattini && !kappa.is_faithful() {
                continue;
            }
            if kappa.is_invariant(g, &whole) {
                tags.push(PairTag { k: k.clone(), kappa: kappa.clone() });
            }
        }
    }
    tags.sort();
    let mut edges = Vec::new();
    for i in 0..tags.len() {
        for j in 0..tags.len() {
            if i != j && tags[i].leq(&tags[j]) {
                edges.push((i, j));
            }
        }
    }
    Ok(PairPoset { tags, edges })
}

/// The orbit of a tag under `Aut(G)`, ascending; the first entry is the representative.
pub fn out_orbit(g: &Group, tag: &PairTag) -> Result<Vec<PairTag>> {
    if tag.k.is_trivial() {
        return Ok(vec![tag.clone()]);
    }
    let auts = automorphisms(g)?;
    let set: BTreeSet<PairTag> = auts.iter().filter(|a| !a.inner).map(|a| tag.act(g, &a.map)).chain([tag.clone()]).collect();
    Ok(set.into_iter().collect())
}

/// Partition of a poset variant into `Aut(G)`-orbits.
pub fn out_orbits(g: &Group, variant: PosetVariant) -> Result<Vec<Vec<PairTag>>> {
    let poset = pair_poset(g, variant)?;
    let mut seen = vec![false; poset.tags.len()];
    let mut orbits = Vec::new();
    for i in 0..poset.tags.len() {
        if seen[i] {
            continue;
        }
        let orbit = out_orbit(g, &poset.tags[i])?;
        for t in &orbit {
            if let Some(j) = poset.position(t) {
                seen[j] = true;
            }
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn character_counts_match_abelianisation() {
        for s in ["C1", "C5", "C6", "D8", "Q8", "C2 x C4", "D6", "X(3,1,+)", "C3 x C3"] {
            let g = build_group(s).unwrap();
            let u = g.whole();
            let chars = hom_group(&g, &u);
            assert_eq!(chars.len(), g.order() / g.derived().order(), "{s}");
            assert!(chars.iter().all(|c| c.is_homomorphism(&g)));
        }
    }

    #[test]
    fn cyclic_duality() {
        let c4 = build_group("C4").unwrap();
        let chars = hom_group(&c4, &c4.whole());
        let gen_values: Vec<String> = chars.iter().map(|c| c.value(1).to_string()).collect();
        assert_eq!(gen_values, ["0/1", "1/4", "1/2", "3/4"]);
    }

    #[test]
    fn operations() {
        let c4 = build_group("C4").unwrap();
        let chars = hom_group(&c4, &c4.whole());
        let faithful = &chars[1];
        assert!(faithful.product(&faithful.inverse()).unwrap().is_trivial());
        assert!(faithful.kernel(&c4).is_trivial());
        let sq = faithful.product(faithful).unwrap();
        assert_eq!(sq.kernel(&c4).order(), 2);
        assert!(faithful.is_invariant(&c4, &c4.whole()));
        let c2 = c4.closure(&[2]);
        assert!(!faithful.restrict(&c2).unwrap().is_trivial());
        assert!(sq.restrict(&c2).unwrap().is_trivial());
    }

    #[test]
    fn inflate_then_restrict() {
        let d8 = build_group("D8").unwrap();
        let z = d8.center();
        let (q, pi) = d8.quotient(&z, "D8/Z").unwrap();
        for chi in hom_group(&q, &q.whole()).iter() {
            let inf = chi.inflate(&d8, &pi).unwrap();
            assert!(inf.is_homomorphism(&d8));
            for &x in d8.whole().elems() {
                assert_eq!(inf.value(x), chi.value(pi.apply(x)));
            }
        }
    }

    #[test]
    fn posets() {
        let c3 = build_group("C3").unwrap();
        assert_eq!(pair_poset(&c3, PosetVariant::Frattini).unwrap().tags.len(), 1);
        let c4 = build_group("C4").unwrap();
        let p = pair_poset(&c4, PosetVariant::Frattini).unwrap();
        assert_eq!(p.tags.len(), 3);
        assert!(p.leq(0, 1) && p.leq(0, 2) && !p.leq(1, 2));
        let q8 = build_group("Q8").unwrap();
        let f = pair_poset(&q8, PosetVariant::FaithfulFrattini).unwrap();
        assert_eq!(f.tags.len(), 2);
        assert_eq!(f.tags[1].k, q8.center());
        let all = pair_poset(&build_group("D8").unwrap(), PosetVariant::All).unwrap();
        for &(i, j) in &all.edges {
            assert!(!all.leq(j, i));
            for &(a, b) in &all.edges {
                if a == j {
                    assert!(all.leq(i, b));
                }
            }
        }
        assert!((1..all.tags.len()).all(|j| all.leq(0, j)));
    }

    #[test]
    fn orbits() {
        let c4 = build_group("C4").unwrap();
        for t in pair_poset(&c4, PosetVariant::Frattini).unwrap().tags {
            assert_eq!(out_orbit(&c4, &t).unwrap().len(), 1);
        }
        let q8 = build_group("Q8").unwrap();
        let o = out_orbits(&q8, PosetVariant::FaithfulFrattini).unwrap();
        assert_eq!(o.iter().map(|x| x.len()).collect::<Vec<_>>(), vec![1, 1]);
        let c8 = build_group("C8").unwrap();
        let o = out_orbits(&c8, PosetVariant::FaithfulFrattini).unwrap();
        // (1,1), (C2, σ), and one orbit of the two faithful characters of C4.
        assert_eq!(o.iter().map(|x| x.len()).collect::<Vec<_>>(), vec![1, 1, 2]);
        let c33 = build_group("C3 x C3").unwrap();
        assert_eq!(out_orbits(&c33, PosetVariant::Frattini).unwrap().len(), 1);
    }
}
