//! Finite groups as Cayley tables.

mod build;
mod lattice;
mod morphism;
mod sections;

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{precondition, Error, Result};

pub use build::{build_group, central_product, cyclic, dihedral, extraspecial, heisenberg, modular, quaternion, semidihedral, semidirect, split_extension, trivial_group};
pub use lattice::{ConjugacyClass, Lattice};
pub use morphism::{automorphisms, is_isomorphic, Automorphism};
pub use sections::{goursat, is_subquotient, minimal_sections, Goursat, MinimalSection, Section};
pub(crate) use sections::goursat_of_codes;

/// Element ids. Element 0 is always the identity.
pub type Elem = u16;

/// Largest order a group table may have.
pub const HARD_ORDER_CAP: usize = 4096;
/// Largest order whose subgroup lattice may be enumerated.
pub const HARD_LATTICE_CAP: usize = 256;

static LATTICE_CAP: AtomicUsize = AtomicUsize::new(HARD_LATTICE_CAP);
static PRODUCT_CAP: AtomicUsize = AtomicUsize::new(HARD_ORDER_CAP);
static AUT_ORDER_CAP: AtomicUsize = AtomicUsize::new(32);
static AUT_COUNT_CAP: AtomicUsize = AtomicUsize::new(50_000);
static SUBGROUP_COUNT_CAP: AtomicUsize = AtomicUsize::new(200_000);

/// Runtime caps. Each setter clamps to the corresponding hard limit.
pub struct Caps;

impl Caps {
    pub fn lattice() -> usize {
        LATTICE_CAP.load(Ordering::Relaxed)
    }
    pub fn set_lattice(n: usize) {
        LATTICE_CAP.store(n.min(HARD_LATTICE_CAP), Ordering::Relaxed);
    }
    pub fn product() -> usize {
        PRODUCT_CAP.load(Ordering::Relaxed)
    }
    pub fn set_product(n: usize) {
        PRODUCT_CAP.store(n.min(HARD_ORDER_CAP), Ordering::Relaxed);
    }
    pub fn automorphism_order() -> usize {
        AUT_ORDER_CAP.load(Ordering::Relaxed)
    }
    pub fn set_automorphism_order(n: usize) {
        AUT_ORDER_CAP.store(n.min(256), Ordering::Relaxed);
    }
    pub fn automorphism_count() -> usize {
        AUT_COUNT_CAP.load(Ordering::Relaxed)
    }
    pub fn subgroup_count() -> usize {
        SUBGROUP_COUNT_CAP.load(Ordering::Relaxed)
    }
}

/// Content hash of a Cayley table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupId(pub u64);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

fn table_id(order: usize, table: &[Elem]) -> GroupId {
    let mut h = Sha256::new();
    h.update((order as u64).to_le_bytes());
    for &x in table {
        h.update(x.to_le_bytes());
    }
    let d = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&d[..8]);
    GroupId(u64::from_be_bytes(b))
}

#[derive(Default)]
pub(crate) struct Cache {
    orders: OnceLock<Vec<u32>>,
    generators: OnceLock<Vec<Elem>>,
    lattice: OnceLock<Arc<Lattice>>,
    structural: OnceLock<Structural>,
    automorphisms: OnceLock<Arc<Vec<Automorphism>>>,
}

/// Center, derived subgroup, Frattini subgroup and Ω₁Z.
#[derive(Clone, Debug)]
pub struct Structural {
    pub center: Subgroup,
    pub derived: Subgroup,
    pub frattini: Subgroup,
    pub omega1_center: Option<Subgroup>,
}

pub struct Group {
    id: GroupId,
    order: usize,
    table: Vec<Elem>,
    inv: Vec<Elem>,
    name: String,
    prime_hint: Option<u32>,
    factors: Option<(Arc<Group>, Arc<Group>)>,
    pub(crate) cache: Cache,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({} of order {}, id {})", self.name, self.order, self.id)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Group {}

pub(crate) fn prime_power(n: usize) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p as u32, k))
}

impl Group {
    /// Validates a user supplied table: identity at 0, Latin square, associativity.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<Elem>) -> Result<Arc<Group>> {
        if order == 0 || order > HARD_ORDER_CAP {
            return Err(Error::InvalidTable(format!("order {order} out of range")));
        }
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for i in 0..order {
            if table[i] as usize != i || table[i * order] as usize != i {
                return Err(Error::InvalidTable("element 0 is not the identity".into()));
            }
        }
        let mut seen = vec![0usize; order];
        for r in 0..order {
            for c in 0..order {
                let v = table[r * order + c] as usize;
                if seen[v] == r * 2 + 1 {
                    return Err(Error::InvalidTable(format!("row {r} is not a permutation")));
                }
                seen[v] = r * 2 + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for c in 0..order {
            for r in 0..order {
                let v = table[r * order + c] as usize;
                if seen[v] == c * 2 + 1 {
                    return Err(Error::InvalidTable(format!("column {c} is not a permutation")));
                }
                seen[v] = c * 2 + 1;
            }
        }
        let g = Group::new_unchecked(name.into(), order, table, None);
        g.check_associative()?;
        Ok(Arc::new(g))
    }

    pub(crate) fn new_unchecked(
        name: String,
        order: usize,
        table: Vec<Elem>,
        factors: Option<(Arc<Group>, Arc<Group>)>,
    ) -> Group {
        let mut inv = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inv[a] = b as Elem;
                    break;
                }
            }
        }
        Group {
            id: table_id(order, &table),
            order,
            prime_hint: prime_power(order).map(|(p, _)| p),
            table,
            inv,
            name,
            factors,
            cache: Cache::default(),
        }
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})"))
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.table[a * n + b] as usize;
                    for c in 0..n {
                        let bc = self.table[b * n + c] as usize;
                        if self.table[ab * n + c] != self.table[a * n + bc] {
                            return Err(bad(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let ab = self.table[a * n + b] as usize;
                let bc = self.table[b * n + c] as usize;
                if self.table[ab * n + c] != self.table[a * n + bc] {
                    return Err(bad(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Same table under a different display name.
    pub fn renamed(&self, name: impl Into<String>) -> Arc<Group> {
        let mut g = Group::new_unchecked(name.into(), self.order, self.table.clone(), self.factors.clone());
        g.prime_hint = self.prime_hint;
        Arc::new(g)
    }

    pub fn id(&self) -> GroupId {
        self.id
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn prime_hint(&self) -> Option<u32> {
        self.prime_hint
    }
    pub fn table(&self) -> &[Elem] {
        &self.table
    }
    /// The two factors when this group was built as a direct product.
    pub fn factors(&self) -> Option<&(Arc<Group>, Arc<Group>)> {
        self.factors.as_ref()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }
    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }
    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }
    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let o = self.elem_order(a) as i64;
        let mut e = k.rem_euclid(o);
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|x| x as Elem)
    }

    pub fn orders(&self) -> &[u32] {
        self.cache.orders.get_or_init(|| {
            (0..self.order)
                .map(|a| {
                    let mut x = a as Elem;
                    let mut k = 1;
                    while x != 0 {
                        x = self.mul(x, a as Elem);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn elem_order(&self, a: Elem) -> u32 {
        self.orders()[a as usize]
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<u32> {
        let mut v = self.orders().to_vec();
        v.sort_unstable();
        v
    }

    pub fn exponent(&self) -> u32 {
        self.orders().iter().fold(1u32, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders().iter().any(|&o| o as usize == self.order)
    }

    /// Greedy generating set: elements by descending order, ties by id.
    pub fn generators(&self) -> &[Elem] {
        self.cache
            .generators
            .get_or_init(|| greedy_generators(self, &(0..self.order as Elem).collect::<Vec<_>>()))
    }

    // ---- subgroups ----

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.id, self.order, (0..self.order as Elem).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(self.id, self.order, vec![0])
    }

    pub fn closure(&self, gens: &[Elem]) -> Subgroup {
        self.closure_from(&[0], gens)
    }

    /// Smallest subgroup containing `seed` (assumed closed or not) and `gens`.
    pub(crate) fn closure_from(&self, seed: &[Elem], gens: &[Elem]) -> Subgroup {
        let mut bits = vec![0u64; self.order / 64 + 1];
        let mut elems = Vec::with_capacity(seed.len() * 2);
        let mut queue = VecDeque::new();
        let mut gs: Vec<Elem> = seed.iter().chain(gens).copied().filter(|&x| x != 0).collect();
        gs.sort_unstable();
        gs.dedup();
        let push = |x: Elem, bits: &mut Vec<u64>, elems: &mut Vec<Elem>, q: &mut VecDeque<Elem>| {
            let (w, b) = (x as usize / 64, x as usize % 64);
            if bits[w] >> b & 1 == 0 {
                bits[w] |= 1 << b;
                elems.push(x);
                q.push_back(x);
            }
        };
        push(0, &mut bits, &mut elems, &mut queue);
        for &s in seed {
            push(s, &mut bits, &mut elems, &mut queue);
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gs {
                push(self.mul(x, g), &mut bits, &mut elems, &mut queue);
            }
        }
        elems.sort_unstable();
        Subgroup { parent: self.id, elems, bits }
    }

    /// Checks closure and returns the subgroup.
    pub fn subgroup(&self, elems: &[Elem]) -> Result<Subgroup> {
        let mut v = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.first() != Some(&0) || v.iter().any(|&x| x as usize >= self.order) {
            return precondition("subgroup must contain the identity and valid ids");
        }
        let s = Subgroup::from_sorted(self.id, self.order, v);
        for &a in s.elems() {
            for &b in s.elems() {
                if !s.contains(self.mul(a, b)) {
                    return precondition("element list is not closed under multiplication");
                }
            }
        }
        Ok(s)
    }

    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<Elem> {
        greedy_generators(self, h.elems())
    }

    pub fn conjugate(&self, h: &Subgroup, g: Elem) -> Subgroup {
        let mut v: Vec<Elem> = h.elems().iter().map(|&x| self.conj(g, x)).collect();
        v.sort_unstable();
        Subgroup::from_sorted(self.id, self.order, v)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        self.generators()
            .iter()
            .all(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    /// Whether `h` is normalised by every element of `k`.
    pub fn normalizes(&self, k: &Subgroup, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        let kg = self.subgroup_generators(k);
        kg.iter().all(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let hg = self.subgroup_generators(h);
        let v: Vec<Elem> = self
            .elements()
            .filter(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x))))
            .collect();
        Subgroup::from_sorted(self.id, self.order, v)
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let hg = self.subgroup_generators(h);
        let v: Vec<Elem> = self
            .elements()
            .filter(|&g| hg.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        Subgroup::from_sorted(self.id, self.order, v)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let v: Vec<Elem> = a.elems().iter().copied().filter(|&x| b.contains(x)).collect();
        Subgroup::from_sorted(self.id, self.order, v)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = self.subgroup_generators(a);
        gens.extend(self.subgroup_generators(b));
        self.closure(&gens)
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.whole())
    }

    pub fn derived(&self) -> Subgroup {
        let n = self.order as Elem;
        let mut comms: Vec<Elem> = Vec::new();
        let gens = self.generators();
        // The derived subgroup is the normal closure of commutators of generators.
        for &a in gens {
            for &b in gens {
                comms.push(self.commutator(a, b));
            }
        }
        let mut d = self.closure(&comms);
        loop {
            let extra: Vec<Elem> = (0..n)
                .flat_map(|g| d.elems().iter().map(move |&x| (g, x)))
                .map(|(g, x)| self.conj(g, x))
                .filter(|&y| !d.contains(y))
                .collect();
            if extra.is_empty() {
                return d;
            }
            d = self.closure_from(d.elems(), &extra);
        }
    }

    /// Elements `x` of the center with `x^p = 1`.
    pub fn omega1_center(&self, p: Option<u32>) -> Result<Subgroup> {
        let p = match p.or(self.prime_hint) {
            Some(p) => p,
            None if self.order == 1 => return Ok(self.trivial()),
            None => return precondition("omega1_center needs a prime for a non-p-group"),
        };
        let z = self.center();
        let v: Vec<Elem> = z
            .elems()
            .iter()
            .copied()
            .filter(|&x| self.pow(x, p as i64) == 0)
            .collect();
        Ok(Subgroup::from_sorted(self.id, self.order, v))
    }

    pub fn structural(&self) -> Result<&Structural> {
        if let Some(s) = self.cache.structural.get() {
            return Ok(s);
        }
        let lat = self.lattice()?;
        let s = Structural {
            center: self.center(),
            derived: self.derived(),
            frattini: lat.frattini_of(self, &self.whole()),
            omega1_center: self.omega1_center(None).ok(),
        };
        Ok(self.cache.structural.get_or_init(|| s))
    }

    pub fn frattini(&self) -> Result<Subgroup> {
        Ok(self.structural()?.frattini.clone())
    }

    pub fn lattice(&self) -> Result<Arc<Lattice>> {
        if let Some(l) = self.cache.lattice.get() {
            return Ok(l.clone());
        }
        let cap = Caps::lattice();
        if self.order > cap {
            return Err(Error::CapExceeded { what: "subgroup lattice of a group", size: self.order, cap });
        }
        let l = Arc::new(Lattice::enumerate(self)?);
        Ok(self.cache.lattice.get_or_init(|| l).clone())
    }

    /// Installs a lattice loaded from elsewhere (e.g. a disk cache).
    pub fn install_lattice(&self, subgroups: Vec<Vec<Elem>>) -> Result<()> {
        let l = Lattice::from_subgroups(self, subgroups)?;
        let _ = self.cache.lattice.set(Arc::new(l));
        Ok(())
    }

    pub fn lattice_cached(&self) -> bool {
        self.cache.lattice.get().is_some()
    }

    // ---- derived groups ----

    /// The subgroup as a group in its own right, numbered by sorted order,
    /// together with its inclusion map.
    pub fn subgroup_as_group(&self, h: &Subgroup, name: impl Into<String>) -> (Arc<Group>, GroupMap) {
        let m = h.order();
        let pos = h.position_map(self.order);
        let mut table = Vec::with_capacity(m * m);
        for &a in h.elems() {
            for &b in h.elems() {
                table.push(pos[self.mul(a, b) as usize]);
            }
        }
        let g = intern(Arc::new(Group::new_unchecked(name.into(), m, table, None)));
        let map = GroupMap::new_unchecked(&g, self, h.elems().to_vec());
        (g, map)
    }

    /// Quotient by a normal subgroup; cosets are numbered by their least element.
    pub fn quotient(&self, n: &Subgroup, name: impl Into<String>) -> Result<(Arc<Group>, GroupMap)> {
        if !self.is_normal(n) {
            return precondition("quotient by a non-normal subgroup");
        }
        let mut coset = vec![Elem::MAX; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if coset[g as usize] != Elem::MAX {
                continue;
            }
            let c = reps.len() as Elem;
            reps.push(g);
            for &x in n.elems() {
                coset[self.mul(g, x) as usize] = c;
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(coset[self.mul(a, b) as usize]);
            }
        }
        let q = intern(Arc::new(Group::new_unchecked(name.into(), m, table, None)));
        let map = GroupMap::new_unchecked(self, &q, coset);
        Ok((q, map))
    }

    /// Product element code of `(g, h)` in `G × H` where `self = G` and `|H| = h_order`.
    #[inline]
    pub fn pair_code(g: Elem, h: Elem, h_order: usize) -> Elem {
        (g as usize * h_order + h as usize) as Elem
    }
}

pub(crate) fn greedy_generators(g: &Group, elems: &[Elem]) -> Vec<Elem> {
    let mut cand: Vec<Elem> = elems.iter().copied().filter(|&x| x != 0).collect();
    cand.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
    let mut gens = Vec::new();
    let mut cur = g.trivial();
    for x in cand {
        if cur.order() == elems.len() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = g.closure_from(cur.elems(), &gens);
        }
    }
    gens
}

/// A subgroup as a sorted element list with a membership bitset.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: GroupId,
    elems: Vec<Elem>,
    bits: Vec<u64>,
}

impl Subgroup {
    pub(crate) fn from_sorted(parent: GroupId, parent_order: usize, elems: Vec<Elem>) -> Subgroup {
        let mut bits = vec![0u64; parent_order / 64 + 1];
        for &x in &elems {
            bits[x as usize / 64] |= 1 << (x % 64);
        }
        Subgroup { parent, elems, bits }
    }

    pub fn parent(&self) -> GroupId {
        self.parent
    }
    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }
    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        let w = x as usize / 64;
        w < self.bits.len() && self.bits[w] >> (x % 64) & 1 == 1
    }
    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elems.len() <= other.elems.len()
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
    /// Position of each parent element in `elems`, or `Elem::MAX`.
    pub fn position_map(&self, parent_order: usize) -> Vec<Elem> {
        let mut pos = vec![Elem::MAX; parent_order];
        for (i, &x) in self.elems.iter().enumerate() {
            pos[x as usize] = i as Elem;
        }
        pos
    }
    pub fn index_of(&self, x: Elem) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elems == other.elems
    }
}
impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parent.hash(state);
        self.elems.hash(state);
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elems.len(), &self.elems).cmp(&(other.elems.len(), &other.elems))
    }
}
impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A homomorphism given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupMap {
    src: GroupId,
    dst: GroupId,
    images: Vec<Elem>,
    injective: bool,
    surjective: bool,
}

impl GroupMap {
    pub fn new(src: &Group, dst: &Group, images: Vec<Elem>) -> Result<GroupMap> {
        if images.len() != src.order() || images.iter().any(|&x| x as usize >= dst.order()) {
            return precondition("image list has the wrong shape");
        }
        for a in src.elements() {
            for b in src.elements() {
                if images[src.mul(a, b) as usize] != dst.mul(images[a as usize], images[b as usize]) {
                    return precondition(format!("not a homomorphism at ({a}, {b})"));
                }
            }
        }
        Ok(GroupMap::new_unchecked(src, dst, images))
    }

    pub(crate) fn new_unchecked(src: &Group, dst: &Group, images: Vec<Elem>) -> GroupMap {
        let mut hit = vec![false; dst.order()];
        for &x in &images {
            hit[x as usize] = true;
        }
        let count = hit.iter().filter(|&&b| b).count();
        GroupMap {
            src: src.id(),
            dst: dst.id(),
            injective: count == src.order(),
            surjective: count == dst.order(),
            images,
        }
    }

    pub fn identity(g: &Group) -> GroupMap {
        GroupMap::new_unchecked(g, g, g.elements().collect())
    }

    pub fn src(&self) -> GroupId {
        self.src
    }
    pub fn dst(&self) -> GroupId {
        self.dst
    }
    pub fn images(&self) -> &[Elem] {
        &self.images
    }
    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }
    pub fn is_injective(&self) -> bool {
        self.injective
    }
    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn kernel(&self, src: &Group) -> Subgroup {
        let v: Vec<Elem> = src.elements().filter(|&x| self.apply(x) == 0).collect();
        Subgroup::from_sorted(src.id(), src.order(), v)
    }

    pub fn image(&self, src: &Group, dst: &Group, h: &Subgroup) -> Subgroup {
        debug_assert_eq!(src.id(), self.src);
        let mut v: Vec<Elem> = h.elems().iter().map(|&x| self.apply(x)).collect();
        v.sort_unstable();
        v.dedup();
        Subgroup::from_sorted(dst.id(), dst.order(), v)
    }

    pub fn preimage(&self, src: &Group, k: &Subgroup) -> Subgroup {
        let v: Vec<Elem> = src.elements().filter(|&x| k.contains(self.apply(x))).collect();
        Subgroup::from_sorted(src.id(), src.order(), v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(other.dst, self.src, "composition of incompatible maps");
        let images: Vec<Elem> = other.images.iter().map(|&x| self.apply(x)).collect();
        let mut hit = std::collections::HashSet::new();
        images.iter().for_each(|x| {
            hit.insert(*x);
        });
        GroupMap {
            src: other.src,
            dst: self.dst,
            injective: hit.len() == images.len(),
            surjective: self.surjective && other.surjective,
            images,
        }
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        if !(self.injective && self.surjective) {
            return None;
        }
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as Elem;
        }
        Some(GroupMap { src: self.dst, dst: self.src, images, injective: true, surjective: true })
    }
}

static REGISTRY: OnceLock<DashMap<GroupId, Arc<Group>>> = OnceLock::new();

/// Returns the first registered group with the same table, registering `g` if it is new.
///
/// Derived groups (subgroups, quotients, sections) go through here so that their
/// lattice and automorphism caches are shared.
pub fn intern(g: Arc<Group>) -> Arc<Group> {
    let reg = REGISTRY.get_or_init(DashMap::new);
    reg.entry(g.id()).or_insert(g).clone()
}

static PRODUCTS: OnceLock<DashMap<(GroupId, GroupId), Arc<Group>>> = OnceLock::new();

/// `G × H` with pair numbering `(g, h) ↦ g·|H| + h`. Products are memoised per pair of tables.
pub fn direct_product(g: &Arc<Group>, h: &Arc<Group>) -> Result<Arc<Group>> {
    let n = g.order() * h.order();
    let cap = Caps::product();
    if n > cap {
        return Err(Error::CapExceeded { what: "direct product", size: n, cap });
    }
    let reg = PRODUCTS.get_or_init(DashMap::new);
    if let Some(p) = reg.get(&(g.id(), h.id())) {
        return Ok(p.clone());
    }
    let (m, k) = (g.order(), h.order());
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (a1, a2) = ((a / k) as Elem, (a % k) as Elem);
        for b in 0..n {
            let (b1, b2) = ((b / k) as Elem, (b % k) as Elem);
            table.push(Group::pair_code(g.mul(a1, b1), h.mul(a2, b2), k));
        }
    }
    let _ = m;
    let rhs = if h.name().contains(" x ") { format!("({})", h.name()) } else { h.name().to_string() };
    let name = format!("{} x {}", g.name(), rhs);
    let p = Arc::new(Group::new_unchecked(name, n, table, Some((g.clone(), h.clone()))));
    Ok(reg.entry((g.id(), h.id())).or_insert(p).clone())
}

/// Coordinate embeddings and projections of a direct product.
pub struct ProductMaps {
    pub embed_left: GroupMap,
    pub embed_right: GroupMap,
    pub project_left: GroupMap,
    pub project_right: GroupMap,
}

pub fn product_maps(p: &Group) -> Result<ProductMaps> {
    let (g, h) = p.factors().ok_or_else(|| Error::Precondition("not a direct product".into()))?;
    let k = h.order();
    Ok(ProductMaps {
        embed_left: GroupMap::new_unchecked(g, p, g.elements().map(|x| Group::pair_code(x, 0, k)).collect()),
        embed_right: GroupMap::new_unchecked(h, p, h.elements().map(|y| Group::pair_code(0, y, k)).collect()),
        project_left: GroupMap::new_unchecked(p, g, p.elements().map(|z| (z as usize / k) as Elem).collect()),
        project_right: GroupMap::new_unchecked(p, h, p.elements().map(|z| (z as usize % k) as Elem).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(Group::from_table("x", 2, vec![0, 1, 1, 1]).is_err());
        assert!(Group::from_table("x", 2, vec![1, 0, 0, 1]).is_err());
        assert!(Group::from_table("x", 2, vec![0, 1, 1, 0]).is_ok());
        // A Latin square with identity that is not associative (order 5 loop).
        let t = vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0];
        assert!(matches!(Group::from_table("loop", 5, t), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn product_numbering_and_maps() {
        let c2 = cyclic(2);
        let c4 = cyclic(4);
        let p = direct_product(&c2, &c4).unwrap();
        assert_eq!(p.order(), 8);
        assert_eq!(p.exponent(), 4);
        assert_eq!(p.mul(Group::pair_code(1, 3, 4), Group::pair_code(1, 2, 4)), Group::pair_code(0, 1, 4));
        let maps = product_maps(&p).unwrap();
        assert!(maps.embed_left.is_injective() && maps.project_right.is_surjective());
        assert_eq!(maps.project_left.kernel(&p).order(), 4);
        let v = direct_product(&c2, &c2).unwrap();
        let lat = v.lattice().unwrap();
        assert_eq!(lat.subgroups().iter().filter(|s| s.order() == 2).count(), 3);
    }

    #[test]
    fn quotient_is_surjective_with_kernel() {
        let d8 = dihedral(8).unwrap();
        let z = d8.center();
        assert_eq!(z.order(), 2);
        let (q, pi) = d8.quotient(&z, "D8/Z").unwrap();
        assert_eq!(q.order(), 4);
        assert!(pi.is_surjective());
        assert_eq!(pi.kernel(&d8), z);
        assert_eq!(q.exponent(), 2);
    }

    #[test]
    fn structural_subgroups() {
        let c9 = cyclic(9);
        assert_eq!(c9.frattini().unwrap().order(), 3);
        let d8 = dihedral(8).unwrap();
        let s = d8.structural().unwrap();
        assert_eq!(s.center, s.derived);
        assert_eq!(s.center, s.frattini);
        let v = build_group("C2 x C2 x C2").unwrap();
        assert!(v.frattini().unwrap().is_trivial());
        assert!(cyclic(6).omega1_center(None).is_err());
    }

    #[test]
    fn pow_and_orders() {
        let c6 = cyclic(6);
        assert_eq!(c6.pow(1, -1), 5);
        assert_eq!(c6.elem_order(2), 3);
        assert_eq!(c6.exponent(), 6);
        assert!(c6.is_cyclic());
    }
}
