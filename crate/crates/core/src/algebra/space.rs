//! Canonical basis labels of `B^{ℂ×}(G, H)`.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock, RwLock};

use dashmap::DashMap;

use crate::character::{hom_group, Character};
use crate::error::Result;
use crate::group::{direct_product, goursat_of_codes, Elem, Goursat, Group, GroupId, Subgroup};
use crate::phase::Phase;

pub type LabelId = u32;

/// A fibered pair `(U, υ)` with `U ≤ G × H` given by pair codes `g·|H| + h`.
#[derive(Debug)]
pub struct Label {
    elems: Vec<Elem>,
    values: Vec<Phase>,
    /// `by_first[g]` lists `(h, υ(g, h))` for `(g, h) ∈ U`.
    pub(crate) by_first: Vec<Vec<(Elem, Phase)>>,
    /// `by_second[h]` lists `(g, υ(g, h))`.
    pub(crate) by_second: Vec<Vec<(Elem, Phase)>>,
}

impl Label {
    fn new(elems: Vec<Elem>, values: Vec<Phase>, g_order: usize, h_order: usize) -> Label {
        let mut by_first = vec![Vec::new(); g_order];
        let mut by_second = vec![Vec::new(); h_order];
        for (&c, &v) in elems.iter().zip(&values) {
            let (a, b) = (c as usize / h_order, c as usize % h_order);
            by_first[a].push((b as Elem, v));
            by_second[b].push((a as Elem, v));
        }
        Label { elems, values, by_first, by_second }
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }
    pub fn values(&self) -> &[Phase] {
        &self.values
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn is_trivial_character(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
    pub fn value(&self, code: Elem) -> Option<Phase> {
        self.elems.binary_search(&code).ok().map(|i| self.values[i])
    }
    /// Ordering key: `(|U|, elements, values)`.
    pub fn key_cmp(&self, other: &Label) -> Ordering {
        (self.elems.len(), &self.elems, &self.values).cmp(&(other.elems.len(), &other.elems, &other.values))
    }
}

type RawKey = (Vec<Elem>, Vec<Phase>);

/// Interned canonical labels for one ordered pair of groups.
pub struct Space {
    g: Arc<Group>,
    h: Arc<Group>,
    labels: RwLock<Vec<Arc<Label>>>,
    canonical: DashMap<RawKey, LabelId>,
    raw: DashMap<RawKey, LabelId>,
    basis: OnceLock<Vec<LabelId>>,
    opposite: DashMap<LabelId, LabelId>,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Space({}, {})", self.g.name(), self.h.name())
    }
}

static SPACES: OnceLock<DashMap<(GroupId, GroupId), Arc<Space>>> = OnceLock::new();

/// Left invariants `(p1, k1, υ1)`, right invariants `(p2, k2, υ2)` and the kernels of `υ1`, `υ2`,
/// with `υ(g, h) = υ1(g) − υ2(h)` on `k1 × k2`.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub p1: Subgroup,
    pub k1: Subgroup,
    pub upsilon1: Character,
    pub p2: Subgroup,
    pub k2: Subgroup,
    pub upsilon2: Character,
    pub kernel1: Subgroup,
    pub kernel2: Subgroup,
}

impl Space {
    /// The registered space for `(G, H)`.
    pub fn get(g: &Arc<Group>, h: &Arc<Group>) -> Arc<Space> {
        let reg = SPACES.get_or_init(DashMap::new);
        if let Some(s) = reg.get(&(g.id(), h.id())) {
            return s.clone();
        }
        let s = Arc::new(Space {
            g: g.clone(),
            h: h.clone(),
            labels: RwLock::new(Vec::new()),
            canonical: DashMap::new(),
            raw: DashMap::new(),
            basis: OnceLock::new(),
            opposite: DashMap::new(),
        });
        reg.entry((g.id(), h.id())).or_insert(s).clone()
    }

    pub fn left(&self) -> &Arc<Group> {
        &self.g
    }
    pub fn right(&self) -> &Arc<Group> {
        &self.h
    }
    pub fn key(&self) -> (GroupId, GroupId) {
        (self.g.id(), self.h.id())
    }

    pub fn label(&self, id: LabelId) -> Arc<Label> {
        self.labels.read().unwrap()[id as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.labels.read().unwrap().len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn code(&self, g: Elem, h: Elem) -> Elem {
        Group::pair_code(g, h, self.h.order())
    }
    #[inline]
    pub fn split(&self, c: Elem) -> (Elem, Elem) {
        let k = self.h.order();
        ((c as usize / k) as Elem, (c as usize % k) as Elem)
    }
    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (a1, a2) = self.split(a);
        let (b1, b2) = self.split(b);
        self.code(self.g.mul(a1, b1), self.h.mul(a2, b2))
    }
    #[inline]
    fn conj(&self, x: Elem, u: Elem) -> Elem {
        let (x1, x2) = self.split(x);
        let (u1, u2) = self.split(u);
        self.code(self.g.conj(x1, u1), self.h.conj(x2, u2))
    }

    /// Canonical label of `(U, υ)`; `elems` sorted, `values` aligned.
    pub fn intern(&self, elems: Vec<Elem>, values: Vec<Phase>) -> LabelId {
        let key = (elems, values);
        if let Some(id) = self.raw.get(&key) {
            return *id;
        }
        let canon = self.canonical_form(&key.0, &key.1);
        let id = *self.canonical.entry(canon.clone()).or_insert_with(|| {
            let mut labels = self.labels.write().unwrap();
            labels.push(Arc::new(Label::new(canon.0, canon.1, self.g.order(), self.h.order())));
            (labels.len() - 1) as LabelId
        });
        self.raw.insert(key, id);
        id
    }

    /// Minimum of the conjugation orbit under the encoding order.
    pub fn canonical_form(&self, elems: &[Elem], values: &[Phase]) -> RawKey {
        let n = self.g.order() * self.h.order();
        let mut seen = vec![false; n];
        let mut best: Option<RawKey> = None;
        let mut buf: Vec<(Elem, Phase)> = Vec::with_capacity(elems.len());
        for x in 0..n as Elem {
            if seen[x as usize] {
                continue;
            }
            for &u in elems {
                seen[self.mul(x, u) as usize] = true;
            }
            buf.clear();
            buf.extend(elems.iter().zip(values).map(|(&u, &v)| (self.conj(x, u), v)));
            buf.sort_unstable_by_key(|p| p.0);
            let better = match &best {
                None => true,
                Some((be, bv)) => {
                    let mut ord = Ordering::Equal;
                    for (i, p) in buf.iter().enumerate() {
                        ord = p.0.cmp(&be[i]);
                        if ord != Ordering::Equal {
                            break;
                        }
                    }
                    if ord == Ordering::Equal {
                        for (i, p) in buf.iter().enumerate() {
                            ord = p.1.cmp(&bv[i]);
                            if ord != Ordering::Equal {
                                break;
                            }
                        }
                    }
                    ord == Ordering::Less
                }
            };
            if better {
                best = Some((buf.iter().map(|p| p.0).collect(), buf.iter().map(|p| p.1).collect()));
            }
        }
        best.expect("nonempty group")
    }

    /// Interns `(U, υ)` from a subgroup of the product group `G × H` and a character on it.
    pub fn intern_character(&self, chi: &Character) -> LabelId {
        self.intern(chi.domain().elems().to_vec(), chi.values().to_vec())
    }

    /// Interns a pair with trivial character.
    pub fn intern_trivial(&self, mut elems: Vec<Elem>) -> LabelId {
        elems.sort_unstable();
        elems.dedup();
        let n = elems.len();
        self.intern(elems, vec![Phase::ZERO; n])
    }

    pub fn product_group(&self) -> Result<Arc<Group>> {
        direct_product(&self.g, &self.h)
    }

    /// All labels, i.e. a basis of `B^{ℂ×}(G, H)`, in encoding order.
    pub fn basis(&self) -> Result<&[LabelId]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let p = self.product_group()?;
        let lat = p.lattice()?;
        let mut ids: Vec<LabelId> = Vec::new();
        for rep in lat.class_reps() {
            let u = lat.get(rep);
            for chi in hom_group(&p, u).iter() {
                ids.push(self.intern_character(chi));
            }
        }
        ids.sort_unstable();
        ids.dedup();
        self.sort_ids(&mut ids);
        Ok(self.basis.get_or_init(|| ids))
    }

    pub fn sort_ids(&self, ids: &mut [LabelId]) {
        let labels = self.labels.read().unwrap();
        ids.sort_by(|&a, &b| labels[a as usize].key_cmp(&labels[b as usize]));
    }

    pub fn compare(&self, a: LabelId, b: LabelId) -> Ordering {
        let labels = self.labels.read().unwrap();
        labels[a as usize].key_cmp(&labels[b as usize])
    }

    pub fn goursat(&self, id: LabelId) -> Goursat {
        goursat_of_codes(&self.g, &self.h, self.label(id).elems())
    }

    pub fn is_covering(&self, id: LabelId) -> bool {
        let gd = self.goursat(id);
        gd.p1.order() == self.g.order() && gd.p2.order() == self.h.order()
    }

    pub fn invariants(&self, id: LabelId) -> Invariants {
        let l = self.label(id);
        let gd = self.goursat(id);
        let v1: Vec<Phase> = gd.k1.elems().iter().map(|&a| l.value(self.code(a, 0)).unwrap()).collect();
        let v2: Vec<Phase> = gd.k2.elems().iter().map(|&b| -l.value(self.code(0, b)).unwrap()).collect();
        let upsilon1 = Character::from_parts(gd.k1.clone(), v1);
        let upsilon2 = Character::from_parts(gd.k2.clone(), v2);
        Invariants {
            kernel1: upsilon1.kernel(&self.g),
            kernel2: upsilon2.kernel(&self.h),
            p1: gd.p1,
            k1: gd.k1,
            upsilon1,
            p2: gd.p2,
            k2: gd.k2,
            upsilon2,
        }
    }

    /// The label of `(U^op, υ∘swap)` in the space `(H, G)`.
    pub fn opposite_label(&self, id: LabelId) -> (Arc<Space>, LabelId) {
        let op = Space::get(&self.h, &self.g);
        if let Some(j) = self.opposite.get(&id) {
            return (op, *j);
        }
        let l = self.label(id);
        let mut pairs: Vec<(Elem, Phase)> = l
            .elems()
            .iter()
            .zip(l.values())
            .map(|(&c, &v)| {
                let (a, b) = self.split(c);
                (op.code(b, a), v)
            })
            .collect();
        pairs.sort_unstable_by_key(|p| p.0);
        let j = op.intern(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect());
        self.opposite.insert(id, j);
        (op, j)
    }

    /// The label's subgroup as a subgroup of the product group.
    pub fn label_subgroup(&self, id: LabelId) -> Result<Subgroup> {
        let p = self.product_group()?;
        p.subgroup(self.label(id).elems())
    }
}
