//! Sparse linear combinations of basis labels.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::mackey::label_product;
use super::space::{LabelId, Space};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::scalar::Scalar;
use crate::Rational;

/// An element of `B_ℚ^{ℂ×}(G, H)`; zero coefficients are never stored.
#[derive(Clone)]
pub struct AlgebraElement<C: Scalar = Rational> {
    space: Arc<Space>,
    terms: BTreeMap<LabelId, C>,
}

impl<C: Scalar> PartialEq for AlgebraElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.space.key() == other.space.key() && self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Debug for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({}, {}; ", self.space.left().name(), self.space.right().name())?;
        for (id, c) in self.sorted_terms() {
            let l = self.space.label(id);
            write!(f, "{} [|U|={}, #{}] ", c.to_fraction_string(), l.order(), id)?;
        }
        write!(f, ")")
    }
}

const PARALLEL_THRESHOLD: usize = 256;

impl<C: Scalar> AlgebraElement<C> {
    pub fn zero(space: Arc<Space>) -> Self {
        AlgebraElement { space, terms: BTreeMap::new() }
    }

    pub fn basis(space: Arc<Space>, id: LabelId) -> Self {
        AlgebraElement { space, terms: BTreeMap::from([(id, C::one())]) }
    }

    pub fn from_terms(space: Arc<Space>, terms: impl IntoIterator<Item = (LabelId, C)>) -> Self {
        let mut e = Self::zero(space);
        for (id, c) in terms {
            e.add_term(id, c);
        }
        e
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }
    /// The left group `G` of `B(G, H)`.
    pub fn dst(&self) -> &Arc<Group> {
        self.space.left()
    }
    /// The right group `H` of `B(G, H)`.
    pub fn src(&self) -> &Arc<Group> {
        self.space.right()
    }
    pub fn terms(&self) -> &BTreeMap<LabelId, C> {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, id: LabelId) -> C {
        self.terms.get(&id).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in label encoding order.
    pub fn sorted_terms(&self) -> Vec<(LabelId, C)> {
        let mut ids: Vec<LabelId> = self.terms.keys().copied().collect();
        self.space.sort_ids(&mut ids);
        ids.into_iter().map(|i| (i, self.terms[&i].clone())).collect()
    }

    pub fn add_term(&mut self, id: LabelId, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&id) {
            Some(e) => {
                *e = e.clone() + c;
                if e.is_zero() {
                    self.terms.remove(&id);
                }
            }
            None => {
                self.terms.insert(id, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space.key() != other.space.key() {
            return Err(Error::Mismatch(format!(
                "elements of B({}, {}) and B({}, {})",
                self.dst().name(),
                self.src().name(),
                other.dst().name(),
                other.src().name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut r = self.clone();
        for (&id, c) in &other.terms {
            r.add_term(id, c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { space: self.space.clone(), terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.space.clone());
        }
        AlgebraElement {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(&k, x)| (k, x.clone() * c.clone())).collect(),
        }
    }

    /// Sum of a nonempty-or-empty list in a given space.
    pub fn sum<'a>(space: Arc<Space>, items: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::zero(space);
        for x in items {
            acc.check_same(x)?;
            for (&id, c) in &x.terms {
                acc.add_term(id, c.clone());
            }
        }
        Ok(acc)
    }

    /// Mackey product `x ·_H y` for `x ∈ B(G, H)`, `y ∈ B(H, K)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.src().id() != other.dst().id() {
            return Err(Error::Mismatch(format!(
                "cannot compose B({}, {}) with B({}, {})",
                self.dst().name(),
                self.src().name(),
                other.dst().name(),
                other.src().name()
            )));
        }
        let out = Space::get(self.dst(), other.src());
        let (s1, s2) = (&self.space, &other.space);
        let pairs: Vec<(LabelId, &C)> = self.terms.iter().map(|(&k, c)| (k, c)).collect();
        let accumulate = |acc: &mut BTreeMap<LabelId, C>, (a, ca): (LabelId, &C)| {
            for (&b, cb) in &other.terms {
                let coeff = ca.clone() * cb.clone();
                for &(id, m) in label_product(s1, a, s2, b, &out).iter() {
                    let e = acc.entry(id).or_insert_with(C::zero);
                    *e = e.clone() + coeff.clone() * C::from_int(m);
                }
            }
        };
        let merged: BTreeMap<LabelId, C> = if self.terms.len() * other.terms.len() >= PARALLEL_THRESHOLD {
            pairs
                .into_par_iter()
                .fold(BTreeMap::new, |mut acc, p| {
                    accumulate(&mut acc, p);
                    acc
                })
                .reduce(BTreeMap::new, |mut a, b| {
                    for (k, v) in b {
                        let e = a.entry(k).or_insert_with(C::zero);
                        *e = e.clone() + v;
                    }
                    a
                })
        } else {
            let mut acc = BTreeMap::new();
            for p in pairs {
                accumulate(&mut acc, p);
            }
            acc
        };
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(AlgebraElement { space: out, terms })
    }

    /// Swaps the two coordinates of every label.
    pub fn opposite(&self) -> Self {
        let mut r: Option<Self> = None;
        for (&id, c) in &self.terms {
            let (sp, j) = self.space.opposite_label(id);
            r.get_or_insert_with(|| Self::zero(sp)).add_term(j, c.clone());
        }
        r.unwrap_or_else(|| Self::zero(Space::get(self.src(), self.dst())))
    }

    /// Converts coefficients into another scalar type through their fraction strings.
    pub fn convert<D: Scalar>(&self) -> Option<AlgebraElement<D>> {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            terms.insert(k, D::parse_fraction(&c.to_fraction_string())?);
        }
        Some(AlgebraElement { space: self.space.clone(), terms })
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        Ok(self.mul(self)? == *self)
    }
}
