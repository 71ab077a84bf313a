//! JSON form of algebra elements.
//!
//! Terms are listed in canonical label order with the label's pairs `(g, h)`, character
//! values as reduced phases `"a/b"` and coefficients as reduced fractions `"n/d"`, so equal
//! elements serialize to identical bytes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Space};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::phase::Phase;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRef {
    pub name: String,
    pub order: usize,
    /// Hex digest of the Cayley table.
    pub id: String,
}

impl GroupRef {
    pub fn of(g: &Group) -> GroupRef {
        GroupRef { name: g.name().to_string(), order: g.order(), id: g.id().to_string() }
    }

    fn check(&self, g: &Group) -> Result<()> {
        if self.id != g.id().to_string() {
            return Err(Error::Mismatch(format!("element was written for {} ({}), not {}", self.name, self.id, g.name())));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub pairs: Vec<(Elem, Elem)>,
    pub values: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub left: GroupRef,
    pub right: GroupRef,
    pub terms: Vec<TermJson>,
}

impl ElementJson {
    pub fn from_element<C: Scalar>(x: &AlgebraElement<C>) -> ElementJson {
        let space = x.space();
        let mut ids: Vec<_> = x.terms().keys().copied().collect();
        space.sort_ids(&mut ids);
        let terms = ids
            .into_iter()
            .map(|id| {
                let l = space.label(id);
                TermJson {
                    pairs: l.elems().iter().map(|&c| space.split(c)).collect(),
                    values: l.values().iter().map(|v| v.to_string()).collect(),
                    coeff: x.coefficient(id).to_fraction_string(),
                }
            })
            .collect();
        ElementJson { left: GroupRef::of(space.left()), right: GroupRef::of(space.right()), terms }
    }

    pub fn to_element<C: Scalar>(&self, left: &Arc<Group>, right: &Arc<Group>) -> Result<AlgebraElement<C>> {
        self.left.check(left)?;
        self.right.check(right)?;
        let space = Space::get(left, right);
        let mut x = AlgebraElement::zero(space.clone());
        for t in &self.terms {
            if t.pairs.len() != t.values.len() {
                return Err(Error::Parse("pairs and values differ in length".into()));
            }
            let mut rows: Vec<(Elem, Phase)> = Vec::with_capacity(t.pairs.len());
            for (&(g, h), v) in t.pairs.iter().zip(&t.values) {
                if g as usize >= left.order() || h as usize >= right.order() {
                    return Err(Error::Parse(format!("pair ({g}, {h}) out of range")));
                }
                rows.push((space.code(g, h), v.parse()?));
            }
            rows.sort_unstable_by_key(|r| r.0);
            let elems: Vec<Elem> = rows.iter().map(|r| r.0).collect();
            let values: Vec<Phase> = rows.iter().map(|r| r.1).collect();
            validate_label(&space, &elems, &values)?;
            let c = C::parse_fraction(&t.coeff).ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            let id = space.intern(elems, values);
            x.add_term(id, c);
        }
        Ok(x)
    }
}

fn validate_label(space: &Space, elems: &[Elem], values: &[Phase]) -> Result<()> {
    let pos = |c: Elem| elems.binary_search(&c).ok();
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            let (a1, a2) = space.split(a);
            let (b1, b2) = space.split(b);
            let c = space.code(space.left().mul(a1, b1), space.right().mul(a2, b2));
            match pos(c) {
                Some(k) if values[k] == values[i] + values[j] => {}
                _ => return Err(Error::Parse("terms must be a subgroup with a linear character".into())),
            }
        }
    }
    if elems.first() != Some(&0) {
        return Err(Error::Parse("subgroup must contain the identity".into()));
    }
    Ok(())
}

pub fn to_json<C: Scalar>(x: &AlgebraElement<C>) -> String {
    serde_json::to_string(&ElementJson::from_element(x)).expect("element JSON")
}

pub fn from_json<C: Scalar>(s: &str, left: &Arc<Group>, right: &Arc<Group>) -> Result<AlgebraElement<C>> {
    let j: ElementJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_element(left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::idempotents::{epsilon, epsilon_indices, phi};
    use crate::character::{pair_poset, PosetVariant};
    use crate::Rational;

    #[test]
    fn round_trip_is_bit_exact() {
        for s in ["C2", "C4", "Q8"] {
            let g = build_group(s).unwrap();
            let mut xs = Vec::new();
            for t in pair_poset(&g, PosetVariant::Frattini).unwrap().tags {
                xs.push(phi::<Rational>(&g, &t).unwrap());
            }
            for i in epsilon_indices(&g).unwrap() {
                xs.push(epsilon::<Rational>(&g, &i).unwrap());
            }
            for x in xs {
                let j = to_json(&x);
                let y: AlgebraElement<Rational> = from_json(&j, &g, &g).unwrap();
                assert_eq!(y, x);
                assert_eq!(to_json(&y), j);
            }
        }
    }

    #[test]
    fn rejects_foreign_groups_and_bad_labels() {
        let c2 = build_group("C2").unwrap();
        let c3 = build_group("C3").unwrap();
        let x = crate::algebra::identity::<Rational>(&c2);
        assert!(from_json::<Rational>(&to_json(&x), &c3, &c3).is_err());
        let mut j = ElementJson::from_element(&x);
        j.terms[0].pairs.remove(0);
        j.terms[0].values.remove(0);
        assert!(j.to_element::<Rational>(&c2, &c2).is_err());
    }
}
