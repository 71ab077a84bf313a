//! A fixed list of small `p`-groups, used as the search space for witness searches.
//!
//! Orders up to 16 are complete; order 27 is complete; order 32 is a sample of 32 of the 51 groups.

use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::group::{build_group, direct_product, is_isomorphic, semidirect, split_extension, Elem, Group};

pub const CATALOG_MAX_ORDER: usize = 32;

const SPECS: &[&str] = &[
    "1",
    "C2",
    "C3",
    "C4",
    "C2 x C2",
    "C5",
    "C7",
    "C8",
    "C2 x C4",
    "C2 x C2 x C2",
    "D8",
    "Q8",
    "C9",
    "C3 x C3",
    "C11",
    "C13",
    "C16",
    "C4 x C4",
    "C2 x C8",
    "C2 x C2 x C4",
    "C2 x C2 x C2 x C2",
    "D16",
    "Q16",
    "SD16",
    "M16",
    "C2 x D8",
    "C2 x Q8",
    "cp(D8@center-involution, C4@2)",
    "C4:C4",
    "C2^2:C4",
    "C17",
    "C19",
    "C23",
    "C25",
    "C5 x C5",
    "C27",
    "C3 x C9",
    "C3 x C3 x C3",
    "X(3,1,+)",
    "X(3,1,-)",
    "C29",
    "C31",
    "C32",
    "C2 x C16",
    "C4 x C8",
    "C2 x C2 x C8",
    "C2 x C4 x C4",
    "C2 x C2 x C2 x C4",
    "C2 x C2 x C2 x C2 x C2",
    "C2 x D16",
    "C2 x Q16",
    "C2 x SD16",
    "C2 x M16",
    "C2 x C2 x D8",
    "C2 x C2 x Q8",
    "C2 x cp(D8@center-involution, C4@2)",
    "C2 x C4:C4",
    "C2 x C2^2:C4",
    "C4 x D8",
    "C4 x Q8",
    "D32",
    "Q32",
    "SD32",
    "M32",
    "X(2,2,+)",
    "X(2,2,-)",
    "cp(D8@center-involution, C8@4)",
    "C8:C4",
    "C8:C4_3",
    "C8:C4_5",
    "C4:C8",
    "C4wrC2",
    "C2^2wrC2",
    "C4^2:C2",
];

fn swap_images(half: usize) -> Vec<Elem> {
    (0..half * half).map(|c| ((c % half) * half + c / half) as Elem).collect()
}

/// Catalog groups with no product or family syntax.
pub fn lookup(name: &str) -> Option<Arc<Group>> {
    let build = || -> Result<Arc<Group>> {
        match name {
            "C4:C4" => semidirect(4, 4, 3, name),
            "C8:C4" => semidirect(8, 4, 7, name),
            "C8:C4_3" => semidirect(8, 4, 3, name),
            "C8:C4_5" => semidirect(8, 4, 5, name),
            "C4:C8" => semidirect(4, 8, 3, name),
            "C2^2:C4" => {
                let v = build_group("C2 x C2")?;
                split_extension(&v, &[0, 2, 1, 3], 4, name)
            }
            "C4wrC2" => {
                let c4 = build_group("C4")?;
                let p = direct_product(&c4, &c4)?;
                split_extension(&p, &swap_images(4), 2, name)
            }
            "C2^2wrC2" => {
                let v = build_group("C2 x C2")?;
                let p = direct_product(&v, &v)?;
                split_extension(&p, &swap_images(4), 2, name)
            }
            "C4^2:C2" => {
                let a = build_group("C4 x C4")?;
                let inv: Vec<Elem> = a.elements().map(|x| a.inv(x)).collect();
                split_extension(&a, &inv, 2, name)
            }
            _ => Err(crate::Error::Parse(name.into())),
        }
    };
    build().ok()
}

static CATALOG: OnceLock<Vec<Arc<Group>>> = OnceLock::new();

/// All catalog groups of order at most `max_order`, ascending by order.
pub fn catalog(max_order: usize) -> Result<Vec<Arc<Group>>> {
    let all = match CATALOG.get() {
        Some(c) => c,
        None => {
            let mut v = SPECS.iter().map(|s| build_group(s)).collect::<Result<Vec<_>>>()?;
            v.sort_by_key(|g| g.order());
            CATALOG.get_or_init(|| v)
        }
    };
    Ok(all.iter().filter(|g| g.order() <= max_order).cloned().collect())
}

/// The first catalog group isomorphic to `g`.
pub fn identify(g: &Group) -> Result<Option<Arc<Group>>> {
    if g.order() > CATALOG_MAX_ORDER {
        return Ok(None);
    }
    let profile = g.order_profile();
    for c in catalog(g.order())? {
        if c.order() == g.order() && c.order_profile() == profile && is_isomorphic(&c, g).is_some() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `identify(g)`'s name, or `g`'s own name.
pub fn display_name(g: &Group) -> String {
    match identify(g) {
        Ok(Some(c)) => c.name().to_string(),
        _ => g.name().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_p_groups_and_pairwise_distinct() {
        let all = catalog(CATALOG_MAX_ORDER).unwrap();
        assert_eq!(all.len(), SPECS.len());
        for (i, a) in all.iter().enumerate() {
            assert!(a.order() == 1 || a.prime_hint().is_some(), "{}", a.name());
            for b in &all[..i] {
                if a.order() == b.order() {
                    assert!(is_isomorphic(a, b).is_none(), "{} ≅ {}", a.name(), b.name());
                }
            }
        }
        let counts = |n: usize| all.iter().filter(|g| g.order() == n).count();
        assert_eq!((counts(8), counts(16), counts(27), counts(32)), (5, 14, 5, 32));
    }

    #[test]
    fn names_round_trip_through_the_parser() {
        for g in catalog(16).unwrap() {
            let h = build_group(g.name()).unwrap();
            assert_eq!(h.id(), g.id(), "{}", g.name());
        }
    }

    #[test]
    fn identify_finds_isomorphic_entries() {
        let g = build_group("C4 x C2").unwrap();
        assert_eq!(identify(&g).unwrap().unwrap().name(), "C2 x C4");
        let q = build_group("Q8").unwrap();
        let (z, _) = q.quotient(&q.center(), "Q8/Z").unwrap();
        assert_eq!(display_name(&z), "C2 x C2");
    }
}
