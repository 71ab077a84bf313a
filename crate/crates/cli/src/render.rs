use fibered_core::character::PairTag;
use fibered_core::group::Subgroup;
use fibered_core::serial::ElementJson;
use fibered_core::Element;
use serde_json::{json, Value};

pub fn subgroup_json(h: &Subgroup) -> Value {
    json!({ "order": h.order(), "elements": h.elems() })
}

pub fn tag_name(t: &PairTag) -> String {
    let vals: Vec<String> = t.kappa.values().iter().map(|v| v.to_string()).collect();
    format!("K={:?} κ=[{}]", t.k.elems(), vals.join(","))
}

/// One line per term: coefficient, the pairs of `U` and the nonzero phases of `υ`.
pub fn render_element(x: &Element) -> String {
    let j = ElementJson::from_element(x);
    if j.terms.is_empty() {
        return "  0\n".into();
    }
    let mut out = String::new();
    for t in &j.terms {
        let pairs: Vec<String> = t.pairs.iter().map(|(g, h)| format!("({g},{h})")).collect();
        out += &format!("  {:>8} · U={{{}}}", t.coeff, pairs.join(" "));
        if t.values.iter().any(|v| v != "0") {
            out += &format!(" υ=[{}]", t.values.join(","));
        }
        out.push('\n');
    }
    out
}
