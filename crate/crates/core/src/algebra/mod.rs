//! The fibered Burnside algebra `B_ℚ^{ℂ×}(G, H)` with its Mackey product.

mod element;
pub mod elementary;
mod mackey;
pub mod oracle;
mod space;

pub use element::AlgebraElement;
pub use elementary::{
    canonical_factors, conj_iso, def, defres, e_pair, e_pair_label, graph, identity, ind, indinf, inf, iso, res,
    transitive,
};
pub use mackey::{label_product, star};
pub use oracle::tensor_oracle;
pub use space::{Invariants, Label, LabelId, Space};
