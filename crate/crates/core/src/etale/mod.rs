//! Étale ℚ-algebras with involution in the normal form
//! ∏ F_j[δ]/(δ² − d_j) × (ℚ, id)^{0 or 1}, their real types, transfer
//! forms φ_b(x, y) = tr(x·b·σ(y)), and the explicit forms of high Witt
//! index used to build embeddings.

mod algebra;
mod field;
mod lemma;
mod unitary;

pub use algebra::{
    dimension_condition_holds, transfer_to_q, AlgebraElement, DoubledFactor, ElementJson,
    EtaleInvolutionAlgebra, FixedJson, PartJson, RealType,
};
pub use field::{Irreducibility, NumberFieldFactor};
pub use lemma::{
    find_anti_fixed_generator, is_generator, lemma_form, lemma_form_with, LemmaForm, MAX_HEIGHT,
    TRIALS_PER_HEIGHT,
};
pub use unitary::{
    find_field_generator, is_field_generator, unitary_lemma_form, unitary_lemma_form_with,
    QuadElem, TensorElem, UnitaryLemmaForm,
};
