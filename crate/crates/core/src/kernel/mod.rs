//! Finite atom structures, complex-algebra operators, axiom checks and sc-words.

pub mod axioms;
pub mod element;
pub mod format;
pub mod relation;
pub mod scword;
pub mod structure;

pub use axioms::{check_axioms, check_ca_axioms, check_ra_axioms, AxiomMode, AxiomReport};
pub use element::{apply_operator, ComplexAlgebra, Element, Operator};
pub use format::{load_structure, structure_to_json, structure_to_string};
pub use relation::Relation;
pub use scword::{eval_sc_word, PartialMap, ScToken, ScWord};
pub use structure::{
    pair_count, pair_index, powerset_structure, square_union_structure, AtomId, AtomStructure,
    CaAtomStructure, RaAtomStructure, TripleSet,
};
