//! Rainbow signatures, coloured graphs and rainbow atom structures.

pub mod enumerate;
pub mod graph;
pub mod signature;

pub use enumerate::{
    enumerate_rainbow, enumerate_rainbow_atoms, EnumOptions, RainbowAtom, RainbowStructure,
    YellowPolicy,
};
pub use graph::{
    canonical_graph, detect_cones, legal_coloured_graph, to_dot, ColouredGraph, Cone, Shade,
    Violation,
};
pub use signature::{build_signature, Colour, ColourId, Preset, RainbowSignature, RedMode};
