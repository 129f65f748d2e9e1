//! Canonical forms, automorphism groups and enumeration of boundary strata.

mod canon;
mod strata;

pub use canon::{
    are_isomorphic, automorphisms, canonical_form, canonical_form_with, canonical_graph, Automorphism,
    AutomorphismGroup, CanonicalForm,
};
pub use strata::{
    contraction_poset, enumerate_strata, modular_shapes, ContractionPoset, Stratum, DEFAULT_MAX_EDGES,
};
