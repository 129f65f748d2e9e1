//! Moduli signatures, gluing recipes and the operad functors on graphs.
//!
//! A morphism of products of moduli spaces is recorded by a
//! [`GluingRecipe`]; equality of weak maps is equality of canonical recipes.
//! Ramond gluings carry one odd fiber direction each, tracked as
//! `ramond_fiber_rank`.

mod axioms;
mod dimension;
mod evaluate;
mod generators;
mod recipe;
mod signature;

pub use axioms::{check_operad_axioms, AxiomReport, ConditionReport, CONDITIONS};
pub use dimension::{stratum_dimension, StratumDimension};
pub use evaluate::{evaluate_elementary, evaluate_operad, evaluate_via_elementaries, project, signature_of};
pub use generators::{
    generator_glue_classical, generator_glue_ns, generator_glue_ns_loop, generator_glue_r,
    generator_glue_r_loop, generator_relabel, glue_in,
};
pub use recipe::{recipe_compose, GluingRecipe, LabelPair};
pub use signature::{Factor, Mode, ModuliSignature};
