//! Combinatorics of SUSY graphs: modular graphs whose flags are colored
//! Neveu–Schwarz or Ramond, their morphisms, the operad of gluing recipes
//! they map to, and the boundary strata of moduli of SUSY curves.

pub mod calculus;
pub mod dual;
pub mod enumerate;
pub mod error;
pub mod gen;
pub mod gf2;
pub mod graph;
pub mod io;
pub mod ids;
pub mod lift;
pub mod morphism;
pub mod operad;
pub mod report;
pub mod susy;

pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use ids::{FlagId, Label, VertexId};
pub use lift::TailPartition;
pub use morphism::{compose, GraphMorphism, HasGraph, Morphism};
pub use report::{ValidationReport, Violation};
pub use susy::{Color, SusyGraph, SusyLabeling, SusyMorphism};
