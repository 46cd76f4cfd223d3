//! Resolve fully qualified names in Java snippets and recommend the
//! smallest set of dependencies that provides them.
//!
//! The pipeline: [`frontend`] turns a snippet into sketches (FQN templates
//! with `?` holes), [`kb`] finds candidate `dependency:FQN` pairs for each
//! sketch, and [`resolver`] encodes the choice as a positive covering CNF
//! that [`solver`] minimises.

pub mod frontend;
pub mod kb;
pub mod resolver;
pub mod signature;
pub mod solver;
pub mod span;

pub use frontend::{analyze, Sketch};
pub use kb::{DependencyCoordinate, KbEntry, KnowledgeBase};
pub use resolver::{emit_patch, resolve, Resolution, ResolveOptions};
