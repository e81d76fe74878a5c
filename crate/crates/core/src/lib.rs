//! Families of CrySL usage rules: abstract rules with variation points,
//! refinements that resolve them, build configurations, and the tooling
//! around the generated rules (typestate automata, trace checking, line
//! metrics).

pub mod automaton;
pub mod diagnostic;
pub mod emit;
pub mod metrics;
pub mod model;
pub mod preprocess;
pub mod source;
pub mod syntax;
pub mod trace;
pub mod validate;

pub use automaton::{compile_order, to_dot, TypestateAutomaton, Verdict};
pub use diagnostic::{Diagnostic, Severity};
pub use emit::{emit, pretty_print};
pub use model::*;
pub use preprocess::{apply_refinement, build, load, resolve, BuildResult, SpecRegistry};
pub use source::{FileSource, MemFs, OsFs, SourceFile};
pub use syntax::{parse_abstract, parse_config, parse_crysl, parse_refinement};
pub use validate::{validate_abstract, validate_rule_set, validate_spec};
