//! DEVS-to-UML transpiler: model frontend, twin simulators, and the
//! transformation between them.
//!
//! The crate is organized around the pipeline
//! `.devs` text → [`devs`] model set → [`mapper`] → [`uml`] diagrams, with
//! two independent execution engines ([`devs_sim`] and [`uml_sim`]) whose
//! observable traces the [`verify`] harness compares byte for byte.
//! [`emit`] holds every serializer: canonical expression and DSL printers,
//! the versioned XMI-flavored XML (with loader), and PlantUML text.

pub mod devs;
pub mod expr;

pub use expr::{Expr, Span, Ty, Value};
