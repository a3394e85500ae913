//! Turns dangling Java snippets from developer Q&A sites into compilable,
//! well-formed method declarations.
//!
//! The pipeline parses a snippet ([`ast`]), resolves missing imports and
//! undeclared variables against a signature catalog ([`catalog`],
//! [`resolver`]), extracts parameters and the return statement
//! ([`apizer`]), and names the method after the page title ([`namegen`]).
//! [`eval`] holds the metrics used to compare two APIs and the clone
//! normalizations used to pair snippets with methods.

pub mod apizer;
pub mod ast;
pub mod catalog;
pub mod eval;
pub mod namegen;
pub mod resolver;

pub use apizer::{apize, ApiDraft, ApizationResult, Outcome};
pub use ast::{parse_snippet, ParseError, SnippetAst};
pub use catalog::TypeCatalog;
pub use namegen::SoPage;
