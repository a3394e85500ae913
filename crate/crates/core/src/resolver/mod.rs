//! Compiler stand-in: reports unresolved names in a draft, repairs missing
//! imports and recovers the types of undeclared variables.

mod analyze;
mod imports;
mod recover;
mod typing;

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::ast::{TypeArg, TypeRef, PRIMITIVES};
use crate::catalog::{TypeCatalog, JDK_LIBRARY};

pub use analyze::analyze;
pub use imports::{package_priority, resolve_imports};
pub use recover::{recover_var_type, Recovered};
pub use typing::{assignable, get_type_of_exp, type_check, JType, TypeConflict, TypeError, Typer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    MissingType,
    MissingVariable,
    Other,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::MissingType => "missing-type",
            DiagnosticKind::MissingVariable => "missing-variable",
            DiagnosticKind::Other => "other",
        })
    }
}

/// One resolution failure. `statement` is the index of the enclosing
/// top-level body statement; problems in the method signature use 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub identifier: String,
    pub statement: usize,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} `{}` (statement {})",
            self.kind, self.identifier, self.statement
        )
    }
}

/// Import declarations plus the libraries on the classpath.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionState {
    /// Single-type imports (`java.util.Date`) and on-demand imports (`java.util.*`).
    pub imports: BTreeSet<String>,
    pub libraries: BTreeSet<String>,
}

impl Default for ResolutionState {
    fn default() -> Self {
        ResolutionState {
            imports: BTreeSet::new(),
            libraries: BTreeSet::from([JDK_LIBRARY.to_string()]),
        }
    }
}

impl ResolutionState {
    /// Adds an import and the library that provides it.
    pub fn add_import(&mut self, qualified: &str, catalog: &TypeCatalog) {
        self.imports.insert(qualified.to_string());
        let lib = if let Some(pkg) = qualified.strip_suffix(".*") {
            catalog
                .types_in_package(pkg)
                .first()
                .map(|e| e.library.clone())
        } else {
            catalog.library_of(qualified).map(str::to_string)
        };
        if let Some(lib) = lib {
            self.libraries.insert(lib);
        }
    }

    /// Single-type import whose last segment is `simple`.
    pub fn single_import_for(&self, simple: &str) -> Option<&str> {
        self.imports
            .iter()
            .filter(|i| !i.ends_with(".*"))
            .find(|i| i.rsplit('.').next() == Some(simple))
            .map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("cannot resolve type `{0}`")]
    Unresolvable(String),
    #[error("cannot recover the type of `{0}`")]
    Unrecoverable(String),
    #[error("cannot type expression `{0}`")]
    Untypeable(String),
    #[error("time budget exceeded")]
    Budget,
}

/// Cooperative time limit checked inside the expensive loops.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn after(budget: std::time::Duration) -> Self {
        Deadline(Instant::now().checked_add(budget))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check(&self) -> Result<(), ResolveError> {
        if self.expired() {
            Err(ResolveError::Budget)
        } else {
            Ok(())
        }
    }
}

/// Maps source type names to catalog entries under a set of imports.
#[derive(Debug, Clone, Copy)]
pub struct Names<'a> {
    pub catalog: &'a TypeCatalog,
    pub state: &'a ResolutionState,
}

impl<'a> Names<'a> {
    pub fn new(catalog: &'a TypeCatalog, state: &'a ResolutionState) -> Self {
        Names { catalog, state }
    }

    /// Qualified name for a possibly dotted source name, or `None`.
    pub fn resolve(&self, name: &str) -> Option<String> {
        if PRIMITIVES.contains(&name) || name == "void" {
            return Some(name.to_string());
        }
        if name.contains('.') {
            if self.catalog.contains(name) {
                return Some(name.to_string());
            }
            let (head, rest) = name.split_once('.')?;
            let outer = self.resolve_simple(head)?;
            let nested = format!("{outer}.{rest}");
            return self.catalog.contains(&nested).then_some(nested);
        }
        self.resolve_simple(name)
    }

    fn resolve_simple(&self, simple: &str) -> Option<String> {
        if let Some(imported) = self.state.single_import_for(simple) {
            return self
                .catalog
                .contains(imported)
                .then(|| imported.to_string());
        }
        let lang = format!("java.lang.{simple}");
        if self.catalog.contains(&lang) {
            return Some(lang);
        }
        self.state
            .imports
            .iter()
            .filter_map(|i| i.strip_suffix(".*"))
            .map(|pkg| format!("{pkg}.{simple}"))
            .find(|q| self.catalog.contains(q))
    }

    /// Whether every name in `t`, including generic arguments, resolves.
    /// Returns the first unresolved head segment otherwise.
    pub fn first_unresolved(&self, t: &TypeRef) -> Option<String> {
        if self.resolve(&t.name).is_none() {
            return Some(t.name.split('.').next().unwrap_or(&t.name).to_string());
        }
        t.args.iter().find_map(|a| match a {
            TypeArg::Type(t) | TypeArg::Extends(t) | TypeArg::Super(t) => self.first_unresolved(t),
            TypeArg::Wildcard => None,
        })
    }

    pub fn jtype(&self, t: &TypeRef) -> Option<JType> {
        self.resolve(&t.name).map(|n| JType::new(n, t.dims))
    }

    /// Source spelling of a qualified type: the simple name when it is
    /// already visible, otherwise the qualified name.
    pub fn spelling(&self, qualified: &str) -> String {
        let simple = qualified.rsplit('.').next().unwrap_or(qualified);
        match self.resolve(simple) {
            Some(q) if q == qualified => simple.to_string(),
            _ => qualified.to_string(),
        }
    }
}

/// Source form of `t`, adding an import when the type is not yet visible.
/// Falls back to the qualified name if the simple name is taken.
pub fn source_type(t: &JType, state: &mut ResolutionState, catalog: &TypeCatalog) -> TypeRef {
    let names = Names::new(catalog, state);
    let simple = t.name.rsplit('.').next().unwrap_or(&t.name).to_string();
    let spelled = if t.is_primitive_element() || t.is_null() {
        t.name.clone()
    } else {
        match names.resolve(&simple) {
            Some(q) if q == t.name => simple,
            Some(_) => t.name.clone(),
            None => {
                if catalog.contains(&t.name) {
                    state.add_import(&t.name, catalog);
                    simple
                } else {
                    t.name.clone()
                }
            }
        }
    };
    TypeRef::simple(spelled).with_dims(t.dims)
}
