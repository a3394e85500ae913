//! The APIzation pipeline: turns a parsed snippet into a method declaration.
//!
//! Steps, in order:
//! 1. classify the unit and return early for finished or unusable input;
//! 2. repair imports and turn undeclared variables into parameters (P1),
//!    re-running the diagnostic engine until it reports nothing;
//! 3. turn hard-coded initializations into parameters (P2);
//! 4. turn the last statement into the return statement (P3, P4).

mod patterns;
mod unit;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::ast::visit::stmts_mention;
use crate::ast::*;
use crate::catalog::TypeCatalog;
use crate::namegen::{generate_method_name, SoPage, VerbLexicon};
use crate::resolver::{
    analyze, resolve_imports, Deadline, DiagnosticKind, ResolutionState, ResolveError,
};

pub use patterns::{
    extract_parameters_p1, extract_parameters_p2, extract_return, get_loop_changing_vars,
    is_hard_coded, last_statement,
};
pub use unit::{check_consistency, render_unit, ConsistencyError};

/// Method declaration under construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiDraft {
    pub modifiers: Vec<String>,
    pub return_type: TypeRef,
    pub name: String,
    pub params: Vec<Parameter>,
    pub throws: Vec<TypeRef>,
    pub body: Vec<Stmt>,
    pub resolution: ResolutionState,
}

impl ApiDraft {
    /// `public static void snippet() throws Exception` around `body`.
    pub fn initial(body: Vec<Stmt>) -> Self {
        ApiDraft {
            modifiers: vec!["public".into(), "static".into()],
            return_type: TypeRef::void(),
            name: "snippet".into(),
            params: Vec::new(),
            throws: vec![TypeRef::simple("Exception")],
            body,
            resolution: ResolutionState::default(),
        }
    }

    pub fn from_method(m: &MethodDecl, resolution: ResolutionState) -> Self {
        ApiDraft {
            modifiers: m.modifiers.clone(),
            return_type: m.return_type.clone(),
            name: m.name.clone(),
            params: m.params.clone(),
            throws: m.throws.clone(),
            body: m.body.clone().unwrap_or_default(),
            resolution,
        }
    }

    pub fn to_method(&self) -> MethodDecl {
        MethodDecl {
            modifiers: self.modifiers.clone(),
            return_type: self.return_type.clone(),
            name: self.name.clone(),
            params: self.params.clone(),
            throws: self.throws.clone(),
            body: Some(self.body.clone()),
        }
    }
}

/// Per-snippet analysis state shared by the patterns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScopeState {
    /// Declared or recovered type of each variable.
    pub types: BTreeMap<String, TypeRef>,
    /// Index of the top-level statement declaring a variable without initializer.
    pub decls: BTreeMap<String, usize>,
    pub already_init: BTreeSet<String>,
    pub lp_vars: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "kebab-case")]
pub enum Outcome {
    Apized,
    AlreadyApi,
    Skipped(String),
    Failed(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Apized => "apized",
            Outcome::AlreadyApi => "already-api",
            Outcome::Skipped(_) => "skipped",
            Outcome::Failed(_) => "failed",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Apized | Outcome::AlreadyApi)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Skipped(r) | Outcome::Failed(r) => write!(f, "{}: {r}", self.label()),
            _ => f.write_str(self.label()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApizationResult {
    pub draft: ApiDraft,
    pub class_name: String,
    pub javadoc: String,
    pub outcome: Outcome,
    /// Diagnostics reported for the initial draft.
    pub initial_diagnostics: usize,
    /// Rounds of the repair loop.
    pub iterations: usize,
}

impl ApizationResult {
    /// The compilation unit, for successful outcomes.
    pub fn source(&self) -> Option<String> {
        if !self.outcome.is_success() {
            return None;
        }
        render_unit(&self.draft, &self.class_name, &self.javadoc).ok()
    }
}

/// Knobs for [`apize_with`].
#[derive(Debug, Clone)]
pub struct ApizeOptions<'a> {
    pub budget: Duration,
    pub lexicon: Option<&'a VerbLexicon>,
}

impl Default for ApizeOptions<'_> {
    fn default() -> Self {
        ApizeOptions {
            budget: Duration::from_secs(10),
            lexicon: None,
        }
    }
}

pub fn apize(
    snippet: &str,
    page: &SoPage,
    catalog: &TypeCatalog,
    budget: Duration,
) -> ApizationResult {
    apize_with(
        snippet,
        page,
        catalog,
        &ApizeOptions {
            budget,
            lexicon: None,
        },
    )
}

pub fn apize_with(
    snippet: &str,
    page: &SoPage,
    catalog: &TypeCatalog,
    options: &ApizeOptions,
) -> ApizationResult {
    let deadline = Deadline::after(options.budget);
    let class_name = format!("Snippet{}", page.answer_id);
    let javadoc = page.javadoc();
    let mut result = ApizationResult {
        draft: ApiDraft::initial(Vec::new()),
        class_name,
        javadoc,
        outcome: Outcome::Failed(String::new()),
        initial_diagnostics: 0,
        iterations: 0,
    };

    let ast = match parse_snippet(snippet) {
        Ok(ast) => ast,
        Err(e) => {
            result.outcome = Outcome::Failed(format!("parse: {e}"));
            return result;
        }
    };

    let mut state = ResolutionState::default();
    for import in ast.imports.iter().filter(|i| !i.is_static) {
        state.add_import(&import.display(), catalog);
    }

    let (body, seed_params) = match classify_unit(&ast) {
        UnitClass::WellFormedApi(m) => {
            result.draft = ApiDraft::from_method(&m, state);
            result.outcome = Outcome::AlreadyApi;
            return result;
        }
        UnitClass::Ambiguous => {
            result.outcome = Outcome::Skipped("ambiguous".into());
            return result;
        }
        UnitClass::Impossible => {
            result.outcome = Outcome::Skipped("impossible".into());
            return result;
        }
        UnitClass::Dangling => dangling_body(&ast),
    };

    let mut draft = ApiDraft::initial(body);
    draft.params = seed_params;
    draft.name = generate_method_name(&page.title, page.answer_id, options.lexicon);
    draft.resolution = state;

    match run(&mut draft, &mut result, catalog, deadline) {
        Ok(()) => result.outcome = Outcome::Apized,
        Err(reason) => result.outcome = Outcome::Failed(reason),
    }
    result.draft = draft;
    result
}

/// Statements to APIze. A lone method that is not yet well formed
/// contributes its body and parameters.
fn dangling_body(ast: &SnippetAst) -> (Vec<Stmt>, Vec<Parameter>) {
    let loose = ast
        .statements
        .iter()
        .any(|s| !matches!(s, Stmt::Method(_) | Stmt::Class(_)));
    let methods = ast.methods();
    if !loose && methods.len() == 1 {
        let m = methods[0];
        return (m.body.clone().unwrap_or_default(), m.params.clone());
    }
    (ast.statements.clone(), Vec::new())
}

fn failure(e: ResolveError) -> String {
    match e {
        ResolveError::Budget => "budget".into(),
        ResolveError::Unresolvable(id) => format!("unresolvable: {id}"),
        ResolveError::Unrecoverable(id) => format!("unrecoverable: {id}"),
        ResolveError::Untypeable(e) => format!("untypeable: {e}"),
    }
}

fn run(
    draft: &mut ApiDraft,
    result: &mut ApizationResult,
    catalog: &TypeCatalog,
    deadline: Deadline,
) -> Result<(), String> {
    let mut scope = ScopeState::default();
    for p in &draft.params {
        scope.types.insert(p.name.clone(), p.ty.clone());
    }

    let mut diags = analyze(draft, &draft.resolution, catalog);
    result.initial_diagnostics = diags.len();
    while !diags.is_empty() {
        deadline.check().map_err(failure)?;
        if let Some(d) = diags.iter().find(|d| d.kind == DiagnosticKind::Other) {
            return Err(format!("other: {}", d.identifier));
        }
        result.iterations += 1;
        if diags.iter().any(|d| d.kind == DiagnosticKind::MissingType) {
            draft.resolution = resolve_imports(draft, &diags, &draft.resolution, catalog, deadline)
                .map_err(failure)?;
        } else {
            extract_parameters_p1(draft, &diags, &mut scope, catalog, deadline).map_err(failure)?;
        }
        let next = analyze(draft, &draft.resolution, catalog);
        if next.len() >= diags.len() {
            return Err("no progress".into());
        }
        diags = next;
    }

    deadline.check().map_err(failure)?;
    extract_parameters_p2(draft, &mut scope, catalog);
    deadline.check().map_err(failure)?;
    extract_return(draft, &mut scope, catalog).map_err(failure)?;

    draft.params.retain(|p| stmts_mention(&draft.body, &p.name));
    if let Some(d) = analyze(draft, &draft.resolution, catalog).first() {
        return Err(format!("unresolved {}: {}", d.kind, d.identifier));
    }
    check_consistency(draft).map_err(|e| e.to_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page() -> SoPage {
        SoPage::new(
            "How to add two numbers",
            "https://stackoverflow.com/a/1",
            1,
            1,
        )
    }

    fn run_apize(src: &str) -> ApizationResult {
        apize(
            src,
            &page(),
            TypeCatalog::bundled(),
            Duration::from_secs(10),
        )
    }

    #[test]
    fn ambiguous_and_impossible_units_are_skipped() {
        assert_eq!(
            run_apize("class A {}\nclass B {}").outcome,
            Outcome::Skipped("ambiguous".into())
        );
        assert_eq!(
            run_apize("interface I { int size(); }").outcome,
            Outcome::Skipped("impossible".into())
        );
    }

    #[test]
    fn well_formed_method_is_returned_unchanged() {
        let r = run_apize("public static int id(int x){return x;}");
        assert_eq!(r.outcome, Outcome::AlreadyApi);
        assert_eq!(r.draft.name, "id");
    }

    #[test]
    fn parse_errors_fail() {
        assert!(
            matches!(run_apize("int a = ;").outcome, Outcome::Failed(r) if r.starts_with("parse"))
        );
    }

    #[test]
    fn unknown_helper_call_fails_with_other() {
        assert_eq!(
            run_apize("int a = compute();").outcome,
            Outcome::Failed("other: compute".into())
        );
    }

    #[test]
    fn simple_sum() {
        let r = run_apize("int a = 3;\nint b = 4;\nint sum = a + b;");
        assert_eq!(r.outcome, Outcome::Apized);
        let m = r.draft.to_method();
        assert_eq!(render_type(&m.return_type), "int");
        assert_eq!(m.params.len(), 2);
        assert_eq!(r.draft.name, "addNumbers");
        let src = r.source().unwrap();
        assert!(src.contains("return a + b;"), "{src}");
    }
}
