//! Comparison of a reference API with a generated one: parameter sets,
//! Jaccard distance, return equivalence and structural difference.
//!
//! Parameters are compared as unordered sets. Two parameters are the same
//! when their types, identifiers and usage sites in the body all agree.

mod clones;
mod diff;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ast::visit::{rename_in_expr, stmt_exprs, walk_exprs, walk_stmts};
use crate::ast::*;

pub use clones::{
    alpha_rename, alpha_rename_lines, type3_containment, type3_containment_with, CLONE_THRESHOLD,
};
pub use diff::{ast_diff_count, method_tree, simple_type, tree_edit_distance, Node};

/// A parameter with the places where its identifier is read in the body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamEntry {
    /// Type with simple names.
    pub ty: String,
    pub name: String,
    /// `(statement, occurrence)` pairs: the pre-order index of the statement
    /// and the index of the occurrence among the names of that statement.
    pub sites: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParamSet {
    pub entries: Vec<ParamEntry>,
}

fn occurrence_sites(body: &[Stmt], name: &str) -> Vec<(usize, usize)> {
    let mut sites = Vec::new();
    let mut index = 0;
    walk_stmts(body, &mut |s| {
        let mut k = 0;
        for e in stmt_exprs(s) {
            crate::ast::visit::walk_expr(e, &mut |x| {
                if let Expr::Name(n) = x {
                    if n == name {
                        sites.push((index, k));
                    }
                    k += 1;
                }
            });
        }
        index += 1;
    });
    sites
}

impl ParamSet {
    pub fn from_method(m: &MethodDecl) -> Self {
        let body = m.body.as_deref().unwrap_or_default();
        let entries = m
            .params
            .iter()
            .map(|p| ParamEntry {
                ty: simple_type(&p.ty),
                name: p.name.clone(),
                sites: occurrence_sites(body, &p.name),
            })
            .collect();
        ParamSet { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries of `self` with an identical counterpart in `other`.
    pub fn common_with(&self, other: &ParamSet) -> usize {
        self.entries
            .iter()
            .filter(|p| other.entries.iter().any(|q| params_identical(p, q)))
            .count()
    }
}

/// Same type, same identifier and same usage sites.
pub fn params_identical(p: &ParamEntry, q: &ParamEntry) -> bool {
    p == q
}

/// `1 - |H ∩ A| / |H ∪ A|`, and 0 when both sets are empty.
pub fn jaccard_distance(h: &ParamSet, a: &ParamSet) -> f64 {
    let common = h.common_with(a);
    let union = h.len() + a.len() - common;
    if union == 0 {
        0.0
    } else {
        1.0 - common as f64 / union as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReturnCategory {
    VoidVoid,
    VoidNonvoid,
    NonvoidVoid,
    NonvoidNonvoid,
}

impl ReturnCategory {
    pub fn of(h: &MethodDecl, a: &MethodDecl) -> Self {
        match (h.return_type.is_void(), a.return_type.is_void()) {
            (true, true) => ReturnCategory::VoidVoid,
            (true, false) => ReturnCategory::VoidNonvoid,
            (false, true) => ReturnCategory::NonvoidVoid,
            (false, false) => ReturnCategory::NonvoidNonvoid,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ReturnCategory::VoidVoid => "void-void",
            ReturnCategory::VoidNonvoid => "void-nonvoid",
            ReturnCategory::NonvoidVoid => "nonvoid-void",
            ReturnCategory::NonvoidNonvoid => "nonvoid-nonvoid",
        }
    }
}

/// Fuses a final `T a = e; return a;` into `return e;`.
pub fn normalize_return(m: &MethodDecl) -> MethodDecl {
    let mut out = m.clone();
    let Some(body) = out.body.as_mut() else {
        return out;
    };
    let n = body.len();
    if n < 2 {
        return out;
    }
    let fused = match (&body[n - 2], &body[n - 1]) {
        (decl, Stmt::Return(Some(Expr::Name(r)))) => match decl.as_decl_init() {
            Some((ty, v, init)) if v == r => Some(match init {
                Expr::ArrayInit(items) => Expr::NewArray {
                    ty: TypeRef {
                        dims: 0,
                        ..ty.clone()
                    },
                    sizes: Vec::new(),
                    extra_dims: ty.dims,
                    init: Some(items.clone()),
                },
                e => e.clone(),
            }),
            _ => None,
        },
        _ => None,
    };
    if let Some(e) = fused {
        body.truncate(n - 2);
        body.push(Stmt::Return(Some(e)));
    }
    out
}

/// Returned expressions with parameters renamed by order of first use.
fn canonical_returns(m: &MethodDecl) -> Vec<Expr> {
    let body = m.body.as_deref().unwrap_or_default();
    let params: Vec<&str> = m.params.iter().map(|p| p.name.as_str()).collect();
    let mut order: Vec<String> = Vec::new();
    walk_exprs(body, &mut |e| {
        if let Expr::Name(n) = e {
            if params.contains(&n.as_str()) && !order.contains(n) {
                order.push(n.clone());
            }
        }
    });
    let mut returns = Vec::new();
    walk_stmts(body, &mut |s| {
        if let Stmt::Return(Some(e)) = s {
            returns.push(e.clone());
        }
    });
    let placeholders: BTreeMap<&str, String> = order
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), format!("\u{1}p{i}")))
        .collect();
    for e in &mut returns {
        for (from, to) in &placeholders {
            rename_in_expr(e, from, to);
        }
    }
    returns.iter().map(strip_parens).collect()
}

fn strip_parens(e: &Expr) -> Expr {
    let mut e = e.unparen().clone();
    for c in crate::ast::visit::expr_children_mut(&mut e) {
        *c = strip_parens(c);
    }
    e
}

/// Table category and whether both methods return the same thing.
pub fn return_equivalence(h: &MethodDecl, a: &MethodDecl) -> (ReturnCategory, bool) {
    let category = ReturnCategory::of(h, a);
    let equivalent = match category {
        ReturnCategory::VoidVoid => true,
        ReturnCategory::NonvoidNonvoid => {
            simple_type(&h.return_type) == simple_type(&a.return_type)
                && canonical_returns(&normalize_return(h))
                    == canonical_returns(&normalize_return(a))
        }
        _ => false,
    };
    (category, equivalent)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EvalReport {
    pub params_equivalent: bool,
    pub missing: usize,
    pub common: usize,
    pub spurious: usize,
    pub jaccard: f64,
    pub return_category: ReturnCategory,
    pub return_equivalent: bool,
    pub ast_diff: usize,
}

/// Compares a reference method `h` with a generated method `a`.
pub fn evaluate(h: &MethodDecl, a: &MethodDecl) -> EvalReport {
    let ph = ParamSet::from_method(h);
    let pa = ParamSet::from_method(a);
    let common = ph.common_with(&pa);
    let (return_category, return_equivalent) = return_equivalence(h, a);
    EvalReport {
        params_equivalent: common == ph.len() && common == pa.len(),
        missing: ph.len() - common,
        common,
        spurious: pa.len() - common,
        jaccard: jaccard_distance(&ph, &pa),
        return_category,
        return_equivalent,
        ast_diff: ast_diff_count(h, a),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MethodSourceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expected exactly one method, found {0}")]
    MethodCount(usize),
}

/// The single method declared in `text`, possibly inside a class.
pub fn parse_method(text: &str) -> Result<MethodDecl, MethodSourceError> {
    let ast = parse_snippet(text)?;
    let methods = ast.methods();
    match methods.as_slice() {
        [m] => Ok((*m).clone()),
        other => Err(MethodSourceError::MethodCount(other.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(src: &str) -> MethodDecl {
        parse_method(src).unwrap()
    }

    #[test]
    fn identical_parameters() {
        let a = ParamSet::from_method(&m("int f(int week) { return week + 1; }"));
        let b = ParamSet::from_method(&m("int g(int week) { return week + 1; }"));
        assert!(params_identical(&a.entries[0], &b.entries[0]));
        let c = ParamSet::from_method(&m("int g(double week) { return week + 1; }"));
        assert!(!params_identical(&a.entries[0], &c.entries[0]));
        let d = ParamSet::from_method(&m("int g(int wk) { return wk + 1; }"));
        assert!(!params_identical(&a.entries[0], &d.entries[0]));
        let e = ParamSet::from_method(&m("int g(int week) { int z = 0; return week + 1; }"));
        assert!(!params_identical(&a.entries[0], &e.entries[0]));
    }

    #[test]
    fn jaccard_values() {
        let two = ParamSet::from_method(&m("void f(int week, int year) { g(week, year); }"));
        assert_eq!(jaccard_distance(&two, &two), 0.0);
        let empty = ParamSet::default();
        assert_eq!(jaccard_distance(&empty, &empty), 0.0);
        let one = ParamSet::from_method(&m("void f(int a) { g(a); }"));
        assert_eq!(jaccard_distance(&one, &empty), 1.0);
        assert_eq!(jaccard_distance(&empty, &one), 1.0);
    }

    #[test]
    fn normalize_return_cases() {
        let fused = normalize_return(&m("int f(int b, int c) { int a = b + c; return a; }"));
        assert_eq!(fused, m("int f(int b, int c) { return b + c; }"));
        let fixed = m("int f(int x) { return x; }");
        assert_eq!(normalize_return(&fixed), fixed);
        let used = m("int f() { int a = f(); g(a); return a; }");
        assert_eq!(normalize_return(&used), used);
    }

    #[test]
    fn return_categories() {
        let v = m("void f() { }");
        let i = m("int f() { return 1; }");
        assert_eq!(return_equivalence(&v, &v), (ReturnCategory::VoidVoid, true));
        assert_eq!(
            return_equivalence(&v, &i),
            (ReturnCategory::VoidNonvoid, false)
        );
        assert_eq!(
            return_equivalence(&i, &v),
            (ReturnCategory::NonvoidVoid, false)
        );
        let d1 = m("Date f(Calendar c) { return c.getTime(); }");
        let d2 = m("java.util.Date g(Calendar cal) { Date d = cal.getTime(); return d; }");
        assert_eq!(
            return_equivalence(&d1, &d2),
            (ReturnCategory::NonvoidNonvoid, true)
        );
        let d3 = m("Date g(Calendar cal) { return null; }");
        assert!(!return_equivalence(&d1, &d3).1);
    }

    #[test]
    fn report_arithmetic() {
        let h = m("int f(int a, int b) { return a + b; }");
        let a = m("int g(int a, int c) { return a + c; }");
        let r = evaluate(&h, &a);
        assert_eq!((r.missing, r.common, r.spurious), (1, 1, 1));
        assert!((r.jaccard - 2.0 / 3.0).abs() < 1e-9);
        assert!(!r.params_equivalent);
        assert!(r.return_equivalent);
        let json = serde_json::to_string(&r).unwrap();
        assert!(
            json.contains("\"return-category\":\"nonvoid-nonvoid\""),
            "{json}"
        );
    }
}
