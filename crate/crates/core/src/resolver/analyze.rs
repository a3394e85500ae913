use std::collections::{BTreeSet, HashSet};

use super::typing::dotted_path;
use super::{Diagnostic, DiagnosticKind, Names, ResolutionState};
use crate::apizer::ApiDraft;
use crate::ast::*;
use crate::catalog::TypeCatalog;

/// Reports every unresolved type name, undeclared variable and construct the
/// engine cannot compile. The result is deduplicated per `(kind, identifier)`
/// and sorted by statement index, then identifier.
pub fn analyze(
    draft: &ApiDraft,
    state: &ResolutionState,
    catalog: &TypeCatalog,
) -> Vec<Diagnostic> {
    let mut a = Analyzer {
        names: Names::new(catalog, state),
        scopes: vec![HashSet::new()],
        loops: 0,
        switches: 0,
        statement: 0,
        out: Vec::new(),
    };
    a.ty(&draft.return_type);
    for t in &draft.throws {
        a.ty(t);
    }
    for p in &draft.params {
        a.ty(&p.ty);
        a.declare(&p.name);
    }
    for (i, s) in draft.body.iter().enumerate() {
        a.statement = i;
        a.stmt(s);
    }

    let mut seen = BTreeSet::new();
    let mut diags: Vec<Diagnostic> = a
        .out
        .into_iter()
        .filter(|d| seen.insert((d.kind, d.identifier.clone())))
        .collect();
    diags.sort_by(|x, y| {
        (x.statement, &x.identifier, x.kind).cmp(&(y.statement, &y.identifier, y.kind))
    });
    diags
}

struct Analyzer<'a> {
    names: Names<'a>,
    scopes: Vec<HashSet<String>>,
    loops: usize,
    switches: usize,
    statement: usize,
    out: Vec<Diagnostic>,
}

/// Capitalised and not all-caps: reads as a class name rather than a constant.
fn looks_like_type(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
        && name.chars().any(|c| c.is_ascii_lowercase())
}

impl Analyzer<'_> {
    fn emit(&mut self, kind: DiagnosticKind, identifier: impl Into<String>) {
        self.out.push(Diagnostic {
            kind,
            identifier: identifier.into(),
            statement: self.statement,
        });
    }

    fn declared(&self, name: &str) -> bool {
        self.scopes.iter().any(|s| s.contains(name))
    }

    fn declare(&mut self, name: &str) {
        if self.declared(name) {
            self.emit(DiagnosticKind::Other, name);
        }
        if let Some(s) = self.scopes.last_mut() {
            s.insert(name.to_string());
        }
    }

    fn push(&mut self) {
        self.scopes.push(HashSet::new());
    }

    fn pop(&mut self) {
        self.scopes.pop();
    }

    fn ty(&mut self, t: &TypeRef) {
        if t.is_void() {
            return;
        }
        if let Some(missing) = self.names.first_unresolved(t) {
            self.emit(DiagnosticKind::MissingType, missing);
        }
    }

    fn local(&mut self, lv: &LocalVar) {
        self.ty(&lv.ty);
        for d in &lv.declarators {
            if let Some(init) = &d.init {
                self.expr(init);
            }
            self.declare(&d.name);
        }
    }

    fn block(&mut self, stmts: &[Stmt]) {
        self.push();
        for s in stmts {
            self.stmt(s);
        }
        self.pop();
    }

    fn scoped(&mut self, s: &Stmt) {
        self.push();
        self.stmt(s);
        self.pop();
    }

    fn in_loop(&mut self, f: impl FnOnce(&mut Self)) {
        self.loops += 1;
        f(self);
        self.loops -= 1;
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::LocalVar(lv) => self.local(lv),
            Stmt::Expr(e) | Stmt::Throw(e) => self.expr(e),
            Stmt::Block(b) => self.block(b),
            Stmt::If {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond);
                self.scoped(then);
                if let Some(o) = otherwise {
                    self.scoped(o);
                }
            }
            Stmt::While { cond, body } => {
                self.expr(cond);
                self.in_loop(|a| a.scoped(body));
            }
            Stmt::DoWhile { body, cond } => {
                self.in_loop(|a| a.scoped(body));
                self.expr(cond);
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                self.push();
                match init {
                    Some(ForInit::Decl(lv)) => self.local(lv),
                    Some(ForInit::Exprs(es)) => es.iter().for_each(|e| self.expr(e)),
                    None => {}
                }
                if let Some(c) = cond {
                    self.expr(c);
                }
                update.iter().for_each(|e| self.expr(e));
                self.in_loop(|a| a.scoped(body));
                self.pop();
            }
            Stmt::ForEach {
                var,
                iterable,
                body,
            } => {
                self.expr(iterable);
                self.push();
                self.ty(&var.ty);
                for d in &var.declarators {
                    self.declare(&d.name);
                }
                self.in_loop(|a| a.stmt(body));
                self.pop();
            }
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                self.push();
                for r in resources {
                    self.local(r);
                }
                self.block(body);
                self.pop();
                for c in catches {
                    self.push();
                    for t in &c.types {
                        self.ty(t);
                    }
                    self.declare(&c.name);
                    self.block(&c.body);
                    self.pop();
                }
                if let Some(f) = finally {
                    self.block(f);
                }
            }
            Stmt::Switch { scrutinee, cases } => {
                self.expr(scrutinee);
                self.push();
                self.switches += 1;
                for c in cases {
                    for l in &c.labels {
                        // enum constants are bare names in case labels
                        if l.as_name().is_none() {
                            self.expr(l);
                        }
                    }
                    for s in &c.body {
                        self.stmt(s);
                    }
                }
                self.switches -= 1;
                self.pop();
            }
            Stmt::Return(e) => {
                if let Some(e) = e {
                    self.expr(e);
                }
            }
            Stmt::Break(label) => {
                if label.is_some() || (self.loops == 0 && self.switches == 0) {
                    self.emit(DiagnosticKind::Other, "break");
                }
            }
            Stmt::Continue(label) => {
                if label.is_some() || self.loops == 0 {
                    self.emit(DiagnosticKind::Other, "continue");
                }
            }
            Stmt::Empty => {}
            Stmt::Method(m) => self.emit(DiagnosticKind::Other, m.name.clone()),
            Stmt::Class(c) => self.emit(DiagnosticKind::Other, c.name.clone()),
        }
    }

    /// Target of a member access: a variable, a type, or a package path.
    fn receiver(&mut self, target: &Expr) {
        if let Some(path) = dotted_path(target) {
            let head = path[0];
            if !self.declared(head) {
                for k in (1..=path.len()).rev() {
                    if self.names.resolve(&path[..k].join(".")).is_some() {
                        return;
                    }
                }
                if path.len() > 1 && head.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
                    // `java.util.Foo.bar()` with an unknown qualified type
                    if let Some(k) = (1..path.len()).find(|&k| looks_like_type(path[k])) {
                        let pkg = path[..k].join(".");
                        if self.names.catalog.has_package(&pkg) {
                            self.emit(DiagnosticKind::MissingType, path[..=k].join("."));
                            return;
                        }
                    }
                }
                if looks_like_type(head) {
                    self.emit(DiagnosticKind::MissingType, head);
                } else {
                    self.emit(DiagnosticKind::MissingVariable, head);
                }
                return;
            }
        }
        self.expr(target);
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Literal(_) => {}
            Expr::Name(n) => {
                if !self.declared(n) {
                    self.emit(DiagnosticKind::MissingVariable, n.clone());
                }
            }
            Expr::This => self.emit(DiagnosticKind::Other, "this"),
            Expr::FieldAccess { target, .. } => self.receiver(target),
            Expr::MethodCall { target, name, args } => {
                match target {
                    Some(t) => self.receiver(t),
                    None => self.emit(DiagnosticKind::Other, name.clone()),
                }
                args.iter().for_each(|a| self.expr(a));
            }
            Expr::New { ty, args } => {
                self.ty(ty);
                args.iter().for_each(|a| self.expr(a));
            }
            Expr::NewArray {
                ty, sizes, init, ..
            } => {
                self.ty(ty);
                sizes.iter().for_each(|s| self.expr(s));
                if let Some(items) = init {
                    items.iter().for_each(|i| self.expr(i));
                }
            }
            Expr::ArrayInit(items) => items.iter().for_each(|i| self.expr(i)),
            Expr::Index { target, index } => {
                self.expr(target);
                self.expr(index);
            }
            Expr::Unary { expr, .. } | Expr::Paren(expr) => self.expr(expr),
            Expr::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            Expr::Assign { target, value, .. } => {
                self.expr(target);
                self.expr(value);
            }
            Expr::Conditional {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond);
                self.expr(then);
                self.expr(otherwise);
            }
            Expr::Cast { ty, expr } | Expr::InstanceOf { expr, ty } => {
                self.ty(ty);
                self.expr(expr);
            }
            Expr::ClassLit(ty) => self.ty(ty),
        }
    }
}
