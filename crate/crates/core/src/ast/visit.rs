//! Tree traversal helpers shared by the analyses.

use std::collections::BTreeSet;

use super::*;

/// Direct sub-expressions of an expression.
pub fn expr_children(e: &Expr) -> Vec<&Expr> {
    match e {
        Expr::Literal(_) | Expr::Name(_) | Expr::This | Expr::ClassLit(_) => Vec::new(),
        Expr::FieldAccess { target, .. } => vec![target],
        Expr::MethodCall { target, args, .. } => {
            let mut v: Vec<&Expr> = target.iter().map(|t| t.as_ref()).collect();
            v.extend(args.iter());
            v
        }
        Expr::New { args, .. } => args.iter().collect(),
        Expr::NewArray { sizes, init, .. } => {
            let mut v: Vec<&Expr> = sizes.iter().collect();
            if let Some(elems) = init {
                v.extend(elems.iter());
            }
            v
        }
        Expr::ArrayInit(elems) => elems.iter().collect(),
        Expr::Index { target, index } => vec![target, index],
        Expr::Unary { expr, .. } | Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => {
            vec![expr]
        }
        Expr::Paren(inner) => vec![inner],
        Expr::Binary { lhs, rhs, .. } => vec![lhs, rhs],
        Expr::Assign { target, value, .. } => vec![target, value],
        Expr::Conditional {
            cond,
            then,
            otherwise,
        } => vec![cond, then, otherwise],
    }
}

pub fn expr_children_mut(e: &mut Expr) -> Vec<&mut Expr> {
    match e {
        Expr::Literal(_) | Expr::Name(_) | Expr::This | Expr::ClassLit(_) => Vec::new(),
        Expr::FieldAccess { target, .. } => vec![target.as_mut()],
        Expr::MethodCall { target, args, .. } => {
            let mut v: Vec<&mut Expr> = target.iter_mut().map(|t| t.as_mut()).collect();
            v.extend(args.iter_mut());
            v
        }
        Expr::New { args, .. } => args.iter_mut().collect(),
        Expr::NewArray { sizes, init, .. } => {
            let mut v: Vec<&mut Expr> = sizes.iter_mut().collect();
            if let Some(elems) = init {
                v.extend(elems.iter_mut());
            }
            v
        }
        Expr::ArrayInit(elems) => elems.iter_mut().collect(),
        Expr::Index { target, index } => vec![target.as_mut(), index.as_mut()],
        Expr::Unary { expr, .. } | Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => {
            vec![expr.as_mut()]
        }
        Expr::Paren(inner) => vec![inner.as_mut()],
        Expr::Binary { lhs, rhs, .. } => vec![lhs.as_mut(), rhs.as_mut()],
        Expr::Assign { target, value, .. } => vec![target.as_mut(), value.as_mut()],
        Expr::Conditional {
            cond,
            then,
            otherwise,
        } => vec![cond.as_mut(), then.as_mut(), otherwise.as_mut()],
    }
}

/// Expressions owned directly by a statement (not by nested statements).
pub fn stmt_exprs(s: &Stmt) -> Vec<&Expr> {
    match s {
        Stmt::LocalVar(lv) => lv
            .declarators
            .iter()
            .filter_map(|d| d.init.as_ref())
            .collect(),
        Stmt::Expr(e) | Stmt::Throw(e) => vec![e],
        Stmt::If { cond, .. } | Stmt::While { cond, .. } | Stmt::DoWhile { cond, .. } => vec![cond],
        Stmt::For {
            init, cond, update, ..
        } => {
            let mut v = Vec::new();
            match init {
                Some(ForInit::Decl(lv)) => {
                    v.extend(lv.declarators.iter().filter_map(|d| d.init.as_ref()))
                }
                Some(ForInit::Exprs(es)) => v.extend(es.iter()),
                None => {}
            }
            v.extend(cond.iter());
            v.extend(update.iter());
            v
        }
        Stmt::ForEach { iterable, .. } => vec![iterable],
        Stmt::Try { resources, .. } => resources
            .iter()
            .flat_map(|lv| lv.declarators.iter().filter_map(|d| d.init.as_ref()))
            .collect(),
        Stmt::Switch { scrutinee, cases } => {
            let mut v = vec![scrutinee];
            for c in cases {
                v.extend(c.labels.iter());
            }
            v
        }
        Stmt::Return(e) => e.iter().collect(),
        Stmt::Block(_)
        | Stmt::Break(_)
        | Stmt::Continue(_)
        | Stmt::Empty
        | Stmt::Method(_)
        | Stmt::Class(_) => Vec::new(),
    }
}

pub fn stmt_exprs_mut(s: &mut Stmt) -> Vec<&mut Expr> {
    match s {
        Stmt::LocalVar(lv) => lv
            .declarators
            .iter_mut()
            .filter_map(|d| d.init.as_mut())
            .collect(),
        Stmt::Expr(e) | Stmt::Throw(e) => vec![e],
        Stmt::If { cond, .. } | Stmt::While { cond, .. } | Stmt::DoWhile { cond, .. } => vec![cond],
        Stmt::For {
            init, cond, update, ..
        } => {
            let mut v = Vec::new();
            match init {
                Some(ForInit::Decl(lv)) => {
                    v.extend(lv.declarators.iter_mut().filter_map(|d| d.init.as_mut()))
                }
                Some(ForInit::Exprs(es)) => v.extend(es.iter_mut()),
                None => {}
            }
            v.extend(cond.iter_mut());
            v.extend(update.iter_mut());
            v
        }
        Stmt::ForEach { iterable, .. } => vec![iterable],
        Stmt::Try { resources, .. } => resources
            .iter_mut()
            .flat_map(|lv| lv.declarators.iter_mut().filter_map(|d| d.init.as_mut()))
            .collect(),
        Stmt::Switch { scrutinee, cases } => {
            let mut v = vec![scrutinee];
            for c in cases {
                v.extend(c.labels.iter_mut());
            }
            v
        }
        Stmt::Return(e) => e.iter_mut().collect(),
        Stmt::Block(_)
        | Stmt::Break(_)
        | Stmt::Continue(_)
        | Stmt::Empty
        | Stmt::Method(_)
        | Stmt::Class(_) => Vec::new(),
    }
}

/// Statements nested directly inside a statement.
pub fn child_stmts(s: &Stmt) -> Vec<&Stmt> {
    match s {
        Stmt::Block(b) => b.iter().collect(),
        Stmt::If {
            then, otherwise, ..
        } => {
            let mut v = vec![then.as_ref()];
            v.extend(otherwise.iter().map(|o| o.as_ref()));
            v
        }
        Stmt::While { body, .. }
        | Stmt::DoWhile { body, .. }
        | Stmt::For { body, .. }
        | Stmt::ForEach { body, .. } => vec![body],
        Stmt::Try {
            body,
            catches,
            finally,
            ..
        } => {
            let mut v: Vec<&Stmt> = body.iter().collect();
            for c in catches {
                v.extend(c.body.iter());
            }
            if let Some(f) = finally {
                v.extend(f.iter());
            }
            v
        }
        Stmt::Switch { cases, .. } => cases.iter().flat_map(|c| c.body.iter()).collect(),
        Stmt::Method(m) => m.body.iter().flatten().collect(),
        Stmt::Class(c) => c
            .members
            .iter()
            .flat_map(|m| match m {
                Member::Method(m) | Member::Constructor(m) => m.body.iter().flatten().collect(),
                Member::Field(_) => Vec::new(),
            })
            .collect(),
        _ => Vec::new(),
    }
}

pub fn child_stmts_mut(s: &mut Stmt) -> Vec<&mut Stmt> {
    match s {
        Stmt::Block(b) => b.iter_mut().collect(),
        Stmt::If {
            then, otherwise, ..
        } => {
            let mut v = vec![then.as_mut()];
            v.extend(otherwise.iter_mut().map(|o| o.as_mut()));
            v
        }
        Stmt::While { body, .. }
        | Stmt::DoWhile { body, .. }
        | Stmt::For { body, .. }
        | Stmt::ForEach { body, .. } => vec![body.as_mut()],
        Stmt::Try {
            body,
            catches,
            finally,
            ..
        } => {
            let mut v: Vec<&mut Stmt> = body.iter_mut().collect();
            for c in catches {
                v.extend(c.body.iter_mut());
            }
            if let Some(f) = finally {
                v.extend(f.iter_mut());
            }
            v
        }
        Stmt::Switch { cases, .. } => cases.iter_mut().flat_map(|c| c.body.iter_mut()).collect(),
        _ => Vec::new(),
    }
}

/// Pre-order walk over every expression node reachable from `stmts`.
pub fn walk_exprs<'a>(stmts: &'a [Stmt], f: &mut impl FnMut(&'a Expr)) {
    for s in stmts {
        walk_stmt_exprs(s, f);
    }
}

pub fn walk_stmt_exprs<'a>(s: &'a Stmt, f: &mut impl FnMut(&'a Expr)) {
    for e in stmt_exprs(s) {
        walk_expr(e, f);
    }
    for c in child_stmts(s) {
        walk_stmt_exprs(c, f);
    }
}

pub fn walk_expr<'a>(e: &'a Expr, f: &mut impl FnMut(&'a Expr)) {
    f(e);
    for c in expr_children(e) {
        walk_expr(c, f);
    }
}

/// Pre-order walk over every statement, including nested ones.
pub fn walk_stmts<'a>(stmts: &'a [Stmt], f: &mut impl FnMut(&'a Stmt)) {
    for s in stmts {
        f(s);
        for c in child_stmts(s) {
            walk_stmts(std::slice::from_ref(c), f);
        }
    }
}

/// Whether the simple name `name` occurs as a value reference in `e`.
pub fn expr_mentions(e: &Expr, name: &str) -> bool {
    let mut found = false;
    walk_expr(e, &mut |x| {
        if let Expr::Name(n) = x {
            found |= n == name;
        }
    });
    found
}

pub fn stmt_mentions(s: &Stmt, name: &str) -> bool {
    let mut found = false;
    walk_stmt_exprs(s, &mut |x| {
        if let Expr::Name(n) = x {
            found |= n == name;
        }
    });
    found
}

pub fn stmts_mention(stmts: &[Stmt], name: &str) -> bool {
    stmts.iter().any(|s| stmt_mentions(s, name))
}

/// All simple names used in value position.
pub fn referenced_names(stmts: &[Stmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    walk_exprs(stmts, &mut |e| {
        if let Expr::Name(n) = e {
            out.insert(n.clone());
        }
    });
    out
}

/// Replaces every `Name(from)` with `Name(to)` in place.
pub fn rename_in_expr(e: &mut Expr, from: &str, to: &str) {
    if let Expr::Name(n) = e {
        if n == from {
            *n = to.to_string();
        }
    }
    for c in expr_children_mut(e) {
        rename_in_expr(c, from, to);
    }
}
