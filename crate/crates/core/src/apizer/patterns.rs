use std::collections::BTreeSet;

use super::{ApiDraft, ScopeState};
use crate::ast::visit::{stmt_exprs, walk_expr, walk_stmts};
use crate::ast::*;
use crate::catalog::{TypeCatalog, COLLECTION, MAP};
use crate::resolver::{
    get_type_of_exp, recover_var_type, source_type, Deadline, Diagnostic, DiagnosticKind, Names,
    ResolutionState, ResolveError,
};

/// Method names that add elements to a collection.
const INSERTIONS: [&str; 5] = ["add", "put", "push", "offer", "addAll"];

fn root_name(e: &Expr) -> Option<&str> {
    match e {
        Expr::Name(n) => Some(n),
        Expr::Index { target, .. } => root_name(target),
        Expr::Paren(inner) => root_name(inner),
        _ => None,
    }
}

fn collect_mutations(e: &Expr, out: &mut BTreeSet<String>) {
    walk_expr(e, &mut |x| match x {
        Expr::Assign { target, .. } => out.extend(root_name(target).map(str::to_string)),
        Expr::Unary { op, expr } if op.is_mutation() => {
            out.extend(root_name(expr).map(str::to_string))
        }
        _ => {}
    });
}

fn collect_stmt_mutations(s: &Stmt, out: &mut BTreeSet<String>) {
    walk_stmts(std::slice::from_ref(s), &mut |x| {
        for e in stmt_exprs(x) {
            collect_mutations(e, out);
        }
    });
}

/// Variables assigned, incremented or decremented inside a loop body, loop
/// condition or update clause, at any depth.
pub fn get_loop_changing_vars(body: &[Stmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    walk_stmts(body, &mut |s| match s {
        Stmt::While { cond, body } | Stmt::DoWhile { body, cond } => {
            collect_mutations(cond, &mut out);
            collect_stmt_mutations(body, &mut out);
        }
        Stmt::For {
            cond, update, body, ..
        } => {
            if let Some(c) = cond {
                collect_mutations(c, &mut out);
            }
            for u in update {
                collect_mutations(u, &mut out);
            }
            collect_stmt_mutations(body, &mut out);
        }
        Stmt::ForEach { body, .. } => collect_stmt_mutations(body, &mut out),
        _ => {}
    });
    out
}

/// No variable, class or method names: only literals and operators.
fn is_literal_only(e: &Expr) -> bool {
    let mut ok = true;
    walk_expr(e, &mut |x| match x {
        Expr::Literal(Literal::Null) => ok = false,
        Expr::Literal(_)
        | Expr::Unary { .. }
        | Expr::Binary { .. }
        | Expr::Paren(_)
        | Expr::Conditional { .. }
        | Expr::ArrayInit(_) => {}
        Expr::Cast { ty, .. } if ty.is_primitive() => {}
        Expr::NewArray { ty, .. } if ty.is_primitive() || ty.name == "String" => {}
        _ => ok = false,
    });
    ok
}

fn count_insertions(v: &str, following: &[Stmt]) -> usize {
    let mut n = 0;
    walk_stmts(following, &mut |s| {
        if let Stmt::Expr(e) = s {
            match e.unparen() {
                Expr::MethodCall {
                    target: Some(t),
                    name,
                    ..
                } if t.as_name() == Some(v) && INSERTIONS.contains(&name.as_str()) => n += 1,
                Expr::Assign {
                    op: None, target, ..
                } if matches!(target.unparen(), Expr::Index { .. })
                    && root_name(target) == Some(v) =>
                {
                    n += 1
                }
                _ => {}
            }
        }
    });
    n
}

/// Whether `τ v = ε` initializes `v` with a hard-coded value.
///
/// Primitives and strings are hard-coded when `ε` contains no identifiers.
/// Arrays are hard-coded with a literal-only initializer, or when more than
/// one element store follows. Collections and maps are hard-coded when built
/// without identifiers and more than one insertion call follows.
pub fn is_hard_coded(
    ty: &TypeRef,
    init: &Expr,
    v: &str,
    following: &[Stmt],
    state: &ResolutionState,
    catalog: &TypeCatalog,
) -> bool {
    let names = Names::new(catalog, state);
    let resolved = names.resolve(&ty.name);
    if ty.dims > 0 {
        return match init.unparen() {
            Expr::ArrayInit(_) | Expr::NewArray { init: Some(_), .. } => is_literal_only(init),
            Expr::NewArray {
                sizes, init: None, ..
            } => sizes.iter().all(is_literal_only) && count_insertions(v, following) > 1,
            _ => false,
        };
    }
    if ty.is_primitive() || resolved.as_deref() == Some(crate::catalog::STRING) {
        return is_literal_only(init);
    }
    let Some(q) = resolved else {
        return false;
    };
    let container = catalog.is_subtype_of(&q, COLLECTION).unwrap_or(false)
        || catalog.is_subtype_of(&q, MAP).unwrap_or(false);
    let fresh = match init.unparen() {
        Expr::New { args, .. } => args.iter().all(is_literal_only),
        _ => false,
    };
    container && fresh && count_insertions(v, following) > 1
}

/// P1: every undeclared variable becomes a parameter of its recovered type.
pub fn extract_parameters_p1(
    draft: &mut ApiDraft,
    diags: &[Diagnostic],
    scope: &mut ScopeState,
    catalog: &TypeCatalog,
    deadline: Deadline,
) -> Result<(), ResolveError> {
    for d in diags
        .iter()
        .filter(|d| d.kind == DiagnosticKind::MissingVariable)
    {
        deadline.check()?;
        if draft.params.iter().any(|p| p.name == d.identifier) {
            continue;
        }
        let rec = recover_var_type(&d.identifier, draft, &draft.resolution, catalog, deadline)?;
        draft
            .params
            .push(Parameter::new(rec.ty.clone(), d.identifier.clone()));
        scope.types.insert(d.identifier.clone(), rec.ty);
        draft.resolution = rec.state;
    }
    Ok(())
}

/// P2: hard-coded initializations of variables that no loop changes become
/// parameters and their statements are removed. Only top-level statements
/// are scanned.
pub fn extract_parameters_p2(draft: &mut ApiDraft, scope: &mut ScopeState, catalog: &TypeCatalog) {
    scope.lp_vars = get_loop_changing_vars(&draft.body);
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut extracted: Vec<Parameter> = Vec::new();
    for (i, s) in draft.body.iter().enumerate() {
        let following = &draft.body[i + 1..];
        if let Some((ty, v, init)) = s.as_decl_init() {
            scope.types.insert(v.to_string(), ty.clone());
            scope.already_init.insert(v.to_string());
            if !scope.lp_vars.contains(v)
                && is_hard_coded(&ty, init, v, following, &draft.resolution, catalog)
            {
                extracted.push(Parameter::new(ty, v));
                removed.insert(i);
            }
        } else if let Some((ty, v)) = s.as_decl_only() {
            scope.types.insert(v.to_string(), ty);
            scope.decls.insert(v.to_string(), i);
        } else if let Some((v, init)) = s.as_simple_assignment() {
            if scope.already_init.contains(v) {
                continue;
            }
            scope.already_init.insert(v.to_string());
            let (Some(ty), Some(&decl)) = (scope.types.get(v), scope.decls.get(v)) else {
                continue;
            };
            if !scope.lp_vars.contains(v)
                && is_hard_coded(ty, init, v, following, &draft.resolution, catalog)
            {
                extracted.push(Parameter::new(ty.clone(), v));
                removed.insert(i);
                removed.insert(decl);
            }
        }
    }
    if removed.is_empty() {
        return;
    }
    draft.params.extend(extracted);
    let body = std::mem::take(&mut draft.body);
    draft.body = body
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, s)| s)
        .collect();
}

/// The statement treated as last: the last top-level statement, or the last
/// statement inside a trailing `try` block.
pub fn last_statement(body: &[Stmt]) -> Option<&Stmt> {
    match body.last()? {
        Stmt::Try { body: inner, .. } if !inner.is_empty() => last_statement(inner),
        s => Some(s),
    }
}

fn last_statement_mut(body: &mut [Stmt]) -> Option<&mut Stmt> {
    let last = body.last_mut()?;
    if matches!(last, Stmt::Try { body, .. } if !body.is_empty()) {
        if let Stmt::Try { body, .. } = last {
            return last_statement_mut(body);
        }
    }
    Some(last)
}

fn is_println(e: &Expr) -> Option<&Expr> {
    match e.unparen() {
        Expr::MethodCall {
            target: Some(t),
            name,
            args,
        } if name == "println" && args.len() == 1 => match t.as_ref() {
            Expr::FieldAccess { target, name }
                if name == "out" && target.as_name() == Some("System") =>
            {
                Some(&args[0])
            }
            _ => None,
        },
        _ => None,
    }
}

/// Removes the leftmost string literal of a `+` chain. A lone literal is kept.
fn strip_leading_literal(e: &Expr) -> Expr {
    fn strip(e: &Expr) -> Option<Expr> {
        match e {
            Expr::Binary {
                op: BinaryOp::Add,
                lhs,
                rhs,
            } => {
                if lhs.unparen().is_string_literal() {
                    Some(rhs.as_ref().clone())
                } else {
                    strip(lhs).map(|l| Expr::Binary {
                        op: BinaryOp::Add,
                        lhs: Box::new(l),
                        rhs: rhs.clone(),
                    })
                }
            }
            Expr::Paren(inner) => strip(inner),
            _ => None,
        }
    }
    strip(e).unwrap_or_else(|| e.clone())
}

/// Scope types extended with every declaration in the body and the parameters.
fn flat_scope(draft: &ApiDraft, scope: &ScopeState) -> ScopeState {
    let mut flat = scope.clone();
    for p in &draft.params {
        flat.types
            .entry(p.name.clone())
            .or_insert_with(|| p.ty.clone());
    }
    walk_stmts(&draft.body, &mut |s| {
        let mut add = |lv: &LocalVar| {
            for d in &lv.declarators {
                flat.types
                    .entry(d.name.clone())
                    .or_insert_with(|| lv.type_of(d));
            }
        };
        match s {
            Stmt::LocalVar(lv) => add(lv),
            Stmt::For {
                init: Some(ForInit::Decl(lv)),
                ..
            }
            | Stmt::ForEach { var: lv, .. } => add(lv),
            Stmt::Try { resources, .. } => resources.iter().for_each(add),
            _ => {}
        }
    });
    flat
}

/// P3 and P4: the last statement becomes the return statement.
pub fn extract_return(
    draft: &mut ApiDraft,
    scope: &mut ScopeState,
    catalog: &TypeCatalog,
) -> Result<(), ResolveError> {
    let flat = flat_scope(draft, scope);
    let Some(last) = last_statement(&draft.body) else {
        draft.return_type = TypeRef::void();
        return Ok(());
    };

    let (value, ty) = if let Some((ty, _, init)) = last.as_decl_init() {
        let value = match init {
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
        };
        (value, ty)
    } else if let Some((v, init)) = last.as_simple_assignment() {
        let ty = flat
            .types
            .get(v)
            .cloned()
            .ok_or_else(|| ResolveError::Untypeable(v.to_string()))?;
        (init.clone(), ty)
    } else if let Some(arg) = match last {
        Stmt::Expr(e) => is_println(e),
        _ => None,
    } {
        let value = strip_leading_literal(arg);
        let jt = get_type_of_exp(&value, &flat, &draft.resolution, catalog)?;
        if jt.is_null() {
            return Err(ResolveError::Untypeable(render_expr(&value)));
        }
        let ty = source_type(&jt, &mut draft.resolution, catalog);
        (value, ty)
    } else if let Stmt::Return(Some(e)) = last {
        let jt = get_type_of_exp(e, &flat, &draft.resolution, catalog)?;
        let ty = source_type(&jt, &mut draft.resolution, catalog);
        (e.clone(), ty)
    } else {
        draft.return_type = TypeRef::void();
        return Ok(());
    };

    if let Some(slot) = last_statement_mut(&mut draft.body) {
        *slot = Stmt::Return(Some(value));
    }
    draft.return_type = ty;
    Ok(())
}
