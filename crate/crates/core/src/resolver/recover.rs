//! Type recovery for undeclared variables from the way they are used.
//!
//! Every use of the variable proposes candidate types (the receiver of a
//! method, an operand of `*`, an argument of a known call, ...). Candidates are
//! ranked by how many uses they satisfy and then validated one by one: the
//! first type that makes the body type-check and introduces no new
//! diagnostics wins.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use super::typing::Typer;
use super::{
    analyze, assignable, package_priority, source_type, type_check, Deadline, DiagnosticKind,
    JType, Names, ResolutionState, ResolveError,
};
use crate::apizer::ApiDraft;
use crate::ast::visit::walk_stmts;
use crate::ast::*;
use crate::catalog::{TypeCatalog, ITERABLE, OBJECT, STRING};

/// A recovered declaration type: its source spelling, the resolved type and
/// the resolution state including any import it needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovered {
    pub ty: TypeRef,
    pub qualified: JType,
    pub state: ResolutionState,
}

/// How the surrounding code uses one occurrence of the variable.
#[derive(Debug, Clone)]
enum Slot<'e> {
    Any,
    Expect(JType),
    ExpectOf(&'e Expr),
    Source(&'e Expr),
    Arg {
        target: &'e Expr,
        method: &'e str,
        arity: usize,
        pos: usize,
    },
    Numeric,
    Boolean,
    Concat,
    Receiver {
        method: &'e str,
        arity: usize,
    },
    Field(&'e str),
    Indexed(Box<Slot<'e>>),
    Iterable(Option<JType>),
    Switch,
}

const NUMERIC: [&str; 4] = ["int", "long", "double", "float"];

/// Fixed preference among otherwise equal candidates.
const PREFERRED: [&str; 10] = [
    "int", "long", "double", "float", "boolean", "char", "short", "byte", OBJECT, STRING,
];

pub fn recover_var_type(
    v: &str,
    draft: &ApiDraft,
    state: &ResolutionState,
    catalog: &TypeCatalog,
    deadline: Deadline,
) -> Result<Recovered, ResolveError> {
    let names = Names::new(catalog, state);
    let typer = flat_typer(draft, names, v);

    let mut slots = Vec::new();
    let mut collector = Collector {
        v,
        typer: &typer,
        out: &mut slots,
    };
    for s in &draft.body {
        collector.stmt(s);
    }
    deadline.check()?;

    let mut candidates: BTreeSet<JType> = BTreeSet::new();
    for slot in &slots {
        candidates.extend(propose(slot, &typer, catalog));
    }
    if candidates.is_empty() && slots.iter().any(|s| matches!(s, Slot::Field("length"))) {
        candidates.insert(JType::new("int", 1));
    }
    if candidates.is_empty() {
        return Err(ResolveError::Unrecoverable(v.to_string()));
    }

    let mut ranked: Vec<(usize, JType)> = candidates
        .into_iter()
        .map(|c| {
            let score = slots
                .iter()
                .filter(|s| compatible(&c, s, &typer, catalog))
                .count();
            (score, c)
        })
        .collect();
    ranked.sort_by_key(|(score, c)| {
        let pref = PREFERRED
            .iter()
            .position(|p| *p == c.name)
            .unwrap_or(PREFERRED.len());
        let pkg = c.name.rsplit_once('.').map_or("", |(p, _)| p).to_string();
        (
            Reverse(*score),
            c.dims,
            pref,
            package_priority(&pkg),
            c.name.clone(),
        )
    });

    let baseline: Vec<_> = analyze(draft, state, catalog)
        .into_iter()
        .filter(|d| d.identifier != v)
        .collect();
    for (_, candidate) in ranked {
        deadline.check()?;
        let mut trial_state = state.clone();
        let ty = source_type(&candidate, &mut trial_state, catalog);
        if ty.name.contains('.') {
            // the simple name already refers to another imported type
            continue;
        }
        let mut trial = draft.clone();
        trial.params.push(Parameter::new(ty.clone(), v));
        if !type_check(&trial.body, &trial.params, v, &trial_state, catalog).is_empty() {
            continue;
        }
        let after = analyze(&trial, &trial_state, catalog);
        let introduces_new = after.iter().any(|d| {
            d.identifier == v
                || (d.kind != DiagnosticKind::MissingVariable
                    && !baseline
                        .iter()
                        .any(|b| b.kind == d.kind && b.identifier == d.identifier))
        });
        if introduces_new {
            continue;
        }
        return Ok(Recovered {
            ty,
            qualified: candidate,
            state: trial_state,
        });
    }
    Err(ResolveError::Unrecoverable(v.to_string()))
}

/// Typer with parameters and every local declaration of the body in one
/// flat scope. Good enough for typing the contexts around `v`.
fn flat_typer<'a>(draft: &ApiDraft, names: Names<'a>, v: &str) -> Typer<'a> {
    let mut typer = Typer::new(names);
    for p in &draft.params {
        typer.declare_ref(&p.name, &p.ty);
    }
    let mut decls: Vec<(String, TypeRef)> = Vec::new();
    walk_stmts(&draft.body, &mut |s| match s {
        Stmt::LocalVar(lv) => {
            for d in &lv.declarators {
                decls.push((d.name.clone(), lv.type_of(d)));
            }
        }
        Stmt::For {
            init: Some(ForInit::Decl(lv)),
            ..
        }
        | Stmt::ForEach { var: lv, .. } => {
            for d in &lv.declarators {
                decls.push((d.name.clone(), lv.type_of(d)));
            }
        }
        Stmt::Try {
            resources, catches, ..
        } => {
            for lv in resources {
                for d in &lv.declarators {
                    decls.push((d.name.clone(), lv.type_of(d)));
                }
            }
            for c in catches {
                if let Some(t) = c.types.first() {
                    decls.push((c.name.clone(), t.clone()));
                }
            }
        }
        _ => {}
    });
    for (name, ty) in decls.into_iter().rev() {
        if name != v {
            typer.declare_ref(&name, &ty);
        }
    }
    typer
}

struct Collector<'a, 'e> {
    v: &'a str,
    typer: &'a Typer<'a>,
    out: &'a mut Vec<Slot<'e>>,
}

impl<'a, 'e> Collector<'a, 'e> {
    fn resolve(&self, t: &TypeRef) -> Option<JType> {
        self.typer.names.jtype(t)
    }

    fn local(&mut self, lv: &'e LocalVar) {
        for d in &lv.declarators {
            if let Some(init) = &d.init {
                let slot = self.resolve(&lv.type_of(d)).map_or(Slot::Any, Slot::Expect);
                self.expr(init, slot);
            }
        }
    }

    fn stmt(&mut self, s: &'e Stmt) {
        match s {
            Stmt::LocalVar(lv) => self.local(lv),
            Stmt::Expr(e) | Stmt::Throw(e) => self.expr(e, Slot::Any),
            Stmt::Return(Some(e)) => self.expr(e, Slot::Any),
            Stmt::If { cond, .. } | Stmt::While { cond, .. } | Stmt::DoWhile { cond, .. } => {
                self.expr(cond, Slot::Boolean)
            }
            Stmt::For {
                init, cond, update, ..
            } => {
                match init {
                    Some(ForInit::Decl(lv)) => self.local(lv),
                    Some(ForInit::Exprs(es)) => es.iter().for_each(|e| self.expr(e, Slot::Any)),
                    None => {}
                }
                if let Some(c) = cond {
                    self.expr(c, Slot::Boolean);
                }
                update.iter().for_each(|e| self.expr(e, Slot::Any));
            }
            Stmt::ForEach { var, iterable, .. } => {
                let elem = self.resolve(&var.type_of(&var.declarators[0]));
                self.expr(iterable, Slot::Iterable(elem));
            }
            Stmt::Try { resources, .. } => resources.iter().for_each(|r| self.local(r)),
            Stmt::Switch { scrutinee, cases } => {
                self.expr(scrutinee, Slot::Switch);
                for c in cases {
                    c.labels.iter().for_each(|l| self.expr(l, Slot::Any));
                }
            }
            _ => {}
        }
        for c in crate::ast::visit::child_stmts(s) {
            if !matches!(s, Stmt::Method(_) | Stmt::Class(_)) {
                self.stmt(c);
            }
        }
    }

    fn expr(&mut self, e: &'e Expr, slot: Slot<'e>) {
        match e {
            Expr::Name(n) => {
                if n == self.v {
                    self.out.push(slot);
                }
            }
            Expr::Literal(_) | Expr::This | Expr::ClassLit(_) => {}
            Expr::Paren(inner) => self.expr(inner, slot),
            Expr::FieldAccess { target, name } => self.expr(target, Slot::Field(name)),
            Expr::MethodCall { target, name, args } => {
                if let Some(t) = target {
                    self.expr(
                        t,
                        Slot::Receiver {
                            method: name,
                            arity: args.len(),
                        },
                    );
                }
                for (pos, a) in args.iter().enumerate() {
                    let s = match target {
                        Some(t) => Slot::Arg {
                            target: t,
                            method: name,
                            arity: args.len(),
                            pos,
                        },
                        None => Slot::Any,
                    };
                    self.expr(a, s);
                }
            }
            Expr::New { args, .. } => args.iter().for_each(|a| self.expr(a, Slot::Any)),
            Expr::NewArray {
                ty,
                sizes,
                extra_dims,
                init,
            } => {
                sizes
                    .iter()
                    .for_each(|s| self.expr(s, Slot::Expect(JType::scalar("int"))));
                if let Some(items) = init {
                    let elem = self
                        .resolve(ty)
                        .map(|t| JType::new(t.name, t.dims + sizes.len() + extra_dims - 1));
                    for i in items {
                        self.expr(i, elem.clone().map_or(Slot::Any, Slot::Expect));
                    }
                }
            }
            Expr::ArrayInit(items) => {
                let elem = match &slot {
                    Slot::Expect(t) if t.is_array() => Some(t.element()),
                    _ => None,
                };
                for i in items {
                    self.expr(i, elem.clone().map_or(Slot::Any, Slot::Expect));
                }
            }
            Expr::Index { target, index } => {
                self.expr(target, Slot::Indexed(Box::new(slot)));
                self.expr(index, Slot::Expect(JType::scalar("int")));
            }
            Expr::Unary { op, expr } => {
                let s = if *op == UnaryOp::Not {
                    Slot::Boolean
                } else {
                    Slot::Numeric
                };
                self.expr(expr, s);
            }
            Expr::Binary { op, lhs, rhs } => {
                let (ls, rs) = self.binary_slots(*op, lhs, rhs, &slot);
                self.expr(lhs, ls);
                self.expr(rhs, rs);
            }
            Expr::Assign { op, target, value } => match op {
                None => {
                    self.expr(target, Slot::Source(value));
                    let s = match value.as_ref() {
                        Expr::ArrayInit(_) => {
                            self.typer.type_of(target).map_or(Slot::Any, Slot::Expect)
                        }
                        _ => Slot::ExpectOf(target),
                    };
                    self.expr(value, s);
                }
                Some(BinaryOp::Add) if self.typer.type_of(target).is_ok_and(|t| t.is_string()) => {
                    self.expr(target, Slot::Any);
                    self.expr(value, Slot::Any);
                }
                Some(bop) if bop.is_bitwise() => {
                    self.expr(target, Slot::Any);
                    self.expr(value, Slot::Any);
                }
                Some(_) => {
                    self.expr(target, Slot::Numeric);
                    self.expr(value, Slot::Numeric);
                }
            },
            Expr::Conditional {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond, Slot::Boolean);
                self.expr(then, slot.clone());
                self.expr(otherwise, slot);
            }
            Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => self.expr(expr, Slot::Any),
        }
    }

    fn binary_slots(
        &self,
        op: BinaryOp,
        lhs: &'e Expr,
        rhs: &'e Expr,
        parent: &Slot<'e>,
    ) -> (Slot<'e>, Slot<'e>) {
        use BinaryOp::*;
        let lt = self.typer.type_of(lhs).ok();
        let rt = self.typer.type_of(rhs).ok();
        match op {
            And | Or => (Slot::Boolean, Slot::Boolean),
            Eq | Ne => {
                let side = |t: Option<JType>| match t {
                    Some(t) if !t.is_null() => Slot::Expect(t),
                    _ => Slot::Any,
                };
                (side(rt), side(lt))
            }
            Add => {
                let stringy = lt.as_ref().is_some_and(JType::is_string)
                    || rt.as_ref().is_some_and(JType::is_string)
                    || matches!(parent, Slot::Concat)
                    || matches!(parent, Slot::Expect(t) if t.is_string());
                if stringy {
                    (Slot::Concat, Slot::Concat)
                } else {
                    (Slot::Numeric, Slot::Numeric)
                }
            }
            BitAnd | BitOr | BitXor => {
                let boolish = lt.as_ref().is_some_and(JType::is_boolean)
                    || rt.as_ref().is_some_and(JType::is_boolean);
                if boolish {
                    (Slot::Boolean, Slot::Boolean)
                } else {
                    (Slot::Numeric, Slot::Numeric)
                }
            }
            _ => (Slot::Numeric, Slot::Numeric),
        }
    }
}

fn call_params(
    target: &Expr,
    method: &str,
    arity: usize,
    pos: usize,
    typer: &Typer,
    catalog: &TypeCatalog,
) -> Vec<JType> {
    let owner = match typer.owner_of(target) {
        Some(o) => o,
        None => return Vec::new(),
    };
    catalog
        .methods(&owner, method, arity)
        .map(|sigs| sigs.iter().map(|s| JType::parse(&s.params[pos])).collect())
        .unwrap_or_default()
}

fn propose(slot: &Slot, typer: &Typer, catalog: &TypeCatalog) -> Vec<JType> {
    match slot {
        Slot::Any => Vec::new(),
        Slot::Expect(t) => vec![t.clone()],
        Slot::ExpectOf(e) | Slot::Source(e) => typer
            .type_of(e)
            .ok()
            .filter(|t| !t.is_null())
            .into_iter()
            .collect(),
        Slot::Arg {
            target,
            method,
            arity,
            pos,
        } => call_params(target, method, *arity, *pos, typer, catalog),
        Slot::Numeric => NUMERIC.iter().map(|n| JType::scalar(*n)).collect(),
        Slot::Boolean => vec![JType::scalar("boolean")],
        Slot::Concat => vec![JType::string()],
        Slot::Receiver { method, arity } => catalog
            .entries()
            .filter(|e| !e.primitive)
            .filter(|e| {
                e.methods
                    .iter()
                    .any(|m| m.name == *method && m.params.len() == *arity)
            })
            .map(|e| JType::scalar(e.name.clone()))
            .collect(),
        Slot::Field(name) => catalog
            .entries()
            .filter(|e| e.fields.iter().any(|f| f.name == *name))
            .map(|e| JType::scalar(e.name.clone()))
            .collect(),
        Slot::Indexed(inner) => propose(inner, typer, catalog)
            .into_iter()
            .map(|t| t.array_of())
            .collect(),
        Slot::Iterable(elem) => match elem {
            Some(t) if t.is_primitive() => vec![t.array_of()],
            Some(t) => vec![t.array_of(), JType::scalar("java.util.List")],
            None => Vec::new(),
        },
        Slot::Switch => vec![JType::scalar("int"), JType::string()],
    }
}

fn compatible(c: &JType, slot: &Slot, typer: &Typer, catalog: &TypeCatalog) -> bool {
    match slot {
        Slot::Any => false,
        Slot::Expect(t) => assignable(c, t, catalog),
        Slot::ExpectOf(e) => typer.type_of(e).is_ok_and(|t| assignable(c, &t, catalog)),
        Slot::Source(e) => typer
            .type_of(e)
            .is_ok_and(|t| !t.is_object() && assignable(&t, c, catalog)),
        Slot::Arg {
            target,
            method,
            arity,
            pos,
        } => call_params(target, method, *arity, *pos, typer, catalog)
            .iter()
            .any(|p| assignable(c, p, catalog)),
        Slot::Numeric => c.is_numeric(),
        Slot::Boolean => c.is_boolean(),
        Slot::Concat => c.is_string(),
        Slot::Receiver { method, arity } => {
            let owner = if c.is_array() {
                OBJECT
            } else {
                c.name.as_str()
            };
            !c.is_primitive()
                && catalog
                    .methods(owner, method, *arity)
                    .is_ok_and(|m| !m.is_empty())
        }
        Slot::Field(name) => {
            if c.is_array() {
                *name == "length"
            } else {
                !c.is_primitive() && catalog.field(&c.name, name).is_ok_and(|f| f.is_some())
            }
        }
        Slot::Indexed(inner) => c.is_array() && compatible(&c.element(), inner, typer, catalog),
        Slot::Iterable(_) => {
            c.is_array()
                || (!c.is_primitive() && catalog.is_subtype_of(&c.name, ITERABLE).unwrap_or(false))
        }
        Slot::Switch => {
            matches!(c.unboxed(), Some("int" | "char" | "short" | "byte")) || c.is_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recover(src: &str, v: &str) -> Result<Recovered, ResolveError> {
        let cat = TypeCatalog::bundled();
        let draft = ApiDraft::initial(parse_snippet(src).unwrap().statements);
        recover_var_type(
            v,
            &draft,
            &ResolutionState::default(),
            cat,
            Deadline::none(),
        )
    }

    #[test]
    fn receiver_of_get_bytes_is_string() {
        let r = recover("byte[] b = tag_xml.getBytes();", "tag_xml").unwrap();
        assert_eq!(r.qualified, JType::string());
        assert_eq!(r.ty.name, "String");
    }

    #[test]
    fn arithmetic_operand_is_int() {
        let r = recover("int y = x + 1;", "x").unwrap();
        assert_eq!(r.qualified, JType::scalar("int"));
        let r = recover("double d = x * 2.5;", "x").unwrap();
        assert_eq!(r.qualified, JType::scalar("int"));
        let r = recover("long big = x;", "x").unwrap();
        assert_eq!(r.qualified, JType::scalar("long"));
    }

    #[test]
    fn unused_variable_is_unrecoverable() {
        assert_eq!(
            recover("int a = 1;", "z"),
            Err(ResolveError::Unrecoverable("z".into()))
        );
    }

    #[test]
    fn argument_and_collection_usages() {
        let r = recover("int n = Integer.parseInt(text);", "text").unwrap();
        assert_eq!(r.qualified, JType::string());
        let r = recover(
            "names.add(\"a\");\nint n = names.size();\nObject o = names.get(0);",
            "names",
        )
        .unwrap();
        assert_eq!(r.qualified, JType::scalar("java.util.List"));
        assert!(r.state.imports.contains("java.util.List"));
        let r = recover(
            "int total = 0;\nfor (int i = 0; i < arr.length; i++) { total += arr[i]; }",
            "arr",
        )
        .unwrap();
        assert_eq!(r.qualified, JType::new("int", 1));
    }

    #[test]
    fn conditions_and_strings() {
        let r = recover("if (flag) { int a = 1; }", "flag").unwrap();
        assert_eq!(r.qualified, JType::scalar("boolean"));
        let r = recover("String s = \"x\" + name;\nint n = name.length();", "name").unwrap();
        assert_eq!(r.qualified, JType::string());
    }
}
