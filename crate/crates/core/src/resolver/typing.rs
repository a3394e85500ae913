//! Expression typing over the catalog and a focused consistency check.
//!
//! Generic type arguments are erased, so a value of type `java.lang.Object`
//! coming out of a collection is accepted wherever a reference or boxed
//! primitive is expected.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{Names, ResolutionState, ResolveError};
use crate::apizer::ScopeState;
use crate::ast::visit::expr_mentions;
use crate::ast::*;
use crate::catalog::{TypeCatalog, ITERABLE, OBJECT, STRING};

/// A resolved type: a qualified class name or primitive plus array dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JType {
    pub name: String,
    pub dims: usize,
}

const NULL: &str = "null";

const BOXES: [(&str, &str); 8] = [
    ("java.lang.Boolean", "boolean"),
    ("java.lang.Byte", "byte"),
    ("java.lang.Character", "char"),
    ("java.lang.Short", "short"),
    ("java.lang.Integer", "int"),
    ("java.lang.Long", "long"),
    ("java.lang.Float", "float"),
    ("java.lang.Double", "double"),
];

impl JType {
    pub fn new(name: impl Into<String>, dims: usize) -> Self {
        JType {
            name: name.into(),
            dims,
        }
    }

    pub fn scalar(name: impl Into<String>) -> Self {
        JType::new(name, 0)
    }

    /// Parses a catalog spelling such as `byte[]` or `java.lang.String`.
    pub fn parse(s: &str) -> Self {
        let mut name = s.trim();
        let mut dims = 0;
        while let Some(rest) = name.strip_suffix("[]") {
            name = rest.trim_end();
            dims += 1;
        }
        JType::new(name, dims)
    }

    pub fn string() -> Self {
        JType::scalar(STRING)
    }

    pub fn object() -> Self {
        JType::scalar(OBJECT)
    }

    pub fn null() -> Self {
        JType::scalar(NULL)
    }

    pub fn is_null(&self) -> bool {
        self.name == NULL && self.dims == 0
    }

    pub fn is_primitive(&self) -> bool {
        self.dims == 0 && PRIMITIVES.contains(&self.name.as_str())
    }

    /// Primitive element type, with or without array dimensions.
    pub fn is_primitive_element(&self) -> bool {
        PRIMITIVES.contains(&self.name.as_str())
    }

    pub fn is_reference(&self) -> bool {
        !self.is_primitive()
    }

    pub fn is_array(&self) -> bool {
        self.dims > 0
    }

    pub fn is_string(&self) -> bool {
        self.dims == 0 && self.name == STRING
    }

    pub fn is_object(&self) -> bool {
        self.dims == 0 && self.name == OBJECT
    }

    pub fn is_boolean(&self) -> bool {
        self.unboxed() == Some("boolean")
    }

    pub fn element(&self) -> JType {
        JType::new(self.name.clone(), self.dims.saturating_sub(1))
    }

    pub fn array_of(&self) -> JType {
        JType::new(self.name.clone(), self.dims + 1)
    }

    /// Primitive name for primitives and their box classes.
    pub fn unboxed(&self) -> Option<&'static str> {
        if self.dims != 0 {
            return None;
        }
        if let Some(p) = PRIMITIVES.iter().find(|p| **p == self.name) {
            return Some(p);
        }
        BOXES.iter().find(|(b, _)| *b == self.name).map(|(_, p)| *p)
    }

    pub fn boxed(&self) -> Option<&'static str> {
        if !self.is_primitive() {
            return None;
        }
        BOXES.iter().find(|(_, p)| *p == self.name).map(|(b, _)| *b)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self.unboxed(),
            Some("byte" | "short" | "char" | "int" | "long" | "float" | "double")
        )
    }

    pub fn is_integral(&self) -> bool {
        matches!(
            self.unboxed(),
            Some("byte" | "short" | "char" | "int" | "long")
        )
    }
}

impl fmt::Display for JType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for _ in 0..self.dims {
            f.write_str("[]")?;
        }
        Ok(())
    }
}

fn numeric_rank(p: &str) -> u8 {
    match p {
        "byte" => 1,
        "short" => 2,
        "char" => 2,
        "int" => 3,
        "long" => 4,
        "float" => 5,
        "double" => 6,
        _ => 0,
    }
}

fn primitive_widens(from: &str, to: &str) -> bool {
    if from == to {
        return true;
    }
    match (from, to) {
        ("byte", "short") => true,
        ("char", "short") | ("short", "char") | ("byte", "char") => false,
        (_, "boolean") | ("boolean", _) => false,
        _ => numeric_rank(from) < numeric_rank(to) && numeric_rank(from) > 0,
    }
}

/// Assignment compatibility with widening, boxing, unboxing and subtyping.
pub fn assignable(from: &JType, to: &JType, catalog: &TypeCatalog) -> bool {
    if from == to {
        return true;
    }
    if from.is_null() {
        return to.is_reference();
    }
    if from.is_object() {
        // erased generic results
        return true;
    }
    if to.is_primitive() {
        return match from.unboxed() {
            Some(p) => primitive_widens(p, &to.name),
            None => false,
        };
    }
    if from.is_primitive() {
        let Some(boxed) = from.boxed() else {
            return false;
        };
        return catalog.is_subtype_of(boxed, &to.name).unwrap_or(false) && to.dims == 0;
    }
    if from.is_array() {
        if to.dims == 0 {
            return matches!(
                to.name.as_str(),
                OBJECT | "java.lang.Cloneable" | "java.io.Serializable"
            );
        }
        if from.dims == to.dims {
            return !from.is_primitive_element()
                && !to.is_primitive_element()
                && catalog.is_subtype_of(&from.name, &to.name).unwrap_or(false);
        }
        return from.dims > to.dims && to.is_object_array_base();
    }
    if to.is_array() {
        return false;
    }
    catalog.is_subtype_of(&from.name, &to.name).unwrap_or(false)
}

impl JType {
    fn is_object_array_base(&self) -> bool {
        self.name == OBJECT
    }
}

fn binary_numeric(a: &JType, b: &JType) -> Option<JType> {
    let (pa, pb) = (a.unboxed()?, b.unboxed()?);
    if !a.is_numeric() || !b.is_numeric() {
        return None;
    }
    let t = if pa == "double" || pb == "double" {
        "double"
    } else if pa == "float" || pb == "float" {
        "float"
    } else if pa == "long" || pb == "long" {
        "long"
    } else {
        "int"
    };
    Some(JType::scalar(t))
}

fn unary_numeric(a: &JType) -> Option<JType> {
    let p = a.unboxed()?;
    if !a.is_numeric() {
        return None;
    }
    Some(JType::scalar(match p {
        "byte" | "short" | "char" => "int",
        other => other,
    }))
}

fn is_int_constant(e: &Expr) -> bool {
    match e.unparen() {
        Expr::Literal(Literal::Int(_)) | Expr::Literal(Literal::Char(_)) => true,
        Expr::Unary {
            op: UnaryOp::Neg | UnaryOp::Plus,
            expr,
        } => is_int_constant(expr),
        _ => false,
    }
}

/// Why an expression has no type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    /// Not enough information, e.g. an undeclared name.
    Unknown(String),
    /// The expression is ill-typed.
    Mismatch(String),
}

/// A typing problem located at a top-level statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeConflict {
    pub statement: usize,
    pub message: String,
}

enum Receiver {
    Static(String),
    Instance(JType),
}

/// Types expressions under a stack of variable scopes.
pub struct Typer<'a> {
    pub names: Names<'a>,
    scopes: Vec<HashMap<String, Option<JType>>>,
    /// When set, mismatches at nodes not mentioning this name are downgraded
    /// to `Unknown`.
    focus: Option<String>,
}

impl<'a> Typer<'a> {
    pub fn new(names: Names<'a>) -> Self {
        Typer {
            names,
            scopes: vec![HashMap::new()],
            focus: None,
        }
    }

    pub fn with_focus(mut self, focus: &str) -> Self {
        self.focus = Some(focus.to_string());
        self
    }

    fn catalog(&self) -> &'a TypeCatalog {
        self.names.catalog
    }

    pub fn push(&mut self) {
        self.scopes.push(HashMap::new());
    }

    pub fn pop(&mut self) {
        self.scopes.pop();
        if self.scopes.is_empty() {
            self.scopes.push(HashMap::new());
        }
    }

    pub fn declare(&mut self, name: &str, ty: Option<JType>) {
        if let Some(scope) = self.scopes.last_mut() {
            scope.insert(name.to_string(), ty);
        }
    }

    pub fn declare_ref(&mut self, name: &str, ty: &TypeRef) {
        let jt = self.names.jtype(ty);
        self.declare(name, jt);
    }

    /// `Some(None)` for a declared variable of unknown type.
    fn lookup(&self, name: &str) -> Option<Option<&JType>> {
        self.scopes
            .iter()
            .rev()
            .find_map(|s| s.get(name))
            .map(Option::as_ref)
    }

    fn mismatch(&self, at: &Expr, message: impl Into<String>) -> TypeError {
        match &self.focus {
            Some(f) if !expr_mentions(at, f) => TypeError::Unknown(message.into()),
            _ => TypeError::Mismatch(message.into()),
        }
    }

    pub fn type_of(&self, e: &Expr) -> Result<JType, TypeError> {
        match e {
            Expr::Literal(l) => Ok(match l {
                Literal::Int(_) => JType::scalar("int"),
                Literal::Long(_) => JType::scalar("long"),
                Literal::Float(_) => JType::scalar("float"),
                Literal::Double(_) => JType::scalar("double"),
                Literal::Char(_) => JType::scalar("char"),
                Literal::Str(_) => JType::string(),
                Literal::Bool(_) => JType::scalar("boolean"),
                Literal::Null => JType::null(),
            }),
            Expr::Name(n) => match self.lookup(n) {
                Some(Some(t)) => Ok(t.clone()),
                _ => Err(TypeError::Unknown(n.clone())),
            },
            Expr::This => Err(TypeError::Unknown("this".into())),
            Expr::Paren(inner) => self.type_of(inner),
            Expr::FieldAccess { target, name } => {
                let owner = match self.receiver(target)? {
                    Receiver::Static(q) => JType::scalar(q),
                    Receiver::Instance(t) => t,
                };
                self.field_type(e, &owner, name)
            }
            Expr::MethodCall { target, name, args } => {
                self.call_type(e, target.as_deref(), name, args)
            }
            Expr::New { ty, args } => {
                for a in args {
                    self.soft(self.type_of(a))?;
                }
                self.names
                    .jtype(ty)
                    .ok_or_else(|| TypeError::Unknown(ty.name.clone()))
            }
            Expr::NewArray {
                ty,
                sizes,
                extra_dims,
                init,
            } => {
                for s in sizes {
                    if let Some(t) = self.soft(self.type_of(s))? {
                        if !t.is_integral() {
                            return Err(self.mismatch(s, "array size must be integral"));
                        }
                    }
                }
                let elem = self
                    .names
                    .jtype(ty)
                    .ok_or_else(|| TypeError::Unknown(ty.name.clone()))?;
                let full = JType::new(elem.name.clone(), elem.dims + sizes.len() + extra_dims);
                if let Some(items) = init {
                    self.check_array_init(e, items, &full.element())?;
                }
                Ok(full)
            }
            Expr::ArrayInit(_) => Err(TypeError::Unknown("array initializer".into())),
            Expr::Index { target, index } => {
                if let Some(it) = self.soft(self.type_of(index))? {
                    if !it.is_integral() {
                        return Err(self.mismatch(e, "array index must be integral"));
                    }
                }
                let t = self.type_of(target)?;
                if t.is_array() {
                    Ok(t.element())
                } else if t.is_object() {
                    Err(TypeError::Unknown("indexing an erased value".into()))
                } else {
                    Err(self.mismatch(e, format!("`{t}` is not an array")))
                }
            }
            Expr::Unary { op, expr } => {
                let t = self.type_of(expr)?;
                match op {
                    UnaryOp::Not => {
                        if t.is_boolean() || t.is_object() {
                            Ok(JType::scalar("boolean"))
                        } else {
                            Err(self.mismatch(e, "`!` needs a boolean"))
                        }
                    }
                    UnaryOp::Neg | UnaryOp::Plus => unary_numeric(&t)
                        .ok_or_else(|| self.mismatch(e, "unary sign needs a number")),
                    UnaryOp::BitNot => {
                        if t.is_integral() {
                            Ok(unary_numeric(&t).unwrap_or(t))
                        } else {
                            Err(self.mismatch(e, "`~` needs an integral value"))
                        }
                    }
                    _ => {
                        if !is_variable(expr) {
                            return Err(self.mismatch(e, "increment needs a variable"));
                        }
                        if t.is_numeric() {
                            Ok(t)
                        } else {
                            Err(self.mismatch(e, "increment needs a number"))
                        }
                    }
                }
            }
            Expr::Binary { op, lhs, rhs } => self.binary_type(e, *op, lhs, rhs),
            Expr::Assign { op, target, value } => {
                if !is_variable(target) {
                    return Err(self.mismatch(e, "assignment target is not a variable"));
                }
                let tt = self.type_of(target);
                let vt = if let Expr::ArrayInit(items) = value.as_ref() {
                    match &tt {
                        Ok(t) if t.is_array() => {
                            self.check_array_init(e, items, &t.element())?;
                            return Ok(t.clone());
                        }
                        _ => return tt,
                    }
                } else {
                    self.type_of(value)
                };
                let (tt, vt) = match (tt, vt) {
                    (Ok(t), Ok(v)) => (t, v),
                    (Err(err @ TypeError::Mismatch(_)), _)
                    | (_, Err(err @ TypeError::Mismatch(_))) => return Err(err),
                    (Ok(t), Err(_)) => return Ok(t),
                    (Err(err), _) => return Err(err),
                };
                match op {
                    None => {
                        if self.value_fits(value, &vt, &tt) {
                            Ok(tt)
                        } else {
                            Err(self.mismatch(e, format!("cannot assign `{vt}` to `{tt}`")))
                        }
                    }
                    Some(BinaryOp::Add) if tt.is_string() => Ok(tt),
                    Some(bop) => {
                        let ok = if bop.is_bitwise() {
                            (tt.is_boolean() && vt.is_boolean())
                                || (tt.is_integral() && vt.is_integral())
                        } else if bop.is_shift() {
                            tt.is_integral() && vt.is_integral()
                        } else {
                            tt.is_numeric() && vt.is_numeric()
                        };
                        if ok || vt.is_object() {
                            Ok(tt)
                        } else {
                            Err(self.mismatch(e, format!("bad operands for `{}=`", bop.symbol())))
                        }
                    }
                }
            }
            Expr::Conditional {
                cond,
                then,
                otherwise,
            } => {
                if let Some(c) = self.soft(self.type_of(cond))? {
                    if !c.is_boolean() && !c.is_object() {
                        return Err(self.mismatch(e, "condition must be boolean"));
                    }
                }
                let a = self.type_of(then);
                let b = self.type_of(otherwise);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        if a == b {
                            Ok(a)
                        } else if let Some(n) = binary_numeric(&a, &b) {
                            Ok(n)
                        } else if a.is_null() {
                            Ok(b)
                        } else if b.is_null() || assignable(&b, &a, self.catalog()) {
                            Ok(a)
                        } else if assignable(&a, &b, self.catalog()) {
                            Ok(b)
                        } else {
                            Ok(JType::object())
                        }
                    }
                    (Err(err @ TypeError::Mismatch(_)), _)
                    | (_, Err(err @ TypeError::Mismatch(_))) => Err(err),
                    (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
                    (Err(err), Err(_)) => Err(err),
                }
            }
            Expr::Cast { ty, expr } => {
                self.soft(self.type_of(expr))?;
                self.names
                    .jtype(ty)
                    .ok_or_else(|| TypeError::Unknown(ty.name.clone()))
            }
            Expr::InstanceOf { expr, .. } => {
                if let Some(t) = self.soft(self.type_of(expr))? {
                    if t.is_primitive() {
                        return Err(self.mismatch(e, "instanceof on a primitive"));
                    }
                }
                Ok(JType::scalar("boolean"))
            }
            Expr::ClassLit(_) => Ok(JType::scalar("java.lang.Class")),
        }
    }

    /// Turns `Unknown` into `None`, keeping mismatches as errors.
    fn soft(&self, r: Result<JType, TypeError>) -> Result<Option<JType>, TypeError> {
        match r {
            Ok(t) => Ok(Some(t)),
            Err(TypeError::Unknown(_)) => Ok(None),
            Err(m) => Err(m),
        }
    }

    fn value_fits(&self, value: &Expr, vt: &JType, target: &JType) -> bool {
        assignable(vt, target, self.catalog())
            || (is_int_constant(value)
                && matches!(target.unboxed(), Some("byte" | "short" | "char")))
    }

    fn check_array_init(&self, at: &Expr, items: &[Expr], elem: &JType) -> Result<(), TypeError> {
        for item in items {
            if let Expr::ArrayInit(inner) = item {
                if !elem.is_array() {
                    return Err(self.mismatch(at, "nested initializer for a non-array element"));
                }
                self.check_array_init(at, inner, &elem.element())?;
                continue;
            }
            if let Some(t) = self.soft(self.type_of(item))? {
                if !self.value_fits(item, &t, elem) {
                    return Err(self.mismatch(at, format!("array element `{t}` is not a `{elem}`")));
                }
            }
        }
        Ok(())
    }

    fn receiver(&self, target: &Expr) -> Result<Receiver, TypeError> {
        if let Some(path) = dotted_path(target) {
            let head = path[0];
            if self.lookup(head).is_none() {
                for k in (1..=path.len()).rev() {
                    let prefix = path[..k].join(".");
                    if let Some(q) = self.names.resolve(&prefix) {
                        if PRIMITIVES.contains(&q.as_str()) {
                            break;
                        }
                        let mut owner = JType::scalar(q);
                        for field in &path[k..] {
                            owner = self.field_type(target, &owner, field)?;
                        }
                        return Ok(if k == path.len() {
                            Receiver::Static(owner.name)
                        } else {
                            Receiver::Instance(owner)
                        });
                    }
                }
                if path.len() == 1 {
                    return Err(TypeError::Unknown(head.to_string()));
                }
            }
        }
        self.type_of(target).map(Receiver::Instance)
    }

    /// Catalog type whose members a call or field access on `target` uses.
    pub(crate) fn owner_of(&self, target: &Expr) -> Option<String> {
        match self.receiver(target) {
            Ok(Receiver::Static(q)) => Some(q),
            Ok(Receiver::Instance(t)) if t.is_array() => Some(OBJECT.to_string()),
            Ok(Receiver::Instance(t)) if !t.is_primitive() && !t.is_null() => Some(t.name),
            _ => None,
        }
    }

    fn field_type(&self, at: &Expr, owner: &JType, name: &str) -> Result<JType, TypeError> {
        if owner.is_array() {
            return if name == "length" {
                Ok(JType::scalar("int"))
            } else {
                Err(self.mismatch(at, format!("arrays have no field `{name}`")))
            };
        }
        if owner.is_primitive() || owner.is_null() {
            return Err(self.mismatch(at, format!("`{owner}` has no fields")));
        }
        match self.catalog().field(&owner.name, name) {
            Ok(Some(f)) => Ok(JType::parse(&f.ty)),
            Ok(None) => {
                let nested = format!("{}.{name}", owner.name);
                if self.catalog().contains(&nested) {
                    Ok(JType::scalar(nested))
                } else if owner.is_object() {
                    Err(TypeError::Unknown(format!(
                        "field `{name}` of an erased value"
                    )))
                } else {
                    Err(self.mismatch(at, format!("`{owner}` has no field `{name}`")))
                }
            }
            Err(_) => Err(TypeError::Unknown(owner.name.clone())),
        }
    }

    fn call_type(
        &self,
        at: &Expr,
        target: Option<&Expr>,
        name: &str,
        args: &[Expr],
    ) -> Result<JType, TypeError> {
        let Some(target) = target else {
            return Err(TypeError::Unknown(format!("{name}()")));
        };
        let mut arg_types = Vec::with_capacity(args.len());
        for a in args {
            arg_types.push(self.soft(self.type_of(a))?);
        }
        let owner = match self.receiver(target)? {
            Receiver::Static(q) => q,
            Receiver::Instance(t) => {
                if t.is_array() {
                    if name == "clone" && args.is_empty() {
                        return Ok(t);
                    }
                    OBJECT.to_string()
                } else if t.is_primitive() || t.is_null() {
                    return Err(self.mismatch(at, format!("cannot call `{name}` on `{t}`")));
                } else {
                    t.name
                }
            }
        };
        let sigs = match self.catalog().methods(&owner, name, args.len()) {
            Ok(s) => s,
            Err(_) => return Err(TypeError::Unknown(owner)),
        };
        if sigs.is_empty() {
            if owner == OBJECT {
                return Err(TypeError::Unknown(format!("`{name}` on an erased value")));
            }
            return Err(self.mismatch(
                at,
                format!(
                    "`{owner}` has no method `{name}` with {} arguments",
                    args.len()
                ),
            ));
        }
        let mut best: Option<(usize, JType)> = None;
        for sig in sigs {
            let mut cost = 0;
            let mut ok = true;
            for (p, a) in sig.params.iter().zip(&arg_types) {
                let pt = JType::parse(p);
                if let Some(a) = a {
                    if *a == pt {
                        continue;
                    }
                    if !assignable(a, &pt, self.catalog()) {
                        ok = false;
                        break;
                    }
                }
                cost += 1;
            }
            if ok && best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, JType::parse(&sig.returns)));
            }
        }
        best.map(|(_, t)| t)
            .ok_or_else(|| self.mismatch(at, format!("no applicable overload of `{owner}.{name}`")))
    }

    fn binary_type(
        &self,
        at: &Expr,
        op: BinaryOp,
        lhs: &Expr,
        rhs: &Expr,
    ) -> Result<JType, TypeError> {
        let l = self.soft(self.type_of(lhs))?;
        let r = self.soft(self.type_of(rhs))?;
        use BinaryOp::*;
        match op {
            Eq | Ne => Ok(JType::scalar("boolean")),
            And | Or => {
                for t in [&l, &r].into_iter().flatten() {
                    if !t.is_boolean() && !t.is_object() {
                        return Err(self.mismatch(at, format!("`{}` needs booleans", op.symbol())));
                    }
                }
                Ok(JType::scalar("boolean"))
            }
            Add if l.as_ref().is_some_and(JType::is_string)
                || r.as_ref().is_some_and(JType::is_string) =>
            {
                Ok(JType::string())
            }
            _ => {
                let (Some(l), Some(r)) = (l, r) else {
                    // one side unknown: still reject non-numeric operands we do know
                    return Err(TypeError::Unknown("operand".into()));
                };
                if l.is_object() || r.is_object() {
                    return Err(TypeError::Unknown("erased operand".into()));
                }
                if op.is_bitwise() && l.is_boolean() && r.is_boolean() {
                    return Ok(JType::scalar("boolean"));
                }
                let numeric = if op.is_bitwise() || op.is_shift() {
                    l.is_integral() && r.is_integral()
                } else {
                    l.is_numeric() && r.is_numeric()
                };
                if !numeric {
                    return Err(self.mismatch(
                        at,
                        format!("bad operands `{l}` and `{r}` for `{}`", op.symbol()),
                    ));
                }
                if op.is_relational() {
                    Ok(JType::scalar("boolean"))
                } else if op.is_shift() {
                    Ok(unary_numeric(&l).unwrap_or(l))
                } else {
                    Ok(binary_numeric(&l, &r).unwrap_or(l))
                }
            }
        }
    }
}

fn is_variable(e: &Expr) -> bool {
    matches!(
        e.unparen(),
        Expr::Name(_) | Expr::Index { .. } | Expr::FieldAccess { .. }
    )
}

/// `a.b.c` as `["a", "b", "c"]` when the expression is a pure name chain.
pub(crate) fn dotted_path(e: &Expr) -> Option<Vec<&str>> {
    match e {
        Expr::Name(n) => Some(vec![n.as_str()]),
        Expr::FieldAccess { target, name } => {
            let mut p = dotted_path(target)?;
            p.push(name.as_str());
            Some(p)
        }
        _ => None,
    }
}

/// Checks the statements of a body, reporting only mismatches at nodes that
/// mention `focus`.
pub fn type_check(
    body: &[Stmt],
    params: &[Parameter],
    focus: &str,
    state: &ResolutionState,
    catalog: &TypeCatalog,
) -> Vec<TypeConflict> {
    let mut checker = Checker {
        typer: Typer::new(Names::new(catalog, state)).with_focus(focus),
        conflicts: Vec::new(),
        statement: 0,
    };
    for p in params {
        checker.typer.declare_ref(&p.name, &p.ty);
    }
    for (i, s) in body.iter().enumerate() {
        checker.statement = i;
        checker.stmt(s);
    }
    checker.conflicts
}

struct Checker<'a> {
    typer: Typer<'a>,
    conflicts: Vec<TypeConflict>,
    statement: usize,
}

impl Checker<'_> {
    fn report(&mut self, message: String) {
        self.conflicts.push(TypeConflict {
            statement: self.statement,
            message,
        });
    }

    fn expr(&mut self, e: &Expr) -> Option<JType> {
        match self.typer.type_of(e) {
            Ok(t) => Some(t),
            Err(TypeError::Unknown(_)) => None,
            Err(TypeError::Mismatch(m)) => {
                self.report(m);
                None
            }
        }
    }

    fn mentions_focus(&self, e: &Expr) -> bool {
        self.typer
            .focus
            .as_deref()
            .is_none_or(|f| expr_mentions(e, f))
    }

    fn condition(&mut self, e: &Expr) {
        if let Some(t) = self.expr(e) {
            if !t.is_boolean() && !t.is_object() && self.mentions_focus(e) {
                self.report(format!("condition has type `{t}`"));
            }
        }
    }

    fn local(&mut self, lv: &LocalVar) {
        for d in &lv.declarators {
            let declared = lv.type_of(d);
            let jt = self.typer.names.jtype(&declared);
            if let (Some(init), Some(target)) = (&d.init, &jt) {
                match init {
                    Expr::ArrayInit(items) => {
                        if !target.is_array() {
                            if self.mentions_focus(init) {
                                self.report("array initializer for a non-array".into());
                            }
                        } else if let Err(TypeError::Mismatch(m)) =
                            self.typer.check_array_init(init, items, &target.element())
                        {
                            self.report(m);
                        }
                    }
                    _ => {
                        if let Some(vt) = self.expr(init) {
                            if !self.typer.value_fits(init, &vt, target)
                                && self.mentions_focus(init)
                            {
                                self.report(format!("cannot initialize `{target}` with `{vt}`"));
                            }
                        }
                    }
                }
            } else if let Some(init) = &d.init {
                if !matches!(init, Expr::ArrayInit(_)) {
                    self.expr(init);
                }
            }
            self.typer.declare(&d.name, jt);
        }
    }

    fn block(&mut self, stmts: &[Stmt]) {
        self.typer.push();
        for s in stmts {
            self.stmt(s);
        }
        self.typer.pop();
    }

    fn scoped(&mut self, s: &Stmt) {
        self.typer.push();
        self.stmt(s);
        self.typer.pop();
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::LocalVar(lv) => self.local(lv),
            Stmt::Expr(e) => {
                self.expr(e);
            }
            Stmt::Block(b) => self.block(b),
            Stmt::If {
                cond,
                then,
                otherwise,
            } => {
                self.condition(cond);
                self.scoped(then);
                if let Some(o) = otherwise {
                    self.scoped(o);
                }
            }
            Stmt::While { cond, body } | Stmt::DoWhile { body, cond } => {
                self.condition(cond);
                self.scoped(body);
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                self.typer.push();
                match init {
                    Some(ForInit::Decl(lv)) => self.local(lv),
                    Some(ForInit::Exprs(es)) => {
                        for e in es {
                            self.expr(e);
                        }
                    }
                    None => {}
                }
                if let Some(c) = cond {
                    self.condition(c);
                }
                for u in update {
                    self.expr(u);
                }
                self.scoped(body);
                self.typer.pop();
            }
            Stmt::ForEach {
                var,
                iterable,
                body,
            } => {
                let it = self.expr(iterable);
                self.typer.push();
                let d = &var.declarators[0];
                let declared = self.typer.names.jtype(&var.type_of(d));
                if let Some(it) = it {
                    let catalog = self.typer.catalog();
                    let ok = if it.is_array() {
                        declared
                            .as_ref()
                            .is_none_or(|v| self.typer.value_fits(iterable, &it.element(), v))
                    } else {
                        it.is_object()
                            || (!it.is_primitive()
                                && catalog.is_subtype_of(&it.name, ITERABLE).unwrap_or(false))
                    };
                    if !ok && self.mentions_focus(iterable) {
                        self.report(format!("cannot iterate over `{it}`"));
                    }
                }
                self.typer.declare(&d.name, declared);
                self.stmt(body);
                self.typer.pop();
            }
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                self.typer.push();
                for r in resources {
                    self.local(r);
                }
                self.block(body);
                self.typer.pop();
                for c in catches {
                    self.typer.push();
                    let t = c.types.first().and_then(|t| self.typer.names.jtype(t));
                    let t = if c.types.len() > 1 {
                        Some(JType::scalar("java.lang.Exception"))
                    } else {
                        t
                    };
                    self.typer.declare(&c.name, t);
                    self.block(&c.body);
                    self.typer.pop();
                }
                if let Some(f) = finally {
                    self.block(f);
                }
            }
            Stmt::Switch { scrutinee, cases } => {
                if let Some(t) = self.expr(scrutinee) {
                    let ok = match t.unboxed() {
                        Some(p) => matches!(p, "char" | "byte" | "short" | "int"),
                        None => !t.is_array(),
                    };
                    if !ok && self.mentions_focus(scrutinee) {
                        self.report(format!("cannot switch on `{t}`"));
                    }
                }
                self.typer.push();
                for c in cases {
                    for l in &c.labels {
                        self.expr(l);
                    }
                    for s in &c.body {
                        self.stmt(s);
                    }
                }
                self.typer.pop();
            }
            Stmt::Return(Some(e)) => {
                self.expr(e);
            }
            Stmt::Throw(e) => {
                if let Some(t) = self.expr(e) {
                    let catalog = self.typer.catalog();
                    let ok = t.is_object()
                        || (!t.is_primitive()
                            && !t.is_array()
                            && catalog
                                .is_subtype_of(&t.name, "java.lang.Throwable")
                                .unwrap_or(false));
                    if !ok && self.mentions_focus(e) {
                        self.report(format!("cannot throw `{t}`"));
                    }
                }
            }
            Stmt::Return(None)
            | Stmt::Break(_)
            | Stmt::Continue(_)
            | Stmt::Empty
            | Stmt::Method(_)
            | Stmt::Class(_) => {}
        }
    }
}

/// Type of `e` where variables are typed by the scope's type map.
pub fn get_type_of_exp(
    e: &Expr,
    scope: &ScopeState,
    state: &ResolutionState,
    catalog: &TypeCatalog,
) -> Result<JType, ResolveError> {
    let mut typer = Typer::new(Names::new(catalog, state));
    for (name, ty) in &scope.types {
        typer.declare_ref(name, ty);
    }
    typer
        .type_of(e)
        .map_err(|_| ResolveError::Untypeable(render_expr(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> &'static TypeCatalog {
        TypeCatalog::bundled()
    }

    fn ty(src: &str, vars: &[(&str, &str)]) -> Result<JType, TypeError> {
        let state = ResolutionState::default();
        let mut typer = Typer::new(Names::new(cat(), &state));
        for (n, t) in vars {
            typer.declare(n, Some(JType::parse(t)));
        }
        typer.type_of(&parse_expression(src).unwrap())
    }

    #[test]
    fn literals_and_promotion() {
        assert_eq!(ty("\"abc\"", &[]).unwrap(), JType::string());
        assert_eq!(ty("1 + 2L", &[]).unwrap(), JType::scalar("long"));
        assert_eq!(ty("1 + 2.0", &[]).unwrap(), JType::scalar("double"));
        assert_eq!(ty("'a' + 1", &[]).unwrap(), JType::scalar("int"));
        assert_eq!(ty("\"n=\" + 3", &[]).unwrap(), JType::string());
        assert_eq!(ty("1 < 2 && true", &[]).unwrap(), JType::scalar("boolean"));
    }

    #[test]
    fn member_calls_use_the_catalog() {
        assert_eq!(
            ty("calendar.getTime()", &[("calendar", "java.util.Calendar")]).unwrap(),
            JType::scalar("java.util.Date")
        );
        assert_eq!(
            ty("s.getBytes()", &[("s", "java.lang.String")]).unwrap(),
            JType::new("byte", 1)
        );
        assert_eq!(ty("Math.abs(-3)", &[]).unwrap(), JType::scalar("int"));
        assert_eq!(ty("Math.abs(-3.5)", &[]).unwrap(), JType::scalar("double"));
        assert_eq!(
            ty("Integer.toHexString(0xFF & 3)", &[]).unwrap(),
            JType::string()
        );
        assert_eq!(
            ty("a.length", &[("a", "int[]")]).unwrap(),
            JType::scalar("int")
        );
        assert_eq!(
            ty("System.out", &[]).unwrap(),
            JType::scalar("java.io.PrintStream")
        );
    }

    #[test]
    fn mismatches_are_reported() {
        assert!(matches!(
            ty("x.getBytes()", &[("x", "int")]),
            Err(TypeError::Mismatch(_))
        ));
        assert!(matches!(
            ty("s * 2", &[("s", "java.lang.String")]),
            Err(TypeError::Mismatch(_))
        ));
        assert!(matches!(ty("unknown + 1", &[]), Err(TypeError::Unknown(_))));
    }

    #[test]
    fn assignability() {
        let c = cat();
        assert!(assignable(&JType::scalar("int"), &JType::scalar("long"), c));
        assert!(!assignable(
            &JType::scalar("long"),
            &JType::scalar("int"),
            c
        ));
        assert!(assignable(
            &JType::scalar("int"),
            &JType::scalar("java.lang.Integer"),
            c
        ));
        assert!(assignable(&JType::scalar("int"), &JType::object(), c));
        assert!(assignable(
            &JType::scalar("java.util.ArrayList"),
            &JType::scalar("java.util.List"),
            c
        ));
        assert!(!assignable(
            &JType::string(),
            &JType::scalar("java.util.List"),
            c
        ));
        assert!(assignable(&JType::null(), &JType::string(), c));
        assert!(!assignable(&JType::null(), &JType::scalar("int"), c));
        assert!(assignable(&JType::new("int", 1), &JType::object(), c));
    }

    #[test]
    fn focused_check_ignores_unrelated_nodes() {
        let ast = parse_snippet("int y = x + 1;\nString s = q * 2;").unwrap();
        let state = ResolutionState::default();
        let int_param = [Parameter::new(TypeRef::simple("int"), "x")];
        assert!(type_check(&ast.statements, &int_param, "x", &state, cat()).is_empty());
        let long_param = [Parameter::new(TypeRef::simple("long"), "x")];
        assert_eq!(
            type_check(&ast.statements, &long_param, "x", &state, cat()).len(),
            1
        );
    }
}
