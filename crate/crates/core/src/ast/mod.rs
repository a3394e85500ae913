//! Syntax tree for the Java statement/expression subset found in Q&A snippets.
//!
//! The tree keeps enough surface detail (parentheses, literal spellings) for
//! the renderer to reproduce a snippet that parses back to an equal tree.
//! Source positions live in a side table on [`SnippetAst`] so that two trees
//! parsed from differently formatted text compare equal.

mod classify;
mod lexer;
mod parser;
mod render;
pub mod visit;

pub use classify::has_value_return;
pub use classify::{classify_unit, is_well_formed, UnitClass};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_expression, parse_snippet, ParseError};
pub use render::{render_expr, render_method, render_statements, render_type, Renderer};

/// Inclusive 1-based line range of a top-level statement in the original text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineRange {
    pub start: usize,
    pub end: usize,
}

/// Parsed snippet: imports plus the ordered top-level statements.
#[derive(Debug, Clone)]
pub struct SnippetAst {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub statements: Vec<Stmt>,
    /// One entry per element of `statements`.
    pub spans: Vec<LineRange>,
    /// Comments are dropped by the lexer, so this is always set for parsed input.
    pub comments_stripped: bool,
}

impl PartialEq for SnippetAst {
    fn eq(&self, other: &Self) -> bool {
        self.package == other.package
            && self.imports == other.imports
            && self.statements == other.statements
    }
}

impl SnippetAst {
    /// Method declarations found at the top level or inside top-level classes.
    pub fn methods(&self) -> Vec<&MethodDecl> {
        let mut out = Vec::new();
        for stmt in &self.statements {
            match stmt {
                Stmt::Method(m) => out.push(m),
                Stmt::Class(c) => {
                    for member in &c.members {
                        if let Member::Method(m) = member {
                            out.push(m);
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Import {
    /// Dotted path without the trailing `.*`.
    pub path: String,
    pub wildcard: bool,
    pub is_static: bool,
}

impl Import {
    pub fn display(&self) -> String {
        if self.wildcard {
            format!("{}.*", self.path)
        } else {
            self.path.clone()
        }
    }
}

/// A type as written in source. Generic arguments are kept for rendering;
/// semantic queries erase them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeRef {
    /// Possibly dotted name, e.g. `int`, `String`, `Map.Entry`, `java.util.Date`.
    pub name: String,
    pub args: Vec<TypeArg>,
    /// `true` for a diamond `<>` in an instance creation.
    pub diamond: bool,
    pub dims: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeArg {
    Type(TypeRef),
    Wildcard,
    Extends(TypeRef),
    Super(TypeRef),
}

pub const PRIMITIVES: [&str; 8] = [
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
];

impl TypeRef {
    pub fn simple(name: impl Into<String>) -> Self {
        TypeRef {
            name: name.into(),
            args: Vec::new(),
            diamond: false,
            dims: 0,
        }
    }

    pub fn void() -> Self {
        TypeRef::simple("void")
    }

    pub fn is_void(&self) -> bool {
        self.name == "void" && self.dims == 0
    }

    pub fn is_primitive(&self) -> bool {
        self.dims == 0 && PRIMITIVES.contains(&self.name.as_str())
    }

    pub fn with_dims(mut self, extra: usize) -> Self {
        self.dims += extra;
        self
    }

    /// Last segment of the dotted name.
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(String),
    Long(String),
    Float(String),
    Double(String),
    Char(String),
    /// Raw spelling including the quotes and escapes.
    Str(String),
    Bool(bool),
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Or,
    And,
    BitOr,
    BitXor,
    BitAnd,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Shl,
    Shr,
    UShr,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Or => "||",
            And => "&&",
            BitOr => "|",
            BitXor => "^",
            BitAnd => "&",
            Eq => "==",
            Ne => "!=",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            Shl => "<<",
            Shr => ">>",
            UShr => ">>>",
            Add => "+",
            Sub => "-",
            Mul => "*",
            Div => "/",
            Rem => "%",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem
        )
    }

    pub fn is_relational(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Gt | BinaryOp::Le | BinaryOp::Ge
        )
    }

    pub fn is_shift(self) -> bool {
        matches!(self, BinaryOp::Shl | BinaryOp::Shr | BinaryOp::UShr)
    }

    pub fn is_bitwise(self) -> bool {
        matches!(self, BinaryOp::BitAnd | BinaryOp::BitOr | BinaryOp::BitXor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Plus,
    Not,
    BitNot,
    PreInc,
    PreDec,
    PostInc,
    PostDec,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Plus => "+",
            UnaryOp::Not => "!",
            UnaryOp::BitNot => "~",
            UnaryOp::PreInc | UnaryOp::PostInc => "++",
            UnaryOp::PreDec | UnaryOp::PostDec => "--",
        }
    }

    pub fn is_mutation(self) -> bool {
        matches!(
            self,
            UnaryOp::PreInc | UnaryOp::PreDec | UnaryOp::PostInc | UnaryOp::PostDec
        )
    }

    pub fn is_postfix(self) -> bool {
        matches!(self, UnaryOp::PostInc | UnaryOp::PostDec)
    }
}

/// `None` is plain `=`; otherwise the compound operator (`+=` → `Some(Add)`).
pub type AssignOp = Option<BinaryOp>;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Literal),
    Name(String),
    This,
    FieldAccess {
        target: Box<Expr>,
        name: String,
    },
    MethodCall {
        target: Option<Box<Expr>>,
        name: String,
        args: Vec<Expr>,
    },
    New {
        ty: TypeRef,
        args: Vec<Expr>,
    },
    /// `new T[n][m]` or `new T[]{...}`; `ty` is the element type.
    NewArray {
        ty: TypeRef,
        sizes: Vec<Expr>,
        extra_dims: usize,
        init: Option<Vec<Expr>>,
    },
    /// Bare `{a, b}` initializer, only valid in declarations and nested initializers.
    ArrayInit(Vec<Expr>),
    Index {
        target: Box<Expr>,
        index: Box<Expr>,
    },
    Unary {
        op: UnaryOp,
        expr: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Assign {
        op: AssignOp,
        target: Box<Expr>,
        value: Box<Expr>,
    },
    Conditional {
        cond: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    Cast {
        ty: TypeRef,
        expr: Box<Expr>,
    },
    InstanceOf {
        expr: Box<Expr>,
        ty: TypeRef,
    },
    ClassLit(TypeRef),
    Paren(Box<Expr>),
}

impl Expr {
    pub fn name(s: impl Into<String>) -> Self {
        Expr::Name(s.into())
    }

    /// Strips redundant parentheses.
    pub fn unparen(&self) -> &Expr {
        match self {
            Expr::Paren(inner) => inner.unparen(),
            e => e,
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Expr::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_string_literal(&self) -> bool {
        matches!(self, Expr::Literal(Literal::Str(_)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Declarator {
    pub name: String,
    /// Dimensions written after the name (`int a[]`).
    pub dims: usize,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalVar {
    pub modifiers: Vec<String>,
    pub ty: TypeRef,
    pub declarators: Vec<Declarator>,
}

impl LocalVar {
    /// Declared type of one declarator, folding in trailing `[]`.
    pub fn type_of(&self, d: &Declarator) -> TypeRef {
        self.ty.clone().with_dims(d.dims)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForInit {
    Decl(LocalVar),
    Exprs(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub types: Vec<TypeRef>,
    pub name: String,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchCase {
    /// Empty for `default:`.
    pub labels: Vec<Expr>,
    pub is_default: bool,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    LocalVar(LocalVar),
    Expr(Expr),
    Block(Vec<Stmt>),
    If {
        cond: Expr,
        then: Box<Stmt>,
        otherwise: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Expr,
    },
    For {
        init: Option<ForInit>,
        cond: Option<Expr>,
        update: Vec<Expr>,
        body: Box<Stmt>,
    },
    ForEach {
        var: LocalVar,
        iterable: Expr,
        body: Box<Stmt>,
    },
    Try {
        resources: Vec<LocalVar>,
        body: Vec<Stmt>,
        catches: Vec<CatchClause>,
        finally: Option<Vec<Stmt>>,
    },
    Switch {
        scrutinee: Expr,
        cases: Vec<SwitchCase>,
    },
    Return(Option<Expr>),
    Throw(Expr),
    Break(Option<String>),
    Continue(Option<String>),
    Empty,
    Method(MethodDecl),
    Class(ClassDecl),
}

/// Coarse statement classification used by the extraction patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatementKind {
    /// `τ v = ε;`
    DeclInit,
    /// `τ v;`
    DeclOnly,
    /// `v = ε;`, `v += ε;`, `v++;` and friends.
    Assignment,
    ExpressionStmt,
    Loop,
    Conditional,
    Try,
    Return,
    Other,
}

impl Stmt {
    pub fn kind(&self) -> StatementKind {
        match self {
            Stmt::LocalVar(lv) if lv.declarators.len() == 1 => {
                if lv.declarators[0].init.is_some() {
                    StatementKind::DeclInit
                } else {
                    StatementKind::DeclOnly
                }
            }
            Stmt::Expr(e) => match e.unparen() {
                Expr::Assign { .. } => StatementKind::Assignment,
                Expr::Unary { op, .. } if op.is_mutation() => StatementKind::Assignment,
                _ => StatementKind::ExpressionStmt,
            },
            Stmt::While { .. } | Stmt::DoWhile { .. } | Stmt::For { .. } | Stmt::ForEach { .. } => {
                StatementKind::Loop
            }
            Stmt::If { .. } | Stmt::Switch { .. } => StatementKind::Conditional,
            Stmt::Try { .. } => StatementKind::Try,
            Stmt::Return(_) => StatementKind::Return,
            _ => StatementKind::Other,
        }
    }

    /// For `τ v = ε;` returns `(τ, v, ε)`.
    pub fn as_decl_init(&self) -> Option<(TypeRef, &str, &Expr)> {
        match self {
            Stmt::LocalVar(lv) if lv.declarators.len() == 1 => {
                let d = &lv.declarators[0];
                d.init
                    .as_ref()
                    .map(|init| (lv.type_of(d), d.name.as_str(), init))
            }
            _ => None,
        }
    }

    /// For `τ v;` returns `(τ, v)`.
    pub fn as_decl_only(&self) -> Option<(TypeRef, &str)> {
        match self {
            Stmt::LocalVar(lv) if lv.declarators.len() == 1 && lv.declarators[0].init.is_none() => {
                let d = &lv.declarators[0];
                Some((lv.type_of(d), d.name.as_str()))
            }
            _ => None,
        }
    }

    /// For a plain `v = ε;` returns `(v, ε)`. Compound assignments are excluded.
    pub fn as_simple_assignment(&self) -> Option<(&str, &Expr)> {
        match self {
            Stmt::Expr(e) => match e.unparen() {
                Expr::Assign {
                    op: None,
                    target,
                    value,
                } => target.as_name().map(|n| (n, value.as_ref())),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub ty: TypeRef,
    pub name: String,
}

impl Parameter {
    pub fn new(ty: TypeRef, name: impl Into<String>) -> Self {
        Parameter {
            ty,
            name: name.into(),
        }
    }
}

/// A method declaration. `body` is `None` for abstract and interface methods.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub modifiers: Vec<String>,
    pub return_type: TypeRef,
    pub name: String,
    pub params: Vec<Parameter>,
    pub throws: Vec<TypeRef>,
    pub body: Option<Vec<Stmt>>,
}

/// Alias used by the evaluation code, which treats parsed methods as API records.
pub type MethodDeclarationInfo = MethodDecl;

impl MethodDecl {
    pub fn is_public(&self) -> bool {
        self.modifiers.iter().any(|m| m == "public")
    }

    pub fn is_abstract(&self) -> bool {
        self.body.is_none() || self.modifiers.iter().any(|m| m == "abstract")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Class,
    Interface,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub modifiers: Vec<String>,
    pub kind: ClassKind,
    pub name: String,
    pub extends: Vec<TypeRef>,
    pub implements: Vec<TypeRef>,
    pub members: Vec<Member>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Field(LocalVar),
    Method(MethodDecl),
    Constructor(MethodDecl),
}
