//! Recursive-descent parser for the supported Java subset.
//!
//! Snippets are parsed as a sequence of top-level items, each of which is an
//! import, a method, a class, or a block statement. Lambdas, annotations,
//! generic methods, nested and anonymous classes are rejected.

use super::lexer::{tokenize, Token, TokenKind};
use super::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Parses snippet text into top-level statements.
pub fn parse_snippet(text: &str) -> PResult<SnippetAst> {
    if text.trim().is_empty() {
        return Err(ParseError::new(1, "empty snippet"));
    }
    let tokens = tokenize(text)?;
    let mut p = Parser {
        toks: tokens,
        pos: 0,
    };
    let mut ast = SnippetAst {
        package: None,
        imports: Vec::new(),
        statements: Vec::new(),
        spans: Vec::new(),
        comments_stripped: true,
    };
    while !p.at_eof() {
        if p.eat_kw("package") {
            let path = p.dotted_name()?;
            p.expect(";")?;
            ast.package = Some(path);
            continue;
        }
        if p.at_kw("import") {
            ast.imports.push(p.import()?);
            continue;
        }
        let first = p.pos;
        let stmt = p.top_item()?;
        let start = p.toks[first].line;
        let end = p.toks[p.pos.saturating_sub(1).max(first)].line;
        ast.statements.push(stmt);
        ast.spans.push(LineRange { start, end });
    }
    Ok(ast)
}

/// Parses a standalone expression (the whole input must be consumed).
pub fn parse_expression(text: &str) -> PResult<Expr> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        toks: tokens,
        pos: 0,
    };
    let e = p.expr()?;
    if !p.at_eof() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "strictfp",
    "transient",
    "volatile",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.toks[self.pos].kind
    }

    fn peek_at(&self, n: usize) -> &TokenKind {
        let idx = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[idx].kind
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line(), msg)
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), TokenKind::Eof)
    }

    fn bump(&mut self) -> TokenKind {
        let k = self.toks[self.pos].kind.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        k
    }

    fn at(&self, p: &str) -> bool {
        matches!(self.peek(), TokenKind::Punct(q) if *q == p)
    }

    fn at_n(&self, n: usize, p: &str) -> bool {
        matches!(self.peek_at(n), TokenKind::Punct(q) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.at(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", describe(self.peek()))))
        }
    }

    fn at_kw(&self, k: &str) -> bool {
        matches!(self.peek(), TokenKind::Keyword(q) if *q == k)
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.at_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {}", describe(&other)))),
        }
    }

    fn at_ident(&self) -> bool {
        matches!(self.peek(), TokenKind::Ident(_))
    }

    /// `>` tokens immediately followed (no whitespace) by more `>`/`=` tokens
    /// form a single operator. Returns the operator text and token count.
    fn gt_operator(&self) -> Option<(&'static str, usize)> {
        if !self.at(">") {
            return None;
        }
        let adjacent = |n: usize, p: &str| -> bool {
            let a = &self.toks[(self.pos + n - 1).min(self.toks.len() - 1)];
            let b = &self.toks[(self.pos + n).min(self.toks.len() - 1)];
            a.end == b.start && matches!(&b.kind, TokenKind::Punct(q) if *q == p)
        };
        if adjacent(1, ">") {
            if adjacent(2, ">") {
                if adjacent(3, "=") {
                    return Some((">>>=", 4));
                }
                return Some((">>>", 3));
            }
            if adjacent(2, "=") {
                return Some((">>=", 3));
            }
            return Some((">>", 2));
        }
        if adjacent(1, "=") {
            return Some((">=", 2));
        }
        Some((">", 1))
    }

    fn check_unsupported(&self) -> PResult<()> {
        match self.peek() {
            TokenKind::Punct("@") => Err(self.error("annotations are not supported")),
            TokenKind::Punct("->") => Err(self.error("lambda expressions are not supported")),
            TokenKind::Punct("::") => Err(self.error("method references are not supported")),
            TokenKind::Punct("...") => Err(self.error("varargs are not supported")),
            _ => Ok(()),
        }
    }

    // ---- top level ----

    fn dotted_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && matches!(self.peek_at(1), TokenKind::Ident(_)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn import(&mut self) -> PResult<Import> {
        self.bump();
        let is_static = self.eat_kw("static");
        let path = self.dotted_name()?;
        let wildcard = if self.eat(".") {
            self.expect("*")?;
            true
        } else {
            false
        };
        self.expect(";")?;
        Ok(Import {
            path,
            wildcard,
            is_static,
        })
    }

    fn modifiers(&mut self) -> Vec<String> {
        let mut mods = Vec::new();
        while let TokenKind::Keyword(k) = self.peek() {
            if MODIFIERS.contains(k) {
                mods.push(k.to_string());
                self.bump();
            } else {
                break;
            }
        }
        mods
    }

    fn top_item(&mut self) -> PResult<Stmt> {
        self.check_unsupported()?;
        let save = self.pos;
        let mods = self.modifiers();
        if self.at_kw("class") || self.at_kw("interface") {
            return Ok(Stmt::Class(self.class_decl(mods)?));
        }
        if self.at_kw("enum") {
            return Err(self.error("enum declarations are not supported"));
        }
        if self.at("<") {
            return Err(self.error("generic methods are not supported"));
        }
        if self.looks_like_method() {
            return Ok(Stmt::Method(self.method_decl(mods)?));
        }
        let only_final = mods.iter().all(|m| m == "final");
        if !only_final {
            return Err(self.error("unexpected modifiers before statement"));
        }
        self.pos = save;
        self.statement()
    }

    /// `Type name (` or `void name (` at the current position.
    fn looks_like_method(&mut self) -> bool {
        let save = self.pos;
        let ok = (|| {
            if !self.eat_kw("void") {
                self.ty().ok()?;
            }
            self.ident().ok()?;
            self.at("(").then_some(())
        })()
        .is_some();
        self.pos = save;
        ok
    }

    fn method_decl(&mut self, modifiers: Vec<String>) -> PResult<MethodDecl> {
        let return_type = if self.eat_kw("void") {
            TypeRef::void()
        } else {
            self.ty()?
        };
        let name = self.ident()?;
        let params = self.params()?;
        let throws = self.throws_clause()?;
        let body = if self.eat(";") {
            None
        } else {
            Some(self.block()?)
        };
        Ok(MethodDecl {
            modifiers,
            return_type,
            name,
            params,
            throws,
            body,
        })
    }

    fn params(&mut self) -> PResult<Vec<Parameter>> {
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.eat(")") {
            loop {
                self.check_unsupported()?;
                self.eat_kw("final");
                let ty = self.ty()?;
                self.check_unsupported()?;
                let name = self.ident()?;
                let dims = self.dims();
                params.push(Parameter {
                    ty: ty.with_dims(dims),
                    name,
                });
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(params)
    }

    fn throws_clause(&mut self) -> PResult<Vec<TypeRef>> {
        let mut throws = Vec::new();
        if self.eat_kw("throws") {
            loop {
                throws.push(self.ty()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        Ok(throws)
    }

    fn class_decl(&mut self, modifiers: Vec<String>) -> PResult<ClassDecl> {
        let kind = if self.eat_kw("class") {
            ClassKind::Class
        } else {
            self.bump();
            ClassKind::Interface
        };
        let name = self.ident()?;
        if self.at("<") {
            return Err(self.error("generic classes are not supported"));
        }
        let mut extends = Vec::new();
        let mut implements = Vec::new();
        if self.eat_kw("extends") {
            loop {
                extends.push(self.ty()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        if self.eat_kw("implements") {
            loop {
                implements.push(self.ty()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("{")?;
        let mut members = Vec::new();
        while !self.eat("}") {
            if self.at_eof() {
                return Err(self.error("unterminated class body"));
            }
            if self.eat(";") {
                continue;
            }
            self.check_unsupported()?;
            let mods = self.modifiers();
            if self.at_kw("class") || self.at_kw("interface") || self.at_kw("enum") {
                return Err(self.error("nested classes are not supported"));
            }
            if self.at("{") {
                return Err(self.error("initializer blocks are not supported"));
            }
            if self.at("<") {
                return Err(self.error("generic methods are not supported"));
            }
            if matches!(self.peek(), TokenKind::Ident(n) if *n == name) && self.at_n(1, "(") {
                self.bump();
                let params = self.params()?;
                let throws = self.throws_clause()?;
                let body = self.block()?;
                members.push(Member::Constructor(MethodDecl {
                    modifiers: mods,
                    return_type: TypeRef::void(),
                    name: name.clone(),
                    params,
                    throws,
                    body: Some(body),
                }));
                continue;
            }
            if self.looks_like_method() {
                members.push(Member::Method(self.method_decl(mods)?));
            } else {
                let ty = self.ty()?;
                let declarators = self.declarators()?;
                self.expect(";")?;
                members.push(Member::Field(LocalVar {
                    modifiers: mods,
                    ty,
                    declarators,
                }));
            }
        }
        Ok(ClassDecl {
            modifiers,
            kind,
            name,
            extends,
            implements,
            members,
        })
    }

    // ---- types ----

    fn dims(&mut self) -> usize {
        let mut dims = 0;
        while self.at("[") && self.at_n(1, "]") {
            self.bump();
            self.bump();
            dims += 1;
        }
        dims
    }

    fn primitive_kw(&self) -> Option<&'static str> {
        match self.peek() {
            TokenKind::Keyword(k) if PRIMITIVES.contains(k) => Some(k),
            _ => None,
        }
    }

    fn ty(&mut self) -> PResult<TypeRef> {
        let mut t = self.ty_no_dims()?;
        t.dims = self.dims();
        Ok(t)
    }

    fn ty_no_dims(&mut self) -> PResult<TypeRef> {
        if let Some(p) = self.primitive_kw() {
            self.bump();
            return Ok(TypeRef::simple(p));
        }
        let name = self.dotted_name()?;
        let mut t = TypeRef::simple(name);
        if self.at("<") {
            self.bump();
            if self.eat(">") {
                t.diamond = true;
            } else {
                loop {
                    t.args.push(self.type_arg()?);
                    if self.eat(">") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            if self.at(".") && matches!(self.peek_at(1), TokenKind::Ident(_)) {
                return Err(self.error("qualified generic types are not supported"));
            }
        }
        Ok(t)
    }

    fn type_arg(&mut self) -> PResult<TypeArg> {
        if self.eat("?") {
            if self.eat_kw("extends") {
                return Ok(TypeArg::Extends(self.ty()?));
            }
            if self.eat_kw("super") {
                return Ok(TypeArg::Super(self.ty()?));
            }
            return Ok(TypeArg::Wildcard);
        }
        if self.primitive_kw().is_some() && !self.at_n(1, "[") {
            return Err(self.error("primitive type arguments are not allowed"));
        }
        let t = self.ty()?;
        if t.args.iter().any(|a| {
            matches!(a, TypeArg::Extends(inner) | TypeArg::Super(inner) if !inner.args.is_empty())
        }) {
            return Err(self.error("nested wildcard bounds are not supported"));
        }
        Ok(TypeArg::Type(t))
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.eat("}") {
            if self.at_eof() {
                return Err(self.error("unterminated block"));
            }
            stmts.push(self.statement()?);
        }
        Ok(stmts)
    }

    /// True when the tokens ahead read `Type name` followed by one of the
    /// declarator continuations (or `:` for an enhanced for header).
    fn looks_like_local_var(&mut self, allow_colon: bool) -> bool {
        let save = self.pos;
        self.eat_kw("final");
        let ok = self.ty().is_ok()
            && self.at_ident()
            && match self.peek_at(1) {
                TokenKind::Punct(p) => {
                    matches!(*p, "=" | ";" | "," | "[") || (allow_colon && *p == ":")
                }
                _ => false,
            };
        self.pos = save;
        ok
    }

    fn local_var(&mut self) -> PResult<LocalVar> {
        let mut modifiers = Vec::new();
        if self.eat_kw("final") {
            modifiers.push("final".to_string());
        }
        let ty = self.ty()?;
        let declarators = self.declarators()?;
        Ok(LocalVar {
            modifiers,
            ty,
            declarators,
        })
    }

    fn declarators(&mut self) -> PResult<Vec<Declarator>> {
        let mut out = Vec::new();
        loop {
            let name = self.ident()?;
            let dims = self.dims();
            let init = if self.eat("=") {
                Some(if self.at("{") {
                    self.array_init()?
                } else {
                    self.expr()?
                })
            } else {
                None
            };
            out.push(Declarator { name, dims, init });
            if !self.eat(",") {
                break;
            }
        }
        Ok(out)
    }

    fn array_init(&mut self) -> PResult<Expr> {
        self.expect("{")?;
        let mut elems = Vec::new();
        while !self.eat("}") {
            elems.push(if self.at("{") {
                self.array_init()?
            } else {
                self.expr()?
            });
            if !self.eat(",") {
                self.expect("}")?;
                break;
            }
        }
        Ok(Expr::ArrayInit(elems))
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        self.check_unsupported()?;
        if self.at("{") {
            return Ok(Stmt::Block(self.block()?));
        }
        if self.eat(";") {
            return Ok(Stmt::Empty);
        }
        if let TokenKind::Keyword(k) = self.peek().clone() {
            match k {
                "if" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let then = Box::new(self.statement()?);
                    let otherwise = if self.eat_kw("else") {
                        Some(Box::new(self.statement()?))
                    } else {
                        None
                    };
                    return Ok(Stmt::If {
                        cond,
                        then,
                        otherwise,
                    });
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let body = Box::new(self.statement()?);
                    return Ok(Stmt::While { cond, body });
                }
                "do" => {
                    self.bump();
                    let body = Box::new(self.statement()?);
                    if !self.eat_kw("while") {
                        return Err(self.error("expected `while` after do body"));
                    }
                    let cond = self.paren_expr()?;
                    self.expect(";")?;
                    return Ok(Stmt::DoWhile { body, cond });
                }
                "for" => return self.for_stmt(),
                "try" => return self.try_stmt(),
                "switch" => return self.switch_stmt(),
                "return" => {
                    self.bump();
                    let value = if self.at(";") {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect(";")?;
                    return Ok(Stmt::Return(value));
                }
                "throw" => {
                    self.bump();
                    let e = self.expr()?;
                    self.expect(";")?;
                    return Ok(Stmt::Throw(e));
                }
                "break" | "continue" => {
                    self.bump();
                    let label = if self.at_ident() {
                        Some(self.ident()?)
                    } else {
                        None
                    };
                    self.expect(";")?;
                    return Ok(if k == "break" {
                        Stmt::Break(label)
                    } else {
                        Stmt::Continue(label)
                    });
                }
                "class" | "interface" | "enum" | "abstract" | "static" | "public" | "private"
                | "protected" => {
                    return Err(self.error("local type declarations are not supported"));
                }
                "synchronized" | "assert" => {
                    return Err(self.error(format!("`{k}` statements are not supported")));
                }
                "else" | "catch" | "finally" | "case" | "default" => {
                    return Err(self.error(format!("unexpected `{k}`")));
                }
                _ => {}
            }
        }
        if self.at_ident() && self.at_n(1, ":") {
            return Err(self.error("labeled statements are not supported"));
        }
        if self.looks_like_local_var(false) {
            let lv = self.local_var()?;
            self.expect(";")?;
            return Ok(Stmt::LocalVar(lv));
        }
        let e = self.expr()?;
        self.expect(";")?;
        Ok(Stmt::Expr(e))
    }

    fn for_stmt(&mut self) -> PResult<Stmt> {
        self.bump();
        self.expect("(")?;
        let mut init = None;
        if !self.at(";") {
            if self.looks_like_local_var(true) {
                let lv = self.local_var_header()?;
                if self.eat(":") {
                    let iterable = self.expr()?;
                    self.expect(")")?;
                    let body = Box::new(self.statement()?);
                    return Ok(Stmt::ForEach {
                        var: lv,
                        iterable,
                        body,
                    });
                }
                init = Some(ForInit::Decl(lv));
            } else {
                let mut exprs = vec![self.expr()?];
                while self.eat(",") {
                    exprs.push(self.expr()?);
                }
                init = Some(ForInit::Exprs(exprs));
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            update.push(self.expr()?);
            while self.eat(",") {
                update.push(self.expr()?);
            }
        }
        self.expect(")")?;
        let body = Box::new(self.statement()?);
        Ok(Stmt::For {
            init,
            cond,
            update,
            body,
        })
    }

    /// Local variable in a for header: a single declarator followed by `:`
    /// becomes the enhanced-for variable.
    fn local_var_header(&mut self) -> PResult<LocalVar> {
        let mut modifiers = Vec::new();
        if self.eat_kw("final") {
            modifiers.push("final".to_string());
        }
        let ty = self.ty()?;
        if self.at_ident() && self.at_n(1, ":") {
            let name = self.ident()?;
            return Ok(LocalVar {
                modifiers,
                ty,
                declarators: vec![Declarator {
                    name,
                    dims: 0,
                    init: None,
                }],
            });
        }
        let declarators = self.declarators()?;
        Ok(LocalVar {
            modifiers,
            ty,
            declarators,
        })
    }

    fn try_stmt(&mut self) -> PResult<Stmt> {
        self.bump();
        let mut resources = Vec::new();
        if self.eat("(") {
            loop {
                let lv = self.local_var()?;
                if lv.declarators.len() != 1 || lv.declarators[0].init.is_none() {
                    return Err(self.error("malformed try resource"));
                }
                resources.push(lv);
                if self.eat(")") {
                    break;
                }
                self.expect(";")?;
                if self.eat(")") {
                    break;
                }
            }
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.eat_kw("catch") {
            self.expect("(")?;
            self.eat_kw("final");
            let mut types = vec![self.ty()?];
            while self.eat("|") {
                types.push(self.ty()?);
            }
            let name = self.ident()?;
            self.expect(")")?;
            let body = self.block()?;
            catches.push(CatchClause { types, name, body });
        }
        let finally = if self.eat_kw("finally") {
            Some(self.block()?)
        } else {
            None
        };
        if catches.is_empty() && finally.is_none() && resources.is_empty() {
            return Err(self.error("try without catch or finally"));
        }
        Ok(Stmt::Try {
            resources,
            body,
            catches,
            finally,
        })
    }

    fn switch_stmt(&mut self) -> PResult<Stmt> {
        self.bump();
        let scrutinee = self.paren_expr()?;
        self.expect("{")?;
        let mut cases: Vec<SwitchCase> = Vec::new();
        while !self.eat("}") {
            if self.at_eof() {
                return Err(self.error("unterminated switch"));
            }
            if self.eat_kw("case") {
                let label = self.ternary()?;
                self.expect(":")?;
                match cases.last_mut() {
                    Some(c) if c.body.is_empty() && !c.is_default => c.labels.push(label),
                    _ => cases.push(SwitchCase {
                        labels: vec![label],
                        is_default: false,
                        body: Vec::new(),
                    }),
                }
            } else if self.eat_kw("default") {
                self.expect(":")?;
                cases.push(SwitchCase {
                    labels: Vec::new(),
                    is_default: true,
                    body: Vec::new(),
                });
            } else {
                let stmt = self.statement()?;
                match cases.last_mut() {
                    Some(c) => c.body.push(stmt),
                    None => return Err(self.error("statement before first case label")),
                }
            }
        }
        Ok(Stmt::Switch { scrutinee, cases })
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        self.check_unsupported()?;
        let lhs = self.ternary()?;
        let op: Option<(AssignOp, usize)> = match self.peek() {
            TokenKind::Punct(p) => match *p {
                "=" => Some((None, 1)),
                "+=" => Some((Some(BinaryOp::Add), 1)),
                "-=" => Some((Some(BinaryOp::Sub), 1)),
                "*=" => Some((Some(BinaryOp::Mul), 1)),
                "/=" => Some((Some(BinaryOp::Div), 1)),
                "%=" => Some((Some(BinaryOp::Rem), 1)),
                "&=" => Some((Some(BinaryOp::BitAnd), 1)),
                "|=" => Some((Some(BinaryOp::BitOr), 1)),
                "^=" => Some((Some(BinaryOp::BitXor), 1)),
                "<<=" => Some((Some(BinaryOp::Shl), 1)),
                ">" => match self.gt_operator() {
                    Some((">>=", n)) => Some((Some(BinaryOp::Shr), n)),
                    Some((">>>=", n)) => Some((Some(BinaryOp::UShr), n)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        };
        let Some((op, width)) = op else {
            return Ok(lhs);
        };
        if !matches!(
            lhs,
            Expr::Name(_) | Expr::FieldAccess { .. } | Expr::Index { .. }
        ) {
            return Err(self.error("invalid assignment target"));
        }
        for _ in 0..width {
            self.bump();
        }
        let value = if self.at("{") {
            return Err(self.error("array initializer outside declaration"));
        } else {
            self.expr()?
        };
        Ok(Expr::Assign {
            op,
            target: Box::new(lhs),
            value: Box::new(value),
        })
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.eat("?") {
            let then = self.expr()?;
            self.expect(":")?;
            let otherwise = self.ternary()?;
            return Ok(Expr::Conditional {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: Box::new(otherwise),
            });
        }
        Ok(cond)
    }

    /// Returns the binary operator at the cursor, its precedence and token width.
    fn binary_op(&self) -> Option<(BinaryOp, u8, usize)> {
        use BinaryOp::*;
        let TokenKind::Punct(p) = self.peek() else {
            return None;
        };
        let (op, width) = match *p {
            "||" => (Or, 1),
            "&&" => (And, 1),
            "|" => (BitOr, 1),
            "^" => (BitXor, 1),
            "&" => (BitAnd, 1),
            "==" => (Eq, 1),
            "!=" => (Ne, 1),
            "<" => (Lt, 1),
            "<=" => (Le, 1),
            "<<" => (Shl, 1),
            "+" => (Add, 1),
            "-" => (Sub, 1),
            "*" => (Mul, 1),
            "/" => (Div, 1),
            "%" => (Rem, 1),
            ">" => match self.gt_operator()? {
                (">", n) => (Gt, n),
                (">=", n) => (Ge, n),
                (">>", n) => (Shr, n),
                (">>>", n) => (UShr, n),
                _ => return None,
            },
            _ => return None,
        };
        Some((op, precedence(op), width))
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.at_kw("instanceof") {
                if min_prec > 7 {
                    break;
                }
                self.bump();
                let ty = self.ty()?;
                lhs = Expr::InstanceOf {
                    expr: Box::new(lhs),
                    ty,
                };
                continue;
            }
            let Some((op, prec, width)) = self.binary_op() else {
                break;
            };
            if prec < min_prec {
                break;
            }
            for _ in 0..width {
                self.bump();
            }
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let op = match self.peek() {
            TokenKind::Punct("-") => Some(UnaryOp::Neg),
            TokenKind::Punct("+") => Some(UnaryOp::Plus),
            TokenKind::Punct("!") => Some(UnaryOp::Not),
            TokenKind::Punct("~") => Some(UnaryOp::BitNot),
            TokenKind::Punct("++") => Some(UnaryOp::PreInc),
            TokenKind::Punct("--") => Some(UnaryOp::PreDec),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let expr = self.unary()?;
            if op.is_mutation() && !is_lvalue(&expr) {
                return Err(self.error("invalid increment target"));
            }
            return Ok(Expr::Unary {
                op,
                expr: Box::new(expr),
            });
        }
        if self.at("(") {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        self.postfix()
    }

    fn try_cast(&mut self) -> PResult<Option<Expr>> {
        let save = self.pos;
        self.bump();
        let primitive = self.primitive_kw().is_some();
        let ty = match self.ty() {
            Ok(t) if self.at(")") => t,
            _ => {
                self.pos = save;
                return Ok(None);
            }
        };
        self.bump();
        let follows_operand = match self.peek() {
            TokenKind::Ident(_)
            | TokenKind::IntLit(_)
            | TokenKind::LongLit(_)
            | TokenKind::FloatLit(_)
            | TokenKind::DoubleLit(_)
            | TokenKind::CharLit(_)
            | TokenKind::StrLit(_) => true,
            TokenKind::Keyword(k) => {
                matches!(*k, "this" | "new" | "true" | "false" | "null" | "super")
                    || PRIMITIVES.contains(k)
            }
            TokenKind::Punct(p) => {
                matches!(*p, "(" | "!" | "~")
                    || (primitive && matches!(*p, "-" | "+" | "++" | "--"))
            }
            TokenKind::Eof => false,
        };
        if !follows_operand
            || (!primitive && ty.dims == 0 && ty.args.is_empty() && !looks_like_type_name(&ty.name))
        {
            self.pos = save;
            return Ok(None);
        }
        let expr = self.unary()?;
        Ok(Some(Expr::Cast {
            ty,
            expr: Box::new(expr),
        }))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            self.check_unsupported()?;
            if self.at(".") {
                self.bump();
                if self.eat_kw("class") {
                    e = Expr::ClassLit(
                        expr_to_type(&e, 0).ok_or_else(|| self.error("invalid class literal"))?,
                    );
                    continue;
                }
                if self.at_kw("new") || self.at_kw("this") || self.at_kw("super") {
                    return Err(self.error("qualified this/new/super is not supported"));
                }
                if self.at("<") {
                    return Err(self.error("explicit generic method calls are not supported"));
                }
                let name = self.ident()?;
                if self.at("(") {
                    let args = self.args()?;
                    e = Expr::MethodCall {
                        target: Some(Box::new(e)),
                        name,
                        args,
                    };
                } else {
                    e = Expr::FieldAccess {
                        target: Box::new(e),
                        name,
                    };
                }
            } else if self.at("[") {
                if self.at_n(1, "]") {
                    let dims = self.dims();
                    if !(self.eat(".") && self.eat_kw("class")) {
                        return Err(self.error("expected `.class` after array type"));
                    }
                    e = Expr::ClassLit(
                        expr_to_type(&e, dims)
                            .ok_or_else(|| self.error("invalid class literal"))?,
                    );
                    continue;
                }
                self.bump();
                let index = self.expr()?;
                self.expect("]")?;
                e = Expr::Index {
                    target: Box::new(e),
                    index: Box::new(index),
                };
            } else if self.at("++") || self.at("--") {
                if !is_lvalue(&e) {
                    break;
                }
                let op = if self.at("++") {
                    UnaryOp::PostInc
                } else {
                    UnaryOp::PostDec
                };
                self.bump();
                e = Expr::Unary {
                    op,
                    expr: Box::new(e),
                };
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.expr()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        self.check_unsupported()?;
        let tok = self.peek().clone();
        match tok {
            TokenKind::IntLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Int(s)))
            }
            TokenKind::LongLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Long(s)))
            }
            TokenKind::FloatLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Float(s)))
            }
            TokenKind::DoubleLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Double(s)))
            }
            TokenKind::CharLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Char(s)))
            }
            TokenKind::StrLit(s) => {
                self.bump();
                Ok(Expr::Literal(Literal::Str(s)))
            }
            TokenKind::Keyword("true") => {
                self.bump();
                Ok(Expr::Literal(Literal::Bool(true)))
            }
            TokenKind::Keyword("false") => {
                self.bump();
                Ok(Expr::Literal(Literal::Bool(false)))
            }
            TokenKind::Keyword("null") => {
                self.bump();
                Ok(Expr::Literal(Literal::Null))
            }
            TokenKind::Keyword("this") => {
                self.bump();
                if self.at("(") {
                    return Err(self.error("constructor calls are not supported"));
                }
                Ok(Expr::This)
            }
            TokenKind::Keyword("super") => Err(self.error("`super` is not supported")),
            TokenKind::Keyword("new") => self.creation(),
            TokenKind::Keyword(k) if PRIMITIVES.contains(&k) || k == "void" => {
                self.bump();
                let dims = self.dims();
                if self.eat(".") && self.eat_kw("class") {
                    Ok(Expr::ClassLit(TypeRef::simple(k).with_dims(dims)))
                } else {
                    Err(self.error(format!("unexpected `{k}`")))
                }
            }
            TokenKind::Ident(name) => {
                self.bump();
                if self.at("->") {
                    return Err(self.error("lambda expressions are not supported"));
                }
                if self.at("(") {
                    let args = self.args()?;
                    return Ok(Expr::MethodCall {
                        target: None,
                        name,
                        args,
                    });
                }
                Ok(Expr::Name(name))
            }
            TokenKind::Punct("(") => {
                self.bump();
                if self.at(")") {
                    return Err(self.error("lambda expressions are not supported"));
                }
                let e = self.expr()?;
                self.expect(")")?;
                if self.at("->") {
                    return Err(self.error("lambda expressions are not supported"));
                }
                Ok(Expr::Paren(Box::new(e)))
            }
            TokenKind::Punct("{") => Err(self.error("array initializer outside declaration")),
            other => Err(self.error(format!("expected expression, found {}", describe(&other)))),
        }
    }

    fn creation(&mut self) -> PResult<Expr> {
        self.bump();
        let ty = self.ty_no_dims()?;
        if self.at("[") {
            let mut sizes = Vec::new();
            while self.at("[") && !self.at_n(1, "]") {
                self.bump();
                sizes.push(self.expr()?);
                self.expect("]")?;
            }
            let extra_dims = self.dims();
            let init = if sizes.is_empty() {
                if extra_dims == 0 {
                    return Err(self.error("array creation without dimensions"));
                }
                match self.array_init()? {
                    Expr::ArrayInit(elems) => Some(elems),
                    _ => unreachable!(),
                }
            } else {
                None
            };
            return Ok(Expr::NewArray {
                ty,
                sizes,
                extra_dims,
                init,
            });
        }
        let args = self.args()?;
        if self.at("{") {
            return Err(self.error("anonymous classes are not supported"));
        }
        Ok(Expr::New { ty, args })
    }
}

fn precedence(op: BinaryOp) -> u8 {
    use BinaryOp::*;
    match op {
        Or => 1,
        And => 2,
        BitOr => 3,
        BitXor => 4,
        BitAnd => 5,
        Eq | Ne => 6,
        Lt | Gt | Le | Ge => 7,
        Shl | Shr | UShr => 8,
        Add | Sub => 9,
        Mul | Div | Rem => 10,
    }
}

pub(crate) fn binary_precedence(op: BinaryOp) -> u8 {
    precedence(op)
}

fn is_lvalue(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Name(_) | Expr::FieldAccess { .. } | Expr::Index { .. }
    )
}

/// Reference casts need a capitalised type name, otherwise `(a) - b` and
/// friends would be misread.
fn looks_like_type_name(name: &str) -> bool {
    name.rsplit('.')
        .next()
        .and_then(|s| s.chars().next())
        .is_some_and(|c| c.is_ascii_uppercase())
}

fn expr_to_type(e: &Expr, dims: usize) -> Option<TypeRef> {
    fn dotted(e: &Expr) -> Option<String> {
        match e {
            Expr::Name(n) => Some(n.clone()),
            Expr::FieldAccess { target, name } => Some(format!("{}.{}", dotted(target)?, name)),
            _ => None,
        }
    }
    Some(TypeRef::simple(dotted(e)?).with_dims(dims))
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("identifier `{s}`"),
        TokenKind::Keyword(k) => format!("`{k}`"),
        TokenKind::Punct(p) => format!("`{p}`"),
        TokenKind::Eof => "end of input".to_string(),
        TokenKind::StrLit(s)
        | TokenKind::CharLit(s)
        | TokenKind::IntLit(s)
        | TokenKind::LongLit(s)
        | TokenKind::FloatLit(s)
        | TokenKind::DoubleLit(s) => format!("literal {s}"),
    }
}
