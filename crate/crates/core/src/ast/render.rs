//! Deterministic pretty-printer: four-space indentation, one statement per
//! line, LF line endings. Output re-parses to an equal tree.

use super::parser::binary_precedence;
use super::*;

const INDENT: &str = "    ";

#[derive(Debug, Default)]
pub struct Renderer {
    lines: Vec<String>,
    indent: usize,
}

impl Renderer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_indent(indent: usize) -> Self {
        Renderer {
            lines: Vec::new(),
            indent,
        }
    }

    pub fn finish(self) -> Vec<String> {
        self.lines
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        let text = text.as_ref();
        if text.is_empty() {
            self.lines.push(String::new());
        } else {
            self.lines
                .push(format!("{}{}", INDENT.repeat(self.indent), text));
        }
    }

    pub fn indented(&mut self, f: impl FnOnce(&mut Self)) {
        self.indent += 1;
        f(self);
        self.indent -= 1;
    }

    fn pop_last(&mut self) -> String {
        self.lines
            .pop()
            .map(|l| l.trim_start().to_string())
            .unwrap_or_default()
    }

    /// `header { ... }`, or `header { }` when empty.
    pub fn block(&mut self, header: &str, stmts: &[Stmt]) {
        let open = if header.is_empty() {
            "{".to_string()
        } else {
            format!("{header} {{")
        };
        if stmts.is_empty() {
            self.line(format!("{open} }}"));
            return;
        }
        self.line(open);
        self.indented(|r| {
            for s in stmts {
                r.stmt(s);
            }
        });
        self.line("}");
    }

    /// Always multi-line, for try/catch/finally chains.
    fn open_block(&mut self, header: &str, stmts: &[Stmt]) {
        self.line(format!("{header} {{"));
        self.indented(|r| {
            for s in stmts {
                r.stmt(s);
            }
        });
        self.line("}");
    }

    fn body(&mut self, header: &str, body: &Stmt) {
        match body {
            Stmt::Block(stmts) => self.block(header, stmts),
            other => {
                self.line(header);
                self.indented(|r| r.stmt(other));
            }
        }
    }

    pub fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::LocalVar(lv) => self.line(format!("{};", local_var(lv))),
            Stmt::Expr(e) => self.line(format!("{};", render_expr(e))),
            Stmt::Block(stmts) => self.block("", stmts),
            Stmt::If {
                cond,
                then,
                otherwise,
            } => self.if_chain("", cond, then, otherwise.as_deref()),
            Stmt::While { cond, body } => {
                self.body(&format!("while ({})", render_expr(cond)), body)
            }
            Stmt::DoWhile { body, cond } => {
                let c = render_expr(cond);
                match body.as_ref() {
                    Stmt::Block(stmts) if stmts.is_empty() => {
                        self.line(format!("do {{ }} while ({c});"))
                    }
                    Stmt::Block(stmts) => {
                        self.open_block("do", stmts);
                        let close = self.pop_last();
                        self.line(format!("{close} while ({c});"));
                    }
                    other => {
                        self.line("do");
                        self.indented(|r| r.stmt(other));
                        self.line(format!("while ({c});"));
                    }
                }
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                let mut header = String::from("for (");
                match init {
                    Some(ForInit::Decl(lv)) => header.push_str(&local_var(lv)),
                    Some(ForInit::Exprs(es)) => header.push_str(&join_exprs(es)),
                    None => {}
                }
                header.push(';');
                if let Some(c) = cond {
                    header.push(' ');
                    header.push_str(&render_expr(c));
                }
                header.push(';');
                if !update.is_empty() {
                    header.push(' ');
                    header.push_str(&join_exprs(update));
                }
                header.push(')');
                self.body(&header, body);
            }
            Stmt::ForEach {
                var,
                iterable,
                body,
            } => {
                let header = format!(
                    "for ({}{} {} : {})",
                    mods_prefix(&var.modifiers),
                    render_type(&var.ty),
                    var.declarators[0].name,
                    render_expr(iterable)
                );
                self.body(&header, body);
            }
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                let header = if resources.is_empty() {
                    "try".to_string()
                } else {
                    let rs: Vec<String> = resources.iter().map(local_var).collect();
                    format!("try ({})", rs.join("; "))
                };
                self.open_block(&header, body);
                for c in catches {
                    let close = self.pop_last();
                    let types: Vec<String> = c.types.iter().map(render_type).collect();
                    self.open_block(
                        &format!("{close} catch ({} {})", types.join(" | "), c.name),
                        &c.body,
                    );
                }
                if let Some(f) = finally {
                    let close = self.pop_last();
                    self.open_block(&format!("{close} finally"), f);
                }
            }
            Stmt::Switch { scrutinee, cases } => {
                self.line(format!("switch ({}) {{", render_expr(scrutinee)));
                self.indented(|r| {
                    for case in cases {
                        for label in &case.labels {
                            r.line(format!("case {}:", render_expr(label)));
                        }
                        if case.is_default {
                            r.line("default:");
                        }
                        r.indented(|r| {
                            for s in &case.body {
                                r.stmt(s);
                            }
                        });
                    }
                });
                self.line("}");
            }
            Stmt::Return(None) => self.line("return;"),
            Stmt::Return(Some(e)) => self.line(format!("return {};", render_expr(e))),
            Stmt::Throw(e) => self.line(format!("throw {};", render_expr(e))),
            Stmt::Break(None) => self.line("break;"),
            Stmt::Break(Some(l)) => self.line(format!("break {l};")),
            Stmt::Continue(None) => self.line("continue;"),
            Stmt::Continue(Some(l)) => self.line(format!("continue {l};")),
            Stmt::Empty => self.line(";"),
            Stmt::Method(m) => self.method(m),
            Stmt::Class(c) => self.class(c),
        }
    }

    fn if_chain(&mut self, prefix: &str, cond: &Expr, then: &Stmt, otherwise: Option<&Stmt>) {
        let header = format!("{prefix}if ({})", render_expr(cond));
        self.body(&header, then);
        let Some(otherwise) = otherwise else {
            return;
        };
        let else_prefix = if matches!(then, Stmt::Block(_)) {
            format!("{} else", self.pop_last())
        } else {
            "else".to_string()
        };
        match otherwise {
            Stmt::If {
                cond,
                then,
                otherwise,
            } => self.if_chain(&format!("{else_prefix} "), cond, then, otherwise.as_deref()),
            other => self.body(&else_prefix, other),
        }
    }

    pub fn method(&mut self, m: &MethodDecl) {
        let header = method_header(m);
        match &m.body {
            Some(body) => self.block(&header, body),
            None => self.line(format!("{header};")),
        }
    }

    fn class(&mut self, c: &ClassDecl) {
        let kw = match c.kind {
            ClassKind::Class => "class",
            ClassKind::Interface => "interface",
        };
        let mut header = format!("{}{kw} {}", mods_prefix(&c.modifiers), c.name);
        if !c.extends.is_empty() {
            header.push_str(" extends ");
            header.push_str(&join_types(&c.extends));
        }
        if !c.implements.is_empty() {
            header.push_str(" implements ");
            header.push_str(&join_types(&c.implements));
        }
        if c.members.is_empty() {
            self.line(format!("{header} {{ }}"));
            return;
        }
        self.line(format!("{header} {{"));
        self.indented(|r| {
            for (i, member) in c.members.iter().enumerate() {
                if i > 0 {
                    r.line("");
                }
                match member {
                    Member::Field(lv) => r.line(format!("{};", local_var(lv))),
                    Member::Method(m) => r.method(m),
                    Member::Constructor(m) => {
                        let header = format!(
                            "{}{}({}){}",
                            mods_prefix(&m.modifiers),
                            m.name,
                            params(&m.params),
                            throws(&m.throws)
                        );
                        r.block(&header, m.body.as_deref().unwrap_or_default());
                    }
                }
            }
        });
        self.line("}");
    }
}

fn mods_prefix(mods: &[String]) -> String {
    mods.iter().map(|m| format!("{m} ")).collect()
}

fn params(ps: &[Parameter]) -> String {
    ps.iter()
        .map(|p| format!("{} {}", render_type(&p.ty), p.name))
        .collect::<Vec<_>>()
        .join(", ")
}

fn throws(ts: &[TypeRef]) -> String {
    if ts.is_empty() {
        String::new()
    } else {
        format!(" throws {}", join_types(ts))
    }
}

pub(crate) fn method_header(m: &MethodDecl) -> String {
    format!(
        "{}{} {}({}){}",
        mods_prefix(&m.modifiers),
        render_type(&m.return_type),
        m.name,
        params(&m.params),
        throws(&m.throws)
    )
}

fn join_types(ts: &[TypeRef]) -> String {
    ts.iter().map(render_type).collect::<Vec<_>>().join(", ")
}

fn join_exprs(es: &[Expr]) -> String {
    es.iter().map(render_expr).collect::<Vec<_>>().join(", ")
}

fn local_var(lv: &LocalVar) -> String {
    let decls: Vec<String> = lv
        .declarators
        .iter()
        .map(|d| {
            let mut s = d.name.clone();
            s.push_str(&"[]".repeat(d.dims));
            if let Some(init) = &d.init {
                s.push_str(" = ");
                s.push_str(&render_expr(init));
            }
            s
        })
        .collect();
    format!(
        "{}{} {}",
        mods_prefix(&lv.modifiers),
        render_type(&lv.ty),
        decls.join(", ")
    )
}

pub fn render_type(t: &TypeRef) -> String {
    let mut s = t.name.clone();
    if t.diamond {
        s.push_str("<>");
    } else if !t.args.is_empty() {
        let args: Vec<String> = t
            .args
            .iter()
            .map(|a| match a {
                TypeArg::Type(t) => render_type(t),
                TypeArg::Wildcard => "?".to_string(),
                TypeArg::Extends(t) => format!("? extends {}", render_type(t)),
                TypeArg::Super(t) => format!("? super {}", render_type(t)),
            })
            .collect();
        s.push('<');
        s.push_str(&args.join(", "));
        s.push('>');
    }
    s.push_str(&"[]".repeat(t.dims));
    s
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Int(s)
        | Literal::Long(s)
        | Literal::Float(s)
        | Literal::Double(s)
        | Literal::Char(s)
        | Literal::Str(s) => s.clone(),
        Literal::Bool(b) => b.to_string(),
        Literal::Null => "null".to_string(),
    }
}

// Binding strength used to decide where synthesized trees need parentheses.
// Parsed trees carry explicit `Paren` nodes and never trigger these.
fn strength(e: &Expr) -> u8 {
    match e {
        Expr::Assign { .. } => 0,
        Expr::Conditional { .. } => 1,
        Expr::Binary { op, .. } => 1 + binary_precedence(*op),
        Expr::InstanceOf { .. } => 8,
        Expr::Unary { op, .. } if !op.is_postfix() => 20,
        Expr::Cast { .. } => 20,
        _ => 30,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = render_expr(e);
    if strength(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Literal(l) => literal(l),
        Expr::Name(n) => n.clone(),
        Expr::This => "this".to_string(),
        Expr::FieldAccess { target, name } => format!("{}.{name}", wrap(target, 30)),
        Expr::MethodCall { target, name, args } => match target {
            Some(t) => format!("{}.{name}({})", wrap(t, 30), join_exprs(args)),
            None => format!("{name}({})", join_exprs(args)),
        },
        Expr::New { ty, args } => format!("new {}({})", render_type(ty), join_exprs(args)),
        Expr::NewArray {
            ty,
            sizes,
            extra_dims,
            init,
        } => {
            let mut s = format!("new {}", render_type(ty));
            for size in sizes {
                s.push_str(&format!("[{}]", render_expr(size)));
            }
            s.push_str(&"[]".repeat(*extra_dims));
            if let Some(elems) = init {
                s.push(' ');
                s.push_str(&array_init(elems));
            }
            s
        }
        Expr::ArrayInit(elems) => array_init(elems),
        Expr::Index { target, index } => format!("{}[{}]", wrap(target, 30), render_expr(index)),
        Expr::Unary { op, expr } => {
            if op.is_postfix() {
                format!("{}{}", wrap(expr, 30), op.symbol())
            } else {
                let inner = wrap(expr, 20);
                let sym = op.symbol();
                // keep `- -x` and `+ +x` from fusing into `--x` / `++x`
                let last = sym.chars().last();
                if inner.starts_with(|c| Some(c) == last && (c == '-' || c == '+')) {
                    format!("{sym} {inner}")
                } else {
                    format!("{sym}{inner}")
                }
            }
        }
        Expr::Binary { op, lhs, rhs } => {
            let p = 1 + binary_precedence(*op);
            format!("{} {} {}", wrap(lhs, p), op.symbol(), wrap(rhs, p + 1))
        }
        Expr::Assign { op, target, value } => {
            let sym = match op {
                None => "=".to_string(),
                Some(b) => format!("{}=", b.symbol()),
            };
            format!("{} {sym} {}", render_expr(target), wrap(value, 0))
        }
        Expr::Conditional {
            cond,
            then,
            otherwise,
        } => format!(
            "{} ? {} : {}",
            wrap(cond, 2),
            render_expr(then),
            wrap(otherwise, 1)
        ),
        Expr::Cast { ty, expr } => format!("({}) {}", render_type(ty), wrap(expr, 20)),
        Expr::InstanceOf { expr, ty } => {
            format!("{} instanceof {}", wrap(expr, 8), render_type(ty))
        }
        Expr::ClassLit(t) => format!("{}.class", render_type(t)),
        Expr::Paren(inner) => format!("({})", render_expr(inner)),
    }
}

fn array_init(elems: &[Expr]) -> String {
    if elems.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", join_exprs(elems))
    }
}

/// Renders statements at the given indent level, one per line.
pub fn render_statements(stmts: &[Stmt], indent: usize) -> String {
    let mut r = Renderer::with_indent(indent);
    for s in stmts {
        r.stmt(s);
    }
    r.finish().join("\n")
}

pub fn render_method(m: &MethodDecl, indent: usize) -> String {
    let mut r = Renderer::with_indent(indent);
    r.method(m);
    r.finish().join("\n")
}
