//! Clone-study normalizations: alpha-renaming of variables and TYPE-3
//! line containment between a snippet and a method.

use std::collections::{BTreeMap, HashMap};

use crate::ast::visit::expr_children_mut;
use crate::ast::*;

/// Minimum fraction of snippet lines a method must contain.
pub const CLONE_THRESHOLD: f64 = 0.70;

#[derive(Default)]
struct Renamer {
    scopes: Vec<HashMap<String, String>>,
    counters: BTreeMap<String, usize>,
}

impl Renamer {
    fn declare(&mut self, ty: &TypeRef, name: &mut String) {
        let base = ty.simple_name().to_ascii_lowercase();
        let base = if base.is_empty() {
            "var".to_string()
        } else {
            base
        };
        let counter = self.counters.entry(base.clone()).or_default();
        let fresh = format!("{base}{counter}");
        *counter += 1;
        self.scopes
            .last_mut()
            .expect("scope")
            .insert(name.clone(), fresh.clone());
        *name = fresh;
    }

    fn lookup(&self, name: &str) -> Option<&String> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn scoped(&mut self, f: impl FnOnce(&mut Self)) {
        self.scopes.push(HashMap::new());
        f(self);
        self.scopes.pop();
    }

    fn expr(&self, e: &mut Expr) {
        if let Expr::Name(n) = e {
            if let Some(to) = self.lookup(n) {
                *n = to.clone();
            }
        }
        for c in expr_children_mut(e) {
            self.expr(c);
        }
    }

    fn local(&mut self, lv: &mut LocalVar) {
        let ty = lv.ty.clone();
        for d in &mut lv.declarators {
            if let Some(init) = &mut d.init {
                self.expr(init);
            }
            self.declare(&ty, &mut d.name);
        }
    }

    fn stmts(&mut self, stmts: &mut [Stmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn method(&mut self, m: &mut MethodDecl) {
        self.scoped(|r| {
            for p in &mut m.params {
                let ty = p.ty.clone();
                r.declare(&ty, &mut p.name);
            }
            if let Some(body) = &mut m.body {
                r.stmts(body);
            }
        });
    }

    fn stmt(&mut self, s: &mut Stmt) {
        match s {
            Stmt::LocalVar(lv) => self.local(lv),
            Stmt::Expr(e) | Stmt::Throw(e) | Stmt::Return(Some(e)) => self.expr(e),
            Stmt::Block(b) => self.scoped(|r| r.stmts(b)),
            Stmt::If {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond);
                self.scoped(|r| r.stmt(then));
                if let Some(o) = otherwise {
                    self.scoped(|r| r.stmt(o));
                }
            }
            Stmt::While { cond, body } | Stmt::DoWhile { body, cond } => {
                self.expr(cond);
                self.scoped(|r| r.stmt(body));
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => self.scoped(|r| {
                match init {
                    Some(ForInit::Decl(lv)) => r.local(lv),
                    Some(ForInit::Exprs(es)) => es.iter_mut().for_each(|e| r.expr(e)),
                    None => {}
                }
                if let Some(c) = cond {
                    r.expr(c);
                }
                update.iter_mut().for_each(|e| r.expr(e));
                r.scoped(|r| r.stmt(body));
            }),
            Stmt::ForEach {
                var,
                iterable,
                body,
            } => {
                self.expr(iterable);
                self.scoped(|r| {
                    r.local(var);
                    r.stmt(body);
                });
            }
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                self.scoped(|r| {
                    resources.iter_mut().for_each(|lv| r.local(lv));
                    r.stmts(body);
                });
                for c in catches {
                    let ty = c
                        .types
                        .first()
                        .cloned()
                        .unwrap_or_else(|| TypeRef::simple("Exception"));
                    self.scoped(|r| {
                        r.declare(&ty, &mut c.name);
                        r.stmts(&mut c.body);
                    });
                }
                if let Some(f) = finally {
                    self.scoped(|r| r.stmts(f));
                }
            }
            Stmt::Switch { scrutinee, cases } => {
                self.expr(scrutinee);
                self.scoped(|r| {
                    for c in cases {
                        r.stmts(&mut c.body);
                    }
                });
            }
            Stmt::Method(m) => self.method(m),
            Stmt::Class(c) => {
                for member in &mut c.members {
                    if let Member::Method(m) | Member::Constructor(m) = member {
                        self.method(m);
                    }
                }
            }
            Stmt::Return(None) | Stmt::Break(_) | Stmt::Continue(_) | Stmt::Empty => {}
        }
    }
}

/// Alpha-renamed source, one trimmed line per element, blank lines and
/// comments removed.
pub fn alpha_rename_lines(text: &str) -> Result<Vec<String>, ParseError> {
    let mut ast = parse_snippet(text)?;
    let mut renamer = Renamer::default();
    renamer.scoped(|r| r.stmts(&mut ast.statements));
    Ok(render_statements(&ast.statements, 0)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Renames every variable to its lowercased type name plus a per-type
/// counter in declaration order, and joins the lines with single spaces.
pub fn alpha_rename(text: &str) -> Result<String, ParseError> {
    Ok(alpha_rename_lines(text)?.join(" "))
}

fn content_lines(text: &str) -> Result<Vec<String>, ParseError> {
    Ok(alpha_rename_lines(text)?
        .into_iter()
        .filter(|l| l != "}")
        .collect())
}

/// Fraction of the snippet's normalized lines found in the method, each
/// method line matching at most once.
pub fn type3_containment_with(
    cs: &str,
    method: &str,
    threshold: f64,
) -> Result<(f64, bool), ParseError> {
    let snippet = content_lines(cs)?;
    let mut pool: HashMap<String, usize> = HashMap::new();
    for l in content_lines(method)? {
        *pool.entry(l).or_default() += 1;
    }
    if snippet.is_empty() {
        return Ok((0.0, false));
    }
    let mut matched = 0usize;
    for l in &snippet {
        if let Some(n) = pool.get_mut(l) {
            if *n > 0 {
                *n -= 1;
                matched += 1;
            }
        }
    }
    let ratio = matched as f64 / snippet.len() as f64;
    Ok((ratio, ratio + 1e-9 >= threshold))
}

pub fn type3_containment(cs: &str, method: &str) -> Result<(f64, bool), ParseError> {
    type3_containment_with(cs, method, CLONE_THRESHOLD)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renames_by_type_and_order() {
        assert_eq!(
            alpha_rename("int a = 5; int b = 10;").unwrap(),
            "int int0 = 5; int int1 = 10;"
        );
        assert_eq!(alpha_rename("String s;").unwrap(), "String string0;");
        assert_eq!(
            alpha_rename("int a = 1; // note\n\nString t = \"\" + a;").unwrap(),
            "int int0 = 1; String string0 = \"\" + int0;"
        );
    }

    #[test]
    fn renaming_is_idempotent_and_scoped() {
        let src = "for (int i = 0; i < 3; i++) { }\nfor (int i = 0; i < 3; i++) { int k = i; }";
        let once = alpha_rename(src).unwrap();
        assert_eq!(alpha_rename(&once).unwrap(), once);
        assert!(once.contains("int int1 = 0"), "{once}");
    }

    #[test]
    fn method_parameters_are_renamed() {
        let out = alpha_rename("int twice(int x) { return x * 2; }").unwrap();
        assert!(out.contains("int int0"), "{out}");
        assert!(out.contains("return int0 * 2;"), "{out}");
    }

    #[test]
    fn containment_thresholds() {
        let cs: String = (0..10).map(|i| format!("int v{i} = {i};\n")).collect();
        let all = format!("void f() {{ {cs} }}");
        assert_eq!(type3_containment(&cs, &all).unwrap(), (1.0, true));
        let seven: String = (0..7).map(|i| format!("int v{i} = {i};\n")).collect();
        let (r, ok) = type3_containment(&cs, &format!("void f() {{ {seven} }}")).unwrap();
        assert!((r - 0.7).abs() < 1e-9 && ok);
        let six: String = (0..6).map(|i| format!("int v{i} = {i};\n")).collect();
        let (r, ok) = type3_containment(&cs, &format!("void f() {{ {six} }}")).unwrap();
        assert!((r - 0.6).abs() < 1e-9 && !ok);
    }

    #[test]
    fn duplicate_lines_need_separate_matches() {
        let (r, _) = type3_containment("x++;\nx++;", "void f() { x++; }").unwrap();
        assert!((r - 0.5).abs() < 1e-9);
    }
}
