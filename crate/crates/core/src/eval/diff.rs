//! Structural difference between two methods as a tree edit distance
//! (Zhang and Shasha) over labelled AST trees. Method names are left out of
//! the tree and type names are reduced to their simple form.

use crate::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub children: Vec<Node>,
}

impl Node {
    fn leaf(label: impl Into<String>) -> Self {
        Node {
            label: label.into(),
            children: Vec::new(),
        }
    }

    fn with(label: impl Into<String>, children: Vec<Node>) -> Self {
        Node {
            label: label.into(),
            children,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }
}

/// Type text with every qualified name cut down to its last segment.
pub fn simple_type(t: &TypeRef) -> String {
    let text = render_type(t);
    let mut out = String::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '_' || c == '$' || c == '.' {
            word.push(c);
        } else {
            out.push_str(word.rsplit('.').next().unwrap_or(""));
            word.clear();
            out.push(c);
        }
    }
    out.push_str(word.rsplit('.').next().unwrap_or(""));
    out
}

fn expr_tree(e: &Expr) -> Node {
    let label = match e {
        Expr::Literal(_) => format!("lit:{}", render_expr(e)),
        Expr::Name(n) => format!("name:{n}"),
        Expr::This => "this".into(),
        Expr::FieldAccess { name, .. } => format!("field:{name}"),
        Expr::MethodCall { target, name, .. } => {
            format!(
                "call:{name}:{}",
                if target.is_some() {
                    "qualified"
                } else {
                    "bare"
                }
            )
        }
        Expr::New { ty, .. } => format!("new:{}", simple_type(ty)),
        Expr::NewArray { ty, extra_dims, .. } => {
            format!("newarray:{}:{extra_dims}", simple_type(ty))
        }
        Expr::ArrayInit(_) => "arrayinit".into(),
        Expr::Index { .. } => "index".into(),
        Expr::Unary { op, .. } => format!("unary:{}:{}", op.symbol(), op.is_postfix()),
        Expr::Binary { op, .. } => format!("binary:{}", op.symbol()),
        Expr::Assign { op, .. } => format!("assign:{}", op.map(|o| o.symbol()).unwrap_or("")),
        Expr::Conditional { .. } => "conditional".into(),
        Expr::Cast { ty, .. } => format!("cast:{}", simple_type(ty)),
        Expr::InstanceOf { ty, .. } => format!("instanceof:{}", simple_type(ty)),
        Expr::ClassLit(ty) => format!("classlit:{}", simple_type(ty)),
        Expr::Paren(_) => "paren".into(),
    };
    let children = crate::ast::visit::expr_children(e)
        .into_iter()
        .map(expr_tree)
        .collect();
    Node::with(label, children)
}

fn local_tree(lv: &LocalVar) -> Node {
    let decls = lv
        .declarators
        .iter()
        .map(|d| {
            Node::with(
                format!("decl:{}:{}", d.name, d.dims),
                d.init.iter().map(expr_tree).collect(),
            )
        })
        .collect();
    Node::with(format!("local:{}", simple_type(&lv.ty)), decls)
}

fn block_tree(label: &str, stmts: &[Stmt]) -> Node {
    Node::with(label, stmts.iter().map(stmt_tree).collect())
}

fn opt_expr(label: &str, e: Option<&Expr>) -> Node {
    Node::with(label, e.into_iter().map(expr_tree).collect())
}

fn stmt_tree(s: &Stmt) -> Node {
    match s {
        Stmt::LocalVar(lv) => local_tree(lv),
        Stmt::Expr(e) => Node::with("expr", vec![expr_tree(e)]),
        Stmt::Block(b) => block_tree("block", b),
        Stmt::If {
            cond,
            then,
            otherwise,
        } => {
            let mut c = vec![expr_tree(cond), stmt_tree(then)];
            c.extend(otherwise.iter().map(|o| stmt_tree(o)));
            Node::with("if", c)
        }
        Stmt::While { cond, body } => Node::with("while", vec![expr_tree(cond), stmt_tree(body)]),
        Stmt::DoWhile { body, cond } => Node::with("do", vec![stmt_tree(body), expr_tree(cond)]),
        Stmt::For {
            init,
            cond,
            update,
            body,
        } => {
            let init = match init {
                Some(ForInit::Decl(lv)) => Node::with("init", vec![local_tree(lv)]),
                Some(ForInit::Exprs(es)) => Node::with("init", es.iter().map(expr_tree).collect()),
                None => Node::leaf("init"),
            };
            Node::with(
                "for",
                vec![
                    init,
                    opt_expr("cond", cond.as_ref()),
                    Node::with("update", update.iter().map(expr_tree).collect()),
                    stmt_tree(body),
                ],
            )
        }
        Stmt::ForEach {
            var,
            iterable,
            body,
        } => Node::with(
            "foreach",
            vec![local_tree(var), expr_tree(iterable), stmt_tree(body)],
        ),
        Stmt::Try {
            resources,
            body,
            catches,
            finally,
        } => {
            let mut c = vec![
                Node::with("resources", resources.iter().map(local_tree).collect()),
                block_tree("body", body),
            ];
            for cc in catches {
                let types: Vec<String> = cc.types.iter().map(simple_type).collect();
                c.push(block_tree(
                    &format!("catch:{}:{}", types.join("|"), cc.name),
                    &cc.body,
                ));
            }
            if let Some(f) = finally {
                c.push(block_tree("finally", f));
            }
            Node::with("try", c)
        }
        Stmt::Switch { scrutinee, cases } => {
            let mut c = vec![expr_tree(scrutinee)];
            for case in cases {
                let mut kids: Vec<Node> = case.labels.iter().map(expr_tree).collect();
                kids.extend(case.body.iter().map(stmt_tree));
                c.push(Node::with(
                    if case.is_default { "default" } else { "case" },
                    kids,
                ));
            }
            Node::with("switch", c)
        }
        Stmt::Return(e) => opt_expr("return", e.as_ref()),
        Stmt::Throw(e) => Node::with("throw", vec![expr_tree(e)]),
        Stmt::Break(l) => Node::leaf(format!("break:{}", l.as_deref().unwrap_or(""))),
        Stmt::Continue(l) => Node::leaf(format!("continue:{}", l.as_deref().unwrap_or(""))),
        Stmt::Empty => Node::leaf("empty"),
        Stmt::Method(m) => method_tree(m),
        Stmt::Class(c) => Node::leaf(format!("class:{}", c.name)),
    }
}

/// Labelled tree of a method, without its name.
pub fn method_tree(m: &MethodDecl) -> Node {
    let params = m
        .params
        .iter()
        .map(|p| Node::leaf(format!("param:{}:{}", simple_type(&p.ty), p.name)))
        .collect();
    let throws = m
        .throws
        .iter()
        .map(|t| Node::leaf(simple_type(t)))
        .collect();
    let mut children = vec![
        Node::leaf(format!("modifiers:{}", m.modifiers.join(" "))),
        Node::leaf(format!("returns:{}", simple_type(&m.return_type))),
        Node::with("params", params),
        Node::with("throws", throws),
    ];
    if let Some(body) = &m.body {
        children.push(block_tree("body", body));
    }
    Node::with("method", children)
}

struct Postorder<'a> {
    labels: Vec<&'a str>,
    /// Postorder index of the leftmost leaf of each node.
    leftmost: Vec<usize>,
}

impl<'a> Postorder<'a> {
    fn new(root: &'a Node) -> Self {
        let mut p = Postorder {
            labels: Vec::new(),
            leftmost: Vec::new(),
        };
        p.visit(root);
        p
    }

    fn visit(&mut self, n: &'a Node) -> usize {
        let mut first = None;
        for c in &n.children {
            let l = self.visit(c);
            first.get_or_insert(l);
        }
        let index = self.labels.len();
        self.labels.push(&n.label);
        self.leftmost.push(first.unwrap_or(index));
        self.leftmost[index]
    }

    fn keyroots(&self) -> Vec<usize> {
        let n = self.labels.len();
        let mut roots: Vec<usize> = (0..n)
            .filter(|&i| !(i + 1..n).any(|j| self.leftmost[j] == self.leftmost[i]))
            .collect();
        roots.sort_unstable();
        roots
    }
}

/// Zhang-Shasha edit distance with unit costs.
pub fn tree_edit_distance(a: &Node, b: &Node) -> usize {
    let pa = Postorder::new(a);
    let pb = Postorder::new(b);
    let (n, m) = (pa.labels.len(), pb.labels.len());
    let mut tree = vec![vec![0usize; m]; n];
    for &i in &pa.keyroots() {
        for &j in &pb.keyroots() {
            let (li, lj) = (pa.leftmost[i], pb.leftmost[j]);
            let rows = i - li + 2;
            let cols = j - lj + 2;
            let mut forest = vec![vec![0usize; cols]; rows];
            for x in 1..rows {
                forest[x][0] = forest[x - 1][0] + 1;
            }
            for y in 1..cols {
                forest[0][y] = forest[0][y - 1] + 1;
            }
            for x in 1..rows {
                for y in 1..cols {
                    let (ni, nj) = (li + x - 1, lj + y - 1);
                    let delete = forest[x - 1][y] + 1;
                    let insert = forest[x][y - 1] + 1;
                    if pa.leftmost[ni] == li && pb.leftmost[nj] == lj {
                        let relabel =
                            forest[x - 1][y - 1] + usize::from(pa.labels[ni] != pb.labels[nj]);
                        forest[x][y] = delete.min(insert).min(relabel);
                        tree[ni][nj] = forest[x][y];
                    } else {
                        let px = pa.leftmost[ni] - li;
                        let py = pb.leftmost[nj] - lj;
                        forest[x][y] = delete.min(insert).min(forest[px][py] + tree[ni][nj]);
                    }
                }
            }
        }
    }
    tree[n - 1][m - 1]
}

/// Number of differing AST nodes between two methods, ignoring names,
/// layout and comments.
pub fn ast_diff_count(a: &MethodDecl, b: &MethodDecl) -> usize {
    tree_edit_distance(&method_tree(a), &method_tree(b))
}
