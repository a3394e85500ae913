//! Seeded snippet generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Double,
    Bool,
    Str,
    Builder,
    List,
    Calendar,
    Date,
    Big,
    Random,
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    vars: Vec<(String, Kind)>,
    lines: Vec<String>,
    next_var: usize,
    next_free: usize,
}

impl<'r> Gen<'r> {
    fn new(rng: &'r mut ChaCha8Rng) -> Self {
        Gen {
            rng,
            vars: Vec::new(),
            lines: Vec::new(),
            next_var: 0,
            next_free: 0,
        }
    }

    fn pick(&mut self, kind: Kind) -> Option<String> {
        let names: Vec<&String> = self
            .vars
            .iter()
            .filter(|(_, k)| *k == kind)
            .map(|(n, _)| n)
            .collect();
        names.choose(self.rng).map(|n| n.to_string())
    }

    fn fresh(&mut self) -> String {
        self.next_var += 1;
        format!("v{}", self.next_var)
    }

    /// An undeclared variable, which P1 has to turn into a parameter.
    fn free(&mut self) -> String {
        self.next_free += 1;
        format!("in{}", self.next_free)
    }

    fn int_expr(&mut self) -> String {
        let lit = self.rng.gen_range(0..100).to_string();
        match self.rng.gen_range(0..8) {
            0 => lit,
            1 => match (self.pick(Kind::Int), self.pick(Kind::Int)) {
                (Some(a), Some(b)) => format!("{a} + {b}"),
                _ => lit,
            },
            2 => self
                .pick(Kind::Str)
                .map_or(lit.clone(), |s| format!("{s}.length()")),
            3 => self
                .pick(Kind::Int)
                .map_or(lit.clone(), |a| format!("Math.max({a}, {lit})")),
            4 => self
                .pick(Kind::Random)
                .map_or(lit.clone(), |r| format!("{r}.nextInt({})", lit.len() + 5)),
            5 => self
                .pick(Kind::List)
                .map_or(lit.clone(), |l| format!("{l}.size()")),
            6 => {
                let f = self.free();
                format!("{f} * 2")
            }
            _ => self
                .pick(Kind::Str)
                .map_or(lit.clone(), |s| format!("{s}.indexOf(\"a\")")),
        }
    }

    fn str_expr(&mut self) -> String {
        let lit = format!("\"w{}\"", self.rng.gen_range(0..50));
        match self.rng.gen_range(0..7) {
            0 => lit,
            1 => self
                .pick(Kind::Str)
                .map_or(lit.clone(), |s| format!("{s}.trim()")),
            2 => match (self.pick(Kind::Str), self.pick(Kind::Int)) {
                (Some(s), Some(i)) => format!("{s} + {i}"),
                _ => lit,
            },
            3 => self
                .pick(Kind::Int)
                .map_or(lit.clone(), |i| format!("Integer.toString({i})")),
            4 => self
                .pick(Kind::Builder)
                .map_or(lit.clone(), |b| format!("{b}.toString()")),
            5 => {
                let f = self.free();
                format!("{f}.toUpperCase()")
            }
            _ => self
                .pick(Kind::Str)
                .map_or(lit.clone(), |s| format!("{s}.substring(1)")),
        }
    }

    fn declare(&mut self) {
        let v = self.fresh();
        let (kind, line) = match self.rng.gen_range(0..12) {
            0..=2 => (Kind::Int, format!("int {v} = {};", self.int_expr())),
            3..=4 => (Kind::Str, format!("String {v} = {};", self.str_expr())),
            5 => (Kind::Double, {
                let e = self
                    .pick(Kind::Int)
                    .map_or("2.5".to_string(), |i| format!("Math.sqrt({i})"));
                format!("double {v} = {e};")
            }),
            6 => (Kind::Bool, {
                let e = self
                    .pick(Kind::Str)
                    .map_or("true".to_string(), |s| format!("{s}.isEmpty()"));
                format!("boolean {v} = {e};")
            }),
            7 => (
                Kind::Builder,
                format!("StringBuilder {v} = new StringBuilder();"),
            ),
            8 => (Kind::List, format!("List<String> {v} = new ArrayList<>();")),
            9 => match self.pick(Kind::Calendar) {
                Some(c) => (Kind::Date, format!("Date {v} = {c}.getTime();")),
                None => (
                    Kind::Calendar,
                    format!("Calendar {v} = Calendar.getInstance();"),
                ),
            },
            10 => match self.pick(Kind::Big) {
                Some(b) => (Kind::Big, format!("BigInteger {v} = {b}.add({b});")),
                None => (
                    Kind::Big,
                    format!("BigInteger {v} = new BigInteger(\"12\");"),
                ),
            },
            _ => (Kind::Random, format!("Random {v} = new Random();")),
        };
        self.lines.push(line);
        self.vars.push((v, kind));
    }

    fn effect(&mut self) {
        let line = match self.rng.gen_range(0..4) {
            0 => match (self.pick(Kind::Builder), self.pick(Kind::Str)) {
                (Some(b), Some(s)) => Some(format!("{b}.append({s});")),
                _ => None,
            },
            1 => match (self.pick(Kind::List), self.pick(Kind::Str)) {
                (Some(l), Some(s)) => Some(format!("{l}.add({s});")),
                _ => None,
            },
            2 => match (self.pick(Kind::Calendar), self.pick(Kind::Int)) {
                (Some(c), Some(i)) => Some(format!("{c}.set(Calendar.YEAR, {i});")),
                _ => None,
            },
            _ => self.pick(Kind::Int).map(|i| format!("{i}++;")),
        };
        match line {
            Some(l) => self.lines.push(l),
            None => self.declare(),
        }
    }

    fn finish(mut self) -> String {
        if self.rng.gen_bool(0.3) {
            if let Some((v, _)) = self.vars.choose(self.rng).cloned() {
                let line = if self.rng.gen_bool(0.5) {
                    format!("System.out.println(\"value: \" + {v});")
                } else {
                    format!("System.out.println({v});")
                };
                self.lines.push(line);
            }
        }
        self.lines.join("\n")
    }
}

/// A straight-line snippet over JDK types: declarations, calls and
/// undeclared inputs, with no control flow.
pub fn straight_line_snippet(rng: &mut ChaCha8Rng) -> String {
    let mut g = Gen::new(rng);
    let n = g.rng.gen_range(2..9);
    for _ in 0..n {
        if g.vars.is_empty() || g.rng.gen_bool(0.65) {
            g.declare();
        } else {
            g.effect();
        }
    }
    g.finish()
}

/// A snippet whose hard-coded variable `acc` is changed inside a loop.
pub fn loop_mutation_snippet(rng: &mut ChaCha8Rng) -> String {
    let bound = rng.gen_range(2..20);
    let start = rng.gen_range(0..10);
    let (decl, update) = match rng.gen_range(0..6) {
        0 => (format!("int acc = {start};"), "acc += i;".to_string()),
        1 => (format!("int acc = {start};"), "acc++;".to_string()),
        2 => (format!("long acc = {start};"), "acc = acc * 2;".to_string()),
        3 => (
            "String acc = \"\";".to_string(),
            "acc = acc + i;".to_string(),
        ),
        4 => (
            format!("double acc = {start}.5;"),
            "acc -= 0.5;".to_string(),
        ),
        _ => (
            "int[] acc = {1, 2, 3};".to_string(),
            "acc[i % 3] = i;".to_string(),
        ),
    };
    let mut lines = vec![decl];
    if rng.gen_bool(0.5) {
        lines.push(format!("int limit = {bound};"));
    }
    let limit = if lines.len() == 2 {
        "limit".to_string()
    } else {
        bound.to_string()
    };
    let lp = match rng.gen_range(0..3) {
        0 => format!("for (int i = 0; i < {limit}; i++) {{\n    {update}\n}}"),
        1 => format!("int i = 0;\nwhile (i < {limit}) {{\n    {update}\n    i++;\n}}"),
        _ => format!("int i = 0;\ndo {{\n    if (i > 0) {{\n        {update}\n    }}\n    i++;\n}} while (i < {limit});"),
    };
    lines.push(lp);
    match rng.gen_range(0..3) {
        0 => lines.push("System.out.println(acc);".into()),
        1 => lines.push("Object result = acc;".into()),
        _ => {}
    }
    lines.join("\n")
}

/// Hand-written snippets for the idempotence corpus, covering loops, try
/// blocks and imports beyond what the straight-line generator produces.
pub const FIXED_CORPUS: &[&str] = &[
    "int week = 3;\nint year = 2010;\nCalendar calendar = Calendar.getInstance();\ncalendar.clear();\ncalendar.set(Calendar.WEEK_OF_YEAR, week);\ncalendar.set(Calendar.YEAR, year);\nDate date = calendar.getTime();",
    "String str = \"helloslkhellodjladfjhello\";\nString findStr = \"hello\";\nint lastIndex = 0;\nint count = 0;\nwhile (lastIndex != -1) {\n    lastIndex = str.indexOf(findStr, lastIndex);\n    if (lastIndex != -1) {\n        count++;\n        lastIndex += findStr.length();\n    }\n}\nSystem.out.println(count);",
    "int total = 0;\nfor (int i = 0; i < values.length; i++) {\n    total += values[i];\n}\nSystem.out.println(total);",
    "StringBuilder sb = new StringBuilder();\nfor (String part : parts) {\n    sb.append(part);\n}\nString joined = sb.toString();",
    "List<Integer> numbers = new ArrayList<>();\nnumbers.add(1);\nnumbers.add(2);\nnumbers.add(3);\nint n = numbers.size();",
    "Map<String, Integer> ages = new HashMap<>();\nages.put(\"a\", 1);\nages.put(\"b\", 2);\nboolean known = ages.containsKey(name);",
    "BigInteger a = BigInteger.valueOf(seed);\nBigInteger b = a.multiply(a);\nSystem.out.println(b);",
    "try {\n    int value = Integer.parseInt(text);\n    System.out.println(value);\n} catch (NumberFormatException e) {\n    e.printStackTrace();\n}",
    "Random random = new Random();\nint roll = random.nextInt(6) + 1;",
    "StringBuilder sb = new StringBuilder();\nsb.append(input);\nString reversed = sb.reverse().toString();",
];
