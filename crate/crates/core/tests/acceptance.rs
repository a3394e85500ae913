//! Acceptance criteria 1 to 8. Runs without the libtest harness so that
//! every criterion prints one PASS or FAIL line; any failure makes the
//! process exit non-zero.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use apization::apizer::{apize, ApiDraft, ApizationResult, Outcome};
use apization::ast::visit::stmts_mention;
use apization::ast::{has_value_return, parse_snippet, render_statements, render_type, Stmt};
use apization::eval::*;
use apization::resolver::{analyze, resolve_imports, Deadline, Names, ResolutionState};
use apization::{SoPage, TypeCatalog};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: Duration = Duration::from_secs(10);

const WEEK_SNIPPET: &str = "int week = 3;
int year = 2010;
Calendar calendar = Calendar.getInstance();
calendar.clear();
calendar.set(Calendar.WEEK_OF_YEAR, week);
calendar.set(Calendar.YEAR, year);
Date date = calendar.getTime();";

const WEEK_HUMAN: &str =
    "public static Date getFirstDayOfWeek(int week, int year) throws Exception {
    Calendar calendar = Calendar.getInstance();
    calendar.clear();
    calendar.set(Calendar.WEEK_OF_YEAR, week);
    calendar.set(Calendar.YEAR, year);
    return calendar.getTime();
}";

const DIGEST_SNIPPET: &str = "String hash;
try {
    MessageDigest md = MessageDigest.getInstance(\"MD5\");
    byte[] digest = md.digest(tag_xml.getBytes());
    StringBuilder sb = new StringBuilder();
    for (byte b : digest) {
        sb.append(Integer.toHexString(0xff & b));
    }
    hash = sb.toString();
} catch (NoSuchAlgorithmException e) {
    e.printStackTrace();
}";

const COUNT_SNIPPET: &str = "String str = \"helloslkhellodjladfjhello\";
String findStr = \"hello\";
int lastIndex = 0;
int count = 0;
while (lastIndex != -1) {
    lastIndex = str.indexOf(findStr, lastIndex);
    if (lastIndex != -1) {
        count++;
        lastIndex += findStr.length();
    }
}
System.out.println(count);";

const COUNT_METHOD: &str = "public static int countMatches(String str, String sub) {
    int lastIndex = 0;
    int count = 0;
    while (lastIndex != -1) {
        lastIndex = str.indexOf(sub, lastIndex);
        if (lastIndex != -1) {
            count++;
            lastIndex += sub.length();
        }
    }
    return count;
}";

fn page(title: &str, answer_id: u64) -> SoPage {
    SoPage::new(
        title,
        format!("https://stackoverflow.com/a/{answer_id}"),
        answer_id,
        answer_id,
    )
}

fn catalog() -> &'static TypeCatalog {
    TypeCatalog::bundled()
}

fn timed(snippet: &str, title: &str, id: u64) -> (ApizationResult, Duration) {
    let start = Instant::now();
    let r = apize(snippet, &page(title, id), catalog(), BUDGET);
    (r, start.elapsed())
}

fn params(d: &ApiDraft) -> Vec<(String, String)> {
    d.params
        .iter()
        .map(|p| (render_type(&p.ty), p.name.clone()))
        .collect()
}

fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
    items
        .iter()
        .map(|(t, n)| (t.to_string(), n.to_string()))
        .collect()
}

fn qualified(d: &ApiDraft, simple: &str) -> Option<String> {
    Names::new(catalog(), &d.resolution).resolve(simple)
}

/// The statement that became the return statement, looking into a
/// trailing `try` block.
fn last_line(d: &ApiDraft) -> String {
    let last = match d.body.last() {
        Some(Stmt::Try { body, .. }) => body.last(),
        other => other,
    };
    last.map(|s| render_statements(std::slice::from_ref(s), 0))
        .unwrap_or_default()
}

fn criterion_1() {
    let (r, elapsed) = timed(
        WEEK_SNIPPET,
        "How to get the first day of a given week",
        2109186,
    );
    assert_eq!(r.outcome, Outcome::Apized);
    let d = &r.draft;
    assert_eq!(params(d), pairs(&[("int", "week"), ("int", "year")]));
    assert_eq!(
        qualified(d, &d.return_type.name).as_deref(),
        Some("java.util.Date")
    );
    assert_eq!(last_line(d), "return calendar.getTime();");
    let imports: Vec<&str> = d.resolution.imports.iter().map(String::as_str).collect();
    assert_eq!(imports, ["java.util.Calendar", "java.util.Date"]);
    let human = parse_method(WEEK_HUMAN).unwrap();
    assert_eq!(ast_diff_count(&human, &d.to_method()), 0);
    assert!(d.name.starts_with("get"), "{}", d.name);
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
}

fn criterion_2() {
    let (top, t1) = timed(DIGEST_SNIPPET, "How can I generate an MD5 hash?", 415953);
    assert_eq!(top.outcome, Outcome::Apized);
    let d = &top.draft;
    assert_eq!(params(d), pairs(&[("String", "tag_xml")]));
    assert_eq!(qualified(d, "String").as_deref(), Some("java.lang.String"));
    assert_eq!(render_type(&d.return_type), "String");
    assert_eq!(last_line(d), "return sb.toString();");

    let (bottom, t2) = timed(
        COUNT_SNIPPET,
        "Occurrences of substring in a string",
        767759,
    );
    assert_eq!(bottom.outcome, Outcome::Apized);
    let d = &bottom.draft;
    assert_eq!(
        params(d),
        pairs(&[("String", "str"), ("String", "findStr")])
    );
    assert!(!d
        .params
        .iter()
        .any(|p| p.name == "lastIndex" || p.name == "count"));
    assert_eq!(render_type(&d.return_type), "int");
    assert_eq!(last_line(d), "return count;");
    assert!(
        t1 < Duration::from_secs(1) && t2 < Duration::from_secs(1),
        "{t1:?} {t2:?}"
    );
}

fn corpus() -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out: Vec<String> = support::FIXED_CORPUS
        .iter()
        .map(|s| s.to_string())
        .collect();
    while out.len() < 50 {
        out.push(support::straight_line_snippet(&mut rng));
    }
    out
}

fn criterion_3() {
    for (i, snippet) in corpus().iter().enumerate() {
        let (first, _) = timed(snippet, "How to convert String to int", i as u64);
        assert_eq!(first.outcome, Outcome::Apized, "case {i}:\n{snippet}");
        let source = first.source().expect("rendered unit");
        let (second, _) = timed(&source, "How to convert String to int", i as u64);
        assert_eq!(second.outcome, Outcome::AlreadyApi, "case {i}:\n{source}");
        let a = first.draft.to_method();
        let b = second.draft.to_method();
        assert_eq!(ast_diff_count(&a, &b), 0, "case {i}:\n{source}");
    }
}

fn straight_line_results() -> Vec<(String, ApizationResult)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..500)
        .map(|i| {
            let s = support::straight_line_snippet(&mut rng);
            let (r, _) = timed(&s, "Compute a value", i);
            (s, r)
        })
        .collect()
}

fn criterion_4(results: &[(String, ApizationResult)]) {
    let mut apized = 0;
    for (s, r) in results {
        assert!(
            matches!(r.outcome, Outcome::Apized),
            "unexpected outcome {}:\n{s}",
            r.outcome
        );
        apized += 1;
        let d = &r.draft;
        assert!(analyze(d, &d.resolution, catalog()).is_empty(), "{s}");
        for p in &d.params {
            assert!(stmts_mention(&d.body, &p.name), "unused {}:\n{s}", p.name);
        }
        assert_eq!(has_value_return(&d.body), !d.return_type.is_void(), "{s}");
    }
    assert_eq!(apized, 500);
}

fn criterion_5() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..300 {
        let s = support::loop_mutation_snippet(&mut rng);
        let (r, _) = timed(&s, "Sum values in a loop", i);
        assert_eq!(r.outcome, Outcome::Apized, "{s}");
        assert!(!r.draft.params.iter().any(|p| p.name == "acc"), "{s}");
    }
}

fn method(src: &str) -> apization::ast::MethodDecl {
    parse_method(src).unwrap()
}

fn criterion_6() {
    let both = ParamSet::from_method(&method("void f(int week, int year) { g(week, year); }"));
    assert_eq!(jaccard_distance(&both, &both), 0.0);
    assert_eq!(
        jaccard_distance(&ParamSet::default(), &ParamSet::default()),
        0.0
    );
    let one = ParamSet::from_method(&method("void f(int a) { g(a); }"));
    assert_eq!(jaccard_distance(&one, &ParamSet::default()), 1.0);

    let p = |src: &str| ParamSet::from_method(&method(src)).entries[0].clone();
    assert!(params_identical(
        &p("void f(int week) { g(week); }"),
        &p("void h(int week) { g(week); }")
    ));
    assert!(!params_identical(
        &p("void f(double x) { g(x); }"),
        &p("void f(int x) { g(x); }")
    ));
    assert!(!params_identical(
        &p("void f(int a) { g(a); }"),
        &p("void f(int b) { g(b); }")
    ));

    assert_eq!(
        normalize_return(&method("int f(int b, int c) { int a = b + c; return a; }")),
        method("int f(int b, int c) { return b + c; }")
    );
    let fixed = method("int f(int x) { return x; }");
    assert_eq!(normalize_return(&fixed), fixed);
    let used = method("int f() { int a = f(); g(a); return a; }");
    assert_eq!(normalize_return(&used), used);

    let human = method(WEEK_HUMAN);
    let renamed = method(&WEEK_HUMAN.replace("getFirstDayOfWeek", "weekStart"));
    assert_eq!(ast_diff_count(&human, &renamed), 0);
    let extra =
        method(&WEEK_HUMAN.replace("calendar.clear();", "calendar.clear();\ncalendar.clear();"));
    assert!(ast_diff_count(&human, &extra) >= 1);

    // Ten pairs laid out like the return-statement table.
    let fixture: [(&str, &str, ReturnCategory, bool); 10] = [
        ("void f() { }", "void g() { }", ReturnCategory::VoidVoid, true),
        ("void f(int a) { g(a); }", "void g(int b) { h(b); }", ReturnCategory::VoidVoid, true),
        ("void f() { g(); }", "void g() { h(); }", ReturnCategory::VoidVoid, true),
        ("void f() { }", "int g() { return 1; }", ReturnCategory::VoidNonvoid, false),
        ("void f(int a) { g(a); }", "int g(int a) { return a; }", ReturnCategory::VoidNonvoid, false),
        ("int f() { return 1; }", "void g() { }", ReturnCategory::NonvoidVoid, false),
        (WEEK_HUMAN, "public static Date x(int week, int year) { Calendar calendar = Calendar.getInstance(); Date d = calendar.getTime(); return d; }", ReturnCategory::NonvoidNonvoid, true),
        ("int f(int a, int b) { return a + b; }", "int g(int x, int y) { return x + y; }", ReturnCategory::NonvoidNonvoid, true),
        ("int f(int a) { return a; }", "long g(int a) { return a; }", ReturnCategory::NonvoidNonvoid, false),
        ("String f(String s) { return s.trim(); }", "String g(String s) { return s; }", ReturnCategory::NonvoidNonvoid, false),
    ];
    let mut table = std::collections::BTreeMap::new();
    for (h, a, category, equivalent) in fixture {
        let got = return_equivalence(&method(h), &method(a));
        assert_eq!(got, (category, equivalent), "{h} / {a}");
        let row: &mut (usize, usize) = table.entry(category.label()).or_default();
        row.0 += 1;
        row.1 += usize::from(equivalent);
    }
    let rows: Vec<(&str, (usize, usize))> = table.into_iter().collect();
    assert_eq!(
        rows,
        [
            ("nonvoid-nonvoid", (4, 2)),
            ("nonvoid-void", (1, 0)),
            ("void-nonvoid", (2, 0)),
            ("void-void", (3, 3)),
        ]
    );
}

fn criterion_7() {
    assert_eq!(
        alpha_rename("int a = 5; int b = 10;").unwrap(),
        "int int0 = 5; int int1 = 10;"
    );
    assert_eq!(alpha_rename("String s;").unwrap(), "String string0;");
    let (ratio, clone) = type3_containment(COUNT_SNIPPET, COUNT_METHOD).unwrap();
    assert!((ratio - 0.7).abs() < 1e-9 && clone, "{ratio}");
    let weaker = COUNT_METHOD.replace("count++;", "count += 1;");
    let (ratio, clone) = type3_containment(COUNT_SNIPPET, &weaker).unwrap();
    assert!((ratio - 0.6).abs() < 1e-9 && !clone, "{ratio}");
}

fn criterion_8(results: &[(String, ApizationResult)]) {
    let draft = ApiDraft::initial(
        parse_snippet(
            "try { MessageDigest md = MessageDigest.getInstance(\"MD5\"); } catch (NoSuchAlgorithmException e) { }",
        )
        .unwrap()
        .statements,
    );
    let state = ResolutionState::default();
    let diags = analyze(&draft, &state, catalog());
    let resolved = resolve_imports(&draft, &diags, &state, catalog(), Deadline::none()).unwrap();
    let imports: Vec<&str> = resolved.imports.iter().map(String::as_str).collect();
    assert_eq!(
        imports,
        [
            "java.security.MessageDigest",
            "java.security.NoSuchAlgorithmException"
        ]
    );

    for (s, r) in results {
        assert!(
            r.iterations <= r.initial_diagnostics,
            "{} > {}:\n{s}",
            r.iterations,
            r.initial_diagnostics
        );
    }

    let pathological: String = (0..1500)
        .map(|i| {
            format!(
                "String s{i} = v{i}.toString() + v{}.hashCode();\n",
                (i + 1) % 1500
            )
        })
        .collect();
    let start = Instant::now();
    let r = apize(
        &pathological,
        &page("Slow", 1),
        catalog(),
        Duration::from_secs(1),
    );
    assert_eq!(r.outcome, Outcome::Failed("budget".into()));
    assert!(
        start.elapsed() < Duration::from_secs(3),
        "{:?}",
        start.elapsed()
    );
}

fn run(name: &str, f: impl FnOnce()) -> bool {
    let start = Instant::now();
    let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
    println!(
        "{} criterion {name} ({:.2?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    ok
}

fn main() {
    let results = straight_line_results();
    let outcomes = [
        run("1: first-day-of-week golden API", criterion_1),
        run("2: MD5 and substring-count golden APIs", criterion_2),
        run("3: idempotence on 50 snippets", criterion_3),
        run("4: well-formedness on 500 random snippets", || {
            criterion_4(&results)
        }),
        run("5: loop-changed variables stay local", criterion_5),
        run("6: metric suite", criterion_6),
        run("7: clone-study suite", criterion_7),
        run("8: resolver suite", || criterion_8(&results)),
    ];
    let failed = outcomes.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
