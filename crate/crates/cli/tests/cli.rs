use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const WEEK_SNIPPET: &str = "int week = 3;
int year = 2010;
Calendar calendar = Calendar.getInstance();
calendar.clear();
calendar.set(Calendar.WEEK_OF_YEAR, week);
calendar.set(Calendar.YEAR, year);
Date date = calendar.getTime();
";

fn apizer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apizer"))
        .args(args)
        .output()
        .expect("run apizer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn apize_writes_the_unit() {
    let dir = tempfile::tempdir().unwrap();
    let snippet = dir.path().join("week.java");
    fs::write(&snippet, WEEK_SNIPPET).unwrap();
    let out = dir.path().join("out");
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&snippet),
        "--title",
        "How to get the first day of the week",
        "--url",
        "https://stackoverflow.com/a/2109186",
        "--answer-id",
        "2109186",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("apized"));
    let text = fs::read_to_string(out.join("Snippet2109186.java")).unwrap();
    assert!(
        text.contains("import java.util.Calendar;\nimport java.util.Date;"),
        "{text}"
    );
    assert!(text.contains("public class Snippet2109186 {"), "{text}");
    assert!(
        text.contains("     * @see https://stackoverflow.com/a/2109186"),
        "{text}"
    );
    assert!(
        text.contains("public static Date getFirstDay(int week, int year) throws Exception {"),
        "{text}"
    );
    assert!(
        text.contains("        return calendar.getTime();"),
        "{text}"
    );

    let again = apizer(&[
        "apize",
        "--snippet",
        path(&snippet),
        "--title",
        "How to get the first day of the week",
        "--url",
        "https://stackoverflow.com/a/2109186",
        "--answer-id",
        "2109186",
        "--out",
        path(&out),
    ]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(out.join("Snippet2109186.java")).unwrap(),
        text
    );
}

#[test]
fn apize_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ambiguous = dir.path().join("a.java");
    fs::write(&ambiguous, "class A {}\nclass B {}\n").unwrap();
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&ambiguous),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "skipped: ambiguous");

    let broken = dir.path().join("b.java");
    fs::write(&broken, "int x = mystery();").unwrap();
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&broken),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("failed: other: mystery"));

    assert_eq!(apizer(&["apize"]).status.code(), Some(1));
    assert_eq!(apizer(&["frobnicate"]).status.code(), Some(1));
    let missing = dir.path().join("nope.java");
    assert_eq!(
        apizer(&["apize", "--snippet", path(&missing)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn time_budget_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let slow = dir.path().join("slow.java");
    let text: String = (0..1500)
        .map(|i| {
            format!(
                "String s{i} = v{i}.toString() + v{}.hashCode();\n",
                (i + 1) % 1500
            )
        })
        .collect();
    fs::write(&slow, text).unwrap();
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&slow),
        "--time-budget",
        "1s",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).trim(), "failed: budget");
}

fn batch_input(dir: &Path) -> std::path::PathBuf {
    let records = [
        serde_json::json!({"answer_id": 1, "title": "How to add two numbers", "url": "u1", "snippet": "int a = 3;\nint b = 4;\nint sum = a + b;"}),
        serde_json::json!({"answer_id": 2, "title": "Trim a string", "url": "u2", "snippet": "String t = raw.trim();"}),
        serde_json::json!({"answer_id": 3, "title": "Reverse text", "url": "u3", "snippet": "StringBuilder sb = new StringBuilder();\nsb.append(text);\nString r = sb.reverse().toString();"}),
    ];
    let mut lines: Vec<String> = records.iter().map(Value::to_string).collect();
    lines.push("{not json".into());
    lines.push(serde_json::json!({"answer_id": 4, "title": "x", "url": "u", "snippet": "int v = helper();"}).to_string());
    let input = dir.join("in.jsonl");
    fs::write(&input, lines.join("\n")).unwrap();
    input
}

#[test]
fn batch_isolates_records_and_is_order_independent() {
    let dir = tempfile::tempdir().unwrap();
    let input = batch_input(dir.path());
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    let a = apizer(&[
        "batch",
        "--input",
        path(&input),
        "--out",
        path(&serial),
        "--jobs",
        "1",
    ]);
    let b = apizer(&[
        "batch",
        "--input",
        path(&input),
        "--out",
        path(&parallel),
        "--jobs",
        "4",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("1 apized\n2 apized\n3 apized\n"), "{text}");
    assert!(text.contains("line 4 failed: parse:"), "{text}");
    assert!(text.contains("4 failed: other: helper"), "{text}");
    assert!(text.trim_end().ends_with("failed=2"), "{text}");
    for id in 1..=3 {
        let name = format!("Snippet{id}.java");
        assert_eq!(
            fs::read(serial.join(&name)).unwrap(),
            fs::read(parallel.join(&name)).unwrap()
        );
    }
    assert!(!serial.join("Snippet4.java").exists());
}

#[test]
fn evaluate_single_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.java");
    let t = dir.path().join("t.java");
    fs::write(&h, "int f(int a, int b) { return a + b; }").unwrap();
    fs::write(&t, "int g(int a, int b) { return a + b; }").unwrap();
    let o = apizer(&["evaluate", "--human", path(&h), "--tool", path(&t)]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["ast-diff"], 0);
    assert_eq!(report["jaccard"], 0.0);
    assert_eq!(report["return-category"], "nonvoid-nonvoid");

    let pairs = dir.path().join("pairs.jsonl");
    let lines = [
        serde_json::json!({"id": "same", "human": "void f() { }", "tool": "void g() { }"})
            .to_string(),
        serde_json::json!({"id": "bad", "human": "void f( {", "tool": "void g() { }"}).to_string(),
    ];
    fs::write(&pairs, lines.join("\n")).unwrap();
    let o = apizer(&["evaluate", "--pairs", path(&pairs)]);
    assert_eq!(o.status.code(), Some(0));
    let out: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(out.len(), 3);
    assert_eq!(out[0]["report"]["return-category"], "void-void");
    assert!(out[1]["error"].is_string());
    assert_eq!(out[2]["summary"]["errors"], 1);
    assert_eq!(
        out[2]["summary"]["return-categories"]["void-void"]["equivalent"],
        1
    );
}

#[test]
fn clones_report_ratio_and_decision() {
    let dir = tempfile::tempdir().unwrap();
    let snippet = "String str = \"helloslkhellodjladfjhello\";\nString findStr = \"hello\";\nint lastIndex = 0;\nint count = 0;\nwhile (lastIndex != -1) {\n    lastIndex = str.indexOf(findStr, lastIndex);\n    if (lastIndex != -1) {\n        count++;\n        lastIndex += findStr.length();\n    }\n}\nSystem.out.println(count);";
    let method = "public static int countMatches(String str, String sub) {\n    int lastIndex = 0;\n    int count = 0;\n    while (lastIndex != -1) {\n        lastIndex = str.indexOf(sub, lastIndex);\n        if (lastIndex != -1) {\n            count++;\n            lastIndex += sub.length();\n        }\n    }\n    return count;\n}";
    let pairs = dir.path().join("pairs.jsonl");
    let lines = [
        serde_json::json!({"id": 1, "snippet": snippet, "method": method}).to_string(),
        serde_json::json!({"id": 2, "snippet": "int = ;", "method": method}).to_string(),
    ];
    fs::write(&pairs, lines.join("\n")).unwrap();
    let o = apizer(&["clones", "--pairs", path(&pairs)]);
    assert_eq!(o.status.code(), Some(0));
    let out: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(out[0]["is-clone"], true);
    assert!((out[0]["ratio"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    assert!(out[1]["error"].is_string());

    let o = apizer(&["clones", "--pairs", path(&pairs), "--threshold", "0.8"]);
    let first: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["is-clone"], false);
}

#[test]
fn custom_lexicon_and_catalog_flags() {
    let dir = tempfile::tempdir().unwrap();
    let snippet = dir.path().join("s.java");
    fs::write(&snippet, "int a = 3;\nint b = a * 2;").unwrap();
    let lexicon = dir.path().join("verbs.txt");
    fs::write(&lexicon, "double\n").unwrap();
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&snippet),
        "--title",
        "Double a number",
        "--answer-id",
        "5",
        "--verb-lexicon",
        path(&lexicon),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("Snippet5.java")).unwrap();
    assert!(text.contains("int doubleNumber(int a)"), "{text}");

    let bad = dir.path().join("catalog.jsonl");
    fs::write(&bad, "{\"name\": 3}\n").unwrap();
    let o = apizer(&[
        "apize",
        "--snippet",
        path(&snippet),
        "--catalog",
        path(&bad),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
