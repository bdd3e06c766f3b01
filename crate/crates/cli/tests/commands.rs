use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn holam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holam"))
        .args(args)
        .env_remove("HOLAM_BUDGET")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = holam(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    holam(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

/// Saves the stdout of a command to `name` and returns its path.
fn save(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = ok(args);
    write(dir, name, &out).to_str().unwrap().to_string()
}

const EVEN_A: &str = r#"{"states":2,"alphabet":["a"],"delta":[[1],[0]],"initial":0,"accepting":[0]}"#;
// (ab)*
const AB_STAR: &str = r#"{"states":3,"alphabet":["a","b"],"delta":[[1,2],[2,0],[2,2]],"initial":0,"accepting":[0]}"#;

#[test]
fn nf_example() {
    assert_eq!(ok(&["nf", "--term", r"\x:o. (\y:o. y) x"]), r"\x:o. x");
}

#[test]
fn member_even() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "even.dfa.json", EVEN_A);
    let even = save(dir.path(), "even.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    assert_eq!(ok(&["member", "--lang", &even, "--term", "(word aa)"]), "true");
    assert_eq!(ok(&["member", "--lang", &even, "--term", "(word aaa)"]), "false");
    let j: Value = serde_json::from_str(&ok(&["--json", "member", "--lang", &even, "--term", "(word ε)"])).unwrap();
    assert_eq!(j["member"], true);
}

#[test]
fn check_and_eval() {
    assert_eq!(ok(&["check", "--term", r"\x:o. x"]), "o -> o");
    let two = r"\s:o->o. \x:o. s (s x)";
    let zero = r"\s:o->o. \x:o. x";
    // at q = 1 every numeral denotes the same value
    assert_eq!(ok(&["eval", "--term", two, "--q", "1"]), ok(&["eval", "--term", zero, "--q", "1"]));
    assert_ne!(ok(&["eval", "--term", two, "--q", "2"]), ok(&["eval", "--term", zero, "--q", "2"]));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["nf", "--term", r"\x:o. y"]), 2);
    assert_eq!(code(&["nf", "--term", r"\x:o. x x"]), 1);
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&["eval", "--term", r"\x:o. x"]), 2);
    assert_eq!(code(&["member", "--lang", "/nonexistent.json", "--term", "x"]), 2);
    assert_eq!(code(&["witness-diagonal", "--q", "1"]), 0);

    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"op\": \"leaf\"");
    assert_eq!(code(&["lang", "not", "--lang", bad.to_str().unwrap()]), 2);
    let shape = write(dir.path(), "shape.json", r#"{"op":"nope","type":"o"}"#);
    assert_eq!(code(&["lang", "not", "--lang", shape.to_str().unwrap()]), 2);

    let dfa = write(dir.path(), "even.dfa.json", EVEN_A);
    let even = save(dir.path(), "even.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    // lowering the state count is a domain error
    assert_eq!(code(&["lang", "lift", "--lang", &even, "--q", "1"]), 1);
    // a word over the wrong number of letters is ill-typed
    let abw = r"\a:o->o. \b:o->o. \x:o. a (b x)";
    assert_eq!(code(&["member", "--lang", &even, "--term", abw]), 1);
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_holam"))
        .args(["enum-def", "--type", "o * o -> o", "--q", "3"])
        .env("HOLAM_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_holam"))
        .args(["enum-def", "--type", "o -> o", "--q", "2"])
        .env("HOLAM_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dfa_round_trip_is_minimal() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "ab.dfa.json", AB_STAR);
    let l = save(dir.path(), "l.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    let back: Value = serde_json::from_str(&ok(&["ho2dfa", "--lang", &l, "--alphabet", "a,b"])).unwrap();
    let src: Value = serde_json::from_str(AB_STAR).unwrap();
    assert_eq!(back, src);
}

#[test]
fn derive_matches_classical_derivative() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "ab.dfa.json", AB_STAR);
    let dfa = dfa.to_str().unwrap();
    let l = save(dir.path(), "l.json", &["dfa2ho", "--dfa", dfa]);
    let a = save(dir.path(), "a.json", &["singleton", "--word", "a"]);
    let b = save(dir.path(), "b.json", &["singleton", "--word", "b"]);
    for (op, div, letter) in [("left", &a, "a"), ("right", &b, "b"), ("left", &b, "b")] {
        let res = save(dir.path(), "res.json", &["derive", "--op", op, "--div", div, "--lang", &l]);
        let got = save(dir.path(), "got.dfa.json", &["ho2dfa", "--lang", &res]);
        let want = save(dir.path(), "want.dfa.json", &["dfa-derive", "--dfa", dfa, "--side", op, "--letter", letter]);
        // compare by running both on all short words
        let got: Value = serde_json::from_str(&std::fs::read_to_string(got).unwrap()).unwrap();
        let want: Value = serde_json::from_str(&std::fs::read_to_string(want).unwrap()).unwrap();
        for w in 0..64u32 {
            for len in 0..=6 {
                let word: Vec<usize> = (0..len).map(|i| ((w >> i) & 1) as usize).collect();
                assert_eq!(run(&got, &word), run(&want, &word), "{op} {letter} {word:?}");
            }
        }
    }
}

fn run(d: &Value, w: &[usize]) -> bool {
    let mut s = d["initial"].as_u64().unwrap() as usize;
    for &c in w {
        s = d["delta"][s][c].as_u64().unwrap() as usize;
    }
    d["accepting"].as_array().unwrap().iter().any(|x| x.as_u64() == Some(s as u64))
}

#[test]
fn boolean_commands_and_containment() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "even.dfa.json", EVEN_A);
    let even = save(dir.path(), "even.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    let odd = save(dir.path(), "odd.json", &["lang", "not", "--lang", &even]);
    let none = save(dir.path(), "none.json", &["lang", "and", "--lang", &even, "--lang", &odd]);
    let all = save(dir.path(), "all.json", &["lang", "or", "--lang", &even, "--lang", &odd]);
    assert_eq!(ok(&["lang", "contains", "--sub", &none, "--sup", &even]), "true");
    assert_eq!(ok(&["lang", "contains", "--sub", &even, "--sup", &all]), "true");
    let verdict = ok(&["lang", "contains", "--sub", &even, "--sup", &odd]);
    let (head, witness) = verdict.split_once('\t').unwrap();
    assert_eq!(head, "false");
    assert_eq!(ok(&["member", "--lang", &even, "--term", witness]), "true");
    assert_eq!(ok(&["member", "--lang", &odd, "--term", witness]), "false");
}

#[test]
fn pullback_successor_swaps_parity() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "even.dfa.json", EVEN_A);
    let even = save(dir.path(), "even.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    let succ = r"\n:(o->o)->o->o. \s:o->o. \x:o. s (n s x)";
    let odd = save(dir.path(), "odd.json", &["lang", "pullback", "--term", succ, "--lang", &even]);
    assert_eq!(ok(&["member", "--lang", &odd, "--term", "(word a)"]), "true");
    assert_eq!(ok(&["member", "--lang", &odd, "--term", "(word aa)"]), "false");
}

#[test]
fn product_arrow_quantify_lift() {
    let dir = TempDir::new().unwrap();
    let dfa = write(dir.path(), "even.dfa.json", EVEN_A);
    let even = save(dir.path(), "even.json", &["dfa2ho", "--dfa", dfa.to_str().unwrap()]);
    let odd = save(dir.path(), "odd.json", &["lang", "not", "--lang", &even]);
    let prod = save(dir.path(), "p.json", &["lang", "product", "--left", &even, "--right", &odd]);
    let ex = save(dir.path(), "ex.json", &["lang", "quantify", "--lang", &prod, "--mode", "exists"]);
    let fa = save(dir.path(), "fa.json", &["lang", "quantify", "--lang", &prod, "--mode", "forall"]);
    assert_eq!(ok(&["member", "--lang", &ex, "--term", "(word aa)"]), "true");
    assert_eq!(ok(&["member", "--lang", &ex, "--term", "(word a)"]), "false");
    assert_eq!(ok(&["member", "--lang", &fa, "--term", "(word aa)"]), "false");

    let arrow = save(dir.path(), "arr.json", &["lang", "arrow", "--dom", &even, "--cod", &odd]);
    let succ = r"\n:(o->o)->o->o. \s:o->o. \x:o. s (n s x)";
    let id = r"\n:(o->o)->o->o. n";
    assert_eq!(ok(&["member", "--lang", &arrow, "--term", succ]), "true");
    assert_eq!(ok(&["member", "--lang", &arrow, "--term", id]), "false");

    let lifted = save(dir.path(), "l3.json", &["lang", "lift", "--lang", &even, "--q", "3"]);
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&lifted).unwrap()).unwrap();
    assert_eq!(j["recognizer"]["q"], 3);
    for (w, b) in [("(word ε)", "true"), ("(word aaa)", "false"), ("(word aaaa)", "true")] {
        assert_eq!(ok(&["member", "--lang", &lifted, "--term", w]), b);
    }
}

#[test]
fn enum_def_and_generator() {
    let text = ok(&["enum-def", "--type", "(o -> o) -> o -> o", "--q", "2"]);
    assert!(text.starts_with("3 values, Exact"), "{text}");
    let j: Value = serde_json::from_str(&ok(&["--json", "enum-def", "--type", "o -> o", "--q", "2", "--generic"])).unwrap();
    assert_eq!(j["exactness"], "fuel_bounded");
    assert_eq!(j["values"].as_array().unwrap().len(), 1);

    let a = ok(&["gen-dfa", "--seed", "9", "--states", "3"]);
    assert_eq!(a, ok(&["gen-dfa", "--seed", "9", "--states", "3"]));
    let d: Value = serde_json::from_str(&a).unwrap();
    assert!(d["states"].as_u64().unwrap() <= 3);
}

#[test]
fn tree_round_trip() {
    let dir = TempDir::new().unwrap();
    let ta = write(
        dir.path(),
        "root_f.json",
        r#"{"states":2,"ranked":[{"letter":"f","arity":1},{"letter":"c","arity":0}],"tables":[[1,1],0],"accepting":[1]}"#,
    );
    let l = save(dir.path(), "l.json", &["ta2ho", "--ta", ta.to_str().unwrap()]);
    let back: Value = serde_json::from_str(&ok(&["ho2ta", "--lang", &l, "--ranked", "f:1,c:0"])).unwrap();
    assert_eq!(back["accepting"].as_array().unwrap().len(), 1);
    let single = save(dir.path(), "s.json", &["singleton", "--tree", "f(c)", "--ranked", "f:1,c:0"]);
    let j: Value = serde_json::from_str(&std::fs::read_to_string(single).unwrap()).unwrap();
    assert!(j.get("support").is_some());
}
