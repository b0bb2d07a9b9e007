mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use esnkit::io::{self, Structure};

fn esnkit(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_esnkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn fixture(name: &str) -> String {
    common::fixture_dir().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generated_monoid_validates_from_stdin() {
    let gen = esnkit(&["gen", "symmetric_inverse_monoid", "2"], None);
    assert_eq!(gen.status.code(), Some(0));
    let v = esnkit(&["validate"], Some(&stdout(&gen)));
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("7 elements"));
}

#[test]
fn gen_writes_file_and_rejects_huge_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    let o = esnkit(&["gen", "brandt", "3", "-o", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let s = io::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(matches!(s, Structure::InverseSemigroup(ref r) if r.elements.len() == 10));
    assert_eq!(esnkit(&["gen", "symmetric_inverse_monoid", "9"], None).status.code(), Some(2));
    assert_eq!(esnkit(&["gen", "free_monoid", "2"], None).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "lemma-suite", &fixture("I2.json"), &fixture("G_I2.json")];
    let a = esnkit(&args, None);
    let b = esnkit(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_report_is_canonical() {
    let o = esnkit(&["--json", "verify", "esn", &fixture("I2.json")], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["sections"][0]["checks"][0]["name"], "S(G(S)) = S on-the-nose");
    assert_eq!(io::emit_value(&v), text);
}

#[test]
fn conversions_round_trip() {
    let g = esnkit(&["convert", "--to", "groupoid", &fixture("I2.json")], None);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(stdout(&g), std::fs::read_to_string(fixture("G_I2.json")).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let gp = dir.path().join("g.json");
    std::fs::write(&gp, stdout(&g)).unwrap();
    let s = esnkit(&["convert", "--to", "semigroup", gp.to_str().unwrap()], None);
    let (Structure::InverseSemigroup(back), Structure::InverseSemigroup(orig)) =
        (io::parse(&stdout(&s)).unwrap(), io::parse(&std::fs::read_to_string(fixture("I2.json")).unwrap()).unwrap())
    else {
        panic!("kinds");
    };
    assert_eq!((back.elements, back.table), (orig.elements, orig.table));
    // I2 already has an element named "0"
    let clash = esnkit(&["convert", "--to", "semigroup0", gp.to_str().unwrap()], None);
    assert_eq!(clash.status.code(), Some(1));
    let c4 = esnkit(&["convert", "--to", "groupoid", &fixture("C4.json")], None);
    let cp = dir.path().join("c4.json");
    std::fs::write(&cp, stdout(&c4)).unwrap();
    let z = esnkit(&["convert", "--to", "semigroup0", cp.to_str().unwrap()], None);
    assert!(matches!(io::parse(&stdout(&z)).unwrap(), Structure::InverseSemigroup(r) if r.elements.len() == 5));
    for to in ["lcat", "rcat", "bar"] {
        let o = esnkit(&["convert", "--to", to, gp.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0), "{to}");
        assert!(io::parse(&stdout(&o)).is_ok(), "{to}");
    }
    let j = esnkit(&["convert", "--to", "j", &fixture("crown_action.json")], None);
    assert_eq!(j.status.code(), Some(0));
    assert_eq!(esnkit(&["convert", "--to", "j", &fixture("I2.json")], None).status.code(), Some(2));
}

#[test]
fn failures_name_their_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    // a·b = b, b·a = a, not an inverse semigroup (left zero band)
    std::fs::write(
        &p,
        r#"{"version":"esnkit/1","kind":"inverse_semigroup","elements":["a","b"],"table":[[0,1],[0,1]]}"#,
    )
    .unwrap();
    let o = esnkit(&["validate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness:"), "{}", stdout(&o));
    let o = esnkit(&["verify", "affine-universality", &fixture("crown.json")], None);
    assert_eq!(o.status.code(), Some(0));
    let o = esnkit(&["verify", "affine-universality", &fixture("crown_action.json")], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("orbit condition fails at"));
}

#[test]
fn schema_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, r#"{"version":"esnkit/1","kind":"inverse_semigroup","elements":["a"],"table":[[5]]}"#).unwrap();
    let o = esnkit(&["validate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.table[0][0]"));
    std::fs::write(&p, "{\n  \"kind\": ").unwrap();
    assert_eq!(esnkit(&["validate", p.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn verbs_cover_every_kind() {
    let ok = |args: &[&str]| {
        let o = esnkit(args, None);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{}", stdout(&o));
    };
    ok(&["verify", "p-theorem", &fixture("vee_triple.json")]);
    ok(&["verify", "p-theorem", "--search", &fixture("C4.json"), &fixture("chain4.json")]);
    ok(&["verify", "rooted", &fixture("L_B2.json")]);
    ok(&["verify", "rooted", "--root", "p2", &fixture("chain3_category.json")]);
    ok(&["verify", "rooted", &fixture("G_I2.json")]);
    ok(&["verify", "lemma-suite", &fixture("L_B2.json"), &fixture("rooted_chain3.json")]);
    ok(&["validate", &fixture("diamond_to_chain.json")]);
    ok(&["iso", &fixture("chain3_category.json"), &fixture("chain3_category.json")]);
    let o = esnkit(&["iso", &fixture("I2.json"), &fixture("B2.json")], None);
    assert_eq!(o.status.code(), Some(1));
}
