use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("arrowplace-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrowplace"))
        .current_dir(dir)
        .env_remove("ARROWPLACE_EPS")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no '{key}' line"))
}

#[test]
fn gen_place_render() {
    let d = tmpdir("flow");
    ok(&d, &["--seed", "2", "gen", "random", "--n", "20", "-o", "g.layout"]);
    let layout = std::fs::read_to_string(d.join("g.layout")).unwrap();
    assert_eq!(layout.lines().filter(|l| l.starts_with("edge ")).count(), 30);
    let placement = ok(&d, &["place", "g.layout", "--solver", "heur-global"]);
    assert_eq!(field(&placement, "solver"), "heur-global");
    assert_eq!(placement.lines().filter(|l| l.starts_with("arrow ")).count(), 30);
    std::fs::write(d.join("g.placement"), &placement).unwrap();
    let svg = ok(&d, &["render", "g.layout", "g.placement"]);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"arrow\"").count(), 30);
}

#[test]
fn exit_codes() {
    let d = tmpdir("exit");
    assert_eq!(run(&d, &["place", "missing.layout"]).status.code(), Some(1));
    std::fs::write(d.join("bad.layout"), "arrowplace-layout v1\nnode 0 0\n").unwrap();
    let out = run(&d, &["place", "bad.layout"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    ok(&d, &["--seed", "1", "gen", "random", "--n", "60", "-o", "g.layout"]);
    let out = run(&d, &["place", "g.layout", "--r-e", "3", "--r-v", "3", "--node-limit", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(field(&String::from_utf8(out.stdout).unwrap(), "proven_optimal"), "false");

    let out = Command::new(env!("CARGO_BIN_EXE_arrowplace"))
        .current_dir(&d)
        .env("ARROWPLACE_EPS", "abc")
        .args(["place", "g.layout"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn variable_chain_shape() {
    let d = tmpdir("variable");
    ok(&d, &["gadget", "variable", "--k", "5", "-o", "v.layout"]);
    let layout = std::fs::read_to_string(d.join("v.layout")).unwrap();
    assert_eq!(layout.lines().filter(|l| l.starts_with("edge ")).count(), 11);
    assert!(d.join("v.candidates").exists());
    assert_eq!(run(&d, &["gadget", "variable", "--k", "4", "-o", "w.layout"]).status.code(), Some(1));
}

#[test]
fn clause_gadget_through_files() {
    let d = tmpdir("clause");
    ok(&d, &["gadget", "clause", "--legs", "d,d,d", "-o", "c.layout"]);
    let pl = ok(&d, &["place", "c.layout", "--candidates", "c.candidates"]);
    assert_eq!(field(&pl, "proven_optimal"), "true");
    assert_eq!(field(&pl, "overlaps"), "1");

    ok(&d, &["gadget", "clause", "--legs", "d,s,d", "--literals", "p,n,p", "-o", "s.layout"]);
    let pl = ok(&d, &["place", "s.layout", "--candidates", "s.candidates"]);
    assert_eq!(field(&pl, "overlaps"), "0");
}

#[test]
fn triangle_render_shows_its_candidates() {
    let d = tmpdir("triangle");
    ok(&d, &["gadget", "triangle", "-o", "t.layout"]);
    let pl = ok(&d, &["place", "t.layout", "--candidates", "t.candidates", "-o", "t.placement"]);
    assert!(pl.is_empty());
    let svg = ok(
        &d,
        &["render", "t.layout", "t.placement", "--candidates", "t.candidates", "--show-candidates"],
    );
    assert_eq!(svg.matches("class=\"candidate\"").count(), 6);
    assert_eq!(svg.matches("class=\"arrow\"").count(), 3);
}

#[test]
fn bench_writes_rows_in_name_order() {
    let d = tmpdir("bench");
    std::fs::create_dir_all(d.join("set")).unwrap();
    ok(&d, &["--seed", "3", "gen", "random", "--n", "15", "-o", "set/b.layout"]);
    ok(&d, &["--seed", "4", "gen", "random", "--n", "15", "-o", "set/a.layout"]);
    let csv = ok(&d, &["bench", "set", "--solvers", "exact,editor"]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("instance,"));
    assert!(rows[1].starts_with("a,") && rows[2].starts_with("a,"));
    assert!(rows[3].starts_with("b,") && rows[4].contains(",editor,"));
    assert!(rows[1..].iter().all(|r| r.ends_with(",ok")));
}
