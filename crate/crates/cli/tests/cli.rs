use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bgpres(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bgpres"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str], stdin: &str) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = bgpres(&all, stdin);
    (serde_json::from_slice(&o.stdout).unwrap(), o.status.code().unwrap())
}

#[test]
fn gen_u22() {
    let (v, code) = json(&["gen", "u", "--n", "2", "--m", "2"], "");
    assert_eq!(code, 0);
    let word = v["word"].as_str().unwrap();
    assert!(word.starts_with("T^2 Y X y t"));
    assert_eq!(v["length"].as_str().unwrap(), word_len(word).to_string());
}

fn word_len(w: &str) -> u64 {
    w.split_whitespace()
        .map(|tok| tok.split_once('^').map_or(1, |(_, e)| e.parse::<u64>().unwrap()))
        .sum()
}

#[test]
fn gen_a_length() {
    let (v, _) = json(&["gen", "a", "--n", "3"], "");
    assert_eq!(v["length"], "385");
}

#[test]
fn gen_mu_prints_presentation() {
    let o = bgpres(&["gen", "mu", "--n", "0"], "");
    assert_eq!(stdout(&o), "gens: x y t\nrel: Y x y X^2\nrel: T x t Y\n");
}

#[test]
fn word_problem() {
    let o = bgpres(&["wp"], "T x t Y\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "trivial\ncost: 1\n");

    let (v, code) = json(&["wp", "-"], "x");
    assert_eq!(code, 1);
    assert_eq!(v["trivial"], false);
}

#[test]
fn generated_words_are_trivial() {
    let u = stdout(&bgpres(&["gen", "w", "--n", "2", "--m", "1"], ""));
    let (v, code) = json(&["wp"], &u);
    assert_eq!((v["trivial"].as_bool(), code), (Some(true), 0));
}

#[test]
fn n_reduced() {
    assert_eq!(bgpres(&["nreduced", "--n", "3"], "T x^3 t").status.code(), Some(0));
    assert_eq!(bgpres(&["nreduced", "--n", "4"], "T x^3 t").status.code(), Some(1));
}

#[test]
fn cprime_family() {
    let (v, code) = json(&["cprime", "--n", "5", "--lambda", "1/6"], "");
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["max_piece_t"], 4);
    assert_eq!(v["relator_t"], 25);

    let (v, code) = json(&["cprime", "--n", "7", "--symbolic"], "");
    assert_eq!((v["max_piece_t"].as_u64(), code), (Some(4), 0));
}

#[test]
fn cprime_from_words() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rels.txt");
    std::fs::write(&path, "# one relator\nT y t x\n").unwrap();
    let p = path.to_str().unwrap();
    let (v, code) = json(&["cprime", "--words", p, "--bound", "16", "--lambda", "1/6"], "");
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["max_piece_t"], 2);

    std::fs::write(&path, "T x t y\n").unwrap();
    assert_eq!(bgpres(&["cprime", "--words", p, "--bound", "16"], "").status.code(), Some(2));
}

#[test]
fn concrete_tower_beyond_limit_is_budget_error() {
    let o = bgpres(&["cprime", "--n", "6"], "");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bgpres(&["nonsense"], "").status.code(), Some(2));
    assert_eq!(bgpres(&["wp"], "x q").status.code(), Some(2));
}

#[test]
fn area_with_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.txt");
    let c = cert.to_str().unwrap();
    let (v, code) = json(&["area", "--max-area", "4", "--max-len", "12", "--certificate", c], "Y x y X^2");
    assert_eq!((v["area"].as_u64(), code), (Some(1), 0));

    let (v, code) = json(&["cert", c, "--word", "Y x y X^2"], "");
    assert_eq!((v["valid"].as_bool(), code), (Some(true), 0));

    let (v, code) = json(&["cert", c, "--word", "Y x y X^3"], "");
    assert_eq!((v["valid"].as_bool(), code), (Some(false), 1));
}

#[test]
fn area_not_found() {
    let (v, code) = json(&["area", "--max-area", "2", "--max-len", "8"], "x");
    assert_eq!(code, 1);
    assert_eq!(v["found"], false);
}

#[test]
fn conversion_certificate_checks() {
    let (v, code) = json(&["cert", "--conversion", "2"], "");
    assert_eq!(code, 0);
    assert_eq!((v["terms"].as_u64(), v["checks"].as_bool()), (Some(72), Some(true)));
}

#[test]
fn tietze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("p.txt");
    let script = dir.path().join("s.txt");
    std::fs::write(&pres, "gens: x y t\nrel: Y x y X^2\nrel: T x t Y\n").unwrap();
    let p = pres.to_str().unwrap();

    let out = stdout(&bgpres(&["tietze", "--presentation", p, "--eliminate-y"], ""));
    let moves: String = out.lines().skip_while(|l| !l.starts_with("# ")).skip(1).map(|l| format!("{l}\n")).collect();
    assert!(!moves.is_empty());
    std::fs::write(&script, &moves).unwrap();

    let (v, code) = json(
        &["tietze", "--presentation", p, "--script", script.to_str().unwrap(), "--track", "Y x y X^2"],
        "",
    );
    assert_eq!(code, 0);
    let eliminated = out.lines().take_while(|l| !l.starts_with("# ")).collect::<Vec<_>>().join("\n");
    assert_eq!(v["presentation"].as_str().unwrap().trim_end(), eliminated);
    assert!(!v["presentation"].as_str().unwrap().contains(" y"));
}

#[test]
fn diagram_fixture_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.txt");
    let p = dir.path().join("p.txt");
    std::fs::write(&d, stdout(&bgpres(&["diagram", "--fixture", "cables"], ""))).unwrap();
    std::fs::write(&p, stdout(&bgpres(&["diagram", "--fixture", "cables", "--fixture-presentation"], ""))).unwrap();
    let (d, p) = (d.to_str().unwrap(), p.to_str().unwrap());

    let (v, code) = json(&["diagram", "validate", d, "--presentation", p], "");
    assert_eq!(code, 0);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let (v, _) = json(&["diagram", "cables", d, "--presentation", p], "");
    assert_eq!((v["bands"].as_u64(), v["cables"].as_array().unwrap().len()), (Some(4), 3));

    let (v, _) = json(&["diagram", "audit", d, "--presentation", p], "");
    let c = &v["components"][0];
    assert_eq!((c["v"].as_u64(), c["e"].as_u64(), c["f"].as_u64()), (Some(3), Some(3), Some(1)));

    let dot = stdout(&bgpres(&["diagram", "dual", d, "--presentation", p, "--dot"], ""));
    assert!(dot.starts_with("graph dual {"));
    assert_eq!(dot.matches(" -- ").count(), 3);
}

#[test]
fn invalid_diagram_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.txt");
    let p = dir.path().join("p.txt");
    let mut text = stdout(&bgpres(&["diagram", "--fixture", "single"], ""));
    text = text.replacen("dart 0 1 ", "dart 0 0 ", 1);
    std::fs::write(&d, text).unwrap();
    std::fs::write(&p, stdout(&bgpres(&["diagram", "--fixture", "single", "--fixture-presentation"], ""))).unwrap();
    let o = bgpres(&["diagram", "validate", d.to_str().unwrap(), "--presentation", p.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
