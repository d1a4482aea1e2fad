use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn machine(&self) -> BTreeMap<String, String> {
        let (_, block) = self.stdout.split_once("---\n").expect("machine block");
        block
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn get(&self, key: &str) -> String {
        self.machine().get(key).cloned().unwrap_or_else(|| panic!("no {key} in\n{}", self.stdout))
    }
}

fn nomkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nomkit")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn demo_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "demos", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn restricts_with_letters() {
    let r = nomkit(&["perm-restrict", "(a b c d e)(f g)", "--in", "{a}"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.get("result"), "(a b e)");
    let r = nomkit(&["perm-restrict", "(a b c d e f)", "--in", "{a, d}"]);
    assert_eq!(r.get("result"), "(a b f)(c d e)");
}

#[test]
fn restricts_with_atom_names() {
    let r = nomkit(&["perm-restrict", "(d0.0 d0.1 u0.3)", "--in", "{d0.0}"]);
    assert_eq!(r.get("result"), "(d0.0 d0.1 u0.3)");
}

#[test]
fn renamed_binder_is_alpha_equivalent() {
    let r = nomkit(&["alpha-eq", "[d0.0]X", "[u0.1](u0.1 d0.0)*X"]);
    assert_eq!((r.code, r.get("alpha_eq")), (0, "true".into()));
    let r = nomkit(&["alpha-eq", "[a]X", "[b]X"]);
    assert_eq!((r.code, r.get("alpha_eq")), (1, "false".into()));
}

#[test]
fn reports_support() {
    let r = nomkit(&["support", "list half / d0.2->d0.1"]);
    assert_eq!(r.get("support"), "halfcomb - {d0.2} + {d0.1}");
    assert_eq!(r.get("finite"), "false");
    assert_eq!(r.get("medium"), "true");
    let r = nomkit(&["support", "[d0.0](atm d0.0, atm d0.3)"]);
    assert_eq!(r.get("support"), "{d0.3}");
}

#[test]
fn denotes_a_term() {
    let r = nomkit(&["denote", &demo_file("desk_perm.nk"), "g(X, Y)", "--valuation", "X := pset comb - {d0.0}; Y := pset comb - {d0.1}"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.get("value"), "pset comb - {d0.0}");
}

#[test]
fn checks_a_theory() {
    let r = nomkit(&["check-theory", &demo_file("fuzzy.nk")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.get("axiom.0"), "valid");
    assert_eq!(r.get("goal.1"), "refuted");
    assert_eq!(r.get("witness.1"), "{X := fuzzy 0}");
    let r = nomkit(&["check-theory", &demo_file("fuzzy_finite.nk")]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn reduced_support_is_finite() {
    for f in ["desk_list.nk", "desk_perm.nk", "desk_const.nk"] {
        let r = nomkit(&["reduce-support", &demo_file(f)]);
        assert_eq!(r.get("carriers_finite"), "true", "{f}");
        assert_eq!(r.get("reduced.axiom.0"), "valid", "{f}");
    }
}

#[test]
fn pnl_regimes() {
    let f = demo_file("separation_full.nk");
    let r = nomkit(&["pnl-eval", &f, "--regime", "full"]);
    assert_eq!((r.code, r.get("valid")), (1, "false".into()));
    let r = nomkit(&["pnl-eval", &demo_file("separation_medium.nk"), "--regime", "medium"]);
    assert_eq!((r.code, r.get("valid")), (0, "true".into()));
    let r = nomkit(&["pnl-eval", &f, "bot -> bot", "--regime", "full"]);
    assert_eq!(r.code, 0);
}

#[test]
fn regime_violation_is_a_semantic_error() {
    let r = nomkit(&["pnl-eval", &demo_file("separation_full.nk"), "--regime", "finite"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("regime violation"));
}

#[test]
fn demos_pass() {
    let r = nomkit(&["demo", "prop-6-counterexample"]);
    assert_eq!(r.code, 0);
    assert_eq!((r.get("full"), r.get("medium"), r.get("finite")), ("false".into(), "true".into(), "true".into()));
    let r = nomkit(&["demo", "prop-7-fuzzy"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.get("witness"), "{X := fuzzy 0}");
    let r = nomkit(&["demo", "prop-8-zero"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.get("residual_support"), "{d0.2}");
}

#[test]
fn parse_errors_carry_positions() {
    let r = nomkit(&["support", "list quarter"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("1:6"), "{}", r.stderr);
    let r = nomkit(&["perm-restrict", "(a a)", "--in", "{a}"]);
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(nomkit(&["demo", "nope"]).code, 2);
    assert_eq!(nomkit(&["check-theory", "/nonexistent.nk"]).code, 2);
    assert_eq!(nomkit(&["frobnicate"]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["demo", "prop-8-zero"];
    assert_eq!(nomkit(&args).stdout, nomkit(&args).stdout);
}
