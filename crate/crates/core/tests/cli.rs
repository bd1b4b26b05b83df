//! Runs the `weyl` binary.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn weyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = weyl(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    weyl(args).status.code().unwrap()
}

#[test]
fn commutator_of_generators() {
    assert_eq!(ok(&["comm", "D", "x"]).trim(), "1");
    assert_eq!(ok(&["comm", "x", "D"]).trim(), "-1");
    assert_eq!(ok(&["normalize", "D*x - x*D"]).trim(), "1");
}

#[test]
fn normal_forms() {
    assert_eq!(ok(&["normalize", "x*D*x"]).trim(), "x^2*D + x");
    assert_eq!(ok(&["mul", "D^2", "x^2"]).trim(), "x^2*D^2 + 4*x*D + 2");
    assert_eq!(
        ok(&["normalize", "(D^2 - x^3 - a)^2 - 2*x"]).trim(),
        "D^4 - 2*x^3*D^2 - 2*a*D^2 - 6*x^2*D + x^6 + 2*a*x^3 - 8*x + a^2"
    );
    assert_eq!(ok(&["--alpha", "1/2", "normalize", "a*x + a^2"]).trim(), "1/2*x + 1/4");
}

#[test]
fn dixmier_report() {
    let out = ok(&["dixmier-verify", "--alpha", "0"]);
    assert!(out.contains("ord(L4) = 4"), "{out}");
    assert!(out.contains("ord(L6) = 6"), "{out}");
    assert!(out.contains("relation Y^2 - X^3 - a = 0: true"), "{out}");
    assert!(out.contains("[L4, L6] = 0: true"), "{out}");
    let out = ok(&["dixmier-verify"]);
    assert!(out.contains("L6^2 - L4^3 = a\n"), "{out}");
    assert!(out.contains("L6^2 - L4^3 + a = 2*a"), "{out}");
}

#[test]
fn weights_and_polygons() {
    assert_eq!(ok(&["almost-commute", "x*D", "x^2*D^2", "--sigma", "1", "--rho", "1"]).trim(), "true");
    assert_eq!(ok(&["almost-commute", "D", "x", "--sigma", "1", "--rho", "1"]).trim(), "false");
    let hp = ok(&["hom-part", "(D^2 - x^3 - a)^2 - 2*x", "--sigma", "2", "--rho", "3"]);
    assert!(hp.starts_with("y^4 - 2*x^3*y^2 + x^6\n"), "{hp}");
    assert!(hp.contains("2*x + 3*y = 12"), "{hp}");
    assert_eq!(ok(&["polygon", "x + D + x*D"]).trim(), "(0,1) (1,0) (1,1)");
}

#[test]
fn maps() {
    assert_eq!(ok(&["apply", "D", "--word", "PhiP(1,1)"]).trim(), "D + x");
    assert_eq!(ok(&["apply", "x*D", "--img-d", "D", "--img-x", "x + D"]).trim(), "D^2 + x*D");
    assert_eq!(ok(&["compose", "Phi(1,1)", "PhiP(1,1)"]).trim(), "D -> 2*D + x; x -> D + x");
    let r = ok(&["rectangularize", "--img-d", "(D+x)^2", "--img-x", "x"]);
    assert!(r.contains("case 4d"), "{r}");
    assert!(r.contains("measure 4 -> 2"), "{r}");
    assert!(r.contains("D -> D^2; x -> x"), "{r}");
}

#[test]
fn schur_output() {
    let s = ok(&["schur", "D^2 + x", "--N", "2", "--M", "6"]);
    assert!(s.contains("(-1/4*x^2)*Dinv^1"), "{s}");
    assert!(s.contains("(1/32*x^4 + 1/4*x)*Dinv^2"), "{s}");
}

#[test]
fn relations_and_probes() {
    let f = ok(&[
        "find-relation",
        "(D^2 - x^3)^2 - 2*x",
        "(D^2-x^3)^3 - 3/2*(x*(D^2-x^3) + (D^2-x^3)*x)",
        "--degx",
        "3",
        "--degy",
        "2",
    ]);
    assert!(f.contains("Y^2 - X^3 = 0"), "{f}");
    let p = ok(&["probe", "D", "x^2"]);
    assert!(p.contains("nilpotency 2"), "{p}");
    assert!(p.contains("central false"), "{p}");
}

#[test]
fn orbit_search_with_file() {
    let mut file = std::env::temp_dir();
    file.push(format!("weyl-gens-{}.txt", std::process::id()));
    let mut f = std::fs::File::create(&file).unwrap();
    writeln!(f, "# generators\nPhi(1,1)\nPhi(1,-1)\nPhiP(1,1); PhiP(1,-1)").unwrap();
    drop(f);
    let path = file.to_str().unwrap();
    let out = ok(&["orbit-search", "--gens", path, "--depth", "2", "--alpha", "0"]);
    let json = ok(&["--json", "orbit-search", "--gens", path, "--depth", "1", "--alpha", "0"]);
    std::fs::remove_file(&file).unwrap();
    assert!(out.contains("distinct pairs 17"), "{out}");
    assert!(out.contains("id == Phi(1,1);Phi(1,-1)"), "{out}");
    assert!(out.contains("all visited pairs satisfy the relation and commute"), "{out}");
    let v: Value = serde_json::from_str(&json).unwrap();
    assert!(v.is_object(), "{json}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["ord", "0"]), 1);
    let o = weyl(&["ord", "0"]);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: ZeroOperator"));
    assert_eq!(code(&["normalize", "D^-1"]), 2);
    assert_eq!(code(&["normalize", "x +"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["apply", "D", "--word", "Bogus(1)"]), 2);
    assert_eq!(code(&["orbit-search", "--gens", "/nonexistent/gens.txt"]), 2);
    assert_eq!(code(&["schur", "x*D^2 + 1"]), 1);
}

#[test]
fn json_is_byte_stable_and_sorted() {
    let cases: [&[&str]; 4] = [
        &["--json", "normalize", "(D^2 - x^3 - a)^2 - 2*x"],
        &["--json", "dixmier-verify"],
        &["--json", "hom-part", "x*D + D^3", "--sigma", "1", "--rho", "2"],
        &["--json", "schur", "D^2 + x", "--N", "3", "--M", "6"],
    ];
    for args in cases {
        let a = ok(args);
        let b = ok(args);
        assert_eq!(a, b, "{args:?}");
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), a.trim(), "keys not in sorted canonical order");
    }
}
