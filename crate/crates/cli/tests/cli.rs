use std::path::Path;
use std::process::{Command, Output};

use quiverkit::functors::Object;
use quiverkit::homology::{is_isomorphic, Options};
use quiverkit::quiver::kron_l;
use quiverkit::verify::VerificationReport;
use quiverkit::{FieldSpec, Poly};

fn quiverkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverkit")).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn gp_embedding_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = quiverkit(&["verify", "embedding", "--functor", "gp", "--n", "2", "--field", "q5", "--samples", "20", "--seed", "7"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.passed);
    assert_eq!(r.seed, 7);
}

#[test]
fn kronecker_functor_fails_over_the_rationals_at_x_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = quiverkit(&["verify", "embedding", "--functor", "fn", "--n", "2", "--field", "rationals", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 1);
    let r: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    let check = r.check("indecomposables").unwrap();
    assert!(!check.passed);
    let q = FieldSpec::Rationals;
    let l = Object::Rep(kron_l(&Poly::from_ints(q, &[-1, 1])).unwrap());
    assert!(check.witnesses.iter().any(|w| is_isomorphic(&w.objects[0], &l, Options::with_seed(1)).unwrap().holds()));
}

#[test]
fn preset_list_names_shipped_algebras() {
    let dir = tempfile::tempdir().unwrap();
    let o = quiverkit(&["preset", "list"], dir.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["algebras"].as_array().unwrap().iter().map(|a| a["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"trunc2") && names.contains(&"kron2"));
}

#[test]
fn same_seed_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "fullness", "--functor", "brenner", "--n", "2", "--field", "q3", "--samples", "5", "--seed", "11"];
    let (a, b) = (quiverkit(&args, dir.path()), quiverkit(&args, dir.path()));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_apply_compose() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&quiverkit(&["--field", "q5", "functor", "build", "fn", "--n", "2", "-o", "fn.json"], d)), 0);
    assert_eq!(code(&quiverkit(&["--field", "q5", "preset", "module", "P1", "-o", "p1.json"], d)), 0);
    let o = quiverkit(&["functor", "apply", "fn.json", "p1.json"], d);
    assert_eq!(code(&o), 0);
    let image: Object = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(image.dims(), vec![3, 2]);

    assert_eq!(code(&quiverkit(&["functor", "compose", "fn.json", "fn.json", "-o", "ff.json"], d)), 0);
    let o = quiverkit(&["functor", "apply", "ff.json", "p1.json"], d);
    let image: Object = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(image.dims(), vec![5, 4]);

    let o = quiverkit(&["hom", "p1.json", "p1.json"], d);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn lattice_of_a_regular_module() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&quiverkit(&["--field", "q2", "preset", "module", "L:1,1", "-o", "l.json"], d)), 0);
    let o = quiverkit(&["lattice", "l.json"], d);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 0 ⊂ (sink simple) ⊂ L
    assert_eq!(v["count"], 3);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&quiverkit(&["frobnicate"], d)), 2);
    assert_eq!(code(&quiverkit(&["preset", "list", "--no-such-flag"], d)), 2);
    assert_eq!(code(&quiverkit(&["--field", "q4", "preset", "list"], d)), 2);
    assert_eq!(code(&quiverkit(&["hom", "missing.json", "missing.json"], d)), 2);
    assert_eq!(code(&quiverkit(&["verify", "embedding", "--functor", "gp"], d)), 2);
}

#[test]
fn every_subcommand_has_help() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["preset"],
        vec!["functor", "build"],
        vec!["functor", "apply"],
        vec!["hom"],
        vec!["ext"],
        vec!["decompose"],
        vec!["lattice"],
        vec!["verify", "embedding"],
        vec!["verify", "orthogonal"],
    ] {
        let mut args = cmd.clone();
        args.push("--help");
        let o = quiverkit(&args, dir.path());
        assert_eq!(code(&o), 0, "{cmd:?}");
        assert!(o.stdout.len() > 100, "{cmd:?}");
    }
}
