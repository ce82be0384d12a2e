use std::process::Command;

use proptest::collection::vec;
use proptest::prelude::*;

use vecopt::app::lambda_grid;
use vecopt::builtin::{builtin, NAMES};
use vecopt::grid::grid_pareto_par;
use vecopt::{parse_expr, parse_problem, render_expr, render_problem, Report};
use vecopt_core::oracle::{grid_pareto, GridSpec};
use vecopt_core::{Expr, FeasibleSet, HalfSpace, Problem};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vecopt"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(args: &[&str]) -> Report {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn tree(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0..n).prop_map(Expr::Var),
        (-5.0..5.0f64).prop_map(Expr::Const),
        (0u32..1000).prop_map(|k| Expr::Const(k as f64 / 8.0)),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            vec(inner.clone(), 2..4).prop_map(Expr::Add),
            vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), 0u32..5).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            inner.clone().prop_map(|e| Expr::Sin(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Cos(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Exp(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
            vec(inner.clone(), 2..4).prop_map(Expr::Max),
            vec(inner.clone(), 2..4).prop_map(Expr::Min),
        ]
    })
}

fn smooth_tree(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0..n).prop_map(Expr::Var), (-5.0..5.0f64).prop_map(Expr::Const)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            vec(inner.clone(), 2..4).prop_map(Expr::Add),
            vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), 0u32..5).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            inner.clone().prop_map(|e| Expr::Sin(Box::new(e))),
        ]
    })
}

fn feasible(n: usize) -> impl Strategy<Value = FeasibleSet> {
    prop_oneof![
        Just(FeasibleSet::Full),
        vec((-3.0..0.0f64, 0.0..3.0f64, any::<bool>()), n).prop_map(|iv| FeasibleSet::Box {
            lower: iv.iter().map(|(l, _, inf)| if *inf { f64::NEG_INFINITY } else { *l }).collect(),
            upper: iv.iter().map(|(_, u, _)| *u).collect(),
        }),
        vec((vec(-2.0..2.0f64, n), -1.0..1.0f64), 1..4).prop_map(|rows| FeasibleSet::Polyhedron(
            rows.into_iter()
                .map(|(mut normal, offset)| {
                    normal[0] += 3.0;
                    HalfSpace { normal, offset }
                })
                .collect()
        )),
        vec(smooth_tree(n), 1..3).prop_map(FeasibleSet::SmoothIneq),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn expressions_round_trip(e in tree(3)) {
        let text = render_expr(&e);
        let back = parse_expr(&text, None).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn problems_round_trip(fs in vec(tree(2), 1..4), set in feasible(2)) {
        let p = Problem::new(2, fs, set).unwrap();
        let text = render_problem(&p);
        prop_assert_eq!(parse_problem(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn garbage_never_panics(s in "[ -~\n]{0,60}") {
        let _ = parse_problem(&s);
        let _ = parse_expr(&s, Some(3));
    }
}

#[test]
fn builtins_round_trip() {
    for name in NAMES {
        let p = builtin(name).unwrap();
        assert_eq!(parse_problem(&render_problem(&p)).unwrap(), p, "{name}");
    }
}

#[test]
fn parallel_grid_oracle_matches_sequential() {
    let x = Expr::var(0);
    let y = Expr::var(1);
    let p = Problem::new(
        2,
        vec![x.clone() + y.clone().powi(2), (x - Expr::constant(1.0)).powi(2) - y],
        FeasibleSet::Box {
            lower: vec![-1.0, -1.0],
            upper: vec![1.0, 0.5],
        },
    )
    .unwrap();
    let g = GridSpec::uniform(2, -1.5, 1.5, 151).unwrap();
    assert_eq!(grid_pareto_par(&p, &g).unwrap(), grid_pareto(&p, &g).unwrap());
}

#[test]
fn weight_grid() {
    assert_eq!(lambda_grid(2, 4).unwrap(), vec![vec![0.25, 0.75], vec![0.5, 0.5], vec![0.75, 0.25]]);
    assert_eq!(lambda_grid(3, 5).unwrap().len(), 6);
    assert!(lambda_grid(3, 2).is_err());
}

#[test]
fn rabier_of_quadratic() {
    let r = report(&["rabier", "--problem", "quadratic", "--at", "3"]);
    assert_eq!(r.result["nu"], 6.0);
    let r = report(&["rabier", "--problem", "ex41", "--at", "2", "--mode", "plus-only"]);
    assert!(r.result["nu"].as_f64().unwrap() >= 0.0);
}

#[test]
fn geoffrion_example() {
    let r = report(&["geoffrion", "--problem", "ex41", "--xbar", "1", "--M", "10", "--box", "0,100", "--grid-step", "0.01"]);
    assert_eq!(r.result["status"], "Violation");
    let x = r.result["x"][0].as_f64().unwrap();
    let ratio = r.result["min_ratio"].as_f64().unwrap();
    assert!((ratio - (x + 1.0)).abs() <= 1e-9);
    assert!(ratio > 10.0);
}

#[test]
fn mtame_on_sin_contains_zero() {
    let r = report(&["probe", "mtame", "--problem", "sin", "--ybar", "0"]);
    let cands = r.result["cloud"]["candidates"].as_array().unwrap();
    assert!(cands.iter().any(|c| c["y"][0].as_f64().unwrap().abs() <= 1e-3));
}

#[test]
fn problem_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "# example\nobjectives: [\"-x1^2\", \"x1\"]\nconstraints: box [[0, inf]]\n").unwrap();
    let r = report(&["rabier", "--problem", path.to_str().unwrap(), "--at", "1"]);
    assert_eq!(r.problem.text, render_problem(&builtin("ex41").unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["rabier", "--problem", "nope", "--at", "1"]).0, 1);
    assert_eq!(run(&["rabier", "--problem", "quadratic"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["rabier", "--problem", "quadratic", "--at", "1,2"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "objectives: [\"x1 +\"]").unwrap();
    let (code, _, err) = run(&["rabier", "--problem", path.to_str().unwrap(), "--at", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1, column"), "{err}");
    // a section probe needs a finite sublevel
    assert_eq!(run(&["probe", "section", "--problem", "sin", "--ybar", "inf"]).0, 1);
    // a failing verdict is still a verdict
    assert_eq!(run(&["probe", "proper", "--problem", "linear2", "--ybar", "0"]).0, 0);
}

#[test]
fn reports_are_deterministic_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["probe", "ps", "--problem", "sin", "--ybar", "0", "--seed", "4"];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(a.body(), b.body());
    let c = report(&["probe", "ps", "--problem", "sin", "--ybar", "0", "--seed", "5"]);
    assert_ne!(a.result, c.result);

    for args in [
        &args[..],
        &["probe", "mtame", "--problem", "sin", "--ybar", "0"],
        &["crosscheck", "--problem", "ex41", "--ybar", "-4,2"],
        &["rabier", "--problem", "linear2", "--at", "1,-1"],
        &["pareto", "solve", "--problem", "remark41", "--lambda", "1,1", "--ybar", "0,1", "--box", "-3,3"],
    ] {
        let path = dir.path().join("r.json");
        let mut full: Vec<&str> = args.to_vec();
        let out = path.to_str().unwrap();
        full.extend(["--out", out]);
        let (code, _, err) = run(&full);
        assert_eq!(code, 0, "{err}");
        let (code, text, _) = run(&["replay", out]);
        assert_eq!(code, 0, "{args:?}: {text}");
    }
}

#[test]
fn tampered_reports_fail_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut r = report(&["rabier", "--problem", "quadratic", "--at", "3"]);
    r.witnesses[0].fx[0] += 1e-6;
    std::fs::write(&path, r.to_json()).unwrap();
    assert_eq!(run(&["replay", path.to_str().unwrap()]).0, 2);
    std::fs::write(&path, "{").unwrap();
    assert_eq!(run(&["replay", path.to_str().unwrap()]).0, 1);
}

#[test]
fn witness_rows_are_capped() {
    let args = ["oracle", "pareto-grid", "--problem", "ex41", "--box", "0,10", "--grid-step", "0.1"];
    let r = report(&args);
    assert_eq!(r.result["nondominated"], 101);
    assert_eq!(r.witnesses.len(), 50);
    assert_eq!(r.omitted_rows, 51);
    let mut full = args.to_vec();
    full.push("--full");
    assert_eq!(report(&full).witnesses.len(), 101);
}

#[test]
fn thread_count_from_environment() {
    let out = bin()
        .args(["oracle", "pareto-grid", "--problem", "remark41", "--box", "-5,5", "--steps", "10001"])
        .env("VECOPT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.result["nondominated"], 5001);
    let bad = bin().args(["render", "--problem", "sin"]).env("VECOPT_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn front_and_existence_commands() {
    let r = report(&["pareto", "front", "--problem", "remark41", "--lambda-grid", "8", "--box", "-4,4"]);
    assert_eq!(r.result["points"].as_array().unwrap().len(), 7);
    assert!(r.result["failures"].as_array().unwrap().is_empty());
    let r = report(&["existence", "--problem", "ex41"]);
    assert_eq!(r.result["status"], "Refuted");
    let r = report(&["recession", "--problem", "remark41"]);
    assert_eq!(r.result["eq8_holds"], true);
    let r = report(&["kzero", "--problem", "quadratic", "--ybar", "inf", "--box", "-5,5", "--steps", "21"]);
    assert_eq!(r.result["cloud"]["candidates"].as_array().unwrap().len(), 1);
    let (code, text, _) = run(&["render", "--problem", "linear2"]);
    assert_eq!(code, 0);
    assert!(text.contains("x1 + x2"));
}
