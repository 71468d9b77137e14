use std::path::Path;

use hj_sweep::cli::{run_command, EpsilonSetting, RunConfig, RunOptions, EXIT_IO, EXIT_OK, EXIT_SOLVER, EXIT_USAGE};
use hj_sweep::problems::{make_problem, ProblemId};
use hj_sweep::report::read_table_csv;
use hj_sweep::Approach;

fn run(args: &[&str]) -> i32 {
    run_command(std::iter::once("hj-sweep").chain(args.iter().copied()))
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "10"]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex42", "--n", "40"]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--bogus"]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--approach", "3"]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--omega", "2.5"]), EXIT_USAGE);
    assert_eq!(run(&["study", "--problem", "ex1", "--meshes", "40,80", "--epsilon", "1e-6,1e-6,1e-6"]), EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "ex1"]), EXIT_USAGE);
    assert_eq!(run(&["--help"]), EXIT_OK);
}

#[test]
fn divergence_and_io_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--omega", "1.9", "--out", &out]), EXIT_SOLVER);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "nothing written on divergence");

    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let blocked = out_arg(&file.join("sub"));
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--max-iterations", "2", "--out", &blocked]), EXIT_IO);
    assert_eq!(run(&["solve", "--config", "/nonexistent/run.toml", "--problem", "ex1", "--n", "40"]), EXIT_IO);
}

#[test]
fn solve_and_dump_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert_eq!(run(&["solve", "--problem", "ex1", "--n", "40", "--out", &out, "--dump-field"]), EXIT_OK);
    for name in ["ex1_a1_n40_table.csv", "ex1_a1_n40_delta.csv", "ex1_a1_n40_field.csv"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let table = read_table_csv(&dir.path().join("ex1_a1_n40_table.csv")).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert!(table.rows[0].l1 < 1e-7);

    assert_eq!(run(&["dump", "--problem", "ex4", "--n", "40", "--approach", "2", "--hybrid", "--out", &out]), EXIT_OK);
    assert!(dir.path().join("ex4_a2_hybrid_n40_field.csv").is_file());
}

fn strip_wall_time(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn study_outputs_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = a.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"ex1\"\nmeshes = [40, 80]\napproach = 1\n").unwrap();
    for dir in [&a, &b] {
        let out = out_arg(dir.path());
        assert_eq!(run(&["study", "--config", cfg.to_str().unwrap(), "--out", &out]), EXIT_OK);
    }
    let table = |d: &tempfile::TempDir| d.path().join("ex1_a1_table.csv");
    assert_eq!(strip_wall_time(&table(&a)), strip_wall_time(&table(&b)));
    for n in [40, 80] {
        let name = format!("ex1_a1_n{n}_delta.csv");
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
    }
    let rows = read_table_csv(&table(&a)).unwrap().rows;
    assert_eq!(rows.len(), 2);
    assert!(rows[1].l1_order.unwrap() > 4.5, "{rows:?}");
}

#[test]
fn catalogue_epsilon_is_picked_per_mesh() {
    let opts = RunOptions { problem: Some("ex6a".into()), ..RunOptions::default() };
    let run = RunConfig::resolve(&opts, Some(vec![160])).unwrap();
    let (spec, _) = make_problem(ProblemId::Ex6a, 160).unwrap();
    assert_eq!(run.epsilon, EpsilonSetting::Catalogue);
    assert_eq!(run.solver_config(&spec, 0).weights.epsilon, 1e-4);
}

const FILE: &str = r#"
problem = "ex2"
n = 80
approach = 2
omega = 0.5
epsilon = 1e-3
gamma = [0.9, 0.05, 0.05]
delta_tol = 1e-10
max_iterations = 77
freeze_tol = 1e-3
aux_boost = 3.0
reference_n = 160
out = "from-file"

[problems.ex1]
omega = 0.6
max_iterations = 88
"#;

#[test]
fn config_file_and_sections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, FILE).unwrap();
    let base = RunOptions { config: Some(path.clone()), ..RunOptions::default() };

    let run = RunConfig::resolve(&base, None).unwrap();
    assert_eq!(run.problem, ProblemId::Ex2);
    assert_eq!(run.meshes, vec![80]);
    assert_eq!(run.approach, Approach::Two);
    assert_eq!(run.omega, Some(0.5));
    assert_eq!(run.epsilon, EpsilonSetting::Fixed(1e-3));
    assert_eq!(run.gamma, Some([0.9, 0.05, 0.05]));
    assert_eq!(run.delta_tol, Some(1e-10));
    assert_eq!(run.max_iterations, Some(77));
    assert_eq!(run.freeze_tol, Some(1e-3));
    assert_eq!(run.aux_boost, Some(3.0));
    assert_eq!(run.reference_n, Some(160));
    assert_eq!(run.out_dir, Path::new("from-file"));

    // the ex1 section applies on top of the top-level keys
    let ex1 = RunOptions { problem: Some("ex1".into()), ..base.clone() };
    let run = RunConfig::resolve(&ex1, None).unwrap();
    assert_eq!((run.problem, run.omega, run.max_iterations), (ProblemId::Ex1, Some(0.6), Some(88)));
    assert_eq!(run.delta_tol, Some(1e-10));

    std::fs::write(&path, "omgea = 1.0\n").unwrap();
    assert!(RunConfig::resolve(&base, Some(vec![40])).is_err());
}

#[test]
fn flags_override_every_file_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, FILE).unwrap();
    let base = RunOptions { config: Some(path), ..RunOptions::default() };
    let resolve = |opts: RunOptions| RunConfig::resolve(&opts, None).unwrap();

    assert_eq!(resolve(RunOptions { problem: Some("ex4".into()), ..base.clone() }).problem, ProblemId::Ex4);
    assert_eq!(RunConfig::resolve(&base, Some(vec![40, 80])).unwrap().meshes, vec![40, 80]);
    assert_eq!(resolve(RunOptions { approach: Some("1".into()), ..base.clone() }).approach, Approach::One);
    assert!(resolve(RunOptions { hybrid: true, ..base.clone() }).hybrid);
    assert_eq!(resolve(RunOptions { omega: Some(1.1), ..base.clone() }).omega, Some(1.1));
    assert_eq!(
        resolve(RunOptions { epsilon: Some(vec![1e-7]), ..base.clone() }).epsilon,
        EpsilonSetting::Fixed(1e-7)
    );
    assert_eq!(
        resolve(RunOptions { gamma: Some(vec![0.8, 0.1, 0.1]), ..base.clone() }).gamma,
        Some([0.8, 0.1, 0.1])
    );
    assert_eq!(resolve(RunOptions { delta_tol: Some(1e-13), ..base.clone() }).delta_tol, Some(1e-13));
    assert_eq!(resolve(RunOptions { max_iterations: Some(5), ..base.clone() }).max_iterations, Some(5));
    assert_eq!(resolve(RunOptions { freeze_tol: Some(1e-5), ..base.clone() }).freeze_tol, Some(1e-5));
    assert_eq!(resolve(RunOptions { aux_boost: Some(1.0), ..base.clone() }).aux_boost, Some(1.0));
    assert_eq!(resolve(RunOptions { reference_n: Some(320), ..base.clone() }).reference_n, Some(320));
    assert_eq!(resolve(RunOptions { out: Some("flag".into()), ..base.clone() }).out_dir, Path::new("flag"));
    assert!(resolve(RunOptions { dump_field: true, ..base.clone() }).dump_field);
}

#[test]
fn solver_config_applies_overrides() {
    let opts = RunOptions {
        problem: Some("ex1".into()),
        approach: Some("2".into()),
        hybrid: true,
        omega: Some(0.9),
        epsilon: Some(vec![1e-5, 1e-6]),
        gamma: Some(vec![0.9, 0.05, 0.05]),
        delta_tol: Some(1e-12),
        max_iterations: Some(9),
        freeze_tol: Some(1e-4),
        aux_boost: Some(1.5),
        ..RunOptions::default()
    };
    let run = RunConfig::resolve(&opts, Some(vec![40, 80])).unwrap();
    let (spec, _) = make_problem(ProblemId::Ex1, 80).unwrap();
    let cfg = run.solver_config(&spec, 1);
    assert_eq!(cfg.approach, Approach::Two);
    assert!(cfg.hybrid);
    assert_eq!((cfg.omega, cfg.weights.epsilon, cfg.weights.gamma), (0.9, 1e-6, [0.9, 0.05, 0.05]));
    assert_eq!((cfg.delta_tol, cfg.max_iterations, cfg.freeze_tol, cfg.aux_boost), (1e-12, 9, Some(1e-4), 1.5));
    assert_eq!(run.stem(), "ex1_a2_hybrid");
}
