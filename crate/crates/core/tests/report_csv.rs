use hj_sweep::grid::classify_points;
use hj_sweep::problems::{make_problem, ProblemId};
use hj_sweep::report::{
    convergence_orders, error_norms, format_number, norms, read_delta_csv, read_table_csv, write_csv_report,
    write_field_csv, ConvergenceTable, MeshResult, DELTA_HEADER, FIELD_HEADER, TABLE_HEADER,
};
use hj_sweep::SolutionField;
use proptest::prelude::*;

fn sample_table() -> ConvergenceTable {
    let rows = [
        (40, 6.794e-9, 2.1e-8, 45, 1e-6, 0.31),
        (80, 2.031e-10, 7.7e-10, 53, 1e-6, 1.2),
        (160, 6.259e-12, 2.6e-11, 81, 1e-6, 7.5),
    ];
    let results: Vec<MeshResult> = rows
        .iter()
        .map(|&(n, l1, linf, iterations, epsilon, wall_s)| MeshResult { n, l1, linf, iterations, epsilon, wall_s })
        .collect();
    ConvergenceTable::from_results(&results)
}

fn formatted(t: &ConvergenceTable) -> Vec<Vec<String>> {
    let o = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    t.rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                format_number(r.l1),
                o(r.l1_order),
                format_number(r.linf),
                o(r.linf_order),
                r.iterations.to_string(),
                format_number(r.epsilon),
                format_number(r.wall_s),
            ]
        })
        .collect()
}

#[test]
fn table_and_delta_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = sample_table();
    let delta = vec![0.5, 1.25e-3, 3.0e-9, 7.123456789012345e-15];
    let (tp, dp) = write_csv_report(&table, &delta, &dir.path().join("ex1_a1")).unwrap();
    assert!(tp.ends_with("ex1_a1_table.csv") && dp.ends_with("ex1_a1_delta.csv"));

    let back = read_table_csv(&tp).unwrap();
    assert_eq!(formatted(&back), formatted(&table));
    assert_eq!(back, table, "17 significant digits restore every double");
    assert_eq!(read_delta_csv(&dp).unwrap(), delta);

    let text = std::fs::read_to_string(&tp).unwrap();
    assert_eq!(text.lines().next().unwrap(), TABLE_HEADER.join(","));
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(2), Some(""));
}

#[test]
fn degenerate_reports() {
    let dir = tempfile::tempdir().unwrap();
    let one = ConvergenceTable::from_results(&[MeshResult {
        n: 40,
        l1: 1e-3,
        linf: 2e-3,
        iterations: 3,
        epsilon: 1e-6,
        wall_s: 0.1,
    }]);
    let (tp, dp) = write_csv_report(&one, &[], &dir.path().join("single")).unwrap();
    let table = std::fs::read_to_string(tp).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((fields[2], fields[4]), ("", ""));
    assert_eq!(std::fs::read_to_string(dp).unwrap().trim_end(), DELTA_HEADER.join(","));
}

#[test]
fn unwritable_path_reports_it() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("missing").join("x");
    let err = write_csv_report(&sample_table(), &[1.0], &prefix).unwrap_err();
    assert!(err.to_string().contains("missing"), "{err}");
}

#[test]
fn field_dump_schema() {
    let (spec, grid) = make_problem(ProblemId::Ex1, 40).unwrap();
    let cats = classify_points(&grid, &spec.gamma, &spec.preassign_boxes);
    let mut field = SolutionField::new(grid, cats);
    for (i, j) in grid.interior() {
        let k = grid.idx(i, j);
        [field.phi[k], field.u[k], field.v[k]] = (spec.prescribe)(grid.x(i), grid.y(j));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    write_field_csv(&field, &spec, &path).unwrap();
    let mut r = csv::Reader::from_path(&path).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), FIELD_HEADER.to_vec());
    let rows: Vec<csv::StringRecord> = r.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 40 * 40);
    // row-major, x fastest
    assert_eq!(&rows[0][0], &rows[40][0]);
    assert_eq!(&rows[0][1], &rows[39][1]);
    assert_eq!(&rows[0][2], &rows[0][5]);
    assert!(rows.iter().all(|r| ["I", "III", "IV1", "IV2"].contains(&&r[6])));
}

#[test]
fn error_norms_of_offset_field() {
    let (spec, grid) = make_problem(ProblemId::Ex1, 40).unwrap();
    let cats = classify_points(&grid, &spec.gamma, &spec.preassign_boxes);
    let mut field = SolutionField::new(grid, cats);
    let exact = spec.exact.clone().unwrap();
    for (i, j) in grid.interior() {
        field.phi[grid.idx(i, j)] = exact(grid.x(i), grid.y(j));
    }
    assert_eq!(error_norms(&field, &spec).unwrap(), (0.0, 0.0));
    for (i, j) in grid.interior() {
        field.phi[grid.idx(i, j)] -= 0.25;
    }
    let (l1, linf) = error_norms(&field, &spec).unwrap();
    assert!((l1 - 0.25).abs() < 1e-14 && (linf - 0.25).abs() < 1e-14);
}

proptest! {
    #[test]
    fn norms_ignore_order(mut e in prop::collection::vec(0.0f64..1.0, 1..50), seed in any::<u64>()) {
        let a = norms(e.iter().copied()).unwrap();
        let k = (seed as usize) % e.len();
        e.rotate_left(k);
        e.reverse();
        let b = norms(e.iter().copied()).unwrap();
        prop_assert!((a.0 - b.0).abs() <= 1e-15 && a.1 == b.1);
    }

    #[test]
    fn orders_ignore_uniform_scaling(
        e in prop::collection::vec(1e-12f64..1.0, 2..6),
        s in 1e-6f64..1e6,
    ) {
        let meshes: Vec<usize> = (0..e.len()).map(|k| 40 << k).collect();
        let scaled: Vec<f64> = e.iter().map(|v| v * s).collect();
        let (a, b) = (convergence_orders(&e, &meshes), convergence_orders(&scaled, &meshes));
        for (x, y) in a.iter().zip(&b) {
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
                (None, None) => {}
                _ => prop_assert!(false),
            }
        }
    }
}
