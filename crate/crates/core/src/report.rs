//! Error norms, convergence tables and CSV output.

use std::fs::File;
use std::path::{Path, PathBuf};

use crate::error::{HjError, Result};
use crate::problems::{ErrorMask, ProblemSpec};
use crate::sweeper::SolutionField;

pub const TABLE_HEADER: [&str; 8] = ["N", "L1", "L1_order", "Linf", "Linf_order", "iter", "epsilon", "wall_s"];
pub const DELTA_HEADER: [&str; 2] = ["iteration", "delta"];
pub const FIELD_HEADER: [&str; 7] = ["x", "y", "phi", "u", "v", "exact", "category"];

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub iterations: usize,
    pub epsilon: f64,
    pub wall_s: f64,
}

/// One row per mesh of a refinement study.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<TableRow>,
}

/// Per-mesh measurements feeding a [`ConvergenceTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshResult {
    pub n: usize,
    pub l1: f64,
    pub linf: f64,
    pub iterations: usize,
    pub epsilon: f64,
    pub wall_s: f64,
}

impl ConvergenceTable {
    /// Builds the table, computing orders between consecutive meshes.
    pub fn from_results(results: &[MeshResult]) -> Self {
        let meshes: Vec<usize> = results.iter().map(|r| r.n).collect();
        let l1: Vec<f64> = results.iter().map(|r| r.l1).collect();
        let linf: Vec<f64> = results.iter().map(|r| r.linf).collect();
        let (o1, oinf) = (convergence_orders(&l1, &meshes), convergence_orders(&linf, &meshes));
        let rows = results
            .iter()
            .enumerate()
            .map(|(k, r)| TableRow {
                n: r.n,
                l1: r.l1,
                l1_order: o1[k],
                linf: r.linf,
                linf_order: oinf[k],
                iterations: r.iterations,
                epsilon: r.epsilon,
                wall_s: r.wall_s,
            })
            .collect();
        Self { rows }
    }
}

/// Mask-averaged L1 and maximum error of `φ` against the problem's exact solution.
pub fn error_norms(field: &SolutionField, spec: &ProblemSpec) -> Result<(f64, f64)> {
    let exact = spec.exact.as_ref().ok_or_else(|| HjError::NoClosedForm(spec.id.to_string()))?;
    error_norms_against(field, &spec.mask, &**exact)
}

/// Mask-averaged L1 and maximum error of `φ` against an arbitrary reference.
pub fn error_norms_against(
    field: &SolutionField,
    mask: &ErrorMask,
    reference: &dyn Fn(f64, f64) -> f64,
) -> Result<(f64, f64)> {
    let grid = &field.grid;
    let errors = grid.interior().filter_map(|(i, j)| {
        let (x, y) = (grid.x(i), grid.y(j));
        mask.contains(x, y).then(|| (field.phi_at(i, j) - reference(x, y)).abs())
    });
    norms(errors)
}

/// Points per axis of the interpolation stencil in [`interpolate_phi`].
const INTERP_POINTS: usize = 8;

/// Tensor-product Lagrange interpolation of `φ` (degree 7 per axis) at
/// `(x, y)`, using domain nodes only.
pub fn interpolate_phi(field: &SolutionField, x: f64, y: f64) -> f64 {
    let grid = &field.grid;
    let (gw, n, h) = (grid.ghost_width, grid.n, grid.h);
    let m = INTERP_POINTS.min(n);
    let stencil = |t: f64, t0: f64| -> (usize, [f64; INTERP_POINTS]) {
        let s = ((t - t0) / h).floor() as isize - (m as isize / 2 - 1);
        let s = s.clamp(0, (n - m) as isize) as usize;
        let mut w = [0.0; INTERP_POINTS];
        for (a, wa) in w.iter_mut().enumerate().take(m) {
            let ta = t0 + (s + a) as f64 * h;
            *wa = (0..m)
                .filter(|&b| b != a)
                .map(|b| (t - (t0 + (s + b) as f64 * h)) / (ta - (t0 + (s + b) as f64 * h)))
                .product();
        }
        (s + gw, w)
    };
    let (si, wx) = stencil(x, grid.xmin);
    let (sj, wy) = stencil(y, grid.ymin);
    let mut acc = 0.0;
    for b in 0..m {
        let row: f64 = (0..m).map(|a| wx[a] * field.phi[grid.idx(si + a, sj + b)]).sum();
        acc += wy[b] * row;
    }
    acc
}

/// `(mean, max)` of a sequence of absolute errors.
pub fn norms(errors: impl IntoIterator<Item = f64>) -> Result<(f64, f64)> {
    let (mut sum, mut max, mut count) = (0.0, 0.0f64, 0usize);
    for e in errors {
        sum += e;
        max = max.max(e);
        count += 1;
    }
    if count == 0 {
        return Err(HjError::EmptyMask);
    }
    Ok((sum / count as f64, max))
}

/// Observed orders `log(e_{k-1}/e_k) / log(N_k/N_{k-1})`; `None` for the first
/// mesh and wherever an error is not positive.
pub fn convergence_orders(errors: &[f64], meshes: &[usize]) -> Vec<Option<f64>> {
    assert_eq!(errors.len(), meshes.len(), "one error per mesh");
    (0..errors.len())
        .map(|k| {
            if k == 0 || !(errors[k] > 0.0 && errors[k - 1] > 0.0) {
                return None;
            }
            let ratio = meshes[k] as f64 / meshes[k - 1] as f64;
            Some((errors[k - 1] / errors[k]).ln() / ratio.ln())
        })
        .collect()
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_order(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HjError + '_ {
    move |source| HjError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> HjError + '_ {
    move |source| HjError::Csv { path: path.to_path_buf(), source }
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes `<prefix>_table.csv` and `<prefix>_delta.csv`, returning both paths.
pub fn write_csv_report(table: &ConvergenceTable, delta_history: &[f64], prefix: &Path) -> Result<(PathBuf, PathBuf)> {
    let stem = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let table_path = prefix.with_file_name(format!("{stem}_table.csv"));
    let delta_path = prefix.with_file_name(format!("{stem}_delta.csv"));
    write_table_csv(table, &table_path)?;
    write_delta_csv(delta_history, &delta_path)?;
    Ok((table_path, delta_path))
}

pub fn write_table_csv(table: &ConvergenceTable, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(TABLE_HEADER).map_err(csv_err(path))?;
    for r in &table.rows {
        w.write_record([
            r.n.to_string(),
            format_number(r.l1),
            format_order(r.l1_order),
            format_number(r.linf),
            format_order(r.linf_order),
            r.iterations.to_string(),
            format_number(r.epsilon),
            format_number(r.wall_s),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_delta_csv(delta_history: &[f64], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(DELTA_HEADER).map_err(csv_err(path))?;
    for (k, d) in delta_history.iter().enumerate() {
        w.write_record([(k + 1).to_string(), format_number(*d)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn parse<T: std::str::FromStr>(path: &Path, field: &str) -> Result<T> {
    field.parse().map_err(|_| HjError::Evaluation(format!("{}: cannot parse `{field}`", path.display())))
}

fn parse_order(path: &Path, field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse(path, field).map(Some)
    }
}

fn reader(path: &Path, header: &[&str]) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut r = csv::Reader::from_reader(file);
    let found = r.headers().map_err(csv_err(path))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(HjError::Evaluation(format!("{}: unexpected header {found:?}", path.display())));
    }
    Ok(r)
}

pub fn read_table_csv(path: &Path) -> Result<ConvergenceTable> {
    let mut r = reader(path, &TABLE_HEADER)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        rows.push(TableRow {
            n: parse(path, &rec[0])?,
            l1: parse(path, &rec[1])?,
            l1_order: parse_order(path, &rec[2])?,
            linf: parse(path, &rec[3])?,
            linf_order: parse_order(path, &rec[4])?,
            iterations: parse(path, &rec[5])?,
            epsilon: parse(path, &rec[6])?,
            wall_s: parse(path, &rec[7])?,
        });
    }
    Ok(ConvergenceTable { rows })
}

pub fn read_delta_csv(path: &Path) -> Result<Vec<f64>> {
    let mut r = reader(path, &DELTA_HEADER)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        out.push(parse(path, &rec[1])?);
    }
    Ok(out)
}

/// Dumps domain nodes row by row (`y` outer, `x` inner); `exact` is empty
/// when the problem has no closed form.
pub fn write_field_csv(field: &SolutionField, spec: &ProblemSpec, path: &Path) -> Result<()> {
    let grid = &field.grid;
    let mut w = writer(path)?;
    w.write_record(FIELD_HEADER).map_err(csv_err(path))?;
    for (i, j) in grid.interior() {
        let (x, y) = (grid.x(i), grid.y(j));
        let k = grid.idx(i, j);
        let exact = spec.exact.as_ref().map(|e| format_number(e(x, y))).unwrap_or_default();
        w.write_record([
            format_number(x),
            format_number(y),
            format_number(field.phi[k]),
            format_number(field.u[k]),
            format_number(field.v[k]),
            exact,
            field.categories.labels[k].label().to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_arithmetic() {
        assert_eq!(norms([0.1, 0.3]).unwrap(), (0.2, 0.3));
        assert_eq!(norms([0.0, 0.0]).unwrap(), (0.0, 0.0));
        assert!(matches!(norms([]), Err(HjError::EmptyMask)));
    }

    #[test]
    fn order_cases() {
        let o = convergence_orders(&[1e-2, 3.125e-4], &[40, 80]);
        assert!(o[0].is_none() && (o[1].unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(convergence_orders(&[2e-3, 2e-3], &[40, 80])[1], Some(0.0));
        // inputs carry three significant digits, so the order is good to ~1.5e-2
        let o = convergence_orders(&[3.80e-8, 1.92e-10], &[80, 160]);
        assert!((o[1].unwrap() - 7.62).abs() < 1.5e-2);
        assert_eq!(convergence_orders(&[1e-3, 0.0], &[40, 80])[1], None);
    }
}
