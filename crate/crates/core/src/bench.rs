//! Size sweeps, CSV output and least-squares scaling fits.

use rayon::prelude::*;

use crate::circuit::{metrics, LatencyModel};
use crate::dependence::Mode;
use crate::error::ConstraintError;
use crate::{compile, Arch};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub arch: Arch,
    pub size: usize,
    /// Logical qubit count.
    pub n: usize,
    pub depth_steps: u64,
    pub depth_weighted: u64,
    pub swaps: usize,
}

/// Compiles every size in parallel; rows come back in input order.
pub fn run(arch: Arch, sizes: &[usize], mode: Mode, weighted: &LatencyModel) -> Result<Vec<BenchRow>, ConstraintError> {
    sizes
        .par_iter()
        .map(|&size| {
            let c = compile(arch, size, mode)?;
            let steps = metrics(&c.circuit, &LatencyModel::nisq());
            let w = metrics(&c.circuit, weighted);
            Ok(BenchRow {
                arch,
                size,
                n: c.circuit.n_logical,
                depth_steps: steps.depth,
                depth_weighted: w.depth,
                swaps: steps.swap_count,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "arch,n,depth_steps,depth_weighted,swaps";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.arch.name(), r.n, r.depth_steps, r.depth_weighted, r.swaps));
    }
    out
}

/// Least squares over two basis functions: returns `(p, q)` minimising
/// `sum (y - p*f(x) - q*g(x))^2`.
fn fit2(xs: &[f64], ys: &[f64], f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let (mut ff, mut fg, mut gg, mut fy, mut gy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (a, b) = (f(x), g(x));
        ff += a * a;
        fg += a * b;
        gg += b * b;
        fy += a * y;
        gy += b * y;
    }
    let det = ff * gg - fg * fg;
    if det.abs() < 1e-12 * ff.max(1.0) * gg.max(1.0) {
        return None;
    }
    Some(((fy * gg - gy * fg) / det, (ff * gy - fg * fy) / det))
}

/// `y = a*x + b`.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    fit2(xs, ys, |x| x, |_| 1.0)
}

/// `y = a*x + c*sqrt(x)`.
pub fn fit_sqrt(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    fit2(xs, ys, |x| x, f64::sqrt)
}

/// Fit description for a sweep: Sycamore uses the square-root model, others the affine one.
pub fn fit_report(rows: &[BenchRow]) -> Option<String> {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let steps: Vec<f64> = rows.iter().map(|r| r.depth_steps as f64).collect();
    let weighted: Vec<f64> = rows.iter().map(|r| r.depth_weighted as f64).collect();
    let arch = rows.first()?.arch;
    let (model, fit): (&str, fn(&[f64], &[f64]) -> Option<(f64, f64)>) = match arch {
        Arch::Sycamore => ("a*N + c*sqrt(N)", fit_sqrt),
        _ => ("a*N + b", fit_linear),
    };
    let (a, b) = fit(&xs, &steps)?;
    let (wa, wb) = fit(&xs, &weighted)?;
    Some(format!(
        "fit {model}: steps a={a:.4} second={b:.4}; weighted a={wa:.4} second={wb:.4}"
    ))
}

pub fn gnuplot_script(csv_path: &str, arch: Arch) -> String {
    format!(
        "set datafile separator ','\n\
         set key left top\n\
         set xlabel 'N'\n\
         set ylabel 'depth'\n\
         set title '{name}'\n\
         plot '{csv_path}' every ::1 using 2:3 with linespoints title 'steps', \\\n     \
         '{csv_path}' every ::1 using 2:4 with linespoints title 'weighted'\n",
        name = arch.name()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs = [1.0, 2.0, 5.0, 9.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x - 2.0).collect();
        let (a, b) = fit_linear(&xs, &ys).unwrap();
        assert!((a - 3.5).abs() < 1e-9 && (b + 2.0).abs() < 1e-9);
    }

    #[test]
    fn sqrt_model_is_recovered() {
        let xs = [16.0, 36.0, 64.0, 100.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 7.0 * x + 4.0 * x.sqrt()).collect();
        let (a, c) = fit_sqrt(&xs, &ys).unwrap();
        assert!((a - 7.0).abs() < 1e-9 && (c - 4.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_fit() {
        assert_eq!(fit_linear(&[2.0, 2.0], &[1.0, 3.0]), None);
    }

    #[test]
    fn csv_rows() {
        let rows = run(Arch::Lnn, &[4, 8], Mode::Strict, &LatencyModel::nisq()).unwrap();
        let text = to_csv(&rows);
        assert_eq!(text, "arch,n,depth_steps,depth_weighted,swaps\nlnn,4,10,10,6\nlnn,8,26,26,28\n");
    }
}
