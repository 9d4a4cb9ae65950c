use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use corrspec::estimators::{estimator_report, EstimatorReport};
use corrspec::factor_models::{sample_dataset, ModelConfig};
use corrspec::hp::{fisher_z, hp_filter, TimeSeries};
use corrspec::linalg::sym_eigvals;
use corrspec::mp_law::{Esd, MpCdf};
use corrspec::sample_stats::{cov_data, cov_theoretical, sample_matrices, Centering};
use corrspec::verify::{run_verify, VerifyJob};
use corrspec::{Matrix, MpParams};

use crate::csv_io::{emit, read_dataset, read_series, write_csv_lines, write_observations};
use crate::{CenteringArg, WhichMatrix};

pub const SIMULATE_SCHEMA: &str = "corrspec.simulate/1";
pub const ESTIMATE_SCHEMA: &str = "corrspec.estimate/1";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    n: usize,
    seed: Option<u64>,
    model: ModelConfig,
}

/// Sidecar written next to every simulated dataset; enough to reproduce
/// the file byte for byte.
#[derive(Serialize)]
struct SimulateMeta<'a> {
    schema: &'static str,
    model: &'a ModelConfig,
    p: usize,
    n: usize,
    seed: u64,
    orientation: &'static str,
}

pub fn simulate(config_path: &Path, out: &Path, seed_flag: Option<u64>) -> Result<i32> {
    let text = fs::read_to_string(config_path)
        .with_context(|| format!("read {}", config_path.display()))?;
    let config: SimulateConfig =
        toml::from_str(&text).with_context(|| format!("parse {}", config_path.display()))?;
    if config.n == 0 {
        bail!("config needs n >= 1");
    }
    let seed = seed_flag.or(config.seed).unwrap_or(0);
    let spec = config.model.build()?;
    let x = sample_dataset(&spec, config.n, seed)?;
    write_observations(out, &x)?;

    let meta = SimulateMeta {
        schema: SIMULATE_SCHEMA,
        model: &config.model,
        p: spec.p(),
        n: config.n,
        seed,
        orientation: "observations are rows, variables are columns",
    };
    let meta_path = sidecar_path(out);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("write {}", meta_path.display()))?;

    emit(&format!(
        "wrote {}: {} observations of {} variables (seed {seed})\n",
        out.display(),
        config.n,
        spec.p()
    ))?;
    Ok(0)
}

pub fn sidecar_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

#[derive(Serialize)]
struct EstimateDoc {
    schema: &'static str,
    report: EstimatorReport,
}

pub fn estimate(
    csv: &Path,
    clean: bool,
    threshold_only: bool,
    k_max: Option<usize>,
    json: bool,
) -> Result<i32> {
    let (x, headers) = read_dataset(csv)?;
    if x.cols() < 2 {
        bail!("need at least 2 observation rows, found {}", x.cols());
    }
    let x = drop_or_reject_flat_columns(x, &headers, clean)?;
    let (p, n) = (x.rows(), x.cols());
    let k_max = k_max.unwrap_or_else(|| (p.min(n) / 2).clamp(1, 8));
    let report = estimator_report(&x, k_max, threshold_only)?;
    if json {
        let doc = EstimateDoc { schema: ESTIMATE_SCHEMA, report };
        emit(&(serde_json::to_string_pretty(&doc)? + "\n"))?;
    } else {
        emit(&EstimatorReport::render_table(&[report]))?;
    }
    Ok(0)
}

/// A column with no variation has no correlation row; reject it by name,
/// or silently drop it under `--clean`.
fn drop_or_reject_flat_columns(x: Matrix, headers: &[String], clean: bool) -> Result<Matrix> {
    let flat = |i: usize| {
        let row = x.row(i);
        row.iter().all(|&v| v == row[0])
    };
    if !clean {
        if let Some(i) = (0..x.rows()).find(|&i| flat(i)) {
            bail!(
                "zero-variance column \"{}\" (column {} of {}); pass --clean to drop such columns",
                headers[i],
                i + 1,
                x.rows()
            );
        }
        return Ok(x);
    }
    let keep: Vec<usize> = (0..x.rows()).filter(|&i| !flat(i)).collect();
    if keep.len() == x.rows() {
        return Ok(x);
    }
    if keep.len() < 2 {
        bail!(
            "only {} column(s) with variation remain after cleaning",
            keep.len()
        );
    }
    eprintln!(
        "dropped {} zero-variance column(s)",
        x.rows() - keep.len()
    );
    let mut entries = Vec::with_capacity(keep.len() * x.cols());
    for &i in &keep {
        entries.extend_from_slice(x.row(i));
    }
    Ok(Matrix::new(keep.len(), x.cols(), entries)?)
}

pub fn verify(job_path: &Path, json: bool, out: Option<&Path>) -> Result<i32> {
    let text =
        fs::read_to_string(job_path).with_context(|| format!("read {}", job_path.display()))?;
    let job = VerifyJob::from_toml_str(&text)?;
    let report = run_verify(&job)?;
    if let Some(path) = out {
        fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("write {}", path.display()))?;
    }
    if json {
        emit(&(report.to_json() + "\n"))?;
    } else {
        emit(&report.render_table())?;
    }
    Ok(if report.all_pass() { 0 } else { 2 })
}

pub fn spectrum(
    csv: &Path,
    which: WhichMatrix,
    centering: CenteringArg,
    out: Option<&Path>,
) -> Result<i32> {
    let (x, _) = read_dataset(csv)?;
    let zero = vec![0.0; x.rows()];
    let matrices = sample_matrices(&x, resolve_centering(centering, &zero))?;
    let matrix = match which {
        WhichMatrix::Cov => &matrices.cov,
        WhichMatrix::Corr => &matrices.corr,
    };
    let eigs = sym_eigvals(matrix)?;
    let lines = eigs.values().iter().map(|v| format!("{v}"));
    write_csv_lines(out, "eigenvalue", lines)?;
    Ok(0)
}

pub fn hpfilter(csv: &Path, lambda: f64, fisher: bool, out: Option<&Path>) -> Result<i32> {
    let (values, label) = read_series(csv)?;
    let input = if fisher {
        let mut z = Vec::with_capacity(values.len());
        for (idx, &v) in values.iter().enumerate() {
            z.push(fisher_z(v).with_context(|| format!("--fisher-z at line {}", idx + 2))?);
        }
        z
    } else {
        values
    };
    let series = TimeSeries::new(input, label)?;
    let dec = hp_filter(&series, lambda)?;
    let lines = (0..series.values().len()).map(|t| {
        format!(
            "{},{},{}",
            series.values()[t],
            dec.trend.values()[t],
            dec.cycle.values()[t]
        )
    });
    write_csv_lines(out, "input,trend,cycle", lines)?;
    Ok(0)
}

pub fn mp_overlay(
    csv: &Path,
    scale: f64,
    centering: CenteringArg,
    points: usize,
    out: Option<&Path>,
) -> Result<i32> {
    let (x, _) = read_dataset(csv)?;
    let (p, n) = (x.rows(), x.cols());
    let cov = match centering {
        CenteringArg::Data => cov_data(&x)?,
        CenteringArg::Zero => cov_theoretical(&x, &vec![0.0; p])?,
    };
    let eigs = sym_eigvals(&cov)?;
    let cdf = MpCdf::new(MpParams::new(p as f64 / n as f64, scale)?);
    let esd = Esd::from_values(eigs.values())?;

    // reference grid plus the eigenvalues themselves, so the empirical
    // CDF's jumps land on emitted points
    let mut grid: Vec<f64> = cdf.curve(points)?.into_iter().map(|(x, _)| x).collect();
    grid.extend(eigs.values().iter().copied());
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    let lines = grid
        .into_iter()
        .map(|g| format!("{g},{},{}", esd.cdf(g), cdf.eval(g)));
    write_csv_lines(out, "x,esd,mp", lines)?;
    Ok(0)
}

fn resolve_centering(arg: CenteringArg, zero: &[f64]) -> Centering<'_, f64> {
    match arg {
        CenteringArg::Data => Centering::Data,
        CenteringArg::Zero => Centering::Theoretical(zero),
    }
}
