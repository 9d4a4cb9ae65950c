//! CSV ingestion and emission. Files carry a header row and observations
//! as rows; ingestion transposes into the library's variables-as-rows
//! layout. Numbers are written in shortest round-trip form, so a file is
//! a pure function of the values it encodes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use corrspec::Matrix;

/// Reads a dataset: returns the p x n matrix (variables as rows) and the
/// column names from the header.
pub fn read_dataset(path: &Path) -> Result<(Matrix, Vec<String>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("open {}", path.display()))?;
    let headers: Vec<String> = rdr
        .headers()
        .with_context(|| format!("read header of {}", path.display()))?
        .iter()
        .map(str::to_string)
        .collect();
    let p = headers.len();
    if p == 0 {
        bail!("{}: empty header", path.display());
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); p];
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 2; // header is line 1
        let record = record.with_context(|| format!("{} line {line}", path.display()))?;
        if record.len() != p {
            bail!(
                "{} line {line}: {} fields, header has {p}",
                path.display(),
                record.len()
            );
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().with_context(|| {
                format!(
                    "{} line {line}, column \"{}\": {field:?} is not a number",
                    path.display(),
                    headers[j]
                )
            })?;
            columns[j].push(v);
        }
    }
    let n = columns[0].len();
    if n == 0 {
        bail!("{}: no observation rows", path.display());
    }
    let mut entries = Vec::with_capacity(p * n);
    for col in &columns {
        entries.extend_from_slice(col);
    }
    let x = Matrix::new(p, n, entries)
        .with_context(|| format!("{}: values must be finite", path.display()))?;
    Ok((x, headers))
}

/// Reads a single-column CSV series; returns the values and the header name.
pub fn read_series(path: &Path) -> Result<(Vec<f64>, String)> {
    let (x, headers) = read_dataset(path)?;
    if headers.len() != 1 {
        bail!(
            "{}: expected a single column, found {}",
            path.display(),
            headers.len()
        );
    }
    Ok((x.row(0).to_vec(), headers.into_iter().next().unwrap()))
}

/// Writes a dataset as observations-as-rows CSV with header `v1..vp`.
pub fn write_observations(path: &Path, x: &Matrix) -> Result<()> {
    let (p, n) = (x.rows(), x.cols());
    let file = File::create(path).with_context(|| format!("create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    let header: Vec<String> = (1..=p).map(|i| format!("v{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for j in 0..n {
        line.clear();
        for i in 0..p {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format!("{}", x.get(i, j)));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes to stdout, surfacing failures (notably closed pipes) as
/// errors instead of panics.
pub fn emit(text: &str) -> Result<()> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Writes header + lines to a file, or to stdout when no path is given.
pub fn write_csv_lines<I>(dest: Option<&Path>, header: &str, lines: I) -> Result<()>
where
    I: IntoIterator<Item = String>,
{
    match dest {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "{header}")?;
            for line in lines {
                writeln!(w, "{line}")?;
            }
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            writeln!(w, "{header}")?;
            for line in lines {
                writeln!(w, "{line}")?;
            }
        }
    }
    Ok(())
}
