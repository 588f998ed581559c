//! Counts CSV reading and writing plus per-step density files.

use anyhow::{bail, Context, Result};
use qlbw_core::lattice::AXIS_NAMES;
use qlbw_core::{export_vtk, Counts};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

pub type Density = BTreeMap<Vec<usize>, f64>;

/// `step,x,y[,z],count` with one row per non-zero outcome, steps in order.
pub fn write_counts_csv(path: &Path, num_dims: usize, steps: &[(usize, &Counts)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = vec!["step"];
    header.extend(&AXIS_NAMES[..num_dims]);
    header.push("count");
    w.write_record(&header)?;
    for (step, counts) in steps {
        for (position, value) in &counts.values {
            let mut row = vec![step.to_string()];
            row.extend(position.iter().map(usize::to_string));
            row.push(value.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a counts CSV back into per-step densities.
pub fn read_counts_csv(path: &Path, num_dims: usize) -> Result<BTreeMap<usize, Density>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = r.headers()?.clone();
    if headers.len() != num_dims + 2 {
        bail!(
            "{}: expected {} columns for a {num_dims}D lattice, found {}",
            path.display(),
            num_dims + 2,
            headers.len()
        );
    }
    let mut out: BTreeMap<usize, Density> = BTreeMap::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let parse = |i: usize| -> Result<usize> {
            record[i]
                .parse()
                .with_context(|| format!("{} row {}: bad integer `{}`", path.display(), line + 2, &record[i]))
        };
        let step = parse(0)?;
        let position = (1..=num_dims).map(parse).collect::<Result<Vec<_>>>()?;
        let value: f64 = record[num_dims + 1]
            .parse()
            .with_context(|| format!("{} row {}: bad count", path.display(), line + 2))?;
        out.entry(step).or_default().insert(position, value);
    }
    Ok(out)
}

pub fn density_file_name(step: usize) -> String {
    format!("density_{step:04}.vtk")
}

pub fn write_density(dir: &Path, step: usize, density: &Density, dims: &[usize]) -> Result<String> {
    let name = density_file_name(step);
    fs::write(dir.join(&name), export_vtk(density, dims)?).with_context(|| format!("writing {name}"))?;
    Ok(name)
}
