use std::collections::BTreeMap;
use std::path::Path;

use casimir_core::materials::{MaterialModel, Table};

use crate::config::{MaterialConfig, RunConfig};
use crate::error::{CliError, CliResult};

/// Reads a tabulated material: a CSV file with header `kappa,eps` or
/// `kappa,eps,mu` (any column order); μ defaults to 1.
pub fn read_table(path: &Path) -> CliResult<Table> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_table(file, path)
}

pub fn parse_table<R: std::io::Read>(reader: R, path: &Path) -> CliResult<Table> {
    let fail = |message: String| CliError::Table { path: path.to_path_buf(), message };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let headers = rdr.headers().map_err(|e| fail(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (ik, ie, im) = match (col("kappa"), col("eps"), col("mu")) {
        (Some(k), Some(e), m) => (k, e, m),
        _ => return Err(fail("header must name the columns kappa and eps (and optionally mu)".into())),
    };
    let (mut kappa, mut eps, mut mu) = (Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| fail(e.to_string()))?;
        // header is line 1
        let line = rec.position().map(|p| p.line()).unwrap_or(row as u64 + 2);
        let num = |i: usize, name: &str| -> CliResult<f64> {
            let s = rec.get(i).ok_or_else(|| fail(format!("line {line}: missing {name}")))?;
            s.parse::<f64>().map_err(|_| fail(format!("line {line}: {name} = {s:?} is not a number")))
        };
        kappa.push(num(ik, "kappa")?);
        eps.push(num(ie, "eps")?);
        mu.push(match im {
            Some(i) => num(i, "mu")?,
            None => 1.0,
        });
    }
    Table::new(kappa, eps, mu).map_err(|e| fail(e.to_string()))
}

/// Every material the configuration can refer to, keyed by name. Table paths
/// are resolved against `base`.
pub fn resolve(cfg: &RunConfig, base: &Path) -> CliResult<BTreeMap<String, MaterialModel>> {
    let mut out = BTreeMap::new();
    out.insert("vacuum".to_string(), MaterialModel::Vacuum);
    out.insert("pec".to_string(), MaterialModel::PerfectConductor);
    for (name, m) in &cfg.materials {
        let at = || format!("materials.{name}");
        let model = match m {
            MaterialConfig::Vacuum => MaterialModel::Vacuum,
            MaterialConfig::PerfectConductor => MaterialModel::PerfectConductor,
            MaterialConfig::Constant { eps, mu } => {
                MaterialModel::constant(*eps, *mu).map_err(|e| CliError::config(at(), e.to_string()))?
            }
            MaterialConfig::TwoLevelAtom { alpha0, d10 } => MaterialModel::TwoLevelAtom { alpha0: *alpha0, d10: *d10 },
            MaterialConfig::Tabulated { path } => MaterialModel::Tabulated(read_table(&base.join(path))?),
        };
        out.insert(name.clone(), model);
    }
    Ok(out)
}
