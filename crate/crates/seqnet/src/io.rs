//! File ingestion and emission: typed dataset CSV with an optional schema
//! sidecar, genotype matrices in token or allele-count form, kinship
//! matrices, and plain matrix CSV.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use seqnet_core::data::{
    Column, Dataset, Genotype, GenotypeTable, Kind, VariableMeta,
};
use seqnet_core::genomics::KinshipMatrix;
use seqnet_core::linalg::Matrix;
use seqnet_core::Error as CoreError;

use crate::{CliError, Result};

/// What to do with rows containing missing cells (empty or `NA`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Any missing cell is an error naming its position. The default:
    /// downstream tests assume complete cases.
    Reject,
    /// Rows with any missing cell are removed before validation.
    DropRow,
}

fn is_missing(token: &str) -> bool {
    token.is_empty() || token == "NA"
}

fn read_csv_records(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                CliError::Format(format!("cannot read {}: {e}", path.display()))
            }
            _ => CliError::Format(format!("{}: {e}", path.display())),
        })?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
        rows.push(record.iter().map(|s| s.to_string()).collect());
    }
    Ok((header, rows))
}

/// One schema line: `name,kind[,level1<level2<...]`.
fn parse_schema_line(line: &str, lineno: usize) -> Result<VariableMeta> {
    let mut parts = line.splitn(3, ',');
    let name = parts.next().unwrap_or("").trim();
    let kind = parts.next().unwrap_or("").trim();
    let levels_field = parts.next().unwrap_or("").trim();
    if name.is_empty() {
        return Err(CliError::Format(format!(
            "schema line {lineno}: empty variable name"
        )));
    }
    match kind {
        "continuous" => {
            if !levels_field.is_empty() {
                return Err(CliError::Format(format!(
                    "schema line {lineno}: continuous variables take no levels"
                )));
            }
            Ok(VariableMeta::continuous(name))
        }
        "discrete" | "ordinal" => {
            let levels: Vec<&str> =
                levels_field.split('<').map(str::trim).filter(|s| !s.is_empty()).collect();
            if levels.len() < 2 {
                return Err(CliError::Format(format!(
                    "schema line {lineno}: {kind} variable {name:?} needs at least \
                     two `<`-separated levels"
                )));
            }
            let mut meta = if kind == "discrete" {
                VariableMeta::discrete(name, &levels)
            } else {
                VariableMeta::ordinal(name, &levels)
            };
            // ordinal levels that are all numeric double as regression codes
            if kind == "ordinal" {
                let codes: Option<Vec<f64>> =
                    levels.iter().map(|l| l.parse::<f64>().ok()).collect();
                meta.numeric_codes = codes;
            }
            Ok(meta)
        }
        other => Err(CliError::Format(format!(
            "schema line {lineno}: unknown kind {other:?} (expected continuous, \
             discrete, or ordinal)"
        ))),
    }
}

fn load_schema(path: &Path) -> Result<Vec<VariableMeta>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_schema_line(l, i + 1))
        .collect()
}

fn infer_schema(names: &[String], rows: &[Vec<String>]) -> Vec<VariableMeta> {
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let numeric = rows.iter().all(|r| r[j].parse::<f64>().is_ok());
            if numeric {
                VariableMeta::continuous(name)
            } else {
                // unordered by construction; an order must come from a schema
                let distinct: BTreeSet<&str> =
                    rows.iter().map(|r| r[j].as_str()).collect();
                let levels: Vec<&str> = distinct.into_iter().collect();
                VariableMeta::discrete(name, &levels)
            }
        })
        .collect()
}

/// Load a dataset from a header-first CSV file. Column kinds come from the
/// sidecar schema when given (matched by name, order-independent) and are
/// inferred otherwise: all-numeric columns become continuous, the rest
/// discrete with lexicographically sorted levels. Inference never produces
/// ordinal columns; an order is information the data cannot supply.
pub fn load_dataset(
    path: &Path,
    schema: Option<&Path>,
    missing: MissingPolicy,
) -> Result<Dataset> {
    let (names, mut rows) = read_csv_records(path)?;
    if names.is_empty() {
        return Err(CliError::Format(format!(
            "{}: no columns (p >= 1)",
            path.display()
        )));
    }

    match missing {
        MissingPolicy::DropRow => {
            rows.retain(|r| !r.iter().any(|t| is_missing(t)));
        }
        MissingPolicy::Reject => {
            for (i, row) in rows.iter().enumerate() {
                if let Some(j) = row.iter().position(|t| is_missing(t)) {
                    return Err(CliError::Format(format!(
                        "{}: missing value at data row {}, column {:?} \
                         (pass --missing drop-row to remove such rows)",
                        path.display(),
                        i + 1,
                        names[j]
                    )));
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Format(format!(
            "{}: no data rows (n >= 1)",
            path.display()
        )));
    }

    let vars = match schema {
        Some(schema_path) => {
            let declared = load_schema(schema_path)?;
            // reorder to the CSV column order, demanding exactly one entry
            // per column
            names
                .iter()
                .map(|name| {
                    declared
                        .iter()
                        .find(|m| &m.name == name)
                        .cloned()
                        .ok_or_else(|| {
                            CliError::Format(format!(
                                "schema {} has no entry for column {name:?}",
                                schema_path.display()
                            ))
                        })
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => infer_schema(&names, &rows),
    };

    let mut cols = Vec::with_capacity(vars.len());
    for (j, meta) in vars.iter().enumerate() {
        let col = match meta.kind {
            Kind::Continuous => Column::Continuous(
                rows.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r[j].parse::<f64>().map_err(|_| {
                            CliError::Format(format!(
                                "{}: non-numeric token {:?} at data row {}, \
                                 continuous column {:?}",
                                path.display(),
                                r[j],
                                i + 1,
                                meta.name
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?,
            ),
            Kind::Discrete | Kind::Ordinal => Column::Categorical(
                rows.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        meta.level_index(&r[j]).map(|l| l as u32).ok_or_else(|| {
                            CliError::Core(CoreError::InvalidLevel {
                                row: i + 1,
                                column: meta.name.clone(),
                                token: r[j].clone(),
                            })
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?,
            ),
        };
        cols.push(col);
    }
    Ok(Dataset::new(vars, cols)?)
}

fn format_cell(v: f64) -> String {
    // shortest representation that parses back to the same value
    format!("{v}")
}

/// Write a dataset as a header-first CSV.
pub fn write_dataset(d: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| {
        CliError::Format(format!("cannot write {}: {e}", path.display()))
    })?;
    let names: Vec<&str> = d.variables().iter().map(|m| m.name.as_str()).collect();
    w.write_record(&names)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    for i in 0..d.n() {
        let mut record = Vec::with_capacity(d.p());
        for j in 0..d.p() {
            record.push(match d.column(j) {
                Column::Continuous(v) => format_cell(v[i]),
                Column::Categorical(v) => d.var(j).levels[v[i] as usize].clone(),
            });
        }
        w.write_record(&record)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::file(path, e))
}

/// Write the sidecar schema describing a dataset, one `name,kind,levels`
/// line per column.
pub fn write_schema(d: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    for meta in d.variables() {
        match meta.kind {
            Kind::Continuous => {
                out.push_str(&format!("{},continuous\n", meta.name));
            }
            kind => {
                out.push_str(&format!(
                    "{},{},{}\n",
                    meta.name,
                    if kind == Kind::Discrete { "discrete" } else { "ordinal" },
                    meta.levels.join("<")
                ));
            }
        }
    }
    fs::write(path, out).map_err(|e| CliError::file(path, e))
}

/// On-disk genotype representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenotypeFormat {
    /// CSV of AA/Aa/aa tokens with a header of SNP names.
    Tokens,
    /// Whitespace-separated matrix of 0/1/2 counts of the A allele with a
    /// header of SNP names, so 2 = AA, 1 = Aa, 0 = aa.
    Counts,
}

/// Which allele gets the capital label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlleleLabelling {
    /// Take the file's labels at face value. The default: independent of
    /// the sample.
    Alphabetical,
    /// Relabel per SNP so A is the sample-major allele (swaps the
    /// homozygote calls when the file's A is the rarer allele; ties keep
    /// the file labels).
    SampleMajor,
}

fn parse_genotype(token: &str) -> Option<Genotype> {
    match token {
        "AA" => Some(Genotype::AA),
        "Aa" | "aA" => Some(Genotype::Aa),
        "aa" => Some(Genotype::aa),
        _ => None,
    }
}

fn parse_count(token: &str) -> Option<Genotype> {
    match token {
        "2" => Some(Genotype::AA),
        "1" => Some(Genotype::Aa),
        "0" => Some(Genotype::aa),
        _ => None,
    }
}

fn relabel_major(names: &[String], rows: &mut [Vec<Genotype>]) {
    let n = rows.len();
    for j in 0..names.len() {
        let a_copies: usize = rows
            .iter()
            .map(|r| match r[j] {
                Genotype::AA => 2,
                Genotype::Aa => 1,
                Genotype::aa => 0,
            })
            .sum();
        if 2 * a_copies < 2 * n {
            // A is the minor allele here; swap the homozygote labels
            for r in rows.iter_mut() {
                r[j] = match r[j] {
                    Genotype::AA => Genotype::aa,
                    Genotype::aa => Genotype::AA,
                    het => het,
                };
            }
        }
    }
}

/// Load a genotype matrix in either on-disk form.
pub fn load_genotypes(
    path: &Path,
    format: GenotypeFormat,
    labelling: AlleleLabelling,
) -> Result<GenotypeTable> {
    let (names, token_rows) = match format {
        GenotypeFormat::Tokens => read_csv_records(path)?,
        GenotypeFormat::Counts => {
            let text = fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
            let mut lines = text.lines().filter(|l| !l.trim().is_empty());
            let header: Vec<String> = lines
                .next()
                .ok_or_else(|| {
                    CliError::Format(format!("{}: empty file", path.display()))
                })?
                .split_whitespace()
                .map(String::from)
                .collect();
            let rows: Vec<Vec<String>> = lines
                .map(|l| l.split_whitespace().map(String::from).collect())
                .collect();
            (header, rows)
        }
    };

    let parse = match format {
        GenotypeFormat::Tokens => parse_genotype,
        GenotypeFormat::Counts => parse_count,
    };
    let mut rows = Vec::with_capacity(token_rows.len());
    for (i, row) in token_rows.iter().enumerate() {
        if row.len() != names.len() {
            return Err(CliError::Format(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                i + 1,
                row.len(),
                names.len()
            )));
        }
        let mut calls = Vec::with_capacity(row.len());
        for (j, token) in row.iter().enumerate() {
            calls.push(parse(token).ok_or_else(|| {
                CliError::Format(format!(
                    "{}: invalid genotype {:?} at row {}, column {:?}",
                    path.display(),
                    token,
                    i + 1,
                    names[j]
                ))
            })?);
        }
        rows.push(calls);
    }
    if labelling == AlleleLabelling::SampleMajor {
        relabel_major(&names, &mut rows);
    }
    Ok(GenotypeTable::new(names, &rows)?)
}

/// Load a CSV whose columns are genotype tokens except one numeric trait
/// column. Returns the genotype table (trait column removed) and the trait
/// values in row order.
pub fn load_genotypes_with_trait(
    path: &Path,
    trait_name: &str,
    labelling: AlleleLabelling,
) -> Result<(GenotypeTable, Vec<f64>)> {
    let (names, token_rows) = read_csv_records(path)?;
    let trait_idx = names.iter().position(|n| n == trait_name).ok_or_else(|| {
        CliError::Core(CoreError::UnknownName(format!(
            "trait column {trait_name:?} not in {}",
            path.display()
        )))
    })?;
    let snp_names: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != trait_idx)
        .map(|(_, n)| n.clone())
        .collect();
    let mut rows = Vec::with_capacity(token_rows.len());
    let mut trait_values = Vec::with_capacity(token_rows.len());
    for (i, row) in token_rows.iter().enumerate() {
        if row.len() != names.len() {
            return Err(CliError::Format(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                i + 1,
                row.len(),
                names.len()
            )));
        }
        trait_values.push(row[trait_idx].parse::<f64>().map_err(|_| {
            CliError::Format(format!(
                "{}: non-numeric trait value {:?} at row {}",
                path.display(),
                row[trait_idx],
                i + 1
            ))
        })?);
        let mut calls = Vec::with_capacity(row.len() - 1);
        for (j, token) in row.iter().enumerate() {
            if j == trait_idx {
                continue;
            }
            calls.push(parse_genotype(token).ok_or_else(|| {
                CliError::Format(format!(
                    "{}: invalid genotype {:?} at row {}, column {:?}",
                    path.display(),
                    token,
                    i + 1,
                    names[j]
                ))
            })?);
        }
        rows.push(calls);
    }
    if labelling == AlleleLabelling::SampleMajor {
        relabel_major(&snp_names, &mut rows);
    }
    Ok((GenotypeTable::new(snp_names, &rows)?, trait_values))
}

/// Write a genotype table plus one continuous column as a single CSV.
pub fn write_genotypes_with_trait(
    g: &GenotypeTable,
    trait_name: &str,
    trait_values: &[f64],
    path: &Path,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| {
        CliError::Format(format!("cannot write {}: {e}", path.display()))
    })?;
    let mut header: Vec<String> = g.snp_names().to_vec();
    header.push(trait_name.to_string());
    w.write_record(&header)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    for i in 0..g.samples() {
        let mut record: Vec<String> = (0..g.snps())
            .map(|j| g.call(i, j).token().to_string())
            .collect();
        record.push(format_cell(trait_values[i]));
        w.write_record(&record)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::file(path, e))
}

/// Load a kinship matrix from a square numeric CSV. A header row plus a
/// row-label first column are detected (any non-numeric cell in the first
/// record) and stripped.
pub fn load_kinship(path: &Path) -> Result<KinshipMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Format(format!("cannot read {}: {e}", path.display())))?;
    let mut records: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
        records.push(record.iter().map(String::from).collect());
    }
    if records.is_empty() {
        return Err(CliError::Format(format!("{}: empty file", path.display())));
    }
    let labelled = records[0].iter().any(|t| t.parse::<f64>().is_err());
    let body: Vec<&[String]> = if labelled {
        records[1..].iter().map(|r| &r[1..]).collect()
    } else {
        records.iter().map(|r| &r[..]).collect()
    };
    let n = body.len();
    let mut values = Matrix::zeros(n, n);
    for (i, row) in body.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Format(format!(
                "{}: kinship matrix must be square, row {} has {} values for {} rows",
                path.display(),
                i + 1,
                row.len(),
                n
            )));
        }
        for (j, token) in row.iter().enumerate() {
            values.set(
                i,
                j,
                token.parse::<f64>().map_err(|_| {
                    CliError::Format(format!(
                        "{}: non-numeric kinship entry {token:?} at row {}, column {}",
                        path.display(),
                        i + 1,
                        j + 1
                    ))
                })?,
            );
        }
    }
    Ok(KinshipMatrix::new(values)?)
}

/// Write a named square matrix as CSV with a header row and a label column.
pub fn write_matrix(names: &[String], values: &Matrix, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| {
        CliError::Format(format!("cannot write {}: {e}", path.display()))
    })?;
    let mut header = vec![String::new()];
    header.extend(names.iter().cloned());
    w.write_record(&header)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    for (i, name) in names.iter().enumerate() {
        let mut record = vec![name.clone()];
        for j in 0..names.len() {
            record.push(format_cell(values.get(i, j)));
        }
        w.write_record(&record)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::file(path, e))
}
