//! Typed rectangular data: column-typed datasets, genotype tables, SNP
//! recoding, the Box-Cox transform, and stratified contingency tables.
//!
//! Storage is column major with categorical cells held as level indices,
//! because every consumer (tests, learners, estimators) streams columns.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Measurement scale of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Continuous,
    Discrete,
    Ordinal,
}

impl Kind {
    pub fn is_categorical(self) -> bool {
        matches!(self, Kind::Discrete | Kind::Ordinal)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Continuous => "continuous",
            Kind::Discrete => "discrete",
            Kind::Ordinal => "ordinal",
        })
    }
}

/// Name, kind, and (for categorical variables) the ordered level labels.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMeta {
    pub name: String,
    pub kind: Kind,
    /// Ordered level labels; empty for continuous variables. For ordinal
    /// variables the storage order IS the total order.
    pub levels: Vec<String>,
    /// Optional per-level numeric value, set by SNP recoding so categorical
    /// columns can also enter regressions.
    pub numeric_codes: Option<Vec<f64>>,
}

impl VariableMeta {
    pub fn continuous(name: &str) -> Self {
        VariableMeta {
            name: name.to_string(),
            kind: Kind::Continuous,
            levels: Vec::new(),
            numeric_codes: None,
        }
    }

    pub fn discrete(name: &str, levels: &[&str]) -> Self {
        VariableMeta {
            name: name.to_string(),
            kind: Kind::Discrete,
            levels: levels.iter().map(|s| s.to_string()).collect(),
            numeric_codes: None,
        }
    }

    pub fn ordinal(name: &str, levels: &[&str]) -> Self {
        VariableMeta {
            name: name.to_string(),
            kind: Kind::Ordinal,
            levels: levels.iter().map(|s| s.to_string()).collect(),
            numeric_codes: None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            Kind::Continuous => {
                if !self.levels.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "continuous variable {:?} must not declare levels",
                        self.name
                    )));
                }
            }
            Kind::Discrete | Kind::Ordinal => {
                if self.levels.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "categorical variable {:?} needs at least one level",
                        self.name
                    )));
                }
                for (i, a) in self.levels.iter().enumerate() {
                    if self.levels[i + 1..].contains(a) {
                        return Err(Error::InvalidArgument(format!(
                            "variable {:?} repeats level {a:?}",
                            self.name
                        )));
                    }
                }
            }
        }
        if let Some(codes) = &self.numeric_codes {
            if codes.len() != self.levels.len() {
                return Err(Error::InvalidArgument(format!(
                    "variable {:?} has {} numeric codes for {} levels",
                    self.name,
                    codes.len(),
                    self.levels.len()
                )));
            }
        }
        Ok(())
    }

    pub fn level_index(&self, token: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == token)
    }
}

/// One column of data, matching its variable's kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Continuous(Vec<f64>),
    /// Level indices into the variable's `levels`.
    Categorical(Vec<u32>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Continuous(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Column-typed rectangular data; the universal input of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    vars: Vec<VariableMeta>,
    cols: Vec<Column>,
    n: usize,
    genotype_coded: bool,
}

impl Dataset {
    pub fn new(vars: Vec<VariableMeta>, cols: Vec<Column>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::DataShape("p >= 1 violated: no variables".into()));
        }
        if vars.len() != cols.len() {
            return Err(Error::DataShape(format!(
                "{} variables vs {} columns",
                vars.len(),
                cols.len()
            )));
        }
        let n = cols[0].len();
        if n == 0 {
            return Err(Error::DataShape("n >= 1 violated: no rows".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            v.validate()?;
            if vars[i + 1..].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate variable name {:?}",
                    v.name
                )));
            }
        }
        for (v, c) in vars.iter().zip(&cols) {
            if c.len() != n {
                return Err(Error::DataShape(format!(
                    "column {:?} has {} rows, expected {n}",
                    v.name,
                    c.len()
                )));
            }
            match (v.kind, c) {
                (Kind::Continuous, Column::Continuous(vals)) => {
                    if let Some(row) = vals.iter().position(|x| x.is_nan()) {
                        return Err(Error::DataShape(format!(
                            "column {:?} holds NaN at row {row}",
                            v.name
                        )));
                    }
                }
                (Kind::Discrete | Kind::Ordinal, Column::Categorical(idx)) => {
                    let k = v.levels.len() as u32;
                    if let Some(row) = idx.iter().position(|i| *i >= k) {
                        return Err(Error::InvalidLevel {
                            row,
                            column: v.name.clone(),
                            token: format!("#{}", idx[row]),
                        });
                    }
                }
                _ => {
                    return Err(Error::KindMismatch(format!(
                        "column {:?} storage does not match its declared kind",
                        v.name
                    )));
                }
            }
        }
        Ok(Dataset { vars, cols, n, genotype_coded: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[VariableMeta] {
        &self.vars
    }

    pub fn var(&self, idx: usize) -> &VariableMeta {
        &self.vars[idx]
    }

    pub fn column(&self, idx: usize) -> &Column {
        &self.cols[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// True when the columns came from SNP recoding; the CLI uses this to
    /// surface the kinship caveat for independence-test workflows.
    pub fn is_genotype_coded(&self) -> bool {
        self.genotype_coded
    }

    pub fn mark_genotype_coded(&mut self) {
        self.genotype_coded = true;
    }

    /// Column as numbers: continuous values verbatim, categorical columns
    /// through their per-level numeric codes when present.
    pub fn numeric_column(&self, idx: usize) -> Result<Vec<f64>> {
        match (&self.cols[idx], &self.vars[idx].numeric_codes) {
            (Column::Continuous(v), _) => Ok(v.clone()),
            (Column::Categorical(ix), Some(codes)) => {
                Ok(ix.iter().map(|i| codes[*i as usize]).collect())
            }
            (Column::Categorical(_), None) => Err(Error::KindMismatch(format!(
                "column {:?} is categorical without numeric codes",
                self.vars[idx].name
            ))),
        }
    }

    pub fn push_column(&mut self, meta: VariableMeta, col: Column) -> Result<()> {
        meta.validate()?;
        if self.vars.iter().any(|v| v.name == meta.name) {
            return Err(Error::InvalidArgument(format!(
                "duplicate variable name {:?}",
                meta.name
            )));
        }
        if col.len() != self.n {
            return Err(Error::DataShape(format!(
                "column {:?} has {} rows, expected {}",
                meta.name,
                col.len(),
                self.n
            )));
        }
        self.vars.push(meta);
        self.cols.push(col);
        // Revalidate cell/kind pairing on the appended column only.
        let idx = self.vars.len() - 1;
        let kind_ok = matches!(
            (self.vars[idx].kind, &self.cols[idx]),
            (Kind::Continuous, Column::Continuous(_))
                | (Kind::Discrete | Kind::Ordinal, Column::Categorical(_))
        );
        if !kind_ok {
            self.vars.pop();
            self.cols.pop();
            return Err(Error::KindMismatch("appended column storage mismatch".into()));
        }
        Ok(())
    }

    /// Replace the values of column `idx` in place; storage kind and length
    /// must match. Used by the permutation machinery, which swaps a column
    /// for a reshuffled copy many times.
    pub(crate) fn set_column_values(&mut self, idx: usize, col: Column) {
        debug_assert_eq!(col.len(), self.n);
        debug_assert!(matches!(
            (self.vars[idx].kind, &col),
            (Kind::Continuous, Column::Continuous(_))
                | (Kind::Discrete | Kind::Ordinal, Column::Categorical(_))
        ));
        self.cols[idx] = col;
    }

    /// Dataset with the same rows but columns reordered by `order` (a
    /// permutation of 0..p). Used by order-invariance tests.
    pub fn with_column_order(&self, order: &[usize]) -> Result<Dataset> {
        if order.len() != self.p() {
            return Err(Error::InvalidArgument("order must be a permutation of 0..p".into()));
        }
        let mut seen = vec![false; self.p()];
        for &j in order {
            if j >= self.p() || seen[j] {
                return Err(Error::InvalidArgument("order must be a permutation of 0..p".into()));
            }
            seen[j] = true;
        }
        let vars = order.iter().map(|&j| self.vars[j].clone()).collect();
        let cols = order.iter().map(|&j| self.cols[j].clone()).collect();
        let mut d = Dataset::new(vars, cols)?;
        if self.genotype_coded {
            d.mark_genotype_coded();
        }
        Ok(d)
    }
}

/// Biallelic genotype call.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Genotype {
    /// Major homozygote.
    AA,
    /// Heterozygote.
    Aa,
    /// Minor homozygote.
    aa,
}

impl Genotype {
    pub fn token(self) -> &'static str {
        match self {
            Genotype::AA => "AA",
            Genotype::Aa => "Aa",
            Genotype::aa => "aa",
        }
    }
}

/// n × m grid of biallelic genotype calls.
#[derive(Debug, Clone, PartialEq)]
pub struct GenotypeTable {
    snp_names: Vec<String>,
    calls: Vec<Genotype>, // row major, n × m
    samples: usize,
}

impl GenotypeTable {
    pub fn new(snp_names: Vec<String>, rows: &[Vec<Genotype>]) -> Result<Self> {
        if snp_names.is_empty() {
            return Err(Error::DataShape("genotype table needs at least one SNP".into()));
        }
        if rows.is_empty() {
            return Err(Error::DataShape("genotype table needs at least one sample".into()));
        }
        for (i, a) in snp_names.iter().enumerate() {
            if snp_names[i + 1..].contains(a) {
                return Err(Error::InvalidArgument(format!("duplicate SNP name {a:?}")));
            }
        }
        let m = snp_names.len();
        let mut calls = Vec::with_capacity(rows.len() * m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::DataShape(format!(
                    "sample {i} has {} calls, expected {m}",
                    r.len()
                )));
            }
            calls.extend_from_slice(r);
        }
        Ok(GenotypeTable { snp_names, calls, samples: rows.len() })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn snps(&self) -> usize {
        self.snp_names.len()
    }

    pub fn snp_names(&self) -> &[String] {
        &self.snp_names
    }

    pub fn call(&self, sample: usize, snp: usize) -> Genotype {
        self.calls[sample * self.snp_names.len() + snp]
    }
}

/// Numeric SNP coding scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recoding {
    /// AA→1, Aa→0, aa→−1 (heterozygote as reference point).
    Centered,
    /// AA→2, Aa→1, aa→0 (count of the major allele).
    AlleleCount,
}

impl Recoding {
    fn code(self, g: Genotype) -> f64 {
        match (self, g) {
            (Recoding::Centered, Genotype::AA) => 1.0,
            (Recoding::Centered, Genotype::Aa) => 0.0,
            (Recoding::Centered, Genotype::aa) => -1.0,
            (Recoding::AlleleCount, Genotype::AA) => 2.0,
            (Recoding::AlleleCount, Genotype::Aa) => 1.0,
            (Recoding::AlleleCount, Genotype::aa) => 0.0,
        }
    }

    /// Level labels in ascending numeric order, i.e. aa < Aa < AA.
    fn levels(self) -> [&'static str; 3] {
        match self {
            Recoding::Centered => ["-1", "0", "1"],
            Recoding::AlleleCount => ["0", "1", "2"],
        }
    }

    /// Level index (ascending numeric order) of a genotype.
    fn level_of(self, g: Genotype) -> u32 {
        match g {
            Genotype::aa => 0,
            Genotype::Aa => 1,
            Genotype::AA => 2,
        }
    }
}

/// Numeric recoding of a genotype table. Output columns are ordinal in the
/// order induced by the codes (aa < Aa < AA) and carry numeric codes so they
/// can enter regressions directly.
pub fn recode_snps(g: &GenotypeTable, scheme: Recoding) -> Dataset {
    let labels = scheme.levels();
    let codes = [
        scheme.code(Genotype::aa),
        scheme.code(Genotype::Aa),
        scheme.code(Genotype::AA),
    ];
    let mut vars = Vec::with_capacity(g.snps());
    let mut cols = Vec::with_capacity(g.snps());
    for (j, name) in g.snp_names().iter().enumerate() {
        let mut meta = VariableMeta::ordinal(name, &labels);
        meta.numeric_codes = Some(codes.to_vec());
        vars.push(meta);
        cols.push(Column::Categorical(
            (0..g.samples()).map(|i| scheme.level_of(g.call(i, j))).collect(),
        ));
    }
    let mut d = Dataset::new(vars, cols).expect("genotype table invariants guarantee validity");
    d.mark_genotype_coded();
    d
}

/// Ordinal rank coding of a continuous column: levels are the sorted
/// distinct values (labelled by their printed form), so only the ordering
/// survives. The numeric codes are the original values, keeping the column
/// usable in regressions.
pub fn rank_coded(name: &str, values: &[f64]) -> (VariableMeta, Column) {
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let labels: Vec<String> = distinct.iter().map(|v| format!("{v:?}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut meta = VariableMeta::ordinal(name, &label_refs);
    meta.numeric_codes = Some(distinct.clone());
    let column = Column::Categorical(
        values
            .iter()
            .map(|v| distinct.binary_search_by(|probe| probe.total_cmp(v)).unwrap() as u32)
            .collect(),
    );
    (meta, column)
}

/// Box-Cox transform: (yᵖ − 1)/p for p ≠ 0, log y for p = 0.
/// Every input must be strictly positive.
pub fn box_cox(column: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if let Some(row) = column.iter().position(|y| !(*y > 0.0)) {
        return Err(Error::DomainViolation {
            row,
            detail: format!("Box-Cox needs strictly positive values, got {}", column[row]),
        });
    }
    Ok(column
        .iter()
        .map(|y| if lambda == 0.0 { y.ln() } else { (y.powf(lambda) - 1.0) / lambda })
        .collect())
}

/// T × C × L table of counts n_{isk}: groups i (variable `x1`), response
/// levels s (variable `x3`), strata k (joint configurations of `cond`).
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    t: usize,
    c: usize,
    l: usize,
    counts: Vec<u64>,       // [k][i][s]
    row_margins: Vec<u64>,  // [k][i] = n_{i+k}
    stratum_totals: Vec<u64>, // [k] = N_k
    n: u64,
}

impl ContingencyTable {
    /// Build from raw counts laid out stratum-major: `counts[k][i][s]`.
    pub fn from_counts(t: usize, c: usize, l: usize, counts: Vec<u64>) -> Result<Self> {
        if t == 0 || c == 0 || l == 0 {
            return Err(Error::DataShape("table dimensions must be positive".into()));
        }
        if counts.len() != t * c * l {
            return Err(Error::DataShape(format!(
                "expected {} counts for a {t}x{c}x{l} table, got {}",
                t * c * l,
                counts.len()
            )));
        }
        let mut row_margins = vec![0u64; l * t];
        let mut stratum_totals = vec![0u64; l];
        let mut n = 0u64;
        for k in 0..l {
            for i in 0..t {
                let mut m = 0u64;
                for s in 0..c {
                    m += counts[(k * t + i) * c + s];
                }
                row_margins[k * t + i] = m;
                stratum_totals[k] += m;
            }
            n += stratum_totals[k];
        }
        Ok(ContingencyTable { t, c, l, counts, row_margins, stratum_totals, n })
    }

    /// (T, C, L).
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.t, self.c, self.l)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn count(&self, k: usize, i: usize, s: usize) -> u64 {
        self.counts[(k * self.t + i) * self.c + s]
    }

    /// n_{i+k}: observations of group i in stratum k.
    #[inline]
    pub fn row_margin(&self, k: usize, i: usize) -> u64 {
        self.row_margins[k * self.t + i]
    }

    /// Response-level margin n_{+sk} within stratum k.
    pub fn col_margin(&self, k: usize, s: usize) -> u64 {
        (0..self.t).map(|i| self.count(k, i, s)).sum()
    }

    /// N_k: total observations in stratum k.
    #[inline]
    pub fn stratum_total(&self, k: usize) -> u64 {
        self.stratum_totals[k]
    }
}

/// Joint stratum index of each row over the given categorical columns,
/// lexicographic with the first conditioning variable most significant.
/// Returns (per-row stratum, stratum count).
pub(crate) fn stratum_indices(d: &Dataset, cond: &[usize]) -> Result<(Vec<usize>, usize)> {
    let mut l = 1usize;
    for &j in cond {
        if !d.var(j).kind.is_categorical() {
            return Err(Error::KindMismatch(format!(
                "conditioning variable {:?} is not categorical",
                d.var(j).name
            )));
        }
        l = l
            .checked_mul(d.var(j).levels.len())
            .ok_or_else(|| Error::Untestable("conditioning stratum count overflows".into()))?;
    }
    let mut idx = vec![0usize; d.n()];
    for &j in cond {
        let width = d.var(j).levels.len();
        match d.column(j) {
            Column::Categorical(codes) => {
                for (row, c) in codes.iter().enumerate() {
                    idx[row] = idx[row] * width + *c as usize;
                }
            }
            Column::Continuous(_) => unreachable!("kind checked above"),
        }
    }
    Ok((idx, l))
}

/// Cross-tabulate `x1` (groups) against `x3` (response) within the joint
/// strata of `cond`. Strata with zero rows are kept as zero counts, so L is
/// a pure function of the metadata.
pub fn contingency_table(d: &Dataset, x1: &str, x3: &str, cond: &[&str]) -> Result<ContingencyTable> {
    let xi = d.index_of(x1)?;
    let yi = d.index_of(x3)?;
    for (name, j) in [(x1, xi), (x3, yi)] {
        if !d.var(j).kind.is_categorical() {
            return Err(Error::KindMismatch(format!("variable {name:?} is not categorical")));
        }
    }
    let cond_idx: Vec<usize> =
        cond.iter().map(|c| d.index_of(c)).collect::<Result<Vec<_>>>()?;
    let (strata, l) = stratum_indices(d, &cond_idx)?;
    let t = d.var(xi).levels.len();
    let c = d.var(yi).levels.len();
    let (xc, yc) = match (d.column(xi), d.column(yi)) {
        (Column::Categorical(a), Column::Categorical(b)) => (a, b),
        _ => unreachable!("kind checked above"),
    };
    let mut counts = vec![0u64; t * c * l];
    for row in 0..d.n() {
        let k = strata[row];
        counts[(k * t + xc[row] as usize) * c + yc[row] as usize] += 1;
    }
    let table = ContingencyTable::from_counts(t, c, l, counts)?;
    if (0..l).all(|k| table.stratum_total(k) < 2) {
        return Err(Error::Untestable(
            "every conditioning stratum has fewer than two observations".into(),
        ));
    }
    Ok(table)
}
