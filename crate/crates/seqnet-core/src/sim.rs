//! Synthetic data with known ground truth: random DAGs, Gaussian and
//! discrete samples generated from them, SNP-trait scenarios with
//! dominance patterns and linkage disequilibrium, plus the benchmark
//! harnesses that measure test power and structure recovery.
//!
//! Every generator is a pure function of its seed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::ci::{run_test, TestKind};
use crate::data::{
    rank_coded, recode_snps, Column, Dataset, Genotype, GenotypeTable, Recoding,
    VariableMeta,
};
use crate::error::{Error, Result};
use crate::graph::{shd, Dag};
use crate::learn::{pc_learn, LearnConfig};
use crate::numeric::{bvn_cdf, normal_quantile};
use crate::random::{derive_seeds, rng_from, standard_normal, SeededRng};

#[allow(unused_imports)]
use num_traits::Float;

/// How a causal SNP moves the trait, as effect multipliers for the
/// genotypes (AA, Aa, aa).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectPattern {
    /// (1, 0, -1): the heterozygote sits exactly between the homozygotes.
    Linear,
    /// (1, 1, 0): the heterozygote matches the major homozygote.
    Dominant,
    /// (1, 0, 0): the heterozygote matches the minor homozygote.
    Recessive,
}

impl EffectPattern {
    pub fn name(self) -> &'static str {
        match self {
            EffectPattern::Linear => "linear",
            EffectPattern::Dominant => "dominant",
            EffectPattern::Recessive => "recessive",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "linear" => Ok(EffectPattern::Linear),
            "dominant" => Ok(EffectPattern::Dominant),
            "recessive" => Ok(EffectPattern::Recessive),
            other => Err(Error::InvalidArgument(format!(
                "unknown effect pattern {other:?} (expected linear, dominant, or recessive)"
            ))),
        }
    }

    /// Effect multiplier by minor-allele dose (0 = AA, 1 = Aa, 2 = aa).
    fn score(self, dose: u8) -> f64 {
        match (self, dose) {
            (EffectPattern::Linear, 0) => 1.0,
            (EffectPattern::Linear, 1) => 0.0,
            (EffectPattern::Linear, _) => -1.0,
            (EffectPattern::Dominant, 0) | (EffectPattern::Dominant, 1) => 1.0,
            (EffectPattern::Dominant, _) => 0.0,
            (EffectPattern::Recessive, 0) => 1.0,
            (EffectPattern::Recessive, _) => 0.0,
        }
    }
}

/// Full description of one SNP-trait simulation setting.
#[derive(Debug, Clone, PartialEq)]
pub struct SnpScenario {
    pub n: usize,
    pub m: usize,
    /// Minor-allele frequency in (0, 0.5].
    pub maf: f64,
    pub pattern: EffectPattern,
    /// Fraction of trait variance carried by the genetic component.
    pub h2: f64,
    /// Zero-based indices of the causal SNPs.
    pub causal: Vec<usize>,
    /// Target correlation between adjacent SNP doses, in [0, 1).
    pub ld_rho: f64,
    pub seed: u64,
}

impl SnpScenario {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidArgument(
                "scenario needs at least one sample and one SNP".into(),
            ));
        }
        if !(self.maf > 0.0 && self.maf <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "minor-allele frequency must lie in (0, 0.5], got {}",
                self.maf
            )));
        }
        if !(0.0..=1.0).contains(&self.h2) {
            return Err(Error::InvalidArgument(format!(
                "heritability must lie in [0,1], got {}",
                self.h2
            )));
        }
        if let Some(&bad) = self.causal.iter().find(|&&j| j >= self.m) {
            return Err(Error::InvalidArgument(format!(
                "causal index {bad} out of range for {} SNPs",
                self.m
            )));
        }
        if !(0.0..1.0).contains(&self.ld_rho) {
            return Err(Error::InvalidArgument(format!(
                "adjacent-SNP correlation must lie in [0,1), got {}",
                self.ld_rho
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!(
            "{}-maf{}-h2{}-n{}",
            self.pattern.name(),
            self.maf,
            self.h2,
            self.n
        )
    }
}

/// What the generator knows that the analyst normally would not.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Effect size applied to the summed pattern scores.
    pub beta: f64,
    /// Noiseless genetic component, one value per sample.
    pub genetic: Vec<f64>,
}

/// Random DAG on `p` nodes named x0..x{p-1}: a uniformly shuffled
/// topological order, then each compatible pair edged independently with
/// probability expected_degree / (p - 1).
pub fn simulate_dag(p: usize, expected_degree: f64, seed: u64) -> Result<Dag> {
    if p == 0 {
        return Err(Error::InvalidArgument("need at least one node".into()));
    }
    if !(expected_degree >= 0.0) || expected_degree >= p as f64 {
        return Err(Error::InvalidArgument(format!(
            "expected degree must lie in [0, p), got {expected_degree} for p = {p}"
        )));
    }
    let names: Vec<String> = (0..p).map(|i| format!("x{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut dag = Dag::new(&name_refs)?;
    if p == 1 {
        return Ok(dag);
    }

    let mut rng = rng_from(seed);
    let mut order: Vec<usize> = (0..p).collect();
    crate::random::shuffle(&mut rng, &mut order);
    let prob = expected_degree / (p - 1) as f64;
    for a in 0..p {
        for b in a + 1..p {
            if rng.random_range(0.0..1.0) < prob {
                dag.add_edge(&names[order[a]], &names[order[b]])?;
            }
        }
    }
    Ok(dag)
}

/// Linear Gaussian data from a DAG: node = sum of parent values times
/// per-edge coefficients plus N(0, noise_sd^2) noise. Coefficient
/// magnitudes are drawn once from [coef_range.0, coef_range.1] with
/// random sign; the lower bound must be positive so no coefficient can
/// sit near zero. Columns appear in node order.
pub fn simulate_gaussian(
    g: &Dag,
    coef_range: (f64, f64),
    noise_sd: f64,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    let (lo, hi) = coef_range;
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidArgument(format!(
            "coefficient magnitude range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
        )));
    }
    if !(noise_sd >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise standard deviation must be nonnegative, got {noise_sd}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }

    let mut rng = rng_from(seed);
    let names = g.as_graph().nodes();

    // coefficients first, in the graph's deterministic edge order
    let mut coef: BTreeMap<(String, String), f64> = BTreeMap::new();
    for e in g.as_graph().edges() {
        let magnitude = if hi > lo { rng.random_range(lo..hi) } else { lo };
        let sign = if rng.random_range(0.0..1.0) < 0.5 { -1.0 } else { 1.0 };
        coef.insert((e.from.clone(), e.to.clone()), sign * magnitude);
    }

    let mut columns: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for node in g.topological_order() {
        let parents = g.parents(&node)?;
        let mut col = vec![0.0; n];
        for parent in &parents {
            let w = coef[&(parent.clone(), node.clone())];
            let source = &columns[parent];
            for (slot, v) in col.iter_mut().zip(source) {
                *slot += w * v;
            }
        }
        for slot in col.iter_mut() {
            *slot += noise_sd * standard_normal(&mut rng);
        }
        columns.insert(node, col);
    }

    Dataset::new(
        names.iter().map(|s| VariableMeta::continuous(s)).collect(),
        names.iter().map(|s| Column::Continuous(columns[s].clone())).collect(),
    )
}

fn level_names(levels: usize) -> Vec<String> {
    (0..levels).map(|l| l.to_string()).collect()
}

/// Mixed-radix index of a parent configuration; the lexicographically
/// first parent name is the most significant digit.
fn config_index(parent_values: &[u32], levels: usize) -> usize {
    let mut idx = 0usize;
    for &v in parent_values {
        idx = idx * levels + v as usize;
    }
    idx
}

fn sample_categorical<R: Rng>(rng: &mut R, probs: &[f64]) -> u32 {
    let u: f64 = rng.random_range(0.0..1.0);
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i as u32;
        }
    }
    (probs.len() - 1) as u32
}

/// Categorical data from a DAG: every node gets `levels` states and one
/// conditional probability row per parent configuration, drawn from a
/// symmetric Dirichlet. Sampling is ancestral.
pub fn simulate_discrete(
    g: &Dag,
    levels: usize,
    dirichlet_alpha: f64,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    if !(dirichlet_alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Dirichlet concentration must be positive, got {dirichlet_alpha}"
        )));
    }
    let mut rng = rng_from(seed);
    let mut cpts: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for node in g.topological_order() {
        let n_parents = g.parents(&node)?.len();
        let rows = levels.pow(n_parents as u32);
        let table: Vec<Vec<f64>> = (0..rows)
            .map(|_| crate::random::dirichlet_symmetric(&mut rng, dirichlet_alpha, levels))
            .collect();
        cpts.insert(node, table);
    }
    simulate_discrete_from(g, levels, &cpts, n, &mut rng)
}

/// Categorical data with caller-supplied conditional probability tables,
/// for deterministic constructions. Each node's table must have
/// levels^(parent count) rows of `levels` probabilities; rows are indexed
/// mixed-radix over the parent values with the lexicographically first
/// parent most significant.
pub fn simulate_discrete_with_cpts(
    g: &Dag,
    levels: usize,
    cpts: &BTreeMap<String, Vec<Vec<f64>>>,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = rng_from(seed);
    simulate_discrete_from(g, levels, cpts, n, &mut rng)
}

fn simulate_discrete_from(
    g: &Dag,
    levels: usize,
    cpts: &BTreeMap<String, Vec<Vec<f64>>>,
    n: usize,
    rng: &mut SeededRng,
) -> Result<Dataset> {
    if levels < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two levels, got {levels}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let names = g.as_graph().nodes();

    // validate the tables up front
    for node in names {
        let n_parents = g.parents(node)?.len();
        let want_rows = levels.pow(n_parents as u32);
        let table = cpts.get(node).ok_or_else(|| {
            Error::InvalidArgument(format!("missing probability table for node {node:?}"))
        })?;
        if table.len() != want_rows {
            return Err(Error::InvalidArgument(format!(
                "node {node:?} needs {want_rows} probability rows, got {}",
                table.len()
            )));
        }
        for row in table {
            if row.len() != levels {
                return Err(Error::InvalidArgument(format!(
                    "node {node:?} has a probability row of length {}, expected {levels}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !(*p >= 0.0)) {
                return Err(Error::InvalidArgument(format!(
                    "node {node:?} has a negative or non-finite probability"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "node {node:?} has a probability row summing to {total}"
                )));
            }
        }
    }

    let mut columns: BTreeMap<String, Vec<u32>> = BTreeMap::new();
    for node in g.topological_order() {
        let mut parents = g.parents(&node)?;
        parents.sort();
        let table = &cpts[&node];
        let mut col = Vec::with_capacity(n);
        for i in 0..n {
            let parent_values: Vec<u32> =
                parents.iter().map(|p| columns[p][i]).collect();
            let row = &table[config_index(&parent_values, levels)];
            col.push(sample_categorical(rng, row));
        }
        columns.insert(node, col);
    }

    let labels = level_names(levels);
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    Dataset::new(
        names.iter().map(|s| VariableMeta::discrete(s, &label_refs)).collect(),
        names.iter().map(|s| Column::Categorical(columns[s].clone())).collect(),
    )
}

/// Latent-correlation value that makes two thresholded genotype doses
/// correlate at `target`, found by bisection. `t1`, `t2` are the dose
/// thresholds and `q` the minor-allele frequency.
fn calibrate_latent_rho(t1: f64, t2: f64, q: f64, target: f64) -> f64 {
    if target == 0.0 {
        return 0.0;
    }
    let p = 1.0 - q;
    let dose_var = 2.0 * p * q;
    let dose_corr = |rho: f64| -> f64 {
        let e_prod =
            bvn_cdf(t1, t1, rho) + 2.0 * bvn_cdf(t1, t2, rho) + bvn_cdf(t2, t2, rho);
        (e_prod - 4.0 * q * q) / dose_var
    };
    let (mut lo, mut hi) = (0.0_f64, 0.999_999);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if dose_corr(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Generate genotypes and a trait for the scenario.
///
/// Genotypes come from thresholding a latent standard normal at the
/// Hardy-Weinberg cumulative frequencies (so genotype proportions are
/// p^2, 2pq, q^2), with an autoregressive latent correlation across
/// adjacent SNPs calibrated to give dose correlation `ld_rho`. The trait
/// is beta times the summed pattern scores of the causal SNPs plus
/// Gaussian noise, with beta chosen so the genetic component carries
/// exactly h2 of unit total variance (sample calibration) and noise
/// variance 1 - h2.
pub fn simulate_snp_trait(
    s: &SnpScenario,
) -> Result<(GenotypeTable, Vec<f64>, GroundTruth)> {
    s.validate()?;
    let q = s.maf;
    let p = 1.0 - q;
    // dose thresholds: z below t1 gives two minor alleles (aa), between
    // t1 and t2 one (Aa), above t2 none (AA)
    let t1 = normal_quantile(q * q);
    let t2 = normal_quantile(q * q + 2.0 * p * q);
    let latent_rho = calibrate_latent_rho(t1, t2, q, s.ld_rho);

    let mut rng = rng_from(s.seed);
    let mut rows: Vec<Vec<Genotype>> = Vec::with_capacity(s.n);
    let mut doses: Vec<Vec<u8>> = Vec::with_capacity(s.n);
    let scale = (1.0 - latent_rho * latent_rho).sqrt();
    for _ in 0..s.n {
        let mut row = Vec::with_capacity(s.m);
        let mut dose_row = Vec::with_capacity(s.m);
        let mut z = standard_normal(&mut rng);
        for j in 0..s.m {
            if j > 0 {
                z = latent_rho * z + scale * standard_normal(&mut rng);
            }
            let dose: u8 = u8::from(z < t1) + u8::from(z < t2);
            dose_row.push(dose);
            row.push(match dose {
                0 => Genotype::AA,
                1 => Genotype::Aa,
                _ => Genotype::aa,
            });
        }
        rows.push(row);
        doses.push(dose_row);
    }

    let raw: Vec<f64> = doses
        .iter()
        .map(|dose_row| {
            s.causal.iter().map(|&j| s.pattern.score(dose_row[j])).sum::<f64>()
        })
        .collect();

    let beta = if s.h2 == 0.0 {
        0.0
    } else {
        let mean = raw.iter().sum::<f64>() / s.n as f64;
        let var = raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (s.n as f64 - 1.0).max(1.0);
        if var <= 0.0 {
            return Err(Error::Singular(
                "genetic component has zero sample variance; the requested \
                 heritability is unreachable (no causal SNPs or a monomorphic draw)"
                    .into(),
            ));
        }
        (s.h2 / var).sqrt()
    };

    let noise_sd = (1.0 - s.h2).sqrt();
    let genetic: Vec<f64> = raw.iter().map(|v| beta * v).collect();
    let trait_values: Vec<f64> = genetic
        .iter()
        .map(|g| g + noise_sd * standard_normal(&mut rng))
        .collect();

    let snp_names: Vec<String> = (0..s.m).map(|j| format!("snp{j}")).collect();
    let table = GenotypeTable::new(snp_names, &rows)?;
    Ok((table, trait_values, GroundTruth { beta, genetic }))
}

/// Per-test outcome of one benchmark replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestOutcome {
    Reject,
    Accept,
    /// The test could not run on this draw (for example a monomorphic
    /// SNP); counted as a non-rejection.
    Untestable,
}

/// One (scenario, test) power measurement, stored as exact counts.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub scenario: String,
    pub test: TestKind,
    pub n: usize,
    pub replicates: u64,
    pub rejections: u64,
    pub untestable: u64,
}

impl PowerRow {
    pub fn rejection_rate(&self) -> f64 {
        self.rejections as f64 / self.replicates as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
    pub warnings: Vec<String>,
}

/// Run every requested test once on a fresh draw of the scenario with the
/// given seed. All tests see the same dataset (paired comparison); the
/// target SNP is the first causal one, or SNP 0 in null scenarios.
///
/// Per test the data is coded to fit its regime: the rank-based trend
/// test sees the genotype as ordered groups and the trait rank-coded; the
/// correlation test sees the centered dose as a continuous column; the
/// contingency test sees the genotype levels against the rank-coded trait.
pub fn power_single_replicate(
    s: &SnpScenario,
    tests: &[TestKind],
    alpha: f64,
    replicate_seed: u64,
) -> Result<Vec<(TestKind, TestOutcome)>> {
    let scenario = SnpScenario { seed: replicate_seed, ..s.clone() };
    let (genotypes, trait_values, _) = simulate_snp_trait(&scenario)?;
    let target = scenario.causal.first().copied().unwrap_or(0);
    let target_name = genotypes.snp_names()[target].clone();

    let mut out = Vec::with_capacity(tests.len());
    for &test in tests {
        let dataset = match test {
            TestKind::FisherZ => {
                let coded: Vec<f64> = (0..genotypes.samples())
                    .map(|i| match genotypes.call(i, target) {
                        Genotype::AA => 1.0,
                        Genotype::Aa => 0.0,
                        Genotype::aa => -1.0,
                    })
                    .collect();
                Dataset::new(
                    vec![
                        VariableMeta::continuous(&target_name),
                        VariableMeta::continuous("trait"),
                    ],
                    vec![
                        Column::Continuous(coded),
                        Column::Continuous(trait_values.clone()),
                    ],
                )?
            }
            TestKind::Jt | TestKind::G2 => {
                let snp_data = recode_snps(&genotypes, Recoding::AlleleCount);
                let snp_idx = snp_data.index_of(&target_name)?;
                let meta = snp_data.var(snp_idx).clone();
                let column = snp_data.column(snp_idx).clone();
                let (trait_meta, trait_col) = rank_coded("trait", &trait_values);
                let (meta, trait_meta) = if test == TestKind::G2 {
                    // same coding, relabelled to the unordered kind
                    let mut m = meta;
                    m.kind = crate::data::Kind::Discrete;
                    let mut t = trait_meta;
                    t.kind = crate::data::Kind::Discrete;
                    (m, t)
                } else {
                    (meta, trait_meta)
                };
                Dataset::new(vec![meta, trait_meta], vec![column, trait_col])?
            }
        };
        let outcome = match run_test(test, &dataset, &target_name, "trait", &[]) {
            Ok(r) => {
                if r.p_value < alpha {
                    TestOutcome::Reject
                } else {
                    TestOutcome::Accept
                }
            }
            Err(Error::Untestable(_)) | Err(Error::Singular(_)) => TestOutcome::Untestable,
            Err(e) => return Err(e),
        };
        out.push((test, outcome));
    }
    Ok(out)
}

/// Estimate rejection rates for every (scenario, test) pair over seeded
/// replicates. Each replicate draws one dataset per scenario and runs all
/// tests on it. Untestable draws count as non-rejections and leave a
/// warning.
pub fn power_benchmark(
    scenarios: &[SnpScenario],
    tests: &[TestKind],
    alpha: f64,
    replicates: u64,
    seed: u64,
) -> Result<PowerTable> {
    if scenarios.is_empty() || tests.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one scenario and one test".into(),
        ));
    }
    if replicates < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 replicates for a rate estimate, got {replicates}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let scenario_seeds = derive_seeds(seed, scenarios.len());
    for (s, &scenario_seed) in scenarios.iter().zip(&scenario_seeds) {
        s.validate()?;
        let mut rejections: BTreeMap<&'static str, u64> = BTreeMap::new();
        let mut untestable: BTreeMap<&'static str, u64> = BTreeMap::new();
        let replicate_seeds = derive_seeds(scenario_seed, replicates as usize);
        for (r, &rep_seed) in replicate_seeds.iter().enumerate() {
            for (test, outcome) in power_single_replicate(s, tests, alpha, rep_seed)? {
                match outcome {
                    TestOutcome::Reject => {
                        *rejections.entry(test.name()).or_insert(0) += 1;
                    }
                    TestOutcome::Accept => {}
                    TestOutcome::Untestable => {
                        *untestable.entry(test.name()).or_insert(0) += 1;
                        warnings.push(format!(
                            "{} replicate {r}: {} untestable, counted as non-rejection",
                            s.label(),
                            test.name()
                        ));
                    }
                }
            }
        }
        for &test in tests {
            rows.push(PowerRow {
                scenario: s.label(),
                test,
                n: s.n,
                replicates,
                rejections: rejections.get(test.name()).copied().unwrap_or(0),
                untestable: untestable.get(test.name()).copied().unwrap_or(0),
            });
        }
    }
    Ok(PowerTable { rows, warnings })
}

/// Generator settings for the structure-recovery benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryConfig {
    pub p: usize,
    pub expected_degree: f64,
    /// Coefficient magnitude range, lower bound positive.
    pub coef_range: (f64, f64),
    pub noise_sd: f64,
    pub n: usize,
}

/// Scores for one recovered structure.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRow {
    pub replicate: u64,
    /// Distance between the learned graph and the generating DAG's
    /// equivalence class representative.
    pub shd: u64,
    /// Fraction of learned skeleton edges that are real (1.0 when none
    /// were learned).
    pub precision: f64,
    /// Fraction of real skeleton edges that were learned (1.0 when the
    /// true graph is empty).
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryTable {
    pub rows: Vec<RecoveryRow>,
    pub warnings: Vec<String>,
}

fn skeleton_pairs(g: &crate::graph::LabelledGraph) -> Vec<(String, String)> {
    g.edges()
        .into_iter()
        .map(|e| {
            if e.from <= e.to {
                (e.from, e.to)
            } else {
                (e.to, e.from)
            }
        })
        .collect()
}

/// Draw a DAG and Gaussian data per replicate, learn a structure, and
/// score it against the generating equivalence class. Learner failures
/// skip the replicate with a warning.
pub fn recovery_benchmark(
    config: &RecoveryConfig,
    learn_cfg: &LearnConfig,
    replicates: u64,
    seed: u64,
) -> Result<RecoveryTable> {
    if replicates < 10 {
        return Err(Error::InvalidArgument(format!(
            "need at least 10 replicates, got {replicates}"
        )));
    }
    let seeds = derive_seeds(seed, 2 * replicates as usize);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for r in 0..replicates as usize {
        let dag = simulate_dag(config.p, config.expected_degree, seeds[2 * r])?;
        let data = simulate_gaussian(
            &dag,
            config.coef_range,
            config.noise_sd,
            config.n,
            seeds[2 * r + 1],
        )?;
        let learned = match pc_learn(&data, learn_cfg) {
            Ok(result) => result,
            Err(e) => {
                warnings.push(format!("replicate {r} skipped: {e}"));
                continue;
            }
        };
        let truth = dag.to_cpdag();
        let distance = shd(learned.pdag.as_graph(), truth.as_graph())?;

        let true_edges: alloc::collections::BTreeSet<(String, String)> =
            skeleton_pairs(dag.as_graph()).into_iter().collect();
        let learned_edges: alloc::collections::BTreeSet<(String, String)> =
            skeleton_pairs(learned.pdag.as_graph()).into_iter().collect();
        let hits = learned_edges.intersection(&true_edges).count() as f64;
        let precision = if learned_edges.is_empty() {
            1.0
        } else {
            hits / learned_edges.len() as f64
        };
        let recall = if true_edges.is_empty() {
            1.0
        } else {
            hits / true_edges.len() as f64
        };
        rows.push(RecoveryRow { replicate: r as u64, shd: distance, precision, recall });
    }
    Ok(RecoveryTable { rows, warnings })
}
