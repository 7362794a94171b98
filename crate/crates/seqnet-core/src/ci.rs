//! Conditional-independence tests for the three data regimes: the
//! stratified Jonckheere-Terpstra trend test for ordinal data, the G²
//! log-likelihood-ratio test for discrete data, and Fisher's z transform of
//! partial correlations for continuous data. A seeded within-stratum
//! permutation procedure doubles as a validation oracle and a small-sample
//! fallback.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::data::{contingency_table, stratum_indices, Column, ContingencyTable, Dataset, Kind};
use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, Matrix};
use crate::numeric::{chi_square_sf, normal_sf, normal_two_sided_p};
use crate::random::{derive_seeds, rng_from, shuffle};

/// Which test to run; doubles as the regime selector for learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    FisherZ,
    G2,
    Jt,
}

impl TestKind {
    pub fn name(self) -> &'static str {
        match self {
            TestKind::FisherZ => "fisher_z",
            TestKind::G2 => "g2",
            TestKind::Jt => "jt",
        }
    }

    pub fn from_name(name: &str) -> Option<TestKind> {
        match name {
            "fisher_z" => Some(TestKind::FisherZ),
            "g2" => Some(TestKind::G2),
            "jt" => Some(TestKind::Jt),
            _ => None,
        }
    }
}

/// Outcome of one conditional-independence test.
///
/// `n_effective` counts the observations that inform the null distribution:
/// all rows for Fisher's z, rows in strata with positive JT variance for the
/// trend test, rows in strata contributing degrees of freedom for G².
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub test_name: &'static str,
    pub x: String,
    pub y: String,
    pub cond: Vec<String>,
    pub statistic: f64,
    pub p_value: f64,
    /// G² only.
    pub df: Option<u64>,
    /// JT only.
    pub null_mean: Option<f64>,
    /// JT only; always positive when present.
    pub null_sd: Option<f64>,
    pub n_effective: u64,
}

struct JtParts {
    statistic: f64,
    mean: f64,
    variance: f64,
    n_informative: u64,
}

/// Exact tie-corrected permutation variance of the JT statistic within one
/// stratum (Lehmann's three-term form, evaluated in integer arithmetic).
fn jt_stratum_variance(t: &ContingencyTable, k: usize) -> f64 {
    let (groups, levels, _) = t.dims();
    let n = t.stratum_total(k) as i128;
    let (mut r1, mut r2, mut r3) = (0i128, 0i128, 0i128);
    for i in 0..groups {
        let v = t.row_margin(k, i) as i128;
        r1 += v * (v - 1) * (2 * v + 5);
        r2 += v * (v - 1) * (v - 2);
        r3 += v * (v - 1);
    }
    let (mut c1, mut c2, mut c3) = (0i128, 0i128, 0i128);
    for s in 0..levels {
        let v = t.col_margin(k, s) as i128;
        c1 += v * (v - 1) * (2 * v + 5);
        c2 += v * (v - 1) * (v - 2);
        c3 += v * (v - 1);
    }
    let term1 = (n * (n - 1) * (2 * n + 5) - r1 - c1) as f64 / 72.0;
    let term2 = if n >= 3 {
        (r2 as f64) * (c2 as f64) / (36.0 * (n * (n - 1) * (n - 2)) as f64)
    } else {
        0.0
    };
    let term3 = (r3 as f64) * (c3 as f64) / (8.0 * (n * (n - 1)) as f64);
    term1 + term2 + term3
}

fn jt_parts(t: &ContingencyTable) -> Result<JtParts> {
    let (groups, levels, strata) = t.dims();
    if groups < 2 {
        return Err(Error::Untestable("fewer than two groups".into()));
    }
    let mut any_pair = false;
    let mut statistic = 0.0;
    let mut mean = 0.0;
    let mut variance = 0.0;
    let mut n_informative = 0u64;
    for k in 0..strata {
        let nk = t.stratum_total(k);
        if nk == 0 {
            continue;
        }
        // Pairwise ascending-count form with mid-rank tie halves: for each
        // group pair i<j, count pairs where the i observation sits at a
        // strictly lower level, plus half the level ties.
        for i in 0..groups {
            for j in i + 1..groups {
                let mut below_i = 0u64;
                let mut ascending = 0u64;
                let mut ties = 0u64;
                for s in 0..levels {
                    let nis = t.count(k, i, s);
                    let njs = t.count(k, j, s);
                    ascending += njs * below_i;
                    ties += nis * njs;
                    below_i += nis;
                }
                statistic += ascending as f64 + 0.5 * ties as f64;
            }
        }
        let sum_sq: u64 = (0..groups).map(|i| t.row_margin(k, i).pow(2)).sum();
        mean += (nk * nk - sum_sq) as f64 / 4.0;

        let nonempty_groups = (0..groups).filter(|&i| t.row_margin(k, i) > 0).count();
        let observed_levels = (0..levels).filter(|&s| t.col_margin(k, s) > 0).count();
        if nonempty_groups >= 2 {
            any_pair = true;
            // Strata with a single observed response level are fully tied;
            // their variance is zero analytically, so skip them rather than
            // leave floating-point residue from the cancelling terms.
            if observed_levels >= 2 {
                variance += jt_stratum_variance(t, k);
                n_informative += nk;
            }
        }
    }
    if !any_pair {
        return Err(Error::Untestable(
            "no stratum has observations in two or more groups".into(),
        ));
    }
    Ok(JtParts { statistic, mean, variance, n_informative })
}

/// Stratified Jonckheere-Terpstra statistic: over every stratum and ordered
/// group pair, the Mann-Whitney count of ascending pairs with mid-rank
/// credit for ties.
pub fn jt_statistic(t: &ContingencyTable) -> Result<f64> {
    Ok(jt_parts(t)?.statistic)
}

/// Mean and tie-corrected variance of the JT statistic under within-stratum
/// permutation of the response.
pub fn jt_null_moments(t: &ContingencyTable) -> Result<(f64, f64)> {
    let parts = jt_parts(t)?;
    if parts.variance <= 0.0 {
        return Err(Error::Untestable(
            "JT null variance is zero: responses are fully tied in every stratum".into(),
        ));
    }
    Ok((parts.mean, parts.variance))
}

/// Trend test of `y` across the ordered groups of `x` within strata of
/// `cond`. Two-sided by default (either direction of stochastic ordering);
/// the one-sided variant tests the increasing direction.
pub fn jt_test(d: &Dataset, x: &str, y: &str, cond: &[&str], two_sided: bool) -> Result<TestResult> {
    for name in [x, y] {
        let idx = d.index_of(name)?;
        if d.var(idx).kind != Kind::Ordinal {
            return Err(Error::KindMismatch(format!(
                "JT needs ordinal variables, {name:?} is {}",
                d.var(idx).kind
            )));
        }
    }
    let table = contingency_table(d, x, y, cond)?;
    let parts = jt_parts(&table)?;
    if parts.variance <= 0.0 {
        return Err(Error::Untestable(
            "JT null variance is zero: responses are fully tied in every stratum".into(),
        ));
    }
    let sd = parts.variance.sqrt();
    let z = (parts.statistic - parts.mean) / sd;
    let p_value = if two_sided { normal_two_sided_p(z) } else { normal_sf(z) };
    Ok(TestResult {
        test_name: "jt",
        x: x.to_string(),
        y: y.to_string(),
        cond: cond.iter().map(|c| c.to_string()).collect(),
        statistic: parts.statistic,
        p_value,
        df: None,
        null_mean: Some(parts.mean),
        null_sd: Some(sd),
        n_effective: parts.n_informative,
    })
}

/// (G², df, informative n) for a stratified table. Levels with a zero
/// margin inside a stratum drop out of that stratum's degrees of freedom;
/// empty strata contribute nothing.
pub(crate) fn g2_from_table(t: &ContingencyTable) -> Result<(f64, u64, u64)> {
    let (groups, levels, strata) = t.dims();
    let mut g2 = 0.0;
    let mut df = 0u64;
    let mut n_informative = 0u64;
    for k in 0..strata {
        let nk = t.stratum_total(k);
        if nk == 0 {
            continue;
        }
        for i in 0..groups {
            let rm = t.row_margin(k, i);
            if rm == 0 {
                continue;
            }
            for s in 0..levels {
                let n = t.count(k, i, s);
                if n == 0 {
                    continue;
                }
                let cm = t.col_margin(k, s);
                g2 += 2.0 * n as f64 * ((n * nk) as f64 / (rm * cm) as f64).ln();
            }
        }
        let rows_obs = (0..groups).filter(|&i| t.row_margin(k, i) > 0).count() as u64;
        let cols_obs = (0..levels).filter(|&s| t.col_margin(k, s) > 0).count() as u64;
        let df_k = (rows_obs - 1) * (cols_obs - 1);
        if df_k > 0 {
            df += df_k;
            n_informative += nk;
        }
    }
    if df == 0 {
        return Err(Error::Untestable(
            "no stratum observes two or more levels on both margins".into(),
        ));
    }
    // The log-likelihood ratio is nonnegative analytically; trim any
    // floating-point residue so p stays in range.
    Ok((g2.max(0.0), df, n_informative))
}

/// Log-likelihood-ratio test of independence between two categorical
/// variables within strata of `cond`.
pub fn g2_test(d: &Dataset, x: &str, y: &str, cond: &[&str]) -> Result<TestResult> {
    for name in [x, y] {
        let idx = d.index_of(name)?;
        if !d.var(idx).kind.is_categorical() {
            return Err(Error::KindMismatch(format!(
                "G² needs categorical variables, {name:?} is {}",
                d.var(idx).kind
            )));
        }
    }
    let table = contingency_table(d, x, y, cond)?;
    let (g2, df, n_informative) = g2_from_table(&table)?;
    Ok(TestResult {
        test_name: "g2",
        x: x.to_string(),
        y: y.to_string(),
        cond: cond.iter().map(|c| c.to_string()).collect(),
        statistic: g2,
        p_value: chi_square_sf(g2, df as f64),
        df: Some(df),
        null_mean: None,
        null_sd: None,
        n_effective: n_informative,
    })
}

/// Pearson correlation matrix of numeric columns. Errors on a constant
/// column (undefined correlation).
pub(crate) fn correlation_matrix_from(cols: &[Vec<f64>]) -> Result<Matrix> {
    let p = cols.len();
    let n = cols[0].len();
    let mut means = vec![0.0; p];
    for (j, c) in cols.iter().enumerate() {
        means[j] = c.iter().sum::<f64>() / n as f64;
    }
    let mut ssq = vec![0.0; p];
    for (j, c) in cols.iter().enumerate() {
        let ss: f64 = c.iter().map(|v| (v - means[j]).powi(2)).sum();
        if ss <= 0.0 {
            return Err(Error::Singular(format!(
                "column {j} is constant: correlation undefined"
            )));
        }
        ssq[j] = ss;
    }
    let mut m = Matrix::identity(p);
    for a in 0..p {
        for b in a + 1..p {
            let dot: f64 = cols[a]
                .iter()
                .zip(&cols[b])
                .map(|(u, v)| (u - means[a]) * (v - means[b]))
                .sum();
            // single square root so identical columns give exactly 1
            let r = (dot / (ssq[a] * ssq[b]).sqrt()).clamp(-1.0, 1.0);
            m.set(a, b, r);
            m.set(b, a, r);
        }
    }
    Ok(m)
}

/// Fisher z statistic and two-sided p for a (partial) correlation `r`
/// observed on `n` samples with `cond_size` conditioning variables:
/// z = √(n − cond_size − 3) · atanh(r).
pub fn fisher_z_pvalue(r: f64, n: usize, cond_size: usize) -> Result<(f64, f64)> {
    if n < cond_size + 4 {
        return Err(Error::Untestable(format!(
            "insufficient sample: need n - |cond| - 3 >= 1, have n = {n}, |cond| = {cond_size}"
        )));
    }
    let scale = ((n - cond_size - 3) as f64).sqrt();
    let z = scale * r.clamp(-1.0, 1.0).atanh();
    Ok((z, normal_two_sided_p(z)))
}

/// Partial correlation of the first two of `cols` given the rest, read off
/// the inverse of their correlation matrix.
fn partial_correlation(cols: &[Vec<f64>]) -> Result<f64> {
    let m = correlation_matrix_from(cols)?;
    let omega = spd_inverse(&m).map_err(|_| {
        Error::Singular("correlation submatrix not invertible (collinear conditioning set)".into())
    })?;
    let r = -omega.get(0, 1) / (omega.get(0, 0) * omega.get(1, 1)).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

/// Partial-correlation test of `x` and `y` given `cond` on continuous data.
pub fn fisher_z_test(d: &Dataset, x: &str, y: &str, cond: &[&str]) -> Result<TestResult> {
    let mut names = vec![x, y];
    names.extend_from_slice(cond);
    let mut cols = Vec::with_capacity(names.len());
    for name in &names {
        let idx = d.index_of(name)?;
        if d.var(idx).kind != Kind::Continuous {
            return Err(Error::KindMismatch(format!(
                "Fisher's z needs continuous variables, {name:?} is {}",
                d.var(idx).kind
            )));
        }
        cols.push(d.numeric_column(idx)?);
    }
    let n = d.n();
    if n < cond.len() + 4 {
        return Err(Error::Untestable(format!(
            "insufficient sample: need n - |cond| - 3 >= 1, have n = {n}, |cond| = {}",
            cond.len()
        )));
    }
    let r = partial_correlation(&cols)?;
    let (z, p_value) = fisher_z_pvalue(r, n, cond.len())?;
    Ok(TestResult {
        test_name: "fisher_z",
        x: x.to_string(),
        y: y.to_string(),
        cond: cond.iter().map(|c| c.to_string()).collect(),
        statistic: z,
        p_value,
        df: None,
        null_mean: None,
        null_sd: None,
        n_effective: n as u64,
    })
}

/// Dispatch a test by kind. The JT test runs two-sided here.
pub fn run_test(kind: TestKind, d: &Dataset, x: &str, y: &str, cond: &[&str]) -> Result<TestResult> {
    match kind {
        TestKind::FisherZ => fisher_z_test(d, x, y, cond),
        TestKind::G2 => g2_test(d, x, y, cond),
        TestKind::Jt => jt_test(d, x, y, cond, true),
    }
}

/// How extreme a result is under the permutation null, per test family:
/// distance from the null mean for JT, the statistic itself for G² (already
/// a deviance), absolute z for Fisher.
fn permutation_magnitude(kind: TestKind, r: &TestResult) -> f64 {
    match kind {
        TestKind::Jt => (r.statistic - r.null_mean.expect("JT carries a mean")).abs(),
        TestKind::G2 => r.statistic,
        TestKind::FisherZ => r.statistic.abs(),
    }
}

/// Permutation p-value: reshuffle `y` within the joint strata of `cond`,
/// B times, and report (1 + #{at least as extreme}) / (B + 1).
pub fn permutation_pvalue(
    kind: TestKind,
    d: &Dataset,
    x: &str,
    y: &str,
    cond: &[&str],
    b: usize,
    seed: u64,
) -> Result<f64> {
    if b < 100 {
        return Err(Error::InvalidArgument(format!(
            "permutation needs B >= 100 replicates, got {b}"
        )));
    }
    let observed = run_test(kind, d, x, y, cond)?;
    let threshold = permutation_magnitude(kind, &observed);

    let cond_idx: Vec<usize> = cond.iter().map(|c| d.index_of(c)).collect::<Result<Vec<_>>>()?;
    let (strata, stratum_count) = stratum_indices(d, &cond_idx)?;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); stratum_count];
    for (row, &k) in strata.iter().enumerate() {
        groups[k].push(row);
    }

    let y_idx = d.index_of(y)?;
    let mut work = d.clone();
    let mut hits = 0u64;
    for rep_seed in derive_seeds(seed, b) {
        let mut rng = rng_from(rep_seed);
        let permuted = match d.column(y_idx) {
            Column::Continuous(vals) => {
                let mut out = vals.clone();
                for rows in &groups {
                    let mut chunk: Vec<f64> = rows.iter().map(|&r| out[r]).collect();
                    shuffle(&mut rng, &mut chunk);
                    for (&r, v) in rows.iter().zip(chunk) {
                        out[r] = v;
                    }
                }
                Column::Continuous(out)
            }
            Column::Categorical(vals) => {
                let mut out = vals.clone();
                for rows in &groups {
                    let mut chunk: Vec<u32> = rows.iter().map(|&r| out[r]).collect();
                    shuffle(&mut rng, &mut chunk);
                    for (&r, v) in rows.iter().zip(chunk) {
                        out[r] = v;
                    }
                }
                Column::Categorical(out)
            }
        };
        work.set_column_values(y_idx, permuted);
        let replicate = run_test(kind, &work, x, y, cond)?;
        if permutation_magnitude(kind, &replicate) >= threshold {
            hits += 1;
        }
    }
    Ok((1 + hits) as f64 / (b + 1) as f64)
}
