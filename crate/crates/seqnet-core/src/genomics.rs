//! Additive trait modelling on coded genotypes: a closed-form ridge fit
//! with an optional relatedness (kinship) covariance, prediction, ridge
//! selection by cross-validation, and Markov-blanket feature selection for
//! association studies.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::learn::{learn_markov_blanket, LearnConfig, MbResult};
use crate::linalg::{Cholesky, Matrix};
use crate::random::{rng_from, shuffle};

#[allow(unused_imports)]
use num_traits::Float;

/// Warning attached to blanket-based marker selection on genotype data:
/// the independence tests treat samples as exchangeable.
pub const KINSHIP_CAVEAT: &str = "marker selection by Markov blanket does not \
adjust for relatedness between samples; correct for kinship separately or \
interpret the selected set accordingly";

/// Sample-by-sample relatedness covariance. Kept together with its
/// factorization so repeated solves cost one decomposition.
#[derive(Debug, Clone)]
pub struct KinshipMatrix {
    values: Matrix,
    chol: Cholesky,
    identity: bool,
}

impl KinshipMatrix {
    /// Validate symmetry (within 1e-10) and positive definiteness.
    pub fn new(values: Matrix) -> Result<Self> {
        if values.n_rows() != values.n_cols() {
            return Err(Error::DataShape(format!(
                "kinship matrix must be square, got {}x{}",
                values.n_rows(),
                values.n_cols()
            )));
        }
        if values.max_asymmetry() > 1e-10 {
            return Err(Error::InvalidArgument(
                "kinship matrix is not symmetric within 1e-10".into(),
            ));
        }
        let chol = Cholesky::new(&values).map_err(|_| {
            Error::Singular("kinship matrix is not positive definite".into())
        })?;
        let n = values.n_rows();
        let mut identity = true;
        'outer: for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                if values.get(i, j) != want {
                    identity = false;
                    break 'outer;
                }
            }
        }
        Ok(KinshipMatrix { values, chol, identity })
    }

    pub fn identity(n: usize) -> Self {
        KinshipMatrix::new(Matrix::identity(n)).expect("identity is positive definite")
    }

    pub fn n(&self) -> usize {
        self.values.n_rows()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.chol.solve(b)
    }

    /// Principal submatrix on the given (strictly increasing) sample
    /// indices; stays positive definite.
    fn submatrix(&self, rows: &[usize]) -> Result<KinshipMatrix> {
        let k = rows.len();
        let mut m = Matrix::zeros(k, k);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows.iter().enumerate() {
                m.set(a, b, self.values.get(i, j));
            }
        }
        KinshipMatrix::new(m)
    }
}

/// Result of the additive ridge fit.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveModelFit {
    /// Population mean, estimated as the generalized mean of the trait
    /// under the relatedness covariance.
    pub mu: f64,
    /// One additive effect per coded marker column.
    pub effects: Vec<f64>,
    pub lambda: f64,
    /// Whether a non-identity relatedness matrix entered the fit.
    pub kinship_used: bool,
    pub snp_names: Vec<String>,
}

/// Ridge fit of trait = mu + X g + noise, with noise covariance `sigma`
/// (identity when None):
///
///   mu = (1' S^-1 y) / (1' S^-1 1)
///   (X' S^-1 X + lambda I) g = X' S^-1 (y - mu)
///
/// lambda = 0 is allowed only when X has full column rank (and m < n);
/// the mean is always estimated first, independently of g.
pub fn fit_additive(
    x: &Matrix,
    snp_names: &[String],
    y: &[f64],
    sigma: Option<&KinshipMatrix>,
    lambda: f64,
) -> Result<AdditiveModelFit> {
    let n = x.n_rows();
    let m = x.n_cols();
    if y.len() != n {
        return Err(Error::DataShape(format!(
            "trait length {} does not match {} genotype rows",
            y.len(),
            n
        )));
    }
    if snp_names.len() != m {
        return Err(Error::DataShape(format!(
            "{} names for {} genotype columns",
            snp_names.len(),
            m
        )));
    }
    if let Some(k) = sigma {
        if k.n() != n {
            return Err(Error::DataShape(format!(
                "kinship is {}x{} but there are {} samples",
                k.n(),
                k.n(),
                n
            )));
        }
    }
    if n == 0 || m == 0 {
        return Err(Error::DataShape("need at least one sample and one marker".into()));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    if lambda == 0.0 && m >= n {
        return Err(Error::InvalidArgument(format!(
            "lambda = 0 needs fewer markers than samples, got m = {m}, n = {n}"
        )));
    }

    let use_kinship = sigma.map_or(false, |k| !k.is_identity());

    // S^-1 applied to 1 and each column of X (inner products against y
    // and the residual use the symmetry of S^-1); identity short-circuits
    let ones = vec![1.0; n];
    let (si_one, si_cols) = if use_kinship {
        let k = sigma.unwrap();
        let si_one = k.solve(&ones)?;
        let mut si_cols = Vec::with_capacity(m);
        for j in 0..m {
            si_cols.push(k.solve(&x.column(j))?);
        }
        (si_one, si_cols)
    } else {
        let cols = (0..m).map(|j| x.column(j)).collect::<Vec<_>>();
        (ones.clone(), cols)
    };

    let denom: f64 = si_one.iter().sum();
    let mu = y.iter().zip(&si_one).map(|(a, b)| a * b).sum::<f64>() / denom;
    let residual: Vec<f64> = y.iter().map(|v| v - mu).collect();

    let mut a = Matrix::zeros(m, m);
    for i in 0..m {
        let xi = x.column(i);
        for j in i..m {
            let dot: f64 = xi.iter().zip(&si_cols[j]).map(|(u, v)| u * v).sum();
            let v = if i == j { dot + lambda } else { dot };
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut b = vec![0.0; m];
    for (j, slot) in b.iter_mut().enumerate() {
        *slot = residual.iter().zip(&si_cols[j]).map(|(u, v)| u * v).sum();
    }

    let chol = Cholesky::new(&a).map_err(|_| {
        if lambda == 0.0 {
            Error::Singular("genotype matrix is rank deficient; use lambda > 0".into())
        } else {
            Error::Singular("normal equations are numerically singular".into())
        }
    })?;
    let effects = chol.solve(&b)?;

    Ok(AdditiveModelFit {
        mu,
        effects,
        lambda,
        kinship_used: use_kinship,
        snp_names: snp_names.to_vec(),
    })
}

/// Predicted trait values mu + X* g.
pub fn predict_additive(fit: &AdditiveModelFit, x_star: &Matrix) -> Result<Vec<f64>> {
    if x_star.n_cols() != fit.effects.len() {
        return Err(Error::DataShape(format!(
            "{} columns for {} fitted effects",
            x_star.n_cols(),
            fit.effects.len()
        )));
    }
    let mut out = Vec::with_capacity(x_star.n_rows());
    for i in 0..x_star.n_rows() {
        let dot: f64 = x_star.row(i).iter().zip(&fit.effects).map(|(u, v)| u * v).sum();
        out.push(fit.mu + dot);
    }
    Ok(out)
}

/// Cross-validation record: the grid with one mean squared error per
/// lambda, the winner, and the full-data refit at the winner.
#[derive(Debug, Clone)]
pub struct CvResult {
    pub fit: AdditiveModelFit,
    pub chosen_lambda: f64,
    /// (lambda, held-out mean squared error) in grid order.
    pub mse: Vec<(f64, f64)>,
}

/// Pick lambda by k-fold cross-validation over `lambdas` (grid order
/// breaks ties toward the earlier entry), then refit on all samples.
/// Fold assignment is a seeded shuffle, so results are reproducible.
pub fn fit_additive_cv(
    x: &Matrix,
    snp_names: &[String],
    y: &[f64],
    sigma: Option<&KinshipMatrix>,
    lambdas: &[f64],
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    let n = x.n_rows();
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "fold count must lie in [2, n], got k = {k}, n = {n}"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng_from(seed);
    shuffle(&mut rng, &mut order);

    // split the shuffled indices into k nearly equal folds
    let base = n / k;
    let extra = n % k;
    let mut folds: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut at = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(order[at..at + len].to_vec());
        at += len;
    }

    let mut mse = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut squared_error = 0.0;
        for fold in &folds {
            let mut in_fold = vec![false; n];
            for &i in fold {
                in_fold[i] = true;
            }
            let train: Vec<usize> = (0..n).filter(|i| !in_fold[*i]).collect();

            let x_train = Matrix::from_rows(
                &train.iter().map(|&i| x.row(i).to_vec()).collect::<Vec<_>>(),
            )?;
            let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let sigma_train = match sigma {
                Some(kin) if !kin.is_identity() => Some(kin.submatrix(&train)?),
                _ => None,
            };
            let fit = fit_additive(
                &x_train,
                snp_names,
                &y_train,
                sigma_train.as_ref(),
                lambda,
            )?;

            let x_test = Matrix::from_rows(
                &fold.iter().map(|&i| x.row(i).to_vec()).collect::<Vec<_>>(),
            )?;
            let pred = predict_additive(&fit, &x_test)?;
            for (p, &i) in pred.iter().zip(fold) {
                squared_error += (p - y[i]).powi(2);
            }
        }
        mse.push((lambda, squared_error / n as f64));
    }

    let mut best = 0;
    for (i, &(_, e)) in mse.iter().enumerate().skip(1) {
        if e < mse[best].1 {
            best = i;
        }
    }
    let chosen_lambda = mse[best].0;
    let fit = fit_additive(x, snp_names, y, sigma, chosen_lambda)?;
    Ok(CvResult { fit, chosen_lambda, mse })
}

/// Split a dataset into the design matrix of every non-trait column plus
/// the trait vector, for feeding the additive fit.
pub fn design_from_dataset(
    d: &Dataset,
    trait_name: &str,
) -> Result<(Matrix, Vec<String>, Vec<f64>)> {
    let trait_idx = d.index_of(trait_name)?;
    let y = d.numeric_column(trait_idx)?;
    let mut names = Vec::new();
    let mut cols = Vec::new();
    for j in 0..d.p() {
        if j == trait_idx {
            continue;
        }
        names.push(d.var(j).name.clone());
        cols.push(d.numeric_column(j)?);
    }
    if cols.is_empty() {
        return Err(Error::DataShape("no marker columns besides the trait".into()));
    }
    Ok((Matrix::from_columns(&cols)?, names, y))
}

/// Marker selection as Markov-blanket discovery around the trait. This is
/// a direct delegation; on genotype-coded data a caveat about unmodelled
/// relatedness is appended to the warnings.
pub fn gwas_feature_select(
    d: &Dataset,
    trait_name: &str,
    cfg: &LearnConfig,
) -> Result<MbResult> {
    let mut result = learn_markov_blanket(d, trait_name, cfg)?;
    if d.is_genotype_coded() {
        result.warnings.push(KINSHIP_CAVEAT.to_string());
    }
    Ok(result)
}
