//! Undirected association networks for continuous data: relevance networks
//! built by thresholding marginal correlations, and gene-association
//! networks built from shrinkage-regularized partial correlations with a
//! Fisher-z edge test.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ci::{correlation_matrix_from, fisher_z_pvalue};
use crate::data::{Dataset, Kind};
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::linalg::{spd_inverse, Matrix};

#[allow(unused_imports)]
use num_traits::Float;

/// Marginal correlation matrix with its variable names. Symmetric, unit
/// diagonal, entries in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    names: Vec<String>,
    values: Matrix,
}

impl CorrelationMatrix {
    /// Wrap a computed correlation matrix, enforcing the shape invariants:
    /// asymmetry beyond 1e-12 is an error, the diagonal is pinned to 1 and
    /// off-diagonal entries are clamped into [-1, 1].
    pub fn new(names: Vec<String>, mut values: Matrix) -> Result<Self> {
        let p = names.len();
        if values.n_rows() != p || values.n_cols() != p {
            return Err(Error::DataShape("matrix does not match name count".into()));
        }
        if values.max_asymmetry() > 1e-12 {
            return Err(Error::InvalidArgument(
                "correlation matrix is not symmetric within 1e-12".into(),
            ));
        }
        for i in 0..p {
            values.set(i, i, 1.0);
            for j in i + 1..p {
                let v = values.get(i, j).clamp(-1.0, 1.0);
                values.set(i, j, v);
                values.set(j, i, v);
            }
        }
        Ok(CorrelationMatrix { names, values })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }
}

/// Partial correlations obtained from a correlation matrix shrunk toward
/// the identity with analytically chosen intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkageEstimate {
    names: Vec<String>,
    partial: Matrix,
    lambda: f64,
}

impl ShrinkageEstimate {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Partial-correlation matrix: symmetric with unit diagonal.
    pub fn partial(&self) -> &Matrix {
        &self.partial
    }

    /// Shrinkage intensity in [0, 1].
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// An undirected graph together with one weight per edge, keyed by the
/// lexicographically ordered name pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNetwork {
    pub graph: LabelledGraph,
    pub weights: BTreeMap<(String, String), f64>,
}

impl WeightedNetwork {
    pub fn weight(&self, a: &str, b: &str) -> Option<f64> {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.weights.get(&key).copied()
    }
}

/// Pull out the continuous columns of `d`, rejecting any other kind, and
/// check the minimum problem size.
fn continuous_columns(d: &Dataset) -> Result<Vec<Vec<f64>>> {
    if d.p() < 2 {
        return Err(Error::DataShape("need at least two columns".into()));
    }
    if d.n() < 3 {
        return Err(Error::DataShape("need at least three rows".into()));
    }
    let mut cols = Vec::with_capacity(d.p());
    for j in 0..d.p() {
        if d.var(j).kind != Kind::Continuous {
            return Err(Error::KindMismatch(format!(
                "variable {:?} is {}, association networks need continuous data",
                d.var(j).name,
                d.var(j).kind
            )));
        }
        cols.push(d.numeric_column(j)?);
    }
    Ok(cols)
}

/// Marginal Pearson correlations of every column pair.
pub fn correlation_matrix(d: &Dataset) -> Result<CorrelationMatrix> {
    let cols = continuous_columns(d)?;
    let values = correlation_matrix_from(&cols)?;
    let names = d.variables().iter().map(|v| v.name.clone()).collect();
    CorrelationMatrix::new(names, values)
}

/// Keep an edge wherever the absolute marginal correlation reaches the
/// threshold; the correlation itself is kept as the edge weight.
pub fn relevance_network(d: &Dataset, threshold: f64) -> Result<WeightedNetwork> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in [0,1], got {threshold}"
        )));
    }
    let corr = correlation_matrix(d)?;
    network_from_matrix(corr.names(), corr.values(), |r| r.abs() >= threshold)
}

fn network_from_matrix(
    names: &[String],
    values: &Matrix,
    keep: impl Fn(f64) -> bool,
) -> Result<WeightedNetwork> {
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut graph = LabelledGraph::new(&name_refs)?;
    let mut weights = BTreeMap::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let r = values.get(i, j);
            if keep(r) {
                graph.add_undirected(&names[i], &names[j])?;
                let key = if names[i] <= names[j] {
                    (names[i].clone(), names[j].clone())
                } else {
                    (names[j].clone(), names[i].clone())
                };
                weights.insert(key, r);
            }
        }
    }
    Ok(WeightedNetwork { graph, weights })
}

/// Analytic shrinkage intensity for shrinking a correlation matrix toward
/// the identity: the summed estimated variances of the off-diagonal
/// correlations divided by their summed squares, clamped into [0, 1].
fn shrinkage_intensity(cols: &[Vec<f64>]) -> Result<f64> {
    let p = cols.len();
    let n = cols[0].len();
    let nf = n as f64;

    // standardize with the ddof = 1 scale
    let mut standardized = Vec::with_capacity(p);
    for c in cols {
        let mean = c.iter().sum::<f64>() / nf;
        let ss: f64 = c.iter().map(|v| (v - mean).powi(2)).sum();
        if ss <= 0.0 {
            return Err(Error::Singular("constant column: correlation undefined".into()));
        }
        let sd = (ss / (nf - 1.0)).sqrt();
        standardized.push(c.iter().map(|v| (v - mean) / sd).collect::<Vec<f64>>());
    }

    let mut var_sum = 0.0;
    let mut sq_sum = 0.0;
    for i in 0..p {
        for j in i + 1..p {
            let w: Vec<f64> =
                standardized[i].iter().zip(&standardized[j]).map(|(a, b)| a * b).collect();
            let w_bar = w.iter().sum::<f64>() / nf;
            let r = nf / (nf - 1.0) * w_bar;
            let var = nf / (nf - 1.0).powi(3)
                * w.iter().map(|v| (v - w_bar).powi(2)).sum::<f64>();
            var_sum += var;
            sq_sum += r * r;
        }
    }
    if sq_sum <= 0.0 {
        // all sample correlations exactly zero: shrink fully
        return Ok(1.0);
    }
    Ok((var_sum / sq_sum).clamp(0.0, 1.0))
}

/// Shrink the sample correlation matrix toward the identity and convert
/// the inverse of the result to partial correlations.
pub fn shrinkage_partial_correlations(d: &Dataset) -> Result<ShrinkageEstimate> {
    let cols = continuous_columns(d)?;
    let lambda = shrinkage_intensity(&cols)?;
    let corr = correlation_matrix_from(&cols)?;
    let p = cols.len();

    let mut shrunk = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let target = if i == j { 1.0 } else { 0.0 };
            shrunk.set(i, j, (1.0 - lambda) * corr.get(i, j) + lambda * target);
        }
    }

    let omega = spd_inverse(&shrunk)?;
    let mut partial = Matrix::identity(p);
    for i in 0..p {
        for j in i + 1..p {
            let v = (-omega.get(i, j) / (omega.get(i, i) * omega.get(j, j)).sqrt())
                .clamp(-1.0, 1.0);
            partial.set(i, j, v);
            partial.set(j, i, v);
        }
    }

    let names = d.variables().iter().map(|v| v.name.clone()).collect();
    Ok(ShrinkageEstimate { names, partial, lambda })
}

/// Test every shrunk partial correlation with Fisher's z at conditioning
/// size p - 2 and keep the edges that reject. `bonferroni` divides alpha by
/// the number of pairs tested.
///
/// Refuses to run when n - (p - 2) - 3 < 1; with that little data relative
/// to dimension the z test has no degrees of freedom and thresholding via
/// relevance_network is the honest alternative.
pub fn gene_association_network(
    d: &Dataset,
    alpha: f64,
    bonferroni: bool,
) -> Result<WeightedNetwork> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let est = shrinkage_partial_correlations(d)?;
    let p = d.p();
    let n = d.n();
    if n < (p - 2) + 4 {
        return Err(Error::Untestable(format!(
            "n = {n} leaves no degrees of freedom at conditioning size p - 2 = {}; \
             use relevance_network thresholding instead",
            p - 2
        )));
    }
    let pairs = (p * (p - 1) / 2) as f64;
    let alpha_eff = if bonferroni { alpha / pairs } else { alpha };
    network_from_matrix(est.names(), est.partial(), |r| {
        // fisher_z_pvalue cannot fail here: the sample-size guard ran above
        let (_, pv) = fisher_z_pvalue(r, n, p - 2).expect("sample size checked");
        pv < alpha_eff
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, VariableMeta};
    use crate::linalg::Cholesky;
    use crate::random::{rng_from, standard_normal};
    use approx::assert_relative_eq;

    fn continuous_dataset(names: &[&str], cols: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(
            names.iter().map(|n| VariableMeta::continuous(n)).collect(),
            cols.into_iter().map(Column::Continuous).collect(),
        )
        .unwrap()
    }

    /// 8 x 4 fixture with externally computed correlations, shrinkage
    /// intensity, and partial correlations.
    fn fixture() -> Dataset {
        let rows = [
            [1.2, -0.3, 0.5, 2.0],
            [0.7, 0.1, -0.2, 1.1],
            [-0.4, 0.9, 0.3, -0.6],
            [2.1, -1.2, 0.8, 2.9],
            [-1.5, 0.4, -0.9, -2.2],
            [0.3, 0.2, 0.1, 0.5],
            [-0.8, 1.1, -0.4, -1.0],
            [1.0, -0.7, 0.6, 1.4],
        ];
        let cols: Vec<Vec<f64>> =
            (0..4).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        continuous_dataset(&["g1", "g2", "g3", "g4"], cols)
    }

    #[test]
    fn correlations_match_external_values() {
        let corr = correlation_matrix(&fixture()).unwrap();
        let expected = [
            (0, 1, -0.8552201398656943),
            (0, 2, 0.8662290627092825),
            (0, 3, 0.9971570961487977),
            (1, 2, -0.6803355056587219),
            (1, 3, -0.8317237698285966),
            (2, 3, 0.8574728646475742),
        ];
        for (i, j, want) in expected {
            assert_relative_eq!(corr.get(i, j), want, max_relative = 1e-12);
            assert_eq!(corr.get(i, j), corr.get(j, i));
        }
        for i in 0..4 {
            assert_eq!(corr.get(i, i), 1.0);
        }
    }

    #[test]
    fn shrinkage_matches_external_values() {
        let est = shrinkage_partial_correlations(&fixture()).unwrap();
        assert_relative_eq!(est.lambda(), 0.1820726899306962, max_relative = 1e-12);
        let expected = [
            (0, 1, -0.3118381221507871),
            (0, 2, 0.3004179246844205),
            (0, 3, 0.508584760316551),
            (1, 2, -0.04394715526183193),
            (1, 3, -0.24199381227989272),
            (2, 3, 0.2825135372966947),
        ];
        for (i, j, want) in expected {
            assert_relative_eq!(est.partial().get(i, j), want, max_relative = 1e-11);
            assert_eq!(est.partial().get(i, j), est.partial().get(j, i));
        }
    }

    #[test]
    fn intensity_clamps_at_one() {
        let rows = [
            [0.4116, 1.0425, -0.1285],
            [1.3665, -0.6652, 0.3515],
            [0.9035, 0.094, -0.7435],
            [-0.9217, -0.4577, 0.2202],
            [-1.0096, -0.2092, -0.1592],
            [0.5408, 0.2147, 0.3554],
        ];
        let cols: Vec<Vec<f64>> =
            (0..3).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let d = continuous_dataset(&["a", "b", "c"], cols);
        // the unclamped analytic value for this fixture is about 2.65
        let est = shrinkage_partial_correlations(&d).unwrap();
        assert_eq!(est.lambda(), 1.0);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(est.partial().get(i, j), want, "full shrinkage gives identity");
            }
        }
    }

    #[test]
    fn relevance_threshold_extremes() {
        let d = fixture();
        let complete = relevance_network(&d, 0.0).unwrap();
        assert_eq!(complete.graph.edge_count(), 6);
        // max |r| in the fixture is 0.99716
        let empty = relevance_network(&d, 0.999).unwrap();
        assert_eq!(empty.graph.edge_count(), 0);
        assert!(relevance_network(&d, 1.5).is_err());
        assert!(relevance_network(&d, -0.1).is_err());
    }

    #[test]
    fn duplicated_column_survives_threshold_one() {
        let base = vec![1.0, 2.5, -0.7, 3.2, 0.4, -1.1];
        let other = vec![0.3, -0.2, 1.9, 0.8, -1.4, 0.6];
        let d = continuous_dataset(
            &["x", "copy", "z"],
            vec![base.clone(), base, other],
        );
        let net = relevance_network(&d, 1.0).unwrap();
        assert_eq!(net.weight("x", "copy"), Some(1.0));
        assert_eq!(net.graph.edge_count(), 1);
    }

    #[test]
    fn relevance_edges_are_monotone_in_threshold() {
        let mut rng = rng_from(211);
        let n = 60;
        let cols: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..n).map(|_| standard_normal(&mut rng)).collect())
            .collect();
        let d = continuous_dataset(&["a", "b", "c", "d", "e"], cols);
        let thresholds = [0.0, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0];
        let mut previous: Option<WeightedNetwork> = None;
        for t in thresholds {
            let net = relevance_network(&d, t).unwrap();
            if let Some(prev) = &previous {
                for key in net.weights.keys() {
                    assert!(
                        prev.weights.contains_key(key),
                        "edge {key:?} appeared when threshold rose to {t}"
                    );
                }
            }
            previous = Some(net);
        }
    }

    #[test]
    fn shrunk_matrix_is_positive_definite_for_positive_lambda() {
        let mut rng = rng_from(223);
        // n < p: the raw correlation matrix is singular
        let n = 4;
        let cols: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..n).map(|_| standard_normal(&mut rng)).collect())
            .collect();
        let d = continuous_dataset(&["a", "b", "c", "d", "e", "f"], cols);
        let corr = correlation_matrix(&d).unwrap();
        for lambda in [1e-6, 0.01, 0.1, 0.5, 0.9, 1.0] {
            let p = corr.names().len();
            let mut shrunk = Matrix::zeros(p, p);
            for i in 0..p {
                for j in 0..p {
                    let target = if i == j { 1.0 } else { 0.0 };
                    shrunk.set(i, j, (1.0 - lambda) * corr.get(i, j) + lambda * target);
                }
            }
            assert!(
                Cholesky::new(&shrunk).is_ok(),
                "shrunk matrix not positive definite at lambda = {lambda}"
            );
        }
    }

    #[test]
    fn column_scaling_leaves_networks_unchanged() {
        let mut rng = rng_from(227);
        let n = 200;
        let a: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|v| 0.6 * v + 0.8 * standard_normal(&mut rng))
            .collect();
        let c: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let d0 = continuous_dataset(&["a", "b", "c"], vec![a.clone(), b.clone(), c.clone()]);

        for scale in [4.0, 3.7] {
            let scaled: Vec<f64> = b.iter().map(|v| scale * v).collect();
            let d1 = continuous_dataset(&["a", "b", "c"], vec![a.clone(), scaled, c.clone()]);
            for t in [0.0, 0.1, 0.3] {
                let n0 = relevance_network(&d0, t).unwrap();
                let n1 = relevance_network(&d1, t).unwrap();
                let e0: Vec<_> = n0.weights.keys().collect();
                let e1: Vec<_> = n1.weights.keys().collect();
                assert_eq!(e0, e1, "scale {scale}, threshold {t}");
                if scale == 4.0 {
                    // a power-of-two scale is exact in floating point
                    assert_eq!(n0.weights, n1.weights);
                }
            }
            let g0 = gene_association_network(&d0, 0.05, false).unwrap();
            let g1 = gene_association_network(&d1, 0.05, false).unwrap();
            let e0: Vec<_> = g0.weights.keys().collect();
            let e1: Vec<_> = g1.weights.keys().collect();
            assert_eq!(e0, e1);
        }
    }

    #[test]
    fn two_column_partial_equals_shrunk_marginal() {
        let mut rng = rng_from(229);
        let n = 80;
        let a: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|v| 0.5 * v + standard_normal(&mut rng))
            .collect();
        let d = continuous_dataset(&["a", "b"], vec![a, b]);
        let est = shrinkage_partial_correlations(&d).unwrap();
        let corr = correlation_matrix(&d).unwrap();
        let shrunk_marginal = (1.0 - est.lambda()) * corr.get(0, 1);
        assert_relative_eq!(est.partial().get(0, 1), shrunk_marginal, max_relative = 1e-12);
    }

    #[test]
    fn dense_sample_limit_matches_direct_inversion() {
        let mut rng = rng_from(233);
        let n = 100_000;
        let p = 5;
        // x0 -> x1 -> x2 chain plus two independent columns
        let x0: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let x1: Vec<f64> = x0.iter().map(|v| 0.6 * v + standard_normal(&mut rng)).collect();
        let x2: Vec<f64> = x1.iter().map(|v| 0.6 * v + standard_normal(&mut rng)).collect();
        let x3: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let x4: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let d = continuous_dataset(&["a", "b", "c", "d", "e"], vec![x0, x1, x2, x3, x4]);

        let est = shrinkage_partial_correlations(&d).unwrap();
        assert!(est.lambda() < 0.01, "lambda = {}", est.lambda());

        let cols: Vec<Vec<f64>> = (0..p).map(|j| d.numeric_column(j).unwrap()).collect();
        let raw = correlation_matrix_from(&cols).unwrap();
        let omega = spd_inverse(&raw).unwrap();
        for i in 0..p {
            for j in i + 1..p {
                let direct = -omega.get(i, j) / (omega.get(i, i) * omega.get(j, j)).sqrt();
                assert!(
                    (est.partial().get(i, j) - direct).abs() < 1e-2,
                    "partial ({i},{j}): {} vs {}",
                    est.partial().get(i, j),
                    direct
                );
            }
        }
    }

    #[test]
    fn sparse_precision_chain_is_recovered_exactly() {
        // precision matrix: chain 0-1-2-3-4, off-diagonal -0.3
        let p = 5;
        let mut omega = Matrix::identity(p);
        for i in 0..p - 1 {
            omega.set(i, i + 1, -0.3);
            omega.set(i + 1, i, -0.3);
        }
        let sigma = spd_inverse(&omega).unwrap();
        let chol = Cholesky::new(&sigma).unwrap();

        let mut rng = rng_from(239);
        let n = 20_000;
        let mut cols = alloc::vec![Vec::with_capacity(n); p];
        for _ in 0..n {
            let z: Vec<f64> = (0..p).map(|_| standard_normal(&mut rng)).collect();
            let x = chol.factor().matvec(&z).unwrap();
            for (j, v) in x.into_iter().enumerate() {
                cols[j].push(v);
            }
        }
        let d = continuous_dataset(&["v0", "v1", "v2", "v3", "v4"], cols);
        let net = gene_association_network(&d, 1e-5, false).unwrap();
        assert_eq!(net.graph.edge_count(), 4);
        for i in 0..p - 1 {
            assert!(
                net.graph.has_edge(&format!("v{i}"), &format!("v{}", i + 1)),
                "chain edge v{i} - v{}", i + 1
            );
        }
    }

    #[test]
    fn confounded_pair_loses_its_marginal_edge() {
        let mut rng = rng_from(241);
        let n = 5000;
        let z: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let x: Vec<f64> = z.iter().map(|v| v + 0.8 * standard_normal(&mut rng)).collect();
        let y: Vec<f64> = z.iter().map(|v| v + 0.8 * standard_normal(&mut rng)).collect();
        let d = continuous_dataset(&["x", "y", "z"], vec![x, y, z]);

        let marginal = relevance_network(&d, 0.3).unwrap();
        assert!(marginal.graph.has_edge("x", "y"), "confounding induces marginal correlation");

        let partial = gene_association_network(&d, 0.01, false).unwrap();
        assert!(!partial.graph.has_edge("x", "y"), "conditioning on z removes it");
        assert!(partial.graph.has_edge("x", "z"));
        assert!(partial.graph.has_edge("y", "z"));
    }

    #[test]
    fn vanishing_alpha_empties_the_graph() {
        let d = fixture();
        let net = gene_association_network(&d, 1e-300, false).unwrap();
        assert_eq!(net.graph.edge_count(), 0);
    }

    #[test]
    fn false_edge_rate_stays_near_alpha() {
        let alpha = 0.01;
        let p = 6;
        let names = ["a", "b", "c", "d", "e", "f"];
        let mut tests = 0u64;
        let mut false_edges = 0u64;
        for seed in 0..40 {
            let mut rng = rng_from(3000 + seed);
            let cols: Vec<Vec<f64>> = (0..p)
                .map(|_| (0..2000).map(|_| standard_normal(&mut rng)).collect())
                .collect();
            let d = continuous_dataset(&names, cols);
            let net = gene_association_network(&d, alpha, false).unwrap();
            tests += (p * (p - 1) / 2) as u64;
            false_edges += net.graph.edge_count() as u64;
        }
        // binomial(600, 0.01): mean 6, 99% upper bound well under 13;
        // shrinkage biases the test conservative, so only the upper
        // bound is meaningful
        assert!(
            false_edges <= 13,
            "{false_edges} false edges in {tests} pair tests"
        );
    }

    #[test]
    fn bonferroni_matches_divided_alpha() {
        let mut rng = rng_from(251);
        let n = 400;
        let a: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let b: Vec<f64> = a.iter().map(|v| 0.2 * v + standard_normal(&mut rng)).collect();
        let c: Vec<f64> = b.iter().map(|v| 0.15 * v + standard_normal(&mut rng)).collect();
        let d = continuous_dataset(&["a", "b", "c"], vec![a, b, c]);
        for alpha in [0.01, 0.05, 0.2] {
            let corrected = gene_association_network(&d, alpha, true).unwrap();
            let divided = gene_association_network(&d, alpha / 3.0, false).unwrap();
            assert_eq!(corrected.weights, divided.weights);
            for key in corrected.weights.keys() {
                let raw = gene_association_network(&d, alpha, false).unwrap();
                assert!(raw.weights.contains_key(key), "correction added an edge");
            }
        }
    }

    #[test]
    fn degrees_of_freedom_guard() {
        let mut rng = rng_from(257);
        let n = 5;
        let cols: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..n).map(|_| standard_normal(&mut rng)).collect())
            .collect();
        let d = continuous_dataset(&["a", "b", "c", "d"], cols);
        // n - (p-2) - 3 = 0: refused
        match gene_association_network(&d, 0.05, false) {
            Err(Error::Untestable(msg)) => {
                assert!(msg.contains("relevance_network"), "should point at thresholding")
            }
            other => panic!("expected untestable, got {other:?}"),
        }
        // thresholding still works on the same data
        assert!(relevance_network(&d, 0.5).is_ok());
    }

    #[test]
    fn kind_and_shape_validation() {
        let d = Dataset::new(
            vec![VariableMeta::continuous("x"), VariableMeta::discrete("g", &["a", "b"])],
            vec![
                Column::Continuous(vec![1.0, 2.0, 3.0]),
                Column::Categorical(vec![0, 1, 0]),
            ],
        )
        .unwrap();
        assert!(matches!(relevance_network(&d, 0.5), Err(Error::KindMismatch(_))));

        let single = continuous_dataset(&["x"], vec![vec![1.0, 2.0, 3.0]]);
        assert!(shrinkage_partial_correlations(&single).is_err());

        let constant = continuous_dataset(
            &["x", "y"],
            vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]],
        );
        assert!(matches!(relevance_network(&constant, 0.0), Err(Error::Singular(_))));
    }
}
