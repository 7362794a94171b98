//! Constraint-based structure learning: the order-independent PC-stable
//! algorithm for whole networks and an IAMB-style grow/shrink procedure for
//! single Markov blankets, plus the symmetry correction that reconciles
//! per-variable blankets.
//!
//! All enumeration (node pairs, neighbors, conditioning subsets) runs in
//! lexicographic name order, so results and test logs are identical across
//! column permutations of the input.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ci::{run_test, TestKind, TestResult};
use crate::data::{Dataset, Kind};
use crate::error::{Error, Result};
use crate::graph::{orient_cpdag, LabelledGraph, Pdag};

/// Configuration shared by the learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    pub test: TestKind,
    /// Rejection level for the conditional-independence tests.
    pub alpha: f64,
    /// Cap on conditioning-set size; the effective cap is additionally
    /// bounded by p − 2, the largest size that can occur at all.
    pub max_cond_size: usize,
    /// Reserved for randomized tie-breaking; the default procedures are
    /// fully deterministic and never draw from it.
    pub seed: u64,
}

impl LearnConfig {
    pub fn new(test: TestKind, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0,1), got {alpha}"
            )));
        }
        Ok(LearnConfig { test, alpha, max_cond_size: 3, seed: 0 })
    }

    pub fn with_max_cond_size(mut self, m: usize) -> Self {
        self.max_cond_size = m;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Separating sets found during skeleton search, keyed by lexicographically
/// ordered name pair. Exactly the pairs absent from the skeleton appear.
pub type SepsetMap = BTreeMap<(String, String), Vec<String>>;

/// Everything pc_learn produces: the oriented graph, the separating sets,
/// the full audit log of tests, and warnings for untestable configurations
/// where an edge was conservatively retained.
#[derive(Debug, Clone)]
pub struct PcResult {
    pub pdag: Pdag,
    pub sepsets: SepsetMap,
    pub log: Vec<TestResult>,
    pub warnings: Vec<String>,
}

/// Markov-blanket estimate with its audit trail.
#[derive(Debug, Clone)]
pub struct MbResult {
    /// Blanket members in dataset column order.
    pub members: Vec<String>,
    pub log: Vec<TestResult>,
    pub warnings: Vec<String>,
}

/// Check that every column kind fits the chosen test's regime.
fn validate_regime(d: &Dataset, test: TestKind) -> Result<()> {
    for v in d.variables() {
        let ok = match test {
            TestKind::FisherZ => v.kind == Kind::Continuous,
            TestKind::G2 => v.kind.is_categorical(),
            TestKind::Jt => v.kind == Kind::Ordinal,
        };
        if !ok {
            return Err(Error::KindMismatch(format!(
                "variable {:?} is {} but the {} test needs a different regime",
                v.name,
                v.kind,
                test.name()
            )));
        }
    }
    Ok(())
}

fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// All k-element subsets of `items`, in lexicographic position order.
fn k_subsets(items: &[String], k: usize) -> Vec<Vec<String>> {
    fn rec(items: &[String], k: usize, start: usize, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let missing = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < missing {
                break;
            }
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Run one test, classifying the outcome: Some(p) when the test ran, None
/// when the configuration is untestable (recorded by the caller).
fn try_test(
    test: TestKind,
    d: &Dataset,
    x: &str,
    y: &str,
    cond: &[&str],
    log: &mut Vec<TestResult>,
    warnings: &mut Vec<String>,
) -> Result<Option<f64>> {
    match run_test(test, d, x, y, cond) {
        Ok(r) => {
            let p = r.p_value;
            log.push(r);
            Ok(Some(p))
        }
        Err(Error::Untestable(msg)) | Err(Error::Singular(msg)) => {
            warnings.push(format!("untestable: {x} vs {y} given {cond:?}: {msg}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// PC-stable: level-wise skeleton search with conditioning sets drawn from
/// fixed pre-level neighbor snapshots, collider detection from separating
/// sets, and orientation closure.
///
/// Untestable pairs keep their edge (conservative toward false negatives)
/// and leave a warning.
pub fn pc_learn(d: &Dataset, cfg: &LearnConfig) -> Result<PcResult> {
    cfg.validate()?;
    validate_regime(d, cfg.test)?;
    let p = d.p();

    let names: Vec<&str> = d.variables().iter().map(|v| v.name.as_str()).collect();
    let mut skeleton = LabelledGraph::complete(&names)?;

    let mut sorted: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    sorted.sort();

    let mut sepsets: SepsetMap = BTreeMap::new();
    let mut log = Vec::new();
    let mut warnings = Vec::new();

    let effective_max = cfg.max_cond_size.min(p.saturating_sub(2));
    for level in 0..=effective_max {
        // Neighbor snapshot taken before any removal at this level: the
        // property that makes PC-stable order-independent.
        let mut snapshot: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for name in &sorted {
            let mut adj = skeleton.adjacent(name)?;
            adj.sort();
            snapshot.insert(name.clone(), adj);
        }

        let mut any_candidate = false;
        for (i, x) in sorted.iter().enumerate() {
            for y in &sorted[i + 1..] {
                if !skeleton.has_edge(x, y) {
                    continue;
                }
                let mut tried: BTreeSet<Vec<String>> = BTreeSet::new();
                let mut removed = false;
                for side in [x, y] {
                    if removed {
                        break;
                    }
                    let other = if side == x { y } else { x };
                    let pool: Vec<String> =
                        snapshot[side].iter().filter(|n| *n != other).cloned().collect();
                    if pool.len() < level {
                        continue;
                    }
                    for subset in k_subsets(&pool, level) {
                        if !tried.insert(subset.clone()) {
                            continue;
                        }
                        any_candidate = true;
                        let cond: Vec<&str> = subset.iter().map(|s| s.as_str()).collect();
                        let p_value =
                            try_test(cfg.test, d, x, y, &cond, &mut log, &mut warnings)?;
                        if let Some(pv) = p_value {
                            if pv >= cfg.alpha {
                                skeleton.remove_edge(x, y)?;
                                sepsets.insert(pair_key(x, y), subset);
                                removed = true;
                                break;
                            }
                        }
                    }
                }
            }
        }
        if !any_candidate && level > 0 {
            break;
        }
    }

    // V-structures: for every nonadjacent pair with a common neighbor that
    // is not in their separating set, orient the collider.
    let mut colliders: Vec<(String, String, String)> = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if skeleton.has_edge(a, b) {
                continue;
            }
            let Some(sepset) = sepsets.get(&pair_key(a, b)) else {
                continue;
            };
            let adj_a: BTreeSet<String> = skeleton.adjacent(a)?.into_iter().collect();
            for c in skeleton.adjacent(b)? {
                if adj_a.contains(&c) && !sepset.contains(&c) {
                    colliders.push((a.clone(), c.clone(), b.clone()));
                }
            }
        }
    }
    let collider_refs: Vec<(&str, &str, &str)> =
        colliders.iter().map(|(a, c, b)| (a.as_str(), c.as_str(), b.as_str())).collect();
    let pdag = orient_cpdag(&skeleton, &collider_refs)?;

    Ok(PcResult { pdag, sepsets, log, warnings })
}

/// IAMB-style Markov-blanket discovery: grow by repeatedly admitting the
/// most significant dependent variable given the current blanket, then
/// shrink until every member stays significant given the others. Ties in
/// the grow phase break by column order.
///
/// For the asymmetric JT test the candidate plays the grouping role and the
/// target the response role.
pub fn learn_markov_blanket(d: &Dataset, target: &str, cfg: &LearnConfig) -> Result<MbResult> {
    cfg.validate()?;
    validate_regime(d, cfg.test)?;
    let target_idx = d.index_of(target)?;

    let mut log = Vec::new();
    let mut warnings = Vec::new();
    let mut blanket: Vec<usize> = Vec::new();

    let cond_names = |blanket: &[usize], skip: Option<usize>| -> Vec<String> {
        let mut v: Vec<String> = blanket
            .iter()
            .filter(|&&m| Some(m) != skip)
            .map(|&m| d.var(m).name.clone())
            .collect();
        v.sort();
        v
    };

    // grow
    loop {
        let mut best: Option<(usize, f64)> = None;
        let cond_owned = cond_names(&blanket, None);
        let cond: Vec<&str> = cond_owned.iter().map(|s| s.as_str()).collect();
        for cand in 0..d.p() {
            if cand == target_idx || blanket.contains(&cand) {
                continue;
            }
            let name = d.var(cand).name.as_str();
            let p_value = try_test(cfg.test, d, name, target, &cond, &mut log, &mut warnings)?;
            if let Some(pv) = p_value {
                if pv < cfg.alpha && best.map_or(true, |(_, bp)| pv < bp) {
                    best = Some((cand, pv));
                }
            }
        }
        match best {
            Some((cand, _)) => blanket.push(cand),
            None => break,
        }
    }

    // shrink
    'shrink: loop {
        blanket.sort_unstable();
        for (pos, &member) in blanket.iter().enumerate() {
            let cond_owned = cond_names(&blanket, Some(member));
            let cond: Vec<&str> = cond_owned.iter().map(|s| s.as_str()).collect();
            let name = d.var(member).name.as_str();
            let p_value = try_test(cfg.test, d, name, target, &cond, &mut log, &mut warnings)?;
            match p_value {
                Some(pv) if pv >= cfg.alpha => {
                    blanket.remove(pos);
                    continue 'shrink;
                }
                // untestable: keep the member, conservative as in pc_learn
                _ => {}
            }
        }
        break;
    }

    blanket.sort_unstable();
    Ok(MbResult {
        members: blanket.into_iter().map(|i| d.var(i).name.clone()).collect(),
        log,
        warnings,
    })
}

/// Which way to reconcile asymmetric blankets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryRule {
    /// Keep Y in MB(X) only when X is also in MB(Y).
    And,
    /// Add the missing direction.
    Or,
}

/// Make a family of blankets symmetric under the chosen rule. Missing keys
/// are treated as empty blankets.
pub fn symmetric_mb_correction(
    blankets: &BTreeMap<String, BTreeSet<String>>,
    rule: SymmetryRule,
) -> BTreeMap<String, BTreeSet<String>> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (x, members) in blankets {
        let entry = out.entry(x.clone()).or_default();
        for y in members {
            let reciprocal = blankets.get(y).map_or(false, |mb| mb.contains(x));
            match rule {
                SymmetryRule::And => {
                    if reciprocal {
                        entry.insert(y.clone());
                    }
                }
                SymmetryRule::Or => {
                    entry.insert(y.clone());
                }
            }
        }
    }
    if rule == SymmetryRule::Or {
        let snapshot: Vec<(String, BTreeSet<String>)> =
            out.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (x, members) in snapshot {
            for y in members {
                out.entry(y).or_default().insert(x.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, VariableMeta};
    use crate::graph::Mark;
    use crate::random::{rng_from, standard_normal, SeededRng};

    fn gaussian_dataset(names: &[&str], cols: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(
            names.iter().map(|n| VariableMeta::continuous(n)).collect(),
            cols.into_iter().map(Column::Continuous).collect(),
        )
        .unwrap()
    }

    fn noise(rng: &mut SeededRng, n: usize) -> Vec<f64> {
        (0..n).map(|_| standard_normal(rng)).collect()
    }

    #[test]
    fn independent_columns_give_empty_graph() {
        let mut rng = rng_from(101);
        let n = 5000;
        let cols: Vec<Vec<f64>> = (0..5).map(|_| noise(&mut rng, n)).collect();
        let d = gaussian_dataset(&["a", "b", "c", "d", "e"], cols);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.01).unwrap();
        let result = pc_learn(&d, &cfg).unwrap();
        assert!(
            result.pdag.as_graph().edge_count() <= 1,
            "expected at most one false edge, got {}",
            result.pdag.as_graph().edge_count()
        );
        assert!(result.warnings.is_empty());
    }

    #[test]
    fn chain_recovers_skeleton_and_sepset() {
        let mut rng = rng_from(103);
        let n = 10_000;
        let x1 = noise(&mut rng, n);
        let x2: Vec<f64> = x1.iter().map(|v| 0.8 * v).zip(noise(&mut rng, n)).map(|(s, e)| s + e).collect();
        let x3: Vec<f64> = x2.iter().map(|v| 0.8 * v).zip(noise(&mut rng, n)).map(|(s, e)| s + e).collect();
        let d = gaussian_dataset(&["x1", "x2", "x3"], vec![x1, x2, x3]);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.01).unwrap();
        let result = pc_learn(&d, &cfg).unwrap();
        let g = result.pdag.as_graph();
        assert!(g.has_edge("x1", "x2"));
        assert!(g.has_edge("x2", "x3"));
        assert!(!g.has_edge("x1", "x3"));
        assert_eq!(
            result.sepsets.get(&("x1".to_string(), "x3".to_string())).unwrap(),
            &vec!["x2".to_string()]
        );
        // chain has no collider: both edges stay undirected
        assert!(g.edges().iter().all(|e| e.mark == Mark::Undirected));
    }

    #[test]
    fn collider_is_oriented() {
        let mut rng = rng_from(107);
        let n = 10_000;
        let a = noise(&mut rng, n);
        let b = noise(&mut rng, n);
        let c: Vec<f64> = a
            .iter()
            .zip(&b)
            .zip(noise(&mut rng, n))
            .map(|((u, v), e)| 0.7 * u + 0.7 * v + e)
            .collect();
        let d = gaussian_dataset(&["a", "b", "c"], vec![a, b, c]);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.01).unwrap();
        let result = pc_learn(&d, &cfg).unwrap();
        let g = result.pdag.as_graph();
        assert!(g.has_directed("a", "c"), "collider tail a");
        assert!(g.has_directed("b", "c"), "collider tail b");
        assert!(!g.has_edge("a", "b"));
    }

    #[test]
    fn pc_is_invariant_to_column_permutation() {
        let mut rng = rng_from(109);
        let n = 2000;
        let a = noise(&mut rng, n);
        let b: Vec<f64> = a.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.9 * u + e).collect();
        let c: Vec<f64> = b.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.9 * u + e).collect();
        let e = noise(&mut rng, n);
        let d0 = gaussian_dataset(&["a", "b", "c", "e"], vec![a, b, c, e]);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.05).unwrap();
        let base = pc_learn(&d0, &cfg).unwrap();

        for order in [[3usize, 1, 0, 2], [2, 3, 1, 0], [1, 0, 3, 2]] {
            let shuffled = d0.with_column_order(&order).unwrap();
            let other = pc_learn(&shuffled, &cfg).unwrap();
            assert_eq!(crate::graph::shd(base.pdag.as_graph(), other.pdag.as_graph()).unwrap(), 0);
            assert_eq!(base.sepsets, other.sepsets);
            assert_eq!(base.log, other.log, "name-ordered enumeration fixes the log");
        }
    }

    #[test]
    fn absent_edges_carry_alpha_consistent_sepsets() {
        let mut rng = rng_from(113);
        let n = 1500;
        let a = noise(&mut rng, n);
        let b: Vec<f64> = a.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.6 * u + e).collect();
        let c: Vec<f64> = b.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.6 * u + e).collect();
        let e = noise(&mut rng, n);
        let d0 = gaussian_dataset(&["a", "b", "c", "e"], vec![a, b, c, e]);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.05).unwrap();
        let result = pc_learn(&d0, &cfg).unwrap();

        let g = result.pdag.as_graph();
        let names = g.nodes();
        for (i, x) in names.iter().enumerate() {
            for y in &names[i + 1..] {
                let key = pair_key(x, y);
                if g.has_edge(x, y) {
                    assert!(!result.sepsets.contains_key(&key), "adjacent pair with sepset");
                } else {
                    let sepset = result.sepsets.get(&key).expect("absent pair without sepset");
                    let hit = result.log.iter().any(|t| {
                        let same_pair = (t.x == *x && t.y == *y) || (t.x == *y && t.y == *x);
                        same_pair
                            && t.cond == *sepset
                            && t.p_value >= cfg.alpha
                    });
                    assert!(hit, "no log entry justifying sepset of ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(LearnConfig::new(TestKind::FisherZ, 0.0).is_err());
        assert!(LearnConfig::new(TestKind::FisherZ, 1.0).is_err());
        let d = gaussian_dataset(&["x", "y"], vec![vec![1.0, 2.0, 3.0, 4.0], vec![2.0, 1.0, 4.0, 3.0]]);
        let mut cfg = LearnConfig::new(TestKind::FisherZ, 0.05).unwrap();
        cfg.alpha = -1.0;
        assert!(pc_learn(&d, &cfg).is_err());
        assert!(learn_markov_blanket(&d, "x", &cfg).is_err());
    }

    #[test]
    fn regime_mismatch_is_rejected() {
        let d = Dataset::new(
            vec![VariableMeta::continuous("x"), VariableMeta::discrete("g", &["a", "b"])],
            vec![
                Column::Continuous(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
                Column::Categorical(vec![0, 1, 0, 1, 0, 1]),
            ],
        )
        .unwrap();
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.05).unwrap();
        assert!(matches!(pc_learn(&d, &cfg), Err(Error::KindMismatch(_))));
        let cfg = LearnConfig::new(TestKind::G2, 0.05).unwrap();
        assert!(matches!(learn_markov_blanket(&d, "g", &cfg), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn blanket_of_independent_target_is_empty() {
        let mut rng = rng_from(127);
        let n = 5000;
        let cols: Vec<Vec<f64>> = (0..4).map(|_| noise(&mut rng, n)).collect();
        let d = gaussian_dataset(&["t", "a", "b", "c"], cols);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.01).unwrap();
        let result = learn_markov_blanket(&d, "t", &cfg).unwrap();
        assert!(result.members.is_empty(), "got {:?}", result.members);
    }

    #[test]
    fn blanket_matches_generating_dag() {
        // p1 → t ← p2, t → ch, sp → ch: MB(t) = {p1, p2, ch, sp}
        let mut rng = rng_from(131);
        let n = 10_000;
        let p1 = noise(&mut rng, n);
        let p2 = noise(&mut rng, n);
        let t: Vec<f64> = p1
            .iter()
            .zip(&p2)
            .zip(noise(&mut rng, n))
            .map(|((a, b), e)| 0.8 * a - 0.8 * b + e)
            .collect();
        let sp = noise(&mut rng, n);
        let ch: Vec<f64> = t
            .iter()
            .zip(&sp)
            .zip(noise(&mut rng, n))
            .map(|((a, b), e)| 0.8 * a + 0.8 * b + e)
            .collect();
        let other = noise(&mut rng, n);
        let d = gaussian_dataset(
            &["p1", "p2", "t", "sp", "ch", "other"],
            vec![p1, p2, t, sp, ch, other],
        );
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.01).unwrap();
        let result = learn_markov_blanket(&d, "t", &cfg).unwrap();
        let expected: Vec<String> =
            ["p1", "p2", "sp", "ch"].iter().map(|s| s.to_string()).collect();
        assert_eq!(result.members, expected);
    }

    #[test]
    fn blanket_passes_its_own_shrink_phase() {
        let mut rng = rng_from(137);
        let n = 3000;
        let a = noise(&mut rng, n);
        let b: Vec<f64> = a.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.7 * u + e).collect();
        let t: Vec<f64> = b.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.7 * u + e).collect();
        let c = noise(&mut rng, n);
        let d = gaussian_dataset(&["a", "b", "t", "c"], vec![a, b, t, c]);
        let cfg = LearnConfig::new(TestKind::FisherZ, 0.05).unwrap();
        let result = learn_markov_blanket(&d, "t", &cfg).unwrap();
        for member in &result.members {
            let cond_owned: Vec<String> =
                result.members.iter().filter(|m| *m != member).cloned().collect();
            let cond: Vec<&str> = cond_owned.iter().map(|s| s.as_str()).collect();
            let r = run_test(cfg.test, &d, member, "t", &cond).unwrap();
            assert!(r.p_value < cfg.alpha, "{member} should stay: p = {}", r.p_value);
        }
    }

    #[test]
    fn blanket_grows_with_alpha() {
        let mut rng = rng_from(139);
        for round in 0..5 {
            let n = 800;
            let a = noise(&mut rng, n);
            let b: Vec<f64> = a.iter().zip(noise(&mut rng, n)).map(|(u, e)| 0.3 * u + e).collect();
            let t: Vec<f64> = a
                .iter()
                .zip(&b)
                .zip(noise(&mut rng, n))
                .map(|((u, v), e)| 0.25 * u + 0.2 * v + e)
                .collect();
            let c = noise(&mut rng, n);
            let d = gaussian_dataset(&["a", "b", "t", "c"], vec![a, b, t, c]);
            let mut previous: BTreeSet<String> = BTreeSet::new();
            for alpha in [0.01, 0.05, 0.2] {
                let cfg = LearnConfig::new(TestKind::FisherZ, alpha).unwrap();
                let current: BTreeSet<String> = learn_markov_blanket(&d, "t", &cfg)
                    .unwrap()
                    .members
                    .into_iter()
                    .collect();
                assert!(
                    previous.is_subset(&current),
                    "round {round}: blanket shrank when alpha rose: {previous:?} vs {current:?}"
                );
                previous = current;
            }
        }
    }

    #[test]
    fn discrete_blanket_via_g2() {
        let mut rng = rng_from(149);
        use rand::Rng;
        let n = 4000;
        let x: Vec<u32> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let t: Vec<u32> = x
            .iter()
            .map(|&v| if rng.random_range(0.0..1.0) < 0.75 { v } else { 1 - v })
            .collect();
        let z: Vec<u32> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let d = Dataset::new(
            vec![
                VariableMeta::discrete("x", &["0", "1"]),
                VariableMeta::discrete("t", &["0", "1"]),
                VariableMeta::discrete("z", &["0", "1"]),
            ],
            vec![
                Column::Categorical(x),
                Column::Categorical(t),
                Column::Categorical(z),
            ],
        )
        .unwrap();
        let cfg = LearnConfig::new(TestKind::G2, 0.01).unwrap();
        let result = learn_markov_blanket(&d, "t", &cfg).unwrap();
        assert_eq!(result.members, vec!["x".to_string()]);
    }

    #[test]
    fn symmetry_rules() {
        let mut blankets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        blankets.insert("A".into(), ["B"].iter().map(|s| s.to_string()).collect());
        blankets.insert("B".into(), BTreeSet::new());
        blankets.insert("C".into(), BTreeSet::new());

        let anded = symmetric_mb_correction(&blankets, SymmetryRule::And);
        assert!(anded["A"].is_empty(), "B removed from MB(A)");

        let ored = symmetric_mb_correction(&blankets, SymmetryRule::Or);
        assert!(ored["A"].contains("B"));
        assert!(ored["B"].contains("A"), "A added to MB(B)");

        for rule in [SymmetryRule::And, SymmetryRule::Or] {
            let fixed = symmetric_mb_correction(&ored, rule);
            assert_eq!(fixed, ored, "already-symmetric input unchanged");
            for (x, members) in &fixed {
                for y in members {
                    assert!(fixed[y].contains(x), "symmetry violated at ({x},{y})");
                }
            }
        }
    }
}
