//! Parallel benchmark drivers. Replicates are embarrassingly parallel and
//! each one is a pure function of its derived seed, so results are
//! identical to the serial drivers for every thread count: the per
//! replicate outcomes are computed in any order, then folded in replicate
//! order.

use rayon::prelude::*;

use seqnet_core::ci::TestKind;
use seqnet_core::learn::LearnConfig;
use seqnet_core::random::derive_seeds;
use seqnet_core::sim::{
    power_single_replicate, recovery_benchmark, PowerRow, PowerTable, RecoveryConfig,
    RecoveryTable, SnpScenario, TestOutcome,
};
use seqnet_core::Error as CoreError;

use crate::{CliError, Result};

/// Build a rayon pool capped at `threads` workers (0 = rayon default).
pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if threads > 0 {
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| CliError::Format(format!("thread pool: {e}")))
}

/// Parallel twin of the serial power benchmark: same seed derivation, same
/// counts, same warning order.
pub fn power_benchmark(
    scenarios: &[SnpScenario],
    tests: &[TestKind],
    alpha: f64,
    replicates: u64,
    seed: u64,
    threads: usize,
    progress: impl Fn(&str) + Sync,
) -> Result<PowerTable> {
    if scenarios.is_empty() || tests.is_empty() {
        return Err(CoreError::InvalidArgument(
            "need at least one scenario and one test".into(),
        )
        .into());
    }
    if replicates < 100 {
        return Err(CoreError::InvalidArgument(format!(
            "need at least 100 replicates for a rate estimate, got {replicates}"
        ))
        .into());
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        ))
        .into());
    }

    let pool = pool(threads)?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let scenario_seeds = derive_seeds(seed, scenarios.len());
    for (idx, (s, &scenario_seed)) in scenarios.iter().zip(&scenario_seeds).enumerate() {
        s.validate()?;
        progress(&format!(
            "scenario {}/{}: {}",
            idx + 1,
            scenarios.len(),
            s.label()
        ));
        let replicate_seeds = derive_seeds(scenario_seed, replicates as usize);
        // compute out of order, fold in replicate order
        let outcomes: Vec<Vec<(TestKind, TestOutcome)>> = pool.install(|| {
            replicate_seeds
                .par_iter()
                .map(|&rep_seed| power_single_replicate(s, tests, alpha, rep_seed))
                .collect::<seqnet_core::Result<Vec<_>>>()
        })?;
        let mut rejections = vec![0u64; tests.len()];
        let mut untestable = vec![0u64; tests.len()];
        for (r, replicate) in outcomes.iter().enumerate() {
            for (t, &(test, outcome)) in replicate.iter().enumerate() {
                match outcome {
                    TestOutcome::Reject => rejections[t] += 1,
                    TestOutcome::Accept => {}
                    TestOutcome::Untestable => {
                        untestable[t] += 1;
                        warnings.push(format!(
                            "{} replicate {r}: {} untestable, counted as non-rejection",
                            s.label(),
                            test.name()
                        ));
                    }
                }
            }
        }
        for (t, &test) in tests.iter().enumerate() {
            rows.push(PowerRow {
                scenario: s.label(),
                test,
                n: s.n,
                replicates,
                rejections: rejections[t],
                untestable: untestable[t],
            });
        }
    }
    Ok(PowerTable { rows, warnings })
}

/// Recovery benchmark under a capped pool. The core driver is serial per
/// replicate; replicate work is not split further, so the pool only bounds
/// what rayon-using callees may spawn and results match the serial driver.
pub fn recovery(
    config: &RecoveryConfig,
    learn_cfg: &LearnConfig,
    replicates: u64,
    seed: u64,
    threads: usize,
) -> Result<RecoveryTable> {
    let pool = pool(threads)?;
    Ok(pool.install(|| recovery_benchmark(config, learn_cfg, replicates, seed))?)
}
