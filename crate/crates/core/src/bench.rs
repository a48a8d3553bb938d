//! Timing harness comparing the fast and quadratic checkers on seeded random automata.

use std::io;
use std::time::Instant;

use serde::Serialize;

use crate::fast::{is_synchronizing_fast, Path};
use crate::pair::is_synchronizing_quadratic;
use crate::random::{sample_dfa, trial_seed};

pub const FAST: &str = "fast";
pub const QUADRATIC: &str = "quadratic";

/// One row of the benchmark CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub algorithm: String,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub p95_ns: f64,
    pub nonsync_count: usize,
    pub fallback_count: usize,
    pub seed: u64,
}

/// Times both checkers on `trials` automata per size, instance `i` drawn with seed
/// `seed + i`. Each algorithm first runs `warmup` untimed calls on instance 0.
///
/// Panics if the two checkers disagree on an instance.
pub fn bench_checkers(
    sizes: &[usize],
    k: usize,
    trials: usize,
    seed: u64,
    warmup: usize,
) -> Vec<BenchRecord> {
    assert!(
        !sizes.is_empty() && trials >= 1,
        "need sizes and at least one trial"
    );
    let mut records = Vec::with_capacity(2 * sizes.len());
    for &n in sizes {
        let instances: Vec<_> = (0..trials as u64)
            .map(|i| sample_dfa(n, k, trial_seed(seed, i)))
            .collect();

        for _ in 0..warmup {
            std::hint::black_box(is_synchronizing_fast(&instances[0]));
        }
        let mut times = Vec::with_capacity(trials);
        let mut fast_answers = Vec::with_capacity(trials);
        let mut fallbacks = 0;
        for d in &instances {
            let start = Instant::now();
            let out = std::hint::black_box(is_synchronizing_fast(d));
            times.push(start.elapsed().as_nanos() as f64);
            fallbacks += (out.path == Path::Fallback) as usize;
            fast_answers.push(out.answer);
        }
        records.push(record(
            n,
            k,
            FAST,
            &mut times,
            &fast_answers,
            fallbacks,
            seed,
        ));

        for _ in 0..warmup {
            std::hint::black_box(is_synchronizing_quadratic(&instances[0]));
        }
        times.clear();
        let mut answers = Vec::with_capacity(trials);
        for d in &instances {
            let start = Instant::now();
            let yes = std::hint::black_box(is_synchronizing_quadratic(d));
            times.push(start.elapsed().as_nanos() as f64);
            answers.push(yes);
        }
        assert_eq!(fast_answers, answers, "checkers disagree at n = {n}");
        records.push(record(n, k, QUADRATIC, &mut times, &answers, 0, seed));
    }
    records
}

fn record(
    n: usize,
    k: usize,
    algorithm: &str,
    times: &mut [f64],
    answers: &[bool],
    fallback_count: usize,
    seed: u64,
) -> BenchRecord {
    times.sort_by(f64::total_cmp);
    let len = times.len();
    let median = if len % 2 == 1 {
        times[len / 2]
    } else {
        (times[len / 2 - 1] + times[len / 2]) / 2.0
    };
    let p95 = times[((len as f64 * 0.95).ceil() as usize).clamp(1, len) - 1];
    BenchRecord {
        n,
        k,
        trials: len,
        algorithm: algorithm.to_owned(),
        mean_ns: times.iter().sum::<f64>() / len as f64,
        median_ns: median,
        p95_ns: p95,
        nonsync_count: answers.iter().filter(|&&a| !a).count(),
        fallback_count,
        seed,
    }
}

/// Writes records as CSV with the header
/// `n,k,trials,algorithm,mean_ns,median_ns,p95_ns,nonsync_count,fallback_count,seed`.
pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
