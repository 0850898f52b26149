use std::ops::Range;

use rand_chacha::ChaCha20Rng;

use super::exact::{Method, PerformanceOperator};
use super::haar::{haar_sample, GroupSpec};
use super::rng::{RngStream, CHUNK_SHOTS};
use crate::error::{Error, Result};
use crate::matrix::{choi_vec, tensor_power, ComplexMatrix, HermitianOperator, C64};

pub const THREADS_ENV: &str = "SYMTEST_THREADS";

/// Worker count from `SYMTEST_THREADS`; 1 when unset or invalid.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Runs `work` on every chunk of `shots` and returns the per-chunk results in
/// chunk order. Chunk `k` covers shots `k·CHUNK_SHOTS ..` and receives the
/// generator positioned at chunk `k` of `rng`, so the output depends only on
/// `(rng, shots)` and not on the worker count.
pub fn map_chunks<T, F>(shots: usize, rng: RngStream, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha20Rng, Range<usize>) -> T + Sync,
{
    map_chunks_on(worker_count(), shots, rng, work)
}

pub(crate) fn map_chunks_on<T, F>(workers: usize, shots: usize, rng: RngStream, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha20Rng, Range<usize>) -> T + Sync,
{
    let chunks = shots.div_ceil(CHUNK_SHOTS);
    let range = |k: usize| k * CHUNK_SHOTS..((k + 1) * CHUNK_SHOTS).min(shots);
    let run = |k: usize| work(&mut rng.chunk(k as u64), range(k));
    let workers = workers.min(chunks.max(1));
    if workers <= 1 {
        return (0..chunks).map(run).collect();
    }
    let mut slots: Vec<Option<T>> = (0..chunks).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let run = &run;
                scope.spawn(move || (w..chunks).step_by(workers).map(|k| (k, run(k))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (k, v) in h.join().expect("worker panicked") {
                slots[k] = Some(v);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every chunk ran")).collect()
}

/// `vec(U^{⊗n})` for a sampled `U`.
pub(crate) fn choi_of_power(u: &ComplexMatrix, n: u32) -> Vec<C64> {
    choi_vec(&tensor_power(u, n).expect("guarded by caller")).expect("square")
}

struct Moments {
    sum: Vec<C64>,
    sum_sq: Vec<f64>,
}

/// Empirical mean of `|f(U)⟩⟩⟨⟨f(U)|` over `shots` Haar samples.
///
/// `stderr` is the largest per-entry standard error.
pub fn performance_operator_mc(group: GroupSpec, n: u32, shots: usize, rng: RngStream) -> Result<PerformanceOperator> {
    group.validate()?;
    if shots < 100 {
        return Err(Error::InvalidArgument(format!("shots = {shots} is below 100")));
    }
    let d = group.d();
    let side = (d as usize).checked_pow(2 * n).filter(|&s| s <= 4096).ok_or(Error::SizeGuard {
        side: usize::MAX,
        limit: 4096,
    })?;
    let parts = map_chunks(shots, rng, |g, r| {
        let mut m = Moments {
            sum: vec![C64::new(0.0, 0.0); side * side],
            sum_sq: vec![0.0; side * side],
        };
        for _ in r {
            let v = choi_of_power(&haar_sample(group, g), n);
            for (a, va) in v.iter().enumerate() {
                let row = &mut m.sum[a * side..(a + 1) * side];
                let row_sq = &mut m.sum_sq[a * side..(a + 1) * side];
                for (b, vb) in v.iter().enumerate() {
                    let x = va * vb.conj();
                    row[b] += x;
                    row_sq[b] += x.norm_sqr();
                }
            }
        }
        m
    });
    let mut total = parts.into_iter();
    let mut acc = total.next().expect("shots >= 100");
    for p in total {
        for (a, b) in acc.sum.iter_mut().zip(&p.sum) {
            *a += b;
        }
        for (a, b) in acc.sum_sq.iter_mut().zip(&p.sum_sq) {
            *a += b;
        }
    }
    let count = shots as f64;
    let mut stderr: f64 = 0.0;
    for (s, sq) in acc.sum.iter().zip(&acc.sum_sq) {
        let mean = s / count;
        let var = (sq / count - mean.norm_sqr()).max(0.0);
        stderr = stderr.max((var / count).sqrt());
    }
    let mean = ComplexMatrix::new(side, side, acc.sum.iter().map(|s| s / count).collect())?;
    Ok(PerformanceOperator {
        op: HermitianOperator::symmetrized(mean)?,
        method: Method::MonteCarlo,
        stderr: Some(stderr),
        n,
        d,
    })
}
