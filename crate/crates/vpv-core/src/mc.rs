//! Seeded random streams and the deterministic parallel Monte Carlo driver.
//!
//! Every replication owns a substream derived only from (master seed,
//! replication index), so results are independent of how replications are
//! sharded across workers. Per-replication outputs are reduced within
//! fixed-size chunks and the chunk results are folded in index order, which
//! makes every estimate bit-reproducible for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A reproducible random stream: (master seed, substream index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    substream: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { seed, substream: 0 }
    }

    /// The same master seed with a different substream index.
    pub fn substream(&self, index: u64) -> Self {
        RandomStream { seed: self.seed, substream: index }
    }

    /// Derive an independent stream for a named sub-experiment.
    pub fn derive(&self, label: &str) -> Self {
        RandomStream { seed: splitmix(self.seed ^ fnv1a(label.as_bytes())), substream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Instantiate the generator for this (seed, substream) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.substream);
        rng
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Running count/sum/sum-of-squares for a scalar Monte Carlo output.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean (sample sd / sqrt(count)).
    pub fn std_err(&self) -> f64 {
        let n = self.count as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

const CHUNK: u64 = 256;

/// Run `reps` independent replications in parallel and reduce their outputs.
///
/// `body` receives the replication's own RNG and pushes one value per
/// registered output slot. The reduction is chunked so the result does not
/// depend on the number of worker threads.
pub fn run_replications<F>(stream: RandomStream, reps: u64, outputs: usize, body: F) -> Vec<Accumulator>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) + Sync,
{
    let n_chunks = reps.div_ceil(CHUNK);
    let chunk_stats: Vec<Vec<Accumulator>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut accs = vec![Accumulator::default(); outputs];
            let mut vals = Vec::with_capacity(outputs);
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(reps);
            for r in lo..hi {
                let mut rng = stream.substream(r).rng();
                vals.clear();
                body(&mut rng, &mut vals);
                debug_assert_eq!(vals.len(), outputs);
                for (a, &v) in accs.iter_mut().zip(vals.iter()) {
                    a.push(v);
                }
            }
            accs
        })
        .collect();

    let mut total = vec![Accumulator::default(); outputs];
    for chunk in &chunk_stats {
        for (t, a) in total.iter_mut().zip(chunk.iter()) {
            t.merge(a);
        }
    }
    total
}

/// Like [`run_replications`] but collects every replication's outputs,
/// in replication order, for estimators that need the full vector.
pub fn collect_replications<F>(stream: RandomStream, reps: u64, outputs: usize, body: F) -> Vec<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) + Sync,
{
    let n_chunks = reps.div_ceil(CHUNK);
    let chunks: Vec<Vec<Vec<f64>>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(reps);
            let mut rows = Vec::with_capacity((hi - lo) as usize);
            for r in lo..hi {
                let mut rng = stream.substream(r).rng();
                let mut vals = Vec::with_capacity(outputs);
                body(&mut rng, &mut vals);
                debug_assert_eq!(vals.len(), outputs);
                rows.push(vals);
            }
            rows
        })
        .collect();
    chunks.into_iter().flatten().collect()
}
