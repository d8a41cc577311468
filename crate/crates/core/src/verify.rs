//! Monte Carlo estimation of differential-linear correlations.
//!
//! Randomness comes from ChaCha8 streams addressed by `(seed, key index, block)`,
//! so results do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cipher::{CipherSpec, KeyMaterial};
use crate::error::{Error, Result};
use crate::word::Pair;

const BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMode {
    /// Random master keys through the cipher's key schedule.
    RealSchedule,
    /// Independent uniformly random round keys.
    IndependentRoundKeys,
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub spec: CipherSpec,
    pub delta_in: Pair,
    pub lambda_out: Pair,
    pub rounds: usize,
    /// Plaintext pairs per key.
    pub samples: u64,
    pub keys: usize,
    pub key_mode: KeyMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub per_key: Vec<f64>,
    pub mean_abs: f64,
    pub log2: f64,
    /// Standard error of `mean_abs` over keys.
    pub stderr: f64,
}

impl ExperimentResult {
    fn from_per_key(per_key: Vec<f64>, samples: u64) -> Self {
        let k = per_key.len() as f64;
        let mean_abs = per_key.iter().map(|c| c.abs()).sum::<f64>() / k;
        let stderr = if per_key.len() > 1 {
            let var = per_key.iter().map(|c| (c.abs() - mean_abs).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        } else {
            1.0 / (samples as f64).sqrt()
        };
        ExperimentResult { per_key, mean_abs, log2: mean_abs.log2(), stderr }
    }
}

fn round_keys(plan: &ExperimentPlan, key_index: usize) -> Result<Vec<u64>> {
    let spec = &plan.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(u64::MAX - key_index as u64);
    let material = match plan.key_mode {
        KeyMode::RealSchedule => {
            KeyMaterial::RealSchedule((0..spec.key_words).map(|_| rng.gen::<u64>() & spec.mask()).collect())
        }
        KeyMode::IndependentRoundKeys => {
            KeyMaterial::IndependentRoundKeys((0..plan.rounds).map(|_| rng.gen::<u64>() & spec.mask()).collect())
        }
    };
    spec.key_schedule(&material, plan.rounds)
}

/// Round function with rotation amounts reduced once, for the sampling loop.
#[derive(Clone, Copy)]
struct FastRound {
    mask: u64,
    /// `(left shift, right shift)` for each of `S^a`, `S^b`, `S^c`.
    shifts: [(u32, u32); 3],
}

impl FastRound {
    fn new(spec: &CipherSpec) -> Self {
        let n = spec.n;
        let pair = |t: u32| {
            let t = t % n;
            // A right shift by n is expressed as two shifts so it stays in range for n = 64.
            (t, n - t)
        };
        FastRound { mask: spec.mask(), shifts: [pair(spec.a), pair(spec.b), pair(spec.c)] }
    }

    #[inline(always)]
    fn rot(&self, x: u64, (l, r): (u32, u32)) -> u64 {
        ((x << l) | ((x >> (r - 1)) >> 1)) & self.mask
    }

    /// Encrypts `L` independent states in lockstep so their round chains overlap.
    #[inline(always)]
    fn encrypt_lanes<const L: usize>(&self, mut x: [u64; L], mut y: [u64; L], keys: &[u64]) -> ([u64; L], [u64; L]) {
        let [a, b, c] = self.shifts;
        for &k in keys {
            for i in 0..L {
                let f = (self.rot(x[i], a) & self.rot(x[i], b)) ^ self.rot(x[i], c);
                (x[i], y[i]) = (f ^ y[i] ^ k, x[i]);
            }
        }
        (x, y)
    }
}

const LANES: usize = 4;

/// Signed correlation for one key: `(1/N) sum (-1)^{<lambda, E(x) ^ E(x ^ delta)>}`.
fn correlation_for_key(plan: &ExperimentPlan, key_index: usize) -> Result<f64> {
    let spec = plan.spec;
    let keys = round_keys(plan, key_index)?;
    let n = spec.n;
    let wide = 2 * n > 64;
    let words_per_sample: u128 = if wide { 4 } else { 2 };
    let (dl, dr) = (plan.delta_in.left, plan.delta_in.right);
    let (ll, lr) = (plan.lambda_out.left, plan.lambda_out.right);
    let fast = FastRound::new(&spec);
    let blocks = plan.samples.div_ceil(BLOCK);
    let odd: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(key_index as u64);
            rng.set_word_pos(b as u128 * BLOCK as u128 * words_per_sample);
            let count = BLOCK.min(plan.samples - b * BLOCK);
            let mut odd = 0u64;
            let mut draw = || {
                if wide {
                    (rng.gen::<u64>() & spec.mask(), rng.gen::<u64>() & spec.mask())
                } else {
                    let r = rng.gen::<u64>();
                    (r & spec.mask(), (r >> n) & spec.mask())
                }
            };
            let mut done = 0;
            while done < count {
                let lanes = LANES.min((count - done) as usize);
                let (mut x, mut y) = ([0u64; 2 * LANES], [0u64; 2 * LANES]);
                for i in 0..lanes {
                    (x[i], y[i]) = draw();
                    (x[LANES + i], y[LANES + i]) = (x[i] ^ dl, y[i] ^ dr);
                }
                let (c0, c1) = fast.encrypt_lanes(x, y, &keys);
                for i in 0..lanes {
                    let (d0, d1) = (c0[i] ^ c0[LANES + i], c1[i] ^ c1[LANES + i]);
                    odd += ((d0 & ll).count_ones() + (d1 & lr).count_ones()) as u64 & 1;
                }
                done += lanes as u64;
            }
            odd
        })
        .sum();
    Ok((plan.samples as f64 - 2.0 * odd as f64) / plan.samples as f64)
}

pub fn estimate(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    if plan.samples == 0 || plan.keys == 0 {
        return Err(Error::Config("samples and keys must be at least 1".into()));
    }
    let per_key = (0..plan.keys).map(|k| correlation_for_key(plan, k)).collect::<Result<Vec<f64>>>()?;
    Ok(ExperimentResult::from_per_key(per_key, plan.samples))
}

/// The same statistic over `rounds` rounds from a concrete difference, with
/// independent round keys; compares against the continuous-difference estimate.
pub fn estimate_middle(
    spec: &CipherSpec,
    delta: Pair,
    mask: Pair,
    rounds: usize,
    samples: u64,
    keys: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    estimate(&ExperimentPlan {
        spec: *spec,
        delta_in: delta,
        lambda_out: mask,
        rounds,
        samples,
        keys,
        key_mode: KeyMode::IndependentRoundKeys,
        seed,
    })
}

pub const CSV_HEADER: &str = "cipher,rounds,delta_in,lambda_out,N,K,mean_abs_cor,log2,stderr,seed";

/// One CSV row; pair columns are quoted since they contain commas.
pub fn csv_row(plan: &ExperimentPlan, result: &ExperimentResult) -> String {
    format!(
        "{},{},\"{}\",\"{}\",{},{},{:.6e},{:.4},{:.3e},{}",
        plan.spec.name(),
        plan.rounds,
        plan.delta_in,
        plan.lambda_out,
        plan.samples,
        plan.keys,
        result.mean_abs,
        result.log2,
        result.stderr,
        plan.seed
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::middle::ContState;

    fn plan(spec: CipherSpec, d: Pair, l: Pair, rounds: usize, samples: u64, keys: usize) -> ExperimentPlan {
        ExperimentPlan {
            spec,
            delta_in: d,
            lambda_out: l,
            rounds,
            samples,
            keys,
            key_mode: KeyMode::RealSchedule,
            seed: 1,
        }
    }

    #[test]
    fn zero_rounds_is_exact() {
        let s = CipherSpec::simon32();
        let r = estimate(&plan(s, Pair::new(0x8, 0x22), Pair::new(0x8, 0x0), 0, 1000, 3)).unwrap();
        assert!(r.per_key.iter().all(|&c| c == -1.0));
        let r = estimate(&plan(s, Pair::new(0x8, 0x22), Pair::new(0x10, 0x1), 0, 1000, 3)).unwrap();
        assert!(r.per_key.iter().all(|&c| c == 1.0));
    }

    #[test]
    fn zero_difference_has_full_correlation() {
        let s = CipherSpec::simeck32();
        let r = estimate_middle(&s, Pair::ZERO, Pair::new(0x1234, 0x1), 6, 5000, 2, 9).unwrap();
        assert_eq!(r.mean_abs, 1.0);
    }

    #[test]
    fn one_round_matches_continuous_difference() {
        let s = CipherSpec::simon32();
        let d = Pair::new(0x22, 0x8);
        let st = ContState::from_difference(&s, d).step(&s);
        let n = 1 << 16;
        for mask in [Pair::new(0x2, 0), Pair::new(0x8, 0), Pair::new(0x80, 0x2)] {
            let r = estimate_middle(&s, d, mask, 1, n, 1, 5).unwrap();
            let want = st.correlation(mask);
            let se = 1.0 / (n as f64).sqrt();
            assert!((r.per_key[0] - want).abs() < 3.0 * se, "{mask}: {} vs {want}", r.per_key[0]);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let p = plan(CipherSpec::simon48(), Pair::new(0x8, 0x22), Pair::new(0x40, 0x10), 7, 100_000, 2);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| estimate(&p).unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| estimate(&p).unwrap());
        assert_eq!(one, four);
        assert_eq!(estimate(&p).unwrap(), one);
    }

    #[test]
    fn fast_round_matches_cipher() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for spec in [CipherSpec::simon32(), CipherSpec::simeck48(), CipherSpec::simon128()] {
            let fast = FastRound::new(&spec);
            let keys: Vec<u64> = (0..9).map(|_| rng.gen::<u64>() & spec.mask()).collect();
            for _ in 0..100 {
                let p = (rng.gen::<u64>() & spec.mask(), rng.gen::<u64>() & spec.mask());
                let (x, y) = fast.encrypt_lanes([p.0], [p.1], &keys);
                assert_eq!((x[0], y[0]), spec.encrypt_unchecked(p, &keys));
            }
        }
    }

    #[test]
    fn csv_has_ten_columns() {
        let p = plan(CipherSpec::simon32(), Pair::new(0x8, 0x22), Pair::new(0x40, 0x10), 3, 100, 1);
        let r = estimate(&p).unwrap();
        let row = csv_row(&p, &r);
        assert!(row.starts_with("simon32,3,\"(0x8,0x22)\",\"(0x40,0x10)\",100,1,"));
        assert_eq!(CSV_HEADER.split(',').count(), 10);
    }
}
