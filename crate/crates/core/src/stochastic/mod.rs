//! Coupled simulation of the random waiting times until a uniform letter
//! stream becomes a superpattern.
//!
//! Three stopping rules run on one shared stream of uniform letters from
//! [k]:
//!
//! * `Y` — block decomposition: block 1 ends when every letter of [k] has
//!   appeared; its last new letter k₁ retires, and block 2 collects the
//!   remaining k−1 letters, and so on. Y is the position closing the k-th
//!   block. The retired letters k₁..k_k always form a permutation.
//! * `X` — the first prefix that is a superpattern for length k over [k];
//!   detected by the all-permutations matcher, which is exact for d = k.
//! * `Z` — the k-th complete coupon round; exactly when the prefix contains
//!   every k-letter word over [k], so Z witnesses the omnisequence property.
//!
//! Pathwise Y ≤ X ≤ Z; the test suite checks the coupling on every trial.
//!
//! Reproducibility: trial i uses seed `trial_seed(master_seed, i)` (a
//! splitmix64 stream over the master seed) feeding a ChaCha12 generator, so
//! results are a pure function of (k, master_seed, trials) regardless of
//! thread count. Summaries are computed from exact integer sums, making them
//! bit-identical across schedules.

mod closed;
mod exact;

pub use closed::{closed_forms, harmonic, harmonic_second, rational_to_f64, ClosedForms, EULER_GAMMA};
pub use exact::{exact_expectation, Process, X_EXACT_MAX_K, Z_EXACT_MAX_K};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::matcher::PermutationMatcher;

/// X needs the k!-permutation matcher; beyond this k only Y and Z are kept.
pub const X_TRACKING_MAX_K: usize = 7;
/// Largest alphabet for the stream tracker (letters are stored in a u64 set).
pub const TRACKER_MAX_K: usize = 63;

/// Recorded in reports so an independent implementation can replay runs.
pub const GENERATOR: &str = "ChaCha12 seeded per trial by a splitmix64 stream over the master seed";

/// Two-sided 99% normal quantile used for confidence half-widths.
pub const CONFIDENCE_Z: f64 = 2.575829303548901;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamConfig {
    pub k: usize,
    pub master_seed: u64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: u64,
    pub y: u64,
    /// Absent when k exceeds [`X_TRACKING_MAX_K`].
    pub x: Option<u64>,
    pub z: u64,
    /// (retired letter k_i, closing position p_i) for each block of Y.
    pub blocks: Vec<(u8, u64)>,
}

/// Per-trial seed: the `trial+1`-th output of a splitmix64 stream whose
/// state starts at `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add((trial + 1).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Incremental tracker for the three stopping rules on one stream.
pub struct StreamTracker {
    k: usize,
    full: u64,
    step: u64,
    active: u64,
    block_remaining: u64,
    blocks: Vec<(u8, u64)>,
    y: Option<u64>,
    matcher: Option<PermutationMatcher>,
    x: Option<u64>,
    z_seen: u64,
    z_rounds: usize,
    z: Option<u64>,
}

impl StreamTracker {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > TRACKER_MAX_K {
            return Err(Error::InvalidParameter(format!(
                "stream tracker supports 1 <= k <= {TRACKER_MAX_K}, got {k}"
            )));
        }
        let matcher = if k <= X_TRACKING_MAX_K {
            Some(PermutationMatcher::new(k)?)
        } else {
            None
        };
        let full = (1u64 << k) - 1;
        Ok(StreamTracker {
            k,
            full,
            step: 0,
            active: full,
            block_remaining: full,
            blocks: Vec::with_capacity(k),
            y: None,
            matcher,
            x: None,
            z_seen: 0,
            z_rounds: 0,
            z: None,
        })
    }

    /// Clears all stream state; the permutation table is reused.
    pub fn reset(&mut self) {
        self.step = 0;
        self.active = self.full;
        self.block_remaining = self.full;
        self.blocks.clear();
        self.y = None;
        self.x = None;
        self.z_seen = 0;
        self.z_rounds = 0;
        self.z = None;
        if let Some(m) = &mut self.matcher {
            m.reset();
        }
    }

    pub fn feed(&mut self, letter: u8) -> Result<()> {
        if letter == 0 || letter as usize > self.k {
            return Err(Error::LetterOutOfRange { letter: letter as u32, d: self.k as u32 });
        }
        self.step += 1;
        let bit = 1u64 << (letter - 1);

        if self.y.is_none() && self.block_remaining & bit != 0 {
            self.block_remaining &= !bit;
            if self.block_remaining == 0 {
                self.blocks.push((letter, self.step));
                self.active &= !bit;
                self.block_remaining = self.active;
                if self.active == 0 {
                    self.y = Some(self.step);
                }
            }
        }

        if self.x.is_none() {
            if let Some(m) = &mut self.matcher {
                m.feed(letter)?;
                if m.is_complete() {
                    self.x = Some(self.step);
                }
            }
        }

        if self.z.is_none() {
            self.z_seen |= bit;
            if self.z_seen == self.full {
                self.z_seen = 0;
                self.z_rounds += 1;
                if self.z_rounds == self.k {
                    self.z = Some(self.step);
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn tracks_x(&self) -> bool {
        self.matcher.is_some()
    }

    pub fn y(&self) -> Option<u64> {
        self.y
    }

    pub fn x(&self) -> Option<u64> {
        self.x
    }

    pub fn z(&self) -> Option<u64> {
        self.z
    }

    pub fn blocks(&self) -> &[(u8, u64)] {
        &self.blocks
    }

    /// All tracked rules have fired (X only counts when tracked).
    pub fn all_fired(&self) -> bool {
        self.y.is_some() && self.z.is_some() && (self.matcher.is_none() || self.x.is_some())
    }
}

/// Runs one stream to completion of every tracked stopping rule.
pub fn run_trial(k: usize, seed: u64) -> Result<TrialRecord> {
    let mut tracker = StreamTracker::new(k)?;
    let letters = Uniform::new_inclusive(1u8, k as u8);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    while !tracker.all_fired() {
        tracker.feed(letters.sample(&mut rng))?;
    }
    Ok(TrialRecord {
        seed,
        y: tracker.y.expect("fired"),
        x: tracker.x,
        z: tracker.z.expect("fired"),
        blocks: tracker.blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub trials: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// 99% normal-approximation half-width, CONFIDENCE_Z·√(variance/trials).
    pub ci_half_width: f64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub k: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub generator: &'static str,
    pub y: SummaryStats,
    pub x: Option<SummaryStats>,
    pub z: SummaryStats,
}

/// Runs `config.trials` independent streams and summarizes each stopping
/// time. Output is bit-identical for any `thread_count`.
pub fn simulate(config: &StreamConfig, thread_count: usize) -> Result<SimulationReport> {
    if config.trials < 2 {
        return Err(Error::InvalidParameter("simulation needs at least 2 trials".into()));
    }
    let (ys, xs, zs) = run_streams(config.k, config.master_seed, config.trials, thread_count)?;
    Ok(SimulationReport {
        k: config.k,
        trials: config.trials,
        master_seed: config.master_seed,
        generator: GENERATOR,
        y: summarize(&ys, config.master_seed),
        x: xs.map(|v| summarize(&v, config.master_seed)),
        z: summarize(&zs, config.master_seed),
    })
}

/// The stopping times of all trials, in trial order. X column present only
/// when k is within the tracking cap.
#[allow(clippy::type_complexity)]
pub fn run_streams(
    k: usize,
    master_seed: u64,
    trials: u64,
    thread_count: usize,
) -> Result<(Vec<u64>, Option<Vec<u64>>, Vec<u64>)> {
    StreamTracker::new(k)?;
    let n = usize::try_from(trials)
        .map_err(|_| Error::InvalidParameter("trial count exceeds address space".into()))?;
    let track_x = k <= X_TRACKING_MAX_K;
    let mut ys = vec![0u64; n];
    let mut xs = vec![0u64; if track_x { n } else { 0 }];
    let mut zs = vec![0u64; n];
    let workers = thread_count.max(1).min(n.max(1));
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        let mut x_rest = xs.as_mut_slice();
        for (ti, (y_chunk, z_chunk)) in ys.chunks_mut(chunk).zip(zs.chunks_mut(chunk)).enumerate() {
            let x_chunk = if track_x {
                let (head, tail) = std::mem::take(&mut x_rest).split_at_mut(y_chunk.len());
                x_rest = tail;
                head
            } else {
                &mut []
            };
            scope.spawn(move || {
                let mut tracker = StreamTracker::new(k).expect("k validated");
                let letters = Uniform::new_inclusive(1u8, k as u8);
                for i in 0..y_chunk.len() {
                    let seed = trial_seed(master_seed, (ti * chunk + i) as u64);
                    let mut rng = ChaCha12Rng::seed_from_u64(seed);
                    tracker.reset();
                    while !tracker.all_fired() {
                        tracker.feed(letters.sample(&mut rng)).expect("letter in range");
                    }
                    y_chunk[i] = tracker.y.expect("fired");
                    z_chunk[i] = tracker.z.expect("fired");
                    if track_x {
                        x_chunk[i] = tracker.x.expect("fired");
                    }
                }
            });
        }
    });
    Ok((ys, track_x.then_some(xs), zs))
}

/// Mean/variance from exact integer sums, so the result does not depend on
/// accumulation order.
fn summarize(values: &[u64], master_seed: u64) -> SummaryStats {
    let n = values.len() as u128;
    let sum: u128 = values.iter().map(|&v| v as u128).sum();
    let sumsq: u128 = values.iter().map(|&v| (v as u128) * (v as u128)).sum();
    let nf = n as f64;
    let mean = sum as f64 / nf;
    let variance = if n > 1 {
        (n * sumsq - sum * sum) as f64 / (nf * (nf - 1.0))
    } else {
        0.0
    };
    SummaryStats {
        trials: n as u64,
        mean,
        variance,
        ci_half_width: CONFIDENCE_Z * (variance / nf).sqrt(),
        master_seed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub k: usize,
    pub omega: f64,
    pub trials: u64,
    pub master_seed: u64,
    /// k²ln k − (1−γ)k² − ω·k^{3/2}.
    pub lower: f64,
    /// k²ln k + γk² + ω·k^{3/2}.
    pub upper: f64,
    pub inside: u64,
    pub fraction: f64,
}

/// Measures how often X_k falls inside the two-sided concentration interval
/// at a caller-chosen ω.
pub fn concentration_check(
    k: usize,
    omega: f64,
    trials: u64,
    master_seed: u64,
    thread_count: usize,
) -> Result<ConcentrationReport> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "concentration interval is degenerate for k < 2".into(),
        ));
    }
    if k > X_TRACKING_MAX_K {
        return Err(Error::StateSpaceTooLarge { k, cap: X_TRACKING_MAX_K });
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let kf = k as f64;
    let base = kf * kf * kf.ln();
    let lower = base - (1.0 - EULER_GAMMA) * kf * kf - omega * kf.powf(1.5);
    let upper = base + EULER_GAMMA * kf * kf + omega * kf.powf(1.5);
    let (_, xs, _) = run_streams(k, master_seed, trials, thread_count)?;
    let xs = xs.expect("k within tracking cap");
    let inside = xs.iter().filter(|&&x| (x as f64) >= lower && (x as f64) <= upper).count() as u64;
    Ok(ConcentrationReport {
        k,
        omega,
        trials,
        master_seed,
        lower,
        upper,
        inside,
        fraction: inside as f64 / trials as f64,
    })
}
