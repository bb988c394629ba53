//! Monte Carlo trials, load sweeps and Aloha baselines.
//!
//! Frame `j` of a run always uses placement stream `j`, and per-frame results
//! are reduced in frame order, so aggregates are bitwise identical whatever
//! the number of worker threads.

use crate::decoder::{decode_frame, DecodeTrace};
use crate::model::{place_frame, SystemConfig, UserCode};

/// Frames per sweep point unless told otherwise.
pub const DEFAULT_FRAMES: usize = 2000;

/// z-value of a two-sided 95% normal interval.
const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMetrics {
    /// Decoded payload bursts per slot.
    pub throughput: f64,
    /// Fraction of users not decoded.
    pub plr: f64,
    pub rounds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialAggregate {
    pub frames: usize,
    /// Realized normalized load `sum k_i / ns`.
    pub g: f64,
    pub t_mean: f64,
    pub plr_mean: f64,
    pub t_ci95: f64,
    pub plr_ci95: f64,
    pub mean_rounds: f64,
}

/// Worker count for trial execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Whatever the global pool provides (serial without the `parallel` feature).
    #[default]
    Auto,
    Fixed(usize),
}

/// `sum k_i / ns`.
pub fn normalized_load(config: &SystemConfig) -> f64 {
    config.total_k() as f64 / config.ns() as f64
}

pub fn frame_metrics(config: &SystemConfig, trace: &DecodeTrace) -> FrameMetrics {
    let delivered: usize = trace.decoded_users.iter().map(|&u| config.users()[u].k()).sum();
    FrameMetrics {
        throughput: delivered as f64 / config.ns() as f64,
        plr: trace.undecoded() as f64 / config.num_users() as f64,
        rounds: trace.rounds.len(),
    }
}

/// Places and decodes frame `frame_index`.
pub fn simulate_frame(config: &SystemConfig, frame_index: u64) -> DecodeTrace {
    decode_frame(config, &place_frame(config, frame_index))
}

/// Evaluates `f` on frames `0..frames`, returning results in frame order.
fn map_frames<T, F>(frames: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || (0..frames as u64).into_par_iter().map(&f).collect();
        match workers {
            Workers::Auto => run(),
            Workers::Fixed(1) => (0..frames as u64).map(&f).collect(),
            Workers::Fixed(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build worker pool")
                .install(run),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        (0..frames as u64).map(f).collect()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sample mean and 95% half-width.
fn mean_ci(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut n = 0usize;
    let mut total = CompensatedSum::default();
    for v in values.clone() {
        total.add(v);
        n += 1;
    }
    let mean = total.value() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let mut sq = CompensatedSum::default();
    for v in values {
        sq.add((v - mean) * (v - mean));
    }
    let sd = (sq.value() / (n - 1) as f64).sqrt();
    (mean, Z95 * sd / (n as f64).sqrt())
}

pub fn run_trials(config: &SystemConfig, frames: usize) -> TrialAggregate {
    run_trials_with(config, frames, Workers::Auto)
}

pub fn run_trials_with(config: &SystemConfig, frames: usize, workers: Workers) -> TrialAggregate {
    assert!(frames >= 1, "need at least one frame");
    let metrics = map_frames(frames, workers, |j| frame_metrics(config, &simulate_frame(config, j)));
    let (t_mean, t_ci95) = mean_ci(metrics.iter().map(|m| m.throughput));
    let (plr_mean, plr_ci95) = mean_ci(metrics.iter().map(|m| m.plr));
    let (mean_rounds, _) = mean_ci(metrics.iter().map(|m| m.rounds as f64));
    TrialAggregate {
        frames,
        g: normalized_load(config),
        t_mean,
        plr_mean,
        t_ci95,
        plr_ci95,
        mean_rounds,
    }
}

/// Mean empirical `(P_l, Q_l)` for rounds `0..rounds`, averaged per frame.
///
/// Frames that reached their fixpoint early contribute their fixpoint values.
pub fn round_profile(config: &SystemConfig, frames: usize, rounds: usize, workers: Workers) -> Vec<(f64, f64)> {
    let per_frame = map_frames(frames, workers, |j| {
        let trace = simulate_frame(config, j);
        (0..rounds).map(|l| (trace.p_at(l), trace.q_at(l))).collect::<Vec<_>>()
    });
    (0..rounds)
        .map(|l| {
            let (mut p, mut q) = (CompensatedSum::default(), CompensatedSum::default());
            for frame in &per_frame {
                p.add(frame[l].0);
                q.add(frame[l].1);
            }
            (p.value() / frames as f64, q.value() / frames as f64)
        })
        .collect()
}

/// A weighted population of user codes.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    components: Vec<(UserCode, f64)>,
}

impl Mixture {
    /// Weights must be positive; they are normalized internally.
    pub fn new(components: Vec<(UserCode, f64)>) -> Option<Self> {
        let ok = !components.is_empty() && components.iter().all(|&(_, w)| w > 0.0 && w.is_finite());
        ok.then_some(Self { components })
    }

    pub fn single(code: UserCode) -> Self {
        Self {
            components: vec![(code, 1.0)],
        }
    }

    /// Mixture whose weights are the user counts of `config`.
    pub fn from_config(config: &SystemConfig) -> Self {
        let mut components: Vec<(UserCode, f64)> = Vec::new();
        for &code in config.users() {
            match components.iter_mut().find(|(c, _)| *c == code) {
                Some((_, w)) => *w += 1.0,
                None => components.push((code, 1.0)),
            }
        }
        Self { components }
    }

    pub fn components(&self) -> &[(UserCode, f64)] {
        &self.components
    }

    fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.1).sum()
    }

    /// Weighted mean of `k`.
    pub fn mean_k(&self) -> f64 {
        self.components.iter().map(|(c, w)| c.k() as f64 * w).sum::<f64>() / self.total_weight()
    }

    pub fn mean_n(&self) -> f64 {
        self.components.iter().map(|(c, w)| c.n() as f64 * w).sum::<f64>() / self.total_weight()
    }

    /// Splits `users` across components by largest remainder.
    pub fn apportion(&self, users: usize) -> Vec<(UserCode, usize)> {
        let total = self.total_weight();
        let quotas: Vec<f64> = self.components.iter().map(|(_, w)| users as f64 * w / total).collect();
        let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
        let short = users - counts.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..quotas.len()).collect();
        // Stable sort keeps earlier components first on equal remainders.
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.total_cmp(&ra)
        });
        for &i in order.iter().take(short) {
            counts[i] += 1;
        }
        self.components.iter().map(|c| c.0).zip(counts).collect()
    }

    /// Config with `round(ns * g / mean_k)` users, or `None` if that is not a valid system.
    pub fn config_for_load(&self, ns: usize, g: f64, seed: u64) -> Option<SystemConfig> {
        let users = (ns as f64 * g / self.mean_k()).round();
        if users.is_nan() || users < 1.0 {
            return None;
        }
        let list = self
            .apportion(users as usize)
            .into_iter()
            .flat_map(|(code, count)| std::iter::repeat_n(code, count))
            .collect();
        SystemConfig::new(ns, list, seed).ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub requested_g: f64,
    pub config: SystemConfig,
    pub aggregate: TrialAggregate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Requested loads that could not be realized.
    pub skipped: Vec<f64>,
    pub argmax_g: f64,
    pub t_max: f64,
}

impl SweepResult {
    pub fn best(&self) -> Option<&SweepPoint> {
        self.points
            .iter()
            .max_by(|a, b| a.aggregate.t_mean.total_cmp(&b.aggregate.t_mean))
    }
}

pub fn sweep_load(mixture: &Mixture, ns: usize, g_values: &[f64], frames: usize, seed: u64) -> SweepResult {
    sweep_load_with(mixture, ns, g_values, frames, seed, Workers::Auto)
}

pub fn sweep_load_with(
    mixture: &Mixture,
    ns: usize,
    g_values: &[f64],
    frames: usize,
    seed: u64,
    workers: Workers,
) -> SweepResult {
    let mut sorted = g_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for g in sorted {
        match mixture.config_for_load(ns, g, seed) {
            Some(config) => {
                let aggregate = run_trials_with(&config, frames, workers);
                points.push(SweepPoint {
                    requested_g: g,
                    config,
                    aggregate,
                });
            }
            None => skipped.push(g),
        }
    }
    let (argmax_g, t_max) = points
        .iter()
        .max_by(|a, b| a.aggregate.t_mean.total_cmp(&b.aggregate.t_mean))
        .map_or((0.0, 0.0), |p| (p.aggregate.g, p.aggregate.t_mean));
    SweepResult {
        points,
        skipped,
        argmax_g,
        t_max,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlohaVariant {
    Pure,
    Slotted,
}

/// Infinite-population Aloha throughput at offered load `g`.
pub fn aloha_baseline(g: f64, variant: AlohaVariant) -> f64 {
    match variant {
        AlohaVariant::Slotted => g * (-g).exp(),
        AlohaVariant::Pure => g * (-2.0 * g).exp(),
    }
}

/// Slotted Aloha throughput with `users` single-burst users on `ns` slots.
pub fn slotted_aloha_finite(ns: usize, users: usize) -> f64 {
    let g = users as f64 / ns as f64;
    g * (1.0 - 1.0 / ns as f64).powi(users as i32 - 1)
}
