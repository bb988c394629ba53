//! Density evolution for the peeling decoder.
//!
//! Slots play the role of message nodes and users the role of check nodes of
//! an erasure-decoded graph code. Each round tracks
//!
//! * `P_l`: probability that a pending burst sits in a collided slot,
//! * `Q_l`: probability that a user is still undecodable,
//! * `beta_l`: probability that a user undecoded before round `l` decodes in it,
//! * `alpha_l`: the slot-degree histogram at the start of round `l`.
//!
//! `P_0` is the collided share of the expected initial histogram. `Q_l`
//! averages the per-user binomial decode probability at erasure rate `P_l`.
//! Between rounds every pending burst is removed with the burst-weighted
//! decode share `rho_l` (binomial thinning of `alpha`), and
//!
//! ```text
//! P_{l+1} = beta_l * C_{l+1} / R_{l+1} + (1 - beta_l) * P_l
//! ```
//!
//! where `C_{l+1} = ns * sum_{d>=2} d alpha_{d,l+1}` is the expected number of
//! pending bursts in collided slots after the removal and `R_{l+1}` the
//! expected number of pending bursts.

use crate::model::{binomial_pmf, expected_initial_histogram, SlotDegreeHistogram, SystemConfig, UserCode};

/// Convergence and stagnation threshold.
pub const EPSILON: f64 = 1e-9;

/// Slack allowed on probabilities before clamping; anything further out is a bug.
const CLAMP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DeState {
    pub l: usize,
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub alpha: SlotDegreeHistogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeTrace {
    pub states: Vec<DeState>,
    /// `q` of the final state.
    pub predicted_plr: f64,
    /// Whether `Q` dropped below [`EPSILON`] before the iteration stopped.
    pub converged_to_zero: bool,
}

impl DeTrace {
    pub fn rounds(&self) -> usize {
        self.states.len()
    }

    /// `P_l`, holding the last value once the recursion has stopped.
    pub fn p_at(&self, l: usize) -> f64 {
        self.states.get(l).or(self.states.last()).map_or(0.0, |s| s.p)
    }

    /// `Q_l`, holding the last value once the recursion has stopped.
    pub fn q_at(&self, l: usize) -> f64 {
        self.states.get(l).or(self.states.last()).map_or(0.0, |s| s.q)
    }
}

/// Probability that at least `k` of `n` bursts survive when each is erased
/// independently with probability `p`.
pub fn decode_probability(code: UserCode, p: f64) -> f64 {
    let survive = 1.0 - p;
    let sum: f64 = (code.k()..=code.n()).map(|i| binomial_pmf(code.n(), i, survive)).sum();
    sum.clamp(0.0, 1.0)
}

/// Population-averaged probability of not decoding at erasure rate `p`.
pub fn system_q(config: &SystemConfig, p: f64) -> f64 {
    let decoded: f64 = config.users().iter().map(|&c| decode_probability(c, p)).sum();
    (1.0 - decoded / config.num_users() as f64).clamp(0.0, 1.0)
}

/// Share of bursts lying in collided slots, from a slot-degree histogram of a
/// frame with `ns` slots carrying `total_bursts` bursts.
pub fn initial_erasure(alpha: &SlotDegreeHistogram, ns: usize, total_bursts: usize) -> f64 {
    if total_bursts == 0 {
        return 0.0;
    }
    alpha.collided_mass() * ns as f64 / total_bursts as f64
}

fn checked_unit(x: f64) -> f64 {
    assert!(
        x.is_finite() && (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&x),
        "probability escaped [0, 1]: {x}"
    );
    x.clamp(0.0, 1.0)
}

/// Runs the recursion for at most `N_u` rounds.
///
/// Stops early once `Q_l < EPSILON` or once `P` stops moving.
pub fn de_iterate(config: &SystemConfig) -> DeTrace {
    let ns = config.ns() as f64;
    let users = config.users();
    let num_users = users.len();

    let mut alpha = expected_initial_histogram(config);
    let mut p = checked_unit(initial_erasure(&alpha, config.ns(), config.total_bursts()));

    // Per-user probability of still being undecoded before the current round.
    let mut pending: Vec<f64> = vec![1.0; num_users];
    let mut q_prev = 1.0;
    let mut states = Vec::new();
    let mut converged_to_zero = false;

    for l in 0..num_users {
        let still: Vec<f64> = users
            .iter()
            .zip(&pending)
            .map(|(&c, &u)| u.min(1.0 - decode_probability(c, p)))
            .collect();
        let q = checked_unit(still.iter().sum::<f64>() / num_users as f64);
        let beta = if q_prev <= EPSILON {
            0.0
        } else {
            checked_unit(((q_prev - q) / q_prev).max(0.0))
        };
        states.push(DeState {
            l,
            p,
            q,
            beta,
            alpha: alpha.clone(),
        });

        if q < EPSILON {
            converged_to_zero = true;
            break;
        }
        if l + 1 == num_users {
            break;
        }

        let bursts = |weights: &[f64]| -> f64 { users.iter().zip(weights).map(|(c, w)| c.n() as f64 * w).sum() };
        let before = bursts(&pending);
        let after = bursts(&still);
        let removal = if before > 0.0 {
            checked_unit((before - after) / before)
        } else {
            0.0
        };
        let next_alpha = alpha.thinned(removal);
        let current = if after > 0.0 {
            (next_alpha.collided_mass() * ns / after).min(1.0)
        } else {
            0.0
        };
        let next_p = checked_unit(beta * current + (1.0 - beta) * p);

        let stalled = (next_p - p).abs() < EPSILON;
        p = next_p;
        alpha = next_alpha;
        pending = still;
        q_prev = q;
        if stalled {
            break;
        }
    }

    let predicted_plr = states.last().map_or(0.0, |s| s.q);
    DeTrace {
        states,
        predicted_plr,
        converged_to_zero,
    }
}

pub fn de_predicted_plr(config: &SystemConfig) -> f64 {
    de_iterate(config).predicted_plr
}
