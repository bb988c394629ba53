//! Slotted-frame system model.
//!
//! A frame has `ns` slots. Each user owns a [`UserCode`] `(n, k)`: it sends
//! `n` bursts on `n` distinct slots chosen uniformly at random, and its block
//! can be recovered once `k` of those bursts sit alone in their slot.
//!
//! Randomness is counter based: the placement of frame `j` is drawn from a
//! ChaCha stream keyed by the config seed and selected by `j`, so frames can
//! be generated in any order or on any thread with identical results.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;

/// Burst count `n` and decode threshold `k` of one user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserCode {
    n: usize,
    k: usize,
}

impl UserCode {
    pub fn new(n: usize, k: usize) -> Result<Self, ModelError> {
        if k == 0 || k > n {
            return Err(ModelError::InvalidCode { n, k });
        }
        Ok(Self { n, k })
    }

    /// Number of bursts sent per frame.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of clean bursts needed to decode.
    pub fn k(&self) -> usize {
        self.k
    }
}

/// Frame size, user population and seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemConfig {
    ns: usize,
    users: Vec<UserCode>,
    seed: u64,
}

impl SystemConfig {
    pub fn new(ns: usize, users: Vec<UserCode>, seed: u64) -> Result<Self, ModelError> {
        if ns == 0 {
            return Err(ModelError::EmptyFrame);
        }
        if users.is_empty() {
            return Err(ModelError::NoUsers);
        }
        if let Some((user, code)) = users.iter().enumerate().find(|(_, c)| c.n > ns) {
            return Err(ModelError::TooManyBursts { user, n: code.n, ns });
        }
        Ok(Self { ns, users, seed })
    }

    /// `count` users all sharing `code`.
    pub fn homogeneous(ns: usize, code: UserCode, count: usize, seed: u64) -> Result<Self, ModelError> {
        Self::new(ns, vec![code; count], seed)
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn users(&self) -> &[UserCode] {
        &self.users
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Largest possible slot degree; every user in one slot.
    pub fn max_slot_degree(&self) -> usize {
        self.users.len()
    }

    pub fn total_bursts(&self) -> usize {
        self.users.iter().map(|u| u.n).sum()
    }

    pub fn total_k(&self) -> usize {
        self.users.iter().map(|u| u.k).sum()
    }

    /// The shared code when every user has the same `(n, k)`.
    pub fn common_code(&self) -> Option<UserCode> {
        let first = self.users[0];
        self.users.iter().all(|&u| u == first).then_some(first)
    }
}

/// Assignment of every user's bursts to slots of one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramePlacement {
    ns: usize,
    slots_of_user: Vec<Vec<usize>>,
    degree_of_slot: Vec<usize>,
}

impl FramePlacement {
    /// Builds a placement from explicit slot lists, checking it against `config`.
    pub fn from_slots(config: &SystemConfig, mut slots_of_user: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        if slots_of_user.len() != config.num_users() {
            return Err(ModelError::UserCountMismatch {
                expected: config.num_users(),
                got: slots_of_user.len(),
            });
        }
        let ns = config.ns();
        for (user, (slots, code)) in slots_of_user.iter_mut().zip(config.users()).enumerate() {
            slots.sort_unstable();
            if let Some(&slot) = slots.iter().find(|&&s| s >= ns) {
                return Err(ModelError::SlotOutOfRange { user, slot, ns });
            }
            if let Some(w) = slots.windows(2).find(|w| w[0] == w[1]) {
                return Err(ModelError::DuplicateSlot { user, slot: w[0] });
            }
            if slots.len() != code.n() {
                return Err(ModelError::BurstCountMismatch {
                    user,
                    expected: code.n(),
                    got: slots.len(),
                });
            }
        }
        Ok(Self::assemble(ns, slots_of_user))
    }

    fn assemble(ns: usize, slots_of_user: Vec<Vec<usize>>) -> Self {
        let mut degree_of_slot = vec![0; ns];
        for &s in slots_of_user.iter().flatten() {
            degree_of_slot[s] += 1;
        }
        Self {
            ns,
            slots_of_user,
            degree_of_slot,
        }
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn num_users(&self) -> usize {
        self.slots_of_user.len()
    }

    /// Sorted, distinct slots of `user`.
    pub fn slots_of(&self, user: usize) -> &[usize] {
        &self.slots_of_user[user]
    }

    pub fn slots_of_user(&self) -> &[Vec<usize>] {
        &self.slots_of_user
    }

    pub fn degree_of_slot(&self) -> &[usize] {
        &self.degree_of_slot
    }

    pub fn total_bursts(&self) -> usize {
        self.slots_of_user.iter().map(Vec::len).sum()
    }
}

/// Random placement of frame `frame_index`.
///
/// Each user independently gets a uniform `n`-subset of the slots. The result
/// depends only on `(config.seed(), frame_index)` and the config itself.
pub fn place_frame(config: &SystemConfig, frame_index: u64) -> FramePlacement {
    let mut rng = frame_rng(config.seed(), frame_index);
    let slots_of_user = config
        .users()
        .iter()
        .map(|code| {
            let mut slots = index::sample(&mut rng, config.ns(), code.n()).into_vec();
            slots.sort_unstable();
            slots
        })
        .collect();
    FramePlacement::assemble(config.ns(), slots_of_user)
}

pub(crate) fn frame_rng(seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame_index);
    rng
}

/// Fraction of slots at each degree. `alpha()[d]` is the share of all `ns`
/// slots (empty ones included) holding exactly `d` bursts.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotDegreeHistogram {
    alpha: Vec<f64>,
}

impl SlotDegreeHistogram {
    pub fn from_fractions(mut alpha: Vec<f64>) -> Self {
        while alpha.len() > 1 && alpha.last() == Some(&0.0) {
            alpha.pop();
        }
        Self { alpha }
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `alpha[d]`, zero past the largest stored degree.
    pub fn get(&self, degree: usize) -> f64 {
        self.alpha.get(degree).copied().unwrap_or(0.0)
    }

    pub fn max_degree(&self) -> usize {
        self.alpha.len().saturating_sub(1)
    }

    pub fn total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    /// Expected bursts per slot, `sum_d d * alpha[d]`.
    pub fn mean_degree(&self) -> f64 {
        self.alpha.iter().enumerate().map(|(d, a)| d as f64 * a).sum()
    }

    /// `sum_{d>=2} d * alpha[d]`: bursts per slot that sit in collided slots.
    pub fn collided_mass(&self) -> f64 {
        self.alpha.iter().enumerate().skip(2).map(|(d, a)| d as f64 * a).sum()
    }

    /// Each burst independently survives with probability `1 - removal`.
    pub fn thinned(&self, removal: f64) -> Self {
        let keep = 1.0 - removal;
        let mut out = vec![0.0; self.alpha.len()];
        for (d, &a) in self.alpha.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (survivors, slot) in out.iter_mut().enumerate().take(d + 1) {
                *slot += a * binomial_pmf(d, survivors, keep);
            }
        }
        Self::from_fractions(out)
    }
}

/// Histogram of one realized frame.
pub fn degree_histogram(placement: &FramePlacement) -> SlotDegreeHistogram {
    let max = placement.degree_of_slot().iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max + 1];
    for &d in placement.degree_of_slot() {
        counts[d] += 1;
    }
    let ns = placement.ns() as f64;
    SlotDegreeHistogram::from_fractions(counts.into_iter().map(|c| c as f64 / ns).collect())
}

/// Exact expected initial histogram under uniform placement.
///
/// A given slot is hit by user `i` with probability `n_i / ns`, independently
/// across users, so its degree is Poisson-binomial.
pub fn expected_initial_histogram(config: &SystemConfig) -> SlotDegreeHistogram {
    let ns = config.ns() as f64;
    let mut dist = vec![1.0];
    for code in config.users() {
        let hit = code.n() as f64 / ns;
        let mut next = vec![0.0; dist.len() + 1];
        for (d, &mass) in dist.iter().enumerate() {
            next[d] += mass * (1.0 - hit);
            next[d + 1] += mass * hit;
        }
        dist = next;
    }
    SlotDegreeHistogram::from_fractions(dist)
}

/// `ln C(n, k)`.
pub(crate) fn ln_choose(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `C(n, i) q^i (1-q)^(n-i)` evaluated in log space.
pub(crate) fn binomial_pmf(n: usize, i: usize, q: f64) -> f64 {
    if q <= 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    if q >= 1.0 {
        return if i == n { 1.0 } else { 0.0 };
    }
    (ln_choose(n, i) + i as f64 * q.ln() + (n - i) as f64 * (1.0 - q).ln()).exp()
}
