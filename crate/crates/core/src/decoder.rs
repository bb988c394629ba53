//! Iterative interference-cancellation decoder.
//!
//! Rounds are synchronous: every user holding at least `k` clean bursts is
//! decoded at once, then all `n` of its bursts are removed from their slots.
//! The set of users decoded at the fixpoint does not depend on the order in
//! which decodable users are processed, so this matches the one-user-at-a-time
//! receiver while keeping round indices aligned with density evolution.

use std::collections::BTreeSet;

use crate::model::{FramePlacement, SystemConfig};

/// Statistics of one decoding round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    /// Users decoded in this round, ascending.
    pub newly_decoded: Vec<usize>,
    /// Share of still-pending bursts that lie in collided slots, before this round.
    pub p_empirical: f64,
    /// Same numerator as `p_empirical`, over all bursts of the frame.
    pub p_all_bursts: f64,
    /// Share of all users still undecoded after this round.
    pub q_empirical: f64,
}

/// Outcome of decoding one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeTrace {
    /// Only rounds that decoded at least one user.
    pub rounds: Vec<RoundRecord>,
    pub decoded_users: BTreeSet<usize>,
    pub num_users: usize,
    /// True iff some users are still undecoded at the fixpoint.
    pub deadlock: bool,
    /// `p_empirical` at the fixpoint (zero when nothing is left).
    pub residual_p: f64,
}

impl DecodeTrace {
    /// Empirical erasure probability entering round `l`.
    ///
    /// Past the last productive round the decoder sits at its fixpoint, so the
    /// residual value is returned.
    pub fn p_at(&self, l: usize) -> f64 {
        self.rounds.get(l).map_or(self.residual_p, |r| r.p_empirical)
    }

    /// Fraction of users undecoded after round `l`.
    pub fn q_at(&self, l: usize) -> f64 {
        match self.rounds.get(l) {
            Some(r) => r.q_empirical,
            None => self.undecoded() as f64 / self.num_users as f64,
        }
    }

    pub fn undecoded(&self) -> usize {
        self.num_users - self.decoded_users.len()
    }

    pub fn is_decoded(&self, user: usize) -> bool {
        self.decoded_users.contains(&user)
    }

    /// Round in which `user` was decoded, if it was.
    pub fn round_of(&self, user: usize) -> Option<usize> {
        self.rounds
            .iter()
            .find(|r| r.newly_decoded.binary_search(&user).is_ok())
            .map(|r| r.round)
    }
}

/// Peels `placement` to its fixpoint.
///
/// Each slot keeps its current degree and the XOR of the ids of the users
/// still in it, so when a slot drops to degree one its remaining owner is
/// known without a scan.
pub fn decode_frame(config: &SystemConfig, placement: &FramePlacement) -> DecodeTrace {
    let users = config.users();
    let num_users = users.len();
    debug_assert_eq!(placement.num_users(), num_users);

    let mut degree = placement.degree_of_slot().to_vec();
    let mut owners = vec![0usize; degree.len()];
    for (user, slots) in placement.slots_of_user().iter().enumerate() {
        for &s in slots {
            owners[s] ^= user;
        }
    }

    let mut clean = vec![0usize; num_users];
    for (user, slots) in placement.slots_of_user().iter().enumerate() {
        clean[user] = slots.iter().filter(|&&s| degree[s] == 1).count();
    }

    let total_bursts = placement.total_bursts();
    let mut pending_bursts = total_bursts;
    let mut collided_bursts: usize = degree.iter().filter(|&&d| d >= 2).sum();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };

    let mut decoded = vec![false; num_users];
    let mut decoded_count = 0;
    let mut frontier: Vec<usize> = (0..num_users).filter(|&u| clean[u] >= users[u].k()).collect();
    let mut rounds = Vec::new();

    while !frontier.is_empty() {
        let p_empirical = ratio(collided_bursts, pending_bursts);
        let p_all_bursts = ratio(collided_bursts, total_bursts);

        for &u in &frontier {
            decoded[u] = true;
        }
        decoded_count += frontier.len();

        let mut next = Vec::new();
        for &u in &frontier {
            for &s in placement.slots_of(u) {
                match degree[s] {
                    2 => collided_bursts -= 2,
                    d if d > 2 => collided_bursts -= 1,
                    _ => {}
                }
                degree[s] -= 1;
                owners[s] ^= u;
                pending_bursts -= 1;
                if degree[s] == 1 {
                    let other = owners[s];
                    if !decoded[other] {
                        clean[other] += 1;
                        if clean[other] == users[other].k() {
                            next.push(other);
                        }
                    }
                }
            }
        }

        frontier.sort_unstable();
        rounds.push(RoundRecord {
            round: rounds.len(),
            newly_decoded: std::mem::take(&mut frontier),
            p_empirical,
            p_all_bursts,
            q_empirical: (num_users - decoded_count) as f64 / num_users as f64,
        });
        frontier = next;
    }

    DecodeTrace {
        rounds,
        decoded_users: (0..num_users).filter(|&u| decoded[u]).collect(),
        num_users,
        deadlock: decoded_count < num_users,
        residual_p: ratio(collided_bursts, pending_bursts),
    }
}

/// Share of bursts that start out in collided slots.
pub fn empirical_p0(placement: &FramePlacement) -> f64 {
    let collided: usize = placement.degree_of_slot().iter().filter(|&&d| d >= 2).sum();
    let total = placement.total_bursts();
    if total == 0 {
        0.0
    } else {
        collided as f64 / total as f64
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::{place_frame, UserCode};

    fn code(n: usize, k: usize) -> UserCode {
        UserCode::new(n, k).unwrap()
    }

    /// Three (4,2) users. Only user 0 starts with two clean slots; cancelling
    /// it frees slot 2 for user 1 and slot 3 for user 2.
    ///
    /// degrees: 0:1 1:1 2:2 3:2 4:2 5:2 6:1 7:1
    pub(crate) fn cascade_instance() -> (SystemConfig, FramePlacement) {
        let cfg = SystemConfig::homogeneous(8, code(4, 2), 3, 0).unwrap();
        let p = FramePlacement::from_slots(&cfg, vec![vec![0, 1, 2, 3], vec![2, 4, 5, 6], vec![3, 4, 5, 7]]).unwrap();
        (cfg, p)
    }

    #[test]
    fn cascade_decodes_after_first_cancellation() {
        let (cfg, p) = cascade_instance();
        let trace = decode_frame(&cfg, &p);
        let order: Vec<_> = trace.rounds.iter().map(|r| r.newly_decoded.clone()).collect();
        assert_eq!(order, vec![vec![0], vec![1, 2]]);
        assert!(!trace.deadlock);
        assert_eq!(trace.rounds[0].p_empirical, 2.0 / 3.0);
        assert_eq!(trace.rounds[0].q_empirical, 2.0 / 3.0);
        // After user 0 leaves, slots 4 and 5 are still shared by users 1 and 2.
        assert_eq!(trace.rounds[1].p_empirical, 0.5);
        assert_eq!(trace.rounds[1].q_empirical, 0.0);
        assert_eq!(trace.residual_p, 0.0);
        assert_eq!(trace.round_of(2), Some(1));
    }

    #[test]
    fn symmetric_stopping_set() {
        let cfg = SystemConfig::homogeneous(2, code(2, 1), 2, 0).unwrap();
        let p = FramePlacement::from_slots(&cfg, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let trace = decode_frame(&cfg, &p);
        assert!(trace.rounds.is_empty());
        assert!(trace.decoded_users.is_empty());
        assert!(trace.deadlock);
        assert_eq!(trace.p_at(0), 1.0);
        assert_eq!(trace.q_at(0), 1.0);
    }

    #[test]
    fn single_user_decodes_immediately() {
        for (ns, n, k) in [(1, 1, 1), (5, 3, 3), (10, 10, 4)] {
            let cfg = SystemConfig::new(ns, vec![code(n, k)], 9).unwrap();
            let trace = decode_frame(&cfg, &place_frame(&cfg, 0));
            assert_eq!(trace.rounds.len(), 1);
            assert_eq!(trace.rounds[0].newly_decoded, vec![0]);
            assert_eq!(trace.rounds[0].p_empirical, 0.0);
            assert!(!trace.deadlock);
        }
    }

    #[test]
    fn partial_deadlock() {
        // users 1 and 2 are stuck on each other; user 0 is free.
        let cfg = SystemConfig::homogeneous(5, code(2, 1), 3, 0).unwrap();
        let p = FramePlacement::from_slots(&cfg, vec![vec![0, 1], vec![2, 3], vec![2, 3]]).unwrap();
        let trace = decode_frame(&cfg, &p);
        assert_eq!(trace.decoded_users.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(trace.deadlock);
        assert_eq!(trace.residual_p, 1.0);
        assert_eq!(trace.q_at(5), 2.0 / 3.0);
    }

    #[test]
    fn pending_share_can_rise_between_rounds() {
        // User 0 owns four slots, three of them clean. Cancelling it removes
        // three clean bursts but only one collided one, so the collided share
        // of what is left goes up while users 2 and 3 stay stuck together.
        let cfg = SystemConfig::new(5, vec![code(4, 1), code(1, 1), code(1, 1), code(1, 1)], 0).unwrap();
        let p = FramePlacement::from_slots(&cfg, vec![vec![0, 2, 3, 4], vec![2], vec![1], vec![1]]).unwrap();
        let trace = decode_frame(&cfg, &p);
        assert_eq!(trace.rounds.len(), 2);
        assert_eq!(trace.rounds[0].p_empirical, 4.0 / 7.0);
        assert_eq!(trace.rounds[1].p_empirical, 2.0 / 3.0);
        assert_eq!(trace.rounds[1].p_all_bursts, 2.0 / 7.0);
        assert_eq!(trace.residual_p, 1.0);
    }

    #[test]
    fn p0_examples() {
        let cfg = SystemConfig::homogeneous(2, code(2, 2), 2, 0).unwrap();
        assert_eq!(empirical_p0(&place_frame(&cfg, 0)), 1.0);
        let cfg = SystemConfig::new(9, vec![code(4, 2)], 0).unwrap();
        assert_eq!(empirical_p0(&place_frame(&cfg, 0)), 0.0);
        let (_, p) = cascade_instance();
        assert_eq!(empirical_p0(&p), 2.0 / 3.0);
    }

    #[test]
    fn p0_average_over_all_two_user_placements() {
        // Two single-burst users on two slots: 4 equiprobable placements, two
        // of which collide.
        let cfg = SystemConfig::homogeneous(2, code(1, 1), 2, 0).unwrap();
        let mut sum = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let p = FramePlacement::from_slots(&cfg, vec![vec![a], vec![b]]).unwrap();
                sum += empirical_p0(&p);
            }
        }
        assert_eq!(sum / 4.0, 0.5);
    }
}
