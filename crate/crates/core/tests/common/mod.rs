//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ncsa_core::{FramePlacement, SystemConfig, UserCode};
use rand::seq::SliceRandom;
use rand::Rng;

/// Clean-slot count of `user` given which users are still present.
fn clean_slots(placement: &FramePlacement, present: &[bool], user: usize) -> usize {
    placement
        .slots_of(user)
        .iter()
        .filter(|&&s| {
            (0..placement.num_users())
                .filter(|&v| present[v] && placement.slots_of(v).contains(&s))
                .count()
                == 1
        })
        .count()
}

/// Decodes one user at a time, always taking the first decodable user in
/// `priority`, and recomputes every slot degree from scratch after each removal.
pub fn sequential_decode(config: &SystemConfig, placement: &FramePlacement, priority: &[usize]) -> Vec<usize> {
    let mut present = vec![true; config.num_users()];
    let mut order = Vec::new();
    loop {
        let next = priority
            .iter()
            .copied()
            .find(|&u| present[u] && clean_slots(placement, &present, u) >= config.users()[u].k());
        match next {
            Some(u) => {
                present[u] = false;
                order.push(u);
            }
            None => return order,
        }
    }
}

/// Naive fixpoint: rescan all users in index order after every removal.
pub fn naive_decode(config: &SystemConfig, placement: &FramePlacement) -> BTreeSet<usize> {
    let priority: Vec<usize> = (0..config.num_users()).collect();
    sequential_decode(config, placement, &priority).into_iter().collect()
}

/// Replica-style cancellation for `k = 1`: look for any slot holding a
/// single burst, recover that user, cancel all of its replicas, repeat.
pub fn replica_sic(config: &SystemConfig, placement: &FramePlacement) -> BTreeSet<usize> {
    assert!(config.users().iter().all(|c| c.k() == 1));
    let mut occupants: Vec<Vec<usize>> = vec![Vec::new(); config.ns()];
    for u in 0..config.num_users() {
        for &s in placement.slots_of(u) {
            occupants[s].push(u);
        }
    }
    let mut recovered = BTreeSet::new();
    while let Some(slot) = occupants.iter().position(|o| o.len() == 1) {
        let user = occupants[slot][0];
        recovered.insert(user);
        for o in occupants.iter_mut() {
            o.retain(|&v| v != user);
        }
    }
    recovered
}

/// Random small system with heterogeneous codes.
pub fn random_small_config<R: Rng>(rng: &mut R, max_users: usize, max_n: usize, max_ns: usize) -> SystemConfig {
    let ns = rng.gen_range(1..=max_ns);
    let users = rng.gen_range(1..=max_users);
    let codes = (0..users)
        .map(|_| {
            let n = rng.gen_range(1..=max_n.min(ns));
            let k = rng.gen_range(1..=n);
            UserCode::new(n, k).unwrap()
        })
        .collect();
    SystemConfig::new(ns, codes, rng.gen()).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// All `n`-subsets of `0..ns` in lexicographic order.
pub fn subsets(ns: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, ns: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for s in start..ns {
            cur.push(s);
            go(s + 1, ns, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, ns, n, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on every placement of `config` (product of per-user subsets).
pub fn for_each_placement(config: &SystemConfig, mut f: impl FnMut(FramePlacement)) {
    let choices: Vec<Vec<Vec<usize>>> = config.users().iter().map(|c| subsets(config.ns(), c.n())).collect();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let slots = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        f(FramePlacement::from_slots(config, slots).unwrap());
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Probability that at least `k` of `n` bursts survive, by listing all 2^n
/// erasure patterns.
pub fn decode_probability_by_patterns(n: usize, k: usize, p: f64) -> f64 {
    (0u32..1 << n)
        .filter(|mask| (n as u32 - mask.count_ones()) as usize >= k)
        .map(|mask| {
            let erased = mask.count_ones() as i32;
            p.powi(erased) * (1.0 - p).powi(n as i32 - erased)
        })
        .sum()
}
