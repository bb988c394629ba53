mod common;

use ncsa_core::{decode_frame, place_frame, SystemConfig, UserCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(n: usize, k: usize) -> UserCode {
    UserCode::new(n, k).unwrap()
}

#[test]
fn matches_naive_oracle_on_random_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20_000 {
        let cfg = common::random_small_config(&mut rng, 4, 3, 6);
        let p = place_frame(&cfg, rng.gen());
        let trace = decode_frame(&cfg, &p);
        assert_eq!(trace.decoded_users, common::naive_decode(&cfg, &p), "{cfg:?} {p:?}");
    }
}

#[test]
fn matches_naive_oracle_on_every_small_placement() {
    let mut checked = 0usize;
    for ns in 1..=6 {
        for users in 1..=4 {
            for n in 1..=ns.min(3) {
                for k in 1..=n {
                    let cfg = SystemConfig::homogeneous(ns, code(n, k), users, 0).unwrap();
                    common::for_each_placement(&cfg, |p| {
                        let trace = decode_frame(&cfg, &p);
                        assert_eq!(trace.decoded_users, common::naive_decode(&cfg, &p));
                        checked += 1;
                    });
                }
            }
        }
    }
    assert!(checked > 100_000);
}

#[test]
fn fixpoint_is_order_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let ns = rng.gen_range(4..=30);
        let users = rng.gen_range(2..=12);
        let codes = (0..users)
            .map(|_| {
                let n = rng.gen_range(1..=ns.min(5));
                code(n, rng.gen_range(1..=n))
            })
            .collect();
        let cfg = SystemConfig::new(ns, codes, rng.gen()).unwrap();
        let p = place_frame(&cfg, 0);
        let reference = decode_frame(&cfg, &p).decoded_users;
        for _ in 0..100 {
            let order = common::random_permutation(&mut rng, users);
            let seq: std::collections::BTreeSet<usize> =
                common::sequential_decode(&cfg, &p, &order).into_iter().collect();
            assert_eq!(seq, reference);
        }
    }
}

#[test]
fn trace_invariants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let ns = rng.gen_range(5..=60);
        let n = rng.gen_range(1..=ns.min(5));
        let k = rng.gen_range(1..=n);
        let users = rng.gen_range(1..=40);
        let cfg = SystemConfig::homogeneous(ns, code(n, k), users, rng.gen()).unwrap();
        let p = place_frame(&cfg, rng.gen());
        let trace = decode_frame(&cfg, &p);

        assert!(trace.rounds.len() <= users);
        assert_eq!(trace.deadlock, trace.decoded_users.len() < users);
        let mut seen = 0;
        for (l, r) in trace.rounds.iter().enumerate() {
            assert_eq!(r.round, l);
            assert!(!r.newly_decoded.is_empty());
            seen += r.newly_decoded.len();
            assert_eq!(r.q_empirical, (users - seen) as f64 / users as f64);
            assert!((0.0..=1.0).contains(&r.p_empirical));
            assert!(r.p_all_bursts <= r.p_empirical);
        }
        assert_eq!(seen, trace.decoded_users.len());
        for w in trace.rounds.windows(2) {
            // The pending-burst share may rise (see decoder unit tests); the
            // collided-burst count itself can only fall.
            assert!(w[1].p_all_bursts <= w[0].p_all_bursts);
            assert!(w[1].q_empirical < w[0].q_empirical);
        }
        // Every decoded user had at least k clean slots once the users decoded
        // in earlier rounds were cancelled.
        for r in &trace.rounds {
            let earlier: Vec<usize> = trace
                .decoded_users
                .iter()
                .copied()
                .filter(|&u| trace.round_of(u).unwrap() < r.round)
                .collect();
            for &u in &r.newly_decoded {
                let clean = p
                    .slots_of(u)
                    .iter()
                    .filter(|&&s| {
                        (0..users)
                            .filter(|v| !earlier.contains(v) && p.slots_of(*v).contains(&s))
                            .count()
                            == 1
                    })
                    .count();
                assert!(clean >= k);
            }
        }
    }
}

#[test]
fn slot_degrees_only_fall_and_each_user_releases_n_bursts() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let cfg = common::random_small_config(&mut rng, 10, 4, 20);
        let p = place_frame(&cfg, 0);
        let trace = decode_frame(&cfg, &p);
        let mut degree = p.degree_of_slot().to_vec();
        for r in &trace.rounds {
            let before = degree.clone();
            let mut released = 0;
            for &u in &r.newly_decoded {
                for &s in p.slots_of(u) {
                    degree[s] -= 1;
                    released += 1;
                }
            }
            let expected: usize = r.newly_decoded.iter().map(|&u| cfg.users()[u].n()).sum();
            assert_eq!(released, expected);
            assert!(degree.iter().zip(&before).all(|(a, b)| a <= b));
        }
        let leftover: usize = degree.iter().sum();
        let undecoded: usize = (0..cfg.num_users())
            .filter(|u| !trace.is_decoded(*u))
            .map(|u| cfg.users()[u].n())
            .sum();
        assert_eq!(leftover, undecoded);
    }
}

#[test]
fn replica_codes_match_slot_driven_cancellation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5000 {
        let ns = rng.gen_range(2..=15);
        let users = rng.gen_range(1..=10);
        let codes = (0..users).map(|_| code(rng.gen_range(1..=ns.min(4)), 1)).collect();
        let cfg = SystemConfig::new(ns, codes, rng.gen()).unwrap();
        let p = place_frame(&cfg, 0);
        assert_eq!(decode_frame(&cfg, &p).decoded_users, common::replica_sic(&cfg, &p));
    }
}

#[test]
fn cascade_in_sequential_order() {
    // user 0 decodes first; its cancellation frees one slot each for users 1
    // and 2, which the one-at-a-time receiver then takes in index order.
    let cfg = SystemConfig::homogeneous(8, code(4, 2), 3, 0).unwrap();
    let p = ncsa_core::FramePlacement::from_slots(&cfg, vec![vec![0, 1, 2, 3], vec![2, 4, 5, 6], vec![3, 4, 5, 7]])
        .unwrap();
    assert_eq!(common::sequential_decode(&cfg, &p, &[0, 1, 2]), vec![0, 1, 2]);
    let trace = decode_frame(&cfg, &p);
    assert!(!trace.deadlock);
    assert_eq!(trace.rounds[0].newly_decoded, vec![0]);
}
