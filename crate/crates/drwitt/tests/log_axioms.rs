//! Sweeps and frozen anchors for the log complex and its tail-coefficient
//! solver.

use drwitt::check::{check_log_axioms, ExecMode};
use drwitt::log::{
    defining_relation_holds, dlog_torsion_order, log_coefficient_congruences_hold,
    log_tail_constants, solve_log_coefficients, v_dlog_product_row,
};
use num_bigint::BigInt;

#[test]
fn log_axioms_hold_for_all_primes_and_levels() {
    for p in [2u32, 3, 5] {
        for n in 1..=5 {
            for r in check_log_axioms(p, n, 25, 31, ExecMode::Parallel) {
                assert!(
                    r.passed(),
                    "p={p} n={n}: {} failed {}/{} cases: {:?}",
                    r.name,
                    r.failures,
                    r.cases,
                    r.first_failure
                );
            }
        }
    }
}

#[test]
fn dlog_generator_has_exact_order_p_to_n() {
    for p in [2u32, 3, 5] {
        for n in 1..=6 {
            assert_eq!(dlog_torsion_order(p, n), (p as u64).pow(n as u32));
        }
    }
}

#[test]
fn defining_relation_holds_everywhere() {
    for p in [2u32, 3, 5] {
        for n in 1..=6 {
            assert!(defining_relation_holds(p, n), "p={p} n={n}");
        }
    }
}

#[test]
fn frozen_v_dlog_rows() {
    // p = 2, level 4: window sums of the tail constants, scaled by 2^{i-1}.
    assert_eq!(
        v_dlog_product_row(2, 4, 1),
        (2, vec![(1, 1), (2, 3), (3, 4)])
    );
    assert_eq!(v_dlog_product_row(2, 4, 2), (4, vec![(3, 6)]));
    assert_eq!(v_dlog_product_row(2, 4, 3), (8, vec![]));
    // i = 0 is the identity row.
    assert_eq!(v_dlog_product_row(2, 4, 0), (1, vec![]));
    // p = 3 keeps a two-term tail, p = 5 a single term.
    assert_eq!(v_dlog_product_row(3, 3, 1), (3, vec![(1, 1), (2, 3)]));
    assert_eq!(v_dlog_product_row(3, 3, 2), (9, vec![(2, 3)]));
    assert_eq!(v_dlog_product_row(5, 3, 1), (5, vec![(1, 1)]));
    assert_eq!(v_dlog_product_row(5, 3, 2), (25, vec![(2, 5)]));
}

#[test]
fn solver_reproduces_the_frozen_tail() {
    let sol = solve_log_coefficients(6);
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(sol.exact, big(&[-1, 3, 4, 96, 32160, 2147319744]));
    assert_eq!(sol.canonical, big(&[1, 3, 4, 0, 0, 0]));
    assert_eq!(sol.balanced, big(&[1, -1, 4, 0, 0, 0]));
    // The balanced solution extends the compiled-in constants by zeros.
    let tail = log_tail_constants();
    for (j, b) in sol.balanced.iter().enumerate() {
        let expect = tail.get(j).copied().unwrap_or(0);
        assert_eq!(b, &BigInt::from(expect), "slot {j}");
    }
}

#[test]
fn solutions_satisfy_the_original_congruences() {
    let sol = solve_log_coefficients(8);
    assert!(log_coefficient_congruences_hold(&sol.exact));
    assert!(log_coefficient_congruences_hold(&sol.balanced));
    assert!(log_coefficient_congruences_hold(&sol.canonical));
    // Perturbing any slot by 1 breaks its congruence.
    for j in 0..sol.balanced.len() {
        let mut bad = sol.balanced.clone();
        bad[j] += 1;
        assert!(!log_coefficient_congruences_hold(&bad), "slot {j}");
    }
}

#[test]
fn solver_is_stable_under_longer_prefixes() {
    // Computing more coefficients never changes the earlier ones.
    let short = solve_log_coefficients(4);
    let long = solve_log_coefficients(9);
    assert_eq!(&long.balanced[..4], &short.balanced[..]);
    assert_eq!(&long.canonical[..4], &short.canonical[..]);
    // And everything past the third balanced slot vanishes.
    assert!(long.balanced[3..].iter().all(|b| b == &BigInt::from(0)));
}
