//! Property tests for Witt-vector arithmetic, with frozen ghost values as
//! independent anchors.

use drwitt::{BaseRingElem, GhostVector, PLocalInt, WittError, WittVector};
use num_bigint::BigInt;
use proptest::prelude::*;

fn witt_vector(p: u32) -> impl Strategy<Value = WittVector> {
    prop::collection::vec(-30i64..=30, 1..=6)
        .prop_map(move |comps| WittVector::from_ints(p, &comps))
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3u32), Just(5u32)]
}

fn pair(p: u32) -> impl Strategy<Value = (WittVector, WittVector)> {
    prop::collection::vec((-30i64..=30, -30i64..=30), 1..=6).prop_map(move |comps| {
        let xs: Vec<i64> = comps.iter().map(|c| c.0).collect();
        let ys: Vec<i64> = comps.iter().map(|c| c.1).collect();
        (
            WittVector::from_ints(p, &xs),
            WittVector::from_ints(p, &ys),
        )
    })
}

proptest! {
    #[test]
    fn ghost_round_trips((p, x) in prime().prop_flat_map(|p| witt_vector(p).prop_map(move |x| (p, x)))) {
        let _ = p;
        let back = WittVector::from_ghost(&x.ghost()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn addition_matches_ghost_rows((p, (x, y)) in prime().prop_flat_map(|p| pair(p).prop_map(move |xy| (p, xy)))) {
        let _ = p;
        let sum = x.add(&y);
        let gs = sum.ghost();
        for (i, (g, (gx, gy))) in gs
            .components()
            .iter()
            .zip(x.ghost().components().iter().zip(y.ghost().components()))
            .enumerate()
        {
            prop_assert_eq!(g, &gx.add(gy), "ghost row {}", i);
        }
    }

    #[test]
    fn multiplication_matches_ghost_rows((p, (x, y)) in prime().prop_flat_map(|p| pair(p).prop_map(move |xy| (p, xy)))) {
        let _ = p;
        let prod = x.mul(&y);
        let gp = prod.ghost();
        for (i, (g, (gx, gy))) in gp
            .components()
            .iter()
            .zip(x.ghost().components().iter().zip(y.ghost().components()))
            .enumerate()
        {
            prop_assert_eq!(g, &gx.mul(gy), "ghost row {}", i);
        }
    }

    #[test]
    fn ring_laws((p, (x, y)) in prime().prop_flat_map(|p| pair(p).prop_map(move |xy| (p, xy)))) {
        let zero = WittVector::zero(p, x.level());
        let one = WittVector::one(p, x.level());
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&zero), x.clone());
        prop_assert_eq!(x.mul(&one), x.clone());
        prop_assert_eq!(x.add(&x.neg()), zero);
    }

    #[test]
    fn frobenius_is_a_ring_map((p, (x, y)) in prime().prop_flat_map(|p| pair(p).prop_map(move |xy| (p, xy)))) {
        prop_assume!(x.level() >= 2);
        let _ = p;
        prop_assert_eq!(x.add(&y).frobenius(), x.frobenius().add(&y.frobenius()));
        prop_assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
    }

    #[test]
    fn fv_is_multiplication_by_p((p, x) in prime().prop_flat_map(|p| witt_vector(p).prop_map(move |x| (p, x)))) {
        let lhs = x.verschiebung().frobenius();
        let rhs = x.scalar_mul(&PLocalInt::from_int(p as i64, p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_formula((p, (x, y)) in prime().prop_flat_map(|p| pair(p).prop_map(move |xy| (p, xy)))) {
        prop_assume!(x.level() >= 2);
        let _ = p;
        let xr = x.restriction();
        let lhs = xr.verschiebung().mul(&y);
        let rhs = xr.mul(&y.frobenius()).verschiebung();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn teichmuller_is_multiplicative(p in prime(), a in -15i64..=15, b in -15i64..=15, n in 1usize..=6) {
        let lhs = WittVector::teichmuller(BaseRingElem::from_int(a * b, p), n);
        let rhs = WittVector::teichmuller(BaseRingElem::from_int(a, p), n)
            .mul(&WittVector::teichmuller(BaseRingElem::from_int(b, p), n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn v_basis_round_trips((p, x) in prime().prop_flat_map(|p| witt_vector(p).prop_map(move |x| (p, x)))) {
        let coeffs = x.v_basis_decompose().unwrap();
        prop_assert_eq!(coeffs.len(), x.level());
        let back = WittVector::v_basis_recompose(p, &coeffs);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn display_round_trips((p, x) in prime().prop_flat_map(|p| witt_vector(p).prop_map(move |x| (p, x)))) {
        let _ = p;
        let shown = x.to_string();
        let back: WittVector = shown.parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn frozen_ghost_values() {
    // w([2]) = (2, 4, 16) and w(V[1]) = (0, 2, 2) at p = 2, n = 3.
    let teich2 = WittVector::from_ints(2, &[2, 0, 0]);
    let g: Vec<String> = teich2
        .ghost()
        .components()
        .iter()
        .map(|c| c.as_scalar().unwrap().to_string())
        .collect();
    assert_eq!(g, ["2", "4", "16"]);

    let v_one = WittVector::one(2, 2).verschiebung();
    let g: Vec<String> = v_one
        .ghost()
        .components()
        .iter()
        .map(|c| c.as_scalar().unwrap().to_string())
        .collect();
    assert_eq!(g, ["0", "2", "2"]);
}

#[test]
fn frozen_unghost_rejection() {
    // (0, 1, 0) is not a ghost vector at p = 2: row 1 forces a_1 = 1/2.
    let gv = GhostVector::new(
        2,
        vec![
            BaseRingElem::from_int(0, 2),
            BaseRingElem::from_int(1, 2),
            BaseRingElem::from_int(0, 2),
        ],
    );
    match WittVector::from_ghost(&gv) {
        Err(WittError::NonIntegralGhost { index: 1, .. }) => {}
        other => panic!("expected a non-integral report at index 1, got {other:?}"),
    }
}

#[test]
fn frozen_teichmuller_coefficients_of_two() {
    // [2] = 2·[1] + 1·V(1) + 3·V^2(1) + 30·V^3(1) + 4080·V^4(1) + ... at p = 2.
    let coeffs = drwitt::witt::teichmuller_coeffs(&PLocalInt::from_int(2, 2), 5);
    let got: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    assert_eq!(got, ["2", "1", "3", "30", "4080"]);
    // The next coefficient is (2^32 - 2^16)/2^5 scaled; freeze it too.
    let six = drwitt::witt::teichmuller_coeffs(&PLocalInt::from_int(2, 2), 6);
    assert_eq!(six[5].to_string(), "134215680");
}

#[test]
fn minus_one_and_square_roots_at_p2() {
    for n in 1..=6 {
        let minus_one = WittVector::teichmuller(BaseRingElem::from_int(-1, 2), n);
        let mut rhs = WittVector::one(2, n).neg();
        if n >= 2 {
            rhs = rhs.add(&WittVector::one(2, n - 1).verschiebung());
        }
        assert_eq!(minus_one, rhs, "level {n}");
    }
    for n in 1..=5 {
        let one = WittVector::one(2, n);
        for root in drwitt::witt::square_roots_of_unity(n) {
            assert_eq!(root.mul(&root), one, "level {n}");
        }
    }
}

#[test]
fn scalar_big_values_stay_exact() {
    // Exactness sanity on a coefficient too large for machine integers.
    let big = BigInt::from(1i64 << 62) * BigInt::from(1i64 << 62);
    let c = PLocalInt::new(big.clone(), BigInt::from(1), 2).unwrap();
    let x = WittVector::new(2, vec![BaseRingElem::Scalar(c); 3]);
    let back = WittVector::from_ghost(&x.ghost()).unwrap();
    assert_eq!(back, x);
    assert_eq!(x.components()[0].as_scalar().unwrap().numer(), &big);
}
