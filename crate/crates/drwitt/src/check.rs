//! Randomized relation sweeps over the Witt, de Rham-Witt, log, and
//! polynomial-extension layers, with a data-parallel driver.
//!
//! Every sweep is deterministic: case i of a run seeds its own ChaCha8
//! stream from (seed, i), so reports are byte-stable across thread counts
//! and across the sequential/parallel modes.

use crate::drw::DrwElement;
use crate::log::LogDrwElement;
use crate::polyext::{oracle_mul, poly_lambda, poly_lambda_ghost, PolyDrwElement};
use crate::ring::BaseRingElem;
use crate::scalar::{p_pow_u64, PLocalInt};
use crate::witt::{
    frobenius_congruence_holds, square_roots_of_unity, teichmuller_coeffs, WittVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// How a sweep distributes its cases.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl ExecMode {
    /// The mode that will actually run: Parallel degrades to Sequential
    /// when the crate is built without the parallel feature.
    pub fn effective(self) -> ExecMode {
        #[cfg(feature = "parallel")]
        {
            self
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = self;
            ExecMode::Sequential
        }
    }
}

/// Outcome of one swept relation.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn all_passed(reports: &[RelationReport]) -> bool {
    reports.iter().all(RelationReport::passed)
}

/// Runs `cases` independent instances of a relation check. The closure
/// returns Err with a description on a counterexample.
pub fn run_cases<F>(name: &str, mode: ExecMode, cases: u64, seed: u64, f: F) -> RelationReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), String> + Sync,
{
    let run_one = |i: u64| -> Option<(u64, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        f(&mut rng).err().map(|e| (i, e))
    };
    let mut failures: Vec<(u64, String)>;
    match mode.effective() {
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                failures = (0..cases).into_par_iter().filter_map(run_one).collect();
            }
            #[cfg(not(feature = "parallel"))]
            {
                failures = (0..cases).filter_map(run_one).collect();
            }
        }
        ExecMode::Sequential => {
            failures = (0..cases).filter_map(run_one).collect();
        }
    }
    failures.sort_by_key(|(i, _)| *i);
    RelationReport {
        name: name.to_string(),
        cases,
        failures: failures.len() as u64,
        first_failure: failures
            .into_iter()
            .next()
            .map(|(i, msg)| format!("case {i}: {msg}")),
    }
}

fn expect_eq<T: PartialEq + std::fmt::Display>(lhs: T, rhs: T, what: &str) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs} != {rhs}"))
    }
}

// ---- samplers ----------------------------------------------------------

/// A p-local scalar with numerator in [-40, 40] and a small denominator
/// prime to p.
pub fn sample_scalar(rng: &mut ChaCha8Rng, p: u32) -> PLocalInt {
    let numer: i64 = rng.gen_range(-40..=40);
    let denom = if rng.gen_bool(0.25) {
        // Denominators prime to p keep the sample inside Z_(p).
        loop {
            let d = 2 * rng.gen_range(1..=6) + 1;
            if d % p as i64 != 0 {
                break d;
            }
        }
    } else {
        1
    };
    PLocalInt::new(numer.into(), denom.into(), p).expect("denominator prime to p")
}

/// A Witt vector with integer components in [-30, 30].
pub fn sample_witt(rng: &mut ChaCha8Rng, p: u32, n: usize) -> WittVector {
    let comps: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
    WittVector::from_ints(p, &comps)
}

/// A degree-0 element: random scalar coordinates on the V-basis.
pub fn sample_drw_deg0(rng: &mut ChaCha8Rng, p: u32, n: usize) -> DrwElement {
    let deg0: Vec<PLocalInt> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.7) {
                sample_scalar(rng, p)
            } else {
                PLocalInt::zero(p)
            }
        })
        .collect();
    DrwElement::from_parts(p, n, deg0, vec![0; n])
}

/// A degree-1 element: random residues on the dV-basis.
pub fn sample_drw_deg1(rng: &mut ChaCha8Rng, p: u32, n: usize) -> DrwElement {
    let deg1: Vec<u64> = (0..n)
        .map(|i| {
            if i == 0 {
                0
            } else {
                rng.gen_range(0..p_pow_u64(p, i as u32))
            }
        })
        .collect();
    DrwElement::from_parts(p, n, vec![PLocalInt::zero(p); n], deg1)
}

/// A general (mixed-degree) element.
pub fn sample_drw(rng: &mut ChaCha8Rng, p: u32, n: usize) -> DrwElement {
    sample_drw_deg0(rng, p, n).add(&sample_drw_deg1(rng, p, n))
}

/// A homogeneous element of the requested degree (zero for degrees > 1).
pub fn sample_drw_homog(rng: &mut ChaCha8Rng, p: u32, n: usize, deg: u8) -> DrwElement {
    match deg {
        0 => sample_drw_deg0(rng, p, n),
        1 => sample_drw_deg1(rng, p, n),
        _ => DrwElement::zero(p, n),
    }
}

/// A log-complex element with a random dlog coordinate.
pub fn sample_log(rng: &mut ChaCha8Rng, p: u32, n: usize) -> LogDrwElement {
    let dlog = rng.gen_range(0..p_pow_u64(p, n as u32));
    LogDrwElement::from_parts(sample_drw(rng, p, n), dlog)
}

/// One random term of the polynomial extension with the given type tag
/// (1..=4) and homogeneous degree, at the given level.
pub fn sample_poly_term(
    rng: &mut ChaCha8Rng,
    level: usize,
    ty: u8,
    q: u8,
    depth: Option<u8>,
) -> PolyDrwElement {
    match ty {
        1 => {
            let j = rng.gen_range(0..=4);
            PolyDrwElement::term_t1(level, q, j, sample_drw_homog(rng, 2, level, q))
        }
        2 => {
            let k = rng.gen_range(1..=4);
            PolyDrwElement::term_t2(level, q, k, sample_drw_homog(rng, 2, level, q - 1))
        }
        3 => {
            assert!(level >= 2, "V-indexed terms need level >= 2");
            let r = depth.unwrap_or_else(|| rng.gen_range(1..level as u8));
            let l = 2 * rng.gen_range(0..3) + 1;
            let c = sample_drw_homog(rng, 2, level - r as usize, q);
            PolyDrwElement::term_t3(level, q, r, l, c)
        }
        4 => {
            assert!(level >= 2, "V-indexed terms need level >= 2");
            let s = depth.unwrap_or_else(|| rng.gen_range(1..level as u8));
            let m = 2 * rng.gen_range(0..3) + 1;
            let e = sample_drw_homog(rng, 2, level - s as usize, q - 1);
            PolyDrwElement::term_t4(level, q, s, m, e)
        }
        _ => panic!("term type must be 1..=4"),
    }
}

/// Valid homogeneous degrees for a term type: t1/t3 carry their degree on
/// the coefficient (0 or 1); t2/t4 add one to a degree-0/1 coefficient.
pub fn valid_degrees(ty: u8) -> [u8; 2] {
    match ty {
        1 | 3 => [0, 1],
        2 | 4 => [1, 2],
        _ => panic!("term type must be 1..=4"),
    }
}

/// A small homogeneous element: one to three random terms of degree q.
pub fn sample_poly(rng: &mut ChaCha8Rng, level: usize, q: u8) -> PolyDrwElement {
    let mut out = PolyDrwElement::zero(level);
    for _ in 0..rng.gen_range(1..=3) {
        let ty = loop {
            let t = rng.gen_range(1..=4u8);
            if t >= 3 && level < 2 {
                continue;
            }
            if valid_degrees(t).contains(&q) {
                break t;
            }
        };
        let term = sample_poly_term(rng, level, ty, q, None);
        out = out.add(&term);
    }
    out
}

// ---- Witt-vector identities --------------------------------------------

/// Ghost-map homomorphism, unghost round trips, operator identities, the
/// Teichmüller coefficient congruences, and the p = 2 unit decompositions.
pub fn check_witt_identities(
    p: u32,
    n_max: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    let mut reports = Vec::new();
    let pick_level = |rng: &mut ChaCha8Rng| rng.gen_range(1..=n_max);

    reports.push(run_cases("witt_ghost_add_hom", mode, fuel, seed, |rng| {
        let n = pick_level(rng);
        let x = sample_witt(rng, p, n);
        let y = sample_witt(rng, p, n);
        let sum = x.add(&y);
        for (i, (g, (gx, gy))) in sum
            .ghost()
            .components()
            .iter()
            .zip(x.ghost().components().iter().zip(y.ghost().components()))
            .enumerate()
        {
            let want = gx.add(gy);
            if *g != want {
                return Err(format!("ghost row {i} of a sum is not the sum of rows"));
            }
        }
        Ok(())
    }));

    reports.push(run_cases("witt_ghost_mul_hom", mode, fuel, seed, |rng| {
        let n = pick_level(rng);
        let x = sample_witt(rng, p, n);
        let y = sample_witt(rng, p, n);
        let prod = x.mul(&y);
        for (i, (g, (gx, gy))) in prod
            .ghost()
            .components()
            .iter()
            .zip(x.ghost().components().iter().zip(y.ghost().components()))
            .enumerate()
        {
            let want = gx.mul(gy);
            if *g != want {
                return Err(format!("ghost row {i} of a product is off"));
            }
        }
        Ok(())
    }));

    reports.push(run_cases("witt_unghost_round_trip", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let n = pick_level(rng);
            let x = sample_witt(rng, p, n);
            let back = WittVector::from_ghost(&x.ghost()).map_err(|e| e.to_string())?;
            expect_eq(back, x, "unghost(ghost(x))")
        }
    }));

    reports.push(run_cases("witt_fv_is_p", mode, fuel, seed, |rng| {
        let n = pick_level(rng);
        let x = sample_witt(rng, p, n);
        let lhs = x.verschiebung().frobenius();
        let rhs = x.scalar_mul(&PLocalInt::from_int(p as i64, p));
        expect_eq(lhs, rhs, "F(V(x)) vs p·x")
    }));

    reports.push(run_cases("witt_projection", mode, fuel, seed, |rng| {
        let n = pick_level(rng).max(2);
        let x = sample_witt(rng, p, n - 1);
        let y = sample_witt(rng, p, n);
        let lhs = x.verschiebung().mul(&y);
        let rhs = x.mul(&y.frobenius()).verschiebung();
        expect_eq(lhs, rhs, "V(x)y vs V(xF(y))")
    }));

    reports.push(run_cases("witt_f_ghost_shift", mode, fuel, seed, |rng| {
        let n = pick_level(rng).max(2);
        let x = sample_witt(rng, p, n);
        let fx = x.frobenius();
        let gx = x.ghost();
        for (i, g) in fx.ghost().components().iter().enumerate() {
            if *g != gx.components()[i + 1] {
                return Err(format!("ghost row {i} of F(x) is not row {} of x", i + 1));
            }
        }
        Ok(())
    }));

    reports.push(run_cases(
        "witt_teichmuller_multiplicative",
        mode,
        fuel,
        seed,
        |rng| {
            let n = pick_level(rng);
            let a: i64 = rng.gen_range(-20..=20);
            let b: i64 = rng.gen_range(-20..=20);
            let lhs = WittVector::teichmuller(BaseRingElem::from_int(a * b, p), n);
            let rhs = WittVector::teichmuller(BaseRingElem::from_int(a, p), n)
                .mul(&WittVector::teichmuller(BaseRingElem::from_int(b, p), n));
            expect_eq(lhs, rhs, "[ab] vs [a][b]")
        },
    ));

    reports.push(run_cases("witt_decompose_round_trip", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let n = pick_level(rng);
            let x = sample_witt(rng, p, n);
            let coeffs = x.v_basis_decompose().map_err(|e| e.to_string())?;
            let back = WittVector::v_basis_recompose(p, &coeffs);
            expect_eq(back, x, "recompose(decompose(x))")
        }
    }));

    reports.push(run_cases(
        "teichmuller_coeff_congruence",
        mode,
        fuel,
        seed,
        |rng| {
            let a = PLocalInt::from_int(rng.gen_range(-30..=30), p);
            for k in 1..=n_max as u32 {
                if !frobenius_congruence_holds(&a, k) {
                    return Err(format!("v_p(a^(p^{k}) - a^(p^{})) < {k} at a={a}", k - 1));
                }
            }
            let coeffs = teichmuller_coeffs(&a, n_max);
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_integer() {
                    return Err(format!("coefficient {i} of [{a}] is not p-integral: {c}"));
                }
            }
            let teich = WittVector::teichmuller(BaseRingElem::Scalar(a.clone()), n_max);
            let direct = teich.v_basis_decompose().map_err(|e| e.to_string())?;
            if coeffs != direct {
                return Err(format!("coefficient shortcut disagrees with decompose at a={a}"));
            }
            Ok(())
        },
    ));

    if p == 2 {
        reports.push(run_cases("minus_one_unit_rule", mode, 1, seed, |_| {
            // [-1]_n = -[1]_n + V([1]_{n-1}) at every level.
            // At n = 1 the V term is empty and the rule degenerates to
            // [-1] = -[1].
            for n in 1..=n_max {
                let minus_one = WittVector::teichmuller(BaseRingElem::from_int(-1, 2), n);
                let mut rhs = WittVector::one(2, n).neg();
                if n >= 2 {
                    rhs = rhs.add(&WittVector::one(2, n - 1).verschiebung());
                }
                if minus_one != rhs {
                    return Err(format!("level {n}: [-1] != -[1] + V(1)"));
                }
            }
            Ok(())
        }));

        reports.push(run_cases("four_square_roots_of_unity", mode, 1, seed, |_| {
            for n in 1..=n_max {
                let roots = square_roots_of_unity(n);
                let one = WittVector::one(2, n);
                for r in &roots {
                    if r.mul(r) != one {
                        return Err(format!("level {n}: {r} does not square to one"));
                    }
                }
                if n >= 2 {
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if roots[i] == roots[j] {
                                return Err(format!(
                                    "level {n}: roots {i} and {j} coincide"
                                ));
                            }
                        }
                    }
                }
            }
            Ok(())
        }));
    }

    reports
}

// ---- de Rham-Witt axioms -------------------------------------------------

/// The graded-ring, operator, and torsion relations of the base complex at
/// one (p, n).
pub fn check_drw_axioms(
    p: u32,
    n: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    let mut reports = Vec::new();

    reports.push(run_cases("lambda_additive", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let x = sample_witt(rng, p, n);
            let y = sample_witt(rng, p, n);
            let lhs = DrwElement::lambda(&x.add(&y)).map_err(|e| e.to_string())?;
            let rhs = DrwElement::lambda(&x)
                .map_err(|e| e.to_string())?
                .add(&DrwElement::lambda(&y).map_err(|e| e.to_string())?);
            expect_eq(lhs, rhs, "lambda(x+y)")
        }
    }));

    reports.push(run_cases("lambda_multiplicative", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let x = sample_witt(rng, p, n);
            let y = sample_witt(rng, p, n);
            let lhs = DrwElement::lambda(&x.mul(&y)).map_err(|e| e.to_string())?;
            let rhs = DrwElement::lambda(&x)
                .map_err(|e| e.to_string())?
                .mul(&DrwElement::lambda(&y).map_err(|e| e.to_string())?);
            expect_eq(lhs, rhs, "lambda(xy)")
        }
    }));

    if n >= 2 {
        reports.push(run_cases("lambda_commutes_with_f", mode, fuel, seed, {
            |rng: &mut ChaCha8Rng| {
                let x = sample_witt(rng, p, n);
                let lhs = DrwElement::lambda(&x.frobenius()).map_err(|e| e.to_string())?;
                let rhs = DrwElement::lambda(&x)
                    .map_err(|e| e.to_string())?
                    .frobenius();
                expect_eq(lhs, rhs, "lambda(F(x)) vs F(lambda(x))")
            }
        }));

        reports.push(run_cases("lambda_commutes_with_r", mode, fuel, seed, {
            |rng: &mut ChaCha8Rng| {
                let x = sample_witt(rng, p, n);
                let lhs = DrwElement::lambda(&x.restriction()).map_err(|e| e.to_string())?;
                let rhs = DrwElement::lambda(&x)
                    .map_err(|e| e.to_string())?
                    .restriction();
                expect_eq(lhs, rhs, "lambda(R(x)) vs R(lambda(x))")
            }
        }));
    }

    reports.push(run_cases("lambda_commutes_with_v", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let x = sample_witt(rng, p, n);
            let lhs = DrwElement::lambda(&x.verschiebung()).map_err(|e| e.to_string())?;
            let rhs = DrwElement::lambda(&x)
                .map_err(|e| e.to_string())?
                .verschiebung();
            expect_eq(lhs, rhs, "lambda(V(x)) vs V(lambda(x))")
        }
    }));

    reports.push(run_cases("mul_commutative", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let y = sample_drw(rng, p, n);
        expect_eq(x.mul(&y), y.mul(&x), "xy vs yx")
    }));

    reports.push(run_cases("mul_associative", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let y = sample_drw(rng, p, n);
        let z = sample_drw(rng, p, n);
        expect_eq(x.mul(&y).mul(&z), x.mul(&y.mul(&z)), "(xy)z vs x(yz)")
    }));

    reports.push(run_cases("mul_distributive", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let y = sample_drw(rng, p, n);
        let z = sample_drw(rng, p, n);
        expect_eq(
            x.mul(&y.add(&z)),
            x.mul(&y).add(&x.mul(&z)),
            "x(y+z) vs xy+xz",
        )
    }));

    reports.push(run_cases("leibniz", mode, fuel, seed, |rng| {
        // d(xy) = dx·y + σ(x)·x·dy on homogeneous parts; σ = -1 in odd
        // degree.
        for qx in 0..=1u8 {
            for qy in 0..=1u8 {
                let x = sample_drw_homog(rng, p, n, qx);
                let y = sample_drw_homog(rng, p, n, qy);
                let lhs = x.mul(&y).d();
                let sign = if qx == 1 { -1 } else { 1 };
                let rhs = x.d().mul(&y).add(&x.mul(&y.d()).int_mul(sign));
                if lhs != rhs {
                    return Err(format!("degrees ({qx},{qy}): d(xy) = {lhs} but rule gives {rhs}"));
                }
            }
        }
        Ok(())
    }));

    reports.push(run_cases("fv_is_p", mode, fuel, seed, |rng| {
        let e = sample_drw(rng, p, n);
        expect_eq(
            e.verschiebung().frobenius(),
            e.int_mul(p as i64),
            "F(V(e)) vs p·e",
        )
    }));

    if n >= 2 {
        reports.push(run_cases("projection_formula", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n - 1);
            let y = sample_drw(rng, p, n);
            let lhs = x.verschiebung().mul(&y);
            let rhs = x.mul(&y.frobenius()).verschiebung();
            expect_eq(lhs, rhs, "V(x)y vs V(xF(y))")
        }));

        reports.push(run_cases("fdv_is_d_plus_iota", mode, fuel, seed, |rng| {
            let e = sample_drw(rng, p, n - 1);
            let lhs = e.verschiebung().d().frobenius();
            let rhs = e.d().add(&e.iota());
            expect_eq(lhs, rhs, "FdV(e) vs (d+iota)(e)")
        }));

        reports.push(run_cases("teichmuller_rule", mode, fuel, seed, {
            |rng: &mut ChaCha8Rng| {
                // Fd[a] = [a]^{p-1} d[a].
                let a: i64 = rng.gen_range(-10..=10);
                let ta = WittVector::teichmuller(BaseRingElem::from_int(a, p), n);
                let la = DrwElement::lambda(&ta).map_err(|e| e.to_string())?;
                let lhs = la.d().frobenius();
                let ta_low = WittVector::teichmuller(BaseRingElem::from_int(a, p), n - 1);
                let la_low = DrwElement::lambda(&ta_low).map_err(|e| e.to_string())?;
                let mut pow = DrwElement::unit(p, n - 1);
                for _ in 0..p - 1 {
                    pow = pow.mul(&la_low);
                }
                let rhs = pow.mul(&la_low.d());
                expect_eq(lhs, rhs, "Fd[a] vs [a]^(p-1)d[a]")
            }
        }));

        reports.push(run_cases("f_ring_hom", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n);
            let y = sample_drw(rng, p, n);
            expect_eq(
                x.mul(&y).frobenius(),
                x.frobenius().mul(&y.frobenius()),
                "F(xy) vs F(x)F(y)",
            )?;
            expect_eq(
                x.add(&y).frobenius(),
                x.frobenius().add(&y.frobenius()),
                "F(x+y) vs F(x)+F(y)",
            )
        }));

        reports.push(run_cases("r_ring_hom", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n);
            let y = sample_drw(rng, p, n);
            expect_eq(
                x.mul(&y).restriction(),
                x.restriction().mul(&y.restriction()),
                "R(xy) vs R(x)R(y)",
            )
        }));

        reports.push(run_cases("df_is_p_fd", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n);
            expect_eq(
                x.frobenius().d(),
                x.d().frobenius().int_mul(p as i64),
                "dF(x) vs p·Fd(x)",
            )
        }));

        reports.push(run_cases("vd_is_p_dv", mode, fuel, seed, |rng| {
            let e = sample_drw(rng, p, n - 1);
            expect_eq(
                e.d().verschiebung(),
                e.verschiebung().d().int_mul(p as i64),
                "Vd(e) vs p·dV(e)",
            )
        }));

        reports.push(run_cases("v_dv_row", mode, fuel, seed, |rng| {
            let x = sample_drw_deg0(rng, p, n - 1);
            let y = sample_drw_deg0(rng, p, n - 1);
            let lhs = x.verschiebung().mul(&y.verschiebung().d());
            let rhs = x
                .mul(&y.d())
                .verschiebung()
                .add(&x.mul(&y).verschiebung().iota());
            expect_eq(lhs, rhs, "V(x)dV(y) vs V(xdy)+iota(V(xy))")
        }));

        reports.push(run_cases("iota_f_commute", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n);
            expect_eq(
                x.iota().frobenius(),
                x.frobenius().iota(),
                "F(iota(x)) vs iota(F(x))",
            )
        }));

        reports.push(run_cases("restriction_commutes", mode, fuel, seed, |rng| {
            let x = sample_drw(rng, p, n);
            expect_eq(x.d().restriction(), x.restriction().d(), "R(dx) vs d(Rx)")?;
            expect_eq(
                x.iota().restriction(),
                x.restriction().iota(),
                "R(iota x) vs iota(Rx)",
            )?;
            if n >= 3 {
                let e = sample_drw(rng, p, n - 1);
                expect_eq(
                    e.verschiebung().restriction(),
                    e.restriction().verschiebung(),
                    "R(V(e)) vs V(R(e))",
                )?;
                expect_eq(
                    x.frobenius().restriction(),
                    x.restriction().frobenius(),
                    "R(F(x)) vs F(R(x))",
                )?;
            }
            Ok(())
        }));
    }

    reports.push(run_cases("v_additive", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let y = sample_drw(rng, p, n);
        expect_eq(
            x.add(&y).verschiebung(),
            x.verschiebung().add(&y.verschiebung()),
            "V(x+y) vs V(x)+V(y)",
        )
    }));

    reports.push(run_cases("iota_v_commute", mode, fuel, seed, |rng| {
        let e = sample_drw(rng, p, n);
        expect_eq(
            e.iota().verschiebung(),
            e.verschiebung().iota(),
            "V(iota(e)) vs iota(V(e))",
        )
    }));

    reports.push(run_cases("two_iota_is_zero", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let two = x.iota().int_mul(2);
        if two.is_zero() {
            Ok(())
        } else {
            Err(format!("2·iota(x) = {two}"))
        }
    }));

    reports.push(run_cases("iota_squares_to_zero", mode, fuel, seed, |rng| {
        let x = sample_drw(rng, p, n);
        let twice = x.iota().iota();
        if twice.is_zero() {
            Ok(())
        } else {
            Err(format!("iota(iota(x)) = {twice}"))
        }
    }));

    reports.push(run_cases("second_differentials", mode, fuel, seed, |rng| {
        // dd, d∘iota, and iota∘d agree (all land in the vanishing degree 2
        // here, so each must be zero).
        let x = sample_drw(rng, p, n);
        let dd = x.d().d();
        let di = x.iota().d();
        let id = x.d().iota();
        if !dd.is_zero() || !di.is_zero() || !id.is_zero() {
            return Err(format!("dd = {dd}, d iota = {di}, iota d = {id}"));
        }
        Ok(())
    }));

    reports.push(run_cases("iota_unit_formula", mode, 1, seed, |_| {
        // iota(1) = [-1]·d[-1]; for odd p both sides vanish.
        let minus_one = WittVector::teichmuller(BaseRingElem::from_int(-1, p), n);
        let lm = DrwElement::lambda(&minus_one).map_err(|e| e.to_string())?;
        let rhs = lm.mul(&lm.d());
        let lhs = DrwElement::unit(p, n).iota();
        expect_eq(lhs, rhs, "iota(1) vs [-1]d[-1]")
    }));

    if p == 2 {
        reports.push(run_cases("iota_unit_tail", mode, 1, seed, |_| {
            // iota(1) must be the full torsion tail sum_{s>=1} 2^{s-1} dV^s(1).
            let mut want = DrwElement::zero(2, n);
            for s in 1..n {
                want = want.add(&DrwElement::dv_basis_elem(2, n, s).int_mul(1 << (s - 1)));
            }
            expect_eq(DrwElement::unit(2, n).iota(), want, "iota(1) tail")
        }));
    }

    reports
}

// ---- log-complex axioms --------------------------------------------------

/// Axioms of the complex extended by the logarithmic class of p.
pub fn check_log_axioms(
    p: u32,
    n: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    let mut reports = Vec::new();

    reports.push(run_cases("log_mul_commutative", mode, fuel, seed, |rng| {
        let x = sample_log(rng, p, n);
        let y = sample_log(rng, p, n);
        expect_eq(x.mul(&y), y.mul(&x), "xy vs yx")
    }));

    reports.push(run_cases("log_mul_associative", mode, fuel, seed, |rng| {
        let x = sample_log(rng, p, n);
        let y = sample_log(rng, p, n);
        let z = sample_log(rng, p, n);
        expect_eq(x.mul(&y).mul(&z), x.mul(&y.mul(&z)), "(xy)z vs x(yz)")
    }));

    reports.push(run_cases("log_mul_distributive", mode, fuel, seed, |rng| {
        let x = sample_log(rng, p, n);
        let y = sample_log(rng, p, n);
        let z = sample_log(rng, p, n);
        expect_eq(
            x.mul(&y.add(&z)),
            x.mul(&y).add(&x.mul(&z)),
            "x(y+z) vs xy+xz",
        )
    }));

    reports.push(run_cases("log_fv_is_p", mode, fuel, seed, |rng| {
        let x = sample_log(rng, p, n);
        expect_eq(
            x.verschiebung().frobenius(),
            x.int_mul(p as i64),
            "F(V(x)) vs p·x",
        )
    }));

    if n >= 2 {
        reports.push(run_cases("log_projection", mode, fuel, seed, |rng| {
            let x = sample_log(rng, p, n - 1);
            let y = sample_log(rng, p, n);
            let lhs = x.verschiebung().mul(&y);
            let rhs = x.mul(&y.frobenius()).verschiebung();
            expect_eq(lhs, rhs, "V(x)y vs V(xF(y))")
        }));

        reports.push(run_cases("log_fdv", mode, fuel, seed, |rng| {
            let e = sample_log(rng, p, n - 1);
            let lhs = e.verschiebung().d().frobenius();
            let rhs = e.d().add(&e.iota());
            expect_eq(lhs, rhs, "FdV(e) vs (d+iota)(e)")
        }));

        reports.push(run_cases("log_f_ring_hom", mode, fuel, seed, |rng| {
            let x = sample_log(rng, p, n);
            let y = sample_log(rng, p, n);
            expect_eq(
                x.mul(&y).frobenius(),
                x.frobenius().mul(&y.frobenius()),
                "F(xy) vs F(x)F(y)",
            )
        }));

        reports.push(run_cases("log_r_ring_hom", mode, fuel, seed, |rng| {
            let x = sample_log(rng, p, n);
            let y = sample_log(rng, p, n);
            expect_eq(
                x.mul(&y).restriction(),
                x.restriction().mul(&y.restriction()),
                "R(xy) vs R(x)R(y)",
            )
        }));

        reports.push(run_cases("log_f_fixes_dlog", mode, 1, seed, |_| {
            let g = LogDrwElement::dlog_gen(p, n);
            expect_eq(
                g.frobenius(),
                LogDrwElement::dlog_gen(p, n - 1),
                "F(dlog)",
            )
        }));

        reports.push(run_cases("log_r_fixes_dlog", mode, 1, seed, |_| {
            let g = LogDrwElement::dlog_gen(p, n);
            expect_eq(
                g.restriction(),
                LogDrwElement::dlog_gen(p, n - 1),
                "R(dlog)",
            )
        }));
    }

    reports.push(run_cases("log_leibniz_deg0", mode, fuel, seed, |rng| {
        let x = LogDrwElement::from_base(sample_drw_deg0(rng, p, n));
        let y = LogDrwElement::from_base(sample_drw_deg0(rng, p, n));
        let lhs = x.mul(&y).d();
        let rhs = x.d().mul(&y).add(&x.mul(&y.d()));
        expect_eq(lhs, rhs, "d(xy) vs dx·y + x·dy")
    }));

    reports.push(run_cases("log_defining_relation", mode, 1, seed, |_| {
        if crate::log::defining_relation_holds(p, n) {
            Ok(())
        } else {
            Err("[p]·dlog[p] != d[p]".to_string())
        }
    }));

    reports.push(run_cases("log_torsion_order", mode, 1, seed, |_| {
        let order = crate::log::dlog_torsion_order(p, n);
        let want = p_pow_u64(p, n as u32);
        if order == want {
            Ok(())
        } else {
            Err(format!("dlog torsion order {order}, expected {want}"))
        }
    }));

    reports.push(run_cases("log_d_kills_dlog", mode, 1, seed, |_| {
        let g = LogDrwElement::dlog_gen(p, n);
        if g.d().is_zero() && g.iota().is_zero() {
            Ok(())
        } else {
            Err("d or iota does not vanish on dlog".to_string())
        }
    }));

    reports.push(run_cases("log_lambda_hom", mode, fuel, seed, {
        |rng: &mut ChaCha8Rng| {
            let x = sample_witt(rng, p, n);
            let y = sample_witt(rng, p, n);
            let lx = LogDrwElement::lambda(&x).map_err(|e| e.to_string())?;
            let ly = LogDrwElement::lambda(&y).map_err(|e| e.to_string())?;
            let lxy = LogDrwElement::lambda(&x.mul(&y)).map_err(|e| e.to_string())?;
            expect_eq(lxy, lx.mul(&ly), "lambda(xy) vs lambda(x)lambda(y)")
        }
    }));

    reports
}

// ---- polynomial-extension axioms ----------------------------------------

/// Axioms of the extension by a polynomial variable, p = 2.
pub fn check_poly_axioms(
    level: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    assert!(level >= 2);
    let mut reports = Vec::new();
    let sample_q = |rng: &mut ChaCha8Rng| rng.gen_range(0..=2u8);

    reports.push(run_cases("poly_graded_commutative", mode, fuel, seed, |rng| {
        let q1 = sample_q(rng);
        let q2 = sample_q(rng);
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        let lhs = x.mul(&y);
        let yx = y.mul(&x);
        let rhs = if q1 % 2 == 1 && q2 % 2 == 1 {
            yx.neg()
        } else {
            yx
        };
        expect_eq(lhs, rhs, "xy vs (-1)^(q1q2)yx")
    }));

    reports.push(run_cases("poly_associative", mode, fuel, seed, |rng| {
        let q1 = rng.gen_range(0..=1u8);
        let q2 = rng.gen_range(0..=1u8);
        let q3 = rng.gen_range(0..=(2 - q1.max(q2)));
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        let z = sample_poly(rng, level, q3);
        expect_eq(x.mul(&y).mul(&z), x.mul(&y.mul(&z)), "(xy)z vs x(yz)")
    }));

    reports.push(run_cases("poly_distributive", mode, fuel, seed, |rng| {
        let q1 = sample_q(rng);
        let q2 = sample_q(rng);
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        let z = sample_poly(rng, level, q2);
        expect_eq(
            x.mul(&y.add(&z)),
            x.mul(&y).add(&x.mul(&z)),
            "x(y+z) vs xy+xz",
        )
    }));

    reports.push(run_cases("poly_fv_is_two", mode, fuel, seed, |rng| {
        let q = sample_q(rng);
        let x = sample_poly(rng, level, q);
        expect_eq(x.verschiebung().frobenius(), x.int_mul(2), "F(V(x)) vs 2x")
    }));

    reports.push(run_cases("poly_projection", mode, fuel, seed, |rng| {
        let q1 = sample_q(rng);
        let q2 = sample_q(rng);
        let x = sample_poly(rng, level - 1, q1);
        let y = sample_poly(rng, level, q2);
        let lhs = x.verschiebung().mul(&y);
        let rhs = x.mul(&y.frobenius()).verschiebung();
        expect_eq(lhs, rhs, "V(x)y vs V(xF(y))")
    }));

    reports.push(run_cases("poly_fdv", mode, fuel, seed, |rng| {
        let q = rng.gen_range(0..=1u8);
        let e = sample_poly(rng, level - 1, q);
        let lhs = e.verschiebung().d().frobenius();
        let rhs = e.d().add(&e.iota());
        expect_eq(lhs, rhs, "FdV(e) vs (d+iota)(e)")
    }));

    reports.push(run_cases("poly_leibniz", mode, fuel, seed, |rng| {
        let q1 = rng.gen_range(0..=1u8);
        let q2 = rng.gen_range(0..=1u8);
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        let lhs = x.mul(&y).d();
        let sign = if q1 == 1 { -1 } else { 1 };
        let rhs = x.d().mul(&y).add(&x.mul(&y.d()).int_mul(sign));
        expect_eq(lhs, rhs, "d(xy) vs dx·y + sigma(x)x·dy")
    }));

    reports.push(run_cases("poly_dd_is_d_iota", mode, fuel, seed, |rng| {
        let q = rng.gen_range(0..=1u8);
        let x = sample_poly(rng, level, q);
        let dd = x.d().d();
        let di = x.iota().d();
        let id = x.d().iota();
        expect_eq(dd.clone(), di, "dd(x) vs d(iota(x))")?;
        expect_eq(dd, id, "dd(x) vs iota(d(x))")
    }));

    reports.push(run_cases("poly_f_ring_hom", mode, fuel, seed, |rng| {
        let q1 = sample_q(rng);
        let q2 = sample_q(rng);
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        expect_eq(
            x.mul(&y).frobenius(),
            x.frobenius().mul(&y.frobenius()),
            "F(xy) vs F(x)F(y)",
        )
    }));

    reports.push(run_cases("poly_r_commutes", mode, fuel, seed, |rng| {
        let q = sample_q(rng);
        let x = sample_poly(rng, level, q);
        expect_eq(x.d().restriction(), x.restriction().d(), "R(dx) vs d(Rx)")?;
        expect_eq(
            x.iota().restriction(),
            x.restriction().iota(),
            "R(iota x) vs iota(Rx)",
        )?;
        if level >= 3 {
            expect_eq(
                x.frobenius().restriction(),
                x.restriction().frobenius(),
                "R(F(x)) vs F(R(x))",
            )?;
            let e = sample_poly(rng, level - 1, q);
            expect_eq(
                e.verschiebung().restriction(),
                e.restriction().verschiebung(),
                "R(V(e)) vs V(R(e))",
            )?;
        }
        Ok(())
    }));

    reports.push(run_cases("poly_r_ring_hom", mode, fuel, seed, |rng| {
        let q1 = sample_q(rng);
        let q2 = sample_q(rng);
        let x = sample_poly(rng, level, q1);
        let y = sample_poly(rng, level, q2);
        expect_eq(
            x.mul(&y).restriction(),
            x.restriction().mul(&y.restriction()),
            "R(xy) vs R(x)R(y)",
        )
    }));

    reports.push(run_cases("poly_vd_is_2dv", mode, fuel, seed, |rng| {
        let q = rng.gen_range(0..=1u8);
        let e = sample_poly(rng, level - 1, q);
        expect_eq(
            e.d().verschiebung(),
            e.verschiebung().d().int_mul(2),
            "Vd(e) vs 2dV(e)",
        )
    }));

    reports.push(run_cases("poly_iota_relations", mode, fuel, seed, |rng| {
        let q = sample_q(rng);
        let x = sample_poly(rng, level, q);
        if !x.iota().int_mul(2).is_zero() {
            return Err("2·iota(x) != 0".to_string());
        }
        if !x.iota().iota().is_zero() {
            return Err("iota(iota(x)) != 0".to_string());
        }
        let fi = x.iota().frobenius();
        let if_ = x.frobenius().iota();
        expect_eq(fi, if_, "F(iota(x)) vs iota(F(x))")?;
        let e = sample_poly(rng, level - 1, q);
        expect_eq(
            e.iota().verschiebung(),
            e.verschiebung().iota(),
            "V(iota(e)) vs iota(V(e))",
        )
    }));

    reports.push(run_cases("poly_variable_rules", mode, 1, seed, |_| {
        // Fd[X] = [X]d[X], d[X]·d[X] = iota([X])·d[X], dd[X] = iota(d[X]).
        let unit = DrwElement::unit(2, level);
        let x_t = PolyDrwElement::term_t1(level, 0, 1, unit.clone());
        let dx = x_t.d();
        let lhs = dx.frobenius();
        let unit_low = DrwElement::unit(2, level - 1);
        let x_low = PolyDrwElement::term_t1(level - 1, 0, 1, unit_low);
        let rhs = x_low.mul(&x_low.d());
        expect_eq(lhs, rhs, "Fd[X] vs [X]d[X]")?;
        expect_eq(dx.mul(&dx), x_t.iota().mul(&dx), "d[X]d[X] vs iota([X])d[X]")?;
        expect_eq(dx.d(), dx.iota(), "dd[X] vs iota(d[X])")
    }));

    reports
}

/// Every closed product row against the independent reduction evaluator,
/// one report per unordered type pair.
pub fn check_poly_products_vs_oracle(
    level: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    let mut reports = Vec::new();
    for ta in 1..=4u8 {
        for tb in ta..=4u8 {
            let name = format!("product_row_t{ta}_t{tb}");
            reports.push(run_cases(&name, mode, fuel, seed, move |rng| {
                let qa = valid_degrees(ta)[rng.gen_range(0..2)];
                let qb = valid_degrees(tb)[rng.gen_range(0..2)];
                let x = sample_poly_term(rng, level, ta, qa, None);
                let y = sample_poly_term(rng, level, tb, qb, None);
                let closed = x.mul(&y);
                let reduced = oracle_mul(&x, &y);
                if closed != reduced {
                    return Err(format!(
                        "x = {x}, y = {y}: closed {closed} vs reduced {reduced}"
                    ));
                }
                let closed_rev = y.mul(&x);
                let reduced_rev = oracle_mul(&y, &x);
                if closed_rev != reduced_rev {
                    return Err(format!(
                        "x = {y}, y = {x}: closed {closed_rev} vs reduced {reduced_rev}"
                    ));
                }
                Ok(())
            }));
        }
    }
    reports
}

/// The polynomial λ against its ghost-row oracle: decomposition round
/// trips through the ghost rows and is a ring homomorphism.
pub fn check_poly_lambda(
    level: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    let sample_poly_witt = |rng: &mut ChaCha8Rng, n: usize| -> WittVector {
        // Witt vectors of Z_(2)[X] with small sparse polynomial entries.
        let comps: Vec<BaseRingElem> = (0..n)
            .map(|_| {
                let mut poly = crate::ring::SparsePoly::zero(2);
                for e in 0..=2u64 {
                    if rng.gen_bool(0.6) {
                        let c: i64 = rng.gen_range(-6..=6);
                        if c != 0 {
                            poly = poly.add(&crate::ring::SparsePoly::monomial(
                                e,
                                PLocalInt::from_int(c, 2),
                            ));
                        }
                    }
                }
                BaseRingElem::Poly(poly)
            })
            .collect();
        WittVector::new(2, comps)
    };

    let mut reports = Vec::new();

    reports.push(run_cases("poly_lambda_ghost_round_trip", mode, fuel, seed, {
        move |rng: &mut ChaCha8Rng| {
            let w = sample_poly_witt(rng, level);
            let e = poly_lambda(&w).map_err(|e| e.to_string())?;
            let gh = poly_lambda_ghost(&e).map_err(|e| e.to_string())?;
            let want = w.ghost();
            for (i, (a, b)) in gh
                .components()
                .iter()
                .zip(want.components())
                .enumerate()
            {
                let pa = match a {
                    BaseRingElem::Poly(p) => p.clone(),
                    BaseRingElem::Scalar(c) => crate::ring::SparsePoly::constant(c.clone()),
                };
                let pb = match b {
                    BaseRingElem::Poly(p) => p.clone(),
                    BaseRingElem::Scalar(c) => crate::ring::SparsePoly::constant(c.clone()),
                };
                if pa != pb {
                    return Err(format!("ghost row {i} differs after the round trip"));
                }
            }
            Ok(())
        }
    }));

    reports.push(run_cases("poly_lambda_additive", mode, fuel, seed, {
        move |rng: &mut ChaCha8Rng| {
            let x = sample_poly_witt(rng, level);
            let y = sample_poly_witt(rng, level);
            let lhs = poly_lambda(&x.add(&y)).map_err(|e| e.to_string())?;
            let rhs = poly_lambda(&x)
                .map_err(|e| e.to_string())?
                .add(&poly_lambda(&y).map_err(|e| e.to_string())?);
            expect_eq(lhs, rhs, "lambda(x+y)")
        }
    }));

    reports.push(run_cases("poly_lambda_multiplicative", mode, fuel, seed, {
        move |rng: &mut ChaCha8Rng| {
            let x = sample_poly_witt(rng, level);
            let y = sample_poly_witt(rng, level);
            let lhs = poly_lambda(&x.mul(&y)).map_err(|e| e.to_string())?;
            let rhs = poly_lambda(&x)
                .map_err(|e| e.to_string())?
                .mul(&poly_lambda(&y).map_err(|e| e.to_string())?);
            expect_eq(lhs, rhs, "lambda(xy)")
        }
    }));

    reports.push(run_cases("poly_lambda_commutes", mode, fuel, seed, {
        move |rng: &mut ChaCha8Rng| {
            let x = sample_poly_witt(rng, level);
            let lx = poly_lambda(&x).map_err(|e| e.to_string())?;
            let lhs_v = poly_lambda(&x.verschiebung()).map_err(|e| e.to_string())?;
            expect_eq(lhs_v, lx.verschiebung(), "lambda(V(x)) vs V(lambda(x))")?;
            if level >= 2 {
                let lhs_f = poly_lambda(&x.frobenius()).map_err(|e| e.to_string())?;
                expect_eq(lhs_f, lx.frobenius(), "lambda(F(x)) vs F(lambda(x))")?;
                let lhs_r = poly_lambda(&x.restriction()).map_err(|e| e.to_string())?;
                expect_eq(lhs_r, lx.restriction(), "lambda(R(x)) vs R(lambda(x))")?;
            }
            Ok(())
        }
    }));

    reports
}

// ---- associativity sweep -------------------------------------------------

/// One cell of the associativity sweep: a sorted type triple plus, for its
/// V-indexed positions, a weak-order pattern the sampled depths must
/// realize (rank 0 = shallowest).
#[derive(Debug, Clone)]
pub struct AssocCase {
    pub types: [u8; 3],
    pub ranks: Vec<u8>,
    pub name: String,
}

fn rank_label(ranks: &[u8]) -> String {
    ranks
        .iter()
        .map(|r| (b'a' + r) as char)
        .collect::<String>()
}

/// Enumerates the full sweep: 20 type multisets; triples with two
/// V-indexed positions split into 3 depth-order cases and triples with
/// three into the 13 weak orderings, for 80 cases total.
pub fn assoc_cases() -> Vec<AssocCase> {
    let mut cases = Vec::new();
    for a in 1..=4u8 {
        for b in a..=4u8 {
            for c in b..=4u8 {
                let types = [a, b, c];
                let v_count = types.iter().filter(|&&t| t >= 3).count();
                let patterns: Vec<Vec<u8>> = match v_count {
                    0 | 1 => vec![vec![0; v_count]],
                    k => weak_orderings(k),
                };
                for ranks in patterns {
                    let name = if ranks.is_empty() {
                        format!("assoc_t{a}{b}{c}")
                    } else {
                        format!("assoc_t{a}{b}{c}_{}", rank_label(&ranks))
                    };
                    cases.push(AssocCase { types, ranks, name });
                }
            }
        }
    }
    debug_assert_eq!(cases.len(), 80);
    cases
}

/// All canonical rank vectors of length k whose value set is {0..max}:
/// 3 for k = 2, the 13 weak orderings for k = 3.
fn weak_orderings(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = 3usize.pow(k as u32);
    for v in 0..total {
        let mut ranks = Vec::with_capacity(k);
        let mut rest = v;
        for _ in 0..k {
            ranks.push((rest % 3) as u8);
            rest /= 3;
        }
        let max = *ranks.iter().max().unwrap();
        let mut canonical = true;
        for want in 0..=max {
            if !ranks.contains(&want) {
                canonical = false;
                break;
            }
        }
        if canonical && (max as usize) < k {
            out.push(ranks);
        }
    }
    out
}

/// Runs the 80-case sweep: for each case, `fuel` random triples of single
/// terms with depths realizing the case's weak order, checking
/// (xy)z = x(yz) exactly.
pub fn check_poly_assoc_sweep(
    level: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    assert!(level >= 4, "three distinct V-depths need level >= 4");
    let mut reports = Vec::new();
    for case in assoc_cases() {
        let types = case.types;
        let ranks = case.ranks.clone();
        reports.push(run_cases(&case.name, mode, fuel, seed, move |rng| {
            // Choose depths: distinct values per rank class, ascending in
            // rank, drawn from [1, level-1].
            let classes = ranks.iter().copied().max().map_or(0, |m| m as usize + 1);
            let mut depth_pool: Vec<u8> = (1..level as u8).collect();
            for i in (1..depth_pool.len()).rev() {
                let j = rng.gen_range(0..=i);
                depth_pool.swap(i, j);
            }
            let mut chosen: Vec<u8> = depth_pool.into_iter().take(classes).collect();
            chosen.sort_unstable();
            let mut depth_iter = ranks.iter().map(|&r| chosen[r as usize]);
            let mut factors = Vec::with_capacity(3);
            for &ty in &types {
                // Bias degrees low so the triple product is not forced to
                // vanish by the degree cutoff.
                let degs = valid_degrees(ty);
                let q = if rng.gen_bool(0.8) { degs[0] } else { degs[1] };
                let depth = if ty >= 3 {
                    Some(depth_iter.next().unwrap())
                } else {
                    None
                };
                factors.push(sample_poly_term(rng, level, ty, q, depth));
            }
            let (x, y, z) = (&factors[0], &factors[1], &factors[2]);
            let lhs = x.mul(y).mul(z);
            let rhs = x.mul(&y.mul(z));
            if lhs != rhs {
                return Err(format!(
                    "x = {x}, y = {y}, z = {z}: (xy)z = {lhs} but x(yz) = {rhs}"
                ));
            }
            Ok(())
        }));
    }
    reports
}

// ---- filtration ----------------------------------------------------------

/// Whether an element lies in the span of V^j(1) and dV^j(1) for j >= s.
pub fn in_filtration(x: &DrwElement, s: usize) -> bool {
    x.deg0().iter().take(s).all(PLocalInt::is_zero)
        && x.deg1().iter().take(s).all(|&r| r == 0)
}

fn restrict_times(x: &DrwElement, k: usize) -> DrwElement {
    let mut out = x.clone();
    for _ in 0..k {
        out = out.restriction();
    }
    out
}

/// A random element supported on basis indices >= s.
fn sample_filtration(rng: &mut ChaCha8Rng, p: u32, n: usize, s: usize) -> DrwElement {
    let deg0: Vec<PLocalInt> = (0..n)
        .map(|i| {
            if i >= s {
                sample_scalar(rng, p)
            } else {
                PLocalInt::zero(p)
            }
        })
        .collect();
    let deg1: Vec<u64> = (0..n)
        .map(|i| {
            if i >= s.max(1) {
                rng.gen_range(0..p_pow_u64(p, i as u32))
            } else {
                0
            }
        })
        .collect();
    DrwElement::from_parts(p, n, deg0, deg1)
}

/// The standard filtration as the kernel of iterated restriction:
/// membership, exactness in both directions, and the ideal property.
pub fn check_filtration(
    p: u32,
    n: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    assert!(n >= 2);
    let mut reports = Vec::new();

    reports.push(run_cases("filtration_in_kernel", mode, fuel, seed, |rng| {
        let s = rng.gen_range(1..n);
        let x = sample_filtration(rng, p, n, s);
        let image = restrict_times(&x, n - s);
        if image.is_zero() {
            Ok(())
        } else {
            Err(format!("R^{}(x) = {image} for x in Fil^{s}", n - s))
        }
    }));

    reports.push(run_cases("filtration_is_kernel", mode, fuel, seed, |rng| {
        // Subtracting the zero-extension of the image lands in Fil^s, so
        // the kernel is no larger than the span.
        let s = rng.gen_range(1..n);
        let x = sample_drw(rng, p, n);
        let image = restrict_times(&x, n - s);
        let mut deg0 = image.deg0().to_vec();
        deg0.resize(n, PLocalInt::zero(p));
        let mut deg1 = image.deg1().to_vec();
        deg1.resize(n, 0);
        let lift = DrwElement::from_parts(p, n, deg0, deg1);
        let diff = x.sub(&lift);
        if !in_filtration(&diff, s) {
            return Err(format!("x - lift(R^{}(x)) = {diff} escapes Fil^{s}", n - s));
        }
        if !restrict_times(&diff, n - s).is_zero() {
            return Err("difference does not restrict to zero".to_string());
        }
        Ok(())
    }));

    reports.push(run_cases("filtration_surjective", mode, fuel, seed, |rng| {
        let s = rng.gen_range(1..n);
        let y = sample_drw(rng, p, s);
        let mut deg0 = y.deg0().to_vec();
        deg0.resize(n, PLocalInt::zero(p));
        let mut deg1 = y.deg1().to_vec();
        deg1.resize(n, 0);
        let lift = DrwElement::from_parts(p, n, deg0, deg1);
        expect_eq(restrict_times(&lift, n - s), y, "R^(n-s) of the lift")
    }));

    reports.push(run_cases("filtration_ideal", mode, fuel, seed, |rng| {
        let s = rng.gen_range(1..n);
        let x = sample_filtration(rng, p, n, s);
        let y = sample_drw(rng, p, n);
        let prod = x.mul(&y);
        if !in_filtration(&prod, s) {
            return Err(format!("Fil^{s} · E escapes: {prod}"));
        }
        if !in_filtration(&x.d(), s) {
            return Err(format!("d(Fil^{s}) escapes: {}", x.d()));
        }
        Ok(())
    }));

    reports
}

// ---- divided-power defect -------------------------------------------------

/// The quantified failure of d to be a divided-power derivation on the
/// V-ideal at p = 2: dV((Rτ)²) = V(Rτ)·dV(Rτ) + ι(τ) for ring elements τ.
pub fn check_pd_failure(
    n_max: usize,
    fuel: u64,
    seed: u64,
    mode: ExecMode,
) -> Vec<RelationReport> {
    assert!(n_max >= 2);
    vec![run_cases("pd_defect_identity", mode, fuel, seed, {
        move |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(2..=n_max);
            let w = sample_witt(rng, 2, n);
            let tau = DrwElement::lambda(&w).map_err(|e| e.to_string())?;
            let rt = tau.restriction();
            let lhs = rt.mul(&rt).verschiebung().d();
            let rhs = rt
                .verschiebung()
                .mul(&rt.verschiebung().d())
                .add(&tau.iota());
            if lhs != rhs {
                return Err(format!(
                    "tau = lambda({w}): dV((Rtau)^2) = {lhs} but V(Rtau)dV(Rtau)+iota(tau) = {rhs}"
                ));
            }
            Ok(())
        }
    })]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assoc_enumeration_counts() {
        let cases = assoc_cases();
        assert_eq!(cases.len(), 80);
        let with_three: Vec<_> = cases
            .iter()
            .filter(|c| c.types.iter().all(|&t| t >= 3))
            .collect();
        // 4 pure-V multisets, 13 weak orderings each.
        assert_eq!(with_three.len(), 52);
        assert_eq!(weak_orderings(2).len(), 3);
        assert_eq!(weak_orderings(3).len(), 13);
        let names: std::collections::BTreeSet<_> = cases.iter().map(|c| &c.name).collect();
        assert_eq!(names.len(), 80, "case names must be distinct");
    }

    #[test]
    fn driver_reports_are_mode_independent() {
        let f = |rng: &mut ChaCha8Rng| -> Result<(), String> {
            let v: u64 = rng.gen_range(0..100);
            if v == 7 {
                Err(format!("drew {v}"))
            } else {
                Ok(())
            }
        };
        let seq = run_cases("demo", ExecMode::Sequential, 400, 11, f);
        let par = run_cases("demo", ExecMode::Parallel, 400, 11, f);
        assert_eq!(seq.failures, par.failures);
        assert_eq!(seq.first_failure, par.first_failure);
        assert!(seq.failures > 0, "the demo relation should fail sometimes");
    }

    #[test]
    fn pd_defect_holds_on_a_quick_sweep() {
        let reports = check_pd_failure(4, 25, 3, ExecMode::Sequential);
        assert!(all_passed(&reports), "{:?}", reports);
    }

    #[test]
    fn drw_axioms_quick_sweep() {
        for p in [2u32, 3] {
            let reports = check_drw_axioms(p, 4, 12, 5, ExecMode::Sequential);
            for r in &reports {
                assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
            }
        }
    }

    #[test]
    fn poly_axioms_quick_sweep() {
        let reports = check_poly_axioms(3, 10, 5, ExecMode::Sequential);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn product_rows_quick_oracle_sweep() {
        let reports = check_poly_products_vs_oracle(4, 8, 5, ExecMode::Parallel);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }
}
