//! Acceptance gate: every advertised guarantee of the library, checked
//! end-to-end at its stated strength.  One test per criterion; each prints a
//! single summary line (visible with `--nocapture`) and fails with the full
//! list of violations otherwise.

use std::time::Instant;

use oclab_core::arith::{rational, BigRational, PadicVal, TestRng};
use oclab_core::eisenstein::{eisenstein_series, estar};
use oclab_core::error::Error;
use oclab_core::fpbasis::expand_in_fp;
use oclab_core::katz::{bi_basis, dim_level1, katz_expand, miller_basis};
use oclab_core::qseries::QSeries;
use oclab_core::umatrix::{
    check_general_bound, check_star_bound, compute_umatrix, umatrix_recurrence_p2,
};
use oclab_core::verify::{
    ratio_estar_vstar, verify_congruence, verify_identities_21, verify_special,
    verify_theorem_a, verify_theorem_a_katz,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The (p, k) sweep the main bound is certified over.
const SWEEP: &[(u32, &[u32])] = &[
    (2, &[4, 6, 8, 10, 12, 16]),
    (3, &[4, 6, 8, 10, 12, 18]),
    (5, &[4, 8, 12, 20]),
    (7, &[6, 12, 18]),
    (13, &[12, 24]),
];

macro_rules! check {
    ($fails:expr, $cond:expr, $($msg:tt)*) => {
        if !$cond {
            $fails.push(format!($($msg)*));
        }
    };
}

fn conclude(name: &str, fails: Vec<String>) {
    let status = if fails.is_empty() { "pass" } else { "FAIL" };
    println!("acceptance {name}: {status}");
    assert!(fails.is_empty(), "{name} failed:\n  {}", fails.join("\n  "));
}

fn q(n: i64, d: i64) -> BigRational {
    rational(n, d)
}

fn fin(n: i64) -> PadicVal {
    PadicVal::from_int(n)
}

#[test]
fn a1_golden_valuations_at_p2_k12() {
    let mut f = Vec::new();
    let t0 = Instant::now();
    let main = verify_theorem_a(2, 12, 30, Some(64)).unwrap();
    let refined = verify_special(2, 12, 30, Some(64)).unwrap();
    let elapsed = t0.elapsed();

    check!(f, main.pass, "main bound report did not pass");
    let r2 = &main.rows[1];
    check!(f, r2.observed == fin(7), "v_2(a_2) = {} (expected 7)", r2.observed);
    check!(f, r2.required == q(20, 3), "required at i=2 is {} (expected 20/3)", r2.required);
    let r30 = &main.rows[29];
    check!(f, r30.observed == fin(105), "v_2(a_30) = {} (expected 105)", r30.observed);
    check!(f, r30.required == q(100, 1), "required at i=30 is {} (expected 100)", r30.required);

    check!(f, refined.pass, "refined bound report did not pass");
    let s30 = &refined.rows[29];
    check!(f, s30.required == q(91, 1), "refined required at i=30 is {} (expected 91)", s30.required);
    check!(f, s30.observed == fin(105), "refined observed at i=30 is {} (expected 105)", s30.observed);
    check!(
        f,
        refined.notes.iter().any(|n| n.starts_with("s = 1")),
        "expected s = 1 in notes: {:?}",
        refined.notes
    );

    check!(f, elapsed.as_secs() < 120, "runtime {elapsed:?} exceeds two minutes");
    conclude("A1 golden valuations (p=2, k=12, q-precision 64, exact)", f);
}

#[test]
fn a2_closed_forms_exact_to_q200() {
    let mut f = Vec::new();
    for p in [2u32, 3] {
        let r = verify_identities_21(p, Some(200)).unwrap();
        check!(f, r.pass, "p = {p}: closed-form report did not pass");
        check!(f, r.rows.len() == 2, "p = {p}: expected 2 identities, got {}", r.rows.len());
        for row in &r.rows {
            check!(
                f,
                row.observed == PadicVal::Infinite,
                "p = {p}: identity difference is nonzero (min valuation {})",
                row.observed
            );
        }
    }
    conclude("A2 all four closed forms exact at q-precision 200", f);
}

#[test]
fn a3_u_matrix_entries_bounds_recurrence_to_i40() {
    let mut f = Vec::new();
    let i_max = 40usize;

    let u2 = compute_umatrix(2, i_max).unwrap();
    check!(f, u2.entry(1, 1) == &BigInt::from(24), "c_(1,1) = {} (expected 24)", u2.entry(1, 1));
    check!(f, u2.entry(1, 2) == &BigInt::from(2048), "c_(1,2) = {} (expected 2048)", u2.entry(1, 2));

    // two independent routes to the p = 2 matrix must agree entry-for-entry
    let rec = umatrix_recurrence_p2(i_max);
    for i in 1..=i_max {
        check!(f, u2.row(i) == rec.row(i), "recurrence-vs-direct mismatch in row {i}");
    }

    for &p in &[2u32, 3, 5, 7, 13] {
        let u = if p == 2 { u2.clone() } else { compute_umatrix(p, i_max).unwrap() };
        let sv = u.support_violations();
        check!(f, sv.is_empty(), "p = {p}: support violated at {:?}", sv.first());
        let gen = check_general_bound(&u);
        check!(
            f,
            gen.pass(),
            "p = {p}: general bound violated first at {:?}",
            gen.violations.first()
        );
        if p <= 3 {
            let star = check_star_bound(&u).unwrap();
            check!(
                f,
                star.pass(),
                "p = {p}: sharpened bound violated first at {:?}",
                star.violations.first()
            );
        } else {
            match check_star_bound(&u) {
                Err(Error::StarBoundRefused { p: wp }) => {
                    check!(f, wp == p, "refusal names p = {wp}, expected {p}");
                    let msg = format!("{}", Error::StarBoundRefused { p });
                    check!(
                        f,
                        msg.contains("24") && msg.contains("1/4"),
                        "refusal message lacks the witness entry: {msg}"
                    );
                }
                other => {
                    check!(f, false, "p = {p}: expected a refusal, got {other:?}");
                }
            }
        }
        if p == 5 {
            check!(f, u.entry(4, 1) == &BigInt::from(24), "c_(4,1) = {} (expected 24)", u.entry(4, 1));
        }
    }
    conclude("A3 U-matrix entries, support, bounds, recurrence (i <= 40)", f);
}

#[test]
fn a4_main_bound_sweep_m20() {
    let mut f = Vec::new();
    for &(p, ks) in SWEEP {
        for &k in ks {
            match verify_theorem_a(p, k, 20, None) {
                Ok(r) => {
                    check!(f, r.pass, "(p, k) = ({p}, {k}): main bound failed");
                }
                Err(e) => check!(f, false, "(p, k) = ({p}, {k}): error {e}"),
            }
        }
    }
    conclude("A4 main bound sweep, 18 cells, M = 20, exact", f);
}

#[test]
fn a5_refined_bound_sweep_and_sharpness() {
    let mut f = Vec::new();
    for p in [2u32, 3] {
        for k in (4..=40).step_by(2) {
            match verify_special(p, k, 20, None) {
                Ok(r) => {
                    check!(f, r.pass, "(p, k) = ({p}, {k}): refined bound failed");
                }
                Err(e) => check!(f, false, "(p, k) = ({p}, {k}): error {e}"),
            }
        }
    }
    for (p, k) in [(2u32, 6u32), (2, 10), (3, 4), (3, 8), (3, 10)] {
        let r = verify_special(p, k, 10, None).unwrap();
        check!(
            f,
            r.notes.iter().any(|n| n.contains("equality attained")),
            "(p, k) = ({p}, {k}): no equality attained at any i <= 10; notes {:?}",
            r.notes
        );
    }
    conclude("A5 refined bound sweep (even k in [4, 40], M = 20) with sharpness", f);
}

#[test]
fn a6_congruence_sweep_with_u_iterates() {
    let mut f = Vec::new();
    for &(p, ks) in SWEEP {
        for &k in ks {
            match verify_congruence(p, k, None) {
                Ok(r) => {
                    check!(f, r.pass, "(p, k) = ({p}, {k}): a congruence fell below t");
                    check!(
                        f,
                        r.prec >= Some(64),
                        "(p, k) = ({p}, {k}): precision {:?} below 64",
                        r.prec
                    );
                    check!(
                        f,
                        r.rows.len() == 6,
                        "(p, k) = ({p}, {k}): expected 6 rows (E*-E, E*-F, 4 iterates)"
                    );
                }
                Err(e) => check!(f, false, "(p, k) = ({p}, {k}): error {e}"),
            }
        }
    }
    conclude("A6 congruences at q-precision 64, U-iterates through i = 4", f);
}

fn random_series(rng: &mut TestRng, len: usize) -> QSeries {
    QSeries::from_coeffs((0..len).map(|_| rng.small_rational()).collect())
}

/// Exact rank of the first `cols` coefficients of each series.
fn rank(vectors: &[QSeries], cols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        vectors.iter().map(|v| v.coeffs()[..cols].to_vec()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = BigRational::one() / &m[rank][col];
        for cell in m[rank][col..cols].iter_mut() {
            *cell = &*cell * &inv;
        }
        let pivot_row = m[rank][col..cols].to_vec();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (cell, pv) in row[col..cols].iter_mut().zip(&pivot_row) {
                    *cell = &*cell - &factor * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn a7_property_suites() {
    let mut f = Vec::new();

    // U(S * V(T)) = U(S) * T, 100 random trials per prime
    for &p in &[2u32, 3, 5] {
        let mut rng = TestRng(0xACCE_0000 + u64::from(p));
        for trial in 0..100 {
            let ns = 4 + rng.below(30) as usize;
            let s = random_series(&mut rng, ns);
            let nt = 2 + rng.below(12) as usize;
            let t = random_series(&mut rng, nt);
            let lhs = s.mul(&t.apply_v(p)).apply_u(p);
            let rhs = s.apply_u(p).mul(&t);
            let n = lhs.prec().min(rhs.prec());
            check!(
                f,
                lhs.truncate(n) == rhs.truncate(n),
                "U(S V(T)) = U(S) T fails at p = {p}, trial {trial}"
            );
        }
    }

    // U-fixity of E* over the whole sweep
    for &(p, ks) in SWEEP {
        for &k in ks {
            let es = estar(p, k, 40).unwrap();
            let u = es.apply_u(p);
            check!(
                f,
                u == es.truncate(u.prec()),
                "U(E*) = E* fails at (p, k) = ({p}, {k})"
            );
        }
    }

    // ring laws on random series
    let mut rng = TestRng(0xACCE_BEEF);
    for trial in 0..60 {
        let n = 3 + rng.below(16) as usize;
        let a = random_series(&mut rng, n);
        let b = random_series(&mut rng, n);
        let c = random_series(&mut rng, n);
        check!(f, a.add(&b) == b.add(&a), "a+b = b+a fails, trial {trial}");
        check!(f, a.mul(&b) == b.mul(&a), "ab = ba fails, trial {trial}");
        check!(
            f,
            a.add(&b).mul(&c) == a.mul(&c).add(&b.mul(&c)),
            "(a+b)c = ac+bc fails, trial {trial}"
        );
        check!(
            f,
            a.mul(&b).mul(&c) == a.mul(&b.mul(&c)),
            "(ab)c = a(bc) fails, trial {trial}"
        );
    }

    // triangular stability: the first coefficients of an f_p expansion do not
    // depend on the index range or on extra source precision
    for &(p, k) in &[(2u32, 12u32), (3, 6), (5, 4), (13, 12)] {
        let g = ratio_estar_vstar(p, k, 40).unwrap();
        let wide = expand_in_fp(&g, p, 12).unwrap();
        let narrow = expand_in_fp(&g, p, 8).unwrap();
        check!(
            f,
            wide.coeffs()[..9] == *narrow.coeffs(),
            "expansion prefix unstable in index range at (p, k) = ({p}, {k})"
        );
        let shallow = expand_in_fp(&g.truncate(13), p, 12).unwrap();
        check!(
            f,
            wide.coeffs() == shallow.coeffs(),
            "expansion depends on surplus source precision at (p, k) = ({p}, {k})"
        );
    }

    // Katz round-trip: sum b_i / E_{p-1}^i reconstructs the source through
    // the justified precision
    for &(p, k, i_max) in &[(5u32, 4u32, 6usize), (7, 6, 6), (13, 12, 5)] {
        let n = 24;
        let g = ratio_estar_vstar(p, k, n).unwrap();
        let e = katz_expand(&g, p, i_max, n).unwrap();
        let ep_inv = eisenstein_series(p - 1, n).unwrap().invert().unwrap();
        let mut acc = QSeries::zero(n);
        let mut pw = QSeries::one(n);
        for b in &e.terms {
            acc = acc.add(&b.mul(&pw));
            pw = pw.mul(&ep_inv);
        }
        let d = e.justified_prec;
        check!(f, d >= 2, "(p, k) = ({p}, {k}): justified precision {d} too small");
        check!(
            f,
            acc.truncate(d) == g.truncate(d),
            "Katz reconstruction fails at (p, k) = ({p}, {k})"
        );
    }

    // splitting rank: E_{p-1} * M_{(i-1)(p-1)} plus the complement basis spans
    // M_{i(p-1)} exactly
    for &p in &[5u32, 7, 13] {
        let ep = eisenstein_series(p - 1, 16).unwrap();
        for i in 1..=6usize {
            let w = i as u32 * (p - 1);
            let d = dim_level1(i64::from(w));
            let prev = miller_basis((i as u32 - 1) * (p - 1), 16).unwrap();
            let mut family: Vec<QSeries> = prev.iter().map(|b| b.mul(&ep)).collect();
            family.extend(bi_basis(i, p, 16).unwrap());
            check!(f, family.len() == d, "p = {p}, i = {i}: family size {} != dim {d}", family.len());
            check!(f, rank(&family, d) == d, "p = {p}, i = {i}: splitting is rank-deficient");
        }
    }

    conclude("A7 property suites (commutation, fixity, ring laws, stability, Katz)", f);
}

#[test]
fn a8_cross_certifier_katz_vs_uniformizer() {
    let mut f = Vec::new();
    for &(p, k, katz_imax) in &[(5u32, 4u32, 9usize), (7, 6, 8)] {
        let katz = verify_theorem_a_katz(p, k, katz_imax, None).unwrap();
        let fp = verify_theorem_a(p, k, 20, None).unwrap();
        check!(f, katz.pass, "(p, k) = ({p}, {k}): Katz certifier failed");
        check!(f, fp.pass, "(p, k) = ({p}, {k}): uniformizer certifier failed");
        // the two required columns express one region: the f_p line is
        // 12/(p-1) times the Katz line, index for index
        let scale = q(12, i64::from(p) - 1);
        for i in 1..=katz_imax.min(20) {
            let katz_req = &katz.rows[i].required;
            let fp_req = &fp.rows[i - 1].required;
            check!(
                f,
                fp_req == &(katz_req * &scale),
                "(p, k) = ({p}, {k}), i = {i}: required columns disagree ({fp_req} vs {katz_req} * {scale})"
            );
        }
    }
    conclude("A8 cross-certifier: Katz and uniformizer profiles agree and pass", f);
}
