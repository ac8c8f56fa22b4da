//! The matrix of the U_p operator in the f_p coordinate, for the genus-zero
//! primes p in {2, 3, 5, 7, 13}.
//!
//! Writing U_p(f_p^i) = sum_j c_{i,j} f_p^j, the entries c_{i,j} are integers
//! supported on ceil(i/p) <= j <= i*p.  Two valuation lower bounds are
//! certified:
//!
//! * general: v_p(c_{i,j}) >= gamma_p (p j - i) - 1 with gamma_p = 12/(p^2-1),
//!   valid for every genus-zero p;
//! * sharpened (*): v_p(c_{i,j}) >= (gamma_p - 1/(p-1))(p j - i), valid only
//!   for p in {2, 3} — already at p = 5 the entry c_{4,1} = 24 has valuation
//!   0 against a required 1/4, so the check refuses p >= 5 outright.
//!
//! For p = 2 the entries also satisfy the two-step recurrence
//!
//! ```text
//! c_{i,j} = 2^12 c_{i-1,j-2} + 2^4*3 c_{i-1,j-1} + c_{i-2,j-1}   (i >= 2),
//! ```
//!
//! with row 1 seeded by c_{1,1} = 2^3*3, c_{1,2} = 2^11, and the convention
//! that row 0 is the identity row (c_{0,0} = 1, all other entries 0): the
//! direct computation is the arbiter, and the equality of the two routes is
//! part of the test suite.
//!
//! Everything runs on an integer fast path: f_p has nonnegative integer
//! coefficients, so powers are multiplied by Kronecker substitution, U_p is
//! index extraction, and the triangular expansion in powers of f_p stays in
//! integers because each f_p^j is monic at q^j.  A nonzero residual past
//! j = i*p would contradict the exact finite expansion of U_p(f_p^i) and is
//! reported as an internal inconsistency, never coerced.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{padic_val_int, rational, BigRational, PadicVal};
use crate::error::Error;
use crate::intseries::{fp_int_series, mul_nonneg_trunc};

/// Extra q-coefficients carried past j = i*p so the zero-residual consistency
/// check is a real check for every row, including the last.
const EXPANSION_HEADROOM: usize = 8;

/// Integer matrix of U_p on powers of f_p: rows i = 1..=i_max, columns
/// j = 0..=i*p (entries outside ceil(i/p) <= j <= i*p are zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UMatrix {
    pub p: u32,
    pub i_max: usize,
    rows: Vec<Vec<BigInt>>,
    zero: BigInt,
}

impl UMatrix {
    fn from_rows(p: u32, rows: Vec<Vec<BigInt>>) -> Self {
        UMatrix { p, i_max: rows.len(), rows, zero: BigInt::zero() }
    }

    /// c_{i,j} for 1 <= i <= i_max and arbitrary j (zero outside the stored
    /// range).
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        assert!(i >= 1 && i <= self.i_max, "row index out of range");
        self.rows[i - 1].get(j).unwrap_or(&self.zero)
    }

    /// The full stored row i: c_{i,0}, ..., c_{i, i*p}.
    pub fn row(&self, i: usize) -> &[BigInt] {
        assert!(i >= 1 && i <= self.i_max, "row index out of range");
        &self.rows[i - 1]
    }

    /// Indices (i, j) with a nonzero entry outside the support range
    /// ceil(i/p) <= j <= i*p.  Empty means the support condition holds.
    pub fn support_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (idx, row) in self.rows.iter().enumerate() {
            let i = idx + 1;
            let lo = i.div_ceil(self.p as usize);
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && j < lo {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// One entry failing a valuation bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryViolation {
    pub i: usize,
    pub j: usize,
    pub observed: PadicVal,
    pub required: BigRational,
}

/// Worst margin within one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSummary {
    pub i: usize,
    /// Column attaining the row minimum margin; None when every entry of the
    /// row vanishes (margin +inf).
    pub j_at_min: Option<usize>,
    pub observed: PadicVal,
    pub required: BigRational,
    pub margin: PadicVal,
}

/// Outcome of checking required = rate * (p*j - i) + offset over all entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UBoundReport {
    pub p: u32,
    pub i_max: usize,
    pub rate: BigRational,
    pub offset: BigRational,
    pub entries_checked: usize,
    pub violations: Vec<EntryViolation>,
    pub per_row: Vec<RowSummary>,
    pub min_margin: PadicVal,
}

impl UBoundReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compute the U_p matrix through row i_max by the direct route: powers of
/// f_p at full precision, U_p as index extraction, triangular expansion.
pub fn compute_umatrix(p: u32, i_max: usize) -> Result<UMatrix, Error> {
    if i_max == 0 {
        return Err(Error::Parameter("i_max must be at least 1".into()));
    }
    let j_max = p as usize * i_max;
    let l_exp = j_max + EXPANSION_HEADROOM + 1;
    let n_full = p as usize * (l_exp - 1) + 1;
    let f = fp_int_series(p, n_full)
        .ok_or_else(|| Error::Parameter(format!("no genus-zero uniformizer for p = {p}")))?;

    // powers f^0 .. f^{j_max} at precision l_exp, for the expansion side
    let mut fpows: Vec<Vec<BigInt>> = Vec::with_capacity(j_max + 1);
    let mut one = vec![BigInt::zero(); l_exp];
    one[0] = BigInt::from(1);
    fpows.push(one);
    for _ in 1..=j_max {
        let next = mul_nonneg_trunc(fpows.last().expect("nonempty"), &f, l_exp);
        fpows.push(next);
    }

    let mut rows = Vec::with_capacity(i_max);
    // running power f^i at full precision n_full (never grown later: growing
    // precision after a truncating multiply cannot be undone)
    let mut pw = f.clone();
    for i in 1..=i_max {
        if i > 1 {
            pw = mul_nonneg_trunc(&pw, &f, n_full);
        }
        // U_p: keep indices divisible by p
        let mut r: Vec<BigInt> = (0..l_exp).map(|n| pw[p as usize * n].clone()).collect();
        let top = p as usize * i;
        let mut row = vec![BigInt::zero(); top + 1];
        for (j, slot) in row.iter_mut().enumerate() {
            let c = r[j].clone();
            if c.is_zero() {
                continue;
            }
            let g = &fpows[j];
            for n in j..l_exp {
                r[n] -= &c * &g[n];
            }
            *slot = c;
        }
        if let Some(n) = r.iter().position(|x| !x.is_zero()) {
            return Err(Error::Inconsistency(format!(
                "expansion of U_{p}(f^{i}) does not terminate at j = {top}: residual at q^{n}"
            )));
        }
        rows.push(row);
    }
    Ok(UMatrix::from_rows(p, rows))
}

/// The p = 2 matrix by the two-step recurrence (independent of the direct
/// route; their equality is a theorem the test suite checks).
pub fn umatrix_recurrence_p2(i_max: usize) -> UMatrix {
    assert!(i_max >= 1);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(i_max);
    rows.push(vec![BigInt::zero(), BigInt::from(24), BigInt::from(2048)]);
    let w2 = BigInt::from(1 << 12);
    let w1 = BigInt::from(48);
    for i in 2..=i_max {
        let mut row = vec![BigInt::zero(); 2 * i + 1];
        for j in 1..=2 * i {
            let mut c = BigInt::zero();
            let prev = &rows[i - 2]; // row i-1
            if j >= 2 && j - 2 < prev.len() {
                c += &w2 * &prev[j - 2];
            }
            if j - 1 < prev.len() {
                c += &w1 * &prev[j - 1];
            }
            if i == 2 {
                // virtual row 0 is the identity row: contributes 1 at j = 1
                if j == 1 {
                    c += 1;
                }
            } else if j - 1 < rows[i - 3].len() {
                c += &rows[i - 3][j - 1];
            }
            row[j] = c;
        }
        rows.push(row);
    }
    UMatrix::from_rows(2, rows)
}

fn check_affine_bound(u: &UMatrix, rate: BigRational, offset: BigRational) -> UBoundReport {
    let p = u.p as i64;
    let mut violations = Vec::new();
    let mut per_row = Vec::with_capacity(u.i_max);
    let mut min_margin = PadicVal::Infinite;
    let mut entries_checked = 0usize;
    for i in 1..=u.i_max {
        let mut row_min = PadicVal::Infinite;
        let mut row_at: Option<(usize, PadicVal, BigRational)> = None;
        for (j, c) in u.row(i).iter().enumerate() {
            let x = p * j as i64 - i as i64;
            let required = &rate * rational(x, 1) + &offset;
            entries_checked += 1;
            let observed = padic_val_int(c, u.p).expect("p is prime by construction");
            let margin = observed.sub_rational(&required);
            if matches!(margin, PadicVal::Finite(ref v) if v < &BigRational::zero()) {
                violations.push(EntryViolation {
                    i,
                    j,
                    observed: observed.clone(),
                    required: required.clone(),
                });
            }
            if margin < row_min {
                row_min = margin.clone();
                row_at = Some((j, observed, required));
            }
        }
        min_margin = min_margin.min_with(row_min.clone());
        match row_at {
            Some((j, observed, required)) => per_row.push(RowSummary {
                i,
                j_at_min: Some(j),
                observed,
                required,
                margin: row_min,
            }),
            None => per_row.push(RowSummary {
                i,
                j_at_min: None,
                observed: PadicVal::Infinite,
                required: BigRational::zero(),
                margin: PadicVal::Infinite,
            }),
        }
    }
    UBoundReport {
        p: u.p,
        i_max: u.i_max,
        rate,
        offset,
        entries_checked,
        violations,
        per_row,
        min_margin,
    }
}

/// The generally valid bound v_p(c_{i,j}) >= gamma_p (p j - i) - 1,
/// gamma_p = 12/(p^2 - 1).
pub fn check_general_bound(u: &UMatrix) -> UBoundReport {
    let p = i64::from(u.p);
    check_affine_bound(u, rational(12, p * p - 1), rational(-1, 1))
}

/// The sharpened bound v_p(c_{i,j}) >= (gamma_p - 1/(p-1))(p j - i), valid
/// only for p in {2, 3}; other p are refused with the explicit p = 5
/// counterexample in the error message.
pub fn check_star_bound(u: &UMatrix) -> Result<UBoundReport, Error> {
    if u.p != 2 && u.p != 3 {
        return Err(Error::StarBoundRefused { p: u.p });
    }
    let p = i64::from(u.p);
    let rate = rational(12, p * p - 1) - rational(1, p - 1);
    Ok(check_affine_bound(u, rate, BigRational::zero()))
}
