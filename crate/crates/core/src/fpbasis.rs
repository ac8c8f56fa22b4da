//! Expansion of weight-0 functions in powers of the genus-zero uniformizer
//! f_p, and certification of linear lower bounds on coefficient valuations.
//!
//! Since f_p = q + O(q^2), a function g known modulo q^{M+1} has uniquely
//! determined expansion coefficients a_0, ..., a_M with
//!
//! ```text
//! g = a_0 + a_1 f_p + a_2 f_p^2 + ... + a_M f_p^M + O(q^{M+1}),
//! ```
//!
//! computed by triangular subtract-and-match.  The object of interest is the
//! valuation profile v_p(a_i) and whether it clears a line c_0 + m*i.
//!
//! The dictionary between regions of the modular curve and expansion decay is
//! only valid up to the line of slope 12p/(p^2 - 1) (in these q-expansion
//! units, corresponding to region parameter p/(p+1)); `check_bound` refuses
//! steeper requests rather than certifying something the criterion does not
//! cover.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{is_prime, padic_val, rational, BigRational, PadicVal};
use crate::error::Error;
use crate::qseries::{eta_quotient_fp, QSeries};

/// Coefficients a_0 .. a_M of an expansion in powers of f_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpExpansion {
    pub p: u32,
    coeffs: Vec<BigRational>,
    /// q-precision of the source series (always >= max_index + 1).
    pub source_prec: usize,
}

impl FpExpansion {
    /// Largest expansion index M carried.
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

/// A required lower bound v_p(a_i) >= offset + slope * i for i >= start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearBound {
    pub offset: BigRational,
    pub slope: BigRational,
    pub start: usize,
}

impl LinearBound {
    pub fn new(offset: BigRational, slope: BigRational, start: usize) -> Self {
        LinearBound { offset, slope, start }
    }

    /// The required valuation at index i.
    pub fn required_at(&self, i: usize) -> BigRational {
        &self.offset + &self.slope * BigRational::from_integer(i.into())
    }
}

/// One failed index in a bound check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub observed: PadicVal,
    pub required: BigRational,
}

/// Outcome of checking a `LinearBound` against a profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound: LinearBound,
    /// Inclusive index range that was checked.
    pub checked: (usize, usize),
    pub violations: Vec<Violation>,
    /// min over checked i of (v_p(a_i) - required(i)); +inf when every
    /// checked coefficient vanishes.
    pub min_margin: PadicVal,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Slope of the q-expansion valuation line attached to region parameter
/// sigma: (12/(p-1)) * sigma.
pub fn fp_slope(p: u32, sigma: &BigRational) -> BigRational {
    rational(12, i64::from(p) - 1) * sigma
}

/// The steepest slope the expansion criterion certifies: 12p/(p^2 - 1)
/// (region parameter p/(p+1)).
pub fn slope_limit(p: u32) -> BigRational {
    let p = i64::from(p);
    rational(12 * p, p * p - 1)
}

/// Expand g in powers of f_p through index M.  Requires prec(g) >= M + 1;
/// p must be one of the genus-zero primes {2, 3, 5, 7, 13}.
pub fn expand_in_fp(g: &QSeries, p: u32, m: usize) -> Result<FpExpansion, Error> {
    if g.prec() < m + 1 {
        return Err(Error::Precision { needed: m + 1, have: g.prec() });
    }
    let f = eta_quotient_fp(p, m + 1)?;
    let source_prec = g.prec();
    let mut r = g.truncate(m + 1);
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(r.coeff(0).clone());
    // r := r - a_0; only the constant entry changes because f^0 = 1
    r = r.sub(&QSeries::monomial(coeffs[0].clone(), 0, m + 1));
    let mut fpow = f.clone();
    for i in 1..=m {
        let ai = r.coeff(i).clone();
        if !ai.is_zero() {
            r = r.sub(&fpow.scale(&ai));
        }
        coeffs.push(ai);
        if i < m {
            fpow = fpow.mul(&f);
        }
    }
    debug_assert!(r.coeffs().iter().all(Zero::is_zero));
    Ok(FpExpansion { p, coeffs, source_prec })
}

/// The valuation profile v_p(a_0), ..., v_p(a_M).
pub fn valuation_profile(e: &FpExpansion) -> Vec<PadicVal> {
    e.coeffs
        .iter()
        .map(|c| padic_val(c, e.p).expect("p validated at construction"))
        .collect()
}

/// Check a linear bound against an expansion's valuation profile over
/// start <= i <= max_index.
pub fn check_bound(e: &FpExpansion, b: &LinearBound) -> Result<BoundReport, Error> {
    if b.start > e.max_index() {
        return Err(Error::Parameter(
            "bound start index is beyond the expansion range".to_string(),
        ));
    }
    if b.slope > slope_limit(e.p) {
        return Err(Error::SlopeOutOfCriterion { p: e.p });
    }
    let mut violations = Vec::new();
    let mut min_margin = PadicVal::Infinite;
    for i in b.start..=e.max_index() {
        let required = b.required_at(i);
        let observed = padic_val(e.coeff(i), e.p).expect("p validated at construction");
        let margin = observed.sub_rational(&required);
        if matches!(margin, PadicVal::Finite(ref v) if v < &BigRational::zero()) {
            violations.push(Violation { index: i, observed: observed.clone(), required: required.clone() });
        }
        min_margin = min_margin.min_with(margin);
    }
    Ok(BoundReport {
        bound: b.clone(),
        checked: (b.start, e.max_index()),
        violations,
        min_margin,
    })
}

/// Formal expansion of a rational function N(f)/D(f) in the f-variable,
/// through index M: plain power-series division on coefficient vectors.
/// The denominator's constant coefficient must be nonzero.
pub fn rational_fn_expansion(
    numer: &[BigRational],
    denom: &[BigRational],
    p: u32,
    m: usize,
) -> Result<FpExpansion, Error> {
    if !is_prime(u64::from(p)) {
        return Err(Error::Parameter("p must be prime".to_string()));
    }
    if denom.first().is_none_or(Zero::is_zero) {
        return Err(Error::NonUnit);
    }
    let d0 = denom[0].clone();
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut s = if k < numer.len() { numer[k].clone() } else { BigRational::zero() };
        for j in 1..=k.min(denom.len() - 1) {
            if !denom[j].is_zero() && !coeffs[k - j].is_zero() {
                s -= &denom[j] * &coeffs[k - j];
            }
        }
        coeffs.push(s / &d0);
    }
    Ok(FpExpansion { p, coeffs, source_prec: m + 1 })
}
