//! Exact scalar arithmetic: p-adic valuations, Bernoulli numbers, divisor
//! power sums.
//!
//! Conventions:
//!
//! * valuations are normalized so that v_p(p) = 1, extended to Q by
//!   v_p(a/b) = v_p(a) - v_p(b), with v_p(0) = +inf carried as a distinguished
//!   value (never a sentinel integer);
//! * Bernoulli numbers follow the convention B_0 = 1, B_1 = -1/2, B_2 = 1/6,
//!   so that B_4 = -1/30 and -2*4/B_4 = 240;
//! * sigma_e(n) = sum of d^e over the positive divisors d of n.
//!
//! Everything here is exact: no floats, no modular shortcuts.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::Error;

/// Exact rational scalar used throughout the crate: arbitrary-precision
/// numerator and denominator, kept in lowest terms with positive denominator.
pub type BigRational = num_rational::BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A p-adic valuation: either a finite rational value or +inf (the valuation
/// of zero).  Ordered totally, with `Infinite` greater than every finite
/// value, so bound checks read as plain comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicVal {
    Finite(BigRational),
    Infinite,
}

impl PadicVal {
    pub fn from_int(v: i64) -> Self {
        PadicVal::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PadicVal::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            PadicVal::Finite(v) => Some(v),
            PadicVal::Infinite => None,
        }
    }

    /// `self - r`, with +inf absorbing: (+inf) - r = +inf.
    pub fn sub_rational(&self, r: &BigRational) -> PadicVal {
        match self {
            PadicVal::Finite(v) => PadicVal::Finite(v - r),
            PadicVal::Infinite => PadicVal::Infinite,
        }
    }

    /// Minimum of two valuations (+inf is the neutral element).
    pub fn min_with(self, other: PadicVal) -> PadicVal {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for PadicVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PadicVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PadicVal::Infinite, PadicVal::Infinite) => Ordering::Equal,
            (PadicVal::Infinite, PadicVal::Finite(_)) => Ordering::Greater,
            (PadicVal::Finite(_), PadicVal::Infinite) => Ordering::Less,
            (PadicVal::Finite(a), PadicVal::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for PadicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicVal::Finite(v) => write!(f, "{v}"),
            PadicVal::Infinite => write!(f, "inf"),
        }
    }
}

/// Trial-division primality for the small moduli this crate works with.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn vp_biguint(n: &BigUint, p: u32) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut v = 0u64;
    let mut n = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// v_p of a nonzero big integer.
pub fn padic_val_int(n: &BigInt, p: u32) -> Result<PadicVal, Error> {
    if !is_prime(p as u64) {
        return Err(Error::Parameter(param_msg_not_prime(p)));
    }
    if n.is_zero() {
        return Ok(PadicVal::Infinite);
    }
    let v = vp_biguint(n.magnitude(), p);
    Ok(PadicVal::Finite(BigRational::from_integer(BigInt::from(v))))
}

/// v_p of an exact rational; v_p(0) = +inf, v_p(a/b) = v_p(a) - v_p(b).
pub fn padic_val(x: &BigRational, p: u32) -> Result<PadicVal, Error> {
    if !is_prime(p as u64) {
        return Err(Error::Parameter(param_msg_not_prime(p)));
    }
    if x.is_zero() {
        return Ok(PadicVal::Infinite);
    }
    let vn = vp_biguint(x.numer().magnitude(), p) as i64;
    let vd = vp_biguint(x.denom().magnitude(), p) as i64;
    Ok(PadicVal::from_int(vn - vd))
}

fn param_msg_not_prime(p: u32) -> String {
    use alloc::format;
    format!("{p} is not prime")
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Bernoulli number B_m for even m >= 0 (and m = 0), by the convolution
/// recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0.
///
/// Odd m >= 3 have B_m = 0 and are rejected as a parameter error so callers
/// cannot silently divide by them; m = 1 is rejected for the same reason.
pub fn bernoulli(m: u32) -> Result<BigRational, Error> {
    use alloc::format;
    if m % 2 == 1 {
        return Err(Error::Parameter(format!("bernoulli index {m} is odd")));
    }
    Ok(bernoulli_table(m).pop().expect("table is nonempty"))
}

/// The table B_0, B_1, ..., B_m (all indices, including odd ones).
fn bernoulli_table(m: u32) -> Vec<BigRational> {
    let mut table: Vec<BigRational> = Vec::with_capacity(m as usize + 1);
    table.push(BigRational::one());
    for n in 1..=(m as u64) {
        // B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j
        let mut s = BigRational::zero();
        for (j, bj) in table.iter().enumerate() {
            s += BigRational::from_integer(binomial(n + 1, j as u64)) * bj;
        }
        let bn = -s / BigRational::from_integer(BigInt::from(n + 1));
        table.push(bn);
    }
    table
}

/// Divisor power sum sigma_e(n) = sum_{d | n, d > 0} d^e, exact.
pub fn sigma_power(e: u32, n: u64) -> Result<BigInt, Error> {
    use alloc::format;
    if n == 0 {
        return Err(Error::Parameter(format!("sigma_{e}(0) is undefined")));
    }
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(e);
            let q = n / d;
            if q != d {
                acc += BigInt::from(q).pow(e);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// Exact power p^e as a `BigInt`.
pub fn int_pow(p: u32, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// v_p of a machine integer, for convenience in parameter tables; n must be
/// nonzero.
pub fn vp_u64(n: u64, p: u32) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    let mut n = n;
    let p = p as u64;
    while n.is_multiple_of(p) {
        v += 1;
        n /= p;
    }
    v
}

/// Minimal deterministic xorshift generator for the hand-rolled randomized
/// test suites.  Not cryptographic; stable across platforms.
#[derive(Clone)]
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform-ish value in [0, bound).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// A small signed rational with numerator in [-9, 9] and denominator in
    /// [1, 9]; occasionally zero, which the valuation laws need to see.
    pub fn small_rational(&mut self) -> BigRational {
        let num = self.below(19) as i64 - 9;
        let den = self.below(9) as i64 + 1;
        rational(num, den)
    }

    /// A nonzero variant of `small_rational`.
    pub fn small_nonzero_rational(&mut self) -> BigRational {
        loop {
            let r = self.small_rational();
            if !r.is_zero() {
                return r;
            }
        }
    }
}
