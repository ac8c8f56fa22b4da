//! Truncated q-expansions over exact rationals, with explicit precision
//! contracts.
//!
//! A `QSeries` stores coefficients c_0, ..., c_{N-1} of a formal series
//! sum c_n q^n known modulo q^N; N = `prec()` is always at least 1.  Every
//! operation states how it transforms precision:
//!
//! * `add`/`sub`/`mul`: min of the input precisions;
//! * `invert`: precision preserved (constant term must be nonzero);
//! * `div_by_order`: min precision minus ord_q(divisor);
//! * `pow`: precision preserved;
//! * `apply_u` (c_n -> c_{pn}): ceil(N / p);
//! * `apply_v` (c_n -> coefficient at q^{pn}): p(N - 1) + 1.
//!
//! No operation ever reports more precision than its inputs justify, and no
//! operation silently pads with zeros.
//!
//! The module also provides the genus-zero eta-quotient uniformizers
//!
//! ```text
//! f_p = q * prod_{n>=1} ((1 - q^{p n}) / (1 - q^n))^{24/(p-1)},   p in {2,3,5,7,13},
//! ```
//!
//! whose coefficients are nonnegative integers, and the discriminant series
//! Delta = q * prod (1 - q^n)^24.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{padic_val, BigRational, PadicVal};
use crate::error::Error;
use crate::intseries;

/// A q-expansion truncated at q^prec: coefficients for q^0 .. q^{prec-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Wrap an explicit coefficient vector; its length is the precision and
    /// must be at least 1.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series carries at least one coefficient");
        QSeries { coeffs }
    }

    /// The zero series at the given precision.
    pub fn zero(prec: usize) -> Self {
        assert!(prec >= 1);
        QSeries { coeffs: alloc::vec![BigRational::zero(); prec] }
    }

    /// The constant series 1 at the given precision.
    pub fn one(prec: usize) -> Self {
        let mut s = QSeries::zero(prec);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// c * q^n at the given precision (n < prec).
    pub fn monomial(c: BigRational, n: usize, prec: usize) -> Self {
        assert!(n < prec, "monomial exponent beyond precision");
        let mut s = QSeries::zero(prec);
        s.coeffs[n] = c;
        s
    }

    /// Number of known coefficients N: the series is known modulo q^N.
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^n; n must be below the precision.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    /// All stored coefficients.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// q-order within the stored window: index of the first nonzero
    /// coefficient, or None when the series vanishes at this precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Forget coefficients: lower precision to `prec` (1 <= prec <= self.prec()).
    pub fn truncate(&self, prec: usize) -> Self {
        assert!(prec >= 1 && prec <= self.prec(), "truncate only lowers precision");
        QSeries { coeffs: self.coeffs[..prec].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    /// Scalar multiple; precision preserved.
    pub fn scale(&self, c: &BigRational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Cauchy product at precision min(prec, prec).
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let mut out = alloc::vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a unit constant term.  Precision
    /// preserved.
    pub fn invert(&self) -> Result<Self, Error> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonUnit);
        }
        let n = self.prec();
        let c0_inv = BigRational::one() / &self.coeffs[0];
        let mut out = alloc::vec![BigRational::zero(); n];
        out[0] = c0_inv.clone();
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    s += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -(s * &c0_inv);
        }
        Ok(QSeries { coeffs: out })
    }

    /// Exact quotient self / other where ord_q(other) <= ord_q(self): both are
    /// shifted down by ord_q(other), then the unit division is performed.
    /// Result precision: min(prec) - ord_q(other).
    pub fn div_by_order(&self, other: &Self) -> Result<Self, Error> {
        let ord_b = other.order().ok_or(Error::DegenerateDivisor)?;
        if let Some(ord_a) = self.order() {
            if ord_a < ord_b {
                return Err(Error::NonDivisible { num_order: ord_a, den_order: ord_b });
            }
        }
        let n = self.prec().min(other.prec());
        if ord_b >= n {
            // divisor order known only beyond the common window
            return Err(Error::Precision { needed: ord_b + 1, have: n });
        }
        let a = QSeries::from_coeffs(self.coeffs[ord_b..n].to_vec());
        let b = QSeries::from_coeffs(other.coeffs[ord_b..n].to_vec());
        Ok(a.mul(&b.invert()?))
    }

    /// Integer power by binary powering; a^0 = 1.  Precision preserved.
    pub fn pow(&self, mut e: u32) -> Self {
        let n = self.prec();
        let mut acc = QSeries::one(n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The operator U_p: (sum c_n q^n) |-> sum c_{p n} q^n.
    /// Precision ceil(N / p).
    pub fn apply_u(&self, p: u32) -> Self {
        assert!(p >= 1);
        let p = p as usize;
        let n = self.prec();
        let new_prec = n.div_ceil(p);
        QSeries {
            coeffs: (0..new_prec).map(|i| self.coeffs[p * i].clone()).collect(),
        }
    }

    /// The operator V_p: (sum c_n q^n) |-> sum c_n q^{p n}.
    /// Precision p(N - 1) + 1: every stored coefficient remains justified.
    pub fn apply_v(&self, p: u32) -> Self {
        assert!(p >= 1);
        let p = p as usize;
        let n = self.prec();
        let mut out = alloc::vec![BigRational::zero(); p * (n - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[p * i] = c.clone();
        }
        QSeries { coeffs: out }
    }

    /// Minimum of v_p over the coefficients c_n with from <= n < prec;
    /// +inf when all of them vanish.
    pub fn min_val(&self, p: u32, from: usize) -> Result<PadicVal, Error> {
        if from >= self.prec() {
            return Err(Error::Parameter(
                "min_val window starts beyond the precision".to_string(),
            ));
        }
        let mut best = PadicVal::Infinite;
        for c in &self.coeffs[from..] {
            let v = padic_val(c, p)?;
            best = best.min_with(v);
        }
        Ok(best)
    }
}

/// The uniformizer f_p as a `QSeries` at precision `prec`, for the genus-zero
/// primes p in {2, 3, 5, 7, 13}.  Coefficients are nonnegative integers.
pub fn eta_quotient_fp(p: u32, prec: usize) -> Result<QSeries, Error> {
    use alloc::format;
    if prec == 0 {
        return Err(Error::Parameter("precision must be at least 1".to_string()));
    }
    let ints = intseries::fp_int_series(p, prec)
        .ok_or_else(|| Error::Parameter(format!("no genus-zero uniformizer for p = {p}")))?;
    Ok(QSeries::from_coeffs(
        ints.into_iter().map(BigRational::from_integer).collect(),
    ))
}

/// The discriminant series Delta = q * prod (1 - q^n)^24 at precision `prec`.
pub fn delta(prec: usize) -> QSeries {
    assert!(prec >= 1);
    let ints = intseries::eta_product(prec, 1, &[(1, 24)]);
    QSeries::from_coeffs(ints.into_iter().map(BigRational::from_integer).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational, TestRng};
    use alloc::vec;
    use alloc::vec::Vec;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    fn ints(v: &[i64]) -> QSeries {
        QSeries::from_coeffs(v.iter().map(|&x| q(x, 1)).collect())
    }

    fn random_series(rng: &mut TestRng, prec: usize) -> QSeries {
        QSeries::from_coeffs((0..prec).map(|_| rng.small_rational()).collect())
    }

    #[test]
    fn precision_contracts() {
        let a = QSeries::one(10);
        let b = QSeries::one(7);
        assert_eq!(a.add(&b).prec(), 7);
        assert_eq!(a.mul(&b).prec(), 7);
        assert_eq!(a.apply_u(3).prec(), 4); // ceil(10/3)
        assert_eq!(b.apply_u(3).prec(), 3); // ceil(7/3)
        assert_eq!(b.apply_v(3).prec(), 19); // 3*(7-1)+1
        assert_eq!(a.truncate(4).prec(), 4);
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 - q)^{-1} = 1 + q + q^2 + ...
        let one_minus_q = ints(&[1, -1, 0, 0, 0, 0, 0, 0]);
        let inv = one_minus_q.invert().unwrap();
        assert_eq!(inv, ints(&[1, 1, 1, 1, 1, 1, 1, 1]));
        // and a unit times its inverse is 1
        assert_eq!(one_minus_q.mul(&inv), QSeries::one(8));
        assert!(matches!(ints(&[0, 1]).invert(), Err(Error::NonUnit)));
    }

    #[test]
    fn u_and_v_operators() {
        let a = ints(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5]);
        assert_eq!(a.apply_u(2), ints(&[3, 4, 5, 2, 5, 5]));
        assert_eq!(a.apply_u(5), ints(&[3, 9, 5]));
        let b = ints(&[7, 2, 1]);
        assert_eq!(b.apply_v(3), ints(&[7, 0, 0, 2, 0, 0, 1]));
        // U_p(V_p(x)) = x with precision p*(N-1)+1 -> ceil((p(N-1)+1)/p) = N
        assert_eq!(b.apply_v(3).apply_u(3), b);
        assert_eq!(a.apply_v(2).apply_u(2), a);
    }

    #[test]
    fn division_by_order() {
        // (q^2 + q^3) / (q + q^2) = q
        let num = ints(&[0, 0, 1, 1, 0, 0]);
        let den = ints(&[0, 1, 1, 0, 0, 0]);
        let quot = num.div_by_order(&den).unwrap();
        assert_eq!(quot.prec(), 5);
        assert_eq!(quot, ints(&[0, 1, 0, 0, 0]));
        // order violation is an error
        assert!(matches!(
            den.div_by_order(&num),
            Err(Error::NonDivisible { num_order: 1, den_order: 2 })
        ));
        // zero divisor
        assert!(matches!(num.div_by_order(&QSeries::zero(6)), Err(Error::DegenerateDivisor)));
        // zero numerator divides cleanly
        let z = QSeries::zero(6).div_by_order(&den).unwrap();
        assert_eq!(z, QSeries::zero(5));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let mut rng = TestRng(0xABCD1234);
        for _ in 0..20 {
            let a = random_series(&mut rng, 12);
            let e = rng.below(7) as u32;
            let fast = a.pow(e);
            let mut slow = QSeries::one(12);
            for _ in 0..e {
                slow = slow.mul(&a);
            }
            assert_eq!(fast, slow);
        }
        assert_eq!(ints(&[0, 5, 1]).pow(0), QSeries::one(3));
    }

    #[test]
    fn ring_laws_randomized() {
        let mut rng = TestRng(0x5EED);
        for _ in 0..100 {
            let n = 6 + rng.below(8) as usize;
            let a = random_series(&mut rng, n);
            let b = random_series(&mut rng, n);
            let c = random_series(&mut rng, n);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            assert_eq!(a.sub(&a), QSeries::zero(n));
        }
    }

    #[test]
    fn coleman_commutation_u_of_product_with_v() {
        // U_p(S * V_p(T)) = U_p(S) * T, checked at the contracted precision.
        for &p in &[2u32, 3, 5] {
            let mut rng = TestRng(0x1234_0000 + u64::from(p));
            for _ in 0..100 {
                let ns = 4 + rng.below(30) as usize;
                let s = random_series(&mut rng, ns);
                let nt = 2 + rng.below(12) as usize;
                let t = random_series(&mut rng, nt);
                let lhs = s.mul(&t.apply_v(p)).apply_u(p);
                let rhs = s.apply_u(p).mul(&t);
                let n = lhs.prec().min(rhs.prec());
                assert_eq!(lhs.truncate(n), rhs.truncate(n), "p = {p}");
            }
        }
    }

    #[test]
    fn uniformizer_head_values() {
        let f2 = eta_quotient_fp(2, 8).unwrap();
        assert_eq!(f2, ints(&[0, 1, 24, 300, 2624, 18126, 105504, 538296]));
        // all nonnegative integers, order exactly 1
        assert_eq!(f2.order(), Some(1));
        let f13 = eta_quotient_fp(13, 9).unwrap();
        assert_eq!(f13, ints(&[0, 1, 2, 5, 10, 20, 36, 65, 110]));
        assert!(matches!(eta_quotient_fp(11, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn uniformizer_f2_against_binomial_product_oracle() {
        // Independent route: f_2 = q prod (1 + q^n)^24, expanded by repeated
        // in-place multiplication by the sparse binomial (1 + q^n).
        let prec = 300usize;
        let mut c: Vec<BigInt> = vec![BigInt::from(0); prec - 1];
        c[0] = BigInt::from(1);
        for n in 1..prec - 1 {
            for _ in 0..24 {
                for k in (n..prec - 1).rev() {
                    let t = c[k - n].clone();
                    c[k] += t;
                }
            }
        }
        let mut oracle = vec![BigRational::zero(); prec];
        for (i, v) in c.into_iter().enumerate() {
            oracle[i + 1] = BigRational::from_integer(v);
        }
        assert_eq!(eta_quotient_fp(2, prec).unwrap(), QSeries::from_coeffs(oracle));
    }

    #[test]
    fn uniformizer_prefix_stability() {
        for &p in &[2u32, 3, 5, 7, 13] {
            let long = eta_quotient_fp(p, 41).unwrap();
            let short = eta_quotient_fp(p, 23).unwrap();
            assert_eq!(long.truncate(23), short);
        }
    }

    #[test]
    fn delta_head() {
        assert_eq!(
            delta(9),
            ints(&[0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480])
        );
    }

    #[test]
    fn min_val_window() {
        let a = QSeries::from_coeffs(vec![q(4, 1), q(3, 2), q(0, 1), q(8, 1)]);
        assert_eq!(a.min_val(2, 0).unwrap(), PadicVal::from_int(-1));
        assert_eq!(a.min_val(2, 2).unwrap(), PadicVal::from_int(3));
        assert_eq!(QSeries::zero(5).min_val(2, 0).unwrap(), PadicVal::Infinite);
        assert!(matches!(a.min_val(2, 4), Err(Error::Parameter(_))));
        assert!(matches!(a.min_val(6, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn truncation_commutes_with_arithmetic() {
        let mut rng = TestRng(0x7777);
        for _ in 0..50 {
            let a = random_series(&mut rng, 16);
            let b = random_series(&mut rng, 16);
            let m = 3 + rng.below(12) as usize;
            assert_eq!(a.mul(&b).truncate(m), a.truncate(m).mul(&b.truncate(m)));
            assert_eq!(a.add(&b).truncate(m), a.truncate(m).add(&b.truncate(m)));
        }
    }
}
