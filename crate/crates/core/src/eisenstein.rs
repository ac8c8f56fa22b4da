//! Eisenstein series, their p-deprived companions, and the parameter table
//! attached to a prime p and an even weight k >= 4 with (p - 1) | k.
//!
//! Normalizations:
//!
//! ```text
//! E_k   = 1 - (2k / B_k) sum_{n>=1} sigma_{k-1}(n) q^n          (constant term 1)
//! E*_k  = (E_k - p^{k-1} V(E_k)) / (1 - p^{k-1})                 (constant term 1)
//! ```
//!
//! so E_4 = 1 + 240 q + ..., E_6 = 1 - 504 q - ... (the sign of 504 follows
//! from B_6 = 1/42).  E*_k is the U_p-eigenform with eigenvalue 1 obtained by
//! removing the p-part of the divisor sums.
//!
//! The parameter table carries, for each admissible (p, k):
//!
//! * rho: 1/(p+1) when p >= 5, or when p in {2,3} and 2p | k; otherwise 1/(2p);
//! * t:   3 for (p,k) = (2,4); 3 + v_2(k) for p = 2, k > 4; 2 + v_p(k) for p >= 3;
//! * s:   v_p(k/2), only for p in {2, 3};
//! * a recipe expressing a low-weight form F congruent to E*_k mod p^t as a
//!   monomial in E_4, E_6, E_8, E_{p-1}.
//!
//! These feed the linear valuation bounds certified in `verify`.

use alloc::format;

use num_traits::One;

use crate::arith::{bernoulli, int_pow, is_prime, rational, sigma_power, vp_u64, BigRational};
use crate::error::Error;
use crate::qseries::QSeries;

/// Recipe for the low-weight lift F of the relevant Hasse-invariant power:
/// one case per congruence class of the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftRecipe {
    /// p = 2, k = 0 mod 4: F = E_4^{k/4}.
    E4Power { exp: u32 },
    /// p = 2, k = 2 mod 4: F = E_4^{(k-6)/4} E_6.
    E6TimesE4Power { exp: u32 },
    /// p = 3, k = 0 mod 6: F = E_6^{k/6}.
    E6Power { exp: u32 },
    /// p = 3, k = 2 mod 6: F = E_8 E_6^{(k-8)/6}.
    E8TimesE6Power { exp: u32 },
    /// p = 3, k = 4 mod 6: F = E_4 E_6^{(k-4)/6}.
    E4TimesE6Power { exp: u32 },
    /// p >= 5: F = E_{p-1}^{k/(p-1)}.
    EpMinus1Power { exp: u32 },
}

/// Derived parameters of an admissible pair (p, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub p: u32,
    pub k: u32,
    /// Overconvergence rate: the certified region parameter.
    pub rho: BigRational,
    /// Congruence exponent: E*_k = E_k = F mod p^t.
    pub t: u32,
    /// v_p(k/2), defined for p in {2, 3} only.
    pub s: Option<u32>,
    /// How to assemble F from E_4, E_6, E_8, E_{p-1}.
    pub recipe: LiftRecipe,
}

fn check_admissible(p: u32, k: u32) -> Result<(), Error> {
    if !is_prime(p as u64) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::Parameter(format!("weight {k} must be even and >= 4")));
    }
    if !k.is_multiple_of(p - 1) {
        return Err(Error::Parameter(format!("weight {k} is not divisible by p - 1 = {}", p - 1)));
    }
    Ok(())
}

/// The parameter table for an admissible pair (p prime, k even >= 4 with
/// (p-1) | k).
pub fn params(p: u32, k: u32) -> Result<Params, Error> {
    check_admissible(p, k)?;
    let rho = if p >= 5 || k.is_multiple_of(2 * p) {
        rational(1, i64::from(p) + 1)
    } else {
        rational(1, 2 * i64::from(p))
    };
    let t = if p == 2 && k == 4 {
        3
    } else if p == 2 {
        3 + vp_u64(u64::from(k), 2)
    } else {
        2 + vp_u64(u64::from(k), p)
    };
    let s = if p <= 3 { Some(vp_u64(u64::from(k) / 2, p)) } else { None };
    let recipe = lift_recipe(p, k)?;
    Ok(Params { p, k, rho, t, s, recipe })
}

fn lift_recipe(p: u32, k: u32) -> Result<LiftRecipe, Error> {
    let r = match p {
        2 => {
            if k.is_multiple_of(4) {
                LiftRecipe::E4Power { exp: k / 4 }
            } else {
                // k = 2 mod 4 and k >= 4 forces k >= 6
                let num = k.checked_sub(6).ok_or_else(|| {
                    Error::Parameter(format!("weight {k} leaves a negative exponent"))
                })?;
                LiftRecipe::E6TimesE4Power { exp: num / 4 }
            }
        }
        3 => match k % 6 {
            0 => LiftRecipe::E6Power { exp: k / 6 },
            2 => {
                let num = k.checked_sub(8).ok_or_else(|| {
                    Error::Parameter(format!("weight {k} leaves a negative exponent"))
                })?;
                LiftRecipe::E8TimesE6Power { exp: num / 6 }
            }
            _ => {
                // k = 4 mod 6; k >= 4 keeps this nonnegative
                LiftRecipe::E4TimesE6Power { exp: (k - 4) / 6 }
            }
        },
        _ => LiftRecipe::EpMinus1Power { exp: k / (p - 1) },
    };
    Ok(r)
}

/// E_m at precision `prec`, for even m >= 4.
pub fn eisenstein_series(m: u32, prec: usize) -> Result<QSeries, Error> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "Eisenstein weight {m} must be even and >= 4"
        )));
    }
    if prec == 0 {
        return Err(Error::Parameter("precision must be at least 1".into()));
    }
    let c = -rational(2 * i64::from(m), 1) / bernoulli(m)?;
    let mut coeffs = alloc::vec![BigRational::one()];
    for n in 1..prec as u64 {
        coeffs.push(&c * BigRational::from_integer(sigma_power(m - 1, n)?));
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// The p-deprived Eisenstein series E*_k at precision `prec`:
/// (E_k - p^{k-1} V(E_k)) / (1 - p^{k-1}), an U_p-eigenform with eigenvalue 1
/// and constant term 1.  V only contributes at indices divisible by p.
pub fn estar(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    check_admissible(p, k)?;
    let e = eisenstein_series(k, prec)?;
    let pk = BigRational::from_integer(int_pow(p, k - 1));
    let unit = BigRational::one() / (BigRational::one() - &pk);
    let p = p as usize;
    let coeffs = (0..prec)
        .map(|n| {
            let mut c = e.coeff(n).clone();
            if n % p == 0 {
                c -= &pk * e.coeff(n / p);
            }
            c * &unit
        })
        .collect();
    Ok(QSeries::from_coeffs(coeffs))
}

/// The low-weight lift F of the appropriate Hasse-invariant power, per the
/// recipe in `params`, at precision `prec`.
pub fn lift_f(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    let pr = params(p, k)?;
    let f = match pr.recipe {
        LiftRecipe::E4Power { exp } => eisenstein_series(4, prec)?.pow(exp),
        LiftRecipe::E6TimesE4Power { exp } => {
            eisenstein_series(4, prec)?.pow(exp).mul(&eisenstein_series(6, prec)?)
        }
        LiftRecipe::E6Power { exp } => eisenstein_series(6, prec)?.pow(exp),
        LiftRecipe::E8TimesE6Power { exp } => {
            eisenstein_series(8, prec)?.mul(&eisenstein_series(6, prec)?.pow(exp))
        }
        LiftRecipe::E4TimesE6Power { exp } => {
            eisenstein_series(4, prec)?.mul(&eisenstein_series(6, prec)?.pow(exp))
        }
        LiftRecipe::EpMinus1Power { exp } => eisenstein_series(p - 1, prec)?.pow(exp),
    };
    Ok(f)
}
