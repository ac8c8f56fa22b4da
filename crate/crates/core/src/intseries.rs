//! Integer q-series helpers: eta-type products and a Kronecker-substitution
//! multiply for long truncated series with nonnegative coefficients.
//!
//! The hot path of the U-matrix computation multiplies integer series with
//! thousands of terms whose coefficients run to thousands of bits.  Schoolbook
//! convolution is quadratic in both; packing the series into a single big
//! integer (coefficients in fixed-width slots) turns one series product into
//! one big-integer product, which num-bigint performs subquadratically.  The
//! slot width is chosen so product coefficients cannot overflow their slot:
//! for nonnegative inputs, each product coefficient is at most
//! len * max(a) * max(b), so `bits(max a) + bits(max b) + ceil(log2 len) + 1`
//! bits suffice.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

/// Multiply two truncated integer series with *nonnegative* coefficients,
/// returning the first `out_len` coefficients of the product.
///
/// Panics (debug) if a negative coefficient sneaks in: the packing argument
/// needs nonnegativity.
pub fn mul_nonneg_trunc(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let la = a.len().min(out_len);
    let lb = b.len().min(out_len);
    if la == 0 || lb == 0 || out_len == 0 {
        return vec![BigInt::zero(); out_len];
    }
    debug_assert!(a[..la].iter().all(|c| c.sign() != Sign::Minus));
    debug_assert!(b[..lb].iter().all(|c| c.sign() != Sign::Minus));

    let bits_a = a[..la].iter().map(|c| c.bits()).max().unwrap_or(0);
    let bits_b = b[..lb].iter().map(|c| c.bits()).max().unwrap_or(0);
    let log_len = 64 - (la.min(lb) as u64).leading_zeros() as u64;
    let slot_bits = bits_a + bits_b + log_len + 1;
    // whole u32 digits per slot keeps packing and unpacking digit-aligned
    let slot_u32 = slot_bits.div_ceil(32).max(1) as usize;

    let packed_a = pack(&a[..la], slot_u32);
    let packed_b = pack(&b[..lb], slot_u32);
    let product = packed_a * packed_b;
    unpack(&product, slot_u32, out_len)
}

fn pack(coeffs: &[BigInt], slot_u32: usize) -> BigUint {
    let mut digits = vec![0u32; coeffs.len() * slot_u32];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let ds = c.magnitude().to_u32_digits();
        debug_assert!(ds.len() <= slot_u32);
        digits[i * slot_u32..i * slot_u32 + ds.len()].copy_from_slice(&ds);
    }
    BigUint::new(digits)
}

fn unpack(n: &BigUint, slot_u32: usize, out_len: usize) -> Vec<BigInt> {
    let digits = n.to_u32_digits();
    let mut out = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let lo = i * slot_u32;
        if lo >= digits.len() {
            out.push(BigInt::zero());
            continue;
        }
        let hi = (lo + slot_u32).min(digits.len());
        out.push(BigInt::from(BigUint::from_slice(&digits[lo..hi])));
    }
    out
}

/// Truncated expansion of q^shift * prod_{n >= 1} prod_{(m, e)} (1 - q^{m n})^e
/// as a length-`len` integer coefficient vector.
///
/// Negative exponents divide.  Every factor (1 - q^j)^{+-1} is applied as a
/// linear-time in-place pass, so the total cost is O(len^2 * sum |e|) integer
/// additions.  Prefix-stable: truncating the result to len' < len equals
/// computing directly at len'.
pub fn eta_product(len: usize, shift: usize, factors: &[(u32, i32)]) -> Vec<BigInt> {
    assert!(len > 0);
    let core_len = len.saturating_sub(shift);
    let mut c = vec![BigInt::zero(); core_len.max(1)];
    c[0] = BigInt::from(1);
    for n in 1..core_len as u64 {
        for &(m, e) in factors {
            let j = (m as u64 * n) as usize;
            if j >= core_len {
                continue;
            }
            if e >= 0 {
                // multiply by (1 - q^j)^e
                for _ in 0..e {
                    for k in (j..core_len).rev() {
                        let (lo, hi) = c.split_at_mut(k);
                        hi[0] -= &lo[k - j];
                    }
                }
            } else {
                // divide by (1 - q^j)^{-e}
                for _ in 0..(-e) {
                    for k in j..core_len {
                        let (lo, hi) = c.split_at_mut(k);
                        hi[0] += &lo[k - j];
                    }
                }
            }
        }
    }
    if shift == 0 {
        c.truncate(len);
        return c;
    }
    let mut out = vec![BigInt::zero(); len];
    for (i, v) in c.into_iter().enumerate() {
        if i + shift < len {
            out[i + shift] = v;
        }
    }
    out
}

/// The genus-zero uniformizer exponent 24/(p-1); defined for p in {2,3,5,7,13}.
pub fn genus_zero_exponent(p: u32) -> Option<u32> {
    match p {
        2 => Some(24),
        3 => Some(12),
        5 => Some(6),
        7 => Some(4),
        13 => Some(2),
        _ => None,
    }
}

/// Integer coefficients of f_p = q * prod ((1 - q^{pn})/(1 - q^n))^{24/(p-1)}
/// to `len` terms.  All coefficients are nonnegative (the quotient expands as
/// prod (1 + q^n + ... + q^{(p-1)n})^{24/(p-1)}).
pub fn fp_int_series(p: u32, len: usize) -> Option<Vec<BigInt>> {
    let e = genus_zero_exponent(p)? as i32;
    let out = eta_product(len, 1, &[(p, e), (1, -e)]);
    debug_assert!(out.iter().all(|c| c.sign() != Sign::Minus));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        // deterministic pseudo-random nonnegative series, mixed magnitudes
        let mut rng = crate::arith::TestRng(0xC0FFEE);
        for trial in 0..50 {
            let la = 1 + (rng.below(40) as usize);
            let lb = 1 + (rng.below(40) as usize);
            let a: Vec<BigInt> = (0..la)
                .map(|_| BigInt::from(rng.below(1 << (1 + trial % 40))))
                .collect();
            let b: Vec<BigInt> = (0..lb)
                .map(|_| BigInt::from(rng.below(1 << (1 + (trial * 7) % 40))))
                .collect();
            let out_len = 1 + (rng.below(60) as usize);
            let fast = mul_nonneg_trunc(&a, &b, out_len);
            let mut slow = vec![BigInt::zero(); out_len];
            for i in 0..la.min(out_len) {
                for j in 0..lb.min(out_len - i) {
                    let t = &a[i] * &b[j];
                    slow[i + j] += t;
                }
            }
            assert_eq!(fast, slow, "trial {trial}");
        }
    }

    #[test]
    fn kronecker_large_coefficients() {
        // coefficients far beyond u64, exercising multi-digit slots
        let big: BigInt = BigInt::from(1) << 200u32;
        let a = vec![big.clone(), &big * 3, &big * 7];
        let b = vec![&big * 2, big.clone()];
        let out = mul_nonneg_trunc(&a, &b, 4);
        assert_eq!(out[0], &big * &big * 2);
        assert_eq!(out[1], &big * &big * 7);
        assert_eq!(out[2], &big * &big * 17);
        assert_eq!(out[3], &big * &big * 7);
    }

    #[test]
    fn eta_product_delta_head() {
        // q prod (1-q^n)^24 = q - 24q^2 + 252q^3 - 1472q^4 + 4830q^5 - 6048q^6 ...
        let d = eta_product(9, 1, &[(1, 24)]);
        assert_eq!(d, ints(&[0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480]));
    }

    #[test]
    fn fp_heads_all_genus_zero_primes() {
        // frozen from a direct expansion of the defining product
        let cases: &[(u32, &[i64])] = &[
            (2, &[0, 1, 24, 300, 2624, 18126, 105504, 538296, 2471424]),
            (3, &[0, 1, 12, 90, 508, 2391, 9828, 36428, 124188]),
            (5, &[0, 1, 6, 27, 98, 315, 912, 2456, 6210]),
            (7, &[0, 1, 4, 14, 40, 105, 252, 574, 1236]),
            (13, &[0, 1, 2, 5, 10, 20, 36, 65, 110]),
        ];
        for (p, head) in cases {
            let f = fp_int_series(*p, head.len()).unwrap();
            assert_eq!(f, ints(head), "f_{p}");
        }
        assert!(fp_int_series(11, 4).is_none());
    }

    #[test]
    fn fp_equals_cyclotomic_product_form() {
        // f_p = q prod (1 + q^n + ... + q^{(p-1)n})^e: same series by the
        // factorization 1 - q^{pn} = (1 - q^n)(1 + q^n + ... + q^{(p-1)n}).
        for &p in &[2u32, 3, 5] {
            let e = genus_zero_exponent(p).unwrap();
            let len = 40usize;
            let mut c = vec![BigInt::zero(); len - 1];
            c[0] = BigInt::from(1);
            for n in 1..(len - 1) as u64 {
                for _ in 0..e {
                    // multiply by (1 + q^n + ... + q^{(p-1)n}) in place
                    let mut next = c.clone();
                    for r in 1..p as u64 {
                        let off = (r * n) as usize;
                        if off >= len - 1 {
                            break;
                        }
                        for k in off..len - 1 {
                            let t = c[k - off].clone();
                            next[k] += t;
                        }
                    }
                    c = next;
                }
            }
            let mut direct = vec![BigInt::zero(); len];
            direct[1..].clone_from_slice(&c[..len - 1]);
            assert_eq!(fp_int_series(p, len).unwrap(), direct, "p = {p}");
        }
    }

    #[test]
    fn eta_product_prefix_stable() {
        for &p in &[2u32, 7, 13] {
            let long = fp_int_series(p, 50).unwrap();
            let short = fp_int_series(p, 17).unwrap();
            assert_eq!(&long[..17], &short[..]);
        }
    }
}
