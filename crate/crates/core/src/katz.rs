//! Echelonized (Miller) bases of level-1 modular forms and Katz-style
//! expansions g = sum_{i >= 0} b_i / E_{p-1}^i for p >= 5.
//!
//! For even weight w >= 0 the space M_w of level-1 forms has dimension
//!
//! ```text
//! d(w) = floor(w/12) + 1   if w != 2 (mod 12),
//!        floor(w/12)       if w  = 2 (mod 12),
//! ```
//!
//! and a unique echelon basis b_0, ..., b_{d-1} with b_j = q^j + O(q^d),
//! classically with integer coefficients.  Multiplication by E_{p-1} embeds
//! M_{(i-1)(p-1)} into M_{i(p-1)}; a complement B_i is spanned by the echelon
//! elements of leading order >= d((i-1)(p-1)).  With that splitting the
//! expansion of a weight-0 function is computed by a triangular projection:
//! read the coefficient window [d_{i-1}, d_i), subtract, multiply by E_{p-1},
//! repeat.  The decay of v_p(b_i) measures overconvergence: membership in the
//! region with parameter sigma is equivalent to v_p(b_i) >= i*sigma for all i.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{is_prime, PadicVal};
use crate::eisenstein::eisenstein_series;
use crate::error::Error;
use crate::qseries::{delta, QSeries};

/// Which complement of E_{p-1} * M_{(i-1)(p-1)} inside M_{i(p-1)} the
/// expansion uses.  Only the echelon-tail splitting is implemented; the tag
/// keeps reports self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    /// Echelon basis elements of leading order >= dim M_{(i-1)(p-1)}.
    EchelonComplement,
}

/// The terms b_0, ..., b_{i_max} of a Katz-style expansion, as q-series of
/// weight i(p-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatzExpansion {
    pub p: u32,
    /// b_i at the working q-precision.
    pub terms: Vec<QSeries>,
    /// The reconstruction sum b_i / E_{p-1}^i agrees with the source through
    /// q^(justified_prec - 1): min(working precision, dim M_{i_max(p-1)}).
    pub justified_prec: usize,
    pub basis_choice: BasisChoice,
}

impl KatzExpansion {
    pub fn i_max(&self) -> usize {
        self.terms.len() - 1
    }
}

/// Dimension of the space of level-1 modular forms of weight w (0 for odd or
/// negative weights).
pub fn dim_level1(weight: i64) -> usize {
    if weight < 0 || weight % 2 != 0 {
        return 0;
    }
    let w = weight as usize;
    if w % 12 == 2 {
        w / 12
    } else {
        w / 12 + 1
    }
}

/// The echelon basis of M_weight at q-precision `prec`: element j is
/// q^j + O(q^d) where d = dim M_weight.  Requires prec >= d so the echelon
/// structure is visible.
pub fn miller_basis(weight: u32, prec: usize) -> Result<Vec<QSeries>, Error> {
    if !weight.is_multiple_of(2) {
        return Err(Error::Parameter(format!("weight {weight} is odd")));
    }
    let d = dim_level1(weight as i64);
    if d == 0 {
        return Ok(Vec::new());
    }
    if prec < d {
        return Err(Error::Precision { needed: d, have: prec });
    }
    let e4 = eisenstein_series(4, prec)?;
    let e6 = eisenstein_series(6, prec)?;
    let dl = delta(prec);
    // candidate_j = Delta^j E_4^a E_6^b with 4a + 6b = weight - 12j, b in {0,1}:
    // leading term q^j, unitriangular by construction
    let mut basis: Vec<QSeries> = Vec::with_capacity(d);
    let mut delta_pow = QSeries::one(prec);
    for j in 0..d {
        let rem = weight as usize - 12 * j;
        let (a, b) = if rem.is_multiple_of(4) { (rem / 4, 0) } else { ((rem - 6) / 4, 1) };
        let mut g = delta_pow.clone();
        if a > 0 {
            g = g.mul(&e4.pow(a as u32));
        }
        if b > 0 {
            g = g.mul(&e6);
        }
        basis.push(g);
        if j + 1 < d {
            delta_pow = delta_pow.mul(&dl);
        }
    }
    // back-substitution: clear columns j+1..d so element j is q^j + O(q^d)
    for j in (0..d).rev() {
        for l in j + 1..d {
            let c = basis[j].coeff(l).clone();
            if !c.is_zero() {
                let corr = basis[l].scale(&c);
                basis[j] = basis[j].sub(&corr);
            }
        }
    }
    Ok(basis)
}

/// The complement basis B_i inside M_{i(p-1)}: echelon elements of leading
/// order >= dim M_{(i-1)(p-1)}.  Defined for i >= 1 and prime p >= 5.
/// Frequently empty for small p: the dimension only grows at indices where
/// dim M_{i(p-1)} exceeds dim M_{(i-1)(p-1)}.
pub fn bi_basis(i: usize, p: u32, prec: usize) -> Result<Vec<QSeries>, Error> {
    if i == 0 {
        return Err(Error::Parameter("B_i is defined for i >= 1".into()));
    }
    check_katz_prime(p)?;
    let w = i as u32 * (p - 1);
    let prev_dim = dim_level1(((i - 1) as i64) * i64::from(p - 1));
    let mb = miller_basis(w, prec)?;
    Ok(mb.into_iter().skip(prev_dim).collect())
}

fn check_katz_prime(p: u32) -> Result<(), Error> {
    if p < 5 || !is_prime(u64::from(p)) {
        return Err(Error::Parameter(format!(
            "Katz expansions need a prime p >= 5 so that E_{{p-1}} exists; got {p}"
        )));
    }
    Ok(())
}

/// Expand g (a weight-0 q-series) as sum b_i / E_{p-1}^i with b_i in B_i,
/// for 0 <= i <= i_max, working at q-precision `prec` (<= prec(g)).
///
/// Requires prec >= dim M_{i_max(p-1)} so the triangular solve through i_max
/// is determined.  The residual after stage i_max has q-order >=
/// dim M_{i_max(p-1)}; the expansion is exact through `justified_prec`
/// coefficients and is reported as such, never silently truncated.
pub fn katz_expand(g: &QSeries, p: u32, i_max: usize, prec: usize) -> Result<KatzExpansion, Error> {
    check_katz_prime(p)?;
    if prec > g.prec() {
        return Err(Error::Precision { needed: prec, have: g.prec() });
    }
    let d_top = dim_level1(i_max as i64 * i64::from(p - 1));
    if prec < d_top {
        return Err(Error::Precision { needed: d_top, have: prec });
    }
    let ep = eisenstein_series(p - 1, prec)?;
    let mut s = g.truncate(prec);
    let mut terms = Vec::with_capacity(i_max + 1);
    let mut d_prev = 0usize;
    for i in 0..=i_max {
        let w = i as i64 * i64::from(p - 1);
        let d = dim_level1(w);
        // the iterated projection keeps s = h_i * E^i with q-order >= d_{i-1}
        debug_assert!(s.coeffs()[..d_prev.min(s.prec())].iter().all(Zero::is_zero));
        let mb = miller_basis(w as u32, prec)?;
        let mut b = QSeries::zero(prec);
        for (j, elem) in mb.iter().enumerate().take(d).skip(d_prev) {
            let c = s.coeff(j).clone();
            if !c.is_zero() {
                b = b.add(&elem.scale(&c));
            }
        }
        terms.push(b.clone());
        s = s.sub(&b).mul(&ep);
        d_prev = d;
    }
    Ok(KatzExpansion {
        p,
        terms,
        justified_prec: prec.min(d_top),
        basis_choice: BasisChoice::EchelonComplement,
    })
}

/// The valuation profile v_p(b_0), v_p(b_1), ...: minimum of v_p over each
/// term's coefficients (+inf for vanishing terms).
pub fn katz_profile(e: &KatzExpansion) -> Vec<PadicVal> {
    e.terms
        .iter()
        .map(|b| b.min_val(e.p, 0).expect("p validated at construction"))
        .collect()
}
