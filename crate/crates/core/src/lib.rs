//! Exact q-expansion arithmetic for level-1 Eisenstein data, with p-adic
//! valuation certificates.
//!
//! The crate constructs, over exact rationals:
//!
//! * Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n and their
//!   p-deprived companions E*_k = (E_k - p^{k-1} V(E_k)) / (1 - p^{k-1});
//! * low-weight lifts F of powers of the Hasse invariant;
//! * the genus-zero uniformizers f_p (p in {2, 3, 5, 7, 13}) and expansions
//!   of weight-0 functions in powers of f_p;
//! * Katz-style expansions sum b_i / E_{p-1}^i with b_i in complements chosen
//!   from echelonized bases (p >= 5);
//! * the matrix of the U_p operator in the f_p coordinate.
//!
//! On top of these it certifies linear lower bounds v_p(a_i) >= c_0 + m*i for
//! the expansion coefficients — the numerical content of overconvergence and
//! integrality statements — with every check exact and every report
//! reproducible bit-for-bit.
//!
//! The crate is no_std + alloc; the companion CLI crate carries IO.

#![cfg_attr(not(test), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod eisenstein;
pub mod error;
pub mod fpbasis;
mod intseries;
pub mod katz;
pub mod qseries;
pub mod umatrix;
pub mod verify;

pub use arith::{padic_val, BigRational, PadicVal};
pub use error::Error;
pub use qseries::QSeries;
