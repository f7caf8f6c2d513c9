//! Exact coefficient arithmetic: rationals, multivariate polynomials,
//! canonical rational functions and the shared text grammar.

mod context;
pub mod gcd;
mod poly;
mod rat;
mod ratfunc;
mod text;

pub use context::Ctx;
pub use gcd::{gcd, lcm};
pub use poly::{MPoly, Monomial};
pub use rat::{binomial, format_rat, int, parse_rat, rat, Rat};
pub use ratfunc::RatFunc;
pub use text::{identifiers, parse_poly, parse_ratfunc};

use crate::error::Result;

/// Builds the canonical reduced fraction `num / den`.
pub fn ratfunc_make(num: MPoly, den: MPoly) -> Result<RatFunc> {
    RatFunc::new(num, den)
}

/// Exact quotient `f / g`.
pub fn poly_divide_exact(f: &MPoly, g: &MPoly) -> Result<MPoly> {
    f.divide_exact(g)
}
