//! Shared fixtures for the integration suites: the two worked examples.

use std::sync::Arc;

use equires::equivariant::{check_equivariance, EquivariantSystem};
use equires::polyring::{parse, Polynomial, RingContext};

/// Ring context of the 5-polynomial quadratic system: blocks `{x1,x2,x3}`
/// and `{x4,x5}`, parameters `a, b, c, p, q`.
pub fn quintic_ctx() -> Arc<RingContext> {
    RingContext::with_split(
        vec!["x1", "x2", "x3", "x4", "x5"],
        vec!["a", "b", "c", "p", "q"],
        3,
    )
    .unwrap()
}

pub const QUINTIC_SYSTEM: [&str; 5] = [
    "a*x1^2+b*x1^2+b*x1*x2+b*x1*x3+c*x1^2+c*x2^2+c*x3^2+x4*x5",
    "a*x2^2+b*x1*x2+b*x2^2+b*x2*x3+c*x1^2+c*x2^2+c*x3^2+x4*x5",
    "a*x3^2+b*x1*x3+b*x2*x3+b*x3^2+c*x1^2+c*x2^2+c*x3^2+x4*x5",
    "p*x4^2+q*x5^2",
    "p*x5^2+q*x4^2",
];

pub fn quintic_system() -> EquivariantSystem {
    let ctx = quintic_ctx();
    let polys: Vec<Polynomial> = QUINTIC_SYSTEM
        .iter()
        .map(|s| parse(s, &ctx).unwrap())
        .collect();
    check_equivariance(polys, &ctx).unwrap()
}

/// Closed form of the quintic system's resultant (up to one global sign).
pub const QUINTIC_CLOSED_FORM: &str =
    "a^8*(a^3+3*a^2*b+3*a^2*c+2*a*b^2+8*a*b*c+6*b^2*c)^12*(p-q)^16*(p+q)^16*(3*b+3*c+a)^4";

/// Ring context of the invariant quartic: blocks `{x1,x2}` and `{x3,x4}`,
/// parameters `a, b, c`.
pub fn quartic_ctx() -> Arc<RingContext> {
    RingContext::with_split(vec!["x1", "x2", "x3", "x4"], vec!["a", "b", "c"], 2).unwrap()
}

pub const QUARTIC_POLY: &str = "a*x1^4+b*x1^2*x2^2+a*x2^4+c*x3^4+x3*x4^3+x3^3*x4+c*x4^4";

pub fn quartic_poly() -> Polynomial {
    parse(QUARTIC_POLY, &quartic_ctx()).unwrap()
}

/// Closed form of the quartic's discriminant (up to one global sign); the
/// constant is 2^86.
pub const QUARTIC_DISCRIMINANT: &str =
    "77371252455336267181195264*a^18*(c-1)^9*(c+1)^9*(8*c^2+1)^18*(2*a-b)^18*(2*a+b)^18";
