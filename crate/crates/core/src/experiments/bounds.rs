//! Exact comparisons between count ratios and `exp(-a/b)`.

use num_bigint::BigUint;
use num_traits::{pow, Zero};

use crate::samplers::ln_big;

/// Forty decimals of `e`, truncated: `E_LO / 10^40 < e < (E_LO + 1) / 10^40`.
const E_LO: &str = "27182818284590452353602874713526624977572";
const E_SCALE: usize = 40;

/// Decides `p/q <= exp(-a/b)` exactly, i.e. `p^b·e^a <= q^b`, by bracketing
/// `e` between consecutive 40-digit rationals. `None` only if the bracket
/// is too coarse to decide.
pub fn ratio_le_exp_neg(p: &BigUint, q: &BigUint, a: &BigUint, b: u32) -> Option<bool> {
    if p.is_zero() {
        return Some(true);
    }
    let a_usize: usize = a.try_into().ok()?;
    let lo: BigUint = E_LO.parse().expect("digits");
    let hi = &lo + 1u32;
    let scale = pow(BigUint::from(10u32), E_SCALE * a_usize);
    let lhs = pow(p.clone(), b as usize);
    let rhs = pow(q.clone(), b as usize) * scale;
    if &lhs * pow(hi, a_usize) <= rhs {
        Some(true)
    } else if lhs * pow(lo, a_usize) > rhs {
        Some(false)
    } else {
        None
    }
}

/// `ln(p/q)`.
pub fn ln_ratio(p: &BigUint, q: &BigUint) -> f64 {
    ln_big(p) - ln_big(q)
}

/// `p/q` in lowest terms as `"p/q"`, or `"ln=<value>"` once the numbers
/// get too long to be useful.
pub fn format_ratio(p: &BigUint, q: &BigUint) -> String {
    use num_integer::Integer;
    let g = p.gcd(q);
    let (p, q) = if g.is_zero() { (p.clone(), q.clone()) } else { (p / &g, q / &g) };
    let (ps, qs) = (p.to_string(), q.to_string());
    if ps.len() + qs.len() > 200 {
        format!("ln={}", ln_ratio(&p, &q))
    } else {
        format!("{ps}/{qs}")
    }
}

/// `p/q` as a float, exact to rounding for moderate sizes.
pub fn ratio_to_f64(p: &BigUint, q: &BigUint) -> f64 {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;
    if p.is_zero() {
        return 0.0;
    }
    BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
        .to_f64()
        .filter(|x| x.is_finite() && *x > 0.0)
        .unwrap_or_else(|| ln_ratio(p, q).exp())
}
