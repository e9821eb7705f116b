use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::metric::ExactScalar;

fn choose(n: usize, k: usize) -> BigUint {
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Planar rooted binary trees with `n` leaves: `C(2n-2, n-1) / n`.
pub fn count_planar(n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::TooFewLeaves { n, min: 1 });
    }
    Ok(choose(2 * n - 2, n - 1) / BigUint::from(n))
}

/// Planar trees with a marked internal vertex: `(n-1)/n · C(2n-2, n-1)`.
pub fn count_planar_marked(n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::TooFewLeaves { n, min: 1 });
    }
    Ok(choose(2 * n - 2, n - 1) * BigUint::from(n - 1) / BigUint::from(n))
}

fn check_ab(n: usize, a: usize, b: usize) -> Result<()> {
    if a == 0 || b == 0 || a + b > n {
        return Err(Error::InvalidArgument(format!(
            "need a, b >= 1 and a + b <= n, got a = {a}, b = {b}, n = {n}"
        )));
    }
    Ok(())
}

/// Marked planar trees whose vertex has `a` leaves on the left and `b` on
/// the right: `C(2a-2, a-1) C(2b-2, b-1) C(2c, c) / (ab)` with `c = n-a-b`.
pub fn count_planar_marked_ab(n: usize, a: usize, b: usize) -> Result<BigUint> {
    check_ab(n, a, b)?;
    let c = n - a - b;
    Ok(choose(2 * a - 2, a - 1) * choose(2 * b - 2, b - 1) * choose(2 * c, c) / BigUint::from(a * b))
}

/// `P(a, b; n)`: probability that a uniform marked planar tree has split `(a, b)`.
pub fn prob_p(a: usize, b: usize, n: usize) -> Result<ExactScalar> {
    check_ab(n, a, b)?;
    let num = BigInt::from(count_planar_marked_ab(n, a, b)?);
    let den = BigInt::from(count_planar_marked(n)?);
    Ok(ExactScalar::from_ratio(num, den).expect("n >= 2 here"))
}

/// Analytic upper bound
/// `√n / (2π · a(a - 3/4)^½ · b(b - 3/4)^½ · (c + 1/4)^½)` on `P(a, b; n)`.
pub fn prob_p_bound(a: usize, b: usize, n: usize) -> Result<f64> {
    check_ab(n, a, b)?;
    let c = (n - a - b) as f64;
    let (a, b, n) = (a as f64, b as f64, n as f64);
    Ok(n.sqrt() / (2.0 * PI * a * (a - 0.75).sqrt() * b * (b - 0.75).sqrt() * (c + 0.25).sqrt()))
}
