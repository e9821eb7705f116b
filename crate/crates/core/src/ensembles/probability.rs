use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::Zero;

use super::counting::count_planar_marked;
use crate::error::{Error, Result};
use crate::metric::ExactScalar;

/// Largest `n` for the fully exact `S_n`, which has `O(n^4)` terms.
pub const EXACT_SN_MAX_LEAVES: usize = 40;
/// Largest `n` for which the majorant of `S_n` is summed in exact rationals.
pub const EXACT_SUM_BOUND_MAX_LEAVES: usize = 512;

fn check_q(a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> Result<()> {
    if a1 + b1 > n || a2 + b2 > n || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "subset sizes ({a1}, {b1}), ({a2}, {b2}) do not fit in {n} leaves"
        )));
    }
    Ok(())
}

/// `min(a1 a2, b1 b2) / n`, the tighter majorant of `Q`.
pub fn qtilde(a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> Result<ExactScalar> {
    check_q(a1, b1, a2, b2, n)?;
    let m = (a1 * a2).min(b1 * b2);
    Ok(ExactScalar::from_ratio(m.into(), n.into()).unwrap())
}

/// `√(a1 a2 b1 b2) / n`, which factors as `qtilde0(a1, b1) · qtilde0(a2, b2)`.
pub fn qtilde_geometric(a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> Result<f64> {
    check_q(a1, b1, a2, b2, n)?;
    Ok(((a1 * a2 * b1 * b2) as f64).sqrt() / n as f64)
}

/// `√(ab / n)`.
pub fn qtilde0(a: usize, b: usize, n: usize) -> f64 {
    (a as f64 * b as f64 / n as f64).sqrt()
}

/// Inclusion-exclusion counts for `Q`, over the `C(n, a2) C(n-a2, b2)`
/// placements of `(A2, B2)` against fixed `A1 = {1..a1}`, `B1` the next `b1`.
/// Returns `(hits, placements)`.
fn q_counts<T>(a1: usize, b1: usize, a2: usize, b2: usize, n: usize, choose: &impl Fn(usize, usize) -> T) -> (T, T)
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let c = |m: usize, k: usize| if k > m { T::zero() } else { choose(m, k) };
    let r = n - a1 - b1;
    let total = c(n, a2) * c(n - a2, b2);
    let miss_a = c(n - a1, a2) * c(n - a2, b2);
    let miss_b = c(n - b1, b2) * c(n - b2, a2);
    let mut miss_both = T::zero();
    // x = |A2 ∩ B1|; the rest of A2 comes from the r free leaves
    for x in 0..=a2.min(b1) {
        if a2 - x > r {
            continue;
        }
        miss_both = miss_both + c(b1, x) * c(r, a2 - x) * c(a1 + r - (a2 - x), b2);
    }
    (total.clone() + miss_both - miss_a - miss_b, total)
}

/// Probability that `A1 ∩ A2` and `B1 ∩ B2` are both non-empty, for a fixed
/// disjoint pair `(A1, B1)` and `(A2, B2)` uniform among disjoint pairs of
/// sizes `(a2, b2)` in `1..=n`.
pub fn exact_q(a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> Result<ExactScalar> {
    check_q(a1, b1, a2, b2, n)?;
    let choose = |m: usize, k: usize| binomial(BigUint::from(m), BigUint::from(k));
    let (hits, total) = q_counts(a1, b1, a2, b2, n, &choose);
    Ok(ExactScalar::from_ratio(hits.into(), total.into()).unwrap())
}

/// `(a, b)` splits with their marked planar counts.
fn splits(n: usize) -> Vec<(usize, usize, BigUint)> {
    let central: Vec<BigUint> = (0..n).map(|k| binomial(BigUint::from(2 * k), BigUint::from(k))).collect();
    let catalan: Vec<BigUint> = central.iter().enumerate().map(|(k, c)| c / BigUint::from(k + 1)).collect();
    let mut out = Vec::with_capacity(n * n / 2);
    for a in 1..n {
        for b in 1..=n - a {
            let count = &catalan[a - 1] * &catalan[b - 1] * &central[n - a - b];
            out.push((a, b, count));
        }
    }
    out
}

fn check_sum_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewLeaves { n, min: 2 });
    }
    Ok(())
}

/// Sort key helper: `a/b` ascending.
fn by_ratio(x: (usize, usize), y: (usize, usize)) -> Ordering {
    (x.0 * y.1).cmp(&(y.0 * x.1))
}

/// `S~_n = Σ min(a1 a2, b1 b2)/n · P(a1, b1; n) P(a2, b2; n)` in exact
/// arithmetic, an upper bound on `S_n`.
///
/// The double sum is evaluated in `O(m log m)` over the `m` splits: with
/// splits sorted by `a/b`, the terms where `a1 a2 <= b1 b2` form a prefix.
pub fn sum_sn_bound(n: usize) -> Result<ExactScalar> {
    check_sum_n(n)?;
    if n > EXACT_SUM_BOUND_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n,
            max: EXACT_SUM_BOUND_MAX_LEAVES,
        });
    }
    let mut s = splits(n);
    s.sort_by(|x, y| by_ratio((x.0, x.1), (y.0, y.1)));
    let m = s.len();
    let mut prefix_a = vec![BigUint::zero(); m + 1];
    for (k, (a, _, c)) in s.iter().enumerate() {
        prefix_a[k + 1] = &prefix_a[k] + c * BigUint::from(*a);
    }
    let mut suffix_b = vec![BigUint::zero(); m + 1];
    for (k, (_, b, c)) in s.iter().enumerate().rev() {
        suffix_b[k] = &suffix_b[k + 1] + c * BigUint::from(*b);
    }
    let mut total = BigUint::zero();
    for (a, b, c) in &s {
        let k = s.partition_point(|(a2, b2, _)| a * a2 <= b * b2);
        total += c * (&prefix_a[k] * BigUint::from(*a) + &suffix_b[k] * BigUint::from(*b));
    }
    let d = count_planar_marked(n)?;
    let den = &d * &d * BigUint::from(n);
    Ok(ExactScalar::from_ratio(BigInt::from(total), BigInt::from(den)).unwrap())
}

/// `ln P(a, b; n)` for every split, from a log-factorial table.
fn log_splits(n: usize) -> Vec<(usize, usize, f64)> {
    let mut lf = vec![0.0f64; 2 * n + 1];
    for k in 1..lf.len() {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    let central = |k: usize| lf[2 * k] - 2.0 * lf[k];
    let catalan = |k: usize| central(k) - ((k + 1) as f64).ln();
    let log_d = central(n - 1) + ((n - 1) as f64).ln() - (n as f64).ln();
    let mut out = Vec::with_capacity(n * n / 2);
    for a in 1..n {
        for b in 1..=n - a {
            let lc = catalan(a - 1) + catalan(b - 1) + central(n - a - b);
            out.push((a, b, (lc - log_d).exp()));
        }
    }
    out
}

/// Floating-point evaluation of [`sum_sn_bound`] for any `n >= 2`.
pub fn sum_sn_bound_f64(n: usize) -> Result<f64> {
    check_sum_n(n)?;
    let mut s = log_splits(n);
    s.sort_by(|x, y| by_ratio((x.0, x.1), (y.0, y.1)));
    let m = s.len();
    let mut prefix_a = vec![0.0; m + 1];
    for (k, (a, _, p)) in s.iter().enumerate() {
        prefix_a[k + 1] = prefix_a[k] + *a as f64 * p;
    }
    let mut suffix_b = vec![0.0; m + 1];
    for (k, (_, b, p)) in s.iter().enumerate().rev() {
        suffix_b[k] = suffix_b[k + 1] + *b as f64 * p;
    }
    let total: f64 = s
        .iter()
        .map(|(a, b, p)| {
            let k = s.partition_point(|(a2, b2, _)| a * a2 <= b * b2);
            p * (*a as f64 * prefix_a[k] + *b as f64 * suffix_b[k])
        })
        .sum();
    Ok(total / n as f64)
}

/// The same sum with the geometric-mean majorant, which factors as
/// `(Σ qtilde0(a, b; n) P(a, b; n))^2`.
pub fn sum_sn_geometric_f64(n: usize) -> Result<f64> {
    check_sum_n(n)?;
    let root: f64 = log_splits(n).iter().map(|(a, b, p)| qtilde0(*a, *b, n) * p).sum();
    Ok(root * root)
}

/// `S_n` itself, with the exact `Q`. Cost grows as `n^4`.
pub fn exact_sn(n: usize) -> Result<ExactScalar> {
    check_sum_n(n)?;
    if n > EXACT_SN_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n,
            max: EXACT_SN_MAX_LEAVES,
        });
    }
    // every count below is at most 3^40 and fits in u128
    let mut table = vec![vec![0u128; n + 1]; n + 1];
    for m in 0..=n {
        table[m][0] = 1;
        for k in 1..=m {
            table[m][k] = table[m - 1][k - 1] + if k < m { table[m - 1][k] } else { 0 };
        }
    }
    let choose = |m: usize, k: usize| table[m][k];
    let s = splits(n);
    let mut total = ExactScalar::zero();
    for (a2, b2, c2) in &s {
        let mut inner = BigUint::zero();
        let mut placements = 0u128;
        for (a1, b1, c1) in &s {
            let (hits, t) = q_counts(*a1, *b1, *a2, *b2, n, &choose);
            placements = t;
            inner += c1 * BigUint::from(hits);
        }
        let term = ExactScalar::from_ratio(
            BigInt::from(inner * c2),
            BigInt::from(BigUint::from(placements)),
        )
        .unwrap();
        total = total + term;
    }
    let d = BigInt::from(count_planar_marked(n)?);
    Ok(total.div(&ExactScalar::from_ratio(&d * &d, 1.into()).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_examples() {
        assert_eq!(qtilde(1, 1, 1, 1, 4).unwrap(), ExactScalar::new(1, 4).unwrap());
        assert_eq!(qtilde(2, 3, 1, 4, 9).unwrap(), qtilde(1, 4, 2, 3, 9).unwrap());
        assert_eq!(exact_q(1, 1, 1, 1, 2).unwrap(), ExactScalar::new(1, 2).unwrap());
        assert!(exact_q(2, 2, 1, 1, 3).is_err());
    }

    #[test]
    fn forced_a_intersection() {
        // a1 + b1 = n = a2 + b2 and a1 + a2 > n
        let n = 7;
        let (a1, b1, a2, b2) = (4, 3, 5, 2);
        let q = exact_q(a1, b1, a2, b2, n).unwrap();
        // B2 misses B1 iff B2 lies inside A1
        let miss = ExactScalar::from_ratio(
            binomial(BigInt::from(a1), BigInt::from(b2)),
            binomial(BigInt::from(n), BigInt::from(b2)),
        )
        .unwrap();
        assert_eq!(q, ExactScalar::from_integer(1) - miss);
    }

    #[test]
    fn sum_routes_agree() {
        for n in [2, 3, 5, 8, 17, 40] {
            let exact = sum_sn_bound(n).unwrap().to_f64();
            let float = sum_sn_bound_f64(n).unwrap();
            assert!((exact - float).abs() <= 1e-12 * exact.max(1e-300), "n = {n}");
            assert!(exact <= sum_sn_geometric_f64(n).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sum_bound_matches_naive_double_sum() {
        let n = 7;
        let mut naive = ExactScalar::zero();
        for a1 in 1..n {
            for b1 in 1..=n - a1 {
                for a2 in 1..n {
                    for b2 in 1..=n - a2 {
                        let p = super::super::prob_p(a1, b1, n).unwrap().mul(&super::super::prob_p(a2, b2, n).unwrap());
                        naive = naive + qtilde(a1, b1, a2, b2, n).unwrap().mul(&p);
                    }
                }
            }
        }
        assert_eq!(sum_sn_bound(n).unwrap(), naive);
    }

    #[test]
    fn exact_sn_small() {
        // n = 2: one split (1, 1), Q(1,1,1,1;2) = 1/2
        assert_eq!(exact_sn(2).unwrap(), ExactScalar::new(1, 2).unwrap());
        for n in 3..=9 {
            assert!(exact_sn(n).unwrap() <= sum_sn_bound(n).unwrap());
        }
    }
}
