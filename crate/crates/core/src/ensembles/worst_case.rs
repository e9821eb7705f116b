use crate::error::{Error, Result};
use crate::metric::{ExactScalar, UltraVector};

/// Two caterpillars with `u_ij = n(n - min(i, j))` and `v_ij = max(i, j) - 1`,
/// whose segment has a turning point for every leaf pair.
pub fn worst_case_pair(n: usize) -> Result<(UltraVector, UltraVector)> {
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    let int = |x: usize| ExactScalar::from_integer(x as i64);
    let u = UltraVector::from_fn(n, |i, j| int(n * (n - i.min(j))))?;
    let v = UltraVector::from_fn(n, |i, j| int(i.max(j) - 1))?;
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{is_generic_pair, EquidistantTree};

    #[test]
    fn three_leaves() {
        let (u, v) = worst_case_pair(3).unwrap();
        assert_eq!(u, UltraVector::from_integers(3, &[6, 6, 3]).unwrap());
        assert_eq!(v, UltraVector::from_integers(3, &[1, 2, 2]).unwrap());
    }

    #[test]
    fn ultrametric_generic_caterpillars() {
        for n in 3..=12 {
            let (u, v) = worst_case_pair(n).unwrap();
            assert!(u.three_point_check() && v.three_point_check());
            let t1 = EquidistantTree::from_ultrametric(&u).unwrap();
            let t2 = EquidistantTree::from_ultrametric(&v).unwrap();
            assert!(is_generic_pair(&t1, &t2));
            for t in [&t1, &t2] {
                assert!(t.internal_vertices().all(|x| t.children(x).any(|c| t.is_leaf(c))));
            }
        }
    }
}
