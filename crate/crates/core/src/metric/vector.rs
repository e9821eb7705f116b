use std::fmt;

use serde::{Deserialize, Serialize};

use super::pairs::{pair_count, pairs, position_unchecked, PairIndex};
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A point of R^C(n,2), indexed by leaf pairs in lexicographic order.
///
/// Nothing here promises the vector is an ultrametric; use
/// [`UltraVector::three_point_check`] to certify it.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UltraVector {
    n: usize,
    entries: Vec<ExactScalar>,
}

impl UltraVector {
    pub fn new(n: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewLeaves { n, min: 2 });
        }
        let expected = pair_count(n);
        if entries.len() != expected {
            return Err(Error::WrongLength {
                n,
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    /// Infers `n` from the number of entries.
    pub fn from_entries(entries: Vec<ExactScalar>) -> Result<Self> {
        let len = entries.len();
        let n = (1..=len + 1)
            .find(|&n| pair_count(n) >= len)
            .filter(|&n| pair_count(n) == len)
            .ok_or(Error::InvalidArgument(format!(
                "{len} entries is not C(n, 2) for any n"
            )))?;
        Self::new(n, entries)
    }

    pub fn from_integers(n: usize, values: &[i64]) -> Result<Self> {
        Self::new(n, values.iter().map(|&v| ExactScalar::from_integer(v)).collect())
    }

    /// Builds the vector from a function of the pair `(i, j)`, `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Result<Self> {
        Self::new(n, pairs(n).map(|p| f(p.i, p.j)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ExactScalar> {
        self.entries
    }

    /// Entry for the unordered pair `{a, b}`. Panics if the labels are
    /// out of range or equal.
    pub fn get(&self, a: usize, b: usize) -> &ExactScalar {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        assert!(i >= 1 && i < j && j <= self.n, "bad pair ({a}, {b})");
        &self.entries[position_unchecked(self.n, i, j)]
    }

    pub fn at(&self, pair: PairIndex) -> &ExactScalar {
        &self.entries[pair.position]
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Tropical sum: entrywise maximum.
    pub fn trop_add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| if a >= b { a.clone() } else { b.clone() })
            .collect();
        Ok(Self { n: self.n, entries })
    }

    /// Tropical scalar product: adds `lambda` to every entry.
    pub fn trop_scale(&self, lambda: &ExactScalar) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| x + lambda).collect(),
        }
    }

    /// `self ⊕ (lambda ⊙ other)` without materializing the scaled vector.
    pub fn trop_combine(&self, lambda: &ExactScalar, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let shifted = b + lambda;
                if *a >= shifted {
                    a.clone()
                } else {
                    shifted
                }
            })
            .collect();
        Ok(Self { n: self.n, entries })
    }

    /// Entrywise difference `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Vec<ExactScalar>> {
        self.check_same_n(other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    pub fn min_entry(&self) -> &ExactScalar {
        self.entries.iter().min().expect("n >= 2 implies at least one entry")
    }

    pub fn max_entry(&self) -> &ExactScalar {
        self.entries.iter().max().expect("n >= 2 implies at least one entry")
    }

    pub fn normalize_projective(&self) -> ProjectivePoint {
        let shift = -self.min_entry();
        ProjectivePoint(self.trop_scale(&shift))
    }

    /// True iff `self - other` is a constant vector.
    pub fn projective_equal(&self, other: &Self) -> Result<bool> {
        let diff = self.difference(other)?;
        Ok(diff.windows(2).all(|w| w[0] == w[1]))
    }

    /// First triple `i < j < k` whose maximum is attained only once.
    pub fn three_point_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 1..=n {
            for j in i + 1..=n {
                let ij = self.get(i, j);
                for k in j + 1..=n {
                    let ik = self.get(i, k);
                    let jk = self.get(j, k);
                    if !max_attained_twice(ij, ik, jk) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Three-point condition. Vacuously false below three leaves, since
    /// such vectors cannot be certified.
    pub fn three_point_check(&self) -> bool {
        self.n >= 3 && self.three_point_violation().is_none()
    }

    /// First quadruple `i < j < k < l` whose largest pair-sum is attained once.
    pub fn four_point_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.n;
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        let s1 = self.get(i, j) + self.get(k, l);
                        let s2 = self.get(i, k) + self.get(j, l);
                        let s3 = self.get(i, l) + self.get(j, k);
                        if !max_attained_twice(&s1, &s2, &s3) {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn four_point_check(&self) -> bool {
        self.n >= 4 && self.four_point_violation().is_none()
    }

    /// Parses the two-line text format: `n`, then C(n,2) rationals in
    /// lexicographic pair order. Entries may wrap onto further lines.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line))
            .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'));
        let (n_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "empty input".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: n_line,
            column: column_of(header, header.trim()),
            message: format!("expected leaf count, found `{}`", header.trim()),
        })?;
        if n < 2 {
            return Err(Error::TooFewLeaves { n, min: 2 });
        }
        let mut entries = Vec::with_capacity(pair_count(n));
        let mut last = (n_line, header.len() + 1);
        for (line_no, line) in lines {
            for token in line.split_whitespace() {
                let column = column_of(line, token);
                let value = token.parse::<ExactScalar>().map_err(|e| Error::Parse {
                    line: line_no,
                    column,
                    message: e.to_string(),
                })?;
                entries.push(value);
                last = (line_no, column + token.len());
            }
        }
        if entries.len() != pair_count(n) {
            return Err(Error::Parse {
                line: last.0,
                column: last.1,
                message: format!(
                    "expected {} entries for n = {n}, found {}",
                    pair_count(n),
                    entries.len()
                ),
            });
        }
        Self::new(n, entries)
    }

    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        format!("{}\n{}\n", self.n, body.join(" "))
    }
}

fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn max_attained_twice(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar) -> bool {
    let m = a.max(b).max(c);
    [a, b, c].iter().filter(|x| **x == m).count() >= 2
}

impl fmt::Debug for UltraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UltraVector{:?}", self.entries)
    }
}

impl fmt::Display for UltraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A point of R^C(n,2)/R1, stored as the representative whose minimum
/// entry is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ProjectivePoint(UltraVector);

impl ProjectivePoint {
    pub fn rep(&self) -> &UltraVector {
        &self.0
    }

    pub fn into_rep(self) -> UltraVector {
        self.0
    }
}

impl From<&UltraVector> for ProjectivePoint {
    fn from(u: &UltraVector) -> Self {
        u.normalize_projective()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
