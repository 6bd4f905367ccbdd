//! Splitting types `O(a_1) + ... + O(a_r)` of vector bundles on `P^1`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-decreasing multiset of twists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplittingType {
    parts: Vec<i64>,
}

impl From<Vec<i64>> for SplittingType {
    fn from(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable();
        SplittingType { parts }
    }
}

impl From<SplittingType> for Vec<i64> {
    fn from(s: SplittingType) -> Self {
        s.parts
    }
}

/// Why two splitting types cannot be compared by specialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Incomparable {
    Rank(usize, usize),
    Degree(i64, i64),
}

impl fmt::Display for Incomparable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incomparable::Rank(a, b) => write!(f, "ranks differ ({a} vs {b})"),
            Incomparable::Degree(a, b) => write!(f, "degrees differ ({a} vs {b})"),
        }
    }
}

impl SplittingType {
    pub fn new(parts: impl Into<Vec<i64>>) -> Self {
        Self::from(parts.into())
    }

    /// `O(a)^k` for each `(a, k)`.
    pub fn from_counts(counts: &[(i64, usize)]) -> Self {
        let mut parts = Vec::new();
        for &(a, k) in counts {
            parts.extend(std::iter::repeat_n(a, k));
        }
        Self::from(parts)
    }

    /// The balanced type of rank `r` and degree `degree`.
    pub fn balanced_of(r: usize, degree: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Precondition("balanced type of rank 0".into()));
        }
        let (q, rem) = degree.div_mod_floor(&(r as i64));
        let rem = rem as usize;
        Ok(Self::from_counts(&[(q, r - rem), (q + 1, rem)]))
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().sum()
    }

    pub fn min(&self) -> Option<i64> {
        self.parts.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.parts.last().copied()
    }

    pub fn count(&self, a: i64) -> usize {
        self.parts.iter().filter(|&&x| x == a).count()
    }

    pub fn is_balanced(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }

    pub fn is_perfectly_balanced(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi == lo,
            _ => true,
        }
    }

    pub fn slope(&self) -> Result<Ratio<i64>> {
        if self.parts.is_empty() {
            return Err(Error::Precondition("slope of an empty splitting type".into()));
        }
        Ok(Ratio::new(self.degree(), self.rank() as i64))
    }

    /// Whether `self` specializes to `special`: ascending partial sums of `self` dominate.
    pub fn check_specialization(&self, special: &Self) -> std::result::Result<bool, Incomparable> {
        if self.rank() != special.rank() {
            return Err(Incomparable::Rank(self.rank(), special.rank()));
        }
        if self.degree() != special.degree() {
            return Err(Incomparable::Degree(self.degree(), special.degree()));
        }
        let mut a = 0;
        let mut b = 0;
        for (x, y) in self.parts.iter().zip(&special.parts) {
            a += x;
            b += y;
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// [`check_specialization`](Self::check_specialization), with incomparable pairs reported as `false`.
    pub fn specializes_to(&self, special: &Self) -> bool {
        self.check_specialization(special).unwrap_or(false)
    }

    /// Index-wise sums of the two sorted types.
    pub fn glue_bound(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::Precondition(format!(
                "glue_bound needs equal ranks, got {} and {}",
                self.rank(),
                other.rank()
            )));
        }
        Ok(Self::from(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>(),
        ))
    }

    /// `a_1 + 1`.
    pub fn interpolation_count(&self) -> Result<i64> {
        self.min()
            .map(|a| a + 1)
            .ok_or_else(|| Error::Precondition("interpolation count of an empty type".into()))
    }

    /// Appends summands.
    pub fn with(&self, extra: &[i64]) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(extra);
        Self::from(parts)
    }

    /// Removes one copy of each listed summand, `None` if one is missing.
    pub fn without(&self, drop: &[i64]) -> Option<Self> {
        let mut parts = self.parts.clone();
        for a in drop {
            let idx = parts.iter().position(|x| x == a)?;
            parts.remove(idx);
        }
        Some(Self::from(parts))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.parts).expect("integers serialize")
    }
}

/// `floor(e(n+1-d)/(n-1)) + 1`, the point count of a balanced `T_X|_C`.
pub fn expected_max(d: u32, e: u32, n: u32) -> Result<i64> {
    if n < 2 {
        return Err(Error::Precondition(format!("expected_max needs n >= 2, got {n}")));
    }
    let num = e as i64 * (n as i64 + 1 - d as i64);
    Ok(Integer::div_floor(&num, &(n as i64 - 1)) + 1)
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.parts.len() {
            let a = self.parts[i];
            let k = self.parts[i..].iter().take_while(|&&x| x == a).count();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "O({a})")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
            i += k;
        }
        Ok(())
    }
}

impl FromStr for SplittingType {
    type Err = Error;

    /// Accepts a JSON array `[a1,...]` or the text form `O(a)^k + O(b) + ...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let parts: Vec<i64> = serde_json::from_str(s)
                .map_err(|e| Error::parse(e.column().saturating_sub(1), e.to_string()))?;
            return Ok(Self::from(parts));
        }
        if s == "0" {
            return Ok(Self::new(vec![]));
        }
        let mut parts = Vec::new();
        let mut offset = 0;
        for chunk in s.split('+') {
            let term = chunk.trim();
            let bad = || Error::parse(offset, format!("expected `O(a)` or `O(a)^k`, got `{term}`"));
            let rest = term.strip_prefix("O(").ok_or_else(bad)?;
            let (a, tail) = rest.split_once(')').ok_or_else(bad)?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let k: usize = match tail.trim() {
                "" => 1,
                t => t
                    .strip_prefix('^')
                    .and_then(|k| k.trim().parse().ok())
                    .ok_or_else(bad)?,
            };
            parts.extend(std::iter::repeat_n(a, k));
            offset += chunk.len() + 1;
        }
        Ok(Self::from(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(p: &[i64]) -> SplittingType {
        SplittingType::new(p.to_vec())
    }

    #[test]
    fn balanced_of_examples() {
        assert_eq!(SplittingType::balanced_of(3, 6).unwrap(), st(&[2, 2, 2]));
        assert_eq!(SplittingType::balanced_of(3, 7).unwrap(), st(&[2, 2, 3]));
        assert_eq!(SplittingType::balanced_of(2, -7).unwrap(), st(&[-4, -3]));
        assert!(SplittingType::balanced_of(0, 1).is_err());
    }

    #[test]
    fn predicates_and_slope() {
        let s = st(&[2, 2, 3]);
        assert!(s.is_balanced() && !s.is_perfectly_balanced());
        assert_eq!(s.slope().unwrap(), Ratio::new(7, 3));
        let odd = st(&[4, 5, 5, 5, 6]);
        assert!(!odd.is_balanced());
        let quintic = st(&[2, -5]);
        assert!(!quintic.is_balanced());
        assert_eq!(quintic.slope().unwrap(), Ratio::new(-3, 2));
        assert!(st(&[]).slope().is_err());
    }

    #[test]
    fn specialization_examples() {
        assert!(st(&[2, 2, 2]).specializes_to(&st(&[1, 2, 3])));
        assert!(!st(&[1, 2, 3]).specializes_to(&st(&[2, 2, 2])));
        assert_eq!(
            st(&[1, 2]).check_specialization(&st(&[1, 2, 0])),
            Err(Incomparable::Rank(2, 3))
        );
        assert_eq!(
            st(&[1, 2]).check_specialization(&st(&[1, 3])),
            Err(Incomparable::Degree(3, 4))
        );
    }

    #[test]
    fn gluing() {
        assert_eq!(st(&[1, 2]).glue_bound(&st(&[2, 2])).unwrap(), st(&[3, 4]));
        assert_eq!(
            st(&[0, 1, 1, 2]).glue_bound(&st(&[1, 1, 1, 1])).unwrap(),
            st(&[1, 2, 2, 3])
        );
        assert!(st(&[1]).glue_bound(&st(&[1, 2])).is_err());
    }

    #[test]
    fn interpolation() {
        assert_eq!(st(&[4, 4, 4]).interpolation_count().unwrap(), 5);
        assert_eq!(expected_max(2, 4, 4).unwrap(), 5);
        assert_eq!(expected_max(2, 5, 7).unwrap(), 6);
        // Non-Fano: e(n+1-d) < 0 rounds toward minus infinity.
        assert_eq!(expected_max(5, 3, 3).unwrap(), -1);
        // Rational normal curve in P^n: T_{P^n}|_C = O(n+1)^n.
        let n = 6;
        assert_eq!(st(&vec![n + 1; n as usize]).interpolation_count().unwrap(), n + 2);
    }

    #[test]
    fn text_forms() {
        let s = st(&[4, 5, 5, 5, 5, 6]);
        assert_eq!(s.to_string(), "O(4) + O(5)^4 + O(6)");
        assert_eq!(s.to_string().parse::<SplittingType>().unwrap(), s);
        assert_eq!("[2,-5]".parse::<SplittingType>().unwrap(), st(&[-5, 2]));
        assert_eq!(st(&[-5, 2]).to_json(), "[-5,2]");
        assert!("[1,2".parse::<SplittingType>().is_err());
        assert!("O(1) + P(2)".parse::<SplittingType>().is_err());
    }
}
