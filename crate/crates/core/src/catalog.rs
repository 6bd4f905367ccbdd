//! Predicted splitting types of `T_X|_C` for a general hypersurface containing the curve.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::splitting::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "splitting")]
pub enum Verdict {
    ExactSplitting(SplittingType),
    Balanced,
    NotBalanced,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub verdict: Verdict,
    /// Machine-readable tag of the statement that produced the verdict.
    pub provenance: String,
}

impl Prediction {
    fn new(verdict: Verdict, provenance: &str) -> Self {
        Prediction {
            verdict,
            provenance: provenance.to_string(),
        }
    }

    fn exact(counts: &[(i64, i64)], provenance: &str) -> Self {
        let mut parts = Vec::new();
        for &(a, k) in counts {
            parts.extend(std::iter::repeat_n(a, k.max(0) as usize));
        }
        Self::new(Verdict::ExactSplitting(SplittingType::new(parts)), provenance)
    }

    pub fn exact_splitting(&self) -> Option<&SplittingType> {
        match &self.verdict {
            Verdict::ExactSplitting(s) => Some(s),
            _ => None,
        }
    }

    /// Whether the verdict says `T_X|_C` is balanced, when it says anything.
    pub fn balanced(&self) -> Option<bool> {
        match &self.verdict {
            Verdict::ExactSplitting(s) => Some(s.is_balanced()),
            Verdict::Balanced => Some(true),
            Verdict::NotBalanced => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::ExactSplitting(s) => write!(f, "ExactSplitting {s}")?,
            Verdict::Balanced => write!(f, "Balanced")?,
            Verdict::NotBalanced => write!(f, "NotBalanced")?,
            Verdict::Unknown => write!(f, "Unknown")?,
        }
        write!(f, " [{}]", self.provenance)
    }
}

fn check_range(d: u32, e: u32, n: u32) -> Result<()> {
    if d < 2 || e < 1 || n < 3 || e > n {
        return Err(Error::Precondition(format!(
            "catalog needs d >= 2, 1 <= e <= n, n >= 3; got (d,e,n) = ({d},{e},{n})"
        )));
    }
    Ok(())
}

/// Slope of the normal bundle, `(e(n+1-d) - 2)/(n-2)`.
fn normal_slope(d: i64, e: i64, n: i64) -> Ratio<i64> {
    Ratio::new(e * (n + 1 - d) - 2, n - 2)
}

/// `O(2) + balanced(n-2, e(n+1-d)-2)`, valid when the normal bundle slope is at most 3.
fn slope_split(d: i64, e: i64, n: i64) -> SplittingType {
    SplittingType::balanced_of((n - 2) as usize, e * (n + 1 - d) - 2)
        .expect("n >= 3")
        .with(&[2])
}

/// The splitting type, or balancedness verdict, that the theorems give for `(d, e, n)`.
pub fn predicted_splitting(d: u32, e: u32, n: u32) -> Result<Prediction> {
    check_range(d, e, n)?;
    let (d, e, n) = (d as i64, e as i64, n as i64);
    let p = match d {
        2 if e % 2 == 0 => Prediction::exact(&[(e, n - 1)], "thm:quadrics:even"),
        2 => Prediction::exact(&[(e - 1, 1), (e, n - 3), (e + 1, 1)], "thm:quadrics:odd"),
        3 => cubic(e, n),
        4 => quartic(e, n),
        _ => higher(d, e, n),
    };
    if let Some(s) = p.exact_splitting() {
        debug_assert_eq!(s.rank() as i64, n - 1);
        debug_assert_eq!(s.degree(), e * (n + 1 - d));
    }
    Ok(p)
}

fn cubic(e: i64, n: i64) -> Prediction {
    match (e, n) {
        (1, 3) => Prediction::exact(&[(-1, 1), (2, 1)], "thm:cubics:line-n-eq-3"),
        (1, _) => Prediction::exact(&[(0, 2), (1, n - 4), (2, 1)], "thm:cubics:line-n-ge-4"),
        (2, 3) => Prediction::exact(&[(0, 1), (2, 1)], "thm:cubics:conic-n-eq-3"),
        (2, _) => Prediction::exact(&[(1, 2), (2, n - 3)], "thm:cubics:conic-n-ge-4"),
        _ if n == e => Prediction::exact(&[(e - 2, 1), (e - 1, e - 2)], "thm:cubics:case-n-eq-e"),
        _ => Prediction::exact(&[(e - 1, e), (e, n - e - 1)], "thm:cubics:case-n-gt-e"),
    }
}

fn quartic(e: i64, n: i64) -> Prediction {
    match (e, n) {
        (1, 3) => Prediction::exact(&[(-2, 1), (2, 1)], "thm:quartics:line-n-eq-3"),
        (1, 4) => Prediction::exact(&[(-1, 1), (0, 1), (2, 1)], "thm:quartics:line-n-eq-4"),
        (1, _) => Prediction::exact(&[(0, 3), (1, n - 5), (2, 1)], "thm:quartics:line-n-ge-5"),
        (2, 3) => Prediction::exact(&[(-2, 1), (2, 1)], "thm:quartics:conic-n-eq-3"),
        (2, 4) => Prediction::exact(&[(0, 2), (2, 1)], "thm:quartics:conic-n-eq-4"),
        (2, 5) => Prediction::exact(&[(0, 1), (1, 2), (2, 1)], "thm:quartics:conic-n-eq-5"),
        (2, _) => Prediction::exact(&[(1, 4), (2, n - 5)], "thm:quartics:conic-n-ge-6"),
        (3, 3) => Prediction::exact(&[(-2, 1), (2, 1)], "thm:quartics:cubic-curve-n-eq-3"),
        (3, 4) => Prediction::exact(&[(0, 1), (1, 1), (2, 1)], "thm:quartics:cubic-curve-n-eq-4"),
        (3, 5) => Prediction::exact(&[(1, 2), (2, 2)], "thm:quartics:cubic-curve-n-eq-5"),
        (3, 6) => Prediction::exact(&[(1, 1), (2, 4)], "thm:quartics:cubic-curve-n-eq-6"),
        (3, _) => Prediction::exact(&[(2, 6), (3, n - 7)], "thm:quartics:cubic-curve-n-ge-7"),
        _ if n == e => Prediction::exact(&[(e - 3, 2), (e - 2, e - 3)], "thm:quartics:case-n-eq-e"),
        _ if n <= 2 * e + 1 => Prediction::exact(
            &[(e - 2, 2 * e - n + 1), (e - 1, 2 * (n - e - 1))],
            "thm:quartics:case-mid",
        ),
        _ => Prediction::exact(&[(e - 1, 2 * e), (e, n - 2 * e - 1)], "thm:quartics:case-n-gt-2e1"),
    }
}

fn higher(d: i64, e: i64, n: i64) -> Prediction {
    if e == n && n >= 2 * d - 2 {
        return Prediction::exact(
            &[(n + 1 - d, d - 2), (n + 2 - d, n - d + 1)],
            "thm:general:case-n-eq-e",
        );
    }
    let mu = normal_slope(d, e, n);
    if mu <= Ratio::from_integer(3) {
        if mu < Ratio::from_integer(1) {
            return Prediction::new(Verdict::NotBalanced, "cor:slope:not-balanced");
        }
        return Prediction::new(Verdict::ExactSplitting(slope_split(d, e, n)), "cor:slope:split");
    }
    match balancedness_rules(d, e, n) {
        Some(p) => p,
        None => Prediction::new(Verdict::Unknown, "none"),
    }
}

/// The balanced / not-balanced statements alone, without the exact case lists.
fn balancedness_rules(d: i64, e: i64, n: i64) -> Option<Prediction> {
    if d == 2 {
        return Some(if e % 2 == 0 {
            Prediction::new(Verdict::Balanced, "thm:quadrics:even")
        } else {
            Prediction::new(Verdict::NotBalanced, "thm:quadrics:odd-not-balanced")
        });
    }
    if e == 1 {
        return Some(Prediction::new(Verdict::NotBalanced, "thm:lines-conics:line"));
    }
    if e == 2 {
        let v = if n >= 2 * d - 2 {
            Verdict::Balanced
        } else {
            Verdict::NotBalanced
        };
        return Some(Prediction::new(v, "thm:lines-conics:conic"));
    }
    // e(n+1-d)/(n-1) <= 1
    if e * (n + 1 - d) < n {
        return Some(Prediction::new(Verdict::NotBalanced, "prop:slope:not-balanced"));
    }
    if e <= d + 1 && n >= d {
        return Some(Prediction::new(Verdict::Balanced, "thm:balanced:e-le-d1"));
    }
    if d >= 4 && e >= 2 * d - 2 {
        return Some(Prediction::new(Verdict::Balanced, "thm:balanced:e-ge-2d2"));
    }
    None
}

/// Balancedness from the coarse statements (slope bounds, balancedness theorems and the
/// normal-bundle slope corollary), independent of the exact case lists.
pub fn coarse_verdict(d: u32, e: u32, n: u32) -> Result<Prediction> {
    check_range(d, e, n)?;
    let (d, e, n) = (d as i64, e as i64, n as i64);
    if d >= 3 {
        let mu = normal_slope(d, e, n);
        if mu <= Ratio::from_integer(3) {
            let v = if slope_split(d, e, n).is_balanced() {
                Verdict::Balanced
            } else {
                Verdict::NotBalanced
            };
            return Ok(Prediction::new(v, "cor:slope"));
        }
    }
    Ok(balancedness_rules(d, e, n).unwrap_or_else(|| Prediction::new(Verdict::Unknown, "none")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(d: u32, e: u32, n: u32) -> Vec<i64> {
        predicted_splitting(d, e, n)
            .unwrap()
            .exact_splitting()
            .expect("exact")
            .parts()
            .to_vec()
    }

    #[test]
    fn examples() {
        assert_eq!(exact(2, 4, 6), vec![4, 4, 4, 4, 4]);
        assert_eq!(exact(3, 3, 3), vec![1, 2]);
        assert_eq!(exact(4, 5, 5), vec![2, 2, 3, 3]);
        let p = predicted_splitting(5, 2, 7).unwrap();
        assert_eq!(p.verdict, Verdict::NotBalanced);
        assert_eq!(p.provenance, "cor:slope:not-balanced");
        let p = predicted_splitting(4, 6, 9).unwrap();
        assert_eq!(p.provenance, "thm:quartics:case-mid");
        assert_eq!(exact(4, 6, 9), vec![4, 4, 4, 4, 5, 5, 5, 5]);
    }

    #[test]
    fn worked_examples() {
        // The slope corollary alone: N = O(-5), so T = O(2) + O(-5) is not balanced.
        assert_eq!(predicted_splitting(5, 3, 3).unwrap().verdict, Verdict::NotBalanced);
        assert_eq!(exact(3, 3, 4), vec![2, 2, 2]);
        assert_eq!(exact(4, 4, 4), vec![1, 1, 2]);
        assert_eq!(exact(4, 6, 6), vec![3, 3, 4, 4, 4]);
        assert_eq!(exact(2, 5, 7), vec![4, 5, 5, 5, 5, 6]);
    }

    #[test]
    fn general_degree() {
        for d in 5..=6u32 {
            for n in 2 * d - 2..=11 {
                let p = predicted_splitting(d, n, n).unwrap();
                assert_eq!(p.provenance, "thm:general:case-n-eq-e");
                let s = p.exact_splitting().unwrap();
                assert!(s.is_balanced());
                assert_eq!(s.count(n as i64 + 2 - d as i64), (n - d + 1) as usize);
            }
        }
        assert_eq!(
            predicted_splitting(5, 7, 7).unwrap().verdict,
            Verdict::Unknown
        );
        assert!(predicted_splitting(5, 4, 3).is_err());
    }

    #[test]
    fn exact_types_have_the_right_rank_and_degree() {
        for d in 2..=7u32 {
            for n in 3..=14u32 {
                for e in 1..=n {
                    let p = predicted_splitting(d, e, n).unwrap();
                    assert!(!p.provenance.is_empty());
                    if let Some(s) = p.exact_splitting() {
                        assert_eq!(s.rank(), n as usize - 1, "{d},{e},{n}");
                        assert_eq!(
                            s.degree(),
                            e as i64 * (n as i64 + 1 - d as i64),
                            "{d},{e},{n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_lists_agree_with_coarse_rules() {
        for d in 2..=7u32 {
            for n in 3..=14u32 {
                for e in 1..=n {
                    let p = predicted_splitting(d, e, n).unwrap();
                    let c = coarse_verdict(d, e, n).unwrap();
                    if let (Some(a), Some(b)) = (p.balanced(), c.balanced()) {
                        assert_eq!(a, b, "(d,e,n) = ({d},{e},{n}): {p} vs {c}");
                    }
                }
            }
        }
    }
}
