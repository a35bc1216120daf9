//! Finite-horizon stand-in for limits along an exhaustion.
//!
//! A sequence computed for `k` in a finite range is summarized by the minimum
//! and maximum over its last third, together with a convergence flag that is
//! set when that spread is below a tolerance and the tail has at least two
//! entries.

use serde::{Deserialize, Serialize};

use crate::rational::{serde_ratio, Rational};

pub fn default_tolerance() -> Rational {
    Rational::new(1, 100)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_ratio")]
    pub liminf: Rational,
    #[serde(with = "serde_ratio")]
    pub limsup: Rational,
    #[serde(with = "serde_ratio")]
    pub tolerance: Rational,
    pub converged: bool,
    /// Number of values in the tail.
    pub tail_len: usize,
}

impl Interval {
    /// Summarizes `values` over their last third (at least one entry).
    pub fn of_tail(values: &[Rational], tolerance: Rational) -> Option<Interval> {
        if values.is_empty() {
            return None;
        }
        let start = values.len() - values.len().div_ceil(3);
        let tail = &values[start..];
        let liminf = *tail.iter().min().unwrap();
        let limsup = *tail.iter().max().unwrap();
        Some(Interval {
            liminf,
            limsup,
            tolerance,
            converged: tail.len() >= 2 && limsup - liminf < tolerance,
            tail_len: tail.len(),
        })
    }

    /// Distance between two intervals; zero when they overlap.
    pub fn gap(&self, other: &Interval) -> Rational {
        if self.limsup < other.liminf {
            other.liminf - self.limsup
        } else if other.limsup < self.liminf {
            self.liminf - other.limsup
        } else {
            Rational::from_integer(0)
        }
    }

    pub fn verdict(&self) -> String {
        if self.tail_len < 2 {
            format!(
                "too few levels to judge, last value {}",
                crate::rational::format_ratio(&self.limsup)
            )
        } else if self.converged {
            format!("converged near {}", crate::rational::format_ratio(&self.limsup))
        } else {
            format!(
                "exhaustion-dependent, interval [{}, {}]",
                crate::rational::format_ratio(&self.liminf),
                crate::rational::format_ratio(&self.limsup)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_third() {
        let v: Vec<Rational> = (1..=9).map(|k| Rational::new(1, k)).collect();
        let iv = Interval::of_tail(&v, default_tolerance()).unwrap();
        assert_eq!(iv.liminf, Rational::new(1, 9));
        assert_eq!(iv.limsup, Rational::new(1, 7));
        assert!(!iv.converged);
        let flat = vec![Rational::from_integer(1); 4];
        assert!(Interval::of_tail(&flat, default_tolerance()).unwrap().converged);
        assert!(Interval::of_tail(&[], default_tolerance()).is_none());
    }
}
