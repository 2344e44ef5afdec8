//! Monomials with weighted degrees and classical term orders.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Exponent vector. The variable count is fixed by the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    /// One exponent per variable.
    pub exps: Vec<u16>,
}

/// Term orders. All three refine the weighted degree grading, so leading
/// terms of homogeneous inputs are degree extremal, which the module GB
/// layer relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    /// Degree reverse lexicographic (default).
    GrevLex,
    /// Degree lexicographic.
    DegLex,
    /// Pure lexicographic. Still compares weighted degree first here:
    /// inputs are homogeneous throughout the crate, so within any
    /// comparison that matters degrees already agree and the tie break is
    /// the classical lex order.
    Lex,
}

impl Mono {
    /// The unit monomial in `n` variables.
    pub fn one(n: usize) -> Mono {
        Mono { exps: vec![0; n] }
    }

    /// The `i`-th variable.
    pub fn var(n: usize, i: usize) -> Mono {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Mono { exps }
    }

    /// Total weighted degree under the given variable weights.
    pub fn degree(&self, weights: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(e, w)| *e as i64 * w)
            .sum()
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Quotient `other / self` when divisible.
    pub fn quotient_of(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        Some(Mono {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        })
    }

    /// Least common multiple.
    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
        }
    }

    /// True for the unit monomial.
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    /// Compare under `order` with variable `weights`.
    pub fn cmp_order(&self, other: &Mono, weights: &[i64], order: MonoOrder) -> Ordering {
        let da = self.degree(weights);
        let db = other.degree(weights);
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        match order {
            MonoOrder::GrevLex => {
                // Larger = smaller exponent at the last differing position.
                for i in (0..self.exps.len()).rev() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Equal => {}
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            MonoOrder::DegLex | MonoOrder::Lex => {
                for i in 0..self.exps.len() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Mono {
        Mono { exps: e.to_vec() }
    }

    #[test]
    fn grevlex_standard_comparisons() {
        let w = [1, 1, 1];
        // x^2 y > x y^2  (same degree, grevlex)
        assert_eq!(
            m(&[2, 1, 0]).cmp_order(&m(&[1, 2, 0]), &w, MonoOrder::GrevLex),
            Ordering::Greater
        );
        // x z < y^2 under grevlex (z exponent larger => smaller)
        assert_eq!(
            m(&[1, 0, 1]).cmp_order(&m(&[0, 2, 0]), &w, MonoOrder::GrevLex),
            Ordering::Less
        );
        // Degree dominates everything.
        assert_eq!(
            m(&[0, 0, 3]).cmp_order(&m(&[2, 0, 0]), &w, MonoOrder::GrevLex),
            Ordering::Greater
        );
    }

    #[test]
    fn weighted_degree_counts() {
        let w = [2, 3];
        assert_eq!(m(&[1, 2]).degree(&w), 8);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 0, 2]);
        let b = m(&[1, 1, 2]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b).unwrap(), m(&[0, 1, 0]));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[1, 3, 2]));
    }
}
