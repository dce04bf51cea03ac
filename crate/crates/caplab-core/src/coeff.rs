//! Exact coefficient tables for (1 + x + ... + x^(q-1))^n.
//!
//! The table holds every coefficient of the expanded power as an exact big
//! integer, together with the running prefix sums that count monomials of
//! bounded degree. Everything downstream (the LP objective, the inequality
//! ledger, the asymptotic comparisons) reads from here, so no floating or
//! modular shortcuts are taken.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Hard cap on the row index; coefficient rows grow like q^n / sqrt(n) and
/// nothing downstream needs more.
pub const DEFAULT_MAX_N: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("alphabet size q must be at least 2, got {0}")]
    InvalidAlphabet(u64),
    #[error("n = {n} exceeds the capacity limit {limit}")]
    Capacity { n: u64, limit: u64 },
    #[error("degree {d} out of range, table holds 0..={max}")]
    IndexOutOfRange { d: u64, max: u64 },
}

/// Coefficients of (1 + x + ... + x^(q-1))^n plus prefix sums.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    n: u64,
    q: u64,
    coeffs: Vec<BigUint>,
    prefix: Vec<BigUint>,
}

impl CoefficientTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Top degree (q-1)n.
    pub fn max_degree(&self) -> u64 {
        (self.q - 1) * self.n
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u64) -> &BigUint {
        &self.coeffs[i as usize]
    }

    pub fn prefix(&self) -> &[BigUint] {
        &self.prefix
    }

    /// m_d: number of monomials of total degree at most d with per-variable
    /// degree below q.
    pub fn monomial_count(&self, d: u64) -> Result<&BigUint, CoeffError> {
        if d > self.max_degree() {
            return Err(CoeffError::IndexOutOfRange {
                d,
                max: self.max_degree(),
            });
        }
        Ok(&self.prefix[d as usize])
    }

    /// Sum of coefficients over an inclusive index range, exact.
    pub fn range_sum(&self, lo: u64, hi: u64) -> BigUint {
        if hi < lo || lo > self.max_degree() {
            return BigUint::zero();
        }
        let hi = hi.min(self.max_degree());
        let upper = self.prefix[hi as usize].clone();
        if lo == 0 {
            upper
        } else {
            upper - &self.prefix[(lo - 1) as usize]
        }
    }
}

/// Expand (1 + x + ... + x^(q-1))^n by the row convolution recurrence.
pub fn expand(n: u64, q: u64) -> Result<CoefficientTable, CoeffError> {
    expand_with_limit(n, q, DEFAULT_MAX_N)
}

/// Same as [`expand`] with an explicit capacity guard.
pub fn expand_with_limit(n: u64, q: u64, limit: u64) -> Result<CoefficientTable, CoeffError> {
    if q < 2 {
        return Err(CoeffError::InvalidAlphabet(q));
    }
    if n > limit {
        return Err(CoeffError::Capacity { n, limit });
    }
    let width = q as usize - 1;
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); row.len() + width];
        for (i, c) in row.iter().enumerate() {
            for j in 0..=width {
                next[i + j] += c;
            }
        }
        row = next;
    }
    let mut prefix = Vec::with_capacity(row.len());
    let mut acc = BigUint::zero();
    for c in &row {
        acc += c;
        prefix.push(acc.clone());
    }
    Ok(CoefficientTable {
        n,
        q,
        coeffs: row,
        prefix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Independent oracle: multiply out the base polynomial n times, no
    /// shared code with the row recurrence above.
    fn naive_power(n: u64, q: u64) -> Vec<BigUint> {
        let base: Vec<BigUint> = (0..q).map(|_| BigUint::one()).collect();
        let mut acc = vec![BigUint::one()];
        for _ in 0..n {
            let mut out = vec![BigUint::zero(); acc.len() + base.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in base.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            acc = out;
        }
        acc
    }

    #[test]
    fn base_polynomial_row() {
        let t = expand(1, 3).unwrap();
        assert_eq!(t.coeffs(), &[u(1), u(1), u(1)]);
    }

    #[test]
    fn small_rows_match_convolution_oracle() {
        let t2 = expand(2, 3).unwrap();
        assert_eq!(t2.coeffs(), &[u(1), u(2), u(3), u(2), u(1)]);
        let t3 = expand(3, 3).unwrap();
        assert_eq!(t3.coeffs(), &[u(1), u(3), u(6), u(7), u(6), u(3), u(1)]);
        for n in 0..=12u64 {
            for q in 2..=5u64 {
                assert_eq!(expand(n, q).unwrap().coeffs(), naive_power(n, q));
            }
        }
    }

    #[test]
    fn empty_product_is_one() {
        let t = expand(0, 5).unwrap();
        assert_eq!(t.coeffs(), &[u(1)]);
        assert_eq!(t.monomial_count(0).unwrap(), &u(1));
    }

    #[test]
    fn monomial_count_examples() {
        let t2 = expand(2, 3).unwrap();
        assert_eq!(t2.monomial_count(2).unwrap(), &u(6));
        assert_eq!(t2.monomial_count(4).unwrap(), &u(9));
        let t3 = expand(3, 3).unwrap();
        assert_eq!(t3.monomial_count(2).unwrap(), &u(10));
    }

    #[test]
    fn monomial_count_out_of_range() {
        let t = expand(2, 3).unwrap();
        assert_eq!(
            t.monomial_count(5),
            Err(CoeffError::IndexOutOfRange { d: 5, max: 4 })
        );
    }

    #[test]
    fn invalid_alphabet_rejected() {
        assert_eq!(expand(3, 1), Err(CoeffError::InvalidAlphabet(1)));
        assert_eq!(expand(3, 0), Err(CoeffError::InvalidAlphabet(0)));
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            expand_with_limit(11, 3, 10),
            Err(CoeffError::Capacity { n: 11, limit: 10 })
        ));
    }

    #[test]
    fn symmetry_and_total_small() {
        for q in [2u64, 3, 5] {
            for n in 0..=40u64 {
                let t = expand(n, q).unwrap();
                let top = t.max_degree() as usize;
                for i in 0..=top {
                    assert_eq!(t.coeffs()[i], t.coeffs()[top - i]);
                }
                let total = t.prefix().last().unwrap();
                assert_eq!(total, &BigUint::from(q).pow(n as u32));
            }
        }
    }

    #[test]
    fn prefix_differences_recover_coefficients() {
        let t = expand(17, 3).unwrap();
        for d in 1..=t.max_degree() {
            let diff = &t.prefix()[d as usize] - &t.prefix()[(d - 1) as usize];
            assert_eq!(&diff, t.coeff(d));
        }
        assert_eq!(&t.prefix()[0], t.coeff(0));
    }

    #[test]
    fn range_sum_agrees_with_direct_sum() {
        let t = expand(9, 3).unwrap();
        for lo in 0..=t.max_degree() {
            for hi in lo..=t.max_degree() {
                let direct: BigUint = (lo..=hi).map(|i| t.coeff(i).clone()).sum();
                assert_eq!(t.range_sum(lo, hi), direct);
            }
        }
        assert_eq!(t.range_sum(5, 3), BigUint::zero());
    }

    #[test]
    fn convolution_consistency_additive_rows() {
        // expand(n + m) equals the convolution of expand(n) and expand(m).
        for n in 0..=20u64 {
            for m in 0..=20u64 {
                let a = expand(n, 3).unwrap();
                let b = expand(m, 3).unwrap();
                let c = expand(n + m, 3).unwrap();
                let mut conv = vec![BigUint::zero(); a.coeffs().len() + b.coeffs().len() - 1];
                for (i, x) in a.coeffs().iter().enumerate() {
                    for (j, y) in b.coeffs().iter().enumerate() {
                        conv[i + j] += x * y;
                    }
                }
                assert_eq!(c.coeffs(), conv, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn unimodal_up_to_middle() {
        for n in 0..=100u64 {
            let t = expand(n, 3).unwrap();
            let mid = (t.max_degree() / 2) as usize;
            for i in 0..mid {
                assert!(
                    t.coeffs()[i] <= t.coeffs()[i + 1],
                    "n={n} dip at i={i}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn ends_are_one_and_entries_positive(n in 0u64..60, q in 2u64..6) {
            let t = expand(n, q).unwrap();
            prop_assert_eq!(t.coeff(0).to_u64().unwrap(), 1);
            prop_assert_eq!(t.coeff(t.max_degree()).to_u64().unwrap(), 1);
            for c in t.coeffs() {
                prop_assert!(!c.is_zero());
            }
        }
    }
}
