//! The triple-cover linear program over exact rationals.
//!
//! For a fixed n the program is: minimize 3 sum_i f_{n,i} t_i subject to
//! t_i + t_j + t_k >= 1 for every multiset {i, j, k} with i + j + k <= 2n,
//! and t >= 0, where f_{n,i} are the trinomial coefficients. Everything here
//! is exact: the solver ([`simplex`]) works on `BigRational` tableaus and
//! returns a dual certificate, and [`enumerate`] provides an independent
//! exhaustive vertex oracle for small n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coeff::CoefficientTable;
use crate::ledger;

pub mod enumerate;
pub mod simplex;

pub use simplex::solve_exact;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("the LP is defined for q = 3 tables, got q = {0}")]
    WrongAlphabet(u64),
    #[error("table is for n = {table_n}, expected n = {expected}")]
    MismatchedTable { table_n: u64, expected: u64 },
    #[error("closed-form solutions start at n = 3, got n = {0}")]
    TooSmall(u64),
    #[error("dimension mismatch: solution has {got} entries, instance needs {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("improvement step requires a feasible input, {violations} constraints violated")]
    InfeasibleInput { violations: usize },
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("enumeration budget exceeded after {0} bases")]
    EnumerationBudget(usize),
}

/// The LP data: all constraint triples and the objective 3 f_{n,i}.
#[derive(Debug, Clone)]
pub struct LPInstance {
    pub n: u64,
    /// 3 f_{n,i} for i = 0..=2n.
    pub objective: Vec<BigInt>,
    /// All triples i <= j <= k with i + j + k <= 2n, in lexicographic order.
    pub triples: Vec<(u32, u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionStatus {
    Optimal,
    FeasibleOnly,
    InfeasibleInput,
}

/// A candidate or optimal solution vector with its exact objective value.
#[derive(Debug, Clone)]
pub struct LPSolution {
    pub n: u64,
    pub t: Vec<BigRational>,
    pub objective_value: BigRational,
    pub status: SolutionStatus,
    /// Feasible dual vector (one entry per triple) with dual objective equal
    /// to `objective_value`; present on solver output only.
    pub dual: Option<Vec<BigRational>>,
}

impl LPInstance {
    pub fn num_vars(&self) -> usize {
        2 * self.n as usize + 1
    }

    /// Exact objective of a candidate vector.
    pub fn objective_of(&self, t: &[BigRational]) -> BigRational {
        self.objective
            .iter()
            .zip(t)
            .map(|(c, v)| BigRational::from(c.clone()) * v)
            .sum()
    }
}

/// Build the instance for the table's n (q = 3 only).
pub fn build_instance(table: &CoefficientTable) -> Result<LPInstance, LpError> {
    if table.q() != 3 {
        return Err(LpError::WrongAlphabet(table.q()));
    }
    let n = table.n();
    let top = 2 * n as u32;
    let mut triples = Vec::new();
    for i in 0..=top {
        if 3 * i > top {
            break;
        }
        for j in i..=top {
            if i + 2 * j > top {
                break;
            }
            for k in j..=(top - i - j) {
                triples.push((i, j, k));
            }
        }
    }
    let objective = table
        .coeffs()
        .iter()
        .map(|f| BigInt::from(f.clone()) * 3)
        .collect();
    Ok(LPInstance {
        n,
        objective,
        triples,
    })
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The closed-form candidate optimum, by residue class of n (n >= 3).
///
/// Status is `FeasibleOnly`: optimality is an asymptotic statement and is
/// checked against the solver per n, never assumed.
pub fn conjectured_solution(n: u64, table: &CoefficientTable) -> Result<LPSolution, LpError> {
    if n < 3 {
        return Err(LpError::TooSmall(n));
    }
    if table.n() != n {
        return Err(LpError::MismatchedTable {
            table_n: table.n(),
            expected: n,
        });
    }
    if table.q() != 3 {
        return Err(LpError::WrongAlphabet(table.q()));
    }
    let len = 2 * n as usize + 1;
    let mut t = vec![BigRational::zero(); len];
    match n % 3 {
        0 => {
            let s = (n / 3) as usize;
            for v in t.iter_mut().take(2 * s - 1) {
                *v = BigRational::one();
            }
            t[2 * s - 1] = ratio(2, 3);
            t[2 * s] = ratio(1, 3);
        }
        2 => {
            // n = 3s - 1
            let s = ((n + 1) / 3) as usize;
            for v in t.iter_mut().take(2 * s - 3) {
                *v = BigRational::one();
            }
            t[2 * s - 3] = ratio(4, 5);
            t[2 * s - 2] = ratio(3, 5);
            t[2 * s - 1] = ratio(2, 5);
            t[2 * s] = ratio(1, 5);
        }
        _ => {
            // n = 3s - 2
            let s = ((n + 2) / 3) as usize;
            for v in t.iter_mut().take(2 * s - 3) {
                *v = BigRational::one();
            }
            t[2 * s - 3] = ratio(3, 4);
            t[2 * s - 2] = ratio(2, 4);
            t[2 * s - 1] = ratio(1, 4);
        }
    }
    let instance = build_instance(table)?;
    let objective_value = instance.objective_of(&t);
    Ok(LPSolution {
        n,
        t,
        objective_value,
        status: SolutionStatus::FeasibleOnly,
        dual: None,
    })
}

/// Every violated triple (exact comparison); empty certifies feasibility.
pub fn check_feasibility(
    sol: &LPSolution,
    instance: &LPInstance,
) -> Result<Vec<(u32, u32, u32)>, LpError> {
    if sol.t.len() != instance.num_vars() {
        return Err(LpError::DimensionMismatch {
            got: sol.t.len(),
            want: instance.num_vars(),
        });
    }
    let one = BigRational::one();
    let mut violated = Vec::new();
    for &(i, j, k) in &instance.triples {
        let sum = &sol.t[i as usize] + &sol.t[j as usize] + &sol.t[k as usize];
        if sum < one {
            violated.push((i, j, k));
        }
    }
    Ok(violated)
}

/// Full feasibility: every triple covered and every entry nonnegative.
pub fn is_feasible(sol: &LPSolution, instance: &LPInstance) -> Result<bool, LpError> {
    let violated = check_feasibility(sol, instance)?;
    Ok(violated.is_empty() && !sol.t.iter().any(|v| v.is_negative()))
}

/// Which rewrite `improvement_step` applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImprovementRule {
    /// Zero the top variable t_{2n}, bump t_0 by half of it.
    DropTop,
    /// Zero t_s for the largest s > n, bump t_0..t_[n-s/2].
    DropTail { s: u64 },
    /// Zero t_n, bump t_0 twice and t_1..t_[n/2].
    DropCenter,
    /// Zero t_{n-k}, bump t_{2k-1}, t_{2k} twice, t_{2k+1}..t_[(n+k)/2].
    DropStep { k: u64 },
    /// No rewrite applies (or none improves): the input is a fixpoint.
    Fixpoint,
}

/// Apply the first rewrite, in rule order, that targets the largest positive
/// index and strictly lowers the objective. The trade is priced exactly with
/// the coefficient table before being applied, so the output never has a
/// larger objective and stays feasible; when no rewrite qualifies the input
/// is returned unchanged as a fixpoint.
pub fn improvement_step(
    sol: &LPSolution,
    instance: &LPInstance,
    table: &CoefficientTable,
) -> Result<(LPSolution, ImprovementRule), LpError> {
    let violations = check_feasibility(sol, instance)?;
    if !violations.is_empty() || sol.t.iter().any(|v| v.is_negative()) {
        return Err(LpError::InfeasibleInput {
            violations: violations.len().max(1),
        });
    }
    if table.n() != instance.n || table.q() != 3 {
        return Err(LpError::MismatchedTable {
            table_n: table.n(),
            expected: instance.n,
        });
    }
    let n = instance.n;
    let two_n = 2 * n as usize;
    let fixpoint = |sol: &LPSolution| {
        (
            LPSolution {
                status: SolutionStatus::FeasibleOnly,
                ..sol.clone()
            },
            ImprovementRule::Fixpoint,
        )
    };
    let Some(l) = (0..=two_n).rev().find(|&i| sol.t[i].is_positive()) else {
        // All-zero only happens for n = 0 with... it cannot: (0,0,0) forces
        // t_0 >= 1/3. Treat as fixpoint defensively.
        return Ok(fixpoint(sol));
    };
    let eps = sol.t[l].clone();
    let mut t = sol.t.clone();
    let rule;
    if l == two_n && n >= 1 {
        t[0] += &eps / BigRational::from(BigInt::from(2));
        t[two_n] = BigRational::zero();
        rule = ImprovementRule::DropTop;
    } else if l as u64 > n {
        let s = l as u64;
        let delta = ledger::drop_tail_lhs(table, s);
        if !delta.is_negative() {
            return Ok(fixpoint(sol));
        }
        let top = (2 * n - s) / 2; // floor(n - s/2), nonnegative since s < 2n
        for v in t.iter_mut().take(top as usize + 1) {
            *v += &eps;
        }
        t[l] = BigRational::zero();
        rule = ImprovementRule::DropTail { s };
    } else if l as u64 == n {
        let delta = ledger::drop_center_lhs(table);
        if !delta.is_negative() {
            return Ok(fixpoint(sol));
        }
        t[0] += &eps * BigRational::from(BigInt::from(2));
        for v in t.iter_mut().take(n as usize / 2 + 1).skip(1) {
            *v += &eps;
        }
        t[l] = BigRational::zero();
        rule = ImprovementRule::DropCenter;
    } else {
        let k = n - l as u64;
        if !ledger::claimed_step_range(n).contains(&k) {
            return Ok(fixpoint(sol));
        }
        let delta = ledger::drop_step_lhs(table, k);
        if !delta.is_negative() {
            return Ok(fixpoint(sol));
        }
        let mid_top = ((n + k) / 2) as usize;
        debug_assert!(mid_top < l);
        t[2 * k as usize - 1] += &eps;
        t[2 * k as usize] += &eps * BigRational::from(BigInt::from(2));
        for v in t.iter_mut().take(mid_top + 1).skip(2 * k as usize + 1) {
            *v += &eps;
        }
        t[l] = BigRational::zero();
        rule = ImprovementRule::DropStep { k };
    }
    let objective_value = instance.objective_of(&t);
    debug_assert!(objective_value <= sol.objective_value);
    Ok((
        LPSolution {
            n,
            t,
            objective_value,
            status: SolutionStatus::FeasibleOnly,
            dual: None,
        },
        rule,
    ))
}

/// Iterate [`improvement_step`] to a fixpoint, returning the trajectory of
/// applied rules.
pub fn improve_to_fixpoint(
    start: &LPSolution,
    instance: &LPInstance,
    table: &CoefficientTable,
) -> Result<(LPSolution, Vec<ImprovementRule>), LpError> {
    let mut current = start.clone();
    let mut rules = Vec::new();
    loop {
        let (next, rule) = improvement_step(&current, instance, table)?;
        if rule == ImprovementRule::Fixpoint {
            return Ok((next, rules));
        }
        rules.push(rule);
        current = next;
    }
}

/// The all-ones vector as an `LPSolution` (always feasible).
pub fn all_ones(instance: &LPInstance) -> LPSolution {
    let t = vec![BigRational::one(); instance.num_vars()];
    let objective_value = instance.objective_of(&t);
    LPSolution {
        n: instance.n,
        t,
        objective_value,
        status: SolutionStatus::FeasibleOnly,
        dual: None,
    }
}
