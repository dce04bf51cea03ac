//! Dense exact-rational simplex for the triple-cover LP.
//!
//! The primal (min c^T t, At >= 1, t >= 0) is attacked through its dual
//! (max 1^T y, A^T y <= c, y >= 0): the dual slack basis is feasible from the
//! start because c > 0, so no phase one is needed, and the dual tableau has
//! only 2n+1 rows against the primal's thousands. At the optimum the basic
//! values give the dual vector y and the slack reduced costs give the primal
//! vertex t. Both vectors, and the equality of their objectives, are verified
//! exactly before anything is returned, so a successful solve carries its own
//! optimality certificate.
//!
//! Pivoting: largest-coefficient entering rule, with a permanent fallback to
//! Bland's least-index rule once a run of degenerate pivots exceeds a fixed
//! threshold. Bland's rule cannot cycle, and every objective improvement
//! resets the clock, so the solve terminates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LPInstance, LPSolution, LpError, SolutionStatus};

const DEGENERATE_SWITCH: u32 = 25;
const MAX_PIVOTS: u64 = 1_000_000;

struct Tableau {
    /// rows[i][col], col < m: dual variable columns; col in m..m+rows: slack
    /// columns; last col: right-hand side.
    rows: Vec<Vec<BigRational>>,
    /// Reduced-cost row, same column layout, last entry unused.
    cbar: Vec<BigRational>,
    /// Basic variable (column index) of each row.
    basis: Vec<usize>,
    m: usize,
}

impl Tableau {
    fn new(instance: &LPInstance) -> Self {
        let n_rows = instance.num_vars();
        let m = instance.triples.len();
        let width = m + n_rows + 1;
        let mut rows = vec![vec![BigRational::zero(); width]; n_rows];
        for (j, &(a, b, c)) in instance.triples.iter().enumerate() {
            for idx in [a, b, c] {
                let cell = &mut rows[idx as usize][j];
                *cell = &*cell + BigRational::one();
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[m + i] = BigRational::one();
            row[width - 1] = BigRational::from(instance.objective[i].clone());
        }
        let mut cbar = vec![BigRational::zero(); width];
        for c in cbar.iter_mut().take(m) {
            *c = BigRational::one();
        }
        let basis = (m..m + n_rows).collect();
        Tableau {
            rows,
            cbar,
            basis,
            m,
        }
    }

    fn rhs(&self, i: usize) -> &BigRational {
        let w = self.rows[i].len();
        &self.rows[i][w - 1]
    }

    fn objective_value(&self) -> BigRational {
        let mut v = BigRational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.m {
                v += self.rhs(i);
            }
        }
        v
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let width = self.cbar.len() - 1;
        if bland {
            (0..width).find(|&j| self.cbar[j].is_positive())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..width {
                if self.cbar[j].is_positive()
                    && best.map_or(true, |b| self.cbar[j] > self.cbar[b])
                {
                    best = Some(j);
                }
            }
            best
        }
    }

    /// Minimum-ratio row for the entering column; ties broken by the least
    /// basic variable index (Bland-compatible).
    fn leaving(&self, e: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.rows.len() {
            let d = &self.rows[i][e];
            if !d.is_positive() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    // rhs_i / d_i < rhs_b / d_b, cross-multiplied.
                    let lhs = self.rhs(i) * &self.rows[b][e];
                    let rhs = self.rhs(b) * d;
                    match lhs.cmp(&rhs) {
                        std::cmp::Ordering::Less => best = Some(i),
                        std::cmp::Ordering::Equal => {
                            if self.basis[i] < self.basis[b] {
                                best = Some(i);
                            }
                        }
                        std::cmp::Ordering::Greater => {}
                    }
                }
            }
        }
        best
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let width = self.rows[r].len();
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            let inv = p.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let nonzero: Vec<usize> = (0..width)
            .filter(|&c| !self.rows[r][c].is_zero())
            .collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut self.rows[i][e], BigRational::zero());
            for &c in &nonzero {
                if c == e {
                    continue;
                }
                let delta = &factor * &self.rows[r][c];
                self.rows[i][c] = &self.rows[i][c] - delta;
            }
        }
        if !self.cbar[e].is_zero() {
            let factor = std::mem::replace(&mut self.cbar[e], BigRational::zero());
            for &c in &nonzero {
                if c == e || c == width - 1 {
                    continue;
                }
                let delta = &factor * &self.rows[r][c];
                self.cbar[c] = &self.cbar[c] - delta;
            }
        }
        self.basis[r] = e;
    }
}

/// Solve the instance to proven optimality.
///
/// The returned solution has `status = Optimal`, a primal vertex `t`, and the
/// dual certificate in `dual`; primal feasibility, dual feasibility and the
/// exact equality of both objectives are all checked before returning.
pub fn solve_exact(instance: &LPInstance) -> Result<LPSolution, LpError> {
    let mut tab = Tableau::new(instance);
    let mut bland = false;
    let mut degenerate_run = 0u32;
    let mut last_value = BigRational::zero();
    let mut pivots = 0u64;
    loop {
        let Some(e) = tab.entering(bland) else {
            break;
        };
        let Some(r) = tab.leaving(e) else {
            return Err(LpError::Solver(
                "dual unbounded, primal infeasible: impossible for this family".into(),
            ));
        };
        tab.pivot(r, e);
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(LpError::Solver("pivot budget exhausted".into()));
        }
        let value = tab.objective_value();
        if value > last_value {
            degenerate_run = 0;
            bland = false;
        } else {
            degenerate_run += 1;
            if degenerate_run > DEGENERATE_SWITCH {
                bland = true;
            }
        }
        last_value = value;
    }

    let m = tab.m;
    let n_rows = instance.num_vars();
    let mut dual = vec![BigRational::zero(); m];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < m {
            dual[b] = tab.rhs(i).clone();
        }
    }
    let t: Vec<BigRational> = (0..n_rows).map(|i| -&tab.cbar[m + i]).collect();

    // Certificate checks, all exact.
    if t.iter().any(|v| v.is_negative()) || dual.iter().any(|v| v.is_negative()) {
        return Err(LpError::Solver("negative entry in extracted vectors".into()));
    }
    let one = BigRational::one();
    for &(a, b, c) in &instance.triples {
        if &t[a as usize] + &t[b as usize] + &t[c as usize] < one {
            return Err(LpError::Solver("extracted primal vector infeasible".into()));
        }
    }
    let mut col_sums = vec![BigRational::zero(); n_rows];
    for (j, &(a, b, c)) in instance.triples.iter().enumerate() {
        if dual[j].is_zero() {
            continue;
        }
        for idx in [a, b, c] {
            col_sums[idx as usize] += &dual[j];
        }
    }
    for (i, s) in col_sums.iter().enumerate() {
        if s > &BigRational::from(instance.objective[i].clone()) {
            return Err(LpError::Solver("extracted dual vector infeasible".into()));
        }
    }
    let primal_value = instance.objective_of(&t);
    let dual_value: BigRational = dual.iter().cloned().sum();
    if primal_value != dual_value {
        return Err(LpError::Solver(format!(
            "certificate gap: primal {primal_value} vs dual {dual_value}"
        )));
    }
    Ok(LPSolution {
        n: instance.n,
        t,
        objective_value: primal_value,
        status: SolutionStatus::Optimal,
        dual: Some(dual),
    })
}

/// Exact rational from an integer pair, test helper and CLI convenience.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::expand;
    use crate::lp::{build_instance, check_feasibility, conjectured_solution};

    fn solve(n: u64) -> LPSolution {
        let table = expand(n, 3).unwrap();
        let inst = build_instance(&table).unwrap();
        solve_exact(&inst).unwrap()
    }

    #[test]
    fn trivial_instance() {
        let sol = solve(0);
        assert_eq!(sol.t, vec![rat(1, 3)]);
        assert_eq!(sol.objective_value, rat(1, 1));
    }

    #[test]
    fn n1_optimum_matches_enumeration_oracle() {
        let sol = solve(1);
        assert_eq!(sol.objective_value, rat(9, 4));
    }

    #[test]
    fn n3_optimum_is_fifteen() {
        let sol = solve(3);
        assert_eq!(sol.objective_value, rat(15, 1));
        let table = expand(3, 3).unwrap();
        let conj = conjectured_solution(3, &table).unwrap();
        assert_eq!(conj.objective_value, rat(15, 1));
    }

    #[test]
    fn solution_is_feasible_and_certified() {
        for n in [1u64, 2, 3, 4, 5, 6, 7, 8] {
            let table = expand(n, 3).unwrap();
            let inst = build_instance(&table).unwrap();
            let sol = solve_exact(&inst).unwrap();
            assert!(check_feasibility(&sol, &inst).unwrap().is_empty());
            let dual = sol.dual.as_ref().unwrap();
            let dual_value: BigRational = dual.iter().cloned().sum();
            assert_eq!(dual_value, sol.objective_value, "n={n}");
        }
    }

    #[test]
    fn objective_invariant_under_constraint_order() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let table = expand(6, 3).unwrap();
        let inst = build_instance(&table).unwrap();
        let baseline = solve_exact(&inst).unwrap().objective_value;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..3 {
            let mut shuffled = inst.clone();
            shuffled.triples.shuffle(&mut rng);
            let sol = solve_exact(&shuffled).unwrap();
            assert_eq!(sol.objective_value, baseline);
        }
    }

    #[test]
    fn optimum_never_exceeds_conjectured_objective() {
        for n in 3..=12u64 {
            let table = expand(n, 3).unwrap();
            let inst = build_instance(&table).unwrap();
            let sol = solve_exact(&inst).unwrap();
            let conj = conjectured_solution(n, &table).unwrap();
            assert!(
                sol.objective_value <= conj.objective_value,
                "n={n}: {} > {}",
                sol.objective_value,
                conj.objective_value
            );
        }
    }
}
