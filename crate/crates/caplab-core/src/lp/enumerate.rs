//! Exhaustive vertex enumeration, independent of the simplex solver.
//!
//! Two routes:
//!
//! * [`brute_force_vertices`] solves every square subsystem of constraint
//!   rows and keeps the feasible solutions. Undeniably exhaustive, but only
//!   viable for the smallest instances; used to validate the traversal.
//! * [`enumerate_vertices`] walks the basis graph of the standard form
//!   [A | -I] x = 1 under lexicographic perturbation. Every lex-positive
//!   dictionary corresponds to one vertex of the perturbed (simple) polytope,
//!   the ratio test has a unique winner, and the graph is connected, so a
//!   depth-first walk with a visited set reaches every dictionary. Distinct
//!   dictionaries projecting to the same point are merged at collection time.
//!
//! The walk starts from a vertex produced by a self-contained crash phase
//! (walk from the all-ones point, adding one independent tight constraint
//! per move), so nothing here depends on the simplex module.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LPInstance, LpError};

#[derive(Debug, Clone)]
pub struct VertexSummary {
    pub vertex_count: usize,
    pub bases_visited: usize,
    pub min_objective: BigRational,
    /// Lexicographically smallest vertex attaining the minimum.
    pub argmin: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    pub max_bases: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_bases: 2_000_000,
        }
    }
}

fn q0() -> BigRational {
    BigRational::zero()
}

fn q1() -> BigRational {
    BigRational::one()
}

/// Triple rows as dense multiplicity vectors over the 2n+1 variables.
fn constraint_rows(instance: &LPInstance) -> Vec<Vec<BigRational>> {
    let n_vars = instance.num_vars();
    instance
        .triples
        .iter()
        .map(|&(a, b, c)| {
            let mut row = vec![q0(); n_vars];
            for idx in [a, b, c] {
                let cell = &mut row[idx as usize];
                *cell = &*cell + q1();
            }
            row
        })
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Row-echelon accumulator for incremental rank and null-space queries.
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivot_cols: Vec<usize>,
    width: usize,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            width,
        }
    }

    /// Reduce `v` against the current rows; if independent, absorb it and
    /// return true.
    fn add(&mut self, mut v: Vec<BigRational>) -> bool {
        for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for c in 0..self.width {
                    if !row[c].is_zero() {
                        let delta = &f * &row[c];
                        v[c] = &v[c] - delta;
                    }
                }
            }
        }
        let Some(pc) = (0..self.width).find(|&c| !v[c].is_zero()) else {
            return false;
        };
        let inv = v[pc].clone().recip();
        for c in 0..self.width {
            if !v[c].is_zero() {
                v[c] = &v[c] * &inv;
            }
        }
        self.rows.push(v);
        self.pivot_cols.push(pc);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A nonzero vector orthogonal to... rather, in the null space of the
    /// row span: unit on the first free column, back-substituted on pivots.
    fn null_vector(&self) -> Option<Vec<BigRational>> {
        let free = (0..self.width).find(|c| !self.pivot_cols.contains(c))?;
        let mut d = vec![q0(); self.width];
        d[free] = q1();
        // Rows are reduced top-down only; substitute from the last row up.
        for idx in (0..self.rows.len()).rev() {
            let row = &self.rows[idx];
            let pc = self.pivot_cols[idx];
            let mut s = q0();
            for c in 0..self.width {
                if c != pc && !row[c].is_zero() && !d[c].is_zero() {
                    s += &row[c] * &d[c];
                }
            }
            d[pc] = -s;
        }
        Some(d)
    }
}

/// Walk from the all-ones point to a vertex by repeatedly moving along a
/// direction in the null space of the tight constraints until a new one
/// becomes tight.
fn crash_to_vertex(rows: &[Vec<BigRational>], n_vars: usize) -> Result<Vec<BigRational>, LpError> {
    let mut x = vec![q1(); n_vars];
    for _ in 0..=n_vars {
        let mut ech = Echelon::new(n_vars);
        for row in rows {
            if dot(row, &x) == q1() {
                ech.add(row.clone());
            }
        }
        for j in 0..n_vars {
            if x[j].is_zero() {
                let mut e = vec![q0(); n_vars];
                e[j] = q1();
                ech.add(e);
            }
        }
        if ech.rank() == n_vars {
            return Ok(x);
        }
        let mut d = ech
            .null_vector()
            .ok_or_else(|| LpError::Solver("no descent direction below full rank".into()))?;
        // Pick the bounded orientation; t >= 0 guarantees one exists.
        let bounded = |d: &[BigRational]| -> Option<BigRational> {
            let mut theta: Option<BigRational> = None;
            let mut tighten = |cand: BigRational| {
                if theta.as_ref().map_or(true, |t| &cand < t) {
                    theta = Some(cand);
                }
            };
            for row in rows {
                let ad = dot(row, d);
                if ad.is_negative() {
                    tighten((dot(row, &x) - q1()) / -ad);
                }
            }
            for j in 0..n_vars {
                if d[j].is_negative() {
                    let c = &x[j] / -&d[j];
                    tighten(c);
                }
            }
            theta
        };
        let theta = match bounded(&d) {
            Some(t) => t,
            None => {
                for v in d.iter_mut() {
                    *v = -&*v;
                }
                bounded(&d).ok_or_else(|| {
                    LpError::Solver("unbounded line in a pointed polyhedron".into())
                })?
            }
        };
        for j in 0..n_vars {
            if !d[j].is_zero() {
                let step = &theta * &d[j];
                x[j] = &x[j] + step;
            }
        }
    }
    Err(LpError::Solver("crash phase failed to reach a vertex".into()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarPos {
    Basic(usize),
    Nonbasic(usize),
}

/// Dictionary of the standard form [A | -I] x = 1 for one basis.
///
/// `cols[j]` holds the column of nonbasic variable `nb[j]` expressed in the
/// current basis; `rhs` holds the basic values. Variable ids: 0..n_vars are
/// the structural t variables, n_vars.. are slacks.
struct Dictionary {
    m: usize,
    n_vars: usize,
    basis: Vec<usize>,
    nb: Vec<usize>,
    pos: Vec<VarPos>,
    cols: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// Seed basis in fixed order; reference frame of the lexicographic
    /// perturbation.
    frame: Vec<usize>,
}

impl Dictionary {
    /// Column of [A | -I] for variable `v`, in the original row space.
    fn original_column(rows: &[Vec<BigRational>], n_vars: usize, v: usize, out: &mut [BigRational]) {
        if v < n_vars {
            for (i, row) in rows.iter().enumerate() {
                out[i] = row[v].clone();
            }
        } else {
            for o in out.iter_mut() {
                *o = q0();
            }
            out[v - n_vars] = -q1();
        }
    }

    fn from_vertex(
        rows: &[Vec<BigRational>],
        n_vars: usize,
        x: &[BigRational],
    ) -> Result<Dictionary, LpError> {
        let m = rows.len();
        // Tight-constraint normals pick the nonbasic set.
        let mut ech = Echelon::new(n_vars);
        let mut nonbasic = Vec::with_capacity(n_vars);
        for (j, v) in x.iter().enumerate() {
            if v.is_zero() {
                let mut e = vec![q0(); n_vars];
                e[j] = q1();
                if ech.add(e) {
                    nonbasic.push(j);
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if nonbasic.len() == n_vars {
                break;
            }
            if dot(row, x) == q1() && ech.add(row.clone()) {
                nonbasic.push(n_vars + i);
            }
        }
        if nonbasic.len() != n_vars {
            return Err(LpError::Solver(
                "seed point is not a vertex (tight system rank-deficient)".into(),
            ));
        }
        nonbasic.sort_unstable();
        let nb_set: HashSet<usize> = nonbasic.iter().copied().collect();
        let basis: Vec<usize> = (0..n_vars + m).filter(|v| !nb_set.contains(v)).collect();

        // Solve B * [cols | rhs] = [A'_nb | 1] by Gaussian elimination.
        let width = m + n_vars + 1;
        let mut aug = vec![vec![q0(); width]; m];
        let mut scratch = vec![q0(); m];
        for (bi, &v) in basis.iter().enumerate() {
            Self::original_column(rows, n_vars, v, &mut scratch);
            for i in 0..m {
                aug[i][bi] = scratch[i].clone();
            }
        }
        for (cj, &v) in nonbasic.iter().enumerate() {
            Self::original_column(rows, n_vars, v, &mut scratch);
            for i in 0..m {
                aug[i][m + cj] = scratch[i].clone();
            }
        }
        for row in aug.iter_mut() {
            row[width - 1] = q1();
        }
        // Forward elimination with partial (first nonzero) pivoting.
        let mut perm: Vec<usize> = (0..m).collect();
        for col in 0..m {
            let Some(pr) = (col..m).find(|&r| !aug[perm[r]][col].is_zero()) else {
                return Err(LpError::Solver("singular basis matrix".into()));
            };
            perm.swap(col, pr);
            let prow = perm[col];
            let inv = aug[prow][col].clone().recip();
            for c in col..width {
                if !aug[prow][c].is_zero() {
                    aug[prow][c] = &aug[prow][c] * &inv;
                }
            }
            for r in 0..m {
                let rr = perm[r];
                if rr == prow || aug[rr][col].is_zero() {
                    continue;
                }
                let f = std::mem::replace(&mut aug[rr][col], q0());
                for c in (col + 1)..width {
                    if !aug[prow][c].is_zero() {
                        let delta = &f * &aug[prow][c];
                        aug[rr][c] = &aug[rr][c] - delta;
                    }
                }
            }
        }
        let mut cols = vec![vec![q0(); m]; n_vars];
        let mut rhs = vec![q0(); m];
        for i in 0..m {
            let src = perm[i];
            for j in 0..n_vars {
                cols[j][i] = aug[src][m + j].clone();
            }
            rhs[i] = aug[src][width - 1].clone();
        }
        if rhs.iter().any(|v| v.is_negative()) {
            return Err(LpError::Solver("seed dictionary infeasible".into()));
        }
        let mut pos = vec![VarPos::Basic(0); n_vars + m];
        for (i, &v) in basis.iter().enumerate() {
            pos[v] = VarPos::Basic(i);
        }
        for (j, &v) in nonbasic.iter().enumerate() {
            pos[v] = VarPos::Nonbasic(j);
        }
        let frame = basis.clone();
        Ok(Dictionary {
            m,
            n_vars,
            basis,
            nb: nonbasic,
            pos,
            cols,
            rhs,
            frame,
        })
    }

    /// Lexicographic component `idx` of row `i`: idx 0 is the right-hand
    /// side, idx k > 0 the column of the k-th frame variable.
    fn lex_component(&self, i: usize, idx: usize) -> BigRational {
        if idx == 0 {
            return self.rhs[i].clone();
        }
        let v = self.frame[idx - 1];
        match self.pos[v] {
            VarPos::Basic(row) => {
                if row == i {
                    q1()
                } else {
                    q0()
                }
            }
            VarPos::Nonbasic(slot) => self.cols[slot][i].clone(),
        }
    }

    /// Unique lexicographic minimum-ratio row for entering slot `j`, or None
    /// when the edge is an unbounded ray.
    fn lex_min_row(&self, j: usize) -> Option<usize> {
        let col = &self.cols[j];
        let mut ties: Vec<usize> = (0..self.m).filter(|&i| col[i].is_positive()).collect();
        if ties.is_empty() {
            return None;
        }
        let mut idx = 0usize;
        while ties.len() > 1 {
            debug_assert!(idx <= self.m, "lexicographic tie persisted");
            let mut best_val: Option<BigRational> = None;
            let mut next = Vec::with_capacity(ties.len());
            for &i in &ties {
                // component / col[i], compared via multiplication by the
                // positive denominators
                let c = self.lex_component(i, idx);
                let v = c / &col[i];
                match &best_val {
                    None => {
                        best_val = Some(v);
                        next.clear();
                        next.push(i);
                    }
                    Some(b) => match v.cmp(b) {
                        std::cmp::Ordering::Less => {
                            best_val = Some(v);
                            next.clear();
                            next.push(i);
                        }
                        std::cmp::Ordering::Equal => next.push(i),
                        std::cmp::Ordering::Greater => {}
                    },
                }
            }
            ties = next;
            idx += 1;
        }
        Some(ties[0])
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.cols[j][r].clone();
        debug_assert!(!p.is_zero());
        let inv = p.recip();
        // Row r of every column, rewritten for the entering variable.
        for c in 0..self.n_vars {
            if c == j {
                continue;
            }
            if !self.cols[c][r].is_zero() {
                self.cols[c][r] = &self.cols[c][r] * &inv;
            }
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        self.cols[j][r] = inv;
        for i in 0..self.m {
            if i == r || self.cols[j][i].is_zero() {
                continue;
            }
            let f = self.cols[j][i].clone();
            for c in 0..self.n_vars {
                if c == j {
                    continue;
                }
                if !self.cols[c][r].is_zero() {
                    let delta = &f * &self.cols[c][r];
                    self.cols[c][i] = &self.cols[c][i] - delta;
                }
            }
            if !self.rhs[r].is_zero() {
                let delta = &f * &self.rhs[r];
                self.rhs[i] = &self.rhs[i] - delta;
            }
            self.cols[j][i] = -(&f * &self.cols[j][r]);
        }
        let entering = self.nb[j];
        let leaving = self.basis[r];
        self.basis[r] = entering;
        self.nb[j] = leaving;
        self.pos[entering] = VarPos::Basic(r);
        self.pos[leaving] = VarPos::Nonbasic(j);
    }

    /// The structural part of the current basic solution.
    fn vertex(&self) -> Vec<BigRational> {
        (0..self.n_vars)
            .map(|v| match self.pos[v] {
                VarPos::Basic(row) => self.rhs[row].clone(),
                VarPos::Nonbasic(_) => q0(),
            })
            .collect()
    }

    fn nb_key(&self) -> Vec<u32> {
        let mut k: Vec<u32> = self.nb.iter().map(|&v| v as u32).collect();
        k.sort_unstable();
        k
    }
}

/// Enumerate every vertex of {t >= 0 : At >= 1} by walking the perturbed
/// basis graph. Exhaustive; errors out if the basis budget is exceeded.
pub fn enumerate_vertices(
    instance: &LPInstance,
    limits: EnumerationLimits,
) -> Result<VertexSummary, LpError> {
    let n_vars = instance.num_vars();
    let rows = constraint_rows(instance);
    let x0 = crash_to_vertex(&rows, n_vars)?;
    let mut dict = Dictionary::from_vertex(&rows, n_vars, &x0)?;

    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    visited.insert(dict.nb_key());
    let mut vertices: HashSet<Vec<BigRational>> = HashSet::new();
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;

    let mut record = |dict: &Dictionary,
                      vertices: &mut HashSet<Vec<BigRational>>,
                      best: &mut Option<(BigRational, Vec<BigRational>)>| {
        let x = dict.vertex();
        if vertices.contains(&x) {
            return;
        }
        let obj = instance.objective_of(&x);
        match best {
            None => *best = Some((obj, x.clone())),
            Some((bo, bx)) => {
                if &obj < bo || (&obj == bo && &x < bx) {
                    *best = Some((obj, x.clone()));
                }
            }
        }
        vertices.insert(x);
    };
    record(&dict, &mut vertices, &mut best);

    struct Frame {
        next_slot: usize,
        entry: Option<(usize, usize)>,
    }
    let mut stack = vec![Frame {
        next_slot: 0,
        entry: None,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next_slot == n_vars {
            if let Some((r, j)) = top.entry {
                dict.pivot(r, j);
            }
            stack.pop();
            continue;
        }
        let j = top.next_slot;
        top.next_slot += 1;
        let Some(r) = dict.lex_min_row(j) else {
            continue;
        };
        let mut child_key: Vec<u32> = dict
            .nb
            .iter()
            .enumerate()
            .map(|(s, &v)| if s == j { dict.basis[r] as u32 } else { v as u32 })
            .collect();
        child_key.sort_unstable();
        if visited.contains(&child_key) {
            continue;
        }
        if visited.len() >= limits.max_bases {
            return Err(LpError::EnumerationBudget(visited.len()));
        }
        visited.insert(child_key);
        dict.pivot(r, j);
        record(&dict, &mut vertices, &mut best);
        stack.push(Frame {
            next_slot: 0,
            entry: Some((r, j)),
        });
    }

    let (min_objective, argmin) = best.expect("at least one vertex");
    Ok(VertexSummary {
        vertex_count: vertices.len(),
        bases_visited: visited.len(),
        min_objective,
        argmin,
    })
}

/// Solve every square subsystem of N constraint rows and keep the feasible
/// solutions: the definition of "vertex", made executable. Exponential; only
/// for the smallest n.
pub fn brute_force_vertices(instance: &LPInstance) -> Result<VertexSummary, LpError> {
    let n_vars = instance.num_vars();
    let rows = constraint_rows(instance);
    // All constraints as (normal, rhs): triples then coordinate bounds.
    let mut normals: Vec<(Vec<BigRational>, BigRational)> =
        rows.into_iter().map(|r| (r, q1())).collect();
    for j in 0..n_vars {
        let mut e = vec![q0(); n_vars];
        e[j] = q1();
        normals.push((e, q0()));
    }
    let m = normals.len();
    let mut vertices: HashSet<Vec<BigRational>> = HashSet::new();
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    let mut selection = vec![0usize; n_vars];

    fn solve_square(
        normals: &[(Vec<BigRational>, BigRational)],
        picks: &[usize],
        n_vars: usize,
    ) -> Option<Vec<BigRational>> {
        let mut aug: Vec<Vec<BigRational>> = picks
            .iter()
            .map(|&i| {
                let mut row = normals[i].0.clone();
                row.push(normals[i].1.clone());
                row
            })
            .collect();
        for col in 0..n_vars {
            let pr = (col..n_vars).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pr);
            let inv = aug[col][col].clone().recip();
            for c in col..=n_vars {
                if !aug[col][c].is_zero() {
                    aug[col][c] = &aug[col][c] * &inv;
                }
            }
            for r in 0..n_vars {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let f = std::mem::replace(&mut aug[r][col], q0());
                for c in (col + 1)..=n_vars {
                    if !aug[col][c].is_zero() {
                        let delta = &f * &aug[col][c];
                        aug[r][c] = &aug[r][c] - delta;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }

    // Iterate over combinations of n_vars picks out of m.
    let mut level = 0usize;
    selection[0] = 0;
    loop {
        if selection[level] > m - (n_vars - level) {
            if level == 0 {
                break;
            }
            level -= 1;
            selection[level] += 1;
            continue;
        }
        if level + 1 < n_vars {
            level += 1;
            selection[level] = selection[level - 1] + 1;
            continue;
        }
        // Full selection.
        if let Some(x) = solve_square(&normals, &selection, n_vars) {
            let feasible = !x.iter().any(|v| v.is_negative())
                && normals[..m - n_vars]
                    .iter()
                    .all(|(a, _)| dot(a, &x) >= q1());
            if feasible && !vertices.contains(&x) {
                let obj = instance.objective_of(&x);
                match &mut best {
                    None => best = Some((obj, x.clone())),
                    Some((bo, bx)) => {
                        if obj < *bo || (obj == *bo && &x < bx) {
                            *bo = obj;
                            *bx = x.clone();
                        }
                    }
                }
                vertices.insert(x);
            }
        }
        selection[level] += 1;
    }

    let (min_objective, argmin) =
        best.ok_or_else(|| LpError::Solver("no vertex found by brute force".into()))?;
    Ok(VertexSummary {
        vertex_count: vertices.len(),
        bases_visited: 0,
        min_objective,
        argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::expand;
    use crate::lp::simplex::rat;
    use crate::lp::{build_instance, solve_exact};

    fn instance(n: u64) -> LPInstance {
        build_instance(&expand(n, 3).unwrap()).unwrap()
    }

    #[test]
    fn brute_force_n1_finds_nine_quarters() {
        let summary = brute_force_vertices(&instance(1)).unwrap();
        assert_eq!(summary.min_objective, rat(9, 4));
        assert_eq!(summary.argmin, vec![rat(1, 2), rat(1, 4), rat(0, 1)]);
    }

    #[test]
    fn traversal_matches_brute_force_exactly() {
        for n in [0u64, 1, 2] {
            let inst = instance(n);
            let brute = brute_force_vertices(&inst).unwrap();
            let walk = enumerate_vertices(&inst, EnumerationLimits::default()).unwrap();
            assert_eq!(walk.vertex_count, brute.vertex_count, "n={n}");
            assert_eq!(walk.min_objective, brute.min_objective, "n={n}");
            assert_eq!(walk.argmin, brute.argmin, "n={n}");
        }
    }

    #[test]
    fn traversal_agrees_with_simplex_small() {
        for n in [1u64, 2, 3, 4] {
            let inst = instance(n);
            let walk = enumerate_vertices(&inst, EnumerationLimits::default()).unwrap();
            let sol = solve_exact(&inst).unwrap();
            assert_eq!(walk.min_objective, sol.objective_value, "n={n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = instance(3);
        let out = enumerate_vertices(
            &inst,
            EnumerationLimits { max_bases: 2 },
        );
        assert!(matches!(out, Err(LpError::EnumerationBudget(_))));
    }

    // The n = 3 brute force scans C(30,7) ~ 2M subsystems; slow but a good
    // independent anchor. Run with: cargo test -- --ignored
    #[test]
    #[ignore]
    fn brute_force_n3_is_fifteen() {
        let summary = brute_force_vertices(&instance(3)).unwrap();
        assert_eq!(summary.min_objective, rat(15, 1));
    }
}
