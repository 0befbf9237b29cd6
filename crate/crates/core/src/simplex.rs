//! Dense revised simplex for small linear programs.
//!
//! Minimises `c^T x` subject to sparse rows `a^T x {<=, >=, =} b` and bounds
//! `0 <= x_j <= u_j`. Upper bounds are handled implicitly (nonbasic variables
//! sit at either bound), so they do not enlarge the basis. The basis inverse
//! is kept dense and updated by elementary row operations, with a fresh
//! factorisation every few dozen pivots. Pricing is Dantzig's rule, switching
//! to Bland's smallest-index rule after a run of degenerate pivots.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration-limit",
        })
    }
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    rel: Relation,
    rhs: f64,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    /// Reduced-cost and feasibility tolerance.
    pub tol: f64,
    pub max_iter: usize,
    pub refactor_every: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 100_000, refactor_every: 50 }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the structural variables. Feasible when the status is
    /// optimal, or iteration-limit reached during the second phase.
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// True when `x` satisfies every constraint.
    pub feasible: bool,
}

const PIVOT_TOL: f64 = 1e-11;
const DEGENERATE_RUN: usize = 50;

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        Self { objective: vec![0.0; n_vars], upper: vec![f64::INFINITY; n_vars], rows: vec![] }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, j: usize, c: f64) {
        self.objective[j] = c;
    }

    pub fn set_upper(&mut self, j: usize, u: f64) {
        self.upper[j] = u;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64) -> Result<()> {
        if let Some(&(j, _)) = coeffs.iter().find(|(j, _)| *j >= self.n_vars()) {
            return Err(Error::InvalidParameter(format!("variable {j} out of range")));
        }
        if !rhs.is_finite() || coeffs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::InvalidParameter("non-finite constraint data".into()));
        }
        self.rows.push(Row { coeffs, rel, rhs });
        Ok(())
    }

    /// Largest violation of a row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let v = match row.rel {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &xj) in x.iter().enumerate() {
            worst = worst.max(-xj).max(xj - self.upper[j]);
        }
        worst
    }

    pub fn solve(&self, opts: &SimplexOptions) -> Result<LpSolution> {
        if self.objective.iter().any(|c| !c.is_finite()) || self.upper.iter().any(|u| !(*u >= 0.0)) {
            return Err(Error::InvalidParameter("objective must be finite and bounds nonnegative".into()));
        }
        Tableau::build(self).run(self, opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Tableau {
    m: usize,
    n_struct: usize,
    cols: Vec<Vec<(usize, f64)>>,
    upper: Vec<f64>,
    b: Vec<f64>,
    is_artificial: Vec<bool>,
    basis: Vec<usize>,
    state: Vec<State>,
    binv: Vec<f64>,
    xb: Vec<f64>,
}

impl Tableau {
    /// Rows are sign-normalised to `b >= 0`; `<=` rows start with their
    /// slack basic, the others with an artificial.
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_struct = lp.n_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![vec![]; n_struct];
        let mut upper = lp.upper.clone();
        let mut is_artificial = vec![false; n_struct];
        let mut b = vec![0.0; m];
        let mut basis = vec![0; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let (sign, rel) = if row.rhs < 0.0 {
                let flipped = match row.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (-1.0, flipped)
            } else {
                (1.0, row.rel)
            };
            b[i] = sign * row.rhs;
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((i, sign * a));
                }
            }
            let mut push = |col: Vec<(usize, f64)>, art: bool| {
                cols.push(col);
                upper.push(f64::INFINITY);
                is_artificial.push(art);
                cols.len() - 1
            };
            match rel {
                Relation::Le => basis[i] = push(vec![(i, 1.0)], false),
                Relation::Ge => {
                    push(vec![(i, -1.0)], false);
                    basis[i] = push(vec![(i, 1.0)], true);
                }
                Relation::Eq => basis[i] = push(vec![(i, 1.0)], true),
            }
        }
        // merge duplicate entries within a column
        for col in &mut cols {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|a, b| {
                if a.0 == b.0 {
                    b.1 += a.1;
                    true
                } else {
                    false
                }
            });
        }
        let n = cols.len();
        let mut state = vec![State::AtLower; n];
        for (i, &j) in basis.iter().enumerate() {
            state[j] = State::Basic(i);
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let xb = b.clone();
        Self { m, n_struct, cols, upper, b, is_artificial, basis, state, binv, xb }
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        // Gauss-Jordan on [B | I]
        let mut a = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                a[i * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let piv = (c..m).max_by(|&x, &y| a[x * m + c].abs().total_cmp(&a[y * m + c].abs())).unwrap();
            if a[piv * m + c].abs() < 1e-14 {
                return Err(Error::Singular("simplex basis became singular".into()));
            }
            if piv != c {
                for k in 0..m {
                    a.swap(piv * m + k, c * m + k);
                    inv.swap(piv * m + k, c * m + k);
                }
            }
            let d = a[c * m + c];
            for k in 0..m {
                a[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r != c {
                    let f = a[r * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            a[r * m + k] -= f * a[c * m + k];
                            inv[r * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.recompute_xb();
        Ok(())
    }

    fn recompute_xb(&mut self) {
        let m = self.m;
        let mut rhs = self.b.clone();
        for (j, s) in self.state.iter().enumerate() {
            if *s == State::AtUpper {
                for &(i, v) in &self.cols[j] {
                    rhs[i] -= v * self.upper[j];
                }
            }
        }
        for k in 0..m {
            self.xb[k] = (0..m).map(|i| self.binv[k * m + i] * rhs[i]).sum();
        }
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        for &(i, v) in &self.cols[j] {
            for (k, o) in out.iter_mut().enumerate() {
                *o += self.binv[k * m + i] * v;
            }
        }
        out
    }

    fn value(&self, j: usize) -> f64 {
        match self.state[j] {
            State::Basic(k) => self.xb[k],
            State::AtLower => 0.0,
            State::AtUpper => self.upper[j],
        }
    }

    /// Runs simplex iterations on `cost`. Returns the final status for this
    /// phase and the iterations used.
    fn optimise(&mut self, cost: &[f64], opts: &SimplexOptions, budget: usize) -> Result<(LpStatus, usize)> {
        let m = self.m;
        let n = self.cols.len();
        let mut degenerate = 0usize;
        let mut since_refactor = 0usize;
        for it in 0..budget {
            if since_refactor >= opts.refactor_every {
                self.refactor()?;
                since_refactor = 0;
            }
            let mut y = vec![0.0; m];
            for (k, &j) in self.basis.iter().enumerate() {
                let cb = cost[j];
                if cb != 0.0 {
                    for (i, yi) in y.iter_mut().enumerate() {
                        *yi += cb * self.binv[k * m + i];
                    }
                }
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..n {
                if matches!(self.state[j], State::Basic(_)) || self.upper[j] == 0.0 {
                    continue;
                }
                let d = cost[j] - self.cols[j].iter().map(|&(i, v)| y[i] * v).sum::<f64>();
                let improving = match self.state[j] {
                    State::AtLower => d < -opts.tol,
                    State::AtUpper => d > opts.tol,
                    State::Basic(_) => false,
                };
                if improving {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok((LpStatus::Optimal, it));
            };
            let dir = if self.state[q] == State::AtLower { 1.0 } else { -1.0 };
            let alpha = self.ftran(q);
            // x_B(t) = x_B - dir t alpha
            let mut step = self.upper[q];
            let mut leave: Option<(usize, bool)> = None;
            for k in 0..m {
                let rate = dir * alpha[k];
                let bj = self.basis[k];
                let t = if rate > PIVOT_TOL {
                    (self.xb[k].max(0.0)) / rate
                } else if rate < -PIVOT_TOL && self.upper[bj].is_finite() {
                    ((self.upper[bj] - self.xb[k]).max(0.0)) / -rate
                } else {
                    continue;
                };
                let better = match leave {
                    // on ties a pivot is preferred over a bound flip
                    None => t <= step + 1e-12,
                    Some(_) if t < step - 1e-12 => true,
                    Some((l, _)) if t <= step + 1e-12 => {
                        if bland {
                            bj < self.basis[l]
                        } else {
                            alpha[k].abs() > alpha[l].abs()
                        }
                    }
                    Some(_) => false,
                };
                if better {
                    step = step.min(t);
                    leave = Some((k, rate < 0.0));
                }
            }
            if !step.is_finite() {
                return Ok((LpStatus::Unbounded, it));
            }
            degenerate = if step <= 1e-12 { degenerate + 1 } else { 0 };
            for k in 0..m {
                self.xb[k] -= dir * step * alpha[k];
            }
            match leave {
                None => {
                    // bound flip
                    self.state[q] = if dir > 0.0 { State::AtUpper } else { State::AtLower };
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    let entering_value = if dir > 0.0 { step } else { self.upper[q] - step };
                    self.state[out] = if to_upper { State::AtUpper } else { State::AtLower };
                    self.basis[r] = q;
                    self.state[q] = State::Basic(r);
                    self.xb[r] = entering_value;
                    let pr = alpha[r];
                    for i in 0..m {
                        self.binv[r * m + i] /= pr;
                    }
                    for k in 0..m {
                        if k != r && alpha[k] != 0.0 {
                            let f = alpha[k];
                            for i in 0..m {
                                self.binv[k * m + i] -= f * self.binv[r * m + i];
                            }
                        }
                    }
                    since_refactor += 1;
                }
            }
        }
        Ok((LpStatus::IterationLimit, budget))
    }

    fn run(mut self, lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpSolution> {
        let n = self.cols.len();
        let scale = self.b.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
        let phase1: Vec<f64> = (0..n).map(|j| if self.is_artificial[j] { 1.0 } else { 0.0 }).collect();
        let mut iterations = 0;
        if self.is_artificial.iter().any(|&a| a) {
            let (status, used) = self.optimise(&phase1, opts, opts.max_iter)?;
            iterations += used;
            self.refactor()?;
            let infeas: f64 = (0..n).filter(|&j| self.is_artificial[j]).map(|j| self.value(j)).sum();
            match status {
                LpStatus::IterationLimit => return Ok(self.finish(lp, LpStatus::IterationLimit, iterations)),
                _ if infeas > opts.tol * scale.max(1.0) * 10.0 => {
                    return Ok(self.finish(lp, LpStatus::Infeasible, iterations));
                }
                _ => {}
            }
            // artificials stay in the problem pinned at zero
            for j in 0..n {
                if self.is_artificial[j] {
                    self.upper[j] = 0.0;
                }
            }
        }
        let mut cost = lp.objective.clone();
        cost.resize(n, 0.0);
        let (status, used) = self.optimise(&cost, opts, opts.max_iter.saturating_sub(iterations))?;
        iterations += used;
        self.refactor()?;
        Ok(self.finish(lp, status, iterations))
    }

    fn finish(&self, lp: &LinearProgram, status: LpStatus, iterations: usize) -> LpSolution {
        let x: Vec<f64> = (0..self.n_struct).map(|j| self.value(j).clamp(0.0, self.upper[j])).collect();
        let objective = x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum();
        let feasible = lp.max_violation(&x) <= 1e-7;
        LpSolution { status, x, objective, iterations, feasible }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions::default()
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -3.0);
        lp.set_objective(1, -5.0);
        lp.add_constraint(vec![(0, 1.0)], Relation::Le, 4.0).unwrap();
        lp.add_constraint(vec![(1, 2.0)], Relation::Le, 12.0).unwrap();
        lp.add_constraint(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0).unwrap();
        let s = lp.solve(&opts()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y s.t. x + y = 3, x - y >= -1, x <= 1.5 (bound)
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 1.0);
        lp.set_objective(1, 2.0);
        lp.set_upper(0, 1.5);
        lp.add_constraint(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 3.0).unwrap();
        lp.add_constraint(vec![(0, 1.0), (1, -1.0)], Relation::Ge, -1.0).unwrap();
        let s = lp.solve(&opts()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 4.5).abs() < 1e-9, "{s:?}");
        assert!(s.feasible);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![(0, 1.0)], Relation::Ge, 2.0).unwrap();
        lp.add_constraint(vec![(0, 1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve(&opts()).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -1.0);
        lp.add_constraint(vec![(0, 1.0), (1, -1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve(&opts()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn bounded_variables_flip() {
        // min -x - y with x, y in [0, 1] and no rows
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -1.0);
        lp.set_objective(1, -1.0);
        lp.set_upper(0, 1.0);
        lp.set_upper(1, 1.0);
        let s = lp.solve(&opts()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook rule
        let mut lp = LinearProgram::new(4);
        for (j, c) in [-0.75, 150.0, -0.02, 6.0].into_iter().enumerate() {
            lp.set_objective(j, c);
        }
        lp.add_constraint(vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![(2, 1.0)], Relation::Le, 1.0).unwrap();
        let s = lp.solve(&opts()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_reported() {
        let mut lp = LinearProgram::new(3);
        for j in 0..3 {
            lp.set_objective(j, -1.0 - j as f64);
            lp.add_constraint(vec![(j, 1.0)], Relation::Le, 1.0).unwrap();
        }
        lp.add_constraint(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Relation::Le, 2.0).unwrap();
        let s = lp.solve(&SimplexOptions { max_iter: 1, ..opts() }).unwrap();
        assert_eq!(s.status, LpStatus::IterationLimit);
        assert!(s.feasible);
    }

    #[test]
    fn rejects_bad_data() {
        let mut lp = LinearProgram::new(1);
        assert!(lp.add_constraint(vec![(3, 1.0)], Relation::Le, 1.0).is_err());
        assert!(lp.add_constraint(vec![(0, f64::NAN)], Relation::Le, 1.0).is_err());
    }
}
