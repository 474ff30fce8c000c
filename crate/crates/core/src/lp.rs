//! Generic dense-ish linear programs and the interior-point backend.
//!
//! The solver minimizes over boxed variables subject to sparse `<=` / `=`
//! rows. It is deterministic for identical inputs and converges to the
//! analytic center of the optimal face, so degenerate optima come back as
//! interior points of that face rather than an arbitrary vertex.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::error::{Error, Result};

/// Feasibility tolerance honored by reported optimal solutions.
pub const EPS_LP: f64 = 1e-8;

/// Row relation: `<=` or `=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

/// One linear row `sum coef * x_var  rel  rhs`.
#[derive(Debug, Clone)]
pub struct LpRow {
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program in minimization form.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<LpRow>,
    bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// Creates a program with a zero objective and free variables.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn set_objective(&mut self, objective: Vec<f64>) -> Result<()> {
        if objective.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: objective.len(),
            });
        }
        self.objective = objective;
        Ok(())
    }

    pub fn set_objective_term(&mut self, var: usize, coef: f64) -> Result<()> {
        self.check_var(var)?;
        self.objective[var] = coef;
        Ok(())
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Result<()> {
        for &(var, coef) in &terms {
            self.check_var(var)?;
            if !coef.is_finite() {
                return Err(Error::MalformedProgram(format!(
                    "non-finite coefficient on variable {var}"
                )));
            }
        }
        if !rhs.is_finite() {
            return Err(Error::MalformedProgram("non-finite right-hand side".into()));
        }
        self.rows.push(LpRow { terms, relation, rhs });
        Ok(())
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) -> Result<()> {
        self.check_var(var)?;
        if lo > hi || lo.is_nan() || hi.is_nan() {
            return Err(Error::MalformedProgram(format!(
                "invalid bounds [{lo}, {hi}] on variable {var}"
            )));
        }
        self.bounds[var] = (lo, hi);
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.num_vars {
            return Err(Error::MalformedProgram(format!(
                "variable index {var} out of range for {} variables",
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Worst violation of the rows and bounds at `x`. Used to vet reported
    /// solutions and by tests that substitute known feasible points.
    pub fn max_violation(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            let value: f64 = row.terms.iter().map(|&(v, c)| c * x[v]).sum();
            let violation = match row.relation {
                Relation::Le => value - row.rhs,
                Relation::Eq => (value - row.rhs).abs(),
            };
            worst = worst.max(violation);
        }
        for (var, &(lo, hi)) in self.bounds.iter().enumerate() {
            worst = worst.max(lo - x[var]).max(x[var] - hi);
        }
        Ok(worst)
    }

    /// Objective value at `x`.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Outcome classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output; `values` is empty unless the status is `Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
}

/// Solves the program with the interior-point backend.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    if lp.num_vars == 0 {
        return Err(Error::MalformedProgram("program has no variables".into()));
    }
    if lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::MalformedProgram("non-finite objective".into()));
    }

    // Assemble the conic form A x + s = b with s in (Zero x Nonnegative):
    // equality rows first, then `<=` rows, then finite bounds as extra
    // inequality rows.
    #[derive(Default)]
    struct Triplets {
        rows: Vec<usize>,
        cols: Vec<usize>,
        values: Vec<f64>,
        rhs: Vec<f64>,
    }

    impl Triplets {
        fn push_row(&mut self, terms: &[(usize, f64)], rhs: f64) {
            let row = self.rhs.len();
            for &(var, coef) in terms {
                self.rows.push(row);
                self.cols.push(var);
                self.values.push(coef);
            }
            self.rhs.push(rhs);
        }
    }

    let mut triplets = Triplets::default();
    let num_eq = lp.rows.iter().filter(|r| r.relation == Relation::Eq).count();
    for row in lp.rows.iter().filter(|r| r.relation == Relation::Eq) {
        triplets.push_row(&row.terms, row.rhs);
    }
    let mut num_ineq = 0usize;
    for row in lp.rows.iter().filter(|r| r.relation == Relation::Le) {
        triplets.push_row(&row.terms, row.rhs);
        num_ineq += 1;
    }
    for (var, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if hi.is_finite() {
            triplets.push_row(&[(var, 1.0)], hi);
            num_ineq += 1;
        }
        if lo.is_finite() {
            triplets.push_row(&[(var, -1.0)], -lo);
            num_ineq += 1;
        }
    }

    let b = triplets.rhs;
    let a = CscMatrix::new_from_triplets(
        b.len(),
        lp.num_vars,
        triplets.rows,
        triplets.cols,
        triplets.values,
    );
    let p = CscMatrix::zeros((lp.num_vars, lp.num_vars));
    let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
    if num_eq > 0 {
        cones.push(SupportedConeT::ZeroConeT(num_eq));
    }
    if num_ineq > 0 {
        cones.push(SupportedConeT::NonnegativeConeT(num_ineq));
    }

    let settings = DefaultSettings {
        verbose: false,
        max_iter: 200,
        tol_gap_abs: 1e-10,
        tol_gap_rel: 1e-10,
        tol_feas: 1e-10,
        ..DefaultSettings::default()
    };

    let mut solver = DefaultSolver::new(&p, &lp.objective, &a, &b, &cones, settings);
    solver.solve();
    let solution = &solver.solution;

    match solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            let values = solution.x.clone();
            let violation = lp.max_violation(&values)?;
            if violation > EPS_LP {
                return Err(Error::SolverFailure(format!(
                    "reported optimum violates constraints by {violation:.3e}"
                )));
            }
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective_value: lp.objective_at(&values),
                values,
            })
        }
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => Ok(LpSolution {
            status: LpStatus::Infeasible,
            values: Vec::new(),
            objective_value: f64::NAN,
        }),
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective_value: f64::NAN,
        }),
        other => Err(Error::SolverFailure(format!("solver stopped with {other:?}"))),
    }
}
