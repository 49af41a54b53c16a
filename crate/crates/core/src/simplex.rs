//! Dense two-phase simplex with Bland's least-index rule.
//!
//! Intended for exact field types; every comparison against zero is exact.
//! Free variables are split into positive and negative parts.

use num_traits::RefNum;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Field> Constraint<T>
where
    for<'a> &'a T: RefNum<T>,
{
    pub fn new(coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, point: &[T]) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (v, c)| acc + c.clone() * point[*v].clone())
    }

    pub fn is_satisfied_by(&self, point: &[T]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// Maximize `objective · x` subject to `constraints`; variables are
/// non-negative unless marked free.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub free: Vec<bool>,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

impl<T: Field> LinearProgram<T>
where
    for<'a> &'a T: RefNum<T>,
{
    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.objective.len() != n {
            return Err(Error::MalformedSystem(format!(
                "objective has {} coefficients for {n} variables",
                self.objective.len()
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(Error::MalformedSystem(format!(
                    "constraint {k} references undeclared variable {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome<T>> {
        self.check()?;
        Ok(Tableau::build(self).run(self))
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
    /// Structural column for each original variable, and its negative part if free.
    columns: Vec<(usize, Option<usize>)>,
}

impl<T: Field> Tableau<T>
where
    for<'a> &'a T: RefNum<T>,
{
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars());
        let mut width = 0;
        for &free in &lp.free {
            let pos = width;
            width += 1;
            let neg = free.then(|| {
                width += 1;
                width - 1
            });
            columns.push((pos, neg));
        }
        let structural = width;
        // Slack per inequality, then artificials where no slack can start basic.
        let m = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        let mut slack_col = structural;
        let mut needs_artificial = Vec::new();
        for (r, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![T::zero(); structural + slack_count];
            for (v, coef) in &c.coeffs {
                let (pos, neg) = columns[*v];
                row[pos] = row[pos].clone() + coef.clone();
                if let Some(neg) = neg {
                    row[neg] = row[neg].clone() - coef.clone();
                }
            }
            let mut b = c.rhs.clone();
            let slack = match c.relation {
                Relation::Le => Some((slack_col, T::one())),
                Relation::Ge => Some((slack_col, -T::one())),
                Relation::Eq => None,
            };
            if let Some((col, sign)) = slack.clone() {
                row[col] = sign;
                slack_col += 1;
            }
            // Negated `>= 0` rows can start with their slack basic.
            if b < T::zero() || (b.is_zero() && c.relation == Relation::Ge) {
                row.iter_mut().for_each(|v| *v = -v.clone());
                b = -b;
            }
            match slack {
                Some((col, _)) if row[col] == T::one() => basis[r] = col,
                _ => needs_artificial.push(r),
            }
            rows.push(row);
            rhs.push(b);
        }
        let base_width = structural + slack_count;
        let total = base_width + needs_artificial.len();
        for row in &mut rows {
            row.resize(total, T::zero());
        }
        for (k, &r) in needs_artificial.iter().enumerate() {
            rows[r][base_width + k] = T::one();
            basis[r] = base_width + k;
        }
        let mut allowed = vec![true; total];
        allowed[base_width..].iter_mut().for_each(|a| *a = false);
        Tableau {
            rows,
            rhs,
            basis,
            allowed,
            columns,
        }
    }

    fn width(&self) -> usize {
        self.allowed.len()
    }

    fn pivot(&mut self, pr: usize, pc: usize, costs: &mut [T], value: &mut T) {
        let pivot = self.rows[pr][pc].clone();
        if !pivot.is_one() {
            for v in self.rows[pr].iter_mut().filter(|v| !v.is_zero()) {
                *v = &*v / &pivot;
            }
            self.rhs[pr] = &self.rhs[pr] / &pivot;
        }
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let pivot_rhs = self.rhs[pr].clone();
        for r in 0..self.rows.len() {
            if r == pr || self.rows[r][pc].is_zero() {
                continue;
            }
            let factor = self.rows[r][pc].clone();
            let row = &mut self.rows[r];
            for &j in &nonzero {
                row[j] = &row[j] - &(&factor * &pivot_row[j]);
            }
            if !pivot_rhs.is_zero() {
                self.rhs[r] = &self.rhs[r] - &(&factor * &pivot_rhs);
            }
        }
        if !costs[pc].is_zero() {
            let factor = costs[pc].clone();
            for &j in &nonzero {
                costs[j] = &costs[j] - &(&factor * &pivot_row[j]);
            }
            *value = &*value + &(&factor * &pivot_rhs);
        }
        self.rows[pr] = pivot_row;
        self.basis[pr] = pc;
    }

    /// Reduced costs and objective value for column costs `c`.
    fn price(&self, c: &[T]) -> (Vec<T>, T) {
        let mut costs = c.to_vec();
        let mut value = T::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    costs[j] = costs[j].clone() - cb.clone() * v.clone();
                }
            }
            value = value + cb.clone() * self.rhs[r].clone();
        }
        (costs, value)
    }

    /// Runs Bland-rule pivots to optimality. Returns false if unbounded.
    fn optimize(&mut self, costs: &mut [T], value: &mut T) -> bool {
        loop {
            let Some(pc) = (0..self.width()).find(|&j| self.allowed[j] && costs[j] > T::zero())
            else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if *a <= T::zero() {
                    continue;
                }
                // Most rows are homogeneous; skip the division for them.
                let ratio = if self.rhs[r].is_zero() {
                    T::zero()
                } else {
                    &self.rhs[r] / a
                };
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc, costs, value);
        }
    }

    fn run(mut self, lp: &LinearProgram<T>) -> LpOutcome<T> {
        let width = self.width();
        let first_artificial = self.allowed.iter().position(|a| !a).unwrap_or(width);
        if first_artificial < width {
            let phase_one: Vec<T> = (0..width)
                .map(|j| {
                    if j >= first_artificial {
                        -T::one()
                    } else {
                        T::zero()
                    }
                })
                .collect();
            let (mut costs, mut value) = self.price(&phase_one);
            self.optimize(&mut costs, &mut value);
            if value < T::zero() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-valued artificials out of the basis, dropping redundant rows.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= first_artificial {
                    match (0..first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(pc) => self.pivot(r, pc, &mut costs, &mut value),
                        None => {
                            self.rows.remove(r);
                            self.rhs.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let mut c = vec![T::zero(); width];
        for (v, &(pos, neg)) in self.columns.iter().enumerate() {
            c[pos] = lp.objective[v].clone();
            if let Some(neg) = neg {
                c[neg] = -lp.objective[v].clone();
            }
        }
        let (mut costs, mut value) = self.price(&c);
        if !self.optimize(&mut costs, &mut value) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![T::zero(); width];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[r].clone();
        }
        let point = self
            .columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => x[pos].clone() - x[neg].clone(),
                None => x[pos].clone(),
            })
            .collect();
        LpOutcome::Optimal { value, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn r(n: i64) -> Rational {
        q(n, 1)
    }

    fn lp(
        free: Vec<bool>,
        objective: Vec<Rational>,
        constraints: Vec<Constraint<Rational>>,
    ) -> LinearProgram<Rational> {
        LinearProgram {
            free,
            objective,
            constraints,
        }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let p = lp(
            vec![false, false],
            vec![r(3), r(5)],
            vec![
                Constraint::new(vec![(0, r(1))], Relation::Le, r(4)),
                Constraint::new(vec![(1, r(2))], Relation::Le, r(12)),
                Constraint::new(vec![(0, r(3)), (1, r(2))], Relation::Le, r(18)),
            ],
        );
        assert_eq!(
            p.solve().unwrap(),
            LpOutcome::Optimal {
                value: r(36),
                point: vec![r(2), r(6)]
            }
        );
    }

    #[test]
    fn equality_and_ge_rows_use_phase_one() {
        // max x + y, x + 2y = 3, x >= 1/2, y >= 1/3 -> x = 7/3, y = 1/3.
        let p = lp(
            vec![false, false],
            vec![r(1), r(1)],
            vec![
                Constraint::new(vec![(0, r(1)), (1, r(2))], Relation::Eq, r(3)),
                Constraint::new(vec![(0, r(1))], Relation::Ge, q(1, 2)),
                Constraint::new(vec![(1, r(1))], Relation::Ge, q(1, 3)),
            ],
        );
        assert_eq!(
            p.solve().unwrap(),
            LpOutcome::Optimal {
                value: q(8, 3),
                point: vec![q(7, 3), q(1, 3)]
            }
        );
    }

    #[test]
    fn free_variables_go_negative() {
        // max t, t <= x - 2, x <= 1 with t free -> t = -1.
        let p = lp(
            vec![true, false],
            vec![r(1), r(0)],
            vec![
                Constraint::new(vec![(0, r(1)), (1, r(-1))], Relation::Le, r(-2)),
                Constraint::new(vec![(1, r(1))], Relation::Le, r(1)),
            ],
        );
        assert_eq!(
            p.solve().unwrap(),
            LpOutcome::Optimal {
                value: r(-1),
                point: vec![r(-1), r(1)]
            }
        );
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = lp(
            vec![false],
            vec![r(1)],
            vec![
                Constraint::new(vec![(0, r(1))], Relation::Ge, r(2)),
                Constraint::new(vec![(0, r(1))], Relation::Le, r(1)),
            ],
        );
        assert_eq!(infeasible.solve().unwrap(), LpOutcome::Infeasible);
        let unbounded = lp(
            vec![false],
            vec![r(1)],
            vec![Constraint::new(vec![(0, r(1))], Relation::Ge, r(1))],
        );
        assert_eq!(unbounded.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let p = lp(
            vec![false, false],
            vec![r(1), r(0)],
            vec![
                Constraint::new(vec![(0, r(1)), (1, r(1))], Relation::Eq, r(1)),
                Constraint::new(vec![(0, r(2)), (1, r(2))], Relation::Eq, r(2)),
            ],
        );
        assert_eq!(
            p.solve().unwrap(),
            LpOutcome::Optimal {
                value: r(1),
                point: vec![r(1), r(0)]
            }
        );
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example cycles under the largest-coefficient rule.
        let p = lp(
            vec![false; 4],
            vec![q(3, 4), r(-150), q(1, 50), r(-6)],
            vec![
                Constraint::new(
                    vec![(0, q(1, 4)), (1, r(-60)), (2, q(-1, 25)), (3, r(9))],
                    Relation::Le,
                    r(0),
                ),
                Constraint::new(
                    vec![(0, q(1, 2)), (1, r(-90)), (2, q(-1, 50)), (3, r(3))],
                    Relation::Le,
                    r(0),
                ),
                Constraint::new(vec![(2, r(1))], Relation::Le, r(1)),
            ],
        );
        match p.solve().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 20)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn works_over_floats_for_integral_data() {
        let p = LinearProgram {
            free: vec![false, false],
            objective: vec![1.0f64, 1.0],
            constraints: vec![Constraint::new(vec![(0, 1.0), (1, 2.0)], Relation::Le, 4.0)],
        };
        assert_eq!(
            p.solve().unwrap(),
            LpOutcome::Optimal {
                value: 4.0,
                point: vec![4.0, 0.0]
            }
        );
    }

    #[test]
    fn rejects_undeclared_variables() {
        let p = lp(
            vec![false],
            vec![r(1)],
            vec![Constraint::new(vec![(3, r(1))], Relation::Le, r(1))],
        );
        assert!(matches!(p.solve(), Err(Error::MalformedSystem(_))));
        assert!(Rational::zero().is_zero());
    }
}
