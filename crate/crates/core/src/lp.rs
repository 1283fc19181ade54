//! Discretised minimax linear program over the probability simplex.
//!
//! Minimise `t` subject to `rows[s] . alpha <= t` for every sample `s`,
//! `sum alpha = 1`, `alpha >= 0`, and optional extra equalities.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

/// Linear equality `coeffs . alpha = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// Optimal `(t, alpha)` of the minimax program.
pub fn minimize_max(rows: &[Vec<f64>], equalities: &[Equality]) -> Result<(f64, Vec<f64>)> {
    let k = rows.first().map_or(0, |r| r.len());
    if k == 0 {
        return Err(Error::precondition("empty linear program"));
    }
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let alpha: Vec<_> = (0..k).map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let t = pb.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for row in rows {
        let mut expr: Vec<_> = alpha.iter().zip(row).filter(|(_, c)| **c != 0.0).map(|(v, c)| (*v, *c)).collect();
        expr.push((t, -1.0));
        pb.add_constraint(&expr[..], ComparisonOp::Le, 0.0);
    }
    let ones: Vec<_> = alpha.iter().map(|v| (*v, 1.0)).collect();
    pb.add_constraint(&ones[..], ComparisonOp::Eq, 1.0);
    for eq in equalities {
        let expr: Vec<_> = alpha.iter().zip(&eq.coeffs).map(|(v, c)| (*v, *c)).collect();
        pb.add_constraint(&expr[..], ComparisonOp::Eq, eq.rhs);
    }
    match pb.solve() {
        Ok(sol) => Ok((sol[t], alpha.iter().map(|v| sol[*v].max(0.0)).collect())),
        Err(minilp::Error::Infeasible) => Err(Error::Infeasible),
        Err(minilp::Error::Unbounded) => Err(Error::UnboundedBelow),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_lines() {
        // max(a - b, b - a) minimised at a = b = 1/2
        let rows = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        let (t, a) = minimize_max(&rows, &[]).unwrap();
        assert!(t.abs() < 1e-9);
        assert!((a[0] - 0.5).abs() < 1e-9 && (a[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn equality_and_infeasible() {
        let rows = vec![vec![1.0, 2.0]];
        let (t, a) = minimize_max(&rows, &[Equality { coeffs: vec![0.0, 1.0], rhs: 0.25 }]).unwrap();
        assert!((a[1] - 0.25).abs() < 1e-9);
        assert!((t - 1.25).abs() < 1e-9);
        let bad = Equality { coeffs: vec![1.0, 1.0], rhs: 2.0 };
        assert!(matches!(minimize_max(&rows, &[bad]), Err(Error::Infeasible)));
    }
}
