//! Scalar abstraction and the numeric kernels built on it.
//!
//! Everything here is generic over [`Scalar`] so the same code serves f32
//! and f64; the rest of the crate pins the concrete type via [`crate::Real`].

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Floating-point scalar usable by the numeric kernels.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from a literal. Panics only for non-finite input,
    /// which never occurs for the constants used in this crate.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Explicit fixed-step integration methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegrationMethod {
    Euler,
    #[default]
    Rk4,
}

#[derive(Debug, Error, PartialEq)]
pub enum IntegrationError<E> {
    /// A derivative or state component left the finite range.
    #[error("non-finite value encountered during integration")]
    NonFinite,
    #[error(transparent)]
    Inner(E),
}

/// Fixed-step explicit integrator with reusable stage buffers.
#[derive(Debug, Clone)]
pub struct FixedStepIntegrator<S> {
    method: IntegrationMethod,
    k1: Vec<S>,
    k2: Vec<S>,
    k3: Vec<S>,
    k4: Vec<S>,
    stage: Vec<S>,
}

impl<S: Scalar> FixedStepIntegrator<S> {
    pub fn new(method: IntegrationMethod, dim: usize) -> Self {
        Self {
            method,
            k1: vec![S::zero(); dim],
            k2: vec![S::zero(); dim],
            k3: vec![S::zero(); dim],
            k4: vec![S::zero(); dim],
            stage: vec![S::zero(); dim],
        }
    }

    pub fn method(&self) -> IntegrationMethod {
        self.method
    }

    /// Advance `x` in place from `t` to `t + h`. The derivative callback
    /// writes `dx/dt` for the supplied `(t, x)` into its output slice.
    pub fn step<F, E>(&mut self, f: &mut F, t: S, x: &mut [S], h: S) -> Result<(), IntegrationError<E>>
    where
        F: FnMut(S, &[S], &mut [S]) -> Result<(), E>,
    {
        let n = x.len();
        debug_assert_eq!(n, self.k1.len());
        match self.method {
            IntegrationMethod::Euler => {
                f(t, x, &mut self.k1).map_err(IntegrationError::Inner)?;
                check_finite(&self.k1)?;
                for i in 0..n {
                    x[i] = x[i] + h * self.k1[i];
                }
            }
            IntegrationMethod::Rk4 => {
                let half = S::lit(0.5);
                let sixth = S::one() / S::lit(6.0);
                let two = S::lit(2.0);

                f(t, x, &mut self.k1).map_err(IntegrationError::Inner)?;
                for i in 0..n {
                    self.stage[i] = x[i] + half * h * self.k1[i];
                }
                f(t + half * h, &self.stage, &mut self.k2).map_err(IntegrationError::Inner)?;
                for i in 0..n {
                    self.stage[i] = x[i] + half * h * self.k2[i];
                }
                f(t + half * h, &self.stage, &mut self.k3).map_err(IntegrationError::Inner)?;
                for i in 0..n {
                    self.stage[i] = x[i] + h * self.k3[i];
                }
                f(t + h, &self.stage, &mut self.k4).map_err(IntegrationError::Inner)?;
                check_finite(&self.k1)?;
                check_finite(&self.k4)?;
                for i in 0..n {
                    x[i] = x[i]
                        + h * sixth * (self.k1[i] + two * self.k2[i] + two * self.k3[i] + self.k4[i]);
                }
            }
        }
        check_finite(x)?;
        Ok(())
    }
}

fn check_finite<S: Scalar, E>(values: &[S]) -> Result<(), IntegrationError<E>> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(IntegrationError::NonFinite)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("singular matrix in linear solve")]
pub struct SingularMatrix;

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major, `b` is overwritten with the solution.
pub fn solve_dense<S: Scalar>(a: &mut [Vec<S>], b: &mut [S]) -> Result<(), SingularMatrix> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col][col].abs();
        for row in col + 1..n {
            let mag = a[row][col].abs();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if !(best > S::lit(1e-300)) {
            return Err(SingularMatrix);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == S::zero() {
                continue;
            }
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] = a[row][k] - sub;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut sum = b[row];
        for k in row + 1..n {
            sum = sum - a[row][k] * b[k];
        }
        b[row] = sum / a[row][row];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(_t: f64, x: &[f64], dx: &mut [f64]) -> Result<(), ()> {
        dx[0] = -x[0];
        Ok(())
    }

    fn integrate_decay(method: IntegrationMethod, h: f64) -> f64 {
        let mut integ = FixedStepIntegrator::new(method, 1);
        let mut x = [1.0];
        let steps = (1.0 / h).round() as usize;
        for k in 0..steps {
            integ
                .step(&mut decay, k as f64 * h, &mut x, h)
                .expect("finite");
        }
        x[0]
    }

    #[test]
    fn one_euler_step_is_exact_arithmetic() {
        let mut integ = FixedStepIntegrator::new(IntegrationMethod::Euler, 1);
        let mut x = [1.0];
        integ.step(&mut decay, 0.0, &mut x, 0.1).unwrap();
        assert_eq!(x[0], 0.9);
    }

    #[test]
    fn one_rk4_step_matches_exponential() {
        let mut integ = FixedStepIntegrator::new(IntegrationMethod::Rk4, 1);
        let mut x = [1.0];
        integ.step(&mut decay, 0.0, &mut x, 0.1).unwrap();
        assert!((x[0] - 0.904_837_4_f64).abs() < 1e-6);
    }

    #[test]
    fn zero_dynamics_leave_state_unchanged() {
        let mut zero = |_t: f64, _x: &[f64], dx: &mut [f64]| -> Result<(), ()> {
            dx[0] = 0.0;
            Ok(())
        };
        for method in [IntegrationMethod::Euler, IntegrationMethod::Rk4] {
            let mut integ = FixedStepIntegrator::new(method, 1);
            let mut x = [0.37];
            integ.step(&mut zero, 0.0, &mut x, 0.5).unwrap();
            assert_eq!(x[0], 0.37);
        }
    }

    #[test]
    fn convergence_orders_over_unit_interval() {
        // Halving the step must shrink the global error by ~16x for RK4 and
        // ~2x for Euler, across three successive halvings.
        let exact = (-1.0_f64).exp();
        for (method, lo, hi) in [
            (IntegrationMethod::Rk4, 12.0, 20.0),
            (IntegrationMethod::Euler, 1.8, 2.2),
        ] {
            let mut h = 0.1;
            let mut prev_err = (integrate_decay(method, h) - exact).abs();
            for _ in 0..3 {
                h /= 2.0;
                let err = (integrate_decay(method, h) - exact).abs();
                let factor = prev_err / err;
                assert!(
                    factor >= lo && factor <= hi,
                    "{method:?}: factor {factor} outside [{lo}, {hi}]"
                );
                prev_err = err;
            }
        }
    }

    #[test]
    fn non_finite_derivative_is_an_error() {
        let mut blow_up = |_t: f64, _x: &[f64], dx: &mut [f64]| -> Result<(), ()> {
            dx[0] = f64::NAN;
            Ok(())
        };
        let mut integ = FixedStepIntegrator::new(IntegrationMethod::Euler, 1);
        let mut x = [1.0];
        assert_eq!(
            integ.step(&mut blow_up, 0.0, &mut x, 0.1),
            Err(IntegrationError::NonFinite)
        );
    }

    #[test]
    fn dense_solve_recovers_known_solution() {
        let mut a = vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 4.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ];
        let x_true = [0.5, -1.0, 2.0];
        let mut b = [0.0; 3];
        for i in 0..3 {
            b[i] = (0..3).map(|j| a[i][j] * x_true[j]).sum();
        }
        solve_dense(&mut a, &mut b).unwrap();
        for i in 0..3 {
            assert!((b[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_system_is_rejected() {
        let mut a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        let mut b = [1.0, 2.0];
        assert_eq!(solve_dense(&mut a, &mut b), Err(SingularMatrix));
    }

    #[test]
    fn generic_over_f32() {
        let mut integ = FixedStepIntegrator::<f32>::new(IntegrationMethod::Rk4, 1);
        let mut x = [1.0_f32];
        let mut f = |_t: f32, x: &[f32], dx: &mut [f32]| -> Result<(), ()> {
            dx[0] = -x[0];
            Ok(())
        };
        integ.step(&mut f, 0.0, &mut x, 0.1).unwrap();
        assert!((x[0] - 0.904_837_4_f32).abs() < 1e-5);
    }
}
