//! Deterministic derivative-free minimization over the measurement sphere.
//!
//! A coarse lattice over `θ ∈ [0, π] × φ ∈ [0, 2π]` seeds a compass search
//! whose step halves whenever no axis move improves the objective.

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSearch {
    pub theta_points: usize,
    pub phi_points: usize,
    /// Compass search stops once both steps are below this.
    pub min_step: f64,
    pub max_iterations: usize,
}

impl Default for AngleSearch {
    fn default() -> Self {
        Self {
            theta_points: 65,
            phi_points: 129,
            min_step: 1e-7,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleMinimum {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    /// Best value seen on the coarse lattice.
    pub grid_value: f64,
    pub evaluations: usize,
}

fn wrap_phi(phi: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = phi.rem_euclid(tau);
    if w.is_finite() {
        w
    } else {
        0.0
    }
}

impl AngleSearch {
    pub fn minimize<F>(&self, objective: F) -> AngleMinimum
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        use std::f64::consts::{PI, TAU};
        let nt = self.theta_points.max(2);
        let np = self.phi_points.max(2);
        let theta_step = PI / (nt - 1) as f64;
        let phi_step = TAU / (np - 1) as f64;

        let values: Vec<f64> = (0..nt * np)
            .into_par_iter()
            .map(|k| objective((k / np) as f64 * theta_step, (k % np) as f64 * phi_step))
            .collect();
        // index order is lexicographic in (θ, φ); strict `<` keeps the first
        let (best_k, grid_value) = values
            .iter()
            .enumerate()
            .fold((0usize, f64::INFINITY), |(bk, bv), (k, &v)| {
                if v < bv {
                    (k, v)
                } else {
                    (bk, bv)
                }
            });

        let mut theta = (best_k / np) as f64 * theta_step;
        let mut phi = (best_k % np) as f64 * phi_step;
        let mut value = grid_value;
        let mut st = theta_step;
        let mut sp = phi_step;
        let mut evaluations = values.len();
        let mut iterations = 0;

        while (st >= self.min_step || sp >= self.min_step) && iterations < self.max_iterations {
            iterations += 1;
            let candidates = [
                ((theta + st).min(PI), phi),
                ((theta - st).max(0.0), phi),
                (theta, wrap_phi(phi + sp)),
                (theta, wrap_phi(phi - sp)),
            ];
            let mut moved = false;
            for (t, p) in candidates {
                let v = objective(t, p);
                evaluations += 1;
                if v < value {
                    theta = t;
                    phi = p;
                    value = v;
                    moved = true;
                }
            }
            if !moved {
                st *= 0.5;
                sp *= 0.5;
            }
        }

        AngleMinimum {
            theta,
            phi,
            value,
            grid_value,
            evaluations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finds_interior_minimum() {
        let f = |t: f64, p: f64| (t - 1.234).powi(2) + (p - 4.321).powi(2);
        let m = AngleSearch::default().minimize(f);
        assert!((m.theta - 1.234).abs() < 1e-6);
        assert!((m.phi - 4.321).abs() < 1e-6);
        assert!(m.value <= m.grid_value);
    }

    #[test]
    fn respects_theta_bounds() {
        let f = |t: f64, _p: f64| -t;
        let m = AngleSearch::default().minimize(f);
        assert!((m.theta - PI).abs() < 1e-12);
    }

    #[test]
    fn flat_objective_picks_origin() {
        let m = AngleSearch::default().minimize(|_, _| 1.0);
        assert_eq!((m.theta, m.phi), (0.0, 0.0));
    }

    #[test]
    fn minimum_across_phi_wrap() {
        // periodic in φ with the minimum at φ = 0 ≡ 2π
        let f = |t: f64, p: f64| (t - 0.5).powi(2) - p.cos();
        let m = AngleSearch::default().minimize(f);
        assert!(m.value + 1.0 < 1e-10);
    }
}
