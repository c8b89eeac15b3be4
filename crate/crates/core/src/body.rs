//! Brute-force maximization over the two-coefficient body.
//!
//! Every functional handled here is invariant under the rotation
//! `(c1, c2) -> (e^{it} c1, e^{2it} c2)`, so the search runs over the reduced
//! chart `zeta1 = x` in `[0, 1]`, `zeta2 = rho e^{i phi}`.
//!
//! The search is nested. For a fixed `x` the inner problem over `zeta2` is
//! solved by a `rho x phi` grid followed by a 3x3 stencil search with step
//! halving. The outer problem over `x` uses a grid of inner optima followed by
//! a one-dimensional pattern search. Nesting matters: the maxima of the
//! moduli-difference functionals typically sit on a conical ridge where the
//! inner modulus vanishes, and a joint three-dimensional stencil stalls there.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::caratheodory::{coeffs_from_schur, CaratheodoryPoint};
use crate::error::{Error, Result};

pub const MIN_GRID: usize = 32;

/// Hard cap on accepted moves per pattern search.
const MAX_MOVES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodySearch {
    pub x_steps: usize,
    pub rho_steps: usize,
    pub phi_steps: usize,
    /// Number of step halvings in each refinement.
    pub rounds: usize,
    pub initial_step: f64,
    /// Number of coarse-grid winners refined in the outer search.
    pub starts: usize,
}

impl Default for BodySearch {
    fn default() -> Self {
        Self {
            x_steps: 96,
            rho_steps: 48,
            phi_steps: 96,
            rounds: 40,
            initial_step: 0.05,
            starts: 3,
        }
    }
}

/// A point of the reduced chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub x: f64,
    pub rho: f64,
    pub phi: f64,
}

impl ReducedPoint {
    pub fn coeffs(&self) -> (Complex64, Complex64) {
        coeffs_from_schur(
            Complex64::new(self.x, 0.0),
            Complex64::from_polar(self.rho, self.phi),
        )
    }

    pub fn to_point(&self) -> CaratheodoryPoint {
        CaratheodoryPoint::from_reduced(self.x, self.rho, self.phi)
            .expect("search keeps points inside the chart")
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then(self.rho.total_cmp(&other.rho))
            .then(self.phi.total_cmp(&other.phi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyMaximum {
    pub value: f64,
    pub at: ReducedPoint,
    pub c1: Complex64,
    pub c2: Complex64,
    /// Best value after the coarse grid, then after every outer halving.
    pub history: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    at: ReducedPoint,
}

impl Candidate {
    /// Larger value wins; exact ties go to the lexicographically smaller point.
    fn beats(&self, other: &Self) -> bool {
        match self.value.total_cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.at.lex_cmp(&other.at) == Ordering::Less,
        }
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

impl BodySearch {
    /// Grid of `grid x grid/2 x grid` points in `(x, rho, phi)`.
    pub fn with_grid(grid: usize) -> Result<Self> {
        if grid < MIN_GRID {
            return Err(Error::GridTooSmall(grid, MIN_GRID));
        }
        Ok(Self {
            x_steps: grid,
            rho_steps: grid / 2,
            phi_steps: grid,
            ..Self::default()
        })
    }

    fn validate(&self) -> Result<()> {
        if self.x_steps < MIN_GRID {
            return Err(Error::GridTooSmall(self.x_steps, MIN_GRID));
        }
        if self.rho_steps < 2 || self.phi_steps < 4 {
            return Err(Error::InvalidArgument(
                "rho grid needs >= 2 and phi grid >= 4 points".into(),
            ));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidArgument("initial step must be positive".into()));
        }
        Ok(())
    }

    /// Maximizes `objective(c1, c2)` over the body. Deterministic for fixed
    /// inputs regardless of thread count.
    pub fn maximize<F>(&self, objective: F) -> Result<BodyMaximum>
    where
        F: Fn(Complex64, Complex64) -> f64 + Sync,
    {
        self.validate()?;
        let eval = |at: ReducedPoint| {
            let (c1, c2) = at.coeffs();
            sanitize(objective(c1, c2))
        };

        let last = (self.x_steps - 1) as f64;
        let coarse: Vec<Candidate> = (0..self.x_steps)
            .into_par_iter()
            .map(|i| self.inner(i as f64 / last, &eval))
            .collect();

        let mut order: Vec<usize> = (0..coarse.len()).collect();
        order.sort_by(|&a, &b| {
            if coarse[a].beats(&coarse[b]) {
                Ordering::Less
            } else if coarse[b].beats(&coarse[a]) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        });

        let mut best = coarse[order[0]];
        let mut history = vec![best.value];
        for &start in order.iter().take(self.starts.max(1)) {
            self.refine_outer(coarse[start], &eval, &mut best, &mut history);
        }

        let (c1, c2) = best.at.coeffs();
        Ok(BodyMaximum {
            value: best.value,
            at: best.at,
            c1,
            c2,
            history,
        })
    }

    /// Best `zeta2` for a fixed `x`.
    fn inner(&self, x: f64, eval: &impl Fn(ReducedPoint) -> f64) -> Candidate {
        let rho_last = (self.rho_steps - 1) as f64;
        let mut best = Candidate {
            value: f64::NEG_INFINITY,
            at: ReducedPoint { x, rho: 0.0, phi: 0.0 },
        };
        for i in 0..self.rho_steps {
            let rho = i as f64 / rho_last;
            for j in 0..self.phi_steps {
                let at = ReducedPoint {
                    x,
                    rho,
                    phi: TAU * j as f64 / self.phi_steps as f64,
                };
                let cand = Candidate { value: eval(at), at };
                if cand.value > best.value {
                    best = cand;
                }
            }
        }

        let mut step = self.initial_step;
        let mut halvings = 0;
        let mut moves = 0;
        while halvings < self.rounds && moves < MAX_MOVES {
            let mut improved: Option<Candidate> = None;
            for dr in [-1.0, 0.0, 1.0] {
                for dp in [-1.0, 0.0, 1.0] {
                    if dr == 0.0 && dp == 0.0 {
                        continue;
                    }
                    let at = ReducedPoint {
                        x,
                        rho: (best.at.rho + dr * step).clamp(0.0, 1.0),
                        phi: (best.at.phi + dp * step * TAU).rem_euclid(TAU),
                    };
                    let value = eval(at);
                    let threshold = improved.map_or(best.value, |c| c.value);
                    if value > threshold {
                        improved = Some(Candidate { value, at });
                    }
                }
            }
            match improved {
                Some(c) => {
                    best = c;
                    moves += 1;
                }
                None => {
                    step *= 0.5;
                    halvings += 1;
                }
            }
        }
        best
    }

    fn refine_outer(
        &self,
        start: Candidate,
        eval: &impl Fn(ReducedPoint) -> f64,
        best: &mut Candidate,
        history: &mut Vec<f64>,
    ) {
        let mut current = start;
        let mut step = self.initial_step;
        let mut halvings = 0;
        let mut moves = 0;
        while halvings < self.rounds && moves < MAX_MOVES {
            let mut moved = false;
            for dx in [-1.0, 1.0] {
                let x = (current.at.x + dx * step).clamp(0.0, 1.0);
                if x == current.at.x {
                    continue;
                }
                let cand = self.inner(x, eval);
                if cand.value > current.value {
                    current = cand;
                    moved = true;
                    moves += 1;
                    break;
                }
            }
            if !moved {
                step *= 0.5;
                halvings += 1;
                if current.beats(best) {
                    *best = current;
                }
                history.push(best.value);
            }
        }
        if current.beats(best) {
            *best = current;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_grid() {
        assert_eq!(
            BodySearch::with_grid(16).unwrap_err(),
            Error::GridTooSmall(16, MIN_GRID)
        );
    }

    #[test]
    fn finds_smooth_interior_maximum() {
        // Maximize -|c1 - 1|^2 - |c2 - 0.5 i|^2; the target pair is in the body.
        let target = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5));
        let search = BodySearch::with_grid(32).unwrap();
        let max = search
            .maximize(|c1, c2| -(c1 - target.0).norm_sqr() - (c2 - target.1).norm_sqr())
            .unwrap();
        assert!(max.value > -1e-12, "value {}", max.value);
        assert!((max.c1 - target.0).norm() < 1e-6);
    }

    #[test]
    fn history_is_monotone_and_deterministic() {
        let search = BodySearch::with_grid(32).unwrap();
        let f = |c1: Complex64, c2: Complex64| 3.0 * c1.norm() - (5.0 * c1 * c1 - 4.0 * c2).norm();
        let a = search.maximize(f).unwrap();
        let b = search.maximize(f).unwrap();
        assert_eq!(a, b);
        assert!(a.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn constant_objective_picks_lexicographic_origin() {
        let search = BodySearch::with_grid(32).unwrap();
        let max = search.maximize(|_, _| 1.0).unwrap();
        assert_eq!(max.at, ReducedPoint { x: 0.0, rho: 0.0, phi: 0.0 });
    }
}
