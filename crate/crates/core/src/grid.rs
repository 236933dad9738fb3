//! Evaluation grids shared by indicators, scenarios, and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Geometric,
    Linear,
}

/// A strictly increasing grid of evaluation points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub scale: GridScale,
}

impl Default for GridSpec {
    /// Geometric from 10 to 10^6 with 400 points.
    fn default() -> Self {
        GridSpec { x_min: 10.0, x_max: 1e6, points: 400, scale: GridScale::Geometric }
    }
}

impl GridSpec {
    pub fn geometric(x_min: f64, x_max: f64, points: usize) -> Self {
        GridSpec { x_min, x_max, points, scale: GridScale::Geometric }
    }

    pub fn build(&self) -> Vec<f64> {
        assert!(
            self.x_min > 0.0 && self.x_max > self.x_min && self.points >= 2,
            "grid must be positive, increasing, with at least 2 points"
        );
        let n = self.points;
        let mut xs = Vec::with_capacity(n);
        match self.scale {
            GridScale::Geometric => {
                let lr = (self.x_max / self.x_min).ln();
                for i in 0..n {
                    xs.push(self.x_min * (lr * i as f64 / (n - 1) as f64).exp());
                }
            }
            GridScale::Linear => {
                let step = (self.x_max - self.x_min) / (n - 1) as f64;
                for i in 0..n {
                    xs.push(self.x_min + step * i as f64);
                }
            }
        }
        *xs.last_mut().unwrap() = self.x_max;
        xs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_endpoints_and_monotone() {
        let g = GridSpec::default().build();
        assert_eq!(g.len(), 400);
        assert!((g[0] - 10.0).abs() < 1e-12);
        assert!((g[399] - 1e6).abs() < 1e-6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_grid() {
        let g = GridSpec { x_min: 1.0, x_max: 5.0, points: 5, scale: GridScale::Linear }.build();
        assert_eq!(g, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }
}
