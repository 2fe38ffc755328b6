//! Flat torus `C / (Z + τZ)` with a round disk `|z − z₀| < ρ` as Σ₁.
//! Σ₂ is the complement, integrated by polar Gauss-Legendre panels about
//! `z₀` over the period parallelogram centred at `z₀`.

use super::theta::Theta;
use crate::error::{Result, SchifferError};
use crate::numerics::quad::gauss_legendre_on;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct TorusGeometry {
    pub tau: C64,
    pub z0: C64,
    pub rho: f64,
    pub theta: Theta,
}

/// Quadrature nodes and area weights on Σ₂.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
}

impl Grid {
    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// A closed cycle sampled at `m` equispaced parameter values with tangent
/// vectors, integrated by the periodic trapezoid rule.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub points: Vec<C64>,
    /// `dz/dt` per unit parameter, parameter range of length 1.
    pub tangent: Vec<C64>,
}

impl TorusGeometry {
    pub fn new(tau: C64, z0: C64, rho: f64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(SchifferError::InvalidModulus { re: tau.re, im: tau.im });
        }
        if tau.im < 0.5 {
            return Err(SchifferError::UnsupportedSurface(format!(
                "Im tau = {} below the supported range (>= 0.5)",
                tau.im
            )));
        }
        // Distance from the centre of the period parallelogram to its sides.
        let h1 = tau.im / 2.0; // sides parallel to 1
        let h2 = tau.im / (2.0 * tau.norm()); // sides parallel to τ
        let limit = 0.5 * 1f64.min(tau.im);
        if !(rho > 0.0 && rho < limit && rho < h1.min(h2)) {
            return Err(SchifferError::UnsupportedSurface(format!(
                "disk radius {rho} does not embed (needs 0 < rho < {})",
                limit.min(h1).min(h2)
            )));
        }
        Ok(Self {
            tau,
            z0,
            rho,
            theta: Theta::new(tau),
        })
    }

    /// Lattice coordinates `(a, b)` of `z − z₀ = a + bτ`.
    pub fn lattice_coords(&self, z: C64) -> (f64, f64) {
        let d = z - self.z0;
        let b = d.im / self.tau.im;
        (d.re - b * self.tau.re, b)
    }

    /// Representative of `z` in the parallelogram centred at `z₀`.
    pub fn reduce(&self, z: C64) -> C64 {
        let (a, b) = self.lattice_coords(z);
        z - (a.round() + self.tau * b.round())
    }

    pub fn in_sigma1(&self, z: C64) -> bool {
        (self.reduce(z) - self.z0).norm() < self.rho
    }

    /// Distance from `z` to the curve `|z − z₀| = ρ` on the torus.
    pub fn dist_to_curve(&self, z: C64) -> f64 {
        ((self.reduce(z) - self.z0).norm() - self.rho).abs()
    }

    /// Parallelogram vertices (relative to z₀), counterclockwise.
    fn vertices(&self) -> [C64; 4] {
        let t = self.tau;
        [(1.0 + t) * 0.5, (t - 1.0) * 0.5, (-t - 1.0) * 0.5, (1.0 - t) * 0.5]
    }

    /// Polar grid on Σ₂: angular panels split at the vertex directions,
    /// `nt` Gauss points per panel in angle and `nr` in radius.
    pub fn sigma2_grid(&self, nt: usize, nr: usize) -> Grid {
        let v = self.vertices();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for k in 0..4 {
            let a = v[k];
            let b = v[(k + 1) % 4];
            let t0 = a.arg();
            let mut t1 = b.arg();
            while t1 <= t0 {
                t1 += 2.0 * PI;
            }
            let d = b - a;
            let (ts, wt) = gauss_legendre_on(nt, t0, t1);
            for (th, w_th) in ts.iter().zip(&wt) {
                let e = C64::from_polar(1.0, *th);
                // Ray z₀ + r e meets the edge a + s d.
                let r_edge = (d.conj() * a).im / (d.conj() * e).im;
                let (rs, wr) = gauss_legendre_on(nr, self.rho, r_edge);
                for (r, w_r) in rs.iter().zip(&wr) {
                    nodes.push(self.z0 + e * *r);
                    weights.push(w_th * w_r * r);
                }
            }
        }
        Grid { nodes, weights }
    }

    /// The two generating cycles through `z₀ + (1+τ)/2`, along 1 and along τ.
    pub fn cycles(&self, m: usize) -> [Cycle; 2] {
        let p = self.z0 + (self.tau + 1.0) * 0.5;
        let mk = |dir: C64| Cycle {
            points: (0..m).map(|j| p + dir * (j as f64 / m as f64)).collect(),
            tangent: vec![dir; m],
        };
        [mk(C64::new(1.0, 0.0)), mk(self.tau)]
    }

    /// Area of Σ₂.
    pub fn sigma2_area(&self) -> f64 {
        self.tau.im - PI * self.rho * self.rho
    }
}

impl Cycle {
    /// `∫ a(z) dz` for a coefficient function `a`.
    pub fn integrate(&self, a: impl Fn(C64) -> C64) -> C64 {
        let m = self.points.len() as f64;
        self.points
            .iter()
            .zip(&self.tangent)
            .map(|(z, t)| a(*z) * t)
            .sum::<C64>()
            / m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_area_matches_parallelogram_minus_disk() {
        for tau in [C64::new(0.0, 1.0), C64::new(0.3, 0.9)] {
            let t = TorusGeometry::new(tau, C64::new(0.4, 0.2), 0.2).unwrap();
            let g = t.sigma2_grid(32, 32);
            assert!((g.area() - t.sigma2_area()).abs() < 1e-12);
            let m2: f64 = g
                .nodes
                .iter()
                .zip(&g.weights)
                .map(|(z, w)| w * (z - t.z0).norm_sqr())
                .sum();
            let exact = tau.im * (1.0 + tau.norm_sqr()) / 12.0 - PI * 0.2f64.powi(4) / 2.0;
            assert!((m2 - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn dz_periods_are_lattice_generators() {
        let t = TorusGeometry::new(C64::new(0.2, 1.1), C64::new(0.5, 0.5), 0.2).unwrap();
        let [c1, c2] = t.cycles(16);
        assert!((c1.integrate(|_| C64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((c2.integrate(|_| C64::new(1.0, 0.0)) - t.tau).norm() < 1e-15);
    }

    #[test]
    fn rejects_oversized_disk() {
        assert!(TorusGeometry::new(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.6).is_err());
        assert!(matches!(
            TorusGeometry::new(C64::new(0.0, -1.0), C64::new(0.0, 0.0), 0.1),
            Err(SchifferError::InvalidModulus { .. })
        ));
    }
}
