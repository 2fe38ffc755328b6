//! Green functions of the closed surface and of the simply connected
//! components.
//!
//! The surface Green function `g(w; z, q)` is harmonic in `w` off `{z, q}`
//! with `+log|w − z|` at `z` and `−log|w − q|` at `q`; it is returned up to a
//! `w`-independent constant. Component Green functions are the positive
//! Dirichlet Green functions pulled back from the disk.

use super::{Comp, Point, Surface, SurfaceModel};
use crate::error::{Result, SchifferError};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// First derivatives of a component Green function in chart coordinates
/// (`ζ` for the `w` slot, `ξ` for the `z` slot).
#[derive(Debug, Clone, Copy)]
pub struct GreenDerivs {
    pub value: f64,
    /// Coefficient of `dζ` in `∂_w g`.
    pub dw: C64,
    /// Coefficient of `dξ` in `∂_z g`.
    pub dz: C64,
    /// Coefficient of `dζ̄` in `∂̄_w g`.
    pub dbar_w: C64,
}

fn same(a: Point, b: Point) -> bool {
    a.chordal(b) < 1e-14
}

impl SurfaceModel {
    /// `g(w; z, q)` up to a constant independent of `w`.
    pub fn green_r(&self, w: Point, z: Point, q: Point) -> Result<f64> {
        if same(w, z) || same(w, q) {
            return Err(SchifferError::CoincidentPoints);
        }
        match &self.surface {
            Surface::Sphere(_) => {
                let term = |a: Point| match (w, a) {
                    (Point::Finite(x), Point::Finite(y)) => (x - y).norm().ln(),
                    _ => 0.0,
                };
                // With w = ∞ both terms cancel in the limit; z or q at ∞ drops out.
                Ok(term(z) - term(q))
            }
            Surface::Torus(t) => {
                let (w, z, q) = finite3(w, z, q)?;
                let th = &t.geom.theta;
                Ok(th.log_abs_theta1(w - z) - th.log_abs_theta1(w - q)
                    + 2.0 * PI / th.tau.im * w.im * (z - q).im)
            }
        }
    }

    /// `g(w, w₀; z, q) = g(w; z, q) − g(w₀; z, q)`.
    pub fn green_r_normalized(&self, w: Point, w0: Point, z: Point, q: Point) -> Result<f64> {
        Ok(self.green_r(w, z, q)? - self.green_r(w0, z, q)?)
    }

    /// Coefficient of `dw` in `∂_w g(w; z, q)`.
    pub fn dw_green_r(&self, w: Point, z: Point, q: Point) -> Result<C64> {
        if same(w, z) || same(w, q) {
            return Err(SchifferError::CoincidentPoints);
        }
        let wf = w
            .finite()
            .ok_or_else(|| SchifferError::UnsupportedSurface("dw at infinity needs a chart".into()))?;
        match &self.surface {
            Surface::Sphere(_) => {
                let term = |a: Point| match a {
                    Point::Finite(y) => 0.5 / (wf - y),
                    Point::Infinity => C64::new(0.0, 0.0),
                };
                Ok(term(z) - term(q))
            }
            Surface::Torus(t) => {
                let (w, z, q) = finite3(w, z, q)?;
                let th = &t.geom.theta;
                Ok((th.dlog(w - z) - th.dlog(w - q)) * 0.5
                    - C64::new(0.0, PI / th.tau.im * (z - q).im))
            }
        }
    }

    /// Positive Green function of component `k`, pulled back from the disk.
    pub fn green_component(&self, k: Comp, w: Point, z: Point) -> Result<f64> {
        Ok(self.green_component_derivs(k, w, z)?.value)
    }

    pub fn green_component_derivs(&self, k: Comp, w: Point, z: Point) -> Result<GreenDerivs> {
        let chart = self.chart(k)?;
        let zeta = chart.inverse(w)?;
        let xi = chart.inverse(z)?;
        disk_green(zeta, xi)
    }
}

/// `−log|(ζ − ξ)/(1 − ζ ξ̄)|` and its chart derivatives.
pub fn disk_green(zeta: C64, xi: C64) -> Result<GreenDerivs> {
    let d = zeta - xi;
    if d.norm() < 1e-15 {
        return Err(SchifferError::CoincidentPoints);
    }
    let one = C64::new(1.0, 0.0);
    let den_w = one - zeta * xi.conj();
    let den_z = one - xi * zeta.conj();
    let value = -(d.norm() / den_w.norm()).ln();
    let dw = -(one / d + xi.conj() / den_w) * 0.5;
    let dz = -(-one / d + zeta.conj() / den_z) * 0.5;
    Ok(GreenDerivs {
        value,
        dw,
        dz,
        dbar_w: dw.conj(),
    })
}

fn finite3(w: Point, z: Point, q: Point) -> Result<(C64, C64, C64)> {
    match (w, z, q) {
        (Point::Finite(w), Point::Finite(z), Point::Finite(q)) => Ok((w, z, q)),
        _ => Err(SchifferError::UnsupportedSurface("torus points must be finite".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_model, CurveSpec};
    use super::*;

    fn pf(re: f64, im: f64) -> Point {
        Point::Finite(C64::new(re, im))
    }

    #[test]
    fn sphere_values() {
        let m = build_model(&CurveSpec::circle(), 16, 1e-10).unwrap();
        let g = m.green_r(pf(2.0, 0.0), pf(0.0, 0.0), Point::Infinity).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-15);
        let d = m.dw_green_r(pf(2.0, 0.0), pf(0.0, 0.0), Point::Infinity).unwrap();
        assert!((d - 0.25).norm() < 1e-15);
        let c = m.green_component(Comp::One, pf(0.5, 0.0), pf(0.0, 0.0)).unwrap();
        assert!((c + 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn torus_green_is_doubly_periodic_and_harmonic() {
        let spec = CurveSpec::torus(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.2);
        let m = build_model(&spec, 16, 1e-10).unwrap();
        let z = pf(0.3, 0.2);
        let q = pf(0.8, 0.9);
        for &(a, b) in &[(0.1, 0.6), (0.55, 0.1), (0.9, 0.45)] {
            let w = C64::new(a, b);
            let g = m.green_r(Point::Finite(w), z, q).unwrap();
            let g1 = m.green_r(Point::Finite(w + 1.0), z, q).unwrap();
            let gt = m.green_r(Point::Finite(w + C64::new(0.0, 1.0)), z, q).unwrap();
            assert!((g - g1).abs() < 1e-10 && (g - gt).abs() < 1e-10);
            // Five-point Laplacian at h and h/2, Richardson-combined.
            let lap = |h: f64| {
                [h, -h]
                    .iter()
                    .flat_map(|&s| [C64::new(s, 0.0), C64::new(0.0, s)])
                    .map(|d| m.green_r(Point::Finite(w + d), z, q).unwrap())
                    .sum::<f64>()
                    / (h * h)
                    - 4.0 * g / (h * h)
            };
            let l = (4.0 * lap(5e-3) - lap(1e-2)) / 3.0;
            assert!(l.abs() < 1e-6, "{l}");
        }
    }
}
