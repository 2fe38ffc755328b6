//! Level curves `{g_k(·, p) = ε}` of component Green functions.

use super::{Comp, Point, SurfaceModel};
use crate::error::{Result, SchifferError};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest level accepted; beyond this the curve leaves any useful collar.
pub const MAX_EPS: f64 = 1.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledCurve {
    pub points: Vec<Point>,
    /// Chart preimages of the points.
    pub chart_points: Vec<C64>,
    pub params: Vec<f64>,
    pub eps: f64,
    pub component: Comp,
}

impl SampledCurve {
    /// Largest gap between consecutive points (closure check includes the
    /// last-to-first segment).
    pub fn max_gap(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].chordal(self.points[(i + 1) % n]))
            .fold(0.0, f64::max)
    }
}

/// Chart points of the level curve about the chart point `a`:
/// `ζ(t) = (u + a)/(1 + ā u)`, `u = e^{−ε} e^{it}`.
pub fn level_chart_points(a: C64, eps: f64, m: usize) -> Vec<C64> {
    let r = (-eps).exp();
    (0..m)
        .map(|j| {
            let u = C64::from_polar(r, 2.0 * PI * j as f64 / m as f64);
            (u + a) / (C64::new(1.0, 0.0) + a.conj() * u)
        })
        .collect()
}

impl SurfaceModel {
    /// `m` samples of the level curve of the Green function of component `k`
    /// with pole at `p`, oriented positively for `k`.
    pub fn level_curve(&self, k: Comp, p: Point, eps: f64, m: usize) -> Result<SampledCurve> {
        if !(eps > 0.0 && eps <= MAX_EPS) {
            return Err(SchifferError::EpsilonTooLarge(eps));
        }
        let chart = self.chart(k)?;
        let a = chart.inverse(p)?;
        let chart_points = level_chart_points(a, eps, m);
        let points = chart_points.iter().map(|z| chart.point(*z)).collect();
        Ok(SampledCurve {
            points,
            chart_points,
            params: (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect(),
            eps,
            component: k,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_model, CurveSpec};
    use super::*;

    #[test]
    fn circle_level_curve_is_a_circle() {
        let m = build_model(&CurveSpec::circle(), 16, 1e-10).unwrap();
        let c = m.level_curve(Comp::One, Point::Finite(C64::new(0.0, 0.0)), 0.1, 64).unwrap();
        for p in &c.points {
            assert!((p.finite().unwrap().norm() - (-0.1f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn level_curve_self_consistency_on_ellipse_exterior() {
        let m = build_model(&CurveSpec::ellipse(0.5), 16, 1e-10).unwrap();
        let c = m.level_curve(Comp::One, Point::Infinity, 0.05, 64).unwrap();
        for p in &c.points {
            let g = m.green_component(Comp::One, *p, Point::Infinity).unwrap();
            assert!((g - 0.05).abs() < 1e-9);
        }
        assert!(m.level_curve(Comp::One, Point::Infinity, 2.0, 8).is_err());
    }
}
