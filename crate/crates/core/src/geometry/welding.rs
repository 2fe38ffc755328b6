//! Boundary correspondences between disk charts. A correspondence stores a
//! monotone degree-one circle map `t ↦ θ(t) = t + p(t)` with `p` periodic,
//! as a Fourier series, plus a table of its inverse on a uniform grid.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Correspondence {
    /// `c_k`, `k ≥ 0`, with `p(t) = c_0 + 2 Re Σ_{k≥1} c_k e^{ikt}` (p real).
    coef: Vec<C64>,
    /// Inverse `t(θ_j)` on `θ_j = 2πj/m`.
    t_grid: Vec<f64>,
}

impl Correspondence {
    pub fn identity() -> Self {
        Self {
            coef: Vec::new(),
            t_grid: (0..64).map(|j| 2.0 * PI * j as f64 / 64.0).collect(),
        }
    }

    /// From samples of `p = θ − t` at `t_j = 2πj/P`.
    pub fn from_samples(p: &[f64]) -> Self {
        let n = p.len();
        let mut buf: Vec<C64> = p.iter().map(|&x| C64::new(x, 0.0)).collect();
        crate::numerics::fft::fft(&mut buf);
        let scale = 1.0 / n as f64;
        let mut coef: Vec<C64> = buf[..n / 2].iter().map(|c| c * scale).collect();
        while coef.len() > 1 && coef.last().unwrap().norm() < 1e-18 {
            coef.pop();
        }
        let mut c = Self { coef, t_grid: Vec::new() };
        c.t_grid = c.invert_uniform(n.max(64));
        c
    }

    /// Fourier tail: largest |c_k| with k ≥ kmin.
    pub fn tail(&self, kmin: usize) -> f64 {
        self.coef.iter().skip(kmin).fold(0.0, |m, c| m.max(c.norm()))
    }

    fn eval_series(&self, t: f64, deriv: bool) -> f64 {
        if self.coef.is_empty() {
            return 0.0;
        }
        let e = C64::from_polar(1.0, t);
        let mut z = e;
        let mut s = C64::new(0.0, 0.0);
        for (k, c) in self.coef.iter().enumerate().skip(1) {
            if deriv {
                s += c * z * C64::new(0.0, k as f64);
            } else {
                s += c * z;
            }
            z *= e;
        }
        let base = if deriv { 0.0 } else { self.coef[0].re };
        base + 2.0 * s.re
    }

    pub fn theta(&self, t: f64) -> f64 {
        t + self.eval_series(t, false)
    }

    pub fn dtheta(&self, t: f64) -> f64 {
        1.0 + self.eval_series(t, true)
    }

    fn fold_uniform(&self, m: usize, deriv: bool) -> Vec<f64> {
        let mut buf = vec![C64::new(0.0, 0.0); m];
        for (k, c) in self.coef.iter().enumerate() {
            let f = if deriv { C64::new(0.0, k as f64) } else { C64::new(1.0, 0.0) };
            let w = if k == 0 { 1.0 } else { 2.0 };
            buf[k % m] += c * f * w;
        }
        crate::numerics::fft::ifft(&mut buf);
        let off = if deriv { 1.0 } else { 0.0 };
        (0..m)
            .map(|j| {
                let base = if deriv { 0.0 } else { 2.0 * PI * j as f64 / m as f64 };
                base + off + buf[j].re
            })
            .collect()
    }

    /// Minimum of `θ'` over `m` samples (positivity means monotone).
    pub fn min_slope(&self, m: usize) -> f64 {
        self.fold_uniform(m, true).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `θ(t_j)` on a uniform grid.
    pub fn theta_uniform(&self, m: usize) -> Vec<f64> {
        self.fold_uniform(m, false)
    }

    /// Inverse `t(θ)`.
    pub fn t_of(&self, theta: f64) -> f64 {
        if self.coef.is_empty() {
            return theta;
        }
        let m = self.t_grid.len();
        // Interpolate the stored inverse table, then polish with Newton.
        let x = theta.rem_euclid(2.0 * PI) * m as f64 / (2.0 * PI);
        let j = (x.floor() as usize).min(m - 1);
        let fr = x - j as f64;
        let t0 = self.t_grid[j];
        let mut t1 = if j + 1 < m { self.t_grid[j + 1] } else { self.t_grid[0] + 2.0 * PI };
        while t1 < t0 {
            t1 += 2.0 * PI;
        }
        let base = theta - theta.rem_euclid(2.0 * PI);
        let mut t = base + t0 + fr * (t1 - t0);
        for _ in 0..30 {
            let f = self.theta(t) - theta;
            let step = f / self.dtheta(t);
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        t
    }

    /// Inverse on a uniform θ grid of size `m`.
    pub fn invert_uniform(&self, m: usize) -> Vec<f64> {
        if self.coef.is_empty() {
            return (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
        }
        // Seed from a dense forward table, then Newton.
        let fine = 8 * m;
        let fwd = self.theta_uniform(fine);
        let th0 = fwd[0];
        (0..m)
            .into_par_iter()
            .map(|j| {
                let target = 2.0 * PI * j as f64 / m as f64;
                // Unwrapped target inside [θ(0), θ(0) + 2π).
                let shift = ((target - th0) / (2.0 * PI)).floor() * 2.0 * PI;
                let tt = target - shift;
                let idx = fwd.partition_point(|&v| v <= tt);
                let (ta, va, tb, vb) = if idx == 0 {
                    (0.0, fwd[0], 0.0, fwd[0])
                } else if idx >= fine {
                    (
                        2.0 * PI * (fine - 1) as f64 / fine as f64,
                        fwd[fine - 1],
                        2.0 * PI,
                        th0 + 2.0 * PI,
                    )
                } else {
                    (
                        2.0 * PI * (idx - 1) as f64 / fine as f64,
                        fwd[idx - 1],
                        2.0 * PI * idx as f64 / fine as f64,
                        fwd[idx],
                    )
                };
                let mut t = if vb > va { ta + (tt - va) * (tb - ta) / (vb - va) } else { ta };
                for _ in 0..30 {
                    let f = self.theta(t) - tt;
                    let step = f / self.dtheta(t);
                    t -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                t + shift
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_smooth_homeomorphism() {
        let p = 64;
        let samples: Vec<f64> = (0..p)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / p as f64;
                0.3 * t.sin() + 0.1 * (2.0 * t).cos() + 0.2
            })
            .collect();
        let c = Correspondence::from_samples(&samples);
        assert!(c.min_slope(256) > 0.0);
        for j in 0..17 {
            let th = -1.0 + 0.5 * j as f64;
            let t = c.t_of(th);
            assert!((c.theta(t) - th).abs() < 1e-13);
        }
        let inv = c.invert_uniform(32);
        for (j, t) in inv.iter().enumerate() {
            assert!((c.theta(*t) - 2.0 * PI * j as f64 / 32.0).abs() < 1e-13);
        }
    }
}
