//! Jacobi theta function θ₁(u|τ) and the logarithmic derivatives used by the
//! torus Green function and kernels. Arguments are lattice-reduced before
//! series evaluation so every series converges geometrically.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub struct Theta {
    pub tau: C64,
    /// `a_n = q^{2n} / (1 - q^{2n})`, `q = e^{iπτ}`, for the Lambert series.
    lambert: Vec<C64>,
    /// `(-1)^n q^{(n+1/2)^2}` for the θ₁ product-free series.
    series: Vec<C64>,
}

impl Theta {
    pub fn new(tau: C64) -> Self {
        assert!(tau.im > 0.0);
        let t = tau.im;
        // Reduced arguments have |Im u| <= Im τ / 2, so Lambert terms decay
        // like e^{-π n Im τ}; stop below 1e-18 relative.
        let n_lam = (41.5 / (PI * t)).ceil() as usize + 2;
        let lambert = (1..=n_lam)
            .map(|n| {
                let q2n = (I * PI * tau * (2.0 * n as f64)).exp();
                q2n / (C64::new(1.0, 0.0) - q2n)
            })
            .collect();
        let mut series = Vec::new();
        for n in 0.. {
            let x = n as f64 + 0.5;
            // Worst-case magnitude after multiplying by sin((2n+1)πu).
            if n > 1 && PI * t * (x * x - x) > 41.5 {
                break;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            series.push((I * PI * tau * x * x).exp() * sign);
        }
        Self { tau, lambert, series }
    }

    /// Writes `u = r + m + nτ` with `r` in the period parallelogram centred at 0.
    pub fn reduce(&self, u: C64) -> (C64, f64, f64) {
        let n = (u.im / self.tau.im).round();
        let v = u - self.tau * n;
        let m = v.re.round();
        (v - m, m, n)
    }

    /// θ₁(u) from its series; `u` should already be reduced.
    pub fn theta1_reduced(&self, u: C64) -> C64 {
        self.series
            .iter()
            .enumerate()
            .map(|(n, c)| c * (u * PI * (2 * n + 1) as f64).sin())
            .sum::<C64>()
            * 2.0
    }

    /// log|θ₁(u)| for any `u`, using
    /// `log|θ₁(r + nτ)| = log|θ₁(r)| + π Im τ n² + 2π n Im r`.
    pub fn log_abs_theta1(&self, u: C64) -> f64 {
        let (r, _, n) = self.reduce(u);
        self.theta1_reduced(r).norm().ln() + PI * self.tau.im * n * n + 2.0 * PI * n * r.im
    }

    /// (log θ₁)'(u). Periodic under `u -> u + 1`, shifts by `-2πi` under `u -> u + τ`.
    pub fn dlog(&self, u: C64) -> C64 {
        let (r, _, n) = self.reduce(u);
        let mut s = PI / (r * PI).tan();
        for (k, a) in self.lambert.iter().enumerate() {
            let kk = (k + 1) as f64;
            s += a * (r * 2.0 * PI * kk).sin() * 4.0 * PI;
        }
        s - I * 2.0 * PI * n
    }

    fn lambert_d2(&self, r: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (k, a) in self.lambert.iter().enumerate() {
            let kk = (k + 1) as f64;
            s += a * kk * (r * 2.0 * PI * kk).cos();
        }
        s * 8.0 * PI * PI
    }

    /// (log θ₁)''(u), doubly periodic.
    pub fn d2log(&self, u: C64) -> C64 {
        let (r, _, _) = self.reduce(u);
        let s = (r * PI).sin();
        -PI * PI / (s * s) + self.lambert_d2(r)
    }

    /// (log θ₁)''(v) + 1/v² for `v` near a lattice point, with the lattice
    /// point removed; evaluated without cancellation near `v = 0`.
    pub fn d2log_regular(&self, v: C64) -> C64 {
        let (r, _, _) = self.reduce(v);
        let x = r * PI;
        let s = x.sin();
        // π²/sin²x − π²/x² = π² (x − sin x)(x + sin x) / (x² sin² x)
        let sing = if x.norm() < 1.0 {
            let x_minus_sin = x_minus_sin_series(x);
            PI * PI * x_minus_sin * (x + s) / (x * x * s * s)
        } else {
            PI * PI / (s * s) - 1.0 / (r * r)
        };
        if x.norm() < 1e-30 {
            // Limit of the bracket is π²/3.
            return -PI * PI / 3.0 + self.lambert_d2(r);
        }
        -sing + self.lambert_d2(r)
    }
}

/// x − sin x by its Taylor series, for |x| < 1.
fn x_minus_sin_series(x: C64) -> C64 {
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        // term_{k} = (-1)^{k} x^{2k+3}/(2k+3)!
        term = -term * x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        sum += term;
        k += 1.0;
        if term.norm() < 1e-18 * sum.norm() || k > 40.0 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th() -> Theta {
        Theta::new(C64::new(0.1, 1.0))
    }

    #[test]
    fn theta1_quasi_periodicity() {
        let t = Theta::new(C64::new(0.0, 1.0));
        let u = C64::new(0.2, 0.1);
        let a = t.theta1_reduced(u + 1.0);
        let b = t.theta1_reduced(u);
        assert!((a + b).norm() < 1e-13);
        let lhs = t.log_abs_theta1(u + t.tau);
        let rhs = t.log_abs_theta1(u) + PI * t.tau.im + 2.0 * PI * u.im;
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn dlog_matches_finite_difference_of_log() {
        let t = th();
        let u = C64::new(0.31, 0.27);
        let h = 1e-5;
        // d/du log θ₁ via central difference of log θ₁ on the reduced series.
        let f = |z: C64| t.theta1_reduced(z).ln();
        let fd = (f(u + h) - f(u - h)) / (2.0 * h);
        assert!((fd - t.dlog(u)).norm() < 1e-8, "{fd} vs {}", t.dlog(u));
        let fd2 = (t.dlog(u + h) - t.dlog(u - h)) / (2.0 * h);
        assert!((fd2 - t.d2log(u)).norm() < 1e-7);
    }

    #[test]
    fn dlog_shifts_by_minus_two_pi_i() {
        let t = th();
        let u = C64::new(0.2, 0.3);
        assert!((t.dlog(u + t.tau) - t.dlog(u) + I * 2.0 * PI).norm() < 1e-11);
        assert!((t.d2log(u + t.tau + 1.0) - t.d2log(u)).norm() < 1e-10);
    }

    #[test]
    fn regular_part_is_smooth_at_zero() {
        let t = th();
        for &e in &[1e-1, 1e-3, 1e-6] {
            let v = C64::new(e, 0.5 * e);
            let direct = t.d2log(v) + 1.0 / (v * v);
            let reg = t.d2log_regular(v);
            if e >= 1e-3 {
                assert!((direct - reg).norm() < 1e-8 * (1.0 / e).powi(2).max(1.0));
            }
            assert!((reg - t.d2log_regular(C64::new(0.0, 0.0))).norm() < 10.0 * e);
        }
    }
}
