//! FFT-based Laurent coefficients on circles and fast evaluation of
//! truncated power series at equispaced points.

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Unnormalized forward DFT, `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub fn fft(buf: &mut [C64]) {
    if buf.len() > 1 {
        plan(buf.len(), false).process(buf);
    }
}

/// Unnormalized inverse DFT, `x_j = sum_k X_k e^{2 pi i jk/n}`.
pub fn ifft(buf: &mut [C64]) {
    if buf.len() > 1 {
        plan(buf.len(), true).process(buf);
    }
}

/// Laurent coefficients recovered from `P` equispaced samples on `|z| = r`.
#[derive(Debug, Clone)]
pub struct Laurent {
    /// Coefficients of `z^k`, `k = 0..P/2`.
    pub nonneg: Vec<C64>,
    /// Coefficients of `z^{-k}`, `k = 1..P/2`.
    pub neg: Vec<C64>,
}

impl Laurent {
    /// Largest modulus among the negative-power coefficients.
    pub fn neg_sup(&self) -> f64 {
        self.neg.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest modulus among the last `k` nonnegative coefficients.
    pub fn tail_sup(&self, k: usize) -> f64 {
        let n = self.nonneg.len();
        self.nonneg[n.saturating_sub(k)..]
            .iter()
            .fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn sup(&self) -> f64 {
        self.nonneg
            .iter()
            .chain(self.neg.iter())
            .fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// Samples `f(r e^{2 pi i j/P})`, `j = 0..P`, to Laurent coefficients.
/// Powers of `r` are applied in log space so large orders do not overflow.
pub fn laurent_from_samples(samples: &[C64], r: f64) -> Laurent {
    let p = samples.len();
    let mut buf = samples.to_vec();
    fft(&mut buf);
    let half = p / 2;
    let lr = r.ln();
    let scale = |k: i64| (-(k as f64) * lr).exp() / p as f64;
    let nonneg = (0..half).map(|k| buf[k] * scale(k as i64)).collect();
    let neg = (1..half).map(|k| buf[p - k] * scale(-(k as i64))).collect();
    Laurent { nonneg, neg }
}

/// Values of `sum_k c_k z^k` at `z_j = r e^{2 pi i j/p}`. Exact for any
/// series length: orders are folded modulo `p` before one inverse FFT.
pub fn eval_on_circle(coef: &[C64], r: f64, p: usize) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); p];
    let lr = r.ln();
    for (k, c) in coef.iter().enumerate() {
        if *c != C64::new(0.0, 0.0) {
            buf[k % p] += c * (k as f64 * lr).exp();
        }
    }
    ifft(&mut buf);
    buf
}

/// Derivative coefficients: `sum c_k z^k` to `sum (k+1) c_{k+1} z^k`.
pub fn derivative_coeffs(coef: &[C64]) -> Vec<C64> {
    coef.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_roundtrip_on_small_circle() {
        let r = 0.7;
        let p = 64;
        let samples: Vec<C64> = (0..p)
            .map(|j| {
                let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / p as f64);
                C64::new(1.0, 0.0) + z * 2.0 - z.powi(3) * C64::new(0.0, 0.5) + z.inv() * 0.25
            })
            .collect();
        let l = laurent_from_samples(&samples, r);
        assert!((l.nonneg[0] - 1.0).norm() < 1e-13);
        assert!((l.nonneg[1] - 2.0).norm() < 1e-13);
        assert!((l.nonneg[3] - C64::new(0.0, -0.5)).norm() < 1e-12);
        assert!((l.neg[0] - 0.25).norm() < 1e-13);
    }

    #[test]
    fn folded_evaluation_matches_horner() {
        let coef: Vec<C64> = (0..50).map(|k| C64::new(1.0 / (k + 1) as f64, 0.1 * k as f64)).collect();
        let r = 0.95;
        let vals = eval_on_circle(&coef, r, 16);
        for (j, v) in vals.iter().enumerate() {
            let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / 16.0);
            let h = coef.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
            assert!((h - v).norm() < 1e-12);
        }
    }
}
