//! Numerical building blocks: FFT helpers on circles, Gauss-Legendre rules,
//! polynomial evaluation and a complex SVD.

pub mod fft;
pub mod poly;
pub mod quad;
pub mod svd;

pub use fft::{eval_on_circle, laurent_from_samples, Laurent};
pub use quad::gauss_legendre;
pub use svd::{singular_values, operator_norm};

use num_complex::Complex64 as C64;

/// `e^{2 pi i j / p}` for `j = 0..p`.
pub fn roots_of_unity(p: usize) -> Vec<C64> {
    (0..p)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / p as f64))
        .collect()
}

/// Smallest power of two that is at least `n`.
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Max-norm of a slice.
pub fn sup_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Richardson extrapolation to `h -> 0` of values sampled at step sizes `h`,
/// assuming an error expansion in integer powers of `h`. Returns the
/// extrapolated value and the spread of the last two tableau diagonals.
pub fn richardson(h: &[f64], v: &[C64]) -> (C64, f64) {
    assert_eq!(h.len(), v.len());
    let n = v.len();
    if n == 1 {
        return (v[0], f64::INFINITY);
    }
    // Neville tableau evaluated at h = 0.
    let mut t = v.to_vec();
    let mut prev_best = t[n - 1];
    for k in 1..n {
        for i in (k..n).rev() {
            let num = t[i] * h[i - k] - t[i - 1] * h[i];
            t[i] = num / (h[i - k] - h[i]);
        }
        if k == n - 1 {
            prev_best = t[n - 2];
        }
    }
    (t[n - 1], (t[n - 1] - prev_best).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_removes_linear_and_quadratic_terms() {
        let hs = [0.1, 0.05, 0.025];
        let f = |h: f64| C64::new(2.0 + 3.0 * h - h * h, -1.0 + 0.5 * h);
        let vs: Vec<C64> = hs.iter().map(|&h| f(h)).collect();
        let (lim, _) = richardson(&hs, &vs);
        assert!((lim - C64::new(2.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn next_pow2_rounds_up() {
        assert_eq!(next_pow2(1000), 1024);
        assert_eq!(next_pow2(1024), 1024);
    }
}
