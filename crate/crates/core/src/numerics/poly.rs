//! Power-series evaluation.

use num_complex::Complex64 as C64;

/// `(p(z), p'(z))` by Horner's rule for `p(z) = sum c_k z^k`.
pub fn horner_d(coef: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coef.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `p(z)` by Horner's rule.
pub fn horner(coef: &[C64], z: C64) -> C64 {
    coef.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Divided difference `(p(b) − p(a))/(b − a)`, evaluated without cancellation
/// as `Σ c_k Σ_{j<k} a^j b^{k−1−j}`.
pub fn divided_difference(coef: &[C64], a: C64, b: C64) -> C64 {
    let mut h = C64::new(0.0, 0.0);
    let mut apow = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for c in coef.iter().skip(1) {
        h = h * b + apow;
        apow *= a;
        sum += c * h;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_cubic() {
        let c = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 0.0), C64::new(3.0, 0.0)];
        let z = C64::new(0.5, -0.25);
        let (p, dp) = horner_d(&c, z);
        assert!((p - (1.0 + z * 2.0 + z * z * z * 3.0)).norm() < 1e-15);
        assert!((dp - (C64::new(2.0, 0.0) + z * z * 9.0)).norm() < 1e-15);
    }

    #[test]
    fn divided_difference_matches_quotient_and_derivative() {
        let c = [C64::new(1.0, 0.0), C64::new(2.0, -1.0), C64::new(0.5, 0.0), C64::new(3.0, 0.0)];
        let (a, b) = (C64::new(0.5, -0.25), C64::new(-0.3, 0.6));
        let q = (horner(&c, b) - horner(&c, a)) / (b - a);
        assert!((divided_difference(&c, a, b) - q).norm() < 1e-14);
        assert!((divided_difference(&c, a, a) - horner_d(&c, a).1).norm() < 1e-14);
    }
}
