//! Complex one-sided Jacobi (Hestenes) SVD. Slow but accurate to a few ulps
//! relative to the largest singular value, which is what the norm and
//! spectrum checks need.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Singular values of `a`, sorted in decreasing order.
pub fn singular_values(a: &DMatrix<C64>) -> Vec<f64> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Vec::new();
    }
    // Work on whichever orientation has fewer columns.
    let mut cols: Vec<Vec<C64>> = if n <= m {
        (0..n).map(|j| a.column(j).iter().copied().collect()).collect()
    } else {
        (0..m).map(|i| a.row(i).iter().map(|z| z.conj()).collect()).collect()
    };
    hestenes(&mut cols);
    let mut s: Vec<f64> = cols.iter().map(|c| norm2(c).sqrt()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Spectral norm (largest singular value).
pub fn operator_norm(a: &DMatrix<C64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn hestenes(cols: &mut [Vec<C64>]) {
    let n = cols.len();
    let eps = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = norm2(&cols[i]);
                let beta = norm2(&cols[j]);
                let gamma: C64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let d = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(j);
                let (ci, cj) = (&mut lo[i], &mut hi[0]);
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let xi = *x;
                    let yj = *y;
                    *x = xi * c - d.conj() * yj * s;
                    *y = d * xi * s + yj * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_unitary_product() {
        // U diag(3, 2, 0.5) with U a complex rotation.
        let th = 0.3f64;
        let u = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(th.cos(), 0.0),
                C64::new(0.0, -th.sin()),
                C64::new(0.0, 0.0),
                C64::new(0.0, -th.sin()),
                C64::new(th.cos(), 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(0.5, 0.0),
        ]));
        let s = singular_values(&(u * d));
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && (s[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_uses_adjoint() {
        let a = DMatrix::from_row_slice(1, 2, &[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        assert!((singular_values(&a)[0] - 5.0).abs() < 1e-14);
    }
}
