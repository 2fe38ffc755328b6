//! Numerical Riemann map of the interior of an analytic Jordan curve.
//!
//! The Szegő kernel `S(·, a)` is obtained from the Kerzman–Stein integral
//! equation, discretized by the trapezoid rule (spectrally accurate for
//! analytic curves). The boundary correspondence follows from
//! `F'(z) = 2π S(z,a)² / S(a,a)`: `arg F(η(t)) = arg(S² T) − π/2` with `T` the
//! unit tangent. Map coefficients are then the FFT of `η(t(θ_j))`.

use super::welding::Correspondence;
use crate::error::{Result, SchifferError};
use crate::numerics::fft::{fft, laurent_from_samples};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

const KS_SIZES: [usize; 4] = [128, 256, 512, 1024];
const MAX_FFT: usize = 65536;

/// Result of a completion: coefficients of `F⁻¹` (Taylor, centred at 0 with
/// `F⁻¹(0) = a`) and the correspondence `t ↦ θ(t) = arg F(η(t))`.
#[derive(Debug, Clone)]
pub struct Completion {
    pub coeffs: Vec<C64>,
    pub corr: Correspondence,
    pub ks_size: usize,
    pub fft_size: usize,
}

/// Szegő kernel values `S(η(t_j), a)` at `t_j = 2πj/P`.
pub fn szego_kerzman_stein(z: &[C64], dz: &[C64], a: C64) -> Result<Vec<C64>> {
    let p = z.len();
    let sp: Vec<f64> = dz.iter().map(|d| d.norm()).collect();
    let t: Vec<C64> = dz.iter().zip(&sp).map(|(d, s)| d / *s).collect();
    let c = C64::new(0.0, 1.0 / (2.0 * PI)).conj(); // 1/(2πi) = −i/(2π)
    let h = 2.0 * PI / p as f64;
    let mut m = DMatrix::<C64>::identity(p, p);
    for j in 0..p {
        for k in 0..p {
            if j == k {
                continue;
            }
            // A(z,w) = conj(H(w,z)) − H(z,w), H(z,w) = T(w)/(2πi (w − z)).
            let hwz = c * t[j] / (z[j] - z[k]);
            let hzw = c * t[k] / (z[k] - z[j]);
            m[(j, k)] += (hwz.conj() - hzw) * sp[k] * h;
        }
    }
    let rhs = DVector::from_iterator(p, (0..p).map(|j| (c * t[j] / (z[j] - a)).conj()));
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| SchifferError::IterationDiverged("singular Kerzman-Stein system".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Correspondence `θ(t)` of the curve for centre `a`, from one solve of size `p`.
fn correspondence<F>(curve: &F, a: C64, p: usize) -> Result<(Correspondence, Vec<C64>)>
where
    F: Fn(f64) -> (C64, C64) + Sync,
{
    let (z, dz): (Vec<C64>, Vec<C64>) = (0..p)
        .map(|j| curve(2.0 * PI * j as f64 / p as f64))
        .unzip();
    let s = szego_kerzman_stein(&z, &dz, a)?;
    let mut theta = Vec::with_capacity(p);
    let mut prev = 0.0;
    for j in 0..p {
        let tan = dz[j] / dz[j].norm();
        let raw = (s[j] * s[j] * tan).arg() - PI / 2.0;
        let v = if j == 0 {
            raw.rem_euclid(2.0 * PI) - if raw.rem_euclid(2.0 * PI) > PI { 2.0 * PI } else { 0.0 }
        } else {
            prev + (raw - prev + PI).rem_euclid(2.0 * PI) - PI
        };
        theta.push(v);
        prev = v;
    }
    let closing = theta[0] + 2.0 * PI - theta[p - 1];
    if !(closing > 0.0 && closing < PI) {
        return Err(SchifferError::NonUnivalent(
            "boundary correspondence does not have degree one".into(),
        ));
    }
    let samples: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(j, th)| th - 2.0 * PI * j as f64 / p as f64)
        .collect();
    Ok((Correspondence::from_samples(&samples), s))
}

/// Riemann map `F⁻¹: D → interior(η)` with `F⁻¹(0) = a`, `(F⁻¹)'(0) > 0`.
/// `curve(t)` returns `(η(t), η'(t))` for a positively oriented analytic curve.
pub fn complete_interior<F>(curve: F, a: C64) -> Result<Completion>
where
    F: Fn(f64) -> (C64, C64) + Sync,
{
    let mut chosen = None;
    for &p in KS_SIZES.iter() {
        let (corr, _) = correspondence(&curve, a, p)?;
        let tail = corr.tail(p / 4);
        if tail < 1e-13 {
            chosen = Some((corr, p));
            break;
        }
    }
    let (corr, ks_size) = chosen.ok_or_else(|| {
        SchifferError::IterationDiverged(format!(
            "boundary correspondence not resolved with {} nodes",
            KS_SIZES[KS_SIZES.len() - 1]
        ))
    })?;
    if corr.min_slope(8 * ks_size) <= 0.0 {
        return Err(SchifferError::NonUnivalent("non-monotone boundary correspondence".into()));
    }
    let mut pf = (4 * ks_size).max(1024);
    loop {
        let ts = corr.invert_uniform(pf);
        let vals: Vec<C64> = ts.par_iter().map(|&t| curve(t).0).collect();
        let l = laurent_from_samples(&vals, 1.0);
        let scale = l.sup();
        let tail = l.tail_sup(pf / 8);
        if tail <= 1e-14 * scale {
            if l.neg_sup() > 1e-9 * scale {
                return Err(SchifferError::IterationDiverged(format!(
                    "boundary values are not holomorphic traces (negative content {:.2e})",
                    l.neg_sup() / scale
                )));
            }
            let mut coeffs = l.nonneg;
            while coeffs.len() > 2 && coeffs.last().unwrap().norm() < 1e-17 * scale {
                coeffs.pop();
            }
            if (coeffs[0] - a).norm() > 1e-8 * (1.0 + a.norm()) {
                return Err(SchifferError::IterationDiverged("map centre drifted".into()));
            }
            return Ok(Completion {
                coeffs,
                corr,
                ks_size,
                fft_size: pf,
            });
        }
        if pf >= MAX_FFT {
            return Err(SchifferError::IterationDiverged(format!(
                "map coefficients still at {:.2e} relative after {} terms",
                tail / scale,
                pf / 2
            )));
        }
        pf *= 2;
    }
}

/// Sampled boundary is a simple closed polygon (no two non-adjacent edges meet).
pub fn polygon_is_simple(pts: &[C64]) -> bool {
    let n = pts.len();
    let cross = |a: C64, b: C64| a.re * b.im - a.im * b.re;
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    (0..n).into_par_iter().all(|i| {
        let (a, b) = seg(i);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = seg(j);
            let d1 = cross(b - a, c - a);
            let d2 = cross(b - a, d - a);
            let d3 = cross(d - c, a - c);
            let d4 = cross(d - c, b - c);
            if d1 * d2 <= 0.0 && d3 * d4 <= 0.0 {
                return false;
            }
        }
        true
    })
}

/// Winding number of a closed sampled curve about `a`.
pub fn winding_number(pts: &[C64], a: C64) -> i64 {
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        total += ((pts[(i + 1) % n] - a) / (pts[i] - a)).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

/// Centroid of the polygon area.
pub fn polygon_centroid(pts: &[C64]) -> C64 {
    let n = pts.len();
    let mut area = 0.0;
    let mut c = C64::new(0.0, 0.0);
    for i in 0..n {
        let (p, q) = (pts[i], pts[(i + 1) % n]);
        let cr = p.re * q.im - q.re * p.im;
        area += cr;
        c += (p + q) * cr;
    }
    c / (3.0 * area)
}

/// Discrete Fourier check used in tests: FFT of samples, scaled.
#[allow(dead_code)]
fn spectrum(vals: &[C64]) -> Vec<C64> {
    let mut b = vals.to_vec();
    fft(&mut b);
    let n = b.len() as f64;
    b.iter().map(|c| c / n).collect()
}
