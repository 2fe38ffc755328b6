//! The level-curve Cauchy integral `J_q(Γ)`, transmission across Γ, the
//! Plemelj decomposition and the reflection identities.
//!
//! With `2∂_w g(w; z, q) = κ(w; z, q) dw` the jump of `h` is
//! `(J h)(z) = ± (1/2πi) lim ∮ h κ dw` over level curves of the chosen side,
//! traversed counterclockwise in that side's disk chart (`+` for Σ₁, `−` for
//! Σ₂). Boundary data in a chart is a Laurent polynomial on the unit circle,
//! so the limit equals the chart-circle integral; targets on Γ itself use the
//! Laurent continuation of the data on an inner collar circle. The literal
//! level-curve integrals and their Richardson extrapolation are kept as
//! diagnostics.

use crate::error::{Result, SchifferError};
use crate::forms::{basis_scale, check_w1, CoeffForm, FormRep, HarmonicFun, OneForm};
use crate::geometry::{ChartVal, Comp, CurveKind, DiskChart, Point, Surface, SurfaceModel};
use crate::numerics::fft::{eval_on_circle, fft};
use crate::numerics::richardson;
use crate::numerics::svd::{operator_norm, singular_values};
use crate::report::{CheckRecord, Report};
use crate::schiffer::{assemble_s, assemble_t, torus_grid};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

const P_CONTOUR_MIN: usize = 512;
const P_CONTOUR_MAX: usize = 1 << 17;
/// Number of Γ samples (Σ₁ chart angles) carried in a jump result.
pub const P_CURVE: usize = 256;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpOptions {
    /// Levels for the literal level-curve integrals.
    pub eps: Vec<f64>,
    /// Alternative level set for the robustness comparison.
    pub eps_alt: Vec<f64>,
    /// Samples per literal level curve.
    pub curve_samples: usize,
    /// Collar depth of the continued evaluation on Γ.
    pub collar: f64,
    /// Chart preimage of the level-curve base point `p₁` (0 is `φ(0)`).
    pub base: C64,
}

impl Default for JumpOptions {
    fn default() -> Self {
        Self {
            eps: vec![0.08, 0.04, 0.02, 0.01],
            eps_alt: vec![0.06, 0.03, 0.015, 0.0075],
            curve_samples: 1024,
            collar: 0.05,
            base: ZERO,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpDiagnostics {
    pub side: u8,
    pub probe: Point,
    pub eps: Vec<f64>,
    /// Literal level-curve integrals at the probe point.
    pub literal: Vec<C64>,
    pub extrapolated: C64,
    pub extrapolated_alt: C64,
    /// The limit at the probe from the chart-circle integral.
    pub limit: C64,
    pub extrapolation_error: f64,
    pub richardson_spread: f64,
    /// Increments of the literal sequence do not grow.
    pub extrapolation_stable: bool,
    pub collar_depth: f64,
    /// Sup difference at interior chart points between the recovered series
    /// and direct chart-circle integrals.
    pub interior_residual: f64,
    /// Largest refinement difference of the adaptive trapezoid sums.
    pub quadrature_error: f64,
    pub contour_points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpResult {
    /// Part on Σ₁, in the Σ₁ chart.
    pub h1: HarmonicFun,
    /// Part on Σ₂ in its chart, when Σ₂ has one.
    pub h2: Option<HarmonicFun>,
    /// Values of the Σ₂ part at `φ₁(e^{2πij/P_CURVE})` (side-1 evaluations).
    pub h2_on_curve: Option<Vec<C64>>,
    pub diagnostics: JumpDiagnostics,
}

/// Chart values and `ds` weights of a closed contour together with data values.
struct Contour {
    vals: Vec<ChartVal>,
    ds: Vec<C64>,
    f: Vec<C64>,
}

fn circle_contour(chart: &DiskChart, r: f64, f: Vec<C64>) -> Contour {
    let p = f.len();
    let vals = chart.eval_circle(r, p);
    let ds = (0..p)
        .map(|j| I * C64::from_polar(r, 2.0 * PI * j as f64 / p as f64) * (2.0 * PI / p as f64))
        .collect();
    Contour { vals, ds, f }
}

/// Level curve about the chart point `a`: `s = (u + a)/(1 + ā u)`, `|u| = e^{−ε}`.
fn level_contour(chart: &DiskChart, a: C64, eps: f64, p: usize, data: impl Fn(C64) -> C64) -> Contour {
    let r = (-eps).exp();
    let one = C64::new(1.0, 0.0);
    let mut vals = Vec::with_capacity(p);
    let mut ds = Vec::with_capacity(p);
    let mut f = Vec::with_capacity(p);
    for j in 0..p {
        let u = C64::from_polar(r, 2.0 * PI * j as f64 / p as f64);
        let den = one + a.conj() * u;
        let s = (u + a) / den;
        vals.push(chart.eval(s));
        ds.push((1.0 - a.norm_sqr()) / (den * den) * I * u * (2.0 * PI / p as f64));
        f.push(data(s));
    }
    Contour { vals, ds, f }
}

/// `κ(w; z, q) dw/ds` at a chart value of `w`.
fn kernel(model: &SurfaceModel, v: &ChartVal, z: Point, q: Point) -> Result<C64> {
    match &model.surface {
        Surface::Sphere(_) => {
            let (nz, dz) = z.homogeneous();
            let (nq, dq) = q.homogeneous();
            Ok(v.w() * (nz * dq - nq * dz) / ((v.n * dz - nz * v.d) * (v.n * dq - nq * v.d)))
        }
        Surface::Torus(t) => {
            let (z, q) = match (z, q) {
                (Point::Finite(z), Point::Finite(q)) => (z, q),
                _ => return Err(SchifferError::UnsupportedSurface("torus points are finite".into())),
            };
            let th = &t.geom.theta;
            let w = v.n / v.d;
            Ok(v.deriv()
                * (th.dlog(w - z) - th.dlog(w - q) - I * (2.0 * PI / th.tau.im) * (z - q).im))
        }
    }
}

/// `∂_z κ(w; z, q) dw/ds` on the torus.
fn torus_dz_kernel(model: &SurfaceModel, v: &ChartVal, z: C64) -> C64 {
    let t = model.torus().expect("torus model");
    let w = v.n / v.d;
    v.deriv() * (-t.theta.d2log(w - z) - PI / t.tau.im)
}

fn contour_sum(c: &Contour, k: impl Fn(&ChartVal) -> C64, stride: usize) -> C64 {
    let mut s = ZERO;
    let mut j = 0;
    while j < c.f.len() {
        s += c.f[j] * k(&c.vals[j]) * c.ds[j];
        j += stride;
    }
    s * stride as f64 / (2.0 * PI * I)
}

/// `sign (1/2πi) ∮_{|s|=1} f κ ds` in the chart of `k` for every target,
/// refined by doubling until the halved rule agrees to 1e-14.
fn boundary_integral<K>(
    chart: &DiskChart,
    data: &(dyn Fn(usize) -> Vec<C64> + Sync),
    targets: &[Point],
    sign: f64,
    kern: K,
) -> Result<(Vec<C64>, f64, usize)>
where
    K: Fn(&ChartVal, Point) -> Result<C64> + Sync,
{
    let mut p = P_CONTOUR_MIN;
    let mut last = f64::INFINITY;
    loop {
        let c = circle_contour(chart, 1.0, data(p));
        let pairs: Vec<(C64, C64)> = targets
            .par_iter()
            .map(|z| -> Result<(C64, C64)> {
                let kv: Vec<C64> = c.vals.iter().map(|v| kern(v, *z)).collect::<Result<_>>()?;
                let full: C64 = (0..p).map(|j| c.f[j] * kv[j] * c.ds[j]).sum::<C64>() / (2.0 * PI * I);
                let half: C64 =
                    (0..p).step_by(2).map(|j| c.f[j] * kv[j] * c.ds[j]).sum::<C64>() * 2.0 / (2.0 * PI * I);
                Ok((full * sign, half * sign))
            })
            .collect::<Result<_>>()?;
        let scale = pairs.iter().fold(1.0f64, |m, (a, _)| m.max(a.norm()));
        let diff = pairs.iter().fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        if converged(diff, last, scale) || p >= P_CONTOUR_MAX {
            return Ok((pairs.into_iter().map(|(a, _)| a).collect(), diff, p));
        }
        last = diff;
        p *= 2;
    }
}

/// Halved-rule agreement at the target, or a roundoff plateau below 1e-11.
fn converged(diff: f64, last: f64, scale: f64) -> bool {
    diff <= 1e-14 * scale || (diff <= 1e-11 * scale && diff > 0.25 * last)
}

/// Laurent continuation `c + Σ aₙ sⁿ + Σ bₙ s⁻ⁿ` of the boundary values of `h`
/// on `|s| = r` at `p` equispaced angles.
fn continued_values(h: &HarmonicFun, r: f64, p: usize) -> Vec<C64> {
    let mut a = vec![h.c];
    a.extend_from_slice(&h.holo);
    let mut b = vec![ZERO];
    b.extend(h.anti.iter().map(|z| z.conj()));
    let hv = eval_on_circle(&a, r, p);
    let bv = eval_on_circle(&b, 1.0 / r, p);
    hv.iter().zip(&bv).map(|(x, y)| x + y.conj()).collect()
}

/// Harmonic function in a chart from values on `|ζ| = r` (FFT split).
/// Trailing modes whose sampled size is below 1e-15 of the largest are
/// dropped before the radial scaling, so roundoff is never amplified.
pub fn harmonic_from_circle(comp: Comp, vals: &[C64], r: f64) -> HarmonicFun {
    harmonic_from_circle_tail(comp, vals, r).0
}

/// As [`harmonic_from_circle`], also returning the relative sampled size of
/// the last quarter of modes.
fn harmonic_from_circle_tail(comp: Comp, vals: &[C64], r: f64) -> (HarmonicFun, f64) {
    let p = vals.len();
    let mut buf = vals.to_vec();
    fft(&mut buf);
    for z in buf.iter_mut() {
        *z /= p as f64;
    }
    let half = p / 2;
    let scale = buf.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    let tail = (3 * half / 4..half)
        .map(|k| buf[k].norm().max(buf[p - k].norm()))
        .fold(0.0, f64::max)
        / scale;
    // Roundoff floor: the top eighth of resolved samples is noise.
    let noise = (7 * half / 8..half)
        .map(|k| buf[k].norm().max(buf[p - k].norm()))
        .fold(0.0, f64::max);
    let cut = (1e-15 * scale).max(8.0 * noise).min(1e-13 * scale);
    let lr = r.ln();
    let keep = |v: &mut Vec<C64>| {
        while v.last().is_some_and(|z| z.norm() <= cut) {
            v.pop();
        }
        for (i, z) in v.iter_mut().enumerate() {
            *z *= (-((i + 1) as f64) * lr).exp();
        }
    };
    let mut holo: Vec<C64> = (1..half).map(|k| buf[k]).collect();
    let mut anti: Vec<C64> = (1..half).map(|k| buf[p - k]).collect();
    keep(&mut holo);
    keep(&mut anti);
    (HarmonicFun::new(comp, buf[0], holo, anti), tail)
}

/// Drops trailing modes below `rel` of the largest coefficient.
fn trimmed(h: &HarmonicFun, rel: f64) -> HarmonicFun {
    let scale = h.holo.iter().chain(&h.anti).fold(0.0f64, |m, z| m.max(z.norm()));
    let cut = |v: &[C64]| {
        let n = v.iter().rposition(|z| z.norm() > rel * scale).map_or(0, |i| i + 1);
        v[..n].to_vec()
    };
    HarmonicFun::new(h.comp, h.c, cut(&h.holo), cut(&h.anti))
}

/// A point of Σ₂ away from Γ and from `q`, used as the diagnostic probe.
fn probe_point(model: &SurfaceModel, comp: Comp) -> Point {
    if let Ok(ch) = model.chart(comp) {
        return ch.point(C64::new(0.5, 0.0));
    }
    match &model.surface {
        Surface::Torus(t) => Point::Finite(t.geom.z0 + (C64::new(1.0, 0.0) + t.geom.tau) * 0.5),
        Surface::Sphere(s) => {
            let c = crate::geometry::completion::polygon_centroid(&s.boundary);
            Point::Finite(c + (s.boundary[0] - c) * 0.3)
        }
    }
}

/// `J_q(Γ)` from side 1 (`side = 1`) or from side 2 after transmission.
pub fn jump(model: &SurfaceModel, h: &HarmonicFun, q: Point, side: u8) -> Result<JumpResult> {
    jump_with(model, h, q, side, &JumpOptions::default())
}

pub fn jump_with(model: &SurfaceModel, h: &HarmonicFun, q: Point, side: u8, opts: &JumpOptions) -> Result<JumpResult> {
    model.check_q(q)?;
    if h.comp != Comp::One {
        return Err(SchifferError::ComponentMismatch);
    }
    let (src, data, sign) = match side {
        1 => (Comp::One, h.clone(), 1.0),
        2 => {
            if model.genus() != 0 {
                return Err(SchifferError::OperatorUnavailable(
                    "side-2 jump needs transmission (genus 0)".into(),
                ));
            }
            (Comp::Two, transmit(model, h, Comp::Two)?, -1.0)
        }
        _ => return Err(SchifferError::Config(format!("side must be 1 or 2, got {side}"))),
    };
    let chart = model.chart(src)?;
    let chart1 = model.chart(Comp::One)?;
    let chart2 = model.chart(Comp::Two).ok();
    let depth = collar_depth(&data, opts.collar);
    let mut collar = Collar::new(model, q, sign, chart, &data, depth);

    // Γ samples: the collar integral is the limit from the far side of the
    // contour; the near-side limit adds the data (residue of the crossed pole).
    let neg = data.scale(C64::new(-1.0, 0.0));
    let (h1, h2, h2_on_curve) = if side == 1 {
        let (h1, vals) = curve_part(Comp::One, chart1, &mut collar, Some(&data))?;
        let stride = vals.len() / P_CURVE;
        let on: Vec<C64> = vals.iter().step_by(stride).copied().collect();
        let h2 = match chart2 {
            Some(c2) => Some(curve_part(Comp::Two, c2, &mut collar, None)?.0),
            None => None,
        };
        (h1, h2, Some(on))
    } else {
        // On Γ, h₂ = h₁ − h̃; reading it through the welding avoids
        // evaluating the long collar sum at Σ₂-uniform points.
        let (h1, _) = curve_part(Comp::One, chart1, &mut collar, None)?;
        let h2 = transmit(model, &h1, Comp::Two)?.add(&neg);
        (h1, Some(h2), None)
    };

    // Direct integrals at interior chart points against the recovered series.
    let circle = |p: usize| data.circle_values(1.0, p);
    let kern = |v: &ChartVal, z: Point| kernel(model, v, z, q);
    let mut interior: f64 = 0.0;
    let mut qerr: f64 = collar.worst;
    let mut pmax = collar.p;
    let mut parts: Vec<(&DiskChart, &HarmonicFun)> = vec![(chart1, &h1)];
    if let (Some(c2), Some(f)) = (chart2, h2.as_ref()) {
        parts.push((c2, f));
    }
    for (ch, f) in parts {
        let zs: Vec<C64> = (0..64).map(|k| C64::from_polar(0.9, 2.0 * PI * k as f64 / 64.0)).collect();
        let pts: Vec<Point> = zs.iter().map(|z| ch.point(*z)).collect();
        let (v, e, p) = boundary_integral(chart, &circle, &pts, sign, kern)?;
        qerr = qerr.max(e);
        pmax = pmax.max(p);
        for (z, val) in zs.iter().zip(&v) {
            interior = interior.max((f.eval(*z) - val).norm());
        }
    }

    // Literal level-curve integrals at a probe on the far side of the contour.
    let probe = probe_point(model, src.other());
    let (lim, _, _) = boundary_integral(chart, &circle, &[probe], sign, kern)?;
    let a = opts.base;
    let literal_at = |eps: &[f64]| -> Result<Vec<C64>> {
        eps.par_iter()
            .map(|&e| {
                let c = level_contour(chart, a, e, opts.curve_samples, |s| data.eval(s));
                let kv: Vec<C64> = c.vals.iter().map(|v| kernel(model, v, probe, q)).collect::<Result<_>>()?;
                let v = (0..c.f.len()).map(|j| c.f[j] * kv[j] * c.ds[j]).sum::<C64>() / (2.0 * PI * I);
                Ok(v * sign)
            })
            .collect()
    };
    let literal = literal_at(&opts.eps)?;
    let literal_alt = literal_at(&opts.eps_alt)?;
    let (ex, spread) = richardson(&opts.eps, &literal);
    let (ex_alt, _) = richardson(&opts.eps_alt, &literal_alt);
    let inc: Vec<f64> = literal.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let floor = 1e-12 * lim[0].norm().max(1.0);
    let stable = !inc.windows(2).any(|w| w[1] > 1.5 * w[0] && w[1] > floor);

    Ok(JumpResult {
        h1,
        h2,
        h2_on_curve,
        diagnostics: JumpDiagnostics {
            side,
            probe,
            eps: opts.eps.clone(),
            literal,
            extrapolated: ex,
            extrapolated_alt: ex_alt,
            limit: lim[0],
            extrapolation_error: (ex - lim[0]).norm(),
            richardson_spread: spread,
            extrapolation_stable: stable,
            collar_depth: depth,
            interior_residual: interior,
            quadrature_error: qerr,
            contour_points: pmax,
        },
    })
}

/// Largest collar depth (halving from `max`) at which the Laurent
/// continuation of the data grows by at most a factor 100.
fn collar_depth(h: &HarmonicFun, max: f64) -> f64 {
    let scale = h.holo.iter().chain(&h.anti).fold(h.c.norm(), |m, z| m.max(z.norm()));
    let mut eps = max;
    while eps > 1e-3 {
        let g = h
            .anti
            .iter()
            .enumerate()
            .map(|(k, b)| b.norm() * (eps * (k + 1) as f64).exp())
            .fold(0.0, f64::max);
        if g <= 100.0 * scale {
            break;
        }
        eps *= 0.5;
    }
    eps
}

/// Contour on the collar circle `|s| = e^{−ε}` of a chart, carrying the
/// Laurent continuation of the data.
struct Collar<'a> {
    model: &'a SurfaceModel,
    q: Point,
    sign: f64,
    chart: &'a DiskChart,
    data: &'a HarmonicFun,
    eps: f64,
    p: usize,
    c: Contour,
    worst: f64,
}

impl<'a> Collar<'a> {
    fn new(model: &'a SurfaceModel, q: Point, sign: f64, chart: &'a DiskChart, data: &'a HarmonicFun, eps: f64) -> Self {
        let p = crate::numerics::next_pow2((40.0 / eps).ceil() as usize).max(P_CONTOUR_MIN);
        let r = (-eps).exp();
        let c = circle_contour(chart, r, continued_values(data, r, p));
        Self { model, q, sign, chart, data, eps, p, c, worst: 0.0 }
    }

    fn eval(&mut self, targets: &[Point]) -> Result<Vec<C64>> {
        let mut last = f64::INFINITY;
        loop {
            let p = self.p;
            let c = &self.c;
            let (model, q) = (self.model, self.q);
            let two: Vec<(C64, C64)> = targets
                .par_iter()
                .map(|z| -> Result<(C64, C64)> {
                    let kv: Vec<C64> = c.vals.iter().map(|v| kernel(model, v, *z, q)).collect::<Result<_>>()?;
                    let full = (0..p).map(|j| c.f[j] * kv[j] * c.ds[j]).sum::<C64>() / (2.0 * PI * I);
                    let half =
                        (0..p).step_by(2).map(|j| c.f[j] * kv[j] * c.ds[j]).sum::<C64>() * 2.0 / (2.0 * PI * I);
                    Ok((full, half))
                })
                .collect::<Result<_>>()?;
            let scale = two.iter().fold(1.0f64, |m, (a, _)| m.max(a.norm()));
            let diff = two.iter().fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            if converged(diff, last, scale) || p >= P_CONTOUR_MAX {
                if diff > 1e-8 * scale {
                    return Err(SchifferError::LimitUnstable(diff));
                }
                self.worst = self.worst.max(diff);
                return Ok(two.into_iter().map(|(a, _)| a * self.sign).collect());
            }
            last = diff;
            self.p *= 2;
            let r = (-self.eps).exp();
            self.c = circle_contour(self.chart, r, continued_values(self.data, r, self.p));
        }
    }
}

/// Part of the jump recovered from Γ samples at uniform angles of `chart`,
/// doubling the sample count until the coefficient tail is negligible.
/// Returns the function and the raw collar values at the final count.
fn curve_part(comp: Comp, chart: &DiskChart, collar: &mut Collar, add: Option<&HarmonicFun>) -> Result<(HarmonicFun, Vec<C64>)> {
    let mut p = 256;
    let mut vals = collar.eval(&chart.circle_points(1.0, p))?;
    loop {
        let mut total = vals.clone();
        if let Some(f) = add {
            for (t, v) in total.iter_mut().zip(f.circle_values(1.0, p)) {
                *t += v;
            }
        }
        let (f, tail) = harmonic_from_circle_tail(comp, &total, 1.0);
        if tail <= 1e-14 || p >= 16384 {
            return Ok((f, vals));
        }
        let pts = chart.circle_points(1.0, 2 * p);
        let odd: Vec<Point> = pts.iter().skip(1).step_by(2).copied().collect();
        let new = collar.eval(&odd)?;
        vals = vals.iter().zip(&new).flat_map(|(a, b)| [*a, *b]).collect();
        p *= 2;
    }
}

/// `J_q(Γ)h` at arbitrary points, from side 1 (used on the torus complement).
pub fn jump_at(model: &SurfaceModel, h: &HarmonicFun, q: Point, pts: &[Point]) -> Result<Vec<C64>> {
    let chart = model.chart(Comp::One)?;
    let circle = |p: usize| h.circle_values(1.0, p);
    let (v, _, _) = boundary_integral(chart, &circle, pts, 1.0, |v, z| kernel(model, v, z, q))?;
    Ok(v)
}

/// `dz` coefficient of `∂(J_q h)` at torus points of Σ₂.
pub fn torus_jump_dz(model: &SurfaceModel, h: &HarmonicFun, pts: &[C64]) -> Result<Vec<C64>> {
    let chart = model.chart(Comp::One)?;
    let circle = |p: usize| h.circle_values(1.0, p);
    let targets: Vec<Point> = pts.iter().map(|z| Point::Finite(*z)).collect();
    let (v, _, _) = boundary_integral(chart, &circle, &targets, 1.0, |v, z| {
        Ok(torus_dz_kernel(model, v, z.finite().unwrap()))
    })?;
    Ok(v)
}

/// Boundary values of `h` transplanted to the other component and extended
/// harmonically: `𝔒(Σⱼ, Σₖ)h`.
pub fn transmit(model: &SurfaceModel, h: &HarmonicFun, to: Comp) -> Result<HarmonicFun> {
    if model.genus() != 0 {
        return Err(SchifferError::WeldingUnavailable);
    }
    if h.comp != to.other() {
        return Err(SchifferError::ComponentMismatch);
    }
    let mut p = 256;
    let mut last = f64::INFINITY;
    loop {
        let ang = match to {
            Comp::Two => model.omega21_uniform(p)?,
            Comp::One => model.omega12_uniform(p)?,
        };
        let vals: Vec<C64> = ang.par_iter().map(|t| h.eval(C64::from_polar(1.0, *t))).collect();
        let (out, tail) = harmonic_from_circle_tail(to, &vals, 1.0);
        // Stop once resolved to the floor, or once doubling stops helping.
        if tail <= 1e-15 || (tail <= 1e-12 && tail > 0.5 * last) || p >= 65536 {
            return Ok(out);
        }
        last = tail;
        p *= 2;
    }
}

/// Antiderivative with zero constant of a coefficient form.
fn integrate_form(alpha: &OneForm) -> Result<HarmonicFun> {
    let c = alpha.coeffs().ok_or(SchifferError::NotExact(f64::NAN))?;
    let f = |v: &[C64]| v.iter().enumerate().map(|(i, a)| a / (i + 1) as f64).collect();
    Ok(HarmonicFun::new(alpha.comp, ZERO, f(&c.holo), f(&c.anti)))
}

/// `𝔒_e = d ∘ 𝔒 ∘ ∫` for exact forms (every coefficient form on a disk is exact).
pub fn transmit_exact(model: &SurfaceModel, alpha: &OneForm, to: Comp) -> Result<OneForm> {
    if model.genus() != 0 {
        return Err(SchifferError::OperatorUnavailable("exact transmission needs genus 0".into()));
    }
    if let FormRep::Grid(_) = alpha.rep {
        return Err(SchifferError::NotExact(f64::NAN));
    }
    let h = integrate_form(alpha)?;
    Ok(transmit(model, &h, to)?.d())
}

/// Orthonormal coordinates of the holomorphic and anti-holomorphic parts,
/// padded or cut to `n`.
pub fn normalized_parts(form: &OneForm, n: usize) -> (Vec<C64>, Vec<C64>) {
    let empty = CoeffForm::default();
    let c = form.coeffs().unwrap_or(&empty);
    let f = |v: &[C64]| (0..n).map(|k| v.get(k).copied().unwrap_or(ZERO) * basis_scale(k)).collect();
    (f(&c.holo), f(&c.anti))
}

/// Form from orthonormal coordinates.
pub fn form_from_normalized(comp: Comp, holo: &[C64], anti: &[C64]) -> OneForm {
    let f = |v: &[C64]| v.iter().enumerate().map(|(k, x)| x / basis_scale(k)).collect();
    OneForm {
        comp,
        rep: FormRep::Coeff(CoeffForm {
            holo: f(holo),
            anti: f(anti),
        }),
    }
}

/// Normalized coordinates of `∂̄h`.
pub fn dbar_coords(h: &HarmonicFun, n: usize) -> Vec<C64> {
    normalized_parts(&h.partial_bar(), n).1
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn diff_l2(a: &[C64], b: &[C64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| (a.get(k).copied().unwrap_or(ZERO) - b.get(k).copied().unwrap_or(ZERO)).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Dirichlet seminorm of the difference plus the difference of constants.
fn harmonic_distance(a: &HarmonicFun, b: &HarmonicFun) -> f64 {
    let d = a.sub(b);
    d.dirichlet_norm() + d.c.norm()
}

/// Random harmonic function on Σ₁ with `n` modes each side, geometrically damped.
pub fn random_harmonic(rng: &mut impl Rng, n: usize, decay: f64) -> HarmonicFun {
    let mut g = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let c = g();
    let holo = (0..n).map(|k| g() * decay.powi(k as i32)).collect();
    let anti = (0..n).map(|k| g() * decay.powi(k as i32)).collect();
    HarmonicFun::new(Comp::One, c, holo, anti)
}

/// Identities of the jump derivatives:
/// `∂J|Σ₂ = T12 ∂̄h`, `∂J|Σ₁ = ∂h + T11 ∂̄h`, `∂̄J = S̄₁ ∂̄h`.
pub fn verify_jump_derivatives(model: &SurfaceModel, h: &HarmonicFun, q: Point, n: usize) -> Result<Report> {
    let tol = if model.genus() == 0 { 1e-6 } else { 1e-4 };
    let n = n.max(h.anti.len());
    let x = dbar_coords(h, n);
    let j = jump(model, h, q, 1)?;
    let t11 = assemble_t(model, Comp::One, Comp::One, n)?;
    let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
    let mut rep = Report::new();

    // Σ₁: holomorphic part of ∂J.
    let rows = t11.rows().max(j.h1.holo.len()).max(h.holo.len());
    let lhs = normalized_parts(&j.h1.partial(), rows).0;
    let mut rhs = normalized_parts(&h.partial(), rows).0;
    for (k, v) in t11.apply(&x).iter().enumerate() {
        rhs[k] += v;
    }
    rep.push(CheckRecord::new("jump-derivative/sigma1", "jump-derivatives", diff_l2(&lhs, &rhs), tol));

    match &model.surface {
        Surface::Sphere(_) => {
            let h2 = j.h2.as_ref().ok_or(SchifferError::WeldingUnavailable)?;
            let rows = t12.rows().max(h2.holo.len());
            let lhs = normalized_parts(&h2.partial(), rows).0;
            let rhs = t12.apply(&x);
            rep.push(CheckRecord::new("jump-derivative/sigma2", "jump-derivatives", diff_l2(&lhs, &rhs), tol));
            // No global anti-holomorphic forms: ∂̄J vanishes on both sides.
            let bar = l2(&normalized_parts(&j.h1.partial_bar(), rows).1)
                + l2(&normalized_parts(&h2.partial_bar(), rows).1);
            rep.push(CheckRecord::new("jump-derivative/dbar", "jump-derivatives", bar, tol));
        }
        Surface::Torus(t) => {
            let g = &t.geom;
            let grid = t12.grid.clone().unwrap_or_else(|| torus_grid(g));
            // Nodes hugging Γ need very long contours; compare away from it.
            let far: Vec<usize> =
                (0..grid.nodes.len()).filter(|&i| (grid.nodes[i] - g.z0).norm() >= 1.25 * g.rho).collect();
            let idx: Vec<usize> = far.iter().step_by((far.len() / 48).max(1)).copied().collect();
            let pts: Vec<C64> = idx.iter().map(|&i| grid.nodes[i]).collect();
            let dz = torus_jump_dz(model, h, &pts)?;
            let img = t12.apply(&x);
            let worst = idx
                .iter()
                .zip(&dz)
                .map(|(&i, v)| (v - img[i]).norm())
                .fold(0.0, f64::max);
            rep.push(CheckRecord::new("jump-derivative/sigma2", "jump-derivatives", worst, tol));
            // ∂̄J: the dz̄ coefficient of J on Σ₁ is b₁(J)/ρ.
            let s = assemble_s(model, Comp::One, n)?;
            let expect: C64 =
                (0..n).map(|k| s.entries[(0, k)].conj() * x[k]).sum::<C64>() / g.tau.im.sqrt();
            let got = j.h1.anti.first().copied().unwrap_or(ZERO) / g.rho;
            let rest = l2(j.h1.anti.get(1..).unwrap_or(&[]));
            rep.push(
                CheckRecord::new("jump-derivative/dbar", "jump-derivatives", (got - expect).norm() + rest, tol)
                    .with("dbar_coefficient", got.norm()),
            );
        }
    }
    Ok(rep)
}

/// `−𝔒(Σ₂,Σ₁) J|Σ₂ h = h − J|Σ₁ h` and `−𝔒_e T12 ᾱ = ᾱ − T11 ᾱ` (genus 0).
pub fn verify_reflection(model: &SurfaceModel, h: &HarmonicFun, q: Point, n: usize) -> Result<Report> {
    if model.genus() != 0 {
        return Err(SchifferError::OperatorUnavailable("reflection identities need genus 0".into()));
    }
    let (ok, res) = check_w1(model, h, 1e-8);
    if !ok {
        return Err(SchifferError::NotAdmissible(res.iter().map(|z| z.norm()).fold(0.0, f64::max)));
    }
    let mut rep = Report::new();
    let j = jump(model, h, q, 1)?;
    let h2 = j.h2.as_ref().ok_or(SchifferError::WeldingUnavailable)?;
    let lhs = transmit(model, h2, Comp::One)?.scale(C64::new(-1.0, 0.0));
    let rhs = h.sub(&j.h1);
    rep.push(CheckRecord::new("reflection/functions", "reflection-formula", harmonic_distance(&lhs, &rhs), 1e-6));

    let n = n.max(h.anti.len());
    let x = dbar_coords(h, n);
    let t11 = assemble_t(model, Comp::One, Comp::One, n)?;
    let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
    let img = t12.apply(&x);
    let beta = form_from_normalized(Comp::Two, &img, &[]);
    let back = transmit_exact(model, &beta, Comp::One)?;
    let rows = t11.rows().max(back.coeffs().map_or(0, |c| c.holo.len().max(c.anti.len())));
    let (bh, ba) = normalized_parts(&back, rows);
    let t11x = t11.apply(&x);
    // Anti part: −(𝔒_e T12 ᾱ)^{0,1} = ᾱ; holomorphic part: −(𝔒_e T12 ᾱ)^{1,0} = −T11 ᾱ.
    let anti_res = diff_l2(&ba.iter().map(|z| -z).collect::<Vec<_>>(), &x);
    let holo_res = diff_l2(&bh, &t11x);
    rep.push(CheckRecord::new("reflection/forms", "transmission", anti_res + holo_res, 1e-6));
    Ok(rep)
}

/// Matrix of `−P̄ ∘ 𝔒_e ∘ T12` on the first `n` modes; the identity on V₁.
pub fn left_inverse_matrix(model: &SurfaceModel, n: usize) -> Result<DMatrix<C64>> {
    let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
    let cols: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<Vec<C64>> {
            let col: Vec<C64> = t12.entries.column(k).iter().copied().collect();
            let beta = form_from_normalized(Comp::Two, &col, &[]);
            let back = transmit_exact(model, &beta, Comp::One)?;
            Ok(normalized_parts(&back, n).1.iter().map(|z| -z).collect())
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, k| cols[k][i]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlemeljResult {
    pub jump: JumpResult,
    /// `sup |h − (h₁ − h₂)|` over Γ samples, `h₂` from the side-1 collar evaluation.
    pub boundary_residual: f64,
    /// Same with `h₂` evaluated from its Σ₂ chart series at welded angles.
    pub chart_residual: Option<f64>,
    /// Re-solving from `−𝔒(Σ₂,Σ₁)h₂ + h₁` reproduces the pair.
    pub uniqueness_residual: Option<f64>,
}

/// Plemelj–Sokhotski decomposition `h = h₁ − h₂` on Γ.
pub fn plemelj_solve(model: &SurfaceModel, h: &HarmonicFun, q: Point) -> Result<PlemeljResult> {
    let (ok, res) = check_w1(model, h, 1e-8);
    if !ok {
        return Err(SchifferError::NotAdmissible(res.iter().map(|z| z.norm()).fold(0.0, f64::max)));
    }
    let j = jump(model, h, q, 1)?;
    let hv = h.circle_values(1.0, P_CURVE);
    let h1v = j.h1.circle_values(1.0, P_CURVE);
    let h2c = j.h2_on_curve.as_ref().expect("side-1 result");
    let boundary_residual = (0..P_CURVE)
        .map(|k| (hv[k] - (h1v[k] - h2c[k])).norm())
        .fold(0.0, f64::max);
    let (chart_residual, uniqueness_residual) = match (&j.h2, model.genus()) {
        (Some(h2), 0) => {
            let w = model.omega12_uniform(P_CURVE)?;
            let cr = (0..P_CURVE)
                .map(|k| (hv[k] - (h1v[k] - h2.eval(C64::from_polar(1.0, w[k])))).norm())
                .fold(0.0, f64::max);
            let hp = trimmed(&transmit(model, h2, Comp::One)?.scale(C64::new(-1.0, 0.0)).add(&j.h1), 1e-13);
            let j2 = jump(model, &hp, q, 1)?;
            let u = harmonic_distance(&j2.h1, &j.h1)
                + j2.h2.as_ref().map_or(f64::INFINITY, |g| harmonic_distance(g, h2));
            (Some(cr), Some(u))
        }
        _ => (None, None),
    };
    Ok(PlemeljResult {
        jump: j,
        boundary_residual,
        chart_residual,
        uniqueness_residual,
    })
}

/// Plemelj decomposition checks for one input: boundary residual, re-solve
/// uniqueness (genus 0), exact Fourier splitting on the circle, and `(h, 0)`
/// for the holomorphic part of `h`.
pub fn verify_plemelj(model: &SurfaceModel, h: &HarmonicFun, q: Point) -> Result<Report> {
    let mut rep = Report::new();
    let p = plemelj_solve(model, h, q)?;
    rep.push(CheckRecord::new("plemelj/boundary", "plemelj-decomposition", p.boundary_residual, 1e-6));
    if let Some(c) = p.chart_residual {
        rep.push(CheckRecord::new("plemelj/boundary via welding", "plemelj-decomposition", c, 1e-6));
    }
    if let Some(u) = p.uniqueness_residual {
        rep.push(CheckRecord::new("plemelj/uniqueness", "jump-isomorphism", u, 1e-6));
    }
    if model.spec.kind == CurveKind::Circle {
        let holo = HarmonicFun::new(Comp::One, h.c, h.holo.clone(), vec![]);
        let anti = HarmonicFun::new(Comp::One, ZERO, vec![], h.anti.clone());
        let e2 = transmit(model, &anti, Comp::Two)?.scale(C64::new(-1.0, 0.0));
        let d = harmonic_distance(&p.jump.h1, &holo)
            + p.jump.h2.as_ref().map_or(f64::INFINITY, |g| harmonic_distance(g, &e2));
        rep.push(CheckRecord::new("plemelj/circle Fourier splitting", "plemelj-decomposition", d, 1e-8));
    }
    let hh = HarmonicFun::new(Comp::One, h.c, h.holo.clone(), vec![]);
    let j = jump(model, &hh, q, 1)?;
    let mut d = harmonic_distance(&j.h1, &hh);
    if let Some(g) = &j.h2 {
        d += g.dirichlet_norm() + g.c.norm();
    }
    rep.push(CheckRecord::new("plemelj/holomorphic input", "holomorphic-jump", d, 1e-9));
    Ok(rep)
}

/// `‖−P̄ 𝔒_e T12 − I‖` on the first `n` modes (genus 0).
pub fn verify_left_inverse(model: &SurfaceModel, n: usize) -> Result<Report> {
    let l = left_inverse_matrix(model, n)? - DMatrix::<C64>::identity(n, n);
    let mut rep = Report::new();
    rep.push(CheckRecord::new("reflection/left inverse", "left-inverse", operator_norm(&l), 1e-6));
    Ok(rep)
}

/// Boundary data for the solver: `c + Σ aₙ e^{inθ} + Σ bₙ e^{−inθ}` in the Σ₁ chart angle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierData {
    #[serde(default)]
    pub c: C64,
    #[serde(default)]
    pub holo: Vec<C64>,
    #[serde(default)]
    pub anti: Vec<C64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlemeljOutput {
    pub h1: HarmonicFun,
    pub h2: Option<HarmonicFun>,
    pub residual: f64,
    pub diagnostics: JumpDiagnostics,
}

/// JSON in, JSON out wrapper of [`plemelj_solve`].
pub fn plemelj_json(model: &SurfaceModel, input: &str) -> Result<String> {
    let d: FourierData = serde_json::from_str(input).map_err(|e| SchifferError::Config(e.to_string()))?;
    let h = HarmonicFun::new(Comp::One, d.c, d.holo, d.anti);
    let r = plemelj_solve(model, &h, model.q)?;
    let out = PlemeljOutput {
        h1: r.jump.h1,
        h2: r.jump.h2,
        residual: r.boundary_residual,
        diagnostics: r.jump.diagnostics,
    };
    serde_json::to_string(&out).map_err(|e| SchifferError::Config(e.to_string()))
}

/// Side-1 against side-2 jump, contour integrals of `h α` from both sides
/// with `α = dw/(w − w₀)`, and the admissibility comparison (genus 0).
pub fn verify_side_independence(model: &SurfaceModel, h: &HarmonicFun, q: Point) -> Result<Report> {
    if model.genus() != 0 {
        return Err(SchifferError::OperatorUnavailable("side independence needs genus 0".into()));
    }
    let mut rep = Report::new();
    let j1 = jump(model, h, q, 1)?;
    let j2 = jump(model, h, q, 2)?;
    let d1 = harmonic_distance(&j1.h1, &j2.h1);
    let d2 = match (&j1.h2, &j2.h2) {
        (Some(a), Some(b)) => harmonic_distance(a, b),
        _ => f64::INFINITY,
    };
    rep.push(CheckRecord::new("side-independence/jump", "two-sided-limit", d1.max(d2), 1e-6));

    let ht = transmit(model, h, Comp::Two)?;
    let w0 = match model.p2 {
        Point::Finite(z) if model.dist_to_curve(model.p2) > 0.2 => z,
        _ => match model.p1 {
            Point::Finite(z) => z,
            Point::Infinity => C64::new(0.0, 0.0),
        },
    };
    let alpha = |v: &ChartVal| v.w() / (v.d * (v.n - v.d * w0));
    let side_integral = |comp: Comp, f: &HarmonicFun| -> Result<C64> {
        let chart = model.chart(comp)?;
        let mut p = 512;
        let mut prev: Option<C64> = None;
        loop {
            let c = circle_contour(chart, 1.0, f.circle_values(1.0, p));
            let v = contour_sum(&c, alpha, 1);
            if let Some(pv) = prev {
                if (v - pv).norm() <= 1e-14 * v.norm().max(1.0) || p >= P_CONTOUR_MAX {
                    return Ok(v);
                }
            }
            prev = Some(v);
            p *= 2;
        }
    };
    // Σ₂'s chart circle runs against the orientation of Γ as seen from Σ₁.
    let i1 = side_integral(Comp::One, h)?;
    let i2 = -side_integral(Comp::Two, &ht)?;
    rep.push(
        CheckRecord::new("side-independence/contour", "contour-independence", (i1 - i2).norm(), 1e-7)
            .with("integral", i1.norm()),
    );
    let (a, _) = check_w1(model, h, 1e-8);
    let (b, _) = check_w1(model, &ht, 1e-8);
    rep.push(
        CheckRecord::new("side-independence/admissible", "transmission", if a == b { 0.0 } else { 1.0 }, 0.5)
            .with("vacuous", 1.0),
    );
    Ok(rep)
}

/// Singular values of `h ↦ (h₁, h₂)` on Dirichlet-normalized modes
/// `ζᵏ/√(πk)`, `ζ̄ᵏ/√(πk)`, `k = 1..=n` (genus 0).
pub fn jump_isomorphism_sv(model: &SurfaceModel, n: usize) -> Result<Vec<f64>> {
    let q = model.q;
    let coords = |f: &HarmonicFun, len: usize| -> Vec<C64> {
        let g = |v: &[C64]| {
            (0..len)
                .map(|k| v.get(k).copied().unwrap_or(ZERO) * (PI * (k + 1) as f64).sqrt())
                .collect::<Vec<_>>()
        };
        let mut out = g(&f.holo);
        out.extend(g(&f.anti));
        out
    };
    let len = 4 * n;
    let cols: Vec<Vec<C64>> = (0..2 * n)
        .into_par_iter()
        .map(|m| -> Result<Vec<C64>> {
            let k = m % n;
            let mut v = vec![ZERO; k + 1];
            v[k] = C64::new(1.0 / (PI * (k + 1) as f64).sqrt(), 0.0);
            let h = if m < n {
                HarmonicFun::new(Comp::One, ZERO, v, vec![])
            } else {
                HarmonicFun::new(Comp::One, ZERO, vec![], v)
            };
            let j = jump(model, &h, q, 1)?;
            let mut c = coords(&j.h1, len);
            c.extend(coords(j.h2.as_ref().ok_or(SchifferError::WeldingUnavailable)?, len));
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let m = DMatrix::from_fn(cols[0].len(), 2 * n, |i, k| cols[k][i]);
    Ok(singular_values(&m))
}

/// Largest singular value of `𝔒(Σ₁,Σ₂)` on Dirichlet-normalized modes `k ≤ n`.
pub fn transmission_norm(model: &SurfaceModel, n: usize) -> Result<f64> {
    let len = 8 * n;
    let cols: Vec<Vec<C64>> = (0..2 * n)
        .into_par_iter()
        .map(|m| -> Result<Vec<C64>> {
            let k = m % n;
            let mut v = vec![ZERO; k + 1];
            v[k] = C64::new(1.0 / (PI * (k + 1) as f64).sqrt(), 0.0);
            let h = if m < n {
                HarmonicFun::new(Comp::One, ZERO, v, vec![])
            } else {
                HarmonicFun::new(Comp::One, ZERO, vec![], v)
            };
            let t = transmit(model, &h, Comp::Two)?;
            let g = |w: &[C64]| {
                (0..len)
                    .map(|i| w.get(i).copied().unwrap_or(ZERO) * (PI * (i + 1) as f64).sqrt())
                    .collect::<Vec<_>>()
            };
            let mut c = g(&t.holo);
            c.extend(g(&t.anti));
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let m = DMatrix::from_fn(cols[0].len(), 2 * n, |i, k| cols[k][i]);
    Ok(singular_values(&m).first().copied().unwrap_or(0.0))
}

/// Random inputs for the jump-derivative suite.
pub fn random_inputs(seed: u64, count: usize, n: usize, admissible_torus: bool) -> Vec<HarmonicFun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut h = random_harmonic(&mut rng, n, 0.7);
            if admissible_torus {
                h.anti[0] = ZERO;
            }
            h
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_model, CurveSpec};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn circle_fourier_splitting() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let h = HarmonicFun::new(Comp::One, c(0.3, 0.0), vec![c(1.0, 0.5), c(0.0, -2.0)], vec![c(0.7, 0.0), c(0.1, 0.1)]);
        let j = jump(&m, &h, Point::Infinity, 1).unwrap();
        assert!((j.h1.c - c(0.3, 0.0)).norm() < 1e-12);
        assert!(diff_l2(&j.h1.holo, &h.holo) < 1e-12);
        assert!(l2(&j.h1.anti) < 1e-12);
        let h2 = j.h2.unwrap();
        let neg: Vec<C64> = h.anti.iter().map(|z| -z).collect();
        assert!(diff_l2(&h2.holo, &neg) < 1e-12, "{:?}", h2);
        assert!(h2.c.norm() < 1e-12);
        let on = j.h2_on_curve.unwrap();
        let hv = h.circle_values(1.0, P_CURVE);
        let h1v = j.h1.circle_values(1.0, P_CURVE);
        for k in 0..P_CURVE {
            assert!((hv[k] - h1v[k] + on[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn circle_transmission_reverses_frequencies() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let h = HarmonicFun::new(Comp::One, ZERO, vec![ZERO, ZERO, c(1.0, 0.0)], vec![]);
        let t = transmit(&m, &h, Comp::Two).unwrap();
        assert!(l2(&t.holo) < 1e-12);
        assert!((t.anti[2] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn circle_left_inverse_is_identity() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let l = left_inverse_matrix(&m, 8).unwrap();
        let e = l - DMatrix::<C64>::identity(8, 8);
        assert!(e.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn rejects_q_on_curve() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let h = HarmonicFun::new(Comp::One, ZERO, vec![c(1.0, 0.0)], vec![]);
        let r = jump(&m, &h, Point::Finite(c(1.01, 0.0)), 1);
        assert!(matches!(r, Err(SchifferError::QNearCurve(_))));
    }

    #[test]
    fn plemelj_json_roundtrip() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let s = plemelj_json(&m, r#"{"holo":[[0.5,0.0]],"anti":[[0.5,0.0]]}"#).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["residual"].as_f64().unwrap() < 1e-12);
    }

    fn assert_pass(r: &Report) {
        for c in &r.records {
            assert!(c.pass, "{} {:e} > {:e}", c.name, c.residual, c.tolerance);
        }
    }

    #[test]
    fn ellipse_jump_identities() {
        let m = build_model(&CurveSpec::ellipse(0.3), 16, 1e-10).unwrap();
        let h = &random_inputs(11, 1, 16, false)[0];
        assert_pass(&verify_jump_derivatives(&m, h, m.q, 16).unwrap());
        assert_pass(&verify_reflection(&m, h, m.q, 16).unwrap());
        assert_pass(&verify_side_independence(&m, h, m.q).unwrap());
        let p = plemelj_solve(&m, h, m.q).unwrap();
        assert!(p.boundary_residual < 1e-10);
        assert!(p.uniqueness_residual.unwrap() < 1e-8);
    }

    #[test]
    fn holomorphic_data_has_no_exterior_part() {
        let m = build_model(&CurveSpec::ellipse(0.3), 16, 1e-10).unwrap();
        let h = HarmonicFun::new(Comp::One, c(0.2, 0.0), vec![c(1.0, 0.0), c(0.0, 0.5), c(0.25, 0.25)], vec![]);
        let j = jump(&m, &h, m.q, 1).unwrap();
        assert!(harmonic_distance(&j.h1, &h) < 1e-9);
        assert!(j.h2.unwrap().dirichlet_norm() < 1e-9);
    }

    #[test]
    fn collar_limit_matches_literal_extrapolation() {
        // The literal level-curve integrals converge to the collar limit at the
        // rate of the Richardson fit; the limit itself is exact to quadrature.
        let m = build_model(&CurveSpec::ellipse(0.2), 16, 1e-10).unwrap();
        let h = &random_inputs(5, 1, 8, false)[0];
        let d = jump(&m, h, m.q, 1).unwrap().diagnostics;
        assert!(d.quadrature_error < 1e-12);
        assert!(d.interior_residual < 1e-10);
        assert!(d.extrapolation_error < 1e-3 * d.limit.norm().max(1.0));
    }

    #[test]
    fn torus_jump_derivatives() {
        let m = build_model(&CurveSpec::torus(c(0.0, 1.0), c(0.5, 0.5), 0.2), 16, 1e-10).unwrap();
        let h = &random_inputs(2, 1, 16, false)[0];
        assert_pass(&verify_jump_derivatives(&m, h, m.q, 16).unwrap());
        assert!(jump(&m, h, m.q, 2).is_err());
    }
}
