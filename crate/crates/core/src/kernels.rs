//! Pointwise Bergman and Schiffer kernels.
//!
//! With `G` the surface Green function (positive log pole at `z`),
//! `L_R = −(1/πi) ∂_z∂_w G` (a `dz dw` bi-differential) and
//! `K_R = (1/πi) ∂_z∂̄_w G` (`dz dw̄`). Component kernels use the same
//! formulas with the disk Green function pulled back through the chart, so
//! that `L_R − L_Σ` is smooth across the diagonal.

use crate::error::{Result, SchifferError};
use crate::forms::disk_quadrature;
use crate::geometry::{Comp, Point, Surface, SurfaceModel};
use crate::numerics::quad::gauss_legendre_on;
use crate::numerics::richardson;
use crate::report::{CheckRecord, Report};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelType {
    DzDw,
    DzDwbar,
}

/// Coordinate in which a kernel coefficient is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartId {
    /// The global coordinate of the sphere (finite part) or of the torus.
    Plane,
    /// The disk chart of a component.
    Disk(Comp),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: C64,
    pub ty: KernelType,
    pub z_chart: ChartId,
    pub w_chart: ChartId,
}

impl KernelValue {
    fn new(value: C64, ty: KernelType, z_chart: ChartId, w_chart: ChartId) -> Self {
        Self { value, ty, z_chart, w_chart }
    }
}

/// `−1/(2πi)`.
fn neg_inv_2pii() -> C64 {
    -(I * 2.0 * PI).inv()
}

fn finite2(z: Point, w: Point) -> Result<(C64, C64)> {
    match (z, w) {
        (Point::Finite(z), Point::Finite(w)) => Ok((z, w)),
        _ => Err(SchifferError::UnsupportedSurface(
            "plane coordinates need finite points; use the chart form".into(),
        )),
    }
}

/// `L_R(z, w)` in the plane coordinate.
pub fn l_r(model: &SurfaceModel, z: Point, w: Point) -> Result<KernelValue> {
    let (z, w) = finite2(z, w)?;
    if (w - z).norm() < 1e-15 {
        return Err(SchifferError::CoincidentPoints);
    }
    let v = match &model.surface {
        Surface::Sphere(_) => neg_inv_2pii() / ((w - z) * (w - z)),
        Surface::Torus(t) => {
            let th = &t.geom.theta;
            th.d2log(w - z) / (I * 2.0 * PI) + (I * 2.0 * th.tau.im).inv()
        }
    };
    Ok(KernelValue::new(v, KernelType::DzDw, ChartId::Plane, ChartId::Plane))
}

/// Calibrated constant `κ` of `K_R = κ dz dw̄` on the torus: the value that
/// makes `∬_R K_R(z, ·) ∧ dw = dz`, with the area form integrated by the same
/// quadratures used for Σ₁ and Σ₂.
pub fn torus_k_constant(model: &SurfaceModel) -> Result<C64> {
    match &model.surface {
        Surface::Torus(t) => Ok(*t.kappa.get_or_init(|| {
            let grid = t.geom.sigma2_grid(48, 48);
            let area1 = crate::forms::disk_area_quadrature(t.geom.rho);
            // ∬ dw̄ ∧ dw = 2i · area.
            (I * 2.0 * (grid.area() + area1)).inv()
        })),
        Surface::Sphere(_) => Ok(C64::new(0.0, 0.0)),
    }
}

/// `K_R(z, w)` in the plane coordinate (zero on the sphere).
pub fn k_r(model: &SurfaceModel, _z: Point, _w: Point) -> Result<KernelValue> {
    let v = torus_k_constant(model)?;
    Ok(KernelValue::new(v, KernelType::DzDwbar, ChartId::Plane, ChartId::Plane))
}

/// Kernel coefficient `Q = W_k(ζ) W_j(η) / (N_j(η) D_k(ζ) − N_k(ζ) D_j(η))²`
/// of `(w − z)^{-2} dz dw` pulled back to charts `k` (ζ, z slot) and `j`
/// (η, w slot). On the torus Σ₁ chart this is the periodic analogue
/// `−ρ² ((log θ₁)''(w − z) + π / Im τ)`.
pub fn pulled_back_q(model: &SurfaceModel, kz: Comp, zeta: C64, kw: Comp, eta: C64) -> Result<C64> {
    match &model.surface {
        Surface::Sphere(_) => {
            let a = model.chart(kz)?.eval(zeta);
            let b = model.chart(kw)?.eval(eta);
            let den = if kz == kw {
                model.chart(kz)?.cross_divided(zeta, eta) * (eta - zeta)
            } else {
                b.n * a.d - a.n * b.d
            };
            if den.norm() < 1e-300 {
                return Err(SchifferError::CoincidentPoints);
            }
            Ok(a.w() * b.w() / (den * den))
        }
        Surface::Torus(t) => {
            if kz != Comp::One || kw != Comp::One {
                return Err(SchifferError::NotSimplyConnected(2));
            }
            let g = &t.geom;
            let u = (eta - zeta) * g.rho;
            if u.norm() < 1e-15 {
                return Err(SchifferError::CoincidentPoints);
            }
            Ok(-(g.theta.d2log(u) + PI / g.tau.im) * g.rho * g.rho)
        }
    }
}

/// `L_R` in chart coordinates.
pub fn l_r_chart(model: &SurfaceModel, kz: Comp, zeta: C64, kw: Comp, eta: C64) -> Result<KernelValue> {
    let q = pulled_back_q(model, kz, zeta, kw, eta)?;
    Ok(KernelValue::new(
        neg_inv_2pii() * q,
        KernelType::DzDw,
        ChartId::Disk(kz),
        ChartId::Disk(kw),
    ))
}

/// Component Schiffer kernel `L_Σ = −1/(2πi) (η − ζ)^{-2} dζ dη` in the chart.
pub fn l_comp(model: &SurfaceModel, k: Comp, zeta: C64, eta: C64) -> Result<KernelValue> {
    model.chart(k)?;
    let d = eta - zeta;
    if d.norm() < 1e-15 {
        return Err(SchifferError::CoincidentPoints);
    }
    Ok(KernelValue::new(
        neg_inv_2pii() / (d * d),
        KernelType::DzDw,
        ChartId::Disk(k),
        ChartId::Disk(k),
    ))
}

/// Component Bergman kernel `K_Σ = 1/(2πi) (1 − ζ η̄)^{-2} dζ dη̄` in the chart.
pub fn k_comp(model: &SurfaceModel, k: Comp, zeta: C64, eta: C64) -> Result<KernelValue> {
    model.chart(k)?;
    let d = C64::new(1.0, 0.0) - zeta * eta.conj();
    Ok(KernelValue::new(
        (I * 2.0 * PI).inv() / (d * d),
        KernelType::DzDwbar,
        ChartId::Disk(k),
        ChartId::Disk(k),
    ))
}

/// Component kernels for points given on the surface (inverted through the chart).
pub fn l_comp_points(model: &SurfaceModel, k: Comp, z: Point, w: Point) -> Result<KernelValue> {
    let ch = model.chart(k)?;
    l_comp(model, k, ch.inverse(z)?, ch.inverse(w)?)
}

pub fn k_comp_points(model: &SurfaceModel, k: Comp, z: Point, w: Point) -> Result<KernelValue> {
    let ch = model.chart(k)?;
    k_comp(model, k, ch.inverse(z)?, ch.inverse(w)?)
}

/// Threshold below which the regularized kernel is filled by extrapolation.
pub const DIAGONAL_THRESHOLD: f64 = 1e-4;

fn reg_raw(model: &SurfaceModel, k: Comp, zeta: C64, eta: C64) -> Result<C64> {
    let d = eta - zeta;
    if let Surface::Sphere(_) = &model.surface {
        let ch = model.chart(k)?;
        let e = ch.cross_divided(zeta, eta);
        let r = ch.eval(zeta).w() * ch.eval(eta).w();
        return Ok((r - e * e) / (e * e * d * d));
    }
    Ok(pulled_back_q(model, k, zeta, k, eta)? - 1.0 / (d * d))
}

/// `L_R − L_Σ` in the chart of component `k`; finite on the diagonal.
pub fn l_regularized(model: &SurfaceModel, k: Comp, zeta: C64, eta: C64) -> Result<KernelValue> {
    let q = if let (Surface::Torus(t), Comp::One) = (&model.surface, k) {
        // Closed form of the regular part: no cancellation at any distance.
        let g = &t.geom;
        let u = (eta - zeta) * g.rho;
        -(g.theta.d2log_regular(u) + PI / g.tau.im) * g.rho * g.rho
    } else if (eta - zeta).norm() >= DIAGONAL_THRESHOLD {
        reg_raw(model, k, zeta, eta)?
    } else {
        // Extrapolate F(η + s·d) to s = 0 along the inward direction d.
        let dir = if eta.norm() > 1e-12 { -eta / eta.norm() } else { C64::new(1.0, 0.0) };
        let hs = [4e-3, 2e-3, 1e-3, 5e-4];
        let mut vals = Vec::new();
        for &h in &hs {
            vals.push(reg_raw(model, k, zeta, eta + dir * h)?);
        }
        richardson(&hs, &vals).0
    };
    Ok(KernelValue::new(
        neg_inv_2pii() * q,
        KernelType::DzDw,
        ChartId::Disk(k),
        ChartId::Disk(k),
    ))
}

/// `∬_D K_D(ζ, ·) ∧ ηⁿ dη` by polar quadrature (should return `ζⁿ`).
pub fn disk_reproduce(zeta: C64, n: usize, nr: usize, nt: usize) -> C64 {
    let (pts, wts) = disk_quadrature(nr, nt);
    let k = (I * 2.0 * PI).inv();
    // dη̄ ∧ dη = 2i dA.
    pts.iter()
        .zip(&wts)
        .map(|(eta, w)| {
            let d = C64::new(1.0, 0.0) - zeta * eta.conj();
            k / (d * d) * eta.powu(n as u32) * I * 2.0 * *w
        })
        .sum()
}

/// Principal value `PV ∬_D F(η) (η − ζ)⁻² dA(η)` for `F` smooth on the closed
/// disk, in polar coordinates about `ζ`: the angular mean of `e^{−2iφ}` kills
/// the `F(ζ)/ρ` part, leaving `F(ζ) log R(φ)` from the outer radius.
pub fn disk_pv(zeta: C64, f: impl Fn(C64) -> C64, nr: usize, nphi: usize) -> C64 {
    let f0 = f(zeta);
    let (xs, ws) = gauss_legendre_on(nr, 0.0, 1.0);
    (0..nphi)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / nphi as f64;
            let e = C64::from_polar(1.0, phi);
            let b = (zeta.conj() * e).re;
            let big_r = -b + (b * b + 1.0 - zeta.norm_sqr()).sqrt();
            let radial: C64 = xs
                .iter()
                .zip(&ws)
                .map(|(x, w)| {
                    let rho = x * big_r;
                    (f(zeta + e * rho) - f0) / rho * *w * big_r
                })
                .sum();
            (radial + f0 * big_r.ln()) * e.conj() * e.conj()
        })
        .sum::<C64>()
        * (2.0 * PI / nphi as f64)
}

fn random_disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> C64 {
    C64::from_polar(rmax * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

/// Symmetry of `L_R` and `L_R − L_Σ`, Hermitian symmetry of `K_R`.
pub fn verify_kernel_symmetry(model: &SurfaceModel, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    let (mut l, mut reg, mut k) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..16 {
        let (z, w) = match &model.surface {
            Surface::Torus(t) => {
                let g = &t.geom;
                let p = |rng: &mut ChaCha8Rng| g.z0 + g.tau * rng.gen::<f64>() + rng.gen::<f64>();
                (p(&mut rng), p(&mut rng))
            }
            Surface::Sphere(_) => (random_disk_point(&mut rng, 3.0), random_disk_point(&mut rng, 3.0)),
        };
        let (pz, pw) = (Point::Finite(z), Point::Finite(w));
        let a = l_r(model, pz, pw)?.value;
        l = l.max((a - l_r(model, pw, pz)?.value).norm() / a.norm().max(1.0));
        // Hermitian symmetry of the area density `2i·k` (`dw̄ ∧ dw = 2i dA`).
        let dens = |a: Point, b: Point| -> Result<C64> { Ok(k_r(model, a, b)?.value * I * 2.0) };
        k = k.max((dens(pz, pw)? - dens(pw, pz)?.conj()).norm());
        let dk = |a: C64, b: C64| -> Result<C64> { Ok(k_comp(model, Comp::One, a, b)?.value * I * 2.0) };
        let (x, y) = (random_disk_point(&mut rng, 0.9), random_disk_point(&mut rng, 0.9));
        k = k.max((dk(x, y)? - dk(y, x)?.conj()).norm());
        let b = l_regularized(model, Comp::One, x, y)?.value;
        reg = reg.max((b - l_regularized(model, Comp::One, y, x)?.value).norm() / b.norm().max(1.0));
    }
    rep.push(CheckRecord::new("kernels/symmetry L_R", "kernel-symmetry", l, 1e-10));
    rep.push(CheckRecord::new("kernels/symmetry L_R - L_comp", "kernel-symmetry", reg, 1e-9));
    rep.push(CheckRecord::new("kernels/hermitian K", "kernel-symmetry", k, 1e-14));
    Ok(rep)
}

/// Bergman reproducing property: the disk kernel on `ζⁿ dζ` (`n ≤ 2`) and, on
/// the torus, the calibrated constant against `−i/(2 Im τ)`.
pub fn verify_reproducing(model: &SurfaceModel, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let z = random_disk_point(&mut rng, 0.8);
        for n in 0..=2 {
            worst = worst.max((disk_reproduce(z, n, 96, 256) - z.powu(n as u32)).norm());
        }
    }
    rep.push(CheckRecord::new("kernels/reproducing disk", "reproducing-property", worst, 1e-8));
    if let Surface::Torus(t) = &model.surface {
        let kappa = torus_k_constant(model)?;
        // ∬ κ dw̄ ∧ dw over a fundamental domain of area Im τ.
        let r = (kappa * I * 2.0 * t.geom.tau.im - 1.0).norm();
        let oracle = (kappa - C64::new(0.0, -0.5 / t.geom.tau.im)).norm();
        rep.push(
            CheckRecord::new("kernels/reproducing torus", "reproducing-property", r, 1e-8)
                .with("kappa_vs_closed_form", oracle),
        );
    }
    Ok(rep)
}

/// `PV ∬ L_Σ ∧ ᾱ = 0` for `α = ηᵐ dη` in the Σ₁ disk chart, and the
/// nonsingular representation `PV ∬ L_R ∧ ᾱ = ∬ (L_R − L_Σ) ∧ ᾱ` there.
/// The PV part is chart independent; Σ₁ is used because its chart is the
/// short analytic one, so the area quadrature of `L_R − L_Σ` is spectral.
pub fn verify_vanishing(model: &SurfaceModel, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    let comps = [Comp::One];
    let (pts, wts) = disk_quadrature(64, 128);
    let (mut v, mut nonsing) = (0.0f64, 0.0f64);
    for k in comps {
        for _ in 0..3 {
            let z = random_disk_point(&mut rng, 0.5);
            for m in 0..4u32 {
                let abar = |e: C64| e.conj().powu(m);
                v = v.max(disk_pv(z, abar, 24, 256).norm());
                let pv_r = disk_pv(
                    z,
                    |e| {
                        let d = e - z;
                        let q = if d.norm() < 1e-12 {
                            C64::new(1.0, 0.0)
                        } else {
                            pulled_back_q(model, k, z, k, e).map_or(C64::new(f64::NAN, 0.0), |q| q * d * d)
                        };
                        q * abar(e)
                    },
                    48,
                    512,
                );
                let reg: C64 = pts
                    .iter()
                    .zip(&wts)
                    .map(|(e, w)| {
                        let r = l_regularized(model, k, z, *e).map_or(C64::new(f64::NAN, 0.0), |x| x.value);
                        r / neg_inv_2pii() * abar(*e) * *w
                    })
                    .sum();
                nonsing = nonsing.max((pv_r - reg).norm());
            }
        }
    }
    rep.push(CheckRecord::new("kernels/vanishing PV L_comp", "schiffer-vanishing", v, 1e-6));
    rep.push(CheckRecord::new("kernels/vanishing nonsingular form", "schiffer-vanishing", nonsing, 1e-6));
    Ok(rep)
}

/// Level-curve identity on Γ: for `ζ` on the unit circle of a chart and `v`
/// tangent there, `conj(K_Σ(ζ, η)·v) = −L_Σ(ζ, η)·v`.
pub fn level_curve_residual(model: &SurfaceModel, k: Comp, eta: C64, m: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 0..m {
        let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        let v = I * z;
        let l = l_comp(model, k, z, eta)?.value * v;
        let kk = k_comp(model, k, z, eta)?.value * v;
        worst = worst.max((l + kk.conj()).norm() / l.norm().max(1.0));
    }
    Ok(worst)
}
