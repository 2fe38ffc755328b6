//! Surface models: the Riemann sphere or a flat torus split by a Jordan curve
//! Γ into Σ₁ and Σ₂. Every simply connected component carries a disk chart;
//! on the sphere one chart is given analytically and the other is completed
//! numerically, and the two are related through the boundary correspondence.

pub mod chart;
pub mod completion;
pub mod green;
pub mod level;
pub mod theta;
pub mod torus;
pub mod welding;

pub use chart::{ChartVal, DiskChart, Point};
pub use level::SampledCurve;
pub use torus::{Cycle, Grid, TorusGeometry};

use crate::error::{Result, SchifferError};
use completion::{complete_interior, polygon_centroid, polygon_is_simple, winding_number};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use welding::Correspondence;

/// Minimum distance between the base point `q` and Γ.
pub const Q_NEAR_CURVE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    Circle,
    ExteriorMap,
    InteriorMap,
    TorusDisk,
}

/// Curve description. `coeffs` holds `[b₀, b₁, …]` for an exterior map
/// `g(z) = z + b₀ + Σ b_k z^{-k}` and `[a₂, a₃, …]` for an interior map
/// `f(z) = z + Σ a_k z^k`; it is ignored for the circle and the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    #[serde(default)]
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

impl CurveSpec {
    pub fn circle() -> Self {
        Self {
            kind: CurveKind::Circle,
            coeffs: vec![],
            tau: None,
            center: None,
            rho: None,
        }
    }

    /// `g(z) = z + c/z`.
    pub fn ellipse(c: f64) -> Self {
        Self {
            kind: CurveKind::ExteriorMap,
            coeffs: vec![[0.0, 0.0], [c, 0.0]],
            ..Self::circle()
        }
    }

    pub fn exterior(b: &[C64]) -> Self {
        Self {
            kind: CurveKind::ExteriorMap,
            coeffs: b.iter().map(|z| [z.re, z.im]).collect(),
            ..Self::circle()
        }
    }

    /// `f(z) = z + Σ_{k≥2} a_k z^k` with `a = [a₂, a₃, …]`.
    pub fn interior(a: &[C64]) -> Self {
        Self {
            kind: CurveKind::InteriorMap,
            coeffs: a.iter().map(|z| [z.re, z.im]).collect(),
            ..Self::circle()
        }
    }

    pub fn torus(tau: C64, z0: C64, rho: f64) -> Self {
        Self {
            kind: CurveKind::TorusDisk,
            coeffs: vec![],
            tau: Some([tau.re, tau.im]),
            center: Some([z0.re, z0.im]),
            rho: Some(rho),
        }
    }

    /// `c` when the curve is the ellipse `g(z) = z + c/z` with real `c`.
    pub fn ellipse_parameter(&self) -> Option<f64> {
        if self.kind != CurveKind::ExteriorMap || self.coeffs.len() > 2 {
            return None;
        }
        let b0 = self.coeffs.first().copied().unwrap_or([0.0, 0.0]);
        let b1 = self.coeffs.get(1).copied().unwrap_or([0.0, 0.0]);
        (b0 == [0.0, 0.0] && b1[1] == 0.0).then_some(b1[0])
    }

    pub fn genus(&self) -> u32 {
        if self.kind == CurveKind::TorusDisk {
            1
        } else {
            0
        }
    }

    fn coeff_vec(&self) -> Vec<C64> {
        self.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect()
    }
}

/// One of the two components; `One` is the side Γ is positively oriented for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comp {
    One,
    Two,
}

impl Comp {
    pub fn idx(self) -> usize {
        match self {
            Comp::One => 0,
            Comp::Two => 1,
        }
    }
    pub fn other(self) -> Comp {
        match self {
            Comp::One => Comp::Two,
            Comp::Two => Comp::One,
        }
    }
    pub fn number(self) -> u8 {
        self.idx() as u8 + 1
    }
}

/// Whether failure to compute the complementary map aborts the build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ComplementPolicy {
    #[default]
    Required,
    Optional,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub truncation: usize,
    pub tol: f64,
    pub complement: ComplementPolicy,
    pub q: Option<Point>,
    pub p1: Option<Point>,
}

impl BuildOptions {
    pub fn new(truncation: usize) -> Self {
        Self {
            truncation,
            tol: 1e-10,
            complement: ComplementPolicy::Required,
            q: None,
            p1: None,
        }
    }
}

/// Diagnostics recorded while building.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BuildInfo {
    pub ks_size: usize,
    pub fft_size: usize,
    pub map_terms: usize,
    pub boundary_mismatch: f64,
    pub complement_error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SphereModel {
    charts: [Option<DiskChart>; 2],
    /// Correspondence `t ↦ θ₂(t)` with `θ₁ = −t`; `None` without a complement.
    corr: Option<Correspondence>,
    pub sigma1_interior: bool,
    /// Dense samples of Γ (positively oriented for Σ₁).
    pub boundary: Vec<C64>,
}

#[derive(Debug, Clone)]
pub struct TorusModel {
    pub geom: TorusGeometry,
    pub chart: DiskChart,
    /// Calibrated Bergman-kernel constant, filled on first use.
    pub kappa: std::sync::OnceLock<C64>,
}

#[derive(Debug, Clone)]
pub enum Surface {
    Sphere(SphereModel),
    Torus(TorusModel),
}

/// A built model. Immutable after construction and shareable across threads.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub spec: CurveSpec,
    pub truncation: usize,
    pub tol: f64,
    pub surface: Surface,
    pub q: Point,
    pub p1: Point,
    pub p2: Point,
    pub info: BuildInfo,
}

/// Build with default options (complement required).
pub fn build_model(spec: &CurveSpec, truncation: usize, tol: f64) -> Result<SurfaceModel> {
    let mut o = BuildOptions::new(truncation);
    o.tol = tol;
    build_model_with(spec, &o)
}

pub fn build_model_with(spec: &CurveSpec, opts: &BuildOptions) -> Result<SurfaceModel> {
    if opts.truncation < 8 {
        return Err(SchifferError::Config(format!(
            "truncation {} below the minimum of 8",
            opts.truncation
        )));
    }
    let coeffs = spec.coeff_vec();
    let mut info = BuildInfo::default();
    let (surface, default_q) = match spec.kind {
        CurveKind::Circle => {
            let c1 = DiskChart::interior(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
            let c2 = DiskChart::exterior(&[C64::new(0.0, 0.0)]);
            let boundary = c1.circle_points(1.0, 2048).iter().filter_map(|p| p.finite()).collect();
            (
                Surface::Sphere(SphereModel {
                    charts: [Some(c1), Some(c2)],
                    corr: Some(Correspondence::identity()),
                    sigma1_interior: true,
                    boundary,
                }),
                Point::Infinity,
            )
        }
        CurveKind::ExteriorMap => {
            if coeffs.is_empty() {
                return Err(SchifferError::Config("exterior map needs [b0, b1, ...]".into()));
            }
            let c1 = DiskChart::exterior(&coeffs);
            // Γ positively oriented for the exterior: clockwise in the plane.
            let boundary: Vec<C64> = c1.circle_points(1.0, 2048).iter().filter_map(|p| p.finite()).collect();
            let ccw: Vec<C64> = boundary.iter().rev().copied().collect();
            screen_exterior(&coeffs, &ccw)?;
            let mut centre = coeffs[0];
            if winding_number(&ccw, centre) != 1 {
                centre = polygon_centroid(&ccw);
                if winding_number(&ccw, centre) != 1 {
                    return Err(SchifferError::NonUnivalent("no interior reference point".into()));
                }
            }
            let b = coeffs.clone();
            // η(t) = g(e^{it}) traverses Γ counterclockwise.
            let curve = move |t: f64| {
                let e = C64::from_polar(1.0, t);
                let mut z = e + b[0];
                let mut dz = C64::new(0.0, 1.0) * e;
                let mut ek = e.inv();
                for (k, bk) in b.iter().enumerate().skip(1) {
                    z += bk * ek;
                    dz += bk * ek * C64::new(0.0, -(k as f64));
                    ek /= e;
                }
                (z, dz)
            };
            let (c2, corr) = match complete_interior(curve, centre) {
                Ok(comp) => {
                    info.ks_size = comp.ks_size;
                    info.fft_size = comp.fft_size;
                    info.map_terms = comp.coeffs.len();
                    (Some(DiskChart::interior(comp.coeffs)), Some(comp.corr))
                }
                Err(e) => handle_complement_failure(opts, e, &mut info)?,
            };
            (
                Surface::Sphere(SphereModel {
                    charts: [Some(c1), c2],
                    corr,
                    sigma1_interior: false,
                    boundary,
                }),
                Point::Finite(centre),
            )
        }
        CurveKind::InteriorMap => {
            let mut f = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
            f.extend_from_slice(&coeffs);
            let c1 = DiskChart::interior(f.clone());
            let boundary: Vec<C64> = c1.circle_points(1.0, 2048).iter().filter_map(|p| p.finite()).collect();
            screen_interior(&f, &boundary)?;
            let a = f[0];
            let fc = f.clone();
            // η̃(t) = 1/(γ(−t) − a), γ(s) = f(e^{is}).
            let curve = move |t: f64| {
                let e = C64::from_polar(1.0, -t);
                let (g, dg) = crate::numerics::poly::horner_d(&fc, e);
                let dgds = dg * C64::new(0.0, 1.0) * e;
                let u = g - a;
                (u.inv(), dgds / (u * u))
            };
            let (c2, corr) = match complete_interior(curve, C64::new(0.0, 0.0)) {
                Ok(comp) => {
                    info.ks_size = comp.ks_size;
                    info.fft_size = comp.fft_size;
                    info.map_terms = comp.coeffs.len();
                    (Some(DiskChart::inverted(a, &comp.coeffs)), Some(comp.corr))
                }
                Err(e) => handle_complement_failure(opts, e, &mut info)?,
            };
            (
                Surface::Sphere(SphereModel {
                    charts: [Some(c1), c2],
                    corr,
                    sigma1_interior: true,
                    boundary,
                }),
                Point::Infinity,
            )
        }
        CurveKind::TorusDisk => {
            let tau = spec
                .tau
                .ok_or_else(|| SchifferError::Config("torus needs tau".into()))?;
            let tau = C64::new(tau[0], tau[1]);
            let z0 = spec.center.map(|c| C64::new(c[0], c[1])).unwrap_or(C64::new(0.0, 0.0));
            let rho = spec
                .rho
                .ok_or_else(|| SchifferError::Config("torus needs rho".into()))?;
            let geom = TorusGeometry::new(tau, z0, rho)?;
            let chart = DiskChart::affine(z0, rho);
            let q = z0 + (tau + 1.0) * 0.4;
            (
                Surface::Torus(TorusModel {
                    geom,
                    chart,
                    kappa: std::sync::OnceLock::new(),
                }),
                Point::Finite(q),
            )
        }
    };
    let mut model = SurfaceModel {
        spec: spec.clone(),
        truncation: opts.truncation,
        tol: opts.tol,
        surface,
        q: default_q,
        p1: Point::Infinity,
        p2: default_q,
        info,
    };
    model.p1 = match opts.p1 {
        Some(p) => p,
        None => model.chart(Comp::One)?.point(C64::new(0.0, 0.0)),
    };
    if let Ok(c2) = model.chart(Comp::Two) {
        model.p2 = c2.point(C64::new(0.0, 0.0));
    }
    if let Some(q) = opts.q {
        model.q = q;
    }
    model.check_q(model.q)?;
    if model.component_of(model.p1) != Some(Comp::One) {
        return Err(SchifferError::Config("p1 must lie in the first component".into()));
    }
    if model.has_complement() && model.genus() == 0 {
        model.info.boundary_mismatch = model.boundary_mismatch(4096)?;
        if model.info.boundary_mismatch > 1e-8_f64.max(opts.tol) {
            return Err(SchifferError::IterationDiverged(format!(
                "charts disagree on the curve by {:.2e}",
                model.info.boundary_mismatch
            )));
        }
        let slope = model.sphere().unwrap().corr.as_ref().unwrap().min_slope(4096);
        if slope <= 0.0 {
            return Err(SchifferError::NonMonotone);
        }
    }
    if spec.kind == CurveKind::ExteriorMap {
        let nu = crate::schiffer::grunsky_screen(model.chart(Comp::One)?, opts.truncation);
        if !(nu < 1.0) {
            return Err(SchifferError::NonUnivalent(format!("Grunsky norm {nu:.6} is not below 1")));
        }
    }
    Ok(model)
}

fn handle_complement_failure(
    opts: &BuildOptions,
    e: SchifferError,
    info: &mut BuildInfo,
) -> Result<(Option<DiskChart>, Option<Correspondence>)> {
    match (opts.complement, &e) {
        (ComplementPolicy::Optional, SchifferError::IterationDiverged(msg)) => {
            info.complement_error = Some(msg.clone());
            Ok((None, None))
        }
        _ => Err(e),
    }
}

fn screen_exterior(b: &[C64], ccw: &[C64]) -> Result<()> {
    // g'(z) = 1 − Σ k b_k z^{-k-1} must not vanish on |z| ≥ 1.
    for &r in &[1.0, 1.1, 1.5, 3.0] {
        for j in 0..512 {
            let z = C64::from_polar(r, 2.0 * PI * j as f64 / 512.0);
            let mut d = C64::new(1.0, 0.0);
            for (k, bk) in b.iter().enumerate().skip(1) {
                d -= bk * k as f64 * z.powi(-(k as i32) - 1);
            }
            if d.norm() < 1e-9 {
                return Err(SchifferError::NonUnivalent(format!("g' vanishes near {z}")));
            }
        }
    }
    if !polygon_is_simple(ccw) {
        return Err(SchifferError::NonJordan("image of the unit circle self-intersects".into()));
    }
    Ok(())
}

fn screen_interior(f: &[C64], boundary: &[C64]) -> Result<()> {
    for i in 0..=16 {
        let r = i as f64 / 16.0;
        for j in 0..256 {
            let z = C64::from_polar(r, 2.0 * PI * j as f64 / 256.0);
            let (_, d) = crate::numerics::poly::horner_d(f, z);
            if d.norm() < 1e-9 {
                return Err(SchifferError::NonUnivalent(format!("f' vanishes near {z}")));
            }
        }
    }
    if !polygon_is_simple(boundary) {
        return Err(SchifferError::NonJordan("image of the unit circle self-intersects".into()));
    }
    Ok(())
}

impl SurfaceModel {
    pub fn genus(&self) -> u32 {
        match self.surface {
            Surface::Sphere(_) => 0,
            Surface::Torus(_) => 1,
        }
    }

    pub fn sphere(&self) -> Option<&SphereModel> {
        match &self.surface {
            Surface::Sphere(s) => Some(s),
            _ => None,
        }
    }

    pub fn torus(&self) -> Option<&TorusGeometry> {
        match &self.surface {
            Surface::Torus(t) => Some(&t.geom),
            _ => None,
        }
    }

    pub fn has_complement(&self) -> bool {
        match &self.surface {
            Surface::Sphere(s) => s.charts[1].is_some(),
            Surface::Torus(_) => false,
        }
    }

    /// Disk chart of a simply connected component.
    pub fn chart(&self, k: Comp) -> Result<&DiskChart> {
        match (&self.surface, k) {
            (Surface::Sphere(s), _) => s.charts[k.idx()]
                .as_ref()
                .ok_or(SchifferError::WeldingUnavailable),
            (Surface::Torus(t), Comp::One) => Ok(&t.chart),
            (Surface::Torus(_), Comp::Two) => Err(SchifferError::NotSimplyConnected(2)),
        }
    }

    /// Component containing `p`, or `None` within 1e-12 of Γ.
    pub fn component_of(&self, p: Point) -> Option<Comp> {
        match &self.surface {
            Surface::Sphere(s) => {
                let inside = match p {
                    Point::Infinity => false,
                    Point::Finite(z) => {
                        if min_dist(&s.boundary, z) < 1e-12 {
                            return None;
                        }
                        winding_number(&s.boundary, z) != 0
                    }
                };
                Some(if inside == s.sigma1_interior { Comp::One } else { Comp::Two })
            }
            Surface::Torus(t) => {
                let z = p.finite()?;
                if t.geom.dist_to_curve(z) < 1e-12 {
                    None
                } else if t.geom.in_sigma1(z) {
                    Some(Comp::One)
                } else {
                    Some(Comp::Two)
                }
            }
        }
    }

    /// Euclidean distance from `p` to Γ (∞ for the point at infinity).
    pub fn dist_to_curve(&self, p: Point) -> f64 {
        match (&self.surface, p) {
            (_, Point::Infinity) => f64::INFINITY,
            (Surface::Sphere(s), Point::Finite(z)) => min_dist(&s.boundary, z),
            (Surface::Torus(t), Point::Finite(z)) => t.geom.dist_to_curve(z),
        }
    }

    /// Validates a base point for the jump: in Σ₂ and away from Γ.
    pub fn check_q(&self, q: Point) -> Result<()> {
        let d = self.dist_to_curve(q);
        if d < Q_NEAR_CURVE {
            return Err(SchifferError::QNearCurve(d));
        }
        if self.component_of(q) != Some(Comp::Two) {
            return Err(SchifferError::Config("q must lie in the second component".into()));
        }
        Ok(())
    }

    fn corr(&self) -> Result<&Correspondence> {
        self.sphere()
            .and_then(|s| s.corr.as_ref())
            .ok_or(SchifferError::WeldingUnavailable)
    }

    /// Chart-angle correspondence Σ₁ → Σ₂ on a uniform θ₁ grid:
    /// `φ₁(e^{iθ₁}) = φ₂(e^{iω₁₂(θ₁)})`.
    pub fn omega12_uniform(&self, m: usize) -> Result<Vec<f64>> {
        let th = self.corr()?.theta_uniform(m);
        Ok((0..m)
            .map(|j| if j == 0 { th[0] } else { th[m - j] - 2.0 * PI })
            .collect())
    }

    /// Chart-angle correspondence Σ₂ → Σ₁ on a uniform θ₂ grid.
    pub fn omega21_uniform(&self, m: usize) -> Result<Vec<f64>> {
        Ok(self.corr()?.invert_uniform(m).into_iter().map(|t| -t).collect())
    }

    pub fn omega12(&self, theta1: f64) -> Result<f64> {
        Ok(self.corr()?.theta(-theta1))
    }

    pub fn omega21(&self, theta2: f64) -> Result<f64> {
        Ok(-self.corr()?.t_of(theta2))
    }

    /// Sup over `m` samples of `|φ₁(e^{iω₂₁(θ)}) − φ₂(e^{iθ})|`.
    pub fn boundary_mismatch(&self, m: usize) -> Result<f64> {
        let c1 = self.chart(Comp::One)?;
        let c2 = self.chart(Comp::Two)?;
        let w = self.omega21_uniform(m)?;
        let p2 = c2.circle_points(1.0, m);
        let mut worst: f64 = 0.0;
        for (j, th) in w.iter().enumerate() {
            let a = c1.point(C64::from_polar(1.0, *th));
            match (a, p2[j]) {
                (Point::Finite(x), Point::Finite(y)) => worst = worst.max((x - y).norm()),
                (a, b) => worst = worst.max(a.chordal(b)),
            }
        }
        Ok(worst)
    }

    /// Welding in the interior/exterior map sense: `f(e^{iσ(θ)}) = g(e^{iθ})`
    /// where `f` maps the disk to the bounded side and `g` the exterior of the
    /// disk to the unbounded side, on `m` equispaced θ.
    pub fn welding(&self, m: usize) -> Result<Vec<f64>> {
        let s = self.sphere().ok_or(SchifferError::NotSimplyConnected(2))?;
        let corr = s.corr.as_ref().ok_or(SchifferError::WeldingUnavailable)?;
        let out: Vec<f64> = if s.sigma1_interior {
            // g(e^{iθ}) is the Σ₂ chart at angle −θ, so σ(θ) = ω₂₁(−θ).
            (0..m)
                .map(|j| -corr.t_of(-2.0 * PI * j as f64 / m as f64))
                .collect()
        } else {
            corr.theta_uniform(m)
        };
        for j in 1..m {
            if out[j] <= out[j - 1] {
                return Err(SchifferError::NonMonotone);
            }
        }
        Ok(out)
    }
}

fn min_dist(poly: &[C64], z: C64) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let d = b - a;
        let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        best = best.min((a + d * t - z).norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_model_has_identity_welding() {
        let m = build_model(&CurveSpec::circle(), 16, 1e-10).unwrap();
        let w = m.welding(64).unwrap();
        for (j, s) in w.iter().enumerate() {
            assert!((s - 2.0 * PI * j as f64 / 64.0).abs() < 1e-15);
        }
        assert_eq!(m.q, Point::Infinity);
        assert_eq!(m.component_of(Point::Finite(C64::new(0.2, 0.1))), Some(Comp::One));
    }

    #[test]
    fn ellipse_interior_map_lies_on_ellipse() {
        let c = 0.5;
        let m = build_model(&CurveSpec::ellipse(c), 16, 1e-10).unwrap();
        let ch = m.chart(Comp::Two).unwrap();
        for j in 0..97 {
            let th = 2.0 * PI * j as f64 / 97.0;
            let w = ch.point(C64::from_polar(1.0, th)).finite().unwrap();
            let f = (w.re / (1.0 + c)).powi(2) + (w.im / (1.0 - c)).powi(2) - 1.0;
            assert!(f.abs() < 1e-8, "{j} {f}");
        }
        assert!(m.info.boundary_mismatch < 1e-8);
    }

    #[test]
    fn welding_defining_equation() {
        let m = build_model(&CurveSpec::ellipse(0.5), 16, 1e-10).unwrap();
        let sig = m.welding(128).unwrap();
        let f = m.chart(Comp::Two).unwrap();
        for (j, s) in sig.iter().enumerate() {
            let th = 2.0 * PI * j as f64 / 128.0;
            let e = C64::from_polar(1.0, th);
            let g = e + 0.5 / e;
            let fv = f.point(C64::from_polar(1.0, *s)).finite().unwrap();
            assert!((fv - g).norm() < 1e-8);
        }
    }

    #[test]
    fn rejects_degenerate_ellipse() {
        assert!(build_model(&CurveSpec::ellipse(1.0), 16, 1e-10).is_err());
    }

    #[test]
    fn torus_q_default_is_in_sigma2() {
        let spec = CurveSpec::torus(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.2);
        let m = build_model(&spec, 16, 1e-10).unwrap();
        assert_eq!(m.component_of(m.q), Some(Comp::Two));
        assert!(m.dist_to_curve(m.q) > Q_NEAR_CURVE);
    }
}
