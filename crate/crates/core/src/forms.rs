//! One-forms and harmonic Dirichlet functions on the components.
//!
//! On a simply connected component forms are stored as coefficients in the
//! chart basis `{ζⁿ dζ}` and `{ζ̄ⁿ dζ̄}`; the inner product
//! `(ω₁, ω₂) = ½∬ ω₁ ∧ ∗ω̄₂` makes this basis orthogonal with
//! `‖ζⁿ dζ‖² = π/(n+1)`. On the torus complement forms are node values on a
//! quadrature grid, optionally with an evaluator for line integrals.

use crate::error::{Result, SchifferError};
use crate::geometry::{Comp, Cycle, Grid, SurfaceModel};
use crate::numerics::fft::{eval_on_circle, laurent_from_samples};
use crate::numerics::quad::gauss_legendre_on;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `‖ζⁿ dζ‖² = π/(n+1)`.
pub fn disk_gram(n: usize) -> f64 {
    PI / (n as f64 + 1.0)
}

/// Orthonormal-basis scale: coefficient of `ζⁿdζ` times this gives the
/// coefficient of the unit vector `√((n+1)/π) ζⁿ dζ`.
pub fn basis_scale(n: usize) -> f64 {
    disk_gram(n).sqrt()
}

/// Polar rule on the unit disk: `nr` Gauss-Legendre radii × `nt` angles.
pub fn disk_quadrature(nr: usize, nt: usize) -> (Vec<C64>, Vec<f64>) {
    let (rs, wr) = gauss_legendre_on(nr, 0.0, 1.0);
    let mut pts = Vec::with_capacity(nr * nt);
    let mut wts = Vec::with_capacity(nr * nt);
    for (r, w) in rs.iter().zip(&wr) {
        for j in 0..nt {
            pts.push(C64::from_polar(*r, 2.0 * PI * j as f64 / nt as f64));
            wts.push(w * r * 2.0 * PI / nt as f64);
        }
    }
    (pts, wts)
}

/// Area of the disk of radius `rho` by the default polar rule.
pub fn disk_area_quadrature(rho: f64) -> f64 {
    let (_, w) = disk_quadrature(96, 256);
    w.iter().sum::<f64>() * rho * rho
}

/// Gram matrix `(ζᵐ dζ, ζⁿ dζ)` assembled by polar quadrature.
pub fn gram_by_quadrature(n: usize, nr: usize, nt: usize) -> DMatrix<C64> {
    let (pts, wts) = disk_quadrature(nr, nt);
    DMatrix::from_fn(n, n, |i, j| {
        pts.iter()
            .zip(&wts)
            .map(|(z, w)| z.powi(i as i32) * z.conj().powi(j as i32) * *w)
            .sum()
    })
}

/// Coefficients of `Σ a_n ζⁿ dζ + Σ b_n ζ̄ⁿ dζ̄`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoeffForm {
    pub holo: Vec<C64>,
    pub anti: Vec<C64>,
}

/// Evaluator `z ↦ (a(z), b(z))` for `a dz + b dz̄` in the plane coordinate.
pub type FormEval = Arc<dyn Fn(C64) -> (C64, C64) + Send + Sync>;

#[derive(Clone)]
pub struct GridForm {
    pub grid: Arc<Grid>,
    /// `dz` coefficients at the nodes.
    pub dz: Vec<C64>,
    /// `dz̄` coefficients at the nodes.
    pub dzbar: Vec<C64>,
    pub eval: Option<FormEval>,
}

impl std::fmt::Debug for GridForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridForm")
            .field("nodes", &self.grid.nodes.len())
            .field("has_eval", &self.eval.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum FormRep {
    Coeff(CoeffForm),
    Grid(GridForm),
}

#[derive(Debug, Clone)]
pub struct OneForm {
    pub comp: Comp,
    pub rep: FormRep,
}

impl OneForm {
    pub fn holo(comp: Comp, a: Vec<C64>) -> Self {
        Self {
            comp,
            rep: FormRep::Coeff(CoeffForm { holo: a, anti: vec![] }),
        }
    }

    pub fn anti(comp: Comp, b: Vec<C64>) -> Self {
        Self {
            comp,
            rep: FormRep::Coeff(CoeffForm { holo: vec![], anti: b }),
        }
    }

    pub fn grid(comp: Comp, grid: Arc<Grid>, dz: Vec<C64>, dzbar: Vec<C64>, eval: Option<FormEval>) -> Self {
        Self {
            comp,
            rep: FormRep::Grid(GridForm { grid, dz, dzbar, eval }),
        }
    }

    pub fn coeffs(&self) -> Option<&CoeffForm> {
        match &self.rep {
            FormRep::Coeff(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        match &self.rep {
            FormRep::Coeff(c) => c.anti.iter().all(|b| *b == ZERO),
            FormRep::Grid(g) => g.dzbar.iter().all(|b| *b == ZERO),
        }
    }

    /// Complex conjugate form.
    pub fn conj(&self) -> Self {
        let cj = |v: &[C64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
        let rep = match &self.rep {
            FormRep::Coeff(c) => FormRep::Coeff(CoeffForm {
                holo: cj(&c.anti),
                anti: cj(&c.holo),
            }),
            FormRep::Grid(g) => FormRep::Grid(GridForm {
                grid: g.grid.clone(),
                dz: cj(&g.dzbar),
                dzbar: cj(&g.dz),
                eval: g.eval.clone().map(|f| {
                    let f: FormEval = Arc::new(move |z| {
                        let (a, b) = f(z);
                        (b.conj(), a.conj())
                    });
                    f
                }),
            }),
        };
        Self { comp: self.comp, rep }
    }

    pub fn norm(&self) -> f64 {
        inner_product(self, self).map(|v| v.re.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }
}

fn weighted_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(n, (x, y))| x * y.conj() * disk_gram(n))
        .sum()
}

/// `(ω₁, ω₂) = ½∬ ω₁ ∧ ∗ω̄₂`.
pub fn inner_product(a: &OneForm, b: &OneForm) -> Result<C64> {
    if a.comp != b.comp {
        return Err(SchifferError::ComponentMismatch);
    }
    match (&a.rep, &b.rep) {
        (FormRep::Coeff(x), FormRep::Coeff(y)) => Ok(weighted_dot(&x.holo, &y.holo) + weighted_dot(&x.anti, &y.anti)),
        (FormRep::Grid(x), FormRep::Grid(y)) => {
            if !Arc::ptr_eq(&x.grid, &y.grid) && x.grid.nodes.len() != y.grid.nodes.len() {
                return Err(SchifferError::ComponentMismatch);
            }
            Ok(x.grid
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| (x.dz[i] * y.dz[i].conj() + x.dzbar[i] * y.dzbar[i].conj()) * *w)
                .sum())
        }
        _ => Err(SchifferError::ComponentMismatch),
    }
}

/// Harmonic function `c + Σ_{n≥1} a_n ζⁿ + Σ_{n≥1} b_n ζ̄ⁿ` in a disk chart.
/// `holo[0]` is `a₁`, `anti[0]` is `b₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicFun {
    pub comp: Comp,
    pub c: C64,
    pub holo: Vec<C64>,
    pub anti: Vec<C64>,
}

impl HarmonicFun {
    pub fn zero(comp: Comp) -> Self {
        Self {
            comp,
            c: ZERO,
            holo: vec![],
            anti: vec![],
        }
    }

    pub fn new(comp: Comp, c: C64, holo: Vec<C64>, anti: Vec<C64>) -> Self {
        Self { comp, c, holo, anti }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.anti.iter().all(|b| b.norm() == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut s = self.c;
        let mut zp = z;
        let mut zb = z.conj();
        for n in 0..self.holo.len().max(self.anti.len()) {
            if let Some(a) = self.holo.get(n) {
                s += a * zp;
            }
            if let Some(b) = self.anti.get(n) {
                s += b * zb;
            }
            zp *= z;
            zb *= z.conj();
        }
        s
    }

    /// Values on `|ζ| = r` at `m` equispaced angles.
    pub fn circle_values(&self, r: f64, m: usize) -> Vec<C64> {
        let mut a = vec![self.c];
        a.extend_from_slice(&self.holo);
        let mut b = vec![ZERO];
        b.extend(self.anti.iter().map(|z| z.conj()));
        let hv = eval_on_circle(&a, r, m);
        let bv = eval_on_circle(&b, r, m);
        hv.iter().zip(&bv).map(|(x, y)| x + y.conj()).collect()
    }

    /// Harmonic extension of boundary samples on the unit circle.
    pub fn from_boundary(comp: Comp, samples: &[C64], keep: usize) -> Self {
        let l = laurent_from_samples(samples, 1.0);
        let k = keep.min(l.neg.len());
        Self {
            comp,
            c: l.nonneg[0],
            holo: l.nonneg[1..=keep.min(l.nonneg.len() - 1)].to_vec(),
            anti: l.neg[..k].to_vec(),
        }
    }

    /// Dirichlet seminorm squared, `π Σ n (|a_n|² + |b_n|²)`.
    pub fn dirichlet_sq(&self) -> f64 {
        let s: f64 = self
            .holo
            .iter()
            .enumerate()
            .map(|(i, a)| (i + 1) as f64 * a.norm_sqr())
            .chain(self.anti.iter().enumerate().map(|(i, b)| (i + 1) as f64 * b.norm_sqr()))
            .sum();
        PI * s
    }

    pub fn dirichlet_norm(&self) -> f64 {
        self.dirichlet_sq().sqrt()
    }

    pub fn dirichlet_inner(&self, other: &HarmonicFun) -> C64 {
        let f = |x: &[C64], y: &[C64]| {
            x.iter()
                .zip(y)
                .enumerate()
                .map(|(i, (a, b))| a * b.conj() * (i + 1) as f64)
                .sum::<C64>()
        };
        (f(&self.holo, &other.holo) + f(&self.anti, &other.anti)) * PI
    }

    pub fn partial(&self) -> OneForm {
        OneForm::holo(self.comp, self.holo.iter().enumerate().map(|(i, a)| a * (i + 1) as f64).collect())
    }

    pub fn partial_bar(&self) -> OneForm {
        OneForm::anti(self.comp, self.anti.iter().enumerate().map(|(i, b)| b * (i + 1) as f64).collect())
    }

    pub fn d(&self) -> OneForm {
        let h = self.partial();
        let a = self.partial_bar();
        OneForm {
            comp: self.comp,
            rep: FormRep::Coeff(CoeffForm {
                holo: h.coeffs().unwrap().holo.clone(),
                anti: a.coeffs().unwrap().anti.clone(),
            }),
        }
    }

    /// Sets the constant so that the function vanishes at the chart point `z`.
    pub fn normalize_at(&mut self, z: C64) {
        let v = self.eval(z);
        self.c -= v;
    }

    pub fn sub(&self, o: &HarmonicFun) -> HarmonicFun {
        let sub = |x: &[C64], y: &[C64]| {
            (0..x.len().max(y.len()))
                .map(|i| x.get(i).copied().unwrap_or(ZERO) - y.get(i).copied().unwrap_or(ZERO))
                .collect::<Vec<_>>()
        };
        HarmonicFun {
            comp: self.comp,
            c: self.c - o.c,
            holo: sub(&self.holo, &o.holo),
            anti: sub(&self.anti, &o.anti),
        }
    }

    pub fn scale(&self, s: C64) -> HarmonicFun {
        HarmonicFun {
            comp: self.comp,
            c: self.c * s,
            holo: self.holo.iter().map(|a| a * s).collect(),
            anti: self.anti.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, o: &HarmonicFun) -> HarmonicFun {
        self.sub(&o.scale(C64::new(-1.0, 0.0)))
    }
}

/// `∂̄h = ᾱ` with `h` anti-holomorphic: `b_n = (coeff of ζ̄^{n−1} dζ̄)/n`.
pub fn dbar_solve(alpha: &OneForm) -> Result<HarmonicFun> {
    let c = alpha
        .coeffs()
        .ok_or(SchifferError::NotSimplyConnected(alpha.comp.number()))?;
    if c.holo.iter().any(|a| a.norm() != 0.0) {
        return Err(SchifferError::NotHolomorphic(c.holo.iter().map(|a| a.norm()).fold(0.0, f64::max)));
    }
    Ok(HarmonicFun {
        comp: alpha.comp,
        c: ZERO,
        holo: vec![],
        anti: c.anti.iter().enumerate().map(|(i, b)| b / (i + 1) as f64).collect(),
    })
}

/// Line integrals of `ω` over cycles. Coefficient forms live on simply
/// connected components, where every closed form is exact.
pub fn periods(form: &OneForm, cycles: &[Cycle]) -> Result<Vec<C64>> {
    match &form.rep {
        FormRep::Coeff(_) => Ok(vec![ZERO; cycles.len()]),
        FormRep::Grid(g) => {
            let f = g
                .eval
                .as_ref()
                .ok_or_else(|| SchifferError::OperatorUnavailable("grid form without evaluator".into()))?;
            Ok(cycles
                .iter()
                .map(|c| {
                    let m = c.points.len() as f64;
                    c.points
                        .iter()
                        .zip(&c.tangent)
                        .map(|(z, t)| {
                            let (a, b) = f(*z);
                            a * t + b * t.conj()
                        })
                        .sum::<C64>()
                        / m
                })
                .collect())
        }
    }
}

/// Cycles in Σ₂ of the model (empty on the sphere).
pub fn model_cycles(model: &SurfaceModel, m: usize) -> Vec<Cycle> {
    match model.torus() {
        Some(t) => {
            let c = t.cycles(m);
            for cy in &c {
                debug_assert!(cy.points.iter().all(|z| !t.in_sigma1(*z)));
            }
            c.to_vec()
        }
        None => vec![],
    }
}

/// Orthogonal projection of an anti-holomorphic form on Σ₁ onto V₁, the
/// complement of the restrictions of global anti-holomorphic forms.
pub fn project_v1(model: &SurfaceModel, alpha: &OneForm) -> Result<OneForm> {
    if alpha.comp != Comp::One {
        return Err(SchifferError::ComponentMismatch);
    }
    let Some(t) = model.torus() else {
        return Ok(alpha.clone());
    };
    // dz̄ restricted to Σ₁ is ρ dζ̄ in the chart.
    let u = OneForm::anti(Comp::One, vec![C64::new(t.rho, 0.0)]);
    let coef = inner_product(alpha, &u)? / inner_product(&u, &u)?;
    let c = alpha.coeffs().ok_or(SchifferError::NotSimplyConnected(1))?;
    let mut anti = c.anti.clone();
    if anti.is_empty() {
        anti.push(ZERO);
    }
    anti[0] -= coef * t.rho;
    Ok(OneForm {
        comp: Comp::One,
        rep: FormRep::Coeff(CoeffForm {
            holo: c.holo.clone(),
            anti,
        }),
    })
}

/// Admissibility of jump data. On the torus the residual is
/// `∬_{Σ₁} ∂̄h ∧ dz`, computed by polar quadrature in the chart.
pub fn check_w1(model: &SurfaceModel, h: &HarmonicFun, tol: f64) -> (bool, Vec<C64>) {
    let Some(t) = model.torus() else {
        return (true, vec![]);
    };
    let (pts, wts) = disk_quadrature(48, 128);
    let dbar = h.partial_bar();
    let b = &dbar.coeffs().unwrap().anti;
    // ∂̄h ∧ dz = β(ζ) dζ̄ ∧ ρ dζ = 2iρ β dA.
    let r: C64 = pts
        .iter()
        .zip(&wts)
        .map(|(z, w)| crate::numerics::poly::horner(b, z.conj()) * *w)
        .sum::<C64>()
        * C64::new(0.0, 2.0 * t.rho);
    (r.norm() <= tol, vec![r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_by_quadrature_is_diagonal_pi_over_n_plus_one() {
        let g = gram_by_quadrature(12, 96, 256);
        for i in 0..12 {
            for j in 0..12 {
                let e = if i == j { disk_gram(i) } else { 0.0 };
                assert!((g[(i, j)] - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_of_zeta_plus_conj() {
        let h = HarmonicFun::new(Comp::One, ZERO, vec![C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0)]);
        assert_eq!(h.partial().coeffs().unwrap().holo, vec![C64::new(1.0, 0.0)]);
        assert_eq!(h.partial_bar().coeffs().unwrap().anti, vec![C64::new(1.0, 0.0)]);
        let n2 = h.partial().norm().powi(2) + h.partial_bar().norm().powi(2);
        assert!((h.dirichlet_sq() - n2).abs() < 1e-12);
    }

    #[test]
    fn holo_and_anti_are_orthogonal() {
        let a = OneForm::holo(Comp::One, vec![C64::new(1.0, 2.0); 5]);
        let b = OneForm::anti(Comp::One, vec![C64::new(-3.0, 1.0); 5]);
        assert_eq!(inner_product(&a, &b).unwrap(), ZERO);
    }

    #[test]
    fn dbar_solve_roundtrip() {
        let al = OneForm::anti(Comp::One, vec![ZERO, ZERO, C64::new(3.0, 0.0)]);
        let h = dbar_solve(&al).unwrap();
        assert_eq!(h.anti, vec![ZERO, ZERO, C64::new(1.0, 0.0)]);
        assert_eq!(h.partial_bar().coeffs().unwrap().anti, al.coeffs().unwrap().anti);
    }

    #[test]
    fn circle_values_and_boundary_roundtrip() {
        let h = HarmonicFun::new(
            Comp::One,
            C64::new(0.5, 0.0),
            vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
            vec![C64::new(0.0, -1.0)],
        );
        let v = h.circle_values(1.0, 32);
        for (j, x) in v.iter().enumerate() {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0);
            assert!((h.eval(z) - x).norm() < 1e-14);
        }
        let back = HarmonicFun::from_boundary(Comp::One, &v, 4);
        assert!((back.holo[1] - C64::new(0.0, 2.0)).norm() < 1e-14);
        assert!((back.anti[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
    }
}
