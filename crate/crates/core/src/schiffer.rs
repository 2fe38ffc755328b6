//! Schiffer comparison operators `T(Σⱼ, Σₖ)`, the Bergman maps `S(Σₖ)` and
//! restrictions, with adjoints, spectra and the operator identities.
//!
//! Coefficient spaces use orthonormal chart bases, so their Gram matrices are
//! identities; grid spaces on the torus complement carry quadrature weights.
//! For chart-to-chart operators the matrix entry is
//! `[ζᵐηⁿ] Q(ζ, η) / √((m+1)(n+1))`, where `Q` is the pulled-back double-pole
//! kernel with the diagonal singularity removed when `j = k`. Coefficients
//! come from a two-dimensional FFT of `Q` sampled on `|ζ| = 1`, `|η| = r`.

use crate::error::{Result, SchifferError};
use crate::forms::{disk_quadrature, FormEval};
use crate::geometry::{Comp, DiskChart, Grid, Surface, SurfaceModel, TorusGeometry};
use crate::kernels::torus_k_constant;
use crate::numerics::fft::fft;
use crate::numerics::svd::singular_values;
use crate::report::{CheckRecord, Report};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpTag {
    T11,
    T12,
    T21,
    T22,
    S1,
    S2,
    Res1,
    Res2,
    TransmitExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisId {
    Holo(Comp),
    Anti(Comp),
    /// Node values of `a dz` on the torus complement.
    HoloGrid,
    /// Node values of `b dz̄` on the torus complement.
    AntiGrid,
    /// `dz / √(Im τ)` on the torus.
    Global,
}

#[derive(Clone)]
pub struct OperatorMatrix {
    pub tag: OpTag,
    pub domain: BasisId,
    pub codomain: BasisId,
    pub entries: DMatrix<C64>,
    pub gram_dom: Vec<f64>,
    pub gram_cod: Vec<f64>,
    pub grid: Option<Arc<Grid>>,
    /// Pointwise evaluators of the columns when the codomain is a grid.
    pub column_evals: Vec<FormEval>,
}

impl std::fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("tag", &self.tag)
            .field("shape", &self.entries.shape())
            .finish()
    }
}

impl OperatorMatrix {
    fn orthonormal(tag: OpTag, domain: BasisId, codomain: BasisId, entries: DMatrix<C64>) -> Self {
        let (r, c) = entries.shape();
        Self {
            tag,
            domain,
            codomain,
            entries,
            gram_dom: vec![1.0; c],
            gram_cod: vec![1.0; r],
            grid: None,
            column_evals: vec![],
        }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    /// `G_cod^{1/2} A G_dom^{-1/2}`, whose singular values are those of the operator.
    pub fn symmetrized(&self) -> DMatrix<C64> {
        let mut m = self.entries.clone();
        for i in 0..m.nrows() {
            let s = self.gram_cod[i].sqrt();
            for j in 0..m.ncols() {
                m[(i, j)] *= s / self.gram_dom[j].sqrt();
            }
        }
        m
    }

    /// Restriction to the listed domain columns.
    pub fn restrict(&self, cols: &[usize]) -> OperatorMatrix {
        let entries = DMatrix::from_fn(self.rows(), cols.len(), |i, j| self.entries[(i, cols[j])]);
        OperatorMatrix {
            tag: self.tag,
            domain: self.domain,
            codomain: self.codomain,
            entries,
            gram_dom: cols.iter().map(|&j| self.gram_dom[j]).collect(),
            gram_cod: self.gram_cod.clone(),
            grid: self.grid.clone(),
            column_evals: cols
                .iter()
                .filter_map(|&j| self.column_evals.get(j).cloned())
                .collect(),
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.symmetrized())
    }

    pub fn norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let v = &self.entries * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    /// `A^H G_cod A`, the Gram matrix of the image columns.
    pub fn image_gram(&self) -> DMatrix<C64> {
        let s = self.symmetrized();
        s.adjoint() * &s
    }

    /// Row-major entries, one matrix row per line, each cell `re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:e},{:e}", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Tag, bases, Grams and row-major `[re, im]` entries.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im]).collect())
            .collect();
        serde_json::json!({
            "tag": self.tag,
            "domain": self.domain,
            "codomain": self.codomain,
            "rows": self.rows(),
            "cols": self.cols(),
            "gram_dom": self.gram_dom,
            "gram_cod": self.gram_cod,
            "entries": entries,
        })
    }
}

/// `A* = G_dom⁻¹ Aᴴ G_cod`.
pub fn adjoint(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    if op.gram_dom.iter().chain(&op.gram_cod).any(|g| !(*g > 0.0)) {
        return Err(SchifferError::SingularGram);
    }
    let mut e = op.entries.adjoint();
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            e[(i, j)] *= op.gram_cod[j] / op.gram_dom[i];
        }
    }
    Ok(OperatorMatrix {
        tag: op.tag,
        domain: op.codomain,
        codomain: op.domain,
        entries: e,
        gram_dom: op.gram_cod.clone(),
        gram_cod: op.gram_dom.clone(),
        grid: op.grid.clone(),
        column_evals: vec![],
    })
}

/// Domain circle radius and sample count for chart-to-chart extraction.
const R_DOM: f64 = 0.9;
const P_DOM: usize = 512;
const MAX_COD: usize = 131072;

fn extract(dom: &DiskChart, cod: &DiskChart, same: bool, cols: usize, pc: usize) -> DMatrix<C64> {
    let zc = cod.eval_circle(1.0, pc);
    let ed = dom.eval_circle(R_DOM, P_DOM);
    let etas: Vec<C64> = (0..P_DOM)
        .map(|l| C64::from_polar(R_DOM, 2.0 * PI * l as f64 / P_DOM as f64))
        .collect();
    let wd: Vec<C64> = ed.iter().map(|v| v.w()).collect();
    let sd: Vec<f64> = (0..cols)
        .map(|n| (-(n as f64) * R_DOM.ln()).exp() / P_DOM as f64)
        .collect();
    let by_zeta: Vec<Vec<C64>> = (0..pc)
        .into_par_iter()
        .map(|i| {
            let a = zc[i];
            let wa = a.w();
            let zeta = C64::from_polar(1.0, 2.0 * PI * i as f64 / pc as f64);
            let mut buf: Vec<C64> = (0..P_DOM)
                .map(|l| {
                    let b = ed[l];
                    let den = b.n * a.d - a.n * b.d;
                    let mut q = wa * wd[l] / (den * den);
                    if same {
                        let d = etas[l] - zeta;
                        q -= 1.0 / (d * d);
                    }
                    q
                })
                .collect();
            fft(&mut buf);
            (0..cols).map(|n| buf[n] * sd[n]).collect()
        })
        .collect();
    let rows = pc / 2;
    let columns: Vec<Vec<C64>> = (0..cols)
        .into_par_iter()
        .map(|n| {
            let mut buf: Vec<C64> = (0..pc).map(|i| by_zeta[i][n]).collect();
            fft(&mut buf);
            (0..rows)
                .map(|m| buf[m] / (pc as f64 * (((m + 1) * (n + 1)) as f64).sqrt()))
                .collect()
        })
        .collect();
    DMatrix::from_fn(rows, cols, |m, n| columns[n][m])
}

/// Normalized coefficient matrix of the chart-to-chart operator with `cols`
/// domain modes; rows are extended until the codomain tail is below 1e-14.
pub fn chart_kernel_matrix(dom: &DiskChart, cod: &DiskChart, same: bool, cols: usize) -> DMatrix<C64> {
    let mut pc = cod.samples.max(256);
    loop {
        let m = extract(dom, cod, same, cols, pc);
        let rows = m.nrows();
        let tail = (3 * rows / 4..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm())
            .fold(0.0, f64::max);
        if tail <= 1e-14 || pc >= MAX_COD {
            let mut keep = rows;
            while keep > cols && (0..cols).all(|j| m[(keep - 1, j)].norm() < 1e-17) {
                keep -= 1;
            }
            return m.rows(0, keep).into_owned();
        }
        pc *= 2;
    }
}

/// Grunsky-type norm of a single chart: `‖T(Σ, Σ)‖` on the first `n` modes.
pub fn grunsky_screen(chart: &DiskChart, n: usize) -> f64 {
    let m = chart_kernel_matrix(chart, chart, true, n);
    singular_values(&m).first().copied().unwrap_or(0.0)
}

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn lattice_min(tau: C64) -> f64 {
    let mut d = f64::INFINITY;
    for a in -4i32..=4 {
        for b in -4i32..=4 {
            if a != 0 || b != 0 {
                d = d.min((tau * b as f64 + a as f64).norm());
            }
        }
    }
    d
}

const TORUS_ROWS: usize = 128;

/// Torus `T(Σ₁, Σ₁)` from the Taylor series of `Q(u)`, `u = η − ζ`:
/// `[ζᵐηⁿ] Q = q_{m+n} C(m+n, m) (−1)ᵐ`.
fn torus_t11(g: &TorusGeometry, cols: usize) -> DMatrix<C64> {
    let r = 0.5 * lattice_min(g.tau) / g.rho;
    let p = 512;
    let mut buf: Vec<C64> = (0..p)
        .map(|l| {
            let u = C64::from_polar(r, 2.0 * PI * l as f64 / p as f64);
            -(g.theta.d2log_regular(u * g.rho) + PI / g.tau.im) * g.rho * g.rho
        })
        .collect();
    fft(&mut buf);
    let q: Vec<C64> = (0..p / 2)
        .map(|k| buf[k] * (-(k as f64) * r.ln()).exp() / p as f64)
        .collect();
    DMatrix::from_fn(TORUS_ROWS, cols, |m, n| {
        let k = m + n;
        let s = if m % 2 == 0 { 1.0 } else { -1.0 };
        q[k] * binom(k, m) * s / (((m + 1) * (n + 1)) as f64).sqrt()
    })
}

/// Normalized `T(Σ₁, Σ₂) ē_n` at a point `z` of Σ₂, for `n < cols`:
/// `ρ [ηⁿ] F / √((n+1)π)` with `F = −(log θ₁)''(z₀ + ρη − z) − π/Im τ`.
pub fn torus_t12_at(g: &TorusGeometry, z: C64, cols: usize) -> Vec<C64> {
    let p = 128;
    let re: f64 = 0.7;
    let mut buf: Vec<C64> = (0..p)
        .map(|l| {
            let eta = C64::from_polar(re, 2.0 * PI * l as f64 / p as f64);
            -g.theta.d2log(g.z0 + eta * g.rho - z) - PI / g.tau.im
        })
        .collect();
    fft(&mut buf);
    (0..cols)
        .map(|n| buf[n] * (-(n as f64) * re.ln()).exp() / p as f64 * g.rho / ((n + 1) as f64 * PI).sqrt())
        .collect()
}

/// Σ₂ quadrature used for the torus complement.
pub fn torus_grid(g: &TorusGeometry) -> Arc<Grid> {
    Arc::new(g.sigma2_grid(48, 48))
}

fn torus_t12(g: &TorusGeometry, cols: usize) -> OperatorMatrix {
    let grid = torus_grid(g);
    let vals: Vec<Vec<C64>> = grid
        .nodes
        .par_iter()
        .map(|z| torus_t12_at(g, *z, cols))
        .collect();
    let entries = DMatrix::from_fn(grid.nodes.len(), cols, |i, n| vals[i][n]);
    let column_evals = (0..cols)
        .map(|n| {
            let gg = g.clone();
            let f: FormEval = Arc::new(move |z| (torus_t12_at(&gg, z, n + 1)[n], ZERO));
            f
        })
        .collect();
    OperatorMatrix {
        tag: OpTag::T12,
        domain: BasisId::Anti(Comp::One),
        codomain: BasisId::HoloGrid,
        entries,
        gram_dom: vec![1.0; cols],
        gram_cod: grid.weights.clone(),
        grid: Some(grid),
        column_evals,
    }
}

/// Matrix of `T(Σⱼ, Σₖ)` on the first `n` anti-holomorphic modes of Σⱼ.
pub fn assemble_t(model: &SurfaceModel, j: Comp, k: Comp, n: usize) -> Result<OperatorMatrix> {
    let tag = match (j, k) {
        (Comp::One, Comp::One) => OpTag::T11,
        (Comp::One, Comp::Two) => OpTag::T12,
        (Comp::Two, Comp::One) => OpTag::T21,
        (Comp::Two, Comp::Two) => OpTag::T22,
    };
    match &model.surface {
        Surface::Sphere(_) => {
            let dom = model.chart(j)?;
            let cod = model.chart(k)?;
            let m = chart_kernel_matrix(dom, cod, j == k, n);
            Ok(OperatorMatrix::orthonormal(tag, BasisId::Anti(j), BasisId::Holo(k), m))
        }
        Surface::Torus(t) => match (j, k) {
            (Comp::One, Comp::One) => Ok(OperatorMatrix::orthonormal(
                tag,
                BasisId::Anti(j),
                BasisId::Holo(k),
                torus_t11(&t.geom, n),
            )),
            (Comp::One, Comp::Two) => Ok(torus_t12(&t.geom, n)),
            _ => Err(SchifferError::NotSimplyConnected(2)),
        },
    }
}

/// `S(Σ₁)` on the torus (`1 × n`, codomain `dz/√Im τ`) by polar quadrature of
/// `∬ K_R ∧ ηⁿ dη`; a `0 × n` matrix on the sphere.
pub fn assemble_s(model: &SurfaceModel, k: Comp, n: usize) -> Result<OperatorMatrix> {
    let tag = if k == Comp::One { OpTag::S1 } else { OpTag::S2 };
    match &model.surface {
        Surface::Sphere(_) => Ok(OperatorMatrix::orthonormal(
            tag,
            BasisId::Holo(k),
            BasisId::Global,
            DMatrix::zeros(0, n),
        )),
        Surface::Torus(t) => {
            if k == Comp::Two {
                return Err(SchifferError::NotSimplyConnected(2));
            }
            let kappa = torus_k_constant(model)?;
            let g = &t.geom;
            let (pts, wts) = disk_quadrature(96, 256);
            let row: Vec<C64> = (0..n)
                .map(|m| {
                    let integral: C64 = pts.iter().zip(&wts).map(|(z, w)| z.powi(m as i32) * *w).sum();
                    // K_R ∧ e_m = κ dz ∧ ... : dw̄ ∧ ρ ηᵐ dη = 2i ρ ηᵐ dA.
                    let scale = ((m + 1) as f64 / PI).sqrt();
                    kappa * C64::new(0.0, 2.0) * g.rho * integral * scale * g.tau.im.sqrt()
                })
                .collect();
            Ok(OperatorMatrix::orthonormal(
                tag,
                BasisId::Holo(k),
                BasisId::Global,
                DMatrix::from_row_slice(1, n, &row),
            ))
        }
    }
}

/// Restriction `A(R) → A(Σₖ)`; on the torus `dz/√Im τ ↦ ρ dζ /√Im τ`.
pub fn assemble_res(model: &SurfaceModel, k: Comp, n: usize) -> Result<OperatorMatrix> {
    let tag = if k == Comp::One { OpTag::Res1 } else { OpTag::Res2 };
    match &model.surface {
        Surface::Sphere(_) => Ok(OperatorMatrix::orthonormal(
            tag,
            BasisId::Global,
            BasisId::Holo(k),
            DMatrix::zeros(n, 0),
        )),
        Surface::Torus(t) => {
            if k == Comp::Two {
                return Err(SchifferError::NotSimplyConnected(2));
            }
            let mut m = DMatrix::zeros(n, 1);
            m[(0, 0)] = C64::new(t.geom.rho * PI.sqrt() / t.geom.tau.im.sqrt(), 0.0);
            Ok(OperatorMatrix::orthonormal(tag, BasisId::Global, BasisId::Holo(k), m))
        }
    }
}

/// Normalized coefficients (first `rows`) of `T(Σ₂, Σ₁) β̄` on the torus,
/// for `β̄ = b dz̄` given by node values `b` on the Σ₂ grid.
pub fn torus_t21_apply(g: &TorusGeometry, grid: &Grid, b: &[C64], rows: usize) -> Vec<C64> {
    let p = 64;
    let rz: f64 = 0.6;
    let i2pi = C64::new(0.0, 2.0 * PI);
    let vals: Vec<C64> = (0..p)
        .into_par_iter()
        .map(|l| {
            let zeta = C64::from_polar(rz, 2.0 * PI * l as f64 / p as f64);
            let z = g.z0 + zeta * g.rho;
            // ∬ ℓ(z, w) dw ∧ b dw̄ = −2i Σ ℓ(z, wᵢ) bᵢ wtᵢ; ρ from dz = ρ dζ.
            let s: C64 = grid
                .nodes
                .iter()
                .zip(&grid.weights)
                .zip(b)
                .map(|((w, wt), bi)| {
                    let l = g.theta.d2log(*w - z) / i2pi + (C64::new(0.0, 2.0 * g.tau.im)).inv();
                    l * bi * *wt
                })
                .sum();
            s * C64::new(0.0, -2.0) * g.rho
        })
        .collect();
    let mut buf = vals;
    fft(&mut buf);
    (0..rows)
        .map(|m| buf[m] * (-(m as f64) * rz.ln()).exp() / p as f64 * crate::forms::basis_scale(m))
        .collect()
}

fn op_norm(m: &DMatrix<C64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Residuals of `T(Σ₁,Σ₂)* = T̄(Σ₂,Σ₁)`, `T(Σ₁,Σ₁)* = T̄(Σ₁,Σ₁)` and, on the
/// torus, `S(Σ₁) = Res(Σ₁)*`.
pub fn verify_adjoint_identity(model: &SurfaceModel, n: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (tol_cross, tol_self) = if model.genus() == 0 { (1e-8, 1e-8) } else { (1e-4, 1e-6) };
    let t11 = assemble_t(model, Comp::One, Comp::One, n)?;
    let b11 = t11.entries.rows(0, n).into_owned();
    let self_res = op_norm(&(b11.adjoint() - b11.map(|z| z.conj())));
    rep.push(CheckRecord::new("adjoint/self T11", "adjoint-identity", self_res, tol_self));
    match &model.surface {
        Surface::Sphere(_) => {
            let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
            let t21 = assemble_t(model, Comp::Two, Comp::One, n)?;
            let a = t12.entries.rows(0, n).into_owned();
            let b = t21.entries.rows(0, n).into_owned();
            let blk = op_norm(&(a.adjoint() - b.map(|z| z.conj())));
            rep.push(CheckRecord::new("adjoint/cross block", "adjoint-identity", blk, tol_cross));
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let al = random_vec(&mut rng, n);
                let be = random_vec(&mut rng, n);
                // ⟨T12 ᾱ, β⟩ on Σ₂ against ⟨ᾱ, conj(T21 β̄)⟩ on Σ₁.
                let lhs = dot(&t12.apply(&al)[..n], &be);
                let t21b: Vec<C64> = t21.apply(&be.iter().map(|z| z.conj()).collect::<Vec<_>>());
                let rhs = dot(&al, &t21b[..n].iter().map(|z| z.conj()).collect::<Vec<_>>());
                worst = worst.max((lhs - rhs).norm());
            }
            rep.push(CheckRecord::new("adjoint/pairing", "adjoint-identity", worst, tol_cross));
        }
        Surface::Torus(t) => {
            let g = &t.geom;
            let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
            let grid = t12.grid.clone().unwrap();
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                // ᾱ on low modes; β a holomorphic form on Σ₂: dz plus image columns.
                let mut al = random_vec(&mut rng, 6);
                al.resize(n, ZERO);
                let coef = random_vec(&mut rng, 4);
                let c0 = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let beta: Vec<C64> = (0..grid.nodes.len())
                    .map(|i| c0 + (0..4).map(|k| coef[k] * t12.entries[(i, k + 1)]).sum::<C64>())
                    .collect();
                let img = t12.apply(&al);
                let lhs: C64 = img
                    .iter()
                    .zip(&beta)
                    .zip(&grid.weights)
                    .map(|((x, y), w)| x * y.conj() * *w)
                    .sum();
                let bb: Vec<C64> = beta.iter().map(|z| z.conj()).collect();
                let t21b = torus_t21_apply(g, &grid, &bb, n);
                let rhs = dot(&al, &t21b.iter().map(|z| z.conj()).collect::<Vec<_>>());
                worst = worst.max((lhs - rhs).norm());
            }
            rep.push(CheckRecord::new("adjoint/pairing", "adjoint-identity", worst, tol_cross));
            let s = assemble_s(model, Comp::One, n)?;
            let r = assemble_res(model, Comp::One, n)?;
            let mut w2: f64 = 0.0;
            for _ in 0..10 {
                let al = random_vec(&mut rng, n);
                let be = random_vec(&mut rng, 1);
                let lhs = dot(&s.apply(&al), &be);
                let rhs = dot(&al, &r.apply(&be));
                w2 = w2.max((lhs - rhs).norm());
            }
            rep.push(CheckRecord::new("adjoint/S = Res*", "bergman-residue-adjoint", w2, 1e-8));
        }
    }
    Ok(rep)
}

/// `T11* T11 + T12* T12 (+ S̄* S̄) − I` on the first `n` modes.
pub fn complete_identity_residual(model: &SurfaceModel, n: usize) -> Result<DMatrix<C64>> {
    let t11 = assemble_t(model, Comp::One, Comp::One, n)?;
    let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
    let mut r = t11.image_gram() + t12.image_gram() - DMatrix::<C64>::identity(n, n);
    if model.genus() == 1 {
        let s = assemble_s(model, Comp::One, n)?;
        let sbar = s.entries.map(|z| z.conj());
        r += sbar.adjoint() * sbar;
    }
    Ok(r)
}

pub fn verify_complete_identity(model: &SurfaceModel, n: usize) -> Result<Report> {
    let r = complete_identity_residual(model, n)?;
    let tol = if model.genus() == 0 { 1e-6 } else { 1e-4 };
    let mut rep = Report::new();
    rep.push(
        CheckRecord::new("complete identity", "complete-identity", op_norm(&r), tol)
            .with("worst_entry", max_entry(&r)),
    );
    Ok(rep)
}

/// Domain modes spanning V₁: all modes on the sphere, `n ≥ 1` on the torus.
pub fn v1_columns(model: &SurfaceModel, n: usize) -> Vec<usize> {
    let start = if model.genus() == 1 { 1 } else { 0 };
    (start..n).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grunsky {
    /// `‖T(Σ₁,Σ₁)|V₁‖`.
    pub nu: f64,
    pub t11_singular_values: Vec<f64>,
    /// Singular values of `T(Σ₁,Σ₂)|V₁` (absent without a complement).
    pub t12_singular_values: Option<Vec<f64>>,
    pub sigma_min: Option<f64>,
    /// `√(1 − ν²)`.
    pub bound: f64,
}

pub fn grunsky_norm(model: &SurfaceModel, n: usize) -> Result<Grunsky> {
    let cols = v1_columns(model, n);
    let t11 = assemble_t(model, Comp::One, Comp::One, n)?.restrict(&cols);
    let sv = t11.singular_values();
    let nu = sv.first().copied().unwrap_or(0.0);
    let t12_sv = if model.genus() == 1 || model.has_complement() {
        let t12 = assemble_t(model, Comp::One, Comp::Two, n)?.restrict(&cols);
        Some(t12.singular_values())
    } else {
        None
    };
    let sigma_min = t12_sv.as_ref().and_then(|s| s.last().copied());
    Ok(Grunsky {
        nu,
        t11_singular_values: sv,
        t12_singular_values: t12_sv,
        sigma_min,
        bound: (1.0 - nu * nu).max(0.0).sqrt(),
    })
}

/// Grunsky norm below one, the strengthened bound `σ_min(T12|V₁) ≥ √(1 − ν²)`,
/// the ellipse closed forms `ν = |c|`, `σ_n = √(1 − c²ⁿ)` (n ≤ 16), and
/// exactness of the T12 columns on the torus.
pub fn verify_grunsky(model: &SurfaceModel, n: usize) -> Result<(Report, Grunsky)> {
    let g = grunsky_norm(model, n)?;
    let mut rep = Report::new();
    rep.push(
        CheckRecord::new("grunsky/norm below one", "grunsky-inequality", g.nu, 1.0 - f64::EPSILON)
            .with("nu", g.nu),
    );
    if let Some(smin) = g.sigma_min {
        rep.push(
            CheckRecord::new("grunsky/strengthened bound", "isomorphism-onto-exact", (g.bound - smin).max(0.0), 1e-4)
                .with("sigma_min", smin)
                .with("bound", g.bound),
        );
    }
    if let Some(c) = model.spec.ellipse_parameter() {
        rep.push(CheckRecord::new("grunsky/ellipse norm", "grunsky-inequality", (g.nu - c.abs()).abs(), 1e-6));
        if let Some(sv) = &g.t12_singular_values {
            // Ascending: the n-th smallest is √(1 − c²ⁿ).
            let mut asc = sv.clone();
            asc.sort_by(f64::total_cmp);
            let worst = asc
                .iter()
                .take(16)
                .enumerate()
                .map(|(k, s)| (s - (1.0 - c.powi(2 * (k as i32 + 1))).sqrt()).abs())
                .fold(0.0, f64::max);
            rep.push(CheckRecord::new("grunsky/ellipse T12 singular values", "isomorphism-onto-exact", worst, 1e-6));
        }
    }
    if model.genus() == 1 {
        let (p, _) = t12_period_residual(model, n)?;
        rep.push(CheckRecord::new("grunsky/T12 columns exact", "exactness", p, 1e-7));
    }
    Ok((rep, g))
}

/// Largest period over the two cycles of each T12 column with `n ≥ 1` (torus).
pub fn t12_period_residual(model: &SurfaceModel, n: usize) -> Result<(f64, Vec<[C64; 2]>)> {
    let g = model.torus().ok_or(SchifferError::NotSimplyConnected(2))?;
    let t12 = assemble_t(model, Comp::One, Comp::Two, n)?;
    let cycles = g.cycles(64);
    let per: Vec<[C64; 2]> = (0..n)
        .into_par_iter()
        .map(|k| {
            let f = &t12.column_evals[k];
            [cycles[0].integrate(|z| f(z).0), cycles[1].integrate(|z| f(z).0)]
        })
        .collect();
    let worst = per
        .iter()
        .skip(1)
        .flat_map(|p| p.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    Ok((worst, per))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_model, CurveSpec};

    #[test]
    fn circle_t11_vanishes_and_t12_is_minus_identity() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let t11 = assemble_t(&m, Comp::One, Comp::One, 8).unwrap();
        assert!(max_entry(&t11.entries) < 1e-12);
        let t12 = assemble_t(&m, Comp::One, Comp::Two, 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let e = if i == j { -1.0 } else { 0.0 };
                assert!((t12.entries[(i, j)] - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn exports_are_row_major() {
        let m = build_model(&CurveSpec::circle(), 8, 1e-10).unwrap();
        let t12 = assemble_t(&m, Comp::One, Comp::Two, 8).unwrap();
        let csv = t12.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), t12.rows());
        assert_eq!(lines[0].split(',').count(), 2 * t12.cols());
        let first: f64 = lines[0].split(',').next().unwrap().parse().unwrap();
        assert_eq!(first, t12.entries[(0, 0)].re);
        let j = t12.to_json();
        assert_eq!(j["rows"], t12.rows());
        assert_eq!(j["entries"][1][0][1].as_f64().unwrap(), t12.entries[(1, 0)].im);
    }

    #[test]
    fn ellipse_t11_is_diagonal_in_powers_of_c() {
        let c: f64 = 0.3;
        let m = build_model(&CurveSpec::ellipse(c), 8, 1e-10).unwrap();
        let t11 = assemble_t(&m, Comp::One, Comp::One, 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let e = if i == j { -c.powi(i as i32 + 1) } else { 0.0 };
                assert!((t11.entries[(i, j)] - e).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn adjoint_is_an_involution() {
        let e = DMatrix::from_fn(3, 2, |i, j| C64::new(i as f64, j as f64 + 0.5));
        let mut op = OperatorMatrix::orthonormal(OpTag::T12, BasisId::Anti(Comp::One), BasisId::Holo(Comp::Two), e);
        op.gram_cod = vec![0.5, 2.0, 3.0];
        op.gram_dom = vec![1.5, 0.25];
        let back = adjoint(&adjoint(&op).unwrap()).unwrap();
        assert!(max_entry(&(back.entries - &op.entries)) < 1e-14);
    }

    #[test]
    fn torus_s_matches_closed_form() {
        let spec = CurveSpec::torus(C64::new(0.0, 1.0), C64::new(0.5, 0.5), 0.2);
        let m = build_model(&spec, 8, 1e-10).unwrap();
        let s = assemble_s(&m, Comp::One, 8).unwrap();
        assert!((s.entries[(0, 0)] - C64::new(0.2 * PI.sqrt(), 0.0)).norm() < 1e-8);
        for j in 1..8 {
            assert!(s.entries[(0, j)].norm() < 1e-8);
        }
    }
}
