//! Disk charts `φ: D → Ĉ` in projective form `φ = N/D`, so that charts whose
//! image contains ∞ (exterior components) are handled without special cases.

use crate::error::{Result, SchifferError};
use crate::numerics::fft::{derivative_coeffs, eval_on_circle};
use crate::numerics::next_pow2;
use crate::numerics::poly::{divided_difference, horner_d};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Finite(C64),
    Infinity,
}

impl Point {
    /// Homogeneous coordinates `(n, d)` with `point = n/d`.
    pub fn homogeneous(self) -> (C64, C64) {
        match self {
            Point::Finite(z) => (z, ONE),
            Point::Infinity => (ONE, ZERO),
        }
    }

    pub fn from_homogeneous(n: C64, d: C64) -> Point {
        if d.norm() <= 1e-300 * n.norm() || d == ZERO {
            Point::Infinity
        } else {
            Point::Finite(n / d)
        }
    }

    pub fn finite(self) -> Option<C64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere.
    pub fn chordal(self, other: Point) -> f64 {
        let (a, b) = self.homogeneous();
        let (c, d) = other.homogeneous();
        let num = (a * d - b * c).norm();
        let den = (a.norm_sqr() + b.norm_sqr()).sqrt() * (c.norm_sqr() + d.norm_sqr()).sqrt();
        2.0 * num / den
    }
}

/// Values of `N, D, N', D'` at one chart point.
#[derive(Debug, Clone, Copy)]
pub struct ChartVal {
    pub n: C64,
    pub d: C64,
    pub dn: C64,
    pub dd: C64,
}

impl ChartVal {
    pub fn point(&self) -> Point {
        Point::from_homogeneous(self.n, self.d)
    }
    /// `W = N'D − ND'`, so that `φ' = W/D²`.
    pub fn w(&self) -> C64 {
        self.dn * self.d - self.n * self.dd
    }
    /// `φ'(ζ)`; only meaningful where `D ≠ 0`.
    pub fn deriv(&self) -> C64 {
        self.w() / (self.d * self.d)
    }
}

#[derive(Debug, Clone)]
pub struct DiskChart {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    dnum: Vec<C64>,
    dden: Vec<C64>,
    /// Sample count that resolves the chart's series on the unit circle.
    pub samples: usize,
    seeds: Vec<(C64, Point)>,
}

impl DiskChart {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Self {
        let len = num.len().max(den.len());
        let dnum = derivative_coeffs(&num);
        let dden = derivative_coeffs(&den);
        let mut c = Self {
            num,
            den,
            dnum,
            dden,
            samples: next_pow2(2 * len + 2).max(64),
            seeds: Vec::new(),
        };
        c.build_seeds();
        c
    }

    /// Interior map `f` with `f(0)` finite: `(N, D) = (f, 1)`.
    pub fn interior(f: Vec<C64>) -> Self {
        Self::new(f, vec![ONE])
    }

    /// Exterior map `g(z) = z + b₀ + Σ b_k z^{-k}` read in the chart `ζ = 1/z`:
    /// `N = 1 + b₀ζ + Σ b_k ζ^{k+1}`, `D = ζ`. `b[0] = b₀`.
    pub fn exterior(b: &[C64]) -> Self {
        let mut num = vec![ONE];
        num.extend_from_slice(b);
        if num.len() < 2 {
            num.push(ZERO);
        }
        Self::new(num, vec![ZERO, ONE])
    }

    /// Exterior chart `a + 1/f̃` built from a map `f̃` of the disk onto the
    /// inverted region `1/(Ω − a)`.
    pub fn inverted(a: C64, ft: &[C64]) -> Self {
        let num: Vec<C64> = std::iter::once(ONE + a * ft[0])
            .chain(ft.iter().skip(1).map(|c| a * c))
            .collect();
        Self::new(num, ft.to_vec())
    }

    /// Affine chart `z₀ + ρζ`.
    pub fn affine(z0: C64, rho: f64) -> Self {
        Self::new(vec![z0, C64::new(rho, 0.0)], vec![ONE])
    }

    pub fn eval(&self, z: C64) -> ChartVal {
        let (n, dn) = horner_d(&self.num, z);
        let (d, dd) = horner_d(&self.den, z);
        ChartVal { n, d, dn, dd }
    }

    pub fn point(&self, z: C64) -> Point {
        self.eval(z).point()
    }

    /// `(N(b)D(a) − N(a)D(b))/(b − a)`, computed without cancellation as `b → a`.
    pub fn cross_divided(&self, a: C64, b: C64) -> C64 {
        let va = self.eval(a);
        va.d * divided_difference(&self.num, a, b) - va.n * divided_difference(&self.den, a, b)
    }

    /// Chart values at `r e^{2πij/p}` by FFT.
    pub fn eval_circle(&self, r: f64, p: usize) -> Vec<ChartVal> {
        let n = eval_on_circle(&self.num, r, p);
        let d = eval_on_circle(&self.den, r, p);
        let dn = eval_on_circle(&self.dnum, r, p);
        let dd = eval_on_circle(&self.dden, r, p);
        (0..p)
            .map(|j| ChartVal {
                n: n[j],
                d: d[j],
                dn: dn[j],
                dd: dd[j],
            })
            .collect()
    }

    /// Points of the image of `|ζ| = r`, `p` equispaced samples.
    pub fn circle_points(&self, r: f64, p: usize) -> Vec<Point> {
        self.eval_circle(r, p).iter().map(|v| v.point()).collect()
    }

    fn build_seeds(&mut self) {
        let na = 96;
        let radii = [0.0, 0.2, 0.4, 0.6, 0.75, 0.85, 0.92, 0.97, 1.0];
        let mut seeds = Vec::new();
        for &r in &radii {
            if r == 0.0 {
                seeds.push((ZERO, self.point(ZERO)));
                continue;
            }
            let vals = self.eval_circle(r, na);
            for (j, v) in vals.iter().enumerate() {
                let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / na as f64);
                seeds.push((z, v.point()));
            }
        }
        self.seeds = seeds;
    }

    /// Preimage of `w` under the chart by Newton iteration from the nearest
    /// seed. Fails when the iteration leaves the closed disk or stalls.
    pub fn inverse(&self, w: Point) -> Result<C64> {
        let (wn, wd) = w.homogeneous();
        // Solve N(ζ)·wd − D(ζ)·wn = 0, scaled so the larger coordinate is 1.
        let s = if wn.norm() > wd.norm() { wn } else { wd };
        let (a, b) = (wd / s, wn / s);
        let mut best = (f64::INFINITY, ZERO);
        for (z, p) in &self.seeds {
            let d = p.chordal(w);
            if d < best.0 {
                best = (d, *z);
            }
        }
        let mut z = best.1;
        for _ in 0..50 {
            let v = self.eval(z);
            let f = v.n * a - v.d * b;
            let df = v.dn * a - v.dd * b;
            if df == ZERO {
                break;
            }
            let mut step = f / df;
            // Keep iterates inside a slightly enlarged disk.
            let mut zn = z - step;
            let mut guard = 0;
            while zn.norm() > 1.05 && guard < 30 {
                step *= 0.5;
                zn = z - step;
                guard += 1;
            }
            z = zn;
            if step.norm() < 1e-15 * (1.0 + z.norm()) {
                let v = self.eval(z);
                if v.point().chordal(w) < 1e-10 && z.norm() <= 1.0 + 1e-9 {
                    return Ok(z);
                }
                break;
            }
        }
        let v = self.eval(z);
        if v.point().chordal(w) < 1e-12 && z.norm() <= 1.0 + 1e-9 {
            return Ok(z);
        }
        Err(SchifferError::InverseMapDiverged(format!("{w:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_chart_is_reciprocal_of_g() {
        let c = 0.5;
        let ch = DiskChart::exterior(&[ZERO, C64::new(c, 0.0)]);
        let zeta = C64::new(0.3, 0.4);
        let z = zeta.inv();
        let g = z + c / z;
        match ch.point(zeta) {
            Point::Finite(w) => assert!((w - g).norm() < 1e-14),
            Point::Infinity => panic!(),
        }
        assert_eq!(ch.point(ZERO), Point::Infinity);
        // φ'(ζ) = −g'(1/ζ)/ζ².
        let d = ch.eval(zeta).deriv();
        let expect = -(ONE - c / (z * z)) / (zeta * zeta);
        assert!((d - expect).norm() < 1e-13);
    }

    #[test]
    fn inverse_roundtrip_including_infinity() {
        let ch = DiskChart::exterior(&[C64::new(0.1, 0.0), C64::new(0.3, 0.1)]);
        for &zeta in &[C64::new(0.2, -0.5), C64::new(-0.7, 0.1), C64::new(0.0, 0.95)] {
            let w = ch.point(zeta);
            let back = ch.inverse(w).unwrap();
            assert!((back - zeta).norm() < 1e-12);
        }
        assert!(ch.inverse(Point::Infinity).unwrap().norm() < 1e-14);
    }

    #[test]
    fn circle_evaluation_matches_pointwise() {
        let ch = DiskChart::exterior(&[ZERO, C64::new(0.5, 0.0)]);
        let vals = ch.eval_circle(0.9, 8);
        for (j, v) in vals.iter().enumerate() {
            let z = C64::from_polar(0.9, 2.0 * std::f64::consts::PI * j as f64 / 8.0);
            let e = ch.eval(z);
            assert!((e.w() - v.w()).norm() < 1e-13);
        }
    }
}
