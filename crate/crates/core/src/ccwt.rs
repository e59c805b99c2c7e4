//! Forward and inverse complex continuous wavelet transforms, plus the 1D
//! baseline.
//!
//! For each scale the forward transform is
//!
//! ```text
//! W(μ, κ) = (1/μ) ∫ d²η/π g(η) ψ*((η - κ)/μ)
//! ```
//!
//! which on a uniform grid with `κ` on the signal nodes is a 2D
//! cross-correlation of the trapezoid-weighted samples with the dilated
//! wavelet. [`Engine::Direct`] sums it from a table of wavelet values at every
//! lag; [`Engine::Fft`] does the same sum as a zero-padded FFT convolution.
//! The inverse
//!
//! ```text
//! g(η) = (1/C′ψ) ∫ dμ/μ⁴ ∫ d²κ/π W(μ, κ) ψ((η - κ)/μ)
//! ```
//!
//! is the matching convolution with `ψ`. Scales are independent and run in
//! parallel; every plane is reduced in a fixed order, so results do not
//! depend on the thread count.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft2::{convolve_lags, padded, Fft2};
use crate::grid::{scale_weights, ComplexPlaneGrid, Field, ScaleGrid, DECAY_THRESHOLD};
use crate::wavelets::{MotherWavelet, WaveletKind};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Direct,
    #[default]
    Fft,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(Engine::Direct),
            "fft" => Ok(Engine::Fft),
            other => Err(Error::Parse(format!("unknown engine '{other}' (expected direct or fft)"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Direct => "direct",
            Engine::Fft => "fft",
        })
    }
}

/// `W(μ, κ)` on a scale grid times a κ grid, one row-major plane per scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CcwtCoefficients {
    scales: ScaleGrid,
    kappa_grid: ComplexPlaneGrid,
    planes: Vec<Vec<Complex64>>,
}

impl CcwtCoefficients {
    pub fn new(scales: ScaleGrid, kappa_grid: ComplexPlaneGrid, planes: Vec<Vec<Complex64>>) -> Result<Self> {
        if planes.len() != scales.len() {
            return Err(Error::InvalidParameter(format!("{} planes for {} scales", planes.len(), scales.len())));
        }
        for (k, p) in planes.iter().enumerate() {
            if p.len() != kappa_grid.len() {
                return Err(Error::InvalidParameter(format!("plane {k} has {} values, grid has {}", p.len(), kappa_grid.len())));
            }
            if p.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::NonFinite(format!("coefficient plane {k}")));
            }
        }
        Ok(Self { scales, kappa_grid, planes })
    }

    pub fn zeros(scales: ScaleGrid, kappa_grid: ComplexPlaneGrid) -> Self {
        let planes = vec![vec![ZERO; kappa_grid.len()]; scales.len()];
        Self { scales, kappa_grid, planes }
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn kappa_grid(&self) -> &ComplexPlaneGrid {
        &self.kappa_grid
    }

    pub fn planes(&self) -> &[Vec<Complex64>] {
        &self.planes
    }

    pub fn plane(&self, k: usize) -> &[Complex64] {
        &self.planes[k]
    }

    pub fn plane_field(&self, k: usize) -> Field {
        Field::new(self.kappa_grid, self.planes[k].clone()).expect("planes are validated")
    }

    pub fn at(&self, k: usize, a: usize, b: usize) -> Complex64 {
        self.planes[k][self.kappa_grid.index(a, b)]
    }

    pub fn max_abs(&self) -> f64 {
        self.planes.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `a W₁ + b W₂` on a shared layout.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_layout(other)?;
        let planes = self.planes.iter().zip(&other.planes).map(|(p, q)| p.iter().zip(q).map(|(x, y)| a * x + b * y).collect()).collect();
        Ok(Self { scales: self.scales.clone(), kappa_grid: self.kappa_grid, planes })
    }

    /// Largest per-scale deviation `max_κ |W₁ - W₂| / max_κ |W₁|`. Planes
    /// that vanish identically in `self` compare by absolute difference.
    pub fn max_plane_rel_diff(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        let mut worst = 0.0f64;
        for (p, q) in self.planes.iter().zip(&other.planes) {
            let scale = p.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let diff = p.iter().zip(q).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
        }
        Ok(worst)
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.scales.values() != other.scales.values() || !self.kappa_grid.same_nodes(&other.kappa_grid) {
            return Err(Error::InvalidParameter("coefficient sets have different layouts".into()));
        }
        Ok(())
    }
}

fn check_wavelet(w: &MotherWavelet) -> Result<()> {
    if w.kind() == WaveletKind::MexicanHat1D {
        return Err(Error::Unsupported("the 1D Mexican hat cannot analyze complex-plane fields".into()));
    }
    if !w.is_admissible() {
        return Err(Error::NonAdmissible { defect: w.admissibility_defect().norm() });
    }
    Ok(())
}

fn check_forward_inputs(g: &Field, w: &MotherWavelet) -> Result<()> {
    check_wavelet(w)?;
    g.check_decay(DECAY_THRESHOLD)
}

/// Direct-quadrature forward transform with `κ` on the nodes of `g`.
pub fn forward(g: &Field, w: &MotherWavelet, scales: &ScaleGrid) -> Result<CcwtCoefficients> {
    transform(g, w, scales, Engine::Direct)
}

/// FFT-correlation forward transform with `κ` on the nodes of `g`.
pub fn forward_fast(g: &Field, w: &MotherWavelet, scales: &ScaleGrid) -> Result<CcwtCoefficients> {
    transform(g, w, scales, Engine::Fft)
}

pub fn transform(g: &Field, w: &MotherWavelet, scales: &ScaleGrid, engine: Engine) -> Result<CcwtCoefficients> {
    check_forward_inputs(g, w)?;
    let grid = *g.grid();
    let weighted = g.trapezoid_weighted();
    let planes = match engine {
        Engine::Direct => scales.values().par_iter().map(|&mu| direct_plane(&weighted, &grid, w, mu)).collect(),
        Engine::Fft => {
            let fft = Fft2::new(padded(grid.nx), padded(grid.ny));
            scales.values().par_iter().map(|&mu| fft_plane(&fft, &weighted, &grid, w, mu)).collect()
        }
    };
    CcwtCoefficients::new(scales.clone(), grid, planes)
}

/// Forward transform on an arbitrary κ grid, by direct quadrature.
pub fn forward_on(g: &Field, w: &MotherWavelet, scales: &ScaleGrid, kappa_grid: &ComplexPlaneGrid) -> Result<CcwtCoefficients> {
    if kappa_grid.same_nodes(g.grid()) {
        return forward(g, w, scales);
    }
    check_forward_inputs(g, w)?;
    let weighted = g.trapezoid_weighted();
    let planes = scales
        .values()
        .par_iter()
        .map(|&mu| kappa_grid.nodes().map(|(_, _, kappa)| point_sum(&weighted, g.grid(), w, mu, kappa)).collect())
        .collect();
    CcwtCoefficients::new(scales.clone(), *kappa_grid, planes)
}

/// `W(μ, κ)` at a single, arbitrary point.
pub fn forward_at(g: &Field, w: &MotherWavelet, mu: f64, kappa: Complex64) -> Result<Complex64> {
    check_scale(mu)?;
    check_forward_inputs(g, w)?;
    Ok(point_sum(&g.trapezoid_weighted(), g.grid(), w, mu, kappa))
}

fn check_scale(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {mu}")));
    }
    Ok(())
}

fn point_sum(weighted: &[Complex64], grid: &ComplexPlaneGrid, w: &MotherWavelet, mu: f64, kappa: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for (i, j, eta) in grid.nodes() {
        acc += weighted[grid.index(i, j)] * w.eval((eta - kappa) / mu).conj();
    }
    acc * (grid.cell_area() / (PI * mu))
}

/// `ψ*(lag/μ)` for every lag `((i - a) dx, (j - b) dy)`, indexed
/// `[(i - a + nx - 1) * (2 ny - 1) + (j - b + ny - 1)]`.
fn lag_table(grid: &ComplexPlaneGrid, w: &MotherWavelet, mu: f64) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut t = Vec::with_capacity(((2 * nx - 1) * (2 * ny - 1)) as usize);
    for di in -(nx - 1)..nx {
        for dj in -(ny - 1)..ny {
            let lag = Complex64::new(di as f64 * grid.dx, dj as f64 * grid.dy);
            t.push(w.eval(lag / mu).conj());
        }
    }
    t
}

fn direct_plane(weighted: &[Complex64], grid: &ComplexPlaneGrid, w: &MotherWavelet, mu: f64) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let table = lag_table(grid, w, mu);
    let width = 2 * ny - 1;
    let scale = grid.cell_area() / (PI * mu);
    (0..nx)
        .into_par_iter()
        .flat_map_iter(|a| {
            let table = &table;
            (0..ny).map(move |b| {
                let mut acc = ZERO;
                for i in 0..nx {
                    let row = (i + nx - 1 - a) * width + (ny - 1 - b);
                    let lags = &table[row..row + ny];
                    let vals = &weighted[i * ny..(i + 1) * ny];
                    for (v, h) in vals.iter().zip(lags) {
                        acc += v * h;
                    }
                }
                acc * scale
            })
        })
        .collect()
}

fn fft_plane(fft: &Fft2, weighted: &[Complex64], grid: &ComplexPlaneGrid, w: &MotherWavelet, mu: f64) -> Vec<Complex64> {
    let scale = grid.cell_area() / (PI * mu);
    // W(a) = Σ_i f_i ψ*((i - a) d / μ), a convolution with lag (a - i) negated
    let kernel = |di: isize, dj: isize| w.eval(Complex64::new(-di as f64 * grid.dx, -dj as f64 * grid.dy) / mu).conj();
    let mut out = convolve_lags(fft, weighted, grid.nx, grid.ny, kernel);
    for v in &mut out {
        *v *= scale;
    }
    out
}

/// Inverse transform with the FFT engine where possible.
pub fn inverse(coeffs: &CcwtCoefficients, w: &MotherWavelet, c_prime: f64, out_grid: &ComplexPlaneGrid) -> Result<Field> {
    inverse_with(coeffs, w, c_prime, out_grid, Engine::Fft)
}

/// Inverse transform. The κ integral is done by FFT convolution when
/// `engine` is [`Engine::Fft`] and `out_grid` coincides with the κ grid;
/// otherwise each output node is summed directly.
pub fn inverse_with(
    coeffs: &CcwtCoefficients,
    w: &MotherWavelet,
    c_prime: f64,
    out_grid: &ComplexPlaneGrid,
    engine: Engine,
) -> Result<Field> {
    if !(c_prime > 0.0 && c_prime.is_finite()) {
        return Err(Error::InvalidParameter(format!("C'psi must be positive and finite, got {c_prime}")));
    }
    check_wavelet(w)?;
    let scales = coeffs.scales();
    let mu_weights = scale_weights(scales, 4)?;
    let kg = *coeffs.kappa_grid();
    let area = kg.cell_area() / PI;
    let same = out_grid.same_nodes(&kg);

    let contributions: Vec<Vec<Complex64>> = if same && engine == Engine::Fft {
        let fft = Fft2::new(padded(kg.nx), padded(kg.ny));
        scales
            .values()
            .par_iter()
            .zip(&mu_weights)
            .zip(coeffs.planes())
            .map(|((&mu, &wmu), plane)| {
                let weighted = weighted_plane(plane, &kg, wmu * area);
                let kernel = |di: isize, dj: isize| w.eval(Complex64::new(di as f64 * kg.dx, dj as f64 * kg.dy) / mu);
                convolve_lags(&fft, &weighted, kg.nx, kg.ny, kernel)
            })
            .collect()
    } else {
        scales
            .values()
            .par_iter()
            .zip(&mu_weights)
            .zip(coeffs.planes())
            .map(|((&mu, &wmu), plane)| {
                let weighted = weighted_plane(plane, &kg, wmu * area);
                out_grid
                    .nodes()
                    .map(|(_, _, eta)| {
                        let mut acc = ZERO;
                        for (i, j, kappa) in kg.nodes() {
                            acc += weighted[kg.index(i, j)] * w.eval((eta - kappa) / mu);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };

    // sum scales in order so the result is schedule independent
    let mut out = vec![ZERO; out_grid.len()];
    for c in &contributions {
        for (o, v) in out.iter_mut().zip(c) {
            *o += v;
        }
    }
    let inv = 1.0 / c_prime;
    for o in &mut out {
        *o *= inv;
    }
    Field::new(*out_grid, out)
}

fn weighted_plane(plane: &[Complex64], grid: &ComplexPlaneGrid, factor: f64) -> Vec<Complex64> {
    grid.nodes().map(|(i, j, _)| plane[grid.index(i, j)] * (grid.trapezoid_weight(i, j) * factor)).collect()
}

/// Uniformly sampled 1D signal, `samples[k]` at `x0 + k dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    x0: f64,
    dx: f64,
    samples: Vec<Complex64>,
}

impl Signal1D {
    pub fn new(x0: f64, dx: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::InvalidParameter(format!("signal needs finite x0 and dx > 0, got x0={x0}, dx={dx}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParameter("signal must not be empty".into()));
        }
        if samples.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("signal sample".into()));
        }
        Ok(Self { x0, dx, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(x0: f64, dx: f64, n: usize, f: F) -> Result<Self> {
        Self::new(x0, dx, (0..n).map(|k| f(x0 + k as f64 * dx)).collect())
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    fn trapezoid(&self, k: usize) -> f64 {
        if self.samples.len() > 1 && (k == 0 || k + 1 == self.samples.len()) {
            0.5
        } else {
            1.0
        }
    }

    /// `(∫ |f|² dx)^{1/2}` by the trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.samples.iter().enumerate().map(|(k, v)| v.norm_sqr() * self.trapezoid(k)).sum();
        (s * self.dx).sqrt()
    }

    /// `‖self - other‖ / ‖other‖` for signals on the same nodes.
    pub fn rel_l2_error(&self, reference: &Signal1D) -> Result<f64> {
        if self.len() != reference.len() || (self.x0 - reference.x0).abs() > 1e-12 || (self.dx - reference.dx).abs() > 1e-12 {
            return Err(Error::InvalidParameter("signals live on different grids".into()));
        }
        let diff: Vec<Complex64> = self.samples.iter().zip(&reference.samples).map(|(a, b)| a - b).collect();
        let d = Signal1D::new(self.x0, self.dx, diff)?;
        Ok(d.l2_norm() / reference.l2_norm().max(f64::MIN_POSITIVE))
    }
}

/// `(1/√μ) ∫ f(x) ψ*((x - s)/μ) dx` by the trapezoid rule.
pub fn cwt1d(f: &Signal1D, psi: &MotherWavelet, mu: f64, s: f64) -> Result<Complex64> {
    check_scale(mu)?;
    Ok(cwt1d_unchecked(f, psi, mu, s))
}

fn cwt1d_unchecked(f: &Signal1D, psi: &MotherWavelet, mu: f64, s: f64) -> Complex64 {
    let mut acc = ZERO;
    for (k, v) in f.samples.iter().enumerate() {
        acc += v * psi.eval_1d((f.x(k) - s) / mu).conj() * f.trapezoid(k);
    }
    acc * (f.dx / mu.sqrt())
}

/// Shift sampling for [`cwt1d_analyze`]: at scale `μ` the shifts are spaced
/// `max(rel_step μ, min_step)` and cover the signal support widened by
/// `margin μ` on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSampling {
    pub rel_step: f64,
    pub min_step: f64,
    pub margin: f64,
}

impl ShiftSampling {
    pub fn for_signal(f: &Signal1D) -> Self {
        Self { rel_step: 0.1, min_step: 0.25 * f.dx(), margin: 10.0 }
    }
}

/// One scale of a 1D transform, `values[k]` at shift `s0 + k ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cwt1dPlane {
    pub mu: f64,
    pub s0: f64,
    pub ds: f64,
    pub values: Vec<Complex64>,
}

impl Cwt1dPlane {
    pub fn shift(&self, k: usize) -> f64 {
        self.s0 + k as f64 * self.ds
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cwt1dCoefficients {
    pub scales: ScaleGrid,
    pub planes: Vec<Cwt1dPlane>,
}

impl Cwt1dCoefficients {
    pub fn scaled(&self, a: Complex64) -> Self {
        let planes = self.planes.iter().map(|p| Cwt1dPlane { values: p.values.iter().map(|v| v * a).collect(), ..p.clone() }).collect();
        Self { scales: self.scales.clone(), planes }
    }
}

/// Samples `W(μ, s)` for every scale on a per-scale shift grid.
pub fn cwt1d_analyze(f: &Signal1D, psi: &MotherWavelet, scales: &ScaleGrid, sampling: ShiftSampling) -> Result<Cwt1dCoefficients> {
    if !(sampling.rel_step > 0.0 && sampling.min_step > 0.0 && sampling.margin >= 0.0) {
        return Err(Error::InvalidParameter("shift sampling needs positive steps and a non-negative margin".into()));
    }
    let lo = f.x0();
    let hi = f.x(f.len() - 1);
    let center = 0.5 * (lo + hi);
    let planes = scales
        .values()
        .par_iter()
        .map(|&mu| {
            let ds = (sampling.rel_step * mu).max(sampling.min_step);
            let half = 0.5 * (hi - lo) + sampling.margin * mu;
            let n = (half / ds).ceil() as usize;
            let s0 = center - n as f64 * ds;
            let values = (0..2 * n + 1).map(|k| cwt1d_unchecked(f, psi, mu, s0 + k as f64 * ds)).collect();
            Cwt1dPlane { mu, s0, ds, values }
        })
        .collect();
    Ok(Cwt1dCoefficients { scales: scales.clone(), planes })
}

/// `f(x) = (1/C_ψ) ∫ dμ/μ² ∫ ds W(μ, s) ψ((x - s)/μ)/√μ` on the nodes
/// `x0 + k dx`, `k < n`.
pub fn icwt1d(coeffs: &Cwt1dCoefficients, psi: &MotherWavelet, c_psi: f64, x0: f64, dx: f64, n: usize) -> Result<Signal1D> {
    if !(c_psi > 0.0 && c_psi.is_finite()) {
        return Err(Error::NonFinite(format!("C_psi must be finite and positive, got {c_psi}")));
    }
    let weights = scale_weights(&coeffs.scales, 2)?;
    let contributions: Vec<Vec<Complex64>> = coeffs
        .planes
        .par_iter()
        .zip(&weights)
        .map(|(p, &wmu)| {
            let m = p.values.len();
            let pre = wmu * p.ds / p.mu.sqrt();
            (0..n)
                .map(|k| {
                    let x = x0 + k as f64 * dx;
                    let mut acc = ZERO;
                    for (q, v) in p.values.iter().enumerate() {
                        let t = if m > 1 && (q == 0 || q + 1 == m) { 0.5 } else { 1.0 };
                        acc += v * psi.eval_1d((x - p.shift(q)) / p.mu) * t;
                    }
                    acc * pre
                })
                .collect()
        })
        .collect();
    let mut out = vec![ZERO; n];
    for c in &contributions {
        for (o, v) in out.iter_mut().zip(c) {
            *o += v;
        }
    }
    for o in &mut out {
        *o /= c_psi;
    }
    Signal1D::new(x0, dx, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample, Measure};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn vacuum(g: &ComplexPlaneGrid) -> Field {
        sample(g, |z| c((-0.5 * z.norm_sqr()).exp(), 0.0)).unwrap()
    }

    fn small_grid() -> ComplexPlaneGrid {
        ComplexPlaneGrid::symmetric(48, 8.0).unwrap()
    }

    fn center(g: &ComplexPlaneGrid) -> (usize, usize) {
        // odd grids have the origin on a node
        assert!(g.nx % 2 == 1);
        (g.nx / 2, g.ny / 2)
    }

    #[test]
    fn vacuum_at_origin_is_half() {
        let g = ComplexPlaneGrid::symmetric(129, 8.0).unwrap();
        let (a, b) = center(&g);
        let w = MotherWavelet::emhw();
        let coeffs = forward_fast(&vacuum(&g), &w, &ScaleGrid::single(1.0)).unwrap();
        assert!((coeffs.at(0, a, b) - c(0.5, 0.0)).norm() < 1e-10);
        let em = sample(&g, |z| w.eval(z)).unwrap();
        let coeffs = forward_fast(&em, &w, &ScaleGrid::single(1.0)).unwrap();
        assert!((coeffs.at(0, a, b) - c(0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn direct_and_fft_agree() {
        let g = small_grid();
        let f = sample(&g, |z| c((-0.5 * (z - c(0.7, -0.3)).norm_sqr()).exp(), 0.2 * z.re * (-0.4 * z.norm_sqr()).exp())).unwrap();
        let w = MotherWavelet::emhw();
        let s = ScaleGrid::log_spaced(5, 0.25, 4.0).unwrap();
        let d = forward(&f, &w, &s).unwrap();
        let q = forward_fast(&f, &w, &s).unwrap();
        assert!(d.max_plane_rel_diff(&q).unwrap() <= 1e-12);
    }

    #[test]
    fn zero_field_gives_zero_coefficients() {
        let g = small_grid();
        let z = Field::zeros(g);
        let coeffs = forward_fast(&z, &MotherWavelet::emhw(), &ScaleGrid::log_spaced(3, 0.5, 2.0).unwrap()).unwrap();
        assert_eq!(coeffs.max_abs(), 0.0);
    }

    #[test]
    fn delta_like_input() {
        let g = small_grid();
        let (i0, j0) = (20, 29);
        let mut vals = vec![ZERO; g.len()];
        vals[g.index(i0, j0)] = c(1.0, 0.0);
        let f = Field::new(g, vals).unwrap();
        let w = MotherWavelet::emhw();
        let coeffs = forward_fast(&f, &w, &ScaleGrid::single(1.0)).unwrap();
        let eta0 = g.node(i0, j0);
        for (a, b, kappa) in g.nodes().step_by(37) {
            let expect = w.eval(eta0 - kappa).conj() * g.cell_area() / PI;
            assert!((coeffs.at(0, a, b) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn translation_moves_the_plane() {
        let g = small_grid();
        let shift = (3usize, 2usize);
        let kappa0 = c(shift.0 as f64 * g.dx, shift.1 as f64 * g.dy);
        let base = |z: Complex64| c((-0.5 * (z + c(0.8, 0.4)).norm_sqr()).exp(), 0.0);
        let f = sample(&g, base).unwrap();
        let ft = sample(&g, |z| base(z - kappa0)).unwrap();
        let w = MotherWavelet::emhw();
        let s = ScaleGrid::log_spaced(3, 0.5, 1.5).unwrap();
        let a = forward_fast(&f, &w, &s).unwrap();
        let b = forward_fast(&ft, &w, &s).unwrap();
        for k in 0..s.len() {
            for i in 10..30 {
                for j in 10..30 {
                    let d = (b.at(k, i + shift.0, j + shift.1) - a.at(k, i, j)).norm();
                    assert!(d < 1e-10, "{k} {i} {j} {d}");
                }
            }
        }
    }

    #[test]
    fn scale_covariance() {
        // W_{g(·/λ)}(λμ, λκ) = λ W_g(μ, κ)
        let lambda = 1.5;
        let w = MotherWavelet::emhw();
        let g1 = ComplexPlaneGrid::symmetric(81, 10.0).unwrap();
        let base = |z: Complex64| c((-0.5 * (z - c(0.3, 0.0)).norm_sqr()).exp() * (1.0 + 0.2 * z.im), 0.0);
        let f = sample(&g1, base).unwrap();
        let fl = sample(&g1, |z| base(z / lambda)).unwrap();
        for (mu, kappa) in [(0.8, c(0.5, -0.25)), (1.2, c(0.0, 1.0)), (2.0, c(-1.0, 0.5))] {
            let a = forward_at(&f, &w, mu, kappa).unwrap();
            let b = forward_at(&fl, &w, lambda * mu, kappa * lambda).unwrap();
            assert!((b - a * lambda).norm() <= 1e-2 * (a * lambda).norm(), "{mu}: {a} {b}");
        }
    }

    #[test]
    fn forward_at_matches_plane() {
        let g = small_grid();
        let f = vacuum(&g);
        let w = MotherWavelet::emhw();
        let coeffs = forward(&f, &w, &ScaleGrid::single(0.9)).unwrap();
        for (a, b, kappa) in g.nodes().step_by(101) {
            let p = forward_at(&f, &w, 0.9, kappa).unwrap();
            assert!((p - coeffs.at(0, a, b)).norm() <= 1e-14 * coeffs.max_abs().max(1.0));
        }
    }

    #[test]
    fn forward_preconditions() {
        let g = small_grid();
        let wide = sample(&g, |_| c(1.0, 0.0)).unwrap();
        let s = ScaleGrid::single(1.0);
        assert!(matches!(forward_fast(&wide, &MotherWavelet::emhw(), &s), Err(Error::BoundaryDecay { .. })));
        let gauss = MotherWavelet::laguerre_gaussian(vec![1.0]).unwrap();
        assert!(matches!(forward_fast(&vacuum(&g), &gauss, &s), Err(Error::NonAdmissible { .. })));
        assert!(forward_at(&vacuum(&g), &MotherWavelet::emhw(), 0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn forward_on_other_grid() {
        let g = small_grid();
        let f = vacuum(&g);
        let w = MotherWavelet::emhw();
        let kg = ComplexPlaneGrid::symmetric(5, 1.0).unwrap();
        let s = ScaleGrid::log_spaced(2, 0.5, 1.0).unwrap();
        let coeffs = forward_on(&f, &w, &s, &kg).unwrap();
        for (a, b, kappa) in kg.nodes() {
            let p = forward_at(&f, &w, 1.0, kappa).unwrap();
            assert_eq!(coeffs.at(1, a, b), p);
        }
    }

    #[test]
    fn inverse_of_zero_is_zero() {
        let g = small_grid();
        let s = ScaleGrid::log_spaced(4, 0.5, 2.0).unwrap();
        let z = CcwtCoefficients::zeros(s, g);
        let out = inverse(&z, &MotherWavelet::emhw(), 0.5, &g).unwrap();
        assert!(out.values().iter().all(|v| *v == ZERO));
    }

    #[test]
    fn inverse_rejects_bad_constant() {
        let g = small_grid();
        let z = CcwtCoefficients::zeros(ScaleGrid::log_spaced(4, 0.5, 2.0).unwrap(), g);
        for cp in [0.0, -1.0, f64::NAN] {
            assert!(inverse(&z, &MotherWavelet::emhw(), cp, &g).is_err());
        }
    }

    #[test]
    fn inverse_is_linear() {
        let g = small_grid();
        let w = MotherWavelet::emhw();
        let s = ScaleGrid::log_spaced(6, 0.4, 3.0).unwrap();
        let f1 = vacuum(&g);
        let f2 = sample(&g, |z| c(0.0, z.re * (-0.5 * z.norm_sqr()).exp())).unwrap();
        let w1 = forward_fast(&f1, &w, &s).unwrap();
        let w2 = forward_fast(&f2, &w, &s).unwrap();
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        let mix = w1.combine(a, &w2, b).unwrap();
        let lhs = inverse(&mix, &w, 0.5, &g).unwrap();
        let r1 = inverse(&w1, &w, 0.5, &g).unwrap();
        let r2 = inverse(&w2, &w, 0.5, &g).unwrap();
        let scale = lhs.max_abs();
        for k in 0..g.len() {
            let rhs = a * r1.values()[k] + b * r2.values()[k];
            assert!((lhs.values()[k] - rhs).norm() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn inverse_direct_matches_fft() {
        let g = ComplexPlaneGrid::symmetric(20, 7.0).unwrap();
        let w = MotherWavelet::emhw();
        let s = ScaleGrid::log_spaced(3, 0.5, 2.0).unwrap();
        let coeffs = forward_fast(&vacuum(&g), &w, &s).unwrap();
        let a = inverse_with(&coeffs, &w, 0.5, &g, Engine::Fft).unwrap();
        let b = inverse_with(&coeffs, &w, 0.5, &g, Engine::Direct).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn parallel_result_is_bitwise_stable() {
        let g = small_grid();
        let w = MotherWavelet::emhw();
        let s = ScaleGrid::log_spaced(6, 0.4, 3.0).unwrap();
        let f = vacuum(&g);
        let a = forward_fast(&f, &w, &s).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| forward_fast(&f, &w, &s)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cwt1d_basics() {
        let psi = MotherWavelet::mexican_hat_1d();
        let zero = Signal1D::new(-5.0, 0.05, vec![ZERO; 201]).unwrap();
        assert_eq!(cwt1d(&zero, &psi, 1.0, 0.3).unwrap(), ZERO);
        assert!(cwt1d(&zero, &psi, 0.0, 0.0).is_err());

        let s0 = 0.7;
        let f = Signal1D::from_fn(-10.0, 0.02, 1001, |x| psi.eval_1d(x - s0)).unwrap();
        let peak = cwt1d(&f, &psi, 1.0, s0).unwrap().re;
        for ds in [-0.5, -0.1, -0.02, 0.02, 0.1, 0.5] {
            assert!(cwt1d(&f, &psi, 1.0, s0 + ds).unwrap().re < peak);
        }

        // constant input, wavelet well inside the window
        let one = Signal1D::from_fn(-20.0, 0.01, 4001, |_| c(1.0, 0.0)).unwrap();
        assert!(cwt1d(&one, &psi, 1.0, 0.0).unwrap().norm() < 1e-10);
    }

    #[test]
    fn icwt1d_zero_and_scaling() {
        let psi = MotherWavelet::mexican_hat_1d();
        let f = Signal1D::from_fn(-4.0, 0.1, 81, |x| c((-0.5 * x * x).exp(), 0.0)).unwrap();
        let s = ScaleGrid::log_spaced(8, 0.2, 4.0).unwrap();
        let w = cwt1d_analyze(&f, &psi, &s, ShiftSampling::for_signal(&f)).unwrap();
        let r = icwt1d(&w, &psi, PI, -4.0, 0.1, 81).unwrap();
        let r2 = icwt1d(&w.scaled(c(2.0, 0.0)), &psi, PI, -4.0, 0.1, 81).unwrap();
        for (a, b) in r.samples().iter().zip(r2.samples()) {
            assert!((a * 2.0 - b).norm() <= 1e-14 * b.norm().max(1.0));
        }
        let z = icwt1d(&w.scaled(ZERO), &psi, PI, -4.0, 0.1, 81).unwrap();
        assert!(z.samples().iter().all(|v| *v == ZERO));
        assert!(icwt1d(&w, &psi, f64::INFINITY, -4.0, 0.1, 81).is_err());
    }

    #[test]
    fn engine_parsing() {
        assert_eq!("fft".parse::<Engine>().unwrap(), Engine::Fft);
        assert_eq!("Direct".parse::<Engine>().unwrap(), Engine::Direct);
        assert!("gpu".parse::<Engine>().is_err());
    }

    #[test]
    fn energy_is_measured_with_pi_measure() {
        let g = small_grid();
        let f = vacuum(&g);
        assert!((f.inner(&f, Measure::OverPi).unwrap().re - 1.0).abs() < 1e-8);
    }
}
