//! Uniform complex-plane grids, sampled fields, and the quadratures used by
//! every transform: 2D trapezoid rules under the measures `d²η`, `d²η/π`,
//! `d²η/(2π)`, log-scale weights for `∫ dμ/μ^p`, and a Romberg rule in a
//! logarithmic variable for radial integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boundary magnitude, relative to the field maximum, above which a field is
/// considered not to decay.
pub const DECAY_THRESHOLD: f64 = 1e-8;

/// Default node count per axis.
pub const DEFAULT_GRID_N: usize = 256;
/// Default half-width of the grid, `|η₁|, |η₂| <= extent`.
pub const DEFAULT_GRID_EXTENT: f64 = 8.0;
pub const DEFAULT_SCALE_COUNT: usize = 64;
pub const DEFAULT_MU_MIN: f64 = 0.25;
pub const DEFAULT_MU_MAX: f64 = 4.0;

/// Uniform rectangular sampling of the complex plane. Node `(i, j)` sits at
/// `(x_min + i dx) + i (y_min + j dy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPlaneGrid {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub y_min: f64,
    pub dx: f64,
    pub dy: f64,
}

impl ComplexPlaneGrid {
    pub fn new(nx: usize, ny: usize, x_min: f64, y_min: f64, dx: f64, dy: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("grid must have at least one node per axis".into()));
        }
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid spacing must be positive, got dx={dx}, dy={dy}")));
        }
        if !(x_min.is_finite() && y_min.is_finite()) {
            return Err(Error::InvalidParameter("grid origin must be finite".into()));
        }
        Ok(Self { nx, ny, x_min, y_min, dx, dy })
    }

    /// Square grid with `n` nodes per axis spanning `[-extent, extent]²`.
    pub fn symmetric(n: usize, extent: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("symmetric grid needs at least two nodes per axis".into()));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid extent must be positive, got {extent}")));
        }
        let d = 2.0 * extent / (n - 1) as f64;
        Self::new(n, n, -extent, -extent, d, d)
    }

    pub fn default_grid() -> Self {
        Self::symmetric(DEFAULT_GRID_N, DEFAULT_GRID_EXTENT).expect("default grid")
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    /// Row-major flat index.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Trapezoid weight (without the cell area): 1 inside, 1/2 on edges,
    /// 1/4 at corners.
    pub fn trapezoid_weight(&self, i: usize, j: usize) -> f64 {
        let wx = if self.nx > 1 && (i == 0 || i + 1 == self.nx) { 0.5 } else { 1.0 };
        let wy = if self.ny > 1 && (j == 0 || j + 1 == self.ny) { 0.5 } else { 1.0 };
        wx * wy
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nx).flat_map(move |i| (0..self.ny).map(move |j| (i, j, self.node(i, j))))
    }

    /// True when both grids share node positions to rounding.
    pub fn same_nodes(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        self.nx == other.nx
            && self.ny == other.ny
            && close(self.x_min, other.x_min)
            && close(self.y_min, other.y_min)
            && close(self.dx, other.dx)
            && close(self.dy, other.dy)
    }
}

/// Integration measure on the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `d²η`
    Plain,
    /// `d²η / π`, the measure of the entangled-state completeness relation
    OverPi,
    /// `d²η / (2π)`, the measure of the admissibility integral
    OverTwoPi,
}

impl Measure {
    pub fn factor(self) -> f64 {
        match self {
            Measure::Plain => 1.0,
            Measure::OverPi => 1.0 / PI,
            Measure::OverTwoPi => 0.5 / PI,
        }
    }
}

/// Complex samples on a [`ComplexPlaneGrid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: ComplexPlaneGrid,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: ComplexPlaneGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!("field has {} values but grid has {} nodes", values.len(), grid.len())));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(format!("node {} of {}x{} field", k, grid.nx, grid.ny)));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: ComplexPlaneGrid) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); grid.len()], grid }
    }

    pub fn grid(&self) -> &ComplexPlaneGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn boundary_max_abs(&self) -> f64 {
        let g = &self.grid;
        g.nodes().filter(|&(i, j, _)| g.is_boundary(i, j)).map(|(i, j, _)| self.at(i, j).norm()).fold(0.0, f64::max)
    }

    /// Checks that the boundary magnitude is at most `threshold` times the
    /// field maximum.
    pub fn check_decay(&self, threshold: f64) -> Result<()> {
        let boundary = self.boundary_max_abs();
        let limit = threshold * self.max_abs();
        if boundary > limit {
            return Err(Error::BoundaryDecay { boundary, threshold: limit });
        }
        Ok(())
    }

    /// Values multiplied by their trapezoid weights (cell area not included).
    pub fn trapezoid_weighted(&self) -> Vec<Complex64> {
        let g = &self.grid;
        g.nodes().map(|(i, j, _)| self.at(i, j) * g.trapezoid_weight(i, j)).collect()
    }

    pub fn integrate(&self, measure: Measure) -> Complex64 {
        integrate(self, measure)
    }

    /// `∫ conj(other) self` under `measure`; with `Measure::OverPi` this is
    /// the state overlap `⟨other|self⟩`.
    pub fn inner(&self, other: &Field, measure: Measure) -> Result<Complex64> {
        if !self.grid.same_nodes(&other.grid) {
            return Err(Error::InvalidParameter("fields live on different grids".into()));
        }
        let g = &self.grid;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, j, _) in g.nodes() {
            let k = g.index(i, j);
            acc += other.values[k].conj() * self.values[k] * g.trapezoid_weight(i, j);
        }
        Ok(acc * g.cell_area() * measure.factor())
    }

    /// Discrete L2 norm with trapezoid weights and plain measure.
    pub fn l2_norm(&self) -> f64 {
        self.inner(self, Measure::Plain).map(|v| v.re.max(0.0).sqrt()).unwrap_or(0.0)
    }
}

/// Evaluates `f` at every node of `grid`.
pub fn sample<F>(grid: &ComplexPlaneGrid, f: F) -> Result<Field>
where
    F: Fn(Complex64) -> Complex64,
{
    let values = grid.nodes().map(|(_, _, z)| f(z)).collect();
    Field::new(*grid, values)
}

/// Fallible variant of [`sample`].
pub fn try_sample<F>(grid: &ComplexPlaneGrid, f: F) -> Result<Field>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let values = grid.nodes().map(|(_, _, z)| f(z)).collect::<Result<Vec<_>>>()?;
    Field::new(*grid, values)
}

/// 2D trapezoid rule scaled by `measure`.
pub fn integrate(field: &Field, measure: Measure) -> Complex64 {
    let g = field.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, j, _) in g.nodes() {
        acc += field.at(i, j) * g.trapezoid_weight(i, j);
    }
    acc * g.cell_area() * measure.factor()
}

/// Log-spaced dilation values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleGrid {
    values: Vec<f64>,
}

impl ScaleGrid {
    /// `n` log-spaced points on `[mu_min, mu_max]`.
    pub fn log_spaced(n: usize, mu_min: f64, mu_max: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("scale grid must not be empty".into()));
        }
        if !(mu_min > 0.0 && mu_min.is_finite() && mu_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale bounds must be positive, got [{mu_min}, {mu_max}]")));
        }
        if n == 1 {
            if mu_min != mu_max {
                return Err(Error::InvalidParameter("a single-node scale grid needs mu_min == mu_max".into()));
            }
            return Ok(Self::single(mu_min));
        }
        if mu_max <= mu_min {
            return Err(Error::InvalidParameter(format!("need mu_min < mu_max, got [{mu_min}, {mu_max}]")));
        }
        let (a, b) = (mu_min.ln(), mu_max.ln());
        let h = (b - a) / (n - 1) as f64;
        let mut values: Vec<f64> = (0..n).map(|k| (a + k as f64 * h).exp()).collect();
        values[0] = mu_min;
        values[n - 1] = mu_max;
        Ok(Self { values })
    }

    pub fn single(mu: f64) -> Self {
        assert!(mu > 0.0 && mu.is_finite(), "scale must be positive");
        Self { values: vec![mu] }
    }

    /// Validates externally supplied scales: strictly increasing, positive,
    /// constant ratio to 1e-12.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("scale grid must not be empty".into()));
        }
        if values.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidParameter("scales must be positive and finite".into()));
        }
        if values.len() > 1 {
            let ratio0 = values[1] / values[0];
            if ratio0 <= 1.0 {
                return Err(Error::InvalidParameter("scales must be strictly increasing".into()));
            }
            for w in values.windows(2) {
                let r = w[1] / w[0];
                if (r - ratio0).abs() > 1e-12 * ratio0 {
                    return Err(Error::InvalidParameter("scales are not log-spaced".into()));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn default_scales() -> Self {
        Self::log_spaced(DEFAULT_SCALE_COUNT, DEFAULT_MU_MIN, DEFAULT_MU_MAX).expect("default scales")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mu_min(&self) -> f64 {
        self.values[0]
    }

    pub fn mu_max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Log step `ln(μ_{k+1}/μ_k)`, zero for a single node.
    pub fn log_step(&self) -> f64 {
        if self.values.len() < 2 {
            0.0
        } else {
            (self.mu_max() / self.mu_min()).ln() / (self.values.len() - 1) as f64
        }
    }

    /// Range widened to `[mu_min / factor, mu_max * factor]` with the log
    /// step kept at or below the current one.
    pub fn widened(&self, factor: f64) -> Result<Self> {
        if !(factor >= 1.0) {
            return Err(Error::InvalidParameter(format!("widening factor must be >= 1, got {factor}")));
        }
        let h = self.log_step();
        if h == 0.0 {
            return Err(Error::InvalidParameter("cannot widen a single-node scale grid".into()));
        }
        let extra = (factor.ln() / h).ceil() as usize;
        Self::log_spaced(self.len() + 2 * extra, self.mu_min() / factor, self.mu_max() * factor)
    }
}

/// Weights `w_k` with `∫_{μ_min}^{μ_max} dμ/μ^p f(μ) ≈ Σ w_k f(μ_k)`, built
/// from the trapezoid rule in `ln μ`: `dμ/μ^p = μ^{1-p} d(ln μ)`.
pub fn scale_weights(scales: &ScaleGrid, power: i32) -> Result<Vec<f64>> {
    if !matches!(power, 1..=5) {
        return Err(Error::UnsupportedPower(power));
    }
    let mu = scales.values();
    if mu.len() < 2 {
        return Err(Error::InvalidParameter("scale quadrature needs at least two nodes".into()));
    }
    let mut w = vec![0.0; mu.len()];
    for k in 0..mu.len() - 1 {
        let h = (mu[k + 1] / mu[k]).ln();
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    for (wk, &m) in w.iter_mut().zip(mu) {
        *wk *= m.powi(1 - power);
    }
    Ok(w)
}

/// Romberg integration of `∫_a^b f(r) dr` carried out in `s = ln r`.
///
/// Suited to radial integrands spread over several decades. Returns
/// [`Error::Divergent`] when the extrapolation table fails to settle to
/// `rel_tol` within the refinement budget.
pub fn integrate_log_romberg<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidParameter(format!("log quadrature needs 0 < a < b, got [{a}, {b}]")));
    }
    const MAX_LEVEL: usize = 18;
    let (sa, sb) = (a.ln(), b.ln());
    let g = |s: f64| {
        let r = s.exp();
        f(r) * r
    };
    let mut n = 16usize;
    let mut h = (sb - sa) / n as f64;
    let mut sum = 0.5 * (g(sa) + g(sb)) + (1..n).map(|k| g(sa + k as f64 * h)).sum::<f64>();
    let mut prev_row = vec![sum * h];
    for level in 1..MAX_LEVEL {
        // add midpoints
        let mid: f64 = (0..n).map(|k| g(sa + (k as f64 + 0.5) * h)).sum();
        sum += mid;
        n *= 2;
        h *= 0.5;
        let mut row = vec![sum * h];
        for (k, &p) in prev_row.iter().enumerate() {
            let factor = 4f64.powi(k as i32 + 1);
            let r = row[k] + (row[k] - p) / (factor - 1.0);
            row.push(r);
        }
        let best = *row.last().unwrap();
        let last_prev = *prev_row.last().unwrap();
        if level >= 3 && (best - last_prev).abs() <= rel_tol * best.abs().max(f64::MIN_POSITIVE) {
            return Ok(best);
        }
        prev_row = row;
    }
    Err(Error::Divergent(format!("log-variable Romberg on [{a:e}, {b:e}] did not reach relative tolerance {rel_tol:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_sq(z: Complex64) -> Complex64 {
        Complex64::new((-z.norm_sqr()).exp(), 0.0)
    }

    #[test]
    fn symmetric_grid_layout() {
        let g = ComplexPlaneGrid::symmetric(5, 2.0).unwrap();
        assert_eq!(g.dx, 1.0);
        assert_eq!(g.node(0, 0), Complex64::new(-2.0, -2.0));
        assert_eq!(g.node(4, 2), Complex64::new(2.0, 0.0));
        assert_eq!(g.index(1, 2), 7);
    }

    #[test]
    fn sample_constant_and_gaussian_decay() {
        let g = ComplexPlaneGrid::symmetric(33, 8.0).unwrap();
        let ones = sample(&g, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(ones.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let gauss = sample(&g, |z| Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0)).unwrap();
        assert!(gauss.boundary_max_abs() <= (-8.0f64).exp());
    }

    #[test]
    fn sample_rejects_non_finite() {
        let g = ComplexPlaneGrid::symmetric(4, 1.0).unwrap();
        let r = sample(&g, |z| Complex64::new(1.0 / z.re.abs().min(0.0), 0.0));
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn integrate_gaussian_over_pi() {
        let g = ComplexPlaneGrid::default_grid();
        let f = sample(&g, gaussian_sq).unwrap();
        let v = integrate(&f, Measure::OverPi);
        assert!((v.re - 1.0).abs() < 1e-8 && v.im.abs() < 1e-15, "{v}");
    }

    #[test]
    fn integrate_ones_plain() {
        let g = ComplexPlaneGrid::symmetric(21, 1.0).unwrap();
        let f = sample(&g, |_| Complex64::new(1.0, 0.0)).unwrap();
        let v = integrate(&f, Measure::Plain);
        assert!((v.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn radial_gamma_integrals() {
        // ∫ d²η/π |η|^{2k} e^{-|η|²} = k!
        let g = ComplexPlaneGrid::default_grid();
        for k in 0..5u32 {
            let f = sample(&g, |z| Complex64::new(z.norm_sqr().powi(k as i32) * (-z.norm_sqr()).exp(), 0.0)).unwrap();
            let v = integrate(&f, Measure::OverPi).re;
            let expect = crate::specfun::factorial(k as usize);
            assert!((v - expect).abs() <= 1e-7 * expect, "k={k}: {v}");
        }
    }

    #[test]
    fn second_order_convergence_on_truncated_domain() {
        // A Gaussian cut by the box has a non-smooth periodic extension, so
        // the trapezoid error is O(h²) and halving h cuts it by ~4.
        let exact = {
            // ∫_{-1}^{1} e^{-x²} dx, squared
            let erf1 = 0.842_700_792_949_714_9_f64;
            (std::f64::consts::PI.sqrt() * erf1).powi(2)
        };
        let err = |n: usize| {
            let g = ComplexPlaneGrid::symmetric(n, 1.0).unwrap();
            let f = sample(&g, gaussian_sq).unwrap();
            (integrate(&f, Measure::Plain).re - exact).abs()
        };
        let (e1, e2) = (err(21), err(41));
        assert!(e1 / e2 >= 3.0, "{e1} {e2}");
    }

    #[test]
    fn scale_weights_log_constant() {
        let s = ScaleGrid::log_spaced(64, 1.0, std::f64::consts::E).unwrap();
        for p in [1, 2, 3, 4, 5] {
            let w = scale_weights(&s, p).unwrap();
            let v: f64 = w.iter().zip(s.values()).map(|(w, m)| w * m.powi(p - 1)).sum();
            assert!((v - 1.0).abs() < 1e-10, "p={p} {v}");
        }
    }

    #[test]
    fn scale_weights_linear_measure() {
        // f = μ^p turns dμ/μ^p into dμ
        let s = ScaleGrid::log_spaced(200, 1.0, 1.5).unwrap();
        for p in [1, 3, 4, 5] {
            let w = scale_weights(&s, p).unwrap();
            let v: f64 = w.iter().zip(s.values()).map(|(w, m)| w * m.powi(p)).sum();
            assert!((v - 0.5).abs() < 1e-6, "p={p} {v}");
        }
    }

    #[test]
    fn scale_weight_errors() {
        assert!(ScaleGrid::log_spaced(0, 1.0, 2.0).is_err());
        assert!(ScaleGrid::from_values(vec![]).is_err());
        let s = ScaleGrid::default_scales();
        assert!(matches!(scale_weights(&s, 7), Err(Error::UnsupportedPower(7))));
        assert!(scale_weights(&ScaleGrid::single(1.0), 3).is_err());
    }

    #[test]
    fn scale_grid_validation() {
        let s = ScaleGrid::default_scales();
        assert_eq!(s.len(), 64);
        assert!(ScaleGrid::from_values(s.values().to_vec()).is_ok());
        assert!(ScaleGrid::from_values(vec![1.0, 2.0, 3.0]).is_err());
        assert!(ScaleGrid::from_values(vec![2.0, 1.0]).is_err());
        let w = s.widened(2.0).unwrap();
        assert!((w.mu_min() - 0.125).abs() < 1e-15 && (w.mu_max() - 8.0).abs() < 1e-12);
        assert!(w.log_step() <= s.log_step() * (1.0 + 1e-12));
    }

    #[test]
    fn romberg_log_gamma() {
        // ∫_0^∞ t³ e^{-t²} dt = 1/2
        let v = integrate_log_romberg(|t| t.powi(3) * (-t * t).exp(), 1e-6, 12.0, 1e-12).unwrap();
        assert!((v - 0.5).abs() < 1e-10, "{v}");
    }
}
