//! Numerical checks of the transform identities.
//!
//! * Parseval pairing: `∫ dμ/μ³ ∫ d²κ/π W₁ W₂* = C′ψ ⟨g₂|g₁⟩`.
//! * Isometry of energy, the `g₁ = g₂` case.
//! * Parameter-space kernel
//!   `K(η, η′) = (1/C′ψ) ∫ dμ/μ⁵ ∫ d²κ/π ψ((η′-κ)/μ) ψ*((η-κ)/μ)`, which
//!   should act like a delta function: large at `η = η′`, negligible apart.
//! * Closed-form integrals that appear along the way, against quadrature.
//!
//! Every improper integral is truncated to the configured grids. Theorem
//! checks therefore carry truncation error and use percent-level tolerances.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ccwt::{transform, CcwtCoefficients, Engine};
use crate::error::{Error, Result};
use crate::fock::StateDescriptor;
use crate::grid::{scale_weights, ComplexPlaneGrid, Field, Measure, ScaleGrid};
use crate::specfun::{factorial, hermite2, laguerre, PolyOrder};
use crate::wavelets::{parse_coeffs, MotherWavelet, WaveletKind};

/// Floor on `|rhs|` in relative errors.
pub const REL_ERROR_FLOOR: f64 = 1e-12;

/// Outcome of a pairing check.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsevalReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_error: f64,
    pub mu_range: (f64, f64),
    pub scale_count: usize,
    pub grid: ComplexPlaneGrid,
}

impl ParsevalReport {
    fn new(lhs: Complex64, rhs: Complex64, scales: &ScaleGrid, grid: ComplexPlaneGrid) -> Self {
        Self {
            lhs,
            rhs,
            rel_error: (lhs - rhs).norm() / rhs.norm().max(REL_ERROR_FLOOR),
            mu_range: (scales.mu_min(), scales.mu_max()),
            scale_count: scales.len(),
            grid,
        }
    }
}

/// `∫ dμ/μ³ ∫ d²κ/π W₁ W₂*` from two coefficient sets on the same layout.
pub fn coefficient_pairing(w1: &CcwtCoefficients, w2: &CcwtCoefficients) -> Result<Complex64> {
    if w1.scales().values() != w2.scales().values() || !w1.kappa_grid().same_nodes(w2.kappa_grid()) {
        return Err(Error::InvalidParameter("coefficient sets have different layouts".into()));
    }
    let weights = scale_weights(w1.scales(), 3)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &wk) in weights.iter().enumerate() {
        let a = w1.plane_field(k);
        let b = w2.plane_field(k);
        acc += a.inner(&b, Measure::OverPi)? * wk;
    }
    Ok(acc)
}

pub fn parseval_pairing(g1: &Field, g2: &Field, w: &MotherWavelet, scales: &ScaleGrid) -> Result<ParsevalReport> {
    parseval_pairing_with(g1, g2, w, scales, Engine::Fft)
}

pub fn parseval_pairing_with(g1: &Field, g2: &Field, w: &MotherWavelet, scales: &ScaleGrid, engine: Engine) -> Result<ParsevalReport> {
    let c_prime = w.c_psi_prime()?;
    let rhs = g1.inner(g2, Measure::OverPi)? * c_prime;
    let w1 = transform(g1, w, scales, engine)?;
    let w2 = transform(g2, w, scales, engine)?;
    let lhs = coefficient_pairing(&w1, &w2)?;
    Ok(ParsevalReport::new(lhs, rhs, scales, *g1.grid()))
}

pub fn energy_isometry(g: &Field, w: &MotherWavelet, scales: &ScaleGrid) -> Result<ParsevalReport> {
    let c_prime = w.c_psi_prime()?;
    let rhs = g.inner(g, Measure::OverPi)? * c_prime;
    let coeffs = transform(g, w, scales, Engine::Fft)?;
    let lhs = coefficient_pairing(&coeffs, &coeffs)?;
    Ok(ParsevalReport::new(lhs, rhs, scales, *g.grid()))
}

/// `K(η, η′)` summed over the κ grid and the scale grid.
pub fn reproducing_kernel(
    eta: Complex64,
    eta_prime: Complex64,
    w: &MotherWavelet,
    scales: &ScaleGrid,
    kappa_grid: &ComplexPlaneGrid,
) -> Result<Complex64> {
    let c_prime = w.c_psi_prime()?;
    let weights = scale_weights(scales, 5)?;
    let area = kappa_grid.cell_area() / PI;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&mu, &wk) in scales.values().iter().zip(&weights) {
        let mut plane = Complex64::new(0.0, 0.0);
        for (i, j, kappa) in kappa_grid.nodes() {
            let t = w.eval((eta_prime - kappa) / mu) * w.eval((eta - kappa) / mu).conj();
            plane += t * kappa_grid.trapezoid_weight(i, j);
        }
        acc += plane * (wk * area);
    }
    Ok(acc / c_prime)
}

/// Isometry value `∫ dμ/μ³ ∫ d²κ/π |W|²` for each state, sampled on `grid`.
/// Every state must sample to unit norm within `1e-6`.
pub fn constant_scan(states: &[StateDescriptor], w: &MotherWavelet, scales: &ScaleGrid, grid: &ComplexPlaneGrid) -> Result<Vec<f64>> {
    states
        .iter()
        .map(|s| {
            let field = s.sample(grid)?;
            let norm = field.inner(&field, Measure::OverPi)?.re;
            if (norm - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidParameter(format!("state {s} has norm² {norm} on this grid; widen the grid")));
            }
            Ok(energy_isometry(&field, w, scales)?.lhs.re)
        })
        .collect()
}

/// `∫ d²z/π exp(ζ|z|² + ξz + ηz*) = -(1/ζ) exp(-ξη/ζ)` for `Re ζ < 0`.
pub fn oracle_gaussian_integral(zeta: Complex64, xi: Complex64, eta_c: Complex64) -> Result<Complex64> {
    if !(zeta.re < 0.0) {
        return Err(Error::InvalidParameter(format!("Gaussian integral needs Re(zeta) < 0, got {zeta}")));
    }
    Ok(-(-xi * eta_c / zeta).exp() / zeta)
}

/// The same integral by 2D trapezoid quadrature on a grid centred on the
/// peak of the integrand's modulus.
pub fn gaussian_integral_quadrature(zeta: Complex64, xi: Complex64, eta_c: Complex64) -> Result<Complex64> {
    if !(zeta.re < 0.0) {
        return Err(Error::InvalidParameter(format!("Gaussian integral needs Re(zeta) < 0, got {zeta}")));
    }
    let a = -zeta.re;
    // |integrand| = exp(-a|z|² + Re((ξ + η*) z)), peaked at (ξ + η*)*/(2a)
    let center = (xi + eta_c.conj()).conj() / (2.0 * a);
    let half = 9.0 / a.sqrt();
    let n = 257;
    let d = 2.0 * half / (n - 1) as f64;
    let grid = ComplexPlaneGrid::new(n, n, center.re - half, center.im - half, d, d)?;
    let f = crate::grid::sample(&grid, |z| (zeta * z.norm_sqr() + xi * z + eta_c * z.conj()).exp())?;
    Ok(f.integrate(Measure::OverPi))
}

/// `∫_0^∞ u (1 - u x²/2)(1 - u y²/2) e^{-u(x²+y²)/2} du
///  = -4 (x⁴ - 4x²y² + y⁴)/(x² + y²)⁴`.
pub fn oracle_scale_integral(x: f64, y: f64) -> Result<f64> {
    let s = x * x + y * y;
    if !(s > 0.0) {
        return Err(Error::InvalidParameter("scale integral needs x² + y² > 0".into()));
    }
    Ok(-4.0 * (x.powi(4) - 4.0 * x * x * y * y + y.powi(4)) / s.powi(4))
}

/// The same integral by composite Simpson quadrature in `u`, truncated where
/// the exponential has fallen below `e^{-60}`.
pub fn scale_integral_quadrature(x: f64, y: f64) -> Result<f64> {
    let s = x * x + y * y;
    if !(s > 0.0) {
        return Err(Error::InvalidParameter("scale integral needs x² + y² > 0".into()));
    }
    let f = |u: f64| u * (1.0 - 0.5 * u * x * x) * (1.0 - 0.5 * u * y * y) * (-0.5 * u * s).exp();
    let upper = 120.0 / s;
    let n = 20_000;
    let h = upper / n as f64;
    let mut acc = f(0.0) + f(upper);
    for k in 1..n {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok(acc * h / 3.0)
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Parseval,
    Kernel,
    Constants,
    Oracles,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["parseval", "kernel", "constants", "oracles", "all"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parseval" => Ok(Suite::Parseval),
            "kernel" => Ok(Suite::Kernel),
            "constants" => Ok(Suite::Constants),
            "oracles" => Ok(Suite::Oracles),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite '{other}' (expected one of {})", Suite::NAMES.join(", ")))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::Parseval => 0,
            Suite::Kernel => 1,
            Suite::Constants => 2,
            Suite::Oracles => 3,
            Suite::All => 4,
        };
        f.write_str(Suite::NAMES[i])
    }
}

/// Parameters of the verification suites.
///
/// The defaults use a wider η grid and μ range than the transform defaults:
/// on `[0.25, 4]` the vacuum pairing is truncated to about 0.44, well outside
/// a 5% band around 0.5. The kernel uses its own scale range reaching below
/// the κ spacing, which is what lets the coincident value grow under
/// refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub grid_n: usize,
    pub grid_extent: f64,
    pub scale_count: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub wavelet: MotherWavelet,
    pub theorem_tol: f64,
    pub oracle_tol: f64,
    pub orthogonality_tol: f64,
    pub truncation_tol: f64,
    pub scan_ratio_max: f64,
    pub kernel_grid_n: usize,
    pub kernel_extent: f64,
    pub kernel_scale_count: usize,
    pub kernel_mu_min: f64,
    pub kernel_mu_max: f64,
    pub kernel_separation: f64,
    pub kernel_growth_min: f64,
    pub kernel_offdiag_max: f64,
    pub seed: u64,
    pub draws: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            grid_n: 256,
            grid_extent: 24.0,
            scale_count: 64,
            mu_min: 0.125,
            mu_max: 8.0,
            wavelet: MotherWavelet::emhw(),
            theorem_tol: 0.05,
            oracle_tol: 1e-6,
            orthogonality_tol: 0.02,
            truncation_tol: 0.01,
            scan_ratio_max: 1.05,
            kernel_grid_n: 256,
            kernel_extent: 8.0,
            kernel_scale_count: 96,
            kernel_mu_min: 1e-3,
            kernel_mu_max: 4.0,
            kernel_separation: 3.0,
            kernel_growth_min: 3.0,
            kernel_offdiag_max: 0.01,
            seed: 20_240_601,
            draws: 50,
        }
    }
}

impl SuiteConfig {
    pub const KEYS: [&'static str; 22] = [
        "grid_n",
        "grid_extent",
        "scale_count",
        "mu_min",
        "mu_max",
        "wavelet",
        "coeffs",
        "theorem_tol",
        "oracle_tol",
        "orthogonality_tol",
        "truncation_tol",
        "scan_ratio_max",
        "kernel_grid_n",
        "kernel_extent",
        "kernel_scale_count",
        "kernel_mu_min",
        "kernel_mu_max",
        "kernel_separation",
        "kernel_growth_min",
        "kernel_offdiag_max",
        "seed",
        "draws",
    ];

    /// Sets one `key=value` entry. `wavelet` takes a kind name and `coeffs`
    /// a comma-separated list, turning the wavelet into a Laguerre–Gaussian
    /// one.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let float = || v.parse::<f64>().map_err(|_| Error::Parse(format!("{key}: bad number '{v}'")));
        let int = || v.parse::<usize>().map_err(|_| Error::Parse(format!("{key}: bad integer '{v}'")));
        match key.trim() {
            "grid_n" => self.grid_n = int()?,
            "grid_extent" => self.grid_extent = float()?,
            "scale_count" => self.scale_count = int()?,
            "mu_min" => self.mu_min = float()?,
            "mu_max" => self.mu_max = float()?,
            "wavelet" => {
                self.wavelet = match v.parse::<WaveletKind>()? {
                    WaveletKind::Emhw => MotherWavelet::emhw(),
                    WaveletKind::MexicanHat1D => MotherWavelet::mexican_hat_1d(),
                    WaveletKind::LaguerreGaussian => MotherWavelet::laguerre_gaussian(self.wavelet.coeffs().to_vec())?,
                }
            }
            "coeffs" => self.wavelet = MotherWavelet::laguerre_gaussian(parse_coeffs(v)?)?,
            "theorem_tol" => self.theorem_tol = float()?,
            "oracle_tol" => self.oracle_tol = float()?,
            "orthogonality_tol" => self.orthogonality_tol = float()?,
            "truncation_tol" => self.truncation_tol = float()?,
            "scan_ratio_max" => self.scan_ratio_max = float()?,
            "kernel_grid_n" => self.kernel_grid_n = int()?,
            "kernel_extent" => self.kernel_extent = float()?,
            "kernel_scale_count" => self.kernel_scale_count = int()?,
            "kernel_mu_min" => self.kernel_mu_min = float()?,
            "kernel_mu_max" => self.kernel_mu_max = float()?,
            "kernel_separation" => self.kernel_separation = float()?,
            "kernel_growth_min" => self.kernel_growth_min = float()?,
            "kernel_offdiag_max" => self.kernel_offdiag_max = float()?,
            "seed" => self.seed = v.parse().map_err(|_| Error::Parse(format!("seed: bad integer '{v}'")))?,
            "draws" => self.draws = int()?,
            other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Parses `key=value` lines over the defaults; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{line}'")))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<ComplexPlaneGrid> {
        ComplexPlaneGrid::symmetric(self.grid_n, self.grid_extent)
    }

    pub fn scales(&self) -> Result<ScaleGrid> {
        ScaleGrid::log_spaced(self.scale_count, self.mu_min, self.mu_max)
    }

    pub fn kernel_scales(&self) -> Result<ScaleGrid> {
        ScaleGrid::log_spaced(self.kernel_scale_count, self.kernel_mu_min, self.kernel_mu_max)
    }

    /// Checks every parameter before any suite runs.
    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.scales()?;
        self.kernel_scales()?;
        ComplexPlaneGrid::symmetric(self.kernel_grid_n, self.kernel_extent)?;
        if self.scale_count < 2 || self.kernel_scale_count < 2 {
            return Err(Error::InvalidParameter("scale quadrature needs at least two nodes".into()));
        }
        if !self.kernel_grid_n.is_multiple_of(2) {
            return Err(Error::InvalidParameter("kernel_grid_n must be even so the coincidence point sits at a cell centre".into()));
        }
        for (name, v) in [
            ("theorem_tol", self.theorem_tol),
            ("oracle_tol", self.oracle_tol),
            ("orthogonality_tol", self.orthogonality_tol),
            ("truncation_tol", self.truncation_tol),
            ("kernel_offdiag_max", self.kernel_offdiag_max),
            ("kernel_separation", self.kernel_separation),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.scan_ratio_max >= 1.0 && self.kernel_growth_min > 0.0) {
            return Err(Error::InvalidParameter("scan_ratio_max must be >= 1 and kernel_growth_min > 0".into()));
        }
        if self.wavelet.kind() == WaveletKind::MexicanHat1D {
            return Err(Error::Unsupported("suites need a complex-plane wavelet".into()));
        }
        if !self.wavelet.is_admissible() {
            return Err(Error::NonAdmissible { defect: self.wavelet.admissibility_defect().norm() });
        }
        Ok(())
    }
}

/// One row of a suite report. A case passes when `error <= tolerance`; each
/// case defines its own error measure (relative, absolute or a ratio).
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub case: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub error: f64,
    pub tolerance: f64,
}

impl CaseResult {
    fn new(case: impl Into<String>, lhs: Complex64, rhs: Complex64, error: f64, tolerance: f64) -> Self {
        Self { case: case.into(), lhs, rhs, error, tolerance }
    }

    fn relative(case: impl Into<String>, lhs: Complex64, rhs: Complex64, tolerance: f64) -> Self {
        let e = (lhs - rhs).norm() / rhs.norm().max(REL_ERROR_FLOOR);
        Self::new(case, lhs, rhs, e, tolerance)
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    cfg.validate()?;
    match suite {
        Suite::Parseval => parseval_suite(cfg),
        Suite::Kernel => kernel_suite(cfg),
        Suite::Constants => constants_suite(cfg),
        Suite::Oracles => oracles_suite(cfg),
        Suite::All => {
            let mut out = parseval_suite(cfg)?;
            out.extend(kernel_suite(cfg)?);
            out.extend(constants_suite(cfg)?);
            out.extend(oracles_suite(cfg)?);
            Ok(out)
        }
    }
}

fn parseval_suite(cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let grid = cfg.grid()?;
    let scales = cfg.scales()?;
    let w = &cfg.wavelet;
    let c_prime = w.c_psi_prime()?;
    let vac = StateDescriptor::Number { m: 0, n: 0 }.sample(&grid)?;
    let s11 = StateDescriptor::Number { m: 1, n: 1 }.sample(&grid)?;
    let wv = transform(&vac, w, &scales, Engine::Fft)?;
    let w11 = transform(&s11, w, &scales, Engine::Fft)?;

    let vv = coefficient_pairing(&wv, &wv)?;
    let cross = coefficient_pairing(&wv, &w11)?;
    let pp = coefficient_pairing(&w11, &w11)?;
    let rhs_v = vac.inner(&vac, Measure::OverPi)? * c_prime;
    let rhs_x = vac.inner(&s11, Measure::OverPi)? * c_prime;
    let rhs_p = s11.inner(&s11, Measure::OverPi)? * c_prime;

    // both ends of the doubled range on a grid twice as fine, so the smallest
    // scale stays as well resolved and only the truncation changes
    let fine = ComplexPlaneGrid::symmetric(2 * cfg.grid_n, cfg.grid_extent)?;
    let vac_fine = StateDescriptor::Number { m: 0, n: 0 }.sample(&fine)?;
    let base = transform(&vac_fine, w, &scales, Engine::Fft)?;
    let base = coefficient_pairing(&base, &base)?;
    let wide = transform(&vac_fine, w, &scales.widened(2.0)?, Engine::Fft)?;
    let doubled = coefficient_pairing(&wide, &wide)?;

    Ok(vec![
        CaseResult::relative("parseval_vacuum", vv, rhs_v, cfg.theorem_tol),
        CaseResult::new("parseval_vacuum_vs_11", cross, rhs_x, (cross - rhs_x).norm(), cfg.orthogonality_tol),
        CaseResult::relative("parseval_11", pp, rhs_p, cfg.theorem_tol),
        CaseResult::relative("parseval_vacuum_range_doubled", doubled, base, cfg.truncation_tol),
    ])
}

fn kernel_suite(cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let scales = cfg.kernel_scales()?;
    let w = &cfg.wavelet;
    let coarse = ComplexPlaneGrid::symmetric(cfg.kernel_grid_n, cfg.kernel_extent)?;
    let fine = ComplexPlaneGrid::symmetric(2 * cfg.kernel_grid_n, cfg.kernel_extent)?;
    let origin = Complex64::new(0.0, 0.0);
    let half = Complex64::new(0.5 * cfg.kernel_separation, 0.0);

    let k_coarse = reproducing_kernel(origin, origin, w, &scales, &coarse)?;
    let k_fine = reproducing_kernel(origin, origin, w, &scales, &fine)?;
    let k_off = reproducing_kernel(-half, half, w, &scales, &coarse)?;
    let k_off_swapped = reproducing_kernel(half, -half, w, &scales, &coarse)?;

    let growth = k_fine.norm() / k_coarse.norm().max(f64::MIN_POSITIVE);
    let ratio = k_off.norm() / k_coarse.norm().max(f64::MIN_POSITIVE);
    Ok(vec![
        CaseResult::new("kernel_separated", k_off, k_coarse, ratio, cfg.kernel_offdiag_max),
        // error is the inverse growth so that passing still means error <= tolerance
        CaseResult::new("kernel_coincident_growth", k_fine, k_coarse, 1.0 / growth, 1.0 / cfg.kernel_growth_min),
        CaseResult::new(
            "kernel_hermitian",
            k_off,
            k_off_swapped.conj(),
            (k_off - k_off_swapped.conj()).norm() / k_off.norm().max(REL_ERROR_FLOOR),
            1e-12,
        ),
    ])
}

/// States used by the constant-independence scan.
pub fn scan_states() -> Vec<StateDescriptor> {
    vec![
        StateDescriptor::Number { m: 0, n: 0 },
        StateDescriptor::Number { m: 1, n: 1 },
        StateDescriptor::Coherent { z1: Complex64::new(0.5, 0.0), z2: Complex64::new(0.3, 0.0) },
    ]
}

fn constants_suite(cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let grid = cfg.grid()?;
    let scales = cfg.scales()?;
    let w = &cfg.wavelet;
    let c_prime = w.c_psi_prime()?;
    let mut out = Vec::new();
    if w.kind() == WaveletKind::Emhw || w.coeffs() == [0.5, 0.5] {
        out.push(CaseResult::new("c_psi_prime_emhw", real(c_prime), real(0.5), (c_prime - 0.5).abs(), 1e-3));
    }
    let states = scan_states();
    let values = constant_scan(&states, w, &scales, &grid)?;
    for (s, &v) in states.iter().zip(&values) {
        out.push(CaseResult::relative(format!("isometry[{s}]"), real(v), real(c_prime), cfg.theorem_tol));
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    out.push(CaseResult::new("isometry_max_over_min", real(ratio), real(1.0), ratio - 1.0, cfg.scan_ratio_max - 1.0));
    Ok(out)
}

fn oracles_suite(cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let tol = cfg.oracle_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let c = Complex64::new;

    let gauss_case = |name: String, zeta: Complex64, xi: Complex64, eta: Complex64| -> Result<CaseResult> {
        let closed = oracle_gaussian_integral(zeta, xi, eta)?;
        let quad = gaussian_integral_quadrature(zeta, xi, eta)?;
        let err = (quad - closed).norm() / closed.norm().max(1.0);
        Ok(CaseResult::new(name, quad, closed, err, tol))
    };
    out.push(gauss_case("gaussian(-1,0,0)".into(), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))?);
    out.push(gauss_case("gaussian(-1,1,1)".into(), c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0))?);
    out.push(gauss_case("gaussian(-2,i,i)".into(), c(-2.0, 0.0), c(0.0, 1.0), c(0.0, 1.0))?);
    let mut worst: Option<CaseResult> = None;
    for k in 0..cfg.draws {
        let zeta = c(rng.gen_range(-2.0..-0.5), rng.gen_range(-0.5..0.5));
        let xi = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let eta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r = gauss_case(format!("gaussian_random[{k}]"), zeta, xi, eta)?;
        if worst.as_ref().is_none_or(|w| r.error > w.error) {
            worst = Some(r);
        }
    }
    if let Some(mut w) = worst {
        w.case = format!("gaussian_random_worst_of_{}({})", cfg.draws, w.case);
        out.push(w);
    }

    let scale_case = |name: String, x: f64, y: f64| -> Result<CaseResult> {
        let closed = oracle_scale_integral(x, y)?;
        let quad = scale_integral_quadrature(x, y)?;
        let err = (quad - closed).abs() / closed.abs().max(1.0);
        Ok(CaseResult::new(name, real(quad), real(closed), err, tol))
    };
    out.push(scale_case("scale(1,0)".into(), 1.0, 0.0)?);
    out.push(scale_case("scale(1,1)".into(), 1.0, 1.0)?);
    out.push(scale_case("scale(sqrt2,sqrt2)".into(), 2f64.sqrt(), 2f64.sqrt())?);
    let mut worst: Option<CaseResult> = None;
    for k in 0..cfg.draws {
        let x = rng.gen_range(0.3..2.0);
        let y = rng.gen_range(0.0..2.0);
        let r = scale_case(format!("scale_random[{k}]"), x, y)?;
        if worst.as_ref().is_none_or(|w| r.error > w.error) {
            worst = Some(r);
        }
    }
    if let Some(mut w) = worst {
        w.case = format!("scale_random_worst_of_{}({})", cfg.draws, w.case);
        out.push(w);
    }

    // (-1)^n H_{n,n}(z, z*) = n! L_n(|z|²)
    for n in 0..=10usize {
        let mut worst_err = 0.0f64;
        let mut pair = (real(0.0), real(0.0));
        for _ in 0..20 {
            let z = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let h = hermite2(PolyOrder::new(n, n)?, z, z.conj());
            let lhs = if n % 2 == 0 { h } else { -h };
            let rhs = factorial(n) * laguerre(n, z.norm_sqr());
            let err = (lhs - rhs).norm() / rhs.abs().max(factorial(n) * 1e-3);
            if err >= worst_err {
                worst_err = err;
                pair = (lhs, real(rhs));
            }
        }
        out.push(CaseResult::new(format!("hermite_laguerre[n={n}]"), pair.0, pair.1, worst_err, 1e-10));
    }
    Ok(out)
}

/// `case,lhs_re,lhs_im,rhs_re,rhs_im,rel_error`, one row per case.
pub fn report_csv(results: &[CaseResult]) -> String {
    let mut s = String::from("case,lhs_re,lhs_im,rhs_re,rhs_im,rel_error\n");
    for r in results {
        let name =
            if r.case.contains(',') || r.case.contains('"') { format!("\"{}\"", r.case.replace('"', "\"\"")) } else { r.case.clone() };
        s.push_str(&format!("{},{:e},{:e},{:e},{:e},{:e}\n", name, r.lhs.re, r.lhs.im, r.rhs.re, r.rhs.im, r.error));
    }
    s
}

/// Fixed-width text table with a pass/fail column.
pub fn report_table(results: &[CaseResult]) -> String {
    let width = results.iter().map(|r| r.case.len()).max().unwrap_or(4).max(4);
    let mut s = format!("{:<width$}  {:>14}  {:>14}  {:>10}  {:>10}  status\n", "case", "lhs", "rhs", "error", "tolerance");
    for r in results {
        s.push_str(&format!(
            "{:<width$}  {:>14.7e}  {:>14.7e}  {:>10.3e}  {:>10.3e}  {}\n",
            r.case,
            r.lhs.re,
            r.rhs.re,
            r.error,
            r.tolerance,
            if r.passed() { "pass" } else { "FAIL" }
        ));
    }
    s
}
