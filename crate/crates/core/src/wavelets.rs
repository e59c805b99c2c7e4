//! Mother wavelets on the complex plane.
//!
//! The Laguerre–Gaussian family is
//!
//! ```text
//! ψ(η) = e^{-|η|²/2} Σ_n n! K_n L_n(|η|²)
//! ```
//!
//! with real coefficients `K_n`. It is admissible when
//! `∫ d²η/(2π) ψ(η) = Σ_n (-1)^n n! K_n` vanishes. The entangled Mexican hat
//! (`Emhw`) is the two-term member `K = (1/2, 1/2)`, i.e.
//! `ψ(η) = e^{-|η|²/2}(1 - |η|²/2)`.
//!
//! Under the symplectic Fourier transform
//! `ψ(ξ) = ∫ d²η/(2π) exp[(ξ*η - ξη*)/2] ψ(η)` each term maps to
//! `e^{-|ξ|²/2} K_n H_{n,n}(|ξ|, |ξ|)`, so the transformed wavelet is again
//! radial. The Parseval constant is `C′ψ = 4 ∫_0^∞ |ψ(ξ)|² d|ξ|/|ξ|`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{integrate_log_romberg, ComplexPlaneGrid, Field, Measure};
use crate::specfun::{factorial, hermite2, laguerre, PolyOrder, MAX_ORDER};

/// Tolerance on the closed-form admissibility defect.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;
/// Tolerance on a defect obtained by quadrature, also the precondition of
/// [`MotherWavelet::c_psi_prime`].
pub const QUADRATURE_ADMISSIBILITY_TOL: f64 = 1e-8;
/// Radial interval for the `C′ψ` integral.
pub const C_PRIME_R_MIN: f64 = 1e-6;
pub const C_PRIME_R_MAX: f64 = 12.0;
/// Relative boundary magnitude above which [`symplectic_fourier`] refuses a
/// sampled wavelet.
pub const FOURIER_DECAY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveletKind {
    LaguerreGaussian,
    /// Entangled Mexican hat, `e^{-|η|²/2}(1 - |η|²/2)`.
    Emhw,
    /// The 1D Mexican hat `(1 - x²) e^{-x²/2}` used by the 1D baseline.
    MexicanHat1D,
}

impl WaveletKind {
    pub fn name(self) -> &'static str {
        match self {
            WaveletKind::LaguerreGaussian => "lg",
            WaveletKind::Emhw => "emhw",
            WaveletKind::MexicanHat1D => "mexican-hat-1d",
        }
    }
}

impl FromStr for WaveletKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lg" | "laguerre-gaussian" | "laguerregaussian" => Ok(WaveletKind::LaguerreGaussian),
            "emhw" => Ok(WaveletKind::Emhw),
            "mexican-hat-1d" | "mexicanhat1d" | "mexican-hat" => Ok(WaveletKind::MexicanHat1D),
            other => Err(Error::Parse(format!("unknown wavelet kind '{other}'"))),
        }
    }
}

impl fmt::Display for WaveletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A radial mother wavelet described analytically.
#[derive(Debug, Clone, PartialEq)]
pub struct MotherWavelet {
    kind: WaveletKind,
    coeffs: Vec<f64>,
}

impl MotherWavelet {
    /// Laguerre–Gaussian wavelet with coefficients `K_0, K_1, ...`. The
    /// coefficients are taken as given; see [`MotherWavelet::normalized`].
    pub fn laguerre_gaussian(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("Laguerre-Gaussian wavelet needs at least one coefficient".into()));
        }
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(Error::OrderTooLarge { m: coeffs.len() - 1, n: coeffs.len() - 1, max: MAX_ORDER });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("wavelet coefficients must be finite".into()));
        }
        Ok(Self { kind: WaveletKind::LaguerreGaussian, coeffs })
    }

    pub fn emhw() -> Self {
        Self { kind: WaveletKind::Emhw, coeffs: vec![0.5, 0.5] }
    }

    pub fn mexican_hat_1d() -> Self {
        Self { kind: WaveletKind::MexicanHat1D, coeffs: Vec::new() }
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    /// Laguerre coefficients `K_n`; `(1/2, 1/2)` for the entangled Mexican
    /// hat, empty for the 1D wavelet.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    fn is_radial_2d(&self) -> bool {
        self.kind != WaveletKind::MexicanHat1D
    }

    /// Weights `a_n = n! K_n` of the Laguerre expansion.
    fn laguerre_weights(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(n, &k)| (n, factorial(n) * k))
    }

    /// `ψ(η)`. The 1D wavelet is evaluated at `Re η`.
    pub fn eval(&self, eta: Complex64) -> Complex64 {
        let v = match self.kind {
            WaveletKind::Emhw => {
                let t = eta.norm_sqr();
                (-0.5 * t).exp() * (1.0 - 0.5 * t)
            }
            WaveletKind::LaguerreGaussian => {
                let t = eta.norm_sqr();
                (-0.5 * t).exp() * laguerre_series(&self.coeffs, t)
            }
            WaveletKind::MexicanHat1D => {
                let x = eta.re;
                (1.0 - x * x) * (-0.5 * x * x).exp()
            }
        };
        Complex64::new(v, 0.0)
    }

    /// 1D profile `ψ(x)`; for radial wavelets this is the value on the real
    /// axis.
    pub fn eval_1d(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Closed-form symplectic Fourier transform `ψ(ξ)`.
    pub fn fourier_closed(&self, xi: Complex64) -> Result<Complex64> {
        let r = xi.norm();
        let v = match self.kind {
            WaveletKind::Emhw => 0.5 * r * r * (-0.5 * r * r).exp(),
            WaveletKind::LaguerreGaussian => {
                let x = Complex64::new(r, 0.0);
                let mut acc = 0.0;
                for (n, &k) in self.coeffs.iter().enumerate() {
                    if k != 0.0 {
                        acc += k * hermite2(PolyOrder::new(n, n)?, x, x).re;
                    }
                }
                (-0.5 * r * r).exp() * acc
            }
            WaveletKind::MexicanHat1D => {
                return Err(Error::Unsupported("the 1D Mexican hat has no complex-plane Fourier transform; use fourier_1d".into()))
            }
        };
        Ok(Complex64::new(v, 0.0))
    }

    /// 1D Fourier transform `∫ ψ(x) e^{-ipx} dx` of the 1D wavelet.
    pub fn fourier_1d(&self, p: f64) -> Result<f64> {
        match self.kind {
            WaveletKind::MexicanHat1D => Ok((2.0 * PI).sqrt() * p * p * (-0.5 * p * p).exp()),
            _ => Err(Error::Unsupported(format!("fourier_1d is defined for the 1D wavelet, not '{}'", self.kind))),
        }
    }

    /// `∫ d²η/(2π) ψ(η)` in closed form, `Σ (-1)^n n! K_n` for the radial
    /// family. For the 1D wavelet this is `∫ ψ(x) dx`, which vanishes.
    pub fn admissibility_defect(&self) -> Complex64 {
        let v = match self.kind {
            WaveletKind::MexicanHat1D => 0.0,
            _ => self.laguerre_weights().map(|(n, a)| if n % 2 == 0 { a } else { -a }).sum(),
        };
        Complex64::new(v, 0.0)
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility_defect().norm() <= ADMISSIBILITY_TOL
    }

    /// `∫ d²η/π |ψ(η)|² = Σ (n! K_n)²` by orthonormality of `e^{-t/2} L_n(t)`.
    pub fn energy(&self) -> Result<f64> {
        if !self.is_radial_2d() {
            return Err(Error::Unsupported("energy is defined for complex-plane wavelets".into()));
        }
        Ok(self.laguerre_weights().map(|(_, a)| a * a).sum())
    }

    /// Rescaled copy with `∫ d²η/π |ψ|² = 1`, returned as a Laguerre–Gaussian
    /// wavelet.
    pub fn normalized(&self) -> Result<Self> {
        let e = self.energy()?;
        if e <= 0.0 {
            return Err(Error::InvalidParameter("cannot normalize a zero wavelet".into()));
        }
        let s = e.sqrt().recip();
        Self::laguerre_gaussian(self.coeffs.iter().map(|k| k * s).collect())
    }

    /// Copy with every coefficient multiplied by `a`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if !self.is_radial_2d() {
            return Err(Error::Unsupported("scaling is defined for complex-plane wavelets".into()));
        }
        Self::laguerre_gaussian(self.coeffs.iter().map(|k| k * a).collect())
    }

    /// Orthogonal projection of the weights `n! K_n` onto the admissible
    /// hyperplane `Σ (-1)^n n! K_n = 0`.
    pub fn projected_admissible(&self) -> Result<Self> {
        if !self.is_radial_2d() {
            return Err(Error::Unsupported("projection is defined for complex-plane wavelets".into()));
        }
        let defect = self.admissibility_defect().re;
        let len = self.coeffs.len() as f64;
        let coeffs = self
            .laguerre_weights()
            .map(|(n, a)| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                (a - defect * sign / len) / factorial(n)
            })
            .collect();
        Self::laguerre_gaussian(coeffs)
    }

    /// `C′ψ = 4 ∫_0^∞ |ψ(ξ)|² d|ξ|/|ξ|` over `[C_PRIME_R_MIN, C_PRIME_R_MAX]`.
    pub fn c_psi_prime(&self) -> Result<f64> {
        let defect = self.admissibility_defect().norm();
        if defect > QUADRATURE_ADMISSIBILITY_TOL {
            return Err(Error::NonAdmissible { defect });
        }
        // probe first so the closure below cannot fail
        self.fourier_closed(Complex64::new(1.0, 0.0))?;
        let density = |r: f64| {
            let v = self.fourier_closed(Complex64::new(r, 0.0)).unwrap().norm_sqr();
            4.0 * v
        };
        let value = integrate_log_romberg(|r| density(r) / r, C_PRIME_R_MIN, C_PRIME_R_MAX, 1e-12)?;
        // the integrand in ln r must have died out at both ends
        let edge = density(C_PRIME_R_MIN).max(density(C_PRIME_R_MAX));
        if !(value > 0.0) || edge > 1e-10 * value {
            return Err(Error::Divergent(format!(
                "C'psi radial integrand does not vanish at the ends of [{C_PRIME_R_MIN:e}, {C_PRIME_R_MAX}] (edge density {edge:e}, value {value:e})"
            )));
        }
        Ok(value)
    }

    /// Text descriptor, one `key=value` per line.
    pub fn to_descriptor(&self) -> String {
        let mut s = format!("kind={}\n", self.kind);
        if self.kind == WaveletKind::LaguerreGaussian {
            let c: Vec<String> = self.coeffs.iter().map(|c| format!("{c:?}")).collect();
            s.push_str(&format!("coeffs={}\n", c.join(",")));
        }
        s
    }

    /// Parses a descriptor produced by [`MotherWavelet::to_descriptor`].
    /// Blank lines and `#` comments are ignored.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut coeffs = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{line}'")))?;
            match key.trim() {
                "kind" => kind = Some(value.parse::<WaveletKind>()?),
                "coeffs" => coeffs = Some(parse_coeffs(value)?),
                other => return Err(Error::Parse(format!("unknown wavelet key '{other}'"))),
            }
        }
        match (kind, coeffs) {
            (Some(WaveletKind::LaguerreGaussian), Some(c)) => Self::laguerre_gaussian(c),
            (Some(WaveletKind::LaguerreGaussian), None) => Err(Error::Parse("kind=lg needs a coeffs line".into())),
            (Some(WaveletKind::Emhw), None) => Ok(Self::emhw()),
            (Some(WaveletKind::MexicanHat1D), None) => Ok(Self::mexican_hat_1d()),
            (Some(k), Some(_)) => Err(Error::Parse(format!("kind={k} takes no coeffs"))),
            (None, _) => Err(Error::Parse("descriptor has no kind".into())),
        }
    }
}

impl FromStr for MotherWavelet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_descriptor(s)
    }
}

/// Parses `c0,c1,...`.
pub fn parse_coeffs(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad coefficient '{}': {e}", t.trim())))).collect()
}

/// `Σ_n n! K_n L_n(t)` with the Laguerre recurrence run once.
fn laguerre_series(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut fact = 1.0;
    for (n, &k) in coeffs.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
            let next = if n == 1 {
                1.0 - t
            } else {
                let kf = (n - 1) as f64;
                ((2.0 * kf + 1.0 - t) * cur - kf * prev) / (kf + 1.0)
            };
            prev = cur;
            cur = next;
        }
        acc += fact * k * cur;
    }
    debug_assert!(coeffs.is_empty() || (cur - laguerre(coeffs.len() - 1, t)).abs() <= 1e-9 * cur.abs().max(1.0));
    acc
}

/// Quadrature form of the admissibility defect, `∫ d²η/(2π) ψ`.
pub fn admissibility_defect_sampled(samples: &Field) -> Complex64 {
    samples.integrate(Measure::OverTwoPi)
}

/// Symplectic Fourier transform of sampled values by 2D trapezoid quadrature,
/// evaluated at every node of `xi_grid`.
///
/// The kernel `exp[i(ξ₁η₂ - ξ₂η₁)]` factorizes, so the double sum is done as
/// two passes of 1D sums.
pub fn symplectic_fourier(samples: &Field, xi_grid: &ComplexPlaneGrid) -> Result<Field> {
    samples.check_decay(FOURIER_DECAY_THRESHOLD)?;
    let g = samples.grid();
    let weighted = samples.trapezoid_weighted();
    let (nx, ny) = (g.nx, g.ny);
    let (mx, my) = (xi_grid.nx, xi_grid.ny);

    // pass 1: A[q][j] = Σ_i w ψ(η1_i, η2_j) e^{-i ξ2_q η1_i}
    let mut partial = vec![Complex64::new(0.0, 0.0); my * ny];
    let mut phase = vec![Complex64::new(0.0, 0.0); nx];
    for q in 0..my {
        let xi2 = xi_grid.y(q);
        for (i, p) in phase.iter_mut().enumerate() {
            *p = Complex64::from_polar(1.0, -xi2 * g.x(i));
        }
        let row = &mut partial[q * ny..(q + 1) * ny];
        for (i, p) in phase.iter().enumerate() {
            let src = &weighted[i * ny..(i + 1) * ny];
            for (a, &v) in row.iter_mut().zip(src) {
                *a += v * p;
            }
        }
    }

    // pass 2: ψ(ξ1_p, ξ2_q) = Σ_j A[q][j] e^{i ξ1_p η2_j}
    let scale = g.cell_area() / (2.0 * PI);
    let mut out = vec![Complex64::new(0.0, 0.0); mx * my];
    let mut phase = vec![Complex64::new(0.0, 0.0); ny];
    for p in 0..mx {
        let xi1 = xi_grid.x(p);
        for (j, ph) in phase.iter_mut().enumerate() {
            *ph = Complex64::from_polar(1.0, xi1 * g.y(j));
        }
        for q in 0..my {
            let row = &partial[q * ny..(q + 1) * ny];
            let s: Complex64 = row.iter().zip(&phase).map(|(a, ph)| a * ph).sum();
            out[xi_grid.index(p, q)] = s * scale;
        }
    }
    Field::new(*xi_grid, out)
}

/// Uniformly sampled profile of a function of `|ξ|` (or of `p > 0` in 1D),
/// `values[k]` taken at `r0 + k dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    r0: f64,
    dr: f64,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(r0: f64, dr: f64, values: Vec<f64>) -> Result<Self> {
        if !(r0 > 0.0 && dr > 0.0 && r0.is_finite() && dr.is_finite()) {
            return Err(Error::InvalidParameter(format!("radial grid needs r0 > 0 and dr > 0, got r0={r0}, dr={dr}")));
        }
        if values.len() < 3 {
            return Err(Error::InvalidParameter("radial profile needs at least three samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("radial profile sample".into()));
        }
        Ok(Self { r0, dr, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(r0: f64, dr: f64, n: usize, f: F) -> Result<Self> {
        let values = (0..n).map(|k| f(r0 + k as f64 * dr)).collect();
        Self::new(r0, dr, values)
    }

    pub fn radius(&self, k: usize) -> f64 {
        self.r0 + k as f64 * self.dr
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoid sum of `|v|²/r` using every `stride`-th sample, plus the
    /// segment from the origin where the integrand of an admissible profile
    /// vanishes.
    fn inverse_radius_integral(&self, stride: usize) -> f64 {
        let idx: Vec<usize> = (0..self.values.len()).step_by(stride).collect();
        let f = |k: usize| self.values[k] * self.values[k] / self.radius(k);
        let mut acc = 0.5 * self.r0 * f(0);
        for w in idx.windows(2) {
            let h = self.radius(w[1]) - self.radius(w[0]);
            acc += 0.5 * h * (f(w[0]) + f(w[1]));
        }
        acc
    }
}

/// 1D admissibility constant `C_ψ = ∫_0^∞ |ψ(p)|²/p dp` from a sampled
/// Fourier profile.
pub fn c_psi_1d(profile: &RadialProfile) -> Result<f64> {
    let v = profile.values();
    let peak = v.iter().map(|x| x * x).fold(0.0, f64::max);
    let (first, last) = (v[0] * v[0], v[v.len() - 1] * v[v.len() - 1]);
    if first > 1e-6 * peak || last > 1e-6 * peak {
        return Err(Error::Divergent(format!(
            "profile does not decay at both ends (|ψ|² = {first:e} at p={:e}, {last:e} at p={:e})",
            profile.r0,
            profile.radius(v.len() - 1)
        )));
    }
    let fine = profile.inverse_radius_integral(1);
    let coarse = profile.inverse_radius_integral(2);
    if (fine - coarse).abs() > 1e-3 * fine.abs() {
        return Err(Error::Divergent(format!("C_psi not stable under refinement: {fine:e} vs {coarse:e}")));
    }
    Ok(fine)
}
