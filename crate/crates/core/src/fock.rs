//! Two-mode number-basis view of the entangled-state representation.
//!
//! With `|η⟩ = exp(-|η|²/2 + η a₁† - η* a₂† + a₁† a₂†)|00⟩` the number-state
//! wavefunctions are
//!
//! ```text
//! ⟨η|m,n⟩ = e^{-|η|²/2} (-1)^n H_{m,n}(η*, η) / √(m! n!)
//! ⟨ξ|m,n⟩ = e^{-|ξ|²/2}        H_{m,n}(ξ*, ξ) / √(m! n!)
//! ```
//!
//! and a two-mode coherent state has
//! `⟨η|z₁,z₂⟩ = exp(-|η|²/2 - (|z₁|²+|z₂|²)/2 + η* z₁ - η z₂ + z₁ z₂)`.
//! `|η⟩` itself is never built; everything here is an overlap.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::ccwt;
use crate::error::{Error, Result};
use crate::grid::{try_sample, ComplexPlaneGrid, Field, Measure};
use crate::specfun::{hermite2, ln_factorial, HermiteShells, PolyOrder, MAX_ORDER};
use crate::wavelets::MotherWavelet;

/// Absolute tolerance on the dropped tail of the coherent-state series.
pub const COHERENT_TAIL_TOL: f64 = 1e-10;
/// Largest total degree `m + n` used by the coherent-state series.
pub const COHERENT_MAX_DEGREE: usize = 2 * MAX_ORDER;

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn inv_sqrt_factorials(m: usize, n: usize) -> f64 {
    (-0.5 * (ln_factorial(m) + ln_factorial(n))).exp()
}

/// `⟨η|m,n⟩`.
pub fn number_state_eta(m: usize, n: usize, eta: Complex64) -> Result<Complex64> {
    let h = hermite2(PolyOrder::new(m, n)?, eta.conj(), eta);
    Ok(h * ((-0.5 * eta.norm_sqr()).exp() * sign(n) * inv_sqrt_factorials(m, n)))
}

/// `⟨ξ|m,n⟩` in the conjugate representation.
pub fn conjugate_number_state(m: usize, n: usize, xi: Complex64) -> Result<Complex64> {
    let h = hermite2(PolyOrder::new(m, n)?, xi.conj(), xi);
    Ok(h * ((-0.5 * xi.norm_sqr()).exp() * inv_sqrt_factorials(m, n)))
}

/// `⟨η|z₁,z₂⟩` summed over number states shell by shell (`m + n` fixed)
/// until the dropped tail is below [`COHERENT_TAIL_TOL`].
pub fn coherent_state_eta(z1: Complex64, z2: Complex64, eta: Complex64) -> Result<Complex64> {
    let pre = (-0.5 * (eta.norm_sqr() + z1.norm_sqr() + z2.norm_sqr())).exp();
    // term(m, n) = pre (-1)^n h_{m,n}(η*, η) z₁^m z₂^n with h = H/(m! n!)
    let mut shells = HermiteShells::new(eta.conj(), eta);
    let mut acc = Complex64::new(pre, 0.0);
    // Shell magnitudes are bounded by the Taylor coefficients M_d of
    // exp(b t + c t²), b = |η|(|z₁| + |z₂|), c = |z₁||z₂|, which obey
    // d M_d = b M_{d-1} + 2c M_{d-2}. Once d > 2b + 4c the bound halves at
    // least every second shell, so the tail is below 4 pre (M_d + M_{d-1}).
    let b = eta.norm() * (z1.norm() + z2.norm());
    let cc = z1.norm() * z2.norm();
    let (mut m_prev2, mut m_prev) = (0.0, 1.0);
    for d in 1..=COHERENT_MAX_DEGREE {
        let shell = shells.push_shell();
        let mut sum = Complex64::new(0.0, 0.0);
        // shell[m] = h_{m, d-m}
        for (m, h) in shell.iter().enumerate() {
            let n = d - m;
            sum += h * z1.powu(m as u32) * z2.powu(n as u32) * sign(n);
        }
        acc += sum * pre;
        let m_d = (b * m_prev + 2.0 * cc * m_prev2) / d as f64;
        if d as f64 > 2.0 * b + 4.0 * cc + 2.0 && 4.0 * pre * (m_d + m_prev) <= COHERENT_TAIL_TOL {
            return Ok(acc);
        }
        m_prev2 = m_prev;
        m_prev = m_d;
    }
    Err(Error::NonConvergence(format!("coherent-state series at z1={z1}, z2={z2}, eta={eta} needs more than {COHERENT_MAX_DEGREE} shells")))
}

/// Closed form of [`coherent_state_eta`].
pub fn coherent_state_closed(z1: Complex64, z2: Complex64, eta: Complex64) -> Complex64 {
    let e = -0.5 * (eta.norm_sqr() + z1.norm_sqr() + z2.norm_sqr()) + eta.conj() * z1 - eta * z2 + z1 * z2;
    e.exp()
}

/// `⟨ξ|η⟩ = (1/2) exp[i(ξ₁η₂ - ξ₂η₁)]`.
pub fn xi_eta_overlap(xi: Complex64, eta: Complex64) -> Complex64 {
    Complex64::from_polar(0.5, xi.re * eta.im - xi.im * eta.re)
}

/// Square partial sums `S_K = Σ_{m,n ≤ K} ⟨ξ|m,n⟩⟨m,n|η⟩` for `K = 0..=cutoff`.
///
/// The full double series does not converge (at `ξ = η = 0` it is
/// `1 - 1 + 1 - ...`), so these are inputs to a summation method.
pub fn xi_eta_partial_sums(xi: Complex64, eta: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    if cutoff > MAX_ORDER {
        return Err(Error::OrderTooLarge { m: cutoff, n: cutoff, max: MAX_ORDER });
    }
    let hx = HermiteShells::with_degree(xi.conj(), xi, 2 * cutoff);
    let he = HermiteShells::with_degree(eta, eta.conj(), 2 * cutoff);
    let pre = (-0.5 * (xi.norm_sqr() + eta.norm_sqr())).exp();
    // term = pre (-1)^n m! n! h^ξ_{mn} h^η_{mn}
    let term = |m: usize, n: usize| {
        let f = (ln_factorial(m) + ln_factorial(n)).exp();
        hx.scaled(m, n) * he.scaled(m, n) * (f * sign(n) * pre)
    };
    let mut sums = Vec::with_capacity(cutoff + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=cutoff {
        // new L-shaped layer m = k or n = k
        for j in 0..k {
            acc += term(k, j) + term(j, k);
        }
        acc += term(k, k);
        sums.push(acc);
    }
    Ok(sums)
}

/// Fock-basis value of `⟨ξ|η⟩` from states with `m, n ≤ cutoff`: the square
/// partial sums averaged with binomial (Euler) weights.
pub fn xi_eta_fock(xi: Complex64, eta: Complex64, cutoff: usize) -> Result<Complex64> {
    let mut s = xi_eta_partial_sums(xi, eta, cutoff)?;
    while s.len() > 1 {
        s = s.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    Ok(s[0])
}

/// `⟨ψ|U₂(μ, κ)|g⟩` through the η representation; the same quadrature as
/// the forward transform.
pub fn u2_matrix_element(w: &MotherWavelet, g: &Field, mu: f64, kappa: Complex64) -> Result<Complex64> {
    ccwt::forward_at(g, w, mu, kappa)
}

/// Gram matrix of the number states `|m,n⟩`, `m, n ≤ cutoff`, under
/// `∫ d²η/π`. Rows and columns are ordered by `(m, n)` lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    labels: Vec<(usize, usize)>,
    values: Vec<Complex64>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.dim() + col]
    }

    /// Entry `⟨m,n|m',n'⟩`.
    pub fn entry(&self, a: (usize, usize), b: (usize, usize)) -> Option<Complex64> {
        let i = self.labels.iter().position(|&l| l == a)?;
        let j = self.labels.iter().position(|&l| l == b)?;
        Some(self.get(i, j))
    }

    /// `max |G - I|`.
    pub fn max_identity_deviation(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| {
                let id = if i == j { 1.0 } else { 0.0 };
                (self.get(i, j) - id).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn completeness_gram(cutoff: usize, grid: &ComplexPlaneGrid) -> Result<GramMatrix> {
    PolyOrder::new(cutoff, cutoff)?;
    let labels: Vec<(usize, usize)> = (0..=cutoff).flat_map(|m| (0..=cutoff).map(move |n| (m, n))).collect();
    let fields = labels.iter().map(|&(m, n)| try_sample(grid, |z| number_state_eta(m, n, z))).collect::<Result<Vec<_>>>()?;
    let d = labels.len();
    let mut values = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in i..d {
            // ⟨a|b⟩ = ∫ conj(⟨η|a⟩) ⟨η|b⟩
            let v = fields[j].inner(&fields[i], Measure::OverPi)?;
            values[i * d + j] = v;
            values[j * d + i] = v.conj();
        }
    }
    Ok(GramMatrix { labels, values })
}

/// Truncated two-mode state `Σ c_{mn} |m,n⟩`, `m, n ≤ cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState {
    cutoff: usize,
    coeffs: Vec<Complex64>,
}

impl TwoModeFockState {
    pub fn new(cutoff: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        PolyOrder::new(cutoff, cutoff)?;
        let d = cutoff + 1;
        if coeffs.len() != d * d {
            return Err(Error::InvalidParameter(format!("cutoff {cutoff} needs {} coefficients, got {}", d * d, coeffs.len())));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("Fock coefficient".into()));
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if norm > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!("state norm² {norm} exceeds 1")));
        }
        Ok(Self { cutoff, coeffs })
    }

    pub fn number(m: usize, n: usize, cutoff: usize) -> Result<Self> {
        if m > cutoff || n > cutoff {
            return Err(Error::InvalidParameter(format!("|{m},{n}⟩ lies outside cutoff {cutoff}")));
        }
        let d = cutoff + 1;
        let mut c = vec![Complex64::new(0.0, 0.0); d * d];
        c[m * d + n] = Complex64::new(1.0, 0.0);
        Self::new(cutoff, c)
    }

    /// Coherent state truncated to `m, n ≤ cutoff`.
    pub fn coherent(z1: Complex64, z2: Complex64, cutoff: usize) -> Result<Self> {
        PolyOrder::new(cutoff, cutoff)?;
        let d = cutoff + 1;
        let pre = (-0.5 * (z1.norm_sqr() + z2.norm_sqr())).exp();
        let c = (0..d)
            .flat_map(|m| (0..d).map(move |n| (m, n)))
            .map(|(m, n)| z1.powu(m as u32) * z2.powu(n as u32) * (pre * inv_sqrt_factorials(m, n)))
            .collect();
        Self::new(cutoff, c)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeff(&self, m: usize, n: usize) -> Complex64 {
        self.coeffs[m * (self.cutoff + 1) + n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨η|state⟩`.
    pub fn eta_value(&self, eta: Complex64) -> Complex64 {
        let d = self.cutoff + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            for n in 0..d {
                let c = self.coeffs[m * d + n];
                if c != Complex64::new(0.0, 0.0) {
                    acc += c * number_state_eta(m, n, eta).expect("cutoff validated");
                }
            }
        }
        acc
    }

    pub fn sample(&self, grid: &ComplexPlaneGrid) -> Result<Field> {
        try_sample(grid, |z| Ok(self.eta_value(z)))
    }
}

/// Text form of a state: `number:m,n` or `coherent:re1,im1,re2,im2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateDescriptor {
    Number { m: usize, n: usize },
    Coherent { z1: Complex64, z2: Complex64 },
}

impl StateDescriptor {
    pub fn eval(&self, eta: Complex64) -> Result<Complex64> {
        match *self {
            StateDescriptor::Number { m, n } => number_state_eta(m, n, eta),
            StateDescriptor::Coherent { z1, z2 } => coherent_state_eta(z1, z2, eta),
        }
    }

    /// `⟨η|state⟩` on every node of `grid`.
    pub fn sample(&self, grid: &ComplexPlaneGrid) -> Result<Field> {
        try_sample(grid, |z| self.eval(z))
    }
}

impl FromStr for StateDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("state descriptor '{s}' needs a kind prefix")))?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        match kind.trim() {
            "number" => {
                if nums.len() != 2 {
                    return Err(Error::Parse(format!("number state needs m,n, got '{args}'")));
                }
                let p = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad occupation '{t}'")));
                let (m, n) = (p(nums[0])?, p(nums[1])?);
                PolyOrder::new(m, n)?;
                Ok(StateDescriptor::Number { m, n })
            }
            "coherent" => {
                if nums.len() != 4 {
                    return Err(Error::Parse(format!("coherent state needs re1,im1,re2,im2, got '{args}'")));
                }
                let v = nums
                    .iter()
                    .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Parse(format!("bad amplitude '{t}'"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(StateDescriptor::Coherent { z1: Complex64::new(v[0], v[1]), z2: Complex64::new(v[2], v[3]) })
            }
            other => Err(Error::Parse(format!("unknown state kind '{other}'"))),
        }
    }
}

impl fmt::Display for StateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateDescriptor::Number { m, n } => write!(f, "number:{m},{n}"),
            StateDescriptor::Coherent { z1, z2 } => {
                write!(f, "coherent:{:?},{:?},{:?},{:?}", z1.re, z1.im, z2.re, z2.im)
            }
        }
    }
}
