//! Two-variable Hermite polynomials and Laguerre polynomials.
//!
//! `H_{m,n}(x, y)` is generated by `exp(-t t' + t x + t' y)`; expanding the
//! exponential gives the finite series
//!
//! ```text
//! H_{m,n}(x, y) = sum_{k=0}^{min(m,n)} (-1)^k m! n! x^(m-k) y^(n-k) / (k! (m-k)! (n-k)!)
//! ```
//!
//! On the diagonal with conjugate arguments the polynomials collapse onto the
//! Laguerre polynomials: `(-1)^n H_{n,n}(z, z*) = n! L_n(|z|^2)`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest polynomial order accepted by [`PolyOrder`].
pub const MAX_ORDER: usize = 64;

const LN_FACTORIAL_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; LN_FACTORIAL_LEN] {
    static TABLE: OnceLock<[f64; LN_FACTORIAL_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LN_FACTORIAL_LEN];
        for k in 1..LN_FACTORIAL_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// `ln(n!)` for `n <= 170`.
pub fn ln_factorial(n: usize) -> f64 {
    assert!(n < LN_FACTORIAL_LEN, "ln_factorial({n}) out of range");
    ln_factorial_table()[n]
}

/// `n!` as a float, exact up to 22! and correctly rounded beyond.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Index pair `(m, n)` of a two-variable Hermite polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolyOrder {
    m: usize,
    n: usize,
}

impl PolyOrder {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m > MAX_ORDER || n > MAX_ORDER {
            return Err(Error::OrderTooLarge { m, n, max: MAX_ORDER });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

/// Evaluates `H_{m,n}(x, y)` by its finite series.
///
/// The series is summed as a polynomial in `x y` (Horner form) after pulling
/// out the common factor `x^(m-p) y^(n-p)`, `p = min(m, n)`. The term
/// coefficients come from the ratio `c_{k+1} / c_k = (m-k)(n-k)/(k+1)`.
pub fn hermite2(order: PolyOrder, x: Complex64, y: Complex64) -> Complex64 {
    let (m, n) = (order.m, order.n);
    let p = m.min(n);

    // c_k = m! n! / (k! (m-k)! (n-k)!) with c_0 = 1
    let mut coeffs = Vec::with_capacity(p + 1);
    let mut c = 1.0_f64;
    coeffs.push(c);
    for k in 0..p {
        c *= ((m - k) * (n - k)) as f64 / (k + 1) as f64;
        coeffs.push(c);
    }

    // sum_k (-1)^k c_k (xy)^(p-k), Horner from k = 0 (highest power of xy)
    let xy = x * y;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &ck) in coeffs.iter().enumerate() {
        let signed = if k % 2 == 0 { ck } else { -ck };
        acc = acc * xy + signed;
    }
    acc * x.powu((m - p) as u32) * y.powu((n - p) as u32)
}

/// Convenience wrapper that validates the order first.
pub fn hermite2_mn(m: usize, n: usize, x: Complex64, y: Complex64) -> Result<Complex64> {
    Ok(hermite2(PolyOrder::new(m, n)?, x, y))
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Scaled two-variable Hermite values `h_{m,n} = H_{m,n}(x, y) / (m! n!)`,
/// grouped in shells of constant total degree `m + n`.
///
/// Shells are built from the two previous ones with
/// `h_{m,n} = (x h_{m-1,n} - h_{m-1,n-1}) / m` and `h_{0,n} = y h_{0,n-1} / n`,
/// which keeps magnitudes bounded where the unscaled values would overflow.
#[derive(Debug, Clone)]
pub struct HermiteShells {
    x: Complex64,
    y: Complex64,
    // shells[d][m] = h_{m, d-m}
    shells: Vec<Vec<Complex64>>,
}

impl HermiteShells {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y, shells: vec![vec![Complex64::new(1.0, 0.0)]] }
    }

    /// Builds every shell up to total degree `degree`.
    pub fn with_degree(x: Complex64, y: Complex64, degree: usize) -> Self {
        let mut s = Self::new(x, y);
        while s.degree() < degree {
            s.push_shell();
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.shells.len() - 1
    }

    /// Appends the next shell and returns it.
    pub fn push_shell(&mut self) -> &[Complex64] {
        let d = self.shells.len();
        let mut next = Vec::with_capacity(d + 1);
        let prev = &self.shells[d - 1];
        next.push(self.y * prev[0] / d as f64);
        for m in 1..=d {
            // h_{m-1, d-m} lives in shell d-1 at index m-1
            let a = prev[m - 1];
            // h_{m-1, d-m-1} lives in shell d-2 at index m-1 (absent when n = d-m = 0)
            let b = if m < d { self.shells[d - 2][m - 1] } else { Complex64::new(0.0, 0.0) };
            next.push((self.x * a - b) / m as f64);
        }
        self.shells.push(next);
        &self.shells[d]
    }

    /// `H_{m,n} / (m! n!)`; panics if the shell `m + n` has not been built.
    pub fn scaled(&self, m: usize, n: usize) -> Complex64 {
        self.shells[m + n][m]
    }

    pub fn shell(&self, d: usize) -> &[Complex64] {
        &self.shells[d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Coefficient of t^m t'^n in exp(-t t' + t x + t' y), times m! n!, by
    // multiplying out the three exponential series independently.
    fn hermite_from_generating_series(m: usize, n: usize, x: Complex64, y: Complex64) -> Complex64 {
        // exp(tx) exp(t'y) exp(-tt') = sum_{a,b,k} x^a/a! y^b/b! (-1)^k/k! t^(a+k) t'^(b+k)
        let mut acc = c(0.0, 0.0);
        for k in 0..=m.min(n) {
            let a = m - k;
            let b = n - k;
            let term =
                x.powu(a as u32) / factorial(a) * y.powu(b as u32) / factorial(b) * if k % 2 == 0 { 1.0 } else { -1.0 } / factorial(k);
            acc += term;
        }
        acc * factorial(m) * factorial(n)
    }

    #[test]
    fn hermite_low_orders() {
        let h00 = hermite2_mn(0, 0, c(0.3, 1.0), c(-2.0, 0.5)).unwrap();
        assert_eq!(h00, c(1.0, 0.0));
        let h11 = hermite2_mn(1, 1, c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((h11 - c(5.0, 0.0)).norm() < 1e-15);
        for &(x, y) in &[(c(0.7, -0.2), c(1.3, 0.4)), (c(-2.0, 0.0), c(0.5, 0.0))] {
            let h22 = hermite2_mn(2, 2, x, y).unwrap();
            let expect = x * x * y * y - 4.0 * x * y + 2.0;
            assert!((h22 - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn hermite_matches_generating_series() {
        let x = c(0.8, -1.1);
        let y = c(-0.4, 0.6);
        for m in 0..9 {
            for n in 0..9 {
                let a = hermite2_mn(m, n, x, y).unwrap();
                let b = hermite_from_generating_series(m, n, x, y);
                assert!((a - b).norm() <= 1e-11 * b.norm().max(1.0), "({m},{n}) {a} {b}");
            }
        }
    }

    #[test]
    fn hermite_edge_rows() {
        let x = c(1.5, 0.25);
        let y = c(-0.5, 2.0);
        for k in 0..7 {
            assert!((hermite2_mn(k, 0, x, y).unwrap() - x.powu(k as u32)).norm() < 1e-12);
            assert!((hermite2_mn(0, k, x, y).unwrap() - y.powu(k as u32)).norm() < 1e-12);
        }
    }

    #[test]
    fn order_guard() {
        assert!(matches!(PolyOrder::new(MAX_ORDER + 1, 0), Err(Error::OrderTooLarge { .. })));
        assert!(PolyOrder::new(MAX_ORDER, MAX_ORDER).is_ok());
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        assert!((laguerre(2, 2.0) + 1.0).abs() < 1e-15);
        // L_3(x) = (-x^3 + 9x^2 - 18x + 6)/6
        let x = 1.3_f64;
        let l3 = (-x.powi(3) + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
        assert!((laguerre(3, x) - l3).abs() < 1e-14);
    }

    #[test]
    fn shells_match_series() {
        let x = c(0.9, 0.3);
        let y = c(-1.2, 0.7);
        let shells = HermiteShells::with_degree(x, y, 24);
        for m in 0..12 {
            for n in 0..12 {
                let direct = hermite2_mn(m, n, x, y).unwrap() / (factorial(m) * factorial(n));
                let rec = shells.scaled(m, n);
                assert!((direct - rec).norm() <= 1e-12 * direct.norm().max(1e-300) + 1e-300, "({m},{n}) {direct} {rec}");
            }
        }
    }

    #[test]
    fn ln_factorial_consistent() {
        for n in 0..30 {
            assert!((ln_factorial(n) - factorial(n).ln()).abs() < 1e-12 * ln_factorial(n).max(1.0));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn swap_symmetry(m in 0usize..12, n in 0usize..12,
                             xr in -3.0..3.0f64, xi in -3.0..3.0f64,
                             yr in -3.0..3.0f64, yi in -3.0..3.0f64) {
                let x = c(xr, xi);
                let y = c(yr, yi);
                let o = PolyOrder::new(m, n).unwrap();
                let a = hermite2(o, x, y);
                let b = hermite2(o.swapped(), y, x);
                // same terms summed in the same order
                prop_assert_eq!(a, b);
            }

            #[test]
            fn diagonal_laguerre_identity(n in 0usize..=10, r in 0.0..3.0f64, th in 0.0..std::f64::consts::TAU) {
                let z = Complex64::from_polar(r, th);
                let h = hermite2(PolyOrder::new(n, n).unwrap(), z, z.conj());
                let lhs = if n % 2 == 0 { h } else { -h };
                let rhs = factorial(n) * laguerre(n, r * r);
                let scale = rhs.abs().max(factorial(n) * 1e-3);
                prop_assert!((lhs - rhs).norm() <= 1e-10 * scale, "n={} lhs={} rhs={}", n, lhs, rhs);
            }
        }
    }
}
