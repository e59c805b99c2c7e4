//! In-place 2D FFTs on row-major buffers, used for the per-scale
//! correlations and convolutions.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft2 {
    px: usize,
    py: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(px: usize, py: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            px,
            py,
            fwd_x: planner.plan_fft_forward(px),
            inv_x: planner.plan_fft_inverse(px),
            fwd_y: planner.plan_fft_forward(py),
            inv_y: planner.plan_fft_inverse(py),
        }
    }

    pub fn len(&self) -> usize {
        self.px * self.py
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd_x, &self.fwd_y);
    }

    /// Unnormalized inverse; divide by `len()` to undo [`Fft2::forward`].
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv_x, &self.inv_y);
    }

    fn run(&self, data: &mut [Complex64], fx: &Arc<dyn Fft<f64>>, fy: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len());
        // rows are contiguous along y
        fy.process(data);
        let mut t = transpose(data, self.px, self.py);
        fx.process(&mut t);
        let back = transpose(&t, self.py, self.px);
        data.copy_from_slice(&back);
    }
}

/// Transposes a row-major `rows × cols` buffer.
fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    const B: usize = 32;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    out[c * rows + r] = data[r * cols + c];
                }
            }
        }
    }
    out
}

/// Circular 2D convolution of `a` (`nx × ny`, zero-padded) with a kernel
/// supplied as a function of the signed lag `(di, dj)`, `|di| < nx`,
/// `|dj| < ny`. Returns `out[a, b] = Σ_{i,j} a[i, j] k(a - i, b - j)` for the
/// `nx × ny` output block.
pub(crate) fn convolve_lags<K>(fft: &Fft2, a: &[Complex64], nx: usize, ny: usize, kernel: K) -> Vec<Complex64>
where
    K: Fn(isize, isize) -> Complex64,
{
    let (px, py) = (fft.px, fft.py);
    debug_assert!(px >= 2 * nx - 1 && py >= 2 * ny - 1);
    let mut fa = vec![Complex64::new(0.0, 0.0); px * py];
    for i in 0..nx {
        fa[i * py..i * py + ny].copy_from_slice(&a[i * ny..(i + 1) * ny]);
    }
    let mut fk = vec![Complex64::new(0.0, 0.0); px * py];
    for di in -(nx as isize - 1)..nx as isize {
        let r = di.rem_euclid(px as isize) as usize;
        for dj in -(ny as isize - 1)..ny as isize {
            let c = dj.rem_euclid(py as isize) as usize;
            fk[r * py + c] = kernel(di, dj);
        }
    }
    fft.forward(&mut fa);
    fft.forward(&mut fk);
    for (x, y) in fa.iter_mut().zip(&fk) {
        *x *= y;
    }
    fft.inverse(&mut fa);
    let norm = 1.0 / (px * py) as f64;
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        out.extend(fa[i * py..i * py + ny].iter().map(|v| v * norm));
    }
    out
}

/// Padded size used for an axis of `n` nodes.
pub(crate) fn padded(n: usize) -> usize {
    2 * n
}
