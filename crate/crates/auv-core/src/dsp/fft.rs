//! Real FFT helpers on top of rustfft, plus the adjoint transforms used to
//! backpropagate through spectral ops.
//!
//! Conventions (N = fft length, K = N/2 + 1 one-sided bins):
//!   forward:  X_k = sum_n x_n e^{-2pi i k n / N}
//!   inverse:  x_n = (1/N) sum_k X_k e^{+2pi i k n / N}  (hermitian input)

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(len: usize, inverse: bool) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// One-sided real FFT: fills `out_re`/`out_im` (length N/2+1) from `x`
/// (length N).
pub fn rfft(x: &[f64], out_re: &mut [f64], out_im: &mut [f64]) {
    let n = x.len();
    let bins = n / 2 + 1;
    debug_assert_eq!(out_re.len(), bins);
    debug_assert_eq!(out_im.len(), bins);
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(n, false).process(&mut buf);
    for k in 0..bins {
        out_re[k] = buf[k].re;
        out_im[k] = buf[k].im;
    }
}

/// Inverse of [`rfft`] under the hermitian assumption. The imaginary parts of
/// bin 0 and bin N/2 are ignored. Output has length N.
pub fn irfft(re: &[f64], im: &[f64], out: &mut [f64]) {
    let n = out.len();
    let bins = n / 2 + 1;
    debug_assert_eq!(re.len(), bins);
    debug_assert_eq!(im.len(), bins);
    let mut buf = vec![Complex64::default(); n];
    buf[0] = Complex64::new(re[0], 0.0);
    for k in 1..bins - 1 {
        buf[k] = Complex64::new(re[k], im[k]);
        buf[n - k] = Complex64::new(re[k], -im[k]);
    }
    buf[n / 2] = Complex64::new(re[n / 2], 0.0);
    plan(n, true).process(&mut buf);
    let scale = 1.0 / n as f64;
    for (o, b) in out.iter_mut().zip(buf.iter()) {
        *o = b.re * scale;
    }
}

/// Adjoint of [`rfft`]: given cotangents of the one-sided spectrum, produces
/// the cotangent of the real input. Computes
/// `dx_n = sum_{k<K} Re(g_k e^{+2pi i k n / N})`.
pub fn rfft_adjoint(g_re: &[f64], g_im: &[f64], out: &mut [f64]) {
    let n = out.len();
    let bins = n / 2 + 1;
    debug_assert_eq!(g_re.len(), bins);
    debug_assert_eq!(g_im.len(), bins);
    let mut buf = vec![Complex64::default(); n];
    for k in 0..bins {
        buf[k] = Complex64::new(g_re[k], g_im[k]);
    }
    plan(n, true).process(&mut buf);
    for (o, b) in out.iter_mut().zip(buf.iter()) {
        *o = b.re;
    }
}

/// Adjoint of [`irfft`]: given the cotangent of the time-domain output,
/// produces cotangents of the one-sided spectrum. The imaginary slots of
/// bin 0 and bin N/2 receive zero, mirroring what [`irfft`] reads.
pub fn irfft_adjoint(g: &[f64], out_re: &mut [f64], out_im: &mut [f64]) {
    let n = g.len();
    let bins = n / 2 + 1;
    debug_assert_eq!(out_re.len(), bins);
    debug_assert_eq!(out_im.len(), bins);
    let mut buf: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(n, false).process(&mut buf);
    let scale = 1.0 / n as f64;
    out_re[0] = buf[0].re * scale;
    out_im[0] = 0.0;
    for k in 1..bins - 1 {
        out_re[k] = 2.0 * buf[k].re * scale;
        out_im[k] = 2.0 * buf[k].im * scale;
    }
    out_re[n / 2] = buf[n / 2].re * scale;
    out_im[n / 2] = 0.0;
}
