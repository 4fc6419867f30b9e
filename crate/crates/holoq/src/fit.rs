//! Sinusoid fitting for the sweep outputs.
//!
//! The oscillation frequencies are known in advance (1 or 2 cycles per 2*pi
//! of swept phase, or a Ramsey detuning), so fitting is linear least squares
//! on the (1, sin, cos) basis; no nonlinear optimizer is involved.

/// y ~ offset + amplitude * sin(freq * x + phase).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidFit {
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub rms_residual: f64,
}

/// Least-squares sinusoid at a fixed frequency.
pub fn fit_fixed_freq(xs: &[f64], ys: &[f64], freq: f64) -> SinusoidFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 3, "need at least 3 samples to fit 3 parameters");
    // normal equations for the basis (1, sin wx, cos wx)
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let basis = [1.0, (freq * x).sin(), (freq * x).cos()];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += basis[i] * basis[j];
            }
            b[i] += basis[i] * y;
        }
    }
    let coef = solve3(a, b);
    let amplitude = (coef[1] * coef[1] + coef[2] * coef[2]).sqrt();
    let phase = coef[2].atan2(coef[1]);
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let model = coef[0] + coef[1] * (freq * x).sin() + coef[2] * (freq * x).cos();
        ss += (y - model) * (y - model);
    }
    SinusoidFit {
        offset: coef[0],
        amplitude,
        phase,
        rms_residual: (ss / xs.len() as f64).sqrt(),
    }
}

/// Scan candidate frequencies and keep the best-fitting one, refining with a
/// parabolic step on the residual. Used where the fringe frequency is the
/// measured quantity.
pub fn fit_scan_freq(xs: &[f64], ys: &[f64], f_lo: f64, f_hi: f64, n: usize) -> (f64, SinusoidFit) {
    assert!(n >= 3 && f_hi > f_lo);
    let step = (f_hi - f_lo) / (n - 1) as f64;
    let mut best = (f_lo, fit_fixed_freq(xs, ys, f_lo));
    let mut residuals = Vec::with_capacity(n);
    for k in 0..n {
        let f = f_lo + k as f64 * step;
        let fit = fit_fixed_freq(xs, ys, f);
        residuals.push(fit.rms_residual);
        if fit.rms_residual < best.1.rms_residual {
            best = (f, fit);
        }
    }
    // parabolic refinement around the best grid point
    let idx = ((best.0 - f_lo) / step).round() as usize;
    if idx > 0 && idx + 1 < n {
        let (rm, r0, rp) = (residuals[idx - 1], residuals[idx], residuals[idx + 1]);
        let denom = rm - 2.0 * r0 + rp;
        if denom.abs() > 1e-300 {
            let shift = 0.5 * (rm - rp) / denom;
            if shift.abs() <= 1.0 {
                let f = best.0 + shift * step;
                let fit = fit_fixed_freq(xs, ys, f);
                if fit.rms_residual < best.1.rms_residual {
                    best = (f, fit);
                }
            }
        }
    }
    best
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    // Gaussian elimination with partial pivoting on a 3x3 system
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        assert!(diag.abs() > 1e-300, "degenerate fit design matrix");
        for row in (col + 1)..3 {
            let factor = a[row][col] / diag;
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}
