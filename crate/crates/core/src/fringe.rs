//! Least-squares extraction of fringe contrast from sampled curves.
//!
//! Data are fitted to `a + b cos(x - c)` by linear least squares on the
//! regressors `(1, cos x, sin x)`; amplitude and phase are recovered from the
//! cosine and sine coefficients afterwards, so no initial guess is needed.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::unitary::normalize_angle;

/// Fits whose normal matrix has a 1-norm condition number above this fail.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    /// Offset `a`.
    pub mean: f64,
    /// `b >= 0`.
    pub amplitude: f64,
    /// `c` in `(-pi, pi]`; zero when the amplitude vanishes.
    pub phase: f64,
    /// `b / a`, present when `a > 0`.
    pub visibility: Option<f64>,
    /// Root-mean-square residual.
    pub residual_rms: f64,
    /// First-order standard errors from the residual variance; zero when the
    /// fit has no spare degrees of freedom.
    pub amplitude_stderr: f64,
    pub visibility_stderr: Option<f64>,
    /// 1-norm condition number of the normal matrix.
    pub condition: f64,
}

type Mat3 = [[f64; 3]; 3];

fn invert3(m: &Mat3) -> Option<Mat3> {
    let cof =
        |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = adj[i][j] / det;
        }
    }
    Some(inv)
}

fn norm1(m: &Mat3) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| m[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Fit `y = a + b cos(x - c)`.
///
/// Needs at least three distinct abscissae spanning at least half a period.
pub fn fit_fringe(x: &[f64], y: &[f64]) -> Result<FringeFit> {
    if x.len() != y.len() {
        return Err(Error::FitFailure {
            reason: "abscissa and ordinate lengths differ",
            condition: f64::INFINITY,
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fringe data"));
    }
    let mut distinct = 0usize;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &xi) in x.iter().enumerate() {
        if !x[..i].contains(&xi) {
            distinct += 1;
        }
        lo = lo.min(xi);
        hi = hi.max(xi);
    }
    if distinct < 3 {
        return Err(Error::FitFailure {
            reason: "fewer than three distinct points",
            condition: f64::INFINITY,
        });
    }
    if hi - lo < PI {
        return Err(Error::FitFailure {
            reason: "points span less than half a period",
            condition: f64::INFINITY,
        });
    }

    let mut normal: Mat3 = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let reg = [1.0, libm::cos(xi), libm::sin(xi)];
        for i in 0..3 {
            rhs[i] += reg[i] * yi;
            for j in 0..3 {
                normal[i][j] += reg[i] * reg[j];
            }
        }
    }
    let inv = invert3(&normal).ok_or(Error::FitFailure {
        reason: "singular normal matrix",
        condition: f64::INFINITY,
    })?;
    let condition = norm1(&normal) * norm1(&inv);
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::FitFailure {
            reason: "ill-conditioned normal matrix",
            condition,
        });
    }
    let mut coef = [0.0; 3];
    for i in 0..3 {
        coef[i] = (0..3).map(|j| inv[i][j] * rhs[j]).sum();
    }
    let [mean, p, q] = coef;
    let amplitude = libm::hypot(p, q);
    let phase = if amplitude > 0.0 {
        normalize_angle(libm::atan2(q, p))
    } else {
        0.0
    };

    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - (mean + p * libm::cos(xi) + q * libm::sin(xi));
            r * r
        })
        .sum();
    let n = x.len();
    let residual_rms = libm::sqrt(rss / n as f64);
    let sigma2 = if n > 3 { rss / (n - 3) as f64 } else { 0.0 };
    let quad = |g: [f64; 3]| -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += g[i] * inv[i][j] * g[j];
            }
        }
        libm::sqrt((sigma2 * acc).max(0.0))
    };
    let amplitude_stderr = if amplitude > 0.0 {
        quad([0.0, p / amplitude, q / amplitude])
    } else {
        // Direction undefined; bound by the larger coefficient error.
        libm::sqrt(sigma2 * inv[1][1].max(inv[2][2]))
    };
    let (visibility, visibility_stderr) = if mean > 0.0 {
        let v = amplitude / mean;
        let se = if amplitude > 0.0 {
            quad([
                -amplitude / (mean * mean),
                p / (amplitude * mean),
                q / (amplitude * mean),
            ])
        } else {
            amplitude_stderr / mean
        };
        (Some(v), Some(se))
    } else {
        (None, None)
    };

    Ok(FringeFit {
        mean,
        amplitude,
        phase,
        visibility,
        residual_rms,
        amplitude_stderr,
        visibility_stderr,
        condition,
    })
}
