//! Adaptive explicit Runge–Kutta integration (Dormand–Prince 5(4), FSAL)
//! with exact landing on caller-supplied output grids.
//!
//! The right-hand side is fallible: σ-form systems take square roots whose
//! radicands can leave the admissible region when a trajectory is pushed
//! past its domain, and the integrator surfaces that as an error with the
//! failure position rather than producing NaNs.

use crate::error::{Error, Result};

/// Integration controls. Tolerances enter the weighted RMS error norm
/// err_i / (atol + rtol·|y_i|).
#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude; derived from the grid span when `None`.
    pub h0: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h0: None,
            max_steps: 1_000_000,
        }
    }
}

// Dormand–Prince 5(4) tableau. The 7th stage equals the 5th-order update
// (first-same-as-last), so an accepted step reuses it as the next k₁.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y' = f(t, y) and return the state at every grid point,
/// including the first (which carries `y0` unchanged). The grid must be
/// strictly monotone, in either direction.
pub fn integrate_to_grid<F>(
    mut f: F,
    grid: &[f64],
    y0: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if grid.len() < 2 {
        return Err(Error::Domain("output grid needs at least two points".into()));
    }
    let dir = (grid[grid.len() - 1] - grid[0]).signum();
    if dir == 0.0 || !dir.is_finite() {
        return Err(Error::Domain("degenerate output grid".into()));
    }
    for w in grid.windows(2) {
        if (w[1] - w[0]) * dir <= 0.0 {
            return Err(Error::Domain("output grid must be strictly monotone".into()));
        }
    }
    let dim = y0.len();
    let span = (grid[grid.len() - 1] - grid[0]).abs();
    let mut h = dir * opts.h0.map_or(1e-4 * span, f64::abs);

    let mut t = grid[0];
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(grid.len());
    out.push(y.clone());

    let mut k = vec![vec![0.0_f64; dim]; 7];
    f(t, &y, &mut k[0]).map_err(|e| Error::Integration(e.to_string(), t))?;
    let mut ynew = vec![0.0_f64; dim];
    let mut ystage = vec![0.0_f64; dim];
    let mut steps = 0usize;

    for &target in &grid[1..] {
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Integration(
                    format!("step limit {} exceeded", opts.max_steps),
                    t,
                ));
            }
            // land exactly on the grid point, remembering the free step
            let h_free = h;
            let clamped = (t + h - target) * dir >= 0.0;
            if clamped {
                h = target - t;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration("step size underflow".into(), t));
            }

            for stage in 1..7 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(stage) {
                        acc += A[stage][j] * kj[i];
                    }
                    ystage[i] = y[i] + h * acc;
                }
                let (head, tail) = k.split_at_mut(stage);
                let _ = head;
                f(t + C[stage] * h, &ystage, &mut tail[0])
                    .map_err(|e| Error::Integration(e.to_string(), t))?;
            }
            let mut err_sq = 0.0;
            for i in 0..dim {
                let mut acc5 = 0.0;
                let mut acce = 0.0;
                for j in 0..7 {
                    acc5 += B5[j] * k[j][i];
                    acce += (B5[j] - B4[j]) * k[j][i];
                }
                ynew[i] = y[i] + h * acc5;
                let scale = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
                let e = h * acce / scale;
                err_sq += e * e;
            }
            let err = (err_sq / dim as f64).sqrt();

            if err <= 1.0 || h.abs() <= 1e-13 * t.abs().max(1.0) {
                // accept; FSAL stage 6 becomes k₁ of the next step
                t += h;
                std::mem::swap(&mut y, &mut ynew);
                k.swap(0, 6);
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                h = if clamped {
                    // resume from the unclamped step, grown modestly
                    h_free * fac.min(1.5)
                } else {
                    h * fac
                };
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            }
        }
        t = target; // kill round-off drift
        out.push(y.clone());
    }
    Ok(out)
}

/// Single-shot integration from `t0` to `t1`; returns the final state.
pub fn integrate<F>(f: F, t0: f64, t1: f64, y0: &[f64], opts: &OdeOptions) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let states = integrate_to_grid(f, &[t0, t1], y0, opts)?;
    Ok(states.into_iter().next_back().expect("two grid points"))
}
