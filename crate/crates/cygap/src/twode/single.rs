//! Single-interval (s, ∞) routes at finite N.
//!
//! Coupled system in the rescaled endpoint variables, with the two
//! coefficient functions evolved directly:
//!
//! ```text
//!   (1+s²) q′ = −(as+v) q + B p          B(s) = b − (2a−1)·∫ₛ^∞ q²
//!   (1+s²) p′ = −G q + (as+v) p          G(s) = b + (2a+1)·∫ₛ^∞ p²
//!        v′   = −q p                     b    = √(N(N+2a))
//!        B′   = (2a−1) q²
//!        G′   = −(2a+1) p²
//!   σ = (1+s²)R = G q² + B p² − 2(as+v) q p,   [ln E₂]′ = R
//! ```
//!
//! Evolving B and G (rather than the tail integrals u, w themselves)
//! keeps the vector field finite and real for every a ≥ 0: u diverges
//! for a ≤ ½ while B stays finite, and the first integral σ = 2av plus
//! the product integral B·G = b² + (1+s²)σ′ − sσ + v² recover B at the
//! seed without ever forming u.  The sole genuine degeneracy is a = 0,
//! where v itself diverges and the σ-form route below takes over.

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::fredholm::{resolvent_at_endpoint, ResolventData};
use crate::ode::{integrate_to_grid, OdeOptions};
use crate::twode::{descending_grid, MethodTag, SigmaGrid, SigmaSample};
use std::cell::Cell;

/// Endpoint state of the single-interval coupled system at one s.
#[derive(Debug, Clone, Copy)]
pub struct TwStateSingle {
    pub s: f64,
    /// Rescaled endpoint values of the resolvent-transformed kernel pair.
    pub q: f64,
    pub p: f64,
    /// Tail inner product v = ∫ₛ^∞ qp (converges for a > 0).
    pub v: f64,
    /// Coefficient function B(s) = b − (2a−1)u.
    pub beta: f64,
    /// Coefficient function G(s) = b + (2a+1)w.
    pub gamma: f64,
    pub sigma: f64,
    pub log_e2: f64,
}

impl TwStateSingle {
    /// Resolvent diagonal R(s,s) = σ/(1+s²).
    pub fn r(&self) -> f64 {
        self.sigma / (1.0 + self.s * self.s)
    }

    /// Tail integral u = ∫ₛ^∞ q², recovered from B.  `None` at a = ½,
    /// where u is logarithmically divergent while B stays finite.
    pub fn u(&self, params: &EnsembleParams) -> Option<f64> {
        let d = 2.0 * params.a - 1.0;
        if d.abs() < 1e-12 {
            None
        } else {
            Some((params.b() - self.beta) / d)
        }
    }

    /// Tail integral w = ∫ₛ^∞ p², recovered from G (finite for a ≥ 0).
    pub fn w(&self, params: &EnsembleParams) -> f64 {
        (self.gamma - params.b()) / (2.0 * params.a + 1.0)
    }
}

/// Coupled-route output: the σ/E₂ table plus the full state track
/// (ascending in s).
#[derive(Debug, Clone)]
pub struct SingleSolution {
    pub grid: SigmaGrid,
    pub states: Vec<TwStateSingle>,
}

fn sigma_of(a: f64, s: f64, y: &[f64]) -> f64 {
    let (q, p, v, beta, gamma) = (y[0], y[1], y[2], y[3], y[4]);
    gamma * q * q + beta * p * p - 2.0 * (a * s + v) * q * p
}

/// Integrates the coupled single-interval system inward from `s_start`
/// (where `seed` was computed) to `s_end`, reporting `n_out` evenly
/// spaced samples.  Requires a > 0; at a = 0 the tail integral v
/// diverges and [`integrate_single_sigma`] must be used instead.
pub fn integrate_single(
    params: &EnsembleParams,
    s_start: f64,
    s_end: f64,
    n_out: usize,
    seed: &ResolventData,
) -> Result<SingleSolution> {
    params.validate()?;
    if params.a <= 0.0 {
        return Err(Error::Domain(
            "coupled single-interval system needs a > 0 (v diverges at a = 0); \
             use the sigma-ode route"
                .into(),
        ));
    }
    let a = params.a;
    let b = params.b();
    let grid = descending_grid(s_start, s_end, n_out)?;

    // Seed from the Fredholm resolvent: B from the product integral,
    // with σ′ = −2aqp at the endpoint.
    let s2 = 1.0 + s_start * s_start;
    let (q0, p0, v0) = (seed.q, seed.p, seed.iv);
    let gamma0 = b + (2.0 * a + 1.0) * seed.iw;
    let sig0 = s2 * seed.r_diag;
    let sigd0 = -2.0 * a * q0 * p0;
    let beta0 = (b * b + s2 * sigd0 - s_start * sig0 + v0 * v0) / gamma0;
    if !(seed.e2 > 0.0) {
        return Err(Error::Numeric("seed determinant not positive".into()));
    }
    let y0 = [q0, p0, v0, beta0, gamma0, seed.e2.ln()];

    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (q, p, v, beta, gamma) = (y[0], y[1], y[2], y[3], y[4]);
        let m = 1.0 + s * s;
        dy[0] = (-(a * s + v) * q + beta * p) / m;
        dy[1] = (-gamma * q + (a * s + v) * p) / m;
        dy[2] = -q * p;
        dy[3] = (2.0 * a - 1.0) * q * q;
        dy[4] = -(2.0 * a + 1.0) * p * p;
        dy[5] = sigma_of(a, s, y) / m;
        Ok(())
    };
    let opts = OdeOptions::default();
    let track = integrate_to_grid(rhs, &grid, &y0, &opts)?;

    let mut states: Vec<TwStateSingle> = grid
        .iter()
        .zip(track.iter())
        .map(|(&s, y)| TwStateSingle {
            s,
            q: y[0],
            p: y[1],
            v: y[2],
            beta: y[3],
            gamma: y[4],
            sigma: sigma_of(a, s, y),
            log_e2: y[5],
        })
        .collect();

    // Integral-of-motion drift is a hard failure, not just a test
    // statistic: it flags a bad seed or a lost trajectory.
    for st in &states {
        let m = 1.0 + st.s * st.s;
        let first = st.sigma - 2.0 * a * st.v;
        let second =
            st.beta * st.gamma - (b * b + m * (-2.0 * a * st.q * st.p) - st.s * st.sigma + st.v * st.v);
        let scale = (b * b).max(st.sigma.abs()).max(1.0);
        if first.abs() > 1e-5 * scale || second.abs() > 1e-5 * scale {
            return Err(Error::Integration(
                format!(
                    "integral-of-motion drift {:.2e}/{:.2e} exceeds 1e-5",
                    first.abs(),
                    second.abs()
                ),
                st.s,
            ));
        }
    }

    states.reverse();
    let samples = states
        .iter()
        .map(|st| SigmaSample {
            s: st.s,
            sigma: st.sigma,
            sigma_d: -2.0 * a * st.q * st.p,
            e2: st.log_e2.exp(),
        })
        .collect();
    Ok(SingleSolution {
        grid: SigmaGrid { method: MethodTag::Coupled, samples },
        states,
    })
}

/// Left-hand side of the second-degree σ-form
///
/// ```text
///   (1+s²)²(σ″)² + 4(1+s²)(σ′)³ − 8sσ(σ′)² + 4σ²(σ′−a²)
///                + 8a²sσσ′ + 4[N(N+2a) − a²s²](σ′)²
/// ```
///
/// which vanishes on true trajectories.
pub fn sigma_residual_single(params: &EnsembleParams, s: f64, sig: f64, sd: f64, sdd: f64) -> f64 {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let m = 1.0 + s * s;
    m * m * sdd * sdd + 4.0 * m * sd * sd * sd - 8.0 * s * sig * sd * sd
        + 4.0 * sig * sig * (sd - a * a)
        + 8.0 * a * a * s * sig * sd
        + 4.0 * (h - a * a * s * s) * sd * sd
}

// Everything in the σ-form except the (σ″)² term, together with a
// magnitude scale for branch guards.
fn sigma_rest_single(params: &EnsembleParams, s: f64, sig: f64, sd: f64) -> (f64, f64) {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let m = 1.0 + s * s;
    let t1 = 4.0 * m * sd * sd * sd;
    let t2 = -8.0 * s * sig * sd * sd;
    let t3 = 4.0 * sig * sig * (sd - a * a);
    let t4 = 8.0 * a * a * s * sig * sd;
    let t5 = 4.0 * (h - a * a * s * s) * sd * sd;
    let scale = t1.abs() + t2.abs() + t3.abs() + t4.abs() + t5.abs() + 1e-300;
    (t1 + t2 + t3 + t4 + t5, scale)
}

// σ″ from the quadratic σ-form, branch chosen by continuity with the
// previously returned value.
fn sigma_dd_root(
    params: &EnsembleParams,
    s: f64,
    sig: f64,
    sd: f64,
    prev: &Cell<f64>,
) -> Result<f64> {
    let m = 1.0 + s * s;
    let (rest, scale) = sigma_rest_single(params, s, sig, sd);
    if rest > 1e-6 * scale {
        return Err(Error::Branch(format!(
            "sigma-form discriminant positive ({:.2e} vs scale {:.2e}) at s = {s}",
            rest, scale
        )));
    }
    let mag = (-rest).max(0.0).sqrt() / m;
    let root = if (prev.get() - mag).abs() <= (prev.get() + mag).abs() {
        mag
    } else {
        -mag
    };
    prev.set(root);
    Ok(root)
}

// Richardson finite difference of the Fredholm σ at s (5-point, O(h⁴)).
fn fredholm_sigma_derivative(params: &EnsembleParams, s: f64, order: usize) -> Result<f64> {
    let sig = |ss: f64| -> Result<f64> {
        let r = resolvent_at_endpoint(params, &crate::ensemble::IntervalSpec::SingleTail { s: ss }, order)?;
        Ok((1.0 + ss * ss) * r.r_diag)
    };
    let h = 0.005 * (1.0 + s.abs());
    let d1 = (sig(s + h)? - sig(s - h)?) / (2.0 * h);
    let d2 = (sig(s + 2.0 * h)? - sig(s - 2.0 * h)?) / (4.0 * h);
    Ok((4.0 * d1 - d2) / 3.0)
}

/// Integrates the σ-form directly, seeded from the Fredholm resolvent
/// at `s_start`.  Valid for every a ≥ 0: for a > 0 the seed slope is
/// the endpoint identity σ′ = −2aqp, while at a = 0 it starts from a
/// finite-difference estimate refined by shooting against the Fredholm
/// σ at an interior matching point.
pub fn integrate_single_sigma(
    params: &EnsembleParams,
    s_start: f64,
    s_end: f64,
    n_out: usize,
    order: usize,
) -> Result<SigmaGrid> {
    params.validate()?;
    let grid = descending_grid(s_start, s_end, n_out)?;
    let seed = resolvent_at_endpoint(
        params,
        &crate::ensemble::IntervalSpec::SingleTail { s: s_start },
        order,
    )?;
    if !(seed.e2 > 0.0) {
        return Err(Error::Numeric("seed determinant not positive".into()));
    }
    let m0 = 1.0 + s_start * s_start;
    let sig0 = m0 * seed.r_diag;
    let l0 = seed.e2.ln();

    let mut sigd0 = if params.a > 0.0 {
        -2.0 * params.a * seed.q * seed.p
    } else {
        fredholm_sigma_derivative(params, s_start, order)?
    };

    let run = |sigd_init: f64, target: &[f64]| -> Result<Vec<Vec<f64>>> {
        // initialise the branch memory from the seed's positive root
        let (rest0, _) = sigma_rest_single(params, s_start, sig0, sigd_init);
        let prev = Cell::new((-rest0).max(0.0).sqrt() / m0);
        let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[1];
            dy[1] = sigma_dd_root(params, s, y[0], y[1], &prev)?;
            dy[2] = y[0] / (1.0 + s * s);
            Ok(())
        };
        integrate_to_grid(rhs, target, &[sig0, sigd_init, l0], &OdeOptions::default())
    };

    if params.a == 0.0 {
        // Shooting refinement: the finite-difference slope alone is good
        // to ~1e-10, which a long trajectory can amplify; matching the
        // Fredholm σ at an interior point pins it down.
        let s_probe = if s_end > 0.5 * s_start {
            0.5 * (s_start + s_end)
        } else {
            0.5 * s_start
        };
        let target = [s_start, s_probe];
        let sig_probe = {
            let r = resolvent_at_endpoint(
                params,
                &crate::ensemble::IntervalSpec::SingleTail { s: s_probe },
                order,
            )?;
            (1.0 + s_probe * s_probe) * r.r_diag
        };
        let mut x0 = sigd0;
        let mut f0 = run(x0, &target)?[1][0] - sig_probe;
        let mut x1 = x0 * (1.0 + 1e-3) - 1e-12;
        for _ in 0..8 {
            let f1 = run(x1, &target)?[1][0] - sig_probe;
            if (f1 - f0).abs() < 1e-300 {
                break;
            }
            let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            x1 = x2;
            if (x1 - x0).abs() < 1e-14 * x1.abs().max(1e-8) {
                break;
            }
        }
        sigd0 = x1;
    }

    let track = run(sigd0, &grid)?;
    let mut samples: Vec<SigmaSample> = grid
        .iter()
        .zip(track.iter())
        .map(|(&s, y)| SigmaSample { s, sigma: y[0], sigma_d: y[1], e2: y[2].exp() })
        .collect();
    samples.reverse();
    Ok(SigmaGrid { method: MethodTag::SigmaOde, samples })
}
