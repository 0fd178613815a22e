//! Symmetric double-interval (−∞,−s) ∪ (s,∞) routes at finite N.
//!
//! Coupled system in the rescaled endpoint variables:
//!
//! ```text
//!   (1+s²) q′ = −as q + B p + 2(1+s²) q²p/s
//!   (1+s²) p′ = +as p − G q − 2(1+s²) qp²/s
//!        B′   = +2(2a−1) q²          (two tails: u′ = −2q²)
//!        G′   = −2(2a+1) p²
//!   σ = G q² + B p² − 2as qp + 2(1+s²)(qp)²/s,   [ln E₂]′ = 2σ/(1+s²)
//! ```
//!
//! By the parity of the region the mixed tail integral v vanishes
//! identically, which removes the a = 0 degeneracy of the single
//! interval: this route is valid for every a ≥ 0.  The product integral
//! B·G = b² − 2sσ − 4a(1+s²)qp seeds B exactly as in the single case.
//!
//! The anti-diagonal resolvent value R(−s, s) alternates in sign with N;
//! internally the sign-definite combination R₀ = qp/s is stored and the
//! (−1)^{N−1} factor applied only where a comparison needs it.

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::fredholm::ResolventData;
use crate::ode::{integrate_to_grid, OdeOptions};
use crate::twode::{descending_grid, hermite_eval, MethodTag, SigmaGrid, SigmaSample};
use std::cell::Cell;

/// Endpoint state of the double-interval coupled system at one s.
#[derive(Debug, Clone, Copy)]
pub struct TwStateDouble {
    pub s: f64,
    pub q: f64,
    pub p: f64,
    /// Coefficient function B(s) = b − (2a−1)u.
    pub beta: f64,
    /// Coefficient function G(s) = b + (2a+1)w.
    pub gamma: f64,
    pub sigma: f64,
    pub log_e2: f64,
}

impl TwStateDouble {
    /// Resolvent diagonal R(s,s) = σ/(1+s²).
    pub fn r(&self) -> f64 {
        self.sigma / (1.0 + self.s * self.s)
    }

    /// Sign-definite anti-diagonal combination R₀ = qp/s; the physical
    /// R(−s,s) is (−1)^(N−1) R₀.
    pub fn r0(&self) -> f64 {
        self.q * self.p / self.s
    }

    /// T = 2sR₀ = 2qp.
    pub fn t(&self) -> f64 {
        2.0 * self.q * self.p
    }

    /// F = as + (1+s²)T/s = √(a²s² − 2(1+s²)σ′).
    pub fn big_f(&self, params: &EnsembleParams) -> f64 {
        params.a * self.s + 2.0 * (1.0 + self.s * self.s) * self.q * self.p / self.s
    }

    /// Tail integral u = ∫ q² over both tails; `None` at a = ½.
    pub fn u(&self, params: &EnsembleParams) -> Option<f64> {
        let d = 2.0 * params.a - 1.0;
        if d.abs() < 1e-12 {
            None
        } else {
            Some((params.b() - self.beta) / d)
        }
    }

    /// Tail integral w = ∫ p² over both tails.
    pub fn w(&self, params: &EnsembleParams) -> f64 {
        (self.gamma - params.b()) / (2.0 * params.a + 1.0)
    }
}

/// Coupled-route output: σ/E₂ table plus the state track (ascending).
#[derive(Debug, Clone)]
pub struct DoubleSolution {
    pub grid: SigmaGrid,
    pub states: Vec<TwStateDouble>,
}

fn sigma_of(a: f64, s: f64, y: &[f64]) -> f64 {
    let (q, p, beta, gamma) = (y[0], y[1], y[2], y[3]);
    let qp = q * p;
    gamma * q * q + beta * p * p - 2.0 * a * s * qp + 2.0 * (1.0 + s * s) * qp * qp / s
}

fn rhs_double(a: f64, s: f64, y: &[f64], dy: &mut [f64]) {
    let (q, p, beta, gamma) = (y[0], y[1], y[2], y[3]);
    let m = 1.0 + s * s;
    dy[0] = (-a * s * q + beta * p) / m + 2.0 * q * q * p / s;
    dy[1] = (a * s * p - gamma * q) / m - 2.0 * q * p * p / s;
    dy[2] = 2.0 * (2.0 * a - 1.0) * q * q;
    dy[3] = -2.0 * (2.0 * a + 1.0) * p * p;
    dy[4] = 2.0 * sigma_of(a, s, y) / m;
}

/// Integrates the coupled double-interval system inward from `s_start`
/// (where `seed` was computed on the double region) to `s_end` > 0.
/// Valid for every a ≥ 0.
pub fn integrate_double(
    params: &EnsembleParams,
    s_start: f64,
    s_end: f64,
    n_out: usize,
    seed: &ResolventData,
) -> Result<DoubleSolution> {
    params.validate()?;
    if s_end <= 0.0 {
        return Err(Error::Domain("double interval requires s_end > 0".into()));
    }
    let a = params.a;
    let b = params.b();
    let grid = descending_grid(s_start, s_end, n_out)?;

    let m0 = 1.0 + s_start * s_start;
    let (q0, p0) = (seed.q, seed.p);
    let gamma0 = b + (2.0 * a + 1.0) * seed.iw;
    let sig0 = m0 * seed.r_diag;
    let beta0 = (b * b - 2.0 * s_start * sig0 - 4.0 * a * m0 * q0 * p0) / gamma0;
    if !(seed.e2 > 0.0) {
        return Err(Error::Numeric("seed determinant not positive".into()));
    }
    let y0 = [q0, p0, beta0, gamma0, seed.e2.ln()];

    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        rhs_double(a, s, y, dy);
        Ok(())
    };
    let track = integrate_to_grid(rhs, &grid, &y0, &OdeOptions::default())?;

    let mut states: Vec<TwStateDouble> = grid
        .iter()
        .zip(track.iter())
        .map(|(&s, y)| TwStateDouble {
            s,
            q: y[0],
            p: y[1],
            beta: y[2],
            gamma: y[3],
            sigma: sigma_of(a, s, y),
            log_e2: y[4],
        })
        .collect();

    for st in &states {
        let m = 1.0 + st.s * st.s;
        let gap = st.beta * st.gamma
            - (b * b - 2.0 * st.s * st.sigma - 4.0 * a * m * st.q * st.p);
        let scale = (b * b).max(st.sigma.abs()).max(1.0);
        if gap.abs() > 1e-5 * scale {
            return Err(Error::Integration(
                format!("integral-of-motion drift {:.2e} exceeds 1e-5", gap.abs()),
                st.s,
            ));
        }
    }

    states.reverse();
    let samples = states
        .iter()
        .map(|st| {
            let qp = st.q * st.p;
            let m = 1.0 + st.s * st.s;
            SigmaSample {
                s: st.s,
                sigma: st.sigma,
                sigma_d: -2.0 * a * qp - 2.0 * m * qp * qp / (st.s * st.s),
                e2: st.log_e2.exp(),
            }
        })
        .collect();
    Ok(DoubleSolution {
        grid: SigmaGrid { method: MethodTag::Coupled, samples },
        states,
    })
}

/// Residual of the σ-form of the double-interval system,
///
/// ```text
///   {(1−s²)F − 2as + [s(1+s²)/F]·[a²s − 2sσ′ − (1+s²)σ″]}²
///     − {2(1+s²)σ + 2as²(F−as) − s(F−as)²}²
///     + 4s²(F−as)²·{N(N+2a) − 2sσ − 2as(F−as)}
/// ```
///
/// with F = √(a²s² − 2(1+s²)σ′); zero on true trajectories.  Off the
/// solution manifold the radicand can go negative, in which case NaN is
/// returned.
pub fn sigma_residual_double_f(
    params: &EnsembleParams,
    s: f64,
    sig: f64,
    sd: f64,
    sdd: f64,
) -> f64 {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let m = 1.0 + s * s;
    let f2 = a * a * s * s - 2.0 * m * sd;
    if f2 < 0.0 {
        return f64::NAN;
    }
    let f = f2.sqrt();
    let d = f - a * s;
    let lhs1 = (1.0 - s * s) * f - 2.0 * a * s + s * m / f * (a * a * s - 2.0 * s * sd - m * sdd);
    let lhs2 = 2.0 * m * sig + 2.0 * a * s * s * d - s * d * d;
    lhs1 * lhs1 - lhs2 * lhs2 + 4.0 * s * s * d * d * (h - 2.0 * s * sig - 2.0 * a * s * d)
}

/// Residual of the R₀-form of the double-interval system,
///
/// ```text
///   {s(1+s²)²R₀″ + 2(1+s²)(1+2s²)R₀′ + T[2N(N+2a)+1+s²] − 6aT² − 4T³}²
///     − [as − 2(1−s²)R₀]²·{(1+s²)²(T′)² − 4T²[T(T+2a) − N(N+2a)]}
/// ```
///
/// with T = 2sR₀; zero on true trajectories.
pub fn sigma_residual_double_t(
    params: &EnsembleParams,
    s: f64,
    r0: f64,
    r0d: f64,
    r0dd: f64,
) -> f64 {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let m = 1.0 + s * s;
    let t = 2.0 * s * r0;
    let td = 2.0 * r0 + 2.0 * s * r0d;
    let lhs = s * m * m * r0dd + 2.0 * m * (1.0 + 2.0 * s * s) * r0d + t * (2.0 * h + 1.0 + s * s)
        - 6.0 * a * t * t
        - 4.0 * t * t * t;
    let pref = a * s - 2.0 * (1.0 - s * s) * r0;
    lhs * lhs - pref * pref * (m * m * td * td - 4.0 * t * t * (t * (t + 2.0 * a) - h))
}

// σ″ from the σ-form, which is linear in X = a²s − 2sσ′ − (1+s²)σ″ once
// F is known: (A + CX)² = D².  Branch picked by continuity in σ″.
fn sigma_dd_root_double(
    params: &EnsembleParams,
    s: f64,
    sig: f64,
    sd: f64,
    prev: &Cell<f64>,
) -> Result<f64> {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let m = 1.0 + s * s;
    let f2 = a * a * s * s - 2.0 * m * sd;
    if f2 <= 0.0 {
        return Err(Error::Branch(format!(
            "F-radicand nonpositive ({f2:.2e}) at s = {s}"
        )));
    }
    let f = f2.sqrt();
    let d = f - a * s;
    let big_a = (1.0 - s * s) * f - 2.0 * a * s;
    let big_c = s * m / f;
    let big_b = 2.0 * m * sig + 2.0 * a * s * s * d - s * d * d;
    let disc = big_b * big_b - 4.0 * s * s * d * d * (h - 2.0 * s * sig - 2.0 * a * s * d);
    let scale = big_b * big_b + (4.0 * s * s * d * d * (h - 2.0 * s * sig - 2.0 * a * s * d)).abs();
    if disc < -1e-6 * scale - 1e-300 {
        return Err(Error::Branch(format!(
            "sigma-form discriminant negative ({disc:.2e} vs scale {scale:.2e}) at s = {s}"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let to_sdd = |x: f64| (a * a * s - 2.0 * s * sd - x) / m;
    let c1 = to_sdd((root - big_a) / big_c);
    let c2 = to_sdd((-root - big_a) / big_c);
    let pick = if (c1 - prev.get()).abs() <= (c2 - prev.get()).abs() {
        c1
    } else {
        c2
    };
    prev.set(pick);
    Ok(pick)
}

/// Integrates the σ-form of the double-interval system directly, seeded
/// from the Fredholm resolvent at `s_start`.  Valid for every a ≥ 0; the
/// seed slope comes from the endpoint identity
/// σ′ = −2aqp − 2(1+s²)(qp)²/s².
pub fn integrate_double_sigma(
    params: &EnsembleParams,
    s_start: f64,
    s_end: f64,
    n_out: usize,
    order: usize,
) -> Result<SigmaGrid> {
    params.validate()?;
    if s_end <= 0.0 {
        return Err(Error::Domain("double interval requires s_end > 0".into()));
    }
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    let grid = descending_grid(s_start, s_end, n_out)?;
    let seed = crate::fredholm::resolvent_at_endpoint(
        params,
        &crate::ensemble::IntervalSpec::DoubleTail { s: s_start },
        order,
    )?;
    if !(seed.e2 > 0.0) {
        return Err(Error::Numeric("seed determinant not positive".into()));
    }
    let m0 = 1.0 + s_start * s_start;
    let qp = seed.q * seed.p;
    let sig0 = m0 * seed.r_diag;
    let sigd0 = -2.0 * a * qp - 2.0 * m0 * qp * qp / (s_start * s_start);
    let l0 = seed.e2.ln();

    // σ″ at the seed through the T-form: T′ < 0 (T decays), and
    // (1+s²)²(T′)²/4 = {σ + T[as − (1−s²)T/(2s)]}² + T²[T(T+2a) − h].
    let t0 = 2.0 * qp;
    let r00 = qp / s_start;
    let rad = {
        let first = sig0 + t0 * (a * s_start - (1.0 - s_start * s_start) * r00);
        first * first + t0 * t0 * (t0 * (t0 + 2.0 * a) - h)
    };
    if rad < 0.0 {
        return Err(Error::Branch(format!(
            "seed T-radicand negative ({rad:.2e}) at s = {s_start}"
        )));
    }
    let td0 = -2.0 * rad.sqrt() / m0;
    let sdd0 = -a * td0 - m0 * t0 * td0 / (s_start * s_start)
        + t0 * t0 / (s_start * s_start * s_start);

    let prev = Cell::new(sdd0);
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        dy[0] = y[1];
        dy[1] = sigma_dd_root_double(params, s, y[0], y[1], &prev)?;
        dy[2] = 2.0 * y[0] / (1.0 + s * s);
        Ok(())
    };
    let track = integrate_to_grid(rhs, &grid, &[sig0, sigd0, l0], &OdeOptions::default())?;
    let mut samples: Vec<SigmaSample> = grid
        .iter()
        .zip(track.iter())
        .map(|(&s, y)| SigmaSample { s, sigma: y[0], sigma_d: y[1], e2: y[2].exp() })
        .collect();
    samples.reverse();
    Ok(SigmaGrid { method: MethodTag::SigmaOde, samples })
}

/// Auxiliary quadrature recovering q(s), p(s) from a σ/R₀ track by the
/// logarithmic-derivative equations
///
/// ```text
///   (1+s²)(ln q)′ = σ/(2sR₀) + (1+s²)R₀ − √W
///   (1+s²)(ln p)′ = −σ/(2sR₀) − (1+s²)R₀ − √W
///   W = [σ/(2sR₀) + as − (1+s²)R₀]² + 2sσ + 4as(1+s²)R₀ − b²
/// ```
///
/// integrated inward over the span of `sol`, seeded with the endpoint
/// values of `sol` itself (its q, p are Fredholm-accurate; the
/// large-s boundary constants of [`aux_qp_boundary_values`] are kept as
/// an agreement check rather than used as initial data).  Returns
/// (s, q, p) ascending in s.
pub fn aux_qp_double(params: &EnsembleParams, sol: &DoubleSolution) -> Result<Vec<(f64, f64, f64)>> {
    if sol.states.len() < 4 {
        return Err(Error::Domain("need at least 4 states for interpolation".into()));
    }
    let a = params.a;
    let b = params.b();
    let ss: Vec<f64> = sol.states.iter().map(|st| st.s).collect();
    let sig: Vec<f64> = sol.states.iter().map(|st| st.sigma).collect();
    let sigd: Vec<f64> = sol.grid.samples.iter().map(|smp| smp.sigma_d).collect();
    let r0: Vec<f64> = sol.states.iter().map(|st| st.r0()).collect();
    // R₀′ = (q′p + qp′)/s − qp/s² with q′, p′ from the coupled system
    let r0d: Vec<f64> = sol
        .states
        .iter()
        .map(|st| {
            let y = [st.q, st.p, st.beta, st.gamma, st.log_e2];
            let mut dy = [0.0; 5];
            rhs_double(a, st.s, &y, &mut dy);
            (dy[0] * st.p + st.q * dy[1]) / st.s - st.q * st.p / (st.s * st.s)
        })
        .collect();

    let last = sol.states.last().unwrap();
    let y0 = [last.q.ln(), last.p.ln()];
    if !(last.q > 0.0 && last.p > 0.0) {
        return Err(Error::Domain("endpoint q, p must be positive".into()));
    }

    let rhs = |s: f64, _y: &[f64], dy: &mut [f64]| -> Result<()> {
        let m = 1.0 + s * s;
        let sg = hermite_eval(&ss, &sig, &sigd, s)?;
        let r = hermite_eval(&ss, &r0, &r0d, s)?;
        let term = sg / (2.0 * s * r);
        let core = term + a * s - m * r;
        let w = core * core + 2.0 * s * sg + 4.0 * a * s * m * r - b * b;
        let scale = core * core + (2.0 * s * sg).abs() + (4.0 * a * s * m * r).abs() + b * b;
        if w < -1e-8 * scale {
            return Err(Error::Branch(format!(
                "quadrature radicand negative ({w:.2e} vs scale {scale:.2e}) at s = {s}"
            )));
        }
        let root = w.max(0.0).sqrt();
        dy[0] = (term + m * r - root) / m;
        dy[1] = (-term - m * r - root) / m;
        Ok(())
    };
    let grid: Vec<f64> = ss.iter().rev().copied().collect();
    let track = integrate_to_grid(rhs, &grid, &y0, &OdeOptions::default())?;
    let mut out: Vec<(f64, f64, f64)> = grid
        .iter()
        .zip(track.iter())
        .map(|(&s, y)| (s, y[0].exp(), y[1].exp()))
        .collect();
    out.reverse();
    Ok(out)
}

/// Leading large-s boundary values (q_bc, p_bc) of the rescaled
/// variables: q ~ √[bΓ(N+2a)/Γ(N+1)]·(2s)^(−a)/Γ(a+½) and
/// p ~ √[bΓ(N+2a+1)/Γ(N)]·(2s)^(−a−1)/Γ(a+3/2).
pub fn aux_qp_boundary_values(params: &EnsembleParams, s: f64) -> Result<(f64, f64)> {
    use crate::specfun::gamma::ln_gamma;
    let a = params.a;
    let n = params.n as f64;
    let b = params.b();
    let q = (0.5 * (b.ln() + ln_gamma(n + 2.0 * a)? - ln_gamma(n + 1.0)?)).exp()
        * (2.0 * s).powf(-a)
        / (ln_gamma(a + 0.5)?).exp();
    let p = (0.5 * (b.ln() + ln_gamma(n + 2.0 * a + 1.0)? - ln_gamma(n)?)).exp()
        * (2.0 * s).powf(-a - 1.0)
        / (ln_gamma(a + 1.5)?).exp();
    Ok((q, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{exact_gap_double, IntervalSpec};
    use crate::fredholm::resolvent_at_endpoint;

    fn seed_at(params: &EnsembleParams, s: f64, order: usize) -> ResolventData {
        resolvent_at_endpoint(params, &IntervalSpec::DoubleTail { s }, order).unwrap()
    }

    #[test]
    fn coupled_matches_closed_forms() {
        for &(n, a) in &[(1usize, 1.0), (2usize, 2.0)] {
            let p = EnsembleParams { n, a };
            let seed = seed_at(&p, 40.0, 256);
            let sol = integrate_double(&p, 40.0, 0.2, 120, &seed).unwrap();
            sol.grid.validate().unwrap();
            let mut worst_e2 = 0.0_f64;
            let mut worst_sig = 0.0_f64;
            let mut worst_f = 0.0_f64;
            for (smp, st) in sol.grid.samples.iter().zip(sol.states.iter()) {
                let (e2, sig, big_f) = exact_gap_double(n, a, smp.s).unwrap();
                worst_e2 = worst_e2.max((smp.e2 - e2).abs());
                worst_sig = worst_sig.max((smp.sigma - sig).abs() / sig.abs().max(1.0));
                worst_f = worst_f.max((st.big_f(&p) - big_f).abs() / big_f.abs().max(1.0));
            }
            assert!(worst_e2 < 1e-7, "(N,a)=({n},{a}): E2 off by {worst_e2:.2e}");
            assert!(worst_sig < 1e-6, "(N,a)=({n},{a}): sigma off by {worst_sig:.2e}");
            assert!(worst_f < 1e-6, "(N,a)=({n},{a}): F off by {worst_f:.2e}");
        }
    }

    #[test]
    fn arctan_law_at_n1_a0() {
        // E2(0; (−∞,−s)∪(s,∞)) = (2/π) arctan s — and the coupled route
        // has no a = 0 obstruction on the double interval
        let p = EnsembleParams { n: 1, a: 0.0 };
        let seed = seed_at(&p, 40.0, 256);
        let sol = integrate_double(&p, 40.0, 0.2, 160, &seed).unwrap();
        let mut worst = 0.0_f64;
        for smp in &sol.grid.samples {
            let e2 = 2.0 / std::f64::consts::PI * smp.s.atan();
            worst = worst.max((smp.e2 - e2).abs());
        }
        assert!(worst < 1e-9, "arctan law violated by {worst:.2e}");
    }

    #[test]
    fn integral_of_motion_conserved() {
        for &(n, a) in &[(2usize, 1.0), (2usize, 0.25), (1usize, 0.0)] {
            let p = EnsembleParams { n, a };
            let b = p.b();
            let seed = seed_at(&p, 40.0, 320);
            let sol = integrate_double(&p, 40.0, 0.3, 60, &seed).unwrap();
            for st in &sol.states {
                let m = 1.0 + st.s * st.s;
                let gap = (st.beta * st.gamma
                    - (b * b - 2.0 * st.s * st.sigma - 4.0 * a * m * st.q * st.p))
                    .abs();
                let scale = (b * b).max(st.sigma.abs());
                assert!(gap < 1e-7 * scale, "(N,a)=({n},{a}): drift {gap:.2e} at s={}", st.s);
            }
        }
    }

    #[test]
    fn sigma_route_agrees_with_coupled() {
        for &(n, a) in &[(2usize, 1.0), (1usize, 0.0)] {
            let p = EnsembleParams { n, a };
            let seed = seed_at(&p, 40.0, 256);
            let coupled = integrate_double(&p, 40.0, 0.4, 50, &seed).unwrap();
            let sigma = integrate_double_sigma(&p, 40.0, 0.4, 50, 256).unwrap();
            for (c, s) in coupled.grid.samples.iter().zip(sigma.samples.iter()) {
                assert!((c.e2 - s.e2).abs() < 1e-8, "(N,a)=({n},{a}) s={}", c.s);
                assert!((c.sigma - s.sigma).abs() < 1e-7 * c.sigma.abs().max(1.0));
            }
        }
    }

    #[test]
    fn residuals_vanish_on_closed_form() {
        // N=1, a=0: E2 = (2/π)arctan s gives σ = 1/(2 arctan s) and
        // R₀ = 1/(2(1+s²) arctan s) in closed form
        let p = EnsembleParams { n: 1, a: 0.0 };
        for &s in &[0.5_f64, 1.0, 2.0, 5.0] {
            let at = s.atan();
            let m = 1.0 + s * s;
            let sig = 0.5 / at;
            let sd = -0.5 / (at * at * m);
            let sdd = (1.0 / (at * at * at) + s / (at * at)) / (m * m);
            let res = sigma_residual_double_f(&p, s, sig, sd, sdd).abs();
            let scale = sig.powi(4).max(1.0);
            assert!(res < 1e-9 * scale, "s={s}: F-form residual {res:.2e}");

            let r0 = 0.5 / (m * at);
            let h = 1e-4;
            let r0f = |x: f64| 0.5 / ((1.0 + x * x) * x.atan());
            let r0d = (r0f(s + h) - r0f(s - h)) / (2.0 * h);
            let r0dd = (r0f(s + h) - 2.0 * r0 + r0f(s - h)) / (h * h);
            let res_t = sigma_residual_double_t(&p, s, r0, r0d, r0dd).abs();
            let scale_t = (s * m * m * r0dd).powi(2).max(1.0);
            assert!(res_t < 1e-5 * scale_t, "s={s}: T-form residual {res_t:.2e}");
        }
    }

    // (qp)′ and R₀′ from the coupled vector field at a state
    fn qp_derivs(a: f64, st: &TwStateDouble) -> (f64, f64) {
        let y = [st.q, st.p, st.beta, st.gamma, st.log_e2];
        let mut dy = [0.0; 5];
        rhs_double(a, st.s, &y, &mut dy);
        let qpd = dy[0] * st.p + st.q * dy[1];
        let r0d = qpd / st.s - st.q * st.p / (st.s * st.s);
        (qpd, r0d)
    }

    #[test]
    fn residuals_along_coupled_trajectory() {
        // σ″ analytically from the coupled state; R₀″ by fourth-order
        // differencing of the analytic R₀′ values
        let p = EnsembleParams { n: 2, a: 1.0 };
        let a = p.a;
        let seed = seed_at(&p, 40.0, 256);
        let sol = integrate_double(&p, 40.0, 0.5, 2001, &seed).unwrap();
        let smp = &sol.grid.samples;
        let hgrid = smp[1].s - smp[0].s;
        let r0d_all: Vec<f64> = sol.states.iter().map(|st| qp_derivs(a, st).1).collect();
        for i in (10..smp.len() - 10).step_by(199) {
            let s = smp[i].s;
            let st = &sol.states[i];
            let m = 1.0 + s * s;
            let qp = st.q * st.p;
            let (qpd, r0d) = qp_derivs(a, st);
            let sdd = -2.0 * a * qpd + 4.0 * qp * qp / (s * s * s) - 4.0 * m * qp * qpd / (s * s);
            let res = sigma_residual_double_f(&p, s, smp[i].sigma, smp[i].sigma_d, sdd).abs();
            let scale = (2.0 * m * smp[i].sigma).powi(2).max(1.0);
            assert!(res < 1e-5 * scale, "s={s}: residual {res:.2e} vs scale {scale:.2e}");

            let r0dd = (-r0d_all[i + 2] + 8.0 * r0d_all[i + 1] - 8.0 * r0d_all[i - 1]
                + r0d_all[i - 2])
                / (12.0 * hgrid);
            let res_t = sigma_residual_double_t(&p, s, st.r0(), r0d, r0dd).abs();
            let lhs_scale = (s * m * m * r0dd).powi(2).max((st.t() * 2.0 * p.b().powi(2)).powi(2));
            assert!(res_t < 1e-5 * lhs_scale, "s={s}: T residual {res_t:.2e} vs {lhs_scale:.2e}");
        }
    }

    #[test]
    fn aux_quadrature_consistency() {
        // the quadrature reads σ and R₀ through a cubic interpolant, so
        // its accuracy is set by the input grid density
        let p = EnsembleParams { n: 1, a: 1.0 };
        let seed = seed_at(&p, 40.0, 256);
        let sol = integrate_double(&p, 40.0, 0.5, 1200, &seed).unwrap();
        let aux = aux_qp_double(&p, &sol).unwrap();
        for ((s, q, pp), st) in aux.iter().zip(sol.states.iter()) {
            assert_eq!(*s, st.s);
            assert!((q - st.q).abs() < 1e-6 * st.q.abs(), "s={s}: q {q} vs {}", st.q);
            assert!((pp - st.p).abs() < 1e-6 * st.p.abs(), "s={s}: p {pp} vs {}", st.p);
            let r0 = q * pp / s;
            assert!((r0 - st.r0()).abs() < 1e-6 * st.r0().abs());
        }
        // and the Fredholm endpoint values directly, away from the seed
        let (idx, _) = aux
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                (x.0 - 2.0).abs().partial_cmp(&(y.0 - 2.0).abs()).unwrap()
            })
            .unwrap();
        let r = seed_at(&p, aux[idx].0, 256);
        assert!((aux[idx].1 - r.q).abs() < 1e-6 * r.q.abs());
        assert!((aux[idx].2 - r.p).abs() < 1e-6 * r.p.abs());
    }

    #[test]
    fn boundary_constants_at_large_s() {
        // q·s^a and p·s^{a+1} approach the boundary constants: ratio
        // within 1e−3 at s = 50
        let p = EnsembleParams { n: 2, a: 1.0 };
        let seed = seed_at(&p, 50.0, 256);
        let sol = integrate_double(&p, 50.0, 40.0, 11, &seed).unwrap();
        let st = sol.states.last().unwrap();
        let (qbc, pbc) = aux_qp_boundary_values(&p, st.s).unwrap();
        assert!((st.q / qbc - 1.0).abs() < 1e-3, "q ratio {}", st.q / qbc);
        assert!((st.p / pbc - 1.0).abs() < 1e-3, "p ratio {}", st.p / pbc);
    }

    #[test]
    fn sigma_asymptote_against_fredholm() {
        // double-interval σ at a = 0 carries the same s^{−1} harmonic as
        // the single interval; pin the s = 50 value against the
        // resolvent rather than the leading coefficient alone
        let p = EnsembleParams { n: 3, a: 0.0 };
        let seed = seed_at(&p, 60.0, 256);
        let sol = integrate_double(&p, 60.0, 50.0, 11, &seed).unwrap();
        let r = seed_at(&p, 50.0, 320);
        let sig_f = (1.0 + 2500.0) * r.r_diag;
        let sig_c = sol.grid.samples[0].sigma;
        assert!(
            (sig_c - sig_f).abs() < 1e-8 * sig_f,
            "sigma(50): coupled {sig_c} vs fredholm {sig_f}"
        );
    }
}
