//! Acceptance gate: one test per criterion, each emitting a single
//! PASS/FAIL line (visible with `--nocapture`, and always on failure).
//!
//! The criteria pin the library's accuracy contract: closed-form agreement
//! of every route, residuals of all five σ-forms, conserved integrals of
//! motion, boundary asymptotics, scaled-limit reductions and identities,
//! spacing-density moments, Painlevé parameter tables, Monte Carlo
//! calibration, and orthonormality of the underlying polynomials.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cygap::ensemble::{
    exact_gap_double, exact_gap_single, kernel_eval, orthonormality_defect, EnsembleParams,
    IntervalSpec, KernelSpec,
};
use cygap::fredholm::{det_gap, det_gap_converged, resolvent_at_endpoint};
use cygap::montecarlo::{estimate_gap, sample, MCConfig};
use cygap::painleve::{
    double_pvi_params, pv_residual_bessel, pvi_parameter_table, scaled_pv_params,
    tau_identity_residual, PainleveParams,
};
use cygap::specfun::gamma::gamma;
use cygap::specfun::quad::gauss_legendre;
use cygap::twode::{
    hermite_eval, integrate_bessel, integrate_double, integrate_double_sigma,
    integrate_scaled_single, integrate_single, integrate_single_sigma, scaled_limit_check,
    sigma_residual_bessel, sigma_residual_double_f, sigma_residual_double_t,
    sigma_residual_scaled, sigma_residual_single, SpacingDensity,
};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} {}: {name} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {id:02} {name}: {detail}");
}

fn grid50() -> Vec<f64> {
    (0..50)
        .map(|k| 0.2 + (10.0 - 0.2) * k as f64 / 49.0)
        .collect()
}

const CASES_12: [(usize, f64); 6] = [(1, 0.0), (1, 1.0), (1, 2.0), (2, 0.0), (2, 1.0), (2, 2.0)];

/// 1. Single-interval closed forms vs the Fredholm and ODE routes on a
///    50-point grid, (N,a) ∈ {1,2}×{0,1,2}; < 1e−8 / 1e−6, under 60 s.
#[test]
fn acceptance_01_closed_form_single() {
    let t0 = Instant::now();
    let ss = grid50();
    let mut worst_fred = 0.0_f64;
    let mut worst_ode = 0.0_f64;
    for &(n, a) in &CASES_12 {
        let p = EnsembleParams::new(n, a).unwrap();
        let spec = KernelSpec::FiniteCauchy(p.clone());
        for &s in &ss {
            let exact = exact_gap_single(n, a, s).unwrap().0;
            let det = det_gap(&spec, &IntervalSpec::SingleTail { s }, 128).unwrap();
            worst_fred = worst_fred.max((det - exact).abs());
        }
        // ODE route: the coupled system where it exists (a > 0), the
        // σ-form flow at a = 0 where the coupled variables are singular.
        let e2s: Vec<f64> = if a > 0.0 {
            let seed = resolvent_at_endpoint(&p, &IntervalSpec::SingleTail { s: 10.0 }, 256).unwrap();
            integrate_single(&p, 10.0, 0.2, 50, &seed)
                .unwrap()
                .grid
                .samples
                .iter()
                .map(|x| x.e2)
                .collect()
        } else {
            integrate_single_sigma(&p, 10.0, 0.2, 50, 256)
                .unwrap()
                .samples
                .iter()
                .map(|x| x.e2)
                .collect()
        };
        for (k, &s) in ss.iter().enumerate() {
            let exact = exact_gap_single(n, a, s).unwrap().0;
            worst_ode = worst_ode.max((e2s[k] - exact).abs());
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    report(
        1,
        "closed-form agreement (single)",
        worst_fred < 1e-8 && worst_ode < 1e-6 && dt < 60.0,
        &format!("fredholm dev {worst_fred:.2e} (tol 1e-8), ode dev {worst_ode:.2e} (tol 1e-6), {dt:.1}s (< 60s)"),
    );
}

/// 2. Same for the symmetric double interval.
#[test]
fn acceptance_02_closed_form_double() {
    let t0 = Instant::now();
    let ss = grid50();
    let mut worst_fred = 0.0_f64;
    let mut worst_ode = 0.0_f64;
    for &(n, a) in &CASES_12 {
        let p = EnsembleParams::new(n, a).unwrap();
        let spec = KernelSpec::FiniteCauchy(p.clone());
        for &s in &ss {
            let exact = exact_gap_double(n, a, s).unwrap().0;
            let det = det_gap(&spec, &IntervalSpec::DoubleTail { s }, 96).unwrap();
            worst_fred = worst_fred.max((det - exact).abs());
        }
        let seed = resolvent_at_endpoint(&p, &IntervalSpec::DoubleTail { s: 10.0 }, 256).unwrap();
        let sol = integrate_double(&p, 10.0, 0.2, 50, &seed).unwrap();
        for (k, &s) in ss.iter().enumerate() {
            let exact = exact_gap_double(n, a, s).unwrap().0;
            worst_ode = worst_ode.max((sol.grid.samples[k].e2 - exact).abs());
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    report(
        2,
        "closed-form agreement (double)",
        worst_fred < 1e-8 && worst_ode < 1e-6 && dt < 60.0,
        &format!("fredholm dev {worst_fred:.2e} (tol 1e-8), ode dev {worst_ode:.2e} (tol 1e-6), {dt:.1}s (< 60s)"),
    );
}

/// 3. N = 1, a = 0 arctan anchors to 1e−9 by every route.
#[test]
fn acceptance_03_arctan_anchors() {
    let p = EnsembleParams::new(1, 0.0).unwrap();
    let spec = KernelSpec::FiniteCauchy(p.clone());
    let single = |s: f64| 0.5 + s.atan() / std::f64::consts::PI;
    let double = |s: f64| 2.0 / std::f64::consts::PI * s.atan();
    let mut worst = 0.0_f64;
    for &s in &[0.25_f64, 0.7, 1.0, 2.0, 4.0, 8.0] {
        worst = worst.max((exact_gap_single(1, 0.0, s).unwrap().0 - single(s)).abs());
        worst = worst.max((exact_gap_double(1, 0.0, s).unwrap().0 - double(s)).abs());
        worst = worst
            .max((det_gap_converged(&spec, &IntervalSpec::SingleTail { s }).unwrap() - single(s)).abs());
        worst = worst
            .max((det_gap_converged(&spec, &IntervalSpec::DoubleTail { s }).unwrap() - double(s)).abs());
    }
    let g1 = integrate_single_sigma(&p, 8.0, 0.25, 32, 256).unwrap();
    for sm in &g1.samples {
        worst = worst.max((sm.e2 - single(sm.s)).abs());
    }
    let g2 = integrate_double_sigma(&p, 8.0, 0.25, 32, 256).unwrap();
    for sm in &g2.samples {
        worst = worst.max((sm.e2 - double(sm.s)).abs());
    }
    let seed = resolvent_at_endpoint(&p, &IntervalSpec::DoubleTail { s: 8.0 }, 256).unwrap();
    let cd = integrate_double(&p, 8.0, 0.25, 32, &seed).unwrap();
    for sm in &cd.grid.samples {
        worst = worst.max((sm.e2 - double(sm.s)).abs());
    }
    report(
        3,
        "N=1, a=0 arctan anchors",
        worst < 1e-9,
        &format!("max dev {worst:.2e} (tol 1e-9) across closed/fredholm/sigma-ode/coupled"),
    );
}

fn d1_5pt(v: &[f64], i: usize, h: f64) -> f64 {
    (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h)
}

/// 4. Residuals of all five σ-form ODEs along produced trajectories,
///    second derivatives by centered differences of the stored tracks.
#[test]
fn acceptance_04_sigma_residuals() {
    let mut detail = String::new();
    let mut pass = true;
    let mut record = |name: &str, worst: f64| {
        if !detail.is_empty() {
            detail.push_str(", ");
        }
        detail.push_str(&format!("{name} {worst:.1e}"));
        pass &= worst.is_finite() && worst < 1e-5;
    };

    // single-interval σ-form
    let p = EnsembleParams::new(2, 1.0).unwrap();
    let g = integrate_single_sigma(&p, 10.0, 0.4, 1201, 256).unwrap();
    let h = g.samples[1].s - g.samples[0].s;
    let sd: Vec<f64> = g.samples.iter().map(|x| x.sigma_d).collect();
    let mut worst = 0.0_f64;
    for i in (2..g.samples.len() - 2).step_by(7) {
        let sm = &g.samples[i];
        let sdd = d1_5pt(&sd, i, h);
        let m = 1.0 + sm.s * sm.s;
        let res = sigma_residual_single(&p, sm.s, sm.sigma, sm.sigma_d, sdd).abs();
        let scale = (m * m * sdd * sdd).max(sm.sigma.powi(4)).max(1.0);
        worst = worst.max(res / scale);
    }
    record("single", worst);

    // double-interval F-form
    let g = integrate_double_sigma(&p, 10.0, 0.5, 1201, 256).unwrap();
    let h = g.samples[1].s - g.samples[0].s;
    let sd: Vec<f64> = g.samples.iter().map(|x| x.sigma_d).collect();
    let mut worst = 0.0_f64;
    for i in (2..g.samples.len() - 2).step_by(7) {
        let sm = &g.samples[i];
        let sdd = d1_5pt(&sd, i, h);
        let m = 1.0 + sm.s * sm.s;
        let res = sigma_residual_double_f(&p, sm.s, sm.sigma, sm.sigma_d, sdd).abs();
        let scale = (2.0 * m * sm.sigma).powi(2).max(1.0);
        worst = worst.max(res / scale);
    }
    record("double-F", worst);

    // double-interval R₀-form
    let seed = resolvent_at_endpoint(&p, &IntervalSpec::DoubleTail { s: 10.0 }, 256).unwrap();
    let sol = integrate_double(&p, 10.0, 0.5, 1501, &seed).unwrap();
    let h = sol.grid.samples[1].s - sol.grid.samples[0].s;
    let r0s: Vec<f64> = sol.states.iter().map(|st| st.r0()).collect();
    let b2 = p.b() * p.b();
    let mut worst = 0.0_f64;
    for i in (2..r0s.len() - 2).step_by(7) {
        let s = sol.grid.samples[i].s;
        let m = 1.0 + s * s;
        let r0d = d1_5pt(&r0s, i, h);
        let r0dd = (-r0s[i + 2] + 16.0 * r0s[i + 1] - 30.0 * r0s[i] + 16.0 * r0s[i - 1]
            - r0s[i - 2])
            / (12.0 * h * h);
        let res = sigma_residual_double_t(&p, s, r0s[i], r0d, r0dd).abs();
        let t = 2.0 * s * r0s[i];
        let scale = (s * m * m * r0dd).powi(2).max((t * 2.0 * b2).powi(2)).max(1.0);
        worst = worst.max(res / scale);
    }
    record("double-T", worst);

    // hard-edge σ₁-form
    let a = 1.0;
    let sol = integrate_bessel(a, 6.0, 1201).unwrap();
    let hx = sol.states[1].x - sol.states[0].x;
    let s1d: Vec<f64> = sol
        .states
        .iter()
        .map(|st| -(st.q * st.q + st.p * st.p))
        .collect();
    let mut worst = 0.0_f64;
    for i in (2..sol.states.len() - 2).step_by(7) {
        let r = 2.0 * sol.states[i].x;
        let s1 = sol.sigma1(i);
        let s1dd = d1_5pt(&s1d, i, 2.0 * hx);
        let res = sigma_residual_bessel(a, r, s1, s1d[i], s1dd).abs();
        let scale = (r * s1dd).powi(2).max(s1d[i] * s1d[i]).max(1e-12);
        worst = worst.max(res / scale);
    }
    record("hard-edge", worst);

    // scaled one-sided τ-form
    let g = integrate_scaled_single(1.0, 6.0, 1201).unwrap();
    let h = g.samples[1].s - g.samples[0].s;
    let td: Vec<f64> = g.samples.iter().map(|x| x.sigma_d).collect();
    let mut worst = 0.0_f64;
    for i in (2..g.samples.len() - 2).step_by(7) {
        let sm = &g.samples[i];
        let taudd = d1_5pt(&td, i, h);
        let res = sigma_residual_scaled(1.0, sm.s, sm.sigma, sm.sigma_d, taudd).abs();
        let am = sm.s * sm.sigma_d - sm.sigma;
        let scale = ((sm.s * taudd).powi(2)
            + 4.0 * (am * sm.sigma_d * sm.sigma_d).abs()
            + 4.0 * sm.sigma_d * sm.sigma_d
            + 4.0 * am * am)
            .max(1e-10);
        worst = worst.max(res / scale);
    }
    record("scaled", worst);

    report(
        4,
        "sigma-ODE residuals (five forms)",
        pass,
        &format!("{detail} (tol 1e-5 each)"),
    );
}

/// 5. Integrals of motion conserved along all three coupled systems.
#[test]
fn acceptance_05_integrals_of_motion() {
    let mut worst_single = 0.0_f64;
    for &(n, a) in &[(2usize, 1.0_f64), (1, 0.75), (3, 2.0)] {
        let p = EnsembleParams::new(n, a).unwrap();
        let b = p.b();
        let seed = resolvent_at_endpoint(&p, &IntervalSpec::SingleTail { s: 10.0 }, 256).unwrap();
        let sol = integrate_single(&p, 10.0, 0.4, 400, &seed).unwrap();
        for st in &sol.states {
            let scale = (b * b).max(st.sigma.abs()).max(1.0);
            let first = (st.sigma - 2.0 * a * st.v).abs();
            let m = 1.0 + st.s * st.s;
            let sig_d = -2.0 * a * st.q * st.p;
            let second =
                (st.beta * st.gamma - (b * b + m * sig_d - st.s * st.sigma + st.v * st.v)).abs();
            worst_single = worst_single.max(first / scale).max(second / scale);
        }
    }

    let mut worst_double = 0.0_f64;
    for &(n, a) in &[(2usize, 1.0_f64), (1, 0.0), (3, 0.75)] {
        let p = EnsembleParams::new(n, a).unwrap();
        let b = p.b();
        let seed = resolvent_at_endpoint(&p, &IntervalSpec::DoubleTail { s: 10.0 }, 256).unwrap();
        let sol = integrate_double(&p, 10.0, 0.5, 400, &seed).unwrap();
        for st in &sol.states {
            let m = 1.0 + st.s * st.s;
            let scale = (b * b).max(st.sigma.abs()).max(1.0);
            let gap = (st.beta * st.gamma
                - (b * b - 2.0 * st.s * st.sigma - 4.0 * a * m * st.q * st.p))
                .abs();
            worst_double = worst_double.max(gap / scale);
        }
    }

    let mut worst_bessel = 0.0_f64;
    for &a in &[0.0_f64, 0.75, 2.0] {
        let sol = integrate_bessel(a, 8.0, 400).unwrap();
        for st in &sol.states {
            let gap = (2.0 * st.q * st.p - (st.w - st.u)).abs();
            let scale = (st.w - st.u).abs().max(1e-6);
            worst_bessel = worst_bessel.max(gap / scale);
        }
    }

    report(
        5,
        "integrals of motion",
        worst_single < 1e-7 && worst_double < 1e-7 && worst_bessel < 1e-7,
        &format!(
            "single {worst_single:.1e}, double {worst_double:.1e}, hard-edge {worst_bessel:.1e} (tol 1e-7)"
        ),
    );
}

/// 6. Boundary asymptotics: σ·s^{2a} at s = 50 vs the leading coefficient
///    of the large-s expansion, (N,a) ∈ {1,2,3}×{0,1}, 1% each.
///
/// The subleading correction of the a = 0 expansion is O(N/s): at s = 50
/// it contributes ≈ 0.64·N % (single) and ≈ 1.3·N % (double), so the a = 0
/// cells beyond N = 1 (single) and all a = 0 cells (double) genuinely
/// exceed 1%. The criterion is asserted as stated; the FAIL below records
/// the measured property rather than a defect of the routes (both the
/// Fredholm and ODE values of σ(50) agree to ~1e-10).
#[test]
fn acceptance_06_boundary_asymptotics() {
    let s = 50.0_f64;
    let mut detail = String::new();
    let mut pass = true;
    for &(n, a) in &[(1usize, 0.0_f64), (2, 0.0), (3, 0.0), (1, 1.0), (2, 1.0), (3, 1.0)] {
        let p = EnsembleParams::new(n, a).unwrap();
        let nn = n as f64;

        // single: lead = (2a+1) 2^{2a} Γ(1+N+2a) Γ²(a+1) / (π Γ(N) Γ²(2a+2))
        let lead_s = (2.0 * a + 1.0) * 2.0_f64.powf(2.0 * a) * gamma(1.0 + nn + 2.0 * a).unwrap()
            * gamma(a + 1.0).unwrap().powi(2)
            / (std::f64::consts::PI * gamma(nn).unwrap() * gamma(2.0 * a + 2.0).unwrap().powi(2));
        let r1 = resolvent_at_endpoint(&p, &IntervalSpec::SingleTail { s }, 256).unwrap();
        let ratio_s = (1.0 + s * s) * r1.r_diag * s.powf(2.0 * a) / lead_s;

        // double: lead = Γ(N+2a+1) / (2^{2a+1} Γ(a+½) Γ(a+3/2) Γ(N))
        let lead_d = gamma(nn + 2.0 * a + 1.0).unwrap()
            / (2.0_f64.powf(2.0 * a + 1.0)
                * gamma(a + 0.5).unwrap()
                * gamma(a + 1.5).unwrap()
                * gamma(nn).unwrap());
        let r2 = resolvent_at_endpoint(&p, &IntervalSpec::DoubleTail { s }, 256).unwrap();
        let ratio_d = (1.0 + s * s) * r2.r_diag * s.powf(2.0 * a) / lead_d;

        let ok = (ratio_s - 1.0).abs() < 0.01 && (ratio_d - 1.0).abs() < 0.01;
        pass &= ok;
        detail.push_str(&format!(
            "({n},{a}) s {:.4}/d {:.4}{} ",
            ratio_s,
            ratio_d,
            if ok { "" } else { "✗" }
        ));
    }
    report(
        6,
        "boundary asymptotics at s=50 (1%)",
        pass,
        detail.trim_end(),
    );
}

/// 7. Sine-kernel reduction of the a = 0 scaled quantities: the τ₀ gap
///    matches the sine-kernel Fredholm determinant, and the a = 0
///    hard-edge kernel is the sine kernel pointwise.
#[test]
fn acceptance_07_sine_reduction() {
    let t_end = 2.0 * std::f64::consts::PI;
    let n_dense = ((t_end - 1e-3) / 0.004).ceil() as usize + 2;
    let g = integrate_scaled_single(0.0, t_end, n_dense).unwrap();
    let ys: Vec<f64> = g.samples.iter().map(|x| x.s).collect();
    let ells: Vec<f64> = g.samples.iter().map(|x| x.e2.ln()).collect();
    let ellds: Vec<f64> = g.samples.iter().map(|x| -x.sigma / x.s).collect();
    let mut worst_det = 0.0_f64;
    for k in 1..=8 {
        let x = 0.25 * k as f64;
        let e2 = hermite_eval(&ys, &ells, &ellds, std::f64::consts::PI * x)
            .unwrap()
            .exp();
        let det = det_gap_converged(
            &KernelSpec::Sine { rho: 1.0 },
            &IntervalSpec::Union(vec![(0.0, x)]),
        )
        .unwrap();
        worst_det = worst_det.max((e2 - det).abs());
    }

    let mut worst_k = 0.0_f64;
    for &rho in &[1.0_f64, 0.7] {
        let bessel = KernelSpec::Bessel { a: 0.0, rho };
        let sine = KernelSpec::Sine { rho };
        for &x in &[-1.3_f64, -0.4, 0.2, 0.9, 2.0] {
            for &y in &[-0.8_f64, 0.3, 0.9, 1.7] {
                let kb = kernel_eval(&bessel, x, y).unwrap();
                let ks = kernel_eval(&sine, x, y).unwrap();
                worst_k = worst_k.max((kb - ks).abs());
            }
        }
        let kb = kernel_eval(&bessel, 0.6, 0.6).unwrap();
        let ks = kernel_eval(&sine, 0.6, 0.6).unwrap();
        worst_k = worst_k.max((kb - ks).abs());
    }

    report(
        7,
        "sine-kernel reduction at a=0",
        worst_det < 1e-6 && worst_k < 1e-10,
        &format!("gap dev {worst_det:.2e} (tol 1e-6) on x in (0,2], kernel dev {worst_k:.2e} (tol 1e-10)"),
    );
}

/// 8. τ-transcendent identity τ₁ = 1 + τ₀ − x τ₀′/τ₀ on [0.05, 4].
#[test]
fn acceptance_08_tau_identity() {
    let g0 = integrate_scaled_single(0.0, 4.0, 801).unwrap();
    let g1 = integrate_scaled_single(1.0, 4.0, 801).unwrap();
    let r = tau_identity_residual(&g0, &g1).unwrap();
    report(
        8,
        "tau-transcendent identity",
        r.max_residual.is_finite() && r.max_residual < 1e-5 && r.checked > 700,
        &format!(
            "max residual {:.2e} (tol 1e-5) over {} points of [0.05, 4]",
            r.max_residual, r.checked
        ),
    );
}

/// 9. Spacing density: normalization and mean to 1e−3 with the integrals
///    truncated at x = 5 (tail < 1e−12 by the super-exponential decay of
///    the gap factor), and the small-x coefficient π²/3 to 1%.
#[test]
fn acceptance_09_spacing_density() {
    let sd = SpacingDensity::new(5.0).unwrap();
    let rule = gauss_legendre(40).unwrap();
    let mut norm = 0.0;
    let mut mean = 0.0;
    for panel in 0..20 {
        let lo = 0.25 * panel as f64;
        for (t, w) in rule.affine_pairs(lo, lo + 0.25) {
            let v = sd.eval(t).unwrap();
            norm += w * v;
            mean += w * t * v;
        }
    }
    let p5 = sd.eval(5.0).unwrap();

    let mut ratio = 0.0;
    for j in 0..9 {
        let x = 0.01 + 0.04 * j as f64 / 8.0;
        ratio += sd.eval(x).unwrap() / (x * x) / 9.0;
    }
    let coeff = ratio / (std::f64::consts::PI.powi(2) / 3.0);

    report(
        9,
        "spacing density moments and small-x law",
        (norm - 1.0).abs() < 1e-3 && (mean - 1.0).abs() < 1e-3 && (coeff - 1.0).abs() < 1e-2,
        &format!(
            "norm {norm:.8} (tol 1e-3), mean {mean:.8} (tol 1e-3), truncated at 5 with p2(5) = {p5:.1e}; small-x coeff ratio {coeff:.4} (tol 1%)"
        ),
    );
}

/// 10. Hard-edge system reduces to the Painlevé-V transcendent: equation
///     residual, q-recovery and σ₁-recovery on x ∈ [0.1, 3] for a ∈ {0,1}.
#[test]
fn acceptance_10_pv_reduction() {
    let mut detail = String::new();
    let mut pass = true;
    for &a in &[0.0_f64, 1.0] {
        let sol = integrate_bessel(a, 3.0, 600).unwrap();
        let kept: Vec<usize> = (0..sol.states.len())
            .filter(|&i| sol.states[i].x >= 0.1)
            .collect();
        assert!(kept.len() > 400, "track must cover [0.1, 3]");
        let r = pv_residual_bessel(a, &sol).unwrap();
        let ok = r.max_residual < 1e-5 && r.max_q_defect < 1e-5 && r.max_sigma1_defect < 1e-5;
        pass &= ok;
        detail.push_str(&format!(
            "a={a}: residual {:.1e}, q {:.1e}, sigma1 {:.1e}; ",
            r.max_residual, r.max_q_defect, r.max_sigma1_defect
        ));
    }
    report(
        10,
        "hard-edge PV reduction",
        pass,
        &format!("{}(tol 1e-5 each)", detail),
    );
}

/// 11. Painlevé parameter tables byte-match an independent symbolic
///     evaluation at 5 pseudo-random (N, a) pairs.
#[test]
fn acceptance_11_parameter_tables() {
    fn fmt(p: &PainleveParams) -> String {
        format!(
            "{:.15e},{:.15e},{:.15e},{:.15e}",
            p.alpha, p.beta, p.gamma, p.delta
        )
    }
    fn fmt4(alpha: f64, beta: f64, gamma: f64, delta: f64) -> String {
        format!("{alpha:.15e},{beta:.15e},{gamma:.15e},{delta:.15e}")
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let a_choices = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];
    let mut pass = true;
    let mut tried = String::new();
    for _ in 0..5 {
        let n = rng.gen_range(1..=6usize);
        let a = a_choices[rng.gen_range(0..a_choices.len())];
        tried.push_str(&format!("({n},{a}) "));
        let p = EnsembleParams::new(n, a).unwrap();
        let nn = n as f64;
        let h = nn * (nn + 2.0 * a);
        let sq = |x: f64| x * x;

        // the eight single-interval PVI rows, (plus, minus) per row
        let expected: [[String; 2]; 8] = [
            [
                fmt4(0.5, -0.5 * sq(nn + a), 0.5 * sq(nn + a), 0.5 - 2.0 * a * a),
                fmt4(0.5, -0.5 * sq(nn + a), 0.5 * sq(nn + a), 0.5 - 2.0 * a * a),
            ],
            [
                fmt4(0.5 * sq(1.0 + 2.0 * a), -0.5 * sq(nn + a), 0.5 * sq(nn + a), 0.5),
                fmt4(0.5 * sq(1.0 - 2.0 * a), -0.5 * sq(nn + a), 0.5 * sq(nn + a), 0.5),
            ],
            [
                fmt4(0.5 * sq(1.0 + (nn + 2.0 * a)), -0.5 * a * a, 0.5 * a * a, 0.5 * (1.0 - nn * nn)),
                fmt4(0.5 * sq(1.0 - (nn + 2.0 * a)), -0.5 * a * a, 0.5 * a * a, 0.5 * (1.0 - nn * nn)),
            ],
            [
                fmt4(0.5 * sq(1.0 + nn), -0.5 * a * a, 0.5 * a * a, 0.5 * (1.0 - sq(nn + 2.0 * a))),
                fmt4(0.5 * sq(1.0 - nn), -0.5 * a * a, 0.5 * a * a, 0.5 * (1.0 - sq(nn + 2.0 * a))),
            ],
            [
                fmt4(0.5 * sq(1.0 + (nn + a)), 0.0, 2.0 * a * a, 0.5 * (1.0 - sq(nn + a))),
                fmt4(0.5 * sq(1.0 - (nn + a)), 0.0, 2.0 * a * a, 0.5 * (1.0 - sq(nn + a))),
            ],
            [
                fmt4(0.5 * sq(1.0 + (nn + a)), -2.0 * a * a, 0.0, 0.5 * (1.0 - sq(nn + a))),
                fmt4(0.5 * sq(1.0 - (nn + a)), -2.0 * a * a, 0.0, 0.5 * (1.0 - sq(nn + a))),
            ],
            [
                fmt4(0.5 * sq(1.0 + a), -0.5 * h, 2.0 * a * a + 0.5 * h, 0.5 * (1.0 - a * a)),
                fmt4(0.5 * sq(1.0 - a), -0.5 * h, 2.0 * a * a + 0.5 * h, 0.5 * (1.0 - a * a)),
            ],
            [
                fmt4(0.5 * sq(1.0 + a), 2.0 * a * a - 0.5 * h, 0.5 * h, 0.5 * (1.0 - a * a)),
                fmt4(0.5 * sq(1.0 - a), 2.0 * a * a - 0.5 * h, 0.5 * h, 0.5 * (1.0 - a * a)),
            ],
        ];
        let table = pvi_parameter_table(&p);
        for (row, exp) in table.iter().zip(expected.iter()) {
            pass &= fmt(&row.plus) == exp[0] && fmt(&row.minus) == exp[1];
        }

        // symmetric double interval PVI pair
        let dp = double_pvi_params(&p);
        pass &= fmt(&dp.plus)
            == fmt4(0.125, -0.125 * sq(1.0 + 2.0 * a), 0.0, 0.5 * (1.0 - sq(nn + a)));
        pass &= fmt(&dp.minus)
            == fmt4(0.125, -0.125 * sq(1.0 - 2.0 * a), 0.0, 0.5 * (1.0 - sq(nn + a)));

        // scaled PV sets (a only)
        let sc = scaled_pv_params(a);
        pass &= fmt(&sc.tau.plus) == fmt4(0.5 * sq(1.0 + 2.0 * a), 0.0, 0.0, 2.0);
        pass &= fmt(&sc.tau.minus) == fmt4(0.5 * sq(1.0 - 2.0 * a), 0.0, 0.0, 2.0);
        pass &= fmt(&sc.tau_alt) == fmt4(0.5, -2.0 * a * a, 0.0, 2.0);
        pass &= fmt(&sc.hard_edge)
            == fmt4(
                sq(1.0 - 2.0 * a) / 32.0,
                -sq(1.0 - 2.0 * a) / 32.0,
                0.0,
                -2.0,
            );
    }
    report(
        11,
        "Painlevé parameter tables byte-match",
        pass,
        &format!("pairs {tried}(table of 8 rows ± branches, double pair, scaled/hard-edge sets)"),
    );
}

/// 12. Monte Carlo calibration: for every (N,a) of criteria 1–3 and both
///     interval shapes at s = 1, estimates from 2×10⁵ thinned samples fall
///     within 3 standard errors of the determinant value in ≥ 18/20 seeds.
#[test]
fn acceptance_12_monte_carlo() {
    let t0 = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for &(n, a) in &CASES_12 {
        let exact_s = exact_gap_single(n, a, 1.0).unwrap().0;
        let exact_d = exact_gap_double(n, a, 1.0).unwrap().0;
        for (iv, exact, tag) in [
            (IntervalSpec::SingleTail { s: 1.0 }, exact_s, "s"),
            (IntervalSpec::DoubleTail { s: 1.0 }, exact_d, "d"),
        ] {
            let hits: usize = (0..20u64)
                .into_par_iter()
                .map(|seed| {
                    let cfg = MCConfig {
                        params: EnsembleParams::new(n, a).unwrap(),
                        sweeps: 204_000,
                        burn_in: 4_000,
                        proposal_width: 1.0,
                        seed: 1000 + seed,
                        thinning: 1,
                    };
                    let run = sample(&cfg).unwrap();
                    assert!(run.samples.len() >= 200_000);
                    let est = estimate_gap(&run.samples, &iv).unwrap();
                    usize::from(est.stderr > 0.0 && (est.value - exact).abs() <= 3.0 * est.stderr)
                })
                .sum();
            pass &= hits >= 18;
            detail.push_str(&format!("({n},{a}){tag}:{hits} "));
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    pass &= dt < 300.0;
    report(
        12,
        "Monte Carlo calibration (hits/20 per case)",
        pass,
        &format!("{detail}— {dt:.0}s (< 300s)"),
    );
}

/// 13. Finite-N σ-curves approach the scaled limit monotonically in
///     N ∈ {4,8,16,32} at y ∈ {0.2, 0.5} for a ∈ {0, 1}.
#[test]
fn acceptance_13_scaled_limit_convergence() {
    let mut detail = String::new();
    let mut pass = true;
    for &a in &[0.0_f64, 1.0] {
        for &y in &[0.2_f64, 0.5] {
            let r = scaled_limit_check(a, y, &[4, 8, 16, 32]).unwrap();
            let ok = r.monotone_single() && r.monotone_double();
            pass &= ok;
            detail.push_str(&format!(
                "a={a},y={y}: single {:.1e}->{:.1e}, double {:.1e}->{:.1e}{}; ",
                r.dev_single[0],
                r.dev_single[3],
                r.dev_double[0],
                r.dev_double[3],
                if ok { "" } else { " ✗" }
            ));
        }
    }
    report(13, "finite-N to scaled-limit convergence", pass, detail.trim_end());
}

/// 14. Orthonormality: the Gram matrix of the weight's orthonormal
///     polynomials is the identity to 1e−10.
#[test]
fn acceptance_14_orthonormality() {
    let mut worst = 0.0_f64;
    for &n in &[1usize, 2, 3, 5] {
        for &a in &[0.0, 0.75, 1.0, 2.0] {
            let p = EnsembleParams::new(n, a).unwrap();
            worst = worst.max(orthonormality_defect(&p, 512).unwrap());
        }
    }
    report(
        14,
        "orthonormality of the weight's polynomials",
        worst < 1e-10,
        &format!("max |G - I| = {worst:.2e} (tol 1e-10) over N in {{1,2,3,5}}, a in {{0,0.75,1,2}}"),
    );
}
