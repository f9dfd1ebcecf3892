//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero if
//! any criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{baseline_link, grid_min_xi, link_with, linspace};
use covert_relay::covert_rate::{effective_rate, exp_integral};
use covert_relay::detection::{covert_power_bound, min_detection_error, Radiometer};
use covert_relay::expcli::runner::{self, RunOptions, RunOutput};
use covert_relay::expcli::table::Table;
use covert_relay::montecarlo::{quadrature_rate_oracle, simulate_detection, SimConfig};
use covert_relay::optimizer::{asymptotics, maximize, FeasibleRegion};
use covert_relay::scenario::{db_to_linear, Link, SchemeConfig, SystemParams};
use rand_chacha::rand_core::{RngCore, SeedableRng};

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

const RATE: SchemeConfig = SchemeConfig::RateControl { q: 0.1 };
const POWER: SchemeConfig = SchemeConfig::PowerControl { p_delta: 0.1 };

/// Closed form vs 10^6-trial Monte Carlo at baseline, within 3 SE, < 10 s.
fn criterion_1() -> Verdict {
    let link = baseline_link();
    let (worst, elapsed) = timed(|| {
        let mut worst = 0.0f64;
        for scheme in [RATE, POWER] {
            let det = min_detection_error(&link, &scheme).unwrap();
            let probs = link.probs(&scheme).unwrap();
            let sim = SimConfig::new(1_000_000, 2024, scheme).with_tau(det.tau_star);
            let mc = simulate_detection(&link, &sim).unwrap();
            let se = mc.std_errs;
            for (est, err, want) in [
                (mc.alpha_hat, se.alpha, det.alpha),
                (mc.beta_hat, se.beta, det.beta),
                (mc.p_b_hat, se.p_b, probs.p_b),
                (mc.p_c_hat, se.p_c, probs.p_c),
            ] {
                worst = worst.max((est - want).abs() / err);
            }
        }
        worst
    });
    let secs = elapsed.as_secs_f64();
    verdict(
        worst <= 3.0 && secs < 10.0,
        format!("max |z| = {worst:.2} (limit 3) over alpha, beta, P_B, P_C for both schemes; {secs:.2} s (limit 10)"),
    )
}

/// Rate-control closed-form minimum vs 10^5-point threshold grid, 5x5 grid.
fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    let mut tau_consistent = true;
    for p_r in [0.0, 5.0, 10.0, 20.0, 30.0] {
        let link = link_with(10.0, p_r);
        for q in [0.01, 0.05, 0.1, 0.5, 2.0] {
            let scheme = SchemeConfig::RateControl { q };
            let d = min_detection_error(&link, &scheme).unwrap();
            let rad = Radiometer::new(&link, &scheme).unwrap();
            tau_consistent &= (rad.xi(d.tau_star) - d.xi_star).abs() <= 1e-12;
            let (_, grid) = grid_min_xi(&link, &scheme, 100_000);
            // the closed form may only be below the grid minimum by round-off
            worst = worst.max((grid - d.xi_star).abs());
        }
    }
    verdict(
        worst <= 1e-6 && tau_consistent,
        format!(
            "max |xi* - grid min| = {worst:.2e} (limit 1e-6); xi(tau*) == xi*: {tau_consistent}"
        ),
    )
}

/// Power-control Ei closed form vs quadrature on a 10x10 grid; Ei(-1).
fn criterion_3() -> Verdict {
    let mut worst = 0.0f64;
    for p_r_db in linspace(0.0, 30.0, 10) {
        let link = link_with(10.0, p_r_db);
        let cap = covert_power_bound(&link.params, &link.consts)
            .min(link.params.p_r_max / (link.consts.mu + 1.0));
        for frac in linspace(0.05, 0.95, 10) {
            let p_delta = frac * cap;
            let closed = effective_rate(&link, &SchemeConfig::PowerControl { p_delta })
                .unwrap()
                .r_c;
            let quad = quadrature_rate_oracle(&link, p_delta).unwrap();
            worst = worst.max((closed - quad).abs() / quad.abs());
        }
    }
    let ei = exp_integral(-1.0).unwrap();
    let ei_err = (ei + 0.219383934).abs();
    verdict(
        worst <= 1e-6 && ei_err <= 1e-9,
        format!("max relative diff = {worst:.2e} (limit 1e-6); Ei(-1) = {ei:.12} (|err| {ei_err:.1e}, limit 1e-9)"),
    )
}

/// Rate-control xi* at P_r^max = 60 dB vs the limit; the limit and Q^eps values.
fn criterion_4() -> Verdict {
    let base = baseline_link();
    let huge = link_with(10.0, 60.0);
    let mut worst = 0.0f64;
    for q in [0.01, 0.1, 1.0, 10.0] {
        let xi = min_detection_error(&huge, &SchemeConfig::RateControl { q })
            .unwrap()
            .xi_star;
        worst = worst.max((xi - asymptotics(&base, q).unwrap().xi_limit).abs());
    }
    let a = asymptotics(&base, 0.1).unwrap();
    let limit_ok = (a.xi_limit - 0.44727).abs() < 5e-6;
    let q_ok = (a.q_epsilon - 0.075).abs() <= 1e-15;
    verdict(
        worst <= 1e-3 && limit_ok && q_ok,
        format!(
            "max |xi*(60 dB) - limit| = {worst:.2e} (limit 1e-3); limit(Q=0.1) = {:.6}; Q_eps = {}",
            a.xi_limit, a.q_epsilon
        ),
    )
}

/// P_delta just above and below the detectability bound.
fn criterion_5() -> Verdict {
    let link = baseline_link();
    let bound = covert_power_bound(&link.params, &link.consts);
    let above = min_detection_error(&link, &SchemeConfig::PowerControl { p_delta: 0.64 }).unwrap();
    let below = min_detection_error(&link, &SchemeConfig::PowerControl { p_delta: 0.63 }).unwrap();
    verdict(
        above.xi_star == 0.0 && below.xi_star > 0.0,
        format!(
            "P_delta^u = {bound:.6}; xi*(0.64) = {}; xi*(0.63) = {:.3e}",
            above.xi_star, below.xi_star
        ),
    )
}

fn scenario(name: &str) -> covert_relay::expcli::ScenarioFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name);
    runner::load(&path).unwrap()
}

/// Rows of `column` grouped by (series value, scheme) in file order.
fn curves(out: &RunOutput, series: &str, column: &str) -> Vec<(f64, String, Vec<f64>)> {
    let t: &Table = &out.table;
    let keys = t.numbers(series);
    let schemes = t.texts("scheme");
    let ys = t.numbers(column);
    let mut result: Vec<(f64, String, Vec<f64>)> = Vec::new();
    for i in 0..ys.len() {
        let key = keys[i].unwrap();
        let y = ys[i].unwrap();
        match result
            .iter_mut()
            .find(|(k, s, _)| *k == key && *s == schemes[i])
        {
            Some(c) => c.2.push(y),
            None => result.push((key, schemes[i].clone(), vec![y])),
        }
    }
    result
}

fn nondecreasing(ys: &[f64]) -> bool {
    ys.windows(2).all(|w| w[1] >= w[0] - 1e-12)
}

fn unimodal(ys: &[f64]) -> bool {
    let peak = ys
        .iter()
        .enumerate()
        .fold(0, |best, (i, &y)| if y > ys[best] { i } else { best });
    nondecreasing(&ys[..=peak]) && ys[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

/// Crossover in dB where the rate-control curve overtakes power-control for
/// good: the last sign change of the difference, linearly interpolated.
fn crossover(xs: &[f64], rate: &[f64], power: &[f64]) -> Option<f64> {
    let d: Vec<f64> = rate.iter().zip(power).map(|(r, p)| r - p).collect();
    let last_nonpositive = d.iter().rposition(|&v| v <= 0.0)?;
    if last_nonpositive + 1 >= d.len() {
        return None;
    }
    let (i, j) = (last_nonpositive, last_nonpositive + 1);
    Some(xs[i] + (xs[j] - xs[i]) * (-d[i]) / (d[j] - d[i]))
}

/// Figure trends from the shipped scenarios, each run < 60 s.
fn criterion_6() -> Verdict {
    let opts = RunOptions::default();
    let mut notes = Vec::new();
    let mut pass = true;
    let limit = Duration::from_secs(60);

    for name in ["fig2a.scn", "fig3a.scn"] {
        let (out, t) = timed(|| runner::sweep(&scenario(name), &opts).unwrap());
        let ok = curves(&out, "sigma_d_sq_db", "xi_star")
            .iter()
            .all(|(_, _, ys)| ys.len() == 31 && nondecreasing(ys));
        pass &= ok && t < limit;
        notes.push(format!("{name}: monotone={ok} {:.1}s", t.as_secs_f64()));
    }

    for name in ["fig2b.scn", "fig3b.scn"] {
        let sc = scenario(name);
        let primary = sc.series.as_ref().unwrap().values[0];
        let (out, t) = timed(|| runner::sweep(&sc, &opts).unwrap());
        let cs = curves(&out, "sigma_d_sq_db", "xi_star");
        let shapes = cs.iter().all(|(_, _, ys)| unimodal(ys));
        let (_, _, ys) = cs.iter().find(|(k, _, _)| *k == primary).unwrap();
        let (first, last) = (ys[0], *ys.last().unwrap());
        let ok = shapes && first < 0.05 && last < 0.05;
        pass &= ok && t < limit;
        notes.push(format!(
            "{name}: unimodal={shapes} endpoints({primary} dB)={first:.4},{last:.4} {:.1}s",
            t.as_secs_f64()
        ));
    }

    {
        let sc = scenario("fig4.scn");
        let primary = sc.p_s_db;
        let (out, t) = timed(|| runner::optimize(&sc).unwrap());
        let cs = curves(&out, "p_s_db", "r_c_star");
        let xs = sc.sweep.unwrap().values();
        let pick = |s: &str| {
            &cs.iter()
                .find(|(k, n, _)| *k == primary && n == s)
                .unwrap()
                .2
        };
        let x = crossover(&xs, pick("rate"), pick("power"));
        let ok = x.is_some_and(|x| (10.0..=16.0).contains(&x));
        pass &= ok && t < limit;
        notes.push(format!(
            "fig4 (P_s = {primary} dB): crossover={} {:.1}s",
            x.map_or("none".into(), |x| format!("{x:.2} dB")),
            t.as_secs_f64()
        ));
    }

    {
        let (out, t) = timed(|| runner::average(&scenario("fig5.scn"), 1000, 1).unwrap());
        let cs = curves(&out, "p_r_max_db", "r_c_star_mean");
        let vanish = cs.iter().all(|(_, _, ys)| {
            let peak = ys.iter().cloned().fold(0.0, f64::max);
            peak > 0.0 && ys[0] <= 0.05 * peak && *ys.last().unwrap() <= 0.05 * peak
        });
        let dominate = ["rate", "power"].iter().all(|s| {
            let low = &cs.iter().find(|(k, n, _)| *k == 10.0 && n == s).unwrap().2;
            let high = &cs.iter().find(|(k, n, _)| *k == 20.0 && n == s).unwrap().2;
            low.iter().zip(high.iter()).all(|(l, h)| h >= l)
        });
        pass &= vanish && dominate && t < limit;
        notes.push(format!(
            "fig5: vanishing={vanish} 20dB>=10dB={dominate} {:.1}s",
            t.as_secs_f64()
        ));
    }
    verdict(pass, notes.join("; "))
}

/// Property checks on seeded random operating points, optimizer vs brute
/// force, and bit-identical reruns.
fn criterion_7() -> Verdict {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut uniform = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut checked = 0;
    let mut violations = Vec::new();
    while checked < 500 {
        let params = SystemParams {
            p_s: db_to_linear(25.0 * uniform()),
            p_r_max: db_to_linear(30.0 * uniform()),
            sigma_r_sq: db_to_linear(20.0 * uniform() - 10.0),
            sigma_d_sq: db_to_linear(20.0 * uniform() - 10.0),
            sigma_s_sq: db_to_linear(20.0 * uniform() - 10.0),
            r_sd: 0.1 + 1.4 * uniform(),
            epsilon: 0.1,
        };
        let Ok(link) = Link::new(params, 0.2 + 4.8 * uniform(), 0.2 + 4.8 * uniform()) else {
            continue;
        };
        let cap = covert_power_bound(&link.params, &link.consts)
            .min(link.params.p_r_max / (link.consts.mu + 1.0));
        let scheme = if uniform() < 0.5 {
            SchemeConfig::RateControl {
                q: 10f64.powf(-3.0 + 4.0 * uniform()),
            }
        } else {
            SchemeConfig::PowerControl {
                p_delta: 0.999 * cap * uniform(),
            }
        };
        checked += 1;
        let rad = Radiometer::new(&link, &scheme).unwrap();
        let span = rad
            .breakpoints
            .rho1
            .max(rad.breakpoints.miss_end())
            .min(1e6)
            * 1.2;
        let taus = linspace(0.0, span, 200);
        if !taus
            .windows(2)
            .all(|w| rad.alpha(w[0]) >= rad.alpha(w[1]) && rad.beta(w[0]) <= rad.beta(w[1]))
        {
            violations.push("alpha/beta monotonicity");
        }
        let d = min_detection_error(&link, &scheme).unwrap();
        if d.xi_star > d.omega.min(1.0 - d.omega) + 1e-12 {
            violations.push("xi* <= min(omega, 1 - omega)");
        }
        let p = link.probs(&scheme).unwrap();
        if p.p_c > p.p_b + 1e-15 {
            violations.push("P_C <= P_B");
        }
        let r = effective_rate(&link, &scheme).unwrap().r_c;
        let r0 = effective_rate(&link, &scheme.with_covert_parameter(0.0))
            .unwrap()
            .r_c;
        if r < 0.0 || r0 != 0.0 {
            violations.push("R_c >= 0, R_c(0) = 0");
        }
    }

    let mut brute_worst = f64::NEG_INFINITY;
    for (p_s, p_r) in [(10.0, 10.0), (7.0, 13.0), (10.0, 25.0)] {
        let link = link_with(p_s, p_r);
        for rate in [true, false] {
            let template = if rate { RATE } else { POWER };
            for region in [FeasibleRegion::Lower, FeasibleRegion::All] {
                let opt = maximize(&link, &template, region).map_or(0.0, |o| o.r_c);
                if let Some(brute) = common::brute_optimum(&link, rate, region, 2000) {
                    brute_worst = brute_worst.max((brute - opt) / opt);
                }
            }
        }
    }
    if brute_worst > 1e-3 {
        violations.push("optimizer beaten by brute force by > 0.1%");
    }

    let sc = scenario("baseline.scn");
    let opts = RunOptions {
        trials: 100_000,
        seed: 3,
        verify: true,
    };
    let csv_in = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| runner::verify(&sc, &opts).unwrap().table.to_csv())
    };
    let identical = csv_in(1) == csv_in(4) && csv_in(1) == csv_in(2);
    if !identical {
        violations.push("bit-identical reruns");
    }

    violations.dedup();
    verdict(
        violations.is_empty(),
        format!(
            "{checked} random points; brute-force margin {:+.2e} (limit 1e-3); reruns identical at 1/2/4 threads: {identical}{}",
            brute_worst,
            if violations.is_empty() {
                String::new()
            } else {
                format!("; violated: {}", violations.join(", "))
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("closed form vs Monte Carlo", criterion_1),
        ("rate-control optimum vs grid", criterion_2),
        ("power-control rate vs quadrature", criterion_3),
        ("asymptotic consistency", criterion_4),
        ("detectability boundary", criterion_5),
        ("figure trends", criterion_6),
        ("property suite", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
