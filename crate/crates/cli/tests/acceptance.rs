//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use dirac_barrier::closedform::{barrier_kinematics, barrier_momentum, nudge_off_singular, scatter};
use dirac_barrier::matcher::{solve_profile, PotentialProfile};
use dirac_barrier::resonance::{
    analytic_resonances, is_supercritical, scan_bands, sub_barrier_resonances, supercritical_scalar_strengths,
    transmission_bands_refined,
};
use dirac_barrier::{evanescent_band, klein_zone, validate_config, BarrierConfig, EnergyGrid, EnergyInterval};
use dirac_barrier_cli::input::Input;
use dirac_barrier_cli::{make_grid, oracle_check, resonance_table};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cfg(v: f64, s: f64, a: f64) -> BarrierConfig {
    BarrierConfig { v, s, a, m: 1.0 }
}

fn threshold_configs() -> [BarrierConfig; 3] {
    let root = (4.0 - PI * PI / 4.0).sqrt();
    [cfg(3.0, -3.0, 2.0), cfg(3.0, -1.0 + root, 2.0), cfg(3.0, -1.0 - root, 2.0)]
}

fn klein_configs() -> [BarrierConfig; 2] {
    [cfg(4.0, -2.5, 2.0), cfg(5.0, -2.0, 2.0)]
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Random configurations shared by the unitarity and branch criteria.
fn random_configs() -> Vec<BarrierConfig> {
    let mut rng = StdRng::seed_from_u64(0x5eed_2008);
    (0..20)
        .map(|_| cfg(rng.gen_range(0.0..=6.0), rng.gen_range(-6.0..=4.0), rng.gen_range(0.5..=4.0)))
        .collect()
}

fn unitarity_grid() -> EnergyGrid {
    EnergyGrid::new(1.0 + 1e-6, 10.0, 10_000).unwrap()
}

fn reference_resonances() -> Outcome {
    let columns: [(&str, BarrierConfig, &[f64]); 5] = [
        ("S=-V", threshold_configs()[0], &[1.0, 5.5431086, 6.7241918, 8.1192392, 9.5938166]),
        ("S=S+", threshold_configs()[1], &[1.0, 5.0, 6.3767149, 7.8722899, 9.4039844]),
        ("S=S-", threshold_configs()[2], &[1.0, 1.3404935, 5.0, 6.3767149, 7.8722899, 9.4039844]),
        ("V=4,S=-2.5", klein_configs()[0], &[1.6, 1.8280421, 6.1719579, 7.4813222, 8.9453625]),
        ("V=5,S=-2", klein_configs()[1], &[1.7030917, 2.5, 3.1379041, 6.8620959, 8.2969083, 9.8173239]),
    ];
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, c, expected) in columns {
        let table = resonance_table(&c, 10.0);
        if table.len() != expected.len() {
            failures.push(format!("{name}: {} energies, expected {}", table.len(), expected.len()));
            continue;
        }
        for (row, &want) in table.iter().zip(expected) {
            count += 1;
            let dev = (row.resonance.energy - want).abs();
            worst = worst.max(dev);
            if dev > 1e-6 || !row.confirmed {
                failures.push(format!("{name}: {} vs {want} (confirmed={})", row.resonance.energy, row.confirmed));
            }
        }
    }
    outcome(failures.is_empty(), format!("{count} values, max deviation {worst:.1e}; {}", failures.join("; ")))
}

fn zero_momentum() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, c) in ["S=-V", "S=S+", "S=S-"].iter().zip(threshold_configs()) {
        let check = is_supercritical(&c).unwrap();
        let pass = check.supercritical && check.is_monotone() && check.final_t2() >= 0.99;
        ok &= pass;
        parts.push(format!("{name} T2={:.6}", check.final_t2()));
    }
    for (name, c) in ["V=4,S=-2.5", "V=5,S=-2"].iter().zip(klein_configs()) {
        let check = is_supercritical(&c).unwrap();
        let pass = !check.supercritical && check.final_t2() <= 0.01;
        ok &= pass;
        parts.push(format!("{name} T2={:.1e}", check.final_t2()));
    }
    outcome(ok, parts.join(", "))
}

fn unitarity() -> Outcome {
    let grid = unitarity_grid();
    let mut worst: f64 = 0.0;
    for c in random_configs() {
        for e in grid.energies() {
            let (e, _) = nudge_off_singular(&c, e);
            match scatter(&c, e) {
                Ok(res) => worst = worst.max((res.coef_r + res.coef_t - 1.0).abs()),
                Err(err) => return outcome(false, format!("{c:?} at {e}: {err}")),
            }
        }
    }
    outcome(worst <= 1e-10, format!("20 configs x 1e4 points, max |1-(R2+T2)| = {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let configs = [
        // S > −m
        cfg(3.0, 0.0, 2.0),
        cfg(4.0, 1.5, 1.0),
        cfg(5.0, -0.5, 3.0),
        threshold_configs()[1],
        // S < −m
        klein_configs()[0],
        klein_configs()[1],
        threshold_configs()[2],
        cfg(2.0, -5.0, 0.7),
        // S = −V
        threshold_configs()[0],
        cfg(5.0, -5.0, 1.5),
        cfg(1.5, -1.5, 4.0),
        // free
        cfg(0.0, 0.0, 1.0),
    ];
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for c in configs {
        let (c, diag) = validate_config(c).unwrap();
        let grid = make_grid(c.m, None, 10.0, 1000).unwrap();
        let report = oracle_check(&Input::Barrier(c, diag), &grid).unwrap();
        let dev = report.max_delta_sum.unwrap();
        worst = worst.max(dev);
        ok &= dev <= 1e-8;
    }
    outcome(ok, format!("{} configs x 1e3 points, max |dR|+|dT| = {worst:.1e}", configs.len()))
}

fn mu_band() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c, e0) in [("V=4,S=-2.5", klein_configs()[0], 1.6), ("V=5,S=-2", klein_configs()[1], 2.5)] {
        let band = evanescent_band(&c);
        let n = 1000;
        let mut inside: f64 = 0.0;
        for i in 0..n {
            let e = band.lo + band.width() * (i + 1) as f64 / (n + 1) as f64;
            let mu = barrier_kinematics(&c, e).unwrap().mu;
            inside = inside.max((mu.norm_sqr() - 1.0).abs());
        }
        let mut outside_max: f64 = 0.0;
        for e in make_grid(1.0, None, 10.0, 1000).unwrap().energies() {
            if band.contains(e) {
                continue;
            }
            outside_max = outside_max.max(barrier_kinematics(&c, e).unwrap().mu.norm());
        }
        let at_e0 = barrier_kinematics(&c, e0).unwrap().mu.norm();
        ok &= inside <= 1e-12 && outside_max < 1.0 && at_e0 <= 1e-10;
        parts.push(format!("{name}: inside dev {inside:.1e}, outside max|mu| {outside_max:.6}, |mu({e0})| {at_e0:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

/// The compact amplitudes evaluated literally for a chosen sign of `p`.
fn compact_form(c: &BarrierConfig, e: f64, p: Complex64) -> (Complex64, Complex64) {
    let k = (e * e - c.m * c.m).sqrt();
    let ig = I * ((e - c.m) / (e + c.m)).sqrt();
    let alpha = p / (c.m + e - c.v_minus());
    let mu = (ig - alpha) / (ig + alpha);
    let e2 = (2.0 * p * c.a).exp();
    let den = 1.0 - e2 * mu * mu;
    let r = mu * (1.0 - e2) / den;
    let t = (c.a * (p - I * k)).exp() * 4.0 * ig * alpha / ((ig + alpha) * (ig + alpha)) / den;
    (r, t)
}

/// The α form (above V) or the β = 1/α form (below V), both evaluated at
/// every energy.
fn dual_form(c: &BarrierConfig, e: f64, use_beta: bool) -> (Complex64, Complex64) {
    let k = (e * e - c.m * c.m).sqrt();
    let ig = I * ((e - c.m) / (e + c.m)).sqrt();
    let p = barrier_momentum(c, e);
    let e2 = (2.0 * p * c.a).exp();
    let (ratio, t_num) = if use_beta {
        let beta = p / (c.m - e + c.v_plus());
        ((ig * beta - 1.0) / (ig * beta + 1.0), 4.0 * ig * beta / ((ig * beta + 1.0) * (ig * beta + 1.0)))
    } else {
        let alpha = p / (c.m + e - c.v_minus());
        ((ig - alpha) / (ig + alpha), 4.0 * ig * alpha / ((ig + alpha) * (ig + alpha)))
    };
    let den = 1.0 - e2 * ratio * ratio;
    (ratio * (1.0 - e2) / den, (c.a * (p - I * k)).exp() * t_num / den)
}

fn branch_invariance() -> Outcome {
    let grid = unitarity_grid();
    let mut worst_branch: f64 = 0.0;
    let mut worst_dual: f64 = 0.0;
    let mut where_branch = String::new();
    let mut where_dual = String::new();
    for c in random_configs() {
        for e in grid.energies() {
            let (e, _) = nudge_off_singular(&c, e);
            let lib = scatter(&c, e).unwrap();
            let scale = lib.r.norm().max(lib.t.norm());
            let p = barrier_momentum(&c, e);
            let track = |(r, t): (Complex64, Complex64), worst: &mut f64, at: &mut String| {
                let dev = ((r - lib.r).norm().max((t - lib.t).norm())) / scale;
                let dev = if dev.is_nan() { f64::INFINITY } else { dev };
                if dev > *worst {
                    *worst = dev;
                    *at = format!("V={:.3} S={:.3} a={:.3} e={e:.6}", c.v, c.s, c.a);
                }
            };
            track(compact_form(&c, e, p), &mut worst_branch, &mut where_branch);
            track(compact_form(&c, e, -p), &mut worst_branch, &mut where_branch);
            track(dual_form(&c, e, false), &mut worst_dual, &mut where_dual);
            track(dual_form(&c, e, true), &mut worst_dual, &mut where_dual);
        }
    }
    outcome(
        worst_branch <= 1e-12 && worst_dual <= 1e-12,
        format!("p->-p max rel {worst_branch:.1e} ({where_branch}); dual forms max rel {worst_dual:.1e} ({where_dual})"),
    )
}

fn klein_band() -> Outcome {
    const BISECTIONS: u32 = 50;
    let grid = EnergyGrid::new(1.0, 10.0, 9000).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in ["V=4,S=-2.5", "V=5,S=-2"].iter().zip(klein_configs()) {
        let zone = klein_zone(&c).unwrap();
        let resonances = sub_barrier_resonances(&c, &analytic_resonances(&c, 10.0));
        let bands = transmission_bands_refined(&c, &grid, 0.9, BISECTIONS).unwrap();
        let Some(band) = bands.iter().find(|b| b.in_klein_zone) else {
            ok = false;
            parts.push(format!("{name}: no band inside {zone:?}"));
            continue;
        };
        let b = band.interval;
        let span = resonances.last().unwrap() - resonances.first().unwrap();
        let covers = resonances.iter().all(|&e| b.contains(e));

        let profile = PotentialProfile::single_barrier(&c);
        let oracle = scan_bands(|e| Ok(solve_profile(&profile, e)?.coef_t()), &grid, 0.9, BISECTIONS).unwrap();
        let matched: Option<EnergyInterval> =
            oracle.iter().map(|(i, _)| *i).find(|i| (i.lo - b.lo).abs() < 1e-3 && (i.hi - b.hi).abs() < 1e-3);
        let edge_dev = matched.map_or(f64::INFINITY, |m| (m.lo - b.lo).abs().max((m.hi - b.hi).abs()));

        let pass = !resonances.is_empty() && covers && b.width() > span && edge_dev <= 1e-8;
        ok &= pass;
        parts.push(format!(
            "{name}: band [{:.7}, {:.7}] width {:.4} > spacing {span:.4}, resonances {resonances:.7?}, matcher edge dev {edge_dev:.1e}",
            b.lo,
            b.hi,
            b.width()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn simultaneous_resonance() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for sol in supercritical_scalar_strengths(3.0, 2.0, 1.0).unwrap() {
        if sol.n == 0 {
            continue;
        }
        for &s in &sol.strengths {
            let c = cfg(3.0, s, 2.0);
            let listed = analytic_resonances(&c, 10.0).contains_energy(5.0, 1e-9);
            let r2 = scatter(&c, 5.0).unwrap().coef_r;
            ok &= listed && r2 <= 1e-10;
            parts.push(format!("n={} S={s:.7}: listed={listed} R2(5)={r2:.1e}", sol.n));
        }
    }
    ok &= !parts.is_empty();
    outcome(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 resonance table", reference_resonances),
        ("2 zero-momentum resonance", zero_momentum),
        ("3 unitarity", unitarity),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 mu-band structure", mu_band),
        ("6 branch/dual-form invariance", branch_invariance),
        ("7 Klein band", klein_band),
        ("8 simultaneous resonance", simultaneous_resonance),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {name} ({:.2} s): {}", start.elapsed().as_secs_f64(), result.detail);
        failed += usize::from(!result.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
