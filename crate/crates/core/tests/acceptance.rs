//! Exit-gate checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use plasma_skin::cli::{run_sweep, RowStatus, Scale, SweepSpec, DEFAULT_PANEL};
use plasma_skin::dispersion::lambda;
use plasma_skin::oracle::{fd_solve, fourier_impedance, OracleConfig};
use plasma_skin::solution::{
    boundary_field_residual, check_residue_identity, compute_coefficients, field_e_at, field_h, impedance,
    impedance_reduced, jump_integral_residual,
};
use plasma_skin::specfun::{erfcx, gauss_hilbert, lambda0};
use plasma_skin::spectrum::{analyze, count_zeros, count_zeros_in, SearchBox};
use plasma_skin::{make_params, Coefficients, Complex64, Params};

const RANDOM_CASES: u32 = 200;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Panel points with their coefficients; near-boundary rejects are reported and dropped.
fn panel() -> (Vec<(Params, Coefficients)>, Vec<String>) {
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for &g in &DEFAULT_PANEL {
        let p = make_params(g, 1e-3, 1e-3).expect("panel parameters");
        match compute_coefficients(&p) {
            Ok(c) => ok.push((p, c)),
            Err(e) if e.is_near_boundary() => skipped.push(format!("gamma {g}: {e}")),
            Err(e) => panic!("panel point gamma {g} failed: {e}"),
        }
    }
    (ok, skipped)
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let (pts, skipped) = panel();
    let probes = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.5), Complex64::new(-3.0, -1.5)];
    let (mut w_field, mut w_jump, mut w_res): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (p, c) in &pts {
        w_field = w_field.max(boundary_field_residual(c, p).unwrap_or(f64::INFINITY));
        w_jump = w_jump.max(jump_integral_residual(c, p).unwrap_or(f64::INFINITY));
        for z in probes {
            w_res = w_res.max(check_residue_identity(z, c, p).unwrap_or(f64::INFINITY));
        }
    }
    let elapsed = start.elapsed();
    let passed = w_field < 1e-6 && w_jump < 1e-6 && w_res < 1e-8 && elapsed < Duration::from_secs(60);
    outcome(
        passed,
        format!(
            "boundary field {w_field:.1e}, jump integral {w_jump:.1e}, residue {w_res:.1e}; {} points, {} skipped {:?}; {:.2?}",
            pts.len(),
            skipped.len(),
            skipped,
            elapsed
        ),
    )
}

fn boundary_conditions() -> Outcome {
    let (pts, _) = panel();
    let (mut w_e, mut w_spec): (f64, f64) = (0.0, 0.0);
    for (p, c) in &pts {
        w_e = w_e.max(field_e_at(0.0, c, p).map(|e| (e - 1.0).norm()).unwrap_or(f64::INFINITY));
        for mu in [0.3, 1.0, 2.2] {
            let r = field_h(0.0, mu, c, p).and_then(|hp| Ok((hp - field_h(0.0, -mu, c, p)?).norm() / hp.norm().max(1.0)));
            w_spec = w_spec.max(r.unwrap_or(f64::INFINITY));
        }
    }
    outcome(w_e < 1e-6 && w_spec < 1e-5, format!("|e(0) - 1| {w_e:.1e}, specularity {w_spec:.1e}"))
}

fn spectrum_correctness() -> Outcome {
    let mut notes = Vec::new();
    let mut passed = true;
    let mut worst: f64 = 0.0;
    for &g in &DEFAULT_PANEL {
        let p = make_params(g, 1e-3, 1e-3).expect("panel parameters");
        let s = match analyze(&p) {
            Ok(s) => s,
            Err(e) if e.is_near_boundary() => continue,
            Err(e) => {
                notes.push(format!("gamma {g}: {e}"));
                passed = false;
                continue;
            }
        };
        let n = count_zeros(&p).map(|n| n as i64).unwrap_or(-1);
        let doubled = count_zeros_in(&p, &SearchBox::for_params(&p, 2.0)).unwrap_or(-1);
        if !(s.n_zeros == 2 || s.n_zeros == 4) || n != s.n_zeros as i64 || doubled != n {
            passed = false;
            notes.push(format!("gamma {g}: N {} count {n} doubled {doubled}", s.n_zeros));
        }
        for eta in &s.zeros {
            let r = lambda(*eta, &p).map(|l| l.norm()).unwrap_or(f64::INFINITY);
            worst = worst.max(r);
            if (p.z0 / eta).re <= 0.0 {
                passed = false;
                notes.push(format!("gamma {g}: zero {eta} has Re(z0/eta) <= 0"));
            }
        }
    }
    passed &= worst < 1e-12;
    outcome(passed, format!("max |lambda(eta_k)| {worst:.1e}, N in {{2,4}} and stable under contour doubling {notes:?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut w_fourier: f64 = 0.0;
    for i in 0..10 {
        let g = 0.1 + 1.4 * i as f64 / 9.0;
        let p = make_params(g, 1e-3, 1e-3).expect("oracle parameters");
        let r = impedance(&p).and_then(|z| Ok(rel(fourier_impedance(&p, &cfg)?.z, z.z)));
        w_fourier = w_fourier.max(r.unwrap_or(f64::INFINITY));
    }
    let mut fd_ok = true;
    let mut fd_notes = Vec::new();
    for g in [1e-3, 0.5e-3, 2e-3] {
        let p = make_params(g, 1e-3, 1e-3).expect("fd parameters");
        let res = compute_coefficients(&p).and_then(|c| {
            let fd = fd_solve(&p, &cfg)?;
            let est = fd.profile.error_estimate.unwrap_or(f64::INFINITY);
            let mut sup: f64 = 0.0;
            for (x, e) in fd.profile.x_grid.iter().zip(&fd.profile.e_values).filter(|(x, _)| **x <= 5.0) {
                sup = sup.max((field_e_at(*x, &c, &p)? - e).norm());
            }
            Ok((sup, est))
        });
        match res {
            Ok((sup, est)) => {
                fd_ok &= sup <= 1e-3f64.max(3.0 * est);
                fd_notes.push(format!("{sup:.1e}/{est:.1e}"));
            }
            Err(e) => {
                fd_ok = false;
                fd_notes.push(e.to_string());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        w_fourier < 1e-6 && fd_ok && elapsed < Duration::from_secs(300),
        format!("Fourier max rel {w_fourier:.1e}; FD sup/estimate {fd_notes:?}; {elapsed:.2?}"),
    )
}

fn resonance_sweep() -> Outcome {
    let start = Instant::now();
    let spec = SweepSpec { gamma_start: 0.9, gamma_end: 1.1, n_points: 401, scale: Scale::Linear, epsilon: 1e-3, v_c: 1e-3 };
    let rows = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let rows: Vec<_> = rows.into_iter().filter(|r| r.status == RowStatus::Ok).collect();
    let g: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    let m: Vec<f64> = rows.iter().map(|r| r.abs_Z0.expect("ok row")).collect();
    let arg: Vec<f64> = rows.iter().map(|r| r.arg_Z0.expect("ok row")).collect();
    let n = m.len();
    let maxima: Vec<usize> = (1..n.saturating_sub(1)).filter(|&i| m[i] > m[i - 1] && m[i] > m[i + 1]).collect();
    let Some((ipk, _)) = m.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return outcome(false, "no ok rows".into());
    };
    let peak_g = g[ipk];
    let unique = maxima == vec![ipk];
    // shoulder: the largest |Z0| at least 0.05 away from the peak
    let shoulder = (0..n).filter(|&i| (g[i] - peak_g).abs() >= 0.05).map(|i| m[i]).fold(0.0, f64::max);
    let ratio = m[ipk] / shoulder;
    // unwrapped argument inside the window around the peak
    let mut unwrapped = Vec::new();
    for i in (0..n).filter(|&i| (g[i] - peak_g).abs() <= 0.05) {
        let mut a = arg[i];
        if let Some(&prev) = unwrapped.last() {
            let prev: f64 = prev;
            while a - prev > PI {
                a -= 2.0 * PI;
            }
            while a - prev < -PI {
                a += 2.0 * PI;
            }
        }
        unwrapped.push(a);
    }
    let swing = unwrapped.iter().cloned().fold(f64::MIN, f64::max) - unwrapped.iter().cloned().fold(f64::MAX, f64::min);
    let elapsed = start.elapsed();
    let passed = n == 401 && unique && (peak_g - 1.0).abs() < 0.05 && ratio > 3.0 && swing > 1.0 && elapsed < Duration::from_secs(120);
    outcome(
        passed,
        format!(
            "{n} ok rows, {} interior maxima, peak |Z0| {:.4e} at gamma {peak_g:.4}, peak/shoulder {ratio:.2}, arg swing {swing:.3} rad; {elapsed:.2?}",
            maxima.len(),
            m[ipk]
        ),
    )
}

fn run_random<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: RANDOM_CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn special_functions() -> Outcome {
    let sp = PI.sqrt();
    let schwarz = run_random((-20.0f64..20.0, 1e-3f64..20.0), |(x, y)| {
        let z = Complex64::new(x, y);
        let r = rel(gauss_hilbert(z.conj()).unwrap(), gauss_hilbert(z).unwrap().conj());
        prop_assert!(r < 1e-12, "z {z}: {r:e}");
        Ok(())
    });
    let sokhotskii = run_random(-2.5f64..2.5, |mu| {
        let d = 1e-6;
        let jump = gauss_hilbert(Complex64::new(mu, d)).unwrap() - gauss_hilbert(Complex64::new(mu, -d)).unwrap();
        let r = rel(jump, Complex64::new(0.0, 2.0 * sp * (-mu * mu).exp()));
        prop_assert!(r < 1e-4, "mu {mu}: {r:e}");
        Ok(())
    });
    let axis = run_random(1e-3f64..30.0, |tau| {
        let l = lambda0(Complex64::new(0.0, tau)).unwrap();
        prop_assert!(l.im.abs() < 1e-13 * l.norm().max(1.0), "tau {tau}: {l}");
        // t(iτ) = i√π erfcx(τ)
        let t = gauss_hilbert(Complex64::new(0.0, tau)).unwrap();
        let want = sp * erfcx(tau).unwrap();
        prop_assert!(t.re.abs() < 1e-13 * want && (t.im - want).abs() < 1e-13 * want, "tau {tau}: {t}");
        Ok(())
    });
    let results = [("Schwarz reflection", schwarz), ("Sokhotskii jump", sokhotskii), ("imaginary axis", axis)];
    let passed = results.iter().all(|(_, r)| r.is_ok());
    let detail = results
        .iter()
        .map(|(n, r)| match r {
            Ok(()) => format!("{n} ok"),
            Err(e) => format!("{n} failed: {e}"),
        })
        .collect::<Vec<_>>()
        .join(", ");
    outcome(passed, format!("{RANDOM_CASES} random cases each: {detail}"))
}

fn dual_form() -> Outcome {
    let (pts, _) = panel();
    let mut worst: f64 = 0.0;
    for (p, _) in &pts {
        let r = impedance(p).and_then(|a| Ok(rel(impedance_reduced(p)?.z, a.z)));
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    outcome(worst < 1e-9, format!("max relative difference {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("identity suite", identity_suite),
        ("boundary conditions", boundary_conditions),
        ("spectrum correctness", spectrum_correctness),
        ("oracle equivalence", oracle_equivalence),
        ("resonance sweep shape", resonance_sweep),
        ("special-function floor", special_functions),
        ("dual-form impedance", dual_form),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.passed);
        println!("{} {}. {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
