//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wfgcpe::analysis::{
    bound_suite, check_order, clt_diagnostic, consistency_check, counterexample_scan,
    dispersive_implies_wfgcpe_order, hr_dfr_implies_wfgcpe_order, is_dfr, prh_bound,
    simulate_estimator, OrderRelation, SimulationConfig,
};
use wfgcpe::distributions::{
    prh_expectation_terms, prh_n_step, prh_recurrence_step, prh_transform, prh_wfgcpe,
    Distribution, PrhParameter,
};
use wfgcpe::empirical::{
    empirical_wfgcpe, exact_moments_power_square, exact_moments_power_square_with,
    exact_moments_self_weight_with, exact_moments_weibull, load_dataset, Reading,
    SpacingCovariance, BLOOD_CANCER_TAG,
};
use wfgcpe::measures::{
    normalized_wfgcpe, wfgcpe, wfgcpe_by_quadrature, wfgcpe_via_fractional_integral,
    FractionalOrder, Weight,
};
use wfgcpe::parallel::Execution;
use wfgcpe::reference::{TABLE3, TABLE3_GAMMAS, TABLE4};
use wfgcpe::{Error, Result};

const GAMMAS: [f64; 5] = [0.25, 0.5, 1.0, 1.5, 2.75];

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn order(g: f64) -> FractionalOrder {
    FractionalOrder::new(g).expect("positive order")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn closed_form_battery() -> Result<Vec<(String, Distribution)>> {
    Ok(vec![
        ("power(1,2)".into(), Distribution::power(1.0, 2.0)?),
        ("power(2,3)".into(), Distribution::power(2.0, 3.0)?),
        ("frechet(1,4)".into(), Distribution::frechet(1.0, 4.0)?),
    ])
}

fn table1() -> Result<Outcome> {
    let start = Instant::now();
    let (mut worst, mut rows, mut skipped) = (0.0f64, 0, 0);
    for (_, model) in closed_form_battery()? {
        for w in [Weight::X, Weight::XSquared] {
            for g in GAMMAS {
                let closed = match model
                    .closed_form_wfgcpe(&w, g)
                    .expect("family has a closed form")
                {
                    Ok(v) => v,
                    Err(Error::Constraint(_)) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let quad = wfgcpe_by_quadrature(&model, &w, order(g))?.value;
                worst = worst.max(rel(quad, closed));
                rows += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        worst <= 1e-7 && elapsed < Duration::from_secs(5),
        format!(
            "{rows} rows ({skipped} outside constraints), max rel err {worst:.2e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    ))
}

fn table2() -> Result<Outcome> {
    let (mut worst, mut worst_unit, mut rows, mut skipped) = (0.0f64, 0.0f64, 0, 0);
    for (_, model) in closed_form_battery()? {
        for w in [Weight::X, Weight::XSquared] {
            let den = match wfgcpe_by_quadrature(&model, &w, order(1.0)) {
                Ok(r) => r.value,
                Err(_) => {
                    skipped += GAMMAS.len();
                    continue;
                }
            };
            for g in GAMMAS {
                let closed = match model
                    .closed_form_normalized(&w, g)
                    .expect("family has a closed form")
                {
                    Ok(v) => v,
                    Err(Error::Constraint(_)) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let num = wfgcpe_by_quadrature(&model, &w, order(g))?.value;
                worst = worst.max(rel(num / den.powf(g), closed));
                rows += 1;
            }
            let unit = normalized_wfgcpe(&model, &w, order(1.0))?.value;
            let ratio = wfgcpe_by_quadrature(&model, &w, order(1.0))?.value / den;
            worst_unit = worst_unit.max((unit - 1.0).abs()).max((ratio - 1.0).abs());
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6 && worst_unit <= 1e-9,
        format!("{rows} rows ({skipped} outside constraints), max rel err {worst:.2e}, |N(1) - 1| {worst_unit:.2e}"),
    ))
}

fn uniform_example() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for a in [0.0, 1.0, 3.0] {
        let model = Distribution::uniform_shifted(a)?;
        for g in [0.5, 1.0, 2.0] {
            // ∫₀¹ u^k (-ln u)^γ du = Γ(γ+1)/(k+1)^{γ+1}
            let m = |k: f64| (k + 1.0).powf(-(g + 1.0));
            let expected = [
                (Weight::One, m(1.0)),
                (Weight::X, m(2.0) + a * m(1.0)),
                (Weight::XSquared, m(3.0) + 2.0 * a * m(2.0) + a * a * m(1.0)),
            ];
            for (w, want) in expected {
                let got = wfgcpe_by_quadrature(&model, &w, order(g))?.value;
                worst = worst.max((got - want).abs() / want.max(1.0));
                checks += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-9,
        format!("{checks} checks, max err {worst:.2e}"),
    ))
}

fn table4() -> Result<Outcome> {
    let start = Instant::now();
    let model = Distribution::power(1.0, 2.0)?;
    let (mut mean_ok, mut var_ok, mut exact_var_ok) = (0, 0, 0);
    let (mut mc_mean_ok, mut mc_var_ok, mut mc_exact_ok) = (0, 0, 0);
    let mut worst_var = 0.0f64;
    for (k, cell) in TABLE4.iter().enumerate() {
        let g = order(cell.gamma);
        let published = exact_moments_power_square(cell.n, g)?;
        let exact = exact_moments_power_square_with(cell.n, g, SpacingCovariance::Exact)?;
        mean_ok += usize::from((published.mean - cell.mean).abs() <= 5e-7);
        var_ok += usize::from((published.variance - cell.variance).abs() <= 5e-7);
        exact_var_ok += usize::from((exact.variance - cell.variance).abs() <= 5e-7);
        worst_var = worst_var.max((published.variance - cell.variance).abs());

        let summary = simulate_estimator(
            &SimulationConfig {
                replicates: 100_000,
                n: cell.n,
                seed: 4_000 + k as u64,
                population: model.clone(),
                weight: Weight::X,
                gamma: g,
            },
            Execution::Parallel,
        )?;
        let se = summary.standard_error.expect("many replicates");
        let var = summary.variance.expect("many replicates");
        let var_se = summary.variance_standard_error().expect("many replicates");
        mc_mean_ok += usize::from((summary.mean - published.mean).abs() <= 3.0 * se);
        mc_var_ok += usize::from((var - published.variance).abs() <= 3.0 * var_se);
        mc_exact_ok += usize::from((var - exact.variance).abs() <= 3.0 * var_se);
    }
    let elapsed = start.elapsed();
    let total = TABLE4.len();
    Ok(Outcome::new(
        mean_ok == total
            && var_ok == total
            && mc_mean_ok == total
            && mc_var_ok == total
            && elapsed < Duration::from_secs(60),
        format!(
            "formula vs printed: means {mean_ok}/{total}, variances {var_ok}/{total} (max err {worst_var:.1e}); \
             MC within 3 SE: means {mc_mean_ok}/{total}, variances {mc_var_ok}/{total}; \
             covariance-correct variance: MC {mc_exact_ok}/{total}, printed {exact_var_ok}/{total}; {:.1}s",
            elapsed.as_secs_f64()
        ),
    ))
}

fn table3() -> Result<Outcome> {
    let mut passing = Vec::new();
    let mut summary = Vec::new();
    for reading in [Reading::Literal, Reading::Corrected] {
        let sample = load_dataset(BLOOD_CANCER_TAG, reading)?;
        let mut worst = 0.0f64;
        for (row, &g) in TABLE3.iter().zip(&TABLE3_GAMMAS) {
            for (w, &published) in [Weight::SqrtX, Weight::X, Weight::XSquared].iter().zip(row) {
                let got = empirical_wfgcpe(&sample, w, order(g))?;
                worst = worst.max(rel(got, published));
            }
        }
        summary.push(format!("{} max rel {worst:.2e}", reading.name()));
        if worst <= 0.01 {
            passing.push(reading.name());
        }
    }
    let reading = if passing.is_empty() {
        "none".to_string()
    } else {
        passing.join("+")
    };
    Ok(Outcome::new(
        !passing.is_empty(),
        format!("passing reading: {reading}; {}", summary.join(", ")),
    ))
}

fn prh() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let weights = [Weight::One, Weight::X, Weight::XSquared, Weight::SqrtX];
    let (mut worst_direct, mut worst_chain) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let base = if rng.random_bool(0.5) {
            Distribution::power(rng.random_range(0.5..3.0), rng.random_range(0.5..3.0))?
        } else {
            Distribution::uniform_shifted(rng.random_range(0.0..3.0))?
        };
        let eta = PrhParameter::new(rng.random_range(0.3..3.0))?;
        let g = rng.random_range(0.25..2.5);
        let w = &weights[rng.random_range(0..weights.len())];
        let model = prh_transform(&base, eta);
        let direct =
            |k: f64| -> Result<f64> { Ok(wfgcpe_by_quadrature(&model, w, order(g + k))?.value) };
        let terms = (0..5)
            .map(|k| prh_expectation_terms(&base, eta, w, g + k as f64))
            .collect::<Result<Vec<_>>>()?;
        let truth = (0..4)
            .map(|k| direct(k as f64))
            .collect::<Result<Vec<_>>>()?;
        let scale = |v: f64| v.abs().max(1.0);

        let via = prh_wfgcpe(&terms[0], &terms[1], eta)?;
        worst_direct = worst_direct.max((via - truth[0]).abs() / scale(truth[0]));

        let step = prh_recurrence_step(&terms[0], &terms[1], &terms[2], eta, truth[0])?;
        worst_chain = worst_chain.max((step - truth[1]).abs() / scale(truth[1]));
        for n in 1..=3u32 {
            let k = n as usize;
            let jump = prh_n_step(
                n,
                &terms[0],
                &terms[1],
                &terms[k],
                &terms[k + 1],
                eta,
                truth[0],
            )?;
            worst_chain = worst_chain.max((jump - truth[k]).abs() / scale(truth[k]));
        }
    }
    Ok(Outcome::new(
        worst_direct <= 1e-7 && worst_chain <= 1e-6,
        format!("20 draws, decomposition err {worst_direct:.2e}, recurrence/n-step err {worst_chain:.2e}"),
    ))
}

fn bridge() -> Result<Outcome> {
    let model = Distribution::power(1.0, 2.0)?;
    let mut worst = 0.0f64;
    for g in [0.5, 1.5] {
        let want = wfgcpe(&model, &Weight::X, order(g))?.value;
        let got = wfgcpe_via_fractional_integral(&model, &Weight::X, order(g))?;
        worst = worst.max(rel(got, want));
    }
    Ok(Outcome::new(
        worst <= 1e-5,
        format!("max rel err {worst:.2e}"),
    ))
}

/// Polynomial growth of ψ at infinity.
fn growth(w: &Weight) -> f64 {
    match w {
        Weight::X => 1.0,
        Weight::XSquared => 2.0,
        Weight::SqrtX => 0.5,
        _ => 0.0,
    }
}

fn bound_battery() -> Result<Outcome> {
    let mut models = Vec::new();
    for b in [1.0, 2.0] {
        for c in [0.5, 1.0, 2.0, 3.0] {
            models.push((format!("power({b},{c})"), Distribution::power(b, c)?, None));
        }
    }
    for a in [0.0, 1.0, 3.0] {
        models.push((
            format!("uniform({a})"),
            Distribution::uniform_shifted(a)?,
            None,
        ));
    }
    for (b, c) in [(1.0, 4.0), (2.0, 3.0)] {
        models.push((
            format!("frechet({b},{c})"),
            Distribution::frechet(b, c)?,
            Some(c),
        ));
    }
    let weights = [
        Weight::One,
        Weight::X,
        Weight::XSquared,
        Weight::SqrtX,
        Weight::ExpNeg,
    ];
    let (mut suites, mut checked, mut violations) = (0, 0, Vec::new());
    let mut min_slack = f64::INFINITY;
    for (name, model, frechet_c) in &models {
        for w in &weights {
            for g in GAMMAS {
                if frechet_c.is_some_and(|c| c * g <= growth(w) + 1.0) {
                    continue;
                }
                let report = bound_suite(model, w, order(g), None)?;
                suites += 1;
                checked += report.checked();
                for e in &report.entries {
                    if let Some(s) = e.slack() {
                        min_slack = min_slack.min(s);
                    }
                }
                for v in report.violations(1e-9) {
                    violations.push(format!(
                        "{name} {w:?} g={g} {}: {:?}",
                        v.id.label(),
                        v.outcome
                    ));
                }
            }
        }
    }
    for (b, c) in [(1.0, 2.0), (2.0, 0.5)] {
        let base = Distribution::power(b, c)?;
        for eta in [0.5, 2.0] {
            for g in GAMMAS {
                let e = prh_bound(&base, PrhParameter::new(eta)?, &Weight::X, order(g))?;
                checked += 1;
                min_slack = min_slack.min(e.slack().unwrap_or(f64::NEG_INFINITY));
                if !e.holds(1e-9) {
                    violations.push(format!(
                        "power({b},{c}) eta={eta} g={g} prh: {:?}",
                        e.outcome
                    ));
                }
            }
        }
    }
    let mut detail = format!(
        "{suites} suites, {checked} inequalities checked, min slack {min_slack:.2e}, {} violations",
        violations.len()
    );
    if let Some(first) = violations.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Ok(Outcome::new(violations.is_empty(), detail))
}

fn orders() -> Result<Outcome> {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    let gammas = [0.5, 1.0, 2.0];

    let uniform = Distribution::uniform_shifted(0.0)?;
    let weibull = Distribution::weibull(1.0, 2.0)?;
    let disp_pairs = [
        (
            "uniform vs 2*uniform",
            uniform.clone(),
            Distribution::affine(&uniform, 2.0, 0.0)?,
        ),
        (
            "weibull vs 1.5*weibull+1",
            weibull.clone(),
            Distribution::affine(&weibull, 1.5, 1.0)?,
        ),
    ];
    for (name, m1, m2) in &disp_pairs {
        for w in [Weight::X, Weight::SqrtX, Weight::XSquared] {
            for g in gammas {
                checks += 1;
                match dispersive_implies_wfgcpe_order(m1, m2, &w, order(g)) {
                    Ok(c) if c.holds => {}
                    other => failures.push(format!("disp {name} {w:?} g={g}: {other:?}")),
                }
            }
        }
    }

    let hr_pairs = [
        (
            "exp(2) vs exp(0.5)",
            Distribution::weibull(2.0, 1.0)?,
            Distribution::weibull(0.5, 1.0)?,
        ),
        (
            "weibull(2,0.5) vs weibull(1,0.5)",
            Distribution::weibull(2.0, 0.5)?,
            Distribution::weibull(1.0, 0.5)?,
        ),
    ];
    for (name, m1, m2) in &hr_pairs {
        if !(is_dfr(m1) && is_dfr(m2)) {
            failures.push(format!("hr {name}: DFR not detected"));
        }
        for g in gammas {
            checks += 1;
            match hr_dfr_implies_wfgcpe_order(m1, m2, &Weight::X, order(g)) {
                Ok(c) if c.holds => {}
                other => failures.push(format!("hr {name} g={g}: {other:?}")),
            }
        }
    }

    let scan = counterexample_scan(&[0.5, 1.0, 2.0, 3.0, 4.0], 0.5, 2.5)?;
    let found = scan.sign_changes.iter().find(|c| {
        let m1 = Distribution::power(1.0, c.c1).expect("valid");
        let m2 = Distribution::power(1.0, c.c2).expect("valid");
        check_order(&m1, &m2, OrderRelation::St, 512).holds_on_grid()
    });
    let witness = match found {
        Some(c) => format!(
            "c1={} c2={}: diff {:+.3e} at g=0.5, {:+.3e} at g=2.5",
            c.c1, c.c2, c.diff_low, c.diff_high
        ),
        None => {
            failures.push("no st-ordered sign change in the scan".into());
            "none".into()
        }
    };
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{checks} implication checks, {} failures; counterexample {witness} ({} of {} pairs); {:.2}s",
        failures.len(),
        scan.sign_changes.len(),
        scan.pairs_scanned,
        elapsed.as_secs_f64()
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Ok(Outcome::new(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        detail,
    ))
}

fn clt() -> Result<Outcome> {
    let n = 500;
    let g = order(1.0);
    let weibull = Distribution::weibull(1.0, 2.0)?;
    let uniform = Distribution::uniform_shifted(0.0)?;
    let self_weight = Weight::self_density(&uniform);
    let cases = [
        (
            "weibull/x",
            weibull.clone(),
            Weight::X,
            exact_moments_weibull(n, g, 1.0)?,
        ),
        (
            "self-weight",
            uniform.clone(),
            self_weight.clone(),
            exact_moments_self_weight_with(n, g, SpacingCovariance::Exact)?,
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, (name, population, weight, moments)) in cases.into_iter().enumerate() {
        let config = SimulationConfig {
            replicates: 2000,
            n,
            seed: 77 + k as u64,
            population,
            weight,
            gamma: g,
        };
        let r = clt_diagnostic(&config, Execution::Parallel, Some(moments))?;
        pass &= r.passed == Some(true);
        parts.push(format!(
            "{name} KS {:.4} < {:.4}",
            r.ks_distance, r.threshold
        ));
    }
    for (name, population, weight) in [
        ("weibull/x", weibull, Weight::X),
        ("self-weight", uniform, self_weight),
    ] {
        let c = consistency_check(
            &population,
            &weight,
            g,
            &[100, 1_000, 10_000],
            200,
            91,
            Execution::Parallel,
        )?;
        pass &= c.monotone_decreasing;
        let errs: Vec<String> = c.median_errors.iter().map(|e| format!("{e:.2e}")).collect();
        parts.push(format!("{name} median err {}", errs.join(" > ")));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("closed forms vs quadrature", table1),
        ("normalized closed forms", table2),
        ("shifted uniform example", uniform_example),
        ("estimator moments table", table4),
        ("blood cancer table", table3),
        ("proportional reversed hazard identities", prh),
        ("fractional integral bridge", bridge),
        ("bound battery", bound_battery),
        ("ordering properties", orders),
        ("CLT and consistency", clt),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        failed += usize::from(!outcome.pass);
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {}", i + 1, outcome.detail);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
