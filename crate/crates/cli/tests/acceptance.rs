//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so that the report is always printed.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{Signed, Zero};

use rootcert::certify::{
    check_dual_round_trip, control_rays, expand_coefficients, scaling_trials,
    verify_inverse_gramm_positive, verify_weight_bound, weight_bound_cone, weight_bound_configs,
    Certificate, Dropped,
};
use rootcert::exact::{dot, frac, int, unit_vec, Rational};
use rootcert::parabolic::sweep_lemmas;
use rootcert::roots::{
    catalogue_with_products, check_2d_identity, irreducible_catalogue, parabolic_character,
    RootSet, RootSystem, SystemSpec, WeightTable,
};
use rootcert::sim::{selections, SelectionModel};

type Check = Result<String, String>;

fn build(spec: &SystemSpec) -> Result<(RootSystem, WeightTable), String> {
    let rs = RootSystem::build(spec).map_err(|e| format!("{spec}: {e}"))?;
    let wt = WeightTable::new(&rs).map_err(|e| format!("{spec}: {e}"))?;
    Ok((rs, wt))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// The irreducible systems A1-A8, B2-B8, C2-C8, D3-D8, E6-E8, F4, G2.
fn matrix_catalogue() -> Vec<SystemSpec> {
    irreducible_catalogue(8)
}

fn inverse_gramm_positive() -> Check {
    let systems = matrix_catalogue();
    for spec in &systems {
        let (rs, _) = build(spec)?;
        ensure(verify_inverse_gramm_positive(&rs).map_err(|e| e.to_string())?, || {
            format!("{spec}: nonpositive entry")
        })?;
    }
    Ok(format!("{} systems", systems.len()))
}

fn identity_and_round_trip() -> Check {
    let mut roots = 0;
    for spec in &matrix_catalogue() {
        let (rs, wt) = build(spec)?;
        for a in 0..rs.rank() {
            // (a,a) d_a + sum_{b != a} (a,b) d_b = 1, recomputed here
            let lhs: Rational = (0..rs.rank())
                .map(|b| rs.gramm().get(a, b) * &wt.d()[b])
                .sum();
            ensure(lhs == int(1), || format!("{spec} root {}: sum is {lhs}", a + 1))?;
            let lib = check_2d_identity(&rs, &wt, a).map_err(|e| e.to_string())?
                && check_dual_round_trip(&rs, &wt, a).map_err(|e| e.to_string())?;
            ensure(lib, || format!("{spec} root {}", a + 1))?;
            roots += 1;
        }
    }
    Ok(format!("{roots} roots"))
}

fn expansion_signs() -> Check {
    let mut count = 0;
    let systems = catalogue_with_products(6);
    for spec in &systems {
        let (rs, wt) = build(spec)?;
        for (a, i) in weight_bound_configs(&rs) {
            let e = expand_coefficients(&rs, &wt, a, i).map_err(|e| format!("{spec}: {e}"))?;
            ensure(e.reconstruct(&wt) == unit_vec(rs.rank(), a), || {
                format!("{spec} root {} {i:?}: reconstruction", a + 1)
            })?;
            let bad = (0..rs.rank()).find(|&d| d != a && e.coeffs[d].is_positive());
            ensure(bad.is_none(), || format!("{spec} root {} {i:?}: positive c", a + 1))?;
            count += 1;
        }
    }
    Ok(format!("{count} (system, alpha, I) over {} systems", systems.len()))
}

fn two_routes() -> Check {
    let mut count = 0;
    let mut max_rays = 0;
    for spec in &irreducible_catalogue(5) {
        let (rs, wt) = build(spec)?;
        for (a, i) in weight_bound_configs(&rs) {
            let cone = weight_bound_cone(&rs, &wt, a, i).map_err(|e| e.to_string())?;
            let out = verify_weight_bound(&rs, &wt, a, i).map_err(|e| format!("{spec}: {e}"))?;
            out.constructive.validate(&cone).map_err(|e| format!("{spec}: {e}"))?;
            out.rays.validate(&cone).map_err(|e| format!("{spec}: {e}"))?;
            match &out.rays {
                Certificate::RayConfirmation { rays, min_objective, .. } => {
                    ensure(min_objective.as_ref().is_none_or(|m| !m.is_negative()), || {
                        format!("{spec} root {} {i:?}: negative ray", a + 1)
                    })?;
                    max_rays = max_rays.max(rays.len());
                }
                other => return Err(format!("{spec} root {} {i:?}: {}", a + 1, other.kind())),
            }
            ensure(out.constructive.confirms() && out.agree(), || {
                format!("{spec} root {} {i:?}: routes", a + 1)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} configurations, up to {max_rays} rays"))
}

fn controls() -> Check {
    let families = [
        ("orderings", Dropped::AllOrderings),
        ("nonnegativity", Dropped::Nonnegative),
    ];
    let mut found = Vec::new();
    for (name, drop) in families {
        let mut hits = 0;
        for s in ["A2", "A3"] {
            let rs = RootSystem::parse(s).unwrap();
            let wt = WeightTable::new(&rs).unwrap();
            for (a, i) in weight_bound_configs(&rs) {
                let c = control_rays(&rs, &wt, a, i, drop).map_err(|e| e.to_string())?;
                hits += usize::from(matches!(c, Certificate::ViolatingRay { .. }));
            }
        }
        ensure(hits > 0, || format!("dropping {name} gives no violation"))?;
        found.push(format!("{name}: {hits}"));
    }
    // A2, alpha_1, I empty, orderings dropped: (alpha_1, alpha_2) = (0, 1)
    // stays in the cone and alpha_1 - w̄_1 = -1/3 there
    let rs = RootSystem::parse("A2").unwrap();
    let wt = WeightTable::new(&rs).unwrap();
    let cone = weight_bound_cone(&rs, &wt, 0, RootSet::EMPTY)
        .unwrap()
        .without(|c| Dropped::AllOrderings.matches(c));
    let p = vec![int(0), int(1)];
    ensure(cone.contains(&p), || "(0, 1) left the weakened cone".into())?;
    let value = dot(&cone.objective, &p);
    ensure(value == frac(-1, 3), || format!("objective {value}"))?;
    // the same value on an actual ray: nonnegativity dropped for alpha_1,
    // I = {alpha_2} leaves the line alpha_2 = 0
    let c = control_rays(&rs, &wt, 0, RootSet::singleton(1), Dropped::Nonnegative)
        .map_err(|e| e.to_string())?;
    match c {
        Certificate::ViolatingRay { ray, objective } => {
            ensure(ray == vec![int(-1), int(0)] && objective == frac(-1, 3), || {
                format!("ray {ray:?} with {objective}")
            })?
        }
        other => return Err(format!("expected a violating ray, got {}", other.kind())),
    }
    Ok(format!("violations with {}; A2 ray value -1/3", found.join(", ")))
}

fn parabolic_lemmas() -> Check {
    let names = ["inclusion", "torus-splitting", "trivial-weight", "disconnected-root"];
    let mut total = 0;
    let systems = catalogue_with_products(5);
    for spec in &systems {
        let (rs, _) = build(spec)?;
        for t in sweep_lemmas(&rs, false).map_err(|e| format!("{spec}: {e}"))? {
            ensure(t.passed(), || format!("{spec} {}: {:?}", t.name, t.first_failure))?;
            if names.contains(&t.name) {
                total += t.checked;
            }
        }
    }
    Ok(format!("{total} tuples over {} systems", systems.len()))
}

fn character() -> Check {
    let mut count = 0;
    let systems = catalogue_with_products(8);
    for spec in &systems {
        let (rs, _) = build(spec)?;
        for a in 0..rs.rank() {
            let (sum, lambda) = parabolic_character(&rs, a).map_err(|e| format!("{spec}: {e}"))?;
            // proportional to w_a iff (sum, b) = 0 for every b != a
            let pairings = rs.gramm().mul_vec(&sum).map_err(|e| e.to_string())?;
            let ok = lambda.is_positive()
                && pairings[a].is_positive()
                && (0..rs.rank()).all(|b| b == a || pairings[b].is_zero());
            ensure(ok, || format!("{spec} root {}", a + 1))?;
            count += 1;
        }
    }
    Ok(format!("{count} roots over {} systems", systems.len()))
}

fn scaling() -> Check {
    let systems = catalogue_with_products(8);
    for (k, spec) in systems.iter().enumerate() {
        let (rs, _) = build(spec)?;
        ensure(scaling_trials(&rs, 100, k as u64).map_err(|e| e.to_string())?, || {
            format!("{spec}: w̄ changed")
        })?;
    }
    Ok(format!("100 rescalings of each of {} systems", systems.len()))
}

fn simulation() -> Check {
    const SEEDS: u64 = 1000;
    const HORIZON: u64 = 16;
    let mut traces = 0u64;
    let mut selections_run = 0;
    for spec in &catalogue_with_products(4) {
        let rs = Arc::new(RootSystem::build(spec).map_err(|e| e.to_string())?);
        for sel in selections(rs.rank(), rs.rank()) {
            let model = SelectionModel::new(rs.clone(), &sel).map_err(|e| format!("{spec} {sel:?}: {e}"))?;
            for seed in 0..SEEDS {
                let trace = model.sample(seed, HORIZON);
                let report = model
                    .check_trace(&trace)
                    .map_err(|e| format!("{spec} {sel:?} seed {seed}: {e}"))?;
                ensure(report.induction.len() + 1 == sel.len(), || "depths".into())?;
                traces += 1;
            }
            selections_run += 1;
        }
    }
    // the naive A2 trace t = (1, 1) is outside the scale cone, which is
    // spanned by rays with t_1 >= 3/2 t_2, so no ray combination reaches it
    let rs = Arc::new(RootSystem::parse("A2").unwrap());
    let model = SelectionModel::new(rs, &[0, 1]).unwrap();
    let ok = model.rays().iter().all(|r| &r[0] * int(2) >= &r[1] * int(3))
        && model.trace_from_scales(&[int(1), int(1)], HORIZON).is_err()
        && (0..SEEDS).all(|s| {
            let t = model.sample(s, HORIZON).scales();
            t[0] != t[1]
        });
    ensure(ok, || "naive A2 trace reachable".into())?;
    Ok(format!("{traces} traces over {selections_run} selections"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_rootcert"))
            .args(["simulate", "--max-rank", "3", "--seed", "7", "--seeds", "3", "--horizon", "12"])
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("exit {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "reports differ".into())?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("inverse Gramm matrix positive", 5, inverse_gramm_positive),
        ("dual-weight identity and round trip", 5, identity_and_round_trip),
        ("expansion reproduces alpha with nonpositive coefficients", 120, expansion_signs),
        ("two routes confirm alpha >= w̄_alpha", 600, two_routes),
        ("dropped hypotheses give violating rays", 10, controls),
        ("parabolic subspace lemmas", 300, parabolic_lemmas),
        ("positive-root sum proportional to w_alpha", 30, character),
        ("w̄ invariant under rescaling", 30, scaling),
        ("simulated traces diverge and replay", 300, simulation),
        ("simulate is byte-identical across runs", 60, determinism),
    ];
    let filter: Option<usize> = std::env::args()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let n = k + 1;
        if filter.is_some_and(|x| x != n) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(*limit);
        let (status, detail) = match &result {
            Ok(d) if !slow => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over the {limit} s budget")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {status}: {name} ({detail}; {:.2} s)",
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
