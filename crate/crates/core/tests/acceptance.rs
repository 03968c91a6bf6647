//! Acceptance gates. Runs without the libtest harness so every line is
//! printed; exits nonzero if any gate fails.

mod common;

use std::time::{Duration, Instant};

use obstruct_core::builtins::builtin;
use obstruct_core::geometry::{bipyramid_embedding, check_cyclic, check_system, run_suite, Suite};
use obstruct_core::ilp::{solve, verify, Limits, Verdict};
use obstruct_core::system::{build, Preset, SystemConfig};
use obstruct_core::{cells, cells_full};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Gate = Result<String, String>;

fn cell_counts() -> Gate {
    let expected = [
        ("rp2", 150),
        ("bipyramid", 48),
        ("csaszar", 322),
        ("moebius-brehm", 510),
        ("m2-10", 1136),
        ("m3-10", 1490),
    ];
    let mut slowest = Duration::ZERO;
    let mut check = |name: &str, want: usize, count: &dyn Fn() -> usize| -> Result<(), String> {
        let t = Instant::now();
        let got = count();
        slowest = slowest.max(t.elapsed());
        if got != want {
            return Err(format!("{name}: {got} cells, expected {want}"));
        }
        if t.elapsed() >= Duration::from_secs(1) {
            return Err(format!("{name}: took {:?}", t.elapsed()));
        }
        Ok(())
    };
    for (name, want) in expected {
        let k = builtin(name).map_err(|e| e.to_string())?;
        check(name, want, &|| cells(&k, 2).len())?;
    }
    check("full 9-vertex", 1764, &|| cells_full(8, 2, 3).len())?;
    Ok(format!("7 complexes, slowest {slowest:?}"))
}

fn verdicts() -> Gate {
    let cases = [
        ("rp2", Preset::Novik, false),
        ("rp2", Preset::Minimal, false),
        ("bipyramid", Preset::Full, true),
        ("csaszar", Preset::Full, true),
        ("moebius-brehm", Preset::Minimal, false),
    ];
    let mut out = Vec::new();
    for (name, preset, feasible) in cases {
        let k = builtin(name).map_err(|e| e.to_string())?;
        let model = build(&k, 3, SystemConfig::new(preset)).map_err(|e| e.to_string())?;
        let limits = Limits { time: Some(Duration::from_secs(600)), ..Default::default() };
        let t = Instant::now();
        let sol = solve(&model, limits).map_err(|e| e.to_string())?;
        let ok = match &sol.verdict {
            Verdict::Feasible(a) => feasible && verify(&model, a).map_err(|e| e.to_string())?,
            Verdict::Infeasible => !feasible,
            Verdict::Timeout(_) => false,
        };
        if !ok {
            return Err(format!("{name} {preset}: {}", sol.verdict.label()));
        }
        out.push(format!("{name}/{preset} {} {:?}", sol.verdict.label(), t.elapsed()));
    }
    Ok(out.join(", "))
}

fn cyclic_oracle() -> Gate {
    let t = Instant::now();
    let mut checks = 0;
    for m in [2, 3] {
        let (violations, n) = check_cyclic(8, m).map_err(|e| e.to_string())?;
        if let Some(v) = violations.first() {
            return Err(format!("m={m}: {} violations, first {v}", violations.len()));
        }
        checks += n;
    }
    if t.elapsed() >= Duration::from_secs(60) {
        return Err(format!("took {:?}", t.elapsed()));
    }
    Ok(format!("{checks} cells, {:?}", t.elapsed()))
}

fn property_suite(suite: Suite, limit: Option<Duration>) -> Gate {
    let t = Instant::now();
    let mut summary = Vec::new();
    for (n, m, trials, seed) in [(7, 2, 100, 20240), (8, 3, 50, 20241)] {
        let report = run_suite(suite, n, m, trials, seed).map_err(|e| e.to_string())?;
        if report.trials != trials {
            return Err(format!("ran {} of {trials} trials", report.trials));
        }
        if let Some(v) = report.violations.first() {
            return Err(format!("N={n} m={m}: {} violations, first {v}", report.violations.len()));
        }
        summary.push(format!("N={n} m={m}: {trials} pairs, {} checks", report.checks));
    }
    if let Some(limit) = limit.filter(|l| t.elapsed() >= *l) {
        return Err(format!("took {:?}, limit {limit:?}", t.elapsed()));
    }
    Ok(format!("{}, {:?}", summary.join("; "), t.elapsed()))
}

fn bipyramid_soundness() -> Gate {
    let k = builtin("bipyramid").map_err(|e| e.to_string())?;
    let (violations, rows) = check_system(&k, &bipyramid_embedding(), 3).map_err(|e| e.to_string())?;
    if let Some(v) = violations.first() {
        return Err(format!("{} violations, first {v}", violations.len()));
    }
    Ok(format!("{rows} rows and variables hold"))
}

fn solver_vs_brute_force() -> Gate {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..500 {
        let model = common::random_model(&mut rng);
        let reference = common::brute_force(&model);
        let sol = solve(&model, Limits::default()).map_err(|e| e.to_string())?;
        match (&sol.verdict, &reference) {
            (Verdict::Feasible(a), Some(_)) => {
                if !verify(&model, a).map_err(|e| e.to_string())? {
                    return Err(format!("model {i}: assignment fails verify"));
                }
                feasible += 1;
            }
            (Verdict::Infeasible, None) => infeasible += 1,
            (v, r) => return Err(format!("model {i}: solver {}, brute force feasible = {}", v.label(), r.is_some())),
        }
    }
    if t.elapsed() >= Duration::from_secs(60) {
        return Err(format!("took {:?}", t.elapsed()));
    }
    Ok(format!("{feasible} feasible, {infeasible} infeasible, {:?}", t.elapsed()))
}

fn main() {
    let gates: [(&str, fn() -> Gate); 7] = [
        ("1 cell counts", cell_counts),
        ("2 verdicts", verdicts),
        ("3 cyclic cocycle", cyclic_oracle),
        ("4 fundamental relation", || property_suite(Suite::Fundamental, Some(Duration::from_secs(600)))),
        ("5 bounds", || property_suite(Suite::Bounds, None)),
        ("6 bipyramid soundness", bipyramid_soundness),
        ("7 solver vs brute force", solver_vs_brute_force),
    ];
    let mut failed = 0;
    for (name, gate) in gates {
        match gate() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 7 acceptance gates failed");
        std::process::exit(1);
    }
    println!("all 7 acceptance gates passed");
}
