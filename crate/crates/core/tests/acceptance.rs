//! One pass/fail line per acceptance criterion. Runs without the libtest harness so the
//! lines appear in plain `cargo test` output.

mod common;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lewiskit::conditions::{check_condition, correspondence_test, format_conditions, pairing_table, ConditionId};
use lewiskit::fixtures::{check_example_dir, parse_manifest};
use lewiskit::formula::{normalize, parse, Formula};
use lewiskit::ipc::{ipc_equiv, ipc_proves, poset_countermodel, Prover};
use lewiskit::kripke::{frame_validates, is_frame, parse_model, persistence_holds, write_model, Preframe};
use lewiskit::logics::replay::library;
use lewiskit::logics::{soundness_spotcheck, Registry};
use lewiskit::nnil::{build_table, is_nnil, star, NnilClassTable};
use lewiskit::search::{enumerate_frames, find_countermodel, posets, SearchOptions};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/examples")
}

fn within(start: Instant, limit: Duration, detail: String) -> Verdict {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{detail}; {took:.1?}"))
    }
}

fn frames_and_persistence() -> Verdict {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=3 {
        for up in posets(n) {
            for bits in 0u64..(1 << (n * n)) {
                let succ = (0..n).map(|k| (bits >> (k * n)) & ((1 << n) - 1)).collect();
                let p = Preframe::from_masks(up.clone(), succ).map_err(|e| e.to_string())?;
                if is_frame(&p) != persistence_holds(&p) {
                    return Err(format!("disagreement on {p:?}"));
                }
                count += 1;
            }
        }
    }
    within(start, Duration::from_secs(10), format!("{count} labeled preframes"))
}

fn brilliancy() -> Verdict {
    let start = Instant::now();
    let f = |s: &str| normalize(&parse(s).unwrap());
    let a = f("(p /\\ q) ~> r -> p ~> (q -> r)");
    let b = f("q ~> r -> #t ~> (q -> r)");
    let conv = f("p ~> (q -> r) -> (p /\\ q) ~> r");
    let mut count = 0;
    for n in 1..=3 {
        for fr in enumerate_frames(n, &[]).map_err(|e| e.to_string())? {
            let br = check_condition(&fr, ConditionId::Brilliant);
            if br != frame_validates(&fr, &a) || br != frame_validates(&fr, &b) || !frame_validates(&fr, &conv) {
                return Err(format!("disagreement on {fr:?}"));
            }
            count += 1;
        }
    }
    within(start, Duration::from_secs(60), format!("{count} frames"))
}

fn correspondence() -> Verdict {
    let reg = Registry::standard();
    let rows = pairing_table();
    for row in &rows {
        let scheme = reg.scheme(&row.axiom).map_err(|e| e.to_string())?;
        let r = correspondence_test(&row.conditions, &scheme.template, 3).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("{} / {}", format_conditions(&row.conditions), row.axiom));
        }
    }
    Ok(format!("{} rows at max_n=3", rows.len()))
}

fn replay() -> Verdict {
    let start = Instant::now();
    let reg = Registry::standard();
    let mut spot = 0;
    for fx in library() {
        fx.derive(reg).map_err(|e| format!("{}: {e}", fx.name))?;
        let logic = reg.logic(fx.logic).map_err(|e| e.to_string())?;
        if logic.class.is_some() {
            let r = soundness_spotcheck(&logic, &fx.goal(), 4).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("{} refuted in its class", fx.name));
            }
            spot += 1;
        }
    }
    let b = parse("([]p -> []q) -> [](p -> q)").unwrap();
    let km = reg.logic("KM.lin_box").map_err(|e| e.to_string())?;
    if !soundness_spotcheck(&km, &b, 4).map_err(|e| e.to_string())?.passed() {
        return Err("admitted kmlin_b assumption fails on KM.lin_box frames".into());
    }
    Ok(format!(
        "{} proofs checked, {spot} spot-checked at max_n=4; {:.1?}",
        library().len(),
        start.elapsed()
    ))
}

fn non_derivations() -> Verdict {
    let start = Instant::now();
    let reports = check_example_dir(Registry::standard(), &examples_dir()).map_err(|e| e.to_string())?;
    let bad: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("{r:?}")).collect();
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    let sections: BTreeSet<&str> = reports
        .iter()
        .filter_map(|r| r.name.strip_prefix("7_"))
        .map(|s| &s[..1])
        .collect();
    if sections.len() != 8 {
        return Err(format!("expected eight examples, found {sections:?}"));
    }
    match reports.iter().find(|r| r.name == "prel_cb_box") {
        Some(r) if r.worlds <= 3 => {}
        _ => return Err("missing witness for []#f over iPreL+CB_box".into()),
    }
    within(start, Duration::from_secs(300), format!("{} witnesses verified and rediscovered", reports.len()))
}

fn ipc_cross_validation() -> Verdict {
    let corpus = common::corpus(0x1bc, 600, 3, 4, false);
    let mut provable = 0;
    for f in &corpus {
        let proved = ipc_proves(f).map_err(|e| e.to_string())?;
        provable += proved as usize;
        if proved == common::sat_refutable(f, 8) {
            return Err(format!("disagreement on {f}"));
        }
    }
    Ok(format!("{} formulas, {provable} provable", corpus.len()))
}

fn table(vars: &[&str]) -> Result<NnilClassTable, String> {
    build_table(&vars.iter().map(|s| s.to_string()).collect()).map_err(|e| e.to_string())
}

fn nnil() -> Verdict {
    let start = Instant::now();
    let t1 = table(&["p"])?;
    if t1.len() != 5 {
        return Err(format!("{} one-variable classes", t1.len()));
    }
    let s = star(&parse("~~p").unwrap(), &t1).map_err(|e| e.to_string())?;
    if !ipc_equiv(&s, &parse("p").unwrap()).unwrap() {
        return Err(format!("star(~~p) = {s}"));
    }
    let t2 = table(&["p", "q"])?;
    let mut one = common::corpus(3, 80, 1, 4, false);
    one.extend(t1.representatives.iter().cloned());
    let mut two = common::corpus(5, 40, 2, 4, false);
    two.extend(t2.representatives.iter().step_by(8).cloned());
    for (t, corpus) in [(&t1, &one), (&t2, &two)] {
        laws(t, corpus)?;
    }
    within(
        start,
        Duration::from_secs(120),
        format!("{} and {} classes, {} corpus formulas", t1.len(), t2.len(), one.len() + two.len()),
    )
}

fn laws(t: &NnilClassTable, corpus: &[Formula]) -> Result<(), String> {
    let mut p = Prover::new();
    let mut pr = |a: &Formula, b: &Formula| p.proves(&Formula::imp(a.clone(), b.clone())).unwrap();
    let stars: Vec<Formula> = corpus.iter().map(|f| star(f, t).unwrap()).collect();
    for (f, s) in corpus.iter().zip(&stars) {
        if !pr(s, f) {
            return Err(format!("star({f}) does not imply it"));
        }
        if let Some(chi) = t.representatives.iter().find(|chi| pr(chi, f) != pr(chi, s)) {
            return Err(format!("adjunction fails for {chi} and {f}"));
        }
        if is_nnil(f).unwrap() && !(pr(s, f) && pr(f, s)) {
            return Err(format!("not idempotent on {f}"));
        }
    }
    for (i, f) in corpus.iter().enumerate() {
        for (j, g) in corpus.iter().enumerate() {
            if pr(f, g) && !pr(&stars[i], &stars[j]) {
                return Err(format!("monotonicity fails for {f} -> {g}"));
            }
        }
    }
    Ok(())
}

/// Outputs of the searching and table-building operations, with one worker.
fn transcript() -> String {
    let reg = Registry::standard();
    let mut out = String::new();
    let dir = examples_dir();
    let manifest = std::fs::read_to_string(dir.join("manifest")).unwrap();
    for e in parse_manifest(&manifest).unwrap() {
        let model = parse_model(&std::fs::read_to_string(dir.join(format!("{}.model", e.name))).unwrap()).unwrap();
        let class = reg.logic(&e.logic).unwrap().class.unwrap();
        let opts = SearchOptions {
            workers: 1,
            ..SearchOptions::with_max_n(model.frame().len())
        };
        let found = find_countermodel(&e.formula, &class, &opts).unwrap();
        let c = found.countermodel().unwrap();
        let _ = writeln!(out, "{} {}\n{}", e.name, c.world, write_model(&c.model));
    }
    for f in common::corpus(0x1bc, 100, 3, 4, false) {
        match poset_countermodel(&f, 6) {
            Some((m, w)) => {
                let _ = writeln!(out, "{f} @{w}\n{}", write_model(&m));
            }
            None => {
                let _ = writeln!(out, "{f} none");
            }
        }
    }
    for rep in table(&["p", "q"]).unwrap().representatives {
        let _ = writeln!(out, "{rep}");
    }
    out
}

fn determinism() -> Verdict {
    let a = transcript();
    let b = transcript();
    if a == b {
        Ok(format!("{} bytes identical across two runs", a.len()))
    } else {
        Err("transcripts differ".into())
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("frame condition iff persistence", frames_and_persistence),
        ("brilliancy and its schemes", brilliancy),
        ("correspondence battery", correspondence),
        ("derivation replay", replay),
        ("non-derivation battery", non_derivations),
        ("IPC cross-validation", ipc_cross_validation),
        ("NNIL approximation", nnil),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
