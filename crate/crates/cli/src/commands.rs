use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

use lewiskit::conditions::{check_condition, correspondence_test, format_conditions, pairing_table, parse_conditions, ConditionError};
use lewiskit::fixtures::{check_example_dir, FixtureError};
use lewiskit::formula::{atoms, normalize, parse, Formula, ParseError};
use lewiskit::ipc::{ipc_decide, IpcError, IpcVerdict};
use lewiskit::kripke::{forces, frame_refutation, parse_model, to_dot, write_model, KripkeError, Model, WorldSet};
use lewiskit::logics::{check_proof, parse_proof, LogicError, ProofParseError, Registry};
use lewiskit::nnil::{build_table, star, star_classes, NnilError};
use lewiskit::search::{find_countermodel, SearchError, SearchOptions, SearchOutcome};

use crate::report::Report;
use crate::{Command, DotArg, IpcCommand, NnilCommand};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    ProofParse(#[from] ProofParseError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Ipc(#[from] IpcError),
    #[error(transparent)]
    Nnil(#[from] NnilError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

type Outcome = Result<bool, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn formula(text: &str) -> Result<Formula, CliError> {
    Ok(normalize(&parse(text)?))
}

fn load_model(path: &Path) -> Result<Model, CliError> {
    Ok(parse_model(&read(path)?)?)
}

fn world_list(m: &Model, set: WorldSet) -> String {
    (0..m.frame().len())
        .filter(|&w| set >> w & 1 == 1)
        .map(|w| m.names()[w].clone())
        .collect::<Vec<_>>()
        .join(" ")
}

fn dump_model(r: &mut Report, m: &Model) {
    r.text(write_model(m));
}

fn export(dot: &DotArg, m: &Model) -> Result<(), CliError> {
    match &dot.dot {
        Some(path) => write(path, &to_dot(m)),
        None => Ok(()),
    }
}

/// The logic named by a `// logic: NAME` line, if any.
fn header_logic(text: &str) -> Option<&str> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix("// logic:"))
        .map(str::trim)
}

pub fn run(cmd: Command, r: &mut Report) -> Outcome {
    let reg = Registry::standard();
    match cmd {
        Command::Parse { formula: text } => {
            let f = parse(&text)?;
            let n = normalize(&f);
            let atoms: Vec<String> = atoms(&n).into_iter().collect();
            r.text(n.to_string());
            r.text(format!("size {} depth {} atoms {}", n.size(), n.depth(), atoms.join(",")));
            r.record(&[
                ("formula", &n.to_string()),
                ("size", &n.size().to_string()),
                ("depth", &n.depth().to_string()),
                ("atoms", &atoms.join(",")),
                ("modal", &n.is_modal().to_string()),
            ]);
            Ok(true)
        }
        Command::ModelCheck {
            model,
            formula: text,
            world,
            dot,
        } => {
            let m = load_model(&model)?;
            let f = formula(&text)?;
            export(&dot, &m)?;
            let truth = m.truth_set(&f);
            match world {
                Some(name) => {
                    let w = m
                        .world_named(&name)
                        .ok_or_else(|| CliError::Usage(format!("no world {name:?}")))?;
                    let yes = forces(&m, w, &f);
                    r.text(if yes { "forced" } else { "not forced" });
                    r.record(&[("world", &name), ("formula", &f.to_string()), ("forced", &yes.to_string())]);
                    Ok(yes)
                }
                None => {
                    let all = m.frame().worlds();
                    let yes = truth == all;
                    r.text(if yes { "valid in the model" } else { "not valid in the model" });
                    r.text(format!("forced at: {}", world_list(&m, truth)));
                    r.record(&[
                        ("formula", &f.to_string()),
                        ("valid", &yes.to_string()),
                        ("forced_at", &world_list(&m, truth)),
                    ]);
                    Ok(yes)
                }
            }
        }
        Command::FrameCheck { model, formula: text, dot } => {
            let m = load_model(&model)?;
            let f = formula(&text)?;
            match frame_refutation(m.frame(), &f) {
                None => {
                    r.text("valid on the frame");
                    r.record(&[("formula", &f.to_string()), ("valid", "true")]);
                    export(&dot, &m)?;
                    Ok(true)
                }
                Some((val, fails)) => {
                    let cm = Model::with_names(m.frame().clone(), val, m.names().to_vec())?;
                    r.text(format!("refuted at: {}", world_list(&cm, fails)));
                    dump_model(r, &cm);
                    r.record(&[
                        ("formula", &f.to_string()),
                        ("valid", "false"),
                        ("refuted_at", &world_list(&cm, fails)),
                        ("model", &write_model(&cm)),
                    ]);
                    export(&dot, &cm)?;
                    Ok(false)
                }
            }
        }
        Command::Condition { model, conds } => {
            let m = load_model(&model)?;
            let conds = parse_conditions(&conds)?;
            let mut all = true;
            for c in conds {
                let holds = check_condition(m.frame(), c);
                all &= holds;
                r.text(format!("{}: {}", c.name(), if holds { "holds" } else { "fails" }));
                r.record(&[("condition", c.name()), ("holds", &holds.to_string())]);
            }
            Ok(all)
        }
        Command::Correspond { axioms, max_n } => {
            let rows = pairing_table();
            for a in &axioms {
                if !rows.iter().any(|p| &p.axiom == a) {
                    return Err(CliError::Usage(format!("{a} is not in the pairing table")));
                }
            }
            let mut all = true;
            for row in rows.iter().filter(|p| axioms.is_empty() || axioms.contains(&p.axiom)) {
                let scheme = reg.scheme(&row.axiom)?;
                let rep = correspondence_test(&row.conditions, &scheme.template, max_n)?;
                let conds = format_conditions(&row.conditions);
                all &= rep.passed();
                r.text(format!(
                    "{conds} <-> {}: {} ({} frames)",
                    row.axiom,
                    if rep.passed() { "pass" } else { "FAIL" },
                    rep.frames_checked
                ));
                r.record(&[
                    ("conditions", &conds),
                    ("axiom", &row.axiom),
                    ("passed", &rep.passed().to_string()),
                    ("frames", &rep.frames_checked.to_string()),
                ]);
                if let Some(cx) = rep.counterexample {
                    let m = Model::new(cx.frame, Default::default())?;
                    r.text(format!(
                        "condition holds: {}, axiom valid: {}",
                        cx.condition_holds, cx.axiom_valid
                    ));
                    dump_model(r, &m);
                }
            }
            Ok(all)
        }
        Command::Prove { file, logic } => {
            let text = read(&file)?;
            let name = logic
                .as_deref()
                .or_else(|| header_logic(&text))
                .ok_or_else(|| CliError::Usage("no --logic given and no `// logic:` header".into()))?
                .to_string();
            let logic = reg.logic(&name)?;
            let proof = parse_proof(&text, reg)?;
            let verdict = check_proof(reg, &logic, &proof);
            match &verdict {
                Ok(()) => r.text(format!("accepted in {name}: {} ({} steps)", proof.goal, proof.steps.len())),
                Err(e) => r.text(format!("rejected in {name}: {e}")),
            }
            let reason = verdict.as_ref().err().map(ToString::to_string).unwrap_or_default();
            r.record(&[
                ("logic", &name),
                ("goal", &proof.goal.to_string()),
                ("steps", &proof.steps.len().to_string()),
                ("accepted", &verdict.is_ok().to_string()),
                ("reason", &reason),
            ]);
            Ok(verdict.is_ok())
        }
        Command::Search {
            formula: text,
            conds,
            logic,
            max_n,
            workers,
            reduced,
            dot,
        } => {
            let f = formula(&text)?;
            let mut conds = match (conds, logic) {
                (Some(c), _) => parse_conditions(&c)?,
                (None, Some(l)) => {
                    let logic = reg.logic(&l)?;
                    logic.class.ok_or(LogicError::NoClass(l))?
                }
                (None, None) => Vec::new(),
            };
            conds.sort();
            conds.dedup();
            let opts = SearchOptions {
                max_n,
                workers: workers.max(1),
                reduced,
                ..SearchOptions::default()
            };
            let class = format_conditions(&conds);
            match find_countermodel(&f, &conds, &opts)? {
                SearchOutcome::Found(c) => {
                    let world = c.model.names()[c.world].clone();
                    r.text(format!("countermodel found over {class}, refuting at world {world}"));
                    dump_model(r, &c.model);
                    r.record(&[
                        ("formula", &f.to_string()),
                        ("conditions", &class),
                        ("found", "true"),
                        ("world", &world),
                        ("model", &write_model(&c.model)),
                    ]);
                    export(&dot, &c.model)?;
                    Ok(true)
                }
                SearchOutcome::NotFound { max_n, frames_checked } => {
                    r.text(format!(
                        "no countermodel over {class} with at most {max_n} worlds ({frames_checked} frames)"
                    ));
                    r.record(&[
                        ("formula", &f.to_string()),
                        ("conditions", &class),
                        ("found", "false"),
                        ("max_n", &max_n.to_string()),
                        ("frames", &frames_checked.to_string()),
                    ]);
                    Ok(false)
                }
            }
        }
        Command::Ipc {
            command: IpcCommand::Prove {
                formula: text,
                max_n,
                dot,
            },
        } => {
            let f = formula(&text)?;
            match ipc_decide(&f, max_n)? {
                IpcVerdict::Provable => {
                    r.text("provable");
                    r.record(&[("formula", &f.to_string()), ("provable", "true")]);
                    Ok(true)
                }
                IpcVerdict::Unprovable(cm) => {
                    r.text("not provable");
                    let mut fields = vec![("formula", f.to_string()), ("provable", "false".into())];
                    if let Some((m, _)) = &cm {
                        dump_model(r, m);
                        fields.push(("model", write_model(m)));
                        export(&dot, m)?;
                    }
                    let borrowed: Vec<(&str, &str)> = fields.iter().map(|(k, v)| (*k, v.as_str())).collect();
                    r.record(&borrowed);
                    Ok(false)
                }
            }
        }
        Command::Nnil {
            command: NnilCommand::Star { formula: text, vars },
        } => {
            let f = formula(&text)?;
            let vars: BTreeSet<String> = match vars {
                Some(v) => v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
                None => atoms(&f),
            };
            let table = build_table(&vars)?;
            let s = star(&f, &table)?;
            let classes = star_classes(&f, &table)?;
            r.text(format!("star: {s}"));
            r.text(format!("{} of {} classes imply the formula:", classes.len(), table.len()));
            for &i in &classes {
                r.text(format!("  {}", table.representatives[i]));
            }
            let reps: Vec<String> = classes.iter().map(|&i| table.representatives[i].to_string()).collect();
            r.record(&[
                ("formula", &f.to_string()),
                ("star", &s.to_string()),
                ("classes", &classes.len().to_string()),
                ("table", &table.len().to_string()),
                ("implying", &reps.join(" ; ")),
            ]);
            Ok(true)
        }
        Command::Fixtures { dir } => fixtures(reg, &dir, r),
    }
}

fn fixtures(reg: &Registry, dir: &Path, r: &mut Report) -> Outcome {
    let mut all = true;
    for rep in check_example_dir(reg, &dir.join("examples"))? {
        let ok = rep.passed();
        all &= ok;
        let mut detail = Vec::new();
        if let Err(e) = &rep.witness {
            detail.push(e.to_string());
        }
        if !rep.unexpectedly_held.is_empty() {
            detail.push(format!("frame satisfies {}", format_conditions(&rep.unexpectedly_held)));
        }
        if !rep.rediscovered {
            detail.push(format!("search found nothing within {} worlds", rep.worlds));
        }
        r.text(format!(
            "example {}: {}{}",
            rep.name,
            if ok { "pass" } else { "FAIL" },
            if detail.is_empty() { String::new() } else { format!(" ({})", detail.join("; ")) }
        ));
        r.record(&[("kind", "example"), ("name", &rep.name), ("passed", &ok.to_string()), ("detail", &detail.join("; "))]);
    }
    let proofs = dir.join("proofs");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&proofs)
        .map_err(|source| CliError::Io {
            path: proofs.clone(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    files.sort();
    for path in files {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let text = read(&path)?;
        let verdict = match header_logic(&text) {
            None => Err("missing `// logic:` header".to_string()),
            Some(l) => reg
                .logic(l)
                .map_err(|e| e.to_string())
                .and_then(|logic| {
                    let proof = parse_proof(&text, reg).map_err(|e| e.to_string())?;
                    check_proof(reg, &logic, &proof).map_err(|e| e.to_string())
                }),
        };
        all &= verdict.is_ok();
        match &verdict {
            Ok(()) => r.text(format!("proof {name}: pass")),
            Err(e) => r.text(format!("proof {name}: FAIL ({e})")),
        }
        let detail = verdict.err().unwrap_or_default();
        r.record(&[("kind", "proof"), ("name", &name), ("passed", &detail.is_empty().to_string()), ("detail", &detail)]);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header() {
        assert_eq!(header_logic("// logic: iA0\ngoal: #t"), Some("iA0"));
        assert_eq!(header_logic("goal: #t"), None);
    }
}
