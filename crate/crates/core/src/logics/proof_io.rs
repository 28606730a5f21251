//! Line-based proof files.
//!
//! ```text
//! goal: p -> #t
//! 1. ax top {}
//! 2. ax K {?phi=#t, ?psi=p}
//! 3. mp 1 2
//! ```
//!
//! Steps are numbered from 1. A step may end in `=> formula` to state its conclusion;
//! otherwise the conclusion is computed from the rule.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Justification, Proof, Registry, Step};
use crate::formula::{normalize, parse, Binding, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ProofParseError {
    pub line: usize,
    pub msg: String,
}

fn formula(line: usize, text: &str) -> Result<Formula, ProofParseError> {
    parse(text.trim())
        .map(|f| normalize(&f))
        .map_err(|e| ProofParseError {
            line,
            msg: e.to_string(),
        })
}

fn parse_binding(line: usize, text: &str) -> Result<Binding, ProofParseError> {
    let err = |msg: String| ProofParseError { line, msg };
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err("binding must be enclosed in braces".into()))?;
    let mut out = Binding::new();
    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| err(format!("expected ?name=formula, found {item:?}")))?;
        let key = k
            .trim()
            .strip_prefix('?')
            .ok_or_else(|| err(format!("metavariable {k:?} must start with ?")))?;
        if out.insert(key.to_string(), formula(line, v)?).is_some() {
            return Err(err(format!("?{key} bound twice")));
        }
    }
    Ok(out)
}

fn index(line: usize, tok: Option<&str>) -> Result<usize, ProofParseError> {
    let tok = tok.ok_or(ProofParseError {
        line,
        msg: "missing step index".into(),
    })?;
    match tok.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k - 1),
        _ => Err(ProofParseError {
            line,
            msg: format!("bad step index {tok:?}"),
        }),
    }
}

/// Parses a proof file. Conclusions not stated explicitly are computed using `reg`.
pub fn parse_proof(text: &str, reg: &Registry) -> Result<Proof, ProofParseError> {
    let mut goal = None;
    let mut steps: Vec<Step> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let err = |msg: String| ProofParseError { line: line_no, msg };
        if let Some(g) = line.strip_prefix("goal:") {
            if goal.is_some() {
                return Err(err("duplicate goal".into()));
            }
            goal = Some(formula(line_no, g)?);
            continue;
        }
        let (num, rest) = line
            .split_once('.')
            .ok_or_else(|| err("expected `k. rule ...`".into()))?;
        let k = index(line_no, Some(num.trim()))?;
        if k != steps.len() {
            return Err(err(format!("step {} out of sequence", k + 1)));
        }
        let (body, stated) = match rest.split_once("=>") {
            Some((b, c)) => (b.trim(), Some(formula(line_no, c)?)),
            None => (rest.trim(), None),
        };
        let (rule, args) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let just = match rule {
            "ax" => {
                let args = args.trim();
                let (name, binding) = match args.find('{') {
                    Some(pos) => (args[..pos].trim(), parse_binding(line_no, &args[pos..])?),
                    None => (args, Binding::new()),
                };
                if name.is_empty() {
                    return Err(err("missing scheme name".into()));
                }
                Justification::Axiom {
                    scheme: name.to_string(),
                    binding,
                }
            }
            "mp" => {
                let mut it = args.split_whitespace();
                let a = index(line_no, it.next())?;
                let b = index(line_no, it.next())?;
                if it.next().is_some() {
                    return Err(err("mp takes two indices".into()));
                }
                Justification::Mp(a, b)
            }
            "nec" => {
                let mut it = args.split_whitespace();
                let a = index(line_no, it.next())?;
                if it.next().is_some() {
                    return Err(err("nec takes one index".into()));
                }
                Justification::Nec(a)
            }
            other => return Err(err(format!("unknown rule {other:?}"))),
        };
        let conclusion = match stated {
            Some(c) => c,
            None => infer(&just, &steps, reg).ok_or_else(|| {
                err("cannot compute the conclusion; state it with `=> formula`".into())
            })?,
        };
        steps.push(Step { just, conclusion });
    }
    let goal = goal.ok_or(ProofParseError {
        line: 0,
        msg: "missing `goal:` line".into(),
    })?;
    Ok(Proof { goal, steps })
}

fn infer(just: &Justification, steps: &[Step], reg: &Registry) -> Option<Formula> {
    match just {
        Justification::Axiom { scheme, binding } => reg.instance(scheme, binding).ok(),
        Justification::Mp(_, b) => match &steps.get(*b)?.conclusion {
            Formula::Imp(_, r) => Some((**r).clone()),
            _ => None,
        },
        Justification::Nec(a) => match &steps.get(*a)?.conclusion {
            Formula::Imp(l, r) => Some(Formula::Strictif(l.clone(), r.clone())),
            _ => None,
        },
    }
}

/// Renders a proof; with `conclusions` every step carries an explicit `=> formula`.
pub fn write_proof(proof: &Proof, conclusions: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "goal: {}", proof.goal);
    for (i, step) in proof.steps.iter().enumerate() {
        let _ = write!(out, "{}. ", i + 1);
        match &step.just {
            Justification::Axiom { scheme, binding } => {
                let items: Vec<String> = binding.iter().map(|(k, v)| format!("?{k}={v}")).collect();
                let _ = write!(out, "ax {scheme} {{{}}}", items.join(", "));
            }
            Justification::Mp(a, b) => {
                let _ = write!(out, "mp {} {}", a + 1, b + 1);
            }
            Justification::Nec(a) => {
                let _ = write!(out, "nec {}", a + 1);
            }
        }
        if conclusions {
            let _ = write!(out, " => {}", step.conclusion);
        }
        out.push('\n');
    }
    out
}
