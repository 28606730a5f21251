//! Line-based model files and DOT export.
//!
//! ```text
//! # comment
//! worlds 3
//! names a b c
//! order b c
//! modal a b
//! val p: c
//! ```
//!
//! `order` lines give generators of `⪯`; worlds may be referred to by name or index.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{bit, build_preframe, members, Frame, KripkeError, Model, WorldSet};

pub fn parse_model(text: &str) -> Result<Model, KripkeError> {
    let mut n: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut order = Vec::new();
    let mut modal = Vec::new();
    let mut vals: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut pending: Vec<(usize, bool, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| KripkeError::Syntax { line: line_no, msg };
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "worlds" => {
                if n.is_some() {
                    return Err(err("duplicate `worlds` line".into()));
                }
                let count = rest
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad world count {rest:?}")))?;
                n = Some(count);
            }
            "names" => {
                names = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "order" | "modal" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err(format!("`{head}` takes two worlds")));
                }
                pending.push((line_no, head == "order", parts[0].into(), parts[1].into()));
            }
            "val" => {
                let (atom, ws) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `val ATOM: worlds...`".into()))?;
                let atom = atom.trim();
                let valid = atom.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid {
                    return Err(err(format!("bad atom name {atom:?}")));
                }
                vals.push((
                    line_no,
                    atom.to_string(),
                    ws.split_whitespace().map(str::to_string).collect(),
                ));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    let n = n.ok_or(KripkeError::Syntax {
        line: 0,
        msg: "missing `worlds` line".into(),
    })?;
    let names = match names {
        Some(ns) if ns.len() != n => {
            return Err(KripkeError::Syntax {
                line: 0,
                msg: format!("{} names given for {n} worlds", ns.len()),
            })
        }
        Some(ns) => ns,
        None => (0..n).map(|w| w.to_string()).collect(),
    };
    let resolve = |line: usize, s: &str| -> Result<usize, KripkeError> {
        names
            .iter()
            .position(|x| x == s)
            .or_else(|| s.parse::<usize>().ok().filter(|&w| w < n))
            .ok_or(KripkeError::Syntax {
                line,
                msg: format!("unknown world {s:?}"),
            })
    };
    for (line, is_order, a, b) in pending {
        let pair = (resolve(line, &a)?, resolve(line, &b)?);
        if is_order {
            order.push(pair);
        } else {
            modal.push(pair);
        }
    }
    let mut valuation = BTreeMap::new();
    for (line, atom, ws) in vals {
        let mut set: WorldSet = 0;
        for w in ws {
            set |= bit(resolve(line, &w)?);
        }
        *valuation.entry(atom).or_insert(0) |= set;
    }
    let frame = Frame::new(build_preframe(n, &order, &modal)?)?;
    Model::with_names(frame, valuation, names)
}

pub fn write_model(m: &Model) -> String {
    let fr = m.frame();
    let names = m.names();
    let mut out = String::new();
    let _ = writeln!(out, "worlds {}", fr.len());
    let default: Vec<String> = (0..fr.len()).map(|w| w.to_string()).collect();
    if names != default.as_slice() {
        let _ = writeln!(out, "names {}", names.join(" "));
    }
    for (a, b) in fr.covers() {
        let _ = writeln!(out, "order {} {}", names[a], names[b]);
    }
    for (a, b) in fr.modal_pairs() {
        let _ = writeln!(out, "modal {} {}", names[a], names[b]);
    }
    for (atom, &set) in m.valuation() {
        let ws: Vec<&str> = members(set).map(|w| names[w].as_str()).collect();
        if ws.is_empty() {
            let _ = writeln!(out, "val {atom}:");
        } else {
            let _ = writeln!(out, "val {atom}: {}", ws.join(" "));
        }
    }
    out
}

/// Graphviz rendering: solid edges for covers of `⪯`, dashed edges labelled `<` for `⊏`.
pub fn to_dot(m: &Model) -> String {
    let fr = m.frame();
    let names = m.names();
    let mut out = String::from("digraph model {\n  rankdir=BT;\n");
    for (w, name) in names.iter().enumerate() {
        let true_atoms: Vec<&str> = m
            .valuation()
            .iter()
            .filter(|(_, &s)| s & bit(w) != 0)
            .map(|(a, _)| a.as_str())
            .collect();
        let label = if true_atoms.is_empty() {
            name.clone()
        } else {
            format!("{name} : {}", true_atoms.join(","))
        };
        let _ = writeln!(out, "  w{w} [label=\"{label}\"];");
    }
    for (a, b) in fr.covers() {
        let _ = writeln!(out, "  w{a} -> w{b};");
    }
    for (a, b) in fr.modal_pairs() {
        let _ = writeln!(out, "  w{a} -> w{b} [style=dashed, label=\"<\"];");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{normalize, parse};
    use crate::kripke::forces;

    const EX: &str = "\
# three worlds
worlds 3
names a b c
order b c
modal a b
modal b c
";

    #[test]
    fn parses_named_worlds() {
        let m = parse_model(EX).unwrap();
        assert_eq!(m.world_named("a"), Some(0));
        assert_eq!(m.world_named("2"), Some(2));
        assert!(m.frame().le(1, 2));
        let f = normalize(&parse("[]#f ~> #f").unwrap());
        assert!(forces(&m, 0, &f));
    }

    #[test]
    fn write_then_parse_round_trips() {
        let mut m = parse_model(EX).unwrap();
        m = Model::with_names(
            m.frame().clone(),
            [("p".to_string(), 0b110)].into_iter().collect(),
            m.names().to_vec(),
        )
        .unwrap();
        let text = write_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse_model("order 0 1").is_err());
        assert!(parse_model("worlds 2\nmodal 0 5").is_err());
        assert!(matches!(
            parse_model("worlds 2\norder 0 1\nval p: 0"),
            Err(KripkeError::NotUpset { .. })
        ));
        assert!(matches!(
            parse_model("worlds 2\norder 0 1\nmodal 1 1"),
            Err(KripkeError::NotAFrame { .. })
        ));
        assert!(parse_model("worlds 2\nfoo").is_err());
    }

    #[test]
    fn dot_marks_modal_edges() {
        let dot = to_dot(&parse_model(EX).unwrap());
        assert!(dot.contains("w1 -> w2;"));
        assert!(dot.contains("w0 -> w1 [style=dashed, label=\"<\"];"));
    }
}
