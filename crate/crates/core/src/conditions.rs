//! First-order frame conditions and brute-force correspondence testing.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{metavars, substitute, Binding, Formula, Template};
use crate::kripke::{frame_refutation, is_frame, members, Frame, Preframe, WorldSet};
use crate::search::{enumerate_frames, SearchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionId {
    BoxP,
    ArrowP,
    Mix,
    Brilliant,
    SemiTransitive,
    Gathering,
    Noetherian,
    Supergathering,
    Montagna,
    Strong,
    Dominated,
    WeaklyDominated,
    WeaklySemilinear,
    StronglySemilinear,
    SemiDense,
    PreReflexive,
    SemiNucleic,
    AlmostReflexive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("unknown frame condition {0:?}")]
    Unknown(String),
    #[error("pairing table line {line}: {msg}")]
    Table { line: usize, msg: String },
}

impl ConditionId {
    pub const ALL: [ConditionId; 18] = [
        ConditionId::BoxP,
        ConditionId::ArrowP,
        ConditionId::Mix,
        ConditionId::Brilliant,
        ConditionId::SemiTransitive,
        ConditionId::Gathering,
        ConditionId::Noetherian,
        ConditionId::Supergathering,
        ConditionId::Montagna,
        ConditionId::Strong,
        ConditionId::Dominated,
        ConditionId::WeaklyDominated,
        ConditionId::WeaklySemilinear,
        ConditionId::StronglySemilinear,
        ConditionId::SemiDense,
        ConditionId::PreReflexive,
        ConditionId::SemiNucleic,
        ConditionId::AlmostReflexive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::BoxP => "box_p",
            ConditionId::ArrowP => "arrow_p",
            ConditionId::Mix => "mix",
            ConditionId::Brilliant => "brilliant",
            ConditionId::SemiTransitive => "semi_transitive",
            ConditionId::Gathering => "gathering",
            ConditionId::Noetherian => "noetherian",
            ConditionId::Supergathering => "supergathering",
            ConditionId::Montagna => "montagna",
            ConditionId::Strong => "strong",
            ConditionId::Dominated => "dominated",
            ConditionId::WeaklyDominated => "weakly_dominated",
            ConditionId::WeaklySemilinear => "weakly_semilinear",
            ConditionId::StronglySemilinear => "strongly_semilinear",
            ConditionId::SemiDense => "semi_dense",
            ConditionId::PreReflexive => "pre_reflexive",
            ConditionId::SemiNucleic => "semi_nucleic",
            ConditionId::AlmostReflexive => "almost_reflexive",
        }
    }

    /// Conditions whose reading here is only adequate on finite frames.
    pub fn finite_only(self) -> bool {
        matches!(self, ConditionId::Noetherian | ConditionId::Supergathering)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConditionId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConditionError::Unknown(s.to_string()))
    }
}

/// Parses a comma or `+` separated list; `-` and the empty string denote no conditions.
pub fn parse_conditions(s: &str) -> Result<Vec<ConditionId>, ConditionError> {
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    let mut out: Vec<ConditionId> = s
        .split([',', '+'])
        .map(|part| part.trim().parse())
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn format_conditions(conds: &[ConditionId]) -> String {
    if conds.is_empty() {
        return "-".to_string();
    }
    conds.iter().map(|c| c.name()).collect::<Vec<_>>().join(",")
}

struct Rel<'a> {
    p: &'a Preframe,
    down: Vec<WorldSet>,
}

impl<'a> Rel<'a> {
    fn new(p: &'a Preframe) -> Rel<'a> {
        let down = (0..p.len()).map(|w| p.down(w)).collect();
        Rel { p, down }
    }

    fn worlds(&self) -> std::ops::Range<usize> {
        0..self.p.len()
    }

    fn up(&self, w: usize) -> WorldSet {
        self.p.up(w)
    }

    fn succ(&self, w: usize) -> WorldSet {
        self.p.succ(w)
    }

    /// Worlds with at least one `⊏`-predecessor.
    fn targets(&self) -> WorldSet {
        self.worlds().fold(0, |acc, k| acc | self.succ(k))
    }

    fn comparable(&self, a: usize, b: usize) -> bool {
        self.p.le(a, b) || self.p.le(b, a)
    }
}

fn acyclic(p: &Preframe) -> bool {
    // Repeatedly strip worlds without successors among the remaining ones.
    let mut alive = p.worlds();
    loop {
        let sinks = members(alive)
            .filter(|&w| p.succ(w) & alive == 0)
            .fold(0, |acc, w| acc | (1 << w));
        if sinks == 0 {
            return alive == 0;
        }
        alive &= !sinks;
    }
}

pub fn check_condition(p: &Preframe, c: ConditionId) -> bool {
    let r = Rel::new(p);
    let bit = |w: usize| 1u64 << w;
    match c {
        ConditionId::ArrowP => is_frame(p),
        ConditionId::BoxP => r.worlds().all(|k| {
            members(r.up(k)).all(|l| members(r.succ(l)).all(|m| r.succ(k) & r.down[m] != 0))
        }),
        ConditionId::Mix => r.worlds().all(|k| {
            members(r.up(k)).all(|l| members(r.succ(l)).all(|m| r.up(m) & !r.succ(k) == 0))
        }),
        ConditionId::Brilliant => r
            .worlds()
            .all(|k| members(r.succ(k)).all(|l| r.up(l) & !r.succ(k) == 0)),
        ConditionId::SemiTransitive => r.worlds().all(|k| {
            members(r.succ(k)).all(|l| members(r.succ(l)).all(|m| r.succ(k) & r.down[m] != 0))
        }),
        ConditionId::Gathering => members(r.targets()).all(|l| r.succ(l) & !r.up(l) == 0),
        ConditionId::Noetherian => acyclic(p),
        ConditionId::Supergathering => r.worlds().all(|k| {
            members(r.succ(k)).all(|l| {
                members(r.succ(l))
                    .all(|m| r.succ(k) & r.up(l) & !bit(l) & r.down[m] != 0)
            })
        }),
        ConditionId::Montagna => {
            let reach: Vec<WorldSet> = r.worlds().map(|w| p.up_of_set(r.succ(w))).collect();
            r.worlds().all(|k| {
                members(r.succ(k)).all(|l| {
                    members(r.up(l)).all(|m| {
                        members(r.succ(k) & r.up(l) & r.down[m])
                            .any(|x| reach[x] & !reach[m] == 0)
                    })
                })
            })
        }
        ConditionId::Strong => r.worlds().all(|k| r.succ(k) & !r.up(k) == 0),
        ConditionId::Dominated => r.worlds().all(|k| r.up(k) & !bit(k) & !r.succ(k) == 0),
        ConditionId::WeaklyDominated => r
            .worlds()
            .all(|k| members(r.up(k) & !bit(k)).all(|l| r.succ(k) & r.down[l] != 0)),
        ConditionId::WeaklySemilinear => r.worlds().all(|k| {
            members(r.succ(k)).all(|l| members(r.succ(k)).all(|m| r.comparable(l, m)))
        }),
        ConditionId::StronglySemilinear => r.worlds().all(|k| {
            let ups = p.up_of_set(r.succ(k));
            members(ups).all(|l| members(ups).all(|m| r.comparable(l, m)))
        }),
        ConditionId::SemiDense => r.worlds().all(|k| {
            members(r.succ(k))
                .all(|l| members(r.succ(k)).any(|y| r.succ(y) & r.down[l] != 0))
        }),
        ConditionId::PreReflexive => members(r.targets()).all(|l| r.succ(l) & r.down[l] != 0),
        ConditionId::SemiNucleic => r.worlds().all(|k| {
            members(r.succ(k)).all(|l| {
                members(r.up(k) & r.up(l)).any(|m| r.succ(m) & r.down[l] != 0)
            })
        }),
        ConditionId::AlmostReflexive => members(r.targets()).all(|l| r.succ(l) & bit(l) != 0),
    }
}

pub fn check_all(p: &Preframe, conds: &[ConditionId]) -> bool {
    conds.iter().all(|&c| check_condition(p, c))
}

/// One row of the correspondence pairing table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub conditions: Vec<ConditionId>,
    pub axiom: String,
    pub finite_only: bool,
}

const PAIRINGS: &str = include_str!("../data/conditions.tsv");

/// Parses a pairing table: `conditions<TAB>axiom<TAB>finite_only`, `#` comments.
pub fn parse_pairings(text: &str) -> Result<Vec<Pairing>, ConditionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| ConditionError::Table {
            line: i + 1,
            msg: msg.to_string(),
        };
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(err("expected three tab-separated columns"));
        }
        let finite_only = match cols[2] {
            "yes" | "true" => true,
            "no" | "false" => false,
            _ => return Err(err("finite_only must be yes or no")),
        };
        out.push(Pairing {
            conditions: parse_conditions(cols[0])?,
            axiom: cols[1].to_string(),
            finite_only,
        });
    }
    Ok(out)
}

/// The shipped pairing table.
pub fn pairing_table() -> Vec<Pairing> {
    parse_pairings(PAIRINGS).expect("shipped pairing table is well formed")
}

/// Instantiates each metavariable `?x` with a fresh atom `x`.
pub fn fresh_instance(axiom: &Template) -> Formula {
    let binding: Binding = metavars(axiom)
        .into_iter()
        .map(|m| {
            let atom = Formula::atom(&m);
            (m, atom)
        })
        .collect();
    substitute(axiom, &binding).expect("every metavariable is bound")
}

#[derive(Debug, Clone)]
pub struct CorrespondenceCounterexample {
    pub frame: Frame,
    pub condition_holds: bool,
    pub axiom_valid: bool,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub frames_checked: usize,
    pub counterexample: Option<CorrespondenceCounterexample>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `conds ⟺ frame validity of the axiom` on every frame with at most `max_n` worlds.
pub fn correspondence_test(
    conds: &[ConditionId],
    axiom: &Template,
    max_n: usize,
) -> Result<CorrespondenceReport, SearchError> {
    let instance = fresh_instance(axiom);
    let mut frames_checked = 0;
    for n in 1..=max_n {
        for frame in enumerate_frames(n, &[])? {
            frames_checked += 1;
            let condition_holds = check_all(&frame, conds);
            let axiom_valid = frame_refutation(&frame, &instance).is_none();
            if condition_holds != axiom_valid {
                return Ok(CorrespondenceReport {
                    frames_checked,
                    counterexample: Some(CorrespondenceCounterexample {
                        frame,
                        condition_holds,
                        axiom_valid,
                    }),
                });
            }
        }
    }
    Ok(CorrespondenceReport {
        frames_checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::build_preframe;

    fn pf(n: usize, order: &[(usize, usize)], modal: &[(usize, usize)]) -> Preframe {
        build_preframe(n, order, modal).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in ConditionId::ALL {
            assert_eq!(c.name().parse::<ConditionId>().unwrap(), c);
        }
        assert!("nope".parse::<ConditionId>().is_err());
        assert_eq!(
            parse_conditions("gathering+noetherian").unwrap(),
            vec![ConditionId::Gathering, ConditionId::Noetherian]
        );
        assert_eq!(parse_conditions("-").unwrap(), vec![]);
    }

    #[test]
    fn empty_modal_relation_is_vacuous() {
        let p = pf(3, &[(0, 1)], &[]);
        for c in [
            ConditionId::Brilliant,
            ConditionId::Gathering,
            ConditionId::Noetherian,
            ConditionId::SemiTransitive,
        ] {
            assert!(check_condition(&p, c), "{c}");
        }
    }

    #[test]
    fn linearity_example() {
        // a=0, b=1, c=2, d=3
        let p = pf(4, &[(1, 2), (1, 3)], &[(0, 1), (0, 2), (1, 2)]);
        assert!(check_condition(&p, ConditionId::WeaklySemilinear));
        assert!(!check_condition(&p, ConditionId::StronglySemilinear));
    }

    #[test]
    fn density_and_reflexivity_examples() {
        let left = pf(4, &[(3, 2)], &[(0, 2), (0, 1), (1, 3), (1, 1), (3, 3)]);
        assert!(check_condition(&left, ConditionId::SemiDense));
        assert!(!check_condition(&left, ConditionId::PreReflexive));
        let right = pf(3, &[(2, 1)], &[(0, 1), (1, 2), (2, 2)]);
        assert!(check_condition(&right, ConditionId::PreReflexive));
        assert!(!check_condition(&right, ConditionId::AlmostReflexive));
    }

    #[test]
    fn noetherian_is_acyclicity() {
        assert!(check_condition(&pf(3, &[], &[(0, 1), (1, 2), (0, 2)]), ConditionId::Noetherian));
        assert!(!check_condition(&pf(3, &[], &[(0, 1), (1, 2), (2, 0)]), ConditionId::Noetherian));
        assert!(!check_condition(&pf(1, &[], &[(0, 0)]), ConditionId::Noetherian));
    }

    #[test]
    fn shipped_table_parses() {
        let t = pairing_table();
        assert!(t.len() >= 16);
        assert!(t.iter().any(|p| p.axiom == "W_arrow" && p.finite_only));
    }
}
