//! Axiom schemes, named logics, Hilbert proof objects and their checker.

mod builder;
mod proof_io;
pub mod replay;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::conditions::{pairing_table, parse_conditions, ConditionError, ConditionId, Pairing};
use crate::formula::{
    chi_translate, metavars, normalize, parse_template, substitute, Binding, Formula, ParseError,
    Template,
};
use crate::search::{find_countermodel, Countermodel, SearchError, SearchOptions, SearchOutcome};

pub use builder::{BuildError, Derivation, Line};
pub use proof_io::{parse_proof, write_proof, ProofParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// From `φ` and `φ → ψ` infer `ψ`.
    Mp,
    /// From a theorem `φ → ψ` infer `φ ⤳ ψ`.
    NecArrow,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Mp => "MP",
            Rule::NecArrow => "NecArrow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("scheme file line {line}: {msg}")]
    SchemeFile { line: usize, msg: String },
    #[error("logic file line {line}: {msg}")]
    LogicFile { line: usize, msg: String },
    #[error("unknown logic {0:?}")]
    UnknownLogic(String),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("logic {0} has no declared frame class")]
    NoClass(String),
    #[error("conjunct {0} of the V instance is not an implication")]
    MalformedConjunct(String),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub name: String,
    pub template: Template,
}

/// A named bundle of rules and schemes, optionally with the frame class it is sound for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Logic {
    pub name: String,
    pub rules: BTreeSet<Rule>,
    pub schemes: BTreeSet<String>,
    /// `None` when no frame class is declared; `Some(vec![])` for the class of all frames.
    pub class: Option<Vec<ConditionId>>,
}

impl Logic {
    pub fn has_scheme(&self, name: &str) -> bool {
        self.schemes.contains(name)
    }
}

/// Names of the propositional base schemes.
pub const IPC_SCHEMES: [&str; 10] = [
    "K", "S", "and_i", "and_e1", "and_e2", "or_i1", "or_i2", "or_e", "efq", "top",
];

#[derive(Debug, Clone)]
pub struct Registry {
    schemes: BTreeMap<String, Scheme>,
    logics: BTreeMap<String, Logic>,
    pairings: Vec<Pairing>,
}

const SCHEMES: &str = include_str!("../../data/schemes.txt");
const LOGICS: &str = include_str!("../../data/logics.txt");

pub fn parse_schemes(text: &str) -> Result<Vec<Scheme>, LogicError> {
    let mut out: Vec<Scheme> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| LogicError::SchemeFile { line: i + 1, msg };
        let (name, body) = line
            .split_once(':')
            .ok_or_else(|| err("expected `NAME: template`".into()))?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(err(format!("bad scheme name {name:?}")));
        }
        if out.iter().any(|s| s.name == name) {
            return Err(err(format!("duplicate scheme {name}")));
        }
        let template = parse_template(body).map_err(|e: ParseError| err(e.to_string()))?;
        out.push(Scheme {
            name: name.to_string(),
            template: normalize(&template),
        });
    }
    Ok(out)
}

impl Registry {
    /// Builds a registry from scheme, logic and pairing-table sources.
    pub fn from_sources(schemes: &str, logics: &str, pairings: Vec<Pairing>) -> Result<Registry, LogicError> {
        let schemes: BTreeMap<String, Scheme> = parse_schemes(schemes)?
            .into_iter()
            .map(|s| (s.name.clone(), s))
            .collect();
        let mut reg = Registry {
            schemes,
            logics: BTreeMap::new(),
            pairings,
        };
        for (i, raw) in logics.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| LogicError::LogicFile { line: i + 1, msg };
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(err("expected four `|`-separated columns".into()));
            }
            let name = cols[0].to_string();
            if reg.logics.contains_key(&name) {
                return Err(err(format!("duplicate logic {name}")));
            }
            let mut rules = BTreeSet::new();
            for r in cols[1].split(',').map(str::trim) {
                rules.insert(match r {
                    "MP" => Rule::Mp,
                    "NecArrow" => Rule::NecArrow,
                    other => return Err(err(format!("unknown rule {other:?}"))),
                });
            }
            let mut set = BTreeSet::new();
            for item in cols[2].split_whitespace() {
                if item == "@IPC" {
                    set.extend(IPC_SCHEMES.iter().map(|s| s.to_string()));
                } else if let Some(parent) = reg.logics.get(item) {
                    set.extend(parent.schemes.iter().cloned());
                    rules.extend(parent.rules.iter().copied());
                } else if reg.schemes.contains_key(item) {
                    set.insert(item.to_string());
                } else {
                    return Err(err(format!("{item:?} is neither a logic nor a scheme")));
                }
            }
            let class = match cols[3] {
                "none" => None,
                "*" => Some(Vec::new()),
                list => Some(parse_conditions(list)?),
            };
            reg.logics.insert(
                name.clone(),
                Logic {
                    name,
                    rules,
                    schemes: set,
                    class,
                },
            );
        }
        Ok(reg)
    }

    /// The shipped registry.
    pub fn standard() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| {
            Registry::from_sources(SCHEMES, LOGICS, pairing_table())
                .expect("shipped registry files are well formed")
        })
    }

    pub fn scheme(&self, name: &str) -> Result<&Scheme, LogicError> {
        self.schemes
            .get(name)
            .ok_or_else(|| LogicError::UnknownScheme(name.to_string()))
    }

    pub fn schemes(&self) -> impl Iterator<Item = &Scheme> {
        self.schemes.values()
    }

    pub fn logic_names(&self) -> impl Iterator<Item = &str> {
        self.logics.keys().map(String::as_str)
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    /// Conditions corresponding to a scheme: empty for propositional schemes and
    /// schemes valid on every frame, `None` when no correspondent is known.
    pub fn correspondent(&self, scheme: &str) -> Option<Vec<ConditionId>> {
        if IPC_SCHEMES.contains(&scheme) {
            return Some(Vec::new());
        }
        self.pairings
            .iter()
            .find(|p| p.axiom == scheme)
            .map(|p| p.conditions.clone())
    }

    /// Resolves a logic name, or an extension `BASE+X+Y` by schemes or other logics.
    pub fn logic(&self, expr: &str) -> Result<Logic, LogicError> {
        if let Some(l) = self.logics.get(expr.trim()) {
            return Ok(l.clone());
        }
        let mut parts = expr.split('+').map(str::trim);
        let base_name = parts.next().unwrap_or("");
        let mut logic = self
            .logics
            .get(base_name)
            .cloned()
            .ok_or_else(|| LogicError::UnknownLogic(expr.to_string()))?;
        logic.name = expr.trim().to_string();
        for part in parts {
            if let Some(other) = self.logics.get(part) {
                logic.schemes.extend(other.schemes.iter().cloned());
                logic.rules.extend(other.rules.iter().copied());
                logic.class = match (logic.class.take(), &other.class) {
                    (Some(mut a), Some(b)) => {
                        a.extend(b.iter().copied());
                        Some(a)
                    }
                    _ => None,
                };
            } else {
                self.scheme(part)?;
                if logic.schemes.insert(part.to_string()) {
                    logic.class = match (logic.class.take(), self.correspondent(part)) {
                        (Some(mut a), Some(b)) => {
                            a.extend(b);
                            Some(a)
                        }
                        _ => None,
                    };
                }
            }
        }
        if let Some(c) = logic.class.as_mut() {
            c.sort();
            c.dedup();
        }
        Ok(logic)
    }

    /// Instantiates a scheme, normalizing the result.
    pub fn instance(&self, scheme: &str, binding: &Binding) -> Result<Formula, RejectReason> {
        let s = self
            .schemes
            .get(scheme)
            .ok_or_else(|| RejectReason::UnknownScheme(scheme.to_string()))?;
        let f = substitute(&s.template, binding).map_err(|e| RejectReason::Substitution(e.to_string()))?;
        Ok(normalize(&f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom { scheme: String, binding: Binding },
    /// `Mp(i, j)`: step `j` is `step i → conclusion`.
    Mp(usize, usize),
    /// `Nec(i)`: step `i` is `l → r`, the conclusion is `l ⤳ r`.
    Nec(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub just: Justification,
    pub conclusion: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub goal: Formula,
    pub steps: Vec<Step>,
}

impl Proof {
    /// Schemes used by axiom steps.
    pub fn schemes_used(&self) -> BTreeSet<&str> {
        self.steps
            .iter()
            .filter_map(|s| match &s.just {
                Justification::Axiom { scheme, .. } => Some(scheme.as_str()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("proof has no steps")]
    Empty,
    #[error("unknown scheme {0}")]
    UnknownScheme(String),
    #[error("scheme {0} is not in the logic")]
    SchemeNotInLogic(String),
    #[error("rule {0} is not in the logic")]
    RuleNotInLogic(&'static str),
    #[error("substitution mismatch: {0}")]
    Substitution(String),
    #[error("MP shape mismatch")]
    MpShape,
    #[error("NecArrow applied to a non-implication")]
    NecShape,
    #[error("dangling index {0}")]
    Dangling(usize),
    #[error("last step does not prove the goal")]
    GoalMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Rejection {
    /// Zero-based step index, if the rejection concerns a step.
    pub step: Option<usize>,
    pub reason: RejectReason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {}: {}", i + 1, self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

fn check_step(reg: &Registry, logic: &Logic, proof: &Proof, i: usize) -> Result<(), RejectReason> {
    let step = &proof.steps[i];
    let earlier = |j: usize| -> Result<Formula, RejectReason> {
        if j < i {
            Ok(normalize(&proof.steps[j].conclusion))
        } else {
            Err(RejectReason::Dangling(j + 1))
        }
    };
    let concl = normalize(&step.conclusion);
    match &step.just {
        Justification::Axiom { scheme, binding } => {
            let s = reg
                .schemes
                .get(scheme)
                .ok_or_else(|| RejectReason::UnknownScheme(scheme.clone()))?;
            if !logic.has_scheme(scheme) {
                return Err(RejectReason::SchemeNotInLogic(scheme.clone()));
            }
            let needed = metavars(&s.template);
            if let Some(extra) = binding.keys().find(|k| !needed.contains(*k)) {
                return Err(RejectReason::Substitution(format!(
                    "?{extra} does not occur in {scheme}"
                )));
            }
            if binding.values().any(Formula::has_meta) {
                return Err(RejectReason::Substitution("binding contains a metavariable".into()));
            }
            let inst = reg.instance(scheme, binding)?;
            if inst != concl {
                return Err(RejectReason::Substitution(format!(
                    "instance of {scheme} is {inst}, step claims {concl}"
                )));
            }
        }
        Justification::Mp(a, b) => {
            if !logic.rules.contains(&Rule::Mp) {
                return Err(RejectReason::RuleNotInLogic(Rule::Mp.name()));
            }
            let fa = earlier(*a)?;
            let fb = earlier(*b)?;
            match fb {
                Formula::Imp(l, r) if *l == fa && *r == concl => {}
                _ => return Err(RejectReason::MpShape),
            }
        }
        Justification::Nec(a) => {
            if !logic.rules.contains(&Rule::NecArrow) {
                return Err(RejectReason::RuleNotInLogic(Rule::NecArrow.name()));
            }
            match earlier(*a)? {
                Formula::Imp(l, r) => {
                    if concl != Formula::Strictif(l, r) {
                        return Err(RejectReason::NecShape);
                    }
                }
                _ => return Err(RejectReason::NecShape),
            }
        }
    }
    Ok(())
}

/// Checks every step and that the last conclusion is the goal.
pub fn check_proof(reg: &Registry, logic: &Logic, proof: &Proof) -> Result<(), Rejection> {
    if proof.steps.is_empty() {
        return Err(Rejection {
            step: None,
            reason: RejectReason::Empty,
        });
    }
    for i in 0..proof.steps.len() {
        check_step(reg, logic, proof, i).map_err(|reason| Rejection {
            step: Some(i),
            reason,
        })?;
    }
    let last = normalize(&proof.steps[proof.steps.len() - 1].conclusion);
    if last != normalize(&proof.goal) {
        return Err(Rejection {
            step: None,
            reason: RejectReason::GoalMismatch,
        });
    }
    Ok(())
}

/// The instance `(χ → (φn ∨ φn+1)) ⤳ ⋁_{j<n+2} (χ)(φj)` with `χ = ⋀ (φi → ψi)`.
pub fn v_instance(chi_conjuncts: &[Formula], phi_n: &Formula, phi_n1: &Formula) -> Result<Formula, LogicError> {
    let mut antecedents = Vec::new();
    for c in chi_conjuncts {
        match c {
            Formula::Imp(a, _) => antecedents.push((**a).clone()),
            other => return Err(LogicError::MalformedConjunct(other.to_string())),
        }
    }
    antecedents.push(phi_n.clone());
    antecedents.push(phi_n1.clone());
    let chi = Formula::conj(chi_conjuncts);
    let lhs = Formula::imp(chi.clone(), Formula::or(phi_n.clone(), phi_n1.clone()));
    let rhs: Vec<Formula> = antecedents.iter().map(|f| chi_translate(&chi, f)).collect();
    Ok(Formula::strict(lhs, Formula::disj(&rhs)))
}

#[derive(Debug, Clone)]
pub enum Spotcheck {
    Pass { max_n: usize },
    Countermodel(Countermodel),
}

impl Spotcheck {
    pub fn passed(&self) -> bool {
        matches!(self, Spotcheck::Pass { .. })
    }
}

/// Searches the logic's frame class up to `max_n` worlds for a frame refuting `theorem`.
pub fn soundness_spotcheck(logic: &Logic, theorem: &Formula, max_n: usize) -> Result<Spotcheck, LogicError> {
    let class = logic
        .class
        .as_ref()
        .ok_or_else(|| LogicError::NoClass(logic.name.clone()))?;
    let opts = SearchOptions {
        max_n,
        cap: max_n.max(crate::search::enumeration_cap()),
        ..SearchOptions::default()
    }
    .reduced();
    Ok(match find_countermodel(theorem, class, &opts)? {
        SearchOutcome::Found(c) => Spotcheck::Countermodel(c),
        SearchOutcome::NotFound { .. } => Spotcheck::Pass { max_n },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        normalize(&parse(s).unwrap())
    }

    fn bind(pairs: &[(&str, &str)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), p(v))).collect()
    }

    #[test]
    fn registry_has_required_entries() {
        let reg = Registry::standard();
        for s in [
            "K_box", "4_box", "C4_box", "L_box", "S_box", "SL_box", "Lei", "CB_box", "CB'_box",
            "Lin_box", "peirce", "em", "Tr", "K_arrow", "K'_arrow", "K''_arrow", "K'''_arrow",
            "BL", "LB", "Di", "Di'", "P_arrow", "4_arrow", "L_arrow", "W_arrow", "W'_arrow",
            "M_arrow", "M'_arrow", "S_arrow", "S'_arrow", "Box", "Box'", "Box''", "CB_arrow",
            "Lin_arrow", "App_arrow", "C4_arrow", "Hug", "Contra", "Auxp", "Auxp2",
        ] {
            assert!(reg.scheme(s).is_ok(), "{s}");
        }
        for l in [
            "iA0", "iA-", "iA", "i-BoxA", "iGL-", "iGL", "iGW-", "iGW", "iPreL-", "iPreL", "iSA-",
            "iSA", "PLAA", "mHC_arrow", "KM_arrow", "KM.lin_arrow", "iK_box", "iGL_box", "iS_box",
            "iSL_box", "iPLL_box", "mHC_box", "KM_box", "KM.lin_box", "wk+em", "cPreL",
        ] {
            assert!(reg.logic(l).is_ok(), "{l}");
        }
        let ia0 = reg.logic("iA0").unwrap();
        assert_eq!(ia0.schemes.len(), 11);
        assert!(ia0.has_scheme("Tr"));
        assert_eq!(ia0.rules.len(), 2);
    }

    #[test]
    fn logic_extensions_compute_classes() {
        let reg = Registry::standard();
        let l = reg.logic("iA0+K'_arrow").unwrap();
        assert_eq!(l.class, Some(vec![]));
        let l = reg.logic("iA+C4_box").unwrap();
        assert_eq!(l.class, Some(vec![ConditionId::SemiDense]));
        let l = reg.logic("iA+Contra").unwrap();
        assert_eq!(l.class, None);
        assert!(reg.logic("nonsense").is_err());
        assert!(reg.logic("iA+nonsense").is_err());
        assert_eq!(reg.logic("cPreL").unwrap().class, None);
    }

    fn single(scheme: &str, binding: Binding, concl: &str) -> Proof {
        let c = p(concl);
        Proof {
            goal: c.clone(),
            steps: vec![Step {
                just: Justification::Axiom {
                    scheme: scheme.into(),
                    binding,
                },
                conclusion: c,
            }],
        }
    }

    #[test]
    fn accepts_single_axiom() {
        let reg = Registry::standard();
        let proof = single(
            "Tr",
            bind(&[("phi", "p"), ("psi", "p"), ("chi", "p")]),
            "(p ~> p) -> (p ~> p) -> (p ~> p)",
        );
        assert_eq!(check_proof(reg, &reg.logic("iA0").unwrap(), &proof), Ok(()));
    }

    #[test]
    fn rejections() {
        let reg = Registry::standard();
        let ia0 = reg.logic("iA0").unwrap();
        let reason = |proof: &Proof| check_proof(reg, &ia0, proof).unwrap_err().reason;

        let wrong = single("Tr", bind(&[("phi", "p"), ("psi", "p"), ("chi", "q")]), "(p ~> p) -> (p ~> p) -> (p ~> p)");
        assert!(matches!(reason(&wrong), RejectReason::Substitution(_)));
        let unbound = single("Tr", bind(&[("phi", "p")]), "(p ~> p) -> (p ~> p) -> (p ~> p)");
        assert!(matches!(reason(&unbound), RejectReason::Substitution(_)));
        let foreign = single("K_arrow", bind(&[("phi", "p"), ("psi", "p"), ("chi", "p")]), "#t");
        assert_eq!(reason(&foreign), RejectReason::SchemeNotInLogic("K_arrow".into()));
        let unknown = single("Nope", Binding::new(), "#t");
        assert_eq!(reason(&unknown), RejectReason::UnknownScheme("Nope".into()));

        let top = Step {
            just: Justification::Axiom {
                scheme: "top".into(),
                binding: Binding::new(),
            },
            conclusion: Formula::Top,
        };
        let k = Step {
            just: Justification::Axiom {
                scheme: "K".into(),
                binding: bind(&[("phi", "#t"), ("psi", "p")]),
            },
            conclusion: p("#t -> p -> #t"),
        };
        let mut proof = Proof {
            goal: p("p -> #t"),
            steps: vec![
                top.clone(),
                k.clone(),
                Step {
                    just: Justification::Mp(0, 1),
                    conclusion: p("p -> #t"),
                },
            ],
        };
        assert_eq!(check_proof(reg, &ia0, &proof), Ok(()));

        proof.steps[2].just = Justification::Mp(1, 0);
        assert_eq!(reason(&proof), RejectReason::MpShape);
        proof.steps[2].just = Justification::Mp(0, 2);
        assert_eq!(reason(&proof), RejectReason::Dangling(3));
        proof.steps[2] = Step {
            just: Justification::Nec(0),
            conclusion: p("#t ~> #t"),
        };
        proof.goal = p("#t ~> #t");
        assert_eq!(reason(&proof), RejectReason::NecShape);
        proof.steps[2] = Step {
            just: Justification::Nec(1),
            conclusion: p("#t ~> (p -> #t)"),
        };
        proof.goal = p("#t ~> (p -> #t)");
        assert_eq!(check_proof(reg, &ia0, &proof), Ok(()));
        proof.goal = p("p");
        assert_eq!(reason(&proof), RejectReason::GoalMismatch);
        assert_eq!(
            reason(&Proof {
                goal: Formula::Top,
                steps: vec![]
            }),
            RejectReason::Empty
        );
    }

    #[test]
    fn v_instance_clauses() {
        let box_q = p("[]q");
        let not_box_q = p("~[]q");
        let v = v_instance(&[], &box_q, &not_box_q).unwrap();
        let expected = Formula::strict(
            Formula::imp(Formula::Top, Formula::or(box_q.clone(), not_box_q.clone())),
            Formula::or(box_q, Formula::imp(Formula::Top, not_box_q)),
        );
        assert_eq!(v, expected);

        let v = v_instance(&[p("p -> q")], &p("r /\\ s"), &p("#f")).unwrap();
        let chi = p("p -> q");
        let expected = Formula::strict(
            Formula::imp(chi.clone(), Formula::or(p("r /\\ s"), Formula::Bot)),
            Formula::disj(&[
                Formula::imp(chi.clone(), p("p")),
                Formula::and(Formula::imp(chi.clone(), p("r")), Formula::imp(chi.clone(), p("s"))),
                Formula::Bot,
            ]),
        );
        assert_eq!(v, expected);
        assert!(matches!(
            v_instance(&[p("p")], &p("q"), &p("r")),
            Err(LogicError::MalformedConjunct(_))
        ));
    }

    #[test]
    fn spotcheck_examples() {
        let reg = Registry::standard();
        let ia = reg.logic("iA").unwrap();
        assert!(soundness_spotcheck(&ia, &Formula::Top, 3).unwrap().passed());
        let igw = reg.logic("iGW").unwrap();
        let out = soundness_spotcheck(&igw, &p("([]#f ~> p) -> []([]#f -> p)"), 4).unwrap();
        assert!(!out.passed());
        let none = reg.logic("wk+em").unwrap();
        assert!(matches!(
            soundness_spotcheck(&none, &Formula::Top, 2),
            Err(LogicError::NoClass(_))
        ));
    }
}
