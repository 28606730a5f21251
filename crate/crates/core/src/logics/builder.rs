//! A derivation builder that compiles natural-deduction style reasoning into Hilbert proofs.
//!
//! Lines may depend on open hypotheses. Discharging a hypothesis `A` from a line `φ` yields a
//! line `A → φ`, produced by the usual deduction-theorem translation with `K` and `S`.
//! Propositional steps can be filled in automatically by [`Derivation::ipc`], which
//! extracts a Hilbert derivation from a G4ip proof in which modal subformulas are opaque.

use std::collections::HashMap;

use thiserror::Error;

use super::{Justification, Logic, Proof, Registry, RejectReason, Step};
use crate::formula::{normalize, parse, Binding, Formula};
use crate::ipc::{Prover, Tree};

/// Handle to a line of a [`Derivation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("scheme {0} is not in the logic")]
    SchemeNotInLogic(String),
    #[error(transparent)]
    Reject(#[from] RejectReason),
    #[error("cannot parse {text:?}: {msg}")]
    Parse { text: String, msg: String },
    #[error("cannot apply {major} to {minor}")]
    MpShape { minor: Formula, major: Formula },
    #[error("NecArrow needs an implication, got {0}")]
    NecShape(Formula),
    #[error("NecArrow applied to {0}, which depends on an open hypothesis")]
    NecDependent(Formula),
    #[error("line is not a hypothesis")]
    NotHypothesis,
    #[error("line depends on a discharged hypothesis")]
    Discharged,
    #[error("{0} still depends on open hypotheses")]
    Open(Formula),
    #[error("{0} is not propositionally valid")]
    NotIpc(Formula),
    #[error("{0} is not a strict implication")]
    NotStrict(Formula),
}

#[derive(Debug, Clone)]
enum Kind {
    Axiom(String, Binding),
    Mp(Line, Line),
    Nec(Line),
    Hyp(u32),
}

#[derive(Debug, Clone)]
struct Node {
    formula: Formula,
    kind: Kind,
    /// Sorted ids of the hypotheses this line depends on.
    deps: Vec<u32>,
}

pub struct Derivation<'r> {
    reg: &'r Registry,
    logic: Logic,
    nodes: Vec<Node>,
    open: Vec<bool>,
    hyp_forms: Vec<Formula>,
    theorems: HashMap<Formula, Line>,
    deduced: HashMap<(u32, Line), Line>,
    prover: Prover,
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Parses and normalizes a formula, for use with the builder.
pub(crate) fn f(text: &str) -> Result<Formula, BuildError> {
    parse(text).map(|x| normalize(&x)).map_err(|e| BuildError::Parse {
        text: text.to_string(),
        msg: e.to_string(),
    })
}

impl<'r> Derivation<'r> {
    pub fn new(reg: &'r Registry, logic: &Logic) -> Derivation<'r> {
        Derivation {
            reg,
            logic: logic.clone(),
            nodes: Vec::new(),
            open: Vec::new(),
            hyp_forms: Vec::new(),
            theorems: HashMap::new(),
            deduced: HashMap::new(),
            prover: Prover::new(),
        }
    }

    pub fn logic(&self) -> &Logic {
        &self.logic
    }

    pub fn formula(&self, l: Line) -> &Formula {
        &self.nodes[l.0 as usize].formula
    }

    fn node(&self, l: Line) -> &Node {
        &self.nodes[l.0 as usize]
    }

    fn push(&mut self, formula: Formula, kind: Kind, deps: Vec<u32>) -> Line {
        if deps.is_empty() {
            if let Some(&l) = self.theorems.get(&formula) {
                return l;
            }
        }
        let l = Line(self.nodes.len() as u32);
        if deps.is_empty() {
            self.theorems.insert(formula.clone(), l);
        }
        self.nodes.push(Node {
            formula,
            kind,
            deps,
        });
        l
    }

    fn usable(&self, l: Line) -> Result<(), BuildError> {
        if self.node(l).deps.iter().all(|&h| self.open[h as usize]) {
            Ok(())
        } else {
            Err(BuildError::Discharged)
        }
    }

    /// An axiom instance.
    pub fn ax(&mut self, scheme: &str, binding: &[(&str, &Formula)]) -> Result<Line, BuildError> {
        if !self.logic.has_scheme(scheme) {
            return Err(BuildError::SchemeNotInLogic(scheme.to_string()));
        }
        let binding: Binding = binding
            .iter()
            .map(|(k, v)| (k.trim_start_matches('?').to_string(), normalize(v)))
            .collect();
        let formula = self.reg.instance(scheme, &binding)?;
        Ok(self.push(formula, Kind::Axiom(scheme.to_string(), binding), Vec::new()))
    }

    /// An axiom instance with bindings given as formula text.
    pub fn ax_str(&mut self, scheme: &str, binding: &[(&str, &str)]) -> Result<Line, BuildError> {
        let parsed = binding
            .iter()
            .map(|(k, v)| Ok((*k, f(v)?)))
            .collect::<Result<Vec<_>, BuildError>>()?;
        let refs: Vec<(&str, &Formula)> = parsed.iter().map(|(k, v)| (*k, v)).collect();
        self.ax(scheme, &refs)
    }

    /// From `minor: φ` and `major: φ → ψ`, the line `ψ`.
    pub fn mp(&mut self, minor: Line, major: Line) -> Result<Line, BuildError> {
        self.usable(minor)?;
        self.usable(major)?;
        let (a, b) = (self.node(minor), self.node(major));
        let concl = match &b.formula {
            Formula::Imp(l, r) if **l == a.formula => (**r).clone(),
            _ => {
                return Err(BuildError::MpShape {
                    minor: a.formula.clone(),
                    major: b.formula.clone(),
                })
            }
        };
        let deps = union(&a.deps, &b.deps);
        Ok(self.push(concl, Kind::Mp(minor, major), deps))
    }

    /// From a theorem `φ → ψ`, the line `φ ⤳ ψ`.
    pub fn nec(&mut self, l: Line) -> Result<Line, BuildError> {
        let n = self.node(l);
        if !n.deps.is_empty() {
            return Err(BuildError::NecDependent(n.formula.clone()));
        }
        let concl = match &n.formula {
            Formula::Imp(a, b) => Formula::Strictif(a.clone(), b.clone()),
            other => return Err(BuildError::NecShape(other.clone())),
        };
        Ok(self.push(concl, Kind::Nec(l), Vec::new()))
    }

    /// From a theorem `φ`, the line `□φ`.
    pub fn necessitate(&mut self, l: Line) -> Result<Line, BuildError> {
        let phi = self.formula(l).clone();
        let imp = self.ipc_from(&[l], &Formula::imp(Formula::Top, phi))?;
        self.nec(imp)
    }

    /// Opens a hypothesis.
    pub fn assume(&mut self, hyp: &Formula) -> Line {
        let id = self.open.len() as u32;
        self.open.push(true);
        self.hyp_forms.push(normalize(hyp));
        self.push(normalize(hyp), Kind::Hyp(id), vec![id])
    }

    /// Closes hypothesis `hyp`, turning `concl` into `hyp → concl`.
    pub fn discharge(&mut self, hyp: Line, concl: Line) -> Result<Line, BuildError> {
        let id = match self.node(hyp).kind {
            Kind::Hyp(id) => id,
            _ => return Err(BuildError::NotHypothesis),
        };
        self.usable(hyp)?;
        self.usable(concl)?;
        let out = self.deduct(id, concl)?;
        self.open[id as usize] = false;
        Ok(out)
    }

    fn deduct(&mut self, h: u32, x: Line) -> Result<Line, BuildError> {
        if let Some(&l) = self.deduced.get(&(h, x)) {
            return Ok(l);
        }
        let hf = self.hyp_forms[h as usize].clone();
        let node = self.node(x).clone();
        let out = if !node.deps.contains(&h) {
            let k = self.ax("K", &[("phi", &node.formula), ("psi", &hf)])?;
            self.mp(x, k)?
        } else {
            match node.kind {
                Kind::Hyp(_) => {
                    let hh = Formula::imp(hf.clone(), hf.clone());
                    let k1 = self.ax("K", &[("phi", &hf), ("psi", &hh)])?;
                    let s = self.ax("S", &[("phi", &hf), ("psi", &hh), ("chi", &hf)])?;
                    let k2 = self.ax("K", &[("phi", &hf), ("psi", &hf)])?;
                    let t = self.mp(k1, s)?;
                    self.mp(k2, t)?
                }
                Kind::Mp(a, b) => {
                    let fa = self.formula(a).clone();
                    let da = self.deduct(h, a)?;
                    let db = self.deduct(h, b)?;
                    let s = self.ax("S", &[("phi", &hf), ("psi", &fa), ("chi", &node.formula)])?;
                    let t = self.mp(db, s)?;
                    self.mp(da, t)?
                }
                Kind::Axiom(..) | Kind::Nec(_) => unreachable!("closed lines have no dependencies"),
            }
        };
        self.deduced.insert((h, x), out);
        Ok(out)
    }

    /// A propositional tautology, with modal subformulas treated as atoms.
    pub fn ipc(&mut self, goal: &Formula) -> Result<Line, BuildError> {
        let goal = normalize(goal);
        if let Some(&l) = self.theorems.get(&goal) {
            return Ok(l);
        }
        let tree = self
            .prover
            .tree(&[], &goal)
            .ok_or_else(|| BuildError::NotIpc(goal.clone()))?;
        let mut ctx = Vec::new();
        self.extract(&tree, &mut ctx, &goal)
    }

    /// `goal`, propositionally from the given lines.
    pub fn ipc_from(&mut self, lines: &[Line], goal: &Formula) -> Result<Line, BuildError> {
        let hyps: Vec<Formula> = lines.iter().map(|&l| self.formula(l).clone()).collect();
        let mut cur = self.ipc(&Formula::imps(&hyps, normalize(goal)))?;
        for &l in lines {
            cur = self.mp(l, cur)?;
        }
        Ok(cur)
    }

    /// As [`Derivation::ipc_from`] with the goal given as text.
    pub fn have(&mut self, lines: &[Line], goal: &str) -> Result<Line, BuildError> {
        let g = f(goal)?;
        self.ipc_from(lines, &g)
    }

    fn lookup(&self, ctx: &[(Formula, Line)], f: &Formula) -> Line {
        ctx.iter()
            .rev()
            .find(|(g, _)| g == f)
            .map(|(_, l)| *l)
            .expect("antecedent in context")
    }

    fn extract(&mut self, tree: &Tree, ctx: &mut Vec<(Formula, Line)>, goal: &Formula) -> Result<Line, BuildError> {
        let mark = ctx.len();
        let out = self.extract_inner(tree, ctx, goal);
        ctx.truncate(mark);
        out
    }

    fn extract_inner(&mut self, tree: &Tree, ctx: &mut Vec<(Formula, Line)>, goal: &Formula) -> Result<Line, BuildError> {
        let parts = |f: &Formula| -> (Formula, Formula) {
            match f {
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
                _ => unreachable!("tree does not match formula"),
            }
        };
        match tree {
            Tree::Id(f) => Ok(self.lookup(ctx, f)),
            Tree::BotL(bot) => {
                let l = self.lookup(ctx, bot);
                let e = self.ax("efq", &[("phi", goal)])?;
                self.mp(l, e)
            }
            Tree::TopR => self.ax("top", &[]),
            Tree::AndL(f, sub) => {
                let (a, b) = parts(f);
                let l = self.lookup(ctx, f);
                let e1 = self.ax("and_e1", &[("phi", &a), ("psi", &b)])?;
                let e2 = self.ax("and_e2", &[("phi", &a), ("psi", &b)])?;
                let la = self.mp(l, e1)?;
                let lb = self.mp(l, e2)?;
                ctx.push((a, la));
                ctx.push((b, lb));
                self.extract(sub, ctx, goal)
            }
            Tree::OrL(f, left, right) => {
                let (a, b) = parts(f);
                let l = self.lookup(ctx, f);
                let ha = self.assume(&a);
                ctx.push((a.clone(), ha));
                let ra = self.extract(left, ctx, goal)?;
                ctx.pop();
                let da = self.discharge(ha, ra)?;
                let hb = self.assume(&b);
                ctx.push((b.clone(), hb));
                let rb = self.extract(right, ctx, goal)?;
                ctx.pop();
                let db = self.discharge(hb, rb)?;
                let e = self.ax("or_e", &[("phi", &a), ("psi", &b), ("chi", goal)])?;
                let t = self.mp(da, e)?;
                let t = self.mp(db, t)?;
                self.mp(l, t)
            }
            Tree::Drop(sub) => self.extract(sub, ctx, goal),
            Tree::ImpTopL(f, sub) => {
                let (_, b) = parts(f);
                let l = self.lookup(ctx, f);
                let top = self.ax("top", &[])?;
                let lb = self.mp(top, l)?;
                ctx.push((b, lb));
                self.extract(sub, ctx, goal)
            }
            Tree::ImpAndL(f, sub) => {
                let (cd, _) = parts(f);
                let (c, d) = parts(&cd);
                let l = self.lookup(ctx, f);
                let hc = self.assume(&c);
                let hd = self.assume(&d);
                let i = self.ax("and_i", &[("phi", &c), ("psi", &d)])?;
                let t = self.mp(hc, i)?;
                let both = self.mp(hd, t)?;
                let lb = self.mp(both, l)?;
                let dd = self.discharge(hd, lb)?;
                let dc = self.discharge(hc, dd)?;
                ctx.push((self.formula(dc).clone(), dc));
                self.extract(sub, ctx, goal)
            }
            Tree::ImpOrL(f, sub) => {
                let (cd, b) = parts(f);
                let (c, d) = parts(&cd);
                let l = self.lookup(ctx, f);
                for (x, intro) in [(c.clone(), "or_i1"), (d.clone(), "or_i2")] {
                    let hx = self.assume(&x);
                    let i = self.ax(intro, &[("phi", &c), ("psi", &d)])?;
                    let t = self.mp(hx, i)?;
                    let lb = self.mp(t, l)?;
                    let dx = self.discharge(hx, lb)?;
                    ctx.push((Formula::imp(x, b.clone()), dx));
                }
                self.extract(sub, ctx, goal)
            }
            Tree::ImpAtomL(f, p, sub) => {
                let (_, b) = parts(f);
                let l = self.lookup(ctx, f);
                let lp = self.lookup(ctx, p);
                let lb = self.mp(lp, l)?;
                ctx.push((b, lb));
                self.extract(sub, ctx, goal)
            }
            Tree::AndR(left, right) => {
                let (a, b) = parts(goal);
                let la = self.extract(left, ctx, &a)?;
                let lb = self.extract(right, ctx, &b)?;
                let i = self.ax("and_i", &[("phi", &a), ("psi", &b)])?;
                let t = self.mp(la, i)?;
                self.mp(lb, t)
            }
            Tree::ImpR(sub) => {
                let (a, b) = parts(goal);
                let ha = self.assume(&a);
                ctx.push((a, ha));
                let r = self.extract(sub, ctx, &b)?;
                ctx.pop();
                self.discharge(ha, r)
            }
            Tree::OrR1(sub) | Tree::OrR2(sub) => {
                let (a, b) = parts(goal);
                let (x, intro) = match tree {
                    Tree::OrR1(_) => (a.clone(), "or_i1"),
                    _ => (b.clone(), "or_i2"),
                };
                let lx = self.extract(sub, ctx, &x)?;
                let i = self.ax(intro, &[("phi", &a), ("psi", &b)])?;
                self.mp(lx, i)
            }
            Tree::ImpImpL(f, first, second) => {
                let (cd, b) = parts(f);
                let (c, d) = parts(&cd);
                let l = self.lookup(ctx, f);
                let hd = self.assume(&d);
                let k = self.ax("K", &[("phi", &d), ("psi", &c)])?;
                let lcd = self.mp(hd, k)?;
                let lb = self.mp(lcd, l)?;
                let db = self.discharge(hd, lb)?;
                ctx.push((Formula::imp(d, b.clone()), db));
                let got = self.extract(first, ctx, &cd)?;
                ctx.pop();
                let lb = self.mp(got, l)?;
                ctx.push((b, lb));
                self.extract(second, ctx, goal)
            }
        }
    }

    /// The Hilbert proof of `target`, keeping only the lines it uses.
    pub fn finish(&self, target: Line) -> Result<Proof, BuildError> {
        let t = self.node(target);
        if !t.deps.is_empty() {
            return Err(BuildError::Open(t.formula.clone()));
        }
        let mut index: HashMap<Line, usize> = HashMap::new();
        let mut steps = Vec::new();
        let mut stack = vec![(target, false)];
        while let Some((l, expanded)) = stack.pop() {
            if index.contains_key(&l) {
                continue;
            }
            let node = self.node(l);
            let children: Vec<Line> = match node.kind {
                Kind::Mp(a, b) => vec![a, b],
                Kind::Nec(a) => vec![a],
                _ => Vec::new(),
            };
            if !expanded {
                stack.push((l, true));
                for c in children.into_iter().rev() {
                    if !index.contains_key(&c) {
                        stack.push((c, false));
                    }
                }
                continue;
            }
            let just = match &node.kind {
                Kind::Axiom(s, b) => Justification::Axiom {
                    scheme: s.clone(),
                    binding: b.clone(),
                },
                Kind::Mp(a, b) => Justification::Mp(index[a], index[b]),
                Kind::Nec(a) => Justification::Nec(index[a]),
                Kind::Hyp(_) => unreachable!("closed line depends on a hypothesis"),
            };
            index.insert(l, steps.len());
            steps.push(Step {
                just,
                conclusion: node.formula.clone(),
            });
        }
        Ok(Proof {
            goal: t.formula.clone(),
            steps,
        })
    }
}
