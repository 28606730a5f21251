//! Intuitionistic propositional provability via a contraction-free sequent calculus (G4ip).
//!
//! Formulas are hash-consed into an arena; sequents are a sorted set of antecedent ids plus a
//! goal id, and results are memoized per sequent. Because every rule shrinks the multiset
//! weight of the sequent, backward search terminates without loop checks.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{normalize, Formula};
use crate::kripke::{forces, frame_refutation, Frame, Model, Preframe};
use crate::search::natural_posets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IpcError {
    #[error("modal connective in {0}")]
    Modal(Formula),
    #[error("metavariable in {0}")]
    Metavariable(Formula),
}

fn check_plain(f: &Formula) -> Result<(), IpcError> {
    if f.is_modal() {
        return Err(IpcError::Modal(f.clone()));
    }
    if f.has_meta() {
        return Err(IpcError::Metavariable(f.clone()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Bot,
    Top,
    Atom,
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
}

/// Derivation tree in G4ip. Each left rule names the antecedent formula it acts on.
#[derive(Debug, Clone)]
pub(crate) enum Tree {
    /// The goal is an antecedent.
    Id(Formula),
    BotL(Formula),
    TopR,
    AndL(Formula, Box<Tree>),
    OrL(Formula, Box<Tree>, Box<Tree>),
    /// `⊤` or `⊥ → B` on the left is dropped.
    Drop(Box<Tree>),
    ImpTopL(Formula, Box<Tree>),
    ImpAndL(Formula, Box<Tree>),
    ImpOrL(Formula, Box<Tree>),
    /// `p → B` with `p` an antecedent.
    ImpAtomL(Formula, Formula, Box<Tree>),
    AndR(Box<Tree>, Box<Tree>),
    ImpR(Box<Tree>),
    OrR1(Box<Tree>),
    OrR2(Box<Tree>),
    /// `(C → D) → B`: the first subtree proves `C → D` from `D → B`, the second continues with `B`.
    ImpImpL(Formula, Box<Tree>, Box<Tree>),
}

type Key = (Arc<[u32]>, u32);

/// A reusable prover. Modal subformulas and metavariables are treated as opaque atoms here;
/// the public entry points reject them.
#[derive(Debug, Default)]
pub struct Prover {
    nodes: Vec<Node>,
    forms: Vec<Formula>,
    ids: HashMap<Node, u32>,
    atoms: HashMap<Formula, u32>,
    memo: HashMap<Key, bool>,
}

enum Step {
    Closed,
    Left(u32, Vec<Vec<u32>>),
    Invertible(Vec<(Vec<u32>, u32)>),
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    fn intern(&mut self, node: Node, form: impl FnOnce() -> Formula) -> u32 {
        if node != Node::Atom {
            if let Some(&id) = self.ids.get(&node) {
                return id;
            }
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.forms.push(form());
        if node != Node::Atom {
            self.ids.insert(node, id);
        }
        id
    }

    fn id(&mut self, f: &Formula) -> u32 {
        match f {
            Formula::Bot => self.intern(Node::Bot, || Formula::Bot),
            Formula::Top => self.intern(Node::Top, || Formula::Top),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                let (x, y) = (self.id(a), self.id(b));
                let node = match f {
                    Formula::And(..) => Node::And(x, y),
                    Formula::Or(..) => Node::Or(x, y),
                    _ => Node::Imp(x, y),
                };
                self.intern(node, || f.clone())
            }
            _ => {
                if let Some(&id) = self.atoms.get(f) {
                    return id;
                }
                let id = self.intern(Node::Atom, || f.clone());
                self.atoms.insert(f.clone(), id);
                id
            }
        }
    }

    fn mk(&mut self, node: Node) -> u32 {
        let forms = &self.forms;
        let form = || match node {
            Node::And(a, b) => Formula::and(forms[a as usize].clone(), forms[b as usize].clone()),
            Node::Or(a, b) => Formula::or(forms[a as usize].clone(), forms[b as usize].clone()),
            Node::Imp(a, b) => Formula::imp(forms[a as usize].clone(), forms[b as usize].clone()),
            Node::Bot => Formula::Bot,
            Node::Top => Formula::Top,
            Node::Atom => unreachable!(),
        };
        let f = form();
        self.intern(node, || f)
    }

    /// Decides `hyps ⊢ goal` in IPC, treating modal subformulas as atoms.
    pub(crate) fn proves_opaque(&mut self, hyps: &[Formula], goal: &Formula) -> bool {
        let (ctx, g) = self.sequent(hyps, goal);
        self.prove(ctx, g)
    }

    fn sequent(&mut self, hyps: &[Formula], goal: &Formula) -> (Vec<u32>, u32) {
        let mut ctx: Vec<u32> = hyps.iter().map(|h| self.id(&normalize(h))).collect();
        ctx.sort_unstable();
        ctx.dedup();
        (ctx, self.id(&normalize(goal)))
    }

    /// Decides IPC provability of `f`.
    pub fn proves(&mut self, f: &Formula) -> Result<bool, IpcError> {
        check_plain(f)?;
        Ok(self.proves_opaque(&[], f))
    }

    pub fn proves_sequent(&mut self, s: &IpcSequent) -> bool {
        self.proves_opaque(&s.antecedent, &s.succedent)
    }

    fn with(ctx: &[u32], add: &[u32], remove: Option<u32>) -> Vec<u32> {
        let mut out: Vec<u32> = ctx.iter().copied().filter(|&x| Some(x) != remove).collect();
        out.extend_from_slice(add);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Finds the first applicable axiom or invertible rule.
    fn step(&mut self, ctx: &[u32], g: u32) -> Step {
        let goal = self.nodes[g as usize];
        if goal == Node::Top || ctx.contains(&g) {
            return Step::Closed;
        }
        for &h in ctx {
            match self.nodes[h as usize] {
                Node::Bot => return Step::Closed,
                Node::Top => return Step::Left(h, vec![Self::with(ctx, &[], Some(h))]),
                Node::And(a, b) => return Step::Left(h, vec![Self::with(ctx, &[a, b], Some(h))]),
                Node::Or(a, b) => {
                    return Step::Left(
                        h,
                        vec![Self::with(ctx, &[a], Some(h)), Self::with(ctx, &[b], Some(h))],
                    )
                }
                Node::Imp(a, b) => match self.nodes[a as usize] {
                    Node::Bot => return Step::Left(h, vec![Self::with(ctx, &[], Some(h))]),
                    Node::Top => return Step::Left(h, vec![Self::with(ctx, &[b], Some(h))]),
                    Node::And(c, d) => {
                        let db = self.mk(Node::Imp(d, b));
                        let cdb = self.mk(Node::Imp(c, db));
                        return Step::Left(h, vec![Self::with(ctx, &[cdb], Some(h))]);
                    }
                    Node::Or(c, d) => {
                        let cb = self.mk(Node::Imp(c, b));
                        let db = self.mk(Node::Imp(d, b));
                        return Step::Left(h, vec![Self::with(ctx, &[cb, db], Some(h))]);
                    }
                    Node::Atom if ctx.contains(&a) => {
                        return Step::Left(h, vec![Self::with(ctx, &[b], Some(h))])
                    }
                    _ => {}
                },
                Node::Atom => {}
            }
        }
        match goal {
            Node::And(a, b) => Step::Invertible(vec![(ctx.to_vec(), a), (ctx.to_vec(), b)]),
            Node::Imp(a, b) => Step::Invertible(vec![(Self::with(ctx, &[a], None), b)]),
            _ => Step::Invertible(Vec::new()),
        }
    }

    /// Premises of the non-invertible rules, in the order they are tried.
    fn choices(&mut self, ctx: &[u32], g: u32) -> Vec<[(Vec<u32>, u32); 2]> {
        let mut out = Vec::new();
        let none = u32::MAX;
        if let Node::Or(a, b) = self.nodes[g as usize] {
            out.push([(ctx.to_vec(), a), (Vec::new(), none)]);
            out.push([(ctx.to_vec(), b), (Vec::new(), none)]);
        }
        for &h in ctx {
            if let Node::Imp(cd, b) = self.nodes[h as usize] {
                if let Node::Imp(c, d) = self.nodes[cd as usize] {
                    let db = self.mk(Node::Imp(d, b));
                    let first = (Self::with(ctx, &[db], Some(h)), cd);
                    let _ = c;
                    let second = (Self::with(ctx, &[b], Some(h)), g);
                    out.push([first, second]);
                }
            }
        }
        out
    }

    fn prove(&mut self, ctx: Vec<u32>, g: u32) -> bool {
        let key: Key = (ctx.into(), g);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let ctx = &key.0;
        let result = match self.step(ctx, g) {
            Step::Closed => true,
            Step::Left(_, premises) => premises.into_iter().all(|p| self.prove(p, g)),
            Step::Invertible(premises) if !premises.is_empty() => {
                premises.into_iter().all(|(c, h)| self.prove(c, h))
            }
            Step::Invertible(_) => {
                let choices = self.choices(ctx, g);
                choices.into_iter().any(|[first, second]| {
                    self.prove(first.0, first.1) && (second.1 == u32::MAX || self.prove(second.0, second.1))
                })
            }
        };
        self.memo.insert(key, result);
        result
    }

    fn form(&self, id: u32) -> Formula {
        self.forms[id as usize].clone()
    }

    /// A G4ip derivation of `hyps ⊢ goal`, or `None` when the sequent is not provable.
    pub(crate) fn tree(&mut self, hyps: &[Formula], goal: &Formula) -> Option<Tree> {
        let (ctx, g) = self.sequent(hyps, goal);
        if !self.prove(ctx.clone(), g) {
            return None;
        }
        Some(self.build(ctx, g))
    }

    fn build(&mut self, ctx: Vec<u32>, g: u32) -> Tree {
        if self.nodes[g as usize] == Node::Top {
            return Tree::TopR;
        }
        if ctx.contains(&g) {
            return Tree::Id(self.form(g));
        }
        match self.step(&ctx, g) {
            Step::Closed => {
                let bot = ctx
                    .iter()
                    .copied()
                    .find(|&h| self.nodes[h as usize] == Node::Bot)
                    .expect("closed sequent without axiom");
                Tree::BotL(self.form(bot))
            }
            Step::Left(h, mut premises) => {
                let f = self.form(h);
                let first = premises.remove(0);
                let sub = Box::new(self.build(first, g));
                match self.nodes[h as usize] {
                    Node::Top => Tree::Drop(sub),
                    Node::And(..) => Tree::AndL(f, sub),
                    Node::Or(..) => {
                        let right = Box::new(self.build(premises.remove(0), g));
                        Tree::OrL(f, sub, right)
                    }
                    Node::Imp(a, _) => match self.nodes[a as usize] {
                        Node::Bot => Tree::Drop(sub),
                        Node::Top => Tree::ImpTopL(f, sub),
                        Node::And(..) => Tree::ImpAndL(f, sub),
                        Node::Or(..) => Tree::ImpOrL(f, sub),
                        _ => Tree::ImpAtomL(f, self.form(a), sub),
                    },
                    _ => unreachable!(),
                }
            }
            Step::Invertible(mut premises) if !premises.is_empty() => match self.nodes[g as usize] {
                Node::And(..) => {
                    let (c2, g2) = premises.pop().unwrap();
                    let (c1, g1) = premises.pop().unwrap();
                    Tree::AndR(Box::new(self.build(c1, g1)), Box::new(self.build(c2, g2)))
                }
                _ => {
                    let (c, h) = premises.pop().unwrap();
                    Tree::ImpR(Box::new(self.build(c, h)))
                }
            },
            Step::Invertible(_) => {
                let is_or = matches!(self.nodes[g as usize], Node::Or(..));
                let choices = self.choices(&ctx, g);
                for (i, [first, second]) in choices.into_iter().enumerate() {
                    let ok = self.prove(first.0.clone(), first.1)
                        && (second.1 == u32::MAX || self.prove(second.0.clone(), second.1));
                    if !ok {
                        continue;
                    }
                    let sub = Box::new(self.build(first.0, first.1));
                    if is_or && i < 2 {
                        return if i == 0 { Tree::OrR1(sub) } else { Tree::OrR2(sub) };
                    }
                    // recover the principal formula: the antecedent removed in `second`
                    let removed = ctx
                        .iter()
                        .copied()
                        .find(|h| !second.0.contains(h))
                        .expect("principal formula");
                    let cont = Box::new(self.build(second.0, second.1));
                    return Tree::ImpImpL(self.form(removed), sub, cont);
                }
                unreachable!("provable sequent without a successful rule")
            }
        }
    }
}

/// An IPC sequent `Γ ⇒ φ` over modal-free formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpcSequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl IpcSequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Formula) -> Result<IpcSequent, IpcError> {
        for f in antecedent.iter().chain(std::iter::once(&succedent)) {
            check_plain(f)?;
        }
        Ok(IpcSequent {
            antecedent,
            succedent,
        })
    }

    pub fn proves(&self) -> bool {
        Prover::new().proves_sequent(self)
    }
}

/// Whether `f` is an IPC theorem.
pub fn ipc_proves(f: &Formula) -> Result<bool, IpcError> {
    Prover::new().proves(f)
}

/// Verdict with the countermodel flag: on failure, whether a refuting poset model with at most
/// `max_n` worlds was found (it always exists for some size).
#[derive(Debug, Clone)]
pub enum IpcVerdict {
    Provable,
    Unprovable(Option<(Model, usize)>),
}

impl IpcVerdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, IpcVerdict::Provable)
    }
}

pub fn ipc_decide(f: &Formula, max_n: usize) -> Result<IpcVerdict, IpcError> {
    if ipc_proves(f)? {
        return Ok(IpcVerdict::Provable);
    }
    Ok(IpcVerdict::Unprovable(poset_countermodel(f, max_n)))
}

pub fn ipc_equiv(f: &Formula, g: &Formula) -> Result<bool, IpcError> {
    let mut p = Prover::new();
    Ok(p.proves(&Formula::imp(f.clone(), g.clone()))? && p.proves(&Formula::imp(g.clone(), f.clone()))?)
}

/// Searches rooted posets (empty modal relation) of up to `max_n` worlds for a model refuting
/// `f` at the root. Sizes above 6 are not tried.
pub fn poset_countermodel(f: &Formula, max_n: usize) -> Option<(Model, usize)> {
    let f = normalize(f);
    for n in 1..=max_n.min(6) {
        for up in natural_posets(n) {
            if up[0] != crate::kripke::full(n) {
                continue;
            }
            let frame = Frame::new_unchecked(Preframe::from_masks_unchecked(up, vec![0; n]));
            // truth sets are upsets, so failing anywhere means failing at the root
            if let Some((val, _)) = frame_refutation(&frame, &f) {
                let model = Model::new(frame, val).expect("upset valuation");
                debug_assert!(!forces(&model, 0, &f));
                return Some((model, 0));
            }
        }
    }
    None
}
