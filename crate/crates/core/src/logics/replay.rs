//! Named derivations of the fixture library.
//!
//! Each fixture fixes a logic, a goal over the atoms `p`, `q`, `r` and a builder that
//! produces a Hilbert proof of the goal. Since the logics are closed under substitution,
//! a proof of the atomic instance covers the whole scheme.

use thiserror::Error;

use super::builder::f;
use super::{check_proof, BuildError, Derivation, Line, LogicError, Proof, Registry, Rejection};
use crate::formula::{normalize, Formula};

type R = Result<Line, BuildError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("derived {got}, expected {expected}")]
    Goal { expected: Formula, got: Formula },
    #[error("proof rejected: {0}")]
    Rejected(#[from] Rejection),
    #[error("no fixture named {0:?}")]
    Unknown(String),
}

pub struct Fixture {
    pub name: &'static str,
    /// Logic expression understood by [`Registry::logic`].
    pub logic: &'static str,
    pub goal: &'static str,
    build: fn(&mut Derivation) -> R,
}

impl std::fmt::Debug for Fixture {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("Fixture")
            .field("name", &self.name)
            .field("logic", &self.logic)
            .field("goal", &self.goal)
            .finish()
    }
}

impl Fixture {
    pub fn goal(&self) -> Formula {
        f(self.goal).expect("fixture goals parse")
    }

    /// Builds the proof and runs it through [`check_proof`].
    pub fn derive(&self, reg: &Registry) -> Result<Proof, ReplayError> {
        let logic = reg.logic(self.logic)?;
        let mut d = Derivation::new(reg, &logic);
        let line = (self.build)(&mut d)?;
        let goal = self.goal();
        if d.formula(line) != &goal {
            return Err(ReplayError::Goal {
                expected: goal,
                got: d.formula(line).clone(),
            });
        }
        let proof = d.finish(line)?;
        check_proof(reg, &logic, &proof)?;
        Ok(proof)
    }
}

pub fn library() -> &'static [Fixture] {
    LIBRARY
}

pub fn fixture(name: &str) -> Result<&'static Fixture, ReplayError> {
    LIBRARY
        .iter()
        .find(|fx| fx.name == name)
        .ok_or_else(|| ReplayError::Unknown(name.to_string()))
}

// ---- helpers ----

trait Term {
    fn term(&self) -> Result<Formula, BuildError>;
}

impl Term for &str {
    fn term(&self) -> Result<Formula, BuildError> {
        f(self)
    }
}

impl Term for &Formula {
    fn term(&self) -> Result<Formula, BuildError> {
        Ok(normalize(self))
    }
}

fn strict_parts(d: &Derivation, l: Line) -> Result<(Formula, Formula), BuildError> {
    strict_parts_of(d.formula(l))
}

fn imp_parts(x: &Formula) -> Result<(Formula, Formula), BuildError> {
    x.as_imp()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| BuildError::NecShape(x.clone()))
}

fn hyp(d: &mut Derivation, h: &str) -> R {
    Ok(d.assume(&f(h)?))
}

/// `a ⤳ b` from the propositional theorem `a → b`.
fn arrow(d: &mut Derivation, a: impl Term, b: impl Term) -> R {
    let l = d.ipc(&Formula::imp(a.term()?, b.term()?))?;
    d.nec(l)
}

fn tr(d: &mut Derivation, l1: Line, l2: Line) -> R {
    let (a, b) = strict_parts(d, l1)?;
    let (_, c) = strict_parts(d, l2)?;
    let t = d.ax("Tr", &[("phi", &a), ("psi", &b), ("chi", &c)])?;
    let t = d.mp(l1, t)?;
    d.mp(l2, t)
}

/// Strengthens the antecedent of `l: a ⤳ b` to `x`, given `x → a`.
fn pre(d: &mut Derivation, x: impl Term, l: Line) -> R {
    let (a, _) = strict_parts(d, l)?;
    let w = arrow(d, x, &a)?;
    tr(d, w, l)
}

/// Weakens the consequent of `l: a ⤳ b` to `y`, given `b → y`.
fn post(d: &mut Derivation, l: Line, y: impl Term) -> R {
    let (_, b) = strict_parts(d, l)?;
    let w = arrow(d, &b, y)?;
    tr(d, l, w)
}

/// `a ⤳ b` and `a ⤳ c` give `a ⤳ (b ∧ c)`.
fn kand(d: &mut Derivation, l1: Line, l2: Line) -> R {
    let (a, b) = strict_parts(d, l1)?;
    let (_, c) = strict_parts(d, l2)?;
    let k = d.ax("K_arrow", &[("phi", &a), ("psi", &b), ("chi", &c)])?;
    let k = d.mp(l1, k)?;
    d.mp(l2, k)
}

/// `a ⤳ x` and `a ⤳ (x → y)` give `a ⤳ y`.
fn kmp(d: &mut Derivation, l1: Line, l2: Line) -> R {
    let (_, ximp) = strict_parts(d, l2)?;
    let (_, y) = imp_parts(&ximp)?;
    let both = kand(d, l1, l2)?;
    post(d, both, &y)
}

/// `□(a → b)` gives `a ⤳ b`.
fn bl(d: &mut Derivation, l: Line) -> R {
    let (_, body) = strict_parts(d, l)?;
    let (a, _) = imp_parts(&body)?;
    let w = pre(d, &a, l)?;
    let id = arrow(d, &a, &a)?;
    kmp(d, id, w)
}

/// Closed theorem `(a ⤳ b) → □a → □b`.
fn lb_theorem(d: &mut Derivation, a: &Formula, b: &Formula) -> R {
    let h1 = d.assume(&Formula::strict(a.clone(), b.clone()));
    let h2 = d.assume(&Formula::boxed(a.clone()));
    let t = tr(d, h2, h1)?;
    let t = d.discharge(h2, t)?;
    d.discharge(h1, t)
}

/// `□a` from `a`, via the strength axiom.
fn strength(d: &mut Derivation, l: Line) -> R {
    let a = d.formula(l).clone();
    let s = d.ax("S_box", &[("phi", &a)])?;
    d.mp(l, s)
}

/// `a ⤳ □a`, from the axiom if present and from strength otherwise.
fn four(d: &mut Derivation, a: impl Term) -> R {
    let a = a.term()?;
    if d.logic().has_scheme("4_arrow") {
        d.ax("4_arrow", &[("phi", &a)])
    } else {
        let s = d.ax("S_box", &[("phi", &a)])?;
        d.nec(s)
    }
}

/// `(□a → a) ⤳ a` from the box Löb axiom and a source of `4⤳`.
fn l_arrow_from_box(d: &mut Derivation, a: impl Term) -> R {
    let a = a.term()?;
    let loop_f = Formula::imp(Formula::boxed(a.clone()), a.clone());
    let up = four(d, &loop_f)?;
    let lbox = d.ax("L_box", &[("phi", &a)])?;
    let lbox = d.nec(lbox)?;
    let b = tr(d, up, lbox)?;
    let id = arrow(d, &loop_f, &loop_f)?;
    kmp(d, b, id)
}

/// `a → □b` from `l: a ⤳ b` in a strong logic.
fn s_prime(d: &mut Derivation, l: Line) -> R {
    let (a, _) = strict_parts(d, l)?;
    let ha = d.assume(&a);
    let s = strength(d, ha)?;
    let t = tr(d, s, l)?;
    d.discharge(ha, t)
}

/// `a ⤳ b` from `l: a → □b` in a strong logic with `C4⤳`.
fn hug(d: &mut Derivation, l: Line) -> R {
    let s = strength(d, l)?;
    let ab = bl(d, s)?;
    let (_, bb) = strict_parts(d, ab)?;
    let (_, b) = strict_parts_of(&bb)?;
    let c = d.ax("C4_arrow", &[("phi", &b)])?;
    tr(d, ab, c)
}

fn strict_parts_of(x: &Formula) -> Result<(Formula, Formula), BuildError> {
    match x {
        Formula::Strictif(a, b) => Ok(((**a).clone(), (**b).clone())),
        other => Err(BuildError::NotStrict(other.clone())),
    }
}

/// `□(a → b)` from `l: a ⤳ b` using the Box axiom.
fn box_ax(d: &mut Derivation, l: Line) -> R {
    let (a, b) = strict_parts(d, l)?;
    let x = d.ax("Box", &[("phi", &a), ("psi", &b)])?;
    d.mp(l, x)
}

/// `□(a → b)` from `l: a ⤳ b` by a case split on `CB⤳` in a strong logic.
fn box_cb(d: &mut Derivation, l: Line) -> R {
    let (a, b) = strict_parts(d, l)?;
    let ab = Formula::imp(a.clone(), b.clone());
    let disj = d.ax("CB_arrow", &[("phi", &a), ("psi", &b)])?;
    let disj = d.mp(l, disj)?;
    let c1 = d.ax("S_box", &[("phi", &ab)])?;
    let ha = d.assume(&a);
    let s = strength(d, ha)?;
    let t = tr(d, s, l)?;
    let t = post(d, t, &ab)?;
    let c2 = d.discharge(ha, t)?;
    d.ipc_from(&[disj, c1, c2], &Formula::boxed(ab))
}

/// `□(a → b)` from `l: a ⤳ b` through `kmlin_b`.
fn box_kmlin(d: &mut Derivation, l: Line) -> R {
    let (a, b) = strict_parts(d, l)?;
    let lbt = lb_theorem(d, &a, &b)?;
    let x = d.mp(l, lbt)?;
    let k = d.ax("kmlin_b", &[("phi", &a), ("psi", &b)])?;
    d.mp(x, k)
}

/// Discharges a one-hypothesis rule given as a function on lines.
fn lift(d: &mut Derivation, h: &str, rule: fn(&mut Derivation, Line) -> R) -> R {
    let h = hyp(d, h)?;
    let c = rule(d, h)?;
    d.discharge(h, c)
}

fn ax_mp(d: &mut Derivation, minor: Line, scheme: &str, binding: &[(&str, &str)]) -> R {
    let a = d.ax_str(scheme, binding)?;
    d.mp(minor, a)
}

// ---- K variants, Di, BL and LB ----

const K: &str = "p ~> q -> p ~> r -> p ~> (q /\\ r)";
const K1: &str = "p ~> q -> (p /\\ r) ~> (q /\\ r)";
const K2: &str = "p ~> q -> p ~> (q -> r) -> p ~> r";
const K3: &str = "p ~> (q -> r) -> (p /\\ q) ~> r";
const DI: &str = "p ~> r -> q ~> r -> (p \\/ q) ~> r";
const DI1: &str = "p ~> q -> (p \\/ r) ~> (q \\/ r)";
const BOX: &str = "p ~> q -> [](p -> q)";
const W: &str = "(p /\\ []q) ~> q -> p ~> q";
const M: &str = "p ~> q -> ([]r -> p) ~> ([]r -> q)";

fn k_to_k1(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = pre(d, "p /\\ r", h)?;
    let b = arrow(d, "p /\\ r", "r")?;
    let c = kand(d, a, b)?;
    d.discharge(h, c)
}

fn k1_to_k(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p ~> q")?;
    let h2 = hyp(d, "p ~> r")?;
    let a = ax_mp(d, h1, "K'_arrow", &[("phi", "p"), ("psi", "q"), ("chi", "p")])?;
    let a = pre(d, "p", a)?;
    let a = post(d, a, "p /\\ q")?;
    let b = ax_mp(d, h2, "K'_arrow", &[("phi", "p"), ("psi", "r"), ("chi", "q")])?;
    let c = tr(d, a, b)?;
    let c = post(d, c, "q /\\ r")?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn k_to_k3(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> (q -> r)")?;
    let a = pre(d, "p /\\ q", h)?;
    let b = arrow(d, "p /\\ q", "q")?;
    let c = kmp(d, b, a)?;
    d.discharge(h, c)
}

fn k3_to_k1(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = post(d, h, "r -> q /\\ r")?;
    let c = ax_mp(d, a, "K'''_arrow", &[("phi", "p"), ("psi", "r"), ("chi", "q /\\ r")])?;
    d.discharge(h, c)
}

fn k_to_k2(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p ~> q")?;
    let h2 = hyp(d, "p ~> (q -> r)")?;
    let c = kmp(d, h1, h2)?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn k2_to_k(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p ~> q")?;
    let h2 = hyp(d, "p ~> r")?;
    let a = post(d, h1, "r -> q /\\ r")?;
    let k = d.ax_str("K''_arrow", &[("phi", "p"), ("psi", "r"), ("chi", "q /\\ r")])?;
    let k = d.mp(h2, k)?;
    let c = d.mp(a, k)?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn di_to_di1(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = post(d, h, "q \\/ r")?;
    let b = arrow(d, "r", "q \\/ r")?;
    let k = d.ax_str("Di", &[("phi", "p"), ("psi", "r"), ("chi", "q \\/ r")])?;
    let k = d.mp(a, k)?;
    let c = d.mp(b, k)?;
    d.discharge(h, c)
}

fn di1_to_di(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p ~> r")?;
    let h2 = hyp(d, "q ~> r")?;
    let a = ax_mp(d, h1, "Di'", &[("phi", "p"), ("psi", "r"), ("chi", "q")])?;
    let a = post(d, a, "q \\/ r")?;
    let b = ax_mp(d, h2, "Di'", &[("phi", "q"), ("psi", "r"), ("chi", "r")])?;
    let c = tr(d, a, b)?;
    let c = post(d, c, "r")?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn bl_fixture(d: &mut Derivation) -> R {
    lift(d, "[](p -> q)", bl)
}

fn lb_fixture(d: &mut Derivation) -> R {
    lb_theorem(d, &f("p")?, &f("q")?)
}

fn k_box(d: &mut Derivation) -> R {
    let h1 = hyp(d, "[](p -> q)")?;
    let h2 = hyp(d, "[]p")?;
    let c = kmp(d, h2, h1)?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn tr_trivial(d: &mut Derivation) -> R {
    d.ax_str("Tr", &[("phi", "p"), ("psi", "p"), ("chi", "p")])
}

// ---- Box variants ----

fn box_to_box1(d: &mut Derivation) -> R {
    let h = hyp(d, "(p /\\ q) ~> r")?;
    let b = box_ax(d, h)?;
    let c = pre(d, "p", b)?;
    let c = post(d, c, "p -> q -> r")?;
    let id = arrow(d, "p", "p")?;
    let c = kmp(d, id, c)?;
    d.discharge(h, c)
}

fn box1_to_box(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = pre(d, "#t /\\ p", h)?;
    let c = ax_mp(d, a, "Box'", &[("chi", "#t"), ("phi", "p"), ("psi", "q")])?;
    d.discharge(h, c)
}

fn box1_to_box2(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = pre(d, "(r -> p) /\\ r", h)?;
    let c = ax_mp(d, a, "Box'", &[("chi", "r -> p"), ("phi", "r"), ("psi", "q")])?;
    d.discharge(h, c)
}

fn box2_to_box(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = ax_mp(d, h, "Box''", &[("phi", "p"), ("psi", "q"), ("chi", "p")])?;
    let b = arrow(d, "#t", "p -> p")?;
    let c = tr(d, b, a)?;
    d.discharge(h, c)
}

/// `Di` from a way of turning `a ⤳ b` into `□(a → b)`.
fn di_via(d: &mut Derivation, boxer: fn(&mut Derivation, Line) -> R) -> R {
    let h1 = hyp(d, "p ~> r")?;
    let h2 = hyp(d, "q ~> r")?;
    let b1 = boxer(d, h1)?;
    let b2 = boxer(d, h2)?;
    let c = kand(d, b1, b2)?;
    let c = post(d, c, "p \\/ q -> r")?;
    let c = bl(d, c)?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

fn boxa_di(d: &mut Derivation) -> R {
    di_via(d, box_ax)
}

// ---- excluded middle and Di ----

fn emdi_forward(d: &mut Derivation, h: Line) -> R {
    let (a, b) = strict_parts(d, h)?;
    let ab = Formula::imp(a.clone(), b.clone());
    let na = Formula::not(a.clone());
    let x = post(d, h, &ab)?;
    let y = arrow(d, &na, &ab)?;
    let k = d.ax("Di", &[("phi", &a), ("psi", &na), ("chi", &ab)])?;
    let k = d.mp(x, k)?;
    d.mp(y, k)
}

fn emdi_fwd(d: &mut Derivation) -> R {
    lift(d, "q ~> r", emdi_forward)
}

fn emdi_bwd(d: &mut Derivation) -> R {
    let h = hyp(d, "(q \\/ ~q) ~> (q -> r)")?;
    let a = pre(d, "q", h)?;
    let id = arrow(d, "q", "q")?;
    let c = kmp(d, id, a)?;
    d.discharge(h, c)
}

fn em_box(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = emdi_forward(d, h)?;
    let em = d.ax_str("em", &[("phi", "p")])?;
    let t = d.have(&[em], "#t -> p \\/ ~p")?;
    let t = d.nec(t)?;
    let c = tr(d, t, a)?;
    d.discharge(h, c)
}

// ---- strength ----

fn s_arrow_to_s_box(d: &mut Derivation) -> R {
    let a = d.ax_str("S_arrow", &[("phi", "#t"), ("psi", "p")])?;
    d.have(&[a], "p -> []p")
}

fn s_box_to_s_arrow(d: &mut Derivation) -> R {
    let h = hyp(d, "p -> q")?;
    let s = strength(d, h)?;
    let c = bl(d, s)?;
    d.discharge(h, c)
}

fn s_box_to_s1(d: &mut Derivation) -> R {
    lift(d, "p ~> q", s_prime)
}

fn s1_to_s_box(d: &mut Derivation) -> R {
    let a = d.ax_str("S'_arrow", &[("phi", "p"), ("psi", "p")])?;
    let id = arrow(d, "p", "p")?;
    d.mp(id, a)
}

// ---- Löb ----

fn gl_l_box(d: &mut Derivation) -> R {
    let h = hyp(d, "[]([]p -> p)")?;
    let l = d.ax_str("L_arrow", &[("phi", "p")])?;
    let c = tr(d, h, l)?;
    d.discharge(h, c)
}

fn gl_4_arrow(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p")?;
    let h2 = hyp(d, "[](p /\\ []p)")?;
    let x = arrow(d, "p /\\ []p", "p")?;
    let y = tr(d, h2, x)?;
    let c = d.have(&[h1, y], "p /\\ []p")?;
    let t = d.discharge(h2, c)?;
    let t = d.discharge(h1, t)?;
    let n = d.nec(t)?;
    let l = d.ax_str("L_arrow", &[("phi", "p /\\ []p")])?;
    let z = tr(d, n, l)?;
    post(d, z, "[]p")
}

fn l_arrow_p(d: &mut Derivation) -> R {
    l_arrow_from_box(d, "p")
}

fn four_box(d: &mut Derivation) -> R {
    let h = hyp(d, "[]p")?;
    let a = four(d, "p")?;
    let c = tr(d, h, a)?;
    d.discharge(h, c)
}

fn four_arrow_p(d: &mut Derivation) -> R {
    four(d, "p")
}

fn p_arrow_strong(d: &mut Derivation) -> R {
    d.ax_str("S_box", &[("phi", "p ~> q")])
}

// ---- W, M and preservativity ----

fn w_to_w1(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = pre(d, "([]q -> p) /\\ []q", h)?;
    let c = ax_mp(d, a, "W_arrow", &[("phi", "[]q -> p"), ("psi", "q")])?;
    d.discharge(h, c)
}

/// `W⤳` from a rule turning `a ⤳ b` into `(□b → a) ⤳ b`.
fn w_via(d: &mut Derivation, w1: fn(&mut Derivation, Line) -> R) -> R {
    let h = hyp(d, "(p /\\ []q) ~> q")?;
    let a = w1(d, h)?;
    let b = pre(d, "[]q -> p", a)?;
    let c = pre(d, "p", b)?;
    d.discharge(h, c)
}

fn w1_axiom(d: &mut Derivation, h: Line) -> R {
    let (a, b) = strict_parts(d, h)?;
    let w = d.ax("W'_arrow", &[("phi", &a), ("psi", &b)])?;
    d.mp(h, w)
}

fn w1_to_w(d: &mut Derivation) -> R {
    w_via(d, w1_axiom)
}

fn m_to_m1(d: &mut Derivation) -> R {
    let h = hyp(d, "(p /\\ []r) ~> q")?;
    let a = ax_mp(d, h, "M_arrow", &[("phi", "p /\\ []r"), ("psi", "q"), ("chi", "r")])?;
    let c = pre(d, "p", a)?;
    d.discharge(h, c)
}

fn m1_to_m(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let a = pre(d, "([]r -> p) /\\ []r", h)?;
    let c = ax_mp(d, a, "M'_arrow", &[("phi", "[]r -> p"), ("chi", "r"), ("psi", "q")])?;
    d.discharge(h, c)
}

fn gw_l_arrow(d: &mut Derivation) -> R {
    let a = arrow(d, "([]p -> p) /\\ []p", "p")?;
    ax_mp(d, a, "W_arrow", &[("phi", "[]p -> p"), ("psi", "p")])
}

fn gl_m_w(d: &mut Derivation) -> R {
    let h = hyp(d, "(p /\\ []q) ~> q")?;
    let a = ax_mp(d, h, "M_arrow", &[("phi", "p /\\ []q"), ("psi", "q"), ("chi", "q")])?;
    let a = pre(d, "p", a)?;
    let l = d.ax_str("L_arrow", &[("phi", "q")])?;
    let c = tr(d, a, l)?;
    d.discharge(h, c)
}

/// `(□b → a) ⤳ b` from `h: a ⤳ b` using `P⤳` and `L⤳`.
fn w1_via_p(d: &mut Derivation, h: Line) -> R {
    let (a, b) = strict_parts(d, h)?;
    let pb = d.ax("P_arrow", &[("phi", &a), ("psi", &b)])?;
    let pb = d.mp(h, pb)?;
    let lbt = lb_theorem(d, &a, &b)?;
    let n = d.necessitate(lbt)?;
    let x = kmp(d, pb, n)?;
    let ba = Formula::boxed(a.clone());
    let bb = Formula::boxed(b.clone());
    let target = Formula::imp(
        Formula::imp(bb, a.clone()),
        Formula::imp(ba, a.clone()),
    );
    let y = post(d, x, &target)?;
    let z = bl(d, y)?;
    let l = d.ax("L_arrow", &[("phi", &a)])?;
    let u = tr(d, z, l)?;
    tr(d, u, h)
}

fn gl_p_w(d: &mut Derivation) -> R {
    w_via(d, w1_via_p)
}

fn m_box(d: &mut Derivation) -> R {
    let h = hyp(d, "[]p ~> q")?;
    let a = ax_mp(d, h, "M_arrow", &[("phi", "[]p"), ("psi", "q"), ("chi", "p")])?;
    let c = pre(d, "#t", a)?;
    d.discharge(h, c)
}

fn lei(d: &mut Derivation) -> R {
    let a = arrow(d, "p", "p \\/ []q")?;
    let b = four(d, "q")?;
    let b = post(d, b, "p \\/ []q")?;
    let k = d.ax_str("Di", &[("phi", "p"), ("psi", "q"), ("chi", "p \\/ []q")])?;
    let k = d.mp(a, k)?;
    let c = d.mp(b, k)?;
    let h = hyp(d, "[](p \\/ q)")?;
    let t = tr(d, h, c)?;
    d.discharge(h, t)
}

// ---- completeness-style principles ----

fn cb_to_cb1(d: &mut Derivation) -> R {
    let c = d.ax_str("CB_box", &[("phi", "q -> p"), ("psi", "q")])?;
    d.have(&[c], "[](q -> p) -> (q -> p) \\/ q")
}

fn cb1_to_cb(d: &mut Derivation) -> R {
    let h = hyp(d, "[]p")?;
    let a = post(d, h, "q -> p")?;
    let c = ax_mp(d, a, "CB'_box", &[("phi", "p"), ("psi", "q")])?;
    d.discharge(h, c)
}

fn cb_arrow_to_box(d: &mut Derivation) -> R {
    let h = hyp(d, "[]p")?;
    let a = pre(d, "q", h)?;
    let c = ax_mp(d, a, "CB_arrow", &[("phi", "q"), ("psi", "p")])?;
    d.discharge(h, c)
}

fn mhc_box(d: &mut Derivation) -> R {
    lift(d, "p ~> q", box_cb)
}

fn mhc_di(d: &mut Derivation) -> R {
    di_via(d, box_cb)
}

fn mhc_m(d: &mut Derivation) -> R {
    let goal = "([]r -> p) ~> ([]r -> q)";
    let h = hyp(d, "p ~> q")?;
    let disj = ax_mp(d, h, "CB_arrow", &[("phi", "p"), ("psi", "q")])?;
    let hc = hyp(d, "p -> q")?;
    let t = d.have(&[hc], "([]r -> p) -> ([]r -> q)")?;
    let t = strength(d, t)?;
    let t = bl(d, t)?;
    let c1 = d.discharge(hc, t)?;
    let ha = hyp(d, "p")?;
    let s = strength(d, ha)?;
    let t = tr(d, s, h)?;
    let t = post(d, t, "[]r -> q")?;
    let t = pre(d, "[]r -> p", t)?;
    let c2 = d.discharge(ha, t)?;
    let c = d.ipc_from(&[disj, c1, c2], &f(goal)?)?;
    d.discharge(h, c)
}

fn km_w(d: &mut Derivation) -> R {
    let h = hyp(d, "(p /\\ []q) ~> q")?;
    let disj = ax_mp(d, h, "CB_arrow", &[("phi", "p /\\ []q"), ("psi", "q")])?;
    let hc = hyp(d, "(p /\\ []q) -> q")?;
    let t = d.have(&[hc], "p -> ([]q -> q)")?;
    let t = strength(d, t)?;
    let t = bl(d, t)?;
    let l = l_arrow_from_box(d, "q")?;
    let t = tr(d, t, l)?;
    let c1 = d.discharge(hc, t)?;
    let ha = hyp(d, "p /\\ []q")?;
    let b = d.have(&[ha], "[]q")?;
    let t = pre(d, "p", b)?;
    let c2 = d.discharge(ha, t)?;
    let c = d.ipc_from(&[disj, c1, c2], &f("p ~> q")?)?;
    d.discharge(h, c)
}

// ---- lax principles ----

fn c4_box(d: &mut Derivation) -> R {
    let h = hyp(d, "[][]p")?;
    let c = d.ax_str("C4_arrow", &[("phi", "p")])?;
    let t = tr(d, h, c)?;
    d.discharge(h, t)
}

fn app_c4(d: &mut Derivation) -> R {
    let a = d.ax_str("App_arrow", &[("phi", "#t"), ("psi", "p")])?;
    pre(d, "[]p", a)
}

fn hug_c4(d: &mut Derivation) -> R {
    let a = d.ax_str("Hug", &[("phi", "[]p"), ("psi", "p")])?;
    let id = d.ipc(&f("[]p -> []p")?)?;
    d.mp(id, a)
}

fn plaa_app(d: &mut Derivation) -> R {
    let h = hyp(d, "p /\\ p ~> q")?;
    let a = d.have(&[h], "p")?;
    let b = d.have(&[h], "p ~> q")?;
    let s = strength(d, a)?;
    let t = tr(d, s, b)?;
    let th = d.discharge(h, t)?;
    let n = d.nec(th)?;
    let c = d.ax_str("C4_arrow", &[("phi", "q")])?;
    tr(d, n, c)
}

fn plaa_hug(d: &mut Derivation) -> R {
    lift(d, "p -> []q", hug)
}

fn plaa_collapse(d: &mut Derivation) -> R {
    let a = s_box_to_s1(d)?;
    let b = plaa_hug(d)?;
    d.have(&[a, b], "(p ~> q -> p -> []q) /\\ ((p -> []q) -> p ~> q)")
}

fn plaa_di(d: &mut Derivation) -> R {
    let h1 = hyp(d, "p ~> r")?;
    let h2 = hyp(d, "q ~> r")?;
    let a = s_prime(d, h1)?;
    let b = s_prime(d, h2)?;
    let c = d.have(&[a, b], "p \\/ q -> []r")?;
    let c = hug(d, c)?;
    let c = d.discharge(h2, c)?;
    d.discharge(h1, c)
}

// ---- semilinearity ----

fn lin_box_to_arrow(d: &mut Derivation) -> R {
    let lin = d.ax_str("Lin_box", &[("phi", "p"), ("psi", "q")])?;
    let b1 = lift(d, "[](p -> q)", bl)?;
    let b2 = lift(d, "[](q -> p)", bl)?;
    d.ipc_from(&[lin, b1, b2], &f("p ~> q \\/ q ~> p")?)
}

fn lin_arrow_to_box(d: &mut Derivation, boxer: fn(&mut Derivation, Line) -> R) -> R {
    let lin = d.ax_str("Lin_arrow", &[("phi", "p"), ("psi", "q")])?;
    let b1 = lift(d, "p ~> q", boxer)?;
    let b2 = lift(d, "q ~> p", boxer)?;
    d.ipc_from(&[lin, b1, b2], &f("[](p -> q) \\/ [](q -> p)")?)
}

fn lin_boxa(d: &mut Derivation) -> R {
    lin_arrow_to_box(d, box_ax)
}

fn lin_mhc(d: &mut Derivation) -> R {
    lin_arrow_to_box(d, box_cb)
}

// ---- KM.lin ----

fn kmlin_box(d: &mut Derivation) -> R {
    lift(d, "p ~> q", box_kmlin)
}

fn kmlin_cb_arrow(d: &mut Derivation) -> R {
    let h = hyp(d, "p ~> q")?;
    let b = box_kmlin(d, h)?;
    let cb = d.ax_str("CB_box", &[("phi", "p -> q"), ("psi", "p")])?;
    let c = d.have(&[b, cb], "(p -> q) \\/ p")?;
    d.discharge(h, c)
}

// ---- collapse results for disjunction-free excluded middle ----

const ZW_A: &str = "p ~> #f /\\ ~p ~> #f";

/// Under `h: p ⤳ ⊥ ∧ ¬p ⤳ ⊥`, the line `(p ∨ ¬p) ⤳ ⊥`.
fn zw_di(d: &mut Derivation, h: Line) -> R {
    let a1 = d.have(&[h], "p ~> #f")?;
    let a2 = d.have(&[h], "~p ~> #f")?;
    let k = d.ax_str("Di", &[("phi", "p"), ("psi", "~p"), ("chi", "#f")])?;
    let k = d.mp(a1, k)?;
    d.mp(a2, k)
}

fn zw_cb(d: &mut Derivation) -> R {
    let cb = d.ax_str("CB_box", &[("phi", "#f"), ("psi", "p")])?;
    d.have(&[cb], "[]#f -> p \\/ ~p")
}

fn zw_gw(d: &mut Derivation) -> R {
    let h = hyp(d, ZW_A)?;
    let di = zw_di(d, h)?;
    let t = zw_cb(d)?;
    let n = d.nec(t)?;
    let u = tr(d, n, di)?;
    let v = pre(d, "#t /\\ []#f", u)?;
    let c = ax_mp(d, v, "W_arrow", &[("phi", "#t"), ("psi", "#f")])?;
    d.discharge(h, c)
}

fn zw_gl(d: &mut Derivation) -> R {
    // A → (□□⊥ → □⊥)
    let h = hyp(d, ZW_A)?;
    let di = zw_di(d, h)?;
    let t = zw_cb(d)?;
    let n = d.necessitate(t)?;
    let hb = hyp(d, "[][]#f")?;
    let x = kmp(d, hb, n)?;
    let y = tr(d, x, di)?;
    let t1 = d.discharge(hb, y)?;
    let t1 = d.discharge(h, t1)?;

    let g = hyp(d, &format!("({ZW_A}) /\\ []({ZW_A})"))?;
    let ga = d.have(&[g], ZW_A)?;
    let gb = d.have(&[g], &format!("[]({ZW_A})"))?;
    let nt1 = d.necessitate(t1)?;
    let z = kmp(d, gb, nt1)?;
    let l = d.ax_str("L_arrow", &[("phi", "[]#f")])?;
    let w = tr(d, z, l)?;
    let m = d.mp(ga, t1)?;
    let r = d.mp(w, m)?;
    d.discharge(g, r)
}

// ---- the collapse of the strict-implication system with Contra ----

fn auxp2(d: &mut Derivation) -> R {
    let h1 = hyp(d, "[]p -> []~p")?;
    let h2 = hyp(d, "[]p")?;
    let nb = d.mp(h2, h1)?;
    let k = kand(d, h2, nb)?;
    let bot = post(d, k, "#f")?;
    let t = d.discharge(h2, bot)?;
    let t = d.discharge(h1, t)?;

    let x = hyp(d, "[]([]p -> []~p)")?;
    let nt = d.necessitate(t)?;
    let y = kmp(d, x, nt)?;
    let z = bl(d, y)?;
    let s2 = d.discharge(x, z)?;
    let n2 = d.nec(s2)?;

    let a = d.ax_str("Contra", &[("phi", "#f"), ("psi", "p")])?;
    let b = tr(d, n2, a)?;

    let hh = hyp(d, "~#f ~> ~p")?;
    let c = pre(d, "#t", hh)?;
    let s5 = d.discharge(hh, c)?;
    let n5 = d.nec(s5)?;
    tr(d, b, n5)
}

fn post_collapse(d: &mut Derivation) -> R {
    let x = auxp2(d)?;
    let a = d.ax_str("Contra", &[("psi", "[]p -> []~p"), ("phi", "~p")])?;
    let b = d.ax_str("Auxp", &[("phi", "p")])?;
    let c = tr(d, a, b)?;
    let top = Formula::imp(Formula::Top, d.formula(x).clone());
    let t = d.ipc_from(&[x], &top)?;
    let t = d.nec(t)?;
    tr(d, t, c)
}

macro_rules! fx {
    ($name:literal, $logic:literal, $goal:expr, $build:expr) => {
        Fixture {
            name: $name,
            logic: $logic,
            goal: $goal,
            build: $build,
        }
    };
}

static LIBRARY: &[Fixture] = &[
    fx!("tr_trivial", "iA0", "(p ~> p) -> (p ~> p) -> (p ~> p)", tr_trivial),
    fx!("k_to_k1", "iA0+K_arrow", K1, k_to_k1),
    fx!("k1_to_k", "iA0+K'_arrow", K, k1_to_k),
    fx!("k_to_k3", "iA0+K_arrow", K3, k_to_k3),
    fx!("k3_to_k1", "iA0+K'''_arrow", K1, k3_to_k1),
    fx!("k_to_k2", "iA0+K_arrow", K2, k_to_k2),
    fx!("k2_to_k", "iA0+K''_arrow", K, k2_to_k),
    fx!("di_to_di1", "iA0+Di", DI1, di_to_di1),
    fx!("di1_to_di", "iA0+Di'", DI, di1_to_di),
    fx!("bl", "iA-", "[](p -> q) -> p ~> q", bl_fixture),
    fx!("lb", "iA0", "p ~> q -> []p -> []q", lb_fixture),
    fx!("k_box", "iA-", "[](p -> q) -> []p -> []q", k_box),
    fx!("box_to_box1", "iA-+Box", "(p /\\ q) ~> r -> p ~> (q -> r)", box_to_box1),
    fx!("box1_to_box", "iA-+Box'", BOX, box1_to_box),
    fx!("box1_to_box2", "iA-+Box'", "p ~> q -> (r -> p) ~> (r -> q)", box1_to_box2),
    fx!("box2_to_box", "iA-+Box''", BOX, box2_to_box),
    fx!("boxa_di", "i-BoxA-", DI, boxa_di),
    fx!("emdi_fwd", "iA", "q ~> r -> (q \\/ ~q) ~> (q -> r)", emdi_fwd),
    fx!("emdi_bwd", "iA-", "(q \\/ ~q) ~> (q -> r) -> q ~> r", emdi_bwd),
    fx!("em_box", "wk+em", BOX, em_box),
    fx!("s_arrow_to_s_box", "iA-+S_arrow", "p -> []p", s_arrow_to_s_box),
    fx!("s_box_to_s_arrow", "iA-+S_box", "(p -> q) -> p ~> q", s_box_to_s_arrow),
    fx!("s_box_to_s1", "iA-+S_box", "p ~> q -> p -> []q", s_box_to_s1),
    fx!("s1_to_s_box", "iA-+S'_arrow", "p -> []p", s1_to_s_box),
    fx!("gl_l_box", "iGL-", "[]([]p -> p) -> []p", gl_l_box),
    fx!("gl_4_arrow", "iGL-", "p ~> []p", gl_4_arrow),
    fx!("l_box_4_to_l_arrow", "iA-+L_box+4_arrow", "([]p -> p) ~> p", l_arrow_p),
    fx!("four_arrow_to_box", "iA-+4_arrow", "[]p -> [][]p", four_box),
    fx!("sa_4_arrow", "iSA-", "p ~> []p", four_arrow_p),
    fx!("sa_p_arrow", "iSA-", "p ~> q -> [](p ~> q)", p_arrow_strong),
    fx!("sa_l_arrow", "iSA-+L_box", "([]p -> p) ~> p", l_arrow_p),
    fx!("w_to_w1", "iA0+W_arrow", "p ~> q -> ([]q -> p) ~> q", w_to_w1),
    fx!("w1_to_w", "iA0+W'_arrow", W, w1_to_w),
    fx!("m_to_m1", "iA0+M_arrow", "(p /\\ []r) ~> q -> p ~> ([]r -> q)", m_to_m1),
    fx!("m1_to_m", "iA0+M'_arrow", M, m1_to_m),
    fx!("gw_l_arrow", "iGW-", "([]p -> p) ~> p", gw_l_arrow),
    fx!("gl_m_w", "iGL-+M_arrow", W, gl_m_w),
    fx!("gl_p_w", "iGL-+P_arrow", W, gl_p_w),
    fx!("m_box", "iA-+M_arrow", "[]p ~> q -> []([]p -> q)", m_box),
    fx!("lei", "iA+4_arrow", "[](p \\/ q) -> [](p \\/ []q)", lei),
    fx!("cb_to_cb1", "iA0+K_box+CB_box", "[](q -> p) -> (q -> p) \\/ q", cb_to_cb1),
    fx!("cb1_to_cb", "iA0+K_box+CB'_box", "[]p -> (q -> p) \\/ q", cb1_to_cb),
    fx!("cb_arrow_to_box", "iA-+CB_arrow", "[]p -> (q -> p) \\/ q", cb_arrow_to_box),
    fx!("mhc_box", "iSA-+CB_arrow", BOX, mhc_box),
    fx!("mhc_di", "iSA-+CB_arrow", DI, mhc_di),
    fx!("mhc_m", "mHC_arrow", M, mhc_m),
    fx!("km_w", "KM_arrow", W, km_w),
    fx!("c4_box", "iA-+C4_arrow", "[][]p -> []p", c4_box),
    fx!("app_c4", "iA-+App_arrow", "[]p ~> p", app_c4),
    fx!("hug_c4", "iA-+Hug", "[]p ~> p", hug_c4),
    fx!("plaa_app", "iSA-+C4_arrow", "(p /\\ p ~> q) ~> q", plaa_app),
    fx!("plaa_hug", "iSA-+C4_arrow", "(p -> []q) -> p ~> q", plaa_hug),
    fx!(
        "plaa_collapse",
        "iSA-+C4_arrow",
        "(p ~> q -> p -> []q) /\\ ((p -> []q) -> p ~> q)",
        plaa_collapse
    ),
    fx!("plaa_di", "iSA-+C4_arrow", DI, plaa_di),
    fx!("lin_box_to_arrow", "iA-+Lin_box", "p ~> q \\/ q ~> p", lin_box_to_arrow),
    fx!("lin_boxa", "i-BoxA+Lin_arrow", "[](p -> q) \\/ [](q -> p)", lin_boxa),
    fx!("lin_mhc", "mHC_arrow+Lin_arrow", "[](p -> q) \\/ [](q -> p)", lin_mhc),
    fx!("kmlin_b_box", "iA0+kmlin_b", BOX, kmlin_box),
    fx!("kmlin_box", "KM.lin_box+kmlin_b", BOX, kmlin_box),
    fx!("kmlin_cb_arrow", "KM.lin_box+kmlin_b", "p ~> q -> (p -> q) \\/ p", kmlin_cb_arrow),
    fx!("kmlin_lin_arrow", "KM.lin_box", "p ~> q \\/ q ~> p", lin_box_to_arrow),
    fx!("kmlin_arrow_cb_box", "KM.lin_arrow", "[]p -> (q -> p) \\/ q", cb_arrow_to_box),
    fx!("kmlin_arrow_lin_box", "KM.lin_arrow", "[](p -> q) \\/ [](q -> p)", lin_mhc),
    fx!("zw_gw", "iGW+CB_box", "p ~> #f /\\ ~p ~> #f -> []#f", zw_gw),
    fx!(
        "zw_gl",
        "iGL+CB_box",
        "(p ~> #f /\\ ~p ~> #f) /\\ [](p ~> #f /\\ ~p ~> #f) -> []#f",
        zw_gl
    ),
    fx!("auxp2", "iA+Contra", "[]([]p -> []~p) ~> []~p", auxp2),
    fx!("post_collapse", "iA+Contra+Auxp", "[](p ~> []p)", post_collapse),
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn every_fixture_checks() {
        let reg = Registry::standard();
        let mut failures = Vec::new();
        for fx in library() {
            if let Err(e) = fx.derive(reg) {
                failures.push(format!("{}: {e}", fx.name));
            }
        }
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn names_are_unique() {
        let names: BTreeSet<&str> = library().iter().map(|fx| fx.name).collect();
        assert_eq!(names.len(), library().len());
        assert!(library().len() >= 25);
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn goal_mismatch_is_reported() {
        let bad = Fixture {
            name: "bad",
            logic: "iA0",
            goal: "p ~> q",
            build: tr_trivial,
        };
        assert!(matches!(bad.derive(Registry::standard()), Err(ReplayError::Goal { .. })));
    }
}
