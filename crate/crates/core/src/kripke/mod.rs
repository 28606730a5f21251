//! Finite preframes, frames and models, with world sets stored as `u64` bitmasks.

mod eval;
mod io;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::formula::{atoms, Formula};

pub use eval::{Compiled, Valuations};
pub use io::{parse_model, to_dot, write_model};

pub type WorldSet = u64;

pub const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("{n} worlds requested, at most {MAX_WORLDS} are supported")]
    TooManyWorlds { n: usize },
    #[error("world {world} out of range for {n} worlds")]
    OutOfRange { world: usize, n: usize },
    #[error("order is not antisymmetric: {a} and {b} are mutually related")]
    Antisymmetry { a: usize, b: usize },
    #[error("order relation is not a partial order")]
    NotPartialOrder,
    #[error("not a frame: {k} ⪯ {l} ⊏ {m} but not {k} ⊏ {m}")]
    NotAFrame { k: usize, l: usize, m: usize },
    #[error("valuation of {atom} is not upward closed")]
    NotUpset { atom: String },
    #[error("{count} valuations exceed the cap of {cap}")]
    ValuationCap { count: u128, cap: u128 },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

pub(crate) fn bit(w: usize) -> WorldSet {
    1u64 << w
}

pub(crate) fn full(n: usize) -> WorldSet {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn members(set: WorldSet) -> impl Iterator<Item = usize> {
    let mut s = set;
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let w = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(w)
        }
    })
}

/// A finite poset `⪯` together with an arbitrary relation `⊏`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preframe {
    pub(crate) n: usize,
    /// `up[w]` is the set of `v` with `w ⪯ v`.
    pub(crate) up: Vec<WorldSet>,
    /// `succ[w]` is the set of `m` with `w ⊏ m`.
    pub(crate) succ: Vec<WorldSet>,
}

impl Preframe {
    /// Builds a preframe from masks, checking that `up` is a partial order.
    pub fn from_masks(up: Vec<WorldSet>, succ: Vec<WorldSet>) -> Result<Preframe, KripkeError> {
        let n = up.len();
        if n > MAX_WORLDS {
            return Err(KripkeError::TooManyWorlds { n });
        }
        if succ.len() != n || up.iter().chain(&succ).any(|s| s & !full(n) != 0) {
            return Err(KripkeError::NotPartialOrder);
        }
        for w in 0..n {
            if up[w] & bit(w) == 0 {
                return Err(KripkeError::NotPartialOrder);
            }
            for v in members(up[w]) {
                if up[v] & !up[w] != 0 {
                    return Err(KripkeError::NotPartialOrder);
                }
                if v != w && up[v] & bit(w) != 0 {
                    return Err(KripkeError::Antisymmetry { a: w, b: v });
                }
            }
        }
        Ok(Preframe { n, up, succ })
    }

    /// Trusted constructor for enumerators that already produce partial orders.
    pub(crate) fn from_masks_unchecked(up: Vec<WorldSet>, succ: Vec<WorldSet>) -> Preframe {
        debug_assert_eq!(up.len(), succ.len());
        Preframe { n: up.len(), up, succ }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn worlds(&self) -> WorldSet {
        full(self.n)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a] & bit(b) != 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn modal(&self, a: usize, b: usize) -> bool {
        self.succ[a] & bit(b) != 0
    }

    pub fn up(&self, w: usize) -> WorldSet {
        self.up[w]
    }

    pub fn succ(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    pub fn up_masks(&self) -> &[WorldSet] {
        &self.up
    }

    pub fn succ_masks(&self) -> &[WorldSet] {
        &self.succ
    }

    /// Worlds `v` with `v ⪯ w`.
    pub fn down(&self, w: usize) -> WorldSet {
        (0..self.n)
            .filter(|&v| self.le(v, w))
            .fold(0, |acc, v| acc | bit(v))
    }

    /// Worlds `k` with `k ⊏ m`.
    pub fn pred(&self, m: usize) -> WorldSet {
        (0..self.n)
            .filter(|&k| self.modal(k, m))
            .fold(0, |acc, k| acc | bit(k))
    }

    pub fn up_of_set(&self, set: WorldSet) -> WorldSet {
        members(set).fold(0, |acc, w| acc | self.up[w])
    }

    pub fn is_upset(&self, set: WorldSet) -> bool {
        members(set).all(|w| self.up[w] & !set == 0)
    }

    /// All upsets, in increasing numeric order.
    pub fn upsets(&self) -> Vec<WorldSet> {
        assert!(self.n <= 24, "upset enumeration is limited to 24 worlds");
        (0..=full(self.n)).filter(|&s| self.is_upset(s)).collect()
    }

    /// Strict order pairs `(a, b)` with `b` covering `a`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in members(self.up[a] & !bit(a)) {
                let between = members(self.up[a] & !bit(a) & !bit(b)).any(|c| self.lt(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn modal_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| members(self.succ[a]).map(move |b| (a, b)))
            .collect()
    }

    /// The set `U ⤳ V` of worlds all of whose `⊏`-successors in `U` lie in `V`.
    pub fn strict_set(&self, u: WorldSet, v: WorldSet) -> WorldSet {
        let bad = u & !v;
        (0..self.n)
            .filter(|&k| self.succ[k] & bad == 0)
            .fold(0, |acc, k| acc | bit(k))
    }
}

/// Builds a preframe whose order is the reflexive-transitive closure of `order_pairs`.
pub fn build_preframe(
    n: usize,
    order_pairs: &[(usize, usize)],
    modal_pairs: &[(usize, usize)],
) -> Result<Preframe, KripkeError> {
    if n > MAX_WORLDS {
        return Err(KripkeError::TooManyWorlds { n });
    }
    let check = |w: usize| {
        if w >= n {
            Err(KripkeError::OutOfRange { world: w, n })
        } else {
            Ok(())
        }
    };
    let mut up: Vec<WorldSet> = (0..n).map(bit).collect();
    for &(a, b) in order_pairs {
        check(a)?;
        check(b)?;
        up[a] |= bit(b);
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if up[i] & bit(k) != 0 {
                up[i] |= up[k];
            }
        }
    }
    for a in 0..n {
        for b in members(up[a] & !bit(a)) {
            if up[b] & bit(a) != 0 {
                return Err(KripkeError::Antisymmetry { a, b });
            }
        }
    }
    let mut succ = vec![0; n];
    for &(a, b) in modal_pairs {
        check(a)?;
        check(b)?;
        succ[a] |= bit(b);
    }
    Ok(Preframe { n, up, succ })
}

/// First triple `k ⪯ ℓ ⊏ m` with `k ⋢ m`, if any.
pub fn frame_violation(p: &Preframe) -> Option<(usize, usize, usize)> {
    for k in 0..p.n {
        for l in members(p.up[k]) {
            let missing = p.succ[l] & !p.succ[k];
            if missing != 0 {
                return Some((k, l, missing.trailing_zeros() as usize));
            }
        }
    }
    None
}

pub fn is_frame(p: &Preframe) -> bool {
    frame_violation(p).is_none()
}

/// A pair of upsets `(U, V)` with `U ⤳ V` not upward closed, if any.
pub fn persistence_witness(p: &Preframe) -> Option<(WorldSet, WorldSet)> {
    let ups = p.upsets();
    for &u in &ups {
        for &v in &ups {
            if !p.is_upset(p.strict_set(u, v)) {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn persistence_holds(p: &Preframe) -> bool {
    persistence_witness(p).is_none()
}

/// A preframe satisfying `⪯·⊏ ⊆ ⊏`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame(Preframe);

impl Frame {
    pub fn new(p: Preframe) -> Result<Frame, KripkeError> {
        match frame_violation(&p) {
            Some((k, l, m)) => Err(KripkeError::NotAFrame { k, l, m }),
            None => Ok(Frame(p)),
        }
    }

    pub(crate) fn new_unchecked(p: Preframe) -> Frame {
        debug_assert!(is_frame(&p));
        Frame(p)
    }

    pub fn preframe(&self) -> &Preframe {
        &self.0
    }

    pub fn into_preframe(self) -> Preframe {
        self.0
    }
}

impl Deref for Frame {
    type Target = Preframe;

    fn deref(&self) -> &Preframe {
        &self.0
    }
}

/// A frame with an upward closed valuation and display names for its worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
    names: Vec<String>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, WorldSet>) -> Result<Model, KripkeError> {
        let names = (0..frame.len()).map(|w| w.to_string()).collect();
        Model::with_names(frame, valuation, names)
    }

    pub fn with_names(
        frame: Frame,
        valuation: BTreeMap<String, WorldSet>,
        names: Vec<String>,
    ) -> Result<Model, KripkeError> {
        for (atom, &set) in &valuation {
            if set & !frame.worlds() != 0 || !frame.is_upset(set) {
                return Err(KripkeError::NotUpset { atom: atom.clone() });
            }
        }
        assert_eq!(names.len(), frame.len(), "one name per world");
        Ok(Model {
            frame,
            valuation,
            names,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// Worlds where `atom` holds; unknown atoms hold nowhere.
    pub fn value(&self, atom: &str) -> WorldSet {
        self.valuation.get(atom).copied().unwrap_or(0)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world_named(&self, name: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&w| w < self.frame.len()))
    }

    /// The set of worlds forcing `f`.
    pub fn truth_set(&self, f: &Formula) -> WorldSet {
        let c = Compiled::new(f);
        let vals: Vec<WorldSet> = c.atoms().iter().map(|a| self.value(a)).collect();
        c.eval(&self.frame, &vals)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_model(self))
    }
}

/// Forcing at a single world. Unknown atoms are treated as false everywhere.
pub fn forces(m: &Model, world: usize, f: &Formula) -> bool {
    m.truth_set(f) & bit(world) != 0
}

pub fn model_validates(m: &Model, f: &Formula) -> bool {
    m.truth_set(f) == m.frame.worlds()
}

/// Number of valuations of the atoms of `f` over the upsets of `frame`.
pub fn valuation_count(frame: &Preframe, f: &Formula) -> u128 {
    let ups = frame.upsets().len() as u128;
    ups.saturating_pow(atoms(f).len() as u32)
}

/// A valuation and the set of worlds where `f` fails under it, if some valuation refutes `f`.
pub fn frame_refutation(frame: &Frame, f: &Formula) -> Option<(BTreeMap<String, WorldSet>, WorldSet)> {
    let c = Compiled::new(f);
    let ups = frame.upsets();
    let mut vals = Valuations::new(c.atoms().len(), &ups);
    let all = frame.worlds();
    loop {
        let truth = c.eval(frame, vals.current());
        if truth != all {
            let map = c
                .atoms()
                .iter()
                .cloned()
                .zip(vals.current().iter().copied())
                .collect();
            return Some((map, all & !truth));
        }
        if !vals.advance() {
            return None;
        }
    }
}

pub fn frame_validates(frame: &Frame, f: &Formula) -> bool {
    frame_refutation(frame, f).is_none()
}

/// As [`frame_validates`], refusing to run when the valuation space exceeds `cap`.
pub fn frame_validates_capped(frame: &Frame, f: &Formula, cap: u128) -> Result<bool, KripkeError> {
    let count = valuation_count(frame, f);
    if count > cap {
        return Err(KripkeError::ValuationCap { count, cap });
    }
    Ok(frame_validates(frame, f))
}
