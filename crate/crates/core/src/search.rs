//! Frame enumeration and bounded countermodel search.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::conditions::{check_all, ConditionId};
use crate::formula::{normalize, Formula};
use crate::kripke::{bit, forces, full, members, Compiled, Frame, KripkeError, Model, Preframe, Valuations, WorldSet};

pub const DEFAULT_CAP: usize = 5;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_VAR: &str = "LEWISKIT_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{n} worlds exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("{count} valuations on a {n}-world frame exceed the cap of {cap}")]
    ValuationCap { n: usize, count: u128, cap: u128 },
}

/// The enumeration cap: `LEWISKIT_CAP` if set to a number, else [`DEFAULT_CAP`].
pub fn enumeration_cap() -> usize {
    std::env::var(CAP_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

fn downsets_of(up: &[WorldSet]) -> Vec<WorldSet> {
    let n = up.len();
    let down: Vec<WorldSet> = (0..n)
        .map(|w| (0..n).filter(|&v| up[v] & bit(w) != 0).fold(0, |a, v| a | bit(v)))
        .collect();
    (0..=full(n))
        .filter(|&s| members(s).all(|w| down[w] & !s == 0))
        .collect()
}

fn upsets_of(up: &[WorldSet]) -> Vec<WorldSet> {
    let n = up.len();
    (0..=full(n))
        .filter(|&s| members(s).all(|w| up[w] & !s == 0))
        .collect()
}

fn extend_posets(prev: &[Vec<WorldSet>], natural: bool) -> Vec<Vec<WorldSet>> {
    let mut out = Vec::new();
    for up in prev {
        let new = up.len();
        let ups = if natural { vec![0] } else { upsets_of(up) };
        for d in downsets_of(up) {
            let above_all = members(d).fold(full(new), |acc, x| acc & up[x]);
            for &u in &ups {
                if u & d != 0 || u & !above_all != 0 {
                    continue;
                }
                let mut next: Vec<WorldSet> = up
                    .iter()
                    .enumerate()
                    .map(|(x, &m)| if d & bit(x) != 0 { m | bit(new) } else { m })
                    .collect();
                next.push(bit(new) | u);
                out.push(next);
            }
        }
    }
    out
}

fn poset_family(n: usize, natural: bool) -> Vec<Vec<WorldSet>> {
    let mut level: Vec<Vec<WorldSet>> = vec![Vec::new()];
    for _ in 0..n {
        level = extend_posets(&level, natural);
    }
    level
}

/// All labeled partial orders on `n` points, as `up` masks, in a fixed order.
pub fn posets(n: usize) -> Vec<Vec<WorldSet>> {
    poset_family(n, false)
}

/// Partial orders in which `i ⪯ j` implies `i ≤ j`.
pub fn natural_posets(n: usize) -> Vec<Vec<WorldSet>> {
    poset_family(n, true)
}

/// Which frames a cursor visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Every labeled frame.
    Labeled,
    /// Labeled frames in which every world is reachable from world 0 along `⪯ ∪ ⊏`.
    Rooted,
    /// Rooted frames in which both relations only point to higher labels.
    /// Every rooted frame with `⪯ ∪ ⊏` acyclic is isomorphic to one of these.
    Forward,
    /// Rooted frames that are least in their isomorphism class, with world 0 held fixed.
    Canonical,
}

/// Allocation-free walk over frames on `n` worlds.
///
/// A frame is fixed by the poset and, for each world `m`, the set `{k : k ⊏ m}`,
/// which must be a downset.
pub struct FrameCursor {
    mode: Enumeration,
    posets: Vec<Vec<WorldSet>>,
    poset: usize,
    /// Per column, the admissible predecessor sets.
    choices: Vec<Vec<WorldSet>>,
    idx: Vec<usize>,
    current: Preframe,
    started: bool,
    done: bool,
    n: usize,
    /// Permutations of worlds `1..n` (world 0 fixed), identity excluded.
    perms: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect::<Vec<_>>()];
    for k in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=k).map(move |j| {
                    let mut q = p.clone();
                    q.swap(j, k);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.iter().enumerate().any(|(i, &j)| i != j));
    out
}

fn map_set(perm: &[usize], s: WorldSet) -> WorldSet {
    members(s).fold(0, |acc, w| acc | bit(perm[w]))
}

impl FrameCursor {
    pub fn new(n: usize, mode: Enumeration) -> FrameCursor {
        let posets = if mode == Enumeration::Forward {
            natural_posets(n)
        } else {
            posets(n)
        };
        FrameCursor {
            mode,
            posets,
            poset: 0,
            choices: Vec::new(),
            idx: vec![0; n],
            current: Preframe::from_masks_unchecked(vec![0; n], vec![0; n]),
            started: false,
            done: false,
            n,
            perms: if mode == Enumeration::Canonical {
                permutations(n)
            } else {
                Vec::new()
            },
        }
    }

    fn load_poset(&mut self) -> bool {
        if self.poset >= self.posets.len() || self.n == 0 {
            return false;
        }
        let up = &self.posets[self.poset];
        let ds = downsets_of(up);
        self.choices = (0..self.n)
            .map(|m| match self.mode {
                Enumeration::Forward => {
                    let below = bit(m) - 1;
                    ds.iter().copied().filter(|d| d & !below == 0).collect()
                }
                _ => ds.clone(),
            })
            .collect();
        self.current.up.clone_from(up);
        self.idx.iter_mut().for_each(|i| *i = 0);
        true
    }

    fn fill_succ(&mut self) {
        let n = self.n;
        let succ = &mut self.current.succ;
        succ.iter_mut().for_each(|s| *s = 0);
        for m in 0..n {
            let preds = self.choices[m][self.idx[m]];
            for k in members(preds) {
                succ[k] |= bit(m);
            }
        }
    }

    fn step_odometer(&mut self) -> bool {
        for m in 0..self.n {
            self.idx[m] += 1;
            if self.idx[m] < self.choices[m].len() {
                return true;
            }
            self.idx[m] = 0;
        }
        false
    }

    fn rooted(&self) -> bool {
        let p = &self.current;
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let next = members(frontier).fold(0, |acc, w| acc | p.up[w] | p.succ[w]);
            frontier = next & !seen;
            seen |= next;
        }
        seen == full(self.n)
    }

    // no relabeling fixing world 0 yields a lexicographically smaller (up, succ)
    fn least_in_orbit(&self) -> bool {
        let p = &self.current;
        let n = self.n;
        let mut up = vec![0; n];
        let mut succ = vec![0; n];
        self.perms.iter().all(|perm| {
            for w in 0..n {
                up[perm[w]] = map_set(perm, p.up[w]);
                succ[perm[w]] = map_set(perm, p.succ[w]);
            }
            (&p.up, &p.succ) <= (&up, &succ)
        })
    }

    fn admissible(&self) -> bool {
        match self.mode {
            Enumeration::Labeled => true,
            Enumeration::Canonical => self.rooted() && self.least_in_orbit(),
            Enumeration::Rooted => self.rooted(),
            Enumeration::Forward => (1..self.n).all(|m| {
                self.choices[m][self.idx[m]] != 0
                    || (0..m).any(|k| self.current.up[k] & bit(m) != 0)
            }),
        }
    }

    /// Moves to the next frame; false when exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        loop {
            let moved = if !self.started {
                self.started = true;
                self.load_poset()
            } else if self.step_odometer() {
                true
            } else {
                self.poset += 1;
                self.load_poset()
            };
            if !moved {
                self.done = true;
                return false;
            }
            self.fill_succ();
            if self.admissible() {
                return true;
            }
        }
    }

    pub fn current(&self) -> &Preframe {
        &self.current
    }
}

/// Iterator over frames on exactly `n` worlds satisfying `conds`.
pub struct FrameIter {
    cursor: FrameCursor,
    conds: Vec<ConditionId>,
}

impl Iterator for FrameIter {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        while self.cursor.advance() {
            let p = self.cursor.current();
            if check_all(p, &self.conds) {
                return Some(Frame::new_unchecked(p.clone()));
            }
        }
        None
    }
}

/// All labeled frames on exactly `n` worlds satisfying `conds`, in a fixed order.
pub fn enumerate_frames(n: usize, conds: &[ConditionId]) -> Result<FrameIter, SearchError> {
    enumerate_frames_with(n, conds, Enumeration::Labeled, enumeration_cap())
}

pub fn enumerate_frames_with(
    n: usize,
    conds: &[ConditionId],
    mode: Enumeration,
    cap: usize,
) -> Result<FrameIter, SearchError> {
    if n > cap {
        return Err(SearchError::CapExceeded { n, cap });
    }
    Ok(FrameIter {
        cursor: FrameCursor::new(n, mode),
        conds: conds.to_vec(),
    })
}

/// Whether every frame satisfying `conds` has `⪯ ∪ ⊏` (strict part) acyclic.
pub fn implies_acyclic(conds: &[ConditionId]) -> bool {
    // Noetherian frames have no ⪯·⊏ loops by ⤳-p; supergathering forces strict ⪯-ascent
    // along every ⊏-step, hence no ⊏-cycles either.
    conds
        .iter()
        .any(|c| matches!(c, ConditionId::Noetherian | ConditionId::Supergathering))
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_n: usize,
    /// Upper bound on `|upsets|^|atoms|` per frame.
    pub max_valuations: u128,
    pub workers: usize,
    /// Restrict to rooted frames up to isomorphism (forward-labeled ones for acyclic
    /// classes) and refute at the root only. Truth at a world depends only on the subframe
    /// it generates, and every condition here survives that restriction.
    pub reduced: bool,
    pub cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_n: 4,
            max_valuations: 1 << 24,
            workers: 1,
            reduced: false,
            cap: enumeration_cap(),
        }
    }
}

impl SearchOptions {
    pub fn with_max_n(max_n: usize) -> Self {
        SearchOptions {
            max_n,
            ..SearchOptions::default()
        }
    }

    pub fn reduced(mut self) -> Self {
        self.reduced = true;
        self
    }
}

/// A model refuting a formula at a world.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: Model,
    pub world: usize,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Countermodel),
    /// No countermodel among frames with at most `max_n` worlds; not a validity proof.
    NotFound { max_n: usize, frames_checked: u64 },
}

impl SearchOutcome {
    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

struct Probe<'a> {
    compiled: &'a Compiled,
    conds: &'a [ConditionId],
    root_only: bool,
    max_valuations: u128,
}

impl Probe<'_> {
    fn run(&self, p: &Preframe) -> Result<Option<(Vec<WorldSet>, usize)>, SearchError> {
        if !check_all(p, self.conds) {
            return Ok(None);
        }
        let ups = p.upsets();
        let atoms = self.compiled.atoms().len();
        let count = (ups.len() as u128).saturating_pow(atoms as u32);
        if count > self.max_valuations {
            return Err(SearchError::ValuationCap {
                n: p.len(),
                count,
                cap: self.max_valuations,
            });
        }
        let target = if self.root_only { 1 } else { p.worlds() };
        let n = p.len();
        let mut vals = Valuations::new(atoms, &ups);
        // flat: valuation l occupies batch[l * atoms..(l + 1) * atoms]
        let mut batch: Vec<WorldSet> = Vec::with_capacity(64 * atoms);
        let mut lanes = vec![0u64; atoms * n];
        let mut buf = Vec::new();
        let mut more = true;
        while more {
            batch.clear();
            lanes.iter_mut().for_each(|x| *x = 0);
            let mut len = 0;
            while len < 64 && more {
                let l = len;
                for (i, &set) in vals.current().iter().enumerate() {
                    for w in members(set) {
                        lanes[i * n + w] |= 1 << l;
                    }
                }
                batch.extend_from_slice(vals.current());
                len += 1;
                more = vals.advance();
            }
            let live = if len == 64 { !0 } else { (1u64 << len) - 1 };
            let truth = self.compiled.eval_lanes(p, &lanes, &mut buf);
            let failing = members(target).fold(0, |acc, w| acc | !truth[w]) & live;
            if failing != 0 {
                let l = failing.trailing_zeros() as usize;
                let hit = batch[l * atoms..(l + 1) * atoms].to_vec();
                let world = (target & !self.compiled.eval(p, &hit)).trailing_zeros() as usize;
                return Ok(Some((hit, world)));
            }
        }
        Ok(None)
    }
}

const BATCH: usize = 512;

/// First refutation of `f` on frames satisfying `conds`, by increasing world count.
pub fn find_countermodel(
    f: &Formula,
    conds: &[ConditionId],
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let f = normalize(f);
    let compiled = Compiled::new(&f);
    let mode = match (opts.reduced, implies_acyclic(conds)) {
        (false, _) => Enumeration::Labeled,
        (true, true) => Enumeration::Forward,
        (true, false) => Enumeration::Canonical,
    };
    let probe = Probe {
        compiled: &compiled,
        conds,
        root_only: opts.reduced,
        max_valuations: opts.max_valuations,
    };
    let mut frames_checked = 0u64;
    for n in 1..=opts.max_n {
        if n > opts.cap {
            return Err(SearchError::CapExceeded { n, cap: opts.cap });
        }
        let mut cursor = FrameCursor::new(n, mode);
        let hit = if opts.workers <= 1 {
            let mut hit = None;
            while cursor.advance() {
                frames_checked += 1;
                if let Some((vals, world)) = probe.run(cursor.current())? {
                    hit = Some((cursor.current().clone(), vals, world));
                    break;
                }
            }
            hit
        } else {
            search_parallel(&mut cursor, &probe, opts.workers, &mut frames_checked)?
        };
        if let Some((p, vals, world)) = hit {
            let valuation: BTreeMap<String, WorldSet> = compiled
                .atoms()
                .iter()
                .cloned()
                .zip(vals)
                .collect();
            let model = Model::new(Frame::new_unchecked(p), valuation)
                .expect("valuations are drawn from upsets");
            debug_assert!(!forces(&model, world, &f));
            return Ok(SearchOutcome::Found(Countermodel { model, world }));
        }
    }
    Ok(SearchOutcome::NotFound {
        max_n: opts.max_n,
        frames_checked,
    })
}

type Hit = (Preframe, Vec<WorldSet>, usize);
type ProbeResult = Result<Option<(Vec<WorldSet>, usize)>, SearchError>;

// Frames are taken in batches; within a batch the lowest-index hit wins, so the
// result does not depend on the number of workers.
fn search_parallel(
    cursor: &mut FrameCursor,
    probe: &Probe<'_>,
    workers: usize,
    frames_checked: &mut u64,
) -> Result<Option<Hit>, SearchError> {
    loop {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH && cursor.advance() {
            batch.push(cursor.current().clone());
        }
        if batch.is_empty() {
            return Ok(None);
        }
        *frames_checked += batch.len() as u64;
        let results: Vec<Vec<(usize, ProbeResult)>> =
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..workers)
                    .map(|t| {
                        let batch = &batch;
                        s.spawn(move || {
                            let mut out = Vec::new();
                            for i in (t..batch.len()).step_by(workers) {
                                let r = probe.run(&batch[i]);
                                if !matches!(r, Ok(None)) {
                                    out.push((i, r));
                                    // later frames of this worker cannot beat this hit
                                    break;
                                }
                            }
                            out
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("search worker panicked"))
                    .collect()
            });
        let mut found: Vec<_> = results.into_iter().flatten().collect();
        found.sort_by_key(|(i, _)| *i);
        if let Some((i, r)) = found.into_iter().next() {
            let (vals, world) = r?.expect("only hits and errors are kept");
            return Ok(Some((batch[i].clone(), vals, world)));
        }
    }
}

/// A claimed non-derivation: a model in the logic's class refuting the formula.
#[derive(Debug, Clone)]
pub struct NonDerivationWitness {
    pub logic: String,
    pub conditions: Vec<ConditionId>,
    pub formula: Formula,
    pub model: Model,
    pub world: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessFailure {
    #[error("frame violates {0}")]
    Condition(ConditionId),
    #[error("world {0} does not exist")]
    NoSuchWorld(usize),
    #[error("formula is forced at world {0}")]
    Forced(usize),
    #[error(transparent)]
    Model(#[from] KripkeError),
}

pub fn verify_witness(w: &NonDerivationWitness) -> Result<(), WitnessFailure> {
    let frame = w.model.frame();
    if let Some((k, l, m)) = crate::kripke::frame_violation(frame) {
        return Err(KripkeError::NotAFrame { k, l, m }.into());
    }
    for (atom, &set) in w.model.valuation() {
        if !frame.is_upset(set) {
            return Err(KripkeError::NotUpset { atom: atom.clone() }.into());
        }
    }
    if let Some(&c) = w.conditions.iter().find(|&&c| !crate::conditions::check_condition(frame, c)) {
        return Err(WitnessFailure::Condition(c));
    }
    if w.world >= frame.len() {
        return Err(WitnessFailure::NoSuchWorld(w.world));
    }
    if forces(&w.model, w.world, &normalize(&w.formula)) {
        return Err(WitnessFailure::Forced(w.world));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::{build_preframe, is_frame};

    fn count(n: usize, conds: &[ConditionId]) -> usize {
        enumerate_frames_with(n, conds, Enumeration::Labeled, 6).unwrap().count()
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets(n).len()).collect();
        assert_eq!(counts, [1, 1, 3, 19, 219, 4231]);
        let natural: Vec<usize> = (0..=5).map(|n| natural_posets(n).len()).collect();
        assert_eq!(natural, [1, 1, 2, 7, 40, 357]);
    }

    #[test]
    fn frame_counts_match_brute_force() {
        // Oracle: every labeled poset times every modal relation, filtered by ⤳-p.
        for n in 1..=3 {
            let mut expected = 0;
            for up in posets(n) {
                for bits in 0u64..(1 << (n * n)) {
                    let succ: Vec<WorldSet> =
                        (0..n).map(|k| (bits >> (k * n)) & full(n)).collect();
                    if is_frame(&Preframe::from_masks(up.clone(), succ).unwrap()) {
                        expected += 1;
                    }
                }
            }
            assert_eq!(count(n, &[]), expected, "n = {n}");
        }
        assert_eq!(count(2, &[]), 34);
        assert_eq!(count(0, &[]), 0);
        assert_eq!(count(1, &[ConditionId::AlmostReflexive]), 2);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_frames_with(6, &[], Enumeration::Labeled, 5),
            Err(SearchError::CapExceeded { n: 6, cap: 5 })
        ));
    }

    #[test]
    fn rooted_and_forward_are_subsets() {
        for n in 1..=3 {
            let labeled: Vec<Frame> = enumerate_frames_with(n, &[], Enumeration::Labeled, 5).unwrap().collect();
            for mode in [Enumeration::Rooted, Enumeration::Forward, Enumeration::Canonical] {
                for fr in enumerate_frames_with(n, &[], mode, 5).unwrap() {
                    assert!(labeled.contains(&fr));
                }
            }
        }
    }

    #[test]
    fn canonical_mode_loses_no_refutations() {
        let opts = |mode_reduced| SearchOptions {
            max_n: 3,
            reduced: mode_reduced,
            ..SearchOptions::default()
        };
        for s in ["[]p -> [][]p", "p ~> q -> []p", "(p ~> q) \\/ (q ~> p)", "[]([]p -> p) -> []p", "p -> []p"] {
            let f = parse(s).unwrap();
            let full = find_countermodel(&f, &[], &opts(false)).unwrap();
            let canon = find_countermodel(&f, &[], &opts(true)).unwrap();
            assert_eq!(full.countermodel().is_some(), canon.countermodel().is_some(), "{s}");
        }
        for n in 1..=3 {
            let rooted = enumerate_frames_with(n, &[], Enumeration::Rooted, 5).unwrap().count();
            let canon = enumerate_frames_with(n, &[], Enumeration::Canonical, 5).unwrap().count();
            assert!(canon <= rooted && (n > 1 || canon == rooted));
        }
    }

    #[test]
    fn finds_small_countermodel() {
        let f = parse("([]#f ~> #f) -> []#f").unwrap();
        let conds = [ConditionId::Gathering, ConditionId::Noetherian];
        for reduced in [false, true] {
            let opts = SearchOptions {
                max_n: 3,
                reduced,
                ..SearchOptions::default()
            };
            let out = find_countermodel(&f, &conds, &opts).unwrap();
            let cm = out.countermodel().expect("countermodel");
            assert!(!forces(&cm.model, cm.world, &normalize(&f)));
            assert!(check_all(cm.model.frame(), &conds));
        }
        let none = find_countermodel(&Formula::Top, &[], &SearchOptions::with_max_n(3)).unwrap();
        assert!(matches!(none, SearchOutcome::NotFound { max_n: 3, .. }));
    }

    #[test]
    fn workers_do_not_change_the_result() {
        let f = parse("(p ~> q) -> [](p -> q)").unwrap();
        let one = find_countermodel(&f, &[], &SearchOptions::with_max_n(3)).unwrap();
        let four = find_countermodel(
            &f,
            &[],
            &SearchOptions {
                workers: 4,
                ..SearchOptions::with_max_n(3)
            },
        )
        .unwrap();
        let (a, b) = (one.countermodel().unwrap(), four.countermodel().unwrap());
        assert_eq!(a.model, b.model);
        assert_eq!(a.world, b.world);
    }

    #[test]
    fn witness_verification() {
        let frame = Frame::new(build_preframe(3, &[(1, 2)], &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let model = Model::new(frame, BTreeMap::new()).unwrap();
        let mut w = NonDerivationWitness {
            logic: "iGL".into(),
            conditions: vec![ConditionId::Noetherian, ConditionId::Gathering],
            formula: parse("([]#f ~> #f) -> []#f").unwrap(),
            model,
            world: 0,
        };
        assert_eq!(verify_witness(&w), Ok(()));
        w.world = 2;
        assert_eq!(verify_witness(&w), Err(WitnessFailure::Forced(2)));
        w.world = 0;
        w.conditions.push(ConditionId::Strong);
        assert_eq!(verify_witness(&w), Err(WitnessFailure::Condition(ConditionId::Strong)));
    }
}
