use std::collections::HashMap;

use super::{full, Preframe, WorldSet};
use crate::formula::Formula;

#[derive(Debug, Clone, Copy)]
enum Op {
    Bot,
    Top,
    Atom(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Strict(usize, usize),
}

/// A formula flattened into a shared-subterm op list, evaluated to truth sets.
///
/// `□x` and `⊤ ⤳ x` compile identically. Metavariables are treated as atoms named `?x`.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
    atoms: Vec<String>,
}

impl Compiled {
    pub fn new(f: &Formula) -> Compiled {
        let mut c = Compiled {
            ops: Vec::new(),
            atoms: Vec::new(),
        };
        let mut memo = HashMap::new();
        let mut atom_ix = HashMap::new();
        c.push(f, &mut memo, &mut atom_ix);
        c
    }

    fn push(
        &mut self,
        f: &Formula,
        memo: &mut HashMap<Formula, usize>,
        atom_ix: &mut HashMap<String, usize>,
    ) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let mut atom = |name: String, atoms: &mut Vec<String>| {
            *atom_ix.entry(name.clone()).or_insert_with(|| {
                atoms.push(name);
                atoms.len() - 1
            })
        };
        let op = match f {
            Formula::Bot => Op::Bot,
            Formula::Top => Op::Top,
            Formula::Atom(n) => Op::Atom(atom(n.to_string(), &mut self.atoms)),
            Formula::Meta(n) => Op::Atom(atom(format!("?{n}"), &mut self.atoms)),
            Formula::And(a, b) => Op::And(self.push(a, memo, atom_ix), self.push(b, memo, atom_ix)),
            Formula::Or(a, b) => Op::Or(self.push(a, memo, atom_ix), self.push(b, memo, atom_ix)),
            Formula::Imp(a, b) => Op::Imp(self.push(a, memo, atom_ix), self.push(b, memo, atom_ix)),
            Formula::Strictif(a, b) => {
                Op::Strict(self.push(a, memo, atom_ix), self.push(b, memo, atom_ix))
            }
            Formula::Box(a) => {
                let t = self.push(&Formula::Top, memo, atom_ix);
                Op::Strict(t, self.push(a, memo, atom_ix))
            }
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        memo.insert(f.clone(), i);
        i
    }

    /// Atom names in the order expected by [`Compiled::eval`].
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Truth set of the formula, with `vals[i]` the extension of `atoms()[i]`.
    pub fn eval(&self, frame: &Preframe, vals: &[WorldSet]) -> WorldSet {
        let mut buf = Vec::with_capacity(self.ops.len());
        self.eval_into(frame, vals, &mut buf)
    }

    pub fn eval_into(&self, frame: &Preframe, vals: &[WorldSet], buf: &mut Vec<WorldSet>) -> WorldSet {
        let all = full(frame.len());
        let up = frame.up_masks();
        let succ = frame.succ_masks();
        let guarded = |rel: &[WorldSet], bad: WorldSet| -> WorldSet {
            if bad == 0 {
                return all;
            }
            let mut out = 0;
            for (w, &r) in rel.iter().enumerate() {
                if r & bad == 0 {
                    out |= 1 << w;
                }
            }
            out
        };
        buf.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Bot => 0,
                Op::Top => all,
                Op::Atom(i) => vals[i],
                Op::And(a, b) => buf[a] & buf[b],
                Op::Or(a, b) => buf[a] | buf[b],
                Op::Imp(a, b) => guarded(up, buf[a] & !buf[b]),
                Op::Strict(a, b) => guarded(succ, buf[a] & !buf[b]),
            };
            buf.push(v);
        }
        *buf.last().expect("compiled formula has at least one op")
    }

    /// Evaluates up to 64 valuations at once. `lanes[i * n + w]` has bit `l` set when
    /// atom `i` holds at world `w` in valuation `l`; the result has the same layout for
    /// the whole formula, one word per world.
    pub fn eval_lanes<'b>(&self, frame: &Preframe, lanes: &[u64], buf: &'b mut Vec<u64>) -> &'b [u64] {
        let n = frame.len();
        let up = frame.up_masks();
        let succ = frame.succ_masks();
        buf.clear();
        buf.resize(self.ops.len() * n, 0);
        for (k, op) in self.ops.iter().enumerate() {
            let (done, rest) = buf.split_at_mut(k * n);
            let out = &mut rest[..n];
            let slot = |i: usize| &done[i * n..(i + 1) * n];
            match *op {
                Op::Bot => out.fill(0),
                Op::Top => out.fill(!0),
                Op::Atom(i) => out.copy_from_slice(&lanes[i * n..(i + 1) * n]),
                Op::And(a, b) => {
                    for (o, (x, y)) in out.iter_mut().zip(slot(a).iter().zip(slot(b))) {
                        *o = x & y;
                    }
                }
                Op::Or(a, b) => {
                    for (o, (x, y)) in out.iter_mut().zip(slot(a).iter().zip(slot(b))) {
                        *o = x | y;
                    }
                }
                Op::Imp(a, b) | Op::Strict(a, b) => {
                    let rel = if matches!(op, Op::Imp(..)) { up } else { succ };
                    let (a, b) = (slot(a), slot(b));
                    let mut bad = [0u64; 64];
                    for v in 0..n {
                        bad[v] = a[v] & !b[v];
                    }
                    for (w, o) in out.iter_mut().enumerate() {
                        let mut any = 0;
                        let mut r = rel[w];
                        while r != 0 {
                            any |= bad[r.trailing_zeros() as usize];
                            r &= r - 1;
                        }
                        *o = !any;
                    }
                }
            }
        }
        &buf[(self.ops.len() - 1) * n..]
    }
}

/// Odometer over all assignments of upsets to a fixed number of atoms.
#[derive(Debug, Clone)]
pub struct Valuations<'a> {
    ups: &'a [WorldSet],
    idx: Vec<usize>,
    cur: Vec<WorldSet>,
}

impl<'a> Valuations<'a> {
    pub fn new(atoms: usize, ups: &'a [WorldSet]) -> Valuations<'a> {
        assert!(!ups.is_empty(), "a poset always has at least the empty upset");
        Valuations {
            ups,
            idx: vec![0; atoms],
            cur: vec![ups[0]; atoms],
        }
    }

    pub fn current(&self) -> &[WorldSet] {
        &self.cur
    }

    /// Moves to the next assignment; false once all have been visited.
    pub fn advance(&mut self) -> bool {
        for i in 0..self.idx.len() {
            self.idx[i] += 1;
            if self.idx[i] < self.ups.len() {
                self.cur[i] = self.ups[self.idx[i]];
                return true;
            }
            self.idx[i] = 0;
            self.cur[i] = self.ups[0];
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{normalize, parse};
    use crate::kripke::build_preframe;

    #[test]
    fn shared_subterms_compile_once() {
        let f = parse("(p -> q) /\\ (p -> q)").unwrap();
        let c = Compiled::new(&f);
        assert_eq!(c.ops.len(), 4);
        assert_eq!(c.atoms(), ["p", "q"]);
    }

    #[test]
    fn box_and_top_strict_agree() {
        let p = build_preframe(3, &[(0, 1)], &[(0, 2), (1, 2)]).unwrap();
        let raw = parse("[]q -> q").unwrap();
        let norm = normalize(&raw);
        for q in p.upsets() {
            assert_eq!(Compiled::new(&raw).eval(&p, &[q]), Compiled::new(&norm).eval(&p, &[q]));
        }
    }

    #[test]
    fn odometer_visits_every_assignment() {
        let ups = [0, 1, 3];
        let mut v = Valuations::new(2, &ups);
        let mut seen = vec![v.current().to_vec()];
        while v.advance() {
            seen.push(v.current().to_vec());
        }
        assert_eq!(seen.len(), 9);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 9);
        let mut none = Valuations::new(0, &ups);
        assert!(!none.advance());
    }

    #[test]
    fn lanes_match_scalar() {
        let f = normalize(&parse("(p ~> q) -> ([]p \\/ ~q) /\\ (q -> p ~> #f)").unwrap());
        let c = Compiled::new(&f);
        let pre = build_preframe(3, &[(0, 1), (0, 2)], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ups = pre.upsets();
        let n = 3;
        let mut v = Valuations::new(2, &ups);
        let mut all = vec![v.current().to_vec()];
        while v.advance() {
            all.push(v.current().to_vec());
        }
        let mut lanes = vec![0u64; 2 * n];
        for (l, val) in all.iter().enumerate() {
            for (i, &set) in val.iter().enumerate() {
                for w in 0..n {
                    if set >> w & 1 == 1 {
                        lanes[i * n + w] |= 1 << l;
                    }
                }
            }
        }
        let mut buf = Vec::new();
        let truth = c.eval_lanes(&pre, &lanes, &mut buf).to_vec();
        for (l, val) in all.iter().enumerate() {
            let scalar = c.eval(&pre, val);
            for (w, t) in truth.iter().enumerate() {
                assert_eq!(t >> l & 1, scalar >> w & 1);
            }
        }
    }
}
