//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lewiskit::formula::{subformulas, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varisat::{ExtendFormula, Lit, Solver};

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

fn leaf(rng: &mut ChaCha8Rng, atoms: usize) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::Bot,
        1 => Formula::Top,
        _ => Formula::atom(ATOMS[rng.gen_range(0..atoms)]),
    }
}

fn gen(rng: &mut ChaCha8Rng, atoms: usize, depth: usize, modal: bool) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, atoms);
    }
    let ops = if modal { 7 } else { 5 };
    let sub = |rng: &mut ChaCha8Rng| gen(rng, atoms, depth - 1, modal);
    match rng.gen_range(0..ops) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 | 3 => Formula::imp(sub(rng), sub(rng)),
        4 => Formula::not(sub(rng)),
        5 => Formula::strict(sub(rng), sub(rng)),
        _ => Formula::boxed(sub(rng)),
    }
}

/// Distinct random formulas over the first `atoms` atoms with depth at most `depth`.
///
/// Half of them are built as `a -> b` with `b` drawn from the subformulas of `a` mixed with
/// fresh material, which keeps a healthy share of theorems in the corpus.
pub fn corpus(seed: u64, count: usize, atoms: usize, depth: usize, modal: bool) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let f = if rng.gen_bool(0.5) || depth < 2 {
            gen(&mut rng, atoms, depth, modal)
        } else {
            let a = gen(&mut rng, atoms, depth - 1, modal);
            let parts: Vec<Formula> = subformulas(&a).into_iter().filter(|g| g.depth() < depth - 1).collect();
            let pick = parts[rng.gen_range(0..parts.len())].clone();
            let b = match rng.gen_range(0..3) {
                0 => pick,
                1 => Formula::or(pick, leaf(&mut rng, atoms)),
                _ => Formula::not(Formula::not(pick)),
            };
            Formula::imp(a, b)
        };
        if f.depth() <= depth && seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

/// Whether some intuitionistic poset model with at most `n` worlds refutes `f`, decided by
/// a SAT encoding independent of the library's evaluator.
pub fn sat_refutable(f: &Formula, n: usize) -> bool {
    let mut s = Solver::new();
    let le: Vec<Vec<Lit>> = (0..n).map(|_| (0..n).map(|_| s.new_lit()).collect()).collect();
    for i in 0..n {
        s.add_clause(&[le[i][i]]);
        for j in 0..n {
            if i != j {
                s.add_clause(&[!le[i][j], !le[j][i]]);
            }
            for k in 0..n {
                s.add_clause(&[!le[i][j], !le[j][k], le[i][k]]);
            }
        }
    }
    let subs: Vec<Formula> = subformulas(f).into_iter().collect();
    let mut t: BTreeMap<&Formula, Vec<Lit>> = BTreeMap::new();
    for g in &subs {
        let lits = (0..n).map(|_| s.new_lit()).collect();
        t.insert(g, lits);
    }
    for g in &subs {
        let tg = t[g].clone();
        for w in 0..n {
            match g {
                Formula::Bot => s.add_clause(&[!tg[w]]),
                Formula::Top => s.add_clause(&[tg[w]]),
                Formula::Atom(_) => {
                    for v in 0..n {
                        s.add_clause(&[!tg[w], !le[w][v], tg[v]]);
                    }
                }
                Formula::And(a, b) => {
                    let (ta, tb) = (t[&**a][w], t[&**b][w]);
                    s.add_clause(&[!tg[w], ta]);
                    s.add_clause(&[!tg[w], tb]);
                    s.add_clause(&[tg[w], !ta, !tb]);
                }
                Formula::Or(a, b) => {
                    let (ta, tb) = (t[&**a][w], t[&**b][w]);
                    s.add_clause(&[!tg[w], ta, tb]);
                    s.add_clause(&[tg[w], !ta]);
                    s.add_clause(&[tg[w], !tb]);
                }
                Formula::Imp(a, b) => {
                    let (ta, tb) = (&t[&**a], &t[&**b]);
                    let mut some = vec![tg[w]];
                    for v in 0..n {
                        s.add_clause(&[!tg[w], !le[w][v], !ta[v], tb[v]]);
                        let x = s.new_lit();
                        s.add_clause(&[!x, le[w][v]]);
                        s.add_clause(&[!x, ta[v]]);
                        s.add_clause(&[!x, !tb[v]]);
                        some.push(x);
                    }
                    s.add_clause(&some);
                }
                other => panic!("not propositional: {other}"),
            }
        }
    }
    s.add_clause(&[!t[f][0]]);
    s.solve().expect("solver runs")
}

pub mod arb {
    use std::collections::BTreeMap;

    use lewiskit::formula::Formula;
    use lewiskit::kripke::{Frame, Model, Preframe};
    use lewiskit::search::posets;
    use proptest::prelude::*;

    pub fn formula(modal: bool) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::Bot),
            Just(Formula::Top),
            prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            let bin = (inner.clone(), inner.clone(), 0..if modal { 4 } else { 3 }).prop_map(|(a, b, op)| match op {
                0 => Formula::and(a, b),
                1 => Formula::or(a, b),
                2 => Formula::imp(a, b),
                _ => Formula::strict(a, b),
            });
            if modal {
                prop_oneof![3 => bin, 1 => inner.prop_map(Formula::boxed)].boxed()
            } else {
                bin.boxed()
            }
        })
    }

    /// A random frame: a labeled poset with a random modal relation closed under `⪯ · ⊏`.
    pub fn frame() -> impl Strategy<Value = Frame> {
        (1usize..=4).prop_flat_map(|n| {
            let count = posets(n).len();
            (0..count, prop::collection::vec(any::<u64>(), n)).prop_map(move |(i, raw)| {
                let up = posets(n)[i].clone();
                let mask = (1u64 << n) - 1;
                let succ: Vec<u64> = (0..n)
                    .map(|k| (0..n).filter(|&l| up[k] >> l & 1 == 1).fold(0, |acc, l| acc | (raw[l] & mask)))
                    .collect();
                Frame::new(Preframe::from_masks(up, succ).unwrap()).unwrap()
            })
        })
    }

    pub fn model() -> impl Strategy<Value = Model> {
        (frame(), prop::collection::vec(any::<u64>(), 3)).prop_map(|(fr, raw)| {
            let val: BTreeMap<String, u64> = ["p", "q", "r"]
                .iter()
                .zip(raw)
                .map(|(a, s)| (a.to_string(), fr.up_of_set(s & fr.worlds())))
                .collect();
            Model::new(fr, val).unwrap()
        })
    }
}
