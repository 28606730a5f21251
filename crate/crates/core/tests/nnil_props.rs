mod common;

use std::collections::BTreeSet;

use lewiskit::formula::{parse, Formula};
use lewiskit::ipc::{ipc_equiv, Prover};
use lewiskit::nnil::{build_table, is_nnil, star, NnilClassTable};

fn table(vars: &[&str]) -> NnilClassTable {
    let set: BTreeSet<String> = vars.iter().map(|s| s.to_string()).collect();
    build_table(&set).unwrap()
}

fn proves(p: &mut Prover, a: &Formula, b: &Formula) -> bool {
    p.proves(&Formula::imp(a.clone(), b.clone())).unwrap()
}

#[test]
fn class_counts() {
    assert_eq!(table(&["p"]).len(), 5);
    let t2 = table(&["p", "q"]);
    assert_eq!(t2.len(), 158);
    let mut prover = Prover::new();
    let reps = &t2.representatives;
    for (i, a) in reps.iter().enumerate() {
        assert!(is_nnil(a).unwrap(), "{a}");
        for b in &reps[..i] {
            assert!(!(proves(&mut prover, a, b) && proves(&mut prover, b, a)), "{a} ~ {b}");
        }
    }
}

#[test]
fn double_negation() {
    let t = table(&["p"]);
    assert!(ipc_equiv(&star(&parse("~~p").unwrap(), &t).unwrap(), &parse("p").unwrap()).unwrap());
}

fn check_laws(t: &NnilClassTable, corpus: &[Formula]) {
    let mut prover = Prover::new();
    let stars: Vec<Formula> = corpus.iter().map(|f| star(f, t).unwrap()).collect();
    for (f, s) in corpus.iter().zip(&stars) {
        assert!(is_nnil(s).unwrap(), "{s}");
        assert!(proves(&mut prover, s, f), "{s} does not imply {f}");
        for chi in &t.representatives {
            assert_eq!(proves(&mut prover, chi, f), proves(&mut prover, chi, s), "{chi} vs {f}");
        }
        if is_nnil(f).unwrap() {
            assert!(ipc_equiv(s, f).unwrap(), "{f}");
        }
    }
    for (i, f) in corpus.iter().enumerate() {
        for (j, g) in corpus.iter().enumerate() {
            if proves(&mut prover, f, g) {
                assert!(proves(&mut prover, &stars[i], &stars[j]), "{f} -> {g}");
            }
        }
    }
}

#[test]
fn laws_over_one_variable() {
    let t = table(&["p"]);
    let mut corpus = common::corpus(3, 80, 1, 4, false);
    corpus.extend(t.representatives.iter().cloned());
    check_laws(&t, &corpus);
}

#[test]
fn laws_over_two_variables() {
    let t = table(&["p", "q"]);
    let mut corpus = common::corpus(5, 40, 2, 4, false);
    corpus.extend(t.representatives.iter().step_by(8).cloned());
    check_laws(&t, &corpus);
}
