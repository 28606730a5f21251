//! NNIL formulas (no nested implications to the left) and best NNIL approximations from below.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{atoms, normalize, Formula};
use crate::ipc::{IpcError, Prover};
use crate::kripke::{full, Valuations};
use crate::search::natural_posets;

/// Largest variable set [`build_table`] accepts.
pub const DEFAULT_VAR_CAP: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NnilError {
    #[error(transparent)]
    Ipc(#[from] IpcError),
    #[error("{vars} variables exceed the cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
    #[error("variable {0} is not in the table")]
    OutsideTable(String),
}

/// Membership in `φ ::= ⊥ | ⊤ | p | φ ∧ φ | φ ∨ φ | p → φ`.
pub fn is_nnil(f: &Formula) -> Result<bool, NnilError> {
    let f = normalize(f);
    if f.is_modal() {
        return Err(IpcError::Modal(f).into());
    }
    fn go(f: &Formula) -> bool {
        match f {
            Formula::Bot | Formula::Top | Formula::Atom(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => go(a) && go(b),
            Formula::Imp(a, b) => matches!(**a, Formula::Atom(_)) && go(b),
            _ => false,
        }
    }
    Ok(go(&f))
}

/// One representative per IPC-equivalence class of NNIL formulas over `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NnilClassTable {
    pub vars: Vec<String>,
    pub representatives: Vec<Formula>,
}

/// Truth sets of a formula across a fixed family of small rooted models. Equal for
/// IPC-equivalent formulas, so it serves as a hash bucket before calling the prover.
struct Probe {
    up: Vec<Vec<u64>>,
    /// Per model: the frame index and the truth set of each variable.
    models: Vec<(usize, Vec<u64>)>,
}

impl Probe {
    fn new(vars: usize) -> Probe {
        let mut up = Vec::new();
        let mut models = Vec::new();
        for n in 1..=4 {
            for masks in natural_posets(n) {
                if masks[0] != full(n) {
                    continue;
                }
                let pre = crate::kripke::Preframe::from_masks_unchecked(masks.clone(), vec![0; n]);
                let ups = pre.upsets();
                let mut vals = Valuations::new(vars, &ups);
                loop {
                    models.push((up.len(), vals.current().to_vec()));
                    if !vals.advance() {
                        break;
                    }
                }
                up.push(masks);
            }
        }
        Probe { up, models }
    }

    fn atom(&self, i: usize) -> Vec<u64> {
        self.models.iter().map(|(_, v)| v[i]).collect()
    }

    fn constant(&self, top: bool) -> Vec<u64> {
        self.models
            .iter()
            .map(|(k, _)| if top { full(self.up[*k].len()) } else { 0 })
            .collect()
    }

    fn imp(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.models
            .iter()
            .enumerate()
            .map(|(i, (k, _))| {
                let up = &self.up[*k];
                (0..up.len())
                    .filter(|&w| up[w] & a[i] & !b[i] == 0)
                    .fold(0, |acc, w| acc | 1 << w)
            })
            .collect()
    }
}

fn smaller(a: &Formula, b: &Formula) -> bool {
    (a.size(), a.to_string()) < (b.size(), b.to_string())
}

/// Saturates `{⊥, ⊤} ∪ vars` under `∧`, `∨` and `p → ·` up to IPC equivalence.
///
/// Every NNIL formula is built from the seeds by these constructors, and the constructors
/// respect IPC equivalence, so closing the set of classes reaches every class.
pub fn build_table(vars: &BTreeSet<String>) -> Result<NnilClassTable, NnilError> {
    build_table_capped(vars, DEFAULT_VAR_CAP)
}

pub fn build_table_capped(vars: &BTreeSet<String>, cap: usize) -> Result<NnilClassTable, NnilError> {
    if vars.len() > cap {
        return Err(NnilError::CapExceeded {
            vars: vars.len(),
            cap,
        });
    }
    let vars: Vec<String> = vars.iter().cloned().collect();
    let probe = Probe::new(vars.len());
    let mut prover = Prover::new();
    let mut reps: Vec<Formula> = Vec::new();
    let mut prints: Vec<Vec<u64>> = Vec::new();
    let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();

    // returns true when a new class was added
    let mut offer = |f: Formula, fp: Vec<u64>, reps: &mut Vec<Formula>, prints: &mut Vec<Vec<u64>>| -> bool {
        let bucket = buckets.entry(fp.clone()).or_default();
        for &i in bucket.iter() {
            let same = prover.proves_opaque(&[reps[i].clone()], &f) && prover.proves_opaque(std::slice::from_ref(&f), &reps[i]);
            if same {
                if smaller(&f, &reps[i]) {
                    reps[i] = f;
                }
                return false;
            }
        }
        bucket.push(reps.len());
        reps.push(f);
        prints.push(fp);
        true
    };

    offer(Formula::Bot, probe.constant(false), &mut reps, &mut prints);
    offer(Formula::Top, probe.constant(true), &mut reps, &mut prints);
    for (i, v) in vars.iter().enumerate() {
        offer(Formula::atom(v), probe.atom(i), &mut reps, &mut prints);
    }

    // classes [0, done) have been combined with each other already
    let mut done = 0;
    while done < reps.len() {
        let end = reps.len();
        for j in done..end {
            for i in 0..=j {
                let (a, b) = (reps[i].clone(), reps[j].clone());
                let fa: Vec<u64> = prints[i].iter().zip(&prints[j]).map(|(x, y)| x & y).collect();
                let fo: Vec<u64> = prints[i].iter().zip(&prints[j]).map(|(x, y)| x | y).collect();
                offer(Formula::and(a.clone(), b.clone()), fa, &mut reps, &mut prints);
                offer(Formula::or(a, b), fo, &mut reps, &mut prints);
            }
            for (k, v) in vars.iter().enumerate() {
                let fp = probe.imp(&probe.atom(k), &prints[j]);
                offer(Formula::imp(Formula::atom(v), reps[j].clone()), fp, &mut reps, &mut prints);
            }
        }
        // pairs (i, j) with i < done <= j and i, j < end are covered above; pairs with
        // j >= end are handled next round
        done = end;
    }
    Ok(NnilClassTable {
        vars,
        representatives: reps,
    })
}

impl NnilClassTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Indices of the representatives `ψ` with `IPC ⊢ ψ → f`.
pub fn star_classes(f: &Formula, table: &NnilClassTable) -> Result<Vec<usize>, NnilError> {
    let f = normalize(f);
    if f.is_modal() {
        return Err(IpcError::Modal(f).into());
    }
    if f.has_meta() {
        return Err(IpcError::Metavariable(f).into());
    }
    if let Some(v) = atoms(&f).into_iter().find(|v| !table.vars.contains(v)) {
        return Err(NnilError::OutsideTable(v));
    }
    let mut prover = Prover::new();
    Ok((0..table.len())
        .filter(|&i| prover.proves_opaque(&[table.representatives[i].clone()], &f))
        .collect())
}

/// The best NNIL approximation of `f` from below: the disjunction of the maximal
/// representatives that imply it.
pub fn star(f: &Formula, table: &NnilClassTable) -> Result<Formula, NnilError> {
    let classes = star_classes(f, table)?;
    let reps: Vec<&Formula> = classes.iter().map(|&i| &table.representatives[i]).collect();
    let mut prover = Prover::new();
    // distinct classes, so implication one way only means strictly below
    let parts: Vec<Formula> = (0..reps.len())
        .filter(|&i| {
            !(0..reps.len()).any(|j| j != i && prover.proves_opaque(&[reps[i].clone()], reps[j]))
        })
        .map(|i| reps[i].clone())
        .collect();
    Ok(Formula::disj(&parts))
}
