//! The proof files under `fixtures/proofs` are exports of the replay library.
//! Run with `LEWISKIT_BLESS=1` to regenerate them.

use std::path::PathBuf;

use lewiskit::logics::replay::library;
use lewiskit::logics::{check_proof, parse_proof, write_proof, Registry};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/proofs")
}

fn render(logic: &str, body: &str) -> String {
    format!("// logic: {logic}\n{body}")
}

#[test]
fn proof_files_match_library() {
    let reg = Registry::standard();
    let bless = std::env::var_os("LEWISKIT_BLESS").is_some();
    for fx in library() {
        let proof = fx.derive(reg).unwrap();
        let path = dir().join(format!("{}.proof", fx.name));
        let expected = render(fx.logic, &write_proof(&proof, false));
        if bless {
            std::fs::write(&path, &expected).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, expected, "{} is stale", path.display());
        let parsed = parse_proof(&text, reg).unwrap();
        assert_eq!(parsed, proof);
        assert_eq!(check_proof(reg, &reg.logic(fx.logic).unwrap(), &parsed), Ok(()));
    }
    let files = std::fs::read_dir(dir()).unwrap().count();
    assert_eq!(files, library().len(), "stray files in {}", dir().display());
}
