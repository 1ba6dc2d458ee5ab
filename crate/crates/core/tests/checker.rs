mod common;

use std::fs;
use std::path::PathBuf;

use common::big_stack;
use common::derivations::{mutation_suite, Composer};

use ptt_core::semantics::is_valid_sequent;
use ptt_core::syntax::{parse_derivation, parse_source, print_proof_file};
use ptt_core::{check, Derivation, Guard, Prover};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn sound(d: &Derivation) -> bool {
    let q = d.conclusion();
    let a: Vec<_> = q.assumptions().iter().cloned().collect();
    is_valid_sequent(&a, q.conclusion(), Guard::default()).unwrap()
}

#[test]
fn random_compositions_are_sound() {
    for seed in 0..300 {
        let d = Composer::new(seed).derivation(1 + seed as usize % 12);
        check(&d).unwrap_or_else(|e| panic!("seed {}: {}", seed, e));
        assert!(sound(&d), "seed {}: {:?}", seed, d.conclusion());
    }
}

#[test]
fn random_compositions_round_trip() {
    for seed in 0..50 {
        let d = Composer::new(seed).derivation(8);
        let text = print_proof_file(&d);
        let back = parse_derivation(&text).unwrap();
        check(&back).unwrap();
        assert_eq!(back.conclusion(), d.conclusion());
        assert_eq!(print_proof_file(&back), text);
    }
}

#[test]
fn mutations_are_rejected() {
    big_stack(|| {
        let suite = mutation_suite();
        assert!(suite.len() >= 20);
        for m in suite {
            let e = check(&m.derivation).expect_err(m.name);
            assert_eq!(e.class, m.class, "{}: {}", m.name, e);
            assert_eq!(e.path, m.path, "{}: {}", m.name, e);
        }
    })
}

#[test]
fn golden_files_check_and_reprint() {
    let mut seen = 0;
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("pttp") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let d = parse_derivation(&text).unwrap();
        check(&d).unwrap();
        assert!(sound(&d), "{}", path.display());
        assert_eq!(print_proof_file(&d), text, "{}", path.display());

        // the proof concludes the formula of its source file
        let src = fs::read_to_string(path.with_extension("ptt")).unwrap();
        let q = parse_source(&src).unwrap().sequent().unwrap();
        assert_eq!(d.conclusion(), &q, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn prover_reproduces_golden_files() {
    big_stack(|| {
        for name in ["peirce", "eqrefl", "forall", "mp", "dneg", "beta"] {
            let src = fs::read_to_string(golden_dir().join(format!("{}.ptt", name))).unwrap();
            let q = parse_source(&src).unwrap().sequent().unwrap();
            let d = Prover::default().prove_sequent(&q).unwrap();
            let expected = fs::read_to_string(golden_dir().join(format!("{}.pttp", name))).unwrap();
            assert_eq!(print_proof_file(&d), expected, "{}", name);
        }
    })
}
