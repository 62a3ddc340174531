//! Every corpus input against its recorded expectations.

mod common;

use common::*;
use solvco::commands::{run, Command, Options, SubtorusArg};
use solvco::input::load_str;

/// Exit codes of validate, betti, hodge and modify.
const EXIT_CODES: &[(&str, [i32; 4])] = &[
    ("abelian_example", [0, 0, 0, 0]),
    ("ex_mod_gamma1", [0, 0, 1, 0]),
    ("ex_mod_gamma1_jacobi_broken", [2, 2, 2, 2]),
    ("ex_mod_gamma2", [0, 0, 1, 0]),
    ("final_remark", [0, 0, 0, 0]),
    ("nakamura", [0, 0, 0, 0]),
    ("nakamura_generic", [0, 0, 0, 0]),
    ("nonsplit", [0, 0, 0, 0]),
    // J is not integrable on g itself, only on the modified algebra
    ("r2_r8", [2, 0, 2, 0]),
];

const COMMANDS: [Command; 4] = [Command::Validate, Command::Betti, Command::Hodge, Command::Modify];

#[test]
fn table_covers_the_corpus() {
    let listed: Vec<&str> = EXIT_CODES.iter().map(|(n, _)| *n).collect();
    assert_eq!(corpus_names(), listed);
}

#[test]
fn exit_codes_and_regressions() {
    for (name, codes) in EXIT_CODES {
        let text = corpus_text(name);
        for (cmd, want) in COMMANDS.iter().zip(codes) {
            let r = run(*cmd, &text, &Options::default());
            assert_eq!(r.exit_code, *want, "{name} {cmd:?}: {}", r.to_json());
        }
    }
}

#[test]
fn expectations_are_reproduced() {
    for name in corpus_names() {
        let text = corpus_text(&name);
        let Ok(p) = load_str(&text) else { continue };
        let e = &p.expectations;
        if let Some(b) = &e.betti {
            let r = run(Command::Betti, &text, &Options::default());
            assert_eq!(&r.betti().unwrap().betti_a_gamma, b, "{name}");
        }
        if let (Some(h), false) = (&e.hodge, e.hodge_informational) {
            let r = run(Command::Hodge, &text, &Options::default());
            assert_eq!(&r.hodge().unwrap().hodge, h, "{name}");
        }
    }
}

#[test]
fn jacobi_failure_names_the_triple() {
    let r = run(Command::Validate, &corpus_text("ex_mod_gamma1_jacobi_broken"), &Options::default());
    let msg = r.to_json();
    for n in ["T", "V1", "W1"] {
        assert!(msg.contains(n), "{msg}");
    }
}

#[test]
fn reports_are_deterministic() {
    for name in corpus_names() {
        let text = corpus_text(&name);
        for cmd in COMMANDS {
            let a = run(cmd, &text, &Options::default()).without_timing().to_json();
            let b = run(cmd, &text, &Options::default()).without_timing().to_json();
            assert_eq!(a, b, "{name} {cmd:?}");
        }
    }
}

#[test]
fn modified_documents_round_trip() {
    for name in corpus_names() {
        let text = corpus_text(&name);
        let r = run(Command::Modify, &text, &Options::default());
        let Some(m) = r.modify() else { continue };
        let emitted = serde_json::to_string(&m.document).unwrap();
        let q = load_str(&emitted).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(q.algebra.jacobi_failure(), None, "{name}");
        // the emitted algebra needs no further change under a trivial subtorus
        let opts = Options { subtorus: SubtorusArg::Explicit(Vec::new()), ..Options::default() };
        let again = run(Command::Modify, &emitted, &opts);
        assert!(again.modify().unwrap().unchanged, "{name}");
    }
}

fn modified(name: &str, subtorus: SubtorusArg) -> solvco::commands::ModifyResult {
    let r = run(Command::Modify, &corpus_text(name), &Options { subtorus, ..Options::default() });
    assert_eq!(r.exit_code, 0, "{}", r.to_json());
    r.modify().unwrap().clone()
}

#[test]
fn full_modification_of_the_rotation_is_abelian() {
    let m = modified("ex_mod_gamma1", SubtorusArg::Full);
    assert!(m.document.algebra.brackets.is_empty(), "{:?}", m.document.algebra.brackets);
    assert!(m.nilpotent);
}

#[test]
fn half_turn_lattice_needs_no_modification() {
    assert!(modified("ex_mod_gamma1", SubtorusArg::Auto).unchanged);
}

/// (left, right, [(basis, coefficient)])
type Brackets = Vec<(String, String, Vec<(String, String)>)>;

#[test]
fn nakamura_loses_its_rotation() {
    let m = modified("nakamura", SubtorusArg::Auto);
    assert!(m.completely_solvable && !m.nilpotent);
    let got: Brackets = m
        .document
        .algebra
        .brackets
        .iter()
        .map(|b| (b.left.clone(), b.right.clone(), b.value.iter().map(|(k, v)| (k.clone(), v.clone())).collect()))
        .collect();
    let want: Brackets = [("e3", "1"), ("e4", "1"), ("e5", "-1"), ("e6", "-1")]
        .iter()
        .map(|(e, c)| ("e1".to_string(), e.to_string(), vec![(e.to_string(), c.to_string())]))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn trivial_modification_is_idempotent() {
    for name in corpus_names() {
        let text = corpus_text(&name);
        if load_str(&text).is_err() {
            continue;
        }
        let opts = Options { subtorus: SubtorusArg::Explicit(Vec::new()), ..Options::default() };
        let once = run(Command::Modify, &text, &opts);
        let Some(m) = once.modify() else { continue };
        let emitted = serde_json::to_string(&m.document).unwrap();
        let twice = run(Command::Modify, &emitted, &opts);
        assert_eq!(
            serde_json::to_string(&twice.modify().unwrap().document.algebra).unwrap(),
            serde_json::to_string(&m.document.algebra).unwrap(),
            "{name}"
        );
    }
}
