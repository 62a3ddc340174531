//! Invariants of every construction, checked on random presentations.

mod common;

use common::*;
use proptest::prelude::*;

use solvco::commands::{cmd_betti, cmd_hodge, modify_algebra, Options, PipelineArg, SubtorusArg};
use solvco::derham::{a_gamma_subcomplex, is_poincare_symmetric, nilshadow_complex};
use solvco::dolbeault::{
    breve_from, build_b_gamma, build_b_gamma_split, invariant_dolbeault, is_serre_symmetric, shortcut_hodge,
    ShortcutMode,
};
use solvco::lie::{ce_complex, compute_ad_s};
use solvco::modification::SubtorusMode;

const CASES: u32 = 256;

fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn de_rham_complexes_square_to_zero(case in real_case()) {
        let p = case.problem();
        let ws = weight_system(&p);
        prop_assert!(d_squared_zero(&ce_complex(&p.algebra).unwrap()));
        prop_assert!(d_squared_zero(&nilshadow_complex(&ws).unwrap()));
        prop_assert!(d_squared_zero(&a_gamma_subcomplex(&ws, &p.lattice).unwrap()));
        let gs = modify_algebra(&p, &SubtorusArg::Auto).unwrap();
        prop_assert!(d_squared_zero(&ce_complex(&gs).unwrap()));
    }

    #[test]
    fn jordan_pairs_reassemble(case in jordan_case()) {
        prop_assert_eq!(jordan_holds(&case), Ok(()));
    }

    #[test]
    fn modified_algebras_satisfy_jacobi(case in real_case()) {
        let p = case.problem();
        for mode in [SubtorusArg::Auto, SubtorusArg::Full] {
            let gs = modify_algebra(&p, &mode).unwrap();
            prop_assert_eq!(gs.jacobi_failure(), None, "{:?}", mode);
        }
    }

    #[test]
    fn reported_betti_vectors_are_palindromic(case in real_case()) {
        let p = case.problem();
        let (r, code) = cmd_betti(&p, &Options::default()).unwrap();
        prop_assert!(code == 0 || code == 1, "exit {code}");
        prop_assert!(is_poincare_symmetric(&r.betti_g));
        prop_assert!(is_poincare_symmetric(&r.betti_g_s));
        prop_assert!(is_poincare_symmetric(&r.betti_a_gamma));
        if r.verdict == "PASS" {
            prop_assert_eq!(&r.betti_a_gamma, &r.betti_g_s);
        }
    }

    #[test]
    fn trivial_subtorus_changes_nothing(case in real_case()) {
        let p = case.problem();
        let gs = modify_algebra(&p, &SubtorusArg::Explicit(Vec::new())).unwrap();
        prop_assert_eq!(gs.structure_constants(), p.algebra.structure_constants());
    }

    #[test]
    fn full_torus_modification_is_nilpotent(case in real_case()) {
        let p = case.problem();
        prop_assert!(modify_algebra(&p, &SubtorusArg::Full).unwrap().is_nilpotent());
    }

    #[test]
    fn dolbeault_complexes_square_to_zero(case in complex_case()) {
        let p = case.problem();
        let j = p.complex_structure.as_ref().unwrap();
        prop_assert!(dbar_squared_zero(&invariant_dolbeault(&p.algebra, j).unwrap()));
        let b = build_b_gamma_split(&p.algebra, j, &p.declared, &p.lattice).unwrap();
        prop_assert!(dbar_squared_zero(&b.complex));
        let ads = compute_ad_s(&p.algebra).unwrap();
        if let Ok(b) = build_b_gamma(&p.algebra, &ads, j, &p.declared, &p.lattice) {
            prop_assert!(dbar_squared_zero(&b.complex));
        }
    }

    #[test]
    fn reported_hodge_tables_are_serre_symmetric(case in complex_case()) {
        let p = case.problem();
        for pipeline in [PipelineArg::Auto, PipelineArg::Split, PipelineArg::Breve] {
            let opts = Options { pipeline, ..Options::default() };
            let (h, code) = cmd_hodge(&p, &opts).unwrap();
            prop_assert_eq!(code, 0, "{:?}", h.checks);
            prop_assert!(is_serre_symmetric(&h.hodge), "{:?}", h.hodge);
        }
    }

    #[test]
    fn pipelines_agree_where_both_apply(case in complex_case()) {
        let p = case.problem();
        let j = p.complex_structure.as_ref().unwrap();
        let ads = compute_ad_s(&p.algebra).unwrap();
        let split = build_b_gamma_split(&p.algebra, j, &p.declared, &p.lattice).unwrap();
        if let Ok(dolbb) = build_b_gamma(&p.algebra, &ads, j, &p.declared, &p.lattice) {
            prop_assert_eq!(dolbb.hodge(), split.hodge());
        }
        let bp = breve_from(&p.algebra, &split, &p.declared, &p.lattice, &SubtorusMode::Auto).unwrap();
        let general = shortcut_hodge(&bp, ShortcutMode::General).unwrap();
        for mode in [ShortcutMode::Abelian, ShortcutMode::Parallelizable] {
            if let Ok(h) = shortcut_hodge(&bp, mode) {
                prop_assert_eq!(&h, &general, "{:?}", mode);
            }
        }
    }
}
