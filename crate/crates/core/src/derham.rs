//! de Rham cohomology of `G/Γ` from the nilshadow complex and its
//! Γ-invariant subcomplex.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::chars::{int_to_q, DeclaredCharacters, LatticeEvaluation, WeightSystem};
use crate::complex::{mask_of, CochainComplex, Dga, Element, Mask};
use crate::error::Result;
use crate::lattice::IntVec;
use crate::lie::{ce_complex, LieAlgebra};
use crate::modification::{modified_algebra, repair_index, subset_sums, SubtorusChoice};
use crate::report::{Check, CheckList};

/// Generators `ω_i = α_i x_i` in eigenbasis order; V slots carry `α = 1`.
pub fn nilshadow_dga(ws: &WeightSystem) -> Result<Dga> {
    let h = &ws.eigen_algebra;
    let f = h.field();
    let dv = ws.dim_v();
    let mut dgen: Vec<Element> = vec![Vec::new(); h.dim()];
    for (j, k, i, c) in h.structure_constants() {
        dgen[i].push(((1 << j) | (1 << k), -&c));
    }
    for (i, d) in dgen.iter_mut().enumerate() {
        for l in 0..dv {
            let a = &ws.weights[i][l];
            if a.is_zero() || l == i {
                continue;
            }
            let term = crate::complex::wedge(&[(1 << l, a.clone())], &[(1 << i, f.one())]);
            d.extend(term);
        }
        *d = collect(std::mem::take(d));
    }
    let names = ws.names.iter().map(|n| format!("{n}*")).collect();
    Dga::new(f, names, dgen)
}

fn collect(e: Element) -> Element {
    let mut acc: std::collections::BTreeMap<Mask, crate::field::FieldElement> = std::collections::BTreeMap::new();
    for (m, c) in e {
        match acc.get_mut(&m) {
            Some(x) => *x = &*x + &c,
            None => {
                acc.insert(m, c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn nilshadow_complex(ws: &WeightSystem) -> Result<CochainComplex> {
    CochainComplex::full(&nilshadow_dga(ws)?)
}

/// Exponent sums `E_I` trivial on Γ, keyed by value.
pub fn trivial_sums(ws: &WeightSystem, lat: &LatticeEvaluation) -> HashMap<IntVec, bool> {
    subset_sums(&ws.lattice.exponents, ws.lattice.rank())
        .into_iter()
        .map(|s| {
            let t = lat.is_trivial(&ws.lattice.declared(&int_to_q(&s)));
            (s, t)
        })
        .collect()
}

/// The span of `α_I x_I` with `α_I|_Γ = 1`.
pub fn a_gamma_subcomplex(ws: &WeightSystem, lat: &LatticeEvaluation) -> Result<CochainComplex> {
    let table = trivial_sums(ws, lat);
    CochainComplex::from_dga(&nilshadow_dga(ws)?, |m| table[&ws.subset_exponent(m)])
}

#[derive(Clone, Debug, Serialize)]
pub struct DerhamReport {
    pub checks: CheckList,
    pub betti_a_gamma: Vec<usize>,
    pub betti_g_s: Vec<usize>,
    pub betti_g: Vec<usize>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair_index: Option<u32>,
}

impl DerhamReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

pub fn is_poincare_symmetric(b: &[usize]) -> bool {
    b.iter().eq(b.iter().rev())
}

pub fn derham_report(
    g: &LieAlgebra,
    ws: &WeightSystem,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
    choice: &SubtorusChoice,
) -> Result<DerhamReport> {
    let mut checks = CheckList::default();
    let ms = modified_algebra(g, ws, decl, choice)?;

    let failing: Vec<usize> = (0..g.dim()).filter(|&i| !lat.is_trivial(&ms.beta_declared[i])).collect();
    let repair = if failing.is_empty() {
        None
    } else {
        let vs: Vec<_> = failing.iter().map(|&i| ms.beta_declared[i].clone()).collect();
        repair_index(&vs, lat, 1000)
    };
    checks.push(Check::new(
        "pi_S_trivial_on_lattice",
        failing.is_empty(),
        match (&failing.first(), repair) {
            (None, _) => String::new(),
            (Some(&i), Some(m)) => {
                format!("beta of {} is not trivial; an index-{m} sublattice repairs it", ws.names[i])
            }
            (Some(&i), None) => format!("beta of {} is not trivial", ws.names[i]),
        },
    ));

    let table = trivial_sums(ws, lat);
    let mut bad: Option<IntVec> = None;
    for (e, &t) in table.iter().collect::<std::collections::BTreeMap<_, _>>() {
        if t && choice.project(&int_to_q(e)) != int_to_q(e) {
            bad = Some(e.clone());
            break;
        }
    }
    checks.push(Check::new(
        "a_gamma_inside_g_s",
        bad.is_none(),
        bad.map(|e| {
            format!(
                "trivial exponent {:?} is moved by the projector",
                e.iter().map(ToString::to_string).collect::<Vec<_>>()
            )
        })
        .unwrap_or_default(),
    ));

    let dga = nilshadow_dga(ws)?;
    let a_gamma = CochainComplex::from_dga(&dga, |m| table[&ws.subset_exponent(m)])?;
    let betti_a_gamma = a_gamma.betti();
    let betti_g_s = ce_complex(&ms.algebra)?.betti();
    let betti_g = ce_complex(g)?.betti();
    checks.push(Check::new(
        "betti_agree",
        betti_a_gamma == betti_g_s,
        if betti_a_gamma == betti_g_s { String::new() } else { format!("{betti_a_gamma:?} vs {betti_g_s:?}") },
    ));
    let verdict = if checks.all_passed() { "PASS" } else { "inconclusive" }.to_string();
    checks.push(Check::new("poincare_duality", is_poincare_symmetric(&betti_a_gamma), ""));
    Ok(DerhamReport { checks, betti_a_gamma, betti_g_s, betti_g, verdict, repair_index: repair })
}

/// Index sets of the admitted monomials of each degree, by generator names.
pub fn admitted_monomials(ws: &WeightSystem, lat: &LatticeEvaluation, degree: usize) -> Vec<BTreeSet<String>> {
    let table = trivial_sums(ws, lat);
    crate::complex::combinations(ws.names.len(), degree)
        .into_iter()
        .filter(|&m| table[&ws.subset_exponent(m)])
        .map(|m| crate::complex::indices(m).into_iter().map(|i| ws.names[i].clone()).collect())
        .collect()
}

#[doc(hidden)]
pub fn mask_for(ws: &WeightSystem, names: &[&str]) -> Mask {
    let idx: Vec<usize> = names.iter().filter_map(|n| ws.names.iter().position(|m| m == n)).collect();
    mask_of(&idx)
}
