//! Subtori of the maximal torus chosen from lattice data, and the
//! S-modified Lie algebra.
//!
//! Exponent vectors are rows; `projector` acts by `E ↦ E·P` and maps the
//! character `χ^E` of `T` to its restriction through `T → S`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chars::{int_to_q, row_times, CharLattice, DeclaredCharacters, LatticeEvaluation, WeightSystem};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::lattice::{clear_denominators, identity, integer_kernel, saturate, unimodular_complement, IntVec};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::rational::{fmt_rational, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubtorusMode {
    Auto,
    Full,
    /// Rows in char-basis coordinates.
    Explicit(Vec<IntVec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusChoice {
    /// `K̄`, the characters of `S`.
    pub trivial_sublattice: Vec<IntVec>,
    pub complement: Vec<IntVec>,
    pub projector: Vec<Vec<Q>>,
    /// `K`: every exponent vector trivial on Γ.
    pub exact_trivial: Vec<IntVec>,
    /// Whether the complement had to be replaced by a conjugation-stable one.
    pub orthogonal_complement: bool,
}

impl SubtorusChoice {
    pub fn rank(&self) -> usize {
        self.trivial_sublattice.len()
    }

    pub fn project(&self, e: &[Q]) -> Vec<Q> {
        if self.projector.is_empty() {
            return Vec::new();
        }
        row_times(e, &self.projector)
    }

    pub fn is_identity(&self) -> bool {
        self.projector
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
    }

    pub fn is_zero(&self) -> bool {
        self.projector.iter().flatten().all(Zero::is_zero)
    }
}

/// Integer vectors `E` with `χ^E` trivial at every generator.
///
/// The modulus and angle parts give rational linear equations; the phase
/// lifts give congruences solved on the resulting kernel.
pub fn exact_trivial_sublattice(lattice: &CharLattice, lat: &LatticeEvaluation) -> Vec<IntVec> {
    let r = lattice.rank();
    if r == 0 {
        return Vec::new();
    }
    let vals: Vec<Vec<crate::character::CharacterValue>> = (0..r)
        .map(|k| {
            let mut e = vec![Q::zero(); r];
            e[k] = Q::one();
            lat.eval(&lattice.declared(&e))
        })
        .collect();
    let gens = lat.generator_names.len();
    let mut equations: Vec<Vec<Q>> = Vec::new();
    for j in 0..gens {
        let mut symbols: BTreeSet<String> = BTreeSet::new();
        for v in &vals {
            symbols.extend(v[j].modulus.terms().map(|(s, _)| format!("m:{s}")));
            symbols.extend(v[j].phase.angle.terms().map(|(s, _)| format!("a:{s}")));
        }
        for s in symbols {
            let row = vals
                .iter()
                .map(|v| {
                    let (kind, name) = s.split_at(2);
                    let src = if kind == "m:" { &v[j].modulus } else { &v[j].phase.angle };
                    src.terms().find(|(t, _)| t.as_str() == name).map_or_else(Q::zero, |(_, c)| c.clone())
                })
                .collect();
            equations.push(row);
        }
    }
    let int_eqs: Vec<IntVec> = equations.iter().map(|e| clear_denominators(e).0).collect();
    let l1 = if int_eqs.is_empty() { identity(r) } else { integer_kernel(&int_eqs, r) };
    if l1.is_empty() {
        return Vec::new();
    }
    // t ∈ Z^s with Σ_a t_a λ_{a,j} ∈ Z for every generator j
    let s = l1.len();
    let lambda: Vec<Vec<Q>> = l1
        .iter()
        .map(|row| {
            let e = int_to_q(row);
            (0..gens).map(|j| vals.iter().zip(&e).map(|(v, c)| &v[j].phase.lift * c).sum()).collect()
        })
        .collect();
    let all: Vec<Q> = lambda.iter().flatten().cloned().collect();
    let den = crate::rational::lcm_denominators(&all);
    let dq = Q::from_integer(den.clone());
    let cong: Vec<IntVec> = (0..gens)
        .map(|j| {
            let mut row: IntVec = lambda.iter().map(|l| (&l[j] * &dq).to_integer()).collect();
            row.extend((0..gens).map(|k| if k == j { den.clone() } else { BigInt::zero() }));
            row
        })
        .collect();
    let ker = if gens == 0 { identity(s) } else { integer_kernel(&cong, s + gens) };
    let t_rows: Vec<IntVec> = ker.iter().map(|row| row[..s].to_vec()).collect();
    let k_rows: Vec<IntVec> =
        t_rows.iter().map(|t| (0..r).map(|c| t.iter().zip(&l1).map(|(ta, la)| ta * &la[c]).sum()).collect()).collect();
    crate::lattice::hnf(&k_rows)
}

/// Distinct subset sums `Σ_{i∈I} E_i`, built incrementally.
pub fn subset_sums(exponents: &[IntVec], r: usize) -> BTreeSet<IntVec> {
    let mut sums: BTreeSet<IntVec> = BTreeSet::new();
    sums.insert(vec![BigInt::zero(); r]);
    for e in exponents {
        let shifted: Vec<IntVec> = sums.iter().map(|s| s.iter().zip(e).map(|(a, b)| a + b).collect()).collect();
        sums.extend(shifted);
    }
    sums
}

fn trivial_subset_sums(lattice: &CharLattice, exponents: &[IntVec], lat: &LatticeEvaluation) -> Vec<IntVec> {
    subset_sums(exponents, lattice.rank())
        .into_iter()
        .filter(|s| s.iter().any(|x| !x.is_zero()) && lat.is_trivial(&lattice.declared(&int_to_q(s))))
        .collect()
}

/// `K̄ ⊂ Z^r` for the given generators, its complement and the projector.
pub fn choose_subtorus_for(
    lattice: &CharLattice,
    exponents: &[IntVec],
    lat: &LatticeEvaluation,
    mode: &SubtorusMode,
) -> Result<SubtorusChoice> {
    let r = lattice.rank();
    let exact_trivial = exact_trivial_sublattice(lattice, lat);
    let kbar = match mode {
        SubtorusMode::Auto => saturate(&trivial_subset_sums(lattice, exponents, lat), r),
        SubtorusMode::Full => identity(r),
        SubtorusMode::Explicit(rows) => {
            if let Some(bad) = rows.iter().find(|row| row.len() != r) {
                return Err(Error::DimensionMismatch(format!(
                    "explicit sublattice row has length {}, the character lattice has rank {r}",
                    bad.len()
                )));
            }
            if let Some(bad) = rows.iter().find(|row| !lat.is_trivial(&lattice.declared(&int_to_q(row)))) {
                let s: Vec<String> = bad.iter().map(ToString::to_string).collect();
                return Err(Error::ExplicitSublatticeNotTrivialOnGamma(format!("({})", s.join(", "))));
            }
            saturate(rows, r)
        }
    };
    complete(lattice, kbar, exact_trivial)
}

fn q_rows(rows: &[IntVec]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| int_to_q(r)).collect()
}

fn in_q_span(rows: &[IntVec], v: &[Q]) -> bool {
    let fq = Field::rationals();
    let r = v.len();
    let mut all = q_rows(rows);
    let base =
        if all.is_empty() { 0 } else { Matrix::from_fn(&fq, all.len(), r, |i, j| fq.from_q(all[i][j].clone())).rank() };
    all.push(v.to_vec());
    Matrix::from_fn(&fq, all.len(), r, |i, j| fq.from_q(all[i][j].clone())).rank() == base
}

fn complete(lattice: &CharLattice, kbar: Vec<IntVec>, exact_trivial: Vec<IntVec>) -> Result<SubtorusChoice> {
    let r = lattice.rank();
    let k = kbar.len();
    let sigma = lattice.sigma_q();
    let stable = |rows: &[IntVec]| rows.iter().all(|c| in_q_span(rows, &row_times(&int_to_q(c), &sigma)));
    if !stable(&kbar) {
        return Err(Error::ConjugationClosureFailure("trivial sublattice is not conjugation-stable".into()));
    }
    let mut complement = unimodular_complement(&kbar, r);
    let mut orthogonal = false;
    if k > 0 && k < r && !stable(&complement) {
        // G-orthogonal complement for the conjugation-invariant form G = I + σσᵀ
        let g: Vec<Vec<Q>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let s: Q = (0..r).map(|t| &sigma[i][t] * &sigma[j][t]).sum();
                        if i == j {
                            s + Q::one()
                        } else {
                            s
                        }
                    })
                    .collect()
            })
            .collect();
        let kg: Vec<IntVec> = q_rows(&kbar).iter().map(|row| clear_denominators(&row_times(row, &g)).0).collect();
        complement = integer_kernel(&kg, r);
        orthogonal = true;
        if !stable(&complement) {
            return Err(Error::Internal("orthogonal complement is not conjugation-stable".into()));
        }
    }
    let projector = projector(&kbar, &complement, r)?;
    Ok(SubtorusChoice {
        trivial_sublattice: kbar,
        complement,
        projector,
        exact_trivial,
        orthogonal_complement: orthogonal,
    })
}

/// Projection onto span `K` along span `C`, row convention.
fn projector(k: &[IntVec], c: &[IntVec], r: usize) -> Result<Vec<Vec<Q>>> {
    let fq = Field::rationals();
    if r == 0 {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<Q>> = q_rows(k).into_iter().chain(q_rows(c)).collect();
    if rows.len() != r {
        return Err(Error::Internal(format!("sublattice and complement have {} rows, expected {r}", rows.len())));
    }
    let m = Matrix::from_fn(&fq, r, r, |i, j| fq.from_q(rows[i][j].clone()));
    let minv = m.inverse().map_err(|_| Error::Internal("sublattice and complement are dependent".into()))?;
    let mut d = Matrix::zero(&fq, r, r);
    for i in 0..k.len() {
        d.set(i, i, fq.one());
    }
    let p = minv.mul(&d).mul(&m);
    Ok((0..r).map(|i| (0..r).map(|j| p.get(i, j).as_rational().expect("rational")).collect()).collect())
}

pub fn choose_subtorus(ws: &WeightSystem, lat: &LatticeEvaluation, mode: &SubtorusMode) -> Result<SubtorusChoice> {
    choose_subtorus_for(&ws.lattice, &ws.lattice.exponents, lat, mode)
}

/// No nonzero subset sum of the weights is trivial on Γ.
pub fn kasuya_condition(ws: &WeightSystem, lat: &LatticeEvaluation) -> bool {
    trivial_subset_sums(&ws.lattice, &ws.lattice.exponents, lat).is_empty()
}

/// The torus part of the Mostow condition: `K̄ = 0` under the automatic choice.
pub fn mostow_torus_check(ws: &WeightSystem, lat: &LatticeEvaluation) -> bool {
    saturate(&trivial_subset_sums(&ws.lattice, &ws.lattice.exponents, lat), ws.lattice.rank()).is_empty()
}

/// Smallest `m ≥ 1` making every `m·v` trivial, searched up to `bound`.
pub fn repair_index(vs: &[Vec<Q>], lat: &LatticeEvaluation, bound: u32) -> Option<u32> {
    (1..=bound).find(|&m| {
        vs.iter().all(|v| lat.is_trivial(&v.iter().map(|x| x * Q::from_integer(BigInt::from(m))).collect::<Vec<_>>()))
    })
}

#[derive(Clone, Debug)]
pub struct ModifiedAlgebra {
    pub algebra: LieAlgebra,
    /// `B_i = E_i·P` per eigenvector.
    pub beta_exponents: Vec<Vec<Q>>,
    /// Declared coordinates of `β_i`.
    pub beta_declared: Vec<Vec<Q>>,
}

/// Brackets `[X,Y] − D(X)Y + D(Y)X` for `D` diagonal in the basis of `h`,
/// `D(e_l)` nonzero only for V slots; `diag[l][i]` is the eigenvalue of
/// `D(e_l)` on `e_i`.
pub fn twisted_brackets(h: &LieAlgebra, diag: &[Vec<FieldElement>]) -> Vec<(usize, usize, usize, FieldElement)> {
    let d = h.dim();
    let v = h.v_indices();
    let mut out = h.structure_constants();
    for j in 0..d {
        for k in j + 1..d {
            if let Some(l) = v.iter().position(|&x| x == j) {
                let c = &diag[l][k];
                if !c.is_zero() {
                    out.push((j, k, k, -c));
                }
            }
            if let Some(l) = v.iter().position(|&x| x == k) {
                let c = &diag[l][j];
                if !c.is_zero() {
                    out.push((j, k, j, c.clone()));
                }
            }
        }
    }
    out
}

pub fn modified_algebra(
    g: &LieAlgebra,
    ws: &WeightSystem,
    decl: &DeclaredCharacters,
    choice: &SubtorusChoice,
) -> Result<ModifiedAlgebra> {
    let f = g.field();
    let dv = ws.dim_v();
    let beta_exponents: Vec<Vec<Q>> = (0..g.dim()).map(|i| choice.project(&ws.exponent(i))).collect();
    let beta_declared: Vec<Vec<Q>> = beta_exponents.iter().map(|b| ws.lattice.declared(b)).collect();
    let functionals: Vec<Vec<FieldElement>> = beta_declared.iter().map(|b| decl.functional(b)).collect();
    let diag: Vec<Vec<FieldElement>> = (0..dv)
        .map(|l| functionals.iter().map(|fi| fi.get(l).cloned().unwrap_or_else(|| f.zero())).collect())
        .collect();
    let h = &ws.eigen_algebra;
    let ht = LieAlgebra::new(f, h.names().to_vec(), &twisted_brackets(h, &diag), (0..dv).collect())?;
    let back = ws.eigenbasis.inverse()?;
    let gs = ht.change_basis(&back, g.names().to_vec())?.with_v(g.v_indices().to_vec())?;
    if !gs.is_real() {
        return Err(Error::Internal("modified structure constants are not real".into()));
    }
    if let Some((a, b, c)) = gs.jacobi_failure() {
        return Err(Error::JacobiFailure(format!(
            "modified bracket fails on ({}, {}, {})",
            gs.names()[a],
            gs.names()[b],
            gs.names()[c]
        )));
    }
    Ok(ModifiedAlgebra { algebra: gs, beta_exponents, beta_declared })
}

/// Summary of a subtorus choice for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SubtorusSummary {
    pub rank_t: usize,
    pub rank_s: usize,
    pub trivial_sublattice: Vec<Vec<String>>,
    pub complement: Vec<Vec<String>>,
    pub projector: Vec<Vec<String>>,
    pub orthogonal_complement: bool,
}

impl SubtorusChoice {
    pub fn summary(&self, rank_t: usize) -> SubtorusSummary {
        let ints = |rows: &[IntVec]| rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        SubtorusSummary {
            rank_t,
            rank_s: self.rank(),
            trivial_sublattice: ints(&self.trivial_sublattice),
            complement: ints(&self.complement),
            projector: self.projector.iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
            orthogonal_complement: self.orthogonal_complement,
        }
    }
}

/// Memoised triviality of integer exponent sums.
pub struct TrivialityCache<'a> {
    lattice: &'a CharLattice,
    lat: &'a LatticeEvaluation,
    memo: HashMap<IntVec, bool>,
}

impl<'a> TrivialityCache<'a> {
    pub fn new(lattice: &'a CharLattice, lat: &'a LatticeEvaluation) -> Self {
        TrivialityCache { lattice, lat, memo: HashMap::new() }
    }

    pub fn is_trivial(&mut self, e: &IntVec) -> bool {
        if let Some(&b) = self.memo.get(e) {
            return b;
        }
        let b = self.lat.is_trivial(&self.lattice.declared(&int_to_q(e)));
        self.memo.insert(e.clone(), b);
        b
    }
}
