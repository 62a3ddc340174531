//! Weight functionals, the character lattice they generate, and lattice
//! evaluation data.
//!
//! Characters of `G/N` are written `exp(f)` for a real-linear functional
//! `f: V → C`. The input declares finitely many such functionals together
//! with their values at lattice generators; every other character must lie
//! in the rational span of the declared ones, and its value at a generator is
//! the corresponding product of declared values.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::character::{cv_is_one, cv_pow, CharacterValue};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::lattice::{clear_denominators, hnf, IntVec};
use crate::lie::{AdSMap, LieAlgebra};
use crate::matrix::Matrix;
use crate::rational::{lcm_denominators, Q};
use crate::weights::joint_weight_decomposition;

fn qfield() -> Field {
    Field::rationals()
}

fn flatten(f: &[FieldElement], width: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(f.len() * width);
    for x in f {
        let c = x.coeffs();
        out.extend((0..width).map(|k| c.get(k).cloned().unwrap_or_else(Q::zero)));
    }
    out
}

/// Rational solution of `Σ_m c_m · cols[m] = target`, if any.
fn solve_rational(cols: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let fq = qfield();
    if cols.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = Matrix::from_fn(&fq, target.len(), cols.len(), |i, j| fq.from_q(cols[j][i].clone()));
    let b: Vec<FieldElement> = target.iter().map(|x| fq.from_q(x.clone())).collect();
    let x = m.solve(&b)?;
    Some(x.iter().map(|e| e.as_rational().expect("rational")).collect())
}

fn rank_rational(rows: &[Vec<Q>], width: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let fq = qfield();
    Matrix::from_fn(&fq, rows.len(), width, |i, j| fq.from_q(rows[i][j].clone())).rank()
}

pub fn add_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_q(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

/// `v · M` for a row vector `v` and rows `m`.
pub fn row_times(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let width = m.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); width];
    for (c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Declared characters: functionals on the V basis, Q-linearly independent.
#[derive(Clone, Debug)]
pub struct DeclaredCharacters {
    field: Field,
    names: Vec<String>,
    /// `functionals[m][l] = f_m(A_l)`.
    functionals: Vec<Vec<FieldElement>>,
    /// Row `m` holds the coordinates of `conj(f_m)`.
    conj: Vec<Vec<Q>>,
    width: usize,
}

impl DeclaredCharacters {
    pub fn new(field: &Field, names: Vec<String>, functionals: Vec<Vec<FieldElement>>, dim_v: usize) -> Result<Self> {
        if names.len() != functionals.len() {
            return Err(Error::DimensionMismatch("character names and functionals".into()));
        }
        if let Some(f) = functionals.iter().find(|f| f.len() != dim_v) {
            return Err(Error::DimensionMismatch(format!(
                "character functional has {} values, V has dimension {dim_v}",
                f.len()
            )));
        }
        let width = if field.has_i() { 2 * field.degree() } else { field.degree() };
        let flat: Vec<Vec<Q>> = functionals.iter().map(|f| flatten(f, width)).collect();
        if rank_rational(&flat, dim_v * width) != flat.len() {
            return Err(Error::InvalidPresentation("declared characters are not Q-linearly independent".into()));
        }
        let mut conj = Vec::with_capacity(functionals.len());
        for (m, f) in functionals.iter().enumerate() {
            let c: Vec<FieldElement> = f.iter().map(FieldElement::conj).collect();
            let coords = solve_rational(&flat, &flatten(&c, width)).ok_or_else(|| {
                Error::CharacterOutsideSpan(format!("the conjugate of {} is not a rational combination", names[m]))
            })?;
            conj.push(coords);
        }
        Ok(DeclaredCharacters { field: field.clone(), names, functionals, conj, width })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn functionals(&self) -> &[Vec<FieldElement>] {
        &self.functionals
    }

    pub fn conj_matrix(&self) -> &[Vec<Q>] {
        &self.conj
    }

    /// Coordinates of `f` (values on the V basis) in the declared characters.
    pub fn coords(&self, f: &[FieldElement]) -> Result<Vec<Q>> {
        let flat: Vec<Vec<Q>> = self.functionals.iter().map(|g| flatten(g, self.width)).collect();
        solve_rational(&flat, &flatten(f, self.width)).ok_or_else(|| {
            let vals: Vec<String> = f.iter().map(ToString::to_string).collect();
            Error::CharacterOutsideSpan(format!(
                "functional ({}) is not a rational combination of the declared characters",
                vals.join(", ")
            ))
        })
    }

    /// Values on the V basis of `Σ c_m f_m`.
    pub fn functional(&self, c: &[Q]) -> Vec<FieldElement> {
        let dim_v = self.functionals.first().map_or(0, Vec::len);
        let mut out = vec![self.field.zero(); dim_v];
        for (cm, f) in c.iter().zip(&self.functionals) {
            if cm.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(f) {
                *o = &*o + &x.scale(cm);
            }
        }
        out
    }

    /// Coordinates of the conjugate character.
    pub fn conj_coords(&self, c: &[Q]) -> Vec<Q> {
        row_times(c, &self.conj)
    }
}

/// Values of the declared characters at the lattice generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEvaluation {
    pub generator_names: Vec<String>,
    /// `values[j][m] = χ_m(g_j)`.
    pub values: Vec<Vec<CharacterValue>>,
}

impl LatticeEvaluation {
    /// Value of `Π χ_m^{c_m}` at every generator.
    pub fn eval(&self, c: &[Q]) -> Vec<CharacterValue> {
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .zip(c)
                    .filter(|(_, e)| !e.is_zero())
                    .fold(CharacterValue::one(), |acc, (v, e)| acc.mul(&cv_pow(v, e)))
            })
            .collect()
    }

    pub fn is_trivial(&self, c: &[Q]) -> bool {
        self.eval(c).iter().all(cv_is_one)
    }

    /// Each declared conjugate must take the conjugate value: equal moduli,
    /// opposite angles, lifts opposite modulo Z.
    pub fn conjugation_failure(&self, decl: &DeclaredCharacters) -> Option<(usize, usize)> {
        for (j, row) in self.values.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                let w = &self.eval(&decl.conj_matrix()[m])[j];
                let lift_ok = (&v.phase.lift + &w.phase.lift).is_integer();
                let angle_ok = v.phase.angle.add(&w.phase.angle).is_zero();
                if v.modulus != w.modulus || !lift_ok || !angle_ok {
                    return Some((j, m));
                }
            }
        }
        None
    }
}

/// Sublattice of Z^r generated by a finite family, with a Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharLattice {
    /// Basis characters as rows of declared coordinates.
    pub basis: Vec<Vec<Q>>,
    /// Integer coordinates of each generating vector in `basis`.
    pub exponents: Vec<IntVec>,
    /// Conjugation on basis coordinates, row convention `E ↦ E·σ`.
    pub sigma: Vec<IntVec>,
    declared_len: usize,
}

impl CharLattice {
    pub fn new(gens: &[Vec<Q>], decl: &DeclaredCharacters) -> Result<CharLattice> {
        let width = decl.len();
        let all: Vec<Q> = gens.iter().flatten().cloned().collect();
        let l = lcm_denominators(&all);
        let lq = Q::from_integer(l.clone());
        let ints: Vec<IntVec> = gens.iter().map(|g| clear_denominators(&scale_q(g, &lq)).0).collect();
        let h = hnf(&ints);
        let basis: Vec<Vec<Q>> =
            h.iter().map(|row| row.iter().map(|x| Q::from_integer(x.clone()) / &lq).collect()).collect();
        let exponents = gens.iter().map(|g| Self::int_coords(&basis, g, width)).collect::<Result<Vec<_>>>()?;
        let sigma = basis
            .iter()
            .map(|b| Self::int_coords(&basis, &decl.conj_coords(b), width))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::ConjugationClosureFailure("weight lattice is not closed under conjugation".into()))?;
        Ok(CharLattice { basis, exponents, sigma, declared_len: width })
    }

    fn int_coords(basis: &[Vec<Q>], v: &[Q], width: usize) -> Result<IntVec> {
        let cols: Vec<Vec<Q>> = basis.to_vec();
        let target: Vec<Q> = v.iter().take(width).cloned().collect();
        let c =
            solve_rational(&cols, &target).ok_or_else(|| Error::Internal("vector outside its own lattice".into()))?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::Internal("non-integral lattice coordinates".into()));
        }
        Ok(c.iter().map(Q::to_integer).collect())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates in the basis of a declared-coordinate vector.
    pub fn coords(&self, v: &[Q]) -> Result<IntVec> {
        Self::int_coords(&self.basis, v, self.declared_len)
            .map_err(|_| Error::InvalidPresentation("character is not in the weight lattice".into()))
    }

    /// Declared coordinates of `χ^E` for a (possibly rational) exponent `E`.
    pub fn declared(&self, e: &[Q]) -> Vec<Q> {
        if self.basis.is_empty() {
            return vec![Q::zero(); self.declared_len];
        }
        row_times(e, &self.basis)
    }

    pub fn sigma_q(&self) -> Vec<Vec<Q>> {
        self.sigma.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
    }
}

pub fn int_to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// `true` iff `χ^E` is trivial at every generator.
pub fn restrict_trivial(e: &[Q], lattice: &CharLattice, lat: &LatticeEvaluation) -> bool {
    lat.is_trivial(&lattice.declared(e))
}

/// Joint eigenbasis of `ad_s` with weights and exponents.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    /// Columns: the V basis vectors, then eigenvectors spanning `n ⊗ C`.
    pub eigenbasis: Matrix,
    pub names: Vec<String>,
    /// `weights[i][l] = a_i(A_l)`.
    pub weights: Vec<Vec<FieldElement>>,
    /// Declared coordinates of each weight.
    pub declared: Vec<Vec<Q>>,
    pub lattice: CharLattice,
    /// `conj(column i) = column conj[i]`.
    pub conj: Vec<usize>,
    /// The algebra rewritten in the eigenbasis; V occupies the first slots.
    pub eigen_algebra: LieAlgebra,
}

impl WeightSystem {
    pub fn dim_v(&self) -> usize {
        self.eigen_algebra.v_indices().len()
    }

    pub fn exponent(&self, i: usize) -> Vec<Q> {
        int_to_q(&self.lattice.exponents[i])
    }

    /// `Σ_{i∈I} E_i` for the index set encoded in `mask`.
    pub fn subset_exponent(&self, mask: u32) -> IntVec {
        let r = self.lattice.rank();
        let mut out = vec![BigInt::zero(); r];
        for (i, e) in self.lattice.exponents.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (o, x) in out.iter_mut().zip(e) {
                    *o += x;
                }
            }
        }
        out
    }

    /// Completely solvable: every weight is real.
    pub fn completely_solvable(&self) -> bool {
        self.weights.iter().flatten().all(FieldElement::is_real)
    }
}

/// Builds the joint eigenbasis from a family of commuting semisimple
/// derivations given on all of `g` (zero on V) and indexed by V.
pub fn build_weight_system(g: &LieAlgebra, ads: &AdSMap, decl: &DeclaredCharacters) -> Result<WeightSystem> {
    let f = g.field();
    let d = g.dim();
    let v = g.v_indices().to_vec();
    let n = g.n_indices().to_vec();
    let family: Vec<Matrix> = ads.matrices.iter().map(|m| m.select(&n, &n)).collect();
    let spaces = joint_weight_decomposition(f, n.len(), &family)?;
    let mut columns: Vec<Vec<FieldElement>> = v.iter().map(|&i| g.unit(i)).collect();
    let mut weights: Vec<Vec<FieldElement>> = v.iter().map(|_| vec![f.zero(); v.len()]).collect();
    let mut names: Vec<String> = v.iter().map(|&i| g.names()[i].clone()).collect();
    for sp in &spaces {
        for b in &sp.basis {
            let mut col = vec![f.zero(); d];
            for (k, &ni) in n.iter().enumerate() {
                col[ni] = b[k].clone();
            }
            columns.push(col);
            weights.push(if sp.weight.is_empty() { vec![f.zero(); v.len()] } else { sp.weight.clone() });
            names.push(format!("X{}", names.len() - v.len() + 1));
        }
    }
    let eigenbasis = Matrix::from_columns(f, d, &columns);
    let declared = weights.iter().map(|w| decl.coords(w)).collect::<Result<Vec<_>>>()?;
    let lattice = CharLattice::new(&declared, decl)?;
    let mut eigen_algebra = g.change_basis(&eigenbasis, names.clone())?;
    eigen_algebra = eigen_algebra.with_v((0..v.len()).collect())?;
    for (j, k, i, _) in eigen_algebra.structure_constants() {
        let lhs = &lattice.exponents[i];
        let rhs: IntVec = lattice.exponents[j].iter().zip(&lattice.exponents[k]).map(|(a, b)| a + b).collect();
        if *lhs != rhs {
            return Err(Error::WeightAdditivityFailure(format!(
                "[{}, {}] has a component on {} but the weights do not add",
                names[j], names[k], names[i]
            )));
        }
    }
    let conj = conjugation_permutation(&columns)?;
    Ok(WeightSystem { eigenbasis, names, weights, declared, lattice, conj, eigen_algebra })
}

/// Permutation `σ` with `conj(v_i) = v_{σ(i)}`.
pub fn conjugation_permutation(columns: &[Vec<FieldElement>]) -> Result<Vec<usize>> {
    columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let cc: Vec<FieldElement> = c.iter().map(FieldElement::conj).collect();
            columns.iter().position(|x| *x == cc).ok_or_else(|| {
                Error::ConjugationClosureFailure(format!("conjugate of eigenvector {i} is not in the eigenbasis"))
            })
        })
        .collect()
}

/// `exp(Σ p_j z_j + q_j z̄_j)` in complex coordinates `z_j` of the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexWeight {
    pub p: Vec<FieldElement>,
    pub q: Vec<FieldElement>,
}

impl ComplexWeight {
    pub fn zero(field: &Field, n: usize) -> Self {
        ComplexWeight { p: vec![field.zero(); n], q: vec![field.zero(); n] }
    }

    pub fn is_trivial(&self) -> bool {
        self.p.iter().chain(&self.q).all(FieldElement::is_zero)
    }

    pub fn conj(&self) -> ComplexWeight {
        ComplexWeight {
            p: self.q.iter().map(FieldElement::conj).collect(),
            q: self.p.iter().map(FieldElement::conj).collect(),
        }
    }

    pub fn add(&self, o: &ComplexWeight) -> ComplexWeight {
        ComplexWeight {
            p: self.p.iter().zip(&o.p).map(|(a, b)| a + b).collect(),
            q: self.q.iter().zip(&o.q).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> ComplexWeight {
        ComplexWeight { p: self.p.iter().map(|x| -x).collect(), q: self.q.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &ComplexWeight) -> ComplexWeight {
        self.add(&o.neg())
    }

    /// `|exp(f)| ≡ 1`: the real part `f + f̄` vanishes.
    pub fn is_unitary(&self) -> bool {
        self.add(&self.conj()).is_trivial()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.q.iter().all(FieldElement::is_zero)
    }
}

/// Unique unitary `β`, `γ` with `α β⁻¹` and `ᾱ γ⁻¹` holomorphic.
pub fn unitary_parts(w: &ComplexWeight) -> (ComplexWeight, ComplexWeight) {
    let beta = ComplexWeight { p: w.q.iter().map(|x| -&x.conj()).collect(), q: w.q.clone() };
    let gamma = ComplexWeight { p: w.p.iter().map(|x| -x).collect(), q: w.p.iter().map(FieldElement::conj).collect() };
    debug_assert!(beta.is_unitary() && gamma.is_unitary());
    debug_assert!(w.sub(&beta).is_holomorphic() && w.conj().sub(&gamma).is_holomorphic());
    (beta, gamma)
}

/// Holomorphic `δ` with `δ̄ / δ = u`.
pub fn solve_delta(u: &ComplexWeight) -> Result<ComplexWeight> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary(format!("{u:?}")));
    }
    let field = u.p.first().map(|x| x.field().clone());
    let delta =
        ComplexWeight { p: u.p.iter().map(|x| -x).collect(), q: u.q.iter().map(|x| x.field().zero()).collect() };
    if delta.conj().sub(&delta) != *u {
        return Err(Error::Internal(format!("δ recomposition failed over {field:?}")));
    }
    Ok(delta)
}
