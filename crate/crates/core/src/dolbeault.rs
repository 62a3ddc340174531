//! Invariant complex structures, the twisted bigraded complex `B_Γ` and the
//! modified pair `(ğ, J̆)`.
//!
//! Frames are ordered `[X_1..X_a, Y_1..Y_m, X̄_1..X̄_a, Ȳ_1..Ȳ_m]`: the first
//! half spans `g^{1,0}` and the `X` span `V ⊗ C`. A character of the base
//! `G/N` is stored as a [`ComplexWeight`] in the complex coordinates dual to
//! the `X_j`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::chars::{solve_delta, unitary_parts, CharLattice, ComplexWeight, DeclaredCharacters, LatticeEvaluation};
use crate::complex::{indices, wedge, BigradedComplex, Dga, Element, Mask};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::jordan::jordan_chevalley;
use crate::lie::{span, AdSMap, LieAlgebra};
use crate::matrix::Matrix;
use crate::modification::{choose_subtorus_for, twisted_brackets, SubtorusChoice, SubtorusMode};
use crate::rational::Q;
use crate::report::{Check, CheckList};
use crate::weights::joint_weight_decomposition;

/// `J` as a matrix acting on columns: column `k` is `J e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStructure {
    pub j: Matrix,
}

impl ComplexStructure {
    pub fn new(g: &LieAlgebra, j: Matrix) -> Result<Self> {
        let d = g.dim();
        if j.rows() != d || j.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "J is {}x{}, the algebra has dimension {d}",
                j.rows(),
                j.cols()
            )));
        }
        if (0..d).any(|r| (0..d).any(|c| !j.get(r, c).is_real())) {
            return Err(Error::InvalidPresentation("J must have real entries".into()));
        }
        Ok(ComplexStructure { j })
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.j.mul_vec(v)
    }

    pub fn squares_to_minus_one(&self) -> bool {
        let f = self.j.field();
        self.j.mul(&self.j) == Matrix::identity(f, self.j.rows()).scale(&f.from_int(-1))
    }

    /// `J(span e_idx) ⊆ span e_idx`.
    pub fn preserves(&self, idx: &[usize]) -> bool {
        idx.iter().all(|&c| (0..self.j.rows()).all(|r| idx.contains(&r) || self.j.get(r, c).is_zero()))
    }

    /// `J|_n`, valid when `n` is preserved.
    pub fn restrict(&self, idx: &[usize]) -> Matrix {
        self.j.select(idx, idx)
    }
}

/// First basis pair on which the Nijenhuis tensor is nonzero.
pub fn nijenhuis_failure(g: &LieAlgebra, j: &ComplexStructure) -> Option<(usize, usize)> {
    let d = g.dim();
    for a in 0..d {
        for b in a + 1..d {
            let x = g.unit(a);
            let y = g.unit(b);
            let jx = j.apply(&x);
            let jy = j.apply(&y);
            let t1 = g.bracket(&jx, &jy);
            let t2 = g.bracket(&x, &y);
            let t3 = j.apply(&g.bracket(&jx, &y));
            let t4 = j.apply(&g.bracket(&x, &jy));
            if (0..d).any(|k| !(&(&(&t1[k] - &t2[k]) - &t3[k]) - &t4[k]).is_zero()) {
                return Some((a, b));
            }
        }
    }
    None
}

/// `[JX, JY] = [X, Y]` for all `X, Y`.
pub fn is_abelian_structure(g: &LieAlgebra, j: &ComplexStructure) -> bool {
    let d = g.dim();
    (0..d).all(|a| {
        (a + 1..d).all(|b| {
            let (x, y) = (g.unit(a), g.unit(b));
            g.bracket(&j.apply(&x), &j.apply(&y)) == g.bracket(&x, &y)
        })
    })
}

/// `ad_X ∘ J = J ∘ ad_X` for every `X`: `g` is a complex Lie algebra.
pub fn is_bi_invariant(g: &LieAlgebra, j: &ComplexStructure) -> bool {
    (0..g.dim()).all(|a| g.ad(a).commutes_with(&j.j))
}

pub fn validate_complex_structure(g: &LieAlgebra, j: &ComplexStructure, ads: Option<&AdSMap>) -> CheckList {
    let mut out = CheckList::default();
    out.push(Check::new("j_squared", j.squares_to_minus_one(), ""));
    let nij = nijenhuis_failure(g, j);
    out.push(Check::new(
        "nijenhuis",
        nij.is_none(),
        nij.map(|(a, b)| format!("N({}, {}) ≠ 0", g.names()[a], g.names()[b])).unwrap_or_default(),
    ));
    out.push(Check::new("preserves_n", j.preserves(g.n_indices()), ""));
    out.push(Check::new("abelian", is_abelian_structure(g, j), ""));
    if let Some(ads) = ads {
        let bad = ads.matrices.iter().position(|m| !m.commutes_with(&j.j));
        out.push(Check::new(
            "ads_commuting",
            bad.is_none(),
            bad.map(|k| format!("(ad {})_s", g.names()[g.v_indices()[k]])).unwrap_or_default(),
        ));
    }
    out
}

/// Integrability and `J² = −1`, the checks a complex structure must pass.
pub fn structure_is_valid(c: &CheckList) -> bool {
    c.passed("j_squared") && c.passed("nijenhuis")
}

/// Basis of the subalgebra generated by `V`.
pub fn v_generated_subalgebra(g: &LieAlgebra) -> Vec<Vec<FieldElement>> {
    let f = g.field();
    let mut basis = span(f, g.dim(), &g.v_indices().iter().map(|&i| g.unit(i)).collect::<Vec<_>>());
    loop {
        let mut all = basis.clone();
        for a in &basis {
            for b in &basis {
                all.push(g.bracket(a, b));
            }
        }
        let next = span(f, g.dim(), &all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MostowCheck {
    pub holds: bool,
    pub detail: String,
}

/// Infinitesimal holomorphic Mostow condition: `J|_n` commutes with every
/// `ad_s|_n` and with `ad_X|_n` for `X` in the subalgebra generated by `V`.
pub fn holomorphic_mostow_check(g: &LieAlgebra, ads: &AdSMap, j: &ComplexStructure) -> MostowCheck {
    let n = g.n_indices();
    if !j.preserves(n) {
        return MostowCheck { holds: false, detail: "J does not preserve n".into() };
    }
    let jn = j.restrict(n);
    for (k, m) in ads.matrices.iter().enumerate() {
        if !m.select(n, n).commutes_with(&jn) {
            return MostowCheck {
                holds: false,
                detail: format!("(ad {})_s does not commute with J on n", g.names()[g.v_indices()[k]]),
            };
        }
    }
    for x in v_generated_subalgebra(g) {
        if !g.ad_vec(&x).select(n, n).commutes_with(&jn) {
            return MostowCheck {
                holds: false,
                detail: "ad of the V-generated subalgebra does not commute with J on n".into(),
            };
        }
    }
    MostowCheck { holds: true, detail: "checked ad_s and ad of the V-generated subalgebra on n".into() }
}

fn conj_vec(v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().map(FieldElement::conj).collect()
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::HypothesisFailure(msg.into())
}

/// Complex coordinates on `V ⊗ C` dual to the `X_j`.
#[derive(Clone, Debug)]
pub struct BaseCoords {
    /// `X_j` in V-slot coordinates.
    pub x: Vec<Vec<FieldElement>>,
    /// `z[l][j] = z_j(A_l)`.
    pub z: Vec<Vec<FieldElement>>,
}

impl BaseCoords {
    pub fn weight_of(&self, f: &[FieldElement]) -> ComplexWeight {
        let field = f.first().map(|x| x.field().clone());
        let zero = || field.as_ref().map(Field::zero).expect("nonempty functional");
        let p = self.x.iter().map(|xj| xj.iter().zip(f).fold(zero(), |s, (a, b)| &s + &(a * b))).collect();
        let q = self.x.iter().map(|xj| xj.iter().zip(f).fold(zero(), |s, (a, b)| &s + &(&a.conj() * b))).collect();
        ComplexWeight { p, q }
    }

    pub fn functional_of(&self, w: &ComplexWeight, field: &Field) -> Vec<FieldElement> {
        self.z
            .iter()
            .map(|zl| {
                zl.iter().enumerate().fold(field.zero(), |s, (j, z)| &(&s + &(&w.p[j] * z)) + &(&w.q[j] * &z.conj()))
            })
            .collect()
    }
}

/// A Dolbeault frame of `g ⊗ C` and its structure constants.
#[derive(Clone, Debug)]
pub struct DolbeaultFrame {
    pub columns: Vec<Vec<FieldElement>>,
    pub names: Vec<String>,
    pub nx: usize,
    pub ny: usize,
    pub base: BaseCoords,
    /// Weight of each frame vector under the torus action.
    pub weights: Vec<ComplexWeight>,
    pub algebra: LieAlgebra,
}

impl DolbeaultFrame {
    pub fn half(&self) -> usize {
        self.nx + self.ny
    }

    pub fn len(&self) -> usize {
        2 * self.half()
    }

    pub fn is_empty(&self) -> bool {
        self.nx + self.ny == 0
    }

    /// `conj(frame k) = frame sigma(k)`.
    pub fn sigma(&self, k: usize) -> usize {
        let h = self.half();
        if k < h {
            k + h
        } else {
            k - h
        }
    }

    pub fn is_base_slot(&self, k: usize) -> bool {
        let h = self.half();
        k < self.nx || (h..h + self.nx).contains(&k)
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|k| if k < self.half() { (1, 0) } else { (0, 1) }).collect()
    }

    pub fn form_names(&self) -> Vec<String> {
        self.names.iter().map(|n| n.to_lowercase()).collect()
    }

    pub fn base_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.is_base_slot(k)).collect()
    }
}

fn frame_names(nx: usize, ny: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=nx).map(|j| format!("X{j}")).collect();
    names.extend((1..=ny).map(|j| format!("Y{j}")));
    names.extend((1..=nx).map(|j| format!("Xb{j}")));
    names.extend((1..=ny).map(|j| format!("Yb{j}")));
    names
}

/// `X_j = (v − iJv)/2` over a greedy real basis `v, Jv` of the J-stable `V`.
fn base_frame(g: &LieAlgebra, j: &ComplexStructure) -> Result<Vec<Vec<FieldElement>>> {
    let f = g.field();
    let v = g.v_indices();
    if !j.preserves(v) {
        return Err(hypothesis("J does not preserve V"));
    }
    if !v.len().is_multiple_of(2) {
        return Err(hypothesis("V has odd dimension"));
    }
    let i = f.i()?;
    let half = f.from_q(Q::new(1.into(), 2.into()));
    let mut real: Vec<Vec<FieldElement>> = Vec::new();
    let mut out = Vec::new();
    for &a in v {
        let e = g.unit(a);
        let mut trial = real.clone();
        trial.push(e.clone());
        trial.push(j.apply(&e));
        if span(f, g.dim(), &trial).len() == trial.len() {
            let je = j.apply(&e);
            out.push(e.iter().zip(&je).map(|(x, y)| &half * &(x - &(&i * y))).collect());
            real = trial;
        }
    }
    Ok(out)
}

/// Joint eigenframe of a commuting family on `n^{1,0} = ker(J|_n − i)`.
fn fiber_frame(
    g: &LieAlgebra,
    family: &[Matrix],
    j: &ComplexStructure,
) -> Result<(Vec<Vec<FieldElement>>, Vec<Vec<FieldElement>>)> {
    let f = g.field();
    let n = g.n_indices();
    if !j.preserves(n) {
        return Err(hypothesis("J does not preserve n"));
    }
    let i = f.i()?;
    let jn = j.restrict(n);
    let shifted = jn.sub(&Matrix::identity(f, n.len()).scale(&i));
    let b = shifted.kernel();
    if 2 * b.len() != n.len() {
        return Err(Error::Internal("n^{1,0} has the wrong dimension".into()));
    }
    let bm = Matrix::from_columns(f, n.len(), &b);
    let mut restricted = Vec::with_capacity(family.len());
    for (k, m) in family.iter().enumerate() {
        let mn = m.select(n, n);
        let mut cols = Vec::with_capacity(b.len());
        for col in &b {
            let image = mn.mul_vec(col);
            cols.push(bm.solve(&image).ok_or_else(|| {
                hypothesis(format!("torus action {k} does not preserve n^(1,0); J does not commute with it"))
            })?);
        }
        restricted.push(Matrix::from_columns(f, b.len(), &cols));
    }
    let spaces = joint_weight_decomposition(f, b.len(), &restricted)?;
    let mut ys = Vec::new();
    let mut lambdas = Vec::new();
    for sp in spaces {
        for coords in &sp.basis {
            let inner = bm.mul_vec(coords);
            let mut full = vec![f.zero(); g.dim()];
            for (k, &ni) in n.iter().enumerate() {
                full[ni] = inner[k].clone();
            }
            ys.push(full);
            lambdas.push(if sp.weight.is_empty() { vec![f.zero(); family.len()] } else { sp.weight.clone() });
        }
    }
    Ok((ys, lambdas))
}

/// The Dolbeault frame whose `Y_i` diagonalise the given torus action.
pub fn dolbeault_frame(g: &LieAlgebra, family: &AdSMap, j: &ComplexStructure) -> Result<DolbeaultFrame> {
    let f = g.field();
    let v = g.v_indices();
    let xs = base_frame(g, j)?;
    let (ys, lambdas) = fiber_frame(g, &family.matrices, j)?;
    let (nx, ny) = (xs.len(), ys.len());
    let x_local: Vec<Vec<FieldElement>> = xs.iter().map(|x| v.iter().map(|&a| x[a].clone()).collect()).collect();
    let vc: Vec<Vec<FieldElement>> = x_local.iter().cloned().chain(x_local.iter().map(|x| conj_vec(x))).collect();
    let z = if v.is_empty() {
        Vec::new()
    } else {
        let inv = Matrix::from_columns(f, v.len(), &vc).inverse()?;
        (0..v.len()).map(|l| (0..nx).map(|jj| inv.get(jj, l).clone()).collect()).collect()
    };
    let base = BaseCoords { x: x_local, z };
    let mut columns: Vec<Vec<FieldElement>> = xs.clone();
    columns.extend(ys.iter().cloned());
    columns.extend(xs.iter().map(|x| conj_vec(x)));
    columns.extend(ys.iter().map(|y| conj_vec(y)));
    let names = frame_names(nx, ny);
    let p = Matrix::from_columns(f, g.dim(), &columns);
    let mut weights: Vec<ComplexWeight> = vec![ComplexWeight::zero(f, nx); nx];
    let yw: Vec<ComplexWeight> = lambdas.iter().map(|l| base.weight_of(l)).collect();
    weights.extend(yw.iter().cloned());
    weights.extend(vec![ComplexWeight::zero(f, nx); nx]);
    weights.extend(yw.iter().map(ComplexWeight::conj));
    let v_slots: Vec<usize> = (0..nx).chain(nx + ny..2 * nx + ny).collect();
    let algebra = g.change_basis(&p, names.clone())?.with_v(v_slots)?;
    Ok(DolbeaultFrame { columns, names, nx, ny, base, weights, algebra })
}

/// `dη_w = Σ_j (τ_w(X_j) x_j + τ_w(X̄_j) x̄_j) ∧ η_w − Σ c^w_{ab} η_a ∧ η_b`.
pub fn twisted_dga(frame: &DolbeaultFrame, algebra: &LieAlgebra, twists: &[ComplexWeight]) -> Result<Dga> {
    let f = algebra.field();
    let (nx, h) = (frame.nx, frame.half());
    let mut dgen: Vec<Element> = vec![Vec::new(); frame.len()];
    for (a, b, w, c) in algebra.structure_constants() {
        if twists[w] != twists[a].add(&twists[b]) {
            return Err(Error::Internal(format!(
                "twists are not additive on [{}, {}] → {}",
                frame.names[a], frame.names[b], frame.names[w]
            )));
        }
        dgen[w].push(((1 << a) | (1 << b), -&c));
    }
    for (w, d) in dgen.iter_mut().enumerate() {
        for jj in 0..nx {
            for (slot, coeff) in [(jj, &twists[w].p[jj]), (h + jj, &twists[w].q[jj])] {
                if !coeff.is_zero() && slot != w {
                    d.extend(wedge(&[(1 << slot, coeff.clone())], &[(1 << w, f.one())]));
                }
            }
        }
        let mut acc: BTreeMap<Mask, FieldElement> = BTreeMap::new();
        for (m, c) in d.drain(..) {
            let e = acc.entry(m).or_insert_with(|| f.zero());
            *e = &*e + &c;
        }
        *d = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    Dga::new(f, frame.form_names(), dgen)
}

/// Declared coordinates of a base character.
pub fn declared_of(w: &ComplexWeight, frame: &DolbeaultFrame, decl: &DeclaredCharacters) -> Result<Vec<Q>> {
    if frame.base.z.is_empty() {
        return Ok(vec![Q::from_integer(0.into()); decl.len()]);
    }
    decl.coords(&frame.base.functional_of(w, decl.field()))
}

/// Rational vectors reachable as subset sums.
pub fn q_subset_sums(vs: &[Vec<Q>], r: usize) -> BTreeSet<Vec<Q>> {
    let mut sums: BTreeSet<Vec<Q>> = BTreeSet::new();
    sums.insert(vec![Q::from_integer(0.into()); r]);
    for e in vs {
        let shifted: Vec<Vec<Q>> = sums.iter().map(|s| s.iter().zip(e).map(|(a, b)| a + b).collect()).collect();
        sums.extend(shifted);
    }
    sums
}

/// Monomial admission `(Π τ)|_Γ = 1`, keyed by the summed declared coordinates.
pub struct Admission {
    coords: Vec<Vec<Q>>,
    table: HashMap<Vec<Q>, bool>,
    width: usize,
}

impl Admission {
    pub fn new(coords: Vec<Vec<Q>>, lat: &LatticeEvaluation, width: usize) -> Self {
        let table = q_subset_sums(&coords, width).into_iter().map(|s| {
            let t = lat.is_trivial(&s);
            (s, t)
        });
        Admission { table: table.collect(), coords, width }
    }

    pub fn sum(&self, m: Mask) -> Vec<Q> {
        let mut out = vec![Q::from_integer(0.into()); self.width];
        for k in indices(m) {
            for (o, x) in out.iter_mut().zip(&self.coords[k]) {
                *o += x;
            }
        }
        out
    }

    pub fn admits(&self, m: Mask) -> bool {
        self.table[&self.sum(m)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Dolbb,
    Split,
    BreveGeneral,
    BreveAbelian,
    BreveParallelizable,
}

impl Pipeline {
    pub fn label(self) -> &'static str {
        match self {
            Pipeline::Dolbb => "dolbb",
            Pipeline::Split => "split",
            Pipeline::BreveGeneral => "breve",
            Pipeline::BreveAbelian => "breve-abelian",
            Pipeline::BreveParallelizable => "breve-parallelizable",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BGamma {
    pub frame: DolbeaultFrame,
    pub twists: Vec<ComplexWeight>,
    pub twist_declared: Vec<Vec<Q>>,
    pub complex: BigradedComplex,
    pub pipeline: Pipeline,
    pub assumptions: Vec<String>,
}

impl BGamma {
    pub fn hodge(&self) -> Vec<Vec<usize>> {
        hodge_numbers(&self.complex)
    }
}

pub fn hodge_numbers(b: &BigradedComplex) -> Vec<Vec<usize>> {
    b.hodge()
}

/// `β(weight)` per frame vector; conjugate vectors get `γ` this way.
pub fn frame_twists(frame: &DolbeaultFrame) -> Vec<ComplexWeight> {
    frame.weights.iter().map(|w| unitary_parts(w).0).collect()
}

fn nilmanifold_assumption(g: &LieAlgebra, j: &ComplexStructure) -> String {
    let n = g.n_indices();
    let nalg = restrict_algebra(g, n);
    let jn = ComplexStructure { j: j.restrict(n) };
    if nalg.as_ref().is_some_and(|a| is_abelian_structure(a, &jn)) {
        "Dolbeault cohomology of the nilmanifold fibre is invariant (automatic: J is abelian on n)".into()
    } else {
        "Dolbeault cohomology of the nilmanifold fibre is assumed to be computed by invariant forms".into()
    }
}

/// The subalgebra on the basis slots `idx`, when closed.
pub fn restrict_algebra(g: &LieAlgebra, idx: &[usize]) -> Option<LieAlgebra> {
    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut out = Vec::new();
    for (a, b, c, x) in g.structure_constants() {
        match (pos.get(&a), pos.get(&b)) {
            (Some(&pa), Some(&pb)) => out.push((pa, pb, *pos.get(&c)?, x)),
            _ => continue,
        }
    }
    let names = idx.iter().map(|&i| g.names()[i].clone()).collect();
    LieAlgebra::new(g.field(), names, &out, Vec::new()).ok()
}

fn build_with(
    g: &LieAlgebra,
    family: &AdSMap,
    j: &ComplexStructure,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
    pipeline: Pipeline,
    mut assumptions: Vec<String>,
) -> Result<BGamma> {
    let frame = dolbeault_frame(g, family, j)?;
    let twists = frame_twists(&frame);
    let twist_declared = twists.iter().map(|t| declared_of(t, &frame, decl)).collect::<Result<Vec<_>>>()?;
    let dga = twisted_dga(&frame, &frame.algebra, &twists)?;
    let adm = Admission::new(twist_declared.clone(), lat, decl.len());
    let complex = BigradedComplex::from_dga(&dga, frame.bidegrees(), |m| adm.admits(m))?;
    assumptions.push(nilmanifold_assumption(g, j));
    Ok(BGamma { frame, twists, twist_declared, complex, pipeline, assumptions })
}

/// The complex of the holomorphic-Mostow theorem, driven by `ad_s`.
pub fn build_b_gamma(
    g: &LieAlgebra,
    ads: &AdSMap,
    j: &ComplexStructure,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
) -> Result<BGamma> {
    if !j.preserves(g.n_indices()) {
        return Err(hypothesis("J does not preserve n"));
    }
    if let Some(k) = ads.matrices.iter().position(|m| !m.commutes_with(&j.j)) {
        return Err(hypothesis(format!("(ad {})_s does not commute with J", g.names()[g.v_indices()[k]])));
    }
    let mostow = holomorphic_mostow_check(g, ads, j);
    if !mostow.holds {
        return Err(hypothesis(format!("holomorphic Mostow condition fails: {}", mostow.detail)));
    }
    build_with(g, ads, j, decl, lat, Pipeline::Dolbb, vec![format!("holomorphic Mostow fibration: {}", mostow.detail)])
}

/// Semisimple parts of `ad_A|_n` for `A ∈ V`, extended by zero on `V`.
pub fn split_action(g: &LieAlgebra) -> Result<AdSMap> {
    let v = g.v_indices();
    let n = g.n_indices();
    for (x, &a) in v.iter().enumerate() {
        for &b in &v[x + 1..] {
            if g.bracket_basis(a, b).iter().any(|(_, c)| !c.is_zero()) {
                return Err(hypothesis(format!(
                    "V is not an abelian subalgebra: [{}, {}] ≠ 0",
                    g.names()[a],
                    g.names()[b]
                )));
            }
        }
    }
    if !g.n_is_ideal() {
        return Err(hypothesis("the complement of V is not an ideal"));
    }
    let f = g.field();
    let mut matrices = Vec::with_capacity(v.len());
    for &a in v {
        let s = jordan_chevalley(&g.ad(a).select(n, n))?.s;
        let mut full = Matrix::zero(f, g.dim(), g.dim());
        for (r, &nr) in n.iter().enumerate() {
            for (c, &nc) in n.iter().enumerate() {
                full.set(nr, nc, s.get(r, c).clone());
            }
        }
        matrices.push(full);
    }
    for x in 0..matrices.len() {
        for y in x + 1..matrices.len() {
            if !matrices[x].commutes_with(&matrices[y]) {
                return Err(Error::NotCommuting(x, y));
            }
        }
    }
    Ok(AdSMap { matrices })
}

/// The split-group variant: `G = C^n ⋉ N` with a holomorphic action.
pub fn build_b_gamma_split(
    g: &LieAlgebra,
    j: &ComplexStructure,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
) -> Result<BGamma> {
    let family = split_action(g)?;
    let n = g.n_indices();
    if !j.preserves(n) || !j.preserves(g.v_indices()) {
        return Err(hypothesis("J does not preserve both V and n"));
    }
    let jn = j.restrict(n);
    if let Some(&a) = g.v_indices().iter().find(|&&a| !g.ad(a).select(n, n).commutes_with(&jn)) {
        return Err(hypothesis(format!("the action of {} on n is not holomorphic", g.names()[a])));
    }
    build_with(g, &family, j, decl, lat, Pipeline::Split, vec!["lattice splits along C^n ⋉ N".into()])
}

/// `(ğ, J̆)`: real form, complex structure and the character replacements.
#[derive(Clone, Debug)]
pub struct BrevePair {
    pub algebra: LieAlgebra,
    pub j: ComplexStructure,
    /// Brackets of `ğ ⊗ C` in the rescaled frame.
    pub frame_algebra: LieAlgebra,
    pub frame: DolbeaultFrame,
    pub beta_tilde: Vec<ComplexWeight>,
    pub delta: Vec<ComplexWeight>,
    /// `μ_w` with `W̃_w = μ_w⁻¹ W_w`.
    pub mu: Vec<ComplexWeight>,
    pub choice: SubtorusChoice,
    pub unitary_lattice: CharLattice,
}

pub fn breve_pair(
    g: &LieAlgebra,
    ads: &AdSMap,
    j: &ComplexStructure,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
    mode: &SubtorusMode,
) -> Result<BrevePair> {
    let b = build_b_gamma(g, ads, j, decl, lat)?;
    breve_from(g, &b, decl, lat, mode)
}

pub fn breve_from(
    g: &LieAlgebra,
    b: &BGamma,
    decl: &DeclaredCharacters,
    lat: &LatticeEvaluation,
    mode: &SubtorusMode,
) -> Result<BrevePair> {
    let f = g.field();
    let frame = b.frame.clone();
    let (nx, h) = (frame.nx, frame.half());
    let lattice = CharLattice::new(&b.twist_declared, decl)?;
    let choice = choose_subtorus_for(&lattice, &lattice.exponents, lat, mode)?;
    let mut beta_tilde = Vec::with_capacity(frame.len());
    for k in 0..frame.len() {
        let e: Vec<Q> = lattice.exponents[k].iter().map(|x| Q::from_integer(x.clone())).collect();
        let declared = lattice.declared(&choice.project(&e));
        let w = if nx == 0 { ComplexWeight::zero(f, 0) } else { frame.base.weight_of(&decl.functional(&declared)) };
        if !w.is_unitary() {
            return Err(Error::Internal(format!("projected twist of {} is not unitary", frame.names[k])));
        }
        beta_tilde.push(w);
    }
    let mut delta = vec![ComplexWeight::zero(f, nx); frame.len()];
    for k in nx..h {
        let d = solve_delta(&beta_tilde[k].add(&beta_tilde[k + h]))?;
        delta[k] = d.clone();
        delta[k + h] = d;
    }
    let mu: Vec<ComplexWeight> = (0..frame.len()).map(|k| beta_tilde[k].add(&delta[k])).collect();
    for k in 0..frame.len() {
        if mu[frame.sigma(k)] != mu[k].conj() {
            return Err(Error::ConjugationClosureFailure(format!(
                "the rescaling of {} and of its conjugate are not conjugate",
                frame.names[k]
            )));
        }
    }
    // dlog μ_i evaluated on the base slots
    let base = frame.base_slots();
    let diag: Vec<Vec<FieldElement>> = base
        .iter()
        .map(|&s| mu.iter().map(|m| if s < h { m.p[s].clone() } else { m.q[s - h].clone() }).collect())
        .collect();
    let fa = LieAlgebra::new(f, frame.names.clone(), &twisted_brackets(&frame.algebra, &diag), base.clone())?;
    if let Some((a, bb, c)) = fa.jacobi_failure() {
        return Err(Error::JacobiFailure(format!(
            "rescaled frame fails on ({}, {}, {})",
            fa.names()[a],
            fa.names()[bb],
            fa.names()[c]
        )));
    }
    for (a, bb, w, c) in fa.structure_constants() {
        let (sa, sb, sw) = (frame.sigma(a), frame.sigma(bb), frame.sigma(w));
        let mirrored =
            fa.bracket_basis(sa, sb).iter().find(|(i, _)| *i == sw).map(|(_, x)| x.clone()).unwrap_or_else(|| f.zero());
        if mirrored != c.conj() {
            return Err(Error::ConjugationClosureFailure(format!(
                "[{}, {}] is not conjugate to [{}, {}]",
                fa.names()[a],
                fa.names()[bb],
                fa.names()[sa],
                fa.names()[sb]
            )));
        }
    }
    let (algebra, jm) = real_form(&fa, &frame)?;
    let jb = ComplexStructure::new(&algebra, jm)?;
    let checks = validate_complex_structure(&algebra, &jb, None);
    if !structure_is_valid(&checks) {
        return Err(Error::Internal(format!("J̆ fails {:?}", checks.first_failure())));
    }
    Ok(BrevePair { algebra, j: jb, frame_algebra: fa, frame, beta_tilde, delta, mu, choice, unitary_lattice: lattice })
}

/// Real basis `R_k = W_k + W̄_k`, `I_k = i(W_k − W̄_k)` and `J̆` in it.
fn real_form(fa: &LieAlgebra, frame: &DolbeaultFrame) -> Result<(LieAlgebra, Matrix)> {
    let f = fa.field();
    let i = f.i()?;
    let h = frame.half();
    let d = frame.len();
    let mut cols = Vec::with_capacity(d);
    let mut names = Vec::with_capacity(d);
    for k in 0..h {
        let mut r = vec![f.zero(); d];
        r[k] = f.one();
        r[k + h] = f.one();
        let mut im = vec![f.zero(); d];
        im[k] = i.clone();
        im[k + h] = -&i;
        cols.push(r);
        cols.push(im);
        names.push(format!("R{}", k + 1));
        names.push(format!("I{}", k + 1));
    }
    let p = Matrix::from_columns(f, d, &cols);
    let v: Vec<usize> = (0..frame.nx).flat_map(|k| [2 * k, 2 * k + 1]).collect();
    let algebra = fa.change_basis(&p, names)?.with_v(v)?;
    if !algebra.is_real() {
        return Err(Error::ConjugationClosureFailure("real form has non-real structure constants".into()));
    }
    let diag: Vec<FieldElement> = (0..d).map(|k| if k < h { i.clone() } else { -&i }).collect();
    let jm = p.inverse()?.mul(&Matrix::diagonal(f, &diag)).mul(&p);
    if (0..d).any(|r| (0..d).any(|c| !jm.get(r, c).is_real())) {
        return Err(Error::ConjugationClosureFailure("J̆ is not real".into()));
    }
    Ok((algebra, jm))
}

/// Frame of `g^{1,0} = ker(J − i)` followed by its conjugate.
pub fn invariant_frame(g: &LieAlgebra, j: &ComplexStructure) -> Result<(LieAlgebra, usize)> {
    let f = g.field();
    let i = f.i()?;
    let d = g.dim();
    let k = j.j.sub(&Matrix::identity(f, d).scale(&i)).kernel();
    if 2 * k.len() != d {
        return Err(Error::Internal("g^{1,0} has the wrong dimension".into()));
    }
    let mut cols = k.clone();
    cols.extend(k.iter().map(|c| conj_vec(c)));
    let m = k.len();
    let names = (1..=m).map(|a| format!("W{a}")).chain((1..=m).map(|a| format!("Wb{a}"))).collect();
    Ok((g.change_basis(&Matrix::from_columns(f, d, &cols), names)?.with_v(Vec::new())?, m))
}

/// Invariant Dolbeault complex `(Λ g^{*}_C, ∂̄)` of a Lie algebra with complex structure.
pub fn invariant_dolbeault(g: &LieAlgebra, j: &ComplexStructure) -> Result<BigradedComplex> {
    let (fa, m) = invariant_frame(g, j)?;
    let dga = crate::lie::ce_dga(&fa)?;
    let bideg = (0..2 * m).map(|k| if k < m { (1, 0) } else { (0, 1) }).collect();
    BigradedComplex::from_dga(&dga, bideg, |_| true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShortcutMode {
    General,
    Abelian,
    Parallelizable,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

pub fn shortcut_hodge(bp: &BrevePair, mode: ShortcutMode) -> Result<Vec<Vec<usize>>> {
    match mode {
        ShortcutMode::General => Ok(invariant_dolbeault(&bp.algebra, &bp.j)?.hodge()),
        ShortcutMode::Abelian => {
            if !is_abelian_structure(&bp.algebra, &bp.j) {
                return Err(Error::ModeHypothesisFailure("J̆ is not abelian".into()));
            }
            Ok(abelian_module_complex(&bp.algebra, &bp.j)?.hodge())
        }
        ShortcutMode::Parallelizable => {
            if !is_bi_invariant(&bp.algebra, &bp.j) {
                return Err(Error::ModeHypothesisFailure("ğ is not a complex Lie algebra".into()));
            }
            let (fa, m) = invariant_frame(&bp.algebra, &bp.j)?;
            let antiholo: Vec<usize> = (m..2 * m).collect();
            let sub = restrict_algebra(&fa, &antiholo)
                .ok_or_else(|| Error::Internal("g^(0,1) is not a subalgebra".into()))?;
            let b = crate::lie::ce_complex(&sub)?.betti();
            Ok((0..=m).map(|p| (0..=m).map(|q| binomial(m, p) * b[q]).collect()).collect())
        }
    }
}

/// For abelian `J`: `∂̄` on `(1,0)`-forms is the dual of the action of
/// `g^{0,1}` on `g^{1,0}`, and `∂̄` vanishes on `(0,1)`-forms.
pub fn abelian_module_complex(g: &LieAlgebra, j: &ComplexStructure) -> Result<BigradedComplex> {
    let (fa, m) = invariant_frame(g, j)?;
    let mut dgen: Vec<Element> = vec![Vec::new(); 2 * m];
    for (a, b, w, c) in fa.structure_constants() {
        // keep [W̄_a, W_b]^{1,0}: one index on each side, target holomorphic
        if w < m && (a < m) != (b < m) {
            dgen[w].push(((1 << a) | (1 << b), -&c));
        }
    }
    for d in dgen.iter_mut() {
        d.sort_by_key(|(mk, _)| *mk);
    }
    let names = fa.names().iter().map(|n| n.to_lowercase()).collect();
    let dga = Dga::new(g.field(), names, dgen)?;
    let bideg = (0..2 * m).map(|k| if k < m { (1, 0) } else { (0, 1) }).collect();
    BigradedComplex::from_dga(&dga, bideg, |_| true)
}

/// `h^{p,q} = h^{n−p,n−q}`.
pub fn is_serre_symmetric(h: &[Vec<usize>]) -> bool {
    let n = h.len();
    (0..n).all(|p| (0..h[p].len()).all(|q| h.get(n - 1 - p).and_then(|r| r.get(h[p].len() - 1 - q)) == Some(&h[p][q])))
}

/// Entrywise product table `Σ_{a+c=p, b+d=q} x[a][b]·y[c][d]`.
pub fn tensor_tables(x: &[Vec<usize>], y: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let rows = x.len() + y.len() - 1;
    let cols = x[0].len() + y[0].len() - 1;
    let mut out = vec![vec![0; cols]; rows];
    for (a, xr) in x.iter().enumerate() {
        for (b, xv) in xr.iter().enumerate() {
            for (c, yr) in y.iter().enumerate() {
                for (d, yv) in yr.iter().enumerate() {
                    out[a + c][b + d] += xv * yv;
                }
            }
        }
    }
    out
}
