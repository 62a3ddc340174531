//! Lie algebras given by structure constants on a basis, with a declared
//! splitting `g = V ⊕ n`.

use crate::complex::{CochainComplex, Dga, Element};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::jordan::{is_semisimple, jordan_chevalley};
use crate::matrix::Matrix;
use crate::report::{Check, CheckList};

/// Sparse vector `Σ c·e_i`, sorted by index, no zeros.
pub type SparseVec = Vec<(usize, FieldElement)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    names: Vec<String>,
    /// `table[j][k] = [e_j, e_k]`, antisymmetric.
    table: Vec<Vec<SparseVec>>,
    v: Vec<usize>,
    n: Vec<usize>,
}

fn add_into(v: &mut SparseVec, i: usize, c: &FieldElement) {
    match v.binary_search_by_key(&i, |(k, _)| *k) {
        Ok(pos) => {
            let s = &v[pos].1 + c;
            if s.is_zero() {
                v.remove(pos);
            } else {
                v[pos].1 = s;
            }
        }
        Err(pos) => {
            if !c.is_zero() {
                v.insert(pos, (i, c.clone()));
            }
        }
    }
}

impl LieAlgebra {
    /// `brackets` holds `(j, k, i, c)` meaning `[e_j, e_k] += c·e_i`;
    /// antisymmetry fills in `[e_k, e_j]`.
    pub fn new(
        field: &Field,
        names: Vec<String>,
        brackets: &[(usize, usize, usize, FieldElement)],
        v: Vec<usize>,
    ) -> Result<LieAlgebra> {
        let dim = names.len();
        let mut table = vec![vec![SparseVec::new(); dim]; dim];
        for (j, k, i, c) in brackets {
            if *j >= dim || *k >= dim || *i >= dim {
                return Err(Error::InvalidPresentation(format!("bracket index out of range: ({j},{k},{i})")));
            }
            if j == k {
                if !c.is_zero() {
                    return Err(Error::InvalidPresentation(format!("[{0},{0}] must vanish", names[*j])));
                }
                continue;
            }
            add_into(&mut table[*j][*k], *i, c);
            add_into(&mut table[*k][*j], *i, &-c);
        }
        let mut vs = v.clone();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != v.len() || vs.iter().any(|&x| x >= dim) {
            return Err(Error::InvalidPresentation("V indices must be distinct and in range".into()));
        }
        let n = (0..dim).filter(|x| !v.contains(x)).collect();
        Ok(LieAlgebra { field: field.clone(), names, table, v, n })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn v_indices(&self) -> &[usize] {
        &self.v
    }

    pub fn n_indices(&self) -> &[usize] {
        &self.n
    }

    pub fn bracket_basis(&self, j: usize, k: usize) -> &SparseVec {
        &self.table[j][k]
    }

    /// Nonzero structure constants `(j, k, i, c^i_{jk})` with `j < k`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, FieldElement)> {
        let mut out = Vec::new();
        for j in 0..self.dim() {
            for k in j + 1..self.dim() {
                for (i, c) in &self.table[j][k] {
                    out.push((j, k, *i, c.clone()));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (j, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in y.iter().enumerate() {
                if b.is_zero() || self.table[j][k].is_empty() {
                    continue;
                }
                let ab = a * b;
                for (i, c) in &self.table[j][k] {
                    out[*i] = &out[*i] + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<FieldElement> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Matrix of `ad_{e_j}`: column `k` is `[e_j, e_k]`.
    pub fn ad(&self, j: usize) -> Matrix {
        let mut m = Matrix::zero(&self.field, self.dim(), self.dim());
        for k in 0..self.dim() {
            for (i, c) in &self.table[j][k] {
                m.set(*i, k, c.clone());
            }
        }
        m
    }

    pub fn ad_vec(&self, x: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(&self.field, self.dim(), self.dim());
        for (j, a) in x.iter().enumerate() {
            if !a.is_zero() {
                m = m.add(&self.ad(j).scale(a));
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(Vec::is_empty))
    }

    /// All constants lie in the real subfield.
    pub fn is_real(&self) -> bool {
        self.table.iter().flatten().flatten().all(|(_, c)| c.is_real())
    }

    /// First basis triple violating Jacobi, if any.
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let (ea, eb, ec) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let t2 = self.bracket(&eb, &self.bracket(&ec, &ea));
                    let t3 = self.bracket(&ec, &self.bracket(&ea, &eb));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(&(x + y) + z).is_zero()) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `D[X,Y] = [DX,Y] + [X,DY]` on all basis pairs.
    pub fn is_derivation(&self, m: &Matrix) -> bool {
        let d = self.dim();
        let cols: Vec<Vec<FieldElement>> = (0..d).map(|j| m.column(j)).collect();
        for j in 0..d {
            for k in j + 1..d {
                let lhs = m.mul_vec(&self.bracket(&self.unit(j), &self.unit(k)));
                let r1 = self.bracket(&cols[j], &self.unit(k));
                let r2 = self.bracket(&self.unit(j), &cols[k]);
                if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (a, b))| *l != a + b) {
                    return false;
                }
            }
        }
        true
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix, names: Vec<String>) -> Result<LieAlgebra> {
        let pinv = p.inverse()?;
        let d = self.dim();
        let cols: Vec<Vec<FieldElement>> = (0..d).map(|j| p.column(j)).collect();
        let mut brackets = Vec::new();
        for j in 0..d {
            for k in j + 1..d {
                let br = pinv.mul_vec(&self.bracket(&cols[j], &cols[k]));
                for (i, c) in br.into_iter().enumerate() {
                    if !c.is_zero() {
                        brackets.push((j, k, i, c));
                    }
                }
            }
        }
        LieAlgebra::new(&self.field, names, &brackets, self.v.clone())
    }

    /// Same constants with a different V.
    pub fn with_v(&self, v: Vec<usize>) -> Result<LieAlgebra> {
        LieAlgebra::new(&self.field, self.names.clone(), &self.structure_constants(), v)
    }

    /// Same constants with different basis names.
    pub fn renamed(&self, names: Vec<String>) -> LieAlgebra {
        LieAlgebra { names, ..self.clone() }
    }

    /// Span of `[A, B]` for `A` in `xs`, `B` in `ys`, as RREF rows.
    fn bracket_span(&self, xs: &[Vec<FieldElement>], ys: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        let mut vecs = Vec::new();
        for x in xs {
            for y in ys {
                let b = self.bracket(x, y);
                if b.iter().any(|c| !c.is_zero()) {
                    vecs.push(b);
                }
            }
        }
        span(&self.field, self.dim(), &vecs)
    }

    fn n_basis(&self) -> Vec<Vec<FieldElement>> {
        self.n.iter().map(|&i| self.unit(i)).collect()
    }

    fn full_basis(&self) -> Vec<Vec<FieldElement>> {
        (0..self.dim()).map(|i| self.unit(i)).collect()
    }

    /// Lower central series of the whole algebra vanishes.
    pub fn is_nilpotent(&self) -> bool {
        let all = self.full_basis();
        let mut cur = all.clone();
        for _ in 0..=self.dim() {
            if cur.is_empty() {
                return true;
            }
            cur = self.bracket_span(&all, &cur);
        }
        cur.is_empty()
    }

    /// Derived series vanishes.
    pub fn is_solvable(&self) -> bool {
        let mut cur = self.full_basis();
        for _ in 0..=self.dim() {
            if cur.is_empty() {
                return true;
            }
            cur = self.bracket_span(&cur, &cur);
        }
        cur.is_empty()
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim()).all(|j| self.ad(j).trace().is_zero())
    }

    fn in_n(&self, v: &[FieldElement]) -> bool {
        self.v.iter().all(|&i| v[i].is_zero())
    }

    pub fn n_is_ideal(&self) -> bool {
        let all = self.full_basis();
        self.bracket_span(&all, &self.n_basis()).iter().all(|v| self.in_n(v))
    }

    pub fn n_contains_derived(&self) -> bool {
        let all = self.full_basis();
        self.bracket_span(&all, &all).iter().all(|v| self.in_n(v))
    }

    pub fn n_is_nilpotent(&self) -> bool {
        let nb = self.n_basis();
        let mut cur = nb.clone();
        for _ in 0..=self.dim() {
            if cur.is_empty() {
                return true;
            }
            cur = self.bracket_span(&nb, &cur);
        }
        cur.is_empty()
    }

    /// `(ad_A)_s(B) = 0` for `A, B ∈ V`.
    pub fn v_condition(&self) -> Result<Option<(usize, usize)>> {
        for &a in &self.v {
            let s = jordan_chevalley(&self.ad(a))?.s;
            for &b in &self.v {
                if s.column(b).iter().any(|c| !c.is_zero()) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }
}

/// RREF row basis of the span of `vecs`.
pub fn span(field: &Field, dim: usize, vecs: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(field, vecs.len(), dim, |i, j| vecs[i][j].clone());
    let (r, piv) = m.rref();
    (0..piv.len()).map(|i| (0..dim).map(|j| r.get(i, j).clone()).collect()).collect()
}

/// Structural checks on a presentation; never fails, so every problem is reported.
pub fn validate(g: &LieAlgebra) -> CheckList {
    let mut out = CheckList::default();
    let jac = g.jacobi_failure();
    out.push(Check::new(
        "jacobi",
        jac.is_none(),
        jac.map(|(a, b, c)| format!("fails on ({}, {}, {})", g.names[a], g.names[b], g.names[c])).unwrap_or_default(),
    ));
    if jac.is_some() {
        return out;
    }
    out.push(Check::new("n_ideal", g.n_is_ideal(), ""));
    out.push(Check::new("n_nilpotent", g.n_is_nilpotent(), ""));
    out.push(Check::new("n_contains_derived_algebra", g.n_contains_derived(), ""));
    match g.v_condition() {
        Ok(None) => out.push(Check::pass("v_condition")),
        Ok(Some((a, b))) => {
            out.push(Check::new("v_condition", false, format!("(ad {})_s({}) ≠ 0", g.names[a], g.names[b])))
        }
        Err(e) => out.push(Check::new("v_condition", false, e.to_string())),
    }
    out.push(Check::new("solvable", g.is_solvable(), ""));
    out.push(Check::new("unimodular", g.is_unimodular(), ""));
    out
}

/// The semisimple derivations `ad_s(A_j)`, one per V-basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdSMap {
    pub matrices: Vec<Matrix>,
}

pub fn compute_ad_s(g: &LieAlgebra) -> Result<AdSMap> {
    let mut matrices = Vec::with_capacity(g.v.len());
    for &a in &g.v {
        let s = jordan_chevalley(&g.ad(a))?.s;
        if !g.is_derivation(&s) {
            return Err(Error::NonSemisimpleDerivation(format!("(ad {})_s", g.names[a])));
        }
        if !is_semisimple(&s)? {
            return Err(Error::Internal("semisimple part is not semisimple".into()));
        }
        matrices.push(s);
    }
    for i in 0..matrices.len() {
        for j in i + 1..matrices.len() {
            if !matrices[i].commutes_with(&matrices[j]) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    Ok(AdSMap { matrices })
}

impl AdSMap {
    /// `ad_s(x)` for `x ∈ g`; depends only on the V-component.
    pub fn at(&self, g: &LieAlgebra, x: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(g.field(), g.dim(), g.dim());
        for (slot, &a) in g.v_indices().iter().enumerate() {
            if !x[a].is_zero() {
                m = m.add(&self.matrices[slot].scale(&x[a]));
            }
        }
        m
    }
}

/// The Chevalley–Eilenberg algebra: `d x^i = −Σ_{j<k} c^i_{jk} x^j ∧ x^k`.
pub fn ce_dga(g: &LieAlgebra) -> Result<Dga> {
    let mut dgen: Vec<Element> = vec![Vec::new(); g.dim()];
    for (j, k, i, c) in g.structure_constants() {
        dgen[i].push(((1 << j) | (1 << k), -&c));
    }
    for e in dgen.iter_mut() {
        e.sort_by_key(|(m, _)| *m);
    }
    let names = g.names().iter().map(|n| format!("{n}*")).collect();
    Dga::new(g.field(), names, dgen)
}

pub fn ce_complex(g: &LieAlgebra) -> Result<CochainComplex> {
    CochainComplex::full(&ce_dga(g)?)
}

pub fn betti(c: &CochainComplex) -> Vec<usize> {
    c.betti()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn algebra(field: &Field, names: &[&str], brackets: &[(usize, usize, usize, i64)], v: &[usize]) -> LieAlgebra {
        let b: Vec<_> = brackets.iter().map(|&(j, k, i, c)| (j, k, i, field.from_int(c))).collect();
        LieAlgebra::new(field, names.iter().map(|s| s.to_string()).collect(), &b, v.to_vec()).unwrap()
    }

    /// [t, v] = w, [t, w] = −v
    pub fn rotation(field: &Field) -> LieAlgebra {
        algebra(field, &["t", "v", "w"], &[(0, 1, 2, 1), (0, 2, 1, -1)], &[0])
    }

    #[test]
    fn abelian_r3() {
        let f = Field::rationals();
        let g = algebra(&f, &["a", "b", "c"], &[], &[]);
        assert!(validate(&g).all_passed());
        let cx = ce_complex(&g).unwrap();
        assert!((0..3).all(|p| cx.differential(p).is_zero()));
        assert_eq!(betti(&cx), vec![1, 3, 3, 1]);
        assert!(compute_ad_s(&g).unwrap().matrices.is_empty());
    }

    #[test]
    fn rotation_algebra() {
        let f = Field::rationals();
        let g = rotation(&f);
        let report = validate(&g);
        assert!(report.all_passed(), "{report:?}");
        let ads = compute_ad_s(&g).unwrap();
        assert_eq!(ads.matrices[0], g.ad(0));
        let dga = ce_dga(&g).unwrap();
        // dv* = t*∧w*, dw* = −t*∧v*
        assert_eq!(dga.d_generator(1), &vec![(0b101, f.one())]);
        assert_eq!(dga.d_generator(2), &vec![(0b011, f.from_int(-1))]);
        assert_eq!(betti(&ce_complex(&g).unwrap()), vec![1, 1, 1, 1]);
    }

    #[test]
    fn corrupted_jacobi_is_named() {
        let f = Field::rationals();
        // [t,v]=w, [t,w]=-v, [v,w]=v breaks Jacobi
        let g = algebra(&f, &["t", "v", "w"], &[(0, 1, 2, 1), (0, 2, 1, -1), (1, 2, 1, 1)], &[0]);
        let r = validate(&g);
        assert!(!r.passed("jacobi"));
        assert!(r.get("jacobi").unwrap().detail.contains("(t, v, w)"));
    }

    #[test]
    fn heisenberg() {
        let f = Field::rationals();
        let g = algebra(&f, &["x", "y", "z"], &[(0, 1, 2, 1)], &[]);
        assert!(g.is_nilpotent());
        assert_eq!(betti(&ce_complex(&g).unwrap()), vec![1, 2, 2, 1]);
    }

    #[test]
    fn change_basis_preserves_cohomology() {
        let f = Field::rationals();
        let g = rotation(&f);
        let p = Matrix::from_ints(&f, &[&[1, 0, 0], &[1, 1, 0], &[0, 2, 1]]);
        let h = g.change_basis(&p, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert!(h.jacobi_failure().is_none());
        assert_eq!(betti(&ce_complex(&h).unwrap()), vec![1, 1, 1, 1]);
    }
}
