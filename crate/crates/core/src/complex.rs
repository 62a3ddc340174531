//! Free graded-commutative algebras on degree-one generators, their
//! differentials, and finite (bi)graded subcomplexes spanned by monomials.
//!
//! A monomial is a bitmask over generators; `g_{i_1} ∧ … ∧ g_{i_p}` is stored
//! with increasing indices. Within a degree, monomials are ordered
//! lexicographically by their index lists.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{SparseMatrix, SparseRow};

pub type Mask = u32;

/// Maximum number of generators of a single algebra.
pub const MAX_GENERATORS: usize = 24;

/// Sparse element of the exterior algebra, sorted by mask, no zero terms.
pub type Element = Vec<(Mask, FieldElement)>;

/// Sign of `a ∧ b` relative to the sorted monomial `a | b`, or `None` if they share a generator.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    // count pairs (x ∈ a, y ∈ b) with x > y
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let y = bb.trailing_zeros();
        bb &= bb - 1;
        inversions += (a >> y >> 1).count_ones();
    }
    Some(inversions % 2 == 1)
}

pub fn indices(m: Mask) -> Vec<usize> {
    (0..32).filter(|&i| m >> i & 1 == 1).collect()
}

pub fn mask_of(idx: &[usize]) -> Mask {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

/// Accumulates `coeff · mono` into a sorted map.
fn accumulate(acc: &mut BTreeMap<Mask, FieldElement>, mono: Mask, coeff: FieldElement) {
    match acc.get_mut(&mono) {
        Some(v) => {
            *v = &*v + &coeff;
            if v.is_zero() {
                acc.remove(&mono);
            }
        }
        None => {
            if !coeff.is_zero() {
                acc.insert(mono, coeff);
            }
        }
    }
}

pub fn wedge(x: &[(Mask, FieldElement)], y: &[(Mask, FieldElement)]) -> Element {
    let mut acc = BTreeMap::new();
    for (a, ca) in x {
        for (b, cb) in y {
            if let Some(neg) = wedge_sign(*a, *b) {
                let c = ca * cb;
                accumulate(&mut acc, a | b, if neg { -&c } else { c });
            }
        }
    }
    acc.into_iter().collect()
}

/// Exterior algebra with a degree-one derivation given on generators.
#[derive(Clone, Debug)]
pub struct Dga {
    field: Field,
    names: Vec<String>,
    dgen: Vec<Element>,
}

impl Dga {
    /// Fails if `d ∘ d` is nonzero on some generator (then it is nonzero, as
    /// `d²` is a derivation determined by its values on generators).
    pub fn new(field: &Field, names: Vec<String>, dgen: Vec<Element>) -> Result<Dga> {
        if names.len() > MAX_GENERATORS || names.len() != dgen.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators with {} differentials (limit {MAX_GENERATORS})",
                names.len(),
                dgen.len()
            )));
        }
        for (i, e) in dgen.iter().enumerate() {
            if e.iter().any(|(m, _)| m.count_ones() != 2) {
                return Err(Error::Internal(format!("d({}) is not of degree 2", names[i])));
            }
        }
        let dga = Dga { field: field.clone(), names, dgen };
        for i in 0..dga.dgen.len() {
            let dd = dga.d_element(&dga.dgen[i]);
            if !dd.is_empty() {
                return Err(Error::Internal(format!("d² ≠ 0 on generator {}", dga.names[i])));
            }
        }
        Ok(dga)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn d_generator(&self, i: usize) -> &Element {
        &self.dgen[i]
    }

    /// Leibniz rule: `d(g_{i_1}…g_{i_p}) = Σ_k (−1)^k g_{i_1}…d(g_{i_k})…g_{i_p}`.
    pub fn d_monomial(&self, m: Mask) -> Element {
        let mut acc = BTreeMap::new();
        for (k, i) in indices(m).into_iter().enumerate() {
            let left = m & ((1u32 << i) - 1);
            let right = m & !((1u32 << i) | ((1u32 << i) - 1));
            for (t, c) in &self.dgen[i] {
                let (Some(s1), Some(s2)) = (wedge_sign(left, *t), wedge_sign(left | t, right)) else {
                    continue;
                };
                let neg = (k % 2 == 1) ^ s1 ^ s2;
                accumulate(&mut acc, left | t | right, if neg { -c } else { c.clone() });
            }
        }
        acc.into_iter().collect()
    }

    pub fn d_element(&self, x: &[(Mask, FieldElement)]) -> Element {
        let mut acc = BTreeMap::new();
        for (m, c) in x {
            for (t, ct) in self.d_monomial(*m) {
                accumulate(&mut acc, t, c * &ct);
            }
        }
        acc.into_iter().collect()
    }

    /// All masks of the given degree in lexicographic order of index lists.
    pub fn monomials_of_degree(&self, p: usize) -> Vec<Mask> {
        combinations(self.len(), p)
    }
}

/// p-subsets of {0..n} in lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Mask> {
    fn rec(start: usize, n: usize, left: usize, cur: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, cur | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, 0, &mut out);
    }
    out
}

fn column_of(image: &Element, index: &BTreeMap<Mask, usize>) -> std::result::Result<SparseRow, Mask> {
    let mut col: SparseRow = Vec::with_capacity(image.len());
    for (t, c) in image {
        match index.get(t) {
            Some(&r) => col.push((r, c.clone())),
            None => return Err(*t),
        }
    }
    col.sort_by_key(|(r, _)| *r);
    Ok(col)
}

/// Finite cochain complex spanned by admitted monomials of a [`Dga`].
#[derive(Clone, Debug)]
pub struct CochainComplex {
    field: Field,
    names: Vec<String>,
    basis: Vec<Vec<Mask>>,
    /// `d[p]: C^p → C^{p+1}`
    d: Vec<SparseMatrix>,
}

impl CochainComplex {
    /// The subcomplex on monomials accepted by `admit`. Errors when `d` of an
    /// admitted monomial has a component outside, or when `d² ≠ 0`.
    pub fn from_dga(dga: &Dga, admit: impl Fn(Mask) -> bool + Sync) -> Result<Self> {
        let n = dga.len();
        let basis: Vec<Vec<Mask>> =
            (0..=n).map(|p| dga.monomials_of_degree(p).into_iter().filter(|&m| admit(m)).collect()).collect();
        let index: Vec<BTreeMap<Mask, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(k, &m)| (m, k)).collect()).collect();
        let d: Vec<SparseMatrix> = (0..n)
            .into_par_iter()
            .map(|p| {
                let cols: std::result::Result<Vec<SparseRow>, (Mask, Mask)> = basis[p]
                    .iter()
                    .map(|&m| column_of(&dga.d_monomial(m), &index[p + 1]).map_err(|t| (m, t)))
                    .collect();
                cols.map(|c| SparseMatrix::from_columns(dga.field(), basis[p + 1].len(), c))
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(|(m, t)| {
                Error::NotClosedUnderDifferential(format!(
                    "d({}) has a component on {}",
                    monomial_name(dga.names(), m),
                    monomial_name(dga.names(), t)
                ))
            })?;
        let cx = CochainComplex { field: dga.field().clone(), names: dga.names().to_vec(), basis, d };
        cx.check_d_squared()?;
        Ok(cx)
    }

    pub fn full(dga: &Dga) -> Result<Self> {
        Self::from_dga(dga, |_| true)
    }

    fn check_d_squared(&self) -> Result<()> {
        for p in 0..self.d.len().saturating_sub(1) {
            if !self.d[p + 1].mul(&self.d[p]).is_zero() {
                return Err(Error::Internal(format!("d² ≠ 0 in degree {p}")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn top_degree(&self) -> usize {
        self.basis.len().saturating_sub(1)
    }

    pub fn basis(&self, p: usize) -> &[Mask] {
        &self.basis[p]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn differential(&self, p: usize) -> &SparseMatrix {
        &self.d[p]
    }

    pub fn basis_names(&self, p: usize) -> Vec<String> {
        self.basis[p].iter().map(|&m| monomial_name(&self.names, m)).collect()
    }

    /// `b_p = dim C^p − rank d_p − rank d_{p−1}`.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.par_iter().map(SparseMatrix::rank).collect();
        (0..self.basis.len())
            .map(|p| {
                let out = ranks.get(p).copied().unwrap_or(0);
                let inc = if p == 0 { 0 } else { ranks[p - 1] };
                self.basis[p].len() - out - inc
            })
            .collect()
    }
}

pub fn monomial_name(names: &[String], m: Mask) -> String {
    if m == 0 {
        return "1".into();
    }
    indices(m).iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("∧")
}

/// Bigraded complex with the (0,1)-component of the differential.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    names: Vec<String>,
    bidegree: Vec<(usize, usize)>,
    /// Number of (1,0) and (0,1) generators.
    top: (usize, usize),
    basis: BTreeMap<(usize, usize), Vec<Mask>>,
    dbar: BTreeMap<(usize, usize), SparseMatrix>,
}

fn bideg_of(bidegree: &[(usize, usize)], m: Mask) -> (usize, usize) {
    indices(m).iter().fold((0, 0), |(p, q), &i| (p + bidegree[i].0, q + bidegree[i].1))
}

impl BigradedComplex {
    /// `bidegree[i]` is `(1,0)` or `(0,1)`. Errors when `d` has a component
    /// of bidegree other than (1,0), (0,1) on a generator (non-integrable),
    /// when admitted monomials are not closed under `d`, or when `∂̄² ≠ 0`.
    pub fn from_dga(dga: &Dga, bidegree: Vec<(usize, usize)>, admit: impl Fn(Mask) -> bool + Sync) -> Result<Self> {
        if bidegree.len() != dga.len() {
            return Err(Error::DimensionMismatch("bidegree list".into()));
        }
        for (i, e) in (0..dga.len()).map(|i| (i, dga.d_generator(i))) {
            let (a, b) = bidegree[i];
            for (t, _) in e {
                let (p, q) = bideg_of(&bidegree, *t);
                if !((p, q) == (a + 1, b) || (p, q) == (a, b + 1)) {
                    return Err(Error::HypothesisFailure(format!(
                        "complex structure is not integrable: d({}) has a ({p},{q}) component",
                        dga.names()[i]
                    )));
                }
            }
        }
        let top = bidegree.iter().fold((0, 0), |(p, q), &(a, b)| (p + a, q + b));
        let mut basis: BTreeMap<(usize, usize), Vec<Mask>> = BTreeMap::new();
        for p in 0..=top.0 {
            for q in 0..=top.1 {
                basis.insert((p, q), Vec::new());
            }
        }
        for deg in 0..=dga.len() {
            for m in dga.monomials_of_degree(deg) {
                if admit(m) {
                    basis.get_mut(&bideg_of(&bidegree, m)).expect("bidegree in range").push(m);
                }
            }
        }
        let index: BTreeMap<(usize, usize), BTreeMap<Mask, usize>> =
            basis.iter().map(|(k, b)| (*k, b.iter().enumerate().map(|(i, &m)| (m, i)).collect())).collect();
        let keys: Vec<(usize, usize)> = basis.keys().copied().filter(|&(_, q)| q < top.1).collect();
        let built: Vec<((usize, usize), SparseMatrix)> = keys
            .par_iter()
            .map(|&(p, q)| {
                let target = &index[&(p, q + 1)];
                let mut cols = Vec::with_capacity(basis[&(p, q)].len());
                for &m in &basis[&(p, q)] {
                    let mut col: SparseRow = Vec::new();
                    for (t, c) in dga.d_monomial(m) {
                        let bd = bideg_of(&bidegree, t);
                        let hit = if bd == (p, q + 1) { target.get(&t) } else { index[&bd].get(&t) };
                        match hit {
                            None => {
                                return Err(Error::NotClosedUnderDifferential(format!(
                                    "d({}) has a component on {}",
                                    monomial_name(dga.names(), m),
                                    monomial_name(dga.names(), t)
                                )))
                            }
                            Some(&r) if bd == (p, q + 1) => col.push((r, c)),
                            Some(_) => {}
                        }
                    }
                    col.sort_by_key(|(r, _)| *r);
                    cols.push(col);
                }
                Ok(((p, q), SparseMatrix::from_columns(dga.field(), target.len(), cols)))
            })
            .collect::<Result<_>>()?;
        let dbar: BTreeMap<(usize, usize), SparseMatrix> = built.into_iter().collect();
        let cx = BigradedComplex { names: dga.names().to_vec(), bidegree, top, basis, dbar };
        for (&(p, q), m) in &cx.dbar {
            if let Some(next) = cx.dbar.get(&(p, q + 1)) {
                if !next.mul(m).is_zero() {
                    return Err(Error::Internal(format!("∂̄² ≠ 0 in bidegree ({p},{q})")));
                }
            }
        }
        Ok(cx)
    }

    pub fn top(&self) -> (usize, usize) {
        self.top
    }

    pub fn bidegrees(&self) -> &[(usize, usize)] {
        &self.bidegree
    }

    pub fn basis(&self, p: usize, q: usize) -> &[Mask] {
        self.basis.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    pub fn basis_names(&self, p: usize, q: usize) -> Vec<String> {
        self.basis(p, q).iter().map(|&m| monomial_name(&self.names, m)).collect()
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        (0..=self.top.0).map(|p| (0..=self.top.1).map(|q| self.basis(p, q).len()).collect()).collect()
    }

    pub fn dbar(&self, p: usize, q: usize) -> Option<&SparseMatrix> {
        self.dbar.get(&(p, q))
    }

    /// `h^{p,q}`, indexed `[p][q]`.
    pub fn hodge(&self) -> Vec<Vec<usize>> {
        let ranks: BTreeMap<(usize, usize), usize> =
            self.dbar.par_iter().map(|(k, m)| (*k, m.rank())).collect::<Vec<_>>().into_iter().collect();
        (0..=self.top.0)
            .map(|p| {
                (0..=self.top.1)
                    .map(|q| {
                        let out = ranks.get(&(p, q)).copied().unwrap_or(0);
                        let inc = if q == 0 { 0 } else { ranks.get(&(p, q - 1)).copied().unwrap_or(0) };
                        self.basis(p, q).len() - out - inc
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(false));
        assert_eq!(wedge_sign(0b10, 0b01), Some(true));
        assert_eq!(wedge_sign(0b11, 0b11), None);
        // x1∧x2 ∧ x0 = x0∧x1∧x2
        assert_eq!(wedge_sign(0b110, 0b001), Some(false));
        assert_eq!(combinations(4, 2), vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
    }

    #[test]
    fn heisenberg() {
        // dz = −x∧y
        let f = Field::rationals();
        let dgen = vec![vec![], vec![], vec![(0b011, f.from_int(-1))]];
        let dga = Dga::new(&f, names(3), dgen).unwrap();
        let cx = CochainComplex::full(&dga).unwrap();
        assert_eq!(cx.betti(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn rejects_d_squared() {
        // d x2 = x0∧x1, d x0 = x1∧x3: d² x2 = x1∧x3∧x1 = 0, still fine
        let f = Field::rationals();
        let ok = Dga::new(&f, names(4), vec![vec![(0b1010, f.one())], vec![], vec![(0b0011, f.one())], vec![]]);
        assert!(ok.is_ok());
        // d x2 = x0∧x1, d x0 = x2∧x3 gives d²x2 = x2∧x3∧x1 ≠ 0
        let bad = Dga::new(&f, names(4), vec![vec![(0b1100, f.one())], vec![], vec![(0b0011, f.one())], vec![]]);
        assert!(bad.is_err());
    }

    #[test]
    fn complex_torus_hodge() {
        let f = Field::gaussian_rationals();
        let dga = Dga::new(&f, names(2), vec![vec![], vec![]]).unwrap();
        let b = BigradedComplex::from_dga(&dga, vec![(1, 0), (0, 1)], |_| true).unwrap();
        assert_eq!(b.hodge(), vec![vec![1, 1], vec![1, 1]]);
    }
}
