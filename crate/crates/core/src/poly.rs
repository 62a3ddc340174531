//! Univariate polynomials over a [`Field`], constant term first.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::rational::{rationalize, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<FieldElement>,
}

impl Poly {
    /// Panics on an empty coefficient list; use [`Poly::zero`] instead.
    pub fn new(c: Vec<FieldElement>) -> Poly {
        let field = c.first().expect("at least one coefficient").field().clone();
        let mut p = Poly { field, c };
        p.trim();
        p
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn constant(x: FieldElement) -> Poly {
        Poly::new(vec![x])
    }

    /// `x - r`
    pub fn linear(r: &FieldElement) -> Poly {
        Poly::new(vec![-r, r.field().one()])
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(FieldElement::is_zero) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = self.field.zero();
        let c = (0..n).map(|k| self.c.get(k).unwrap_or(&z) + o.c.get(k).unwrap_or(&z)).collect();
        let mut p = Poly { field: self.field.clone(), c };
        p.trim();
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-&self.field.one()))
    }

    pub fn scale(&self, x: &FieldElement) -> Poly {
        let mut p = Poly { field: self.field.clone(), c: self.c.iter().map(|a| a * x).collect() };
        p.trim();
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        let mut p = Poly { field: self.field.clone(), c };
        p.trim();
        p
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().expect("nonzero leading coefficient"))
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.clone();
        let mut qc = vec![self.field.zero(); self.c.len().saturating_sub(d.c.len()) + 1];
        let inv = d.lead().inv()?;
        while !r.is_zero() && r.c.len() >= d.c.len() {
            let shift = r.c.len() - d.c.len();
            let f = &r.lead() * &inv;
            for (k, dc) in d.c.iter().enumerate() {
                r.c[k + shift] = &r.c[k + shift] - &(&f * dc);
            }
            qc[shift] = f;
            r.trim();
        }
        let mut qp = Poly { field: self.field.clone(), c: qc };
        qp.trim();
        Ok((qp, r))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let c = self.c[1..].iter().enumerate().map(|(k, a)| a.scale(&Q::from_integer((k as i64 + 1).into()))).collect();
        let mut p = Poly { field: self.field.clone(), c };
        p.trim();
        p
    }

    /// Squarefree part `f / gcd(f, f')`, monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).expect("gcd is nonzero").0.monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.c.iter().rev().fold(self.field.zero(), |acc, a| &(&acc * x) + a)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zero(&self.field, n, n);
        for a in self.c.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(&self.field, n).scale(a));
        }
        acc
    }

    /// Roots in the field, each listed once, in increasing [`Ord`] order,
    /// together with the monic cofactor that has no roots in the field.
    ///
    /// Numeric candidates come from every real embedding of K; exact
    /// membership is always verified by evaluation, so the numeric step can
    /// only cause roots to be missed, never invented.
    pub fn roots(&self) -> (Vec<FieldElement>, Poly) {
        let mut rest = self.squarefree();
        let mut found: Vec<FieldElement> = Vec::new();
        if rest.degree() == 0 {
            return (found, rest);
        }
        let thetas = real_embeddings(&self.field);
        for cand in candidate_roots(&rest, &thetas) {
            if rest.degree() == 0 {
                break;
            }
            if !found.contains(&cand) && rest.eval(&cand).is_zero() {
                rest = rest.divrem(&Poly::linear(&cand)).expect("linear divisor").0;
                found.push(cand);
            }
        }
        found.sort();
        (found, rest.monic())
    }

    pub fn to_complex_coeffs(&self, theta: f64) -> Vec<Complex64> {
        self.c.iter().map(|a| a.to_complex(theta)).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*x")?,
                _ => write!(f, "({a})*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Numeric roots of a polynomial with complex coefficients.
pub fn numeric_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let comp = nalgebra::DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // unshifted QR can stall when roots share a modulus (e.g. ±2 ± i);
    // translating the spectrum breaks the tie, and candidates are confirmed exactly later
    for shift in [Complex64::new(0.0, 0.0), Complex64::new(0.31, 0.73), Complex64::new(-0.57, 0.19)] {
        let m = &comp + nalgebra::DMatrix::<Complex64>::identity(n, n) * shift;
        if let Some(ev) = nalgebra::Schur::try_new(m, 1e-13, 10_000).and_then(|s| s.eigenvalues()) {
            return ev.iter().map(|z| z - shift).collect();
        }
    }
    Vec::new()
}

/// Real roots of the minimal polynomial, i.e. the real embeddings of K.
pub fn real_embeddings(field: &Field) -> Vec<f64> {
    let spec = field.spec();
    if field.degree() == 1 {
        return vec![crate::rational::to_f64(&-spec.min_poly[0].clone())];
    }
    let cs: Vec<Complex64> = spec.min_poly.iter().map(|c| Complex64::new(crate::rational::to_f64(c), 0.0)).collect();
    let mut out: Vec<f64> =
        numeric_roots(&cs).into_iter().filter(|z| z.im.abs() < 1e-9 * (1.0 + z.re.abs())).map(|z| z.re).collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    out
}

const MAX_DEN: i64 = 1 << 24;
const MAX_COMBOS: usize = 20_000;

/// Exact candidates for roots of `p` obtained by rationalising power-basis
/// coordinates recovered from numeric roots under each real embedding.
fn candidate_roots(p: &Poly, thetas: &[f64]) -> Vec<FieldElement> {
    let field = p.field();
    let d = field.degree();
    if thetas.len() != d {
        // K is not totally real: only rational (or Gaussian rational) roots are sought
        let base = thetas.first().copied().unwrap_or(0.0);
        return numeric_roots(&p.to_complex_coeffs(base))
            .into_iter()
            .filter_map(|z| rational_point(field, &[vec![z.re]], &[vec![z.im]], &[base]))
            .collect();
    }
    let per_embedding: Vec<Vec<Complex64>> = thetas.iter().map(|&t| numeric_roots(&p.to_complex_coeffs(t))).collect();
    let mut out = Vec::new();
    if per_embedding.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0usize; d];
    let mut combos = 0usize;
    loop {
        combos += 1;
        let re: Vec<Vec<f64>> = (0..d).map(|e| vec![per_embedding[e][idx[e]].re]).collect();
        let im: Vec<Vec<f64>> = (0..d).map(|e| vec![per_embedding[e][idx[e]].im]).collect();
        if let Some(c) = rational_point(field, &re, &im, thetas) {
            out.push(c);
        }
        // odometer over the product of per-embedding root lists
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_embedding[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if combos > MAX_COMBOS {
            return out;
        }
    }
}

/// Solves the Vandermonde system for power-basis coordinates and rationalises.
fn rational_point(field: &Field, re: &[Vec<f64>], im: &[Vec<f64>], thetas: &[f64]) -> Option<FieldElement> {
    let d = thetas.len();
    let v = nalgebra::DMatrix::<f64>::from_fn(d, d, |r, c| thetas[r].powi(c as i32));
    let lu = v.lu();
    let solve = |vals: &[Vec<f64>]| -> Option<Vec<Q>> {
        let b = nalgebra::DVector::<f64>::from_fn(d, |r, _| vals[r][0]);
        let x = lu.solve(&b)?;
        x.iter().map(|&t| rationalize(t, MAX_DEN)).collect()
    };
    let a = solve(re)?;
    let b = solve(im)?;
    if !field.has_i() && b.iter().any(|x| !num_traits::Zero::is_zero(x)) {
        return None;
    }
    let b = if field.has_i() { b } else { Vec::new() };
    field.from_parts(&a, &b).ok()
}

/// Characteristic polynomial by Faddeev–LeVerrier.
pub fn charpoly(m: &Matrix) -> Result<Poly> {
    if m.rows() != m.cols() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let f = m.field().clone();
    let mut c = vec![f.zero(); n + 1];
    c[n] = f.one();
    let id = Matrix::identity(&f, n);
    let mut mk = Matrix::zero(&f, n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&id.scale(&c[n + 1 - k]));
        let tr = m.mul(&mk).trace();
        c[n - k] = tr.scale(&Q::new((-1).into(), (k as i64).into()));
    }
    Ok(Poly::new(c))
}
