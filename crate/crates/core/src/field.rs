//! Number fields `K = Q[x]/(m)` and their complexifications `K(i)`.
//!
//! An element of `K(i)` is stored as `a + i·b` with `a, b ∈ K` written in the
//! power basis `1, θ, …, θ^{d-1}`. The coefficient vector is always reduced,
//! so equality is coefficient equality. `K` is assumed to be a real field
//! (the embedding hint names the intended real embedding); conjugation
//! therefore fixes `θ` and negates `b`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: String,
    /// Coefficients of the monic minimal polynomial, constant term first.
    pub min_poly: Vec<Q>,
    /// Printed name of the generator θ.
    pub generator: String,
    pub embedding_hint: Option<String>,
    pub i_adjoined: bool,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            name: "Q".into(),
            min_poly: vec![q(0), q(1)],
            generator: "theta".into(),
            embedding_hint: None,
            i_adjoined: false,
        }
    }

    pub fn gaussian_rationals() -> Self {
        FieldSpec { name: "Q(i)".into(), i_adjoined: true, ..Self::rationals() }
    }
}

#[derive(Debug)]
struct FieldInner {
    spec: FieldSpec,
    degree: usize,
    /// Power-basis coordinates of θ^{d}, …, θ^{2d-2}.
    reduction: Vec<Vec<Q>>,
    warnings: Vec<String>,
}

/// Shared handle to a validated field.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let d = spec
            .min_poly
            .len()
            .checked_sub(1)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidField("minimal polynomial must have degree at least 1".into()))?;
        if !spec.min_poly[d].is_one() {
            return Err(Error::InvalidField("minimal polynomial must be monic".into()));
        }
        if d > 1 && spec.min_poly[0].is_zero() {
            return Err(Error::InvalidField("minimal polynomial has zero constant term".into()));
        }
        let mut warnings = Vec::new();
        check_irreducible(&spec.min_poly, &mut warnings)?;
        if spec.i_adjoined {
            check_i_not_in_field(&spec.min_poly, &mut warnings)?;
        }
        let mut reduction: Vec<Vec<Q>> = Vec::new();
        // θ^d = -(m_0 + … + m_{d-1} θ^{d-1})
        let mut cur: Vec<Q> = spec.min_poly[..d].iter().map(|c| -c).collect();
        for _ in d..(2 * d).saturating_sub(1) {
            reduction.push(cur.clone());
            // multiply by θ
            let top = cur[d - 1].clone();
            let mut next = vec![Q::zero(); d];
            for k in (1..d).rev() {
                next[k] = cur[k - 1].clone();
            }
            for k in 0..d {
                next[k] -= &top * &spec.min_poly[k];
            }
            cur = next;
        }
        Ok(Field(Arc::new(FieldInner { spec, degree: d, reduction, warnings })))
    }

    pub fn rationals() -> Field {
        Field::new(FieldSpec::rationals()).expect("Q is a field")
    }

    pub fn gaussian_rationals() -> Field {
        Field::new(FieldSpec::gaussian_rationals()).expect("Q(i) is a field")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    /// Degree of the real field K over Q.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn has_i(&self) -> bool {
        self.0.spec.i_adjoined
    }

    pub fn warnings(&self) -> &[String] {
        &self.0.warnings
    }

    fn width(&self) -> usize {
        if self.has_i() {
            2 * self.0.degree
        } else {
            self.0.degree
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), c: vec![Q::zero(); self.width()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_q(Q::one())
    }

    pub fn from_q(&self, x: Q) -> FieldElement {
        let mut e = self.zero();
        e.c[0] = x;
        e
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_q(q(n))
    }

    /// The generator θ of K.
    pub fn gen(&self) -> FieldElement {
        let mut e = self.zero();
        if self.0.degree == 1 {
            e.c[0] = -self.0.spec.min_poly[0].clone();
        } else {
            e.c[1] = Q::one();
        }
        e
    }

    /// √−1, if adjoined.
    pub fn i(&self) -> Result<FieldElement> {
        if !self.has_i() {
            return Err(Error::InvalidField(format!("{} does not contain i", self.0.spec.name)));
        }
        let mut e = self.zero();
        e.c[self.0.degree] = Q::one();
        Ok(e)
    }

    /// Builds `a + i b` from power-basis coordinates of `a` and `b`.
    pub fn from_parts(&self, re: &[Q], im: &[Q]) -> Result<FieldElement> {
        let d = self.0.degree;
        if re.len() != d || (im.len() != d && !im.is_empty()) {
            return Err(Error::DimensionMismatch("field element coordinates".into()));
        }
        let mut e = self.zero();
        e.c[..d].clone_from_slice(re);
        if !im.is_empty() && im.iter().any(|x| !x.is_zero()) {
            if !self.has_i() {
                return Err(Error::InvalidField("imaginary part in a real field".into()));
            }
            e.c[d..].clone_from_slice(im);
        }
        Ok(e)
    }

    fn mul_real(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.0.degree;
        let mut prod = vec![Q::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Q> = prod[..d].to_vec();
        for (k, coeff) in prod[d..].iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.0.reduction[k]) {
                *o += coeff * r;
            }
        }
        out
    }

    /// Inverse in K by solving `a·x = 1` on the multiplication matrix.
    fn inv_real(&self, a: &[Q]) -> Result<Vec<Q>> {
        let d = self.0.degree;
        if a.iter().all(Zero::is_zero) {
            return Err(Error::DivisionByZero);
        }
        if d == 1 {
            return Ok(vec![a[0].recip()]);
        }
        // column j = a·θ^j
        let mut cols = Vec::with_capacity(d);
        let mut basis = vec![Q::zero(); d];
        for j in 0..d {
            basis.iter_mut().for_each(|x| *x = Q::zero());
            basis[j] = Q::one();
            cols.push(self.mul_real(a, &basis));
        }
        let mut aug: Vec<Vec<Q>> = (0..d)
            .map(|r| {
                let mut row: Vec<Q> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { Q::one() } else { Q::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !aug[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..d {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=d {
                        let t = &f * &aug[col][c];
                        aug[r][c] -= t;
                    }
                }
            }
        }
        Ok(aug.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
    }

    /// Parses an element written as a sum of terms such as `3/2`, `-theta^2`,
    /// `1/2*i*theta` or `i`.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let src = s.trim();
        if src.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut total = self.zero();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in src.chars() {
            if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('*') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        for (neg, term) in terms {
            let t = self.parse_term(term.trim(), src)?;
            total = if neg { &total - &t } else { &total + &t };
        }
        Ok(total)
    }

    fn parse_term(&self, term: &str, src: &str) -> Result<FieldElement> {
        let bad = || Error::Parse(format!("cannot parse field element {src:?}"));
        if term.is_empty() {
            return Err(bad());
        }
        let gen_name = &self.0.spec.generator;
        let mut acc = self.one();
        for factor in term.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                return Err(bad());
            }
            let val = if f == "i" {
                self.i()?
            } else if f == gen_name {
                self.gen()
            } else if let Some(exp) = f.strip_prefix(gen_name.as_str()).and_then(|r| r.strip_prefix('^')) {
                let k: u32 = exp.trim().parse().map_err(|_| bad())?;
                self.gen().pow(k)
            } else {
                self.from_q(parse_rational(f).map_err(|_| bad())?)
            };
            acc = &acc * &val;
        }
        Ok(acc)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec.name)
    }
}

/// An element of K or K(i).
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    c: Vec<Q>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (real part, imaginary part) coordinates; deterministic, not an order field.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    fn d(&self) -> usize {
        self.field.0.degree
    }

    /// The element is rational (lies in Q).
    pub fn as_rational(&self) -> Option<Q> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        let d = self.d();
        self.c[d..].iter().all(Zero::is_zero)
    }

    pub fn re(&self) -> FieldElement {
        let d = self.d();
        let mut e = self.field.zero();
        e.c[..d].clone_from_slice(&self.c[..d]);
        e
    }

    pub fn im(&self) -> FieldElement {
        let d = self.d();
        let mut e = self.field.zero();
        if self.c.len() > d {
            e.c[..d].clone_from_slice(&self.c[d..]);
        }
        e
    }

    pub fn conj(&self) -> FieldElement {
        let d = self.d();
        let mut e = self.clone();
        for x in e.c[d..].iter_mut() {
            *x = -x.clone();
        }
        e
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Self) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let d = self.d();
        let f = &self.field;
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !f.has_i() || self.is_real() {
            let r = f.inv_real(&self.c[..d])?;
            let mut e = f.zero();
            e.c[..d].clone_from_slice(&r);
            return Ok(e);
        }
        // (a+ib)^{-1} = (a-ib)/(a²+b²); a²+b² ≠ 0 because i ∉ K
        let (a, b) = (&self.c[..d], &self.c[d..]);
        let mut n = f.mul_real(a, a);
        for (x, y) in n.iter_mut().zip(f.mul_real(b, b)) {
            *x += y;
        }
        let ninv = f.inv_real(&n)?;
        let mut e = f.zero();
        e.c[..d].clone_from_slice(&f.mul_real(a, &ninv));
        let im = f.mul_real(b, &ninv);
        for (x, y) in e.c[d..].iter_mut().zip(im) {
            *x = -y;
        }
        Ok(e)
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, x: &Q) -> FieldElement {
        FieldElement { field: self.field.clone(), c: self.c.iter().map(|c| c * x).collect() }
    }

    /// Numeric value under the real embedding θ ↦ `theta`.
    pub fn to_complex(&self, theta: f64) -> num_complex::Complex64 {
        let d = self.d();
        let eval =
            |cs: &[Q]| -> f64 { cs.iter().rev().fold(0.0, |acc, c| acc * theta + c.to_f64().unwrap_or(f64::NAN)) };
        let re = eval(&self.c[..d]);
        let im = if self.c.len() > d { eval(&self.c[d..]) } else { 0.0 };
        num_complex::Complex64::new(re, im)
    }
}

impl<'a> std::ops::Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.field == o.field, "field mismatch");
        FieldElement { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> std::ops::Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.field == o.field, "field mismatch");
        FieldElement { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> std::ops::Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.field == o.field, "field mismatch");
        let f = &self.field;
        let d = f.0.degree;
        if d == 1 {
            if !f.has_i() {
                return FieldElement { field: f.clone(), c: vec![&self.c[0] * &o.c[0]] };
            }
            let (a, b, c, e) = (&self.c[0], &self.c[1], &o.c[0], &o.c[1]);
            let re = if b.is_zero() || e.is_zero() { a * c } else { a * c - b * e };
            let im = match (b.is_zero(), e.is_zero()) {
                (true, true) => Q::zero(),
                (true, false) => a * e,
                (false, true) => b * c,
                (false, false) => a * e + b * c,
            };
            return FieldElement { field: f.clone(), c: vec![re, im] };
        }
        if !f.has_i() {
            return FieldElement { field: f.clone(), c: f.mul_real(&self.c, &o.c) };
        }
        let (a, b) = (&self.c[..d], &self.c[d..]);
        let (c, e) = (&o.c[..d], &o.c[d..]);
        let ac = f.mul_real(a, c);
        let be = f.mul_real(b, e);
        let ae = f.mul_real(a, e);
        let bc = f.mul_real(b, c);
        let mut out = Vec::with_capacity(2 * d);
        out.extend(ac.iter().zip(&be).map(|(x, y)| x - y));
        out.extend(ae.iter().zip(&bc).map(|(x, y)| x + y));
        FieldElement { field: f.clone(), c: out }
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d();
        let g = &self.field.0.spec.generator;
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (idx, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k, imag) = if idx < d { (idx, false) } else { (idx - d, true) };
            let mut sym: Vec<String> = Vec::new();
            if imag {
                sym.push("i".into());
            }
            match k {
                0 => {}
                1 => sym.push(g.clone()),
                _ => sym.push(format!("{g}^{k}")),
            }
            let mag = c.abs();
            let body = if sym.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                sym.join("*")
            } else {
                format!("{}*{}", fmt_rational(&mag), sym.join("*"))
            };
            parts.push((c.is_negative(), body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (n, (neg, body)) in parts.iter().enumerate() {
            match (n, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Monic integer polynomial `y^d + …` with the same roots scaled by `l`.
fn scaled_integer_poly(m: &[Q]) -> (Vec<BigInt>, BigInt) {
    let d = m.len() - 1;
    let mut l = BigInt::one();
    for c in m {
        l = l.lcm(c.denom());
    }
    // m(y/l)·l^d has integer coefficients and is monic in y
    let mut out = Vec::with_capacity(d + 1);
    let mut lp = BigInt::one();
    let mut powers = vec![BigInt::one(); d + 1];
    for p in powers.iter_mut().rev() {
        *p = lp.clone();
        lp *= &l;
    }
    for (k, c) in m.iter().enumerate() {
        let v = c * Q::from_integer(powers[k].clone());
        debug_assert!(v.is_integer());
        out.push(v.to_integer());
    }
    (out, l)
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let nu = n.to_u64()?;
    if nu > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= nu {
        if nu % k == 0 {
            out.push(BigInt::from(k));
            if k * k != nu {
                out.push(BigInt::from(nu / k));
            }
        }
        k += 1;
    }
    Some(out)
}

fn has_integer_root(p: &[BigInt], warnings: &mut Vec<String>) -> bool {
    if p[0].is_zero() {
        return true;
    }
    match divisors(&p[0], 1 << 40) {
        Some(ds) => ds.iter().any(|t| eval_int(p, t).is_zero() || eval_int(p, &-t).is_zero()),
        None => {
            warnings.push("constant term too large for the rational root test".into());
            false
        }
    }
}

/// Search for a monic integer quadratic factor y² + b y + c of a monic quartic.
fn has_quadratic_factor(p: &[BigInt], warnings: &mut Vec<String>) -> bool {
    let Some(cs) = divisors(&p[0], 1 << 24) else {
        warnings.push("quartic constant term too large for the quadratic factor search".into());
        return false;
    };
    let c_candidates: Vec<BigInt> = cs.iter().flat_map(|c| [c.clone(), -c]).collect();
    // y⁴+a3y³+a2y²+a1y+a0 = (y²+by+c)(y²+ey+f): e = a3-b, f = a0/c,
    // a2 = c + f + b e, a1 = b f + c e
    for c in &c_candidates {
        if !(&p[0] % c).is_zero() {
            continue;
        }
        let f = &p[0] / c;
        // b e = a2 - c - f with e = a3 - b  ⇒  b² - a3 b + (a2 - c - f) = 0
        let k = &p[2] - c - &f;
        let disc = &p[3] * &p[3] - BigInt::from(4) * &k;
        if disc.is_negative() {
            continue;
        }
        let s = disc.sqrt();
        if &s * &s != disc {
            continue;
        }
        for sign in [1i32, -1] {
            let num = &p[3] + BigInt::from(sign) * &s;
            if !num.is_even() {
                continue;
            }
            let b = num / 2;
            let e = &p[3] - &b;
            if &b * &f + c * &e == p[1] {
                return true;
            }
        }
    }
    false
}

fn check_irreducible(m: &[Q], warnings: &mut Vec<String>) -> Result<()> {
    let d = m.len() - 1;
    if d == 1 {
        return Ok(());
    }
    let (p, _) = scaled_integer_poly(m);
    if has_integer_root(&p, warnings) {
        return Err(Error::InvalidField("minimal polynomial has a rational root".into()));
    }
    match d {
        2 | 3 => Ok(()),
        4 => {
            if has_quadratic_factor(&p, warnings) {
                Err(Error::InvalidField("minimal polynomial has a quadratic factor".into()))
            } else {
                Ok(())
            }
        }
        _ => {
            let field_q = Field::rationals();
            let poly: Vec<FieldElement> = m.iter().map(|c| field_q.from_q(c.clone())).collect();
            let sq = crate::poly::Poly::new(poly);
            if sq.gcd(&sq.derivative()).degree() > 0 {
                return Err(Error::InvalidField("minimal polynomial is not squarefree".into()));
            }
            warnings.push(format!(
                "irreducibility of a degree-{d} minimal polynomial is not certified (squarefree check only)"
            ));
            Ok(())
        }
    }
}

/// i ∈ K iff x² + 1 has a root in K; decided exactly for d ≤ 2 and odd d.
fn check_i_not_in_field(m: &[Q], warnings: &mut Vec<String>) -> Result<()> {
    let d = m.len() - 1;
    if d % 2 == 1 {
        return Ok(());
    }
    if d == 2 {
        // K = Q(√D), D = m1² - 4 m0; i ∈ K iff -D is a rational square
        let disc = &m[1] * &m[1] - q(4) * &m[0];
        let neg = -disc;
        if neg.is_positive() {
            let (n, dd) = (neg.numer() * neg.denom(), neg.denom() * neg.denom());
            let s = n.sqrt();
            if &s * &s == n && dd.sqrt().pow(2) == dd {
                return Err(Error::InvalidField("field already contains i".into()));
            }
        }
        return Ok(());
    }
    warnings.push(format!("absence of i in a degree-{d} field is assumed, not certified"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn sqrt2() -> Field {
        Field::new(FieldSpec {
            name: "Q(sqrt2)".into(),
            min_poly: vec![q(-2), q(0), q(1)],
            generator: "theta".into(),
            embedding_hint: Some("theta > 0".into()),
            i_adjoined: true,
        })
        .unwrap()
    }

    #[test]
    fn theta_squared_reduces() {
        let k = sqrt2();
        let t = k.gen();
        assert_eq!(&t * &t, k.from_int(2));
    }

    #[test]
    fn division_by_self_is_one() {
        let k = sqrt2();
        let a = &k.one() + &k.gen();
        assert!(a.try_div(&a).unwrap().is_one());
        let z = &a + &(&k.i().unwrap() * &k.from_int(3));
        assert!((&z * &z.inv().unwrap()).is_one());
    }

    #[test]
    fn rational_sum() {
        let k = Field::rationals();
        let s = &k.from_q(qf(1, 3)) + &k.from_q(qf(1, 6));
        assert_eq!(s, k.from_q(qf(1, 2)));
    }

    #[test]
    fn errors() {
        let k = Field::rationals();
        assert_eq!(k.one().try_div(&k.zero()), Err(Error::DivisionByZero));
        assert_eq!(k.one().try_add(&sqrt2().one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn rejects_reducible_and_i_containing_fields() {
        let mk = |m: Vec<Q>, i| Field::new(FieldSpec { min_poly: m, i_adjoined: i, ..FieldSpec::rationals() });
        assert!(mk(vec![q(-4), q(0), q(1)], false).is_err());
        assert!(mk(vec![q(1), q(0), q(1)], true).is_err());
        assert!(mk(vec![q(1), q(0), q(1)], false).is_ok());
        // x⁴ + 4 = (x² + 2x + 2)(x² − 2x + 2)
        assert!(mk(vec![q(4), q(0), q(0), q(0), q(1)], false).is_err());
        assert!(mk(vec![q(-2), q(0), q(0), q(0), q(1)], false).is_ok());
        assert!(mk(vec![q(1), q(2)], false).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let k = sqrt2();
        for s in ["0", "3/2", "-theta", "1 + theta", "1/2*i*theta - 3", "-i"] {
            let e = k.parse(s).unwrap();
            assert_eq!(k.parse(&e.to_string()).unwrap(), e, "{s}");
        }
        assert_eq!(k.parse("theta^2").unwrap(), k.from_int(2));
        assert_eq!(k.parse("-2*-1").unwrap(), k.from_int(2));
        assert!(k.parse("theta +").is_err());
        assert!(k.parse("x").is_err());
    }

    #[test]
    fn conjugation() {
        let k = Field::gaussian_rationals();
        let z = k.parse("2 + 3*i").unwrap();
        assert_eq!(&z * &z.conj(), k.from_int(13));
        assert!(z.im() == k.from_int(3));
    }
}
