//! Jordan–Chevalley decomposition inside the base field.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{charpoly, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanPair {
    pub s: Matrix,
    pub n: Matrix,
}

/// Newton iteration `S ← S − g(S)·g'(S)⁻¹` against the squarefree part `g`
/// of the characteristic polynomial. Every iterate is a polynomial in `m`,
/// and the iteration converges in at most ⌈log₂ dim⌉ + 1 steps.
pub fn jordan_chevalley(m: &Matrix) -> Result<JordanPair> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let g = charpoly(m)?.squarefree();
    let dg = g.derivative();
    let mut s = m.clone();
    let max_steps = usize::BITS as usize;
    for _ in 0..max_steps {
        let gs = g.eval_matrix(&s);
        if gs.is_zero() {
            let n = m.sub(&s);
            let pair = JordanPair { s, n };
            check_pair(m, &pair)?;
            return Ok(pair);
        }
        let dgs = dg
            .eval_matrix(&s)
            .inverse()
            .map_err(|_| Error::Internal("g'(S) is singular during Jordan-Chevalley iteration".into()))?;
        s = s.sub(&gs.mul(&dgs));
    }
    Err(Error::Internal("Jordan-Chevalley iteration did not converge".into()))
}

fn check_pair(m: &Matrix, p: &JordanPair) -> Result<()> {
    if p.s.add(&p.n) != *m || !p.s.commutes_with(&p.n) || !p.n.is_nilpotent()? {
        return Err(Error::Internal("Jordan pair invariants violated".into()));
    }
    Ok(())
}

/// Squarefree part of the characteristic polynomial annihilates `m`.
pub fn is_semisimple(m: &Matrix) -> Result<bool> {
    let g: Poly = charpoly(m)?.squarefree();
    Ok(g.eval_matrix(m).is_zero())
}
