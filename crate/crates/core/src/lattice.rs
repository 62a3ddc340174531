//! Integer lattices in Z^r given by generating rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Field;
use crate::matrix::Matrix;
use crate::rational::Q;

pub type IntVec = Vec<BigInt>;

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Row echelon form by unimodular row operations restricted to the first
/// `pivot_cols` columns; the remaining columns ride along.
fn echelon(rows: &mut [IntVec], pivot_cols: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below r moves to r
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()).then(a.cmp(&b)))
            else {
                break;
            };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let qt = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &qt * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            // reduce entries above the pivot into [0, pivot)
            for i in 0..r {
                let qt = rows[i][c].div_floor(&rows[r][c]);
                if !qt.is_zero() {
                    let pivot_row = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &qt * y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Hermite normal form of the row lattice: nonzero rows, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[IntVec]) -> Vec<IntVec> {
    let Some(width) = rows.first().map(Vec::len) else { return Vec::new() };
    let mut m: Vec<IntVec> = rows.to_vec();
    let r = echelon(&mut m, width);
    m.truncate(r);
    m
}

/// Basis of `{x ∈ Z^n : A x = 0}` for `A` given by rows of length `n`.
pub fn integer_kernel(a: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = a.len();
    // row j of [Aᵀ | I_n]
    let mut aug: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut row: IntVec = a.iter().map(|ar| ar[j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelon(&mut aug, m);
    let ker: Vec<IntVec> = aug[rank..].iter().map(|row| row[m..].to_vec()).collect();
    hnf(&ker)
}

/// `(Q·L) ∩ Z^r`, in Hermite normal form.
pub fn saturate(rows: &[IntVec], r: usize) -> Vec<IntVec> {
    let nonzero: Vec<IntVec> = rows.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let orth = integer_kernel(&nonzero, r);
    if orth.is_empty() {
        return identity(r);
    }
    integer_kernel(&orth, r)
}

pub fn identity(r: usize) -> Vec<IntVec> {
    (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Rows `C` such that `K ∪ C` is a basis of Z^r, for saturated `K`.
///
/// Row-reduce `[Kᵀ | I]` to `T·Kᵀ = [H; 0]`; the columns of `T⁻¹` form a
/// basis whose first `k` members span `K`, so the rest complement it.
pub fn unimodular_complement(k: &[IntVec], r: usize) -> Vec<IntVec> {
    let kk = k.len();
    let mut aug: Vec<IntVec> = (0..r)
        .map(|j| {
            let mut row: IntVec = k.iter().map(|kr| kr[j].clone()).collect();
            row.extend((0..r).map(|c| if c == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    echelon(&mut aug, kk);
    let fq = Field::rationals();
    let t = Matrix::from_fn(&fq, r, r, |i, j| fq.from_q(Q::from_integer(aug[i][kk + j].clone())));
    let w = t.inverse().expect("unimodular transform");
    (kk..r).map(|c| (0..r).map(|i| w.get(i, c).as_rational().expect("rational").to_integer()).collect()).collect()
}

pub fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Clears denominators of a rational vector; returns `(integer vector, lcm)`.
pub fn clear_denominators(v: &[Q]) -> (IntVec, BigInt) {
    let l = crate::rational::lcm_denominators(v);
    let out = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    (out, l)
}

/// Index of `sub` in `sup` when both have the same rank: |det| ratio of
/// Gram-free HNF pivots.
pub fn index_in(sub: &[IntVec], sup: &[IntVec]) -> Option<BigInt> {
    let hs = hnf(sub);
    let hp = hnf(sup);
    if hs.len() != hp.len() {
        return None;
    }
    let prod = |h: &[IntVec]| -> BigInt {
        h.iter().map(|row| row.iter().find(|x| !x.is_zero()).cloned().unwrap_or_default()).product()
    };
    let (a, b) = (prod(&hs), prod(&hp));
    if b.is_zero() || !(&a % &b).is_zero() {
        return None;
    }
    Some(a / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_canonical() {
        let h = hnf(&[v(&[2, 4]), v(&[3, 1])]);
        assert_eq!(h, vec![v(&[1, 7]), v(&[0, 10])]);
        assert!(hnf(&[v(&[0, 0])]).is_empty());
    }

    #[test]
    fn kernel_and_saturation() {
        let k = integer_kernel(&[v(&[1, 2, 3])], 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            let dot: BigInt = x.iter().zip(&[1, 2, 3]).map(|(a, &b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(saturate(&[v(&[2])], 1), vec![v(&[1])]);
        assert_eq!(saturate(&[v(&[2, 4])], 2), vec![v(&[1, 2])]);
        assert_eq!(saturate(&[], 2), Vec::<IntVec>::new());
        assert_eq!(index_in(&[v(&[2, 4])], &[v(&[1, 2])]), Some(BigInt::from(2)));
    }

    #[test]
    fn complement_is_unimodular() {
        let k = vec![v(&[2, 3])];
        let c = unimodular_complement(&k, 2);
        assert_eq!(c.len(), 1);
        let det = &k[0][0] * &c[0][1] - &k[0][1] * &c[0][0];
        assert_eq!(det.abs(), BigInt::one());
    }
}
