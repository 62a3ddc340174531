//! Simultaneous diagonalisation of commuting semisimple operators.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::jordan::is_semisimple;
use crate::matrix::Matrix;
use crate::poly::charpoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpace {
    /// Eigenvalue of each operator of the family.
    pub weight: Vec<FieldElement>,
    pub basis: Vec<Vec<FieldElement>>,
}

/// Splits the ambient space of dimension `dim` into joint eigenspaces.
///
/// Weight spaces are returned in lexicographic order of their weights.
pub fn joint_weight_decomposition(field: &Field, dim: usize, family: &[Matrix]) -> Result<Vec<WeightSpace>> {
    for (i, m) in family.iter().enumerate() {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        if m.rows() != dim {
            return Err(Error::DimensionMismatch(format!("operator {i} has size {}, expected {dim}", m.rows())));
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !family[i].commutes_with(&family[j]) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    let id = Matrix::identity(field, dim);
    let mut spaces = vec![WeightSpace { weight: Vec::new(), basis: (0..dim).map(|j| id.column(j)).collect() }];
    for (idx, m) in family.iter().enumerate() {
        if !is_semisimple(m)? {
            return Err(Error::NotSemisimple(idx));
        }
        let (eigen, rest) = charpoly(m)?.roots();
        if rest.degree() > 0 {
            return Err(Error::EigenvalueOutsideField { factor: rest.to_string(), field: field.to_string() });
        }
        let mut next = Vec::new();
        for sp in &spaces {
            let b = Matrix::from_columns(field, dim, &sp.basis);
            for lambda in &eigen {
                let shifted = m.sub(&id.scale(lambda)).mul(&b);
                let ker = shifted.kernel();
                if ker.is_empty() {
                    continue;
                }
                let mut weight = sp.weight.clone();
                weight.push(lambda.clone());
                next.push(WeightSpace { weight, basis: ker.iter().map(|c| b.mul_vec(c)).collect() });
            }
        }
        spaces = next;
    }
    let total: usize = spaces.iter().map(|s| s.basis.len()).sum();
    if total != dim {
        return Err(Error::Internal(format!("weight spaces span {total} of {dim} dimensions")));
    }
    spaces.sort_by(|a, b| a.weight.cmp(&b.weight));
    Ok(spaces)
}
