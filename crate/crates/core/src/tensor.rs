//! Sparse tensors over a graded basis, with Koszul-signed slot operations.

use crate::error::{Error, Result};
use crate::grading::GradedBasis;
use crate::series::TruncatedSeries;
use std::collections::BTreeMap;

/// Sparse element of V^{⊗k} for V spanned by a graded basis. Keys are index
/// tuples, values are truncated ℏ-series; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTensor {
    pub arity: usize,
    /// Dimension of the underlying basis; used for compatibility checks.
    pub dim: usize,
    entries: BTreeMap<Vec<usize>, TruncatedSeries>,
}

impl SparseTensor {
    pub fn zero(arity: usize, dim: usize) -> Self {
        assert!(arity >= 1);
        Self {
            arity,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, idx: Vec<usize>, value: TruncatedSeries) -> Result<()> {
        if idx.len() != self.arity {
            return Err(Error::InvalidArgument(format!(
                "index tuple length {} does not match arity {}",
                idx.len(),
                self.arity
            )));
        }
        if idx.iter().any(|&i| i >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "index out of range for basis of dimension {}: {idx:?}",
                self.dim
            )));
        }
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
        Ok(())
    }

    pub fn add_to(&mut self, idx: Vec<usize>, value: &TruncatedSeries) -> Result<()> {
        let cur = self.entries.get(&idx).cloned();
        let new = match cur {
            Some(c) => &c + value,
            None => value.clone(),
        };
        self.insert(idx, new)
    }

    pub fn get(&self, idx: &[usize]) -> Option<&TruncatedSeries> {
        self.entries.get(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &TruncatedSeries)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &crate::scalar::Rational) -> Self {
        let mut out = Self::zero(self.arity, self.dim);
        for (k, v) in &self.entries {
            out.entries.insert(k.clone(), v.scale(c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity || self.dim != other.dim {
            return Err(Error::InvalidArgument("tensor shape mismatch".into()));
        }
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_to(k.clone(), v)?;
        }
        Ok(out)
    }

    /// Contract `slot` against an arity-1 functional given in the dual basis
    /// (component i = value on basis element i). Koszul sign: the functional
    /// moves past the slots before `slot`.
    pub fn contract(
        &self,
        basis: &GradedBasis,
        slot: usize,
        functional: &SparseTensor,
    ) -> Result<SparseTensor> {
        if slot >= self.arity {
            return Err(Error::InvalidArgument(format!(
                "slot {slot} out of range for arity {}",
                self.arity
            )));
        }
        if functional.arity != 1 {
            return Err(Error::InvalidArgument(
                "functional must have arity 1".into(),
            ));
        }
        if functional.dim != self.dim || basis.len() != self.dim {
            return Err(Error::InvalidArgument("basis mismatch".into()));
        }
        if self.arity == 1 {
            return Err(Error::InvalidArgument(
                "cannot contract arity-1 tensor to arity 0; pair directly instead".into(),
            ));
        }
        let mut out = SparseTensor::zero(self.arity - 1, self.dim);
        for (idx, val) in &self.entries {
            let Some(fv) = functional.get(&[idx[slot]]) else {
                continue;
            };
            let fpar = basis.parity(idx[slot]);
            let mut sign = 1i32;
            if fpar == 1 {
                for &i in idx.iter().take(slot) {
                    if basis.parity(i) == 1 {
                        sign = -sign;
                    }
                }
            }
            let mut rest: Vec<usize> = Vec::with_capacity(self.arity - 1);
            rest.extend_from_slice(&idx[..slot]);
            rest.extend_from_slice(&idx[slot + 1..]);
            let mut term = val * fv;
            if sign < 0 {
                term = -&term;
            }
            out.add_to(rest, &term)?;
        }
        Ok(out)
    }

    /// Graded flip of an arity-2 tensor: (a⊗b) ↦ (-1)^{|a||b|} b⊗a.
    pub fn flip2(&self, basis: &GradedBasis) -> Result<SparseTensor> {
        if self.arity != 2 {
            return Err(Error::InvalidArgument("flip2 requires arity 2".into()));
        }
        let mut out = SparseTensor::zero(2, self.dim);
        for (idx, val) in &self.entries {
            let sign = if basis.parity(idx[0]) == 1 && basis.parity(idx[1]) == 1 {
                -1
            } else {
                1
            };
            let term = if sign < 0 { -val } else { val.clone() };
            out.add_to(vec![idx[1], idx[0]], &term)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::BasisElement;
    

    fn basis2() -> GradedBasis {
        GradedBasis::new(vec![
            BasisElement::new("a", 1, 1),
            BasisElement::new("b", 1, 1),
        ])
        .unwrap()
    }

    fn one() -> TruncatedSeries {
        TruncatedSeries::one(3)
    }

    #[test]
    fn insert_then_remove_zero_is_identity() {
        let mut t = SparseTensor::zero(2, 2);
        let before = t.clone();
        t.insert(vec![0, 1], one()).unwrap();
        t.insert(vec![0, 1], TruncatedSeries::zero(3)).unwrap();
        assert_eq!(t, before);
        assert!(t.is_zero());
    }

    #[test]
    fn contract_zero_tensor() {
        let b = basis2();
        let t = SparseTensor::zero(2, 2);
        let mut f = SparseTensor::zero(1, 2);
        f.insert(vec![0], one()).unwrap();
        assert!(t.contract(&b, 0, &f).unwrap().is_zero());
    }

    #[test]
    fn flip_of_odd_odd_changes_sign() {
        let b = basis2();
        let mut t = SparseTensor::zero(2, 2);
        t.insert(vec![0, 1], one()).unwrap();
        let f = t.flip2(&b).unwrap();
        assert_eq!(f.get(&[1, 0]).unwrap(), &-&one());
        // double flip is the identity
        assert_eq!(f.flip2(&b).unwrap(), t);
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let b = basis2();
        let t = SparseTensor::zero(2, 3);
        let f = SparseTensor::zero(1, 2);
        assert!(t.contract(&b, 0, &f).is_err());
    }
}
