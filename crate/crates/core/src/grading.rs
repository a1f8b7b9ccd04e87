//! Graded bases and Koszul signs.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// A named basis vector with its cohomological degree and ℂ^×-weight.
/// Parity is degree mod 2 and drives every sign in the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64, weight: i64) -> Self {
        Self {
            name: name.into(),
            degree,
            weight,
        }
    }

    pub fn parity(&self) -> u8 {
        (self.degree.rem_euclid(2)) as u8
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == 1
    }
}

/// Ordered graded basis. The order is total and fixed; PBW normal forms and
/// sign computations depend on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    elements: Vec<BasisElement>,
    index: BTreeMap<String, usize>,
}

impl GradedBasis {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.name.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate basis name {:?}",
                    e.name
                )));
            }
        }
        Ok(Self { elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisElement> {
        self.elements.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.elements[i].degree
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.elements[i].weight
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.elements[i].parity()
    }
}

/// Koszul sign of applying `permutation` to homogeneous factors of the given
/// degrees: each transposition of adjacent odd-odd factors contributes -1.
///
/// `permutation[i] = j` means the factor originally in slot j ends up in
/// slot i (the permutation maps old positions to new).
pub fn koszul_sign(permutation: &[usize], degrees: &[i64]) -> Result<i32> {
    let k = permutation.len();
    if degrees.len() != k {
        return Err(Error::InvalidArgument(
            "permutation and degree list lengths differ".into(),
        ));
    }
    let mut seen = vec![false; k];
    for &p in permutation {
        if p >= k || seen[p] {
            return Err(Error::InvalidArgument(format!(
                "not a permutation of 0..{k}: {permutation:?}"
            )));
        }
        seen[p] = true;
    }
    // Count inversions among odd factors.
    let mut sign = 1i32;
    for i in 0..k {
        for j in (i + 1)..k {
            if permutation[i] > permutation[j]
                && degrees[permutation[i]].rem_euclid(2) == 1
                && degrees[permutation[j]].rem_euclid(2) == 1
            {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// Sign picked up when a homogeneous object of parity `a` moves past one of
/// parity `b`.
pub fn swap_sign(a: u8, b: u8) -> i32 {
    if a == 1 && b == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_plus_one() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 1, 1]).unwrap(), 1);
        assert_eq!(koszul_sign(&[0, 1], &[0, 7]).unwrap(), 1);
    }

    #[test]
    fn odd_odd_swap_is_minus_one() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]).unwrap(), 1);
    }

    #[test]
    fn three_cycle_of_odds_is_plus_one() {
        // cyclic rotation (0 1 2): two odd-odd transpositions
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 1]).unwrap(), 1);
        assert_eq!(koszul_sign(&[2, 0, 1], &[1, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn malformed_permutations_are_rejected() {
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
        assert!(koszul_sign(&[0, 5], &[1, 1]).is_err());
        assert!(koszul_sign(&[0, 1], &[1]).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let r = GradedBasis::new(vec![
            BasisElement::new("x", 0, 0),
            BasisElement::new("x", 1, 1),
        ]);
        assert!(r.is_err());
    }

    fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
        // (p after q): slot i receives q[p[i]]... we use the convention
        // permutation maps new slot -> old slot, so composition is p[i] = q∘p.
        p.iter().map(|&i| q[i]).collect()
    }

    proptest! {
        #[test]
        fn koszul_sign_is_multiplicative(
            degs in proptest::collection::vec(0i64..4, 5),
            seed in any::<u64>(),
        ) {
            use rand::prelude::*;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut p: Vec<usize> = (0..5).collect();
            let mut q: Vec<usize> = (0..5).collect();
            p.shuffle(&mut rng);
            q.shuffle(&mut rng);
            let pq = compose(&p, &q);
            // Degrees as seen after applying q first.
            let degs_q: Vec<i64> = q.iter().map(|&i| degs[i]).collect();
            let s_q = koszul_sign(&q, &degs).unwrap();
            let s_p = koszul_sign(&p, &degs_q).unwrap();
            let s_pq = koszul_sign(&pq, &degs).unwrap();
            prop_assert_eq!(s_pq, s_p * s_q);
        }
    }
}
