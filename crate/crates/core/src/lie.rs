//! Graded Lie algebras from structure constants, the semidirect product
//! 𝔥 = 𝔤 ⋉ V[-1], and its double 𝔡 = 𝔥 ⋉ 𝔥*[-2] with the canonical pairing.

use crate::error::{Error, Result};
use crate::grading::{BasisElement, GradedBasis};
use crate::linalg::QMatrix;
use crate::scalar::{rat_to_string, Rational};
use num::Zero;
use std::collections::BTreeMap;

/// Which block of the double a basis index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Base,     // 𝔤
    PsiPlus,  // V[-1]
    PsiMinus, // V*[-1]
    Dual,     // 𝔤*[-2]
}

/// Graded Lie algebra presented by a basis and rational structure constants.
/// Brackets are stored for every ordered pair with a nonzero value.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub basis: GradedBasis,
    pub sectors: Vec<Sector>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl LieAlgebraData {
    pub fn new(basis: GradedBasis, sectors: Vec<Sector>) -> Self {
        assert_eq!(basis.len(), sectors.len());
        Self {
            basis,
            sectors,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Set [e_a, e_b] and fill [e_b, e_a] by graded antisymmetry.
    pub fn set_bracket(&mut self, a: usize, b: usize, value: Vec<(usize, Rational)>) {
        let value: Vec<(usize, Rational)> =
            value.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if a == b {
            // [e,e] for even e must be 0; for odd e it may be nonzero.
            if !value.is_empty() {
                self.brackets.insert((a, a), value);
            } else {
                self.brackets.remove(&(a, a));
            }
            return;
        }
        let sign = if self.basis.parity(a) == 1 && self.basis.parity(b) == 1 {
            Rational::from_integer(1.into())
        } else {
            Rational::from_integer((-1).into())
        };
        let rev: Vec<(usize, Rational)> = value.iter().map(|(i, c)| (*i, c * &sign)).collect();
        if value.is_empty() {
            self.brackets.remove(&(a, b));
            self.brackets.remove(&(b, a));
        } else {
            self.brackets.insert((a, b), value);
            self.brackets.insert((b, a), rev);
        }
    }

    /// Overwrite a single ordered bracket without touching the reverse.
    /// Only used to build deliberately corrupted fixtures.
    pub fn set_bracket_oriented(&mut self, a: usize, b: usize, value: Vec<(usize, Rational)>) {
        let value: Vec<(usize, Rational)> =
            value.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if value.is_empty() {
            self.brackets.remove(&(a, b));
        } else {
            self.brackets.insert((a, b), value);
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.brackets
            .get(&(a, b))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Bracket of linear combinations.
    pub fn bracket_vec(
        &self,
        x: &[(usize, Rational)],
        y: &[(usize, Rational)],
    ) -> Vec<(usize, Rational)> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, f) in self.bracket(*a, *b) {
                    let add = ca * cb * f;
                    *acc.entry(*c).or_insert_with(Rational::zero) += add;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Structure constant f_{ab}^c.
    pub fn f(&self, a: usize, b: usize, c: usize) -> Rational {
        self.bracket(a, b)
            .iter()
            .find(|(i, _)| *i == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Graded antisymmetry and degree/weight additivity of every stored
    /// structure constant.
    pub fn validate_gradings(&self) -> Result<()> {
        for (&(a, b), val) in &self.brackets {
            for (c, coeff) in val {
                if coeff.is_zero() {
                    continue;
                }
                let d_ok =
                    self.basis.degree(*c) == self.basis.degree(a) + self.basis.degree(b);
                let w_ok =
                    self.basis.weight(*c) == self.basis.weight(a) + self.basis.weight(b);
                if !d_ok || !w_ok {
                    return Err(Error::InvariantViolation(format!(
                        "grading additivity fails at f_{{{},{}}}^{}",
                        self.basis.get(a).name,
                        self.basis.get(b).name,
                        self.basis.get(*c).name
                    )));
                }
            }
            let sign = if self.basis.parity(a) == 1 && self.basis.parity(b) == 1 {
                Rational::from_integer(1.into())
            } else {
                Rational::from_integer((-1).into())
            };
            for (c, coeff) in val {
                if self.f(b, a, *c) != coeff * &sign {
                    return Err(Error::InvariantViolation(format!(
                        "graded antisymmetry fails on ({}, {})",
                        self.basis.get(a).name,
                        self.basis.get(b).name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Matrices of a 𝔤-representation on V: `matrices[a]` is ρ(x_a), acting on
/// column vectors (x·e_j = Σ_i ρ(x)ⁱⱼ e_i).
#[derive(Clone, Debug)]
pub struct RepresentationData {
    pub dim_v: usize,
    pub matrices: Vec<QMatrix>,
}

impl RepresentationData {
    /// Check ρ([x_a,x_b]) = ρ(x_a)ρ(x_b) - ρ(x_b)ρ(x_a) against 𝔤's
    /// structure constants; reports the violating pair.
    pub fn validate(&self, g: &LieAlgebraData) -> Result<()> {
        if self.matrices.len() != g.dim() {
            return Err(Error::InvalidArgument(
                "one matrix per basis element of the base algebra is required".into(),
            ));
        }
        for m in &self.matrices {
            if m.rows != self.dim_v || m.cols != self.dim_v {
                return Err(Error::InvalidArgument("matrix shape mismatch".into()));
            }
        }
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let lhs = {
                    let mut acc = QMatrix::zeros(self.dim_v, self.dim_v);
                    for (c, f) in g.bracket(a, b) {
                        acc = acc.add(&self.matrices[*c].scale(f));
                    }
                    acc
                };
                let rhs = self.matrices[a]
                    .mul(&self.matrices[b])
                    .sub(&self.matrices[b].mul(&self.matrices[a]));
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "representation axiom fails on basis pair ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Graded symmetric bilinear form on the basis of 𝔡.
#[derive(Clone, Debug)]
pub struct BilinearFormData {
    pub gram: QMatrix,
}

impl BilinearFormData {
    pub fn pair(&self, a: usize, b: usize) -> Rational {
        self.gram[(a, b)].clone()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.gram.rows
    }

    /// κ([a,b],c) = κ(a,[b,c]) for all basis triples.
    pub fn check_invariance(&self, lie: &LieAlgebraData) -> Vec<(usize, usize, usize)> {
        let n = lie.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut lhs = Rational::zero();
                    for (i, f) in lie.bracket(a, b) {
                        lhs += f * &self.pair(*i, c);
                    }
                    let mut rhs = Rational::zero();
                    for (i, f) in lie.bracket(b, c) {
                        rhs += f * &self.pair(a, *i);
                    }
                    if lhs != rhs {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        bad
    }

    /// κ(a,b) = (-1)^{|a||b|} κ(b,a) and κ homogeneous of degree 2, weight 2.
    pub fn check_symmetry_and_grading(&self, lie: &LieAlgebraData) -> Result<()> {
        let n = lie.dim();
        for a in 0..n {
            for b in 0..n {
                let s = if lie.basis.parity(a) == 1 && lie.basis.parity(b) == 1 {
                    -self.pair(b, a)
                } else {
                    self.pair(b, a)
                };
                if self.pair(a, b) != s {
                    return Err(Error::InvariantViolation(format!(
                        "graded symmetry of the pairing fails at ({a}, {b})"
                    )));
                }
                if !self.pair(a, b).is_zero()
                    && (lie.basis.degree(a) + lie.basis.degree(b) != 2
                        || lie.basis.weight(a) + lie.basis.weight(b) != 2)
                {
                    return Err(Error::InvariantViolation(format!(
                        "pairing not homogeneous of bidegree (2,2) at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// 𝔥 = 𝔤 ⋉ V[-1] together with the data needed to double it.
#[derive(Clone, Debug)]
pub struct SemidirectData {
    pub lie: LieAlgebraData,
    pub g: LieAlgebraData,
    pub rho: RepresentationData,
    pub dim_g: usize,
    pub dim_v: usize,
}

/// The double 𝔡 = 𝔥 ⋉ 𝔥*[-2] with its canonical invariant pairing.
#[derive(Clone, Debug)]
pub struct DoubleData {
    pub lie: LieAlgebraData,
    pub kappa: BilinearFormData,
    pub dim_g: usize,
    pub dim_v: usize,
    pub rho: RepresentationData,
    pub g: LieAlgebraData,
}

impl DoubleData {
    pub fn x(&self, a: usize) -> usize {
        a
    }
    pub fn psi_plus(&self, i: usize) -> usize {
        self.dim_g + i
    }
    pub fn psi_minus(&self, i: usize) -> usize {
        self.dim_g + self.dim_v + i
    }
    pub fn t(&self, a: usize) -> usize {
        self.dim_g + 2 * self.dim_v + a
    }
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }
    /// Dimension of 𝔥 = 𝔤 ⊕ V; its basis occupies the leading indices.
    pub fn dim_h(&self) -> usize {
        self.dim_g + self.dim_v
    }
    pub fn sector(&self, i: usize) -> Sector {
        self.lie.sectors[i]
    }
    /// Index of the dual partner under κ (x_a ↔ tᵃ, ψ₊ⁱ ↔ ψ₋,ᵢ).
    pub fn dual_index(&self, i: usize) -> usize {
        match self.sector(i) {
            Sector::Base => self.t(i),
            Sector::PsiPlus => self.psi_minus(i - self.dim_g),
            Sector::PsiMinus => self.psi_plus(i - self.dim_g - self.dim_v),
            Sector::Dual => self.x(i - self.dim_g - 2 * self.dim_v),
        }
    }
}

/// Build 𝔥 = 𝔤 ⋉ V[-1]: V sits in degree 1, weight 1, abelian, with
/// [x_a, ψ₊ʲ] = Σ_i ρ(x_a)ⁱⱼ ψ₊ⁱ.
pub fn build_h(g: &LieAlgebraData, rho: &RepresentationData) -> Result<SemidirectData> {
    for i in 0..g.dim() {
        if g.basis.degree(i) != 0 || g.basis.weight(i) != 0 {
            return Err(Error::InvalidArgument(
                "base algebra must be concentrated in degree 0 and weight 0".into(),
            ));
        }
    }
    g.validate_gradings()?;
    rho.validate(g)?;
    let mut elems: Vec<BasisElement> = g.basis.iter().cloned().collect();
    for i in 0..rho.dim_v {
        elems.push(BasisElement::new(format!("psi+{}", i + 1), 1, 1));
    }
    let basis = GradedBasis::new(elems)?;
    let mut sectors = vec![Sector::Base; g.dim()];
    sectors.extend(vec![Sector::PsiPlus; rho.dim_v]);
    let mut lie = LieAlgebraData::new(basis, sectors);
    for a in 0..g.dim() {
        for b in (a + 1)..g.dim() {
            lie.set_bracket(a, b, g.bracket(a, b).to_vec());
        }
        for j in 0..rho.dim_v {
            let col: Vec<(usize, Rational)> = (0..rho.dim_v)
                .map(|i| (g.dim() + i, rho.matrices[a][(i, j)].clone()))
                .collect();
            lie.set_bracket(a, g.dim() + j, col);
        }
    }
    Ok(SemidirectData {
        lie,
        g: g.clone(),
        rho: rho.clone(),
        dim_g: g.dim(),
        dim_v: rho.dim_v,
    })
}

/// Double 𝔥 into 𝔡 = 𝔥 ⋉ 𝔥*[-2]. The dual block carries the graded
/// coadjoint action; κ is the dual pairing extended graded-symmetrically.
pub fn build_double(h: &SemidirectData) -> Result<DoubleData> {
    let (ng, nv) = (h.dim_g, h.dim_v);
    let mut elems: Vec<BasisElement> = h.lie.basis.iter().cloned().collect();
    for i in 0..nv {
        elems.push(BasisElement::new(format!("psi-{}", i + 1), 1, 1));
    }
    for a in 0..ng {
        elems.push(BasisElement::new(
            format!("t^{}", h.g.basis.get(a).name),
            2,
            2,
        ));
    }
    let basis = GradedBasis::new(elems)?;
    let mut sectors = h.lie.sectors.clone();
    sectors.extend(vec![Sector::PsiMinus; nv]);
    sectors.extend(vec![Sector::Dual; ng]);
    let mut lie = LieAlgebraData::new(basis, sectors);

    let x = |a: usize| a;
    let pp = |i: usize| ng + i;
    let pm = |i: usize| ng + nv + i;
    let t = |a: usize| ng + 2 * nv + a;

    // 𝔥-sector brackets carry over.
    for a in 0..ng {
        for b in (a + 1)..ng {
            lie.set_bracket(x(a), x(b), h.lie.bracket(a, b).to_vec());
        }
        for j in 0..nv {
            lie.set_bracket(x(a), pp(j), h.lie.bracket(a, ng + j).to_vec());
        }
    }
    // [x_a, ψ₋,ᵢ] = -Σ_j ρ(x_a)ⁱⱼ ψ₋,ⱼ   (dual action on V*)
    for a in 0..ng {
        for i in 0..nv {
            let val: Vec<(usize, Rational)> = (0..nv)
                .map(|j| (pm(j), -h.rho.matrices[a][(i, j)].clone()))
                .collect();
            lie.set_bracket(x(a), pm(i), val);
        }
    }
    // [x_a, tᵇ] = -Σ_c f_{ac}ᵇ tᶜ   (coadjoint action on 𝔤*)
    for a in 0..ng {
        for b in 0..ng {
            let val: Vec<(usize, Rational)> = (0..ng)
                .map(|c| (t(c), -h.g.f(a, c, b)))
                .collect();
            lie.set_bracket(x(a), t(b), val);
        }
    }
    // [ψ₊ⁱ, ψ₋,ⱼ] = -Σ_a ρ(x_a)ʲᵢ tᵃ
    for i in 0..nv {
        for j in 0..nv {
            let val: Vec<(usize, Rational)> = (0..ng)
                .map(|a| (t(a), -h.rho.matrices[a][(j, i)].clone()))
                .collect();
            lie.set_bracket(pp(i), pm(j), val);
        }
    }

    // κ: dual pairing, graded symmetric.
    let n = lie.dim();
    let mut gram = QMatrix::zeros(n, n);
    for a in 0..ng {
        gram[(x(a), t(a))] = Rational::from_integer(1.into());
        gram[(t(a), x(a))] = Rational::from_integer(1.into());
    }
    // Functional-applied-to-vector is the +1 direction; the odd-odd pair
    // picks up the Koszul sign on the other side.
    for i in 0..nv {
        gram[(pm(i), pp(i))] = Rational::from_integer(1.into());
        gram[(pp(i), pm(i))] = Rational::from_integer((-1).into());
    }

    let dd = DoubleData {
        lie,
        kappa: BilinearFormData { gram },
        dim_g: ng,
        dim_v: nv,
        rho: h.rho.clone(),
        g: h.g.clone(),
    };
    dd.lie.validate_gradings()?;
    Ok(dd)
}

/// Report from an exhaustive graded-Jacobi check.
#[derive(Clone, Debug)]
pub struct JacobiReport {
    pub violations: Vec<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]] over
/// all basis triples.
pub fn check_jacobi(lie: &LieAlgebraData) -> JacobiReport {
    let n = lie.dim();
    let mut violations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                let mut accum = |terms: Vec<(usize, Rational)>, sign: i32| {
                    for (i, v) in terms {
                        let v = if sign < 0 { -v } else { v };
                        *acc.entry(i).or_insert_with(Rational::zero) += v;
                    }
                };
                accum(
                    lie.bracket_vec(&[(a, Rational::from_integer(1.into()))], lie.bracket(b, c)),
                    1,
                );
                accum(
                    lie.bracket_vec(lie.bracket(a, b), &[(c, Rational::from_integer(1.into()))]),
                    -1,
                );
                let s = if lie.basis.parity(a) == 1 && lie.basis.parity(b) == 1 {
                    -1
                } else {
                    1
                };
                accum(
                    lie.bracket_vec(&[(b, Rational::from_integer(1.into()))], lie.bracket(a, c)),
                    -s,
                );
                if acc.values().any(|v| !v.is_zero()) {
                    violations.push((a, b, c));
                }
            }
        }
    }
    JacobiReport { violations }
}

/// The Lie subalgebra 𝔡⁺ spanned by the positive-degree generators
/// {ψ₊, ψ₋, t}, with the same basis order. Also checks 𝔡 = 𝔤 ⋉ 𝔡⁺.
pub fn positive_subalgebra(dd: &DoubleData) -> Result<LieAlgebraData> {
    let n = dd.dim();
    let offset = dd.dim_g;
    // Closure check: brackets of positive-degree elements stay positive,
    // and [𝔤, 𝔡⁺] ⊆ 𝔡⁺.
    for a in 0..n {
        for b in 0..n {
            let target_positive = dd.lie.basis.degree(a) > 0 || dd.lie.basis.degree(b) > 0;
            if target_positive {
                for (c, f) in dd.lie.bracket(a, b) {
                    if !f.is_zero() && dd.lie.basis.degree(*c) == 0 {
                        return Err(Error::InvariantViolation(
                            "positive part is not an ideal complement".into(),
                        ));
                    }
                }
            }
        }
    }
    let elems: Vec<BasisElement> = (offset..n).map(|i| dd.lie.basis.get(i).clone()).collect();
    let basis = GradedBasis::new(elems)?;
    let sectors = dd.lie.sectors[offset..].to_vec();
    let mut sub = LieAlgebraData::new(basis, sectors);
    for a in offset..n {
        for b in offset..n {
            let val: Vec<(usize, Rational)> = dd
                .lie
                .bracket(a, b)
                .iter()
                .map(|(c, f)| (*c - offset, f.clone()))
                .collect();
            sub.set_bracket_oriented(a - offset, b - offset, val);
        }
    }
    sub.validate_gradings()?;
    Ok(sub)
}

/// Pretty-print a bracket value for diagnostics.
pub fn format_bracket_value(lie: &LieAlgebraData, value: &[(usize, Rational)]) -> String {
    if value.is_empty() {
        return "0".into();
    }
    value
        .iter()
        .map(|(i, c)| format!("{}*{}", rat_to_string(c), lie.basis.get(*i).name))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn trivial_g_and_one_dim_v_gives_abelian_h() {
        let g = fixtures::zero_algebra();
        let rho = RepresentationData {
            dim_v: 1,
            matrices: vec![],
        };
        let h = build_h(&g, &rho).unwrap();
        assert_eq!(h.lie.dim(), 1);
        assert!(h.lie.bracket(0, 0).is_empty());
    }

    #[test]
    fn sqed1_h_relations() {
        let h = fixtures::sqed1_h();
        // [x, psi+] = psi+
        assert_eq!(h.lie.bracket(0, 1), &[(1, rat_int(1))]);
        // graded antisymmetry: [psi+, x] = -psi+
        assert_eq!(h.lie.bracket(1, 0), &[(1, rat_int(-1))]);
    }

    #[test]
    fn sl2_h_matrix_action() {
        let h = fixtures::sl2_fund_h();
        // basis: e,h,f,psi+1,psi+2; [e, psi+2] = psi+1
        let e = 0;
        let psi2 = 4;
        assert_eq!(h.lie.bracket(e, psi2), &[(3, rat_int(1))]);
        // [h, psi+1] = psi+1
        assert_eq!(h.lie.bracket(1, 3), &[(3, rat_int(1))]);
    }

    #[test]
    fn sqed1_double_relations() {
        let dd = fixtures::sqed1_double();
        let (x, pp, pm, t) = (dd.x(0), dd.psi_plus(0), dd.psi_minus(0), dd.t(0));
        assert_eq!(dd.lie.bracket(x, pp), &[(pp, rat_int(1))]);
        assert_eq!(dd.lie.bracket(x, pm), &[(pm, rat_int(-1))]);
        // with the consistent sign convention [psi+, psi-] = -t
        assert_eq!(dd.lie.bracket(pp, pm), &[(t, rat_int(-1))]);
        // t central
        for i in 0..dd.dim() {
            assert!(dd.lie.bracket(t, i).is_empty());
        }
    }

    #[test]
    fn abelian_g_no_v_double_is_abelian() {
        let g = fixtures::abelian_algebra(3);
        let rho = RepresentationData {
            dim_v: 0,
            matrices: vec![QMatrix::zeros(0, 0); 3],
        };
        let dd = build_double(&build_h(&g, &rho).unwrap()).unwrap();
        assert_eq!(dd.dim(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert!(dd.lie.bracket(a, b).is_empty());
            }
        }
    }

    #[test]
    fn jacobi_passes_on_fixtures() {
        for dd in fixtures::all_doubles() {
            let rep = check_jacobi(&dd.lie);
            assert!(rep.passed(), "jacobi failed: {:?}", rep.violations);
        }
    }

    #[test]
    fn jacobi_fails_on_corrupted_sqed1() {
        let mut dd = fixtures::sqed1_double();
        // corrupt: [x, t] := t
        let (x, t) = (dd.x(0), dd.t(0));
        dd.lie.set_bracket(x, t, vec![(t, rat_int(1))]);
        let rep = check_jacobi(&dd.lie);
        assert!(!rep.passed());
        // the spec pins the failing triple (psi+, psi-, x)
        let (pp, pm) = (1, 2);
        assert!(rep
            .violations
            .iter()
            .any(|&(a, b, c)| (a, b, c) == (pp, pm, x) || (a, b, c) == (pm, pp, x)));
    }

    #[test]
    fn kappa_is_invariant_symmetric_nondegenerate() {
        for dd in fixtures::all_doubles() {
            if dd.dim() == 0 {
                continue;
            }
            assert!(dd.kappa.is_nondegenerate());
            dd.kappa.check_symmetry_and_grading(&dd.lie).unwrap();
            let bad = dd.kappa.check_invariance(&dd.lie);
            assert!(bad.is_empty(), "invariance fails at {bad:?}");
        }
    }

    #[test]
    fn sl2_psi_bracket_transpose() {
        let dd = fixtures::sl2_fund_double();
        // [psi+1, psi-1] = -Σ_a ρ(x_a)^1_1 t^a = -t^h
        let (pp1, pm1) = (dd.psi_plus(0), dd.psi_minus(0));
        let th = dd.t(1);
        assert_eq!(dd.lie.bracket(pp1, pm1), &[(th, rat_int(-1))]);
        // [psi+1, psi-2] = -ρ(x_a)^2_1 t^a = -t^f (ρ(f) = E21)
        let pm2 = dd.psi_minus(1);
        let tf = dd.t(2);
        assert_eq!(dd.lie.bracket(pp1, pm2), &[(tf, rat_int(-1))]);
    }

    #[test]
    fn positive_subalgebra_shapes() {
        let dd = fixtures::sqed1_double();
        let plus = positive_subalgebra(&dd).unwrap();
        assert_eq!(plus.dim(), 3);
        // only relation: [psi+, psi-] = -t
        assert_eq!(plus.bracket(0, 1), &[(2, rat_int(-1))]);

        let dd = fixtures::sl2_fund_double();
        let plus = positive_subalgebra(&dd).unwrap();
        assert_eq!(plus.dim(), 7); // 4 odd + 3 even

        // V = 0: abelian 𝔤*[-2]
        let g = fixtures::abelian_algebra(2);
        let rho = RepresentationData {
            dim_v: 0,
            matrices: vec![QMatrix::zeros(0, 0); 2],
        };
        let dd = build_double(&build_h(&g, &rho).unwrap()).unwrap();
        let plus = positive_subalgebra(&dd).unwrap();
        assert_eq!(plus.dim(), 2);
    }

    #[test]
    fn bad_representation_rejected() {
        let g = fixtures::sl2_algebra();
        // wrong matrix for f breaks the representation axiom
        let mut rho = fixtures::sl2_fund_rep();
        rho.matrices[2] = QMatrix::identity(2);
        assert!(build_h(&g, &rho).is_err());
    }

    #[test]
    fn rejects_graded_base() {
        let basis = GradedBasis::new(vec![BasisElement::new("x", 1, 0)]).unwrap();
        let g = LieAlgebraData::new(basis, vec![Sector::Base]);
        let rho = RepresentationData {
            dim_v: 0,
            matrices: vec![QMatrix::zeros(0, 0)],
        };
        assert!(build_h(&g, &rho).is_err());
    }

    #[test]
    fn weight_additivity_detects_corruption() {
        let mut dd = fixtures::sqed1_double();
        let (x, pp) = (0, 1);
        // force [x, psi+] = t : degree 0+1 vs 2 must be flagged
        let t = dd.t(0);
        dd.lie.set_bracket(x, pp, vec![(t, rat(1, 1))]);
        assert!(dd.lie.validate_gradings().is_err());
    }
}
