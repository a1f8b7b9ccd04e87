//! Free graded-commutative DG algebras: the derived zero locus of the moment
//! map, Chevalley-Eilenberg algebras, and weight-truncated cohomology and
//! invariants by exact rank computations.

use crate::error::{Error, Result};
use crate::lie::{DoubleData, LieAlgebraData};
use crate::linalg::QMatrix;
use crate::scalar::{rat, Rational};
use crate::uea::PBWMonomial as Monomial;
use num::Zero;
use std::collections::BTreeMap;

/// Polynomial in the generators of a CommutativeDGA, with rational
/// coefficients. Monomials reuse the sorted-exponent representation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DgaElement {
    pub terms: BTreeMap<Monomial, Rational>,
}

impl DgaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::default();
        e.terms
            .insert(Monomial::one(), Rational::from_integer(1.into()));
        e
    }

    pub fn generator(i: usize) -> Self {
        let mut e = Self::default();
        e.terms
            .insert(Monomial::generator(i), Rational::from_integer(1.into()));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        let cur = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *cur += c;
        if cur.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::default();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }
}

/// A generator of a free graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaGenerator {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl DgaGenerator {
    pub fn parity(&self) -> u8 {
        self.degree.rem_euclid(2) as u8
    }
}

/// Free graded-commutative DGA with a degree-(+1) weight-0 differential and
/// an optional linear action of a base Lie algebra by derivations.
#[derive(Clone, Debug)]
pub struct CommutativeDGA {
    pub gens: Vec<DgaGenerator>,
    /// d on generators; extended as a derivation.
    pub differential: Vec<DgaElement>,
    /// Linear action matrices, one per base-algebra generator: action[a][(i,j)]
    /// is the coefficient of gen_i in x_a · gen_j.
    pub actions: Vec<QMatrix>,
}

impl CommutativeDGA {
    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.factors
            .iter()
            .map(|&(i, e)| self.gens[i].degree * e as i64)
            .sum()
    }

    pub fn monomial_weight(&self, m: &Monomial) -> i64 {
        m.factors
            .iter()
            .map(|&(i, e)| self.gens[i].weight * e as i64)
            .sum()
    }

    pub fn monomial_parity(&self, m: &Monomial) -> u8 {
        (self.monomial_degree(m).rem_euclid(2)) as u8
    }

    /// Product of two monomials with the Koszul sign; None if an odd
    /// generator squares.
    pub fn mono_mul(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i32)> {
        // count odd-odd inversions between the words
        let wa = a.word();
        let wb = b.word();
        let mut sign = 1i32;
        for &i in &wb {
            if self.gens[i].parity() == 1 {
                for &j in &wa {
                    if j > i && self.gens[j].parity() == 1 {
                        sign = -sign;
                    }
                }
            }
        }
        let mut letters: Vec<usize> = wa;
        letters.extend(wb);
        letters.sort_unstable();
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for g in letters {
            match factors.last_mut() {
                Some((h, e)) if *h == g => {
                    if self.gens[g].parity() == 1 {
                        return None; // odd square
                    }
                    *e += 1;
                }
                _ => factors.push((g, 1)),
            }
        }
        Some((Monomial { factors }, sign))
    }

    pub fn mul(&self, a: &DgaElement, b: &DgaElement) -> DgaElement {
        let mut out = DgaElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, sign)) = self.mono_mul(ma, mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, &c);
                }
            }
        }
        out
    }

    /// Differential extended as an odd derivation.
    pub fn d(&self, e: &DgaElement) -> DgaElement {
        let mut out = DgaElement::zero();
        for (m, c) in &e.terms {
            let w = m.word();
            let mut parity_before = 0u8;
            for (k, &g) in w.iter().enumerate() {
                let dg = &self.differential[g];
                if !dg.is_zero() {
                    // prefix ⊗ d(g) ⊗ suffix with the Koszul sign of d
                    // crossing the prefix
                    let mut prefix = DgaElement::one();
                    for &h in &w[..k] {
                        prefix = self.mul(&prefix, &DgaElement::generator(h));
                    }
                    let mut suffix = DgaElement::one();
                    for &h in &w[k + 1..] {
                        suffix = self.mul(&suffix, &DgaElement::generator(h));
                    }
                    let mut term = self.mul(&self.mul(&prefix, dg), &suffix);
                    if parity_before == 1 {
                        term = term.scale(&rat(-1, 1));
                    }
                    term = term.scale(c);
                    out = out.add(&term);
                }
                parity_before ^= self.gens[g].parity();
            }
        }
        out
    }

    /// Base-algebra action extended as an even derivation.
    pub fn act(&self, a: usize, e: &DgaElement) -> DgaElement {
        let mat = &self.actions[a];
        let mut out = DgaElement::zero();
        for (m, c) in &e.terms {
            let w = m.word();
            for (k, &g) in w.iter().enumerate() {
                for i in 0..self.n_gens() {
                    let coeff = &mat[(i, g)];
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut prefix = DgaElement::one();
                    for &h in &w[..k] {
                        prefix = self.mul(&prefix, &DgaElement::generator(h));
                    }
                    let mut suffix = DgaElement::one();
                    for &h in &w[k + 1..] {
                        suffix = self.mul(&suffix, &DgaElement::generator(h));
                    }
                    let term = self
                        .mul(&self.mul(&prefix, &DgaElement::generator(i)), &suffix)
                        .scale(&(c * coeff));
                    out = out.add(&term);
                }
            }
        }
        out
    }

    /// d² on every generator; returns the first violation.
    pub fn check_d_squared(&self) -> Result<()> {
        for g in 0..self.n_gens() {
            let dd = self.d(&self.differential[g]);
            if !dd.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "d² ≠ 0 on generator {}",
                    self.gens[g].name
                )));
            }
        }
        Ok(())
    }

    /// d is weight-0, degree-(+1) on generators.
    pub fn check_d_grading(&self) -> Result<()> {
        for g in 0..self.n_gens() {
            for (m, c) in &self.differential[g].terms {
                if c.is_zero() {
                    continue;
                }
                if self.monomial_degree(m) != self.gens[g].degree + 1
                    || self.monomial_weight(m) != self.gens[g].weight
                {
                    return Err(Error::InvariantViolation(format!(
                        "differential of {} is not (degree +1, weight 0)",
                        self.gens[g].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Equivariance: the action derivations commute with d on generators.
    pub fn check_equivariance(&self) -> Result<()> {
        for a in 0..self.actions.len() {
            for g in 0..self.n_gens() {
                let lhs = self.act(a, &self.differential[g]);
                let rhs = self.d(&self.act(a, &DgaElement::generator(g)));
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "action {a} does not commute with d on generator {}",
                        self.gens[g].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// All monomials of the given weight. Requires every generator to have
    /// positive weight or be odd (so the count is finite).
    pub fn monomials_of_weight(&self, w: i64) -> Result<Vec<Monomial>> {
        for g in &self.gens {
            if g.weight <= 0 && g.parity() == 0 {
                return Err(Error::DomainError(format!(
                    "weight component is infinite: even generator {} has weight {} ≤ 0",
                    g.name, g.weight
                )));
            }
            if g.weight < 0 {
                return Err(Error::DomainError(format!(
                    "weight component is infinite: generator {} has negative weight",
                    g.name
                )));
            }
        }
        let mut out = Vec::new();
        fn rec(
            dga: &CommutativeDGA,
            pos: usize,
            w_left: i64,
            current: &mut Vec<(usize, u32)>,
            out: &mut Vec<Monomial>,
        ) {
            if pos == dga.n_gens() {
                if w_left == 0 {
                    out.push(Monomial {
                        factors: current.clone(),
                    });
                }
                return;
            }
            let g = &dga.gens[pos];
            let max_e: i64 = if g.parity() == 1 {
                1
            } else if g.weight > 0 {
                w_left / g.weight
            } else {
                0
            };
            for e in 0..=max_e {
                let used = g.weight * e;
                if used > w_left {
                    break;
                }
                if e > 0 {
                    current.push((pos, e as u32));
                }
                rec(dga, pos + 1, w_left - used, current, out);
                if e > 0 {
                    current.pop();
                }
            }
        }
        let mut cur = Vec::new();
        rec(self, 0, w, &mut cur, &mut out);
        Ok(out)
    }
}

/// Fixed-weight slice of the DGA as an explicit complex of exact matrices.
#[derive(Clone, Debug)]
pub struct WeightBlockComplex {
    pub weight: i64,
    /// degree → ordered monomial basis
    pub bases: BTreeMap<i64, Vec<Monomial>>,
    /// degree k → matrix of d: block k → block k+1
    pub maps: BTreeMap<i64, QMatrix>,
}

impl WeightBlockComplex {
    pub fn build(dga: &CommutativeDGA, weight: i64) -> Result<Self> {
        let monos = dga.monomials_of_weight(weight)?;
        let mut bases: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for m in monos {
            bases.entry(dga.monomial_degree(&m)).or_default().push(m);
        }
        let mut maps = BTreeMap::new();
        let degrees: Vec<i64> = bases.keys().copied().collect();
        for &k in &degrees {
            let src = &bases[&k];
            let empty = Vec::new();
            let tgt = bases.get(&(k + 1)).unwrap_or(&empty);
            let index: BTreeMap<&Monomial, usize> =
                tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut mat = QMatrix::zeros(tgt.len(), src.len());
            for (j, m) in src.iter().enumerate() {
                let dm = dga.d(&DgaElement {
                    terms: BTreeMap::from([(m.clone(), Rational::from_integer(1.into()))]),
                });
                for (mm, c) in &dm.terms {
                    let i = *index
                        .get(mm)
                        .ok_or_else(|| Error::InvariantViolation("d left the weight block".into()))?;
                    mat[(i, j)] = c.clone();
                }
            }
            maps.insert(k, mat);
        }
        // consecutive maps compose to zero
        for &k in &degrees {
            if let (Some(a), Some(b)) = (maps.get(&k), maps.get(&(k + 1))) {
                if b.cols == a.rows && !b.mul(a).is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "d² ≠ 0 in weight block {weight} at degree {k}"
                    )));
                }
            }
        }
        Ok(Self {
            weight,
            bases,
            maps,
        })
    }

    pub fn dim_at(&self, degree: i64) -> usize {
        self.bases.get(&degree).map_or(0, |b| b.len())
    }

    pub fn rank_out(&self, degree: i64) -> usize {
        self.maps.get(&degree).map_or(0, |m| m.rank())
    }

    pub fn cohomology_dim(&self, degree: i64) -> usize {
        let dim = self.dim_at(degree);
        if dim == 0 {
            return 0;
        }
        let rk_out = self.rank_out(degree);
        let rk_in = self
            .maps
            .get(&(degree - 1))
            .map_or(0, |m| m.rank());
        dim - rk_out - rk_in
    }

    /// Euler characteristic consistency: Σ(-1)^k dim C^k = Σ(-1)^k dim H^k.
    pub fn euler_consistent(&self) -> bool {
        let mut chi_c = 0i64;
        let mut chi_h = 0i64;
        for (&k, b) in &self.bases {
            let s = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_c += s * b.len() as i64;
            chi_h += s * self.cohomology_dim(k) as i64;
        }
        chi_c == chi_h
    }
}

/// Cohomology dimensions per (degree, weight), exact.
#[derive(Clone, Debug, Default)]
pub struct CohomologyReport {
    pub dims: BTreeMap<(i64, i64), usize>,
}

pub fn cohomology(
    dga: &CommutativeDGA,
    weights: impl Iterator<Item = i64>,
    degrees: (i64, i64),
) -> Result<CohomologyReport> {
    let mut report = CohomologyReport::default();
    for w in weights {
        let block = WeightBlockComplex::build(dga, w)?;
        for k in degrees.0..=degrees.1 {
            report.dims.insert((k, w), block.cohomology_dim(k));
        }
    }
    Ok(report)
}

/// Dimension of the joint kernel of the induced base-algebra action on
/// H^degree at the given weight.
pub fn invariants(dga: &CommutativeDGA, weight: i64, degree: i64) -> Result<usize> {
    let block = WeightBlockComplex::build(dga, weight)?;
    let empty = Vec::new();
    let basis = block.bases.get(&degree).unwrap_or(&empty);
    if basis.is_empty() {
        return Ok(0);
    }
    let n = basis.len();
    // kernel of d at this degree
    let dmat = block
        .maps
        .get(&degree)
        .cloned()
        .unwrap_or_else(|| QMatrix::zeros(0, n));
    let kernel = dmat.kernel_basis();
    // image of d from below
    let prev = block.maps.get(&(degree - 1));
    let image: Vec<Vec<Rational>> = match prev {
        Some(m) => {
            let (rref, pivots) = m.transpose().rref();
            pivots
                .iter()
                .enumerate()
                .map(|(row, _)| (0..n).map(|j| rref[(row, j)].clone()).collect())
                .collect()
        }
        None => Vec::new(),
    };
    // basis of H: extend image to kernel
    let mut span = QMatrix::zeros(n, image.len() + kernel.len());
    for (j, v) in image.iter().enumerate() {
        for i in 0..n {
            span[(i, j)] = v[i].clone();
        }
    }
    let b0 = image.len();
    let mut h_cols: Vec<Vec<Rational>> = Vec::new();
    let mut rank_so_far = {
        let mut m = QMatrix::zeros(n, b0);
        for j in 0..b0 {
            for i in 0..n {
                m[(i, j)] = span[(i, j)].clone();
            }
        }
        m.rank()
    };
    for v in &kernel {
        let mut trial = QMatrix::zeros(n, b0 + h_cols.len() + 1);
        for j in 0..b0 {
            for i in 0..n {
                trial[(i, j)] = span[(i, j)].clone();
            }
        }
        for (j, h) in h_cols.iter().enumerate() {
            for i in 0..n {
                trial[(i, b0 + j)] = h[i].clone();
            }
        }
        for i in 0..n {
            trial[(i, b0 + h_cols.len())] = v[i].clone();
        }
        if trial.rank() > rank_so_far + h_cols.len() {
            h_cols.push(v.clone());
        }
        let _ = &mut rank_so_far;
    }
    let h_dim = h_cols.len();
    if h_dim == 0 {
        return Ok(0);
    }
    // express induced action of every x_a on H
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    // matrix [image | h_cols] for solving coordinates
    let mut big = QMatrix::zeros(n, b0 + h_dim);
    for j in 0..b0 {
        for i in 0..n {
            big[(i, j)] = span[(i, j)].clone();
        }
    }
    for (j, h) in h_cols.iter().enumerate() {
        for i in 0..n {
            big[(i, b0 + j)] = h[i].clone();
        }
    }
    let mut stacked_rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..dga.actions.len() {
        // action matrix on the block
        let mut act_block = QMatrix::zeros(n, n);
        for (j, m) in basis.iter().enumerate() {
            let am = dga.act(
                a,
                &DgaElement {
                    terms: BTreeMap::from([(m.clone(), Rational::from_integer(1.into()))]),
                },
            );
            for (mm, c) in &am.terms {
                let i = *index.get(mm).ok_or_else(|| {
                    Error::InvariantViolation("action left the weight block".into())
                })?;
                act_block[(i, j)] = c.clone();
            }
        }
        // induced matrix on H (h_dim × h_dim)
        let mut induced = QMatrix::zeros(h_dim, h_dim);
        for (j, h) in h_cols.iter().enumerate() {
            let img = act_block.apply(h);
            let coords = big
                .solve(&img)
                .ok_or_else(|| Error::InvariantViolation("action does not preserve ker d".into()))?;
            for i in 0..h_dim {
                induced[(i, j)] = coords[b0 + i].clone();
            }
        }
        for i in 0..h_dim {
            stacked_rows.push((0..h_dim).map(|j| induced[(i, j)].clone()).collect());
        }
    }
    if stacked_rows.is_empty() {
        return Ok(h_dim);
    }
    let stacked = QMatrix::from_rows(stacked_rows);
    Ok(stacked.kernel_basis().len())
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Derived zero locus of the moment map: generators v*_j (coordinates on V),
/// v_j (coordinates on V*), c_a (Koszul generators for 𝔤*[-1]), with
/// d c_a = Σ ρ(x_a)ʲₖ v*_k v_j and the canonical 𝔤-action.
pub fn build_moment_dga(dd: &DoubleData) -> Result<CommutativeDGA> {
    let (ng, nv) = (dd.dim_g, dd.dim_v);
    let mut gens = Vec::new();
    for j in 0..nv {
        gens.push(DgaGenerator {
            name: format!("v*{}", j + 1),
            degree: 0,
            weight: 1,
        });
    }
    for j in 0..nv {
        gens.push(DgaGenerator {
            name: format!("v{}", j + 1),
            degree: 0,
            weight: 1,
        });
    }
    for a in 0..ng {
        gens.push(DgaGenerator {
            name: format!("c_{}", dd.g.basis.get(a).name),
            degree: -1,
            weight: 2,
        });
    }
    let vstar = |j: usize| j;
    let vv = |j: usize| nv + j;
    let cc = |a: usize| 2 * nv + a;

    let mut differential = vec![DgaElement::zero(); gens.len()];
    for a in 0..ng {
        let mut dc = DgaElement::zero();
        for j in 0..nv {
            for k in 0..nv {
                let c = dd.rho.matrices[a][(j, k)].clone();
                if c.is_zero() {
                    continue;
                }
                let m = Monomial {
                    factors: if vstar(k) < vv(j) {
                        vec![(vstar(k), 1), (vv(j), 1)]
                    } else {
                        vec![(vv(j), 1), (vstar(k), 1)]
                    },
                };
                dc.add_term(m, &c);
            }
        }
        differential[cc(a)] = dc;
    }

    // 𝔤-action: x_d · v*_j = -Σ_k ρ(x_d)ʲₖ v*_k ; x_d · v_j = Σ_k ρ(x_d)ᵏⱼ v_k ;
    // x_d · c_a = Σ_b f_{da}ᵇ c_b
    let mut actions = Vec::new();
    for d in 0..ng {
        let mut m = QMatrix::zeros(gens.len(), gens.len());
        for j in 0..nv {
            for k in 0..nv {
                m[(vstar(k), vstar(j))] = -dd.rho.matrices[d][(j, k)].clone();
                m[(vv(k), vv(j))] = dd.rho.matrices[d][(k, j)].clone();
            }
        }
        for a in 0..ng {
            for b in 0..ng {
                m[(cc(b), cc(a))] = dd.g.f(d, a, b);
            }
        }
        actions.push(m);
    }

    let dga = CommutativeDGA {
        gens,
        differential,
        actions,
    };
    dga.check_d_grading()?;
    dga.check_d_squared()?;
    dga.check_equivariance()?;
    Ok(dga)
}

/// Chevalley-Eilenberg algebra of a graded Lie algebra concentrated in
/// degrees ≥ 0: Sym(L*[-1]) with dξ^c = -½ Σ K(a,b) f_{ab}^c ξ^a ξ^b,
/// K(a,b) = (-1)^{|e_a|(|e_b|+1)}. Generator order follows the input basis.
pub fn build_ce(lie: &LieAlgebraData, actions: Vec<QMatrix>) -> Result<CommutativeDGA> {
    for i in 0..lie.dim() {
        if lie.basis.degree(i) < 0 {
            return Err(Error::InvalidArgument(
                "CE input must be concentrated in degrees ≥ 0".into(),
            ));
        }
    }
    let gens: Vec<DgaGenerator> = (0..lie.dim())
        .map(|i| DgaGenerator {
            name: format!("{}^", lie.basis.get(i).name),
            degree: 1 - lie.basis.degree(i),
            weight: lie.basis.weight(i),
        })
        .collect();
    let dga_probe = CommutativeDGA {
        gens: gens.clone(),
        differential: vec![DgaElement::zero(); gens.len()],
        actions: vec![],
    };
    let mut differential = vec![DgaElement::zero(); gens.len()];
    for c in 0..lie.dim() {
        let mut dc = DgaElement::zero();
        for a in 0..lie.dim() {
            for b in 0..lie.dim() {
                let f = lie.f(a, b, c);
                if f.is_zero() {
                    continue;
                }
                let k_sign = if lie.basis.parity(a) == 1 && lie.basis.parity(b) == 0 {
                    rat(-1, 1)
                } else {
                    rat(1, 1)
                };
                if let Some((m, s)) =
                    dga_probe.mono_mul(&Monomial::generator(a), &Monomial::generator(b))
                {
                    let mut coeff = f * k_sign * rat(-1, 2);
                    if s < 0 {
                        coeff = -coeff;
                    }
                    dc.add_term(m, &coeff);
                }
            }
        }
        differential[c] = dc;
    }
    let dga = CommutativeDGA {
        gens,
        differential,
        actions,
    };
    dga.check_d_grading()?;
    dga.check_d_squared()?;
    if !dga.actions.is_empty() {
        dga.check_equivariance()?;
    }
    Ok(dga)
}

/// CE action matrices for CE*(𝔡⁺) induced from the 𝔤-action on 𝔡⁺
/// (dual representation on the shifted duals).
pub fn ce_plus_actions(dd: &DoubleData, plus: &LieAlgebraData) -> Vec<QMatrix> {
    let n = plus.dim();
    let offset = dd.dim_g;
    let mut actions = Vec::new();
    for a in 0..dd.dim_g {
        // action of x_a on 𝔡⁺: M[i][j] = coeff of e_i in [x_a, e_j]
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            for (i, c) in dd.lie.bracket(a, offset + j) {
                m[(*i - offset, j)] = c.clone();
            }
        }
        // dual representation on ξ's: -Mᵀ
        let mut dual = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                dual[(i, j)] = -m[(j, i)].clone();
            }
        }
        actions.push(dual);
    }
    actions
}

/// Generator-by-generator comparison of the moment DGA with CE*(𝔡⁺) under
/// the dictionary (ψ₊-dual ↦ v*, ψ₋-dual ↦ v, t-dual ↦ c). Returns the name
/// of the first differing differential if any.
pub fn check_moment_equals_ce(dd: &DoubleData) -> Result<Option<String>> {
    let moment = build_moment_dga(dd)?;
    let plus = crate::lie::positive_subalgebra(dd)?;
    let ce = build_ce(&plus, ce_plus_actions(dd, &plus))?;
    if moment.n_gens() != ce.n_gens() {
        return Ok(Some("generator counts differ".into()));
    }
    for i in 0..moment.n_gens() {
        let (a, b) = (&moment.gens[i], &ce.gens[i]);
        if a.degree != b.degree || a.weight != b.weight {
            return Ok(Some(format!(
                "gradings differ at generator {} vs {}",
                a.name, b.name
            )));
        }
    }
    for i in 0..moment.n_gens() {
        if moment.differential[i] != ce.differential[i] {
            return Ok(Some(format!(
                "differential differs at generator {}",
                moment.gens[i].name
            )));
        }
    }
    // the 𝔤-actions agree as well
    for a in 0..moment.actions.len() {
        if moment.actions[a] != ce.actions[a] {
            return Ok(Some(format!("action of basis element {a} differs")));
        }
    }
    Ok(None)
}

/// Flatness detection: H^k = 0 for all k < 0 up to the weight cap.
pub fn detect_flatness(dga: &CommutativeDGA, max_weight: i64) -> Result<bool> {
    let min_degree: i64 = dga
        .gens
        .iter()
        .map(|g| g.degree.min(0))
        .sum::<i64>()
        .min(-1);
    for w in 0..=max_weight {
        let block = WeightBlockComplex::build(dga, w)?;
        for k in min_degree..0 {
            if block.cohomology_dim(k) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn moment_dga_sqed1() {
        let dd = fixtures::sqed1_double();
        let dga = build_moment_dga(&dd).unwrap();
        assert_eq!(dga.n_gens(), 3);
        // dc = v* v
        let dc = &dga.differential[2];
        assert_eq!(dc.terms.len(), 1);
        let (m, c) = dc.terms.iter().next().unwrap();
        assert_eq!(c, &Rational::from_integer(1.into()));
        assert_eq!(m.factors, vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn moment_dga_sl2_dc_e() {
        let dd = fixtures::sl2_fund_double();
        let dga = build_moment_dga(&dd).unwrap();
        // dc_e = ρ(e)ʲₖ v*_k v_j with ρ(e) = E12: j=1,k=2: v*_2 v_1
        let dc_e = &dga.differential[4 + 0];
        assert_eq!(dc_e.terms.len(), 1);
        let (m, c) = dc_e.terms.iter().next().unwrap();
        assert_eq!(c, &Rational::from_integer(1.into()));
        // v*_2 is index 1, v_1 is index 2
        assert_eq!(m.factors, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn moment_dga_trivial_g() {
        // 𝔤 = 0, V = ℂ: polynomial ring on two generators, zero differential
        use crate::lie::{build_double, build_h, RepresentationData};
        let g = fixtures::zero_algebra();
        let rho = RepresentationData {
            dim_v: 1,
            matrices: vec![],
        };
        let dd = build_double(&build_h(&g, &rho).unwrap()).unwrap();
        let dga = build_moment_dga(&dd).unwrap();
        assert_eq!(dga.n_gens(), 2);
        assert!(dga.differential.iter().all(|d| d.is_zero()));
        // cohomology = polynomial ring dimensions: H⁰ at weight w has dim w+1
        for w in 0..4 {
            let block = WeightBlockComplex::build(&dga, w).unwrap();
            assert_eq!(block.cohomology_dim(0), (w + 1) as usize);
        }
    }

    #[test]
    fn moment_equals_ce_on_fixtures() {
        for dd in fixtures::all_doubles() {
            let diff = check_moment_equals_ce(&dd).unwrap();
            assert!(diff.is_none(), "mismatch: {diff:?}");
        }
    }

    #[test]
    fn ce_of_sl2_classical_cohomology() {
        // H⁰ = ℚ, H¹ = 0, and by Poincaré duality H³ = ℚ for sl2
        let g = fixtures::sl2_algebra();
        let ce = build_ce(&g, vec![]).unwrap();
        let block = WeightBlockComplex::build(&ce, 0).unwrap();
        assert_eq!(block.cohomology_dim(0), 1);
        assert_eq!(block.cohomology_dim(1), 0);
        assert_eq!(block.cohomology_dim(2), 0);
        assert_eq!(block.cohomology_dim(3), 1);
        assert!(block.euler_consistent());
    }

    #[test]
    fn ce_of_abelian_has_zero_differential() {
        let g = fixtures::abelian_algebra(2);
        let ce = build_ce(&g, vec![]).unwrap();
        assert!(ce.differential.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn sqed1_moment_cohomology_dims() {
        let dd = fixtures::sqed1_double();
        let dga = build_moment_dga(&dd).unwrap();
        // H⁰ at weights 0..3 = 1, 2, 2, 2
        let expected = [1usize, 2, 2, 2];
        for (w, e) in expected.iter().enumerate() {
            let block = WeightBlockComplex::build(&dga, w as i64).unwrap();
            assert_eq!(block.cohomology_dim(0), *e, "H⁰ at weight {w}");
            assert!(block.euler_consistent());
        }
        // H^{-1} = 0 at weights ≤ 6
        for w in 0..=6 {
            let block = WeightBlockComplex::build(&dga, w).unwrap();
            assert_eq!(block.cohomology_dim(-1), 0, "H^-1 at weight {w}");
        }
        assert!(detect_flatness(&dga, 6).unwrap());
    }

    #[test]
    fn sqed1_moment_h0_oracle_via_multiplication_rank() {
        // independent oracle: H⁰ at weight w is coker of multiplication by
        // v*v from weight w-2 polynomials; dim = (w+1) - (w-1)
        let dd = fixtures::sqed1_double();
        let dga = build_moment_dga(&dd).unwrap();
        for w in 2..=5i64 {
            // polynomials in v*, v of weight w
            let polys_w: Vec<Monomial> = dga
                .monomials_of_weight(w)
                .unwrap()
                .into_iter()
                .filter(|m| dga.monomial_degree(m) == 0)
                .collect();
            let polys_lower: Vec<Monomial> = dga
                .monomials_of_weight(w - 2)
                .unwrap()
                .into_iter()
                .filter(|m| dga.monomial_degree(m) == 0)
                .collect();
            let index: BTreeMap<&Monomial, usize> =
                polys_w.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let vv = DgaElement {
                terms: BTreeMap::from([(
                    Monomial {
                        factors: vec![(0, 1), (1, 1)],
                    },
                    Rational::from_integer(1.into()),
                )]),
            };
            let mut mat = QMatrix::zeros(polys_w.len(), polys_lower.len());
            for (j, m) in polys_lower.iter().enumerate() {
                let prod = dga.mul(
                    &vv,
                    &DgaElement {
                        terms: BTreeMap::from([(m.clone(), Rational::from_integer(1.into()))]),
                    },
                );
                for (mm, c) in &prod.terms {
                    mat[(index[&mm], j)] = c.clone();
                }
            }
            let oracle = polys_w.len() - mat.rank();
            let block = WeightBlockComplex::build(&dga, w).unwrap();
            assert_eq!(block.cohomology_dim(0), oracle);
        }
    }

    #[test]
    fn sqed1_invariants() {
        let dd = fixtures::sqed1_double();
        let dga = build_moment_dga(&dd).unwrap();
        // invariants of H⁰: weight 0 → 1 (constants), weights 1..4 → 0
        assert_eq!(invariants(&dga, 0, 0).unwrap(), 1);
        for w in 1..=4 {
            assert_eq!(invariants(&dga, w, 0).unwrap(), 0, "weight {w}");
        }
    }

    #[test]
    fn trivial_g_invariants_are_full_cohomology() {
        use crate::lie::{build_double, build_h, RepresentationData};
        let g = fixtures::zero_algebra();
        let rho = RepresentationData {
            dim_v: 1,
            matrices: vec![],
        };
        let dd = build_double(&build_h(&g, &rho).unwrap()).unwrap();
        let dga = build_moment_dga(&dd).unwrap();
        for w in 0..4i64 {
            let block = WeightBlockComplex::build(&dga, w).unwrap();
            assert_eq!(
                invariants(&dga, w, 0).unwrap(),
                block.cohomology_dim(0)
            );
        }
    }

    #[test]
    fn infinite_weight_block_is_rejected() {
        // an even weight-0 generator makes weight blocks infinite
        let dga = CommutativeDGA {
            gens: vec![DgaGenerator {
                name: "u".into(),
                degree: 0,
                weight: 0,
            }],
            differential: vec![DgaElement::zero()],
            actions: vec![],
        };
        assert!(dga.monomials_of_weight(0).is_err());
    }

    #[test]
    fn euler_consistency_on_sl2_moment() {
        let dd = fixtures::sl2_fund_double();
        let dga = build_moment_dga(&dd).unwrap();
        for w in 0..=5 {
            let block = WeightBlockComplex::build(&dga, w).unwrap();
            assert!(block.euler_consistent(), "weight {w}");
        }
    }

    #[test]
    fn corrupted_moment_differential_fails_d_grading() {
        let dd = fixtures::sqed1_double();
        let mut dga = build_moment_dga(&dd).unwrap();
        dga.differential[0] = DgaElement::generator(1);
        assert!(dga.check_d_grading().is_err());
    }
}
