//! Built-in input data used by the verification suites and tests: the empty
//! algebra, gl(1) with ℂ and ℂ³, and 𝔰𝔩₂ with its fundamental representation.

use crate::grading::{BasisElement, GradedBasis};
use crate::lie::{
    build_double, build_h, DoubleData, LieAlgebraData, RepresentationData, Sector, SemidirectData,
};
use crate::linalg::QMatrix;
use crate::scalar::{rat_int, Rational};

/// 𝔤 = 0.
pub fn zero_algebra() -> LieAlgebraData {
    LieAlgebraData::new(GradedBasis::new(vec![]).unwrap(), vec![])
}

/// Abelian 𝔤 of the given dimension, basis x1..xn.
pub fn abelian_algebra(n: usize) -> LieAlgebraData {
    let elems = (0..n)
        .map(|i| BasisElement::new(format!("x{}", i + 1), 0, 0))
        .collect();
    LieAlgebraData::new(
        GradedBasis::new(elems).unwrap(),
        vec![Sector::Base; n],
    )
}

/// gl(1), basis {x}.
pub fn gl1_algebra() -> LieAlgebraData {
    let basis = GradedBasis::new(vec![BasisElement::new("x", 0, 0)]).unwrap();
    LieAlgebraData::new(basis, vec![Sector::Base])
}

/// 𝔰𝔩₂ with basis (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = -2f.
pub fn sl2_algebra() -> LieAlgebraData {
    let basis = GradedBasis::new(vec![
        BasisElement::new("e", 0, 0),
        BasisElement::new("h", 0, 0),
        BasisElement::new("f", 0, 0),
    ])
    .unwrap();
    let mut g = LieAlgebraData::new(basis, vec![Sector::Base; 3]);
    g.set_bracket(0, 2, vec![(1, rat_int(1))]); // [e,f] = h
    g.set_bracket(1, 0, vec![(0, rat_int(2))]); // [h,e] = 2e
    g.set_bracket(1, 2, vec![(2, rat_int(-2))]); // [h,f] = -2f
    g
}

/// gl(1) acting on ℂ with weight 1.
pub fn sqed1_rep() -> RepresentationData {
    RepresentationData {
        dim_v: 1,
        matrices: vec![QMatrix::identity(1)],
    }
}

/// gl(1) acting on ℂ³ with weight 1 on each coordinate.
pub fn gl1_c3_rep() -> RepresentationData {
    RepresentationData {
        dim_v: 3,
        matrices: vec![QMatrix::identity(3)],
    }
}

/// Fundamental representation of 𝔰𝔩₂ on ℂ².
pub fn sl2_fund_rep() -> RepresentationData {
    let mut e = QMatrix::zeros(2, 2);
    e[(0, 1)] = Rational::from_integer(1.into());
    let mut h = QMatrix::zeros(2, 2);
    h[(0, 0)] = Rational::from_integer(1.into());
    h[(1, 1)] = Rational::from_integer((-1).into());
    let mut f = QMatrix::zeros(2, 2);
    f[(1, 0)] = Rational::from_integer(1.into());
    RepresentationData {
        dim_v: 2,
        matrices: vec![e, h, f],
    }
}

pub fn sqed1_h() -> SemidirectData {
    build_h(&gl1_algebra(), &sqed1_rep()).unwrap()
}

pub fn sl2_fund_h() -> SemidirectData {
    build_h(&sl2_algebra(), &sl2_fund_rep()).unwrap()
}

pub fn trivial_double() -> DoubleData {
    let g = zero_algebra();
    let rho = RepresentationData {
        dim_v: 0,
        matrices: vec![],
    };
    build_double(&build_h(&g, &rho).unwrap()).unwrap()
}

pub fn sqed1_double() -> DoubleData {
    build_double(&sqed1_h()).unwrap()
}

pub fn gl1_c3_double() -> DoubleData {
    build_double(&build_h(&gl1_algebra(), &gl1_c3_rep()).unwrap()).unwrap()
}

pub fn sl2_fund_double() -> DoubleData {
    build_double(&sl2_fund_h()).unwrap()
}

/// The four acceptance fixtures, in a fixed order.
pub fn all_doubles() -> Vec<DoubleData> {
    vec![
        trivial_double(),
        sqed1_double(),
        gl1_c3_double(),
        sl2_fund_double(),
    ]
}

/// Names matching `all_doubles` order.
pub fn fixture_names() -> Vec<&'static str> {
    vec!["trivial", "sqed1", "gl1c3", "sl2fund"]
}

pub fn double_by_name(name: &str) -> Option<DoubleData> {
    match name {
        "trivial" => Some(trivial_double()),
        "sqed1" => Some(sqed1_double()),
        "gl1c3" => Some(gl1_c3_double()),
        "sl2fund" => Some(sl2_fund_double()),
        _ => None,
    }
}
