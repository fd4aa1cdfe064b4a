//! The five composite-field families: parameter validation, component-field
//! integral bases, conjugate embeddings, and the published residue-class
//! tables (shipped as data files, see [`tables`]).

pub mod expr;
pub mod tables;

use crate::num_util::{
    self, is_cubefree, is_squarefree, odd_part_squarefree, residue, uv_decompose, valuation_i64,
};
use crate::tower::{make_tower, TowerElement, TowerSpec, UniPoly};
use crate::{Int, Rat};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    QuadSimplestCubic,
    QuadPureCubic,
    QuadPureQuartic,
    QuadSimplestQuartic,
    OmegaPureSextic,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::QuadSimplestCubic,
        Family::QuadPureCubic,
        Family::QuadPureQuartic,
        Family::QuadSimplestQuartic,
        Family::OmegaPureSextic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::QuadSimplestCubic => "quad-simplest-cubic",
            Family::QuadPureCubic => "quad-pure-cubic",
            Family::QuadPureQuartic => "quad-pure-quartic",
            Family::QuadSimplestQuartic => "quad-simplest-quartic",
            Family::OmegaPureSextic => "omega-pure-sextic",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == s)
    }

    pub fn degree(&self) -> usize {
        match self {
            Family::QuadSimplestCubic | Family::QuadPureCubic => 6,
            Family::QuadPureQuartic | Family::QuadSimplestQuartic => 8,
            Family::OmegaPureSextic => 12,
        }
    }

    /// Whether the quadratic part is a free parameter (false for the sextic
    /// family, whose quadratic part is fixed).
    pub fn has_n(&self) -> bool {
        !matches!(self, Family::OmegaPureSextic)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParamError {
    #[error("family {0} requires parameter n")]
    MissingN(Family),
    #[error("n = {0} is excluded for this family")]
    ExcludedN(i64),
    #[error("m = {0} is excluded for this family")]
    ExcludedM(i64),
    #[error("n = {0} is not squarefree")]
    NNotSquarefree(i64),
    #[error("m = {0} is not squarefree")]
    MNotSquarefree(i64),
    #[error("m = {0} is not cubefree")]
    MNotCubefree(i64),
    #[error("m^2+3m+9 = {0} is not squarefree")]
    CubicResolventNotSquarefree(i64),
    #[error("m0 = m^2+16 = {0} is divisible by an odd square")]
    M0OddSquare(i64),
    #[error("gcd violation: gcd = {0} is not allowed here")]
    GcdViolation(i64),
    #[error("v = {0} from m = u*v^2 is divisible by 2")]
    VDivisibleBy2(i64),
    #[error("v = {0} from m = u*v^2 is divisible by 3")]
    VDivisibleBy3(i64),
    #[error("m = n = {0}: the composite degenerates to degree 4")]
    DegenerateEqualParams(i64),
    #[error("the quadratic field coincides with a subfield of the partner field")]
    DegenerateSubfield,
    #[error(transparent)]
    Num(#[from] num_util::NumError),
}

/// Validated family parameters with all derived quantities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub n: Option<i64>,
    pub m: i64,
    /// `m = u * v^2` for the pure cubic family; `(m, 1)` elsewhere.
    pub u: i64,
    pub v: i64,
    /// `m^2 + 16` for the simplest quartic family; 0 elsewhere.
    pub m0: i64,
    pub degree: usize,
}

impl FamilyParams {
    pub fn half_degree(&self) -> usize {
        self.degree / 2
    }

    pub fn n_residue(&self, modulus: i64) -> Option<i64> {
        self.n.map(|n| residue(n, modulus))
    }

    pub fn m_residue(&self, modulus: i64) -> i64 {
        residue(self.m, modulus)
    }

    pub fn bindings(&self) -> expr::Bindings {
        expr::Bindings {
            n: self.n,
            m: Some(self.m),
            u: Some(self.u),
            v: Some(self.v),
            m0: if self.m0 != 0 { Some(self.m0) } else { None },
        }
    }

    /// Label like `quad-pure-cubic(n=7, m=50)`.
    pub fn label(&self) -> String {
        match self.n {
            Some(n) => format!("{}(n={}, m={})", self.family, n, self.m),
            None => format!("{}(m={})", self.family, self.m),
        }
    }
}

/// Validate `(family, n, m)` against the defining conditions of the family,
/// reporting the specific violated clause.
pub fn validate_params(family: Family, n: Option<i64>, m: i64) -> Result<FamilyParams, ParamError> {
    let mk = |n: Option<i64>, m: i64, u: i64, v: i64, m0: i64| FamilyParams {
        family,
        n,
        m,
        u,
        v,
        m0,
        degree: family.degree(),
    };
    let need_n = || n.ok_or(ParamError::MissingN(family));
    match family {
        Family::QuadSimplestCubic => {
            let n = need_n()?;
            if n == 0 || n == 1 {
                return Err(ParamError::ExcludedN(n));
            }
            if !is_squarefree(n)? {
                return Err(ParamError::NNotSquarefree(n));
            }
            let res = m
                .checked_mul(m)
                .and_then(|m2| m2.checked_add(3 * m))
                .and_then(|s| s.checked_add(9))
                .ok_or(num_util::NumError::TooLargeToFactor(m))?;
            if !is_squarefree(res)? {
                return Err(ParamError::CubicResolventNotSquarefree(res));
            }
            let g = n.gcd(&res);
            if g != 1 {
                return Err(ParamError::GcdViolation(g));
            }
            Ok(mk(Some(n), m, m, 1, 0))
        }
        Family::QuadPureCubic => {
            let n = need_n()?;
            if n == 0 || n == 1 {
                return Err(ParamError::ExcludedN(n));
            }
            // m = +-1 makes x^3 - m reducible
            if m == 0 || m == 1 || m == -1 {
                return Err(ParamError::ExcludedM(m));
            }
            if !is_squarefree(n)? {
                return Err(ParamError::NNotSquarefree(n));
            }
            if !is_cubefree(m)? {
                return Err(ParamError::MNotCubefree(m));
            }
            let g = n.gcd(&m);
            if g != 1 && g != 2 && g != 3 {
                return Err(ParamError::GcdViolation(g));
            }
            let (u, v) = uv_decompose(m)?;
            if v % 2 == 0 {
                return Err(ParamError::VDivisibleBy2(v));
            }
            if v % 3 == 0 {
                return Err(ParamError::VDivisibleBy3(v));
            }
            Ok(mk(Some(n), m, u, v, 0))
        }
        Family::QuadPureQuartic => {
            let n = need_n()?;
            if n == 0 || n == 1 {
                return Err(ParamError::ExcludedN(n));
            }
            if m == 0 || m == 1 {
                return Err(ParamError::ExcludedM(m));
            }
            if !is_squarefree(n)? {
                return Err(ParamError::NNotSquarefree(n));
            }
            if !is_squarefree(m)? {
                return Err(ParamError::MNotSquarefree(m));
            }
            // all degree-8 machinery assumes linear disjointness
            if m == n {
                return Err(ParamError::DegenerateEqualParams(m));
            }
            let g = n.gcd(&m);
            if g != 1 && g != 2 {
                return Err(ParamError::GcdViolation(g));
            }
            // Q(4th root of -1) contains sqrt(2) and sqrt(-2)
            if m == -1 && (n == 2 || n == -2) {
                return Err(ParamError::DegenerateSubfield);
            }
            Ok(mk(Some(n), m, m, 1, 0))
        }
        Family::QuadSimplestQuartic => {
            let n = need_n()?;
            if n == 0 || n == 1 {
                return Err(ParamError::ExcludedN(n));
            }
            if m == 0 || m == 3 || m == -3 {
                return Err(ParamError::ExcludedM(m));
            }
            if !is_squarefree(n)? {
                return Err(ParamError::NNotSquarefree(n));
            }
            let m0 = m
                .checked_mul(m)
                .and_then(|m2| m2.checked_add(16))
                .ok_or(num_util::NumError::TooLargeToFactor(m))?;
            if !odd_part_squarefree(m0)? {
                return Err(ParamError::M0OddSquare(m0));
            }
            let g = n.gcd(&m0);
            if g != 1 && g != 2 {
                return Err(ParamError::GcdViolation(g));
            }
            // Q(sqrt(m0)) is the quadratic subfield of the simplest quartic
            let kernel: i64 = num_util::factor(m0)?
                .iter()
                .filter(|&&(_, e)| e % 2 == 1)
                .map(|&(p, _)| p)
                .product();
            if n == kernel {
                return Err(ParamError::DegenerateSubfield);
            }
            Ok(mk(Some(n), m, m, 1, m0))
        }
        Family::OmegaPureSextic => {
            if m == 0 || m == 1 || m == -1 || m == -3 {
                return Err(ParamError::ExcludedM(m));
            }
            if !is_squarefree(m)? {
                return Err(ParamError::MNotSquarefree(m));
            }
            Ok(mk(None, m, m, 1, 0))
        }
    }
}

/// Defining relation of the partner field generator.
pub fn beta_relation(params: &FamilyParams) -> UniPoly {
    let m = params.m;
    match params.family {
        Family::QuadSimplestCubic => UniPoly::from_int_coeffs(&[-1, -(m + 3), -m, 1]),
        Family::QuadPureCubic => UniPoly::from_int_coeffs(&[-m, 0, 0, 1]),
        Family::QuadPureQuartic => UniPoly::from_int_coeffs(&[-m, 0, 0, 0, 1]),
        Family::QuadSimplestQuartic => UniPoly::from_int_coeffs(&[1, m, -6, -m, 1]),
        Family::OmegaPureSextic => UniPoly::from_int_coeffs(&[-m, 0, 0, 0, 0, 0, 1]),
    }
}

/// Defining relation of the quadratic generator: `x^2 - n`, or `z^2 - z + 1`
/// for the fixed sextic quadratic part.
pub fn quad_relation(params: &FamilyParams) -> UniPoly {
    match params.family {
        Family::OmegaPureSextic => UniPoly::from_int_coeffs(&[1, -1, 1]),
        _ => UniPoly::from_int_coeffs(&[-params.n.unwrap(), 0, 1]),
    }
}

/// The main ring of the composite field: quadratic generator first, so the
/// lexicographic monomial order is `1, b, b^2, .., a, a b, ..` matching the
/// published basis tables.
pub fn main_spec(params: &FamilyParams) -> Arc<TowerSpec> {
    make_tower(vec![quad_relation(params), beta_relation(params)]).expect("valid relations")
}

/// The conjugate-extension ring: same as the main ring for families whose
/// conjugates are rational expressions in the generators, with a root of
/// unity adjoined for the pure cubic (epsilon) and pure quartic (i) families.
pub fn ext_spec(params: &FamilyParams) -> Arc<TowerSpec> {
    let mut rels = vec![quad_relation(params), beta_relation(params)];
    match params.family {
        Family::QuadPureCubic => rels.push(UniPoly::from_int_coeffs(&[1, 1, 1])),
        Family::QuadPureQuartic => rels.push(UniPoly::from_int_coeffs(&[1, 0, 1])),
        _ => {}
    }
    make_tower(rels).expect("valid relations")
}

/// Embed an element of the main ring into the extension ring (the extension
/// appends generators, so monomial exponents transfer positionally).
pub fn embed(e: &TowerElement, main: &Arc<TowerSpec>, ext: &Arc<TowerSpec>) -> TowerElement {
    if main == ext {
        return e.clone();
    }
    let terms = e
        .terms()
        .iter()
        .map(|(idx, c)| {
            let exps = main.exponents(*idx);
            let mut full = vec![0usize; ext.num_vars()];
            full[..exps.len()].copy_from_slice(&exps);
            (ext.monomial_index(&full), c.clone())
        })
        .collect();
    TowerElement::from_terms(ext.clone(), terms)
}

/// All conjugates of the generators inside the extension ring, indexed
/// `(i, j)` with `i` over the 2 quadratic embeddings and `j` over the `d/2`
/// partner embeddings.
#[derive(Debug, Clone)]
pub struct ConjugateTable {
    pub spec: Arc<TowerSpec>,
    pub quad: [TowerElement; 2],
    pub beta: Vec<TowerElement>,
}

impl ConjugateTable {
    pub fn pair_count(&self) -> usize {
        2 * self.beta.len()
    }
}

pub fn conjugate_table(params: &FamilyParams) -> Result<ConjugateTable, ParamError> {
    let ext = ext_spec(params);
    let one = TowerElement::one(ext.clone());
    match params.family {
        Family::QuadSimplestCubic => {
            let x = TowerElement::generator(ext.clone(), 0);
            let y = TowerElement::generator(ext.clone(), 1);
            // beta2 = -1/(1+beta), beta3 = -(1+beta)/beta
            let inv1 = y.add(&one).invert().map_err(|_| ParamError::DegenerateSubfield)?;
            let invy = y.invert().map_err(|_| ParamError::DegenerateSubfield)?;
            let b2 = inv1.neg();
            let b3 = y.add(&one).mul(&invy).neg();
            Ok(ConjugateTable { spec: ext, quad: [x.clone(), x.neg()], beta: vec![y, b2, b3] })
        }
        Family::QuadPureCubic => {
            let x = TowerElement::generator(ext.clone(), 0);
            let y = TowerElement::generator(ext.clone(), 1);
            let z = TowerElement::generator(ext.clone(), 2);
            let betas = (0..3).map(|j| y.mul(&z.pow(j))).collect();
            Ok(ConjugateTable { spec: ext, quad: [x.clone(), x.neg()], beta: betas })
        }
        Family::QuadPureQuartic => {
            let x = TowerElement::generator(ext.clone(), 0);
            let y = TowerElement::generator(ext.clone(), 1);
            let z = TowerElement::generator(ext.clone(), 2);
            let betas = (0..4).map(|j| y.mul(&z.pow(j))).collect();
            Ok(ConjugateTable { spec: ext, quad: [x.clone(), x.neg()], beta: betas })
        }
        Family::QuadSimplestQuartic => {
            let x = TowerElement::generator(ext.clone(), 0);
            let y = TowerElement::generator(ext.clone(), 1);
            // beta2 = (beta-1)/(beta+1), beta3 = -1/beta, beta4 = -(beta+1)/(beta-1)
            let inv_p1 = y.add(&one).invert().map_err(|_| ParamError::DegenerateSubfield)?;
            let inv_m1 = y.sub(&one).invert().map_err(|_| ParamError::DegenerateSubfield)?;
            let invy = y.invert().map_err(|_| ParamError::DegenerateSubfield)?;
            let b2 = y.sub(&one).mul(&inv_p1);
            let b3 = invy.neg();
            let b4 = y.add(&one).mul(&inv_m1).neg();
            Ok(ConjugateTable { spec: ext, quad: [x.clone(), x.neg()], beta: vec![y, b2, b3, b4] })
        }
        Family::OmegaPureSextic => {
            let z = TowerElement::generator(ext.clone(), 0);
            let y = TowerElement::generator(ext.clone(), 1);
            let betas = (0..6).map(|j| y.mul(&z.pow(j))).collect();
            // omega2 = 1 - omega (complex conjugate of the primitive 6th root)
            Ok(ConjugateTable { spec: ext, quad: [z.clone(), one.sub(&z)], beta: betas })
        }
    }
}

/// Component-field descriptors for [`component_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentPart {
    Quadratic(i64),
    SimplestCubic(i64),
    PureCubic(i64),
    PureQuartic(i64),
    SimplestQuartic(i64),
    PureSextic(i64),
    Omega,
}

/// Integral basis and discriminant of a component field, per the published
/// case lists. The discriminant is recomputed from the trace-form Gram
/// matrix, so a wrong case entry cannot pass silently.
pub fn component_basis(part: ComponentPart) -> Result<(Vec<TowerElement>, Int), ParamError> {
    let (relation, exprs): (UniPoly, Vec<String>) = match part {
        ComponentPart::Quadratic(n) => {
            let rel = UniPoly::from_int_coeffs(&[-n, 0, 1]);
            let basis = if residue(n, 4) == 1 {
                vec!["1".into(), "(b+1)/2".into()]
            } else {
                vec!["1".into(), "b".into()]
            };
            (rel, basis)
        }
        ComponentPart::Omega => {
            (UniPoly::from_int_coeffs(&[1, -1, 1]), vec!["1".into(), "b".into()])
        }
        ComponentPart::SimplestCubic(m) => (
            UniPoly::from_int_coeffs(&[-1, -(m + 3), -m, 1]),
            vec!["1".into(), "b".into(), "b^2".into()],
        ),
        ComponentPart::PureCubic(m) => {
            let (u, v) = uv_decompose(m)?;
            let rel = UniPoly::from_int_coeffs(&[-m, 0, 0, 1]);
            let basis = if residue(u * u, 9) != residue(v * v, 9) {
                vec!["1".into(), "b".into(), format!("b^2/{}", v)]
            } else {
                vec![
                    "1".into(),
                    "b".into(),
                    format!("(b^2+{}*b+{})/(3*{})", u * v * v, v * v, v),
                ]
            };
            (rel, basis)
        }
        ComponentPart::PureQuartic(m) => {
            let rel = UniPoly::from_int_coeffs(&[-m, 0, 0, 0, 1]);
            let basis = match residue(m, 8) {
                1 => vec![
                    "1".into(),
                    "b".into(),
                    "(1+b^2)/2".into(),
                    "(1+b+b^2+b^3)/4".into(),
                ],
                5 => vec!["1".into(), "b".into(), "(1+b^2)/2".into(), "(b+b^3)/2".into()],
                _ => vec!["1".into(), "b".into(), "b^2".into(), "b^3".into()],
            };
            (rel, basis)
        }
        ComponentPart::SimplestQuartic(m) => {
            let rel = UniPoly::from_int_coeffs(&[1, m, -6, -m, 1]);
            let v2 = if m == 0 { 0 } else { valuation_i64(m, 2) };
            let basis = match v2 {
                0 => vec!["1".into(), "b".into(), "b^2".into(), "(1+b^3)/2".into()],
                1 => vec!["1".into(), "b".into(), "(1+b^2)/2".into(), "(b+b^3)/2".into()],
                2 => vec![
                    "1".into(),
                    "b".into(),
                    "(1+b^2)/2".into(),
                    "(1+b+b^2+b^3)/4".into(),
                ],
                _ => vec![
                    "1".into(),
                    "b".into(),
                    "(1+2*b-b^2)/4".into(),
                    "(1+b+b^2+b^3)/4".into(),
                ],
            };
            (rel, basis)
        }
        ComponentPart::PureSextic(m) => {
            let rel = UniPoly::from_int_coeffs(&[-m, 0, 0, 0, 0, 0, 1]);
            let basis: Vec<String> = match residue(m, 36) {
                1 => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "(1+b^3)/2".into(),
                    "(4+3*b+4*b^2+b^4)/6".into(),
                    "(3+4*b+3*b^2+b^3+b^5)/6".into(),
                ],
                17 => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "(1+b^3)/2".into(),
                    "(4+3*b+2*b^2+b^4)/6".into(),
                    "(4*b+3*b^2+2*b^3+b^5)/6".into(),
                ],
                5 | 13 | 21 | 25 | 29 | 33 => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "(1+b^3)/2".into(),
                    "(b+b^4)/2".into(),
                    "(b^2+b^5)/2".into(),
                ],
                10 | 19 => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "b^3".into(),
                    "(1+b^2+b^4)/3".into(),
                    "(b+b^3+b^5)/3".into(),
                ],
                26 | 35 => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "b^3".into(),
                    "(1+2*b^2+b^4)/3".into(),
                    "(b+2*b^3+b^5)/3".into(),
                ],
                _ => vec![
                    "1".into(),
                    "b".into(),
                    "b^2".into(),
                    "b^3".into(),
                    "b^4".into(),
                    "b^5".into(),
                ],
            };
            (rel, basis)
        }
    };
    let spec = make_tower(vec![relation]).expect("valid relation");
    let gen = TowerElement::generator(spec.clone(), 0);
    let bindings = expr::Bindings::default();
    let mut basis = Vec::with_capacity(exprs.len());
    for s in &exprs {
        let e = expr::parse(s).expect("component basis expression parses");
        basis.push(
            expr::eval_element(&e, &bindings, &spec, &gen, &gen).expect("component basis evaluates"),
        );
    }
    let disc = gram_determinant(&basis);
    debug_assert!(num_util::rat_is_integer(&disc));
    Ok((basis, disc.numer().clone()))
}

/// Determinant of the trace-form Gram matrix `[trace(b_i * b_j)]`.
pub fn gram_determinant(basis: &[TowerElement]) -> Rat {
    let k = basis.len();
    let mut g = vec![vec![Rat::from(Int::from(0)); k]; k];
    for i in 0..k {
        for j in i..k {
            let t = basis[i].mul(&basis[j]).trace();
            g[i][j] = t.clone();
            g[j][i] = t;
        }
    }
    crate::linalg::det_rat(&g)
}

/// Component bases of the two parts of a composite, in the main ring.
pub fn component_bases_in_main(
    params: &FamilyParams,
) -> Result<(Vec<TowerElement>, Int, Vec<TowerElement>, Int), ParamError> {
    let spec = main_spec(params);
    let quad_part = match params.family {
        Family::OmegaPureSextic => ComponentPart::Omega,
        _ => ComponentPart::Quadratic(params.n.unwrap()),
    };
    let beta_part = match params.family {
        Family::QuadSimplestCubic => ComponentPart::SimplestCubic(params.m),
        Family::QuadPureCubic => ComponentPart::PureCubic(params.m),
        Family::QuadPureQuartic => ComponentPart::PureQuartic(params.m),
        Family::QuadSimplestQuartic => ComponentPart::SimplestQuartic(params.m),
        Family::OmegaPureSextic => ComponentPart::PureSextic(params.m),
    };
    let (qb, qd) = component_basis(quad_part)?;
    let (bb, bd) = component_basis(beta_part)?;
    // re-express single-variable elements in the composite ring
    let quad_gen = TowerElement::generator(spec.clone(), 0);
    let beta_gen = TowerElement::generator(spec.clone(), 1);
    let lift = |elems: &[TowerElement], gen: &TowerElement| -> Vec<TowerElement> {
        elems
            .iter()
            .map(|e| {
                let mut acc = TowerElement::zero(spec.clone());
                for (idx, c) in e.terms() {
                    let p = gen.pow(*idx).scalar_mul(c);
                    acc = acc.add(&p);
                }
                acc
            })
            .collect()
    };
    Ok((lift(&qb, &quad_gen), qd, lift(&bb, &beta_gen), bd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let p = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap();
        assert_eq!(p.degree, 6);

        let p = validate_params(Family::QuadPureCubic, Some(7), 50).unwrap();
        assert_eq!((p.u, p.v), (2, 5));

        assert_eq!(
            validate_params(Family::QuadPureCubic, Some(7), 12),
            Err(ParamError::VDivisibleBy2(2))
        );
        assert_eq!(
            validate_params(Family::QuadSimplestQuartic, Some(5), 3),
            Err(ParamError::ExcludedM(3))
        );
        assert_eq!(
            validate_params(Family::QuadPureQuartic, Some(3), 3),
            Err(ParamError::DegenerateEqualParams(3))
        );
        assert_eq!(
            validate_params(Family::OmegaPureSextic, None, -3),
            Err(ParamError::ExcludedM(-3))
        );
        // gcd checks
        assert!(matches!(
            validate_params(Family::QuadSimplestCubic, Some(13), 1),
            Err(ParamError::GcdViolation(13))
        ));
        assert!(validate_params(Family::QuadPureQuartic, Some(-1), 7).is_ok());
    }

    #[test]
    fn component_bases_and_discriminants() {
        // quadratic: {1, (1+sqrt5)/2}, D = 5
        let (b, d) = component_basis(ComponentPart::Quadratic(5)).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(d, Int::from(5));
        let (_, d) = component_basis(ComponentPart::Quadratic(3)).unwrap();
        assert_eq!(d, Int::from(12));
        let (_, d) = component_basis(ComponentPart::Quadratic(-3)).unwrap();
        assert_eq!(d, Int::from(-3));

        // pure cubic m = 50 = 2*5^2: u^2=4, v^2=25, 4 != 25 mod 9 -> D = -2700
        let (_, d) = component_basis(ComponentPart::PureCubic(50)).unwrap();
        assert_eq!(d, Int::from(-2700));

        // pure quartic m = 5: D = -16 * 125 = -2000
        let (_, d) = component_basis(ComponentPart::PureQuartic(5)).unwrap();
        assert_eq!(d, Int::from(-2000));

        // simplest cubic m = 1: D = 169
        let (_, d) = component_basis(ComponentPart::SimplestCubic(1)).unwrap();
        assert_eq!(d, Int::from(169));

        // omega: D = -3
        let (_, d) = component_basis(ComponentPart::Omega).unwrap();
        assert_eq!(d, Int::from(-3));
    }

    #[test]
    fn conjugates_satisfy_defining_relations() {
        for (fam, n, m) in [
            (Family::QuadSimplestCubic, Some(5), 1),
            (Family::QuadPureCubic, Some(7), 50),
            (Family::QuadPureQuartic, Some(-1), 7),
            (Family::QuadSimplestQuartic, Some(5), 1),
            (Family::OmegaPureSextic, None, 2),
        ] {
            let params = validate_params(fam, n, m).unwrap();
            let table = conjugate_table(&params).unwrap();
            let g = beta_relation(&params);
            for b in &table.beta {
                assert!(g.eval_element(b).is_zero(), "{fam} beta conjugate fails g");
            }
            let f = quad_relation(&params);
            for a in &table.quad {
                assert!(f.eval_element(a).is_zero(), "{fam} quad conjugate fails f");
            }
            // all pairs distinct
            for i in 0..table.beta.len() {
                for j in i + 1..table.beta.len() {
                    assert_ne!(table.beta[i], table.beta[j]);
                }
            }
        }
    }

    #[test]
    fn pure_quartic_conjugate_is_i_beta() {
        let params = validate_params(Family::QuadPureQuartic, Some(-1), 3).unwrap();
        let t = conjugate_table(&params).unwrap();
        let z = TowerElement::generator(t.spec.clone(), 2);
        // beta4 = -i * beta: z^3 = -z since z^2 = -1
        assert_eq!(t.beta[3], t.beta[0].mul(&z).neg());
        assert_eq!(t.beta[3], t.beta[0].mul(&z.pow(3)));
    }

    #[test]
    fn simplest_quartic_conjugate_identities() {
        let params = validate_params(Family::QuadSimplestQuartic, Some(5), 1).unwrap();
        let t = conjugate_table(&params).unwrap();
        // beta3 = -1/beta
        let prod = t.beta[0].mul(&t.beta[2]);
        assert_eq!(prod, TowerElement::from_int(t.spec.clone(), -1));
    }
}
