//! Sparse multivariate polynomials in the index variables `X_2..X_d` with
//! tower-element coefficients, and integer polynomials for primitive parts.
//!
//! Exponent vectors are packed 4 bits per variable into a `u64` key (total
//! degrees here never exceed 12), so monomial products are single integer
//! additions and hashing is cheap.

use crate::num_util::{gcd_all, rational_content};
use crate::tower::{TowerElement, TowerSpec};
use crate::{Int, Rat};
use num_traits::Zero;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MPolyError {
    #[error("polynomials disagree in variable count or tower spec")]
    ShapeMismatch,
    #[error("coefficient of monomial key {key:#x} spans more than one tower monomial")]
    ContentNotMonomial { key: u64 },
    #[error("coefficients are supported on different tower monomials ({0} vs {1})")]
    MixedMonomials(u32, u32),
}

pub const MAX_PACKED_VARS: usize = 15;

/// Packed exponent key helpers.
pub fn key_degree(key: u64) -> u32 {
    let mut k = key;
    let mut d = 0;
    while k != 0 {
        d += (k & 0xf) as u32;
        k >>= 4;
    }
    d
}

pub fn key_exponent(key: u64, var: usize) -> u32 {
    ((key >> (4 * var)) & 0xf) as u32
}

pub fn key_from_exponents(exps: &[u32]) -> u64 {
    let mut key = 0u64;
    for (v, &e) in exps.iter().enumerate() {
        debug_assert!(e < 16);
        key |= (e as u64) << (4 * v);
    }
    key
}

/// A sparse polynomial over a tower ring; no zero coefficients are stored.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    spec: Arc<TowerSpec>,
    nvars: usize,
    terms: FxHashMap<u64, TowerElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl MultiPoly {
    pub fn zero(spec: Arc<TowerSpec>, nvars: usize) -> Self {
        assert!(nvars <= MAX_PACKED_VARS);
        MultiPoly { spec, nvars, terms: FxHashMap::default() }
    }

    /// The linear polynomial `sum coeffs[v] * X_v`.
    pub fn linear(spec: Arc<TowerSpec>, coeffs: Vec<TowerElement>) -> Self {
        let nvars = coeffs.len();
        assert!(nvars <= MAX_PACKED_VARS);
        let mut terms = FxHashMap::default();
        for (v, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(1u64 << (4 * v), c);
            }
        }
        MultiPoly { spec, nvars, terms }
    }

    pub fn from_terms(
        spec: Arc<TowerSpec>,
        nvars: usize,
        terms: impl IntoIterator<Item = (u64, TowerElement)>,
    ) -> Self {
        let mut map = FxHashMap::default();
        for (k, c) in terms {
            if !c.is_zero() {
                map.insert(k, c);
            }
        }
        MultiPoly { spec, nvars, terms: map }
    }

    pub fn spec(&self) -> &Arc<TowerSpec> {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &TowerElement)> {
        self.terms.iter()
    }

    /// Terms sorted by packed key; the canonical order for reports and tests.
    pub fn sorted_terms(&self) -> Vec<(u64, &TowerElement)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by_key(|&(k, _)| k);
        v
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&k| key_degree(k)).max().unwrap_or(0)
    }

    fn check_shape(&self, other: &Self) -> Result<(), MPolyError> {
        if self.nvars != other.nvars || self.spec != other.spec {
            return Err(MPolyError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_shape(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            match terms.get_mut(k) {
                Some(e) => {
                    let s = e.add(c);
                    if s.is_zero() {
                        terms.remove(k);
                    } else {
                        *e = s;
                    }
                }
                None => {
                    terms.insert(*k, c.clone());
                }
            }
        }
        Ok(MultiPoly { spec: self.spec.clone(), nvars: self.nvars, terms })
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            spec: self.spec.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MPolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &TowerElement) -> Self {
        let mut terms = FxHashMap::default();
        for (k, e) in &self.terms {
            let p = e.mul(c);
            if !p.is_zero() {
                terms.insert(*k, p);
            }
        }
        MultiPoly { spec: self.spec.clone(), nvars: self.nvars, terms }
    }

    /// Exact sparse product, streaming term by term with canonical reduction.
    /// The outer factor is split across threads; merging is plain addition so
    /// the result is independent of scheduling.
    pub fn mul(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.spec.clone(), self.nvars));
        }
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let big_terms: Vec<(&u64, &TowerElement)> = big.terms.iter().collect();
        let chunk = big_terms.len().div_ceil(rayon::current_num_threads().max(1));
        let maps: Vec<FxHashMap<u64, TowerElement>> = big_terms
            .par_chunks(chunk.max(1))
            .map(|chunk| {
                let mut acc: FxHashMap<u64, TowerElement> = FxHashMap::with_capacity_and_hasher(
                    chunk.len() * small.terms.len(),
                    Default::default(),
                );
                for (kb, cb) in chunk {
                    for (ks, cs) in &small.terms {
                        let k = *kb + ks;
                        let p = cb.mul(cs);
                        if p.is_zero() {
                            continue;
                        }
                        match acc.get_mut(&k) {
                            Some(e) => *e = e.add(&p),
                            None => {
                                acc.insert(k, p);
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut terms: FxHashMap<u64, TowerElement> = FxHashMap::default();
        for m in maps {
            for (k, c) in m {
                match terms.get_mut(&k) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        terms.insert(k, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { spec: self.spec.clone(), nvars: self.nvars, terms })
    }

    /// Evaluate at an integer point, yielding a tower element.
    pub fn eval_int(&self, x: &[i64]) -> TowerElement {
        assert_eq!(x.len(), self.nvars);
        let mut acc = TowerElement::zero(self.spec.clone());
        for (k, c) in &self.terms {
            let mut factor = Int::from(1);
            for v in 0..self.nvars {
                let e = key_exponent(*k, v);
                for _ in 0..e {
                    factor *= Int::from(x[v]);
                }
            }
            if !factor.is_zero() {
                acc = acc.add(&c.scalar_mul(&Rat::from(factor)));
            }
        }
        acc
    }

    /// Split into content and primitive part. Requires every coefficient to
    /// be a rational multiple of one shared tower monomial `w`; the content is
    /// `(c, w)` with `c > 0`, and the primitive part has integer coefficients
    /// with gcd 1 and carries the signs.
    pub fn content_split(&self) -> Result<(Content, IntPoly), MPolyError> {
        let mut monomial: Option<u32> = None;
        let mut rats: Vec<(u64, Rat)> = Vec::with_capacity(self.terms.len());
        for (k, e) in &self.terms {
            let ts = e.terms();
            if ts.len() != 1 {
                return Err(MPolyError::ContentNotMonomial { key: *k });
            }
            let (mono, q) = (ts[0].0, ts[0].1.clone());
            match monomial {
                None => monomial = Some(mono),
                Some(w) if w != mono => return Err(MPolyError::MixedMonomials(w, mono)),
                _ => {}
            }
            rats.push((*k, q));
        }
        let w = monomial.unwrap_or(0);
        let c = rational_content(rats.iter().map(|(_, q)| q));
        let mut terms = FxHashMap::default();
        if !c.is_zero() {
            for (k, q) in rats {
                let z = q / &c;
                debug_assert!(num_traits::One::is_one(z.denom()));
                terms.insert(k, z.numer().clone());
            }
        }
        Ok((Content { coeff: c, monomial: w }, IntPoly { nvars: self.nvars, terms }))
    }
}

/// Content of a factor: a positive rational times a tower monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Content {
    pub coeff: Rat,
    pub monomial: u32,
}

impl Content {
    /// The square of the content as a rational, using `w^2` reduced in the
    /// given spec (a rational for the monomials that occur here).
    pub fn square(&self, spec: &Arc<TowerSpec>) -> Rat {
        let w = TowerElement::monomial(spec.clone(), self.monomial, Rat::one());
        let w2 = w.mul(&w);
        let ts = w2.terms();
        assert!(ts.len() == 1 && ts[0].0 == 0, "content monomial squared is not rational");
        &self.coeff * &self.coeff * ts[0].1.clone()
    }

    pub fn is_rational(&self) -> bool {
        self.monomial == 0
    }
}

use num_traits::One;

/// Integer-coefficient sparse polynomial (primitive parts `G_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct IntPoly {
    nvars: usize,
    terms: FxHashMap<u64, Int>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: FxHashMap::default() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (u64, Int)>) -> Self {
        let mut map = FxHashMap::default();
        for (k, v) in terms {
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
        IntPoly { nvars, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Int)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&k| key_degree(k)).max().unwrap_or(0)
    }

    pub fn content(&self) -> Int {
        gcd_all(self.terms.values())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn eval(&self, x: &[Int]) -> Int {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Int::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..self.nvars {
                let e = key_exponent(*k, v);
                for _ in 0..e {
                    t *= &x[v];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn coeff(&self, key: u64) -> Int {
        self.terms.get(&key).cloned().unwrap_or_else(Int::zero)
    }

    pub fn keys(&self) -> impl Iterator<Item = &u64> {
        self.terms.keys()
    }
}

/// A rational linear combination `sum_i c_i * P_i` (optionally with `P_i`
/// squared), materialized as a term map for coefficient-wise divisibility
/// checks.
pub fn combo(nvars: usize, parts: &[(Rat, &IntPoly, bool)]) -> Result<FxHashMap<u64, Rat>, MPolyError> {
    let mut acc: FxHashMap<u64, Rat> = FxHashMap::default();
    let add_term = |acc: &mut FxHashMap<u64, Rat>, k: u64, q: Rat| {
        if q.is_zero() {
            return;
        }
        let remove = {
            let e = acc.entry(k).or_insert_with(Rat::zero);
            *e += q;
            e.is_zero()
        };
        if remove {
            acc.remove(&k);
        }
    };
    for (c, p, squared) in parts {
        if p.nvars != nvars {
            return Err(MPolyError::ShapeMismatch);
        }
        if *squared {
            let terms: Vec<(&u64, &Int)> = p.terms.iter().collect();
            let partial: Vec<FxHashMap<u64, Int>> = terms
                .par_chunks(terms.len().div_ceil(rayon::current_num_threads().max(1)).max(1))
                .map(|chunk| {
                    let mut m: FxHashMap<u64, Int> = FxHashMap::default();
                    for (ka, ca) in chunk {
                        for (kb, cb) in &p.terms {
                            let k = *ka + *kb;
                            let t = *ca * cb;
                            *m.entry(k).or_insert_with(Int::zero) += t;
                        }
                    }
                    m
                })
                .collect();
            for m in partial {
                for (k, t) in m {
                    add_term(&mut acc, k, c * Rat::from(t));
                }
            }
        } else {
            for (k, t) in &p.terms {
                add_term(&mut acc, *k, c * Rat::from(t.clone()));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{make_tower, UniPoly};

    fn q(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    fn quad5() -> Arc<TowerSpec> {
        make_tower(vec![UniPoly::from_int_coeffs(&[-5, 0, 1])]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        // (X2 + x X3)(X2 - x X3) = X2^2 - 5 X3^2 over Q[x]/(x^2-5)
        let s = quad5();
        let x = TowerElement::generator(s.clone(), 0);
        let one = TowerElement::one(s.clone());
        let p = MultiPoly::linear(s.clone(), vec![one.clone(), x.clone()]);
        let m = MultiPoly::linear(s.clone(), vec![one.clone(), x.neg()]);
        let prod = p.mul(&m).unwrap();
        assert_eq!(prod.num_terms(), 2);
        assert_eq!(prod.total_degree(), 2);
        let k22 = key_from_exponents(&[2, 0]);
        let k33 = key_from_exponents(&[0, 2]);
        assert_eq!(prod.terms.get(&k22), Some(&one));
        assert_eq!(prod.terms.get(&k33), Some(&TowerElement::from_int(s.clone(), -5)));
    }

    #[test]
    fn product_of_generic_linear_forms_degree() {
        // products of generic linear forms terminate with additive degrees;
        // the full 12-forms-in-11-variables case runs in the acceptance suite
        let s = quad5();
        let nv = 7;
        let mut p = MultiPoly::linear(
            s.clone(),
            (0..nv).map(|v| TowerElement::from_int(s.clone(), v + 1)).collect(),
        );
        for i in 0..6u32 {
            let f = MultiPoly::linear(
                s.clone(),
                (0..nv)
                    .map(|v| TowerElement::from_int(s.clone(), (v as i64 + 2 * i as i64) % 5 + 1))
                    .collect(),
            );
            p = p.mul(&f).unwrap();
        }
        assert_eq!(p.total_degree(), 7);
    }

    #[test]
    fn content_split_examples() {
        let s = quad5();
        // 6 X2 + 9 X3 -> content 3, primitive 2 X2 + 3 X3
        let p = MultiPoly::linear(
            s.clone(),
            vec![TowerElement::from_int(s.clone(), 6), TowerElement::from_int(s.clone(), 9)],
        );
        let (content, g) = p.content_split().unwrap();
        assert_eq!(content.coeff, q(3));
        assert_eq!(content.monomial, 0);
        assert!(g.is_primitive());
        assert_eq!(g.coeff(key_from_exponents(&[1, 0])), Int::from(2));

        // coefficients all multiples of x: content carries the monomial
        let x = TowerElement::generator(s.clone(), 0);
        let p = MultiPoly::linear(s.clone(), vec![x.scalar_mul(&q(10)), x.scalar_mul(&q(15))]);
        let (content, g) = p.content_split().unwrap();
        assert_eq!(content.coeff, q(5));
        assert_eq!(content.monomial, 1);
        assert_eq!(content.square(&s), q(125)); // (5x)^2 = 25*5
        assert!(g.is_primitive());

        // mixed monomials are rejected
        let one = TowerElement::one(s.clone());
        let p = MultiPoly::linear(s.clone(), vec![x, one]);
        assert!(matches!(p.content_split(), Err(MPolyError::MixedMonomials(..))));
    }

    #[test]
    fn content_split_round_trip() {
        let s = quad5();
        let p = MultiPoly::from_terms(
            s.clone(),
            2,
            vec![
                (
                    key_from_exponents(&[2, 0]),
                    TowerElement::scalar(s.clone(), Rat::new(Int::from(4), Int::from(3))),
                ),
                (
                    key_from_exponents(&[1, 1]),
                    TowerElement::scalar(s.clone(), Rat::new(Int::from(-2), Int::from(3))),
                ),
            ],
        );
        let (content, g) = p.content_split().unwrap();
        // f*G = P exactly
        for (k, c) in g.terms() {
            let back = &content.coeff * Rat::from(c.clone());
            assert_eq!(p.terms.get(k).unwrap().terms()[0].1, back);
        }
        assert!(g.is_primitive());
    }
}
