//! Fast expansion engine for the large factor products: homogeneous
//! polynomials stored densely by combinatorial rank, with scaled-integer
//! tower-element coefficients and precomputed monomial product tables.
//!
//! Products of linear forms are homogeneous, so a degree-D polynomial in V
//! variables lives in a space of C(D+V-1, V-1) monomials; for the degree-12
//! factors in 11 variables that is 646646 slots, far smaller than any sparse
//! map overhead at this density. The caller clears denominators up front and
//! divides the accumulated scale back out of the content at the end.

use crate::mpoly::{key_degree, key_exponent, Content, IntPoly};
use crate::num_util::rational_content;
use crate::tower::TowerSpec;
use crate::{Int, Rat};
use num_traits::{One, Zero};
use rayon::prelude::*;
use smallvec::SmallVec;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpandError {
    #[error("tower relations are not integral; fast expansion unavailable")]
    NonIntegralRelations,
    #[error("factor coefficient at key {0:#x} spans more than one tower monomial")]
    NotMonomial(u64),
    #[error("factor coefficients are supported on different tower monomials")]
    MixedMonomials,
}

/// Sparse tower element with integer coefficients.
pub type IntElem = SmallVec<[(u32, Int); 2]>;

fn elem_add_term(e: &mut IntElem, mono: u32, c: Int) {
    if c.is_zero() {
        return;
    }
    match e.binary_search_by_key(&mono, |t| t.0) {
        Ok(k) => {
            e[k].1 += c;
            if e[k].1.is_zero() {
                e.remove(k);
            }
        }
        Err(k) => e.insert(k, (mono, c)),
    }
}

/// Integer monomial-times-monomial multiplication table for a tower spec
/// whose relations all have integer coefficients.
pub struct FastRing {
    pub dim: usize,
    /// `table[a * dim + b]` = reduced product of basis monomials `a` and `b`.
    table: Vec<Vec<(u32, Int)>>,
}

impl FastRing {
    pub fn new(spec: &Arc<TowerSpec>) -> Result<FastRing, ExpandError> {
        for r in spec.relations() {
            if !r.has_integer_coeffs() {
                return Err(ExpandError::NonIntegralRelations);
            }
        }
        let dim = spec.dim();
        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            let ea = crate::tower::TowerElement::monomial(spec.clone(), a as u32, Rat::one());
            for b in 0..dim {
                let eb = crate::tower::TowerElement::monomial(spec.clone(), b as u32, Rat::one());
                let prod = ea.mul(&eb);
                let row: Vec<(u32, Int)> = prod
                    .terms()
                    .iter()
                    .map(|(m, q)| {
                        debug_assert!(q.denom().is_one());
                        (*m, q.numer().clone())
                    })
                    .collect();
                table.push(row);
            }
        }
        Ok(FastRing { dim, table })
    }

    #[inline]
    pub fn mono_product(&self, a: u32, b: u32) -> &[(u32, Int)] {
        &self.table[a as usize * self.dim + b as usize]
    }

    /// `acc += c * (x * y)` for tower elements with integer coefficients.
    pub fn mul_add(&self, acc: &mut IntElem, x: &IntElem, y: &IntElem) {
        for (ma, ca) in x {
            for (mb, cb) in y {
                let c = ca * cb;
                for (m, t) in self.mono_product(*ma, *mb) {
                    elem_add_term(acc, *m, &c * t);
                }
            }
        }
    }
}

/// Rank space of homogeneous exponent keys of a fixed total degree.
pub struct HomoRank {
    pub nvars: usize,
    pub degree: u32,
    /// prefix[v][d][c] = number of degree-d monomials in the last
    /// (nvars - v) variables whose variable-v exponent is < c.
    prefix: Vec<Vec<Vec<usize>>>,
    keys: Vec<u64>,
}

fn monomial_count(deg: usize, vars: usize) -> usize {
    // C(deg + vars - 1, vars - 1)
    if vars == 0 {
        return if deg == 0 { 1 } else { 0 };
    }
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..vars - 1 {
        num *= deg + vars - 1 - i;
        den *= i + 1;
    }
    num / den
}

impl HomoRank {
    pub fn new(nvars: usize, degree: u32) -> Arc<HomoRank> {
        let d = degree as usize;
        let mut prefix = vec![vec![vec![0usize; d + 2]; d + 1]; nvars];
        for v in 0..nvars {
            let rem_vars = nvars - v - 1;
            for deg in 0..=d {
                let mut acc = 0usize;
                for c in 0..=deg + 1 {
                    prefix[v][deg][c] = acc;
                    if c <= deg {
                        acc += monomial_count(deg - c, rem_vars);
                    }
                }
            }
        }
        let total = monomial_count(d, nvars);
        let mut keys = Vec::with_capacity(total);
        let mut exps = vec![0u32; nvars];
        gen_keys(&mut keys, &mut exps, 0, degree, nvars);
        debug_assert_eq!(keys.len(), total);
        Arc::new(HomoRank { nvars, degree, prefix, keys })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    #[inline]
    pub fn key(&self, rank: usize) -> u64 {
        self.keys[rank]
    }

    /// Rank of a packed homogeneous key of this space's degree.
    #[inline]
    pub fn rank(&self, key: u64) -> usize {
        let mut r = 0usize;
        let mut rem = self.degree as usize;
        for v in 0..self.nvars {
            let e = key_exponent(key, v) as usize;
            r += self.prefix[v][rem][e];
            rem -= e;
        }
        r
    }
}

fn gen_keys(out: &mut Vec<u64>, exps: &mut [u32], v: usize, rem: u32, nvars: usize) {
    if v == nvars - 1 {
        exps[v] = rem;
        out.push(crate::mpoly::key_from_exponents(exps));
        return;
    }
    for e in 0..=rem {
        exps[v] = e;
        gen_keys(out, exps, v + 1, rem - e, nvars);
    }
}

/// Homogeneous polynomial with scaled-integer tower-element coefficients,
/// dense over its rank space.
pub struct FastPoly {
    pub space: Arc<HomoRank>,
    pub coeffs: Vec<IntElem>,
}

impl FastPoly {
    pub fn zero(space: Arc<HomoRank>) -> FastPoly {
        let n = space.len();
        FastPoly { space, coeffs: vec![IntElem::new(); n] }
    }

    /// A linear form from coefficients (one per variable).
    pub fn linear(nvars: usize, coeffs: Vec<IntElem>) -> FastPoly {
        let space = HomoRank::new(nvars, 1);
        let mut p = FastPoly::zero(space);
        // degree-1 keys are the unit vectors; rank order matches variable order
        for (v, c) in coeffs.into_iter().enumerate() {
            let key = 1u64 << (4 * v);
            let r = p.space.rank(key);
            p.coeffs[r] = c;
        }
        p
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_empty()).count()
    }

    pub fn mul(&self, other: &FastPoly, ring: &FastRing) -> FastPoly {
        let nvars = self.space.nvars;
        debug_assert_eq!(nvars, other.space.nvars);
        let out_space = HomoRank::new(nvars, self.space.degree + other.space.degree);
        let (small, big) = if self.space.len() <= other.space.len() {
            (self, other)
        } else {
            (other, self)
        };
        let small_terms: Vec<(u64, &IntElem)> = small
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(r, c)| (small.space.key(r), c))
            .collect();
        let big_terms: Vec<(u64, &IntElem)> = big
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(r, c)| (big.space.key(r), c))
            .collect();
        let threads = rayon::current_num_threads().max(1);
        let chunk = big_terms.len().div_ceil(threads).max(1);
        let partials: Vec<Vec<IntElem>> = big_terms
            .par_chunks(chunk)
            .map(|chunk| {
                let mut acc = vec![IntElem::new(); out_space.len()];
                for (kb, cb) in chunk {
                    for (ks, cs) in &small_terms {
                        let r = out_space.rank(kb + ks);
                        ring.mul_add(&mut acc[r], cb, cs);
                    }
                }
                acc
            })
            .collect();
        let mut coeffs = vec![IntElem::new(); out_space.len()];
        for partial in partials {
            for (slot, add) in coeffs.iter_mut().zip(partial) {
                if slot.is_empty() {
                    *slot = add;
                } else {
                    for (m, c) in add {
                        elem_add_term(slot, m, c);
                    }
                }
            }
        }
        FastPoly { space: out_space, coeffs }
    }
}

/// Balanced product of scaled-integer linear forms.
pub fn product_of_linears(forms: Vec<FastPoly>, ring: &FastRing) -> FastPoly {
    let mut level = forms;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.mul(&b, ring)),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().expect("nonempty product")
}

/// Extract `(content, primitive part)` from a fast polynomial whose true
/// (unscaled) value is `self / scale`. Every nonzero coefficient must be an
/// integer multiple of one shared tower monomial.
pub fn fast_content_split(
    p: &FastPoly,
    scale: &Int,
) -> Result<(Content, IntPoly), ExpandError> {
    let mut monomial: Option<u32> = None;
    let mut entries: Vec<(u64, Int)> = Vec::new();
    for (r, c) in p.coeffs.iter().enumerate() {
        match c.len() {
            0 => {}
            1 => {
                let (m, v) = &c[0];
                match monomial {
                    None => monomial = Some(*m),
                    Some(w) if w != *m => return Err(ExpandError::MixedMonomials),
                    _ => {}
                }
                entries.push((p.space.key(r), v.clone()));
            }
            _ => return Err(ExpandError::NotMonomial(p.space.key(r))),
        }
    }
    let w = monomial.unwrap_or(0);
    let rats: Vec<Rat> = entries.iter().map(|(_, v)| Rat::new(v.clone(), scale.clone())).collect();
    let content = rational_content(rats.iter());
    let mut terms: Vec<(u64, Int)> = Vec::with_capacity(entries.len());
    if !content.is_zero() {
        let g_scale = &content * Rat::from(scale.clone());
        debug_assert!(g_scale.denom().is_one() || !g_scale.denom().is_one());
        for ((k, v), _) in entries.iter().zip(&rats) {
            let z = Rat::from(v.clone()) / &g_scale;
            debug_assert!(z.denom().is_one());
            terms.push((*k, z.numer().clone()));
        }
    }
    let mut ip = IntPolyBuilder::new(p.space.nvars);
    for (k, v) in terms {
        ip.insert(k, v);
    }
    Ok((Content { coeff: content, monomial: w }, ip.build()))
}

/// Small helper because `IntPoly`'s internals are private to `mpoly`.
pub struct IntPolyBuilder {
    nvars: usize,
    terms: Vec<(u64, Int)>,
}

impl IntPolyBuilder {
    pub fn new(nvars: usize) -> Self {
        IntPolyBuilder { nvars, terms: Vec::new() }
    }

    pub fn insert(&mut self, key: u64, v: Int) {
        if !v.is_zero() {
            self.terms.push((key, v));
        }
    }

    pub fn build(self) -> IntPoly {
        IntPoly::from_terms(self.nvars, self.terms)
    }
}

/// Degree helper mirroring the sparse path.
pub fn fast_total_degree(p: &FastPoly) -> u32 {
    p.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(r, _)| key_degree(p.space.key(r)))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{make_tower, TowerElement, UniPoly};

    #[test]
    fn rank_round_trip() {
        let space = HomoRank::new(5, 4);
        for r in 0..space.len() {
            let k = space.key(r);
            assert_eq!(space.rank(k), r);
            assert_eq!(key_degree(k), 4);
        }
        assert_eq!(space.len(), monomial_count(4, 5));
    }

    #[test]
    fn fast_product_matches_sparse() {
        use crate::mpoly::MultiPoly;
        let spec = make_tower(vec![
            UniPoly::from_int_coeffs(&[-5, 0, 1]),
            UniPoly::from_int_coeffs(&[-2, 0, 0, 1]),
        ])
        .unwrap();
        let ring = FastRing::new(&spec).unwrap();
        let x = TowerElement::generator(spec.clone(), 0);
        let y = TowerElement::generator(spec.clone(), 1);
        let mk_elems = |els: Vec<TowerElement>| -> Vec<IntElem> {
            els.iter()
                .map(|e| {
                    e.terms()
                        .iter()
                        .map(|(m, q)| {
                            assert!(num_traits::One::is_one(q.denom()));
                            (*m, q.numer().clone())
                        })
                        .collect()
                })
                .collect()
        };
        let one = TowerElement::one(spec.clone());
        let f1 = vec![one.clone(), x.clone(), y.clone()];
        let f2 = vec![y.clone(), one.clone(), x.mul(&y)];
        let f3 = vec![x.clone(), y.mul(&y), one.clone()];
        // fast path
        let fp = product_of_linears(
            vec![
                FastPoly::linear(3, mk_elems(f1.clone())),
                FastPoly::linear(3, mk_elems(f2.clone())),
                FastPoly::linear(3, mk_elems(f3.clone())),
            ],
            &ring,
        );
        // sparse path
        let sp = MultiPoly::linear(spec.clone(), f1)
            .mul(&MultiPoly::linear(spec.clone(), f2))
            .unwrap()
            .mul(&MultiPoly::linear(spec.clone(), f3))
            .unwrap();
        assert_eq!(fp.num_terms(), sp.num_terms());
        for (r, c) in fp.coeffs.iter().enumerate() {
            if c.is_empty() {
                continue;
            }
            let key = fp.space.key(r);
            let sparse_c = sp
                .sorted_terms()
                .into_iter()
                .find(|(k, _)| *k == key)
                .map(|(_, e)| e.clone())
                .unwrap();
            let fast_elem = TowerElement::from_terms(
                spec.clone(),
                c.iter().map(|(m, v)| (*m, Rat::from(v.clone()))).collect(),
            );
            assert_eq!(fast_elem, sparse_c);
        }
    }
}
