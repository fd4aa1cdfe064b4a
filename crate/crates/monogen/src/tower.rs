//! Exact arithmetic in triangular quotient rings
//! `Q[x_1,..,x_k] / (r_1(x_1), .., r_k(x_k))`.
//!
//! Each relation is a monic univariate polynomial in its own generator, so the
//! ring is a tensor product of univariate quotient rings and reduction is
//! per-variable. The monomial basis `{x_1^{e_1} .. x_k^{e_k} : e_i < deg r_i}`
//! is fixed and ordered lexicographically by exponent vector (first generator
//! most significant). Elements are stored as sorted sparse coefficient
//! vectors over that basis.

use crate::linalg;
use crate::num_util::rat_is_integer;
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum TowerError {
    #[error("relation {0} is not monic of degree >= 1")]
    BadRelation(usize),
    #[error("no relations given")]
    EmptyTower,
    #[error("elements belong to different tower specs")]
    SpecMismatch,
    #[error("cannot invert zero")]
    InvertZero,
    #[error("element is a zero divisor; the quotient ring is not a field here")]
    ZeroDivisor,
}

/// Univariate polynomial with rational coefficients, `coeffs[i]` the
/// coefficient of `t^i`. The leading stored coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rat::from(Int::from(c))).collect())
    }

    /// `t^d + lower`, from the lower coefficients `lower[i]` of `t^i`.
    pub fn monic(d: usize, lower: Vec<Rat>) -> Self {
        let mut coeffs = lower;
        coeffs.resize(d, Rat::zero());
        coeffs.push(Rat::one());
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(rat_is_integer)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate at a tower element by Horner's rule.
    pub fn eval_element(&self, x: &TowerElement) -> TowerElement {
        let spec = x.spec();
        let mut acc = TowerElement::zero(spec.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&TowerElement::scalar(spec.clone(), c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from(Int::from(i)))
                .collect(),
        )
    }

    /// Discriminant via the Sylvester resultant of the polynomial and its
    /// derivative: `(-1)^{d(d-1)/2} res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Rat {
        let d = self.degree().expect("discriminant of zero polynomial");
        assert!(d >= 1);
        let res = linalg::resultant(&self.coeffs, &self.derivative().coeffs);
        let sign = if (d * (d - 1) / 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
        sign * res / self.coeffs.last().unwrap().clone()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    write!(f, "t")?;
                    if i > 1 {
                        write!(f, "^{}", i)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// A triangular quotient ring with its fixed monomial basis and the
/// per-variable reduction and trace tables.
#[derive(Debug)]
pub struct TowerSpec {
    relations: Vec<UniPoly>,
    degs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
    /// `pow[v][e]` = coefficients (length `degs[v]`) of `x_v^e` reduced mod
    /// `r_v`, for `e <= 2*(degs[v]-1)`.
    pow: Vec<Vec<Vec<Rat>>>,
    /// `power_trace[v][e]` = trace of multiplication by `x_v^e` on
    /// `Q[x]/(r_v)`, i.e. the e-th power sum of the roots of `r_v`.
    power_trace: Vec<Vec<Rat>>,
    /// Lazily built full monomial product table, `dim * dim` reduced rows.
    mono_mul: std::sync::OnceLock<Vec<Vec<(u32, Rat)>>>,
    /// Lazily built per-monomial traces.
    mono_traces: std::sync::OnceLock<Vec<Rat>>,
}

impl PartialEq for TowerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}
impl Eq for TowerSpec {}

impl TowerSpec {
    /// Build a spec from monic relations, one per generator.
    pub fn new(relations: Vec<UniPoly>) -> Result<Arc<TowerSpec>, TowerError> {
        if relations.is_empty() {
            return Err(TowerError::EmptyTower);
        }
        let mut degs = Vec::with_capacity(relations.len());
        for (i, r) in relations.iter().enumerate() {
            match r.degree() {
                Some(d) if d >= 1 && r.is_monic() => degs.push(d),
                _ => return Err(TowerError::BadRelation(i)),
            }
        }
        let dim: usize = degs.iter().product();
        let mut strides = vec![1usize; degs.len()];
        for v in (0..degs.len().saturating_sub(1)).rev() {
            strides[v] = strides[v + 1] * degs[v + 1];
        }
        let pow = relations
            .iter()
            .zip(&degs)
            .map(|(r, &d)| power_table(r, d))
            .collect::<Vec<_>>();
        let power_trace = relations
            .iter()
            .zip(&degs)
            .map(|(r, &d)| power_sums(r, d, 2 * d))
            .collect::<Vec<_>>();
        Ok(Arc::new(TowerSpec {
            relations,
            degs,
            strides,
            dim,
            pow,
            power_trace,
            mono_mul: std::sync::OnceLock::new(),
            mono_traces: std::sync::OnceLock::new(),
        }))
    }

    /// Reduced product of two basis monomials, from the cached table.
    #[inline]
    pub fn mono_product(&self, a: u32, b: u32) -> &[(u32, Rat)] {
        let table = self.mono_mul.get_or_init(|| {
            let d = self.dim;
            let nv = self.degs.len();
            let mut table = Vec::with_capacity(d * d);
            let mut ea = vec![0usize; nv];
            let mut eb = vec![0usize; nv];
            for a in 0..d {
                decode(self, a as u32, &mut ea);
                for b in 0..d {
                    decode(self, b as u32, &mut eb);
                    let mut partial: Vec<(u32, Rat)> = vec![(0, Rat::one())];
                    for v in 0..nv {
                        let e = ea[v] + eb[v];
                        if e < self.degs[v] {
                            let off = (e * self.strides[v]) as u32;
                            for t in partial.iter_mut() {
                                t.0 += off;
                            }
                        } else {
                            let red = &self.pow[v][e];
                            let mut next = Vec::with_capacity(partial.len() * 2);
                            for (idx, pc) in &partial {
                                for (re, rc) in red.iter().enumerate() {
                                    if !rc.is_zero() {
                                        next.push((idx + (re * self.strides[v]) as u32, pc * rc));
                                    }
                                }
                            }
                            partial = next;
                        }
                    }
                    partial.sort_by_key(|t| t.0);
                    table.push(partial);
                }
            }
            table
        });
        &table[a as usize * self.dim + b as usize]
    }

    fn mono_trace_cached(&self, idx: u32) -> &Rat {
        let traces = self
            .mono_traces
            .get_or_init(|| (0..self.dim as u32).map(|i| self.monomial_trace(i)).collect());
        &traces[idx as usize]
    }

    /// Trace of multiplication by a basis monomial (cached).
    pub fn mono_trace(&self, idx: u32) -> &Rat {
        self.mono_trace_cached(idx)
    }

    pub fn relations(&self) -> &[UniPoly] {
        &self.relations
    }

    pub fn num_vars(&self) -> usize {
        self.degs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn deg(&self, var: usize) -> usize {
        self.degs[var]
    }

    pub fn stride(&self, var: usize) -> usize {
        self.strides[var]
    }

    /// Monomial index of an exponent vector (lexicographic rank).
    pub fn monomial_index(&self, exps: &[usize]) -> u32 {
        debug_assert_eq!(exps.len(), self.degs.len());
        let mut idx = 0usize;
        for (v, &e) in exps.iter().enumerate() {
            debug_assert!(e < self.degs[v]);
            idx += e * self.strides[v];
        }
        idx as u32
    }

    pub fn exponents(&self, idx: u32) -> Vec<usize> {
        let mut idx = idx as usize;
        let mut out = Vec::with_capacity(self.degs.len());
        for v in 0..self.degs.len() {
            out.push(idx / self.strides[v]);
            idx %= self.strides[v];
        }
        out
    }

    /// Trace of the multiplication-by-monomial map, as a product of
    /// per-variable power sums.
    fn monomial_trace(&self, idx: u32) -> Rat {
        let mut idx = idx as usize;
        let mut t = Rat::one();
        for v in 0..self.degs.len() {
            let e = idx / self.strides[v];
            idx %= self.strides[v];
            t *= &self.power_trace[v][e];
            if t.is_zero() {
                return t;
            }
        }
        t
    }
}

/// Reduction table for `x^e` mod a monic relation, `e <= 2(d-1)`.
fn power_table(r: &UniPoly, d: usize) -> Vec<Vec<Rat>> {
    let mut table: Vec<Vec<Rat>> = Vec::with_capacity(2 * d - 1);
    for e in 0..d {
        let mut row = vec![Rat::zero(); d];
        row[e] = Rat::one();
        table.push(row);
    }
    // x^d = -(lower coefficients of r)
    for e in d..=(2 * d).saturating_sub(2) {
        let prev = table[e - 1].clone();
        let mut row = vec![Rat::zero(); d];
        // multiply prev by x, then reduce the overflow through x^d.
        let lead = prev[d - 1].clone();
        for i in (1..d).rev() {
            row[i] = prev[i - 1].clone();
        }
        if !lead.is_zero() {
            for i in 0..d {
                row[i] -= &lead * &r.coeff(i);
            }
        }
        table.push(row);
    }
    table
}

/// Power sums of the roots of a monic polynomial, by Newton's identities.
fn power_sums(r: &UniPoly, d: usize, up_to: usize) -> Vec<Rat> {
    let a = |i: usize| r.coeff(i); // r = x^d + a_{d-1}x^{d-1} + .. + a_0
    let mut p = Vec::with_capacity(up_to + 1);
    p.push(Rat::from(Int::from(d as i64)));
    for k in 1..=up_to {
        let mut s = Rat::zero();
        if k <= d {
            for i in 1..k {
                s += &a(d - i) * &p[k - i];
            }
            s += Rat::from(Int::from(k as i64)) * a(d - k);
        } else {
            for i in 1..=d {
                s += &a(d - i) * &p[k - i];
            }
        }
        p.push(-s);
    }
    p
}

/// An element of a [`TowerSpec`] quotient ring: sorted sparse coefficients
/// over the monomial basis, no explicit zeros. Equality is coefficient-map
/// equality over a shared spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerElement {
    spec: Arc<TowerSpec>,
    terms: Vec<(u32, Rat)>,
}

impl TowerElement {
    pub fn zero(spec: Arc<TowerSpec>) -> Self {
        TowerElement { spec, terms: Vec::new() }
    }

    pub fn one(spec: Arc<TowerSpec>) -> Self {
        Self::scalar(spec, Rat::one())
    }

    pub fn scalar(spec: Arc<TowerSpec>, q: Rat) -> Self {
        let terms = if q.is_zero() { Vec::new() } else { vec![(0, q)] };
        TowerElement { spec, terms }
    }

    pub fn from_int(spec: Arc<TowerSpec>, v: i64) -> Self {
        Self::scalar(spec, Rat::from(Int::from(v)))
    }

    /// The generator `x_var`.
    pub fn generator(spec: Arc<TowerSpec>, var: usize) -> Self {
        let mut exps = vec![0usize; spec.num_vars()];
        exps[var] = 1;
        let idx = spec.monomial_index(&exps);
        TowerElement { spec, terms: vec![(idx, Rat::one())] }
    }

    pub fn monomial(spec: Arc<TowerSpec>, idx: u32, coeff: Rat) -> Self {
        if coeff.is_zero() {
            return Self::zero(spec);
        }
        TowerElement { spec, terms: vec![(idx, coeff)] }
    }

    pub fn from_terms(spec: Arc<TowerSpec>, mut terms: Vec<(u32, Rat)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|&(i, _)| i);
        TowerElement { spec, terms }
    }

    pub fn spec(&self) -> &Arc<TowerSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &[(u32, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: u32) -> Rat {
        match self.terms.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Dense coefficient vector over the monomial basis.
    pub fn dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.spec.dim()];
        for (i, c) in &self.terms {
            out[*i as usize] = c.clone();
        }
        out
    }

    pub fn from_dense(spec: Arc<TowerSpec>, dense: Vec<Rat>) -> Self {
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        TowerElement { spec, terms }
    }

    fn assert_same_spec(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec,
            "tower spec mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_spec(other);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some((a, ca)), Some((b, cb))) if a == b => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        terms.push((*a, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((a, ca)), Some((b, _))) if a < b => {
                    terms.push((*a, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((b, cb))) => {
                    terms.push((*b, cb.clone()));
                    j += 1;
                }
                (Some((a, ca)), None) => {
                    terms.push((*a, ca.clone()));
                    i += 1;
                }
                (None, Some((b, cb))) => {
                    terms.push((*b, cb.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        TowerElement { spec: self.spec.clone(), terms }
    }

    pub fn neg(&self) -> Self {
        TowerElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero(self.spec.clone());
        }
        TowerElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(i, c)| (*i, c * q)).collect(),
        }
    }

    /// Product with canonical reduction, through the cached monomial table.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_spec(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.spec.clone());
        }
        let spec = &self.spec;
        let mut dense = vec![Rat::zero(); spec.dim()];
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                let c = ca * cb;
                for (idx, rc) in spec.mono_product(*ia, *ib) {
                    if rc.is_one() {
                        dense[*idx as usize] += &c;
                    } else {
                        dense[*idx as usize] += &c * rc;
                    }
                }
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        TowerElement { spec: spec.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.spec.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Trace of the multiplication-by-self map. Linear in the element; the
    /// per-monomial traces come from the per-variable power sums.
    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for (i, c) in &self.terms {
            let mt = self.spec.mono_trace_cached(*i);
            if !mt.is_zero() {
                t += c * mt;
            }
        }
        t
    }

    /// Column-major matrix of multiplication by self on the monomial basis:
    /// `M[r][c]` = coefficient of basis monomial `r` in `self * basis_c`.
    pub fn mult_matrix(&self) -> Vec<Vec<Rat>> {
        let d = self.spec.dim();
        let mut m = vec![vec![Rat::zero(); d]; d];
        for c in 0..d {
            let bc = TowerElement::monomial(self.spec.clone(), c as u32, Rat::one());
            let prod = self.mul(&bc);
            for (i, q) in prod.terms {
                m[i as usize][c] = q;
            }
        }
        m
    }

    /// Monic characteristic polynomial of the multiplication matrix, degree =
    /// ring dimension. Computed by integer Faddeev-LeVerrier after clearing
    /// denominators, so no rational blow-up inside the elimination.
    pub fn char_poly(&self) -> UniPoly {
        let m = self.mult_matrix();
        let d = self.spec.dim();
        let mut den = Int::one();
        for row in &m {
            for q in row {
                den = den.lcm(q.denom());
            }
        }
        let mi: Vec<Vec<Int>> = m
            .iter()
            .map(|row| row.iter().map(|q| q.numer() * (&den / q.denom())).collect())
            .collect();
        let cs = linalg::char_poly_int(&mi);
        // char of M = char of (den*M) rescaled: coefficient of t^{d-k} is c_k / den^k.
        let mut coeffs = vec![Rat::zero(); d + 1];
        coeffs[d] = Rat::one();
        let mut dp = Int::one();
        for k in 1..=d {
            dp *= &den;
            coeffs[d - k] = Rat::new(cs[k].clone(), dp.clone());
        }
        UniPoly::new(coeffs)
    }

    /// Whether the characteristic polynomial has integer coefficients.
    ///
    /// Runs through Newton's identities on the power traces
    /// `p_e = tr(self^e)`, aborting at the first non-integral elementary
    /// symmetric function; equivalent to checking `char_poly` but far cheaper
    /// on rejects.
    pub fn is_integral(&self) -> bool {
        let d = self.spec.dim();
        let mut power = self.clone();
        let mut p = Vec::with_capacity(d + 1); // p[e] = tr(self^e), p[0] unused
        p.push(Rat::zero());
        p.push(power.trace());
        let mut e: Vec<Rat> = Vec::with_capacity(d + 1);
        e.push(Rat::one());
        for k in 1..=d {
            if k > 1 {
                power = power.mul(self);
                p.push(power.trace());
            }
            // k * e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
            let mut s = Rat::zero();
            for i in 1..=k {
                let term = &e[k - i] * &p[i];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            let ek = s / Rat::from(Int::from(k as i64));
            if !ek.denom().is_one() {
                return false;
            }
            e.push(ek);
        }
        true
    }

    /// Multiplicative inverse, solving the linear system given by the
    /// multiplication matrix. Zero and zero divisors are reported as distinct
    /// errors; a zero divisor signals a non-field quotient.
    pub fn invert(&self) -> Result<Self, TowerError> {
        if self.is_zero() {
            return Err(TowerError::InvertZero);
        }
        let d = self.spec.dim();
        let m = self.mult_matrix();
        let mut rhs = vec![Rat::zero(); d];
        rhs[0] = Rat::one();
        match linalg::solve_rat(&m, &rhs) {
            Some(x) => Ok(TowerElement::from_dense(self.spec.clone(), x)),
            None => Err(TowerError::ZeroDivisor),
        }
    }
}

fn decode(spec: &TowerSpec, idx: u32, out: &mut [usize]) {
    let mut idx = idx as usize;
    for v in 0..spec.degs.len() {
        out[v] = idx / spec.strides[v];
        idx %= spec.strides[v];
    }
}

/// `make_tower` per the module contract: relations must be monic, degree >= 1.
pub fn make_tower(relations: Vec<UniPoly>) -> Result<Arc<TowerSpec>, TowerError> {
    TowerSpec::new(relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    fn qq(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn quad(n: i64) -> Arc<TowerSpec> {
        // x^2 - n
        make_tower(vec![UniPoly::from_int_coeffs(&[-n, 0, 1])]).unwrap()
    }

    #[test]
    fn make_tower_dimensions() {
        let s = quad(5);
        assert_eq!(s.dim(), 2);
        let s2 = make_tower(vec![
            UniPoly::from_int_coeffs(&[-7, 0, 1]),
            UniPoly::from_int_coeffs(&[-3, 0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(s2.dim(), 6);
        let s3 = make_tower(vec![
            UniPoly::from_int_coeffs(&[-7, 0, 1]),
            UniPoly::from_int_coeffs(&[-3, 0, 0, 0, 0, 0, 1]),
            UniPoly::from_int_coeffs(&[1, -1, 1]),
        ])
        .unwrap();
        assert_eq!(s3.dim(), 24);
    }

    #[test]
    fn make_tower_rejects_bad_relations() {
        assert_eq!(make_tower(vec![]), Err(TowerError::EmptyTower));
        let non_monic = UniPoly::from_int_coeffs(&[1, 0, 2]);
        assert_eq!(make_tower(vec![non_monic]), Err(TowerError::BadRelation(0)));
        let constant = UniPoly::from_int_coeffs(&[1]);
        assert_eq!(make_tower(vec![constant]), Err(TowerError::BadRelation(0)));
    }

    #[test]
    fn relation_reduction() {
        let s = quad(5);
        let x = TowerElement::generator(s.clone(), 0);
        assert_eq!(x.mul(&x), TowerElement::from_int(s.clone(), 5));

        // y^2 * y^2 = 2y in Q[y]/(y^3-2)
        let c = make_tower(vec![UniPoly::from_int_coeffs(&[-2, 0, 0, 1])]).unwrap();
        let y = TowerElement::generator(c.clone(), 0);
        let y2 = y.mul(&y);
        assert_eq!(y2.mul(&y2), y.scalar_mul(&q(2)));

        // ((1+x)/2)^2 = (3+x)/2 for x = sqrt(5)
        let s = quad(5);
        let x = TowerElement::generator(s.clone(), 0);
        let omega = x.add(&TowerElement::one(s.clone())).scalar_mul(&qq(1, 2));
        let expect = x.add(&TowerElement::from_int(s.clone(), 3)).scalar_mul(&qq(1, 2));
        assert_eq!(omega.mul(&omega), expect);
    }

    #[test]
    fn char_poly_examples() {
        let s = quad(5);
        let x = TowerElement::generator(s.clone(), 0);
        let omega = x.add(&TowerElement::one(s.clone())).scalar_mul(&qq(1, 2));
        // minimal polynomial of (1+sqrt5)/2 is t^2 - t - 1
        assert_eq!(omega.char_poly(), UniPoly::from_int_coeffs(&[-1, -1, 1]));

        // rational scalar c in a dimension-d ring has char poly (t-c)^d
        let s6 = make_tower(vec![
            UniPoly::from_int_coeffs(&[-7, 0, 1]),
            UniPoly::from_int_coeffs(&[-3, 0, 0, 1]),
        ])
        .unwrap();
        let c = TowerElement::from_int(s6.clone(), 2);
        let cp = c.char_poly();
        // (t-2)^6
        assert_eq!(cp, UniPoly::from_int_coeffs(&[64, -192, 240, -160, 60, -12, 1]));

        // y in Q[x,y]/(x^2-n, y^3-m) has char poly (t^3-m)^2
        let s = make_tower(vec![
            UniPoly::from_int_coeffs(&[-5, 0, 1]),
            UniPoly::from_int_coeffs(&[-11, 0, 0, 1]),
        ])
        .unwrap();
        let y = TowerElement::generator(s.clone(), 1);
        assert_eq!(y.char_poly(), UniPoly::from_int_coeffs(&[121, 0, 0, -22, 0, 0, 1]));
    }

    #[test]
    fn trace_examples() {
        let s6 = make_tower(vec![
            UniPoly::from_int_coeffs(&[-7, 0, 1]),
            UniPoly::from_int_coeffs(&[-3, 0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(TowerElement::one(s6).trace(), q(6));

        let s = quad(5);
        let x = TowerElement::generator(s.clone(), 0);
        assert_eq!(x.trace(), q(0));
        let omega = x.add(&TowerElement::one(s.clone())).scalar_mul(&qq(1, 2));
        assert_eq!(omega.trace(), q(1));
    }

    #[test]
    fn invert_examples() {
        // 1 + beta in the simplest cubic with m = 1: g = y^3 - y^2 - 4y - 1
        let s = make_tower(vec![UniPoly::from_int_coeffs(&[-1, -4, -1, 1])]).unwrap();
        let y = TowerElement::generator(s.clone(), 0);
        let a = y.add(&TowerElement::one(s.clone()));
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), TowerElement::one(s.clone()));
        // beta^(2) = -1/(1+beta) satisfies g as well
        let b2 = inv.neg();
        let g = UniPoly::from_int_coeffs(&[-1, -4, -1, 1]);
        assert!(g.eval_element(&b2).is_zero());

        let two = TowerElement::from_int(s.clone(), 2);
        assert_eq!(two.invert().unwrap(), TowerElement::scalar(s.clone(), qq(1, 2)));

        let s5 = quad(5);
        let x = TowerElement::generator(s5.clone(), 0);
        assert_eq!(x.invert().unwrap(), x.scalar_mul(&qq(1, 5)));

        assert_eq!(TowerElement::zero(s5).invert(), Err(TowerError::InvertZero));
    }

    #[test]
    fn invert_detects_zero_divisors() {
        // Q[x]/(x^2-1) is not a field; 1+x is a zero divisor.
        let s = quad(1);
        let x = TowerElement::generator(s.clone(), 0);
        let a = x.add(&TowerElement::one(s));
        assert_eq!(a.invert(), Err(TowerError::ZeroDivisor));
    }

    fn random_element(spec: &Arc<TowerSpec>, rng: &mut StdRng) -> TowerElement {
        let mut terms = Vec::new();
        for i in 0..spec.dim() {
            if rng.gen_bool(0.6) {
                let num = rng.gen_range(-4i64..=4);
                let den = *[1i64, 1, 2].get(rng.gen_range(0..3)).unwrap();
                if num != 0 {
                    terms.push((i as u32, qq(num, den)));
                }
            }
        }
        TowerElement::from_terms(spec.clone(), terms)
    }

    #[test]
    fn ring_laws_and_cayley_hamilton_smoke() {
        // the full >= 1000-sample suite lives in the acceptance tests; this is
        // a fast sanity pass over one composite spec.
        let spec = make_tower(vec![
            UniPoly::from_int_coeffs(&[-5, 0, 1]),
            UniPoly::from_int_coeffs(&[-1, -4, -1, 1]),
        ])
        .unwrap();
        let mut rng = StdRng::seed_from_u64(0);
        for _ in 0..40 {
            let a = random_element(&spec, &mut rng);
            let b = random_element(&spec, &mut rng);
            let c = random_element(&spec, &mut rng);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.add(&b).trace(), a.trace() + b.trace());
        }
        for _ in 0..5 {
            let a = random_element(&spec, &mut rng);
            assert!(a.char_poly().eval_element(&a).is_zero());
        }
    }
}
