//! Integral bases of the composite fields: basis matrices over the
//! power-product basis, trace-form discriminants, the p-enlargement
//! procedure, CRT combination of p-maximal orders, and verification of the
//! published table bases.

use crate::families::{
    self, component_bases_in_main, tables, FamilyParams, ParamError,
};
use crate::linalg;
use crate::num_util::{mod_inverse, valuation};
use crate::tower::{TowerElement, TowerSpec};
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum OrderError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Table(#[from] tables::TableError),
    #[error("the product basis is degenerate (zero discriminant); the composite is not of full degree")]
    DegenerateProductBasis,
    #[error("basis row denominators are not powers of {0} relative to the initial basis")]
    MixedDenominators(i64),
    #[error("enlargement search space at p = {0} is too large and no maximality certificate applies")]
    SearchTooLarge(i64),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// A candidate order basis: row `i` gives basis element `b_i` over the
/// power-product basis of the main ring. Kept in lower-triangular Hermite
/// form with positive pivots, `b_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    spec: Arc<TowerSpec>,
    rows: Vec<Vec<Rat>>,
}

impl BasisMatrix {
    pub fn from_elements(spec: Arc<TowerSpec>, elems: &[TowerElement]) -> Self {
        let rows = elems.iter().map(|e| e.dense()).collect();
        BasisMatrix { spec, rows }
    }

    pub fn spec(&self) -> &Arc<TowerSpec> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn element(&self, i: usize) -> TowerElement {
        TowerElement::from_dense(self.spec.clone(), self.rows[i].clone())
    }

    pub fn elements(&self) -> Vec<TowerElement> {
        (0..self.rows.len()).map(|i| self.element(i)).collect()
    }

    /// Determinant of the trace-form Gram matrix `[trace(b_i b_j)]`; an exact
    /// integer for bases of integral elements.
    pub fn discriminant(&self) -> Rat {
        families::gram_determinant(&self.elements())
    }

    /// Least common multiple of all coefficient denominators per row.
    pub fn row_denominator(&self, i: usize) -> Int {
        let mut den = Int::one();
        for q in &self.rows[i] {
            den = den.lcm(q.denom());
        }
        den
    }

    /// Canonical lower-triangular form of the lattice spanned by the rows
    /// (which may number more than the dimension).
    pub fn hnf_normalize(spec: Arc<TowerSpec>, rows: &[Vec<Rat>]) -> Self {
        let d = spec.dim();
        let mut den = Int::one();
        for row in rows {
            for q in row {
                den = den.lcm(q.denom());
            }
        }
        let int_rows: Vec<Vec<Int>> = rows
            .iter()
            .map(|row| row.iter().map(|q| q.numer() * (&den / q.denom())).collect())
            .collect();
        let h = linalg::hnf_lower(&int_rows, d);
        let rows = h
            .into_iter()
            .map(|r| r.into_iter().map(|x| Rat::new(x, den.clone())).collect())
            .collect();
        BasisMatrix { spec, rows }
    }

    /// Express the rows of `self` over another basis: `self = X * other`.
    pub fn over(&self, other: &BasisMatrix) -> Option<Vec<Vec<Rat>>> {
        let inv = linalg::inverse_rat(&other.rows)?;
        let d = self.rows.len();
        let mut x = vec![vec![Rat::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = Rat::zero();
                for k in 0..d {
                    if !self.rows[i][k].is_zero() && !inv[k][j].is_zero() {
                        s += &self.rows[i][k] * &inv[k][j];
                    }
                }
                x[i][j] = s;
            }
        }
        Some(x)
    }
}

/// The product basis `{delta_i * omega_j}` of the two component integral
/// bases, ordered with the quadratic part major so row pivots follow the
/// power-product order.
pub fn initial_product_basis(params: &FamilyParams) -> Result<BasisMatrix, OrderError> {
    let spec = families::main_spec(params);
    let (quad_basis, _, beta_basis, _) = component_bases_in_main(params)?;
    let half = params.half_degree();
    let mut elems = Vec::with_capacity(params.degree);
    for qb in &quad_basis {
        for bb in beta_basis.iter().take(half) {
            elems.push(qb.mul(bb));
        }
    }
    let m = BasisMatrix::from_elements(spec.clone(), &elems);
    if linalg::det_rat(&m.rows).is_zero() {
        return Err(OrderError::DegenerateProductBasis);
    }
    Ok(BasisMatrix::hnf_normalize(spec, &m.rows))
}

/// Integrality of a tower element: its characteristic polynomial has integer
/// coefficients (it is monic by construction).
pub fn is_integral(e: &TowerElement) -> bool {
    e.is_integral()
}

/// One successful enlargement step.
#[derive(Debug, Clone, Serialize)]
pub struct EnlargeStep {
    pub prime: i64,
    pub lambda: Vec<u64>,
    pub replaced_row: usize,
    pub disc_before: String,
    pub disc_after: String,
}

/// Search for an element `mu = (sum lambda_i b_i)/p` integral over Z. The
/// candidate lambdas are restricted to the kernel of the trace-form Gram
/// matrix mod p (a necessary condition: `tr(mu b_j)` must be integral), and
/// the highest-index nonzero lambda is normalized to 1. Returns the enlarged,
/// re-normalized basis and the witness lambda, or `None` when the basis is
/// already p-maximal.
pub fn p_enlarge(
    basis: &BasisMatrix,
    p: i64,
    _params: &FamilyParams,
) -> Result<Option<(BasisMatrix, Vec<u64>)>, OrderError> {
    let d = basis.dim();
    let elems = basis.elements();
    // Gram matrix; integral basis elements give integer entries.
    let mut gram = vec![vec![Int::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let t = elems[i].mul(&elems[j]).trace();
            if !t.denom().is_one() {
                return Err(OrderError::Invariant(format!(
                    "non-integral trace form entry at ({i},{j})"
                )));
            }
            gram[i][j] = t.numer().clone();
            gram[j][i] = t.numer().clone();
        }
    }
    let pu = p as u64;
    let gmod: Vec<Vec<u64>> = gram
        .iter()
        .map(|row| row.iter().map(|x| to_u64_mod(x, &Int::from(p))).collect())
        .collect();
    let kernel = linalg::kernel_mod_p(&gmod, pu);
    if kernel.is_empty() {
        return Ok(None);
    }
    let k = kernel.len();
    // candidate count (p^k - 1)/(p - 1); bail out if absurd
    let mut count = 1f64;
    for _ in 0..k {
        count *= p as f64;
    }
    if count > 4.0e6 {
        return Err(OrderError::SearchTooLarge(p));
    }

    // Integer trace tensors for the cheap necessary conditions:
    // tr(mu^2) = lambda^T G lambda / p^2, and tr(mu^3) via tr(b_i b_j b_k)
    // (built lazily: most passes never survive the quadratic filter).
    let p2 = Int::from(p * p);
    let g2: Vec<Vec<u64>> = gram
        .iter()
        .map(|row| row.iter().map(|x| to_u64_mod(x, &p2)).collect())
        .collect();
    let p2u = (p * p) as u64;
    let p3u = (p * p * p) as u64;
    let p3 = Int::from(p * p * p);
    let mut t3: Option<Vec<u64>> = None;
    let build_t3 = || -> Result<Vec<u64>, OrderError> {
        let mut t = vec![0u64; d * d * d];
        let mut pairs: Vec<Vec<TowerElement>> = Vec::with_capacity(d);
        for i in 0..d {
            pairs.push((0..=i).map(|j| elems[i].mul(&elems[j])).collect());
        }
        for i in 0..d {
            for j in 0..=i {
                for kk in 0..d {
                    let tr = pairs[i][j].mul(&elems[kk]).trace();
                    if !tr.denom().is_one() {
                        return Err(OrderError::Invariant("non-integral triple trace".into()));
                    }
                    let v = to_u64_mod(tr.numer(), &p3);
                    t[(i * d + j) * d + kk] = v;
                    t[(j * d + i) * d + kk] = v;
                }
            }
        }
        Ok(t)
    };

    // Enumerate one representative per projective kernel class: coefficient
    // vectors whose first nonzero entry is 1, in odometer order.
    let dbg = std::env::var("MONOGEN_DEBUG").is_ok();
    let mut n_cand = 0u64;
    let mut n_quad = 0u64;
    let mut n_cubic = 0u64;
    let mut n_newton = 0u64;
    let padic = PAdicIntegrality::new(basis, p);
    let p_rat = Rat::from(Int::from(p));
    let mut coeffs = vec![0u64; k];
    let mut lambda = vec![0u64; d];
    loop {
        // advance odometer
        let mut i = 0;
        loop {
            if i == k {
                if dbg {
                    eprintln!("p_enlarge p={p} kernel_dim={k} candidates={n_cand} quad_pass={n_quad} cubic_pass={n_cubic} newton={n_newton} -> none");
                }
                return Ok(None);
            }
            coeffs[i] += 1;
            if coeffs[i] < pu {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        // projective normalization: first nonzero coefficient equals 1
        match coeffs.iter().find(|&&c| c != 0) {
            Some(&c) if c == 1 => {}
            _ => continue,
        }
        lambda.iter_mut().for_each(|l| *l = 0);
        for (c, kv) in coeffs.iter().zip(&kernel) {
            if *c != 0 {
                for (l, x) in lambda.iter_mut().zip(kv) {
                    *l = (*l + c * x) % pu;
                }
            }
        }
        if lambda.iter().all(|&x| x == 0) {
            continue;
        }
        n_cand += 1;
        // quadratic form mod p^2
        let mut q2 = 0u64;
        for (i, &li) in lambda.iter().enumerate() {
            if li == 0 {
                continue;
            }
            let mut row = 0u64;
            for (j, &lj) in lambda.iter().enumerate() {
                if lj != 0 {
                    row = (row + linalg::mulmod(lj, g2[i][j], p2u)) % p2u;
                }
            }
            q2 = (q2 + linalg::mulmod(li, row, p2u)) % p2u;
        }
        if q2 != 0 {
            continue;
        }
        n_quad += 1;
        // cubic form mod p^3
        if t3.is_none() {
            t3 = Some(build_t3()?);
        }
        let t3v = t3.as_ref().unwrap();
        let mut q3 = 0u64;
        for (i, &li) in lambda.iter().enumerate() {
            if li == 0 {
                continue;
            }
            for (j, &lj) in lambda.iter().enumerate() {
                if lj == 0 {
                    continue;
                }
                let lij = linalg::mulmod(li, lj, p3u);
                let mut row = 0u64;
                for (kk, &lk) in lambda.iter().enumerate() {
                    if lk != 0 {
                        row = (row + linalg::mulmod(lk, t3v[(i * d + j) * d + kk], p3u)) % p3u;
                    }
                }
                q3 = (q3 + linalg::mulmod(lij, row, p3u)) % p3u;
            }
        }
        if q3 != 0 {
            continue;
        }
        n_cubic += 1;
        n_newton += 1;
        let integral = match &padic {
            Some(t) => t.is_integral(&lambda),
            None => {
                let mut mu = TowerElement::zero(basis.spec.clone());
                for (i, &l) in lambda.iter().enumerate() {
                    if l != 0 {
                        mu = mu.add(&elems[i].scalar_mul(&Rat::from(Int::from(l as i64))));
                    }
                }
                mu.scalar_mul(&(Rat::one() / &p_rat)).is_integral()
            }
        };
        if !integral {
            continue;
        }
        // confirm the p-adic decision through the exact route
        {
            let mut mu = TowerElement::zero(basis.spec.clone());
            for (i, &l) in lambda.iter().enumerate() {
                if l != 0 {
                    mu = mu.add(&elems[i].scalar_mul(&Rat::from(Int::from(l as i64))));
                }
            }
            let mu = mu.scalar_mul(&(Rat::one() / &p_rat));
            if !mu.is_integral() {
                return Err(OrderError::Invariant(
                    "p-adic integrality disagreed with the exact check".into(),
                ));
            }
        }
        // normalize the witness so its highest-index nonzero entry is 1
        let last = lambda.iter().rposition(|&x| x != 0).unwrap();
        let inv = to_u64_mod(&mod_inverse(&Int::from(lambda[last] as i64), &Int::from(p)).unwrap(), &Int::from(p));
        let lambda: Vec<u64> = lambda.iter().map(|&l| linalg::mulmod(l, inv, pu)).collect();
        let mut mu = TowerElement::zero(basis.spec.clone());
        for (i, &l) in lambda.iter().enumerate() {
            if l != 0 {
                mu = mu.add(&elems[i].scalar_mul(&Rat::from(Int::from(l as i64))));
            }
        }
        let mu = mu.scalar_mul(&(Rat::one() / &p_rat));
        let replaced = lambda.iter().rposition(|&x| x != 0).unwrap();
        let mut rows = basis.rows.clone();
        rows[replaced] = mu.dense();
        let new_basis = BasisMatrix::hnf_normalize(basis.spec.clone(), &rows);
        return Ok(Some((new_basis, lambda)));
    }
}

/// Iterate [`p_enlarge`] to the fixed point; every successful step divides
/// the discriminant by exactly `p^2`.
pub fn p_maximal(
    basis: &BasisMatrix,
    p: i64,
    params: &FamilyParams,
    log: &mut Vec<EnlargeStep>,
) -> Result<BasisMatrix, OrderError> {
    let mut current = basis.clone();
    let mut disc = current.discriminant();
    loop {
        match p_enlarge(&current, p, params)? {
            None => return Ok(current),
            Some((next, lambda)) => {
                let next_disc = next.discriminant();
                let ratio = &disc / &next_disc;
                if ratio != Rat::from(Int::from(p * p)) {
                    return Err(OrderError::Invariant(format!(
                        "enlargement at p={p} changed discriminant by {ratio}, not p^2"
                    )));
                }
                let replaced = lambda.iter().rposition(|&x| x != 0).unwrap();
                log.push(EnlargeStep {
                    prime: p,
                    lambda,
                    replaced_row: replaced,
                    disc_before: disc.to_string(),
                    disc_after: next_disc.to_string(),
                });
                current = next;
                disc = next_disc;
            }
        }
    }
}

/// Combine a p-maximal and a q-maximal order into one containing both, by
/// the row-wise congruence construction: for row `i` with denominators
/// `p^kp` and `q^kq` (over the initial basis), `h_i = yq*b_i + yp*f_i`
/// shifted by an integer multiple of the initial row so the leading
/// coefficient is `1/(p^kp q^kq)`.
pub fn crt_combine(
    basis_p: &BasisMatrix,
    basis_q: &BasisMatrix,
    p: i64,
    q: i64,
    initial: &BasisMatrix,
) -> Result<BasisMatrix, OrderError> {
    let d = initial.dim();
    let over_p = relative_rows(basis_p, initial, p)?;
    let over_q = relative_rows(basis_q, initial, q)?;
    let mut combined: Vec<Vec<Rat>> = Vec::with_capacity(3 * d);
    for i in 0..d {
        let kp = valuation(&row_den(&over_p[i]), &Int::from(p));
        let kq = valuation(&row_den(&over_q[i]), &Int::from(q));
        let pk = Int::from(p).pow(kp);
        let qk = Int::from(q).pow(kq);
        // yp * p^kp = 1 mod q^kq and yq * q^kq = 1 mod p^kp
        let yp = mod_inverse(&pk, &qk).ok_or_else(|| {
            OrderError::Invariant("crt: prime powers not coprime".into())
        })?;
        let yq = mod_inverse(&qk, &pk).ok_or_else(|| {
            OrderError::Invariant("crt: prime powers not coprime".into())
        })?;
        let mut h: Vec<Rat> = (0..d)
            .map(|j| {
                &over_p[i][j] * Rat::from(yq.clone()) + &over_q[i][j] * Rat::from(yp.clone())
            })
            .collect();
        // leading coefficient (1 + l*p^kp*q^kq)/(p^kp*q^kq): subtract l * e_i
        let lead = &h[i];
        let den = &pk * &qk;
        let ell = lead - Rat::new(Int::one(), den.clone());
        if !ell.denom().is_one() {
            return Err(OrderError::Invariant(format!(
                "crt: leading coefficient of row {i} is {lead}, not 1/(p^kp q^kq) + integer"
            )));
        }
        h[i] = Rat::new(Int::one(), den);
        combined.push(h);
    }
    // the combined lattice must contain both inputs; include their rows and
    // let the Hermite form canonicalize
    combined.extend_from_slice(&over_p);
    combined.extend_from_slice(&over_q);
    let h = BasisMatrix::hnf_normalize(initial.spec.clone(), &combined);
    // index multiplicativity for coprime indices
    let det_h = linalg::det_rat(&h.rows);
    let det_p = linalg::det_rat(&over_p);
    let det_q = linalg::det_rat(&over_q);
    if (det_p * det_q).abs() != det_h.abs() {
        return Err(OrderError::Invariant(
            "crt: combined order index is not the product of the input indices".into(),
        ));
    }
    // convert back to power-product coordinates: rows_over_initial * initial
    let rows: Vec<Vec<Rat>> = h
        .rows
        .iter()
        .map(|hr| {
            (0..d)
                .map(|j| {
                    let mut s = Rat::zero();
                    for k in 0..d {
                        if !hr[k].is_zero() {
                            s += &hr[k] * &initial.rows[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    Ok(BasisMatrix::hnf_normalize(initial.spec.clone(), &rows))
}

fn row_den(row: &[Rat]) -> Int {
    let mut den = Int::one();
    for x in row {
        den = den.lcm(x.denom());
    }
    den
}

/// Rows of `basis` over `initial`, verified to have pure `p`-power
/// denominators, in triangular Hermite form.
fn relative_rows(
    basis: &BasisMatrix,
    initial: &BasisMatrix,
    p: i64,
) -> Result<Vec<Vec<Rat>>, OrderError> {
    let x = basis
        .over(initial)
        .ok_or_else(|| OrderError::Invariant("initial basis is singular".into()))?;
    let normalized = BasisMatrix::hnf_normalize(initial.spec.clone(), &x);
    for row in normalized.rows() {
        let den = row_den(row);
        let mut rest = den.clone();
        while (&rest % p).is_zero() {
            rest /= p;
        }
        if !rest.is_one() {
            return Err(OrderError::MixedDenominators(p));
        }
    }
    Ok(normalized.rows.clone())
}

/// A p-maximality certificate for a prime that needs no enlargement search.
#[derive(Debug, Clone, Serialize)]
pub struct CertifiedPrime {
    pub prime: i64,
    pub reason: String,
}

/// Full maximal-order computation: product basis, 2- and 3-maximal orders,
/// CRT combination, then every further prime whose square divides the
/// running discriminant (certified maximal via coprimality of the component
/// discriminants, or searched when the certificate does not apply).
#[derive(Debug, Clone)]
pub struct OrderReport {
    pub params: FamilyParams,
    pub initial: BasisMatrix,
    pub basis: BasisMatrix,
    pub initial_disc: Int,
    pub disc: Int,
    pub steps: Vec<EnlargeStep>,
    pub certified: Vec<CertifiedPrime>,
}

pub fn maximal_order_basis(params: &FamilyParams) -> Result<OrderReport, OrderError> {
    let initial = initial_product_basis(params)?;
    let initial_disc_rat = initial.discriminant();
    if !initial_disc_rat.denom().is_one() {
        return Err(OrderError::Invariant("product basis has non-integral discriminant".into()));
    }
    let initial_disc = initial_disc_rat.numer().clone();
    if initial_disc.is_zero() {
        return Err(OrderError::DegenerateProductBasis);
    }
    let mut steps = Vec::new();
    let o2 = p_maximal(&initial, 2, params, &mut steps)?;
    let o3 = p_maximal(&initial, 3, params, &mut steps)?;
    let combined = crt_combine(&o2, &o3, 2, 3, &initial)?;

    let disc_rat = combined.discriminant();
    let mut disc = disc_rat.numer().clone();
    debug_assert!(disc_rat.denom().is_one());

    // any further prime with p^2 | disc: certify or search
    let mut certified = Vec::new();
    let mut basis = combined;
    let (dl, dm) = component_discs(params)?;
    let mut p_candidates: Vec<i64> = Vec::new();
    for src in [params.n.unwrap_or(1), params.m, params.u, params.v, params.m0.max(1)] {
        if src != 0 {
            if let Ok(f) = crate::num_util::factor(src) {
                for (p, _) in f {
                    if p > 3 && !p_candidates.contains(&p) {
                        p_candidates.push(p);
                    }
                }
            }
        }
    }
    p_candidates.sort_unstable();
    for p in p_candidates {
        let pi = Int::from(p);
        if valuation_or_zero(&disc, &pi) < 2 {
            continue;
        }
        let g = dl.gcd(&dm);
        if !(&g % &pi).is_zero() {
            certified.push(CertifiedPrime {
                prime: p,
                reason: format!(
                    "component discriminants are coprime at {p}; the product of the component maximal orders is {p}-maximal"
                ),
            });
            continue;
        }
        // no certificate: fall back to the enlargement search
        let before = basis.discriminant();
        basis = p_maximal(&basis, p, params, &mut steps)?;
        let after = basis.discriminant();
        if after != before {
            disc = after.numer().clone();
        }
    }
    let final_disc = basis.discriminant();
    Ok(OrderReport {
        params: params.clone(),
        initial,
        basis,
        initial_disc,
        disc: final_disc.numer().clone(),
        steps,
        certified,
    })
}

fn to_u64_mod(x: &Int, m: &Int) -> u64 {
    x.mod_floor(m).to_string().parse::<u64>().unwrap()
}

/// Exact p-adic integrality tester for enlargement candidates
/// `mu = (sum lambda_i b_i) / p`.
///
/// Because the combination is over integral basis elements, every elementary
/// symmetric function of `mu` lies in `Z[1/p]`, so integrality is a purely
/// p-adic condition and the whole Newton chain can run in `u64` residues
/// modulo `p^N`: with `w = (p*den)*mu` integral, `mu` is integral iff
/// `v_p(e_k(w)) >= k * v_p(p*den)` for every `k`.
struct PAdicIntegrality {
    dim: usize,
    p: u64,
    modulus: u64,
    /// required valuation per degree: k * v_p(p * den)
    step_valuation: u32,
    /// precision loss from the division by k at step k
    loss: Vec<u32>,
    /// scaled basis rows `den * b_i` over the monomial basis, mod p^N
    rows: Vec<Vec<u64>>,
    /// monomial product table entries mod p^N
    table: Vec<Vec<(u32, u64)>>,
    /// monomial traces mod p^N
    traces: Vec<u64>,
}

impl PAdicIntegrality {
    /// `None` when the required precision does not fit in u64 (callers fall
    /// back to the exact check).
    fn new(basis: &BasisMatrix, p: i64) -> Option<PAdicIntegrality> {
        let spec = basis.spec();
        let d = spec.dim();
        let mut den = Int::one();
        for i in 0..basis.dim() {
            den = den.lcm(&basis.row_denominator(i));
        }
        let pd: Int = Int::from(p) * &den;
        let vp = crate::num_util::valuation(&pd, &Int::from(p));
        let mut loss_total = 0u32;
        let mut loss = vec![0u32; d + 1];
        for k in 2..=d {
            loss[k] = crate::num_util::valuation_i64(k as i64, p).min(31);
            loss_total += loss[k];
        }
        let n = d as u32 * vp + loss_total + 2;
        let modulus = (p as u64).checked_pow(n)?;
        // u128 products in mulmod need modulus^2 to fit
        if modulus > u64::MAX / 2 || (modulus as u128) * (modulus as u128) > u128::MAX / 4 {
            return None;
        }
        let pm = Int::from(modulus);
        let rows: Vec<Vec<u64>> = (0..basis.dim())
            .map(|i| {
                basis.rows()[i]
                    .iter()
                    .map(|q| {
                        let scaled = q * Rat::from(den.clone());
                        debug_assert!(scaled.denom().is_one());
                        to_u64_mod(scaled.numer(), &pm)
                    })
                    .collect()
            })
            .collect();
        let mut table = Vec::with_capacity(d * d);
        for a in 0..d as u32 {
            for b in 0..d as u32 {
                let row = spec
                    .mono_product(a, b)
                    .iter()
                    .map(|(m, q)| {
                        debug_assert!(q.denom().is_one());
                        (*m, to_u64_mod(q.numer(), &pm))
                    })
                    .collect();
                table.push(row);
            }
        }
        let traces = (0..d as u32)
            .map(|i| {
                let t = spec.mono_trace(i);
                debug_assert!(t.denom().is_one());
                to_u64_mod(t.numer(), &pm)
            })
            .collect();
        Some(PAdicIntegrality {
            dim: d,
            p: p as u64,
            modulus,
            step_valuation: vp,
            loss,
            rows,
            table,
            traces,
        })
    }

    fn vp_capped(&self, mut x: u64, cap: u32) -> u32 {
        if x == 0 {
            return cap;
        }
        let mut v = 0;
        while v < cap && x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Decide whether `(sum lambda_i b_i)/p` is integral.
    fn is_integral(&self, lambda: &[u64]) -> bool {
        let d = self.dim;
        let m = self.modulus;
        // w = den * (sum lambda_i b_i); note w = (p*den) * mu
        let mut w = vec![0u64; d];
        for (i, &l) in lambda.iter().enumerate() {
            if l != 0 {
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj = (*wj + linalg::mulmod(l, self.rows[i][j], m)) % m;
                }
            }
        }
        let trace_of = |v: &[u64]| -> u64 {
            let mut t = 0u64;
            for (j, &c) in v.iter().enumerate() {
                if c != 0 && self.traces[j] != 0 {
                    t = (t + linalg::mulmod(c, self.traces[j], m)) % m;
                }
            }
            t
        };
        let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; d];
            for (i, &ca) in a.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (j, &cb) in b.iter().enumerate() {
                    if cb == 0 {
                        continue;
                    }
                    let c = linalg::mulmod(ca, cb, m);
                    for (mono, t) in &self.table[i * d + j] {
                        out[*mono as usize] =
                            (out[*mono as usize] + linalg::mulmod(c, *t, m)) % m;
                    }
                }
            }
            out
        };
        // Newton chain: e and p arrays hold residues; precision shrinks by
        // loss[k] at each division by k.
        let mut precision = self.log_precision();
        let mut power = w.clone();
        let mut ps = Vec::with_capacity(d + 1);
        ps.push(0u64);
        ps.push(trace_of(&power));
        let mut es: Vec<u64> = vec![1 % m];
        for k in 1..=d {
            if k > 1 {
                power = mul(&power, &w);
                ps.push(trace_of(&power));
            }
            let mut s = 0u64;
            for i in 1..=k {
                let term = linalg::mulmod(es[k - i], ps[i], m);
                if i % 2 == 1 {
                    s = (s + term) % m;
                } else {
                    s = (s + m - term) % m;
                }
            }
            // divide by k = p^a * k'
            let a = self.loss[k];
            let mut kk = k as u64;
            let mut sv = s;
            for _ in 0..a {
                debug_assert!(sv % self.p == 0);
                sv /= self.p;
                kk /= self.p;
                precision -= 1;
            }
            let inv = mod_inverse(&Int::from(kk as i64), &Int::from(self.modulus))
                .expect("k' invertible mod p^N");
            let ek = linalg::mulmod(sv, to_u64_mod(&inv, &Int::from(self.modulus)), m);
            // requirement: v_p(e_k(w)) >= k * v_p(p*den)
            let need = k as u32 * self.step_valuation;
            let have = self.vp_capped(ek, precision.min(32));
            if have < need.min(precision) {
                return false;
            }
            es.push(ek);
        }
        true
    }

    fn log_precision(&self) -> u32 {
        // log_p(modulus)
        let mut n = 0;
        let mut m = self.modulus;
        while m >= self.p {
            m /= self.p;
            n += 1;
        }
        n
    }
}

fn valuation_or_zero(n: &Int, p: &Int) -> u32 {
    if n.is_zero() {
        0
    } else {
        valuation(n, p)
    }
}

fn component_discs(params: &FamilyParams) -> Result<(Int, Int), OrderError> {
    let (_, dl, _, dm) = component_bases_in_main(params)?;
    Ok((dl, dm))
}

/// Verification of a published table basis against the computed maximal
/// order: element-wise integrality, equality of discriminants, and
/// unimodularity of the change of basis.
#[derive(Debug, Clone, Serialize)]
pub struct TableVerification {
    pub row_index: usize,
    pub integral: Vec<bool>,
    pub disc_match: bool,
    pub unimodular: bool,
    pub table_disc: String,
    pub computed_disc: String,
}

impl TableVerification {
    pub fn is_match(&self) -> bool {
        self.integral.iter().all(|&b| b) && self.disc_match && self.unimodular
    }
}

pub fn verify_table_basis(params: &FamilyParams) -> Result<(TableVerification, OrderReport), OrderError> {
    let row_index = tables::basis_row_index(params)?;
    let elems = tables::table_basis_elements(params)?;
    let report = maximal_order_basis(params)?;
    let integral: Vec<bool> = elems.iter().map(is_integral).collect();
    let table = BasisMatrix::from_elements(report.basis.spec().clone(), &elems);
    let table_disc = table.discriminant();
    let disc_match = table_disc == Rat::from(report.disc.clone());
    // change of basis: table rows over the computed basis must be an integer
    // matrix of determinant +-1
    let unimodular = match table.over(&report.basis) {
        Some(x) => {
            let all_int = x.iter().flatten().all(|q| q.denom().is_one());
            let det = linalg::det_rat(&x);
            all_int && det.abs() == Rat::one()
        }
        None => false,
    };
    Ok((
        TableVerification {
            row_index,
            integral,
            disc_match,
            unimodular,
            table_disc: table_disc.to_string(),
            computed_disc: report.disc.to_string(),
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{validate_params, Family};
    use crate::tower::{make_tower, UniPoly};

    fn q(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    #[test]
    fn quadratic_enlargement_classic() {
        // {1, sqrt5}: disc 20; p = 2 enlarges to {1, (1+sqrt5)/2} with disc 5
        let spec = make_tower(vec![UniPoly::from_int_coeffs(&[-5, 0, 1])]).unwrap();
        let one = TowerElement::one(spec.clone());
        let x = TowerElement::generator(spec.clone(), 0);
        let basis = BasisMatrix::from_elements(spec.clone(), &[one, x]);
        assert_eq!(basis.discriminant(), q(20));
        let params = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap(); // params unused
        let (enlarged, lambda) = p_enlarge(&basis, 2, &params).unwrap().unwrap();
        assert_eq!(lambda, vec![1, 1]);
        assert_eq!(enlarged.discriminant(), q(5));
        // now 2-maximal
        assert!(p_enlarge(&enlarged, 2, &params).unwrap().is_none());
        // and untouched when p^2 does not divide the discriminant
        assert!(p_enlarge(&enlarged, 5, &params).unwrap().is_none());
    }

    #[test]
    fn crt_example_arithmetic() {
        // k2 = 2, k3 = 1: y2 with 4*y2 = 1 mod 3 -> y2 = 1; y3 with 3*y3 = 1 mod 4 -> y3 = 3
        let y2 = mod_inverse(&Int::from(4), &Int::from(3)).unwrap();
        let y3 = mod_inverse(&Int::from(3), &Int::from(4)).unwrap();
        assert_eq!(y2, Int::from(1));
        assert_eq!(y3, Int::from(3));
        let x = Int::from(4) * &y2 + Int::from(3) * &y3;
        assert_eq!(x, Int::from(13)); // 13 = 1 mod 12
    }

    #[test]
    fn simplest_cubic_maximal_order() {
        // (5, 1): D_K = 5^3 * 13^4, product basis already maximal
        let params = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap();
        let report = maximal_order_basis(&params).unwrap();
        let expect = Int::from(125) * Int::from(13).pow(4);
        assert_eq!(report.disc, expect);
        assert!(report.steps.is_empty());
    }

    #[test]
    fn simplest_cubic_table_matches() {
        let params = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap();
        let (v, _) = verify_table_basis(&params).unwrap();
        assert!(v.is_match(), "{v:?}");
    }

    #[test]
    fn is_integral_examples() {
        let spec = make_tower(vec![UniPoly::from_int_coeffs(&[-5, 0, 1])]).unwrap();
        let x = TowerElement::generator(spec.clone(), 0);
        let one = TowerElement::one(spec.clone());
        let omega = x.add(&one).scalar_mul(&Rat::new(Int::from(1), Int::from(2)));
        assert!(is_integral(&omega));
        let half_x = x.scalar_mul(&Rat::new(Int::from(1), Int::from(2)));
        assert!(!is_integral(&half_x));
    }

    #[test]
    fn pure_cubic_table_row_with_denominator_3() {
        // n = 2, m = 10 hits the table row with a denominator-6 element
        let params = validate_params(Family::QuadPureCubic, Some(2), 10).unwrap();
        let (v, report) = verify_table_basis(&params).unwrap();
        assert!(v.is_match(), "{v:?}");
        assert!(!report.steps.is_empty(), "expected at least one enlargement");
    }
}
