//! Monogenity verdicts: necessary divisibility conditions derived from the
//! computed factor contents, cross-checks against the published condition
//! tables, deterministic parameter scans and the corollary reproductions.

use crate::families::{tables, validate_params, Family, FamilyParams};
use crate::index_form::{factor_report, value_condition_holds, FactorReport, IndexFormError};
use crate::num_util::is_squarefree;
use crate::order::{maximal_order_basis, OrderError};
use crate::symbolic::{self, SexticClassEngine, SymbolicError};
use crate::{Int, Rat};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MonogenityError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    IndexForm(#[from] IndexFormError),
    #[error(transparent)]
    Table(#[from] tables::TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    NotMonogenic,
    Inconclusive,
    Invalid,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictStatus::NotMonogenic => write!(f, "not-monogenic"),
            VerdictStatus::Inconclusive => write!(f, "inconclusive"),
            VerdictStatus::Invalid => write!(f, "invalid"),
        }
    }
}

/// One necessary condition `modulus | a +- b` with its verdict.
#[derive(Debug, Clone)]
pub struct ConditionResult {
    pub relation_id: String,
    pub modulus: Int,
    pub a: Rat,
    pub b: Rat,
    pub holds: bool,
}

/// Comparison of one derived condition against the corresponding table cell.
#[derive(Debug, Clone)]
pub struct CrosscheckCell {
    pub table_text: (String, String, String),
    pub table_lhs: Rat,
    pub table_a: Rat,
    pub table_b: Rat,
    pub table_holds: Option<bool>,
    pub derived_id: Option<String>,
    pub derived_holds: Option<bool>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub params: FamilyParams,
    pub status: VerdictStatus,
    pub conditions: Vec<ConditionResult>,
    /// indices into `conditions` that fail for both signs
    pub witnesses: Vec<usize>,
    pub crosscheck: Vec<CrosscheckCell>,
}

/// Derive the necessary conditions from a computed factor report: each
/// verified polynomial relation `M | combo(F..)` gives `M | a +- b` with the
/// values taken from the exact contents.
pub fn necessary_conditions(report: &FactorReport) -> Vec<ConditionResult> {
    report
        .relations
        .iter()
        .map(|r| ConditionResult {
            relation_id: r.id.clone(),
            modulus: r.verified_modulus.clone(),
            a: r.value_a.clone(),
            b: r.value_b.clone(),
            holds: r.value_holds,
        })
        .collect()
}

fn verdict_from_conditions(
    params: &FamilyParams,
    conditions: Vec<ConditionResult>,
) -> Verdict {
    let witnesses: Vec<usize> = conditions
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.holds)
        .map(|(i, _)| i)
        .collect();
    let status = if witnesses.is_empty() {
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::NotMonogenic
    };
    let crosscheck = crosscheck_table(params, &conditions);
    Verdict { params: params.clone(), status, conditions, witnesses, crosscheck }
}

/// Full monogenity check through the exact pipeline. The artifact never
/// claims monogenity: the answer is either a both-signs divisibility failure
/// (hence not monogenic) or inconclusive.
pub fn check(params: &FamilyParams) -> Result<Verdict, MonogenityError> {
    let order = maximal_order_basis(params)?;
    let report = factor_report(params, &order.basis, &order.disc)?;
    Ok(verdict_from_conditions(params, necessary_conditions(&report)))
}

/// Compare derived conditions with the published table row, cell by cell.
/// Disagreement is reported data, not a failure: the checker trusts the
/// computed contents, the table serves as cross-validation.
pub fn crosscheck_table(params: &FamilyParams, derived: &[ConditionResult]) -> Vec<CrosscheckCell> {
    let table = match tables::table_conditions(params) {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    table
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let table_holds = if cell.lhs.denom().is_one() && !cell.lhs.numer().is_zero() {
                Some(value_condition_holds(&cell.lhs.numer().abs(), &cell.a, &cell.b))
            } else {
                None
            };
            let (derived_id, derived_holds) = match derived.get(i) {
                Some(d) => (Some(d.relation_id.clone()), Some(d.holds)),
                None => (None, None),
            };
            let agree = match (table_holds, derived_holds) {
                (Some(t), Some(d)) => Some(t == d),
                _ => None,
            };
            CrosscheckCell {
                table_text: cell.text.clone(),
                table_lhs: cell.lhs.clone(),
                table_a: cell.a.clone(),
                table_b: cell.b.clone(),
                table_holds,
                derived_id,
                derived_holds,
                agree,
            }
        })
        .collect()
}

/// One scan record; `Err` carries the skip reason (invalid parameters or an
/// internal failure, spelled out).
#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub family: Family,
    pub n: Option<i64>,
    pub m: i64,
    pub outcome: Result<Verdict, String>,
}

/// Shared cache of per-class symbolic engines for the degree-12 scan.
#[derive(Default)]
pub struct SexticEngineCache {
    engines: Mutex<HashMap<String, Arc<SexticClassEngine>>>,
}

impl SexticEngineCache {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Degree-12 check via the class-symbolic engine, falling back to the exact
/// pipeline when a certificate or precision guard trips.
pub fn check_sextic_fast(
    params: &FamilyParams,
    cache: &SexticEngineCache,
) -> Result<Verdict, MonogenityError> {
    let order = maximal_order_basis(params)?;
    let key = symbolic::basis_key(&order.basis);
    let engine = {
        let guard = cache.engines.lock().unwrap();
        guard.get(&key).cloned()
    };
    let engine = match engine {
        Some(e) => e,
        None => {
            match symbolic::build_sextic_engine(params, &order.basis) {
                Ok(e) => {
                    let e = Arc::new(e);
                    cache.engines.lock().unwrap().insert(key.clone(), e.clone());
                    e
                }
                Err(_) => {
                    // symbolic expansion unavailable: exact fallback
                    let report = factor_report(params, &order.basis, &order.disc)?;
                    return Ok(verdict_from_conditions(params, necessary_conditions(&report)));
                }
            }
        }
    };
    match symbolic::evaluate_sextic(&engine, params) {
        Ok(data) => {
            let conditions = data
                .relations
                .into_iter()
                .map(|(id, modulus, a, b)| {
                    let holds = value_condition_holds(&modulus, &a, &b);
                    ConditionResult { relation_id: id, modulus, a, b, holds }
                })
                .collect();
            Ok(verdict_from_conditions(params, conditions))
        }
        Err(SymbolicError::PrecisionExceeded) | Err(SymbolicError::CertificateFailed) => {
            let report = factor_report(params, &order.basis, &order.disc)?;
            Ok(verdict_from_conditions(params, necessary_conditions(&report)))
        }
        Err(e) => Err(MonogenityError::Order(OrderError::Invariant(e.to_string()))),
    }
}

/// Scan every `(n, m)` pair in the given inclusive ranges; invalid parameter
/// combinations are reported with their reason. Records come back in
/// ascending `(n, m)` order regardless of scheduling.
pub fn scan(
    family: Family,
    n_range: Option<(i64, i64)>,
    m_range: (i64, i64),
) -> Vec<ScanRecord> {
    let cache = SexticEngineCache::new();
    let ns: Vec<Option<i64>> = match (family.has_n(), n_range) {
        (true, Some((a, b))) => (a..=b).map(Some).collect(),
        (true, None) => vec![],
        (false, _) => vec![None],
    };
    let mut jobs: Vec<(Option<i64>, i64)> = Vec::new();
    for n in &ns {
        for m in m_range.0..=m_range.1 {
            jobs.push((*n, m));
        }
    }
    let records: Vec<ScanRecord> = jobs
        .par_iter()
        .map(|&(n, m)| run_one(family, n, m, &cache))
        .collect();
    records
}

fn run_one(family: Family, n: Option<i64>, m: i64, cache: &SexticEngineCache) -> ScanRecord {
    match validate_params(family, n, m) {
        Err(e) => ScanRecord { family, n, m, outcome: Err(e.to_string()) },
        Ok(params) => {
            let verdict = if family == Family::OmegaPureSextic {
                check_sextic_fast(&params, cache)
            } else {
                check(&params)
            };
            ScanRecord { family, n, m, outcome: verdict.map_err(|e| e.to_string()) }
        }
    }
}

/// Named corollary scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryName {
    QuarticI,
    QuarticBound,
    SimplestQuarticBound,
    SexticSet,
}

impl CorollaryName {
    pub fn from_str(s: &str) -> Option<CorollaryName> {
        match s {
            "quartic-i" => Some(CorollaryName::QuarticI),
            "quartic-bound" => Some(CorollaryName::QuarticBound),
            "simplest-quartic-bound" => Some(CorollaryName::SimplestQuarticBound),
            "sextic-set" => Some(CorollaryName::SexticSet),
            _ => None,
        }
    }

    pub fn default_limit(&self) -> i64 {
        match self {
            CorollaryName::QuarticI | CorollaryName::SexticSet => 500,
            CorollaryName::QuarticBound => 200,
            CorollaryName::SimplestQuarticBound => 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorollarySummary {
    pub name: String,
    pub limit: i64,
    /// surviving |m| values (some sign inconclusive), ascending
    pub survivors: Vec<i64>,
    pub checked: usize,
    pub not_monogenic: usize,
    pub skipped: usize,
}

/// Candidate partners `n` for the bound corollaries: the smallest few valid
/// `n` in a residue class mod 8, by absolute value.
fn sample_n_in_class(family: Family, residue: i64, m: i64, count: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut k = 0i64;
    while out.len() < count && k < 200 {
        for cand in [residue + 8 * k, residue - 8 * (k + 1)] {
            if out.len() >= count {
                break;
            }
            if validate_params(family, Some(cand), m).is_ok() {
                out.push(cand);
            }
        }
        k += 1;
    }
    out
}

pub fn corollary_scan(name: CorollaryName, limit: i64) -> Result<CorollarySummary, MonogenityError> {
    let mut survivors: Vec<i64> = Vec::new();
    let mut checked = 0usize;
    let mut not_monogenic = 0usize;
    let mut skipped = 0usize;
    match name {
        CorollaryName::QuarticI => {
            // Q(i, 4th root of m): n = -1, squarefree m = 1 mod 4
            let ms: Vec<i64> = (-limit..=limit)
                .filter(|&m| m != 0 && m.rem_euclid(4) == 1 && is_squarefree(m).unwrap_or(false))
                .collect();
            let results: Vec<(i64, Option<VerdictStatus>)> = ms
                .par_iter()
                .map(|&m| match validate_params(Family::QuadPureQuartic, Some(-1), m) {
                    Ok(p) => (m, check(&p).ok().map(|v| v.status)),
                    Err(_) => (m, None),
                })
                .collect();
            for (m, st) in results {
                match st {
                    None => skipped += 1,
                    Some(VerdictStatus::NotMonogenic) => {
                        checked += 1;
                        not_monogenic += 1;
                    }
                    Some(_) => {
                        checked += 1;
                        if !survivors.contains(&m.abs()) {
                            survivors.push(m.abs());
                        }
                    }
                }
            }
        }
        CorollaryName::QuarticBound => {
            // residue sets {1,5}x{5}, {2,6}x{1,2,3,5,6,7}, {3,7}x{1,3,5,7}
            let in_scope = |nr: i64, mr: i64| -> bool {
                (matches!(nr, 1 | 5) && mr == 5)
                    || (matches!(nr, 2 | 6) && matches!(mr, 1 | 2 | 3 | 5 | 6 | 7))
                    || (matches!(nr, 3 | 7) && matches!(mr, 1 | 3 | 5 | 7))
            };
            let ms: Vec<i64> = (-limit..=limit)
                .filter(|&m| m != 0 && is_squarefree(m).unwrap_or(false))
                .collect();
            let results: Vec<(i64, bool, bool)> = ms
                .par_iter()
                .map(|&m| {
                    let mr = m.rem_euclid(8);
                    let mut any_applicable = false;
                    let mut survives = false;
                    for nr in [1i64, 2, 3, 5, 6, 7] {
                        if !in_scope(nr, mr) {
                            continue;
                        }
                        for n in sample_n_in_class(Family::QuadPureQuartic, nr, m, 1) {
                            any_applicable = true;
                            if let Ok(p) = validate_params(Family::QuadPureQuartic, Some(n), m) {
                                if let Ok(v) = check(&p) {
                                    if v.status == VerdictStatus::Inconclusive {
                                        survives = true;
                                    }
                                }
                            }
                        }
                    }
                    (m, any_applicable, survives)
                })
                .collect();
            for (m, applicable, survives) in results {
                if !applicable {
                    skipped += 1;
                } else {
                    checked += 1;
                    if survives {
                        if !survivors.contains(&m.abs()) {
                            survivors.push(m.abs());
                        }
                    } else {
                        not_monogenic += 1;
                    }
                }
            }
        }
        CorollaryName::SimplestQuarticBound => {
            // all classes except n odd with m = 4, 12 mod 16
            let ms: Vec<i64> = (-limit..=limit).filter(|&m| m != 0).collect();
            let results: Vec<(i64, bool, bool)> = ms
                .par_iter()
                .map(|&m| {
                    let mr = m.rem_euclid(16);
                    let mut any = false;
                    let mut survives = false;
                    for nr in [1i64, 2, 3, 5, 6, 7] {
                        let n_odd = nr % 2 == 1;
                        if n_odd && (mr == 4 || mr == 12) {
                            continue; // excluded from the corollary's scope
                        }
                        for n in sample_n_in_class(Family::QuadSimplestQuartic, nr, m, 1) {
                            any = true;
                            if let Ok(p) = validate_params(Family::QuadSimplestQuartic, Some(n), m)
                            {
                                if let Ok(v) = check(&p) {
                                    if v.status == VerdictStatus::Inconclusive {
                                        survives = true;
                                    }
                                }
                            }
                        }
                    }
                    (m, any, survives)
                })
                .collect();
            for (m, applicable, survives) in results {
                if !applicable {
                    skipped += 1;
                } else {
                    checked += 1;
                    if survives {
                        if !survivors.contains(&m.abs()) {
                            survivors.push(m.abs());
                        }
                    } else {
                        not_monogenic += 1;
                    }
                }
            }
        }
        CorollaryName::SexticSet => {
            let cache = SexticEngineCache::new();
            let ms: Vec<i64> = (-limit..=limit)
                .filter(|&m| is_squarefree(m.max(-m).max(1)).unwrap_or(false))
                .filter(|&m| validate_params(Family::OmegaPureSextic, None, m).is_ok())
                .collect();
            // group by residue class so each engine is built once, then the
            // members evaluate in parallel
            let mut by_class: std::collections::BTreeMap<i64, Vec<i64>> = Default::default();
            for &m in &ms {
                by_class.entry(m.rem_euclid(36)).or_default().push(m);
            }
            for (_, members) in by_class {
                // build the engine on the first member
                if let Some(&first) = members.first() {
                    let p = validate_params(Family::OmegaPureSextic, None, first).unwrap();
                    let _ = check_sextic_fast(&p, &cache);
                }
                let results: Vec<(i64, Option<VerdictStatus>)> = members
                    .par_iter()
                    .map(|&m| {
                        let p = validate_params(Family::OmegaPureSextic, None, m).unwrap();
                        (m, check_sextic_fast(&p, &cache).ok().map(|v| v.status))
                    })
                    .collect();
                for (m, st) in results {
                    match st {
                        None => skipped += 1,
                        Some(VerdictStatus::NotMonogenic) => {
                            checked += 1;
                            not_monogenic += 1;
                        }
                        Some(_) => {
                            checked += 1;
                            if !survivors.contains(&m.abs()) {
                                survivors.push(m.abs());
                            }
                        }
                    }
                }
            }
        }
    }
    survivors.sort_unstable();
    Ok(CorollarySummary {
        name: format!("{name:?}"),
        limit,
        survivors,
        checked,
        not_monogenic,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_examples_degree_6() {
        // (5, 1): the second condition fails both signs
        let p = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap();
        let v = check(&p).unwrap();
        assert_eq!(v.status, VerdictStatus::NotMonogenic);
        assert!(!v.witnesses.is_empty());

        // (3, 1): 3 | 170 and 13 | 1729, inconclusive
        let p = validate_params(Family::QuadSimplestCubic, Some(3), 1).unwrap();
        let v = check(&p).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
    }

    #[test]
    fn quartic_i_member() {
        // m = 7: 7 does not divide 15 or 17
        let p = validate_params(Family::QuadPureQuartic, Some(-1), 7).unwrap();
        let v = check(&p).unwrap();
        assert_eq!(v.status, VerdictStatus::NotMonogenic);
        // m = 15 survives the divisibility conditions
        let p = validate_params(Family::QuadPureQuartic, Some(-1), 15).unwrap();
        let v = check(&p).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
    }
}
