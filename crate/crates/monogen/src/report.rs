//! Machine-readable views of the library's results: structured documents
//! with `"schema": 1`, byte-stable field order, and canonical integer
//! rendering (big integers as strings), plus columnar rows for scans.

use crate::families::{main_spec, Family, FamilyParams};
use crate::index_form::FactorReport;
use crate::monogenity::{CorollarySummary, CrosscheckCell, ScanRecord, Verdict};
use crate::order::{OrderReport, TableVerification};
use crate::tower::TowerElement;
use crate::Rat;
use num_traits::{One, Signed};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Render a tower element of a composite-field main ring in the generator
/// symbols `a` (quadratic part, `w` for the sextic family) and `b`.
pub fn format_element(params: &FamilyParams, e: &TowerElement) -> String {
    let spec = main_spec(params);
    let quad_sym = if params.family == Family::OmegaPureSextic { "w" } else { "a" };
    if e.is_zero() {
        return "0".into();
    }
    // common denominator
    let mut den = crate::Int::one();
    for (_, q) in e.terms() {
        den = num_integer::Integer::lcm(&den, q.denom());
    }
    let mut parts: Vec<String> = Vec::new();
    for (mono, q) in e.terms().iter().rev() {
        let c = q * Rat::from(den.clone());
        debug_assert!(c.denom().is_one());
        let c = c.numer().clone();
        let exps = spec.exponents(*mono);
        let mut sym = String::new();
        if exps[1] > 0 {
            sym.push('b');
            if exps[1] > 1 {
                sym.push_str(&format!("^{}", exps[1]));
            }
        }
        if exps[0] > 0 {
            if !sym.is_empty() {
                sym.push('*');
            }
            sym.push_str(quad_sym);
            if exps[0] > 1 {
                sym.push_str(&format!("^{}", exps[0]));
            }
        }
        let leading = parts.is_empty();
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else if leading { "" } else { "+" };
        let body = if sym.is_empty() {
            format!("{mag}")
        } else if mag.is_one() {
            sym
        } else {
            format!("{mag}*{sym}")
        };
        parts.push(format!("{sign}{body}"));
    }
    let num = parts.join("");
    if den.is_one() {
        num
    } else if parts.len() == 1 && !num.starts_with('-') {
        format!("{num}/{den}")
    } else {
        format!("({num})/{den}")
    }
}

#[derive(Debug, Serialize)]
pub struct ParamsDoc {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub m: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<i64>,
    pub degree: usize,
}

impl ParamsDoc {
    pub fn new(p: &FamilyParams) -> Self {
        ParamsDoc {
            family: p.family.name().into(),
            n: p.n,
            m: p.m,
            u: if p.family == Family::QuadPureCubic { Some(p.u) } else { None },
            v: if p.family == Family::QuadPureCubic { Some(p.v) } else { None },
            m0: if p.m0 != 0 { Some(p.m0) } else { None },
            degree: p.degree,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BasisDoc {
    pub schema: u32,
    pub params: ParamsDoc,
    pub basis: Vec<String>,
    pub disc: String,
    pub initial_disc: String,
    pub enlargement_steps: Vec<StepDoc>,
    pub certified_primes: Vec<CertifiedDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableDoc>,
}

#[derive(Debug, Serialize)]
pub struct StepDoc {
    pub prime: i64,
    pub lambda: Vec<u64>,
    pub replaced_row: usize,
    pub disc_before: String,
    pub disc_after: String,
}

#[derive(Debug, Serialize)]
pub struct CertifiedDoc {
    pub prime: i64,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct TableDoc {
    pub row_index: usize,
    pub matches: bool,
    pub integral: Vec<bool>,
    pub disc_match: bool,
    pub unimodular: bool,
    pub table_disc: String,
    pub computed_disc: String,
}

impl TableDoc {
    pub fn new(v: &TableVerification) -> Self {
        TableDoc {
            row_index: v.row_index,
            matches: v.is_match(),
            integral: v.integral.clone(),
            disc_match: v.disc_match,
            unimodular: v.unimodular,
            table_disc: v.table_disc.clone(),
            computed_disc: v.computed_disc.clone(),
        }
    }
}

pub fn basis_doc(report: &OrderReport, table: Option<&TableVerification>) -> BasisDoc {
    let basis = report
        .basis
        .elements()
        .iter()
        .map(|e| format_element(&report.params, e))
        .collect();
    BasisDoc {
        schema: SCHEMA_VERSION,
        params: ParamsDoc::new(&report.params),
        basis,
        disc: report.disc.to_string(),
        initial_disc: report.initial_disc.to_string(),
        enlargement_steps: report
            .steps
            .iter()
            .map(|s| StepDoc {
                prime: s.prime,
                lambda: s.lambda.clone(),
                replaced_row: s.replaced_row,
                disc_before: s.disc_before.clone(),
                disc_after: s.disc_after.clone(),
            })
            .collect(),
        certified_primes: report
            .certified
            .iter()
            .map(|c| CertifiedDoc { prime: c.prime, reason: c.reason.clone() })
            .collect(),
        table: table.map(TableDoc::new),
    }
}

#[derive(Debug, Serialize)]
pub struct FactorDoc {
    pub index: usize,
    pub linear_factors: usize,
    pub degree: u32,
    pub terms: usize,
    /// content as (numerator, denominator, tower monomial index)
    pub content_numer: String,
    pub content_denom: String,
    pub content_monomial: u32,
    pub content_squared: String,
    pub primitive: bool,
    pub primitive_part_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_part: Option<Vec<(String, String)>>,
}

#[derive(Debug, Serialize)]
pub struct RelationDoc {
    pub id: String,
    pub modulus_desc: String,
    pub modulus_base: String,
    pub power: u32,
    pub verified_modulus: String,
    pub full_strength: bool,
    pub coefficient_gcd: String,
    pub value_a: String,
    pub value_b: String,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct FactorReportDoc {
    pub schema: u32,
    pub params: ParamsDoc,
    pub disc: String,
    pub degree_sum: u32,
    pub degree_sum_ok: bool,
    pub pair_coverage_ok: bool,
    pub primitives_ok: bool,
    pub content_identity_ok: bool,
    pub factors: Vec<FactorDoc>,
    pub relations: Vec<RelationDoc>,
}

/// Deterministic content hash of a primitive part: FNV-1a over the sorted
/// term list.
fn int_poly_hash(g: &crate::mpoly::IntPoly) -> String {
    let mut terms: Vec<(u64, String)> = g.terms().map(|(k, v)| (*k, v.to_string())).collect();
    terms.sort();
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for (k, v) in &terms {
        eat(&k.to_le_bytes());
        eat(v.as_bytes());
    }
    format!("{h:016x}")
}

pub fn factor_report_doc(fr: &FactorReport, dump_factors: bool) -> FactorReportDoc {
    let spec = crate::families::ext_spec(&fr.params);
    let factors = fr
        .contents
        .iter()
        .enumerate()
        .map(|(i, (c, g))| {
            let dump = if dump_factors {
                let mut terms: Vec<(u64, String)> =
                    g.terms().map(|(k, v)| (*k, v.to_string())).collect();
                terms.sort();
                Some(terms.into_iter().map(|(k, v)| (format!("{k:#x}"), v)).collect())
            } else {
                None
            };
            FactorDoc {
                index: i + 1,
                linear_factors: crate::index_form::factor_schedule(fr.params.family)[i].len(),
                degree: fr.factor_degrees[i],
                terms: fr.factor_sizes[i],
                content_numer: c.coeff.numer().to_string(),
                content_denom: c.coeff.denom().to_string(),
                content_monomial: c.monomial,
                content_squared: c.square(&spec).to_string(),
                primitive: g.is_primitive(),
                primitive_part_hash: int_poly_hash(g),
                primitive_part: dump,
            }
        })
        .collect();
    let relations = fr
        .relations
        .iter()
        .map(|r| RelationDoc {
            id: r.id.clone(),
            modulus_desc: r.modulus_desc.clone(),
            modulus_base: r.modulus_base.to_string(),
            power: r.power,
            verified_modulus: r.verified_modulus.to_string(),
            full_strength: r.full_strength,
            coefficient_gcd: r.content_gcd.to_string(),
            value_a: r.value_a.to_string(),
            value_b: r.value_b.to_string(),
            holds: r.value_holds,
        })
        .collect();
    FactorReportDoc {
        schema: SCHEMA_VERSION,
        params: ParamsDoc::new(&fr.params),
        disc: fr.d_k.to_string(),
        degree_sum: fr.identity.degree_sum,
        degree_sum_ok: fr.identity.degree_sum_ok,
        pair_coverage_ok: fr.identity.pair_coverage_ok,
        primitives_ok: fr.identity.primitives_ok,
        content_identity_ok: fr.identity.content_identity_ok,
        factors,
        relations,
    }
}

#[derive(Debug, Serialize)]
pub struct ConditionDoc {
    pub relation: String,
    pub modulus: String,
    pub value_a: String,
    pub value_b: String,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct CrosscheckDoc {
    pub table_condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_relation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
}

fn crosscheck_doc(c: &CrosscheckCell) -> CrosscheckDoc {
    CrosscheckDoc {
        table_condition: format!("{} | {} +- {}", c.table_text.0, c.table_text.1, c.table_text.2),
        table_holds: c.table_holds,
        derived_relation: c.derived_id.clone(),
        derived_holds: c.derived_holds,
        agree: c.agree,
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictDoc {
    pub schema: u32,
    pub params: ParamsDoc,
    pub status: String,
    pub conditions: Vec<ConditionDoc>,
    pub witnesses: Vec<String>,
    pub crosscheck: Vec<CrosscheckDoc>,
}

pub fn verdict_doc(v: &Verdict) -> VerdictDoc {
    VerdictDoc {
        schema: SCHEMA_VERSION,
        params: ParamsDoc::new(&v.params),
        status: v.status.to_string(),
        conditions: v
            .conditions
            .iter()
            .map(|c| ConditionDoc {
                relation: c.relation_id.clone(),
                modulus: c.modulus.to_string(),
                value_a: c.a.to_string(),
                value_b: c.b.to_string(),
                holds: c.holds,
            })
            .collect(),
        witnesses: v
            .witnesses
            .iter()
            .map(|&i| {
                let c = &v.conditions[i];
                format!(
                    "{} | {} +- {} fails for both signs",
                    c.modulus, c.a, c.b
                )
            })
            .collect(),
        crosscheck: v.crosscheck.iter().map(crosscheck_doc).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct ScanRecordDoc {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub m: i64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub witnesses: Vec<String>,
}

pub fn scan_record_doc(r: &ScanRecord) -> ScanRecordDoc {
    match &r.outcome {
        Ok(v) => ScanRecordDoc {
            family: r.family.name().into(),
            n: r.n,
            m: r.m,
            status: v.status.to_string(),
            reason: None,
            witnesses: v
                .witnesses
                .iter()
                .map(|&i| {
                    let c = &v.conditions[i];
                    format!("{}: {} | {} +- {}", c.relation_id, c.modulus, c.a, c.b)
                })
                .collect(),
        },
        Err(e) => ScanRecordDoc {
            family: r.family.name().into(),
            n: r.n,
            m: r.m,
            status: "skipped".into(),
            reason: Some(e.clone()),
            witnesses: Vec::new(),
        },
    }
}

/// Columnar form: `family,n,m,status,witnesses-or-reason` with `;` between
/// witnesses.
pub fn scan_record_csv(r: &ScanRecord) -> String {
    let doc = scan_record_doc(r);
    let detail = match &doc.reason {
        Some(reason) => reason.replace(',', ";"),
        None => doc.witnesses.join(";").replace(',', ";"),
    };
    format!(
        "{},{},{},{},{}",
        doc.family,
        doc.n.map(|v| v.to_string()).unwrap_or_default(),
        doc.m,
        doc.status,
        detail
    )
}

#[derive(Debug, Serialize)]
pub struct CorollaryDoc {
    pub schema: u32,
    pub name: String,
    pub limit: i64,
    pub survivors: Vec<i64>,
    pub checked: usize,
    pub not_monogenic: usize,
    pub skipped: usize,
}

pub fn corollary_doc(s: &CorollarySummary) -> CorollaryDoc {
    CorollaryDoc {
        schema: SCHEMA_VERSION,
        name: s.name.clone(),
        limit: s.limit,
        survivors: s.survivors.clone(),
        checked: s.checked,
        not_monogenic: s.not_monogenic,
        skipped: s.skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::validate_params;
    use crate::tower::TowerElement;

    #[test]
    fn element_formatting() {
        let p = validate_params(Family::QuadSimplestCubic, Some(5), 1).unwrap();
        let spec = main_spec(&p);
        let a = TowerElement::generator(spec.clone(), 0);
        let b = TowerElement::generator(spec.clone(), 1);
        let one = TowerElement::one(spec.clone());
        let e = a.add(&one).scalar_mul(&Rat::new(crate::Int::from(1), crate::Int::from(2)));
        assert_eq!(format_element(&p, &e), "(a+1)/2");
        let e2 = a.mul(&b.pow(2)).add(&b.pow(2)).scalar_mul(&Rat::new(
            crate::Int::from(1),
            crate::Int::from(2),
        ));
        assert_eq!(format_element(&p, &e2), "(b^2*a+b^2)/2");
        assert_eq!(format_element(&p, &one), "1");
    }
}
