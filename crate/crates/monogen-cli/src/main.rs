//! Command line front end: integral bases, monogenity verdicts, parameter
//! scans, table verification and oracle checks, with machine-readable
//! output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use monogen::families::{tables, validate_params, Family};
use monogen::index_form::{factor_report, index_eval, index_oracle};
use monogen::monogenity::{
    check, corollary_scan, necessary_conditions, scan, CorollaryName,
};
use monogen::order::{maximal_order_basis, verify_table_basis};
use monogen::report;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_INVALID_PARAMS: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_TABLE_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "monogen",
    about = "Integral bases, index form factorizations and monogenity obstructions \
             for five families of composite number fields (degrees 6, 8, 12)",
    version
)]
struct Cli {
    /// Worker threads (default: MONOGEN_WORKERS or the number of cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for all randomized sampling (fixed default keeps runs reproducible)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Args)]
struct ParamArgs {
    /// Family name
    #[arg(long, value_parser = parse_family)]
    family: Family,

    /// Quadratic-part parameter (omit for omega-pure-sextic)
    #[arg(short, long, allow_hyphen_values = true)]
    n: Option<i64>,

    /// Partner-field parameter
    #[arg(short, long, allow_hyphen_values = true)]
    m: i64,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        format!(
            "unknown family {s:?}; expected one of {}",
            Family::ALL.map(|f| f.name()).join(", ")
        )
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range {s:?} must look like a..b (inclusive)"))?;
    let a: i64 = a.parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: i64 = b.parse().map_err(|e| format!("bad range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

#[derive(Subcommand)]
enum Command {
    /// Compute the maximal-order basis, discriminant and enlargement log,
    /// and compare against the published table row
    Basis(ParamArgs),

    /// Monogenity verdict: necessary divisibility conditions and witnesses
    Check(ParamArgs),

    /// Scan a parameter rectangle and emit one record per pair
    Scan {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Inclusive range a..b for n
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        n: Option<(i64, i64)>,
        /// Inclusive range a..b for m
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        m: (i64, i64),
    },

    /// Reproduce a published corollary by scanning its hypothesis set
    Corollary {
        /// quartic-i | quartic-bound | simplest-quartic-bound | sextic-set
        #[arg(long)]
        name: String,
        /// Scan |m| up to this bound (defaults to the published bound)
        #[arg(long)]
        limit: Option<i64>,
    },

    /// Verify published table rows against recomputation on sampled
    /// parameters
    VerifyTables {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Valid parameter pairs sampled per row
        #[arg(long, default_value_t = 2)]
        samples: usize,
        /// basis: integrality + discriminant + unimodular change of basis;
        /// full: adds factor relations, condition cross-checks and one
        /// oracle agreement per sample
        #[arg(long, default_value = "basis")]
        level: String,
    },

    /// Check index_eval against the discriminant-quotient oracle on random
    /// coordinate vectors, reporting wall time
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Dump full primitive parts in the report
        #[arg(long, default_value_t = false)]
        dump_factors: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli
        .workers
        .or_else(|| std::env::var("MONOGEN_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(w) = workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global();
    }
    let mut out = Output::new(cli.output.as_deref());
    let code = run(&cli, &mut out);
    if out.finish().is_err() {
        return ExitCode::from(EXIT_INTERNAL);
    }
    ExitCode::from(code)
}

struct Output {
    file: Option<std::fs::File>,
    buf: Vec<u8>,
}

impl Output {
    fn new(path: Option<&std::path::Path>) -> Output {
        let file = path.map(|p| std::fs::File::create(p).expect("create output file"));
        Output { file, buf: Vec::new() }
    }

    fn line(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
        self.buf.push(b'\n');
    }

    fn finish(&mut self) -> std::io::Result<()> {
        match &mut self.file {
            Some(f) => f.write_all(&self.buf),
            None => std::io::stdout().write_all(&self.buf),
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: &Cli, out: &mut Output) -> u8 {
    match &cli.command {
        Command::Basis(args) => cmd_basis(cli, args, out),
        Command::Check(args) => cmd_check(cli, args, out),
        Command::Scan { family, n, m } => cmd_scan(cli, *family, *n, *m, out),
        Command::Corollary { name, limit } => cmd_corollary(cli, name, *limit, out),
        Command::VerifyTables { family, samples, level } => {
            cmd_verify_tables(cli, *family, *samples, level, out)
        }
        Command::Oracle { params, trials, dump_factors } => {
            cmd_oracle(cli, params, *trials, *dump_factors, out)
        }
    }
}

fn cmd_basis(cli: &Cli, args: &ParamArgs, out: &mut Output) -> u8 {
    let params = match validate_params(args.family, args.n, args.m) {
        Ok(p) => p,
        Err(e) => {
            out.line(&format!("invalid parameters: {e}"));
            return EXIT_INVALID_PARAMS;
        }
    };
    let (verification, report) = match verify_table_basis(&params) {
        Ok(v) => v,
        Err(e) => {
            out.line(&format!("error: {e}"));
            return EXIT_INTERNAL;
        }
    };
    let doc = report::basis_doc(&report, Some(&verification));
    match cli.format {
        Format::Json => out.line(&json(&doc)),
        _ => {
            out.line(&format!("family: {}", params.label()));
            out.line(&format!("disc:   {}", report.disc));
            out.line("basis:");
            for b in &doc.basis {
                out.line(&format!("  {b}"));
            }
            if !doc.enlargement_steps.is_empty() {
                out.line("enlargement log:");
                for s in &doc.enlargement_steps {
                    out.line(&format!(
                        "  p={} lambda={:?} replaced row {}: disc {} -> {}",
                        s.prime, s.lambda, s.replaced_row, s.disc_before, s.disc_after
                    ));
                }
            }
            for c in &doc.certified_primes {
                out.line(&format!("certified {}-maximal: {}", c.prime, c.reason));
            }
            out.line(&format!(
                "table row {}: {}",
                verification.row_index,
                if verification.is_match() { "match" } else { "MISMATCH" }
            ));
        }
    }
    if verification.is_match() {
        EXIT_OK
    } else {
        EXIT_TABLE_MISMATCH
    }
}

fn cmd_check(cli: &Cli, args: &ParamArgs, out: &mut Output) -> u8 {
    let params = match validate_params(args.family, args.n, args.m) {
        Ok(p) => p,
        Err(e) => {
            out.line(&format!("invalid parameters: {e}"));
            return EXIT_INVALID_PARAMS;
        }
    };
    let verdict = match check(&params) {
        Ok(v) => v,
        Err(e) => {
            out.line(&format!("error: {e}"));
            return EXIT_INTERNAL;
        }
    };
    let doc = report::verdict_doc(&verdict);
    match cli.format {
        Format::Json => out.line(&json(&doc)),
        _ => {
            out.line(&format!("family: {}", params.label()));
            out.line(&format!("status: {}", verdict.status));
            out.line("conditions:");
            for c in &doc.conditions {
                out.line(&format!(
                    "  [{}] {} | {} +- {}   ({})",
                    if c.holds { "ok" } else { "fails" },
                    c.modulus,
                    c.value_a,
                    c.value_b,
                    c.relation
                ));
            }
            for w in &doc.witnesses {
                out.line(&format!("witness: {w}"));
            }
            let disagreements = doc.crosscheck.iter().filter(|c| c.agree == Some(false)).count();
            out.line(&format!(
                "table cross-check: {} cells, {} disagreements",
                doc.crosscheck.len(),
                disagreements
            ));
        }
    }
    EXIT_OK // the status is data; only operational failures are nonzero
}

fn cmd_scan(cli: &Cli, family: Family, n: Option<(i64, i64)>, m: (i64, i64), out: &mut Output) -> u8 {
    if family.has_n() && n.is_none() {
        out.line("this family requires an n range (--n a..b)");
        return EXIT_INVALID_PARAMS;
    }
    let records = scan(family, n, m);
    let mut counts = std::collections::BTreeMap::<String, usize>::new();
    for r in &records {
        let doc = report::scan_record_doc(r);
        *counts.entry(doc.status.clone()).or_default() += 1;
        match cli.format {
            Format::Json => out.line(&serde_json::to_string(&doc).unwrap()),
            Format::Csv => out.line(&report::scan_record_csv(r)),
            Format::Human => {
                let label = match r.n {
                    Some(n) => format!("n={n}, m={}", r.m),
                    None => format!("m={}", r.m),
                };
                match &r.outcome {
                    Ok(v) => out.line(&format!("{label}: {}", v.status)),
                    Err(e) => out.line(&format!("{label}: skipped ({e})")),
                }
            }
        }
    }
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.line(&format!("# summary: {}", summary.join(" ")));
    EXIT_OK
}

fn cmd_corollary(cli: &Cli, name: &str, limit: Option<i64>, out: &mut Output) -> u8 {
    let Some(corollary) = CorollaryName::from_str(name) else {
        out.line(&format!(
            "unknown corollary {name:?}; expected quartic-i, quartic-bound, simplest-quartic-bound or sextic-set"
        ));
        return EXIT_INVALID_PARAMS;
    };
    let limit = limit.unwrap_or_else(|| corollary.default_limit());
    let summary = match corollary_scan(corollary, limit) {
        Ok(s) => s,
        Err(e) => {
            out.line(&format!("error: {e}"));
            return EXIT_INTERNAL;
        }
    };
    let doc = report::corollary_doc(&summary);
    match cli.format {
        Format::Json => out.line(&json(&doc)),
        _ => {
            out.line(&format!("corollary {name} with |m| <= {limit}"));
            out.line(&format!(
                "checked {} parameters: {} not monogenic, {} skipped",
                summary.checked, summary.not_monogenic, summary.skipped
            ));
            out.line(&format!("surviving |m|: {:?}", summary.survivors));
        }
    }
    EXIT_OK
}

fn cmd_verify_tables(cli: &Cli, family: Family, samples: usize, level: &str, out: &mut Output) -> u8 {
    if samples == 0 {
        out.line("--samples must be at least 1");
        return EXIT_INVALID_PARAMS;
    }
    let full = match level {
        "basis" => false,
        "full" => true,
        other => {
            out.line(&format!("unknown level {other:?}; expected basis or full"));
            return EXIT_INVALID_PARAMS;
        }
    };
    let table = tables::basis_table(family);
    let mut rng = StdRng::seed_from_u64(cli.seed);
    let mut any_mismatch = false;
    let mut rows_out = Vec::new();
    for (idx, row) in table.rows.iter().enumerate() {
        let pairs = sample_row_params(
            family,
            &row.n_set,
            table.n_modulus,
            &row.m_set,
            table.m_modulus,
            samples,
            &mut rng,
        );
        if pairs.is_empty() {
            rows_out.push(format!(
                "row {idx:2} (n in {:?}, m in {:?}): no valid parameters (vacuous row)",
                row.n_set, row.m_set
            ));
            continue;
        }
        for (n, m) in pairs {
            let params = validate_params(family, n, m).expect("sampled parameters validate");
            match verify_table_basis(&params) {
                Ok((v, report)) => {
                    let mut line = format!(
                        "row {idx:2} {}: basis {}",
                        params.label(),
                        if v.is_match() { "ok" } else { "MISMATCH" }
                    );
                    if !v.is_match() {
                        any_mismatch = true;
                        line.push_str(&format!(
                            " (integral {:?}, disc {} vs {}, unimodular {})",
                            v.integral, v.table_disc, v.computed_disc, v.unimodular
                        ));
                    }
                    if full {
                        match factor_report(&params, &report.basis, &report.disc) {
                            Ok(fr) => {
                                let rel_fail =
                                    fr.relations.iter().filter(|r| !r.full_strength).count();
                                let idents = fr.verify_identity();
                                let conds = necessary_conditions(&fr);
                                let disagreements =
                                    monogen::monogenity::crosscheck_table(&params, &conds)
                                        .iter()
                                        .filter(|c| c.agree == Some(false))
                                        .count();
                                // one oracle agreement per sample
                                let x: Vec<i64> = (0..params.degree - 1)
                                    .map(|_| rng.gen_range(-3..=3))
                                    .collect();
                                let oracle_ok = match index_oracle(
                                    &params,
                                    &report.basis,
                                    &report.disc,
                                    &x,
                                ) {
                                    Ok(io) => io == index_eval(&fr, &x),
                                    Err(_) => index_eval(&fr, &x) == 0u32.into(),
                                };
                                line.push_str(&format!(
                                    "; identities {}; {} relations below stated strength; {} table cells disagree; oracle {}",
                                    if idents { "ok" } else { "FAIL" },
                                    rel_fail,
                                    disagreements,
                                    if oracle_ok { "ok" } else { "FAIL" }
                                ));
                                if !idents || !oracle_ok {
                                    any_mismatch = true;
                                }
                            }
                            Err(e) => {
                                line.push_str(&format!("; factor report failed: {e}"));
                                any_mismatch = true;
                            }
                        }
                    }
                    rows_out.push(line);
                }
                Err(e) => {
                    rows_out.push(format!("row {idx:2} {}: error {e}", params.label()));
                    any_mismatch = true;
                }
            }
        }
    }
    out.line(&format!(
        "verify-tables {} ({} rows, {} samples per row, level {})",
        family.name(),
        table.rows.len(),
        samples,
        level
    ));
    for l in &rows_out {
        out.line(l);
    }
    out.line(&format!("result: {}", if any_mismatch { "MISMATCH" } else { "all rows match" }));
    if any_mismatch {
        EXIT_TABLE_MISMATCH
    } else {
        EXIT_OK
    }
}

/// Sample valid (n, m) pairs from a residue row, deterministically under the
/// given RNG.
fn sample_row_params(
    family: Family,
    n_set: &[i64],
    n_mod: i64,
    m_set: &[i64],
    m_mod: i64,
    count: usize,
    rng: &mut StdRng,
) -> Vec<(Option<i64>, i64)> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 4000 {
        tries += 1;
        let n = if family.has_n() {
            let res = n_set[rng.gen_range(0..n_set.len())];
            let k = rng.gen_range(0..24i64);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            Some(if sign > 0 { res + n_mod * k } else { res - n_mod * (k + 1) })
        } else {
            None
        };
        let m = if m_mod <= 1 {
            let v = rng.gen_range(-60i64..=60);
            if v == 0 {
                1
            } else {
                v
            }
        } else {
            let res = m_set[rng.gen_range(0..m_set.len())];
            let k = rng.gen_range(0..24i64);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            if sign > 0 {
                res + m_mod * k
            } else {
                res - m_mod * (k + 1)
            }
        };
        if validate_params(family, n, m).is_ok() && !out.contains(&(n, m)) {
            out.push((n, m));
        }
    }
    out
}

fn cmd_oracle(cli: &Cli, args: &ParamArgs, trials: usize, dump_factors: bool, out: &mut Output) -> u8 {
    let params = match validate_params(args.family, args.n, args.m) {
        Ok(p) => p,
        Err(e) => {
            out.line(&format!("invalid parameters: {e}"));
            return EXIT_INVALID_PARAMS;
        }
    };
    let t0 = Instant::now();
    let order = match maximal_order_basis(&params) {
        Ok(r) => r,
        Err(e) => {
            out.line(&format!("error: {e}"));
            return EXIT_INTERNAL;
        }
    };
    let t_order = t0.elapsed();
    let t1 = Instant::now();
    let fr = match factor_report(&params, &order.basis, &order.disc) {
        Ok(f) => f,
        Err(e) => {
            out.line(&format!("error: {e}"));
            return EXIT_INTERNAL;
        }
    };
    let t_expand = t1.elapsed();
    let mut rng = StdRng::seed_from_u64(cli.seed);
    let mut agree = 0usize;
    let mut failures = Vec::new();
    let t2 = Instant::now();
    let mut done = 0usize;
    while done < trials {
        let x: Vec<i64> = (0..params.degree - 1).map(|_| rng.gen_range(-3..=3)).collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        done += 1;
        let via_factors = index_eval(&fr, &x);
        match index_oracle(&params, &order.basis, &order.disc, &x) {
            Ok(via_disc) => {
                if via_factors == via_disc {
                    agree += 1;
                } else {
                    failures.push(format!("x={x:?}: {via_factors} vs {via_disc}"));
                }
            }
            Err(monogen::index_form::IndexFormError::NonPrimitive) => {
                if via_factors == 0u32.into() {
                    agree += 1;
                } else {
                    failures.push(format!("x={x:?}: nonprimitive but index {via_factors}"));
                }
            }
            Err(e) => failures.push(format!("x={x:?}: oracle error {e}")),
        }
    }
    let t_trials = t2.elapsed();
    if cli.format == Format::Json {
        let doc = report::factor_report_doc(&fr, dump_factors);
        out.line(&json(&doc));
    }
    out.line(&format!("family: {}", params.label()));
    out.line(&format!(
        "timing: order {:.3}s, expansion {:.3}s, {} trials {:.3}s",
        t_order.as_secs_f64(),
        t_expand.as_secs_f64(),
        trials,
        t_trials.as_secs_f64()
    ));
    out.line(&format!("oracle agreement: {agree}/{done}"));
    for f in &failures {
        out.line(&format!("FAIL {f}"));
    }
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}
