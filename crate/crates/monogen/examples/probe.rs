use monogen::families::{validate_params, Family, ext_spec};
use monogen::index_form::{factor_report, index_eval, index_oracle};
use monogen::order::maximal_order_basis;
use std::time::Instant;

fn run(f: Family, n: Option<i64>, m: i64) {
    let t0 = Instant::now();
    let params = validate_params(f, n, m).unwrap();
    let report = maximal_order_basis(&params).unwrap();
    let t1 = Instant::now();
    println!("{}: D_K = {} (order in {:?}, {} steps)", params.label(), report.disc, t1 - t0, report.steps.len());
    let fr = factor_report(&params, &report.basis, &report.disc).unwrap();
    let t2 = Instant::now();
    println!("  factors: degrees {:?} sizes {:?} ({:?})", fr.factor_degrees, fr.factor_sizes, t2 - t1);
    let spec = ext_spec(&params);
    for (i, (c, g)) in fr.contents.iter().enumerate() {
        println!("  f{} = {} * mono{}  (f^2 = {}), G{} terms = {}, primitive = {}",
            i + 1, c.coeff, c.monomial, c.square(&spec), i + 1, g.num_terms(), g.is_primitive());
    }
    println!("  identity: {:?}", fr.identity);
    for r in &fr.relations {
        println!("  rel {}: base {} pow {} verified {} full {} values ({}, {}) holds {}",
            r.id, r.modulus_base, r.power, r.verified_modulus, r.full_strength, r.value_a, r.value_b, r.value_holds);
    }
    // one oracle check
    let d = params.degree;
    let x: Vec<i64> = (0..d - 1).map(|k| [1, -2, 0, 3, 1, -1][k % 6]).collect();
    let ie = index_eval(&fr, &x);
    match index_oracle(&params, &report.basis, &report.disc, &x) {
        Ok(io) => println!("  oracle at {:?}: eval {} oracle {} agree {}", x, ie, io, ie == io),
        Err(e) => println!("  oracle error: {}", e),
    }
    println!("  total {:?}", t0.elapsed());
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("sextic") => run(Family::OmegaPureSextic, None, 2),
        Some("quartics") => {
            run(Family::QuadPureQuartic, Some(-1), 7);
            run(Family::QuadSimplestQuartic, Some(5), 1);
        }
        _ => {
            run(Family::QuadSimplestCubic, Some(5), 1);
            run(Family::QuadPureCubic, Some(7), 50);
        }
    }
}
