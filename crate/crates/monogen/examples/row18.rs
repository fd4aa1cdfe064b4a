use monogen::families::{tables, validate_params, Family};
use monogen::order::{is_integral, verify_table_basis};

fn main() {
    // row "3,15 | 10": map which (n, m) verify
    let mut fails = Vec::new();
    let mut oks = Vec::new();
    for n in [-69i64, -33, 3, 15, 39, 51, 87, 123, 159, 195, 231, 267, -213, -141] {
        if n.rem_euclid(36) != 3 && n.rem_euclid(36) != 15 { continue; }
        for m in [-458i64, -422, -62, -26, 10, 46, 82, 118, 154, 190, 226, 262] {
            if m.rem_euclid(36) != 10 { continue; }
            let Ok(p) = validate_params(Family::QuadPureCubic, Some(n), m) else { continue };
            let elems = tables::table_basis_elements(&p).unwrap();
            let bad: Vec<usize> = elems.iter().enumerate().filter(|(_, e)| !is_integral(e)).map(|(i, _)| i).collect();
            let (v, _) = verify_table_basis(&p).unwrap();
            if v.is_match() {
                oks.push((n, m));
            } else {
                fails.push((n, m, bad, v.disc_match, v.unimodular));
            }
        }
    }
    println!("ok   ({}): {:?}", oks.len(), oks);
    println!("fail ({}):", fails.len());
    for f in &fails {
        println!("  n={} m={} non-integral elements {:?} disc_match={} unimod={}  n%27={} m%27={} n%8={} m%8={}",
            f.0, f.1, f.2, f.3, f.4, f.0.rem_euclid(27), f.1.rem_euclid(27), f.0.rem_euclid(8), f.1.rem_euclid(8));
    }
}
