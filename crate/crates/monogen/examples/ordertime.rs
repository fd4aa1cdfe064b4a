use monogen::families::{validate_params, Family};
use monogen::order::maximal_order_basis;
use std::time::Instant;

fn main() {
    for m in [2i64, 17, 29, 10, -5, 107] {
        let params = validate_params(Family::OmegaPureSextic, None, m).unwrap();
        let t = Instant::now();
        let r = maximal_order_basis(&params).unwrap();
        println!("m={m}: disc {} steps {} certified {:?} in {:?}", r.disc, r.steps.len(),
                 r.certified.iter().map(|c| c.prime).collect::<Vec<_>>(), t.elapsed());
    }
}
