use monogen::families::{expr, main_spec, validate_params, Family};
use monogen::order::{is_integral, maximal_order_basis, BasisMatrix};
use monogen::tower::TowerElement;
use monogen::Rat;

fn check_variant(n: i64, m: i64, last: &str) -> (bool, bool) {
    let p = validate_params(Family::QuadPureCubic, Some(n), m).unwrap();
    let spec = main_spec(&p);
    let a = TowerElement::generator(spec.clone(), 0);
    let b = TowerElement::generator(spec.clone(), 1);
    let bind = p.bindings();
    let texts = [
        "1".to_string(), "b".into(), "(b^2+v^2*b+v^2)/(3*v)".into(),
        "a".into(), "(a*(b+2))/3".into(), last.into(),
    ];
    let elems: Vec<TowerElement> = texts
        .iter()
        .map(|t| expr::eval_element(&expr::parse(t).unwrap(), &bind, &spec, &a, &b).unwrap())
        .collect();
    let all_integral = elems.iter().all(is_integral);
    let report = maximal_order_basis(&p).unwrap();
    let table = BasisMatrix::from_elements(spec, &elems);
    let disc_eq = table.discriminant() == Rat::from(report.disc.clone());
    (all_integral, disc_eq)
}

fn main() {
    let printed = "(a*(b^2+2*v^2*b+6)+b^2+4*v^2*b+4*v^2)/(6*v)";
    let corrected = "(a*(b^2+2*v^2*b+6*v^2)+b^2+4*v^2*b+4*v^2)/(6*v)";
    // v > 1 members of the class: m = u*v^2 = 10 mod 36
    for (n, m) in [(267i64, -242i64), (195, -242), (3, 550), (15, 550), (-33, -242), (51, 1450)] {
        if validate_params(Family::QuadPureCubic, Some(n), m).is_err() {
            println!("({n},{m}): invalid");
            continue;
        }
        let p = check_variant(n, m, printed);
        let c = check_variant(n, m, corrected);
        println!("({n},{m}) v>1: printed integral={} disc={}; corrected integral={} disc={}", p.0, p.1, c.0, c.1);
    }
}
