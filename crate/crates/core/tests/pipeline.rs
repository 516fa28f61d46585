use num_bigint::BigInt;
use num_traits::ToPrimitive;

use tailsum::closed_form::build_closed_form;
use tailsum::oracle::{tighten, verify_range, TailOracle};
use tailsum::parse::parse_poly;

fn both(src: &str) -> (tailsum::closed_form::ClosedForm, TailOracle) {
    let g = parse_poly(src).unwrap();
    (build_closed_form(&g).unwrap(), TailOracle::new(&g).unwrap())
}

#[test]
fn quartic_window_past_threshold() {
    let (cf, oracle) = both("X^4");
    let n = cf.threshold.to_u64().unwrap();
    assert!(verify_range(&cf, &oracle, n, n + 100).is_clean());
}

#[test]
fn tightened_floors_for_small_monomials() {
    // X^5 is off by one at n = 1, 2: a_1 = 27, a_2 = 176.
    for (k, want) in [(2, 1u64), (3, 1), (4, 1), (5, 3)] {
        let (mut cf, oracle) = both(&format!("X^{k}"));
        assert_eq!(tighten(&mut cf, &oracle, 1), want, "k = {k}");
        assert_eq!(cf.valid_from(), &BigInt::from(want));
    }
    let (cf, _) = both("X^5");
    assert_eq!(cf.formula_value(1).unwrap(), BigInt::from(26));
    assert_eq!(cf.formula_value(2).unwrap(), BigInt::from(175));
}

#[test]
fn tightening_stops_at_first_disagreement() {
    let (mut cf, oracle) = both("X^2 + 3*X + 50");
    let floor = tighten(&mut cf, &oracle, 1);
    let report = verify_range(&cf, &oracle, floor, floor + 200);
    assert!(report.is_clean());
    if floor > 1 {
        assert!(!verify_range(&cf, &oracle, floor - 1, floor - 1).is_clean());
    }
}

#[test]
fn scaled_telescoping_family() {
    // 1/(a(X^2 - 1/4)) telescopes with f = a(X + 1/2).
    for a in [1i64, 2, 5] {
        let (cf, oracle) = both(&format!("{a}*X^2 - {a}/4"));
        assert!(oracle.telescoping().is_some());
        let n = cf.threshold.to_u64().unwrap();
        assert!(verify_range(&cf, &oracle, n, n + 50).is_clean());
    }
}

#[test]
fn enclosure_contains_known_value() {
    // Σ_{i>1} 1/i^2 = π²/6 - 1.
    let g = parse_poly("X^2").unwrap();
    let e = TailOracle::new(&g).unwrap().tail_enclosure(1, 20).unwrap();
    let lo = e.lo.to_f64().unwrap();
    let hi = e.hi.to_f64().unwrap();
    let truth = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
    assert!(lo <= truth + 1e-15 && truth - 1e-15 <= hi);
    assert!(hi - lo < 1e-12);
}
