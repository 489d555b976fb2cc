mod common;

use common::formulas::{round_trip, scenario_formulas, signature, Gen};
use common::load_sim;
use ethguard_core::parse_formula;

#[test]
fn generated_formulas_round_trip() {
    let sig = signature();
    let mut gen = Gen::seeded(0x5eed);
    for i in 0..400 {
        let f = gen.formula(1 + i % 5);
        sig.check_closed(&f)
            .unwrap_or_else(|e| panic!("generator made {f}: {e}"));
        round_trip(&f, &sig).unwrap();
    }
}

#[test]
fn scenario_formulas_round_trip() {
    for name in ["sim1", "sim2", "sim2_means"] {
        let s = load_sim(name);
        for f in &scenario_formulas(&s) {
            round_trip(f, &s.sig).unwrap();
        }
    }
}

#[test]
fn printing_is_stable_under_reparsing_whitespace() {
    let sig = signature();
    let messy = "(forall   x:Obj\n  (implies (R x)\t(exists y:Obj (L x y))))";
    let f = parse_formula(messy, &sig).unwrap();
    assert_eq!(
        f.to_string(),
        "(forall x:Obj (implies (R x) (exists y:Obj (L x y))))"
    );
    round_trip(&f, &sig).unwrap();
}
