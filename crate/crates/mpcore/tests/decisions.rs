mod common;

use mpcore::decisions::*;
use mpcore::gr1::parse_gr1;
use mpcore::rational::{frac, ints};
use mpcore::{Budget, Coalition};

#[test]
fn example_queries() {
    let b = Budget::default();
    let g = common::three_sinks(0);
    let v = dominated(&g, 0, &ints(&[2, 1, 0]), &b).unwrap();
    assert!(v.answer);
    match v.witness.unwrap() {
        Witness::Domination { coalition, z } => {
            assert_eq!(coalition, Coalition::new(3, &[1, 2]).unwrap());
            assert_eq!(z, ints(&[2, 1]));
        }
        w => panic!("{w:?}"),
    }
    assert!(!core_nonempty(&g, &b).unwrap().answer);
    let m = common::three_sinks(1);
    assert!(!dominated(&m, 0, &ints(&[1, 1, 1]), &b).unwrap().answer);
    let v = core_nonempty(&m, &b).unwrap();
    assert_eq!(v.witness, Some(Witness::Payoff(ints(&[1, 1, 1]))));

    let spec = parse_gr1("true -> GF at_s").unwrap();
    let v = e_core_gr1(&m, &spec, &b).unwrap();
    assert!(v.answer);
    let Some(Witness::Path(w)) = v.witness else { panic!() };
    assert_eq!(w.lasso.cycle, vec![0]);
    assert!(verify_path_witness(&m, &w, &b).unwrap());
    assert!(!e_core_gr1(&g, &spec, &b).unwrap().answer);
    assert!(e_core_gr1(&m, &mpcore::gr1::Gr1Spec::trivial(), &b).unwrap().answer);
    let v = a_core_gr1(&m, &parse_gr1("true -> GF at_t").unwrap(), &b).unwrap();
    assert!(!v.answer);

    let l = common::lanes();
    let v = e_core_gr1(&l, &parse_gr1("true -> GF l").unwrap(), &b).unwrap();
    assert!(v.answer, "{v:?}");
    let v = a_core_gr1(&l, &parse_gr1("true -> GF l & GF r").unwrap(), &b).unwrap();
    // Parking in r is a core outcome that never visits l.
    assert!(!v.answer);
    let Some(Witness::Path(w)) = v.witness else { panic!() };
    assert_eq!(w.lasso.cycle, vec![2]);
    assert!(verify_path_witness(&l, &w, &b).unwrap());
    assert!(dominated(&l, 0, &ints(&[0, 0]), &b).unwrap().answer);
    // Mixing the two loops beats the alternating payoff for both players.
    assert!(dominated(&l, 0, &[frac(1, 4), frac(1, 4)], &b).unwrap().answer);
    assert!(core_nonempty(&l, &b).unwrap().answer);
}
