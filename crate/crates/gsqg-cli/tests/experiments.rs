use std::f64::consts::PI;

use gsqg_cli::datum;
use gsqg_cli::experiments::dispersive::{dominant_block, sample_times};
use gsqg_cli::report::{Bound, Check, CriterionReport};
use gsqg_cli::{Datum, Experiment, ExperimentConfig};
use proptest::prelude::*;

#[test]
fn packet_datum_selects_its_block() {
    let mut cfg = ExperimentConfig::new(1.5, Experiment::Scattering);
    cfg.datum = Datum::ModulatedPacket;
    cfg.half_length = 64.0 * PI;
    cfg.n_points = 2048;
    for (carrier, lambda) in [(2.8, 4.0), (5.6, 8.0), (1.4, 2.0)] {
        cfg.carrier = carrier;
        let grid = cfg.grid().unwrap();
        let phi = datum::build(&cfg, &grid);
        assert_eq!(dominant_block(&phi, &cfg.model().unwrap()).unwrap(), lambda);
    }
}

#[test]
fn verdict_line_reports_every_check() {
    let r = CriterionReport::new(
        7,
        "dispersive decay",
        vec![
            Check::new("Y decay exponent", -0.5, Bound::Within(-0.6, -0.4)),
            Check::new("X growth exponent", 0.1, Bound::Below(0.05)),
        ],
    );
    assert!(!r.passed);
    let line = r.line();
    assert!(line.starts_with("FAIL criterion 7: dispersive decay: "), "{line}");
    assert!(line.contains("Y decay exponent = -5.000000e-1 (in [-0.6, -0.4])"), "{line}");
    assert!(line.contains("X growth exponent"), "{line}");
}

#[test]
fn bounds_are_strict_or_inclusive_as_named() {
    assert!(!Bound::Below(1.0).holds(1.0));
    assert!(Bound::AtMost(1.0).holds(1.0));
    assert!(Bound::AtLeast(0.8).holds(0.8));
    assert!(Bound::Within(12.0, 20.0).holds(20.0));
    assert!(!Bound::Within(12.0, 20.0).holds(f64::NAN));
    assert!(!Bound::Below(1.0).holds(f64::NAN));
}

proptest! {
    #[test]
    fn sample_times_end_exactly_at_t_final(t_final in 3.0f64..500.0) {
        let ts = sample_times(t_final);
        prop_assert_eq!(*ts.last().unwrap(), t_final);
        prop_assert!(ts[0] >= 1.0);
        prop_assert!(ts[0] * (1.0f64 / 12.0).exp() > 1.0 || ts.len() == 1);
        for w in ts.windows(2) {
            prop_assert!((w[1] / w[0] - (1.0f64 / 12.0).exp()).abs() < 1e-12);
        }
        let efold = ts.iter().filter(|&&t| t >= t_final * (-1.0f64).exp() * (1.0 - 1e-9)).count();
        prop_assert_eq!(efold, 13);
    }
}
