use dunklkit::area::ConeSpec;
use dunklkit::boundary::{fatou_table, green_residual, max_principle_check, nt_limit_probe, FatouOptions, NtOptions};
use dunklkit::datum::Indicator;
use dunklkit::field::{HarmonicField, PolyField};
use dunklkit::poisson::PoissonField;
use dunklkit::poly::{rat, Poly};
use dunklkit::Error;
use proptest::prelude::*;
use std::sync::Arc;

fn poly_strategy(nx: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=3u32, nx + 1), -5i64..=5, 1i64..=3), 1..=4).prop_map(
        move |terms| {
            let mut p = Poly::zero(nx, true);
            for (e, n, d) in terms {
                p.add_term(e, rat(n, d));
            }
            p
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn green_formulas_hold_for_random_pairs_in_one_dimension(
        u in poly_strategy(1),
        v in poly_strategy(1),
        l in 0i64..=6,
        r in 0.3..2.0f64,
        y0 in 0.05..0.5f64,
        dy in 0.2..1.5f64,
    ) {
        let rep = green_residual(&[rat(l, 4)], &u, &v, r, y0, y0 + dy).unwrap();
        prop_assert!(rep.residual() < 1e-9, "{:?}", rep);
    }

    #[test]
    fn green_formulas_hold_for_random_pairs_in_two_dimensions(
        u in poly_strategy(2),
        v in poly_strategy(2),
        l in prop::collection::vec(0i64..=4, 2),
        r in 0.3..1.5f64,
    ) {
        let rep = green_residual(&[rat(l[0], 2), rat(l[1], 3)], &u, &v, r, 0.1, 0.8).unwrap();
        prop_assert!(rep.residual() < 1e-9, "{:?}", rep);
    }
}

#[test]
fn maximum_principle_for_harmonic_fields() {
    let half = vec![rat(1, 2)];
    let fields: Vec<Box<dyn HarmonicField>> = vec![
        Box::new(PolyField::parse("x", half.clone()).unwrap()),
        Box::new(PolyField::parse("x^2 - 2*y^2", half.clone()).unwrap()),
        Box::new(PoissonField::auto(&[0.5], Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] })).unwrap()),
    ];
    for u in &fields {
        let r = max_principle_check(u.as_ref(), 1.5, 0.2, 1.5, 24).unwrap();
        assert!(r.holds && r.interior_max <= r.boundary_max * (1.0 + 1e-12), "{}: {r:?}", u.label());
    }
    assert!(matches!(max_principle_check(fields[0].as_ref(), 1.0, 0.5, 0.2, 8), Err(Error::Domain(_))));
}

#[test]
fn nontangential_limit_of_a_polynomial_is_its_boundary_value() {
    // x² - (1 + 2λ) y² is κ-harmonic for every λ.
    for (l, text) in [(rat(1, 2), "x^2 - 2*y^2"), (rat(3, 2), "x^2 - 4*y^2")] {
        let u = PolyField::parse(text, vec![l]).unwrap();
        let opts = NtOptions { levels: 20, ..NtOptions::default() };
        for x in [-0.8, 0.0, 0.35, 1.2] {
            let rep = nt_limit_probe(&u, &ConeSpec::new(vec![x], 1.0, 1.0).unwrap(), &opts, 11).unwrap();
            assert!(rep.bounded && rep.limit_exists, "{rep:?}");
            assert!((rep.limit_value.unwrap() - x * x).abs() < 1e-6, "x = {x}: {:?}", rep.limit_value);
        }
    }
}

#[test]
fn nontangential_limit_of_indicator_away_from_jumps() {
    let u = PoissonField::auto(&[0.5], Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] })).unwrap();
    for (x, want) in [(0.3, 1.0), (1.6, 0.0)] {
        let rep = nt_limit_probe(&u, &ConeSpec::new(vec![x], 0.5, 0.5).unwrap(), &NtOptions::default(), 3).unwrap();
        assert!(rep.limit_exists, "{rep:?}");
        assert!((rep.limit_value.unwrap() - want).abs() < 1e-3, "x = {x}");
    }
}

#[test]
fn fatou_grid_validation() {
    let u = PolyField::parse("x*y", vec![rat(1, 2)]).unwrap();
    let opts = FatouOptions::default();
    assert_eq!(fatou_table(&u, &[], 1.0, 1.0, &opts).unwrap_err(), Error::Validation("empty grid".into()));
    assert!(matches!(fatou_table(&u, &[vec![0.5]], 1.0, 1.0, &opts), Err(Error::Validation(_))));
    assert!(matches!(fatou_table(&u, &[vec![0.5, 0.5]], 1.0, 1.0, &opts), Err(Error::Dimension { .. })));
    let t = fatou_table(&u, &[vec![-0.5], vec![0.0], vec![0.5]], 1.0, 1.0, &opts).unwrap();
    assert_eq!(t.rows.len(), 3);
    assert_eq!(t.summary.disagreements, 0);
}
