mod common;

use std::f64::consts::FRAC_PI_4;

use common::*;
use maskit_core::orbifold::{exceptional_residuals, oct_edge};
use maskit_core::{check, exceptional, oct, verify_minimality, ArcLabel, Bounds, Tiling};

#[test]
fn octahedral_edge_constant() {
    let edge = equilateral_edge(FRAC_PI_4);
    assert!((oct_edge() - edge).abs() < 1e-12);
    assert!((edge - 1.528570919).abs() < 1e-9);

    let (_, h) = oct().unwrap();
    for i in 1..=6 {
        assert!((h.necklace_length(i) - edge).abs() < 1e-9, "gamma{i}");
    }
    let tiling = Tiling::new(&h).unwrap();
    for name in OCT_EDGES {
        let label: ArcLabel = name.parse().unwrap();
        let arc = tiling.develop_label(&label).unwrap();
        assert!((arc.length - edge).abs() < 1e-9, "{name}");
    }
}

#[test]
fn oct_tight_set() {
    let (_, h) = oct().unwrap();
    let r = check(&h).unwrap();
    assert!(r.in_domain);
    assert_eq!(tight_set(&r), fixture_set(OCT_TIGHT));
}

#[test]
fn exceptional_tight_set() {
    let (p, h) = exceptional().unwrap();
    let r = check(&h).unwrap();
    assert!(r.in_domain);
    assert_eq!(tight_set(&r), fixture_set(E_TIGHT));
    let worst = exceptional_residuals(&h)
        .unwrap()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(worst < 1e-8, "residual {worst}");
    assert!((p.a[0] - p.a[2]).abs() < 1e-9);
}

#[test]
fn certificates_are_minimal() {
    let (_, h) = oct().unwrap();
    let m = verify_minimality(&h, &Bounds::default()).unwrap();
    assert!(m.verified);
    assert!(m.worst_margin() > -1e-9);

    let (_, h) = exceptional().unwrap();
    let m = verify_minimality(&h, &Bounds::default()).unwrap();
    assert!(m.verified);
    let last = m.stages.last().unwrap();
    assert_eq!(last.m, 4);
    assert_eq!(last.witness.as_ref().unwrap().to_string(), "beta46");
    assert!(last.worst_margin.abs() < 1e-9);
}
