//! Shared fixtures: tight inequalities of the two certificate orbifolds.

#![allow(dead_code)]

use std::collections::BTreeSet;

use maskit_core::MaskitReport;

/// `(lhs necklace index, rhs label)` of every tight inequality on the octahedral orbifold.
pub const OCT_TIGHT: &[(usize, &str)] = &[
    (1, "gamma2"),
    (1, "gamma3"),
    (1, "gamma4"),
    (1, "gamma5"),
    (2, "betabar13"),
    (2, "betabar15"),
    (2, "gamma6"),
    (2, "beta24"),
    (2, "beta26"),
    (3, "betabar35"),
    (4, "beta46"),
];

/// Same for the exceptional orbifold.
pub const E_TIGHT: &[(usize, &str)] = &[
    (1, "gamma5"),
    (2, "betabar13"),
    (2, "beta14"),
    (2, "beta24"),
    (3, "betabar35"),
    (3, "betabar36"),
    (3, "betabar34^6"),
    (4, "beta46"),
];

/// The non-necklace edges of the octahedron.
pub const OCT_EDGES: &[&str] = &[
    "betabar13",
    "betabar15",
    "beta24",
    "beta26",
    "betabar35",
    "beta46",
];

pub fn tight_set(r: &MaskitReport) -> BTreeSet<(usize, String)> {
    r.tight()
        .iter()
        .map(|e| (e.inequality.lhs, e.inequality.rhs.to_string()))
        .collect()
}

pub fn fixture_set(f: &[(usize, &str)]) -> BTreeSet<(usize, String)> {
    f.iter().map(|(i, s)| (*i, s.to_string())).collect()
}

/// Edge length of a regular hyperbolic triangle with all angles `alpha`, from the
/// angle form of the law of cosines.
pub fn equilateral_edge(alpha: f64) -> f64 {
    let c = (alpha.cos() + alpha.cos() * alpha.cos()) / (alpha.sin() * alpha.sin());
    c.acosh()
}
