use std::f64::consts::TAU;

use maskit_core::hyperbolic::{distance, segments_cross, translation_length, Segment};
use maskit_core::orbifold::{build_unwrapped, normalized_marking, params_of};
use maskit_core::tessellation::Tile;
use maskit_core::verify::extract_bracelet4;
use maskit_core::{
    build, check, mirror, reduce, ArcLabel, Bounds, Holonomy, Isometry, PantsFoldParams, Point,
    Side, Tiling,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = PantsFoldParams> {
    [0.3f64..2.5, 0.3f64..2.5, 0.3f64..2.5]
        .prop_flat_map(|a| {
            let t = [0.0..2.0 * a[0], 0.0..2.0 * a[1], 0.0..2.0 * a[2]];
            (Just(a), t)
        })
        .prop_map(|(a, t)| PantsFoldParams { a, t })
}

/// In-domain markings. Length comparisons at 1e-9 are made on these: arcs of scrambled
/// markings develop through tiles so far out that double precision runs out.
fn marking() -> impl Strategy<Value = Holonomy> {
    params().prop_filter_map("reduction failed", |p| {
        reduce(&build_unwrapped(&p).ok()?, &Bounds::default(), 20).ok()
    })
}

fn point() -> impl Strategy<Value = Point> {
    (0.0f64..3.0, 0.0..TAU).prop_map(|(r, th)| Point::polar(r, th))
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (0.0..TAU, 0.0f64..2.0, 0.0..TAU).prop_map(|(a, d, b)| {
        Isometry::rotation(a)
            .compose(&Isometry::translation(d))
            .compose(&Isometry::rotation(b))
    })
}

fn table(h: &Holonomy) -> Vec<f64> {
    check(h)
        .unwrap()
        .entries
        .iter()
        .map(|e| e.rhs_len)
        .collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }
}

fn tiles(h: &Holonomy, depth: usize) -> (Tiling, Vec<Tile>) {
    let tiling = Tiling::new(h).unwrap();
    let tiles = tiling.tiles_within(depth).unwrap();
    (tiling, tiles)
}

fn cross3(p: &Point, q: &Point) -> [f64; 3] {
    [
        p.x1 * q.x2 - p.x2 * q.x1,
        p.x2 * q.x0 - p.x0 * q.x2,
        p.x0 * q.x1 - p.x1 * q.x0,
    ]
}

fn side(n: [f64; 3], x: &Point) -> f64 {
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    (n[0] * x.x0 + n[1] * x.x1 + n[2] * x.x2) / (len * x.x0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_isometry_invariant(p in point(), q in point(), g in isometry()) {
        let d = distance(&p, &q).unwrap();
        let e = distance(&g.apply(&p), &g.apply(&q)).unwrap();
        prop_assert!((d - e).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn crossing_matches_plane_sides(a in point(), b in point(), c in point(), d in point()) {
        let na = cross3(&a, &b);
        let nb = cross3(&c, &d);
        let (s1, s2, s3, s4) = (side(na, &c), side(na, &d), side(nb, &a), side(nb, &b));
        prop_assume!([s1, s2, s3, s4].iter().all(|s| s.abs() > 1e-6));
        let expected = s1 * s2 < 0.0 && s3 * s4 < 0.0;
        let got = segments_cross(&Segment::new(a, b), &Segment::new(c, d)).unwrap();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn translation_length_of_half_turn_pairs(p in point(), q in point()) {
        use maskit_core::hyperbolic::half_turn;
        let d = distance(&p, &q).unwrap();
        prop_assume!(d > 1e-3);
        let g = half_turn(&p).compose(&half_turn(&q));
        prop_assert!((translation_length(&g).unwrap() - 2.0 * d).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn table_is_conjugation_invariant(h in marking(), g in isometry()) {
        assert_close(&table(&h), &table(&h.conjugated(&g)), 1e-9);
    }

    #[test]
    fn twist_periodicity(h in marking(), i in 0usize..3, k in -2i32..3) {
        let p = params_of(&h).unwrap().wrapped();
        let mut q = p;
        q.t[i] += 2.0 * k as f64 * p.a[i];
        assert_close(&table(&build(&p).unwrap()), &table(&build(&q).unwrap()), 1e-9);
    }

    #[test]
    fn params_round_trip(p in params(), g in isometry()) {
        let h = build_unwrapped(&p).unwrap();
        for q in [params_of(&h).unwrap(), params_of(&h.conjugated(&g)).unwrap()] {
            for k in 0..3 {
                prop_assert!((p.a[k] - q.a[k]).abs() < 1e-8);
                prop_assert!((p.t[k] - q.t[k]).abs() < 1e-8);
            }
        }
        normalized_marking(&h.conjugated(&g)).unwrap();
    }

    #[test]
    fn normalized_marking_keeps_lengths(h in marking(), g in isometry()) {
        let n = normalized_marking(&h.conjugated(&g)).unwrap();
        assert_close(&table(&h), &table(&n), 1e-9);
    }

    #[test]
    fn mirror_duality(h in marking()) {
        let m = mirror(&h);
        let (th, tm) = (Tiling::new(&h).unwrap(), Tiling::new(&m).unwrap());
        for e in check(&h).unwrap().entries {
            let dual = tm.develop_label(&e.inequality.rhs.mirrored()).unwrap();
            prop_assert!((dual.length - e.rhs_len).abs() < 1e-9, "{}", e.inequality.rhs);
        }
        let back = mirror(&m);
        for i in 1..=6 {
            prop_assert!((back.necklace_length(i) - h.necklace_length(i)).abs() < 1e-9);
        }
        let beta = th.develop_label(&"beta14".parse().unwrap()).unwrap();
        let betabar = tm.develop_label(&"betabar14".parse().unwrap()).unwrap();
        prop_assert!((beta.length - betabar.length).abs() < 1e-9);
    }

    #[test]
    fn parity_and_vertex_angles(h in marking()) {
        let (tiling, tiles) = tiles(&h, 1);
        for t in &tiles {
            for s in 1..=6 {
                let n = tiling.adjacent(t, s).unwrap();
                prop_assert_ne!(n.parity, t.parity);
                prop_assert!(tiling.adjacent(&n, s).unwrap().same_as(t));
                let sum = tiling.vertex_angle_sum(t, s).unwrap();
                prop_assert!((sum - TAU).abs() < 1e-8, "angle sum {sum}");
                let fan = tiling.fan(t, s).unwrap();
                for w in fan.windows(2) {
                    prop_assert_ne!(w[0].parity, w[1].parity);
                }
            }
        }
    }

    #[test]
    fn arc_length_matches_trace(h in marking()) {
        let tiling = Tiling::new(&h).unwrap();
        for arc in tiling.enumerate_all(&Bounds::new(8, 2)).unwrap() {
            let [j, k] = arc.endpoints();
            let far = arc.endpoint_word.apply(h.lift(k));
            prop_assert!(distance(&far, &arc.endpoint_lift).unwrap() < 1e-8);
            let g = h.rotation(j).compose(&arc.endpoint_word.compose(h.rotation(k)).compose(&arc.endpoint_word.inverse()));
            // rounding grows with the square of the size of the far endpoint and its word
            let word: f64 = arc.endpoint_word.matrix().iter().flatten().map(|x| x * x).sum();
            let tol = 1e-9 + 1e-12 * arc.endpoint_lift.x0.max(word).powi(2);
            let from_trace = translation_length(&g).unwrap() / 2.0;
            prop_assert!((from_trace - arc.length).abs() < tol, "{}", arc.label);
            let pieces: f64 = arc.pieces.iter().map(|pc| distance(&pc.from, &pc.to).unwrap()).sum();
            if !arc.pieces.is_empty() {
                prop_assert!((pieces - arc.length).abs() < tol, "{}", arc.label);
            }
        }
    }
}

/// Crossing sequence of the chord from `w_j` to `end`, found by testing every side of
/// every nearby tile in Klein coordinates.
fn brute_force_crossings(h: &Holonomy, tiles: &[Tile], j: usize, end: &Point) -> Vec<u8> {
    let a = h.lift(j).klein();
    let b = end.klein();
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let mut hits: Vec<(f64, u8)> = Vec::new();
    for t in tiles {
        for s in 1..=6usize {
            let c = t.vertex(s).klein();
            let d = t.vertex(s % 6 + 1).klein();
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 && [o1, o2, o3, o4].iter().all(|o| o.abs() > 1e-9) {
                let u = o3 / (o3 - o4);
                if !hits.iter().any(|(v, _)| (u - v).abs() < 1e-9) {
                    hits.push((u, s as u8));
                }
            }
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    hits.into_iter().map(|(_, s)| s).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn crossings_match_brute_force(h in marking()) {
        let (tiling, tiles) = tiles(&h, 3);
        let mut checked = 0;
        for arc in tiling.enumerate_all(&Bounds::new(8, 2)).unwrap() {
            // Klein coordinates cannot resolve points this close to the boundary
            if arc.endpoint_lift.x0 > 1e3 {
                continue;
            }
            checked += 1;
            let [j, _] = arc.endpoints();
            let seq = brute_force_crossings(&h, &tiles, j, &arc.endpoint_lift);
            prop_assert_eq!(&seq[..], arc.label.crossings(), "{}", arc.label);
        }
        prop_assert!(checked > 20);
    }

    #[test]
    fn bracelet_lengths_are_conjugation_invariant(h in marking(), g in isometry()) {
        let b = Bounds::default();
        let (Ok(x), Ok(y)) = (extract_bracelet4(&h, &b), extract_bracelet4(&h.conjugated(&g), &b)) else {
            return Ok(());
        };
        let (x, y) = (x.lengths(), y.lengths());
        assert_close(&x.side, &y.side, 1e-9);
        assert_close(&x.lambda, &y.lambda, 1e-9);
        assert_close(&x.all_kappa(), &y.all_kappa(), 1e-9);
    }
}

#[test]
fn necklace_labels_parse() {
    for i in 1..=6 {
        let l: ArcLabel = format!("gamma{i}").parse().unwrap();
        assert_eq!(l.necklace_index(), Some(i));
        assert_eq!(l.side(), Side::H);
    }
}
