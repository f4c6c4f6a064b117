use maskit_core::maskit::chain_signature;
use maskit_core::orbifold::build_unwrapped;
use maskit_core::verify::{sample_params, SampleConfig};
use maskit_core::{check, oct, reduce, Bounds};

fn compared(h: &maskit_core::Holonomy) -> Vec<f64> {
    check(h)
        .unwrap()
        .entries
        .iter()
        .flat_map(|e| [e.lhs_len, e.rhs_len])
        .collect()
}

#[test]
fn scrambled_markings_reduce_into_the_domain() {
    let region = SampleConfig::default().region;
    let bounds = Bounds::default();
    for i in 0..8 {
        let p = sample_params(21, i, &region);
        let raw = build_unwrapped(&p).unwrap();
        let h = reduce(&raw, &bounds, 20).unwrap();
        assert!(check(&h).unwrap().in_domain, "sample {i}");
        let again = reduce(&h, &bounds, 20).unwrap();
        for (x, y) in compared(&h).iter().zip(compared(&again)) {
            assert!((x - y).abs() <= 1e-9);
        }
        // the first chain arc never gets longer
        assert!(chain_signature(&h)[0] <= chain_signature(&raw)[0] + 1e-9);
    }
}

#[test]
fn in_domain_marking_is_left_alone() {
    let (_, h) = oct().unwrap();
    let r = reduce(&h, &Bounds::default(), 0).unwrap();
    assert_eq!(compared(&h), compared(&r));
}
