//! Length-4 bracelet systems and numerical checks of the bracelet lemmas, plus a
//! seeded sampling harness over pants parameters.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperbolic::METRIC_TOL;
use crate::maskit::{check, reduce, verify_minimality};
use crate::orbifold::{
    build_unwrapped, mirror, normalized_marking, Holonomy, PantsFoldParams, A_MAX, A_MIN,
};
use crate::tessellation::{crossing_number, ArcInstance, ArcLabel, Bounds, Side, Tiling};

/// Cone points of the canonical bracelet: `c_0..c_3` on it, `c_4`, `c_5` inside.
pub const CANONICAL_CONES: [usize; 6] = [1, 2, 4, 5, 3, 6];

/// A closed chain of four arcs through `c_0..c_3` with one cone point on each side.
#[derive(Clone, Debug)]
pub struct Bracelet4System {
    pub cones: [usize; 6],
    /// `sides[k]` joins `c_k` and `c_{k+1}`.
    pub sides: [ArcInstance; 4],
    /// `kappa[k][l - 4]` joins `c_k` and `c_l`.
    pub kappa: [[ArcInstance; 2]; 4],
    /// `lambda[k]` joins `c_4` and `c_5` crossing only `sides[k]`, once.
    pub lambda: [ArcInstance; 4],
}

/// The lengths of a bracelet system, which is all the checks look at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BraceletLengths {
    pub side: [f64; 4],
    pub kappa: [[f64; 2]; 4],
    pub lambda: [f64; 4],
}

impl BraceletLengths {
    /// `l(kappa_{k,l})` for `k` in `0..4` and `l` either `k +- 1 (mod 4)` or in `4..6`.
    pub fn kappa(&self, k: usize, l: usize) -> f64 {
        match l {
            4 | 5 => self.kappa[k][l - 4],
            _ if l == (k + 1) % 4 => self.side[k],
            _ if k == (l + 1) % 4 => self.side[l],
            _ => panic!("kappa_{{{k},{l}}} is not defined"),
        }
    }

    pub fn rotated(&self, r: usize) -> BraceletLengths {
        BraceletLengths {
            side: std::array::from_fn(|k| self.side[(k + r) % 4]),
            kappa: std::array::from_fn(|k| self.kappa[(k + r) % 4]),
            lambda: std::array::from_fn(|k| self.lambda[(k + r) % 4]),
        }
    }

    /// Reverses the bracelet direction, fixing `c_0`.
    pub fn reflected(&self) -> BraceletLengths {
        BraceletLengths {
            side: std::array::from_fn(|k| self.side[(3 - k) % 4]),
            kappa: std::array::from_fn(|k| self.kappa[(4 - k) % 4]),
            lambda: std::array::from_fn(|k| self.lambda[(3 - k) % 4]),
        }
    }

    pub fn swapped(&self) -> BraceletLengths {
        BraceletLengths {
            side: self.side,
            kappa: self.kappa.map(|[a, b]| [b, a]),
            lambda: self.lambda,
        }
    }

    /// All 16 labellings of the same bracelet.
    pub fn variants(&self) -> Vec<BraceletLengths> {
        let mut out = Vec::with_capacity(16);
        for base in [*self, self.swapped()] {
            for refl in [base, base.reflected()] {
                for r in 0..4 {
                    out.push(refl.rotated(r));
                }
            }
        }
        out
    }

    pub fn all_kappa(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        out[..4].copy_from_slice(&self.side);
        for k in 0..4 {
            out[4 + 2 * k] = self.kappa[k][0];
            out[5 + 2 * k] = self.kappa[k][1];
        }
        out
    }
}

impl Bracelet4System {
    pub fn lengths(&self) -> BraceletLengths {
        BraceletLengths {
            side: std::array::from_fn(|k| self.sides[k].length),
            kappa: std::array::from_fn(|k| [self.kappa[k][0].length, self.kappa[k][1].length]),
            lambda: std::array::from_fn(|k| self.lambda[k].length),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidBracelet(msg.into())
}

fn crossing_profile(a: &ArcInstance, sides: &[ArcInstance; 4]) -> Result<[usize; 4]> {
    let mut out = [0; 4];
    for (k, s) in sides.iter().enumerate() {
        out[k] = crossing_number(a, s)?;
    }
    Ok(out)
}

fn shortest_with_profile(
    arcs: &[ArcInstance],
    sides: &[ArcInstance; 4],
    want: [usize; 4],
) -> Option<ArcInstance> {
    arcs.iter()
        .filter(|a| a.verified && a.simple && !sides.iter().any(|s| s.label == a.label))
        .filter(|a| matches!(crossing_profile(a, sides), Ok(p) if p == want))
        .min_by(|x, y| {
            x.length
                .total_cmp(&y.length)
                .then_with(|| x.label.cmp(&y.label))
        })
        .cloned()
}

/// The canonical bracelet `gamma_1, beta_{2,4}, gamma_4, betabar_{1,5}` through
/// `omega_1, omega_2, omega_4, omega_5`, with `omega_3` and `omega_6` inside.
pub fn extract_bracelet4(h: &Holonomy, bounds: &Bounds) -> Result<Bracelet4System> {
    let tiling = Tiling::new(h)?;
    let c = CANONICAL_CONES;
    let side_labels = [
        ArcLabel::necklace(1),
        ArcLabel::new(2, 4, Side::H, vec![])?,
        ArcLabel::necklace(4),
        ArcLabel::new(1, 5, Side::HBar, vec![])?,
    ];
    let sides: [ArcInstance; 4] = side_labels
        .iter()
        .map(|l| tiling.develop_label(l))
        .collect::<Result<Vec<_>>>()?
        .try_into()
        .expect("four sides");
    for (k, s) in sides.iter().enumerate() {
        if !s.verified || !s.simple {
            return Err(invalid(format!(
                "side {} is not a simple geodesic arc",
                s.label
            )));
        }
        let want = [c[k], c[(k + 1) % 4]];
        let mut got = s.endpoints();
        got.sort_unstable();
        let mut want_sorted = want;
        want_sorted.sort_unstable();
        if got != want_sorted {
            return Err(invalid(format!("side {k} has endpoints {got:?}")));
        }
    }
    for k in 0..2 {
        if crossing_number(&sides[k], &sides[k + 2])? != 0 {
            return Err(invalid(format!("sides {k} and {} cross", k + 2)));
        }
    }

    let mut kappa_rows = Vec::with_capacity(4);
    for k in 0..4 {
        let mut row = Vec::with_capacity(2);
        for l in 4..6 {
            let arcs = tiling.enumerate_arcs(c[k], c[l], bounds)?;
            let arc = shortest_with_profile(&arcs, &sides, [0; 4]).ok_or_else(|| {
                invalid(format!("no arc from c_{k} to c_{l} avoiding the bracelet"))
            })?;
            row.push(arc);
        }
        kappa_rows.push(<[ArcInstance; 2]>::try_from(row).expect("two"));
    }
    let kappa: [[ArcInstance; 2]; 4] = kappa_rows.try_into().expect("four rows");

    let inner = tiling.enumerate_arcs(c[4], c[5], bounds)?;
    if shortest_with_profile(&inner, &sides, [0; 4]).is_some() {
        return Err(invalid("c_4 and c_5 lie in the same component"));
    }
    let mut lambda = Vec::with_capacity(4);
    for k in 0..4 {
        let mut want = [0; 4];
        want[k] = 1;
        lambda.push(
            shortest_with_profile(&inner, &sides, want)
                .ok_or_else(|| invalid(format!("no arc c_4 to c_5 crossing only side {k}")))?,
        );
    }
    Ok(Bracelet4System {
        cones: c,
        sides,
        kappa,
        lambda: lambda.try_into().expect("four"),
    })
}

/// The bracelet systems of the six relabelings: necklace rotations by 0, 1, 2 of the
/// marking and of its mirror.
pub fn bracelet_family(h: &Holonomy, bounds: &Bounds) -> Result<Vec<Bracelet4System>> {
    let m = mirror(h);
    let mut out = Vec::with_capacity(6);
    for base in [h, &m] {
        for r in 0..3 {
            let relabeled = normalized_marking(&base.rotated(r))?;
            out.push(extract_bracelet4(&relabeled, bounds)?);
        }
    }
    Ok(out)
}

/// Margins `l(lambda_0) + l(lambda_3) - 2 l(kappa_{0,4})` and
/// `l(lambda_0) + l(lambda_2) - 2 l(kappa_{3,0})`; both must be positive.
pub fn check_cp2(b: &BraceletLengths) -> (f64, f64) {
    (
        b.lambda[0] + b.lambda[3] - 2.0 * b.kappa(0, 4),
        b.lambda[0] + b.lambda[2] - 2.0 * b.kappa(3, 0),
    )
}

pub fn cp2_ok(margins: (f64, f64)) -> bool {
    margins.0 > METRIC_TOL && margins.1 > METRIC_TOL
}

/// `true` unless the three inequalities of the triangle theorem hold strictly.
pub fn check_tri(b: &BraceletLengths) -> bool {
    let strict = |x: f64, y: f64| x < y - METRIC_TOL;
    !(strict(b.kappa(3, 4), b.kappa(0, 4))
        && strict(b.kappa(3, 5), b.kappa(0, 5))
        && strict(b.lambda[0], b.lambda[2]))
}

/// Outcome of a conditional check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    NotApplicable,
    Pass,
    Fail,
}

impl CheckOutcome {
    pub fn ok(self) -> bool {
        self != CheckOutcome::Fail
    }

    fn from_bool(ok: bool) -> CheckOutcome {
        if ok {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        }
    }
}

fn le(x: f64, y: f64) -> bool {
    x <= y + METRIC_TOL
}

pub fn check_obvious(b: &BraceletLengths) -> CheckOutcome {
    let applies = le(b.kappa(3, 4), b.kappa(0, 4))
        && le(b.kappa(3, 5), b.kappa(0, 5))
        && le(b.kappa(1, 4), b.kappa(2, 4));
    if !applies {
        return CheckOutcome::NotApplicable;
    }
    CheckOutcome::from_bool(b.kappa(1, 5) >= b.kappa(2, 5) - METRIC_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngleOutcome {
    pub corollary: CheckOutcome,
    pub rigidity: CheckOutcome,
}

impl AngleOutcome {
    pub fn ok(&self) -> bool {
        self.corollary.ok() && self.rigidity.ok()
    }
}

pub fn check_angle(b: &BraceletLengths) -> AngleOutcome {
    let k = |i, j| b.kappa(i, j);
    let applies = (4..6).all(|l| {
        le(k(2, 3), k(2, l))
            && le(k(1, 2), k(0, l))
            && le(k(1, 2), k(1, l))
            && le(k(0, 1), k(0, l))
            && le(k(0, 1), k(3, l))
    });
    if !applies {
        return AngleOutcome {
            corollary: CheckOutcome::NotApplicable,
            rigidity: CheckOutcome::NotApplicable,
        };
    }
    let corollary = CheckOutcome::from_bool(k(3, 0) >= k(1, 2) - METRIC_TOL);
    let rigidity = if k(3, 0) <= k(1, 2) + 1e-6 {
        let all = b.all_kappa();
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        CheckOutcome::from_bool(hi - lo <= 1e-5)
    } else {
        CheckOutcome::NotApplicable
    };
    AngleOutcome {
        corollary,
        rigidity,
    }
}

/// Aggregate of all bracelet checks over every labelling of a family of systems.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaResult {
    pub cp2: (f64, f64),
    pub tri_ok: bool,
    pub obvious_ok: bool,
    pub angle_ok: bool,
    pub obvious_applied: usize,
    pub angle_applied: usize,
}

impl LemmaResult {
    pub fn ok(&self) -> bool {
        cp2_ok(self.cp2) && self.tri_ok && self.obvious_ok && self.angle_ok
    }
}

pub fn check_lemmas(systems: &[BraceletLengths]) -> LemmaResult {
    let mut out = LemmaResult {
        cp2: (f64::INFINITY, f64::INFINITY),
        tri_ok: true,
        obvious_ok: true,
        angle_ok: true,
        obvious_applied: 0,
        angle_applied: 0,
    };
    for v in systems.iter().flat_map(|s| s.variants()) {
        let (i, ii) = check_cp2(&v);
        out.cp2 = (out.cp2.0.min(i), out.cp2.1.min(ii));
        out.tri_ok &= check_tri(&v);
        let ob = check_obvious(&v);
        out.obvious_ok &= ob.ok();
        out.obvious_applied += usize::from(ob != CheckOutcome::NotApplicable);
        let an = check_angle(&v);
        out.angle_ok &= an.ok();
        out.angle_applied += usize::from(an.corollary != CheckOutcome::NotApplicable);
    }
    out
}

/// Where sample parameters are drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleRegion {
    /// `a_i` uniform in the range, `t_i` uniform in `[0, 2 a_i)`.
    Uniform { a_range: (f64, f64) },
    /// Every coordinate uniform within `radius` of the centre.
    Around {
        center: PantsFoldParams,
        radius: f64,
    },
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    pub region: SampleRegion,
    pub bounds: Bounds,
    pub max_iter: usize,
    /// Run the bracelet lemma checks in addition to the domain pipeline.
    pub lemmas: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            count: 500,
            seed: 0,
            region: SampleRegion::Uniform {
                a_range: (A_MIN, A_MAX),
            },
            bounds: Bounds::default(),
            max_iter: 30,
            lemmas: true,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParams("sample count must be positive".into()));
        }
        let (lo, hi) = match self.region {
            SampleRegion::Uniform { a_range } => a_range,
            SampleRegion::Around { center, radius } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "radius {radius} is not positive"
                    )));
                }
                center.validate()?;
                let lo = center.a.iter().copied().fold(f64::INFINITY, f64::min) - radius;
                let hi = center.a.iter().copied().fold(f64::NEG_INFINITY, f64::max) + radius;
                (lo, hi)
            }
        };
        if !(A_MIN <= lo && lo < hi && hi <= A_MAX) {
            return Err(Error::InvalidParams(format!(
                "length range [{lo}, {hi}] outside [{A_MIN}, {A_MAX}]"
            )));
        }
        Ok(())
    }
}

/// Parameters of sample `index`, from its own random stream.
pub fn sample_params(seed: u64, index: u64, region: &SampleRegion) -> PantsFoldParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    match *region {
        SampleRegion::Uniform { a_range } => {
            let a: [f64; 3] = std::array::from_fn(|_| rng.gen_range(a_range.0..a_range.1));
            let t: [f64; 3] = std::array::from_fn(|i| rng.gen_range(0.0..2.0 * a[i]));
            PantsFoldParams { a, t }
        }
        SampleRegion::Around { center, radius } => {
            let mut jitter = |x: f64| x + rng.gen_range(-radius..radius);
            PantsFoldParams {
                a: center.a.map(&mut jitter),
                t: center.t.map(&mut jitter),
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum SampleStatus {
    Done {
        in_domain: bool,
        reduced: bool,
        worst_min_margin: f64,
        lemmas: Option<LemmaResult>,
    },
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct SampleRow {
    pub index: u64,
    pub params: PantsFoldParams,
    pub status: SampleStatus,
}

impl SampleRow {
    /// A violation of minimality inside the domain or of any bracelet check.
    pub fn violation(&self) -> bool {
        match &self.status {
            SampleStatus::Done {
                in_domain,
                worst_min_margin,
                lemmas,
                ..
            } => (*in_domain && *worst_min_margin < -METRIC_TOL) || lemmas.is_some_and(|l| !l.ok()),
            SampleStatus::Skipped(_) => false,
        }
    }
}

fn run_one(cfg: &SampleConfig, index: u64) -> SampleRow {
    let params = sample_params(cfg.seed, index, &cfg.region);
    let status = match sample_pipeline(cfg, &params) {
        Ok(s) => s,
        Err(e) => SampleStatus::Skipped(e.to_string()),
    };
    SampleRow {
        index,
        params,
        status,
    }
}

fn sample_pipeline(cfg: &SampleConfig, params: &PantsFoldParams) -> Result<SampleStatus> {
    let h = build_unwrapped(params)?;
    let (h, reduced) = match reduce(&h, &cfg.bounds, cfg.max_iter) {
        Ok(r) => (r, true),
        Err(Error::ReductionFailure { best, .. }) => (*best, false),
        Err(e) => return Err(e),
    };
    let in_domain = check(&h)?.in_domain;
    let worst_min_margin = verify_minimality(&h, &cfg.bounds)?.worst_margin();
    let lemmas = if cfg.lemmas {
        let systems: Vec<BraceletLengths> = bracelet_family(&h, &cfg.bounds)?
            .iter()
            .map(Bracelet4System::lengths)
            .collect();
        Some(check_lemmas(&systems))
    } else {
        None
    };
    Ok(SampleStatus::Done {
        in_domain,
        reduced,
        worst_min_margin,
        lemmas,
    })
}

#[derive(Clone, Debug)]
pub struct SampleSummary {
    pub rows: Vec<SampleRow>,
}

impl SampleSummary {
    pub fn skipped(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, SampleStatus::Skipped(_)))
            .count()
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violation()).count()
    }

    pub fn in_domain(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| {
                matches!(
                    r.status,
                    SampleStatus::Done {
                        in_domain: true,
                        ..
                    }
                )
            })
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "seed_index,a1,a3,a5,t1,t3,t5,in_domain,worst_min_margin,cp2_i,cp2_ii,tri_ok,obvious_ok,angle_ok\n",
        );
        let f = |x: f64| format!("{x:.16e}");
        for r in &self.rows {
            let p = &r.params;
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},",
                r.index,
                f(p.a[0]),
                f(p.a[1]),
                f(p.a[2]),
                f(p.t[0]),
                f(p.t[1]),
                f(p.t[2])
            );
            match &r.status {
                SampleStatus::Skipped(_) => out.push_str("skipped,,,,,,\n"),
                SampleStatus::Done {
                    in_domain,
                    worst_min_margin,
                    lemmas,
                    ..
                } => {
                    let _ = write!(out, "{},{}", in_domain, f(*worst_min_margin));
                    match lemmas {
                        Some(l) => {
                            let _ = writeln!(
                                out,
                                ",{},{},{},{},{}",
                                f(l.cp2.0),
                                f(l.cp2.1),
                                l.tri_ok,
                                l.obvious_ok,
                                l.angle_ok
                            );
                        }
                        None => out.push_str(",,,,,\n"),
                    }
                }
            }
        }
        out
    }
}

/// Runs the sampling pipeline in parallel; rows come back in index order.
pub fn run_samples(cfg: &SampleConfig) -> Result<SampleSummary> {
    cfg.validate()?;
    let rows = (0..cfg.count as u64)
        .into_par_iter()
        .map(|i| run_one(cfg, i))
        .collect();
    Ok(SampleSummary { rows })
}
