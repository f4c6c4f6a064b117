//! Marked orbifolds: six half-turns with their cone-point lifts.
//!
//! A marking is built from pants-and-fold parameters: the right-angled hexagon with
//! alternate sides `a1, a3, a5` is doubled into a pair of pants whose boundary
//! holonomies `X1, X3, X5` translate by `2 a_i`. Each boundary axis carries two cone
//! points at distance `a_i`, placed by the fold offset `t_i` measured from the midpoint
//! of the hexagon side on that axis, and `X_i` factors as the product of the two
//! half-turns.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::hyperbolic::{
    axis_point, distance, half_turn, half_turn_center, midpoint, orient, segments_cross, Isometry,
    Point, Segment, METRIC_TOL,
};

/// Smallest admissible value of `a_i`.
pub const A_MIN: f64 = 0.3;
/// Largest admissible value of `a_i`.
pub const A_MAX: f64 = 2.5;

/// Pants-and-fold coordinates: `a = (a1, a3, a5)`, `t = (t1, t3, t5)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PantsFoldParams {
    pub a: [f64; 3],
    pub t: [f64; 3],
}

impl PantsFoldParams {
    pub fn new(a: [f64; 3], t: [f64; 3]) -> Result<PantsFoldParams> {
        let p = PantsFoldParams { a, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &a) in self.a.iter().enumerate() {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "a{} = {a} is not positive",
                    2 * i + 1
                )));
            }
            if !(A_MIN..=A_MAX).contains(&a) {
                return Err(Error::InvalidParams(format!(
                    "a{} = {a} outside [{A_MIN}, {A_MAX}]",
                    2 * i + 1
                )));
            }
        }
        if let Some(t) = self.t.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidParams(format!("twist {t} is not finite")));
        }
        Ok(())
    }

    /// Twists reduced into the window `[-3a/2, a/2)`, one period wide.
    pub fn wrapped(&self) -> PantsFoldParams {
        let t = std::array::from_fn(|i| {
            let (a, t) = (self.a[i], self.t[i]);
            t - 2.0 * a * ((t + 1.5 * a) / (2.0 * a)).floor()
        });
        PantsFoldParams { a: self.a, t }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Six half-turns `R_1..R_6` with fixed points `w_1..w_6` and `R_1...R_6 = +-I`.
///
/// The lifts are the vertices, in anticlockwise order, of the convex hexagon covering
/// the region `H` bounded by the necklace.
#[derive(Clone, Debug)]
pub struct Holonomy {
    rotations: [Isometry; 6],
    lifts: [Point; 6],
    orientation: Orientation,
}

impl Holonomy {
    /// Validates the invariants. A clockwise vertex cycle is re-based onto the
    /// neighbouring hexagon, which is anticlockwise for the same cone-point labels.
    pub fn from_parts(rotations: [Isometry; 6], lifts: [Point; 6]) -> Result<Holonomy> {
        let h = Holonomy {
            rotations: rotations.map(|r| r.normalized()),
            lifts,
            orientation: Orientation::Positive,
        };
        h.check_group()?;
        match h.hexagon_orientation(&h.lifts)? {
            Orientation::Positive => {}
            Orientation::Negative => {
                let based = h.rebased();
                based.check_group()?;
                if based.hexagon_orientation(&based.lifts)? != Orientation::Positive {
                    return Err(Error::InvalidNecklace(
                        "neither hexagon is anticlockwise".into(),
                    ));
                }
                return based.with_hbar_check();
            }
        }
        h.with_hbar_check()
    }

    /// Marking given by six half-turns only; lifts are their fixed points.
    pub fn from_rotations(rotations: [Isometry; 6]) -> Result<Holonomy> {
        let mut lifts = [Point::ORIGIN; 6];
        for (i, r) in rotations.iter().enumerate() {
            lifts[i] = half_turn_center(&r.normalized())?;
        }
        Holonomy::from_parts(rotations, lifts)
    }

    fn with_hbar_check(self) -> Result<Holonomy> {
        let hbar = self.hbar_lifts();
        if self.hexagon_orientation(&hbar)? != Orientation::Negative {
            return Err(Error::InvalidNecklace(
                "the hexagon across the sixth side is not embedded".into(),
            ));
        }
        Ok(self)
    }

    fn rebased(&self) -> Holonomy {
        let mut prefix = Isometry::IDENTITY;
        let mut rotations = self.rotations;
        let mut lifts = self.lifts;
        for k in 0..6 {
            lifts[k] = prefix.apply(&self.lifts[k]);
            rotations[k] = self.rotations[k].conjugate_by(&prefix);
            prefix = prefix.compose(&self.rotations[k]);
        }
        Holonomy {
            rotations,
            lifts,
            orientation: Orientation::Positive,
        }
    }

    fn check_group(&self) -> Result<()> {
        let scale = self
            .rotations
            .iter()
            .flat_map(|r| r.matrix().into_iter().flatten())
            .fold(1.0f64, |m, x| m.max(x.abs()));
        for (i, (r, w)) in self.rotations.iter().zip(&self.lifts).enumerate() {
            if r.trace().abs() > METRIC_TOL * scale {
                return Err(Error::InvalidNecklace(format!(
                    "R{} has trace {}, not a half-turn",
                    i + 1,
                    r.trace()
                )));
            }
            let moved = distance(&r.apply(w), w)?;
            if moved > METRIC_TOL * w.x0 * w.x0 {
                return Err(Error::InvalidNecklace(format!(
                    "R{} moves its lift by {moved}",
                    i + 1
                )));
            }
        }
        let product = Isometry::product(&self.rotations);
        if !product.is_identity(METRIC_TOL * scale * scale) {
            return Err(Error::InvalidNecklace(format!(
                "R1...R6 = {:?} is not +-I",
                product.matrix()
            )));
        }
        Ok(())
    }

    /// Orientation of a convex vertex cycle; errors if the cycle is not convex or
    /// its sides cross.
    fn hexagon_orientation(&self, vertices: &[Point; 6]) -> Result<Orientation> {
        let frame = Isometry::to_origin(&centroid(vertices));
        let pts = vertices.map(|p| frame.apply(&p));
        let k = pts.map(|p| p.klein());
        let turns: Vec<f64> = (0..6)
            .map(|i| orient(k[(i + 5) % 6], k[i], k[(i + 1) % 6]))
            .collect();
        let orientation = if turns.iter().all(|&x| x > 0.0) {
            Orientation::Positive
        } else if turns.iter().all(|&x| x < 0.0) {
            Orientation::Negative
        } else {
            return Err(Error::InvalidNecklace("vertex cycle is not convex".into()));
        };
        for i in 0..6 {
            for j in i + 2..6 {
                if i == 0 && j == 5 {
                    continue;
                }
                let a = Segment::new(pts[i], pts[(i + 1) % 6]);
                let b = Segment::new(pts[j], pts[(j + 1) % 6]);
                if segments_cross(&a, &b).map_err(|e| Error::InvalidNecklace(e.to_string()))? {
                    return Err(Error::InvalidNecklace(format!(
                        "sides {} and {} cross",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(orientation)
    }

    pub fn rotations(&self) -> &[Isometry; 6] {
        &self.rotations
    }

    pub fn lifts(&self) -> &[Point; 6] {
        &self.lifts
    }

    /// `R_i` for `i` in `1..=6`.
    pub fn rotation(&self, i: usize) -> &Isometry {
        &self.rotations[i - 1]
    }

    /// `w_i` for `i` in `1..=6`.
    pub fn lift(&self, i: usize) -> &Point {
        &self.lifts[i - 1]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `A_0..A_6` with `A_i = R_1...R_i`.
    pub fn prefix_products(&self) -> [Isometry; 7] {
        let mut out = [Isometry::IDENTITY; 7];
        for i in 0..6 {
            out[i + 1] = out[i].compose(&self.rotations[i]);
        }
        out
    }

    /// Vertices `A_{k-1} w_k` of the hexagon across the sixth side.
    pub fn hbar_lifts(&self) -> [Point; 6] {
        let prefix = self.prefix_products();
        std::array::from_fn(|k| prefix[k].apply(&self.lifts[k]))
    }

    /// Length of the necklace arc from `w_i` to `w_{i+1}`.
    pub fn necklace_length(&self, i: usize) -> f64 {
        distance(&self.lifts[i - 1], &self.lifts[i % 6]).expect("lifts are valid points")
    }

    pub fn conjugated(&self, g: &Isometry) -> Holonomy {
        Holonomy {
            rotations: self.rotations.map(|r| r.conjugate_by(g)),
            lifts: self.lifts.map(|p| g.apply(&p)),
            orientation: self.orientation,
        }
    }

    /// The same marking moved so the hexagon centroid sits at the origin.
    pub fn recentred(&self) -> Holonomy {
        self.conjugated(&Isometry::to_origin(&centroid(&self.lifts)))
    }

    /// Relabels cone points so that the new `omega_i` is the old `omega_{i+r}`.
    pub fn rotated(&self, r: usize) -> Holonomy {
        Holonomy {
            rotations: std::array::from_fn(|i| self.rotations[(i + r) % 6]),
            lifts: std::array::from_fn(|i| self.lifts[(i + r) % 6]),
            orientation: self.orientation,
        }
    }
}

/// Normalized Minkowski sum of the points.
pub(crate) fn centroid(points: &[Point]) -> Point {
    let s = points.iter().fold([0.0; 3], |acc, p| {
        [acc[0] + p.x0, acc[1] + p.x1, acc[2] + p.x2]
    });
    Point::projected(s[0], s[1], s[2])
}

fn seam(a: f64, b: f64, opposite: f64) -> Result<f64> {
    let c = (opposite.cosh() + a.cosh() * b.cosh()) / (a.sinh() * b.sinh());
    if !(c >= 1.0) || !c.is_finite() {
        return Err(Error::InvalidParams(format!(
            "seam cosine {c} out of range"
        )));
    }
    Ok(c.acosh())
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn solve3(m: &[[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let d = det3(m);
    if d.abs() < 1e-300 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        let mut mc = *m;
        for r in 0..3 {
            mc[r][c] = rhs[r];
        }
        *slot = det3(&mc) / d;
    }
    Some(out)
}

/// Vector Minkowski-orthogonal to `u` and `v`.
fn mcross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        -(u[1] * v[2] - u[2] * v[1]),
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Minkowski normal of the geodesic through `p` and `q`.
fn line_normal(p: &Point, q: &Point) -> [f64; 3] {
    let n = mcross([p.x0, p.x1, p.x2], [q.x0, q.x1, q.x2]);
    let norm = (-n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    n.map(|x| x / norm)
}

/// Foot on the line with normal `n` of the common perpendicular to the line with normal `m`.
fn perpendicular_foot(n: [f64; 3], m: [f64; 3]) -> Result<Point> {
    let f = mcross(n, mcross(n, m));
    let norm2 = f[0] * f[0] - f[1] * f[1] - f[2] * f[2];
    if !(norm2 > 0.0) {
        return Err(Error::ConstructionFailure(
            "boundary axes are not ultraparallel".into(),
        ));
    }
    let s = f[0].signum() / norm2.sqrt();
    Ok(Point::projected(f[0] * s, f[1] * s, f[2] * s))
}

/// Signed position of `p` on the axis of `g`, in the parametrization of [`axis_point`].
fn axis_param(g: &Isometry, p: &Point) -> Result<f64> {
    let d = distance(&axis_point(g, 0.0)?, p)?;
    let miss = |s: f64| axis_point(g, s).and_then(|q| distance(&q, p));
    Ok(if miss(d)? <= miss(-d)? { d } else { -d })
}

/// Boundary holonomies `X1, X3, X5` of the pants and the midpoints of the hexagon sides
/// on their axes, placed with the hexagon centroid at the origin.
fn pants_holonomy(a: [f64; 3]) -> Result<([Isometry; 3], [Point; 3])> {
    let [a1, a3, a5] = a;
    let sides = [
        a1,
        seam(a1, a3, a5)?,
        a3,
        seam(a3, a5, a1)?,
        a5,
        seam(a5, a1, a3)?,
    ];
    let mut frames = [Isometry::IDENTITY; 6];
    let mut f = Isometry::IDENTITY;
    for (i, &d) in sides.iter().enumerate() {
        frames[i] = f;
        f = f
            .compose(&Isometry::translation(d))
            .compose(&Isometry::rotation(FRAC_PI_2));
    }
    if !f.is_identity(1e-8) {
        return Err(Error::ConstructionFailure(
            "right-angled hexagon does not close".into(),
        ));
    }
    let corners = frames.map(|g| g.apply(&Point::ORIGIN));
    let recentre = Isometry::to_origin(&centroid(&corners));
    let x = std::array::from_fn(|i| {
        frames[2 * i]
            .compose(&Isometry::translation(-2.0 * a[i]))
            .compose(&frames[2 * i].inverse())
            .conjugate_by(&recentre)
    });
    let mids = std::array::from_fn(|i| {
        recentre
            .compose(&frames[2 * i])
            .apply(&Isometry::translation(a[i] / 2.0).apply(&Point::ORIGIN))
    });
    Ok((x, mids))
}

pub(crate) fn build_marking(params: &PantsFoldParams) -> Result<Holonomy> {
    let (x, mids) = pants_holonomy(params.a)?;
    let mut lifts = [Point::ORIGIN; 6];
    for i in 0..3 {
        let base = axis_param(&x[i], &mids[i])?;
        lifts[2 * i] = axis_point(&x[i], base + params.t[i] + params.a[i])?;
        lifts[2 * i + 1] = axis_point(&x[i], base + params.t[i])?;
    }
    let rotations = lifts.map(|p| half_turn(&p));
    Holonomy::from_parts(rotations, lifts)
}

/// Pants-and-fold coordinates of a marking, with twists taken literally: the inverse
/// of [`build_unwrapped`] up to the global position of the picture.
pub fn params_of(h: &Holonomy) -> Result<PantsFoldParams> {
    let a = [1, 3, 5].map(|k| h.necklace_length(k));
    let normals: [[f64; 3]; 3] =
        std::array::from_fn(|i| line_normal(h.lift(2 * i + 1), h.lift(2 * i + 2)));
    let mut t = [0.0; 3];
    for i in 0..3 {
        let x = h.rotation(2 * i + 1).compose(h.rotation(2 * i + 2));
        let f1 = perpendicular_foot(normals[i], normals[(i + 1) % 3])?;
        let f2 = perpendicular_foot(normals[i], normals[(i + 2) % 3])?;
        let mid = midpoint(&f1, &f2);
        t[i] = axis_param(&x, h.lift(2 * i + 2))? - axis_param(&x, &mid)?;
    }
    Ok(PantsFoldParams { a, t })
}

/// The same marking rebuilt from its pants-and-fold coordinates, which removes rounding
/// accumulated by long products of isometries.
pub fn normalized_marking(h: &Holonomy) -> Result<Holonomy> {
    let p = params_of(h)?;
    let out = build_marking(&p)?;
    // the six lifts determine the marking
    let pairs = |m: &Holonomy| {
        let mut d = Vec::with_capacity(15);
        for j in 0..6 {
            for k in j + 1..6 {
                d.push(distance(&m.lifts[j], &m.lifts[k]));
            }
        }
        d.into_iter().collect::<Result<Vec<f64>>>()
    };
    let (before, after) = (pairs(h)?, pairs(&out)?);
    let drift = before
        .iter()
        .zip(&after)
        .map(|(x, y)| (x - y).abs() / x.max(1.0))
        .fold(0.0, f64::max);
    if !(drift < 1e-6) {
        return Err(Error::ConstructionFailure(format!(
            "rebuilt marking differs from the input by {drift:e}"
        )));
    }
    Ok(out)
}

/// Builds the marking, reducing twists into one period first.
pub fn build(params: &PantsFoldParams) -> Result<Holonomy> {
    params.validate()?;
    build_marking(&params.wrapped())
}

/// Builds the marking with the twists taken literally. Shifting `t_i` by `2 a_i` gives
/// the same orbifold with a Dehn-twisted marking.
pub fn build_unwrapped(params: &PantsFoldParams) -> Result<Holonomy> {
    params.validate()?;
    build_marking(params)
}

/// Orientation-reversed marking: conjugation by `x2 -> -x2`, re-based so the vertex
/// cycle is anticlockwise again.
pub fn mirror(h: &Holonomy) -> Holonomy {
    Holonomy::from_parts(
        h.rotations.map(|r| r.reflected()),
        h.lifts.map(|p| p.reflected()),
    )
    .expect("mirror image of a valid marking is valid")
}

/// `arccosh(1 + sqrt 2)`, the edge length of the octahedral orbifold.
pub fn oct_edge() -> f64 {
    (1.0 + 2f64.sqrt()).acosh()
}

/// The octahedral orbifold.
pub fn oct() -> Result<(PantsFoldParams, Holonomy)> {
    static CACHE: OnceLock<Result<(PantsFoldParams, Holonomy)>> = OnceLock::new();
    CACHE.get_or_init(solve_oct).clone()
}

fn solve_oct() -> Result<(PantsFoldParams, Holonomy)> {
    let a = oct_edge();
    let params = |t: f64| PantsFoldParams {
        a: [a; 3],
        t: [t; 3],
    };
    let f = |t: f64| -> Result<f64> { Ok(build(&params(t))?.necklace_length(2) - a) };
    let (mut lo, mut hi) = (-a / 2.0, a / 2.0);
    let (mut flo, fhi) = (f(lo)?, f(hi)?);
    if flo * fhi > 0.0 {
        return Err(Error::ConstructionFailure(
            "octahedral twist is not bracketed".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let p = params(0.5 * (lo + hi));
    let h = build(&p)?;
    let spread = (1..=6)
        .map(|i| (h.necklace_length(i) - a).abs())
        .fold(0.0, f64::max);
    if spread > 1e-9 {
        return Err(Error::ConstructionFailure(format!(
            "octahedral solve left necklace spread {spread}"
        )));
    }
    Ok((p, h))
}

/// Parameters on the symmetric slice `a5 = a1`, `t3 = 0`, `t1 = -a1 - t5`.
fn exceptional_params(x: [f64; 3]) -> PantsFoldParams {
    let [a1, a3, t5] = x;
    PantsFoldParams {
        a: [a1, a3, a1],
        t: [-a1 - t5, 0.0, t5],
    }
}

/// Residuals of the equality pattern defining the exceptional orbifold.
pub fn exceptional_residuals(h: &Holonomy) -> Result<[f64; 8]> {
    use crate::tessellation::{ArcLabel, Side, Tiling};
    let tiling = Tiling::new(h)?;
    let len = |j, k, side, crossings: &[u8]| -> Result<f64> {
        Ok(tiling
            .develop_label(&ArcLabel::new(j, k, side, crossings.to_vec())?)?
            .length)
    };
    let g = |i| h.necklace_length(i);
    Ok([
        g(1) - g(5),
        g(2) - len(1, 3, Side::HBar, &[])?,
        g(2) - len(1, 4, Side::H, &[])?,
        g(2) - len(2, 4, Side::H, &[])?,
        g(3) - len(3, 4, Side::HBar, &[6])?,
        g(3) - len(3, 5, Side::HBar, &[])?,
        g(3) - len(3, 6, Side::HBar, &[])?,
        g(4) - len(4, 6, Side::H, &[])?,
    ])
}

fn reduced_residuals(x: [f64; 3]) -> Option<[f64; 8]> {
    let h = build_marking(&exceptional_params(x)).ok()?;
    exceptional_residuals(&h).ok()
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Levenberg-Marquardt on the symmetric slice.
fn solve_exceptional_from(start: [f64; 3]) -> Option<[f64; 3]> {
    let mut x = start;
    let mut r = reduced_residuals(x)?;
    let mut lambda = 1e-3;
    for _ in 0..200 {
        if norm2(&r).sqrt() < 1e-13 {
            break;
        }
        let step = 1e-7;
        let mut jac = [[0.0; 3]; 8];
        for c in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[c] += step;
            xm[c] -= step;
            let (rp, rm) = (reduced_residuals(xp)?, reduced_residuals(xm)?);
            for row in 0..8 {
                jac[row][c] = (rp[row] - rm[row]) / (2.0 * step);
            }
        }
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for row in 0..8 {
            for i in 0..3 {
                jtr[i] -= jac[row][i] * r[row];
                for j in 0..3 {
                    jtj[i][j] += jac[row][i] * jac[row][j];
                }
            }
        }
        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for i in 0..3 {
                damped[i][i] += lambda * jtj[i][i].max(1e-12);
            }
            let delta = solve3(&damped, jtr)?;
            let trial = [x[0] + delta[0], x[1] + delta[1], x[2] + delta[2]];
            if let Some(rt) = reduced_residuals(trial) {
                if norm2(&rt) < norm2(&r) {
                    x = trial;
                    r = rt;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (r.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-11).then_some(x)
}

/// Every distinct solution on the symmetric slice reached from a fixed grid of starts,
/// sorted by parameters.
pub fn exceptional_solutions() -> Vec<PantsFoldParams> {
    let mut found: Vec<[f64; 3]> = Vec::new();
    for &a1 in &[0.5, 0.8, 1.1] {
        for &a3 in &[1.4, 1.8, 2.2] {
            for &t5 in &[-0.2, 0.1, 0.4] {
                if let Some(x) = solve_exceptional_from([a1, a3, t5]) {
                    let p = exceptional_params(x);
                    if p.validate().is_err() || p.wrapped() != p {
                        continue;
                    }
                    if found
                        .iter()
                        .all(|y| (0..3).any(|i| (x[i] - y[i]).abs() > 1e-6))
                    {
                        found.push(x);
                    }
                }
            }
        }
    }
    found.sort_by(|u, v| u.partial_cmp(v).expect("finite"));
    found.into_iter().map(exceptional_params).collect()
}

/// The exceptional orbifold with Klein-four symmetry.
pub fn exceptional() -> Result<(PantsFoldParams, Holonomy)> {
    static CACHE: OnceLock<Result<(PantsFoldParams, Holonomy)>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            for p in exceptional_solutions() {
                let h = build(&p)?;
                if crate::maskit::check(&h)?.in_domain {
                    return Ok((p, h));
                }
            }
            Err(Error::ConstructionFailure(
                "no solution of the exceptional equalities lies in the domain".into(),
            ))
        })
        .clone()
}

/// Contents of an orbifold description file.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbifoldFile {
    Params(PantsFoldParams),
    Matrices([[[f64; 2]; 2]; 6]),
}

pub const FORMAT_VERSION: &str = "maskit2/1";

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl OrbifoldFile {
    pub fn from_holonomy(h: &Holonomy) -> OrbifoldFile {
        OrbifoldFile::Matrices(h.rotations.map(|r| r.matrix()))
    }

    pub fn to_holonomy(&self) -> Result<Holonomy> {
        match self {
            OrbifoldFile::Params(p) => build(p),
            OrbifoldFile::Matrices(ms) => {
                let mut rotations = [Isometry::IDENTITY; 6];
                for (slot, m) in rotations.iter_mut().zip(ms) {
                    *slot = Isometry::new(*m)?;
                }
                Holonomy::from_rotations(rotations)
            }
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("format={FORMAT_VERSION}\n");
        match self {
            OrbifoldFile::Params(p) => {
                out.push_str("kind=params\n");
                for (i, a) in p.a.iter().enumerate() {
                    let _ = writeln!(out, "a{}={}", 2 * i + 1, fmt17(*a));
                }
                for (i, t) in p.t.iter().enumerate() {
                    let _ = writeln!(out, "t{}={}", 2 * i + 1, fmt17(*t));
                }
            }
            OrbifoldFile::Matrices(ms) => {
                out.push_str("kind=matrices\n");
                for (i, m) in ms.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "R{}={},{},{},{}",
                        i + 1,
                        fmt17(m[0][0]),
                        fmt17(m[0][1]),
                        fmt17(m[1][0]),
                        fmt17(m[1][1])
                    );
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<OrbifoldFile> {
        let err = |line: usize, message: String| Error::ParseError { line, message };
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        let mut last_line = 0;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected key=value, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if entries.iter().any(|(_, k, _)| k == key) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            entries.push((line, key.to_string(), value.to_string()));
        }
        let get = |key: &str| entries.iter().find(|(_, k, _)| k == key);
        match get("format") {
            Some((_, _, v)) if v == FORMAT_VERSION => {}
            Some((l, _, v)) => return Err(err(*l, format!("unsupported format `{v}`"))),
            None => return Err(err(last_line.max(1), "missing key `format`".into())),
        }
        let number = |line: usize, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line, format!("`{s}` is not a finite number")))
        };
        let kind = match get("kind") {
            Some((l, _, v)) => (*l, v.as_str()),
            None => return Err(err(last_line.max(1), "missing key `kind`".into())),
        };
        let allowed: Vec<String> = match kind.1 {
            "params" => ["a1", "a3", "a5", "t1", "t3", "t5"]
                .map(String::from)
                .to_vec(),
            "matrices" => (1..=6).map(|i| format!("R{i}")).collect(),
            other => return Err(err(kind.0, format!("unknown kind `{other}`"))),
        };
        for (l, k, _) in &entries {
            if k != "format" && k != "kind" && !allowed.contains(k) {
                return Err(err(*l, format!("unknown key `{k}`")));
            }
        }
        let require = |key: &str| {
            get(key).ok_or_else(|| err(last_line.max(1), format!("missing key `{key}`")))
        };
        if kind.1 == "params" {
            let mut v = [0.0; 6];
            for (slot, key) in v.iter_mut().zip(&allowed) {
                let (l, _, s) = require(key)?;
                *slot = number(*l, s)?;
            }
            Ok(OrbifoldFile::Params(PantsFoldParams {
                a: [v[0], v[1], v[2]],
                t: [v[3], v[4], v[5]],
            }))
        } else {
            let mut ms = [[[0.0; 2]; 2]; 6];
            for (m, key) in ms.iter_mut().zip(&allowed) {
                let (l, _, s) = require(key)?;
                let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(err(*l, format!("`{key}` needs four entries")));
                }
                *m = [
                    [number(*l, parts[0])?, number(*l, parts[1])?],
                    [number(*l, parts[2])?, number(*l, parts[3])?],
                ];
            }
            Ok(OrbifoldFile::Matrices(ms))
        }
    }
}
