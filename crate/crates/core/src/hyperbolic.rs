//! Hyperboloid-model points, PSL(2,R) isometries and Klein-disk incidence tests.
//!
//! A point `p` is stored on the upper sheet of `-x0^2 + x1^2 + x2^2 = -1`. A matrix
//! `g` acts on `p` through the symmetric matrix `S(p) = [[x0+x1, x2], [x2, x0-x1]]`
//! by `S -> g S g^T`; the origin `(1,0,0)` corresponds to the identity matrix.

use std::cmp::Ordering;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Absolute tolerance for metric identities.
pub const METRIC_TOL: f64 = 1e-9;
/// Tolerance below which a normalized orientation test counts as degenerate.
pub const ORIENT_TOL: f64 = 1e-12;
/// Half-width of the band around `|tr| = 2` that is refused by classification.
pub const TRACE_BAND: f64 = 1e-9;

const RENORM_EVERY: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x0: 1.0,
        x1: 0.0,
        x2: 0.0,
    };

    /// Validates that the coordinates lie on the upper sheet of the hyperboloid.
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Point> {
        let p = Point { x0, x1, x2 };
        if !(x0.is_finite() && x1.is_finite() && x2.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let norm = p.minkowski(&p);
        if x0 < 1.0 - METRIC_TOL || (norm + 1.0).abs() > METRIC_TOL * x0 * x0 {
            return Err(Error::InvalidPoint(format!(
                "({x0}, {x1}, {x2}) is not on the hyperboloid"
            )));
        }
        Ok(p)
    }

    /// Rescales a future-pointing timelike vector onto the hyperboloid.
    pub(crate) fn projected(x0: f64, x1: f64, x2: f64) -> Point {
        let n = (x0 * x0 - x1 * x1 - x2 * x2).sqrt();
        Point {
            x0: x0 / n,
            x1: x1 / n,
            x2: x2 / n,
        }
    }

    /// Point at distance `r` from the origin in direction `theta`.
    pub fn polar(r: f64, theta: f64) -> Point {
        let s = r.sinh();
        Point {
            x0: r.cosh(),
            x1: s * theta.cos(),
            x2: s * theta.sin(),
        }
    }

    pub fn from_klein(k: [f64; 2]) -> Result<Point> {
        let r2 = k[0] * k[0] + k[1] * k[1];
        if !(r2 < 1.0) {
            return Err(Error::InvalidPoint(format!(
                "Klein coordinates ({}, {}) outside the disk",
                k[0], k[1]
            )));
        }
        let x0 = 1.0 / (1.0 - r2).sqrt();
        Ok(Point {
            x0,
            x1: k[0] * x0,
            x2: k[1] * x0,
        })
    }

    pub fn minkowski(&self, q: &Point) -> f64 {
        -self.x0 * q.x0 + self.x1 * q.x1 + self.x2 * q.x2
    }

    pub fn klein(&self) -> [f64; 2] {
        [self.x1 / self.x0, self.x2 / self.x0]
    }

    /// Mirror image under `x2 -> -x2`.
    pub fn reflected(&self) -> Point {
        Point {
            x0: self.x0,
            x1: self.x1,
            x2: -self.x2,
        }
    }

    fn cmp_coords(&self, other: &Point) -> Ordering {
        self.x0
            .total_cmp(&other.x0)
            .then(self.x1.total_cmp(&other.x1))
            .then(self.x2.total_cmp(&other.x2))
    }
}

/// Geodesic midpoint of `p` and `q`.
pub fn midpoint(p: &Point, q: &Point) -> Point {
    Point::projected(p.x0 + q.x0, p.x1 + q.x1, p.x2 + q.x2)
}

/// Hyperbolic distance, evaluated as `2 asinh(|p - q| / 2)` for accuracy near zero.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    let c = -p.minkowski(q);
    if !(c >= 1.0 - METRIC_TOL * p.x0 * q.x0) {
        return Err(Error::InvalidPoint(format!("-<p,q> = {c} < 1")));
    }
    let d0 = p.x0 - q.x0;
    let d1 = p.x1 - q.x1;
    let d2 = p.x2 - q.x2;
    let chord2 = (-d0 * d0 + d1 * d1 + d2 * d2).max(0.0);
    Ok(2.0 * (chord2.sqrt() / 2.0).asinh())
}

/// Interior angle at `v` between the geodesics towards `a` and `b`.
pub fn angle_at(v: &Point, a: &Point, b: &Point) -> f64 {
    let tangent = |x: &Point| {
        let c = x.minkowski(v);
        [x.x0 + c * v.x0, x.x1 + c * v.x1, x.x2 + c * v.x2]
    };
    let dot = |u: &[f64; 3], w: &[f64; 3]| -u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
    let ua = tangent(a);
    let ub = tangent(b);
    let cos = dot(&ua, &ub) / (dot(&ua, &ua) * dot(&ub, &ub)).sqrt();
    cos.clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsometryKind {
    Elliptic,
    Hyperbolic,
}

/// An orientation-preserving isometry, a 2x2 matrix of determinant 1 taken up to sign.
#[derive(Clone, Copy, Debug)]
pub struct Isometry {
    m: [[f64; 2]; 2],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Accepts a matrix whose determinant is 1 within tolerance and rescales it exactly.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Isometry> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || (det - 1.0).abs() > METRIC_TOL.sqrt() {
            return Err(Error::InvalidParams(format!(
                "matrix determinant {det} is not 1"
            )));
        }
        Ok(Isometry { m }.normalized())
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        Isometry {
            m: [[d, -b], [-c, a]],
        }
    }

    /// Rescales to determinant 1 and fixes the sign so the first nonzero entry is positive.
    pub fn normalized(&self) -> Isometry {
        let det = self.det();
        let s = if det > 0.0 { 1.0 / det.sqrt() } else { 1.0 };
        let flat = [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]];
        let lead = flat
            .iter()
            .copied()
            .find(|x| x.abs() > 1e-300)
            .unwrap_or(1.0);
        let s = if lead < 0.0 { -s } else { s };
        Isometry {
            m: [
                [self.m[0][0] * s, self.m[0][1] * s],
                [self.m[1][0] * s, self.m[1][1] * s],
            ],
        }
    }

    /// Product of a chain of isometries, renormalized every few factors.
    pub fn product<'a, I: IntoIterator<Item = &'a Isometry>>(factors: I) -> Isometry {
        let mut acc = Isometry::IDENTITY;
        for (n, g) in factors.into_iter().enumerate() {
            acc = acc.compose_raw(g);
            if (n + 1) % RENORM_EVERY == 0 {
                acc = acc.normalized();
            }
        }
        acc.normalized()
    }

    fn compose_raw(&self, o: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &o.m;
        Isometry {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    /// `self * o`, acting first by `o`.
    pub fn compose(&self, o: &Isometry) -> Isometry {
        self.compose_raw(o).normalized()
    }

    /// `h * self * h^-1`.
    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose_raw(self).compose_raw(&h.inverse()).normalized()
    }

    pub fn apply(&self, p: &Point) -> Point {
        let s = [[p.x0 + p.x1, p.x2], [p.x2, p.x0 - p.x1]];
        let m = &self.m;
        let ms = [
            [
                m[0][0] * s[0][0] + m[0][1] * s[1][0],
                m[0][0] * s[0][1] + m[0][1] * s[1][1],
            ],
            [
                m[1][0] * s[0][0] + m[1][1] * s[1][0],
                m[1][0] * s[0][1] + m[1][1] * s[1][1],
            ],
        ];
        let s00 = ms[0][0] * m[0][0] + ms[0][1] * m[0][1];
        let s01 = ms[0][0] * m[1][0] + ms[0][1] * m[1][1];
        let s11 = ms[1][0] * m[1][0] + ms[1][1] * m[1][1];
        Point::projected((s00 + s11) / 2.0, (s00 - s11) / 2.0, s01)
    }

    /// Equality in PSL(2,R): entrywise within `tol` up to a global sign.
    pub fn approx_eq(&self, o: &Isometry, tol: f64) -> bool {
        let close =
            |s: f64| (0..2).all(|i| (0..2).all(|j| (self.m[i][j] - s * o.m[i][j]).abs() <= tol));
        close(1.0) || close(-1.0)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Isometry::IDENTITY, tol)
    }

    pub fn kind(&self) -> Result<IsometryKind> {
        let t = self.trace().abs();
        if t < 2.0 - TRACE_BAND {
            Ok(IsometryKind::Elliptic)
        } else if t > 2.0 + TRACE_BAND {
            Ok(IsometryKind::Hyperbolic)
        } else {
            Err(Error::NotHyperbolic {
                trace: self.trace(),
            })
        }
    }

    /// Translation by `d` along the geodesic through the origin in the `x1` direction.
    pub fn translation(d: f64) -> Isometry {
        Isometry {
            m: [[(d / 2.0).exp(), 0.0], [0.0, (-d / 2.0).exp()]],
        }
    }

    /// Anticlockwise rotation by `phi` about the origin.
    pub fn rotation(phi: f64) -> Isometry {
        let (s, c) = (phi / 2.0).sin_cos();
        Isometry {
            m: [[c, -s], [s, c]],
        }
    }

    /// The transvection carrying the origin to `p` along the joining geodesic.
    pub fn from_origin(p: &Point) -> Isometry {
        let n = (2.0 * p.x0 + 2.0).sqrt();
        Isometry {
            m: [
                [(p.x0 + p.x1 + 1.0) / n, p.x2 / n],
                [p.x2 / n, (p.x0 - p.x1 + 1.0) / n],
            ],
        }
    }

    pub fn to_origin(p: &Point) -> Isometry {
        Isometry::from_origin(p).inverse()
    }

    /// Conjugation by the reflection `x2 -> -x2`.
    pub fn reflected(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        Isometry {
            m: [[a, -b], [-c, d]],
        }
        .normalized()
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl Mul<&Isometry> for &Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &Isometry) -> Isometry {
        self.compose(rhs)
    }
}

/// Order-two rotation about `p`.
pub fn half_turn(p: &Point) -> Isometry {
    let h = Isometry::from_origin(p);
    let j = Isometry {
        m: [[0.0, -1.0], [1.0, 0.0]],
    };
    h.compose_raw(&j).compose_raw(&h.inverse()).normalized()
}

/// Fixed point of a half-turn (a trace-zero elliptic element).
pub fn half_turn_center(g: &Isometry) -> Result<Point> {
    if g.trace().abs() > METRIC_TOL.sqrt() {
        return Err(Error::InvalidParams(format!(
            "trace {} is not that of a half-turn",
            g.trace()
        )));
    }
    // g S is antisymmetric for the fixed S, which gives S = +-[[-b, a], [a, c]].
    let [[a, b], [c, _]] = g.m;
    let sign = if -b > 0.0 { 1.0 } else { -1.0 };
    let s00 = -b * sign;
    let s01 = a * sign;
    let s11 = c * sign;
    let p = Point::projected((s00 + s11) / 2.0, (s00 - s11) / 2.0, s01);
    Point::new(p.x0, p.x1, p.x2)
}

pub fn translation_length(g: &Isometry) -> Result<f64> {
    match g.kind()? {
        IsometryKind::Hyperbolic => Ok(2.0 * (g.trace().abs() / 2.0).acosh()),
        IsometryKind::Elliptic => Err(Error::NotHyperbolic { trace: g.trace() }),
    }
}

/// Point at signed arc length `s` along the axis of `g`, measured from the axis point
/// nearest the origin, increasing in the direction `g` translates.
pub fn axis_point(g: &Isometry, s: f64) -> Result<Point> {
    translation_length(g)?;
    let m = if g.trace() < 0.0 {
        let [[a, b], [c, d]] = g.m;
        [[-a, -b], [-c, -d]]
    } else {
        g.m
    };
    let tr = m[0][0] + m[1][1];
    let l1 = (tr + (tr * tr - 4.0).sqrt()) / 2.0;
    let l2 = 1.0 / l1;
    let eigvec = |l: f64| {
        let u = [m[0][1], l - m[0][0]];
        let v = [l - m[1][1], m[1][0]];
        if u[0].hypot(u[1]) >= v[0].hypot(v[1]) {
            u
        } else {
            v
        }
    };
    let v1 = eigvec(l1);
    let mut v2 = eigvec(l2);
    let mut det = v1[0] * v2[1] - v2[0] * v1[1];
    if det < 0.0 {
        v2 = [-v2[0], -v2[1]];
        det = -det;
    }
    let k = 1.0 / det.sqrt();
    let h = Isometry {
        m: [[v1[0] * k, v2[0] * k], [v1[1] * k, v2[1] * k]],
    };
    let u0 = (v2[0].hypot(v2[1]) / v1[0].hypot(v1[1])).ln();
    Ok(h.compose_raw(&Isometry::translation(u0 + s))
        .apply(&Point::ORIGIN))
}

/// Geodesic segment with cached Klein projections of its endpoints.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
    pub kp: [f64; 2],
    pub kq: [f64; 2],
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Segment {
        Segment {
            p,
            q,
            kp: p.klein(),
            kq: q.klein(),
        }
    }

    pub fn length(&self) -> Result<f64> {
        distance(&self.p, &self.q)
    }

    pub fn transformed(&self, g: &Isometry) -> Segment {
        Segment::new(g.apply(&self.p), g.apply(&self.q))
    }
}

pub(crate) fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Signed distance (in Klein coordinates) of `c` from the line through `a` and `b`.
pub(crate) fn side_of(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    orient(a, b, c) / (b[0] - a[0]).hypot(b[1] - a[1])
}

fn param_along(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    ((c[0] - a[0]) * d[0] + (c[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])
}

/// Whether the open segments meet transversally.
///
/// Both segments are moved by an isometry centring the first one before the planar
/// test, so far-away segments do not lose resolution near the disk boundary.
pub fn segments_cross(a: &Segment, b: &Segment) -> Result<bool> {
    let key = |s: &Segment| {
        let (lo, hi) = if s.p.cmp_coords(&s.q) == Ordering::Greater {
            (s.q, s.p)
        } else {
            (s.p, s.q)
        };
        (lo, hi)
    };
    let (ka, kb) = (key(a), key(b));
    let order = ka.0.cmp_coords(&kb.0).then(ka.1.cmp_coords(&kb.1));
    let (a, b) = if order == Ordering::Greater {
        (kb, ka)
    } else {
        (ka, kb)
    };
    let frame = Isometry::to_origin(&midpoint(&a.0, &a.1));
    let pts = [a.0, a.1, b.0, b.1].map(|p| frame.apply(&p));
    let same = |x: &Point, y: &Point| distance(x, y).map(|d| d < METRIC_TOL).unwrap_or(false);
    let k = pts.map(|p| p.klein());
    let (a1, a2, b1, b2) = (k[0], k[1], k[2], k[3]);

    let shared: Vec<(usize, usize)> = [(0, 2), (0, 3), (1, 2), (1, 3)]
        .into_iter()
        .filter(|&(i, j)| same(&pts[i], &pts[j]))
        .collect();
    if shared.len() >= 2 {
        return Err(Error::DegenerateIncidence("coincident segments".into()));
    }
    if let Some(&(i, j)) = shared.first() {
        let x = k[i];
        let pa = k[1 - i];
        let pb = k[5 - j];
        let da = [pa[0] - x[0], pa[1] - x[1]];
        let db = [pb[0] - x[0], pb[1] - x[1]];
        let sin = (da[0] * db[1] - da[1] * db[0]) / (da[0].hypot(da[1]) * db[0].hypot(db[1]));
        let dot = da[0] * db[0] + da[1] * db[1];
        if sin.abs() <= ORIENT_TOL && dot > 0.0 {
            return Err(Error::DegenerateIncidence(
                "segments overlap from a shared endpoint".into(),
            ));
        }
        return Ok(false);
    }

    let d1 = side_of(b1, b2, a1);
    let d2 = side_of(b1, b2, a2);
    let d3 = side_of(a1, a2, b1);
    let d4 = side_of(a1, a2, b2);
    let within = |s: [f64; 2], e: [f64; 2], c: [f64; 2]| {
        let t = param_along(s, e, c);
        (-ORIENT_TOL..=1.0 + ORIENT_TOL).contains(&t)
    };
    if d1.abs() <= ORIENT_TOL && d2.abs() <= ORIENT_TOL {
        // Collinear: any overlap of the two intervals is degenerate.
        if within(b1, b2, a1) || within(b1, b2, a2) || within(a1, a2, b1) {
            return Err(Error::DegenerateIncidence("collinear overlap".into()));
        }
        return Ok(false);
    }
    for (d, s, e, c) in [
        (d1, b1, b2, a1),
        (d2, b1, b2, a2),
        (d3, a1, a2, b1),
        (d4, a1, a2, b2),
    ] {
        if d.abs() <= ORIENT_TOL && within(s, e, c) {
            return Err(Error::DegenerateIncidence(
                "endpoint lies on the other segment".into(),
            ));
        }
    }
    Ok(d1 * d2 < 0.0 && d3 * d4 < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist_oracle(p: &Point, q: &Point) -> f64 {
        let c = p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2;
        c.max(1.0).acosh()
    }

    #[test]
    fn distance_basics() {
        let o = Point::ORIGIN;
        assert_eq!(distance(&o, &o).unwrap(), 0.0);
        let q = Point::new(1f64.cosh(), 1f64.sinh(), 0.0).unwrap();
        assert!((distance(&o, &q).unwrap() - 1.0).abs() < 1e-15);
        let p = Point::polar(0.7, 2.0);
        let q = Point::polar(1.9, -0.4);
        assert!((distance(&p, &q).unwrap() - dist_oracle(&p, &q)).abs() < 1e-12);
    }

    #[test]
    fn rejects_off_hyperboloid() {
        assert!(Point::new(2.0, 0.0, 0.0).is_err());
        assert!(Point::new(-1.0, 0.0, 0.0).is_err());
        assert!(Point::new(3f64.cosh(), 3f64.sinh(), 0.0).is_ok());
    }

    #[test]
    fn translation_moves_along_x1() {
        let p = Isometry::translation(1.3).apply(&Point::ORIGIN);
        assert!((p.x1 - 1.3f64.sinh()).abs() < 1e-14);
        assert!(p.x2.abs() < 1e-15);
    }

    #[test]
    fn rotation_is_anticlockwise() {
        let p = Isometry::rotation(std::f64::consts::FRAC_PI_2).apply(&Point::polar(1.0, 0.0));
        let k = p.klein();
        assert!(k[0].abs() < 1e-14 && k[1] > 0.0);
    }

    #[test]
    fn half_turn_at_origin() {
        let r = half_turn(&Point::ORIGIN);
        assert!(r.trace().abs() < 1e-15);
        let p = Point::polar(0.8, 0.3);
        let q = r.apply(&r.apply(&p));
        assert!(distance(&p, &q).unwrap() < 1e-12);
        assert!((r.compose(&r)).is_identity(1e-14));
    }

    #[test]
    fn half_turn_center_recovers_point() {
        let p = Point::polar(2.3, -1.1);
        let c = half_turn_center(&half_turn(&p)).unwrap();
        assert!(distance(&p, &c).unwrap() < 1e-10);
    }

    #[test]
    fn translation_length_from_trace() {
        let g = Isometry::translation(1.0);
        assert!((g.trace() - 2.0 * 0.5f64.cosh()).abs() < 1e-15);
        assert!((translation_length(&g).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            translation_length(&half_turn(&Point::polar(1.0, 1.0))),
            Err(Error::NotHyperbolic { .. })
        ));
        let parabolic = Isometry::new([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(parabolic.kind().is_err());
    }

    #[test]
    fn axis_through_origin_has_origin_basepoint() {
        let g = Isometry::rotation(0.9)
            .compose(&Isometry::translation(1.7))
            .compose(&Isometry::rotation(-0.9));
        let p = axis_point(&g, 0.0).unwrap();
        assert!(distance(&p, &Point::ORIGIN).unwrap() < 1e-12);
    }

    #[test]
    fn axis_basepoint_is_nearest_to_origin() {
        let h = Isometry::from_origin(&Point::polar(1.2, 0.4)).compose(&Isometry::rotation(2.0));
        let g = Isometry::translation(0.8).conjugate_by(&h);
        let d = |s: f64| distance(&axis_point(&g, s).unwrap(), &Point::ORIGIN).unwrap();
        assert!(d(0.0) < d(1e-4) && d(0.0) < d(-1e-4));
    }

    #[test]
    fn crossing_diameters() {
        let s = |a: f64, b: f64| Segment::new(Point::polar(1.0, a), Point::polar(1.0, b));
        let x = s(0.0, std::f64::consts::PI);
        let y = s(std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2);
        assert!(segments_cross(&x, &y).unwrap());
        let shared = Segment::new(Point::polar(1.0, 0.0), Point::polar(2.0, 1.0));
        assert!(!segments_cross(&x, &shared).unwrap());
        assert!(segments_cross(&x, &x).is_err());
    }

    #[test]
    fn t_junction_is_degenerate() {
        let a = Segment::new(
            Point::polar(1.0, 0.0),
            Point::polar(1.0, std::f64::consts::PI),
        );
        let b = Segment::new(Point::ORIGIN, Point::polar(1.0, 1.0));
        assert!(matches!(
            segments_cross(&a, &b),
            Err(Error::DegenerateIncidence(_))
        ));
    }

    #[test]
    fn angles_at_origin() {
        let a = Point::polar(1.0, 0.0);
        let b = Point::polar(3.0, 1.0);
        assert!((angle_at(&Point::ORIGIN, &a, &b) - 1.0).abs() < 1e-12);
    }
}
