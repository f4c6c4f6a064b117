//! The two-coloured tessellation of the plane by lifts of `H` and `H-bar`.
//!
//! Tiles are images `g * H` or `g * H-bar` of the base hexagons, where `H` has
//! vertices `w_k` and `H-bar` (glued to `H` along side 6) has vertices
//! `A_{k-1} w_k`. Side `s` of a tile joins its vertices `s` and `s + 1` and covers
//! the necklace arc `gamma_s`. Geodesics from a cone-point lift are traced tile by
//! tile to read off their crossing sequences.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperbolic::{
    distance, midpoint, orient, segments_cross, side_of, Isometry, Point, Segment,
};
use crate::orbifold::Holonomy;

/// Normalized distance below which a vertex counts as lying on a traced geodesic.
const VERTEX_TOL: f64 = 1e-8;
/// Below this, a failed exit test is blamed on a near incidence rather than the tiling.
const NEAR_VERTEX: f64 = 1e-6;
/// Two lifts closer than this, relative to their height, are the same point.
const SAME_POINT: f64 = 1e-7;
/// Crossing budget for a single trace when the caller gives none.
pub const TRACE_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    H,
    HBar,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::H => Side::HBar,
            Side::HBar => Side::H,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::H => "H",
            Side::HBar => "Hbar",
        })
    }
}

fn next_index(i: usize) -> usize {
    i % 6 + 1
}

fn prev_index(i: usize) -> usize {
    (i + 4) % 6 + 1
}

/// Symbol of an arc from `omega_j` to `omega_k` (`j < k`) leaving `omega_j` into
/// `side` and crossing the necklace arcs listed in `crossings`, in order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcLabel {
    j: usize,
    k: usize,
    side: Side,
    crossings: Vec<u8>,
}

impl ArcLabel {
    /// Validates indices. A necklace arc is reported with start side `H`.
    pub fn new(j: usize, k: usize, side: Side, crossings: Vec<u8>) -> Result<ArcLabel> {
        if !(1..=6).contains(&j) || !(1..=6).contains(&k) {
            return Err(Error::InvalidQuery(format!(
                "cone indices {j}, {k} out of range"
            )));
        }
        if j >= k {
            return Err(Error::InvalidQuery(format!(
                "arc endpoints must satisfy j < k, got {j}, {k}"
            )));
        }
        if crossings.iter().any(|c| !(1..=6).contains(c)) {
            return Err(Error::InvalidQuery(format!(
                "crossing indices {crossings:?} out of range"
            )));
        }
        if crossings.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuery(format!(
                "crossing sequence {crossings:?} repeats a side"
            )));
        }
        let mut label = ArcLabel {
            j,
            k,
            side,
            crossings,
        };
        if label.necklace_index().is_some() {
            label.side = Side::H;
        }
        Ok(label)
    }

    /// The necklace arc `gamma_i` as a label.
    pub fn necklace(i: usize) -> ArcLabel {
        assert!((1..=6).contains(&i), "necklace index {i}");
        let (j, k) = if i == 6 { (1, 6) } else { (i, i + 1) };
        ArcLabel {
            j,
            k,
            side: Side::H,
            crossings: Vec::new(),
        }
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn crossings(&self) -> &[u8] {
        &self.crossings
    }

    /// `Some(i)` if this is the necklace arc `gamma_i`.
    pub fn necklace_index(&self) -> Option<usize> {
        if !self.crossings.is_empty() {
            return None;
        }
        match (self.j, self.k) {
            (1, 6) => Some(6),
            (j, k) if k == j + 1 => Some(j),
            _ => None,
        }
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.j, self.k]
    }

    /// The same arc seen after reflecting the plane: sides swap, crossings stay.
    pub fn mirrored(&self) -> ArcLabel {
        let mut m = self.clone();
        if m.necklace_index().is_none() {
            m.side = m.side.flipped();
        }
        m
    }
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.necklace_index() {
            return write!(f, "gamma{i}");
        }
        let name = match self.side {
            Side::H => "beta",
            Side::HBar => "betabar",
        };
        write!(f, "{name}{}{}", self.j, self.k)?;
        if !self.crossings.is_empty() {
            f.write_str("^")?;
            for c in &self.crossings {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for ArcLabel {
    type Err = Error;

    /// Parses the display form: `gamma3`, `beta24`, `betabar15^6`.
    fn from_str(s: &str) -> Result<ArcLabel> {
        let bad = || Error::InvalidQuery(format!("cannot parse arc label `{s}`"));
        let digits = |t: &str| -> Result<Vec<usize>> {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect()
        };
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("gamma") {
            return match digits(rest)?.as_slice() {
                [i @ 1..=6] => Ok(ArcLabel::necklace(*i)),
                _ => Err(bad()),
            };
        }
        let (side, rest) = if let Some(r) = s.strip_prefix("betabar") {
            (Side::HBar, r)
        } else if let Some(r) = s.strip_prefix("beta") {
            (Side::H, r)
        } else {
            return Err(bad());
        };
        let (ends, cross) = rest.split_once('^').unwrap_or((rest, ""));
        if rest.ends_with('^') {
            return Err(bad());
        }
        let [j, k] = digits(ends)?.try_into().map_err(|_| bad())?;
        let crossings = digits(cross)?.into_iter().map(|c| c as u8).collect();
        ArcLabel::new(j, k, side, crossings)
    }
}

/// A lift `g * H` or `g * H-bar`.
#[derive(Clone, Debug)]
pub struct Tile {
    pub g: Isometry,
    pub parity: Side,
    pub vertices: [Point; 6],
}

impl Tile {
    /// Vertex over `omega_k`, `k` in `1..=6`.
    pub fn vertex(&self, k: usize) -> &Point {
        &self.vertices[k - 1]
    }

    /// Whether `other` is the same tile (same parity and vertices).
    pub fn same_as(&self, other: &Tile) -> bool {
        self.parity == other.parity
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| same_point(a, b))
    }
}

/// Rounding in far tiles grows with the height of the points, so the tolerance does too.
fn same_point(a: &Point, b: &Point) -> bool {
    let scale = a.x0.max(b.x0);
    distance(a, b)
        .map(|d| d < SAME_POINT * scale)
        .unwrap_or(false)
}

/// Part of a traced geodesic inside one tile, moved back into the base tile of the
/// same parity.
#[derive(Clone, Copy, Debug)]
pub struct Piece {
    pub parity: Side,
    pub from: Point,
    pub to: Point,
}

/// Result of walking a geodesic through the tessellation.
#[derive(Clone, Debug)]
pub struct Trace {
    pub side: Side,
    pub crossings: Vec<u8>,
    pub pieces: Vec<Piece>,
    /// Cone index of the endpoint.
    pub end_vertex: usize,
    /// Which of the four tiles around the start vertex holds the initial direction:
    /// 0 is the start tile, then anticlockwise-adjacent across the sides at the vertex.
    pub fan_index: usize,
}

/// A realized arc: its label, length and the lift `endpoint_word * w_k` of its far end.
#[derive(Clone, Debug)]
pub struct ArcInstance {
    pub label: ArcLabel,
    pub length: f64,
    pub endpoint_lift: Point,
    pub endpoint_word: Isometry,
    pub verified: bool,
    pub simple: bool,
    pub converged: bool,
    pub pieces: Vec<Piece>,
}

impl ArcInstance {
    pub fn necklace_index(&self) -> Option<usize> {
        self.label.necklace_index()
    }

    pub fn endpoints(&self) -> [usize; 2] {
        self.label.endpoints()
    }

    pub fn shares_endpoint(&self, cone: usize) -> bool {
        self.label.j == cone || self.label.k == cone
    }
}

/// Limits for arc enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_word: usize,
    pub max_cross: usize,
    pub max_tiles: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_word: 8,
            max_cross: 3,
            max_tiles: 500_000,
        }
    }
}

impl Bounds {
    pub fn new(max_word: usize, max_cross: usize) -> Bounds {
        Bounds {
            max_word,
            max_cross,
            ..Bounds::default()
        }
    }

    fn depth(&self) -> usize {
        self.max_word.min(self.max_cross)
    }
}

/// Number of transverse crossings between two arcs away from cone points.
pub fn crossing_number(a: &ArcInstance, b: &ArcInstance) -> Result<usize> {
    if a.label == b.label {
        return Err(Error::InvalidQuery(format!(
            "crossing number of {} with itself",
            a.label
        )));
    }
    if let Some(i) = a.necklace_index() {
        return Ok(b
            .label
            .crossings
            .iter()
            .filter(|&&c| c as usize == i)
            .count());
    }
    if let Some(i) = b.necklace_index() {
        return Ok(a
            .label
            .crossings
            .iter()
            .filter(|&&c| c as usize == i)
            .count());
    }
    let mut n = 0;
    for p in &a.pieces {
        for q in b.pieces.iter().filter(|q| q.parity == p.parity) {
            let sp = Segment::new(p.from, p.to);
            let sq = Segment::new(q.from, q.to);
            if segments_cross(&sp, &sq)? {
                n += 1;
            }
        }
    }
    Ok(n)
}

fn pieces_simple(pieces: &[Piece]) -> Result<bool> {
    for (i, p) in pieces.iter().enumerate() {
        for q in pieces[i + 1..].iter().filter(|q| q.parity == p.parity) {
            if segments_cross(&Segment::new(p.from, p.to), &Segment::new(q.from, q.to))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The tessellation developed from a marking.
#[derive(Clone, Debug)]
pub struct Tiling {
    hol: Holonomy,
    prefix: [Isometry; 7],
    prefix_inv: [Isometry; 7],
    hbar: [Point; 6],
}

impl Tiling {
    pub fn new(h: &Holonomy) -> Result<Tiling> {
        let prefix = h.prefix_products();
        if !prefix[6].is_identity(1e-8) {
            return Err(Error::InvalidNecklace("R1...R6 is not +-I".into()));
        }
        Ok(Tiling {
            hol: h.clone(),
            prefix,
            prefix_inv: prefix.map(|g| g.inverse()),
            hbar: h.hbar_lifts(),
        })
    }

    pub fn holonomy(&self) -> &Holonomy {
        &self.hol
    }

    fn base_vertices(&self, parity: Side) -> &[Point; 6] {
        match parity {
            Side::H => self.hol.lifts(),
            Side::HBar => &self.hbar,
        }
    }

    pub fn tile(&self, g: Isometry, parity: Side) -> Tile {
        let vertices = self.base_vertices(parity).map(|p| g.apply(&p));
        Tile {
            g,
            parity,
            vertices,
        }
    }

    pub fn base(&self) -> Tile {
        self.tile(Isometry::IDENTITY, Side::H)
    }

    /// The H-bar tile glued to the base tile along side 6.
    pub fn hbar_base(&self) -> Tile {
        self.tile(Isometry::IDENTITY, Side::HBar)
    }

    /// The tile of the given parity with `w_j` as its vertex `j`, entered from the
    /// base tile across side `j - 1` when the parity is `H-bar`.
    pub fn start_tile(&self, j: usize, side: Side) -> Tile {
        match side {
            Side::H => self.base(),
            Side::HBar => self.tile(self.prefix_inv[j - 1], Side::HBar),
        }
    }

    /// Group element taking `w_k` to vertex `k` of `t`.
    pub fn vertex_word(&self, t: &Tile, k: usize) -> Isometry {
        match t.parity {
            Side::H => t.g,
            Side::HBar => t.g.compose(&self.prefix[k - 1]),
        }
    }

    /// The tile of opposite parity across side `i` of `t`.
    pub fn adjacent(&self, t: &Tile, i: usize) -> Result<Tile> {
        if !(1..=6).contains(&i) {
            return Err(Error::InvalidQuery(format!("side index {i}")));
        }
        let next = match t.parity {
            Side::H => self.tile(t.g.compose(&self.prefix_inv[i]), Side::HBar),
            Side::HBar => self.tile(t.g.compose(&self.prefix[i]), Side::H),
        };
        let (a, b) = (i, next_index(i));
        if !same_point(t.vertex(a), next.vertex(a)) || !same_point(t.vertex(b), next.vertex(b)) {
            return Err(Error::TessellationError(format!(
                "tiles across side {i} do not share its endpoints"
            )));
        }
        let frame = Isometry::to_origin(&midpoint(t.vertex(a), t.vertex(b)));
        let k = |p: &Point| frame.apply(p).klein();
        let (ka, kb) = (k(t.vertex(a)), k(t.vertex(b)));
        let c = next_index(b);
        let here = orient(ka, kb, k(t.vertex(c)));
        let there = orient(ka, kb, k(next.vertex(c)));
        if here * there >= 0.0 {
            return Err(Error::TessellationError(format!(
                "tiles across side {i} are not on opposite sides"
            )));
        }
        Ok(next)
    }

    /// The four tiles around vertex `v` of `t`, starting with `t`.
    pub fn fan(&self, t: &Tile, v: usize) -> Result<[Tile; 4]> {
        let t1 = self.adjacent(t, v)?;
        let t2 = self.adjacent(&t1, prev_index(v))?;
        let t3 = self.adjacent(&t2, v)?;
        let back = self.adjacent(&t3, prev_index(v))?;
        if !back.same_as(t) {
            return Err(Error::TessellationError(format!(
                "walk around vertex {v} does not close"
            )));
        }
        Ok([t.clone(), t1, t2, t3])
    }

    /// Sum of the four tile angles at vertex `v` of `t`.
    pub fn vertex_angle_sum(&self, t: &Tile, v: usize) -> Result<f64> {
        Ok(self
            .fan(t, v)?
            .iter()
            .map(|s| {
                crate::hyperbolic::angle_at(
                    s.vertex(v),
                    s.vertex(prev_index(v)),
                    s.vertex(next_index(v)),
                )
            })
            .sum())
    }

    /// Traces the geodesic from `w_j` to `q`.
    pub fn trace_segment(&self, s: &Segment) -> Result<Trace> {
        let j = (1..=6)
            .find(|&j| same_point(self.hol.lift(j), &s.p))
            .ok_or_else(|| {
                Error::InvalidQuery("segment does not start at a base cone-point lift".into())
            })?;
        self.trace_from(&self.base(), j, &s.q, TRACE_BUDGET)
    }

    /// Traces the geodesic from vertex `v` of `start` to `q`, a lift of a cone point.
    pub fn trace_from(&self, start: &Tile, v: usize, q: &Point, budget: usize) -> Result<Trace> {
        let p = *start.vertex(v);
        if same_point(&p, q) {
            return Err(Error::InvalidQuery("segment has zero length".into()));
        }
        let frame = Isometry::to_origin(&midpoint(&p, q));
        let kl = |x: &Point| frame.apply(x).klein();
        let kp = kl(&p);
        let kq = kl(q);
        let fan = self.fan(start, v)?;

        let (prev, next) = (prev_index(v), next_index(v));
        let mut chosen = None;
        let mut near_side = false;
        for (idx, t) in fan.iter().enumerate() {
            for (nb, w) in [(prev, t.vertex(prev)), (next, t.vertex(next))] {
                let kw = kl(w);
                let d = [kw[0] - kp[0], kw[1] - kp[1]];
                let e = [kq[0] - kp[0], kq[1] - kp[1]];
                let sin = (d[0] * e[1] - d[1] * e[0]) / (d[0].hypot(d[1]) * e[0].hypot(e[1]));
                near_side |= sin.abs() < NEAR_VERTEX;
                if sin.abs() < VERTEX_TOL && d[0] * e[0] + d[1] * e[1] > 0.0 {
                    if same_point(w, q) {
                        return Ok(Trace {
                            side: Side::H,
                            crossings: Vec::new(),
                            pieces: Vec::new(),
                            end_vertex: nb,
                            fan_index: idx,
                        });
                    }
                    return Err(Error::DegenerateIncidence(
                        "geodesic runs along a necklace side".into(),
                    ));
                }
            }
            let ka = kl(t.vertex(prev));
            let kb = kl(t.vertex(next));
            let o = orient(kp, ka, kb);
            if orient(kp, ka, kq) * o > 0.0 && orient(kp, kq, kb) * o > 0.0 {
                chosen = Some(idx);
                break;
            }
        }
        let fan_index = match chosen {
            Some(i) => i,
            None if near_side => {
                return Err(Error::DegenerateIncidence(
                    "geodesic leaves along a necklace side".into(),
                ))
            }
            None => {
                return Err(Error::TessellationError(
                    "no tile around the start vertex contains the geodesic".into(),
                ))
            }
        };
        let side = fan[fan_index].parity;

        let mut tile = fan[fan_index].clone();
        let mut entry_side: Option<usize> = None;
        let mut entry = kp;
        let mut crossings = Vec::new();
        let mut pieces = Vec::new();
        let to_base = |tile: &Tile, k: [f64; 2]| -> Result<Point> {
            let x = frame.inverse().apply(&Point::from_klein(k)?);
            Ok(tile.g.inverse().apply(&x))
        };
        loop {
            if let Some(end) = (1..=6).find(|&k| same_point(tile.vertex(k), q)) {
                pieces.push(Piece {
                    parity: tile.parity,
                    from: to_base(&tile, entry)?,
                    to: tile.g.inverse().apply(q),
                });
                return Ok(Trace {
                    side,
                    crossings,
                    pieces,
                    end_vertex: end,
                    fan_index,
                });
            }
            let kv: Vec<[f64; 2]> = tile.vertices.iter().map(kl).collect();
            let sd: Vec<f64> = kv.iter().map(|&x| side_of(kp, kq, x)).collect();
            let excluded = |s: usize| match entry_side {
                None => s == v || s == prev,
                Some(e) => s == e,
            };
            for k in 1..=6 {
                if entry_side.is_none() && k == v {
                    continue;
                }
                if sd[k - 1].abs() < VERTEX_TOL {
                    return Err(Error::DegenerateIncidence(format!(
                        "geodesic passes through a lift of cone point {k}"
                    )));
                }
            }
            let exits: Vec<usize> = (1..=6)
                .filter(|&s| !excluded(s) && sd[s - 1] * sd[next_index(s) - 1] < 0.0)
                .collect();
            if exits.len() != 1 {
                if sd.iter().any(|x| x.abs() < NEAR_VERTEX) {
                    return Err(Error::DegenerateIncidence(
                        "geodesic passes too close to a cone-point lift".into(),
                    ));
                }
                return Err(Error::TessellationError(format!(
                    "geodesic leaves a tile through {} sides",
                    exits.len()
                )));
            }
            let s = exits[0];
            let (a, b) = (kv[s - 1], kv[next_index(s) - 1]);
            let u = sd[s - 1] / (sd[s - 1] - sd[next_index(s) - 1]);
            let exit = [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])];
            pieces.push(Piece {
                parity: tile.parity,
                from: to_base(&tile, entry)?,
                to: to_base(&tile, exit)?,
            });
            crossings.push(s as u8);
            if crossings.len() > budget {
                return Err(Error::DepthExceeded { budget });
            }
            tile = self.adjacent(&tile, s)?;
            entry_side = Some(s);
            entry = exit;
        }
    }

    /// Realizes a label by walking tiles, then checks it against the traced geodesic.
    pub fn develop_label(&self, label: &ArcLabel) -> Result<ArcInstance> {
        let (j, k) = (label.j, label.k);
        if let Some(i) = label.necklace_index() {
            let end = if i == 6 { 6 } else { i + 1 };
            return Ok(ArcInstance {
                label: label.clone(),
                length: self.hol.necklace_length(i),
                endpoint_lift: *self.hol.lift(end),
                endpoint_word: Isometry::IDENTITY,
                verified: true,
                simple: true,
                converged: true,
                pieces: Vec::new(),
            });
        }
        let mut tile = self.start_tile(j, label.side);
        for &s in &label.crossings {
            tile = self.adjacent(&tile, s as usize)?;
        }
        let endpoint = *tile.vertex(k);
        let word = self.vertex_word(&tile, k);
        let length = distance(self.hol.lift(j), &endpoint)?;
        let budget = label.crossings.len() + 2;
        let (verified, simple, pieces) = match self.trace_from(&self.base(), j, &endpoint, budget) {
            Ok(tr) => {
                let canonical = matches!(tr.fan_index, 0 | 3);
                let ok = canonical
                    && tr.side == label.side
                    && tr.crossings == label.crossings
                    && tr.end_vertex == k;
                let simple = pieces_simple(&tr.pieces).unwrap_or(false);
                (ok, simple, tr.pieces)
            }
            Err(Error::DegenerateIncidence(_)) | Err(Error::DepthExceeded { .. }) => {
                (false, false, Vec::new())
            }
            Err(e) => return Err(e),
        };
        Ok(ArcInstance {
            label: label.clone(),
            length,
            endpoint_lift: endpoint,
            endpoint_word: word,
            verified,
            simple,
            converged: true,
            pieces,
        })
    }

    /// Tiles reachable from the two start tiles at `w_j` by paths of at most `depth`
    /// crossings, each with its crossing path. Paths never recross the side just
    /// crossed and never start across a side at `w_j`.
    fn tile_paths(&self, j: usize, depth: usize, max_tiles: usize) -> Result<Vec<(Tile, usize)>> {
        let mut out = Vec::new();
        let mut queue: VecDeque<(Tile, Option<usize>, usize)> = VecDeque::new();
        queue.push_back((self.start_tile(j, Side::H), None, 0));
        queue.push_back((self.start_tile(j, Side::HBar), None, 0));
        while let Some((tile, last, d)) = queue.pop_front() {
            if out.len() >= max_tiles {
                return Err(Error::BudgetExceeded { budget: max_tiles });
            }
            if d < depth {
                for s in 1..=6 {
                    if Some(s) == last || (last.is_none() && (s == j || s == prev_index(j))) {
                        continue;
                    }
                    queue.push_back((self.adjacent(&tile, s)?, Some(s), d + 1));
                }
            }
            out.push((tile, d));
        }
        Ok(out)
    }

    fn arcs_from(&self, j: usize, targets: &[usize], bounds: &Bounds) -> Result<Vec<ArcInstance>> {
        let tiles = self.tile_paths(j, bounds.depth(), bounds.max_tiles)?;
        let base = self.base();
        let mut found: BTreeMap<ArcLabel, ArcInstance> = BTreeMap::new();
        for (tile, _) in &tiles {
            for &k in targets {
                let q = *tile.vertex(k);
                let tr = match self.trace_from(&base, j, &q, bounds.max_cross) {
                    Ok(tr) => tr,
                    Err(Error::DegenerateIncidence(_)) | Err(Error::DepthExceeded { .. }) => {
                        continue
                    }
                    Err(e) => return Err(e),
                };
                let label = ArcLabel::new(j, k, tr.side, tr.crossings.clone())?;
                if found.contains_key(&label) {
                    continue;
                }
                if !pieces_simple(&tr.pieces).unwrap_or(false) {
                    continue;
                }
                let mut word = self.vertex_word(tile, k);
                if matches!(tr.fan_index, 1 | 2) {
                    word = self.hol.rotation(j).compose(&word);
                }
                let endpoint = word.apply(self.hol.lift(k));
                let length = distance(self.hol.lift(j), &endpoint)?;
                let converged = label.crossings.len() + 2 <= bounds.max_word;
                found.insert(
                    label.clone(),
                    ArcInstance {
                        label,
                        length,
                        endpoint_lift: endpoint,
                        endpoint_word: word,
                        verified: true,
                        simple: true,
                        converged,
                        pieces: tr.pieces,
                    },
                );
            }
        }
        Ok(found.into_values().collect())
    }

    /// Simple arcs between `omega_j` and `omega_k` with at most `max_cross` crossings,
    /// sorted by length and then label.
    pub fn enumerate_arcs(&self, j: usize, k: usize, bounds: &Bounds) -> Result<Vec<ArcInstance>> {
        if j == k || !(1..=6).contains(&j) || !(1..=6).contains(&k) {
            return Err(Error::InvalidQuery(format!("cone pair ({j}, {k})")));
        }
        let mut arcs = self.arcs_from(j.min(k), &[j.max(k)], bounds)?;
        sort_arcs(&mut arcs);
        Ok(arcs)
    }

    /// Simple arcs between all pairs of distinct cone points.
    pub fn enumerate_all(&self, bounds: &Bounds) -> Result<Vec<ArcInstance>> {
        let per_start: Vec<Result<Vec<ArcInstance>>> = (1..=5usize)
            .into_par_iter()
            .map(|j| {
                let targets: Vec<usize> = (j + 1..=6).collect();
                self.arcs_from(j, &targets, bounds)
            })
            .collect();
        let mut arcs = Vec::new();
        for r in per_start {
            arcs.extend(r?);
        }
        sort_arcs(&mut arcs);
        Ok(arcs)
    }

    /// Tiles within `depth` crossings of the base tile, without repeats.
    pub fn tiles_within(&self, depth: usize) -> Result<Vec<Tile>> {
        let mut out: Vec<Tile> = Vec::new();
        let mut frontier = vec![self.base()];
        out.push(self.base());
        for _ in 0..depth {
            let mut next = Vec::new();
            for t in &frontier {
                for s in 1..=6 {
                    let n = self.adjacent(t, s)?;
                    if !out.iter().any(|u| u.same_as(&n)) {
                        out.push(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

pub(crate) fn sort_arcs(arcs: &mut [ArcInstance]) {
    arcs.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.label.cmp(&b.label))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::{build, PantsFoldParams};

    fn tiling() -> Tiling {
        let h = build(&PantsFoldParams::new([1.0, 1.3, 0.8], [0.2, -0.5, 0.1]).unwrap()).unwrap();
        Tiling::new(&h).unwrap()
    }

    #[test]
    fn label_parsing() {
        for text in ["gamma6", "beta24", "betabar15^6", "beta36^145"] {
            let l: ArcLabel = text.parse().unwrap();
            assert_eq!(l.to_string(), text);
        }
        for text in [
            "gamma7",
            "beta2",
            "betabar15^",
            "beta11",
            "delta12",
            "beta13^33",
        ] {
            assert!(text.parse::<ArcLabel>().is_err(), "{text}");
        }
        assert_eq!("beta12".parse::<ArcLabel>().unwrap(), ArcLabel::necklace(1));
    }

    #[test]
    fn label_validation() {
        assert!(ArcLabel::new(3, 3, Side::H, vec![]).is_err());
        assert!(ArcLabel::new(1, 4, Side::H, vec![6, 6]).is_err());
        assert!(ArcLabel::new(4, 2, Side::H, vec![]).is_err());
        let g = ArcLabel::new(1, 6, Side::HBar, vec![]).unwrap();
        assert_eq!(g, ArcLabel::necklace(6));
        assert_eq!(g.to_string(), "gamma6");
        let b = ArcLabel::new(2, 5, Side::HBar, vec![6]).unwrap();
        assert_eq!(b.to_string(), "betabar25^6");
    }

    #[test]
    fn hbar_base_shares_side_six() {
        let t = tiling();
        let hb = t.hbar_base();
        let h = t.holonomy();
        assert!(same_point(hb.vertex(1), h.lift(1)));
        assert!(same_point(hb.vertex(6), h.lift(6)));
        let adj = t.adjacent(&t.base(), 6).unwrap();
        assert!(adj.same_as(&hb));
    }

    #[test]
    fn adjacency_is_an_involution() {
        let t = tiling();
        for s in 1..=6 {
            let a = t.adjacent(&t.base(), s).unwrap();
            assert_eq!(a.parity, Side::HBar);
            let back = t.adjacent(&a, s).unwrap();
            assert!(back.same_as(&t.base()));
            assert!(back.g.approx_eq(&Isometry::IDENTITY, 1e-9));
        }
    }

    #[test]
    fn necklace_side_traces_empty() {
        let t = tiling();
        let h = t.holonomy();
        let tr = t
            .trace_segment(&Segment::new(*h.lift(2), *h.lift(3)))
            .unwrap();
        assert_eq!(tr.side, Side::H);
        assert!(tr.crossings.is_empty());
    }

    #[test]
    fn develop_round_trip() {
        let t = tiling();
        let label = ArcLabel::new(4, 5, Side::H, vec![6]).unwrap();
        let arc = t.develop_label(&label).unwrap();
        assert!(arc.verified);
        let tr = t
            .trace_segment(&Segment::new(*t.holonomy().lift(4), arc.endpoint_lift))
            .unwrap();
        assert_eq!((tr.side, tr.crossings), (Side::H, vec![6]));
    }

    #[test]
    fn enumerate_rejects_equal_endpoints() {
        let t = tiling();
        assert!(matches!(
            t.enumerate_arcs(2, 2, &Bounds::default()),
            Err(Error::InvalidQuery(_))
        ));
    }
}
