//! The 27 length inequalities, domain membership, bounded minimality verification,
//! necklace completion and reduction of a marking into the domain.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hyperbolic::{distance, orient, Isometry, Point, METRIC_TOL};
use crate::orbifold::{build_marking, normalized_marking, params_of, Holonomy};
use crate::tessellation::{crossing_number, ArcInstance, ArcLabel, Bounds, Side, Tiling};

/// One inequality `l(gamma_lhs) <= l(rhs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub group: u8,
    pub lhs: usize,
    pub rhs: ArcLabel,
}

fn label(j: usize, k: usize, side: Side, crossings: &[u8]) -> ArcLabel {
    ArcLabel::new(j, k, side, crossings.to_vec()).expect("table labels are valid")
}

/// The 27 inequalities, grouped by the necklace arc on the left.
pub fn theorem1_table() -> Vec<Inequality> {
    let mut out = Vec::with_capacity(27);
    for i in 2..=5 {
        out.push(Inequality {
            group: 1,
            lhs: 1,
            rhs: ArcLabel::necklace(i),
        });
    }
    for i in 1..=2 {
        for j in 3..=6 {
            match (i, j) {
                (2, 3) => {}
                (1, 6) => out.push(Inequality {
                    group: 2,
                    lhs: 2,
                    rhs: ArcLabel::necklace(6),
                }),
                _ => {
                    for side in [Side::H, Side::HBar] {
                        out.push(Inequality {
                            group: 2,
                            lhs: 2,
                            rhs: label(i, j, side, &[]),
                        });
                    }
                }
            }
        }
    }
    for side in [Side::H, Side::HBar] {
        out.push(Inequality {
            group: 2,
            lhs: 2,
            rhs: label(2, 5, side, &[6]),
        });
    }
    for j in 5..=6 {
        for side in [Side::H, Side::HBar] {
            out.push(Inequality {
                group: 3,
                lhs: 3,
                rhs: label(3, j, side, &[]),
            });
        }
    }
    for side in [Side::H, Side::HBar] {
        out.push(Inequality {
            group: 3,
            lhs: 3,
            rhs: label(3, 4, side, &[6]),
        });
    }
    for side in [Side::H, Side::HBar] {
        out.push(Inequality {
            group: 4,
            lhs: 4,
            rhs: label(4, 6, side, &[]),
        });
    }
    out
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub inequality: Inequality,
    pub lhs_len: f64,
    pub rhs_len: f64,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct MaskitReport {
    pub entries: Vec<EntryReport>,
    pub in_domain: bool,
    pub tol: f64,
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

impl MaskitReport {
    /// Entries holding with equality.
    pub fn tight(&self) -> Vec<&EntryReport> {
        self.entries
            .iter()
            .filter(|e| e.margin.abs() <= self.tol)
            .collect()
    }

    pub fn worst_margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,lhs,rhs_label,lhs_len,rhs_len,margin\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},gamma{},{},{},{},{}",
                e.inequality.group,
                e.inequality.lhs,
                e.inequality.rhs,
                f17(e.lhs_len),
                f17(e.rhs_len),
                f17(e.margin)
            );
        }
        let _ = writeln!(out, "in_domain,{}", self.in_domain);
        out
    }
}

pub fn check(h: &Holonomy) -> Result<MaskitReport> {
    check_with_tol(h, METRIC_TOL)
}

/// Evaluates the 27 margins `l(rhs) - l(gamma_lhs)`.
pub fn check_with_tol(h: &Holonomy, tol: f64) -> Result<MaskitReport> {
    let tiling = Tiling::new(h)?;
    let mut entries = Vec::with_capacity(27);
    for inequality in theorem1_table() {
        let arc = tiling.develop_label(&inequality.rhs)?;
        if !arc.verified {
            return Err(Error::DomainCheckError(format!(
                "{} is not realized by its geodesic",
                inequality.rhs
            )));
        }
        let lhs_len = h.necklace_length(inequality.lhs);
        entries.push(EntryReport {
            lhs_len,
            rhs_len: arc.length,
            margin: arc.length - lhs_len,
            inequality,
        });
    }
    let in_domain = entries.iter().all(|e| e.margin >= -tol);
    Ok(MaskitReport {
        entries,
        in_domain,
        tol,
    })
}

/// Worst competitor for one necklace arc of the standard chain.
#[derive(Clone, Debug)]
pub struct StageReport {
    pub m: usize,
    pub gamma_len: f64,
    pub worst_margin: f64,
    pub witness: Option<ArcLabel>,
    pub competitors: usize,
}

#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub stages: Vec<StageReport>,
    pub verified: bool,
    pub bounds: Bounds,
    pub arcs_examined: usize,
}

impl MinimalityReport {
    pub fn worst_margin(&self) -> f64 {
        self.stages
            .iter()
            .map(|s| s.worst_margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,gamma_len,worst_margin,witness,competitors\n");
        for s in &self.stages {
            let witness = s
                .witness
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.m,
                f17(s.gamma_len),
                f17(s.worst_margin),
                witness,
                s.competitors
            );
        }
        let _ = writeln!(
            out,
            "bounds,max_word={},max_cross={}",
            self.bounds.max_word, self.bounds.max_cross
        );
        let _ = writeln!(out, "verified,{}", self.verified);
        out
    }
}

/// Whether `alpha` may replace `gamma_m` in the standard chain: it shares exactly one
/// endpoint with `gamma_{m-1}`, avoids `gamma_1..gamma_{m-2}`, and crosses none of
/// `gamma_1..gamma_{m-1}`.
pub fn is_competitor(m: usize, alpha: &ArcLabel) -> bool {
    if *alpha == ArcLabel::necklace(m) {
        return false;
    }
    if m == 1 {
        return true;
    }
    let ends = alpha.endpoints();
    let shared = ends.iter().filter(|&&c| c == m - 1 || c == m).count();
    if shared != 1 {
        return false;
    }
    if m >= 3 && ends.iter().any(|&c| c < m - 1) {
        return false;
    }
    if m >= 3 && ends.contains(&(m - 1)) {
        return false;
    }
    alpha.crossings().iter().all(|&c| c as usize >= m)
}

/// Compares each `gamma_m` (`m = 1..4`) against every enumerated competitor.
pub fn verify_minimality(h: &Holonomy, bounds: &Bounds) -> Result<MinimalityReport> {
    let tiling = Tiling::new(h)?;
    let arcs = tiling.enumerate_all(bounds)?;
    let mut stages = Vec::with_capacity(4);
    for m in 1..=4 {
        let gamma_len = h.necklace_length(m);
        let mut worst = f64::INFINITY;
        let mut witness = None;
        let mut competitors = 0;
        for a in arcs.iter().filter(|a| is_competitor(m, &a.label)) {
            competitors += 1;
            let margin = a.length - gamma_len;
            if margin < worst {
                worst = margin;
                witness = Some(a.label.clone());
            }
        }
        stages.push(StageReport {
            m,
            gamma_len,
            worst_margin: worst,
            witness,
            competitors,
        });
    }
    let verified = stages.iter().all(|s| s.worst_margin >= -METRIC_TOL);
    Ok(MinimalityReport {
        stages,
        verified,
        bounds: *bounds,
        arcs_examined: arcs.len(),
    })
}

/// An ordered chain: `cones[i]` is the cone point (in the current labelling) playing
/// the role of `omega'_{i+1}`, and `arcs[i]` joins `cones[i]` to `cones[i+1]`.
#[derive(Clone, Debug)]
pub struct ChainSpec {
    pub cones: Vec<usize>,
    pub arcs: Vec<ArcInstance>,
}

impl ChainSpec {
    /// The standard chain `gamma_1..gamma_4` of the marking.
    pub fn standard(tiling: &Tiling) -> Result<ChainSpec> {
        let arcs = (1..=4)
            .map(|i| tiling.develop_label(&ArcLabel::necklace(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainSpec {
            cones: (1..=5).collect(),
            arcs,
        })
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.length).collect()
    }
}

fn disjoint_from_all(alpha: &ArcInstance, others: &[&ArcInstance]) -> Result<bool> {
    for o in others {
        if o.label == alpha.label || crossing_number(alpha, o)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn joins(a: &ArcInstance, x: usize, y: usize) -> bool {
    let e = a.endpoints();
    (e[0] == x && e[1] == y) || (e[0] == y && e[1] == x)
}

fn unique_candidate<'a>(
    arcs: &'a [ArcInstance],
    x: usize,
    y: usize,
    avoid: &[&ArcInstance],
    what: &str,
) -> Result<&'a ArcInstance> {
    let mut found = Vec::new();
    for a in arcs.iter().filter(|a| joins(a, x, y)) {
        if disjoint_from_all(a, avoid).unwrap_or(false) {
            found.push(a);
        }
    }
    match found.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::CompletionError(format!("no candidate for {what}"))),
        many => Err(Error::CompletionError(format!(
            "{} candidates for {what}",
            many.len()
        ))),
    }
}

/// Extends a 4-chain to a necklace by its unique fifth and sixth arcs.
pub fn complete_necklace(tiling: &Tiling, chain: &ChainSpec, bounds: &Bounds) -> Result<ChainSpec> {
    let arcs = tiling.enumerate_all(bounds)?;
    complete_from(&arcs, chain)
}

fn complete_from(arcs: &[ArcInstance], chain: &ChainSpec) -> Result<ChainSpec> {
    if chain.cones.len() != 5 || chain.arcs.len() != 4 {
        return Err(Error::CompletionError(
            "expected a chain of length 4".into(),
        ));
    }
    let c6 = (1..=6)
        .find(|c| !chain.cones.contains(c))
        .ok_or_else(|| Error::CompletionError("chain repeats a cone point".into()))?;
    let avoid: Vec<&ArcInstance> = chain.arcs.iter().collect();
    let g5 = unique_candidate(arcs, chain.cones[4], c6, &avoid, "gamma5")?;
    let mut avoid6 = avoid.clone();
    avoid6.push(g5);
    let g6 = unique_candidate(arcs, c6, chain.cones[0], &avoid6, "gamma6")?;
    let mut cones = chain.cones.clone();
    cones.push(c6);
    let mut out = chain.arcs.clone();
    out.push(g5.clone());
    out.push(g6.clone());
    Ok(ChainSpec { cones, arcs: out })
}

fn other_end(a: &ArcInstance, c: usize) -> usize {
    let e = a.endpoints();
    if e[0] == c {
        e[1]
    } else {
        e[0]
    }
}

/// Greedy minimal chain: the shortest arc, then repeatedly the shortest arc that
/// extends the chain. `arcs` must be sorted by length and label.
fn greedy_chain(arcs: &[ArcInstance]) -> Result<ChainSpec> {
    let fail = |m: usize| Error::CompletionError(format!("no arc extends the chain at step {m}"));
    let g1 = arcs.first().ok_or_else(|| fail(1))?;
    let g2 = arcs
        .iter()
        .find(|a| {
            let shared = a
                .endpoints()
                .iter()
                .filter(|&&c| g1.shares_endpoint(c))
                .count();
            shared == 1 && disjoint_from_all(a, &[g1]).unwrap_or(false)
        })
        .ok_or_else(|| fail(2))?;
    let c2 = *g2
        .endpoints()
        .iter()
        .find(|&&c| g1.shares_endpoint(c))
        .expect("shared endpoint");
    let mut cones = vec![other_end(g1, c2), c2, other_end(g2, c2)];
    let mut chain = vec![g1.clone(), g2.clone()];
    for m in 3..=4 {
        let tip = *cones.last().expect("nonempty");
        let used = cones.clone();
        let refs: Vec<&ArcInstance> = chain.iter().collect();
        let next = arcs
            .iter()
            .find(|a| {
                a.shares_endpoint(tip)
                    && !used[..used.len() - 1].contains(&other_end(a, tip))
                    && other_end(a, tip) != tip
                    && disjoint_from_all(a, &refs).unwrap_or(false)
            })
            .ok_or_else(|| fail(m))?;
        cones.push(other_end(next, tip));
        chain.push(next.clone());
    }
    Ok(ChainSpec { cones, arcs: chain })
}

/// Rebuilds the marking whose necklace is the given 6-chain, walking lifts of the
/// arcs through the plane so that consecutive sides turn left.
fn rebuild(tiling: &Tiling, necklace: &ChainSpec) -> Result<Holonomy> {
    let h = tiling.holonomy();
    let cones = &necklace.cones;
    let lift_word = |arc: &ArcInstance, from: usize| {
        if arc.label.j() == from {
            arc.endpoint_word
        } else {
            arc.endpoint_word.inverse()
        }
    };
    let mut elems: Vec<Isometry> = vec![Isometry::IDENTITY];
    let point = |f: &Isometry, c: usize| f.apply(h.lift(c));
    for i in 0..6 {
        let from = cones[i];
        let to = cones[(i + 1) % 6];
        let f = *elems.last().expect("nonempty");
        let e = lift_word(&necklace.arcs[i], from);
        let plain = f.compose(&e);
        if i == 0 {
            elems.push(plain);
            continue;
        }
        let turned = f.compose(h.rotation(from)).compose(&e);
        let cur = point(&f, from);
        let prev = point(&elems[i - 1], cones[i - 1]);
        let frame = Isometry::to_origin(&cur);
        let k = |p: &Point| frame.apply(p).klein();
        let left = |g: &Isometry| orient(k(&prev), k(&cur), k(&point(g, to)));
        let (lp, lt) = (left(&plain), left(&turned));
        let chosen = match (lp > 0.0, lt > 0.0) {
            (true, false) => plain,
            (false, true) => turned,
            _ => {
                return Err(Error::CompletionError(format!(
                    "ambiguous turn at cone point {from}"
                )))
            }
        };
        elems.push(chosen);
    }
    let start = point(&elems[0], cones[0]);
    let end = point(&elems[6], cones[0]);
    if distance(&start, &end)? > 1e-7 {
        return Err(Error::CompletionError("necklace lifts do not close".into()));
    }
    let rotations: [Isometry; 6] =
        std::array::from_fn(|i| h.rotation(cones[i]).conjugate_by(&elems[i]));
    let lifts: [Point; 6] = std::array::from_fn(|i| point(&elems[i], cones[i]));
    normalized_marking(&Holonomy::from_parts(rotations, lifts)?.recentred())
}

/// One greedy remarking step.
pub fn remark(h: &Holonomy, bounds: &Bounds) -> Result<Holonomy> {
    let tiling = Tiling::new(h)?;
    let arcs = tiling.enumerate_all(bounds)?;
    let chain = greedy_chain(&arcs)?;
    let necklace = complete_from(&arcs, &chain)?;
    rebuild(&tiling, &necklace)
}

/// Lengths of `gamma_1..gamma_4` in chain order; greedy remarking never increases
/// them lexicographically.
pub fn chain_signature(h: &Holonomy) -> [f64; 4] {
    [1, 2, 3, 4].map(|i| h.necklace_length(i))
}

fn shorter(a: &[f64; 4], b: &[f64; 4]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < &(y - METRIC_TOL) {
            return true;
        }
        if x > &(y + METRIC_TOL) {
            return false;
        }
    }
    false
}

/// One remarking step at every crossing bound up to the given one, keeping the
/// shortest chain. Low bounds only look at tiles near the base hexagons, so they still
/// work on long necklaces where deep tiles lose too much precision.
fn remark_step(h: &Holonomy, bounds: &Bounds) -> Result<Holonomy> {
    let mut best: Option<Holonomy> = None;
    let mut last_err = None;
    for c in 0..=bounds.max_cross {
        let b = Bounds {
            max_cross: c,
            ..*bounds
        };
        match remark(h, &b) {
            Ok(next) => {
                let better = best
                    .as_ref()
                    .is_none_or(|cur| shorter(&chain_signature(&next), &chain_signature(cur)));
                if better {
                    best = Some(next);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one bound was tried"))
}

/// The marking obtained by Dehn twists along the odd necklace curves that brings every
/// fold offset into one period. Even necklace arcs shrink accordingly.
pub fn untwisted(h: &Holonomy) -> Result<Holonomy> {
    let p = params_of(h)?;
    let out = build_marking(&p.wrapped())?;
    if shorter(&chain_signature(h), &chain_signature(&out)) {
        return Ok(h.clone());
    }
    Ok(out)
}

/// Remarks greedily until the marking passes `check`, or fails after `max_iter`
/// steps with the best marking seen.
pub fn reduce(h: &Holonomy, bounds: &Bounds, max_iter: usize) -> Result<Holonomy> {
    if matches!(check(h), Ok(r) if r.in_domain) {
        return Ok(h.clone());
    }
    let mut current = untwisted(h).unwrap_or_else(|_| h.clone());
    let mut best = (chain_signature(h), h.clone());
    for iter in 0..=max_iter {
        if matches!(check(&current), Ok(r) if r.in_domain) {
            return Ok(current);
        }
        if iter == max_iter {
            break;
        }
        let next = match remark_step(&current, bounds) {
            Ok(next) => next,
            Err(_) => break,
        };
        let sig = chain_signature(&next);
        if shorter(&best.0, &sig) {
            // the greedy chain got longer: no further progress to expect
            break;
        }
        if shorter(&sig, &best.0) {
            best = (sig, next.clone());
        }
        current = next;
    }
    Err(Error::ReductionFailure {
        iterations: max_iter,
        best: Box::new(best.1),
    })
}
