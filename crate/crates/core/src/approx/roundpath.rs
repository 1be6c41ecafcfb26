//! Edge events of geodesics in the truncated tessellation, round-paths of
//! tile balls, and the matching equations between adjacent balls.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::currents::DiscreteCurrent;
use crate::error::{Error, Result};
use crate::fuchsian::trace::trace_geodesic;
use crate::fuchsian::{EdgeKind, EdgeRef, HorocycleParameter, Letter, SurfacePreset, Word};
use crate::geom::mobius::mobius_f64;
use crate::geom::plane::intersect_fgeod;
use crate::geom::{FGeod, Geodesic, Horoball, Pt};

/// Relative tolerance for a crossing to count as a corner of F_λ.
pub const CORNER_TOL: f64 = 1e-9;
/// Input weights below this are dropped before extraction.
pub const INPUT_FLOOR: f64 = 1e-9;

/// An ordered edge sequence, identified with its reversal (stored in the
/// lexicographically smaller orientation).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RoundPath {
    pub edges: Vec<EdgeRef>,
}

impl RoundPath {
    /// Canonical orientation; returns whether the input was reversed.
    pub fn canonical(edges: Vec<EdgeRef>) -> (RoundPath, bool) {
        let mut rev = edges.clone();
        rev.reverse();
        if rev < edges {
            (RoundPath { edges: rev }, true)
        } else {
            (RoundPath { edges }, false)
        }
    }

    pub fn translate(&self, g: &Word) -> Vec<EdgeRef> {
        self.edges.iter().map(|e| EdgeRef { tile: g.mul(&e.tile), kind: e.kind }).collect()
    }

    pub fn describe(&self, p: &SurfacePreset) -> String {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let (c, k) = match e.kind {
                    EdgeKind::Wall(k) => ('W', k),
                    EdgeKind::Horo(v) => ('H', v),
                };
                format!("{}:{c}{k}", p.word_str(&e.tile))
            })
            .collect();
        format!("[{}]", parts.join(" "))
    }
}

/// A geodesic realizing a round-path, with its crossing point on each edge
/// (in the stored orientation).
#[derive(Clone, Debug)]
pub struct Realizer {
    pub geodesic: Geodesic,
    pub points: Vec<Pt>,
}

/// One matching equation: `Σ coeff · x[path] = 0` for the restriction class
/// `j` between the identity ball and the ball at `direction`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equation {
    pub direction: Letter,
    pub j: RoundPath,
    pub coeffs: Vec<(usize, i64)>,
}

/// Cylinder weights `μ̄(p)` over round-paths of the identity ball, with the
/// matching system they satisfy.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub r: usize,
    pub lambda: HorocycleParameter,
    pub paths: Vec<RoundPath>,
    pub weights: Vec<f64>,
    pub realizers: Vec<Realizer>,
    pub equations: Vec<Equation>,
}

impl WeightTable {
    /// Largest `|Σ coeff · x|` over the matching equations.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.equations
            .iter()
            .map(|e| e.coeffs.iter().map(|&(i, c)| c as f64 * x[i]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    pub fn residual_int(&self, x: &[u64]) -> i128 {
        self.equations
            .iter()
            .map(|e| e.coeffs.iter().map(|&(i, c)| c as i128 * x[i] as i128).sum::<i128>().abs())
            .max()
            .unwrap_or(0)
    }
}

/// Tiles an edge belongs to.
pub fn edge_tiles(p: &SurfacePreset, e: &EdgeRef) -> Vec<Word> {
    match e.kind {
        EdgeKind::Wall(k) => vec![e.tile.clone(), e.tile.push(p.walls[k].letter)],
        EdgeKind::Horo(_) => vec![e.tile.clone()],
    }
}

pub fn has_edge_of(p: &SurfacePreset, edges: &[EdgeRef], t: &Word) -> bool {
    edges.iter().any(|e| edge_tiles(p, e).contains(t))
}

/// Position along the geodesic from `x` to `y`.
fn param(x: f64, y: f64, z: Pt) -> f64 {
    if y.is_infinite() {
        return z.y.ln();
    }
    if x.is_infinite() {
        return -z.y.ln();
    }
    let (nr, ni) = (z.x - x, z.y);
    let (dr, di) = (y - z.x, -z.y);
    0.5 * ((nr * nr + ni * ni) / (dr * dr + di * di)).ln()
}

fn horocycle_points(b: &Horoball, g: &FGeod) -> Vec<Pt> {
    match (b.circle(), *g) {
        (None, FGeod::Vertical(u)) => vec![Pt::new(u, b.height)],
        (None, FGeod::Circle { c, r, .. }) => {
            let h = b.height;
            if h >= r {
                return vec![];
            }
            let w = ((r - h) * (r + h)).sqrt();
            vec![Pt::new(c - w, h), Pt::new(c + w, h)]
        }
        (Some((cx, cy, rad)), FGeod::Vertical(u)) => {
            let dx = u - cx;
            let s = (rad - dx) * (rad + dx);
            if s <= 0.0 {
                return vec![];
            }
            let s = s.sqrt();
            [cy - s, cy + s].iter().filter(|&&y| y > 0.0).map(|&y| Pt::new(u, y)).collect()
        }
        (Some((cx, cy, rad)), FGeod::Circle { c, r, .. }) => {
            // circles (x − c)² + y² = r² and (x − cx)² + (y − cy)² = rad²
            let d2 = (cx - c).powi(2) + cy * cy;
            let d = d2.sqrt();
            if d >= r + rad || d <= (r - rad).abs() {
                return vec![];
            }
            let a = (r * r - rad * rad + d2) / (2.0 * d);
            let h = (r * r - a * a).max(0.0).sqrt();
            let (ux, uy) = ((cx - c) / d, cy / d);
            let (mx, my) = (c + a * ux, a * uy);
            [Pt::new(mx - h * uy, my + h * ux), Pt::new(mx + h * uy, my - h * ux)]
                .into_iter()
                .filter(|z| z.y > 0.0)
                .collect()
        }
    }
}

/// Distance-like gap of `z` from the horocycle, relative to its size.
fn horocycle_gap(b: &Horoball, z: Pt) -> f64 {
    match b.circle() {
        None => (b.height - z.y) / b.height,
        Some((cx, cy, rad)) => (((z.x - cx).powi(2) + (z.y - cy).powi(2)).sqrt() - rad) / rad,
    }
}

/// Truncation data: horoballs at the vertices of F.
pub struct Truncation<'a> {
    p: &'a SurfacePreset,
    balls: Vec<Horoball>,
}

/// An edge crossing in local coordinates of a tile.
struct LocalEvent {
    t: f64,
    kind: EdgeKind,
    z: Pt,
}

impl<'a> Truncation<'a> {
    pub fn new(p: &'a SurfacePreset, lambda: &HorocycleParameter) -> Result<Self> {
        p.validate_lambda(lambda)?;
        let balls = (0..p.vertices.len()).map(|v| p.vertex_horoball(v, lambda)).collect();
        Ok(Truncation { p, balls })
    }

    fn wall_gap(&self, k: usize, z: Pt) -> f64 {
        self.p.outside_sign[k] * self.p.wall_fgeod(k).signed_sinh(z)
    }

    fn in_closed_f(&self, z: Pt) -> bool {
        (0..self.p.walls.len()).all(|k| self.wall_gap(k, z) <= CORNER_TOL)
    }

    fn corner_err(z: Pt) -> Error {
        Error::precondition(format!(
            "geodesic passes within tolerance of a corner of the truncated domain near ({:.6}, {:.6}); perturb lambda",
            z.x, z.y
        ))
    }

    /// Horocycle crossings inside F and the exit wall crossing (if outside
    /// the horoballs) of the local geodesic `x → y`.
    fn tile_events(&self, x: f64, y: f64, exit: Option<usize>) -> Result<Vec<LocalEvent>> {
        let g = FGeod::from_ends(x, y);
        let mut out = Vec::new();
        for (v, b) in self.balls.iter().enumerate() {
            for z in horocycle_points(b, &g) {
                if !self.in_closed_f(z) {
                    continue;
                }
                if (0..self.p.walls.len()).any(|k| self.wall_gap(k, z).abs() <= CORNER_TOL) {
                    return Err(Self::corner_err(z));
                }
                out.push(LocalEvent { t: param(x, y, z), kind: EdgeKind::Horo(v), z });
            }
        }
        if let Some(k) = exit {
            let z = intersect_fgeod(&g, self.p.wall_fgeod(k))
                .ok_or_else(|| Error::degenerate("exit wall crossing not found"))?;
            let mut inside = false;
            for b in &self.balls {
                let gap = horocycle_gap(b, z);
                if gap.abs() <= CORNER_TOL {
                    return Err(Self::corner_err(z));
                }
                inside |= gap < 0.0;
            }
            if !inside {
                out.push(LocalEvent { t: param(x, y, z), kind: EdgeKind::Wall(k), z });
            }
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(out)
    }

    /// The round-path in the radius-`r` ball about the identity of a geodesic
    /// meeting F, with crossing points, in the geodesic's `lo → hi` order.
    /// `None` when the geodesic crosses no edge of F̄_λ.
    pub fn identity_roundpath(&self, g: &Geodesic, r: usize) -> Result<Option<(Vec<EdgeRef>, Vec<Pt>)>> {
        let p = self.p;
        let tr = trace_geodesic(p, g)?;
        let n = tr.tiles.len() as i64;
        let hol = tr.holonomy.as_ref().map(|h| h.word.clone());
        let at = |i: i64| -> Option<(Word, usize, Option<usize>)> {
            match &hol {
                Some(h) => {
                    let (q, j) = (i.div_euclid(n), i.rem_euclid(n) as usize);
                    let hq = if q >= 0 { h.pow(q as usize) } else { h.inverse().pow((-q) as usize) };
                    Some((hq.mul(&tr.tiles[j]), j, Some(tr.exit_walls[j])))
                }
                None => {
                    if i < 0 || i >= n {
                        return None;
                    }
                    let j = i as usize;
                    Some((tr.tiles[j].clone(), j, tr.exit_walls.get(j).copied()))
                }
            }
        };
        // |h^q| ≥ |q|, so the identity sits within this many periods
        let span = if hol.is_some() { tr.tiles.iter().map(|t| t.len() as i64).max().unwrap_or(0) + 1 } else { 0 };
        let i0 = (-span * n..(span + 1) * n)
            .find(|&i| at(i).is_some_and(|(t, _, _)| t.is_empty()))
            .ok_or_else(|| Error::degenerate(format!("{g} does not cross F")))?;
        let in_ball = |t: &Word| t.len() <= r;
        let mut lo = i0;
        while let Some((t, _, _)) = at(lo - 1) {
            if !in_ball(&t) {
                break;
            }
            lo -= 1;
        }
        let mut hi = i0;
        while let Some((t, _, _)) = at(hi + 1) {
            if !in_ball(&t) {
                break;
            }
            hi += 1;
        }
        let mut edges = Vec::new();
        let mut pts = Vec::new();
        let push_tile = |i: i64, exit_only: bool, edges: &mut Vec<EdgeRef>, pts: &mut Vec<Pt>| -> Result<()> {
            let (t, j, exit) = at(i).expect("index in range");
            let (x, y) = (tr.local[j].0.to_f64(), tr.local[j].1.to_f64());
            let m = p.word_matrix_f64(&t);
            for ev in self.tile_events(x, y, exit)? {
                if exit_only && !matches!(ev.kind, EdgeKind::Wall(_)) {
                    continue;
                }
                edges.push(p.canonical_edge(&t, ev.kind));
                pts.push(mobius_f64(&m, ev.z));
            }
            Ok(())
        };
        if at(lo - 1).is_some() {
            push_tile(lo - 1, true, &mut edges, &mut pts)?;
        }
        for i in lo..=hi {
            push_tile(i, false, &mut edges, &mut pts)?;
        }
        // split between horocyclic edges of tiles neither equal nor adjacent
        let mut start = 0;
        let id = Word::identity();
        let mut found: Option<(usize, usize)> = None;
        for k in 0..=edges.len() {
            let cut = k == edges.len() || (k > 0 && self.splits(&edges[k - 1], &edges[k]));
            if cut {
                if has_edge_of(p, &edges[start..k], &id) {
                    if found.is_some() {
                        return Err(Error::degenerate(format!("{g} meets F in two separated pieces")));
                    }
                    found = Some((start, k));
                }
                start = k;
            }
        }
        Ok(found.map(|(a, b)| (edges[a..b].to_vec(), pts[a..b].to_vec())))
    }

    fn splits(&self, e1: &EdgeRef, e2: &EdgeRef) -> bool {
        match (e1.kind, e2.kind) {
            (EdgeKind::Horo(_), EdgeKind::Horo(_)) => e1.tile.inverse().mul(&e2.tile).len() > 1,
            _ => false,
        }
    }
}

/// Edges of `edges` belonging to a tile within `r` of both `u` and `v`.
pub fn restrict(p: &SurfacePreset, edges: &[EdgeRef], u: &Word, v: &Word, r: usize) -> Result<Vec<EdgeRef>> {
    let (ui, vi) = (u.inverse(), v.inverse());
    let keep: Vec<bool> = edges
        .iter()
        .map(|e| edge_tiles(p, e).iter().any(|t| ui.mul(t).len() <= r && vi.mul(t).len() <= r))
        .collect();
    let first = keep.iter().position(|&k| k);
    let last = keep.iter().rposition(|&k| k);
    match (first, last) {
        (Some(a), Some(b)) => {
            if keep[a..=b].iter().any(|&k| !k) {
                return Err(Error::degenerate("restriction of a round-path is not contiguous"));
            }
            Ok(edges[a..=b].to_vec())
        }
        _ => Ok(Vec::new()),
    }
}

/// Generator letters used for the matching equations; the inverse
/// directions are translates of these.
pub fn directions(p: &SurfacePreset) -> Vec<Letter> {
    (1..=p.rank() as Letter).collect()
}

/// `p|_{id,s}` (left side) and `s·(p|_{s⁻¹,id})` (right side) restriction
/// keys of a round-path of the identity ball, when defined.
pub fn restriction_keys(p: &SurfacePreset, path: &RoundPath, s: Letter, r: usize) -> Result<(Option<RoundPath>, Option<RoundPath>)> {
    let id = Word::identity();
    let sw = Word::letter(s);
    let si = Word::letter(-s);
    let lhs = if has_edge_of(p, &path.edges, &sw) {
        Some(RoundPath::canonical(restrict(p, &path.edges, &id, &sw, r)?).0)
    } else {
        None
    };
    let rhs = if has_edge_of(p, &path.edges, &si) {
        let j = restrict(p, &path.edges, &si, &id, r)?;
        let moved = RoundPath { edges: j }.translate(&sw);
        Some(RoundPath::canonical(moved).0)
    } else {
        None
    };
    Ok((lhs, rhs))
}

/// Builds the matching equations for a list of identity-ball round-paths.
pub fn matching_equations(p: &SurfacePreset, paths: &[RoundPath], r: usize) -> Result<Vec<Equation>> {
    let mut rows: BTreeMap<(Letter, RoundPath), BTreeMap<usize, i64>> = BTreeMap::new();
    for s in directions(p) {
        for (i, path) in paths.iter().enumerate() {
            let (l, rr) = restriction_keys(p, path, s, r)?;
            if let Some(j) = l {
                *rows.entry((s, j)).or_default().entry(i).or_default() += 1;
            }
            if let Some(j) = rr {
                *rows.entry((s, j)).or_default().entry(i).or_default() -= 1;
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|((direction, j), c)| Equation { direction, j, coeffs: c.into_iter().filter(|&(_, v)| v != 0).collect() })
        .collect())
}

/// `μ̄(p) = μ(Cyl(p))` over the round-paths of the identity ball.
pub fn roundpaths_of_current(
    p: &SurfacePreset,
    mu: &DiscreteCurrent,
    r: usize,
    lambda: &HorocycleParameter,
) -> Result<WeightTable> {
    if r < 1 {
        return Err(Error::precondition("round-path radius must be at least 1"));
    }
    let tr = Truncation::new(p, lambda)?;
    let mut acc: BTreeMap<RoundPath, (f64, Realizer)> = BTreeMap::new();
    let kept = DiscreteCurrent { atoms: mu.atoms.iter().filter(|(w, _)| *w >= INPUT_FLOOR).cloned().collect() };
    for (w, orbit) in kept.prepare(p)?.atoms {
        for g in &orbit.sf {
            let Some((edges, mut pts)) = tr.identity_roundpath(g, r)? else {
                continue;
            };
            let (rp, rev) = RoundPath::canonical(edges);
            if rev {
                pts.reverse();
            }
            let e = acc.entry(rp).or_insert_with(|| (0.0, Realizer { geodesic: g.clone(), points: pts }));
            e.0 += w * orbit.factor;
        }
    }
    let mut paths = Vec::new();
    let mut weights = Vec::new();
    let mut realizers = Vec::new();
    for (k, (w, re)) in acc {
        paths.push(k);
        weights.push(w);
        realizers.push(re);
    }
    let equations = matching_equations(p, &paths, r)?;
    Ok(WeightTable { r, lambda: lambda.clone(), paths, weights, realizers, equations })
}

/// A kept round-path of the ball about `tile`, as an index into the table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OEntry {
    pub tile: Word,
    pub path: usize,
}

/// Greedy choice of round-paths whose cylinders partition the windows of the
/// tiles within `r0` of the identity: tiles in shortlex order, and a
/// round-path of a later tile is dropped when it has an edge of an earlier one.
pub fn select_disjoint_o(p: &SurfacePreset, table: &WeightTable, r0: usize) -> Vec<OEntry> {
    let tiles = crate::fuchsian::word::all_words(p.rank(), r0);
    let mut out = Vec::new();
    for (i, g) in tiles.iter().enumerate() {
        for (k, path) in table.paths.iter().enumerate() {
            let moved = path.translate(g);
            if tiles[..i].iter().any(|h| has_edge_of(p, &moved, h)) {
                continue;
            }
            out.push(OEntry { tile: g.clone(), path: k });
        }
    }
    out
}

/// Whether two round-paths (of the balls about their tiles) can be realized
/// by a common geodesic, judged on their restrictions to the common ball.
pub fn compatible(p: &SurfacePreset, table: &WeightTable, a: &OEntry, b: &OEntry) -> Result<bool> {
    let r = table.r;
    let ea = table.paths[a.path].translate(&a.tile);
    let eb = table.paths[b.path].translate(&b.tile);
    let ra = restrict(p, &ea, &a.tile, &b.tile, r)?;
    let rb = restrict(p, &eb, &a.tile, &b.tile, r)?;
    Ok(RoundPath::canonical(ra).0 == RoundPath::canonical(rb).0)
}

/// Every pair of kept round-paths is incompatible.
pub fn certify_disjoint(p: &SurfacePreset, table: &WeightTable, o: &[OEntry]) -> Result<bool> {
    for i in 0..o.len() {
        for j in i + 1..o.len() {
            if compatible(p, table, &o[i], &o[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Distinct paths referenced in `o`.
pub fn o_paths(o: &[OEntry]) -> BTreeSet<usize> {
    o.iter().map(|e| e.path).collect()
}
