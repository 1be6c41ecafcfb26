//! The graph Γ of round-path copies, its components, and the lines they
//! assemble into.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::rational::IntegerTable;
use super::roundpath::{directions, edge_tiles, restriction_keys, restrict, RoundPath, WeightTable};
use crate::currents::{eta_closed, eta_cusp_pair, Atom};
use crate::error::{Error, Result};
use crate::fuchsian::{EdgeKind, EdgeRef, Letter, SurfacePreset, Word};
use crate::geom::mobius::{mobius_f64, FixedPoints};
use crate::geom::{hyp_distance, Geodesic, Pt};

/// Required excess of each witness bending angle over a right angle.
pub const ANGLE_MARGIN: f64 = 0.01;

/// Copy `copy` of round-path `path` at the identity tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub path: usize,
    pub copy: u64,
}

/// Quotient of Γ by G: the identity-tile slots, each with its edges as
/// `(direction letter, target slot)`.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentGraph {
    pub slots: Vec<Slot>,
    pub adj: Vec<Vec<(Letter, usize)>>,
    pub components: Vec<Component>,
}

/// A G-orbit of components of Γ as a walk through slots. `tiles[i]` is the
/// tile of the `i`-th vertex relative to the first.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub slots: Vec<usize>,
    pub tiles: Vec<Word>,
    /// Letters moving from each vertex to the next.
    pub steps: Vec<Letter>,
    /// Translation closing the walk for a line; `None` for a finite segment.
    pub holonomy: Option<Word>,
}

impl ComponentGraph {
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }
}

/// Builds Γ from `θ` by lexicographic copy matching in each generator
/// direction and splits it into component orbits.
pub fn build_gamma(p: &SurfacePreset, t: &WeightTable, theta: &IntegerTable) -> Result<ComponentGraph> {
    let mut slots = Vec::new();
    let mut first = Vec::new();
    for (i, &n) in theta.theta.iter().enumerate() {
        first.push(slots.len());
        for c in 0..n {
            slots.push(Slot { path: i, copy: c });
        }
    }
    let mut adj: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); slots.len()];
    for s in directions(p) {
        let mut classes: BTreeMap<RoundPath, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, path) in t.paths.iter().enumerate() {
            let (l, r) = restriction_keys(p, path, s, t.r)?;
            for c in 0..theta.theta[i] {
                let sl = first[i] + c as usize;
                if let Some(j) = &l {
                    classes.entry(j.clone()).or_default().0.push(sl);
                }
                if let Some(j) = &r {
                    classes.entry(j.clone()).or_default().1.push(sl);
                }
            }
        }
        for (j, (left, right)) in classes {
            if left.len() != right.len() {
                return Err(Error::degenerate(format!(
                    "copy counts differ across restriction {} ({} vs {})",
                    j.describe(p),
                    left.len(),
                    right.len()
                )));
            }
            // slots are created in (path, copy) order, so index order is lexicographic
            for (a, b) in left.into_iter().zip(right) {
                adj[a].push((s, b));
                adj[b].push((-s, a));
            }
        }
    }
    for (i, a) in adj.iter().enumerate() {
        if a.len() > 2 || (a.len() == 2 && a[0].0 == a[1].0) {
            return Err(Error::degenerate(format!("slot {i} of Γ has incompatible edges {a:?}")));
        }
    }
    let components = split_components(&adj)?;
    Ok(ComponentGraph { slots, adj, components })
}

fn next_edge(adj: &[Vec<(Letter, usize)>], at: usize, came: Option<Letter>) -> Option<(Letter, usize)> {
    adj[at].iter().copied().find(|&(l, _)| Some(-l) != came)
}

/// Walks from `start` leaving by `first`; returns visited slots (after the
/// start), step letters, and whether the walk came back to `start`.
fn walk(adj: &[Vec<(Letter, usize)>], start: usize, first: (Letter, usize)) -> (Vec<usize>, Vec<Letter>, bool) {
    let mut slots = Vec::new();
    let mut steps = vec![first.0];
    let (mut cur, mut came) = (first.1, first.0);
    loop {
        if cur == start {
            return (slots, steps, true);
        }
        slots.push(cur);
        match next_edge(adj, cur, Some(came)) {
            Some((l, nxt)) => {
                steps.push(l);
                came = l;
                cur = nxt;
            }
            None => return (slots, steps, false),
        }
    }
}

fn split_components(adj: &[Vec<(Letter, usize)>]) -> Result<Vec<Component>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s0 in 0..n {
        if seen[s0] {
            continue;
        }
        let (slots, steps) = match adj[s0].first().copied() {
            None => (vec![s0], vec![]),
            Some(e) => {
                let (fwd, fsteps, closed) = walk(adj, s0, e);
                if closed {
                    let mut slots = vec![s0];
                    slots.extend(fwd);
                    let tiles = tiles_of(&fsteps);
                    let hol = tiles.last().cloned().expect("nonempty walk");
                    for &s in &slots {
                        seen[s] = true;
                    }
                    out.push(Component { slots, tiles: tiles[..tiles.len() - 1].to_vec(), steps: fsteps, holonomy: Some(hol) });
                    continue;
                }
                // finite: also walk the other way from s0
                let (back, bsteps) = match next_edge(adj, s0, Some(-e.0)) {
                    Some(b) => {
                        let (bs, st, _) = walk(adj, s0, b);
                        (bs, st)
                    }
                    None => (vec![], vec![]),
                };
                let mut slots: Vec<usize> = back.iter().rev().copied().collect();
                slots.push(s0);
                slots.extend(fwd);
                let mut steps: Vec<Letter> = bsteps.iter().rev().map(|&l| -l).collect();
                steps.extend(fsteps);
                (slots, steps)
            }
        };
        for &s in &slots {
            if seen[s] {
                return Err(Error::degenerate("Γ walk revisited a slot"));
            }
            seen[s] = true;
        }
        let tiles = tiles_of(&steps);
        out.push(Component { slots, tiles, steps, holonomy: None });
    }
    Ok(out)
}

/// Tiles visited by a walk starting at the identity.
fn tiles_of(steps: &[Letter]) -> Vec<Word> {
    let mut t = vec![Word::identity()];
    for &l in steps {
        let nxt = t.last().unwrap().push(l);
        t.push(nxt);
    }
    t
}

/// Limit pair of a component with its witness certificates.
#[derive(Clone, Debug, Serialize)]
pub struct AssembledLine {
    pub geodesic: Geodesic,
    /// Holonomy word for lines; `None` for cusp-to-cusp segments.
    pub holonomy: Option<Word>,
    pub edges: usize,
    pub min_angle: f64,
    pub min_segment: f64,
}

impl AssembledLine {
    pub fn atom(&self, p: &SurfacePreset) -> Result<Atom> {
        match &self.holonomy {
            Some(h) => eta_closed(p, h),
            None => eta_cusp_pair(p, &self.geodesic.lo, &self.geodesic.hi),
        }
    }
}

/// Whether a path must be reversed so that edges of `toward` come after
/// the edges of the identity tile.
fn orient(p: &SurfacePreset, path: &[EdgeRef], toward: &Word) -> Result<bool> {
    let id = Word::identity();
    let mean = |t: &Word| {
        let idx: Vec<usize> = (0..path.len()).filter(|&i| edge_tiles(p, &path[i]).contains(t)).collect();
        if idx.is_empty() {
            None
        } else {
            Some(idx.iter().sum::<usize>() as f64 / idx.len() as f64)
        }
    };
    match (mean(&id), mean(toward)) {
        (Some(a), Some(b)) if a < b => Ok(false),
        (Some(a), Some(b)) if a > b => Ok(true),
        _ => Err(Error::degenerate("cannot orient round-path toward its neighbor")),
    }
}

fn horo_vertex(e: &EdgeRef) -> Result<usize> {
    match e.kind {
        EdgeKind::Horo(v) if e.tile.is_empty() => Ok(v),
        _ => Err(Error::degenerate("free end of a finite component is not a horocyclic edge of its tile")),
    }
}

/// Unit tangent at `z` of the geodesic toward `w` (a point or, with `y = 0`
/// or infinite `x`, a boundary point).
fn direction(z: Pt, w: Pt) -> (f64, f64) {
    if w.x.is_infinite() || (w.x - z.x).abs() < 1e-300 {
        let s = if w.x.is_infinite() || w.y > z.y { 1.0 } else { -1.0 };
        return (0.0, s);
    }
    // center on the real axis of the circle through z and w
    let c = (w.abs2() - z.abs2()) / (2.0 * (w.x - z.x));
    let (rx, ry) = (z.x - c, z.y);
    let n = (rx * rx + ry * ry).sqrt();
    let (tx, ty) = (-ry / n, rx / n);
    // pick the orientation moving toward w
    if (w.x - z.x) * tx >= 0.0 {
        (tx, ty)
    } else {
        (-tx, -ty)
    }
}

fn angle_at(z: Pt, a: Pt, b: Pt) -> f64 {
    let (u, v) = (direction(z, a), direction(z, b));
    (u.0 * v.0 + u.1 * v.1).clamp(-1.0, 1.0).acos()
}

fn boundary_pt(x: f64) -> Pt {
    Pt::new(x, 0.0)
}

/// Edge sequence of a component with realizer crossing points, merged
/// along the walk; for a line, slot 0 is repeated at the holonomy tile.
fn merged_sequence(p: &SurfacePreset, t: &WeightTable, g: &ComponentGraph, c: &Component) -> Result<(Vec<EdgeRef>, Vec<Pt>)> {
    let mut chain: Vec<(usize, Word)> = c.slots.iter().zip(&c.tiles).map(|(&s, w)| (s, w.clone())).collect();
    if let Some(h) = &c.holonomy {
        chain.push((c.slots[0], h.clone()));
    }
    let mut seq: Vec<EdgeRef> = Vec::new();
    let mut pts: Vec<Pt> = Vec::new();
    for (k, (slot, tile)) in chain.iter().enumerate() {
        let pi = g.slots[*slot].path;
        let path = &t.paths[pi];
        let mut edges = path.edges.clone();
        let mut rp = t.realizers[pi].points.clone();
        let step_out = c.steps.get(k).copied().or_else(|| if c.holonomy.is_some() { c.steps.first().copied() } else { None });
        let reversed = if let Some(s) = step_out {
            orient(p, &edges, &Word::letter(s))?
        } else if k > 0 {
            !orient(p, &edges, &Word::letter(-c.steps[k - 1]))?
        } else {
            false
        };
        if reversed {
            edges.reverse();
            rp.reverse();
        }
        let m = p.word_matrix_f64(tile);
        let edges: Vec<EdgeRef> = edges.iter().map(|e| EdgeRef { tile: tile.mul(&e.tile), kind: e.kind }).collect();
        let rp: Vec<Pt> = rp.iter().map(|&z| mobius_f64(&m, z)).collect();
        if k == 0 {
            seq = edges;
            pts = rp;
            continue;
        }
        let prev = &chain[k - 1];
        let prev_path = &t.paths[g.slots[prev.0].path];
        let ov = restrict(p, &prev_path.edges, &Word::identity(), &Word::letter(c.steps[k - 1]), t.r)?.len();
        if ov == 0 || ov > edges.len() || ov > seq.len() || seq[seq.len() - ov..] != edges[..ov] {
            return Err(Error::degenerate("connected round-paths do not overlap on their restriction"));
        }
        seq.extend_from_slice(&edges[ov..]);
        pts.extend_from_slice(&rp[ov..]);
    }
    Ok((seq, pts))
}

/// Endpoints and witness certificates of a component.
pub fn assemble(p: &SurfacePreset, t: &WeightTable, g: &ComponentGraph, c: &Component) -> Result<AssembledLine> {
    let (seq, pts) = merged_sequence(p, t, g, c)?;
    let r = t.r.max(1);
    let mut min_angle = std::f64::consts::PI;
    let mut min_segment = f64::INFINITY;
    let geodesic;
    match &c.holonomy {
        Some(h) => {
            let mat = p.word_matrix(h);
            let (lo, hi) = match crate::geom::mobius::fixed_points_int(&mat)? {
                FixedPoints::Hyperbolic(a, b) => (a, b),
                FixedPoints::Parabolic(_) => {
                    return Err(Error::degenerate(format!("component holonomy {} is parabolic", p.word_str(h))))
                }
            };
            geodesic = Geodesic::new(lo, hi)?;
            let n0 = t.paths[g.slots[c.slots[0]].path].edges.len();
            let period = seq.len() - n0;
            if period == 0 {
                return Err(Error::degenerate("line component crosses no edge per period"));
            }
            let hm = p.word_matrix_f64(h);
            let hinv = crate::geom::mobius::mat_inv_f64(&hm);
            let mut anchors: Vec<Pt> = (0..period).step_by(r).map(|i| pts[i]).collect();
            let last = *anchors.last().unwrap();
            anchors.insert(0, mobius_f64(&hinv, last));
            anchors.push(pts[period]);
            let after = if r < period { pts[r] } else { pts[period] };
            anchors.push(mobius_f64(&hm, after));
            for w in anchors.windows(3) {
                min_angle = min_angle.min(angle_at(w[1], w[0], w[2]));
            }
            for w in anchors[1..anchors.len() - 1].windows(2) {
                min_segment = min_segment.min(hyp_distance(w[0], w[1])?);
            }
        }
        None => {
            let n = seq.len();
            let v0 = horo_vertex(&local_edge(c, &seq[0], true))?;
            let v1 = horo_vertex(&local_edge(c, &seq[n - 1], false))?;
            let first_tile = &c.tiles[0];
            let last_tile = c.tiles.last().unwrap();
            let xi = p.word_matrix(first_tile).apply(&p.vertices[v0]);
            let zeta = p.word_matrix(last_tile).apply(&p.vertices[v1]);
            if xi == zeta {
                return Err(Error::degenerate("finite component returns to its starting cusp"));
            }
            let mut idx: Vec<usize> = (0..n).step_by(r).collect();
            if *idx.last().unwrap() != n - 1 {
                idx.push(n - 1);
            }
            let mut anchors = vec![boundary_pt(xi.to_f64())];
            anchors.extend(idx.iter().map(|&i| pts[i]));
            anchors.push(boundary_pt(zeta.to_f64()));
            for w in anchors.windows(3) {
                min_angle = min_angle.min(angle_at(w[1], w[0], w[2]));
            }
            for w in anchors[1..anchors.len() - 1].windows(2) {
                min_segment = min_segment.min(hyp_distance(w[0], w[1])?);
            }
            geodesic = Geodesic::new(xi, zeta)?;
        }
    }
    Ok(AssembledLine { geodesic, holonomy: c.holonomy.clone(), edges: seq.len(), min_angle, min_segment })
}

/// Expresses an end edge of the merged sequence in its own tile's frame.
fn local_edge(c: &Component, e: &EdgeRef, first: bool) -> EdgeRef {
    let tile = if first { &c.tiles[0] } else { c.tiles.last().unwrap() };
    EdgeRef { tile: tile.inverse().mul(&e.tile), kind: e.kind }
}

/// Least admissible witness piece length: half the least distance between
/// two distinct walls of the truncated domain.
pub fn segment_threshold(p: &SurfacePreset, lambda: &crate::fuchsian::HorocycleParameter) -> Result<f64> {
    let balls: Vec<_> = (0..p.vertices.len()).map(|v| p.vertex_horoball(v, lambda)).collect();
    let samples = 400;
    let mut walls: Vec<Vec<Pt>> = Vec::new();
    for k in 0..p.walls.len() {
        let g = p.wall_fgeod(k);
        let mut v = Vec::new();
        for i in 1..samples {
            let s = i as f64 / samples as f64;
            let z = match g {
                crate::geom::FGeod::Vertical(u) => {
                    // heights log-uniform between 1e-3 and 1e3
                    Pt::new(*u, 10f64.powf(-3.0 + 6.0 * s))
                }
                crate::geom::FGeod::Circle { c, r, .. } => {
                    let th = std::f64::consts::PI * s;
                    Pt::new(c + r * th.cos(), r * th.sin())
                }
            };
            if balls.iter().all(|b| !b.contains(z)) {
                v.push(z);
            }
        }
        walls.push(v);
    }
    let mut best = f64::INFINITY;
    for i in 0..walls.len() {
        for j in i + 1..walls.len() {
            for &z in &walls[i] {
                for &w in &walls[j] {
                    best = best.min(hyp_distance(z, w)?);
                }
            }
        }
    }
    Ok(0.5 * best)
}

/// Whether every witness angle exceeds a right angle by the margin.
pub fn angle_ok(a: &AssembledLine) -> bool {
    a.min_angle > FRAC_PI_2 + ANGLE_MARGIN
}
