//! Exact tracing of geodesics through the tessellation.

use super::word::Word;
use super::{EdgeKind, EdgeRef, GroupElement, SurfacePreset};
use crate::error::{Error, Result};
use crate::geom::{BoundaryPoint, FixedPoints, Geodesic};

/// Crossing cap for a single trace.
pub const TRACE_CAP: usize = 1_000_000;

/// Position of a boundary point relative to F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPos {
    Vertex(usize),
    /// In the open outside arc of wall `k`.
    Arc(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum EndKind {
    /// The geodesic runs into vertex `vertex` of the terminal tile.
    CuspTail { tile: Word, vertex: usize },
    /// The end is covered by the period.
    Periodic,
}

/// Tiles crossed by a geodesic, in order from its `lo` end to its `hi` end.
/// For an axis only one period is stored and `holonomy` maps `tiles[0]` to
/// the tile after the last one.
#[derive(Clone, Debug)]
pub struct Trace {
    pub geodesic: Geodesic,
    pub tiles: Vec<Word>,
    /// `tiles[i]⁻¹ γ`, oriented from the `lo` end to the `hi` end.
    pub local: Vec<(BoundaryPoint, BoundaryPoint)>,
    /// Wall of `tiles[i]` crossed when moving to the next tile.
    pub exit_walls: Vec<usize>,
    pub lo_end: EndKind,
    pub hi_end: EndKind,
    pub holonomy: Option<GroupElement>,
}

impl Trace {
    pub fn is_periodic(&self) -> bool {
        self.holonomy.is_some()
    }

    /// The canonical edges crossed, in order.
    pub fn crossings(&self, p: &SurfacePreset) -> Vec<EdgeRef> {
        self.tiles
            .iter()
            .zip(&self.exit_walls)
            .map(|(t, &k)| p.canonical_edge(t, EdgeKind::Wall(k)))
            .collect()
    }

    /// The orbit geodesics meeting the interior of F (one per crossed tile).
    pub fn local_geodesics(&self) -> Vec<Geodesic> {
        self.local
            .iter()
            .map(|(x, y)| Geodesic::new(x.clone(), y.clone()).expect("distinct"))
            .collect()
    }
}

impl SurfacePreset {
    pub fn boundary_pos(&self, x: &BoundaryPoint) -> BoundaryPos {
        if let Some(v) = self.vertices.iter().position(|v| v == x) {
            return BoundaryPos::Vertex(v);
        }
        let k = self.walls.iter().position(|w| w.outside.contains(x)).expect("arcs cover the circle");
        BoundaryPos::Arc(k)
    }

    fn in_closed_arc(&self, pos: BoundaryPos, k: usize) -> bool {
        let n = self.vertices.len();
        match pos {
            BoundaryPos::Arc(j) => j == k,
            BoundaryPos::Vertex(v) => v == k || v == (k + 1) % n,
        }
    }

    /// `None` if the local geodesic crosses the interior of F, otherwise the
    /// wall it lies beyond; equality with a wall is an error.
    fn beyond_wall(&self, x: &BoundaryPoint, y: &BoundaryPoint) -> Result<Option<usize>> {
        let (px, py) = (self.boundary_pos(x), self.boundary_pos(y));
        for k in 0..self.walls.len() {
            if self.in_closed_arc(px, k) && self.in_closed_arc(py, k) {
                if matches!((px, py), (BoundaryPos::Vertex(_), BoundaryPos::Vertex(_))) {
                    return Err(Error::precondition(format!(
                        "geodesic lies on a wall of the tessellation (wall {k} in local coordinates)"
                    )));
                }
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn step(&self, l: i8, x: &BoundaryPoint, y: &BoundaryPoint) -> (BoundaryPoint, BoundaryPoint) {
        let m = self.letter_matrix(-l);
        (m.apply(x), m.apply(y))
    }

    /// Walks from a tile toward the `fwd` end. Returns the visited tiles after
    /// the start, their local geodesics, exit walls, and the end kind. With
    /// `detect_period`, stops when the local geodesic repeats.
    #[allow(clippy::type_complexity)]
    fn walk(
        &self,
        start: &Word,
        back: &BoundaryPoint,
        fwd: &BoundaryPoint,
        detect_period: bool,
    ) -> Result<(Vec<Word>, Vec<(BoundaryPoint, BoundaryPoint)>, Vec<usize>, EndKind, Option<Word>)> {
        let mut tiles = Vec::new();
        let mut local = Vec::new();
        let mut exits = Vec::new();
        let (mut t, mut b, mut f) = (start.clone(), back.clone(), fwd.clone());
        for _ in 0..TRACE_CAP {
            match self.boundary_pos(&f) {
                BoundaryPos::Vertex(v) => {
                    return Ok((tiles, local, exits, EndKind::CuspTail { tile: t, vertex: v }, None));
                }
                BoundaryPos::Arc(k) => {
                    let s = self.walls[k].letter;
                    exits.push(k);
                    t = t.push(s);
                    let (nb, nf) = self.step(s, &b, &f);
                    b = nb;
                    f = nf;
                    if detect_period && &b == back && &f == fwd {
                        return Ok((tiles, local, exits, EndKind::Periodic, Some(t)));
                    }
                    tiles.push(t.clone());
                    local.push((b.clone(), f.clone()));
                }
            }
        }
        Err(Error::degenerate("trace exceeded the crossing cap"))
    }

    /// A tile crossed by `γ`, with `γ` in its local coordinates.
    pub fn entry_tile(&self, g: &Geodesic) -> Result<(Word, BoundaryPoint, BoundaryPoint)> {
        let (mut t, _) = self.locate_word(g.to_fgeod().top())?;
        let inv = self.word_matrix(&t).inverse();
        let (mut x, mut y) = (inv.apply(&g.lo), inv.apply(&g.hi));
        for _ in 0..16 {
            match self.beyond_wall(&x, &y)? {
                None => return Ok((t, x, y)),
                Some(k) => {
                    let s = self.walls[k].letter;
                    t = t.push(s);
                    let (nx, ny) = self.step(s, &x, &y);
                    x = nx;
                    y = ny;
                }
            }
        }
        Err(Error::degenerate(format!("could not find a tile crossed by {g}")))
    }
}

/// Traces `γ` in both directions. Ends at ideal vertices become cusp tails;
/// an axis is detected by the first exact repeat of the local geodesic.
pub fn trace_geodesic(p: &SurfacePreset, g: &Geodesic) -> Result<Trace> {
    let (t0, x0, y0) = p.entry_tile(g)?;
    let (ft, fl, fe, fend, hol) = p.walk(&t0, &x0, &y0, true)?;
    if let Some(h_tile) = hol {
        let holonomy = p.element(&h_tile.mul(&t0.inverse()));
        let mut tiles = vec![t0];
        tiles.extend(ft);
        let mut local = vec![(x0, y0)];
        local.extend(fl);
        return Ok(Trace {
            geodesic: g.clone(),
            tiles,
            local,
            exit_walls: fe,
            lo_end: EndKind::Periodic,
            hi_end: EndKind::Periodic,
            holonomy: Some(holonomy),
        });
    }
    let (bt, bl, be, bend, _) = p.walk(&t0, &y0, &x0, false)?;
    // assemble lo → hi: reversed backward walk, start, forward walk
    let mut tiles: Vec<Word> = bt.into_iter().rev().collect();
    let mut local: Vec<(BoundaryPoint, BoundaryPoint)> = bl.into_iter().rev().map(|(f, b)| (b, f)).collect();
    // backward exits are walls of the tile being left toward the lo end; the
    // same wall seen from the other side is the partner wall of the next tile
    let mut exit_walls: Vec<usize> = be.iter().rev().map(|&k| p.walls[k].partner).collect();
    tiles.push(t0);
    local.push((x0, y0));
    tiles.extend(ft);
    local.extend(fl);
    exit_walls.extend(fe);
    Ok(Trace { geodesic: g.clone(), tiles, local, exit_walls, lo_end: bend, hi_end: fend, holonomy: None })
}

/// One period of tiles along the axis of a hyperbolic element, with the
/// primitive holonomy that translates along it.
pub fn axis_tiles_period(p: &SurfacePreset, g: &GroupElement) -> Result<(Vec<Word>, GroupElement)> {
    let axis = match crate::geom::mobius::fixed_points_int(&g.mat) {
        Ok(FixedPoints::Hyperbolic(lo, hi)) => Geodesic::new(lo, hi)?,
        Ok(FixedPoints::Parabolic(_)) => return Err(Error::precondition(format!("{} is parabolic", p.word_str(&g.word)))),
        Err(e) => return Err(e),
    };
    let tr = trace_geodesic(p, &axis)?;
    let h = tr.holonomy.ok_or_else(|| Error::degenerate("axis trace did not close up"))?;
    Ok((tr.tiles, h))
}

/// Tiles crossed by the geodesic joining two cusp points.
pub fn cusp_pair_tiles(p: &SurfacePreset, x: &BoundaryPoint, y: &BoundaryPoint) -> Result<Vec<Word>> {
    if matches!(x, BoundaryPoint::Surd(_)) || matches!(y, BoundaryPoint::Surd(_)) {
        return Err(Error::precondition("cusp pair endpoints must be parabolic points"));
    }
    let tr = trace_geodesic(p, &Geodesic::new(x.clone(), y.clone())?)?;
    Ok(tr.tiles)
}
