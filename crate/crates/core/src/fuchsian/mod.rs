//! Free Fuchsian groups given by an ideal fundamental polygon with side pairings.

pub mod preset;
pub mod trace;
pub mod word;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::mobius::mobius_f64;
use crate::geom::{Horoball, IntMat, MoebiusMap, Pt};

pub use preset::{preset_gamma2, Cusp, HorocycleParameter, SurfacePreset, Wall};
pub use trace::{axis_tiles_period, cusp_pair_tiles, trace_geodesic, EndKind, Trace};
pub use word::{free_reduce, shortlex, Letter, Word};

pub const LOCATE_CAP: usize = 10_000;

/// A group element: reduced word together with its exact matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub word: Word,
    pub mat: IntMat,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Word::identity(), mat: IntMat::identity() }
    }

    pub fn moebius(&self) -> MoebiusMap {
        let r = |v: &num_bigint::BigInt| num_rational::BigRational::from_integer(v.clone());
        MoebiusMap::new(r(&self.mat.a), r(&self.mat.b), r(&self.mat.c), r(&self.mat.d))
            .expect("group elements have determinant 1")
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// An edge of the truncated tessellation, named from one tile.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub tile: Word,
    pub kind: EdgeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Wall `k` of the tile.
    Wall(usize),
    /// Horocyclic edge at vertex `v` of the tile.
    Horo(usize),
}

impl SurfacePreset {
    pub fn element(&self, w: &Word) -> GroupElement {
        GroupElement { word: w.clone(), mat: self.word_matrix(w) }
    }

    pub fn word_matrix(&self, w: &Word) -> IntMat {
        let mut m = IntMat::identity();
        for &l in w.letters() {
            m = m.mul(self.letter_matrix(l));
        }
        m
    }

    pub fn word_matrix_f64(&self, w: &Word) -> [f64; 4] {
        let mut m = [1.0, 0.0, 0.0, 1.0];
        for &l in w.letters() {
            m = crate::geom::mobius::mat_mul_f64(&m, &self.letter_matrix_f64(l));
        }
        m
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement { word: g.word.mul(&h.word), mat: g.mat.mul(&h.mat) }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, &self.gen_names)
    }

    pub fn word_str(&self, w: &Word) -> String {
        w.to_string_with(&self.gen_names)
    }

    /// The canonical name of an edge: walls not owned by their tile are named
    /// from the neighbor across them.
    pub fn canonical_edge(&self, tile: &Word, kind: EdgeKind) -> EdgeRef {
        match kind {
            EdgeKind::Wall(k) if !self.walls[k].owned => {
                let w = &self.walls[k];
                EdgeRef { tile: tile.push(w.letter), kind: EdgeKind::Wall(w.partner) }
            }
            _ => EdgeRef { tile: tile.clone(), kind },
        }
    }

    /// Wall `k` is violated by a point in local coordinates: strictly outside,
    /// or on it when the wall is not owned.
    fn wall_violated(&self, k: usize, z: Pt) -> bool {
        let s = self.outside_sign[k] * self.wall_fgeod[k].signed_sinh(z);
        s > 0.0 || (s == 0.0 && !self.walls[k].owned)
    }

    /// Whether a point (in local coordinates) lies in the half-open domain F.
    pub fn in_domain(&self, z: Pt) -> bool {
        (0..self.walls.len()).all(|k| !self.wall_violated(k, z))
    }

    /// The tile `g` with `g⁻¹ z ∈ F`, by repeated wall reduction.
    pub fn locate(&self, z: Pt) -> Result<GroupElement> {
        let (w, _) = self.locate_word(z)?;
        Ok(self.element(&w))
    }

    /// Word of the tile containing `z`, together with `g⁻¹ z`.
    pub fn locate_word(&self, z: Pt) -> Result<(Word, Pt)> {
        if !(z.y > 0.0) || !z.x.is_finite() || !z.y.is_finite() {
            return Err(Error::precondition("point not in the upper half-plane"));
        }
        let mut g: Vec<Letter> = Vec::new();
        let mut p = z;
        for _ in 0..LOCATE_CAP {
            match (0..self.walls.len()).find(|&k| self.wall_violated(k, p)) {
                None => return Ok((free_reduce(&g), p)),
                Some(k) => {
                    let s = self.walls[k].letter;
                    p = mobius_f64(&self.letter_matrix_f64(-s), p);
                    g.push(s);
                }
            }
        }
        Err(Error::degenerate(format!("point location did not terminate at {:?}", z)))
    }

    /// Hyperbolic distance from a local point to the closed domain F̄.
    pub fn dist_to_domain(&self, z: Pt) -> f64 {
        let outside = (0..self.walls.len())
            .any(|k| self.outside_sign[k] * self.wall_fgeod[k].signed_sinh(z) > 0.0);
        if !outside {
            return 0.0;
        }
        self.wall_fgeod.iter().map(|g| g.dist(z)).fold(f64::INFINITY, f64::min)
    }

    /// Tiles `h` with `d(center, hF̄) ≤ r`, in shortlex order.
    pub fn tiles_meeting_ball(&self, center: Pt, r: f64) -> Result<Vec<GroupElement>> {
        Ok(self.tile_words_meeting_ball(center, r)?.iter().map(|w| self.element(w)).collect())
    }

    pub fn tile_words_meeting_ball(&self, center: Pt, r: f64) -> Result<Vec<Word>> {
        if !(r >= 0.0) {
            return Err(Error::precondition("radius must be nonnegative"));
        }
        let (g0, p0) = self.locate_word(center)?;
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(g0.clone());
        queue.push_back((g0, p0));
        while let Some((w, p)) = queue.pop_front() {
            if self.dist_to_domain(p) > r {
                continue;
            }
            for wall in &self.walls {
                let nw = w.push(wall.letter);
                if seen.insert(nw.clone()) {
                    let np = mobius_f64(&self.letter_matrix_f64(-wall.letter), p);
                    queue.push_back((nw, np));
                }
            }
            out.push(w);
        }
        out.sort_by(shortlex);
        Ok(out)
    }

    /// Horoball at vertex `v` of the tile `tile` (global coordinates).
    pub fn tile_horoball(&self, tile: &Word, v: usize, lambda: &HorocycleParameter) -> Horoball {
        let x = self.word_matrix(tile).apply(&self.vertices[v]);
        self.horoball_at(&x, self.cusps[v].class, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BoundaryPoint;

    #[test]
    fn locate_examples() {
        let p = preset_gamma2();
        assert!(p.locate(Pt::new(0.5, 2.0)).unwrap().is_identity());
        let g = p.locate(Pt::new(4.0, 1.0)).unwrap();
        assert_eq!(p.word_str(&g.word), "aa");
    }

    #[test]
    fn ball_at_i() {
        let p = preset_gamma2();
        let t = p.tiles_meeting_ball(Pt::new(0.0, 1.0), 0.1).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].is_identity());
    }

    #[test]
    fn canonical_edges_agree() {
        let p = preset_gamma2();
        let id = Word::identity();
        // the wall Re = 1 of F is the wall Re = -1 of aF
        let e = p.canonical_edge(&id, EdgeKind::Wall(2));
        assert_eq!(e, EdgeRef { tile: p.parse_word("a").unwrap(), kind: EdgeKind::Wall(3) });
        let x = p.word_matrix(&e.tile).apply(&BoundaryPoint::int(-1));
        assert_eq!(x, BoundaryPoint::int(1));
    }
}
