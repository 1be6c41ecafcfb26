//! Orbit enumeration in compact windows and evaluation against test sets.

use std::collections::BTreeSet;

use super::suite::Bump;
use super::{AtomOrbit, DiscreteCurrent, PreparedCurrent};
use crate::error::{Error, Result};
use crate::fuchsian::{HorocycleParameter, SurfacePreset};
use crate::geom::mobius::mobius_boundary_f64;
use crate::geom::{
    box_window_radius, chordal_f64, circle_angle, hyp_distance, FGeod, Geodesic, PairBox, Pt, DEFAULT_THETA_FLOOR,
};

/// Slack on the float prefilter before exact endpoints are computed.
pub const PREFILTER_MARGIN: f64 = 1e-6;
/// Endpoints this close (chordally) to a box corner count as collisions.
pub const COLLISION_TOL: f64 = 1e-9;

/// A closed hyperbolic ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: Pt,
    pub radius: f64,
}

impl Window {
    pub fn new(center: Pt, radius: f64) -> Result<Self> {
        if !(center.y > 0.0) || !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::precondition("window needs a point of H and a finite radius"));
        }
        Ok(Window { center, radius })
    }

    /// Whether the geodesic meets the window; the predicate shared with the
    /// brute-force oracle.
    pub fn meets(&self, g: &Geodesic) -> bool {
        g.dist_to(self.center) <= self.radius
    }
}

/// Orbit geodesics passing within `radius + slack` of `center`, exact.
pub fn window_candidates(p: &SurfacePreset, orbit: &AtomOrbit, center: Pt, radius: f64) -> Result<BTreeSet<Geodesic>> {
    let tiles = p.tile_words_meeting_ball(center, radius)?;
    let mut out = BTreeSet::new();
    for t in &tiles {
        let mf = p.word_matrix_f64(t);
        let mut exact = None;
        for (i, &(x, y)) in orbit.sf_f64.iter().enumerate() {
            let (u, v) = (mobius_boundary_f64(&mf, x), mobius_boundary_f64(&mf, y));
            if u == v {
                continue;
            }
            if FGeod::from_ends(u, v).dist(center) <= radius + PREFILTER_MARGIN {
                let m = exact.get_or_insert_with(|| p.word_matrix(t));
                out.insert(orbit.sf[i].apply(m));
            }
        }
    }
    Ok(out)
}

/// Every translate of the atom's geodesic meeting the window, once each.
pub fn atoms_in_window(p: &SurfacePreset, orbit: &AtomOrbit, w: &Window) -> Result<Vec<Geodesic>> {
    Ok(window_candidates(p, orbit, w.center, w.radius)?.into_iter().filter(|g| w.meets(g)).collect())
}

fn near_corner(bx: &PairBox, g: &Geodesic) -> bool {
    let (x, y) = g.ends_f64();
    let check = |e: f64, other: f64, near: &crate::geom::Arc, far: &crate::geom::Arc| {
        let at_corner = [&near.start, &near.end].iter().any(|c| chordal_f64(e, c.to_f64()) < COLLISION_TOL);
        at_corner && (far.contains_f64(other, COLLISION_TOL) || far.endpoint_gap(other) < COLLISION_TOL)
    };
    check(x, y, &bx.i, &bx.j) || check(y, x, &bx.i, &bx.j) || check(x, y, &bx.j, &bx.i) || check(y, x, &bx.j, &bx.i)
}

/// Orbit geodesics of one atom inside the box.
pub fn count_box(p: &SurfacePreset, orbit: &AtomOrbit, bx: &PairBox, floor: f64) -> Result<usize> {
    bx.validate(floor)?;
    let center = bx.center()?;
    let r = box_window_radius(bx, center)?;
    let cands = window_candidates(p, orbit, center, r)?;
    let mut n = 0;
    for g in &cands {
        if near_corner(bx, g) {
            return Err(Error::precondition(format!(
                "orbit geodesic {g} meets the boundary of box ({}, {}); perturb the box arcs",
                bx.i, bx.j
            )));
        }
        if bx.contains(g) {
            n += 1;
        }
    }
    Ok(n)
}

pub fn evaluate_box_prepared(p: &SurfacePreset, mu: &PreparedCurrent, bx: &PairBox) -> Result<f64> {
    let mut s = 0.0;
    for (w, orbit) in &mu.atoms {
        s += w * orbit.factor * count_box(p, orbit, bx, DEFAULT_THETA_FLOOR)? as f64;
    }
    Ok(s)
}

/// `Σ weight × #{orbit geodesics with one end in I and the other in J}`.
pub fn evaluate_box(p: &SurfacePreset, mu: &DiscreteCurrent, bx: &PairBox) -> Result<f64> {
    evaluate_box_prepared(p, &mu.prepare(p)?, bx)
}

pub fn evaluate_bump_prepared(p: &SurfacePreset, mu: &PreparedCurrent, bump: &Bump) -> Result<f64> {
    let support = bump.support()?;
    support.validate(DEFAULT_THETA_FLOOR)?;
    let center = support.center()?;
    let r = box_window_radius(&support, center)?;
    let mut s = 0.0;
    for (w, orbit) in &mu.atoms {
        for g in window_candidates(p, orbit, center, r)? {
            let (x, y) = g.ends_f64();
            s += w * orbit.factor * bump.value(x, y);
        }
    }
    Ok(s)
}

/// `Σ weight × f(x, y)` for the product tent function of the bump.
pub fn evaluate_bump(p: &SurfacePreset, mu: &DiscreteCurrent, bump: &Bump) -> Result<f64> {
    evaluate_bump_prepared(p, &mu.prepare(p)?, bump)
}

/// A point of F where two diagonals cross, used as basepoint.
pub fn domain_basepoint(p: &SurfacePreset) -> Result<Pt> {
    let n = p.vertices.len();
    let d1 = Geodesic::new(p.vertices[0].clone(), p.vertices[n / 2].clone())?;
    let d2 = Geodesic::new(p.vertices[1].clone(), p.vertices[n / 2 + 1].clone())?;
    crate::geom::crossing_point(&d1, &d2)
}

/// Radius of a ball about the basepoint containing the truncated domain F̄_λ.
pub fn truncated_domain_radius(p: &SurfacePreset, lambda: &HorocycleParameter, z0: Pt) -> Result<f64> {
    p.validate_lambda(lambda)?;
    let closed = |z: Pt| {
        (0..p.walls.len()).all(|k| p.outside_sign[k] * p.wall_fgeod(k).signed_sinh(z) <= 1e-12)
    };
    let finite: Vec<f64> = p.vertices_f64.iter().copied().filter(|x| x.is_finite()).collect();
    let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let samples = 4000;
    let mut best: f64 = 0.0;
    for v in 0..p.vertices.len() {
        let hb = p.vertex_horoball(v, lambda);
        for i in 1..samples {
            let t = i as f64 / samples as f64;
            let z = match hb.circle() {
                None => Pt::new(lo - 1.0 + t * (hi - lo + 2.0), hb.height),
                Some((cx, cy, r)) => {
                    let a = 2.0 * std::f64::consts::PI * t - std::f64::consts::FRAC_PI_2;
                    Pt::new(cx + r * a.cos(), cy + r * a.sin())
                }
            };
            if z.y > 0.0 && closed(z) {
                best = best.max(hyp_distance(z0, z)?);
            }
        }
    }
    Ok(best + 0.01)
}

/// `μ(A(K₀))` for a ball `K₀` about the basepoint of F containing F̄_λ.
pub fn local_finiteness_check(p: &SurfacePreset, mu: &DiscreteCurrent, lambda: &HorocycleParameter) -> Result<f64> {
    let z0 = domain_basepoint(p)?;
    let w = Window::new(z0, truncated_domain_radius(p, lambda, z0)?)?;
    let pc = mu.prepare(p)?;
    let mut s = 0.0;
    for (wt, orbit) in &pc.atoms {
        s += wt * orbit.factor * atoms_in_window(p, orbit, &w)?.len() as f64;
    }
    Ok(s)
}

/// Angular position used by bump tents.
pub fn angle_of(x: f64) -> f64 {
    circle_angle(x)
}
