//! Exact boundary algebra and floating-point plane geometry of the upper half-plane.

pub mod boundary;
pub mod mobius;
pub mod plane;

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use boundary::BoundaryPoint;
pub use mobius::{mob_apply, FixedPoints, IntMat, MoebiusMap};
pub use plane::{hyp_distance, FGeod, Pt};

use crate::error::{Error, Result};

/// Boxes whose arcs are closer than this angle (radians, seen from the box
/// center) are rejected unless a caller lowers the floor.
pub const DEFAULT_THETA_FLOOR: f64 = 0.05;

/// An unoriented geodesic, stored with `lo < hi` in the order of R ∪ {∞}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Geodesic {
    pub lo: BoundaryPoint,
    pub hi: BoundaryPoint,
}

impl Geodesic {
    pub fn new(x: BoundaryPoint, y: BoundaryPoint) -> Result<Self> {
        match x.cmp(&y) {
            Ordering::Less => Ok(Geodesic { lo: x, hi: y }),
            Ordering::Greater => Ok(Geodesic { lo: y, hi: x }),
            Ordering::Equal => Err(Error::precondition("geodesic endpoints coincide")),
        }
    }

    pub fn ends(&self) -> (&BoundaryPoint, &BoundaryPoint) {
        (&self.lo, &self.hi)
    }

    pub fn ends_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    pub fn to_fgeod(&self) -> FGeod {
        let (u, v) = self.ends_f64();
        FGeod::from_ends(u, v)
    }

    pub fn apply(&self, m: &IntMat) -> Geodesic {
        Geodesic::new(m.apply(&self.lo), m.apply(&self.hi)).expect("Möbius maps are injective")
    }

    pub fn has_end(&self, x: &BoundaryPoint) -> bool {
        &self.lo == x || &self.hi == x
    }

    /// Hyperbolic distance from a point to the geodesic.
    pub fn dist_to(&self, z: Pt) -> f64 {
        self.to_fgeod().dist(z)
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.lo, self.hi)
    }
}

/// Relative position of two geodesics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossKind {
    Cross,
    Disjoint,
    ShareEndpoint,
}

fn strictly_between(x: &BoundaryPoint, lo: &BoundaryPoint, hi: &BoundaryPoint) -> bool {
    lo < x && x < hi
}

/// Exact crossing test: the endpoint pairs strictly interleave.
pub fn geodesics_cross(g1: &Geodesic, g2: &Geodesic) -> CrossKind {
    if g1.has_end(&g2.lo) || g1.has_end(&g2.hi) {
        return CrossKind::ShareEndpoint;
    }
    let a = strictly_between(&g2.lo, &g1.lo, &g1.hi);
    let b = strictly_between(&g2.hi, &g1.lo, &g1.hi);
    if a != b {
        CrossKind::Cross
    } else {
        CrossKind::Disjoint
    }
}

/// The intersection point of two crossing geodesics.
pub fn crossing_point(g1: &Geodesic, g2: &Geodesic) -> Result<Pt> {
    if geodesics_cross(g1, g2) != CrossKind::Cross {
        return Err(Error::precondition(format!("{g1} and {g2} do not cross")));
    }
    plane::intersect_fgeod(&g1.to_fgeod(), &g2.to_fgeod())
        .ok_or_else(|| Error::degenerate(format!("float intersection of {g1} and {g2} lost")))
}

/// Chordal distance `|C(x) − C(y)|` with `C(z) = (z − i)/(z + i)`, written as
/// `2|x − y| / (sqrt(1 + x²) sqrt(1 + y²))`.
pub fn chordal_f64(x: f64, y: f64) -> f64 {
    match (x.is_infinite(), y.is_infinite()) {
        (true, true) => 0.0,
        (true, false) => 2.0 / 1f64.hypot(y),
        (false, true) => 2.0 / 1f64.hypot(x),
        (false, false) => 2.0 * (x - y).abs() / (1f64.hypot(x) * 1f64.hypot(y)),
    }
}

pub fn chordal_dist(x: &BoundaryPoint, y: &BoundaryPoint) -> f64 {
    if x == y {
        return 0.0;
    }
    chordal_f64(x.to_f64(), y.to_f64())
}

/// Hausdorff distance between two finite boundary sets under the chordal metric.
pub fn hausdorff_points(s1: &[f64], s2: &[f64]) -> f64 {
    let one_sided = |a: &[f64], b: &[f64]| {
        a.iter()
            .map(|&x| b.iter().map(|&y| chordal_f64(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_sided(s1, s2).max(one_sided(s2, s1))
}

/// Two-point Hausdorff distance between geodesics under the chordal metric.
pub fn pair_hausdorff(s1: &Geodesic, s2: &Geodesic) -> f64 {
    if s1 == s2 {
        return 0.0;
    }
    let (a, b) = s1.ends_f64();
    let (c, d) = s2.ends_f64();
    hausdorff_points(&[a, b], &[c, d])
}

/// Angle of a boundary point on the circle after the Cayley transform, in `[0, 2π)`.
pub fn circle_angle(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    PI + 2.0 * x.atan()
}

/// Angle of `x` on the circle seen from the basepoint `z0`.
pub fn circle_angle_from(x: f64, z0: Pt) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    circle_angle((x - z0.x) / z0.y)
}

fn ccw_gap(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(2.0 * PI)
}

/// A closed boundary arc swept counterclockwise (increasing real order,
/// passing through ∞ when `start > end`) from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
}

impl Arc {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start == end {
            return Err(Error::precondition("arc endpoints coincide"));
        }
        Ok(Arc { start, end })
    }

    pub fn contains(&self, x: &BoundaryPoint) -> bool {
        if self.start < self.end {
            &self.start <= x && x <= &self.end
        } else {
            x >= &self.start || x <= &self.end
        }
    }

    /// Membership of a double with an angular margin (positive widens the arc).
    pub fn contains_f64(&self, x: f64, margin: f64) -> bool {
        let (s, e) = (circle_angle(self.start.to_f64()), circle_angle(self.end.to_f64()));
        let len = ccw_gap(s, e);
        let t = ccw_gap(s, circle_angle(x));
        if t <= len + margin {
            return true;
        }
        // within margin before the start
        2.0 * PI - t <= margin
    }

    /// Angular distance from `x` to the nearest arc endpoint.
    pub fn endpoint_gap(&self, x: f64) -> f64 {
        let ax = circle_angle(x);
        let g = |p: &BoundaryPoint| {
            let d = ccw_gap(circle_angle(p.to_f64()), ax);
            d.min(2.0 * PI - d)
        };
        g(&self.start).min(g(&self.end))
    }

    pub fn apply(&self, m: &IntMat) -> Arc {
        Arc { start: m.apply(&self.start), end: m.apply(&self.end) }
    }

    /// Angular length on the Cayley circle.
    pub fn angular_length(&self) -> f64 {
        ccw_gap(circle_angle(self.start.to_f64()), circle_angle(self.end.to_f64()))
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} -> {}]", self.start, self.end)
    }
}

/// A pair of boundary arcs with disjoint closures; the compact set of
/// geodesics with one end in each arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBox {
    pub i: Arc,
    pub j: Arc,
}

impl PairBox {
    pub fn new(i: Arc, j: Arc) -> Result<Self> {
        let overlap =
            i.contains(&j.start) || i.contains(&j.end) || j.contains(&i.start) || j.contains(&i.end);
        if overlap {
            return Err(Error::precondition(format!("box arcs {i} and {j} overlap")));
        }
        Ok(PairBox { i, j })
    }

    pub fn apply(&self, m: &IntMat) -> PairBox {
        PairBox { i: self.i.apply(m), j: self.j.apply(m) }
    }

    pub fn contains(&self, g: &Geodesic) -> bool {
        (self.i.contains(&g.lo) && self.j.contains(&g.hi)) || (self.i.contains(&g.hi) && self.j.contains(&g.lo))
    }

    /// Crossing point of the diagonals `{I.start, J.start}` and `{I.end, J.end}`;
    /// moves equivariantly with the box.
    pub fn center(&self) -> Result<Pt> {
        let d1 = Geodesic::new(self.i.start.clone(), self.j.start.clone())?;
        let d2 = Geodesic::new(self.i.end.clone(), self.j.end.clone())?;
        crossing_point(&d1, &d2)
    }

    /// Smallest angular gap between the arcs seen from `z0`.
    pub fn theta_min_from(&self, z0: Pt) -> f64 {
        let ang = |p: &BoundaryPoint| circle_angle_from(p.to_f64(), z0);
        let g1 = ccw_gap(ang(&self.i.end), ang(&self.j.start));
        let g2 = ccw_gap(ang(&self.j.end), ang(&self.i.start));
        g1.min(g2)
    }

    /// Smallest angular gap seen from the box center.
    pub fn theta_min(&self) -> Result<f64> {
        Ok(self.theta_min_from(self.center()?))
    }

    /// Errors unless the gap seen from the center is at least `floor`.
    pub fn validate(&self, floor: f64) -> Result<()> {
        let t = self.theta_min()?;
        if t < floor {
            return Err(Error::precondition(format!("box angular gap {t:.4} below floor {floor}")));
        }
        Ok(())
    }
}

/// Radius `R = artanh(cos(θ_min / 2))` such that every geodesic with endpoints in
/// `I × J` passes within `R` of the basepoint.
pub fn box_window_radius(b: &PairBox, basepoint: Pt) -> Result<f64> {
    if b.i.contains(&b.j.start) || b.i.contains(&b.j.end) || b.j.contains(&b.i.start) {
        return Err(Error::precondition("box arcs overlap"));
    }
    Ok(radius_for_gap(b.theta_min_from(basepoint)))
}

pub fn radius_for_gap(theta: f64) -> f64 {
    let c = (theta / 2.0).cos().max(0.0);
    c.atanh()
}

/// Horoball based at a boundary point: `Im z > h` at ∞, otherwise the disk
/// tangent at `p/q` with Euclidean diameter `h / q²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    pub base: BoundaryPoint,
    pub height: f64,
}

impl Horoball {
    pub fn new(base: BoundaryPoint, height: f64) -> Result<Self> {
        if !(height > 0.0) {
            return Err(Error::precondition("horoball height must be positive"));
        }
        if let BoundaryPoint::Surd(_) = base {
            return Err(Error::precondition("horoballs are based at rational points or ∞"));
        }
        Ok(Horoball { base, height })
    }

    /// Euclidean circle `(center_x, center_y, radius)`; `None` at ∞.
    pub fn circle(&self) -> Option<(f64, f64, f64)> {
        match &self.base {
            BoundaryPoint::Rational(r) => {
                let q = r.denom().to_f64().unwrap();
                let rad = self.height / (2.0 * q * q);
                Some((r.to_f64().unwrap(), rad, rad))
            }
            _ => None,
        }
    }

    /// Strict membership of the open horoball.
    pub fn contains(&self, z: Pt) -> bool {
        match self.circle() {
            None => z.y > self.height,
            Some((cx, cy, r)) => {
                let dx = z.x - cx;
                let dy = z.y - cy;
                dx * dx + dy * dy < r * r
            }
        }
    }

    /// Signed penetration of a geodesic into the horoball: positive when the
    /// geodesic enters the open horoball.
    pub fn penetration(&self, g: &FGeod) -> f64 {
        match (self.circle(), *g) {
            (None, FGeod::Vertical(_)) => f64::INFINITY,
            (None, FGeod::Circle { r, .. }) => r - self.height,
            (Some((cx, _, rad)), FGeod::Vertical(u)) => {
                if (u - cx).abs() < 1e-300 {
                    f64::INFINITY
                } else {
                    // vertical line meets the disk iff |u − cx| < rad
                    rad - (u - cx).abs()
                }
            }
            (Some((cx, cy, rad)), FGeod::Circle { c, r, .. }) => {
                // the circle meets the open disk iff |d − r| < rad
                if ((cx - c).abs() - r).abs() <= 1e-12 * r.max(1.0) {
                    return f64::INFINITY;
                }
                let d = ((cx - c).powi(2) + cy * cy).sqrt();
                rad - (d - r).abs()
            }
        }
    }
}

/// Sign helper used by tests and the CLI.
pub fn is_negative_rational(x: &BoundaryPoint) -> bool {
    x.as_rational().map(|r| r.is_negative()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(s).unwrap()
    }

    #[test]
    fn cross_examples() {
        let g = |a: &str, b: &str| Geodesic::new(bp(a), bp(b)).unwrap();
        assert_eq!(geodesics_cross(&g("-1", "1"), &g("0", "inf")), CrossKind::Cross);
        assert_eq!(geodesics_cross(&g("0", "inf"), &g("2", "inf")), CrossKind::ShareEndpoint);
        let ax = g("(1-1*sqrt(2))/1", "(1+1*sqrt(2))/1");
        assert_eq!(geodesics_cross(&ax, &g("0", "inf")), CrossKind::Cross);
        assert_eq!(geodesics_cross(&g("1", "2"), &g("3", "4")), CrossKind::Disjoint);
        assert_eq!(geodesics_cross(&g("1", "4"), &g("2", "3")), CrossKind::Disjoint);
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(chordal_dist(&bp("0"), &bp("0")), 0.0);
        assert!((chordal_dist(&bp("0"), &bp("inf")) - 2.0).abs() < 1e-15);
        assert!((chordal_dist(&bp("0"), &bp("1")) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn arc_wraps_through_infinity() {
        let a = Arc::new(bp("3"), bp("-3")).unwrap();
        assert!(a.contains(&bp("inf")));
        assert!(a.contains(&bp("100")));
        assert!(a.contains(&bp("-3")));
        assert!(!a.contains(&bp("0")));
    }

    #[test]
    fn horoball_membership() {
        let h = Horoball::new(bp("1/2"), 1.0).unwrap();
        // diameter 1/4 at 1/2
        assert!(h.contains(Pt::new(0.5, 0.2)));
        assert!(!h.contains(Pt::new(0.5, 0.3)));
    }
}
