//! Floating-point geometry of the upper half-plane.

use crate::error::{Error, Result};

/// A point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub fn new(x: f64, y: f64) -> Self {
        Pt { x, y }
    }

    pub fn abs2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Hyperbolic distance via `sinh(d/2) = |z1 − z2| / (2 sqrt(y1 y2))`.
pub fn hyp_distance(z1: Pt, z2: Pt) -> Result<f64> {
    if !(z1.y > 0.0 && z2.y > 0.0) {
        return Err(Error::precondition("points must lie in the upper half-plane"));
    }
    let dx = z1.x - z2.x;
    let dy = z1.y - z2.y;
    let e = (dx * dx + dy * dy).sqrt();
    Ok(2.0 * (e / (2.0 * (z1.y * z2.y).sqrt())).asinh())
}

/// A geodesic in float form: a vertical line `Re z = x` or a semicircle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FGeod {
    Vertical(f64),
    /// Semicircle with center `c`, radius `r` and endpoints `u < v`.
    Circle { c: f64, r: f64, u: f64, v: f64 },
}

impl FGeod {
    /// Geodesic through two distinct boundary points (`f64::INFINITY` allowed).
    pub fn from_ends(u: f64, v: f64) -> FGeod {
        if u.is_infinite() {
            FGeod::Vertical(v)
        } else if v.is_infinite() {
            FGeod::Vertical(u)
        } else {
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            FGeod::Circle { c: 0.5 * (u + v), r: 0.5 * (v - u), u, v }
        }
    }

    /// Hyperbolic distance from `z` to the geodesic.
    pub fn dist(&self, z: Pt) -> f64 {
        self.signed_sinh(z).abs().asinh()
    }

    /// `sinh` of the signed distance; positive to the right of a vertical line
    /// and outside a semicircle.
    pub fn signed_sinh(&self, z: Pt) -> f64 {
        match *self {
            FGeod::Vertical(u) => (z.x - u) / z.y,
            FGeod::Circle { u, v, .. } => {
                // (|z − c|² − r²) / (2 r y) = ((x − u)(x − v) + y²) / (y (v − u))
                let a = (z.x - u) / z.y;
                let b = (z.x - v) / (v - u);
                a * b + z.y / (v - u)
            }
        }
    }

    /// Highest point (for semicircles) or a point at height 1 (vertical lines).
    pub fn top(&self) -> Pt {
        match *self {
            FGeod::Vertical(u) => Pt::new(u, 1.0),
            FGeod::Circle { c, r, .. } => Pt::new(c, r),
        }
    }
}

/// Intersection of two float geodesics when it exists in the upper half-plane.
pub fn intersect_fgeod(g1: &FGeod, g2: &FGeod) -> Option<Pt> {
    match (*g1, *g2) {
        (FGeod::Vertical(_), FGeod::Vertical(_)) => None,
        (FGeod::Vertical(u), FGeod::Circle { c, r, .. }) | (FGeod::Circle { c, r, .. }, FGeod::Vertical(u)) => {
            let dx = u - c;
            let h2 = (r - dx) * (r + dx);
            if h2 <= 0.0 {
                None
            } else {
                Some(Pt::new(u, h2.sqrt()))
            }
        }
        (FGeod::Circle { c: c1, r: r1, .. }, FGeod::Circle { c: c2, r: r2, .. }) => {
            if c1 == c2 {
                return None;
            }
            // radical line: x = (r1² − r2² + c2² − c1²) / (2 (c2 − c1))
            let x = ((r1 - r2) * (r1 + r2) + (c2 - c1) * (c2 + c1)) / (2.0 * (c2 - c1));
            let dx = x - c1;
            let h2 = (r1 - dx) * (r1 + dx);
            if h2 <= 0.0 {
                None
            } else {
                Some(Pt::new(x, h2.sqrt()))
            }
        }
    }
}

/// Unit tangent direction of a geodesic at a point on it, oriented from the
/// endpoint `from` toward the other endpoint.
pub fn tangent_at(g: &FGeod, z: Pt, from: f64) -> (f64, f64) {
    match *g {
        FGeod::Vertical(_) => {
            if from.is_infinite() {
                (0.0, -1.0)
            } else {
                (0.0, 1.0)
            }
        }
        FGeod::Circle { c, .. } => {
            // tangent is perpendicular to the radius (z − c)
            let (rx, ry) = (z.x - c, z.y);
            let n = (rx * rx + ry * ry).sqrt();
            let (tx, ty) = (-ry / n, rx / n);
            // counterclockwise travel moves from the right end to the left end
            let ccw_from_right = from > c;
            if ccw_from_right {
                (tx, ty)
            } else {
                (-tx, -ty)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let i = Pt::new(0.0, 1.0);
        assert_eq!(hyp_distance(i, i).unwrap(), 0.0);
        let d = hyp_distance(i, Pt::new(0.0, 2.0)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert!(hyp_distance(i, Pt::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn vertical_and_circle_meet() {
        let p = intersect_fgeod(&FGeod::from_ends(-1.0, 1.0), &FGeod::from_ends(0.0, f64::INFINITY)).unwrap();
        assert!((p.x).abs() < 1e-15 && (p.y - 1.0).abs() < 1e-15);
    }
}
