//! Möbius maps with exact entries.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::boundary::BoundaryPoint;
use super::plane::Pt;
use crate::error::{Error, Result};

/// Integer 2×2 matrix `[[a, b], [c, d]]`, used for group elements (det 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMat {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMat { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        IntMat::new(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        IntMat {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Adjugate; the inverse when the determinant is 1.
    pub fn inverse(&self) -> IntMat {
        IntMat { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_pm_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && self.a.abs().is_one()
    }

    pub fn apply(&self, x: &BoundaryPoint) -> BoundaryPoint {
        x.apply_int(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64().unwrap(),
            self.b.to_f64().unwrap(),
            self.c.to_f64().unwrap(),
            self.d.to_f64().unwrap(),
        ]
    }

    pub fn apply_pt(&self, z: Pt) -> Pt {
        mobius_f64(&self.to_f64(), z)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Applies a real Möbius matrix to a point of the upper half-plane.
pub fn mobius_f64(m: &[f64; 4], z: Pt) -> Pt {
    let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
    // (a z + b) / (c z + d)
    let nr = a * z.x + b;
    let ni = a * z.y;
    let dr = c * z.x + d;
    let di = c * z.y;
    let den = dr * dr + di * di;
    Pt { x: (nr * dr + ni * di) / den, y: (ni * dr - nr * di) / den }
}

/// Applies a real Möbius matrix to a boundary point given as a double
/// (`f64::INFINITY` is the point at infinity).
pub fn mobius_boundary_f64(m: &[f64; 4], x: f64) -> f64 {
    let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
    if x.is_infinite() {
        if c == 0.0 {
            return f64::INFINITY;
        }
        return a / c;
    }
    let den = c * x + d;
    if den == 0.0 {
        return f64::INFINITY;
    }
    (a * x + b) / den
}

pub fn mat_mul_f64(p: &[f64; 4], q: &[f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

pub fn mat_inv_f64(p: &[f64; 4]) -> [f64; 4] {
    [p[3], -p[1], -p[2], p[0]]
}

/// Möbius map with rational entries and determinant exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

/// Classification of a nontrivial Möbius map by its trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    Hyperbolic(BoundaryPoint, BoundaryPoint),
    Parabolic(BoundaryPoint),
}

impl MoebiusMap {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        if m.det() != BigRational::one() {
            return Err(Error::precondition(format!("determinant of {m} is not 1")));
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        MoebiusMap::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        MoebiusMap::from_ints(1, 0, 0, 1).unwrap()
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.d
    }

    pub fn compose(&self, o: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn is_pm_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && self.a.abs().is_one()
    }

    /// Integer matrix with the same action (entries scaled by a common denominator).
    pub fn scaled_int(&self) -> IntMat {
        let l = self.a.denom().lcm(self.b.denom()).lcm(self.c.denom()).lcm(self.d.denom());
        let s = |r: &BigRational| (r * BigRational::from_integer(l.clone())).to_integer();
        IntMat { a: s(&self.a), b: s(&self.b), c: s(&self.c), d: s(&self.d) }
    }

    pub fn apply(&self, x: &BoundaryPoint) -> BoundaryPoint {
        self.scaled_int().apply(x)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64().unwrap(),
            self.b.to_f64().unwrap(),
            self.c.to_f64().unwrap(),
            self.d.to_f64().unwrap(),
        ]
    }

    pub fn apply_pt(&self, z: Pt) -> Pt {
        mobius_f64(&self.to_f64(), z)
    }

    /// Fixed points on the boundary: roots of `c x² + (d − a) x − b = 0`.
    pub fn fixed_points(&self) -> Result<FixedPoints> {
        if self.is_pm_identity() {
            return Err(Error::precondition("identity has no isolated fixed points"));
        }
        let m = self.scaled_int();
        fixed_points_int(&m)
    }
}

/// Fixed points of an integer matrix with nonzero determinant, classified by
/// the sign of the discriminant `(d − a)² + 4bc`.
pub fn fixed_points_int(m: &IntMat) -> Result<FixedPoints> {
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let disc = (d - a) * (d - a) + BigInt::from(4) * b * c;
    if disc.is_negative() {
        return Err(Error::precondition(format!("elliptic element {m}")));
    }
    if c.is_zero() {
        if a == d {
            if b.is_zero() {
                return Err(Error::precondition("identity has no isolated fixed points"));
            }
            return Ok(FixedPoints::Parabolic(BoundaryPoint::Infinity));
        }
        // a x + b = d x  =>  x = b / (d - a), plus ∞
        let x = BoundaryPoint::rational(b.clone(), d - a);
        return Ok(FixedPoints::Hyperbolic(x, BoundaryPoint::Infinity));
    }
    let two_c = BigInt::from(2) * c;
    if disc.is_zero() {
        return Ok(FixedPoints::Parabolic(BoundaryPoint::rational(a - d, two_c)));
    }
    // x = ((a − d) ± √disc) / (2c)
    let x1 = BoundaryPoint::surd(a - d, BigInt::one(), two_c.clone(), disc.clone())?;
    let x2 = BoundaryPoint::surd(a - d, -BigInt::one(), two_c, disc)?;
    let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    Ok(FixedPoints::Hyperbolic(lo, hi))
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Convenience: exact image of a boundary point.
pub fn mob_apply(m: &MoebiusMap, x: &BoundaryPoint) -> BoundaryPoint {
    m.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points_of_presets() {
        let a = MoebiusMap::from_ints(1, 2, 0, 1).unwrap();
        assert_eq!(a.fixed_points().unwrap(), FixedPoints::Parabolic(BoundaryPoint::Infinity));
        let b = MoebiusMap::from_ints(1, 0, 2, 1).unwrap();
        assert_eq!(b.fixed_points().unwrap(), FixedPoints::Parabolic(BoundaryPoint::int(0)));
        let ab = MoebiusMap::from_ints(5, 2, 2, 1).unwrap();
        let lo = BoundaryPoint::parse("(1-1*sqrt(2))/1").unwrap();
        let hi = BoundaryPoint::parse("(1+1*sqrt(2))/1").unwrap();
        assert_eq!(ab.fixed_points().unwrap(), FixedPoints::Hyperbolic(lo, hi));
    }

    #[test]
    fn elliptic_is_rejected() {
        let r = MoebiusMap::from_ints(0, -1, 1, 0).unwrap();
        assert!(r.fixed_points().is_err());
    }

    #[test]
    fn determinant_checked() {
        assert!(MoebiusMap::from_ints(2, 0, 0, 1).is_err());
    }
}
