//! Test sets: the default box suite and piecewise-linear bumps.

use std::f64::consts::PI;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{SurfacePreset, Word};
use crate::geom::{circle_angle, Arc, BoundaryPoint, PairBox};

/// Seed for the translating words of the default suite.
pub const SUITE_SEED: u64 = 0x5eed_2024;
/// Least angular gap, seen from each box center, in the default suite.
pub const SUITE_THETA_MIN: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteBox {
    pub id: String,
    #[serde(flatten)]
    pub bx: PairBox,
}

fn arc(s: &str, e: &str) -> Arc {
    Arc::new(BoundaryPoint::parse(s).unwrap(), BoundaryPoint::parse(e).unwrap()).unwrap()
}

/// Five boxes: one around the pair `{0, ∞}`, one around `Ax(ab)`, and three
/// translates by seeded random words of length 3. All arc endpoints are
/// odd/odd rationals, which lie in the cusp class of ±1 and so are never
/// endpoints of the suite atoms.
pub fn default_suite(p: &SurfacePreset) -> Vec<SuiteBox> {
    let b0 = PairBox::new(arc("-1/3", "1/3"), arc("3", "-3")).unwrap();
    let b1 = PairBox::new(arc("-5/9", "-1/3"), arc("7/3", "3")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let hs: Vec<Word> = (0..3).map(|_| Word::random(&mut rng, p.rank(), 3)).collect();
    let mut out = vec![
        SuiteBox { id: "B0".into(), bx: b0.clone() },
        SuiteBox { id: "B1".into(), bx: b1.clone() },
    ];
    for (k, h) in hs.iter().enumerate() {
        let base = if k % 2 == 0 { &b0 } else { &b1 };
        out.push(SuiteBox { id: format!("B{}", k + 2), bx: base.apply(&p.word_matrix(h)) });
    }
    out
}

pub fn suite_to_json(s: &[SuiteBox]) -> String {
    serde_json::to_string_pretty(s).expect("suite serializes")
}

pub fn suite_from_json(s: &str) -> Result<Vec<SuiteBox>> {
    let v: Vec<SuiteBox> = serde_json::from_str(s)?;
    for b in &v {
        PairBox::new(b.bx.i.clone(), b.bx.j.clone())?;
    }
    Ok(v)
}

/// Product of tent functions: 1 on the core arcs, decaying linearly to 0 at
/// angular distance `delta` outside them.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub core: PairBox,
    pub delta: f64,
}

fn angle_to_point(phi: f64) -> BoundaryPoint {
    let t = ((phi - PI) / 2.0).tan();
    if !t.is_finite() || t.abs() > 1e12 {
        return BoundaryPoint::Infinity;
    }
    let r = BigRational::from_float(t).expect("finite");
    BoundaryPoint::from_ratio(r)
}

fn tent(a: &Arc, x: f64, delta: f64) -> f64 {
    let s = circle_angle(a.start.to_f64());
    let len = a.angular_length();
    let t = (circle_angle(x) - s).rem_euclid(2.0 * PI);
    if t <= len {
        return 1.0;
    }
    let d = (t - len).min(2.0 * PI - t);
    (1.0 - d / delta).max(0.0)
}

impl Bump {
    pub fn new(core: PairBox, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::precondition("bump margin must be positive"));
        }
        let b = Bump { core, delta };
        b.support()?;
        Ok(b)
    }

    /// The box on which the bump can be nonzero.
    pub fn support(&self) -> Result<PairBox> {
        let widen = |a: &Arc| {
            let s = circle_angle(a.start.to_f64()) - self.delta;
            let e = circle_angle(a.start.to_f64()) + a.angular_length() + self.delta;
            Arc::new(angle_to_point(s), angle_to_point(e))
        };
        PairBox::new(widen(&self.core.i)?, widen(&self.core.j)?)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let (i, j) = (&self.core.i, &self.core.j);
        let a = tent(i, x, self.delta) * tent(j, y, self.delta);
        let b = tent(i, y, self.delta) * tent(j, x, self.delta);
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::preset_gamma2;

    #[test]
    fn suite_angles() {
        let p = preset_gamma2();
        let s = default_suite(&p);
        assert_eq!(s.len(), 5);
        for b in &s {
            let t = b.bx.theta_min().unwrap();
            assert!(t >= SUITE_THETA_MIN, "{} has gap {t}", b.id);
        }
        let back = suite_from_json(&suite_to_json(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn tent_shape() {
        let core = PairBox::new(arc("-1/3", "1/3"), arc("3", "-3")).unwrap();
        let b = Bump::new(core, 0.1).unwrap();
        assert_eq!(b.value(0.0, f64::INFINITY), 1.0);
        assert_eq!(b.value(f64::INFINITY, 0.0), 1.0);
        assert_eq!(b.value(1.0, f64::INFINITY), 0.0);
    }
}
