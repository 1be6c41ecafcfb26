//! Intersection numbers `i(μ, ν) = μ × ν(I_F)` of discrete currents.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::currents::{anbn_sequence, Atom, AtomOrbit, DiscreteCurrent};
use crate::error::{Error, Result};
use crate::fuchsian::{HorocycleParameter, SurfacePreset, Word};
use crate::geom::mobius::mobius_boundary_f64;
use crate::geom::{circle_angle, crossing_point, geodesics_cross, BoundaryPoint, CrossKind, Geodesic, Pt};

/// Half-width (in `sinh` of distance) of the band in which a point counts as
/// lying on a wall; such points belong to F iff F owns the wall.
pub const WALL_BAND: f64 = 1e-9;

/// A counted crossing: both representatives meet at `point ∈ tile·F`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingRecord {
    pub rep1: Geodesic,
    pub rep2: Geodesic,
    pub point: (f64, f64),
    pub tile: Word,
}

/// Crossings of two atoms plus the number of asymptotic (shared endpoint)
/// pairs, which are not transverse and count 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingList {
    pub records: Vec<CrossingRecord>,
    pub tangencies: usize,
}

impl SurfacePreset {
    /// Membership of F with the ownership convention applied inside a band
    /// around each wall.
    pub fn owns_point(&self, z: Pt) -> bool {
        for k in 0..self.walls.len() {
            let s = self.outside_sign[k] * self.wall_fgeod(k).signed_sinh(z);
            if s > WALL_BAND {
                return false;
            }
            if s >= -WALL_BAND && !self.walls[k].owned {
                return false;
            }
        }
        true
    }
}

/// Pairs `(α, β)` of orbit geodesics meeting F whose crossing point lies in F.
pub fn crossing_list_orbits(p: &SurfacePreset, o1: &AtomOrbit, o2: &AtomOrbit) -> Result<CrossingList> {
    let mut records = Vec::new();
    let mut tangencies = 0;
    for a in &o1.sf {
        for b in &o2.sf {
            match geodesics_cross(a, b) {
                CrossKind::Disjoint => {}
                CrossKind::ShareEndpoint => {
                    if a == b {
                        continue;
                    }
                    tangencies += 1;
                }
                CrossKind::Cross => {
                    let z = crossing_point(a, b)?;
                    if p.owns_point(z) {
                        records.push(CrossingRecord {
                            rep1: a.clone(),
                            rep2: b.clone(),
                            point: (z.x, z.y),
                            tile: Word::identity(),
                        });
                    }
                }
            }
        }
    }
    Ok(CrossingList { records, tangencies })
}

pub fn crossing_list(p: &SurfacePreset, a1: &Atom, a2: &Atom) -> Result<CrossingList> {
    crossing_list_orbits(p, &a1.orbit(p)?, &a2.orbit(p)?)
}

/// `Σ w₁ w₂ · #crossings` over atom pairs.
pub fn intersection_number(p: &SurfacePreset, mu: &DiscreteCurrent, nu: &DiscreteCurrent) -> Result<f64> {
    let (pm, pn) = (mu.prepare(p)?, nu.prepare(p)?);
    let mut s = 0.0;
    for (w1, o1) in &pm.atoms {
        for (w2, o2) in &pn.atoms {
            let c = crossing_list_orbits(p, o1, o2)?.records.len();
            s += w1 * o1.factor * w2 * o2.factor * c as f64;
        }
    }
    Ok(s)
}

/// Row of the blow-up table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupRow {
    pub n: usize,
    pub count: usize,
    /// Translates `a⁻ᵏ Ax(aⁿbⁿ)`, `0 ≤ k ≤ n`, all cross `{0, ∞}` (exact check).
    pub lower_bound_family: bool,
}

/// Exact check that `n − √(n²+1) − 2k < 0 < n + √(n²+1) − 2k` for `0 ≤ k ≤ n`.
pub fn blowup_family_straddles(n: usize) -> Result<bool> {
    let n = n as i64;
    let zero = BoundaryPoint::int(0);
    for k in 0..=n {
        let lo = BoundaryPoint::surd((n - 2 * k).into(), (-1).into(), 1.into(), (n * n + 1).into())?;
        let hi = BoundaryPoint::surd((n - 2 * k).into(), 1.into(), 1.into(), (n * n + 1).into())?;
        if !(lo < zero && zero < hi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n ↦ i(η_{aⁿbⁿ}, η_{0,∞})` for `1 ≤ n ≤ n_max`.
pub fn blowup_table(p: &SurfacePreset, n_max: usize) -> Result<Vec<BlowupRow>> {
    let ell = crate::currents::eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::Infinity)?.orbit(p)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let o = anbn_sequence(p, n)?.orbit(p)?;
        let count = crossing_list_orbits(p, &o, &ell)?.records.len();
        rows.push(BlowupRow { n, count, lower_bound_family: blowup_family_straddles(n)? });
    }
    Ok(rows)
}

/// Whether every atom geodesic avoids all open horoballs of `λ`. Decided on
/// the orbit geodesics meeting F against the horoballs at the vertices of F.
pub fn gc_lambda_membership(p: &SurfacePreset, mu: &DiscreteCurrent, lambda: &HorocycleParameter) -> Result<bool> {
    p.validate_lambda(lambda)?;
    let balls: Vec<_> = (0..p.vertices.len()).map(|v| p.vertex_horoball(v, lambda)).collect();
    for (_, a) in &mu.atoms {
        if matches!(a, Atom::CuspPair { .. }) {
            return Ok(false);
        }
        for g in a.orbit(p)?.sf {
            let fg = g.to_fgeod();
            if balls.iter().any(|b| b.penetration(&fg) > 0.0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brute-force count of `i(η₁, η₂)`: translates `h γ₂` (`|h| ≤ max_len`)
/// crossing `γ₁`, modulo the stabilizer of `γ₁` (a fundamental segment of
/// the axis when `γ₁` is closed).
pub fn brute_crossings(p: &SurfacePreset, a1: &Atom, a2: &Atom, max_len: usize) -> Result<usize> {
    let g1 = a1.geodesic().clone();
    let g2 = a2.geodesic().clone();
    let (u1, v1) = g1.ends_f64();
    let (x, y) = g2.ends_f64();
    // position along γ₁ for closed atoms: log |(z − u)/(v − z)|
    let period = match a1 {
        Atom::Closed { root, .. } => {
            let tr: f64 = num_traits::ToPrimitive::to_f64(&p.word_matrix(root).trace()).unwrap().abs();
            Some(2.0 * (tr / 2.0).acosh())
        }
        Atom::CuspPair { .. } => None,
    };
    // position of the crossing with `d` along γ₁: z ↦ (z − u)/(v − z) sends γ₁
    // to the imaginary axis and `d` to a geodesic over s′ < 0 < t′, which
    // meets it at height √|s′t′|
    let pos = |d: &Geodesic| -> f64 {
        let (s, t) = d.ends_f64();
        let m = |w: f64| -> f64 {
            if w.is_infinite() {
                return if v1.is_infinite() { f64::NAN } else { -1.0 };
            }
            if v1.is_infinite() {
                w - u1
            } else if u1.is_infinite() {
                1.0 / (v1 - w)
            } else {
                (w - u1) / (v1 - w)
            }
        };
        0.5 * (m(s).abs().ln() + m(t).abs().ln())
    };
    let (alo, ahi) = {
        let (a, b) = (circle_angle(u1), circle_angle(v1));
        (a.min(b), a.max(b))
    };
    let mut hits: Vec<Word> = Vec::new();
    crate::oracle::for_each_word(p, max_len, &mut |l, m| {
        let (s, t) = (mobius_boundary_f64(m, x), mobius_boundary_f64(m, y));
        let (cs, ct) = (circle_angle(s), circle_angle(t));
        let near = |c: f64| (c - alo).abs() < 1e-9 || (c - ahi).abs() < 1e-9;
        let inside = |c: f64| c > alo && c < ahi;
        if near(cs) || near(ct) || inside(cs) != inside(ct) {
            hits.push(Word::from_letters(l));
        }
    });
    let t0 = 0.123_456_789;
    let mut seen: BTreeSet<Geodesic> = BTreeSet::new();
    for h in hits {
        let d = g2.apply(&p.word_matrix(&h));
        if geodesics_cross(&g1, &d) != CrossKind::Cross {
            continue;
        }
        // one representative per stabilizer coset: crossing in [t0, t0 + ℓ)
        if let Some(ell) = period {
            let t = pos(&d);
            if t < t0 || t >= t0 + ell {
                continue;
            }
        }
        seen.insert(d);
    }
    Ok(seen.len())
}

/// Errors unless the preset is the level-2 group (the blow-up family is
/// specific to it).
pub fn require_gamma2(p: &SurfacePreset) -> Result<()> {
    if p.generators.len() != 2 || p.spec.generators[0].matrix != [1, 2, 0, 1] || p.spec.generators[1].matrix != [1, 0, 2, 1] {
        return Err(Error::precondition("blow-up experiment needs the gamma2 preset"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{eta_closed, eta_cusp_pair};
    use crate::fuchsian::preset_gamma2;

    fn bp(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(s).unwrap()
    }

    #[test]
    fn ab_meets_imaginary_axis_at_i() {
        let p = preset_gamma2();
        let ab = eta_closed(&p, &p.parse_word("ab").unwrap()).unwrap();
        let l = eta_cusp_pair(&p, &bp("0"), &bp("inf")).unwrap();
        let cl = crossing_list(&p, &ab, &l).unwrap();
        assert!(cl.records.iter().any(|r| (r.point.0).abs() < 1e-12 && (r.point.1 - 1.0).abs() < 1e-12));
        let rev = crossing_list(&p, &l, &ab).unwrap();
        assert_eq!(cl.records.len(), rev.records.len());
    }

    #[test]
    fn imaginary_axis_is_simple() {
        let p = preset_gamma2();
        let l = DiscreteCurrent::single(1.0, eta_cusp_pair(&p, &bp("0"), &bp("inf")).unwrap());
        assert_eq!(intersection_number(&p, &l, &l).unwrap(), 0.0);
        assert_eq!(intersection_number(&p, &l, &DiscreteCurrent::zero()).unwrap(), 0.0);
    }

    #[test]
    fn family_straddles() {
        for n in 1..=32 {
            assert!(blowup_family_straddles(n).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let p = preset_gamma2();
        let l = DiscreteCurrent::single(1.0, eta_cusp_pair(&p, &bp("0"), &bp("inf")).unwrap());
        let ab = DiscreteCurrent::single(1.0, eta_closed(&p, &p.parse_word("ab").unwrap()).unwrap());
        let d = p.default_lambda();
        assert!(!gc_lambda_membership(&p, &l, &d).unwrap());
        assert!(!gc_lambda_membership(&p, &ab, &d).unwrap());
        assert!(gc_lambda_membership(&p, &ab, &HorocycleParameter::uniform(3, 10.0)).unwrap());
        assert!(gc_lambda_membership(&p, &DiscreteCurrent::zero(), &d).unwrap());
    }
}

#[cfg(test)]
mod oracle_tests {
    use super::*;
    use crate::currents::{eta_closed, eta_cusp_pair};
    use crate::fuchsian::preset_gamma2;

    #[test]
    fn matches_brute_force_small() {
        let p = preset_gamma2();
        let atoms = vec![
            eta_cusp_pair(&p, &BoundaryPoint::int(0), &BoundaryPoint::Infinity).unwrap(),
            eta_closed(&p, &p.parse_word("ab").unwrap()).unwrap(),
            eta_closed(&p, &p.parse_word("aabb").unwrap()).unwrap(),
        ];
        for a in &atoms {
            for b in &atoms {
                let fast = crossing_list(&p, a, b).unwrap().records.len();
                let slow = brute_crossings(&p, a, b, 9).unwrap();
                assert_eq!(fast, slow, "{} x {}", a.describe(&p), b.describe(&p));
            }
        }
    }
}
