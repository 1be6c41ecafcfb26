//! Ping-pong interval systems for `⟨aⁿ, bⁿ⟩` on the level-2 preset and arc
//! approximations of their limit sets.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::mobius::IntMat;
use crate::geom::{circle_angle, Arc, BoundaryPoint, Geodesic};

/// The four ping-pong intervals of `aⁿ = z + 2n` and `bⁿ = z / (2nz + 1)`.
///
/// `aⁿ` maps the complement of `a_rep` into `a_att`, and likewise for `bⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalSystem {
    pub n: u64,
    pub a_att: Arc,
    pub a_rep: Arc,
    pub b_att: Arc,
    pub b_rep: Arc,
}

impl IntervalSystem {
    /// Generator powers in the order `aⁿ, a⁻ⁿ, bⁿ, b⁻ⁿ`, with the interval
    /// each one maps into.
    pub fn generators(&self) -> [(IntMat, &Arc); 4] {
        let k = 2 * self.n as i64;
        [
            (IntMat::new(1, k, 0, 1), &self.a_att),
            (IntMat::new(1, -k, 0, 1), &self.a_rep),
            (IntMat::new(1, 0, k, 1), &self.b_att),
            (IntMat::new(1, 0, -k, 1), &self.b_rep),
        ]
    }

    pub fn arcs(&self) -> [&Arc; 4] {
        [&self.a_att, &self.a_rep, &self.b_att, &self.b_rep]
    }
}

/// Intervals `[n, ∞]`, `[∞, −n]` for `aⁿ` (outside the lines `|Re z| = n`) and
/// `[0, 1/n]`, `[−1/n, 0]` for `bⁿ` (under the isometric circles
/// `|2nz ∓ 1| = 1`). Each pair meets only at its parabolic fixed point; the
/// `a` region and the `b` region must be disjoint, which needs `n ≥ 2`.
pub fn pingpong_intervals(n: u64) -> Result<IntervalSystem> {
    if n == 0 {
        return Err(Error::precondition("power must be positive"));
    }
    let ni = n as i64;
    let s = IntervalSystem {
        n,
        a_att: Arc::new(BoundaryPoint::int(ni), BoundaryPoint::infinity())?,
        a_rep: Arc::new(BoundaryPoint::infinity(), BoundaryPoint::int(-ni))?,
        b_att: Arc::new(BoundaryPoint::int(0), BoundaryPoint::rational(1, ni))?,
        b_rep: Arc::new(BoundaryPoint::rational(-1, ni), BoundaryPoint::int(0))?,
    };
    // [−1/n, 1/n] against [n, −n] through ∞
    let b_region = Arc::new(s.b_rep.start.clone(), s.b_att.end.clone())?;
    let a_region = Arc::new(s.a_att.start.clone(), s.a_rep.end.clone())?;
    let touch = b_region.contains(&a_region.start)
        || b_region.contains(&a_region.end)
        || a_region.contains(&b_region.start)
        || a_region.contains(&b_region.end);
    if touch {
        return Err(Error::precondition(format!(
            "ping-pong fails for n = {n}: the b-interval {b_region} meets the a-interval {a_region}"
        )));
    }
    Ok(s)
}

/// Union of the arcs `w₁ ⋯ w_{k−1}(X_{w_k})` over reduced words of length `k`
/// in the generator powers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSetApprox {
    pub n: u64,
    pub depth: usize,
    pub arcs: Vec<Arc>,
}

impl LimitSetApprox {
    pub fn contains(&self, x: &BoundaryPoint) -> bool {
        self.arcs.iter().any(|a| a.contains(x))
    }
}

pub fn limit_set_approx(n: u64, depth: usize) -> Result<LimitSetApprox> {
    if depth == 0 {
        return Err(Error::precondition("depth must be at least 1"));
    }
    let sys = pingpong_intervals(n)?;
    let gens = sys.generators();
    // (map so far, index of its last letter)
    let mut level: Vec<(IntMat, usize)> = (0..4).map(|i| (gens[i].0.clone(), i)).collect();
    for _ in 2..depth {
        let mut next = Vec::with_capacity(level.len() * 3);
        for (m, last) in &level {
            for (j, (g, _)) in gens.iter().enumerate() {
                if j != (last ^ 1) {
                    next.push((m.mul(g), j));
                }
            }
        }
        level = next;
    }
    let arcs = if depth == 1 {
        sys.arcs().into_iter().cloned().collect()
    } else {
        let mut out = Vec::with_capacity(level.len() * 3);
        for (m, last) in &level {
            for (j, (_, x)) in gens.iter().enumerate() {
                if j != (last ^ 1) {
                    out.push(x.apply(m));
                }
            }
        }
        out
    };
    Ok(LimitSetApprox { n, depth, arcs })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn chord(gap: f64) -> f64 {
    2.0 * (gap / 2.0).sin()
}

/// Chordal Hausdorff distance between the arc union and `{p, q}`.
pub fn hausdorff_to_pair(approx: &LimitSetApprox, pair: &Geodesic) -> f64 {
    let (p, q) = pair.ends();
    let (ap, aq) = (circle_angle(p.to_f64()), circle_angle(q.to_f64()));
    let near = |t: f64| angle_gap(t, ap).min(angle_gap(t, aq));
    // the farthest points from {p, q} are arc endpoints or the two midpoints
    let mids = [(ap + aq) / 2.0, (ap + aq) / 2.0 + PI];
    let mut far: f64 = 0.0;
    for a in &approx.arcs {
        for e in [&a.start, &a.end] {
            far = far.max(near(circle_angle(e.to_f64())));
        }
        for &m in &mids {
            let (s, len) = (circle_angle(a.start.to_f64()), a.angular_length());
            if (m - s).rem_euclid(2.0 * PI) <= len {
                far = far.max(near(m));
            }
        }
    }
    let reach = |x: &BoundaryPoint, ax: f64| {
        if approx.contains(x) {
            return 0.0;
        }
        approx
            .arcs
            .iter()
            .flat_map(|a| [&a.start, &a.end])
            .map(|e| angle_gap(circle_angle(e.to_f64()), ax))
            .fold(f64::INFINITY, f64::min)
    };
    chord(far.max(reach(p, ap)).max(reach(q, aq)))
}

/// One row of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HausdorffRow {
    pub n: u64,
    pub depth: usize,
    pub hausdorff: f64,
}

/// Distances from the depth-`depth` approximations to `{0, ∞}`.
pub fn hausdorff_table(ns: &[u64], depth: usize) -> Result<Vec<HausdorffRow>> {
    let pair = Geodesic::new(BoundaryPoint::int(0), BoundaryPoint::infinity())?;
    ns.iter()
        .map(|&n| Ok(HausdorffRow { n, depth, hausdorff: hausdorff_to_pair(&limit_set_approx(n, depth)?, &pair) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{chordal_dist, pair_hausdorff};
    use crate::geom::mobius::{fixed_points_int, FixedPoints};
    use proptest::prelude::*;

    fn zero_inf() -> Geodesic {
        Geodesic::new(BoundaryPoint::int(0), BoundaryPoint::infinity()).unwrap()
    }

    fn axis(m: &IntMat) -> Geodesic {
        match fixed_points_int(m).unwrap() {
            FixedPoints::Hyperbolic(lo, hi) => Geodesic::new(lo, hi).unwrap(),
            _ => panic!("not hyperbolic"),
        }
    }

    fn power(n: u64, first_a: bool) -> IntMat {
        let k = 2 * n as i64;
        let (a, b) = (IntMat::new(1, k, 0, 1), IntMat::new(1, 0, k, 1));
        if first_a {
            a.mul(&b)
        } else {
            b.mul(&a)
        }
    }

    #[test]
    fn n2_intervals_are_exact() {
        let s = pingpong_intervals(2).unwrap();
        assert_eq!(s.a_att, Arc::new(BoundaryPoint::int(2), BoundaryPoint::infinity()).unwrap());
        assert_eq!(s.a_rep, Arc::new(BoundaryPoint::infinity(), BoundaryPoint::int(-2)).unwrap());
        assert_eq!(s.b_att, Arc::new(BoundaryPoint::int(0), BoundaryPoint::rational(1, 2)).unwrap());
        assert_eq!(s.b_rep, Arc::new(BoundaryPoint::rational(-1, 2), BoundaryPoint::int(0)).unwrap());
    }

    #[test]
    fn n1_is_rejected() {
        let e = pingpong_intervals(1).unwrap_err();
        assert!(e.to_string().contains("ping-pong"));
    }

    #[test]
    fn generators_map_complements_inside() {
        let s = pingpong_intervals(3).unwrap();
        let probes = [-7.5, -3.0, -1.0, -0.2, 0.1, 0.3, 2.0, 3.0, 5.0];
        for (i, (g, target)) in s.generators().iter().enumerate() {
            let rep = s.arcs()[i ^ 1];
            for &x in &probes {
                let b = BoundaryPoint::from_ratio(num_rational::BigRational::from_float(x).unwrap());
                if !rep.contains(&b) {
                    assert!(target.contains(&g.apply(&b)), "generator {i} at {x}");
                }
            }
        }
    }

    #[test]
    fn endpoints_shrink_like_one_over_n() {
        for n in [2u64, 8, 32, 128] {
            let s = pingpong_intervals(n).unwrap();
            let d0 = chordal_dist(&s.b_att.end, &BoundaryPoint::int(0));
            let dinf = chordal_dist(&s.a_att.start, &BoundaryPoint::infinity());
            // 2(1/n)/√(1 + 1/n²) and 2/√(1 + n²)
            let nf = n as f64;
            assert!((d0 - 2.0 / nf / (1.0 + 1.0 / (nf * nf)).sqrt()).abs() < 1e-12);
            assert!((dinf - 2.0 / (1.0 + nf * nf).sqrt()).abs() < 1e-12);
            assert!(d0 * nf <= 2.0 && dinf * nf <= 2.0);
        }
    }

    #[test]
    fn depth_one_is_the_base_system() {
        let s = pingpong_intervals(2).unwrap();
        let l = limit_set_approx(2, 1).unwrap();
        assert_eq!(l.arcs, s.arcs().into_iter().cloned().collect::<Vec<_>>());
    }

    #[test]
    fn arc_counts_and_nesting() {
        for k in 1..=5 {
            let l = limit_set_approx(3, k).unwrap();
            assert_eq!(l.arcs.len(), 4 * 3usize.pow(k as u32 - 1));
            if k > 1 {
                let up = limit_set_approx(3, k - 1).unwrap();
                for a in &l.arcs {
                    assert!(up.arcs.iter().any(|b| b.contains(&a.start) && b.contains(&a.end)), "{a}");
                }
            }
        }
    }

    #[test]
    fn axis_endpoints_stay_inside() {
        for n in [2u64, 3, 5] {
            for first_a in [true, false] {
                let g = axis(&power(n, first_a));
                for k in 1..=6 {
                    let l = limit_set_approx(n, k).unwrap();
                    assert!(l.contains(&g.lo) && l.contains(&g.hi), "n={n} depth={k}");
                }
            }
        }
    }

    #[test]
    fn degenerate_pair_arcs_have_distance_zero() {
        let eps = BoundaryPoint::rational(1, 1_000_000_000_000i64);
        let big = BoundaryPoint::int(1_000_000_000_000);
        let l = LimitSetApprox {
            n: 0,
            depth: 0,
            arcs: vec![Arc::new(BoundaryPoint::int(0), eps).unwrap(), Arc::new(big, BoundaryPoint::infinity()).unwrap()],
        };
        assert!(hausdorff_to_pair(&l, &zero_inf()) < 1e-11);
    }

    #[test]
    fn whole_circle_side_sees_the_midpoint() {
        // [−1, 1] contains the midpoint 1 of 0 and ∞ at chordal distance √2
        let l = LimitSetApprox {
            n: 0,
            depth: 0,
            arcs: vec![Arc::new(BoundaryPoint::int(-1), BoundaryPoint::int(1)).unwrap()],
        };
        let d = hausdorff_to_pair(&l, &zero_inf());
        // ∞ is at angle π/2 from ±1, so the missing end dominates: √2
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_endpoint_oracle() {
        // at n = 4 every arc lies in a quarter circle about 0 or ∞, so the
        // distance is the largest endpoint distance to the nearer of 0, ∞
        let l = limit_set_approx(4, 6).unwrap();
        let oracle = l
            .arcs
            .iter()
            .flat_map(|a| [&a.start, &a.end])
            .map(|e| chordal_dist(e, &BoundaryPoint::int(0)).min(chordal_dist(e, &BoundaryPoint::infinity())))
            .fold(0.0, f64::max);
        let d = hausdorff_to_pair(&l, &zero_inf());
        assert!((d - oracle).abs() < 1e-12);
        assert!(d < 0.3, "{d}");
    }

    #[test]
    fn table_decreases_in_n() {
        let t = hausdorff_table(&[2, 4, 8, 16], 8).unwrap();
        for w in t.windows(2) {
            assert!(w[1].hausdorff < w[0].hausdorff);
        }
        assert!(t[3].hausdorff <= t[0].hausdorff / 4.0);
    }

    #[test]
    fn axes_converge_to_zero_infinity() {
        let mut prev = f64::INFINITY;
        for n in [2u64, 4, 8, 16, 32] {
            let d = pair_hausdorff(&axis(&power(n, true)), &zero_inf())
                .max(pair_hausdorff(&axis(&power(n, false)), &zero_inf()));
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 0.1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn deeper_is_never_farther(n in 2u64..12, k in 1usize..5) {
            let a = hausdorff_to_pair(&limit_set_approx(n, k).unwrap(), &zero_inf());
            let b = hausdorff_to_pair(&limit_set_approx(n, k + 1).unwrap(), &zero_inf());
            prop_assert!(b <= a + 1e-12);
        }
    }
}
