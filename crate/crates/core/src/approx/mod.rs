//! Densification: approximating a discrete current by a rational one built
//! from integer round-path weights.

pub mod graph;
pub mod rational;
pub mod roundpath;

use serde::Serialize;

pub use graph::{angle_ok, assemble, build_gamma, segment_threshold, AssembledLine, Component, ComponentGraph};
pub use rational::{rationalize, IntegerTable};
pub use roundpath::{
    certify_disjoint, roundpaths_of_current, select_disjoint_o, Equation, OEntry, RoundPath, WeightTable,
};

use crate::currents::{default_suite, evaluate_box, DiscreteCurrent};
use crate::error::{Error, Result};
use crate::fuchsian::{HorocycleParameter, SurfacePreset};

/// Horocycle scale used by densification on the level-2 preset; at scale 1
/// the vertex horoballs are tangent and some walls of F_λ shrink to points.
pub const DEFAULT_APPROX_LAMBDA: f64 = 2.0;
pub const DEFAULT_RADIUS: usize = 2;
pub const DEFAULT_R0: usize = 1;

/// How `ε̂` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum EpsMode {
    /// Only an exact rational reading of the weights is accepted.
    Exact,
    Value(f64),
    /// `0.01 / max(1, #O)`.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensifyParams {
    pub r: usize,
    pub r0: usize,
    pub lambda: HorocycleParameter,
    pub eps: EpsMode,
}

impl DensifyParams {
    pub fn defaults(p: &SurfacePreset) -> Self {
        DensifyParams {
            r: DEFAULT_RADIUS,
            r0: DEFAULT_R0,
            lambda: HorocycleParameter::uniform(p.n_classes(), DEFAULT_APPROX_LAMBDA),
            eps: EpsMode::Auto,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathRow {
    pub path: String,
    pub mu_bar: f64,
    pub theta: u64,
    pub theta_over_m: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxRow {
    pub id: String,
    pub mu: f64,
    pub nu: f64,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineRow {
    pub endpoints: String,
    pub holonomy: Option<String>,
    pub edges: usize,
    pub min_angle: f64,
    pub min_segment: f64,
}

/// Everything checked along the way.
#[derive(Clone, Debug, Serialize)]
pub struct DensifyReport {
    pub r: usize,
    pub r0: usize,
    pub lambda: Vec<f64>,
    pub eps_hat: Option<f64>,
    pub m: u64,
    pub exact: bool,
    pub paths: Vec<PathRow>,
    pub equations: usize,
    pub mu_residual: f64,
    pub theta_residual: i128,
    pub max_weight_error: f64,
    pub o_size: usize,
    pub o_disjoint: bool,
    pub slots: usize,
    pub max_degree: usize,
    pub periodic_components: usize,
    pub finite_components: usize,
    pub half_lines: usize,
    pub lines: Vec<LineRow>,
    pub angle_floor: f64,
    pub min_angle: f64,
    pub segment_threshold: f64,
    pub min_segment: f64,
    pub certificates_ok: bool,
    pub boxes: Vec<BoxRow>,
    pub max_discrepancy: f64,
}

impl DensifyReport {
    /// Degree bound, no half-lines and witness certificates.
    pub fn structure_ok(&self) -> bool {
        self.max_degree <= 2 && self.half_lines == 0 && self.certificates_ok
    }
}

/// `ν = (1/M) Σ η_{ℓ(Y)}` over component orbits of Γ, with its report.
pub fn densify(p: &SurfacePreset, mu: &DiscreteCurrent, params: &DensifyParams) -> Result<(DiscreteCurrent, DensifyReport)> {
    mu.validate()?;
    let table = roundpaths_of_current(p, mu, params.r, &params.lambda)?;
    let o = select_disjoint_o(p, &table, params.r0);
    let o_disjoint = certify_disjoint(p, &table, &o)?;
    let o_size = o.len();
    let eps = match params.eps {
        EpsMode::Exact => None,
        EpsMode::Value(e) => Some(e),
        EpsMode::Auto => Some(0.01 / (o_size.max(1) as f64)),
    };
    let theta = rationalize(&table, eps)?;
    if let Some(e) = eps {
        if theta.max_error >= e {
            return Err(Error::degenerate("rational weights miss the tolerance"));
        }
    }
    let gamma = build_gamma(p, &table, &theta)?;
    let threshold = segment_threshold(p, &params.lambda)?;
    let mut nu = DiscreteCurrent::zero();
    let mut lines = Vec::new();
    let (mut min_angle, mut min_segment) = (std::f64::consts::PI, f64::INFINITY);
    let (mut periodic, mut finite) = (0, 0);
    for c in &gamma.components {
        let line = assemble(p, &table, &gamma, c)?;
        if line.holonomy.is_some() {
            periodic += 1;
        } else {
            finite += 1;
        }
        min_angle = min_angle.min(line.min_angle);
        min_segment = min_segment.min(line.min_segment);
        nu.add(1.0 / theta.m as f64, line.atom(p)?);
        lines.push(LineRow {
            endpoints: line.geodesic.to_string(),
            holonomy: line.holonomy.as_ref().map(|h| p.word_str(h)),
            edges: line.edges,
            min_angle: line.min_angle,
            min_segment: line.min_segment,
        });
    }
    let angle_floor = std::f64::consts::FRAC_PI_2 + graph::ANGLE_MARGIN;
    let certificates_ok = min_angle > angle_floor && min_segment >= threshold;
    let mut boxes = Vec::new();
    for b in default_suite(p) {
        let (m1, n1) = (evaluate_box(p, mu, &b.bx)?, evaluate_box(p, &nu, &b.bx)?);
        boxes.push(BoxRow { id: b.id, mu: m1, nu: n1, discrepancy: (m1 - n1).abs() });
    }
    let max_discrepancy = boxes.iter().map(|b| b.discrepancy).fold(0.0, f64::max);
    let paths = table
        .paths
        .iter()
        .zip(&table.weights)
        .zip(&theta.theta)
        .map(|((rp, &w), &t)| {
            let q = t as f64 / theta.m as f64;
            PathRow { path: rp.describe(p), mu_bar: w, theta: t, theta_over_m: q, error: (q - w).abs() }
        })
        .collect();
    let report = DensifyReport {
        r: params.r,
        r0: params.r0,
        lambda: params.lambda.lambda.clone(),
        eps_hat: eps,
        m: theta.m,
        exact: theta.exact,
        paths,
        equations: table.equations.len(),
        mu_residual: table.residual(&table.weights),
        theta_residual: table.residual_int(&theta.theta),
        max_weight_error: theta.max_error,
        o_size,
        o_disjoint,
        slots: gamma.slots.len(),
        max_degree: gamma.max_degree(),
        periodic_components: periodic,
        finite_components: finite,
        half_lines: 0,
        lines,
        angle_floor,
        min_angle,
        segment_threshold: threshold,
        min_segment,
        certificates_ok,
        boxes,
        max_discrepancy,
    };
    Ok((nu, report))
}

#[cfg(test)]
mod tests {
    use super::roundpath::Realizer;
    use super::*;
    use crate::currents::{eta_closed, eta_cusp_pair};
    use crate::fuchsian::{preset_gamma2, EdgeKind, EdgeRef, Word};
    use crate::geom::{BoundaryPoint, Geodesic};
    use proptest::prelude::*;

    fn eta_ab(p: &SurfacePreset) -> crate::currents::Atom {
        eta_closed(p, &p.parse_word("ab").unwrap()).unwrap()
    }

    fn eta_0inf(p: &SurfacePreset) -> crate::currents::Atom {
        eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity()).unwrap()
    }

    fn mixed(p: &SurfacePreset, x: f64, y: f64) -> DiscreteCurrent {
        let mut m = DiscreteCurrent::single(x, eta_ab(p));
        m.add(y, eta_0inf(p));
        m
    }

    fn lam2(p: &SurfacePreset) -> HorocycleParameter {
        HorocycleParameter::uniform(p.n_classes(), 2.0)
    }

    /// A synthetic table over `n` single-edge paths with the given equations.
    fn synthetic(p: &SurfacePreset, weights: Vec<f64>, eqs: Vec<Vec<(usize, i64)>>) -> WeightTable {
        let g = Geodesic::new(BoundaryPoint::int(0), BoundaryPoint::infinity()).unwrap();
        let paths: Vec<RoundPath> = (0..weights.len())
            .map(|i| RoundPath { edges: vec![EdgeRef { tile: Word::letter(1).pow(i), kind: EdgeKind::Horo(0) }] })
            .collect();
        let equations = eqs
            .into_iter()
            .map(|coeffs| Equation { direction: 1, j: paths[0].clone(), coeffs })
            .collect();
        WeightTable {
            r: 1,
            lambda: lam2(p),
            realizers: paths.iter().map(|_| Realizer { geodesic: g.clone(), points: vec![] }).collect(),
            paths,
            weights,
            equations,
        }
    }

    #[test]
    fn imaginary_axis_roundpath_at_radius_one() {
        let p = preset_gamma2();
        let t = roundpaths_of_current(&p, &DiscreteCurrent::single(1.0, eta_0inf(&p)), 1, &lam2(&p)).unwrap();
        let id = Word::identity();
        let expect = RoundPath {
            edges: vec![EdgeRef { tile: id.clone(), kind: EdgeKind::Horo(1) }, EdgeRef { tile: id, kind: EdgeKind::Horo(3) }],
        };
        assert_eq!(t.paths, vec![expect]);
        assert_eq!(t.weights, vec![1.0]);
    }

    #[test]
    fn weights_scale_linearly_and_match_exactly() {
        let p = preset_gamma2();
        let mu = mixed(&p, 1.0, 0.5);
        let t1 = roundpaths_of_current(&p, &mu, 2, &lam2(&p)).unwrap();
        let t2 = roundpaths_of_current(&p, &mu.scale(2.0), 2, &lam2(&p)).unwrap();
        assert_eq!(t1.paths, t2.paths);
        for (a, b) in t1.weights.iter().zip(&t2.weights) {
            assert_eq!(2.0 * a, *b);
        }
        assert!(!t1.equations.is_empty());
        assert_eq!(t1.residual(&t1.weights), 0.0);
    }

    #[test]
    fn rational_halves_read_exactly() {
        let p = preset_gamma2();
        let t = synthetic(&p, vec![0.5, 0.5], vec![vec![(0, 1), (1, -1)]]);
        let x = rationalize(&t, None).unwrap();
        assert_eq!((x.theta.clone(), x.m, x.exact), (vec![1, 1], 2, true));
    }

    #[test]
    fn sqrt2_matches_continued_fraction_convergent() {
        let p = preset_gamma2();
        let s = 2f64.sqrt();
        let t = synthetic(&p, vec![s], vec![]);
        assert!(rationalize(&t, None).is_err());
        let x = rationalize(&t, Some(1e-3)).unwrap();
        // convergents of √2: h/k with h' = 2h + h₀, k' = 2k + k₀
        let (mut h, mut k, mut h0, mut k0) = (1u64, 1u64, 1u64, 0u64);
        while (h as f64 / k as f64 - s).abs() >= 1e-3 {
            (h, k, h0, k0) = (2 * h + h0, 2 * k + k0, h, k);
        }
        assert_eq!((x.theta[0], x.m), (h, k));
        assert_eq!((h, k), (41, 29));
        assert!(!x.exact);
    }

    #[test]
    fn coupled_pair_gets_equal_integers() {
        let p = preset_gamma2();
        let s = 3f64.sqrt();
        let t = synthetic(&p, vec![s, s, 0.25], vec![vec![(0, 1), (1, -1)]]);
        let x = rationalize(&t, Some(1e-4)).unwrap();
        assert_eq!(x.theta[0], x.theta[1]);
        assert_eq!(t.residual_int(&x.theta), 0);
        assert!(x.max_error < 1e-4);
    }

    #[test]
    fn inconsistent_weights_are_rejected() {
        let p = preset_gamma2();
        let t = synthetic(&p, vec![0.5, 0.25], vec![vec![(0, 1), (1, -1)]]);
        assert!(rationalize(&t, Some(1e-3)).is_err());
    }

    #[test]
    fn zero_current_densifies_to_zero() {
        let p = preset_gamma2();
        let (nu, r) = densify(&p, &DiscreteCurrent::zero(), &DensifyParams::defaults(&p)).unwrap();
        assert!(nu.is_zero());
        assert_eq!(r.slots, 0);
    }

    #[test]
    fn single_tile_o_keeps_its_roundpath() {
        let p = preset_gamma2();
        let t = roundpaths_of_current(&p, &DiscreteCurrent::single(1.0, eta_0inf(&p)), 1, &lam2(&p)).unwrap();
        let o = select_disjoint_o(&p, &t, 0);
        assert_eq!(o, vec![OEntry { tile: Word::identity(), path: 0 }]);
        assert!(certify_disjoint(&p, &t, &o).unwrap());
    }

    #[test]
    fn doubled_ab_gives_two_copies() {
        let p = preset_gamma2();
        let t = roundpaths_of_current(&p, &DiscreteCurrent::single(2.0, eta_ab(&p)), 2, &lam2(&p)).unwrap();
        let x = rationalize(&t, None).unwrap();
        assert_eq!(x.m, 1);
        assert!(x.theta.iter().all(|&n| n == 2));
        let g = build_gamma(&p, &t, &x).unwrap();
        assert_eq!(g.components.len(), 2);
        assert!(g.max_degree() <= 2);
        assert!(g.components.iter().all(|c| c.holonomy.is_some()));
    }

    #[test]
    fn ab_pipeline_is_exact() {
        let p = preset_gamma2();
        let mu = DiscreteCurrent::single(1.0, eta_ab(&p));
        let params = DensifyParams { eps: EpsMode::Exact, ..DensifyParams::defaults(&p) };
        let (nu, r) = densify(&p, &mu, &params).unwrap();
        assert!(r.exact && r.structure_ok());
        assert_eq!((r.periodic_components, r.finite_components), (1, 0));
        let t = roundpaths_of_current(&p, &mu, 2, &params.lambda).unwrap();
        let x = rationalize(&t, None).unwrap();
        let g = build_gamma(&p, &t, &x).unwrap();
        let h = g.components[0].holonomy.clone().unwrap();
        let key = p.parse_word("ab").unwrap().conjugacy_key();
        assert!(h.conjugacy_key() == key || h.inverse().conjugacy_key() == key);
        for b in default_suite(&p) {
            assert_eq!(evaluate_box(&p, &nu, &b.bx).unwrap(), evaluate_box(&p, &mu, &b.bx).unwrap(), "{}", b.id);
        }
    }

    #[test]
    fn cusp_pair_assembles_to_itself() {
        let p = preset_gamma2();
        let mu = DiscreteCurrent::single(1.0, eta_0inf(&p));
        let t = roundpaths_of_current(&p, &mu, 2, &lam2(&p)).unwrap();
        let x = rationalize(&t, None).unwrap();
        let g = build_gamma(&p, &t, &x).unwrap();
        assert_eq!(g.components.len(), 1);
        let line = assemble(&p, &t, &g, &g.components[0]).unwrap();
        assert!(line.holonomy.is_none());
        let want = Geodesic::new(BoundaryPoint::int(0), BoundaryPoint::infinity()).unwrap();
        assert_eq!(line.geodesic, want);
        assert!(line.min_angle > std::f64::consts::FRAC_PI_2 + graph::ANGLE_MARGIN);
    }

    #[test]
    fn irrational_mixture_within_tolerance() {
        let p = preset_gamma2();
        let mu = mixed(&p, 2f64.sqrt(), 3f64.sqrt());
        let (_, r) = densify(&p, &mu, &DensifyParams::defaults(&p)).unwrap();
        assert_eq!(r.theta_residual, 0);
        assert!(r.paths.iter().all(|row| row.error < r.eps_hat.unwrap()));
        assert!(r.structure_ok() && r.o_disjoint);
        assert!(r.max_discrepancy < 0.05, "{}", r.max_discrepancy);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn integer_solutions_are_feasible(x in 0.05f64..3.0, y in 0.05f64..3.0) {
            let p = preset_gamma2();
            let (_, r) = densify(&p, &mixed(&p, x, y), &DensifyParams::defaults(&p)).unwrap();
            prop_assert_eq!(r.theta_residual, 0);
            prop_assert!(r.max_weight_error < r.eps_hat.unwrap());
            prop_assert!(r.max_degree <= 2 && r.half_lines == 0);
        }
    }
}
