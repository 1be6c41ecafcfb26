//! The experiment tables behind the CLI verbs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::currents::{
    atoms_in_window, eta_closed, eta_cusp_pair, evaluate_box, evaluate_box_prepared, anbn_sequence, cusp_pair_sequence,
    Atom, DiscreteCurrent, SuiteBox, Window,
};
use crate::error::Result;
use crate::fuchsian::SurfacePreset;
use crate::geom::{BoundaryPoint, Pt};
use crate::intersect::{blowup_table, brute_crossings, crossing_list, intersection_number, BlowupRow};
use crate::oracle::brute_window;

/// Atoms used by the cross-checks: `η_{0,∞}`, `η_ab`, `η_{a²b²}`, `η_{abAB}`.
pub fn suite_atoms(p: &SurfacePreset) -> Result<Vec<(String, Atom)>> {
    let mut out = vec![("{0,inf}".to_string(), eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity())?)];
    for w in ["ab", "aabb", "abAB"] {
        out.push((w.to_string(), eta_closed(p, &p.parse_word(w)?)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedRow {
    pub n: usize,
    pub box_id: String,
    pub count: f64,
    pub twice_target: f64,
    pub delta: f64,
}

/// Per box, the least `N` with zero delta on `N..=n_max`, if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stabilization {
    pub box_id: String,
    pub index: Option<usize>,
}

/// `weight · η_{aⁿbⁿ}` against `2 · weight · η_{0,∞}` on each box.
pub fn converge_closed(
    p: &SurfacePreset,
    suite: &[SuiteBox],
    n_min: usize,
    n_max: usize,
    weight: f64,
) -> Result<(Vec<ClosedRow>, Vec<Stabilization>)> {
    let ell = DiscreteCurrent::single(weight, eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity())?);
    let targets: Vec<f64> = suite.iter().map(|b| evaluate_box(p, &ell, &b.bx)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let mu = DiscreteCurrent::single(weight, anbn_sequence(p, n)?).prepare(p)?;
        for (b, &t) in suite.iter().zip(&targets) {
            let c = evaluate_box_prepared(p, &mu, &b.bx)?;
            rows.push(ClosedRow { n, box_id: b.id.clone(), count: c, twice_target: 2.0 * t, delta: c - 2.0 * t });
        }
    }
    let stab = suite
        .iter()
        .map(|b| {
            let mut index = None;
            for r in rows.iter().filter(|r| r.box_id == b.id).rev() {
                if r.delta != 0.0 {
                    break;
                }
                index = Some(r.n);
            }
            Stabilization { box_id: b.id.clone(), index }
        })
        .collect();
    Ok((rows, stab))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspRow {
    pub n: usize,
    pub box_id: String,
    pub scaled_count: f64,
    pub target: f64,
    pub n_times_error: f64,
}

/// `(1/2n) η_{g⁻ⁿx, gⁿy}` against `η_g` on each box, for `n` in `ns`.
pub fn converge_cusp(
    p: &SurfacePreset,
    suite: &[SuiteBox],
    g: &str,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    ns: &[usize],
) -> Result<Vec<CuspRow>> {
    let gw = p.parse_word(g)?;
    let target = DiscreteCurrent::single(1.0, eta_closed(p, &gw)?);
    let targets: Vec<f64> = suite.iter().map(|b| evaluate_box(p, &target, &b.bx)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &n in ns {
        let mu = DiscreteCurrent::single(1.0 / (2 * n) as f64, cusp_pair_sequence(p, &gw, x, y, n)?).prepare(p)?;
        for (b, &t) in suite.iter().zip(&targets) {
            let c = evaluate_box_prepared(p, &mu, &b.bx)?;
            rows.push(CuspRow { n, box_id: b.id.clone(), scaled_count: c, target: t, n_times_error: n as f64 * (c - t).abs() });
        }
    }
    Ok(rows)
}

/// The blow-up table and the constant `i(η_{0,∞}, η_{0,∞})`.
pub fn blowup(p: &SurfacePreset, n_max: usize) -> Result<(Vec<BlowupRow>, f64)> {
    let ell = DiscreteCurrent::single(1.0, eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity())?);
    Ok((blowup_table(p, n_max)?, intersection_number(p, &ell, &ell)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowCheck {
    pub window: usize,
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
    pub atom: String,
    pub fast: usize,
    pub brute: usize,
    pub agree: bool,
}

/// Seeded windows with centers in `[−1, 1] × [0.4, 2]` and radii in `[0.2, 1.2]`.
pub fn random_windows(seed: u64, count: usize) -> Result<Vec<Window>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = Pt::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.4..2.0));
            Window::new(c, rng.gen_range(0.2..1.2))
        })
        .collect()
}

/// `atoms_in_window` against exhaustive enumeration up to `max_len`.
pub fn oracle_windows(p: &SurfacePreset, windows: &[Window], max_len: usize) -> Result<Vec<WindowCheck>> {
    let atoms = suite_atoms(p)?;
    let mut out = Vec::new();
    for (k, w) in windows.iter().enumerate() {
        for (name, a) in &atoms {
            let orbit = a.orbit(p)?;
            let fast: std::collections::BTreeSet<_> = atoms_in_window(p, &orbit, w)?.into_iter().collect();
            let brute = brute_window(p, a.geodesic(), w, max_len);
            out.push(WindowCheck {
                window: k,
                cx: w.center.x,
                cy: w.center.y,
                radius: w.radius,
                atom: name.clone(),
                fast: fast.len(),
                brute: brute.len(),
                agree: fast == brute,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub first: String,
    pub second: String,
    pub fast: usize,
    pub brute: usize,
    pub agree: bool,
}

/// Crossing counts against exhaustive enumeration for all ordered suite atom pairs.
pub fn oracle_pairs(p: &SurfacePreset, max_len: usize) -> Result<Vec<PairCheck>> {
    let atoms = suite_atoms(p)?;
    let mut out = Vec::new();
    for (n1, a1) in &atoms {
        for (n2, a2) in &atoms {
            let fast = crossing_list(p, a1, a2)?.records.len();
            let brute = brute_crossings(p, a1, a2, max_len)?;
            out.push(PairCheck { first: n1.clone(), second: n2.clone(), fast, brute, agree: fast == brute });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRow {
    pub box_id: String,
    pub value: f64,
}

pub fn eval(p: &SurfacePreset, mu: &DiscreteCurrent, suite: &[SuiteBox]) -> Result<Vec<EvalRow>> {
    let prepared = mu.prepare(p)?;
    suite
        .iter()
        .map(|b| Ok(EvalRow { box_id: b.id.clone(), value: evaluate_box_prepared(p, &prepared, &b.bx)? }))
        .collect()
}
