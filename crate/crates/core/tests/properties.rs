use std::f64::consts::PI;

use cusp_currents::currents::{default_suite, eta_closed, eta_cusp_pair, evaluate_box, Atom, DiscreteCurrent};
use cusp_currents::fuchsian::trace::trace_geodesic;
use cusp_currents::fuchsian::{preset_gamma2, Letter, SurfacePreset, Word};
use cusp_currents::geom::mobius::IntMat;
use cusp_currents::geom::{
    box_window_radius, circle_angle, geodesics_cross, hyp_distance, pair_hausdorff, BoundaryPoint, CrossKind,
    Geodesic, Pt,
};
use cusp_currents::intersect::{crossing_list, intersection_number};
use cusp_currents::oracle::brute_tiles_in_ball;
use proptest::prelude::*;

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..=max)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max).prop_map(|l| Word::from_letters(&l))
}

fn point() -> impl Strategy<Value = Pt> {
    (-2.0f64..2.0, 0.05f64..3.0).prop_map(|(x, y)| Pt::new(x, y))
}

fn rational() -> impl Strategy<Value = BoundaryPoint> {
    (-40i64..40, 1i64..12).prop_map(|(a, b)| BoundaryPoint::rational(a, b))
}

/// `{0,∞}` and a few closed words.
fn atom_pool(p: &SurfacePreset) -> Vec<Atom> {
    let mut v = vec![eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity()).unwrap()];
    for w in ["ab", "aabb", "abAB", "aab", "abb"] {
        v.push(eta_closed(p, &p.parse_word(w).unwrap()).unwrap());
    }
    v
}

fn current(p: &SurfacePreset, picks: &[(usize, u8)]) -> DiscreteCurrent {
    let pool = atom_pool(p);
    let mut c = DiscreteCurrent::zero();
    for &(i, w) in picks {
        c.add(w as f64, pool[i % pool.len()].clone());
    }
    c
}

fn picks() -> impl Strategy<Value = Vec<(usize, u8)>> {
    prop::collection::vec((0usize..6, 1u8..4), 1..3)
}

fn angle_to_real(t: f64) -> f64 {
    ((t - PI) / 2.0).tan()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_isometry_invariant(w in word(4), z1 in point(), z2 in point()) {
        let p = preset_gamma2();
        let m = p.word_matrix(&w);
        let d = hyp_distance(z1, z2).unwrap();
        let e = hyp_distance(m.apply_pt(z1), m.apply_pt(z2)).unwrap();
        prop_assert!((d - e).abs() < 1e-9, "{d} vs {e}");
    }

    #[test]
    fn word_matrix_is_a_homomorphism(w1 in word(10), w2 in word(10)) {
        let p = preset_gamma2();
        prop_assert_eq!(p.word_matrix(&w1.mul(&w2)), p.word_matrix(&w1).mul(&p.word_matrix(&w2)));
    }

    #[test]
    fn trivial_words_are_exactly_identity(raw in letters(12)) {
        let p = preset_gamma2();
        let m = raw.iter().fold(IntMat::identity(), |m, &l| m.mul(p.letter_matrix(l)));
        prop_assert_eq!(Word::from_letters(&raw).is_empty(), m.is_pm_identity());
    }

    #[test]
    fn boundary_action_round_trips(w in word(8), x in rational()) {
        let p = preset_gamma2();
        let m = p.word_matrix(&w);
        prop_assert_eq!(m.apply(&m.inverse().apply(&x)), x);
    }

    #[test]
    fn locate_is_equivariant(h in word(4), z in point()) {
        let p = preset_gamma2();
        let (w, local) = p.locate_word(z).unwrap();
        // away from walls
        let margin = (0..p.walls.len()).map(|k| p.wall_fgeod(k).signed_sinh(local).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(margin > 1e-6);
        let hz = p.word_matrix(&h).apply_pt(z);
        let (hw, _) = p.locate_word(hz).unwrap();
        prop_assert_eq!(hw, h.mul(&w));
    }

    #[test]
    fn crossing_is_interleaving(a in rational(), b in rational(), c in rational(), d in rational()) {
        let pts = [a, b, c, d];
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assume!(pts[i] != pts[j]);
            }
        }
        // every ordering of the four points into two pairs
        for perm in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2], [1, 0, 3, 2], [2, 3, 0, 1], [3, 1, 2, 0]] {
            let g1 = Geodesic::new(pts[perm[0]].clone(), pts[perm[1]].clone()).unwrap();
            let g2 = Geodesic::new(pts[perm[2]].clone(), pts[perm[3]].clone()).unwrap();
            let inside = |x: &BoundaryPoint| &g1.lo < x && x < &g1.hi;
            let interleave = inside(&g2.lo) != inside(&g2.hi);
            prop_assert_eq!(geodesics_cross(&g1, &g2) == CrossKind::Cross, interleave);
            prop_assert_eq!(geodesics_cross(&g1, &g2), geodesics_cross(&g2, &g1));
        }
    }

    #[test]
    fn pair_hausdorff_is_a_metric(v in prop::collection::vec(rational(), 6)) {
        prop_assume!(v[0] != v[1] && v[2] != v[3] && v[4] != v[5]);
        let g: Vec<Geodesic> = (0..3).map(|i| Geodesic::new(v[2 * i].clone(), v[2 * i + 1].clone()).unwrap()).collect();
        let d = |i: usize, j: usize| pair_hausdorff(&g[i], &g[j]);
        prop_assert_eq!(d(0, 0), 0.0);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
        if g[0] != g[1] {
            prop_assert!(d(0, 1) > 0.0);
        }
    }

    #[test]
    fn box_window_radius_is_sound(k in 0usize..5, s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let p = preset_gamma2();
        let bx = default_suite(&p)[k].bx.clone();
        let c = bx.center().unwrap();
        let r = box_window_radius(&bx, c).unwrap();
        let at = |a: &cusp_currents::geom::Arc, f: f64| {
            angle_to_real(circle_angle(a.start.to_f64()) + f * a.angular_length())
        };
        let (x, y) = (at(&bx.i, s), at(&bx.j, t));
        let g = cusp_currents::geom::FGeod::from_ends(x.min(y), x.max(y));
        prop_assert!(g.dist(c) <= r + 1e-9);
    }

    #[test]
    fn trace_steps_between_adjacent_tiles(w in word(6)) {
        let p = preset_gamma2();
        let Ok(Atom::Closed { axis, .. }) = eta_closed(&p, &w) else { return Ok(()) };
        let tr = trace_geodesic(&p, &axis).unwrap();
        for pair in tr.tiles.windows(2) {
            prop_assert_eq!(pair[0].inverse().mul(&pair[1]).len(), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn box_values_are_invariant_and_integral(h in word(3), k in 0usize..5) {
        let p = preset_gamma2();
        let pool = atom_pool(&p);
        let bx = default_suite(&p)[k].bx.clone();
        let moved = bx.apply(&p.word_matrix(&h));
        for a in &pool {
            let mu = DiscreteCurrent::single(1.0, a.clone());
            let v = evaluate_box(&p, &mu, &bx).unwrap();
            prop_assert_eq!(v, v.round());
            prop_assert!(v >= 0.0);
            prop_assert_eq!(v, evaluate_box(&p, &mu, &moved).unwrap());
        }
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear(m1 in picks(), m2 in picks(), n in picks()) {
        let p = preset_gamma2();
        let (a, b, c) = (current(&p, &m1), current(&p, &m2), current(&p, &n));
        prop_assert_eq!(intersection_number(&p, &a, &c).unwrap(), intersection_number(&p, &c, &a).unwrap());
        let lhs = intersection_number(&p, &a.plus(&b), &c).unwrap();
        let rhs = intersection_number(&p, &a, &c).unwrap() + intersection_number(&p, &b, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn crossings_do_not_depend_on_the_domain(h in word(3).prop_filter("nontrivial", |w| !w.is_empty())) {
        let p = preset_gamma2();
        let q = p.conjugate(&h).unwrap();
        let (pa, qa) = (atom_pool(&p), atom_pool(&q));
        for i in 0..pa.len() {
            for j in 0..pa.len() {
                let a = crossing_list(&p, &pa[i], &pa[j]).unwrap().records.len();
                let b = crossing_list(&q, &qa[i], &qa[j]).unwrap().records.len();
                prop_assert_eq!(a, b, "pair {} {}", i, j);
            }
        }
    }

    #[test]
    fn ball_tiles_match_enumeration(x in -2.0f64..2.0, y in 0.3f64..3.0, r in 0.1f64..0.8) {
        let p = preset_gamma2();
        let c = Pt::new(x, y);
        let mut fast = p.tile_words_meeting_ball(c, r).unwrap();
        let mut slow = brute_tiles_in_ball(&p, c, r, 9);
        fast.sort();
        slow.sort();
        prop_assert_eq!(fast, slow);
    }
}
