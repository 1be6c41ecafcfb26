//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::time::{Duration, Instant};

use cusp_currents::approx::{densify, DensifyParams, DensifyReport, EpsMode};
use cusp_currents::cli::experiments::{
    blowup, converge_closed, converge_cusp, oracle_pairs, oracle_windows, random_windows,
};
use cusp_currents::currents::{default_suite, eta_closed, eta_cusp_pair, evaluate_box, DiscreteCurrent};
use cusp_currents::fuchsian::{preset_gamma2, SurfacePreset, Word};
use cusp_currents::geom::{hyp_distance, BoundaryPoint, Pt};
use cusp_currents::intersect::brute_crossings;
use cusp_currents::limitset::hausdorff_table;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn zero_inf(p: &SurfacePreset) -> DiscreteCurrent {
    DiscreteCurrent::single(1.0, eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity()).unwrap())
}

fn eta_ab(p: &SurfacePreset) -> DiscreteCurrent {
    DiscreteCurrent::single(1.0, eta_closed(p, &p.parse_word("ab").unwrap()).unwrap())
}

fn integer_stabilization(p: &SurfacePreset) -> Outcome {
    let suite = default_suite(p);
    let (_, stab) = converge_closed(p, &suite, 1, 64, 1.0).map_err(err)?;
    let worst = stab.iter().map(|s| s.index.unwrap_or(usize::MAX)).max().unwrap_or(0);
    let desc: Vec<String> = stab.iter().map(|s| format!("{}:N={}", s.box_id, s.index.map_or("-".into(), |n| n.to_string()))).collect();
    check(stab.len() == 5 && worst <= 64, format!("n<=64 stabilizes on every box ({})", desc.join(" ")))
}

fn cusp_error_rate(p: &SurfacePreset) -> Outcome {
    let suite = default_suite(p);
    let ns: Vec<usize> = (8..=128).collect();
    let rows = converge_cusp(p, &suite, "ab", &BoundaryPoint::infinity(), &BoundaryPoint::int(0), &ns).map_err(err)?;
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for b in &suite {
        let mine: Vec<_> = rows.iter().filter(|r| r.box_id == b.id).collect();
        let cal = mine[0].n_times_error;
        let top = mine.iter().map(|r| r.n_times_error).fold(0.0, f64::max);
        worst = worst.max(if cal > 0.0 { top / cal } else { top });
        if top > 2.0 * cal {
            bad.push(format!("{}: max {top} vs 2x{cal}", b.id));
        }
    }
    check(bad.is_empty(), format!("n*err over n=8..128 within 2x calibration, worst ratio {worst:.6} {}", bad.join("; ")))
}

fn discontinuity(p: &SurfacePreset) -> Outcome {
    let (rows, self_i) = blowup(p, 32).map_err(err)?;
    let grows = rows.iter().all(|r| r.count > r.n);
    let monotone = rows.windows(2).all(|w| w[0].count <= w[1].count);
    let ell = eta_cusp_pair(p, &BoundaryPoint::int(0), &BoundaryPoint::infinity()).unwrap();
    let brute = brute_crossings(p, &ell, &ell, 12).map_err(err)?;
    let stable = brute_crossings(p, &ell, &ell, 8).map_err(err)? == brute;
    check(
        rows.len() == 32 && grows && monotone && self_i == brute as f64 && self_i == 0.0 && stable,
        format!(
            "i(aⁿbⁿ, {{0,inf}}) >= n+1 and nondecreasing for n<=32 (last {}), self-intersection {self_i} = brute {brute}",
            rows.last().map_or(0, |r| r.count)
        ),
    )
}

fn pipeline(p: &SurfacePreset, runs: &mut Vec<(&'static str, DensifyReport)>) -> Outcome {
    let exact = DensifyParams { eps: EpsMode::Exact, ..DensifyParams::defaults(p) };
    let mu = eta_ab(p);
    let (nu, r1) = densify(p, &mu, &exact).map_err(err)?;
    let mut boxes_equal = true;
    for b in default_suite(p) {
        boxes_equal &= evaluate_box(p, &nu, &b.bx).map_err(err)? == evaluate_box(p, &mu, &b.bx).map_err(err)?;
    }
    let mut mix = DiscreteCurrent::zero();
    mix.add(2f64.sqrt(), eta_ab(p).atoms[0].1.clone());
    mix.add(3f64.sqrt(), zero_inf(p).atoms[0].1.clone());
    let (_, r2) = densify(p, &mix, &DensifyParams::defaults(p)).map_err(err)?;
    let eps = r2.eps_hat.unwrap_or(0.0);
    let within = r2.paths.iter().all(|row| row.error < eps);
    let ok = boxes_equal && r1.exact && r2.theta_residual == 0 && within && r2.max_discrepancy < 0.05;
    let msg = format!(
        "exact ab reproduces all boxes: {boxes_equal}; mixture max discrepancy {:.4} < 0.05, theta residual {}, max weight error {:.2e} < {eps:.2e}",
        r2.max_discrepancy, r2.theta_residual, r2.max_weight_error
    );
    runs.push(("ab exact", r1));
    runs.push(("sqrt2 ab + sqrt3 {0,inf}", r2));
    check(ok, msg)
}

fn structure(p: &SurfacePreset, runs: &mut Vec<(&'static str, DensifyReport)>) -> Outcome {
    let d = DensifyParams::defaults(p);
    runs.push(("{0,inf}", densify(p, &zero_inf(p), &d).map_err(err)?.1));
    let c = DiscreteCurrent::single(1.0, eta_closed(p, &p.parse_word("abAB").unwrap()).unwrap());
    runs.push(("abAB", densify(p, &c, &d).map_err(err)?.1));
    let bad: Vec<&str> = runs.iter().filter(|(_, r)| !r.structure_ok()).map(|(n, _)| *n).collect();
    let deg = runs.iter().map(|(_, r)| r.max_degree).max().unwrap_or(0);
    let angle = runs.iter().map(|(_, r)| r.min_angle).fold(f64::INFINITY, f64::min);
    check(
        bad.is_empty(),
        format!("{} densify runs: max degree {deg}, no half-lines, min bend {angle:.4}, certificates ok {}", runs.len(), bad.is_empty())
            + &if bad.is_empty() { String::new() } else { format!(" (failing: {})", bad.join(", ")) },
    )
}

fn oracle(p: &SurfacePreset) -> Outcome {
    let ws = random_windows(7, 20).map_err(err)?;
    let w = oracle_windows(p, &ws, 14).map_err(err)?;
    let q = oracle_pairs(p, 14).map_err(err)?;
    let bad = w.iter().filter(|r| !r.agree).count() + q.iter().filter(|r| !r.agree).count();
    check(bad == 0, format!("{} window checks and {} pair checks at length 14, {bad} disagreements", w.len(), q.len()))
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<i8> = (0..len).map(|_| [1i8, -1, 2, -2][rng.gen_range(0..4)]).collect();
    Word::from_letters(&letters)
}

fn exactness(p: &SurfacePreset) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut hom = 0;
    let mut iso = 0.0f64;
    for _ in 0..1000 {
        let (u, v) = (random_word(&mut rng, 12), random_word(&mut rng, 12));
        if p.word_matrix(&u.mul(&v)) != p.word_matrix(&u).mul(&p.word_matrix(&v)) {
            hom += 1;
        }
    }
    for _ in 0..1000 {
        let m = p.word_matrix(&random_word(&mut rng, 10));
        let z1 = Pt::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..3.0));
        let z2 = Pt::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..3.0));
        let d = hyp_distance(z1, z2).map_err(err)?;
        let e = hyp_distance(m.apply_pt(z1), m.apply_pt(z2)).map_err(err)?;
        iso = iso.max((d - e).abs());
    }
    let t = hausdorff_table(&[2, 4, 8, 16], 8).map_err(err)?;
    let h: Vec<f64> = t.iter().map(|r| r.hausdorff).collect();
    let decreasing = h.windows(2).all(|w| w[1] < w[0]);
    let quarter = h[3] <= h[0] / 4.0;
    check(
        hom == 0 && iso <= 1e-9 && decreasing && quarter,
        format!(
            "homomorphism failures {hom}/1000, isometry drift {iso:.1e}, limit set distances {:?}",
            h.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn main() {
    let p = preset_gamma2();
    let mut runs = Vec::new();
    let limits = [120, 300, 120, 180, 180, 600, 60];
    let mut failed = 0;
    for k in 1..=7 {
        let start = Instant::now();
        let out = match k {
            1 => integer_stabilization(&p),
            2 => cusp_error_rate(&p),
            3 => discontinuity(&p),
            4 => pipeline(&p, &mut runs),
            5 => structure(&p, &mut runs),
            6 => oracle(&p),
            _ => exactness(&p),
        };
        let took = start.elapsed();
        let out = match out {
            Ok(m) if took > Duration::from_secs(limits[k - 1]) => Err(format!("{m} (over {}s budget)", limits[k - 1])),
            o => o,
        };
        match out {
            Ok(m) => println!("PASS criterion {k}: {m} [{:.2}s]", took.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {k}: {m} [{:.2}s]", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 7 criteria passed");
}
