//! Exhaustive word enumeration used to cross-check the tile-based algorithms.

use std::collections::BTreeSet;

use crate::currents::Window;
use crate::fuchsian::{Letter, SurfacePreset, Word};
use crate::geom::mobius::{mat_mul_f64, mobius_boundary_f64, mobius_f64};
use crate::geom::{FGeod, Geodesic, Pt};

/// Calls `f` on every reduced word of length at most `max_len` with its
/// float matrix, depth first.
pub fn for_each_word(p: &SurfacePreset, max_len: usize, f: &mut dyn FnMut(&[Letter], &[f64; 4])) {
    let letters: Vec<(Letter, [f64; 4])> = (1..=p.rank() as Letter)
        .flat_map(|k| [k, -k])
        .map(|l| (l, p.letter_matrix_f64(l)))
        .collect();
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    fn rec(
        letters: &[(Letter, [f64; 4])],
        stack: &mut Vec<Letter>,
        m: &[f64; 4],
        depth: usize,
        f: &mut dyn FnMut(&[Letter], &[f64; 4]),
    ) {
        f(stack, m);
        if depth == 0 {
            return;
        }
        for (l, lm) in letters {
            if stack.last() == Some(&-l) {
                continue;
            }
            stack.push(*l);
            rec(letters, stack, &mat_mul_f64(m, lm), depth - 1, f);
            stack.pop();
        }
    }
    rec(&letters, &mut stack, &[1.0, 0.0, 0.0, 1.0], max_len, f);
}

/// Distinct translates `h·γ` with `|h| ≤ max_len` meeting the window.
pub fn brute_window(p: &SurfacePreset, base: &Geodesic, w: &Window, max_len: usize) -> BTreeSet<Geodesic> {
    let (x, y) = base.ends_f64();
    let mut hits: Vec<Word> = Vec::new();
    for_each_word(p, max_len, &mut |l, m| {
        let (u, v) = (mobius_boundary_f64(m, x), mobius_boundary_f64(m, y));
        if u != v && FGeod::from_ends(u, v).dist(w.center) <= w.radius + crate::currents::window::PREFILTER_MARGIN {
            hits.push(Word::from_letters(l));
        }
    });
    hits.iter().map(|h| base.apply(&p.word_matrix(h))).filter(|g| w.meets(g)).collect()
}

/// Words `h` with `|h| ≤ max_len` and `d(center, hF̄) ≤ r`.
pub fn brute_tiles_in_ball(p: &SurfacePreset, center: Pt, r: f64, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_word(p, max_len, &mut |l, m| {
        let inv = [m[3], -m[1], -m[2], m[0]];
        if p.dist_to_domain(mobius_f64(&inv, center)) <= r {
            out.push(Word::from_letters(l));
        }
    });
    out.sort_by(crate::fuchsian::shortlex);
    out
}
