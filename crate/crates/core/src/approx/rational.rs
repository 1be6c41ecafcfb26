//! Integer solutions of the matching system approximating cylinder weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::roundpath::WeightTable;
use crate::error::{Error, Result};

/// Largest common denominator tried.
pub const M_CAP: u64 = 1_000_000;
/// Tolerance for reading an input weight as a rational number.
pub const RATIONAL_TOL: f64 = 1e-12;

/// `θ` and `M` with `θ/M ≈ μ̄` and the matching equations exact in integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegerTable {
    pub theta: Vec<u64>,
    pub m: u64,
    /// `θ = M μ̄` exactly (up to the rational read-off tolerance).
    pub exact: bool,
    pub max_error: f64,
}

/// Best rational with denominator at most `max_den` within `tol` of `x`.
pub fn read_rational(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            return None;
        }
        if (h2 as f64 / k2 as f64 - x).abs() <= tol * x.abs().max(1.0) {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = y - a;
        if f == 0.0 {
            return None;
        }
        y = 1.0 / f;
    }
    None
}

fn max_err(theta: &[u64], m: u64, mu: &[f64]) -> f64 {
    theta.iter().zip(mu).map(|(&t, &w)| (t as f64 / m as f64 - w).abs()).fold(0.0, f64::max)
}

fn exact_solution(t: &WeightTable) -> Option<IntegerTable> {
    let mut fr = Vec::new();
    let mut m: u64 = 1;
    for &w in &t.weights {
        let (n, d) = read_rational(w, M_CAP, RATIONAL_TOL)?;
        if n < 0 {
            return None;
        }
        m = m.lcm(&d);
        if m > M_CAP {
            return None;
        }
        fr.push((n as u64, d));
    }
    let theta: Vec<u64> = fr.iter().map(|&(n, d)| n * (m / d)).collect();
    if t.residual_int(&theta) != 0 {
        return None;
    }
    Some(IntegerTable { max_error: max_err(&theta, m, &t.weights), theta, m, exact: true })
}

/// Rational basis of the kernel of the equation matrix, one vector per free
/// column, with that column equal to 1.
pub fn kernel_basis(t: &WeightTable) -> (Vec<usize>, Vec<Vec<BigRational>>) {
    let n = t.paths.len();
    let mut rows: Vec<Vec<BigRational>> = t
        .equations
        .iter()
        .map(|e| {
            let mut r = vec![BigRational::zero(); n];
            for &(i, c) in &e.coeffs {
                r[i] += BigRational::from_integer(BigInt::from(c));
            }
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pr);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[row].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[ri][f].clone();
            }
            v
        })
        .collect();
    (free, basis)
}

/// Finds `(θ, M)` with exact integer matching equations and
/// `max |θ/M − μ̄| < eps`. With `eps = None` only an exact rational reading
/// of `μ̄` is accepted.
pub fn rationalize(t: &WeightTable, eps: Option<f64>) -> Result<IntegerTable> {
    let res = t.residual(&t.weights);
    let scale = t.weights.iter().fold(1.0f64, |a, &w| a.max(w.abs()));
    if res > 1e-12 * scale * 16.0 {
        return Err(Error::precondition(format!("weights violate the matching equations (residual {res:e})")));
    }
    if let Some(x) = exact_solution(t) {
        return Ok(x);
    }
    let Some(eps) = eps else {
        return Err(Error::precondition("weights are not rational with denominator within the cap; give a tolerance"));
    };
    if !(eps > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    let (free, basis) = kernel_basis(t);
    let mut den = BigInt::one();
    for v in &basis {
        for x in v {
            den = den.lcm(x.denom());
        }
    }
    let d = den.to_u64().filter(|&d| d <= M_CAP).ok_or_else(|| Error::degenerate("kernel denominators exceed the cap"))?;
    let int_basis: Vec<Vec<i64>> = basis
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| (x * BigRational::from_integer(BigInt::from(d))).to_integer().to_i64().expect("small kernel entries"))
                .collect()
        })
        .collect();
    let n = t.paths.len();
    let mut best = f64::INFINITY;
    for m in 1..=M_CAP / d {
        let mut theta = vec![0i64; n];
        for (f, v) in free.iter().zip(&int_basis) {
            let k = (m as f64 * t.weights[*f]).round() as i64;
            for (th, c) in theta.iter_mut().zip(v) {
                *th += k * c;
            }
        }
        if theta.iter().any(|&x| x < 0) {
            continue;
        }
        let theta: Vec<u64> = theta.into_iter().map(|x| x as u64).collect();
        let big_m = m * d;
        let e = max_err(&theta, big_m, &t.weights);
        best = best.min(e);
        if e < eps {
            debug_assert_eq!(t.residual_int(&theta), 0);
            return Ok(IntegerTable { theta, m: big_m, exact: false, max_error: e });
        }
    }
    Err(Error::degenerate(format!("no denominator up to {M_CAP} reaches tolerance {eps:e}; best error {best:e}")))
}

/// Integer residual check used by reports.
pub fn theta_residual(t: &WeightTable, x: &IntegerTable) -> i128 {
    t.residual_int(&x.theta)
}
