//! Exact points of the boundary circle: rationals, infinity and real quadratic surds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real quadratic surd `(a + b*sqrt(d)) / c` with `c > 0`, `b != 0`,
/// `gcd(a, b, c) = 1` and `d > 1` free of square factors.
#[derive(Clone, Debug)]
pub struct Surd {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    approx: f64,
}

/// A point of the boundary R ∪ {∞}.
#[derive(Clone, Debug)]
pub enum BoundaryPoint {
    Rational(BigRational),
    Infinity,
    Surd(Surd),
}

/// Largest trial divisor used when stripping square factors from a discriminant.
const TRIAL_LIMIT: u64 = 2_000_000;

/// Writes `n = k^2 * s` and returns `(k, s)`; `s` is square free whenever
/// `n < TRIAL_LIMIT^3`.
pub fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut k = BigInt::one();
    let mut s = BigInt::one();
    let mut m = n.clone();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            k *= bp.pow(e / 2);
            if e % 2 == 1 {
                s *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        k *= r;
    } else {
        s *= m;
    }
    (k, s)
}

/// Converts `n / d` to the nearest double without overflowing on large operands.
pub fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    let bits = n.bits().max(d.bits());
    if bits > 1000 {
        let shift = bits - 1000;
        let ns: BigInt = n >> shift;
        let ds: BigInt = d >> shift;
        if ds.is_zero() {
            return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        return ns.to_f64().unwrap() / ds.to_f64().unwrap();
    }
    n.to_f64().unwrap() / d.to_f64().unwrap()
}

/// Sign of `u + v*sqrt(d)` for integers `u, v` and positive nonsquare `d`.
pub fn sign_surd(u: &BigInt, v: &BigInt, d: &BigInt) -> Ordering {
    let su = u.sign();
    let sv = v.sign();
    match (su, sv) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (Sign::NoSign, s) | (s, Sign::NoSign) => sign_to_ord(s),
        (a, b) if a == b => sign_to_ord(a),
        _ => {
            let uu = u * u;
            let vv = v * v * d;
            match uu.cmp(&vv) {
                Ordering::Greater => sign_to_ord(su),
                Ordering::Less => sign_to_ord(sv),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

fn sign_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Sign of `a + b*sqrt(d1) + c*sqrt(d2)`.
fn sign_two_surds(a: &BigInt, b: &BigInt, d1: &BigInt, c: &BigInt, d2: &BigInt) -> Ordering {
    // s = a + b√d1 compared against t = -c√d2
    let ss = sign_surd(a, b, d1);
    let st = sign_to_ord((-c).sign());
    if ss != st {
        return ss.cmp(&st);
    }
    if ss == Ordering::Equal {
        return Ordering::Equal;
    }
    // both sides share a sign: compare squares
    let u = a * a + b * b * d1 - c * c * d2;
    let v = BigInt::from(2) * a * b;
    let sq = sign_surd(&u, &v, d1);
    if ss == Ordering::Greater {
        sq
    } else {
        sq.reverse()
    }
}

impl Surd {
    fn compute_approx(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> f64 {
        let rd = d.to_f64().unwrap().sqrt();
        if a.sign() == b.sign() || a.is_zero() {
            ratio_to_f64(a, c) + ratio_to_f64(b, c) * rd
        } else {
            let num = a * a - b * b * d;
            let den = ratio_to_f64(a, c) - ratio_to_f64(b, c) * rd;
            ratio_to_f64(&num, &(c * c)) / den
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }
}

impl BoundaryPoint {
    pub fn infinity() -> Self {
        BoundaryPoint::Infinity
    }

    pub fn int(n: i64) -> Self {
        BoundaryPoint::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The rational `p/q`; `q = 0` gives infinity.
    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        let p = p.into();
        let q = q.into();
        if q.is_zero() {
            return BoundaryPoint::Infinity;
        }
        BoundaryPoint::Rational(BigRational::new(p, q))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        BoundaryPoint::Rational(r)
    }

    /// Canonical form of `(a + b*sqrt(d)) / c`; collapses to a rational when
    /// `b = 0` or `d` is a perfect square.
    pub fn surd(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::precondition("surd with zero denominator"));
        }
        if d.is_negative() {
            return Err(Error::precondition("surd with negative discriminant"));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(BoundaryPoint::Rational(BigRational::new(a, c)));
        }
        let (k, s) = square_part(&d);
        let b = b * k;
        if s.is_one() {
            return Ok(BoundaryPoint::Rational(BigRational::new(a + b, c)));
        }
        Ok(Self::surd_squarefree(a, b, c, s))
    }

    /// Canonical form when `d` is already square free and `b, c` are nonzero.
    fn surd_squarefree(a: BigInt, b: BigInt, c: BigInt, s: BigInt) -> Self {
        let (mut a, mut b, mut c) = (a, b, c);
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let approx = Surd::compute_approx(&a, &b, &c, &s);
        BoundaryPoint::Surd(Surd { a, b, c, d: s, approx })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, BoundaryPoint::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            BoundaryPoint::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Double approximation; infinity maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundaryPoint::Infinity => f64::INFINITY,
            BoundaryPoint::Rational(r) => ratio_to_f64(r.numer(), r.denom()),
            BoundaryPoint::Surd(s) => s.approx,
        }
    }

    /// Image under `z ↦ (αz + β)/(γz + δ)` for integers with `αδ − βγ ≠ 0`.
    pub fn apply_int(&self, al: &BigInt, be: &BigInt, ga: &BigInt, de: &BigInt) -> BoundaryPoint {
        match self {
            BoundaryPoint::Infinity => BoundaryPoint::rational(al.clone(), ga.clone()),
            BoundaryPoint::Rational(r) => {
                let (p, q) = (r.numer(), r.denom());
                BoundaryPoint::rational(al * p + be * q, ga * p + de * q)
            }
            BoundaryPoint::Surd(s) => {
                let n0 = al * &s.a + be * &s.c;
                let n1 = al * &s.b;
                let d0 = ga * &s.a + de * &s.c;
                let d1 = ga * &s.b;
                let norm = &d0 * &d0 - &d1 * &d1 * &s.d;
                let p = &n0 * &d0 - &n1 * &d1 * &s.d;
                let q = &n1 * &d0 - &n0 * &d1;
                BoundaryPoint::surd_squarefree(p, q, norm, s.d.clone())
            }
        }
    }

    /// Exact comparison in the linear order of R with ∞ placed last.
    fn cmp_exact(&self, other: &Self) -> Ordering {
        use BoundaryPoint::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Greater,
            (_, Infinity) => Ordering::Less,
            (Rational(x), Rational(y)) => (x.numer() * y.denom()).cmp(&(y.numer() * x.denom())),
            (Surd(s), Rational(r)) => {
                let u = &s.a * r.denom() - r.numer() * &s.c;
                let v = &s.b * r.denom();
                sign_surd(&u, &v, &s.d)
            }
            (Rational(_), Surd(_)) => other.cmp_exact(self).reverse(),
            (Surd(x), Surd(y)) => {
                let a = &x.a * &y.c - &y.a * &x.c;
                if x.d == y.d {
                    let b = &x.b * &y.c - &y.b * &x.c;
                    sign_surd(&a, &b, &x.d)
                } else {
                    let b = &x.b * &y.c;
                    let c = -(&y.b * &x.c);
                    sign_two_surds(&a, &b, &x.d, &c, &y.d)
                }
            }
        }
    }

    /// Parses `"p/q"`, `"p"`, `"inf"` or `"(a+b*sqrt(D))/c"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad boundary point '{s}'"));
        if t == "inf" || t == "∞" {
            return Ok(BoundaryPoint::Infinity);
        }
        if let Some(rest) = t.strip_prefix('(') {
            let close = rest.rfind(')').ok_or_else(bad)?;
            let inner = &rest[..close];
            let tail = &rest[close + 1..];
            let c: BigInt = if tail.is_empty() {
                BigInt::one()
            } else {
                tail.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?
            };
            let sq = inner.find("sqrt(").ok_or_else(bad)?;
            let dstr = inner[sq + 5..].strip_suffix(')').ok_or_else(bad)?;
            let d: BigInt = dstr.parse().map_err(|_| bad())?;
            let head = &inner[..sq];
            let head = head.strip_suffix('*').unwrap_or(head);
            // split `a±b` at the last sign that is not leading
            let idx = head
                .char_indices()
                .skip(1)
                .filter(|(_, ch)| *ch == '+' || *ch == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(bad)?;
            let a: BigInt = head[..idx].parse().map_err(|_| bad())?;
            let bs = &head[idx..];
            let b: BigInt = match bs {
                "+" => BigInt::one(),
                "-" => -BigInt::one(),
                _ => bs.trim_start_matches('+').parse().map_err(|_| bad())?,
            };
            return BoundaryPoint::surd(a, b, c, d);
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(BoundaryPoint::rational(p, q));
        }
        let p: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BoundaryPoint::rational(p, BigInt::one()))
    }
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BoundaryPoint {}

impl PartialOrd for BoundaryPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoundaryPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y) = (self.to_f64(), other.to_f64());
        if x.is_finite() && y.is_finite() {
            let gap = (x - y).abs();
            if gap > 1e-9 * (1.0 + x.abs() + y.abs()) {
                return x.partial_cmp(&y).unwrap();
            }
        }
        self.cmp_exact(other)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Infinity => write!(f, "inf"),
            BoundaryPoint::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            BoundaryPoint::Surd(s) => {
                let sign = if s.b.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", s.a, sign, s.b.abs(), s.d, s.c)
            }
        }
    }
}

impl serde::Serialize for BoundaryPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for BoundaryPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BoundaryPoint::parse(&s).map_err(serde::de::Error::custom)
    }
}
