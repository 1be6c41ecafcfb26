//! Discrete geodesic currents: weighted orbit-counting atoms.

pub mod suite;
pub mod window;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{trace_geodesic, SurfacePreset, Word};
use crate::geom::mobius::fixed_points_int;
use crate::geom::{geodesics_cross, BoundaryPoint, CrossKind, FixedPoints, Geodesic};

pub use suite::{default_suite, Bump, SuiteBox};
pub use window::{
    atoms_in_window, evaluate_box, evaluate_box_prepared, evaluate_bump, local_finiteness_check, Window,
};

/// Weights below this are dropped when a current is normalized.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// An orbit-counting atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// `η_w` for a hyperbolic word `w = r^power` with `r` primitive; counts
    /// each translate of the axis `power` times.
    Closed { root: Word, power: u32, axis: Geodesic },
    /// The orbit of the geodesic joining two cusp points, keyed by the least
    /// translate meeting the interior of F.
    CuspPair { pair: Geodesic },
}

/// Counting measure of the closed geodesic of a hyperbolic word.
pub fn eta_closed(p: &SurfacePreset, w: &Word) -> Result<Atom> {
    let (_, core) = w.cyclic_reduce();
    if core.is_empty() {
        return Err(Error::precondition("identity has no closed geodesic"));
    }
    let (root, power) = core.primitive_root();
    let key = root.conjugacy_key();
    let m = p.word_matrix(&key);
    match fixed_points_int(&m)? {
        FixedPoints::Hyperbolic(lo, hi) => {
            Ok(Atom::Closed { root: key, power: power as u32, axis: Geodesic::new(lo, hi)? })
        }
        FixedPoints::Parabolic(x) => Err(Error::precondition(format!(
            "{} is parabolic (fixes {x}); its counting measure is zero",
            p.word_str(w)
        ))),
    }
}

/// Counting measure of the orbit of the geodesic `[x, y]` between cusp points.
pub fn eta_cusp_pair(p: &SurfacePreset, x: &BoundaryPoint, y: &BoundaryPoint) -> Result<Atom> {
    if matches!(x, BoundaryPoint::Surd(_)) || matches!(y, BoundaryPoint::Surd(_)) {
        return Err(Error::precondition("cusp pair endpoints must be parabolic points"));
    }
    let tr = trace_geodesic(p, &Geodesic::new(x.clone(), y.clone())?)?;
    let pair = tr.local_geodesics().into_iter().min().expect("a trace visits at least one tile");
    Ok(Atom::CuspPair { pair })
}

impl Atom {
    /// Multiplicity each orbit geodesic carries.
    pub fn factor(&self) -> f64 {
        match self {
            Atom::Closed { power, .. } => *power as f64,
            Atom::CuspPair { .. } => 1.0,
        }
    }

    /// A geodesic of the orbit.
    pub fn geodesic(&self) -> &Geodesic {
        match self {
            Atom::Closed { axis, .. } => axis,
            Atom::CuspPair { pair } => pair,
        }
    }

    /// Same orbit, ignoring multiplicity.
    pub fn same_support(&self, o: &Atom) -> bool {
        match (self, o) {
            (Atom::Closed { root: r1, .. }, Atom::Closed { root: r2, .. }) => r1 == r2,
            (Atom::CuspPair { pair: a }, Atom::CuspPair { pair: b }) => a == b,
            _ => false,
        }
    }

    /// The orbit geodesics meeting the interior of F.
    pub fn orbit(&self, p: &SurfacePreset) -> Result<AtomOrbit> {
        let tr = trace_geodesic(p, self.geodesic())?;
        let sf = tr.local_geodesics();
        let sf_f64 = sf.iter().map(|g| g.ends_f64()).collect();
        Ok(AtomOrbit { sf, sf_f64, factor: self.factor(), tiles: tr.tiles, periodic: tr.holonomy.is_some() })
    }

    pub fn describe(&self, p: &SurfacePreset) -> String {
        match self {
            Atom::Closed { root, power, .. } if *power == 1 => format!("closed:{}", p.word_str(root)),
            Atom::Closed { root, power, .. } => format!("closed:({})^{power}", p.word_str(root)),
            Atom::CuspPair { pair } => format!("cusp_pair:{pair}"),
        }
    }
}

/// The orbit of an atom as the finite set `S_F` of its geodesics meeting the
/// interior of F, which with the tile set determines every translate.
#[derive(Clone, Debug)]
pub struct AtomOrbit {
    pub sf: Vec<Geodesic>,
    pub sf_f64: Vec<(f64, f64)>,
    pub factor: f64,
    /// Tiles crossed by the atom's representative (one period for axes).
    pub tiles: Vec<Word>,
    pub periodic: bool,
}

/// A finite positive combination of atoms.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiscreteCurrent {
    pub atoms: Vec<(f64, Atom)>,
}

impl DiscreteCurrent {
    pub fn zero() -> Self {
        DiscreteCurrent { atoms: Vec::new() }
    }

    pub fn single(weight: f64, atom: Atom) -> Self {
        let mut c = DiscreteCurrent::zero();
        c.add(weight, atom);
        c
    }

    /// Adds `weight · atom`, merging with an atom of the same orbit.
    pub fn add(&mut self, weight: f64, atom: Atom) {
        if !(weight.abs() > WEIGHT_FLOOR) {
            return;
        }
        let w = weight * atom.factor();
        let atom = match atom {
            Atom::Closed { root, axis, .. } => Atom::Closed { root, power: 1, axis },
            a => a,
        };
        if let Some(e) = self.atoms.iter_mut().find(|(_, a)| a.same_support(&atom)) {
            e.0 += w;
        } else {
            self.atoms.push((w, atom));
        }
        self.atoms.retain(|(w, _)| w.abs() > WEIGHT_FLOOR);
        self.atoms.sort_by(|x, y| x.1.cmp(&y.1));
    }

    pub fn plus(&self, o: &DiscreteCurrent) -> DiscreteCurrent {
        let mut c = self.clone();
        for (w, a) in &o.atoms {
            c.add(*w, a.clone());
        }
        c
    }

    pub fn scale(&self, c: f64) -> DiscreteCurrent {
        let mut out = DiscreteCurrent::zero();
        for (w, a) in &self.atoms {
            out.add(c * w, a.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (w, _) in &self.atoms {
            if !(*w > 0.0) || !w.is_finite() {
                return Err(Error::precondition(format!("weight {w} is not positive")));
            }
        }
        Ok(())
    }

    pub fn prepare(&self, p: &SurfacePreset) -> Result<PreparedCurrent> {
        self.validate()?;
        let mut out = Vec::new();
        for (w, a) in &self.atoms {
            out.push((*w, a.orbit(p)?));
        }
        Ok(PreparedCurrent { atoms: out })
    }

    pub fn to_file(&self, p: &SurfacePreset) -> CurrentFile {
        let atoms = self
            .atoms
            .iter()
            .map(|(w, a)| match a {
                Atom::Closed { root, power, .. } => AtomEntry {
                    weight: *w,
                    kind: "closed".into(),
                    word: Some(p.word_str(&root.pow(*power as usize))),
                    p: None,
                    q: None,
                },
                Atom::CuspPair { pair } => AtomEntry {
                    weight: *w,
                    kind: "cusp_pair".into(),
                    word: None,
                    p: Some(pair.lo.clone()),
                    q: Some(pair.hi.clone()),
                },
            })
            .collect();
        CurrentFile { atoms }
    }

    pub fn from_file(p: &SurfacePreset, f: &CurrentFile) -> Result<DiscreteCurrent> {
        let mut c = DiscreteCurrent::zero();
        for e in &f.atoms {
            if !(e.weight > 0.0) {
                return Err(Error::precondition(format!("atom weight {} is not positive", e.weight)));
            }
            let atom = match e.kind.as_str() {
                "closed" => {
                    let w = e.word.as_deref().ok_or_else(|| Error::Parse("closed atom needs a word".into()))?;
                    eta_closed(p, &p.parse_word(w)?)?
                }
                "cusp_pair" => {
                    let (x, y) = match (&e.p, &e.q) {
                        (Some(x), Some(y)) => (x, y),
                        _ => return Err(Error::Parse("cusp_pair atom needs p and q".into())),
                    };
                    eta_cusp_pair(p, x, y)?
                }
                k => return Err(Error::Parse(format!("unknown atom kind '{k}'"))),
            };
            c.add(e.weight, atom);
        }
        Ok(c)
    }

    pub fn to_json(&self, p: &SurfacePreset) -> String {
        serde_json::to_string_pretty(&self.to_file(p)).expect("current serializes")
    }

    pub fn from_json(p: &SurfacePreset, s: &str) -> Result<DiscreteCurrent> {
        DiscreteCurrent::from_file(p, &serde_json::from_str(s)?)
    }
}

/// A current with each atom's orbit data computed.
#[derive(Clone, Debug)]
pub struct PreparedCurrent {
    pub atoms: Vec<(f64, AtomOrbit)>,
}

/// JSON form of a current.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentFile {
    pub atoms: Vec<AtomEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub weight: f64,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<BoundaryPoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<BoundaryPoint>,
}

/// No nontrivial word of length at most `max_len` maps the pair to itself
/// (setwise). Float prefilter, exact confirmation.
pub fn stabilizer_sweep(p: &SurfacePreset, g: &Geodesic, max_len: usize) -> Result<()> {
    let (x, y) = g.ends_f64();
    let close = |a: f64, b: f64| {
        if a.is_infinite() || b.is_infinite() {
            a.is_infinite() && b.is_infinite() || (a.abs() > 1e12 && b.abs() > 1e12)
        } else {
            (a - b).abs() <= 1e-9 * (1.0 + a.abs())
        }
    };
    let mut hits = Vec::new();
    crate::oracle::for_each_word(p, max_len, &mut |w, m| {
        if w.is_empty() {
            return;
        }
        let (ix, iy) = (
            crate::geom::mobius::mobius_boundary_f64(m, x),
            crate::geom::mobius::mobius_boundary_f64(m, y),
        );
        if (close(ix, x) && close(iy, y)) || (close(ix, y) && close(iy, x)) {
            hits.push(Word::from_letters(w));
        }
    });
    for w in hits {
        if g.apply(&p.word_matrix(&w)) == *g {
            return Err(Error::precondition(format!("{} stabilizes {g}", p.word_str(&w))));
        }
    }
    Ok(())
}

/// `η_{aⁿbⁿ}`.
pub fn anbn_sequence(p: &SurfacePreset, n: usize) -> Result<Atom> {
    if n == 0 {
        return Err(Error::precondition("n must be at least 1"));
    }
    let w = Word::from_letters(&[vec![1i8; n], vec![2i8; n]].concat());
    eta_closed(p, &w)
}

/// The pair `{g⁻ⁿ x, gⁿ y}` as a cusp-pair atom, with `[x, y]` crossing `Ax(g)`.
pub fn cusp_pair_sequence(p: &SurfacePreset, g: &Word, x: &BoundaryPoint, y: &BoundaryPoint, n: usize) -> Result<Atom> {
    let (a, b) = cusp_pair_endpoints(p, g, x, y, n)?;
    eta_cusp_pair(p, &a, &b)
}

pub fn cusp_pair_endpoints(
    p: &SurfacePreset,
    g: &Word,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    n: usize,
) -> Result<(BoundaryPoint, BoundaryPoint)> {
    if n == 0 {
        return Err(Error::precondition("n must be at least 1"));
    }
    let m = p.word_matrix(g);
    let axis = match fixed_points_int(&m)? {
        FixedPoints::Hyperbolic(lo, hi) => Geodesic::new(lo, hi)?,
        FixedPoints::Parabolic(_) => return Err(Error::precondition("g must be hyperbolic")),
    };
    if geodesics_cross(&Geodesic::new(x.clone(), y.clone())?, &axis) != CrossKind::Cross {
        return Err(Error::precondition("the cusp pair must cross the axis of g"));
    }
    let gn = p.word_matrix(&g.pow(n));
    Ok((gn.inverse().apply(x), gn.apply(y)))
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Closed { root, power, .. } => write!(f, "closed:{root}^{power}"),
            Atom::CuspPair { pair } => write!(f, "cusp_pair:{pair}"),
        }
    }
}
