//! Surface presets: generators, ideal fundamental polygon, pairings, cusps.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::geom::{Arc, BoundaryPoint, FGeod, Geodesic, Horoball, IntMat};

/// Side of the fundamental polygon between consecutive ideal vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Wall {
    pub geod: Geodesic,
    /// Open boundary arc cut off by the wall, on the side away from F.
    pub outside: Arc,
    /// Whether F contains this wall (half-open convention).
    pub owned: bool,
    /// The tile across this wall from `g F` is `g · letter F`.
    pub letter: Letter,
    /// The wall of the neighbor tile that coincides with this one.
    pub partner: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cusp {
    pub vertex: BoundaryPoint,
    pub class: usize,
    pub stabilizer: Word,
}

/// Serialized form of a preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetSpec {
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
    /// Ideal vertices of F in counterclockwise order.
    pub vertices: Vec<BoundaryPoint>,
    /// Wall `k` joins vertex `k` to vertex `k + 1`.
    pub walls: Vec<WallSpec>,
    pub cusps: Vec<CuspSpec>,
    pub class_names: Vec<String>,
    /// Least `|ps − qr|` between distinct cusp points of classes `i` and `j`.
    pub class_min_det: Vec<Vec<u32>>,
    pub default_lambda: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: char,
    pub matrix: [i64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallSpec {
    pub letter: String,
    pub owned: bool,
    pub partner: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspSpec {
    pub class: usize,
    pub stabilizer: String,
}

/// One positive scale per cusp class. The horoball at `∞` of class `c` is
/// `Im z > λ_c`; at `p/q` it has Euclidean diameter `1/(λ_c q²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorocycleParameter {
    pub lambda: Vec<f64>,
}

impl HorocycleParameter {
    pub fn uniform(n_classes: usize, l: f64) -> Self {
        HorocycleParameter { lambda: vec![l; n_classes] }
    }
}

#[derive(Clone, Debug)]
pub struct SurfacePreset {
    pub spec: PresetSpec,
    pub name: String,
    pub gen_names: Vec<char>,
    pub generators: Vec<IntMat>,
    inverses: Vec<IntMat>,
    gen_f64: Vec<[f64; 4]>,
    inv_f64: Vec<[f64; 4]>,
    pub vertices: Vec<BoundaryPoint>,
    pub vertices_f64: Vec<f64>,
    pub walls: Vec<Wall>,
    pub cusps: Vec<Cusp>,
    pub(crate) wall_fgeod: Vec<FGeod>,
    pub(crate) outside_sign: Vec<f64>,
}

fn parse_letter(s: &str, names: &[char]) -> Result<Letter> {
    let w = Word::parse(s, names)?;
    match w.letters() {
        [l] => Ok(*l),
        _ => Err(Error::Parse(format!("expected a single letter, got '{s}'"))),
    }
}

/// Some real point strictly inside an arc.
fn interior_point(a: &Arc) -> f64 {
    let (s, e) = (a.start.to_f64(), a.end.to_f64());
    if s.is_infinite() {
        e - 1.0
    } else if e.is_infinite() {
        s + 1.0
    } else if s < e {
        0.5 * (s + e)
    } else {
        s + 1.0
    }
}

fn boundary_side(g: &FGeod, x: f64) -> f64 {
    let v = match *g {
        FGeod::Vertical(u) => x - u,
        FGeod::Circle { u, v, .. } => (x - u) * (x - v),
    };
    v.signum()
}

impl SurfacePreset {
    pub fn from_spec(spec: PresetSpec) -> Result<Self> {
        let gen_names: Vec<char> = spec.generators.iter().map(|g| g.name).collect();
        let mut generators = Vec::new();
        for g in &spec.generators {
            let [a, b, c, d] = g.matrix;
            let m = IntMat::new(a, b, c, d);
            if m.det() != 1.into() {
                return Err(Error::precondition(format!("generator {} has determinant != 1", g.name)));
            }
            generators.push(m);
        }
        let inverses: Vec<IntMat> = generators.iter().map(|m| m.inverse()).collect();
        let n = spec.vertices.len();
        if spec.walls.len() != n || spec.cusps.len() != n || n != 2 * generators.len() {
            return Err(Error::precondition("polygon must have one wall and cusp per vertex and two walls per generator"));
        }
        let mut walls = Vec::new();
        for (k, ws) in spec.walls.iter().enumerate() {
            let v0 = spec.vertices[k].clone();
            let v1 = spec.vertices[(k + 1) % n].clone();
            walls.push(Wall {
                geod: Geodesic::new(v0.clone(), v1.clone())?,
                outside: Arc::new(v0, v1)?,
                owned: ws.owned,
                letter: parse_letter(&ws.letter, &gen_names)?,
                partner: ws.partner,
            });
        }
        let mut cusps = Vec::new();
        for (k, cs) in spec.cusps.iter().enumerate() {
            cusps.push(Cusp {
                vertex: spec.vertices[k].clone(),
                class: cs.class,
                stabilizer: Word::parse(&cs.stabilizer, &gen_names)?,
            });
        }
        let wall_fgeod: Vec<FGeod> = walls.iter().map(|w| w.geod.to_fgeod()).collect();
        let outside_sign = walls
            .iter()
            .zip(&wall_fgeod)
            .map(|(w, g)| boundary_side(g, interior_point(&w.outside)))
            .collect();
        let p = SurfacePreset {
            name: spec.name.clone(),
            gen_names,
            gen_f64: generators.iter().map(|m| m.to_f64()).collect(),
            inv_f64: inverses.iter().map(|m| m.to_f64()).collect(),
            generators,
            inverses,
            vertices_f64: spec.vertices.iter().map(|v| v.to_f64()).collect(),
            vertices: spec.vertices.clone(),
            walls,
            cusps,
            wall_fgeod,
            outside_sign,
            spec,
        };
        p.pingpong_certificate()?;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn n_classes(&self) -> usize {
        self.spec.class_names.len()
    }

    pub fn letter_matrix(&self, l: Letter) -> &IntMat {
        let k = (l.unsigned_abs() - 1) as usize;
        if l > 0 {
            &self.generators[k]
        } else {
            &self.inverses[k]
        }
    }

    pub fn letter_matrix_f64(&self, l: Letter) -> [f64; 4] {
        let k = (l.unsigned_abs() - 1) as usize;
        if l > 0 {
            self.gen_f64[k]
        } else {
            self.inv_f64[k]
        }
    }

    /// Wall of F whose neighbor tile is reached by `letter`.
    pub fn wall_of_letter(&self, l: Letter) -> usize {
        self.walls.iter().position(|w| w.letter == l).expect("every letter labels a wall")
    }

    pub fn wall_fgeod(&self, k: usize) -> &FGeod {
        &self.wall_fgeod[k]
    }

    /// Exact checks that F with its pairings is a Poincaré polygon whose
    /// outside arcs play ping-pong: vertices strictly cyclically ordered,
    /// pairings involutive and letter-inverse, each generator carrying the
    /// closed outside arc of its partner wall onto the complement of its own
    /// open outside arc, and cusp stabilizers parabolic at their vertices.
    pub fn pingpong_certificate(&self) -> Result<()> {
        let n = self.vertices.len();
        let descents = (0..n).filter(|&k| self.vertices[k] >= self.vertices[(k + 1) % n]).count();
        if descents != 1 {
            return Err(Error::precondition("vertices are not in counterclockwise order"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (k, w) in self.walls.iter().enumerate() {
            if !seen.insert(w.letter) {
                return Err(Error::precondition(format!("letter of wall {k} repeated")));
            }
            let j = w.partner;
            let pw = self.walls.get(j).ok_or_else(|| Error::precondition("partner out of range"))?;
            if pw.partner != k || pw.letter != -w.letter || pw.owned == w.owned {
                return Err(Error::precondition(format!("walls {k} and {j} are not a valid pairing")));
            }
            let m = self.letter_matrix(w.letter);
            let ok = m.apply(&self.vertices[j]) == self.vertices[(k + 1) % n]
                && m.apply(&self.vertices[(j + 1) % n]) == self.vertices[k];
            if !ok {
                return Err(Error::precondition(format!("generator of wall {k} does not pair it with wall {j}")));
            }
        }
        for (k, c) in self.cusps.iter().enumerate() {
            let m = self.word_matrix(&c.stabilizer);
            let tr = m.trace().abs();
            if tr != 2.into() || m.is_pm_identity() || m.apply(&c.vertex) != c.vertex {
                return Err(Error::precondition(format!("cusp {k} stabilizer is not parabolic at its vertex")));
            }
            if c.class >= self.n_classes() {
                return Err(Error::precondition("cusp class out of range"));
            }
        }
        Ok(())
    }

    /// The preset conjugated by `h`: generators `h s h⁻¹` and domain `h F`.
    pub fn conjugate(&self, h: &Word) -> Result<SurfacePreset> {
        let hm = self.word_matrix(h);
        let hi = hm.inverse();
        let mut spec = self.spec.clone();
        for (g, m) in spec.generators.iter_mut().zip(&self.generators) {
            let c = hm.mul(m).mul(&hi);
            let e = |v: &num_bigint::BigInt| v.to_i64().ok_or_else(|| Error::precondition("conjugated matrix overflows i64"));
            g.matrix = [e(&c.a)?, e(&c.b)?, e(&c.c)?, e(&c.d)?];
        }
        spec.vertices = self.vertices.iter().map(|v| hm.apply(v)).collect();
        spec.name = format!("{}^{}", self.name, self.word_str(h));
        SurfacePreset::from_spec(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("preset serializes")
    }

    pub fn from_json(s: &str) -> Result<SurfacePreset> {
        SurfacePreset::from_spec(serde_json::from_str(s)?)
    }

    /// Hex SHA-256 of the serialized preset.
    pub fn hash(&self) -> String {
        let d = Sha256::digest(self.to_json().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn default_lambda(&self) -> HorocycleParameter {
        HorocycleParameter { lambda: self.spec.default_lambda.clone() }
    }

    /// Checks that the horoball family of `lambda` is pairwise disjoint
    /// (tangency allowed): `λ_i λ_j ≥ 1/δ_ij²` with `δ` the least determinant.
    pub fn validate_lambda(&self, lambda: &HorocycleParameter) -> Result<()> {
        let k = self.n_classes();
        if lambda.lambda.len() != k || lambda.lambda.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::precondition(format!("need {k} positive horocycle scales")));
        }
        for i in 0..k {
            for j in 0..k {
                let d = self.spec.class_min_det[i][j] as f64;
                if lambda.lambda[i] * lambda.lambda[j] * d * d < 1.0 - 1e-12 {
                    return Err(Error::precondition(format!(
                        "horoballs of classes {} and {} overlap",
                        self.spec.class_names[i], self.spec.class_names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Horoball at a cusp point of the given class.
    pub fn horoball_at(&self, x: &BoundaryPoint, class: usize, lambda: &HorocycleParameter) -> Horoball {
        let l = lambda.lambda[class];
        let h = if x.is_infinity() { l } else { 1.0 / l };
        Horoball::new(x.clone(), h).expect("cusp points are rational")
    }

    /// Horoball at vertex `v` of F.
    pub fn vertex_horoball(&self, v: usize, lambda: &HorocycleParameter) -> Horoball {
        self.horoball_at(&self.vertices[v], self.cusps[v].class, lambda)
    }
}

/// The principal congruence subgroup of level 2: `a = [[1,2],[0,1]]`,
/// `b = [[1,0],[2,1]]`, with F the ideal quadrilateral on `−1, 0, 1, ∞`.
pub fn preset_gamma2() -> SurfacePreset {
    let bp = |s: &str| BoundaryPoint::parse(s).unwrap();
    let wall = |letter: &str, owned: bool, partner: usize| WallSpec { letter: letter.into(), owned, partner };
    let cusp = |class: usize, stabilizer: &str| CuspSpec { class, stabilizer: stabilizer.into() };
    let spec = PresetSpec {
        name: "gamma2".into(),
        generators: vec![
            GeneratorSpec { name: 'a', matrix: [1, 2, 0, 1] },
            GeneratorSpec { name: 'b', matrix: [1, 0, 2, 1] },
        ],
        vertices: vec![bp("-1"), bp("0"), bp("1"), bp("inf")],
        walls: vec![wall("B", true, 1), wall("b", false, 0), wall("a", false, 3), wall("A", true, 2)],
        cusps: vec![cusp(2, "Ba"), cusp(1, "b"), cusp(2, "aB"), cusp(0, "a")],
        class_names: vec!["inf".into(), "0".into(), "1".into()],
        class_min_det: vec![vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]],
        default_lambda: vec![1.0, 1.0, 1.0],
    };
    SurfacePreset::from_spec(spec).expect("built-in preset is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pt;

    #[test]
    fn gamma2_certificate_and_products() {
        let p = preset_gamma2();
        let ab = p.word_matrix(&p.parse_word("ab").unwrap());
        assert_eq!(ab, IntMat::new(5, 2, 2, 1));
        for n in 1..=8i64 {
            let w = p.parse_word(&("a".repeat(n as usize) + &"b".repeat(n as usize))).unwrap();
            assert_eq!(p.word_matrix(&w), IntMat::new(1 + 4 * n * n, 2 * n, 2 * n, 1));
        }
    }

    #[test]
    fn json_round_trip_and_hash() {
        let p = preset_gamma2();
        let q = SurfacePreset::from_json(&p.to_json()).unwrap();
        assert_eq!(p.hash(), q.hash());
        assert_eq!(p.hash().len(), 64);
    }

    #[test]
    fn broken_pairing_rejected() {
        let mut spec = preset_gamma2().spec;
        spec.generators[0].matrix = [1, 4, 0, 1];
        assert!(SurfacePreset::from_spec(spec).is_err());
    }

    #[test]
    fn wall_sides() {
        let p = preset_gamma2();
        assert!(p.in_domain(Pt::new(0.0, 1.0)));
        assert!(p.in_domain(Pt::new(-1.0, 1.0)));
        assert!(!p.in_domain(Pt::new(1.0, 1.0)));
        assert!(!p.in_domain(Pt::new(0.5, 0.3)));
    }

    #[test]
    fn default_lambda_is_disjoint() {
        let p = preset_gamma2();
        p.validate_lambda(&p.default_lambda()).unwrap();
        assert!(p.validate_lambda(&HorocycleParameter::uniform(3, 0.9)).is_err());
    }
}
