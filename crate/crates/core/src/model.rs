//! Fixed-point data of a Hamiltonian torus action: parsing, serialization and
//! structural validation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_rational, parse_polynomial, parse_rational, LinearForm, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::kirwan::EquivariantClass;
use crate::rng;

pub const SCHEMA_VERSION: &str = "mpc-1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    /// Moment image, a point of the dual Lie algebra.
    pub moment: LinearForm,
    /// Isotropy weights of the tangent representation.
    pub weights: Vec<LinearForm>,
}

/// One-skeleton edge; `weight` points from `from` towards `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub weight: LinearForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub name: String,
    pub rank: usize,
    pub fixed_points: Vec<FixedPoint>,
    pub edges: Vec<Edge>,
    /// Curated walls, each a polyline of at least two points.
    pub walls: Option<Vec<Vec<LinearForm>>>,
    pub classes: BTreeMap<String, EquivariantClass>,
}

impl Space {
    /// Half the real dimension of the manifold.
    pub fn n(&self) -> usize {
        self.fixed_points.first().map_or(0, |f| f.weights.len())
    }

    /// Real dimension of a reduced space at a regular value.
    pub fn reduced_dim(&self) -> usize {
        2 * self.n().saturating_sub(self.rank)
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.fixed_points.iter().position(|f| f.id == id).ok_or_else(|| Error::UnknownFixedPoint(id.to_string()))
    }

    pub fn fixed_point(&self, id: &str) -> Result<&FixedPoint> {
        Ok(&self.fixed_points[self.index_of(id)?])
    }

    /// Distinct weights (up to sign) occurring at any fixed point, normalized.
    pub fn weight_directions(&self) -> Vec<LinearForm> {
        let mut seen = Vec::new();
        for f in &self.fixed_points {
            for w in &f.weights {
                if let Some((_, n)) = w.normalize() {
                    if !seen.contains(&n) {
                        seen.push(n);
                    }
                }
            }
        }
        seen
    }

    /// Edges as index pairs.
    pub fn edge_indices(&self) -> Result<Vec<(usize, usize, &LinearForm)>> {
        self.edges.iter().map(|e| Ok((self.index_of(&e.from)?, self.index_of(&e.to)?, &e.weight))).collect()
    }

    /// A seeded integer vector pairing non-trivially with every weight.
    pub fn generic_vector(&self, seed: u64) -> LinearForm {
        let dirs = self.weight_directions();
        let mut r = rng::seeded(seed, 0x5eed_0001);
        loop {
            let v = LinearForm::from_ints(&rng::small_int_vector(&mut r, self.rank, 97));
            if !v.is_zero() && dirs.iter().all(|w| !w.pair(&v).is_zero()) {
                return v;
            }
        }
    }

    /// Morse index census: entry `k` counts fixed points with `2k` negative directions for `xi`.
    pub fn index_census(&self, xi: &LinearForm) -> Vec<usize> {
        let mut census = vec![0; self.n() + 1];
        for f in &self.fixed_points {
            let neg = f.weights.iter().filter(|w| w.pair(xi).is_negative()).count();
            if neg < census.len() {
                census[neg] += 1;
            }
        }
        census
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IssueKind {
    Empty,
    DuplicateId,
    DimensionMismatch,
    ZeroWeight,
    NonIntegralWeight,
    WeightCount,
    UnresolvedEdge,
    EdgeNotParallel,
    EdgeWeightMissing,
    MorseInconsistent,
    BadWall,
    BadClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub kind: IssueKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    /// Morse census for the first generic test vector, `census[k]` = points of index `2k`.
    pub index_census: Vec<usize>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    fn push(&mut self, kind: IssueKind, message: String) {
        self.issues.push(Issue { kind, message });
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.issues.iter().map(|i| i.message.clone()).collect();
            Err(Error::NotGkm(msgs.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            writeln!(f, "valid")?;
        } else {
            for i in &self.issues {
                writeln!(f, "error [{:?}]: {}", i.kind, i.message)?;
            }
        }
        let census: Vec<String> = self.index_census.iter().map(usize::to_string).collect();
        write!(f, "index census: ({})", census.join(","))
    }
}

/// Number of random test vectors used for the Morse consistency check.
const MORSE_TRIALS: u64 = 5;

pub fn validate(space: &Space) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if space.fixed_points.is_empty() {
        rep.push(IssueKind::Empty, "no fixed points".into());
        return rep;
    }
    let l = space.rank;
    let n = space.n();
    let mut ids = HashSet::new();
    for f in &space.fixed_points {
        if !ids.insert(f.id.as_str()) {
            rep.push(IssueKind::DuplicateId, format!("duplicate fixed point id {:?}", f.id));
        }
        if f.moment.dim() != l {
            rep.push(IssueKind::DimensionMismatch, format!("{}: moment has {} coordinates, rank is {l}", f.id, f.moment.dim()));
        }
        if f.weights.len() != n {
            rep.push(IssueKind::WeightCount, format!("{}: {} weights, expected {n}", f.id, f.weights.len()));
        }
        for w in &f.weights {
            if w.dim() != l {
                rep.push(IssueKind::DimensionMismatch, format!("{}: weight {w} has wrong length", f.id));
            } else if w.is_zero() {
                rep.push(IssueKind::ZeroWeight, format!("{}: zero weight", f.id));
            } else if !w.is_integral() {
                rep.push(IssueKind::NonIntegralWeight, format!("{}: weight {w} is not integral", f.id));
            }
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for e in &space.edges {
        let (Ok(a), Ok(b)) = (space.fixed_point(&e.from), space.fixed_point(&e.to)) else {
            rep.push(IssueKind::UnresolvedEdge, format!("edge {} -> {} does not resolve", e.from, e.to));
            continue;
        };
        if e.weight.dim() != l || e.weight.is_zero() {
            rep.push(IssueKind::ZeroWeight, format!("edge {} -> {}: bad weight {}", e.from, e.to, e.weight));
            continue;
        }
        let diff = &b.moment - &a.moment;
        match diff.ratio_to(&e.weight) {
            Some(c) if c.is_positive() => {}
            _ => rep.push(
                IssueKind::EdgeNotParallel,
                format!("edge {} -> {}: displacement {diff} is not a positive multiple of {}", e.from, e.to, e.weight),
            ),
        }
        for p in [a, b] {
            if !p.weights.iter().any(|w| w.is_parallel(&e.weight) && (w == &e.weight || *w == -&e.weight)) {
                rep.push(IssueKind::EdgeWeightMissing, format!("edge {} -> {}: weight {} not at {}", e.from, e.to, e.weight, p.id));
            }
        }
    }
    if let Some(walls) = &space.walls {
        for w in walls {
            if w.len() < 2 || w.iter().any(|p| p.dim() != l) || w.windows(2).any(|s| s[0] == s[1]) {
                rep.push(IssueKind::BadWall, "wall polyline needs at least two distinct points of the right dimension".into());
            }
        }
    }
    for (name, cls) in &space.classes {
        if cls.restrictions.len() != space.fixed_points.len() || cls.restrictions.iter().any(|p| p.nvars() != l) {
            rep.push(IssueKind::BadClass, format!("class {name:?} does not match the fixed point set"));
        }
    }
    let mut census = None;
    for t in 0..MORSE_TRIALS {
        let xi = space.generic_vector(0x6d6f_7273 + t);
        let c = space.index_census(&xi);
        match &census {
            None => census = Some(c),
            Some(first) if *first != c => {
                rep.push(IssueKind::MorseInconsistent, format!("index census {first:?} vs {c:?} for xi = {xi}"));
                break;
            }
            _ => {}
        }
    }
    rep.index_census = census.unwrap_or_default();
    rep
}

// ---------------------------------------------------------------------------
// Document format

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rat(Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        if self.0.is_integer() {
            if let Some(i) = self.0.numer().to_i64() {
                return s.serialize_i64(i);
            }
        }
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(i) => Ok(Rat(Rational::from_integer(i.into()))),
            Repr::Str(s) => parse_rational(&s).map(Rat).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixedPointDoc {
    id: String,
    moment: Vec<Rat>,
    weights: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    weight: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    version: String,
    name: String,
    rank: usize,
    fixed_points: Vec<FixedPointDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    walls: Option<Vec<Vec<Vec<Rat>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

fn form(v: &[Rat]) -> LinearForm {
    LinearForm::new(v.iter().map(|r| r.0.clone()).collect())
}

fn rats(f: &LinearForm) -> Vec<Rat> {
    f.coeffs.iter().cloned().map(Rat).collect()
}

/// Parses an `mpc-1` document. Structural checks are left to [`validate`].
pub fn parse_space(document: &str) -> Result<Space> {
    let value: serde_json::Value = serde_json::from_str(document).map_err(|e| Error::Syntax(e.to_string()))?;
    match value.get("version") {
        Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => {}
        Some(serde_json::Value::String(v)) => return Err(Error::Version(v.clone())),
        Some(other) => return Err(Error::Version(other.to_string())),
        None => return Err(Error::Syntax("missing \"version\"".into())),
    }
    let doc: SpaceDoc = serde_json::from_value(value).map_err(|e| Error::Syntax(e.to_string()))?;
    let l = doc.rank;
    let fixed_points: Vec<FixedPoint> = doc
        .fixed_points
        .into_iter()
        .map(|f| FixedPoint { id: f.id, moment: form(&f.moment), weights: f.weights.iter().map(|w| LinearForm::from_ints(w)).collect() })
        .collect();
    let edges = doc.edges.into_iter().map(|e| Edge { from: e.from, to: e.to, weight: LinearForm::from_ints(&e.weight) }).collect();
    let walls = doc.walls.map(|ws| ws.iter().map(|pl| pl.iter().map(|p| form(p)).collect()).collect());
    let mut space = Space { name: doc.name, rank: l, fixed_points, edges, walls, classes: BTreeMap::new() };
    for (name, table) in doc.classes.unwrap_or_default() {
        let mut restrictions = vec![Polynomial::zero(l); space.fixed_points.len()];
        let mut seen = HashSet::new();
        for (id, text) in &table {
            let i = space.index_of(id).map_err(|_| Error::Syntax(format!("class {name:?} names unknown fixed point {id:?}")))?;
            restrictions[i] = parse_polynomial(text, l)?;
            seen.insert(i);
        }
        if seen.len() != space.fixed_points.len() {
            return Err(Error::Syntax(format!("class {name:?} must list every fixed point")));
        }
        space.classes.insert(name, EquivariantClass::new(restrictions));
    }
    Ok(space)
}

/// Canonical `mpc-1` text (pretty JSON, trailing newline).
pub fn serialize_space(space: &Space) -> String {
    let ints = |w: &LinearForm| w.to_ints().expect("weights must be integral to serialize");
    let doc = SpaceDoc {
        version: SCHEMA_VERSION.to_string(),
        name: space.name.clone(),
        rank: space.rank,
        fixed_points: space
            .fixed_points
            .iter()
            .map(|f| FixedPointDoc { id: f.id.clone(), moment: rats(&f.moment), weights: f.weights.iter().map(ints).collect() })
            .collect(),
        edges: space.edges.iter().map(|e| EdgeDoc { from: e.from.clone(), to: e.to.clone(), weight: ints(&e.weight) }).collect(),
        walls: space.walls.as_ref().map(|ws| ws.iter().map(|pl| pl.iter().map(rats).collect()).collect()),
        classes: if space.classes.is_empty() {
            None
        } else {
            Some(
                space
                    .classes
                    .iter()
                    .map(|(name, cls)| {
                        let table = space.fixed_points.iter().zip(&cls.restrictions).map(|(f, p)| (f.id.clone(), p.to_string())).collect();
                        (name.clone(), table)
                    })
                    .collect(),
            )
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Reads a point given as comma-separated rationals, e.g. `1/4,1/4`.
pub fn parse_point(text: &str) -> Result<LinearForm> {
    let coords: Option<Vec<Rational>> = text.split(',').map(parse_rational).collect();
    coords.map(LinearForm::new).ok_or_else(|| Error::InvalidArgument(format!("bad point {text:?}")))
}

pub fn fmt_point(p: &LinearForm) -> String {
    let parts: Vec<String> = p.coeffs.iter().map(fmt_rational).collect();
    parts.join(",")
}

/// `true` when `p` has zero coordinates only.
pub fn is_origin(p: &LinearForm) -> bool {
    p.coeffs.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = r#"{
      "version": "mpc-1", "name": "sphere", "rank": 1,
      "fixed_points": [
        {"id": "S", "moment": [0], "weights": [[1]]},
        {"id": "N", "moment": ["1"], "weights": [[-1]]}
      ],
      "edges": [{"from": "S", "to": "N", "weight": [1]}]
    }"#;

    #[test]
    fn parses_sphere() {
        let s = parse_space(SPHERE).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.rank, 1);
        assert!(validate(&s).is_ok());
        assert_eq!(parse_space(&serialize_space(&s)).unwrap(), s);
    }

    #[test]
    fn zero_weight_parses_but_fails_validation() {
        let doc = SPHERE.replace("[[1]]", "[[0]]");
        let s = parse_space(&doc).unwrap();
        let rep = validate(&s);
        assert!(rep.has(IssueKind::ZeroWeight));
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(matches!(parse_space(&SPHERE.replace("\"edges\"", "\"extra\": 1, \"edges\"")), Err(Error::Syntax(_))));
        assert!(matches!(parse_space(&SPHERE.replace("mpc-1", "mpc-9")), Err(Error::Version(_))));
        assert!(matches!(parse_space("{"), Err(Error::Syntax(_))));
    }

    #[test]
    fn classes_round_trip() {
        let doc = SPHERE.replace(
            "\"edges\"",
            "\"classes\": {\"c\": {\"S\": \"0\", \"N\": \"-x1\"}}, \"edges\"",
        );
        let s = parse_space(&doc).unwrap();
        assert_eq!(s.classes["c"].restrictions[1].to_string(), "-x1");
        let text = serialize_space(&s);
        assert_eq!(serialize_space(&parse_space(&text).unwrap()), text);
    }

    #[test]
    fn points() {
        let p = parse_point("1/4, -2").unwrap();
        assert_eq!(fmt_point(&p), "1/4,-2");
        assert!(parse_point("a,b").is_err());
    }
}
