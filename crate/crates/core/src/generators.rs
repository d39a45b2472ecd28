//! Deterministic example spaces and Schubert data for the SU(3) flag manifold.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::algebra::{int, parse_rational, LinearForm, Polynomial, Rational};
use crate::chambers;
use crate::error::{Error, Result};
use crate::algebra::linalg;
use crate::kirwan::{Cohomology, EquivariantClass};
use crate::model::{validate, Edge, FixedPoint, Space};

/// A named generator with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorParams {
    Sphere,
    Cp2,
    Hirzebruch(i64),
    Cp2xCp1A,
    Cp2xCp1B,
    Tolman,
    /// Highest weight in fundamental-weight coordinates.
    Su3(Rational, Rational),
}

impl GeneratorParams {
    /// Builds parameters from a generator name and positional arguments.
    pub fn from_parts(name: &str, args: &[&str]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} takes {n} parameter(s), got {}", args.len())))
            }
        };
        let rational = |s: &str| parse_rational(s).ok_or_else(|| Error::InvalidParams(format!("bad number {s:?}")));
        match name {
            "sphere" => want(0).map(|_| GeneratorParams::Sphere),
            "cp2" => want(0).map(|_| GeneratorParams::Cp2),
            "cp2xcp1_a" => want(0).map(|_| GeneratorParams::Cp2xCp1A),
            "cp2xcp1_b" => want(0).map(|_| GeneratorParams::Cp2xCp1B),
            "tolman" => want(0).map(|_| GeneratorParams::Tolman),
            "hirzebruch" => {
                want(1)?;
                let k = args[0].parse::<i64>().map_err(|_| Error::InvalidParams(format!("bad integer {:?}", args[0])))?;
                Ok(GeneratorParams::Hirzebruch(k))
            }
            "su3" => {
                let parts: Vec<&str> = if args.len() == 1 { args[0].split(',').collect() } else { args.to_vec() };
                if parts.len() != 2 {
                    return Err(Error::InvalidParams("su3 takes a weight a,b".into()));
                }
                Ok(GeneratorParams::Su3(rational(parts[0])?, rational(parts[1])?))
            }
            _ => Err(Error::InvalidParams(format!("unknown generator {name:?}"))),
        }
    }
}

impl FromStr for GeneratorParams {
    type Err = Error;

    /// Accepts `name` or `name(arg, ...)`, e.g. `hirzebruch(2)`, `su3(2,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            Some(i) if s.ends_with(')') => {
                let args: Vec<&str> = s[i + 1..s.len() - 1].split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
                GeneratorParams::from_parts(&s[..i], &args)
            }
            Some(_) => Err(Error::InvalidParams(format!("unbalanced parameters in {s:?}"))),
            None => GeneratorParams::from_parts(s, &[]),
        }
    }
}

impl fmt::Display for GeneratorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorParams::Sphere => write!(f, "sphere"),
            GeneratorParams::Cp2 => write!(f, "cp2"),
            GeneratorParams::Hirzebruch(k) => write!(f, "hirzebruch({k})"),
            GeneratorParams::Cp2xCp1A => write!(f, "cp2xcp1_a"),
            GeneratorParams::Cp2xCp1B => write!(f, "cp2xcp1_b"),
            GeneratorParams::Tolman => write!(f, "tolman"),
            GeneratorParams::Su3(a, b) => write!(f, "su3({},{})", crate::algebra::fmt_rational(a), crate::algebra::fmt_rational(b)),
        }
    }
}

/// Produces the space and checks it against the structural validator.
pub fn generate(params: &GeneratorParams) -> Result<Space> {
    let space = match params {
        GeneratorParams::Sphere => sphere(),
        GeneratorParams::Cp2 => cp2(),
        GeneratorParams::Hirzebruch(k) => hirzebruch(*k)?,
        GeneratorParams::Cp2xCp1A => cp2xcp1_a(),
        GeneratorParams::Cp2xCp1B => cp2xcp1_b(),
        GeneratorParams::Tolman => tolman(),
        GeneratorParams::Su3(a, b) => su3_weight(a.clone(), b.clone())?,
    };
    validate(&space).into_result()?;
    Ok(space)
}

/// Every shipped generator with the parameters of its checked-in data file.
pub fn shipped() -> Vec<(&'static str, GeneratorParams)> {
    vec![
        ("sphere", GeneratorParams::Sphere),
        ("cp2", GeneratorParams::Cp2),
        ("hirzebruch2", GeneratorParams::Hirzebruch(2)),
        ("cp2xcp1_a", GeneratorParams::Cp2xCp1A),
        ("cp2xcp1_b", GeneratorParams::Cp2xCp1B),
        ("tolman", GeneratorParams::Tolman),
        ("su3_rho", GeneratorParams::Su3(int(1), int(1))),
        ("su3_21", GeneratorParams::Su3(int(2), int(1))),
    ]
}

// ---------------------------------------------------------------------------
// Small builders

fn point(id: &str, moment: &[i64], weights: &[&[i64]]) -> FixedPoint {
    FixedPoint { id: id.to_string(), moment: LinearForm::from_ints(moment), weights: weights.iter().map(|w| LinearForm::from_ints(w)).collect() }
}

fn edge(from: &str, to: &str, weight: &[i64]) -> Edge {
    Edge { from: from.to_string(), to: to.to_string(), weight: LinearForm::from_ints(weight) }
}

fn space(name: &str, rank: usize, fixed_points: Vec<FixedPoint>, edges: Vec<Edge>) -> Space {
    Space { name: name.to_string(), rank, fixed_points, edges, walls: None, classes: Default::default() }
}

/// `S²` with the rotation circle; moment values 0 and 1.
pub fn sphere() -> Space {
    space("sphere", 1, vec![point("S", &[0], &[&[1]]), point("N", &[1], &[&[-1]])], vec![edge("S", "N", &[1])])
}

/// `CP²` with the standard simplex as moment polytope.
pub fn cp2() -> Space {
    space(
        "cp2",
        2,
        vec![
            point("A", &[0, 0], &[&[1, 0], &[0, 1]]),
            point("B", &[1, 0], &[&[-1, 0], &[-1, 1]]),
            point("C", &[0, 1], &[&[0, -1], &[1, -1]]),
        ],
        vec![edge("A", "B", &[1, 0]), edge("A", "C", &[0, 1]), edge("B", "C", &[-1, 1])],
    )
}

/// Hirzebruch surface `F_k` over the trapezoid `(0,0), (k+1,0), (1,1), (0,1)`.
pub fn hirzebruch(k: i64) -> Result<Space> {
    if k < 0 {
        return Err(Error::InvalidParams(format!("hirzebruch needs k >= 0, got {k}")));
    }
    Ok(space(
        &format!("hirzebruch{k}"),
        2,
        vec![
            point("A", &[0, 0], &[&[1, 0], &[0, 1]]),
            point("B", &[k + 1, 0], &[&[-1, 0], &[-k, 1]]),
            point("C", &[1, 1], &[&[k, -1], &[-1, 0]]),
            point("D", &[0, 1], &[&[1, 0], &[0, -1]]),
        ],
        vec![edge("A", "B", &[1, 0]), edge("B", "C", &[-k, 1]), edge("C", "D", &[-1, 0]), edge("D", "A", &[0, -1])],
    ))
}

// ---------------------------------------------------------------------------
// CP² x CP¹ halves and the glued six-point space

/// Toric `T³` data of `CP² x CP¹` (triangle of side `side`, interval of length `height`)
/// pushed to `T²` through the integer matrix `proj`, then translated by `shift`.
struct Projection {
    proj: [[i64; 3]; 2],
    side: i64,
    height: i64,
    shift: [i64; 2],
}

const TRIANGLE: [([i64; 2], [[i64; 3]; 2]); 3] =
    [([0, 0], [[1, 0, 0], [0, 1, 0]]), ([1, 0], [[-1, 0, 0], [-1, 1, 0]]), ([0, 1], [[0, -1, 0], [1, -1, 0]])];

impl Projection {
    fn apply(&self, v: [i64; 3]) -> [i64; 2] {
        let row = |r: usize| (0..3).map(|k| self.proj[r][k] * v[k]).sum::<i64>();
        [row(0), row(1)]
    }

    fn build(&self, name: &str, prefix: &str) -> Space {
        let mut fixed_points = Vec::new();
        for (layer, z) in [(0, 0), (1, self.height)] {
            for (i, (corner, ws)) in TRIANGLE.iter().enumerate() {
                let m = self.apply([corner[0] * self.side, corner[1] * self.side, z]);
                let vertical = [0, 0, if layer == 0 { 1 } else { -1 }];
                let weights = ws.iter().chain(std::iter::once(&vertical)).map(|w| LinearForm::from_ints(&self.apply(*w))).collect();
                fixed_points.push(FixedPoint {
                    id: format!("{prefix}{}{}", ["a", "b", "c"][i], layer),
                    moment: LinearForm::from_ints(&[m[0] + self.shift[0], m[1] + self.shift[1]]),
                    weights,
                });
            }
        }
        let mut pairs = Vec::new();
        for layer in 0..2 {
            pairs.extend([(0, 1), (0, 2), (1, 2)].map(|(i, j)| (3 * layer + i, 3 * layer + j)));
        }
        pairs.extend((0..3).map(|i| (i, i + 3)));
        let edges = pairs.into_iter().map(|(i, j)| skeleton_edge(&fixed_points, i, j)).collect();
        space(name, 2, fixed_points, edges)
    }
}

/// Edge from `i` to `j` labelled by the weight at `i` pointing at `j`.
fn skeleton_edge(fps: &[FixedPoint], i: usize, j: usize) -> Edge {
    let d = &fps[j].moment - &fps[i].moment;
    let weight = fps[i]
        .weights
        .iter()
        .find(|w| w.ratio_to(&d).is_some_and(|t| t.is_positive()) || d.ratio_to(w).is_some_and(|t| t.is_positive()))
        .expect("edge direction is an isotropy weight")
        .clone();
    Edge { from: fps[i].id.clone(), to: fps[j].id.clone(), weight }
}

const HALF_A: Projection = Projection { proj: [[-1, -1, -1], [0, 1, -1]], side: 1, height: 2, shift: [3, 2] };
const HALF_B: Projection = Projection { proj: [[-1, 0, -1], [0, -1, -1]], side: 1, height: 2, shift: [3, 3] };
/// Height of the cut line `x₂ = CUT`.
const CUT: (i64, i64) = (3, 2);

pub fn cp2xcp1_a() -> Space {
    HALF_A.build("cp2xcp1_a", "")
}

pub fn cp2xcp1_b() -> Space {
    HALF_B.build("cp2xcp1_b", "")
}

fn below_cut(p: &FixedPoint) -> bool {
    p.moment.coeffs[1] < Rational::new(CUT.0.into(), CUT.1.into())
}

/// Bottom half of the first projection glued to the top half of the second along
/// the horizontal cut; crossing edges are matched by direction and crossing point.
pub fn tolman() -> Space {
    let a = HALF_A.build("cp2xcp1_a", "A");
    let b = HALF_B.build("cp2xcp1_b", "B");
    let bottom: Vec<FixedPoint> = a.fixed_points.iter().filter(|p| below_cut(p)).cloned().collect();
    let top: Vec<FixedPoint> = b.fixed_points.iter().filter(|p| !below_cut(p)).cloned().collect();
    let mut fps = bottom.clone();
    fps.extend(top.iter().cloned());
    let position = |id: &str| fps.iter().position(|f| f.id == id).expect("glued point");
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let keep = |s: &Space, lower: bool| -> Vec<(String, String)> {
        s.edges
            .iter()
            .filter(|e| {
                let (f, t) = (s.fixed_point(&e.from).unwrap(), s.fixed_point(&e.to).unwrap());
                below_cut(f) == lower && below_cut(t) == lower
            })
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect()
    };
    for (f, t) in keep(&a, true).into_iter().chain(keep(&b, false)) {
        pairs.push((position(&f), position(&t)));
    }
    // Each bottom point has exactly one edge leaving the half; join it to the top
    // point reached in the same direction.
    for f in &bottom {
        let i = position(&f.id);
        let used: Vec<LinearForm> = pairs
            .iter()
            .filter_map(|&(x, y)| if x == i { Some(&fps[y].moment - &fps[i].moment) } else if y == i { Some(&fps[x].moment - &fps[i].moment) } else { None })
            .collect();
        let free = f.weights.iter().find(|w| !used.iter().any(|d| d.is_parallel(w))).expect("one crossing weight");
        let target = top
            .iter()
            .find(|t| {
                let d = &t.moment - &f.moment;
                d.ratio_to(free).is_some_and(|s| s.is_positive())
            })
            .expect("matching crossing edge");
        pairs.push((i, position(&target.id)));
    }
    let mut edges: Vec<Edge> = pairs.into_iter().map(|(i, j)| skeleton_edge(&fps, i, j)).collect();
    // Rename to F1..F6 by height, then by first coordinate.
    let mut order: Vec<usize> = (0..fps.len()).collect();
    order.sort_by(|&i, &j| fps[i].moment.coeffs.iter().rev().cmp(fps[j].moment.coeffs.iter().rev()));
    let rename = |id: &str| format!("F{}", order.iter().position(|&k| fps[k].id == id).expect("known id") + 1);
    for e in &mut edges {
        e.from = rename(&e.from);
        e.to = rename(&e.to);
    }
    let fps: Vec<FixedPoint> = order.iter().map(|&k| FixedPoint { id: rename(&fps[k].id), ..fps[k].clone() }).collect();
    let mut s = space("tolman", 2, fps, edges);
    s.walls = Some(tolman_walls(&s));
    s
}

/// Curated walls: the glued skeleton edges as polylines.
fn tolman_walls(s: &Space) -> Vec<Vec<LinearForm>> {
    s.edges.iter().map(|e| vec![s.fixed_point(&e.from).unwrap().moment.clone(), s.fixed_point(&e.to).unwrap().moment.clone()]).collect()
}

// ---------------------------------------------------------------------------
// SU(3)

/// Elements of `S₃` in the order used for fixed points.
pub const WEYL: [&str; 6] = ["e", "s1", "s2", "s1s2", "s2s1", "w0"];

/// Reduced words (generator indices 1, 2).
const WORDS: [&[usize]; 6] = [&[], &[1], &[2], &[1, 2], &[2, 1], &[1, 2, 1]];

/// Positive roots in fundamental-weight coordinates with their coroot pairings.
pub const POSITIVE_ROOTS: [[i64; 2]; 3] = [[2, -1], [-1, 2], [1, 1]];

type Mat = [[i64; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn simple(i: usize) -> Mat {
    if i == 1 {
        [[-1, 0], [1, 1]]
    } else {
        [[1, 1], [0, -1]]
    }
}

fn apply(m: &Mat, v: [i64; 2]) -> [i64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Index into [`WEYL`] of a name.
pub fn weyl_index(name: &str) -> Result<usize> {
    WEYL.iter().position(|w| *w == name).ok_or_else(|| Error::InvalidArgument(format!("unknown Weyl element {name:?}")))
}

/// Matrix of a Weyl element acting on fundamental-weight coordinates.
pub fn weyl_matrix(w: usize) -> Mat {
    WORDS[w].iter().fold([[1, 0], [0, 1]], |acc, &i| mat_mul(&acc, &simple(i)))
}

fn weyl_of_matrix(m: &Mat) -> usize {
    (0..6).find(|&w| &weyl_matrix(w) == m).expect("closed under products")
}

pub fn weyl_mul(a: usize, b: usize) -> usize {
    weyl_of_matrix(&mat_mul(&weyl_matrix(a), &weyl_matrix(b)))
}

pub fn weyl_inverse(a: usize) -> usize {
    (0..6).find(|&b| weyl_mul(a, b) == 0).expect("group")
}

pub fn weyl_length(w: usize) -> usize {
    WORDS[w].len()
}

/// Reflection in a positive root.
fn reflection(root: usize) -> usize {
    [1, 2, 5][root]
}

/// Bruhat order on `S₃`: `a <= b` iff some subword of a reduced word of `b` equals `a`.
pub fn bruhat_le(a: usize, b: usize) -> bool {
    let word = WORDS[b];
    (0u32..1 << word.len()).any(|mask| {
        let m = (0..word.len()).filter(|j| mask & (1 << j) != 0).fold([[1, 0], [0, 1]], |acc, j| mat_mul(&acc, &simple(word[j])));
        weyl_of_matrix(&m) == a
    })
}

fn root_form(v: [i64; 2]) -> LinearForm {
    LinearForm::from_ints(&v)
}

/// Coadjoint orbit of `λ = (a, b)` in fundamental-weight coordinates (both positive).
pub fn su3(a: i64, b: i64) -> Result<Space> {
    su3_weight(int(a), int(b))
}

pub fn su3_weight(a: Rational, b: Rational) -> Result<Space> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::InvalidParams("su3 needs a regular dominant weight (both coordinates > 0)".into()));
    }
    let lambda = [a.clone(), b.clone()];
    let image = |w: usize| {
        let m = weyl_matrix(w);
        let row = |r: usize| &lambda[0] * int(m[r][0]) + &lambda[1] * int(m[r][1]);
        LinearForm::new(vec![row(0), row(1)])
    };
    let fixed_points = (0..6)
        .map(|w| {
            let m = weyl_matrix(w);
            FixedPoint {
                id: WEYL[w].to_string(),
                moment: image(w),
                weights: POSITIVE_ROOTS.iter().map(|r| root_form(apply(&m, *r)).scale(&int(-1))).collect(),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for w in 0..6 {
        let m = weyl_matrix(w);
        for (k, root) in POSITIVE_ROOTS.iter().enumerate() {
            let v = weyl_mul(w, reflection(k));
            if w < v {
                let weight = root_form(apply(&m, *root)).scale(&int(-1));
                let (d, r) = (&image(v) - &image(w), &weight);
                // Orient each edge along its displacement.
                let weight = if d.ratio_to(r).is_some_and(|t| t.is_negative()) { weight.scale(&int(-1)) } else { weight };
                edges.push(Edge { from: WEYL[w].to_string(), to: WEYL[v].to_string(), weight });
            }
        }
    }
    let name = format!("su3({},{})", crate::algebra::fmt_rational(&a), crate::algebra::fmt_rational(&b));
    Ok(space(&name, 2, fixed_points, edges))
}

/// Weyl action on polynomials: `x_j` goes to column `j` of the matrix of `tau`.
pub fn weyl_act(tau: usize, p: &Polynomial) -> Polynomial {
    let m = weyl_matrix(tau);
    let images: Vec<LinearForm> = (0..2).map(|j| LinearForm::from_ints(&[m[0][j], m[1][j]])).collect();
    p.compose_linear(&images)
}

/// `β_σ|_{λ_τ}` from the positive-root subword formula.
pub fn schubert_restriction(sigma: usize, tau: usize) -> Polynomial {
    let word = WORDS[tau];
    let roots: Vec<LinearForm> = (0..word.len())
        .map(|j| {
            let prefix = word[..j].iter().fold([[1, 0], [0, 1]], |acc, &i| mat_mul(&acc, &simple(i)));
            root_form(apply(&prefix, POSITIVE_ROOTS[word[j] - 1]))
        })
        .collect();
    let mut total = Polynomial::zero(2);
    for mask in 0u32..1 << word.len() {
        let chosen: Vec<usize> = (0..word.len()).filter(|j| mask & (1 << j) != 0).collect();
        if chosen.len() != weyl_length(sigma) {
            continue;
        }
        let m = chosen.iter().fold([[1, 0], [0, 1]], |acc, &j| mat_mul(&acc, &simple(word[j])));
        if weyl_of_matrix(&m) != sigma {
            continue;
        }
        let term = chosen.iter().fold(Polynomial::one(2), |acc, &j| &acc * &Polynomial::from_linear(&roots[j]));
        total = &total + &term;
    }
    total
}

/// The Schubert class `β_σ` as restrictions ordered like [`WEYL`].
pub fn schubert_class(sigma: usize) -> EquivariantClass {
    EquivariantClass::new((0..6).map(|tau| schubert_restriction(sigma, tau)).collect())
}

/// `β_σ^{τ₀}` with `(β_σ^{τ₀})|_{λ_w} = τ₀·(β_{τ₀⁻¹σ}|_{λ_{τ₀⁻¹w}})`.
pub fn permuted_schubert(sigma: usize, tau0: usize) -> EquivariantClass {
    let inv = weyl_inverse(tau0);
    let s = weyl_mul(inv, sigma);
    EquivariantClass::new((0..6).map(|w| weyl_act(tau0, &schubert_restriction(s, weyl_mul(inv, w)))).collect())
}

/// A permuted Schubert class together with its labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutedSchubert {
    pub sigma: usize,
    pub tau0: usize,
    pub class: EquivariantClass,
}

/// Permuted Schubert classes on an SU(3) orbit whose support hull misses `p`.
pub fn tw_generators(space: &Space, p: &LinearForm) -> Result<Vec<PermutedSchubert>> {
    if space.fixed_points.len() != 6 || space.rank != 2 || WEYL.iter().zip(&space.fixed_points).any(|(w, f)| *w != f.id) {
        return Err(Error::InvalidArgument("tw_generators needs an su3 orbit".into()));
    }
    chambers::check_regular(space, p)?;
    let mut out = Vec::new();
    for sigma in 0..6 {
        for tau0 in 0..6 {
            let class = permuted_schubert(sigma, tau0);
            let support: Vec<LinearForm> = class.support().into_iter().map(|i| space.fixed_points[i].moment.clone()).collect();
            if !chambers::hull_contains(&support, p) {
                out.push(PermutedSchubert { sigma, tau0, class });
            }
        }
    }
    Ok(out)
}

/// Span in degree `d` of the products `g * b` with `g` among `gens` and `b` in the
/// canonical basis, as an RREF matrix in basis coordinates.
pub fn generated_ideal(coh: &Cohomology<'_>, gens: &[EquivariantClass], d: u32) -> Result<linalg::Matrix> {
    let target = coh.basis(d)?;
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if g.is_zero() || dg > d {
            continue;
        }
        for b in &coh.basis(d - dg)?.classes {
            let prod = g.mul(b);
            let coords = target
                .coordinates(&prod)
                .ok_or_else(|| Error::NotGkm("product of classes left the basis span".into()))?;
            rows.push(coords);
        }
    }
    Ok(linalg::row_space(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::kirwan::IdealEngine;

    fn antidominant() -> LinearForm {
        LinearForm::from_ints(&[-3, -2])
    }

    #[test]
    fn every_shipped_generator_validates() {
        for (name, params) in shipped() {
            let s = generate(&params).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(validate(&s).is_ok(), "{name}");
            assert_eq!(params.to_string().parse::<GeneratorParams>().unwrap(), params);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(su3(0, 1), Err(Error::InvalidParams(_))));
        assert!(matches!("su3(1)".parse::<GeneratorParams>(), Err(Error::InvalidParams(_))));
        assert!(matches!("klein".parse::<GeneratorParams>(), Err(Error::InvalidParams(_))));
        assert!(matches!(hirzebruch(-1), Err(Error::InvalidParams(_))));
        assert_eq!("hirzebruch(2)".parse::<GeneratorParams>().unwrap(), GeneratorParams::Hirzebruch(2));
    }

    #[test]
    fn su3_index_census() {
        let s = su3(1, 1).unwrap();
        let xi = LinearForm::from_ints(&[2, 3]);
        let mut idx: Vec<usize> = s.fixed_points.iter().map(|f| 2 * f.weights.iter().filter(|w| w.pair(&xi).is_negative()).count()).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 2, 2, 4, 4, 6]);
        assert_eq!(s.fixed_points[0].moment, LinearForm::from_ints(&[1, 1]));
    }

    #[test]
    fn weyl_group_basics() {
        for w in 0..6 {
            assert_eq!(weyl_mul(w, weyl_inverse(w)), 0);
            assert!(bruhat_le(0, w) && bruhat_le(w, 5));
        }
        assert_eq!(weyl_mul(1, 2), weyl_index("s1s2").unwrap());
        assert_eq!(weyl_mul(weyl_mul(1, 2), 1), 5);
        assert!(!bruhat_le(1, 2));
        assert!(bruhat_le(1, 3) && bruhat_le(1, 4));
    }

    #[test]
    fn schubert_table_satisfies_both_conditions() {
        let s = su3(2, 1).unwrap();
        let eta = antidominant();
        for sigma in 0..6 {
            for tau in 0..6 {
                let r = schubert_restriction(sigma, tau);
                if sigma == tau {
                    let neg = s.fixed_points[tau].weights.iter().filter(|w| w.pair(&eta).is_negative());
                    let e = neg.fold(Polynomial::one(2), |acc, w| &acc * &Polynomial::from_linear(w));
                    assert_eq!(r, e, "diagonal at {}", WEYL[tau]);
                } else if !bruhat_le(sigma, tau) {
                    assert!(r.is_zero(), "{} at {}", WEYL[sigma], WEYL[tau]);
                } else {
                    assert_eq!(r.homogeneous_degree(), Some(weyl_length(sigma) as u32));
                }
            }
            schubert_class(sigma).check_gkm(&s).unwrap();
        }
        assert_eq!(schubert_restriction(0, 3), Polynomial::one(2));
        assert!(schubert_restriction(5, 1).is_zero());
    }

    #[test]
    fn schubert_classes_are_morse_thom_classes() {
        let s = su3(2, 1).unwrap();
        let coh = Cohomology::new(&s).unwrap();
        for sigma in 0..6 {
            let mt = coh.morse_thom_class(WEYL[sigma], &antidominant()).unwrap();
            assert_eq!(mt, schubert_class(sigma), "{}", WEYL[sigma]);
        }
    }

    #[test]
    fn permuted_classes() {
        let s = su3(1, 1).unwrap();
        for sigma in 0..6 {
            assert_eq!(permuted_schubert(sigma, 0), schubert_class(sigma));
            for tau0 in 0..6 {
                permuted_schubert(sigma, tau0).check_gkm(&s).unwrap();
            }
        }
        // Anchored at w0 with everything below it vanishing.
        let c = permuted_schubert(5, 5);
        assert_eq!(c.restrictions[5], Polynomial::one(2));
        assert!((0..5).all(|w| !c.restrictions[w].is_zero()));
        assert_eq!(c.support().len(), 6);
        let top = permuted_schubert(0, 5);
        assert_eq!(top.support(), vec![0]);
    }

    #[test]
    fn tw_generators_span_the_kernel_in_one_chamber() {
        let s = su3(2, 1).unwrap();
        let p = LinearForm::new(vec![rat(1, 3), rat(1, 5)]);
        let gens: Vec<EquivariantClass> = tw_generators(&s, &p).unwrap().into_iter().map(|g| g.class).collect();
        assert!(!gens.is_empty());
        let engine = IdealEngine::new(&s, None, 0).unwrap();
        let fp = engine.fingerprint(&p).unwrap();
        for k in &fp.degrees {
            assert_eq!(generated_ideal(&engine.cohomology, &gens, k.degree).unwrap(), k.kernel, "degree {}", k.degree);
        }
    }

    #[test]
    fn tolman_glues_two_halves() {
        let s = tolman();
        assert!(validate(&s).is_ok());
        assert_eq!(s.fixed_points.len(), 6);
        let a = cp2xcp1_a();
        let b = cp2xcp1_b();
        let moments = |sp: &Space| sp.fixed_points.iter().map(|f| f.moment.clone()).collect::<Vec<_>>();
        for f in &s.fixed_points {
            let from_a = below_cut(f) && moments(&a).contains(&f.moment);
            let from_b = !below_cut(f) && moments(&b).contains(&f.moment);
            assert!(from_a || from_b, "{}", f.id);
        }
        assert_ne!(moments(&a), moments(&s));
        assert_ne!(moments(&b), moments(&s));
        assert_eq!(chambers::arrangement(&s).unwrap().num_chambers(), 6);
    }
}
