//! Wall crossing for reduced-space integrals and the dendrite evaluation built
//! on it. This path shares no residue code with [`crate::residues`] beyond the
//! integrals it recurses into on lower-rank spaces, so it doubles as an oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::algebra::{linalg, LinearForm, Polynomial, Rational, Scalar};
use crate::chambers::{self, WallSegment};
use crate::error::{Error, Result};
use crate::kirwan::EquivariantClass;
use crate::model::{Edge, FixedPoint, Space};
use crate::residues;
use crate::rng;

/// Sign relating the crossing residues to differences of integrals:
/// `∫_{M_p} - ∫_{M_q} = GK_SIGN * Σ_N ∫_{N_red} κ(β₋₁)` when the circle weight is larger at `p`.
pub const GK_SIGN: i64 = -1;

const RAY_RETRIES: u64 = 32;

/// A component `N` of the fixed set of the circle `S` whose image lies in the crossed wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallStratum {
    /// Primitive integral generator of `S`.
    pub circle_direction: LinearForm,
    /// Integral vectors completing `circle_direction` to a unimodular basis.
    pub complement: Vec<LinearForm>,
    /// Point of the wall used as the origin of the induced moment map.
    pub base_point: LinearForm,
    pub fixed_ids: Vec<String>,
    pub fixed_indices: Vec<usize>,
    /// `N` with its `T/S` action, moments relative to `base_point`.
    pub induced_space: Space,
    /// Per fixed point: weights transverse to `N` and their circle weights.
    pub normal_weights: Vec<Vec<(LinearForm, Rational)>>,
}

/// Laurent expansion in the circle variable: `coeffs[r]` multiplies `x^(leading - r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTail {
    pub leading: i64,
    pub coeffs: Vec<Polynomial>,
}

impl LaurentTail {
    /// `1 / Π (m_i x + ν_i)` expanded at `x = ∞`, keeping `retain` terms.
    pub fn inverse_product(nvars: usize, normals: &[(Rational, Polynomial)], retain: usize) -> Result<Self> {
        let mut coeffs = vec![Polynomial::zero(nvars); retain];
        if retain == 0 {
            return Ok(LaurentTail { leading: -(normals.len() as i64), coeffs });
        }
        coeffs[0] = Polynomial::one(nvars);
        for (m, nu) in normals {
            if m.is_zero() {
                return Err(Error::ZeroSWeight(nu.to_string()));
            }
            // 1/(m x + ν) = Σ_r (-ν)^r / m^(r+1) x^(-1-r)
            let minv = m.recip();
            let mut factor = Vec::with_capacity(retain);
            let mut term = Polynomial::constant(nvars, Scalar::real(minv.clone()));
            let step = nu.scale_rational(&(-&minv));
            for _ in 0..retain {
                factor.push(term.clone());
                term = &term * &step;
            }
            let mut next = vec![Polynomial::zero(nvars); retain];
            for (i, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in factor.iter().enumerate().take(retain - i) {
                    next[i + j] = &next[i + j] + &(a * b);
                }
            }
            coeffs = next;
        }
        Ok(LaurentTail { leading: -(normals.len() as i64), coeffs })
    }
}

/// Coefficient of `x^-1` in `numerator / Π (m_i x + ν_i)`.
///
/// `numerator` has the residual variables first and `x` last; the `ν_i` and the
/// result live in the residual variables only.
pub fn gk_residue(numerator: &Polynomial, normals: &[(Rational, Polynomial)]) -> Result<Polynomial> {
    let l = numerator.nvars();
    let rest = l - 1;
    let parts = numerator.coefficients_in(l - 1);
    let c = normals.len() as i64;
    // x^j * x^(-c-r) = x^-1  <=>  r = j - c + 1
    let retain = (parts.len() as i64 - c + 1).max(0) as usize;
    let tail = LaurentTail::inverse_product(rest, normals, retain)?;
    if normals.iter().any(|(m, _)| m.is_zero()) {
        return Err(Error::ZeroSWeight("zero circle weight".into()));
    }
    let mut out = Polynomial::zero(rest);
    for (j, fj) in parts.iter().enumerate() {
        let r = j as i64 - c + 1;
        if r < 0 || fj.is_zero() {
            continue;
        }
        out = &out + &(&fj.with_nvars(rest) * &tail.coeffs[r as usize]);
    }
    Ok(out)
}

/// Basis matrix with the complement first and `s` last (`a[row][col]`).
fn adapted_basis(s: &LinearForm) -> Vec<Vec<i64>> {
    let v = s.to_ints().expect("integral circle direction");
    linalg::complete_to_unimodular(&v)
}

/// Components of the `S`-fixed set lying over the hyperplane `{s = s(base_point)}`.
pub fn strata(space: &Space, s: &LinearForm, base_point: &LinearForm) -> Result<Vec<WallStratum>> {
    let basis = adapted_basis(s);
    strata_with_basis(space, s, base_point, &basis)
}

fn strata_with_basis(space: &Space, s: &LinearForm, base_point: &LinearForm, basis: &[Vec<i64>]) -> Result<Vec<WallStratum>> {
    let l = space.rank;
    let level = s.pair(base_point);
    let on: Vec<usize> = (0..space.fixed_points.len()).filter(|&i| space.fixed_points[i].moment.pair(s) == level).collect();
    let complement: Vec<LinearForm> = (0..l - 1).map(|j| LinearForm::from_ints(&basis.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let project = |w: &LinearForm| LinearForm::new(complement.iter().map(|a| w.pair(a)).collect());

    // Connected components through edges with zero circle weight.
    let edges = space.edge_indices()?;
    let mut parent: BTreeMap<usize, usize> = on.iter().map(|&i| (i, i)).collect();
    fn root(parent: &mut BTreeMap<usize, usize>, i: usize) -> usize {
        let mut r = i;
        while parent[&r] != r {
            r = parent[&r];
        }
        r
    }
    for (i, j, w) in &edges {
        if parent.contains_key(i) && parent.contains_key(j) && w.pair(s).is_zero() {
            let (a, b) = (root(&mut parent, *i), root(&mut parent, *j));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &on {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let mut out = Vec::new();
    for members in groups.into_values() {
        let member_set: BTreeSet<usize> = members.iter().copied().collect();
        let mut fixed_points = Vec::new();
        let mut normal_weights = Vec::new();
        for &i in &members {
            let f = &space.fixed_points[i];
            let (tangent, normal): (Vec<&LinearForm>, Vec<&LinearForm>) = f.weights.iter().partition(|w| w.pair(s).is_zero());
            fixed_points.push(FixedPoint {
                id: f.id.clone(),
                moment: project(&(&f.moment - base_point)),
                weights: tangent.into_iter().map(&project).collect(),
            });
            normal_weights.push(normal.into_iter().map(|w| (w.clone(), w.pair(s))).collect());
        }
        let induced_edges = edges
            .iter()
            .filter(|(i, j, w)| member_set.contains(i) && member_set.contains(j) && w.pair(s).is_zero())
            .map(|(i, j, w)| Edge { from: space.fixed_points[*i].id.clone(), to: space.fixed_points[*j].id.clone(), weight: project(w) })
            .collect();
        let induced_space = Space {
            name: format!("{}/S", space.name),
            rank: l - 1,
            fixed_points,
            edges: induced_edges,
            walls: None,
            classes: BTreeMap::new(),
        };
        out.push(WallStratum {
            circle_direction: s.clone(),
            complement: complement.clone(),
            base_point: base_point.clone(),
            fixed_ids: members.iter().map(|&i| space.fixed_points[i].id.clone()).collect(),
            fixed_indices: members,
            induced_space,
            normal_weights,
        });
    }
    Ok(out)
}

impl WallStratum {
    /// `β₋₁` of `cls|_N / e_N` as a class on the induced space.
    pub fn residue_class(&self, cls: &EquivariantClass) -> Result<EquivariantClass> {
        let l = self.circle_direction.dim();
        // X_i = Σ_j a_j[i] Y_j + s[i] x
        let images: Vec<LinearForm> = (0..l)
            .map(|i| {
                let mut row: Vec<Rational> = self.complement.iter().map(|a| a.coeffs[i].clone()).collect();
                row.push(self.circle_direction.coeffs[i].clone());
                LinearForm::new(row)
            })
            .collect();
        let mut restrictions = Vec::with_capacity(self.fixed_indices.len());
        for (k, &i) in self.fixed_indices.iter().enumerate() {
            let numerator = cls.restrictions[i].compose_linear(&images);
            let normals: Vec<(Rational, Polynomial)> = self.normal_weights[k]
                .iter()
                .map(|(w, m)| {
                    let nu = LinearForm::new(self.complement.iter().map(|a| w.pair(a)).collect());
                    (m.clone(), Polynomial::from_linear(&nu))
                })
                .collect();
            restrictions.push(gk_residue(&numerator, &normals)?);
        }
        Ok(EquivariantClass::new(restrictions))
    }
}

/// Result of crossing one wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub wall: WallSegment,
    pub circle_direction: LinearForm,
    /// `GK_SIGN * Σ_N ∫_{N_red} κ(β₋₁)`.
    pub difference: Scalar,
    /// `∫_{M_p} - ∫_{M_q}` computed directly.
    pub direct: Scalar,
    pub terms: Vec<(Vec<String>, Scalar)>,
}

/// Integral over the reduced space of `N` at the crossing point.
fn stratum_integral(stratum: &WallStratum, cls: &EquivariantClass, seed: u64, use_dendrite: bool) -> Result<Scalar> {
    let beta = stratum.residue_class(cls)?;
    let induced = &stratum.induced_space;
    let origin = LinearForm::zero(induced.rank);
    if use_dendrite {
        dendrite_integral(induced, &beta, &origin, seed)
    } else {
        let xi = if induced.rank == 0 { LinearForm::zero(0) } else { induced.generic_vector(seed) };
        residues::jk_integral(induced, &beta, &origin, &xi, seed)
    }
}

fn circle_for(wall: &WallSegment, rank: usize, p: &LinearForm, x: &LinearForm) -> LinearForm {
    let s = if rank == 1 {
        LinearForm::from_ints(&[1])
    } else {
        let d = wall.direction();
        LinearForm::new(vec![-d.coeffs[1].clone(), d.coeffs[0].clone()]).primitive().expect("non-degenerate wall")
    };
    if s.pair(&(p - x)).is_negative() {
        -s
    } else {
        s
    }
}

/// The single wall crossed by `p -> q` and the crossing point.
fn single_crossing(space: &Space, p: &LinearForm, q: &LinearForm) -> Result<(WallSegment, LinearForm)> {
    let arr = chambers::arrangement(space)?;
    let cs = chambers::crossings(&arr.walls, p, q);
    let Some((t, w)) = cs.first().cloned() else { return Err(Error::NoWall) };
    if cs.len() > 1 {
        return Err(Error::MultipleWalls);
    }
    Ok((arr.walls[w].clone(), p + &(q - p).scale(&t)))
}

/// Crosses the single wall between `p` and `q`.
pub fn cross_wall(space: &Space, p: &LinearForm, q: &LinearForm, cls: &EquivariantClass, xi: &LinearForm, seed: u64) -> Result<WallCrossing> {
    chambers::check_regular(space, p)?;
    chambers::check_regular(space, q)?;
    let (wall, x) = single_crossing(space, p, q)?;
    let s = circle_for(&wall, space.rank, p, &x);
    let mut terms = Vec::new();
    let mut total = Scalar::zero();
    for stratum in strata(space, &s, &x)? {
        let v = stratum_integral(&stratum, cls, seed, false)?;
        total += &v;
        terms.push((stratum.fixed_ids.clone(), v));
    }
    let direct = &residues::jk_integral(space, cls, p, xi, seed)? - &residues::jk_integral(space, cls, q, xi, seed)?;
    Ok(WallCrossing { wall, circle_direction: s, difference: total.scale(&Rational::from_integer(GK_SIGN.into())), direct, terms })
}

/// Walls of a space for the dendrite walk; rank-one walls are the fixed-point values.
fn dendrite_walls(space: &Space) -> Result<Vec<WallSegment>> {
    if space.rank == 1 {
        let vals: BTreeSet<LinearForm> = space.fixed_points.iter().map(|f| f.moment.clone()).collect();
        return Ok(vals.into_iter().map(|v| WallSegment { endpoints: [v.clone(), v] }).collect());
    }
    chambers::walls(space)
}

/// `∫_{M_p} κ_p(cls)` for a top-degree class by walking a ray out of the polytope
/// and summing wall-crossing terms, recursively down to rank zero.
pub fn dendrite_integral(space: &Space, cls: &EquivariantClass, p: &LinearForm, seed: u64) -> Result<Scalar> {
    if space.rank == 0 {
        return Ok(cls.restrictions.iter().map(|r| r.constant_term()).sum());
    }
    if space.rank > 2 {
        return Err(Error::UnsupportedRank(space.rank));
    }
    if space.fixed_points.iter().any(|f| f.moment == *p) {
        return Err(Error::SingularValue(crate::model::fmt_point(p)));
    }
    let walls = dendrite_walls(space)?;
    if walls.iter().any(|w| w.contains(p)) {
        return Err(Error::SingularValue(crate::model::fmt_point(p)));
    }
    let reach = space
        .fixed_points
        .iter()
        .map(|f| (&f.moment - p).max_abs())
        .max()
        .unwrap_or_else(Rational::zero)
        * Rational::from_integer(4.into())
        + Rational::from_integer(1.into());
    let mut r = rng::seeded(seed, 0xde4d_0000);
    'attempt: for _ in 0..RAY_RETRIES {
        let dir: Vec<i64> = if space.rank == 1 {
            vec![if r.gen_bool(0.5) { 1 } else { -1 }]
        } else {
            rng::small_int_vector(&mut r, space.rank, 40)
        };
        let dir = LinearForm::from_ints(&dir);
        if dir.is_zero() {
            continue;
        }
        let far = p + &dir.scale(&reach);
        let cs = chambers::crossings(&walls, p, &far);
        for pair in cs.windows(2) {
            if pair[0].0 == pair[1].0 {
                continue 'attempt;
            }
        }
        let mut total = Scalar::zero();
        for (t, w) in &cs {
            let x = p + &(&far - p).scale(t);
            let wall = &walls[*w];
            if space.rank == 2 && wall.endpoints.contains(&x) {
                continue 'attempt;
            }
            if space.fixed_points.iter().any(|f| f.moment == x) && space.rank == 2 {
                continue 'attempt;
            }
            let s = circle_for(wall, space.rank, p, &x);
            for stratum in strata(space, &s, &x)? {
                match stratum_integral(&stratum, cls, seed, true) {
                    Ok(v) => total += &v,
                    Err(Error::SingularValue(_)) | Err(Error::RayDegeneracy(_)) => continue 'attempt,
                    Err(e) => return Err(e),
                }
            }
        }
        return Ok(total.scale(&Rational::from_integer(GK_SIGN.into())));
    }
    Err(Error::RayDegeneracy(format!("{RAY_RETRIES} rays met a codimension-2 stratum")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, rat};
    use crate::generators;

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn laurent_examples() {
        // variables: Y = x1, X = x2
        let one = Polynomial::one(2);
        let normals = vec![(rat(1, 1), Polynomial::zero(1)), (rat(1, 1), poly("x1", 1))];
        assert!(gk_residue(&one, &normals).unwrap().is_zero());
        let num = poly("x2 + 2*x1", 2);
        let normals = vec![(rat(1, 1), Polynomial::zero(1)), (rat(1, 1), Polynomial::zero(1))];
        assert_eq!(gk_residue(&num, &normals).unwrap(), Polynomial::one(1));
        assert!(gk_residue(&poly("x1^2 + x2", 2), &[]).unwrap().is_zero());
        assert!(matches!(gk_residue(&one, &[(rat(0, 1), Polynomial::zero(1))]), Err(Error::ZeroSWeight(_))));
    }

    #[test]
    fn inverse_product_series() {
        let t = LaurentTail::inverse_product(1, &[(rat(2, 1), poly("x1", 1))], 3).unwrap();
        assert_eq!(t.leading, -1);
        assert_eq!(t.coeffs[0].to_string(), "1/2");
        assert_eq!(t.coeffs[1].to_string(), "-1/4*x1");
        assert_eq!(t.coeffs[2].to_string(), "1/8*x1^2");
    }

    #[test]
    fn sphere_dendrite_matches_residue() {
        let s = generators::sphere();
        let p = LinearForm::new(vec![rat(1, 2)]);
        let one = EquivariantClass::one(&s);
        let jk = residues::jk_integral(&s, &one, &p, &LinearForm::from_ints(&[1]), 0).unwrap();
        for seed in 0..4 {
            assert_eq!(dendrite_integral(&s, &one, &p, seed).unwrap(), jk);
        }
    }

    #[test]
    fn no_wall_between_points_of_one_chamber() {
        let s = generators::sphere();
        let one = EquivariantClass::one(&s);
        let r = cross_wall(&s, &LinearForm::new(vec![rat(1, 4)]), &LinearForm::new(vec![rat(3, 4)]), &one, &LinearForm::from_ints(&[1]), 0);
        assert_eq!(r, Err(Error::NoWall));
    }

    #[test]
    fn complement_choice_does_not_change_residues() {
        let s = generators::su3(2, 1).unwrap();
        let cls = crate::kirwan::cohomology_basis(&s, 2).unwrap().pop().unwrap();
        let dir = LinearForm::from_ints(&[1, 1]);
        let base = s.fixed_points[0].moment.clone();
        let basis = adapted_basis(&dir);
        let reference: Vec<_> = strata_with_basis(&s, &dir, &base, &basis).unwrap().iter().map(|st| st.residue_class(&cls).unwrap()).collect();
        for k in [1i64, -2, 3] {
            let sheared: Vec<Vec<i64>> = basis.iter().map(|r| vec![r[0] + k * r[1], r[1]]).collect();
            let other: Vec<_> = strata_with_basis(&s, &dir, &base, &sheared).unwrap().iter().map(|st| st.residue_class(&cls).unwrap()).collect();
            assert_eq!(other, reference);
        }
    }
}
