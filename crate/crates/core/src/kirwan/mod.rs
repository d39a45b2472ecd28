//! Equivariant classes as restriction tuples, degreewise cohomology bases,
//! Euler and Morse–Thom classes, and the Kirwan kernel.

mod distinguish;
mod ideal;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::algebra::{linalg, monomial_count, monomials_of_degree, LinearForm, Monomial, Polynomial, Rational, Scalar};
use crate::error::{Error, Result};
use crate::model::{validate, Space};

pub use distinguish::{distinguish, Distinction};
pub use ideal::{
    count_chambers_by_ideals, fingerprint, in_ideal, pairing_matrix, ChamberCount, ChamberSample, DegreeKernel, IdealEngine,
    IdealFingerprint,
};

/// An equivariant class, stored as its restrictions to the fixed points (in
/// fixed-point order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    pub restrictions: Vec<Polynomial>,
}

impl EquivariantClass {
    pub fn new(restrictions: Vec<Polynomial>) -> Self {
        EquivariantClass { restrictions }
    }

    pub fn zero(space: &Space) -> Self {
        Self::constant(space, Polynomial::zero(space.rank))
    }

    pub fn one(space: &Space) -> Self {
        Self::constant(space, Polynomial::one(space.rank))
    }

    /// Image of a polynomial under `H_T(pt) -> H_T(M)`.
    pub fn constant(space: &Space, p: Polynomial) -> Self {
        EquivariantClass { restrictions: vec![p; space.fixed_points.len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.restrictions.iter().all(Polynomial::is_zero)
    }

    /// Component of cohomological degree `d` (zero for odd `d`).
    pub fn component(&self, d: u32) -> EquivariantClass {
        let nvars = self.restrictions.first().map_or(0, Polynomial::nvars);
        EquivariantClass {
            restrictions: self
                .restrictions
                .iter()
                .map(|r| if d % 2 == 0 { r.homogeneous_part(d / 2) } else { Polynomial::zero(nvars) })
                .collect(),
        }
    }

    /// Cohomological degree (twice the polynomial degree), if homogeneous and non-zero.
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for r in &self.restrictions {
            if r.is_zero() {
                continue;
            }
            let d = r.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg.map(|d| 2 * d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn mul(&self, other: &EquivariantClass) -> EquivariantClass {
        EquivariantClass { restrictions: self.restrictions.iter().zip(&other.restrictions).map(|(a, b)| a * b).collect() }
    }

    pub fn add(&self, other: &EquivariantClass) -> EquivariantClass {
        EquivariantClass { restrictions: self.restrictions.iter().zip(&other.restrictions).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> EquivariantClass {
        EquivariantClass { restrictions: self.restrictions.iter().map(|a| a.scale(c)).collect() }
    }

    /// Checks every edge congruence `f(from) ≡ f(to) mod weight`.
    pub fn check_gkm(&self, space: &Space) -> Result<()> {
        for (i, j, w) in space.edge_indices()? {
            let diff = &self.restrictions[i] - &self.restrictions[j];
            if !diff.divisible_by_linear(w) {
                return Err(Error::NotGkm(format!(
                    "class violates the congruence on edge {} -> {}",
                    space.fixed_points[i].id, space.fixed_points[j].id
                )));
            }
        }
        Ok(())
    }

    /// Indices of fixed points where the class does not vanish.
    pub fn support(&self) -> Vec<usize> {
        (0..self.restrictions.len()).filter(|&i| !self.restrictions[i].is_zero()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerMode {
    Full,
    /// Only the weights pairing negatively with the vector.
    Negative(LinearForm),
}

/// Product of the weights at a fixed point (all of them, or the negative ones).
pub fn euler_class(space: &Space, id: &str, mode: &EulerMode) -> Result<Polynomial> {
    let f = space.fixed_point(id)?;
    let mut e = Polynomial::one(space.rank);
    for w in &f.weights {
        let take = match mode {
            EulerMode::Full => true,
            EulerMode::Negative(xi) => {
                let s = w.pair(xi);
                if s.is_zero() {
                    return Err(Error::DegenerateXi(w.to_string()));
                }
                s.is_negative()
            }
        };
        if take {
            e = &e * &Polynomial::from_linear(w);
        }
    }
    Ok(e)
}

/// `dim H_T^{2k}` from a Morse index census (entry `c` counts fixed points with `c` negative weights).
pub fn morse_dimension(census: &[usize], rank: usize, k: u32) -> usize {
    census
        .iter()
        .enumerate()
        .filter(|(c, _)| *c as u32 <= k)
        .map(|(c, &count)| count * monomial_count(rank, k - c as u32))
        .sum()
}

/// Linear congruence conditions on degree-`k` restriction tuples.
/// Columns are indexed `fixed_point * monomials.len() + monomial`.
fn congruence_rows(space: &Space, k: u32) -> Result<(Vec<Monomial>, linalg::Matrix)> {
    let l = space.rank;
    let mons = monomials_of_degree(l, k);
    let nm = mons.len();
    let ncols = nm * space.fixed_points.len();
    let mut rows = Vec::new();
    for (i, j, w) in space.edge_indices()? {
        let s = w.leading_index().expect("validated weights are non-zero");
        let mut rest = w.scale(&(-w.coeffs[s].recip()));
        rest.coeffs[s] = Rational::zero();
        let sub = Polynomial::from_linear(&rest);
        let mut by_image: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
        for (mi, m) in mons.iter().enumerate() {
            let p = Polynomial::from_terms(l, [(m.clone(), Scalar::one())]).substitute(s, &sub);
            for (mu, c) in p.terms() {
                by_image.entry(mu.clone()).or_default().push((mi, c.re.clone()));
            }
        }
        for entries in by_image.into_values() {
            let mut row = vec![Rational::zero(); ncols];
            for (mi, c) in entries {
                row[i * nm + mi] += &c;
                row[j * nm + mi] -= &c;
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok((mons, rows))
}

/// Canonical basis of `H_T^d(M)` in restriction coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    /// Reduced row-echelon coordinate rows, one per basis class.
    pub rows: linalg::Matrix,
    pub pivots: Vec<usize>,
    pub classes: Vec<EquivariantClass>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Flat restriction coordinates of a class of this degree.
    pub fn flat_coordinates(&self, cls: &EquivariantClass) -> Vec<Rational> {
        cls.restrictions.iter().flat_map(|r| r.coords(&self.monomials).into_iter().map(|c| c.re)).collect()
    }

    /// Coordinates of `cls` in this basis; `None` if it is not in the span.
    pub fn coordinates(&self, cls: &EquivariantClass) -> Option<Vec<Rational>> {
        let flat = self.flat_coordinates(cls);
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&p| flat[p].clone()).collect();
        let mut check = vec![Rational::zero(); flat.len()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in check.iter_mut().zip(row) {
                *x += c * r;
            }
        }
        (check == flat).then_some(coeffs)
    }

    /// `Σ c_a A_a`.
    pub fn combination(&self, coeffs: &[Rational], space: &Space) -> EquivariantClass {
        let nm = self.monomials.len();
        let mut flat = vec![Rational::zero(); nm * space.fixed_points.len()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in flat.iter_mut().zip(row) {
                *x += c * r;
            }
        }
        class_from_flat(space, &self.monomials, &flat)
    }
}

fn class_from_flat(space: &Space, monomials: &[Monomial], flat: &[Rational]) -> EquivariantClass {
    let nm = monomials.len();
    EquivariantClass::new(
        (0..space.fixed_points.len()).map(|i| Polynomial::from_coords(space.rank, monomials, &flat[i * nm..(i + 1) * nm])).collect(),
    )
}

/// Cached degreewise bases of `H_T^*(M)` for a validated GKM space.
#[derive(Debug)]
pub struct Cohomology<'a> {
    space: &'a Space,
    census: Vec<usize>,
    bases: Mutex<BTreeMap<u32, Arc<DegreeBasis>>>,
}

impl<'a> Cohomology<'a> {
    pub fn new(space: &'a Space) -> Result<Self> {
        validate(space).into_result()?;
        let census = space.index_census(&space.generic_vector(0));
        Ok(Cohomology { space, census, bases: Mutex::new(BTreeMap::new()) })
    }

    pub fn space(&self) -> &'a Space {
        self.space
    }

    /// Morse index census: entry `c` counts fixed points with `c` negative weights.
    pub fn census(&self) -> &[usize] {
        &self.census
    }

    pub fn dimension(&self, d: u32) -> usize {
        if d % 2 == 1 {
            return 0;
        }
        morse_dimension(&self.census, self.space.rank, d / 2)
    }

    pub fn basis(&self, d: u32) -> Result<Arc<DegreeBasis>> {
        if let Some(b) = self.bases.lock().expect("basis cache").get(&d) {
            return Ok(b.clone());
        }
        let b = Arc::new(self.compute_basis(d)?);
        self.bases.lock().expect("basis cache").insert(d, b.clone());
        Ok(b)
    }

    fn compute_basis(&self, d: u32) -> Result<DegreeBasis> {
        let space = self.space;
        if d % 2 == 1 {
            return Err(Error::InvalidArgument(format!("odd degree {d}")));
        }
        let k = d / 2;
        let (monomials, rows) = congruence_rows(space, k)?;
        let ncols = monomials.len() * space.fixed_points.len();
        let basis_rows = linalg::nullspace(&rows, ncols);
        let expected = self.dimension(d);
        if basis_rows.len() != expected {
            return Err(Error::NotGkm(format!(
                "degree {d}: congruences give dimension {}, the Morse count is {expected}",
                basis_rows.len()
            )));
        }
        let pivots: Vec<usize> = basis_rows.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("non-zero row")).collect();
        let classes = basis_rows.iter().map(|r| class_from_flat(space, &monomials, r)).collect();
        Ok(DegreeBasis { degree: d, monomials, rows: basis_rows, pivots, classes })
    }

    /// Canonical Morse–Thom class of fixed point `id` for the generic vector `eta`.
    ///
    /// It restricts to the negative Euler class at `id`, vanishes at every other
    /// fixed point whose `eta` level is at most that of `id`, and then vanishes at as
    /// many higher fixed points as possible taken in increasing `eta` order.
    pub fn morse_thom_class(&self, id: &str, eta: &LinearForm) -> Result<EquivariantClass> {
        let space = self.space;
        let fi = space.index_of(id)?;
        for f in &space.fixed_points {
            for w in &f.weights {
                if w.pair(eta).is_zero() {
                    return Err(Error::DegenerateXi(w.to_string()));
                }
            }
        }
        let target = euler_class(space, id, &EulerMode::Negative(eta.clone()))?;
        let k = target.degree().unwrap_or(0);
        let (monomials, congruences) = congruence_rows(space, k)?;
        let nm = monomials.len();
        let ncols = nm * space.fixed_points.len();
        let unit = |c: usize| {
            let mut r = vec![Rational::zero(); ncols];
            r[c] = Rational::from_integer(1.into());
            r
        };
        let mut a = congruences;
        let mut b = vec![Rational::zero(); a.len()];
        for (mi, c) in target.coords(&monomials).into_iter().enumerate() {
            a.push(unit(fi * nm + mi));
            b.push(c.re);
        }
        let level = |g: usize| space.fixed_points[g].moment.pair(eta);
        let lf = level(fi);
        let mut higher = Vec::new();
        for g in 0..space.fixed_points.len() {
            if g == fi {
                continue;
            }
            if level(g) <= lf {
                for mi in 0..nm {
                    a.push(unit(g * nm + mi));
                    b.push(Rational::zero());
                }
            } else {
                higher.push(g);
            }
        }
        if linalg::solve(&a, &b, ncols).is_none() {
            return Err(Error::NoSolution(format!("no Morse-Thom class at {id}")));
        }
        higher.sort_by(|&x, &y| level(x).cmp(&level(y)).then(x.cmp(&y)));
        for g in higher {
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            for mi in 0..nm {
                a2.push(unit(g * nm + mi));
                b2.push(Rational::zero());
            }
            if linalg::solve(&a2, &b2, ncols).is_some() {
                a = a2;
                b = b2;
            }
        }
        let mut x = linalg::solve(&a, &b, ncols).expect("feasible by construction");
        let homogeneous = linalg::nullspace(&a, ncols);
        linalg::reduce_against(&mut x, &homogeneous);
        Ok(class_from_flat(space, &monomials, &x))
    }
}

/// Equivariant extension of the reduced symplectic form at `p`: restricts to
/// `(Φ(F) - p)(X)` at `F`.
pub fn moment_class(space: &Space, p: &LinearForm) -> EquivariantClass {
    EquivariantClass::new(space.fixed_points.iter().map(|f| Polynomial::from_linear(&(&f.moment - p))).collect())
}

/// Canonical basis of `H_T^d(M)`.
pub fn cohomology_basis(space: &Space, d: u32) -> Result<Vec<EquivariantClass>> {
    Ok(Cohomology::new(space)?.basis(d)?.classes.clone())
}

/// Canonical Morse–Thom class (see [`Cohomology::morse_thom_class`]).
pub fn morse_thom_class(space: &Space, id: &str, eta: &LinearForm) -> Result<EquivariantClass> {
    Cohomology::new(space)?.morse_thom_class(id, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn euler_classes() {
        let s = generators::cp2();
        assert_eq!(euler_class(&s, "A", &EulerMode::Full).unwrap().to_string(), "x1*x2");
        assert_eq!(euler_class(&s, "A", &EulerMode::Negative(LinearForm::from_ints(&[1, 1]))).unwrap().to_string(), "1");
        assert_eq!(euler_class(&s, "B", &EulerMode::Negative(LinearForm::from_ints(&[1, 2]))).unwrap().to_string(), "-x1");
        assert!(matches!(
            euler_class(&s, "A", &EulerMode::Negative(LinearForm::from_ints(&[1, 0]))),
            Err(Error::DegenerateXi(_))
        ));
    }

    #[test]
    fn degree_zero_is_the_unit() {
        for s in [generators::sphere(), generators::cp2(), generators::su3(1, 1).unwrap()] {
            let b = cohomology_basis(&s, 0).unwrap();
            assert_eq!(b, vec![EquivariantClass::one(&s)]);
        }
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(cohomology_basis(&generators::sphere(), 2).unwrap().len(), 2);
        assert_eq!(cohomology_basis(&generators::cp2(), 2).unwrap().len(), 3);
        assert_eq!(cohomology_basis(&generators::su3(1, 1).unwrap(), 2).unwrap().len(), 4);
        let su3 = generators::su3(2, 1).unwrap();
        for d in [0, 2, 4, 6] {
            for c in cohomology_basis(&su3, d).unwrap() {
                c.check_gkm(&su3).unwrap();
                assert_eq!(c.degree(), Some(d).filter(|_| !c.is_zero()));
            }
        }
    }

    #[test]
    fn sphere_morse_thom_at_the_top() {
        let s = generators::sphere();
        let a = morse_thom_class(&s, "N", &LinearForm::from_ints(&[1])).unwrap();
        assert_eq!(a.restrictions[0].to_string(), "0");
        assert_eq!(a.restrictions[1].to_string(), "-x1");
        let b = morse_thom_class(&s, "S", &LinearForm::from_ints(&[1])).unwrap();
        assert_eq!(b, EquivariantClass::one(&s));
    }

    #[test]
    fn coordinates_round_trip() {
        let s = generators::su3(2, 1).unwrap();
        let coh = Cohomology::new(&s).unwrap();
        let b = coh.basis(4).unwrap();
        let coeffs: Vec<Rational> = (0..b.len()).map(|i| Rational::from_integer((i as i64 * 3 - 2).into())).collect();
        let c = b.combination(&coeffs, &s);
        assert_eq!(b.coordinates(&c), Some(coeffs));
        let bad = EquivariantClass::constant(&s, Polynomial::var(2, 0).pow(2));
        assert!(b.coordinates(&bad).is_some());
    }
}
