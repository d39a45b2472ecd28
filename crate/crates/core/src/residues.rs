//! Multivariate residues of the fixed-point integrand by iterated one-variable residues.
//!
//! Integrands are finite sums of [`ExpRationalTerm`]s: a polynomial over a
//! product of linear forms, times `exp(i λ(X))`. Taking the sum of all
//! residues in one variable keeps an integrand inside this class, so the
//! multivariate residue is a fold of [`res_plus`] over the coordinates of a
//! generic frame.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{int, linalg, LinearForm, Polynomial, Rational, Scalar};
use crate::error::{Error, Result};
use crate::kirwan::EquivariantClass;
use crate::model::Space;
use crate::rng;

/// Bounded number of reseeded frames tried before giving up.
pub const MAX_FRAME_RETRIES: u64 = 32;

/// `scalar * numerator / Π denominators^mult * exp(i * exponent(X))`.
///
/// Denominator forms are kept normalized (leading coefficient one), sorted and
/// merged, so proportional factors always share one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpRationalTerm {
    pub scalar: Scalar,
    pub numerator: Polynomial,
    pub denominators: Vec<(LinearForm, u32)>,
    pub exponent: LinearForm,
}

impl ExpRationalTerm {
    pub fn new(
        scalar: Scalar,
        numerator: Polynomial,
        denominators: impl IntoIterator<Item = (LinearForm, u32)>,
        exponent: LinearForm,
    ) -> Result<Self> {
        let mut scalar = scalar;
        let mut merged: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (f, m) in denominators {
            if m == 0 {
                continue;
            }
            let (s, g) = f.normalize().ok_or(Error::DegenerateConfiguration)?;
            scalar = &scalar * &Scalar::real(s.recip()).pow(m);
            *merged.entry(g).or_insert(0) += m;
        }
        Ok(ExpRationalTerm { scalar, numerator, denominators: merged.into_iter().collect(), exponent })
    }

    pub fn nvars(&self) -> usize {
        self.exponent.dim()
    }

    /// Rewrites the term in coordinates `Y` with `X = A Y`.
    fn change_coordinates(&self, a: &[Vec<i64>]) -> Result<Self> {
        let l = a.len();
        let pull = |f: &LinearForm| LinearForm::new((0..l).map(|k| (0..l).map(|j| &f.coeffs[j] * int(a[j][k])).sum()).collect());
        let images: Vec<LinearForm> = (0..l).map(|j| LinearForm::from_ints(&a[j])).collect();
        ExpRationalTerm::new(
            self.scalar.clone(),
            self.numerator.compose_linear(&images),
            self.denominators.iter().map(|(f, m)| (pull(f), *m)),
            pull(&self.exponent),
        )
    }
}

/// Merges terms sharing denominators and exponent; the scalar is folded into the numerator.
pub fn combine(terms: Vec<ExpRationalTerm>) -> Vec<ExpRationalTerm> {
    let mut acc: BTreeMap<(Vec<(LinearForm, u32)>, LinearForm), Polynomial> = BTreeMap::new();
    for t in terms {
        let num = t.numerator.scale(&t.scalar);
        if num.is_zero() {
            continue;
        }
        match acc.entry((t.denominators, t.exponent)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(num);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &num;
                *e.get_mut() = sum;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, n)| !n.is_zero())
        .map(|((denominators, exponent), numerator)| ExpRationalTerm { scalar: Scalar::one(), numerator, denominators, exponent })
        .collect()
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k.into()))
}

/// Signed binomial `C(-m, r) = (-1)^r C(m + r - 1, r)`.
fn neg_binomial(m: u32, r: u32) -> Rational {
    let mut c = Rational::one();
    for j in 0..r {
        c = c * int(i64::from(m + j)) / int(i64::from(j + 1));
    }
    if r % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Truncated power series in the local parameter `t` at a pole; each coefficient
/// is a sum of polynomials over powers of the extra denominators `D_q`.
type LocalSeries = Vec<BTreeMap<Vec<u32>, Polynomial>>;

/// Sum of residues in variable `active` of every term.
///
/// A term whose exponent has a positive coefficient `c` on `active`
/// contributes the sum of its residues at all poles; for `c < 0` it
/// contributes nothing, as does any term without poles in `active`.
pub fn res_plus(terms: &[ExpRationalTerm], active: usize) -> Result<Vec<ExpRationalTerm>> {
    let mut out = Vec::new();
    for term in terms {
        out.extend(res_plus_term(term, active)?);
    }
    Ok(combine(out))
}

fn res_plus_term(term: &ExpRationalTerm, active: usize) -> Result<Vec<ExpRationalTerm>> {
    let l = term.nvars();
    let (involving, constant): (Vec<_>, Vec<_>) = term.denominators.iter().cloned().partition(|(f, _)| !f.coeffs[active].is_zero());
    if involving.is_empty() || term.numerator.is_zero() {
        return Ok(Vec::new());
    }
    let c = term.exponent.coeffs[active].clone();
    if c.is_zero() {
        return Err(Error::ZeroExponentCoefficient);
    }
    if c.is_negative() {
        return Ok(Vec::new());
    }
    let e_active = LinearForm::unit(l, active);
    let mut out = Vec::new();
    for (pi, (pole_form, k)) in involving.iter().enumerate() {
        let a0 = pole_form.coeffs[active].clone();
        // Pole at x_active = b(x_rest).
        let b = (&pole_form.clone() - &e_active.scale(&a0)).scale(&(-a0.recip()));
        let exponent = &(&term.exponent - &e_active.scale(&c)) + &b.scale(&c);

        // Numerator around the pole, with x_active playing the local parameter t.
        let mut images: Vec<Polynomial> = (0..l).map(|j| Polynomial::var(l, j)).collect();
        images[active] = &Polynomial::from_linear(&b) + &Polynomial::var(l, active);
        let shifted = term.numerator.compose(&images);
        let mut ncoef = shifted.coefficients_in(active);
        let order = *k as usize; // need t^(k-1)
        ncoef.resize(order.max(ncoef.len()), Polynomial::zero(l));

        // exp(i c t) = Σ (i c)^j t^j / j!
        let ic = Scalar::new(Rational::zero(), c.clone());
        let exp_coef: Vec<Scalar> = (0..order).map(|j| ic.pow(j as u32).scale(&factorial(j as u32).recip())).collect();

        let others: Vec<(LinearForm, u32, Rational)> = involving
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != pi)
            .map(|(_, (f, m))| {
                let aq = f.coeffs[active].clone();
                let d = &(f - &e_active.scale(&aq)) + &b.scale(&aq);
                (d, *m, aq)
            })
            .collect();
        if others.iter().any(|(d, _, _)| d.is_zero()) {
            return Err(Error::DegenerateConfiguration);
        }

        let zero_exps = vec![0u32; others.len()];
        let mut series: LocalSeries = (0..order)
            .map(|j| {
                let mut p = Polynomial::zero(l);
                for i in 0..=j {
                    p = &p + &ncoef[i].scale(&exp_coef[j - i]);
                }
                let mut m = BTreeMap::new();
                if !p.is_zero() {
                    m.insert(zero_exps.clone(), p);
                }
                m
            })
            .collect();
        for (q, (_, m, aq)) in others.iter().enumerate() {
            // (D + a t)^-m = Σ C(-m, r) a^r t^r D^(-m-r)
            let mut next: LocalSeries = vec![BTreeMap::new(); order];
            for (j, slot) in next.iter_mut().enumerate() {
                for r in 0..=j {
                    let coef = neg_binomial(*m, r as u32) * num_traits::pow(aq.clone(), r);
                    for (exps, p) in &series[j - r] {
                        let mut e = exps.clone();
                        e[q] += r as u32;
                        let add = p.scale_rational(&coef);
                        let entry = slot.entry(e).or_insert_with(|| Polynomial::zero(l));
                        *entry = &*entry + &add;
                    }
                }
            }
            series = next;
        }

        let lead = Scalar::real(num_traits::pow(a0.clone(), order).recip());
        for (exps, p) in std::mem::take(&mut series[order - 1]) {
            if p.is_zero() {
                continue;
            }
            let dens = constant
                .iter()
                .cloned()
                .chain(others.iter().zip(&exps).map(|((d, m, _), r)| (d.clone(), m + r)));
            out.push(ExpRationalTerm::new(&term.scalar * &lead, p, dens, exponent.clone())?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Cones and frames

/// Polarized weights: every stored weight pairs positively with `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub xi: LinearForm,
    pub polarized_weights: Vec<LinearForm>,
}

impl Cone {
    /// True if `v` pairs positively with every polarized weight.
    pub fn contains_vector(&self, v: &LinearForm) -> bool {
        self.polarized_weights.iter().all(|w| w.pair(v).is_positive())
    }
}

/// Flips weights so that all pair positively with `xi`.
pub fn polarize(weights: &[LinearForm], xi: &LinearForm) -> Result<Cone> {
    let polarized_weights = weights
        .iter()
        .map(|w| {
            let s = w.pair(xi);
            if s.is_zero() {
                Err(Error::DegenerateXi(w.to_string()))
            } else if s.is_negative() {
                Ok(-w)
            } else {
                Ok(w.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cone { xi: xi.clone(), polarized_weights })
}

/// Coordinates `X = A Y` with `A` unimodular and its last column inside the cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateFrame {
    /// `change_of_basis[row][col]`; columns are the new basis vectors.
    pub change_of_basis: Vec<Vec<i64>>,
    pub delta: Rational,
}

impl CoordinateFrame {
    pub fn standard(l: usize) -> Self {
        CoordinateFrame {
            change_of_basis: (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect(),
            delta: Rational::one(),
        }
    }

    /// Builds a frame from an integer matrix whose last column lies in the cone.
    pub fn from_matrix(a: Vec<Vec<i64>>, cone: &Cone) -> Result<Self> {
        let l = a.len();
        let m: linalg::Matrix = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let d = linalg::det(&m);
        if d.abs() != Rational::one() {
            return Err(Error::InvalidArgument("frame matrix is not unimodular".into()));
        }
        let frame = CoordinateFrame { change_of_basis: a, delta: d.abs() };
        if l > 0 && !cone.contains_vector(&frame.last_column()) {
            return Err(Error::InvalidArgument("last frame vector is outside the cone".into()));
        }
        Ok(frame)
    }

    pub fn last_column(&self) -> LinearForm {
        LinearForm::from_ints(&self.change_of_basis.iter().map(|r| *r.last().unwrap()).collect::<Vec<_>>())
    }

    /// Seeded generic frame: a perturbed primitive vector of the cone, completed to
    /// a unimodular basis and sheared.
    pub fn generic(cone: &Cone, seed: u64, attempt: u64) -> Self {
        let l = cone.xi.dim();
        let mut r = rng::seeded(seed, 0xf2a3_0000 + attempt);
        let base = cone.xi.primitive().expect("xi is non-zero");
        let base: Vec<i64> = base.to_ints().expect("small xi");
        let mut scale = 2 + attempt as i64;
        let last = loop {
            let v: Vec<i64> = base.iter().map(|&b| scale * b + r.gen_range(-3..=3)).collect();
            let g = v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
            if g != 0 {
                let v: Vec<i64> = v.iter().map(|x| x / g).collect();
                if cone.contains_vector(&LinearForm::from_ints(&v)) {
                    break v;
                }
            }
            scale += 1;
        };
        let mut a = linalg::complete_to_unimodular(&last);
        for j in 0..l.saturating_sub(1) {
            for i in 0..l {
                if i == j {
                    continue;
                }
                let k: i64 = r.gen_range(-3..=3);
                for row in a.iter_mut() {
                    row[j] += k * row[i];
                }
            }
        }
        CoordinateFrame { change_of_basis: a, delta: Rational::one() }
    }
}

/// Multivariate residue: residues in `Y_l, ..., Y_1` of the integrand written in
/// frame coordinates, times the frame's `delta`.
pub fn res_lambda(terms: &[ExpRationalTerm], cone: &Cone, frame: &CoordinateFrame) -> Result<Scalar> {
    let l = cone.xi.dim();
    if l > 0 && !cone.contains_vector(&frame.last_column()) {
        return Err(Error::InvalidArgument("frame is not adapted to the cone".into()));
    }
    let mut current = terms.iter().map(|t| t.change_coordinates(&frame.change_of_basis)).collect::<Result<Vec<_>>>()?;
    current = combine(current);
    for active in (0..l).rev() {
        current = res_plus(&current, active)?;
    }
    let total: Scalar = current
        .iter()
        .filter(|t| t.denominators.is_empty())
        .map(|t| &t.scalar * &t.numerator.constant_term())
        .sum();
    Ok(total.scale(&frame.delta))
}

// ---------------------------------------------------------------------------
// Integration over reduced spaces

/// `Σ_F exp(i(Φ(F) - p)(X)) cls|_F / e_F` as a list of terms, one per fixed point.
pub fn localization_terms(space: &Space, cls: &EquivariantClass, p: &LinearForm) -> Result<Vec<Vec<ExpRationalTerm>>> {
    space
        .fixed_points
        .iter()
        .zip(&cls.restrictions)
        .map(|(f, num)| {
            if num.is_zero() {
                return Ok(Vec::new());
            }
            let t = ExpRationalTerm::new(Scalar::one(), num.clone(), f.weights.iter().map(|w| (w.clone(), 1)), &f.moment - p)?;
            Ok(vec![t])
        })
        .collect()
}

/// True if `lambda` lies in the span of fewer than `l` of the given directions.
fn lies_in_small_span(lambda: &LinearForm, dirs: &[LinearForm]) -> bool {
    let l = lambda.dim();
    if lambda.is_zero() {
        return true;
    }
    if l <= 1 {
        return false;
    }
    // Check all (l-1)-subsets.
    let mut idx: Vec<usize> = (0..l - 1).collect();
    if dirs.len() < l - 1 {
        let mut m: linalg::Matrix = dirs.iter().map(|d| d.coeffs.clone()).collect();
        m.push(lambda.coeffs.clone());
        return linalg::rank(&m) < l;
    }
    loop {
        let mut m: linalg::Matrix = idx.iter().map(|&i| dirs[i].coeffs.clone()).collect();
        let r0 = linalg::rank(&m);
        m.push(lambda.coeffs.clone());
        if linalg::rank(&m) == r0 {
            return true;
        }
        // next combination
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < dirs.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// True when some `Φ(F) - p` lies in the span of fewer than `rank` weights.
pub fn is_residue_degenerate(space: &Space, p: &LinearForm) -> bool {
    if space.rank == 0 {
        return false;
    }
    let dirs = space.weight_directions();
    space.fixed_points.iter().any(|f| lies_in_small_span(&(&f.moment - p), &dirs))
}

/// Nearby point of the same chamber at which the residue is generic.
pub fn generic_nearby_point(space: &Space, p: &LinearForm, seed: u64) -> Result<LinearForm> {
    if !is_residue_degenerate(space, p) {
        return Ok(p.clone());
    }
    let walls = crate::chambers::walls(space).ok();
    let mut r = rng::seeded(seed, 0x9e27_0000);
    for k in 0..64u32 {
        let rho = rng::small_vector(&mut r, space.rank, 97, 97);
        if rho.is_zero() {
            continue;
        }
        let eps = Rational::new(BigInt::one(), BigInt::from(1u64) << (8 + k.min(40)));
        let q = &rho.scale(&eps) + p;
        if is_residue_degenerate(space, &q) {
            continue;
        }
        if let Some(ws) = &walls {
            if ws.iter().any(|w| w.meets_segment(p, &q)) {
                continue;
            }
        }
        return Ok(q);
    }
    Err(Error::GenericityFailure(format!("no generic perturbation of {}", crate::model::fmt_point(p))))
}

/// Evaluates `∫_{M_p} κ_p(·)` for many classes at one regular value.
#[derive(Clone, Debug)]
pub struct Integrator<'a> {
    space: &'a Space,
    point: LinearForm,
    cone: Cone,
    seed: u64,
}

impl<'a> Integrator<'a> {
    /// Checks regularity of `p`, polarizes by `xi`, and moves `p` within its chamber
    /// if the residue is degenerate there.
    pub fn new(space: &'a Space, p: &LinearForm, xi: &LinearForm, seed: u64) -> Result<Self> {
        if p.dim() != space.rank || xi.dim() != space.rank {
            return Err(Error::InvalidArgument("point or test vector has the wrong dimension".into()));
        }
        crate::chambers::check_regular(space, p)?;
        let cone = polarize(&space.weight_directions(), xi)?;
        let point = generic_nearby_point(space, p, seed)?;
        Ok(Integrator { space, point, cone, seed })
    }

    /// The point actually used (equal to `p` unless it was residue-degenerate).
    pub fn point(&self) -> &LinearForm {
        &self.point
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// `∫_{M_p} κ_p(cls)`: the residue of the top-degree component. Other degrees
    /// integrate to zero.
    pub fn integrate(&self, cls: &EquivariantClass) -> Result<Scalar> {
        let top = self.space.reduced_dim() as u32;
        let part = cls.component(top);
        if part.is_zero() {
            return Ok(Scalar::zero());
        }
        self.exponential_integral(&part)
    }

    /// The full fixed-point residue sum, `∫_{M_p} κ_p(cls · e^{iω_p})` with the
    /// exponential kept. Agrees with [`Integrator::integrate`] in top degree only.
    pub fn exponential_integral(&self, cls: &EquivariantClass) -> Result<Scalar> {
        jk_sum(&localization_terms(self.space, cls, &self.point)?, &self.cone, self.seed)
    }
}

/// `∫_{M_p} κ_p(cls)` (normalization constant one) via the fixed-point residue formula.
pub fn jk_integral(space: &Space, cls: &EquivariantClass, p: &LinearForm, xi: &LinearForm, seed: u64) -> Result<Scalar> {
    Integrator::new(space, p, xi, seed)?.integrate(cls)
}

/// Residue of a sum of per-fixed-point integrands under reseeded generic frames.
pub fn jk_sum(per_point: &[Vec<ExpRationalTerm>], cone: &Cone, seed: u64) -> Result<Scalar> {
    let l = cone.xi.dim();
    for attempt in 0..MAX_FRAME_RETRIES {
        let frame = if l == 0 { CoordinateFrame::standard(0) } else { CoordinateFrame::generic(cone, seed, attempt) };
        let parts: Vec<Result<Scalar>> = per_point.par_iter().map(|terms| res_lambda(terms, cone, &frame)).collect();
        let mut total = Scalar::zero();
        let mut degenerate = false;
        for part in parts {
            match part {
                Ok(v) => total += &v,
                Err(Error::DegenerateConfiguration | Error::ZeroExponentCoefficient) => {
                    degenerate = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !degenerate {
            return Ok(total);
        }
    }
    Err(Error::GenericityFailure(format!("{MAX_FRAME_RETRIES} frames were degenerate")))
}
