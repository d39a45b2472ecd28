//! A class in `I_q` but not in `I_p` for regular values in different chambers.
//!
//! Cross the first wall met on the way from `p` to `q`, take a Morse–Thom class
//! anchored on that wall (it vanishes on the far side), and multiply it by a
//! product of weights that leaves a single non-zero residue at `p`.

use num_traits::{Signed, Zero};

use super::{Cohomology, EquivariantClass, IdealEngine};
use crate::algebra::{linalg, LinearForm, Polynomial, Rational, Scalar};
use crate::chambers::{self, ChamberArrangement, WallSegment};
use crate::error::{Error, Result};
use crate::model::Space;
use crate::rng;

/// Output of [`distinguish`] together with the verified certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinction {
    /// `beta * alpha`: pairs to zero at `q`, not at `p`.
    pub gamma: EquivariantClass,
    pub alpha: EquivariantClass,
    pub beta: EquivariantClass,
    pub wall: WallSegment,
    /// Integral normal to the wall with `p` on its positive side.
    pub normal: LinearForm,
    /// Fixed point anchoring `alpha`.
    pub anchor: String,
    pub eta: LinearForm,
    pub polarization: LinearForm,
    pub value_p: Scalar,
    pub value_q: Scalar,
}

const RETRIES: u64 = 32;

/// Builds and certifies a class separating `I_p` from `I_q`.
pub fn distinguish(space: &Space, p: &LinearForm, q: &LinearForm, seed: u64) -> Result<Distinction> {
    let arr = chambers::arrangement(space)?;
    let cp = arr.locate(p)?;
    let cq = arr.locate(q)?;
    if cp == cq {
        return Err(Error::SameChamber);
    }
    let coh = Cohomology::new(space)?;
    let mut r = rng::seeded(seed, 0xd157_0000);
    let mut target = q.clone();
    for attempt in 0..RETRIES {
        if attempt > 0 {
            // Nudge q inside its chamber to avoid crossing at a wall intersection.
            let scale = Rational::new(1.into(), (1i64 << 10).into());
            let cand = &target + &rng::small_vector(&mut r, space.rank, 8, 1).scale(&scale);
            if arr.locate(&cand).ok() != Some(cq) {
                continue;
            }
            target = cand;
        }
        let Some((wall, x)) = first_wall(&arr, p, &target) else { continue };
        match construct(space, &coh, p, q, &wall, &x, seed) {
            Ok(d) => return Ok(d),
            Err(Error::ConstructionFailure(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ConstructionFailure(format!("no certified class after {RETRIES} attempts")))
}

/// The unique wall first crossed by `p -> q` and the crossing point, if the crossing is clean.
fn first_wall(arr: &ChamberArrangement, p: &LinearForm, q: &LinearForm) -> Option<(WallSegment, LinearForm)> {
    let cs = chambers::crossings(&arr.walls, p, q);
    let (t, w) = cs.first()?.clone();
    if cs.iter().filter(|(s, _)| *s == t).count() > 1 {
        return None;
    }
    let x = p + &(q - p).scale(&t);
    let wall = arr.walls[w].clone();
    if p.dim() == 2 && wall.endpoints.contains(&x) {
        return None;
    }
    Some((wall, x))
}

fn primitive_normal(wall: &WallSegment, p: &LinearForm, x: &LinearForm) -> LinearForm {
    let n = if p.dim() == 1 {
        LinearForm::from_ints(&[1])
    } else {
        let d = wall.direction();
        LinearForm::new(vec![-d.coeffs[1].clone(), d.coeffs[0].clone()]).primitive().expect("non-degenerate wall")
    };
    if n.pair(&(p - x)).is_negative() {
        -n
    } else {
        n
    }
}

/// Independent subset of `vectors` whose positive span contains `v` in its relative interior.
fn positive_support(v: &LinearForm, vectors: &[LinearForm]) -> Option<Vec<usize>> {
    let l = v.dim();
    for size in 1..=l.min(vectors.len()) {
        for idx in combinations(vectors.len(), size) {
            let m: linalg::Matrix = (0..l).map(|row| idx.iter().map(|&i| vectors[i].coeffs[row].clone()).collect()).collect();
            if linalg::rank(&m) < size {
                continue;
            }
            if let Some(c) = linalg::solve(&m, &v.coeffs, size) {
                if c.iter().all(|x| x.is_positive()) {
                    return Some(idx);
                }
            }
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut c in combinations(n - 1, k) {
        c.sort();
        out.push(c);
    }
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

fn construct(
    space: &Space,
    coh: &Cohomology<'_>,
    p: &LinearForm,
    q: &LinearForm,
    wall: &WallSegment,
    x: &LinearForm,
    seed: u64,
) -> Result<Distinction> {
    let l = space.rank;
    let normal = primitive_normal(wall, p, x);
    let level = normal.pair(x);
    let side = |pt: &LinearForm| (normal.pair(pt) - &level).signum();
    let fps = &space.fixed_points;
    let on_h: Vec<usize> = (0..fps.len()).filter(|&i| side(&fps[i].moment).is_zero()).collect();
    let on_w: Vec<usize> = on_h.iter().copied().filter(|&i| l == 1 || wall.contains(&fps[i].moment)).collect();
    let mut r = rng::seeded(seed, 0xd157_1000);

    for k in 1..=24u32 {
        let s = Rational::new(1.into(), (1i64 << k).into());
        let pp = x + &(p - x).scale(&s);

        // Fixed points of the wall from whose image p' is reached along weights
        // pointing into the closed positive side.
        let mut set_p: Vec<(usize, Vec<LinearForm>)> = Vec::new();
        for &f in &on_w {
            let j: Vec<LinearForm> = fps[f].weights.iter().filter(|w| !normal.pair(w).is_negative()).cloned().collect();
            if let Some(idx) = positive_support(&(&pp - &fps[f].moment), &j) {
                set_p.push((f, idx.into_iter().map(|i| j[i].clone()).collect()));
            }
        }
        let Some((_, i_f0)) = set_p.first().cloned() else { continue };

        // Polarizing vector.
        let into_minus: Vec<LinearForm> =
            on_h.iter().flat_map(|&f| fps[f].weights.iter().filter(|w| normal.pair(w).is_negative()).cloned()).collect();
        let all_weights: Vec<LinearForm> = space.weight_directions();
        let mut polar = None;
        for trial in 0..512u32 {
            let bound = 3 + i64::from(trial / 32) * 4;
            let cand = LinearForm::from_ints(&rng::small_int_vector(&mut r, l, bound));
            if all_weights.iter().any(|w| w.pair(&cand).is_zero()) {
                continue;
            }
            if i_f0.iter().all(|w| w.pair(&cand).is_negative()) && into_minus.iter().all(|w| w.pair(&cand).is_positive()) {
                polar = Some(cand);
                break;
            }
        }
        let Some(polar) = polar else { continue };

        // Perturbation eta of the normal.
        let mut eta = None;
        for trial in 0..512u32 {
            let big = 8 + i64::from(trial);
            let delta = LinearForm::from_ints(&rng::small_int_vector(&mut r, l, 3));
            let cand = &normal.scale(&Rational::from_integer(big.into())) + &delta;
            if eta_admissible(space, &cand, &normal, &level, &pp, &on_h) {
                eta = Some(cand);
                break;
            }
        }
        let Some(eta) = eta else { continue };

        let engine = IdealEngine::new(space, Some(polar.clone()), seed)?;
        let ip = engine.integrator(p)?;
        let iq = engine.integrator(q)?;
        let top = space.reduced_dim() as u32;

        // The eta-highest point of P first, then the rest of P, then the other
        // fixed points over the hyperplane.
        let mut anchors: Vec<usize> = set_p.iter().map(|(f, _)| *f).collect();
        anchors.sort_by(|&a, &b| fps[b].moment.pair(&eta).cmp(&fps[a].moment.pair(&eta)).then(a.cmp(&b)));
        let mut rest: Vec<usize> = on_h.iter().copied().filter(|f| !anchors.contains(f)).collect();
        rest.sort_by(|&a, &b| fps[b].moment.pair(&eta).cmp(&fps[a].moment.pair(&eta)).then(a.cmp(&b)));
        anchors.extend(rest);

        for anchor in anchors {
            let alpha = coh.morse_thom_class(&fps[anchor].id, &eta)?;
            let deg_alpha = alpha.degree().unwrap_or(0);
            if deg_alpha > top {
                continue;
            }
            let vanishes_below = (0..fps.len()).all(|i| !side(&fps[i].moment).is_negative() || alpha.restrictions[i].is_zero());
            if !vanishes_below {
                continue;
            }
            for beta in beta_candidates(space, coh, anchor, &eta, top - deg_alpha)? {
                let gamma = beta.mul(&alpha);
                if gamma.is_zero() {
                    continue;
                }
                let value_p = ip.integrate(&gamma)?;
                if value_p.is_zero() {
                    continue;
                }
                let value_q = iq.integrate(&gamma)?;
                if !value_q.is_zero() {
                    continue;
                }
                return Ok(Distinction {
                    gamma,
                    alpha,
                    beta,
                    wall: wall.clone(),
                    normal,
                    anchor: fps[anchor].id.clone(),
                    eta,
                    polarization: polar,
                    value_p,
                    value_q,
                });
            }
        }
    }
    Err(Error::ConstructionFailure("no admissible anchor near the wall".into()))
}

/// Products of the eta-positive weights at the anchor leaving out a basis, then
/// the basis of the complementary degree.
fn beta_candidates(space: &Space, coh: &Cohomology<'_>, anchor: usize, eta: &LinearForm, degree: u32) -> Result<Vec<EquivariantClass>> {
    let l = space.rank;
    let positive: Vec<LinearForm> = space.fixed_points[anchor].weights.iter().filter(|w| w.pair(eta).is_positive()).cloned().collect();
    let mut out = Vec::new();
    for subset in combinations(positive.len(), l) {
        let m: linalg::Matrix = subset.iter().map(|&i| positive[i].coeffs.clone()).collect();
        if linalg::rank(&m) < l {
            continue;
        }
        let mut b = Polynomial::one(l);
        for (i, w) in positive.iter().enumerate() {
            if !subset.contains(&i) {
                b = &b * &Polynomial::from_linear(w);
            }
        }
        out.push(EquivariantClass::constant(space, b));
    }
    out.extend(coh.basis(degree)?.classes.iter().cloned());
    Ok(out)
}

/// Conditions on the perturbed normal: generic, separates distinct wall images,
/// and orders the far side below the hyperplane, the hyperplane below `p'`, and
/// `p'` below the near side.
fn eta_admissible(space: &Space, eta: &LinearForm, normal: &LinearForm, level: &Rational, pp: &LinearForm, on_h: &[usize]) -> bool {
    let fps = &space.fixed_points;
    if fps.iter().any(|f| f.weights.iter().any(|w| w.pair(eta).is_zero())) {
        return false;
    }
    for (a, &i) in on_h.iter().enumerate() {
        for &j in &on_h[a + 1..] {
            if fps[i].moment != fps[j].moment && fps[i].moment.pair(eta) == fps[j].moment.pair(eta) {
                return false;
            }
        }
    }
    let h_max = on_h.iter().map(|&i| fps[i].moment.pair(eta)).max();
    let h_min = on_h.iter().map(|&i| fps[i].moment.pair(eta)).min();
    let ep = pp.pair(eta);
    for f in fps {
        let s = normal.pair(&f.moment) - level;
        let e = f.moment.pair(eta);
        if s.is_positive() && (e <= ep || h_max.as_ref().is_some_and(|h| e <= *h)) {
            return false;
        }
        if s.is_negative() && h_min.as_ref().is_some_and(|h| e >= *h) {
            return false;
        }
    }
    h_max.is_none_or(|h| h < ep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::generators;

    #[test]
    fn combinations_are_sorted() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn positive_support_finds_cones() {
        let ws = [LinearForm::from_ints(&[1, 0]), LinearForm::from_ints(&[0, 1]), LinearForm::from_ints(&[-1, 1])];
        assert_eq!(positive_support(&LinearForm::from_ints(&[1, 2]), &ws), Some(vec![0, 1]));
        assert_eq!(positive_support(&LinearForm::from_ints(&[0, 3]), &ws), Some(vec![1]));
        assert_eq!(positive_support(&LinearForm::from_ints(&[0, -1]), &ws), None);
    }

    #[test]
    fn sphere_has_one_chamber() {
        let s = generators::sphere();
        let p = LinearForm::new(vec![rat(1, 4)]);
        let q = LinearForm::new(vec![rat(3, 4)]);
        assert_eq!(distinguish(&s, &p, &q, 0), Err(Error::SameChamber));
    }

    #[test]
    fn su3_adjacent_chambers() {
        let s = generators::su3(2, 1).unwrap();
        let arr = chambers::arrangement(&s).unwrap();
        let c0 = 0;
        for &c1 in &arr.adjacency[c0] {
            let (p, q) = (arr.sample_point(c0), arr.sample_point(c1));
            let d = distinguish(&s, &p, &q, 0).unwrap();
            assert!(!d.value_p.is_zero());
            assert!(d.value_q.is_zero());
        }
    }
}
