//! Property tests for the invariants of the residue, chamber, ideal and
//! wall-crossing layers, run over the shipped spaces.

use std::collections::{BTreeMap, BTreeSet};

use mpc_core::algebra::{int, linalg, monomials_of_degree, rat};
use mpc_core::chambers::{self, ChamberArrangement};
use mpc_core::generators;
use mpc_core::kirwan::{self, Cohomology, IdealEngine};
use mpc_core::residues::{self, Integrator};
use mpc_core::rng::{self, SeededRng};
use mpc_core::wallcross;
use mpc_core::{EquivariantClass, LinearForm, Rational, Scalar, Space};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn shipped() -> Vec<Space> {
    generators::shipped().into_iter().map(|(_, p)| generators::generate(&p).unwrap()).collect()
}

fn random_point(arr: &ChamberArrangement, chamber: usize, r: &mut SeededRng) -> LinearForm {
    let cell = arr.cells_of(chamber).next().unwrap();
    let ws: Vec<i64> = cell.vertices.iter().map(|_| r.gen_range(1..=9)).collect();
    let total: i64 = ws.iter().sum();
    cell.vertices.iter().zip(&ws).fold(LinearForm::zero(arr.rank), |acc, (v, w)| &acc + &v.scale(&rat(*w, total)))
}

fn random_class(coh: &Cohomology<'_>, d: u32, r: &mut SeededRng) -> EquivariantClass {
    let basis = coh.basis(d).unwrap();
    let coeffs: Vec<Rational> = (0..basis.len()).map(|_| int(r.gen_range(-4..=4))).collect();
    basis.combination(&coeffs, coh.space())
}

/// Generic integer test vector pairing non-trivially with every weight.
fn random_xi(s: &Space, r: &mut SeededRng) -> LinearForm {
    loop {
        let v = LinearForm::from_ints(&rng::small_int_vector(r, s.rank, 9));
        if s.weight_directions().iter().all(|w| !w.pair(&v).is_zero()) {
            return v;
        }
    }
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 16, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn residue_is_independent_of_cone_frame_and_point(space in 0usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 1);
        let arr = chambers::arrangement(s).unwrap();
        let coh = Cohomology::new(s).unwrap();
        let c = r.gen_range(0..arr.num_chambers());
        let cls = random_class(&coh, s.reduced_dim() as u32, &mut r);
        let p = random_point(&arr, c, &mut r);
        let base = residues::jk_integral(s, &cls, &p, &s.generic_vector(0), 0).unwrap();
        prop_assert!(base.im.is_zero());
        let xi = random_xi(s, &mut r);
        prop_assert_eq!(&residues::jk_integral(s, &cls, &p, &xi, 0).unwrap(), &base);
        for frame_seed in 1..10 {
            prop_assert_eq!(&residues::jk_integral(s, &cls, &p, &s.generic_vector(0), frame_seed).unwrap(), &base);
        }
        let p2 = random_point(&arr, c, &mut r);
        prop_assert_eq!(&residues::jk_integral(s, &cls, &p2, &xi, seed).unwrap(), &base);
    }

    #[test]
    fn locate_is_constant_on_wall_free_paths(space in 0usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 2);
        let arr = chambers::arrangement(s).unwrap();
        let a = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        let b = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        if chambers::crossings(&arr.walls, &a, &b).is_empty() {
            let mid = (&a + &b).scale(&rat(1, 2));
            prop_assert_eq!(arr.locate(&a).unwrap(), arr.locate(&b).unwrap());
            prop_assert_eq!(arr.locate(&mid).unwrap(), arr.locate(&a).unwrap());
        } else {
            prop_assert!(arr.num_chambers() > 1 || s.rank == 1);
        }
    }

    #[test]
    fn classes_supported_in_a_half_plane_pair_to_zero(space in 0usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 3);
        let arr = chambers::arrangement(s).unwrap();
        let p = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        let normal = random_xi(s, &mut r);
        let side = |x: &LinearForm| normal.pair(&(x - &p));
        let engine = IdealEngine::new(s, None, 0).unwrap();
        let top = engine.top_degree();
        for d in (0..=top).step_by(2) {
            let basis = engine.cohomology.basis(d).unwrap();
            let monos = monomials_of_degree(s.rank, d / 2);
            // Vanish at every fixed point whose image is not strictly positive.
            let mut rows: linalg::Matrix = Vec::new();
            for (fi, f) in s.fixed_points.iter().enumerate() {
                if side(&f.moment) > int(0) {
                    continue;
                }
                for m in 0..monos.len() {
                    rows.push(basis.classes.iter().map(|c| c.restrictions[fi].coords(&monos)[m].re.clone()).collect());
                }
            }
            let combos = if rows.is_empty() {
                (0..basis.len()).map(|i| (0..basis.len()).map(|j| int(i64::from(i == j))).collect()).collect()
            } else {
                linalg::nullspace(&rows, basis.len())
            };
            let integ = engine.integrator(&p).unwrap();
            let dual = engine.cohomology.basis(top - d).unwrap();
            for coeffs in combos.iter().take(3) {
                let alpha = basis.combination(coeffs, s);
                for b in &dual.classes {
                    prop_assert!(integ.integrate(&alpha.mul(b)).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn pairing_ranks_are_symmetric(space in 0usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 4);
        let arr = chambers::arrangement(s).unwrap();
        let p = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        let engine = IdealEngine::new(s, None, 0).unwrap();
        let top = engine.top_degree();
        let integ = engine.integrator(&p).unwrap();
        let fp = engine.fingerprint(&p).unwrap();
        let betti = fp.reduced_betti();
        for d in (0..=top).step_by(2) {
            let a = linalg::rank(&engine.pairing_matrix(&integ, d).unwrap());
            let b = linalg::rank(&engine.pairing_matrix(&integ, top - d).unwrap());
            prop_assert_eq!(a, b);
            prop_assert_eq!(betti[(d / 2) as usize], betti[((top - d) / 2) as usize]);
        }
    }

    #[test]
    fn morse_thom_classes_are_gkm_and_anchored(space in 0usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 5);
        let eta = random_xi(s, &mut r);
        let coh = Cohomology::new(s).unwrap();
        let f = &s.fixed_points[r.gen_range(0..s.fixed_points.len())];
        let cls = coh.morse_thom_class(&f.id, &eta).unwrap();
        cls.check_gkm(s).unwrap();
        let support = cls.support();
        prop_assert!(!support.is_empty());
        let level = |i: usize| s.fixed_points[i].moment.pair(&eta);
        let lowest = support.iter().copied().min_by(|&a, &b| level(a).cmp(&level(b))).unwrap();
        prop_assert_eq!(&s.fixed_points[lowest].id, &f.id);
        prop_assert!(support.iter().all(|&i| i == lowest || level(i) > level(lowest)));
    }

    #[test]
    fn wall_crossings_telescope(space in 2usize..8, seed in 0u64..1_000) {
        let s = &shipped()[space];
        let mut r = rng::seeded(seed, 6);
        let arr = chambers::arrangement(s).unwrap();
        let coh = Cohomology::new(s).unwrap();
        let cls = random_class(&coh, s.reduced_dim() as u32, &mut r);
        let xi = s.generic_vector(0);
        let a = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        let b = random_point(&arr, r.gen_range(0..arr.num_chambers()), &mut r);
        let cs = chambers::crossings(&arr.walls, &a, &b);
        let params: BTreeSet<Rational> = cs.iter().map(|(t, _)| t.clone()).collect();
        // Skip paths through wall intersections.
        prop_assume!(params.len() == cs.len());
        prop_assume!(cs.iter().all(|(t, w)| !arr.walls[*w].endpoints.contains(&(&a + &(&b - &a).scale(t)))));
        let mut stops = vec![a.clone()];
        let ts: Vec<Rational> = params.into_iter().collect();
        for pair in ts.windows(2) {
            stops.push(&a + &(&b - &a).scale(&((&pair[0] + &pair[1]) * rat(1, 2))));
        }
        stops.push(b.clone());
        let mut total = Scalar::zero();
        for leg in stops.windows(2) {
            if arr.locate(&leg[0]).unwrap() == arr.locate(&leg[1]).unwrap() && chambers::crossings(&arr.walls, &leg[0], &leg[1]).is_empty() {
                continue;
            }
            total += &wallcross::cross_wall(s, &leg[0], &leg[1], &cls, &xi, seed).unwrap().difference;
        }
        let direct = &residues::jk_integral(s, &cls, &a, &xi, 0).unwrap() - &residues::jk_integral(s, &cls, &b, &xi, 0).unwrap();
        prop_assert_eq!(total, direct);
    }
}

// ---------------------------------------------------------------------------
// Brute-force face count of the wall arrangement.

type Pt = (Rational, Rational);

fn pt(v: &LinearForm) -> Pt {
    (v.coeffs[0].clone(), v.coeffs[1].clone())
}

fn cross(o: &Pt, a: &Pt, b: &Pt) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn on_segment(p: &Pt, a: &Pt, b: &Pt) -> bool {
    cross(a, b, p).is_zero()
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

/// Intersection points of two segments (endpoints of the overlap if collinear).
fn meet(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> Vec<Pt> {
    let den = (&b.0 - &a.0) * (&d.1 - &c.1) - (&b.1 - &a.1) * (&d.0 - &c.0);
    if den.is_zero() {
        return [a, b, c, d].into_iter().filter(|p| on_segment(p, a, b) && on_segment(p, c, d)).cloned().collect();
    }
    let t = ((&c.0 - &a.0) * (&d.1 - &c.1) - (&c.1 - &a.1) * (&d.0 - &c.0)) / &den;
    let x = (&a.0 + &(&b.0 - &a.0) * &t, &a.1 + &(&b.1 - &a.1) * &t);
    if on_segment(&x, a, b) && on_segment(&x, c, d) {
        vec![x]
    } else {
        Vec::new()
    }
}

/// Bounded faces of the planar graph formed by `segs`, by Euler's formula.
fn face_count(segs: &[(Pt, Pt)]) -> usize {
    let mut pieces = BTreeSet::new();
    for (i, (a, b)) in segs.iter().enumerate() {
        let mut cuts = vec![a.clone(), b.clone()];
        for (j, (c, d)) in segs.iter().enumerate() {
            if i != j {
                cuts.extend(meet(a, b, c, d));
            }
        }
        let dir = (&b.0 - &a.0, &b.1 - &a.1);
        cuts.sort_by_key(|p| (&p.0 - &a.0) * &dir.0 + (&p.1 - &a.1) * &dir.1);
        cuts.dedup();
        for w in cuts.windows(2) {
            let (x, y) = (w[0].clone(), w[1].clone());
            pieces.insert(if x < y { (x, y) } else { (y, x) });
        }
    }
    let verts: BTreeSet<Pt> = pieces.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
    let index: BTreeMap<Pt, usize> = verts.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (x, y) in &pieces {
        let (u, v) = (find(&mut parent, index[x]), find(&mut parent, index[y]));
        parent[u] = v;
    }
    let components = (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count();
    pieces.len() + components - verts.len()
}

#[test]
fn chamber_counts_match_a_brute_force_face_count() {
    for s in shipped() {
        let arr = chambers::arrangement(&s).unwrap();
        if s.rank == 1 {
            let values: BTreeSet<Rational> = s.fixed_points.iter().map(|f| f.moment.coeffs[0].clone()).collect();
            assert_eq!(arr.num_chambers(), values.len() - 1, "{}", s.name);
            continue;
        }
        let mut segs: Vec<(Pt, Pt)> = arr.walls.iter().map(|w| (pt(&w.endpoints[0]), pt(&w.endpoints[1]))).collect();
        let hull = chambers::convex_hull(&s.fixed_points.iter().map(|f| f.moment.clone()).collect::<Vec<_>>());
        for i in 0..hull.len() {
            segs.push((pt(&hull[i]), pt(&hull[(i + 1) % hull.len()])));
        }
        assert_eq!(arr.num_chambers(), face_count(&segs), "{}", s.name);
    }
}

#[test]
fn distinct_chambers_have_distinct_ideals() {
    for s in shipped() {
        let count = kirwan::count_chambers_by_ideals(&s, None, 0).unwrap();
        assert!(count.agrees(), "{}: {} chambers, {} ideals", s.name, count.geometric, count.by_ideals);
    }
}

#[test]
fn reports_do_not_depend_on_the_thread_pool() {
    let s = generators::su3(2, 1).unwrap();
    let p = LinearForm::new(vec![rat(1, 3), rat(1, 5)]);
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = serial.install(|| kirwan::fingerprint(&s, &p, &s.generic_vector(0), 0).unwrap().to_text());
    let b = kirwan::fingerprint(&s, &p, &s.generic_vector(0), 0).unwrap().to_text();
    assert_eq!(a, b);
    let integ = Integrator::new(&s, &p, &s.generic_vector(0), 0).unwrap();
    let cls = kirwan::cohomology_basis(&s, 2).unwrap().pop().unwrap();
    assert_eq!(serial.install(|| integ.integrate(&cls)).unwrap(), integ.integrate(&cls).unwrap());
}
