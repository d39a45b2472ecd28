//! Walls, chambers of the moment polytope, and point location.
//!
//! Rank-2 chambers come from the arrangement of all wall supporting lines
//! (plus transversal cuts at segment endpoints) clipped to the polytope; cells
//! are then merged across edges that no wall covers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{LinearForm, Rational};
use crate::error::{Error, Result};
use crate::model::{fmt_point, Space};

/// Closed segment between two distinct points (a single point in rank 1 is allowed
/// as a degenerate wall).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WallSegment {
    pub endpoints: [LinearForm; 2],
}

fn cross(a: &LinearForm, b: &LinearForm) -> Rational {
    &a.coeffs[0] * &b.coeffs[1] - &a.coeffs[1] * &b.coeffs[0]
}

/// Sign of the turn a -> b -> c.
fn orient(a: &LinearForm, b: &LinearForm, c: &LinearForm) -> i32 {
    let v = cross(&(b - a), &(c - a));
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl WallSegment {
    pub fn new(a: LinearForm, b: LinearForm) -> Self {
        if a <= b {
            WallSegment { endpoints: [a, b] }
        } else {
            WallSegment { endpoints: [b, a] }
        }
    }

    pub fn direction(&self) -> LinearForm {
        &self.endpoints[1] - &self.endpoints[0]
    }

    pub fn midpoint(&self) -> LinearForm {
        (&self.endpoints[0] + &self.endpoints[1]).scale(&Rational::new(1.into(), 2.into()))
    }

    /// True if `p` lies on the closed segment.
    pub fn contains(&self, p: &LinearForm) -> bool {
        let [a, b] = &self.endpoints;
        let d = b - a;
        let v = p - a;
        if d.is_zero() {
            return v.is_zero();
        }
        // v must be a multiple t*d with 0 <= t <= 1.
        match v.ratio_to(&d) {
            Some(t) => !t.is_negative() && t <= Rational::one(),
            None => v.is_zero(),
        }
    }

    /// True if the closed segment meets the closed segment `[p, q]`.
    pub fn meets_segment(&self, p: &LinearForm, q: &LinearForm) -> bool {
        let [a, b] = &self.endpoints;
        match a.dim() {
            1 => {
                let (lo, hi) = if p.coeffs[0] <= q.coeffs[0] { (&p.coeffs[0], &q.coeffs[0]) } else { (&q.coeffs[0], &p.coeffs[0]) };
                [a, b].iter().any(|e| &e.coeffs[0] >= lo && &e.coeffs[0] <= hi)
            }
            2 => {
                let o1 = orient(a, b, p);
                let o2 = orient(a, b, q);
                let o3 = orient(p, q, a);
                let o4 = orient(p, q, b);
                if o1 * o2 < 0 && o3 * o4 < 0 {
                    return true;
                }
                let other = WallSegment::new(p.clone(), q.clone());
                (o1 == 0 && self.contains(p)) || (o2 == 0 && self.contains(q)) || (o3 == 0 && other.contains(a)) || (o4 == 0 && other.contains(b))
            }
            _ => {
                // Sample-free test in higher rank: only detect endpoint incidences and collinear overlap.
                self.contains(p) || self.contains(q) || WallSegment::new(p.clone(), q.clone()).contains(a) || WallSegment::new(p.clone(), q.clone()).contains(b)
            }
        }
    }

    /// Parameter `t` in `[0, 1]` where `p + t (q - p)` meets this (rank-2) segment transversally.
    pub fn crossing_parameter(&self, p: &LinearForm, q: &LinearForm) -> Option<Rational> {
        let [a, b] = &self.endpoints;
        let d = q - p;
        let e = b - a;
        let den = cross(&d, &e);
        if den.is_zero() {
            return None;
        }
        let ap = a - p;
        let t = cross(&ap, &e) / &den;
        let s = cross(&ap, &d) / &den;
        if t.is_negative() || t > Rational::one() || s.is_negative() || s > Rational::one() {
            return None;
        }
        Some(t)
    }
}

/// Walls of a space: the curated override if present, otherwise the images of
/// one-skeleton edges, merged when collinear and overlapping (rank at least 2).
pub fn walls(space: &Space) -> Result<Vec<WallSegment>> {
    if let Some(polylines) = &space.walls {
        let mut out = Vec::new();
        for line in polylines {
            for pair in line.windows(2) {
                out.push(WallSegment::new(pair[0].clone(), pair[1].clone()));
            }
        }
        return Ok(out);
    }
    if space.edges.is_empty() {
        return Err(Error::MissingSkeleton);
    }
    let mut segs = BTreeSet::new();
    for (i, j, _) in space.edge_indices()? {
        let a = space.fixed_points[i].moment.clone();
        let b = space.fixed_points[j].moment.clone();
        if a != b {
            segs.insert(WallSegment::new(a, b));
        }
    }
    let segs: Vec<WallSegment> = segs.into_iter().collect();
    if space.rank == 1 {
        return Ok(segs);
    }
    Ok(merge_collinear(segs))
}

/// Merges collinear segments that overlap or touch.
pub fn merge_collinear(segs: Vec<WallSegment>) -> Vec<WallSegment> {
    let mut groups: Vec<Vec<WallSegment>> = Vec::new();
    'outer: for s in segs {
        for g in groups.iter_mut() {
            let r = &g[0];
            let d = r.direction();
            if s.direction().is_parallel(&d) && (&s.endpoints[0] - &r.endpoints[0]).ratio_to(&d).is_some() {
                g.push(s);
                continue 'outer;
            }
        }
        groups.push(vec![s]);
    }
    let mut out = Vec::new();
    for g in groups {
        let d = g[0].direction();
        let origin = g[0].endpoints[0].clone();
        let param = |p: &LinearForm| (p - &origin).ratio_to(&d).unwrap_or_else(Rational::zero);
        let mut ivs: Vec<(Rational, Rational, LinearForm, LinearForm)> = g
            .iter()
            .map(|s| {
                let (t0, t1) = (param(&s.endpoints[0]), param(&s.endpoints[1]));
                if t0 <= t1 {
                    (t0, t1, s.endpoints[0].clone(), s.endpoints[1].clone())
                } else {
                    (t1, t0, s.endpoints[1].clone(), s.endpoints[0].clone())
                }
            })
            .collect();
        ivs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut cur = ivs[0].clone();
        for iv in ivs.into_iter().skip(1) {
            if iv.0 <= cur.1 {
                if iv.1 > cur.1 {
                    cur.1 = iv.1;
                    cur.3 = iv.3;
                }
            } else {
                out.push(WallSegment::new(cur.2.clone(), cur.3.clone()));
                cur = iv;
            }
        }
        out.push(WallSegment::new(cur.2, cur.3));
    }
    out.sort();
    out
}

/// Errors with `SingularValue` if `p` lies on a wall.
pub fn check_regular(space: &Space, p: &LinearForm) -> Result<()> {
    if space.rank == 1 {
        if space.fixed_points.iter().any(|f| f.moment == *p) {
            return Err(Error::SingularValue(fmt_point(p)));
        }
        return Ok(());
    }
    match walls(space) {
        Ok(ws) => {
            if ws.iter().any(|w| w.contains(p)) {
                return Err(Error::SingularValue(fmt_point(p)));
            }
            Ok(())
        }
        Err(Error::MissingSkeleton) => Ok(()),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Convex geometry in the plane

/// Convex hull, counter-clockwise, without collinear vertices.
pub fn convex_hull(points: &[LinearForm]) -> Vec<LinearForm> {
    let mut pts: Vec<LinearForm> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LinearForm> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<LinearForm> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Line `normal . x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Line {
    normal: LinearForm,
    offset: Rational,
}

impl Line {
    fn through(a: &LinearForm, dir: &LinearForm) -> Line {
        let n = LinearForm::new(vec![-dir.coeffs[1].clone(), dir.coeffs[0].clone()]);
        let (_, n) = n.normalize().expect("non-zero direction");
        let offset = n.pair(a);
        Line { normal: n, offset }
    }

    fn side(&self, p: &LinearForm) -> Rational {
        self.normal.pair(p) - &self.offset
    }
}

/// Splits a convex polygon by a line; `None` when the line misses its interior.
fn split(poly: &[LinearForm], line: &Line) -> Option<(Vec<LinearForm>, Vec<LinearForm>)> {
    let sides: Vec<Rational> = poly.iter().map(|p| line.side(p)).collect();
    if !sides.iter().any(|s| s.is_positive()) || !sides.iter().any(|s| s.is_negative()) {
        return None;
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        let (sa, sb) = (&sides[i], &sides[(i + 1) % n]);
        if !sa.is_negative() {
            pos.push(a.clone());
        }
        if !sa.is_positive() {
            neg.push(a.clone());
        }
        if (sa.is_positive() && sb.is_negative()) || (sa.is_negative() && sb.is_positive()) {
            let t = sa / &(sa - sb);
            let x = a + &(b - a).scale(&t);
            pos.push(x.clone());
            neg.push(x);
        }
    }
    Some((pos, neg))
}

fn centroid(poly: &[LinearForm]) -> LinearForm {
    let mut s = LinearForm::zero(poly[0].dim());
    for p in poly {
        s = &s + p;
    }
    s.scale(&Rational::new(1.into(), (poly.len() as i64).into()))
}

/// Strictly inside a counter-clockwise convex polygon.
fn strictly_inside(poly: &[LinearForm], p: &LinearForm) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) > 0)
}

fn inside_closed(poly: &[LinearForm], p: &LinearForm) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) >= 0)
}

/// Whether `p` lies in the closed convex hull of planar `points`.
pub fn hull_contains(points: &[LinearForm], p: &LinearForm) -> bool {
    let hull = convex_hull(points);
    match hull.len() {
        0 => false,
        1 => &hull[0] == p,
        2 => WallSegment::new(hull[0].clone(), hull[1].clone()).contains(p),
        _ => inside_closed(&hull, p),
    }
}

// ---------------------------------------------------------------------------
// Arrangements

/// Open convex cell: an interval `[a, b]` in rank 1 or a counter-clockwise polygon in rank 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub vertices: Vec<LinearForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberArrangement {
    pub rank: usize,
    /// Polytope vertices (interval endpoints in rank 1).
    pub polytope: Vec<LinearForm>,
    pub walls: Vec<WallSegment>,
    pub cells: Vec<Cell>,
    /// Chamber id of every cell.
    pub chamber_of_cell: Vec<usize>,
    /// Chamber adjacency across walls.
    pub adjacency: Vec<BTreeSet<usize>>,
    /// Cell pairs separated by a wall piece, with the piece's endpoints.
    pub wall_edges: Vec<(usize, usize, LinearForm, LinearForm)>,
}

impl ChamberArrangement {
    pub fn num_chambers(&self) -> usize {
        self.adjacency.len()
    }

    pub fn cells_of(&self, chamber: usize) -> impl Iterator<Item = &Cell> {
        self.cells.iter().zip(&self.chamber_of_cell).filter(move |(_, &c)| c == chamber).map(|(c, _)| c)
    }

    /// A rational interior point of the chamber (centroid of its first cell).
    pub fn sample_point(&self, chamber: usize) -> LinearForm {
        let cell = self.cells_of(chamber).next().expect("chamber has a cell");
        centroid(&cell.vertices)
    }

    /// For every pair of adjacent chambers, a point on each side of one shared wall
    /// piece such that the segment between them crosses that piece only.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize, LinearForm, LinearForm)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (ca, cb, a, b) in &self.wall_edges {
            let (x, y) = (self.chamber_of_cell[*ca], self.chamber_of_cell[*cb]);
            if x == y || seen.contains(&(x.min(y), x.max(y))) {
                continue;
            }
            let mid = (a + b).scale(&Rational::new(1.into(), 2.into()));
            let ga = centroid(&self.cells[*ca].vertices);
            let gb = centroid(&self.cells[*cb].vertices);
            for k in 4..40u32 {
                let t = Rational::new(1.into(), (1i64 << k).into());
                let p = &mid + &(&ga - &mid).scale(&t);
                let q = &mid + &(&gb - &mid).scale(&t);
                if crossings(&self.walls, &p, &q).len() == 1 {
                    seen.insert((x.min(y), x.max(y)));
                    out.push((x, y, p, q));
                    break;
                }
            }
        }
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    /// Id of the chamber containing `p`.
    pub fn locate(&self, p: &LinearForm) -> Result<usize> {
        if p.dim() != self.rank {
            return Err(Error::InvalidArgument("point has the wrong dimension".into()));
        }
        if self.walls.iter().any(|w| w.contains(p)) {
            return Err(Error::SingularValue(fmt_point(p)));
        }
        if self.rank == 1 {
            let x = &p.coeffs[0];
            for (i, c) in self.cells.iter().enumerate() {
                if x > &c.vertices[0].coeffs[0] && x < &c.vertices[1].coeffs[0] {
                    return Ok(self.chamber_of_cell[i]);
                }
                if x == &c.vertices[0].coeffs[0] || x == &c.vertices[1].coeffs[0] {
                    return Err(Error::SingularValue(fmt_point(p)));
                }
            }
            return Err(Error::OutsidePolytope(fmt_point(p)));
        }
        if !strictly_inside(&self.polytope, p) {
            return Err(Error::OutsidePolytope(fmt_point(p)));
        }
        for (i, c) in self.cells.iter().enumerate() {
            if inside_closed(&c.vertices, p) {
                return Ok(self.chamber_of_cell[i]);
            }
        }
        Err(Error::OutsidePolytope(fmt_point(p)))
    }

    /// Static SVG drawing: polytope, shaded chambers, walls and optional fixed points.
    pub fn to_svg(&self, fixed_points: &[LinearForm]) -> String {
        let size = 480.0;
        let margin = 30.0;
        let pts: Vec<(f64, f64)> = self
            .polytope
            .iter()
            .map(|p| (f(&p.coeffs[0]), if self.rank > 1 { f(&p.coeffs[1]) } else { 0.0 }))
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in &pts {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let k = (size - 2.0 * margin) / span;
        let map = |p: &LinearForm| {
            let x = f(&p.coeffs[0]);
            let y = if self.rank > 1 { f(&p.coeffs[1]) } else { (y0 + y1) / 2.0 };
            (margin + (x - x0) * k, size - margin - (y - y0) * k)
        };
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
        let n = self.num_chambers().max(1);
        for (cell, &ch) in self.cells.iter().zip(&self.chamber_of_cell) {
            let hue = (ch * 360 / n) % 360;
            if self.rank == 1 {
                let (a, b) = (map(&cell.vertices[0]), map(&cell.vertices[1]));
                let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="hsl({hue},60%,60%)" stroke-width="12"/>"#, a.0, a.1, b.0, b.1);
            } else {
                let pts: Vec<String> = cell.vertices.iter().map(&map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(s, r#"<polygon points="{}" fill="hsl({hue},60%,80%)" stroke="none"/>"#, pts.join(" "));
            }
        }
        if self.rank > 1 {
            let pts: Vec<String> = self.polytope.iter().map(&map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, pts.join(" "));
        }
        for w in &self.walls {
            let (a, b) = (map(&w.endpoints[0]), map(&w.endpoints[1]));
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#, a.0, a.1, b.0, b.1);
        }
        for p in fixed_points {
            let (x, y) = map(p);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="crimson"/>"#);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Chambers cut out of the convex hull of `points` by the wall segments.
pub fn enumerate_chambers(wallsegs: &[WallSegment], points: &[LinearForm], rank: usize) -> Result<ChamberArrangement> {
    match rank {
        1 => Ok(enumerate_rank1(wallsegs, points)),
        2 => enumerate_rank2(wallsegs, points),
        l => Err(Error::UnsupportedRank(l)),
    }
}

/// Chamber arrangement of a space of rank one or two.
pub fn arrangement(space: &Space) -> Result<ChamberArrangement> {
    if space.rank > 2 {
        return Err(Error::UnsupportedRank(space.rank));
    }
    let ws = walls(space)?;
    let pts: Vec<LinearForm> = space.fixed_points.iter().map(|f| f.moment.clone()).collect();
    enumerate_chambers(&ws, &pts, space.rank)
}

fn enumerate_rank1(wallsegs: &[WallSegment], points: &[LinearForm]) -> ChamberArrangement {
    let mut bps: BTreeSet<Rational> = points.iter().map(|p| p.coeffs[0].clone()).collect();
    for w in wallsegs {
        for e in &w.endpoints {
            bps.insert(e.coeffs[0].clone());
        }
    }
    let bps: Vec<Rational> = bps.into_iter().collect();
    let pt = |r: &Rational| LinearForm::new(vec![r.clone()]);
    let cells: Vec<Cell> = bps.windows(2).map(|w| Cell { vertices: vec![pt(&w[0]), pt(&w[1])] }).collect();
    let k = cells.len();
    let adjacency = (0..k)
        .map(|i| {
            let mut s = BTreeSet::new();
            if i > 0 {
                s.insert(i - 1);
            }
            if i + 1 < k {
                s.insert(i + 1);
            }
            s
        })
        .collect();
    let polytope = match (bps.first(), bps.last()) {
        (Some(a), Some(b)) => vec![pt(a), pt(b)],
        _ => Vec::new(),
    };
    // Rank-1 walls are the breakpoints themselves.
    let walls = bps.iter().map(|b| WallSegment { endpoints: [pt(b), pt(b)] }).collect();
    let wall_edges = (1..k).map(|i| (i - 1, i, cells[i].vertices[0].clone(), cells[i].vertices[0].clone())).collect();
    ChamberArrangement { rank: 1, polytope, walls, cells, chamber_of_cell: (0..k).collect(), adjacency, wall_edges }
}

fn enumerate_rank2(wallsegs: &[WallSegment], points: &[LinearForm]) -> Result<ChamberArrangement> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return Err(Error::InvalidArgument("moment polytope is not two-dimensional".into()));
    }
    let mut lines: BTreeSet<Line> = BTreeSet::new();
    for w in wallsegs {
        let d = w.direction();
        if d.is_zero() {
            continue;
        }
        lines.insert(Line::through(&w.endpoints[0], &d));
        let perp = LinearForm::new(vec![-d.coeffs[1].clone(), d.coeffs[0].clone()]);
        for e in &w.endpoints {
            lines.insert(Line::through(e, &perp));
        }
    }
    let mut cells: Vec<Vec<LinearForm>> = vec![hull.clone()];
    for line in &lines {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            match split(&c, line) {
                Some((a, b)) => {
                    next.push(a);
                    next.push(b);
                }
                None => next.push(c),
            }
        }
        cells = next;
    }
    let cells: Vec<Vec<LinearForm>> = cells.into_iter().map(|c| drop_collinear(&c)).filter(|c| c.len() >= 3).collect();

    // Shared edges keyed by their sorted endpoints.
    let mut edge_cells: BTreeMap<(LinearForm, LinearForm), Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        let n = c.len();
        for j in 0..n {
            let (a, b) = (c[j].clone(), c[(j + 1) % n].clone());
            let key = if a <= b { (a, b) } else { (b, a) };
            edge_cells.entry(key).or_default().push(i);
        }
    }
    let mut uf = UnionFind((0..cells.len()).collect());
    let mut wall_edges = Vec::new();
    for ((a, b), cs) in &edge_cells {
        if cs.len() != 2 {
            continue;
        }
        let mid = (a + b).scale(&Rational::new(1.into(), 2.into()));
        if wallsegs.iter().any(|w| w.contains(&mid)) {
            wall_edges.push((cs[0], cs[1], a.clone(), b.clone()));
        } else {
            uf.union(cs[0], cs[1]);
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut chamber_of_cell = Vec::with_capacity(cells.len());
    for i in 0..cells.len() {
        let r = uf.find(i);
        let next = ids.len();
        chamber_of_cell.push(*ids.entry(r).or_insert(next));
    }
    let mut adjacency = vec![BTreeSet::new(); ids.len()];
    for (a, b, _, _) in &wall_edges {
        let (ca, cb) = (chamber_of_cell[*a], chamber_of_cell[*b]);
        if ca != cb {
            adjacency[ca].insert(cb);
            adjacency[cb].insert(ca);
        }
    }
    Ok(ChamberArrangement {
        rank: 2,
        polytope: hull,
        walls: wallsegs.to_vec(),
        cells: cells.into_iter().map(|vertices| Cell { vertices }).collect(),
        chamber_of_cell,
        adjacency,
        wall_edges,
    })
}

fn drop_collinear(poly: &[LinearForm]) -> Vec<LinearForm> {
    let mut pts: Vec<LinearForm> = Vec::with_capacity(poly.len());
    for p in poly {
        if pts.last() != Some(p) {
            pts.push(p.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    let n = pts.len();
    (0..n)
        .filter(|&i| orient(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]) != 0)
        .map(|i| pts[i].clone())
        .collect()
}

/// Walls crossed by the segment `p -> q`, ordered by crossing parameter.
pub fn crossings(ws: &[WallSegment], p: &LinearForm, q: &LinearForm) -> Vec<(Rational, usize)> {
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for (i, w) in ws.iter().enumerate() {
        if p.dim() == 1 {
            let (a, b) = (&p.coeffs[0], &q.coeffs[0]);
            let x = &w.endpoints[0].coeffs[0];
            if a != b {
                let t = (x - a) / (b - a);
                if !t.is_negative() && t <= Rational::one() {
                    out.push((t, i));
                }
            }
        } else if let Some(t) = w.crossing_parameter(p, q) {
            out.push((t, i));
        }
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0 && ws[a.1] == ws[b.1]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn pt(x: i64, y: i64) -> LinearForm {
        LinearForm::from_ints(&[x, y])
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> WallSegment {
        WallSegment::new(pt(a.0, a.1), pt(b.0, b.1))
    }

    #[test]
    fn hull_and_containment() {
        let h = convex_hull(&[pt(0, 0), pt(2, 0), pt(1, 0), pt(0, 2), pt(1, 1)]);
        assert_eq!(h, vec![pt(0, 0), pt(2, 0), pt(0, 2)]);
        assert!(seg((0, 0), (2, 2)).contains(&pt(1, 1)));
        assert!(!seg((0, 0), (2, 2)).contains(&pt(3, 3)));
    }

    #[test]
    fn collinear_merge() {
        let m = merge_collinear(vec![seg((0, 0), (1, 0)), seg((1, 0), (3, 0)), seg((0, 1), (1, 1))]);
        assert_eq!(m.len(), 2);
        assert!(m.contains(&seg((0, 0), (3, 0))));
    }

    #[test]
    fn triangle_has_one_chamber() {
        let ws = vec![seg((0, 0), (1, 0)), seg((1, 0), (0, 1)), seg((0, 1), (0, 0))];
        let arr = enumerate_chambers(&ws, &[pt(0, 0), pt(1, 0), pt(0, 1)], 2).unwrap();
        assert_eq!(arr.num_chambers(), 1);
        let p = LinearForm::new(vec![rat(1, 4), rat(1, 4)]);
        assert_eq!(arr.locate(&p).unwrap(), 0);
        assert!(matches!(arr.locate(&LinearForm::new(vec![rat(1, 2), rat(0, 1)])), Err(Error::SingularValue(_))));
        assert!(matches!(arr.locate(&pt(2, 2)), Err(Error::OutsidePolytope(_))));
    }

    #[test]
    fn dangling_segment_does_not_split() {
        let ws = vec![seg((0, 0), (4, 0)), seg((4, 0), (4, 4)), seg((4, 4), (0, 4)), seg((0, 4), (0, 0)), seg((0, 2), (2, 2))];
        let arr = enumerate_chambers(&ws, &[pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)], 2).unwrap();
        assert_eq!(arr.num_chambers(), 1);
        let ws2 = [ws, vec![seg((2, 2), (4, 2))]].concat();
        let arr = enumerate_chambers(&ws2, &[pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)], 2).unwrap();
        assert_eq!(arr.num_chambers(), 2);
        assert_eq!(arr.adjacency[0].len(), 1);
    }

    #[test]
    fn rank_one_intervals() {
        let p = |x: i64| LinearForm::from_ints(&[x]);
        let arr = enumerate_chambers(&[WallSegment::new(p(0), p(1)), WallSegment::new(p(1), p(3))], &[p(0), p(1), p(3)], 1).unwrap();
        assert_eq!(arr.num_chambers(), 2);
        assert_eq!(arr.locate(&p(2)).unwrap(), 1);
        assert!(matches!(arr.locate(&p(1)), Err(Error::SingularValue(_))));
        assert!(matches!(arr.locate(&p(4)), Err(Error::OutsidePolytope(_))));
    }

    #[test]
    fn crossing_order() {
        let ws = vec![seg((1, -5), (1, 5)), seg((3, -5), (3, 5))];
        let c = crossings(&ws, &pt(0, 0), &pt(4, 0));
        assert_eq!(c, vec![(rat(1, 4), 0), (rat(3, 4), 1)]);
    }

    #[test]
    fn rank_three_is_unsupported() {
        assert_eq!(enumerate_chambers(&[], &[], 3), Err(Error::UnsupportedRank(3)));
    }
}
