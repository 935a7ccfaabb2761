//! Brute-force constructions used as ground truth. They rely on the exact
//! kernel only and are meant for small inputs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::linalg::{affine_dim, dot, normal, sub, to_integer_coords, EchelonBasis};
use crate::geom::polytope::{drop_axis_for, facets, without_axis};
use crate::geom::{circumsphere, side_of_sphere, Point, PointSet, Rational, Side};
use crate::orderk::{binomial, slice_of_rhomboid, Cell, CombinatorialVertex, Mosaic, Rhomboid};
use crate::radius::{min_constrained_sphere, ConstrainedSphereProblem, Extended, RadiusAssignment};
use crate::tiling::RhomboidTiling;

pub const DEFAULT_LIMIT: usize = 14;

/// Size guard shared by the brute-force constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    limit: Option<usize>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: Some(DEFAULT_LIMIT),
        }
    }
}

impl Oracle {
    /// No size limit.
    pub fn unguarded() -> Self {
        Oracle { limit: None }
    }

    pub fn with_limit(limit: usize) -> Self {
        Oracle { limit: Some(limit) }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self.limit {
            Some(limit) if n > limit => Err(Error::SizeGuard { n, limit }),
            _ => Ok(()),
        }
    }

    /// `Del_k` from the lower hull of the lifted barycenters of all
    /// `k`-subsets, with cells and a fan triangulation.
    pub fn orderk(&self, points: &PointSet, k: usize) -> Result<Mosaic> {
        self.check(points.len())?;
        let n = points.len();
        if k < 1 || k > n {
            return Err(Error::OutOfRange {
                what: "order",
                value: k as i64,
                min: 1,
                max: n as i64,
            });
        }
        let subsets: Vec<Vec<u32>> = (0..n as u32).combinations(k).collect();
        let labels: Vec<CombinatorialVertex> = subsets.iter().cloned().map(CombinatorialVertex::new).collect();
        if subsets.len() == 1 {
            return Ok(with_triangulation(
                Mosaic::new(k, labels.into_iter().collect(), []),
                Vec::new(),
                &[],
            ));
        }
        let kq = Rational::from_integer(BigInt::from(k));
        let lifted: Vec<Vec<Rational>> = subsets
            .iter()
            .map(|s| {
                let mut c = vec![Rational::zero(); points.dim() + 1];
                for &i in s {
                    let p = points.point(i as usize);
                    for (x, y) in c.iter_mut().zip(p.coords()) {
                        *x += y;
                    }
                    c[points.dim()] += p.squared_norm();
                }
                c.into_iter().map(|x| x / &kq).collect()
            })
            .collect();
        let pts = to_integer_coords(&lifted);
        let faces = lower_faces_by_wrapping(&pts)?;

        let d = points.dim();
        let mut cells = Vec::new();
        let mut simplices = Vec::new();
        let mut vertices = BTreeSet::new();
        let projected: Vec<Vec<BigInt>> = pts.iter().map(|p| p[..d].to_vec()).collect();
        for face in &faces {
            let verts: Vec<CombinatorialVertex> = face.iter().map(|&i| labels[i].clone()).collect();
            let cell = cell_of(&verts, k)?;
            if cell.rhomboid().dimension() != d + 1 {
                return Err(Error::Degenerate {
                    subset: cell.rhomboid().a_on().to_vec(),
                });
            }
            simplices.extend(fan(&projected, face));
            vertices.extend(verts);
            cells.push(cell);
        }
        Ok(with_triangulation(Mosaic::new(k, vertices, cells), simplices, &labels))
    }

    /// The tiling from the circumsphere of every `(d+1)`-subset, closed
    /// under faces.
    pub fn tiling(&self, points: &PointSet) -> Result<RhomboidTiling> {
        self.check(points.len())?;
        let n = points.len() as u32;
        let d = points.dim();
        let mut tops = Vec::new();
        for subset in (0..n).combinations(d + 1) {
            let on: Vec<&Point> = subset.iter().map(|&i| points.point(i as usize)).collect();
            let sphere = circumsphere(&on).map_err(|_| Error::Degenerate { subset: subset.clone() })?;
            let mut inside = Vec::new();
            for x in (0..n).filter(|x| !subset.contains(x)) {
                match side_of_sphere(&sphere, points.point(x as usize))? {
                    Side::Inside => inside.push(x),
                    Side::Outside => {}
                    Side::On => {
                        let mut s = subset.clone();
                        s.push(x);
                        s.sort_unstable();
                        return Err(Error::Degenerate { subset: s });
                    }
                }
            }
            tops.push(Rhomboid::new(inside, subset)?);
        }
        let mut all = BTreeSet::new();
        for top in &tops {
            close(top.a_in().to_vec(), Vec::new(), top.a_on(), &mut all);
        }
        Ok(RhomboidTiling::from_rhomboids(all, n as usize))
    }

    /// The smallest constrained sphere of every rhomboid, one at a time.
    pub fn radius(&self, tiling: &RhomboidTiling, points: &PointSet) -> Result<RadiusAssignment> {
        self.check(points.len())?;
        let values = tiling
            .rhomboids()
            .par_iter()
            .map(|r| {
                let p = ConstrainedSphereProblem::of_rhomboid(r, points.len());
                Ok(min_constrained_sphere(&p, points)?.squared_radius())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RadiusAssignment {
            interval_of: vec![None; values.len()],
            values,
            intervals: Vec::new(),
        })
    }

    /// Classic alpha values of the Delaunay complex: each simplex gets the
    /// squared radius of its smallest circumsphere when that sphere is empty,
    /// and otherwise the least value among its cofaces. Keys are sorted point
    /// indices.
    pub fn classic_alpha(&self, points: &PointSet) -> Result<BTreeMap<Vec<u32>, Extended>> {
        self.check(points.len())?;
        let n = points.len() as u32;
        let d = points.dim();
        let pt = |i: u32| points.point(i as usize);
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); d + 1];
        for s in (0..n).combinations(d + 1) {
            let refs: Vec<&Point> = s.iter().map(|&i| pt(i)).collect();
            let sphere = circumsphere(&refs).map_err(|_| Error::Degenerate { subset: s.clone() })?;
            let mut empty = true;
            for x in (0..n).filter(|x| !s.contains(x)) {
                match side_of_sphere(&sphere, pt(x))? {
                    Side::Inside => empty = false,
                    Side::On => return Err(Error::Degenerate { subset: s.clone() }),
                    Side::Outside => {}
                }
            }
            if empty {
                for j in 1..=d + 1 {
                    by_dim[j - 1].extend(s.iter().copied().combinations(j));
                }
            }
        }
        let mut values: BTreeMap<Vec<u32>, Extended> = BTreeMap::new();
        for j in (0..=d).rev() {
            for s in &by_dim[j] {
                let refs: Vec<&Point> = s.iter().map(|&i| pt(i)).collect();
                let sphere = circumsphere(&refs)?;
                let gabriel = (0..n)
                    .filter(|x| !s.contains(x))
                    .all(|x| !sphere.power(pt(x).coords()).is_negative());
                let value = if gabriel || j == d {
                    Extended::Finite(sphere.squared_radius)
                } else {
                    by_dim[j + 1]
                        .iter()
                        .filter(|t| s.iter().all(|x| t.contains(x)))
                        .map(|t| values[t].clone())
                        .min()
                        .expect("a non-Gabriel simplex has a coface")
                };
                values.insert(s.clone(), value);
            }
        }
        Ok(values)
    }
}

pub fn brute_orderk(points: &PointSet, k: usize) -> Result<Mosaic> {
    Oracle::default().orderk(points, k)
}

pub fn brute_tiling(points: &PointSet) -> Result<RhomboidTiling> {
    Oracle::default().tiling(points)
}

pub fn brute_radius(tiling: &RhomboidTiling, points: &PointSet) -> Result<RadiusAssignment> {
    Oracle::default().radius(tiling, points)
}

fn with_triangulation(mut m: Mosaic, simplices: Vec<Vec<usize>>, labels: &[CombinatorialVertex]) -> Mosaic {
    let mut tri: Vec<Vec<usize>> = simplices
        .into_iter()
        .map(|s| {
            s.into_iter()
                .map(|i| m.vertex_index(&labels[i]).expect("face vertex"))
                .sorted()
                .collect()
        })
        .collect();
    tri.sort();
    m.triangulation = Some(tri);
    m
}

/// Adds every face of the rhomboid `(a_in, a_on ∪ rest)` that keeps `a_in`
/// and `a_on`, deciding the points of `rest` one at a time.
fn close(a_in: Vec<u32>, a_on: Vec<u32>, rest: &[u32], out: &mut BTreeSet<Rhomboid>) {
    let Some((&x, rest)) = rest.split_first() else {
        out.insert(Rhomboid::new(a_in, a_on).expect("disjoint by construction"));
        return;
    };
    let mut inside = a_in.clone();
    inside.push(x);
    close(inside, a_on.clone(), rest, out);
    let mut on = a_on.clone();
    on.push(x);
    close(a_in.clone(), on, rest, out);
    close(a_in, a_on, rest, out);
}

/// Reads a cell off its vertex set: the common members are `a_in`, the
/// remaining members `a_on`. The set must be the whole slice.
fn cell_of(verts: &[CombinatorialVertex], k: usize) -> Result<Cell> {
    let mut common: BTreeSet<u32> = verts[0].members().iter().copied().collect();
    let mut union = BTreeSet::new();
    for v in verts {
        let m: BTreeSet<u32> = v.members().iter().copied().collect();
        common = &common & &m;
        union.extend(m);
    }
    let a_on: Vec<u32> = union.difference(&common).copied().collect();
    let degenerate = || Error::Degenerate {
        subset: union.iter().copied().collect(),
    };
    let rho = Rhomboid::new(common.iter().copied().collect(), a_on).map_err(|_| degenerate())?;
    let g = k - common.len();
    let cell = slice_of_rhomboid(&rho, g).map_err(|_| degenerate())?;
    let given: BTreeSet<&CombinatorialVertex> = verts.iter().collect();
    let expected = cell.vertices();
    if given.len() as u64 != binomial(rho.dimension(), g) || !expected.iter().all(|v| given.contains(v)) {
        return Err(degenerate());
    }
    Ok(cell)
}

/// Lower faces of integer points in `R^{d+1}` by gift wrapping: find one
/// lower facet by tilting a horizontal hyperplane, then pivot across every
/// ridge. Faces are returned as the sorted indices on each facet.
fn lower_faces_by_wrapping(pts: &[Vec<BigInt>]) -> Result<Vec<Vec<usize>>> {
    let m = pts[0].len();
    let d = m - 1;
    let horizontal: Vec<&[BigInt]> = pts.iter().map(|p| &p[..d]).collect();
    if affine_dim(&horizontal) < d {
        return Err(Error::Precondition("points do not span their space".into()));
    }

    let first = first_lower_facet(pts);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(first.clone());
    queue.push_back(first);
    let projected: Vec<Vec<BigInt>> = pts.iter().map(|p| p[..d].to_vec()).collect();
    while let Some(face) = queue.pop_front() {
        for ridge in facets(&projected, &face) {
            let ridge = ridge.members;
            let apex = *face.iter().find(|i| !ridge.contains(i)).expect("a facet is wider than its ridge");
            if let Some(next) = pivot(pts, &face, &ridge, apex) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Points on a supporting hyperplane `n · x = min`, with `n` non-vertical.
fn contact(pts: &[Vec<BigInt>], n: &[BigInt]) -> (Vec<usize>, BigInt) {
    let values: Vec<BigInt> = pts.iter().map(|p| dot(n, p)).collect();
    let min = values.iter().min().expect("points").clone();
    let on = (0..pts.len()).filter(|&i| values[i] == min).collect();
    (on, min)
}

fn first_lower_facet(pts: &[Vec<BigInt>]) -> Vec<usize> {
    let m = pts[0].len();
    let d = m - 1;
    let mut n: Vec<Rational> = (0..m).map(|j| Rational::from_integer(BigInt::from(u8::from(j == d)))).collect();
    loop {
        let scaled = crate::geom::linalg::clear_row(&n);
        let (on, min) = contact(pts, &scaled);
        let contact_pts: Vec<&[BigInt]> = on.iter().map(|&i| pts[i].as_slice()).collect();
        if affine_dim(&contact_pts) == d {
            return on;
        }
        // Tilt about the contact set along a horizontal direction orthogonal to it.
        let dirs: Vec<Vec<Rational>> = on[1..]
            .iter()
            .map(|&i| {
                sub(&pts[i][..d], &pts[on[0]][..d])
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect()
            })
            .collect();
        let t = orthogonal_direction(&dirs, d);
        let base = &pts[on[0]];
        let lambda_for = |sign: i32| -> Option<Rational> {
            (0..pts.len())
                .filter_map(|q| {
                    let g: Rational = (0..d)
                        .map(|j| &t[j] * Rational::from_integer(&pts[q][j] - &base[j]))
                        .sum::<Rational>()
                        * Rational::from_integer(sign.into());
                    if !g.is_negative() {
                        return None;
                    }
                    let f = Rational::from_integer(dot(&scaled, &pts[q]) - &min);
                    Some(f / -g)
                })
                .min()
        };
        let (sign, lambda) = match lambda_for(1) {
            Some(l) => (1, l),
            None => (-1, lambda_for(-1).expect("points span the horizontal space")),
        };
        n = scaled
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let mut v = Rational::from_integer(x.clone());
                if j < d {
                    v += &lambda * &t[j] * Rational::from_integer(sign.into());
                }
                v
            })
            .collect();
    }
}

/// A nonzero vector of `R^d` orthogonal to every row, which must not span.
fn orthogonal_direction(rows: &[Vec<Rational>], d: usize) -> Vec<Rational> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let dotq = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            let c = dotq(&v, b) / dotq(b, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= &c * y);
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    for j in 0..d {
        let mut v: Vec<Rational> = (0..d).map(|i| Rational::from_integer(BigInt::from(u8::from(i == j)))).collect();
        for b in &basis {
            let c = dotq(&v, b) / dotq(b, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= &c * y);
        }
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
    unreachable!("rows span the whole space")
}

/// Rotates the hyperplane of `face` about `ridge` until it meets another
/// point. Returns the new face if it is a lower one.
fn pivot(pts: &[Vec<BigInt>], face: &[usize], ridge: &[usize], apex: usize) -> Option<Vec<usize>> {
    let m = pts[0].len();
    let mut basis = EchelonBasis::default();
    let r0 = &pts[ridge[0]];
    let mut frame: Vec<Vec<BigInt>> = Vec::new();
    for &r in &ridge[1..] {
        let dir = sub(&pts[r], r0);
        if basis.insert(&dir) {
            frame.push(dir);
        }
    }
    debug_assert_eq!(frame.len(), m - 2);
    let face_dirs: Vec<Vec<BigInt>> = face[1..].iter().map(|&i| sub(&pts[i], &pts[face[0]])).collect();
    let mut face_frame = EchelonBasis::default();
    for dir in &face_dirs {
        face_frame.insert(dir);
    }
    let plane_through = |q: usize| -> Vec<BigInt> {
        let mut rows = frame.clone();
        rows.push(sub(&pts[q], r0));
        let mut nrm = normal(&rows);
        if dot(&nrm, &sub(&pts[apex], r0)).is_negative() {
            nrm.iter_mut().for_each(|x| *x = -&*x);
        }
        nrm
    };
    let mut current: Option<Vec<BigInt>> = None;
    for q in 0..pts.len() {
        if face_frame.reduce(&sub(&pts[q], &pts[face[0]])).is_none() {
            continue;
        }
        let replace = match &current {
            None => true,
            Some(nrm) => dot(nrm, &sub(&pts[q], r0)).is_negative(),
        };
        if replace {
            current = Some(plane_through(q));
        }
    }
    let nrm = current?;
    if !nrm[m - 1].is_positive() {
        return None;
    }
    let mut on = Vec::new();
    for (q, p) in pts.iter().enumerate() {
        let s = dot(&nrm, &sub(p, r0));
        debug_assert!(!s.is_negative(), "wrapping left a point below");
        if s.is_zero() {
            on.push(q);
        }
    }
    Some(on)
}

/// Triangulates the polytope on `ids` (full-dimensional in the coordinates of
/// `pts`) by fanning from its smallest vertex over the triangulated facets
/// that avoid it.
fn fan(pts: &[Vec<BigInt>], ids: &[usize]) -> Vec<Vec<usize>> {
    let dim = pts[ids[0]].len();
    if ids.len() == dim + 1 {
        return vec![ids.to_vec()];
    }
    let apex = *ids.iter().min().expect("non-empty");
    if dim == 1 {
        let far = *ids
            .iter()
            .max_by(|&&a, &&b| (&pts[a][0] - &pts[apex][0]).abs().cmp(&(&pts[b][0] - &pts[apex][0]).abs()))
            .expect("non-empty");
        return vec![vec![apex, far]];
    }
    let mut out = Vec::new();
    for f in facets(pts, ids) {
        if f.members.contains(&apex) {
            continue;
        }
        let axis = drop_axis_for(&f.normal);
        let lower: Vec<Vec<BigInt>> = pts.iter().map(|p| without_axis(p, axis)).collect();
        for mut s in fan(&lower, &f.members) {
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// Outcome of [`mosaics_equal`]; `report` names the first differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub report: String,
}

type CellKey = Vec<CombinatorialVertex>;

/// Cells as vertex sets: the explicit cells, or the triangulation merged by
/// grouping simplices of one rhomboid.
fn canonical_cells(m: &Mosaic) -> (Option<BTreeSet<CellKey>>, Option<BTreeSet<CellKey>>) {
    let explicit = (!m.cells.is_empty() || m.triangulation.is_none())
        .then(|| m.cells.iter().map(|c| c.vertices()).collect());
    let merged = m.triangulation.as_ref().map(|tri| {
        let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), BTreeSet<usize>> = BTreeMap::new();
        for s in tri {
            let verts: Vec<&CombinatorialVertex> = s.iter().map(|&i| &m.vertices[i]).collect();
            let mut common: BTreeSet<u32> = verts[0].members().iter().copied().collect();
            let mut union = BTreeSet::new();
            for v in &verts {
                let set: BTreeSet<u32> = v.members().iter().copied().collect();
                common = &common & &set;
                union.extend(set);
            }
            let key = (common.iter().copied().collect(), union.difference(&common).copied().collect());
            groups.entry(key).or_default().extend(s.iter().copied());
        }
        groups
            .into_values()
            .map(|g| g.into_iter().map(|i| m.vertices[i].clone()).sorted().collect())
            .collect()
    });
    (explicit, merged)
}

/// Compares vertex sets exactly and cell sets after canonicalization.
pub fn mosaics_equal(x: &Mosaic, y: &Mosaic) -> Comparison {
    let mut report = Vec::new();
    if x.order != y.order {
        report.push(format!("orders differ: {} vs {}", x.order, y.order));
    }
    let vx: BTreeSet<&CombinatorialVertex> = x.vertices.iter().collect();
    let vy: BTreeSet<&CombinatorialVertex> = y.vertices.iter().collect();
    if let Some(v) = vx.difference(&vy).next() {
        report.push(format!("vertex {v:?} only in the first mosaic"));
    }
    if let Some(v) = vy.difference(&vx).next() {
        report.push(format!("vertex {v:?} only in the second mosaic"));
    }

    let mut sides = Vec::new();
    for (name, m) in [("first", x), ("second", y)] {
        let (explicit, merged) = canonical_cells(m);
        if let (Some(e), Some(t)) = (&explicit, &merged) {
            if e != t {
                report.push(format!("{name} mosaic: cells disagree with its triangulation"));
            }
        }
        sides.push(explicit.or(merged).unwrap_or_default());
    }
    if let Some(c) = sides[0].difference(&sides[1]).next() {
        report.push(format!("cell {c:?} only in the first mosaic"));
    }
    if let Some(c) = sides[1].difference(&sides[0]).next() {
        report.push(format!("cell {c:?} only in the second mosaic"));
    }
    if !report.is_empty() {
        report.push(format!(
            "sizes: {} vertices / {} cells vs {} vertices / {} cells",
            x.vertices.len(),
            sides[0].len(),
            y.vertices.len(),
            sides[1].len()
        ));
    }
    Comparison {
        equal: report.is_empty(),
        report: report.join("\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio;

    fn pts(rows: &[&[i64]]) -> PointSet {
        PointSet::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
    }

    fn cv(m: &[u32]) -> CombinatorialVertex {
        CombinatorialVertex::new(m.to_vec())
    }

    #[test]
    fn triangle_second_order() {
        let m = brute_orderk(&pts(&[&[0, 0], &[4, 0], &[1, 3]]), 2).unwrap();
        assert_eq!(m.vertices, vec![cv(&[0, 1]), cv(&[0, 2]), cv(&[1, 2])]);
        assert_eq!(m.cells.len(), 1);
        assert_eq!(m.triangulation, Some(vec![vec![0, 1, 2]]));
    }

    #[test]
    fn full_order_is_one_vertex() {
        let m = brute_orderk(&pts(&[&[0, 0], &[4, 0], &[1, 3]]), 3).unwrap();
        assert_eq!(m.vertices, vec![cv(&[0, 1, 2])]);
        assert!(m.cells.is_empty());
    }

    #[test]
    fn octahedral_cells_are_fanned() {
        // five points in R^3; Del_2 contains generation-2 octahedra
        let a = PointSet::new(vec![
            Point::from_ints(&[0, 0, 0]),
            Point::from_ints(&[10, 1, 0]),
            Point::from_ints(&[1, 11, 2]),
            Point::from_ints(&[2, 3, 12]),
            Point::from_ints(&[7, 8, 9]),
        ])
        .unwrap();
        let m = brute_orderk(&a, 2).unwrap();
        assert!(m.cells.iter().any(|c| c.generation() == 2 && c.vertices().len() == 6));
        let cmp = mosaics_equal(&m, &m);
        assert!(cmp.equal, "{}", cmp.report);
        // the triangulation alone merges back into the same cells
        let mut tri_only = m.clone();
        tri_only.cells.clear();
        assert!(mosaics_equal(&tri_only, &m).equal);
    }

    #[test]
    fn tiling_of_general_simplex_configurations() {
        let a = pts(&[&[0, 0], &[4, 0], &[1, 3]]);
        let t = brute_tiling(&a).unwrap();
        assert_eq!(t.of_dimension(3).len(), 1);
        assert_eq!(t.len(), 27);
        let b = pts(&[&[0, 0], &[4, 0], &[1, 3], &[3, 5]]);
        assert_eq!(brute_tiling(&b).unwrap().of_dimension(3).len(), 4);
        let square = pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        assert!(matches!(brute_tiling(&square), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn size_guard() {
        let many = PointSet::new((0..15).map(|i| Point::new(vec![ratio(i, 1), ratio(i * i, 1)])).collect()).unwrap();
        assert_eq!(brute_tiling(&many).unwrap_err(), Error::SizeGuard { n: 15, limit: 14 });
        assert!(Oracle::unguarded().orderk(&many, 1).is_ok());
    }

    #[test]
    fn comparison_reports_differences() {
        let a = pts(&[&[0, 0], &[4, 0], &[1, 3], &[3, 5]]);
        let m = brute_orderk(&a, 1).unwrap();
        let mut other = m.clone();
        other.cells.pop();
        other.triangulation = None;
        let cmp = mosaics_equal(&m, &other);
        assert!(!cmp.equal);
        assert!(cmp.report.contains("only in the first"));
        let mut permuted = m.clone();
        permuted.cells.reverse();
        assert!(mosaics_equal(&m, &permuted).equal);
    }

    #[test]
    fn classic_alpha_of_a_triangle() {
        let a = pts(&[&[0, 0], &[10, 0], &[5, 1]]);
        let v = Oracle::default().classic_alpha(&a).unwrap();
        assert_eq!(v.len(), 7);
        // the long edge is attached to the obtuse triangle
        assert_eq!(v[&vec![0, 1]], v[&vec![0, 1, 2]]);
        assert_eq!(v[&vec![0]], Extended::Finite(Rational::zero()));
    }
}
