//! Weighted first-order Delaunay mosaics as the lower convex hull of lifted
//! weighted points.
//!
//! The hull is built by randomized incremental insertion (beneath-beyond with
//! outside sets) over exact integer coordinates. Coplanar facets are merged
//! back into their faces afterwards, and every non-simplicial lower face is
//! re-triangulated by pulling from its smallest-index vertex, so the output
//! does not depend on the insertion order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::linalg::{self, dot, sub, EchelonBasis};
use crate::geom::polytope::{self, drop_axis_for, without_axis};
use crate::geom::wide::{fits_wide, max_bits, to_wide, Coords, ExactInt};
use smallvec::{smallvec, SmallVec};
use crate::geom::{lift_weighted, Point, Rational};
use ethnum::I256;

/// A point of `R^d` with a weight; its lift has height `|location|^2 - weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub location: Point,
    pub weight: Rational,
}

/// A simplex given by sorted indices into the caller's point list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertex_ids: Vec<u32>,
}

impl Simplex {
    pub fn new(mut vertex_ids: Vec<u32>) -> Self {
        vertex_ids.sort_unstable();
        Simplex { vertex_ids }
    }

    pub fn vertex_ids(&self) -> &[u32] {
        &self.vertex_ids
    }
}

/// One lower face of the hull: its vertices and their triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerFace {
    /// Extreme points of the face, sorted.
    pub vertices: Vec<u32>,
    pub simplices: Vec<Simplex>,
}

/// Triangulated lower envelope of points in `R^{d+1}`.
pub fn lower_hull(lifted: &[Vec<Rational>]) -> Result<Vec<Simplex>> {
    Ok(flatten(lower_faces(lifted)?))
}

/// Lower faces of the convex hull of points in `R^{d+1}`, each with its
/// deterministic triangulation.
pub fn lower_faces(lifted: &[Vec<Rational>]) -> Result<Vec<LowerFace>> {
    let Some(first) = lifted.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    if dim < 2 {
        return Err(Error::Precondition("lifted points need at least two coordinates".into()));
    }
    if let Some(p) = lifted.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    lower_faces_integer(linalg::to_integer_coords(lifted))
}

/// The weighted Delaunay mosaic, triangulated.
pub fn weighted_delaunay(pts: &[WeightedPoint]) -> Result<Vec<Simplex>> {
    Ok(flatten(weighted_delaunay_faces(pts)?))
}

/// The weighted Delaunay mosaic as faces (cells) with their triangulations.
/// Hidden points appear in no face.
pub fn weighted_delaunay_faces(pts: &[WeightedPoint]) -> Result<Vec<LowerFace>> {
    let Some(first) = pts.first() else {
        return Err(Error::Precondition("weighted Delaunay of no points".into()));
    };
    let d = first.location.dim();
    if let Some(p) = pts.iter().find(|p| p.location.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.location.dim(),
        });
    }
    let lifted: Vec<Vec<Rational>> = pts
        .iter()
        .map(|p| lift_weighted(&p.location, &p.weight).coords())
        .collect();
    lower_faces(&lifted)
}

/// Indices of the vertices of the (triangulated) convex hull boundary of
/// full-dimensional points in `R^m`.
pub fn convex_hull_vertices(points: &[Vec<Rational>]) -> Result<Vec<usize>> {
    check_distinct(points)?;
    let pts = linalg::to_integer_coords(points);
    let mut hull: Hull<BigInt> = match Hull::build(pts) {
        Built::Full(h) => h,
        Built::Flat { .. } => return Err(Error::AffinelyDependent),
    };
    hull.run();
    let mut v: Vec<usize> = hull
        .facets
        .iter()
        .filter(|f| f.alive)
        .flat_map(|f| f.verts.iter().map(|&x| x as usize))
        .collect();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Exhaustive lower hull: every `(d+1)`-subset whose non-vertical hyperplane
/// has all points on or above it. Returns the member sets of the lower faces
/// (all points on each supporting hyperplane). Cost `O(n^{d+2})`; small inputs only.
pub fn brute_lower_faces(lifted: &[Vec<Rational>]) -> Vec<Vec<u32>> {
    use itertools::Itertools;
    let pts = linalg::to_integer_coords(lifted);
    let Some(first) = pts.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let mut faces = std::collections::BTreeSet::new();
    for subset in (0..pts.len()).combinations(dim) {
        let base = &pts[subset[0]];
        let dirs: Vec<Vec<BigInt>> = subset[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        let mut n = linalg::normal(&dirs);
        if n[dim - 1].is_zero() {
            continue;
        }
        if n[dim - 1].is_positive() {
            n.iter_mut().for_each(|x| *x = -&*x);
        }
        let mut members = Vec::new();
        let mut ok = true;
        for (q, p) in pts.iter().enumerate() {
            let s = dot(&n, &sub(p, base));
            if s.is_positive() {
                ok = false;
                break;
            }
            if s.is_zero() {
                members.push(q as u32);
            }
        }
        if ok {
            faces.insert(members);
        }
    }
    faces.into_iter().collect()
}

fn flatten(faces: Vec<LowerFace>) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = faces.into_iter().flat_map(|f| f.simplices).collect();
    out.sort();
    out
}

fn check_distinct<T: Ord>(points: &[Vec<T>]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(Error::DuplicatePoint {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
    }
    Ok(())
}

/// Lower faces of integer points, picking fixed-width arithmetic whenever
/// the coordinate bound allows it.
pub fn lower_faces_integer(pts: Vec<Vec<BigInt>>) -> Result<Vec<LowerFace>> {
    let Some(first) = pts.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    if fits_wide(dim, max_bits(pts.iter().flatten())) {
        let wide: Vec<Vec<I256>> = pts
            .iter()
            .map(|p| p.iter().map(|x| to_wide(x).expect("bounded")).collect())
            .collect();
        lower_faces_generic(wide)
    } else {
        lower_faces_generic(pts)
    }
}

pub(crate) fn lower_faces_generic<T: ExactInt>(pts: Vec<Vec<T>>) -> Result<Vec<LowerFace>> {
    let (sets, pts) = lower_face_sets(pts)?;
    let mut faces: Vec<LowerFace> = sets
        .iter()
        .map(|members| {
            let ids: Vec<usize> = members.iter().map(|&x| x as usize).collect();
            triangulate_face(&pts, &ids)
        })
        .collect();
    faces.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(faces)
}

/// Lower faces as the sorted sets of points on their supporting hyperplanes,
/// without triangulating. The points are handed back for later use.
pub(crate) fn lower_face_sets<T: ExactInt>(pts: Vec<Vec<T>>) -> Result<(Vec<Vec<u32>>, Vec<Vec<T>>)> {
    check_distinct(&pts)?;
    let dim = pts[0].len();
    let n = pts.len();
    let hull = match Hull::build(pts) {
        Built::Full(mut h) => {
            h.run();
            h
        }
        Built::Flat { pts, basis_ids } => {
            if n < dim {
                // Fewer than d+1 points carry no d-cell.
                return Ok((Vec::new(), pts));
            }
            if basis_ids.len() < dim {
                return Err(Error::VerticalDegenerate);
            }
            let base = &pts[basis_ids[0]];
            let dirs: Vec<Vec<T>> = basis_ids[1..].iter().map(|&i| gsub(&pts[i], base)).collect();
            let normal = T::normal(&dirs);
            if normal[dim - 1].signum() == 0 {
                return Err(Error::VerticalDegenerate);
            }
            return Ok((vec![(0..n as u32).collect()], pts));
        }
    };

    // Coplanar lower facets are merged through shared ridges: a neighbor is
    // coplanar iff its opposite vertex lies on this facet's hyperplane.
    let lower = |f: usize| hull.facets[f].alive && hull.facets[f].normal[dim - 1].signum() < 0;
    let mut parent: Vec<usize> = (0..hull.facets.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for f in (0..hull.facets.len()).filter(|&f| lower(f)) {
        let facet = &hull.facets[f];
        for &g in &facet.neighbors {
            if g < f || !lower(g) {
                continue;
            }
            let other = &hull.facets[g];
            let slot = other.neighbors.iter().position(|&x| x == f).expect("adjacency is symmetric");
            let apex = &hull.pts[other.verts[slot] as usize];
            if gdot(&facet.normal, apex) == facet.offset {
                let (a, b) = (find(&mut parent, f), find(&mut parent, g));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for f in (0..hull.facets.len()).filter(|&f| lower(f)) {
        let root = find(&mut parent, f);
        groups.entry(root).or_default().extend(hull.facets[f].verts.iter().copied());
    }
    let mut sets: Vec<Vec<u32>> = groups
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            members.dedup();
            members
        })
        .collect();
    sets.sort();
    Ok((sets, hull.pts))
}

fn gsub<T: ExactInt>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn gdot<T: ExactInt>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Triangulates a non-vertical face by pulling, after projecting out the
/// vertical axis.
pub(crate) fn triangulate_face<T: ExactInt>(pts: &[Vec<T>], ids: &[usize]) -> LowerFace {
    let dim = pts[0].len();
    if ids.len() == dim {
        let vertices: Vec<u32> = ids.iter().map(|&i| i as u32).collect();
        return LowerFace {
            simplices: vec![Simplex::new(vertices.clone())],
            vertices,
        };
    }
    let proj: Vec<Vec<BigInt>> = ids
        .iter()
        .map(|&i| pts[i][..dim - 1].iter().map(ExactInt::to_big).collect())
        .collect();
    let local: Vec<usize> = (0..ids.len()).collect();
    let to_global = |v: Vec<usize>| -> Vec<u32> {
        let mut g: Vec<u32> = v.into_iter().map(|i| ids[i] as u32).collect();
        g.sort_unstable();
        g
    };
    // Local indices follow `ids`, which are sorted, so local order is global order.
    let vertices = to_global(extreme_points(&proj, &local));
    let mut simplices: Vec<Simplex> = pulling_triangulation(&proj, &local)
        .into_iter()
        .map(|s| Simplex {
            vertex_ids: to_global(s),
        })
        .collect();
    simplices.sort();
    LowerFace {
        vertices,
        simplices,
    }
}

/// Restricts `ids` to the hyperplane of `facet` and re-expresses them in one
/// dimension less. Returns local coordinates and the local-to-caller index map.
fn facet_subproblem(points: &[Vec<BigInt>], facet: &polytope::Facet) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let axis = drop_axis_for(&facet.normal);
    let coords = facet
        .members
        .iter()
        .map(|&i| without_axis(&points[i], axis))
        .collect();
    (coords, facet.members.clone())
}

/// Extreme points among `ids`, which span the coordinate space.
pub fn extreme_points(points: &[Vec<BigInt>], ids: &[usize]) -> Vec<usize> {
    let m = points[ids[0]].len();
    if ids.len() == m + 1 {
        return ids.to_vec();
    }
    let facets = polytope::facets(points, ids);
    if m == 1 {
        return facets.into_iter().flat_map(|f| f.members).collect();
    }
    let mut out: Vec<usize> = facets
        .iter()
        .flat_map(|f| {
            let (coords, map) = facet_subproblem(points, f);
            let local: Vec<usize> = (0..map.len()).collect();
            extreme_points(&coords, &local)
                .into_iter()
                .map(move |i| map[i])
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Pulling triangulation: cone from the smallest extreme point over the
/// recursively pulled facets that do not contain it.
pub fn pulling_triangulation(points: &[Vec<BigInt>], ids: &[usize]) -> Vec<Vec<usize>> {
    let m = points[ids[0]].len();
    if ids.len() == m + 1 {
        return vec![ids.to_vec()];
    }
    let ext = extreme_points(points, ids);
    if ext.len() == m + 1 {
        return vec![ext];
    }
    let apex = *ext.iter().min().expect("non-empty polytope");
    let mut out = Vec::new();
    for f in polytope::facets(points, ids) {
        if f.members.binary_search(&apex).is_ok() || f.members.contains(&apex) {
            continue;
        }
        let (coords, map) = facet_subproblem(points, &f);
        let local: Vec<usize> = (0..map.len()).collect();
        let sub_simplices = if m == 1 {
            vec![vec![0]]
        } else {
            pulling_triangulation(&coords, &local)
        };
        for s in sub_simplices {
            let mut simplex: Vec<usize> = s.into_iter().map(|i| map[i]).collect();
            simplex.push(apex);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    out
}

enum Built<T> {
    Full(Hull<T>),
    Flat {
        pts: Vec<Vec<T>>,
        basis_ids: Vec<usize>,
    },
}

#[derive(Debug)]
struct Facet<T> {
    verts: SmallVec<[u32; 6]>,
    /// `neighbors[i]` lies across the ridge that omits `verts[i]`.
    neighbors: SmallVec<[usize; 6]>,
    /// Outward: `normal · x - offset > 0` strictly beyond the facet.
    normal: Coords<T>,
    offset: T,
    outside: Vec<u32>,
    alive: bool,
}

struct Hull<T> {
    dim: usize,
    pts: Vec<Vec<T>>,
    facets: Vec<Facet<T>>,
    /// Sum of the initial simplex vertices: `interior / (dim + 1)` is inside.
    interior: Vec<T>,
    order: Vec<u32>,
    assigned: Vec<Option<usize>>,
    mark: Vec<u32>,
    epoch: u32,
}

const VISIBLE: u32 = 1;
const HIDDEN: u32 = 2;

impl<T: ExactInt> Hull<T> {
    fn build(pts: Vec<Vec<T>>) -> Built<T> {
        let dim = pts[0].len();
        let mut order: Vec<u32> = (0..pts.len() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(input_seed(&pts)));

        // Independence is decided over big integers; this runs once per hull.
        let mut basis = EchelonBasis::default();
        let first = order[0] as usize;
        let first_big: Vec<BigInt> = pts[first].iter().map(ExactInt::to_big).collect();
        let mut simplex = vec![first];
        for &i in &order[1..] {
            if simplex.len() == dim + 1 {
                break;
            }
            let p: Vec<BigInt> = pts[i as usize].iter().map(ExactInt::to_big).collect();
            if basis.insert(&sub(&p, &first_big)) {
                simplex.push(i as usize);
            }
        }
        if simplex.len() < dim + 1 {
            return Built::Flat {
                pts,
                basis_ids: simplex,
            };
        }

        let interior = (0..dim)
            .map(|j| simplex.iter().fold(T::zero(), |acc, &i| acc.add(&pts[i][j])))
            .collect();
        let mut hull = Hull {
            dim,
            facets: Vec::new(),
            interior,
            assigned: vec![None; pts.len()],
            mark: Vec::new(),
            epoch: 0,
            order,
            pts,
        };
        // Facet i omits simplex vertex i; facets i and j meet in the ridge
        // omitting both, so facet i's neighbor across vertex j is facet j.
        for omit in 0..=dim {
            let verts: SmallVec<[u32; 6]> = simplex
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != omit)
                .map(|(_, &v)| v as u32)
                .collect();
            let neighbors = (0..=dim).filter(|&k| k != omit).collect();
            let (normal, offset) = hull.plane(&verts);
            hull.facets.push(Facet {
                verts,
                neighbors,
                normal,
                offset,
                outside: Vec::new(),
                alive: true,
            });
        }
        let mut in_simplex = vec![false; hull.pts.len()];
        simplex.iter().for_each(|&i| in_simplex[i] = true);
        let fresh: Vec<usize> = (0..=dim).collect();
        let candidates: Vec<u32> = (0..hull.pts.len() as u32)
            .filter(|&i| !in_simplex[i as usize])
            .collect();
        hull.distribute(candidates, &fresh);
        Built::Full(hull)
    }

    fn run(&mut self) {
        for k in 0..self.order.len() {
            let p = self.order[k];
            if let Some(f) = self.assigned[p as usize] {
                self.insert(p, f);
            }
        }
    }

    fn beyond(&self, f: usize, p: u32) -> bool {
        let facet = &self.facets[f];
        gdot(&facet.normal, &self.pts[p as usize]).sub(&facet.offset).positive()
    }

    /// Outward hyperplane through `verts`.
    fn plane(&self, verts: &[u32]) -> (Coords<T>, T) {
        let base = &self.pts[verts[0] as usize];
        let through: SmallVec<[&[T]; 6]> = verts.iter().map(|&v| self.pts[v as usize].as_slice()).collect();
        let mut normal = T::normal_through(&through);
        let mut offset = gdot(&normal, base);
        let scaled = (0..=self.dim).fold(T::zero(), |acc, _| acc.add(&offset));
        let inside = gdot(&normal, &self.interior).sub(&scaled);
        debug_assert!(inside.signum() != 0, "interior point on a facet hyperplane");
        if inside.positive() {
            normal = normal.iter().map(ExactInt::neg).collect();
            offset = offset.neg();
        }
        (normal, offset)
    }

    /// Assigns each candidate to the first listed facet it lies strictly beyond.
    fn distribute(&mut self, candidates: Vec<u32>, facets: &[usize]) {
        for q in candidates {
            let target = facets.iter().copied().find(|&f| self.beyond(f, q));
            self.assigned[q as usize] = target;
            if let Some(f) = target {
                self.facets[f].outside.push(q);
            }
        }
    }

    fn insert(&mut self, p: u32, start: usize) {
        self.epoch += 2;
        let (vis, hid) = (self.epoch + VISIBLE, self.epoch + HIDDEN);
        if self.mark.len() < self.facets.len() {
            self.mark.resize(self.facets.len(), 0);
        }

        let mut visible = vec![start];
        self.mark[start] = vis;
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for i in 0..self.dim {
                let g = self.facets[f].neighbors[i];
                if self.mark[g] != vis && self.mark[g] != hid {
                    self.mark[g] = if self.beyond(g, p) { vis } else { hid };
                    if self.mark[g] == vis {
                        visible.push(g);
                    }
                }
                if self.mark[g] == hid {
                    horizon.push((f, i, g));
                }
            }
        }

        let first_new = self.facets.len();
        // Ridges of the new cone still waiting for their second facet; few
        // enough that a linear scan beats hashing.
        let mut ridges: Vec<(SmallVec<[u32; 6]>, usize, usize)> = Vec::new();
        for &(f, i, g) in &horizon {
            let mut verts = self.facets[f].verts.clone();
            verts[i] = p;
            let id = self.facets.len();
            let mut neighbors: SmallVec<[usize; 6]> = smallvec![usize::MAX; self.dim];
            neighbors[i] = g;
            let slot = self.facets[g]
                .neighbors
                .iter()
                .position(|&x| x == f)
                .expect("horizon neighbor links back");
            self.facets[g].neighbors[slot] = id;
            for j in (0..self.dim).filter(|&j| j != i) {
                let mut key: SmallVec<[u32; 6]> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                match ridges.iter().position(|r| r.0 == key) {
                    Some(pos) => {
                        let (_, other, oj) = ridges.swap_remove(pos);
                        neighbors[j] = other;
                        self.facets[other].neighbors[oj] = id;
                    }
                    None => ridges.push((key, id, j)),
                }
            }
            let (normal, offset) = self.plane(&verts);
            self.facets.push(Facet {
                verts,
                neighbors,
                normal,
                offset,
                outside: Vec::new(),
                alive: true,
            });
        }
        debug_assert!(ridges.is_empty(), "unmatched ridges around the new cone");
        self.mark.resize(self.facets.len(), 0);

        let mut orphans = Vec::new();
        for &f in &visible {
            self.facets[f].alive = false;
            self.facets[f].normal = Coords::new();
            orphans.append(&mut self.facets[f].outside);
        }
        orphans.retain(|&q| q != p);
        self.assigned[p as usize] = None;
        let fresh: Vec<usize> = (first_new..self.facets.len()).collect();
        self.distribute(orphans, &fresh);
    }
}

/// Deterministic shuffle seed derived from the input coordinates (FNV-1a).
fn input_seed<T: ExactInt>(pts: &[Vec<T>]) -> u64 {
    pts.iter().flatten().fold(0xcbf29ce484222325, |h, x| x.fnv(h))
}
