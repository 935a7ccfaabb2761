//! Order-k Delaunay mosaics by slicing rhomboids discovered from
//! first-generation cells.
//!
//! Order `j` is computed as the weighted Delaunay mosaic of the vertices known
//! for `Del_j`. Its first-generation cells are recognized combinatorially and
//! each names a top-dimensional rhomboid, whose slices supply the vertices and
//! higher-generation cells of the orders above.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{squared_norm, Point, PointSet, Rational};
use crate::geom::linalg::to_integer_coords;
use crate::geom::wide::{fits_wide, max_bits, to_wide, ExactInt};
use crate::hull::{lower_face_sets, triangulate_face, Simplex};
use ethnum::I256;

/// A set of input indices `Q`, kept sorted. Its depth is `|Q|`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinatorialVertex {
    members: Vec<u32>,
}

impl CombinatorialVertex {
    pub fn new(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        CombinatorialVertex { members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn depth(&self) -> usize {
        self.members.len()
    }

    pub fn into_members(self) -> Vec<u32> {
        self.members
    }
}

impl fmt::Debug for CombinatorialVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}

/// A rhomboid, given by the disjoint index sets `a_in` and `a_on`; every other
/// input point is outside.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rhomboid {
    a_in: Vec<u32>,
    a_on: Vec<u32>,
}

impl Rhomboid {
    pub fn new(a_in: Vec<u32>, a_on: Vec<u32>) -> Result<Self> {
        let r = Rhomboid::from_sets(a_in, a_on);
        if r.a_in.iter().any(|x| r.a_on.binary_search(x).is_ok()) {
            return Err(Error::Precondition("a_in and a_on must be disjoint".into()));
        }
        Ok(r)
    }

    /// Sorts both sets; disjointness is the caller's responsibility.
    pub(crate) fn from_sets(mut a_in: Vec<u32>, mut a_on: Vec<u32>) -> Self {
        a_in.sort_unstable();
        a_in.dedup();
        a_on.sort_unstable();
        a_on.dedup();
        Rhomboid { a_in, a_on }
    }

    pub fn a_in(&self) -> &[u32] {
        &self.a_in
    }

    pub fn a_on(&self) -> &[u32] {
        &self.a_on
    }

    pub fn dimension(&self) -> usize {
        self.a_on.len()
    }

    /// Depth of the anchor vertex `a_in`.
    pub fn anchor_depth(&self) -> usize {
        self.a_in.len()
    }

    pub fn anchor(&self) -> CombinatorialVertex {
        CombinatorialVertex {
            members: self.a_in.clone(),
        }
    }

    /// The combinatorial vertices `a_in ∪ Q` with `Q ⊆ a_on`, `|Q| = g`.
    pub fn slice_vertices(&self, g: usize) -> Vec<CombinatorialVertex> {
        self.a_on
            .iter()
            .copied()
            .combinations(g)
            .map(|q| {
                let mut m = Vec::with_capacity(self.a_in.len() + g);
                m.extend_from_slice(&self.a_in);
                m.extend(q);
                CombinatorialVertex::new(m)
            })
            .collect()
    }
}

impl fmt::Debug for Rhomboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R(in {:?}, on {:?})", self.a_in, self.a_on)
    }
}

/// The slice of a rhomboid at generation `g`: a cell of `Del_{|a_in| + g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    rhomboid: Rhomboid,
    generation: usize,
}

impl Cell {
    pub fn rhomboid(&self) -> &Rhomboid {
        &self.rhomboid
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn order(&self) -> usize {
        self.rhomboid.anchor_depth() + self.generation
    }

    pub fn anchor(&self) -> CombinatorialVertex {
        self.rhomboid.anchor()
    }

    pub fn vertices(&self) -> Vec<CombinatorialVertex> {
        self.rhomboid.slice_vertices(self.generation)
    }

    /// Recovers the cell from its vertex set: `a_in` is the common
    /// intersection and `a_on` the rest of the union. Fails unless the set is
    /// exactly the corresponding slice.
    pub fn from_vertices(vertices: &[CombinatorialVertex]) -> Result<Cell> {
        let (first, rest) = vertices.split_first().ok_or(Error::EmptyVertex)?;
        let depth = first.depth();
        if rest.iter().any(|v| v.depth() != depth) {
            return Err(Error::Precondition("cell vertices of mixed depth".into()));
        }
        let mut inter = first.members.clone();
        let mut union = first.members.clone();
        for v in rest {
            inter.retain(|x| v.members.binary_search(x).is_ok());
            union.extend_from_slice(&v.members);
        }
        union.sort_unstable();
        union.dedup();
        let a_on: Vec<u32> = union.iter().copied().filter(|x| inter.binary_search(x).is_err()).collect();
        let generation = depth - inter.len();
        let cell = Cell {
            rhomboid: Rhomboid { a_in: inter, a_on },
            generation,
        };
        let mut given: Vec<&CombinatorialVertex> = vertices.iter().collect();
        given.sort();
        given.dedup();
        let expected = cell.vertices();
        if given.len() != expected.len() || given.into_iter().ne(expected.iter()) {
            return Err(Error::Degenerate { subset: union });
        }
        Ok(cell)
    }
}

/// The order-k Delaunay mosaic: vertices of depth k and its d-cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mosaic {
    pub order: usize,
    /// Sorted by member tuple.
    pub vertices: Vec<CombinatorialVertex>,
    /// Sorted by (generation, anchor, vertex list).
    pub cells: Vec<Cell>,
    /// A triangulation of the cells, as indices into `vertices`.
    pub triangulation: Option<Vec<Vec<usize>>>,
}

impl Mosaic {
    pub fn new(order: usize, vertices: BTreeSet<CombinatorialVertex>, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut keyed: Vec<((usize, Vec<u32>, Vec<CombinatorialVertex>), Cell)> = cells
            .into_iter()
            .map(|c| ((c.generation, c.rhomboid.a_in.clone(), c.vertices()), c))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        Mosaic {
            order,
            vertices: vertices.into_iter().collect(),
            cells: keyed.into_iter().map(|(_, c)| c).collect(),
            triangulation: None,
        }
    }

    pub fn vertex_index(&self, v: &CombinatorialVertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Positions of the cell's vertices in the vertex table.
    pub fn vertex_refs(&self, cell: &Cell) -> Vec<usize> {
        cell.vertices()
            .iter()
            .map(|v| self.vertex_index(v).expect("cell vertex belongs to the mosaic"))
            .collect()
    }

    pub fn generation_counts(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.cells {
            *h.entry(c.generation).or_default() += 1;
        }
        h
    }

    pub fn first_generation(&self) -> impl Iterator<Item = (usize, &Cell)> {
        self.cells.iter().enumerate().filter(|(_, c)| c.generation == 1)
    }
}

/// Barycenter of the member points.
pub fn vertex_location(v: &CombinatorialVertex, points: &PointSet) -> Result<Point> {
    if v.members.is_empty() {
        return Err(Error::EmptyVertex);
    }
    let j = Rational::from_integer(BigInt::from(v.depth()));
    let mut sum = vec![Rational::from_integer(0.into()); points.dim()];
    for &m in &v.members {
        for (s, x) in sum.iter_mut().zip(points.point(m as usize).coords()) {
            *s += x;
        }
    }
    Ok(Point::new(sum.into_iter().map(|s| s / &j).collect()))
}

/// `|barycenter|^2 - mean |a|^2`; never positive.
pub fn vertex_weight(v: &CombinatorialVertex, points: &PointSet) -> Result<Rational> {
    let loc = vertex_location(v, points)?;
    let j = Rational::from_integer(BigInt::from(v.depth()));
    let mean: Rational = v
        .members
        .iter()
        .map(|&m| points.point(m as usize).squared_norm())
        .sum::<Rational>()
        / j;
    Ok(squared_norm(loc.coords()) - mean)
}

pub fn slice_of_rhomboid(rho: &Rhomboid, g: usize) -> Result<Cell> {
    if g > rho.dimension() {
        return Err(Error::OutOfRange {
            what: "generation",
            value: g as i64,
            min: 0,
            max: rho.dimension() as i64,
        });
    }
    Ok(Cell {
        rhomboid: rho.clone(),
        generation: g,
    })
}

fn common_members(simplex: &[CombinatorialVertex]) -> Result<(usize, Vec<u32>)> {
    let (first, rest) = simplex.split_first().ok_or(Error::EmptyVertex)?;
    let j = first.depth();
    if rest.iter().any(|v| v.depth() != j) {
        return Err(Error::Precondition("simplex vertices of mixed depth".into()));
    }
    let mut inter = first.members.clone();
    for v in rest {
        inter.retain(|x| v.members.binary_search(x).is_ok());
    }
    Ok((j, inter))
}

/// A simplex of `Del_j` is first-generation iff its vertices share exactly
/// `j - 1` points.
pub fn is_first_generation(simplex: &[CombinatorialVertex]) -> Result<bool> {
    let (j, inter) = common_members(simplex)?;
    Ok(inter.len() + 1 == j)
}

/// The top-dimensional rhomboid of a first-generation simplex.
pub fn rhomboid_of_first_gen(simplex: &[CombinatorialVertex]) -> Result<Rhomboid> {
    let (j, inter) = common_members(simplex)?;
    if inter.len() + 1 != j {
        return Err(Error::Precondition("simplex is not first-generation".into()));
    }
    let union: BTreeSet<u32> = simplex.iter().flat_map(|v| v.members.iter().copied()).collect();
    let a_on = union.into_iter().filter(|x| inter.binary_search(x).is_err()).collect();
    Ok(Rhomboid::from_sets(inter, a_on))
}

/// Seeded random rational perturbation of every coordinate by at most
/// `magnitude`, on a grid of `magnitude / 10^6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub seed: u64,
    pub magnitude: Rational,
}

impl Perturbation {
    pub fn apply(&self, points: &PointSet) -> Result<PointSet> {
        const STEPS: i64 = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let step = &self.magnitude / Rational::from_integer(STEPS.into());
        let moved = points
            .points()
            .iter()
            .map(|p| {
                Point::new(
                    p.coords()
                        .iter()
                        .map(|x| x + &step * Rational::from_integer(rng.random_range(-STEPS..=STEPS).into()))
                        .collect(),
                )
            })
            .collect();
        PointSet::new(moved)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub perturbation: Option<Perturbation>,
    /// Keep the black box's triangulation of every mosaic.
    pub keep_triangulation: bool,
}

/// Mosaics of orders `1..=K` with the top-dimensional rhomboids they revealed.
#[derive(Debug, Clone)]
pub struct OrderKResult {
    /// The points actually used (perturbed, if requested).
    pub points: PointSet,
    pub perturbed: bool,
    pub mosaics: Vec<Mosaic>,
    /// Top-dimensional rhomboids with anchor depth below K, sorted.
    pub rhomboids: Vec<Rhomboid>,
}

impl OrderKResult {
    pub fn mosaic(&self, k: usize) -> Option<&Mosaic> {
        k.checked_sub(1).and_then(|i| self.mosaics.get(i))
    }
}

pub fn compute_up_to_order(points: &PointSet, max_order: usize) -> Result<OrderKResult> {
    compute_with_options(points, max_order, &Options::default())
}

pub fn compute_with_options(points: &PointSet, max_order: usize, options: &Options) -> Result<OrderKResult> {
    let n = points.len();
    if max_order < 1 || max_order > n {
        return Err(Error::OutOfRange {
            what: "order",
            value: max_order as i64,
            min: 1,
            max: n as i64,
        });
    }
    let points = match &options.perturbation {
        Some(p) => p.apply(points)?,
        None => points.clone(),
    };
    let d = points.dim();
    let lifter = Lifter::new(&points);

    let mut known: Vec<BTreeSet<CombinatorialVertex>> = vec![BTreeSet::new(); max_order + 1];
    let mut predicted: Vec<BTreeSet<Cell>> = vec![BTreeSet::new(); max_order + 1];
    known[1] = (0..n as u32).map(|i| CombinatorialVertex { members: vec![i] }).collect();
    let mut rhomboids = Vec::new();
    let mut mosaics = Vec::with_capacity(max_order);

    for j in 1..=max_order {
        let vertices: Vec<CombinatorialVertex> = std::mem::take(&mut known[j]).into_iter().collect();
        let faces = lifter.faces(&vertices, options.keep_triangulation).map_err(|e| match e {
            Error::DuplicatePoint { first, second } => Error::Degenerate {
                subset: union_of(&[&vertices[first], &vertices[second]]),
            },
            e => e,
        })?;
        let cells: Vec<Cell> = faces
            .sets
            .par_iter()
            .map(|f| classify(f, &vertices, d))
            .collect::<Result<_>>()?;

        let expected = std::mem::take(&mut predicted[j]);
        let mut found_later: BTreeSet<&Cell> = BTreeSet::new();
        for c in &cells {
            if c.generation >= 2 {
                if !expected.contains(c) {
                    return Err(degenerate_cell(c));
                }
                found_later.insert(c);
            }
        }
        if let Some(missing) = expected.iter().find(|c| !found_later.contains(c)) {
            return Err(degenerate_cell(missing));
        }

        for c in cells.iter().filter(|c| c.generation == 1) {
            let rho = &c.rhomboid;
            for g in 2..=d + 1 {
                let order = rho.anchor_depth() + g;
                if order > max_order {
                    break;
                }
                known[order].extend(rho.slice_vertices(g));
                if g <= d {
                    predicted[order].insert(Cell {
                        rhomboid: rho.clone(),
                        generation: g,
                    });
                }
            }
            rhomboids.push(rho.clone());
        }

        let vertex_set: BTreeSet<CombinatorialVertex> = vertices.iter().cloned().collect();
        let mut mosaic = Mosaic::new(j, vertex_set, cells);
        if options.keep_triangulation {
            mosaic.triangulation = Some(
                faces
                    .simplices
                    .iter()
                    .map(|s| {
                        let mut refs: Vec<usize> = s
                            .vertex_ids()
                            .iter()
                            .map(|&i| mosaic.vertex_index(&vertices[i as usize]).expect("known vertex"))
                            .collect();
                        refs.sort_unstable();
                        refs
                    })
                    .sorted()
                    .collect(),
            );
        }
        mosaics.push(mosaic);
    }
    rhomboids.sort();
    rhomboids.dedup();
    let perturbed = options.perturbation.is_some();
    Ok(OrderKResult {
        points,
        perturbed,
        mosaics,
        rhomboids,
    })
}

/// Lifts combinatorial vertices to integer points. The lift of `Q` under
/// `loc`/`wt` is `(sum a, sum |a|^2) / |Q|`; within one order the common
/// factor `1/|Q|` and a positive per-axis scale that clears denominators are
/// dropped, which leaves the lower hull unchanged.
struct Lifter {
    scaled: Vec<Vec<BigInt>>,
    wide: Option<Vec<Vec<I256>>>,
}

impl Lifter {
    fn new(points: &PointSet) -> Self {
        let d = points.dim();
        let mut rows: Vec<Vec<Rational>> = points
            .points()
            .iter()
            .map(|p| {
                let mut r = p.coords().to_vec();
                r.push(p.squared_norm());
                r
            })
            .collect();
        let scaled = to_integer_coords(&rows);
        rows.clear();
        let bits = max_bits(scaled.iter().flatten()) + 64 - (points.len() as u64).leading_zeros() as u64;
        let wide = fits_wide(d + 1, bits).then(|| {
            scaled
                .iter()
                .map(|p| p.iter().map(|x| to_wide(x).expect("bounded")).collect())
                .collect()
        });
        Lifter { scaled, wide }
    }

    fn faces(&self, vertices: &[CombinatorialVertex], triangulate: bool) -> Result<Faces> {
        fn run<T: ExactInt>(rows: &[Vec<T>], vertices: &[CombinatorialVertex], triangulate: bool) -> Result<Faces> {
            let dim = rows[0].len();
            let lifted = vertices
                .iter()
                .map(|v| {
                    (0..dim)
                        .map(|j| v.members.iter().fold(T::zero(), |acc, &m| acc.add(&rows[m as usize][j])))
                        .collect()
                })
                .collect();
            let (sets, lifted) = lower_face_sets(lifted)?;
            let simplices = if triangulate {
                sets.iter()
                    .flat_map(|s| {
                        let ids: Vec<usize> = s.iter().map(|&x| x as usize).collect();
                        triangulate_face(&lifted, &ids).simplices
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Ok(Faces { sets, simplices })
        }
        if vertices.is_empty() {
            return Ok(Faces::default());
        }
        match &self.wide {
            Some(rows) => run(rows, vertices, triangulate),
            None => run(&self.scaled, vertices, triangulate),
        }
    }
}

#[derive(Default)]
struct Faces {
    /// Vertex positions of each lower face.
    sets: Vec<Vec<u32>>,
    simplices: Vec<Simplex>,
}

fn union_of(vs: &[&CombinatorialVertex]) -> Vec<u32> {
    let set: BTreeSet<u32> = vs.iter().flat_map(|v| v.members.iter().copied()).collect();
    set.into_iter().collect()
}

fn degenerate_cell(c: &Cell) -> Error {
    Error::Degenerate {
        subset: union_of(&[&CombinatorialVertex::new(c.rhomboid.a_on.clone())]),
    }
}

/// Turns one lower face of the black box into a cell. In general position
/// every face is the slice of a `(d+1)`-dimensional rhomboid; anything else
/// witnesses `d+2` co-spherical points.
fn classify(face: &[u32], vertices: &[CombinatorialVertex], d: usize) -> Result<Cell> {
    let verts: Vec<CombinatorialVertex> = face.iter().map(|&i| vertices[i as usize].clone()).collect();
    if verts.len() == d + 1 && is_first_generation(&verts)? {
        return Ok(Cell {
            rhomboid: rhomboid_of_first_gen(&verts)?,
            generation: 1,
        });
    }
    let cell = Cell::from_vertices(&verts)?;
    if cell.rhomboid.dimension() != d + 1 {
        return Err(degenerate_cell(&cell));
    }
    Ok(cell)
}

/// First-generation cells grouped by anchor vertex, as indices into
/// `m.cells`. Groups are sorted by anchor.
pub fn clusters(m: &Mosaic) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for (i, c) in m.first_generation() {
        groups.entry(c.rhomboid.a_in()).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Connected components of the first-generation cells under sharing a
/// facet (all but one vertex), in the same format as [`clusters`].
pub fn facet_components(m: &Mosaic) -> Vec<Vec<usize>> {
    let firsts: Vec<(usize, Vec<CombinatorialVertex>)> = m
        .first_generation()
        .map(|(i, c)| (i, c.vertices()))
        .collect();
    let mut parent: Vec<usize> = (0..firsts.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut by_facet: HashMap<Vec<&CombinatorialVertex>, usize> = HashMap::new();
    for (slot, (_, verts)) in firsts.iter().enumerate() {
        for skip in 0..verts.len() {
            let facet: Vec<&CombinatorialVertex> = verts
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, v)| v)
                .collect();
            if let Some(&other) = by_facet.get(&facet) {
                let (a, b) = (find(&mut parent, slot), find(&mut parent, other));
                parent[a.max(b)] = a.min(b);
            } else {
                by_facet.insert(facet, slot);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (slot, first) in firsts.iter().enumerate() {
        let root = find(&mut parent, slot);
        comps.entry(root).or_default().push(first.0);
    }
    let mut out: Vec<Vec<usize>> = comps.into_values().collect();
    out.sort();
    out
}

/// Whether anchor grouping and facet connectivity give the same partition.
pub fn clusters_are_connected(m: &Mosaic) -> bool {
    let mut a = clusters(m);
    a.sort();
    a == facet_components(m)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
