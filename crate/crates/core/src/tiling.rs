//! The rhomboid tiling: rhomboids of every dimension, closed under faces,
//! and its slices at integer and half-integer depths.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{PointSet, Rational};
use crate::orderk::{slice_of_rhomboid, Cell, CombinatorialVertex, Rhomboid};

/// A face-closed set of rhomboids, each stored once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhomboidTiling {
    /// Sorted by `(a_in, a_on)`.
    rhomboids: Vec<Rhomboid>,
    by_dimension: Vec<Vec<usize>>,
    by_anchor: BTreeMap<Vec<u32>, Vec<usize>>,
    depth_limit: usize,
}

impl RhomboidTiling {
    /// Indexes a set of rhomboids as given. Face closure is not enforced; see
    /// [`RhomboidTiling::is_face_closed`].
    pub fn from_rhomboids(rhomboids: impl IntoIterator<Item = Rhomboid>, depth_limit: usize) -> Self {
        let mut rhomboids: Vec<Rhomboid> = rhomboids.into_iter().collect();
        rhomboids.sort();
        rhomboids.dedup();
        let top = rhomboids.iter().map(Rhomboid::dimension).max().unwrap_or(0);
        let mut by_dimension = vec![Vec::new(); top + 1];
        let mut by_anchor: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (i, r) in rhomboids.iter().enumerate() {
            by_dimension[r.dimension()].push(i);
            by_anchor.entry(r.a_in().to_vec()).or_default().push(i);
        }
        RhomboidTiling {
            rhomboids,
            by_dimension,
            by_anchor,
            depth_limit,
        }
    }

    pub fn rhomboids(&self) -> &[Rhomboid] {
        &self.rhomboids
    }

    pub fn len(&self) -> usize {
        self.rhomboids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhomboids.is_empty()
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    pub fn index_of(&self, r: &Rhomboid) -> Option<usize> {
        self.rhomboids.binary_search(r).ok()
    }

    pub fn contains(&self, r: &Rhomboid) -> bool {
        self.index_of(r).is_some()
    }

    pub fn top_dimension(&self) -> usize {
        self.by_dimension.len().saturating_sub(1)
    }

    /// Indices of the rhomboids of dimension `j`.
    pub fn of_dimension(&self, j: usize) -> &[usize] {
        self.by_dimension.get(j).map_or(&[], Vec::as_slice)
    }

    /// Indices of the rhomboids anchored at `a_in`.
    pub fn with_anchor(&self, a_in: &[u32]) -> &[usize] {
        self.by_anchor.get(a_in).map_or(&[], Vec::as_slice)
    }

    /// The combinatorial vertices, i.e. the 0-dimensional rhomboids.
    pub fn vertices(&self) -> impl Iterator<Item = CombinatorialVertex> + '_ {
        self.of_dimension(0).iter().map(|&i| self.rhomboids[i].anchor())
    }

    pub fn vertex_count_by_depth(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &i in self.of_dimension(0) {
            *h.entry(self.rhomboids[i].anchor_depth()).or_default() += 1;
        }
        h
    }

    /// Largest depth of a vertex.
    pub fn max_depth(&self) -> usize {
        self.rhomboids
            .iter()
            .map(|r| r.anchor_depth() + r.dimension())
            .max()
            .unwrap_or(0)
    }

    pub fn is_face_closed(&self) -> bool {
        self.rhomboids.iter().all(|r| faces(r).iter().all(|f| self.contains(f)))
    }
}

/// Assembles the tiling from the top-dimensional rhomboids of
/// [`crate::orderk::compute_up_to_order`] run to order `depth_limit`.
pub fn build_tiling(rhomboids: &[Rhomboid], depth_limit: usize) -> RhomboidTiling {
    let mut all: BTreeSet<Rhomboid> = BTreeSet::new();
    for r in rhomboids.iter().filter(|r| r.anchor_depth() < depth_limit) {
        if all.contains(r) {
            continue;
        }
        all.extend(faces(r));
    }
    RhomboidTiling::from_rhomboids(all, depth_limit)
}

/// All `3^|a_on|` faces: each point of `a_on` moves inside, stays on, or
/// moves outside.
pub fn faces(rho: &Rhomboid) -> Vec<Rhomboid> {
    let on = rho.a_on();
    let count = 3usize.pow(on.len() as u32);
    (0..count)
        .map(|mut code| {
            let mut a_in = rho.a_in().to_vec();
            let mut a_on = Vec::new();
            for &x in on {
                match code % 3 {
                    0 => a_in.push(x),
                    1 => a_on.push(x),
                    _ => {}
                }
                code /= 3;
            }
            Rhomboid::from_sets(a_in, a_on)
        })
        .collect()
}

/// Whether `sub` is a face of `sup`.
pub fn is_face(sub: &Rhomboid, sup: &Rhomboid) -> bool {
    let within = |x: &u32| sup.a_in().binary_search(x).is_ok() || sup.a_on().binary_search(x).is_ok();
    sup.a_in().iter().all(|x| sub.a_in().binary_search(x).is_ok())
        && sub.a_in().iter().all(within)
        && sub.a_on().iter().all(|x| sup.a_on().binary_search(x).is_ok())
}

/// Position of `Q` in the tiling: `(sum of members, -|Q|)`.
pub fn embed(v: &CombinatorialVertex, points: &PointSet) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); points.dim()];
    for &m in v.members() {
        for (s, x) in y.iter_mut().zip(points.point(m as usize).coords()) {
            *s += x;
        }
    }
    y.push(Rational::from_integer(-BigInt::from(v.depth())));
    y
}

/// A vertex of a slice: a combinatorial vertex at integer depth, or the
/// midpoint of a tiling edge at half-integer depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SliceVertex {
    Point(CombinatorialVertex),
    Edge(CombinatorialVertex, CombinatorialVertex),
}

/// A cell of a slice, named by the unique rhomboid whose interior it cuts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SliceCell {
    /// Generation-`g` slice at an integer depth.
    Integer(Cell),
    /// The prism between generations `generation` and `generation + 1`.
    Half { rhomboid: Rhomboid, generation: usize },
}

impl SliceCell {
    pub fn rhomboid(&self) -> &Rhomboid {
        match self {
            SliceCell::Integer(c) => c.rhomboid(),
            SliceCell::Half { rhomboid, .. } => rhomboid,
        }
    }

    pub fn dimension(&self) -> usize {
        self.rhomboid().dimension().saturating_sub(1)
    }

    pub fn vertices(&self) -> Vec<SliceVertex> {
        match self {
            SliceCell::Integer(c) => c.vertices().into_iter().map(SliceVertex::Point).collect(),
            SliceCell::Half { rhomboid, generation } => {
                let mut out = Vec::new();
                for low in rhomboid.slice_vertices(*generation) {
                    for &x in rhomboid.a_on() {
                        if low.members().binary_search(&x).is_err() {
                            let mut up = low.members().to_vec();
                            up.push(x);
                            out.push(SliceVertex::Edge(low.clone(), CombinatorialVertex::new(up)));
                        }
                    }
                }
                out.sort();
                out
            }
        }
    }
}

/// The cell complex cut out of the tiling at depth `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceComplex {
    pub depth: Rational,
    /// Sorted.
    pub cells: Vec<SliceCell>,
}

impl SliceComplex {
    pub fn of_dimension(&self, j: usize) -> impl Iterator<Item = &SliceCell> {
        self.cells.iter().filter(move |c| c.dimension() == j)
    }
}

/// Slices the tiling at depth `t`. Integer depths give the order-`t` mosaic
/// with cells of every dimension; half-integer depths give the degree-`⌈t⌉`
/// mosaic, whose cells are exported as vertex-pair prisms (experimental).
pub fn slice_at_depth(t: &Rational, tiling: &RhomboidTiling) -> Result<SliceComplex> {
    let top = tiling.max_depth().min(tiling.depth_limit());
    let out_of_range = || Error::OutOfRange {
        what: "slice depth",
        value: t.floor().to_integer().try_into().unwrap_or(i64::MAX),
        min: 0,
        max: top as i64,
    };
    let twice = t * Rational::from_integer(2.into());
    if !twice.is_integer() || *t <= Rational::zero() || *t > Rational::from_integer(top.into()) {
        return Err(out_of_range());
    }
    let twice: usize = twice.to_integer().try_into().map_err(|_| out_of_range())?;
    let mut cells = Vec::new();
    if twice.is_multiple_of(2) {
        let k = twice / 2;
        for r in tiling.rhomboids() {
            let (i, j) = (r.anchor_depth(), r.dimension());
            let cut = (j == 0 && i == k) || (i < k && k < i + j);
            if cut {
                cells.push(SliceCell::Integer(slice_of_rhomboid(r, k - i)?));
            }
        }
    } else {
        let k = twice.div_ceil(2);
        for r in tiling.rhomboids() {
            let (i, j) = (r.anchor_depth(), r.dimension());
            if j >= 1 && i < k && i + j >= k {
                cells.push(SliceCell::Half {
                    rhomboid: r.clone(),
                    generation: k - 1 - i,
                });
            }
        }
    }
    cells.sort();
    Ok(SliceComplex { depth: t.clone(), cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ratio, Point};
    use crate::orderk::compute_up_to_order;

    fn rh(a_in: &[u32], a_on: &[u32]) -> Rhomboid {
        Rhomboid::new(a_in.to_vec(), a_on.to_vec()).unwrap()
    }

    fn triangle() -> PointSet {
        PointSet::new(vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[4, 0]),
            Point::from_ints(&[1, 3]),
        ])
        .unwrap()
    }

    #[test]
    fn face_counts() {
        assert_eq!(faces(&rh(&[1], &[])), vec![rh(&[1], &[])]);
        let f = faces(&rh(&[2], &[1, 3]));
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|r| r.dimension() == 0).count(), 4);
        assert_eq!(f.iter().filter(|r| r.dimension() == 1).count(), 4);
        assert!(f.contains(&rh(&[2], &[1, 3])));
        assert_eq!(faces(&rh(&[], &[0, 1, 2, 3])).len(), 81);
        for g in &f {
            assert!(is_face(g, &rh(&[2], &[1, 3])));
        }
        assert!(!is_face(&rh(&[0], &[]), &rh(&[2], &[1, 3])));
    }

    #[test]
    fn single_triangle_tiling() {
        let r = compute_up_to_order(&triangle(), 3).unwrap();
        let t = build_tiling(&r.rhomboids, 3);
        assert_eq!(t.len(), 27);
        assert_eq!(t.of_dimension(3).len(), 1);
        assert!(t.is_face_closed());
        assert_eq!(t.vertices().count(), 8);
        assert_eq!(t.max_depth(), 3);

        let half = slice_at_depth(&ratio(1, 2), &t).unwrap();
        assert_eq!(half.of_dimension(2).count(), 1);
        let top = half.of_dimension(2).next().unwrap();
        assert_eq!(top.vertices().len(), 3);

        let s2 = slice_at_depth(&ratio(2, 1), &t).unwrap();
        let d_cells: Vec<&SliceCell> = s2.of_dimension(2).collect();
        assert_eq!(d_cells.len(), 1);
        assert_eq!(d_cells[0], &SliceCell::Integer(r.mosaic(2).unwrap().cells[0].clone()));
        assert_eq!(s2.of_dimension(0).count(), 3);
        assert_eq!(s2.of_dimension(1).count(), 3);

        assert!(slice_at_depth(&ratio(0, 1), &t).is_err());
        assert!(slice_at_depth(&ratio(1, 3), &t).is_err());
        assert!(slice_at_depth(&ratio(4, 1), &t).is_err());
    }

    #[test]
    fn embedding_uses_sums() {
        let a = triangle();
        assert_eq!(
            embed(&CombinatorialVertex::new(vec![0, 1, 2]), &a),
            vec![ratio(5, 1), ratio(3, 1), ratio(-3, 1)]
        );
    }

    #[test]
    fn anchors_are_indexed() {
        let r = compute_up_to_order(&triangle(), 3).unwrap();
        let t = build_tiling(&r.rhomboids, 3);
        // anchored at {} : the vertex, three edges, three squares, one cube
        assert_eq!(t.with_anchor(&[]).len(), 8);
        assert!(t.with_anchor(&[7]).is_empty());
        for &i in t.with_anchor(&[0]) {
            assert_eq!(t.rhomboids()[i].a_in(), &[0]);
        }
    }
}
