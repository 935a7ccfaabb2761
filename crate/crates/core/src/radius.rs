//! The squared radius function on the rhomboid tiling and order-k alpha
//! complexes as its sublevel sets.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{circumsphere, circumsphere_with_coefficients, format_rational, parse_rational, side_of_sphere, Point, PointSet, Rational, Side, Sphere};
use crate::orderk::{Cell, CombinatorialVertex, Rhomboid};
use crate::tiling::{faces, slice_at_depth, RhomboidTiling, SliceCell};

/// A squared radius, extended by both infinities. Without any point to
/// enclose or pass through, spheres shrink without bound, which gives the
/// empty vertex the value `-inf`; `+inf` serves as a threshold.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInfinity => f.write_str("-inf"),
            Extended::Finite(x) => f.write_str(&format_rational(x)),
            Extended::PosInfinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Extended {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Extended::PosInfinity),
            "-inf" => Ok(Extended::NegInfinity),
            t => parse_rational(t)
                .map(Extended::Finite)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("not a number: {t:?}"),
                }),
        }
    }
}

/// Constraints on a sphere: enclose `include`, pass through `on`, and have
/// `exclude` on or outside. All constraints are closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedSphereProblem {
    include: Vec<u32>,
    on: Vec<u32>,
    exclude: Vec<u32>,
}

impl ConstrainedSphereProblem {
    pub fn new(mut include: Vec<u32>, mut on: Vec<u32>, mut exclude: Vec<u32>) -> Result<Self> {
        for v in [&mut include, &mut on, &mut exclude] {
            v.sort_unstable();
            v.dedup();
        }
        let mut all: Vec<u32> = include.iter().chain(&on).chain(&exclude).copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total {
            return Err(Error::Precondition("constraint sets must be disjoint".into()));
        }
        Ok(ConstrainedSphereProblem { include, on, exclude })
    }

    /// The problem of a rhomboid: `a_in` inside, `a_on` on, the rest outside.
    pub fn of_rhomboid(rho: &Rhomboid, n: usize) -> Self {
        let exclude = (0..n as u32)
            .filter(|x| rho.a_in().binary_search(x).is_err() && rho.a_on().binary_search(x).is_err())
            .collect();
        ConstrainedSphereProblem {
            include: rho.a_in().to_vec(),
            on: rho.a_on().to_vec(),
            exclude,
        }
    }

    pub fn include(&self) -> &[u32] {
        &self.include
    }

    pub fn on(&self) -> &[u32] {
        &self.on
    }

    pub fn exclude(&self) -> &[u32] {
        &self.exclude
    }
}

/// Optimum of a [`ConstrainedSphereProblem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinSphere {
    /// Nothing to enclose or pass through.
    Unbounded,
    Sphere(Sphere),
}

impl MinSphere {
    pub fn squared_radius(&self) -> Extended {
        match self {
            MinSphere::Unbounded => Extended::NegInfinity,
            MinSphere::Sphere(s) => Extended::Finite(s.squared_radius.clone()),
        }
    }
}

/// Smallest sphere satisfying the constraints.
///
/// In the lifted variables (center `c`, `s = |c|^2 - r^2`) every constraint
/// is linear and `r^2` is convex, so the optimum is the smallest sphere
/// through some affinely independent support set of at most `d + 1`
/// constraint points. Its center is an affine combination of the support
/// whose coefficients are the Lagrange multipliers: nonnegative on enclosed
/// points, nonpositive on excluded ones. Candidates are enumerated by size,
/// and the first feasible one meeting these sign conditions is optimal.
pub fn min_constrained_sphere(p: &ConstrainedSphereProblem, points: &PointSet) -> Result<MinSphere> {
    let n = points.len() as u32;
    if let Some(&bad) = p.include.iter().chain(&p.on).chain(&p.exclude).find(|&&x| x >= n) {
        return Err(Error::OutOfRange {
            what: "point index",
            value: bad as i64,
            min: 0,
            max: n as i64 - 1,
        });
    }
    if p.include.is_empty() && p.on.is_empty() {
        return Ok(MinSphere::Unbounded);
    }
    let d = points.dim();
    let pt = |i: u32| points.point(i as usize);
    let feasible = |s: &Sphere| {
        p.on.iter().all(|&i| s.power(pt(i).coords()).is_zero())
            && p.include.iter().all(|&i| !s.power(pt(i).coords()).is_positive())
            && p.exclude.iter().all(|&i| !s.power(pt(i).coords()).is_negative())
    };
    let stationary = |support: &[u32], coefficients: &[Rational]| {
        support.iter().zip(coefficients).all(|(i, c)| {
            if p.include.binary_search(i).is_ok() {
                !c.is_negative()
            } else if p.exclude.binary_search(i).is_ok() {
                !c.is_positive()
            } else {
                true
            }
        })
    };
    let optimal = |support: &[u32]| -> Option<Sphere> {
        let refs: Vec<&Point> = support.iter().map(|&i| pt(i)).collect();
        let (s, coefficients) = circumsphere_with_coefficients(&refs).ok()?;
        (stationary(support, &coefficients) && feasible(&s)).then_some(s)
    };

    let on_independent = p.on.is_empty() || {
        let refs: Vec<&Point> = p.on.iter().map(|&i| pt(i)).collect();
        circumsphere(&refs).is_ok()
    };
    let found = if on_independent {
        // Some optimal support extends the points that must lie on the sphere.
        let others: Vec<u32> = p.include.iter().chain(&p.exclude).copied().sorted().collect();
        let min_extra = usize::from(p.on.is_empty());
        (min_extra..=(d + 1).saturating_sub(p.on.len())).find_map(|extra| {
            others.iter().copied().combinations(extra).find_map(|s| {
                let support: Vec<u32> = p.on.iter().copied().chain(s).collect();
                optimal(&support)
            })
        })
    } else {
        let all: Vec<u32> = p.include.iter().chain(&p.on).chain(&p.exclude).copied().sorted().collect();
        (1..=d + 1).find_map(|size| all.iter().copied().combinations(size).find_map(|s| optimal(&s)))
    };
    found.map(MinSphere::Sphere).ok_or(Error::Infeasible)
}

/// For an interval upper bound `rho`, the points `X_I` of `a_on` lying
/// outside the circumsphere of the remaining points of `a_on`, and the lower
/// bound `a_in ∪ X_I`.
pub fn resolve_interval(rho: &Rhomboid, points: &PointSet) -> Result<(CombinatorialVertex, Vec<u32>)> {
    if rho.a_on().is_empty() {
        return Err(Error::Precondition("a vertex has no interval to resolve".into()));
    }
    let mut x_in = Vec::new();
    for &x in rho.a_on() {
        let rest: Vec<&Point> = rho
            .a_on()
            .iter()
            .filter(|&&y| y != x)
            .map(|&y| points.point(y as usize))
            .collect();
        if rest.is_empty() {
            x_in.push(x);
            continue;
        }
        let s = circumsphere(&rest).map_err(|_| Error::Degenerate {
            subset: rho.a_on().to_vec(),
        })?;
        match side_of_sphere(&s, points.point(x as usize))? {
            Side::Outside => x_in.push(x),
            Side::Inside => {}
            Side::On => {
                return Err(Error::Degenerate {
                    subset: rho.a_on().to_vec(),
                })
            }
        }
    }
    let mut members = rho.a_in().to_vec();
    members.extend_from_slice(&x_in);
    Ok((CombinatorialVertex::new(members), x_in))
}

/// A maximal set of rhomboids sharing one squared radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lower: CombinatorialVertex,
    pub upper: Rhomboid,
    pub value: Extended,
}

/// Squared radius of every rhomboid of a tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusAssignment {
    /// Aligned with [`RhomboidTiling::rhomboids`].
    pub values: Vec<Extended>,
    pub intervals: Vec<Interval>,
    /// Interval of each rhomboid. Rhomboids anchored at or beyond the depth
    /// limit, evaluated one by one, have none.
    pub interval_of: Vec<Option<usize>>,
}

impl RadiusAssignment {
    pub fn value(&self, tiling: &RhomboidTiling, rho: &Rhomboid) -> Option<&Extended> {
        tiling.index_of(rho).map(|i| &self.values[i])
    }
}

/// Members of the interval `[a_in ∪ x_in, rho]`: points of `x_in` go inside
/// or stay on, the others stay on or go outside.
fn interval_members(rho: &Rhomboid, x_in: &[u32]) -> Vec<Rhomboid> {
    let on = rho.a_on();
    (0..1usize << on.len())
        .map(|mask| {
            let mut a_in = rho.a_in().to_vec();
            let mut a_on = Vec::new();
            for (bit, &x) in on.iter().enumerate() {
                let stays_on = mask >> bit & 1 == 1;
                if stays_on {
                    a_on.push(x);
                } else if x_in.contains(&x) {
                    a_in.push(x);
                }
            }
            Rhomboid::from_sets(a_in, a_on)
        })
        .collect()
}

/// Assigns squared radii by processing rhomboids in decreasing dimension:
/// each one not yet covered is the upper bound of an interval whose value is
/// the squared radius of the circumsphere of its `a_on`. Vertices left over
/// get their smallest constrained sphere directly.
pub fn compute_radius_function(tiling: &RhomboidTiling, points: &PointSet) -> Result<RadiusAssignment> {
    let n = points.len();
    let count = tiling.len();
    let mut values: Vec<Option<Extended>> = vec![None; count];
    let mut interval_of: Vec<Option<usize>> = vec![None; count];
    let mut intervals = Vec::new();
    let rhomboids = tiling.rhomboids();

    for j in (1..=tiling.top_dimension()).rev() {
        let uppers: Vec<usize> = tiling
            .of_dimension(j)
            .iter()
            .copied()
            .filter(|&i| values[i].is_none() && rhomboids[i].anchor_depth() < tiling.depth_limit())
            .collect();
        let resolved: Vec<(usize, Extended, CombinatorialVertex, Vec<u32>)> = uppers
            .par_iter()
            .map(|&i| {
                let rho = &rhomboids[i];
                let on: Vec<&Point> = rho.a_on().iter().map(|&x| points.point(x as usize)).collect();
                let sphere = circumsphere(&on).map_err(|_| Error::Degenerate {
                    subset: rho.a_on().to_vec(),
                })?;
                let (lower, x_in) = resolve_interval(rho, points)?;
                Ok((i, Extended::Finite(sphere.squared_radius), lower, x_in))
            })
            .collect::<Result<_>>()?;
        for (i, value, lower, x_in) in resolved {
            let slot = intervals.len();
            for member in interval_members(&rhomboids[i], &x_in) {
                let m = tiling
                    .index_of(&member)
                    .ok_or_else(|| Error::Precondition(format!("tiling lacks the face {member:?}")))?;
                if values[m].is_some() {
                    return Err(Error::Precondition(format!("{member:?} lies in two intervals")));
                }
                values[m] = Some(value.clone());
                interval_of[m] = Some(slot);
            }
            intervals.push(Interval {
                lower,
                upper: rhomboids[i].clone(),
                value,
            });
        }
    }

    let rest: Vec<usize> = (0..count).filter(|&i| values[i].is_none()).collect();
    let direct: Vec<Extended> = rest
        .par_iter()
        .map(|&i| {
            let p = ConstrainedSphereProblem::of_rhomboid(&rhomboids[i], n);
            Ok(min_constrained_sphere(&p, points)?.squared_radius())
        })
        .collect::<Result<_>>()?;
    for (i, value) in rest.into_iter().zip(direct) {
        let rho = &rhomboids[i];
        if rho.dimension() == 0 {
            interval_of[i] = Some(intervals.len());
            intervals.push(Interval {
                lower: rho.anchor(),
                upper: rho.clone(),
                value: value.clone(),
            });
        }
        values[i] = Some(value);
    }

    Ok(RadiusAssignment {
        values: values.into_iter().map(|v| v.expect("every rhomboid valued")).collect(),
        intervals,
        interval_of,
    })
}

/// One cell of an order-k mosaic, of any dimension, with its squared radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationEntry {
    pub cell: Cell,
    pub dimension: usize,
    pub value: Extended,
}

/// Cells of `Del_k` of every dimension ordered by `(value, dimension, cell)`.
/// Each inherits the value of the rhomboid it slices.
pub fn filtration(k: usize, tiling: &RhomboidTiling, radii: &RadiusAssignment) -> Result<Vec<FiltrationEntry>> {
    let top = tiling.depth_limit().min(tiling.max_depth());
    if k < 1 || k > top {
        return Err(Error::OutOfRange {
            what: "order",
            value: k as i64,
            min: 1,
            max: top as i64,
        });
    }
    let slice = slice_at_depth(&Rational::from_integer(k.into()), tiling)?;
    let mut out: Vec<FiltrationEntry> = slice
        .cells
        .into_iter()
        .map(|c| {
            let SliceCell::Integer(cell) = c else {
                unreachable!("integer depth")
            };
            let i = tiling.index_of(cell.rhomboid()).expect("sliced from the tiling");
            FiltrationEntry {
                dimension: if cell.rhomboid().dimension() == 0 {
                    0
                } else {
                    cell.rhomboid().dimension() - 1
                },
                value: radii.values[i].clone(),
                cell,
            }
        })
        .collect();
    out.sort_by(|a, b| (&a.value, a.dimension, &a.cell).cmp(&(&b.value, b.dimension, &b.cell)));
    Ok(out)
}

/// The order-k alpha complex: cells of `Del_k` with squared radius at most
/// the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaComplex {
    pub order: usize,
    pub threshold: Extended,
    /// In filtration order.
    pub cells: Vec<FiltrationEntry>,
}

impl AlphaComplex {
    /// Whether every face, within `Del_k`, of every cell is present.
    pub fn is_closed(&self) -> bool {
        let k = self.order;
        let present: std::collections::HashSet<&Rhomboid> = self.cells.iter().map(|e| e.cell.rhomboid()).collect();
        self.cells.iter().all(|e| {
            faces(e.cell.rhomboid()).iter().all(|f| {
                let (i, j) = (f.anchor_depth(), f.dimension());
                let cut = (j == 0 && i == k) || (i < k && k < i + j);
                !cut || present.contains(f)
            })
        })
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells.iter().any(|e| &e.cell == cell)
    }
}

pub fn alpha_complex(
    k: usize,
    threshold: &Extended,
    tiling: &RhomboidTiling,
    radii: &RadiusAssignment,
) -> Result<AlphaComplex> {
    let cells = filtration(k, tiling, radii)?
        .into_iter()
        .take_while(|e| &e.value <= threshold)
        .collect();
    Ok(AlphaComplex {
        order: k,
        threshold: threshold.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rat, ratio};
    use crate::orderk::compute_up_to_order;
    use crate::tiling::build_tiling;

    fn pts(rows: &[&[i64]]) -> PointSet {
        PointSet::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
    }

    fn problem(include: &[u32], on: &[u32], exclude: &[u32]) -> ConstrainedSphereProblem {
        ConstrainedSphereProblem::new(include.to_vec(), on.to_vec(), exclude.to_vec()).unwrap()
    }

    fn sphere(m: MinSphere) -> Sphere {
        match m {
            MinSphere::Sphere(s) => s,
            MinSphere::Unbounded => panic!("expected a sphere"),
        }
    }

    #[test]
    fn smallest_spheres() {
        let a = pts(&[&[0, 0], &[2, 0], &[1, 1]]);
        let s = sphere(min_constrained_sphere(&problem(&[0], &[], &[]), &a).unwrap());
        assert_eq!((s.center, s.squared_radius), (vec![rat(0), rat(0)], rat(0)));
        let s = sphere(min_constrained_sphere(&problem(&[0, 1], &[], &[]), &a).unwrap());
        assert_eq!((s.center, s.squared_radius), (vec![rat(1), rat(0)], rat(1)));
        let s = sphere(min_constrained_sphere(&problem(&[0, 1], &[], &[2]), &a).unwrap());
        assert_eq!((s.center, s.squared_radius), (vec![rat(1), rat(0)], rat(1)));
        assert_eq!(
            min_constrained_sphere(&problem(&[], &[], &[0, 1, 2]), &a).unwrap(),
            MinSphere::Unbounded
        );
    }

    #[test]
    fn exclusion_pushes_the_sphere() {
        let a = pts(&[&[0, 0], &[4, 0], &[2, 1]]);
        let s = sphere(min_constrained_sphere(&problem(&[0, 1], &[], &[2]), &a).unwrap());
        assert_eq!(s.center, vec![rat(2), ratio(-3, 2)]);
        assert_eq!(s.squared_radius, ratio(25, 4));
    }

    #[test]
    fn infeasible_and_invalid() {
        let a = pts(&[&[0], &[1], &[2]]);
        // 1 lies between 0 and 2, so no sphere through 0 and 2 keeps it out
        assert_eq!(min_constrained_sphere(&problem(&[], &[0, 2], &[1]), &a), Err(Error::Infeasible));
        assert!(ConstrainedSphereProblem::new(vec![0], vec![0], vec![]).is_err());
        assert!(matches!(
            min_constrained_sphere(&problem(&[5], &[], &[]), &a),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn interval_resolution() {
        let line = pts(&[&[0], &[1], &[2]]);
        let (v, x) = resolve_interval(&Rhomboid::new(vec![], vec![0, 2]).unwrap(), &line).unwrap();
        assert_eq!((v.members(), x.as_slice()), (&[0u32, 2][..], &[0u32, 2][..]));

        let acute = pts(&[&[0, 0], &[10, 0], &[5, 8]]);
        let (v, _) = resolve_interval(&Rhomboid::new(vec![], vec![0, 1, 2]).unwrap(), &acute).unwrap();
        assert_eq!(v.members(), &[0, 1, 2]);

        let obtuse = pts(&[&[0, 0], &[10, 0], &[5, 1]]);
        let (v, x) = resolve_interval(&Rhomboid::new(vec![], vec![0, 1, 2]).unwrap(), &obtuse).unwrap();
        assert_eq!(v.members(), &[0, 1]);
        assert_eq!(x, vec![0, 1]);

        assert!(resolve_interval(&Rhomboid::new(vec![1], vec![]).unwrap(), &line).is_err());
    }

    #[test]
    fn acute_triangle_radii() {
        let a = pts(&[&[0, 0], &[10, 0], &[5, 8]]);
        let r = compute_up_to_order(&a, 3).unwrap();
        let t = build_tiling(&r.rhomboids, 3);
        let radii = compute_radius_function(&t, &a).unwrap();
        let circ = circumsphere(&[a.point(0), a.point(1), a.point(2)]).unwrap().squared_radius;
        let top = Rhomboid::new(vec![], vec![0, 1, 2]).unwrap();
        assert_eq!(radii.value(&t, &top), Some(&Extended::Finite(circ.clone())));
        let full = Rhomboid::new(vec![0, 1, 2], vec![]).unwrap();
        assert_eq!(radii.value(&t, &full), Some(&Extended::Finite(circ)));
        let empty = Rhomboid::new(vec![], vec![]).unwrap();
        assert_eq!(radii.value(&t, &empty), Some(&Extended::NegInfinity));
        for i in 0..3 {
            let v = Rhomboid::new(vec![i], vec![]).unwrap();
            assert_eq!(radii.value(&t, &v), Some(&Extended::Finite(rat(0))));
        }
        // every rhomboid is in exactly one interval, with a vertex as lower bound
        assert!(radii.interval_of.iter().all(Option::is_some));
        let covered: usize = radii.intervals.iter().map(|iv| 1 << iv.upper.dimension()).sum();
        assert_eq!(covered, t.len());
    }

    #[test]
    fn alpha_sublevels() {
        let a = pts(&[&[0, 0], &[10, 0], &[5, 8]]);
        let r = compute_up_to_order(&a, 3).unwrap();
        let t = build_tiling(&r.rhomboids, 3);
        let radii = compute_radius_function(&t, &a).unwrap();
        let full = alpha_complex(1, &Extended::PosInfinity, &t, &radii).unwrap();
        assert_eq!(full.cells.len(), 7);
        assert!(full.is_closed());
        let none = alpha_complex(1, &Extended::Finite(ratio(-1, 1)), &t, &radii).unwrap();
        assert!(none.cells.is_empty());
        let circ = circumsphere(&[a.point(0), a.point(1), a.point(2)]).unwrap().squared_radius;
        let at = alpha_complex(1, &Extended::Finite(circ.clone()), &t, &radii).unwrap();
        assert_eq!(at.cells.len(), 7);
        let below = alpha_complex(1, &Extended::Finite(circ - ratio(1, 1000)), &t, &radii).unwrap();
        assert_eq!(below.cells.len(), 6);
        assert!(below.is_closed());
        assert!(alpha_complex(4, &Extended::PosInfinity, &t, &radii).is_err());
    }

    #[test]
    fn extended_values() {
        assert!(Extended::NegInfinity < Extended::Finite(rat(-5)));
        assert!(Extended::Finite(rat(5)) < Extended::PosInfinity);
        assert_eq!("inf".parse::<Extended>().unwrap(), Extended::PosInfinity);
        assert_eq!("3/4".parse::<Extended>().unwrap(), Extended::Finite(ratio(3, 4)));
        assert_eq!(Extended::Finite(ratio(3, 4)).to_string(), "3/4");
        assert!("x".parse::<Extended>().is_err());
    }
}
