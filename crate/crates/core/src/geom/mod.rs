//! Exact geometric kernel: points, spheres, the paraboloid lift and the
//! predicates every other module relies on.
//!
//! Everything here works on [`Rational`] values (reduced big-integer
//! fractions); there are no floating-point paths.

pub mod linalg;
pub mod polytope;
pub mod wide;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for all coordinates.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a decimal (`-1.25`, `3e-2`) or a fraction (`1/3`) exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        // BigRational keeps fractions reduced, so equal values compare equal.
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn squared_norm(&self) -> Rational {
        squared_norm(&self.coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub fn squared_norm(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).sum()
}

pub fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            &t * &t
        })
        .sum()
}

/// The ground set `A`: an indexed list of distinct points of common dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    dim: usize,
}

impl PointSet {
    /// Builds a point set, rejecting empty input, mixed dimensions and duplicates.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::Precondition("point set is empty".into()))?;
        if dim == 0 {
            return Err(Error::Precondition("points must have dimension >= 1".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::DuplicatePoint { first, second });
            }
        }
        Ok(PointSet { points, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// Reindexes the points in lexicographic coordinate order.
    /// Returns the new set and, for each new index, the original index.
    pub fn canonicalized(&self) -> (PointSet, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.points[a].cmp(&self.points[b]));
        let points = order.iter().map(|&i| self.points[i].clone()).collect();
        (
            PointSet {
                points,
                dim: self.dim,
            },
            order,
        )
    }

    /// Returns the points reordered by `perm` (new index `i` holds old `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> PointSet {
        PointSet {
            points: perm.iter().map(|&i| self.points[i].clone()).collect(),
            dim: self.dim,
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.points).finish()
    }
}

/// A sphere given by its center and squared radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphere {
    pub center: Vec<Rational>,
    pub squared_radius: Rational,
}

impl Sphere {
    /// Power of `p` with respect to the sphere: `|p - c|^2 - r^2`.
    pub fn power(&self, p: &[Rational]) -> Rational {
        squared_distance(p, &self.center) - &self.squared_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Inside,
    On,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Negative,
    Zero,
    Positive,
}

/// A point of `R^{d+1}` obtained by lifting a point of `R^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedPoint {
    pub base: Point,
    pub height: Rational,
}

impl LiftedPoint {
    pub fn coords(&self) -> Vec<Rational> {
        let mut c = self.base.coords().to_vec();
        c.push(self.height.clone());
        c
    }
}

/// Lifts `p` onto the unit paraboloid: `(p, |p|^2)`.
pub fn lift(p: &Point) -> LiftedPoint {
    LiftedPoint {
        height: p.squared_norm(),
        base: p.clone(),
    }
}

/// Weighted lift `(p, |p|^2 - w)`.
pub fn lift_weighted(p: &Point, weight: &Rational) -> LiftedPoint {
    LiftedPoint {
        height: p.squared_norm() - weight,
        base: p.clone(),
    }
}

/// Exact side of `p` relative to `s`.
pub fn side_of_sphere(s: &Sphere, p: &Point) -> Result<Side> {
    if p.dim() != s.center.len() {
        return Err(Error::DimensionMismatch {
            expected: s.center.len(),
            found: p.dim(),
        });
    }
    let pw = s.power(p.coords());
    Ok(if pw.is_negative() {
        Side::Inside
    } else if pw.is_zero() {
        Side::On
    } else {
        Side::Outside
    })
}

/// The smallest sphere through all of `pts`: its center lies in their affine
/// hull. For `d + 1` points in `R^d` this is the ordinary circumsphere.
pub fn circumsphere(pts: &[&Point]) -> Result<Sphere> {
    circumsphere_with_coefficients(pts).map(|(s, _)| s)
}

/// The smallest sphere through affinely independent points together with
/// the affine coefficients of its center with respect to those points.
pub fn circumsphere_with_coefficients(pts: &[&Point]) -> Result<(Sphere, Vec<Rational>)> {
    let (first, rest) = pts
        .split_first()
        .ok_or_else(|| Error::Precondition("circumsphere of no points".into()))?;
    let dim = first.dim();
    if let Some(p) = rest.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if rest.len() > dim {
        return Err(Error::AffinelyDependent);
    }
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .zip(first.coords())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    // Center = first + sum_i lambda_i diff_i, with 2 <diff_i, center - first> = |diff_i|^2.
    let gram: Vec<Vec<Rational>> = diffs
        .iter()
        .map(|u| diffs.iter().map(|v| dot(u, v) * rat(2)).collect())
        .collect();
    let rhs: Vec<Rational> = diffs.iter().map(|u| squared_norm(u)).collect();
    let lambda = linalg::solve(gram, rhs).ok_or(Error::AffinelyDependent)?;
    let mut center = first.coords().to_vec();
    for (l, u) in lambda.iter().zip(&diffs) {
        for (c, x) in center.iter_mut().zip(u) {
            *c += l * x;
        }
    }
    let squared_radius = squared_distance(&center, first.coords());
    let mut coefficients = Vec::with_capacity(pts.len());
    coefficients.push(rat(1) - lambda.iter().sum::<Rational>());
    coefficients.extend(lambda);
    Ok((
        Sphere {
            center,
            squared_radius,
        },
        coefficients,
    ))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sign of the determinant `det[p_1 - p_0; ...; p_d - p_0]` for `d + 1` points in `R^d`.
pub fn orientation(pts: &[&Point]) -> Result<Orientation> {
    let (first, rest) = pts
        .split_first()
        .ok_or_else(|| Error::Precondition("orientation of no points".into()))?;
    let dim = first.dim();
    if rest.len() != dim {
        return Err(Error::Precondition(format!(
            "orientation in R^{dim} needs {} points, got {}",
            dim + 1,
            pts.len()
        )));
    }
    if let Some(p) = rest.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    // Scaling a row by a positive factor keeps the sign.
    let rows: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|p| {
            let diff: Vec<Rational> = p
                .coords()
                .iter()
                .zip(first.coords())
                .map(|(a, b)| a - b)
                .collect();
            linalg::clear_row(&diff)
        })
        .collect();
    Ok(match linalg::signum(&linalg::det(&rows)) {
        1 => Orientation::Positive,
        -1 => Orientation::Negative,
        _ => Orientation::Zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&p(&[0, 0])).coords(), vec![rat(0), rat(0), rat(0)]);
        assert_eq!(lift(&p(&[1, 2])).coords(), vec![rat(1), rat(2), rat(5)]);
        assert_eq!(lift(&p(&[3, 4])).coords(), vec![rat(3), rat(4), rat(25)]);
    }

    #[test]
    fn side_of_unit_circle() {
        let s = Sphere {
            center: vec![rat(0), rat(0)],
            squared_radius: rat(1),
        };
        assert_eq!(side_of_sphere(&s, &p(&[0, 0])).unwrap(), Side::Inside);
        assert_eq!(side_of_sphere(&s, &p(&[1, 0])).unwrap(), Side::On);
        assert_eq!(side_of_sphere(&s, &p(&[2, 0])).unwrap(), Side::Outside);
        assert!(matches!(
            side_of_sphere(&s, &p(&[1, 0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn circumsphere_examples() {
        let s = circumsphere(&[&p(&[0]), &p(&[2])]).unwrap();
        assert_eq!(s.center, vec![rat(1)]);
        assert_eq!(s.squared_radius, rat(1));

        let s = circumsphere(&[&p(&[0, 0]), &p(&[2, 0]), &p(&[0, 2])]).unwrap();
        assert_eq!(s.center, vec![rat(1), rat(1)]);
        assert_eq!(s.squared_radius, rat(2));

        let s = circumsphere(&[&p(&[1, 0, 0]), &p(&[-1, 0, 0]), &p(&[0, 1, 0]), &p(&[0, 0, 1])])
            .unwrap();
        assert_eq!(s.center, vec![rat(0), rat(0), rat(0)]);
        assert_eq!(s.squared_radius, rat(1));

        // minimal circumsphere of a segment in the plane has its center on the segment
        let s = circumsphere(&[&p(&[0, 0]), &p(&[2, 2])]).unwrap();
        assert_eq!(s.center, vec![rat(1), rat(1)]);
        assert_eq!(s.squared_radius, rat(2));
    }

    #[test]
    fn circumsphere_rejects_dependent() {
        assert_eq!(
            circumsphere(&[&p(&[0, 0]), &p(&[1, 1]), &p(&[2, 2])]),
            Err(Error::AffinelyDependent)
        );
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&[&p(&[0, 0]), &p(&[1, 0]), &p(&[0, 1])]).unwrap(), Orientation::Positive);
        assert_eq!(orientation(&[&p(&[0, 0]), &p(&[1, 0]), &p(&[2, 0])]).unwrap(), Orientation::Zero);
        assert_eq!(orientation(&[&p(&[0, 0]), &p(&[0, 1]), &p(&[1, 0])]).unwrap(), Orientation::Negative);
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational("-2/4"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("0.125"), Some(ratio(1, 8)));
        assert_eq!(parse_rational("-.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("+3"), Some(rat(3)));
        assert_eq!(parse_rational("2.5e2"), Some(rat(250)));
        assert_eq!(parse_rational("15e-1"), Some(ratio(3, 2)));
        for bad in ["", ".", "1/0", "abc", "1.2.3", "--1", "1e"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn point_set_rejects_duplicates() {
        let err = PointSet::new(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 0])]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint { first: 0, second: 2 });
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..7).prop_map(|(n, d)| ratio(n, d))
    }

    fn point_strategy(d: usize) -> impl Strategy<Value = Point> {
        proptest::collection::vec(small_rat(), d).prop_map(Point::new)
    }

    proptest! {
        #[test]
        fn circumsphere_passes_through_inputs(
            pts in proptest::collection::vec(point_strategy(3), 1..=4)
        ) {
            let refs: Vec<&Point> = pts.iter().collect();
            if let Ok(s) = circumsphere(&refs) {
                for q in &pts {
                    prop_assert_eq!(side_of_sphere(&s, q).unwrap(), Side::On);
                }
            }
        }

        #[test]
        fn orientation_flips_under_transposition(
            pts in proptest::collection::vec(point_strategy(2), 3),
            i in 0usize..3, j in 0usize..3,
        ) {
            prop_assume!(i != j);
            let refs: Vec<&Point> = pts.iter().collect();
            let mut swapped = refs.clone();
            swapped.swap(i, j);
            let a = orientation(&refs).unwrap();
            let b = orientation(&swapped).unwrap();
            let flipped = match a {
                Orientation::Positive => Orientation::Negative,
                Orientation::Negative => Orientation::Positive,
                Orientation::Zero => Orientation::Zero,
            };
            prop_assert_eq!(b, flipped);
        }

        #[test]
        fn lift_heights_nonnegative(q in point_strategy(3)) {
            let h = lift(&q).height;
            prop_assert!(!h.is_negative());
            prop_assert_eq!(h.is_zero(), q.coords().iter().all(Zero::is_zero));
        }
    }
}
