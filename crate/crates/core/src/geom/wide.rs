//! Exact integer arithmetic for the hull, either with big integers or with
//! 256-bit fixed-width integers when an a-priori bound rules out overflow.

use std::fmt::Debug;
use std::hash::Hash;

use ethnum::I256;
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use smallvec::SmallVec;

use super::linalg;

/// Coordinates or a normal vector, stored inline for small dimensions.
pub type Coords<T> = SmallVec<[T; 6]>;

pub trait ExactInt: Clone + Ord + Hash + Debug + Send + Sync {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn signum(&self) -> i8;
    fn to_big(&self) -> BigInt;
    /// Generalized cross product of `m - 1` vectors in `R^m`.
    fn normal(vectors: &[Vec<Self>]) -> Vec<Self>;
    fn fnv(&self, h: u64) -> u64;

    /// Normal of the hyperplane through `m` points of `R^m`, as
    /// [`ExactInt::normal`] of the differences from the first point.
    fn normal_through(points: &[&[Self]]) -> Coords<Self> {
        let base = points[0];
        let dirs: Vec<Vec<Self>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(x, y)| x.sub(y)).collect())
            .collect();
        Self::normal(&dirs).into_iter().collect()
    }

    fn positive(&self) -> bool {
        self.signum() > 0
    }
}

fn fnv_bytes(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^= 0xff;
    h.wrapping_mul(0x100000001b3)
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i8 {
        linalg::signum(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn normal(vectors: &[Vec<Self>]) -> Vec<Self> {
        linalg::normal(vectors)
    }
    fn fnv(&self, h: u64) -> u64 {
        fnv_bytes(h, &self.to_signed_bytes_le())
    }
}

impl ExactInt for I256 {
    fn zero() -> Self {
        I256::ZERO
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn signum(&self) -> i8 {
        I256::signum128(*self) as i8
    }
    fn to_big(&self) -> BigInt {
        BigInt::from_signed_bytes_le(&self.to_le_bytes())
    }
    fn normal(vectors: &[Vec<Self>]) -> Vec<Self> {
        let m = vectors.len() + 1;
        if m == 4 {
            return normal4(&vectors[0], &vectors[1], &vectors[2]).to_vec();
        }
        (0..m)
            .map(|col| {
                let cols: Vec<usize> = (0..m).filter(|&j| j != col).collect();
                let d = laplace(vectors, &cols);
                if (m - 1 + col).is_multiple_of(2) {
                    d
                } else {
                    -d
                }
            })
            .collect()
    }
    fn fnv(&self, h: u64) -> u64 {
        fnv_bytes(h, &self.to_le_bytes())
    }
    fn normal_through(points: &[&[Self]]) -> Coords<Self> {
        if let [p, q, r, s] = points {
            let diff = |a: &[I256]| -> [I256; 4] { [a[0] - p[0], a[1] - p[1], a[2] - p[2], a[3] - p[3]] };
            return Coords::from_slice(&normal4(&diff(q), &diff(r), &diff(s)));
        }
        let base = points[0];
        let dirs: Vec<Vec<Self>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(x, y)| x.sub(y)).collect())
            .collect();
        Self::normal(&dirs).into_iter().collect()
    }
}

/// Normal of three vectors in `R^4` from the 2x2 minors of the last two.
fn normal4(u: &[I256], v: &[I256], w: &[I256]) -> [I256; 4] {
    let m = |i: usize, j: usize| v[i] * w[j] - v[j] * w[i];
    let (m01, m02, m03, m12, m13, m23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
    [
        -(u[1] * m23 - u[2] * m13 + u[3] * m12),
        u[0] * m23 - u[2] * m03 + u[3] * m02,
        -(u[0] * m13 - u[1] * m03 + u[3] * m01),
        u[0] * m12 - u[1] * m02 + u[2] * m01,
    ]
}

/// Cofactor expansion of the last `cols.len()` rows restricted to `cols`.
fn laplace(rows: &[Vec<I256>], cols: &[usize]) -> I256 {
    let r = &rows[rows.len() - cols.len()];
    match cols {
        [] => I256::ONE,
        [a] => r[*a],
        [a, b] => {
            let s = &rows[rows.len() - 1];
            r[*a] * s[*b] - r[*b] * s[*a]
        }
        [a, b, c] => {
            let s = &rows[rows.len() - 2];
            let t = &rows[rows.len() - 1];
            r[*a] * (s[*b] * t[*c] - s[*c] * t[*b]) - r[*b] * (s[*a] * t[*c] - s[*c] * t[*a])
                + r[*c] * (s[*a] * t[*b] - s[*b] * t[*a])
        }
        _ => {
            let mut acc = I256::ZERO;
            for (k, &c) in cols.iter().enumerate() {
                if r[c] == I256::ZERO {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let t = r[c] * laplace(rows, &rest);
                acc = if k % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

/// Converts to 256 bits; `None` if the value does not fit.
pub fn to_wide(x: &BigInt) -> Option<I256> {
    if x.bits() > 254 {
        return None;
    }
    let mut bytes = [if x.sign() == Sign::Minus { 0xffu8 } else { 0 }; 32];
    let raw = x.to_signed_bytes_le();
    bytes[..raw.len()].copy_from_slice(&raw);
    Some(I256::from_le_bytes(bytes))
}

/// Whether hull predicates on points in `R^dim` with coordinates of absolute
/// value below `2^coord_bits` stay inside 256 bits.
///
/// Every quantity the hull forms is bounded by `(dim+1)! (4 M)^dim` with
/// `M = 2^coord_bits`: cofactor terms of the facet normals over coordinate
/// differences, their products with differences, and the interior test
/// against a sum of `dim + 1` points.
pub fn fits_wide(dim: usize, coord_bits: u64) -> bool {
    if dim > 5 {
        return false;
    }
    let fact_bits = (1..=dim as u64 + 1).map(|k| 64 - k.leading_zeros() as u64).sum::<u64>();
    fact_bits + dim as u64 * (coord_bits + 2) <= 250
}

pub fn max_bits<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> u64 {
    values.into_iter().map(|x| x.abs().bits()).max().unwrap_or(0)
}
