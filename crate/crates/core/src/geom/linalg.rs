//! Exact linear algebra over big integers and big rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Determinant of a square integer matrix.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            let a = &m[1][1] * &m[2][2] - &m[1][2] * &m[2][1];
            let b = &m[1][0] * &m[2][2] - &m[1][2] * &m[2][0];
            let c = &m[1][0] * &m[2][1] - &m[1][1] * &m[2][0];
            &m[0][0] * a - &m[0][1] * b + &m[0][2] * c
        }
        _ => bareiss(m.to_vec()),
    }
}

// Fraction-free elimination; every division below is exact.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Generalized cross product of `m - 1` vectors in `R^m`.
///
/// The result `n` satisfies `n · x = det([v_1; ...; v_{m-1}; x])` for every `x`,
/// so it is orthogonal to every input vector and vanishes iff they are dependent.
pub fn normal(vectors: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = vectors.len() + 1;
    debug_assert!(vectors.iter().all(|v| v.len() == m));
    (0..m)
        .map(|col| {
            let minor: Vec<Vec<BigInt>> = vectors
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det(&minor);
            if (m - 1 + col).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Rank of a list of integer row vectors.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut basis = EchelonBasis::default();
    rows.iter().filter(|r| basis.insert(r)).count()
}

/// Affine rank (dimension of the affine hull) of a non-empty point list.
pub fn affine_dim(points: &[&[BigInt]]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<BigInt>> = rest.iter().map(|p| sub(p, first)).collect();
    rank(&diffs)
}

/// Incrementally maintained row-echelon basis, used to grow affinely
/// independent sets one vector at a time.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis; returns the nonzero remainder, if any.
    pub fn reduce(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let g = v[*piv].gcd(&row[*piv]);
            let a = &row[*piv] / &g;
            let b = &v[*piv] / &g;
            for (x, y) in v.iter_mut().zip(row) {
                *x = &*x * &a - y * &b;
            }
        }
        v.iter().any(|x| !x.is_zero()).then_some(v)
    }

    /// Adds `v` if it is independent of the basis. Returns whether it was added.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        match self.reduce(v) {
            Some(mut r) => {
                let piv = r.iter().position(|x| !x.is_zero()).expect("nonzero row");
                let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                if !g.is_one() {
                    r.iter_mut().for_each(|x| *x = &*x / &g);
                }
                self.rows.push((piv, r));
                true
            }
            None => false,
        }
    }
}

/// Solves the square system `a x = b` exactly. Returns `None` if `a` is singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

/// Scales every axis of a rational point list by the lcm of that axis'
/// denominators, giving integer coordinates. Positive per-axis scaling is an
/// affine map, so convexity and the lower side are preserved.
pub fn to_integer_coords(points: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let dims = first.len();
    let scales: Vec<BigInt> = (0..dims)
        .map(|j| {
            points
                .iter()
                .fold(BigInt::one(), |l, p| l.lcm(p[j].denom()))
        })
        .collect();
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(&scales)
                .map(|(x, s)| x.numer() * (s / x.denom()))
                .collect()
        })
        .collect()
}

/// Clears the denominators of one rational row by a positive factor.
pub fn clear_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Sign of an integer as -1, 0 or 1.
pub fn signum(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
