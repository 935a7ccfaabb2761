//! Brute-force face structure of small point configurations.
//!
//! Used for non-simplicial faces, which in practice have few vertices
//! (a slice of a (d+1)-cube has at most C(d+1, (d+1)/2) of them).

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use super::linalg::{dot, normal, signum, sub};

/// A supporting hyperplane `normal · x = offset` of a configuration, with every
/// point on the non-positive side `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Indices (into the caller's point list) lying on the hyperplane, sorted.
    pub members: Vec<usize>,
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

/// All facets of the convex hull of `points[ids]`, which must span the full
/// coordinate space `R^m` (`m = points[i].len()`).
///
/// Facet members include every point of `ids` on the facet hyperplane,
/// including points that are not extreme.
pub fn facets(points: &[Vec<BigInt>], ids: &[usize]) -> Vec<Facet> {
    let Some(&first) = ids.first() else {
        return Vec::new();
    };
    let m = points[first].len();
    if m == 1 {
        let lo = ids.iter().copied().min_by(|&a, &b| points[a][0].cmp(&points[b][0]));
        let hi = ids.iter().copied().max_by(|&a, &b| points[a][0].cmp(&points[b][0]));
        let one = BigInt::from(1);
        return [(lo, -one.clone()), (hi, one)]
            .into_iter()
            .filter_map(|(p, s)| {
                let p = p?;
                Some(Facet {
                    members: vec![p],
                    offset: &s * &points[p][0],
                    normal: vec![s],
                })
            })
            .collect();
    }

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for subset in ids.iter().copied().combinations(m) {
        if found
            .iter()
            .any(|f| subset.iter().all(|s| f.binary_search(s).is_ok()))
        {
            continue;
        }
        let base = &points[subset[0]];
        let dirs: Vec<Vec<BigInt>> = subset[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let mut n = normal(&dirs);
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        let mut pos = false;
        let mut neg = false;
        let mut members = Vec::new();
        for &q in ids {
            match signum(&dot(&n, &sub(&points[q], base))) {
                1 => pos = true,
                -1 => neg = true,
                _ => members.push(q),
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue;
        }
        if pos {
            n.iter_mut().for_each(|x| *x = -&*x);
        }
        members.sort_unstable();
        if found.insert(members.clone()) {
            let offset = dot(&n, base);
            out.push(Facet {
                members,
                normal: n,
                offset,
            });
        }
    }
    out
}

/// Drops the first axis along which `normal` is nonzero. The resulting
/// projection is injective on any hyperplane with that normal.
pub fn drop_axis_for(normal: &[BigInt]) -> usize {
    normal
        .iter()
        .position(|x| !x.is_zero())
        .expect("hyperplane normal is nonzero")
}

pub fn without_axis(p: &[BigInt], axis: usize) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .filter(|&(j, _)| j != axis)
        .map(|(_, x)| x.clone())
        .collect()
}
