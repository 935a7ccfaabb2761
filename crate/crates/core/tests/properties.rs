use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use orderk::cli::{format_points, parse_points};
use orderk::experiments::{check_invariants, sample, SampleKind, SampleSpec};
use orderk::geom::{Point, PointSet, Rational};
use orderk::oracle::brute_tiling;
use orderk::orderk::{binomial, compute_up_to_order, Mosaic};
use orderk::radius::{alpha_complex, compute_radius_function, filtration, Extended};
use orderk::tiling::{build_tiling, faces, slice_at_depth};

type Shape = BTreeSet<(usize, Vec<Vec<u32>>)>;

/// Cells as (generation, sorted vertex member lists) after relabeling points.
fn shape(m: &Mosaic, relabel: &[u32]) -> Shape {
    m.cells
        .iter()
        .map(|c| {
            let mut vs: Vec<Vec<u32>> = c
                .vertices()
                .iter()
                .map(|v| {
                    let mut m: Vec<u32> = v.members().iter().map(|&i| relabel[i as usize]).collect();
                    m.sort_unstable();
                    m
                })
                .collect();
            vs.sort();
            (c.generation(), vs)
        })
        .collect()
}

fn points() -> impl Strategy<Value = PointSet> {
    (5usize..=8, 2usize..=3, any::<u64>())
        .prop_map(|(n, d, seed)| sample(&SampleSpec::new(SampleKind::UnitBall, n, d, seed)).unwrap())
}

fn map_points(a: &PointSet, f: impl Fn(&Rational, usize) -> Rational) -> PointSet {
    PointSet::new(
        a.points()
            .iter()
            .map(|p| Point::new(p.coords().iter().enumerate().map(|(i, x)| f(x, i)).collect()))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mosaics_do_not_depend_on_point_order(a in points(), shuffle in any::<u64>()) {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = shuffle;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = a.permuted(&perm);
        let ra = compute_up_to_order(&a, n).unwrap();
        let rb = compute_up_to_order(&b, n).unwrap();
        let identity: Vec<u32> = (0..n as u32).collect();
        let back: Vec<u32> = perm.iter().map(|&i| i as u32).collect();
        for (ma, mb) in ra.mosaics.iter().zip(&rb.mosaics) {
            prop_assert_eq!(shape(ma, &identity), shape(mb, &back));
        }
    }

    #[test]
    fn similarity_transforms_preserve_mosaics(a in points(), shift in -50i64..50, scale in 1i64..20) {
        let n = a.len();
        let moved = map_points(&a, |x, i| x * Rational::from_integer(BigInt::from(scale)) + Rational::new(BigInt::from(shift + i as i64), BigInt::from(7)));
        let ra = compute_up_to_order(&a, n).unwrap();
        let rb = compute_up_to_order(&moved, n).unwrap();
        let identity: Vec<u32> = (0..n as u32).collect();
        for (ma, mb) in ra.mosaics.iter().zip(&rb.mosaics) {
            prop_assert_eq!(shape(ma, &identity), shape(mb, &identity));
        }
    }

    #[test]
    fn structural_invariants(a in points()) {
        let n = a.len();
        let d = a.dim();
        let r = compute_up_to_order(&a, n).unwrap();
        let inv = check_invariants(&r);
        prop_assert_eq!(inv.vertex_identity, Some(true));
        prop_assert!(inv.slice_cardinality && inv.vertex_coverage && inv.first_generation_extinction);
        for m in &r.mosaics {
            let counts = m.generation_counts();
            prop_assert_eq!(counts.values().sum::<usize>(), m.cells.len());
            for c in &m.cells {
                prop_assert_eq!(c.vertices().len() as u64, binomial(d + 1, c.generation()));
                // the generation counts down from the order to the anchor
                prop_assert_eq!(c.rhomboid().a_in().len() + c.generation(), m.order);
            }
        }
    }

    #[test]
    fn tiling_is_closed_and_matches_its_slices(a in points()) {
        let n = a.len();
        let r = compute_up_to_order(&a, n).unwrap();
        let t = build_tiling(&r.rhomboids, n);
        prop_assert!(t.is_face_closed());
        let brute = brute_tiling(&a).unwrap();
        prop_assert_eq!(t.rhomboids(), brute.rhomboids());
        for m in &r.mosaics {
            let slice = slice_at_depth(&Rational::from_integer(m.order.into()), &t).unwrap();
            let sliced: BTreeSet<Vec<u32>> = slice
                .cells
                .iter()
                .filter(|c| c.dimension() == 0)
                .map(|c| c.rhomboid().a_in().iter().chain(c.rhomboid().a_on()).copied().collect::<BTreeSet<u32>>().into_iter().collect())
                .collect();
            let vertices: BTreeSet<Vec<u32>> = m.vertices.iter().map(|v| v.members().to_vec()).collect();
            prop_assert_eq!(sliced, vertices);
        }
    }

    #[test]
    fn radius_is_monotone_and_alpha_complexes_nest(a in points(), k_pick in 0usize..100) {
        let n = a.len();
        let r = compute_up_to_order(&a, n).unwrap();
        let t = build_tiling(&r.rhomboids, n);
        let radii = compute_radius_function(&t, &a).unwrap();
        for (i, rho) in t.rhomboids().iter().enumerate() {
            for f in faces(rho) {
                let fv = radii.value(&t, &f).unwrap();
                prop_assert!(fv <= &radii.values[i], "{:?} above {:?}", f, rho);
            }
        }
        let k = 1 + k_pick % (n - 1);
        let entries = filtration(k, &t, &radii).unwrap();
        let mut prev: Option<BTreeSet<_>> = None;
        for e in &entries {
            let c = alpha_complex(k, &e.value, &t, &radii).unwrap();
            prop_assert!(c.is_closed());
            let cells: BTreeSet<_> = c.cells.iter().map(|x| x.cell.clone()).collect();
            if let Some(p) = &prev {
                prop_assert!(p.is_subset(&cells));
            }
            prev = Some(cells);
        }
        let full = alpha_complex(k, &Extended::PosInfinity, &t, &radii).unwrap();
        prop_assert_eq!(full.cells.len(), entries.len());
    }

    #[test]
    fn point_files_round_trip(rows in prop::collection::btree_set(prop::collection::vec((-1000i64..1000, 1i64..50), 3), 1..12)) {
        let a = PointSet::new(
            rows.iter()
                .map(|r| Point::new(r.iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect()))
                .collect(),
        );
        if let Ok(a) = a {
            prop_assert_eq!(parse_points(&format_points(&a)).unwrap(), a);
        }
    }
}
