use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use toric_core::complex::{complex_power, Face, SimplicialComplex};
use toric_core::fan::{BuiltinFan, DegreeVector, Fan};
use toric_core::gauss::GaussRat;
use toric_core::hermite::{exact_rank, hermite_dimension, stacked_system, ExactMatrix, HermiteSpec};
use toric_core::intmat::{smith_invariants, IntMatrix};
use toric_core::poly::{jet, jet_section, mult_part, RationalPoly};
use toric_core::stability::{
    band_brute_force, band_closed_form, connectivity_bound, e1_support, stability_dim, CellStatus,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fixture(i: usize) -> Fan {
    let b = [
        BuiltinFan::ProjectiveSpace(1),
        BuiltinFan::ProjectiveSpace(2),
        BuiltinFan::ProjectiveSpace(3),
        BuiltinFan::Hirzebruch(1),
        BuiltinFan::Hirzebruch(2),
        BuiltinFan::Hirzebruch(4),
    ][i % 6];
    b.build().unwrap()
}

fn degrees_for(fan: &Fan, seed: &[u64]) -> DegreeVector {
    DegreeVector::new((0..fan.ray_count()).map(|i| 1 + seed[i % seed.len()]).collect()).unwrap()
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stability_dim_is_monotone_under_shifts(
        fi in 0usize..6, n in 2u64..5,
        base in prop::collection::vec(0u64..20, 4), shift in prop::collection::vec(0u64..10, 4),
    ) {
        let fan = fixture(fi);
        let d = degrees_for(&fan, &base);
        let a: Vec<u64> = (0..fan.ray_count()).map(|i| shift[i % shift.len()]).collect();
        let da = d.shifted(&a).unwrap();
        prop_assert!(stability_dim(&d, &fan, n).unwrap() <= stability_dim(&da, &fan, n).unwrap());
        if d.min() >= n {
            prop_assert!(connectivity_bound(&fan, n).unwrap() <= stability_dim(&d, &fan, n).unwrap());
        }
    }

    #[test]
    fn e1_labels_are_justified(fi in 0usize..6, n in 2u64..4, base in prop::collection::vec(0u64..12, 4)) {
        let fan = fixture(fi);
        let d = degrees_for(&fan, &base);
        let e = e1_support(&d, &fan, n, None).unwrap();
        let rm = e.r_min as i64;
        let (dp, r, n) = (e.d_prime as i64, fan.ray_count() as i64, n as i64);
        for (&(k, s), &status) in &e.cells {
            let slope = 2 * n * rm - 2;
            // re-derive each status from the vanishing conditions
            let zero_reason = match k {
                0 => s != 0,
                k if k <= dp => {
                    let dim_c = 2 * k + k * 2 * n * (r - rm);
                    s < slope * k || 2 * n * r * k - s < 0 || 2 * n * r * k - s > dim_c
                }
                _ => s < slope * dp,
            };
            match status {
                CellStatus::Zero => prop_assert!(zero_reason, "({k},{s}) zero without reason"),
                CellStatus::PossiblyNonzero => prop_assert!(!zero_reason && k <= dp),
                CellStatus::TailUnknown => prop_assert!(!zero_reason && k == dp + 1),
            }
            if (1..=dp).contains(&k) && s - k < (2 * n * rm - 3) * k {
                prop_assert_eq!(status, CellStatus::Zero);
            }
        }
    }

    #[test]
    fn band_closed_form_matches_enumeration(dp in 1u64..9, rm in 2u64..5, n in 2u64..5) {
        let terms = band_brute_force(dp, rm, n);
        prop_assert!(!terms.is_empty());
        for (t, bf) in terms {
            prop_assert_eq!(bf, band_closed_form(dp, rm, n, t));
        }
    }

    #[test]
    fn hermite_dimension_is_d_minus_rank(
        nums in prop::collection::btree_set(-30i64..30, 1..4), n in 1usize..4, extra in 0usize..4,
        targets in prop::collection::vec(-20i64..20, 12),
    ) {
        let points: Vec<BigRational> = nums.iter().map(|&x| q(x, 7)).collect();
        let k = points.len();
        let d = n * k + extra;
        let rank = exact_rank(&stacked_system(&points, n, d).unwrap());
        prop_assert_eq!(rank, n * k);
        let t: Vec<Vec<BigRational>> = (0..n).map(|l| (0..k).map(|j| q(targets[(l * k + j) % targets.len()], 1)).collect()).collect();
        let sol = hermite_dimension(&HermiteSpec { points, order: n, degree: d, targets: t }).unwrap();
        prop_assert_eq!(sol.dimension, d - rank);
    }

    #[test]
    fn rank_agrees_with_smith_and_transpose(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 1..5)) {
        let m = ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect());
        let t = ExactMatrix::from_rows((0..4).map(|j| rows.iter().map(|r| q(r[j], 1)).collect()).collect());
        let ints = IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>());
        let rank = exact_rank(&m);
        prop_assert_eq!(rank, exact_rank(&t));
        prop_assert_eq!(rank, smith_invariants(&ints).len());
    }

    #[test]
    fn smith_product_is_determinant(e in prop::array::uniform9(-5i64..6)) {
        let m = [[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]];
        let det = det3(&m);
        let inv = smith_invariants(&IntMatrix::from_rows(&m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>()));
        if det == 0 {
            prop_assert!(inv.len() < 3);
        } else {
            let prod: BigInt = inv.iter().product();
            prop_assert_eq!(prod, BigInt::from(det.abs()));
            prop_assert!(inv.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
        }
    }

    #[test]
    fn mult_part_degree_counts_excess_multiplicity(
        roots in prop::collection::btree_set(-9i64..10, 1..4), mults in prop::collection::vec(1u32..5, 4), n in 1usize..5,
    ) {
        let rs: Vec<(GaussRat, u32)> = roots.iter().zip(&mults).map(|(&a, &m)| (GaussRat::from_ints(a, 0), m)).collect();
        let f = RationalPoly::from_roots(&rs);
        let want: usize = rs.iter().map(|(_, m)| (*m as usize + 1).saturating_sub(n)).sum();
        prop_assert_eq!(mult_part(&f, n).unwrap().degree().unwrap_or(0), want);
    }

    #[test]
    fn jet_of_section_recovers_vector(parts in prop::collection::vec((-50i64..50, 1i64..50, -50i64..50, 1i64..50), 1..7)) {
        let b: Vec<GaussRat> = parts.iter().map(|&(a, b, c, d)| GaussRat::new(q(a, b), q(c, d))).collect();
        let f = jet_section(&b).unwrap();
        prop_assert_eq!(jet(&f, b.len()).unwrap().eval(&GaussRat::zero()), b);
    }

    #[test]
    fn complex_power_matches_full_row_definition(
        r in 1usize..5, n in 1usize..3, faces in prop::collection::vec(prop::collection::btree_set(0usize..4, 0..4), 1..4),
    ) {
        let max: Vec<Vec<usize>> = faces.iter().map(|f| f.iter().copied().filter(|&v| v < r).collect()).collect();
        let k = SimplicialComplex::from_max_faces(r, &max).unwrap();
        let p = complex_power(&k, n).unwrap();
        let total = r * n;
        let expected: BTreeSet<Face> = (0u64..1 << total)
            .filter(|&mask| {
                let full: Vec<usize> = (0..r).filter(|&i| (0..n).all(|j| mask >> (i * n + j) & 1 == 1)).collect();
                k.contains(&Face::new(full))
            })
            .map(|mask| Face::new((0..total).filter(|&b| mask >> b & 1 == 1).collect()))
            .collect();
        prop_assert_eq!(p.faces(), &expected);
    }
}
