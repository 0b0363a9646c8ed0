use dimers::recursion::{self, step, structural};
use dimers::{iterate, BoundaryCountVector, Family};
use num_bigint::BigUint;
use proptest::prelude::*;

fn v(x: &str, y: &str, z: &str, w: &str) -> BoundaryCountVector {
    BoundaryCountVector::parse(x, y, z, w).unwrap()
}

#[test]
fn frozen_hanoi_ledger() {
    let ledger = iterate(Family::Hanoi, 3).unwrap();
    assert_eq!(ledger[0].counts, BoundaryCountVector::initial());
    assert_eq!(ledger[1].counts, v("18", "16", "15", "14"));
    assert_eq!(ledger[2].counts, v("568301", "521504", "478579", "439204"));
    assert_eq!(
        ledger[3].counts,
        v(
            "18782596680434060148",
            "17236435531779805328",
            "15817552541478488865",
            "14515470321889909750"
        )
    );
    assert_eq!(ledger[1].m, BigUint::from(125u32));
    assert_eq!(ledger[2].m, BigUint::from(4_007_754u32));
}

#[test]
fn frozen_sierpx_ledger() {
    let ledger = iterate(Family::SierpX, 3).unwrap();
    assert_eq!(ledger[1].counts, v("66", "56", "49", "44"));
    assert_eq!(
        ledger[2].counts,
        v("87837347", "76020480", "65794261", "56944448")
    );
    assert_eq!(
        ledger[3].counts,
        v(
            "213175217650167042919081256",
            "184498173678586828013178352",
            "159678861670954453048115477",
            "138198326607977450114587516"
        )
    );
}

#[test]
fn records_are_consistent_and_strictly_ordered() {
    for family in Family::ALL {
        for r in iterate(family, 12).unwrap() {
            assert!(r.is_consistent());
            if r.n >= 1 {
                assert!(r.counts.is_strictly_ordered(), "{family} n={}", r.n);
            }
        }
    }
}

#[test]
fn expanded_tables_agree_with_structural_forms() {
    assert!(recursion::expansion_mismatches(Family::Hanoi).is_empty());
    assert!(recursion::expansion_mismatches(Family::SierpX).is_empty());
    let printed = recursion::printed_sierpx_diagnostics();
    assert_eq!(printed.len(), 2);
}

/// Exact checks of the ratio monotonicity and enclosure statements.
#[test]
fn ratio_monotonicity_exact_to_twelve() {
    for family in Family::ALL {
        let ledger = iterate(family, 12).unwrap();
        for pair in ledger[1..].windows(2) {
            let (a, b) = (&pair[0].counts, &pair[1].counts);
            let n = pair[0].n;
            // 1/2 < alpha and gamma < 1.
            assert!(&a.y * 2u32 > a.x && a.w < a.z, "{family} n={n}");
            // alpha increasing, gamma decreasing.
            assert!(&b.y * &a.x > &a.y * &b.x, "{family} alpha n={n}");
            assert!(&b.w * &a.z < &a.w * &b.z, "{family} gamma n={n}");
            if n >= 2 {
                // alpha < beta < gamma.
                assert!(&a.y * &a.y < &a.x * &a.z, "{family} alpha<beta n={n}");
                assert!(&a.z * &a.z < &a.y * &a.w, "{family} beta<gamma n={n}");
                // eps' < 2 eps^2 with eps = gamma - alpha = (wx - yz)/(xz).
                let e_a = &a.w * &a.x - &a.y * &a.z;
                let e_b = &b.w * &b.x - &b.y * &b.z;
                let d_a = &a.x * &a.z;
                let d_b = &b.x * &b.z;
                assert!(
                    &e_b * &d_a * &d_a < e_a.pow(2) * 2u32 * d_b,
                    "{family} eps n={n}"
                );
            }
        }
    }
}

fn small_vector() -> impl Strategy<Value = BoundaryCountVector> {
    (0u64..1000, 0u64..1000, 0u64..1000, 0u64..1000)
        .prop_map(|(x, y, z, w)| BoundaryCountVector::new(x, y, z, w))
}

proptest! {
    #[test]
    fn recursion_is_cubic_homogeneous(s in small_vector(), c in 1u64..50) {
        prop_assume!(!s.is_zero());
        for family in Family::ALL {
            let c = BigUint::from(c);
            let lhs = step(family, &s.scaled(&c)).unwrap();
            let rhs = step(family, &s).unwrap().scaled(&c.pow(3));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn structural_form_matches_step(s in small_vector()) {
        prop_assume!(!s.is_zero());
        for family in Family::ALL {
            let [x, y, z, w] = s.components().map(Clone::clone);
            let [x2, y2, z2, w2] = structural(family, &[x, y, z, w]);
            prop_assert_eq!(step(family, &s).unwrap(), BoundaryCountVector::new(x2, y2, z2, w2));
        }
    }
}

#[test]
fn zero_vector_is_rejected() {
    let zero = BoundaryCountVector::new(0u32, 0u32, 0u32, 0u32);
    assert!(step(Family::Hanoi, &zero).is_err());
}

#[test]
fn exact_cap_is_enforced() {
    assert!(recursion::iterate_capped(Family::Hanoi, 5, 4).is_err());
}

#[test]
fn ledger_serializes_with_decimal_strings() {
    let ledger = iterate(Family::Hanoi, 3).unwrap();
    let json = serde_json::to_string(&ledger[3]).unwrap();
    assert!(json.contains("\"x\":\"18782596680434060148\""));
    assert!(json.contains("\"m\":\"132460031222098852477\""));
    let back: dimers::StageRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, ledger[3]);
}
