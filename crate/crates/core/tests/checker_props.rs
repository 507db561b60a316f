//! Properties of the identity and centrality checks and of the classifier.

mod common;

use gpi_core::checker::classify::classify_with;
use gpi_core::checker::scan::{primeness_enumeration_test, Expectation, ScanOptions};
use gpi_core::checker::{
    check_central_with, check_graded_identity, scalar_line_certificate, CheckOptions,
    PrimenessVerdict, Status,
};
use gpi_core::exec::ExecMode;
use gpi_core::groups::FiniteGroup;
use gpi_core::matalg::{ElementaryGrading, GradedMatrixAlgebra, RingMatrix};
use gpi_core::scalars::CycloScalar;
use gpi_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn m3z3() -> GradedMatrixAlgebra {
    let gr = ElementaryGrading::from_names(FiniteGroup::cyclic(3), &["e", "g", "g^2"]).unwrap();
    GradedMatrixAlgebra::mnf(gr, 1)
}

fn m2z2() -> GradedMatrixAlgebra {
    let gr = ElementaryGrading::from_names(FiniteGroup::cyclic(2), &["e", "g"]).unwrap();
    GradedMatrixAlgebra::mnf(gr, 1)
}

/// Distinct tuple of length `n` in `Z_order`.
fn distinct_tuple() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=6)
        .prop_flat_map(|order| (Just(order), 2usize..=order.min(4)))
        .prop_flat_map(|(order, n)| {
            (Just(order), Just((0..order).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..n].to_vec()))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn identity_check_matches_generic_coordinates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = m3z3();
        let f = common::random_multihomogeneous(&mut rng, &[0, 1, 2], 4, 3);
        prop_assert_eq!(
            check_graded_identity(&f, &a).unwrap(),
            common::generic_coordinates_identity(&f, a.grading())
        );
    }

    #[test]
    fn evidence_replays(seed in any::<u64>(), grassmann in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if grassmann { GradedMatrixAlgebra::mab(1, 1, 6, 1).unwrap() } else { m2z2() };
        let f = common::random_multihomogeneous(&mut rng, &[0, 1], 4, 3);
        let v = check_central_with(&f, &a, &CheckOptions::default()).unwrap();
        match v.status {
            Status::Identity => prop_assert!(v.evidence.is_none()),
            _ => {
                let e = v.evidence.expect("evidence for a nonvanishing polynomial");
                prop_assert!(e.replays(&a));
                prop_assert_eq!(e.witness.is_some(), v.status == Status::Neither);
            }
        }
    }

    #[test]
    fn vanishing_survives_smaller_budget(seed in any::<u64>()) {
        // M_(1,1)(E) at a smaller budget is a quotient of the larger one
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_multihomogeneous(&mut rng, &[0, 1], 4, 3);
        let big = GradedMatrixAlgebra::mab(1, 1, 6, 1).unwrap();
        if check_graded_identity(&f, &big).unwrap() {
            for b in 0..6 {
                match check_graded_identity(&f, &big.with_budget(b)) {
                    Ok(vanishes) => prop_assert!(vanishes),
                    Err(e) => prop_assert!(matches!(e, Error::BudgetExceeded { .. }), "{}", e),
                }
            }
        }
    }

    #[test]
    fn status_ignores_nonzero_scaling(seed in any::<u64>(), k in 1i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = m2z2();
        let f = common::random_multihomogeneous(&mut rng, &[0, 1], 4, 3);
        let opts = CheckOptions::quick();
        let c = CycloScalar::from_ratio(-k, 2);
        prop_assert_eq!(
            check_central_with(&f, &a, &opts).unwrap().status,
            check_central_with(&f.scale(&c), &a, &opts).unwrap().status
        );
    }

    #[test]
    fn central_values_span_the_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = m2z2();
        let f = if seed % 2 == 0 {
            common::random_neutral_commutator(&mut rng, 0)
        } else {
            common::random_multihomogeneous(&mut rng, &[0, 1], 4, 3)
        };
        let status = check_central_with(&f, &a, &CheckOptions::quick()).unwrap().status;
        let line = scalar_line_certificate(&f, &a).unwrap();
        match status {
            Status::Identity => prop_assert!(line.is_none()),
            Status::Central => prop_assert_eq!(line.unwrap().p, RingMatrix::identity(2, 0)),
            Status::Neither => {
                if let Some(line) = line {
                    prop_assert!(!line.p.is_scalar_matrix());
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = m3z3();
        let f = common::random_multihomogeneous(&mut rng, &[0, 1, 2], 4, 3);
        let run = |exec| check_central_with(&f, &a, &CheckOptions { exec, ..CheckOptions::quick() }).unwrap().status;
        prop_assert_eq!(run(ExecMode::Parallel), run(ExecMode::Sequential));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every certificate the classifier returns passes its own checks, and
    /// `P^k` is scalar.
    #[test]
    fn certificates_verify((order, tuple) in distinct_tuple(), conductor in prop::sample::select(vec![1u32, 3, 4])) {
        let gr = ElementaryGrading::new(FiniteGroup::cyclic(order), tuple).unwrap();
        let opts = CheckOptions { stability_recheck: false, ..CheckOptions::default() };
        match classify_with(&gr, conductor, &opts).unwrap() {
            PrimenessVerdict::Fails(cert) => {
                prop_assert!(cert.is_verified());
                prop_assert!(cert.p.pow(cert.k as u32).is_scalar_matrix());
                prop_assert!(!cert.p.is_scalar_matrix());
                let sizes: usize = cert.orbits.iter().map(Vec::len).sum();
                prop_assert_eq!(sizes, gr.n());
            }
            PrimenessVerdict::Holds { h, characters } => {
                prop_assert!(characters >= 1);
                prop_assert!(!h.elements.is_empty());
            }
        }
    }
}

#[test]
fn scans_are_consistent_with_the_classifier() {
    let z2 = m2z2();
    let trivial = GradedMatrixAlgebra::mnf(ElementaryGrading::trivial(2), 1);
    let opts = ScanOptions::default();

    let r = primeness_enumeration_test(&z2, &opts).unwrap();
    assert_eq!(r.expectation, Expectation::Fails);
    assert!(r.consistent());
    assert!(!r.counterexamples.is_empty());
    assert!(r.counterexamples.iter().all(|p| !p.factors_central()));

    // repeated tuple: the classifier gives no expectation
    let r = primeness_enumeration_test(&trivial, &opts).unwrap();
    assert_eq!(r.expectation, Expectation::Unknown);
    assert!(r.consistent());

    let r = primeness_enumeration_test(&GradedMatrixAlgebra::mab(1, 1, 6, 1).unwrap(), &opts).unwrap();
    assert_eq!(r.expectation, Expectation::Fails);
    assert!(r.consistent());
}
