//! Property tests for the structural invariants: unitarity preservation,
//! Schmidt symmetry and reconstruction, projection completeness, and
//! parser round-trip/fuzz safety.

use eraser_core::expdsl::{self, ExperimentConfig, Layout};
use eraser_core::optics::OpticalElement;
use eraser_core::qcore::{schmidt, DensityOperator, StateVector, SubsystemId, SubsystemRegistry};
use eraser_core::rng::seeded;
use num_complex::Complex64;
use proptest::prelude::*;

const A: SubsystemId = SubsystemId(0);
const B: SubsystemId = SubsystemId(1);

fn complex_amp() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A normalized random state on an (A: da) x (B: db) registry.
fn bipartite_state(da: usize, db: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex_amp(), da * db)
        .prop_filter("nonzero amplitude vector", |amps| {
            amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
        .prop_map(move |amps| {
            let reg = SubsystemRegistry::new(&[(A, da), (B, db)]).unwrap();
            StateVector::from_amplitudes(reg, amps)
                .unwrap()
                .normalize()
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elements_preserve_the_norm(psi in bipartite_state(5, 3), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let u = OpticalElement::random_unitary(&[0, 1, 2, 3, 4], &mut rng).unwrap();
        let out = u.apply(&psi, A).unwrap();
        prop_assert!((out.squared_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_operators_share_eigenvalues(psi in bipartite_state(3, 4)) {
        let ev_a = psi.reduced_density(&[A]).unwrap().eigenvalues();
        let ev_b = psi.reduced_density(&[B]).unwrap().eigenvalues();
        for (x, y) in ev_a.iter().zip(&ev_b) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn schmidt_reconstructs_the_state(psi in bipartite_state(4, 5)) {
        let d = schmidt(&psi, &[A]).unwrap();
        prop_assert!(d.orthonormality_deviation() < 1e-10);
        let total: f64 = d.coefficients().iter().map(|s| s * s).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let recon = d.reconstruct().unwrap();
        prop_assert!(recon.phase_aligned_max_diff(&psi).unwrap() < 1e-10);
    }

    #[test]
    fn pure_densities_are_rank_one(psi in bipartite_state(2, 4)) {
        let rho = DensityOperator::pure(&psi).unwrap();
        rho.validate().unwrap();
        let evals = rho.eigenvalues();
        prop_assert!((evals[0] - 1.0).abs() < 1e-10);
        prop_assert!(evals[1].abs() < 1e-10);
    }

    #[test]
    fn noncontiguous_splits_agree_with_schmidt(amps in prop::collection::vec(complex_amp(), 2 * 3 * 2)) {
        // Three subsystems; keep the outer pair {A, C}. The squared Schmidt
        // coefficients across {A,C}|{B} must equal the eigenvalues of the
        // reduced operator on either side, through both the pure-state and
        // the density-operator contraction paths.
        prop_assume!(amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let c_id = SubsystemId(2);
        let reg = SubsystemRegistry::new(&[(A, 2), (B, 3), (c_id, 2)]).unwrap();
        let psi = StateVector::from_amplitudes(reg, amps)
            .unwrap()
            .normalize()
            .unwrap();
        let d = schmidt(&psi, &[A, c_id]).unwrap();
        // Kept side via the pure-state contraction; traced side via the
        // operator-level partial trace (keeping B). Schmidt symmetry makes
        // all three spectra agree.
        let ev_keep = psi.reduced_density(&[A, c_id]).unwrap().eigenvalues();
        let ev_other = DensityOperator::pure(&psi)
            .unwrap()
            .partial_trace(&[B])
            .unwrap()
            .eigenvalues();
        for (k, sigma) in d.coefficients().iter().enumerate() {
            prop_assert!((sigma * sigma - ev_keep[k]).abs() < 1e-10);
            prop_assert!((sigma * sigma - ev_other[k]).abs() < 1e-10);
        }
        let recon = d.reconstruct().unwrap();
        prop_assert!(recon.phase_aligned_max_diff(&psi).unwrap() < 1e-10);
    }

    #[test]
    fn level_projections_resolve_the_identity(psi in bipartite_state(3, 4)) {
        let sub = SubsystemRegistry::single(A, 3).unwrap();
        let mut total = 0.0;
        for level in 0..3 {
            let basis = StateVector::basis_state(
                sub.clone(),
                &eraser_core::qcore::BasisLabel::new(&[(A, level)]).unwrap(),
            )
            .unwrap();
            if let Ok((_, p)) = psi.project_renormalize(&[basis]) {
                total += p;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}

fn config_strategy() -> impl Strategy<Value = ExperimentConfig> {
    (
        prop_oneof![
            Just(Layout::Eraser),
            Just(Layout::Mirrors),
            Just(Layout::Removed)
        ],
        1usize..2000,
        0.0f64..16.0,
        -7.0f64..7.0,
        any::<bool>(),
        prop::option::of(any::<u64>()),
        prop::option::of(1u64..1_000_000_000),
    )
        .prop_map(
            |(layout, bins, cycles, phi0, merge_paths, seed, trials)| ExperimentConfig {
                layout,
                bins,
                cycles,
                phi0,
                merge_paths,
                seed,
                trials,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_emit_roundtrip(config in config_strategy()) {
        let text = expdsl::emit(&config);
        let parsed = expdsl::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &config);
        // emit ∘ parse is idempotent on canonical text.
        prop_assert_eq!(expdsl::emit(&parsed), text);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..300)) {
        let _ = expdsl::parse_bytes(&bytes);
    }

    #[test]
    fn parser_never_panics_on_keyish_text(
        parts in prop::collection::vec(
            prop_oneof![
                Just("layout".to_string()),
                Just("bins".to_string()),
                Just("cycles".to_string()),
                Just("merge_paths".to_string()),
                "[a-z#_ 0-9.\\-]{0,12}",
            ],
            0..12
        )
    ) {
        let _ = expdsl::parse(&parts.join(" "));
        let _ = expdsl::parse(&parts.join("\n"));
    }
}
