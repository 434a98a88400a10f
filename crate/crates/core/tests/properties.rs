use blochspace::bloch::{bloch_dot, bloch_to_density, density_to_bloch, BlochVector, INPUT_TOLERANCE};
use blochspace::eigen::eigen_oracle;
use blochspace::io::{parse_state, to_json, StateInput};
use blochspace::positivity::{check_positivity, s_from_bloch};
use blochspace::sampling::{ginibre_state, pure_state, uniform_bloch};
use blochspace::sections::{pure_states, qutrit_f, scan, section_f, PointClass, SectionType};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TYPES: [SectionType; 7] = [
    SectionType::I,
    SectionType::II,
    SectionType::III,
    SectionType::IV,
    SectionType::V,
    SectionType::VI,
    SectionType::VII,
];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_params_round_trip(two_j in 1u32..=6, seed in any::<u64>()) {
        let v = uniform_bloch(&mut rng(seed), two_j, 0.3).unwrap();
        let params = v.real_params();
        prop_assert_eq!(params.len(), v.dim() * v.dim() - 1);
        let back = BlochVector::from_real_params(two_j, &params).unwrap();
        prop_assert_eq!(back.real_params(), params);
    }

    #[test]
    fn json_round_trip_is_bit_exact(two_j in 1u32..=4, seed in any::<u64>()) {
        let v = uniform_bloch(&mut rng(seed), two_j, 1.0).unwrap();
        match parse_state(&to_json(&v).unwrap()).unwrap() {
            StateInput::Bloch(w) => prop_assert_eq!(w.real_params(), v.real_params()),
            StateInput::Matrix(_) => prop_assert!(false, "parsed as matrix"),
        }
        let rho = bloch_to_density(&v).unwrap();
        match parse_state(&to_json(&rho).unwrap()).unwrap() {
            StateInput::Matrix(m) => prop_assert_eq!(m.max_abs_diff(&rho), 0.0),
            StateInput::Bloch(_) => prop_assert!(false, "parsed as Bloch vector"),
        }
    }

    #[test]
    fn convexity_closure(n in 2usize..=6, seed in any::<u64>(), s in 0.01f64..0.99) {
        let mut r = rng(seed);
        let (r1, r2) = (ginibre_state(&mut r, n), ginibre_state(&mut r, n));
        let mix = &r1.scale_real(s) + &r2.scale_real(1.0 - s);
        let v1 = density_to_bloch(&r1, INPUT_TOLERANCE).unwrap().real_params();
        let v2 = density_to_bloch(&r2, INPUT_TOLERANCE).unwrap().real_params();
        let vm = density_to_bloch(&mix, INPUT_TOLERANCE).unwrap().real_params();
        for ((a, b), m) in v1.iter().zip(&v2).zip(&vm) {
            prop_assert!((s * a + (1.0 - s) * b - m).abs() < 1e-12);
        }
        prop_assert!(check_positivity(&mix, 1e-12).unwrap().verdict.is_positive());
    }

    #[test]
    fn positive_states_stay_inside_the_hypersphere(n in 2usize..=8, seed in any::<u64>()) {
        let rho = ginibre_state(&mut rng(seed), n);
        let v = density_to_bloch(&rho, INPUT_TOLERANCE).unwrap();
        let radius_sq = (n as f64 - 1.0) / n as f64;
        prop_assert!(v.norm_sq() <= radius_sq + 1e-12);
        let purity = rho.trace_of_product(&rho).re;
        prop_assert!((purity - 1.0 / n as f64 - v.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn pure_states_have_unit_overlap_with_themselves(n in 2usize..=8, seed in any::<u64>()) {
        let v = density_to_bloch(&pure_state(&mut rng(seed), n), INPUT_TOLERANCE).unwrap();
        prop_assert!((bloch_dot(&v, &v).unwrap() - (n as f64 - 1.0) / n as f64).abs() < 1e-12);
        let s = s_from_bloch(&v).unwrap();
        for sk in &s[1..] {
            prop_assert!(sk.abs() < 1e-10);
        }
    }

    #[test]
    fn section_formulas_match_embedding(kind in 0usize..7, s in -1.0f64..1.0, t in -1.0f64..1.0) {
        let kind = TYPES[kind];
        for &(p, q) in kind.members() {
            let section = blochspace::sections::Section::from_pair(p, q).unwrap();
            let embedded = qutrit_f(&section.embed(s, t));
            prop_assert!((embedded - section_f(kind, s, t)).abs() < 1e-14);
        }
    }

    #[test]
    fn section_symmetries(s in -1.0f64..1.0, t in -1.0f64..1.0) {
        prop_assert!((section_f(SectionType::I, s, t) - section_f(SectionType::I, -s, t)).abs() < 1e-15);
        prop_assert!((section_f(SectionType::II, s, t) - section_f(SectionType::II, s, -t)).abs() < 1e-15);
        prop_assert!((section_f(SectionType::III, s, t) - section_f(SectionType::IV, s, -t)).abs() < 1e-15);
        prop_assert!((section_f(SectionType::VI, s, t) - section_f(SectionType::VI, t, s)).abs() < 1e-15);
    }
}

#[test]
fn hypersphere_overshoots_the_state_space_for_qutrits() {
    // S_2 ≥ 0 holds on the whole ball, yet points of it fail S_3 ≥ 0.
    let mut r = rng(11);
    let mut found = 0;
    for _ in 0..2000 {
        let v = uniform_bloch(&mut r, 2, 0.35).unwrap();
        if v.norm_sq() > 2.0 / 3.0 {
            continue;
        }
        let s = s_from_bloch(&v).unwrap();
        assert!(s[1] >= -1e-12);
        if s[2] < -1e-9 {
            found += 1;
            let eig = eigen_oracle(&bloch_to_density(&v).unwrap()).unwrap();
            assert!(*eig.last().unwrap() < 0.0);
        }
    }
    assert!(found > 0);
}

#[test]
fn pure_states_are_rank_one_and_on_the_boundary() {
    for kind in TYPES {
        let result = scan(kind.section(), 201, 1e-9).unwrap();
        let h = result.step();
        for (s, t) in pure_states(kind) {
            let rho = bloch_to_density(&kind.section().embed(s, t).to_bloch()).unwrap();
            let eig = eigen_oracle(&rho).unwrap();
            assert!((eig[0] - 1.0).abs() < 1e-12, "{kind:?} ({s}, {t}): {eig:?}");
            let near = result
                .boundary
                .iter()
                .flatten()
                .map(|&(x, y)| (x - s).hypot(y - t))
                .fold(f64::INFINITY, f64::min);
            assert!(near < 2.0 * h, "{kind:?} ({s}, {t}) is {near} from the boundary");
        }
    }
}

#[test]
fn allowed_region_shrinks_with_the_cubic_term() {
    // the cubic term only removes points from the disk bounded by the quadratic part
    for kind in TYPES {
        let result = scan(kind.section(), 101, 1e-9).unwrap();
        for p in &result.points {
            if p.class == PointClass::Allowed {
                assert!(p.norm_sq <= 2.0 / 3.0 + 1e-9);
                assert!(p.f >= -1e-9);
            }
        }
        assert!(result.count(PointClass::Allowed) > 0);
    }
}
