mod oracles;

use num_traits::One;
use proptest::prelude::*;

use modform_core::certify::{bound_lower, verify_mult_bound_constants, BoundSpec};
use modform_core::dimension::{dim, dim_full, dim_new_convolved, dim_new_direct};
use modform_core::numthy::{factorize, BETA, MOBIUS, NU2, NU2_NEW, NU3, NU3_NEW, NU_INF, NU_INF_NEW, PSI, PSI_NEW};
use modform_core::sequence::{
    exactly_once, hits_all_naturals, multiset_density, preimage, weight_form, Coverage, PeriodicLinearForm,
};
use modform_core::signpattern::{
    builtin_fixtures, dim_sigma, enumerate_patterns, invert_traces, sigma_form, Provenance, TraceLibrary,
};
use modform_core::{Rational, SpaceKind, Weight};

fn w(k: u64) -> Weight {
    Weight::new(k).unwrap()
}

#[test]
fn newspace_convolution_identity() {
    for n in 1..=2000u64 {
        let f = factorize(n).unwrap();
        for k in 1..=20 {
            assert_eq!(dim_new_direct(&f, w(k)).unwrap(), dim_new_convolved(&f, w(k)).unwrap(), "N={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn dimension_functions_are_multiplicative(m in 1u64..5000, n0 in 1u64..5000) {
        // strip from n every prime it shares with m
        let mut n = n0;
        loop {
            let g = num_integer::gcd(m, n);
            if g == 1 {
                break;
            }
            n /= g;
        }
        let (fm, fn_, fmn) = (factorize(m).unwrap(), factorize(n).unwrap(), factorize(m * n).unwrap());
        for g in [&PSI, &PSI_NEW, &NU_INF, &NU_INF_NEW, &NU2, &NU2_NEW, &NU3, &NU3_NEW, &MOBIUS, &BETA] {
            prop_assert_eq!(g.eval(&fmn), g.eval(&fm) * g.eval(&fn_), "{}", g.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bound_lower_is_sound(new in any::<bool>(), k in 1u64..40, n in prop_oneof![1u64..10_000, 1u64..50_000_000, 1u64..(1u64 << 40)]) {
        let kind = if new { SpaceKind::New } else { SpaceKind::Full };
        let got = bound_lower(&BoundSpec::new(kind, w(k)), n);
        let (lo, hi) = oracles::bound_interval(kind, k, n);
        prop_assert!(got <= lo, "N={} k={} {}", n, k, kind);
        // integer root brackets cost at most one unit per term
        prop_assert!(hi - &got <= Rational::from_integer(8.into()));
    }
}

#[test]
fn multiplicative_bounds_hold_to_a_million() {
    const LIMIT: u64 = 1_000_000;
    assert_eq!(oracles::first_mult_bound_failure(LIMIT), None);
    let report = verify_mult_bound_constants(LIMIT).unwrap();
    assert!(report.omega_product && report.pi_product && report.small_factors_at_least_one && report.crossover);
    assert_eq!(report.spot_checked, LIMIT);
}

fn surjective_forms() -> Vec<PeriodicLinearForm> {
    let mut forms = Vec::new();
    for n in [1u64, 2, 3, 4] {
        forms.push(weight_form(SpaceKind::Full, &factorize(n).unwrap()).unwrap());
    }
    for n in [1u64, 2, 3, 4, 8, 12, 16, 18] {
        forms.push(weight_form(SpaceKind::New, &factorize(n).unwrap()).unwrap());
    }
    let lib = builtin_fixtures();
    for n in lib.levels() {
        let t = lib.get(&factorize(n).unwrap()).unwrap();
        for s in enumerate_patterns(t.level()).unwrap() {
            forms.push(sigma_form(&t, &s).unwrap());
        }
    }
    forms
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn shift_construction_gives_preimages(pick in any::<prop::sample::Index>(), frac in 0.0f64..=1.0) {
        let forms = surjective_forms();
        let form = &forms[pick.index(forms.len())];
        let Coverage::Covers { hits } = hits_all_naturals(form) else {
            panic!("form expected to be surjective");
        };
        let n = (frac * (10 * form.a()) as f64) as u64;
        let k = preimage(form, &hits, n);
        prop_assert_eq!(form.value(k), n);
    }
}

#[test]
fn uncovered_values_are_never_attained() {
    for kind in SpaceKind::ALL {
        for n in 1..=400u64 {
            let f = factorize(n).unwrap();
            let form = weight_form(kind, &f).unwrap();
            if let Coverage::Misses { value } = hits_all_naturals(&form) {
                for k in 1..=1000 {
                    assert_ne!(dim(kind, &f, w(k)).unwrap(), value, "{kind} N={n} k={k}");
                }
            }
        }
    }
}

#[test]
fn exactly_once_implies_surjective_with_unit_density() {
    let lib = builtin_fixtures();
    for n in [1u64, 11, 14, 15] {
        let t = lib.get(&factorize(n).unwrap()).unwrap();
        let density = multiset_density(t.level(), SpaceKind::Full, true).unwrap();
        for s in enumerate_patterns(t.level()).unwrap() {
            let form = sigma_form(&t, &s).unwrap();
            let once = exactly_once(&form).unwrap().holds();
            assert_eq!(once, density == Rational::one(), "N={n} {s}");
            if once {
                assert!(hits_all_naturals(&form).is_surjective());
            }
        }
    }
    for kind in SpaceKind::ALL {
        for n in 1..=100u64 {
            let form = weight_form(kind, &factorize(n).unwrap()).unwrap();
            if exactly_once(&form).map(|v| v.holds()).unwrap_or(false) {
                assert!(hits_all_naturals(&form).is_surjective());
                assert_eq!(form.a(), 12 * form.b());
            }
        }
    }
}

#[test]
fn trace_round_trip_is_identity() {
    let lib = builtin_fixtures();
    for n in lib.levels() {
        let level = factorize(n).unwrap();
        let table = lib.get(&level).unwrap();
        let dims: Vec<_> = enumerate_patterns(&level)
            .unwrap()
            .into_iter()
            .map(|s| {
                let v = (1..=60).map(|k| dim_sigma(&level, w(k), &s, SpaceKind::Full, &table).unwrap()).collect();
                (s, v)
            })
            .collect();
        let back = invert_traces(&level, SpaceKind::Full, &dims, Provenance::Derived).unwrap();
        assert_eq!(back, table);
        for k in 1..=100 {
            let sum: u64 = dims.iter().map(|(s, _)| dim_sigma(&level, w(k), s, SpaceKind::Full, &back).unwrap()).sum();
            assert_eq!(sum, dim_full(&level, w(k)).unwrap());
        }
    }
    let text = lib.render();
    assert_eq!(text.parse::<TraceLibrary>().unwrap().render(), text);
    assert!(TraceLibrary::empty(SpaceKind::New).render().parse::<TraceLibrary>().unwrap().levels().is_empty());
}

#[test]
fn empirical_density_trend() {
    use modform_core::certify::ScanConfig;
    use modform_core::sequence::empirical_set_density;
    let cfg = ScanConfig { limit: 40_000_000, ..ScanConfig::default() };
    let at = |x| empirical_set_density(SpaceKind::New, w(1), x, &cfg).unwrap();
    let (d3, d5) = (at(1_000), at(100_000));
    assert_eq!(d3.attained, 1_001);
    // 67846 is the least omitted value
    assert!(d5.attained < 100_001);
    assert!(d5.density <= d3.density + Rational::new(1.into(), 10.into()));
}

#[test]
fn prefilter_cutoffs_match_oracle() {
    use modform_core::sequence::density_prefilter;
    for kind in SpaceKind::ALL {
        assert_eq!(density_prefilter(kind).unwrap().cutoff, oracles::density_cutoff(kind));
    }
}

#[test]
fn fixture_sequences_match_closed_forms() {
    let lib = builtin_fixtures();
    let shapes = [(11, "+", 0), (11, "-", 1), (14, "++", 0), (14, "-+", 2), (14, "+-", 1), (14, "--", 2)];
    let shapes = shapes.into_iter().chain([(15, "++", 0), (15, "-+", 2), (15, "+-", 1), (15, "--", 2)]);
    for (n, s, i) in shapes {
        let level = factorize(n).unwrap();
        let t = lib.get(&level).unwrap();
        let sigma = modform_core::signpattern::SignPattern::parse(&level, s).unwrap();
        for k in 1..=100 {
            assert_eq!(dim_sigma(&level, w(k), &sigma, SpaceKind::Full, &t).unwrap(), oracles::pattern_closed_forms(k)[i]);
        }
    }
}
