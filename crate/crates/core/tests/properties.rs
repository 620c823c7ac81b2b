use proptest::prelude::*;

use ehrhard::columnar::ColumnarSet;
use ehrhard::connectedness::{brute_force_disconnects, decompose, essentially_disconnects, indecomposable};
use ehrhard::profile::Profile;
use ehrhard::random;
use ehrhard::rigidity::{exhaustive_search, rigidity_verdict, SEARCH_TOLERANCE};
use ehrhard::Execution;

fn set(seed: u64, bounded: bool) -> ColumnarSet {
    random::columnar_set(&mut random::rng(seed), 12, 3, bounded)
}

fn tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ehrhard_symmetral_keeps_volume_and_lowers_perimeter(seed in any::<u64>()) {
        let e = set(seed, false);
        let s = e.ehrhard_symmetral();
        prop_assert!((e.gauss_volume() - s.gauss_volume()).abs() <= 1e-12);
        prop_assert!(s.gauss_perimeter() <= e.gauss_perimeter() + 1e-10);
    }

    #[test]
    fn isoperimetric_inequality(seed in any::<u64>()) {
        let e = set(seed, false);
        let m = e.gauss_volume();
        // Bound e^{−t²/2} with Φ(t) = m, by bisection on the tail.
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if tail(mid) > m { lo = mid } else { hi = mid }
        }
        let bound = if m > 0.0 && m < 1.0 { (-0.5 * lo * lo).exp() } else { 0.0 };
        prop_assert!(e.gauss_perimeter() >= bound - 1e-10);
    }

    #[test]
    fn steiner_symmetral_keeps_volume_and_lowers_perimeter(seed in any::<u64>()) {
        let e = set(seed, true);
        let s = e.steiner_symmetral();
        let v = e.lebesgue_volume();
        prop_assert!((v - s.lebesgue_volume()).abs() <= 1e-12 * v.max(1.0));
        prop_assert!(s.lebesgue_perimeter() <= e.lebesgue_perimeter() + 1e-10);
    }

    #[test]
    fn symdiff_is_a_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (set(a, false), set(b, false), set(c, false));
        let d = |p: &ColumnarSet, q: &ColumnarSet| p.symdiff_volume(q).unwrap();
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= 1e-15);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
    }

    #[test]
    fn reflection_is_an_involution(seed in any::<u64>()) {
        let e = set(seed, false);
        prop_assert_eq!(e.reflect().reflect(), e.clone());
        prop_assert_eq!(e.reflect().gauss_perimeter(), e.gauss_perimeter());
    }

    #[test]
    fn regridding_changes_nothing(seed in any::<u64>(), z in -3.0f64..3.0) {
        let mut rng = random::rng(seed);
        let p = random::profile_1d(&mut rng, 8, 8, 0.2);
        let fine = p.refine(0, z).unwrap();
        let (f, g) = (ColumnarSet::from_profile(&p), ColumnarSet::from_profile(&fine));
        prop_assert!((f.gauss_perimeter() - g.gauss_perimeter()).abs() <= 1e-12);
        prop_assert!((f.gauss_volume() - g.gauss_volume()).abs() <= 1e-12);
        prop_assert_eq!(rigidity_verdict(&p).verdict, rigidity_verdict(&fine).verdict);
    }

    #[test]
    fn pieces_add_up(seed in any::<u64>()) {
        let e = set(seed, false);
        let pieces = decompose(&e);
        let total: f64 = pieces.iter().map(|q| q.gauss_volume()).sum();
        prop_assert!((total - e.gauss_volume()).abs() <= 1e-12);
        prop_assert!(pieces.iter().all(indecomposable));
        prop_assert_eq!(indecomposable(&e), pieces.len() == 1);
    }

    #[test]
    fn union_find_matches_brute_force(seed in any::<u64>()) {
        let p = random::profile_2d(&mut random::rng(seed), 4, 0.3);
        let scene = p.scene();
        let fast = essentially_disconnects(&scene).disconnects;
        let slow = brute_force_disconnects(&scene).unwrap();
        prop_assert_eq!(fast, slow.is_some());
        if let Some(cert) = slow {
            prop_assert!(cert.disconnects());
        }
    }

    #[test]
    fn sequential_and_parallel_search_agree(seed in any::<u64>()) {
        let p = random::profile_1d(&mut random::rng(seed), 10, 8, 0.2);
        let a = exhaustive_search(&p, 8, SEARCH_TOLERANCE, Execution::Sequential).unwrap();
        let b = exhaustive_search(&p, 8, SEARCH_TOLERANCE, Execution::Parallel).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.partitions_checked, b.partitions_checked);
    }

    #[test]
    fn profile_json_roundtrip(seed in any::<u64>()) {
        let p = random::profile_2d(&mut random::rng(seed), 3, 0.3);
        let back: Profile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}
