use proptest::prelude::*;

use perclab::ghost::bits_encoding;
use perclab::multiscale::{make_schedule, orange_peel_trace, p_infinity, two_point_zone};
use perclab::percolation::{clusters, delta, sprinkle, EdgeLabels, Sweep};
use perclab::{GraphFamily, GraphPatch};

fn z2(r: usize) -> GraphPatch {
    GraphPatch::build(GraphFamily::HyperCubic(2), r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sprinkle_is_a_semigroup(p in 0.01f64..0.7, a in 0.0f64..1.5, b in 0.0f64..1.5) {
        let once = sprinkle(p, a + b).unwrap();
        let twice = sprinkle(sprinkle(p, a).unwrap(), b).unwrap();
        prop_assert!((once - twice).abs() < 1e-12);
        prop_assert!(once >= p);
    }

    #[test]
    fn delta_inverts_sprinkle(p in 0.01f64..0.9, lambda in 0.0f64..2.0) {
        let q = sprinkle(p, lambda).unwrap();
        prop_assume!(q < 1.0);
        prop_assert!((delta(p, q).unwrap() - lambda).abs() < 1e-8);
    }

    #[test]
    fn bits_encoding_reproduces_parameters(d in 2usize..8, a in 0.0f64..1.0, b in 0.01f64..1.0, c in 0.01f64..1.0) {
        let df = d as f64;
        let p1 = 1.0 / df + a * (1.0 - 1.0 / df) * 0.9;
        let p2 = p1 + b * (1.0 - p1) * 0.9;
        let h = c / df;
        prop_assume!(p1 < p2 && p2 < 1.0);
        let enc = bits_encoding(p1, p2, h, d).unwrap();
        let back = |q: f64| 1.0 - (1.0 - q).powi(enc.m_e as i32);
        prop_assert!((back(enc.q1) - p1).abs() < 1e-10);
        prop_assert!((back(enc.q2) - p2).abs() < 1e-10);
        prop_assert!(enc.q1 >= 1.0 / df - 1e-12 && enc.q1 <= 2.0 / df + 1e-12);
        prop_assert!(enc.m_g >= 1);
        prop_assert!(enc.ghost_intensity() >= h * (1.0 - 1e-12));
    }

    #[test]
    fn schedule_identities(n0 in 16f64..1e12, p0 in 0.05f64..0.9, k in 0.0f64..2.0, b in 0.0f64..0.5) {
        let s = make_schedule(n0, p0, k, b, 12).unwrap();
        let base = s.base_delta();
        for i in 1..s.delta.len() {
            prop_assert!((s.delta[i] - base * 3f64.powi(-(i as i32))).abs() < 1e-12);
            prop_assert!((s.logloglog_n[i] - s.logloglog_n[i - 1] - 9f64.ln()).abs() < 1e-9);
        }
        prop_assert!((s.delta[0] - base - k * b).abs() < 1e-12);
        for w in s.p.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        for i in 0..s.p.len() - 1 {
            if s.p[i + 1] < 1.0 {
                prop_assert!((delta(s.p[i], s.p[i + 1]).unwrap() - s.delta[i]).abs() < 1e-7);
            }
        }
        let limit = p_infinity(&s).unwrap();
        prop_assert!(*s.p.last().unwrap() <= limit + 1e-12);
    }

    #[test]
    fn sweep_matches_direct_clusters(seed in 0u64..1000, p in 0.0f64..1.0) {
        let patch = z2(4);
        let labels = EdgeLabels::sample(patch.graph(), seed, 0);
        let mut sweep = Sweep::new(&patch, &labels);
        let a = sweep.advance_to(p).partition();
        let b = clusters(&patch, &labels, p).partition();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn orange_peel_counts_never_increase(seed in 0u64..10_000, p in 0.3f64..0.7, gap in 0.02f64..0.2) {
        let patch = z2(16);
        let t = orange_peel_trace(&patch, 16, p, p + gap, 1.0, None, seed).unwrap();
        for w in t.sizes().windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn zone_is_monotone_in_p(seed in 0u64..10_000, p in 0.2f64..0.8, bump in 0.0f64..0.2) {
        let patch = z2(6);
        let lo = two_point_zone(&patch, p, 5, 1e4, 60, seed).unwrap();
        let hi = two_point_zone(&patch, p + bump, 5, 1e4, 60, seed).unwrap();
        prop_assert!(lo <= hi);
    }
}
