mod common;

use proptest::prelude::*;
use uavbs::atg_channel::{coverage_radius, mean_path_loss, AtgEnvironment, RadioConfig, MAX_COVERAGE_RADIUS_M};
use uavbs::geometry::Point2;
use uavbs::mobility_forecast::rmse;
use uavbs::placement::{allocate_links, best_disk, UeLink};
use uavbs::scenario::{density_map, generate_crowd, HotSpot, Region, Ue};

fn ues(points: &[(f64, f64)]) -> Vec<Ue> {
    points
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| Ue { id: i as u32, position: Point2::new(x, y), demand: 1 })
        .collect()
}

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..5.0f64, 0.0..5.0f64), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn best_disk_matches_combinatorial(pts in points(12), r in 0.3..2.0f64) {
        let exact = common::combinatorial_max_cover(&pts, r, 0.0);
        prop_assume!(common::combinatorial_max_cover(&pts, r, 1e-6) == exact);
        let choice = best_disk(&ues(&pts), r);
        prop_assert_eq!(choice.covered.len(), exact);
        // The reported set is exactly what the center covers.
        for (i, &(x, y)) in pts.iter().enumerate() {
            let inside = Point2::new(x, y).distance(&choice.center) <= r * (1.0 + 1e-9);
            prop_assert_eq!(inside, choice.covered.binary_search(&(i as u32)).is_ok());
        }
    }

    #[test]
    fn allocation_invariants(
        links in prop::collection::vec((0.5e6..5e6f64, 0.0..8.0f64), 1..40),
        bandwidth in 1e6..40e6f64,
        cap in 1e6..200e6f64,
    ) {
        let links: Vec<UeLink> = links
            .iter()
            .enumerate()
            .map(|(i, &(min_rate, efficiency))| UeLink { id: i as u32, min_rate, efficiency })
            .collect();
        let out = allocate_links(&links, bandwidth, cap);
        let a = &out.allocation;
        prop_assert!(a.total_bandwidth() <= bandwidth * (1.0 + 1e-12));
        prop_assert!(a.total_rate() <= cap * (1.0 + 1e-12));
        let mut ids: Vec<u32> = out.kept.iter().chain(&out.evicted).copied().collect();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..links.len() as u32).collect::<Vec<_>>());
        for l in &links {
            match a.grants.get(&l.id) {
                Some(g) => {
                    prop_assert!(g.rate_bps >= l.min_rate * (1.0 - 1e-12));
                    prop_assert!((g.rate_bps - g.bandwidth_hz * l.efficiency).abs() <= 1e-6 * g.rate_bps);
                }
                None => prop_assert!(out.evicted.contains(&l.id)),
            }
        }

        // Re-simulate the eviction rule from scratch.
        let mut active: Vec<&UeLink> = links.iter().filter(|l| l.efficiency > 0.0).collect();
        loop {
            let need: f64 = active.iter().map(|l| l.min_rate / l.efficiency).sum();
            let floor: f64 = active.iter().map(|l| l.min_rate).sum();
            if active.is_empty() || (need <= bandwidth && floor <= cap) {
                break;
            }
            let mut worst = 0;
            for k in 1..active.len() {
                let (a, b) = (active[k], active[worst]);
                let (ra, rb) = (a.min_rate / a.efficiency, b.min_rate / b.efficiency);
                if ra > rb || (ra == rb && (a.efficiency < b.efficiency || (a.efficiency == b.efficiency && a.id > b.id))) {
                    worst = k;
                }
            }
            active.remove(worst);
        }
        let mut expected: Vec<u32> = active.iter().map(|l| l.id).collect();
        expected.sort_unstable();
        prop_assert_eq!(&out.kept, &expected);
    }

    #[test]
    fn rmse_permutation_and_scale(
        pairs in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 1..60),
        shift in 0usize..60,
        c in 0.01..100.0f64,
    ) {
        let (t, p): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let base = rmse(&t, &p).unwrap().value;
        let k = shift % t.len();
        let (mut t2, mut p2) = (t.clone(), p.clone());
        t2.rotate_left(k);
        p2.rotate_left(k);
        prop_assert!((rmse(&t2, &p2).unwrap().value - base).abs() <= 1e-9 * base.max(1.0));
        let ts: Vec<f64> = t.iter().map(|v| v * c).collect();
        let ps: Vec<f64> = p.iter().map(|v| v * c).collect();
        prop_assert!((rmse(&ts, &ps).unwrap().value - c * base).abs() <= 1e-9 * (c * base).max(1.0));
        prop_assert!(base >= 0.0);
    }

    #[test]
    fn crowd_stays_in_region_and_density_conserves(
        n in 0usize..400,
        seed in any::<u64>(),
        sigma in 1.0..800.0f64,
        cell in 10.0..700.0f64,
    ) {
        let region = Region::new(0.0, 1000.0, -200.0, 300.0).unwrap();
        let hotspots = [HotSpot::new(Point2::new(950.0, 250.0), sigma, 0.7), HotSpot::new(Point2::new(100.0, 0.0), 20.0, 0.3)];
        let crowd = generate_crowd(&region, &hotspots, n, seed).unwrap();
        prop_assert_eq!(crowd.len(), n);
        prop_assert!(crowd.iter().all(|u| region.contains(&u.position)));
        let field = density_map(&crowd, &region, cell).unwrap();
        prop_assert_eq!(field.total(), n as u64);
    }

    #[test]
    fn coverage_radius_is_the_threshold_edge(h in 10.0..1000.0f64, preset in 0usize..4, thr in 85.0..115.0f64) {
        let env = AtgEnvironment::presets()[preset].clone();
        let radio = RadioConfig { pl_threshold_db: thr, ..RadioConfig::default() };
        let r = coverage_radius(h, &env, &radio);
        let loss = |r: f64| mean_path_loss(h, r, &env, radio.carrier_hz).unwrap();
        if r == 0.0 {
            prop_assert!(loss(0.0) > thr);
        } else if r < MAX_COVERAGE_RADIUS_M {
            prop_assert!(loss(r) <= thr);
            prop_assert!(loss(r + 2e-6) > thr);
        }
    }
}
