//! The sampled initial law and its interface view.

use axelrod_core::{interface_view, sample_initial, MarkSource, SystemParams, Topology};

#[test]
fn two_state_two_feature_cultures_are_uniform() {
    let p = SystemParams::new(2, 2, 100_000, Topology::Torus, 21).unwrap();
    let c = sample_initial(&p, &MarkSource::new(p.seed)).unwrap();
    let mut bins = [0f64; 4];
    for x in 0..c.size() {
        bins[(c.get(x, 0) * 2 + c.get(x, 1)) as usize] += 1.0;
    }
    let expected = c.size() as f64 / 4.0;
    let chi2: f64 = bins.iter().map(|b| (b - expected).powi(2) / expected).sum();
    // 1% point of chi-square with 3 degrees of freedom.
    assert!(chi2 < 11.345, "chi2 {chi2}, bins {bins:?}");
}

#[test]
fn three_states_disagree_two_thirds_of_the_time() {
    let p = SystemParams::new(1, 3, 100_000, Topology::Torus, 22).unwrap();
    let c = sample_initial(&p, &MarkSource::new(p.seed)).unwrap();
    let n = c.num_edges() as f64;
    let rate = (0..c.num_edges()).filter(|&e| c.discordant_mask(e) != 0).count() as f64 / n;
    let se = (2.0 / 9.0 / n).sqrt();
    assert!((rate - 2.0 / 3.0).abs() < 3.0 * se, "rate {rate}");
}

#[test]
fn interface_levels_are_fair_coins() {
    let f = 4;
    let p = SystemParams::new(f, 2, 50_000, Topology::Torus, 23).unwrap();
    let s = interface_view(&sample_initial(&p, &MarkSource::new(p.seed)).unwrap());
    let n = s.num_edges();
    let occ = |e: usize, i: usize| s.occupied(e % n, i);
    let tol = |p: f64, m: f64| 3.0 * (p * (1.0 - p) / m).sqrt();
    for i in 0..f {
        let p1 = (0..n).filter(|&e| occ(e, i)).count() as f64 / n as f64;
        assert!((p1 - 0.5).abs() < tol(0.5, n as f64), "level {i}: {p1}");
    }
    // Joint occupation of neighbouring edges, and of two levels on one edge.
    let m = n as f64;
    let along = (0..n).filter(|&e| occ(e, 0) && occ(e + 1, 0)).count() as f64 / m;
    let across = (0..n).filter(|&e| occ(e, 0) && occ(e, 1)).count() as f64 / m;
    let skip = (0..n).filter(|&e| occ(e, 2) && occ(e + 2, 2)).count() as f64 / m;
    for (name, p2) in [("along", along), ("across", across), ("skip", skip)] {
        assert!((p2 - 0.25).abs() < tol(0.25, m), "{name}: {p2}");
    }
}
