mod common;

use benchrel::metrics::*;
use benchrel::resampling::iteration_rng;
use benchrel::scoring::Ranking;
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn perm(n: usize) -> impl Strategy<Value = Vec<String>> {
    Just((0..n).map(|i| format!("m{i:02}")).collect::<Vec<_>>()).prop_shuffle()
}

fn pair() -> impl Strategy<Value = (Vec<String>, Vec<String>)> {
    (2usize..=20).prop_flat_map(|n| (perm(n), perm(n)))
}

#[test]
fn oracles_on_seeded_rankings() {
    let mut rng = iteration_rng(5, 0);
    for _ in 0..500 {
        let n = rng.random_range(2..=20);
        let a = random_order(&mut rng, n);
        let b = random_order(&mut rng, n);
        let (ra, rb) = (Ranking::from_order(&a), Ranking::from_order(&b));
        assert_eq!(kendall_tau(&ra, &rb).unwrap(), kendall_oracle(&a, &b));
        assert_eq!(weighted_kendall_tau(&ra, &rb).unwrap(), weighted_oracle(&a, &b));
    }
}

#[test]
fn transposition_near_top_costs_more() {
    let base: Vec<String> = (0..8).map(|i| format!("m{i}")).collect();
    let r = Ranking::from_order(&base);
    let mut last = f64::NEG_INFINITY;
    for p in 0..7 {
        let mut s = base.clone();
        s.swap(p, p + 1);
        let v = weighted_kendall_tau(&r, &Ranking::from_order(&s)).unwrap();
        assert!(v > last, "swap at {p}: {v} <= {last}");
        last = v;
        // Plain τ does not care where the swap is.
        assert_eq!(kendall_tau(&r, &Ranking::from_order(&s)).unwrap(), 1.0 - 2.0 / 28.0);
    }
}

proptest! {
    #[test]
    fn kendall_matches_oracle((a, b) in pair()) {
        let (ra, rb) = (Ranking::from_order(&a), Ranking::from_order(&b));
        let t = kendall_tau(&ra, &rb).unwrap();
        prop_assert_eq!(t, kendall_oracle(&a, &b));
        prop_assert_eq!(t, kendall_tau(&rb, &ra).unwrap());
        prop_assert!((-1.0..=1.0).contains(&t));
        let v = MetaMetricValue::correlation(MetaMetricKind::Kendall, t);
        prop_assert!((0.0..=1.0).contains(&v.similarity));
    }

    #[test]
    fn weighted_matches_oracle((a, b) in pair()) {
        let (ra, rb) = (Ranking::from_order(&a), Ranking::from_order(&b));
        let t = weighted_kendall_tau(&ra, &rb).unwrap();
        prop_assert_eq!(t, weighted_oracle(&a, &b));
        prop_assert_eq!(t, weighted_kendall_tau(&rb, &ra).unwrap());
        prop_assert!((-1.0..=1.0).contains(&t));
    }

    #[test]
    fn identity_and_reversal(a in (2usize..=20).prop_flat_map(perm)) {
        let mut rev = a.clone();
        rev.reverse();
        let (ra, rr) = (Ranking::from_order(&a), Ranking::from_order(&rev));
        prop_assert_eq!(kendall_tau(&ra, &ra).unwrap(), 1.0);
        prop_assert_eq!(kendall_tau(&ra, &rr).unwrap(), -1.0);
        prop_assert_eq!(weighted_kendall_tau(&ra, &ra).unwrap(), 1.0);
        prop_assert_eq!(weighted_kendall_tau(&ra, &rr).unwrap(), -1.0);
    }

    #[test]
    fn top_pair_switch_is_cluster_of_two((a, b) in pair()) {
        let (ra, rb) = (Ranking::from_order(&a), Ranking::from_order(&b));
        let top_switched = rb.rank_of(&a[1]) < rb.rank_of(&a[0]);
        prop_assert_eq!(cluster_switch(&ra, &rb, 1, 2).unwrap() == 1, top_switched);
        for size in 2..=a.len() {
            for anchor in 1..=a.len() + 1 - size {
                let expected = rb.rank_of(&a[anchor + size - 2]) < rb.rank_of(&a[anchor - 1]);
                prop_assert_eq!(cluster_switch(&ra, &rb, anchor, size).unwrap() == 1, expected);
                prop_assert_eq!(cluster_switch(&ra, &ra, anchor, size).unwrap(), 0);
            }
        }
    }
}
