use benchrel::data::{BenchmarkData, ScoreRecord};
use benchrel::flash::*;
use benchrel::resampling::SampleSize;
use benchrel::scoring::Grouping;
use benchrel::synth::{generate, SynthSpec};

const S: fn(usize) -> SampleSize = SampleSize::Count;

/// 30 well separated models over two scenarios of 200 examples.
fn clean_reference() -> BenchmarkData {
    generate(&SynthSpec {
        models: 30,
        latent_range: [-3.0, 3.0],
        layout: vec![1, 1],
        examples: 200,
        noise_var: 0.05,
        squash: [-5.0, 5.0],
        seed: 2,
        ..SynthSpec::default()
    })
    .unwrap()
}

fn calib(sizes: Vec<SampleSize>) -> CalibrationConfig {
    CalibrationConfig { sizes, iterations: 100, ..Default::default() }
}

/// Records of a new model scoring `f(subscenario, example)` on every cell
/// of the reference.
fn newcomer(reference: &BenchmarkData, name: &str, f: impl Fn(usize, usize) -> f64) -> BenchmarkData {
    let mut recs = Vec::new();
    for (j, sub) in reference.subscenarios().iter().enumerate() {
        for (e, ex) in sub.examples.iter().enumerate() {
            for p in &sub.prompts {
                recs.push(ScoreRecord::new(name, &reference.scenarios()[sub.scenario], &sub.name, p, ex, f(j, e)));
            }
        }
    }
    BenchmarkData::from_records(recs).unwrap()
}

#[test]
fn tiers() {
    let t = TierConfig::default();
    assert_eq!(t.to_string(), "1:full,2-4:1,5-9:2,10-19:3,20+:4");
    assert_eq!(t.to_string().parse::<TierConfig>().unwrap(), t);
    assert_eq!(t.tier_rank(4, false), Some(20));
    assert_eq!(t.tier_rank(3, false), Some(10));
    assert_eq!(t.tier_rank(1, false), Some(2));
    assert_eq!(t.tier_rank(0, false), Some(2));
    assert_eq!(t.tier_rank(0, true), Some(1));
    assert_eq!(t.tier_rank(5, false), None);
    assert_eq!(t.tier_of(25).label(), "20+");
    assert_eq!(t.tier_of(3).label(), "2-4");
    for bad in ["2-4:1,5+:2", "1:full,2-4:1,6+:2", "1:3,2+:1", "1:full,2-4:1", "1:x,2+:1"] {
        assert!(matches!(bad.parse::<TierConfig>(), Err(FlashError::InvalidTiers(_))), "{bad}");
    }
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(serde_json::from_str::<TierConfig>(&json).unwrap(), t);
}

#[test]
fn calibration_edges() {
    let reference = clean_reference();
    let table = calibrate_resolution(&reference, &calib(vec![SampleSize::Full])).unwrap();
    assert_eq!(table.entries[0].res, 0);
    assert_eq!(table.entries[0].tier_rank, Some(1));

    let zero = generate(&SynthSpec { models: 12, layout: vec![2, 1], examples: 60, noise_var: 0.0, ..SynthSpec::default() }).unwrap();
    let table = calibrate_resolution(&zero, &calib(vec![S(5), S(20), SampleSize::Full])).unwrap();
    assert!(table.entries.iter().all(|e| e.res == 0 && e.raw_res == 0));

    let two = zero.filter_models(|m| m < "m02").unwrap();
    assert!(matches!(calibrate_resolution(&two, &calib(vec![S(5)])), Err(FlashError::InsufficientModels(2))));
    assert!(matches!(
        calibrate_resolution(&zero, &calib(vec![S(500)])),
        Err(FlashError::Resample(benchrel::resampling::ResampleError::SizeExceedsPool { .. }))
    ));
    assert!(matches!(calibrate_resolution(&zero, &calib(vec![S(20), S(5)])), Err(FlashError::InvalidSchedule(_))));
}

#[test]
fn reference_resolution_shrinks_with_size() {
    let data = generate(&SynthSpec::reference(0)).unwrap();
    let table = calibrate_resolution(&data, &calib(CalibrationConfig::default().sizes)).unwrap();
    let res: Vec<u32> = table.entries.iter().map(|e| e.res).collect();
    assert!(res[..4].windows(2).all(|w| w[0] > w[1]), "{res:?}");
    assert_eq!(res[4], 0);
    for e in &table.entries {
        assert!(e.res >= e.raw_res);
    }
}

#[test]
fn worst_model_stops_early() {
    let reference = clean_reference();
    let table = calibrate_resolution(&reference, &calib(vec![S(20), S(50), SampleSize::Full])).unwrap();
    assert!(table.entries[0].res <= 4, "{:?}", table.entries[0]);
    let new = newcomer(&reference, "new", |_, _| -1.0);
    let mut provider = TableProvider::single(&new).unwrap();
    let r = flash_rank(&reference, &mut provider, &table, &FlashConfig::default()).unwrap();
    assert_eq!(r.stages.len(), 1);
    assert!(r.stages[0].stop);
    assert_eq!(r.final_rank, 31);
    assert_eq!(r.tier, "20+");
    assert_eq!(r.calls_used, 40);
    assert_eq!(provider.calls(), 40);
    assert_eq!(r.savings_factor, 200.0 / 20.0);
}

#[test]
fn best_model_runs_to_the_end() {
    let reference = clean_reference();
    let table = calibrate_resolution(&reference, &calib(vec![S(20), S(50), SampleSize::Full])).unwrap();
    let new = newcomer(&reference, "new", |_, _| 2.0);
    let mut provider = TableProvider::single(&new).unwrap();
    let r = flash_rank(&reference, &mut provider, &table, &FlashConfig::default()).unwrap();
    assert_eq!(r.stages.len(), 3);
    assert!(r.stages[..2].iter().all(|s| !s.stop));
    assert_eq!(r.final_rank, 1);
    assert_eq!(r.tier, "1");
    // Nested stages: the total is the largest stage, not the sum.
    assert_eq!(r.calls_used, 400);
    assert_eq!(provider.calls(), 400);
    assert_eq!(r.savings_factor, 1.0);
}

#[test]
fn savings_grow_as_quality_drops() {
    let reference = clean_reference();
    let table = calibrate_resolution(&reference, &calib(vec![S(20), S(50), S(100), SampleSize::Full])).unwrap();
    let latent = SynthSpec { models: 30, latent_range: [-3.0, 3.0], ..SynthSpec::default() }.latent_values();
    let mut last = f64::INFINITY;
    for target in [0usize, 3, 8, 15, 29] {
        let level = ((latent[target] + 5.0) / 10.0 + 0.01).clamp(0.0, 1.0);
        let new = newcomer(&reference, "new", |_, _| level);
        let mut provider = TableProvider::single(&new).unwrap();
        let r = flash_rank(&reference, &mut provider, &table, &FlashConfig { seed: 3, ..Default::default() }).unwrap();
        assert!(r.savings_factor >= 1.0);
        assert!(r.savings_factor >= last || last.is_infinite(), "{target}: {} < {last}", r.savings_factor);
        last = r.savings_factor;
        let sizes: Vec<SampleSize> = r.stages.iter().map(|s| s.size).collect();
        assert_eq!(sizes[..], table.config.sizes[..sizes.len()]);
        assert!(r.stages[..r.stages.len() - 1].iter().all(|s| !s.stop));
    }
}

#[test]
fn errors() {
    let reference = clean_reference();
    let table = calibrate_resolution(&reference, &calib(vec![S(20), SampleSize::Full])).unwrap();
    let new = newcomer(&reference, "new", |_, _| 0.5);

    let cfg = FlashConfig { schedule: Some(vec![S(30), SampleSize::Full]), ..Default::default() };
    let mut p = TableProvider::single(&new).unwrap();
    assert!(matches!(flash_rank(&reference, &mut p, &table, &cfg), Err(FlashError::UncalibratedSize(SampleSize::Count(30)))));

    // The provider lacks the second subscenario.
    let partial = new.filter_models(|_| true).unwrap();
    let partial = BenchmarkData::from_records(partial.records().filter(|r| r.subscenario.starts_with("s00")).collect()).unwrap();
    let mut p = TableProvider::single(&partial).unwrap();
    assert!(matches!(flash_rank(&reference, &mut p, &table, &FlashConfig::default()), Err(FlashError::ProviderGap { .. })));

    let cfg = FlashConfig { grouping: Grouping::BySubscenario, ..Default::default() };
    let mut p = TableProvider::single(&new).unwrap();
    assert!(matches!(flash_rank(&reference, &mut p, &table, &cfg), Err(FlashError::CalibrationMismatch(_))));

    let mut p = TableProvider::from_data(&reference, "m00").unwrap();
    assert!(matches!(flash_rank(&reference, &mut p, &table, &FlashConfig::default()), Err(FlashError::CalibrationMismatch(_))));
}

#[test]
fn per_tier_pooling_reports_one_resolution_per_tier() {
    let data = generate(&SynthSpec::reference(1)).unwrap();
    let cfg = CalibrationConfig { pooling: Pooling::PerTier, ..calib(vec![S(20), S(200), SampleSize::Full]) };
    let table = calibrate_resolution(&data, &cfg).unwrap();
    for e in &table.entries {
        assert_eq!(e.tier_res.len(), 5);
        assert!(e.tier_res.iter().all(|&r| r <= e.res.max(*e.tier_res.iter().max().unwrap())));
    }
    // The sparse tail is resolved long before the crowded top.
    let first = &table.entries[0].tier_res;
    assert!(first[4] < first[1], "{first:?}");
    assert_eq!(table.entries[2].tier_res, vec![0; 5]);
}
