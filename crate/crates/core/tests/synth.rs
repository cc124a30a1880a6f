use benchrel::data::write_delimited;
use benchrel::resampling::*;
use benchrel::scoring::*;
use benchrel::synth::*;
use num_rational::Ratio;

#[test]
fn zero_noise_recovers_latent_order() {
    let spec = SynthSpec { models: 8, layout: vec![2, 1, 3], examples: 20, prompts: 2, noise_var: 0.0, seed: 5, ..SynthSpec::default() };
    let data = generate(&spec).unwrap();
    for grouping in [Grouping::ByScenario, Grouping::BySubscenario] {
        let t = mean_win_rate(&data, data.models(), grouping, &Selection::full(&data), TiePolicy::Strict).unwrap();
        let r = ranking(&t);
        assert_eq!(r.order, spec.model_names());
        assert_eq!(t.exact("m00"), Some(Ratio::from_integer(1)));
    }
}

#[test]
fn same_seed_same_bytes() {
    let spec = SynthSpec { models: 5, prompts: 2, prompt_var: 0.3, interaction_var: 0.2, example_var: 0.1, spread_var: 0.5, difficulty_var: 0.4, seed: 17, ..SynthSpec::default() };
    let bytes = |s: &SynthSpec| {
        let mut out = Vec::new();
        write_delimited(&generate(s).unwrap(), &mut out).unwrap();
        out
    };
    assert_eq!(bytes(&spec), bytes(&spec));
    assert_ne!(bytes(&spec), bytes(&SynthSpec { seed: 18, ..spec.clone() }));
}

#[test]
fn mean_score_follows_latent() {
    let spec = SynthSpec { models: 12, layout: vec![1, 1], examples: 400, noise_var: 1.0, seed: 3, ..SynthSpec::default() };
    let data = generate(&spec).unwrap();
    let mut means = vec![0.0; data.n_models()];
    let mut counts = vec![0.0; data.n_models()];
    for r in data.records() {
        let m = data.model_index(&r.model).unwrap();
        means[m] += r.score;
        counts[m] += 1.0;
    }
    let means: Vec<f64> = means.iter().zip(&counts).map(|(s, c)| s / c).collect();
    // Expected gap between neighbours is about 0.015; sampling error is far smaller.
    assert!(means.windows(2).all(|w| w[0] > w[1]), "{means:?}");
}

#[test]
fn more_noise_less_reliable() {
    let mut gap = 0.0;
    for seed in 0..4 {
        let est = |noise: f64| {
            let data = generate(&SynthSpec { models: 10, layout: vec![1; 4], examples: 60, noise_var: noise, seed, ..SynthSpec::default() }).unwrap();
            let cfg = DiorConfig { axis: Axis::Examples, size: SampleSize::Count(15), iterations: 200, seed, ..Default::default() };
            dior(&data, &cfg, Objective::FullRanking).unwrap().point_estimate
        };
        let (lo, hi) = (est(1.0), est(2.0));
        gap += lo - hi;
    }
    assert!(gap > 0.0, "{gap}");
}

#[test]
fn worked_cases_match() {
    for name in CASE_NAMES {
        let case = appendix_case(name).unwrap();
        for v in &case.variants {
            let t = mean_win_rate(&v.data, &v.models, v.grouping, &Selection::full(&v.data), v.tie_policy).unwrap();
            for (m, want) in &v.expected {
                let want = Ratio::new(*want.numer() as i128, *want.denom() as i128);
                assert_eq!(t.exact(m), Some(want), "{name}/{}: {m}", v.label);
            }
            let units = UnitScores::compute(&v.data, v.grouping, &Selection::full(&v.data));
            let subset: Vec<usize> = v.models.iter().map(|m| v.data.model_index(m).unwrap()).collect();
            let fractions = unit_win_fractions(&units, &subset, v.tie_policy);
            for (m, want) in &v.expected_unit_win_rates {
                let pos = v.models.iter().position(|x| x == m).unwrap();
                let got: Vec<Ratio<i128>> = fractions[pos].iter().flatten().map(|f| f.ratio()).collect();
                let want: Vec<Ratio<i128>> = want.iter().map(|r| Ratio::new(*r.numer() as i128, *r.denom() as i128)).collect();
                assert_eq!(got, want, "{name}/{}: {m}", v.label);
            }
        }
    }
    assert!(matches!(appendix_case("other"), Err(SynthError::UnknownCase(_))));
}

#[test]
fn presets() {
    let spec = SynthSpec::reference(0);
    assert_eq!(spec.latent.len(), 37);
    assert!(spec.latent.windows(2).all(|w| w[0] > w[1]));
    let (with, names) = SynthSpec::reference_with_newcomers(0, &[2, 25]).unwrap();
    assert_eq!(names, ["m37", "m38"]);
    assert_eq!(with.models, 39);
    let l = &with.latent;
    assert!(l[0] > l[37] && l[37] > l[1]);
    assert!(l[23] > l[38] && l[38] > l[24]);
    assert!(SynthSpec::reference_with_newcomers(0, &[0]).is_err());
    assert!(SynthSpec::reference_with_newcomers(0, &[39]).is_err());
    assert!(SynthSpec::heterogeneous(0).validate().is_ok());
}
