use std::collections::BTreeSet;
use std::io::Write;

use benchrel::data::*;
use proptest::prelude::*;

fn ident() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z]{1,3}",
        "[a-z], [a-z]\"".prop_map(|s| s.to_string()),
        Just("mixed Case-1".to_string()),
    ]
}

fn records() -> impl Strategy<Value = Vec<ScoreRecord>> {
    let score = prop_oneof![-1e6f64..1e6, Just(0.0), Just(1.0), any::<f64>().prop_filter("finite", |v| v.is_finite())];
    prop::collection::vec((ident(), 0u8..3, 0u8..3, ident(), ident(), score), 1..40).prop_map(|rows| {
        let mut seen = BTreeSet::new();
        rows.into_iter()
            .filter_map(|(m, sc, sub, p, e, v)| {
                // Subscenario names embed their scenario, so the taxonomy is consistent.
                let scenario = format!("S{sc}");
                let subscenario = format!("S{sc}/{sub}");
                seen.insert((m.clone(), subscenario.clone(), p.clone(), e.clone()))
                    .then(|| ScoreRecord::new(m, scenario, subscenario, p, e, v))
            })
            .collect()
    })
}

fn sorted(mut v: Vec<ScoreRecord>) -> Vec<String> {
    let mut out: Vec<String> = v.drain(..).map(|r| serde_json::to_string(&r).unwrap()).collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn delimited_round_trip(recs in records()) {
        let data = BenchmarkData::from_records(recs.clone()).unwrap();
        let mut buf = Vec::new();
        write_delimited(&data, &mut buf).unwrap();
        let back = read_results(buf.as_slice(), Format::DelimitedTable, "buf").unwrap();
        prop_assert_eq!(&back, &data);
        prop_assert_eq!(sorted(back.records().collect()), sorted(recs));
    }

    #[test]
    fn record_lines_round_trip(recs in records()) {
        let data = BenchmarkData::from_records(recs).unwrap();
        let mut buf = Vec::new();
        write_record_lines(&data, &mut buf).unwrap();
        let back = read_results(buf.as_slice(), Format::RecordLines, "buf").unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn row_order_is_irrelevant(recs in records(), seed in any::<u64>()) {
        let mut shuffled = recs.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = BenchmarkData::from_records(recs).unwrap();
        let b = BenchmarkData::from_records(shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_delimited(&a, &mut x).unwrap();
        write_delimited(&b, &mut y).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn indexes_are_consistent(recs in records()) {
        let data = BenchmarkData::from_records(recs.clone()).unwrap();
        let models: BTreeSet<&str> = recs.iter().map(|r| r.model.as_str()).collect();
        prop_assert_eq!(data.models().iter().map(String::as_str).collect::<BTreeSet<_>>(), models);
        for sub in data.subscenarios() {
            let ex: BTreeSet<&str> = recs.iter().filter(|r| r.subscenario == sub.name).map(|r| r.example_id.as_str()).collect();
            prop_assert_eq!(sub.examples.iter().map(String::as_str).collect::<BTreeSet<_>>(), ex);
            prop_assert_eq!(data.scenarios()[sub.scenario].as_str(), data.taxonomy().scenario_of(&sub.name).unwrap());
        }
        prop_assert_eq!(data.record_count(), recs.len());
        let report = validate(&data);
        prop_assert_eq!(report.records, recs.len());
    }
}

#[test]
fn load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        "model,scenario,subscenario,prompt_id,example_id,score\r\nA,S,s1,p1,e1,1\r\nB,S,s1,p1,e1,0\r\nA,S,s1,p1,e2,0.5\r\nB,S,s1,p1,e2,0.25\r\n"
    )
    .unwrap();
    let data = load_results(&path, Format::from_path(&path)).unwrap();
    assert_eq!((data.n_models(), data.n_scenarios(), data.subscenarios().len()), (2, 1, 1));
    assert_eq!(data.subscenario(0).n_examples(), 2);
    assert_eq!(data.record_count(), 4);
    assert!(validate(&data).is_clean());

    let jl = dir.path().join("scores.jsonl");
    let mut buf = Vec::new();
    write_record_lines(&data, &mut buf).unwrap();
    std::fs::write(&jl, buf).unwrap();
    assert_eq!(Format::from_path(&jl), Format::RecordLines);
    assert_eq!(load_results(&jl, Format::from_path(&jl)).unwrap(), data);

    assert!(matches!(
        load_results(&dir.path().join("absent.csv"), Format::DelimitedTable),
        Err(DataError::Io(_))
    ));
}
