use metadist::record::Format;
use metadist::table::{read_table, write_table};
use metadist::{CliError, Column, RunRecord};
use metadist_core::thz::AbsorptionTable;
use proptest::prelude::*;

#[test]
fn table_round_trip() {
    let table = AbsorptionTable::synthetic_valley();
    let mut buf = Vec::new();
    write_table(&table, &mut buf).unwrap();
    assert!(buf.starts_with(b"frequency_hz,k_per_m\n"));
    assert_eq!(read_table(buf.as_slice()).unwrap(), table);
}

#[test]
fn table_accepts_comments_and_spaces() {
    let text = "# HITRAN export\nfrequency_hz, k_per_m\n3.4e11, 0.01\n# gap\n3.75e11, 0.02\n";
    let t = read_table(text.as_bytes()).unwrap();
    assert_eq!(t.len(), 2);
    assert!((t.k_at(3.575e11).unwrap() - 0.015).abs() < 1e-15);
}

#[test]
fn table_errors_are_ingest_errors() {
    for text in [
        "freq,k\n1,2\n3,4\n",
        "frequency_hz,k_per_m\n2e11,0.1\n1e11,0.1\n",
        "frequency_hz,k_per_m\n1e11,abc\n2e11,0.1\n",
        "frequency_hz,k_per_m\n1e11,-0.1\n2e11,0.1\n",
        "frequency_hz,k_per_m\n1e11,0.1\n",
    ] {
        let err = read_table(text.as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Ingest(_)), "{text}: {err}");
        assert_eq!(err.exit_code(), 4);
    }
}

fn sample_record() -> RunRecord {
    RunRecord::new(
        "ab12".into(),
        7,
        vec![
            Column::full("p2", "1", vec![0.1, 0.2, 0.30000000000000004]),
            Column::full("R_closed_single", "1", vec![1.0, 0.123456789012345678, 1e-17]),
            Column::new("R_mc", "1", vec![Some(0.5), None, Some(0.25)]),
            Column::new("W", "Hz", vec![Some(1.5e8), Some(2e9), None]),
        ],
    )
    .unwrap()
}

#[test]
fn record_csv_round_trip() {
    let rec = sample_record();
    let text = rec.to_csv();
    assert!(text.starts_with("# schema=1\n"));
    assert!(text.contains("\n# units=1,1,1,Hz\n"));
    assert_eq!(RunRecord::from_csv(&text).unwrap(), rec);
}

#[test]
fn record_json_round_trip() {
    let rec = sample_record();
    let mut buf = Vec::new();
    rec.write(Format::Json, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(RunRecord::from_json(&text).unwrap(), rec);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["columns"][2]["values"][1], serde_json::Value::Null);
}

#[test]
fn record_parse_rejects_damage() {
    let text = sample_record().to_csv();
    assert!(RunRecord::from_csv(&text.replace("# schema=1", "# schema=2")).is_err());
    assert!(RunRecord::from_csv(&text.replace("# units=1,1,1,Hz", "# units=1,1")).is_err());
    assert!(RunRecord::from_csv(&text.replace("# seed=7\n", "")).is_err());
    assert!(RunRecord::from_csv(&text.replace("0.5", "x")).is_err());
}

proptest! {
    #[test]
    fn any_finite_values_round_trip(
        values in prop::collection::vec(prop::option::of(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO), 1..20),
        seed in any::<u64>(),
    ) {
        let axis: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let rec = RunRecord::new(
            "h".into(),
            seed,
            vec![Column::full("p1", "1", axis), Column::new("R", "1", values)],
        ).unwrap();
        let back = RunRecord::from_csv(&rec.to_csv()).unwrap();
        prop_assert_eq!(back.columns[1].values.len(), rec.columns[1].values.len());
        for (a, b) in back.columns[1].values.iter().zip(&rec.columns[1].values) {
            prop_assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
        }
        let json = serde_json::to_string(&rec).unwrap();
        prop_assert_eq!(RunRecord::from_json(&json).unwrap(), rec);
    }
}
