use std::io::Cursor;

use boundary_sewing::error::GeoDataError;
use boundary_sewing::estimators::CalibrationResult;
use boundary_sewing::geodata::{
    analyze, aral_window, load, parse_csv, AnalyzeOptions, Elevation, GeoFormat, GeoSample, SyntheticCoast,
};
use boundary_sewing::geom::Rect;
use boundary_sewing::metric::Projection;
use boundary_sewing::rng;
use rand::seq::SliceRandom;

fn sinusoid() -> SyntheticCoast {
    SyntheticCoast::Sinusoidal { mid_lat: 45.97, amplitude: 0.05, waves: 3.0 }
}

fn coast(n: usize, seed: u64, elevation: Elevation) -> GeoSample {
    sinusoid().generate(&aral_window(), n, &elevation, &mut rng::stream(seed, 0))
}

fn ramp() -> Elevation {
    Elevation::Ramp { base: 5.0, per_lon: 20.0, per_lat: 10.0 }
}

#[test]
fn four_row_csv_fields_round_trip() {
    let text = "lon,lat,label,elevation\n59.25,45.91,1,0.125\n58.95,46.03,0,0\n59,45.95,1,-3.5\n59.1,46,0,7\n";
    let (records, lines) = parse_csv(Cursor::new(text)).unwrap();
    assert_eq!(lines, vec![2, 3, 4, 5]);
    assert_eq!((records[0].lon, records[0].lat, records[0].land, records[0].elevation), (59.25, 45.91, true, 0.125));
    assert_eq!((records[2].lon, records[2].lat, records[2].land, records[2].elevation), (59.0, 45.95, true, -3.5));
    assert!(!records[1].land);
    let sample = GeoSample::new(records, None).unwrap();
    assert_eq!(sample.to_csv_string(), text);
    assert_eq!(sample.window, Rect::new(58.95, 59.25, 45.91, 46.03).unwrap());
}

#[test]
fn bad_rows_are_named() {
    let err = parse_csv(Cursor::new("lon,lat,label,elevation\n59,45.9,1,2\n59,95,1,2\n")).unwrap_err();
    assert!(matches!(err, GeoDataError::LatitudeOutOfRange { line: 3, .. }));
    assert!(err.to_string().contains("line 3"));
    let err = parse_csv(Cursor::new("59,45.9,1\n")).unwrap_err();
    assert!(matches!(err, GeoDataError::Malformed { line: 1, .. }));
    let err = parse_csv(Cursor::new("59,45.9,1,nan\n")).unwrap_err();
    assert!(matches!(err, GeoDataError::Malformed { line: 1, .. }));
}

#[test]
fn empty_and_out_of_window_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "lon,lat,label,elevation\n").unwrap();
    assert!(matches!(load(&empty, None, None), Err(GeoDataError::Empty)));
    let one = dir.path().join("one.csv");
    std::fs::write(&one, "50,45.95,1,3\n").unwrap();
    assert!(matches!(load(&one, None, Some(aral_window())), Err(GeoDataError::OutsideWindow { line: 1 })));
    assert!(matches!(load(&dir.path().join("missing.csv"), None, None), Err(GeoDataError::Io { .. })));
}

#[test]
fn synthetic_files_round_trip_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let sample = coast(1000, 1, ramp());
    for (name, format) in [("coast.csv", GeoFormat::Csv), ("coast.jsonl", GeoFormat::Jsonl)] {
        let path = dir.path().join(name);
        sample.save(&path, format).unwrap();
        let written = std::fs::read_to_string(&path).unwrap();
        let loaded = load(&path, None, Some(aral_window())).unwrap();
        assert_eq!(loaded.records, sample.records);
        let again = dir.path().join(format!("again-{name}"));
        loaded.save(&again, format).unwrap();
        assert_eq!(std::fs::read_to_string(&again).unwrap(), written);
    }
}

#[test]
fn straight_coast_constant_elevation() {
    let s = SyntheticCoast::Straight { lat: 45.97 }.generate(&aral_window(), 10_000, &Elevation::Constant { value: 10.0 }, &mut rng::stream(2, 0));
    let r = analyze(&s, &CalibrationResult::default(), &AnalyzeOptions::default()).unwrap();
    assert!((r.h_bar_m - 10.0).abs() < 0.5);
    assert!(r.s_h_m < 0.5);
    assert_eq!(r.trim_k, 2);
}

#[test]
fn record_order_does_not_matter() {
    let s = coast(5_000, 3, ramp());
    let base = analyze(&s, &CalibrationResult::default(), &AnalyzeOptions::default()).unwrap();
    let mut shuffled = s.clone();
    shuffled.records.shuffle(&mut rng::stream(3, 1));
    let again = analyze(&shuffled, &CalibrationResult::default(), &AnalyzeOptions::default()).unwrap();
    assert_eq!(base, again);
}

#[test]
fn moments_do_not_depend_on_alpha() {
    let s = coast(5_000, 4, ramp());
    let a = analyze(&s, &CalibrationResult::constant(1.0), &AnalyzeOptions::default()).unwrap();
    let b = analyze(&s, &CalibrationResult::constant(1.25), &AnalyzeOptions::default()).unwrap();
    assert_eq!((a.h_bar_m, a.s_h_m), (b.h_bar_m, b.s_h_m));
    assert!((a.length_km / b.length_km - 1.25).abs() < 1e-13);
}

#[test]
fn sea_as_body_gives_the_same_length() {
    let s = coast(5_000, 5, Elevation::Constant { value: 1.0 });
    let flipped = s.flipped();
    let opts = AnalyzeOptions::default();
    let a = analyze(&s, &CalibrationResult::default(), &opts).unwrap();
    let b = analyze(&flipped, &CalibrationResult::default(), &opts).unwrap();
    assert!((a.length_km - b.length_km).abs() <= 1e-12 * a.length_km);
    assert_eq!(a.inner_length_km, b.outer_length_km);
    assert_eq!(a.outer_length_km, b.inner_length_km);
}

#[test]
fn trimming_never_lengthens_the_coast() {
    let s = coast(20_000, 6, ramp());
    let mut last = f64::INFINITY;
    for trim_k in 0..10 {
        let r = analyze(&s, &CalibrationResult::default(), &AnalyzeOptions { trim_k, ..Default::default() }).unwrap();
        assert!(r.length_km <= last);
        last = r.length_km;
    }
}

#[test]
fn ramp_mean_elevation_is_recovered() {
    let window = aral_window();
    let truth = sinusoid().mean_elevation(&window, &ramp());
    let reps = 20;
    let mean: f64 = (0..reps)
        .map(|r| {
            let s = sinusoid().generate(&window, 100_000, &ramp(), &mut rng::stream(7, r));
            analyze(&s, &CalibrationResult::default(), &AnalyzeOptions::default()).unwrap().h_bar_m
        })
        .sum::<f64>()
        / reps as f64;
    assert!((mean / truth - 1.0).abs() < 0.02, "{mean} vs {truth}");
}

#[test]
fn sinusoidal_length_within_five_percent() {
    let window = aral_window();
    let truth = sinusoid().length_km(&window);
    let s = coast(100_000, 8, Elevation::Constant { value: 1.0 });
    for projection in [Projection::Equirectangular, Projection::LonLat] {
        let r = analyze(&s, &CalibrationResult::default(), &AnalyzeOptions { projection, ..Default::default() }).unwrap();
        assert!((r.length_km / truth - 1.0).abs() < 0.05, "{projection:?}: {} vs {truth}", r.length_km);
    }
}

#[test]
fn single_label_file_is_rejected() {
    let s = SyntheticCoast::Straight { lat: 50.0 }.generate(&aral_window(), 100, &Elevation::Constant { value: 1.0 }, &mut rng::stream(9, 0));
    assert!(analyze(&s, &CalibrationResult::default(), &AnalyzeOptions::default()).is_err());
}

#[test]
fn format_names() {
    assert_eq!("json-lines".parse::<GeoFormat>().unwrap(), GeoFormat::Jsonl);
    assert_eq!(GeoFormat::from_path(std::path::Path::new("a.ndjson")), GeoFormat::Jsonl);
    assert!(matches!("xml".parse::<GeoFormat>(), Err(GeoDataError::UnknownFormat(_))));
}
