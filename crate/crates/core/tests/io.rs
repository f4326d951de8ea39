use adasmooth::io::{dense_to_csv, load_dense_csv, load_pgm, save_pgm, Image};
use adasmooth::LinearMap;

#[test]
fn dense_csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let data = vec![1.5, -2.0, 0.1, 3.0e-7, 4.0, 1.0 / 3.0];
    std::fs::write(&path, dense_to_csv(2, 3, &data)).unwrap();
    match load_dense_csv(&path).unwrap() {
        LinearMap::Dense { rows, cols, data: back } => {
            assert_eq!((rows, cols), (2, 3));
            assert_eq!(back, data);
        }
        other => panic!("unexpected map {other:?}"),
    }
}

#[test]
fn pgm_file_round_trip_quantizes_to_eight_bits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("img.pgm");
    let pixels: Vec<f64> = (0..12).map(|i| i as f64 / 11.0).collect();
    save_pgm(&path, &Image::new(3, 4, pixels.clone()).unwrap()).unwrap();
    let back = load_pgm(&path).unwrap();
    assert_eq!((back.height, back.width), (3, 4));
    for (a, b) in pixels.iter().zip(&back.pixels) {
        assert!((a - b).abs() <= 0.5 / 255.0 + 1e-12);
    }
    assert!(load_pgm(&dir.path().join("missing.pgm")).is_err());
}
