use std::path::Path;
use std::process::{Command, Output};

use dkcalc::calculus::{d_c, delta_c};
use dkcalc::{Complex64, FormField, LatticeDims};
use dkcalc_cli::io::{field_from_json, field_to_json, read_field, write_field};
use proptest::prelude::*;

fn dkcalc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkcalc"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bits(f: &FormField) -> Vec<u64> {
    f.coeffs()
        .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
        .collect()
}

fn any_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
        Just(f64::MAX),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn file_round_trip_is_bit_exact(
        n in prop::array::uniform4(1usize..=2),
        values in prop::collection::vec(any_f64(), 32 * 16),
    ) {
        let dims = LatticeDims::new(n).unwrap();
        let count = dims.volume() * 16;
        let coeffs: Vec<Complex64> = values
            .chunks_exact(2)
            .take(count)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        let field = FormField::from_coeffs(dims, &coeffs).unwrap();
        let back = field_from_json(&field_to_json(&field)).unwrap();
        prop_assert_eq!(bits(&back), bits(&field));
    }
}

#[test]
fn gen_random_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let o = dkcalc(
            &[
                "gen", "random", "--dims", "2,2,1,3", "--seed", "7", "-o", name,
            ],
            dir.path(),
        );
        assert!(o.status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
}

#[test]
fn apply_d_on_constant_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dkcalc(
        &["gen", "constant", "--dims", "3,3,3,3", "-o", "c.json"],
        dir.path()
    )
    .status
    .success());
    let o = dkcalc(&["apply", "d", "-i", "c.json", "-o", "dc.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "max_abs=0e0");
    assert_eq!(
        read_field(&dir.path().join("dc.json")).unwrap().max_abs(),
        0.0
    );
}

#[test]
fn apply_dk_is_i_times_d_plus_delta() {
    let dir = tempfile::tempdir().unwrap();
    let dims = LatticeDims::new([2, 3, 2, 1]).unwrap();
    let omega = dkcalc::fields::random_field(dims, 3);
    write_field(&dir.path().join("w.json"), &omega).unwrap();
    assert!(dkcalc(
        &["apply", "dk", "-i", "w.json", "-o", "dk.json"],
        dir.path()
    )
    .status
    .success());
    let dk = read_field(&dir.path().join("dk.json")).unwrap();
    let expected = (&d_c(&omega) + &delta_c(&omega)).scale(Complex64::i());
    assert!(dk.distance(&expected).unwrap() <= 1e-15);
}

#[test]
fn residual_of_eigen_plane_wave() {
    let dir = tempfile::tempdir().unwrap();
    let o = dkcalc(
        &[
            "gen",
            "plane-wave",
            "--dims",
            "3,3,3,3",
            "--p",
            "1,0,0,0",
            "--eigen",
            "0",
            "-o",
            "pw.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let mass = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("mass=").map(str::to_owned))
        .unwrap();
    let o = dkcalc(
        &["residual", "dk", "--mass", &mass, "-i", "pw.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("status=pass\n"));

    let (re, im) = mass.split_once(',').unwrap();
    let shifted = format!("{},{im}", re.parse::<f64>().unwrap() + 1.0);
    let o = dkcalc(
        &["residual", "dk", "--mass", &shifted, "-i", "pw.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn residual_of_zero_field_passes() {
    let dir = tempfile::tempdir().unwrap();
    write_field(
        &dir.path().join("z.json"),
        &FormField::zeros(LatticeDims::cubic(2).unwrap()),
    )
    .unwrap();
    for eq in ["dk", "hestenes", "hestenes-flipped"] {
        let o = dkcalc(
            &["residual", eq, "--mass", "-1.5,2", "-i", "z.json"],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn spectrum_rows_and_half_momentum() {
    let dir = tempfile::tempdir().unwrap();
    let o = dkcalc(
        &["spectrum", "--dims", "4,2,1,1", "--p", "0,0,0,0"],
        dir.path(),
    );
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows
        .iter()
        .all(|r| r.ends_with(",0.0000000000000000e0,0.0000000000000000e0")));

    let o = dkcalc(
        &["spectrum", "--dims", "4,2,1,1", "--p", "2,0,0,0"],
        dir.path(),
    );
    let mut plus = 0;
    let mut minus = 0;
    for row in stdout(&o).lines().skip(1) {
        let f: Vec<f64> = row.split(',').skip(4).map(|x| x.parse().unwrap()).collect();
        assert!(f[0].abs() < 1e-12);
        if (f[1] - 2.0).abs() < 1e-12 {
            plus += 1;
        } else if (f[1] + 2.0).abs() < 1e-12 {
            minus += 1;
        }
    }
    assert_eq!((plus, minus), (8, 8));

    let o = dkcalc(
        &["spectrum", "--dims", "4,2,1,1", "--all", "-o", "s.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("p0,p1,p2,p3,re_lambda,im_lambda"));
    assert_eq!(csv.lines().count(), 1 + 16 * 8);
}

#[test]
fn decompose_parts_sum_to_input() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dkcalc(
        &["gen", "random", "--dims", "2,2,2,1", "--seed", "4", "-o", "r.json"],
        dir.path()
    )
    .status
    .success());
    assert!(dkcalc(
        &["decompose", "-i", "r.json", "--out-prefix", "part"],
        dir.path()
    )
    .status
    .success());
    let mut sum = FormField::zeros(LatticeDims::new([2, 2, 2, 1]).unwrap());
    for tag in ["pp", "mp", "pm", "mm"] {
        sum = &sum + &read_field(&dir.path().join(format!("part_{tag}.json"))).unwrap();
    }
    let omega = read_field(&dir.path().join("r.json")).unwrap();
    assert!(sum.distance(&omega).unwrap() <= 1e-14 * omega.max_abs());
}

#[test]
fn quadruple_of_constant_even_field() {
    let dir = tempfile::tempdir().unwrap();
    let amp = "0.5,0;0,0;0,0;1,0;0,0;-2,0;0.25,0;0,0;0,0;3,0;0,0;0,0;-1,0;0,0;0,0;0.75,0";
    let o = dkcalc(
        &[
            "gen",
            "constant",
            "--dims",
            "2,2,2,2",
            "--amplitude",
            amp,
            "-o",
            "c.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = dkcalc(
        &[
            "quadruple",
            "-i",
            "c.json",
            "--mass",
            "0",
            "--out-prefix",
            "q",
        ],
        dir.path(),
    );
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("quadruple.route_deviation=0e0"));
    for j in 1..=4 {
        assert!(text.contains(&format!("quadruple.hestenes_residual_{j}=0e0")));
        assert!(dir.path().join(format!("q_{j}.json")).exists());
    }
    // Ω real and even: Ω_1^ev = 0 and Ω_2^ev = Ω.
    let omega = read_field(&dir.path().join("c.json")).unwrap();
    assert_eq!(
        read_field(&dir.path().join("q_1.json")).unwrap().max_abs(),
        0.0
    );
    assert_eq!(read_field(&dir.path().join("q_2.json")).unwrap(), omega);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        "{\"dims\":[1,1,1,1],\n \"coeffs\":[1,]}",
    )
    .unwrap();
    let o = dkcalc(
        &["apply", "d", "-i", "bad.json", "-o", "o.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at byte"));
    assert!(!dir.path().join("o.json").exists());

    for args in [
        &["verify", "6"][..],
        &["gen", "random", "--dims", "3,3", "-o", "x.json"],
        &["residual", "dk", "--mass", "a,b", "-i", "bad.json"],
        &["gen", "plane-wave", "--dims", "2,2,2,2", "-o", "x.json"],
        &["spectrum", "--dims", "2,2,2,2", "--p", "2,0,0,0"],
    ] {
        assert_eq!(dkcalc(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_suites_pass_on_small_lattice() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["clifford", "1", "2", "3", "4", "5", "nilpotency"] {
        let o = dkcalc(
            &[
                "verify", suite, "--dims", "2,2,2,2", "--trials", "5", "--seed", "3",
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}
