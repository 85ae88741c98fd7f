use std::process::Command;

use iga_pwc::harness::{read_ppm, PpmImage};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_iga-pwc"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn verify_passes() {
    let out = bin().args(["verify", "--suite", "all"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3, "{text}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(bin().args(["verify", "--suite", "nope"])), 2);
    assert_eq!(code(bin().args(["project", "--dim", "2", "--elems", "4", "--out", "x.csv"])), 2);
    assert_eq!(code(bin().args(["bench", "--case", "projection", "--sizes", "100", "--out", "x.csv"])), 2);
    assert_eq!(code(bin().arg("frobnicate")), 2);
}

#[test]
fn project_writes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("f.txt");
    std::fs::write(&coeffs, "# x axis\n1 2\n0 0 1\n").unwrap();
    let out = dir.path().join("r.csv");
    let status = bin()
        .args(["project", "--dim", "2", "--elems", "4,3", "--degree", "2", "--method", "pwc", "--rhs", "file"])
        .arg("--rhs-file")
        .arg(&coeffs)
        .arg("--samples")
        .arg("3")
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,value"));
    // f = (1 + 2x) y^2 lies in the space, so samples are exact
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
        assert!((v[2] - (1.0 + 2.0 * v[0]) * v[1] * v[1]).abs() < 1e-9, "{l}");
    }
}

#[test]
fn bitmap_and_dynamics_write_images() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("in.ppm");
    let mut img = PpmImage::new(16, 8);
    for (k, b) in img.data.iter_mut().enumerate() {
        *b = (k * 7 % 256) as u8;
    }
    iga_pwc::harness::write_ppm(&img, &src).unwrap();
    let out = dir.path().join("out.ppm");
    let errs = dir.path().join("errs.csv");
    let status = bin()
        .arg("bitmap")
        .arg("--in")
        .arg(&src)
        .args(["--elems", "4", "--method", "pwc", "--out"])
        .arg(&out)
        .arg("--err-csv")
        .arg(&errs)
        .status()
        .unwrap();
    assert!(status.success());
    let res = read_ppm(&out).unwrap();
    assert_eq!((res.width, res.height), (16, 8));
    assert!(std::fs::read_to_string(&errs).unwrap().starts_with("channel,rel_l2,rms,pixel_rms\n"));

    let snaps = dir.path().join("snaps");
    let out = bin()
        .args(["dynamics", "--elems", "6,6", "--dt", "1", "--steps", "2", "--snapshot-every", "1", "--resolution", "8"])
        .arg("--out-dir")
        .arg(&snaps)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability"));
    assert_eq!(std::fs::read_dir(&snaps).unwrap().count(), 3);
}

#[test]
fn bench_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let status = bin()
        .args(["bench", "--case", "laplace", "--sizes", "4", "--degrees", "2", "--repeats", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("case,nx,ny,nz,p,method,nrdof,gen_seconds,factor_seconds,quad_points,basis_evals")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("laplace,4,4,,2,galerkin,36,"));
    assert!(rows[1].ends_with(",0"));
}
