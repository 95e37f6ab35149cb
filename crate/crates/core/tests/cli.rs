use std::path::Path;
use std::process::{Command, Output};

use kokotsakis::geometry::TraceRecord;
use kokotsakis::MeshCoeffs;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kokotsakis"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn write_mesh(dir: &Path, name: &str, m: &MeshCoeffs) {
    std::fs::write(dir.join(name), m.to_json()).unwrap();
}

#[test]
fn construct_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["construct", "--class", "opposite", "--seed", "11"], dir.path());
    let b = run(&["construct", "--class", "opposite", "--seed", "11"], dir.path());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let m = MeshCoeffs::from_json(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(m.meta.unwrap().seed, Some(11));
}

#[test]
fn constructed_mesh_verifies_all_three_ways() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["construct", "--class", "isogonal", "--seed", "3", "-o", "m.json"], dir.path())), 0);
    let o = run(&["verify", "m.json", "--method", "all"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# kokotsakis"));
    assert_eq!(text.matches(": flexible").count(), 3, "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write_mesh(p, "sym.json", &MeshCoeffs::symmetric());
    let bad = r#"{"quads":[{"a":0,"b":1,"c":1,"e":0},{"a":0,"b":1,"c":1,"e":0},{"a":0,"b":1,"c":1,"e":0},{"a":0,"b":1,"c":1,"e":0}],"f":[0,0,0,0]}"#;
    std::fs::write(p.join("bad.json"), bad).unwrap();
    let mut perturbed = MeshCoeffs::symmetric();
    perturbed.quads[0].b = 0.1;
    write_mesh(p, "generic.json", &perturbed);

    assert_eq!(code(&run(&["classify", "sym.json"], p)), 0);
    assert_eq!(code(&run(&["classify", "missing.json"], p)), 4);
    assert_eq!(code(&run(&["construct", "--class", "isogonal", "--budget", "0"], p)), 2);
    assert_eq!(code(&run(&["construct", "--class", "isogonal", "--param", "a1=0"], p)), 3);
    assert_eq!(code(&run(&["construct", "--class", "nonsense"], p)), 3);
    let o = run(&["verify", "bad.json"], p);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("quad 1"));
    assert_eq!(code(&run(&["verify", "generic.json", "--method", "scalar"], p)), 5);
}

#[test]
fn rigid_mesh_is_reported_rigid_with_success() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = MeshCoeffs::symmetric();
    m.quads[2].e += 0.1;
    write_mesh(dir.path(), "m.json", &m);
    let o = run(&["verify", "m.json", "--method", "trace"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("rigid"));
}

#[test]
fn trace_writes_meta_then_one_record_per_frame() {
    let dir = tempfile::tempdir().unwrap();
    write_mesh(dir.path(), "m.json", &MeshCoeffs::symmetric());
    let o = run(&["trace", "m.json", "--frames", "12"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[0].starts_with("{\"meta\":"));
    for (i, l) in lines[1..].iter().enumerate() {
        let r: TraceRecord = serde_json::from_str(l).unwrap();
        assert_eq!(r.frame, i);
        assert!(r.closed && r.residual.unwrap() < 1e-9);
    }
}

#[test]
fn embed_writes_obj_frames_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    write_mesh(dir.path(), "m.json", &MeshCoeffs::symmetric());
    let o = run(&["embed", "m.json", "--tau1", "0", "--frames", "4", "-o", "out"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("out");
    let obj = std::fs::read_to_string(out.join("frame_0000.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 14);
    assert!(out.join("frame_0003.obj").exists());
    assert!(out.join("trace.jsonl").exists());
    assert_eq!(code(&run(&["embed", "m.json"], dir.path())), 3);
}

#[test]
fn normalize_records_the_substitution() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = MeshCoeffs::symmetric();
    m.quads[1] = kokotsakis::QuadCoeffs::new(0.0, 0.3, -0.4, 0.0).unwrap();
    write_mesh(dir.path(), "m.json", &m);
    let o = run(&["normalize", "m.json"], dir.path());
    assert_eq!(code(&o), 0);
    let n = MeshCoeffs::from_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(n.quads[1].shape(), kokotsakis::bricard::QuadShape::Isogram);
    let cfg = n.meta.unwrap().config;
    assert_eq!(cfg["normalized_from"], "m.json");
    assert!(cfg["transform"].contains("flip-y"));
}
