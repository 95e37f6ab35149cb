use kokotsakis::construct::{isogonal, Seed};
use kokotsakis::geometry::{embed_mesh, sweep, write_obj, Branch, CentralFace, Choice, Mesh3D};
use kokotsakis::verify::alpha_grid;
use kokotsakis::MeshCoeffs;

fn frames(m: &MeshCoeffs, face: &CentralFace, n: usize) -> Vec<Mesh3D> {
    sweep(m, face, &alpha_grid(n), &Choice::Index(0))
        .into_iter()
        .filter_map(|f| f.ok())
        .map(|f| embed_mesh(face, &f, 0.5).unwrap())
        .collect()
}

fn obj(mesh: &Mesh3D) -> String {
    let mut buf = Vec::new();
    write_obj(mesh, &["test".to_string()], &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn obj_frames_share_topology() {
    let m = MeshCoeffs::symmetric();
    let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).unwrap();
    let meshes = frames(&m, &face, 8);
    assert_eq!(meshes.len(), 8);
    let (a, b) = (obj(&meshes[1]), obj(&meshes[5]));
    let faces = |s: &str| s.lines().filter(|l| l.starts_with("f ")).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(faces(&a), faces(&b));
    assert_ne!(a, b);
    assert_eq!(a.lines().next(), Some("# test"));
}

#[test]
fn searched_face_flexes_isometrically() {
    let m = isogonal(&Seed::new(2)).unwrap().mesh;
    let (_, _, face) = CentralFace::search(&m, 90).expect("seed 2 embeds");
    let meshes = frames(&m, &face, 120);
    assert!(meshes.len() > 10);
    for mm in &meshes {
        assert!(mm.length_drift(&meshes[0]) < 1e-7);
    }
}

#[test]
fn central_face_stays_fixed() {
    let m = MeshCoeffs::symmetric();
    let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).unwrap();
    let meshes = frames(&m, &face, 10);
    for mm in &meshes {
        for k in 0..4 {
            assert!((mm.vertices[k] - face.points[k]).norm() < 1e-15);
        }
    }
}
