//! Isogram maps on the projective line and the scalar product that closes
//! an isogonal mesh.

use kokotsakis::mobius::{compose, hinge_forward, isogram_map, ProjPoint};
use kokotsakis::MeshCoeffs;

fn main() {
    let h = hinge_forward(0.25);
    let p = ProjPoint::real(1.0);
    println!("H(0.25) sends 1 to {}", h.apply(&p));
    println!("and infinity to {}", h.apply(&ProjPoint::infinity()));

    let m = MeshCoeffs::symmetric();
    let maps: Vec<_> = m.quads.iter().zip(m.f).map(|(q, f)| isogram_map(q.isogram_ks()[1], f.value())).collect();
    let prod = compose(&maps);
    println!("k = {:?}", m.quads.iter().map(|q| q.isogram_ks()[1]).collect::<Vec<_>>());
    println!("scalar defect of N4 N3 N2 N1: {:.2e}", prod.scalar_defect());
}
