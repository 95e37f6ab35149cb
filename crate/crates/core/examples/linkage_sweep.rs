//! A spherical linkage carried through a full flexion.

use kokotsakis::construct::{isogonal, Seed};
use kokotsakis::geometry::{sweep, wrap, CentralFace, Choice};
use kokotsakis::verify::alpha_grid;

fn main() {
    let m = isogonal(&Seed::new(3)).unwrap().mesh;
    let (tau1, branch, face) = CentralFace::search(&m, 360).expect("seed 3 has a feasible central face");
    println!("tau1 = {tau1:.4} ({branch:?}), edge lengths {:.4?}", face.len);
    let zeta = face.zeta(&m);

    let frames = sweep(&m, &face, &alpha_grid(200), &Choice::Index(0));
    let (mut res, mut drift, mut ident) = (0.0f64, 0.0f64, 0.0f64);
    let mut real = 0;
    for f in frames.iter().flatten() {
        real += 1;
        res = res.max(f.residual);
        drift = drift.max(f.arc_drift);
        for k in 0..4 {
            let gap = wrap(f.beta[k] - f.alpha[(k + 1) % 4] - face.tau[k] - zeta[k]);
            ident = ident.max(gap.abs());
        }
    }
    println!("{real} of {} frames real", frames.len());
    println!("max closure residual {res:.2e}, arc drift {drift:.2e}, hinge identity {ident:.2e}");
}
