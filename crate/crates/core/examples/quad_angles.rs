//! Bricard quadratics and the spherical quads behind them.
//!
//! Run with `cargo run --example quad_angles`.

use kokotsakis::geometry::{realize_quad, Branch};
use kokotsakis::{MeshCoeffs, QuadCoeffs, SphericalQuad};
use std::f64::consts::FRAC_PI_2;

fn main() {
    let right = SphericalQuad::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
    let q = right.coeffs();
    println!("all-right quad: {:?} ({})", q.as_array(), q.shape().name());

    let back = SphericalQuad::recover(&q).unwrap();
    println!("recovered arcs: {:?}", back.as_array());

    for branch in [Branch::Plus, Branch::Minus] {
        let f = realize_quad(&right, FRAC_PI_2, branch).unwrap();
        println!("alpha = pi/2, {branch:?}: beta = {:.6}, V2 = {:.3?}", f.beta, f.v[2].as_slice());
    }

    let m = MeshCoeffs::symmetric();
    println!("symmetric mesh hinges: {:?}", m.f_values());
    for (i, q) in m.quads.iter().enumerate() {
        println!("  quad {}: {:?} {}", i + 1, q.as_array(), q.shape().name());
    }

    match QuadCoeffs::new(0.1, 5.0, 0.0, 0.0) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
}
