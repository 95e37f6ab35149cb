//! Classification, including a mesh that only becomes isogonal after an
//! antiisogram is rewritten.

use kokotsakis::bricard::flip_y;
use kokotsakis::construct::{opposite_singular, Seed};
use kokotsakis::verify::{classify_mesh, TraceConfig};
use kokotsakis::MeshCoeffs;

fn main() {
    let cfg = TraceConfig::default();

    let opp = opposite_singular(&Seed::new(3)).unwrap().mesh;
    let c = classify_mesh(&opp, &cfg);
    println!("{}", c.class.label());
    for (i, s) in c.shapes.iter().enumerate() {
        println!("  quad {}: {}", i + 1, s.name());
    }

    // y2 -> -1/y2 turns quad 2 into an antiisogram
    let anti = flip_y(&MeshCoeffs::symmetric(), 1);
    println!("quad 2 after flip: {}", anti.quads[1].shape().name());
    let c = classify_mesh(&anti, &cfg);
    println!("{} via {:?}", c.class.label(), c.transform.subs);
}
