//! The trace, resultant and scalar tests on a flexible mesh and on a
//! slightly perturbed copy of it.

use kokotsakis::verify::{resultant_gcd_check, scalar_check, trace_oracle, TraceConfig};
use kokotsakis::{MeshCoeffs, QuadCoeffs};

fn report(name: &str, m: &MeshCoeffs) {
    let tr = trace_oracle(m, &TraceConfig::default());
    println!("{name}");
    println!("  trace : {} (closure fraction {:.4})", tr.verdict(), tr.closure_fraction);
    match resultant_gcd_check(m, &tr) {
        Ok(g) => println!("  gcd   : shared factor {} (fraction {:.3})", g.shared, g.fraction),
        Err(e) => println!("  gcd   : {e}"),
    }
    match scalar_check(m) {
        Ok(s) => println!("  scalar: {} (defect {:.2e}, k = {:?})", s.scalar, s.defect, s.ks),
        Err(e) => println!("  scalar: {e}"),
    }
}

fn main() {
    let m = MeshCoeffs::symmetric();
    report("symmetric mesh", &m);

    let mut bent = m.clone();
    bent.quads[3] = QuadCoeffs::new(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0 + 0.1).unwrap();
    report("e4 raised by 0.1", &bent);
}
