//! Reduced couplings of two deltoids: closed-form factors, and the constant
//! ratio that makes the special irreducible deltoidal mesh flexible.

use kokotsakis::construct::{irreducible_special_mesh, Radicand, Sign};
use kokotsakis::verify::{coupling_r, reducibility_35};
use kokotsakis::{HingeParam, QuadCoeffs};

fn main() {
    let q1 = QuadCoeffs::new(0.4, -0.4, 0.0, 0.0).unwrap();
    let q2 = QuadCoeffs::new(-0.45, 0.0, 0.45, 0.0).unwrap();
    let f = HingeParam::new(0.3).unwrap();
    let r = coupling_r(&q1, &q2, f, (3, 5)).unwrap();
    println!("r = {r}");
    let red = reducibility_35(&q1, &q2, f).unwrap();
    println!("system {:?}, factor residual {:.2e}", red.system, red.residual);

    for radicand in [Radicand::AsPrinted, Radicand::Negated] {
        match irreducible_special_mesh(1.0, -2.0, 1.0, radicand, Sign::Plus) {
            Ok(s) => println!(
                "{}: ratio constant = {} (modulus spread {:.1e})",
                radicand.name(),
                s.ratio.constant,
                s.ratio.modulus_spread
            ),
            Err(e) => println!("{}: {e}", radicand.name()),
        }
    }
}
