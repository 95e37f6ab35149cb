//! One verified mesh of every constructible class.
//!
//! Run with `cargo run --release --example construct_all [seed]`.

use kokotsakis::construct::{construct_class, Seed};
use kokotsakis::verify::MeshClass;

fn main() {
    env_logger::init();
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    for class in MeshClass::CONSTRUCTIBLE {
        match construct_class(class, &Seed::new(seed)) {
            Ok(c) => {
                let meta = c.mesh.meta.as_ref().unwrap();
                println!(
                    "{:<22} draws {:>4}  closure {:.3}  gcd {:<5}  signs {:?}",
                    class.name(),
                    c.attempts,
                    c.report.trace.closure_fraction,
                    c.report.gcd.map_or("n/a".to_string(), |g| g.to_string()),
                    meta.signs
                );
            }
            Err(e) => println!("{:<22} failed: {e}", class.name()),
        }
    }
}
