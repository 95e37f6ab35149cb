//! Writes an animation of the symmetric mesh as OBJ frames and a
//! JSON-lines trace.
//!
//! Run with `cargo run --example export_frames -- out_dir`.

use kokotsakis::geometry::{embed_mesh, sweep, write_obj, Branch, CentralFace, Choice, TraceRecord};
use kokotsakis::verify::alpha_grid;
use kokotsakis::MeshCoeffs;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "frames".into()));
    fs::create_dir_all(&dir)?;

    let m = MeshCoeffs::symmetric();
    let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus)?;
    let mut trace = fs::File::create(dir.join("trace.jsonl"))?;
    let mut first = None;
    for (i, frame) in sweep(&m, &face, &alpha_grid(24), &Choice::Index(0)).into_iter().enumerate() {
        let frame = frame?;
        let mesh = embed_mesh(&face, &frame, 0.5)?;
        let mut f = fs::File::create(dir.join(format!("frame_{i:02}.obj")))?;
        write_obj(&mesh, &[format!("frame {i}")], &mut f)?;
        writeln!(trace, "{}", TraceRecord::from_frame(i, &frame, Some(&mesh)).to_line())?;
        let base = first.get_or_insert_with(|| mesh.clone());
        println!("frame {i:2}: alpha1 {:+.3}  edge drift {:.1e}", frame.alpha[0], mesh.length_drift(base));
    }
    println!("wrote {}", dir.display());
    Ok(())
}
