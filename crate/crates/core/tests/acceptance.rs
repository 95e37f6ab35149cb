//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kokotsakis::bricard::{flip_y, normalize};
use kokotsakis::construct::{construct_class, irreducible_special_mesh, Radicand, Seed, Sign};
use kokotsakis::geometry::{embed_mesh, sweep, wrap, Branch, CentralFace, Choice, Mesh3D};
use kokotsakis::verify::{
    alpha_grid, coupling_r, reducibility_35, reducibility_53, scalar_check, trace_oracle, CouplingSystem,
    MeshClass, ReducedCoupling, TraceConfig,
};
use kokotsakis::{HingeParam, MeshCoeffs, QuadCoeffs, SphericalQuad};

const CLASSES: [MeshClass; 6] = [
    MeshClass::Isogonal,
    MeshClass::Constant,
    MeshClass::Adjacent,
    MeshClass::Opposite,
    MeshClass::DeltoidalReducible,
    MeshClass::DeltoidalIrreducible,
];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn nonzero(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    loop {
        let v: f64 = rng.gen_range(-r..r);
        if v.abs() > 0.05 {
            return v;
        }
    }
}

fn hinge(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-0.95..0.95)
}

fn symmetric_anchor() -> Outcome {
    let m = MeshCoeffs::symmetric();
    let s = scalar_check(&m).map_err(|e| e.to_string())?;
    let p = s.product.m;
    let rel = [[p[0][0] - 4.0, p[0][1]], [p[1][0], p[1][1] - 4.0]]
        .iter()
        .flatten()
        .map(|z: &Complex64| z.norm())
        .fold(0.0f64, f64::max)
        / 4.0;
    let t = trace_oracle(&m, &TraceConfig { samples: 1000, tol: 1e-9, allow_complex: true });
    check(
        s.scalar && rel < 1e-12 && t.closure_fraction >= 0.999,
        format!("product - 4I relative {rel:.2e}; closure {:.4}", t.closure_fraction),
    )
}

fn constructor_soundness(meshes: &mut Vec<(MeshClass, MeshCoeffs)>) -> Outcome {
    let mut failures = Vec::new();
    for class in CLASSES {
        for seed in 0..100 {
            match construct_class(class, &Seed::new(seed)) {
                Ok(c) => {
                    let r = &c.report;
                    let ok = r.trace.is_flexible()
                        && r.gcd != Some(false)
                        && (class != MeshClass::Isogonal || r.scalar == Some(true));
                    if !ok {
                        failures.push(format!("{class} seed {seed}: report disagrees"));
                    }
                    if seed < 20 {
                        meshes.push((class, c.mesh));
                    }
                }
                Err(e) => failures.push(format!("{class} seed {seed}: {e}")),
            }
        }
    }
    check(failures.is_empty(), format!("600 runs, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()))
}

fn random_valid_mesh(rng: &mut ChaCha8Rng) -> MeshCoeffs {
    let quad = |rng: &mut ChaCha8Rng| loop {
        let q = QuadCoeffs::new_unchecked(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.is_valid() {
            return q;
        }
    };
    let quads = [quad(rng), quad(rng), quad(rng), quad(rng)];
    let f = [hinge(rng), hinge(rng), hinge(rng), hinge(rng)];
    MeshCoeffs::new(quads, f).expect("drawn valid")
}

fn negative_controls() -> Outcome {
    let cfg = TraceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_random = 0.0f64;
    for _ in 0..100 {
        let m = random_valid_mesh(&mut rng);
        worst_random = worst_random.max(trace_oracle(&m, &cfg).closure_fraction);
    }
    let base = MeshCoeffs::symmetric();
    let (mut worst_perturbed, mut count) = (0.0f64, 0);
    for k in 0..4 {
        for c in 0..4 {
            for d in [-0.1, 0.1] {
                let mut m = base.clone();
                let mut v = m.quads[k].as_array();
                v[c] += d;
                m.quads[k] = QuadCoeffs::new_unchecked(v[0], v[1], v[2], v[3]);
                worst_perturbed = worst_perturbed.max(trace_oracle(&m, &cfg).closure_fraction);
                count += 1;
            }
        }
    }
    check(
        worst_random < 0.02 && worst_perturbed < 0.02,
        format!("max closure: random {worst_random:.4}, {count} perturbations {worst_perturbed:.4}"),
    )
}

fn angle_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut n, mut worst, mut worst_sin) = (0, 0.0f64, 0.0f64);
    while n < 1000 {
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.05..PI - 0.05));
        let Ok(s) = SphericalQuad::new(a[0], a[1], a[2], a[3]) else { continue };
        let q = s.coeffs();
        if !q.is_valid() {
            continue;
        }
        let back = SphericalQuad::recover(&q).map_err(|e| e.to_string())?;
        for (x, y) in s.as_array().iter().zip(back.as_array()) {
            worst = worst.max((x - y).abs());
        }
        worst_sin = worst_sin.max(SphericalQuad::sin2_mu_residual(&q).map_err(|e| e.to_string())?);
        n += 1;
    }
    check(worst < 1e-9 && worst_sin < 1e-9, format!("1000 quads: angle error {worst:.2e}, sin^2 mu residual {worst_sin:.2e}"))
}

fn quad_of_shape(rng: &mut ChaCha8Rng, j: u8) -> QuadCoeffs {
    loop {
        let (a, x, y) = (nonzero(rng, 1.0), nonzero(rng, 1.0), nonzero(rng, 1.0));
        let q = match j {
            0 => QuadCoeffs::new_unchecked(a, x, y, nonzero(rng, 1.0)),
            1 => QuadCoeffs::new_unchecked(a, 0.0, 0.0, x),
            3 => QuadCoeffs::new_unchecked(a, x, 0.0, 0.0),
            _ => QuadCoeffs::new_unchecked(a, 0.0, y, 0.0),
        };
        if q.is_valid() {
            return q;
        }
    }
}

fn factor_bidegree(j: u8) -> (usize, usize) {
    match j {
        0 => (2, 2),
        1 => (1, 1),
        3 => (1, 2),
        _ => (2, 1),
    }
}

fn degree_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sels = [0u8, 1, 3, 5];
    let mut bad = Vec::new();
    for i in 0..1000 {
        let (j1, j2) = (sels[i % 4], sels[i / 4 % 4]);
        let mut m = MeshCoeffs::symmetric();
        m.quads[0] = quad_of_shape(&mut rng, j1);
        m.quads[1] = quad_of_shape(&mut rng, j2);
        m.f[0] = HingeParam::new(hinge(&mut rng)).expect("in range");
        let c = ReducedCoupling::new(&m, 0, (j1, j2), (0, 0)).map_err(|e| e.to_string())?;
        let (d1, d2) = (factor_bidegree(j1), factor_bidegree(j2));
        let want = (d1.0 * d2.0, d1.1 * d2.1);
        let got = (
            c.factors[0].bidegree(),
            c.big_g[0].bidegree(),
            c.factors[1].bidegree(),
            c.big_g[1].bidegree(),
            c.r().map_err(|e| e.to_string())?.bidegree(),
            c.big_r().map_err(|e| e.to_string())?.bidegree(),
        );
        let ok = got.0.as_ref().ok() == Some(&d1)
            && got.1.as_ref().ok() == Some(&d1)
            && got.2.as_ref().ok() == Some(&d2)
            && got.3.as_ref().ok() == Some(&d2)
            && got.4.as_ref().ok() == Some(&want)
            && got.5.as_ref().ok() == Some(&want);
        if !ok {
            bad.push(format!("({j1},{j2}): {got:?}"));
        }
    }
    check(bad.is_empty(), format!("1000 couplings over 16 selector pairs, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn factor_residual(
    rng: &mut ChaCha8Rng,
    sel: (u8, u8),
    want: CouplingSystem,
    make: impl Fn(&mut ChaCha8Rng) -> (QuadCoeffs, QuadCoeffs, f64),
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (q1, q2, f) = make(rng);
        let f = HingeParam::new(f).map_err(|e| e.to_string())?;
        let red = if sel == (3, 5) { reducibility_35(&q1, &q2, f) } else { reducibility_53(&q1, &q2, f) }
            .map_err(|e| e.to_string())?;
        if red.system != want {
            return Err(format!("{sel:?}: expected {want:?}, got {:?}", red.system));
        }
        let form = red.factorization.ok_or("no closed form")?;
        let r = coupling_r(&q1, &q2, f, sel).map_err(|e| e.to_string())?;
        worst = worst.max(form.residual_against(&r, 50, rng.gen()));
    }
    Ok(worst)
}

fn factorization_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let q = QuadCoeffs::new_unchecked;
    let s1 = factor_residual(&mut rng, (3, 5), CouplingSystem::System1, |r| {
        let (a1, a2) = (nonzero(r, 1.0), nonzero(r, 1.0));
        (q(a1, -a1, 0.0, 0.0), q(a2, 0.0, -a2, 0.0), hinge(r))
    })?;
    let s2 = factor_residual(&mut rng, (3, 5), CouplingSystem::System2, |r| {
        let (a1, b1, a2) = (nonzero(r, 1.0), nonzero(r, 1.0), nonzero(r, 1.0));
        (q(a1, b1, 0.0, 0.0), q(a2, 0.0, a2 * b1 / a1, 0.0), 0.0)
    })?;
    let s3 = factor_residual(&mut rng, (3, 5), CouplingSystem::System3, |r| {
        let (a1, b1, a2) = (nonzero(r, 1.0), nonzero(r, 1.0), nonzero(r, 1.0));
        (q(a1, b1, 0.0, 0.0), q(a2, 0.0, a1 * a2 / b1, 0.0), 1.0)
    })?;
    let t1 = factor_residual(&mut rng, (5, 3), CouplingSystem::System1, |r| {
        let (a1, c1, a2) = (nonzero(r, 1.0), nonzero(r, 1.0), nonzero(r, 1.0));
        (q(a1, 0.0, c1, 0.0), q(a2, a1 * c1 / a2, 0.0, 0.0), 0.0)
    })?;
    let worst = s1.max(s2).max(s3).max(t1);
    check(
        worst < 1e-9,
        format!("iii-v systems 1-3: {s1:.1e} {s2:.1e} {s3:.1e}; v-iii system 1: {t1:.1e}"),
    )
}

fn special_mesh_anchor() -> Outcome {
    let mut accepted = Vec::new();
    let mut notes = Vec::new();
    for radicand in [Radicand::AsPrinted, Radicand::Negated] {
        for sign in [Sign::Plus, Sign::Minus] {
            let label = format!("{} {sign}", radicand.name());
            match irreducible_special_mesh(1.0, -2.0, 1.0, radicand, sign) {
                Ok(sm) => {
                    let t = trace_oracle(&sm.mesh, &TraceConfig::default());
                    let ratio_ok = sm.ratio.constant && sm.ratio.modulus_spread < 1e-8;
                    notes.push(format!(
                        "{label}: ratio spread {:.1e}, closure {:.3}",
                        sm.ratio.modulus_spread, t.closure_fraction
                    ));
                    if ratio_ok && t.is_flexible() {
                        accepted.push(label);
                    }
                }
                Err(e) => notes.push(format!("{label}: {e}")),
            }
        }
    }
    check(!accepted.is_empty(), format!("accepted [{}]; {}", accepted.join(", "), notes.join("; ")))
}

fn geometry_cross_check() -> Outcome {
    let m = MeshCoeffs::symmetric();
    let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).map_err(|e| e.to_string())?;
    let zeta = face.zeta(&m);
    let frames = sweep(&m, &face, &alpha_grid(200), &Choice::Index(0));
    let (mut arc, mut res, mut hinge_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut meshes: Vec<Mesh3D> = Vec::new();
    for fr in &frames {
        let fr = fr.as_ref().map_err(|e| e.to_string())?;
        arc = arc.max(fr.arc_drift);
        res = res.max(fr.residual);
        for k in 0..4 {
            let l = (k + 1) % 4;
            hinge_err = hinge_err.max(wrap(fr.beta[k] - fr.alpha[l] - face.tau[k] - zeta[k]).abs());
        }
        meshes.push(embed_mesh(&face, fr, 0.5).map_err(|e| e.to_string())?);
    }
    let drift = meshes.iter().map(|mm| mm.length_drift(&meshes[0])).fold(0.0, f64::max);
    check(
        frames.len() == 200 && arc < 1e-8 && res < 1e-7 && hinge_err < 1e-8 && drift < 1e-7,
        format!("200 frames: arc {arc:.1e}, residual {res:.1e}, hinge {hinge_err:.1e}, edge drift {drift:.1e}"),
    )
}

fn invariance(meshes: &[(MeshClass, MeshCoeffs)]) -> Outcome {
    let cfg = TraceConfig::default();
    let mut bad = Vec::new();
    for (i, (class, m)) in meshes.iter().enumerate() {
        let v = trace_oracle(m, &cfg).is_flexible();
        let mut variants: Vec<(String, MeshCoeffs)> = (1..4).map(|k| (format!("rotate {k}"), m.rotate(k))).collect();
        let flipped = flip_y(m, i % 4);
        variants.push(("normalize".into(), normalize(m).0));
        variants.push((format!("flip-y {}", i % 4 + 1), flipped.clone()));
        variants.push(("flip-y then normalize".into(), normalize(&flipped).0));
        for (name, w) in variants {
            if trace_oracle(&w, &cfg).is_flexible() != v {
                bad.push(format!("{class} #{i}: {name}"));
            }
        }
    }
    check(
        bad.is_empty() && meshes.len() == 120,
        format!("{} meshes x 6 relabelings, {} verdict changes {:?}", meshes.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn main() -> ExitCode {
    let mut meshes = Vec::new();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("PASS {n} {name}: {d} ({secs:.1}s)"),
            Err(d) => {
                failed += 1;
                println!("FAIL {n} {name}: {d} ({secs:.1}s)");
            }
        }
    };
    report(1, "symmetric isogonal anchor", &mut symmetric_anchor);
    report(2, "constructor soundness", &mut || constructor_soundness(&mut meshes));
    report(3, "negative controls", &mut negative_controls);
    report(4, "angle round trip", &mut angle_round_trip);
    report(5, "degree laws", &mut degree_laws);
    report(6, "factorization residuals", &mut factorization_residuals);
    report(7, "special irreducible mesh", &mut special_mesh_anchor);
    report(8, "geometry cross-check", &mut geometry_cross_check);
    report(9, "relabeling invariance", &mut || invariance(&meshes));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
