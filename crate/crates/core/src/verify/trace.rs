use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bricard::MeshCoeffs;
use crate::mobius::{hinge_forward, ProjMap, ProjPoint};

/// Relative size below which a slice `g(x_k, .)` counts as identically zero.
const FREE_SLICE_REL: f64 = 1e-9;
/// Imaginary part tolerated on a root in real mode.
const REAL_TOL: f64 = 1e-9;
/// Matching radius and variance bound for frozen coordinates.
const FROZEN_RADIUS: f64 = 1e-6;
const FROZEN_VAR: f64 = 1e-9;
const FROZEN_SHARE: f64 = 0.9;
/// Closure fraction above which a mesh is declared flexible.
pub const FLEX_THRESHOLD: f64 = 0.95;

#[derive(Clone, Copy, Debug)]
pub struct TraceConfig {
    pub samples: usize,
    pub tol: f64,
    pub allow_complex: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { samples: 1000, tol: 1e-7, allow_complex: true }
    }
}

/// A coordinate that stays fixed along a closing family.
#[derive(Clone, Copy, Debug)]
pub struct FrozenCoord {
    /// Zero-based quad index `k` of the frozen `x_k`.
    pub index: usize,
    pub value: ProjPoint,
}

#[derive(Clone, Debug)]
pub struct TraceReport {
    pub samples: usize,
    /// Samples with at least one complete branch (all of them in complex mode).
    pub usable: usize,
    pub closure_fraction: f64,
    /// Share of usable samples closing on a branch that never meets an
    /// identically vanishing slice.
    pub nonconstant_fraction: f64,
    /// Closing branches per 4-bit root choice, bit `k` for quad `k`.
    pub branch_histogram: [u32; 16],
    pub frozen: Vec<FrozenCoord>,
    pub residual_max: f64,
    pub residual_median: f64,
    /// Zero-based index of the coordinate that was swept.
    pub driver: usize,
}

impl TraceReport {
    pub fn is_flexible(&self) -> bool {
        self.closure_fraction >= FLEX_THRESHOLD
    }

    pub fn has_constant_branch(&self) -> bool {
        !self.frozen.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_flexible() {
            "flexible"
        } else {
            "rigid"
        }
    }
}

/// Roots `[Y : V]` of `A Y^2 + B Y V + C V^2`, or `None` if all three vanish.
pub fn projective_quadratic_roots(abc: [Complex64; 3]) -> Option<[ProjPoint; 2]> {
    let [a, b, c] = abc;
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale == 0.0 {
        return None;
    }
    let disc = (b * b - a * c * 4.0).sqrt();
    let q1 = -(b + disc) * 0.5;
    let q2 = -(b - disc) * 0.5;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 };
    if q.norm() <= 1e-14 * scale {
        let p = if a.norm() > c.norm() {
            ProjPoint::real(0.0)
        } else {
            ProjPoint::infinity()
        };
        return Some([p, p]);
    }
    let r1 = ProjPoint::new(q, a).unwrap_or_else(|_| ProjPoint::infinity());
    let r2 = ProjPoint::new(c, q).unwrap_or_else(|_| ProjPoint::infinity());
    Some([r1, r2])
}

/// Drops a negligible imaginary part, or rejects a genuinely complex point.
fn realify(p: &ProjPoint) -> Option<ProjPoint> {
    if !p.is_real(REAL_TOL) {
        return None;
    }
    let (z, w) = p.coords();
    let ph = if w.norm() >= z.norm() { w.conj() / w.norm() } else { z.conj() / z.norm() };
    ProjPoint::new(Complex64::new((z * ph).re, 0.0), Complex64::new((w * ph).re, 0.0)).ok()
}

#[derive(Clone, Debug)]
struct Closing {
    bits: usize,
    xs: [Option<ProjPoint>; 4],
    free: bool,
}

struct Chase<'a> {
    mesh: &'a MeshCoeffs,
    hinges: [ProjMap; 4],
    allow_complex: bool,
    scale: [f64; 4],
}

impl Chase<'_> {
    /// Walks every branch from `x_1`; returns the best residual over complete
    /// branches (or `None` if no branch completes) and the closing ones.
    fn run(&self, x1: &ProjPoint, tol: f64) -> (Option<f64>, Vec<Closing>) {
        let mut best: Option<f64> = None;
        let mut out = Vec::new();
        let mut xs = [None; 4];
        xs[0] = Some(*x1);
        self.step(0, *x1, 0, &mut xs, x1, tol, &mut best, &mut out);
        (best, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        k: usize,
        x: ProjPoint,
        bits: usize,
        xs: &mut [Option<ProjPoint>; 4],
        x1: &ProjPoint,
        tol: f64,
        best: &mut Option<f64>,
        out: &mut Vec<Closing>,
    ) {
        let abc = self.mesh.quads[k].slice_at(&x);
        let size = abc.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if size <= FREE_SLICE_REL * self.scale[k] {
            // Any y_k works, so the cycle closes through the backward chain.
            *best = Some(0.0);
            out.push(Closing { bits, xs: *xs, free: true });
            return;
        }
        let roots = match projective_quadratic_roots(abc) {
            Some(r) => r,
            None => return,
        };
        for (r, y) in roots.iter().enumerate() {
            let y = if self.allow_complex {
                *y
            } else {
                match realify(y) {
                    Some(p) => p,
                    None => continue,
                }
            };
            let next = self.hinges[k].apply(&y);
            let b = bits | (r << k);
            if k == 3 {
                let res = next.chordal_distance(x1);
                *best = Some(best.map_or(res, |v: f64| v.min(res)));
                if res < tol {
                    out.push(Closing { bits: b, xs: *xs, free: false });
                }
            } else {
                xs[k + 1] = Some(next);
                self.step(k + 1, next, b, xs, x1, tol, best, out);
                xs[k + 1] = None;
            }
        }
    }
}

/// Uniform grid over `(-pi, pi)` at cell midpoints, as projective points.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / n as f64).collect()
}

fn run_driver(m: &MeshCoeffs, cfg: &TraceConfig) -> (TraceReport, Vec<Vec<Closing>>) {
    let hinges = [0, 1, 2, 3].map(|i| hinge_forward(m.f[i].value()));
    let scale = [0, 1, 2, 3].map(|i| {
        let q = m.quads[i];
        1.0 + q.a.abs() + q.b.abs() + q.c.abs() + q.e.abs()
    });
    let chase = Chase { mesh: m, hinges, allow_complex: cfg.allow_complex, scale };
    let mut usable = 0usize;
    let (mut closing, mut nonconstant) = (0usize, 0usize);
    let mut hist = [0u32; 16];
    let mut residuals = Vec::with_capacity(cfg.samples);
    let mut per_sample = Vec::with_capacity(cfg.samples);
    for alpha in alpha_grid(cfg.samples) {
        let x1 = ProjPoint::from_angle(alpha);
        let (best, found) = chase.run(&x1, cfg.tol);
        let Some(best) = best else {
            per_sample.push(vec![]);
            continue;
        };
        usable += 1;
        residuals.push(best);
        if !found.is_empty() {
            closing += 1;
            if found.iter().any(|c| !c.free) {
                nonconstant += 1;
            }
        }
        for c in &found {
            hist[c.bits] += 1;
        }
        per_sample.push(found);
    }
    residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let frac = |n: usize| if usable == 0 { 0.0 } else { n as f64 / usable as f64 };
    let report = TraceReport {
        samples: cfg.samples,
        usable,
        closure_fraction: frac(closing),
        nonconstant_fraction: frac(nonconstant),
        branch_histogram: hist,
        frozen: frozen_coords(&per_sample, usable),
        residual_max: residuals.last().copied().unwrap_or(f64::INFINITY),
        residual_median: residuals.get(residuals.len() / 2).copied().unwrap_or(f64::INFINITY),
        driver: 0,
    };
    (report, per_sample)
}

fn frozen_coords(per_sample: &[Vec<Closing>], usable: usize) -> Vec<FrozenCoord> {
    let mut out = Vec::new();
    if usable == 0 {
        return out;
    }
    for k in 1..4 {
        let values: Vec<Vec<ProjPoint>> = per_sample
            .iter()
            .map(|cs| cs.iter().filter_map(|c| c.xs[k]).collect())
            .collect();
        let mut candidates: Vec<ProjPoint> = Vec::new();
        for v in values.iter().filter(|v| !v.is_empty()).take(8).flatten() {
            if candidates.iter().all(|c| c.chordal_distance(v) > FROZEN_RADIUS) {
                candidates.push(*v);
            }
        }
        for cand in candidates {
            let dists: Vec<f64> = values
                .iter()
                .filter_map(|vs| {
                    vs.iter()
                        .map(|v| v.chordal_distance(&cand))
                        .filter(|&d| d < FROZEN_RADIUS)
                        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
                })
                .collect();
            if (dists.len() as f64) < FROZEN_SHARE * usable as f64 {
                continue;
            }
            let var = dists.iter().map(|d| d * d).sum::<f64>() / dists.len() as f64;
            if var < FROZEN_VAR {
                out.push(FrozenCoord { index: k, value: cand });
                break;
            }
        }
    }
    out
}

/// Numerical flexibility test by branch chasing around the vertex cycle.
///
/// Each coordinate is tried as the swept one in turn until one gives a
/// flexible verdict, so a family on which `x_1` stays fixed is still found.
pub fn trace_oracle(m: &MeshCoeffs, cfg: &TraceConfig) -> TraceReport {
    let mut best: Option<TraceReport> = None;
    for d in 0..4 {
        let rotated = m.rotate(d);
        let (mut rep, _) = run_driver(&rotated, cfg);
        rep.driver = d;
        for fc in &mut rep.frozen {
            fc.index = (fc.index + d) % 4;
        }
        let flexible = rep.is_flexible();
        if best.as_ref().map_or(true, |b| rep.closure_fraction > b.closure_fraction) {
            best = Some(rep);
        }
        if flexible {
            break;
        }
    }
    best.expect("four drivers tried")
}

/// One closing configuration `(x_1..x_4)` at the swept value `x_1`, if any
/// branch closes without meeting a free slice.
pub fn closing_configurations(m: &MeshCoeffs, x1: &ProjPoint, tol: f64) -> Vec<[ProjPoint; 4]> {
    let hinges = [0, 1, 2, 3].map(|i| hinge_forward(m.f[i].value()));
    let scale = [0, 1, 2, 3].map(|i| {
        let q = m.quads[i];
        1.0 + q.a.abs() + q.b.abs() + q.c.abs() + q.e.abs()
    });
    let chase = Chase { mesh: m, hinges, allow_complex: true, scale };
    let (_, found) = chase.run(x1, tol);
    found
        .into_iter()
        .filter(|c| !c.free)
        .map(|c| [0, 1, 2, 3].map(|k| c.xs[k].expect("complete branch")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricard::QuadCoeffs;

    #[test]
    fn symmetric_mesh_closes_everywhere() {
        let m = MeshCoeffs::symmetric();
        let rep = trace_oracle(&m, &TraceConfig { tol: 1e-9, ..Default::default() });
        assert!(rep.closure_fraction >= 0.999, "{rep:?}");
        assert_eq!(rep.driver, 0);
        assert!(rep.frozen.is_empty());
        assert!(rep.residual_median < 1e-12);
    }

    #[test]
    fn perturbed_e4_is_rigid() {
        let mut m = MeshCoeffs::symmetric();
        m.quads[3] = QuadCoeffs::new(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0 + 0.1).unwrap();
        let rep = trace_oracle(&m, &TraceConfig::default());
        assert!(rep.closure_fraction < 0.01, "{rep:?}");
        assert!(!rep.is_flexible());
    }

    #[test]
    fn quadratic_roots_cover_degenerate_cases() {
        let c = |v: f64| Complex64::new(v, 0.0);
        // y^2 = 0: double root at zero
        let r = projective_quadratic_roots([c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(r.iter().all(|p| p.chordal_distance(&ProjPoint::real(0.0)) < 1e-15));
        // constant: double root at infinity
        let r = projective_quadratic_roots([c(0.0), c(0.0), c(2.0)]).unwrap();
        assert!(r.iter().all(|p| p.is_infinite(1e-15)));
        // linear: one finite root and infinity
        let r = projective_quadratic_roots([c(0.0), c(1.0), c(-3.0)]).unwrap();
        assert!(r.iter().any(|p| p.chordal_distance(&ProjPoint::real(3.0)) < 1e-15));
        assert!(r.iter().any(|p| p.is_infinite(1e-15)));
        assert!(projective_quadratic_roots([c(0.0); 3]).is_none());
    }

    #[test]
    fn real_mode_counts_only_real_chains() {
        let m = MeshCoeffs::symmetric();
        let rep = trace_oracle(&m, &TraceConfig { allow_complex: false, ..Default::default() });
        assert_eq!(rep.usable, rep.samples);
        assert!(rep.is_flexible());
    }
}
