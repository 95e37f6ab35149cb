//! Generators for each class of flexible mesh.
//!
//! Every generator draws its free parameters from a seeded stream, walks
//! through the sign choices of its recipe in a fixed order and returns the
//! first candidate that satisfies the realizability inequalities and passes
//! self-verification. Nothing unverified is ever returned.
//!
//! Free reals are uniform on `[-3, 3]` away from a `1e-3` neighborhood of
//! zero, hinge parameters are uniform on `(-1, 1)`. Named parameters given in
//! [`Seed::params`] replace the corresponding draw.
//!
//! Unspecified signs are searched as a binary counter over the recipe's sign
//! names, first name most significant, `+` before `-`.

mod adjacent;
mod constant;
mod deltoidal;
mod isogonal;
mod opposite;

pub use adjacent::{adjacent_singular, AdjacentSystem, LinearFactor};
pub use constant::constant;
pub use deltoidal::{
    deltoidal_irreducible_special, deltoidal_reducible, irreducible_special_mesh, DeltoidalOption,
    Radicand, SpecialMesh,
};
pub use isogonal::{isogonal, isogonal_tail, Tail};
pub use opposite::opposite_singular;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bricard::{BricardError, MeshCoeffs, MeshMeta};
use crate::verify::{
    classify_mesh, resultant_gcd_check, scalar_check, trace_oracle, MeshClass, TraceConfig, TraceReport,
};
use crate::TOOL_VERSION;

/// Default number of draws before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;
const DRAW_RANGE: f64 = 3.0;
const DRAW_GAP: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("no verified mesh after {attempts} draws (last rejection: {last})")]
    SearchExhausted { attempts: usize, last: String },
    #[error("unknown parameter '{name}' for {constructor}; expected one of {expected}")]
    UnknownParam { name: String, constructor: &'static str, expected: String },
    #[error("unknown sign '{name}' for {constructor}; expected one of {expected}")]
    UnknownSign { name: String, constructor: &'static str, expected: String },
    #[error("parameter {name} = {value}: {reason}")]
    InvalidParam { name: String, value: f64, reason: &'static str },
    #[error("factor extraction failed: residual {0:e}")]
    FactorExtractionFailed(f64),
    #[error(transparent)]
    Bricard(#[from] BricardError),
}

/// A `+` or `-` choice in a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(format!("sign must be '+' or '-', got '{s}'")),
        }
    }
}

/// Everything that determines a constructor's output.
#[derive(Clone, Debug)]
pub struct Seed {
    pub seed: u64,
    /// Fixed sign choices; missing names are searched.
    pub signs: BTreeMap<String, Sign>,
    /// Values replacing the corresponding random draws.
    pub params: BTreeMap<String, f64>,
    pub budget: usize,
}

impl Seed {
    pub fn new(seed: u64) -> Self {
        Seed { seed, signs: BTreeMap::new(), params: BTreeMap::new(), budget: DEFAULT_BUDGET }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_sign(mut self, name: &str, sign: Sign) -> Self {
        self.signs.insert(name.to_string(), sign);
        self
    }
}

pub type Signs = BTreeMap<String, Sign>;

/// Kind of a free parameter, deciding how it is drawn and checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ParamKind {
    /// Nonzero real drawn from `[-3, 3]`.
    Real,
    /// Hinge parameter in `(-1, 1]`.
    Hinge,
}

/// What went into an accepted mesh beyond its coefficients.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub mesh: MeshCoeffs,
    /// Draws consumed, counting the accepted one.
    pub attempts: usize,
    pub report: SelfCheck,
}

/// Outcome of the checks run before a mesh is returned.
#[derive(Clone, Debug)]
pub struct SelfCheck {
    pub trace: TraceReport,
    pub class: MeshClass,
    /// `None` when a constant branch puts the gcd test out of scope.
    pub gcd: Option<bool>,
    /// Isogonal meshes only.
    pub scalar: Option<bool>,
    /// Recipe-specific figures, e.g. factor residuals.
    pub notes: BTreeMap<String, f64>,
}

/// One candidate produced from a draw and a sign assignment.
pub(crate) struct Candidate {
    pub mesh: MeshCoeffs,
    pub notes: BTreeMap<String, f64>,
}

impl Candidate {
    pub fn new(mesh: MeshCoeffs) -> Self {
        Candidate { mesh, notes: BTreeMap::new() }
    }

    pub fn note(mut self, key: &str, v: f64) -> Self {
        self.notes.insert(key.to_string(), v);
        self
    }
}

/// Why a candidate was dropped; never leaves the module.
pub(crate) type Reject = String;

/// Random or forced values for one attempt.
pub(crate) struct Draws<'a> {
    rng: &'a mut ChaCha8Rng,
    forced: &'a BTreeMap<String, f64>,
    pub values: BTreeMap<String, f64>,
    random: bool,
}

impl Draws<'_> {
    pub fn real(&mut self, name: &str) -> f64 {
        let v = match self.forced.get(name) {
            Some(&v) => v,
            None => {
                self.random = true;
                loop {
                    let v = self.rng.gen_range(-DRAW_RANGE..DRAW_RANGE);
                    if v.abs() >= DRAW_GAP {
                        break v;
                    }
                }
            }
        };
        self.values.insert(name.to_string(), v);
        v
    }

    pub fn hinge(&mut self, name: &str) -> f64 {
        let v = match self.forced.get(name) {
            Some(&v) => v,
            None => {
                self.random = true;
                loop {
                    let v = self.rng.gen_range(-1.0..1.0);
                    if v > -1.0 {
                        break v;
                    }
                }
            }
        };
        self.values.insert(name.to_string(), v);
        v
    }
}

/// Static description of one generator.
pub(crate) struct Recipe {
    pub name: &'static str,
    pub class: MeshClass,
    pub params: Vec<(&'static str, ParamKind)>,
    pub signs: Vec<&'static str>,
    /// Extra entries for the metadata, e.g. the chosen system.
    pub config: Vec<(&'static str, String)>,
}

impl Recipe {
    fn check_seed(&self, seed: &Seed) -> Result<(), ConstructError> {
        let names = || self.params.iter().map(|p| p.0).collect::<Vec<_>>().join(", ");
        for (name, &value) in &seed.params {
            let kind = self.params.iter().find(|p| p.0 == name).map(|p| p.1).ok_or_else(|| {
                ConstructError::UnknownParam { name: name.clone(), constructor: self.name, expected: names() }
            })?;
            let reason = match kind {
                _ if !value.is_finite() => Some("must be finite"),
                ParamKind::Real if value == 0.0 => Some("must be nonzero"),
                ParamKind::Hinge if !(value > -1.0 && value <= 1.0) => Some("must lie in (-1, 1]"),
                _ => None,
            };
            if let Some(reason) = reason {
                return Err(ConstructError::InvalidParam { name: name.clone(), value, reason });
            }
        }
        for name in seed.signs.keys() {
            if !self.signs.contains(&name.as_str()) {
                return Err(ConstructError::UnknownSign {
                    name: name.clone(),
                    constructor: self.name,
                    expected: self.signs.join(", "),
                });
            }
        }
        Ok(())
    }

    /// Sign assignments to try, in search order.
    fn sign_combinations(&self, fixed: &Signs) -> Vec<Signs> {
        let open: Vec<&str> = self.signs.iter().copied().filter(|s| !fixed.contains_key(*s)).collect();
        (0..1usize << open.len())
            .map(|bits| {
                let mut m = fixed.clone();
                for (i, name) in open.iter().enumerate() {
                    let bit = (bits >> (open.len() - 1 - i)) & 1;
                    m.insert(name.to_string(), if bit == 0 { Sign::Plus } else { Sign::Minus });
                }
                m
            })
            .collect()
    }

    /// Draw, build and verify until a candidate survives or the budget runs out.
    pub fn run<D>(
        &self,
        seed: &Seed,
        draw: impl Fn(&mut Draws) -> Result<D, Reject>,
        build: impl Fn(&D, &Signs) -> Result<Candidate, Reject>,
    ) -> Result<Constructed, ConstructError> {
        self.check_seed(seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
        let combos = self.sign_combinations(&seed.signs);
        let mut last = String::from("none");
        for attempt in 1..=seed.budget.max(1) {
            let mut d = Draws { rng: &mut rng, forced: &seed.params, values: BTreeMap::new(), random: false };
            let drawn = draw(&mut d);
            let (values, random) = (d.values, d.random);
            match drawn {
                Err(why) => last = why,
                Ok(data) => {
                    for signs in &combos {
                        let cand = match build(&data, signs) {
                            Ok(c) => c,
                            Err(why) => {
                                last = why;
                                continue;
                            }
                        };
                        match self_verify(&cand.mesh, self.class) {
                            Ok(mut report) => {
                                report.notes.extend(cand.notes);
                                let mesh = self.finish(cand.mesh, seed, signs, values);
                                log::debug!("{}: accepted after {attempt} draws", self.name);
                                return Ok(Constructed { mesh, attempts: attempt, report });
                            }
                            Err(why) => { log::debug!("verify rejected: {why}"); last = why }
                        }
                    }
                }
            }
            if !random {
                return Err(ConstructError::SearchExhausted { attempts: attempt, last });
            }
        }
        Err(ConstructError::SearchExhausted { attempts: seed.budget.max(1), last })
    }

    fn finish(&self, mesh: MeshCoeffs, seed: &Seed, signs: &Signs, params: BTreeMap<String, f64>) -> MeshCoeffs {
        let mut config: BTreeMap<String, String> =
            self.config.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        config.insert("budget".into(), seed.budget.to_string());
        let meta = MeshMeta {
            tool: TOOL_VERSION.to_string(),
            constructor: Some(self.name.to_string()),
            seed: Some(seed.seed),
            signs: signs.iter().map(|(k, v)| (k.clone(), v.symbol().to_string())).collect(),
            params,
            config,
        };
        MeshCoeffs { meta: Some(meta), ..mesh.with_class(self.class.name()) }
    }
}

/// The checks every constructor output must pass: the trace oracle declares
/// it flexible, the classifier agrees with the intended class, the resultant
/// test agrees where it applies and, for isogonal meshes, the product of the
/// isogram maps is scalar.
pub fn self_verify(m: &MeshCoeffs, class: MeshClass) -> Result<SelfCheck, String> {
    m.validate().map_err(|e| e.to_string())?;
    let cfg = TraceConfig::default();
    let trace = trace_oracle(m, &cfg);
    if !trace.is_flexible() {
        return Err(format!("trace oracle: closure fraction {:.3}", trace.closure_fraction));
    }
    let found = classify_mesh(m, &cfg).class;
    if found != class {
        return Err(format!("classified as {found}, wanted {class}"));
    }
    let gcd = if trace.has_constant_branch() {
        None
    } else {
        let g = resultant_gcd_check(m, &trace).map_err(|e| e.to_string())?;
        if !g.shared {
            return Err(format!("resultants share no factor (fraction {:.3})", g.fraction));
        }
        Some(true)
    };
    let scalar = if class == MeshClass::Isogonal {
        let s = scalar_check(m).map_err(|e| e.to_string())?;
        if !s.scalar {
            return Err(format!("isogram product not scalar (defect {:e})", s.defect));
        }
        Some(true)
    } else {
        None
    };
    Ok(SelfCheck { trace, class, gcd, scalar, notes: BTreeMap::new() })
}

/// Roots `k` of `a k^2 + k + e = 0` picked by sign, if real.
pub(crate) fn isogram_k(a: f64, e: f64, sign: Sign) -> Option<f64> {
    let disc = 1.0 - 4.0 * a * e;
    if disc < 0.0 {
        return None;
    }
    Some((-1.0 + sign.value() * disc.sqrt()) / (2.0 * a))
}

/// Generates a mesh of the given class with the default recipe options.
pub fn construct_class(class: MeshClass, seed: &Seed) -> Result<Constructed, ConstructError> {
    match class {
        MeshClass::Isogonal => isogonal(seed),
        MeshClass::Constant => constant(seed, 2),
        MeshClass::Adjacent => adjacent_singular(seed, AdjacentSystem::One),
        MeshClass::Opposite => opposite_singular(seed),
        MeshClass::DeltoidalReducible => deltoidal_reducible(seed, DeltoidalOption::One, AdjacentSystem::One),
        MeshClass::DeltoidalIrreducible => deltoidal_irreducible_special(seed),
        MeshClass::OutsideScope => Err(ConstructError::InvalidParam {
            name: "class".into(),
            value: f64::NAN,
            reason: "outside-scope meshes have no generator",
        }),
    }
}
