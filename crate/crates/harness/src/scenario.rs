//! Scenario files: parsing, validation, and seed resolution.

use std::collections::BTreeSet;
use std::path::Path;

use cstar_jensen::cstar_algebra::{validate_coefficient, Element, Shape};
use cstar_jensen::hilbert_module::{ModuleSpace, OrthoSampler, OrthoSamplerSpec};
use cstar_jensen::jensen_core::{DEFAULT_SAMPLES, DEFAULT_TOL, IDENTITY_IDS};
use cstar_jensen::mapping_kit::{
    coefficient_shift_pair, interleave_pair, map_from_json, morphism_shift_pair, Node, PairSpec,
};
use cstar_jensen::{AdditivePair, Coefficient, Mapping};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

/// Environment variable consulted when neither the command line nor the
/// scenario fixes a seed.
pub const SEED_ENV: &str = "CSTAR_JENSEN_SEED";

/// Default pair id, referenced by `pair_image` samplers.
pub const DEFAULT_PAIR_ID: &str = "pair";

/// A real number written either as a JSON number or as a rational string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Number(f64),
    Text(String),
}

impl ScalarSpec {
    /// The exact rational, if the value has one with `i64` parts.
    pub fn rational(&self) -> Option<Ratio<i64>> {
        match self {
            ScalarSpec::Text(s) => s.trim().parse().ok(),
            ScalarSpec::Number(v) => Ratio::approximate_float(*v).filter(|r: &Ratio<i64>| {
                (*r.numer() as f64) / (*r.denom() as f64) == *v
            }),
        }
    }

    pub fn value(&self) -> Result<f64, String> {
        match self {
            ScalarSpec::Number(v) => Ok(*v),
            ScalarSpec::Text(s) => self
                .rational()
                .map(|r| *r.numer() as f64 / *r.denom() as f64)
                .or_else(|| s.trim().parse().ok())
                .ok_or_else(|| format!("`{s}` is neither a number nor a rational p/q")),
        }
    }
}

/// `{"scalar": x}`, `{"diagonal": [x, ...]}` or `{"element": AlgebraElement}`,
/// plus the order flag.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<ScalarSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Element<f64>>,
    pub strict_order: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacesSpec {
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "G")]
    pub g: usize,
}

/// How the additive pair `phi, psi: F -> E` is obtained. Every builder uses
/// the scenario coefficient.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairBuilder {
    /// Needs `A = C`, `E = n`, `F = n / 2` and `a = 1 - p`.
    Interleave {
        #[serde(default)]
        id: Option<String>,
        #[serde(default)]
        p: Option<ScalarSpec>,
    },
    /// Needs `E = 2 F` and `a = 1/2`.
    MorphismShift {
        #[serde(default)]
        id: Option<String>,
    },
    /// Needs `E >= 2 F`.
    CoefficientShift {
        #[serde(default)]
        id: Option<String>,
    },
    Explicit {
        #[serde(default)]
        id: Option<String>,
        phi: Node<f64>,
        psi: Node<f64>,
    },
}

impl PairBuilder {
    fn id(&self) -> &str {
        match self {
            PairBuilder::Interleave { id, .. }
            | PairBuilder::MorphismShift { id }
            | PairBuilder::CoefficientShift { id }
            | PairBuilder::Explicit { id, .. } => id.as_deref().unwrap_or(DEFAULT_PAIR_ID),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingSpec {
    pub label: String,
    pub map: serde_json::Value,
}

/// The file format, before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub algebra: Vec<usize>,
    pub coefficient: CoefficientSpec,
    pub spaces: SpacesSpec,
    #[serde(default)]
    pub pair: Option<PairBuilder>,
    /// Defaults to splitting the coordinates of `E` into two halves.
    #[serde(default)]
    pub sampler: Option<OrthoSamplerSpec<f64>>,
    pub mappings: Vec<MappingSpec>,
    pub checks: Vec<String>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
}

/// Command-line values that replace scenario fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    /// Value of [`SEED_ENV`], if set.
    pub env_seed: Option<u64>,
}

impl Overrides {
    /// Reads [`SEED_ENV`]; an unparsable value is a validation error.
    pub fn with_env_seed(mut self) -> Result<Self, HarnessError> {
        if let Ok(raw) = std::env::var(SEED_ENV) {
            let seed = raw
                .trim()
                .parse()
                .map_err(|_| HarnessError::Validation(format!("{SEED_ENV}=`{raw}` is not an unsigned integer")))?;
            self.env_seed = Some(seed);
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    CommandLine,
    Scenario,
    Environment,
    Default,
}

#[derive(Clone, Debug)]
pub struct Spaces {
    pub f: ModuleSpace,
    pub e: ModuleSpace,
    pub g: ModuleSpace,
}

/// A fully validated scenario with overrides applied.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub shape: Shape,
    pub coefficient: Coefficient,
    /// `a` as an exact rational when it is a rational multiple of the unit.
    pub rational_coefficient: Option<Ratio<i64>>,
    pub spaces: Spaces,
    pub pair: Option<AdditivePair>,
    pub sampler: OrthoSampler<f64>,
    pub mappings: Vec<(String, Mapping)>,
    pub checks: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub tol: f64,
    pub overrides: Overrides,
    /// SHA-256 over the file bytes and the overrides that took effect.
    pub digest: String,
}

impl Scenario {
    pub fn mapping(&self, label: &str) -> Option<&Mapping> {
        self.mappings.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }
}

/// Identity ids that need an additive pair.
pub fn needs_pair(id: &str) -> bool {
    id != "eq-1.1" && !id.starts_with("lemma2.1-")
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Validation(msg.into())
}

pub fn load_scenario(path: &Path, overrides: &Overrides) -> Result<Scenario, HarnessError> {
    let bytes = std::fs::read(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&bytes, overrides)
}

pub fn parse_scenario(bytes: &[u8], overrides: &Overrides) -> Result<Scenario, HarnessError> {
    let file: ScenarioFile = serde_json::from_slice(bytes).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let (seed, seed_source) = match (overrides.seed, file.seed, overrides.env_seed) {
        (Some(s), _, _) => (s, SeedSource::CommandLine),
        (None, Some(s), _) => (s, SeedSource::Scenario),
        (None, None, Some(s)) => (s, SeedSource::Environment),
        (None, None, None) => (0, SeedSource::Default),
    };
    let digest = digest(bytes, overrides, seed_source);
    validate(file, overrides, seed, seed_source, digest)
}

fn digest(bytes: &[u8], overrides: &Overrides, seed_source: SeedSource) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    if let Some(s) = overrides.seed {
        h.update(format!("\n--seed={s}"));
    }
    if let Some(n) = overrides.samples {
        h.update(format!("\n--samples={n}"));
    }
    if let Some(t) = overrides.tol {
        h.update(format!("\n--tol={t:.16e}"));
    }
    if let (SeedSource::Environment, Some(s)) = (seed_source, overrides.env_seed) {
        h.update(format!("\n{SEED_ENV}={s}"));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn coefficient_element(spec: &CoefficientSpec, shape: &Shape) -> Result<(Element<f64>, Option<Ratio<i64>>), HarnessError> {
    let given = [spec.scalar.is_some(), spec.diagonal.is_some(), spec.element.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(invalid("coefficient: give exactly one of `scalar`, `diagonal`, `element`"));
    }
    if let Some(s) = &spec.scalar {
        let v = s.value().map_err(|e| invalid(format!("coefficient: {e}")))?;
        return Ok((Element::real_scalar(shape, v), s.rational()));
    }
    if let Some(d) = &spec.diagonal {
        let vals = d
            .iter()
            .map(ScalarSpec::value)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(format!("coefficient: {e}")))?;
        let el = Element::from_diagonal(shape, &vals).map_err(|e| invalid(format!("coefficient: {e}")))?;
        // a rational multiple of the unit keeps its exact value
        let rational = match d.first().and_then(ScalarSpec::rational) {
            Some(r) if d.iter().all(|s| s.rational() == Some(r)) => Some(r),
            _ => None,
        };
        return Ok((el, rational));
    }
    let el = spec.element.clone().expect("one variant present");
    if el.shape() != shape {
        return Err(invalid(format!(
            "coefficient: element shape {:?} differs from algebra {:?}",
            el.shape().dims(),
            shape.dims()
        )));
    }
    Ok((el, None))
}

fn build_pair(
    builder: PairBuilder,
    a: &Coefficient,
    spaces: &Spaces,
) -> Result<AdditivePair, HarnessError> {
    let (f, e) = (spaces.f.rank(), spaces.e.rank());
    let shape = spaces.e.algebra();
    let scalar = a.as_real_scalar();
    let pair = match builder {
        PairBuilder::Interleave { p, .. } => {
            if shape.dims() != [1] {
                return Err(invalid("pair: interleave needs algebra [1]"));
            }
            if e != 2 * f {
                return Err(invalid(format!("pair: interleave needs E = 2 F, got E = {e}, F = {f}")));
            }
            let av = scalar.ok_or_else(|| invalid("pair: interleave needs a scalar coefficient"))?;
            let p = match p {
                Some(p) => {
                    let p = p.value().map_err(|e| invalid(format!("pair: {e}")))?;
                    if ((1.0 - p) - av).abs() > 1e-12 {
                        return Err(invalid(format!("pair: interleave p = {p} needs coefficient 1 - p, got {av}")));
                    }
                    p
                }
                None => 1.0 - av,
            };
            interleave_pair(p, e)
        }
        PairBuilder::MorphismShift { .. } => {
            if e != 2 * f {
                return Err(invalid(format!("pair: morphism_shift needs E = 2 F, got E = {e}, F = {f}")));
            }
            if scalar != Some(0.5) {
                return Err(invalid("pair: morphism_shift needs coefficient 1/2"));
            }
            morphism_shift_pair(shape, f)
        }
        PairBuilder::CoefficientShift { .. } => {
            if e < 2 * f {
                return Err(invalid(format!("pair: coefficient_shift needs E >= 2 F, got E = {e}, F = {f}")));
            }
            coefficient_shift_pair(a, f, e)
        }
        PairBuilder::Explicit { phi, psi, .. } => PairSpec {
            phi,
            psi,
            a: a.value().clone(),
        }
        .build(&spaces.f, &spaces.e, a.is_strict_order()),
    };
    pair.map_err(|e| invalid(format!("pair: {e}")))
}

fn validate(
    file: ScenarioFile,
    overrides: &Overrides,
    seed: u64,
    seed_source: SeedSource,
    digest: String,
) -> Result<Scenario, HarnessError> {
    let shape = Shape::new(file.algebra.clone()).map_err(|e| invalid(format!("algebra: {e}")))?;
    let (element, rational_coefficient) = coefficient_element(&file.coefficient, &shape)?;
    let coefficient = validate_coefficient(&element, file.coefficient.strict_order)
        .map_err(|e| invalid(format!("coefficient: {e}")))?;

    let space = |name: &str, rank: usize| {
        ModuleSpace::new(shape.clone(), rank).map_err(|e| invalid(format!("spaces.{name}: {e}")))
    };
    let spaces = Spaces {
        f: space("F", file.spaces.f)?,
        e: space("E", file.spaces.e)?,
        g: space("G", file.spaces.g)?,
    };

    if file.checks.is_empty() {
        return Err(invalid("checks: at least one identity id is required"));
    }
    let mut seen = BTreeSet::new();
    for id in &file.checks {
        if !IDENTITY_IDS.contains(&id.as_str()) {
            return Err(invalid(format!("checks: unknown identity id `{id}` (see list-checks)")));
        }
        if !seen.insert(id.as_str()) {
            return Err(invalid(format!("checks: `{id}` listed twice")));
        }
    }

    let pair_id = file.pair.as_ref().map(|b| b.id().to_string());
    let pair = file
        .pair
        .map(|b| build_pair(b, &coefficient, &spaces))
        .transpose()?;
    if pair.is_none() {
        if let Some(id) = file.checks.iter().find(|id| needs_pair(id)) {
            return Err(invalid(format!("pair: check `{id}` needs an additive pair")));
        }
    }

    let sampler = match file.sampler {
        None => OrthoSampler::halves(&spaces.e),
        Some(spec) => spec
            .resolve(|id| (Some(id) == pair_id.as_deref()).then(|| pair.clone()).flatten())
            .map_err(|e| invalid(format!("sampler: {e}")))?,
    };
    sampler.validate(&spaces.e).map_err(|e| invalid(format!("sampler: {e}")))?;

    if file.mappings.is_empty() {
        return Err(invalid("mappings: at least one mapping is required"));
    }
    let mut mappings = Vec::with_capacity(file.mappings.len());
    let mut labels = BTreeSet::new();
    for m in file.mappings {
        if !labels.insert(m.label.clone()) {
            return Err(invalid(format!("mappings: label `{}` used twice", m.label)));
        }
        let map = map_from_json(m.map, &spaces.e, &spaces.g)
            .map_err(|e| invalid(format!("mappings[{}]: {e}", m.label)))?;
        mappings.push((m.label, map));
    }

    let samples = overrides.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(invalid("samples: must be at least 1"));
    }
    let tol = overrides.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid(format!("tol: must be positive and finite, got {tol}")));
    }

    Ok(Scenario {
        shape,
        coefficient,
        rational_coefficient,
        spaces,
        pair,
        sampler,
        mappings,
        checks: file.checks,
        samples,
        seed,
        seed_source,
        tol,
        overrides: overrides.clone(),
        digest,
    })
}
