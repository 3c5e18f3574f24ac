//! Runs the selected identity checks for every mapping of a scenario.

use cstar_jensen::hilbert_module::{random_vector, rng_for, sample_orthogonal_pair, sub_seed, Vector};
use cstar_jensen::jensen_core::{
    check_additivity_on_k, check_orthogonal_jensen, check_quadratic_on_k, decompose, extract_a, lemma21_suite,
    lemma22_check, orthogonality_identity_check, p_jensen_affine_check, uniqueness_check, CenteredEvenPart,
    IdentityResidual,
};
use cstar_jensen::{Mapping, Result as CoreResult};
use num_rational::Ratio;
use sha2::{Digest, Sha256};

use crate::report::{CampaignReport, LabelResults};
use crate::scenario::Scenario;

/// Checks evaluated together because they share samples or intermediate results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Group {
    Jensen,
    Lemma21,
    Lemma22,
    Additive,
    Quadratic,
    Decompose,
    Corollary,
}

impl Group {
    fn of(id: &str) -> Group {
        match id {
            "eq-1.1" => Group::Jensen,
            "lemma2.2" | "lemma2.2-orth" => Group::Lemma22,
            "prop2.3-additive" => Group::Additive,
            "cor2.9-B-vanishes" => Group::Corollary,
            _ if id.starts_with("lemma2.1-") => Group::Lemma21,
            _ if id.starts_with("prop2.5-") => Group::Quadratic,
            _ => Group::Decompose,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Group::Jensen => "jensen",
            Group::Lemma21 => "lemma2.1",
            Group::Lemma22 => "lemma2.2",
            Group::Additive => "additive",
            Group::Quadratic => "quadratic",
            Group::Decompose => "decompose",
            Group::Corollary => "corollary",
        }
    }
}

/// Seed for one (mapping, group) cell, independent of evaluation order.
pub fn cell_seed(seed: u64, label: &str, group: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    h.update([0]);
    h.update(group.as_bytes());
    let bytes: [u8; 8] = h.finalize()[..8].try_into().expect("digest has 32 bytes");
    sub_seed(seed, u64::from_le_bytes(bytes))
}

/// Runs every selected check on every mapping. Checker errors become failed
/// entries; the campaign itself never aborts.
pub fn run_suite(s: &Scenario) -> CampaignReport {
    let started = crate::report::timestamp();
    let mut labels: Vec<&(String, Mapping)> = s.mappings.iter().collect();
    labels.sort_by(|a, b| a.0.cmp(&b.0));
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = labels
            .iter()
            .map(|(label, f)| scope.spawn(move || run_mapping(s, label, f)))
            .collect();
        handles
            .into_iter()
            .zip(&labels)
            .map(|(h, (label, _))| LabelResults {
                label: label.clone(),
                residuals: h.join().expect("campaign worker panicked"),
            })
            .collect()
    });
    CampaignReport::new(s, started, results)
}

/// Decomposition evidence for one mapping: every property of the
/// decomposition plus uniqueness against a second run.
pub fn run_decomposition(s: &Scenario, label: &str) -> Option<CampaignReport> {
    let started = crate::report::timestamp();
    let f = s.mapping(label)?;
    let ids = [
        "prop2.3-additive",
        "thm2.7-reconstruct",
        "thm2.7-A-a-additive",
        "thm2.7-B-symmetric",
        "thm2.7-B-biadditive",
        "thm2.7-B-a-biadditive",
        "thm2.7-B-orth-preserving",
        "thm2.7-unique",
    ];
    let seed = cell_seed(s.seed, label, Group::Decompose.name());
    let mut residuals = decompose_group(s, f, &ids, seed);
    residuals.sort_by(|a, b| a.id.cmp(&b.id));
    Some(CampaignReport::new(
        s,
        started,
        vec![LabelResults {
            label: label.to_string(),
            residuals,
        }],
    ))
}

fn run_mapping(s: &Scenario, label: &str, f: &Mapping) -> Vec<IdentityResidual> {
    let mut groups: Vec<(Group, Vec<&str>)> = Vec::new();
    for id in &s.checks {
        let g = Group::of(id);
        match groups.iter_mut().find(|(k, _)| *k == g) {
            Some((_, ids)) => ids.push(id),
            None => groups.push((g, vec![id])),
        }
    }
    let mut out = Vec::new();
    for (group, ids) in groups {
        let seed = cell_seed(s.seed, label, group.name());
        out.extend(match group {
            Group::Decompose => decompose_group(s, f, &ids, seed),
            _ => collect(&ids, run_group(s, f, group, seed)),
        });
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Keeps the requested ids; errors and missing ids become failed entries.
fn collect(ids: &[&str], produced: CoreResult<Vec<IdentityResidual>>) -> Vec<IdentityResidual> {
    match produced {
        Err(e) => ids.iter().map(|id| IdentityResidual::error(id, e.to_string())).collect(),
        Ok(list) => ids
            .iter()
            .map(|id| {
                list.iter()
                    .find(|r| r.id == *id)
                    .cloned()
                    .unwrap_or_else(|| IdentityResidual::error(id, "not produced for this mapping"))
            })
            .collect(),
    }
}

fn source_samples(s: &Scenario, seed: u64) -> Vec<(Vector<f64>, Vector<f64>)> {
    (0..s.samples as u64)
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let x = random_vector(&s.spaces.f, &mut rng);
            let y = random_vector(&s.spaces.f, &mut rng);
            (x, y)
        })
        .collect()
}

fn run_group(s: &Scenario, f: &Mapping, group: Group, seed: u64) -> CoreResult<Vec<IdentityResidual>> {
    let (n, tol, a) = (s.samples, s.tol, &s.coefficient);
    let pair = || s.pair.as_ref().ok_or(cstar_jensen::Error::PairNotValidated);
    Ok(match group {
        Group::Jensen => vec![check_orthogonal_jensen(f, a, &s.sampler, n, tol, seed)?],
        Group::Lemma21 => {
            let mut xs = Vec::with_capacity(2 * n);
            for i in 0..n as u64 {
                let (x, y) = sample_orthogonal_pair(&s.sampler, &s.spaces.e, seed, i)?;
                xs.push(x);
                xs.push(y);
            }
            lemma21_suite(f, a, &xs, tol)?
        }
        Group::Lemma22 => {
            let samples = source_samples(s, seed);
            vec![
                lemma22_check(f, pair()?, &samples, tol)?,
                orthogonality_identity_check(pair()?, &samples, tol)?,
            ]
        }
        Group::Additive => vec![check_additivity_on_k(&extract_a(f), pair()?, n, tol, seed)?],
        Group::Quadratic => check_quadratic_on_k(&CenteredEvenPart(f), pair()?, n, tol, seed)?,
        Group::Corollary => {
            let a_exact = s.rational_coefficient.ok_or_else(|| {
                cstar_jensen::Error::DomainError("needs a rational multiple of the unit as coefficient".into())
            })?;
            // the pair balance (1 - p)^2 <phi, phi> = p^2 <psi, psi> matches a = 1 - p
            let p = Ratio::from_integer(1) - a_exact;
            vec![p_jensen_affine_check(f, p, pair()?, n, tol, seed)?]
        }
        Group::Decompose => unreachable!("handled by decompose_group"),
    })
}

fn decompose_group(s: &Scenario, f: &Mapping, ids: &[&str], seed: u64) -> Vec<IdentityResidual> {
    let (n, tol) = (s.samples, s.tol);
    let Some(pair) = s.pair.as_ref() else {
        return collect(ids, Err(cstar_jensen::Error::PairNotValidated));
    };
    let first = match decompose(f, &s.coefficient, pair, n, tol, seed) {
        Ok(d) => d,
        Err(e) => return collect(ids, Err(e)),
    };
    let mut produced = first.property_report.clone();
    if ids.contains(&"thm2.7-unique") {
        let unique = decompose(f, &s.coefficient, pair, n, tol, sub_seed(seed, 1))
            .and_then(|second| uniqueness_check(f, &first, &second, n, tol, sub_seed(seed, 2)));
        match unique {
            Ok(r) => produced.push(r),
            Err(e) => produced.push(IdentityResidual::error("thm2.7-unique", e.to_string())),
        }
    }
    collect(ids, Ok(produced))
}
