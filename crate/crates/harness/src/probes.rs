//! The truncated interleaving example and the kernel solver probe.

use cstar_jensen::cstar_algebra::sample;
use cstar_jensen::hilbert_module::{inner_product, rng_for, sample_orthogonal_pair, OrthoSampler};
use cstar_jensen::jensen_core::orthogonality_identity_check;
use cstar_jensen::mapping_kit::{interleave_pair, solve_abiadditive_kernel};
use cstar_jensen::{Coefficient, Result};
use serde::Serialize;

use crate::scenario::Scenario;

/// Bound every residual of the interleaving example must meet.
pub const L2_BOUND: f64 = 1e-12;
/// Bound on the intertwining residual of every kernel basis member.
pub const KERNEL_BOUND: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct L2Summary {
    pub p: f64,
    pub n: usize,
    pub orthogonality_residual: f64,
    pub balance_residual: f64,
    /// Largest `|<x, y>|` over pairs drawn through the pair images.
    pub pair_image_defect: f64,
    /// Largest residual of the orthogonality display over random inputs.
    pub orthogonality_display: f64,
}

impl L2Summary {
    pub fn pass(&self) -> bool {
        [
            self.orthogonality_residual,
            self.balance_residual,
            self.pair_image_defect,
            self.orthogonality_display,
        ]
        .iter()
        .all(|r| *r <= L2_BOUND)
    }
}

pub fn l2_example(p: f64, n: usize, samples: usize, seed: u64) -> Result<L2Summary> {
    let pair = interleave_pair(p, n)?;
    let mode = OrthoSampler::PairImage(Box::new(pair.clone()));
    let mut defect = 0.0f64;
    let mut inputs = Vec::with_capacity(samples);
    for i in 0..samples as u64 {
        let (x, y) = sample_orthogonal_pair(&mode, pair.target(), seed, i)?;
        defect = defect.max(inner_product(&x, &y)?.cstar_norm());
        let mut rng = rng_for(seed ^ 0x12, i);
        inputs.push((
            cstar_jensen::hilbert_module::random_vector(pair.source(), &mut rng),
            cstar_jensen::hilbert_module::random_vector(pair.source(), &mut rng),
        ));
    }
    let display = orthogonality_identity_check(&pair, &inputs, L2_BOUND)?;
    Ok(L2Summary {
        p,
        n,
        orthogonality_residual: pair.orthogonality_residual(),
        balance_residual: pair.balance_residual(),
        pair_image_defect: defect,
        orthogonality_display: display.max_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSummary {
    pub algebra: Vec<usize>,
    pub target_rank: usize,
    pub dimension: usize,
    pub per_coordinate: usize,
    pub max_constraint_residual: f64,
}

impl KernelSummary {
    pub fn pass(&self) -> bool {
        self.max_constraint_residual <= KERNEL_BOUND
    }
}

/// Solves for the kernel into `target_rank` copies of the algebra and
/// re-checks every basis member on `samples` random self-adjoint elements.
pub fn kernel_probe(a: &Coefficient, target_rank: usize, samples: usize, seed: u64) -> Result<KernelSummary> {
    let target = cstar_jensen::hilbert_module::ModuleSpace::new(a.shape().clone(), target_rank)?;
    let kernel = solve_abiadditive_kernel(a, &target)?;
    let mut worst = 0.0f64;
    for (k, member) in kernel.basis().iter().enumerate() {
        for i in 0..samples as u64 {
            let b = sample::random_self_adjoint::<f64, _>(a.shape(), &mut rng_for(seed, (k as u64) << 32 | i));
            worst = worst.max(member.constraint_residual(a, &b));
        }
    }
    Ok(KernelSummary {
        algebra: a.shape().dims().to_vec(),
        target_rank,
        dimension: kernel.dimension(),
        per_coordinate: kernel.per_coordinate(),
        max_constraint_residual: worst,
    })
}

/// [`kernel_probe`] for the scenario coefficient into `G`.
pub fn scenario_kernel_probe(s: &Scenario) -> Result<KernelSummary> {
    kernel_probe(&s.coefficient, s.spaces.g.rank(), s.samples.min(50), s.seed)
}
