//! End-to-end estimation pipelines: sample J coarse grids, extract their
//! spectra, refine each coarse value on the fine grid, then gather and
//! deduplicate.
//!
//! Samples are fully independent: each derives its own seed from the
//! master seed and the sample index, touches only the shared read-only
//! fine matrix, and synchronizes with nothing. The gather step sorts
//! canonically, so results are identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregation::{
    bfs_graph_partition, random_partition, strong_coupling_aggregation, Partition,
};
use crate::coarsen::{build_interpolation, galerkin_product, two_sided_product};
use crate::dense_eig::{dense_singular_values, eig_extremes, sym_eigenvalues, SpectrumKind};
use crate::error::{Error, Result};
use crate::fine_solver::{eigen_near_shift, singular_value_near_shift, ShiftResult};
use crate::matrix::SparseMatrix;
use crate::rng::derive_seed;

/// Relative deduplication tolerance for gathered values.
const DEDUP_RELATIVE: f64 = 1e-8;
/// Absolute dedup floor, scaled by ||A||_1.
const DEDUP_FLOOR: f64 = 1e-12;

// seed-derivation tags, one per independent stream
const TAG_SHIFT: u64 = 0x5348_4946_5400;
const TAG_ROWS: u64 = 0x524f_5753;
const TAG_COLS: u64 = 0x434f_4c53;

/// Partitioner choice for coarse-grid sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Partitioner {
    /// AMG-style strong negative coupling with threshold beta.
    /// Deterministic: every sample produces the same partition.
    StrongCoupling { beta: f64 },
    /// Seeded round-robin BFS region growing.
    Bfs,
    /// Seeded balanced random chunking.
    Random,
}

/// Which k coarse values become shifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftTarget {
    Smallest,
    Largest,
    NearestTo { point: f64 },
}

/// Controls for one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Number of coarse-grid samples J.
    pub samples: usize,
    /// Values requested per sample k.
    pub per_sample: usize,
    /// Coarse dimension N_c handed to the seeded partitioners.
    pub n_aggregates: usize,
    pub partitioner: Partitioner,
    /// Column-normalize the interpolation operators (required for the
    /// interlacing guarantees; false reproduces the unit-entry operator).
    pub normalized: bool,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub target: ShiftTarget,
}

impl SampleConfig {
    pub fn new(samples: usize, per_sample: usize, n_aggregates: usize, seed: u64) -> Self {
        SampleConfig {
            samples,
            per_sample,
            n_aggregates,
            partitioner: Partitioner::Random,
            normalized: true,
            seed,
            tol: 1e-10,
            max_iters: 200,
            target: ShiftTarget::Smallest,
        }
    }

    /// J >= 1 and 1 <= k <= N_c <= N.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        if self.per_sample < 1 || self.per_sample > self.n_aggregates {
            return Err(Error::InvalidArgument(format!(
                "per-sample count {} outside [1, {}]",
                self.per_sample, self.n_aggregates
            )));
        }
        if self.n_aggregates > n {
            return Err(Error::InvalidAggregateCount {
                got: self.n_aggregates,
                max: n,
            });
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Where an accepted value came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub sample: usize,
    pub shift: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Deduplicated estimate with per-value provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    /// Eigenvalues ascending, singular values descending.
    pub values: Vec<f64>,
    /// For each accepted value, every contributing refinement, sorted by
    /// (sample, shift). The entry with the smallest residual is the one
    /// whose value is reported.
    pub provenance: Vec<Vec<Provenance>>,
    /// Refinements that failed to converge and were left out.
    pub rejected: usize,
    pub kind: SpectrumKind,
}

impl SpectrumEstimate {
    /// Representative record (smallest residual) for each value.
    pub fn best_provenance(&self) -> Vec<Provenance> {
        self.provenance
            .iter()
            .map(|records| {
                *records
                    .iter()
                    .min_by(|a, b| {
                        a.residual
                            .total_cmp(&b.residual)
                            .then(a.sample.cmp(&b.sample))
                            .then(a.shift.total_cmp(&b.shift))
                    })
                    .expect("every value has at least one provenance record")
            })
            .collect()
    }
}

/// Everything one sample produced, kept for reporting and plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDetail {
    pub sample: usize,
    /// Full coarse spectrum of this sample's coarse operator.
    pub coarse_values: Vec<f64>,
    /// One refinement per selected shift.
    pub refinements: Vec<RefineRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefineRecord {
    pub shift: f64,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl RefineRecord {
    fn from_result(r: &ShiftResult) -> Self {
        RefineRecord {
            shift: r.shift,
            value: r.value,
            residual: r.residual,
            iterations: r.iterations,
            converged: r.converged,
        }
    }
}

fn build_partition(a: &SparseMatrix, cfg: &SampleConfig, sample_seed: u64) -> Result<Partition> {
    match cfg.partitioner {
        Partitioner::StrongCoupling { beta } => strong_coupling_aggregation(a, beta),
        Partitioner::Bfs => bfs_graph_partition(a, cfg.n_aggregates, sample_seed),
        Partitioner::Random => random_partition(a.nrows(), cfg.n_aggregates, sample_seed),
    }
}

/// Pick the k shift candidates from an ascending coarse spectrum.
fn select_shifts(coarse: &[f64], k: usize, target: ShiftTarget) -> Vec<f64> {
    let k = k.min(coarse.len());
    match target {
        ShiftTarget::Smallest => coarse[..k].to_vec(),
        ShiftTarget::Largest => coarse[coarse.len() - k..].to_vec(),
        ShiftTarget::NearestTo { point } => {
            let mut by_distance: Vec<f64> = coarse.to_vec();
            by_distance.sort_by(|a, b| {
                (a - point)
                    .abs()
                    .total_cmp(&(b - point).abs())
                    .then(a.total_cmp(b))
            });
            let mut picked = by_distance[..k].to_vec();
            picked.sort_by(f64::total_cmp);
            picked
        }
    }
}

/// Eigenvalue estimation with per-sample detail (coarse spectra and every
/// refinement), for reporting and plotting.
pub fn estimate_eigenvalues_detailed(
    a: &SparseMatrix,
    cfg: &SampleConfig,
) -> Result<(SpectrumEstimate, Vec<SampleDetail>)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    cfg.validate(a.nrows())?;

    let details: Vec<SampleDetail> = (0..cfg.samples)
        .into_par_iter()
        .map(|sample| -> Result<SampleDetail> {
            let sample_seed = derive_seed(cfg.seed, sample as u64);
            let partition = build_partition(a, cfg, sample_seed)?;
            let p = build_interpolation(&partition, cfg.normalized);
            let coarse = galerkin_product(a, &p)?;
            let spectrum = sym_eigenvalues(&coarse)?;
            let shifts = select_shifts(spectrum.values(), cfg.per_sample, cfg.target);
            let refinements = shifts
                .iter()
                .enumerate()
                .map(|(j, &shift)| {
                    let shift_seed = derive_seed(sample_seed, TAG_SHIFT + j as u64);
                    eigen_near_shift(a, shift, cfg.tol, cfg.max_iters, shift_seed)
                        .map(|r| RefineRecord::from_result(&r))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SampleDetail {
                sample,
                coarse_values: spectrum.values().to_vec(),
                refinements,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let estimate = gather(&details, a.norm_one(), SpectrumKind::Eigen)?;
    Ok((estimate, details))
}

/// The eigenvalue estimate alone.
pub fn estimate_eigenvalues(a: &SparseMatrix, cfg: &SampleConfig) -> Result<SpectrumEstimate> {
    estimate_eigenvalues_detailed(a, cfg).map(|(estimate, _)| estimate)
}

/// Singular value estimation with per-sample detail. Each sample draws an
/// independent row partition (U) and column partition (V), both normalized
/// random chunkings; the k largest coarse singular values become shifts.
pub fn estimate_singular_values_detailed(
    a: &SparseMatrix,
    cfg: &SampleConfig,
) -> Result<(SpectrumEstimate, Vec<SampleDetail>)> {
    if cfg.partitioner != Partitioner::Random {
        return Err(Error::InvalidArgument(
            "singular value estimation uses random partitions (row and column graphs \
             are not available to the other partitioners)"
                .into(),
        ));
    }
    cfg.validate(a.nrows().min(a.ncols()))?;

    let details: Vec<SampleDetail> = (0..cfg.samples)
        .into_par_iter()
        .map(|sample| -> Result<SampleDetail> {
            let sample_seed = derive_seed(cfg.seed, sample as u64);
            let row_part = random_partition(
                a.nrows(),
                cfg.n_aggregates,
                derive_seed(sample_seed, TAG_ROWS),
            )?;
            let col_part = random_partition(
                a.ncols(),
                cfg.n_aggregates,
                derive_seed(sample_seed, TAG_COLS),
            )?;
            let u = build_interpolation(&row_part, true);
            let v = build_interpolation(&col_part, true);
            let b = two_sided_product(a, &u, &v)?;
            let spectrum = dense_singular_values(&b)?;
            // descending: the leading k are the largest
            let shifts: Vec<f64> =
                spectrum.values()[..cfg.per_sample.min(spectrum.len())].to_vec();
            let refinements = shifts
                .iter()
                .enumerate()
                .map(|(j, &shift)| {
                    let shift_seed = derive_seed(sample_seed, TAG_SHIFT + j as u64);
                    singular_value_near_shift(a, shift, cfg.tol, cfg.max_iters, shift_seed)
                        .map(|r| RefineRecord::from_result(&r))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SampleDetail {
                sample,
                coarse_values: spectrum.values().to_vec(),
                refinements,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let estimate = gather(&details, a.norm_one(), SpectrumKind::Singular)?;
    Ok((estimate, details))
}

pub fn estimate_singular_values(a: &SparseMatrix, cfg: &SampleConfig) -> Result<SpectrumEstimate> {
    estimate_singular_values_detailed(a, cfg).map(|(estimate, _)| estimate)
}

/// Union, sort, and deduplicate converged refinements across samples.
///
/// Two values collapse when they differ by at most
/// max(DEDUP_RELATIVE * |value|, DEDUP_FLOOR * ||A||_1); the record with
/// the smallest residual represents the group, and every contributor stays
/// in the provenance list. Redundant convergence across samples is
/// expected, never an error.
fn gather(details: &[SampleDetail], norm1: f64, kind: SpectrumKind) -> Result<SpectrumEstimate> {
    let mut records: Vec<(f64, Provenance)> = Vec::new();
    let mut rejected = 0usize;
    for detail in details {
        for r in &detail.refinements {
            if r.converged {
                records.push((
                    r.value,
                    Provenance {
                        sample: detail.sample,
                        shift: r.shift,
                        residual: r.residual,
                        iterations: r.iterations,
                    },
                ));
            } else {
                rejected += 1;
            }
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyEstimate);
    }
    records.sort_by(|(va, pa), (vb, pb)| {
        va.total_cmp(vb)
            .then(pa.sample.cmp(&pb.sample))
            .then(pa.shift.total_cmp(&pb.shift))
    });

    let floor = DEDUP_FLOOR * norm1;
    let same =
        |a: f64, b: f64| (a - b).abs() <= (DEDUP_RELATIVE * a.abs().max(b.abs())).max(floor);

    let flush = |cluster: &[(f64, Provenance)],
                 values: &mut Vec<f64>,
                 provenance: &mut Vec<Vec<Provenance>>| {
        let best = cluster
            .iter()
            .min_by(|(_, a), (_, b)| {
                a.residual
                    .total_cmp(&b.residual)
                    .then(a.sample.cmp(&b.sample))
                    .then(a.shift.total_cmp(&b.shift))
            })
            .expect("cluster is nonempty");
        values.push(best.0);
        provenance.push(cluster.iter().map(|&(_, p)| p).collect());
    };
    let mut values = Vec::new();
    let mut provenance: Vec<Vec<Provenance>> = Vec::new();
    let mut cluster: Vec<(f64, Provenance)> = vec![records[0]];
    for &record in &records[1..] {
        let last = cluster.last().expect("cluster is nonempty").0;
        if same(last, record.0) {
            cluster.push(record);
        } else {
            flush(&cluster, &mut values, &mut provenance);
            cluster = vec![record];
        }
    }
    flush(&cluster, &mut values, &mut provenance);

    if kind == SpectrumKind::Singular {
        values.reverse();
        provenance.reverse();
    }
    Ok(SpectrumEstimate {
        values,
        provenance,
        rejected,
        kind,
    })
}

/// Extreme eigenvalues from J coarse samples: min of the coarse minima and
/// max of the coarse maxima. With normalized interpolation these are inner
/// bounds of the true extremes. `refine` additionally polishes both ends
/// on the fine grid.
pub fn extreme_eigenvalues(
    a: &SparseMatrix,
    samples: usize,
    n_aggregates: usize,
    partitioner: Partitioner,
    seed: u64,
    refine: bool,
) -> Result<(f64, f64)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let cfg = SampleConfig {
        partitioner,
        ..SampleConfig::new(samples, 1, n_aggregates, seed)
    };
    cfg.validate(a.nrows())?;

    let extremes: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|sample| -> Result<(f64, f64)> {
            let sample_seed = derive_seed(seed, sample as u64);
            let partition = build_partition(a, &cfg, sample_seed)?;
            let p = build_interpolation(&partition, true);
            let coarse = galerkin_product(a, &p)?;
            eig_extremes(&coarse)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (mn, mx) in extremes {
        lo = lo.min(mn);
        hi = hi.max(mx);
    }
    if refine {
        let r_lo = eigen_near_shift(a, lo, 1e-10, 200, derive_seed(seed, TAG_SHIFT))?;
        let r_hi = eigen_near_shift(a, hi, 1e-10, 200, derive_seed(seed, TAG_SHIFT + 1))?;
        if r_lo.converged {
            lo = r_lo.value;
        }
        if r_hi.converged {
            hi = r_hi.value;
        }
    }
    Ok((lo, hi))
}

/// Extreme singular values from J two-sided coarse samples; inner bounds
/// of the true extremes by the singular value separation theorem.
pub fn extreme_singular_values(
    a: &SparseMatrix,
    samples: usize,
    n_aggregates: usize,
    seed: u64,
    refine: bool,
) -> Result<(f64, f64)> {
    let cfg = SampleConfig::new(samples, 1, n_aggregates, seed);
    cfg.validate(a.nrows().min(a.ncols()))?;

    let extremes: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|sample| -> Result<(f64, f64)> {
            let sample_seed = derive_seed(seed, sample as u64);
            let row_part =
                random_partition(a.nrows(), n_aggregates, derive_seed(sample_seed, TAG_ROWS))?;
            let col_part =
                random_partition(a.ncols(), n_aggregates, derive_seed(sample_seed, TAG_COLS))?;
            let u = build_interpolation(&row_part, true);
            let v = build_interpolation(&col_part, true);
            let b = two_sided_product(a, &u, &v)?;
            let s = dense_singular_values(&b)?;
            match (s.min(), s.max()) {
                (Some(mn), Some(mx)) => Ok((mn, mx)),
                _ => Err(Error::InvalidArgument("empty coarse spectrum".into())),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (mn, mx) in extremes {
        lo = lo.min(mn);
        hi = hi.max(mx);
    }
    if refine {
        let r_lo =
            singular_value_near_shift(a, lo.max(0.0), 1e-10, 200, derive_seed(seed, TAG_SHIFT))?;
        let r_hi = singular_value_near_shift(
            a,
            hi.max(0.0),
            1e-10,
            200,
            derive_seed(seed, TAG_SHIFT + 1),
        )?;
        if r_lo.converged {
            lo = r_lo.value;
        }
        if r_hi.converged {
            hi = r_hi.value;
        }
    }
    Ok((lo, hi))
}

/// Per-index interlacing slack report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlaceEntry {
    pub index: usize,
    pub coarse_value: f64,
    /// mu_i - lambda_i (eigen) or sigma_i(B) - sigma_{i+r}(A) (singular);
    /// None when the bound is vacuous at this index.
    pub lower_slack: Option<f64>,
    /// lambda_{n-k+i} - mu_i (eigen) or sigma_i(A) - sigma_i(B) (singular).
    pub upper_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlaceReport {
    pub entries: Vec<InterlaceEntry>,
    /// Slack below -tolerance counts as a violation.
    pub tolerance: f64,
    pub fine_values: Vec<f64>,
    pub coarse_values: Vec<f64>,
    pub max_violation: f64,
    pub ok: bool,
}

impl InterlaceReport {
    fn from_entries(
        entries: Vec<InterlaceEntry>,
        tolerance: f64,
        fine_values: Vec<f64>,
        coarse_values: Vec<f64>,
    ) -> Self {
        let max_violation = entries
            .iter()
            .flat_map(|e| {
                e.lower_slack
                    .into_iter()
                    .chain(std::iter::once(e.upper_slack))
            })
            .map(|slack| (-slack).max(0.0))
            .fold(0.0, f64::max);
        let ok = max_violation <= tolerance;
        InterlaceReport {
            entries,
            tolerance,
            fine_values,
            coarse_values,
            max_violation,
            ok,
        }
    }
}

/// Check lambda_i <= mu_i <= lambda_{n-k+i} for every coarse index against
/// dense-oracle spectra of both grids. Requires a normalized operator.
pub fn verify_interlacing(
    a: &SparseMatrix,
    p: &crate::coarsen::InterpolationOperator,
) -> Result<InterlaceReport> {
    if !p.is_normalized() {
        return Err(Error::RequiresNormalized);
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let fine = sym_eigenvalues(&a.to_dense())?;
    let coarse = sym_eigenvalues(&galerkin_product(a, p)?)?;
    let lambda = fine.values();
    let mu = coarse.values();
    let (n, k) = (lambda.len(), mu.len());
    let norm2 = lambda.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let tolerance = 1e-9 * norm2;
    let entries = (0..k)
        .map(|i| InterlaceEntry {
            index: i,
            coarse_value: mu[i],
            lower_slack: Some(mu[i] - lambda[i]),
            upper_slack: lambda[n - k + i] - mu[i],
        })
        .collect();
    Ok(InterlaceReport::from_entries(
        entries,
        tolerance,
        lambda.to_vec(),
        mu.to_vec(),
    ))
}

/// Check sigma_i(A) >= sigma_i(B) >= sigma_{i+r}(A), r = (m-p) + (n-q),
/// against dense oracles. Lower bounds with i+r beyond min(m, n) are
/// vacuous and reported as such.
pub fn verify_interlacing_svd(
    a: &SparseMatrix,
    u: &crate::coarsen::InterpolationOperator,
    v: &crate::coarsen::InterpolationOperator,
) -> Result<InterlaceReport> {
    if !u.is_normalized() || !v.is_normalized() {
        return Err(Error::RequiresNormalized);
    }
    let fine = dense_singular_values(&a.to_dense())?;
    let coarse = dense_singular_values(&two_sided_product(a, u, v)?)?;
    let sigma_a = fine.values();
    let sigma_b = coarse.values();
    let r = (a.nrows() - u.ncols()) + (a.ncols() - v.ncols());
    let tolerance = 1e-9 * sigma_a.first().copied().unwrap_or(0.0);
    let entries = (0..sigma_b.len())
        .map(|i| InterlaceEntry {
            index: i,
            coarse_value: sigma_b[i],
            lower_slack: (i + r < sigma_a.len()).then(|| sigma_b[i] - sigma_a[i + r]),
            upper_slack: sigma_a[i] - sigma_b[i],
        })
        .collect();
    Ok(InterlaceReport::from_entries(
        entries,
        tolerance,
        sigma_a.to_vec(),
        sigma_b.to_vec(),
    ))
}
