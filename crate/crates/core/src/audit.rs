//! Empirical admissibility audits and mean-embedding diagnostics for
//! identity-grouped embedding datasets.

use std::collections::BTreeMap;
use std::io::BufRead;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{CenteredParams, OperatingPoint};
use crate::centered::IdentitySampleSet;
use crate::error::{Error, Result};
use crate::graph::{conflict_masks, greedy_removal_lists, max_independent_set, EXACT_LIMIT};
use crate::packing::SelectionMode;
use crate::rng::Seed;
use crate::sphere::{check_dims, check_threshold, dot, norm, UnitVector};

/// Views grouped by identity label (labels kept in sorted order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDataset {
    pub dimension: usize,
    pub identities: BTreeMap<String, Vec<UnitVector>>,
}

#[derive(Deserialize)]
struct ViewRecord {
    identity: String,
    embedding: Vec<f64>,
}

#[derive(Serialize)]
struct ViewRecordOut<'a> {
    identity: &'a str,
    embedding: &'a [f64],
}

impl EmbeddingDataset {
    pub fn new(identities: BTreeMap<String, Vec<UnitVector>>) -> Result<Self> {
        let dimension = identities
            .values()
            .flat_map(|v| v.first())
            .map(UnitVector::dim)
            .next()
            .ok_or(Error::Empty("dataset"))?;
        for (label, views) in &identities {
            if views.is_empty() {
                return Err(Error::param(
                    "identities",
                    format!("identity `{label}` has no views"),
                ));
            }
            for v in views {
                check_dims(dimension, v.dim())?;
            }
        }
        Ok(EmbeddingDataset {
            dimension,
            identities,
        })
    }

    /// Reads JSON lines `{"identity": "...", "embedding": [...]}`. Blank
    /// lines are skipped; embeddings are renormalized when within 1e-6 of
    /// unit norm and rejected otherwise.
    pub fn from_jsonl<R: BufRead>(reader: R) -> Result<Self> {
        let mut identities: BTreeMap<String, Vec<UnitVector>> = BTreeMap::new();
        let mut dim: Option<usize> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ViewRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
            let v = UnitVector::new(rec.embedding).map_err(|e| Error::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
            match dim {
                None => dim = Some(v.dim()),
                Some(d) if d != v.dim() => {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("dimension {} differs from {d}", v.dim()),
                    })
                }
                _ => {}
            }
            identities.entry(rec.identity).or_default().push(v);
        }
        EmbeddingDataset::new(identities)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (label, views) in &self.identities {
            for v in views {
                let rec = ViewRecordOut {
                    identity: label,
                    embedding: v.as_slice(),
                };
                out.push_str(&serde_json::to_string(&rec).expect("serializable record"));
                out.push('\n');
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.identities.keys().map(String::as_str).collect()
    }

    /// Restriction to the given labels.
    pub fn subset(&self, labels: &[&str]) -> Result<Self> {
        let ids = labels
            .iter()
            .map(|l| {
                self.identities
                    .get(*l)
                    .map(|v| (l.to_string(), v.clone()))
                    .ok_or_else(|| Error::param("labels", format!("unknown identity `{l}`")))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        EmbeddingDataset::new(ids)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenuineRate {
    pub identity: String,
    pub views: usize,
    /// Pairs evaluated (0 for single-view identities).
    pub pairs: u64,
    pub accepted: u64,
    pub rate: Option<f64>,
    pub std_err: Option<f64>,
    pub subsampled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpostorRate {
    pub a: String,
    pub b: String,
    pub pairs: u64,
    pub rejected: u64,
    pub rate: f64,
    pub std_err: f64,
    pub subsampled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    /// Identity label, or `a|b` for an impostor pair.
    pub subject: String,
    pub kind: String,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub tau: f64,
    pub pair_budget: u64,
    pub seed: Seed,
    pub genuine: Vec<GenuineRate>,
    pub impostor: Vec<ImpostorRate>,
    /// `max_i (1 - p_i)` over identities with genuine pairs.
    pub eps_in_hat: Option<f64>,
    /// `max_{i != j} (1 - p_ij)`; `None` with a single identity.
    pub eps_out_hat: Option<f64>,
    pub genuine_violations: u64,
    pub impostor_violations: u64,
    pub worst_offenders: Vec<Offender>,
    pub warnings: Vec<String>,
}

impl AdmissibilityReport {
    /// Raw-rate check of the two tolerances. Without any genuine pairs the
    /// genuine side is unestablished and the check fails.
    pub fn admissible_at(&self, eps_in: f64, eps_out: f64) -> bool {
        let inside = self.eps_in_hat.is_some_and(|e| e <= eps_in);
        let outside = self.eps_out_hat.is_none_or(|e| e <= eps_out);
        inside && outside
    }
}

fn rate_and_se(hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

fn genuine_rate(
    label: &str,
    views: &[UnitVector],
    tau: f64,
    budget: u64,
    seed: Seed,
    index: u64,
) -> GenuineRate {
    let n = views.len();
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut accepted = 0u64;
    let (pairs, subsampled) = if total == 0 {
        (0, false)
    } else if total <= budget {
        for i in 0..n {
            for j in (i + 1)..n {
                accepted += u64::from(dot(views[i].as_slice(), views[j].as_slice()) >= tau);
            }
        }
        (total, false)
    } else {
        let mut rng = seed.stream("audit/genuine", index);
        for _ in 0..budget {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            accepted += u64::from(dot(views[i].as_slice(), views[j].as_slice()) >= tau);
        }
        (budget, true)
    };
    let (rate, std_err) = if pairs == 0 {
        (None, None)
    } else {
        let (r, s) = rate_and_se(accepted, pairs);
        (Some(r), Some(s))
    };
    GenuineRate {
        identity: label.to_string(),
        views: n,
        pairs,
        accepted,
        rate,
        std_err,
        subsampled,
    }
}

#[allow(clippy::too_many_arguments)]
fn impostor_rate(
    a: &str,
    va: &[UnitVector],
    b: &str,
    vb: &[UnitVector],
    tau: f64,
    budget: u64,
    seed: Seed,
    index: u64,
) -> ImpostorRate {
    let total = va.len() as u64 * vb.len() as u64;
    let mut rejected = 0u64;
    let (pairs, subsampled) = if total <= budget {
        for x in va {
            for y in vb {
                rejected += u64::from(dot(x.as_slice(), y.as_slice()) <= tau);
            }
        }
        (total, false)
    } else {
        let mut rng = seed.stream("audit/impostor", index);
        for _ in 0..budget {
            let x = &va[rng.random_range(0..va.len())];
            let y = &vb[rng.random_range(0..vb.len())];
            rejected += u64::from(dot(x.as_slice(), y.as_slice()) <= tau);
        }
        (budget, true)
    };
    let (rate, std_err) = rate_and_se(rejected, pairs);
    ImpostorRate {
        a: a.to_string(),
        b: b.to_string(),
        pairs,
        rejected,
        rate,
        std_err,
        subsampled,
    }
}

const MAX_OFFENDERS: usize = 10;

/// Genuine acceptance (`<x, y> >= tau`) per identity and impostor rejection
/// (`<x, y> <= tau`) per identity pair. All pairs are enumerated when they
/// fit in `pair_budget`; otherwise `pair_budget` pairs are drawn uniformly
/// with replacement from a seeded stream.
pub fn estimate_admissibility(
    ds: &EmbeddingDataset,
    tau: f64,
    pair_budget: u64,
    seed: Seed,
) -> Result<AdmissibilityReport> {
    check_threshold(tau)?;
    if pair_budget == 0 {
        return Err(Error::param("pair_budget", "must be at least 1"));
    }
    let entries: Vec<(&String, &Vec<UnitVector>)> = ds.identities.iter().collect();
    let genuine: Vec<GenuineRate> = entries
        .par_iter()
        .enumerate()
        .map(|(i, (label, views))| genuine_rate(label, views, tau, pair_budget, seed, i as u64))
        .collect();
    let m = entries.len();
    let index_pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let impostor: Vec<ImpostorRate> = index_pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            impostor_rate(
                entries[i].0,
                entries[i].1,
                entries[j].0,
                entries[j].1,
                tau,
                pair_budget,
                seed,
                k as u64,
            )
        })
        .collect();

    let mut warnings = Vec::new();
    for g in genuine.iter().filter(|g| g.pairs == 0) {
        warnings.push(format!(
            "identity `{}` has a single view; excluded from genuine statistics",
            g.identity
        ));
    }
    let eps_in_hat = genuine
        .iter()
        .filter_map(|g| g.rate)
        .map(|r| 1.0 - r)
        .fold(None, |acc: Option<f64>, e| {
            Some(acc.map_or(e, |a| a.max(e)))
        });
    let eps_out_hat = impostor
        .iter()
        .map(|p| 1.0 - p.rate)
        .fold(None, |acc: Option<f64>, e| {
            Some(acc.map_or(e, |a| a.max(e)))
        });

    let mut worst: Vec<Offender> = genuine
        .iter()
        .filter_map(|g| {
            g.rate.filter(|&r| r < 1.0).map(|r| Offender {
                subject: g.identity.clone(),
                kind: "genuine".into(),
                error_rate: 1.0 - r,
            })
        })
        .chain(impostor.iter().filter(|p| p.rate < 1.0).map(|p| Offender {
            subject: format!("{}|{}", p.a, p.b),
            kind: "impostor".into(),
            error_rate: 1.0 - p.rate,
        }))
        .collect();
    worst.sort_by(|x, y| {
        y.error_rate
            .total_cmp(&x.error_rate)
            .then_with(|| x.subject.cmp(&y.subject))
    });
    worst.truncate(MAX_OFFENDERS);

    Ok(AdmissibilityReport {
        tau,
        pair_budget,
        seed,
        genuine_violations: genuine.iter().map(|g| g.pairs - g.accepted).sum(),
        impostor_violations: impostor.iter().map(|p| p.pairs - p.rejected).sum(),
        genuine,
        impostor,
        eps_in_hat,
        eps_out_hat,
        worst_offenders: worst,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacitySelection {
    pub labels: Vec<String>,
    pub size: usize,
    /// Identities dropped before selection: genuine error above tolerance,
    /// or no genuine pairs to judge.
    pub excluded: Vec<String>,
}

/// Largest (exact) or maximal (greedy) set of identities whose restricted
/// report meets the operating point.
///
/// Identities failing the genuine tolerance on their own, or lacking genuine
/// pairs, are dropped first. The rest form a violation graph with an edge
/// for every pair whose impostor error exceeds `eps_out`; the selection is an
/// independent set of that graph. Greedy mode removes the identity with the
/// most violating pairs (earliest label on ties) until none remain.
pub fn empirical_capacity_from_report(
    report: &AdmissibilityReport,
    op: OperatingPoint,
    mode: SelectionMode,
) -> Result<CapacitySelection> {
    let mut excluded = Vec::new();
    let mut kept: Vec<&str> = Vec::new();
    for g in &report.genuine {
        match g.rate {
            Some(r) if 1.0 - r <= op.eps_in => kept.push(&g.identity),
            _ => excluded.push(g.identity.clone()),
        }
    }
    if mode == SelectionMode::Exact && report.genuine.len() > EXACT_LIMIT {
        return Err(Error::TooManyCandidates {
            count: report.genuine.len(),
            limit: EXACT_LIMIT,
        });
    }
    let index: BTreeMap<&str, usize> = kept.iter().enumerate().map(|(k, l)| (*l, k)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for p in &report.impostor {
        if 1.0 - p.rate > op.eps_out {
            if let (Some(&i), Some(&j)) = (index.get(p.a.as_str()), index.get(p.b.as_str())) {
                edges.push((i.min(j), i.max(j)));
            }
        }
    }
    let alive: Vec<bool> = match mode {
        SelectionMode::Exact => {
            let adj = conflict_masks(kept.len(), |i, j| edges.contains(&(i, j)));
            let mask = max_independent_set(&adj);
            (0..kept.len()).map(|i| mask & (1 << i) != 0).collect()
        }
        SelectionMode::Greedy => {
            let mut lists = vec![Vec::new(); kept.len()];
            for &(i, j) in &edges {
                lists[i].push(j);
                lists[j].push(i);
            }
            greedy_removal_lists(&lists)
        }
    };
    let labels: Vec<String> = kept
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(l, _)| l.to_string())
        .collect();
    Ok(CapacitySelection {
        size: labels.len(),
        labels,
        excluded,
    })
}

/// [`estimate_admissibility`] followed by [`empirical_capacity_from_report`].
pub fn empirical_capacity_at(
    ds: &EmbeddingDataset,
    op: OperatingPoint,
    mode: SelectionMode,
    pair_budget: u64,
    seed: Seed,
) -> Result<CapacitySelection> {
    if mode == SelectionMode::Exact && ds.len() > EXACT_LIMIT {
        return Err(Error::TooManyCandidates {
            count: ds.len(),
            limit: EXACT_LIMIT,
        });
    }
    let report = estimate_admissibility(ds, op.tau, pair_budget, seed)?;
    empirical_capacity_from_report(&report, op, mode)
}

/// Spectral diagnostics of the identity-mean matrix `B` (one row per
/// identity mean).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmcrReport {
    pub identities: usize,
    pub dimension: usize,
    pub labels: Vec<String>,
    pub means: Vec<Vec<f64>>,
    pub mean_norms: Vec<f64>,
    pub singular_values: Vec<f64>,
    pub nuclear_norm: f64,
    pub frobenius_norm: f64,
    pub rank: usize,
    /// `sqrt(r) ||B||_F`
    pub bound_rank_frobenius: f64,
    /// `sqrt(r M)`
    pub bound_rank_count: f64,
    /// `M` when `M <= D`, else `sqrt(M D)`.
    pub bound_shape: f64,
    pub bound_satisfied: bool,
}

/// Relative cutoff for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-10;

fn leq(a: f64, b: f64) -> bool {
    a <= b * (1.0 + 1e-10) + 1e-12
}

pub fn mmcr_report(ds: &EmbeddingDataset) -> Result<MmcrReport> {
    if ds.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let m = ds.len();
    let d = ds.dimension;
    let mut labels = Vec::with_capacity(m);
    let mut means = Vec::with_capacity(m);
    for (k, (label, views)) in ds.identities.iter().enumerate() {
        labels.push(label.clone());
        means.push(IdentitySampleSet::new(k, views.clone())?.mean());
    }
    let mean_norms: Vec<f64> = means.iter().map(|mu| norm(mu)).collect();
    let b = DMatrix::from_fn(m, d, |i, j| means[i][j]);
    let mut sv: Vec<f64> = b.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > RANK_CUTOFF * sigma_max).count();
    let nuclear: f64 = sv.iter().sum();
    let frob = b.norm();
    let r = rank as f64;
    let bound_rank_frobenius = r.sqrt() * frob;
    let bound_rank_count = (r * m as f64).sqrt();
    let bound_shape = if m <= d {
        m as f64
    } else {
        (m as f64 * d as f64).sqrt()
    };
    let bound_satisfied = leq(nuclear, bound_rank_frobenius)
        && leq(bound_rank_frobenius, bound_rank_count)
        && leq(bound_rank_count, bound_shape);
    Ok(MmcrReport {
        identities: m,
        dimension: d,
        labels,
        means,
        mean_norms,
        singular_values: sv,
        nuclear_norm: nuclear,
        frobenius_norm: frob,
        rank,
        bound_rank_frobenius,
        bound_rank_count,
        bound_shape,
        bound_satisfied,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanAlignment {
    /// `<mean of views, u>`, mean not normalized.
    pub alignment: f64,
    /// `(1 - eta) cos(rho) - eta`
    pub bound: f64,
    pub mean_norm: f64,
    pub std_err: f64,
    /// `(alignment - bound) / std_err`
    pub slack_std_errs: f64,
    pub satisfied: bool,
}

/// Statistical check of `<mu, u> >= (1 - eta) cos(rho) - eta`, allowing 4
/// standard errors of the empirical mean.
pub fn mean_alignment_check(
    samples: &IdentitySampleSet,
    u: &UnitVector,
    params: CenteredParams,
) -> Result<MeanAlignment> {
    if samples.views.is_empty() {
        return Err(Error::Empty("sample set"));
    }
    check_dims(u.dim(), samples.dim())?;
    let proj: Vec<f64> = samples
        .views
        .iter()
        .map(|v| dot(v.as_slice(), u.as_slice()))
        .collect();
    let n = proj.len() as f64;
    let alignment = proj.iter().sum::<f64>() / n;
    let std_err = if proj.len() > 1 {
        (proj.iter().map(|x| (x - alignment).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    let bound = (1.0 - params.eta) * params.rho.cos() - params.eta;
    let gap = alignment - bound;
    let slack_std_errs = if std_err > 0.0 {
        gap / std_err
    } else if gap >= -1e-12 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    Ok(MeanAlignment {
        alignment,
        bound,
        mean_norm: norm(&samples.mean()),
        std_err,
        slack_std_errs,
        satisfied: gap >= -4.0 * std_err - 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(items: Vec<(&str, Vec<UnitVector>)>) -> EmbeddingDataset {
        EmbeddingDataset::new(items.into_iter().map(|(l, v)| (l.to_string(), v)).collect()).unwrap()
    }

    #[test]
    fn point_masses_on_basis() {
        let d = ds((0..4)
            .map(|k| (["a", "b", "c", "d"][k], vec![UnitVector::basis(4, k); 3]))
            .collect());
        let r = estimate_admissibility(&d, 0.5, 1000, Seed::new(0)).unwrap();
        assert_eq!(r.eps_in_hat, Some(0.0));
        assert_eq!(r.eps_out_hat, Some(0.0));
        assert!(r.admissible_at(0.0, 0.0));
        assert!(r.worst_offenders.is_empty());
        let op = OperatingPoint::new(0.5, 0.0, 0.0).unwrap();
        for mode in [SelectionMode::Exact, SelectionMode::Greedy] {
            assert_eq!(
                empirical_capacity_at(&d, op, mode, 1000, Seed::new(0))
                    .unwrap()
                    .size,
                4
            );
        }
    }

    #[test]
    fn identical_single_views() {
        let v = UnitVector::basis(3, 0);
        let d = ds(vec![("x", vec![v.clone()]), ("y", vec![v])]);
        let r = estimate_admissibility(&d, 0.5, 10, Seed::new(0)).unwrap();
        assert_eq!(r.impostor[0].rate, 0.0);
        assert_eq!(r.eps_out_hat, Some(1.0));
        assert_eq!(r.eps_in_hat, None);
        assert_eq!(r.warnings.len(), 2);
        assert!(!r.admissible_at(0.5, 1.0));
    }

    #[test]
    fn rogue_duplicate_removed() {
        let mut items: Vec<(String, Vec<UnitVector>)> = (0..5)
            .map(|k| (format!("id{k}"), vec![UnitVector::basis(6, k); 2]))
            .collect();
        items.push(("rogue".into(), vec![UnitVector::basis(6, 2); 2]));
        let d = EmbeddingDataset::new(items.into_iter().collect()).unwrap();
        let op = OperatingPoint::new(0.5, 0.0, 0.0).unwrap();
        for mode in [SelectionMode::Exact, SelectionMode::Greedy] {
            let c = empirical_capacity_at(&d, op, mode, 100, Seed::new(0)).unwrap();
            assert_eq!(c.size, 5);
            let has_id2 = c.labels.iter().any(|l| l == "id2");
            let has_rogue = c.labels.iter().any(|l| l == "rogue");
            assert!(has_id2 ^ has_rogue);
        }
    }

    #[test]
    fn subsampling_is_seeded() {
        let views: Vec<UnitVector> =
            crate::sampling::sample_uniform_sphere(4, 40, Seed::new(1)).unwrap();
        let d = ds(vec![
            ("a", views[..20].to_vec()),
            ("b", views[20..].to_vec()),
        ]);
        let r1 = estimate_admissibility(&d, 0.2, 50, Seed::new(5)).unwrap();
        let r2 = estimate_admissibility(&d, 0.2, 50, Seed::new(5)).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        assert!(r1.genuine[0].subsampled && r1.impostor[0].subsampled);
        assert_eq!(r1.genuine[0].pairs, 50);
        let full = estimate_admissibility(&d, 0.2, 1000, Seed::new(5)).unwrap();
        assert!(!full.genuine[0].subsampled);
        assert_eq!(full.genuine[0].pairs, 190);
        assert_eq!(full.impostor[0].pairs, 400);
    }

    #[test]
    fn jsonl_parsing() {
        let text = "{\"identity\":\"a\",\"embedding\":[1.0,0.0]}\n\n{\"identity\":\"b\",\"embedding\":[0.0,1.0000001]}\n";
        let d = EmbeddingDataset::from_jsonl(text.as_bytes()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.dimension, 2);
        let back = EmbeddingDataset::from_jsonl(d.to_jsonl().as_bytes()).unwrap();
        assert_eq!(back, d);

        let bad = "{\"identity\":\"a\",\"embedding\":[1.0,0.0]}\n{\"identity\":\"b\",\"embedding\":[2.0,0.0]}\n";
        match EmbeddingDataset::from_jsonl(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let mixed = "{\"identity\":\"a\",\"embedding\":[1.0,0.0]}\n{\"identity\":\"b\",\"embedding\":[1.0,0.0,0.0]}\n";
        assert!(matches!(
            EmbeddingDataset::from_jsonl(mixed.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            EmbeddingDataset::from_jsonl("x\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(EmbeddingDataset::from_jsonl("".as_bytes()).is_err());
    }

    #[test]
    fn mmcr_identity_matrix() {
        let d = ds((0..5)
            .map(|k| (["a", "b", "c", "d", "e"][k], vec![UnitVector::basis(5, k)]))
            .collect());
        let r = mmcr_report(&d).unwrap();
        assert!((r.nuclear_norm - 5.0).abs() < 1e-10);
        assert!((r.bound_rank_frobenius - 5.0).abs() < 1e-10);
        assert!((r.bound_rank_count - 5.0).abs() < 1e-10);
        assert_eq!(r.bound_shape, 5.0);
        assert_eq!(r.rank, 5);
        assert!(r.bound_satisfied);
    }

    #[test]
    fn mmcr_rank_one() {
        let v = UnitVector::normalize(vec![0.3, 0.4, 0.5, 0.1]).unwrap();
        let d = ds(vec![
            ("a", vec![v.clone(); 3]),
            ("b", vec![v.clone(); 2]),
            ("c", vec![v]),
        ]);
        let r = mmcr_report(&d).unwrap();
        assert_eq!(r.rank, 1);
        assert!((r.nuclear_norm - 3f64.sqrt()).abs() < 1e-12);
        assert!((r.frobenius_norm - 3f64.sqrt()).abs() < 1e-12);
        assert!(r.bound_satisfied);
    }

    #[test]
    fn alignment_trivial_cases() {
        let u = UnitVector::basis(3, 0);
        let s = IdentitySampleSet::new(0, vec![u.clone(); 4]).unwrap();
        let a = mean_alignment_check(&s, &u, CenteredParams::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!(a.alignment, 1.0);
        assert_eq!(a.bound, 1.0);
        assert!(a.satisfied);
        let far = IdentitySampleSet::new(0, vec![u.negated(); 4]).unwrap();
        let a = mean_alignment_check(&far, &u, CenteredParams::new(0.1, 0.6).unwrap()).unwrap();
        assert!(a.bound <= 0.0);
        assert!(!a.satisfied || a.alignment >= a.bound);
        let a = mean_alignment_check(&s, &u, CenteredParams::new(0.1, 0.99).unwrap()).unwrap();
        assert!(a.bound <= 0.0 && a.satisfied);
    }
}
