use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use idcap_core::audit::{
    empirical_capacity_from_report, estimate_admissibility, mmcr_report, EmbeddingDataset,
};
use idcap_core::capacity::{
    boundary_curves, calibrate_threshold, effective_separation, rate_curves, OperatingPoint,
};
use idcap_core::figures::{self, linspace, Fig2Settings, Fig3Settings, Fig4Settings, Fig5Settings};
use idcap_core::graph::EXACT_LIMIT;
use idcap_core::io::{
    code_to_csv, read_points, sidecar_path, AngleValue, CodeSidecar, PipelineFile,
};
use idcap_core::packing::{
    greedy_packing_capped, packing_bounds, restricted_packing, SelectionMode, SphericalCode,
};
use idcap_core::table::{Cell, Table};
use idcap_core::{log_cap_measure, log_cap_measure_quadrature, Angle, Error, Result, Seed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use crate::settings::Ctx;

fn angles(values: &[AngleValue]) -> Result<Vec<Angle>> {
    values.iter().map(AngleValue::angle).collect()
}

fn required<T>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or_else(|| Error::param(name, "is required"))
}

// capmeasure

#[derive(Debug, Args, Serialize)]
pub struct CapmeasureArgs {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Cap radii with unit suffix, e.g. `8deg,0.5rad`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<String>>,
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Beta,
    Quadrature,
    Both,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CapmeasureSettings {
    dims: Vec<usize>,
    angles: Vec<AngleValue>,
    method: Method,
}

impl Default for CapmeasureSettings {
    fn default() -> Self {
        CapmeasureSettings {
            dims: vec![2, 3, 4, 8, 16, 32, 64, 128, 256, 512],
            angles: [
                "1deg", "8deg", "30deg", "60deg", "90deg", "120deg", "179deg",
            ]
            .iter()
            .map(|s| AngleValue::Text(s.to_string()))
            .collect(),
            method: Method::Beta,
        }
    }
}

pub fn capmeasure(ctx: &Ctx, a: &CapmeasureArgs) -> Result<()> {
    let s: CapmeasureSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("capmeasure", &s)?;
    let alphas = angles(&s.angles)?;
    let mut cols = vec!["D", "alpha", "log_v", "log10_v", "v"];
    if s.method == Method::Both {
        cols.push("log_v_quadrature");
    }
    let mut t = Table::new(&cols);
    for &d in &s.dims {
        for &alpha in &alphas {
            let m = match s.method {
                Method::Quadrature => log_cap_measure_quadrature(d, alpha)?,
                _ => log_cap_measure(d, alpha)?,
            };
            let mut row: Vec<Cell> = vec![
                d.into(),
                alpha.radians().into(),
                m.log_value.into(),
                m.log10().into(),
                m.linear.into(),
            ];
            if s.method == Method::Both {
                row.push(log_cap_measure_quadrature(d, alpha)?.log_value.into());
            }
            t.push(row);
        }
    }
    ctx.emit_table(&t, &cfg)
}

// bounds

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    taus: Option<Vec<f64>>,
    /// Concentration radii with unit suffix.
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BoundsSettings {
    dims: Vec<usize>,
    taus: Vec<f64>,
    rhos: Vec<AngleValue>,
}

impl Default for BoundsSettings {
    fn default() -> Self {
        BoundsSettings {
            dims: vec![8, 16, 32, 64, 128, 256, 512],
            taus: vec![0.8],
            rhos: vec![AngleValue::Text("8deg".into())],
        }
    }
}

pub fn bounds(ctx: &Ctx, a: &BoundsArgs) -> Result<()> {
    let s: BoundsSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("bounds", &s)?;
    let rhos = angles(&s.rhos)?;
    let mut t = Table::new(&[
        "D",
        "tau",
        "rho",
        "psi",
        "degenerate",
        "log_lower",
        "log_upper",
        "log10_lower",
        "log10_upper",
    ]);
    for &d in &s.dims {
        for &tau in &s.taus {
            for &rho in &rhos {
                let sep = effective_separation(tau, rho)?;
                let b = packing_bounds(d, sep.psi)?;
                t.push(vec![
                    d.into(),
                    tau.into(),
                    rho.radians().into(),
                    sep.psi.radians().into(),
                    sep.degenerate.into(),
                    b.log_lower.into(),
                    b.log_upper.into(),
                    (b.log_lower / std::f64::consts::LN_10).into(),
                    (b.log_upper / std::f64::consts::LN_10).into(),
                ]);
            }
        }
    }
    ctx.emit_table(&t, &cfg)
}

// rates

#[derive(Debug, Args, Serialize)]
pub struct RatesArgs {
    #[arg(long, value_delimiter = ',')]
    taus: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<String>>,
    /// `rates` (default) or `boundary`.
    #[arg(long, value_enum)]
    table: Option<RatesTable>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatesTable {
    Rates,
    Boundary,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RatesSettings {
    taus: Vec<f64>,
    rhos: Vec<AngleValue>,
    table: RatesTable,
}

impl Default for RatesSettings {
    fn default() -> Self {
        RatesSettings {
            taus: vec![0.55, 0.7, 0.85],
            rhos: linspace(0.0, FRAC_PI_4, 46)
                .into_iter()
                .map(AngleValue::from)
                .collect(),
            table: RatesTable::Rates,
        }
    }
}

pub fn rates(ctx: &Ctx, a: &RatesArgs) -> Result<()> {
    let s: RatesSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("rates", &s)?;
    let t = match s.table {
        RatesTable::Rates => {
            let mut t = Table::new(&["tau", "rho", "psi", "r_fixed", "r_random", "region"]);
            for &tau in &s.taus {
                for rho in angles(&s.rhos)? {
                    let p = rate_curves(tau, rho)?;
                    t.push(vec![
                        tau.into(),
                        rho.radians().into(),
                        p.psi.into(),
                        p.r_fixed.into(),
                        p.r_random.into(),
                        p.region.label().into(),
                    ]);
                }
            }
            t
        }
        RatesTable::Boundary => {
            let mut t = Table::new(&[
                "tau",
                "rho_admissibility_boundary",
                "rho_positive_rate_boundary",
            ]);
            for b in boundary_curves(&s.taus)? {
                t.push(vec![
                    b.tau.into(),
                    b.rho_admissibility.into(),
                    b.rho_positive_rate.into(),
                ]);
            }
            t
        }
    };
    ctx.emit_table(&t, &cfg)
}

// mc-sep

#[derive(Debug, Args, Serialize)]
pub struct McSepArgs {
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    taus: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<String>>,
    #[arg(long)]
    delta: Option<f64>,
    /// Codebook sizes M.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
}

pub fn mc_sep(ctx: &Ctx, a: &McSepArgs) -> Result<()> {
    let s: Fig5Settings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("mc-sep", &s)?;
    ctx.emit_table(&figures::fig5(&s, Seed::new(ctx.seed))?, &cfg)
}

// pack

#[derive(Debug, Args, Serialize)]
pub struct PackArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Target separation with unit suffix (alternative to --tau/--rho).
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    rho: Option<String>,
    /// Consecutive rejected proposals before the greedy code is declared saturated.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max_points: Option<usize>,
    /// Candidate points (code CSV); selects restricted packing.
    #[arg(long)]
    candidates: Option<String>,
    #[arg(long, value_enum)]
    selection: Option<Selection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Auto,
    Greedy,
    Exact,
}

impl Selection {
    fn mode(self, n: usize) -> SelectionMode {
        match self {
            Selection::Greedy => SelectionMode::Greedy,
            Selection::Exact => SelectionMode::Exact,
            Selection::Auto if n <= EXACT_LIMIT => SelectionMode::Exact,
            Selection::Auto => SelectionMode::Greedy,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PackSettings {
    dim: Option<usize>,
    psi: Option<AngleValue>,
    tau: Option<f64>,
    rho: Option<AngleValue>,
    budget: usize,
    max_points: Option<usize>,
    candidates: Option<String>,
    selection: Selection,
}

impl Default for PackSettings {
    fn default() -> Self {
        PackSettings {
            dim: None,
            psi: None,
            tau: None,
            rho: None,
            budget: 2000,
            max_points: None,
            candidates: None,
            selection: Selection::Auto,
        }
    }
}

fn target_psi(psi: &Option<AngleValue>, tau: Option<f64>, rho: &Option<AngleValue>) -> Result<Angle> {
    match (psi, tau) {
        (Some(p), None) if rho.is_none() => p.angle(),
        (None, Some(tau)) => {
            let rho = rho.as_ref().map_or(Ok(Angle::ZERO), AngleValue::angle)?;
            let sep = effective_separation(tau, rho)?;
            if sep.degenerate {
                return Err(Error::DegenerateSeparation { psi: sep.raw });
            }
            Ok(sep.psi)
        }
        _ => Err(Error::param(
            "psi",
            "give either psi or tau (with optional rho)",
        )),
    }
}

fn code_output(ctx: &Ctx, cfg: &Value, code: &SphericalCode, psi: Angle) -> Result<()> {
    let side = CodeSidecar {
        dimension: code.dimension,
        points: code.len(),
        psi: Some(psi.radians()),
        saturated: code.saturated,
        min_angle: code.min_angle.radians(),
    };
    match ctx.format {
        crate::Format::Csv => {
            let text = format!(
                "# config_sha256={} config={}\n{}",
                idcap_core::table::config_hash(cfg),
                cfg,
                code_to_csv(&code.points)?
            );
            ctx.write(text.as_bytes())?;
            if let Some(out) = &ctx.out {
                fs::write(
                    sidecar_path(out),
                    serde_json::to_string_pretty(&side)? + "\n",
                )?;
            }
            Ok(())
        }
        crate::Format::Json => ctx.emit_json(&json!({
            "config_sha256": idcap_core::table::config_hash(cfg),
            "config": cfg,
            "code": side,
            "points": code.points,
        })),
    }
}

pub fn pack(ctx: &Ctx, a: &PackArgs) -> Result<()> {
    let s: PackSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("pack", &s)?;
    let psi = target_psi(&s.psi, s.tau, &s.rho)?;
    let seed = Seed::new(ctx.seed);
    let code = match &s.candidates {
        Some(path) => {
            let cands = read_points(Path::new(path))?;
            let mode = s.selection.mode(cands.len());
            restricted_packing(&cands, psi, mode, seed)?
        }
        None => greedy_packing_capped(required(s.dim, "dim")?, psi, s.budget, s.max_points, seed)?,
    };
    code_output(ctx, &cfg, &code, psi)
}

// pipeline

#[derive(Debug, Args, Serialize)]
pub struct PipelineMakeArgs {
    /// Existing centers (code CSV); otherwise a greedy code is built.
    #[arg(long)]
    centers: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Number of identities to keep from the generated code.
    #[arg(long)]
    identities: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PipelineMakeSettings {
    centers: Option<String>,
    dim: Option<usize>,
    identities: Option<usize>,
    tau: Option<f64>,
    rho: Option<AngleValue>,
    eta: f64,
    budget: usize,
}

impl Default for PipelineMakeSettings {
    fn default() -> Self {
        PipelineMakeSettings {
            centers: None,
            dim: None,
            identities: None,
            tau: None,
            rho: None,
            eta: 0.0,
            budget: 2000,
        }
    }
}

pub fn pipeline_make(ctx: &Ctx, a: &PipelineMakeArgs) -> Result<()> {
    let s: PipelineMakeSettings = ctx.settings(a)?;
    let out = ctx
        .out
        .clone()
        .ok_or_else(|| Error::param("out", "pipeline make writes files and needs --out"))?;
    let rho = s.rho.as_ref().map_or(Ok(Angle::ZERO), AngleValue::angle)?;
    let seed = Seed::new(ctx.seed);
    let (centers_ref, dimension) = match &s.centers {
        Some(path) => {
            let pts = read_points(Path::new(path))?;
            let abs = fs::canonicalize(path)?;
            (abs.to_string_lossy().into_owned(), pts[0].dim())
        }
        None => {
            let dim = required(s.dim, "dim")?;
            let sep = effective_separation(required(s.tau, "tau")?, rho)?;
            if sep.degenerate {
                return Err(Error::DegenerateSeparation { psi: sep.raw });
            }
            let code = greedy_packing_capped(
                dim,
                sep.psi,
                s.budget,
                s.identities,
                seed.derive("pipeline/centers", 0),
            )?;
            let file = centers_file(&out);
            fs::write(&file, code_to_csv(&code.points)?)?;
            let name = file
                .file_name()
                .expect("file name")
                .to_string_lossy()
                .into_owned();
            (name, dim)
        }
    };
    let pf = PipelineFile {
        dimension,
        rho: rho.radians(),
        eta: s.eta,
        seed,
        centers: centers_ref,
    };
    fs::write(&out, serde_json::to_string_pretty(&pf)? + "\n")?;
    // Validate the written pair before reporting success.
    PipelineFile::load(&out)?;
    Ok(())
}

fn centers_file(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or("pipeline".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.centers.csv"))
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineSampleArgs {
    /// Pipeline file written by `pipeline make`.
    pipeline: Option<String>,
    /// Views per identity.
    #[arg(long)]
    views: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineSampleSettings {
    pipeline: String,
    #[serde(default = "default_views")]
    views: usize,
}

fn default_views() -> usize {
    16
}

/// Label for identity `i` of `n`, zero-padded so labels sort numerically.
pub fn identity_label(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len();
    format!("id{i:0width$}")
}

pub fn pipeline_sample(ctx: &Ctx, a: &PipelineSampleArgs) -> Result<()> {
    let s: PipelineSampleSettings = ctx.settings(a)?;
    let (_, p) = PipelineFile::load(Path::new(&s.pipeline))?;
    let n = p.identities();
    let mut ids = std::collections::BTreeMap::new();
    for i in 0..n {
        ids.insert(identity_label(i, n), p.sample_views(i, s.views)?.views);
    }
    ctx.write(EmbeddingDataset::new(ids)?.to_jsonl().as_bytes())
}

// audit

#[derive(Debug, Args, Serialize)]
pub struct AuditArgs {
    /// JSONL dataset, one `{"identity", "embedding"}` record per line.
    dataset: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    pair_budget: Option<u64>,
    #[arg(long)]
    eps_in: Option<f64>,
    #[arg(long)]
    eps_out: Option<f64>,
    #[arg(long, value_enum)]
    selection: Option<Selection>,
    /// CSV table to emit: `pairs` (default), `capacity` or `mmcr`.
    #[arg(long, value_enum)]
    table: Option<AuditTable>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditTable {
    Pairs,
    Capacity,
    Mmcr,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditSettings {
    dataset: String,
    tau: f64,
    #[serde(default = "default_budget")]
    pair_budget: u64,
    #[serde(default)]
    eps_in: f64,
    #[serde(default)]
    eps_out: f64,
    #[serde(default = "default_selection")]
    selection: Selection,
    #[serde(default = "default_audit_table")]
    table: AuditTable,
}

fn default_budget() -> u64 {
    100_000
}

fn default_selection() -> Selection {
    Selection::Auto
}

fn default_audit_table() -> AuditTable {
    AuditTable::Pairs
}

pub fn audit(ctx: &Ctx, a: &AuditArgs) -> Result<()> {
    let s: AuditSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("audit", &s)?;
    let file = fs::File::open(&s.dataset)?;
    let ds = EmbeddingDataset::from_jsonl(std::io::BufReader::new(file))?;
    let op = OperatingPoint::new(s.tau, s.eps_in, s.eps_out)?;
    let report = estimate_admissibility(&ds, s.tau, s.pair_budget, Seed::new(ctx.seed))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let capacity = empirical_capacity_from_report(&report, op, s.selection.mode(ds.len()))?;
    let mmcr = mmcr_report(&ds)?;
    if ctx.format == crate::Format::Json {
        return ctx.emit_json(&json!({
            "config_sha256": idcap_core::table::config_hash(&cfg),
            "config": cfg,
            "admissible": report.admissible_at(s.eps_in, s.eps_out),
            "admissibility": report,
            "capacity": capacity,
            "mmcr": mmcr,
        }));
    }
    let t = match s.table {
        AuditTable::Pairs => {
            let mut t = Table::new(&[
                "kind",
                "a",
                "b",
                "pairs",
                "passed",
                "rate",
                "std_err",
                "subsampled",
            ]);
            for g in &report.genuine {
                t.push(vec![
                    "genuine".into(),
                    g.identity.as_str().into(),
                    Cell::Null,
                    g.pairs.into(),
                    g.accepted.into(),
                    g.rate.into(),
                    g.std_err.into(),
                    g.subsampled.into(),
                ]);
            }
            for p in &report.impostor {
                t.push(vec![
                    "impostor".into(),
                    p.a.as_str().into(),
                    p.b.as_str().into(),
                    p.pairs.into(),
                    p.rejected.into(),
                    p.rate.into(),
                    p.std_err.into(),
                    p.subsampled.into(),
                ]);
            }
            t
        }
        AuditTable::Capacity => {
            let mut t = Table::new(&["identity", "selected"]);
            for label in ds.labels() {
                t.push(vec![
                    label.into(),
                    capacity.labels.iter().any(|l| l == label).into(),
                ]);
            }
            t
        }
        AuditTable::Mmcr => {
            let mut t = Table::new(&["quantity", "value"]);
            let rows: [(&str, Cell); 8] = [
                ("identities", mmcr.identities.into()),
                ("dimension", mmcr.dimension.into()),
                ("rank", mmcr.rank.into()),
                ("nuclear_norm", mmcr.nuclear_norm.into()),
                ("frobenius_norm", mmcr.frobenius_norm.into()),
                ("sqrt_r_frobenius", mmcr.bound_rank_frobenius.into()),
                ("sqrt_r_m", mmcr.bound_rank_count.into()),
                ("shape_bound", mmcr.bound_shape.into()),
            ];
            for (k, v) in rows {
                t.push(vec![k.into(), v]);
            }
            t.push(vec!["bound_satisfied".into(), mmcr.bound_satisfied.into()]);
            t
        }
    };
    ctx.emit_table(&t, &cfg)
}

// calibrate

#[derive(Debug, Args, Serialize)]
pub struct CalibrateArgs {
    /// CSV with columns `tau,fmr`, tau increasing.
    roc: Option<String>,
    /// Target false-match rate.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrateSettings {
    roc: String,
    alpha: f64,
}

#[derive(Deserialize)]
struct RocRow {
    tau: f64,
    fmr: f64,
}

pub fn read_roc(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    r.deserialize::<RocRow>()
        .map(|row| row.map(|x| (x.tau, x.fmr)).map_err(Error::from))
        .collect()
}

pub fn calibrate(ctx: &Ctx, a: &CalibrateArgs) -> Result<()> {
    let s: CalibrateSettings = ctx.settings(a)?;
    let cfg = ctx.fingerprint("calibrate", &s)?;
    let roc = read_roc(&fs::read_to_string(&s.roc)?)?;
    let tau = calibrate_threshold(&roc, s.alpha)?;
    let mut t = Table::new(&["alpha", "tau"]);
    t.push(vec![s.alpha.into(), tau.into()]);
    ctx.emit_table(&t, &cfg)
}

// figure

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    #[arg(value_enum)]
    #[serde(skip)]
    name: FigureName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

pub fn figure(ctx: &Ctx, a: &FigureArgs) -> Result<()> {
    let none = json!({});
    let (cfg, t) = match a.name {
        FigureName::Fig2 => {
            let s: Fig2Settings = ctx.settings(&none)?;
            (ctx.fingerprint("figure fig2", &s)?, figures::fig2(&s)?)
        }
        FigureName::Fig3 => {
            let s: Fig3Settings = ctx.settings(&none)?;
            (ctx.fingerprint("figure fig3", &s)?, figures::fig3(&s)?)
        }
        FigureName::Fig4 => {
            let s: Fig4Settings = ctx.settings(&none)?;
            (ctx.fingerprint("figure fig4", &s)?, figures::fig4(&s)?)
        }
        FigureName::Fig5 => {
            let s: Fig5Settings = ctx.settings(&none)?;
            (
                ctx.fingerprint("figure fig5", &s)?,
                figures::fig5(&s, Seed::new(ctx.seed))?,
            )
        }
    };
    ctx.emit_table(&t, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use idcap_core::io::code_from_csv;

    #[test]
    fn labels_sort_numerically() {
        assert_eq!(identity_label(3, 10), "id3");
        assert_eq!(identity_label(3, 11), "id03");
        assert_eq!(identity_label(0, 1), "id0");
    }

    #[test]
    fn roc_parsing() {
        let roc = read_roc("# comment\ntau, fmr\n0.1,0.5\n0.2,0.1\n").unwrap();
        assert_eq!(roc, vec![(0.1, 0.5), (0.2, 0.1)]);
        assert!(read_roc("tau,fmr\nx,1\n").is_err());
    }

    #[test]
    fn code_text_round_trip() {
        let pts: Vec<_> = (0..3)
            .map(|k| idcap_core::UnitVector::basis(3, k))
            .collect();
        assert_eq!(code_from_csv(&code_to_csv(&pts).unwrap()).unwrap(), pts);
    }
}
