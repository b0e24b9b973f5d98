//! Command implementations.

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fermion_entropy_core::contour::{
    entropy_by_contour, renyi_by_contour, weight_renyi_real, weight_von_neumann_real, ContourSpec,
};
use fermion_entropy_core::correlation::{build_corr_matrix, SubsystemSpec};
use fermion_entropy_core::entropy::{entropy_report, mutual_information};
use fermion_entropy_core::error::Error as CoreError;
use fermion_entropy_core::model::ModelParams;
use fermion_entropy_core::oracle::{
    ed_ground_state, ed_reduced_entropy, ff_finite_entropy, FiniteChain,
};
use fermion_entropy_core::spectral::eig_symmetric;
use fermion_entropy_core::CorrMatrix;

use crate::output::{emit, fmt_f64, residual_csv, to_json, Envelope, Format, Residual, Units};
use crate::pool::run_indexed;
use crate::sites::{format_site_list, parse_site_list, SiteParseError};

/// Exit codes: 2 for malformed input, 3 for numerical-domain failures.
/// Check commands additionally exit 1 when a tolerance fails.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<SiteParseError> for CliError {
    fn from(e: SiteParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io: {e}"))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        // input-shaped problems exit 2, numerical-domain problems exit 3
        let is_input = matches!(
            e,
            CoreError::DuplicateSite { .. }
                | CoreError::NonPositiveSite { .. }
                | CoreError::EmptySites
                | CoreError::SeparatorsNotAscending
                | CoreError::SiteNotInSubsystem { .. }
                | CoreError::SpanTooLarge { .. }
                | CoreError::OverlappingParts { .. }
                | CoreError::TooLarge { .. }
                | CoreError::ChainTooShort { .. }
                | CoreError::SiteOutsideChain { .. }
                | CoreError::BadStateDimension { .. }
                | CoreError::FieldOutOfRange { .. }
        );
        if is_input {
            CliError::Parse(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

pub type CliResult = Result<i32, CliError>;

fn model(h: f64) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(h)?)
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EntropyConfig {
    command: &'static str,
    sites: String,
    h: f64,
    alpha: Vec<f64>,
    units: &'static str,
}

#[derive(Serialize)]
struct RenyiValue {
    alpha: f64,
    value: f64,
}

#[derive(Serialize)]
struct EntropyResults {
    sites: Vec<i64>,
    n: usize,
    s_von_neumann: f64,
    renyi: Vec<RenyiValue>,
    spectrum: Vec<f64>,
}

pub fn cmd_entropy(
    sites: &str,
    h: f64,
    alphas: &[f64],
    format: Format,
    output: Option<PathBuf>,
    units: Units,
) -> CliResult {
    let spec = SubsystemSpec::parse(&parse_site_list(sites)?)?;
    let params = model(h)?;
    let report = entropy_report(&spec, &params, alphas)?;

    let results = EntropyResults {
        sites: spec.sites().to_vec(),
        n: spec.len(),
        s_von_neumann: units.scale(report.s_von_neumann),
        renyi: report
            .renyi
            .iter()
            .map(|&(alpha, v)| RenyiValue { alpha, value: units.scale(v) })
            .collect(),
        spectrum: report.spectrum.values().to_vec(),
    };
    let content = match format {
        Format::Json => to_json(&Envelope {
            config: EntropyConfig {
                command: "entropy",
                sites: format_site_list(spec.sites()),
                h,
                alpha: alphas.to_vec(),
                units: units.label(),
            },
            results,
            residuals: Vec::new(),
        }),
        Format::Csv => {
            let renyi_field = results
                .renyi
                .iter()
                .map(|r| format!("{}={}", r.alpha, fmt_f64(r.value)))
                .collect::<Vec<_>>()
                .join(";");
            let spectrum_field =
                results.spectrum.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(";");
            format!(
                "h,sites,n,s_von_neumann,renyi,spectrum\n{},\"{}\",{},{},\"{}\",\"{}\"\n",
                fmt_f64(h),
                format_site_list(spec.sites()),
                spec.len(),
                fmt_f64(results.s_von_neumann),
                renyi_field,
                spectrum_field,
            )
        }
    };
    emit(output.as_deref(), &content)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// mutual information
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MutualConfig {
    command: &'static str,
    part1: String,
    part2: String,
    h: f64,
    units: &'static str,
}

#[derive(Serialize)]
struct MutualResults {
    s_part1: f64,
    s_part2: f64,
    s_union: f64,
    mutual_information: f64,
}

pub fn cmd_mutual(
    part1: &str,
    part2: &str,
    h: f64,
    format: Format,
    output: Option<PathBuf>,
    units: Units,
) -> CliResult {
    let p1 = SubsystemSpec::parse(&parse_site_list(part1)?)?;
    let p2 = SubsystemSpec::parse(&parse_site_list(part2)?)?;
    let params = model(h)?;
    let r = mutual_information(&p1, &p2, &params)?;
    let results = MutualResults {
        s_part1: units.scale(r.s_part1),
        s_part2: units.scale(r.s_part2),
        s_union: units.scale(r.s_union),
        mutual_information: units.scale(r.mutual_information),
    };
    let content = match format {
        Format::Json => to_json(&Envelope {
            config: MutualConfig {
                command: "mutual",
                part1: format_site_list(p1.sites()),
                part2: format_site_list(p2.sites()),
                h,
                units: units.label(),
            },
            results,
            residuals: Vec::new(),
        }),
        Format::Csv => format!(
            "h,part1,part2,s_part1,s_part2,s_union,mutual_info\n{},\"{}\",\"{}\",{},{},{},{}\n",
            fmt_f64(h),
            format_site_list(p1.sites()),
            format_site_list(p2.sites()),
            fmt_f64(results.s_part1),
            fmt_f64(results.s_part2),
            fmt_f64(results.s_union),
            fmt_f64(results.mutual_information),
        ),
    };
    emit(output.as_deref(), &content)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// two-interval scan
// ---------------------------------------------------------------------------

pub const DEFAULT_SCAN_M: [i64; 14] =
    [21, 40, 41, 63, 80, 81, 160, 161, 189, 320, 321, 567, 640, 641];

#[derive(Serialize)]
struct ScanConfig {
    command: &'static str,
    h: f64,
    m_list: Vec<i64>,
    units: &'static str,
}

#[derive(Serialize, Clone)]
struct ScanRow {
    m: i64,
    inv_m: f64,
    s_a1: f64,
    s_a2: f64,
    s_union: f64,
    mutual_info: f64,
}

#[derive(Serialize)]
struct ScanResults {
    rows: Vec<ScanRow>,
    failures: Vec<String>,
}

fn scan_row(m: i64, units: Units) -> Result<ScanRow, String> {
    let run = || -> Result<ScanRow, CoreError> {
        let params = ModelParams::new(0.0)?;
        let a1: Vec<i64> = (1..=m).collect();
        let a2: Vec<i64> = (2 * m + 1..=3 * m).collect();
        let union: Vec<i64> = a1.iter().chain(a2.iter()).copied().collect();
        let s1 = entropy_report(&SubsystemSpec::parse(&a1)?, &params, &[])?.s_von_neumann;
        let s2 = entropy_report(&SubsystemSpec::parse(&a2)?, &params, &[])?.s_von_neumann;
        let su = entropy_report(&SubsystemSpec::parse(&union)?, &params, &[])?.s_von_neumann;
        Ok(ScanRow {
            m,
            inv_m: 1.0 / m as f64,
            s_a1: units.scale(s1),
            s_a2: units.scale(s2),
            s_union: units.scale(su),
            mutual_info: units.scale(s1 + s2 - su),
        })
    };
    let row = run().map_err(|e| format!("m={m}: {e}"))?;
    if (row.s_a1 - row.s_a2).abs() > 1e-9 {
        return Err(format!("m={m}: S_A1 and S_A2 disagree beyond 1e-9"));
    }
    Ok(row)
}

pub fn cmd_scan_fig2(
    max_m: Option<i64>,
    m_list: Option<&str>,
    format: Format,
    output: Option<PathBuf>,
    plot_data: bool,
    units: Units,
) -> CliResult {
    let mut ms: Vec<i64> = match m_list {
        Some(text) => parse_site_list(text)?,
        None => DEFAULT_SCAN_M.to_vec(),
    };
    if let Some(cap) = max_m {
        ms.retain(|&m| m <= cap);
    }
    if ms.is_empty() {
        return Err(CliError::Parse("scan list is empty after --max-m".into()));
    }

    let outcomes = run_indexed(ms.len(), |i| scan_row(ms[i], units));
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(msg) => {
                eprintln!("scan row failed: {msg}");
                failures.push(msg);
            }
        }
    }
    rows.sort_by_key(|r| r.m);

    let content = if plot_data {
        let mut s = String::from("# inv_m mutual_info\n");
        for r in &rows {
            s.push_str(&format!("{} {}\n", fmt_f64(r.inv_m), fmt_f64(r.mutual_info)));
        }
        s
    } else {
        match format {
            Format::Json => to_json(&Envelope {
                config: ScanConfig {
                    command: "scan-fig2",
                    h: 0.0,
                    m_list: ms.clone(),
                    units: units.label(),
                },
                results: ScanResults { rows: rows.clone(), failures: failures.clone() },
                residuals: Vec::new(),
            }),
            Format::Csv => {
                let mut s = String::from("m,inv_m,s_a1,s_a2,s_union,mutual_info\n");
                for r in &rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        r.m,
                        fmt_f64(r.inv_m),
                        fmt_f64(r.s_a1),
                        fmt_f64(r.s_a2),
                        fmt_f64(r.s_union),
                        fmt_f64(r.mutual_info),
                    ));
                }
                s
            }
        }
    };
    emit(output.as_deref(), &content)?;
    if failures.is_empty() {
        Ok(0)
    } else {
        Ok(3)
    }
}

// ---------------------------------------------------------------------------
// contour check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ContourCheckConfig {
    command: &'static str,
    seed: u64,
    specs: usize,
    epsilons: Vec<f64>,
    alphas: Vec<f64>,
    tolerance: f64,
    inject_perturbation: bool,
}

#[derive(Serialize)]
struct CheckResults {
    cases: usize,
    failed: usize,
    all_pass: bool,
}

const CONTOUR_CHECK_TOL: f64 = 1e-6;

pub fn cmd_contour_check(
    seed: u64,
    specs: usize,
    format: Format,
    output: Option<PathBuf>,
    inject: bool,
) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let epsilons = [1e-3, 1e-4];
    let alphas = [0.5, 2.0, 3.0];
    let mut residuals = Vec::new();

    for spec_idx in 0..specs {
        let n = rng.gen_range(1..=12usize);
        let base = rng.gen_range(1..=20i64);
        let mut sites = BTreeSet::new();
        while sites.len() < n {
            sites.insert(base + rng.gen_range(0..30i64));
        }
        let spec = SubsystemSpec::parse(&sites.into_iter().collect::<Vec<_>>())?;
        let h = if rng.gen_bool(0.4) { 0.0 } else { rng.gen_range(-1.9..1.9) };
        let a: CorrMatrix = build_corr_matrix(&spec, &model(h)?)?;
        let nus = eig_symmetric(a.entries())?;
        for &eps in &epsilons {
            let x = 1.0 + eps;
            let contour = ContourSpec::rectangle(eps);
            let target: f64 =
                nus.values().iter().map(|&nu| weight_von_neumann_real(x, nu)).sum();
            let got = entropy_by_contour(&a, &contour)?;
            residuals.push(Residual {
                case: format!("spec{spec_idx:02}/eps={eps:.0e}/von_neumann"),
                residual: (got - target).abs(),
                tolerance: CONTOUR_CHECK_TOL,
                pass: true,
            });
            for &alpha in &alphas {
                let target: f64 =
                    nus.values().iter().map(|&nu| weight_renyi_real(x, nu, alpha)).sum();
                let got = renyi_by_contour(&a, &contour, alpha)?;
                residuals.push(Residual {
                    case: format!("spec{spec_idx:02}/eps={eps:.0e}/alpha={alpha}"),
                    residual: (got - target).abs(),
                    tolerance: CONTOUR_CHECK_TOL,
                    pass: true,
                });
            }
        }
    }

    if inject {
        if let Some(first) = residuals.first_mut() {
            first.residual += 1e-3;
            first.case.push_str("/perturbed");
        }
    }
    finish_check(
        residuals,
        format,
        output,
        ContourCheckConfig {
            command: "contour-check",
            seed,
            specs,
            epsilons: epsilons.to_vec(),
            alphas: alphas.to_vec(),
            tolerance: CONTOUR_CHECK_TOL,
            inject_perturbation: inject,
        },
    )
}

// ---------------------------------------------------------------------------
// oracle check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OracleCheckConfig {
    command: &'static str,
    chain_length: usize,
    seed: u64,
    h_requested: f64,
    /// Degenerate configurations are lifted by a 1e-6 field shift; the value
    /// actually used is recorded here.
    h_used: f64,
    tolerance: f64,
    inject_perturbation: bool,
}

const ORACLE_CHECK_TOL: f64 = 1e-8;

pub fn cmd_oracle_check(
    length: usize,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
    inject: bool,
) -> CliResult {
    let h_requested = 0.0;
    // probe for a non-degenerate configuration
    let (chain, psi) = {
        let chain = FiniteChain::new(length, h_requested)?;
        match ed_ground_state(&chain) {
            Ok(psi) if !matches!(ff_finite_entropy(&chain, &SubsystemSpec::parse(&[1])?),
                                 Err(CoreError::DegenerateFermiLevel { .. })) => (chain, psi),
            _ => {
                let shifted = FiniteChain::new(length, 1e-6)?;
                let psi = ed_ground_state(&shifted)?;
                (shifted, psi)
            }
        }
    };

    let mut subsets: Vec<Vec<i64>> = Vec::new();
    let l = length as i64;
    for a in 1..=l {
        subsets.push(vec![a]);
        for b in (a + 1)..=l {
            subsets.push(vec![a, b]);
            for c in (b + 1)..=l {
                subsets.push(vec![a, b, c]);
            }
        }
    }
    if length >= 4 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let mut pick: Vec<i64> = (1..=l).collect();
            pick.shuffle(&mut rng);
            let mut four = pick[..4].to_vec();
            four.sort_unstable();
            subsets.push(four);
        }
    }

    let mut residuals = Vec::with_capacity(subsets.len());
    for sites in &subsets {
        let spec = SubsystemSpec::parse(sites)?;
        let ed = ed_reduced_entropy(&psi, &spec)?;
        let ff = ff_finite_entropy(&chain, &spec)?;
        residuals.push(Residual {
            case: format!("subset={}", format_site_list(sites)),
            residual: (ed - ff).abs(),
            tolerance: ORACLE_CHECK_TOL,
            pass: true,
        });
    }
    if inject {
        if let Some(first) = residuals.first_mut() {
            first.residual += 1e-3;
            first.case.push_str("/perturbed");
        }
    }
    finish_check(
        residuals,
        format,
        output,
        OracleCheckConfig {
            command: "oracle-check",
            chain_length: length,
            seed,
            h_requested,
            h_used: chain.h,
            tolerance: ORACLE_CHECK_TOL,
            inject_perturbation: inject,
        },
    )
}

// ---------------------------------------------------------------------------

fn finish_check<C: Serialize>(
    mut residuals: Vec<Residual>,
    format: Format,
    output: Option<PathBuf>,
    config: C,
) -> CliResult {
    for r in &mut residuals {
        r.pass = r.residual <= r.tolerance;
    }
    let failed = residuals.iter().filter(|r| !r.pass).count();
    let results =
        CheckResults { cases: residuals.len(), failed, all_pass: failed == 0 };
    let all_pass = results.all_pass;
    let content = match format {
        Format::Json => to_json(&Envelope { config, results, residuals }),
        Format::Csv => residual_csv(&residuals),
    };
    emit(output.as_deref(), &content)?;
    if all_pass {
        Ok(0)
    } else {
        Ok(1)
    }
}
