//! Subcommand implementations. Each returns the rendered output plus any
//! warnings for standard error; nothing here writes to the terminal.

use std::collections::BTreeMap;

use rayon::prelude::*;
use shuffle_blanket_core::bounds::{self, case_sides};
use shuffle_blanket_core::oracle::{
    self, empirical_dist, histogram_dist, sample_shuffled, total_variation, Dataset, KrrMatrix,
    MAX_EXACT_K, MAX_EXACT_N, RNG_ALGORITHM,
};
use shuffle_blanket_core::params::{compute_kappas, kappa4, ShuffleParams, TargetPair};
use shuffle_blanket_core::tightness::{
    classify, regions_and_verdict, TheoremVerdict, VerdictOptions,
};

use crate::config::{Format, OthersSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::{list, num, Table};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub body: String,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    fn new(body: String) -> Self {
        CommandOutput {
            body,
            warnings: Vec::new(),
        }
    }
}

fn error_marker(err: &shuffle_blanket_core::Error) -> String {
    format!("error: {err}")
}

pub fn kappas(config: &RunConfig) -> CliResult<CommandOutput> {
    let params = config.params()?;
    let mut table = Table::new(&[
        "target", "pi", "ln_kappa1", "kappa2", "ln_kappa2", "kappa3", "kappa4", "kappa5",
    ]);
    for x in 0..params.k {
        let ks = compute_kappas(&params, x)?;
        table.push(vec![
            x.to_string(),
            num(params.pi[x]),
            num(ks.ln_kappa1),
            num(ks.kappa2),
            num(ks.ln_kappa2),
            num(ks.kappa3),
            num(ks.kappa4),
            num(ks.kappa5),
        ]);
    }
    Ok(CommandOutput::new(table.render(config.format.unwrap_or(Format::Text))?))
}

pub fn case(config: &RunConfig) -> CliResult<CommandOutput> {
    let params = config.params()?;
    let mut out = CommandOutput::new(String::new());
    let mut table = Table::new(&["eps", "case", "lhs", "rhs", "kappa4"]);
    let k4 = kappa4(params.epsilon0);
    for &eps in config.require_eps()? {
        match bounds::select_case(params.epsilon0, eps) {
            Ok(tag) => {
                let (lhs, rhs) = case_sides(params.epsilon0, eps);
                table.push(vec![num(eps), tag.to_string(), num(lhs), num(rhs), num(k4)]);
            }
            Err(e) => {
                out.warnings.push(format!("eps = {eps}: {e}"));
                table.push(vec![num(eps), error_marker(&e), String::new(), String::new(), num(k4)]);
            }
        }
    }
    out.body = table.render(config.format.unwrap_or(Format::Text))?;
    Ok(out)
}

pub fn bound(config: &RunConfig) -> CliResult<CommandOutput> {
    let params = config.params()?;
    let mut out = CommandOutput::new(String::new());
    let mut table = Table::new(&["eps", "case", "ln_delta", "delta_clamped"]);
    for &eps in config.require_eps()? {
        match bounds::delta_bound(&params, eps) {
            Ok(b) => table.push(vec![
                num(eps),
                b.case.to_string(),
                num(b.ln_delta),
                num(b.delta_clamped),
            ]),
            Err(e) => {
                out.warnings.push(format!("eps = {eps}: {e}"));
                table.push(vec![num(eps), error_marker(&e), String::new(), String::new()]);
            }
        }
    }
    out.body = table.render(config.format.unwrap_or(Format::Text))?;
    Ok(out)
}

fn roots_cell(roots: &[f64]) -> String {
    if roots.is_empty() {
        "none".into()
    } else {
        list(roots)
    }
}

/// Key-value rows describing the regions, hypotheses and classifications.
pub fn regions_report(
    params: &ShuffleParams,
    verdict: &TheoremVerdict,
    classifications: &[(f64, TargetPair, String)],
) -> Vec<(String, String)> {
    let mut rows = vec![
        ("eps0".to_string(), num(params.epsilon0)),
        ("n".to_string(), params.n.to_string()),
        ("k".to_string(), params.k.to_string()),
        ("pi".to_string(), list(&params.pi)),
    ];
    for r in &verdict.per_input {
        let x = r.kappas.target;
        rows.push((format!("input.{x}.kappa2"), num(r.kappas.kappa2)));
        rows.push((format!("input.{x}.ln_kappa2"), num(r.kappas.ln_kappa2)));
        rows.push((format!("input.{x}.kappa4"), num(r.kappas.kappa4)));
        rows.push((format!("input.{x}.S1"), r.s1.to_string()));
        rows.push((format!("input.{x}.S2"), r.s2.to_string()));
        rows.push((format!("input.{x}.poly_roots"), roots_cell(&r.poly_roots)));
        rows.push((format!("input.{x}.h_roots"), roots_cell(&r.h_roots)));
    }
    rows.extend([
        ("S1".to_string(), verdict.s1.to_string()),
        ("S2".to_string(), verdict.s2.to_string()),
        ("S1_candidate".to_string(), verdict.s1_candidate.to_string()),
        ("S2_candidate".to_string(), verdict.s2_candidate.to_string()),
        ("mu".to_string(), num(verdict.mu)),
        ("thm3a".to_string(), verdict.thm3a_holds.to_string()),
        ("thm3b".to_string(), verdict.thm3b_holds.to_string()),
        ("scan_points".to_string(), verdict.scan_points.to_string()),
        (
            "note".to_string(),
            "hypotheses required for every input; mu minimised over inputs; \
             roots of H touching zero between grid points are not detected"
                .to_string(),
        ),
    ]);
    for (eps, pair, label) in classifications {
        rows.push((
            format!("classification.eps={}.pair={},{}", num(*eps), pair.x0, pair.x1),
            label.clone(),
        ));
    }
    rows
}

pub fn regions(config: &RunConfig) -> CliResult<CommandOutput> {
    let params = config.params()?;
    let options = VerdictOptions {
        scan_points: config.scan_points,
        pair: config.pairs[0],
    };
    let verdict = regions_and_verdict(&params, None, &options)?;
    let mut out = CommandOutput::new(String::new());
    let mut classifications = Vec::new();
    for &eps in &config.eps {
        for &pair in &config.pairs {
            let label = if eps > 0.0 {
                classify(&verdict.per_input[pair.x0].kappas, eps).to_string()
            } else {
                out.warnings.push(format!("eps = {eps}: not positive, left unclassified"));
                "error: eps must be positive".to_string()
            };
            classifications.push((eps, pair, label));
        }
    }
    let rows = regions_report(&params, &verdict, &classifications);
    out.body = match config.format.unwrap_or(Format::Text) {
        Format::Csv => {
            let mut table = Table::new(&["key", "value"]);
            for (k, v) in rows {
                table.push(vec![k, v]);
            }
            table.render(Format::Csv)?
        }
        Format::Text => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    };
    Ok(out)
}

fn exact_feasible(params: &ShuffleParams) -> bool {
    params.n as usize <= MAX_EXACT_N && params.k <= MAX_EXACT_K
}

pub fn oracle(config: &RunConfig) -> CliResult<CommandOutput> {
    let params = config.params()?;
    if !exact_feasible(&params) {
        return Err(CliError::Invalid(format!(
            "oracle: exact computation needs n <= {MAX_EXACT_N} and k <= {MAX_EXACT_K}"
        )));
    }
    let eps_grid = config.require_eps()?;
    let krr = KrrMatrix::new(params.epsilon0, params.k)?;
    let with_mc = config.samples > 0;

    let mut header = vec![
        "eps", "others", "x0", "x1", "tight_adp", "tight_dp", "ln_delta_bound",
        "delta_clamped", "ratio_adp", "ratio_dp",
    ];
    if with_mc {
        header.extend(["mc_tv", "mc_samples", "mc_seed", "rng"]);
    }
    let mut table = Table::new(&header);
    let mut out = CommandOutput::new(String::new());

    let mut dist_cache = BTreeMap::new();
    let mut dist_for = |others: &[usize], x: usize| -> CliResult<oracle::HistogramDist> {
        let key = (others.to_vec(), x);
        if let Some(d) = dist_cache.get(&key) {
            return Ok(Clone::clone(d));
        }
        let d = histogram_dist(&Dataset::with_target(others, x, params.k)?, &krr)?;
        dist_cache.insert(key, d.clone());
        Ok(d)
    };

    for &eps in eps_grid {
        let bound = match bounds::delta_bound(&params, eps) {
            Ok(b) => b,
            Err(e) => {
                out.warnings.push(format!("eps = {eps}: {e}"));
                let mut row = vec![num(eps), error_marker(&e)];
                row.resize(header.len(), String::new());
                table.push(row);
                continue;
            }
        };
        for &pair in &config.pairs {
            for (label, others) in config.others.resolve(pair, params.n) {
                if others.len() + 1 != params.n as usize {
                    return Err(CliError::Invalid(format!(
                        "others: expected {} entries, got {}",
                        params.n - 1,
                        others.len()
                    )));
                }
                let d0 = dist_for(&others, pair.x0)?;
                let d1 = dist_for(&others, pair.x1)?;
                let adp = oracle::hockey_stick_delta(&d0, &d1, eps)?;
                let dp = oracle::tight_dp(&params, &others, eps)?;
                let scale = bound.ln_delta.exp();
                let mut row = vec![
                    num(eps),
                    label,
                    pair.x0.to_string(),
                    pair.x1.to_string(),
                    num(adp),
                    num(dp),
                    num(bound.ln_delta),
                    num(bound.delta_clamped),
                    num(adp / scale),
                    num(dp / scale),
                ];
                if with_mc {
                    let ds = Dataset::with_target(&others, pair.x0, params.k)?;
                    let samples = sample_shuffled(&ds, &krr, config.samples, config.seed)?;
                    let emp = empirical_dist(&samples, ds.len(), params.k);
                    row.extend([
                        num(total_variation(&emp, &d0)?),
                        config.samples.to_string(),
                        config.seed.to_string(),
                        RNG_ALGORITHM.to_string(),
                    ]);
                }
                table.push(row);
            }
        }
    }
    out.body = table.render(config.format.unwrap_or(Format::Text))?;
    Ok(out)
}

const SWEEP_HEADER: &[&str] = &[
    "eps0", "n", "k", "eps", "x0", "x1", "ln_kappa1", "kappa2", "ln_kappa2", "kappa3", "kappa4",
    "kappa5", "case", "ln_delta", "delta_clamped", "classification", "thm3a", "thm3b", "mu",
    "tight_dp", "ratio_dp",
];

fn sweep_tight_dp(
    params: &ShuffleParams,
    others: &OthersSpec,
    pair: TargetPair,
    eps: f64,
) -> CliResult<Option<f64>> {
    if !exact_feasible(params) {
        return Ok(None);
    }
    let mut worst: f64 = 0.0;
    for (_, list) in others.resolve(pair, params.n) {
        if list.len() + 1 != params.n as usize {
            return Err(CliError::Invalid(format!(
                "others: expected {} entries, got {}",
                params.n - 1,
                list.len()
            )));
        }
        worst = worst.max(oracle::tight_dp(params, &list, eps)?);
    }
    Ok(Some(worst))
}

fn sweep_rows(
    config: &RunConfig,
    eps0: f64,
    n: u64,
) -> CliResult<(Vec<Vec<String>>, Vec<String>)> {
    let params = config.params_for(eps0, n)?;
    let pair = config.pairs[0];
    let options = VerdictOptions {
        scan_points: config.scan_points,
        pair,
    };
    let verdict = regions_and_verdict(&params, None, &options)?;
    let ks = &verdict.per_input[pair.x0].kappas;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for &eps in &config.eps {
        let mut row = vec![
            num(eps0),
            n.to_string(),
            params.k.to_string(),
            num(eps),
            pair.x0.to_string(),
            pair.x1.to_string(),
            num(ks.ln_kappa1),
            num(ks.kappa2),
            num(ks.ln_kappa2),
            num(ks.kappa3),
            num(ks.kappa4),
            num(ks.kappa5),
        ];
        match bounds::delta_bound(&params, eps) {
            Ok(b) => {
                let dp = sweep_tight_dp(&params, &config.others, pair, eps)?;
                row.extend([
                    b.case.to_string(),
                    num(b.ln_delta),
                    num(b.delta_clamped),
                    classify(ks, eps).to_string(),
                    verdict.thm3a_holds.to_string(),
                    verdict.thm3b_holds.to_string(),
                    num(verdict.mu),
                    dp.map(num).unwrap_or_default(),
                    dp.map(|d| num(d / b.ln_delta.exp())).unwrap_or_default(),
                ]);
            }
            Err(e) => {
                warnings.push(format!("eps0 = {eps0}, n = {n}, eps = {eps}: {e}"));
                row.push(error_marker(&e));
                row.resize(SWEEP_HEADER.len(), String::new());
            }
        }
        rows.push(row);
    }
    Ok((rows, warnings))
}

pub fn sweep(config: &RunConfig) -> CliResult<CommandOutput> {
    config.require_eps()?;
    let grid: Vec<(f64, u64)> = config
        .eps0
        .iter()
        .flat_map(|&e0| config.n.iter().map(move |&n| (e0, n)))
        .collect();
    let blocks = grid
        .par_iter()
        .map(|&(e0, n)| sweep_rows(config, e0, n))
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(SWEEP_HEADER);
    let mut out = CommandOutput::new(String::new());
    for (rows, warnings) in blocks {
        rows.into_iter().for_each(|r| table.push(r));
        out.warnings.extend(warnings);
    }
    out.body = table.render(config.format.unwrap_or(Format::Csv))?;
    Ok(out)
}
