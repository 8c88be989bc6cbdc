use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psi_core::classify::{classify_group, diagram_data, diagram_json, run_campaign, write_diagram_csv, Campaign};
use psi_core::lattice::{all_subgroups_with, is_modular_lattice_with};
use psi_core::psi::{psi, psi_prime};
use psi_core::smallgroups::{catalog_with, enumerate_order, known_name};
use psi_core::{FiniteGroup, Limits, SubgroupSet};

use crate::error::{exit, CliError, Result};
use crate::expr::{evaluate, parse};

#[derive(Debug, Parser)]
#[command(name = "psig", version, about = "Sum-of-element-orders computations and classification campaigns")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Largest group order that may be built.
    #[arg(long, global = true, default_value_t = Limits::default().max_order)]
    pub order_cap: usize,
    /// Wall-clock budget in seconds for searches.
    #[arg(long, global = true)]
    pub time_budget: Option<f64>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for search order; results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl GlobalOpts {
    pub fn limits(&self) -> Result<Limits> {
        let time_budget = match self.time_budget {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(CliError::Usage(format!("invalid time budget {s}"))),
            None => None,
        };
        if self.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(Limits {
            max_order: self.order_cap,
            time_budget,
            workers: self.workers,
            seed: self.seed,
            ..Limits::default()
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum of element orders.
    Psi { expr: String },
    /// ψ divided by ψ of the cyclic group of the same order.
    Psiprime { expr: String },
    /// JSON record with the family label for the group's ψ′ window.
    Classify { expr: String },
    /// Whether the subgroup lattice is modular, with a Dedekind-law counterexample if not.
    Modular { expr: String },
    /// Every subgroup with its order and a generating set.
    Subgroups { expr: String },
    /// Groups of order N up to isomorphism.
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = EnumMethod::Catalog)]
        method: EnumMethod,
        /// Writes one canonical key per line.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Runs a verification campaign over the catalog.
    Verify {
        #[arg(value_enum)]
        campaign: CampaignArg,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Marked ψ′ values.
    Diagram {
        #[arg(long, conflicts_with = "csv")]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnumMethod {
    Exhaustive,
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CampaignArg {
    TheoremA,
    TheoremB,
    Interval,
    Properties,
}

impl From<CampaignArg> for Campaign {
    fn from(c: CampaignArg) -> Self {
        match c {
            CampaignArg::TheoremA => Campaign::TheoremA,
            CampaignArg::TheoremB => Campaign::TheoremB,
            CampaignArg::Interval => Campaign::Interval,
            CampaignArg::Properties => Campaign::Properties,
        }
    }
}

fn group(expr: &str, limits: &Limits) -> Result<FiniteGroup> {
    evaluate(&parse(expr)?, limits)
}

fn write_out(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text).map_err(|e| CliError::io("stdout", e))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        write_out($out, format_args!("{}\n", format_args!($($arg)*)))
    };
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// A short generating set, chosen greedily in element order.
fn generators(g: &FiniteGroup, h: &SubgroupSet) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = SubgroupSet::trivial(g);
    for x in h.iter() {
        if !span.contains(x) {
            gens.push(x);
            span = g.generated_subgroup(&gens);
        }
    }
    gens
}

fn describe(g: &FiniteGroup, h: &SubgroupSet) -> String {
    let gens = generators(g, h);
    let orders: Vec<u32> = gens.iter().map(|&x| g.order_of(x)).collect();
    format!("order {} generated by {gens:?} of orders {orders:?}", h.size())
}

/// Runs one command, returning the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let limits = cli.global.limits()?;
    match &cli.command {
        Command::Psi { expr } => {
            say!(out, "{}", psi(&group(expr, &limits)?))?;
        }
        Command::Psiprime { expr } => {
            let v = psi_prime(&group(expr, &limits)?);
            say!(out, "{v} ≈ {}", v.to_decimal(6))?;
        }
        Command::Classify { expr } => {
            let record = classify_group(&group(expr, &limits)?, &limits)?;
            let text = serde_json::to_string_pretty(&record).map_err(|e| CliError::Usage(format!("json: {e}")))?;
            say!(out, "{text}")?;
        }
        Command::Modular { expr } => {
            let g = group(expr, &limits)?;
            let verdict = is_modular_lattice_with(&g, &limits)?;
            match verdict.witness {
                None => say!(out, "modular")?,
                Some((h, k, l)) => {
                    say!(out, "not modular")?;
                    say!(out, "H: {}", describe(&g, &h))?;
                    say!(out, "K: {}", describe(&g, &k))?;
                    say!(out, "L: {}", describe(&g, &l))?;
                    let left = g.join(&h, &k.intersection(&l));
                    let right = g.join(&h, &k).intersection(&l);
                    say!(
                        out,
                        "H <= L but <H, K ∩ L> has order {} while <H, K> ∩ L has order {}",
                        left.size(),
                        right.size()
                    )?;
                }
            }
        }
        Command::Subgroups { expr } => {
            let g = group(expr, &limits)?;
            let lat = all_subgroups_with(&g, &limits)?;
            let mut rows: Vec<&SubgroupSet> = lat.nodes().iter().collect();
            rows.sort_by_key(|h| (h.size(), h.elements()));
            say!(out, "{} subgroups", rows.len())?;
            for h in rows {
                let normal = if g.is_normal(h) { "normal" } else { "" };
                say!(out, "{:<6} {}", normal, describe(&g, h))?;
            }
        }
        Command::Enumerate { n, method, emit } => {
            let rows: Vec<(String, String)> = match method {
                EnumMethod::Exhaustive => enumerate_order(*n, &limits)?
                    .groups
                    .into_iter()
                    .map(|t| {
                        let key = t.key();
                        let name = known_name(&t.to_group(), &key).unwrap_or_default();
                        (key, name)
                    })
                    .collect(),
                EnumMethod::Catalog => {
                    catalog_with(*n, &limits, None)?.entries.into_iter().map(|e| (e.key, e.name)).collect()
                }
            };
            say!(out, "{} groups of order {n}", rows.len())?;
            for (i, (_, name)) in rows.iter().enumerate() {
                let name = if name.is_empty() { format!("G{n}#{}", i + 1) } else { name.clone() };
                say!(out, "{name}")?;
            }
            if let Some(path) = emit {
                let mut f = create(path)?;
                for (key, _) in &rows {
                    writeln!(f, "{key}").map_err(|e| CliError::io(path.display().to_string(), e))?;
                }
            }
        }
        Command::Verify { campaign, max_order, json } => {
            let report = run_campaign((*campaign).into(), *max_order, &limits)?;
            if let Some(path) = json {
                report.write_json(path)?;
            }
            let status = if report.success { "success" } else { "FAILED" };
            say!(
                out,
                "{} up to order {}: {status}, {} groups checked, {} labeled, {} violations",
                report.campaign,
                report.max_order,
                report.records.len(),
                report.labeled().count(),
                report.violations.len()
            )?;
            if report.campaign != Campaign::Properties {
                for r in report.labeled() {
                    let k = r.params.k.map(|k| format!(" k={k}")).unwrap_or_default();
                    say!(
                        out,
                        "  {:<14} order {:<3} psi' {}/{:<6} modular={:<5} {}{k} m={}",
                        r.name,
                        r.order,
                        r.psi_prime.num,
                        r.psi_prime.den,
                        r.modular,
                        r.label,
                        r.params.m
                    )?;
                }
            }
            for v in &report.violations {
                say!(out, "violation: {v}")?;
            }
            if !report.success {
                return Ok(exit::VIOLATION);
            }
        }
        Command::Diagram { json, csv } => {
            for e in diagram_data() {
                let tail = match (e.groups.is_empty(), e.limit_of) {
                    (false, Some(l)) => format!("{}; limit of {l}", e.groups.join(", ")),
                    (false, None) => e.groups.join(", "),
                    (true, Some(l)) => format!("limit of {l}"),
                    (true, None) => String::new(),
                };
                say!(out, "{:>9}  {}  {tail}", e.value.to_string(), e.decimal)?;
            }
            if let Some(path) = json {
                std::fs::write(path, diagram_json()? + "\n")
                    .map_err(|e| CliError::io(path.display().to_string(), e))?;
            }
            if let Some(path) = csv {
                write_diagram_csv(create(path)?)?;
            }
        }
    }
    Ok(exit::SUCCESS)
}
