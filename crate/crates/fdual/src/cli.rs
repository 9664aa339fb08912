//! The `fdual` command line.
//!
//! Exit codes: 0 holds or completed, 1 checked and fails, 2 input error,
//! 3 search stopped by its node budget.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fdual_core::duality::Failure;
use fdual_core::{
    is_primitive, AbelianGroup, Certificate, CertificateKind, DualityChecker, DualityReport, ElementSet, Mode,
    SearchConfig, Symmetry, WeightEnumerator,
};
use serde::Serialize;

use crate::checkpoint::{mode_name, symmetry_name, ConfigJson, StatsJson};
use crate::format::{format_coords, load_document, parse_group, CertificateFile, Document, Instance};
use crate::runner::{run_search, RunOptions, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fdual",
    version,
    about = "Exact verification and search for formally dual sets in finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the duality identities of an instance, or re-verify a certificate.
    Verify {
        file: PathBuf,
        /// Write a certificate when the identities hold.
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
    },
    /// Print the weight enumerator of S.
    Nu { file: PathBuf },
    /// Print |chi_t(S)|^2 for every t as exact integers.
    Spectrum { file: PathBuf },
    /// Decide whether S is primitive.
    Primitive { file: PathBuf },
    /// Exhaustive symmetry-reduced search.
    Search(SearchArgs),
}

#[derive(Debug, clap::Args)]
struct SearchArgs {
    /// Cyclic orders, e.g. 2,2,4,4.
    #[arg(long)]
    group: String,
    #[arg(long)]
    size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Pair)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SymmetryArg::Affine)]
    symmetry: SymmetryArg,
    /// Worker threads; falls back to FD_THREADS, then the core count.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    /// Node budget: 1000000, 1e6 or 10^6.
    #[arg(long, value_parser = parse_budget)]
    budget: Option<u64>,
    /// Results directory.
    #[arg(long, value_name = "DIR", default_value = "fdual-out")]
    out: PathBuf,
    #[arg(long)]
    frontier_depth: Option<usize>,
    /// Force the first elements of S, as element indices: 0,1,5.
    #[arg(long, value_delimiter = ',')]
    prefix: Vec<usize>,
    /// Stop enumerating automorphisms after this many.
    #[arg(long)]
    aut_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Pair,
    #[value(alias = "self_dual")]
    SelfDual,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SymmetryArg {
    None,
    Translation,
    Affine,
}

/// Accepts plain integers, `1e6` and `10^6`.
pub fn parse_budget(text: &str) -> Result<u64, String> {
    let t = text.trim().replace('_', "");
    let bad = || format!("bad budget {text:?}");
    if let Some((base, exp)) = t.split_once('^') {
        let base: u64 = base.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return base.checked_pow(exp).ok_or_else(bad);
    }
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return 10u64.checked_pow(exp).and_then(|p| p.checked_mul(mant)).ok_or_else(bad);
    }
    t.parse().map_err(|_| bad())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify { file, emit_certificate } => cmd_verify(&file, emit_certificate.as_deref(), out, err),
        Command::Nu { file } => cmd_nu(&file, out),
        Command::Spectrum { file } => cmd_spectrum(&file, out),
        Command::Primitive { file } => cmd_primitive(&file, out),
        Command::Search(args) => cmd_search(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn set_text(group: &AbelianGroup, set: &ElementSet) -> String {
    let parts: Vec<String> = set.iter().map(|i| format_coords(group.element(i).coords())).collect();
    format!("{{{}}}", parts.join(", "))
}

fn describe_failure(group: &AbelianGroup, failure: &Failure) -> String {
    match failure {
        Failure::SizeLaw { size_s, size_t, order } => {
            format!("size law: |S|*|T| = {size_s}*{size_t} = {} but |G| = {order}", size_s * size_t)
        }
        Failure::NotInteger { index } => {
            format!(
                "|chi_t(S)|^2 is not an integer at t = {} (index {index})",
                format_coords(group.element(*index).coords())
            )
        }
        Failure::Mismatch { index, expected, actual } => format!(
            "identity fails at t = {} (index {index}): |T|*|chi_t(S)|^2 = {actual}, |S|^2*nu_T(t) = {expected}",
            format_coords(group.element(*index).coords())
        ),
    }
}

fn write_report(out: &mut dyn Write, group: &AbelianGroup, side: &str, report: &DualityReport) -> anyhow::Result<()> {
    match &report.first_failure {
        None => writeln!(out, "{side}: {} of {} identities hold exactly", report.checked_count, group.order())?,
        Some(f) => writeln!(out, "{side}: FAILS; {}", describe_failure(group, f))?,
    }
    Ok(())
}

fn cmd_verify(path: &Path, emit: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let inst = match load_document(path)? {
        Document::Certificate(file) => return verify_certificate(&file, out),
        Document::Instance(inst) => inst,
    };
    let s = inst.require_s()?;
    let group = &inst.group;
    let self_dual = inst.t.is_none();
    if self_dual && inst.pairing.is_none() {
        writeln!(
            err,
            "warning: no pairing given; checking self-duality under the standard pairing only, \
             self-duality under another isomorphism is not excluded"
        )?;
    }
    let t = inst.t.unwrap_or(s);
    if t.is_empty() {
        bail!("T is empty");
    }
    let pairing = inst.pairing.clone().unwrap_or_else(|| group.spec().standard_pairing());
    let checker = DualityChecker::new(group, pairing.clone())?;

    writeln!(out, "group: {} (order {}, exponent {})", group.spec(), group.order(), group.exponent())?;
    writeln!(out, "pairing: {:?}", pairing.rows())?;
    writeln!(out, "mode: {}", if self_dual { "self_dual" } else { "pair" })?;
    writeln!(out, "S ({}): {}", s.len(), set_text(group, &s))?;
    if !self_dual {
        writeln!(out, "T ({}): {}", t.len(), set_text(group, &t))?;
    }
    let primal = checker.check_pair(&s, &t)?;
    write_report(out, group, "identities |T|*|chi_t(S)|^2 = |S|^2*nu_T(t)", &primal)?;
    if !primal.holds {
        writeln!(out, "verdict: not formally dual")?;
        return Ok(EXIT_FAIL);
    }
    let dual = checker.check_pair_dual_side(&s, &t)?;
    write_report(out, group, "identities |S|*|g(T)|^2 = |T|^2*nu_S(g)", &dual)?;
    if !dual.holds {
        writeln!(out, "verdict: not formally dual")?;
        return Ok(EXIT_FAIL);
    }
    let kind = if self_dual { CertificateKind::SelfDual } else { CertificateKind::Pair };
    let cert = Certificate::build(&checker, kind, &s, &t, false)
        .map_err(|e| anyhow::anyhow!("certificate assembly failed: {e}"))?;
    writeln!(out, "primitive S: {}", cert.primitive_s)?;
    if !self_dual {
        writeln!(out, "primitive T: {}", cert.primitive_t)?;
    }
    writeln!(out, "verdict: formally dual")?;
    if let Some(path) = emit {
        fs::write(path, CertificateFile::from_certificate(&cert).to_json())
            .with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "certificate: {}", path.display())?;
    }
    Ok(EXIT_OK)
}

fn verify_certificate(file: &CertificateFile, out: &mut dyn Write) -> anyhow::Result<i32> {
    let cert = file.to_certificate()?;
    let group = AbelianGroup::new(cert.group.clone());
    writeln!(out, "certificate for {} (order {})", group.spec(), group.order())?;
    match cert.verify() {
        Ok(()) => {
            writeln!(out, "verdict: certificate verifies")?;
            Ok(EXIT_OK)
        }
        Err(fdual_core::duality::CertificateError::Group(e)) => Err(e.into()),
        Err(e) => {
            writeln!(out, "verdict: certificate FAILS: {e}")?;
            Ok(EXIT_FAIL)
        }
    }
}

fn load_instance(path: &Path) -> anyhow::Result<(Instance, ElementSet)> {
    let inst = Instance::load(path)?;
    let s = inst.require_s()?;
    Ok((inst, s))
}

fn cmd_nu(path: &Path, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (inst, s) = load_instance(path)?;
    let nu = WeightEnumerator::new(&inst.group, &s)?;
    writeln!(out, "# index\telement\tnu_S")?;
    for (i, c) in nu.counts().iter().enumerate() {
        writeln!(out, "{i}\t{}\t{c}", format_coords(inst.group.element(i).coords()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_spectrum(path: &Path, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (inst, s) = load_instance(path)?;
    let pairing = inst.pairing.clone().unwrap_or_else(|| inst.group.spec().standard_pairing());
    let checker = DualityChecker::new(&inst.group, pairing)?;
    writeln!(out, "# index\telement\t|chi_t(S)|^2")?;
    for (i, v) in checker.spectrum(&s).iter().enumerate() {
        let value = v.map_or_else(|| "non-integer".to_string(), |v| v.to_string());
        writeln!(out, "{i}\t{}\t{value}", format_coords(inst.group.element(i).coords()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_primitive(path: &Path, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (inst, s) = load_instance(path)?;
    let group = &inst.group;
    let report = is_primitive(group, &s)?;
    writeln!(out, "S ({}): {}", s.len(), set_text(group, &s))?;
    match &report.witness_subgroup {
        Some(h) => writeln!(out, "in a coset of a proper subgroup: yes, H = {}", set_text(group, h))?,
        None => writeln!(out, "in a coset of a proper subgroup: no")?,
    }
    match &report.witness_stabilizer {
        Some(h) => writeln!(out, "union of cosets of a nontrivial subgroup: yes, H = {}", set_text(group, h))?,
        None => writeln!(out, "union of cosets of a nontrivial subgroup: no")?,
    }
    writeln!(out, "primitive: {}", if report.primitive { "yes" } else { "no" })?;
    Ok(if report.primitive { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct StatsFile<'a> {
    status: &'a str,
    complete: bool,
    budget_stopped: bool,
    config: ConfigJson,
    config_hash: String,
    budget: Option<u64>,
    jobs: usize,
    hits: usize,
    stats: StatsJson,
    tasks_total: usize,
    tasks_completed: usize,
    tasks_resumed: usize,
    nodes_this_run: u64,
    automorphisms: usize,
    automorphisms_complete: bool,
    elapsed_seconds: f64,
    version: &'a str,
}

fn jobs_from_env(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(j) = flag {
        return Ok(j.max(1));
    }
    match std::env::var("FD_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map(|j| j.max(1)).with_context(|| format!("bad FD_THREADS {v:?}")),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn cmd_search(args: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let spec = parse_group(&args.group)?;
    let mode = match args.mode {
        ModeArg::Pair => Mode::Pair,
        ModeArg::SelfDual => Mode::SelfDual,
    };
    let symmetry = match args.symmetry {
        SymmetryArg::None => Symmetry::None,
        SymmetryArg::Translation => Symmetry::Translation,
        SymmetryArg::Affine => Symmetry::Affine,
    };
    let mut config = SearchConfig::new(spec, args.size, mode)
        .with_symmetry(symmetry)
        .with_budget(args.budget)
        .with_prefix(args.prefix.clone());
    if let Some(d) = args.frontier_depth {
        config = config.with_frontier_depth(d);
    }
    if let Some(cap) = args.aut_cap {
        config.automorphism_cap = cap;
    }
    config.validate()?;
    let jobs = jobs_from_env(args.jobs)?;
    let options = RunOptions { jobs, checkpoint: args.checkpoint.clone(), stop_after_tasks: None };
    let report = run_search(config.clone(), &options)?;
    write_results(&args.out, &config, jobs, &report)?;

    let status = status_of(&report);
    writeln!(
        out,
        "group: {} size {} mode {} symmetry {}",
        config.spec,
        config.target_size,
        mode_name(mode),
        symmetry_name(symmetry)
    )?;
    writeln!(out, "status: {status}")?;
    writeln!(out, "tasks: {}/{} ({} resumed)", report.tasks_completed, report.tasks_total, report.tasks_resumed)?;
    let s = report.stats;
    writeln!(
        out,
        "nodes: {} visited, {} leaves tested, {} pruned by symmetry, {} pruned by screen",
        s.nodes_visited, s.leaves_tested, s.pruned_by_symmetry, s.pruned_by_screen
    )?;
    writeln!(out, "hits: {}", report.hits.len())?;
    let group = AbelianGroup::new(config.spec.clone());
    for cert in &report.hits {
        writeln!(out, "  S = {}  T = {}", set_text(&group, &cert.s), set_text(&group, &cert.t))?;
    }
    if !report.automorphisms_complete && (symmetry == Symmetry::Affine || mode == Mode::SelfDual) {
        writeln!(err, "warning: automorphism enumeration capped at {} maps", report.automorphisms)?;
    }
    if report.complete {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "search stopped by its budget; absence of further hits is not established")?;
        Ok(EXIT_BUDGET)
    }
}

fn status_of(report: &RunReport) -> &'static str {
    if report.complete {
        "complete"
    } else if report.budget_stopped {
        "budget_stopped"
    } else {
        "stopped"
    }
}

fn write_results(dir: &Path, config: &SearchConfig, jobs: usize, report: &RunReport) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("certificate-") && name.ends_with(".json") {
            fs::remove_file(&path)?;
        }
    }
    for (i, cert) in report.hits.iter().enumerate() {
        let path = dir.join(format!("certificate-{:04}.json", i + 1));
        fs::write(&path, CertificateFile::from_certificate(cert).to_json())?;
    }
    let cfg = ConfigJson::from_config(config);
    let stats = StatsFile {
        status: status_of(report),
        complete: report.complete,
        budget_stopped: report.budget_stopped,
        config_hash: cfg.hash(),
        config: cfg,
        budget: config.budget,
        jobs,
        hits: report.hits.len(),
        stats: report.stats.into(),
        tasks_total: report.tasks_total,
        tasks_completed: report.tasks_completed,
        tasks_resumed: report.tasks_resumed,
        nodes_this_run: report.nodes_this_run,
        automorphisms: report.automorphisms,
        automorphisms_complete: report.automorphisms_complete,
        elapsed_seconds: report.elapsed.as_secs_f64(),
        version: fdual_core::VERSION,
    };
    let mut text = serde_json::to_string_pretty(&stats)?;
    text.push('\n');
    fs::write(dir.join("stats.json"), text)?;
    Ok(())
}
