//! Command-line front end.
//!
//! Exit codes: `0` success, `1` usage or parameter error, `2` a theorem
//! hypothesis failed (the structured reason is still emitted).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::brieskorn::{self, BrieskornParams};
use crate::ellipsoid::{self, ekeland_lasry_certificate, EllipsoidParams};
use crate::error::{Error, Result};
use crate::exact_algebra::BigRational;
use crate::invariants::{assemble_invariant, ustilovsky_report, InvariantReport, Verdict};
use crate::line_bundle::{catalog, check_bundle_hypotheses, circle_bundle_spectrum, orbit_lower_bound};
use crate::orbit_model::{Action, Convention, OrbitSpectrum};
use crate::tower_complex::{build_tower, limit_contribution, tower_homology, Leg};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses an integer, `num/den`, or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut pos = 0;
    let negative = match chars[0] {
        '-' => {
            pos = 1;
            true
        }
        '+' => {
            pos = 1;
            false
        }
        _ => false,
    };
    let digits_from = |start: usize| -> (String, usize) {
        let mut end = start;
        while end < chars.len() && chars[end].is_ascii_digit() {
            end += 1;
        }
        (chars[start..end].iter().collect(), end)
    };

    let (whole, end) = digits_from(pos);
    if whole.is_empty() {
        return Err(err(end, "expected a digit"));
    }
    let whole_int: BigInt = whole.parse().expect("ascii digits");
    let value = if end == chars.len() {
        BigRational::from_integer(whole_int)
    } else if chars[end] == '/' {
        let (den, den_end) = digits_from(end + 1);
        if den.is_empty() {
            return Err(err(den_end, "expected a denominator"));
        }
        if den_end != chars.len() {
            return Err(err(den_end, "unexpected character"));
        }
        let den: BigInt = den.parse().expect("ascii digits");
        if den.is_zero() {
            return Err(err(end + 1, "zero denominator"));
        }
        BigRational::new(whole_int, den)
    } else if chars[end] == '.' {
        let (frac, frac_end) = digits_from(end + 1);
        if frac.is_empty() {
            return Err(err(frac_end, "expected a digit after the decimal point"));
        }
        if frac_end != chars.len() {
            return Err(err(frac_end, "unexpected character"));
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_int: BigInt = frac.parse().expect("ascii digits");
        BigRational::new(whole_int * &scale + frac_int, scale)
    } else {
        return Err(err(end, "unexpected character"));
    };
    Ok(if negative { -value } else { value })
}

/// Comma-separated rationals, e.g. `1,1.01,51/50`.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let q = parse_rational(part.trim()).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position: position + offset,
                message,
            },
            other => other,
        })?;
        out.push(q);
        offset += part.chars().count() + 1;
    }
    Ok(out)
}

fn rational_arg(text: &str) -> std::result::Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// A comma-separated list argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalList(pub Vec<BigRational>);

fn rational_list_arg(text: &str) -> std::result::Result<RationalList, String> {
    parse_rational_list(text).map(RationalList).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    MinusCz,
    PlusCz,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::MinusCz => Convention::MinusCz,
            ConventionArg::PlusCz => Convention::PlusCz,
        }
    }
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "shplus", version, about = "Positive S1-equivariant symplectic homology of lacunary Reeb spectra")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub output: OutputFormat,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Invariant of the Brieskorn manifold Σ(p,2,...,2).
    Brieskorn(BrieskornArgs),
    /// Invariant of an ellipsoid in R^2n.
    Ellipsoid(EllipsoidArgs),
    /// Orbit-count hypotheses for a circle bundle over a catalog base.
    Bundle(BundleArgs),
    /// Twin-tower complex of a single orbit.
    Tower(TowerArgs),
    /// Compare two Brieskorn invariants up to even shift.
    Distinguish(DistinguishArgs),
    /// Pinching certificate for hypersurfaces between two ellipsoids.
    #[command(name = "certify-el")]
    CertifyEl(CertifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BrieskornArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = rational_list_arg)]
    pub eps: RationalList,
    /// Action cutoff as a multiple of π.
    #[arg(long, value_parser = rational_arg)]
    pub cutoff: BigRational,
    #[arg(long, value_enum, default_value = "minus-cz")]
    pub convention: ConventionArg,
    /// Include the orbit spectrum in the report.
    #[arg(long)]
    pub with_spectrum: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EllipsoidArgs {
    #[arg(long, value_parser = rational_list_arg)]
    pub a: RationalList,
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    pub rsq: BigRational,
    /// Action cutoff as a multiple of π.
    #[arg(long, value_parser = rational_arg)]
    pub cutoff: BigRational,
    #[arg(long, value_enum, default_value = "minus-cz")]
    pub convention: ConventionArg,
    #[arg(long)]
    pub with_spectrum: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BundleArgs {
    /// `cp` or `grassmannian`.
    #[arg(long)]
    pub catalog: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = rational_arg)]
    pub r1sq: BigRational,
    #[arg(long, value_parser = rational_arg)]
    pub r2sq: BigRational,
    /// Assert that every periodic orbit has action at least R1^2.
    #[arg(long)]
    pub min_period_ok: bool,
    /// Assert that S_R1 bounds a Liouville domain.
    #[arg(long)]
    pub filling: bool,
    /// Also list the orbits of S_R1 below this plain action.
    #[arg(long, value_parser = rational_arg)]
    pub cutoff: Option<BigRational>,
}

#[derive(Debug, Clone, Args)]
pub struct TowerArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu: i64,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Treat the orbit as bad.
    #[arg(long)]
    pub bad: bool,
    #[arg(long = "truncation", short = 'N', default_value_t = 2)]
    pub truncation: u32,
}

#[derive(Debug, Clone, Args)]
pub struct DistinguishArgs {
    #[arg(long)]
    pub p1: u32,
    #[arg(long)]
    pub p2: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = rational_list_arg)]
    pub eps: RationalList,
    #[arg(long, value_parser = rational_arg)]
    pub cutoff: BigRational,
    #[arg(long, default_value_t = 40)]
    pub max_shift: i64,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long, value_parser = rational_list_arg)]
    pub a: RationalList,
    #[arg(long, value_parser = rational_arg)]
    pub r1sq: BigRational,
    #[arg(long, value_parser = rational_arg)]
    pub r2sq: BigRational,
    #[arg(long)]
    pub assume_tangency: bool,
    #[arg(long)]
    pub assume_nondegenerate: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Brieskorn(_) => "brieskorn",
            Command::Ellipsoid(_) => "ellipsoid",
            Command::Bundle(_) => "bundle",
            Command::Tower(_) => "tower",
            Command::Distinguish(_) => "distinguish",
            Command::CertifyEl(_) => "certify-el",
        }
    }
}

pub fn parse_args<I, T>(args: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(args)
}

/// What a run produced: exit code plus the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A successful computation: the JSON payload, a table rendering, and whether
/// a hypothesis failed along the way (exit 2 with a full report).
struct Rendered {
    report: Value,
    table: String,
    hypothesis_failed: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn q(x: &BigRational) -> Value {
    json!({"num": x.numer().to_string(), "den": x.denom().to_string()})
}

fn invariant_table(r: &InvariantReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "manifold      {}", r.manifold_label);
    let _ = writeln!(t, "cutoff        {}", r.action_cutoff);
    let _ = writeln!(t, "window        {}", r.degree_window);
    let _ = writeln!(t, "parity        {:?}", r.parity);
    let _ = writeln!(t, "orbits        {} good, {} bad", r.good_orbits, r.bad_orbits);
    let _ = writeln!(t, "total rank    {}", r.module.total_rank());
    let _ = writeln!(t, "degree  rank");
    for (d, rank) in r.module.ranks() {
        let _ = writeln!(t, "{d:>6}  {rank}");
    }
    for note in &r.notes {
        let _ = writeln!(t, "note: {note}");
    }
    t
}

fn spectrum_table(s: &OrbitSpectrum) -> String {
    let mut t = String::from("orbit        N  action            index\n");
    for r in s.records() {
        let index = r
            .cz_index
            .or(r.morse_index)
            .map_or_else(|| "-".to_string(), |i| i.to_string());
        let _ = writeln!(
            t,
            "{:<10} {:>3}  {:<16}  {}{}",
            r.base_id,
            r.iterate,
            r.action.to_string(),
            index,
            if r.is_good { "" } else { " (bad)" }
        );
    }
    t
}

fn invariant_output(spectrum: OrbitSpectrum, convention: Convention, with_spectrum: bool) -> Result<Rendered> {
    let report = assemble_invariant(&spectrum, convention)?;
    let mut value = json!({ "invariant": to_value(&report) });
    let mut table = invariant_table(&report);
    if with_spectrum {
        value["spectrum"] = to_value(&spectrum);
        table.push('\n');
        table.push_str(&spectrum_table(&spectrum));
    }
    Ok(Rendered {
        report: value,
        table,
        hypothesis_failed: false,
    })
}

fn run_command(command: &Command) -> Result<Rendered> {
    match command {
        Command::Brieskorn(args) => {
            let params = BrieskornParams::new(args.p, args.m, args.eps.0.clone())?;
            let spectrum = brieskorn::enumerate_orbits(&params, &Action::pi(args.cutoff.clone()))?;
            invariant_output(spectrum, args.convention.into(), args.with_spectrum)
        }
        Command::Ellipsoid(args) => {
            let params = EllipsoidParams::new(args.a.0.clone(), args.rsq.clone())?;
            let spectrum = ellipsoid::enumerate_orbits(&params, &Action::pi(args.cutoff.clone()))?;
            invariant_output(spectrum, args.convention.into(), args.with_spectrum)
        }
        Command::Bundle(args) => {
            let base = catalog(&args.catalog, args.n)?;
            let report = check_bundle_hypotheses(&base, &args.r1sq, &args.r2sq, args.min_period_ok, args.filling);
            let mut value = json!({
                "base": to_value(&base),
                "betti_sum": orbit_lower_bound(&base),
                "hypotheses": to_value(&report),
            });
            let mut table = String::new();
            let _ = writeln!(table, "base            {}", base.label);
            let _ = writeln!(table, "morse indices   {:?}", base.morse_indices);
            let _ = writeln!(table, "betti           {:?}", base.betti);
            let _ = writeln!(table, "pinching        {}", report.pinching_ok);
            let _ = writeln!(table, "lacunary        {}", report.lacunary_ok);
            let _ = writeln!(table, "min period      {}", report.min_period_ok);
            let _ = writeln!(table, "filling         {}", report.filling_asserted);
            let _ = writeln!(table, "lower bound     {}", report.lower_bound);
            for f in &report.failures {
                let _ = writeln!(table, "failed: {f}");
            }
            if let Some(cutoff) = &args.cutoff {
                let spectrum = circle_bundle_spectrum(&base, &args.r1sq, &Action::plain(cutoff.clone()))?;
                value["spectrum"] = to_value(&spectrum);
                table.push('\n');
                table.push_str(&spectrum_table(&spectrum));
            }
            Ok(Rendered {
                report: value,
                table,
                hypothesis_failed: !report.all_ok(),
            })
        }
        Command::Tower(args) => {
            let tower = build_tower(args.mu, args.k, !args.bad, args.truncation)?;
            let homology = tower_homology(&tower)?;
            let limit = limit_contribution(args.mu, args.k, !args.bad)?;
            let generators: Vec<Value> = tower
                .generators
                .iter()
                .map(|g| {
                    json!({
                        "u_power": g.u_power,
                        "leg": if g.leg == Leg::Max { "max" } else { "min" },
                        "degree": g.degree,
                        "boundary": q(&boundary_coefficient(&tower.complex.boundary(g.degree))),
                    })
                })
                .collect();
            let pairs = |h: &std::collections::BTreeMap<i64, usize>| -> Vec<Value> {
                h.iter().map(|(d, r)| json!({"degree": d, "rank": r})).collect()
            };
            let mut table = String::new();
            let _ = writeln!(
                table,
                "mu = {}, k = {}, {}, N = {}",
                args.mu,
                args.k,
                if args.bad { "bad" } else { "good" },
                args.truncation
            );
            let _ = writeln!(table, "gen        degree  boundary");
            for g in tower.generators.iter().rev() {
                let _ = writeln!(
                    table,
                    "u^{} {:<4} {:>7}  {}",
                    g.u_power,
                    if g.leg == Leg::Max { "Max" } else { "min" },
                    g.degree,
                    boundary_coefficient(&tower.complex.boundary(g.degree))
                );
            }
            let _ = writeln!(table, "homology   {homology:?}");
            let _ = writeln!(table, "limit      {limit:?}");
            Ok(Rendered {
                report: json!({
                    "cz_index": args.mu,
                    "multiplicity": args.k,
                    "good": !args.bad,
                    "truncation": args.truncation,
                    "generators": generators,
                    "homology": pairs(&homology),
                    "limit": pairs(&limit),
                }),
                table,
                hypothesis_failed: false,
            })
        }
        Command::Distinguish(args) => {
            let cutoff = Action::pi(args.cutoff.clone());
            let report = ustilovsky_report(args.p1, args.p2, args.m, &args.eps.0, &cutoff, args.max_shift)?;
            let c = &report.comparison;
            let (verdict, shift, witness) = match &c.verdict {
                Verdict::EqualUpToShift { shift } => ("EqualUpToShift", json!(shift), Value::Null),
                Verdict::Distinct {
                    witness_degree,
                    witness_shift,
                    ranks,
                } => (
                    "Distinct",
                    Value::Null,
                    json!({"degree": witness_degree, "shift": witness_shift, "ranks": [ranks.0, ranks.1]}),
                ),
                Verdict::Inconclusive { .. } => ("Inconclusive", Value::Null, Value::Null),
            };
            let eps: Vec<Value> = args.eps.0.iter().map(q).collect();
            let value = json!({
                "verdict": verdict,
                "shift": shift,
                "witness": witness,
                "window": to_value(&c.window),
                "cutoffs": {
                    "action": to_value(&cutoff),
                    "degree_windows": [to_value(&report.first.degree_window), to_value(&report.second.degree_window)],
                    "max_shift": c.max_shift,
                },
                "parameters": {"p1": args.p1, "p2": args.p2, "m": args.m, "eps": eps},
                "hypothesis_flags": {
                    "genericity_checked": true,
                    "lacunary": [report.first.lacunarity_ok, report.second.lacunarity_ok],
                    "parity": [to_value(&report.first.parity), to_value(&report.second.parity)],
                    "p1_is_pm1_mod_8": matches!(args.p1 % 8, 1 | 7),
                    "p2_is_pm1_mod_8": matches!(args.p2 % 8, 1 | 7),
                },
                "comparison": to_value(c),
                "invariants": [to_value(&report.first), to_value(&report.second)],
                "caveat": report.caveat,
            });
            let mut table = String::new();
            let _ = writeln!(table, "verdict   {verdict}");
            match &c.verdict {
                Verdict::EqualUpToShift { shift } => {
                    let _ = writeln!(table, "shift     {shift}");
                }
                Verdict::Distinct {
                    witness_degree,
                    witness_shift,
                    ranks,
                } => {
                    let _ = writeln!(
                        table,
                        "witness   degree {witness_degree} at shift {witness_shift}: ranks {} vs {}",
                        ranks.0, ranks.1
                    );
                }
                Verdict::Inconclusive { reason } => {
                    let _ = writeln!(table, "reason    {reason}");
                }
            }
            let _ = writeln!(table, "caveat    {}", report.caveat);
            table.push('\n');
            table.push_str(&invariant_table(&report.first));
            table.push('\n');
            table.push_str(&invariant_table(&report.second));
            Ok(Rendered {
                report: value,
                table,
                hypothesis_failed: false,
            })
        }
        Command::CertifyEl(args) => {
            let cert = ekeland_lasry_certificate(&args.a.0, &args.r1sq, &args.r2sq)?
                .with_assertions(args.assume_tangency, args.assume_nondegenerate);
            let mut table = String::new();
            let _ = writeln!(table, "n                 {}", cert.n);
            let _ = writeln!(table, "window            ({}, {})", cert.window_lo, cert.window_hi);
            let _ = writeln!(table, "chosen T          {}", cert.chosen_t);
            let actions: Vec<String> = cert.generator_actions.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(table, "generators        {}", actions.join(", "));
            let _ = writeln!(table, "min period bound  {}", cert.min_period_bound);
            let _ = writeln!(table, "distinct orbits   {}", cert.distinct_count);
            for c in &cert.checks {
                let _ = writeln!(table, "  [{}] {}: {} {} {}", if c.holds { "ok" } else { "FAIL" }, c.label, c.lhs, c.relation, c.rhs);
            }
            let _ = writeln!(table, "tangency asserted       {}", cert.tangency_asserted);
            let _ = writeln!(table, "nondegeneracy asserted  {}", cert.nondegeneracy_asserted);
            Ok(Rendered {
                report: json!({ "certificate": to_value(&cert) }),
                table,
                hypothesis_failed: false,
            })
        }
    }
}

fn boundary_coefficient(m: &crate::exact_algebra::RationalMatrix) -> BigRational {
    if m.rows() == 0 || m.cols() == 0 {
        BigRational::zero()
    } else {
        m.get(0, 0).clone()
    }
}

fn envelope(command: &str, status: &str, body: (&str, Value)) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
    });
    v[body.0] = body.1;
    v
}

/// Canonical JSON: keys sorted, two-space indent, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs a parsed configuration. Writes `--out` files itself; everything else is returned.
pub fn run(config: &RunConfig) -> Outcome {
    let name = config.command.name();
    let (exit_code, body) = match run_command(&config.command) {
        Ok(rendered) => {
            let status = if rendered.hypothesis_failed { "hypothesis_failed" } else { "ok" };
            let code = if rendered.hypothesis_failed { 2 } else { 0 };
            let text = match config.output {
                OutputFormat::Json => canonical_json(&envelope(name, status, ("report", rendered.report))),
                OutputFormat::Table => rendered.table,
            };
            (code, text)
        }
        Err(e) if e.is_hypothesis_failure() => {
            let error = json!({"kind": e.kind(), "message": e.to_string()});
            let text = match config.output {
                OutputFormat::Json => canonical_json(&envelope(name, "hypothesis_failed", ("error", error))),
                OutputFormat::Table => format!("hypothesis failed ({}): {e}\n", e.kind()),
            };
            (2, text)
        }
        Err(e) => {
            return Outcome {
                exit_code: 1,
                stdout: String::new(),
                stderr: format!("error ({}): {e}\n", e.kind()),
            }
        }
    };
    match &config.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome {
                exit_code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                exit_code: 1,
                stdout: String::new(),
                stderr: format!("cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            exit_code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let rendered = e.render().to_string();
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            Outcome {
                exit_code: if informational { 0 } else { 1 },
                stdout: if informational { rendered.clone() } else { String::new() },
                stderr: if informational { String::new() } else { rendered },
            }
        }
    }
}
