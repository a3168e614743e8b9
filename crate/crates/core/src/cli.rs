//! Command-line front end. Reports go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 bad input or violated precondition, 3 a failed internal certificate.

use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::actions::{self, ActionAnalysis, ActionDescription, ActionError, Verdict};
use crate::blowup::{BlowupError, BlowupReport, WeightedBlowupSpec, blowup_report};
use crate::cobordism::{
    CobordismError, CobordismReport, CobordismSetup, QuotientOptions, cobordism_report,
};
use crate::lattice::{ConeJson, Int};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "toric-bordism", version, about = "Toric cobordisms, weighted blow-ups and C*-action weights")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Loci fans, quotient fans, flip type and the bordism fan of v = (−q_neg, 0^zeros, q_pos).
    Cobordism(SetupArgs),
    /// Only the bordism fan: Λ±, Σ̃, its validation and the inner fixed-locus dimension.
    Bordism(SetupArgs),
    /// Weighted star subdivision along ω = (0^d, q).
    Blowup(BlowupArgs),
    /// Fixed components, order graph and flip verdict for an action-description JSON file ("-" for stdin).
    Analyze(AnalyzeArgs),
    /// The H_k action on the quadric Q^{2n−1}.
    ExampleQuadric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// The H_n action on the Grassmannian of lines on Q^{2n−1}.
    ExampleOg {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct SetupArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub q_neg: Vec<Int>,
    #[arg(long, default_value_t = 0)]
    pub zeros: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q_pos: Vec<Int>,
    /// Accept block sizes outside 1 < d1 <= d2 < n+1; the report marks them.
    #[arg(long)]
    pub unchecked: bool,
    /// Use the Hermite-normal-form basis of the quotient lattice.
    #[arg(long)]
    pub canonical: bool,
    /// Extra weighted sample points for the subdivision certificates.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub omega: Vec<Int>,
    /// Allow d < 2.
    #[arg(long)]
    pub legacy: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Assert ρ_X = 1 (overrides the file).
    #[arg(long)]
    pub picard_rank_one: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn precondition(message: impl ToString) -> Self {
        Self { code: EXIT_PRECONDITION, message: message.to_string() }
    }
}

impl From<CobordismError> for Failure {
    fn from(e: CobordismError) -> Self {
        Self { code: if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_INTERNAL }, message: e.to_string() }
    }
}

impl From<BlowupError> for Failure {
    fn from(e: BlowupError) -> Self {
        Self { code: if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_INTERNAL }, message: e.to_string() }
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Self {
        Self { code: if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_INTERNAL }, message: e.to_string() }
    }
}

/// A rendered report plus the certificate failures that should turn the exit code into 3.
pub struct Output {
    pub json: String,
    pub text: String,
    pub certificate_failures: Vec<String>,
}

fn output<T: Serialize>(report: &T, text: String, certificate_failures: Vec<String>) -> Result<Output, Failure> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Failure { code: EXIT_INTERNAL, message: format!("serialization failed: {e}") })?;
    Ok(Output { json, text, certificate_failures })
}

pub fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Cobordism(a) => {
            let r = cobordism(a)?;
            output(&r, cobordism_text(&r), cobordism_failures(&r))
        }
        Command::Bordism(a) => {
            let r = BordismView::from(cobordism(a)?);
            let failures = [("Λ₊", r.lambda_plus_valid), ("Λ₋", r.lambda_minus_valid), ("Σ̃", r.sigma_tilde_valid)]
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(w, _)| format!("{w} failed validation"))
                .collect();
            output(&r, bordism_text(&r), failures)
        }
        Command::Blowup(a) => {
            let spec =
                if a.legacy { WeightedBlowupSpec::legacy(a.d, &a.omega)? } else { WeightedBlowupSpec::new(a.d, &a.omega)? };
            let r = blowup_report(&spec)?;
            let mut failures = Vec::new();
            if !r.subdivision_valid {
                failures.push("star subdivision does not cover the orthant".into());
            }
            if !r.fan_valid {
                failures.push("subdivided fan failed validation".into());
            }
            output(&r, blowup_text(&r), failures)
        }
        Command::Analyze(a) => {
            let text = read_input(&a.file)?;
            let d = ActionDescription::parse(&text).map_err(Failure::precondition)?;
            let (action, variety) = d.build()?;
            analysis_output(&actions::analyze(&action, &variety, d.picard_rank_one || a.picard_rank_one)?)
        }
        Command::ExampleQuadric { n, k } => {
            let (action, variety) = actions::quadric_example(*n, *k)?;
            analysis_output(&actions::analyze(&action, &variety, true)?)
        }
        Command::ExampleOg { n } => {
            let (action, variety) = actions::og_example(*n)?;
            analysis_output(&actions::analyze(&action, &variety, true)?)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::precondition)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn cobordism(a: &SetupArgs) -> Result<CobordismReport, Failure> {
    let setup = if a.unchecked {
        CobordismSetup::new_unchecked(&a.q_neg, a.zeros, &a.q_pos)?
    } else {
        CobordismSetup::new(&a.q_neg, a.zeros, &a.q_pos)?
    };
    Ok(cobordism_report(&setup, &QuotientOptions { canonical_basis: a.canonical, extra_samples: a.samples })?)
}

fn cobordism_failures(r: &CobordismReport) -> Vec<String> {
    let v = &r.verification;
    [
        ("π(Δ₊) does not subdivide δ̄", v.sink_fan_subdivides),
        ("π(Δ₋) does not subdivide δ̄", v.source_fan_subdivides),
        ("Λ₊ failed validation", v.lambda_plus_valid),
        ("Λ₋ failed validation", v.lambda_minus_valid),
        ("Σ̃ failed validation", v.sigma_tilde_valid),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(m, _)| (*m).to_string())
    .collect()
}

#[derive(Serialize)]
struct BordismView {
    setup: CobordismSetup,
    lambda_plus_maximal: Vec<ConeJson>,
    lambda_minus_maximal: Vec<ConeJson>,
    sigma_tilde_maximal: Vec<ConeJson>,
    lambda_plus_valid: bool,
    lambda_minus_valid: bool,
    sigma_tilde_valid: bool,
    sigma_tilde_pairs_checked: usize,
    inner_dim: usize,
}

impl From<CobordismReport> for BordismView {
    fn from(r: CobordismReport) -> Self {
        Self {
            setup: r.setup,
            lambda_plus_maximal: r.lambda_plus_maximal,
            lambda_minus_maximal: r.lambda_minus_maximal,
            sigma_tilde_maximal: r.sigma_tilde_maximal,
            lambda_plus_valid: r.verification.lambda_plus_valid,
            lambda_minus_valid: r.verification.lambda_minus_valid,
            sigma_tilde_valid: r.verification.sigma_tilde_valid,
            sigma_tilde_pairs_checked: r.verification.sigma_tilde_pairs_checked,
            inner_dim: r.inner_dim,
        }
    }
}

fn analysis_output(a: &ActionAnalysis) -> Result<Output, Failure> {
    let mut failures: Vec<String> = a.am_fm.failures.iter().map(|f| format!("AM-FM identity fails on {f}")).collect();
    if a.report.components.iter().any(|c| !c.is_empty() && c.normal.is_none()) {
        failures.push("a component has no normal weights".into());
    }
    output(a, analysis_text(a), failures)
}

fn cone_text(c: &ConeJson) -> String {
    let gens: Vec<String> = c
        .generators
        .iter()
        .map(|g| format!("({})", g.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("⟨{}⟩", gens.join(","))
}

fn cones_text(cs: &[ConeJson]) -> String {
    cs.iter().map(cone_text).collect::<Vec<_>>().join(" ")
}

fn cobordism_text(r: &CobordismReport) -> String {
    let mut s = String::new();
    let quot = |cs: &[crate::cobordism::QuotientConeJson]| {
        cs.iter()
            .map(|c| format!("{} index {}", cone_text(&ConeJson { generators: c.generators.clone() }), c.index))
            .collect::<Vec<_>>()
            .join("; ")
    };
    push(&mut s, format!("setup          {}", r.setup));
    if !r.setup.within_hypotheses() {
        push(&mut s, "               (outside 1 < d1 <= d2 < n+1)".into());
    }
    push(&mut s, format!("Δ₊ maximal     {}", cones_text(&r.delta_plus_maximal)));
    push(&mut s, format!("Δ₋ maximal     {}", cones_text(&r.delta_minus_maximal)));
    push(&mut s, format!("δ̄              {}", cone_text(&r.delta_bar)));
    push(&mut s, format!("π(Δ₊)          {}", quot(&r.sink_cones)));
    push(&mut s, format!("π(Δ₋)          {}", quot(&r.source_cones)));
    let c = &r.classification;
    push(
        &mut s,
        format!(
            "flip           {:?} (quotients smooth: sink {}, source {}; characterizations agree: {})",
            c.kind, c.smooth_minus, c.smooth_plus, c.characterizations_agree
        ),
    );
    push(&mut s, format!("Λ₊ maximal     {}", cones_text(&r.lambda_plus_maximal)));
    push(&mut s, format!("Λ₋ maximal     {}", cones_text(&r.lambda_minus_maximal)));
    push(&mut s, format!("Σ̃ maximal      {}", r.sigma_tilde_maximal.len()));
    let v = &r.verification;
    push(
        &mut s,
        format!(
            "certificates   subdivisions {}/{} ({} samples), Λ₊ {}, Λ₋ {}, Σ̃ {} ({} pairs)",
            v.sink_fan_subdivides,
            v.source_fan_subdivides,
            v.samples_checked,
            v.lambda_plus_valid,
            v.lambda_minus_valid,
            v.sigma_tilde_valid,
            v.sigma_tilde_pairs_checked
        ),
    );
    push(&mut s, format!("inner dim      {}", r.inner_dim));
    s
}

fn bordism_text(r: &BordismView) -> String {
    let mut s = String::new();
    push(&mut s, format!("setup          {}", r.setup));
    push(&mut s, format!("Λ₊ maximal     {}", cones_text(&r.lambda_plus_maximal)));
    push(&mut s, format!("Λ₋ maximal     {}", cones_text(&r.lambda_minus_maximal)));
    push(&mut s, format!("Σ̃ maximal      {}", cones_text(&r.sigma_tilde_maximal)));
    push(
        &mut s,
        format!(
            "certificates   Λ₊ {}, Λ₋ {}, Σ̃ {} ({} pairs)",
            r.lambda_plus_valid, r.lambda_minus_valid, r.sigma_tilde_valid, r.sigma_tilde_pairs_checked
        ),
    );
    push(&mut s, format!("inner dim      {}", r.inner_dim));
    s
}

fn blowup_text(r: &BlowupReport) -> String {
    let mut s = String::new();
    for c in &r.charts {
        let cone = cone_text(&ConeJson { generators: c.generators.clone() });
        push(&mut s, format!("chart omitting e_{}  {cone} index {}", c.omitted, c.index));
    }
    let f = &r.exceptional_fiber;
    let ws: Vec<String> = f.weights.iter().map(ToString::to_string).collect();
    push(&mut s, format!("exceptional fiber   P({})", ws.join(",")));
    push(&mut s, format!("all charts smooth   {}", r.all_charts_smooth));
    push(&mut s, format!("certificates        subdivision {}, fan {}", r.subdivision_valid, r.fan_valid));
    if !r.within_hypotheses {
        push(&mut s, "legacy              d < 2".into());
    }
    s
}

fn analysis_text(a: &ActionAnalysis) -> String {
    let mut s = String::new();
    let r = &a.report;
    push(&mut s, format!("variety        {}  weights {:?}", r.variety.name(), r.action.weights()));
    for c in &r.components {
        let weights = match &c.normal {
            Some(n) => format!("N+ {:?} N- {:?} equalized {}", n.positive, n.negative, n.equalized),
            None => "no normal weights".into(),
        };
        push(&mut s, format!("{:<14} μ {:>3}  dim {:>2}  {:?}  {weights}", c.label, c.mu, c.dimension, c.kind));
    }
    push(&mut s, format!("criticality    {}", r.criticality));
    push(&mut s, format!("bandwidth      {}", r.bandwidth));
    push(&mut s, format!("sink, source   {}, {}", r.sink, r.source));
    for e in &a.order_graph.edges {
        push(&mut s, format!("edge           {} -> {} ({} curves)", e.from, e.to, e.witnesses.len()));
    }
    push(
        &mut s,
        format!("AM-FM          {} curves ({} conics), consistent {}", a.am_fm.curves_checked, a.am_fm.conics, a.am_fm.all_consistent),
    );
    let h = &a.verdict.hypotheses;
    let verdict = match &a.verdict.verdict {
        Verdict::NotApplicable(reason) => format!("NotApplicable: {reason}"),
        v => format!("{v:?}"),
    };
    push(&mut s, format!("verdict        {verdict}"));
    push(
        &mut s,
        format!(
            "hypotheses     criticality_two {}, bordism_after_blowup {}, picard_rank_one_assumed {}, order_condition {}",
            h.criticality_two, h.bordism_after_blowup, h.picard_rank_one_assumed, h.order_condition
        ),
    );
    s
}

fn push(s: &mut String, line: String) {
    s.push_str(&line);
    s.push('\n');
}

/// Runs a parsed command, writing the report and diagnostics; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(&cli.command) {
        Ok(o) => {
            let body = match cli.format {
                Format::Json => o.json + "\n",
                Format::Text => o.text,
            };
            // A closed stdout is not worth a panic.
            let _ = out.write_all(body.as_bytes());
            if o.certificate_failures.is_empty() {
                return EXIT_OK;
            }
            for f in &o.certificate_failures {
                let _ = writeln!(err, "certificate failed: {f}");
            }
            EXIT_INTERNAL
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PRECONDITION } else { EXIT_OK };
        }
    };
    run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock())
}
