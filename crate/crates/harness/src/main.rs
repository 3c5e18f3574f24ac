use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cstar_jensen::jensen_core::IDENTITY_IDS;
use cstar_jensen_harness::probes::{l2_example, scenario_kernel_probe};
use cstar_jensen_harness::{
    emit_report, load_scenario, run_decomposition, run_suite, CampaignReport, HarnessError, Overrides, Scenario,
    SCHEMA_HELP,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cstar-jensen", version, about = "Verify orthogonally a-Jensen mappings on Hilbert C*-modules")]
#[command(after_help = SCHEMA_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every selected check of a scenario
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decompose one mapping as A(x) + B(x, x) + f(0) and check the parts
    Decompose {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        mapping: String,
        #[arg(long)]
        report: PathBuf,
    },
    /// Validate the truncated interleaving pair on C^n
    ExampleL2 {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: usize,
    },
    /// Solve for a-biadditive kernels of the scenario coefficient
    SolveKernel {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Print every identity id
    ListChecks,
}

fn fail_usage(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    eprintln!("\n{SCHEMA_HELP}");
    ExitCode::from(EXIT_USAGE)
}

fn load(path: &Path, overrides: Overrides) -> Result<Scenario, HarnessError> {
    load_scenario(path, &overrides.with_env_seed()?)
}

fn summarize(report: &CampaignReport) {
    for l in &report.results {
        for r in &l.residuals {
            let status = if r.pass { "pass" } else { "FAIL" };
            println!("{status}  {:<24} {:<26} {:>11.3e}  n={}", l.label, r.id, r.max_residual, r.samples);
        }
    }
    println!(
        "overall: {}  (seed {}, digest {})",
        if report.overall_pass { "pass" } else { "FAIL" },
        report.seed,
        &report.scenario_digest[..16]
    );
}

fn finish(report: &CampaignReport, out: Option<&PathBuf>) -> ExitCode {
    summarize(report);
    if let Some(path) = out {
        if let Err(e) = emit_report(report, path) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            if code == EXIT_USAGE {
                eprintln!("\n{SCHEMA_HELP}");
            }
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify {
            scenario,
            seed,
            samples,
            tol,
            report,
        } => {
            let s = match load(&scenario, Overrides { seed, samples, tol, env_seed: None }) {
                Ok(s) => s,
                Err(e) => return fail_usage(e),
            };
            finish(&run_suite(&s), report.as_ref())
        }
        Command::Decompose {
            scenario,
            mapping,
            report,
        } => {
            let s = match load(&scenario, Overrides::default()) {
                Ok(s) => s,
                Err(e) => return fail_usage(e),
            };
            if s.pair.is_none() {
                return fail_usage("decompose needs a scenario with an additive pair");
            }
            match run_decomposition(&s, &mapping) {
                Some(r) => {
                    if let Some(f) = s.mapping(&mapping) {
                        let f0 = f.eval(&cstar_jensen::hilbert_module::Vector::zero(f.domain()));
                        println!("f(0) = {}", serde_json::to_string(&f0).unwrap_or_default());
                    }
                    finish(&r, Some(&report))
                }
                None => fail_usage(format!("no mapping labelled `{mapping}`")),
            }
        }
        Command::ExampleL2 { p, n } => match l2_example(p, n, 64, 0) {
            Ok(summary) => {
                println!("interleave pair p = {p}, n = {n}");
                println!("  orthogonality residual   {:.3e}", summary.orthogonality_residual);
                println!("  balance residual         {:.3e}", summary.balance_residual);
                println!("  pair image defect        {:.3e}", summary.pair_image_defect);
                println!("  orthogonality display    {:.3e}", summary.orthogonality_display);
                if summary.pass() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_FAIL)
                }
            }
            Err(e) => fail_usage(e),
        },
        Command::SolveKernel { scenario } => {
            let s = match load(&scenario, Overrides::default()) {
                Ok(s) => s,
                Err(e) => return fail_usage(e),
            };
            match scenario_kernel_probe(&s) {
                Ok(k) => {
                    println!("{}", serde_json::to_string_pretty(&k).expect("summary serializes"));
                    if k.pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_FAIL)
                    }
                }
                Err(e) => fail_usage(e),
            }
        }
        Command::ListChecks => {
            for id in IDENTITY_IDS {
                println!("{id}");
            }
            ExitCode::SUCCESS
        }
    }
}
