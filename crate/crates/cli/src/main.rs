mod exec;
mod job;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use job::{ClassifySpec, ConstructSpec, JobFile, JobSpec, Options, TaskSpec, VerifySpec};

#[derive(Parser)]
#[command(name = "charsub", version, about = "Characterized subgroups: membership, radicals, constructions, classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Last index inspected when no exact rule decides membership.
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Largest finite group or residue state space enumerated.
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Target {
    #[arg(long, short)]
    group: Option<String>,
    #[arg(long, short)]
    sequence: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a JSON job file.
    Run { jobfile: PathBuf },
    /// Decide x ∈ s_v(X) for each point; with no points on a finite group,
    /// compute all of s_v(X).
    Member {
        #[command(flatten)]
        target: Target,
        points: Vec<String>,
    },
    /// The radical n_v(X), the joint kernel of every occurring character.
    Radical {
        #[command(flatten)]
        target: Target,
    },
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[command(flatten)]
        target: Target,
        /// Point of T for claim-lift.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        m: Option<u64>,
        /// Levels of a subgroup chain, e.g. 12,4,2,1.
        #[arg(long, value_delimiter = ',')]
        chain: Option<Vec<u64>>,
        /// Generators of F for quotient-lift; the sequence lives on X/F.
        #[arg(long = "subgroup")]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 100)]
        check_bound: i64,
    },
    Classify {
        #[arg(value_enum)]
        kind: ClassifyKind,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        rank: u32,
    },
    /// Run a property suite, or all of them.
    Verify {
        suite: String,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long)]
        cases: Option<u64>,
        #[arg(long)]
        bound: Option<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    ClaimLift,
    KCharacterize,
    QuotientLift,
    DenseEnumeration,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyKind {
    TCharacterization,
    Autocharacterization,
    AutocharWitness,
    Pigeonhole,
    Minap,
}

fn single(target: Target, task: TaskSpec) -> JobFile {
    JobFile {
        tasks: vec![JobSpec { group: target.group, sequence: target.sequence, task, horizon: None, cap: None }],
        ..JobFile::default()
    }
}

fn build(command: Command) -> Result<JobFile, job::JobError> {
    Ok(match command {
        Command::Run { jobfile } => JobFile::load(&jobfile)?,
        Command::Member { target, points } if points.is_empty() => single(target, TaskSpec::SVFinite),
        Command::Member { target, points } => single(target, TaskSpec::Member(points)),
        Command::Radical { target } => single(target, TaskSpec::Radical),
        Command::Construct { kind, target, a, m, chain, subgroup, check_bound } => {
            let spec = match kind {
                ConstructKind::ClaimLift => ConstructSpec::ClaimLift { a: a.unwrap_or_default(), m: m.unwrap_or(0) },
                ConstructKind::KCharacterize => ConstructSpec::KCharacterize { m, chain, check_bound },
                ConstructKind::QuotientLift => ConstructSpec::QuotientLift { subgroup },
                ConstructKind::DenseEnumeration => ConstructSpec::DenseEnumeration,
            };
            single(target, TaskSpec::Construct(spec))
        }
        Command::Classify { kind, target, rank } => {
            let spec = match kind {
                ClassifyKind::TCharacterization => ClassifySpec::TCharacterization,
                ClassifyKind::Autocharacterization => ClassifySpec::Autocharacterization,
                ClassifyKind::AutocharWitness => ClassifySpec::AutocharWitness,
                ClassifyKind::Pigeonhole => ClassifySpec::Pigeonhole,
                ClassifyKind::Minap => ClassifySpec::Minap { rank },
            };
            single(target, TaskSpec::Classify(spec))
        }
        Command::Verify { suite, max_order, cases, bound } => {
            let names: Vec<String> = if suite == "all" {
                charsub::verify::SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                vec![suite]
            };
            let tasks = names
                .into_iter()
                .map(|suite| JobSpec {
                    group: None,
                    sequence: None,
                    task: TaskSpec::Verify(VerifySpec { suite, seed: None, max_order, cases, bound }),
                    horizon: None,
                    cap: None,
                })
                .collect();
            JobFile { tasks, ..JobFile::default() }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let d = Options::default();
    let base = Options {
        horizon: cli.global.horizon.unwrap_or(d.horizon),
        cap: cli.global.cap.unwrap_or(d.cap),
        seed: cli.global.seed.unwrap_or(d.seed),
    };
    let job = match build(cli.command) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = report::run(&job, base);
    match cli.global.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Text => print!("{}", report::render_text(&report)),
    }
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
