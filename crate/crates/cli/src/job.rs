//! Job files and their type-checked form.
//!
//! ```json
//! { "horizon": 1000, "cap": 1048576, "seed": 0,
//!   "tasks": [ { "group": "T", "sequence": "factorial", "task": { "member": ["1/6", "1/7"] } },
//!              { "group": "Z(4)", "sequence": "periodic([];[2])", "task": "s_v_finite" } ] }
//! ```

use std::fmt;
use std::path::Path;

use charsub::construct::Quotient;
use charsub::expr::{parse_element, parse_group, parse_rational, parse_sequence};
use charsub::groups::circle::{CirclePoint, CircleValue};
use charsub::groups::finite::{FiniteAbelian, FiniteSubgroup};
use charsub::groups::{Element, GroupDescriptor};
use charsub::sequences::CharSequence;
use charsub::verify::{Sizes, SUITES};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum JobError {
    Io(String, std::io::Error),
    /// JSON syntax or schema error, with 1-based position.
    Schema { file: String, line: usize, column: usize, message: String },
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JobError::Io(file, e) => write!(f, "{file}: {e}"),
            JobError::Schema { file, line, column, message } => write!(f, "{file}:{line}:{column}: {message}"),
        }
    }
}

impl std::error::Error for JobError {}

/// Run-wide options; per-task values override them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    pub horizon: u64,
    pub cap: u64,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        let l = charsub::membership::Limits::default();
        Options { horizon: l.horizon, cap: l.cap, seed: 0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub cap: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tasks: Vec<JobSpec>,
}

impl JobFile {
    pub fn load(path: &Path) -> Result<Self, JobError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| JobError::Io(name.clone(), e))?;
        Self::parse(&name, &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, JobError> {
        serde_json::from_str(text).map_err(|e| JobError::Schema {
            file: name.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// File options layered over the command-line ones.
    pub fn options(&self, base: Options) -> Options {
        Options {
            horizon: self.horizon.unwrap_or(base.horizon),
            cap: self.cap.unwrap_or(base.cap),
            seed: self.seed.unwrap_or(base.seed),
        }
    }
}

/// One task as written in a job file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub sequence: Option<String>,
    pub task: TaskSpec,
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskSpec {
    Member(Vec<String>),
    Radical,
    SVFinite,
    Construct(ConstructSpec),
    Classify(ClassifySpec),
    Verify(VerifySpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstructSpec {
    /// `b` with `mb = a` and `‖kb‖ > 1/m²` for `0 < k < m`.
    ClaimLift { a: String, m: u64 },
    /// `v` on ℤ with `s_v(ℤ) = mℤ`, directly or along a chain of levels.
    KCharacterize {
        #[serde(default)]
        m: Option<u64>,
        #[serde(default)]
        chain: Option<Vec<u64>>,
        #[serde(default = "default_bound")]
        check_bound: i64,
    },
    /// Lifts the job's sequence from `X/F` to `X`; `F` is generated by `subgroup`.
    QuotientLift { subgroup: Vec<String> },
    DenseEnumeration,
}

fn default_bound() -> i64 {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ClassifySpec {
    /// `eo < exp` for a compact quotient.
    TCharacterization,
    Autocharacterization,
    /// Is the job's sequence an autocharacterizing witness?
    AutocharWitness,
    /// No K-characterization exists on a finite group; certifies the job's
    /// sequence when one is given.
    Pigeonhole,
    /// MinAP for `ℤ^rank × torsion`; the job's group is the torsion part.
    Minap { rank: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub suite: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_order: Option<u64>,
    #[serde(default)]
    pub cases: Option<u64>,
    #[serde(default)]
    pub bound: Option<i64>,
}

/// A task whose inputs parsed and type-checked against its group.
#[derive(Debug, Clone)]
pub enum Task {
    Member { group: GroupDescriptor, seq: CharSequence, points: Vec<(String, Element)> },
    Radical { seq: CharSequence },
    SVFinite { group: FiniteAbelian, seq: CharSequence },
    ClaimLift { a: CirclePoint, m: u64 },
    KCharacterize { levels: Vec<u64>, check_bound: i64 },
    QuotientLift { quotient: Quotient, seq: CharSequence },
    DenseEnumeration,
    TCharacterization { group: GroupDescriptor },
    Autocharacterization { group: GroupDescriptor },
    AutocharWitness { group: GroupDescriptor, seq: CharSequence },
    Pigeonhole { group: FiniteAbelian, seq: Option<CharSequence> },
    Minap { rank: u32, torsion: FiniteAbelian },
    Verify { suite: String, seed: u64, sizes: Sizes },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Member { .. } => "member",
            Task::Radical { .. } => "radical",
            Task::SVFinite { .. } => "s_v_finite",
            Task::ClaimLift { .. } => "construct/claim-lift",
            Task::KCharacterize { .. } => "construct/k-characterize",
            Task::QuotientLift { .. } => "construct/quotient-lift",
            Task::DenseEnumeration => "construct/dense-enumeration",
            Task::TCharacterization { .. } => "classify/t-characterization",
            Task::Autocharacterization { .. } => "classify/autocharacterization",
            Task::AutocharWitness { .. } => "classify/autochar-witness",
            Task::Pigeonhole { .. } => "classify/pigeonhole",
            Task::Minap { .. } => "classify/minap",
            Task::Verify { .. } => "verify",
        }
    }
}

fn need<'a>(field: &'a Option<String>, name: &str, kind: &str) -> charsub::Result<&'a str> {
    field
        .as_deref()
        .ok_or_else(|| charsub::Error::InvalidValue(format!("{kind} needs a {name}")))
}

fn finite(group: &GroupDescriptor, kind: &str) -> charsub::Result<FiniteAbelian> {
    group
        .as_finite()
        .cloned()
        .ok_or_else(|| charsub::Error::DescriptorMismatch(format!("{kind} needs a finite group, got {group}")))
}

impl JobSpec {
    /// Parses every expression and checks it against the group before any
    /// computation happens.
    pub fn check(&self, opts: &Options) -> charsub::Result<Task> {
        let group = || parse_group(need(&self.group, "group", "this task")?);
        let seq_on = |g: &GroupDescriptor| parse_sequence(g, need(&self.sequence, "sequence", "this task")?);
        Ok(match &self.task {
            TaskSpec::Member(points) => {
                let g = group()?;
                let seq = seq_on(&g)?;
                let points = points
                    .iter()
                    .map(|p| parse_element(&g, p).map(|x| (p.clone(), x)))
                    .collect::<charsub::Result<_>>()?;
                Task::Member { group: g, seq, points }
            }
            TaskSpec::Radical => Task::Radical { seq: seq_on(&group()?)? },
            TaskSpec::SVFinite => {
                let g = group()?;
                Task::SVFinite { group: finite(&g, "s_v_finite")?, seq: seq_on(&g)? }
            }
            TaskSpec::Construct(c) => match c {
                ConstructSpec::ClaimLift { a, m } => {
                    let a = match parse_element(&GroupDescriptor::Circle, a)? {
                        Element::Circle(CircleValue::Exact(p)) => p,
                        _ => CirclePoint::new(parse_rational(a)?),
                    };
                    Task::ClaimLift { a, m: *m }
                }
                ConstructSpec::KCharacterize { m, chain, check_bound } => {
                    let levels = match (m, chain) {
                        (Some(m), None) => vec![*m, 1],
                        (None, Some(c)) => c.clone(),
                        _ => return Err(charsub::Error::InvalidValue("k-characterize takes exactly one of m and chain".into())),
                    };
                    Task::KCharacterize { levels, check_bound: *check_bound }
                }
                ConstructSpec::QuotientLift { subgroup } => {
                    let g = group()?;
                    let x = finite(&g, "quotient-lift")?;
                    let gens = subgroup
                        .iter()
                        .map(|s| match parse_element(&g, s)? {
                            Element::Residues(r) => Ok(r),
                            other => Err(charsub::Error::DescriptorMismatch(format!("{other} is not in {x}"))),
                        })
                        .collect::<charsub::Result<Vec<_>>>()?;
                    let f = FiniteSubgroup::generated_by(&x, &gens, opts.cap)?;
                    let quotient = Quotient::new(&x, &f)?;
                    let seq = seq_on(&GroupDescriptor::Finite(quotient.group.clone()))?;
                    Task::QuotientLift { quotient, seq }
                }
                ConstructSpec::DenseEnumeration => Task::DenseEnumeration,
            },
            TaskSpec::Classify(c) => match c {
                ClassifySpec::TCharacterization => Task::TCharacterization { group: group()? },
                ClassifySpec::Autocharacterization => Task::Autocharacterization { group: group()? },
                ClassifySpec::AutocharWitness => {
                    let g = group()?;
                    let seq = seq_on(&g)?;
                    Task::AutocharWitness { group: g, seq }
                }
                ClassifySpec::Pigeonhole => {
                    let g = group()?;
                    let seq = match self.sequence {
                        Some(_) => Some(seq_on(&g)?),
                        None => None,
                    };
                    Task::Pigeonhole { group: finite(&g, "pigeonhole")?, seq }
                }
                ClassifySpec::Minap { rank } => {
                    let torsion = match &self.group {
                        Some(_) => finite(&group()?, "minap")?,
                        None => FiniteAbelian::trivial(),
                    };
                    Task::Minap { rank: *rank, torsion }
                }
            },
            TaskSpec::Verify(v) => {
                if !SUITES.contains(&v.suite.as_str()) {
                    return Err(charsub::Error::InvalidValue(format!(
                        "unknown suite {:?}; known: {}",
                        v.suite,
                        SUITES.join(", ")
                    )));
                }
                let d = Sizes::default();
                let sizes = Sizes {
                    max_order: v.max_order.unwrap_or(d.max_order),
                    cases: v.cases.unwrap_or(d.cases),
                    bound: v.bound.unwrap_or(d.bound),
                };
                Task::Verify { suite: v.suite.clone(), seed: v.seed.unwrap_or(opts.seed), sizes }
            }
        })
    }

    pub fn options(&self, base: &Options) -> Options {
        Options { horizon: self.horizon.unwrap_or(base.horizon), cap: self.cap.unwrap_or(base.cap), ..*base }
    }
}
