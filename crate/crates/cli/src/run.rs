use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gapsmith::debreu::{self, DebreuError};
use gapsmith::plmap::PlMap;
use gapsmith::pointset::{Gap, PointSet};
use gapsmith::rational::Rational;
use gapsmith::semiorder::{
    check_axioms, enumerate_semiorders, irreducible_components, synthesize_ss, trace, AxiomVerdict,
    Semiorder, SemiorderError,
};
use gapsmith::structure::{check_all, StructureReport};
use gapsmith::threshold::{remove_epsilon, remove_strong, ThresholdError};
use serde::{Deserialize, Serialize};

use crate::args::{Command, Mode};
use crate::diagram;

pub const EXIT_OK: i32 = 0;
pub const EXIT_STRUCTURE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("structure violated: {0}")]
    Structure(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Structure(_) => EXIT_STRUCTURE,
            CliError::Certificate(_) => EXIT_CERTIFICATE,
        }
    }
}

impl From<ThresholdError> for CliError {
    fn from(e: ThresholdError) -> Self {
        match e {
            ThresholdError::StructureViolated(_)
            | ThresholdError::GapTooLong(_)
            | ThresholdError::BudgetDegenerate(_) => CliError::Structure(e.to_string()),
            ThresholdError::CertificateFailed { .. } => CliError::Certificate(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DebreuError> for CliError {
    fn from(e: DebreuError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// A relation as read from disk; the axioms are checked separately.
#[derive(Debug, Deserialize)]
struct RawRelation {
    n: usize,
    strict: Vec<Vec<bool>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_set(path: &Path) -> Result<PointSet, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_relation(path: &Path) -> Result<Vec<Vec<bool>>, CliError> {
    let text = read(path)?;
    let raw: RawRelation = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if raw.strict.len() != raw.n {
        return Err(CliError::Input(format!(
            "n is {} but the relation has {} rows",
            raw.n,
            raw.strict.len()
        )));
    }
    Ok(raw.strict)
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(v: &T, output: Option<&Path>) -> Result<(), CliError> {
    let body = to_json(v);
    match output {
        Some(p) => write_file(p, &body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).expect("trace entries serialize"));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct GapsReport {
    set: PointSet,
    gaps: Vec<Gap>,
    bad_gaps: Vec<Gap>,
    bad_gap_mass: Rational,
}

fn gaps_report(s: &PointSet) -> Result<GapsReport, CliError> {
    let inp = |e: gapsmith::pointset::PointSetError| CliError::Input(e.to_string());
    Ok(GapsReport {
        set: s.clone(),
        gaps: s.gaps().map_err(inp)?,
        bad_gaps: s.bad_gaps_by_size().map_err(inp)?,
        bad_gap_mass: s.bad_gap_mass().map_err(inp)?.0,
    })
}

fn structure_report(s: &PointSet) -> Result<StructureReport, CliError> {
    check_all(s).map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Serialize)]
struct RemoveReport<T: Serialize> {
    mode: &'static str,
    input: PointSet,
    output: PointSet,
    map: PlMap,
    trace: T,
}

#[derive(Serialize)]
struct SemiorderReport {
    n: usize,
    axioms: AxiomVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    irreducible_components: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct FullReport {
    gaps: GapsReport,
    structure: StructureReport,
    weak: debreu::RemovalTrace,
}

fn max_n() -> usize {
    std::env::var("GAPSMITH_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(gapsmith::semiorder::MAX_ENUMERATION)
}

fn semiorder_input(e: SemiorderError) -> CliError {
    CliError::Input(e.to_string())
}

pub fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Gaps { input, output } => {
            let s = read_set(input)?;
            emit(&gaps_report(&s)?, output.as_deref())
        }
        Command::CheckStructure { input, output } => {
            let s = read_set(input)?;
            emit(&structure_report(&s)?, output.as_deref())
        }
        Command::Remove {
            input,
            output,
            mode,
            epsilon,
            trace,
            emit_diagram,
        } => {
            let s = read_set(input)?;
            let mut stages = vec![("input".to_string(), s.clone())];
            match mode {
                Mode::Weak => {
                    let t = debreu::remove_all(&s)?;
                    for st in &t.steps {
                        let prev = &stages.last().expect("input stage").1;
                        let next = st
                            .map
                            .image(prev)
                            .map_err(|e| CliError::Input(e.to_string()))?;
                        stages.push((format!("step {}", st.n), next));
                    }
                    if let Some(p) = trace {
                        write_file(p, &jsonl(&t.steps))?;
                    }
                    write_diagram(emit_diagram.as_deref(), &stages)?;
                    emit(
                        &RemoveReport {
                            mode: "weak",
                            input: s,
                            output: t.final_set.clone(),
                            map: t.total_map.clone(),
                            trace: &t.steps,
                        },
                        output.as_deref(),
                    )
                }
                Mode::Epsilon => {
                    let eps = epsilon.as_ref().expect("checked by the parser");
                    let (map, img, t) = remove_epsilon(&s, eps)?;
                    stages.push(("output".into(), img.clone()));
                    if let Some(p) = trace {
                        write_file(p, &jsonl(&t.steps))?;
                    }
                    write_diagram(emit_diagram.as_deref(), &stages)?;
                    emit(
                        &RemoveReport {
                            mode: "epsilon",
                            input: s,
                            output: img,
                            map,
                            trace: t,
                        },
                        output.as_deref(),
                    )
                }
                Mode::Strong => {
                    let (map, img, t) = remove_strong(&s)?;
                    stages.push(("output".into(), img.clone()));
                    if let Some(p) = trace {
                        write_file(p, &jsonl(&t.identifications))?;
                    }
                    write_diagram(emit_diagram.as_deref(), &stages)?;
                    emit(
                        &RemoveReport {
                            mode: "strong",
                            input: s,
                            output: img,
                            map,
                            trace: t,
                        },
                        output.as_deref(),
                    )
                }
            }
        }
        Command::SemiorderCheck { input, output } => {
            let strict = read_relation(input)?;
            let axioms = check_axioms(&strict).map_err(semiorder_input)?;
            let (trace_order, components) = match axioms {
                AxiomVerdict::Valid => {
                    let r = Semiorder::new(strict.clone()).map_err(semiorder_input)?;
                    (
                        Some(trace(&r).sorted()),
                        Some(
                            irreducible_components(&r)
                                .into_iter()
                                .map(|b| b.elements)
                                .collect(),
                        ),
                    )
                }
                _ => (None, None),
            };
            emit(
                &SemiorderReport {
                    n: strict.len(),
                    axioms,
                    trace_order,
                    irreducible_components: components,
                },
                output.as_deref(),
            )
        }
        Command::Synth { input, output } => {
            let r = Semiorder::new(read_relation(input)?).map_err(semiorder_input)?;
            let u = synthesize_ss(&r).map_err(semiorder_input)?;
            emit(&u, output.as_deref())
        }
        Command::Enumerate { n, iso, output } => {
            let cap = max_n();
            if *n > cap {
                return Err(CliError::Input(format!(
                    "n = {n} exceeds GAPSMITH_MAX_N = {cap}"
                )));
            }
            let e = enumerate_semiorders(*n, *iso).map_err(semiorder_input)?;
            emit(&e, output.as_deref())
        }
        Command::Report { input, output } => {
            let s = read_set(input)?;
            let report = FullReport {
                gaps: gaps_report(&s)?,
                structure: structure_report(&s)?,
                weak: debreu::remove_all(&s)?,
            };
            emit(&report, output.as_deref())
        }
    }
}

fn write_diagram(path: Option<&Path>, stages: &[(String, PointSet)]) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, &diagram::render(stages)),
        None => Ok(()),
    }
}
