//! Command-line surface: the group file format, subcommands and report output.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{Config, DEFAULT_DEGREE_LIMIT, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::construct::Family;
use crate::error::Error;
use crate::gf::Field;
use crate::grp::MatrixGroup;
use crate::matfq::Matrix;
use crate::modstruct::{decompose, CrStatus};
use crate::structure::composition_tally;
use crate::verify::{
    fuzz, sharpness_suite, verify_bound, verify_corollary, BoundReport, DEFAULT_SUITE_MAX_DIM,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// On-disk description of a matrix group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub d: usize,
    pub generators: Vec<Matrix>,
}

impl GroupFile {
    pub fn from_group(name: Option<String>, g: &MatrixGroup) -> Self {
        GroupFile {
            name,
            p: g.field().p(),
            f: g.field().f(),
            modulus: Some(g.field().modulus().to_vec()),
            d: g.dim(),
            generators: g.generators().to_vec(),
        }
    }

    pub fn to_group(&self, degree_limit: usize) -> crate::Result<MatrixGroup> {
        let field = Field::new(self.p, self.f, self.modulus.clone())?;
        Ok(
            MatrixGroup::new(Arc::new(field), self.d, self.generators.clone())?
                .with_degree_limit(degree_limit),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Failures surfaced by the command line, each with an exit code.
#[derive(Debug)]
pub enum CliError {
    Engine(Error),
    Io(String),
    Parse(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_resource_limit() => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Engine(e @ Error::NotCompletelyReducible) => json!({
                "error": e.kind(),
                "message": e.to_string(),
                "hint": "run `verify --corollary` for groups that are not completely reducible",
            }),
            CliError::Engine(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::Io(m) => json!({"error": "Io", "message": m}),
            CliError::Parse(m) => json!({"error": "Parse", "message": m}),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "crfactor",
    version,
    about = "Composition factors of order p in matrix groups over finite fields"
)]
pub struct Cli {
    /// Emit TSV instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Largest permutation degree the engine may build.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_LIMIT)]
    pub degree_limit: usize,
    /// Perfect groups up to this order get an exhaustive simplicity test.
    #[arg(long, global = true, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
    pub exhaustive_limit: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order of the group.
    Order { file: PathBuf },
    /// Composition factors.
    Tally { file: PathBuf },
    /// Number of composition factors of order p.
    Cp {
        file: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Irreducible components of the natural module.
    Decompose { file: PathBuf },
    /// Check the bound on c_p.
    Verify {
        file: PathBuf,
        /// Check the quotient by the p-core instead (any group).
        #[arg(long)]
        corollary: bool,
        /// Also enforce the bound with absolutely irreducible components.
        #[arg(long)]
        absolute: bool,
    },
    /// Write a group from one of the example families.
    Example {
        /// gammaL1, gu32, extraspecial or gl-counterexample
        name: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Dimension for gl-counterexample.
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run every sharp family up to a dimension.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SUITE_MAX_DIM)]
        max_dim: usize,
    },
    /// Check the bound on random subgroups.
    Fuzz {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 5])]
        q: Vec<u32>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, env = "CRFACTOR_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn load(path: &Path, cfg: &Config) -> Result<(String, MatrixGroup), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file = GroupFile::parse(&text)?;
    let name = file.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map_or("group".into(), |s| s.to_string_lossy().into_owned())
    });
    Ok((name, file.to_group(cfg.degree_limit)?))
}

fn print_json(out: &mut dyn Write, v: &impl Serialize) {
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    );
}

fn print_reports(out: &mut dyn Write, table: bool, reports: &[&BoundReport]) {
    if table {
        let _ = writeln!(out, "{}", BoundReport::tsv_header());
        for r in reports {
            let _ = writeln!(out, "{}", r.tsv_row());
        }
    } else if let [single] = reports {
        print_json(out, single);
    } else {
        print_json(out, &reports);
    }
}

/// Runs one parsed command; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut cfg = Config {
        degree_limit: cli.degree_limit,
        exhaustive_limit: cli.exhaustive_limit,
        ..Config::default()
    };
    match &cli.command {
        Command::Order { file } => {
            let (name, g) = load(file, &cfg)?;
            let order = g.order()?;
            if cli.table {
                let _ = writeln!(out, "name\torder\n{name}\t{order}");
            } else {
                print_json(out, &json!({"name": name, "order": order}));
            }
        }
        Command::Tally { file } => {
            let (_, g) = load(file, &cfg)?;
            let t = composition_tally(&g, &cfg)?;
            if cli.table {
                let _ = writeln!(out, "factor\tcount");
                for (p, e) in &t.cyclic {
                    let _ = writeln!(out, "C{p}\t{e}");
                }
                for (o, c) in &t.nonabelian {
                    let _ = writeln!(out, "simple({o})\t{c}");
                }
            } else {
                print_json(out, &t);
            }
        }
        Command::Cp { file, p } => {
            let (name, g) = load(file, &cfg)?;
            let t = composition_tally(&g, &cfg)?;
            let c = t.c_p(*p);
            if cli.table {
                let _ = writeln!(out, "name\tp\tc_p\n{name}\t{p}\t{c}");
            } else {
                print_json(
                    out,
                    &json!({"name": name, "p": p, "c_p": c, "sampled": t.sampled}),
                );
            }
        }
        Command::Decompose { file } => {
            let (name, g) = load(file, &cfg)?;
            let dec = decompose(&g);
            if cli.table {
                let s = dec.s.map_or("-".to_string(), |s| s.to_string());
                let cr = dec.cr == CrStatus::CompletelyReducible;
                let _ = writeln!(
                    out,
                    "name\td\tr\ts\tcr\n{name}\t{}\t{}\t{s}\t{cr}",
                    g.dim(),
                    dec.r
                );
            } else {
                let basis = |u: &crate::matfq::Subspace| u.basis_matrix();
                print_json(
                    out,
                    &json!({
                        "name": name,
                        "cr": dec.cr,
                        "r": dec.r,
                        "s": dec.s,
                        "endo_dims": dec.endo_dims,
                        "summands": dec.summands.as_ref().map(|v| v.iter().map(basis).collect::<Vec<_>>()),
                        "flag": dec.flag.iter().map(basis).collect::<Vec<_>>(),
                    }),
                );
            }
        }
        Command::Verify {
            file,
            corollary,
            absolute,
        } => {
            let (name, g) = load(file, &cfg)?;
            let rep = if *corollary {
                verify_corollary(&name, &g, &cfg)?
            } else {
                verify_bound(&name, &g, &cfg)?
            };
            print_reports(out, cli.table, &[&rep]);
            if rep.violated() || (*absolute && rep.s_violated()) {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Example {
            name,
            p,
            q,
            level,
            d,
            output,
        } => {
            let family = Family::parse(name).ok_or_else(|| {
                Error::InvalidInput(format!("unknown example {name}; expected gammaL1, gu32, extraspecial or gl-counterexample"))
            })?;
            let p = p.unwrap_or(match family {
                Family::GammaL1 | Family::Gu32 => 2,
                Family::Extraspecial | Family::GlCounterexample => 3,
            });
            let q = q.unwrap_or(match family {
                Family::Gu32 => 4,
                Family::GlCounterexample => 343,
                _ => p,
            });
            let lvl = if family == Family::GlCounterexample {
                *d
            } else {
                *level
            };
            let g = family.build(p, q, lvl, cfg.degree_limit)?;
            let label = match family {
                Family::GlCounterexample => format!("{}-p{p}-q{q}-d{d}", family.name()),
                _ => format!("{}-p{}-q{q}-L{level}", family.name(), family.prime(p)),
            };
            let text = GroupFile::from_group(Some(label), &g).to_json();
            match output {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
        }
        Command::Suite { max_dim } => {
            let entries = sharpness_suite(*max_dim, &cfg);
            let violated = entries
                .iter()
                .any(|e| e.report.as_ref().is_some_and(BoundReport::violated));
            if cli.table {
                let _ = writeln!(out, "{}", BoundReport::tsv_header());
                for e in &entries {
                    match (&e.report, &e.error) {
                        (Some(r), _) => {
                            let _ = writeln!(out, "{}", r.tsv_row());
                        }
                        (None, Some(msg)) => {
                            let _ = writeln!(out, "# {} level {}: {msg}", e.family, e.level);
                        }
                        (None, None) => {}
                    }
                }
            } else {
                print_json(out, &entries);
            }
            if violated {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Fuzz { d, q, trials, seed } => {
            cfg.seed = *seed;
            let summary = fuzz(*d, q, *trials, *seed, &cfg)?;
            if cli.table {
                let _ = writeln!(
                    out,
                    "tested\tcr\tsharp\tmax_cp\tskipped\tviolations\n{}\t{}\t{}\t{}\t{}\t{}",
                    summary.tested,
                    summary.cr,
                    summary.sharp,
                    summary.max_cp,
                    summary.skipped,
                    summary.violations.len()
                );
            } else {
                print_json(out, &summary);
            }
            if !summary.violations.is_empty() {
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    Ok(EXIT_OK)
}
