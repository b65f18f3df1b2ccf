use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use opspace_core::classify::{classify, tro_dichotomy};
use opspace_core::combinat::Subset;
use opspace_core::matrix::ToleranceConfig;
use opspace_core::norms::{distance_table, estimate_pair, WitnessConfig, MAX_LEVEL_N};
use opspace_core::spaces::{
    build_column, build_hnk, build_hnk_intersection, build_phi, build_row, build_uij,
};

use crate::distance::{parse_pair, row, row_for_pair, to_csv, within_closed_form, PairParams};
use crate::error::{CliError, Result, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};
use crate::format::{parse_family, BasisJson, MatrixJson};
use crate::report::{ClassifyReport, DistanceReport, VerifyReport, SCHEMA};
use crate::suites::{run_suite, validate, Suite, VerifyOptions};

/// Cap on `n` for the row and column spaces, which are cheap at any size.
const MAX_TRIVIAL_N: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "opspace", version, about = "Build and verify finite Hilbertian operator spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every random sample.
    #[arg(long, env = "OPSPACE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    structural_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    iterative_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ToleranceConfig> {
        let cfg = ToleranceConfig {
            structural_tol: self.structural_tol,
            iterative_tol: self.iterative_tol,
            max_iterations: self.max_iterations,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    Column,
    Row,
    Hnk,
    Phi,
    Intersection,
    /// A single `u_IJ` matrix (needs --k, --left, --right).
    Uij,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the basis of a space as JSON.
    Build {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Levels of an intersection, e.g. `1,3`.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<usize>,
        /// Index set `I` of `u_IJ`, comma separated (may be empty).
        #[arg(long)]
        left: Option<String>,
        /// Index set `J` of `u_IJ`.
        #[arg(long)]
        right: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Largest matrix level sampled by the Fock suite.
        #[arg(long, default_value_t = 3)]
        fock_levels: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Witness lower bounds for cb Banach-Mazur distances.
    Distance {
        /// `A:B` (e.g. `Rn:Cn`, `Cn:Hm`, `Phin:HR`) or `all`.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a family of pairwise collinear partial isometries.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Reports go to `out` (or `--output`),
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_PASS
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "opspace: {e}");
            e.exit_code()
        }
    }
}

fn emit(bytes: &[u8], path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => out.write_all(bytes).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(&bytes, path, out)
}

fn parse_set(text: &str) -> Result<Subset> {
    let items = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| CliError::Usage(format!("bad index `{s}` in `{text}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subset::new(items)?)
}

fn cap(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(CliError::Usage(format!("n = {n} outside 1..={max}")));
    }
    Ok(())
}

fn need_k(k: Option<usize>) -> Result<usize> {
    k.ok_or_else(|| CliError::Usage("this space needs --k".into()))
}

#[derive(Serialize)]
struct UijJson {
    schema: &'static str,
    space: String,
    n: usize,
    k: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    matrix: MatrixJson,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Build { space, n, k, levels, left, right, common } => {
            common.config()?;
            let path = common.output.as_deref();
            let basis = match space {
                SpaceArg::Column => {
                    cap(n, MAX_TRIVIAL_N)?;
                    build_column(n)?
                }
                SpaceArg::Row => {
                    cap(n, MAX_TRIVIAL_N)?;
                    build_row(n)?
                }
                SpaceArg::Hnk => {
                    cap(n, MAX_LEVEL_N)?;
                    build_hnk(n, need_k(k)?)?
                }
                SpaceArg::Phi => {
                    cap(n, MAX_LEVEL_N)?;
                    build_phi(n)?
                }
                SpaceArg::Intersection => {
                    cap(n, MAX_LEVEL_N)?;
                    if levels.is_empty() {
                        return Err(CliError::Usage("intersection needs --levels".into()));
                    }
                    build_hnk_intersection(n, &levels)?
                }
                SpaceArg::Uij => {
                    cap(n, MAX_LEVEL_N)?;
                    let k = need_k(k)?;
                    let missing = || CliError::Usage("uij needs --left and --right".into());
                    let left = parse_set(left.as_deref().ok_or_else(missing)?)?;
                    let right = parse_set(right.as_deref().ok_or_else(missing)?)?;
                    let m = build_uij(n, k, &left, &right)?;
                    let doc = UijJson {
                        schema: SCHEMA,
                        space: format!("u_IJ in H_{n}^{k}"),
                        n,
                        k,
                        left: left.elements().to_vec(),
                        right: right.elements().to_vec(),
                        matrix: MatrixJson::from(&m),
                    };
                    emit_json(&doc, path, out)?;
                    return Ok(EXIT_PASS);
                }
            };
            emit_json(&BasisJson::new(&basis, n), path, out)?;
            Ok(EXIT_PASS)
        }
        Command::Verify { suite, n, k, samples, fock_levels, common } => {
            let cfg = common.config()?;
            let opts = VerifyOptions { n, k, samples, fock_levels: fock_levels.max(1) };
            validate(suite, &opts)?;
            let suites = suite
                .expand()
                .into_iter()
                .map(|s| run_suite(s, &opts, &cfg))
                .collect::<Result<Vec<_>>>()?;
            let report = VerifyReport {
                schema: SCHEMA,
                command: "verify",
                n,
                seed: cfg.seed,
                tolerances: (&cfg).into(),
                pass: suites.iter().all(|s| s.pass),
                suites,
            };
            emit_json(&report, common.output.as_deref(), out)?;
            Ok(if report.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Distance { pair, n, k, m, levels, samples, format, common } => {
            let cfg = common.config()?;
            cap(n, MAX_LEVEL_N)?;
            if levels == 0 {
                return Err(CliError::Usage("--levels must be positive".into()));
            }
            let witness = WitnessConfig { levels, samples };
            let entries = if pair == "all" {
                let table = distance_table(n, witness, &cfg)?;
                table.entries.iter().map(|e| row(&e.a, &e.b, n, &e.estimate, e.diverging)).collect()
            } else {
                let (a, b) = parse_pair(&pair, n, PairParams { k, m })?;
                let est = estimate_pair(&a, &b, n, witness, &cfg)?;
                vec![row_for_pair(&a, &b, n, &est)?]
            };
            let pass = entries.iter().all(within_closed_form);
            let path = common.output.as_deref();
            match format {
                Format::Json => {
                    let report = DistanceReport {
                        schema: SCHEMA,
                        command: "distance",
                        n,
                        seed: cfg.seed,
                        levels,
                        samples,
                        tolerances: (&cfg).into(),
                        pass,
                        entries,
                    };
                    emit_json(&report, path, out)?;
                }
                Format::Csv => emit(&to_csv(&entries)?, path, out)?,
            }
            Ok(if pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Classify { input, common } => {
            let cfg = common.config()?;
            let text = std::fs::read_to_string(&input).map_err(|source| CliError::Read { path: input.clone(), source })?;
            let family = parse_family(&text)?;
            let r = classify(&family, &cfg)?;
            let tro = tro_dichotomy(&family, &cfg)?;
            let report = ClassifyReport {
                schema: SCHEMA,
                command: "classify",
                n: r.n,
                i_r: r.i_r,
                i_l: r.i_l,
                components: r.components,
                verdict: r.verdict,
                tro: tro.label(),
                warnings: r.warnings,
            };
            emit_json(&report, common.output.as_deref(), out)?;
            Ok(EXIT_PASS)
        }
    }
}
