//! Command-line interface.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or a
//! computation errors, 2 on usage errors and unreadable or invalid inputs.

use std::io::Write;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use alterfold_core::census::census;
use alterfold_core::center::{Center, ModularData};
use alterfold_core::fs::{equivariance_check, indicator};
use alterfold_core::state_sum::StateSumConfig;
use alterfold_core::surgery::{lens_space_plumbing, rt_plumbing, verify_tv_rt};
use alterfold_core::{verify_category, FusionCategory};

use crate::parallel::tv_parallel;
use crate::refs::{resolve_category, resolve_plumbing, resolve_triangulation};
use crate::report::{fingerprint, CenterTable, ResultEntry, RunReport};
use crate::Error;

/// Closed census manifolds used by the Pachner and TV = RT suites.
pub const CLOSED_CENSUS: [&str; 6] = ["s3_2tet", "s3_3tet", "rp3_2tet", "lens_3_1", "lens_4_1", "s2xs1"];

/// Seed of the random Pachner sequences in `verify --suite pachner`.
const PACHNER_SEED: u64 = 0x7061_6368;

#[derive(Parser, Debug)]
#[command(name = "alterfold", version, about = "Quantum invariants of 3-manifolds from fusion category data")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Worker threads for state sums.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Pentagon,
    Pachner,
    Tvrt,
    Killing,
    Equivariance,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turaev–Viro invariant of a triangulation.
    Tv {
        #[arg(long)]
        category: String,
        #[arg(long)]
        triangulation: String,
    },
    /// Modular data of the Drinfeld center.
    Center {
        #[arg(long)]
        category: String,
    },
    /// Surgery invariant of a plumbing graph or lens space.
    #[command(group(ArgGroup::new("manifold").required(true).args(["plumbing", "lens"])))]
    Rt {
        #[arg(long)]
        category: String,
        #[arg(long)]
        plumbing: Option<String>,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
        lens: Option<Vec<i64>>,
    },
    /// Generalized Frobenius–Schur indicator of a center simple.
    FsIndicator {
        #[arg(long)]
        category: String,
        /// Index of the center simple.
        #[arg(long)]
        center: usize,
        /// Comma-separated simples (labels or indices) forming the object V.
        #[arg(long)]
        object: String,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
    },
    /// SL2(Z)-equivariance of the indicators over m, l in [-R, R].
    FsEquivariance {
        #[arg(long)]
        category: String,
        #[arg(long, default_value_t = 3)]
        range: i64,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long)]
        category: String,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Range R of the equivariance sweep.
        #[arg(long, default_value_t = 3)]
        range: i64,
    },
}

fn parse_object(cat: &FusionCategory, spec: &str) -> Result<Vec<usize>, Error> {
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            (0..cat.rank())
                .find(|&i| cat.label(i) == tok)
                .or_else(|| tok.parse::<usize>().ok().filter(|&i| i < cat.rank()))
                .ok_or_else(|| Error::Usage(format!("unknown simple `{tok}`")))
        })
        .collect()
}

fn center_data(cat: &FusionCategory) -> Result<(Center, ModularData), Error> {
    let center = Center::new(cat)?;
    let md = center.modular_data()?;
    Ok((center, md))
}

fn suite_pentagon(cat: &FusionCategory, out: &mut Vec<ResultEntry>) {
    let rep = verify_category(cat);
    let tol = cat.tol();
    out.push(ResultEntry::check("pentagon_residual", rep.pentagon_residual, tol));
    out.push(ResultEntry::flag("unit_duality", rep.unit_duality_ok));
    out.push(ResultEntry::check("dimension_defect", rep.dim_defect, tol));
    out.push(ResultEntry::flag("f_invertible", rep.f_invertible));
    if let Some(h) = rep.hexagon_residual {
        out.push(ResultEntry::check("hexagon_residual", h, tol));
    }
}

fn suite_pachner(cat: &FusionCategory, cfg: &StateSumConfig, out: &mut Vec<ResultEntry>) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(PACHNER_SEED);
    for name in CLOSED_CENSUS {
        let tri = census(name)?;
        let base = tv_parallel(cat, &tri, cfg)?;
        let mut worst = 0.0f64;
        for _ in 0..3 {
            let moved = tri.random_moves(&mut rng, 4, 6);
            worst = worst.max((tv_parallel(cat, &moved, cfg)? - base).norm());
        }
        out.push(ResultEntry::check(format!("pachner[{name}]"), worst, 1e-8));
    }
    Ok(())
}

fn suite_tvrt(cat: &FusionCategory, md: &ModularData, cfg: &StateSumConfig, out: &mut Vec<ResultEntry>) -> Result<(), Error> {
    let rep = verify_tv_rt(cat, md, &CLOSED_CENSUS, cfg)?;
    for e in rep.entries {
        out.push(ResultEntry::check(format!("tv_rt[{}]", e.name), e.defect, 1e-7));
    }
    Ok(())
}

fn suite_killing(center: &Center, out: &mut Vec<ResultEntry>) -> Result<(), Error> {
    for i in 0..center.category().rank() {
        out.push(ResultEntry::check(format!("killing[{}]", center.category().label(i)), center.verify_killing(i)?, 1e-9));
    }
    Ok(())
}

fn suite_equivariance(center: &Center, md: &ModularData, range: i64, out: &mut Vec<ResultEntry>) -> Result<(), Error> {
    let rep = equivariance_check(center, md, (-range, range), (-range, range))?;
    out.push(ResultEntry::check("t_equivariance", rep.t_defect, 1e-7));
    out.push(ResultEntry::check("s_equivariance", rep.s_defect, 1e-7));
    out.push(ResultEntry::check("duality", rep.duality_defect, 1e-7));
    out.push(ResultEntry::check("sl2_words", rep.word_defect, 1e-7));
    Ok(())
}

fn execute(cli: &Cli, cfg: &StateSumConfig) -> Result<(String, Vec<ResultEntry>, Option<CenterTable>), Error> {
    let mut results = Vec::new();
    let mut table = None;
    let cat_ref = match &cli.command {
        Command::Tv { category, .. }
        | Command::Center { category }
        | Command::Rt { category, .. }
        | Command::FsIndicator { category, .. }
        | Command::FsEquivariance { category, .. }
        | Command::Verify { category, .. } => category,
    };
    let cat = resolve_category(cat_ref)?;
    match &cli.command {
        Command::Tv { triangulation, .. } => {
            let tri = resolve_triangulation(triangulation)?;
            results.push(ResultEntry::value("tv", tv_parallel(&cat, &tri, cfg)?));
        }
        Command::Center { .. } => {
            let (center, md) = center_data(&cat)?;
            results.push(ResultEntry::value("rank_z", alterfold_core::C64::new(md.rank_z as f64, 0.0)));
            results.push(ResultEntry::value("mu_z", md.mu_z));
            table = Some(CenterTable::new(&center, &md));
        }
        Command::Rt { plumbing, lens, .. } => {
            let graph = match (plumbing, lens) {
                (Some(p), _) => resolve_plumbing(p)?,
                (None, Some(pq)) => lens_space_plumbing(pq[0], pq[1]).map_err(Error::Input)?,
                (None, None) => unreachable!("clap requires one of --plumbing, --lens"),
            };
            let (_, md) = center_data(&cat)?;
            results.push(ResultEntry::value("rt", rt_plumbing(&md, &graph)?));
        }
        Command::FsIndicator { center: a, object, m, l, .. } => {
            let v = parse_object(&cat, object)?;
            let center = Center::new(&cat)?;
            if *a >= center.rank() {
                return Err(Error::Usage(format!("center simple {a} out of range (rank {})", center.rank())));
            }
            results.push(ResultEntry::value("nu", indicator(&center, *a, &v, *m, *l)?));
        }
        Command::FsEquivariance { range, .. } => {
            let (center, md) = center_data(&cat)?;
            suite_equivariance(&center, &md, *range, &mut results)?;
        }
        Command::Verify { suite, range, .. } => {
            let all = *suite == Suite::All;
            if all || *suite == Suite::Pentagon {
                suite_pentagon(&cat, &mut results);
            }
            if all || *suite == Suite::Pachner {
                suite_pachner(&cat, cfg, &mut results)?;
            }
            if all || matches!(suite, Suite::Tvrt | Suite::Killing | Suite::Equivariance) {
                let (center, md) = center_data(&cat)?;
                if all || *suite == Suite::Tvrt {
                    suite_tvrt(&cat, &md, cfg, &mut results)?;
                }
                if all || *suite == Suite::Killing {
                    suite_killing(&center, &mut results)?;
                }
                if all || *suite == Suite::Equivariance {
                    suite_equivariance(&center, &md, *range, &mut results)?;
                }
            }
        }
    }
    Ok((fingerprint(&cat), results, table))
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.workers == 0 {
        let _ = writeln!(err, "error: --workers must be at least 1");
        return 2;
    }
    let cfg = StateSumConfig { workers: cli.workers, ..StateSumConfig::default() };
    let start = Instant::now();
    let (fp, results, center) = match execute(&cli, &cfg) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let report = RunReport {
        command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        fingerprint: fp,
        results,
        center,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = match cli.emit {
        Emit::Text => report.to_text(),
        Emit::Json => report.to_json() + "\n",
        Emit::Csv => report.to_csv(),
    };
    let _ = out.write_all(text.as_bytes());
    if report.passed() {
        0
    } else {
        let failed: Vec<&str> = report.results.iter().filter(|r| r.pass == Some(false)).map(|r| r.name.as_str()).collect();
        let _ = writeln!(err, "failed checks: {}", failed.join(", "));
        1
    }
}
