use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tamejl::identities::verify_instance_mutated;
use tamejl::sweep::parse_tower;
use tamejl::{
    sweep_mutated, CsaParams, ExtensionModel, ExtensionParams, GridSpec, Instance, Mutation,
    RootSystem,
};

#[derive(Parser)]
#[command(
    name = "tamejl",
    version,
    about = "Check the ζ/ε character identities for tame elliptic tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List root orbits of E/F with their classes.
    Classify {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Verify a single instance.
    Verify {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        h: u64,
        /// Subfields E_0, …, E_{t-1}, e.g. `[E]` or `[4,2]`.
        #[arg(long, default_value = "[]")]
        tower: String,
        #[arg(long, default_value = "[]")]
        levels: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Mutate::None)]
        mutate: Mutate,
    },
    /// Verify every instance of a grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mutate::None)]
        mutate: Mutate,
    },
}

#[derive(Args)]
struct ExtArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    e: u64,
    #[arg(long, default_value_t = 1)]
    f: u64,
    #[arg(long, default_value_t = 0)]
    w: u64,
}

impl ExtArgs {
    fn system(&self) -> anyhow::Result<RootSystem> {
        let params = ExtensionParams::new(self.q, self.e, self.f, self.w)?;
        Ok(RootSystem::new(ExtensionModel::build(params)?))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

/// Negative controls: corrupt one ingredient of the Tam side or the ε side.
#[derive(Clone, Copy, ValueEnum)]
enum Mutate {
    None,
    NegateIota,
    FlipLegendre,
    FlipModuleClass,
}

impl From<Mutate> for Mutation {
    fn from(m: Mutate) -> Self {
        match m {
            Mutate::None => Mutation::None,
            Mutate::NegateIota => Mutation::NegateIota,
            Mutate::FlipLegendre => Mutation::FlipLegendre,
            Mutate::FlipModuleClass => Mutation::FlipModuleClass,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Classify { ext, format } => classify(&ext, format),
        Command::Verify {
            ext,
            m,
            d,
            h,
            tower,
            levels,
            format,
            mutate,
        } => verify(
            &ext,
            CsaParams::new(m, d, h)?,
            &tower,
            &levels,
            format,
            mutate.into(),
        ),
        Command::Sweep {
            config,
            format,
            jobs,
            mutate,
        } => {
            if let Some(jobs) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global()?;
            }
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            sweep_cmd(&parse_config(&text)?, format, mutate.into())
        }
    }
}

fn list(text: &str) -> Vec<String> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn numbers(text: &str) -> anyhow::Result<Vec<u64>> {
    list(text)
        .iter()
        .map(|s| s.parse().with_context(|| format!("not a number: {s:?}")))
        .collect()
}

fn parse_config(text: &str) -> anyhow::Result<GridSpec> {
    let mut grid = GridSpec::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
        let value = value.trim();
        let number = || -> anyhow::Result<u64> {
            value
                .parse()
                .with_context(|| format!("line {}: not a number: {value:?}", lineno + 1))
        };
        match key.trim() {
            "q_list" => grid.q_list = numbers(value)?,
            "n_max" => grid.n_max = number()?,
            "w_samples" => grid.w_samples = number()? as usize,
            "t_max" => grid.t_max = number()? as usize,
            "a_max" => grid.a_max = number()?,
            "seed" => grid.seed = number()?,
            other => bail!("line {}: unknown key {other:?}", lineno + 1),
        }
    }
    grid.validate()?;
    Ok(grid)
}

fn classify(ext: &ExtArgs, format: Format) -> anyhow::Result<bool> {
    let sys = ext.system()?;
    if format == Format::Tsv {
        println!("i\tj\tclass\tq_alpha\tq_pm\tu_dim");
    }
    for o in &sys.orbits {
        match format {
            Format::Tsv => println!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                o.i(),
                o.j(),
                o.cls.label(),
                o.q_alpha,
                o.q_pm.map_or("-".to_string(), |q| q.to_string()),
                o.f_alpha()
            ),
            Format::Json => println!(
                "{}",
                json!({
                    "i": o.i(), "j": o.j(), "class": o.cls.label(),
                    "q_alpha": o.q_alpha, "q_pm": o.q_pm, "u_dim": o.f_alpha(),
                })
            ),
        }
    }
    Ok(true)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".to_string(), |v| v.to_string())
}

fn verify(
    ext: &ExtArgs,
    csa: CsaParams,
    tower: &str,
    levels: &str,
    format: Format,
    mutation: Mutation,
) -> anyhow::Result<bool> {
    let sys = ext.system()?;
    let shape = parse_tower(&sys.model, &list(tower), &numbers(levels)?)?;
    let inst = Instance::new(sys.into(), csa, shape)?;
    let report = verify_instance_mutated(&inst, mutation);
    let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
    match format {
        Format::Tsv => {
            println!("row\ti\tj\tpartner\tclass\tlhs\trhs\tverdict\tdepth\tmodule_given\tmodule_split\tiota\terror");
            for v in &report.verdicts {
                let d = &v.diagnostics;
                println!(
                    "orbit\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    v.ij.0,
                    v.ij.1,
                    v.partner_ij
                        .map_or("-".to_string(), |(i, j)| format!("({i},{j})")),
                    v.cls.label(),
                    opt(v.lhs),
                    opt(v.rhs),
                    verdict(v.pass),
                    d.depth,
                    opt(d.module_given.map(|m| format!("{m:?}"))),
                    opt(d.module_split.map(|m| format!("{m:?}"))),
                    opt(d.iota),
                    d.error.clone().unwrap_or_else(|| "-".into()),
                );
            }
            let a = &report.aggregate;
            println!(
                "aggregate\t-\t-\t-\t-\t{}\t{}\t{}\t-\t-\t-\t-\t-",
                opt(a.lhs),
                opt(a.rhs),
                verdict(a.pass)
            );
        }
        Format::Json => {
            for v in &report.verdicts {
                println!("{}", serde_json::to_string(v)?);
            }
            println!(
                "{{\"aggregate\":{}}}",
                serde_json::to_string(&report.aggregate)?
            );
        }
    }
    eprintln!("{}", verdict(report.pass));
    Ok(report.pass)
}

fn sweep_cmd(grid: &GridSpec, format: Format, mutation: Mutation) -> anyhow::Result<bool> {
    let summary = sweep_mutated(grid, mutation)?;
    for row in &summary.failures {
        let orbits: Vec<String> = row
            .orbits
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        match format {
            Format::Tsv => println!(
                "{}\t{}\t{}",
                row.coords,
                orbits.join(","),
                if row.aggregate_failed {
                    "aggregate-fail"
                } else {
                    "aggregate-pass"
                }
            ),
            Format::Json => println!(
                "{}",
                json!({
                    "args": row.coords.to_string(),
                    "coords": row.coords,
                    "orbits": row.orbits,
                    "aggregate_failed": row.aggregate_failed,
                })
            ),
        }
    }
    eprintln!(
        "instances: {}, failures: {}",
        summary.instances, summary.failed
    );
    Ok(summary.failed == 0)
}
