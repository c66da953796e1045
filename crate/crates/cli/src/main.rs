use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use menuwalk::app::presets::Preset;
use menuwalk::app::AppSpec;
use menuwalk::catalog::Catalog;
use menuwalk::explorer::{ExplorerConfig, RunLog, Strategy};
use menuwalk::harness::{run_experiment, ExperimentConfig, ExperimentResult};
use menuwalk::report::{generate_report, render};
use menuwalk::testplan::{render_coverage_table, render_oracle_table, triage, verify_oracles, TestPlan};

#[derive(Parser)]
#[command(name = "menuwalk", version, about = "GUI test generation against a simulated business application")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every strategy (or those given) over repeated seeds, with tables, automata and reports.
    Run(RunArgs),
    /// One strategy, one seed.
    Explore(RunArgs),
    /// Re-render test reports from run logs.
    Report(LogArgs),
    /// Check run logs against a test plan.
    Verify(LogArgs),
}

#[derive(Args)]
struct AppArgs {
    /// Built-in application: desk, erp-like or invoice-demo.
    #[arg(long, default_value = "desk")]
    app_preset: Preset,
    /// Application spec file (TOML); overrides --app-preset.
    #[arg(long)]
    app: Option<PathBuf>,
    /// Input catalog file; defaults to the preset's catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Test plan (CSV file or directory of per-area CSV files); defaults to the preset's plan.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "MENUWALK_OUT", default_value = "menuwalk-out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    app: AppArgs,
    /// Strategy to run; repeat or comma-separate for several. Default: all four.
    #[arg(long, value_delimiter = ',')]
    strategy: Vec<Strategy>,
    /// Explorer settings file (TOML); flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    actions_per_episode: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    pcomplex: Option<f64>,
    #[arg(long)]
    pi: Option<f64>,
    /// Seeds per strategy, counting up from --seed.
    #[arg(long, default_value_t = 5)]
    repetitions: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LogArgs {
    #[command(flatten)]
    app: AppArgs,
    /// Run log files written by `run` or `explore`.
    #[arg(required = true)]
    logs: Vec<PathBuf>,
}

struct App {
    name: String,
    spec: AppSpec,
    catalog: Catalog,
    plan: Option<TestPlan>,
}

fn load_app(a: &AppArgs) -> Result<App> {
    let (name, spec) = match &a.app {
        Some(p) => (
            p.file_stem().and_then(|s| s.to_str()).unwrap_or("app").to_string(),
            AppSpec::load(p).with_context(|| format!("loading {}", p.display()))?,
        ),
        None => (a.app_preset.name().to_string(), a.app_preset.spec()),
    };
    let catalog = match &a.catalog {
        Some(p) => Catalog::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => a.app_preset.catalog(),
    };
    for w in catalog.warnings() {
        log::warn!("{w}");
    }
    let plan = match &a.plan {
        Some(p) => Some(TestPlan::load(p).with_context(|| format!("loading {}", p.display()))?),
        None if a.app.is_none() => a.app_preset.plan(),
        None => None,
    };
    Ok(App { name, spec, catalog, plan })
}

fn explorer_config(r: &RunArgs) -> Result<ExplorerConfig> {
    let mut cfg = match &r.config {
        Some(p) => ExplorerConfig::from_toml_str(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => ExplorerConfig::default(),
    };
    if let Some(v) = r.episodes {
        cfg.episodes = v;
    }
    if let Some(v) = r.actions_per_episode {
        cfg.actions_per_episode = v;
    }
    if let Some(v) = r.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = r.pcomplex {
        cfg.p_complex = v;
    }
    if let Some(v) = r.pi {
        cfg.pi = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn experiment(r: &RunArgs, single: bool) -> Result<()> {
    let app = load_app(&r.app)?;
    let mut cfg = ExperimentConfig::new(&app.name, app.spec, app.catalog);
    cfg.plan = app.plan;
    cfg.explorer = explorer_config(r)?;
    if single {
        if r.strategy.len() > 1 {
            bail!("explore takes a single --strategy");
        }
        cfg.strategies = vec![r.strategy.first().copied().unwrap_or(Strategy::Ssrls)];
        cfg.seeds = vec![r.seed];
    } else {
        if r.repetitions == 0 {
            bail!("--repetitions must be at least 1");
        }
        if !r.strategy.is_empty() {
            cfg.strategies = r.strategy.clone();
        }
        cfg.seeds = (r.seed..r.seed + r.repetitions).collect();
    }
    let out = &r.app.out;
    let result = run_experiment(&cfg, Some(out))?;
    print_summary(&result, out);
    Ok(())
}

fn print_summary(r: &ExperimentResult, out: &Path) {
    for st in &r.stats {
        let means: Vec<String> = st.means.iter().map(|m| format!("{m:.1}")).collect();
        println!("{:<20} Menu/CRUD/Input/SaveKO/SaveOK means: {}", st.strategy.name(), means.join(" / "));
    }
    for (s, ps) in &r.wilcoxon {
        let ps: Vec<String> = ps.iter().map(|p| format!("{p:.3}")).collect();
        println!("Wilcoxon RLS < {s}: {}", ps.join(" / "));
    }
    println!("artifacts in {}", out.display());
}

type Replayed = Vec<(RunLog, Vec<menuwalk::explorer::TestCase>)>;

fn replay_logs(args: &LogArgs) -> Result<(App, Replayed)> {
    let app = load_app(&args.app)?;
    let mut runs = Vec::new();
    for p in &args.logs {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let log = RunLog::parse(&text).with_context(|| format!("parsing {}", p.display()))?;
        if log.app != app.name {
            log::warn!("{} was recorded on {:?}, replaying on {:?}", p.display(), log.app, app.name);
        }
        let tests = log.replay(&app.spec).with_context(|| format!("replaying {}", p.display()))?;
        runs.push((log, tests));
    }
    Ok((app, runs))
}

fn report(args: &LogArgs) -> Result<()> {
    let (_, runs) = replay_logs(args)?;
    for (log, tests) in &runs {
        let (rep, index) = generate_report(tests)?;
        let dir = args.app.out.join("reports").join(log.strategy.name()).join(format!("seed{}", log.seed));
        let files = render(&rep, &index, &dir)?;
        println!("{}: {} files", dir.display(), files.len());
    }
    Ok(())
}

fn verify(args: &LogArgs) -> Result<()> {
    let (app, runs) = replay_logs(args)?;
    let Some(plan) = app.plan else { bail!("no test plan: pass --plan") };
    let tables = args.app.out.join("tables");
    fs::create_dir_all(&tables).with_context(|| format!("creating {}", tables.display()))?;
    for (log, tests) in &runs {
        let (rep, _) = generate_report(tests)?;
        let cov = verify_oracles(&plan, tests, &rep);
        let tag = format!("{}-seed{}", log.strategy, log.seed);
        let coverage = render_coverage_table(&[(log.strategy.name(), &cov)]);
        let oracles = render_oracle_table(&cov);
        let t = triage(&cov);
        let triage_csv = format!(
            "manual test design (objectives),manual replay (oracles),report browsing (oracles)\n{},{},{}\n",
            t.manual_design, t.manual_replay, t.browse
        );
        for (name, body) in [("coverage", &coverage), ("oracles", &oracles), ("triage", &triage_csv)] {
            let path = tables.join(format!("{name}-{tag}.csv"));
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        }
        println!("{tag}\n{coverage}{oracles}{triage_csv}");
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run(r) => experiment(&r, false),
        Command::Explore(r) => experiment(&r, true),
        Command::Report(l) => report(&l),
        Command::Verify(l) => verify(&l),
    }
}
