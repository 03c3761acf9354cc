use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gptdarwin::composition::CompositeSystem;
use gptdarwin::darwinism::{check_idealized_darwinism, check_minimal_darwinism, check_robust_spreading, ScenarioSpec};
use gptdarwin::demos::{demo_names, run_demo, DemoOptions, DEMOS};
use gptdarwin::gpt::GptSystem;
use gptdarwin::io::{parse_vector, read_composite, read_scenario, read_theory, CompositeSpec};
use gptdarwin::numeric::{tolerance_from_env, Scalar};
use gptdarwin::report::{texts, text_rows, Certificate, Outcome, Report};
use gptdarwin::separability::{
    is_separable_effect_with, is_separable_state_with, separable_effect_generators, separable_state_generators,
    SeparabilityVerdict,
};
use gptdarwin::theories::{AnySystem, TheorySpec};
use gptdarwin::{stm, Error, Q};

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "gptdarwin", version, about = "Fan-out processes and classicality checks in finite GPTs")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the full JSON report instead of the summary; goes before the
    /// subcommand, since `report --json` takes a path.
    #[arg(long)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or describe a theory (`cpt:3`, `qt:2`, `ngon:5`, `gbit`, `stm:2`, or a JSON file).
    Theory {
        #[command(subcommand)]
        action: TheoryAction,
    },
    /// Maximal and MCI-frames of a theory.
    Frames { theory: String },
    /// Run a check on a scenario or composite file.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Decide separability of a state or effect of a composite.
    Separability(SeparabilityArgs),
    /// Run a registered demo; `--list` prints the registry.
    Demo {
        name: Option<String>,
        #[arg(long, default_value_t = stm::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        envs: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// Run demos and write their reports to a JSON file.
    Report {
        #[arg(long = "json", value_name = "PATH")]
        path: PathBuf,
        /// Demos to include; all registered demos when omitted.
        #[arg(long = "demo")]
        demos: Vec<String>,
        #[arg(long, default_value_t = stm::DEFAULT_BUDGET)]
        budget: u64,
        /// Leave out timings so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Subcommand)]
enum TheoryAction {
    /// Full description: cones, unit, designated frames.
    Build { theory: String },
    /// Counts and invariant checks.
    Info { theory: String },
}

#[derive(Subcommand)]
enum CheckKind {
    Darwinism(ScenarioArg),
    Spreading(ScenarioArg),
    Minimal(ScenarioArg),
    Composition {
        /// Composite JSON file or inline JSON.
        #[arg(long)]
        composite: String,
    },
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario JSON file or inline JSON.
    #[arg(long)]
    scenario: String,
}

#[derive(Args)]
struct SeparabilityArgs {
    #[arg(long)]
    composite: String,
    #[arg(long, value_enum, default_value_t = Kind::State)]
    kind: Kind,
    /// Coordinates, e.g. `1/4,0,0,1/4` or a JSON array of strings.
    vector: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    State,
    Effect,
}

type Res<T> = gptdarwin::Result<T>;

fn inline_or_file<T: serde::de::DeserializeOwned>(arg: &str, read: impl Fn(&Path) -> Res<T>) -> Res<T> {
    let t = arg.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(format!("inline JSON: {e}")));
    }
    read(Path::new(arg))
}

fn theory_spec(arg: &str) -> Res<TheorySpec> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("theory parameter {s:?}")));
    match arg.split_once(':') {
        Some(("cpt", d)) => Ok(TheorySpec::Cpt { d: num(d)? }),
        Some(("qt", n)) => Ok(TheorySpec::Qt { n: num(n)? }),
        Some(("ngon", n)) => Ok(TheorySpec::Ngon { n: num(n)? }),
        Some(("stm", b)) => Ok(TheorySpec::Stm { bits: num(b)? }),
        None if arg == "gbit" => Ok(TheorySpec::Gbit),
        _ => inline_or_file(arg, read_theory),
    }
}

fn scenario(arg: &str) -> Res<ScenarioSpec> {
    inline_or_file(arg, read_scenario)
}

fn composite(arg: &str) -> Res<CompositeSystem<Q>> {
    inline_or_file::<CompositeSpec>(arg, read_composite)?.build()
}

fn describe<S: Scalar>(sys: &GptSystem<S>, full: bool) -> Res<serde_json::Value> {
    let inv = sys.check_invariants()?;
    let mut v = json!({
        "name": sys.name(),
        "dim": sys.dim(),
        "backend": S::BACKEND,
        "extreme_states": sys.extreme_states().len(),
        "pure_effects": sys.pure_effect_rays().len(),
        "transformations": sys.transformations().iter().map(|t| t.name.clone()).collect::<Vec<_>>(),
        "designated_frames": sys.designated_frames().len(),
        "invariants": inv,
    });
    if full {
        v["unit"] = json!(texts(sys.unit()));
        v["states"] = json!(text_rows(&sys.extreme_states()));
        v["effects"] = json!(text_rows(&sys.pure_effect_rays()));
    }
    Ok(v)
}

fn theory_report(arg: &str, full: bool) -> Res<Report> {
    let spec = theory_spec(arg)?;
    let mut r = Report::new(if full { "theory build" } else { "theory info" }, json!(spec));
    let (data, ok) = match spec.build()? {
        AnySystem::Rational(s) => (describe(&s, full)?, s.check_invariants()?.ok()),
        AnySystem::Float(s) => (describe(&s, full)?, s.check_invariants()?.ok()),
    };
    r.line(format!(
        "{}: dim {}, {} extreme states, {} pure effects, invariants {}",
        data["name"].as_str().unwrap_or_default(),
        data["dim"],
        data["extreme_states"],
        data["pure_effects"],
        if ok { "hold" } else { "FAIL" }
    ));
    r.outcome = Outcome::from_pass(ok);
    r.data = data;
    Ok(r)
}

fn frames_of<S: Scalar>(r: &mut Report, sys: &GptSystem<S>) -> Res<serde_json::Value> {
    let maximal = sys.find_maximal_frames()?;
    let mci = sys.find_mci_frames()?;
    let mut out = Vec::new();
    for f in &mci {
        let v = sys.quasi_classical_violation(f)?;
        out.push(json!({
            "states": text_rows(&f.states),
            "measurement": text_rows(f.distinguishing_effects()),
            "quasi_classical": v.is_none(),
        }));
    }
    r.line(format!(
        "{}: {} maximal frames of size {}, {} MCI-frames",
        sys.name(),
        maximal.len(),
        maximal.iter().map(|f| f.len()).max().unwrap_or(0),
        mci.len()
    ));
    Ok(json!({
        "maximal": maximal.iter().map(|f| text_rows(&f.states)).collect::<Vec<_>>(),
        "mci": out,
    }))
}

fn frames_report(arg: &str) -> Res<Report> {
    let spec = theory_spec(arg)?;
    let mut r = Report::new("frames", json!(spec));
    r.data = match spec.build()? {
        AnySystem::Rational(s) => frames_of(&mut r, &s)?,
        AnySystem::Float(s) => frames_of(&mut r, &s)?,
    };
    Ok(r)
}

fn check_report(kind: &CheckKind) -> Res<Report> {
    let (name, arg) = match kind {
        CheckKind::Darwinism(a) => ("darwinism", &a.scenario),
        CheckKind::Spreading(a) => ("spreading", &a.scenario),
        CheckKind::Minimal(a) => ("minimal", &a.scenario),
        CheckKind::Composition { composite: c } => {
            let c = composite(c)?;
            let rep = c.validate_composition()?;
            let mut r = Report::new("check composition", json!({ "composite": c.system.name() }));
            for i in &rep.items {
                r.line(format!("item {}: {} ({} checked)", i.item, if i.passed { "holds" } else { "FAILS" }, i.checked));
            }
            r.outcome = Outcome::from_pass(rep.passed());
            r.data = json!(rep);
            return Ok(r);
        }
    };
    let spec = scenario(arg)?;
    let s = spec.build()?;
    let check = match kind {
        CheckKind::Darwinism(_) => check_idealized_darwinism(&s)?,
        CheckKind::Spreading(_) => check_robust_spreading(&s)?,
        _ => {
            let envs = spec
                .fixed_env_states()?
                .ok_or_else(|| Error::Invalid("minimal Darwinism needs `fixed_env` in the scenario".into()))?;
            check_minimal_darwinism(&s, &envs)?
        }
    };
    let mut r = Report::new(format!("check {name}"), json!(spec));
    r.line(format!(
        "{}: {} {} ({} rows, {} failures, worst residual {})",
        s.id,
        check.check,
        if check.passed { "holds" } else { "FAILS" },
        check.rows.len(),
        check.failures,
        check.worst_residual
    ));
    if let Some(f) = check.first_failure() {
        r.line(format!("first failure: ν={:?} j={:?} k={:?}: {} vs {}", f.nu, f.j, f.k, f.lhs, f.rhs));
    }
    r.outcome = Outcome::from_pass(check.passed);
    r.data = json!(check);
    Ok(r)
}

fn separability_report(a: &SeparabilityArgs) -> Res<Report> {
    let c = composite(&a.composite)?;
    let v = parse_vector(&a.vector)?;
    let (what, gens) = match a.kind {
        Kind::State => ("state", separable_state_generators(&c)?),
        Kind::Effect => ("effect", separable_effect_generators(&c)?),
    };
    let verdict = match a.kind {
        Kind::State => {
            if !c.system.is_state(&v)? {
                return Err(Error::Invalid(format!("not a state of {}", c.system.name())));
            }
            is_separable_state_with(&c, &gens, &v)?
        }
        Kind::Effect => {
            if !c.system.is_valid_effect(&v)? {
                return Err(Error::Invalid(format!("not an effect of {}", c.system.name())));
            }
            is_separable_effect_with(&c, &gens, &v)?
        }
    };
    let mut r = Report::new("separability", json!({ "composite": c.system.name(), "kind": what, "vector": texts(&v) }));
    let claim = format!("{} {what} {}", c.system.name(), if verdict.is_separable() { "is separable" } else { "is entangled" });
    r.line(claim.clone());
    r.data = match &verdict {
        SeparabilityVerdict::Separable { terms } => {
            r.certificates.push(Certificate::combination(claim, &gens, &v, terms));
            json!({ "separable": true, "weights": terms.iter().map(|(i, w)| json!([i, w.to_text()])).collect::<Vec<_>>() })
        }
        SeparabilityVerdict::Entangled { witness, complete } => {
            r.certificates.push(Certificate::witness(claim, &gens, &v, witness));
            json!({ "separable": false, "witness": texts(witness), "complete": complete })
        }
    };
    Ok(r)
}

fn emit(r: &Report, as_json: bool) -> Res<()> {
    if as_json {
        println!("{}", r.to_json()?);
    } else {
        for l in &r.summary {
            println!("{l}");
        }
        println!("outcome: {}", serde_json::to_string(&r.outcome)?.trim_matches('"'));
    }
    Ok(())
}

fn run(cli: &Cli) -> Res<u8> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Invalid(format!("--jobs: {e}")))?;
    }
    tolerance_from_env()?;
    let mut r = match &cli.command {
        Command::Theory { action: TheoryAction::Build { theory } } => theory_report(theory, true)?,
        Command::Theory { action: TheoryAction::Info { theory } } => theory_report(theory, false)?,
        Command::Frames { theory } => frames_report(theory)?,
        Command::Check { kind } => check_report(kind)?,
        Command::Separability(a) => separability_report(a)?,
        Command::Demo { list: true, .. } => {
            for (n, d) in DEMOS {
                println!("{n:24} {d}");
            }
            return Ok(0);
        }
        Command::Demo { name: None, .. } => {
            return Err(Error::Invalid(format!("demo name required; registered: {}", demo_names().join(", "))));
        }
        Command::Demo { name: Some(name), budget, envs, .. } => {
            run_demo(name, &DemoOptions { budget: *budget, envs: *envs })?
        }
        Command::Report { path, demos, budget, no_timing } => {
            let names: Vec<String> =
                if demos.is_empty() { demo_names().into_iter().map(String::from).collect() } else { demos.clone() };
            let opts = DemoOptions { budget: *budget, envs: None };
            let mut reports = Vec::new();
            let mut worst = Outcome::Pass;
            for n in &names {
                let mut r = run_demo(n, &opts)?;
                if *no_timing {
                    r.elapsed_ms = None;
                }
                println!("{n}: {}", serde_json::to_string(&r.outcome)?.trim_matches('"'));
                worst = match (worst, r.outcome) {
                    (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
                    (Outcome::BudgetExhausted, _) | (_, Outcome::BudgetExhausted) => Outcome::BudgetExhausted,
                    _ => Outcome::Pass,
                };
                reports.push(r);
            }
            std::fs::write(path, serde_json::to_string_pretty(&reports)? + "\n")?;
            return Ok(worst.exit_code() as u8);
        }
    };
    if !matches!(cli.command, Command::Demo { .. }) {
        r.self_test()?;
    }
    emit(&r, cli.json)?;
    Ok(r.outcome.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
