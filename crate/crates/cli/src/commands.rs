use std::path::Path;

use linsofic::approx::{ApproxMapFile, CheckOptions, DEFAULT_SAMPLES, EXHAUSTIVE_BUDGET};
use linsofic::projective::within_budget;
use linsofic::tiling::{CandidateOrder, SearchOptions};
use linsofic::{
    build_conjugator, build_d_approximation, build_quotient_representation, candidate_window,
    demo_weak_stability, hyperfinite_decompose, monotile, verify_bms_sweep, Algebra, ApproxMap, Ball,
    BuildOptions, ConjugatorOptions, Error, Field, FolnerWindow, SweepMode,
};
use serde_json::{json, Value};

use crate::config::{Order, RunConfig};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Check,
    Tile,
    Conjugate,
    Amplify,
    QuotientRep,
    LldVerify,
    DemoWeakStability,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Check => "check",
            Command::Tile => "tile",
            Command::Conjugate => "conjugate",
            Command::Amplify => "amplify",
            Command::QuotientRep => "quotient-rep",
            Command::LldVerify => "lld verify",
            Command::DemoWeakStability => "demo weak-stability",
        }
    }
}

/// Command output: the report body and whether every verified property held.
pub struct Outcome {
    pub result: Value,
    pub ok: bool,
}

/// Map files named in the config, read before the field is fixed.
#[derive(Default)]
pub struct MapFiles {
    pub a: Option<(String, ApproxMapFile)>,
    pub b: Option<(String, ApproxMapFile)>,
}

fn read_map(path: &Path) -> Result<(String, ApproxMapFile), CliError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(name.clone(), e))?;
    let value: Value = serde_json::from_str(&text)?;
    let map = value
        .pointer("/result/map")
        .or_else(|| value.get("map"))
        .cloned()
        .unwrap_or(value);
    Ok((name, serde_json::from_value(map)?))
}

impl MapFiles {
    pub fn load(cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(MapFiles {
            a: cfg.map.as_deref().map(read_map).transpose()?,
            b: cfg.map_b.as_deref().map(read_map).transpose()?,
        })
    }

    /// The field of the first map file, used when no field is configured.
    pub fn field(&self) -> Option<linsofic::FieldSpec> {
        self.a.as_ref().or(self.b.as_ref()).map(|(_, f)| f.field)
    }
}

pub fn run<F: Field>(cmd: Command, cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<Outcome, CliError> {
    match cmd {
        Command::Build => build(cfg, field),
        Command::Check => check(cfg, field, maps),
        Command::Tile => tile(cfg, field, maps),
        Command::Conjugate => conjugate(cfg, field, maps),
        Command::Amplify => amplify(cfg, field, maps),
        Command::QuotientRep => quotient_rep(cfg, field),
        Command::LldVerify => lld_verify(cfg, field),
        Command::DemoWeakStability => demo(cfg, field),
    }
}

fn algebra(cfg: &RunConfig) -> Result<Algebra, CliError> {
    Ok(Algebra::new(cfg.algebra())?)
}

fn window(cfg: &RunConfig, alg: &Algebra) -> Result<FolnerWindow, CliError> {
    if let Some(path) = &cfg.window {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(name, e))?;
        let w: FolnerWindow = serde_json::from_str(&text)?;
        w.validate(alg)?;
        return Ok(w);
    }
    let n = RunConfig::require(&cfg.n, "n")?;
    Ok(candidate_window(alg, n)?)
}

fn built<F: Field>(cfg: &RunConfig, field: &F) -> Result<ApproxMap<F>, CliError> {
    let alg = algebra(cfg)?;
    let d = RunConfig::require(&cfg.d, "d")?;
    let w = window(cfg, &alg)?;
    let options = BuildOptions { require_invariance: !RunConfig::flag(cfg.skip_invariance) };
    Ok(build_d_approximation(&alg, &w, d, field, options)?)
}

fn quotient<F: Field>(cfg: &RunConfig, field: &F) -> Result<ApproxMap<F>, CliError> {
    let alg = algebra(cfg)?;
    let m = RunConfig::require(&cfg.m, "m")?;
    let cap = match (cfg.cap, cfg.d) {
        (Some(c), _) => c,
        (None, Some(d)) => 2 * d,
        (None, None) => return Err(CliError::Config("missing required setting `cap` (or `d`)".into())),
    };
    Ok(build_quotient_representation(&alg, m, field, cap)?)
}

/// The map under study: a map file, a quotient representation, or a fresh build.
fn source<F: Field>(cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<ApproxMap<F>, CliError> {
    if let Some((name, file)) = &maps.a {
        return Ok(ApproxMap::from_file(field, file, name)?);
    }
    if cfg.m.is_some() {
        return quotient(cfg, field);
    }
    if cfg.n.is_some() || cfg.window.is_some() {
        return built(cfg, field);
    }
    Err(CliError::Config("no map given: set `map`, `m` or `n`/`window`".into()))
}

fn search_options(cfg: &RunConfig) -> SearchOptions {
    let order = match cfg.order {
        Some(Order::RandomFirst) => CandidateOrder::RandomFirst,
        _ => CandidateOrder::Structured,
    };
    SearchOptions { order, ..SearchOptions::default() }
}

fn build<F: Field>(cfg: &RunConfig, field: &F) -> Result<Outcome, CliError> {
    let phi = built(cfg, field)?;
    Ok(Outcome {
        result: json!({ "n": phi.n(), "degree_cap": phi.degree_cap(), "map": phi.to_file() }),
        ok: true,
    })
}

fn check<F: Field>(cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<Outcome, CliError> {
    let phi = source(cfg, field, maps)?;
    let d = RunConfig::require(&cfg.d, "d")?;
    let exhaustive = RunConfig::flag(cfg.exhaustive);
    if exhaustive {
        let k = Ball::enumerate(phi.algebra(), d)?.len();
        let fits = field.order().is_some_and(|q| within_budget(q, k, EXHAUSTIVE_BUDGET));
        if !fits {
            return Err(Error::UnsupportedSize(format!(
                "exhaustive rank check over {} with {k} coefficients",
                field.spec()
            ))
            .into());
        }
    }
    let options = CheckOptions {
        samples: cfg.samples.map_or(DEFAULT_SAMPLES, |s| s as usize),
        seed: cfg.seed(),
        allow_exhaustive: exhaustive,
    };
    let report = phi.check_d_approximation(d, options)?;
    Ok(Outcome { ok: report.certified(), result: report.to_json() })
}

fn tile<F: Field>(cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<Outcome, CliError> {
    let phi = source(cfg, field, maps)?;
    let d = RunConfig::require(&cfg.d, "d")?;
    let words = RunConfig::require(&cfg.tile, "tile")?;
    let tiling = monotile(&phi, &words, d, cfg.seed(), search_options(cfg))?;
    let blocks = hyperfinite_decompose(&phi, &tiling)?;
    Ok(Outcome {
        ok: tiling.is_independent() && tiling.meets_size_bound(),
        result: json!({ "tiling": tiling.to_json(), "blocks": blocks.to_json() }),
    })
}

fn conjugate<F: Field>(cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<Outcome, CliError> {
    let (Some((name_a, a)), Some((name_b, b))) = (&maps.a, &maps.b) else {
        return Err(CliError::Config("`conjugate` needs `map` and `map_b`".into()));
    };
    let phi_a = ApproxMap::from_file(field, a, name_a)?;
    let phi_b = ApproxMap::from_file(field, b, name_b)?;
    let epsilon = RunConfig::require(&cfg.epsilon, "epsilon")?;
    let options = ConjugatorOptions { window: cfg.tile.clone(), search: search_options(cfg), ..Default::default() };
    let result = build_conjugator(&phi_a, &phi_b, &epsilon, cfg.seed(), &options)?;
    Ok(Outcome { ok: result.within_epsilon() && result.bound_respected(), result: result.to_json() })
}

fn amplify<F: Field>(cfg: &RunConfig, field: &F, maps: &MapFiles) -> Result<Outcome, CliError> {
    let psi = source(cfg, field, maps)?;
    let targets = RunConfig::require(&cfg.targets, "targets")?;
    let maps: Vec<Value> = psi
        .amplify(&targets)?
        .into_iter()
        .map(|rho| json!({ "n": rho.n(), "copies": rho.n() / psi.n(), "pad": rho.n() % psi.n(), "map": rho.to_file() }))
        .collect();
    Ok(Outcome { result: json!({ "source_n": psi.n(), "amplified": maps }), ok: true })
}

fn quotient_rep<F: Field>(cfg: &RunConfig, field: &F) -> Result<Outcome, CliError> {
    let psi = quotient(cfg, field)?;
    Ok(Outcome {
        result: json!({ "n": psi.n(), "degree_cap": psi.degree_cap(), "map": psi.to_file() }),
        ok: true,
    })
}

fn parse_dims(dims: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("dims `{dims}` must look like AxB"));
    let (a, b) = dims.split_once('x').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn lld_verify<F: Field>(cfg: &RunConfig, field: &F) -> Result<Outcome, CliError> {
    let (a, b) = parse_dims(&RunConfig::require(&cfg.dims, "dims")?)?;
    let d = RunConfig::require(&cfg.d, "d")?;
    let mode = if RunConfig::flag(cfg.exhaustive) {
        SweepMode::Exhaustive
    } else {
        SweepMode::Random { samples: cfg.samples.unwrap_or(1000), seed: cfg.seed() }
    };
    let report = verify_bms_sweep(field, a, b, d, mode)?;
    Ok(Outcome { ok: report.passed(), result: report.to_json() })
}

fn demo<F: Field>(cfg: &RunConfig, field: &F) -> Result<Outcome, CliError> {
    let alg = algebra(cfg)?;
    let epsilon = RunConfig::require(&cfg.epsilon, "epsilon")?;
    let report = demo_weak_stability(&alg, field, &epsilon, cfg.seed())?;
    Ok(Outcome { ok: report.success(), result: report.to_json() })
}
