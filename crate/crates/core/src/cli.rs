//! Command-line front end: argument types, dispatch and run records.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{sha256_hex, Cache};
use crate::certificates::{arith_deg, bezout_certificate, null_certificate, NullOutcome};
use crate::chow::{chow_ideal, ChowConfig};
use crate::cycles::{cycle_degree, ncap, vt_intersection, Cycle, DiagonalChoice, Hyperplane};
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::fixtures::paper_suite;
use crate::ideal::Ideal;
use crate::intclosure::{closure_membership, ClosureBounds, ClosureVerdict};
use crate::loja::{estimate_exponent, DistanceOracle, NumericScene, Parametrization};
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::scene::{parse_scene, Scene};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug, Clone)]
#[command(name = "chowalg", version, about = "Chow ideals, intersection cycles, integral closure and Nullstellensatz certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Coefficient field, `q` or `fp:<p>`; overrides the scene.
    #[arg(long, global = true)]
    pub field: Option<Field>,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Reduced Gröbner bases of the scene's ideals.
    Groebner {
        scene: PathBuf,
        #[arg(long)]
        ideal: Option<String>,
        /// `grevlex` or `lex`.
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Chow ideal of a cycle by random projections.
    ChowIdeal {
        scene: PathBuf,
        #[arg(long)]
        cycle: Option<String>,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
        /// Report the sampled generators only.
        #[arg(long)]
        no_reduce: bool,
    },
    /// Intersection cycle of several cycles through the diagonal.
    Intersect {
        scene: PathBuf,
        /// Comma-separated cycle names; all cycles by default.
        #[arg(long)]
        cycles: Option<String>,
    },
    /// `Z ncap H` for a cycle and a hyperplane.
    Ncap {
        scene: PathBuf,
        #[arg(long)]
        cycle: Option<String>,
        #[arg(long)]
        hyperplane: Option<String>,
    },
    /// Prime-power product contained in the sum of the ideals.
    BezoutCert {
        scene: PathBuf,
        #[arg(long)]
        ideals: Option<String>,
    },
    /// Nullstellensatz certificate, or NO_CERTIFICATE (exit 2).
    NullCert {
        scene: PathBuf,
        #[arg(long)]
        ideals: Option<String>,
    },
    /// Integral closure membership: IN (exit 0), OUT (exit 2), UNKNOWN (exit 3).
    IntcloseTest {
        scene: PathBuf,
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long)]
        aux_degree: Option<u32>,
        #[arg(long, default_value_t = 6)]
        weight_bound: u32,
    },
    /// Numeric Łojasiewicz exponent near the scene's center.
    LojaEstimate {
        scene: PathBuf,
        #[arg(long)]
        ideals: Option<String>,
        #[arg(long, default_value_t = 6)]
        shells: usize,
        #[arg(long, default_value_t = 16)]
        per_shell: usize,
    },
    /// Runs a built-in fixture suite.
    Fixtures {
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Groebner { .. } => "groebner",
            Command::ChowIdeal { .. } => "chow-ideal",
            Command::Intersect { .. } => "intersect",
            Command::Ncap { .. } => "ncap",
            Command::BezoutCert { .. } => "bezout-cert",
            Command::NullCert { .. } => "null-cert",
            Command::IntcloseTest { .. } => "intclose-test",
            Command::LojaEstimate { .. } => "loja-estimate",
            Command::Fixtures { .. } => "fixtures",
        }
    }

    pub fn scene(&self) -> Option<&PathBuf> {
        match self {
            Command::Groebner { scene, .. }
            | Command::ChowIdeal { scene, .. }
            | Command::Intersect { scene, .. }
            | Command::Ncap { scene, .. }
            | Command::BezoutCert { scene, .. }
            | Command::NullCert { scene, .. }
            | Command::IntcloseTest { scene, .. }
            | Command::LojaEstimate { scene, .. } => Some(scene),
            Command::Fixtures { .. } => None,
        }
    }
}

/// How a run ended; determines the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    /// NO_CERTIFICATE, or an element certified outside the closure.
    Negative,
    Unknown,
    /// A fixture suite with failures.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
            Status::Negative => 2,
            Status::Unknown => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub subcommand: String,
    pub input_hash: String,
    pub seed: u64,
    pub wall_time_ms: f64,
    pub cache_hit: bool,
    pub status: Status,
    pub payload: Value,
}

/// Names from a flag, else from the scene's task line, else all of them.
fn pick<'a, T>(items: &'a [(String, T)], flag: &Option<String>, task: Option<&String>, what: &str) -> Result<Vec<(&'a str, &'a T)>> {
    let Some(list) = flag.as_ref().or(task) else {
        if items.is_empty() {
            return Err(AlgebraError::Invalid(format!("scene has no {what}")));
        }
        return Ok(items.iter().map(|(n, v)| (n.as_str(), v)).collect());
    };
    list.split(',')
        .map(|name| {
            let name = name.trim();
            items
                .iter()
                .find(|(n, _)| n == name)
                .map(|(n, v)| (n.as_str(), v))
                .ok_or_else(|| AlgebraError::Invalid(format!("no {what} named `{name}`")))
        })
        .collect()
}

fn pick_one<'a, T>(items: &'a [(String, T)], flag: &Option<String>, task: Option<&String>, what: &str) -> Result<(&'a str, &'a T)> {
    let all = pick(items, flag, task, what)?;
    match all.as_slice() {
        [one] => Ok(*one),
        _ if flag.is_none() && task.is_none() => Ok(all[0]),
        _ => Err(AlgebraError::Invalid(format!("expected exactly one {what}"))),
    }
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub fn cycle_json(z: &Cycle) -> Value {
    json!({
        "components": z.terms().iter().map(|(c, a)| json!({
            "ideal": c.generators(),
            "multiplicity": a,
            "dimension": c.dimension(),
            "degree": c.degree(),
        })).collect::<Vec<_>>(),
        "degree": cycle_degree(z),
    })
}

fn task<'a>(scene: &'a Scene, key: &str) -> Option<&'a String> {
    scene.task.get(key)
}

/// Runs one subcommand on a parsed scene, without caching.
pub fn dispatch(command: &Command, scene: Option<&Scene>, common: &Common) -> Result<(Value, Status)> {
    let need = || scene.ok_or_else(|| AlgebraError::Invalid("this subcommand needs a scene".into()));
    match command {
        Command::Groebner { ideal, order, .. } => {
            let s = need()?;
            let order = match order.as_str() {
                "grevlex" => MonomialOrder::grevlex(),
                "lex" => MonomialOrder::lex(),
                other => return Err(AlgebraError::Invalid(format!("unknown order `{other}`"))),
            };
            let mut out = Vec::new();
            for (name, i) in pick(&s.ideals, ideal, task(s, "ideal"), "ideal")? {
                let gb = i.basis(&order);
                let mut entry = json!({"name": name, "basis": strings(gb.polys())});
                if !gb.is_unit() {
                    let h = i.hilbert_data()?;
                    entry["dimension"] = json!(h.dimension);
                    entry["degree"] = json!(h.degree);
                }
                out.push(entry);
            }
            Ok((json!({"ideals": out}), Status::Success))
        }
        Command::ChowIdeal { cycle, window, max_rounds, no_reduce, .. } => {
            let s = need()?;
            let (name, z) = pick_one(&s.cycles, cycle, task(s, "cycle"), "cycle")?;
            let config = ChowConfig { seed: common.seed, window: *window, max_rounds: *max_rounds, ..ChowConfig::default() };
            let res = chow_ideal(z, &config)?;
            let mut payload = json!({
                "cycle": name,
                "generators": strings(res.ideal.gens()),
                "rounds": res.rounds,
                "samples": res.samples,
                "window": window,
            });
            if !no_reduce {
                payload["reduced_basis"] = json!(strings(res.ideal.gb().polys()));
            }
            Ok((payload, Status::Success))
        }
        Command::Intersect { cycles, .. } => {
            let s = need()?;
            let chosen = pick(&s.cycles, cycles, task(s, "cycles"), "cycle")?;
            let zs: Vec<Cycle> = chosen.iter().map(|(_, z)| (*z).clone()).collect();
            let (vt, diagonal) = match vt_intersection(&zs, &DiagonalChoice::Standard) {
                Err(AlgebraError::DecompositionFailure(_)) => (vt_intersection(&zs, &DiagonalChoice::Seeded(common.seed))?, "seeded"),
                other => (other?, "standard"),
            };
            let bound: u64 = zs.iter().map(cycle_degree).product();
            Ok((
                json!({
                    "cycles": chosen.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
                    "diagonal": diagonal,
                    "intersection": cycle_json(&vt),
                    "degree_bound": bound,
                }),
                Status::Success,
            ))
        }
        Command::Ncap { cycle, hyperplane, .. } => {
            let s = need()?;
            let (zn, z) = pick_one(&s.cycles, cycle, task(s, "cycle"), "cycle")?;
            let (hn, h) = pick_one(&s.hyperplanes, hyperplane, task(s, "hyperplane"), "hyperplane")?;
            let cut = ncap(z, &Hyperplane::new(h.clone())?)?;
            Ok((json!({"cycle": zn, "hyperplane": hn, "result": cycle_json(&cut), "input_degree": cycle_degree(z)}), Status::Success))
        }
        Command::BezoutCert { ideals, .. } => {
            let s = need()?;
            let chosen: Vec<Ideal> = pick(&s.ideals, ideals, task(s, "ideals"), "ideal")?.into_iter().map(|(_, i)| i.clone()).collect();
            let cert = bezout_certificate(&chosen, &DiagonalChoice::Standard)?;
            Ok((json!({"certificate": cert.to_json(), "verified": true}), Status::Success))
        }
        Command::NullCert { ideals, .. } => {
            let s = need()?;
            let chosen: Vec<Ideal> = pick(&s.ideals, ideals, task(s, "ideals"), "ideal")?.into_iter().map(|(_, i)| i.clone()).collect();
            match null_certificate(&chosen)? {
                NullOutcome::Certificate(c) => Ok((json!({"result": "CERTIFICATE", "certificate": c.to_json()}), Status::Success)),
                NullOutcome::NoCertificate { bound, arith_degrees } => Ok((
                    json!({"result": "NO_CERTIFICATE", "bound": bound, "arith_degrees": arith_degrees}),
                    Status::Negative,
                )),
            }
        }
        Command::IntcloseTest { element, ideal, max_k, aux_degree, weight_bound, .. } => {
            let s = need()?;
            let (fname, f) = pick_one(&s.elements, element, task(s, "element"), "element")?;
            let (iname, i) = pick_one(&s.ideals, ideal, task(s, "ideal"), "ideal")?;
            let bounds = ClosureBounds { max_k: *max_k, max_aux_degree: *aux_degree, witness_weight_bound: *weight_bound, seed: common.seed };
            let verdict = closure_membership(f, i, &bounds)?;
            let status = match verdict {
                ClosureVerdict::In(_) => Status::Success,
                ClosureVerdict::Out(_) => Status::Negative,
                ClosureVerdict::Unknown { .. } => Status::Unknown,
            };
            let mut payload = verdict.to_json();
            payload["element"] = json!(fname);
            payload["ideal"] = json!(iname);
            Ok((payload, status))
        }
        Command::LojaEstimate { ideals, shells, per_shell, .. } => {
            let s = need()?;
            let chosen = pick(&s.ideals, ideals, task(s, "ideals"), "ideal")?;
            let n = s.ring.nvars();
            let degree_bound = match task(s, "degree_bound") {
                Some(v) => v.parse().map_err(|_| AlgebraError::Invalid(format!("bad degree_bound `{v}`")))?,
                None => {
                    let mut d = 1;
                    for (_, i) in &chosen {
                        d *= arith_deg(i)?;
                    }
                    d
                }
            };
            let params = |maps: &[Vec<Polynomial>]| maps.iter().map(|m| Parametrization::new(m.clone())).collect::<Result<Vec<_>>>();
            let oracle = if s.intersection.is_empty() { DistanceOracle::Penalty } else { DistanceOracle::Parametrized(params(&s.intersection)?) };
            let ns = NumericScene {
                generators: chosen.iter().map(|(_, i)| i.gens().to_vec()).collect(),
                center: s.center.clone().unwrap_or_else(|| vec![0.0; n]).into_iter().map(|c| Complex64::new(c, 0.0)).collect(),
                radius: s.radius.unwrap_or(1.0),
                oracle,
                approaches: params(&s.approaches)?,
                degree_bound,
                shells: *shells,
                per_shell: *per_shell,
                seed: common.seed,
            };
            let e = estimate_exponent(&ns)?;
            Ok((json!({"ideals": chosen.iter().map(|(n, _)| *n).collect::<Vec<_>>(), "estimate": e}), Status::Success))
        }
        Command::Fixtures { suite } => {
            if suite != "paper" {
                return Err(AlgebraError::Invalid(format!("unknown suite `{suite}`")));
            }
            let results = paper_suite(common.seed);
            let passed = results.iter().filter(|r| r.passed).count();
            let status = if passed == results.len() { Status::Success } else { Status::Failed };
            Ok((json!({"suite": suite, "passed": passed, "total": results.len(), "results": results}), status))
        }
    }
}

/// Hash of everything that determines the payload apart from the seed.
pub fn input_hash(command: &Command, scene_text: &str, common: &Common) -> String {
    let flags = serde_json::to_string(command).unwrap_or_default();
    let field = common.field.map(|f| format!("{f:?}")).unwrap_or_default();
    sha256_hex(&[command.name().as_bytes(), scene_text.as_bytes(), flags.as_bytes(), field.as_bytes()])
}

/// Parses the scene, consults the cache and runs the subcommand.
pub fn execute(cli: &Cli, cache: &Cache) -> Result<RunRecord> {
    let start = Instant::now();
    let text = match cli.command.scene() {
        Some(p) => std::fs::read_to_string(p).map_err(|e| AlgebraError::Invalid(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    let hash = input_hash(&cli.command, &text, &cli.common);
    let key = sha256_hex(&[VERSION.as_bytes(), hash.as_bytes(), &cli.common.seed.to_le_bytes()]);
    let cacheable = !cli.common.no_cache && !matches!(cli.command, Command::Fixtures { .. });
    let record = |payload: Value, status: Status, hit: bool| RunRecord {
        tool_version: VERSION.to_string(),
        subcommand: cli.command.name().to_string(),
        input_hash: hash.clone(),
        seed: cli.common.seed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        cache_hit: hit,
        status,
        payload,
    };
    if cacheable {
        if let Some(entry) = cache.load(&key) {
            let status = entry.get("status").cloned().and_then(|s| serde_json::from_value::<Status>(s).ok());
            if let (Some(status), Some(payload)) = (status, entry.get("payload")) {
                return Ok(record(payload.clone(), status, true));
            }
        }
    }
    let scene = match cli.command.scene() {
        Some(_) => Some(parse_scene(&text, cli.common.field)?),
        None => None,
    };
    let (payload, status) = dispatch(&cli.command, scene.as_ref(), &cli.common)?;
    if cacheable {
        // a failed write only costs a recomputation next time
        let _ = cache.store(&key, &json!({"status": status, "payload": payload}));
    }
    Ok(record(payload, status, false))
}

/// JSON body for a failed run.
pub fn error_json(e: &AlgebraError) -> Value {
    let mut v = json!({"error": {"code": e.code(), "message": e.to_string()}});
    match e {
        AlgebraError::Parse { line, column, .. } => {
            v["error"]["line"] = json!(line);
            v["error"]["column"] = json!(column);
        }
        AlgebraError::NoStabilization { partial, .. } => v["error"]["partial"] = json!(partial),
        _ => {}
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("chowalg").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_common_flags_anywhere() {
        let c = cli(&["chow-ideal", "a.scene", "--seed", "7", "--field", "fp:5", "--window", "3"]);
        assert_eq!(c.common.seed, 7);
        assert_eq!(c.common.field, Some(Field::Prime(5)));
        assert!(matches!(c.command, Command::ChowIdeal { window: 3, max_rounds: 64, .. }));
        assert!(Cli::try_parse_from(["chowalg", "groebner", "a", "--field", "fp:6"]).is_err());
    }

    #[test]
    fn cache_round_trip_and_seed_miss() {
        let dir = tempfile::tempdir().unwrap();
        let scene = dir.path().join("two.scene");
        std::fs::write(&scene, "vars x y\nideal I: x^2, x*y - 1\n").unwrap();
        let cache = Cache::new(dir.path().join("cache"), VERSION);
        let path = scene.to_str().unwrap();
        let first = execute(&cli(&["groebner", path]), &cache).unwrap();
        let second = execute(&cli(&["groebner", path]), &cache).unwrap();
        assert!(!first.cache_hit && second.cache_hit);
        assert_eq!((&first.payload, &first.input_hash), (&second.payload, &second.input_hash));
        assert!(!execute(&cli(&["groebner", path, "--seed", "1"]), &cache).unwrap().cache_hit);
        assert!(!execute(&cli(&["groebner", path, "--no-cache"]), &cache).unwrap().cache_hit);
        assert!(!execute(&cli(&["groebner", path]), &Cache::new(dir.path().join("cache"), "0.0.0-other")).unwrap().cache_hit);
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), VERSION);
        let scene = dir.path().join("s.scene");
        std::fs::write(&scene, "vars x y\nideal A: x\nideal B: y\nelement f: x*y\nideal M: x^2, y^2\n").unwrap();
        let p = scene.to_str().unwrap();
        assert_eq!(execute(&cli(&["null-cert", p, "--no-cache", "--ideals", "A,B"]), &cache).unwrap().status.exit_code(), 2);
        assert_eq!(execute(&cli(&["intclose-test", p, "--no-cache", "--ideal", "M"]), &cache).unwrap().status.exit_code(), 0);
        std::fs::write(&scene, "vars x y\nideal I: x +\n").unwrap();
        match execute(&cli(&["groebner", p, "--no-cache"]), &cache) {
            Err(e @ AlgebraError::Parse { .. }) => assert_eq!(error_json(&e)["error"]["line"], 2),
            other => panic!("{other:?}"),
        }
    }
}
