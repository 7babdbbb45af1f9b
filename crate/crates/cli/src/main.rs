//! `cubsym`: verification campaigns and one-shot constructions for zero-cycles
//! on cubic surfaces.

use std::error::Error;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cubsym::birmaps::{self, Lemma1Config};
use cubsym::campaign::{self, CampaignConfig, TrialStatus};
use cubsym::cubic3::{self, CubicError};
use cubsym::fields::FieldDesc;
use cubsym::io;
use cubsym::localsol;
use cubsym::projgeom::{PointCluster, ProjPoint};
use cubsym::surface::{self, CubicForm};

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser, Debug)]
#[command(name = "cubsym", version, about = "Zero-cycles on cubic surfaces: twisted cubics, birational maps, local solubility")]
struct Cli {
    /// Master seed for sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads for campaigns (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base field, "p" or "p^k".
    #[arg(long, global = true, default_value = "101")]
    field: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SurfaceArgs {
    /// Named surface over --field: fermat or example1.
    #[arg(long, default_value = "fermat")]
    surface: String,
    /// Surface JSON file; overrides --surface.
    #[arg(long)]
    surface_file: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a seeded roundtrip campaign for Lemma 1, Lemma 2 or the theorem.
    Verify {
        /// 1, 2 or theorem.
        #[arg(long, default_value = "2")]
        lemma: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Composition of B such as "1,1"; repeat to cycle through several.
        #[arg(long = "b-composition")]
        b_composition: Vec<String>,
        /// Composition of D such as "2,2"; repeat to cycle through several.
        #[arg(long = "d-composition")]
        d_composition: Vec<String>,
        /// Lemma 1 data as JSON {"O","Oprime","Pi"}; random per trial if absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replay a single trial and print its details.
        #[arg(long)]
        trial: Option<usize>,
    },
    /// The twisted cubic through six points given as JSON.
    TwistedCubic {
        /// JSON: {"field", "points": [[c0,c1,c2,c3], ...]} or a list of points.
        points: PathBuf,
    },
    /// (B, D) -> (T, C): the twisted cubic through B and D and the residual cluster.
    Map24 {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        d: PathBuf,
    },
    /// Lemma 1 maps: forward (B, D) -> (B, C, A') or backward (B, C, A') -> (B, D).
    Map231 {
        #[arg(value_enum)]
        direction: Direction,
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Lemma 1 data as JSON {"O","Oprime","Pi"}.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        d: Option<PathBuf>,
        #[arg(long)]
        c: Option<PathBuf>,
        #[arg(long = "a-prime")]
        a_prime: Option<PathBuf>,
    },
    /// Lemma 2 maps: forward B -> (E, M) or backward (E, M) -> B.
    Lemma2 {
        #[arg(value_enum)]
        direction: Direction,
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Plane JSON {"field","equation"}.
        #[arg(long)]
        plane: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        e: Option<PathBuf>,
        #[arg(long)]
        m: Option<PathBuf>,
    },
    /// Solubility of a diagonal cubic over the tame extensions of Q_p of given degrees.
    Local {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value = "1,7,49,-2", allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value = "1,2,4")]
        degrees: String,
    },
    /// Whether the n-th symmetric power of a diagonal cubic has a Q_p-point.
    Symn {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value = "1,7,49,-2", allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Local solubility report for x0³ + 7x1³ + 49x2³ − 2x3³ at p = 7.
    Example1,
    /// Sample a Frobenius-stable cluster on the surface.
    Sample {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Part degrees such as "2,1,1".
        #[arg(long, default_value = "1")]
        composition: String,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| format!("bad {what} entry \"{x}\"").into()))
        .collect()
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn load_surface(args: &SurfaceArgs, field: &FieldDesc) -> CliResult<(CubicForm, String)> {
    match &args.surface_file {
        Some(p) => Ok((io::surface_from_json(&read_json(p)?)?, p.display().to_string())),
        None => Ok((io::named_surface(&args.surface, field)?, args.surface.clone())),
    }
}

fn load_cluster(path: &Option<PathBuf>, name: &str) -> CliResult<PointCluster> {
    let p = path.as_ref().ok_or_else(|| format!("--{name} is required"))?;
    Ok(io::cluster_from_json(&read_json(p)?)?)
}

fn load_point(path: &Option<PathBuf>, name: &str, field: &FieldDesc) -> CliResult<ProjPoint> {
    let p = path.as_ref().ok_or_else(|| format!("--{name} is required"))?;
    Ok(io::point_from_json(&read_json(p)?, Some(field))?)
}

fn undefined_json(u: &birmaps::Undefined) -> Value {
    json!({"status": "Undefined", "reason": u.reason.as_str(), "detail": u.detail})
}

/// Output plus whether the command succeeded.
struct Outcome {
    value: Value,
    ok: bool,
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let field: FieldDesc = cli.field.parse()?;
    match &cli.command {
        Command::Verify {
            lemma,
            trials,
            surface,
            b_composition,
            d_composition,
            config,
            trial,
        } => {
            let (x, name) = load_surface(surface, &field)?;
            let mut cfg = CampaignConfig::new(lemma.parse()?, x, &name, *trials, cli.seed);
            if !b_composition.is_empty() {
                cfg.b_compositions = b_composition.iter().map(|c| parse_list(c, "composition")).collect::<Result<_, _>>()?;
            }
            if !d_composition.is_empty() {
                cfg.d_compositions = d_composition.iter().map(|c| parse_list(c, "composition")).collect::<Result<_, _>>()?;
            }
            if let Some(path) = config {
                cfg.config = Some(io::config_from_json(&read_json(path)?)?);
            }
            cfg.validate()?;
            if let Some(w) = cfg.small_field_warning() {
                eprintln!("warning: {w}");
            }
            if let Some(i) = trial {
                let r = campaign::run_trial(&cfg, *i)?;
                let (status, detail) = match &r.status {
                    TrialStatus::Undefined { reason, detail } => (reason.as_str().to_string(), detail.clone()),
                    TrialStatus::RoundtripOk => ("RoundtripOk".to_string(), String::new()),
                    TrialStatus::RoundtripFail(m) => ("RoundtripFail".to_string(), m.clone()),
                };
                let ok = !matches!(r.status, TrialStatus::RoundtripFail(_));
                return Ok(Outcome {
                    value: json!({"trial": r.index, "seed": r.seed, "status": status, "detail": detail,
                                  "input": r.input_key, "output": r.output_key}),
                    ok,
                });
            }
            let start = Instant::now();
            let report = campaign::run_campaign(&cfg, cli.jobs)?;
            eprintln!("wall time: {:.2} s", start.elapsed().as_secs_f64());
            Ok(Outcome {
                ok: report.passed(),
                value: report.to_json(),
            })
        }
        Command::TwistedCubic { points } => {
            let v = read_json(points)?;
            let (list, default_field) = match &v {
                Value::Array(a) => (a.clone(), field.clone()),
                Value::Object(_) => {
                    let f = match v.get("field") {
                        Some(f) => io::field_from_json(f)?,
                        None => field.clone(),
                    };
                    let a = v
                        .get("points")
                        .and_then(Value::as_array)
                        .ok_or("expected a \"points\" array")?;
                    (a.clone(), f)
                }
                _ => return Err("expected a JSON array or object of points".into()),
            };
            let pts = list
                .iter()
                .map(|p| match p {
                    Value::Array(_) => io::point_from_json(&json!({"coords": p}), Some(&default_field)),
                    _ => io::point_from_json(p, Some(&default_field)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if pts.len() != 6 {
                return Err(format!("expected six points, found {}", pts.len()).into());
            }
            match cubic3::through6(&pts) {
                Ok(t) => {
                    let contained: Vec<bool> = pts.iter().map(|p| cubic3::contains(&t, p)).collect();
                    let mut out = io::cubic_to_json(&t);
                    out["params"] = Value::Array(t.params().iter().map(io::point_to_json).collect());
                    out["contains"] = json!(contained);
                    Ok(Outcome {
                        ok: contained.iter().all(|&c| c),
                        value: out,
                    })
                }
                Err(CubicError::NotGeneralPosition { quadruple }) => Ok(Outcome {
                    value: json!({"error": "NotGeneralPosition", "coplanar": quadruple}),
                    ok: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Map24 { surface, b, d } => {
            let (x, _) = load_surface(surface, &field)?;
            let b = load_cluster(&Some(b.clone()), "b")?;
            let d = load_cluster(&Some(d.clone()), "d")?;
            Ok(match birmaps::reconstruct_24(&x, &b, &d) {
                Ok((t, c)) => Outcome {
                    value: json!({"status": "Defined", "curve": io::cubic_to_json(&t), "C": io::cluster_to_json(&c)}),
                    ok: true,
                },
                Err(u) => Outcome {
                    value: undefined_json(&u),
                    ok: false,
                },
            })
        }
        Command::Map231 {
            direction,
            surface,
            config,
            b,
            d,
            c,
            a_prime,
        } => {
            let (x, _) = load_surface(surface, &field)?;
            let cfg: Lemma1Config = io::config_from_json(&read_json(config)?)?;
            let b = load_cluster(&Some(b.clone()), "b")?;
            let result = match direction {
                Direction::Forward => {
                    let d = load_cluster(d, "d")?;
                    birmaps::lemma1_forward(&x, &cfg, &b, &d).map(|img| {
                        json!({"status": "Defined", "B": io::cluster_to_json(&img.b), "C": io::cluster_to_json(&img.c),
                               "A_prime": io::point_to_json(&img.a_prime), "A": io::point_to_json(&img.a),
                               "curve": io::cubic_to_json(&img.curve)})
                    })
                }
                Direction::Backward => {
                    let c = load_cluster(c, "c")?;
                    let a = load_point(a_prime, "a-prime", x.field())?;
                    birmaps::lemma1_backward(&x, &cfg, &b, &c, &a)
                        .map(|(b, d)| json!({"status": "Defined", "B": io::cluster_to_json(&b), "D": io::cluster_to_json(&d)}))
                }
            };
            Ok(match result {
                Ok(value) => Outcome { value, ok: true },
                Err(u) => Outcome {
                    value: undefined_json(&u),
                    ok: false,
                },
            })
        }
        Command::Lemma2 {
            direction,
            surface,
            plane,
            b,
            e,
            m,
        } => {
            let (x, _) = load_surface(surface, &field)?;
            let pi = io::plane_from_json(&read_json(plane)?)?;
            let result = match direction {
                Direction::Forward => {
                    let b = load_cluster(b, "b")?;
                    birmaps::lemma2_forward(&x, &pi, &b).map(|(e, m)| {
                        json!({"status": "Defined", "E": io::point_to_json(&e), "M": io::point_to_json(&m)})
                    })
                }
                Direction::Backward => {
                    let e = load_point(e, "e", x.field())?;
                    let m = load_point(m, "m", x.field())?;
                    birmaps::lemma2_backward(&x, &pi, &e, &m)
                        .map(|b| json!({"status": "Defined", "B": io::cluster_to_json(&b)}))
                }
            };
            Ok(match result {
                Ok(value) => Outcome { value, ok: true },
                Err(u) => Outcome {
                    value: undefined_json(&u),
                    ok: false,
                },
            })
        }
        Command::Local { p, coeffs, degrees } => {
            let coeffs: Vec<i64> = parse_list(coeffs, "coefficient")?;
            let degrees: Vec<u32> = parse_list(degrees, "degree")?;
            let mut out = Vec::new();
            let mut certified = true;
            for d in degrees {
                let mut verdicts = Vec::new();
                for k in localsol::enumerate_tame_extensions(*p, d)? {
                    let v = localsol::soluble(&coeffs, &k)?;
                    certified &= v.verify(&coeffs, &k);
                    verdicts.push(io::verdict_to_json(&k, &v));
                }
                out.push(json!({"degree": d, "descriptors": verdicts.len(), "verdicts": verdicts}));
            }
            Ok(Outcome {
                value: json!({"p": p, "coeffs": coeffs, "degrees": out, "certificates_ok": certified}),
                ok: certified,
            })
        }
        Command::Symn { p, coeffs, n } => {
            let coeffs: Vec<i64> = parse_list(coeffs, "coefficient")?;
            let r = localsol::symn_empty(&coeffs, *p, *n)?;
            let degrees: Vec<Value> = r
                .degrees
                .iter()
                .map(|d| {
                    json!({"degree": d.degree, "descriptors": d.verdicts.len(), "soluble": d.any_soluble(),
                           "verdicts": d.verdicts.iter().map(|(k, v)| io::verdict_to_json(k, v)).collect::<Vec<_>>()})
                })
                .collect();
            Ok(Outcome {
                value: json!({"p": p, "coeffs": coeffs, "n": n, "empty": r.empty,
                              "partition": r.witness_partition, "degrees": degrees}),
                ok: true,
            })
        }
        Command::Example1 => {
            let r = campaign::example1()?;
            Ok(Outcome {
                ok: r.matches(),
                value: r.to_json(),
            })
        }
        Command::Sample { surface, composition } => {
            let (x, _) = load_surface(surface, &field)?;
            let comp: Vec<usize> = parse_list(composition, "composition")?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let c = surface::sample_cluster(&x, &comp, &mut rng)?;
            Ok(Outcome {
                value: io::cluster_to_json(&c),
                ok: true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.value).expect("JSON values serialize");
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, format!("{text}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
