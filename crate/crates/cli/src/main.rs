//! `mpc`: command-line front end for the residue and chamber engine.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mpc_core::chambers;
use mpc_core::generators::{self, GeneratorParams};
use mpc_core::kirwan::{self, count_chambers_by_ideals, distinguish, Cohomology, EquivariantClass, EulerMode, IdealEngine};
use mpc_core::model::{self, fmt_point, parse_point, validate};
use mpc_core::residues::jk_integral;
use mpc_core::wallcross::{cross_wall, dendrite_integral};
use mpc_core::{Error, LinearForm, Space};

#[derive(Parser, Debug)]
#[command(name = "mpc", version, about = "Residues, Kirwan kernels and chambers of Hamiltonian torus actions")]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the parallel residue sums (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Also write a machine-readable report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural checks of a space document.
    Validate { space: PathBuf },
    /// Walls and chambers of the moment polytope.
    Chambers {
        space: PathBuf,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Integral of a class over the reduced space at a point.
    Integrate {
        space: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// Generic vector for `mt:` classes.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
    },
    /// Kernel of the Kirwan map at a point, degree by degree.
    Fingerprint {
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    /// Chamber count from geometry and from distinct ideals.
    CountChambers {
        space: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// A class in the ideal at q but not at p.
    Distinguish {
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Wall-crossing difference between two adjacent points.
    Cross {
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
    },
    /// Integral by the recursive wall-crossing walk.
    Dendrite {
        space: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
    },
    /// Emit a generated space, e.g. `gen su3 2,1` or `gen hirzebruch 2`.
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(short = 'o', long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Restriction of an SU(3) Schubert class to a fixed point.
    Schubert {
        #[arg(long = "lambda", value_name = "A,B", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Geometry,
    Ideals,
    Both,
}

/// Human-readable text plus its machine-readable twin.
struct Report {
    text: String,
    data: Value,
    /// Exit status for reports that describe a failure (e.g. an invalid space).
    status: u8,
}

impl Report {
    fn ok(text: String, data: Value) -> Self {
        Report { text, data, status: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax(_)
        | Error::Version(_)
        | Error::Polynomial(_)
        | Error::NotGkm(_)
        | Error::InvalidParams(_)
        | Error::InvalidArgument(_)
        | Error::UnknownFixedPoint(_)
        | Error::UnknownClass(_)
        | Error::DegenerateXi(_) => 2,
        Error::SingularValue(_) | Error::OutsidePolytope(_) => 3,
        Error::UnsupportedRank(_) => 4,
        Error::GenericityFailure(_) | Error::DegenerateConfiguration | Error::RayDegeneracy(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.text);
            if let Some(path) = &cli.json {
                if let Err(e) = write_file(path, &format!("{:#}\n", report.data)) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_file(path: &Path, text: &str) -> mpc_core::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> mpc_core::Result<Space> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    model::parse_space(&text)
}

fn load_valid(path: &Path) -> mpc_core::Result<Space> {
    let space = load(path)?;
    validate(&space).into_result()?;
    Ok(space)
}

fn vector(space: &Space, text: Option<&str>, seed: u64) -> mpc_core::Result<LinearForm> {
    match text {
        Some(t) => {
            let v = parse_point(t)?;
            if v.dim() != space.rank {
                return Err(Error::InvalidArgument(format!("vector {t:?} has {} coordinates, rank is {}", v.dim(), space.rank)));
            }
            Ok(v)
        }
        None => Ok(space.generic_vector(seed)),
    }
}

fn point(space: &Space, text: &str) -> mpc_core::Result<LinearForm> {
    let p = parse_point(text)?;
    if p.dim() != space.rank {
        return Err(Error::InvalidArgument(format!("point {text:?} has {} coordinates, rank is {}", p.dim(), space.rank)));
    }
    Ok(p)
}

/// Resolves `one`, `euler:<id>`, `mt:<id>` or a class named in the space file.
fn resolve_class(space: &Space, name: &str, eta: &LinearForm) -> mpc_core::Result<EquivariantClass> {
    if name == "one" {
        return Ok(EquivariantClass::one(space));
    }
    if let Some(id) = name.strip_prefix("euler:") {
        let i = space.index_of(id)?;
        let mut restrictions = EquivariantClass::zero(space).restrictions;
        restrictions[i] = kirwan::euler_class(space, id, &EulerMode::Full)?;
        return Ok(EquivariantClass::new(restrictions));
    }
    if let Some(id) = name.strip_prefix("mt:") {
        return Cohomology::new(space)?.morse_thom_class(id, eta);
    }
    space.classes.get(name).cloned().ok_or_else(|| Error::UnknownClass(name.to_string()))
}

fn class_json(space: &Space, cls: &EquivariantClass) -> Value {
    let table: serde_json::Map<String, Value> =
        space.fixed_points.iter().zip(&cls.restrictions).map(|(f, p)| (f.id.clone(), Value::String(p.to_string()))).collect();
    Value::Object(table)
}

fn class_text(out: &mut String, space: &Space, label: &str, cls: &EquivariantClass) {
    let _ = writeln!(out, "{label}:");
    for (f, p) in space.fixed_points.iter().zip(&cls.restrictions) {
        let _ = writeln!(out, "  {}: {}", f.id, p);
    }
}

fn run(cli: &Cli) -> mpc_core::Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Validate { space } => {
            let s = load(space)?;
            let rep = validate(&s);
            let issues: Vec<Value> = rep.issues.iter().map(|i| json!({"kind": format!("{:?}", i.kind), "message": i.message})).collect();
            let data = json!({"valid": rep.is_ok(), "issues": issues, "index_census": rep.index_census});
            Ok(Report { text: format!("{rep}\n"), data, status: if rep.is_ok() { 0 } else { 2 } })
        }
        Command::Chambers { space, svg } => {
            let s = load_valid(space)?;
            let arr = chambers::arrangement(&s)?;
            let mut text = String::new();
            let _ = writeln!(text, "walls: {}", arr.walls.len());
            for w in &arr.walls {
                let _ = writeln!(text, "  {} -- {}", fmt_point(&w.endpoints[0]), fmt_point(&w.endpoints[1]));
            }
            let _ = writeln!(text, "chambers: {}", arr.num_chambers());
            let mut samples = Vec::new();
            for c in 0..arr.num_chambers() {
                let p = arr.sample_point(c);
                let _ = writeln!(text, "  chamber {c}: sample {}", fmt_point(&p));
                samples.push(fmt_point(&p));
            }
            if let Some(path) = svg {
                let moments: Vec<LinearForm> = s.fixed_points.iter().map(|f| f.moment.clone()).collect();
                write_file(path, &arr.to_svg(&moments))?;
            }
            let walls: Vec<Value> = arr.walls.iter().map(|w| json!([fmt_point(&w.endpoints[0]), fmt_point(&w.endpoints[1])])).collect();
            Ok(Report::ok(text, json!({"chambers": arr.num_chambers(), "walls": walls, "samples": samples})))
        }
        Command::Integrate { space, class, point: pt, xi, eta } => {
            let s = load_valid(space)?;
            let p = point(&s, pt)?;
            let xi = vector(&s, xi.as_deref(), seed)?;
            let eta = vector(&s, eta.as_deref(), seed)?;
            let cls = resolve_class(&s, class, &eta)?;
            let v = jk_integral(&s, &cls, &p, &xi, seed)?;
            Ok(Report::ok(format!("{v}\n"), json!({"class": class, "point": fmt_point(&p), "value": v.to_string()})))
        }
        Command::Fingerprint { space, point: pt, xi } => {
            let s = load_valid(space)?;
            let p = point(&s, pt)?;
            let xi = vector(&s, xi.as_deref(), seed)?;
            let fp = IdealEngine::new(&s, Some(xi), seed)?.fingerprint(&p)?;
            let betti: Vec<String> = fp.reduced_betti().iter().map(usize::to_string).collect();
            let text = format!("{fp}reduced betti: ({})\n", betti.join(","));
            let degrees: Vec<Value> = fp
                .degrees
                .iter()
                .map(|k| {
                    let rows: Vec<Vec<String>> = k.kernel.iter().map(|r| r.iter().map(mpc_core::algebra::fmt_rational).collect()).collect();
                    json!({"degree": k.degree, "dim": k.dim, "kernel": rows})
                })
                .collect();
            Ok(Report::ok(text, json!({"point": fmt_point(&p), "top_degree": fp.top_degree, "degrees": degrees, "reduced_betti": fp.reduced_betti()})))
        }
        Command::CountChambers { space, method } => {
            let s = load_valid(space)?;
            let (text, data) = match method {
                Method::Geometry => {
                    let n = chambers::arrangement(&s)?.num_chambers();
                    (format!("chambers: {n} (geometry)\n"), json!({"geometry": n}))
                }
                Method::Ideals => {
                    let c = count_chambers_by_ideals(&s, None, seed)?;
                    (format!("chambers: {} (ideals)\n", c.by_ideals), json!({"ideals": c.by_ideals}))
                }
                Method::Both => {
                    let c = count_chambers_by_ideals(&s, None, seed)?;
                    (
                        format!("chambers: {} (geometry) / {} (ideals)\n", c.geometric, c.by_ideals),
                        json!({"geometry": c.geometric, "ideals": c.by_ideals, "agree": c.agrees()}),
                    )
                }
            };
            Ok(Report::ok(text, data))
        }
        Command::Distinguish { space, p, q } => {
            let s = load_valid(space)?;
            let (p, q) = (point(&s, p)?, point(&s, q)?);
            let d = distinguish(&s, &p, &q, seed)?;
            let mut text = String::new();
            let _ = writeln!(text, "wall: {} -- {}", fmt_point(&d.wall.endpoints[0]), fmt_point(&d.wall.endpoints[1]));
            let _ = writeln!(text, "normal: {}", d.normal);
            let _ = writeln!(text, "anchor: {}", d.anchor);
            let _ = writeln!(text, "eta: {}", d.eta);
            let _ = writeln!(text, "polarization: {}", d.polarization);
            class_text(&mut text, &s, "alpha", &d.alpha);
            class_text(&mut text, &s, "beta", &d.beta);
            class_text(&mut text, &s, "gamma", &d.gamma);
            let _ = writeln!(text, "certificate: integral at p = {}, integral at q = {}", d.value_p, d.value_q);
            let data = json!({
                "anchor": d.anchor, "eta": d.eta.to_string(), "polarization": d.polarization.to_string(),
                "alpha": class_json(&s, &d.alpha), "beta": class_json(&s, &d.beta), "gamma": class_json(&s, &d.gamma),
                "value_p": d.value_p.to_string(), "value_q": d.value_q.to_string(),
            });
            Ok(Report::ok(text, data))
        }
        Command::Cross { space, p, q, class, xi, eta } => {
            let s = load_valid(space)?;
            let (p, q) = (point(&s, p)?, point(&s, q)?);
            let xi = vector(&s, xi.as_deref(), seed)?;
            let eta = vector(&s, eta.as_deref(), seed)?;
            let cls = resolve_class(&s, class, &eta)?;
            let c = cross_wall(&s, &p, &q, &cls, &xi, seed)?;
            let mut text = String::new();
            let _ = writeln!(text, "wall: {} -- {}", fmt_point(&c.wall.endpoints[0]), fmt_point(&c.wall.endpoints[1]));
            let _ = writeln!(text, "circle: {}", c.circle_direction);
            for (ids, v) in &c.terms {
                let _ = writeln!(text, "  component {{{}}}: {v}", ids.join(","));
            }
            let _ = writeln!(text, "wall-crossing difference: {}", c.difference);
            let _ = writeln!(text, "direct difference: {}", c.direct);
            let data = json!({"difference": c.difference.to_string(), "direct": c.direct.to_string(), "agree": c.difference == c.direct});
            Ok(Report::ok(text, data))
        }
        Command::Dendrite { space, class, point: pt, eta } => {
            let s = load_valid(space)?;
            let p = point(&s, pt)?;
            let eta = vector(&s, eta.as_deref(), seed)?;
            let cls = resolve_class(&s, class, &eta)?;
            let v = dendrite_integral(&s, &cls, &p, seed)?;
            Ok(Report::ok(format!("{v}\n"), json!({"class": class, "point": fmt_point(&p), "value": v.to_string()})))
        }
        Command::Gen { name, params, output } => {
            let args: Vec<&str> = params.iter().map(String::as_str).collect();
            let gp = GeneratorParams::from_parts(name, &args)?;
            let s = generators::generate(&gp)?;
            let doc = model::serialize_space(&s);
            let data = json!({"generator": gp.to_string(), "fixed_points": s.fixed_points.len()});
            match output {
                Some(path) => {
                    write_file(path, &doc)?;
                    Ok(Report::ok(format!("wrote {} ({} fixed points)\n", path.display(), s.fixed_points.len()), data))
                }
                None => Ok(Report::ok(doc, data)),
            }
        }
        Command::Schubert { lambda, sigma, tau } => {
            let gp = GeneratorParams::from_parts("su3", &[lambda.as_str()])?;
            let GeneratorParams::Su3(a, b) = &gp else { unreachable!("su3 parameters") };
            generators::su3_weight(a.clone(), b.clone())?;
            let (si, ti) = (generators::weyl_index(sigma)?, generators::weyl_index(tau)?);
            let r = generators::schubert_restriction(si, ti);
            Ok(Report::ok(format!("{r}\n"), json!({"sigma": sigma, "tau": tau, "restriction": r.to_string()})))
        }
    }
}
