//! Command-line front end: convert polytope files, decide the PF-property,
//! extract affine generators, compose polytopes, and emit model polytopes.
//!
//! Every run prints a line-oriented `key=value` report (or one JSON object
//! with `--json`). Exit codes: 0 for ok, 1 for a mathematically negative
//! verdict, 2 for precondition, cap, or parse errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pfkit::compose::{verify_composition, CompositionInput, FTable};
use pfkit::io;
use pfkit::pfp;
use pfkit::polytope::{dd, hull, HRep, Polytope, VRep};
use pfkit::{caps, models, QVector};

#[derive(Parser)]
#[command(name = "pfkit", version, about = "Exact-arithmetic polytope toolkit")]
struct Cli {
    /// Cap on intermediate ray counts in double description runs.
    #[arg(long, global = true)]
    cap_rays: Option<usize>,
    /// Cap on vertex counts of constructed polytopes.
    #[arg(long, global = true)]
    cap_vertices: Option<usize>,
    /// Emit the report as a single JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a polytope file between representations, canonicalizing it.
    Convert(ConvertArgs),
    /// Decide the projected-faces property for a polytope and coordinates.
    CheckPf(CheckPfArgs),
    /// Extract the affine generator maps of a PF pair.
    Generators(GeneratorsArgs),
    /// Compose two polytopes through an f-table and verify the hypotheses.
    Compose(ComposeArgs),
    /// Emit a named model polytope.
    Model(ModelArgs),
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    to: Target,
    /// Output file; the converted text goes to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Target {
    Hrep,
    Vrep,
}

#[derive(Args)]
struct CheckPfArgs {
    #[arg(long)]
    input: PathBuf,
    /// 0-based comma-separated coordinate list, e.g. 0,2.
    #[arg(long)]
    coords: String,
    /// Where to write a Radon counterexample certificate on failure.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct GeneratorsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    coords: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(long)]
    p1: PathBuf,
    #[arg(long)]
    p2: PathBuf,
    /// f-table file with the split header.
    #[arg(long)]
    f: PathBuf,
    /// Check hypotheses and both conclusions (otherwise only build Q).
    #[arg(long)]
    verify: bool,
    /// Where to write the composed system Q.
    #[arg(long)]
    out_q: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// parity | parity-ef | pstar | simplex-t | hypercube | standard-simplex
    /// | square-pyramid | prism | stab | tsp
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    /// Graph file for stab/tsp models.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Base polytope file for the prism model.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(PartialEq)]
enum Status {
    Ok,
    Fail,
    Error,
}

struct Report {
    command: &'static str,
    status: Status,
    payload: Vec<(String, String)>,
    /// Set when the artifact itself went to stdout; the report then moves to
    /// stderr so the artifact stays pipeable.
    artifact_on_stdout: bool,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            status: Status::Ok,
            payload: Vec::new(),
            artifact_on_stdout: false,
        }
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.payload.push((key.to_string(), value.to_string()));
    }

    fn fail(&mut self) {
        self.status = Status::Fail;
    }

    fn render(&self, json: bool, wall_time_ms: u128) -> String {
        let status = match self.status {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
        };
        if json {
            let mut map = serde_json::Map::new();
            map.insert("command".into(), self.command.into());
            map.insert("status".into(), status.into());
            let mut payload = serde_json::Map::new();
            for (k, v) in &self.payload {
                payload.insert(k.clone(), v.clone().into());
            }
            map.insert("payload".into(), payload.into());
            map.insert(
                "wall_time_ms".into(),
                serde_json::Value::from(wall_time_ms as u64),
            );
            serde_json::Value::Object(map).to_string()
        } else {
            let mut out = String::new();
            let _ = writeln!(out, "command={}", self.command);
            let _ = writeln!(out, "status={status}");
            for (k, v) in &self.payload {
                let _ = writeln!(out, "{k}={v}");
            }
            let _ = write!(out, "wall_time_ms={wall_time_ms}");
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();

    let mut base = caps::Caps::default();
    if let Ok(spec) = std::env::var("PFKIT_CAPS") {
        match caps::parse_overrides(&spec, base) {
            Ok(parsed) => base = parsed,
            Err(msg) => {
                eprintln!("PFKIT_CAPS: {msg}");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(r) = cli.cap_rays {
        base.max_rays = r;
    }
    if let Some(v) = cli.cap_vertices {
        base.max_vertices = v;
    }
    caps::set(base);

    let command_name = match &cli.command {
        Command::Convert(_) => "convert",
        Command::CheckPf(_) => "check-pf",
        Command::Generators(_) => "generators",
        Command::Compose(_) => "compose",
        Command::Model(_) => "model",
    };

    let mut report = Report::new(command_name);
    let outcome = match &cli.command {
        Command::Convert(args) => run_convert(args, &mut report),
        Command::CheckPf(args) => run_check_pf(args, &mut report),
        Command::Generators(args) => run_generators(args, &mut report),
        Command::Compose(args) => run_compose(args, &mut report),
        Command::Model(args) => run_model(args, &mut report),
    };

    if let Err(err) = outcome {
        report.status = Status::Error;
        report.payload.clear();
        report.put("message", format!("{err:#}"));
    }
    let rendered = report.render(cli.json, started.elapsed().as_millis());
    if report.artifact_on_stdout {
        eprintln!("{rendered}");
    } else {
        println!("{rendered}");
    }
    match report.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Error => ExitCode::from(2),
    }
}

fn load_polytope(path: &PathBuf) -> Result<Polytope> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let poly = match io::parse_polytope_file(&text)? {
        io::PolytopeFile::H(h) => Polytope::from_hrep(&h)?,
        io::PolytopeFile::V(v) => Polytope::from_points(v.points)?,
    };
    Ok(poly)
}

fn parse_coords(spec: &str) -> Result<Vec<usize>> {
    let coords: Vec<usize> = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("bad coordinate '{t}'"))
        })
        .collect::<Result<_>>()?;
    if coords.is_empty() {
        bail!("empty coordinate list");
    }
    Ok(coords)
}

/// Write to the file when given, otherwise print the artifact itself.
fn emit(output: &Option<PathBuf>, text: &str, report: &mut Report, key: &str) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            report.put(key, path.display());
        }
        None => {
            print!("{text}");
            report.artifact_on_stdout = true;
        }
    }
    Ok(())
}

fn run_convert(args: &ConvertArgs, report: &mut Report) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let parsed = io::parse_polytope_file(&text)?;
    let out = match (parsed, args.to) {
        (io::PolytopeFile::H(h), Target::Vrep) => {
            let v = dd(&h)?;
            report.put("points", v.points.len());
            io::write_vrep(&v)
        }
        (io::PolytopeFile::V(v), Target::Hrep) => {
            let h = hull(&v)?;
            report.put("inequalities", h.inequalities.len());
            report.put("equations", h.equations.len());
            io::write_hrep(&h)
        }
        (io::PolytopeFile::H(h), Target::Hrep) => {
            // Canonicalize through the round trip.
            let p = Polytope::from_hrep(&h)?;
            report.put("inequalities", p.hrep().inequalities.len());
            report.put("equations", p.hrep().equations.len());
            io::write_hrep(p.hrep())
        }
        (io::PolytopeFile::V(v), Target::Vrep) => {
            let p = Polytope::from_points(v.points)?;
            report.put("points", p.vertex_count());
            io::write_vrep(p.vrep())
        }
    };
    emit(&args.output, &out, report, "output")
}

fn run_check_pf(args: &CheckPfArgs, report: &mut Report) -> Result<()> {
    let p = load_polytope(&args.input)?;
    let coords = parse_coords(&args.coords)?;
    let pf = pfp::check_pf(&p, &coords)?;
    report.put("holds", pf.holds);
    report.put("checked_faces", pf.checked_faces);
    if pf.holds {
        return Ok(());
    }
    report.fail();
    let witness = pf.witness_face.expect("failing report carries a witness");
    report.put(
        "witness_vertices",
        format_index_list(&witness.vertex_indices),
    );
    if let Some(path) = &args.certificate {
        let cert = pfp::radon_certificate(&p, &coords, &witness)?;
        std::fs::write(path, render_certificate(&cert, coords.len()))
            .with_context(|| format!("writing {}", path.display()))?;
        report.put("certificate", path.display());
    }
    Ok(())
}

fn format_index_list(indices: &[usize]) -> String {
    indices
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn render_certificate(cert: &pfp::RadonCertificate, ambient: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "radon-certificate");
    let _ = writeln!(out, "ambient {ambient}");
    let _ = writeln!(out, "u {}", point_string(&cert.u));
    let _ = writeln!(out, "s {}", cert.s.len());
    for p in &cert.s {
        let _ = writeln!(out, "{}", point_string(p));
    }
    let _ = writeln!(out, "w1 {}", cert.w1.len());
    for p in &cert.w1 {
        let _ = writeln!(out, "{}", point_string(p));
    }
    out
}

fn point_string(p: &QVector) -> String {
    p.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_generators(args: &GeneratorsArgs, report: &mut Report) -> Result<()> {
    let p = load_polytope(&args.input)?;
    let coords = parse_coords(&args.coords)?;
    match pfp::affine_generators(&p, &coords) {
        Ok(gens) => {
            let verified = pfp::verify_relation(&p, &coords, &gens)?;
            report.put("maps", gens.maps.len());
            report.put("verified", verified.ok);
            if !verified.ok {
                report.fail();
                if let Some(reason) = verified.failure {
                    report.put("failure", reason);
                }
            }
            emit(&args.output, &io::write_generators(&gens), report, "output")
        }
        Err(pfkit::Error::PfFails(pf)) => {
            report.fail();
            report.put("holds", false);
            report.put("checked_faces", pf.checked_faces);
            Ok(())
        }
        Err(other) => Err(other.into()),
    }
}

fn run_compose(args: &ComposeArgs, report: &mut Report) -> Result<()> {
    let p1 = load_polytope(&args.p1)?;
    let p2 = load_polytope(&args.p2)?;
    let f_text = std::fs::read_to_string(&args.f)
        .with_context(|| format!("reading {}", args.f.display()))?;
    let table = io::parse_ftable(&f_text)?;
    if p1.ambient_dim() != table.n1 + table.d1 || p2.ambient_dim() != table.n2 + table.d2 {
        bail!("split header does not match the polytope dimensions");
    }
    let entries: Vec<((QVector, QVector), QVector)> = table
        .entries
        .iter()
        .map(|(a, b, g)| ((a.clone(), b.clone()), g.clone()))
        .collect();
    let f = FTable::new(entries)?;
    let input = CompositionInput::new(p1, table.n1, p2, table.n2, f, table.n)?;

    if args.verify {
        let r = verify_composition(&input)?;
        report.put("pf_p1", r.hypotheses.pf_p1);
        report.put("pf_p2", r.hypotheses.pf_p2);
        report.put("p3_vertex_projection", r.hypotheses.p3_vertex_projection);
        report.put("hypotheses", r.hypotheses.all());
        report.put("conclusion_a", r.conclusion_a);
        report.put("conclusion_b", r.conclusion_b);
        if !(r.hypotheses.all() && r.conclusion_a && r.conclusion_b) {
            report.fail();
        }
        write_q(args, report, r.q.hrep())
    } else {
        let q = pfkit::compose::build_q(&input)?;
        report.put("q_vertices", q.vertex_count());
        write_q(args, report, q.hrep())
    }
}

fn write_q(args: &ComposeArgs, report: &mut Report, q: &HRep) -> Result<()> {
    if let Some(path) = &args.out_q {
        std::fs::write(path, io::write_hrep(q))
            .with_context(|| format!("writing {}", path.display()))?;
        report.put("q", path.display());
    }
    Ok(())
}

fn run_model(args: &ModelArgs, report: &mut Report) -> Result<()> {
    let need_n = || args.n.ok_or_else(|| anyhow!("model requires --n"));
    let need_graph = || -> Result<models::Graph> {
        let path = args
            .graph
            .as_ref()
            .ok_or_else(|| anyhow!("model requires --graph"))?;
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(io::parse_graph(&text)?)
    };

    let text = match args.name.as_str() {
        "parity" => polytope_file(&models::parity_polytope(need_n()?)?, report),
        "parity-ef" => {
            let ext = models::parity_ef(need_n()?)?;
            report.put("inequalities", ext.system.inequalities.len());
            report.put("proj_coords", format_index_list(&ext.proj_coords));
            let mut text = format!(
                "# projection coordinates: {}\n",
                format_index_list(&ext.proj_coords)
            );
            text.push_str(&io::write_hrep(&ext.system));
            text
        }
        "pstar" => polytope_file(&models::pstar(), report),
        "simplex-t" => polytope_file(&models::simplex_t(), report),
        "hypercube" => polytope_file(&models::hypercube(need_n()?)?, report),
        "standard-simplex" => polytope_file(&models::standard_simplex(need_n()?)?, report),
        "square-pyramid" => polytope_file(&models::square_pyramid(), report),
        "prism" => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| anyhow!("prism requires --input with the base polytope"))?;
            let base = load_polytope(path)?;
            polytope_file(&models::prism(&base)?, report)
        }
        "stab" => polytope_file(&models::stable_set_polytope(&need_graph()?)?, report),
        "tsp" => polytope_file(&models::tsp_polytope(&need_graph()?)?, report),
        other => bail!("unknown model '{other}'"),
    };
    emit(&args.output, &text, report, "output")
}

fn polytope_file(p: &Polytope, report: &mut Report) -> String {
    report.put("vertices", p.vertex_count());
    report.put("facets", p.facet_count());
    report.put("dim", p.dim());
    io::write_vrep(&VRep::new(p.vertices().to_vec(), p.ambient_dim()))
}
