//! Command-line front end. [`run`] parses arguments, writes the report to
//! `out` and diagnostics to `err`, and returns the process exit code:
//! 0 on success, 1 when a network fails validation or a verification check
//! fails, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::energy::{energy_norm_sq, DipoleSystem};
use crate::error::Error;
use crate::fmt::g12;
use crate::frame::{current, orient, OrientationScheme, ParsevalFrame};
use crate::models::{
    deficiency_recurrence, depth_sweep, eigenfunction_recurrence, triangle_spectrum,
    BinaryTreeModel, GeometricModel, LatticeStripModel, PathModel, RecurrenceRow, TriangleModel,
};
use crate::network::{Network, NetworkDocument};
use crate::operators::{
    build_k, build_l, friedrichs_matrix, greens_gauss_check, grounded_laplacian_matrix,
    quadratic_form_defect, random_mean_zero, transition_operator,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default verification tolerance when `--tol` is absent.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Random probes per randomized check.
const PROBES: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "energy-network",
    version,
    about = "Energy-space analysis of weighted networks"
)]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Tolerance for verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Emit CSV with a header row.
    #[arg(long, global = true, default_value_t = false)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a network file and summarize it.
    Validate { file: PathBuf },
    /// Grounded dipole v_xy, one value per vertex.
    Dipole { file: PathBuf, x: String, y: String },
    /// Effective resistance between two vertices or all pairs.
    Resistance {
        file: PathBuf,
        #[arg(required_unless_present = "all_pairs", requires = "y")]
        x: Option<String>,
        y: Option<String>,
        #[arg(long, conflicts_with = "x")]
        all_pairs: bool,
    },
    /// Dipole Gramian over the non-base vertices.
    Gramian { file: PathBuf },
    /// Parseval frame diagnostics.
    FrameCheck {
        file: PathBuf,
        /// lex, geometric, or current:SRC:SINK.
        #[arg(long, default_value = "lex")]
        orientation: String,
    },
    /// Edge currents of the unit dipole from x to y.
    Currents { file: PathBuf, x: String, y: String },
    /// LL* against the Laplacian, with the spectrum in the dipole geometry.
    Factorize { file: PathBuf },
    /// Spectrum and checks of the transition operator.
    Transition { file: PathBuf },
    /// Generate a model network or run a model report.
    Model {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Debug, Args)]
struct Emit {
    /// Write the network document here instead of standard output.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Path with conductances a_1..a_N.
    Path {
        /// Comma-separated conductances; unit conductances when absent.
        #[arg(long, value_delimiter = ',')]
        a: Vec<f64>,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        emit: Emit,
    },
    /// Path with a_n = Q^n.
    Geometric {
        #[arg(long = "Q", default_value_t = 2.0)]
        q: f64,
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        /// Print the (Δ + I)u = 0 recurrence as CSV.
        #[arg(long, conflicts_with = "lambda")]
        deficiency: bool,
        /// Print the Δf = λf recurrence as CSV.
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Binary tree with step probabilities p0, p1 and p_minus.
    Tree {
        #[arg(long, default_value_t = 0.4)]
        p0: f64,
        #[arg(long, default_value_t = 0.4)]
        p1: f64,
        #[arg(long = "p-minus", default_value_t = 0.2)]
        p_minus: f64,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Print deficiency energies for depths 5 to 8.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        emit: Emit,
    },
    /// Two geometric rails joined by rungs.
    Strip {
        #[arg(long = "Q", default_value_t = 2.0)]
        q: f64,
        #[arg(long = "Qbar", default_value_t = 3.0)]
        qbar: f64,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = LatticeStripModel::DEFAULT_RUNG)]
        rung: f64,
        #[command(flatten)]
        emit: Emit,
    },
    /// Triangle with conductances c01, c02, c12.
    Triangle {
        #[arg(long, default_value_t = 1.0)]
        c01: f64,
        #[arg(long, default_value_t = 1.0)]
        c02: f64,
        #[arg(long, default_value_t = 1.0)]
        c12: f64,
        /// Print the spectrum by formula and by eigensolve.
        #[arg(long)]
        spectrum: bool,
        #[command(flatten)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Text,
    Csv,
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidNetwork(_)
            | Error::Json(_)
            | Error::NotReversible { .. }
            | Error::Singular
            | Error::Verification(_) => Failure::Check(e.to_string()),
            Error::Io(ref io) => Failure::Usage(format!("{e}: {}", io.kind())),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Line writer that adds an optional CSV header.
struct Report<'a, W: Write> {
    out: &'a mut W,
    csv: bool,
}

impl<W: Write> Report<'_, W> {
    fn header(&mut self, cols: &str) -> std::io::Result<()> {
        if self.csv {
            writeln!(self.out, "{cols}")?;
        }
        Ok(())
    }

    fn row(&mut self, fields: &[&str]) -> std::io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }

    fn kv(&mut self, key: &str, value: impl AsRef<str>) -> std::io::Result<()> {
        self.row(&[key, value.as_ref()])
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand
                    if e.kind() != DisplayHelpOnMissingArgumentOrSubcommand =>
                {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive, got {}", cli.tol);
        return EXIT_USAGE;
    }
    let mut buf = Vec::new();
    let outcome = dispatch(&cli, &mut buf);
    let _ = out.write_all(&buf);
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Outcome {
    let mut r = Report { out, csv: cli.csv };
    let rng = || ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Validate { file } => validate(&mut r, file),
        Command::Dipole { file, x, y } => {
            let net = load(file)?;
            let (x, y) = (net.index_of(x)?, net.index_of(y)?);
            let v = crate::energy::dipole(&net, x, y)?;
            r.header("vertex,value")?;
            for (k, val) in v.values().iter().enumerate() {
                r.row(&[net.name(k), &g12(*val)])?;
            }
            Ok(())
        }
        Command::Resistance {
            file,
            x,
            y,
            all_pairs,
        } => {
            let net = load(file)?;
            let sys = DipoleSystem::new(&net)?;
            r.header("x,y,resistance")?;
            if *all_pairs {
                for a in 0..net.vertex_count() {
                    for b in a + 1..net.vertex_count() {
                        r.row(&[net.name(a), net.name(b), &g12(sys.resistance(a, b))])?;
                    }
                }
            } else {
                let (xs, ys) = (
                    x.as_deref().unwrap_or_default(),
                    y.as_deref().unwrap_or_default(),
                );
                let (a, b) = (net.index_of(xs)?, net.index_of(ys)?);
                r.row(&[xs, ys, &g12(sys.resistance(a, b))])?;
            }
            Ok(())
        }
        Command::Gramian { file } => {
            let net = load(file)?;
            let sys = DipoleSystem::new(&net)?;
            r.header("x,y,gramian")?;
            for (i, &a) in sys.vprime().iter().enumerate() {
                for (j, &b) in sys.vprime().iter().enumerate() {
                    r.row(&[net.name(a), net.name(b), &g12(sys.gramian()[(i, j)])])?;
                }
            }
            Ok(())
        }
        Command::FrameCheck { file, orientation } => {
            let net = load(file)?;
            frame_check(&mut r, &net, orientation, cli.tol, &mut rng())
        }
        Command::Currents { file, x, y } => {
            let net = load(file)?;
            let (a, b) = (net.index_of(x)?, net.index_of(y)?);
            let v = crate::energy::dipole(&net, a, b)?;
            r.header("from,to,current")?;
            for e in net.edges() {
                let i = current(&net, &v, e.a, e.b)?;
                r.row(&[net.name(e.a), net.name(e.b), &g12(clean_zero(i))])?;
            }
            Ok(())
        }
        Command::Factorize { file } => {
            let net = load(file)?;
            factorize(&mut r, &net, cli.tol, &mut rng())
        }
        Command::Transition { file } => {
            let net = load(file)?;
            transition(&mut r, &net, cli.tol)
        }
        Command::Model { family } => model(&mut r, family),
    }
}

/// Rounding noise around an exact zero prints as `0`.
fn clean_zero(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

fn load(path: &Path) -> std::result::Result<Network, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e.kind())))?;
    Ok(Network::from_json(&text)?)
}

fn validate<W: Write>(r: &mut Report<W>, file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", file.display(), e.kind())))?;
    let doc = NetworkDocument::from_json(&text)?;
    let report = doc.validate();
    if !report.is_empty() {
        return Err(Failure::Check(format!("invalid network: {report}")));
    }
    let net = Network::try_from(doc)?;
    r.header("key,value")?;
    r.kv("valid", "true")?;
    r.kv("vertices", net.vertex_count().to_string())?;
    r.kv("edges", net.edge_count().to_string())?;
    r.kv("base", net.name(net.base()))?;
    r.kv("tree", net.is_tree().to_string())?;
    Ok(())
}

fn parse_orientation(net: &Network, spec: &str) -> std::result::Result<OrientationScheme, Failure> {
    match spec {
        "lex" => Ok(OrientationScheme::Lexicographic),
        "geometric" => Ok(OrientationScheme::Geometric),
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            match parts.as_slice() {
                ["current", src, sink] => Ok(OrientationScheme::CurrentInduced {
                    source: net.index_of(src)?,
                    sink: net.index_of(sink)?,
                }),
                _ => Err(Failure::Usage(format!(
                    "unknown orientation `{other}`; expected lex, geometric or current:SRC:SINK"
                ))),
            }
        }
    }
}

fn frame_check<W: Write>(
    r: &mut Report<W>,
    net: &Network,
    orientation: &str,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let scheme = parse_orientation(net, orientation)?;
    let frame = ParsevalFrame::build(net, orient(net, scheme)?)?;
    let diag = frame.diagnostics(net);
    let mut parseval: f64 = 0.0;
    for _ in 0..PROBES {
        let u = random_mean_zero(net.vertex_count(), rng);
        let u = u.as_slice();
        let norm = energy_norm_sq(net, u);
        let sum: f64 = frame.analysis(net, u).iter().map(|c| c * c).sum();
        parseval = parseval.max((sum - norm).abs() / norm);
    }
    r.header("key,value")?;
    r.kv("vertices", diag.vertex_count.to_string())?;
    r.kv("edges", frame.len().to_string())?;
    r.kv("rank", diag.rank.to_string())?;
    r.kv("redundancy", diag.redundancy.to_string())?;
    r.kv("max_norm_sq", g12(diag.max_norm_sq()))?;
    r.kv("idempotence_defect", g12(diag.idempotence_defect))?;
    r.kv("parseval_defect", g12(parseval))?;
    r.kv("is_onb", diag.is_onb.to_string())?;
    if parseval > tol || diag.idempotence_defect > tol {
        return Err(Failure::Check(format!(
            "Parseval identity off by {} (idempotence {})",
            g12(parseval),
            g12(diag.idempotence_defect)
        )));
    }
    Ok(())
}

fn factorize<W: Write>(
    r: &mut Report<W>,
    net: &Network,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let sys = DipoleSystem::new(net)?;
    let f = friedrichs_matrix(net, &sys)?;
    let m = sys.vprime().len();
    let mut quad: f64 = 0.0;
    for _ in 0..PROBES {
        let xi = random_mean_zero(m, rng);
        quad = quad.max(quadratic_form_defect(net, &sys, xi.as_slice()));
    }
    let adj_k = build_k(&sys).adjointness_defect(sys.gramian(), PROBES, rng);
    let adj_l = build_l(net, &sys).adjointness_defect(sys.gramian(), PROBES, rng);
    let gg = greens_gauss_check(net, &sys);
    r.header("key,index,value")?;
    r.row(&["ll_star_defect", "", &g12(f.max_defect)])?;
    r.row(&["quadratic_form_defect", "", &g12(quad)])?;
    r.row(&["adjoint_k_defect", "", &g12(adj_k)])?;
    r.row(&["adjoint_l_defect", "", &g12(adj_l)])?;
    r.row(&["greens_gauss_defect", "", &g12(gg)])?;
    for (i, l) in f.spectrum.iter().enumerate() {
        r.row(&["eigenvalue", &(i + 1).to_string(), &g12(*l)])?;
    }
    let worst = [f.max_defect, quad, adj_k, adj_l, gg]
        .into_iter()
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Failure::Check(format!(
            "factorization checks off by {}",
            g12(worst)
        )));
    }
    Ok(())
}

fn transition<W: Write>(r: &mut Report<W>, net: &Network, tol: f64) -> Outcome {
    let t = transition_operator(net)?;
    let sys = DipoleSystem::new(net)?;
    let lap = crate::operators::laplacian_spectrum_dipole(&grounded_laplacian_matrix(net, &sys))?;
    r.header("key,index,value")?;
    r.row(&["asymmetry", "", &g12(t.asymmetry)])?;
    r.row(&["factorization_defect", "", &g12(t.factorization_defect)])?;
    r.row(&["stochastic_defect", "", &g12(t.stochastic_defect)])?;
    r.row(&["spectral_radius", "", &g12(t.spectrum.spectral_radius())])?;
    r.row(&["energy_norm", "", &g12(t.energy_norm)])?;
    for (i, l) in t.spectrum.eigenvalues.iter().enumerate() {
        r.row(&["p_eigenvalue", &(i + 1).to_string(), &g12(*l)])?;
    }
    for (i, l) in lap.iter().enumerate() {
        r.row(&["laplacian_eigenvalue", &(i + 1).to_string(), &g12(*l)])?;
    }
    let worst = t
        .asymmetry
        .max(t.factorization_defect)
        .max(t.stochastic_defect);
    if worst > tol || t.spectrum.spectral_radius() > 1.0 + tol {
        return Err(Failure::Check(format!(
            "transition checks off by {}",
            g12(worst)
        )));
    }
    Ok(())
}

fn emit_network<W: Write>(r: &mut Report<W>, net: &Network, emit: &Emit) -> Outcome {
    let json = net.to_document().to_json();
    match &emit.emit {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {}", path.display(), e.kind()))),
        None => Ok(r.out.write_all(json.as_bytes())?),
    }
}

fn recurrence_rows<W: Write>(r: &mut Report<W>, rows: &[RecurrenceRow]) -> Outcome {
    // the CSV schema is fixed, so the header is always printed
    writeln!(r.out, "n,u,diff_ratio,energy_partial")?;
    for row in rows {
        let ratio = row.diff_ratio.map(g12).unwrap_or_default();
        r.row(&[
            &row.n.to_string(),
            &g12(row.value),
            &ratio,
            &g12(row.energy_partial),
        ])?;
    }
    Ok(())
}

fn model<W: Write>(r: &mut Report<W>, family: &Family) -> Outcome {
    match family {
        Family::Path { a, n, emit } => {
            let m = if a.is_empty() {
                PathModel::unit(*n)?
            } else {
                PathModel::new(a.clone())?
            };
            emit_network(r, &m.network(), emit)
        }
        Family::Geometric {
            q,
            n,
            deficiency,
            lambda,
            emit,
        } => {
            let m = GeometricModel::new(*q, *n)?;
            if *deficiency {
                let rep = deficiency_recurrence(&m)?;
                recurrence_rows(r, &rep.rows)
            } else if let Some(l) = lambda {
                let rep = eigenfunction_recurrence(&m, *l)?;
                recurrence_rows(r, &rep.rows)
            } else {
                emit_network(r, &m.network(), emit)
            }
        }
        Family::Tree {
            p0,
            p1,
            p_minus,
            depth,
            sweep,
            emit,
        } => {
            if *sweep {
                let s = depth_sweep(*p0, *p1, *p_minus, 5..=8)?;
                r.header("depth,energy")?;
                for (d, e) in &s.energies {
                    r.row(&[&d.to_string(), &g12(*e)])?;
                }
                r.row(&["classification", s.classification.energy_label()])?;
                Ok(())
            } else {
                let m = BinaryTreeModel::new(*p0, *p1, *p_minus, *depth)?;
                emit_network(r, &m.network(), emit)
            }
        }
        Family::Strip {
            q,
            qbar,
            n,
            rung,
            emit,
        } => {
            let m = LatticeStripModel::with_rung(*q, *qbar, *n, *rung)?;
            emit_network(r, &m.network(), emit)
        }
        Family::Triangle {
            c01,
            c02,
            c12,
            spectrum,
            emit,
        } => {
            let m = TriangleModel::new(*c01, *c02, *c12)?;
            if *spectrum {
                let s = triangle_spectrum(&m);
                r.header("index,formula,direct")?;
                for i in 0..3 {
                    r.row(&[
                        &(i + 1).to_string(),
                        &g12(clean_zero(s.formula[i])),
                        &g12(clean_zero(s.direct[i])),
                    ])?;
                }
                r.row(&["gap", &g12(s.gap), ""])?;
                Ok(())
            } else {
                emit_network(r, &m.network(), emit)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("energy-network").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["validate"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["validate", "x.json", "--frobnicate"]).0,
            EXIT_USAGE
        );
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("frame-check"));
    }

    #[test]
    fn triangle_model_spectrum() {
        let (code, out, _) = run_str(&["model", "triangle", "--spectrum"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1,0,0\n2,3,3\n3,3,3\ngap,0,\n");
    }
}
