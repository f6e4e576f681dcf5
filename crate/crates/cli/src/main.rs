//! `phifam` — batch front-end for the phifam library.
//!
//! Every numeric value printed here comes straight from a library call; the
//! driver only parses arguments, assembles inputs and serializes results.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phifam::batch::{divergence_table, DensityPair};
use phifam::divergence::{bregman_divergence_with, kappa_divergence, phi_divergence, Kappa};
use phifam::io::{self, ChartSpec, FieldSource};
use phifam::phi::{default_grid, validate_phi};
use phifam::{transition, Chart, MeasureSpace, PhiFunction, ScalarField, SolverOptions};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "phifam",
    version,
    about = "Deformed exponential families on finite measure spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct OutputOpts {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual tolerance for every iterative solver.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output format; CSV is available for densities only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum NormKind {
    Luxemburg,
    Orlicz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Route {
    /// Closed form through φ⁻¹ and its derivative.
    Closed,
    /// Bregman divergence of ψ in the chart centered at p.
    Bregman,
    /// κ-logarithm formula; needs an exponential or κ φ-function.
    Kappa,
}

/// Model description: either a chart file or its ingredients.
#[derive(Debug, Args)]
struct ModelArgs {
    /// Chart description (JSON); replaces --phi/--space/--c/--u0.
    #[arg(long, conflicts_with_all = ["phi", "space", "c", "u0"])]
    chart: Option<PathBuf>,
    /// `exp`, `kappa:<float>` or `kappa-var:<path>`.
    #[arg(long)]
    phi: Option<String>,
    /// Measure space file; defaults to the counting measure.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Chart origin; defaults to the uniform density.
    #[arg(long)]
    c: Option<String>,
    /// Direction field; defaults to `const:1`.
    #[arg(long)]
    u0: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the φ-function axioms and print the per-axiom report.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Normalizer ψ(u) of a centered coordinate vector.
    Psi {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        u: String,
        /// Project u onto the centered subspace first.
        #[arg(long)]
        center: bool,
    },
    /// Density φ(c + u − ψ(u)·u0).
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        center: bool,
    },
    /// Chart coordinates of a density.
    Invert {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        p: String,
    },
    /// Map coordinates from one chart to another.
    Transition {
        #[command(flatten)]
        model: ModelArgs,
        /// Target chart description (JSON).
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        u: String,
    },
    /// Luxemburg or Orlicz norm of a field.
    Norm {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        kind: NormKind,
        #[arg(long)]
        u: String,
    },
    /// Divergence D(p‖q), or a table of divergences with --pairs.
    Divergence {
        #[arg(long, default_value = "exp")]
        phi: String,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long, required_unless_present = "pairs")]
        p: Option<String>,
        #[arg(long, required_unless_present = "pairs")]
        q: Option<String>,
        #[arg(long, default_value = "const:1")]
        u0: String,
        #[arg(long, value_enum, default_value_t = Route::Closed)]
        route: Route,
        /// JSON array of `{"p": {...}, "q": {...}}` objects.
        #[arg(long, conflicts_with_all = ["p", "q"])]
        pairs: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct PsiOutput {
    psi: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct NormOutput {
    kind: NormKind,
    value: f64,
}

/// Parsed `--phi` argument. A κ field is read up front because it fixes the
/// number of points when no space is given.
enum PhiArg {
    Exponential,
    KappaConst(f64),
    KappaVariable(ScalarField),
}

impl PhiArg {
    fn parse(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        if s == "exp" || s == "exponential" {
            return Ok(PhiArg::Exponential);
        }
        if let Some(k) = s.strip_prefix("kappa:") {
            let k: f64 = k
                .trim()
                .parse()
                .with_context(|| format!("bad κ value {k:?}"))?;
            return Ok(if k == 0.0 {
                PhiArg::Exponential
            } else {
                PhiArg::KappaConst(k)
            });
        }
        if let Some(path) = s.strip_prefix("kappa-var:") {
            let field = io::read_field(Path::new(path))
                .with_context(|| format!("reading κ field {path}"))?;
            return Ok(PhiArg::KappaVariable(field));
        }
        bail!("unknown φ specification {s:?}; expected exp, kappa:<float> or kappa-var:<path>")
    }

    fn len(&self) -> Option<usize> {
        match self {
            PhiArg::KappaVariable(f) => Some(f.len()),
            _ => None,
        }
    }

    fn build(&self) -> phifam::Result<PhiFunction> {
        match self {
            PhiArg::Exponential => Ok(PhiFunction::exponential()),
            PhiArg::KappaConst(k) => PhiFunction::kappa_const(*k),
            PhiArg::KappaVariable(f) => PhiFunction::kappa_variable(f),
        }
    }
}

/// Resolved model ingredients before chart construction.
struct Parts {
    space: MeasureSpace,
    phi: PhiFunction,
    c: ScalarField,
    u0: ScalarField,
}

impl Parts {
    fn into_chart(self, opts: SolverOptions) -> anyhow::Result<Chart> {
        Ok(Chart::new(self.space, self.phi, self.c, self.u0)?.with_solver(opts))
    }
}

fn cwd() -> &'static Path {
    Path::new(".")
}

fn parse_sources(specs: &[&str]) -> anyhow::Result<Vec<FieldSource>> {
    specs
        .iter()
        .map(|s| FieldSource::parse(s).map_err(anyhow::Error::from))
        .collect()
}

/// Length fixed by the first field file among `sources`, if any.
fn sized_len(sources: &[&FieldSource]) -> anyhow::Result<Option<usize>> {
    for src in sources {
        if src.is_sized() {
            return Ok(Some(src.resolve(None, cwd())?.len()));
        }
    }
    Ok(None)
}

fn space_for(space: Option<&Path>, n: Option<usize>) -> anyhow::Result<MeasureSpace> {
    match (space, n) {
        (Some(p), _) => io::read_space(p).with_context(|| format!("reading space {}", p.display())),
        (None, Some(n)) => Ok(MeasureSpace::counting(n)?),
        (None, None) => {
            bail!("cannot infer the number of points; pass --space or a field given by file")
        }
    }
}

/// Resolves the model and any extra fields (returned in order).
fn resolve_model(model: &ModelArgs, extra: &[&str]) -> anyhow::Result<(Parts, Vec<ScalarField>)> {
    let extra_src = parse_sources(extra)?;
    if let Some(path) = &model.chart {
        let spec =
            ChartSpec::load(path).with_context(|| format!("reading chart {}", path.display()))?;
        let base = path.parent().unwrap_or(cwd());
        let space = spec.space.resolve(base)?;
        let n = Some(space.len());
        let phi = spec.phi.build(n, base)?;
        let u0 = match &spec.u0 {
            Some(r) => r.resolve(n, base)?,
            None => ScalarField::constant(space.len(), 1.0)?,
        };
        let c = match &spec.c {
            Some(r) => r.resolve(n, base)?,
            None => io::uniform_origin(&space, &phi)?,
        };
        let fields = resolve_all(&extra_src, n)?;
        return Ok((Parts { space, phi, c, u0 }, fields));
    }

    let phi_arg = PhiArg::parse(
        model
            .phi
            .as_deref()
            .ok_or_else(|| anyhow!("either --chart or --phi is required"))?,
    )?;
    let c_src = model.c.as_deref().map(FieldSource::parse).transpose()?;
    let u0_src = model.u0.as_deref().map(FieldSource::parse).transpose()?;
    let mut sized: Vec<&FieldSource> = c_src.iter().chain(u0_src.iter()).collect();
    sized.extend(extra_src.iter());
    let n = match phi_arg.len() {
        Some(n) => Some(n),
        None => sized_len(&sized)?,
    };
    let space = space_for(model.space.as_deref(), n)?;
    let n = Some(space.len());
    let phi = phi_arg.build()?;
    let c = match &c_src {
        Some(src) => src.resolve(n, cwd())?,
        None => io::uniform_origin(&space, &phi)?,
    };
    let u0 = match &u0_src {
        Some(src) => src.resolve(n, cwd())?,
        None => ScalarField::constant(space.len(), 1.0)?,
    };
    let fields = resolve_all(&extra_src, n)?;
    Ok((Parts { space, phi, c, u0 }, fields))
}

fn resolve_all(sources: &[FieldSource], n: Option<usize>) -> anyhow::Result<Vec<ScalarField>> {
    sources
        .iter()
        .map(|s| s.resolve(n, cwd()).map_err(anyhow::Error::from))
        .collect()
}

fn tangent(chart: &Chart, u: ScalarField, center: bool) -> anyhow::Result<phifam::TangentVector> {
    Ok(if center {
        chart.center(&u)?
    } else {
        chart.tangent(u)?
    })
}

/// Runs the command and returns the text to emit.
fn run(cli: &Cli) -> anyhow::Result<String> {
    let opts = SolverOptions::with_tol(cli.output.tol);
    if !(cli.output.tol > 0.0 && cli.output.tol.is_finite()) {
        bail!("--tol must be a positive finite number");
    }
    let csv = cli.output.format == Format::Csv;
    if csv && !matches!(cli.command, Command::Density { .. }) {
        bail!("CSV output is only available for the density command");
    }

    let text = match &cli.command {
        Command::Validate { model } => {
            let (parts, _) = resolve_model(model, &[])?;
            let report = validate_phi(
                &parts.phi,
                &parts.space,
                &parts.c,
                &parts.u0,
                &default_grid(),
            )?;
            let text = io::to_json(&report)?;
            if !report.passed() {
                emit(cli, &text)?;
                report.into_result()?;
            }
            text
        }
        Command::Psi { model, u, center } => {
            let (parts, mut fields) = resolve_model(model, &[u])?;
            let chart = parts.into_chart(opts)?;
            let u = tangent(&chart, fields.remove(0), *center)?;
            let n = chart.normalize(&u)?;
            io::to_json(&PsiOutput {
                psi: n.psi,
                iterations: n.iterations,
            })?
        }
        Command::Density { model, u, center } => {
            let (parts, mut fields) = resolve_model(model, &[u])?;
            let chart = parts.into_chart(opts)?;
            let u = tangent(&chart, fields.remove(0), *center)?;
            let p = chart.parametrize(&u)?;
            if csv {
                io::field_to_csv(chart.space(), &p)?
            } else {
                io::to_json(&p)?
            }
        }
        Command::Invert { model, p } => {
            let (parts, mut fields) = resolve_model(model, &[p])?;
            let chart = parts.into_chart(opts)?;
            io::to_json(chart.chart_inverse(&fields.remove(0))?.field())?
        }
        Command::Transition { model, to, u } => {
            let (parts, mut fields) = resolve_model(model, &[u])?;
            let from = parts.into_chart(opts)?;
            let to = io::load_chart(to)
                .with_context(|| format!("reading chart {}", to.display()))?
                .with_solver(opts);
            let w = from.tangent(fields.remove(0))?;
            io::to_json(transition(&from, &to, &w)?.field())?
        }
        Command::Norm { model, kind, u } => {
            let (parts, mut fields) = resolve_model(model, &[u])?;
            let m = parts.into_chart(opts)?.orlicz()?.with_solver(opts);
            let u = fields.remove(0);
            let value = match kind {
                NormKind::Luxemburg => m.luxemburg_norm(&u)?,
                NormKind::Orlicz => m.orlicz_norm(&u)?,
            };
            io::to_json(&NormOutput { kind: *kind, value })?
        }
        Command::Divergence {
            phi,
            space,
            p,
            q,
            u0,
            route,
            pairs,
        } => divergence(
            phi,
            space.as_deref(),
            p,
            q,
            u0,
            *route,
            pairs.as_deref(),
            opts,
        )?,
    };
    Ok(text)
}

#[allow(clippy::too_many_arguments)]
fn divergence(
    phi: &str,
    space: Option<&Path>,
    p: &Option<String>,
    q: &Option<String>,
    u0: &str,
    route: Route,
    pairs: Option<&Path>,
    opts: SolverOptions,
) -> anyhow::Result<String> {
    let phi_arg = PhiArg::parse(phi)?;
    let u0_src = FieldSource::parse(u0)?;

    if let Some(path) = pairs {
        if !matches!(route, Route::Closed) {
            bail!("--pairs supports the closed-form route only");
        }
        let body =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let pairs: Vec<DensityPair> = serde_json::from_str(&body)
            .with_context(|| format!("parsing pairs in {}", path.display()))?;
        let n = phi_arg.len().or_else(|| pairs.first().map(|pr| pr.p.len()));
        let space = space_for(space, n)?;
        let u0 = u0_src.resolve(Some(space.len()), cwd())?;
        let phi = phi_arg.build()?;
        let reports = divergence_table(&space, &phi, &u0, &pairs)
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.with_context(|| format!("pair {i}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(io::to_json(&reports)?);
    }

    let (p, q) = match (p, q) {
        (Some(p), Some(q)) => (FieldSource::parse(p)?, FieldSource::parse(q)?),
        _ => bail!("--p and --q are required without --pairs"),
    };
    let n = match phi_arg.len() {
        Some(n) => Some(n),
        None => sized_len(&[&p, &q, &u0_src])?,
    };
    let space = space_for(space, n)?;
    let n = Some(space.len());
    let (p, q, u0) = (
        p.resolve(n, cwd())?,
        q.resolve(n, cwd())?,
        u0_src.resolve(n, cwd())?,
    );
    let phi = phi_arg.build()?;
    let report = match route {
        Route::Closed => phi_divergence(&space, &phi, &u0, &p, &q)?,
        Route::Bregman => bregman_divergence_with(&space, &phi, &u0, &p, &q, opts)?,
        Route::Kappa => kappa_divergence(&space, &Kappa::from(&phi), &u0, &p, &q)?,
    };
    Ok(io::to_json(&report)?)
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    let mut body = text.to_owned();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.output.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// 2 for violated mathematical preconditions, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let domain = err
        .chain()
        .find_map(|e| e.downcast_ref::<phifam::Error>())
        .is_some_and(phifam::Error::is_domain);
    if domain {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
