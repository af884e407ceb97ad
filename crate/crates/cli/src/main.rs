use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mixlip::counterexample::{self as cx, CounterexampleSpec};
use mixlip::grid::{GridFile, GridFunction, SampledFunction2D};
use mixlip::mixed::u_p_norm;
use mixlip::norms::{lip_seminorm, lorentz_norm, modulus_1d, modulus_2d, LorentzParams};
use mixlip::smoothing::SmoothingChecks;
use mixlip::sobolev::{self, SmoothTestFunction, Window};
use mixlip::theorems::{check_up_embedding, TheoremChecks};
use mixlip::{rearrangement::rearrange, RefinementTrace, VerdictRecord};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mixlip", version, about = "Rearrangements, Lorentz and mixed Lipschitz norms of grid functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the non-increasing rearrangement as `value,measure` CSV.
    Rearrange {
        #[arg(long)]
        grid: PathBuf,
    },
    /// Print one norm of a grid function as JSON.
    Norm {
        #[arg(long)]
        grid: PathBuf,
        /// Lorentz norm `p,q`.
        #[arg(long, value_parser = parse_pair, group = "kind")]
        lorentz: Option<(f64, f64)>,
        /// Lipschitz order (1D grids).
        #[arg(long, group = "kind")]
        lip: Option<f64>,
        /// Modulus of continuity at this shift.
        #[arg(long, group = "kind")]
        modulus: Option<f64>,
        /// Mixed `U_p` norm (2D grids).
        #[arg(long, group = "kind")]
        up: Option<f64>,
    },
    /// Run inequality checks on a 2D grid and emit JSON-lines verdicts.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        p: f64,
        /// Target exponent of the embedding suite (defaults to `2p`).
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Also rerun on this many successively halved spacings.
        #[arg(long, default_value_t = 0)]
        refine: u32,
    },
    /// Section and Sobolev-type checks for an analytic test function.
    Embed {
        #[arg(long, value_enum, default_value = "gaussian")]
        function: Catalog,
        /// Width parameter: Gaussian sigma or bump radius.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.01)]
        spacing: f64,
        /// Half-width of the square window.
        #[arg(long, default_value_t = 8.0)]
        window: f64,
    },
    /// Finiteness trace of the logarithmic counterexample.
    Counterexample {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        beta: f64,
        /// Number of spacings, starting at 2^-6 and halving.
        #[arg(long, default_value_t = 5)]
        levels: u32,
        /// Write the finest sampled grid here.
        #[arg(long)]
        emit_grid: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Main,
    Embedding,
    Smoothing,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Catalog {
    Gaussian,
    Bumps,
    PolynomialBump,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `p,q`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn read_grid(path: &Path) -> Result<GridFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(GridFile::read(BufReader::new(file))?)
}

fn read_grid_2d(path: &Path) -> Result<SampledFunction2D> {
    match read_grid(path)? {
        GridFile::Two(f) => Ok(f),
        GridFile::One(_) => bail!("{} holds a 1D grid; this command needs a 2D grid", path.display()),
    }
}

fn print_json(out: &mut impl Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn norm(grid: &Path, lorentz: Option<(f64, f64)>, lip: Option<f64>, modulus: Option<f64>, up: Option<f64>) -> Result<()> {
    let g = read_grid(grid)?;
    let out = &mut io::stdout().lock();
    if let Some((p, q)) = lorentz {
        let params = LorentzParams::new(p, q)?;
        let value = match &g {
            GridFile::One(f) => lorentz_norm(&rearrange(f), params),
            GridFile::Two(f) => lorentz_norm(&rearrange(f), params),
        };
        return print_json(out, &json!({ "p": p, "q": q, "lorentz_norm": value }));
    }
    if let Some(alpha) = lip {
        let GridFile::One(f) = &g else { bail!("--lip needs a 1D grid") };
        return print_json(out, &lip_seminorm(f, alpha)?);
    }
    if let Some(t) = modulus {
        let value = match &g {
            GridFile::One(f) => modulus_1d(f, t)?,
            GridFile::Two(f) => modulus_2d(f, t)?,
        };
        return print_json(out, &json!({ "t": t, "modulus": value }));
    }
    if let Some(p) = up {
        let GridFile::Two(f) = &g else { bail!("--up needs a 2D grid") };
        return print_json(out, &u_p_norm(f, p)?);
    }
    bail!("choose one of --lorentz, --lip, --modulus, --up")
}

/// Checks at one refinement level. Shift parameters are multiples of the
/// base spacing, so every level produces the same sequence of checks.
fn checks_at(f: &SampledFunction2D, base: &SampledFunction2D, p: f64, q: f64, suite: Suite) -> Result<Vec<VerdictRecord>> {
    let dx0 = base.spacing();
    let span = base.ncols().min(base.nrows());
    let mut out = Vec::new();
    if matches!(suite, Suite::Main | Suite::All) {
        let tc = TheoremChecks::new(f, p)?;
        let measure = base.values().len() as f64 * base.measure().cell_measure;
        for j in 1..=6 {
            out.push(tc.oscillation_main(measure * 2f64.powi(-j))?);
        }
        out.push(tc.sup_bound()?);
        for k in 0..=2 {
            out.push(tc.modulus_bound(dx0 * f64::from(1u32 << k))?);
        }
    }
    if matches!(suite, Suite::Embedding | Suite::All) {
        out.extend(check_up_embedding(f, p, q)?);
    }
    if matches!(suite, Suite::Smoothing | Suite::All) {
        let sc = SmoothingChecks::new(f, p)?;
        for m in [1usize, 2, 4, 8].into_iter().filter(|&m| m <= span) {
            let h = m as f64 * dx0;
            out.extend(sc.steklov_lip_bound(h)?);
            out.push(sc.residual_decay(h)?);
        }
    }
    Ok(out)
}

fn verify(grid: &Path, p: f64, q: Option<f64>, suite: Suite, refine: u32) -> Result<ExitCode> {
    let base = read_grid_2d(grid)?;
    let q = q.unwrap_or(2.0 * p);
    let out = &mut BufWriter::new(io::stdout().lock());
    let mut levels = Vec::new();
    for j in 0..=refine {
        let f = if j == 0 { base.clone() } else { base.subdivide(1usize << j)? };
        let recs = checks_at(&f, &base, p, q, suite)?;
        for r in &recs {
            print_json(out, r)?;
        }
        levels.push(recs);
    }
    let failed = levels.iter().flatten().any(|r| r.passed == Some(false));
    if refine > 0 {
        let traces = (0..levels[0].len())
            .map(|i| {
                let trace = RefinementTrace::new(levels.iter().map(|l| l[i].clone()).collect())?;
                Ok(json!({
                    "inequality_id": trace.records[0].inequality_id,
                    "params": trace.records[0].params,
                    "ratios": trace.ratios(),
                    "stability": trace.stability,
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        print_json(out, &json!({ "refinement": traces }))?;
    }
    out.flush()?;
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn embed(function: Catalog, sigma: f64, spacing: f64, half_width: f64) -> Result<ExitCode> {
    let g = match function {
        Catalog::Gaussian => SmoothTestFunction::gaussian(sigma),
        Catalog::Bumps => SmoothTestFunction::product_of_bumps(sigma),
        Catalog::PolynomialBump => SmoothTestFunction::polynomial_times_bump(sigma, 0.5),
    };
    let w = Window::new(half_width, spacing)?;
    let mut recs = sobolev::check_section_lip_bound(&g, &w)?;
    recs.extend(sobolev::check_gagliardo_nirenberg(&g, &w)?);
    recs.push(sobolev::check_w122_into_u1(&g, &w)?);
    let out = &mut io::stdout().lock();
    for r in &recs {
        print_json(out, r)?;
    }
    let failed = recs.iter().any(|r| r.passed == Some(false));
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn counterexample(p: f64, q: f64, beta: f64, levels: u32, emit_grid: Option<&Path>) -> Result<()> {
    if levels == 0 {
        bail!("--levels must be at least 1");
    }
    let spec = CounterexampleSpec::new(p, q, beta)?;
    let spacings: Vec<f64> = (0..levels as i32).map(|k| 2f64.powi(-6 - k)).collect();
    let radii: Vec<f64> = (1..=12).map(|k| 0.5 * 10f64.powi(-k)).collect();
    let divergence: Vec<_> = cx::divergence_probe(&spec, &radii)?
        .into_iter()
        .map(|(r, v)| json!({ "r": r, "value": v }))
        .collect();
    let majorant = cx::majorant_study(&spec, 12, 8)?;
    let trace = cx::mixed_norm_finiteness(&spec, &spacings)?;
    let report = json!({
        "p": p,
        "q": q,
        "beta": beta,
        "divergence": divergence,
        "majorant": {
            "c": majorant.c,
            "max_holdout_ratio": majorant.max_holdout_ratio(),
            "calibration": majorant.calibration,
        },
        "levels": trace.levels,
        "trace": trace.trace,
    });
    print_json(&mut io::stdout().lock(), &report)?;
    if let Some(path) = emit_grid {
        let finest = *spacings.last().expect("levels >= 1");
        let grid = GridFile::Two(cx::sample_grid(&spec, finest)?);
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        grid.write(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Rearrange { grid } => {
            let csv = match read_grid(&grid)? {
                GridFile::One(f) => rearrange(&f).to_csv(),
                GridFile::Two(f) => rearrange(&f).to_csv(),
            };
            io::stdout().lock().write_all(csv.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm { grid, lorentz, lip, modulus, up } => {
            norm(&grid, lorentz, lip, modulus, up)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { grid, p, q, suite, refine } => verify(&grid, p, q, suite, refine),
        Command::Embed { function, sigma, spacing, window } => embed(function, sigma, spacing, window),
        Command::Counterexample { p, q, beta, levels, emit_grid } => {
            counterexample(p, q, beta, levels, emit_grid.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
