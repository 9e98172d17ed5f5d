//! `heunpot` command-line front end.
//!
//! Exit codes: 0 on success, 1 on bad input (unparseable flags or spec files,
//! specs that fail validation), 2 on numerical failure, including a residual
//! check above threshold in `verify`.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use heunpot::catalog::{self, CoordinateMap, PotentialSpec};
use heunpot::heun::{self, Gamma0Choice, HeunParams, MuChoice, TerminationRoot};
use heunpot::solution::{self, Scheme, Sign, Wavefunction};
use heunpot::verifier::{self, ResidualReport, Schrodinger1D};
use heunpot::{Error, C64};
use output::{num, Table};
use serde::Serialize;
use std::process::ExitCode;

/// Residual threshold used by `verify`.
const VERIFY_THRESHOLD: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "heunpot", version, about = "General Heun potentials: catalog, wavefunctions, checks")]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Tolerance for standalone evaluations and root refinement.
    #[arg(long, global = true, env = "HEUN_TOL", default_value_t = heunpot::DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Frobenius,
    Hypexp,
    Auto,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Frobenius => Scheme::Frobenius,
            SchemeArg::Hypexp => Scheme::HypergeometricExpansion,
            SchemeArg::Auto => Scheme::Auto,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mechanism {
    Frobenius,
    Hypexp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MuArg {
    Zero,
    OneMinusGamma,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Gamma0Arg {
    Gamma,
    Alpha,
    Beta,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    /// JSON potential spec.
    #[arg(long)]
    spec: std::path::PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    energy: f64,
    /// Root choice for each exponent, e.g. `+-+`.
    #[arg(long, default_value = "+++", allow_hyphen_values = true)]
    signs: String,
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    scheme: SchemeArg,
    /// x_min:x_max:n; defaults to an interior grid of the solution's validity region.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The 35 permissible triads and their 11 classes.
    Triads,
    /// The 11 catalog classes with potential and map formulas.
    Catalog,
    /// Sample x, z(x), V(x) for a spec.
    EvalPotential {
        #[arg(long)]
        spec: std::path::PathBuf,
        /// x_min:x_max:n
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Sample ψ(x) and the Schrödinger residual.
    Solve(SolveArgs),
    /// Residual check; exits 2 above the threshold.
    Verify {
        #[command(flatten)]
        solve: SolveArgs,
        /// Check ψ against a potential with v₀ shifted by this amount.
        #[arg(long, allow_hyphen_values = true)]
        perturb_v0: Option<f64>,
    },
    /// Accessory parameter values q for which a series terminates.
    Terminate {
        #[arg(long, value_enum)]
        mechanism: Mechanism,
        /// Degree N of the terminating polynomial.
        #[arg(long)]
        n: usize,
        /// Spec whose Heun parameters are used (with --energy and --signs).
        #[arg(long, conflicts_with = "params")]
        spec: Option<std::path::PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
        #[arg(long, default_value = "+++", allow_hyphen_values = true)]
        signs: String,
        /// Canonical parameters a,alpha,beta,gamma,delta (singular points 0, 1, a).
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        #[arg(long, value_enum, default_value_t = MuArg::Zero)]
        mu: MuArg,
        #[arg(long, value_enum, default_value_t = Gamma0Arg::Gamma)]
        gamma0: Gamma0Arg,
    },
    /// The four conditional potential curves of the plotted family.
    Fig2,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: &Cli) -> Outcome {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::Input(format!("tol must be positive, got {}", cli.tol)));
    }
    let f = cli.format;
    match &cli.command {
        Command::Triads => triads(f),
        Command::Catalog => catalog_cmd(f),
        Command::EvalPotential { spec, grid } => eval_potential(f, &read_spec(spec)?, grid),
        Command::Solve(args) => solve(f, args),
        Command::Verify { solve, perturb_v0 } => verify(f, solve, *perturb_v0),
        Command::Terminate { mechanism, n, spec, energy, signs, params, mu, gamma0 } => {
            let p = match (spec, params) {
                (Some(path), None) => {
                    let e = energy.ok_or_else(|| Failure::Input("--spec needs --energy".into()))?;
                    spec_params(&read_spec(path)?, e, signs)?
                }
                (None, Some(text)) => parse_params(text)?,
                _ => return Err(Failure::Input("give either --spec or --params".into())),
            };
            terminate(f, *mechanism, *n, &p, *mu, *gamma0, cli.tol)
        }
        Command::Fig2 => fig2(f),
    }
}

fn read_spec(path: &std::path::Path) -> Result<PotentialSpec, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let spec = PotentialSpec::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(spec)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Input(format!("grid must be x_min:x_max:n, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Failure::Input(format!("grid needs n >= 2 and x_min < x_max, got {text:?}")));
    }
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

fn parse_signs(text: &str) -> Result<[Sign; 3], Failure> {
    Ok(solution::parse_signs(text)?)
}

fn parse_params(text: &str) -> Result<HeunParams, Failure> {
    let v: Vec<f64> =
        text.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| {
            Failure::Input(format!("params must be five numbers a,alpha,beta,gamma,delta, got {text:?}"))
        })?;
    let [a, alpha, beta, gamma, delta]: [f64; 5] = v
        .try_into()
        .map_err(|_| Failure::Input(format!("params must be five numbers a,alpha,beta,gamma,delta, got {text:?}")))?;
    let c = |x: f64| C64::new(x, 0.0);
    let p = HeunParams::canonical(c(a), c(0.0), c(alpha), c(beta), c(gamma), c(delta));
    p.validate()?;
    Ok(p)
}

fn spec_params(spec: &PotentialSpec, energy: f64, signs: &str) -> Result<HeunParams, Failure> {
    let exps = solution::exponent_set(spec, energy, parse_signs(signs)?)?;
    let p = solution::heun_params(spec, energy, &exps)?;
    Ok(heun::to_canonical(&p)?.0)
}

fn triads(f: Format) -> Outcome {
    #[derive(Serialize)]
    struct Row {
        triad: heunpot::triad::Triad,
        exponents: [f64; 3],
        class: usize,
        representative: heunpot::triad::Triad,
    }
    let rows: Vec<Row> = heunpot::triad::enumerate_triads()
        .into_iter()
        .map(|t| Row {
            triad: t,
            exponents: t.exponents(),
            class: t.class_index(),
            representative: heunpot::triad::canonical_class(t),
        })
        .collect();
    match f {
        Format::Json => output::json(&rows),
        Format::Csv => {
            let mut t = Table::new(&["triad", "m1", "m2", "m3", "class", "representative"]);
            for r in &rows {
                let m = r.exponents;
                t.row(&[
                    output::triad(r.triad),
                    m[0].to_string(),
                    m[1].to_string(),
                    m[2].to_string(),
                    r.class.to_string(),
                    output::triad(r.representative),
                ]);
            }
            Ok(t.finish())
        }
    }
}

fn catalog_cmd(f: Format) -> Outcome {
    /// A class description that also parses as a ready-to-edit spec.
    #[derive(Serialize)]
    struct Entry {
        class: usize,
        potential: &'static str,
        map: &'static str,
        explicit_inverse: bool,
        #[serde(flatten)]
        template: PotentialSpec,
    }
    let entries: Vec<Entry> = catalog::catalog()
        .into_iter()
        .map(|c| Entry {
            class: c.class,
            potential: c.potential,
            map: c.map,
            explicit_inverse: c.explicit_inverse,
            template: catalog::template(c.class),
        })
        .collect();
    match f {
        Format::Json => output::json(&entries),
        Format::Csv => {
            let mut t = Table::new(&["class", "triad", "potential", "map", "explicit_inverse"]);
            for e in &entries {
                t.row(&[
                    e.class.to_string(),
                    output::triad(e.template.triad),
                    e.potential.to_string(),
                    e.map.to_string(),
                    e.explicit_inverse.to_string(),
                ]);
            }
            Ok(t.finish())
        }
    }
}

fn eval_potential(f: Format, spec: &PotentialSpec, grid: &str) -> Outcome {
    #[derive(Serialize)]
    struct Sample {
        x: f64,
        z: f64,
        v: f64,
    }
    let xs = parse_grid(grid)?;
    let map = CoordinateMap::for_branch(spec)?;
    let rows = heunpot::par::try_map(&xs, |&x| -> heunpot::Result<Sample> {
        let z = map.z_of_x(x)?;
        Ok(Sample { x, z, v: catalog::potential_value(spec, z)? })
    })?;
    match f {
        Format::Json => output::json(&rows),
        Format::Csv => {
            let mut t = Table::new(&["x", "z", "V"]);
            for r in &rows {
                t.row(&[num(r.x), num(r.z), num(r.v)]);
            }
            Ok(t.finish())
        }
    }
}

fn wavefunction(args: &SolveArgs) -> Result<(Wavefunction, Vec<f64>), Failure> {
    let spec = read_spec(&args.spec)?;
    let wf = solution::build_wavefunction(&spec, args.energy, parse_signs(&args.signs)?, args.scheme.into())?;
    let grid = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => wf.default_grid(200)?,
    };
    Ok((wf, grid))
}

fn solve(f: Format, args: &SolveArgs) -> Outcome {
    #[derive(Serialize)]
    struct Sample {
        x: f64,
        z: f64,
        psi: C64,
        residual: f64,
    }
    let (wf, grid) = wavefunction(args)?;
    let report = verifier::schrodinger_residual(&wf, &grid)?;
    let rows = heunpot::par::try_map(&grid, |&x| -> heunpot::Result<(f64, C64)> { Ok((wf.z_of_x(x)?, wf.psi(x)?)) })?;
    let samples: Vec<Sample> = grid
        .iter()
        .zip(rows)
        .zip(&report.residuals)
        .map(|((&x, (z, psi)), &r)| Sample { x, z, psi, residual: r / report.scale })
        .collect();
    match f {
        Format::Json => output::json(&samples),
        Format::Csv => {
            let mut t = Table::new(&["x", "z", "re_psi", "im_psi", "residual"]);
            for s in &samples {
                t.row(&[num(s.x), num(s.z), num(s.psi.re), num(s.psi.im), num(s.residual)]);
            }
            Ok(t.finish())
        }
    }
}

/// ψ checked against a potential other than its own.
struct Perturbed<'a> {
    wf: &'a Wavefunction,
    spec: PotentialSpec,
}

impl Schrodinger1D for Perturbed<'_> {
    fn psi(&self, x: f64) -> heunpot::Result<C64> {
        self.wf.psi(x)
    }
    fn potential(&self, x: f64) -> heunpot::Result<f64> {
        catalog::potential_value(&self.spec, self.wf.z_of_x(x)?)
    }
    fn energy(&self) -> f64 {
        self.wf.energy
    }
    fn coupling(&self) -> f64 {
        self.wf.coupling()
    }
}

fn verify(f: Format, args: &SolveArgs, perturb_v0: Option<f64>) -> Outcome {
    #[derive(Serialize)]
    struct Summary {
        scheme: Scheme,
        signs: String,
        energy: f64,
        points: usize,
        x_min: f64,
        x_max: f64,
        max_rel_residual: f64,
        scale: f64,
        threshold: f64,
        perturb_v0: Option<f64>,
        pass: bool,
    }
    let (wf, grid) = wavefunction(args)?;
    let report: ResidualReport = match perturb_v0 {
        Some(d) => {
            let mut spec = wf.spec.clone();
            spec.v[0] += d;
            verifier::schrodinger_residual(&Perturbed { wf: &wf, spec }, &grid)?
        }
        None => verifier::schrodinger_residual(&wf, &grid)?,
    };
    let s = Summary {
        scheme: wf.scheme,
        signs: solution::format_signs(&parse_signs(&args.signs)?),
        energy: wf.energy,
        points: grid.len(),
        x_min: grid.iter().cloned().fold(f64::INFINITY, f64::min),
        x_max: grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        max_rel_residual: report.max_rel_residual,
        scale: report.scale,
        threshold: VERIFY_THRESHOLD,
        perturb_v0,
        pass: report.max_rel_residual <= VERIFY_THRESHOLD,
    };
    let text = match f {
        Format::Json => output::json(&s)?,
        Format::Csv => {
            let mut t = Table::new(&["field", "value"]);
            t.row(&["scheme".into(), scheme_name(s.scheme).into()]);
            t.row(&["signs".into(), s.signs.clone()]);
            t.row(&["energy".into(), num(s.energy)]);
            t.row(&["points".into(), s.points.to_string()]);
            t.row(&["x_min".into(), num(s.x_min)]);
            t.row(&["x_max".into(), num(s.x_max)]);
            t.row(&["max_rel_residual".into(), num(s.max_rel_residual)]);
            t.row(&["scale".into(), num(s.scale)]);
            t.row(&["threshold".into(), num(s.threshold)]);
            t.row(&["perturb_v0".into(), s.perturb_v0.map(num).unwrap_or_default()]);
            t.row(&["pass".into(), s.pass.to_string()]);
            t.finish()
        }
    };
    if s.pass {
        Ok(text)
    } else {
        emit(&text);
        Err(Failure::Numeric(format!(
            "max relative residual {:.3e} exceeds {:.0e}",
            s.max_rel_residual, VERIFY_THRESHOLD
        )))
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Frobenius => "frobenius",
        Scheme::HypergeometricExpansion => "hypexp",
        Scheme::Auto => "auto",
        Scheme::ClosedForm => "closed-form",
    }
}

fn terminate(f: Format, mechanism: Mechanism, n: usize, p: &HeunParams, mu: MuArg, g0: Gamma0Arg, tol: f64) -> Outcome {
    let roots: Vec<TerminationRoot> = match mechanism {
        Mechanism::Frobenius => {
            let mu = match mu {
                MuArg::Zero => MuChoice::Zero,
                MuArg::OneMinusGamma => MuChoice::OneMinusGamma,
            };
            heun::frobenius_termination(p, mu, n, tol)?
        }
        Mechanism::Hypexp => {
            let g0 = match g0 {
                Gamma0Arg::Gamma => Gamma0Choice::Gamma,
                Gamma0Arg::Alpha => Gamma0Choice::Alpha,
                Gamma0Arg::Beta => Gamma0Choice::Beta,
            };
            heun::hypergeom_termination(p, g0, n, tol)?
        }
    };
    match f {
        Format::Json => output::json(&roots),
        Format::Csv => {
            let mut t = Table::new(&["root", "q_re", "q_im", "n", "c_re", "c_im"]);
            for (i, r) in roots.iter().enumerate() {
                for (k, c) in r.coeffs.iter().enumerate() {
                    t.row(&[i.to_string(), num(r.q.re), num(r.q.im), k.to_string(), num(c.re), num(c.im)]);
                }
            }
            Ok(t.finish())
        }
    }
}

fn fig2(f: Format) -> Outcome {
    let curves = solution::fig2_curves();
    match f {
        Format::Json => output::json(&curves),
        Format::Csv => {
            let mut t = Table::new(&["curve", "v3", "x", "V"]);
            for c in &curves {
                for (x, v) in c.x.iter().zip(&c.v) {
                    t.row(&[c.label.to_string(), num(c.v3), num(*x), num(*v)]);
                }
            }
            Ok(t.finish())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-1:1:5").unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn params_parsing() {
        let p = parse_params("2,-1,1.5,0.5,1").unwrap();
        assert_eq!(p.a3, C64::new(2.0, 0.0));
        assert!(parse_params("2,-1,1.5").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
