//! `zetaquad` — batch CSV driver for zeta evaluation and convergence runs.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetaquad::geometry::{quartic_patch, torus_surface, QUARTIC_DEFAULT};
use zetaquad::nystrom::{patch_quadrature, solve_bvp, BoundaryCondition, BvpProblem, PatchDensity};
use zetaquad::weights::{Equation, KernelSpec, Layer, Order};
use zetaquad::zeta::{deriv_scalar, zeta_general, zeta_s1, DerivDirection, QuadraticForm};

const SCHEMA: &str = "zetaquad-csv v1";

#[derive(Parser)]
#[command(name = "zetaquad", version, about = "Epstein zeta values and corrected-quadrature convergence studies")]
struct Cli {
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fail with exit code 3 if the fitted order falls below this.
    #[arg(long, global = true)]
    assert_order: Option<f64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Z(s) for one form, optionally with a derivative, or sweep Z(1).
    Zeta(ZetaArgs),
    /// Single-target convergence on the quartic patch.
    PatchConv(PatchArgs),
    /// Exterior boundary value problem convergence on a torus.
    BvpConv(BvpArgs),
}

#[derive(Args)]
struct ZetaArgs {
    #[arg(long = "E", default_value_t = 1.0)]
    e: f64,
    #[arg(long = "F", default_value_t = 0.0)]
    f: f64,
    #[arg(long = "G", default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    s: f64,
    /// Derivative order 1–4 along --dir.
    #[arg(long)]
    k: Option<usize>,
    /// Direction (l,m,n) of the derivative l∂E + m∂F + n∂G.
    #[arg(long, value_parser = parse_triple, default_value = "1,0,0", allow_hyphen_values = true)]
    dir: (f64, f64, f64),
    /// Emit (α, β, √E·Z(1)) over α = G/E, β = F/E instead.
    #[arg(long)]
    sweep: bool,
    #[arg(long, value_parser = parse_range, default_value = "0.05:2:40", allow_hyphen_values = true)]
    alpha: (f64, f64, usize),
    #[arg(long, value_parser = parse_range, default_value = "-1:1:41", allow_hyphen_values = true)]
    beta: (f64, f64, usize),
}

#[derive(Clone, Copy, ValueEnum)]
enum EquationArg {
    Laplace,
    Helmholtz,
}

#[derive(Clone, Copy, ValueEnum)]
enum BcArg {
    Dirichlet,
    Neumann,
}

#[derive(Args)]
struct PatchArgs {
    /// lap-slp, helm-dlp, …
    #[arg(long, default_value = "lap-slp")]
    kernel: String,
    /// Wavenumber, e.g. 1.42+1.11i.
    #[arg(long, value_parser = parse_complex, default_value = "1.42+1.11i")]
    kappa: Complex64,
    #[arg(long, default_value_t = 5)]
    order: u32,
    #[arg(long, value_delimiter = ',', default_value = "40,80,160,320")]
    grids: Vec<usize>,
    /// Draw the density constants a, b from this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Punctured trapezoidal rule without corrections.
    #[arg(long)]
    uncorrected: bool,
}

#[derive(Args)]
struct BvpArgs {
    #[arg(long, value_enum, default_value = "laplace")]
    equation: EquationArg,
    #[arg(long, value_enum, default_value = "dirichlet")]
    bc: BcArg,
    #[arg(long, value_parser = parse_complex, default_value = "1.42+1.11i")]
    kappa: Complex64,
    #[arg(long, default_value_t = 1.0)]
    major: f64,
    #[arg(long, default_value_t = 0.5)]
    minor: f64,
    /// Nodes per direction; N = n².
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
    grids: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    order: u32,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    maxit: usize,
    /// Combined-field coupling (default Re κ).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    matrix_free: bool,
    /// Fail with exit code 3 if any run needs more GMRES iterations.
    #[arg(long)]
    assert_iterations: Option<usize>,
}

enum Failure {
    Validation(String),
    Assertion(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Assertion(_) => 3,
            Failure::Solver(_) => 4,
        }
    }
}

impl From<zetaquad::Error> for Failure {
    fn from(e: zetaquad::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(format!("output: {e}"))
    }
}

type Out = Box<dyn Write>;

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err("expected l,m,n".into()),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let p: Vec<&str> = s.split(':').collect();
    if p.len() != 3 {
        return Err("expected min:max:count".into());
    }
    let lo = p[0].parse::<f64>().map_err(|e| e.to_string())?;
    let hi = p[1].parse::<f64>().map_err(|e| e.to_string())?;
    let n = p[2].parse::<usize>().map_err(|e| e.to_string())?;
    if !(hi >= lo) || n == 0 || (n == 1 && hi != lo) {
        return Err("need min ≤ max and a positive count".into());
    }
    Ok((lo, hi, n))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.parse::<Complex64>().map_err(|_| format!("not a complex number: {s}"))
}

/// 16 significant digits.
fn sig16(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..16).contains(&e) {
        format!("{:.*}", (15 - e) as usize, x)
    } else {
        format!("{x:.15e}")
    }
}

fn linspace((lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn check_grids(grids: &[usize]) -> Result<(), Failure> {
    if grids.is_empty() || grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Validation(format!("grid list must be strictly increasing, got {grids:?}")));
    }
    Ok(())
}

/// Least-squares slope of log(err) against log(1/n).
fn fitted_order(ns: &[f64], errs: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ns.iter().zip(errs).filter(|(_, e)| **e > 0.0).map(|(n, e)| (-n.ln(), e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn running_order(prev: Option<(f64, f64)>, n: f64, err: f64) -> String {
    match prev {
        Some((pn, pe)) if pe > 0.0 && err > 0.0 => format!("{:.4}", (pe / err).ln() / (n / pn).ln()),
        _ => String::new(),
    }
}

fn check_order(order: Option<f64>, threshold: Option<f64>) -> Result<(), Failure> {
    match (threshold, order) {
        (Some(t), Some(p)) if p < t => Err(Failure::Assertion(format!("fitted order {p:.3} below {t}"))),
        (Some(t), None) => Err(Failure::Assertion(format!("no fitted order to compare with {t}"))),
        _ => Ok(()),
    }
}

fn cmd_zeta(a: &ZetaArgs, out: &mut Out) -> Result<(), Failure> {
    if a.sweep {
        writeln!(out, "# {SCHEMA} zeta-sweep: alpha=G/E, beta=F/E, value=sqrt(E)*Z(1) at E=1; flag ok|near_degenerate|invalid")?;
        writeln!(out, "alpha,beta,value,flag")?;
        for alpha in linspace(a.alpha) {
            for beta in linspace(a.beta) {
                let disc = alpha - beta * beta;
                let (value, flag) = match QuadraticForm::new(1.0, beta, alpha) {
                    Ok(q) if disc > 0.0 => match zeta_s1(&q) {
                        Ok(z) => (sig16(z), if disc < 1e-2 { "near_degenerate" } else { "ok" }),
                        // too close to α = β² for the lattice sum
                        Err(_) => (String::new(), "near_degenerate"),
                    },
                    _ => (String::new(), "invalid"),
                };
                writeln!(out, "{alpha},{beta},{value},{flag}")?;
            }
        }
        return Ok(());
    }
    let q = QuadraticForm::new(a.e, a.f, a.g)?;
    let z = zeta_general(&q, a.s)?.0;
    match a.k {
        None => {
            writeln!(out, "# {SCHEMA} zeta: Z(s) of Q = E u^2 + 2F uv + G v^2")?;
            writeln!(out, "E,F,G,s,value")?;
            writeln!(out, "{},{},{},{},{}", a.e, a.f, a.g, a.s, sig16(z))?;
        }
        Some(k) => {
            let (l, m, n) = a.dir;
            let d = deriv_scalar(&q, &DerivDirection::new(l, m, n), k, a.s)?;
            writeln!(out, "# {SCHEMA} zeta: Z(s) and (l dE + m dF + n dG)^k Z(s)")?;
            writeln!(out, "E,F,G,s,value,k,l,m,n,derivative")?;
            writeln!(out, "{},{},{},{},{},{k},{l},{m},{n},{}", a.e, a.f, a.g, a.s, sig16(z), sig16(d))?;
        }
    }
    Ok(())
}

fn cmd_patch(a: &PatchArgs, assert_order: Option<f64>, out: &mut Out) -> Result<(), Failure> {
    let mut spec: KernelSpec = a.kernel.parse()?;
    if spec.equation == Equation::Helmholtz {
        spec = KernelSpec::helmholtz(spec.layer, a.kappa)?;
    }
    let order = Order::from_int(a.order)?;
    check_grids(&a.grids)?;
    if let Some(&n) = a.grids.iter().find(|&&n| n < 8 || n % 2 == 1) {
        return Err(Failure::Validation(format!("patch grids must be even and ≥ 8, got {n}")));
    }
    let mut density = PatchDensity::default();
    if let Some(seed) = a.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        density.a = rng.random_range(-1.0..1.0);
        density.b = rng.random_range(-1.0..1.0);
    }
    density.a = a.a.unwrap_or(density.a);
    density.b = a.b.unwrap_or(density.b);
    let surf = quartic_patch(QUARTIC_DEFAULT)?;
    let f = |u, v| density.eval(u, v);
    let n_ref = 2 * a.grids.last().unwrap();
    let reference = patch_quadrature(&surf, &spec, order, n_ref, &f, true)?;
    writeln!(
        out,
        "# {SCHEMA} patch-conv: kernel={spec} order={} a={} b={} c={} corrected={} reference_N={n_ref}",
        order.as_int(),
        density.a,
        density.b,
        density.c,
        !a.uncorrected
    )?;
    writeln!(out, "N,h,value,error_vs_reference,fitted_running_order")?;
    let (mut ns, mut errs) = (Vec::new(), Vec::new());
    let mut prev = None;
    for &n in &a.grids {
        let v = patch_quadrature(&surf, &spec, order, n, &f, !a.uncorrected)?;
        let err = (v - reference).norm();
        let h = 2.0 / n as f64;
        writeln!(out, "{n},{h},{v},{err:e},{}", running_order(prev, n as f64, err))?;
        prev = Some((n as f64, err));
        ns.push(n as f64);
        errs.push(err);
    }
    let p = fitted_order(&ns, &errs);
    writeln!(out, "# fitted_order={}", p.map_or("nan".into(), |p| format!("{p:.4}")))?;
    check_order(p, assert_order)
}

fn cmd_bvp(a: &BvpArgs, assert_order: Option<f64>, out: &mut Out) -> Result<(), Failure> {
    let torus = torus_surface(a.major, a.minor)?;
    let order = Order::from_int(a.order)?;
    check_grids(&a.grids)?;
    if !(a.tol > 0.0) || a.maxit == 0 {
        return Err(Failure::Validation("GMRES needs tol > 0 and maxit ≥ 1".into()));
    }
    let kernel = match a.equation {
        EquationArg::Laplace => KernelSpec::laplace(Layer::Slp),
        EquationArg::Helmholtz => KernelSpec::helmholtz(Layer::Slp, a.kappa)?,
    };
    let bc = match a.bc {
        BcArg::Dirichlet => BoundaryCondition::Dirichlet,
        BcArg::Neumann => BoundaryCondition::Neumann,
    };
    // validate every resolution before the first solve
    let problems: Vec<BvpProblem> = a
        .grids
        .iter()
        .map(|&n| BvpProblem {
            tol: a.tol,
            maxit: a.maxit,
            eta: a.eta,
            matrix_free: a.matrix_free,
            ..BvpProblem::standard(kernel, bc, torus, n, order)
        })
        .collect();
    let k = 2 * order.stencil_index() + 1;
    if let Some(&n) = a.grids.iter().find(|&&n| n < k) {
        return Err(Failure::Validation(format!("grid {n} too small for order {}", order.as_int())));
    }
    writeln!(
        out,
        "# {SCHEMA} bvp-conv: equation={} bc={} kappa={} torus=({},{}) order={} tol={} maxit={}",
        match a.equation {
            EquationArg::Laplace => "laplace",
            EquationArg::Helmholtz => "helmholtz",
        },
        match a.bc {
            BcArg::Dirichlet => "dirichlet",
            BcArg::Neumann => "neumann",
        },
        kernel.wavenumber(),
        a.major,
        a.minor,
        order.as_int(),
        a.tol,
        a.maxit
    )?;
    writeln!(out, "N,h,error_at_test_point,gmres_iterations,wall_time_weights,wall_time_per_iteration")?;
    let (mut ns, mut errs) = (Vec::new(), Vec::new());
    let mut unconverged = Vec::new();
    let mut max_iter = 0;
    for (p, &n) in problems.iter().zip(&a.grids) {
        let s = solve_bvp(p)?;
        if !s.converged {
            unconverged.push(n * n);
            writeln!(out, "# N={} GMRES stopped at maxit with residual {:e}", n * n, s.residual)?;
        }
        let h = 2.0 * std::f64::consts::PI / n as f64;
        writeln!(
            out,
            "{},{h},{:e},{},{:.6},{:.6}",
            n * n,
            s.error,
            s.iterations,
            s.seconds_weights,
            s.seconds_per_iteration
        )?;
        out.flush()?;
        max_iter = max_iter.max(s.iterations);
        ns.push(n as f64);
        errs.push(s.error);
    }
    let p = fitted_order(&ns, &errs);
    writeln!(out, "# fitted_order={}", p.map_or("nan".into(), |p| format!("{p:.4}")))?;
    if !unconverged.is_empty() {
        return Err(Failure::Solver(format!("GMRES did not converge for N = {unconverged:?}")));
    }
    if let Some(m) = a.assert_iterations {
        if max_iter > m {
            return Err(Failure::Assertion(format!("{max_iter} GMRES iterations exceed {m}")));
        }
    }
    check_order(p, assert_order)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure::Validation(e.to_string()))?;
    }
    let mut out: Out = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let res = match &cli.cmd {
        Command::Zeta(a) => cmd_zeta(a, &mut out),
        Command::PatchConv(a) => cmd_patch(a, cli.assert_order, &mut out),
        Command::BvpConv(a) => cmd_bvp(a, cli.assert_order, &mut out),
    };
    out.flush()?;
    res
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Validation(m) | Failure::Assertion(m) | Failure::Solver(m)) = &f;
            eprintln!("zetaquad: {m}");
            ExitCode::from(f.code())
        }
    }
}
