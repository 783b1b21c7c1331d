use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dkcalc::calculus::{d_c, delta_c, dk_apply, hestenes_apply, ResidualNorms};
use dkcalc::fields::{plane_wave, random_field};
use dkcalc::lattice::AXES;
use dkcalc::report::Report;
use dkcalc::spectral::{build_symbol, eigen_solve, momenta, Spectrum};
use dkcalc::transfer::{decompose, hestenes_quadruple, residual_scale, verify_quadruple, Branch};
use dkcalc::{Complex64, Equation, EquationParams, FormField, LatticeDims, SiteVector};
use dkcalc_cli::harness::{self, Suite};
use dkcalc_cli::{io, parse};

#[derive(Parser)]
#[command(
    name = "dkcalc",
    version,
    about = "Discrete Dirac-Kähler calculus on a periodic 4D lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Constant,
    PlaneWave,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    D,
    Delta,
    Dk,
    Hestenes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Eq {
    Dk,
    Hestenes,
    HestenesFlipped,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Write a random, constant or plane-wave field.
    Gen {
        kind: GenKind,
        #[arg(long, value_parser = parse::dims)]
        dims: LatticeDims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sixteen "re,im" pairs separated by ';' (default: the unit form).
        #[arg(long, value_parser = parse::amplitude, allow_hyphen_values = true)]
        amplitude: Option<SiteVector>,
        /// Momentum of a plane wave, e.g. "1,0,0,0".
        #[arg(long, value_parser = parse::momentum)]
        p: Option<[usize; AXES]>,
        /// Use eigenvector number N of i·D(p) as the amplitude and echo its mass.
        #[arg(long)]
        eigen: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Apply d^c, δ^c, i(d^c+δ^c) or the Hestenes operator.
    Apply {
        op: Op,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Residual of a field equation; exit 1 if it exceeds the tolerance.
    Residual {
        equation: Eq,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        mass: Complex64,
        #[arg(short, long)]
        input: PathBuf,
        /// Relative to max|Ω|·max(1, |m|).
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Eigenvalues of i·D(p) as CSV.
    Spectrum {
        #[arg(long, value_parser = parse::dims)]
        dims: LatticeDims,
        #[arg(long, value_parser = parse::momentum, required_unless_present = "all", conflicts_with = "all")]
        p: Option<[usize; AXES]>,
        #[arg(long)]
        all: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        /// clifford, 1, 2, 3, 4, 5, nilpotency, hestenes, matrix, spectral, propagator or all
        suite: Suite,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse::dims, default_value = "3,3,3,3")]
        dims: LatticeDims,
    },
    /// Split a field into its four projected parts.
    Decompose {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        out_prefix: String,
    },
    /// The four even Hestenes solutions built from a Dirac-Kähler solution.
    Quadruple {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        mass: Complex64,
        #[arg(long)]
        out_prefix: String,
        #[arg(long, value_enum, default_value = "plus")]
        branch: BranchArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn complex_text(z: Complex64) -> String {
    format!("{},{}", io::format_number(z.re), io::format_number(z.im))
}

fn read(path: &Path) -> Result<FormField, Failure> {
    Ok(io::read_field(path)?)
}

fn finish(report: &Report) -> Result<(), Failure> {
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn spectrum_at(dims: LatticeDims, p: [usize; AXES]) -> Result<Spectrum, Failure> {
    Ok(eigen_solve(&build_symbol(p, dims)?)?)
}

fn gen(
    kind: GenKind,
    dims: LatticeDims,
    seed: u64,
    amplitude: Option<SiteVector>,
    p: Option<[usize; AXES]>,
    eigen: Option<usize>,
    output: &Path,
) -> Result<(), Failure> {
    let field = match kind {
        GenKind::Random => random_field(dims, seed),
        GenKind::Constant => FormField::constant(dims, &amplitude.unwrap_or_else(SiteVector::unit)),
        GenKind::PlaneWave => {
            let p = p.ok_or_else(|| Failure::Usage("plane-wave needs --p".into()))?;
            let amp = match (amplitude, eigen) {
                (Some(_), Some(_)) => {
                    return Err(Failure::Usage(
                        "give --amplitude or --eigen, not both".into(),
                    ))
                }
                (Some(a), None) => a,
                (None, Some(j)) => {
                    let spectrum = spectrum_at(dims, p)?;
                    let pair = spectrum.pairs.get(j).ok_or_else(|| {
                        Failure::Usage(format!(
                            "--eigen {j}: momentum {p:?} has {} eigenvectors",
                            spectrum.pairs.len()
                        ))
                    })?;
                    println!("mass={}", complex_text(pair.lambda));
                    pair.amplitude
                }
                (None, None) => SiteVector::unit(),
            };
            plane_wave(dims, p, &amp)?
        }
    };
    io::write_field(output, &field)?;
    println!("max_abs={:e}", field.max_abs());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            kind,
            dims,
            seed,
            amplitude,
            p,
            eigen,
            output,
        } => gen(kind, dims, seed, amplitude, p, eigen, &output),
        Command::Apply { op, input, output } => {
            let omega = read(&input)?;
            let out = match op {
                Op::D => d_c(&omega),
                Op::Delta => delta_c(&omega),
                Op::Dk => dk_apply(&omega),
                Op::Hestenes => hestenes_apply(&omega),
            };
            io::write_field(&output, &out)?;
            println!("max_abs={:e}", out.max_abs());
            Ok(())
        }
        Command::Residual {
            equation,
            mass,
            input,
            tol,
        } => {
            let omega = read(&input)?;
            let equation = match equation {
                Eq::Dk => Equation::DiracKahler,
                Eq::Hestenes => Equation::Hestenes,
                Eq::HestenesFlipped => Equation::HestenesFlipped,
            };
            let norms = ResidualNorms::of(&EquationParams::new(equation, mass).residual(&omega));
            let scale = residual_scale(&omega, mass);
            let mut r = Report::new();
            r.push("equation", equation);
            r.push("mass", complex_text(mass));
            r.push("scale", format!("{scale:e}"));
            r.push("rms", format!("{:e}", norms.rms));
            r.check("max_abs", norms.max_abs, tol * scale);
            finish(&r)
        }
        Command::Spectrum {
            dims,
            p,
            all,
            output,
        } => {
            let ps: Vec<[usize; AXES]> = if all {
                momenta(dims).collect()
            } else {
                vec![p.expect("required unless --all")]
            };
            let spectra = ps
                .into_iter()
                .map(|p| spectrum_at(dims, p))
                .collect::<Result<Vec<_>, _>>()?;
            let csv = io::spectrum_csv(&spectra);
            match output {
                Some(path) => io::write_atomic(&path, &csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Verify {
            suite,
            trials,
            seed,
            dims,
        } => finish(&harness::run(
            suite,
            &harness::Config { dims, trials, seed },
        )),
        Command::Decompose { input, out_prefix } => {
            let omega = read(&input)?;
            let parts = decompose(&omega);
            for (p, field) in &parts.parts {
                let name = match p.tag() {
                    "++" => "pp",
                    "-+" => "mp",
                    "+-" => "pm",
                    _ => "mm",
                };
                io::write_field(Path::new(&format!("{out_prefix}_{name}.json")), field)?;
            }
            let dev = parts.reconstruct().distance(&omega)?;
            let mut r = Report::new();
            r.check(
                "reconstruction",
                dev,
                harness::DECOMPOSE_TOL * omega.max_abs(),
            );
            finish(&r)
        }
        Command::Quadruple {
            input,
            mass,
            out_prefix,
            branch,
            tol,
        } => {
            let omega = read(&input)?;
            let branch = match branch {
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            };
            let mut r = Report::new();
            match hestenes_quadruple(&omega, branch) {
                Ok(q) => {
                    for (j, f) in q.fields.iter().enumerate() {
                        io::write_field(Path::new(&format!("{out_prefix}_{}.json", j + 1)), f)?;
                    }
                    r.merge("quadruple", verify_quadruple(&omega, mass, branch, tol));
                }
                Err(e) => {
                    r.push("error", e);
                    r.fail();
                }
            }
            finish(&r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
