//! `padic`: a command-line calculator for exact p-adic arithmetic.
//!
//! Every subcommand prints deterministic output: results to stdout,
//! diagnostics to stderr. Exit codes: 0 on success, 1 on parse errors
//! (bad arguments, unreadable files), 2 on violated mathematical
//! preconditions, with the failing hypothesis named on stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use padic::geometry::{integrate_measure, integrate_real, parse_cell, Cell, CellMeasure};
use padic::hensel::{hensel_basic, hensel_refined, qth_root, Polynomial, RootOutcome};
use padic::linalg::{
    involution_projections, parse_matrix, subgroup_checks, torsion_test, RationalMatrix,
};
use padic::residue::{reduce, FiniteCharacter};
use padic::series::geometric_sum;
use padic::valuation::{abs_p, classify_norm, parse_rational, NormOracle, Prime};
use padic::{Error, NormBound, PadicNumber, ValuationInfo};

#[derive(Parser)]
#[command(
    name = "padic",
    about = "Exact p-adic arithmetic: valuations, balls, series, roots, cells, residues, matrices",
    disable_help_subcommand = true
)]
struct Cli {
    /// Relative precision in digits for embedded values
    #[arg(long, global = true, default_value_t = 32)]
    prec: u32,
    /// Output layout
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Tabular,
}

#[derive(Copy, Clone, ValueEnum)]
enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Copy, Clone, ValueEnum)]
enum Integrand {
    /// constant 1 (real-valued)
    One,
    /// |x|_p (real-valued)
    Abs,
    /// x against the diameter measure (p-adic-valued)
    Haar,
}

#[derive(Subcommand)]
enum Cmd {
    /// p-adic valuation of a rational or ball literal
    Val {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// p-adic absolute value |x|_p as an exact rational
    Abs {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Classify a norm table (lines `n<TAB>value`) as archimedean, trivial, or p-adic
    ClassifyNorm { file: PathBuf },
    /// Embed a rational into Q_p as a precision ball
    Embed {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Ball arithmetic: add, sub, mul, div
    Arith {
        p: u64,
        op: ArithOp,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Canonical digit expansion, one `exponent digit` pair per line
    Digits {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Sum of the geometric series at x (requires |x|_p < 1)
    GeomSum {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Lift an approximate polynomial root (polynomial text: `p; a_0, a_1, ...`)
    Hensel {
        poly: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// use the refined hypothesis |f(z)| < |f'(z)|^2
        #[arg(long)]
        refined: bool,
    },
    /// q-th root of a unit a in Z_p, or the obstruction that prevents one
    Root {
        p: u64,
        q: u64,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Cell geometry: membership, trichotomy, subdivision
    Cells {
        p: u64,
        #[command(subcommand)]
        op: CellOp,
    },
    /// Riemann integration over a cell at a subdivision level
    Integrate {
        p: u64,
        integrand: Integrand,
        cell: String,
        level: u32,
    },
    /// Reduce a p-adic integer mod p^j to its residue representative
    Reduce {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
        j: u32,
    },
    /// Evaluate the frequency-k character of Z/p^jZ as a rotation number
    Char {
        p: u64,
        j: u32,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Finite or infinite order of a rational matrix inside GL_n(Z_p)
    MatrixOrder { p: u64, file: PathBuf },
    /// Verify a finite matrix list as a subgroup of GL_n(Z_p) and report structure
    SubgroupCheck {
        p: u64,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Eigenprojections (I-A)/2 and (I+A)/2 of an exact involution
    Involution { file: PathBuf },
}

#[derive(Subcommand)]
enum CellOp {
    /// Whether a point lies in a cell
    Contains {
        cell: String,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Relation of two cells: Equal, nested, or Disjoint
    Trichotomy { a: String, b: String },
    /// The p^n subcells at scale + n
    Subdivide { cell: String, n: u32 },
}

/// Move the known option flags in front of the positional arguments so
/// they parse even when typed after the `--` sentinel that protects
/// negative numbers (e.g. `root 5 2 -- -1 --prec 10`).
fn hoist_flags(raw: Vec<String>) -> Vec<String> {
    const VALUE_FLAGS: [&str; 2] = ["--prec", "--format"];
    const BOOL_FLAGS: [&str; 1] = ["--refined"];
    let mut it = raw.into_iter();
    let prog = it.next().unwrap_or_else(|| "padic".into());
    let pending: Vec<String> = it.collect();
    let mut flags = Vec::new();
    let mut rest = Vec::new();
    let mut i = 0;
    while i < pending.len() {
        let tok = pending[i].as_str();
        let name = tok.split_once('=').map_or(tok, |(n, _)| n);
        if VALUE_FLAGS.contains(&name) {
            flags.push(pending[i].clone());
            if name == tok && i + 1 < pending.len() {
                flags.push(pending[i + 1].clone());
                i += 1;
            }
        } else if BOOL_FLAGS.contains(&name) {
            flags.push(pending[i].clone());
        } else {
            rest.push(pending[i].clone());
        }
        i += 1;
    }
    let mut out = vec![prog];
    match rest.iter().position(|t| !t.starts_with('-')) {
        Some(idx) => {
            out.extend(rest[..=idx].iter().cloned());
            out.extend(flags);
            out.extend(rest[idx + 1..].iter().cloned());
        }
        None => {
            out.extend(flags);
            out.extend(rest);
        }
    }
    out
}

fn main() {
    let argv = hoist_flags(std::env::args().collect());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        let code = match err {
            Error::Parse(_) => 1,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &PathBuf) -> Result<RationalMatrix, Error> {
    parse_matrix(&read_file(path)?)
}

fn parse_cell_at(p: Prime, s: &str) -> Result<Cell, Error> {
    let cell = parse_cell(s)?;
    if cell.prime() != p {
        return Err(Error::PrimeMismatch(p.get(), cell.prime().get()));
    }
    Ok(cell)
}

fn run(cli: Cli) -> Result<(), Error> {
    let prec = cli.prec;
    match cli.cmd {
        Cmd::Val { p, x } => {
            let pr = Prime::new(p)?;
            let b = PadicNumber::parse(pr, &x, prec)?;
            match b.valuation_info() {
                ValuationInfo::Exact(v) => println!("{v}"),
                ValuationInfo::Infinite => return Err(Error::ZeroValuation),
                ValuationInfo::AtLeast(a) => {
                    return Err(Error::Undecidable(format!(
                        "valuation only bounded below by {a} at this precision"
                    )))
                }
            }
        }
        Cmd::Abs { p, x } => {
            let pr = Prime::new(p)?;
            let b = PadicNumber::parse(pr, &x, prec)?;
            match b.norm() {
                NormBound::Exactly(v) => println!("{v}"),
                NormBound::AtMost(bound) => {
                    return Err(Error::Undecidable(format!(
                        "absolute value only bounded above by {bound} at this precision"
                    )))
                }
            }
        }
        Cmd::ClassifyNorm { file } => {
            let oracle = NormOracle::parse_table(&read_file(&file)?)?;
            println!("{}", classify_norm(&oracle)?);
        }
        Cmd::Embed { p, x } => {
            let pr = Prime::new(p)?;
            let q = parse_rational(&x)?;
            println!("{}", PadicNumber::from_rational(&q, pr, prec));
        }
        Cmd::Arith { p, op, x, y } => {
            let pr = Prime::new(p)?;
            let bx = PadicNumber::parse(pr, &x, prec)?;
            let by = PadicNumber::parse(pr, &y, prec)?;
            let out = match op {
                ArithOp::Add => bx.add(&by)?,
                ArithOp::Sub => bx.sub(&by)?,
                ArithOp::Mul => bx.mul(&by)?,
                ArithOp::Div => bx.div(&by)?,
            };
            println!("{out}");
        }
        Cmd::Digits { p, x } => {
            let pr = Prime::new(p)?;
            let b = PadicNumber::parse(pr, &x, prec)?;
            let digits = b.digits()?;
            let mut out = String::new();
            if cli.format == Format::Tabular {
                let width = digits
                    .iter()
                    .map(|(e, _)| e.to_string().len())
                    .max()
                    .unwrap_or(1)
                    .max("exponent".len());
                let _ = writeln!(out, "{:>width$} digit", "exponent");
                for (e, d) in &digits {
                    let _ = writeln!(out, "{e:>width$} {d}");
                }
            } else {
                for (e, d) in &digits {
                    let _ = writeln!(out, "{e} {d}");
                }
            }
            print!("{out}");
        }
        Cmd::GeomSum { p, x } => {
            let pr = Prime::new(p)?;
            let b = PadicNumber::parse(pr, &x, prec)?;
            println!("{}", geometric_sum(&b, prec as i64)?);
        }
        Cmd::Hensel { poly, z, refined } => {
            let f = Polynomial::parse(&poly, prec)?;
            let zb = PadicNumber::parse(f.prime(), &z, prec)?;
            let trace = if refined {
                hensel_refined(&f, &zb)?
            } else {
                hensel_basic(&f, &zb)?
            };
            println!("{}", trace.root);
            match f.eval(&trace.root)?.valuation_info() {
                ValuationInfo::AtLeast(a) => {
                    println!("check: f(w) \u{2261} 0 (mod {}^{a}) OK", f.prime())
                }
                ValuationInfo::Infinite => println!("check: f(w) = 0 OK"),
                ValuationInfo::Exact(_) => {
                    return Err(Error::HypothesisFailed(
                        "residual of the certified root is nonzero".into(),
                    ))
                }
            }
        }
        Cmd::Root { p, q, a } => {
            let pr = Prime::new(p)?;
            let qr = Prime::new(q)?;
            let ab = PadicNumber::parse(pr, &a, prec)?;
            match qth_root(&ab, qr)? {
                RootOutcome::Root(w) => {
                    println!("{w}");
                    let wq = w.pow(q as u32);
                    let avail = wq
                        .abs_precision()
                        .unwrap_or(prec as i64)
                        .min(ab.abs_precision().unwrap_or(prec as i64));
                    let k = (prec as i64).min(avail);
                    if !wq.eq_mod_pk(&ab, k)? {
                        return Err(Error::HypothesisFailed(
                            "claimed root fails its own congruence".into(),
                        ));
                    }
                    println!("check: x^{q} \u{2261} {a} (mod {p}^{k}) OK");
                }
                RootOutcome::NoRoot(reason) => println!("no root: {reason}"),
            }
        }
        Cmd::Cells { p, op } => {
            let pr = Prime::new(p)?;
            match op {
                CellOp::Contains { cell, point } => {
                    let c = parse_cell_at(pr, &cell)?;
                    let b = PadicNumber::parse(pr, &point, prec)?;
                    println!("{}", c.contains(&b)?);
                }
                CellOp::Trichotomy { a, b } => {
                    let ca = parse_cell_at(pr, &a)?;
                    let cb = parse_cell_at(pr, &b)?;
                    println!("{}", ca.trichotomy(&cb)?);
                }
                CellOp::Subdivide { cell, n } => {
                    let c = parse_cell_at(pr, &cell)?;
                    for sub in c.subdivide(n) {
                        println!("{sub}");
                    }
                }
            }
        }
        Cmd::Integrate {
            p,
            integrand,
            cell,
            level,
        } => {
            let pr = Prime::new(p)?;
            let c = parse_cell_at(pr, &cell)?;
            match integrand {
                Integrand::One => {
                    let out = integrate_real(
                        |_| BigRational::from_integer(BigInt::from(1)),
                        |_| BigRational::zero(),
                        &c,
                        level,
                    );
                    println!("value {}", out.value);
                    println!("error <= {}", out.error_bound);
                }
                Integrand::Abs => {
                    let out = integrate_real(|x| abs_p(pr, x), |d| d.clone(), &c, level);
                    println!("value {}", out.value);
                    println!("error <= {}", out.error_bound);
                }
                Integrand::Haar => {
                    let mu = CellMeasure::diameter(pr, prec).with_bound(-c.scale());
                    let out = integrate_measure(
                        |x| PadicNumber::from_rational(x, pr, prec),
                        &mu,
                        &c,
                        level,
                    )?;
                    println!("{out}");
                }
            }
        }
        Cmd::Reduce { p, x, j } => {
            let pr = Prime::new(p)?;
            let b = PadicNumber::parse(pr, &x, prec.max(j + 2))?;
            println!("{}", reduce(&b, j)?.representative());
        }
        Cmd::Char { p, j, k, x } => {
            let pr = Prime::new(p)?;
            let chi = FiniteCharacter::new(pr, j, &BigInt::from(k))?;
            let b = PadicNumber::parse(pr, &x, prec.max(j + 2))?;
            println!("{}", chi.eval(&b)?);
        }
        Cmd::MatrixOrder { p, file } => {
            let pr = Prime::new(p)?;
            let m = read_matrix(&file)?;
            println!("{}", torsion_test(&m, pr)?);
        }
        Cmd::SubgroupCheck { p, files } => {
            let pr = Prime::new(p)?;
            let elements = files
                .iter()
                .map(read_matrix)
                .collect::<Result<Vec<_>, Error>>()?;
            let report = subgroup_checks(&elements, pr)?;
            let mut lines: Vec<(String, String)> = Vec::new();
            lines.push(("elements".into(), elements.len().to_string()));
            lines.push((
                "closure".into(),
                if report.closure_ok() {
                    "OK".into()
                } else {
                    format!(
                        "FAIL ({} products missing, {} inverses missing)",
                        report.closure_failures.len(),
                        report.inverse_failures.len()
                    )
                },
            ));
            lines.push((
                "glnzp".into(),
                if report.all_in_glnzp { "OK" } else { "FAIL" }.into(),
            ));
            lines.push((
                "bad primes".into(),
                if report.bad_primes.is_empty() {
                    "none".into()
                } else {
                    report
                        .bad_primes
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                },
            ));
            if let Some(inj) = report.injective_mod_p {
                lines.push((
                    "injective mod p".into(),
                    if inj { "OK" } else { "FAIL" }.into(),
                ));
            }
            if let Some(two) = report.two_adic {
                lines.push(("H size".into(), two.h_indices.len().to_string()));
                lines.push((
                    "involutions".into(),
                    if two.involutions_ok { "OK" } else { "FAIL" }.into(),
                ));
                lines.push((
                    "abelian".into(),
                    if two.abelian_ok { "OK" } else { "FAIL" }.into(),
                ));
                lines.push((
                    "mod-4 rigidity".into(),
                    if two.mod4_rigidity_ok { "OK" } else { "FAIL" }.into(),
                ));
            }
            if cli.format == Format::Tabular {
                let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(1);
                for (k, v) in lines {
                    println!("{k:<width$}  {v}");
                }
            } else {
                for (k, v) in lines {
                    println!("{k}: {v}");
                }
            }
        }
        Cmd::Involution { file } => {
            let m = read_matrix(&file)?;
            let (minus, plus) = involution_projections(&m)?;
            println!("projection -1:");
            println!("{minus}");
            println!("projection +1:");
            println!("{plus}");
        }
    }
    Ok(())
}
