use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sphdesign::angle::parse_angle;
use sphdesign::criteria::tables::{self, EfficiencyTable};
use sphdesign::criteria::{
    equivalence_check, support_bound, ConstrainedSearch, Criterion, GridResolution, LevelSelector,
};
use sphdesign::design::{
    azimuthal_design, banded_design, equal_height_design, grid_design, information_matrix,
    merge_poles, polar_from_rule, product_design, SphereDesign,
};
use sphdesign::quadrature::{
    equal_weight_rule, gauss_rule, lobatto_rule, radau_rule, FixedEnd, QuadratureRule,
};
use sphdesign::{io, regression, Error};

const OPTIMALITY_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "sphdesign",
    version,
    about = "Optimal designs for spherical harmonic regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a product design from a quadrature rule and a uniform azimuthal grid.
    Build(BuildArgs),
    /// Check whether a design file has identity information matrix.
    Verify {
        file: PathBuf,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Efficiencies of a design file, a built-in design, or a preset table.
    Eff(EffArgs),
    /// Convert a design file to csv, json or xyz.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a quadrature rule on [-1, 1].
    Quad {
        #[arg(long, value_enum)]
        rule: RuleKind,
        #[arg(long)]
        r: Option<usize>,
        /// Model degree; sets the default size and is required for equal-weight.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print the polar support bound for degree d.
    Bound {
        #[arg(long)]
        d: usize,
        /// Also run the constrained random search inside the bound.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 10_000)]
        candidates: usize,
    },
    /// Least-squares fit of harmonic coefficients to radius samples.
    Fit {
        samples: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleKind {
    Gauss,
    #[value(name = "radau+")]
    RadauPlus,
    #[value(name = "radau-")]
    RadauMinus,
    Lobatto,
    EqualWeight,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Json,
    Xyz,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Markdown,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    rule: RuleKind,
    #[arg(long)]
    r: Option<usize>,
    /// Azimuthal points; defaults to 2d+1.
    #[arg(long)]
    t: Option<usize>,
    /// Azimuthal phase, e.g. -pi or -16pi/15.
    #[arg(long, default_value = "-pi", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long)]
    merge_poles: bool,
    /// Band sizes for an exact equal-weight design, e.g. 15x8,16x15.
    #[arg(long)]
    banded: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EffArgs {
    #[arg(long, conflicts_with = "builtin")]
    design: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Comma-separated: D, A, E, psi:p:r, phi:p[:levels].
    #[arg(
        long,
        default_value = "D,E,A,psi:-1:2,psi:-1:3",
        allow_hyphen_values = true
    )]
    criteria: String,
    #[arg(long, group = "preset")]
    table2: bool,
    #[arg(long, group = "preset")]
    table3: bool,
    #[arg(long, group = "preset")]
    table4: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Grid,
    EqualHeight,
}

/// Failure classes, mapped to exit codes 1–3.
enum Failure {
    Check,
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Parse(_) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => build(args),
        Command::Verify { file, d } => verify(&file, d),
        Command::Eff(args) => eff(args),
        Command::Export { file, format, out } => export(&file, format, out.as_deref()),
        Command::Quad { rule, r, d, json } => quad(rule, r, d, json),
        Command::Bound {
            d,
            search,
            candidates,
        } => bound(d, search, candidates),
        Command::Fit { samples, d, out } => fit(&samples, d, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_design(path: &Path) -> Result<(SphereDesign, Option<usize>), Failure> {
    io::read_design(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn make_rule(kind: RuleKind, r: Option<usize>, d: usize) -> Result<QuadratureRule, Failure> {
    let gauss_range = |r: usize| {
        if r < d + 1 || r > 2 * d {
            Err(usage(format!(
                "need d+1 <= r <= 2d, got r = {r} for d = {d}"
            )))
        } else {
            Ok(r)
        }
    };
    let rule = match kind {
        RuleKind::Gauss => gauss_rule(gauss_range(r.unwrap_or(d + 1))?)?,
        RuleKind::RadauPlus => radau_rule(gauss_range(r.unwrap_or(d + 1))?, FixedEnd::PlusOne)?,
        RuleKind::RadauMinus => radau_rule(gauss_range(r.unwrap_or(d + 1))?, FixedEnd::MinusOne)?,
        RuleKind::Lobatto => {
            let r = r.unwrap_or(d + 2);
            if r < d + 2 {
                return Err(usage(format!(
                    "need r >= d+2 (2r-3 >= 2d), got r = {r} for d = {d}"
                )));
            }
            lobatto_rule(r)?
        }
        RuleKind::EqualWeight => {
            if r.is_some() {
                return Err(usage("equal-weight rules have a fixed size; drop --r"));
            }
            equal_weight_rule(d)?
        }
    };
    Ok(rule)
}

fn parse_bands(spec: &str) -> Result<Vec<usize>, Failure> {
    let mut bands = Vec::new();
    for part in spec.split(',') {
        let (t, count) = part
            .trim()
            .split_once('x')
            .ok_or_else(|| usage(format!("band `{part}` is not of the form TxK")))?;
        let t: usize = t
            .parse()
            .map_err(|_| usage(format!("bad band size `{t}`")))?;
        let count: usize = count
            .parse()
            .map_err(|_| usage(format!("bad band count `{count}`")))?;
        bands.extend(std::iter::repeat_n(t, count));
    }
    Ok(bands)
}

fn build(args: BuildArgs) -> Outcome {
    let d = args.d;
    if d == 0 {
        return Err(usage("need d >= 1"));
    }
    let rule = make_rule(args.rule, args.r, d)?;
    let xi = if let Some(spec) = &args.banded {
        if !matches!(args.rule, RuleKind::EqualWeight) {
            return Err(usage("--banded needs --rule equal-weight"));
        }
        banded_design(&rule, &parse_bands(spec)?)?
    } else {
        let t = args.t.unwrap_or(2 * d + 1);
        if t < 2 * d + 1 {
            return Err(usage(format!(
                "need t >= 2d+1 = {}, got t = {t}",
                2 * d + 1
            )));
        }
        let alpha = parse_angle(&args.alpha).map_err(|e| usage(e.to_string()))?;
        product_design(&polar_from_rule(&rule), &azimuthal_design(alpha, t)?)
    };
    let xi = if args.merge_poles {
        merge_poles(&xi)
    } else {
        xi
    };
    let json = io::design_to_json(&xi, Some(d))?;
    match &args.out {
        Some(path) => {
            write_output(Some(path), &json)?;
            println!(
                "{:>4}  {:>20}  {:>20}  {:>20}",
                "i", "theta", "phi", "weight"
            );
            for (i, p) in xi.points().iter().enumerate() {
                println!(
                    "{i:>4}  {:>20.15}  {:>20.15}  {:>20.15}",
                    p.theta, p.phi, p.weight
                );
            }
            println!("{} points written to {}", xi.len(), path.display());
            Ok(())
        }
        None => write_output(None, &json),
    }
}

fn verify(file: &Path, d: Option<usize>) -> Outcome {
    let (xi, file_d) = load_design(file)?;
    let d = d
        .or(file_d)
        .ok_or_else(|| usage("degree unknown: pass --d"))?;
    let m = information_matrix(&xi, d);
    let dist = m.distance_to_identity();
    let eig = m.eigen();
    println!("points: {}", xi.len());
    println!("degree: {d}");
    println!("||M - I||_inf: {dist:.6e}");
    println!("eigenvalues: [{:.6}, {:.6}]", eig.min(), eig.max());
    let sel = LevelSelector::full(d);
    match equivalence_check(&xi, d, &sel, -1.0, GridResolution::default()) {
        Ok(r) => println!(
            "equivalence (A, all levels): max {:.6} vs bound {:.6} at (theta {:.6}, phi {:.6}): {}",
            r.max_lhs,
            r.bound,
            r.argmax.theta(),
            r.argmax.phi(),
            if r.holds { "holds" } else { "violated" }
        ),
        Err(e) => println!("equivalence (A, all levels): {e}"),
    }
    if dist < OPTIMALITY_TOLERANCE {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Check)
    }
}

fn eff(args: EffArgs) -> Outcome {
    let preset = if args.table2 {
        Some(tables::table2()?)
    } else if args.table3 {
        Some(tables::table3()?)
    } else if args.table4 {
        Some(tables::table4()?)
    } else {
        None
    };
    let table = match preset {
        Some(t) => t,
        None => {
            let (xi, label, d, n1, n2) = match (&args.design, args.builtin) {
                (Some(path), None) => {
                    let (xi, file_d) = load_design(path)?;
                    let d = args
                        .d
                        .or(file_d)
                        .ok_or_else(|| usage("degree unknown: pass --d"))?;
                    (xi, "file", d, None, None)
                }
                (None, Some(kind)) => {
                    let d = args.d.ok_or_else(|| usage("--builtin needs --d"))?;
                    let n1 = args.n1.ok_or_else(|| usage("--builtin needs --n1"))?;
                    let n2 = args.n2.unwrap_or(2 * d + 1);
                    let (xi, label) = match kind {
                        Builtin::Grid => (grid_design(n1, n2)?, "grid"),
                        Builtin::EqualHeight => (equal_height_design(n1, n2)?, "equal-height"),
                    };
                    (xi, label, d, Some(n1), Some(n2))
                }
                _ => return Err(usage("pass --design, --builtin, or a table preset")),
            };
            let criteria = args
                .criteria
                .split(',')
                .map(|name| Criterion::parse(name, d))
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = EfficiencyTable::new(criteria);
            t.push(label, &xi, d, n1, n2)?;
            t
        }
    };
    let text = match args.format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Markdown => table.to_markdown(),
    };
    print!("{text}");
    Ok(())
}

fn export(file: &Path, format: ExportFormat, out: Option<&Path>) -> Outcome {
    let (xi, d) = load_design(file)?;
    let text = match format {
        ExportFormat::Csv => io::design_to_csv(&xi)?,
        ExportFormat::Json => io::design_to_json(&xi, d)?,
        ExportFormat::Xyz => io::design_to_xyz(&xi),
    };
    write_output(out, &text)
}

fn quad(kind: RuleKind, r: Option<usize>, d: Option<usize>, json: bool) -> Outcome {
    let rule = match (kind, r, d) {
        (RuleKind::EqualWeight, _, None) => return Err(usage("equal-weight needs --d")),
        (_, None, None) => return Err(usage("pass --r or --d")),
        (RuleKind::Gauss, Some(r), _) => gauss_rule(r)?,
        (RuleKind::RadauPlus, Some(r), _) => radau_rule(r, FixedEnd::PlusOne)?,
        (RuleKind::RadauMinus, Some(r), _) => radau_rule(r, FixedEnd::MinusOne)?,
        (RuleKind::Lobatto, Some(r), _) => lobatto_rule(r)?,
        (kind, r, Some(d)) => make_rule(kind, r, d)?,
    };
    if json {
        return write_output(None, &io::rule_to_json(&rule)?);
    }
    println!("degree: {}", rule.degree());
    println!("{:>4}  {:>24}  {:>24}", "i", "node", "weight");
    for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        println!("{i:>4}  {x:>24.16e}  {w:>24.16e}");
    }
    Ok(())
}

fn bound(d: usize, search: bool, candidates: usize) -> Outcome {
    let z = support_bound(d);
    println!("z* = {z:.15}");
    println!("cos z* = {:.15}", z.cos());
    if search {
        let s = ConstrainedSearch {
            candidates,
            ..ConstrainedSearch::new(d)
        };
        let out = s.run()?;
        println!(
            "search: {} candidates with theta in [{:.6}, {:.6}], best ||M - I||_inf = {:.6e}",
            out.candidates_evaluated, out.window.0, out.window.1, out.best_distance
        );
    }
    Ok(())
}

fn fit(samples: &Path, d: usize, out: Option<&Path>) -> Outcome {
    let samples = io::read_samples(samples)
        .map_err(|e| Failure::Input(format!("{}: {e}", samples.display())))?;
    let c = regression::fit(&samples, d)?;
    write_output(out, &io::coefficients_to_json(&c)?)
}
