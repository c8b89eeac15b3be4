use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use serde_json::json;

use invlog::json::{to_string as to_json, SCHEMA_VERSION};
use invlog::psi::{psi_minus_bound, psi_plus_bound};
use invlog::verify::{exit_code, overall_status, reports_to_json, Check, Extremum};
use invlog::{
    render_image_domain, render_lune, search_class, verify_all, BodySearch, ClassId, Error, Extremal, Status,
    TheoremId, VerificationReport, VerifyOptions,
};

const USAGE_EXIT: u8 = 64;

#[derive(Parser)]
#[command(name = "invlog", version, about = "Bounds on |Gamma_2| - |Gamma_1| for four univalent classes")]
struct Cli {
    /// Emit a machine-readable JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where the command supports it.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for closed-form comparisons.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Treat known discrepancies as failures.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a bound along every route.
    Verify {
        /// 1.1, 1.2, 1.3, 1.4 or all.
        #[arg(long)]
        theorem: String,
        /// x-grid of the body search (rho uses half).
        #[arg(long, default_value_t = 96)]
        grid: usize,
        /// Write the JSON report to this file as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the coefficient body for the extrema of |Gamma_2| - |Gamma_1|.
    Search {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 96)]
        grid: usize,
    },
    /// Print the series of an extremal function.
    Extremal {
        /// f1 ... f6
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
        /// Parameter of f6.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Draw the lune boundary.
    RenderLune {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 720)]
        samples: usize,
    },
    /// Draw the image of a circle under an extremal map.
    RenderImage {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0.99)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        /// Parameter of f6.
        #[arg(long)]
        a: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownName(_) | Error::GridTooSmall(..) | Error::InvalidArgument(_) | Error::OrderTooSmall(..) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

struct Paint(bool);

impl Paint {
    fn detect() -> Self {
        Paint(std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal())
    }

    fn status(&self, status: Status) -> String {
        let label = status.label();
        if !self.0 {
            return label.to_string();
        }
        let code = match status {
            Status::Pass => 32,
            Status::KnownDiscrepancy => 33,
            Status::Fail => 31,
        };
        format!("\x1b[{code}m{label}\x1b[0m")
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_EXIT),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_EXIT)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_extremal(name: &str, a: Option<f64>) -> Result<Extremal, Failure> {
    let map: Extremal = name.parse()?;
    match (map, a) {
        (Extremal::F6 { .. }, Some(a)) if (0.0..=1.0).contains(&a) => Ok(Extremal::F6 { a }),
        (Extremal::F6 { .. }, Some(a)) => Err(Failure::Usage(format!("f6 parameter {a} must lie in [0, 1]"))),
        (_, Some(_)) => Err(Failure::Usage(format!("--a only applies to f6, not {name}"))),
        (map, None) => Ok(map),
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let mut stdout = io::stdout().lock();
    match &cli.command {
        Command::Verify { theorem, grid, out } => {
            let ids: Vec<TheoremId> = if theorem == "all" {
                TheoremId::ALL.to_vec()
            } else {
                vec![theorem.parse()?]
            };
            let mut opts = VerifyOptions { search: BodySearch::with_grid(*grid)?, seed: cli.seed, ..Default::default() };
            if let Some(tol) = cli.tolerance {
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(Failure::Usage(format!("tolerance {tol} must be positive")));
                }
                opts.closed_form_tol = tol;
            }
            let reports = verify_all(&ids, &opts)?;
            let document = reports_to_json(&reports, cli.strict);
            if let Some(path) = out {
                fs::write(path, &document)?;
            }
            if cli.json {
                stdout.write_all(document.as_bytes())?;
            } else if cli.csv {
                write_checks_csv(&mut stdout, &reports)?;
            } else {
                let paint = Paint::detect();
                for report in &reports {
                    print_report(&mut stdout, report, &paint)?;
                }
                let status = overall_status(&reports, cli.strict);
                writeln!(stdout, "overall: {}", paint.status(status))?;
            }
            Ok(exit_code(overall_status(&reports, cli.strict)) as u8)
        }
        Command::Search { class, grid } => {
            let class: ClassId = class.parse()?;
            let extrema = search_class(class, &BodySearch::with_grid(*grid)?)?;
            let b = class.psi_coeffs();
            let upper = class.scale() * psi_plus_bound(&b);
            let lower = -class.scale() * psi_minus_bound(&b)?;
            if cli.json {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "class": class,
                    "grid": grid,
                    "max": extrema.max,
                    "min": extrema.min,
                    "closed_form_upper": upper,
                    "closed_form_lower": lower,
                });
                stdout.write_all(to_json(&doc).as_bytes())?;
            } else {
                writeln!(stdout, "class {class}, grid {grid}")?;
                print_extremum(&mut stdout, "max", &extrema.max, upper)?;
                print_extremum(&mut stdout, "min", &extrema.min, lower)?;
            }
            Ok(0)
        }
        Command::Extremal { name, order, a } => {
            let map = parse_extremal(name, *a)?;
            let f = map.series(*order)?;
            if cli.json {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "extremal": map,
                    "class": map.class(),
                    "order": order,
                    "coeffs": f.coeffs(),
                });
                stdout.write_all(to_json(&doc).as_bytes())?;
            } else if cli.csv {
                let mut writer = csv_writer(&mut stdout);
                writer.write_record(["n", "re", "im"]).map_err(csv_failure)?;
                for (n, c) in f.coeffs().iter().enumerate() {
                    writer
                        .write_record([n.to_string(), c.re.to_string(), c.im.to_string()])
                        .map_err(csv_failure)?;
                }
                writer.flush()?;
            } else {
                writeln!(stdout, "{} ({}), order {order}", map.name(), map.class())?;
                for (n, c) in f.coeffs().iter().enumerate() {
                    writeln!(stdout, "a{n:<3} {:+.16e} {:+.16e}i", c.re, c.im)?;
                }
            }
            Ok(0)
        }
        Command::RenderLune { out, samples } => {
            let figure = render_lune(*samples)?;
            fs::write(out, figure.to_svg())?;
            let csv_path = sibling_csv(out);
            figure.write_csv(fs::File::create(&csv_path)?)?;
            if cli.json {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "svg": out,
                    "csv": csv_path,
                    "samples": figure.samples,
                    "max_boundary_residual": figure.max_boundary_residual,
                    "vertices": figure.vertices,
                    "right_extent": figure.right_extent,
                });
                stdout.write_all(to_json(&doc).as_bytes())?;
            } else {
                writeln!(stdout, "wrote {} and {}", out.display(), csv_path.display())?;
                writeln!(stdout, "boundary residual {:.3e}", figure.max_boundary_residual)?;
                for v in &figure.vertices {
                    writeln!(stdout, "vertex {:<8} distance {:.3e}", v.label, v.distance)?;
                }
            }
            Ok(0)
        }
        Command::RenderImage { name, radius, out, samples, a } => {
            let map = parse_extremal(name, *a)?;
            let figure = render_image_domain(&map, *radius, *samples)?;
            fs::write(out, figure.to_svg())?;
            let csv_path = sibling_csv(out);
            figure.write_csv(fs::File::create(&csv_path)?)?;
            if cli.json {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "svg": out,
                    "csv": csv_path,
                    "name": figure.name,
                    "radius": figure.radius,
                    "closed_form": figure.closed_form,
                    "points": figure.curve.points.len(),
                });
                stdout.write_all(to_json(&doc).as_bytes())?;
            } else {
                writeln!(stdout, "wrote {} and {}", out.display(), csv_path.display())?;
            }
            Ok(0)
        }
    }
}

fn sibling_csv(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::Writer::from_writer(out)
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn write_checks_csv<W: Write>(out: W, reports: &[VerificationReport]) -> Result<(), Failure> {
    let mut writer = csv_writer(out);
    writer
        .write_record(["theorem", "check", "observed", "expected", "tolerance", "status"])
        .map_err(csv_failure)?;
    for report in reports {
        for Check { name, observed, expected, tolerance, status } in &report.checks {
            writer
                .write_record([
                    report.theorem.label().to_string(),
                    name.clone(),
                    format!("{observed:.16e}"),
                    format!("{expected:.16e}"),
                    format!("{tolerance:.3e}"),
                    status.label().to_string(),
                ])
                .map_err(csv_failure)?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn print_extremum<W: Write>(out: &mut W, label: &str, e: &Extremum, closed: f64) -> io::Result<()> {
    writeln!(
        out,
        "{label}: {:+.12} (closed form {:+.12}, gap {:.2e}) at x={:.8} rho={:.8} phi={:.8}, c1={:.8}{:+.8}i, c2={:.8}{:+.8}i",
        e.value,
        closed,
        (e.value - closed).abs(),
        e.at.x,
        e.at.rho,
        e.at.phi,
        e.c1.re,
        e.c1.im,
        e.c2.re,
        e.c2.im
    )
}

fn print_report<W: Write>(out: &mut W, r: &VerificationReport, paint: &Paint) -> io::Result<()> {
    writeln!(out, "{} {} (scale {}): {}", r.theorem, r.class, r.scale, paint.status(r.status))?;
    writeln!(
        out,
        "  B1={} B2={} B3={} B4={}; branches {:?} / {:?}",
        r.psi.b1(),
        r.psi.b2(),
        r.psi.b3(),
        r.b4,
        r.plus_branch,
        r.minus_branch
    )?;
    writeln!(
        out,
        "  upper: closed {:+.12}  oracle {:+.12}  search {:+.12}",
        r.closed_form_upper, r.oracle_upper.value, r.search_upper.value
    )?;
    writeln!(
        out,
        "  lower: closed {:+.12}  oracle {:+.12}  search {:+.12}",
        r.closed_form_lower, r.oracle_lower.value, r.search_lower.value
    )?;
    for (name, value) in &r.extremal_values {
        writeln!(out, "  {name}: {value:+.15}")?;
    }
    for c in &r.checks {
        writeln!(
            out,
            "  [{}] {}: observed {:.12e}, expected {:.12e}, tol {:.1e}",
            paint.status(c.status),
            c.name,
            c.observed,
            c.expected,
            c.tolerance
        )?;
    }
    for d in &r.discrepancies {
        writeln!(out, "  discrepancy ({}): printed {}; used {}; {}", d.topic, d.printed, d.used, d.evidence)?;
    }
    for n in &r.notes {
        writeln!(out, "  note: {n}")?;
    }
    Ok(())
}
