//! Command-line surface.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::assembler::{self, Aa38Branch, Config, Theorem, Variant};
use crate::coeffs::{self, CoeffError};
use crate::expr::{parse_ratfunc, parse_symbol, Scope};
use crate::fixtures::{canonical_text, FixtureCatalog};
use crate::report::{Format, ReportConfig, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_COMPUTATION: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "wres-verifier", version, about = "Exact verification of boundary noncommutative-residue computations")]
struct Cli {
    /// Directory of `*.fix` files overriding the bundled corpus.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact value of one named coefficient.
    Coeff {
        name: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "plain")]
        format: Format,
    },
    /// Defining, closed-form and numeric values for a batch of coefficients.
    VerifyCoeffs {
        /// Comma-separated even dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
        /// Comma-separated names; all of them by default.
        #[arg(long, value_delimiter = ',')]
        names: Vec<String>,
        #[arg(long, default_value = "plain")]
        format: Format,
    },
    /// π⁺ of an expression: its principal part at ξ_n = +i.
    Piplus {
        expr: String,
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Print as partial fractions.
        #[arg(long)]
        partial: bool,
    },
    /// Residue at +i of a rational function of ξ_n.
    Residue {
        expr: String,
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Print the Γ⁺ integral as a multiple of π instead.
        #[arg(long)]
        contour: bool,
    },
    /// Boundary term of a theorem.
    Boundary {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "fixture")]
        variant: String,
        #[arg(long, default_value = "printed")]
        aa38: String,
        /// Also list the per-case values.
        #[arg(long)]
        cases: bool,
        #[arg(long, default_value = "plain")]
        format: Format,
    },
    /// Interior Einstein-functional term.
    Interior {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "plain")]
        format: Format,
    },
    /// Three-way comparison: printed cases, derived pipeline, printed theorem.
    Reconcile {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "printed")]
        aa38: String,
        #[arg(long, default_value = "plain")]
        format: Format,
    },
    /// Print a fixture at a dimension, or list the corpus.
    Fixture {
        id: Option<String>,
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Self { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Runs one command; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    CommandOutput { code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { EXIT_OK }, stdout: text, stderr: String::new() }
                }
                _ => CommandOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(cli) {
        Ok(out) => out,
        Err(Failure::Usage(m)) => CommandOutput::fail(EXIT_USAGE, m),
        Err(Failure::Computation(m)) => CommandOutput::fail(EXIT_COMPUTATION, m),
    }
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<assembler::AssemblyError> for Failure {
    fn from(e: assembler::AssemblyError) -> Self {
        match e {
            assembler::AssemblyError::UnknownTheorem(_) | assembler::AssemblyError::Coeff(CoeffError::InvalidDimension(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Computation(e.to_string()),
        }
    }
}

impl From<CoeffError> for Failure {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::UnknownCoefficient(_) | CoeffError::InvalidDimension(_) => Failure::Usage(e.to_string()),
            _ => Failure::Computation(e.to_string()),
        }
    }
}

/// Malformed input is a usage error; everything else failed while computing.
fn expr_failure(e: crate::expr::ExprError) -> Failure {
    use crate::expr::ExprError;
    match e {
        ExprError::SyntaxError { .. } | ExprError::UnknownIdentifier(_) | ExprError::BadExponent(_) => Failure::Usage(e.to_string()),
        ExprError::Symbol(_) => Failure::Computation(e.to_string()),
    }
}

fn comp<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Computation(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn config(fixtures: &Option<PathBuf>, aa38: &str) -> Result<Config, Failure> {
    let mut cfg = Config::from_env().with_aa38(aa38.parse::<Aa38Branch>().map_err(usage)?);
    if let Some(dir) = fixtures {
        cfg.catalog = Arc::new(FixtureCatalog::with_dir(dir).map_err(comp)?);
    }
    Ok(cfg)
}

fn report_config(cfg: &Config, precision_bits: u32, nodes: usize) -> ReportConfig {
    ReportConfig { p0_rule: cfg.p0_rule.clone(), precision_bits, nodes, ..ReportConfig::default() }
}

fn dispatch(cli: Cli) -> Result<CommandOutput, Failure> {
    match cli.command {
        Command::Coeff { name, n, format } => {
            let def = coeffs::lookup(&name)?;
            let v = coeffs::coefficient_defining(&name, n)?;
            let closed = def.closed.eval(n)?;
            Ok(CommandOutput::ok(match format {
                Format::Plain => format!("{v}\n"),
                Format::Latex => format!("{}_{{{}}}({n}) = {}\n", &name[..1], &name[1..], v.to_latex()),
                Format::Json => {
                    let mut doc = ReportDocument::new(report_config(&Config::from_env(), 0, 0));
                    doc.push(json!({
                        "name": name,
                        "n": n,
                        "definition": def.defining_text(),
                        "defining": v.to_string(),
                        "closed_form_text": def.closed.to_text(),
                        "closed_form": closed.to_string(),
                        "closed_matches_defining": closed == v,
                        "anchor": def.anchor,
                    }));
                    doc.to_json()
                }
            }))
        }
        Command::VerifyCoeffs { n, precision, nodes, names, format } => {
            let names: Vec<&str> = if names.is_empty() { coeffs::names().collect() } else { names.iter().map(String::as_str).collect() };
            for name in &names {
                coeffs::lookup(name)?;
            }
            let records = coeffs::verify_sweep(&names, &n, precision, nodes)?;
            let mut doc = ReportDocument::new(report_config(&Config::from_env(), precision, nodes));
            let consistent = records.iter().all(|r| r.defining_vs_numeric_ok);
            for r in &records {
                doc.push(r.to_json());
                doc.add_findings(r.findings());
            }
            let mut out = CommandOutput::ok(doc.emit(format));
            if !consistent {
                out.code = EXIT_INCONSISTENT;
                out.stderr = "engine inconsistency: defining derivative and numeric contour disagree\n".into();
            }
            Ok(out)
        }
        Command::Piplus { expr, n, partial } => {
            let e = parse_symbol(&expr, &Scope::new(n)).map_err(expr_failure)?;
            let p = e.pi_plus().map_err(comp)?;
            Ok(CommandOutput::ok(format!("{}\n", if partial { p.to_partial_text() } else { p.to_text() })))
        }
        Command::Residue { expr, n, contour } => {
            let f = parse_ratfunc(&expr, n).map_err(expr_failure)?;
            let text = if contour {
                let c = f.contour_integral_upper().map_err(comp)?;
                match c.to_string().as_str() {
                    "0" => "0".to_string(),
                    "1" => "pi".to_string(),
                    "-1" => "-pi".to_string(),
                    s if c.is_monomial() => format!("{s}*pi"),
                    s => format!("({s})*pi"),
                }
            } else {
                f.residue_at(&crate::arith::GaussianRational::i()).to_string()
            };
            Ok(CommandOutput::ok(format!("{text}\n")))
        }
        Command::Boundary { theorem, n, variant, aa38, cases, format } => {
            let th: Theorem = theorem.parse()?;
            let cfg = config(&cli.fixtures, &aa38)?;
            let variants: Vec<Variant> = match variant.as_str() {
                "both" => vec![Variant::Fixture, Variant::Derived],
                v => vec![v.parse().map_err(usage)?],
            };
            let mut doc = ReportDocument::new(report_config(&cfg, 0, 0));
            let mut plain = String::new();
            for v in &variants {
                let e = assembler::boundary_term(th, n, *v, &cfg)?;
                if variants.len() == 1 {
                    plain.push_str(&format!("{e}\n"));
                } else {
                    plain.push_str(&format!("{}: {e}\n", v.tag()));
                }
                let mut rec = e.to_json();
                rec["label"] = json!(format!("{}/{}", th.tag(), v.tag()));
                rec["latex"] = json!(e.to_latex());
                doc.push(rec);
                if cases {
                    for (id, ce) in assembler::case_terms(th, n, *v, &cfg)? {
                        plain.push_str(&format!("  {} [{}]: {ce}\n", id.label(), v.tag()));
                        let mut rec = ce.to_json();
                        rec["label"] = json!(format!("{}/{}", id.label(), v.tag()));
                        doc.push(rec);
                    }
                }
            }
            Ok(CommandOutput::ok(match format {
                Format::Plain => plain,
                Format::Json => doc.to_json(),
                Format::Latex => doc.records.iter().map(|r| format!("{}\n", r["latex"].as_str().unwrap_or(""))).collect(),
            }))
        }
        Command::Interior { n, format } => {
            let e = assembler::interior_term(n)?;
            Ok(CommandOutput::ok(match format {
                Format::Plain => format!("{e}\n"),
                Format::Latex => format!("{}\n", e.to_latex()),
                Format::Json => {
                    let mut doc = ReportDocument::new(ReportConfig::default());
                    let mut rec = e.to_json();
                    rec["label"] = json!(format!("interior/n={n}"));
                    doc.push(rec);
                    doc.to_json()
                }
            }))
        }
        Command::Reconcile { theorem, n, aa38, format } => {
            let th: Theorem = theorem.parse()?;
            let cfg = config(&cli.fixtures, &aa38)?;
            let r = assembler::reconcile(th, n, &cfg)?;
            let mut doc = ReportDocument::new(report_config(&cfg, 0, 0));
            doc.push(r.to_json());
            doc.add_findings(r.findings.clone());
            Ok(CommandOutput::ok(match format {
                Format::Json => doc.to_json(),
                Format::Latex => reconcile_latex(&r),
                Format::Plain => reconcile_plain(&r, &doc),
            }))
        }
        Command::Fixture { id, n } => {
            let cat = match &cli.fixtures {
                Some(d) => FixtureCatalog::with_dir(d).map_err(comp)?,
                None => FixtureCatalog::bundled(),
            };
            match id {
                None => Ok(CommandOutput::ok(cat.ids().map(|i| format!("{i}\n")).collect())),
                Some(id) => {
                    let e = cat.load(&id, n).map_err(comp)?;
                    Ok(CommandOutput::ok(canonical_text(&id, &e, n)))
                }
            }
        }
    }
}

fn reconcile_plain(r: &assembler::ReconcileReport, doc: &ReportDocument) -> String {
    let mut out = format!(
        "reconcile {} n={} (p0 rule: {}, aa38 branch: {})\n  fixture: {}\n  derived: {}\n  derived[aa38 {}]: {}\n  printed:   {}\n\n",
        r.theorem.tag(),
        r.n,
        r.p0_rule,
        r.aa38.tag(),
        r.fixture,
        r.derived,
        match r.aa38 {
            Aa38Branch::Printed => "principal-part",
            Aa38Branch::PrincipalPart => "printed",
        },
        r.derived_alternate,
        r.printed
    );
    let rows: Vec<[String; 6]> = r
        .entries
        .iter()
        .map(|e| {
            [
                e.monomial.display_text(),
                e.fixture.to_string(),
                e.derived.to_string(),
                e.printed.to_string(),
                if e.agrees() { "=".into() } else { "DIFF".into() },
                if e.p0_conditional { "p0-conditional".into() } else { String::new() },
            ]
        })
        .collect();
    let head = ["monomial", "fixture", "derived", "printed", "", ""].map(String::from);
    let mut w = [0usize; 6];
    for row in std::iter::once(&head).chain(rows.iter()) {
        for (k, c) in row.iter().enumerate() {
            w[k] = w[k].max(c.chars().count());
        }
    }
    for row in std::iter::once(&head).chain(rows.iter()) {
        let cells: Vec<String> = row.iter().enumerate().map(|(k, c)| format!("{c:<width$}", width = w[k])).collect();
        out.push_str(&format!("  {}\n", cells.join("  ").trim_end()));
    }
    out.push('\n');
    let mut doc = doc.clone();
    doc.records.clear();
    out.push_str(&doc.to_plain());
    out
}

fn reconcile_latex(r: &assembler::ReconcileReport) -> String {
    let mut out = String::from("\\begin{tabular}{llll}\n\\hline\nmonomial & fixture & derived & printed \\\\\n\\hline\n");
    for e in &r.entries {
        out.push_str(&format!(
            "${}$ & ${}$ & ${}$ & ${}$ \\\\\n",
            e.monomial.latex_text(),
            e.fixture.to_latex(),
            e.derived.to_latex(),
            e.printed.to_latex()
        ));
    }
    out.push_str("\\hline\n\\end{tabular}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandOutput {
        run_command(std::iter::once("wres-verifier").chain(args.iter().copied()))
    }

    #[test]
    fn examples() {
        assert_eq!(run(&["coeff", "B0", "--n", "4"]).stdout, "-15/8\n");
        assert_eq!(run(&["piplus", "xi/(1+xi^2)^2"]).stdout, "-i/(4*(xi-i)^2)\n");
        assert_eq!(
            run(&["boundary", "--theorem", "t41", "--n", "4"]).stdout,
            "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["coeff", "B0"]).code, EXIT_USAGE);
        assert_eq!(run(&["coeff", "Z9", "--n", "4"]).code, EXIT_USAGE);
        assert_eq!(run(&["coeff", "B0", "--n", "5"]).code, EXIT_USAGE);
        assert_eq!(run(&["piplus", "1/(xi-1)"]).code, EXIT_COMPUTATION);
        assert_eq!(run(&["piplus", "xi/("]).code, EXIT_USAGE);
        assert_eq!(run(&["boundary", "--theorem", "t99", "--n", "4"]).code, EXIT_USAGE);
        assert_eq!(run(&["--help"]).code, EXIT_OK);
    }
}
