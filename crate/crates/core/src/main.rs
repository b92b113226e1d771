use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dualsteenrod::groebner::{buchberger, GroebnerConfig};
use dualsteenrod::milnor::{q1, xi_table, zeta, TruncationSpec};
use dualsteenrod::polycore::json::{PolyJson, PolyListJson};
use dualsteenrod::polycore::Poly;
use dualsteenrod::quotient::{build_quotient, split_dims, QuotientLimits};
use dualsteenrod::sseq::{
    abutment_differentials, cobar_ext, comodule_mi, default_stem_bound, end_algebra, end_run,
    nogo_check, quotient_run, render_svg, render_text, schedule_table, ChartOptions, Coalgebra,
    Comodule, DifferentialAssignment, IndexSet, PageSnapshot, RunStep,
};
use dualsteenrod::verify::{format_line, run_suite, Suite};
use dualsteenrod::Error;

#[derive(Parser)]
#[command(name = "dualsteenrod", version, about = "Quotients of the mod 2 dual Steenrod algebra and their Adams spectral sequences")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text", env = "DUALSTEENROD_FORMAT")]
    format: Format,

    #[command(flatten)]
    limits: LimitArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest quotient dimension to enumerate.
    #[arg(long, global = true, default_value_t = 100_000, env = "DUALSTEENROD_MAX_DIM")]
    max_dim: u64,

    /// Largest internal degree to enumerate.
    #[arg(long, global = true, default_value_t = 1 << 14, env = "DUALSTEENROD_MAX_DEGREE")]
    max_degree: i64,

    /// Buchberger step cap.
    #[arg(long, global = true, default_value_t = 2_000_000, env = "DUALSTEENROD_MAX_STEPS")]
    max_steps: usize,
}

impl LimitArgs {
    fn quotient(&self) -> QuotientLimits {
        QuotientLimits {
            max_dim: self.max_dim,
            max_degree: self.max_degree,
        }
    }

    fn groebner(&self) -> GroebnerConfig {
        GroebnerConfig {
            max_degree: Some(self.max_degree as u64),
            max_steps: self.max_steps,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// The conjugate class zeta_n.
    Zeta {
        n: u32,
        /// Work in A<k> = F2[xi1..xik].
        #[arg(long, conflicts_with = "full")]
        truncate: Option<u32>,
        /// Work in F2[xi1..xiN] (default N = n).
        #[arg(long)]
        full: Option<u32>,
    },
    /// Apply Q1 to a polynomial in xi1..xik.
    Q1 {
        poly: String,
        #[arg(long, default_value_t = 8)]
        vars: u32,
    },
    /// Reduced Groebner basis of (zeta_{m+1},..,zeta_{m+k}) in A<k>, or of given relations.
    Groebner {
        k: u32,
        m: Option<u32>,
        #[arg(long = "relation")]
        relations: Vec<String>,
    },
    /// Dimension table of A<k>/(zeta_{m+1},..,zeta_{m+k}).
    Quotient { k: u32, m: u32 },
    /// Poincare polynomial coefficients.
    Poincare { k: u32, m: u32 },
    /// Frobenius pairing ranks in each degree.
    Frobenius { k: u32, m: u32 },
    /// Dimensions of the quotient tensored with the 2^n-cell splitting.
    Split { k: u32, m: u32, n: u32 },
    /// The comodule H(M_I) and the ring-structure obstruction.
    Comodule {
        /// Comma-separated positive integers.
        set: String,
        /// Treat the set as the complement of I.
        #[arg(long)]
        cofinite: bool,
    },
    /// Ext over F2[u] (or F2[u]/u^{2^k}) by the cobar complex.
    Ext {
        #[arg(long, default_value_t = 20)]
        t_bound: i64,
        #[arg(long)]
        s_max: Option<u32>,
        /// Coefficients H(M_I) instead of F2.
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        truncate: Option<u32>,
    },
    /// Pages of the relative Adams spectral sequence.
    Adams(SseqArgs),
    /// Chart of the pages (svg or text).
    Chart {
        #[command(flatten)]
        run: SseqArgs,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        cell: u32,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

#[derive(Args)]
struct SseqArgs {
    k: u32,
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Smash with End(M_{<=j}).
    #[arg(long)]
    end: Option<u32>,
    #[arg(long, env = "DUALSTEENROD_STEM_BOUND")]
    stem_bound: Option<i64>,
    /// Extra differential `r:source:target`; repeatable.
    #[arg(long = "differential")]
    differentials: Vec<String>,
    /// Skip the differentials forced by the abutment.
    #[arg(long)]
    no_abutment: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Core,
    Sseq,
    All,
}

enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Invariant(_) | Error::Abutment(_) | Error::Differential(_)) => {
                Failure::Verification(format!("{e:#}"))
            }
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

type Out<'a> = &'a mut dyn Write;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn json_line<T: Serialize>(out: Out, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).context("serializing output")?;
    writeln!(out)?;
    Ok(())
}

fn unsupported(verb: &str, format: Format) -> Failure {
    let name = format
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    Failure::Usage(anyhow::anyhow!("{verb} has no {name} output"))
}

fn write_dims(out: Out, format: Format, verb: &str, dims: &BTreeMap<i64, u64>) -> Result<(), Failure> {
    match format {
        Format::Json => json_line(out, &dims.iter().map(|(d, n)| [*d, *n as i64]).collect::<Vec<_>>()),
        Format::Csv => {
            writeln!(out, "degree,dim")?;
            for (d, n) in dims {
                writeln!(out, "{d},{n}")?;
            }
            Ok(())
        }
        Format::Text => {
            for (d, n) in dims {
                writeln!(out, "{d:>6} {n}")?;
            }
            Ok(())
        }
        Format::Svg => Err(unsupported(verb, format)),
    }
}

fn write_poly(out: Out, format: Format, verb: &str, p: &Poly) -> Result<(), Failure> {
    match format {
        Format::Json => json_line(out, &PolyJson::from_poly(p)),
        Format::Text => {
            writeln!(out, "{p}")?;
            Ok(())
        }
        _ => Err(unsupported(verb, format)),
    }
}

fn parse_set(text: &str) -> anyhow::Result<BTreeSet<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().with_context(|| format!("bad index {s:?}")))
        .collect()
}

fn run(cli: &Cli, out: Out) -> Result<(), Failure> {
    let format = cli.format;
    let limits = cli.limits.quotient();
    match &cli.command {
        Command::Zeta { n, truncate, full } => {
            let spec = match (truncate, full) {
                (Some(k), _) => TruncationSpec::Trunc(*k),
                (None, Some(big_n)) => TruncationSpec::Full(*big_n),
                (None, None) => TruncationSpec::Full((*n).max(1)),
            };
            write_poly(out, format, "zeta", &zeta(*n, spec)?)
        }
        Command::Q1 { poly, vars } => {
            let p = Poly::parse(xi_table(*vars), poly)?;
            write_poly(out, format, "q1", &q1(&p)?)
        }
        Command::Groebner { k, m, relations } => {
            let gens: Vec<Poly> = if relations.is_empty() {
                let m = m.unwrap_or(*k);
                (1..=*k)
                    .map(|i| zeta(m + i, TruncationSpec::Trunc(*k)))
                    .collect::<Result<_, _>>()?
            } else {
                relations
                    .iter()
                    .map(|r| Poly::parse(xi_table(*k), r))
                    .collect::<Result<_, _>>()?
            };
            let gb = buchberger(&gens, &cli.limits.groebner())?;
            match format {
                Format::Json => json_line(out, &PolyListJson::from_polys(gb.table(), gb.basis())),
                Format::Text => {
                    for p in gb.basis() {
                        writeln!(out, "{p}")?;
                    }
                    Ok(())
                }
                _ => Err(unsupported("groebner", format)),
            }
        }
        Command::Quotient { k, m } => {
            let qr = build_quotient(*k, *m, &limits)?;
            write_dims(out, format, "quotient", &qr.dims())
        }
        Command::Poincare { k, m } => {
            let series = build_quotient(*k, *m, &limits)?.poincare_series();
            match format {
                Format::Json => json_line(out, &series.coeffs()),
                Format::Csv => {
                    let dims = series
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(d, &c)| (d as i64, c as u64))
                        .collect();
                    write_dims(out, format, "poincare", &dims)
                }
                Format::Text => {
                    let coeffs: Vec<String> = series.coeffs().iter().map(i64::to_string).collect();
                    writeln!(out, "{}", coeffs.join(" "))?;
                    Ok(())
                }
                Format::Svg => Err(unsupported("poincare", format)),
            }
        }
        Command::Frobenius { k, m } => {
            let report = build_quotient(*k, *m, &limits)?.frobenius_check()?;
            match format {
                Format::Json => json_line(out, &report)?,
                Format::Csv => {
                    writeln!(out, "degree,dim,dual_dim,rank,nonsingular")?;
                    for e in &report.degrees {
                        writeln!(out, "{},{},{},{},{}", e.degree, e.dim, e.dual_dim, e.rank, e.nonsingular)?;
                    }
                }
                Format::Text => {
                    for e in &report.degrees {
                        writeln!(
                            out,
                            "{:>6} {:>6} {:>6} rank {:>6} {}",
                            e.degree,
                            e.dim,
                            e.dual_dim,
                            e.rank,
                            if e.nonsingular { "ok" } else { "SINGULAR" }
                        )?;
                    }
                }
                Format::Svg => return Err(unsupported("frobenius", format)),
            }
            if report.all_nonsingular {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "pairing singular in degrees {:?}",
                    report.flagged_degrees()
                )))
            }
        }
        Command::Split { k, m, n } => write_dims(out, format, "split", &split_dims(*k, *m, *n, &limits)?),
        Command::Comodule { set, cofinite } => {
            let indices = parse_set(set)?;
            let obstructions = if *cofinite {
                nogo_check(&IndexSet::Cofinite(indices.clone()))
            } else {
                nogo_check(&IndexSet::Finite(indices.clone()))
            };
            #[derive(Serialize)]
            struct Report {
                comodule: Option<Comodule>,
                obstructions: Vec<u32>,
            }
            let comodule = if *cofinite { None } else { Some(comodule_mi(&indices)?) };
            match format {
                Format::Json => json_line(out, &Report { comodule, obstructions }),
                Format::Text => {
                    if let Some(c) = &comodule {
                        for (j, terms) in c.coaction.iter().enumerate() {
                            let rhs: Vec<String> = terms
                                .iter()
                                .map(|&(p, t)| format!("u^{p} ⊗ {}", c.names[t]))
                                .collect();
                            writeln!(out, "psi({}) = {}", c.names[j], rhs.join(" + "))?;
                        }
                    }
                    if obstructions.is_empty() {
                        writeln!(out, "no obstruction to a unital ring structure")?;
                    } else {
                        writeln!(out, "no unital ring structure: i in I with i+1 not in I at {obstructions:?}")?;
                    }
                    Ok(())
                }
                _ => Err(unsupported("comodule", format)),
            }
        }
        Command::Ext { t_bound, s_max, module, truncate } => {
            let m = match module {
                Some(set) => comodule_mi(&parse_set(set)?)?,
                None => Comodule::trivial(),
            };
            let coalgebra = truncate.map_or(Coalgebra::Polynomial, Coalgebra::Truncated);
            let ext = cobar_ext(&m, coalgebra, *t_bound, *s_max)?;
            match format {
                Format::Json => json_line(out, &ext.dims.iter().map(|(&(s, t), &d)| (s, t, d)).collect::<Vec<_>>()),
                Format::Csv => {
                    writeln!(out, "s,t,dim")?;
                    for (&(s, t), d) in &ext.dims {
                        writeln!(out, "{s},{t},{d}")?;
                    }
                    Ok(())
                }
                Format::Text => {
                    for (&(s, t), d) in &ext.dims {
                        writeln!(out, "s={s:<3} t={t:<4} {d}")?;
                    }
                    Ok(())
                }
                Format::Svg => Err(unsupported("ext", format)),
            }
        }
        Command::Adams(args) => {
            let snaps = snapshots(args)?;
            match format {
                Format::Json => {
                    for s in &snaps {
                        json_line(out, s)?;
                    }
                    Ok(())
                }
                Format::Text => {
                    for s in &snaps {
                        write!(out, "{}", render_text(s))?;
                    }
                    Ok(())
                }
                Format::Csv => {
                    writeln!(out, "r,stem,filtration,dim")?;
                    for s in &snaps {
                        for (x, f, d) in &s.entries {
                            writeln!(out, "{},{x},{f},{d}", s.r)?;
                        }
                    }
                    Ok(())
                }
                Format::Svg => {
                    write!(out, "{}", render_svg(&snaps, &ChartOptions::default()))?;
                    Ok(())
                }
            }
        }
        Command::Chart { run, output, cell } => {
            let snaps = snapshots(run)?;
            let text = match format {
                Format::Text => snaps.iter().map(render_text).collect::<String>(),
                Format::Svg => render_svg(
                    &snaps,
                    &ChartOptions {
                        cell: *cell,
                        ..ChartOptions::default()
                    },
                ),
                _ => return Err(unsupported("chart", format)),
            };
            match output {
                Some(path) => write_atomic(path, text.as_bytes()).map_err(Failure::Usage),
                None => {
                    out.write_all(text.as_bytes())?;
                    Ok(())
                }
            }
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Core => Suite::Core,
                SuiteArg::Sseq => Suite::Sseq,
                SuiteArg::All => Suite::All,
            };
            let outcomes = run_suite(suite);
            match format {
                Format::Json => json_line(out, &outcomes)?,
                _ => {
                    for o in &outcomes {
                        writeln!(out, "{}", format_line(o))?;
                    }
                }
            }
            let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("criteria {failed:?}")))
            }
        }
    }
}

fn snapshots(args: &SseqArgs) -> Result<Vec<PageSnapshot>, Failure> {
    let SseqArgs { k, m, n, end, stem_bound, differentials, no_abutment } = args;
    let (k, m, n) = (*k, *m, *n);
    let table = match end {
        Some(j) => end_algebra(k, m, *j)?.table().clone(),
        None => schedule_table(k, m)?,
    };
    let mut extra = if *no_abutment { Vec::new() } else { abutment_differentials(k, m)? };
    for d in differentials {
        extra.push(DifferentialAssignment::parse(&table, d)?);
    }
    let steps: Vec<RunStep> = match end {
        Some(j) => {
            let bound = stem_bound.unwrap_or(default_stem_bound(k, m, 0)?);
            end_run(k, m, *j, bound, &extra)?
        }
        None => {
            let bound = stem_bound.unwrap_or(default_stem_bound(k, m, n)?);
            quotient_run(k, m, n, bound, &extra)?
        }
    };
    Ok(steps.iter().map(|s| s.page.snapshot(s.ranks.as_ref())).collect())
}

fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(std::path::Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
