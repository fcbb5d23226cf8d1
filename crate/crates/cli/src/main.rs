use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use trichow::chern::todd_series;
use trichow::grr::{grr_fragments, maroni_stratum_class, solve_z};
use trichow::hirzebruch::admissible_maroni;
use trichow::jets::{divisor_table, independence_rank, z_degree, JetContext, PwClass, Subbundle};
use trichow::kl::{branch_number, eliminate_relations, main_certificate, main_certificate_symbolic, RelationCertificate};
use trichow::trigonal::{
    branch_report, forbidden_strata_audit, pencil_triple_count, random_smooth_curve, CurveJson, FieldTag, TrigonalCurve,
};
use trichow::scalar::{rat, rint};
use trichow::{Error, Field, Fp, Rational};

/// Primes accepted by `--prime` and in curve files.
const PRIMES: [u64; 3] = [1_000_003, 999_983, 2_147_483_647];

#[derive(Parser)]
#[command(name = "trichow", version, about = "Exact intersection theory for trigonal curves")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Derive psi^2 = 0 from the degree-3 strata classes and print a certificate.
    DeriveMainRelation {
        #[arg(long, required_unless_present = "symbolic_b")]
        genus: Option<i64>,
        /// Keep b as an indeterminate instead of 2g + 4.
        #[arg(long, conflicts_with = "genus")]
        symbolic_b: bool,
    },
    /// Re-check a certificate written by `derive-main-relation --format json`.
    VerifyCertificate { file: PathBuf },
    /// Subbundle divisor classes on P(W) and their independence ranks.
    JetDivisors {
        #[arg(long)]
        genus: i64,
    },
    /// Solve the degree-2 GRR identity for Z.
    GrrPush {
        #[arg(long)]
        genus: i64,
    },
    /// Classes of the Maroni strata for every admissible n up to the bound.
    MaroniClasses {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        max_n: i64,
    },
    /// Work with individual curves on F_0 or F_1
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Count triple-point members of a random pencil and compare with deg Z.
    PencilCount {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        seed: u64,
        /// Work over F_p instead of Q.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Run the invariant checks for every genus up to the bound.
    Selfcheck {
        #[arg(long, default_value_t = 4)]
        max_genus: i64,
    },
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Smoothness, branch points and forbidden-strata audit of a curve file.
    Analyze { file: PathBuf },
    /// Sample a smooth curve of the given genus.
    Random {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok(String),
    /// The computation finished but did not verify.
    Failed(String),
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_)
            | Error::GenusTooSmall(_)
            | Error::Parity { .. }
            | Error::Refused(_)
            | Error::Parse(_)
            | Error::Arity(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(s)) => {
            print!("{s}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let fmt = cli.format;
    match cli.command {
        Command::DeriveMainRelation { genus, symbolic_b } => derive(genus, symbolic_b, fmt),
        Command::VerifyCertificate { file } => verify_certificate(&file),
        Command::JetDivisors { genus } => jet_divisors(genus, fmt),
        Command::GrrPush { genus } => grr_push(genus, fmt),
        Command::MaroniClasses { genus, max_n } => maroni(genus, max_n, fmt),
        Command::Curve(CurveCommand::Analyze { file }) => analyze(&file, fmt),
        Command::Curve(CurveCommand::Random { genus, seed, prime, out }) => random(genus, seed, prime, out),
        Command::PencilCount { genus, seed, prime } => pencil(genus, seed, prime, fmt),
        Command::Selfcheck { max_genus } => selfcheck(max_genus),
    }
}

/// Runs `$body` with `$F` bound to the field named by `$tag`.
macro_rules! with_field {
    ($tag:expr, $F:ident => $body:expr) => {
        match $tag {
            FieldTag::Q => {
                type $F = Rational;
                $body
            }
            FieldTag::Fp { p: 1_000_003 } => {
                type $F = Fp<1_000_003>;
                $body
            }
            FieldTag::Fp { p: 999_983 } => {
                type $F = Fp<999_983>;
                $body
            }
            FieldTag::Fp { p: 2_147_483_647 } => {
                type $F = Fp<2_147_483_647>;
                $body
            }
            FieldTag::Fp { p } => Err(Failure::Usage(format!("unsupported prime {p}; use one of {PRIMES:?}"))),
        }
    };
}

fn field_tag(prime: Option<u64>) -> FieldTag {
    prime.map_or(FieldTag::Q, |p| FieldTag::Fp { p })
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn derive(genus: Option<i64>, symbolic: bool, fmt: Format) -> CmdResult {
    let cert = match genus {
        Some(g) if !symbolic => main_certificate(g)?,
        _ => main_certificate_symbolic()?,
    };
    if let Err(e) = cert.verify() {
        return Ok(Outcome::Failed(format!("certificate does not verify: {e}\n")));
    }
    Ok(Outcome::Ok(match fmt {
        Format::Json => cert.to_json() + "\n",
        Format::Text => cert.to_text(),
    }))
}

fn verify_certificate(path: &PathBuf) -> CmdResult {
    let cert = RelationCertificate::from_json(&read_file(path)?)?;
    Ok(match cert.verify() {
        Ok(()) => Outcome::Ok("certificate verified\n".into()),
        Err(e) => Outcome::Failed(format!("certificate rejected: {e}\n")),
    })
}

fn jet_divisors(g: i64, fmt: Format) -> CmdResult {
    let ctx = JetContext::new(g)?;
    let cls = |s| ctx.subbundle_divisor_class(s).map(PwClass::Class);
    let rank_w = independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaN)?, cls(Subbundle::XiTr)?])?;
    let rank_v = independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaRed)?, cls(Subbundle::DeltaRam)?])?;
    let ok = rank_w == 3 && rank_v == 3;
    let body = match fmt {
        Format::Json => {
            let mut classes = serde_json::Map::new();
            for s in Subbundle::ALL {
                classes.insert(s.name().into(), json!(ctx.subbundle_divisor_class(s)?.to_string()));
            }
            let v = json!({
                "genus": g,
                "classes": classes,
                "rank_delta_delta_n_xi_tr": rank_w,
                "rank_delta_delta_red_delta_ram": rank_v,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Format::Text => format!(
            "{}rank(delta, delta_n, xi_tr) = {rank_w}\nrank(delta, delta_red, delta_ram) = {rank_v}\n",
            divisor_table(g)?
        ),
    };
    Ok(if ok { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

fn grr_push(g: i64, fmt: Format) -> CmdResult {
    let z = solve_z(g)?;
    let residue = z.back_substituted()?;
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&grr_fragments(g)?).unwrap() + "\n",
        Format::Text => format!(
            "identity: 0 = {}\ncoefficient of Z: {}\nZ = {}\nafter substitution: {}\n",
            z.identity, z.coefficient, z.expression, residue
        ),
    };
    Ok(if residue.is_zero() { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

fn maroni(g: i64, max_n: i64, fmt: Format) -> CmdResult {
    let ns: Vec<i64> = admissible_maroni(g).into_iter().map(i64::from).filter(|&n| n >= 2 && n <= max_n).collect();
    let mut ok = true;
    let mut rows = Vec::new();
    for n in ns {
        let c = maroni_stratum_class(g, n)?;
        let monomial = c.monomial_coefficient().is_some();
        ok &= monomial;
        rows.push((n, c.class.to_string(), c.expected_degree, monomial));
    }
    let body = match fmt {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, class, deg, mono)| json!({"n": n, "class": class, "degree": deg, "monomial": mono}))
                .collect();
            serde_json::to_string_pretty(&json!({"genus": g, "strata": v})).unwrap() + "\n"
        }
        Format::Text if rows.is_empty() => format!("no admissible n in 2..={max_n} for genus {g}\n"),
        Format::Text => rows
            .iter()
            .map(|(n, class, deg, mono)| {
                format!("n={n}: {class} (degree {deg}{})\n", if *mono { "" } else { ", NOT a single monomial" })
            })
            .collect(),
    };
    Ok(if ok { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

fn analyze(path: &PathBuf, fmt: Format) -> CmdResult {
    let text = read_file(path)?;
    let j: CurveJson = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad curve file: {e}")))?;
    with_field!(j.field.clone(), F => analyze_curve(TrigonalCurve::<F>::from_json_value(&j)?, fmt))
}

fn analyze_curve<F: Field>(c: TrigonalCurve<F>, fmt: Format) -> CmdResult {
    let g = c.genus()?;
    if !c.is_smooth() {
        let body = match fmt {
            Format::Json => json!({"genus": g, "smooth": false}).to_string() + "\n",
            Format::Text => format!("genus {g}\nsmooth: no\n"),
        };
        return Ok(Outcome::Failed(body));
    }
    let report = branch_report(&c)?;
    let audit = forbidden_strata_audit(&c)?;
    let expected = branch_number(3, g);
    let ok = report.total_ramification() == expected && audit.pass;
    let body = match fmt {
        Format::Json => {
            let v = json!({
                "genus": g,
                "smooth": true,
                "branch_report": serde_json::from_str::<serde_json::Value>(&report.to_json()).unwrap(),
                "expected_ramification": expected,
                "audit": audit,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Format::Text => {
            let mut s = format!("genus {g}\nsmooth: yes\ndiscriminant degree {}\n", report.disc_degree);
            for p in &report.points {
                s.push_str(&format!("branch points {}: multiplicity {}, profile {}\n", p.factor(), p.multiplicity, p.profile));
            }
            s.push_str(&format!(
                "branch points: {}\ntotal ramification: {} (expected {expected})\n",
                report.branch_point_count(),
                report.total_ramification()
            ));
            s + &audit.to_text()
        }
    };
    Ok(if ok { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

fn random(g: i64, seed: u64, prime: Option<u64>, out: Option<PathBuf>) -> CmdResult {
    let text = with_field!(field_tag(prime), F => Ok::<_, Failure>(random_smooth_curve::<F>(g, seed)?.curve.to_json()))?;
    match out {
        Some(path) => {
            fs::write(&path, text + "\n").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::Ok(format!("wrote {}\n", path.display())))
        }
        None => Ok(Outcome::Ok(text + "\n")),
    }
}

fn pencil(g: i64, seed: u64, prime: Option<u64>, fmt: Format) -> CmdResult {
    let exp = with_field!(field_tag(prime), F => Ok::<_, Failure>(pencil_triple_count::<F>(g, seed)?))?;
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&exp).unwrap() + "\n",
        Format::Text if exp.matches => exp.to_text() + "\n",
        Format::Text => format!(
            "{}\n  pencil members with a triple point: {} (of which at infinity: {})\n  degree of Z: {}\n  difference: {}\n",
            exp.to_text(),
            exp.count,
            exp.at_infinity,
            exp.predicted,
            exp.count as i64 - exp.predicted
        ),
    };
    Ok(if exp.matches { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

/// One named check per line; genera run on separate threads.
fn selfcheck(max_genus: i64) -> CmdResult {
    if max_genus < 2 {
        return Err(Failure::Usage("--max-genus must be at least 2".into()));
    }
    let todd = todd_series(4);
    let mut lines = vec![("todd series has vanishing degree-3 term".to_string(), todd[3] == rint(0))];
    let per_genus: Vec<Vec<(String, bool)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (2..=max_genus).map(|g| s.spawn(move || genus_checks(g))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    lines.extend(per_genus.into_iter().flatten());
    let ok = lines.iter().all(|(_, b)| *b);
    let mut body: String = lines.iter().map(|(n, b)| format!("{} {n}\n", if *b { "ok  " } else { "FAIL" })).collect();
    body.push_str(if ok { "all checks passed\n" } else { "some checks FAILED\n" });
    Ok(if ok { Outcome::Ok(body) } else { Outcome::Failed(body) })
}

fn genus_checks(g: i64) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let mut check = |name: &str, r: Result<bool, Error>| out.push((format!("g={g} {name}"), r.unwrap_or(false)));

    check("main relation certificate verifies", main_certificate(g).and_then(|c| c.verify()).map(|_| true));
    check(
        "psi^2 lies in the strata ideal",
        eliminate_relations(g).map(|d| d.psi_squared_in_ideal && !d.sigma12_alone_forces_psi_squared),
    );
    check(
        "Z coefficient is g/2 and back-substitution vanishes",
        solve_z(g).and_then(|z| Ok(z.coefficient == rat(g, 2) && z.back_substituted()?.is_zero())),
    );
    check(
        "jet divisor ranks are 3",
        JetContext::new(g).and_then(|ctx| {
            let cls = |s| ctx.subbundle_divisor_class(s).map(PwClass::Class);
            Ok(independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaN)?, cls(Subbundle::XiTr)?])? == 3
                && independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaRed)?, cls(Subbundle::DeltaRam)?])? == 3)
        }),
    );
    check(
        "Maroni classes are single monomials",
        admissible_maroni(g)
            .into_iter()
            .filter(|&n| n >= 2)
            .try_fold(true, |acc, n| Ok(acc && maroni_stratum_class(g, n.into())?.monomial_coefficient().is_some())),
    );
    check(
        "random curve has 2g+4 ramification and passes the audit",
        random_smooth_curve::<Fp<1_000_003>>(g, 0).and_then(|s| {
            let r = branch_report(&s.curve)?;
            Ok(r.total_ramification() == branch_number(3, g) && forbidden_strata_audit(&s.curve)?.pass)
        }),
    );
    check(
        "pencil count equals deg Z over F_p",
        pencil_triple_count::<Fp<1_000_003>>(g, 1)
            .and_then(|e| Ok(e.matches && rint(e.count as i64) == z_degree(g)?)),
    );
    out
}
