use clap::{Args, Parser, Subcommand};
use knotpoly::alexander::{alexander_polynomial, check_symmetry};
use knotpoly::field::CoeffField;
use knotpoly::laurent::LaurentPoly;
use knotpoly::presentation::{parse_presentation, parse_word, Presentation};
use knotpoly::report::{poly_json, ratexpr_json, RunReport};
use knotpoly::representation::{
    derham_extension_search, enum_sl2_reps, regular_rep, EnumOptions, FiniteQuotient,
    Representation,
};
use knotpoly::torsion::{
    alpha_images, is_acyclic, milnor_check, presentation_complex, rho_alpha_bar_images, torsion,
    torsion_with_orders, twisted_torsion_check, TorsionTwistedOutcome,
};
use knotpoly::twisted::{
    check_monic, cross_column_check, degree_and_genus, divisibility_check, twisted_alexander,
    TwistedResult,
};
use knotpoly::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "knotpoly",
    version,
    about = "Exact Alexander and twisted Alexander polynomials, Reidemeister torsion, and the decision criteria built on them"
)]
struct Cli {
    /// Emit a deterministic JSON report instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized self-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run redundant cross-checks (all-column identities, pivot shuffles).
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial of a presentation.
    Alexander(FileArg),
    /// Twisted Alexander polynomial for a representation.
    Twisted {
        file: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Exhaustively enumerate SL(2, F_p) representations.
    EnumReps {
        file: PathBuf,
        #[arg(long = "p")]
        prime: u32,
        #[arg(long)]
        irreducible: bool,
        /// Restrict to the two-generator conjugacy normal form.
        #[arg(long)]
        conjugacy: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Lift the p <= 13 search guard.
        #[arg(long)]
        allow_large_prime: bool,
        /// Keep only representations whose first image has this trace.
        #[arg(long)]
        trace: Option<i64>,
    },
    /// Reidemeister torsion of the presentation complex.
    Torsion {
        file: PathBuf,
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Decision criteria; exit code 1 means the check failed.
    #[command(subcommand)]
    Check(CheckKind),
}

#[derive(Args)]
struct FileArg {
    file: PathBuf,
}

#[derive(Subcommand)]
enum CheckKind {
    /// Monicness and degree/genus consistency of twisted invariants.
    Fibered {
        file: PathBuf,
        #[arg(long = "p")]
        prime: Option<u32>,
        /// Finite quotient JSON; uses its regular representation over Q.
        #[arg(long)]
        quotient: Option<PathBuf>,
    },
    /// Twisted divisibility along a certified homomorphism.
    Divides {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long = "map")]
        map_file: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Abelian deformation witnesses against Alexander roots over F_p.
    Derham {
        file: PathBuf,
        #[arg(long = "p")]
        prime: u32,
        /// Check a single parameter instead of sweeping all of F_p^* \ {1}.
        #[arg(long)]
        a: Option<i64>,
    },
    /// Symmetry of the Alexander polynomial under t -> 1/t.
    Symmetry(FileArg),
    /// Torsion identities: Milnor (no rep) or the twisted match (with rep).
    Torsion {
        file: PathBuf,
        #[arg(long)]
        rep: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = RunReport::new(command_echo());
    match run(&cli, &mut report) {
        Ok(code) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).unwrap()
                );
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn emit(json_mode: bool, line: impl AsRef<str>) {
    if !json_mode {
        println!("{}", line.as_ref());
    }
}

fn load_file(path: &Path, report: &mut RunReport) -> Result<String> {
    let bytes = std::fs::read(path)?;
    report.record_input(path, &bytes);
    String::from_utf8(bytes)
        .map_err(|_| Error::Semantic(format!("{} is not UTF-8", path.display())))
}

fn load_presentation(path: &Path, report: &mut RunReport) -> Result<Presentation> {
    parse_presentation(&load_file(path, report)?)
}

fn load_rep(path: &Path, p: &Presentation, report: &mut RunReport) -> Result<Representation> {
    let text = load_file(path, report)?;
    let value: Value = serde_json::from_str(&text)?;
    Representation::from_json(&value, p)
}

fn load_quotient(path: &Path, p: &Presentation, report: &mut RunReport) -> Result<FiniteQuotient> {
    let text = load_file(path, report)?;
    let value: Value = serde_json::from_str(&text)?;
    FiniteQuotient::from_json(&value, p)
}

fn run(cli: &Cli, report: &mut RunReport) -> Result<u8> {
    match &cli.command {
        Command::Alexander(args) => cmd_alexander(cli, &args.file, report),
        Command::Twisted { file, rep } => cmd_twisted(cli, file, rep, report),
        Command::EnumReps {
            file,
            prime,
            irreducible,
            conjugacy,
            limit,
            allow_large_prime,
            trace,
        } => cmd_enum_reps(
            cli,
            file,
            *prime,
            EnumOptions {
                irreducible_only: *irreducible,
                up_to_conjugacy: *conjugacy,
                allow_large_prime: *allow_large_prime,
                limit: *limit,
                trace_filter: *trace,
            },
            report,
        ),
        Command::Torsion { file, rep } => cmd_torsion(cli, file, rep.as_deref(), report),
        Command::Check(kind) => match kind {
            CheckKind::Fibered {
                file,
                prime,
                quotient,
            } => cmd_check_fibered(cli, file, *prime, quotient.as_deref(), report),
            CheckKind::Divides {
                from,
                to,
                map_file,
                rep,
            } => cmd_check_divides(cli, from, to, map_file, rep, report),
            CheckKind::Derham { file, prime, a } => cmd_check_derham(cli, file, *prime, *a, report),
            CheckKind::Symmetry(args) => cmd_check_symmetry(cli, &args.file, report),
            CheckKind::Torsion { file, rep } => cmd_torsion(cli, file, rep.as_deref(), report),
        },
    }
}

fn cmd_alexander(cli: &Cli, file: &Path, report: &mut RunReport) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let delta = alexander_polynomial(&p)?;
    let symmetric = check_symmetry(&delta);
    report.normalization = "integer-primitive".into();
    report.result = json!({
        "knot": p.name,
        "polynomial": poly_json(&delta),
        "symmetric": symmetric,
    });
    emit(
        cli.json,
        format!("alexander polynomial of {}: {delta}", p.name),
    );
    emit(cli.json, format!("symmetric under t -> 1/t: {symmetric}"));
    Ok(0)
}

fn twisted_result_json(res: &TwistedResult) -> Value {
    let monic = check_monic(res);
    let dg = degree_and_genus(res);
    json!({
        "numerator": poly_json(&res.numerator),
        "denominator": poly_json(&res.denominator),
        "removed_column": res.removed_column,
        "reduced": ratexpr_json(&res.reduced),
        "polynomial": res.polynomial.as_ref().map(poly_json),
        "monic": monic.monic,
        "monic_strict_units": monic.strict,
        "degree": dg.degree,
        "genus_estimate": dg.genus.map(|g| g.to_string()),
        "degenerate": dg.degenerate,
    })
}

fn cmd_twisted(cli: &Cli, file: &Path, rep_path: &Path, report: &mut RunReport) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let rep = load_rep(rep_path, &p, report)?;
    let res = twisted_alexander(&p, &rep)?;
    report.normalization = "raw pair; reduced form canonical up to c*t^s".into();
    let mut payload = twisted_result_json(&res);
    if cli.verify {
        let ok = cross_column_check(&p, &rep)?;
        payload["cross_column_identity"] = json!(ok);
        emit(
            cli.json,
            format!(
                "cross-column identity: {}",
                if ok { "ok" } else { "FAILED" }
            ),
        );
        if !ok {
            return Err(Error::Internal("cross-column identity failed".into()));
        }
    }
    report.result = payload;
    emit(cli.json, format!("numerator:   {}", res.numerator));
    emit(cli.json, format!("denominator: {}", res.denominator));
    emit(cli.json, format!("removed column: {}", res.removed_column));
    match &res.polynomial {
        Some(poly) => emit(cli.json, format!("twisted polynomial: {poly}")),
        None => emit(
            cli.json,
            format!("reduced (not polynomial): {}", res.reduced),
        ),
    }
    let monic = check_monic(&res);
    emit(
        cli.json,
        format!(
            "monic: {}{}",
            monic.monic,
            if monic.strict {
                ""
            } else {
                " (leading-coefficient ratio over F_p)"
            }
        ),
    );
    let dg = degree_and_genus(&res);
    emit(cli.json, format!("degree: {}", dg.degree));
    if let Some(g) = dg.genus {
        emit(cli.json, format!("fibered genus estimate: {g}"));
    }
    Ok(0)
}

fn cmd_enum_reps(
    cli: &Cli,
    file: &Path,
    prime: u32,
    options: EnumOptions,
    report: &mut RunReport,
) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let reps = enum_sl2_reps(&p, prime, options)?;
    report.result = json!({
        "count": reps.len(),
        "prime": prime,
        "representations": reps.iter().map(|r| r.to_json(&p)).collect::<Vec<_>>(),
    });
    emit(
        cli.json,
        format!("{} representation(s) into SL(2, F_{prime})", reps.len()),
    );
    for r in &reps {
        emit(cli.json, serde_json::to_string(&r.to_json(&p))?);
    }
    Ok(0)
}

fn cmd_torsion(
    cli: &Cli,
    file: &Path,
    rep_path: Option<&Path>,
    report: &mut RunReport,
) -> Result<u8> {
    let p = load_presentation(file, report)?;
    report.normalization = "rational expression, defined up to +-t^s".into();
    match rep_path {
        None => {
            let complex = presentation_complex(&p, &alpha_images(&p))?;
            if !is_acyclic(&complex) {
                return Err(Error::Semantic("alpha complex is not acyclic".into()));
            }
            let tau = torsion(&complex)?;
            let milnor = milnor_check(&p)?;
            if cli.verify {
                verify_pivot_invariance(cli.seed, &complex)?;
                emit(cli.json, "pivot-order invariance: ok");
            }
            report.result = json!({
                "knot": p.name,
                "coefficients": "alpha",
                "torsion": ratexpr_json(&tau),
                "milnor_identity": milnor,
            });
            emit(cli.json, format!("torsion (alpha coefficients): {tau}"));
            emit(
                cli.json,
                format!(
                    "Milnor comparison with Delta/(t-1): {}",
                    if milnor { "agrees" } else { "DISAGREES" }
                ),
            );
            if !milnor {
                report.status = "check-failed".into();
            }
            Ok(if milnor { 0 } else { 1 })
        }
        Some(rp) => {
            let rep = load_rep(rp, &p, report)?;
            let complex = presentation_complex(&p, &rho_alpha_bar_images(&p, &rep))?;
            if !is_acyclic(&complex) {
                report.result = json!({
                    "knot": p.name,
                    "coefficients": "rho (x) alpha-bar",
                    "acyclic": false,
                });
                report.status = "skipped".into();
                emit(
                    cli.json,
                    "twisted complex is not acyclic; torsion undefined",
                );
                return Ok(0);
            }
            let tau = torsion(&complex)?;
            if cli.verify {
                verify_pivot_invariance(cli.seed, &complex)?;
                emit(cli.json, "pivot-order invariance: ok");
            }
            let outcome = twisted_torsion_check(&p, &rep)?;
            report.result = json!({
                "knot": p.name,
                "coefficients": "rho (x) alpha-bar",
                "acyclic": true,
                "torsion": ratexpr_json(&tau),
                "matches_twisted_alexander": outcome == TorsionTwistedOutcome::Agrees,
            });
            emit(cli.json, format!("torsion (rho (x) alpha-bar): {tau}"));
            emit(
                cli.json,
                format!(
                    "matches twisted invariant under t -> 1/t: {}",
                    if outcome == TorsionTwistedOutcome::Agrees {
                        "agrees"
                    } else {
                        "DISAGREES"
                    }
                ),
            );
            if outcome != TorsionTwistedOutcome::Agrees {
                report.status = "check-failed".into();
            }
            Ok(if outcome == TorsionTwistedOutcome::Agrees {
                0
            } else {
                1
            })
        }
    }
}

fn verify_pivot_invariance(seed: u64, complex: &knotpoly::torsion::ChainComplex) -> Result<()> {
    let base = torsion(complex)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let orders: Vec<Vec<usize>> = complex
            .dims
            .iter()
            .map(|&d| {
                let mut v: Vec<usize> = (0..d).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        if torsion_with_orders(complex, Some(&orders))? != base {
            return Err(Error::Internal("torsion depends on pivot order".into()));
        }
    }
    Ok(())
}

fn cmd_check_fibered(
    cli: &Cli,
    file: &Path,
    prime: Option<u32>,
    quotient: Option<&Path>,
    report: &mut RunReport,
) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let mut families = Vec::new();
    let mut all_monic = true;
    let mut degrees_agree = true;

    if let Some(prime) = prime {
        let reps = enum_sl2_reps(
            &p,
            prime,
            EnumOptions {
                irreducible_only: true,
                ..Default::default()
            },
        )?;
        if reps.is_empty() {
            emit(
                cli.json,
                format!("no irreducible SL(2, F_{prime}) representations found"),
            );
        }
        let mut degrees = Vec::new();
        for rep in &reps {
            let res = twisted_alexander(&p, rep)?;
            let monic = check_monic(&res);
            let dg = degree_and_genus(&res);
            all_monic &= monic.monic;
            degrees.push(dg.degree);
        }
        degrees.dedup();
        degrees_agree &= degrees.len() <= 1;
        let degree = degrees.first().copied();
        let genus = degree.map(|d| format!("{}", num_rational::Rational64::new(d + 2, 4)));
        families.push(json!({
            "family": format!("irreducible SL(2, F_{prime})"),
            "count": reps.len(),
            "monic": all_monic,
            "degree": degree,
            "genus_estimate": genus,
        }));
        if let Some(d) = degree {
            emit(
                cli.json,
                format!(
                    "SL(2, F_{prime}) irreducibles: {} reps, monic={all_monic}, degree={d}, genus estimate={}",
                    reps.len(),
                    num_rational::Rational64::new(d + 2, 4)
                ),
            );
        }
    }

    if let Some(qpath) = quotient {
        let q = load_quotient(qpath, &p, report)?;
        let rep = regular_rep(&q)?;
        let res = twisted_alexander(&p, &rep)?;
        let monic = check_monic(&res);
        let dg = degree_and_genus(&res);
        all_monic &= monic.monic;
        families.push(json!({
            "family": format!("regular representation of quotient (order {})", q.order),
            "monic": monic.monic,
            "monic_strict_units": monic.strict,
            "degree": dg.degree,
            "genus_estimate": dg.genus.map(|g| g.to_string()),
        }));
        emit(
            cli.json,
            format!(
                "regular rep (dim {}): monic={} (strict units), degree={}, genus estimate={}",
                q.order,
                monic.monic,
                dg.degree,
                dg.genus.map_or("-".into(), |g| g.to_string())
            ),
        );
    }

    if families.is_empty() {
        return Err(Error::Semantic(
            "check fibered needs --p and/or --quotient".into(),
        ));
    }
    let consistent = all_monic && degrees_agree;
    report.result = json!({
        "knot": p.name,
        "families": families,
        "fibered_consistent": consistent,
    });
    if !consistent {
        report.status = "check-failed".into();
    }
    emit(
        cli.json,
        format!(
            "fiberedness necessary conditions: {}",
            if consistent { "pass" } else { "FAIL" }
        ),
    );
    Ok(if consistent { 0 } else { 1 })
}

fn cmd_check_divides(
    cli: &Cli,
    from: &Path,
    to: &Path,
    map_file: &Path,
    rep_path: &Path,
    report: &mut RunReport,
) -> Result<u8> {
    let p1 = load_presentation(from, report)?;
    let p2 = load_presentation(to, report)?;
    let map_text = load_file(map_file, report)?;
    let map_json: Value = serde_json::from_str(&map_text)?;
    let map_obj = map_json
        .as_object()
        .ok_or_else(|| Error::Semantic("map file must be a JSON object".into()))?;
    let mut phi = Vec::with_capacity(p1.num_generators());
    for g in p1.generators() {
        let word_text = map_obj
            .get(g)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Semantic(format!("map is missing generator `{g}`")))?;
        phi.push(parse_word(word_text, &p2)?);
    }
    let rep = load_rep(rep_path, &p2, report)?;
    let outcome = divisibility_check(&p1, &p2, &phi, &rep)?;
    report.result = json!({
        "from": p1.name,
        "to": p2.name,
        "divisible": outcome.divisible,
        "surjectivity_evidence": outcome.surjectivity_evidence,
    });
    emit(cli.json, "relator certificate: ok");
    emit(
        cli.json,
        format!("twisted divisibility: {}", outcome.divisible),
    );
    if let Some(s) = outcome.surjectivity_evidence {
        emit(
            cli.json,
            format!("surjectivity evidence (image groups match): {s}"),
        );
    }
    if !outcome.divisible {
        report.status = "check-failed".into();
    }
    Ok(if outcome.divisible { 0 } else { 1 })
}

fn cmd_check_derham(
    cli: &Cli,
    file: &Path,
    prime: u32,
    a: Option<i64>,
    report: &mut RunReport,
) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let field = CoeffField::prime(prime)?;
    let delta: LaurentPoly = alexander_polynomial(&p)?.map_field(field)?;
    let values: Vec<i64> = match a {
        Some(a) => vec![a],
        None => (2..prime as i64).collect(),
    };
    let mut rows = Vec::new();
    let mut consistent = true;
    for a in values {
        let scalar = field.from_i64(a);
        if scalar.is_zero() || scalar.is_one() {
            return Err(Error::Semantic(format!(
                "parameter a={a} is excluded (0 or 1 mod {prime})"
            )));
        }
        let search = derham_extension_search(&p, &scalar)?;
        let root = delta.eval(&scalar).is_zero();
        let agrees = search.extends() == root;
        consistent &= agrees;
        rows.push(json!({
            "a": a,
            "witness": search.extends(),
            "alexander_vanishes": root,
            "consistent": agrees,
        }));
        emit(
            cli.json,
            format!(
                "a={a}: witness={}, Delta(a)=0: {} -> {}",
                search.extends(),
                root,
                if agrees { "consistent" } else { "INCONSISTENT" }
            ),
        );
    }
    report.result = json!({
        "knot": p.name,
        "prime": prime,
        "rows": rows,
        "consistent": consistent,
    });
    if !consistent {
        report.status = "check-failed".into();
    }
    Ok(if consistent { 0 } else { 1 })
}

fn cmd_check_symmetry(cli: &Cli, file: &Path, report: &mut RunReport) -> Result<u8> {
    let p = load_presentation(file, report)?;
    let delta = alexander_polynomial(&p)?;
    let sym = check_symmetry(&delta);
    report.result = json!({
        "knot": p.name,
        "polynomial": poly_json(&delta),
        "symmetric": sym,
    });
    if !sym {
        report.status = "check-failed".into();
    }
    emit(cli.json, format!("Delta = {delta}"));
    emit(cli.json, format!("symmetric under t -> 1/t: {sym}"));
    Ok(if sym { 0 } else { 1 })
}
