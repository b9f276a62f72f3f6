use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ua_core::algebra::builtin;
use ua_core::congruence::congruence_generated;
use ua_core::hom::hom_enumerate;
use ua_core::maltsev::{
    build_core, check_certificate, maltsev_term, reg_maltsev, verify_witness, weakly_maltsev,
    BundleTheorem, CertificateJson, CoreObjects, DominionMode, SeparationCertificate, Verdict,
    VerdictJson, WitnessBundle,
};
use ua_core::relation::{enumerate_reflexive_relations, relation_properties};
use ua_core::variety::{coproduct, free_algebra};
use ua_core::{Error, FiniteAlgebra, VarietyPresentation};

// stdout write failures (e.g. a closed pipe) are not errors of the command
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "ua", version, about = "Finite universal algebra and Mal'tsev-type properties")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cd,
    Refute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Wm,
    Reg,
}

#[derive(clap::Args)]
struct AlgebraArg {
    /// Builtin name (lattice2, n5, m3, z2xor, set2) or path to an algebra JSON file.
    #[arg(long)]
    algebra: String,
}

#[derive(clap::Args)]
struct DecisionArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    #[arg(long, value_enum, default_value = "cd")]
    mode: Mode,
    /// Largest power searched in refute mode.
    #[arg(long, default_value_t = 2)]
    max_power: usize,
    /// Write the certificate of a negative answer to this file.
    #[arg(long)]
    certificate_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Size (and elements) of the free algebra on n generators.
    Free {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        gens: usize,
        /// Print a witness term for each element.
        #[arg(long)]
        list: bool,
    },
    /// Find a Mal'tsev term.
    Maltsev {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Decide whether the variety is a weakly Mal'tsev category.
    WeaklyMaltsev(DecisionArgs),
    /// Decide whether every reflexive regular relation is an equivalence.
    RegMaltsev(DecisionArgs),
    /// Verify a witness bundle equation by equation.
    VerifyWitness {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Path to a bundle JSON file, or the builtin `distributive-lattice`.
        #[arg(long)]
        witness: String,
        #[arg(long, value_enum, default_value = "wm")]
        theorem: Theorem,
    },
    /// Coproduct of two algebras in the variety generated by --algebra.
    Coproduct {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Congruence generated by pairs, e.g. --pairs "0 1; 2 3".
    Congruence {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        pairs: String,
    },
    /// Reflexive compatible relations with their properties.
    Relations {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Homomorphisms from --algebra to --target.
    Homs {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        target: String,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Re-check a separation certificate (or a verdict file containing one).
    CheckCertificate {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn load_algebra(spec: &str) -> Result<FiniteAlgebra, Error> {
    match builtin(spec) {
        Ok(a) => Ok(a),
        Err(Error::UnknownBuiltin(_)) if Path::new(spec).exists() => {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
            FiniteAlgebra::from_json_str(&text)
        }
        Err(e) => Err(e),
    }
}

fn variety(spec: &str) -> Result<VarietyPresentation, Error> {
    let mut v = VarietyPresentation::new(load_algebra(spec)?);
    if let Ok(cap) = std::env::var("UA_MAX_FREE_SIZE") {
        v.caps.max_free_size = cap
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("UA_MAX_FREE_SIZE must be a number, got `{cap}`")))?;
    }
    Ok(v)
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    text.split([';', ','])
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let nums: Vec<usize> = chunk
                .split_whitespace()
                .map(|n| n.parse().map_err(|_| Error::Invalid(format!("bad element `{n}`"))))
                .collect::<Result<_, _>>()?;
            match nums.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::Invalid(format!("expected a pair, got `{}`", chunk.trim()))),
            }
        })
        .collect()
}

fn print_json(value: &impl serde::Serialize) {
    say!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Free { algebra, gens, list } => {
            let v = variety(&algebra.algebra)?;
            let f = free_algebra(&v, *gens)?;
            if cli.json {
                print_json(&f.to_json());
            } else {
                say!("size {}", f.size());
                if *list {
                    for (i, w) in f.witnesses().iter().enumerate() {
                        say!("{i}: {}", w.render(v.generator().sig()));
                    }
                }
            }
            Ok(EXIT_YES)
        }
        Command::Maltsev { algebra } => {
            let v = variety(&algebra.algebra)?;
            let core = build_core(&v)?;
            let term = maltsev_term(&core)?;
            let rendered = term.as_ref().map(|t| t.render(v.generator().sig()));
            if cli.json {
                print_json(&json!({ "maltsev_term": rendered }));
            } else {
                say!("{}", rendered.as_deref().unwrap_or("none"));
            }
            Ok(if term.is_some() { EXIT_YES } else { EXIT_NO })
        }
        Command::WeaklyMaltsev(args) => decide(cli, args, weakly_maltsev),
        Command::RegMaltsev(args) => decide(cli, args, reg_maltsev),
        Command::VerifyWitness {
            algebra,
            witness,
            theorem,
        } => {
            let v = variety(&algebra.algebra)?;
            let sig = v.generator().sig();
            let bundle = match WitnessBundle::builtin(witness, sig) {
                Err(Error::UnknownBuiltin(_)) => {
                    let text = std::fs::read_to_string(witness)
                        .map_err(|e| Error::Invalid(format!("{witness}: {e}")))?;
                    WitnessBundle::from_json_str(&text, sig)?
                }
                other => other?,
            };
            let theorem = match theorem {
                Theorem::Wm => BundleTheorem::Wm,
                Theorem::Reg => BundleTheorem::Reg,
            };
            let report = verify_witness(&v, &bundle, theorem)?;
            if cli.json {
                print_json(&report);
            } else {
                say!("{}", report.render_text().trim_end());
            }
            Ok(if report.passed() { EXIT_YES } else { EXIT_NO })
        }
        Command::Coproduct { algebra, left, right } => {
            let v = variety(&algebra.algebra)?;
            let b = Arc::new(load_algebra(left)?);
            let c = Arc::new(load_algebra(right)?);
            let cp = coproduct(&v, &b, &c)?;
            if cli.json {
                print_json(&json!({
                    "size": cp.algebra.size(),
                    "iota1": cp.iota1.map(),
                    "iota2": cp.iota2.map(),
                    "algebra": cp.algebra.to_json(),
                }));
            } else {
                say!("size {}", cp.algebra.size());
                say!("iota1 {:?}", cp.iota1.map());
                say!("iota2 {:?}", cp.iota2.map());
            }
            Ok(EXIT_YES)
        }
        Command::Congruence { algebra, pairs } => {
            let a = load_algebra(&algebra.algebra)?;
            let theta = congruence_generated(&a, &parse_pairs(pairs)?)?;
            if cli.json {
                print_json(&json!({ "blocks": theta.blocks(), "block_count": theta.block_count() }));
            } else {
                say!("{} block(s)", theta.block_count());
                for class in theta.classes() {
                    say!("{class:?}");
                }
            }
            Ok(EXIT_YES)
        }
        Command::Relations { algebra } => {
            let a = Arc::new(load_algebra(&algebra.algebra)?);
            let rels = enumerate_reflexive_relations(&a, VarietyPresentation::new((*a).clone()).caps.max_enumeration)?;
            let mut rows = Vec::new();
            for r in &rels {
                let flags = relation_properties(r)?;
                let pairs: Vec<(usize, usize)> = r.pairs().iter().copied().collect();
                rows.push(json!({ "pairs": pairs, "flags": flags }));
                if !cli.json {
                    say!(
                        "{pairs:?} reflexive={} symmetric={} transitive={} difunctional={} equivalence={}",
                        flags.reflexive, flags.symmetric, flags.transitive, flags.difunctional, flags.equivalence
                    );
                }
            }
            if cli.json {
                print_json(&rows);
            } else {
                say!("{} relation(s)", rels.len());
            }
            Ok(EXIT_YES)
        }
        Command::Homs { algebra, target, limit } => {
            let a = Arc::new(load_algebra(&algebra.algebra)?);
            let b = Arc::new(load_algebra(target)?);
            let homs = hom_enumerate(&a, &b, *limit)?;
            let maps: Vec<&[usize]> = homs.homs.iter().map(|h| h.map()).collect();
            if cli.json {
                print_json(&json!({ "homs": maps, "exhausted": homs.exhausted }));
            } else {
                for m in &maps {
                    say!("{m:?}");
                }
                say!("{} homomorphism(s){}", maps.len(), if homs.exhausted { "" } else { " (truncated)" });
            }
            Ok(EXIT_YES)
        }
        Command::CheckCertificate { algebra, certificate } => {
            let v = variety(&algebra.algebra)?;
            let core = build_core(&v)?;
            let text = std::fs::read_to_string(certificate)
                .map_err(|e| Error::Invalid(format!("{}: {e}", certificate.display())))?;
            let cert = match serde_json::from_str::<VerdictJson>(&text) {
                Ok(VerdictJson::No { certificate }) => SeparationCertificate::from_json(&certificate)?,
                Ok(_) => return Err(Error::Invalid("verdict carries no certificate".into())),
                Err(_) => SeparationCertificate::from_json(&serde_json::from_str::<CertificateJson>(&text)?)?,
            };
            let check = check_certificate(&cert, &core);
            if cli.json {
                print_json(&check);
            } else if check.valid {
                say!("certificate valid");
            } else {
                say!("certificate invalid: {}", check.violation.as_deref().unwrap_or("unknown"));
            }
            Ok(if check.valid { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn decide(
    cli: &Cli,
    args: &DecisionArgs,
    query: fn(&CoreObjects, DominionMode) -> ua_core::Result<Verdict>,
) -> Result<u8, Error> {
    let mut v = variety(&args.algebra.algebra)?;
    if args.max_power == 0 {
        return Err(Error::Invalid("--max-power must be positive".into()));
    }
    v.caps.max_power = args.max_power;
    let mode = match args.mode {
        Mode::Cd => DominionMode::CdComplete,
        Mode::Refute => DominionMode::Refute {
            max_power: args.max_power,
        },
    };
    let core = build_core(&v)?;
    let verdict = query(&core, mode)?;
    if let (Some(path), Some(cert)) = (&args.certificate_out, verdict.certificate()) {
        let text = serde_json::to_string_pretty(&cert.to_json()).expect("serializable certificate");
        std::fs::write(path, text + "\n").map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    }
    if cli.json {
        print_json(&verdict.to_json());
    } else {
        match &verdict {
            Verdict::Yes(j) => say!("yes ({})", serde_json::to_string(j).expect("serializable")),
            Verdict::No(c) => {
                say!("no");
                say!("separating algebra of size {} from power {}", c.algebra.size(), c.provenance.power);
                say!("u = {:?}", c.u);
                say!("v = {:?}", c.v);
                say!("target {} = {}", c.target, core.render_element(core.yx));
            }
            Verdict::Unknown { bound } => say!("unknown (no separation up to power {bound})"),
        }
    }
    Ok(match verdict {
        Verdict::Yes(_) => EXIT_YES,
        Verdict::No(_) => EXIT_NO,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap() { EXIT_CAP } else { EXIT_INPUT })
        }
    }
}
