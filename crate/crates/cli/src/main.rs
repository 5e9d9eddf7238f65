//! Command-line front end: builds groups and Levi data, localizes classes,
//! multiplies Schubert classes, pulls them back along pattern-map sections
//! (cross-validating the presentations), exports one-skeleta, and replays
//! the embedded worked examples against golden fixtures.
//!
//! Exit codes: 0 success, 2 invalid input, 3 cross-check or golden-data
//! mismatch.

mod golden;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use gkmcalc_core::borel::{
    expand_pullback_via_borel, expand_pullback_via_borel_k, GrothendieckPolyTable,
    SchubertPolyTable,
};
use gkmcalc_core::gkm::{
    billey_localize, check_gkm_coh, check_gkm_k, k_localize, structure_constants_coh,
    structure_constants_k, Expansion, GkmClass,
};
use gkmcalc_core::pattern::{skeleton, LeviDatum};
use gkmcalc_core::symbolic::Coeff;
use gkmcalc_core::weyl::{RootDatum, TypeLabel, WeylElem, WeylSystem};
use gkmcalc_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "gkmcalc",
    about = "Exact equivariant Schubert calculus on flag manifolds via GKM localization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theory {
    Coh,
    K,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Checked,
    Fast,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Restrict a Schubert class to all torus fixed points.
    Localize {
        /// Group name, e.g. A3 or C4
        group: String,
        /// Element in window notation, e.g. 2143 or "3,-1,4,2"
        element: String,
        #[arg(long, value_enum, default_value = "coh")]
        theory: Theory,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Expand a product of two Schubert classes in the Schubert basis.
    Mult {
        group: String,
        u: String,
        v: String,
        #[arg(long, value_enum, default_value = "coh")]
        theory: Theory,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Pull a Schubert class back along a pattern-map section.
    Pattern {
        group: String,
        /// Cocharacter, e.g. 1,1,-1,-1
        #[arg(long)]
        eta: String,
        #[arg(long)]
        u: String,
        /// Minimal coset representative
        #[arg(long)]
        sigma: String,
        #[arg(long, value_enum, default_value = "coh")]
        theory: Theory,
        #[arg(long, value_enum, default_value = "checked")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Factor an element as (Levi part)·(minimal representative).
    Flatten {
        group: String,
        #[arg(long)]
        eta: String,
        element: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List the cosets of the Levi Weyl group with minimal representatives.
    Cosets {
        group: String,
        #[arg(long)]
        eta: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Export the equivariant one-skeleton (moment graph).
    Skeleton {
        group: String,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Recompute the embedded worked examples and compare against golden
    /// data; exits 3 on any mismatch.
    ReproducePaper {
        /// Alternate fixture file (defaults to the embedded data)
        #[arg(long)]
        fixtures: Option<std::path::PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn crosscheck(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        let code = match &e {
            CoreError::Parse(_)
            | CoreError::Invalid(_)
            | CoreError::UnsupportedGroup(_)
            | CoreError::RankMismatch { .. }
            | CoreError::DatumMismatch
            | CoreError::RepNotMinimal(..) => 2,
            CoreError::CrossCheckFailure(_) => 3,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn parse_eta(s: &str, n: usize) -> Result<Vec<i64>, CliError> {
    let eta: Vec<i64> = s
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| CliError::input(format!("bad cocharacter entry {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    if eta.len() != n {
        return Err(CliError::input(format!(
            "cocharacter has {} entries, expected {n}",
            eta.len()
        )));
    }
    Ok(eta)
}

fn sorted_terms<'a, C: Coeff>(
    system: &WeylSystem,
    expansion: &'a Expansion<C>,
) -> Vec<(&'a Vec<i32>, &'a gkmcalc_core::symbolic::SparsePoly<C>)>
where
    gkmcalc_core::symbolic::SparsePoly<C>: std::fmt::Display,
{
    let mut terms: Vec<_> = expansion.terms().collect();
    terms.sort_by_key(|(w, _)| {
        let elem = system
            .datum()
            .element((*w).clone())
            .expect("expansion key is a valid window");
        (system.length(&elem), (*w).clone())
    });
    terms
}

fn print_expansion<C: Coeff>(
    system: &WeylSystem,
    expansion: &Expansion<C>,
    format: Format,
) where
    gkmcalc_core::symbolic::SparsePoly<C>: std::fmt::Display,
{
    match format {
        Format::Text => {
            if expansion.is_empty() {
                println!("0");
            }
            for (w, c) in sorted_terms(system, expansion) {
                println!(
                    "{}: {}",
                    gkmcalc_core::weyl::window_name(w, system.datum().label()),
                    c
                );
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&expansion.to_json(system)).expect("serializable")
        ),
    }
}

fn print_class<C: Coeff>(class: &GkmClass<C>, format: Format)
where
    gkmcalc_core::symbolic::SparsePoly<C>: std::fmt::Display,
{
    match format {
        Format::Text => {
            let system = class.system();
            for w in system.elements() {
                println!("{}: {}", w.name(), class.value(w));
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&class.to_json()).expect("serializable")
        ),
    }
}

fn load_group(name: &str) -> Result<(RootDatum, Arc<WeylSystem>), CliError> {
    let datum = RootDatum::parse(name)?;
    let system = WeylSystem::full(&datum);
    Ok((datum, system))
}

fn parse_element(datum: &RootDatum, s: &str) -> Result<WeylElem, CliError> {
    Ok(datum.parse_element(s)?)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Localize {
            group,
            element,
            theory,
            format,
        } => {
            let (datum, system) = load_group(&group)?;
            let v = parse_element(&datum, &element)?;
            match theory {
                Theory::Coh => {
                    let class = billey_localize(&system, &v);
                    if check_gkm_coh(&class).is_err() {
                        return Err(CliError::crosscheck("localization violates GKM"));
                    }
                    print_class(&class, format);
                }
                Theory::K => {
                    let class = k_localize(&system, &v);
                    if check_gkm_k(&class).is_err() {
                        return Err(CliError::crosscheck("localization violates K-GKM"));
                    }
                    print_class(&class, format);
                }
            }
            Ok(())
        }
        Command::Mult {
            group,
            u,
            v,
            theory,
            format,
        } => {
            let (datum, system) = load_group(&group)?;
            let u = parse_element(&datum, &u)?;
            let v = parse_element(&datum, &v)?;
            match theory {
                Theory::Coh => {
                    let exp = structure_constants_coh(&system, &u, &v)?;
                    print_expansion(&system, &exp, format);
                }
                Theory::K => {
                    let exp = structure_constants_k(&system, &u, &v)?;
                    print_expansion(&system, &exp, format);
                }
            }
            Ok(())
        }
        Command::Pattern {
            group,
            eta,
            u,
            sigma,
            theory,
            mode,
            format,
        } => {
            let (datum, _system) = load_group(&group)?;
            let eta = parse_eta(&eta, datum.rank())?;
            let levi = LeviDatum::from_cocharacter(&datum, &eta)?;
            let u = parse_element(&datum, &u)?;
            let sigma = parse_element(&datum, &sigma)?;
            let checked = mode == Mode::Checked;
            match theory {
                Theory::Coh => {
                    let exp = levi.pullback_schubert_coh(&u, &sigma, checked)?;
                    if checked && datum.label() == TypeLabel::A {
                        let table = SchubertPolyTable::new(&datum)?;
                        let via_borel = expand_pullback_via_borel(&levi, table.class(&u), &sigma)?;
                        if via_borel != exp {
                            return Err(CoreError::CrossCheckFailure(
                                "Borel route disagrees with localization route".to_string(),
                            )
                            .into());
                        }
                    }
                    print_expansion(levi.subsystem(), &exp, format);
                }
                Theory::K => {
                    let exp = levi.pullback_schubert_k(&u, &sigma, checked)?;
                    if checked && datum.label() == TypeLabel::A {
                        let table = GrothendieckPolyTable::new(&datum)?;
                        let via_borel =
                            expand_pullback_via_borel_k(&levi, table.class(&u), &sigma)?;
                        if via_borel != exp {
                            return Err(CoreError::CrossCheckFailure(
                                "Borel route disagrees with localization route".to_string(),
                            )
                            .into());
                        }
                    }
                    print_expansion(levi.subsystem(), &exp, format);
                }
            }
            Ok(())
        }
        Command::Flatten {
            group,
            eta,
            element,
            format,
        } => {
            let (datum, _) = load_group(&group)?;
            let eta = parse_eta(&eta, datum.rank())?;
            let levi = LeviDatum::from_cocharacter(&datum, &eta)?;
            let x = parse_element(&datum, &element)?;
            let result = levi.flatten(&x);
            match format {
                Format::Text => {
                    println!("element: {}", x.name());
                    println!("levi type: {}", levi.sub_type());
                    println!("rep: {}", result.rep.name());
                    println!("levi part (ambient): {}", result.ambient_factor.name());
                    println!(
                        "levi part (factors): {}",
                        result
                            .factor_windows
                            .iter()
                            .map(|w| w.name())
                            .collect::<Vec<_>>()
                            .join("|")
                    );
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "element": x.name(),
                        "levi_type": levi.sub_type(),
                        "rep": result.rep.name(),
                        "levi_part_ambient": result.ambient_factor.name(),
                        "levi_part_factors": result
                            .factor_windows
                            .iter()
                            .map(|w| w.name())
                            .collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
            }
            Ok(())
        }
        Command::Cosets { group, eta, format } => {
            let (datum, _) = load_group(&group)?;
            let eta = parse_eta(&eta, datum.rank())?;
            let levi = LeviDatum::from_cocharacter(&datum, &eta)?;
            match format {
                Format::Text => {
                    println!(
                        "levi type: {} (|W'| = {}, {} cosets)",
                        levi.sub_type(),
                        levi.subsystem().order(),
                        levi.cosets().len()
                    );
                    for coset in levi.cosets() {
                        println!(
                            "{} (length {}, {} members)",
                            coset.rep.name(),
                            coset.rep.length(),
                            coset.members.len()
                        );
                    }
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "group": datum.name(),
                        "levi_type": levi.sub_type(),
                        "order": levi.subsystem().order(),
                        "cosets": levi.cosets().iter().map(|c| {
                            serde_json::json!({
                                "rep": c.rep.name(),
                                "length": c.rep.length(),
                                "members": c.members.iter().map(|m| m.name()).collect::<Vec<_>>(),
                            })
                        }).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
            }
            Ok(())
        }
        Command::Skeleton { group, eta, format } => {
            let (datum, _) = load_group(&group)?;
            let levi = match eta {
                Some(eta) => {
                    let eta = parse_eta(&eta, datum.rank())?;
                    Some(LeviDatum::from_cocharacter(&datum, &eta)?)
                }
                None => None,
            };
            let sk = skeleton(&datum, levi.as_ref());
            match format {
                GraphFormat::Dot => print!("{}", sk.to_dot()),
                GraphFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&sk.to_json()).expect("serializable")
                ),
            }
            Ok(())
        }
        Command::ReproducePaper { fixtures } => {
            let data = match &fixtures {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read fixtures: {e}")))?,
                None => golden::EMBEDDED_FIXTURES.to_string(),
            };
            let report = golden::run(&data).map_err(|e| CliError::input(e.to_string()))?;
            print!("{}", report.text);
            if report.failures == 0 {
                println!("all {} golden comparisons passed", report.passes);
                Ok(())
            } else {
                Err(CliError::crosscheck(format!(
                    "{} of {} golden comparisons failed",
                    report.failures,
                    report.passes + report.failures
                )))
            }
        }
    }
}
