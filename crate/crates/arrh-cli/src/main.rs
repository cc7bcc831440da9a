//! Command-line front end: parses arrangements from files or named
//! families and runs the lattice, formality, complex, homology, freeness,
//! TF2, exponents, Saito, Yoshinaga, X_(r,t), rank-3 syzygy, and sampling
//! commands, with text or JSON reports.
//!
//! Exit codes: 0 for a concluded verdict (including NotFree), 2 for
//! Undetermined, 1 for input errors.

mod defpoly;
mod input;

use arrh::analyzer::{self, Options, Status};
use arrh::arrangement::{characteristic_polynomial, integer_roots_if_split, MultiArrangement};
use arrh::complexes::{formality_profile, is_totally_formal, ComplexBundle};
use arrh::families::MultSpec;
use arrh::field::Field;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Parser)]
#[command(name = "arrh", version, about = "exact freeness analysis for hyperplane multi-arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Cap on worker threads (computations here are single-threaded; the
    /// flag is accepted for interface stability).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Arrangement file in the text format.
    #[arg(long)]
    file: Option<String>,
    /// Named family (boolean, x3, ex11, ex12, braid, cycle4chord, xrt, ziegler).
    #[arg(long)]
    family: Option<String>,
    /// Field for family construction: Q or GF(p).
    #[arg(long, default_value = "Q")]
    field: String,
    /// Family parameter, key=value; repeatable. Rational values use p/q.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Family multiplicity pattern parameter n, as `n=K`.
    #[arg(long = "mult")]
    mult: Option<String>,
    /// Explicit multiplicity list, comma separated.
    #[arg(long = "mults")]
    mults: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection lattice, Möbius numbers, characteristic polynomial.
    Lattice(InputArgs),
    /// Scalar-complex cohomology and k-formality flags.
    Formality(InputArgs),
    /// The scalar complex and the graded generator complex, explicitly.
    Complex(InputArgs),
    /// Degree-truncated cohomology table of the generator complex.
    Homology {
        #[command(flatten)]
        input: InputArgs,
        /// Truncation degree (default |m| + rank).
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Full freeness decision with certificate.
    Freeness {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        dmax: Option<u32>,
        /// Disable the TF2 classifier fast path.
        #[arg(long)]
        no_tf2_fast_path: bool,
    },
    /// TF2 detection, count identities, incidence graphs, classification.
    Tf2(InputArgs),
    /// Exponents of a rank-two multi-arrangement.
    Exponents {
        #[command(flatten)]
        input: InputArgs,
        /// Defining polynomial, e.g. "x^3 y^3 (x-y)^3".
        #[arg(long)]
        rank2: Option<String>,
    },
    /// Search for a Saito basis and verify the determinant identity.
    Saito(InputArgs),
    /// Yoshinaga criterion at a hyperplane (characteristic zero).
    Yoshinaga {
        #[command(flatten)]
        input: InputArgs,
        /// Hyperplane index (0-based).
        #[arg(long, default_value_t = 0)]
        hyperplane: usize,
    },
    /// The A_(r,t) family verification bundle.
    Xrt {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
    },
    /// The pruned rank-3 syzygetic complex with per-degree exactness.
    Terao3 {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
    },
    /// Seeded sampling of a parameterized family (env ARRH_SEED).
    Sample {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    report: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

#[derive(Serialize)]
struct Timings {
    total_ms: u128,
}

fn parse_field(s: &str) -> Result<Field, String> {
    let f = if s == "Q" {
        Field::Q
    } else if let Some(p) = s.strip_prefix("GF(").and_then(|x| x.strip_suffix(')')) {
        Field::Fp(p.trim().parse().map_err(|_| format!("bad prime `{p}`"))?)
    } else {
        return Err(format!("unknown field `{s}`"));
    };
    f.validate().map_err(|e| e.to_string())?;
    Ok(f)
}

fn input_spec(args: &InputArgs) -> Result<input::InputSpec, String> {
    let field = parse_field(&args.field)?;
    let mut params = BTreeMap::new();
    for p in &args.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| format!("parameter `{p}` is not key=value"))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mults = if let Some(list) = &args.mults {
        let parsed: Result<Vec<u32>, _> = list.split(',').map(|t| t.trim().parse()).collect();
        MultSpec::List(parsed.map_err(|_| format!("bad multiplicity list `{list}`"))?)
    } else if let Some(m) = &args.mult {
        let v = m.strip_prefix("n=").unwrap_or(m);
        MultSpec::N(v.trim().parse().map_err(|_| format!("bad multiplicity `{m}`"))?)
    } else {
        MultSpec::Default
    };
    Ok(input::InputSpec {
        file: args.file.clone(),
        family: args.family.clone(),
        field,
        params,
        mults,
    })
}

fn load(args: &InputArgs) -> Result<MultiArrangement, String> {
    let spec = input_spec(args)?;
    if spec.file.is_none() && spec.family.is_none() {
        return Err("provide --file or --family".to_string());
    }
    input::resolve_input(&spec).map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let code = match run(&cli, started) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}

fn emit<T: Serialize>(
    cli: &Cli,
    command: &'static str,
    report: T,
    text: String,
    started: std::time::Instant,
) {
    if cli.json {
        let envelope = Envelope {
            schema_version: 1,
            command,
            report,
            timings: cli.timings.then(|| Timings {
                total_ms: started.elapsed().as_millis(),
            }),
        };
        println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
    } else {
        print!("{text}");
        if cli.timings {
            println!("time: {} ms", started.elapsed().as_millis());
        }
    }
}

#[derive(Serialize)]
struct LatticeReport {
    field: String,
    num_vars: usize,
    rank: usize,
    essential: bool,
    flats: Vec<FlatReport>,
    triple_flats: Vec<Vec<usize>>,
    canonical_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    characteristic_polynomial: Option<CharPolyReport>,
}

#[derive(Serialize)]
struct FlatReport {
    indices: Vec<usize>,
    rank: usize,
    mobius: i64,
}

#[derive(Serialize)]
struct CharPolyReport {
    coefficients: Vec<i64>,
    splits_over_z: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<i64>>,
}

fn run(cli: &Cli, started: std::time::Instant) -> Result<i32, String> {
    match &cli.command {
        Command::Lattice(args) => {
            let arr = load(args)?;
            let bundle = ComplexBundle::build(&arr);
            let lat = &bundle.lattice;
            let charpoly = characteristic_polynomial(&arr, lat).ok().map(|coeffs| {
                let roots = integer_roots_if_split(&coeffs);
                CharPolyReport {
                    coefficients: coeffs,
                    splits_over_z: roots.is_some(),
                    roots,
                }
            });
            let report = LatticeReport {
                field: arr.field.to_string(),
                num_vars: arr.num_vars,
                rank: lat.rank,
                essential: arr.is_essential(),
                flats: lat
                    .flats
                    .iter()
                    .enumerate()
                    .map(|(i, f)| FlatReport {
                        indices: f.indices(),
                        rank: f.rank,
                        mobius: lat.mobius[i],
                    })
                    .collect(),
                triple_flats: lat
                    .triple_flats()
                    .iter()
                    .map(|&fi| lat.flats[fi].indices())
                    .collect(),
                characteristic_polynomial: charpoly,
                canonical_form: input::serialize_arrangement(&arr),
            };
            let mut text = format!(
                "rank {} arrangement of {} hyperplanes over {}\n",
                report.rank,
                arr.size(),
                report.field
            );
            for k in 0..=lat.rank {
                text.push_str(&format!(
                    "  rank {k}: {} flats\n",
                    lat.flats_of_rank(k).len()
                ));
            }
            if let Some(cp) = &report.characteristic_polynomial {
                text.push_str(&format!(
                    "  characteristic polynomial coefficients {:?} (splits over Z: {})\n",
                    cp.coefficients, cp.splits_over_z
                ));
            }
            emit(cli, "lattice", report, text, started);
            Ok(0)
        }
        Command::Formality(args) => {
            let arr = load(args)?;
            let bundle = ComplexBundle::build(&arr);
            let prof = formality_profile(&arr, &bundle.scalar);
            let (totally, witness) = is_totally_formal(&arr, &bundle.lattice);
            #[derive(Serialize)]
            struct FormalityReport {
                profile: arrh::complexes::FormalityProfile,
                totally_formal: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                failing_flat: Option<Vec<usize>>,
            }
            let report = FormalityReport {
                totally_formal: totally,
                failing_flat: witness.map(|fi| bundle.lattice.flats[fi].indices()),
                profile: prof,
            };
            let text = format!(
                "H^i(S) dims: {:?}\nessential: {}\nformal: {}\ntotally formal: {}\n",
                report.profile.h_dims,
                report.profile.is_essential,
                report.profile.is_formal(),
                report.totally_formal
            );
            emit(cli, "formality", report, text, started);
            Ok(0)
        }
        Command::Complex(args) => {
            let arr = load(args)?;
            let bundle = ComplexBundle::build(&arr);
            #[derive(Serialize)]
            struct BlockReport {
                flat: Vec<usize>,
                start: usize,
                len: usize,
            }
            #[derive(Serialize)]
            struct JGenReport {
                level: usize,
                flat: Vec<usize>,
                degree: u32,
                entries: Vec<String>,
            }
            #[derive(Serialize)]
            struct ComplexReport {
                dims: Vec<usize>,
                blocks: Vec<Vec<BlockReport>>,
                differentials: Vec<Vec<Vec<String>>>,
                j_generators: Vec<JGenReport>,
            }
            let report = ComplexReport {
                dims: bundle.scalar.dims.clone(),
                blocks: bundle
                    .scalar
                    .blocks
                    .iter()
                    .map(|level| {
                        level
                            .iter()
                            .map(|(fi, range)| BlockReport {
                                flat: bundle.lattice.flats[*fi].indices(),
                                start: range.start,
                                len: range.len(),
                            })
                            .collect()
                    })
                    .collect(),
                differentials: bundle
                    .scalar
                    .diffs
                    .iter()
                    .map(|m| {
                        (0..m.rows)
                            .map(|i| m.row(i).iter().map(|s| s.to_string()).collect())
                            .collect()
                    })
                    .collect(),
                j_generators: (1..=bundle.scalar.rank)
                    .flat_map(|level| {
                        bundle.jcomplex.generators(level).iter().map(move |g| (level, g))
                    })
                    .map(|(level, g)| JGenReport {
                        level,
                        flat: bundle.lattice.flats[g.flat].indices(),
                        degree: g.degree,
                        entries: g.vec.entries.iter().map(|p| p.to_string()).collect(),
                    })
                    .collect(),
            };
            let text = format!(
                "scalar complex dims {:?}; {} generator columns\n",
                report.dims,
                report.j_generators.len()
            );
            emit(cli, "complex", report, text, started);
            Ok(0)
        }
        Command::Homology { input, dmax } => {
            let arr = load(input)?;
            let bundle = ComplexBundle::build(&arr);
            let d_max = dmax.unwrap_or_else(|| analyzer::default_degree_bound(&arr));
            let table = arrh::homology::homology_table(&bundle, d_max);
            let bounds = arrh::homology::pdim_bounds(&bundle, &table);
            #[derive(Serialize)]
            struct HomologyReport {
                table: arrh::homology::HomologyTable,
                pdim_bounds: arrh::homology::PdimBounds,
            }
            let mut text = format!("H^i(J) dims up to degree {d_max}:\n");
            for (level, dims) in &table.levels {
                text.push_str(&format!("  level {level}: {dims:?}\n"));
            }
            text.push_str(&format!(
                "pdim bounds: [{}, {}]{}\n",
                bounds.lower,
                bounds.upper,
                if bounds.heuristic { " (heuristic)" } else { "" }
            ));
            emit(cli, "homology", HomologyReport { table, pdim_bounds: bounds }, text, started);
            Ok(0)
        }
        Command::Freeness {
            input,
            dmax,
            no_tf2_fast_path,
        } => {
            let arr = load(input)?;
            let opts = Options {
                d_max: *dmax,
                use_tf2_fast_path: !no_tf2_fast_path,
            };
            let verdict = analyzer::decide_freeness(&arr, &opts);
            let text = format!(
                "status: {:?}\ncertificate: {}\nexponents: {:?}\n",
                verdict.status,
                certificate_summary(&verdict.certificate),
                verdict.exponents
            );
            let code = match verdict.status {
                Status::Undetermined => 2,
                _ => 0,
            };
            emit(cli, "freeness", verdict, text, started);
            Ok(code)
        }
        Command::Tf2(args) => {
            let arr = load(args)?;
            let bundle = ComplexBundle::build(&arr);
            #[derive(Serialize)]
            struct Tf2Report {
                is_tf2: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                combinatorics: Option<arrh::tf2::Tf2Combinatorics>,
                full_graph: arrh::tf2::IncidenceGraph,
                reduced_graph: arrh::tf2::IncidenceGraph,
                #[serde(skip_serializing_if = "Option::is_none")]
                filtration: Option<arrh::tf2::Filtration>,
                #[serde(skip_serializing_if = "Option::is_none")]
                classification: Option<arrh::tf2::Tf2Classification>,
            }
            let tf2 = arrh::tf2::is_tf2(&bundle);
            let comb = arrh::tf2::tf2_freeness_combinatorial(&bundle).ok();
            let filtration = arrh::tf2::supersolvable_filtration(&bundle).ok();
            let classification = match &comb {
                Some(c) if c.free => arrh::tf2::classify_free_tf2(&bundle).ok(),
                Some(_) => arrh::tf2::classify_nonfree_tf2(&bundle).ok(),
                None => None,
            };
            let report = Tf2Report {
                is_tf2: tf2,
                combinatorics: comb,
                full_graph: arrh::tf2::incidence_graph(&bundle, false),
                reduced_graph: arrh::tf2::incidence_graph(&bundle, true),
                filtration,
                classification,
            };
            let text = format!(
                "TF2: {}\ncombinatorially free: {:?}\nclassification: {:?}\n",
                report.is_tf2,
                report.combinatorics.as_ref().map(|c| c.free),
                report.classification
            );
            emit(cli, "tf2", report, text, started);
            Ok(0)
        }
        Command::Exponents { input, rank2 } => {
            let arr = if let Some(poly) = rank2 {
                let field = parse_field(&input.field)?;
                defpoly::parse_defining_polynomial(field, poly).map_err(|e| e.to_string())?
            } else {
                load(input)?
            };
            let ((d1, d2), gens) =
                arrh::derivations::rank2_exponents(&arr).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct ExponentsReport {
                exponents: (u32, u32),
                generators: Vec<Vec<String>>,
            }
            let report = ExponentsReport {
                exponents: (d1, d2),
                generators: gens
                    .iter()
                    .map(|g| g.coeffs.entries.iter().map(|p| p.to_string()).collect())
                    .collect(),
            };
            let text = format!("exponents: ({d1}, {d2})\n");
            emit(cli, "exponents", report, text, started);
            Ok(0)
        }
        Command::Saito(args) => {
            let arr = load(args)?;
            #[derive(Serialize)]
            struct SaitoReport {
                found: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                exponents: Option<Vec<u32>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                basis: Option<Vec<Vec<String>>>,
                verified: bool,
            }
            let (report, code) = match arrh::derivations::free_basis_search(&arr) {
                arrh::derivations::BasisSearch::Free { basis, exponents } => {
                    let verified =
                        arrh::derivations::saito_check(&arr, &basis) == Ok(true);
                    (
                        SaitoReport {
                            found: true,
                            exponents: Some(exponents),
                            basis: Some(
                                basis
                                    .iter()
                                    .map(|t| {
                                        t.coeffs.entries.iter().map(|p| p.to_string()).collect()
                                    })
                                    .collect(),
                            ),
                            verified,
                        },
                        0,
                    )
                }
                arrh::derivations::BasisSearch::NotFound => (
                    SaitoReport {
                        found: false,
                        exponents: None,
                        basis: None,
                        verified: false,
                    },
                    2,
                ),
            };
            let text = format!(
                "saito basis found: {} (verified: {})\nexponents: {:?}\n",
                report.found, report.verified, report.exponents
            );
            emit(cli, "saito", report, text, started);
            Ok(code)
        }
        Command::Yoshinaga { input, hyperplane } => {
            let arr = load(input)?;
            let report = analyzer::yoshinaga_check(&arr, *hyperplane, &Options::default())
                .map_err(|e| e.to_string())?;
            let code = match report.status {
                Status::Undetermined => 2,
                _ => 0,
            };
            let text = format!("yoshinaga status: {:?}\n", report.status);
            emit(cli, "yoshinaga", report, text, started);
            Ok(code)
        }
        Command::Xrt { r, t, field, dmax } => {
            let f = parse_field(field)?;
            let t = f.parse(t).map_err(|e| e.to_string())?;
            let report = analyzer::xrt_report(f, *r, &t, *dmax, &Options::default())
                .map_err(|e| e.to_string())?;
            let code = match report.ambient.status {
                Status::Undetermined => 2,
                _ => 0,
            };
            let text = format!(
                "A_(r={},t={}) ambient: {:?}; restriction classifier: {:?}\nminimal generator degrees of the simple restriction: {:?}\nH^2 dims: {:?}\n",
                report.r, report.t, report.ambient.status, matches!(report.ziegler_restriction, arrh::tf2::Tf2Classification::Free(_)), report.generator_degrees, report.h2_dims
            );
            emit(cli, "xrt", report, text, started);
            Ok(code)
        }
        Command::Terao3 { input, dmax } => {
            let arr = load(input)?;
            let report =
                arrh::terao3::terao_rank3_complex(&arr, *dmax).map_err(|e| e.to_string())?;
            let text = format!(
                "kappa = {}, euler rank = {}, exact through degree {}: {}\n",
                report.kappa, report.euler_rank, report.degree_bound, report.exact
            );
            emit(cli, "terao3", report, text, started);
            Ok(0)
        }
        Command::Sample { input, trials } => {
            let spec = input_spec(input)?;
            let family = spec
                .family
                .clone()
                .ok_or_else(|| "sample requires --family".to_string())?;
            let seed: u64 = std::env::var("ARRH_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(0);
            let reference = input::resolve_input(&spec).map_err(|e| e.to_string())?;
            // parameters to resample: the family's field parameters, in key order
            let keys: Vec<String> = spec.params.keys().cloned().collect();
            let field = spec.field;
            let mults = spec.mults.clone();
            let fam = family.clone();
            let build = move |vals: &[arrh::field::Scalar]| {
                let mut params = BTreeMap::new();
                for (k, v) in keys.iter().zip(vals) {
                    params.insert(k.clone(), v.to_string());
                }
                arrh::families::build_family(field, &fam, &params, &mults).ok()
            };
            let report = analyzer::moduli_sample(
                &family,
                spec.params.len(),
                &reference,
                build,
                *trials,
                seed,
                &Options::default(),
            );
            let text = format!(
                "family {}: {} free, {} not free, {} degenerate, {} undetermined (seed {})\n",
                report.family,
                report.free.len(),
                report.not_free.len(),
                report.degenerate.len(),
                report.undetermined.len(),
                report.seed
            );
            emit(cli, "sample", report, text, started);
            Ok(0)
        }
    }
}

fn certificate_summary(cert: &analyzer::Certificate) -> String {
    use analyzer::Certificate as C;
    match cert {
        C::SaitoBasis { exponents, .. } => format!("SaitoBasis(exponents {exponents:?})"),
        C::Tf2Classifier(_) => "Tf2Classifier".to_string(),
        C::NotEssentialReduction { inner } => {
            format!("NotEssentialReduction({})", certificate_summary(inner))
        }
        C::NotFormal { flat } => format!("NotFormal(flat {flat:?})"),
        C::EulerCharObstruction { rank, trips } => {
            format!("EulerCharObstruction(rank {rank}, triple flats {trips})")
        }
        C::GenericHyperplane { hyperplane } => format!("GenericHyperplane({hyperplane})"),
        C::CircuitBound { flat } => format!("CircuitBound(flat {flat:?})"),
        C::NonzeroHomology { level, degree, dim } => {
            format!("NonzeroHomology(level {level}, degree {degree}, dim {dim})")
        }
        C::SubarrangementNotFree { flat, inner } => format!(
            "SubarrangementNotFree(flat {flat:?}, {})",
            certificate_summary(inner)
        ),
        C::CycleConditionFailed { detail } => format!("CycleConditionFailed({detail})"),
        C::Undetermined { degree_bound } => format!("Undetermined(degree bound {degree_bound})"),
    }
}
