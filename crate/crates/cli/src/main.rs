//! Command-line driver: certification, reconstruction, Markov-chain, and
//! monogamy workflows with file-based I/O and machine-readable reports.
//!
//! Exit codes: 0 success/certified, 1 input error, 2 negative verdict
//! (refuted / product input / mismatch / incompatible), 3 undecided.

mod formats;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use formats::{MarkovSpecFile, OperatorFile, ValueTableFile};
use report::Report;

use toposq::integrals::reconstruct_state;
use toposq::linalg::ComplexOperator;
use toposq::monad::{
    build_markov_chain, checks, markov_closed_form, ClassicalExtension, FiniteDist, FiniteSet,
    Kernel,
};
use toposq::monogamy::{
    check_extendibility_obstruction, classical_contrast, monogamy_witness,
    ExtendibilityVerdict, ObstructionCertificate,
};
use toposq::popt::{certify_popt, Certification, PoptConfig};
use toposq::sample::{
    maximally_entangled_state, random_density, random_pure_state,
};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "toposq",
    version,
    about = "Contexts, POPT states, contextual integrals, and monad Markov chains at desk scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify or refute positivity over pure tensors for an operator file.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Seed for the see-saw restarts and the sampling oracle.
        #[arg(long)]
        seed: u64,
        /// Certification tolerance (refutation uses ten times this value).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Also write the report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the unique Hermitian operator from a product-projector
    /// value table.
    Reconstruct {
        #[arg(long)]
        values: PathBuf,
        /// Residual tolerance for consistency of the value table.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the reconstructed operator file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a Markov chain joint distribution and cross-check the closed
    /// form; optionally run the lemma suites.
    Markov {
        #[arg(long)]
        spec: PathBuf,
        /// Run the product-stability, marginal-locality, state-preservation
        /// and strength-diagram suites (requires --seed).
        #[arg(long)]
        check_lemmas: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Random instances per lemma suite.
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monogamy workflows on bipartite POPT states.
    Monogamy {
        #[command(subcommand)]
        action: MonogamyAction,
    },
    /// Generate canonical fixture operator files.
    Make {
        /// Maximally entangled state on d (x) d.
        #[arg(long)]
        maxent: Option<usize>,
        /// Partial transpose of the maximally entangled state.
        #[arg(long)]
        pt_maxent: Option<usize>,
        /// Classically correlated state sum_i |ii><ii|/d.
        #[arg(long)]
        classical: Option<usize>,
        /// Block-positivity violator: I/d^2 - maxent/2, renormalized.
        #[arg(long)]
        violator: Option<usize>,
        /// Random density operator on the given comma-separated dims.
        #[arg(long, value_delimiter = ',')]
        random_density: Option<Vec<usize>>,
        /// Partial transpose of a random pure state on d (x) d.
        #[arg(long)]
        random_pt_pure: Option<usize>,
        /// Canonical IC value table of an existing operator file.
        #[arg(long)]
        tabulate: Option<PathBuf>,
        /// Seed (mandatory for the random kinds).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum MonogamyAction {
    /// Construct the non-extendible companion state for a nonproduct input.
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        /// Write the witness operator file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check extendibility of the input against a pair state (defaults to
    /// the computed witness).
    Obstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical contrast: diagonal valuations of the pair and their
    /// classical extension.
    Contrast {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

type CmdResult = Result<(Report, u8), Failure>;

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_operator(path: &Path, report: &mut Report, name: &str) -> Result<ComplexOperator<f64>, Failure> {
    let bytes = read_file(path)?;
    report.record_input(name, &bytes);
    let file: OperatorFile = serde_json::from_slice(&bytes)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    file.to_operator().map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn config(tol: f64, restarts: usize, samples: usize) -> PoptConfig<f64> {
    PoptConfig {
        restarts,
        samples,
        cert_tol: tol,
        refute_tol: 10.0 * tol,
        ..PoptConfig::default()
    }
}

fn certification_payload(cert: &Certification<f64>) -> (String, serde_json::Value) {
    match cert {
        Certification::CertifiedPopt { min_overlap, witness } => (
            "CERTIFIED_POPT".into(),
            json!({
                "min_product_overlap": min_overlap,
                "minimizer": formats::vectors_to_json(witness),
            }),
        ),
        Certification::Refuted { value, witness } => (
            "REFUTED".into(),
            json!({
                "violation_value": value,
                "witness": formats::vectors_to_json(witness),
            }),
        ),
        Certification::Unknown { best_value } => {
            ("UNKNOWN".into(), json!({ "best_value": best_value }))
        }
    }
}

fn cmd_certify(
    argv: Vec<String>,
    input: &Path,
    seed: u64,
    tol: f64,
    restarts: usize,
    samples: usize,
) -> CmdResult {
    let mut report = Report::new("certify", argv, Some(seed));
    let op = load_operator(input, &mut report, "input")?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let cfg = config(tol, restarts, samples);
    let state = certify_popt(&op, &cfg, &mut rng)
        .map_err(|e| Failure::input(format!("certification rejected the input: {e}")))?;
    let spectrum = op
        .eigh()
        .map_err(|e| Failure::input(format!("spectrum computation failed: {e}")))?;
    let (status, payload) = certification_payload(state.certification());
    let code = match state.certification() {
        Certification::CertifiedPopt { .. } => EXIT_OK,
        Certification::Refuted { .. } => EXIT_NEGATIVE,
        Certification::Unknown { .. } => EXIT_UNDECIDED,
    };
    report.status = status;
    report.results = json!({
        "dims": op.dims(),
        "certification": payload,
        "min_eigenvalue": spectrum.values.last(),
        "max_eigenvalue": spectrum.values.first(),
        "config": {
            "restarts": restarts,
            "samples": samples,
            "cert_tol": tol,
            "refute_tol": 10.0 * tol,
        },
    });
    Ok((report, code))
}

fn cmd_reconstruct(argv: Vec<String>, values: &Path, tol: f64, out: Option<&Path>) -> CmdResult {
    let mut report = Report::new("reconstruct", argv, None);
    let bytes = read_file(values)?;
    report.record_input("values", &bytes);
    let table: ValueTableFile = serde_json::from_slice(&bytes)
        .map_err(|e| Failure::input(format!("{}: {e}", values.display())))?;
    let records = table
        .to_projector_values()
        .map_err(|e| Failure::input(format!("{}: {e}", values.display())))?;
    let op = reconstruct_state(&table.dims, &records, tol)
        .map_err(|e| Failure::input(format!("reconstruction failed: {e}")))?;
    // re-check the residual for the report
    let mut max_residual = 0.0f64;
    for rec in &records {
        let parts: Vec<ComplexOperator<f64>> = rec.factors.iter().map(|v| v.projector()).collect();
        let refs: Vec<&ComplexOperator<f64>> = parts.iter().collect();
        let projector = ComplexOperator::tensor_all(&refs);
        let predicted = projector
            .with_dims(op.dims().to_vec())
            .expect("projector side")
            .hs_inner(&op)
            .re;
        max_residual = max_residual.max((predicted - rec.value).abs());
    }
    let file = OperatorFile::from_operator(&op);
    if let Some(path) = out {
        let mut body = serde_json::to_string_pretty(&file)
            .expect("operator file serializes");
        body.push('\n');
        write_output(path, &body)?;
    }
    report.status = "RECONSTRUCTED".into();
    report.results = json!({
        "dims": table.dims,
        "records": records.len(),
        "max_abs_residual": max_residual,
        "operator": if out.is_none() { Some(file) } else { None },
    });
    Ok((report, EXIT_OK))
}

fn lemma_suites(seed: u64, instances: usize) -> serde_json::Value {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_stability = 0.0f64;
    let mut worst_locality = 0.0f64;
    let mut worst_preservation = 0.0f64;
    for _ in 0..instances {
        let sizes: Vec<usize> =
            (0..4).map(|_| rand::Rng::gen_range(&mut rng, 2..=4usize)).collect();
        let (sx, sy, sz, sw) = (sizes[0], sizes[1], sizes[2], sizes[3]);
        let x = FiniteSet::new("X", sx);
        let y = FiniteSet::new("Y", sy);
        let z = FiniteSet::new("Z", sz);
        let w = FiniteSet::new("W", sw);
        let p_x = random_dist(&x, &mut rng);
        let p_y = random_dist(&y, &mut rng);
        let f = random_kernel(&x, &z, &mut rng);
        let g = random_kernel(&y, &w, &mut rng);
        worst_stability = worst_stability.max(checks::check_product_stability(&p_x, &p_y, &f, &g));
        let joint = random_dist(&FiniteSet::new("XY", sx * sy), &mut rng);
        let h = random_kernel(&y, &z, &mut rng);
        worst_locality = worst_locality.max(checks::check_marginal_locality(&joint, sx, &h));
        worst_preservation =
            worst_preservation.max(checks::check_state_preservation(&joint, sx, &h));
    }
    let diag12 = checks::check_strength_diagrams::<f64>(1, 2, &[]);
    let diag23 = checks::check_strength_diagrams::<f64>(2, 3, &[]);
    let diag33 = checks::check_strength_diagrams::<f64>(3, 3, &[]);
    json!({
        "instances": instances,
        "product_stability_max": worst_stability,
        "marginal_locality_max": worst_locality,
        "state_preservation_max": worst_preservation,
        "strength_diagrams_max": diag12
            .max_deviation()
            .max(diag23.max_deviation())
            .max(diag33.max_deviation()),
    })
}

fn random_dist(over: &FiniteSet, rng: &mut ChaCha12Rng) -> FiniteDist<f64> {
    let raw: Vec<f64> =
        (0..over.size).map(|_| rand::Rng::gen::<f64>(rng) + 0.01).collect();
    let sum: f64 = raw.iter().sum();
    FiniteDist::raw(over.clone(), raw.iter().map(|w| w / sum).collect())
}

fn random_kernel(from: &FiniteSet, to: &FiniteSet, rng: &mut ChaCha12Rng) -> Kernel<f64> {
    let rows = (0..from.size).map(|_| random_dist(to, rng)).collect();
    Kernel::new(from.clone(), to.clone(), rows).expect("consistent by construction")
}

fn cmd_markov(
    argv: Vec<String>,
    spec_path: &Path,
    check_lemmas: bool,
    seed: Option<u64>,
    instances: usize,
) -> CmdResult {
    if check_lemmas && seed.is_none() {
        return Err(Failure::input("--check-lemmas requires --seed"));
    }
    let mut report = Report::new("markov", argv, seed);
    let bytes = read_file(spec_path)?;
    report.record_input("spec", &bytes);
    let file: MarkovSpecFile = serde_json::from_slice(&bytes)
        .map_err(|e| Failure::input(format!("{}: {e}", spec_path.display())))?;
    let spec = file.to_spec().map_err(Failure::input)?;
    let joint = build_markov_chain(&spec).map_err(|e| Failure::input(e.to_string()))?;
    let oracle = markov_closed_form(&spec);
    let deviation = joint.max_abs_diff(&oracle);
    let lemmas = if check_lemmas {
        Some(lemma_suites(seed.expect("checked above"), instances))
    } else {
        None
    };
    report.status = "BUILT".into();
    report.results = json!({
        "alphabet_sizes": spec.sizes(),
        "joint_weights": joint.weights,
        "closed_form_max_deviation": deviation,
        "lemma_suites": lemmas,
    });
    Ok((report, EXIT_OK))
}

fn obstruction_payload(verdict: &ExtendibilityVerdict<f64>) -> serde_json::Value {
    match verdict {
        ExtendibilityVerdict::ExtendibleWitnessed { extension } => json!({
            "extension_dims": extension.op().dims(),
            "extension": OperatorFile::from_operator(extension.op()),
        }),
        ExtendibilityVerdict::NotExtendibleCertified { certificate } => match certificate {
            ObstructionCertificate::ExtremalPair {
                extremal_on_left,
                class,
                left_nonproduct_ratio,
                right_nonproduct_ratio,
            } => json!({
                "certificate": "extremal_pair",
                "extremal_on_left": extremal_on_left,
                "class": format!("{class:?}"),
                "left_nonproduct_ratio": left_nonproduct_ratio,
                "right_nonproduct_ratio": right_nonproduct_ratio,
            }),
            ObstructionCertificate::RestrictionTrace {
                pair,
                left_restricted_ratio,
                block_purity_gap,
                block_nonproduct_ratio,
            } => json!({
                "certificate": "restriction_trace",
                "pair": [pair.0, pair.1],
                "left_restricted_ratio": left_restricted_ratio,
                "block_purity_gap": block_purity_gap,
                "block_nonproduct_ratio": block_nonproduct_ratio,
            }),
        },
        ExtendibilityVerdict::OverlapMismatch { norm } => json!({ "marginal_gap": norm }),
        ExtendibilityVerdict::Undecided => serde_json::Value::Null,
    }
}

fn certify_input(
    op: &ComplexOperator<f64>,
    cfg: &PoptConfig<f64>,
    rng: &mut ChaCha12Rng,
    what: &str,
) -> Result<toposq::popt::PoptState<f64>, Failure> {
    let state = certify_popt(op, cfg, rng)
        .map_err(|e| Failure::input(format!("{what}: {e}")))?;
    state.require_certified().map_err(|e| Failure {
        code: EXIT_NEGATIVE,
        message: format!("{what} is not a certified POPT state: {e}"),
    })?;
    Ok(state)
}

fn cmd_monogamy(argv: Vec<String>, action: &MonogamyAction) -> CmdResult {
    match action {
        MonogamyAction::Witness { input, seed, tol, restarts, out } => {
            let mut report = Report::new("monogamy witness", argv, Some(*seed));
            let op = load_operator(input, &mut report, "input")?;
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let cfg = config(*tol, *restarts, 10_000);
            let state = certify_input(&op, &cfg, &mut rng, "input")?;
            match monogamy_witness(&state) {
                Ok(witness) => {
                    let file = OperatorFile::from_operator(&witness.rho_yz);
                    if let Some(path) = out {
                        let mut body = serde_json::to_string_pretty(&file)
                            .expect("operator file serializes");
                        body.push('\n');
                        write_output(path, &body)?;
                    }
                    report.status = "WITNESS_CONSTRUCTED".into();
                    report.results = json!({
                        "pair": [witness.trace.pair.0, witness.trace.pair.1],
                        "marginal_eigenvalues": witness.trace.eigenvalues,
                        "restriction_ratio": witness.trace.restriction_ratio,
                        "marginal_error": witness.trace.marginal_error,
                        "witness": if out.is_none() { Some(file) } else { None },
                    });
                    Ok((report, EXIT_OK))
                }
                Err(toposq::Error::HypothesisNotMet(msg)) => {
                    report.status = "PRODUCT_INPUT".into();
                    report.results = json!({
                        "explanation": format!(
                            "no witness exists: {msg}; product states extend with any \
                             marginal-matching companion"
                        ),
                    });
                    Ok((report, EXIT_NEGATIVE))
                }
                Err(e) => Err(Failure::input(e.to_string())),
            }
        }
        MonogamyAction::Obstruct { input, pair, seed, tol, restarts, out: _ } => {
            let mut report = Report::new("monogamy obstruct", argv, Some(*seed));
            let op = load_operator(input, &mut report, "input")?;
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let cfg = config(1e-9, *restarts, 10_000);
            let state = certify_input(&op, &cfg, &mut rng, "input")?;
            let companion = match pair {
                Some(path) => load_operator(path, &mut report, "pair")?,
                None => monogamy_witness(&state)
                    .map_err(|e| Failure { code: EXIT_NEGATIVE, message: e.to_string() })?
                    .rho_yz,
            };
            let companion_state = certify_input(&companion, &cfg, &mut rng, "pair")?;
            let verdict =
                check_extendibility_obstruction(&state, &companion_state, &cfg, *tol, &mut rng)
                    .map_err(|e| Failure::input(e.to_string()))?;
            let code = match &verdict {
                ExtendibilityVerdict::ExtendibleWitnessed { .. }
                | ExtendibilityVerdict::NotExtendibleCertified { .. } => EXIT_OK,
                ExtendibilityVerdict::OverlapMismatch { .. } => EXIT_NEGATIVE,
                ExtendibilityVerdict::Undecided => EXIT_UNDECIDED,
            };
            report.status = verdict.kind().into();
            report.results = json!({
                "pair_supplied": pair.is_some(),
                "details": obstruction_payload(&verdict),
            });
            Ok((report, code))
        }
        MonogamyAction::Contrast { input, pair, seed, tol, restarts, out: _ } => {
            let mut report = Report::new("monogamy contrast", argv, Some(*seed));
            let op = load_operator(input, &mut report, "input")?;
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let cfg = config(1e-9, *restarts, 10_000);
            let state = certify_input(&op, &cfg, &mut rng, "input")?;
            let companion = match pair {
                Some(path) => load_operator(path, &mut report, "pair")?,
                None => monogamy_witness(&state)
                    .map_err(|e| Failure { code: EXIT_NEGATIVE, message: e.to_string() })?
                    .rho_yz,
            };
            let companion_state = certify_input(&companion, &cfg, &mut rng, "pair")?;
            let contrast = classical_contrast(&state, &companion_state, *tol)
                .map_err(|e| Failure::input(e.to_string()))?;
            let (status, code, details) = match &contrast.outcome {
                ClassicalExtension::Extension(triple) => (
                    "CLASSICAL_EXTENDIBLE",
                    EXIT_OK,
                    json!({
                        "p_xy": contrast.p_xy.weights,
                        "p_yz": contrast.p_yz.weights,
                        "extension": triple.weights,
                    }),
                ),
                ClassicalExtension::Incompatible { l1_gap } => (
                    "CLASSICAL_INCOMPATIBLE",
                    EXIT_NEGATIVE,
                    json!({ "l1_gap": l1_gap }),
                ),
            };
            report.status = status.into();
            report.results = details;
            Ok((report, code))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_make(
    argv: Vec<String>,
    maxent: Option<usize>,
    pt_maxent: Option<usize>,
    classical: Option<usize>,
    violator: Option<usize>,
    random_density_dims: Option<Vec<usize>>,
    random_pt_pure: Option<usize>,
    tabulate: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
) -> CmdResult {
    let kinds = [
        maxent.is_some(),
        pt_maxent.is_some(),
        classical.is_some(),
        violator.is_some(),
        random_density_dims.is_some(),
        random_pt_pure.is_some(),
        tabulate.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if kinds != 1 {
        return Err(Failure::input("choose exactly one fixture kind"));
    }
    let mut report = Report::new("make", argv, seed);
    if let Some(source) = tabulate {
        let op = load_operator(source, &mut report, "tabulate")?;
        let values = toposq::integrals::canonical_ic_values(op.dims(), |vs| {
            toposq::popt::product_overlap(&op, vs)
        });
        let table = ValueTableFile {
            dims: op.dims().to_vec(),
            records: values
                .iter()
                .map(|pv| formats::ValueRecord {
                    context: None,
                    element: formats::ElementSpec::Factors(
                        pv.factors.iter().map(|v| {
                            v.entries().iter().map(|z| [z.re, z.im]).collect()
                        }).collect(),
                    ),
                    value: pv.value,
                })
                .collect(),
        };
        let mut body = serde_json::to_string_pretty(&table).expect("table serializes");
        body.push('\n');
        write_output(out, &body)?;
        report.record_input("output", body.as_bytes());
        report.status = "WRITTEN".into();
        report.results = json!({
            "kind": "ic_value_table",
            "dims": op.dims(),
            "records": table.records.len(),
            "path": out.display().to_string(),
        });
        return Ok((report, EXIT_OK));
    }
    let (kind, op): (String, ComplexOperator<f64>) = if let Some(d) = maxent {
        ("maxent".into(), maximally_entangled_state::<f64>(d))
    } else if let Some(d) = pt_maxent {
        (
            "pt_maxent".into(),
            maximally_entangled_state::<f64>(d)
                .partial_transpose(1)
                .map_err(|e| Failure::input(e.to_string()))?,
        )
    } else if let Some(d) = classical {
        ("classical".into(), toposq::sample::classically_correlated::<f64>(d))
    } else if let Some(d) = violator {
        let eye = ComplexOperator::<f64>::identity(vec![d, d]).scale_re(1.0 / (d * d) as f64);
        let raw = eye.sub(&maximally_entangled_state::<f64>(d).scale_re(0.5));
        let tr = raw.trace().re;
        ("violator".into(), raw.scale_re(1.0 / tr))
    } else if let Some(dims) = random_density_dims {
        let seed = seed.ok_or_else(|| Failure::input("--random-density requires --seed"))?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        ("random_density".into(), random_density::<f64, _>(&dims, &mut rng))
    } else {
        let d = random_pt_pure.expect("one kind chosen");
        let seed = seed.ok_or_else(|| Failure::input("--random-pt-pure requires --seed"))?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (
            "random_pt_pure".into(),
            random_pure_state::<f64, _>(&[d, d], &mut rng)
                .partial_transpose(1)
                .map_err(|e| Failure::input(e.to_string()))?,
        )
    };
    let file = OperatorFile::from_operator(&op);
    let mut body = serde_json::to_string_pretty(&file).expect("operator file serializes");
    body.push('\n');
    write_output(out, &body)?;
    report.record_input("output", body.as_bytes());
    report.status = "WRITTEN".into();
    report.results = json!({
        "kind": kind,
        "dims": op.dims(),
        "trace": op.trace().re,
        "path": out.display().to_string(),
    });
    Ok((report, EXIT_OK))
}

fn run(cli: Cli, argv: Vec<String>) -> CmdResult {
    match &cli.command {
        Command::Certify { input, seed, tol, restarts, samples, out: _ } => {
            cmd_certify(argv, input, *seed, *tol, *restarts, *samples)
        }
        Command::Reconstruct { values, tol, out } => {
            cmd_reconstruct(argv, values, *tol, out.as_deref())
        }
        Command::Markov { spec, check_lemmas, seed, instances, out: _ } => {
            cmd_markov(argv, spec, *check_lemmas, *seed, *instances)
        }
        Command::Monogamy { action } => cmd_monogamy(argv, action),
        Command::Make {
            maxent,
            pt_maxent,
            classical,
            violator,
            random_density,
            random_pt_pure,
            tabulate,
            seed,
            out,
        } => cmd_make(
            argv,
            *maxent,
            *pt_maxent,
            *classical,
            *violator,
            random_density.clone(),
            *random_pt_pure,
            tabulate.as_deref(),
            *seed,
            out,
        ),
    }
}

fn report_out_path(cli: &Cli) -> Option<PathBuf> {
    match &cli.command {
        Command::Certify { out, .. } => out.clone(),
        Command::Markov { out, .. } => out.clone(),
        Command::Monogamy { action } => match action {
            MonogamyAction::Obstruct { out, .. } => out.clone(),
            MonogamyAction::Contrast { out, .. } => out.clone(),
            MonogamyAction::Witness { .. } => None,
        },
        _ => None,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let report_path = report_out_path(&cli);
    match run(cli, argv) {
        Ok((report, code)) => {
            let rendered = report.render();
            print!("{rendered}");
            if let Some(path) = report_path {
                if let Err(e) = std::fs::write(&path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
