//! Acceptance suite: one test (and one pass/fail line) per criterion.
//!
//! Run with `cargo test -p toposq-cli --test acceptance -- --nocapture` to
//! also see the measured margins.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use toposq::contexts::ProductContext;
use toposq::integrals::{frame_function_from_state, reconstruct_from_frame_function};
use toposq::linalg::ComplexOperator;
use toposq::monad::{
    build_markov_chain, checks, markov_closed_form, ClassicalExtension, FiniteDist, FiniteSet,
    Kernel, MarkovChainSpec,
};
use toposq::monogamy::{
    check_extendibility_obstruction, classical_contrast, constant_kernel_chain,
    monogamy_witness, refute_correlating_extension, ExtendibilityVerdict,
};
use toposq::popt::{
    certify_popt, min_product_overlap, product_overlap, schmidt_nonproduct_ratio, PoptConfig,
    PoptState,
};
use toposq::sample::{
    maximally_entangled_state, random_density, random_maximal_context, random_pure_state,
};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn random_dist(over: &FiniteSet, rng: &mut ChaCha12Rng) -> FiniteDist<f64> {
    let raw: Vec<f64> = (0..over.size).map(|_| rng.gen::<f64>() + 0.01).collect();
    let sum: f64 = raw.iter().sum();
    FiniteDist::raw(over.clone(), raw.iter().map(|w| w / sum).collect())
}

fn random_kernel(from: &FiniteSet, to: &FiniteSet, rng: &mut ChaCha12Rng) -> Kernel<f64> {
    let rows = (0..from.size).map(|_| random_dist(to, rng)).collect();
    Kernel::new(from.clone(), to.clone(), rows).expect("consistent by construction")
}

/// Criterion 1: 200 seeded random specs (n = 5, alphabet sizes <= 4);
/// build_markov_chain equals the closed form with max abs deviation
/// <= 1e-12; runtime < 5 s.
#[test]
fn criterion_01_markov_factorization() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let sizes: Vec<usize> = (0..5).map(|_| r.gen_range(2..=4usize)).collect();
        let initial = random_dist(&FiniteSet::new("X1", sizes[0]), &mut r);
        let mut kernels = Vec::new();
        let mut prev = initial.over.clone();
        for (i, &s) in sizes.iter().enumerate().skip(1) {
            let to = FiniteSet::new(format!("X{}", i + 1), s);
            kernels.push(random_kernel(&prev, &to, &mut r));
            prev = to;
        }
        let spec = MarkovChainSpec::new(initial, kernels).unwrap();
        let joint = build_markov_chain(&spec).unwrap();
        let oracle = markov_closed_form(&spec);
        worst = worst.max(joint.max_abs_diff(&oracle));
    }
    let elapsed = start.elapsed();
    assert!(worst <= 1e-12, "FAIL criterion 1: max deviation {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 5.0, "FAIL criterion 1: runtime {elapsed:?}");
    println!("PASS criterion 1: Markov factorization, max deviation {worst:.3e}, {elapsed:?}");
}

/// Criterion 2: product stability, marginal locality, state preservation
/// each <= 1e-12 over 1000 seeded random instances; strength diagrams
/// exhaustively exact (<= 1e-14) on sizes (1,2,3); runtime < 10 s.
#[test]
fn criterion_02_lemma_suites() {
    let start = Instant::now();
    let mut r = rng(0xC0FFEE);
    let mut worst_stability = 0.0f64;
    let mut worst_locality = 0.0f64;
    let mut worst_preservation = 0.0f64;
    for _ in 0..1000 {
        let sx = r.gen_range(2..=4usize);
        let sy = r.gen_range(2..=4usize);
        let sz = r.gen_range(2..=4usize);
        let sw = r.gen_range(2..=4usize);
        let x = FiniteSet::new("X", sx);
        let y = FiniteSet::new("Y", sy);
        let p_x = random_dist(&x, &mut r);
        let p_y = random_dist(&y, &mut r);
        let f = random_kernel(&x, &FiniteSet::new("X2", sz), &mut r);
        let g = random_kernel(&y, &FiniteSet::new("Y2", sw), &mut r);
        worst_stability = worst_stability.max(checks::check_product_stability(&p_x, &p_y, &f, &g));
        let joint = random_dist(&FiniteSet::new("XY", sx * sy), &mut r);
        let h = random_kernel(&y, &FiniteSet::new("Z", sz), &mut r);
        worst_locality = worst_locality.max(checks::check_marginal_locality(&joint, sx, &h));
        worst_preservation =
            worst_preservation.max(checks::check_state_preservation(&joint, sx, &h));
    }
    let mut worst_diagram = 0.0f64;
    for (x, y) in [(1usize, 2usize), (1, 3), (2, 3), (2, 2), (3, 3), (3, 2)] {
        let report = checks::check_strength_diagrams::<f64>(x, y, &[]);
        worst_diagram = worst_diagram.max(report.max_deviation());
    }
    let elapsed = start.elapsed();
    assert!(worst_stability <= 1e-12, "FAIL criterion 2: stability {worst_stability:.3e}");
    assert!(worst_locality <= 1e-12, "FAIL criterion 2: locality {worst_locality:.3e}");
    assert!(
        worst_preservation <= 1e-12,
        "FAIL criterion 2: preservation {worst_preservation:.3e}"
    );
    assert!(worst_diagram <= 1e-14, "FAIL criterion 2: diagrams {worst_diagram:.3e}");
    assert!(elapsed.as_secs_f64() < 10.0, "FAIL criterion 2: runtime {elapsed:?}");
    println!(
        "PASS criterion 2: lemma suites, stability {worst_stability:.3e}, locality \
         {worst_locality:.3e}, preservation {worst_preservation:.3e}, diagrams \
         {worst_diagram:.3e}, {elapsed:?}"
    );
}

fn popt_sample_population(count: usize, seed: u64, cfg: &PoptConfig<f64>) -> Vec<PoptState<f64>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let op = if k % 2 == 0 {
            random_density::<f64, _>(&[3, 3], &mut r)
        } else {
            random_pure_state::<f64, _>(&[3, 3], &mut r).partial_transpose(1).unwrap()
        };
        let state = certify_popt(&op, cfg, &mut r).unwrap();
        assert!(state.is_certified(), "population member {k} failed to certify");
        out.push(state);
    }
    out
}

/// Criterion 3: 100 random 3x3 POPT states (50 densities, 50 partial
/// transposes of pure states); reconstruct . frame_function recovers the
/// operator with Frobenius error <= 1e-8 each; runtime < 30 s.
#[test]
fn criterion_03_bijection_round_trip() {
    let start = Instant::now();
    let states = popt_sample_population(100, 0xB17E, &PoptConfig::default());
    let mut worst = 0.0f64;
    for state in &states {
        let f = frame_function_from_state(state).unwrap();
        let back = reconstruct_from_frame_function(&f, &[3, 3], 1e-8).unwrap();
        worst = worst.max(back.sub(state.op()).frobenius_norm());
    }
    let elapsed = start.elapsed();
    assert!(worst <= 1e-8, "FAIL criterion 3: max Frobenius error {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 30.0, "FAIL criterion 3: runtime {elapsed:?}");
    println!("PASS criterion 3: bijection round trip, max error {worst:.3e}, {elapsed:?}");
}

/// Criterion 4: for 100 random product orthonormal bases on 3x3 and 10
/// random POPT states, |sum_j f(xi_j) - 1| <= 1e-9.
#[test]
fn criterion_04_frame_normalization() {
    let states = popt_sample_population(10, 0xF4A3E, &PoptConfig::fast());
    let mut r = rng(0xBA515);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let b1 = toposq::sample::random_orthonormal_basis::<f64, _>(3, &mut r);
        let b2 = toposq::sample::random_orthonormal_basis::<f64, _>(3, &mut r);
        for state in &states {
            let f = frame_function_from_state(state).unwrap();
            let sum = f.basis_sum(&[b1.clone(), b2.clone()]);
            worst = worst.max((sum - 1.0).abs());
        }
    }
    assert!(worst <= 1e-9, "FAIL criterion 4: max |sum - 1| = {worst:.3e}");
    println!("PASS criterion 4: frame normalization, max |sum - 1| = {worst:.3e}");
}

/// Criterion 5: the partial transpose of the 3x3 maximally entangled state
/// certifies POPT with min product overlap 0 +- 1e-6 (see-saw vs dense grid
/// oracle agreement <= 1e-4) while its minimum eigenvalue is -1/3 +- 1e-10.
#[test]
fn criterion_05_popt_vs_quantum_gap() {
    let pt = maximally_entangled_state::<f64>(3).partial_transpose(1).unwrap();
    let mut r = rng(0x9A9);
    let state = certify_popt(&pt, &PoptConfig::default(), &mut r).unwrap();
    assert!(state.is_certified(), "FAIL criterion 5: PT of maxent did not certify");
    let (seesaw, _) = min_product_overlap(&pt, 64, 500, 1e-12, &mut r).unwrap();
    assert!(seesaw.abs() <= 1e-6, "FAIL criterion 5: see-saw min {seesaw:.3e}");

    // dense deterministic grid over parameterized product pairs: basis
    // states against two-level superpositions with phase and angle grids
    let mut grid_min = f64::INFINITY;
    let phases = [1.0f64, 0.0, -1.0, 0.0];
    let mut checked_formula = 0usize;
    for ia in 0..3 {
        for ib in 0..3 {
            for jb in 0..3 {
                if ib == jb {
                    continue;
                }
                for t in 0..=8 {
                    let theta = std::f64::consts::FRAC_PI_2 * t as f64 / 8.0;
                    for (pk, &pre) in phases.iter().enumerate() {
                        let pim = [0.0, 1.0, 0.0, -1.0][pk];
                        let a = toposq::linalg::UnitVector::<f64>::basis(3, ia);
                        let mut entries =
                            vec![num_complex::Complex::new(0.0, 0.0); 3];
                        entries[ib] = num_complex::Complex::new(theta.cos(), 0.0);
                        entries[jb] =
                            num_complex::Complex::new(pre, pim) * theta.sin();
                        let b = toposq::linalg::UnitVector::new(entries).unwrap();
                        let val = product_overlap(&pt, &[a.clone(), b.clone()]);
                        // analytic value <ab|SWAP|ab>/3 = |<a|b>|^2/3
                        let ip = a.inner(&b).norm();
                        assert!(
                            (val - ip * ip / 3.0).abs() < 1e-12,
                            "FAIL criterion 5: grid point disagrees with the analytic formula"
                        );
                        checked_formula += 1;
                        grid_min = grid_min.min(val);
                    }
                }
            }
        }
    }
    assert!(checked_formula > 500);
    assert!(
        (seesaw - grid_min).abs() <= 1e-4,
        "FAIL criterion 5: see-saw {seesaw:.3e} vs grid {grid_min:.3e}"
    );
    let min_eig = *pt.eigh().unwrap().values.last().unwrap();
    assert!(
        (min_eig + 1.0 / 3.0).abs() <= 1e-10,
        "FAIL criterion 5: min eigenvalue {min_eig}"
    );
    println!(
        "PASS criterion 5: POPT vs quantum gap, see-saw {seesaw:.3e}, grid {grid_min:.3e}, \
         min eigenvalue {min_eig:.12}"
    );
}

/// Criterion 6: for 100 random product qubit contexts and 100 random
/// positive operators drawn inside each context span, the expansion
/// coefficients are all >= -1e-10.
#[test]
fn criterion_06_separable_context_check() {
    let mut r = rng(0x5E9A);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let ca = random_maximal_context::<f64, _>(2, &mut r);
        let cb = random_maximal_context::<f64, _>(2, &mut r);
        let pc = ProductContext::new(vec![ca, cb]).unwrap();
        let induced = pc.induced();
        for _ in 0..100 {
            // random Hermitian span element, shifted to be positive
            let coeffs: Vec<f64> = (0..4).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
            let mut h = ComplexOperator::<f64>::zeros(vec![4]);
            for (c, p) in coeffs.iter().zip(induced.projectors()) {
                h = h.add(&p.with_dims(vec![4]).unwrap().scale_re(*c));
            }
            let min_eig = *h.eigh().unwrap().values.last().unwrap();
            let positive = h.sub(&ComplexOperator::identity1(4).scale_re(min_eig));
            // expansion coefficients via the product characters
            let (expansion, residual) = induced.span_coefficients(&positive);
            assert!(residual < 1e-10, "shifted element left the context span");
            for c in &expansion {
                assert!(
                    c.re >= -1e-10,
                    "FAIL criterion 6: negative coefficient {:.3e}",
                    c.re
                );
                worst = worst.min(c.re);
            }
        }
    }
    println!("PASS criterion 6: separable-context check, smallest coefficient {worst:.3e}");
}

/// Criterion 7: for 100 random tripartite states sigma_XY (x) tau_Z with
/// sigma_XY pure entangled, all POVM conditionals equal sigma_XY within
/// Frobenius 1e-10, and the recombination reproduces tr_Z w within 1e-12.
#[test]
fn criterion_07_povm_conditioning() {
    let mut r = rng(0x70FF);
    let cfg = PoptConfig::fast();
    let mut worst_cond = 0.0f64;
    let mut worst_recomb = 0.0f64;
    for k in 0..100 {
        let sigma = loop {
            let s = random_pure_state::<f64, _>(&[3, 3], &mut r);
            if schmidt_nonproduct_ratio(&s).unwrap() > 1e-3 {
                break s;
            }
        };
        let tau = random_density::<f64, _>(&[3], &mut r);
        let big = sigma.tensor(&tau);
        let state = certify_popt(&big, &cfg, &mut r).unwrap();
        assert!(state.is_certified(), "instance {k} failed to certify");
        // random 3-element POVM on Z
        let a = random_density::<f64, _>(&[3], &mut r).scale_re(0.5);
        let b = random_density::<f64, _>(&[3], &mut r).scale_re(0.3);
        let rest = ComplexOperator::<f64>::identity1(3).sub(&a).sub(&b);
        let povm = vec![a, b, rest];
        let conds =
            toposq::monogamy::condition_on_povm(&state, &povm, &cfg, &mut r).unwrap();
        let mut recombined = ComplexOperator::<f64>::zeros(vec![3, 3]);
        for c in &conds {
            if let Some(s) = &c.state {
                worst_cond = worst_cond.max(s.op().sub(&sigma).frobenius_norm());
                recombined = recombined.add(&s.op().scale_re(c.probability));
            }
        }
        let marginal = big.partial_trace(&[0, 1]).unwrap();
        worst_recomb = worst_recomb.max(recombined.sub(&marginal).frobenius_norm());
    }
    assert!(worst_cond <= 1e-10, "FAIL criterion 7: conditional distance {worst_cond:.3e}");
    assert!(worst_recomb <= 1e-12, "FAIL criterion 7: recombination {worst_recomb:.3e}");
    println!(
        "PASS criterion 7: POVM conditioning, conditionals {worst_cond:.3e}, recombination \
         {worst_recomb:.3e}"
    );
}

/// Criterion 8: for the maximally entangled state and 20 random nonproduct
/// POPT states, the witness has overlap-marginal coincidence <= 1e-12 and
/// the obstruction check certifies non-extendibility, while the classical
/// contrast extends.
#[test]
fn criterion_08_monogamy_witness() {
    let mut r = rng(0x8888);
    let cfg = PoptConfig::fast();
    let mut inputs: Vec<PoptState<f64>> = Vec::new();
    let maxent = maximally_entangled_state::<f64>(3);
    inputs.push({
        let s = certify_popt(&maxent, &cfg, &mut r).unwrap();
        assert!(s.is_certified());
        s
    });
    while inputs.len() < 21 {
        let op = if inputs.len() % 2 == 0 {
            random_density::<f64, _>(&[3, 3], &mut r)
        } else {
            random_pure_state::<f64, _>(&[3, 3], &mut r).partial_transpose(1).unwrap()
        };
        if schmidt_nonproduct_ratio(&op).unwrap() <= 1e-6 {
            continue;
        }
        let s = certify_popt(&op, &cfg, &mut r).unwrap();
        assert!(s.is_certified());
        inputs.push(s);
    }
    let mut worst_marginal = 0.0f64;
    for (k, state) in inputs.iter().enumerate() {
        let witness = monogamy_witness(state).unwrap();
        assert!(
            witness.trace.marginal_error <= 1e-12,
            "FAIL criterion 8: instance {k} marginal error {:.3e}",
            witness.trace.marginal_error
        );
        worst_marginal = worst_marginal.max(witness.trace.marginal_error);
        let r_yz = certify_popt(&witness.rho_yz, &cfg, &mut r).unwrap();
        assert!(r_yz.is_certified(), "instance {k}: witness failed to certify");
        let verdict =
            check_extendibility_obstruction(state, &r_yz, &cfg, 1e-8, &mut r).unwrap();
        assert!(
            matches!(verdict, ExtendibilityVerdict::NotExtendibleCertified { .. }),
            "FAIL criterion 8: instance {k} verdict {}",
            verdict.kind()
        );
        let contrast = classical_contrast(state, &r_yz, 1e-9).unwrap();
        assert!(
            matches!(contrast.outcome, ClassicalExtension::Extension(_)),
            "FAIL criterion 8: instance {k} classical contrast did not extend"
        );
        // classical contrast marginals really match the diagonal valuations
        if let ClassicalExtension::Extension(triple) = &contrast.outcome {
            let sizes = [3usize, 3, 3];
            let xy = triple.marginal(&sizes, &[0, 1], "XY");
            let yz = triple.marginal(&sizes, &[1, 2], "YZ");
            assert!(xy.max_abs_diff(&contrast.p_xy) <= 1e-12);
            assert!(yz.max_abs_diff(&contrast.p_yz) <= 1e-12);
        }
    }
    println!(
        "PASS criterion 8: monogamy witness on 21 states, max marginal error \
         {worst_marginal:.3e}, all NOT_EXTENDIBLE_CERTIFIED with classical contrast EXTENDIBLE"
    );
}

/// Criterion 9: the constant-kernel chain over 4 qutrit factors is product
/// across every cut within 1e-10, and refute_correlating_extension
/// certifies the obstruction for the pure-entangled + witness pair.
#[test]
fn criterion_09_triviality_demonstration() {
    let mut r = rng(0x999);
    let cfg = PoptConfig::fast();
    let states: Vec<PoptState<f64>> = (0..4)
        .map(|_| {
            let op = random_density::<f64, _>(&[3], &mut r);
            let s = certify_popt(&op, &cfg, &mut r).unwrap();
            assert!(s.is_certified());
            s
        })
        .collect();
    let report = constant_kernel_chain(&states, None, &cfg, 1e-10, &mut r).unwrap();
    assert!(report.state.is_certified(), "FAIL criterion 9: chain state did not certify");
    let mut worst_cut = 0.0f64;
    for (k, dist) in &report.prefix_cuts {
        assert!(*dist <= 1e-10, "FAIL criterion 9: cut {k} distance {dist:.3e}");
        worst_cut = worst_cut.max(*dist);
    }
    for step in &report.steps {
        assert!(step.cut_distance <= 1e-10);
    }

    let maxent = certify_popt(&maximally_entangled_state::<f64>(3), &cfg, &mut r).unwrap();
    let witness = monogamy_witness(&maxent).unwrap();
    let claimed = certify_popt(&witness.rho_yz, &cfg, &mut r).unwrap();
    let refutation =
        refute_correlating_extension(&maxent, &claimed, &cfg, 1e-8, &mut r).unwrap();
    assert!(
        refutation.obstruction_certified(),
        "FAIL criterion 9: obstruction verdict {}",
        refutation.verdict.kind()
    );
    println!(
        "PASS criterion 9: triviality demonstration, worst cut distance {worst_cut:.3e}, \
         correlating extension refuted"
    );
}

// -- criterion 10: CLI determinism -------------------------------------------

struct CliRun {
    stdout: Vec<u8>,
    status: Option<i32>,
    outputs: Vec<(String, Vec<u8>)>,
}

fn run_cli(dir: &std::path::Path, args: &[&str], output_files: &[&str]) -> CliRun {
    let exe = env!("CARGO_BIN_EXE_toposq");
    let out = Command::new(exe)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    let outputs = output_files
        .iter()
        .map(|f| {
            let bytes = std::fs::read(dir.join(f)).unwrap_or_default();
            (f.to_string(), bytes)
        })
        .collect();
    CliRun { stdout: out.stdout, status: out.status.code(), outputs }
}

fn assert_deterministic(dir: &std::path::Path, args: &[&str], outputs: &[&str], expect: i32) {
    let first = run_cli(dir, args, outputs);
    assert_eq!(first.status, Some(expect), "exit code for {args:?}");
    assert!(!first.stdout.is_empty(), "no report printed for {args:?}");
    let second = run_cli(dir, args, outputs);
    assert_eq!(first.stdout, second.stdout, "stdout differs between reruns of {args:?}");
    for ((name, a), (_, b)) in first.outputs.iter().zip(&second.outputs) {
        assert_eq!(a, b, "output file {name} differs between reruns of {args:?}");
    }
}

/// Criterion 10: each acceptance command re-run with the same seed produces
/// byte-identical reports (stdout and written files).
#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    assert_deterministic(d, &["make", "--pt-maxent", "3", "--out", "pt.json"], &["pt.json"], 0);
    assert_deterministic(
        d,
        &["certify", "--input", "pt.json", "--seed", "7", "--out", "certify.json"],
        &["certify.json"],
        0,
    );
    assert_deterministic(d, &["make", "--violator", "3", "--out", "bad.json"], &["bad.json"], 0);
    assert_deterministic(d, &["certify", "--input", "bad.json", "--seed", "7"], &[], 2);

    assert_deterministic(
        d,
        &["make", "--random-density", "3,3", "--seed", "42", "--out", "rho.json"],
        &["rho.json"],
        0,
    );
    assert_deterministic(
        d,
        &["make", "--tabulate", "rho.json", "--out", "vals.json"],
        &["vals.json"],
        0,
    );
    assert_deterministic(
        d,
        &["reconstruct", "--values", "vals.json", "--out", "back.json"],
        &["back.json"],
        0,
    );

    let spec = r#"{ "initial_label": "X1", "initial_weights": [0.25, 0.75],
  "kernels": [ { "label": "X2", "rows": [[0.5, 0.5], [0.1, 0.9]] },
               { "label": "X3", "rows": [[1.0, 0.0], [0.3, 0.7]] } ] }
"#;
    std::fs::write(d.join("chain.json"), spec).unwrap();
    assert_deterministic(
        d,
        &[
            "markov",
            "--spec",
            "chain.json",
            "--check-lemmas",
            "--seed",
            "3",
            "--instances",
            "50",
        ],
        &[],
        0,
    );

    assert_deterministic(d, &["make", "--maxent", "3", "--out", "me.json"], &["me.json"], 0);
    assert_deterministic(
        d,
        &["monogamy", "witness", "--input", "me.json", "--seed", "11", "--out", "wit.json"],
        &["wit.json"],
        0,
    );
    assert_deterministic(
        d,
        &[
            "monogamy",
            "obstruct",
            "--input",
            "me.json",
            "--pair",
            "wit.json",
            "--seed",
            "12",
        ],
        &[],
        0,
    );
    assert_deterministic(
        d,
        &[
            "monogamy",
            "contrast",
            "--input",
            "me.json",
            "--pair",
            "wit.json",
            "--seed",
            "13",
        ],
        &[],
        0,
    );
    println!("PASS criterion 10: CLI determinism, byte-identical reports on rerun");
}

/// Exit codes partition outcomes (supporting check for the CLI contract).
#[test]
fn cli_exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // input error
    let run = run_cli(d, &["certify", "--input", "missing.json", "--seed", "1"], &[]);
    assert_eq!(run.status, Some(1));
    assert!(run.stdout.is_empty(), "failure must not print to the success stream");
    // malformed file
    std::fs::write(d.join("broken.json"), b"{ not json").unwrap();
    let run = run_cli(d, &["certify", "--input", "broken.json", "--seed", "1"], &[]);
    assert_eq!(run.status, Some(1));
    assert!(run.stdout.is_empty());
    // product input to witness: negative verdict
    let prod = serde_json::json!({
        "dims": [2, 2],
        "entries": (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| if r == c { [0.25, 0.0] } else { [0.0, 0.0] })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    });
    std::fs::write(d.join("prod.json"), serde_json::to_string(&prod).unwrap()).unwrap();
    let run = run_cli(d, &["monogamy", "witness", "--input", "prod.json", "--seed", "1"], &[]);
    assert_eq!(run.status, Some(2));
    // corrupted reconstruction value: inconsistency error, exit 1
    let mk = run_cli(
        d,
        &["make", "--random-density", "3,3", "--seed", "9", "--out", "r.json"],
        &[],
    );
    assert_eq!(mk.status, Some(0));
    let tab = run_cli(d, &["make", "--tabulate", "r.json", "--out", "v.json"], &[]);
    assert_eq!(tab.status, Some(0));
    let mut table: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("v.json")).unwrap()).unwrap();
    // duplicate record 0 with a skewed value so the system is inconsistent
    let mut dup = table["records"][0].clone();
    dup["value"] = serde_json::json!(dup["value"].as_f64().unwrap() + 0.25);
    table["records"].as_array_mut().unwrap().push(dup);
    std::fs::write(d.join("v.json"), serde_json::to_string(&table).unwrap()).unwrap();
    let run = run_cli(d, &["reconstruct", "--values", "v.json", "--out", "b.json"], &[]);
    assert_eq!(run.status, Some(1));
    assert!(run.stdout.is_empty());
}
