//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 after reporting; pass `--strict` to exit 1 when any criterion
//! fails (`cargo test --test acceptance -- --strict`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use csfq::analytic::{self, MatrixElements};
use csfq::cqed::{self, DispersiveSet};
use csfq::decoherence::{
    decay_envelope, flux_dephasing_rates, nqp_from_xqp, qp_relaxation_rate, ramsey_echo_ratio, thermal_dephasing_rate,
    thermal_photon_population, EnvelopeShape, FluxNoise, QuasiparticleEnv,
};
use csfq::filters::{filter_function, FilterSpec};
use csfq::fit::{self, DataSeries, FitResult};
use csfq::numeric::{
    build_hamiltonian_1d, lowest_eigenpairs, numeric_matrix_element, solve_2d, GridSpec, LanczosOptions,
    MatrixElementKind, DEFAULT_STATES,
};
use csfq::{FluxBias, QubitParams};

type Check = Result<Vec<String>, Vec<String>>;
type Criterion = (&'static str, fn() -> Check);

struct Checks {
    lines: Vec<String>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            lines: Vec::new(),
            ok: true,
        }
    }

    fn check(&mut self, pass: bool, line: String) {
        self.ok &= pass;
        self.lines.push(format!("{} {line}", if pass { "ok  " } else { "MISS" }));
    }

    fn within(&mut self, what: &str, value: f64, lo: f64, hi: f64) {
        self.check(value >= lo && value <= hi, format!("{what} = {value:.6} in [{lo}, {hi}]"));
    }

    fn relative(&mut self, what: &str, value: f64, target: f64, tol: f64) {
        let err = (value / target - 1.0).abs();
        self.check(err <= tol, format!("{what} = {value:.6e}, target {target:.6e}, rel err {err:.2e} <= {tol:.0e}"));
    }

    fn done(self) -> Check {
        if self.ok {
            Ok(self.lines)
        } else {
            Err(self.lines)
        }
    }
}

fn perturbative_qubit() -> QubitParams {
    QubitParams::new(0.41, 85.0, 3.2, 78.0).unwrap()
}

fn two_d_qubit() -> QubitParams {
    QubitParams::new(0.437, 136.75, 3.2, 60.0).unwrap()
}

fn c1_perturbative_spectrum() -> Check {
    let mut c = Checks::new();
    let q = perturbative_qubit();
    c.relative("E_CS [GHz]", q.e_cs(), 0.2483, 1e-3);
    c.within("gap [GHz]", analytic::gap(&q), 4.63, 4.73);
    c.within("anharmonicity [GHz]", analytic::anharmonicity(&q), 0.76, 0.81);
    c.done()
}

fn c2_full_diagonalization() -> Check {
    let mut c = Checks::new();
    let q = two_d_qubit();
    let s80 = solve_2d(&q, FluxBias::OPTIMAL, GridSpec::new(80).unwrap(), DEFAULT_STATES).map_err(|e| vec![e.to_string()])?;
    let s120 =
        solve_2d(&q, FluxBias::OPTIMAL, GridSpec::new(120).unwrap(), DEFAULT_STATES).map_err(|e| vec![e.to_string()])?;
    c.relative("omega01 (80x80) [GHz]", s80.omega01, 4.68, 0.02);
    c.relative("anharmonicity (80x80) [GHz]", s80.anharmonicity, 0.78, 0.10);
    c.relative("omega01 n=120 vs n=80", s120.omega01, s80.omega01, 1e-3);
    c.done()
}

fn c3_dispersive() -> Check {
    let mut c = Checks::new();
    let d = cqed::extract_couplings(4.68, 5.46, 8.2175, 8.219, 0.892).map_err(|e| vec![e.to_string()])?;
    c.within("g01 [MHz]", d.g01, 72.0, 74.0);
    c.within("g12 [MHz]", d.g12, 114.0, 116.0);
    let fwd = DispersiveSet::from_couplings(d.g01, d.g12, 4.68, 5.46, 8.2175).map_err(|e| vec![e.to_string()])?;
    c.relative("forward 2chi [MHz]", 2.0 * fwd.chi, 1.8, 0.03);
    c.done()
}

fn c4_matrix_elements() -> Check {
    let mut c = Checks::new();
    let q = perturbative_qubit();
    let m = analytic::junction_matrix_elements(&q);
    c.within("analytic large", m.large, 0.12, 0.14);
    c.within("analytic small", m.small, 0.025, 0.035);
    let h = build_hamiltonian_1d(&q, GridSpec::default());
    let r = lowest_eigenpairs(&h, 4, &LanczosOptions::default()).map_err(|e| vec![e.to_string()])?;
    let large = numeric_matrix_element(&h, &r, MatrixElementKind::SinHalfPhiM, (0, 1)).unwrap();
    let small = numeric_matrix_element(&h, &r, MatrixElementKind::CosPhiM, (0, 1)).unwrap();
    c.relative("numeric 1D sin(phi_m/2) vs analytic", large, m.large, 0.10);
    c.relative("numeric 1D cos(phi_m) vs analytic", small, m.small, 0.10);
    c.done()
}

fn c5_quasiparticles() -> Check {
    let mut c = Checks::new();
    let q = perturbative_qubit();
    let m = analytic::junction_matrix_elements(&q);
    let env = QuasiparticleEnv::from_nqp(0.6).unwrap();
    c.relative("n_qp [um^-3]", nqp_from_xqp(&env), 0.6, 1e-12);
    let t1 = |t: f64| 1.0 / qp_relaxation_rate(&q, 4.68, &env, t, m).unwrap();
    c.within("T1(10 mK) [us]", t1(0.010) * 1e6, 60.0, 110.0);
    c.within("T1(150 mK) [us]", t1(0.150) * 1e6, 15.0, 30.0);

    let truth = QuasiparticleEnv::with_xqp(6e-8).unwrap();
    let temps = vec![0.01, 0.05, 0.1, 0.15, 0.2];
    let t1s = temps
        .iter()
        .map(|&t| 1.0 / qp_relaxation_rate(&q, 4.68, &truth, t, m).unwrap())
        .collect();
    let r = fit::fit_xqp(&DataSeries::new(temps, t1s).unwrap(), &q, 4.68, 200.0, m).map_err(|e| vec![e.to_string()])?;
    c.relative("fit_xqp round trip", r.get("x_qp").unwrap(), 6e-8, 0.05);
    c.done()
}

fn c6_thermal_photons() -> Check {
    let mut c = Checks::new();
    let nbar = thermal_photon_population(8.219, 0.050).unwrap();
    c.relative("nbar(8.219 GHz, 50 mK)", nbar, 3.75e-4, 0.02);
    let gamma = thermal_dephasing_rate(1.3, 0.892, nbar).unwrap();
    c.relative("T_phi_thermal [s]", 1.0 / gamma, 3e-3, 0.15);
    c.done()
}

fn c7_purcell() -> Check {
    let mut c = Checks::new();
    let t1p = cqed::purcell_t1(1.3, 73.0, 4.68, 8.219).map_err(|e| vec![e.to_string()])?;
    c.within("T1_Purcell [ms]", t1p * 1e3, 1.6 * 0.85, 1.6 * 1.25);
    c.done()
}

fn c8_flux_noise_ratio() -> Check {
    let mut c = Checks::new();
    let omega_ir = 2.0 * PI / 2.45;
    let ratio = ramsey_echo_ratio(omega_ir, 1e-6).unwrap();
    c.within("Gamma_R / Gamma_E", ratio, 4.30, 4.32);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let amp = Uniform::new(0.01f64, 10.0).unwrap();
    let slope = Uniform::new(-200.0f64, 200.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let noise = FluxNoise::new((amp.sample(&mut rng) * 1e-6).powi(2), omega_ir).unwrap();
        let r = flux_dephasing_rates(&noise, slope.sample(&mut rng), 1e-6).unwrap();
        if r.echo > 0.0 {
            worst = worst.max((r.ramsey / r.echo / ratio - 1.0).abs());
        }
    }
    c.check(worst < 1e-12, format!("ratio independent of A_phi and slope over 1000 draws (max dev {worst:.1e})"));
    c.done()
}

fn flux_noise_series(q: &QubitParams, a_micro: f64) -> DataSeries {
    let noise = FluxNoise::from_micro_phi0(a_micro).unwrap();
    let f: Vec<f64> = (0..41).map(|i| 0.48 + 0.001 * i as f64).collect();
    let g = f
        .iter()
        .map(|&f| {
            let d = analytic::domega01_df(q, FluxBias::new(f).unwrap());
            flux_dephasing_rates(&noise, d, 1e-6).unwrap().echo
        })
        .collect();
    DataSeries::new(f, g).unwrap()
}

fn c9_flux_noise_round_trip() -> Check {
    let mut c = Checks::new();
    let q = perturbative_qubit();
    let r = fit::fit_flux_noise(&flux_noise_series(&q, 1.8), &q, fit::DEFAULT_EXCLUSION_WINDOW)
        .map_err(|e| vec![e.to_string()])?;
    c.relative("A_phi [Phi0^2]", r.get("a_phi").unwrap(), 1.8e-6f64.powi(2), 0.01);
    c.done()
}

fn c10_filters() -> Check {
    let mut c = Checks::new();
    let tau = 1.0;
    let hahn = FilterSpec::hahn(tau, 0.0).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=10_000 {
        let x = 0.1 * 1000f64.powf(i as f64 / 10_000.0);
        let exact = 16.0 * (x / 4.0).sin().powi(4) / (x * x);
        worst = worst.max((filter_function(&hahn, x / tau) - exact).abs());
    }
    c.check(worst <= 1e-10, format!("Hahn vs 16 sin^4(wt/4)/(wt)^2 on [0.1, 100]: max abs err {worst:.1e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let logw = Uniform::new(-3.0f64, 4.0).unwrap();
    let mut min = f64::INFINITY;
    for n in [0usize, 1, 2, 3, 8, 20, 64] {
        for tau_pi in [0.0, 1e-3] {
            let spec = if n == 0 {
                FilterSpec::ramsey(tau).unwrap()
            } else {
                FilterSpec::cpmg(n, tau, tau_pi).unwrap()
            };
            for _ in 0..2000 {
                min = min.min(filter_function(&spec, 10f64.powf(logw.sample(&mut rng))));
            }
            min = min.min(filter_function(&spec, 0.0));
        }
    }
    c.check(min >= 0.0, format!("g_N >= 0 over random samples (min {min:.2e})"));

    let n = 20;
    let cpmg = FilterSpec::cpmg(n, tau, 0.0).unwrap();
    let target = PI * n as f64 / tau;
    let peak = (0..=20_000)
        .map(|i| target * (0.5 + i as f64 / 20_000.0))
        .map(|w| (w, filter_function(&cpmg, w)))
        .fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
        .0;
    c.relative("CPMG N=20 peak [rad/s]", peak, target, 0.05);
    c.done()
}

fn noisy(base: &DataSeries, sigma: f64, seed: u64) -> DataSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = Normal::new(0.0, sigma).unwrap();
    let y = base.y().iter().map(|v| v + n.sample(&mut rng)).collect();
    DataSeries::new(base.x().to_vec(), y).unwrap()
}

fn monotone(c: &mut Checks, name: &str, r: &FitResult) {
    let ok = r.cost_history.windows(2).all(|w| w[1] <= w[0]);
    c.check(ok, format!("{name}: LM cost non-increasing over {} accepted steps", r.cost_history.len() - 1));
}

fn c11_fit_suite() -> Check {
    let mut c = Checks::new();
    let e = |e: csfq::Error| vec![e.to_string()];

    // spectrum
    let q = perturbative_qubit();
    let f: Vec<f64> = (0..31).map(|i| 0.485 + 0.001 * i as f64).collect();
    let w = f.iter().map(|&f| analytic::omega01(&q, FluxBias::new(f).unwrap())).collect();
    let clean = DataSeries::new(f, w).unwrap();
    let a = analytic::anharmonicity(&q);
    let start = QubitParams::new(0.40, 80.0, 3.2, 72.0).unwrap();
    let r = fit::fit_spectrum(&clean, &start, Some(a)).map_err(e)?;
    for (name, truth) in [("alpha", 0.41), ("c_s_ff", 78.0), ("e_j_ghz", 85.0)] {
        c.relative(&format!("spectrum noiseless {name}"), r.get(name).unwrap(), truth, 0.005);
    }
    monotone(&mut c, "spectrum", &r);
    let r = fit::fit_spectrum(&noisy(&clean, 1e-3, 7), &start, Some(a)).map_err(e)?;
    for (name, truth) in [("alpha", 0.41), ("c_s_ff", 78.0), ("e_j_ghz", 85.0)] {
        c.relative(&format!("spectrum 1 MHz noise (seed 7) {name}"), r.get(name).unwrap(), truth, 0.02);
    }
    monotone(&mut c, "spectrum noisy", &r);

    // x_qp
    let m: MatrixElements = analytic::junction_matrix_elements(&q);
    let truth = QuasiparticleEnv::with_xqp(6e-8).unwrap();
    let temps = vec![0.01, 0.05, 0.1, 0.15, 0.2];
    let t1s = temps
        .iter()
        .map(|&t| 1.0 / qp_relaxation_rate(&q, 4.68, &truth, t, m).unwrap())
        .collect();
    let r = fit::fit_xqp(&DataSeries::new(temps, t1s).unwrap(), &q, 4.68, 200.0, m).map_err(e)?;
    c.relative("x_qp noiseless", r.get("x_qp").unwrap(), 6e-8, 0.005);

    // envelopes
    let t: Vec<f64> = (0..61).map(|i| i as f64 * 200e-6 / 60.0).collect();
    for (shape, gamma) in [(EnvelopeShape::Gaussian, 1.25e4), (EnvelopeShape::Exponential, 5e3)] {
        let y = t.iter().map(|&t| 0.8 * decay_envelope(t, 90e-6, gamma, shape) + 0.1).collect();
        let r = fit::fit_envelope(&DataSeries::new(t.clone(), y).unwrap(), 90e-6, shape).map_err(e)?;
        c.relative(&format!("envelope {} noiseless Gamma_phi", shape.name()), r.get("gamma_phi_per_s").unwrap(), gamma, 0.005);
        monotone(&mut c, &format!("envelope {}", shape.name()), &r);
    }

    // inversion recovery
    let y = t.iter().map(|&t| (-t / 90e-6).exp() + 0.05).collect();
    let clean = DataSeries::new(t.clone(), y).unwrap();
    let r = fit::fit_t1_exponential(&clean).map_err(e)?;
    c.relative("T1 noiseless", r.get("t1_s").unwrap(), 90e-6, 0.005);
    monotone(&mut c, "T1", &r);
    let r = fit::fit_t1_exponential(&noisy(&clean, 0.005, 11)).map_err(e)?;
    c.relative("T1 0.5% noise (seed 11)", r.get("t1_s").unwrap(), 90e-6, 0.01);

    // flux noise
    let r = fit::fit_flux_noise(&flux_noise_series(&q, 1.8), &q, fit::DEFAULT_EXCLUSION_WINDOW).map_err(e)?;
    c.relative("flux noise noiseless A_phi", r.get("a_phi").unwrap(), 3.24e-12, 0.005);
    c.done()
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn c12_determinism() -> Check {
    let mut c = Checks::new();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let tmp = tempfile::tempdir().unwrap();
    let base = fs::read_to_string(data.join("config.toml")).unwrap();
    let cfg = tmp.path().join("config.toml");
    fs::write(&cfg, base.replace("start = 0.49\nstop = 0.51\nsteps = 21", "points = [0.495, 0.5, 0.505]")).unwrap();
    let cfg = cfg.to_str().unwrap().to_string();
    let spectrum = data.join("spectrum_synthetic.csv").to_str().unwrap().to_string();
    let t1 = data.join("t1_vs_temperature.csv").to_str().unwrap().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["spectrum"],
        vec!["coherence"],
        vec!["filter"],
        vec!["fit", "spectrum", &spectrum],
        vec!["fit", "t1", &t1],
    ];
    for cmd in commands {
        let mut runs = Vec::new();
        for (i, workers) in ["1", "2"].iter().enumerate() {
            let out = tmp.path().join(format!("{}_{i}", cmd.join("_").replace('/', "")));
            let mut args = vec!["csfq", "--config", &cfg, "--workers", workers, "--out", out.to_str().unwrap()];
            args.extend(&cmd);
            let code = csfq::cli::run(args.iter().copied());
            if code != 0 {
                return Err(vec![format!("{} exited {code}", cmd[..cmd.len().min(2)].join(" "))]);
            }
            runs.push(dir_bytes(&out));
        }
        let name = cmd[..cmd.len().min(2)].join(" ");
        c.check(
            runs[0] == runs[1],
            format!("{name}: {} files bit-identical across reruns", runs[0].len()),
        );
    }
    c.done()
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    let criteria: [Criterion; 12] = [
        ("perturbative spectrum", c1_perturbative_spectrum),
        ("2D diagonalization", c2_full_diagonalization),
        ("dispersive self-consistency", c3_dispersive),
        ("matrix elements", c4_matrix_elements),
        ("quasiparticle channel", c5_quasiparticles),
        ("thermal-photon channel", c6_thermal_photons),
        ("Purcell", c7_purcell),
        ("flux-noise ratio", c8_flux_noise_ratio),
        ("flux-noise amplitude round trip", c9_flux_noise_round_trip),
        ("filter functions", c10_filters),
        ("fit suite", c11_fit_suite),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, lines) = match run() {
            Ok(l) => (true, l),
            Err(l) => (false, l),
        };
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {name} ({:.1?})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
        for l in lines {
            println!("       {l}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
