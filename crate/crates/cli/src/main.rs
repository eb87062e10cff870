//! Batch driver: every experiment is a subcommand that writes CSV/JSON
//! artifacts plus a run manifest into the output directory. Runs are
//! deterministic for a fixed seed; `SZEGO_LAB_THREADS` caps the worker pool
//! used for fan-out across independent parameter points.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};

mod util;

use szego_lab::arcs::{ArcSet, CircleArc};
use szego_lab::measures::{
    log_integral, moments, quadrature_resolving, LogIntegral, MeasureSpec, SpectralMeasure,
};
use szego_lab::periodicity::{
    certify_integer_word, detect_period, detect_period_extended, prediction_success_experiment,
    Predictor,
};
use szego_lab::processes::{sample_covariance, ProcessSpec, RealizationWindow};
use szego_lab::spectra::{estimate_spectrum_probes, probes_csv};
use szego_lab::szego::{
    errors_csv, levinson_predictor, prediction_errors_from_quadrature,
    prediction_errors_levinson,
};
use szego_lab::weight_bounds::{
    nazarov_trials, poisson_smoothing_constant, truncated_log_integral, Weight,
};
use szego_lab::{C64, TAU};

#[derive(Parser)]
#[command(name = "szego-lab", version, about = "spectral-measure experiments on the unit circle")]
struct Cli {
    /// Output directory for artifacts and the run manifest.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,

    /// Base seed for every random draw in the run.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments r(m) of a measure, written as CSV.
    Moments {
        /// Builtin name (lebesgue, exp_root:<beta>, arc:<center>:<half_width>)
        /// or path to a measure spec JSON file.
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 16)]
        max_lag: usize,
    },
    /// Prediction errors e_n with reflection coefficients, written as CSV.
    SzegoErrors {
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// moment: Levinson recursion on r(m); quadrature: recursion on
        /// measure values (stable for deep decay).
        #[arg(long, default_value = "moment")]
        route: String,
    },
    /// Generate a realization of a process spec (JSON file) as CSV.
    Simulate {
        #[arg(long)]
        process: PathBuf,
        #[arg(long, default_value_t = 1024)]
        length: usize,
    },
    /// Estimate the spectrum of a sequence (CSV of n,re,im).
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Extend a finite-alphabet sequence by delta-prediction.
    Predict {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated real alphabet values, e.g. "0,1,2".
        #[arg(long)]
        alphabet: String,
        /// Predictor degree; the predictor is fit from the sample covariance.
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        /// Optional gap-predictor JSON file (overrides --degree).
        #[arg(long)]
        predictor: Option<PathBuf>,
    },
    /// Scan a sequence for its minimal period.
    DetectPeriod {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Extension steps before scanning (0 scans the raw window).
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long)]
        predictor: Option<PathBuf>,
    },
    /// Prediction-success statistics for a periodic word.
    Theorem42 {
        /// Comma-separated real word, e.g. "1,1,0,1,0,0".
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 6)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },
    /// Exact integer certification of a word's minimal period.
    Cyclotomic {
        /// Comma-separated integer word, e.g. "1,-1,0".
        #[arg(long)]
        word: String,
    },
    /// Prediction errors, lower-bound product and truncation bound for the
    /// exponential-root measure.
    ThetaSweep {
        #[arg(long, default_value_t = TAU)]
        beta: f64,
        #[arg(long, default_value_t = 256)]
        nmax: usize,
    },
    /// Trial-level Nazarov ratio exponents.
    Nazarov {
        #[arg(long, default_value_t = 16)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Arc length of the majority set E (must keep m(E) >= 1/3).
        #[arg(long, default_value_t = TAU / 1.5)]
        arc_length: f64,
        #[arg(long, default_value_t = false)]
        adversarial: bool,
    },
    /// Run the full acceptance suite and write its artifact bundle.
    VerifyAll,
}

fn main() {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match run(cli, &argv) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn parse_measure(spec: &str) -> Result<SpectralMeasure> {
    if let Some(rest) = spec.strip_prefix("exp_root:") {
        let beta: f64 = rest.parse().context("exp_root beta")?;
        return Ok(SpectralMeasure::exp_root(beta));
    }
    if spec == "lebesgue" {
        return Ok(SpectralMeasure::lebesgue());
    }
    if let Some(rest) = spec.strip_prefix("arc:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            bail!("arc measure wants arc:<center>:<half_width>");
        }
        let center: f64 = parts[0].parse().context("arc center")?;
        let half: f64 = parts[1].parse().context("arc half width")?;
        return Ok(SpectralMeasure::uniform_on_arc(CircleArc::centered(center, half)?));
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading measure spec {spec}"))?;
    Ok(MeasureSpec::parse(&text)?)
}

fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number '{s}'")))
        .collect()
}

fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().with_context(|| format!("bad integer '{s}'")))
        .collect()
}

fn load_window(path: &Path, alphabet: Option<Vec<C64>>) -> Result<RealizationWindow> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(RealizationWindow::from_csv(&text, alphabet)?)
}

fn run(cli: Cli, argv: &[String]) -> Result<i32> {
    let out = &cli.out;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let started = std::time::Instant::now();
    let seed = cli.seed;
    let mut artifacts: Vec<(String, String)> = Vec::new();
    let mut exit = 0;

    let command_name = match &cli.command {
        Command::Moments { measure, max_lag } => {
            let m = parse_measure(measure)?;
            let r = moments(&m, *max_lag)?;
            let mut csv = String::from("m,re,im\n");
            for lag in 0..=*max_lag {
                let v = r.at(lag as i64);
                csv.push_str(&format!("{lag},{:.17e},{:.17e}\n", v.re, v.im));
            }
            let li = match log_integral(&m) {
                LogIntegral::Finite(v) => format!("{v:.12e}"),
                LogIntegral::NegInfinity => "-inf".to_string(),
            };
            artifacts.push(("moments.csv".into(), csv));
            artifacts.push((
                "measure_summary.json".into(),
                format!(
                    "{{\"total_mass\":{:.12e},\"log_integral\":\"{li}\",\"psd\":{}}}\n",
                    r.total_mass(),
                    r.is_toeplitz_psd(1e-10)
                ),
            ));
            "moments"
        }
        Command::SzegoErrors { measure, n, route } => {
            let m = parse_measure(measure)?;
            let seq = match route.as_str() {
                "moment" => {
                    let r = moments(&m, *n)?;
                    prediction_errors_levinson(&r, *n)?
                }
                "quadrature" => {
                    let rule = quadrature_resolving(&m, 2 * n + 8)?;
                    prediction_errors_from_quadrature(&rule, *n)
                }
                other => bail!("unknown route '{other}' (moment|quadrature)"),
            };
            artifacts.push(("szego_errors.csv".into(), errors_csv(&seq)));
            "szego-errors"
        }
        Command::Simulate { process, length } => {
            let text = std::fs::read_to_string(process)
                .with_context(|| format!("reading {}", process.display()))?;
            let spec: ProcessSpec = serde_json::from_str(&text).context("process spec")?;
            let window = spec.generate(*length, seed)?;
            artifacts.push(("realization.csv".into(), window.to_csv()));
            "simulate"
        }
        Command::Spectrum { input, resolution } => {
            let window = load_window(input, None)?;
            let (sigma, probes) = estimate_spectrum_probes(&window, *resolution)?;
            artifacts.push(("spectrum_probes.csv".into(), probes_csv(&probes)));
            artifacts.push((
                "spectrum_arcs.json".into(),
                serde_json::to_string_pretty(&sigma.to_angle_pairs())? + "\n",
            ));
            "spectrum"
        }
        Command::Predict { input, alphabet, degree, steps, predictor } => {
            let alphabet: Vec<C64> =
                parse_real_list(alphabet)?.into_iter().map(|v| C64::new(v, 0.0)).collect();
            let window = load_window(input, Some(alphabet))?;
            let gap;
            let szego;
            let chosen = match predictor {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let file: szego_lab::arc_polys::GapPredictorFile =
                        serde_json::from_str(&text).context("predictor file")?;
                    gap = szego_lab::arc_polys::GapPredictor::from_file(&file)?;
                    Predictor::Gap(&gap)
                }
                None => {
                    let r = sample_covariance(&window, *degree)?;
                    szego = levinson_predictor(&r, *degree)?;
                    Predictor::Szego(&szego)
                }
            };
            let ext = szego_lab::periodicity::predict_extend(&window, chosen, *steps)?;
            artifacts.push(("extended.csv".into(), ext.window.to_csv()));
            let mut res = String::from("direction,step,residual\n");
            for (i, r) in ext.forward_residuals.iter().enumerate() {
                res.push_str(&format!("forward,{i},{r:.12e}\n"));
            }
            for (i, r) in ext.backward_residuals.iter().enumerate() {
                res.push_str(&format!("backward,{i},{r:.12e}\n"));
            }
            artifacts.push(("residuals.csv".into(), res));
            "predict"
        }
        Command::DetectPeriod { input, alphabet, degree, steps, predictor } => {
            let alphabet: Vec<C64> =
                parse_real_list(alphabet)?.into_iter().map(|v| C64::new(v, 0.0)).collect();
            let window = load_window(input, Some(alphabet))?;
            let report = if *steps == 0 && predictor.is_none() {
                detect_period(&window, *degree)?
            } else {
                let gap;
                let szego;
                let chosen = match predictor {
                    Some(path) => {
                        let text = std::fs::read_to_string(path)?;
                        let file: szego_lab::arc_polys::GapPredictorFile =
                            serde_json::from_str(&text).context("predictor file")?;
                        gap = szego_lab::arc_polys::GapPredictor::from_file(&file)?;
                        Predictor::Gap(&gap)
                    }
                    None => {
                        let r = sample_covariance(&window, *degree)?;
                        szego = levinson_predictor(&r, *degree)?;
                        Predictor::Szego(&szego)
                    }
                };
                detect_period_extended(&window, chosen, (*steps).max(1))?
            };
            if report.period.is_none() {
                exit = 2;
            }
            artifacts
                .push(("period_report.json".into(), serde_json::to_string_pretty(&report)? + "\n"));
            "detect-period"
        }
        Command::Theorem42 { word, n_min, n_max, trials, steps } => {
            let word: Vec<C64> =
                parse_real_list(word)?.into_iter().map(|v| C64::new(v, 0.0)).collect();
            if n_min > n_max {
                bail!("n_min must not exceed n_max");
            }
            // independent degrees fan out to the worker pool
            let degrees: Vec<usize> = (*n_min..=*n_max).collect();
            let rows = util::fan_out(degrees, |n| {
                prediction_success_experiment(&word, n..=n, *trials, *steps, seed)
                    .map(|mut v| v.pop().expect("single degree"))
            });
            let mut csv = String::from("degree,trials,successes,success_rate,bound,vacuous,tail_square_sum\n");
            for row in rows {
                let s = row?;
                csv.push_str(&format!(
                    "{},{},{},{:.6},{:.6},{},{:.12e}\n",
                    s.degree, s.trials, s.successes, s.success_rate, s.success_bound, s.vacuous as u8,
                    s.tail_square_sum
                ));
            }
            artifacts.push(("theorem42.csv".into(), csv));
            "theorem42"
        }
        Command::Cyclotomic { word } => {
            let word = parse_int_list(word)?;
            let (frac, cert) = certify_integer_word(&word)?;
            let coeffs = |p: &szego_lab::intpoly::IntPoly| -> Vec<String> {
                p.coeffs().iter().map(|c| c.to_string()).collect()
            };
            let body = serde_json::json!({
                "word": word,
                "numerator": coeffs(&frac.numerator),
                "denominator": coeffs(&frac.denominator),
                "cyclotomic_indices": cert.indices,
                "minimal_period": cert.minimal_period,
            });
            artifacts.push(("cyclotomic.json".into(), serde_json::to_string_pretty(&body)? + "\n"));
            "cyclotomic"
        }
        Command::ThetaSweep { beta, nmax } => {
            let decay = szego_lab::weight_bounds::exp_root_decay_exponent(*beta, *nmax)?;
            let measure = SpectralMeasure::exp_root(*beta);
            let mass = measure.total_mass();
            // single smoothing constant measured at a mid-range truncation
            let a_probe = 32.0f64.min(*nmax as f64);
            let m_emp = poisson_smoothing_constant(&Weight::ExpRoot, a_probe)?;
            // hypothesis constant of the upper bound: ∫ W^β dρ = 1 exactly
            // for the matched weight, computed here for the report
            let c_hyp = 1.0;
            let exponent = beta / TAU;
            // truncation for the upper bound: the largest admissible
            // A = sqrt(2Mn/β); the lower-bound product keeps A = n
            let mut csv = String::from("n,e_n,product,a_used,bound_a\n");
            for (n, e) in decay.errors.iter().enumerate().skip(1) {
                let a = (2.0 * m_emp * n as f64 / beta).sqrt().max(1.0 + 1e-6);
                let log_int = truncated_log_integral(&Weight::ExpRoot, a)?;
                let bound =
                    (2.0 * c_hyp + 0.5 * mass).sqrt() * (-(beta / (2.0 * m_emp)) * log_int).exp();
                csv.push_str(&format!(
                    "{n},{e:.12e},{:.12e},{a:.6},{bound:.12e}\n",
                    e * (n as f64).powf(exponent)
                ));
            }
            csv.push_str(&format!(
                "# fitted_exponent,{:.6}\n# m_emp,{:.6}\n",
                decay.fitted_exponent, m_emp
            ));
            artifacts.push(("theta_sweep.csv".into(), csv));
            "theta-sweep"
        }
        Command::Nazarov { degree, trials, arc_length, adversarial } => {
            let e = ArcSet::from_parts(
                vec![CircleArc::from_angles(0.0, *arc_length)?],
                vec![],
            );
            let values = nazarov_trials(*degree, &e, *trials, seed, *adversarial)?;
            let mut csv = String::from("trial,ratio_exponent\n");
            for (i, v) in values.iter().enumerate() {
                csv.push_str(&format!("{i},{v:.12e}\n"));
            }
            artifacts.push(("nazarov_trials.csv".into(), csv));
            "nazarov"
        }
        Command::VerifyAll => {
            let results = szego_lab::acceptance::all_criteria(seed);
            let mut report = String::new();
            for r in &results {
                println!("{}", r.line());
                report.push_str(&r.stable_line());
                report.push('\n');
                if !r.passed {
                    exit = 3;
                }
            }
            artifacts.push(("verify_report.txt".into(), report));
            for (name, body) in szego_lab::acceptance::artifact_bundle(seed) {
                artifacts.push((name, body));
            }
            "verify-all"
        }
    };

    for (name, body) in &artifacts {
        std::fs::write(out.join(name), body)
            .with_context(|| format!("writing artifact {name}"))?;
    }
    let manifest = serde_json::json!({
        "command": command_name,
        "config_hash": format!("{:016x}", util::fnv1a(argv.join("\u{1f}").as_bytes())),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "artifacts": artifacts.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "wall_ms": started.elapsed().as_millis() as u64,
    });
    std::fs::write(out.join("run_manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(exit)
}
