use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use conic_certify::instances::{default_m, fixture, generate, FaceProfile};
use conic_certify::ConeSpec;
use conic_certify_cli::{
    certify_cmd, configure_threads, load_instance, output, read_point, selftest, simulate, sweep,
    write_csv,
};

#[derive(Parser)]
#[command(
    name = "conic-certify",
    version,
    about = "Error-bound and sensitivity certificates for conic programs",
    after_help = "Set CONIC_CERTIFY_THREADS to cap the worker pool.\n\
                  CSV outputs start with `# key = value` metadata lines, then a header row."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a planted instance (or a built-in fixture) to a file.
    Generate {
        /// Cone, e.g. `nn:20`, `soc:9`, `psd:6`, `nn:4+soc:3+psd:3`.
        /// Ignored when --fixture is given.
        #[arg(long, default_value = "nn:10")]
        cone: String,
        /// Number of equality constraints; defaults to max(dim/2, dim V).
        #[arg(long)]
        m: Option<usize>,
        /// `default`, or per block: zero | interior | boundary | boundary:<k>.
        #[arg(long, default_value = "default")]
        profile: String,
        /// Built-in fixture instead of a random instance: z2:<n>, toy-lp, toy-soc.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a point against an instance's planted solution.
    ///
    /// Output: one CSV row with columns eps_opt, lin_infeas_norm,
    /// conic_infeas_norm, comp_error, f_value, gamma, kappa, sigma_max,
    /// sigma_min_v, singleton, exponent, upper_bound, erb_bound, lower_bound,
    /// conic_bound, dist, c1_estimate, norm_bound, dsc_pass, sc_pass,
    /// sc_complete, notes. Missing values print as `nan`.
    ///
    /// Exit status: 0 certified, 2 non-constructive (solution set not a
    /// singleton), 3 dual strict complementarity fails, 1 on error.
    Certify {
        /// Instance file or fixture name.
        #[arg(long)]
        instance: String,
        /// File of whitespace- or comma-separated coordinates; x* when absent.
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        norm_bound: Option<f64>,
        /// Face identification and complementarity threshold.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random feasible points near x*, certified.
    ///
    /// Columns: instance, trial, eps_opt, dist, bound, upper_bound,
    /// lower_bound, conic_bound, f_value, lin_residual, cone_margin, flags.
    /// `bound` is kappa f + gamma |Ax-b| + kappa |P_Vperp(x-)|; `upper_bound`
    /// uses |P_Vperp(x+)| in place of f; `lower_bound` is |P_Vperp(x)|.
    Simulate {
        /// Instance file or fixture name; repeatable.
        #[arg(long, required = true)]
        instance: Vec<String>,
        #[arg(long, default_value_t = 70)]
        count: usize,
        /// Perturbation radius; 0.5 |x*| per instance when absent.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Face identification threshold.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve perturbed problems along one direction at decreasing scales.
    ///
    /// Columns: scale, delta_norm, lin_bound, opt_bound, measured_eps_opt,
    /// measured_lin, dist, dist_pow, ssb_rhs, alpha, flags. `dist_pow` is
    /// |x*' - x*|^p with p the error-bound exponent; `ssb_rhs` bounds it.
    PerturbSweep {
        #[arg(long)]
        instance: String,
        /// Comma-separated scales.
        #[arg(long, value_delimiter = ',', default_values_t = sweep::DEFAULT_SCALES.to_vec())]
        scales: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        norm_bound: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in fixtures with known answers.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_TOL)]
        tol: f64,
    },
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate {
            cone,
            m,
            profile,
            fixture: name,
            seed,
            out,
        } => {
            let bundle = match name {
                Some(n) => fixture(&n)?.with_context(|| format!("unknown fixture `{n}`"))?,
                None => {
                    let spec: ConeSpec = cone.parse()?;
                    let profile: FaceProfile = profile.parse()?;
                    let m = match m {
                        Some(m) => m,
                        None => default_m(&spec, &profile)?,
                    };
                    generate(&spec, m, &profile, seed)?
                }
            };
            bundle.save(&out)?;
            eprintln!(
                "wrote {} (cone {}, m {})",
                out.display(),
                bundle.data.spec,
                bundle.data.m()
            );
            Ok(0)
        }
        Command::Certify {
            instance,
            point,
            norm_bound,
            tol,
            out,
        } => {
            let bundle = load_instance(&instance)?;
            let cfg = certify_cmd::CertifyConfig {
                point: point.as_deref().map(read_point).transpose()?,
                norm_bound,
                tol,
            };
            let outcome = certify_cmd::run(&bundle, &cfg)?;
            let meta = vec![
                ("command".to_string(), "certify".to_string()),
                ("instance".to_string(), instance),
            ];
            write_csv(
                output(out.as_deref())?,
                &meta,
                certify_cmd::FIELDS,
                [certify_cmd::record(&outcome.certificate)],
            )?;
            Ok(outcome.exit_code as u8)
        }
        Command::Simulate {
            instance,
            count,
            radius,
            seed,
            tol,
            out,
        } => {
            let bundles = instance
                .iter()
                .map(|i| Ok((i.clone(), load_instance(i)?)))
                .collect::<Result<Vec<_>>>()?;
            let mut cfg = simulate::SimulateConfig {
                count,
                radius,
                seed,
                ..Default::default()
            };
            if let Some(t) = tol {
                cfg.certify.face_tol = t;
            }
            let rows = simulate::run(&bundles, &cfg)?;
            write_csv(
                output(out.as_deref())?,
                &simulate::metadata(&bundles, &cfg),
                simulate::HEADER,
                rows.iter().map(|r| r.record()),
            )?;
            Ok(0)
        }
        Command::PerturbSweep {
            instance,
            scales,
            seed,
            norm_bound,
            out,
        } => {
            let bundle = load_instance(&instance)?;
            let cfg = sweep::SweepConfig {
                scales,
                seed,
                norm_bound,
                ..Default::default()
            };
            let rows = sweep::run(&bundle, &cfg)?;
            let mut meta = sweep::metadata(&instance, &bundle, &cfg);
            if let Some(s) = sweep::loglog_slope(&rows) {
                meta.push(("loglog_slope".to_string(), s.to_string()));
            }
            write_csv(
                output(out.as_deref())?,
                &meta,
                sweep::HEADER,
                rows.iter().map(|r| r.record()),
            )?;
            Ok(0)
        }
        Command::Selftest { tol } => {
            let results = selftest::run(tol);
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                failed += usize::from(!r.pass);
            }
            println!(
                "{}/{} fixtures passed",
                results.len() - failed,
                results.len()
            );
            Ok(u8::from(failed > 0))
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
