//! Random perturbations of a planted solution, projected back to the feasible
//! set and certified.

use anyhow::Result;
use conic_certify::certify::{Certifier, CertifyOptions};
use conic_certify::instances::InstanceBundle;
use conic_certify::linalg::{self, PseudoInverse};
use conic_certify::solve::{project_feasible_with, SolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::{derive_seed, fmt_f, fmt_opt};

pub const HEADER: &[&str] = &[
    "instance",
    "trial",
    "eps_opt",
    "dist",
    "bound",
    "upper_bound",
    "lower_bound",
    "conic_bound",
    "f_value",
    "lin_residual",
    "cone_margin",
    "flags",
];

#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub count: usize,
    /// Perturbation radius; `0.5 ‖x⋆‖` per instance when absent.
    pub radius: Option<f64>,
    pub seed: u64,
    pub solve: SolveOptions,
    pub certify: CertifyOptions,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            count: 70,
            radius: None,
            seed: 0,
            solve: SolveOptions::default(),
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub instance: String,
    pub trial: usize,
    pub eps_opt: f64,
    /// `‖x - x⋆‖`.
    pub dist: f64,
    /// `κ f + γ‖Ax-b‖ + κ‖P_{V⊥}(x₋)‖`.
    pub bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub lower_bound: f64,
    pub conic_bound: Option<f64>,
    pub f_value: f64,
    pub lin_residual: f64,
    pub cone_margin: f64,
    pub converged: bool,
    pub singleton: bool,
}

impl SimRow {
    pub fn flags(&self) -> String {
        let mut f = Vec::new();
        if !self.converged {
            f.push("projection_not_converged");
        }
        if !self.singleton {
            f.push("non_constructive");
        }
        if f.is_empty() {
            "ok".to_string()
        } else {
            f.join("|")
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.trial.to_string(),
            fmt_f(self.eps_opt),
            fmt_f(self.dist),
            fmt_opt(self.bound),
            fmt_opt(self.upper_bound),
            fmt_f(self.lower_bound),
            fmt_opt(self.conic_bound),
            fmt_f(self.f_value),
            fmt_f(self.lin_residual),
            fmt_f(self.cone_margin),
            self.flags(),
        ]
    }
}

pub fn radius_for(bundle: &InstanceBundle, cfg: &SimulateConfig) -> f64 {
    cfg.radius
        .unwrap_or_else(|| 0.5 * linalg::norm(&bundle.pair.x))
}

/// `count` trials per instance: `x′ = x⋆ + r ξ g/‖g‖` with `g` standard
/// normal and `ξ ~ U(0,1)`, then Dykstra projection and certification.
/// Rows come back ordered by instance, then trial.
pub fn run(instances: &[(String, InstanceBundle)], cfg: &SimulateConfig) -> Result<Vec<SimRow>> {
    let mut rows = Vec::with_capacity(instances.len() * cfg.count);
    for (idx, (label, bundle)) in instances.iter().enumerate() {
        let certifier = Certifier::new(&bundle.data, &bundle.pair, cfg.certify)?;
        let pinv = PseudoInverse::new(&bundle.data.a)?;
        let radius = radius_for(bundle, cfg);
        let dim = bundle.data.dim();
        let batch: Result<Vec<SimRow>> = (0..cfg.count)
            .into_par_iter()
            .map(|trial| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, idx as u64, trial as u64));
                let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let xi: f64 = rng.random();
                let ng = linalg::norm(&g);
                let start: Vec<f64> = bundle
                    .pair
                    .x
                    .iter()
                    .zip(&g)
                    .map(|(x, gi)| x + radius * xi * gi / ng)
                    .collect();
                let proj = project_feasible_with(&bundle.data, &pinv, &start, &cfg.solve)?;
                let cert = certifier.certify(&proj.x)?;
                Ok(SimRow {
                    instance: label.clone(),
                    trial,
                    eps_opt: cert.metrics.eps_opt,
                    dist: linalg::norm(&linalg::sub(&proj.x, &bundle.pair.x)),
                    bound: cert.erb_bound,
                    upper_bound: cert.upper_bound,
                    lower_bound: cert.lower_bound,
                    conic_bound: cert.conic_bound,
                    f_value: cert.f_value,
                    lin_residual: proj.lin_residual,
                    cone_margin: proj.cone_margin,
                    converged: proj.converged,
                    singleton: cert.singleton,
                })
            })
            .collect();
        rows.extend(batch?);
    }
    Ok(rows)
}

pub fn metadata(
    instances: &[(String, InstanceBundle)],
    cfg: &SimulateConfig,
) -> Vec<(String, String)> {
    let mut meta = vec![
        ("command".to_string(), "simulate".to_string()),
        ("seed".to_string(), cfg.seed.to_string()),
        ("count".to_string(), cfg.count.to_string()),
        (
            "perturbation".to_string(),
            "x_star + radius * U(0,1) * g/|g|, g ~ N(0,I); then Dykstra projection".to_string(),
        ),
    ];
    for (label, b) in instances {
        meta.push((
            format!("instance {label}"),
            format!(
                "cone {} m {} radius {}",
                b.data.spec,
                b.data.m(),
                radius_for(b, cfg)
            ),
        ));
    }
    meta
}
