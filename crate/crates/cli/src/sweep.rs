//! Solution sensitivity under data perturbations of decreasing size.

use anyhow::Result;
use conic_certify::certify::{Certifier, CertifyOptions};
use conic_certify::instances::InstanceBundle;
use conic_certify::linalg;
use conic_certify::sensitivity::{sensitivity_report, Perturbation, SensitivityError};
use conic_certify::solve::{solve_conic, SolveError, SolveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{fmt_f, fmt_opt};

pub const HEADER: &[&str] = &[
    "scale",
    "delta_norm",
    "lin_bound",
    "opt_bound",
    "measured_eps_opt",
    "measured_lin",
    "dist",
    "dist_pow",
    "ssb_rhs",
    "alpha",
    "flags",
];

pub const DEFAULT_SCALES: &[f64] = &[1e-1, 1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scales: Vec<f64>,
    pub seed: u64,
    /// `B`; the instance's stored bound when absent.
    pub norm_bound: Option<f64>,
    pub solve: SolveOptions,
    pub certify: CertifyOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scales: DEFAULT_SCALES.to_vec(),
            seed: 0,
            norm_bound: None,
            solve: SolveOptions {
                max_iters: 200_000,
                primal_tol: 1e-11,
                dual_tol: 1e-11,
                gap_tol: 1e-11,
                ..SolveOptions::default()
            },
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scale: f64,
    pub delta_norm: f64,
    pub lin_bound: Option<f64>,
    pub opt_bound: Option<f64>,
    pub measured_eps_opt: f64,
    pub measured_lin: f64,
    pub dist: f64,
    /// `dist^{p′}`.
    pub dist_pow: f64,
    pub ssb_rhs: Option<f64>,
    pub alpha: Option<f64>,
    pub flags: Vec<String>,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            fmt_f(self.scale),
            fmt_f(self.delta_norm),
            fmt_opt(self.lin_bound),
            fmt_opt(self.opt_bound),
            fmt_f(self.measured_eps_opt),
            fmt_f(self.measured_lin),
            fmt_f(self.dist),
            fmt_f(self.dist_pow),
            fmt_opt(self.ssb_rhs),
            fmt_opt(self.alpha),
            if self.flags.is_empty() {
                "ok".to_string()
            } else {
                self.flags.join("|")
            },
        ]
    }
}

/// One fixed seeded direction `Δ` with `‖Δ‖ = 1`, applied at each scale.
/// The perturbed problem is solved with ADMM and compared to the bounds.
pub fn run(bundle: &InstanceBundle, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let certifier = Certifier::new(&bundle.data, &bundle.pair, cfg.certify)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let direction = Perturbation::random_unit(&bundle.data, &mut rng)?;
    let b = cfg.norm_bound.unwrap_or(bundle.witness.norm_bound);
    let p = certifier.exponent() as i32;
    cfg.scales
        .par_iter()
        .map(|&scale| {
            let pert = direction.scaled(scale);
            let mut flags = Vec::new();
            let x_prime = if scale == 0.0 {
                bundle.pair.x.clone()
            } else {
                match solve_conic(&pert.apply(&bundle.data)?, &cfg.solve) {
                    Ok(sol) => sol.x,
                    Err(SolveError::NoConvergence(sol)) => {
                        flags.push("solver_not_converged".to_string());
                        sol.x
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            let dist = linalg::norm(&linalg::sub(&x_prime, &bundle.pair.x));
            let measured_eps_opt =
                linalg::dot(&bundle.data.c, &x_prime) - linalg::dot(&bundle.data.c, &bundle.pair.x);
            let measured_lin = linalg::norm(&bundle.data.residual(&x_prime)?);
            let report = sensitivity_report(
                &certifier,
                &bundle.data,
                &bundle.pair,
                &pert,
                &bundle.witness,
                Some(&x_prime),
                Some(b),
            );
            let (lin_bound, opt_bound, ssb_rhs, alpha) = match report {
                Ok(r) => (
                    Some(r.bounds.lin_bound),
                    Some(r.bounds.opt_bound),
                    r.ssb_rhs,
                    Some(r.shift.alpha),
                ),
                Err(e) => match flag_for(&e) {
                    Some(f) => {
                        flags.push(f.to_string());
                        (None, None, None, None)
                    }
                    None => return Err(e.into()),
                },
            };
            Ok(SweepRow {
                scale,
                delta_norm: pert.norm,
                lin_bound,
                opt_bound,
                measured_eps_opt,
                measured_lin,
                dist,
                dist_pow: dist.powi(p),
                ssb_rhs,
                alpha,
                flags,
            })
        })
        .collect()
}

fn flag_for(e: &SensitivityError) -> Option<&'static str> {
    match e {
        SensitivityError::PerturbationTooLarge { .. } => Some("perturbation_too_large"),
        SensitivityError::NormBoundViolated { .. } => Some("norm_bound_violated"),
        SensitivityError::WitnessMargin { .. } => Some("witness_not_interior"),
        SensitivityError::NotInCone { .. } => Some("xhat_outside_cone"),
        SensitivityError::Infeasible { .. } => Some("xhat_infeasible"),
        _ => None,
    }
}

pub fn metadata(label: &str, bundle: &InstanceBundle, cfg: &SweepConfig) -> Vec<(String, String)> {
    vec![
        ("command".to_string(), "perturb-sweep".to_string()),
        (
            "instance".to_string(),
            format!("{label} (cone {})", bundle.data.spec),
        ),
        ("seed".to_string(), cfg.seed.to_string()),
        (
            "direction".to_string(),
            "Gaussian (dA, db, dc) normalized to |dA|_op + |db| + |dc| = 1".to_string(),
        ),
        (
            "norm_bound".to_string(),
            cfg.norm_bound
                .unwrap_or(bundle.witness.norm_bound)
                .to_string(),
        ),
    ]
}

/// Least-squares slope of `log dist` against `log scale` over rows with
/// positive scale and distance.
pub fn loglog_slope(rows: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.scale > 0.0 && r.dist > 0.0)
        .map(|r| (r.scale.ln(), r.dist.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(scale: f64, dist: f64) -> SweepRow {
        SweepRow {
            scale,
            delta_norm: scale,
            lin_bound: None,
            opt_bound: None,
            measured_eps_opt: 0.0,
            measured_lin: 0.0,
            dist,
            dist_pow: dist,
            ssb_rhs: None,
            alpha: None,
            flags: Vec::new(),
        }
    }

    #[test]
    fn slope_of_power_law() {
        let rows: Vec<_> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&s| row(s, 3.0 * s * s))
            .collect();
        assert!((loglog_slope(&rows).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&rows[..1]).is_none());
    }

    #[test]
    fn zero_scale_recovers_solution() {
        let b = conic_certify::instances::toy_lp();
        let cfg = SweepConfig {
            scales: vec![0.0],
            ..Default::default()
        };
        let r = &run(&b, &cfg).unwrap()[0];
        assert_eq!(r.dist, 0.0);
        assert!(r.ssb_rhs.unwrap() >= 0.0);
    }
}
