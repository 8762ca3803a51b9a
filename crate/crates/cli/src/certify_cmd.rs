use anyhow::{bail, Result};
use conic_certify::certify::{Certificate, Certifier, CertifyOptions};
use conic_certify::instances::InstanceBundle;

use crate::{fmt_f, fmt_opt};

/// Exit status when the dual strict complementarity check fails.
pub const EXIT_DSC_FAIL: i32 = 3;
/// Exit status for certificates without numeric bounds.
pub const EXIT_NON_CONSTRUCTIVE: i32 = 2;

/// Column order of the certificate record.
pub const FIELDS: &[&str] = &[
    "eps_opt",
    "lin_infeas_norm",
    "conic_infeas_norm",
    "comp_error",
    "f_value",
    "gamma",
    "kappa",
    "sigma_max",
    "sigma_min_v",
    "singleton",
    "exponent",
    "upper_bound",
    "erb_bound",
    "lower_bound",
    "conic_bound",
    "dist",
    "c1_estimate",
    "norm_bound",
    "dsc_pass",
    "sc_pass",
    "sc_complete",
    "notes",
];

#[derive(Debug, Clone, Default)]
pub struct CertifyConfig {
    /// Candidate point; the planted `x⋆` when absent.
    pub point: Option<Vec<f64>>,
    pub norm_bound: Option<f64>,
    /// Overrides the face and strict-complementarity thresholds.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CertifyOutcome {
    pub certificate: Certificate,
    pub exit_code: i32,
}

pub fn run(bundle: &InstanceBundle, cfg: &CertifyConfig) -> Result<CertifyOutcome> {
    let mut opts = CertifyOptions {
        norm_bound: cfg.norm_bound,
        ..CertifyOptions::default()
    };
    if let Some(t) = cfg.tol {
        opts.face_tol = t;
        opts.sc_tol = t;
    }
    let x = cfg.point.as_deref().unwrap_or(&bundle.pair.x);
    if x.len() != bundle.data.dim() {
        bail!(
            "point has {} coordinates, instance needs {}",
            x.len(),
            bundle.data.dim()
        );
    }
    let certificate = Certifier::new(&bundle.data, &bundle.pair, opts)?.certify(x)?;
    let exit_code = if !certificate.dsc.pass {
        EXIT_DSC_FAIL
    } else if !certificate.singleton {
        EXIT_NON_CONSTRUCTIVE
    } else {
        0
    };
    Ok(CertifyOutcome {
        certificate,
        exit_code,
    })
}

/// Values in [`FIELDS`] order.
pub fn record(c: &Certificate) -> Vec<String> {
    let m = &c.metrics;
    vec![
        fmt_f(m.eps_opt),
        fmt_f(m.lin_infeas_norm),
        fmt_f(m.conic_infeas_norm),
        fmt_f(m.comp_error),
        fmt_f(c.f_value),
        fmt_opt(c.gamma),
        fmt_opt(c.kappa),
        fmt_f(c.sigma_max),
        fmt_f(c.sigma_min_v),
        c.singleton.to_string(),
        c.exponent.to_string(),
        fmt_opt(c.upper_bound),
        fmt_opt(c.erb_bound),
        fmt_f(c.lower_bound),
        fmt_opt(c.conic_bound),
        fmt_opt(c.distance),
        fmt_opt(c.c1_estimate),
        fmt_opt(c.norm_bound),
        c.dsc.pass.to_string(),
        c.sc.pass.to_string(),
        c.sc.complete.to_string(),
        c.notes.join("; "),
    ]
}
