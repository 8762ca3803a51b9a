//! Built-in fixtures with known answers.

use conic_certify::certify::{psd_complementarity, Certifier, CertifyOptions};
use conic_certify::instances::{default_m, generate, toy_lp, toy_soc, z2_instance, FaceProfile};
use conic_certify::linalg::{self, DenseMatrix};
use conic_certify::solve::{project_feasible, SolveOptions};
use conic_certify::ConeSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

struct Checker {
    tol: f64,
    failures: Vec<String>,
}

impl Checker {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            failures: Vec::new(),
        }
    }

    fn close(&mut self, what: &str, got: f64, want: f64) {
        if (got - want).abs() > self.tol * want.abs().max(1.0) {
            self.failures
                .push(format!("{what}: got {got}, want {want}"));
        }
    }

    fn le(&mut self, what: &str, lhs: f64, rhs: f64, scale: f64) {
        if lhs > rhs + self.tol * scale.max(1.0) {
            self.failures.push(format!("{what}: {lhs} > {rhs}"));
        }
    }

    fn finish(self, name: &'static str, ok_detail: String) -> FixtureResult {
        FixtureResult {
            name,
            pass: self.failures.is_empty(),
            detail: if self.failures.is_empty() {
                ok_detail
            } else {
                self.failures.join("; ")
            },
        }
    }
}

fn error(name: &'static str, e: impl std::fmt::Display) -> FixtureResult {
    FixtureResult {
        name,
        pass: false,
        detail: format!("error: {e}"),
    }
}

fn z2(tol: f64) -> FixtureResult {
    let mut ck = Checker::new(tol);
    for n in [4usize, 10] {
        let b = match z2_instance(n) {
            Ok(b) => b,
            Err(e) => return error("z2", e),
        };
        let cert = match Certifier::new(&b.data, &b.pair, CertifyOptions::default())
            .and_then(|c| c.certify(&b.witness.x0))
        {
            Ok(c) => c,
            Err(e) => return error("z2", e),
        };
        let nf = n as f64;
        ck.close(
            &format!("n={n} dist"),
            cert.distance.unwrap_or(f64::NAN),
            (nf * nf - nf).sqrt(),
        );
        ck.close(
            &format!("n={n} bound"),
            cert.upper_bound.unwrap_or(f64::NAN),
            (nf - 1.0).sqrt() + (nf * nf - nf).sqrt(),
        );
        ck.close(
            &format!("n={n} ratio"),
            cert.sigma_max / cert.sigma_min_v,
            nf.sqrt(),
        );
        if !cert.dsc.pass || !cert.sc.pass {
            ck.failures
                .push(format!("n={n} strict complementarity not detected"));
        }
    }
    ck.finish("z2", "n = 4, 10 match closed forms".to_string())
}

fn lp(tol: f64) -> FixtureResult {
    let mut ck = Checker::new(tol);
    let b = toy_lp();
    let certifier = match Certifier::new(&b.data, &b.pair, CertifyOptions::default()) {
        Ok(c) => c,
        Err(e) => return error("toy-lp", e),
    };
    let gk = *certifier.gamma_kappa();
    ck.close("gamma", gk.gamma.unwrap_or(f64::NAN), 1.0);
    ck.close("kappa", gk.kappa.unwrap_or(f64::NAN), 1.0 + 2f64.sqrt());
    for t in [0.1, 0.3, 0.9] {
        match certifier.certify(&[t, 1.0 - t]) {
            Ok(c) => {
                ck.close(&format!("t={t} eps_opt"), c.metrics.eps_opt, t);
                ck.close(
                    &format!("t={t} bound"),
                    c.upper_bound.unwrap_or(f64::NAN),
                    (1.0 + 2f64.sqrt()) * t,
                );
                ck.close(
                    &format!("t={t} dist"),
                    c.distance.unwrap_or(f64::NAN),
                    2f64.sqrt() * t,
                );
                ck.close(&format!("t={t} lower"), c.lower_bound, t);
            }
            Err(e) => return error("toy-lp", e),
        }
    }
    ck.finish("toy-lp", "bound (1+sqrt2) t, dist sqrt2 t".to_string())
}

fn soc(tol: f64) -> FixtureResult {
    let mut ck = Checker::new(tol);
    let b = toy_soc();
    let certifier = match Certifier::new(&b.data, &b.pair, CertifyOptions::default()) {
        Ok(c) => c,
        Err(e) => return error("toy-soc", e),
    };
    let gk = *certifier.gamma_kappa();
    ck.close("gamma", gk.gamma.unwrap_or(f64::NAN), 2f64.sqrt());
    ck.close("kappa", gk.kappa.unwrap_or(f64::NAN), 1.0 + 2f64.sqrt());
    match certifier.certify(&[1.0, 1.0]) {
        Ok(c) => {
            ck.close("comp_error", c.metrics.comp_error, 2.0);
            ck.close("f", c.f_value, (4.0 * 2f64.sqrt()).sqrt());
            ck.close("lower", c.lower_bound, 2f64.sqrt());
            ck.close("dist", c.distance.unwrap_or(f64::NAN), 2.0);
            ck.le("dist <= bound", 2.0, c.upper_bound.unwrap_or(f64::NAN), 1.0);
            if c.exponent != 2 {
                ck.failures.push(format!("exponent {}", c.exponent));
            }
        }
        Err(e) => return error("toy-soc", e),
    }
    ck.finish("toy-soc", "gamma sqrt2, f = sqrt(4 sqrt2)".to_string())
}

fn random_psd(rng: &mut ChaCha8Rng, n: usize, eigs: &[f64]) -> DenseMatrix {
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let q = linalg::orthonormalize(&cols);
    let mut m = DenseMatrix::zeros(n, n);
    for (k, &l) in eigs.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += l * q[k][i] * q[k][j];
            }
        }
    }
    m
}

/// Random PSD pairs for the two complementarity inequalities.
pub fn psd_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(DenseMatrix, DenseMatrix, usize)> {
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=8);
            let r = rng.random_range(1..n);
            let mut se: Vec<f64> = (0..n)
                .map(|k| {
                    if k < r {
                        rng.random_range(0.0..0.05)
                    } else {
                        rng.random_range(0.1..3.0)
                    }
                })
                .collect();
            se.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let xe: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.random::<f64>() < 0.5 {
                        0.0
                    } else {
                        rng.random_range(0.0..2.0)
                    }
                })
                .collect();
            (random_psd(rng, n, &xe), random_psd(rng, n, &se), r)
        })
        .collect()
}

fn psd_complementarity_pairs(tol: f64) -> FixtureResult {
    let mut ck = Checker::new(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (k, (x, s, r)) in psd_pairs(&mut rng, 200).into_iter().enumerate() {
        match psd_complementarity(&x, &s, r) {
            Ok(p) => {
                let scale = x.frobenius_norm();
                ck.le(
                    &format!("pair {k} frobenius"),
                    p.frobenius_lhs,
                    p.frobenius_rhs,
                    scale,
                );
                ck.le(
                    &format!("pair {k} nuclear"),
                    p.nuclear_lhs,
                    p.nuclear_rhs,
                    scale,
                );
            }
            Err(e) => return error("psd-complementarity", e),
        }
    }
    ck.finish("psd-complementarity", "200 random PSD pairs".to_string())
}

fn product(tol: f64) -> FixtureResult {
    let mut ck = Checker::new(tol);
    let spec: ConeSpec = "nn:3+soc:2+psd:3".parse().expect("valid spec");
    let profile = FaceProfile::default();
    let b = match default_m(&spec, &profile).and_then(|m| generate(&spec, m, &profile, 21)) {
        Ok(b) => b,
        Err(e) => return error("product", e),
    };
    let certifier = match Certifier::new(&b.data, &b.pair, CertifyOptions::default()) {
        Ok(c) => c,
        Err(e) => return error("product", e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..20 {
        let start: Vec<f64> = b
            .pair
            .x
            .iter()
            .map(|x| x + 0.3 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let proj = match project_feasible(&b.data, &start, &SolveOptions::default()) {
            Ok(p) => p,
            Err(e) => return error("product", e),
        };
        match certifier.certify(&proj.x) {
            Ok(c) => {
                let dist = c.distance.unwrap_or(f64::NAN);
                ck.le(
                    &format!("point {k} dist <= bound"),
                    dist,
                    c.erb_bound.unwrap_or(f64::NAN),
                    dist,
                );
                ck.le(
                    &format!("point {k} lower <= dist"),
                    c.lower_bound,
                    dist,
                    dist,
                );
            }
            Err(e) => return error("product", e),
        }
    }
    ck.finish(
        "product",
        "nn:3+soc:2+psd:3, 20 feasible points".to_string(),
    )
}

/// Runs every fixture with comparison tolerance `tol`.
pub fn run(tol: f64) -> Vec<FixtureResult> {
    vec![
        z2(tol),
        lp(tol),
        soc(tol),
        psd_complementarity_pairs(tol),
        product(tol),
    ]
}
