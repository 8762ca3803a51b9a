//! Instances with planted strictly complementary solutions, fixed small
//! fixtures, and the versioned text file format.
//!
//! File format, version 1. One keyed item per line, numbers written with 17
//! significant digits:
//!
//! ```text
//! conic-certify-instance
//! version 1
//! cone nn:5+soc:4+psd:4
//! seed 7
//! provenance <one line of free text>
//! A <rows> <cols>
//! <row 0 values>
//! ...
//! b <len>
//! <values>
//! c, x_star, y_star, s_star, witness_x0, witness_y0   (same as b)
//! witness_rho <value>
//! witness_xi <value>
//! witness_bound <value>
//! checksum <sha256 of every preceding byte, hex>
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certify::{gamma_kappa, CertifyError, SINGLETON_TOL};
use crate::cone::{self, svec, svec_index, BlockKind, ConeError, ConeSpec};
use crate::facial::{build_face, check_dsc, check_sc_algebraic, FaceError, FACE_TOL};
use crate::linalg::{self, DenseMatrix, LinalgError, PseudoInverse};
use crate::problem::{ProblemData, ProblemError, SolutionPair};
use crate::sensitivity::SlaterWitness;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "conic-certify-instance";
const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("checksum mismatch: file says {expected}, content hashes to {found}")]
    Checksum { expected: String, found: String },
    #[error("unsupported instance format version {0}")]
    UnsupportedVersion(String),
    #[error("profile cannot be realized: {0}")]
    Unachievable(String),
    #[error("no valid instance after {0} attempts")]
    Exhausted(usize),
    #[error("bad profile string: {0}")]
    BadProfile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// A problem, a planted solution pair and a Slater witness.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub data: ProblemData,
    pub pair: SolutionPair,
    pub witness: SlaterWitness,
    pub seed: u64,
    pub provenance: String,
}

/// Requested position of `s⋆` on one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockProfile {
    /// `s⋆ = 0`, `x⋆` interior.
    Zero,
    /// `s⋆` interior, `x⋆ = 0`.
    Interior,
    /// Both on the boundary. The parameter is `nnz(x⋆)` (LP) or
    /// `rank(X⋆)` (PSD); ignored for SOC. `None` picks a default.
    Boundary(Option<usize>),
}

/// Per-block profile. Empty means `Boundary(None)` everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FaceProfile(pub Vec<BlockProfile>);

impl FromStr for FaceProfile {
    type Err = InstanceError;

    /// `default`, or comma-separated `zero`, `interior`, `boundary`, `boundary:<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "default" {
            return Ok(Self::default());
        }
        s.split(',')
            .map(|tok| match tok.trim() {
                "zero" => Ok(BlockProfile::Zero),
                "interior" => Ok(BlockProfile::Interior),
                "boundary" => Ok(BlockProfile::Boundary(None)),
                t => t
                    .strip_prefix("boundary:")
                    .and_then(|k| k.parse().ok())
                    .map(|k| BlockProfile::Boundary(Some(k)))
                    .ok_or_else(|| InstanceError::BadProfile(t.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl std::fmt::Display for FaceProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("default");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|p| match p {
                BlockProfile::Zero => "zero".to_string(),
                BlockProfile::Interior => "interior".to_string(),
                BlockProfile::Boundary(None) => "boundary".to_string(),
                BlockProfile::Boundary(Some(k)) => format!("boundary:{k}"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

fn default_boundary(kind: BlockKind) -> usize {
    match kind {
        BlockKind::NonNeg(n) => (2 * n / 5).clamp(1, n.saturating_sub(1).max(1)),
        BlockKind::SecondOrder(_) => 1,
        BlockKind::Psd(n) => (n / 3).clamp(1, n.saturating_sub(1).max(1)),
    }
}

fn resolve(spec: &ConeSpec, profile: &FaceProfile) -> Result<Vec<BlockProfile>, InstanceError> {
    let blocks = spec.blocks();
    let raw = if profile.0.is_empty() {
        vec![BlockProfile::Boundary(None); blocks.len()]
    } else if profile.0.len() == blocks.len() {
        profile.0.clone()
    } else {
        return Err(InstanceError::Unachievable(format!(
            "profile has {} entries for {} blocks",
            profile.0.len(),
            blocks.len()
        )));
    };
    raw.into_iter()
        .zip(blocks)
        .map(|(p, &kind)| match p {
            BlockProfile::Boundary(k) => {
                let k = k.unwrap_or_else(|| default_boundary(kind));
                let ok = match kind {
                    BlockKind::NonNeg(n) | BlockKind::Psd(n) => k >= 1 && k < n,
                    BlockKind::SecondOrder(_) => true,
                };
                if !ok {
                    return Err(InstanceError::Unachievable(format!(
                        "boundary parameter {k} invalid for {kind}"
                    )));
                }
                Ok(BlockProfile::Boundary(Some(k)))
            }
            other => Ok(other),
        })
        .collect()
}

/// `dim V_{s⋆}` implied by a resolved profile.
pub fn face_dimension(spec: &ConeSpec, profile: &FaceProfile) -> Result<usize, InstanceError> {
    Ok(resolve(spec, profile)?
        .iter()
        .zip(spec.blocks())
        .map(|(p, kind)| match (p, kind) {
            (BlockProfile::Zero, k) => k.dim(),
            (BlockProfile::Interior, _) => 0,
            (BlockProfile::Boundary(Some(k)), BlockKind::NonNeg(_)) => *k,
            (BlockProfile::Boundary(_), BlockKind::SecondOrder(_)) => 1,
            (BlockProfile::Boundary(Some(r)), BlockKind::Psd(_)) => r * (r + 1) / 2,
            (BlockProfile::Boundary(None), _) => unreachable!("resolved"),
        })
        .sum())
}

/// Default constraint count: half the ambient dimension, at least `dim V`.
pub fn default_m(spec: &ConeSpec, profile: &FaceProfile) -> Result<usize, InstanceError> {
    Ok((spec.dim() / 2).max(face_dimension(spec, profile)?).max(1))
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.5..2.0)
}

fn gaussian(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.sample(StandardNormal)).collect()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    loop {
        let cols: Vec<Vec<f64>> = (0..n).map(|_| gaussian(rng, n)).collect();
        let q = linalg::orthonormalize(&cols);
        if q.len() == n {
            return DenseMatrix::from_columns(n, &q).expect("square");
        }
    }
}

fn plant_block(
    rng: &mut ChaCha8Rng,
    kind: BlockKind,
    profile: BlockProfile,
) -> (Vec<f64>, Vec<f64>) {
    match kind {
        BlockKind::NonNeg(n) => {
            let k = match profile {
                BlockProfile::Zero => n,
                BlockProfile::Interior => 0,
                BlockProfile::Boundary(k) => k.expect("resolved"),
            };
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let (mut x, mut s) = (vec![0.0; n], vec![0.0; n]);
            for (pos, &i) in idx.iter().enumerate() {
                if pos < k {
                    x[i] = uniform(rng);
                } else {
                    s[i] = uniform(rng);
                }
            }
            (x, s)
        }
        BlockKind::SecondOrder(n) => {
            let g = gaussian(rng, n);
            let ng = linalg::norm(&g);
            let u: Vec<f64> = g.iter().map(|v| v / ng).collect();
            let (a, b) = (uniform(rng), uniform(rng));
            let r: f64 = rng.random_range(0.0..0.5);
            let with_t = |v: Vec<f64>, t: f64| {
                let mut out = v;
                out.push(t);
                out
            };
            match profile {
                BlockProfile::Zero => (with_t(linalg::scale(a * r, &u), a), vec![0.0; n + 1]),
                BlockProfile::Interior => (vec![0.0; n + 1], with_t(linalg::scale(b * r, &u), b)),
                BlockProfile::Boundary(_) => (
                    with_t(linalg::scale(a, &u), a),
                    with_t(linalg::scale(-b, &u), b),
                ),
            }
        }
        BlockKind::Psd(n) => {
            let r = match profile {
                BlockProfile::Zero => n,
                BlockProfile::Interior => 0,
                BlockProfile::Boundary(k) => k.expect("resolved"),
            };
            let q = random_orthogonal(rng, n);
            let lam: Vec<f64> = (0..n).map(|_| uniform(rng)).collect();
            let build = |range: std::ops::Range<usize>| {
                let mut m = DenseMatrix::zeros(n, n);
                for k in range {
                    for i in 0..n {
                        for j in 0..n {
                            m[(i, j)] += lam[k] * q[(i, k)] * q[(j, k)];
                        }
                    }
                }
                cone::svec_unchecked(&m)
            };
            (build(0..r), build(r..n))
        }
    }
}

/// Interior point of `(affine set) ∩ K` by alternating projections onto the
/// affine set and the shifted cone `δ e + K`, for decreasing `δ`.
fn interior_point(
    spec: &ConeSpec,
    start: &[f64],
    affine: impl Fn(&[f64]) -> Result<Vec<f64>, InstanceError>,
) -> Result<Option<Vec<f64>>, InstanceError> {
    let e = spec.identity_element();
    for delta in [1.0, 0.3, 0.1, 0.03, 0.01] {
        let mut x = affine(&linalg::add(start, &linalg::scale(delta, &e)))?;
        for _ in 0..500 {
            let shifted = linalg::sub(&x, &linalg::scale(delta, &e));
            let p = cone::proj_cone(spec, &shifted)?;
            x = affine(&linalg::add(&p, &linalg::scale(delta, &e)))?;
            if cone::interior_margin(spec, &x)? >= 0.5 * delta {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Planted instance: `A` standard normal, `b = A x⋆`, `c = Aᵀ y⋆ + s⋆`.
///
/// Resamples until strict complementarity, uniqueness and both Slater
/// conditions verify, up to 100 attempts.
pub fn generate(
    spec: &ConeSpec,
    m: usize,
    profile: &FaceProfile,
    seed: u64,
) -> Result<InstanceBundle, InstanceError> {
    let blocks = resolve(spec, profile)?;
    let dim_v = face_dimension(spec, profile)?;
    if m < dim_v {
        return Err(InstanceError::Unachievable(format!(
            "m = {m} is below dim V = {dim_v}; the solution would not be unique"
        )));
    }
    if m == 0 || m > spec.dim() {
        return Err(InstanceError::Unachievable(format!(
            "m = {m} must lie in 1..={}",
            spec.dim()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(bundle) = attempt(spec, m, &blocks, &mut rng, seed, profile)? {
            return Ok(bundle);
        }
    }
    Err(InstanceError::Exhausted(MAX_ATTEMPTS))
}

fn attempt(
    spec: &ConeSpec,
    m: usize,
    blocks: &[BlockProfile],
    rng: &mut ChaCha8Rng,
    seed: u64,
    profile: &FaceProfile,
) -> Result<Option<InstanceBundle>, InstanceError> {
    let (mut x, mut s) = (
        Vec::with_capacity(spec.dim()),
        Vec::with_capacity(spec.dim()),
    );
    for (&kind, &p) in spec.blocks().iter().zip(blocks) {
        let (xb, sb) = plant_block(rng, kind, p);
        x.extend(xb);
        s.extend(sb);
    }
    let a = DenseMatrix::from_row_major(m, spec.dim(), gaussian(rng, m * spec.dim()))?;
    let y = gaussian(rng, m);
    let b = a.matvec(&x)?;
    let c = linalg::add(&a.matvec_t(&y)?, &s);
    let data = ProblemData::new(spec.clone(), a, b, c)?;
    let pair = SolutionPair { x, y, s };

    let face = build_face(spec, &pair.s, FACE_TOL)?;
    if !check_dsc(&face, &pair.x, 1e-8)?.pass {
        return Ok(None);
    }
    let sc = check_sc_algebraic(spec, &pair.x, &pair.s, 1e-8)?;
    if !sc.pass {
        return Ok(None);
    }
    if !gamma_kappa(&data, &face, SINGLETON_TOL)?.singleton {
        return Ok(None);
    }
    let Some(witness) = plant_witness(&data, &pair)? else {
        return Ok(None);
    };
    Ok(Some(InstanceBundle {
        provenance: format!(
            "planted; A, y_star ~ N(0,1); block magnitudes ~ U(0.5,2); m={m}; profile={profile}"
        ),
        data,
        pair,
        witness,
        seed,
    }))
}

fn plant_witness(
    data: &ProblemData,
    pair: &SolutionPair,
) -> Result<Option<SlaterWitness>, InstanceError> {
    let pinv = PseudoInverse::new(&data.a)?;
    let primal_affine = |v: &[f64]| -> Result<Vec<f64>, InstanceError> {
        let r = data.residual(v)?;
        Ok(linalg::sub(v, &pinv.apply_unchecked(&r)?))
    };
    let Some(x0) = interior_point(&data.spec, &pair.x, primal_affine)? else {
        return Ok(None);
    };
    // slack side: s⋆ + range(Aᵀ)
    let dual_affine = |v: &[f64]| -> Result<Vec<f64>, InstanceError> {
        let d = linalg::sub(v, &pair.s);
        let p = pinv.apply_unchecked(&data.a.matvec(&d)?)?;
        Ok(linalg::add(&pair.s, &p))
    };
    let Some(s0) = interior_point(&data.spec, &pair.s, dual_affine)? else {
        return Ok(None);
    };
    let y0 = linalg::sub(&pair.y, &pinv.apply_adjoint(&linalg::sub(&s0, &pair.s))?);
    let eta = cone::interior_margin(&data.spec, &x0)?
        .min(cone::interior_margin(&data.spec, &data.slack(&y0)?)?);
    if eta <= 0.0 {
        return Ok(None);
    }
    Ok(Some(SlaterWitness {
        x0,
        y0,
        rho: eta / 2.0,
        xi: eta / 2.0,
        norm_bound: (2.0 * linalg::norm(&pair.x)).max(1.0),
    }))
}

/// `min ⟨-𝟏𝟏ᵀ, X⟩ s.t. diag(X) = 𝟏, X ⪰ 0`, whose unique solution is `𝟏𝟏ᵀ`.
pub fn z2_instance(n: usize) -> Result<InstanceBundle, InstanceError> {
    let spec = ConeSpec::psd(n)?;
    let mut a = DenseMatrix::zeros(n, spec.dim());
    for i in 0..n {
        a[(i, svec_index(n, i, i))] = 1.0;
    }
    let mut ones = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ones[(i, j)] = 1.0;
        }
    }
    let x = svec(&ones)?;
    let c = linalg::scale(-1.0, &x);
    let data = ProblemData::new(spec, a, vec![1.0; n], c)?;
    let nf = n as f64;
    let pair = SolutionPair::from_dual(&data, x, vec![-nf; n])?;
    let witness = SlaterWitness {
        x0: svec(&DenseMatrix::identity(n))?,
        y0: vec![-(nf + 1.0); n],
        rho: 0.5,
        xi: 0.5,
        norm_bound: 2.0 * nf,
    };
    Ok(InstanceBundle {
        provenance: format!("fixture z2:{n}; C = -11', A = diag, b = 1"),
        data,
        pair,
        witness,
        seed: 0,
    })
}

/// `min x₁ s.t. x₁ + x₂ = 1, x ≥ 0`.
pub fn toy_lp() -> InstanceBundle {
    let data = ProblemData::new(
        ConeSpec::nonneg(2).expect("valid"),
        DenseMatrix::from_rows(&[vec![1.0, 1.0]]).expect("valid"),
        vec![1.0],
        vec![1.0, 0.0],
    )
    .expect("valid");
    InstanceBundle {
        pair: SolutionPair {
            x: vec![0.0, 1.0],
            y: vec![0.0],
            s: vec![1.0, 0.0],
        },
        witness: SlaterWitness {
            x0: vec![0.5, 0.5],
            y0: vec![-0.5],
            rho: 0.25,
            xi: 0.25,
            norm_bound: 2.0,
        },
        data,
        seed: 0,
        provenance: "fixture toy-lp".to_string(),
    }
}

/// `min v + t s.t. t = 1, (v, t) ∈ SOC(1)`, solution `(-1, 1)`.
pub fn toy_soc() -> InstanceBundle {
    let data = ProblemData::new(
        ConeSpec::second_order(1).expect("valid"),
        DenseMatrix::from_rows(&[vec![0.0, 1.0]]).expect("valid"),
        vec![1.0],
        vec![1.0, 1.0],
    )
    .expect("valid");
    let eta = std::f64::consts::FRAC_1_SQRT_2;
    InstanceBundle {
        pair: SolutionPair {
            x: vec![-1.0, 1.0],
            y: vec![0.0],
            s: vec![1.0, 1.0],
        },
        witness: SlaterWitness {
            x0: vec![0.0, 1.0],
            y0: vec![-1.0],
            rho: eta / 2.0,
            xi: eta / 2.0,
            norm_bound: 2.0 * std::f64::consts::SQRT_2,
        },
        data,
        seed: 0,
        provenance: "fixture toy-soc".to_string(),
    }
}

/// Resolves `z2:<n>`, `toy-lp` and `toy-soc`; `None` for anything else.
pub fn fixture(name: &str) -> Result<Option<InstanceBundle>, InstanceError> {
    match name {
        "toy-lp" => Ok(Some(toy_lp())),
        "toy-soc" => Ok(Some(toy_soc())),
        _ => match name.strip_prefix("z2:") {
            Some(n) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| InstanceError::BadProfile(name.to_string()))?;
                Ok(Some(z2_instance(n)?))
            }
            None => Ok(None),
        },
    }
}

fn push_values(out: &mut String, values: &[f64]) {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

fn push_vector(out: &mut String, label: &str, values: &[f64]) {
    let _ = writeln!(out, "{label} {}", values.len());
    push_values(out, values);
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl InstanceBundle {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "version {FORMAT_VERSION}");
        let _ = writeln!(out, "cone {}", self.data.spec);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "provenance {}", self.provenance.replace('\n', " "));
        let a = &self.data.a;
        let _ = writeln!(out, "A {} {}", a.rows(), a.cols());
        for i in 0..a.rows() {
            push_values(&mut out, a.row(i));
        }
        push_vector(&mut out, "b", &self.data.b);
        push_vector(&mut out, "c", &self.data.c);
        push_vector(&mut out, "x_star", &self.pair.x);
        push_vector(&mut out, "y_star", &self.pair.y);
        push_vector(&mut out, "s_star", &self.pair.s);
        push_vector(&mut out, "witness_x0", &self.witness.x0);
        push_vector(&mut out, "witness_y0", &self.witness.y0);
        let _ = writeln!(out, "witness_rho {:.16e}", self.witness.rho);
        let _ = writeln!(out, "witness_xi {:.16e}", self.witness.xi);
        let _ = writeln!(out, "witness_bound {:.16e}", self.witness.norm_bound);
        let sum = hex_digest(out.as_bytes());
        let _ = writeln!(out, "checksum {sum}");
        out
    }

    pub fn from_text(text: &str) -> Result<Self, InstanceError> {
        let mut r = LineReader::new(text);
        let magic = r.next_line()?;
        if magic.trim() != MAGIC {
            return Err(r.err("missing instance header"));
        }
        let version = r.keyed("version")?;
        if version != FORMAT_VERSION.to_string() {
            return Err(InstanceError::UnsupportedVersion(version));
        }
        let spec: ConeSpec = r
            .keyed("cone")?
            .parse()
            .map_err(|e: ConeError| r.err(&e.to_string()))?;
        let seed: u64 = r.keyed("seed")?.parse().map_err(|_| r.err("bad seed"))?;
        let provenance = r.keyed("provenance")?;
        let header = r.keyed("A")?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| r.err("bad matrix shape")))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(r.err("matrix shape needs two integers"));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            data.extend(r.values(cols)?);
        }
        let a = DenseMatrix::from_row_major(rows, cols, data)?;
        let b = r.vector("b")?;
        let c = r.vector("c")?;
        let x = r.vector("x_star")?;
        let y = r.vector("y_star")?;
        let s = r.vector("s_star")?;
        let x0 = r.vector("witness_x0")?;
        let y0 = r.vector("witness_y0")?;
        let rho = r.scalar("witness_rho")?;
        let xi = r.scalar("witness_xi")?;
        let norm_bound = r.scalar("witness_bound")?;
        let body_end = r.offset;
        let expected = r.keyed("checksum")?;
        let found = hex_digest(&text.as_bytes()[..body_end]);
        if expected != found {
            return Err(InstanceError::Checksum { expected, found });
        }
        let data = ProblemData::new(spec, a, b, c)?;
        for (what, v, n) in [
            ("x_star", &x, data.dim()),
            ("s_star", &s, data.dim()),
            ("witness_x0", &x0, data.dim()),
            ("y_star", &y, data.m()),
            ("witness_y0", &y0, data.m()),
        ] {
            if v.len() != n {
                return Err(ProblemError::LengthMismatch {
                    what,
                    expected: n,
                    found: v.len(),
                }
                .into());
            }
        }
        Ok(Self {
            data,
            pair: SolutionPair { x, y, s },
            witness: SlaterWitness {
                x0,
                y0,
                rho,
                xi,
                norm_bound,
            },
            seed,
            provenance,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), InstanceError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

struct LineReader<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text,
            offset: 0,
            line: 0,
        }
    }

    fn err(&self, msg: &str) -> InstanceError {
        InstanceError::Parse {
            line: self.line,
            msg: msg.to_string(),
        }
    }

    fn next_line(&mut self) -> Result<&'a str, InstanceError> {
        let rest = &self.text[self.offset..];
        if rest.is_empty() {
            self.line += 1;
            return Err(self.err("unexpected end of file"));
        }
        let (line, used) = match rest.find('\n') {
            Some(i) => (&rest[..i], i + 1),
            None => (rest, rest.len()),
        };
        self.offset += used;
        self.line += 1;
        Ok(line.trim_end_matches('\r'))
    }

    fn keyed(&mut self, key: &str) -> Result<String, InstanceError> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.trim().to_string()),
            _ if line == key => Ok(String::new()),
            _ => Err(self.err(&format!("expected `{key}`"))),
        }
    }

    fn values(&mut self, n: usize) -> Result<Vec<f64>, InstanceError> {
        let line = self.next_line()?;
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| self.err(&format!("bad number `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if vals.len() != n {
            return Err(self.err(&format!("expected {n} values, found {}", vals.len())));
        }
        Ok(vals)
    }

    fn vector(&mut self, key: &str) -> Result<Vec<f64>, InstanceError> {
        let n: usize = self
            .keyed(key)?
            .parse()
            .map_err(|_| self.err(&format!("bad length for `{key}`")))?;
        if n == 0 {
            // an empty vector is written as an empty line
            self.next_line()?;
            return Ok(Vec::new());
        }
        self.values(n)
    }

    fn scalar(&mut self, key: &str) -> Result<f64, InstanceError> {
        self.keyed(key)?
            .parse()
            .map_err(|_| self.err(&format!("bad value for `{key}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_parsing() {
        let p: FaceProfile = "boundary:8,zero,interior,boundary".parse().unwrap();
        assert_eq!(
            p.0,
            vec![
                BlockProfile::Boundary(Some(8)),
                BlockProfile::Zero,
                BlockProfile::Interior,
                BlockProfile::Boundary(None)
            ]
        );
        assert_eq!(p.to_string(), "boundary:8,zero,interior,boundary");
        assert!("boundary:x".parse::<FaceProfile>().is_err());
        assert_eq!(
            "default".parse::<FaceProfile>().unwrap(),
            FaceProfile::default()
        );
    }

    #[test]
    fn lp_support_split() {
        let spec = ConeSpec::nonneg(20).unwrap();
        let profile = FaceProfile(vec![BlockProfile::Boundary(Some(8))]);
        let bundle = generate(&spec, 10, &profile, 1).unwrap();
        let nnz = |v: &[f64]| v.iter().filter(|&&t| t > 1e-12).count();
        assert_eq!(nnz(&bundle.pair.x), 8);
        assert_eq!(nnz(&bundle.pair.s), 12);
        let sc = check_sc_algebraic(&spec, &bundle.pair.x, &bundle.pair.s, 1e-8).unwrap();
        assert!(sc.pass);
    }

    #[test]
    fn planted_identities() {
        let spec: ConeSpec = "nn:5+soc:4+psd:4".parse().unwrap();
        let b = generate(&spec, 8, &FaceProfile::default(), 11).unwrap();
        let ax = b.data.a.matvec(&b.pair.x).unwrap();
        assert_eq!(ax, b.data.b);
        let slack = b.data.slack(&b.pair.y).unwrap();
        assert!(linalg::norm(&linalg::sub(&slack, &b.pair.s)) < 1e-12);
        assert!(linalg::dot(&b.pair.x, &b.pair.s).abs() < 1e-12 * (1.0 + linalg::norm(&b.pair.x)));
        assert!(b.witness.margin(&b.data).unwrap() >= 2.0 * b.witness.rho * (1.0 - 1e-12));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = ConeSpec::psd(4).unwrap();
        let a = generate(&spec, 5, &FaceProfile::default(), 5).unwrap();
        let b = generate(&spec, 5, &FaceProfile::default(), 5).unwrap();
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn rejects_small_m() {
        let spec = ConeSpec::nonneg(20).unwrap();
        let profile = FaceProfile(vec![BlockProfile::Boundary(Some(12))]);
        assert!(matches!(
            generate(&spec, 10, &profile, 1),
            Err(InstanceError::Unachievable(_))
        ));
    }

    #[test]
    fn round_trip() {
        let spec: ConeSpec = "nn:3+soc:2".parse().unwrap();
        let b = generate(&spec, 3, &FaceProfile::default(), 2).unwrap();
        let once = InstanceBundle::from_text(&b.to_text()).unwrap();
        assert_eq!(once, b);
        let twice = InstanceBundle::from_text(&once.to_text()).unwrap();
        assert_eq!(twice.to_text(), b.to_text());
    }

    #[test]
    fn truncated_file_reports_line() {
        let text = toy_lp().to_text();
        let cut: String = text.lines().take(8).map(|l| format!("{l}\n")).collect();
        match InstanceBundle::from_text(&cut) {
            Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_two_rejected() {
        let text = toy_lp().to_text().replacen("version 1", "version 2", 1);
        assert!(matches!(
            InstanceBundle::from_text(&text),
            Err(InstanceError::UnsupportedVersion(v)) if v == "2"
        ));
    }

    #[test]
    fn checksum_detects_edit() {
        let text = toy_lp().to_text().replacen("seed 0", "seed 1", 1);
        assert!(matches!(
            InstanceBundle::from_text(&text),
            Err(InstanceError::Checksum { .. })
        ));
    }

    #[test]
    fn fixtures_are_consistent() {
        for b in [toy_lp(), toy_soc(), z2_instance(4).unwrap()] {
            let slack = b.data.slack(&b.pair.y).unwrap();
            assert!(linalg::norm(&linalg::sub(&slack, &b.pair.s)) < 1e-14);
            assert!(linalg::norm(&b.data.residual(&b.pair.x).unwrap()) < 1e-14);
            let margin = b.witness.margin(&b.data).unwrap();
            assert!(
                margin >= 2.0 * b.witness.rho * (1.0 - 1e-12),
                "{}",
                b.provenance
            );
        }
    }
}
