//! Error-bound and sensitivity certificates for conic programs under strict
//! complementarity.
//!
//! ```
//! use conic_certify::instances::toy_lp;
//! use conic_certify::{certify, CertifyOptions};
//!
//! let bundle = toy_lp();
//! let cert = certify(&bundle.data, &bundle.pair, &[0.3, 0.7], CertifyOptions::default())?;
//! assert!(cert.distance.unwrap() <= cert.upper_bound.unwrap());
//! # Ok::<(), conic_certify::CertifyError>(())
//! ```

pub mod certify;
pub mod cone;
pub mod facial;
pub mod instances;
pub mod linalg;
pub mod problem;
pub mod sensitivity;
pub mod solve;

pub use certify::{certify, Certificate, Certifier, CertifyError, CertifyOptions, ErrorMetrics};
pub use cone::{BlockKind, ConeError, ConeSpec};
pub use facial::{build_face, check_dsc, check_sc_algebraic, FaceDescriptor, FaceError};
pub use instances::{generate, FaceProfile, InstanceBundle, InstanceError};
pub use linalg::{DenseMatrix, LinalgError};
pub use problem::{ProblemData, ProblemError, SolutionPair};
pub use sensitivity::{Perturbation, SensitivityError, SlaterWitness};
pub use solve::{project_feasible, solve_conic, SolveError, SolveOptions};
