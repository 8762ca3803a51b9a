use conic_certify::cone::{self, smat, svec, ConeSpec};
use conic_certify::facial::{build_face, FACE_TOL};
use conic_certify::linalg::{self, sym_eig, DenseMatrix};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = ConeSpec> {
    prop::collection::vec(
        prop_oneof![
            (1usize..5).prop_map(|n| format!("nn:{n}")),
            (1usize..4).prop_map(|n| format!("soc:{n}")),
            (1usize..4).prop_map(|n| format!("psd:{n}")),
        ],
        1..4,
    )
    .prop_map(|parts| parts.join("+").parse().unwrap())
}

fn point(spec: &ConeSpec) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, spec.dim())
}

fn spec_and_points(k: usize) -> impl Strategy<Value = (ConeSpec, Vec<Vec<f64>>)> {
    spec_strategy().prop_flat_map(move |s| {
        let pts = prop::collection::vec(point(&s), k);
        (Just(s), pts)
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = 0.5 * (v[i * n + j] + v[j * n + i]);
            }
        }
        m
    })
}

proptest! {
    #[test]
    fn projection_idempotent_and_nonexpansive((spec, pts) in spec_and_points(2)) {
        let (x, y) = (&pts[0], &pts[1]);
        let px = cone::proj_cone(&spec, x).unwrap();
        let ppx = cone::proj_cone(&spec, &px).unwrap();
        prop_assert!(linalg::norm(&linalg::sub(&px, &ppx)) <= 1e-10 * (1.0 + linalg::norm(x)));
        let py = cone::proj_cone(&spec, y).unwrap();
        let lhs = linalg::norm(&linalg::sub(&px, &py));
        prop_assert!(lhs <= linalg::norm(&linalg::sub(x, y)) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn moreau_split_is_orthogonal((spec, pts) in spec_and_points(1)) {
        let x = &pts[0];
        let (xp, xm) = cone::moreau_split(&spec, x).unwrap();
        let n2 = linalg::dot(x, x);
        prop_assert!(linalg::dot(&xp, &xm).abs() <= 1e-9 * n2.max(1e-300));
        prop_assert!(linalg::norm(&linalg::sub(x, &linalg::add(&xp, &xm))) <= 1e-12 * (1.0 + n2.sqrt()));
        prop_assert!(cone::interior_margin(&spec, &xp).unwrap() >= -1e-9 * (1.0 + n2.sqrt()));
        let neg: Vec<f64> = xm.iter().map(|v| -v).collect();
        prop_assert!(cone::interior_margin(&spec, &neg).unwrap() >= -1e-9 * (1.0 + n2.sqrt()));
    }

    #[test]
    fn svec_preserves_trace_product(x in symmetric(5), y in symmetric(5)) {
        let tr: f64 = (0..5).map(|i| (0..5).map(|k| x[(i, k)] * y[(k, i)]).sum::<f64>()).sum();
        let d = linalg::dot(&svec(&x).unwrap(), &svec(&y).unwrap());
        prop_assert!((tr - d).abs() <= 1e-12 * (1.0 + tr.abs()));
        let back = smat(5, &svec(&x).unwrap()).unwrap();
        prop_assert!(back.sub(&x).unwrap().max_abs() <= 1e-15);
    }

    #[test]
    fn eig_reconstructs(n in 1usize..=12, seed in prop::collection::vec(-2.0f64..2.0, 144)) {
        let mut x = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                x[(i, j)] = 0.5 * (seed[i * 12 + j] + seed[j * 12 + i]);
            }
        }
        let e = sym_eig(&x).unwrap();
        let fro = x.frobenius_norm();
        prop_assert!(e.reconstruct().sub(&x).unwrap().frobenius_norm() <= 1e-10 * (1.0 + fro));
        let q = &e.eigenvectors;
        let qtq = q.transpose().matmul(q).unwrap();
        prop_assert!(qtq.sub(&DenseMatrix::identity(n)).unwrap().frobenius_norm() <= 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pseudoinverse_is_min_norm(rows in 1usize..5, extra in 0usize..4, vals in prop::collection::vec(-2.0f64..2.0, 64), y in prop::collection::vec(-2.0f64..2.0, 8)) {
        let cols = rows + extra;
        let a = DenseMatrix::from_row_major(rows, cols, vals[..rows * cols].to_vec()).unwrap();
        let pinv = linalg::PseudoInverse::new(&a).unwrap();
        prop_assume!(pinv.norm() < 1e4);
        let x = pinv.apply(&y[..rows]).unwrap();
        let r = linalg::sub(&a.matvec(&x).unwrap(), &y[..rows]);
        prop_assert!(linalg::norm(&r) <= 1e-8 * (1.0 + linalg::norm(&y[..rows])));
        // x lies in range(Aᵀ): orthogonal to every null vector
        let rows_vec: Vec<Vec<f64>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
        let mut all = linalg::orthonormalize(&rows_vec);
        let k = all.len();
        for i in 0..cols {
            let mut e = vec![0.0; cols];
            e[i] = 1.0;
            all.push(e);
        }
        let basis = linalg::orthonormalize(&all);
        for nv in &basis[k..] {
            prop_assert!(linalg::dot(nv, &x).abs() <= 1e-8 * (1.0 + linalg::norm(&x)));
        }
    }

    #[test]
    fn face_projectors((spec, pts) in spec_and_points(3)) {
        let s = cone::proj_cone(&spec, &pts[0]).unwrap();
        let face = build_face(&spec, &s, FACE_TOL).unwrap();
        let (x, y) = (&pts[1], &pts[2]);
        let pv = face.proj_v(x).unwrap();
        let pp = face.proj_v_perp(x).unwrap();
        prop_assert!(linalg::norm(&linalg::sub(x, &linalg::add(&pv, &pp))) <= 1e-10 * (1.0 + linalg::norm(x)));
        prop_assert!(linalg::norm(&linalg::sub(&face.proj_v(&pv).unwrap(), &pv)) <= 1e-10 * (1.0 + linalg::norm(x)));
        prop_assert!(linalg::norm(&face.proj_v(&pp).unwrap()) <= 1e-10 * (1.0 + linalg::norm(x)));
        let cross = linalg::dot(&pv, &face.proj_v_perp(y).unwrap()).abs();
        prop_assert!(cross <= 1e-10 * (1.0 + linalg::norm(x) * linalg::norm(y)));

        // P_V(x₊) lies in F
        let xp = cone::proj_cone(&spec, x).unwrap();
        let d = face.dist_to_face(&face.proj_v(&xp).unwrap()).unwrap();
        prop_assert!(d <= 1e-9 * (1.0 + linalg::norm(x)));

        // Moreau on the face cone and the polar-face inequality
        let pf = face.proj_face(x).unwrap();
        let polar = face.proj_polar_face(x).unwrap();
        prop_assert!(linalg::dot(&pf, &polar).abs() <= 1e-9 * (1.0 + linalg::dot(x, x)));
        prop_assert!(linalg::norm(&polar) >= linalg::norm(&pp) * (1.0 - 1e-12) - 1e-12);
    }
}
