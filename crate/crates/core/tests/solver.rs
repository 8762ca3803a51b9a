use conic_certify::instances::{generate, BlockProfile, FaceProfile};
use conic_certify::linalg;
use conic_certify::solve::{project_feasible, solve_conic, SolveOptions};
use conic_certify::ConeSpec;

fn planted(spec: &str, m: usize, profile: FaceProfile, seed: u64) -> conic_certify::InstanceBundle {
    generate(&spec.parse::<ConeSpec>().unwrap(), m, &profile, seed).unwrap()
}

#[test]
fn solver_recovers_planted_solutions() {
    let cases = [
        planted(
            "nn:20",
            10,
            FaceProfile(vec![BlockProfile::Boundary(Some(8))]),
            1,
        ),
        planted("soc:9", 5, FaceProfile::default(), 2),
        planted(
            "psd:6",
            10,
            FaceProfile(vec![BlockProfile::Boundary(Some(2))]),
            3,
        ),
        planted("nn:5+soc:4+psd:4", 8, FaceProfile::default(), 4),
    ];
    for b in &cases {
        let sol = solve_conic(&b.data, &SolveOptions::default()).unwrap();
        let p = linalg::dot(&b.data.c, &b.pair.x);
        let obj = linalg::dot(&b.data.c, &sol.x);
        assert!(
            (obj - p).abs() <= 1e-5 * (1.0 + p.abs()),
            "{}: {obj} vs {p}",
            b.data.spec
        );
        let dist = linalg::norm(&linalg::sub(&sol.x, &b.pair.x));
        assert!(dist <= 1e-4, "{}: dist {dist}", b.data.spec);
        // ⟨x, s⟩ = gap - ⟨y, Ax - b⟩
        let comp = linalg::dot(&sol.x, &sol.s).abs();
        let scale = 1.0 + p.abs() + linalg::norm(&sol.y) * (1.0 + linalg::norm(&b.data.b));
        assert!(comp <= 10.0 * 1e-9 * scale, "{}: comp {comp}", b.data.spec);
    }
}

#[test]
fn planted_soc_residuals() {
    let b = planted("soc:6", 4, FaceProfile::default(), 9);
    let sol = solve_conic(&b.data, &SolveOptions::default()).unwrap();
    assert!(sol.residuals.primal <= 1e-6 && sol.residuals.dual <= 1e-6);
    let scale = 1.0 + linalg::norm(&b.pair.x) * linalg::norm(&b.pair.s);
    assert!(linalg::dot(&sol.x, &sol.s).abs() <= 1e-6 * scale);
}

// Nearest feasible point by brute force on a 2-D null space.
#[test]
fn projection_matches_dense_oracle() {
    let b = planted(
        "nn:4",
        2,
        FaceProfile(vec![BlockProfile::Boundary(Some(2))]),
        6,
    );
    let data = &b.data;
    let x0 = [0.9, -0.4, 1.3, 0.2];
    let p = project_feasible(data, &x0, &SolveOptions::default()).unwrap();
    assert!(p.converged);
    // parametrize {Ax = b} = x⋆ + N t with N an orthonormal null-space basis
    let mut cols: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            let mut e = vec![0.0; 4];
            e[i] = 1.0;
            e
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..2).map(|i| data.a.row(i).to_vec()).collect();
    let mut all = rows.clone();
    all.append(&mut cols);
    let basis = linalg::orthonormalize(&all);
    let null = &basis[2..4];
    let mut best = f64::INFINITY;
    let steps = 801;
    for i in 0..steps {
        for j in 0..steps {
            let t1 = -4.0 + 8.0 * i as f64 / (steps - 1) as f64;
            let t2 = -4.0 + 8.0 * j as f64 / (steps - 1) as f64;
            let x: Vec<f64> = (0..4)
                .map(|k| b.pair.x[k] + t1 * null[0][k] + t2 * null[1][k])
                .collect();
            if x.iter().all(|&v| v >= 0.0) {
                best = best.min(linalg::norm(&linalg::sub(&x, &x0)));
            }
        }
    }
    let got = linalg::norm(&linalg::sub(&p.x, &x0));
    // grid spacing 0.01 bounds the oracle's own error
    assert!(got <= best + 1e-6, "dykstra {got} vs grid {best}");
    assert!(got >= best - 0.02, "dykstra {got} vs grid {best}");
}
