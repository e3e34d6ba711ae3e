use std::f64::consts::PI;

use sphlab_core::geometry::{build_zonal_quadrature, default_node_count};
use sphlab_core::maximal::{ball_average, maximal_function, mixed_grid};
use sphlab_core::{
    apply_riesz_mean_coeffs, apply_riesz_mean_kernel, project_all, riesz_kernel, EvalPoint,
    KernelSpec, Profile, SpectralTable, ZonalFunction,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

// ∫ Z_j(γ) Z_k(γ) dσ = δ_jk a_k / ω
#[test]
fn zonal_harmonics_are_orthogonal() {
    for dim in 2..=4 {
        let k_max = 32;
        let table = SpectralTable::new(dim, k_max).unwrap();
        let q = build_zonal_quadrature(dim, default_node_count(2 * k_max)).unwrap();
        let mut z = Vec::new();
        let mut gram = vec![vec![0.0; k_max + 1]; k_max + 1];
        for (&g, &w) in q.nodes().iter().zip(q.weights()) {
            table.zonal_values_into(k_max, g, &mut z).unwrap();
            for j in 0..=k_max {
                for k in 0..=k_max {
                    gram[j][k] += w * z[j] * z[k];
                }
            }
        }
        for (j, row) in gram.iter().enumerate() {
            for (k, &got) in row.iter().enumerate() {
                let want = if j == k {
                    table.multiplicity(k) / table.area()
                } else {
                    0.0
                };
                assert!(
                    (got - want).abs() <= 1e-10 * (1.0 + want),
                    "N={dim} j={j} k={k}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn kernel_and_coefficient_paths_agree() {
    for dim in [2, 3, 5] {
        let n = 24;
        let table = SpectralTable::new(dim, n).unwrap();
        for p in [
            "cap:pi/4",
            "bump:0.3",
            "antipodal-bump:0.3",
            "bandlimited:1,0,2",
        ] {
            let f = ZonalFunction::new(dim, p.parse::<Profile>().unwrap()).unwrap();
            let q = f.quadrature(n).unwrap();
            let c = project_all(&f, &table, n, &q).unwrap();
            for alpha in [0.0, 0.5, 2.0] {
                let spec = KernelSpec::new(dim, alpha, n).unwrap();
                let a = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Pole).unwrap();
                let b = apply_riesz_mean_coeffs(&c, &spec).unwrap();
                assert!(close(a, b, 1e-10), "N={dim} {p} α={alpha}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn antipode_values_follow_reflected_coefficients() {
    let dim = 3;
    let n = 20;
    let table = SpectralTable::new(dim, n).unwrap();
    let f = ZonalFunction::new(dim, Profile::Bump { sigma: 0.4 }).unwrap();
    let q = f.quadrature(n).unwrap();
    let c = project_all(&f, &table, n, &q).unwrap().reflected();
    let spec = KernelSpec::new(dim, 1.0, n).unwrap();
    let direct = apply_riesz_mean_kernel(&f, &spec, &table, &q, EvalPoint::Antipode).unwrap();
    let via = apply_riesz_mean_coeffs(&c, &spec).unwrap();
    assert!(close(direct, via, 1e-10), "{direct} vs {via}");
}

#[test]
fn riesz_kernel_is_symmetric_under_reflection_for_even_terms() {
    // Θ(π−γ) = Σ (−1)^k w_k Z_k(γ): only even degrees survive in the average
    let dim = 2;
    let n = 16;
    let table = SpectralTable::new(dim, n).unwrap();
    let spec = KernelSpec::new(dim, 1.0, n).unwrap();
    let w = spec.riesz_weights().unwrap();
    let gamma = 0.7;
    let mut z = Vec::new();
    table.zonal_values_into(n, gamma, &mut z).unwrap();
    let even: f64 = (0..=n).step_by(2).map(|k| w[k] * z[k]).sum();
    let avg = 0.5
        * (riesz_kernel(&spec, &table, gamma).unwrap()
            + riesz_kernel(&spec, &table, PI - gamma).unwrap());
    assert!(close(avg, even, 1e-12), "{avg} vs {even}");
}

#[test]
fn maximal_function_dominates_ball_averages() {
    let dim = 2;
    let f = ZonalFunction::new(dim, Profile::Cap { radius: PI / 6.0 }).unwrap();
    let grid = mixed_grid(10, 4);
    let m = maximal_function(&f, EvalPoint::Pole, &grid).unwrap();
    for r in [0.1, 0.5, 1.0, 2.0, PI] {
        assert!(ball_average(&f, EvalPoint::Pole, r).unwrap() <= m.value + 1e-12);
    }
    // a cap of radius R averaged over the whole sphere gives its area fraction
    let whole = ball_average(&f, EvalPoint::Pole, PI).unwrap();
    let fraction = (1.0 - (PI / 6.0).cos()) / 2.0;
    assert!(close(whole, fraction, 1e-12), "{whole} vs {fraction}");
    assert!(close(m.value, 1.0, 1e-12));
}
