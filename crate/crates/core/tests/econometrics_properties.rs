use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use punk_hedonics::econometrics::{adf_test, ols_fit, pearson_matrix, Design};
use punk_hedonics::synthetic::{ar1, random_walk};

/// Intercept plus `k - 1` Gaussian columns and a response with known
/// coefficients `1, 2, ..., k` (scaled by 0.5) and unit noise.
fn random_problem(seed: u64, n: usize, k: usize) -> (Design, Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut design = Design::with_intercept(n);
    for j in 1..k {
        let scale = rng.random_range(0.5..5.0);
        let col = (0..n).map(|_| scale * normal.sample(&mut rng)).collect();
        design.push(format!("x{j}"), col);
    }
    let beta: Vec<f64> = (0..k).map(|j| 0.5 * (j as f64 + 1.0)).collect();
    let y = (0..n)
        .map(|i| {
            let mean: f64 = design.columns().iter().zip(&beta).map(|(c, b)| c[i] * b).sum();
            mean + normal.sample(&mut rng)
        })
        .collect();
    (design, y, beta)
}

/// Textbook OLS: solve `(X'X) b = X'y` by Gauss-Jordan elimination with
/// partial pivoting, which also yields `(X'X)^-1` for the standard errors.
struct NormalEquations {
    coefficients: Vec<f64>,
    standard_errors: Vec<f64>,
    r2: f64,
}

fn normal_equations(design: &Design, y: &[f64]) -> NormalEquations {
    let cols = design.columns();
    let (n, k) = (y.len(), cols.len());
    // Augmented [X'X | I | X'y].
    let mut a = vec![vec![0.0; 2 * k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..n).map(|r| cols[i][r] * cols[j][r]).sum();
        }
        a[i][k + i] = 1.0;
        a[i][2 * k] = (0..n).map(|r| cols[i][r] * y[r]).sum();
    }
    for c in 0..k {
        let p = (c..k)
            .max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        let pivot = a[c][c];
        for v in a[c].iter_mut() {
            *v /= pivot;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                let row_c = a[c].clone();
                for (v, pc) in a[r].iter_mut().zip(&row_c) {
                    *v -= f * pc;
                }
            }
        }
    }
    let coefficients: Vec<f64> = (0..k).map(|i| a[i][2 * k]).collect();
    let resid: Vec<f64> = (0..n)
        .map(|r| y[r] - (0..k).map(|j| cols[j][r] * coefficients[j]).sum::<f64>())
        .collect();
    let rss: f64 = resid.iter().map(|e| e * e).sum();
    let s2 = rss / (n - k) as f64;
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    NormalEquations {
        standard_errors: (0..k).map(|i| (s2 * a[i][k + i]).sqrt()).collect(),
        coefficients,
        r2: 1.0 - rss / tss,
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn recovery_on_200_points() {
    let (design, y, beta) = random_problem(200, 200, 5);
    let fit = ols_fit(&design, &y).unwrap();
    let oracle = normal_equations(&design, &y);
    for (j, truth) in beta.iter().enumerate() {
        assert!(rel_close(fit.coefficients[j], oracle.coefficients[j], 1e-8));
        let z = (fit.coefficients[j] - truth) / fit.standard_errors[j];
        assert!(z.abs() < 3.0, "coefficient {j}: z = {z}");
    }
}

#[test]
fn pearson_matches_textbook_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let a: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = a.iter().map(|v| 0.3 * v + rng.random::<f64>()).collect();
    let n = a.len() as f64;
    let (sa, sb) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
    let sab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let saa: f64 = a.iter().map(|x| x * x).sum();
    let sbb: f64 = b.iter().map(|y| y * y).sum();
    let oracle = (n * sab - sa * sb) / ((n * saa - sa * sa).sqrt() * (n * sbb - sb * sb).sqrt());
    let m = pearson_matrix(&[("a".into(), a), ("b".into(), b)]).unwrap();
    assert!((m.get("a", "b").unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn adf_separates_noise_from_random_walk() {
    let noise = ar1(500, 500, 0.0);
    let walk = random_walk(500, 500);
    let stationary = adf_test(&noise, 12).unwrap();
    assert!(stationary.statistic < -2.86, "{}", stationary.statistic);
    assert!(stationary.is_stationary());
    let unit_root = adf_test(&walk, 12).unwrap();
    assert!(!unit_root.is_stationary(), "{}", unit_root.statistic);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qr_matches_normal_equations(seed in any::<u64>(), n in 30usize..200, k in 1usize..12) {
        let (design, y, _) = random_problem(seed, n, k);
        let fit = ols_fit(&design, &y).unwrap();
        let oracle = normal_equations(&design, &y);
        for j in 0..k {
            prop_assert!(rel_close(fit.coefficients[j], oracle.coefficients[j], 1e-8));
            prop_assert!(rel_close(fit.standard_errors[j], oracle.standard_errors[j], 1e-8));
        }
        if k > 1 {
            prop_assert!(rel_close(fit.r2, oracle.r2, 1e-8));
        }
        prop_assert!(fit.adj_r2 <= fit.r2);
        for j in 0..k {
            if fit.standard_errors[j] > 0.0 {
                prop_assert!((fit.t_stats[j] - fit.coefficients[j] / fit.standard_errors[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn residuals_are_orthogonal_to_columns(seed in any::<u64>(), n in 20usize..150, k in 1usize..8) {
        let (design, y, _) = random_problem(seed, n, k);
        let fit = ols_fit(&design, &y).unwrap();
        let resid: Vec<f64> = (0..n)
            .map(|i| y[i] - design.columns().iter().zip(&fit.coefficients).map(|(c, b)| c[i] * b).sum::<f64>())
            .collect();
        let scale = y.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for c in design.columns() {
            let cscale = c.iter().map(|v| v.abs()).fold(1.0, f64::max);
            let dot: f64 = c.iter().zip(&resid).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-8 * scale * cscale * n as f64);
        }
    }

    #[test]
    fn adding_a_column_never_lowers_r2(seed in any::<u64>(), n in 20usize..150, k in 1usize..8) {
        let (design, y, _) = random_problem(seed, n, k);
        let small = ols_fit(&design, &y).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut bigger = design.clone();
        bigger.push("extra", (0..n).map(|_| rng.random::<f64>()).collect());
        let big = ols_fit(&bigger, &y).unwrap();
        prop_assert!(big.r2 >= small.r2 - 1e-12);
    }

    #[test]
    fn shifting_a_regressor_only_moves_the_intercept(seed in any::<u64>(), shift in -50.0f64..50.0) {
        let (design, y, _) = random_problem(seed, 80, 4);
        let base = ols_fit(&design, &y).unwrap();
        let mut shifted = Design::new();
        for (j, (name, col)) in design.names().iter().zip(design.columns()).enumerate() {
            let c = if j == 2 { col.iter().map(|v| v + shift).collect() } else { col.clone() };
            shifted.push(name.clone(), c);
        }
        let moved = ols_fit(&shifted, &y).unwrap();
        for j in 1..4 {
            prop_assert!(rel_close(moved.coefficients[j], base.coefficients[j], 1e-9));
        }
        for i in 0..80 {
            let p = |d: &Design, b: &[f64]| d.columns().iter().zip(b).map(|(c, b)| c[i] * b).sum::<f64>();
            prop_assert!((p(&design, &base.coefficients) - p(&shifted, &moved.coefficients)).abs() < 1e-9 * y[i].abs().max(1.0) * 10.0);
        }
    }

    #[test]
    fn adf_statistic_is_affine_invariant(seed in any::<u64>(), scale in 0.01f64..100.0, shift in -1e3f64..1e3) {
        let series = ar1(seed, 120, 0.7);
        let moved: Vec<f64> = series.iter().map(|v| scale * v + shift).collect();
        let a = adf_test(&series, 4).unwrap();
        let b = adf_test(&moved, 4).unwrap();
        prop_assert_eq!(a.lags, b.lags);
        prop_assert!((a.statistic - b.statistic).abs() < 1e-8, "{} vs {}", a.statistic, b.statistic);
    }

    #[test]
    fn pearson_is_positive_affine_invariant(seed in any::<u64>(), scale in 0.01f64..100.0, shift in -1e3f64..1e3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..50).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..50).map(|_| rng.random::<f64>()).collect();
        let moved: Vec<f64> = a.iter().map(|v| scale * v + shift).collect();
        let r1 = pearson_matrix(&[("a".into(), a), ("b".into(), b.clone())]).unwrap();
        let r2 = pearson_matrix(&[("a".into(), moved), ("b".into(), b)]).unwrap();
        prop_assert!((r1.get("a", "b").unwrap() - r2.get("a", "b").unwrap()).abs() < 1e-10);
        for (_, _, r) in r1.pairs() {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }
}
