use proptest::prelude::*;

use tempent::entropy::{generator, EntropyParams};
use tempent::fracderiv::{
    closed_form_derivative, gamma_fn, laplace_singular_quad, tempered_derivative_numeric,
    tempered_derivative_with, tenths, verify_grid, DiffOptions, FracParams, LAMBDA_GRID,
};

#[test]
fn gamma_matches_reference_values() {
    // mpmath, 30 digits
    let table = [
        (0.05, 19.470_085_311_255_513),
        (0.3, 2.991_568_987_687_590_6),
        (0.99, 1.005_871_979_644_107_8),
        (1.5, 0.886_226_925_452_758),
        (2.7, 1.544_685_845_850_593_8),
        (7.25, 1_155.381_013_919_989_7),
        (10.0, 362_880.0),
    ];
    for (t, exact) in table {
        let g = gamma_fn(t).unwrap();
        assert!(
            ((g - exact) / exact).abs() <= 1e-13,
            "Gamma({t}) = {g}, want {exact}"
        );
    }
}

proptest! {
    #[test]
    fn gamma_agrees_with_statrs(t in 0.01f64..10.0) {
        let ours = gamma_fn(t).unwrap();
        let theirs = statrs::function::gamma::gamma(t);
        prop_assert!(((ours - theirs) / theirs).abs() <= 1e-13);
    }

    #[test]
    fn laplace_integral_identity(c in 0.1f64..50.0, sigma in 0.05f64..0.95) {
        let tol = 1e-10;
        let q = laplace_singular_quad(c, sigma, tol).unwrap();
        let exact = statrs::function::gamma::gamma(1.0 - sigma) * c.powf(sigma - 1.0);
        let ratio = q.value / exact;
        prop_assert!((1.0 - tol..=1.0 + tol).contains(&ratio), "ratio {ratio}");
        prop_assert!(q.err_estimate >= 0.0);
    }
}

#[test]
fn derivative_matches_closed_form_away_from_minus_one() {
    let rows = verify_grid(
        &[0.1, 0.5, 0.9],
        &[0.2, 0.8],
        &LAMBDA_GRID,
        &[-2.0, 0.5],
        1e-10,
    )
    .unwrap();
    for r in rows {
        assert!(r.within(1e-6, 1e-9), "{r:?}");
    }
}

#[test]
fn untempered_case_is_the_fractional_entropy_kernel() {
    for p in tenths() {
        for sigma in [0.2, 0.5, 0.8] {
            let fp = FracParams::new(sigma, 0.0, p, -1.0).unwrap();
            let d = tempered_derivative_numeric(&fp, 1e-5).unwrap();
            let kernel = p * (-p.ln()).powf(sigma);
            assert!(((d - kernel) / kernel).abs() < 1e-8);
        }
    }
}

#[test]
fn closed_form_is_consistent_with_generator() {
    for p in tenths() {
        for sigma in tenths() {
            for lambda in LAMBDA_GRID {
                let fp = FracParams::new(sigma, lambda, p, -1.0).unwrap();
                let via_derivative = p * (closed_form_derivative(&fp) / p - lambda.powf(sigma));
                let g = generator(p, &EntropyParams::new(sigma, lambda).unwrap()).unwrap();
                assert!(
                    (g - via_derivative).abs() <= 1e-12,
                    "p={p} s={sigma} l={lambda}"
                );
            }
        }
    }
}

#[test]
fn central_difference_is_second_order() {
    let fp = FracParams::new(0.4, 2.0, 0.1, -1.0).unwrap();
    let exact = closed_form_derivative(&fp);
    let steps = [1e-3, 5e-4, 2.5e-4];
    let errors: Vec<f64> = steps
        .iter()
        .map(|&h| {
            let d = tempered_derivative_with(
                &fp,
                &DiffOptions {
                    h,
                    richardson: false,
                    quad_tol: 1e-13,
                },
            )
            .unwrap();
            (d - exact).abs()
        })
        .collect();

    // least-squares slope of log(err) against log(h)
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(
        (slope - 2.0).abs() <= 0.2,
        "slope {slope}, errors {errors:?}"
    );
    let shrink = errors[0] / errors[1];
    assert!(
        (3.5..4.5).contains(&shrink),
        "halving h shrank error by {shrink}"
    );
}
