use proptest::prelude::*;

use rmtdet::biorth::corr_kernel;
use rmtdet::charpoly::{closed_form, m_gue_monic_form, m_gue_pair_form, m_nu_monic_form, m_nu_pair_form, AlphaGrid};
use rmtdet::densities::{km_det_bm, km_det_besq};
use rmtdet::detkit::{cauchy_closed_form, cauchy_det, det, gen_vandermonde_det, vandermonde_product, ComplexMatrix};
use rmtdet::{rel_err, Complex64, Configuration, EnsembleSpec, Family, InitialConfig};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |e| ComplexMatrix::new(n, n, e).unwrap())
}

/// Increasing reals with gaps of at least `gap`.
fn spread(n: usize, start: f64, gap: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(gap..gap + 1.0, n).prop_map(move |gaps| {
        gaps.iter()
            .scan(start, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect()
    })
}

/// Complex points with pairwise distances bounded below: real parts come from
/// `spread`, imaginary parts are free.
fn alphas(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    (spread(n, -2.0, 0.3), prop::collection::vec(-0.5..0.5f64, n)).prop_map(|(re, im)| {
        re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinant_is_multiplicative(a in matrix(4), b in matrix(4)) {
        let ab = a.matmul(&b).unwrap();
        let lhs = det(&ab).unwrap();
        let rhs = det(&a).unwrap() * det(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn row_swap_flips_sign(a in matrix(5), i in 0..5usize, j in 0..5usize) {
        prop_assume!(i != j);
        let mut e = a.entries().to_vec();
        for c in 0..5 {
            e.swap(i * 5 + c, j * 5 + c);
        }
        let swapped = ComplexMatrix::new(5, 5, e).unwrap();
        let (d, s) = (det(&a).unwrap(), det(&swapped).unwrap());
        prop_assert!((d + s).norm() <= 1e-11 * (1.0 + d.norm()));
    }

    #[test]
    fn vandermonde_determinant_is_the_product(x in prop::collection::vec(complex(), 1..7)) {
        let n = x.len();
        let d = gen_vandermonde_det(n, 0, &x, &x).unwrap();
        let p = vandermonde_product(&x, n).unwrap();
        prop_assert!((d - p).norm() <= 1e-9 * (1.0 + p.norm()));
    }

    #[test]
    fn cauchy_determinant(x in spread(4, 0.5, 0.4), y in spread(4, 0.3, 0.4)) {
        let x: Vec<Complex64> = x.into_iter().map(Complex64::from).collect();
        let y: Vec<Complex64> = y.into_iter().map(Complex64::from).collect();
        let d = cauchy_det(&x, &y).unwrap();
        let c = cauchy_closed_form(&x, &y).unwrap();
        prop_assert!(rel_err(d, c) < 1e-9, "{d} vs {c}");
    }

    #[test]
    fn gue_forms_agree(alpha in alphas(4), n in 1..5usize, sigma2 in 0.3..2.0f64) {
        let grid = AlphaGrid::new(alpha).unwrap();
        let pair = m_gue_pair_form(&grid, n, sigma2).unwrap();
        let monic = m_gue_monic_form(&grid, n, sigma2).unwrap();
        prop_assert!(rel_err(pair, monic) < 1e-9, "{pair} vs {monic}");
    }

    #[test]
    fn laguerre_forms_agree(alpha in alphas(4), n in 1..4usize, nu in -0.9..3.0f64, sigma2 in 0.3..1.0f64) {
        let grid = AlphaGrid::new(alpha).unwrap();
        let pair = m_nu_pair_form(&grid, n, nu, sigma2).unwrap();
        let monic = m_nu_monic_form(&grid, n, nu, sigma2).unwrap();
        prop_assert!(rel_err(pair, monic) < 1e-9, "{pair} vs {monic}");
    }

    #[test]
    fn averages_are_symmetric_in_alpha(alpha in alphas(4), shift in 1..4usize, n in 1..4usize) {
        let mut rotated = alpha.clone();
        rotated.rotate_left(shift);
        for spec in [
            EnsembleSpec::gue(n, 1.0).unwrap(),
            EnsembleSpec::chgue(n, 0.5, 0.5).unwrap(),
            EnsembleSpec::class_c(n, 0.7).unwrap(),
            EnsembleSpec::class_d(n, 0.7).unwrap(),
        ] {
            let a = closed_form(&spec, &AlphaGrid::new(alpha.clone()).unwrap()).unwrap();
            let b = closed_form(&spec, &AlphaGrid::new(rotated.clone()).unwrap()).unwrap();
            prop_assert!(rel_err(a, b) < 1e-9, "{:?}: {a} vs {b}", spec.kind());
        }
    }

    #[test]
    fn real_points_give_real_averages(alpha in spread(4, -2.0, 0.3), n in 1..4usize) {
        let grid = AlphaGrid::from_real(&alpha).unwrap();
        let v = closed_form(&EnsembleSpec::gue(n, 1.0).unwrap(), &grid).unwrap();
        prop_assert!(v.im.abs() <= 1e-10 * v.norm().max(1.0));
    }

    #[test]
    fn kernel_from_origin_is_reflection_invariant(x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.1..2.0f64, t in 0.1..2.0f64, n in 1..5usize) {
        let xi = InitialConfig::origin(n);
        let k_xy = corr_kernel(Family::Bm, s, x, t, y, &xi).unwrap();
        let reflected = corr_kernel(Family::Bm, s, -x, t, -y, &xi).unwrap();
        prop_assert!((k_xy - reflected).abs() <= 1e-10 * (1.0 + k_xy.abs()));
        let d = corr_kernel(Family::Bm, t, x, t, x, &xi).unwrap();
        prop_assert!(d >= -1e-12);
    }

    #[test]
    fn karlin_mcgregor_is_nonnegative(x in spread(3, -2.0, 0.1), y in spread(3, -2.0, 0.1), t in 0.05..2.0f64) {
        let (cx, cy) = (Configuration::new(x.clone()).unwrap(), Configuration::new(y.clone()).unwrap());
        prop_assert!(km_det_bm(t, &cy, &cx).unwrap() >= 0.0);
        let shift = |v: &[f64]| Configuration::new(v.iter().map(|p| p + 2.5).collect()).unwrap();
        prop_assert!(km_det_besq(0.5, t, &shift(&y), &shift(&x)).unwrap() >= 0.0);
    }
}
