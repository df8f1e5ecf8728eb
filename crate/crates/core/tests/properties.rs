use proptest::prelude::*;

use plasma_skin::oracle::{fourier_impedance, OracleConfig};
use plasma_skin::solution::{
    boundary_field_residual, compute_coefficients, compute_coefficients_with, field_e_at, impedance, impedance_reduced,
    impedance_with_c, jump_integral_residual,
};
use plasma_skin::{make_params, Complex64};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn identities_hold_across_parameters(g in 0.05f64..1.6, eps in 1e-4f64..1e-2, vc in 1e-4f64..1e-2) {
        let p = make_params(g, eps, vc).unwrap();
        let c = compute_coefficients(&p).unwrap();
        prop_assert!(boundary_field_residual(&c, &p).unwrap() < 1e-6);
        prop_assert!(jump_integral_residual(&c, &p).unwrap() < 1e-6);
        prop_assert!((field_e_at(0.0, &c, &p).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn impedance_routes_agree(g in 0.05f64..1.6) {
        let p = make_params(g, 1e-3, 1e-3).unwrap();
        let z = impedance(&p).unwrap();
        prop_assert!(rel(fourier_impedance(&p, &OracleConfig::default()).unwrap().z, z.z) < 1e-6);
        prop_assert!(rel(impedance_reduced(&p).unwrap().z, z.z) < 1e-9);
    }

    #[test]
    fn fields_are_linear_in_the_surface_value(g in 0.05f64..1.6, re in -3.0f64..3.0, im in -3.0f64..3.0, x in 0.0f64..4.0) {
        prop_assume!(re.hypot(im) > 0.1);
        let p = make_params(g, 1e-3, 1e-3).unwrap();
        let e_s = Complex64::new(re, im);
        let a = field_e_at(x, &compute_coefficients(&p).unwrap(), &p).unwrap();
        let b = field_e_at(x, &compute_coefficients_with(&p, e_s).unwrap(), &p).unwrap();
        prop_assert!((b - a * e_s).norm() <= 1e-12 * (1.0 + b.norm()));
    }

    #[test]
    fn impedance_scales_inversely_with_c(g in 0.05f64..1.6, c in 0.1f64..10.0) {
        let p = make_params(g, 1e-3, 1e-3).unwrap();
        let z1 = impedance_with_c(&p, 1.0).unwrap();
        let zc = impedance_with_c(&p, c).unwrap();
        prop_assert!(rel(zc.z * c, z1.z) < 1e-14);
        prop_assert!(rel(zc.z0, z1.z0) < 1e-15);
    }
}
