use std::sync::Arc;

use num_complex::Complex64;
use su2tqft::scalars::{make_params, QuantumParams, Ring, Scalar};

fn ring(r: u32) -> Arc<Ring> {
    QuantumParams::new(r, 1).unwrap().ring()
}

#[test]
fn params_validation() {
    assert!(make_params(5, 1).is_ok());
    assert!(make_params(5, 2).is_err());
    assert!(make_params(3, 5).is_ok());
    assert!(make_params(2, 1).is_err());
    assert!(make_params(4, 16).is_err());
}

#[test]
fn root_order() {
    for r in 3..=8 {
        let ring = ring(r);
        assert!(Scalar::a_pow(&ring, 4 * r as i64).is_one());
        let x = Scalar::a_pow(&ring, 2 * r as i64) + Scalar::one(&ring);
        assert!(x.is_zero());
        assert!(!Scalar::a_pow(&ring, 2 * r as i64).is_one());
    }
}

#[test]
fn loop_value_at_r3() {
    let ring = ring(3);
    assert_eq!(Scalar::d(&ring), Scalar::from_int(&ring, -1));
    assert!(!Scalar::d(&ring).is_zero());
}

#[test]
fn c_squared() {
    for r in 3..=7 {
        let ring = ring(r);
        let c = Scalar::c(&ring);
        let c2 = &c * &c;
        assert_eq!(c2.cpow(), 0);
        let prod = &c2 * &Scalar::total_dimension(&ring);
        assert!(prod.is_one());
    }
}

#[test]
fn quantum_integers_vanish_at_r() {
    for r in 3..=8 {
        let ring = ring(r);
        for n in 1..r as i64 {
            assert!(!Scalar::quantum_int(&ring, n).is_zero(), "[{n}] at r={r}");
        }
        assert!(Scalar::quantum_int(&ring, r as i64).is_zero());
    }
}

#[test]
fn numeric_embedding() {
    let ring5 = ring(5);
    let d = Scalar::d(&ring5).embed();
    assert!((d.re + 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
    assert!(d.im.abs() < 1e-12);
    let ring3 = ring(3);
    let c = Scalar::c(&ring3).embed();
    assert!((c.re - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(Scalar::one(&ring3).embed(), Complex64::new(1.0, 0.0));
}

#[test]
fn inverse_roundtrip() {
    let ring = ring(7);
    let x = Scalar::quantum_int(&ring, 3) + Scalar::a_pow(&ring, 5);
    let y = x.inv().unwrap();
    assert!((&x * &y).is_one());
    assert!(Scalar::zero(&ring).inv().is_err());
    let xc = &x * &Scalar::c(&ring);
    assert!((&xc * &xc.inv().unwrap()).is_one());
}

#[test]
fn json_roundtrip() {
    let ring = ring(5);
    let x = Scalar::quantum_int(&ring, 2).inv().unwrap() * Scalar::c(&ring);
    let j = x.to_json();
    assert_eq!(Scalar::from_json(&ring, &j).unwrap(), x);
}

proptest::proptest! {
    #[test]
    fn embedding_is_multiplicative(r in 3u32..8, a in -20i64..20, b in -20i64..20, n in 1i64..6, m in 1i64..6) {
        let ring = ring(r);
        let x = Scalar::a_pow(&ring, a) + Scalar::quantum_int(&ring, n);
        let y = Scalar::a_pow(&ring, b) - Scalar::quantum_int(&ring, m).mul_a_pow(3);
        let lhs = (&x * &y).embed();
        let rhs = x.embed() * y.embed();
        proptest::prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        let z = &x - &y;
        proptest::prop_assert_eq!(z.is_zero(), z.embed().norm() < 1e-8);
    }
}
