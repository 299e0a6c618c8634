use std::f64::consts::PI;

use su2tqft::recoupling::{channel_labels, hopf_value, twist_coefficient};
use su2tqft::scalars::{QuantumParams, Scalar};
use su2tqft::skein::evaluate;
use su2tqft::tqft::{
    basis, dimension, expand_solid_torus, handlebody_vector, linked_handcuff, punctured_torus_labels, Spine,
};

/// Closed-surface dimensions from the sine formula.
fn verlinde(r: u32, g: i32) -> usize {
    let r_f = r as f64;
    let sum: f64 = (1..r).map(|j| (PI * j as f64 / r_f).sin().powi(2 - 2 * g)).sum();
    (sum * (r_f / 2.0).powi(g - 1)).round() as usize
}

#[test]
fn torus_dimension() {
    for r in 3..=8 {
        assert_eq!(dimension(r, &Spine::torus(), &[]).unwrap(), (r - 1) as usize);
        assert_eq!(verlinde(r, 1), (r - 1) as usize);
    }
}

#[test]
fn genus2_dimension_by_two_spines() {
    for r in 3..=8 {
        let theta = dimension(r, &Spine::theta(), &[]).unwrap();
        let handcuff = dimension(r, &Spine::handcuff(), &[]).unwrap();
        assert_eq!(theta, handcuff, "r={r}");
        assert_eq!(theta, verlinde(r, 2), "r={r}");
    }
    assert_eq!(dimension(3, &Spine::theta(), &[]).unwrap(), 4);
}

#[test]
fn four_punctured_sphere_channels_agree() {
    assert_eq!(dimension(4, &Spine::four_punctured_sphere(), &[1, 1, 1, 1]).unwrap(), 2);
    let r = 5;
    for x in 0..81u32 {
        let l = [x % 3, (x / 3) % 3, (x / 9) % 3, x / 27];
        let h = dimension(r, &Spine::four_punctured_sphere(), &l).unwrap();
        assert_eq!(h, channel_labels(r, l[0], l[1], l[2], l[3]).len());
        assert_eq!(h, channel_labels(r, l[0], l[3], l[1], l[2]).len(), "{l:?}");
        assert_eq!(h, channel_labels(r, l[0], l[2], l[1], l[3]).len(), "{l:?}");
    }
}

#[test]
fn punctured_torus_basis() {
    for r in 3..=7 {
        for e in 0..=r - 2 {
            let b = basis(r, &Spine::punctured_torus(), &[e]).unwrap();
            let labels: Vec<u32> = b.iter().map(|l| l[0]).collect();
            assert_eq!(labels, punctured_torus_labels(r, e));
            if e % 2 == 1 {
                assert!(labels.is_empty());
            }
        }
    }
}

#[test]
fn basis_is_lexicographic() {
    let b = basis(5, &Spine::handcuff(), &[]).unwrap();
    let mut sorted = b.clone();
    sorted.sort();
    assert_eq!(b, sorted);
    assert_eq!(b[0], vec![0, 0, 0]);
}

#[test]
fn handlebody_vector_is_the_empty_labeling() {
    let ring = QuantumParams::new(5, 1).unwrap().ring();
    let v = handlebody_vector(&ring, &Spine::theta()).unwrap();
    assert!(v[0].is_one());
    assert!(v[1..].iter().all(|x| x.is_zero()));
    assert!(handlebody_vector(&ring, &Spine::punctured_torus()).is_err());
}

#[test]
fn bad_spines() {
    let bad = Spine { vertices: 2, edges: vec![[0, 1]], legs: vec![], circle: false };
    assert!(basis(5, &bad, &[]).is_err());
    let disconnected = Spine { vertices: 2, edges: vec![[0, 0], [1, 1]], legs: vec![0, 1], circle: false };
    assert!(basis(5, &disconnected, &[0, 0]).is_err());
    assert!(basis(5, &Spine::punctured_torus(), &[]).is_err());
    assert!(basis(5, &Spine::punctured_torus(), &[4]).is_err());
    assert!(basis(2, &Spine::torus(), &[]).is_err());
}

#[test]
fn spine_json_round_trip() {
    let s = Spine::handcuff();
    let j = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<Spine>(&j).unwrap(), s);
    let t: Spine = serde_json::from_str(r#"{"circle": true}"#).unwrap();
    assert_eq!(t, Spine::torus());
}

#[test]
fn solid_torus_expansions() {
    for r in [4u32, 5, 7] {
        let ring = QuantumParams::new(r, 1).unwrap().ring();
        let n = (r - 1) as usize;
        let unit = |k: usize, x: Scalar| -> Vec<Scalar> {
            (0..n).map(|i| if i == k { x.clone() } else { Scalar::zero(&ring) }).collect()
        };
        assert_eq!(expand_solid_torus(&ring, 1, 0).unwrap(), unit(0, Scalar::d(&ring)));
        assert_eq!(expand_solid_torus(&ring, 0, 1).unwrap(), unit(1, Scalar::one(&ring)));
        assert_eq!(expand_solid_torus(&ring, 1, 1).unwrap(), unit(1, twist_coefficient(&ring, 1)));
        assert_eq!(expand_solid_torus(&ring, -1, 1).unwrap(), unit(1, twist_coefficient(&ring, 1).inv().unwrap()));
        for (p, q) in [(1i64, 2i64), (3, 2), (1, 3), (2, 3)] {
            let v = expand_solid_torus(&ring, p, q).unwrap();
            for (k, x) in v.iter().enumerate() {
                if k as i64 > q || (k as i64 - q) % 2 != 0 {
                    assert!(x.is_zero(), "({p},{q}) r={r} k={k}");
                }
            }
            if (q as usize) < n {
                assert!(!v[q as usize].is_zero(), "({p},{q}) r={r}");
            }
        }
    }
    let ring = QuantumParams::new(5, 1).unwrap().ring();
    assert!(expand_solid_torus(&ring, 2, 4).is_err());
}

#[test]
fn linked_handcuff_with_trivial_bridge_is_hopf() {
    let ring = QuantumParams::new(6, 1).unwrap().ring();
    for a in 0..=4 {
        for b in 0..=4 {
            let v = evaluate(&ring, &linked_handcuff(a, b, 0).unwrap()).unwrap();
            assert_eq!(v, hopf_value(&ring, a, b), "({a},{b})");
        }
    }
    // symmetric in the two loops
    for (a, b) in [(1, 3), (2, 4), (2, 2)] {
        let x = evaluate(&ring, &linked_handcuff(a, b, 2).unwrap()).unwrap();
        let y = evaluate(&ring, &linked_handcuff(b, a, 2).unwrap()).unwrap();
        assert_eq!(x, y);
    }
}
