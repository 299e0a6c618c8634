use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2tqft::scalars::{QuantumParams, Ring, Scalar};
use su2tqft::skein::moves::apply_move;
use su2tqft::skein::pd::{link_from_json, link_to_json, parse_link_str, pretty};
use su2tqft::skein::{
    evaluate, framing_anomaly, normalized_z, omega_weights, random_move_case, signature, BraidDiagram, LabeledLink,
    LinkLabel, Move, SurgeryPresentation,
};
use su2tqft::tl::{markov_trace, resolve_braid};

fn ring(r: u32, s: u32) -> Arc<Ring> {
    QuantumParams::new(r, s).unwrap().ring()
}

/// `(-1)^k [k+1]` straight from powers of `A`.
fn delta(ring: &Arc<Ring>, k: i64) -> Scalar {
    let num = &Scalar::a_pow(ring, 2 * (k + 1)) - &Scalar::a_pow(ring, -2 * (k + 1));
    let den = &Scalar::a_pow(ring, 2) - &Scalar::a_pow(ring, -2);
    let v = num.checked_div(&den).unwrap();
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

fn qint(ring: &Arc<Ring>, n: i64) -> Scalar {
    let num = &Scalar::a_pow(ring, 2 * n) - &Scalar::a_pow(ring, -2 * n);
    let den = &Scalar::a_pow(ring, 2) - &Scalar::a_pow(ring, -2);
    num.checked_div(&den).unwrap()
}

fn hopf(labels: [LinkLabel; 2], framings: [i64; 2]) -> LabeledLink {
    let built = BraidDiagram::new(2, &[1, 1]).closure().unwrap();
    LabeledLink::new(built.diagram, labels.to_vec(), framings.to_vec())
}

#[test]
fn unknots_give_loop_values() {
    for r in 3..=7 {
        let ring = ring(r, 1);
        for k in 0..=(r - 2) {
            let v = evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(k), 0)).unwrap();
            assert_eq!(v, delta(&ring, k as i64), "r={r} k={k}");
        }
    }
}

#[test]
fn empty_link_is_one() {
    let ring = ring(5, 1);
    assert!(evaluate(&ring, &LabeledLink::empty()).unwrap().is_one());
}

#[test]
fn kink_and_twist_values() {
    for (r, s) in [(4, 1), (5, 1), (5, 3), (6, 1)] {
        let ring = ring(r, s);
        let kink = evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(1), 1)).unwrap();
        assert_eq!(kink, -(&Scalar::a_pow(&ring, 3) * &Scalar::d(&ring)));
        let anti = evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(1), -1)).unwrap();
        assert_eq!(anti, -(&Scalar::a_pow(&ring, -3) * &Scalar::d(&ring)));
        for k in 0..=(r as i64 - 2) {
            let sign = if k % 2 == 0 { Scalar::one(&ring) } else { -Scalar::one(&ring) };
            let expect = &(&sign * &Scalar::a_pow(&ring, k * (k + 2))) * &delta(&ring, k);
            let v = evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(k as u32), 1)).unwrap();
            assert_eq!(v, expect, "r={r} s={s} k={k}");
        }
    }
}

#[test]
fn hopf_link_values() {
    let ring = ring(5, 1);
    let v = evaluate(&ring, &hopf([LinkLabel::Label(1), LinkLabel::Label(1)], [0, 0])).unwrap();
    // the unknot counts d, so the bracket picks up one extra factor
    let bracket = -(&Scalar::a_pow(&ring, 4) + &Scalar::a_pow(&ring, -4));
    assert_eq!(v, &bracket * &Scalar::d(&ring));
    for r in [4u32, 5, 6] {
        let ring = self::ring(r, 1);
        for j in 0..=(r - 2) {
            for k in 0..=(r - 2) {
                let v = evaluate(&ring, &hopf([LinkLabel::Label(j), LinkLabel::Label(k)], [0, 0])).unwrap();
                let mut expect = qint(&ring, ((j + 1) * (k + 1)) as i64);
                if (j + k) % 2 == 1 {
                    expect = -expect;
                }
                assert_eq!(v, expect, "r={r} j={j} k={k}");
            }
        }
    }
}

#[test]
fn braid_closure_signs_and_linking() {
    let built = BraidDiagram::new(2, &[1, 1]).closure().unwrap();
    let d = &built.diagram;
    assert_eq!(d.comps, 2);
    assert_eq!(d.linking(0, 1), 1);
    assert_eq!(d.self_writhe(0), 0);
    let trefoil = BraidDiagram::new(2, &[1, 1, 1]).closure().unwrap().diagram;
    assert_eq!(trefoil.comps, 1);
    assert_eq!(trefoil.self_writhe(0), 3);
    let neg = BraidDiagram::new(3, &[-1, 2, -1, 2]).closure().unwrap().diagram;
    assert_eq!(neg.comps, 1);
    assert_eq!(neg.self_writhe(0), 0);
    assert!(neg.is_planar());
}

#[test]
fn encircled_strand_is_hopf() {
    let ring = ring(5, 1);
    for j in 0..=3u32 {
        for i in 0..=3u32 {
            let built = BraidDiagram::new(1, &[]).encircle(0, 0).closure().unwrap();
            let mut labels = vec![LinkLabel::Label(0); built.diagram.comps];
            labels[built.strand_comp[0]] = LinkLabel::Label(j);
            labels[built.circle_comps[0]] = LinkLabel::Label(i);
            let link = LabeledLink::blackboard(built.diagram, labels);
            let v = evaluate(&ring, &link).unwrap();
            let mut expect = qint(&ring, ((i + 1) * (j + 1)) as i64);
            if (i + j) % 2 == 1 {
                expect = -expect;
            }
            assert_eq!(v, expect);
        }
    }
}

#[test]
fn omega_kills_nontrivial_strands() {
    for r in [3u32, 4, 5, 6] {
        let ring = ring(r, 1);
        for k in 1..=(r - 2) {
            let built = BraidDiagram::new(1, &[]).encircle(0, 0).closure().unwrap();
            let mut labels = vec![LinkLabel::Omega; 2];
            labels[built.strand_comp[0]] = LinkLabel::Label(k);
            let link = LabeledLink::blackboard(built.diagram, labels);
            assert!(evaluate(&ring, &link).unwrap().is_zero(), "r={r} k={k}");
        }
        // two parallel 1-strands encircled: only the even part survives
        let built = BraidDiagram::new(2, &[]).encircle(0, 1).closure().unwrap();
        let mut labels = vec![LinkLabel::Label(1); 3];
        labels[built.circle_comps[0]] = LinkLabel::Omega;
        let link = LabeledLink::blackboard(built.diagram, labels);
        let v = evaluate(&ring, &link).unwrap();
        // ω fuses the pair into the trivial channel: (1/(c d)) cup-cap, one loop left
        assert_eq!(v, Scalar::c(&ring).inv().unwrap(), "r={r}");
    }
}

#[test]
fn omega_weights_square_sum_to_one() {
    for r in 3..=8 {
        let ring = ring(r, 1);
        let w = omega_weights(&ring);
        let mut acc = Scalar::zero(&ring);
        for s in &w {
            acc += &(s * s);
        }
        assert!(acc.is_one(), "r={r}");
    }
}

#[test]
fn reidemeister_invariance() {
    let ring = ring(5, 1);
    let lab = |d: su2tqft::skein::Diagram| {
        let n = d.comps;
        LabeledLink::new(d, vec![LinkLabel::Label(2); n], vec![0; n])
    };
    let unknot = evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(2), 0)).unwrap();
    let r2 = BraidDiagram::new(2, &[1, -1]).closure().unwrap().diagram;
    // two components, unlinked
    let two = &unknot * &unknot;
    assert_eq!(evaluate(&ring, &lab(r2)).unwrap(), two);
    let a = BraidDiagram::new(3, &[1, 2, 1, 2, -1]).closure().unwrap().diagram;
    let b = BraidDiagram::new(3, &[2, 1, 2, 2, -1]).closure().unwrap().diagram;
    assert_eq!(evaluate(&ring, &lab(a)).unwrap(), evaluate(&ring, &lab(b)).unwrap());
    // Markov stabilization with framing corrected
    let t = BraidDiagram::new(2, &[1, 1, 1]).closure().unwrap().diagram;
    let t3 = BraidDiagram::new(3, &[1, 1, 1, 2]).closure().unwrap().diagram;
    assert_eq!(evaluate(&ring, &lab(t)).unwrap(), evaluate(&ring, &lab(t3)).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn closures_match_markov_trace(strands in 2usize..=4, raw in prop::collection::vec((1i32..4, any::<bool>()), 0..7)) {
        let ring = ring(5, 1);
        let word: Vec<i32> = raw
            .iter()
            .map(|&(i, s)| { let i = 1 + (i - 1) % (strands as i32 - 1); if s { i } else { -i } })
            .collect();
        let built = BraidDiagram::new(strands, &word).closure().unwrap();
        let n = built.diagram.comps;
        let link = LabeledLink::blackboard(built.diagram, vec![LinkLabel::Label(1); n]);
        let v = evaluate(&ring, &link).unwrap();
        let t = markov_trace(&resolve_braid(&ring, &word, strands).unwrap());
        prop_assert_eq!(v, t);
    }
}

#[test]
fn surgery_presentations_agree() {
    for r in [3u32, 4, 5] {
        let ring = ring(r, 1);
        let o = LinkLabel::Omega;
        let c = framing_anomaly(&ring).unwrap();
        // S^3
        let empty = SurgeryPresentation { link: LabeledLink::empty(), signature: 0 };
        let plus = SurgeryPresentation::from_link(LabeledLink::unknot(o, 1));
        let minus = SurgeryPresentation::from_link(LabeledLink::unknot(o, -1));
        let hopf0 = SurgeryPresentation::from_link(hopf([o, o], [0, 0]));
        assert_eq!(plus.signature, 1);
        assert_eq!(hopf0.signature, 0);
        let one = Scalar::one(&ring);
        for p in [&empty, &plus, &minus, &hopf0] {
            assert_eq!(normalized_z(&ring, p).unwrap(), one, "S3 r={r}");
        }
        // S^1 x S^2
        let z0 = SurgeryPresentation::from_link(LabeledLink::unknot(o, 0));
        let inv_c = Scalar::c(&ring).inv().unwrap();
        assert_eq!(normalized_z(&ring, &z0).unwrap(), inv_c, "S1xS2 r={r}");
        let hopf11 = SurgeryPresentation::from_link(hopf([o, o], [1, 1]));
        assert_eq!(hopf11.signature, 1);
        assert_eq!(normalized_z(&ring, &hopf11).unwrap(), inv_c);
        // RP^3 = L(2,1)
        let u2 = SurgeryPresentation::from_link(LabeledLink::unknot(o, 2));
        let h31 = SurgeryPresentation::from_link(hopf([o, o], [3, 1]));
        assert_eq!(h31.signature, 2);
        let a = normalized_z(&ring, &u2).unwrap();
        assert_eq!(a, normalized_z(&ring, &h31).unwrap(), "RP3 r={r}");
        // raw values obey the C^{n-m} rule
        let za = evaluate(&ring, &u2.link).unwrap();
        let zb = evaluate(&ring, &h31.link).unwrap();
        assert_eq!(zb, &za * &c);
    }
}

#[test]
fn signature_examples() {
    assert_eq!(signature(&[]), 0);
    assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
    assert_eq!(signature(&[vec![-2]]), -1);
    assert_eq!(signature(&[vec![1, 1], vec![1, 1]]), 1);
    assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), 0);
    assert_eq!(signature(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), 3);
}

#[test]
fn random_moves_preserve_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 3];
    for case in 0..24 {
        let r = 3 + (case % 3) as u32;
        let ring = ring(r, 1);
        let (link, mv) = random_move_case(&mut rng, r);
        match mv {
            Move::HandleSlide { .. } => seen[0] += 1,
            Move::BalancedStabilization => seen[1] += 1,
            Move::CircumcisionPair { .. } => seen[2] += 1,
            Move::Identity => {}
        }
        let after = apply_move(&link, &mv).unwrap();
        after.validate(&ring).unwrap();
        assert_eq!(evaluate(&ring, &link).unwrap(), evaluate(&ring, &after).unwrap(), "case {case}: {mv:?}");
    }
    assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
}

#[test]
fn handle_slide_changes_framing_correctly() {
    // slide a 0-framed unknot K over a 1-framed ω unknot J it links once
    let link = hopf([LinkLabel::Label(1), LinkLabel::Omega], [0, 1]);
    let x = 0;
    let leg = (0..4)
        .find(|&p| link.diagram.comp_at(x, p) == 0 && link.diagram.comp_at(x, (p + 1) % 4) == 1)
        .unwrap();
    let after = apply_move(&link, &Move::HandleSlide { crossing: x, leg }).unwrap();
    let m = after.linking_matrix();
    // K' = K + J or K - J: framing 0 + 1 ± 2
    assert!(m[0][0] == 3 || m[0][0] == -1, "{m:?}");
    assert_eq!(m[1][1], 1);
    let ring = ring(5, 1);
    assert_eq!(evaluate(&ring, &link).unwrap(), evaluate(&ring, &after).unwrap());
}

#[test]
fn pd_round_trip() {
    let ring = ring(5, 1);
    let links = [
        hopf([LinkLabel::Label(1), LinkLabel::Omega], [0, 2]),
        LabeledLink::blackboard(BraidDiagram::new(3, &[1, -2, 1, -2]).closure().unwrap().diagram, vec![LinkLabel::Label(2)]),
        LabeledLink::unknot(LinkLabel::Label(3), -1),
    ];
    for link in links {
        let j = link_to_json(&link).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back = parse_link_str(&text).unwrap();
        assert_eq!(back.linking_matrix(), link.linking_matrix());
        assert_eq!(back.diagram.crossing_count(), link.diagram.crossing_count());
        assert_eq!(back.labels, link.labels);
        assert_eq!(evaluate(&ring, &back).unwrap(), evaluate(&ring, &link).unwrap());
        assert!(!pretty(&back).is_empty());
        let _ = link_from_json(&j).unwrap();
    }
}

#[test]
fn pd_trefoil_from_text() {
    // right-handed trefoil, signs inferred from traversal
    let text = r#"{"version":1,"crossings":[[1,5,2,4],[3,1,4,6],[5,3,6,2]],
        "components":[{"edges":[1,2,3,4,5,6],"label":1}]}"#;
    let link = parse_link_str(text).unwrap();
    let w = link.diagram.self_writhe(0);
    assert_eq!(w.abs(), 3);
    let ring = ring(5, 1);
    let v = evaluate(&ring, &LabeledLink::blackboard(link.diagram.clone(), vec![LinkLabel::Label(1)])).unwrap();
    let word = if w > 0 { vec![1, 1, 1] } else { vec![-1, -1, -1] };
    assert_eq!(v, markov_trace(&resolve_braid(&ring, &word, 2).unwrap()));
    // no framing given means blackboard framing
    assert_eq!(link.framings[0], w);
    assert_eq!(evaluate(&ring, &link).unwrap(), v);
    let explicit = text.replace("\"label\":1", "\"label\":1,\"framing\":0");
    let zero = evaluate(&ring, &parse_link_str(&explicit).unwrap()).unwrap();
    let kink = -Scalar::a_pow(&ring, 3 * w.signum());
    assert_eq!(&zero * &kink.pow(w.unsigned_abs() as u32), v);
}

#[test]
fn bad_inputs_are_rejected() {
    let ring = ring(4, 1);
    assert!(evaluate(&ring, &LabeledLink::unknot(LinkLabel::Label(3), 0)).is_err());
    assert!(parse_link_str("{\"crossings\":[[1,2,3,4]],\"components\":[{\"edges\":[1,2],\"label\":1}]}").is_err());
    assert!(parse_link_str("not json").is_err());
    assert!(BraidDiagram::new(2, &[2]).closure().is_err());
}
