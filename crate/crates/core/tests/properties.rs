use std::collections::BTreeMap;

use dg_workbench::cli::report::to_json;
use dg_workbench::dgalg::{fixtures, pushout, DgAlgebra, DgMorphism};
use dg_workbench::exactalg::{groebner_basis, membership_certificate, normal_form, BaseRing};
use dg_workbench::homotopy::{certify_quasi_iso, recognize_fibration, Verdict};
use dg_workbench::site::{cech_hypercover, expected_factor_count};
use proptest::prelude::*;

fn poly_str(coeffs: &[i32], vars: &[&str]) -> String {
    let mut terms = vec![coeffs[0].to_string()];
    for (i, c) in coeffs[1..].iter().enumerate() {
        let v = vars[i % vars.len()];
        terms.push(format!("({c})*{v}^{}", 1 + i / vars.len()));
    }
    terms.join(" + ")
}

fn small_poly(vars: &'static [&'static str]) -> impl Strategy<Value = String> {
    prop::collection::vec(-4i32..=4, 1..=5).prop_map(move |c| poly_str(&c, vars))
}

fn nondecreasing(n: usize, r: usize) -> usize {
    (0..r.pow(n as u32 + 1) as u64)
        .filter(|&code| {
            let digits: Vec<u64> = (0..=n).map(|i| code / (r as u64).pow(i as u32) % r as u64).collect();
            digits.windows(2).all(|w| w[0] >= w[1])
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent_and_decides_membership(a in small_poly(&["x", "y"]), b in small_poly(&["x", "y"]), h in small_poly(&["x", "y"])) {
        let r = BaseRing::free(&["x", "y"]);
        let gens = [r.parse(&a).unwrap(), r.parse(&b).unwrap()];
        let gb = groebner_basis(&gens, r.order()).unwrap();
        let f = r.parse(&h).unwrap();
        let nf = normal_form(&f, &gb);
        prop_assert_eq!(normal_form(&nf, &gb), nf.clone());
        let member = f.mul(&gens[0]).add(&gens[1]);
        prop_assert!(normal_form(&member, &gb).is_zero());
        let cert = membership_certificate(&r, &gens, &member).unwrap();
        prop_assert_eq!(cert[0].mul(&gens[0]).add(&cert[1].mul(&gens[1])), member);
    }

    #[test]
    fn display_parses_back(h in small_poly(&["x", "y"])) {
        let r = BaseRing::free(&["x", "y"]);
        let f = r.parse(&h).unwrap();
        prop_assert_eq!(r.parse(&r.display(&f)).unwrap(), f);
    }

    #[test]
    fn algebra_json_round_trip(p in small_poly(&["x"]), q in small_poly(&["x", "y"])) {
        let a = fixtures::algebra(&["x", "y"], &[("e", -1, &p), ("f", -1, &q)]);
        let text = serde_json::to_string(&a.to_json_value()).unwrap();
        prop_assert_eq!(DgAlgebra::from_json_str(&text).unwrap(), a);
    }

    #[test]
    fn canonical_json_ignores_insertion_order(entries in prop::collection::btree_map("[a-z]{1,4}", -100i64..100, 0..8)) {
        let forward: serde_json::Map<String, serde_json::Value> = entries.iter().map(|(k, v)| (k.clone(), (*v).into())).collect();
        let backward: serde_json::Map<String, serde_json::Value> = entries.iter().rev().map(|(k, v)| (k.clone(), (*v).into())).collect();
        let (a, b) = (serde_json::json!({"z": forward, "a": 1}), serde_json::json!({"a": 1, "z": backward}));
        prop_assert_eq!(to_json(&a), to_json(&b));
        let again: serde_json::Value = serde_json::from_str(&to_json(&a)).unwrap();
        prop_assert_eq!(to_json(&again), to_json(&a));
    }

    #[test]
    fn pushouts_of_fibrations_are_fibrations(q in small_poly(&["x"]), h in small_poly(&["x"]), kind in 0..3usize) {
        let a = fixtures::algebra(&["x"], &[("e", -1, "x")]);
        let path = format!("z - ({q})");
        let b = match kind {
            0 => fixtures::algebra(&["x", "z"], &[("e", -1, "x"), ("eps", -1, &path)]),
            1 => fixtures::algebra(&["x", "u"], &[("e", -1, "x")]),
            _ => fixtures::algebra(&["x"], &[("e", -1, "x"), ("eta", -1, &h)]),
        };
        let phi = DgMorphism::from_images(a.clone(), b, &BTreeMap::new()).unwrap();
        prop_assert!(recognize_fibration(&phi).is_fibration());
        let c = fixtures::algebra(&["x", "w"], &[("e", -1, "x")]);
        let psi = DgMorphism::from_images(a, c, &BTreeMap::new()).unwrap();
        let po = pushout(&phi, &psi).unwrap();
        prop_assert!(recognize_fibration(&po.to_right).is_fibration());
    }

    #[test]
    fn two_out_of_three(q in small_poly(&["x"]), r in small_poly(&["x"]), full in any::<bool>()) {
        let a = fixtures::polynomial(&["x"]);
        let p1 = format!("z - ({q})");
        let p2 = format!("w - ({r})");
        let b = fixtures::algebra(&["x", "z"], &[("eps", -1, &p1)]);
        let c = if full {
            fixtures::algebra(&["x", "z", "w"], &[("eps", -1, &p1), ("eta", -1, &p2)])
        } else {
            fixtures::algebra(&["x", "z", "w"], &[("eps", -1, &p1)])
        };
        let f = DgMorphism::from_images(a, b.clone(), &BTreeMap::new()).unwrap();
        let g = DgMorphism::from_images(b, c, &BTreeMap::new()).unwrap();
        let fg = f.then(&g).unwrap();
        let v: Vec<Verdict> = [&f, &g, &fg].iter().map(|m| certify_quasi_iso(m, 3).unwrap().verdict).collect();
        for third in 0..3 {
            let others = (0..3).filter(|&j| j != third).all(|j| v[j] == Verdict::Certified);
            prop_assert!(!(others && v[third] == Verdict::Refuted), "{:?}", v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn hypercover_counts_match_enumeration(roots in prop::collection::btree_set(-5i32..=5, 1..=3)) {
        let qx = fixtures::polynomial(&["x"]);
        let fs: Vec<_> = roots.iter().map(|c| qx.base().parse(&format!("x - ({c})")).unwrap()).collect();
        let h = cech_hypercover(&qx, &fs, 2).unwrap();
        let r = fs.len();
        let brute: Vec<usize> = (0..=2).map(|n| nondecreasing(n, r)).collect();
        prop_assert_eq!(h.factor_counts(), brute.clone());
        prop_assert_eq!((0..=2).map(|n| expected_factor_count(n, r)).collect::<Vec<_>>(), brute);
        prop_assert!(h.check_identities().unwrap().is_empty());
    }
}
