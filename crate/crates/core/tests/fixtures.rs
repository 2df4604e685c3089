use cliffmech_core::dynamics::EquationSet;
use cliffmech_core::forms::{interior_product, liouville_form, symplectic_form_of_structure, Rational};
use cliffmech_core::structure::{build_structure, Sign, Variant};
use cliffmech_core::{symbolic_equations, BLOCKS, STRUCTURES};
use serde_json::Value;

const FORMS: &str = include_str!("../fixtures/liouville_forms.json");
const TABLES: &str = include_str!("../fixtures/structure_tables.json");

fn triples(v: &Value) -> Vec<(usize, usize, i64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|t| (t[0].as_u64().unwrap() as usize, t[1].as_u64().unwrap() as usize, t[2].as_i64().unwrap()))
        .collect()
}

fn forms() -> Vec<Value> {
    serde_json::from_str::<Value>(FORMS).unwrap().as_array().unwrap().clone()
}

#[test]
fn liouville_forms_match_transcription() {
    for entry in forms() {
        let k = entry["k"].as_u64().unwrap() as usize;
        let got: Vec<_> = liouville_form(k, 1).unwrap().linear_terms();
        let want: Vec<_> = triples(&entry["liouville_half_coefficients"])
            .into_iter()
            .map(|(a, b, s)| (a, b, Rational::new(s, 2)))
            .collect();
        assert_eq!(got, want, "λ for J{k}*");
    }
}

#[test]
fn two_forms_match_transcription_for_each_n() {
    for entry in forms() {
        let k = entry["k"].as_u64().unwrap() as usize;
        let pairs: Vec<(usize, usize)> = entry["two_form_terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| (p[0].as_u64().unwrap() as usize, p[1].as_u64().unwrap() as usize))
            .collect();
        for n in 1..=3 {
            let phi = symplectic_form_of_structure(k, n).unwrap();
            let dim = BLOCKS * n;
            for a in 0..dim {
                for b in 0..dim {
                    let (ba, bb, ia, ib) = (a / n, b / n, a % n, b % n);
                    let want = if ia != ib {
                        0
                    } else if pairs.contains(&(ba, bb)) {
                        1
                    } else if pairs.contains(&(bb, ba)) {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(phi.get(a, b), Rational::from_integer(want), "Φ_J{k}* n={n} [{a}][{b}]");
                }
            }
        }
    }
}

#[test]
fn interior_products_match_transcription() {
    for entry in forms() {
        let k = entry["k"].as_u64().unwrap() as usize;
        let terms = triples(&entry["interior_product_terms"]);
        let phi = symplectic_form_of_structure(k, 1).unwrap();
        let x: Vec<f64> = (0..BLOCKS).map(|a| (a as f64 + 1.0) * 0.75 - 2.0).collect();
        let mut want = vec![0.0; BLOCKS];
        for (a, b, s) in terms {
            want[b] += s as f64 * x[a];
        }
        assert_eq!(interior_product(&phi, &x).unwrap().components, want, "i_X Φ for J{k}*");
    }
}

#[test]
fn equation_sets_match_transcription() {
    let mut records = 0;
    for k in 1..=STRUCTURES {
        let reference = EquationSet::reference(k).unwrap();
        assert_eq!(&symbolic_equations(k).unwrap(), reference, "J{k}");
        records += reference.equations.len();
    }
    assert_eq!(records, 48);
}

#[test]
fn tables_replicate_across_coordinates() {
    let tables: Value = serde_json::from_str(TABLES).unwrap();
    for t in tables.as_array().unwrap() {
        let k = t["k"].as_u64().unwrap() as usize;
        let variant = if t["variant"] == "dual" { Variant::Dual } else { Variant::Primal };
        let entries: Vec<(usize, i64)> = t["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e[0].as_u64().unwrap() as usize, e[1].as_i64().unwrap()))
            .collect();
        for n in 1..=4 {
            let j = build_structure(k, n, variant).unwrap();
            for a in 0..BLOCKS * n {
                let (tb, s) = entries[a / n];
                let sign = if s > 0 { Sign::Plus } else { Sign::Minus };
                assert_eq!(j.image(a), (tb * n + a % n, sign), "J{k} {variant} n={n} e{a}");
            }
        }
    }
}
