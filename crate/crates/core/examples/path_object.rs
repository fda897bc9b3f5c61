//! Path objects, fibration recognition and quasi-isomorphism verdicts.

use std::collections::BTreeMap;

use dg_workbench::dgalg::{fixtures, DgMorphism};
use dg_workbench::homotopy::{brown_factorize, certify_quasi_iso, path_object, recognize_fibration};

fn main() -> dg_workbench::Result<()> {
    let qx = fixtures::polynomial(&["x"]);
    let f = path_object(&qx, 3)?;
    println!("P = {}", serde_json::to_string(&f.algebra.to_json_value()).unwrap());
    println!("first leg is a fibration: {}", recognize_fibration(&f.fibration).is_fibration());
    println!("second leg: {}", certify_quasi_iso(&f.weak_equivalence, 3)?.verdict.as_str());
    println!("composite: {:?}", f.composite()?.image_strings());

    let point = fixtures::polynomial(&[]);
    let ev = DgMorphism::from_images(qx, point, &BTreeMap::from([("x".to_string(), "0".to_string())]))?;
    let b = brown_factorize(&ev, 3)?;
    println!("ℚ[x] → ℚ factors through {}", serde_json::to_string(&b.algebra.to_json_value()).unwrap());
    println!("section: {:?}", b.section.as_ref().map(|s| s.image_strings()));
    Ok(())
}
