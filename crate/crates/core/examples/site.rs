//! Étale coverings by basic opens, Čech hypercovers and affine shrinking.

use std::collections::BTreeMap;

use dg_workbench::dgalg::{fixtures, localize, DgMorphism};
use dg_workbench::site::{cech_hypercover, covering_verdict, etale_verdict, shrink_report, verify_hypercover};

fn main() -> dg_workbench::Result<()> {
    let qx = fixtures::polynomial(&["x"]);
    let fs = vec![qx.base().parse("x")?, qx.base().parse("1 - x")?];
    let members = fs.iter().map(|f| localize(&qx, f).map(|m| m.1)).collect::<dg_workbench::Result<Vec<_>>>()?;
    let v = covering_verdict(&qx, &members, 3, 0, 5)?;
    println!("{{x, 1 - x}} covers: {} with cofactors {:?}", v.covering, v.certificate);
    let single = covering_verdict(&qx, &members[..1], 3, 0, 5)?;
    println!("{{x}} covers: {} ({:?})", single.covering, single.condition3_witness);

    let sq = DgMorphism::from_images(qx.clone(), qx.clone(), &BTreeMap::from([("x".to_string(), "x^2".to_string())]))?;
    let e = etale_verdict(&sq, 3)?;
    println!("x ↦ x^2: {:?}, {:?}", e.condition1, e.condition1_witness);

    let h = cech_hypercover(&qx, &fs, 2)?;
    println!("factor counts {:?}, identity failures {}", h.factor_counts(), h.check_identities()?.len());
    for c in verify_hypercover(&h, 3, 0)? {
        println!("level {}: certified {} ({} charts coherent)", c.level, c.certified, c.coherent);
    }
    println!("shrink: {:?}", shrink_report(&fs, &qx));
    Ok(())
}
