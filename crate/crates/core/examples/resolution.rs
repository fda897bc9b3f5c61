//! Functorial simplicial resolutions: levels, block decomposition, the
//! special property on sampled fibers, and induced maps.

use std::collections::BTreeMap;

use dg_workbench::dgalg::{fixtures, DgMorphism};
use dg_workbench::exactalg::{rat, ratio};
use dg_workbench::resolution::{check_naturality, induced_level_maps, resolve, verify_special};

fn main() -> dg_workbench::Result<()> {
    let k = fixtures::koszul();
    let r = resolve(&k, 2)?;
    for n in 0..r.levels().len() {
        let a = r.level(n);
        println!("level {n}: variables {:?}, generators {:?}", a.base().names(), a.generators().iter().map(|g| &g.name).collect::<Vec<_>>());
    }
    for c in r.rank_recursion() {
        println!("level {} degree {}: expected {} new generators, adjoined {}", c.level, c.degree, c.expected, c.actual);
    }
    println!("identity failures: {}", r.simplicial.check_identities()?.len());

    let samples = vec![vec![rat(0)], vec![rat(1)], vec![rat(2)], vec![ratio(1, 2)], vec![rat(-1)]];
    let rep = verify_special(&r, &r.simplicial, &samples, 3, 1)?;
    println!("special: {} ({} samples with zero H⁰ fiber)", rep.pass, rep.h0_flags.len());

    let qx = fixtures::polynomial(&["x"]);
    let twin = fixtures::twin_koszul();
    let phi = DgMorphism::from_images(qx.clone(), twin.clone(), &BTreeMap::from([("x".to_string(), "x".to_string())]))?;
    let (ra, rb) = (resolve(&qx, 2)?, resolve(&twin, 2)?);
    let maps = induced_level_maps(&phi, &ra, &rb)?;
    println!("naturality failures: {}", check_naturality(&ra, &rb, &maps)?.len());
    Ok(())
}
