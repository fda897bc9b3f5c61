//! Cohomology presentations over A⁰ and fiberwise ranks at rational points.

use dg_workbench::dgalg::DgAlgebra;
use dg_workbench::exactalg::{rat, ratio};

const TWIN: &str = r#"{"base": {"variables": ["x"]}, "generators": [
  {"name": "e1", "degree": -1, "differential": "x"},
  {"name": "e2", "degree": -1, "differential": "x"}]}"#;

fn main() -> dg_workbench::Result<()> {
    let a = DgAlgebra::from_json_str(TWIN)?;
    println!("valid: {}", a.validate().valid);
    println!("H^0 = ℚ[x]/({})", a.h0_ring().relation_basis().iter().map(|p| a.base().display(p)).collect::<Vec<_>>().join(", "));
    for k in [-1, -2] {
        let h = a.cohomology(k)?;
        println!("H^{k}: rank {} with relations {:?}", h.rank, h.relation_strings());
    }
    for p in [rat(0), rat(1), ratio(1, 2)] {
        let f = a.fiber_at(&[p.clone()], 2)?;
        println!("fiber at x = {p}: H^-1 rank {:?}", f.rank(-1));
    }
    Ok(())
}
