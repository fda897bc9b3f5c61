//! Gröbner bases, normal forms and ideal-membership certificates.

use dg_workbench::exactalg::{groebner_basis, membership_certificate, normal_form, unit_ideal_certificate, BaseRing};

fn main() -> dg_workbench::Result<()> {
    let r = BaseRing::free(&["x", "y"]);
    let gens = [r.parse("x^2 - y")?, r.parse("y^2")?];
    let gb = groebner_basis(&gens, r.order())?;
    println!("GB(x^2 - y, y^2) = [{}]", gb.polys.iter().map(|p| r.display(p)).collect::<Vec<_>>().join(", "));

    let f = r.parse("x^4")?;
    println!("normal form of x^4: {}", r.display(&normal_form(&f, &gb)));
    let g = membership_certificate(&r, &gens, &f).expect("x^4 lies in the ideal");
    let sum = g.iter().zip(&gens).fold(r.zero(), |acc, (a, b)| acc.add(&a.mul(b)));
    println!("x^4 = ({})·(x^2 - y) + ({})·y^2", r.display(&g[0]), r.display(&g[1]));
    assert_eq!(sum, f);

    let line = BaseRing::free(&["x"]);
    let fs = [line.parse("x")?, line.parse("1 - x")?];
    let c = unit_ideal_certificate(&line, &fs).expect("x and 1 - x generate the unit ideal");
    println!("1 = ({})·x + ({})·(1 - x)", line.display(&c[0]), line.display(&c[1]));
    Ok(())
}
