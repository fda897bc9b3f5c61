//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use dg_workbench::cli::run;
use dg_workbench::dgalg::{fixtures, pushout, DgAlgebra, DgMorphism};
use dg_workbench::exactalg::{
    groebner_basis, membership_certificate, normal_form, unit_ideal_certificate, BaseRing, Polynomial, Rational,
};
use dg_workbench::homotopy::{brown_factorize, certify_quasi_iso, path_object, recognize_fibration, Verdict};
use dg_workbench::resolution::{
    check_naturality, induced_level_maps, resolve, resolve_truncated, verify_special, Resolution, SimplicialDgAlgebra,
};
use dg_workbench::sampling::{rng, sample_points_with_origin};
use dg_workbench::site::{
    cech_hypercover, coherence, covering_verdict, etale_verdict, verify_hypercover, Condition1, Hypercover,
};
use dg_workbench::dgalg::localize;
use rand::Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn load(name: &str) -> DgAlgebra {
    DgAlgebra::from_json_str(&std::fs::read_to_string(fixture_dir().join(name)).unwrap()).unwrap()
}

fn images(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }
}

/// Five seeded points on the line, the origin first.
fn line_samples() -> Vec<Vec<Rational>> {
    sample_points_with_origin(&BaseRing::free(&["x"]), 11, 5)
}

fn gb_and_certificates() -> Check {
    let r = BaseRing::free(&["x", "y"]);
    let gens = [r.parse("x^2 - y").unwrap(), r.parse("y^2").unwrap()];
    let gb = groebner_basis(&gens, r.order()).map_err(|e| e.to_string())?;
    let x4 = r.parse("x^4").unwrap();
    ensure!(normal_form(&x4, &gb).is_zero(), "x^4 does not reduce to 0");
    let g = membership_certificate(&r, &gens, &x4).ok_or("no cofactors for x^4")?;
    let expanded = g[0].mul(&gens[0]).add(&g[1].mul(&gens[1]));
    ensure!(expanded == x4, "cofactors re-expand to {}", r.display(&expanded));

    let line = BaseRing::free(&["x"]);
    let fs = [line.parse("x").unwrap(), line.parse("1 - x").unwrap()];
    let c = unit_ideal_certificate(&line, &fs).ok_or("no unit certificate")?;
    let sum = c[0].mul(&fs[0]).add(&c[1].mul(&fs[1]));
    ensure!(sum == Polynomial::one(1), "Σ g_i f_i = {}", line.display(&sum));
    Ok(())
}

/// Fiber ranks of the presentation against cohomology of the fiber
/// complex, compared at points where every presentation has its generic
/// fiber rank.
fn fiber_oracle(a: &DgAlgebra, depth: i32, points: &[Vec<Rational>]) -> Result<BTreeMap<String, Vec<usize>>, String> {
    let pres: Vec<_> = (0..=depth).map(|k| a.cohomology(-k).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let mut g = rng(99);
    let generic: Vec<usize> = pres
        .iter()
        .map(|p| (0..20).map(|_| p.fiber_rank(&[Rational::new(g.gen_range(-50..=50).into(), g.gen_range(1..=9).into())])).min().unwrap())
        .collect();
    let mut seen = BTreeMap::new();
    for pt in points {
        let ranks: Vec<usize> = pres.iter().map(|p| p.fiber_rank(pt)).collect();
        let fiber = a.fiber_at(pt, depth).map_err(|e| e.to_string())?;
        if ranks == generic {
            for k in 0..=depth {
                let o = fiber.rank(-k).unwrap_or(0);
                ensure!(o == ranks[k as usize], "H^{} at {pt:?}: presentation {} vs fiber complex {o}", -k, ranks[k as usize]);
            }
        }
        seen.insert(format!("{}", pt[0]), ranks);
    }
    Ok(seen)
}

fn cohomology_fixtures() -> Check {
    let k = load("koszul.json");
    let h0 = k.h0_ring();
    ensure!(h0.relation_basis() == [h0.parse_raw("x").unwrap()], "H⁰(Koszul) is not ℚ[x]/(x)");
    for d in 1..=3 {
        ensure!(k.cohomology(-d).unwrap().is_zero(), "H^{} of Koszul is nonzero", -d);
    }
    let t = load("twin.json");
    let h1 = t.cohomology(-1).map_err(|e| e.to_string())?;
    ensure!(h1.rank == 1 && h1.relation_strings() == ["x"], "twin H^-1: rank {}, {:?}", h1.rank, h1.relation_strings());
    let pts = line_samples();
    ensure!(pts.len() == 5, "only {} sample points", pts.len());
    fiber_oracle(&k, 3, &pts)?;
    let seen = fiber_oracle(&t, 3, &pts)?;
    for (x, ranks) in &seen {
        let want = usize::from(x == "0");
        ensure!(ranks[1] == want, "twin H^-1 fiber rank {} at x = {x}", ranks[1]);
    }
    Ok(())
}

fn path_object_check() -> Check {
    let qx = load("qx.json");
    let f = path_object(&qx, 3).map_err(|e| e.to_string())?;
    let p = &f.algebra;
    ensure!(p.base().nvars() == 2 && p.base().relations().is_empty(), "P⁰ is not a polynomial ring in two variables");
    ensure!(p.ngens() == 1 && p.degree_of(0) == -1, "P does not have one generator in degree -1");
    let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let d = p.generators()[0].differential.coeff(&dg_workbench::dgalg::GenMono::one()).cloned().unwrap_or(Polynomial::zero(2));
    ensure!(d == x.sub(&y) || d == y.sub(&x), "δε = {}", p.base().display(&d));
    let src = &f.fibration.source;
    ensure!(src.base().nvars() == 2 && src.ngens() == 0 && f.fibration.base_images == [x.clone(), y.clone()], "P⁰ is not A⁰ ⊗ A⁰");
    let comp = f.composite().map_err(|e| e.to_string())?;
    ensure!(comp.base_images == [Polynomial::var(1, 0), Polynomial::var(1, 0)], "composite is not multiplication");
    ensure!(recognize_fibration(&f.fibration).is_fibration(), "first leg not recognized as a fibration");
    let v = certify_quasi_iso(&f.weak_equivalence, 3).map_err(|e| e.to_string())?;
    ensure!(v.verdict == Verdict::Certified, "second leg: {:?}", v.verdict);
    Ok(())
}

fn brown_check() -> Check {
    let qx = load("qx.json");
    let pt = load("point.json");
    let ev = DgMorphism::from_images(qx, pt.clone(), &images(&[("x", "0")])).map_err(|e| e.to_string())?;
    let b = brown_factorize(&ev, 3).map_err(|e| e.to_string())?;
    let p = &b.algebra;
    ensure!(p.base().nvars() == 1 && p.ngens() == 1 && p.degree_of(0) == -1, "P′ is not Koszul-shaped");
    let d = p.generators()[0].differential.coeff(&dg_workbench::dgalg::GenMono::one()).cloned().unwrap_or(Polynomial::zero(1));
    let x = Polynomial::var(1, 0);
    ensure!(d == x || d == x.neg(), "δu = {}", p.base().display(&d));
    let s = b.section.as_ref().ok_or("no section")?;
    let back = s.then(&b.weak_equivalence).map_err(|e| e.to_string())?;
    ensure!(back == DgMorphism::identity(&pt), "section is not a right inverse");
    let comp = b.composite().map_err(|e| e.to_string())?;
    ensure!(comp.base_images == ev.base_images && comp.gen_images == ev.gen_images, "composite differs from the input");
    Ok(())
}

fn is_constant(r: &Resolution, a: &DgAlgebra) -> bool {
    let s = &r.simplicial;
    let id = |m: &DgMorphism| *m == DgMorphism::identity(a);
    s.levels.iter().all(|l| l == a) && s.faces.iter().flatten().all(id) && s.degeneracies.iter().flatten().all(id)
}

fn resolution_check() -> Check {
    let qx = load("qx.json");
    let r = resolve(&qx, 3).map_err(|e| e.to_string())?;
    ensure!(is_constant(&r, &qx), "resolve(ℚ[x], 3) is not constant");

    let k = load("koszul.json");
    let r1 = resolve(&k, 1).map_err(|e| e.to_string())?;
    let a1 = r1.level(1);
    let mut adds = BTreeMap::new();
    for it in &r1.items[1] {
        *adds.entry(it.degree).or_insert(0usize) += 1;
    }
    ensure!(adds == BTreeMap::from([(-1, 2), (0, 2)]), "level 1 adds {adds:?}");
    // d_0 kills the block over {0} and sends the block over {1} to e; d_1
    // the other way round.
    let e = |name: &str| a1.gen_index(name).unwrap();
    let kz = &r1.simplicial.levels[0];
    let d0 = &r1.simplicial.faces[1][0];
    let d1 = &r1.simplicial.faces[1][1];
    ensure!(
        d0.gen_images[e("E1_0_1_1")].is_zero() && d0.gen_images[e("E1_1_1_1")] == kz.gen(0),
        "d0 does not follow the block pattern"
    );
    ensure!(
        d1.gen_images[e("E1_0_1_1")] == kz.gen(0) && d1.gen_images[e("E1_1_1_1")].is_zero(),
        "d1 does not follow the block pattern"
    );

    let samples = line_samples();
    let mut all = vec![("qx", qx.clone()), ("koszul", k.clone()), ("twin", load("twin.json")), ("path_qx", load("path_qx.json"))];
    all.push(("point", load("point.json")));
    for (name, a) in &all {
        let r = resolve(a, 2).map_err(|e| e.to_string())?;
        ensure!(r.simplicial.levels[0] == *a, "{name}: level 0 differs from the input");
        let pts: Vec<Vec<Rational>> = if a.base().nvars() == 1 {
            samples.clone()
        } else {
            sample_points_with_origin(a.base(), 11, 5)
        };
        let rep = verify_special(&r, &r.simplicial, &pts, 3, 11).map_err(|e| e.to_string())?;
        ensure!(rep.pass && !rep.inconclusive, "{name}: not special at K = 3");
    }

    // rank Ē^k_{n+1} = Σ_{j=1}^{n+1} C(n+2, j)·rank of the top block at level j-1.
    let r3 = resolve_truncated(&k, 3, 3).map_err(|e| e.to_string())?;
    let top = r3.top_ranks();
    for n1 in 1..=3usize {
        for d in 1..=3usize {
            let expected: usize = (1..=n1).map(|j| binomial(n1 + 1, j) * top[j - 1][d - 1]).sum();
            let actual = r3.items[n1].iter().filter(|it| it.degree == -(d as i32) && it.name.starts_with('E')).count();
            ensure!(expected == actual, "level {n1}, degree -{d}: {actual} new generators, recursion gives {expected}");
        }
    }
    Ok(())
}

fn mutate_resolution(s: &SimplicialDgAlgebra, seed: u64) -> SimplicialDgAlgebra {
    let mut g = rng(seed);
    let mut s = s.clone();
    let n = g.gen_range(1..s.levels.len());
    let i = g.gen_range(0..=n);
    let f = &s.faces[n][i];
    let mut base = f.base_images.clone();
    let v = g.gen_range(0..base.len());
    base[v] = base[v].add(&Polynomial::one(f.target.base().nvars()));
    s.faces[n][i] = DgMorphism::unchecked(f.source.clone(), f.target.clone(), base, f.gen_images.clone()).unwrap();
    s
}

fn mutate_hypercover(h: &Hypercover, seed: u64) -> Hypercover {
    let mut g = rng(seed);
    let mut h = h.clone();
    let n = g.gen_range(1..h.levels.len());
    let i = g.gen_range(0..=n);
    let k = g.gen_range(0..h.faces[n][i].components.len());
    let c = &h.faces[n][i].components[k];
    let mut base = c.base_images.clone();
    let v = g.gen_range(0..base.len());
    base[v] = base[v].add(&Polynomial::one(c.target.base().nvars()));
    h.faces[n][i].components[k] = DgMorphism::unchecked(c.source.clone(), c.target.clone(), base, c.gen_images.clone()).unwrap();
    h
}

fn identities_check() -> Check {
    let mut resolutions = Vec::new();
    for name in ["qx.json", "koszul.json", "twin.json"] {
        resolutions.push((name, resolve(&load(name), 2).map_err(|e| e.to_string())?));
    }
    for (name, r) in &resolutions {
        let f = r.simplicial.check_identities().map_err(|e| e.to_string())?;
        ensure!(f.is_empty(), "{name}: {} identity failures", f.len());
    }
    let qx = load("qx.json");
    let fs = [qx.base().parse("x").unwrap(), qx.base().parse("1 - x").unwrap()];
    let h = cech_hypercover(&qx, &fs, 3).map_err(|e| e.to_string())?;
    ensure!(h.check_identities().map_err(|e| e.to_string())?.is_empty(), "hypercover identities fail");

    for seed in 0..12 {
        let (name, r) = &resolutions[1 + (seed as usize) % 2];
        let bad = mutate_resolution(&r.simplicial, seed);
        let found = !bad.check_identities().map_err(|e| e.to_string())?.is_empty()
            || !r.check_block_pattern(&bad).map_err(|e| e.to_string())?.is_empty();
        ensure!(found, "{name}: mutation {seed} not detected");
        let bad = mutate_hypercover(&h, seed);
        ensure!(!bad.check_identities().map_err(|e| e.to_string())?.is_empty(), "hypercover mutation {seed} not detected");
    }
    Ok(())
}

fn functoriality_check() -> Check {
    let qx = load("qx.json");
    let twin = load("twin.json");
    let phi = DgMorphism::from_images(qx.clone(), twin.clone(), &images(&[("x", "x")])).map_err(|e| e.to_string())?;
    let (ra, rb) = (resolve(&qx, 2).map_err(|e| e.to_string())?, resolve(&twin, 2).map_err(|e| e.to_string())?);
    let maps = induced_level_maps(&phi, &ra, &rb).map_err(|e| e.to_string())?;
    ensure!(maps.len() == 3, "{} level maps", maps.len());
    ensure!(maps[0] == phi, "level 0 map is not φ");
    let f = check_naturality(&ra, &rb, &maps).map_err(|e| e.to_string())?;
    ensure!(f.is_empty(), "{} naturality failures", f.len());
    Ok(())
}

fn site_check() -> Check {
    let qx = load("qx.json");
    let b = qx.base();
    let fs = [b.parse("x").unwrap(), b.parse("1 - x").unwrap()];
    let members: Vec<DgMorphism> = fs.iter().map(|f| localize(&qx, f).unwrap().1).collect();
    let v = covering_verdict(&qx, &members, 3, 0, 5).map_err(|e| e.to_string())?;
    ensure!(v.covering, "{{x, 1-x}} not certified");
    let v = covering_verdict(&qx, &members[..1], 3, 0, 5).map_err(|e| e.to_string())?;
    ensure!(!v.covering && v.condition3 == dg_workbench::site::Condition3::Refuted, "{{x}} not refuted");
    let sq = DgMorphism::from_images(qx.clone(), qx.clone(), &images(&[("x", "x^2")])).map_err(|e| e.to_string())?;
    let e = etale_verdict(&sq, 3).map_err(|e| e.to_string())?;
    ensure!(e.condition1 == Condition1::Refuted && e.condition1_witness.is_some(), "x ↦ x² not refuted via Ω");

    let h = cech_hypercover(&qx, &fs, 2).map_err(|e| e.to_string())?;
    let closed: Vec<usize> = (0..=2).map(|n| (0..=n.min(1)).map(|m| binomial(n, m) * binomial(2, m + 1)).sum()).collect();
    ensure!(h.factor_counts() == [2, 3, 4] && closed == [2, 3, 4], "counts {:?}, closed form {closed:?}", h.factor_counts());
    for c in verify_hypercover(&h, 3, 0).map_err(|e| e.to_string())? {
        ensure!(c.certified, "level {} not certified: {:?}", c.level, c.failures);
    }
    ensure!(coherence(&qx, &fs, &[vec![0], vec![1]], &[0, 1]).map_err(|e| e.to_string())?, "A[1/x][1/(1-x)] ≇ A[1/x(1-x)]");
    Ok(())
}

/// Sources, fibrations out of them, and maps along which to push out.
fn homotopy_corpus(seed: u64) -> Vec<(DgMorphism, DgMorphism)> {
    let mut g = rng(seed);
    let poly = |g: &mut rand_chacha::ChaCha8Rng, vars: &[&str]| -> String {
        let mut terms = vec![format!("{}", g.gen_range(-3..=3))];
        for v in vars {
            let c = g.gen_range(-3..=3);
            if c != 0 {
                terms.push(format!("{c}*{v}^{}", g.gen_range(1..=2)));
            }
        }
        terms.join(" + ")
    };
    let mut out = Vec::new();
    for _ in 0..16 {
        let (vars, gens): (Vec<&str>, Vec<(&str, i32, String)>) = match g.gen_range(0..3) {
            0 => (vec!["x"], vec![]),
            1 => (vec!["x", "y"], vec![]),
            _ => (vec!["x"], vec![("e", -1, "x".to_string())]),
        };
        let gs: Vec<(&str, i32, &str)> = gens.iter().map(|(n, d, s)| (*n, *d, s.as_str())).collect();
        let a = fixtures::algebra(&vars, &gs);
        let mut bvars = vars.clone();
        let mut bgens = gs.clone();
        let q = poly(&mut g, &vars);
        let kill = poly(&mut g, &vars);
        let path = format!("z - ({q})");
        match g.gen_range(0..3) {
            0 => {
                bvars.push("z");
                bgens.push(("eps", -1, path.as_str()));
            }
            1 => bvars.push("u"),
            _ => bgens.push(("eta", -1, kill.as_str())),
        }
        let b = fixtures::algebra(&bvars, &bgens);
        let phi = DgMorphism::from_images(a.clone(), b, &BTreeMap::new()).unwrap();
        let mut cvars = vars.clone();
        cvars.push("w");
        let c = fixtures::algebra(&cvars, &gs);
        let psi = DgMorphism::from_images(a, c, &BTreeMap::new()).unwrap();
        out.push((phi, psi));
    }
    out
}

fn homotopy_axioms_check() -> Check {
    for (i, (phi, psi)) in homotopy_corpus(5).iter().enumerate() {
        ensure!(recognize_fibration(phi).is_fibration(), "case {i}: generated map is not a fibration");
        let po = pushout(phi, psi).map_err(|e| e.to_string())?;
        ensure!(recognize_fibration(&po.to_right).is_fibration(), "case {i}: pushout leg is not a fibration");
    }
    // Chains of path inclusions: A → A[z][ε] → A[z, w][ε, η].
    let mut g = rng(6);
    for i in 0..8 {
        let (c1, c2) = (g.gen_range(-3..=3), g.gen_range(-3..=3));
        let a = fixtures::polynomial(&["x"]);
        let p1 = format!("z - ({c1}*x^2 + 1)");
        let p2 = format!("w - ({c2}*z + x)");
        let b = fixtures::algebra(&["x", "z"], &[("eps", -1, &p1)]);
        let c = if i % 3 == 2 {
            fixtures::algebra(&["x", "z", "w"], &[("eps", -1, &p1)])
        } else {
            fixtures::algebra(&["x", "z", "w"], &[("eps", -1, &p1), ("eta", -1, &p2)])
        };
        let f = DgMorphism::from_images(a, b.clone(), &BTreeMap::new()).unwrap();
        let h = DgMorphism::from_images(b, c, &BTreeMap::new()).unwrap();
        let fh = f.then(&h).map_err(|e| e.to_string())?;
        let v: Vec<Verdict> = [&f, &h, &fh].iter().map(|m| certify_quasi_iso(m, 3).map(|q| q.verdict)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for third in 0..3 {
            let others = (0..3).filter(|&j| j != third).all(|j| v[j] == Verdict::Certified);
            ensure!(!(others && v[third] == Verdict::Refuted), "chain {i}: verdicts {v:?}");
        }
    }
    Ok(())
}

fn cli_check() -> Check {
    let dir = fixture_dir();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let res = tmp.path().join("koszul_res.json");
    let f = |n: &str| dir.join(n).display().to_string();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["validate".into(), f("koszul.json")], 0),
        (vec!["validate".into(), f("invalid/delta_squared.json")], 1),
        (vec!["validate".into(), f("invalid/positive_degree.json")], 1),
        (vec!["validate".into(), f("invalid/unknown_symbol.json")], 65),
        (vec!["validate".into(), f("invalid/truncated.json")], 65),
        (vec!["cohomology".into(), f("twin.json"), "--degree".into(), "-1".into()], 0),
        (vec!["qiso".into(), f("incl.json"), "--depth".into(), "3".into()], 0),
        (vec!["qiso".into(), f("square.json")], 1),
        (vec!["path".into(), f("qx.json")], 0),
        (vec!["factorize".into(), f("evaluation.json")], 0),
        (vec!["resolve".into(), f("koszul.json"), "--levels".into(), "2".into(), "--emit".into(), res.display().to_string()], 0),
        (vec!["verify-special".into(), res.display().to_string(), "--seed".into(), "3".into()], 0),
        (vec!["matching".into(), res.display().to_string(), "--level".into(), "2".into()], 0),
        (vec!["cover".into(), f("atlas_cover.json")], 0),
        (vec!["cover".into(), f("atlas_single.json")], 1),
        (vec!["hypercover".into(), f("atlas_cover.json"), "--levels".into(), "2".into()], 0),
        (vec!["shrink".into(), f("atlas_cover.json")], 0),
        (vec!["shrink".into(), f("atlas_single.json")], 1),
        (vec!["resolve".into()], 64),
        (vec!["frobnicate".into()], 64),
    ];
    for (args, code) in &cases {
        let argv: Vec<String> = std::iter::once("dgwb".to_string()).chain(args.iter().cloned()).collect();
        let a = run(&argv);
        ensure!(a.code == *code, "dgwb {}: exit {} (expected {code}) {}", args.join(" "), a.code, a.stderr);
        let b = run(&argv);
        ensure!(a == b, "dgwb {}: reports differ between runs", args.join(" "));
        if matches!(a.code, 0..=2) {
            let v: serde_json::Value = serde_json::from_str(&a.stdout).map_err(|e| e.to_string())?;
            ensure!(dg_workbench::cli::report::to_json(&v) == a.stdout, "dgwb {}: output is not canonical", args.join(" "));
        }
    }
    let h = run(["dgwb", "hypercover", &f("atlas_cover.json"), "--levels", "2"]);
    let v: serde_json::Value = serde_json::from_str(&h.stdout).unwrap();
    ensure!(v["result"]["factor_counts"] == serde_json::json!([2, 3, 4]), "hypercover counts {}", v["result"]["factor_counts"]);
    Ok(())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("Gröbner kernel and certificates", gb_and_certificates),
        ("cohomology fixtures against the fiberwise oracle", cohomology_fixtures),
        ("path object", path_object_check),
        ("factorization of ℚ[x] → ℚ", brown_check),
        ("resolutions", resolution_check),
        ("simplicial identities and mutation detection", identities_check),
        ("functoriality of resolutions", functoriality_check),
        ("coverings and hypercovers", site_check),
        ("homotopy-axiom properties", homotopy_axioms_check),
        ("CLI determinism and exit codes", cli_check),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let ms = t.elapsed().as_millis();
        match r {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({ms} ms): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
