//! File formats for algebras, morphisms and points.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::algebra::{DgAlgebra, GeneratorSpec};
use super::morphism::DgMorphism;
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, MonomialOrder, OrderKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    pub degree: i64,
    #[serde(default = "zero_text")]
    pub differential: String,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub base: BaseFile,
    #[serde(default)]
    pub generators: Vec<GeneratorFile>,
}

/// Where expression strings live in the source text, so that errors inside
/// them can be reported at file positions.
struct Locator<'a> {
    src: &'a str,
}

impl Locator<'_> {
    fn position_of(&self, s: &str) -> (usize, usize) {
        let quoted = serde_json::to_string(s).unwrap_or_default();
        match self.src.find(&quoted) {
            Some(off) => {
                let before = &self.src[..off];
                let line = before.matches('\n').count() + 1;
                let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 2;
                (line, col)
            }
            None => (1, 1),
        }
    }

    fn remap(&self, s: &str, err: Error) -> Error {
        match err {
            Error::Parse { line, column, message } if line == 1 => {
                let (l0, c0) = self.position_of(s);
                Error::Parse { line: l0, column: c0 + column - 1, message }
            }
            e => e,
        }
    }
}

pub fn json_error(e: serde_json::Error) -> Error {
    if e.is_data() {
        Error::Schema(format!("schema error at line {}, column {}: {e}", e.line(), e.column()))
    } else {
        Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

impl AlgebraFile {
    fn build(&self, loc: Option<&Locator>, order: OrderKind) -> Result<DgAlgebra> {
        let fix = |s: &str, e: Error| match loc {
            Some(l) => l.remap(s, e),
            None => e,
        };
        let mut vars = self.base.variables.clone();
        let mut negative = Vec::new();
        for g in &self.generators {
            if g.degree > 0 {
                return Err(Error::InvalidAlgebra(format!("generator {}: degree must be ≤ 0", g.name)));
            }
            if g.degree == 0 {
                vars.push(g.name.clone());
            } else {
                negative.push(g);
            }
        }
        let free = BaseRing::new(vars.clone(), vec![]).map_err(|e| Error::InvalidAlgebra(e.to_string()))?;
        let rels = self.base.relations.iter().map(|r| free.parse_raw(r).map_err(|e| fix(r, e))).collect::<Result<Vec<_>>>()?;
        let n = vars.len();
        let base = BaseRing::with_order(vars, rels, MonomialOrder::with_kind(order, n))?;
        for g in self.generators.iter().filter(|g| g.degree == 0) {
            let z = DgAlgebra::from_base(base.clone()).parse_element(&g.differential).map_err(|e| fix(&g.differential, e))?;
            if !z.is_zero() {
                return Err(Error::InvalidAlgebra(format!("generator {}: degree-0 generators have zero differential", g.name)));
            }
        }
        let specs: Vec<GeneratorSpec> =
            negative.iter().map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree as i32 }).collect();
        DgAlgebra::build(base, specs, |skel, i| {
            let src = &negative[i].differential;
            skel.parse_element(src).map_err(|e| fix(src, e))
        })
    }
}

impl DgAlgebra {
    pub fn from_file(f: &AlgebraFile) -> Result<Self> {
        f.build(None, OrderKind::Degrevlex)
    }

    pub fn to_file(&self) -> AlgebraFile {
        let b = self.base();
        AlgebraFile {
            base: BaseFile {
                variables: b.names().to_vec(),
                relations: b.relations().iter().map(|r| b.display(r)).collect(),
            },
            generators: self
                .generators()
                .iter()
                .map(|g| GeneratorFile { name: g.name.clone(), degree: g.degree as i64, differential: self.display(&g.differential) })
                .collect(),
        }
    }

    pub fn from_json_str(src: &str) -> Result<Self> {
        Self::from_json_str_ordered(src, OrderKind::Degrevlex)
    }

    pub fn from_json_str_ordered(src: &str, order: OrderKind) -> Result<Self> {
        let f: AlgebraFile = serde_json::from_str(src).map_err(json_error)?;
        f.build(Some(&Locator { src }), order)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        Self::from_json_value_ordered(v, OrderKind::Degrevlex)
    }

    pub fn from_json_value_ordered(v: &Value, order: OrderKind) -> Result<Self> {
        let f: AlgebraFile = serde_json::from_value(v.clone()).map_err(json_error)?;
        f.build(None, order)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self.to_file()).expect("serializable")
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismFile {
    source: Value,
    target: Value,
    #[serde(default)]
    images: BTreeMap<String, String>,
}

/// An inline algebra, or a path resolved against `dir`.
pub fn load_ref(v: &Value, dir: Option<&Path>, order: OrderKind) -> Result<DgAlgebra> {
    match v {
        Value::String(p) => {
            let path = match dir {
                Some(d) => d.join(p),
                None => Path::new(p).to_path_buf(),
            };
            let src = std::fs::read_to_string(&path)
                .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
            DgAlgebra::from_json_str_ordered(&src, order)
        }
        Value::Object(_) => DgAlgebra::from_json_value_ordered(v, order),
        _ => Err(Error::Schema("source/target must be a file path or an inline algebra".into())),
    }
}

impl DgMorphism {
    /// `dir` resolves relative file references for source and target.
    pub fn from_json_str(src: &str, dir: Option<&Path>) -> Result<Self> {
        Self::from_json_str_ordered(src, dir, OrderKind::Degrevlex)
    }

    pub fn from_json_str_ordered(src: &str, dir: Option<&Path>, order: OrderKind) -> Result<Self> {
        let f: MorphismFile = serde_json::from_str(src).map_err(json_error)?;
        let s = load_ref(&f.source, dir, order)?;
        let t = load_ref(&f.target, dir, order)?;
        let loc = Locator { src };
        DgMorphism::from_images(s, t, &f.images).map_err(|e| match e {
            Error::Parse { .. } => {
                let bad = f.images.values().find(|v| crate::exactalg::parse::parse_expr(v).is_err());
                match bad {
                    Some(v) => loc.remap(v, e),
                    None => e,
                }
            }
            e => e,
        })
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::json!({
            "source": self.source.to_json_value(),
            "target": self.target.to_json_value(),
            "images": self.image_strings(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;

    #[test]
    fn round_trip() {
        for a in [fixtures::koszul(), fixtures::twin_koszul(), fixtures::polynomial(&["x", "y"])] {
            let s = serde_json::to_string(&a.to_json_value()).unwrap();
            assert_eq!(DgAlgebra::from_json_str(&s).unwrap(), a);
        }
    }

    #[test]
    fn rejects_bad_files() {
        let pos = r#"{"base": {"variables": ["x"]}, "generators": [{"name": "e", "degree": 1, "differential": "0"}]}"#;
        let e = DgAlgebra::from_json_str(pos).unwrap_err().to_string();
        assert!(e.contains("degree must be ≤ 0"), "{e}");
        let unk = "{\"base\": {\"variables\": [\"x\"]},\n \"generators\": [{\"name\": \"e\", \"degree\": -1, \"differential\": \"x*f\"}]}";
        match DgAlgebra::from_json_str(unk).unwrap_err() {
            Error::Parse { line, column, message } => {
                assert!(message.contains("unknown symbol f"));
                assert_eq!(line, 2);
                assert_eq!(&unk.lines().nth(1).unwrap()[column - 1..column], "f");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(DgAlgebra::from_json_str("{\"base\": "), Err(Error::Parse { .. })));
    }

    #[test]
    fn degree_zero_generators_join_the_base() {
        let s = r#"{"base": {"variables": ["x"]}, "generators": [{"name": "f", "degree": 0}, {"name": "e", "degree": -1, "differential": "f"}]}"#;
        let a = DgAlgebra::from_json_str(s).unwrap();
        assert_eq!(a.base().names(), ["x", "f"]);
        assert_eq!(a.ngens(), 1);
    }
}
