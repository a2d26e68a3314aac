//! Scenario documents: a bipartite space, a state, named operators, a task
//! and its parameters, in JSON.
//!
//! ```json
//! {
//!   "space": {"d1": 2, "d2": 2},
//!   "state": {"vector": [[0, 0], [0.7071067811865476, 0], [-0.7071067811865476, 0], [0, 0]]},
//!   "operators": [
//!     {"name": "Z", "side": 1, "kind": "projection", "matrix": [1, 0, 0, 0]}
//!   ],
//!   "task": "chsh-optimize",
//!   "params": {"seed": 7}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs; a bare number is read as a real
//! entry. Matrices are flat and row-major. The state is one of `vector`
//! (optionally with `"normalize": true`), `density`, or `product: [i, j]`
//! for eᵢ ⊗ eⱼ. Every error names the offending field path.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, StructureKind, C64};
use crate::state::{BipartiteSpace, QuantumState, Side, SideOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    CheckEpr,
    ChshValue,
    ChshOptimize,
    WitnessFromEpr,
    MaximalProjections,
    Mirror,
    DensitySweep,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::CheckEpr,
        Task::ChshValue,
        Task::ChshOptimize,
        Task::WitnessFromEpr,
        Task::MaximalProjections,
        Task::Mirror,
        Task::DensitySweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::CheckEpr => "check-epr",
            Task::ChshValue => "chsh-value",
            Task::ChshOptimize => "chsh-optimize",
            Task::WitnessFromEpr => "witness-from-epr",
            Task::MaximalProjections => "maximal-projections",
            Task::Mirror => "mirror",
            Task::DensitySweep => "density-sweep",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct NamedOperator {
    pub name: String,
    pub op: SideOperator,
    pub kind: Option<StructureKind>,
}

/// Operator names for the four slots of a pair set or witness.
pub type Quad = [String; 4];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    /// `pairs: {e1, f1, e2, f2}`
    pub pairs: Option<Quad>,
    /// `witness: {a1, b1, a2, b2}`
    pub witness: Option<Quad>,
    pub projection: Option<String>,
    pub n_values: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub space: BipartiteSpace,
    pub state: QuantumState,
    pub operators: Vec<NamedOperator>,
    pub task: Option<Task>,
    pub params: Params,
}

impl Scenario {
    pub fn operator(&self, name: &str) -> Option<&SideOperator> {
        self.operators.iter().find(|o| o.name == name).map(|o| &o.op)
    }

    /// Resolves four operator names, reporting the first unknown one.
    pub fn resolve(&self, names: &Quad, path: &str) -> Result<[SideOperator; 4]> {
        let mut out = Vec::with_capacity(4);
        for (i, name) in names.iter().enumerate() {
            let op = self.operator(name).ok_or_else(|| Error::Validation {
                path: format!("{path}[{i}]"),
                message: format!("no operator named `{name}`"),
            })?;
            out.push(op.clone());
        }
        Ok(out.try_into().expect("four names resolve to four operators"))
    }
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.to_string(),
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(path, "expected a non-negative integer"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(path, "expected a string"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(&join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn complex(v: &Value, path: &str) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(parse_err(path, "complex entry must hold two numbers")),
        },
        _ => Err(parse_err(path, "expected a number or an [re, im] pair")),
    }
}

fn entries(v: &Value, expected: usize, path: &str) -> Result<Vec<C64>> {
    let items = array(v, path)?;
    if items.len() != expected {
        return Err(parse_err(
            path,
            format!("expected {expected} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| complex(x, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(v: &Value, dim: usize, path: &str) -> Result<ComplexMatrix> {
    let data = entries(v, dim * dim, path)?;
    ComplexMatrix::from_entries(dim, data).map_err(|e| invalid(path, e.to_string()))
}

fn parse_space(v: &Value) -> Result<BipartiteSpace> {
    let obj = object(v, "space")?;
    let d1 = uint(field(obj, "d1", "space")?, "space.d1")? as usize;
    let d2 = uint(field(obj, "d2", "space")?, "space.d2")? as usize;
    if d1 == 0 || d2 == 0 {
        return Err(invalid("space", "dimensions must be positive"));
    }
    BipartiteSpace::new(d1, d2).map_err(|e| invalid("space", e.to_string()))
}

fn parse_state(v: &Value, space: BipartiteSpace) -> Result<QuantumState> {
    let obj = object(v, "state")?;
    let n = space.total();
    if let Some(vec) = obj.get("vector") {
        let psi = entries(vec, n, "state.vector")?;
        let normalize = obj.get("normalize").and_then(Value::as_bool).unwrap_or(false);
        let built = if normalize {
            QuantumState::pure_normalized(space, psi)
        } else {
            QuantumState::pure(space, psi)
        };
        return built.map_err(|e| invalid("state.vector", e.to_string()));
    }
    if let Some(rho) = obj.get("density") {
        let m = matrix(rho, n, "state.density")?;
        return QuantumState::from_density(space, m).map_err(|e| invalid("state.density", e.to_string()));
    }
    if let Some(p) = obj.get("product") {
        let idx = array(p, "state.product")?;
        if idx.len() != 2 {
            return Err(parse_err("state.product", "expected [i, j]"));
        }
        let i = uint(&idx[0], "state.product[0]")? as usize;
        let j = uint(&idx[1], "state.product[1]")? as usize;
        return QuantumState::product_basis(space, i, j).map_err(|e| invalid("state.product", e.to_string()));
    }
    Err(parse_err("state", "expected one of `vector`, `density`, `product`"))
}

fn parse_operator(v: &Value, space: BipartiteSpace, path: &str) -> Result<NamedOperator> {
    let obj = object(v, path)?;
    let name = string(field(obj, "name", path)?, &join(path, "name"))?.to_string();
    let side_path = join(path, "side");
    let side = field(obj, "side", path)?
        .as_u64()
        .and_then(|s| Side::from_index(s as u8))
        .ok_or_else(|| parse_err(&side_path, "side must be 1 or 2"))?;
    let kind = match obj.get("kind") {
        None => None,
        Some(k) => {
            let kind_path = join(path, "kind");
            Some(string(k, &kind_path)?.parse::<StructureKind>().map_err(|m| parse_err(&kind_path, m))?)
        }
    };
    let matrix_path = join(path, "matrix");
    let local = matrix(field(obj, "matrix", path)?, space.side_dim(side), &matrix_path)?;
    if let Some(kind) = kind {
        let check = linalg::validate(kind, &local);
        if !check.ok {
            return Err(invalid(
                &matrix_path,
                format!("operator `{name}` is declared {kind} but is not (residual {:.3e})", check.residual),
            ));
        }
    }
    let op = SideOperator::new(space, side, local).map_err(|e| invalid(&matrix_path, e.to_string()))?;
    Ok(NamedOperator { name, op, kind })
}

fn parse_quad(v: &Value, keys: [&str; 4], path: &str) -> Result<Quad> {
    let obj = object(v, path)?;
    let mut out: Vec<String> = Vec::with_capacity(4);
    for key in keys {
        out.push(string(field(obj, key, path)?, &join(path, key))?.to_string());
    }
    Ok(out.try_into().expect("four keys"))
}

fn parse_params(v: &Value) -> Result<Params> {
    let obj = object(v, "params")?;
    let mut p = Params::default();
    for (key, value) in obj {
        let path = join("params", key);
        match key.as_str() {
            "seed" => p.seed = Some(uint(value, &path)?),
            "restarts" => p.restarts = Some(uint(value, &path)? as usize),
            "max_iterations" => p.max_iterations = Some(uint(value, &path)? as usize),
            "pairs" => p.pairs = Some(parse_quad(value, ["e1", "f1", "e2", "f2"], &path)?),
            "witness" => p.witness = Some(parse_quad(value, ["a1", "b1", "a2", "b2"], &path)?),
            "projection" => p.projection = Some(string(value, &path)?.to_string()),
            "n_values" => {
                let items = array(value, &path)?;
                let ns = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| uint(x, &format!("{path}[{i}]")).map(|n| n as usize))
                    .collect::<Result<Vec<_>>>()?;
                p.n_values = Some(ns);
            }
            _ => return Err(parse_err(&path, "unknown parameter")),
        }
    }
    Ok(p)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    let root = object(&doc, "$")?;
    let space = parse_space(field(root, "space", "")?)?;
    let state = parse_state(field(root, "state", "")?, space)?;
    let mut operators: Vec<NamedOperator> = Vec::new();
    if let Some(ops) = root.get("operators") {
        for (i, op) in array(ops, "operators")?.iter().enumerate() {
            let path = format!("operators[{i}]");
            let parsed = parse_operator(op, space, &path)?;
            if operators.iter().any(|o| o.name == parsed.name) {
                return Err(invalid(&join(&path, "name"), format!("duplicate operator name `{}`", parsed.name)));
            }
            operators.push(parsed);
        }
    }
    let task = match root.get("task") {
        None => None,
        Some(t) => Some(string(t, "task")?.parse::<Task>().map_err(|m| parse_err("task", m))?),
    };
    let params = match root.get("params") {
        None => Params::default(),
        Some(p) => parse_params(p)?,
    };
    let scenario = Scenario {
        space,
        state,
        operators,
        task,
        params,
    };
    // Every referenced name must resolve.
    if let Some(q) = &scenario.params.pairs {
        scenario.resolve(q, "params.pairs")?;
    }
    if let Some(q) = &scenario.params.witness {
        scenario.resolve(q, "params.witness")?;
    }
    if let Some(name) = &scenario.params.projection {
        if scenario.operator(name).is_none() {
            return Err(invalid("params.projection", format!("no operator named `{name}`")));
        }
    }
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

/// Serializes a matrix in the scenario entry format.
pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.entries()
            .iter()
            .map(|z| serde_json::json!([z.re, z.im]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const PSI1: &str = r#"{
        "space": {"d1": 3, "d2": 3},
        "state": {"vector": [0.3333333333333333, 0, 0, 0, 0.3333333333333333, 0, 0, 0, [0.881917103688197, 0]]},
        "operators": [
            {"name": "P", "side": 1, "kind": "projection", "matrix": [1,0,0, 0,0,0, 0,0,0]},
            {"name": "Q", "side": 2, "kind": "projection", "matrix": [1,0,0, 0,0,0, 0,0,0]}
        ],
        "task": "check-epr",
        "params": {"pairs": {"e1": "P", "f1": "P", "e2": "Q", "f2": "Q"}, "seed": 3}
    }"#;

    #[test]
    fn parses_well_formed_document() {
        let s = parse_scenario(PSI1).unwrap();
        assert_eq!((s.space.d1, s.space.d2), (3, 3));
        assert_eq!(s.task, Some(Task::CheckEpr));
        assert_eq!(s.params.seed, Some(3));
        assert_eq!(s.operators.len(), 2);
        assert!(s.operator("Q").unwrap().side() == Side::Two);
    }

    #[test]
    fn wrong_entry_count_names_the_field() {
        let text = PSI1.replace(
            r#""name": "Q", "side": 2, "kind": "projection", "matrix": [1,0,0, 0,0,0, 0,0,0]"#,
            r#""name": "Q", "side": 2, "kind": "projection", "matrix": [1,0,0, 0,0,0, 0,0]"#,
        );
        match parse_scenario(&text) {
            Err(Error::Parse { path, message }) => {
                assert_eq!(path, "operators[1].matrix");
                assert!(message.contains("expected 9 entries, found 8"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_projection_is_rejected_by_name() {
        let text = PSI1.replace(r#""name": "P", "side": 1, "kind": "projection", "matrix": [1,0,0"#, r#""name": "P", "side": 1, "kind": "projection", "matrix": [2,0,0"#);
        match parse_scenario(&text) {
            Err(Error::Validation { path, message }) => {
                assert_eq!(path, "operators[0].matrix");
                assert!(message.contains("`P`"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unresolved_names_and_unknown_fields() {
        let text = PSI1.replace(r#""f2": "Q""#, r#""f2": "R""#);
        assert!(matches!(parse_scenario(&text), Err(Error::Validation { path, .. }) if path == "params.pairs[3]"));
        let text = PSI1.replace(r#""seed": 3"#, r#""sead": 3"#);
        assert!(matches!(parse_scenario(&text), Err(Error::Parse { path, .. }) if path == "params.sead"));
        assert!(matches!(parse_scenario("{"), Err(Error::Parse { .. })));
        let text = PSI1.replace(r#""side": 2"#, r#""side": 3"#);
        assert!(matches!(parse_scenario(&text), Err(Error::Parse { path, .. }) if path == "operators[1].side"));
    }

    #[test]
    fn state_forms() {
        let product = r#"{"space": {"d1": 2, "d2": 3}, "state": {"product": [1, 2]}}"#;
        let s = parse_scenario(product).unwrap();
        assert_eq!(s.state.vector().unwrap()[5], C64::new(1.0, 0.0));
        let mixed = r#"{"space": {"d1": 1, "d2": 2}, "state": {"density": [0.5, 0, 0, [0.5, 0]]}}"#;
        assert!(!parse_scenario(mixed).unwrap().state.is_pure());
        let unnormalized = r#"{"space": {"d1": 1, "d2": 2}, "state": {"vector": [1, 1]}}"#;
        assert!(matches!(parse_scenario(unnormalized), Err(Error::Validation { .. })));
        let normalized = r#"{"space": {"d1": 1, "d2": 2}, "state": {"vector": [1, 1], "normalize": true}}"#;
        assert!(parse_scenario(normalized).is_ok());
    }

    #[test]
    fn matrix_serialization_round_trips() {
        let m = ComplexMatrix::from_entries(2, vec![C64::new(1.0, 0.5), C64::new(0.0, -2.0), C64::new(3.0, 0.0), C64::new(0.25, 0.0)]).unwrap();
        let back = matrix(&matrix_to_json(&m), 2, "m").unwrap();
        assert_eq!(back, m);
    }
}
