//! Input documents and their schema validation.

use std::path::Path;

use serde_json::{Map, Value};

use super::CliError;
use crate::gates::{self, DEFAULT_CAP};
use crate::matrix::CycMatrix;
use crate::permgroup::Perm;

/// `{"type":"permutation","degree":3,"generators":[[2,1,3],[2,3,1]]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDef {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    Hadamard { wire: usize },
    Phase { theta: String, wire: usize },
    Cnot { control: usize, target: usize },
}

#[derive(Debug, Clone)]
pub struct GateSetDef {
    pub wires: usize,
    pub gates: Vec<GateKind>,
    pub cap: Option<usize>,
}

/// A wreath-product step: one internal permutation per point and a space permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathStep {
    pub internal: Vec<Perm>,
    pub space: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvolutionDef {
    Classical { t0: i64, states: Vec<usize> },
    Quantum { initial: Vec<usize>, steps: Vec<WreathStep> },
}

#[derive(Debug, Clone)]
pub struct ScenarioDef {
    pub points: usize,
    pub space_generators: Vec<Perm>,
    pub local_states: usize,
    pub internal_generators: Vec<Perm>,
    pub evolutions: Vec<EvolutionDef>,
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("io_error", format!("{}: {e}", path.display()), None))?;
    serde_json::from_str(&text).map_err(|e| CliError::input("malformed_json", e.to_string(), None))
}

fn schema(pointer: &str, message: impl Into<String>) -> CliError {
    CliError::input("schema_error", message.into(), Some(pointer.to_string()))
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| schema(ptr, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, ptr: &str, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| schema(ptr, format!("missing required key \"{key}\"")))
}

fn child(ptr: &str, key: impl std::fmt::Display) -> String {
    format!("{ptr}/{key}")
}

fn uint(v: &Value, ptr: &str) -> Result<usize, CliError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(ptr, "expected a nonnegative integer"))
}

fn int(v: &Value, ptr: &str) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| schema(ptr, "expected an integer"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn uint_list(v: &Value, ptr: &str) -> Result<Vec<usize>, CliError> {
    array(v, ptr)?.iter().enumerate().map(|(i, x)| uint(x, &child(ptr, i))).collect()
}

fn optional_uint(obj: &Map<String, Value>, ptr: &str, key: &str) -> Result<Option<usize>, CliError> {
    obj.get(key).map(|v| uint(v, &child(ptr, key))).transpose()
}

fn reject_unknown(obj: &Map<String, Value>, ptr: &str, allowed: &[&str]) -> Result<(), CliError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(&child(ptr, k), format!("unknown key \"{k}\""))),
        None => Ok(()),
    }
}

/// 1-based images of a permutation of `degree` points.
fn perm(v: &Value, ptr: &str, degree: usize) -> Result<Perm, CliError> {
    let images = uint_list(v, ptr)?;
    if images.len() != degree {
        return Err(schema(ptr, format!("expected {degree} images, got {}", images.len())));
    }
    Perm::from_one_based(&images).map_err(|e| schema(ptr, e.to_string()))
}

fn perm_list(v: &Value, ptr: &str, degree: usize) -> Result<Vec<Perm>, CliError> {
    array(v, ptr)?.iter().enumerate().map(|(i, p)| perm(p, &child(ptr, i), degree)).collect()
}

pub fn parse_group(doc: &Value) -> Result<GroupDef, CliError> {
    let obj = object(doc, "")?;
    reject_unknown(obj, "", &["type", "degree", "generators"])?;
    match field(obj, "", "type")?.as_str() {
        Some("permutation") => {}
        _ => return Err(schema("/type", "expected \"permutation\"")),
    }
    let degree = uint(field(obj, "", "degree")?, "/degree")?;
    if degree == 0 {
        return Err(schema("/degree", "degree must be positive"));
    }
    let generators = perm_list(field(obj, "", "generators")?, "/generators", degree)?;
    Ok(GroupDef { degree, generators })
}

pub fn parse_gates(doc: &Value) -> Result<GateSetDef, CliError> {
    let obj = object(doc, "")?;
    reject_unknown(obj, "", &["gates", "cap", "wires"])?;
    let list = array(field(obj, "", "gates")?, "/gates")?;
    if list.is_empty() {
        return Err(schema("/gates", "at least one gate is required"));
    }
    let cap = optional_uint(obj, "", "cap")?;
    let mut wires = optional_uint(obj, "", "wires")?;
    let mut out = Vec::with_capacity(list.len());
    for (i, g) in list.iter().enumerate() {
        let ptr = child("/gates", i);
        let g = object(g, &ptr)?;
        let kind = field(g, &ptr, "kind")?.as_str().ok_or_else(|| schema(&child(&ptr, "kind"), "expected a string"))?;
        if let Some(w) = optional_uint(g, &ptr, "wires")? {
            match wires {
                Some(prev) if prev != w => {
                    return Err(schema(&child(&ptr, "wires"), format!("wire count {w} disagrees with {prev}")))
                }
                _ => wires = Some(w),
            }
        }
        let gate = match kind {
            "hadamard" => {
                reject_unknown(g, &ptr, &["kind", "wire", "wires"])?;
                GateKind::Hadamard { wire: optional_uint(g, &ptr, "wire")?.unwrap_or(0) }
            }
            "phase" => {
                reject_unknown(g, &ptr, &["kind", "theta", "wire", "wires"])?;
                let theta = field(g, &ptr, "theta")?
                    .as_str()
                    .ok_or_else(|| schema(&child(&ptr, "theta"), "expected a fraction string such as \"1/4\""))?;
                gates::parse_theta(theta).map_err(|e| schema(&child(&ptr, "theta"), e.to_string()))?;
                GateKind::Phase { theta: theta.to_string(), wire: optional_uint(g, &ptr, "wire")?.unwrap_or(0) }
            }
            "cnot" => {
                reject_unknown(g, &ptr, &["kind", "control", "target", "wires"])?;
                GateKind::Cnot {
                    control: uint(field(g, &ptr, "control")?, &child(&ptr, "control"))?,
                    target: uint(field(g, &ptr, "target")?, &child(&ptr, "target"))?,
                }
            }
            other => return Err(schema(&child(&ptr, "kind"), format!("unknown gate kind \"{other}\""))),
        };
        out.push(gate);
    }
    let needs_two = out.iter().any(|g| matches!(g, GateKind::Cnot { .. }));
    let wires = wires.unwrap_or(if needs_two { 2 } else { 1 });
    if wires == 0 || wires > 8 {
        return Err(schema("/wires", "wire count must be between 1 and 8"));
    }
    for (i, g) in out.iter().enumerate() {
        let ptr = child("/gates", i);
        let bad = match g {
            GateKind::Hadamard { wire } | GateKind::Phase { wire, .. } => (*wire >= wires).then_some("wire"),
            GateKind::Cnot { control, target } => {
                if *control >= wires {
                    Some("control")
                } else if *target >= wires || target == control {
                    Some("target")
                } else {
                    None
                }
            }
        };
        if let Some(key) = bad {
            return Err(schema(&child(&ptr, key), format!("invalid wire for a {wires}-wire register")));
        }
    }
    Ok(GateSetDef { wires, gates: out, cap })
}

impl GateSetDef {
    pub fn matrices(&self) -> Result<Vec<CycMatrix>, CliError> {
        self.gates
            .iter()
            .map(|g| {
                let m = match g {
                    GateKind::Hadamard { wire } => gates::on_wire(&gates::hadamard(), *wire, self.wires),
                    GateKind::Phase { theta, wire } => gates::parse_theta(theta)
                        .and_then(|t| gates::phase(&t))
                        .and_then(|p| gates::on_wire(&p, *wire, self.wires)),
                    GateKind::Cnot { control, target } => gates::cnot_on(*control, *target, self.wires),
                };
                m.map_err(CliError::from)
            })
            .collect()
    }

    pub fn default_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_CAP)
    }
}

pub fn parse_scenario(doc: &Value) -> Result<ScenarioDef, CliError> {
    let obj = object(doc, "")?;
    reject_unknown(obj, "", &["points", "space_generators", "local_states", "internal_generators", "evolutions"])?;
    let points = uint(field(obj, "", "points")?, "/points")?;
    let local_states = uint(field(obj, "", "local_states")?, "/local_states")?;
    if points == 0 {
        return Err(schema("/points", "must be positive"));
    }
    if local_states == 0 {
        return Err(schema("/local_states", "must be positive"));
    }
    let space_generators = perm_list(field(obj, "", "space_generators")?, "/space_generators", points)?;
    let internal_generators = perm_list(field(obj, "", "internal_generators")?, "/internal_generators", local_states)?;
    let mut evolutions = Vec::new();
    if let Some(list) = obj.get("evolutions") {
        for (i, e) in array(list, "/evolutions")?.iter().enumerate() {
            let ptr = child("/evolutions", i);
            let e = object(e, &ptr)?;
            let kind = field(e, &ptr, "kind")?.as_str();
            let ev = match kind {
                Some("classical") => {
                    reject_unknown(e, &ptr, &["kind", "t0", "states"])?;
                    let t0 = e.get("t0").map(|v| int(v, &child(&ptr, "t0"))).transpose()?.unwrap_or(0);
                    let sptr = child(&ptr, "states");
                    let states = uint_list(field(e, &ptr, "states")?, &sptr)?
                        .into_iter()
                        .enumerate()
                        .map(|(k, s)| s.checked_sub(1).ok_or_else(|| schema(&child(&sptr, k), "states are 1-based")))
                        .collect::<Result<_, _>>()?;
                    EvolutionDef::Classical { t0, states }
                }
                Some("quantum") => {
                    reject_unknown(e, &ptr, &["kind", "initial", "steps"])?;
                    let iptr = child(&ptr, "initial");
                    let initial = uint_list(field(e, &ptr, "initial")?, &iptr)?;
                    if initial.len() != points {
                        return Err(schema(&iptr, format!("expected one local state per point ({points})")));
                    }
                    let initial = initial
                        .into_iter()
                        .enumerate()
                        .map(|(k, s)| match s {
                            1.. if s <= local_states => Ok(s - 1),
                            _ => Err(schema(&child(&iptr, k), format!("local state outside 1..{local_states}"))),
                        })
                        .collect::<Result<_, _>>()?;
                    let sptr = child(&ptr, "steps");
                    let mut steps = Vec::new();
                    for (k, s) in array(field(e, &ptr, "steps")?, &sptr)?.iter().enumerate() {
                        let stptr = child(&sptr, k);
                        let s = object(s, &stptr)?;
                        reject_unknown(s, &stptr, &["internal", "space"])?;
                        let internal =
                            perm_list(field(s, &stptr, "internal")?, &child(&stptr, "internal"), local_states)?;
                        if internal.len() != points {
                            return Err(schema(
                                &child(&stptr, "internal"),
                                format!("expected one internal permutation per point ({points})"),
                            ));
                        }
                        let space = perm(field(s, &stptr, "space")?, &child(&stptr, "space"), points)?;
                        steps.push(WreathStep { internal, space });
                    }
                    EvolutionDef::Quantum { initial, steps }
                }
                _ => return Err(schema(&child(&ptr, "kind"), "expected \"classical\" or \"quantum\"")),
            };
            evolutions.push(ev);
        }
    }
    Ok(ScenarioDef { points, space_generators, local_states, internal_generators, evolutions })
}
