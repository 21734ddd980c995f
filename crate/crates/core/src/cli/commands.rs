use std::sync::Arc;

use serde_json::{json, Value};

use super::schema::{self, EvolutionDef, GroupDef, ScenarioDef};
use super::{resolve_cap, CliError, Command};
use crate::born::{born_in_component, born_probability, interference_search, StateVec};
use crate::cyclotomic::Cyclotomic;
use crate::dynamics::{classical_evolve, trajectory_amplitude, wreath_product, SpaceStructure};
use crate::error::Error;
use crate::gates::MatrixGroupClosure;
use crate::permgroup::{ClosureOptions, FiniteGroup};
use crate::repr::{block_diagonalize, isotypic_projectors, multiplicities, CharacterTable, Representation};

const GROUP_CAP: usize = 1_000_000;
const VERIFY_SAMPLES: usize = 200;
const VERIFY_SEED: u64 = 0x5eed;

pub(super) fn dispatch(cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::GroupInfo { input, cap } => group_info(&*load_group(input, *cap)?),
        Command::CharTable { input, cap } => char_table(&load_group(input, *cap)?),
        Command::Decompose { input, cap } => decompose(&load_group(input, *cap)?),
        Command::Born { input, component, n, m, cap } => born(&load_group(input, *cap)?, *component, n, m),
        Command::Interfere { input, component, bound, cap } => interfere(&load_group(input, *cap)?, *component, *bound),
        Command::GatesClosure { input, cap } => gates_closure(input, *cap),
        Command::DynamicsCheck { input, cap } => {
            let s = schema::parse_scenario(&schema::read_json(input)?)?;
            dynamics_check(&s, resolve_cap(*cap, GROUP_CAP)?)
        }
    }
}

fn load_group(path: &std::path::Path, cap: Option<usize>) -> Result<Arc<FiniteGroup>, CliError> {
    let GroupDef { degree, generators } = schema::parse_group(&schema::read_json(path)?)?;
    let gens = if generators.is_empty() { vec![crate::permgroup::Perm::identity(degree)] } else { generators };
    let cap = resolve_cap(cap, GROUP_CAP)?;
    Ok(Arc::new(FiniteGroup::closure(&gens, ClosureOptions { cap })?))
}

fn group_info(g: &FiniteGroup) -> Result<Value, CliError> {
    let classes: Vec<Value> = (0..g.num_classes())
        .map(|k| {
            let ct: Vec<Value> = g.class_cycle_type(k).iter().map(|(l, m)| json!([l, m])).collect();
            json!({
                "size": g.classes()[k].len(),
                "representative": g.element(g.class_representative(k)).to_string(),
                "cycle_type": ct,
                "elements": g.classes()[k].iter().map(|&x| g.element(x as usize).to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let data = g.class_coefficients();
    Ok(json!({
        "degree": g.degree(),
        "order": g.order(),
        "generators": g.generators().iter().map(|p| p.one_based()).collect::<Vec<_>>(),
        "elements": g.elements().iter().map(|p| p.one_based()).collect::<Vec<_>>(),
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "classes": classes,
        "class_coefficients": data.coefficients,
    }))
}

fn table(g: &Arc<FiniteGroup>) -> Result<CharacterTable, CliError> {
    let ct = CharacterTable::compute(g)?;
    ct.verify()?;
    Ok(ct)
}

fn char_table(g: &Arc<FiniteGroup>) -> Result<Value, CliError> {
    Ok(table(g)?.to_json())
}

fn cyc_list(v: &[Cyclotomic]) -> Value {
    Value::Array(v.iter().map(Cyclotomic::to_json).collect())
}

fn decompose(g: &Arc<FiniteGroup>) -> Result<Value, CliError> {
    let ct = table(g)?;
    let r = Representation::natural(g.clone());
    let mults = multiplicities(&r, &ct)?;
    let d = block_diagonalize(&r, &ct)?;
    let blocks: Vec<Value> = d
        .blocks
        .iter()
        .map(|b| json!({"component": b.component, "copy": b.copy, "offset": b.offset, "dim": b.dim}))
        .collect();
    let mut conjugated = Vec::with_capacity(g.order());
    for (x, p) in g.elements().iter().enumerate() {
        let c = d.conjugate(r.image(x));
        if !d.is_block_diagonal(&c) {
            return Err(CliError::internal(format!("conjugated image of {p} is not block diagonal")));
        }
        let parts: Vec<Value> = d.blocks.iter().map(|b| d.block_of(&c, b).to_json()).collect();
        conjugated.push(json!({"element": p.to_string(), "blocks": parts}));
    }
    Ok(json!({
        "dim": r.dim(),
        "character": cyc_list(&r.character()?),
        "multiplicities": mults,
        "t": d.t.to_json(),
        "t_inv": d.t_inv.to_json(),
        "column_norms": cyc_list(&d.column_norms),
        "blocks": blocks,
        "conjugated": conjugated,
    }))
}

fn check_length(g: &FiniteGroup, v: &[u64], flag: &str) -> Result<(), CliError> {
    if v.len() != g.degree() {
        return Err(CliError::input(
            "dimension_mismatch",
            format!("--{flag} has {} entries but the group acts on {} points", v.len(), g.degree()),
            None,
        ));
    }
    Ok(())
}

fn projector(g: &Arc<FiniteGroup>, component: usize) -> Result<crate::matrix::CycMatrix, CliError> {
    let ct = table(g)?;
    if component >= ct.num_classes() {
        return Err(CliError::input(
            "invalid_argument",
            format!("component {component} outside 0..{}", ct.num_classes()),
            None,
        ));
    }
    let mut ps = isotypic_projectors(&Representation::natural(g.clone()), &ct)?;
    Ok(ps.swap_remove(component))
}

fn born(g: &Arc<FiniteGroup>, component: Option<usize>, n: &[u64], m: &[u64]) -> Result<Value, CliError> {
    check_length(g, n, "n")?;
    check_length(g, m, "m")?;
    let (sn, sm) = (StateVec::natural(n), StateVec::natural(m));
    let p = match component {
        Some(j) => born_in_component(&sn, &sm, &projector(g, j)?, j)?,
        None => born_probability(&sm, &sn)?,
    };
    Ok(json!({ "probability": p.to_string() }))
}

fn interfere(g: &Arc<FiniteGroup>, component: usize, bound: u64) -> Result<Value, CliError> {
    let pairs = interference_search(&projector(g, component)?, bound)?;
    Ok(json!({
        "component": component,
        "bound": bound,
        "count": pairs.len(),
        "pairs": pairs.iter().map(|(n, m)| json!([n, m])).collect::<Vec<_>>(),
    }))
}

fn gates_closure(path: &std::path::Path, cap: Option<usize>) -> Result<Value, CliError> {
    let set = schema::parse_gates(&schema::read_json(path)?)?;
    let cap = resolve_cap(cap, set.default_cap())?;
    let closure = MatrixGroupClosure::compute(&set.matrices()?, cap)?;
    let mut report = closure.report()?;
    if !closure.is_complete() {
        return Err(CliError::from(Error::CapExceeded { cap }).with_detail(report));
    }
    let v = closure.verify(VERIFY_SAMPLES, VERIFY_SEED)?;
    if !v.passed() {
        return Err(CliError::internal("closure failed self-validation"));
    }
    report["wires"] = json!(set.wires);
    report["verification"] = json!({
        "product_samples": v.product_samples,
        "products_closed": v.products_closed,
        "inverses_closed": v.inverses_closed,
        "unitary": v.unitary,
    });
    Ok(report)
}

fn dynamics_check(s: &ScenarioDef, cap: usize) -> Result<Value, CliError> {
    let structure = SpaceStructure::new(s.points, &s.space_generators, s.local_states, &s.internal_generators)?;
    let w = wreath_product(&structure, ClosureOptions { cap })?;
    let expected = structure.internal_group.order().pow(s.points as u32) * structure.space_group.order();
    let reclosed = FiniteGroup::closure(w.group.elements(), ClosureOptions { cap })?;
    let group = Arc::new(w.group.clone());
    let natural = Representation::natural(group.clone());
    let mut evolutions = Vec::with_capacity(s.evolutions.len());
    for e in &s.evolutions {
        let report = match e {
            EvolutionDef::Classical { t0, states } => {
                let h = classical_evolve(states, w.num_functions(), *t0)?;
                json!({"kind": "classical", "valid": true, "t0": h.t0, "t_final": h.t_final, "length": h.states.len()})
            }
            EvolutionDef::Quantum { initial, steps } => {
                let mut alphas = Vec::with_capacity(steps.len());
                for (k, st) in steps.iter().enumerate() {
                    let not_member = || Error::InvalidArgument(format!("step {k} is not a group element"));
                    let gamma = st
                        .internal
                        .iter()
                        .map(|p| structure.internal_group.index_of(p).ok_or_else(not_member))
                        .collect::<Result<Vec<_>, _>>()?;
                    let g = structure.space_group.index_of(&st.space).ok_or_else(not_member)?;
                    let perm = w.pair_action(&(gamma, g));
                    alphas.push(group.index_of(&perm).ok_or_else(|| CliError::internal("pair outside closure"))?);
                }
                let mut a0 = vec![Cyclotomic::zero(); w.num_functions()];
                a0[w.function_index(initial)] = Cyclotomic::one();
                let amp = trajectory_amplitude(&natural, &alphas, &a0)?;
                let support: Vec<Value> = amp
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(i, a)| {
                        let f: Vec<usize> = w.function_of(i).iter().map(|v| v + 1).collect();
                        json!({"function": f, "amplitude": a.to_json()})
                    })
                    .collect();
                json!({"kind": "quantum", "steps": steps.len(), "support": support})
            }
        };
        evolutions.push(report);
    }
    Ok(json!({
        "points": s.points,
        "local_states": s.local_states,
        "space_group_order": structure.space_group.order(),
        "internal_group_order": structure.internal_group.order(),
        "functions": w.num_functions(),
        "order": w.group.order(),
        "expected_order": expected,
        "order_matches": w.group.order() == expected,
        "closure_idempotent": reclosed.order() == w.group.order(),
        "projection_homomorphism": w.projection_is_homomorphism(),
        "evolutions": evolutions,
    }))
}
