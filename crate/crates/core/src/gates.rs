//! Exact quantum gates and breadth-first closure of the matrix groups they generate.

use std::sync::Arc;

use indexmap::IndexSet;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclotomic::{CycField, Cyclotomic};
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::permgroup::orbit_partition;
use crate::rational::Rational;

/// Default element cap for matrix group closures.
pub const DEFAULT_CAP: usize = 100_000;

/// `H = (1/√2)[[1,1],[1,-1]]` with `1/√2 = (ζ_8 - ζ_8^3)/2`.
pub fn hadamard() -> CycMatrix {
    let s = Cyclotomic::sqrt2().scale(&Rational::new(1, 2));
    CycMatrix::from_ints(&[&[1, 1], &[1, -1]]).expect("2x2").scale(&s)
}

/// `R(θ) = diag(1, e^{2πiθ}) = diag(1, ζ_q^p)` for `θ = p/q`.
pub fn phase(theta: &Rational) -> Result<CycMatrix> {
    let (p, q) = theta
        .as_small()
        .ok_or_else(|| Error::NotRepresentable(format!("phase {theta} has an oversized numerator or denominator")))?;
    let q = u32::try_from(q).map_err(|_| Error::NotRepresentable(format!("phase denominator {q} too large")))?;
    Ok(CycMatrix::diagonal(&[Cyclotomic::one(), Cyclotomic::root(q, p)?]))
}

/// Parses `θ` as an exact rational such as `"1/4"` or `"0.125"`.
pub fn parse_theta(s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|_| Error::NotRepresentable(format!("phase {s:?} is not an exact rational")))
}

/// The 4×4 controlled-NOT with control on wire 0.
pub fn cnot() -> CycMatrix {
    cnot_on(0, 1, 2).expect("two wires")
}

/// Places a one-qubit gate on `wire` of a `wires`-qubit register; wire 0 is the high-order factor.
pub fn on_wire(gate: &CycMatrix, wire: usize, wires: usize) -> Result<CycMatrix> {
    if wire >= wires || gate.rows() != 2 || gate.cols() != 2 {
        return Err(Error::InvalidArgument(format!(
            "cannot place a {}x{} gate on wire {wire} of {wires}",
            gate.rows(),
            gate.cols()
        )));
    }
    let id = CycMatrix::identity(2);
    let mut out: Option<CycMatrix> = None;
    for w in 0..wires {
        let factor = if w == wire { gate } else { &id };
        out = Some(match out {
            None => factor.clone(),
            Some(acc) => acc.kron(factor),
        });
    }
    Ok(out.expect("at least one wire"))
}

/// Controlled-NOT flipping `target` when `control` is set; wire 0 is the most significant bit.
pub fn cnot_on(control: usize, target: usize, wires: usize) -> Result<CycMatrix> {
    if control == target || control >= wires || target >= wires {
        return Err(Error::InvalidArgument(format!("invalid cnot wires {control} -> {target} on {wires}")));
    }
    let n = 1usize << wires;
    let bit = |w: usize| 1usize << (wires - 1 - w);
    Ok(CycMatrix::from_fn(n, n, |i, j| {
        let image = if j & bit(control) != 0 { j ^ bit(target) } else { j };
        Cyclotomic::from_int((i == image) as i64)
    }))
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    let (r, c) = (a.rows(), a.cols());
    CycMatrix::from_fn(r + b.rows(), c + b.cols(), |i, j| match (i < r, j < c) {
        (true, true) => a.get(i, j).clone(),
        (false, false) => b.get(i - r, j - c).clone(),
        _ => Cyclotomic::zero(),
    })
}

/// A finite matrix group enumerated breadth-first from the identity.
#[derive(Debug, Clone)]
pub struct MatrixGroupClosure {
    dim: usize,
    field: Arc<CycField>,
    generators: Vec<CycMatrix>,
    keys: IndexSet<Box<[u8]>>,
    /// `right[s][x]` is the id of `x · generators[s]`; filled only when complete.
    right: Vec<Vec<u32>>,
    complete: bool,
    cap: usize,
    growth: Vec<usize>,
    multiplications: usize,
}

impl MatrixGroupClosure {
    /// Enumerates `⟨generators⟩` up to `cap` elements.
    ///
    /// Entries are promoted to the lcm of the generator orders, and generators
    /// are sorted by canonical bytes so the enumeration order does not depend
    /// on the order they are listed in. Exceeding the cap is reported through
    /// [`MatrixGroupClosure::is_complete`], not as an error.
    pub fn compute(generators: &[CycMatrix], cap: usize) -> Result<MatrixGroupClosure> {
        let first = generators.first().ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        let dim = first.rows();
        for g in generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch("generators must be square of equal size".into()));
            }
            g.inverse().map_err(|_| Error::InvalidArgument("generator is not invertible".into()))?;
        }
        let order = generators.iter().fold(1u32, |acc, g| acc.lcm(&g.order()));
        let field = CycField::new(order)?;
        let mut gens: Vec<(Box<[u8]>, CycMatrix)> = generators
            .iter()
            .map(|g| {
                let m = g.promote_in(&field)?;
                Ok((m.canonical_bytes().into_boxed_slice(), m))
            })
            .collect::<Result<_>>()?;
        gens.sort_by(|a, b| a.0.cmp(&b.0));
        gens.dedup_by(|a, b| a.0 == b.0);
        let gen_mats: Vec<CycMatrix> = gens.into_iter().map(|(_, m)| m).collect();

        let identity = CycMatrix::identity(dim).promote_in(&field)?;
        let mut keys: IndexSet<Box<[u8]>> = IndexSet::new();
        keys.insert(identity.canonical_bytes().into_boxed_slice());
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); gen_mats.len()];
        let mut frontier = vec![identity];
        let mut growth = vec![1];
        let mut multiplications = 0;
        let mut complete = true;
        while !frontier.is_empty() {
            let products: Vec<Vec<(Box<[u8]>, CycMatrix)>> = frontier
                .par_iter()
                .map(|x| {
                    gen_mats
                        .iter()
                        .map(|g| {
                            let y = x * g;
                            (y.canonical_bytes().into_boxed_slice(), y)
                        })
                        .collect()
                })
                .collect();
            multiplications += frontier.len() * gen_mats.len();
            let mut next = Vec::new();
            'level: for row in products {
                for (s, (key, m)) in row.into_iter().enumerate() {
                    let (id, fresh) = keys.insert_full(key);
                    if fresh {
                        if keys.len() > cap {
                            complete = false;
                            break 'level;
                        }
                        next.push(m);
                    }
                    right[s].push(id as u32);
                }
            }
            if !complete {
                growth.push(next.len() + 1);
                keys.truncate(cap);
                right.clear();
                break;
            }
            if !next.is_empty() {
                growth.push(next.len());
            }
            frontier = next;
        }
        Ok(MatrixGroupClosure { dim, field, generators: gen_mats, keys, right, complete, cap, growth, multiplications })
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The exact order, when the closure finished under the cap.
    pub fn order(&self) -> Option<usize> {
        self.complete.then_some(self.keys.len())
    }

    pub fn elements_found(&self) -> usize {
        self.keys.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field_order(&self) -> u32 {
        self.field.order()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// New elements discovered at each BFS depth, starting with the identity.
    pub fn growth(&self) -> &[usize] {
        &self.growth
    }

    pub fn multiplications(&self) -> usize {
        self.multiplications
    }

    pub fn generators(&self) -> &[CycMatrix] {
        &self.generators
    }

    pub fn element(&self, id: usize) -> CycMatrix {
        CycMatrix::read_canonical(&self.keys[id], Some(&self.field)).expect("stored canonical bytes")
    }

    /// Looks up a matrix after promotion into the closure's field.
    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        let m = m.promote_in(&self.field).ok()?;
        self.keys.get_index_of(m.canonical_bytes().as_slice())
    }

    fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::CapExceeded { cap: self.cap })
        }
    }

    /// Number of scalar matrices `cI` in the group.
    pub fn scalar_count(&self) -> usize {
        (0..self.keys.len()).into_par_iter().filter(|&i| self.element(i).scalar_value().is_some()).count()
    }

    /// Order modulo the scalar subgroup.
    pub fn phase_quotient_order(&self) -> Result<usize> {
        self.require_complete()?;
        Ok(self.keys.len() / self.scalar_count())
    }

    /// Conjugacy classes as orbits of conjugation by the generators.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<u32>>> {
        self.require_complete()?;
        let maps: Vec<Vec<u32>> = self
            .generators
            .iter()
            .enumerate()
            .map(|(s, g)| {
                let g_inv = g.inverse().expect("invertible generator");
                (0..self.keys.len())
                    .into_par_iter()
                    .map(|x| {
                        let y = &g_inv * &self.element(self.right[s][x] as usize);
                        self.index_of(&y).expect("closed group") as u32
                    })
                    .collect()
            })
            .collect();
        Ok(orbit_partition(self.keys.len(), &maps))
    }

    fn element_order(&self, m: &CycMatrix) -> u64 {
        let mut p = m.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = &p * m;
            k += 1;
        }
        k
    }

    /// Least common multiple of the orders of class representatives.
    pub fn exponent(&self, classes: &[Vec<u32>]) -> u64 {
        classes.par_iter().map(|c| self.element_order(&self.element(c[0] as usize))).reduce(|| 1, |a, b| a.lcm(&b))
    }

    /// Self-validation: random products and every adjoint must lie in the set,
    /// and generators plus random elements must be unitary.
    pub fn verify(&self, samples: usize, seed: u64) -> Result<Verification> {
        self.require_complete()?;
        let n = self.keys.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let singles: Vec<usize> = (0..samples / 2).map(|_| rng.gen_range(0..n)).collect();
        let products_closed =
            pairs.par_iter().all(|&(a, b)| self.index_of(&(&self.element(a) * &self.element(b))).is_some());
        let inverses_closed = (0..n).into_par_iter().all(|x| self.index_of(&self.element(x).adjoint()).is_some());
        let unitary = self.generators.iter().all(CycMatrix::is_unitary)
            && singles.par_iter().all(|&x| self.element(x).is_unitary());
        Ok(Verification { product_samples: samples, products_closed, inverses_closed, unitary })
    }

    /// Order, growth, exponent and class count as JSON.
    pub fn report(&self) -> Result<Value> {
        let mut out = json!({
            "dim": self.dim,
            "field_order": self.field.order(),
            "generators": self.generators.len(),
            "cap": self.cap,
            "complete": self.complete,
            "growth": self.growth,
            "phase_convention": "literal matrices; global phases distinguish elements",
        });
        if self.complete {
            let classes = self.conjugacy_classes()?;
            out["order"] = json!(self.keys.len());
            out["scalar_count"] = json!(self.scalar_count());
            out["phase_quotient_order"] = json!(self.phase_quotient_order()?);
            out["exponent"] = json!(self.exponent(&classes));
            out["num_classes"] = json!(classes.len());
        } else {
            out["order"] = json!("cap-exceeded");
            out["elements_found"] = json!(self.keys.len());
        }
        Ok(out)
    }
}

/// Outcome of [`MatrixGroupClosure::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub product_samples: usize,
    pub products_closed: bool,
    pub inverses_closed: bool,
    pub unitary: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.products_closed && self.inverses_closed && self.unitary
    }
}

/// A named choice of two-qubit generators built from `H`, `R(θ)` and CNOT.
#[derive(Debug, Clone)]
pub struct Convention {
    pub name: &'static str,
    pub description: &'static str,
    pub generators: Vec<CycMatrix>,
}

/// Candidate two-qubit generator placements for `H`, `R(θ)` and CNOT.
pub fn two_qubit_conventions(theta: &Rational) -> Result<Vec<Convention>> {
    let h = hadamard();
    let r = phase(theta)?;
    let (h0, h1) = (on_wire(&h, 0, 2)?, on_wire(&h, 1, 2)?);
    let (r0, r1) = (on_wire(&r, 0, 2)?, on_wire(&r, 1, 2)?);
    let (c01, c10) = (cnot_on(0, 1, 2)?, cnot_on(1, 0, 2)?);
    let id2 = CycMatrix::identity(2);
    Ok(vec![
        Convention {
            name: "default",
            description: "H and R on each wire, CNOT with control on wire 0",
            generators: vec![h0.clone(), h1.clone(), r0.clone(), r1.clone(), c01.clone()],
        },
        Convention {
            name: "cnot-reversed",
            description: "H and R on each wire, CNOT with control on wire 1",
            generators: vec![h0.clone(), h1.clone(), r0.clone(), r1.clone(), c10],
        },
        Convention {
            name: "wire0-only",
            description: "H and R on wire 0, CNOT with control on wire 0",
            generators: vec![h0.clone(), r0.clone(), c01.clone()],
        },
        Convention {
            name: "wire1-only",
            description: "H and R on wire 1, CNOT with control on wire 0",
            generators: vec![h1.clone(), r1.clone(), c01.clone()],
        },
        Convention {
            name: "global",
            description: "H⊗H and R⊗R, CNOT with control on wire 0",
            generators: vec![h.kron(&h), r.kron(&r), c01.clone()],
        },
        Convention {
            name: "local-only",
            description: "H and R on each wire, no CNOT",
            generators: vec![h0, h1, r0, r1],
        },
        Convention {
            name: "block-embedded",
            description: "H and R as 2x2 diagonal blocks (M⊕I and I⊕M), CNOT as I⊕X",
            generators: vec![
                direct_sum(&h, &id2),
                direct_sum(&id2, &h),
                direct_sum(&r, &id2),
                direct_sum(&id2, &r),
                c01.clone(),
            ],
        },
    ])
}

/// One row of the convention experiment.
#[derive(Debug, Clone)]
pub struct ConventionResult {
    pub name: &'static str,
    pub description: &'static str,
    pub order: Option<usize>,
    pub phase_quotient_order: Option<usize>,
    pub verified: bool,
}

impl ConventionResult {
    pub fn matches(&self, target: usize) -> bool {
        self.order == Some(target) || self.phase_quotient_order == Some(target)
    }

    pub fn to_json(&self, target: usize) -> Value {
        json!({
            "name": self.name,
            "description": self.description,
            "order": self.order.map_or(json!("cap-exceeded"), |o| json!(o)),
            "phase_quotient_order": self.phase_quotient_order,
            "verified": self.verified,
            "matches_target": self.matches(target),
        })
    }
}

/// Closes every convention and reports literal and phase-quotiented orders.
pub fn run_conventions(theta: &Rational, cap: usize) -> Result<Vec<ConventionResult>> {
    two_qubit_conventions(theta)?
        .into_iter()
        .map(|c| {
            let cl = MatrixGroupClosure::compute(&c.generators, cap)?;
            let (order, quotient, verified) = if cl.is_complete() {
                (cl.order(), Some(cl.phase_quotient_order()?), cl.verify(200, 1)?.passed())
            } else {
                (None, None, false)
            };
            Ok(ConventionResult {
                name: c.name,
                description: c.description,
                order,
                phase_quotient_order: quotient,
                verified,
            })
        })
        .collect()
}
