//! Dynamical systems on functions `X → Σ`, trajectory amplitudes and path sums.

use std::sync::Arc;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::permgroup::{ClosureOptions, FiniteGroup, Perm};
use crate::repr::Representation;

/// A space group acting on points `X` and an internal group acting on local states `Σ`.
#[derive(Debug, Clone)]
pub struct SpaceStructure {
    pub space_group: Arc<FiniteGroup>,
    pub internal_group: Arc<FiniteGroup>,
}

impl SpaceStructure {
    /// Closes both generator sets; an empty list means the trivial group.
    pub fn new(points: usize, space_gens: &[Perm], local_states: usize, internal_gens: &[Perm]) -> Result<Self> {
        let close = |deg: usize, gens: &[Perm]| -> Result<Arc<FiniteGroup>> {
            if deg == 0 {
                return Err(Error::InvalidArgument("point and state sets must be nonempty".into()));
            }
            if let Some(g) = gens.iter().find(|g| g.degree() != deg) {
                return Err(Error::DegreeMismatch(deg, g.degree()));
            }
            let gens = if gens.is_empty() { vec![Perm::identity(deg)] } else { gens.to_vec() };
            Ok(Arc::new(FiniteGroup::closure(&gens, ClosureOptions::default())?))
        };
        Ok(SpaceStructure {
            space_group: close(points, space_gens)?,
            internal_group: close(local_states, internal_gens)?,
        })
    }

    pub fn points(&self) -> usize {
        self.space_group.degree()
    }

    pub fn local_states(&self) -> usize {
        self.internal_group.degree()
    }
}

/// The wreath product `Γ^X ⋊ G` as a permutation group on functions `X → Σ`.
///
/// Function `f` has index `Σ_x f(x)·|Σ|^x` with 0-based points and states, so
/// point 1 is the least significant digit. A pair `(γ, g)` sends `f` to `f'`
/// with `f'(y·g) = f(y)·γ(y)`; pairs multiply as
/// `(γ1, g1)(γ2, g2) = (y ↦ γ1(y)·γ2(y·g1), g1·g2)`.
#[derive(Debug, Clone)]
pub struct WreathProduct {
    pub structure: SpaceStructure,
    pub group: FiniteGroup,
    /// Space-group element id of each element of `group`.
    pub projection: Vec<usize>,
}

/// A pair `(γ, g)`: internal element ids per point and a space element id.
pub type WreathPair = (Vec<usize>, usize);

impl WreathProduct {
    pub fn num_functions(&self) -> usize {
        self.group.degree()
    }

    pub fn function_index(&self, f: &[usize]) -> usize {
        let s = self.structure.local_states();
        f.iter().rev().fold(0, |acc, &v| acc * s + v)
    }

    pub fn function_of(&self, mut idx: usize) -> Vec<usize> {
        let s = self.structure.local_states();
        (0..self.structure.points())
            .map(|_| {
                let v = idx % s;
                idx /= s;
                v
            })
            .collect()
    }

    /// Permutation of functions induced by `(γ, g)`.
    pub fn pair_action(&self, pair: &WreathPair) -> Perm {
        pair_action(&self.structure, pair)
    }

    /// `(γ1, g1)(γ2, g2)`.
    pub fn pair_mul(&self, a: &WreathPair, b: &WreathPair) -> WreathPair {
        let (sg, ig) = (&self.structure.space_group, &self.structure.internal_group);
        let g1 = sg.element(a.1);
        let gamma = (0..self.structure.points()).map(|y| ig.mul(a.0[y], b.0[g1.apply(y)])).collect();
        (gamma, sg.mul(a.1, b.1))
    }

    /// Whether forgetting the internal data is a homomorphism onto the space group.
    pub fn projection_is_homomorphism(&self) -> bool {
        let (g, sg) = (&self.group, &self.structure.space_group);
        (0..g.order()).all(|a| {
            (0..g.generators().len()).all(|s| {
                let gen = g.mul_generator(0, s);
                self.projection[g.mul_generator(a, s)] == sg.mul(self.projection[a], self.projection[gen])
            })
        })
    }
}

fn pair_action(s: &SpaceStructure, pair: &WreathPair) -> Perm {
    let (n_points, n_states) = (s.points(), s.local_states());
    let g = s.space_group.element(pair.1);
    let gammas: Vec<&Perm> = pair.0.iter().map(|&id| s.internal_group.element(id)).collect();
    let total = n_states.pow(n_points as u32);
    let mut images = Vec::with_capacity(total);
    let mut f = vec![0usize; n_points];
    let mut out = vec![0usize; n_points];
    for idx in 0..total {
        let mut rest = idx;
        for v in f.iter_mut() {
            *v = rest % n_states;
            rest /= n_states;
        }
        for y in 0..n_points {
            out[g.apply(y)] = gammas[y].apply(f[y]);
        }
        images.push(out.iter().rev().fold(0, |acc, &v| acc * n_states + v) as u32);
    }
    Perm::from_images(images).expect("wreath action is a bijection")
}

/// All pairs in mixed-radix order of `γ` (point 1 fastest) and then `g`.
fn all_pairs(s: &SpaceStructure) -> Vec<WreathPair> {
    let (n_points, gamma_order) = (s.points(), s.internal_group.order());
    let mut out = Vec::new();
    for g in 0..s.space_group.order() {
        for mut idx in 0..gamma_order.pow(n_points as u32) {
            let gamma = (0..n_points)
                .map(|_| {
                    let v = idx % gamma_order;
                    idx /= gamma_order;
                    v
                })
                .collect();
            out.push((gamma, g));
        }
    }
    out
}

/// Builds the wreath product, asserting order `|Γ|^|X|·|G|`.
pub fn wreath_product(s: &SpaceStructure, options: ClosureOptions) -> Result<WreathProduct> {
    let (n_points, n_states) = (s.points(), s.local_states());
    let degree = (n_states as u64)
        .checked_pow(n_points as u32)
        .filter(|&d| d <= options.cap as u64)
        .ok_or(Error::CapExceeded { cap: options.cap })? as usize;
    let expected = (s.internal_group.order() as u64)
        .checked_pow(n_points as u32)
        .and_then(|o| o.checked_mul(s.space_group.order() as u64))
        .filter(|&o| o <= options.cap as u64)
        .ok_or(Error::CapExceeded { cap: options.cap })? as usize;

    let identity_gamma = vec![0usize; n_points];
    let mut gens: Vec<Perm> = s
        .space_group
        .generators()
        .iter()
        .map(|g| pair_action(s, &(identity_gamma.clone(), s.space_group.index_of(g).expect("generator"))))
        .collect();
    for t in s.internal_group.generators() {
        let t_id = s.internal_group.index_of(t).expect("generator");
        for x in 0..n_points {
            let mut gamma = identity_gamma.clone();
            gamma[x] = t_id;
            gens.push(pair_action(s, &(gamma, 0)));
        }
    }
    if gens.is_empty() {
        gens.push(Perm::identity(degree));
    }
    let group = FiniteGroup::closure(&gens, options)?;
    if group.order() != expected {
        return Err(Error::InvalidArgument(format!(
            "action on functions is not faithful: order {} instead of {expected}",
            group.order()
        )));
    }
    let mut projection = vec![usize::MAX; expected];
    for pair in all_pairs(s) {
        let id = group
            .index_of(&pair_action(s, &pair))
            .ok_or_else(|| Error::Internal("pair action outside the generated group".into()))?;
        if projection[id] != usize::MAX {
            return Err(Error::Internal("two pairs induce the same permutation".into()));
        }
        projection[id] = pair.1;
    }
    Ok(WreathProduct { structure: s.clone(), group, projection })
}

/// A classical history: one state per time step starting at `t0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalHistory {
    pub t0: i64,
    pub t_final: i64,
    pub states: Vec<usize>,
}

/// Validates a sequence of 0-based state ids.
pub fn classical_evolve(states: &[usize], num_states: usize, t0: i64) -> Result<ClassicalHistory> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("a history needs at least one state".into()));
    }
    if let Some(s) = states.iter().find(|&&s| s >= num_states) {
        return Err(Error::InvalidArgument(format!("state {s} outside 0..{num_states}")));
    }
    Ok(ClassicalHistory { t0, t_final: t0 + states.len() as i64 - 1, states: states.to_vec() })
}

/// `ρ(α_T)⋯ρ(α_1)A_0`, where `alphas[0]` is `α_1`.
pub fn trajectory_amplitude(r: &Representation, alphas: &[usize], a0: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
    if a0.len() != r.dim() {
        return Err(Error::DimensionMismatch(format!(
            "amplitude of length {} for a representation of dimension {}",
            a0.len(),
            r.dim()
        )));
    }
    let mut v = a0.to_vec();
    for &a in alphas {
        if a >= r.group().order() {
            return Err(Error::InvalidArgument(format!("element id {a} outside the group")));
        }
        v = r.image(a).mul_vec(&v)?;
    }
    Ok(v)
}

/// Sum over all paths `from = s_0 → s_1 → … → s_T = to` of `Π_t L_t[s_t, s_{t-1}]`,
/// with `layers[0]` applied first.
///
/// Postcondition: equals `(L_T ⋯ L_1)[to, from]`.
pub fn feynman_sum(layers: &[CycMatrix], from: usize, to: usize) -> Result<Cyclotomic> {
    let first = layers.first().ok_or_else(|| Error::InvalidArgument("no layers".into()))?;
    for w in layers.windows(2) {
        if w[1].cols() != w[0].rows() {
            return Err(Error::DimensionMismatch(format!(
                "layer with {} rows feeds a layer with {} columns",
                w[0].rows(),
                w[1].cols()
            )));
        }
    }
    let last = layers.last().expect("nonempty");
    if from >= first.cols() || to >= last.rows() {
        return Err(Error::InvalidArgument("path endpoint out of range".into()));
    }
    let mut total = Cyclotomic::zero();
    let mut stack: Vec<(usize, usize, Cyclotomic)> = vec![(0, from, Cyclotomic::one())];
    while let Some((t, state, amp)) = stack.pop() {
        let layer = &layers[t];
        let targets: Vec<usize> = if t + 1 == layers.len() { vec![to] } else { (0..layer.rows()).collect() };
        for next in targets {
            let w = layer.get(next, state);
            if w.is_zero() {
                continue;
            }
            let a = &amp * w;
            if t + 1 == layers.len() {
                total += &a;
            } else {
                stack.push((t + 1, next, a));
            }
        }
    }
    let product = layers[1..].iter().fold(first.clone(), |acc, l| l * &acc);
    if product.get(to, from) != &total {
        return Err(Error::Internal("path sum differs from the matrix product entry".into()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::named;

    fn cyc(deg: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(deg, cycles).unwrap()
    }

    #[test]
    fn single_point_wreath_is_internal_group() {
        let s = SpaceStructure::new(1, &[], 2, &[cyc(2, &[&[1, 2]])]).unwrap();
        let w = wreath_product(&s, ClosureOptions::default()).unwrap();
        assert_eq!(w.group.order(), 2);
        assert_eq!(w.num_functions(), 2);
    }

    #[test]
    fn swap_on_two_points_with_trivial_internal_group() {
        let s = SpaceStructure::new(2, &[cyc(2, &[&[1, 2]])], 2, &[]).unwrap();
        let w = wreath_product(&s, ClosureOptions::default()).unwrap();
        assert_eq!(w.group.order(), 2);
        // functions 00, 10, 01, 11 (point 1 least significant); the swap exchanges 10 and 01
        let swap = w.group.element(1);
        assert_eq!(swap.images(), &[0, 2, 1, 3]);
    }

    #[test]
    fn wreath_c2_s2_has_order_eight() {
        let s = SpaceStructure::new(2, &[cyc(2, &[&[1, 2]])], 2, &[cyc(2, &[&[1, 2]])]).unwrap();
        let w = wreath_product(&s, ClosureOptions::default()).unwrap();
        assert_eq!(w.group.order(), 8);
        assert_eq!(w.num_functions(), 4);
        assert!(w.projection_is_homomorphism());
        // same conjugacy structure as D4
        assert_eq!(w.group.class_sizes(), named::dihedral8().class_sizes());
        let again = FiniteGroup::closure(w.group.elements(), ClosureOptions::default()).unwrap();
        assert_eq!(again.order(), 8);
        assert!(w.group.elements().iter().all(|p| again.contains(p)));
    }

    #[test]
    fn pair_multiplication_matches_action() {
        let s = SpaceStructure::new(3, &[cyc(3, &[&[1, 2, 3]])], 2, &[cyc(2, &[&[1, 2]])]).unwrap();
        let w = wreath_product(&s, ClosureOptions::default()).unwrap();
        assert_eq!(w.group.order(), 8 * 3);
        let pairs = all_pairs(&s);
        for a in &pairs {
            for b in &pairs {
                let lhs = w.pair_action(&w.pair_mul(a, b));
                assert_eq!(lhs, &w.pair_action(a) * &w.pair_action(b));
            }
        }
        assert_eq!(w.function_of(w.function_index(&[1, 0, 1])), vec![1, 0, 1]);
        assert_eq!(w.function_index(&[1, 0, 0]), 1);
    }

    #[test]
    fn degree_cap() {
        let s = SpaceStructure::new(4, &[], 3, &[]).unwrap();
        assert_eq!(wreath_product(&s, ClosureOptions { cap: 50 }).unwrap_err(), Error::CapExceeded { cap: 50 });
    }

    #[test]
    fn classical_histories() {
        assert_eq!(classical_evolve(&[0], 1, 0).unwrap().t_final, 0);
        assert_eq!(classical_evolve(&[0, 1, 0], 2, 5).unwrap().t_final, 7);
        assert!(classical_evolve(&[0, 2], 2, 0).is_err());
    }

    #[test]
    fn trajectory_in_one_dimensional_c3_rep() {
        let g = Arc::new(named::cyclic(3));
        let gen = g.index_of(&cyc(3, &[&[1, 2, 3]])).unwrap();
        let z = Cyclotomic::root(3, 1).unwrap();
        let r = Representation::from_generator_images(
            g.clone(),
            &[(cyc(3, &[&[1, 2, 3]]), CycMatrix::diagonal(std::slice::from_ref(&z)))],
        )
        .unwrap();
        let a0 = vec![Cyclotomic::from_int(5)];
        assert_eq!(trajectory_amplitude(&r, &[], &a0).unwrap(), a0);
        assert_eq!(trajectory_amplitude(&r, &[gen, gen], &a0).unwrap(), vec![&z.pow(2) * &a0[0]]);
        assert!(trajectory_amplitude(&r, &[gen], &[]).is_err());
    }

    #[test]
    fn two_layer_path_sum() {
        let a = CycMatrix::from_ints(&[&[2, 3], &[5, 7]]).unwrap();
        let b = CycMatrix::from_ints(&[&[11, 13], &[17, 19]]).unwrap();
        // u_12 = b11 a12 + b12 a22
        let expected = 11 * 3 + 13 * 7;
        assert_eq!(feynman_sum(&[a, b], 1, 0).unwrap(), Cyclotomic::from_int(expected));
        let id = CycMatrix::identity(3);
        assert!(feynman_sum(std::slice::from_ref(&id), 1, 1).unwrap().is_one());
        assert!(feynman_sum(&[id], 1, 2).unwrap().is_zero());
    }
}
