use std::collections::HashMap;

use num_integer::Integer;

use super::perm::{CycleType, Perm};
use crate::error::{Error, Result};

/// Dense Cayley tables are kept for groups up to this order.
const DENSE_CAYLEY_LIMIT: usize = 2048;

/// Limits applied while enumerating a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    pub cap: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { cap: 1_000_000 }
    }
}

/// A fully enumerated permutation group.
///
/// Element 0 is the identity; the rest follow breadth-first discovery order
/// when right-multiplying by the sorted generators.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    generators: Vec<Perm>,
    /// `right[s][x]` is the id of `x · generators[s]`.
    right: Vec<Vec<u32>>,
    /// Spanning tree of the closure: `x = parent · generators[gen]`.
    tree: Vec<Option<(u32, u32)>>,
    inverses: Vec<u32>,
    cayley: Option<Vec<u32>>,
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
    multiplications: usize,
}

/// Class sizes and structure constants of the class algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub class_sizes: Vec<usize>,
    /// `coefficients[i][j][k]`: how often the representative of class `k`
    /// occurs among the products `ab`, `a ∈ C_i`, `b ∈ C_j`.
    pub coefficients: Vec<Vec<Vec<u64>>>,
}

impl ClassData {
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.coefficients[i][j][k]
    }
}

/// Orbits of `0..n` under a set of maps, ordered with the identity orbit
/// first and then by `(size, smallest member)`.
///
/// Each orbit is sorted ascending. Used for conjugacy classes of any group
/// given by the conjugation action of its generators.
pub fn orbit_partition(n: usize, maps: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut label = vec![u32::MAX; n];
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        label[start] = id;
        let mut orbit = vec![start as u32];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head] as usize;
            head += 1;
            for m in maps {
                let y = m[x] as usize;
                if label[y] == u32::MAX {
                    label[y] = id;
                    orbit.push(y as u32);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| (o.len(), o[0]));
    orbits
}

impl FiniteGroup {
    /// Enumerates the group generated by `generators` by breadth-first search.
    ///
    /// Costs `n_g · N` multiplications for `n_g` distinct non-identity generators.
    pub fn closure(generators: &[Perm], options: ClosureOptions) -> Result<FiniteGroup> {
        let degree = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?
            .degree();
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut gens: Vec<Perm> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();

        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut tree = vec![None];
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut multiplications = 0usize;
        let mut head = 0;
        while head < elements.len() {
            for (s, g) in gens.iter().enumerate() {
                let y = elements[head].then(g);
                multiplications += 1;
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= options.cap {
                            return Err(Error::CapExceeded { cap: options.cap });
                        }
                        let id = elements.len() as u32;
                        index.insert(y.clone(), id);
                        elements.push(y);
                        tree.push(Some((head as u32, s as u32)));
                        id
                    }
                };
                right[s].push(id);
            }
            head += 1;
        }
        let mut group = FiniteGroup {
            degree,
            inverses: Vec::new(),
            cayley: None,
            classes: Vec::new(),
            class_of: Vec::new(),
            elements,
            index,
            generators: gens,
            right,
            tree,
            multiplications,
        };
        group.inverses = group.elements.iter().map(|p| group.index[&p.inverse()]).collect();
        if group.order() <= DENSE_CAYLEY_LIMIT {
            let n = group.order();
            let mut table = Vec::with_capacity(n * n);
            for a in &group.elements {
                for b in &group.elements {
                    table.push(group.index[&a.then(b)]);
                }
            }
            group.cayley = Some(table);
        }
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let maps: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| {
                let ginv = g.inverse();
                self.elements.iter().map(|x| self.index[&ginv.then(x).then(g)]).collect()
            })
            .collect();
        self.classes = orbit_partition(self.order(), &maps);
        self.class_of = vec![0; self.order()];
        for (k, c) in self.classes.iter().enumerate() {
            for &x in c {
                self.class_of[x as usize] = k as u32;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &Perm {
        &self.elements[id]
    }

    /// Sorted, deduplicated non-identity generators.
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    /// Multiplications performed by the closure.
    pub fn multiplications(&self) -> usize {
        self.multiplications
    }

    /// Id of `a · b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.cayley {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])] as usize,
        }
    }

    /// Id of `x · generators[s]`.
    pub fn mul_generator(&self, x: usize, s: usize) -> usize {
        self.right[s][x] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        self.index[&self.elements[a].pow(k)] as usize
    }

    /// Parent and generator index in the closure's spanning tree.
    pub fn tree_parent(&self, x: usize) -> Option<(usize, usize)> {
        self.tree[x].map(|(p, s)| (p as usize, s as usize))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.elements[a].order()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes.iter().map(|c| self.element_order(c[0] as usize)).fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Conjugacy classes: identity first, then by `(size, smallest id)`.
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    /// The smallest element id of class `k`.
    pub fn class_representative(&self, k: usize) -> usize {
        self.classes[k][0] as usize
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_cycle_type(&self, k: usize) -> CycleType {
        self.elements[self.class_representative(k)].cycle_type()
    }

    /// Class containing the `m`-th power of the elements of class `k`.
    pub fn class_power(&self, k: usize, m: i64) -> usize {
        self.class_of(self.pow(self.class_representative(k), m))
    }

    /// Class of the inverses of the elements of class `k`.
    pub fn inverse_class(&self, k: usize) -> usize {
        self.class_of(self.inverse(self.class_representative(k)))
    }

    /// Structure constants of the class algebra.
    pub fn class_coefficients(&self) -> ClassData {
        let k_count = self.num_classes();
        let mut coeffs = vec![vec![vec![0u64; k_count]; k_count]; k_count];
        for k in 0..k_count {
            let z = self.class_representative(k);
            for a in 0..self.order() {
                // ab = z  <=>  b = a^{-1} z
                let b = self.mul(self.inverse(a), z);
                coeffs[self.class_of(a)][self.class_of(b)][k] += 1;
            }
        }
        ClassData { class_sizes: self.class_sizes(), coefficients: coeffs }
    }

    /// Closes `generators` inside this group; errors if any lies outside it.
    pub fn subgroup(&self, generators: &[Perm]) -> Result<FiniteGroup> {
        for g in generators {
            if !self.contains(g) {
                return Err(Error::InvalidArgument(format!("{g} is not an element of the group")));
            }
        }
        if generators.is_empty() {
            return FiniteGroup::closure(&[Perm::identity(self.degree)], ClosureOptions::default());
        }
        FiniteGroup::closure(generators, ClosureOptions { cap: self.order() })
    }
}
