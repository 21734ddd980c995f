use std::sync::Arc;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::permgroup::{regular_action, FiniteGroup, Perm};

/// A homomorphism from an enumerated group into exact square matrices.
#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    /// Indexed by element id.
    images: Vec<CycMatrix>,
    dim: usize,
    unitary: bool,
}

/// `ρ_{ij} = 1` iff point `i` is sent to `j`.
pub fn permutation_matrix(p: &Perm) -> CycMatrix {
    let n = p.degree();
    CycMatrix::from_fn(n, n, |i, j| Cyclotomic::from_int((p.apply(i) == j) as i64))
}

impl Representation {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, element: usize) -> &CycMatrix {
        &self.images[element]
    }

    pub fn images(&self) -> &[CycMatrix] {
        &self.images
    }

    /// Whether every image satisfies `U†U = I`.
    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Builds a representation from images of every element, checking
    /// `image(x·s) = image(x)·image(s)` for all `x` and generators `s`.
    pub fn from_images(group: Arc<FiniteGroup>, images: Vec<CycMatrix>) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        let dim = images[0].rows();
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch("images must be square of equal size".into()));
        }
        if !images[0].is_identity() {
            return Err(Error::NotHomomorphism("identity is not sent to the identity matrix".into()));
        }
        for x in 0..group.order() {
            for s in 0..group.generators().len() {
                let xs = group.mul_generator(x, s);
                let gen_id = group.mul_generator(0, s);
                if images[xs] != &images[x] * &images[gen_id] {
                    return Err(Error::NotHomomorphism(format!(
                        "image({} * {}) differs from image({}) * image({})",
                        group.element(x),
                        group.generators()[s],
                        group.element(x),
                        group.generators()[s]
                    )));
                }
            }
        }
        let unitary = images.iter().all(CycMatrix::is_unitary);
        Ok(Representation { group, images, dim, unitary })
    }

    /// The linearisation of an action given as one permutation per element id.
    pub fn from_action(group: Arc<FiniteGroup>, action: &[Perm]) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let deg = action[0].degree();
        for x in 0..group.order() {
            for s in 0..group.generators().len() {
                let xs = group.mul_generator(x, s);
                let gen_id = group.mul_generator(0, s);
                if action[xs] != action[x].compose(&action[gen_id])? {
                    return Err(Error::NotHomomorphism(format!(
                        "action of {} * {} is not the composite action",
                        group.element(x),
                        group.generators()[s]
                    )));
                }
            }
        }
        if !action[0].is_identity() {
            return Err(Error::NotHomomorphism("identity acts nontrivially".into()));
        }
        let images = action.iter().map(permutation_matrix).collect();
        Ok(Representation { group, images, dim: deg, unitary: true })
    }

    /// The defining action of a permutation group on its points.
    pub fn natural(group: Arc<FiniteGroup>) -> Self {
        let action = group.elements().to_vec();
        Self::from_action(group, &action).expect("defining action")
    }

    /// The right regular representation.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let action = regular_action(&group);
        Self::from_action(group, &action).expect("regular action")
    }

    /// Every element sent to the `dim × dim` identity.
    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let images = vec![CycMatrix::identity(dim); group.order()];
        Representation { group, images, dim, unitary: true }
    }

    /// Extends images of a generating set along the closure's spanning tree,
    /// then verifies the extension is a homomorphism.
    ///
    /// `generators` must lie in `group` and generate it.
    pub fn from_generator_images(group: Arc<FiniteGroup>, generators: &[(Perm, CycMatrix)]) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one generator image is required".into()))?;
        let dim = first.1.rows();
        let mut ids = Vec::with_capacity(generators.len());
        for (p, m) in generators {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch("generator images must be square of equal size".into()));
            }
            let id = group
                .index_of(p)
                .ok_or_else(|| Error::InvalidArgument(format!("{p} is not an element of the group")))?;
            ids.push(id);
        }
        let n = group.order();
        let mut images: Vec<Option<CycMatrix>> = vec![None; n];
        images[0] = Some(CycMatrix::identity(dim));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (k, &g) in ids.iter().enumerate() {
                let y = group.mul(x, g);
                if images[y].is_none() {
                    images[y] = Some(images[x].as_ref().expect("visited") * &generators[k].1);
                    queue.push(y);
                }
            }
        }
        if queue.len() != n {
            return Err(Error::InvalidArgument(format!(
                "generators span a subgroup of order {} in a group of order {n}",
                queue.len()
            )));
        }
        let images: Vec<CycMatrix> = images.into_iter().map(|m| m.expect("all reached")).collect();
        for x in 0..n {
            for (k, &g) in ids.iter().enumerate() {
                let y = group.mul(x, g);
                if images[y] != &images[x] * &generators[k].1 {
                    return Err(Error::NotHomomorphism(format!(
                        "witness pair ({}, {}): image of the product differs from the product of images",
                        group.element(x),
                        generators[k].0
                    )));
                }
            }
        }
        Ok(Self::from_images(group, images).expect("verified above"))
    }

    /// `image(g)·image(h) = image(gh)` over all pairs.
    pub fn check_homomorphism_exhaustive(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|a| (0..g.order()).all(|b| self.images[g.mul(a, b)] == &self.images[a] * &self.images[b]))
    }

    /// Trace per conjugacy class; errors if the trace is not a class function.
    pub fn character(&self) -> Result<Vec<Cyclotomic>> {
        let g = &self.group;
        g.classes()
            .iter()
            .map(|class| {
                let t = self.images[class[0] as usize].trace();
                if class.iter().any(|&x| self.images[x as usize].trace() != t) {
                    return Err(Error::InvalidArgument("trace varies within a conjugacy class".into()));
                }
                Ok(t)
            })
            .collect()
    }
}
