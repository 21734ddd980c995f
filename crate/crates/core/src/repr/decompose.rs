use std::sync::Arc;

use super::chartable::CharacterTable;
use super::representation::Representation;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::{inner, CycMatrix};
use crate::rational::Rational;

/// One diagonal block of a block-diagonalised representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Row of the character table.
    pub component: usize,
    /// Which of the `m_j` copies.
    pub copy: usize,
    pub offset: usize,
    pub dim: usize,
}

/// A change of basis `T` with `T⁻¹ r(g) T` block diagonal for every `g`.
///
/// Columns of `T` are mutually orthogonal but not normalised; `T⁻¹ = D⁻¹ T†`
/// with `D` the diagonal of squared column norms.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub t: CycMatrix,
    pub t_inv: CycMatrix,
    pub column_norms: Vec<Cyclotomic>,
    pub blocks: Vec<Block>,
}

impl Decomposition {
    /// `T⁻¹ m T`.
    pub fn conjugate(&self, m: &CycMatrix) -> CycMatrix {
        &(&self.t_inv * m) * &self.t
    }

    pub fn block_of(&self, conjugated: &CycMatrix, b: &Block) -> CycMatrix {
        CycMatrix::from_fn(b.dim, b.dim, |i, j| conjugated.get(b.offset + i, b.offset + j).clone())
    }

    /// True iff every entry outside the diagonal blocks vanishes.
    pub fn is_block_diagonal(&self, conjugated: &CycMatrix) -> bool {
        let mut owner = vec![0usize; self.t.cols()];
        for (bi, b) in self.blocks.iter().enumerate() {
            owner[b.offset..b.offset + b.dim].fill(bi);
        }
        (0..conjugated.rows())
            .all(|i| (0..conjugated.cols()).all(|j| owner[i] == owner[j] || conjugated.get(i, j).is_zero()))
    }
}

fn check_same_group(r: &Representation, ct: &CharacterTable) -> Result<()> {
    if Arc::ptr_eq(r.group(), ct.group()) || r.group().elements() == ct.group().elements() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("representation and character table belong to different groups".into()))
    }
}

/// `m_j = (1/|G|) Σ_k |C_k| χ_r(C_k) conj(χ_j(C_k))`.
pub fn multiplicities(r: &Representation, ct: &CharacterTable) -> Result<Vec<usize>> {
    check_same_group(r, ct)?;
    let g = r.group();
    let chi = r.character()?;
    let sizes = g.class_sizes();
    let n = Rational::from(g.order());
    let mut out = Vec::with_capacity(ct.num_classes());
    for j in 0..ct.num_classes() {
        let mut s = Cyclotomic::zero();
        for k in 0..ct.num_classes() {
            s += &(&chi[k] * &ct.value(j, k).conj()).scale(&Rational::from(sizes[k]));
        }
        let m =
            s.as_rational().map(|q| &q / &n).and_then(|q| q.to_i64()).filter(|&m| m >= 0).ok_or_else(|| {
                Error::InvalidArgument(format!("multiplicity of component {j} is not a natural number"))
            })?;
        out.push(m as usize);
    }
    let total: usize = out.iter().zip(ct.dims()).map(|(m, d)| m * d).sum();
    if total != r.dim() {
        return Err(Error::Internal("multiplicities do not account for the dimension".into()));
    }
    Ok(out)
}

/// `P_j = (d_j/|G|) Σ_g conj(χ_j(g)) r(g)`, one per row of the table.
pub fn isotypic_projectors(r: &Representation, ct: &CharacterTable) -> Result<Vec<CycMatrix>> {
    check_same_group(r, ct)?;
    let g = r.group();
    let class_sums: Vec<CycMatrix> = g
        .classes()
        .iter()
        .map(|c| {
            c.iter().skip(1).fold(r.image(c[0] as usize).clone(), |acc, &x| {
                acc.checked_add(r.image(x as usize)).expect("equal dimensions")
            })
        })
        .collect();
    let n = g.order() as i64;
    Ok((0..ct.num_classes())
        .map(|j| {
            let scale = Rational::new(ct.dims()[j] as i64, n);
            let mut p = CycMatrix::zeros(r.dim(), r.dim());
            for (k, s) in class_sums.iter().enumerate() {
                let c = ct.value(j, k).conj().scale(&scale);
                p = p.checked_add(&s.scale(&c)).expect("equal dimensions");
            }
            p
        })
        .collect())
}

fn scale_vec(v: &[Cyclotomic], s: &Cyclotomic) -> Vec<Cyclotomic> {
    v.iter().map(|x| x * s).collect()
}

fn sub_vec(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Orthogonalises in order without normalising; drops nothing.
fn gram_schmidt(vectors: &[Vec<Cyclotomic>]) -> Vec<Vec<Cyclotomic>> {
    let mut out: Vec<(Vec<Cyclotomic>, Cyclotomic)> = Vec::with_capacity(vectors.len());
    for w in vectors {
        let mut v = w.clone();
        for (u, norm) in &out {
            let c = inner(u, w).expect("equal lengths");
            if c.is_zero() {
                continue;
            }
            let coef = c.checked_div(norm).expect("nonzero norm");
            v = sub_vec(&v, &scale_vec(u, &coef));
        }
        let norm = inner(&v, &v).expect("equal lengths");
        out.push((v, norm));
    }
    out.into_iter().map(|(v, _)| v).collect()
}

fn column_space(m: &CycMatrix) -> Vec<Vec<Cyclotomic>> {
    let (_, pivots) = m.rref();
    pivots.iter().map(|&c| m.column(c)).collect()
}

/// `{v ∈ span(basis) : M v = λ v}`.
fn eigen_intersection(m: &CycMatrix, lambda: &Cyclotomic, basis: &[Vec<Cyclotomic>]) -> Vec<Vec<Cyclotomic>> {
    let b = CycMatrix::from_columns(basis).expect("nonempty basis");
    let a = (m * &b).checked_sub(&b.scale(lambda)).expect("equal dimensions");
    a.nullspace().iter().map(|x| b.mul_vec(x).expect("matching length")).collect()
}

/// Incremental rank tracking by forward elimination.
struct Echelon {
    rows: Vec<(usize, Vec<Cyclotomic>)>,
}

impl Echelon {
    fn insert(&mut self, v: &[Cyclotomic]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            w = sub_vec(&w, &scale_vec(row, &f));
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w = scale_vec(&w, &inv);
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                *row = sub_vec(row, &scale_vec(&w, &f));
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Span of the orbit of `u`, as the first independent vectors among `r(g)u`.
fn spin(r: &Representation, u: &[Cyclotomic], limit: usize) -> Vec<Vec<Cyclotomic>> {
    let mut ech = Echelon { rows: Vec::new() };
    let mut out = Vec::new();
    for img in r.images() {
        let v = img.mul_vec(u).expect("matching length");
        if ech.insert(&v) {
            out.push(v);
            if out.len() == limit {
                break;
            }
        }
    }
    out
}

/// Finds `T` whose columns split `r` into irreducible invariant subspaces.
///
/// Inside each isotypic component, common eigenspaces of group elements are
/// intersected down to dimension `m_j`; such a space meets every irreducible
/// copy in a line, so each of its vectors spins out one irreducible subspace.
pub fn block_diagonalize(r: &Representation, ct: &CharacterTable) -> Result<Decomposition> {
    if !r.is_unitary() {
        return Err(Error::InvalidArgument("block_diagonalize needs a unitary representation".into()));
    }
    let mults = multiplicities(r, ct)?;
    let projectors = isotypic_projectors(r, ct)?;
    let g = r.group();
    let mut columns: Vec<Vec<Cyclotomic>> = Vec::with_capacity(r.dim());
    let mut blocks = Vec::new();
    for (j, p) in projectors.iter().enumerate() {
        let (m, d) = (mults[j], ct.dims()[j]);
        if m == 0 {
            continue;
        }
        let mut space = column_space(p);
        if space.len() != m * d {
            return Err(Error::Internal(format!("projector {j} has rank {} not {}", space.len(), m * d)));
        }
        for x in 1..g.order() {
            if space.len() == m {
                break;
            }
            let o = g.element_order(x) as u32;
            let mut best: Option<Vec<Vec<Cyclotomic>>> = None;
            for l in 0..o {
                let lambda = Cyclotomic::root(o, l as i64)?;
                let cand = eigen_intersection(r.image(x), &lambda, &space);
                if !cand.is_empty() && cand.len() < best.as_ref().map_or(space.len(), Vec::len) {
                    best = Some(cand);
                }
            }
            if let Some(b) = best {
                space = b;
            }
        }
        if space.len() != m {
            return Err(Error::Internal(format!("could not isolate irreducible copies in component {j}")));
        }
        for (copy, u) in gram_schmidt(&space).iter().enumerate() {
            let sub = spin(r, u, d);
            if sub.len() != d {
                return Err(Error::Internal(format!("component {j}: orbit spans {} dimensions, not {d}", sub.len())));
            }
            blocks.push(Block { component: j, copy, offset: columns.len(), dim: d });
            columns.extend(sub);
        }
    }
    if columns.len() != r.dim() {
        return Err(Error::Internal("blocks do not fill the representation space".into()));
    }
    let columns: Vec<Vec<Cyclotomic>> = gram_schmidt(&columns)
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero column").inv().expect("nonzero");
            scale_vec(&v, &lead)
        })
        .collect();
    let column_norms: Vec<Cyclotomic> = columns.iter().map(|v| inner(v, v).expect("equal lengths")).collect();
    let t = CycMatrix::from_columns(&columns)?;
    let inv_norms: Vec<Cyclotomic> = column_norms.iter().map(|n| n.inv()).collect::<Result<_>>()?;
    let t_inv = CycMatrix::diagonal(&inv_norms).checked_mul(&t.adjoint())?;
    let dec = Decomposition { t, t_inv, column_norms, blocks };
    if !(&dec.t_inv * &dec.t).is_identity() {
        return Err(Error::Internal("columns of T are not orthogonal".into()));
    }
    for s in 0..g.generators().len() {
        let conj = dec.conjugate(r.image(g.mul_generator(0, s)));
        if !dec.is_block_diagonal(&conj) {
            return Err(Error::Internal("conjugated generator is not block diagonal".into()));
        }
    }
    Ok(dec)
}

/// `(1/|G|) Σ_g ⟨r(g)x, r(g)y⟩`.
pub fn invariant_inner_product(r: &Representation, x: &[Cyclotomic], y: &[Cyclotomic]) -> Result<Cyclotomic> {
    if x.len() != r.dim() || y.len() != r.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} for a representation of dimension {}",
            x.len(),
            y.len(),
            r.dim()
        )));
    }
    let mut acc = Cyclotomic::zero();
    for m in r.images() {
        acc += &inner(&m.mul_vec(x)?, &m.mul_vec(y)?)?;
    }
    Ok(acc.scale(&Rational::new(1, r.group().order() as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vector;
    use crate::permgroup::{named, Perm};

    fn setup(g: crate::permgroup::FiniteGroup) -> (Arc<crate::permgroup::FiniteGroup>, CharacterTable) {
        let g = Arc::new(g);
        let ct = CharacterTable::compute(&g).unwrap();
        (g, ct)
    }

    #[test]
    fn s3_natural_multiplicities() {
        let (g, ct) = setup(named::symmetric(3));
        let r = Representation::natural(g.clone());
        assert_eq!(multiplicities(&r, &ct).unwrap(), vec![1, 0, 1]);
        let reg = Representation::regular(g.clone());
        assert_eq!(multiplicities(&reg, &ct).unwrap(), vec![1, 1, 2]);
        assert_eq!(multiplicities(&Representation::trivial(g, 1), &ct).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn s3_natural_projectors() {
        let (g, ct) = setup(named::symmetric(3));
        let r = Representation::natural(g);
        let p = isotypic_projectors(&r, &ct).unwrap();
        // direct average of the six permutation matrices
        let mut avg = CycMatrix::zeros(3, 3);
        for m in r.images() {
            avg = avg.checked_add(m).unwrap();
        }
        assert_eq!(p[0], avg.scale_rational(&Rational::new(1, 6)));
        assert_eq!(
            p[0],
            CycMatrix::from_ints(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]).unwrap().scale_rational(&Rational::new(1, 3))
        );
        assert!(p[1].is_zero());
        let sum = p.iter().skip(1).fold(p[0].clone(), |a, b| a.checked_add(b).unwrap());
        assert!(sum.is_identity());
        for (i, a) in p.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                let prod = a * b;
                if i == j {
                    assert_eq!(&prod, a);
                } else {
                    assert!(prod.is_zero());
                }
            }
            for m in r.images() {
                assert_eq!(a * m, m * a);
            }
        }
    }

    #[test]
    fn s3_natural_block_diagonal() {
        let (g, ct) = setup(named::symmetric(3));
        let r = Representation::natural(g.clone());
        let dec = block_diagonalize(&r, &ct).unwrap();
        assert_eq!(dec.t.column(0), int_vector(&[1, 1, 1]));
        assert_eq!(dec.blocks.iter().map(|b| (b.component, b.dim)).collect::<Vec<_>>(), vec![(0, 1), (2, 2)]);
        assert!(dec.column_norms.iter().all(Cyclotomic::is_rational));
        for x in 0..6 {
            let c = dec.conjugate(r.image(x));
            assert!(dec.is_block_diagonal(&c));
            assert!(dec.block_of(&c, &dec.blocks[0]).is_identity());
            assert_eq!(dec.block_of(&c, &dec.blocks[1]).trace(), ct.value_at(2, x).clone());
        }
    }

    #[test]
    fn trivial_group_gives_identity_transform() {
        let (g, ct) = setup(named::cyclic(1));
        let r = Representation::trivial(g, 3);
        let dec = block_diagonalize(&r, &ct).unwrap();
        assert!(dec.t.is_identity());
    }

    #[test]
    fn c2_regular_blocks() {
        let (g, ct) = setup(named::cyclic(2));
        let r = Representation::regular(g);
        let dec = block_diagonalize(&r, &ct).unwrap();
        let c = dec.conjugate(r.image(1));
        assert_eq!(c, CycMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap());
    }

    #[test]
    fn regular_reps_of_battery_split_by_dimension() {
        for (name, g) in named::battery() {
            let (g, ct) = setup(g);
            let r = Representation::regular(g.clone());
            let dec = block_diagonalize(&r, &ct).unwrap_or_else(|e| panic!("{name}: {e}"));
            for j in 0..ct.num_classes() {
                let copies = dec.blocks.iter().filter(|b| b.component == j).count();
                assert_eq!(copies, ct.dims()[j], "{name}");
            }
            for x in 0..g.order() {
                let c = dec.conjugate(r.image(x));
                assert!(dec.is_block_diagonal(&c), "{name}");
                for b in &dec.blocks {
                    assert_eq!(&dec.block_of(&c, b).trace(), ct.value_at(b.component, x), "{name}");
                }
            }
        }
    }

    #[test]
    fn invariant_inner_products() {
        let (g, _) = setup(named::symmetric(3));
        let r = Representation::natural(g.clone());
        let x = int_vector(&[1, 2, 0]);
        let y = int_vector(&[3, -1, 5]);
        assert_eq!(invariant_inner_product(&r, &x, &y).unwrap(), inner(&x, &y).unwrap());
        let t = Representation::trivial(g.clone(), 2);
        let e1 = int_vector(&[1, 0]);
        assert_eq!(invariant_inner_product(&t, &e1, &e1).unwrap(), Cyclotomic::one());
        let z3 = |k| Cyclotomic::root(3, k).unwrap();
        let two = |a, b, c, d| CycMatrix::from_rows(vec![vec![a, b], vec![c, d]]).unwrap();
        let u = Representation::from_generator_images(
            g,
            &[
                (Perm::from_cycles(3, &[&[2, 3]]).unwrap(), two(Cyclotomic::zero(), z3(2), z3(1), Cyclotomic::zero())),
                (
                    Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap(),
                    two(z3(2), Cyclotomic::zero(), Cyclotomic::zero(), z3(1)),
                ),
            ],
        )
        .unwrap();
        assert_eq!(invariant_inner_product(&u, &e1, &e1).unwrap(), Cyclotomic::one());
    }
}
