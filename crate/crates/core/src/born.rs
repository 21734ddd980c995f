//! Born-rule probabilities over unnormalised exact state vectors.

use rayon::prelude::*;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::{inner, CycMatrix};
use crate::rational::Rational;

/// Which basis a state vector is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    Permutation,
    Quantum,
    Component(usize),
}

/// An exact, unnormalised state vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVec {
    pub entries: Vec<Cyclotomic>,
    pub basis: BasisTag,
}

impl StateVec {
    pub fn new(entries: Vec<Cyclotomic>, basis: BasisTag) -> Self {
        StateVec { entries, basis }
    }

    /// A permutation-basis vector of natural multiplicities.
    pub fn natural(counts: &[u64]) -> Self {
        let entries = counts.iter().map(|&c| Cyclotomic::from_int(c as i64)).collect();
        StateVec { entries, basis: BasisTag::Permutation }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclotomic::is_zero)
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        StateVec { entries: self.entries.iter().map(|x| x * s).collect(), basis: self.basis }
    }
}

/// `Σ conj(x_i) y_i`.
pub fn inner_standard(x: &StateVec, y: &StateVec) -> Result<Cyclotomic> {
    inner(&x.entries, &y.entries)
}

fn check_pair(phi: &StateVec, psi: &StateVec) -> Result<()> {
    if phi.basis != psi.basis {
        return Err(Error::InvalidArgument(format!("states in different bases: {:?} and {:?}", phi.basis, psi.basis)));
    }
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!("states of length {} and {}", phi.dim(), psi.dim())));
    }
    if phi.is_zero() || psi.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

fn require_rational(v: Cyclotomic) -> Result<Rational> {
    v.as_rational().ok_or_else(|| Error::NotRepresentable(format!("probability {v} is irrational")))
}

/// `|⟨φ|ψ⟩|² / (⟨φ|φ⟩⟨ψ|ψ⟩)` as an exact totally real cyclotomic number.
pub fn born_ratio(phi: &StateVec, psi: &StateVec) -> Result<Cyclotomic> {
    check_pair(phi, psi)?;
    let num = inner_standard(phi, psi)?.abs2();
    let den = &inner_standard(phi, phi)? * &inner_standard(psi, psi)?;
    num.checked_div(&den)
}

/// [`born_ratio`], asserted rational.
pub fn born_probability(phi: &StateVec, psi: &StateVec) -> Result<Rational> {
    require_rational(born_ratio(phi, psi)?)
}

/// `‖φ∧ψ‖² = Σ_{i<j} |φ_i ψ_j - φ_j ψ_i|²`.
pub fn wedge_norm2(phi: &StateVec, psi: &StateVec) -> Result<Cyclotomic> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!("states of length {} and {}", phi.dim(), psi.dim())));
    }
    let (a, b) = (&phi.entries, &psi.entries);
    let mut acc = Cyclotomic::zero();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc += &(&(&a[i] * &b[j]) - &(&a[j] * &b[i])).abs2();
        }
    }
    Ok(acc)
}

/// `|⟨φ|ψ⟩|² / (|⟨φ|ψ⟩|² + ‖φ∧ψ‖²)`.
pub fn born_symmetric_ratio(phi: &StateVec, psi: &StateVec) -> Result<Cyclotomic> {
    check_pair(phi, psi)?;
    let num = inner_standard(phi, psi)?.abs2();
    let den = &num + &wedge_norm2(phi, psi)?;
    num.checked_div(&den)
}

/// [`born_symmetric_ratio`], asserted rational.
pub fn born_symmetric(phi: &StateVec, psi: &StateVec) -> Result<Rational> {
    require_rational(born_symmetric_ratio(phi, psi)?)
}

/// `Σ_i P(e_i, ψ)` over a pairwise orthogonal basis.
pub fn completeness_check(psi: &StateVec, basis: &[StateVec]) -> Result<Rational> {
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if !inner_standard(a, b)?.is_zero() {
                return Err(Error::InvalidArgument("basis is not orthogonal".into()));
            }
        }
    }
    let mut total = Cyclotomic::zero();
    for e in basis {
        total += &born_ratio(e, psi)?;
    }
    require_rational(total)
}

/// `P_j v`, tagged as lying in component `j`.
pub fn project_component(v: &StateVec, projector: &CycMatrix, component: usize) -> Result<StateVec> {
    Ok(StateVec { entries: projector.mul_vec(&v.entries)?, basis: BasisTag::Component(component) })
}

/// Born probability of the projections of `n` and `m` onto component `j`.
pub fn born_in_component(n: &StateVec, m: &StateVec, projector: &CycMatrix, component: usize) -> Result<Rational> {
    let pn = project_component(n, projector, component)?;
    let pm = project_component(m, projector, component)?;
    if pn.is_zero() || pm.is_zero() {
        return Err(Error::InvisibleInComponent(component));
    }
    born_probability(&pm, &pn)
}

/// All vectors of length `dim` with entries in `0..=bound`, lexicographic.
pub fn natural_box(dim: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=bound).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every ordered pair `(n, m)` of natural vectors in `[0, bound]^dim` with
/// nonzero projections and component probability exactly zero, in
/// lexicographic order of `(n, m)`.
pub fn interference_search(projector: &CycMatrix, bound: u64) -> Result<Vec<(Vec<u64>, Vec<u64>)>> {
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let visible: Vec<(Vec<u64>, Vec<Cyclotomic>)> = natural_box(projector.cols(), bound)
        .into_par_iter()
        .map(|v| {
            let p = projector.mul_vec(&StateVec::natural(&v).entries).expect("matching length");
            (v, p)
        })
        .filter(|(_, p)| !p.iter().all(Cyclotomic::is_zero))
        .collect();
    let hits: Vec<Vec<(Vec<u64>, Vec<u64>)>> = visible
        .par_iter()
        .map(|(n, pn)| {
            visible
                .iter()
                .filter(|(_, pm)| inner(pm, pn).expect("equal lengths").is_zero())
                .map(|(m, _)| (n.clone(), m.clone()))
                .collect()
        })
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: &[u64]) -> StateVec {
        StateVec::natural(v)
    }

    #[test]
    fn standard_inner_products() {
        assert!(inner_standard(&nat(&[1, 0]), &nat(&[0, 1])).unwrap().is_zero());
        assert_eq!(inner_standard(&nat(&[1, 1, 2]), &nat(&[1, 3, 2])).unwrap(), Cyclotomic::from_int(8));
        let z = Cyclotomic::root(3, 1).unwrap();
        let x = StateVec::new(vec![z, Cyclotomic::one()], BasisTag::Permutation);
        assert_eq!(inner_standard(&x, &x).unwrap(), Cyclotomic::from_int(2));
    }

    #[test]
    fn permutation_basis_probability() {
        let (n, m) = (nat(&[1, 1, 2]), nat(&[1, 3, 2]));
        // (Σmn)² / (Σm² Σn²) = 64 / (14 · 6)
        assert_eq!(born_probability(&m, &n).unwrap(), Rational::new(16, 21));
        assert_eq!(born_symmetric(&m, &n).unwrap(), Rational::new(16, 21));
        assert_eq!(born_probability(&n, &n).unwrap(), Rational::ONE);
    }

    #[test]
    fn symmetric_form_edge_cases() {
        assert_eq!(born_symmetric(&nat(&[2, 4]), &nat(&[1, 2])).unwrap(), Rational::ONE);
        assert_eq!(born_symmetric(&nat(&[1, 0]), &nat(&[0, 1])).unwrap(), Rational::ZERO);
        assert_eq!(wedge_norm2(&nat(&[1, 0]), &nat(&[0, 1])).unwrap(), Cyclotomic::one());
    }

    #[test]
    fn zero_vectors_and_tags_rejected() {
        assert_eq!(born_probability(&nat(&[0, 0]), &nat(&[1, 0])), Err(Error::ZeroVector));
        let q = StateVec::new(nat(&[1, 0]).entries, BasisTag::Quantum);
        assert!(born_probability(&q, &nat(&[1, 0])).is_err());
    }

    #[test]
    fn completeness_in_standard_basis() {
        let basis = vec![nat(&[1, 0, 0]), nat(&[0, 1, 0]), nat(&[0, 0, 1])];
        assert_eq!(completeness_check(&nat(&[1, 1, 2]), &basis).unwrap(), Rational::ONE);
        assert_eq!(completeness_check(&nat(&[1, 0, 0]), &basis).unwrap(), Rational::ONE);
        let skew = vec![nat(&[1, 1, 0]), nat(&[0, 1, 0])];
        assert!(completeness_check(&nat(&[1, 1, 2]), &skew).is_err());
        assert_eq!(born_probability(&basis[1], &nat(&[1, 1, 2])).unwrap(), Rational::new(1, 6));
    }

    #[test]
    fn natural_box_order() {
        assert_eq!(natural_box(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
