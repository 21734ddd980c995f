use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A bijection of `{1, …, degree}`.
///
/// Stored 0-based. Products follow the right-action convention: `a * b` first
/// applies `a`, then `b`, so `i·(ab) = (i·a)·b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

/// Multiset of cycle lengths: `length -> multiplicity`.
pub type CycleType = BTreeMap<usize, usize>;

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    /// From 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::InvalidArgument(format!("image {} out of range 0..{}", i, images.len())))?;
            if *slot {
                return Err(Error::InvalidArgument(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    /// From 1-based images as written in group input files, e.g. `[2, 3, 1]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero_based = images
            .iter()
            .map(|&i| {
                if i == 0 {
                    Err(Error::InvalidArgument("permutation images are 1-based".into()))
                } else {
                    Ok((i - 1) as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(zero_based)
    }

    /// From disjoint cycles over 1-based points, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if p == 0 || p > degree || next == 0 || next > degree {
                    return Err(Error::InvalidArgument(format!("point {p} outside 1..{degree}")));
                }
                if touched[p - 1] {
                    return Err(Error::InvalidArgument(format!("point {p} in two cycles")));
                }
                touched[p - 1] = true;
                images[p - 1] = (next - 1) as u32;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles (0-based points), each starting at its smallest point,
    /// fixed points included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut t = CycleType::new();
        for c in self.cycles() {
            *t.entry(c.len()).or_insert(0) += 1;
        }
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count()
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        self.compose(rhs).expect("permutation degree mismatch")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(deg: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(deg, cycles).unwrap()
    }

    #[test]
    fn transposition_squares_to_identity() {
        let t = cyc(3, &[&[1, 2]]);
        assert!((&t * &t).is_identity());
    }

    #[test]
    fn product_convention() {
        // i -> (2,3)((1,2)(i)): 1->2->3, 2->1->1, 3->3->2
        let p = &cyc(3, &[&[1, 2]]) * &cyc(3, &[&[2, 3]]);
        assert_eq!(p.one_based(), vec![3, 1, 2]);
        assert_eq!(p, cyc(3, &[&[1, 3, 2]]));
    }

    #[test]
    fn inverse_of_three_cycle() {
        assert_eq!(cyc(3, &[&[1, 2, 3]]).inverse(), cyc(3, &[&[1, 3, 2]]));
        let p = cyc(5, &[&[1, 4], &[2, 3, 5]]);
        assert!((&p * &p.inverse()).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(6), Perm::identity(5));
        assert_eq!(p.order(), 6);
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(3).cycle_type(), CycleType::from([(1, 3)]));
        assert_eq!(cyc(3, &[&[1, 2, 3]]).cycle_type(), CycleType::from([(3, 1)]));
        assert_eq!(cyc(3, &[&[1, 2]]).cycle_type(), CycleType::from([(1, 1), (2, 1)]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Perm::from_one_based(&[1, 1, 2]).is_err());
        assert!(Perm::from_one_based(&[0, 1]).is_err());
        assert!(Perm::from_one_based(&[1, 4, 2]).is_err());
        assert!(Perm::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
        assert_eq!(Perm::identity(2).compose(&Perm::identity(3)), Err(Error::DegreeMismatch(2, 3)));
    }

    #[test]
    fn display_uses_cycle_notation() {
        assert_eq!(cyc(4, &[&[1, 3], &[2, 4]]).to_string(), "(1,3)(2,4)");
        assert_eq!(Perm::identity(4).to_string(), "()");
    }
}
