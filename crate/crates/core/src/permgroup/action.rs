use super::group::FiniteGroup;
use super::perm::Perm;
use crate::error::Result;

/// Action of a group on the right cosets of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetAction {
    /// `images[g]` permutes the cosets as `Ha -> Hag`, indexed by element id.
    pub images: Vec<Perm>,
    /// Element ids of each coset, ascending; cosets ordered by smallest member.
    pub cosets: Vec<Vec<usize>>,
    /// True iff only the identity acts trivially.
    pub faithful: bool,
}

/// Permutation action of `g` on the right cosets of `⟨h_generators⟩`.
pub fn coset_action(g: &FiniteGroup, h_generators: &[Perm]) -> Result<CosetAction> {
    let h = g.subgroup(h_generators)?;
    let h_ids: Vec<usize> = h.elements().iter().map(|p| g.index_of(p).expect("subgroup element")).collect();
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let id = cosets.len();
        let mut members: Vec<usize> = h_ids.iter().map(|&x| g.mul(x, a)).collect();
        members.sort_unstable();
        for &m in &members {
            coset_of[m] = id;
        }
        cosets.push(members);
    }
    let images: Vec<Perm> = (0..n)
        .map(|x| {
            let imgs = cosets.iter().map(|c| coset_of[g.mul(c[0], x)] as u32).collect();
            Perm::from_images(imgs).expect("coset action is a bijection")
        })
        .collect();
    let faithful = images.iter().skip(1).all(|p| !p.is_identity());
    Ok(CosetAction { images, cosets, faithful })
}

/// The right regular action: `Π(g)` sends element `i` to `i·g`.
pub fn regular_action(g: &FiniteGroup) -> Vec<Perm> {
    let n = g.order();
    (0..n)
        .map(|x| {
            let imgs = (0..n).map(|i| g.mul(i, x) as u32).collect();
            Perm::from_images(imgs).expect("Cayley row is a bijection")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{named, CycleType};

    fn cyc(deg: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(deg, cycles).unwrap()
    }

    #[test]
    fn trivial_subgroup_gives_regular_action() {
        let g = named::symmetric(3);
        let a = coset_action(&g, &[]).unwrap();
        assert_eq!(a.cosets.len(), 6);
        assert!(a.faithful);
        assert_eq!(a.images, regular_action(&g));
    }

    #[test]
    fn normal_subgroup_is_not_faithful() {
        let g = named::symmetric(3);
        let a = coset_action(&g, &[cyc(3, &[&[1, 2, 3]])]).unwrap();
        assert_eq!(a.cosets.len(), 2);
        assert!(!a.faithful);
        // kernel is exactly the 3-cycles plus identity
        let kernel: Vec<usize> = (0..6).filter(|&x| a.images[x].is_identity()).collect();
        assert_eq!(kernel.len(), 3);
        assert!(kernel.iter().all(|&x| g.element(x).order() != 2));
    }

    #[test]
    fn point_stabilizer_gives_natural_action() {
        let g = named::symmetric(3);
        let a = coset_action(&g, &[cyc(3, &[&[2, 3]])]).unwrap();
        assert_eq!(a.cosets.len(), 3);
        assert!(a.faithful);
        for x in 0..6 {
            assert_eq!(a.images[x].cycle_type(), g.element(x).cycle_type());
            assert_eq!(a.images[x].order(), g.element(x).order());
        }
        // a homomorphism into S3
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(a.images[g.mul(x, y)], &a.images[x] * &a.images[y]);
            }
        }
    }

    #[test]
    fn rejects_outside_generators() {
        let g = named::cyclic(3);
        assert!(coset_action(&g, &[cyc(3, &[&[1, 2]])]).is_err());
    }

    #[test]
    fn regular_actions() {
        let t = named::cyclic(1);
        assert_eq!(regular_action(&t), vec![Perm::identity(1)]);
        let c2 = named::cyclic(2);
        assert_eq!(regular_action(&c2), vec![Perm::identity(2), cyc(2, &[&[1, 2]])]);
        let s3 = named::symmetric(3);
        let mut types: Vec<CycleType> = regular_action(&s3).iter().map(Perm::cycle_type).collect();
        types.sort();
        let mut expected = vec![
            CycleType::from([(1, 6)]),
            CycleType::from([(2, 3)]),
            CycleType::from([(2, 3)]),
            CycleType::from([(2, 3)]),
            CycleType::from([(3, 2)]),
            CycleType::from([(3, 2)]),
        ];
        expected.sort();
        assert_eq!(types, expected);
        for (x, p) in regular_action(&s3).iter().enumerate() {
            assert_eq!(p.order(), s3.element(x).order());
            if x != 0 {
                assert_eq!(p.fixed_points(), 0);
            }
        }
    }
}
