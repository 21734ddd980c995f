//! Small named groups used as a test battery.

use super::group::{ClosureOptions, FiniteGroup};
use super::perm::Perm;

fn close(degree: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
    let perms: Vec<Perm> = if gens.is_empty() {
        vec![Perm::identity(degree)]
    } else {
        gens.iter().map(|c| Perm::from_cycles(degree, c).expect("valid cycles")).collect()
    };
    FiniteGroup::closure(&perms, ClosureOptions::default()).expect("small group")
}

/// `C_n` generated by the `n`-cycle on `n` points.
pub fn cyclic(n: usize) -> FiniteGroup {
    let cycle: Vec<usize> = (1..=n).collect();
    close(n, &[&[&cycle]])
}

/// `S_n` generated by `(1,2)` and `(1,…,n)`.
pub fn symmetric(n: usize) -> FiniteGroup {
    if n < 2 {
        return close(n.max(1), &[]);
    }
    let cycle: Vec<usize> = (1..=n).collect();
    close(n, &[&[&[1, 2]], &[&cycle]])
}

/// `A_4` generated by `(1,2,3)` and `(1,2)(3,4)`.
pub fn alternating4() -> FiniteGroup {
    close(4, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]])
}

/// Klein four-group `C2 × C2` on 4 points.
pub fn klein_four() -> FiniteGroup {
    close(4, &[&[&[1, 2]], &[&[3, 4]]])
}

/// Dihedral group of order 8 acting on the square's vertices.
pub fn dihedral8() -> FiniteGroup {
    close(4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]])
}

/// Quaternion group in its regular action on 8 points.
pub fn quaternion8() -> FiniteGroup {
    close(8, &[&[&[1, 2, 3, 4], &[5, 6, 7, 8]], &[&[1, 5, 3, 7], &[2, 8, 4, 6]]])
}

/// `(name, group)` for C2, C3, C4, C2×C2, S3, D4, Q8, A4, S4.
pub fn battery() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C2xC2", klein_four()),
        ("S3", symmetric(3)),
        ("D4", dihedral8()),
        ("Q8", quaternion8()),
        ("A4", alternating4()),
        ("S4", symmetric(4)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_orders_and_class_counts() {
        let expected = [(2, 2), (3, 3), (4, 4), (4, 4), (6, 3), (8, 5), (8, 5), (12, 4), (24, 5)];
        for ((name, g), (order, k)) in battery().iter().zip(expected) {
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.num_classes(), k, "{name}");
        }
    }

    #[test]
    fn quaternion_structure() {
        let q = quaternion8();
        // one involution, six elements of order 4
        let orders: Vec<u64> = (0..8).map(|x| q.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert!(!q.is_abelian());
    }
}
