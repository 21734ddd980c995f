//! Characteristic polynomials of permutation matrices.

use std::fmt;
use std::ops::Mul;

use super::perm::CycleType;

/// Dense integer polynomial in `λ`, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPoly(coeffs)
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::new(vec![c])
    }

    /// `λ^k - 1`.
    pub fn root_of_unity_factor(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[0] = -1;
        c[k] = 1;
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0]
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        let c = (0..n).map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0)).collect();
        IntPoly::new(c)
    }

    pub fn scale(&self, s: i64) -> IntPoly {
        IntPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        (0..e).fold(IntPoly::constant(1), |acc, _| &acc * self)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut c = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.0)
    }
}

/// `det(ρ(g) - λI)` from the cycle type of `g`:
/// `(-1)^n ∏ (λ^i - 1)^{k_i}` with `n = Σ i·k_i`, so the leading coefficient is `(-1)^n`.
pub fn charpoly_from_cycle_type(t: &CycleType) -> IntPoly {
    let degree: usize = t.iter().map(|(len, mult)| len * mult).sum();
    let prod =
        t.iter().fold(IntPoly::constant(1), |acc, (&len, &mult)| &acc * &IntPoly::root_of_unity_factor(len).pow(mult));
    if degree % 2 == 1 {
        prod.scale(-1)
    } else {
        prod
    }
}
