//! Linear algebra over a prime field `F_p`, `p < 2^32`.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// A primitive `e`-th root of unity; requires `e | p - 1`.
    pub fn primitive_root_of_unity(self, e: u64) -> u64 {
        let primes = prime_factors(e);
        (2..self.p)
            .map(|a| self.pow(a, (self.p - 1) / e))
            .find(|&z| primes.iter().all(|&q| self.pow(z, e / q) != 1))
            .unwrap_or(1)
    }

    /// Basis of the right nullspace of a `rows × cols` row-major matrix.
    pub fn nullspace(self, m: &[u64], rows: usize, cols: usize) -> Vec<Vec<u64>> {
        let mut a = m.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
            let inv = self.inv(a[r * cols + c]);
            for j in 0..cols {
                a[r * cols + j] = self.mul(a[r * cols + j], inv);
            }
            for i in 0..rows {
                let f = a[i * cols + c];
                if i == r || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    a[i * cols + j] = self.sub(a[i * cols + j], self.mul(f, a[r * cols + j]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![0; cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.sub(0, a[row * cols + f]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(xI - A)` of an `n × n` matrix, ascending coefficients.
    pub fn charpoly(self, m: &[u64], n: usize) -> Vec<u64> {
        let mut h = m.to_vec();
        // Similarity reduction to upper Hessenberg form.
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&i| h[i * n + c] != 0) else {
                continue;
            };
            if piv != c + 1 {
                for j in 0..n {
                    h.swap(piv * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.swap(i * n + piv, i * n + c + 1);
                }
            }
            let inv = self.inv(h[(c + 1) * n + c]);
            for i in c + 2..n {
                let f = self.mul(h[i * n + c], inv);
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    h[i * n + j] = self.sub(h[i * n + j], self.mul(f, h[(c + 1) * n + j]));
                }
                for k in 0..n {
                    h[k * n + c + 1] = self.add(h[k * n + c + 1], self.mul(f, h[k * n + i]));
                }
            }
        }
        // p_k is the charpoly of the leading k×k block.
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            let hk = h[(k - 1) * n + (k - 1)];
            let prev = &polys[k - 1];
            let mut next = vec![0u64; k + 1];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(hk, c));
            }
            let mut prod = 1u64;
            for i in (1..k).rev() {
                prod = self.mul(prod, h[i * n + (i - 1)]);
                let coef = self.mul(prod, h[(i - 1) * n + (k - 1)]);
                if coef == 0 {
                    continue;
                }
                for (d, &c) in polys[i - 1].iter().enumerate() {
                    next[d] = self.sub(next[d], self.mul(coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().expect("nonempty")
    }

    pub fn eval(self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p > lower` with `p ≡ 1 (mod e)`.
pub(crate) fn prime_one_mod(e: u64, lower: u64) -> u64 {
    let start = lower + 1;
    let mut p = start + (1 + e - start % e) % e;
    while !is_prime(p) {
        p += e;
    }
    p
}
