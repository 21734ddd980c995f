use std::cmp::Ordering;
use std::sync::Arc;

use serde_json::{json, Value};

use super::modp::{prime_one_mod, Fp};
use crate::cyclotomic::{CycField, Cyclotomic};
use crate::error::{Error, Result};
use crate::permgroup::FiniteGroup;
use crate::rational::Rational;

/// Irreducible characters of a group, rows indexed by irreducible, columns by class.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    exponent: u32,
    /// `rows[j][k] = χ_j(C_k)`, all in `Q(ζ_exponent)`.
    rows: Vec<Vec<Cyclotomic>>,
    dims: Vec<usize>,
}

impl CharacterTable {
    /// Computes the table from the class algebra by common eigenvectors
    /// modulo a prime `p ≡ 1 (mod exponent)`, lifted by discrete Fourier inversion.
    pub fn compute(group: &Arc<FiniteGroup>) -> Result<CharacterTable> {
        let g = group.as_ref();
        let n = g.order() as u64;
        let k_count = g.num_classes();
        let e = g.exponent();
        let exponent = u32::try_from(e).map_err(|_| Error::InvalidArgument("exponent too large".into()))?;
        let f = Fp { p: prime_one_mod(e, 2 * n) };
        let sizes = g.class_sizes();
        let cd = g.class_coefficients();

        let eigvecs = split_common_eigenvectors(f, &cd.coefficients, k_count)?;
        let inverse: Vec<usize> = (0..k_count).map(|k| g.inverse_class(k)).collect();
        let z = f.primitive_root_of_unity(e);
        let field = CycField::new(exponent)?;

        let mut rows = Vec::with_capacity(k_count);
        let mut dims = Vec::with_capacity(k_count);
        for w in eigvecs {
            // N / d² = Σ_k w_k w_{k*} / h_k
            let s = (0..k_count)
                .fold(0, |acc, k| f.add(acc, f.mul(f.mul(w[k], w[inverse[k]]), f.inv(sizes[k] as u64 % f.p))));
            if s == 0 {
                return Err(Error::Internal("degenerate central character".into()));
            }
            let d2 = f.mul(n % f.p, f.inv(s));
            let d = (1..=n)
                .take_while(|d| d * d <= n)
                .find(|d| d * d == d2 && n.is_multiple_of(*d))
                .ok_or_else(|| Error::Internal("no valid character degree".into()))?;
            let chi_mod: Vec<u64> =
                (0..k_count).map(|k| f.mul(f.mul(d % f.p, w[k]), f.inv(sizes[k] as u64 % f.p))).collect();
            let row = (0..k_count).map(|k| lift(g, f, &field, &chi_mod, k, e, z, d)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
            dims.push(d as usize);
        }

        let mut order: Vec<usize> = (0..k_count).collect();
        order.sort_by(|&a, &b| {
            let nontrivial = |j: usize| !rows[j].iter().all(Cyclotomic::is_one);
            nontrivial(a).cmp(&nontrivial(b)).then(dims[a].cmp(&dims[b])).then_with(|| cmp_rows(&rows[a], &rows[b]))
        });
        let rows: Vec<Vec<Cyclotomic>> = order.iter().map(|&j| rows[j].clone()).collect();
        let dims: Vec<usize> = order.iter().map(|&j| dims[j]).collect();
        let table = CharacterTable { group: group.clone(), exponent, rows, dims };
        table.verify()?;
        Ok(table)
    }

    /// Exact check of row orthogonality, `Σ d² = |G|` and `d | |G|`.
    pub fn verify(&self) -> Result<()> {
        let n = self.group.order();
        let k_count = self.num_classes();
        let sizes = self.group.class_sizes();
        if self.rows.len() != k_count {
            return Err(Error::Internal("number of irreducibles differs from number of classes".into()));
        }
        for i in 0..k_count {
            for j in 0..k_count {
                let mut s = Cyclotomic::zero();
                for k in 0..k_count {
                    let t = &self.rows[i][k] * &self.rows[j][k].conj();
                    s += &t.scale(&Rational::from(sizes[k]));
                }
                let expected = if i == j { n as i64 } else { 0 };
                if s != Cyclotomic::from_int(expected) {
                    return Err(Error::Internal(format!("rows {i} and {j} fail orthogonality")));
                }
            }
        }
        if self.dims.iter().map(|d| d * d).sum::<usize>() != n || self.dims.iter().any(|d| !n.is_multiple_of(*d)) {
            return Err(Error::Internal("character degrees inconsistent with group order".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Field order of every entry.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn num_classes(&self) -> usize {
        self.group.num_classes()
    }

    pub fn rows(&self) -> &[Vec<Cyclotomic>] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &[Cyclotomic] {
        &self.rows[j]
    }

    pub fn value(&self, j: usize, k: usize) -> &Cyclotomic {
        &self.rows[j][k]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `χ_j` at an element id.
    pub fn value_at(&self, j: usize, element: usize) -> &Cyclotomic {
        &self.rows[j][self.group.class_of(element)]
    }

    pub fn to_json(&self) -> Value {
        let g = &self.group;
        let classes: Vec<Value> = (0..g.num_classes())
            .map(|k| {
                let ct: Vec<Value> = g.class_cycle_type(k).iter().map(|(l, m)| json!([l, m])).collect();
                json!({
                    "size": g.classes()[k].len(),
                    "representative": g.element(g.class_representative(k)).to_string(),
                    "cycle_type": ct,
                })
            })
            .collect();
        let rows: Vec<Value> =
            self.rows.iter().map(|r| Value::Array(r.iter().map(Cyclotomic::to_json).collect())).collect();
        json!({
            "group_order": g.order(),
            "exponent": self.exponent,
            "classes": classes,
            "dims": self.dims,
            "rows": rows,
        })
    }
}

fn cmp_rows(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.cmp_canonical(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Common eigenvectors of `(M_i)_{jk} = c_ijk`, each scaled so the identity-class entry is 1.
fn split_common_eigenvectors(f: Fp, c: &[Vec<Vec<u64>>], k_count: usize) -> Result<Vec<Vec<u64>>> {
    // Each subspace is a list of column vectors spanning it.
    let full: Vec<Vec<u64>> = (0..k_count)
        .map(|i| {
            let mut v = vec![0; k_count];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces = vec![full];
    for i in 0..k_count {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m: Vec<u64> =
            (0..k_count).flat_map(|j| (0..k_count).map(move |k| (j, k))).map(|(j, k)| c[i][j][k] % f.p).collect();
        let poly = f.charpoly(&m, k_count);
        let roots: Vec<u64> = (0..f.p).filter(|&x| f.eval(&poly, x) == 0).collect();
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let mut found = 0;
            for &lambda in &roots {
                // (M_i - λ) B x = 0
                let s = space.len();
                let mut a = vec![0u64; k_count * s];
                for j in 0..k_count {
                    for (col, v) in space.iter().enumerate() {
                        let mut acc = 0;
                        for k in 0..k_count {
                            let mjk = if j == k { f.sub(m[j * k_count + k], lambda) } else { m[j * k_count + k] };
                            acc = f.add(acc, f.mul(mjk, v[k]));
                        }
                        a[j * s + col] = acc;
                    }
                }
                let ns = f.nullspace(&a, k_count, s);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                next.push(
                    ns.iter()
                        .map(|x| {
                            (0..k_count)
                                .map(|r| (0..s).fold(0, |acc, col| f.add(acc, f.mul(x[col], space[col][r]))))
                                .collect()
                        })
                        .collect(),
                );
            }
            if found != space.len() {
                return Err(Error::Internal("class matrix not diagonalisable over the chosen prime".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal("class matrices failed to separate the characters".into()));
    }
    spaces
        .into_iter()
        .map(|mut s| {
            let v = s.pop().expect("one vector");
            if v[0] == 0 {
                return Err(Error::Internal("eigenvector vanishes at the identity class".into()));
            }
            let inv = f.inv(v[0]);
            Ok(v.into_iter().map(|x| f.mul(x, inv)).collect())
        })
        .collect()
}

/// Recovers `χ(C_k) = Σ_l a_l ζ_e^l` from values mod `p`, where `a_l` is the
/// multiplicity of the eigenvalue `ζ_e^l` and so lies in `[0, d]`.
#[allow(clippy::too_many_arguments)]
fn lift(
    g: &FiniteGroup,
    f: Fp,
    field: &Arc<CycField>,
    chi: &[u64],
    k: usize,
    e: u64,
    z: u64,
    d: u64,
) -> Result<Cyclotomic> {
    let powers: Vec<u64> = (0..e).map(|j| chi[g.class_power(k, j as i64)]).collect();
    let e_inv = f.inv(e % f.p);
    let mut value = Cyclotomic::zero_in(field);
    let mut total = 0;
    for l in 0..e {
        let zl = f.inv(f.pow(z, l));
        let mut acc = 0;
        let mut zjl = 1;
        for &v in &powers {
            acc = f.add(acc, f.mul(v, zjl));
            zjl = f.mul(zjl, zl);
        }
        let a = f.mul(acc, e_inv);
        if a > d {
            return Err(Error::Internal(format!("eigenvalue multiplicity {a} exceeds degree {d}")));
        }
        total += a;
        if a > 0 {
            value += &Cyclotomic::root_in(field, l as i64).scale(&Rational::from(a as i64));
        }
    }
    if total != d {
        return Err(Error::Internal("eigenvalue multiplicities do not sum to the degree".into()));
    }
    Ok(value)
}
