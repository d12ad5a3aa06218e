//! The (kappa+1)-dimensional space V_kappa of binary forms with basis
//! P_r = X^r Y^(kappa-r), the symmetric-power action sigma_kappa through
//! the embedding A, and the invariant inner product.

use crate::quaternion::{C64, CQuat, Quat};

/// Pascal triangle rows 0..=n as complex scalars.
fn binomials(n: usize) -> Vec<Vec<C64>> {
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![C64::ONE; r + 1];
        for k in 1..r {
            row[k] = rows[r - 1][k - 1] + rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Vector in V_kappa in the monomial basis (index r = 0..kappa).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyV {
    pub kappa: usize,
    pub coeffs: Vec<C64>,
}

impl PolyV {
    pub fn basis(kappa: usize, r: usize) -> Self {
        let mut coeffs = vec![C64::ZERO; kappa + 1];
        coeffs[r] = C64::ONE;
        PolyV { kappa, coeffs }
    }
}

/// Endomorphism of V_kappa: column-major action M[a][b] = coefficient of
/// P_a in the image of P_b.
#[derive(Clone, Debug, PartialEq)]
pub struct EndV {
    pub kappa: usize,
    pub m: Vec<C64>,
}

impl EndV {
    pub fn zero(kappa: usize) -> Self {
        EndV {
            kappa,
            m: vec![C64::ZERO; (kappa + 1) * (kappa + 1)],
        }
    }

    pub fn identity(kappa: usize) -> Self {
        let mut out = Self::zero(kappa);
        for r in 0..=kappa {
            *out.at_mut(r, r) = C64::ONE;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.kappa + 1
    }

    pub fn at(&self, a: usize, b: usize) -> C64 {
        self.m[a * (self.kappa + 1) + b]
    }

    pub fn at_mut(&mut self, a: usize, b: usize) -> &mut C64 {
        &mut self.m[a * (self.kappa + 1) + b]
    }

    pub fn add(&self, o: &Self) -> Self {
        EndV {
            kappa: self.kappa,
            m: self.m.iter().zip(&o.m).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        EndV {
            kappa: self.kappa,
            m: self.m.iter().zip(&o.m).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, t: C64) -> Self {
        EndV {
            kappa: self.kappa,
            m: self.m.iter().map(|x| x * t).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(self.kappa);
        for a in 0..n {
            for j in 0..n {
                let x = self.at(a, j);
                if x == C64::ZERO {
                    continue;
                }
                for b in 0..n {
                    *out.at_mut(a, b) += x * o.at(j, b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &PolyV) -> PolyV {
        let n = self.dim();
        let mut coeffs = vec![C64::ZERO; n];
        for a in 0..n {
            for b in 0..n {
                coeffs[a] += self.at(a, b) * v.coeffs[b];
            }
        }
        PolyV {
            kappa: self.kappa,
            coeffs,
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Gaussian elimination inverse; panics on singular input.
    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut a: Vec<Vec<C64>> = (0..n)
            .map(|i| {
                let mut row: Vec<C64> = (0..n).map(|j| self.at(i, j)).collect();
                let mut id = vec![C64::ZERO; n];
                id[i] = C64::ONE;
                row.extend(id);
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r, &s| {
                    a[r][col]
                        .norm_sqr()
                        .partial_cmp(&a[s][col].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            a.swap(col, piv);
            let d = a[col][col];
            assert!(d.norm_sqr() > 0.0, "singular EndV");
            for j in 0..2 * n {
                a[col][j] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r][col];
                    if f != C64::ZERO {
                        for j in 0..2 * n {
                            let sub = f * a[col][j];
                            a[r][j] -= sub;
                        }
                    }
                }
            }
        }
        let mut out = Self::zero(self.kappa);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = a[i][j + n];
            }
        }
        out
    }

    /// Relative Frobenius deviation from another matrix.
    pub fn rel_dev(&self, o: &Self) -> f64 {
        let denom = o.frobenius().max(self.frobenius());
        if denom == 0.0 {
            0.0
        } else {
            self.sub(o).frobenius() / denom
        }
    }
}

/// sigma_kappa(alpha): (sigma(alpha) P)(X, Y) = P((X, Y) A(alpha)).
pub fn sigma_kappa(alpha: CQuat, kappa: usize) -> EndV {
    let a = alpha.embed();
    // Powers of the four entries up to kappa.
    let pow = |z: C64| -> Vec<C64> {
        let mut v = Vec::with_capacity(kappa + 1);
        let mut acc = C64::ONE;
        for _ in 0..=kappa {
            v.push(acc);
            acc *= z;
        }
        v
    };
    let p11 = pow(a[0][0]);
    let p21 = pow(a[1][0]);
    let p12 = pow(a[0][1]);
    let p22 = pow(a[1][1]);
    let binom = binomials(kappa);
    let mut out = EndV::zero(kappa);
    // P_b -> (A11 X + A21 Y)^b (A12 X + A22 Y)^(kappa - b).
    for b in 0..=kappa {
        for i in 0..=b {
            let ci = binom[b][i] * p11[i] * p21[b - i];
            for j in 0..=(kappa - b) {
                let cj = binom[kappa - b][j] * p12[j] * p22[kappa - b - j];
                let a_idx = i + j;
                *out.at_mut(a_idx, b) += ci * cj;
            }
        }
    }
    out
}

/// sigma_kappa of a real quaternion.
pub fn sigma_kappa_real(alpha: Quat, kappa: usize) -> EndV {
    sigma_kappa(alpha.complexify(), kappa)
}

/// Norm-squared of the monomial P_r: r! (kappa-r)! / (4 (2 pi)^kappa).
pub fn monomial_norm_sq(kappa: usize, r: usize) -> f64 {
    let mut v = 1.0 / (4.0 * (2.0 * std::f64::consts::PI).powi(kappa as i32));
    for k in 2..=r {
        v *= k as f64;
    }
    for k in 2..=(kappa - r) {
        v *= k as f64;
    }
    v
}

/// The invariant inner product (P, P')_kappa in closed form.
pub fn inner_product(p: &PolyV, q: &PolyV) -> C64 {
    assert_eq!(p.kappa, q.kappa);
    (0..=p.kappa)
        .map(|r| p.coeffs[r] * q.coeffs[r].conj() * monomial_norm_sq(p.kappa, r))
        .sum()
}

/// Adjoint of an endomorphism with respect to (., .)_kappa.
pub fn endv_adjoint(m: &EndV) -> EndV {
    let n = m.dim();
    let mut out = EndV::zero(m.kappa);
    for a in 0..n {
        for b in 0..n {
            // (M P_b, P_a) w-normalization: M*_{a,b} = conj(M_{b,a}) w_b / w_a.
            *out.at_mut(a, b) = m.at(b, a).conj()
                * (monomial_norm_sq(m.kappa, b) / monomial_norm_sq(m.kappa, a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_identity_and_diag() {
        let id = sigma_kappa_real(Quat::ONE, 6);
        assert!(id.rel_dev(&EndV::identity(6)) < 1e-14);
        // kappa = 2, alpha = i: diag(-1, 1, -1).
        let m = sigma_kappa_real(Quat::I, 2);
        let mut expected = EndV::zero(2);
        *expected.at_mut(0, 0) = C64::new(-1.0, 0.0);
        *expected.at_mut(1, 1) = C64::ONE;
        *expected.at_mut(2, 2) = C64::new(-1.0, 0.0);
        assert!(m.rel_dev(&expected) < 1e-14);
    }

    #[test]
    fn sigma_multiplicative() {
        let kappa = 8;
        let x = Quat::new(0.5, -1.0, 0.25, 2.0);
        let y = Quat::new(-0.75, 0.5, 1.5, -0.25);
        let lhs = sigma_kappa_real(x * y, kappa);
        let rhs = sigma_kappa_real(x, kappa).mul(&sigma_kappa_real(y, kappa));
        assert!(lhs.rel_dev(&rhs) < 1e-12);
    }

    #[test]
    fn diagonal_action_on_monomials() {
        // sigma(a + i b) P_r = (a + b s)^r (a - b s)^(kappa - r) P_r.
        let kappa = 5;
        let (a, b) = (C64::new(0.4, -0.2), C64::new(1.2, 0.5));
        let mut z = CQuat::zero();
        z.c[0] = a;
        z.c[1] = b;
        let m = sigma_kappa(z, kappa);
        let s = C64::new(0.0, 1.0);
        for r in 0..=kappa {
            let expected = (a + b * s).powu(r as u32) * (a - b * s).powu((kappa - r) as u32);
            for q in 0..=kappa {
                let got = m.at(q, r);
                let want = if q == r { expected } else { C64::ZERO };
                assert!((got - want).norm() < 1e-12 * expected.norm().max(1.0));
            }
        }
    }

    #[test]
    fn inner_product_invariance() {
        // (sigma(t) P, sigma(t) P') = (P, P') for unit t.
        let kappa = 6;
        let t = Quat::new(0.3, 0.5, -0.4, 0.7).normalized();
        let m = sigma_kappa_real(t, kappa);
        let p = PolyV {
            kappa,
            coeffs: (0..=kappa)
                .map(|r| C64::new(r as f64 - 2.0, 0.3 * r as f64))
                .collect(),
        };
        let q = PolyV {
            kappa,
            coeffs: (0..=kappa)
                .map(|r| C64::new(1.0 / (r as f64 + 1.0), -(r as f64)))
                .collect(),
        };
        let lhs = inner_product(&m.apply(&p), &m.apply(&q));
        let rhs = inner_product(&p, &q);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn adjoint_is_involutive() {
        let kappa = 4;
        let m = sigma_kappa_real(Quat::new(0.2, 1.0, -0.3, 0.4), kappa);
        let p = PolyV::basis(kappa, 1);
        let q = PolyV::basis(kappa, 3);
        let lhs = inner_product(&m.apply(&p), &q);
        let rhs = inner_product(&p, &endv_adjoint(&m).apply(&q));
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
