//! Small exact-rational matrices (2x2 and 4x4) and F_p rank.

use crate::padic::{sigma, val_p, Rat, Val};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// 2x2 matrix over Q, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Rat; 2]; 2]);

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Rat::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn diag(a: Rat, d: Rat) -> Self {
        Mat2([[a, Rat::zero()], [Rat::zero(), d]])
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Rat) -> Self {
        Mat2([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn det(&self) -> Rat {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    pub fn trace(&self) -> Rat {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            &self.0[i][0] * &other.0[0][j] + &self.0[i][1] * &other.0[1][j]
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] + &other.0[i][j])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] - &other.0[i][j])
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] * r)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(Mat2([
            [&self.0[1][1] / &d, -&self.0[0][1] / &d],
            [-&self.0[1][0] / &d, &self.0[0][0] / &d],
        ]))
    }

    /// All entries in Z_p.
    pub fn is_integral(&self, p: u64) -> bool {
        self.0.iter().flatten().all(|x| sigma(x, p))
    }

    /// The main involution of M_2(Q_p): X -> J^{-1} tX J = adj(X).
    pub fn conj_main(&self) -> Self {
        Mat2([
            [self.0[1][1].clone(), -self.0[0][1].clone()],
            [-self.0[1][0].clone(), self.0[0][0].clone()],
        ])
    }
}

/// 4x4 matrix over Q, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat4(pub [[Rat; 4]; 4]);

impl Mat4 {
    pub fn from_fn(f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut rows: Vec<[Rat; 4]> = Vec::with_capacity(4);
        for i in 0..4 {
            rows.push([f(i, 0), f(i, 1), f(i, 2), f(i, 3)]);
        }
        Mat4(rows.try_into().unwrap())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    /// Assemble from 2x2 blocks (A B; C D).
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Self {
        Self::from_fn(|i, j| {
            let m = match (i / 2, j / 2) {
                (0, 0) => a,
                (0, 1) => b,
                (1, 0) => c,
                _ => d,
            };
            m.0[i % 2][j % 2].clone()
        })
    }

    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        Mat2::from_fn(|i, j| self.0[2 * bi + i][2 * bj + j].clone())
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..4).map(|k| &self.0[i][k] * &other.0[k][j]).sum()
        })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] * r)
    }

    pub fn is_integral(&self, p: u64) -> bool {
        self.0.iter().flatten().all(|x| sigma(x, p))
    }

    pub fn min_val(&self, p: u64) -> Val {
        let mut best: Option<i64> = None;
        for x in self.0.iter().flatten() {
            if let Val::Fin(v) = val_p(x, p) {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        best.map_or(Val::Inf, Val::Fin)
    }
}

/// Rank over F_p of an integral rational matrix reduced mod p.
///
/// Panics if an entry is not p-integral.
pub fn rank_fp(m: &Mat4, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let x = &m.0[i][j];
            assert!(sigma(x, p), "rank_fp needs an integral matrix");
            // x mod p: numerator * denominator^{-1} mod p.
            let num = x.numer().mod_floor(&pb);
            let den = x.denom().mod_floor(&pb);
            let num = to_u64(&num) % p;
            let den = to_u64(&den) % p;
            let inv = mod_inverse(den, p);
            a[i][j] = ((num * inv) % p) as i64;
        }
    }
    let p = p as i64;
    let mut rank = 0;
    let mut row = 0;
    for col in 0..4 {
        let Some(piv) = (row..4).find(|&r| a[r][col] % p != 0) else {
            continue;
        };
        a.swap(row, piv);
        let inv = mod_inverse(a[row][col].rem_euclid(p) as u64, p as u64) as i64;
        for r in 0..4 {
            if r != row && a[r][col] % p != 0 {
                let factor = (a[r][col] * inv).rem_euclid(p);
                for c in 0..4 {
                    a[r][c] = (a[r][c] - factor * a[row][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == 4 {
            break;
        }
    }
    rank
}

fn to_u64(n: &BigInt) -> u64 {
    let (_, digits) = n.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "no inverse of 0 mod p");
    // Fermat; p is a small prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat_i;

    #[test]
    fn rank_mod_p() {
        let id = Mat4::identity();
        assert_eq!(rank_fp(&id, 3), 4);
        let m = Mat4::from_fn(|i, j| if i == 0 && j == 0 { rat_i(3) } else { rat_i(0) });
        assert_eq!(rank_fp(&m, 3), 0);
        let m = Mat4::from_fn(|i, j| rat_i(((i + 1) * (j + 1)) as i64));
        assert_eq!(rank_fp(&m, 5), 1);
    }

    #[test]
    fn main_involution_on_split_model() {
        let x = Mat2::new(rat_i(1), rat_i(2), rat_i(3), rat_i(4));
        let y = Mat2::new(rat_i(2), rat_i(-1), rat_i(5), rat_i(7));
        assert_eq!(x.conj_main().conj_main(), x);
        assert_eq!(
            x.mul(&y).conj_main(),
            y.conj_main().mul(&x.conj_main())
        );
        // Reduced norm and trace of the split model.
        assert_eq!(x.det(), rat_i(-2));
        assert_eq!(x.trace(), rat_i(5));
        assert_eq!(x.add(&x.conj_main()), Mat2::diag(rat_i(5), rat_i(5)));
    }
}
