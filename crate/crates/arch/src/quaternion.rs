//! Hamilton quaternions over f64 and their complexification H (x) C,
//! with the embedding A into 2x2 complex matrices.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

/// a0 + a1 i + a2 j + a3 k with real coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quat {
    pub c: [f64; 4],
}

impl Quat {
    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Quat { c: [a0, a1, a2, a3] }
    }

    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub fn real(t: f64) -> Self {
        Quat::new(t, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quat::new(self.c[0], -self.c[1], -self.c[2], -self.c[3])
    }

    pub fn norm(self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn trace(self) -> f64 {
        2.0 * self.c[0]
    }

    pub fn abs(self) -> f64 {
        self.norm().sqrt()
    }

    pub fn scale(self, t: f64) -> Self {
        Quat::new(t * self.c[0], t * self.c[1], t * self.c[2], t * self.c[3])
    }

    pub fn inverse(self) -> Self {
        let n = self.norm();
        self.conj().scale(1.0 / n)
    }

    /// The imaginary (trace-zero) part.
    pub fn imag(self) -> Self {
        Quat::new(0.0, self.c[1], self.c[2], self.c[3])
    }

    /// Normalize to the unit sphere H^1.
    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.abs())
    }

    pub fn complexify(self) -> CQuat {
        CQuat {
            c: [
                C64::new(self.c[0], 0.0),
                C64::new(self.c[1], 0.0),
                C64::new(self.c[2], 0.0),
                C64::new(self.c[3], 0.0),
            ],
        }
    }

    /// A unit quaternion u with u (t i) u^{-1} equal to the imaginary
    /// part of self (t = |imag|). Any unit works at t = 0.
    pub fn rotation_to_imag_axis(self) -> Quat {
        let v = self.imag();
        let t = v.abs();
        if t < 1e-300 {
            return Quat::ONE;
        }
        let vhat = v.scale(1.0 / t);
        // q a q^{-1} = b for q = 1 - b a with unit imaginary a, b.
        let q = Quat::ONE - vhat * Quat::I;
        if q.abs() < 1e-8 {
            // vhat = -i: rotate around j.
            return Quat::J;
        }
        q.normalized()
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(
            self.c[0] + o.c[0],
            self.c[1] + o.c[1],
            self.c[2] + o.c[2],
            self.c[3] + o.c[3],
        )
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        self + o.neg()
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = o.c;
        Quat::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

/// Element of H (x)_R C: four complex coordinates over {1, i, j, k}.
/// The complex unit sqrt(-1) is central and distinct from i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CQuat {
    pub c: [C64; 4],
}

impl CQuat {
    pub const fn new(c: [C64; 4]) -> Self {
        CQuat { c }
    }

    pub fn zero() -> Self {
        CQuat::new([C64::ZERO; 4])
    }

    pub fn one() -> Self {
        let mut c = [C64::ZERO; 4];
        c[0] = C64::ONE;
        CQuat::new(c)
    }

    /// Main involution extended C-linearly.
    pub fn conj_quat(self) -> Self {
        CQuat::new([self.c[0], -self.c[1], -self.c[2], -self.c[3]])
    }

    /// Reduced norm, a complex scalar.
    pub fn norm(self) -> C64 {
        self.c.iter().map(|z| z * z).sum()
    }

    pub fn scale(self, t: C64) -> Self {
        CQuat::new([self.c[0] * t, self.c[1] * t, self.c[2] * t, self.c[3] * t])
    }

    pub fn add(self, o: Self) -> Self {
        CQuat::new([
            self.c[0] + o.c[0],
            self.c[1] + o.c[1],
            self.c[2] + o.c[2],
            self.c[3] + o.c[3],
        ])
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.scale(-C64::ONE))
    }

    pub fn mul(self, o: Self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = o.c;
        CQuat::new([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }

    /// x + sqrt(-1) y for real quaternions x, y.
    pub fn mix(x: Quat, y: Quat) -> Self {
        CQuat::new([
            C64::new(x.c[0], y.c[0]),
            C64::new(x.c[1], y.c[1]),
            C64::new(x.c[2], y.c[2]),
            C64::new(x.c[3], y.c[3]),
        ])
    }

    /// The embedding A as a 2x2 complex matrix
    /// (a0 + a1 s, a2 + a3 s; -a2 + a3 s, a0 - a1 s), s = sqrt(-1).
    pub fn embed(self) -> [[C64; 2]; 2] {
        let s = C64::new(0.0, 1.0);
        let [a0, a1, a2, a3] = self.c;
        [
            [a0 + a1 * s, a2 + a3 * s],
            [-a2 + a3 * s, a0 - a1 * s],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::I, -Quat::K);
        assert_eq!(Quat::I * Quat::I, -Quat::ONE);
        let x = Quat::new(1.0, 2.0, -1.0, 0.5);
        let y = Quat::new(0.3, -1.0, 2.0, 1.0);
        let lhs = (x * y).norm();
        let rhs = x.norm() * y.norm();
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
        assert!(((x * y).conj() - y.conj() * x.conj()).abs() < 1e-12);
    }

    #[test]
    fn embedding_is_multiplicative() {
        let x = Quat::new(0.2, 1.0, -0.7, 0.4).complexify();
        let y = Quat::new(-1.0, 0.1, 0.6, 2.0).complexify();
        let ax = x.embed();
        let ay = y.embed();
        let axy = x.mul(y).embed();
        for i in 0..2 {
            for j in 0..2 {
                let prod = ax[i][0] * ay[0][j] + ax[i][1] * ay[1][j];
                assert!((prod - axy[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_normal_form() {
        for v in [
            Quat::new(0.5, 1.0, 2.0, -0.5),
            Quat::new(0.0, -1.0, 0.0, 0.0),
            Quat::new(1.0, 0.0, 0.3, 0.0),
            Quat::new(0.0, 2.0, 0.0, 0.0),
        ] {
            let t = v.imag().abs();
            let u = v.rotation_to_imag_axis();
            assert!((u.norm() - 1.0).abs() < 1e-12);
            let got = u * Quat::I.scale(t) * u.inverse();
            assert!((got - v.imag()).abs() < 1e-9, "{v:?}");
        }
    }
}
