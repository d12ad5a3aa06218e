//! Local quaternion algebra models.
//!
//! At a split prime, B_p is M_2(Q_p) with the main involution
//! X -> J^{-1} tX J (see `Mat2::conj_main`); reduced norm and trace are
//! determinant and matrix trace.
//!
//! At a ramified odd prime, B_p is the division algebra
//! F + F*Pi with F = Q_p(u), u^2 = eps a non-residue, Pi^2 = p and
//! Pi z = conj(z) Pi. Elements are stored in the basis {1, u, Pi, u Pi}.
//! The maximal order O is the set of elements with ord_Pi >= 0 and
//! P = Pi*O is its maximal ideal.

use crate::mat::Mat2;
use crate::padic::{p_pow, rat_i, val_p, Rat, Val};
use num_traits::{One, Zero};

/// Smallest positive quadratic non-residue mod p; the structure constant
/// u^2 = eps of the ramified model. Recorded in report headers.
pub fn non_residue(p: u64) -> u64 {
    assert!(p % 2 == 1, "ramified model needs an odd prime");
    let is_sq = |a: u64| (1..p).any(|x| x * x % p == a % p);
    (2..p).find(|&a| !is_sq(a)).expect("odd prime has a non-residue")
}

/// Errors from the ramified quaternion layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuatError {
    UnsupportedPrime(u64),
    DivisionByZero,
}

impl std::fmt::Display for QuatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuatError::UnsupportedPrime(p) => {
                write!(f, "ramified model unsupported at p = {p}")
            }
            QuatError::DivisionByZero => write!(f, "division by zero quaternion"),
        }
    }
}

impl std::error::Error for QuatError {}

/// Element a0 + a1 u + (b0 + b1 u) Pi of the ramified division algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamifiedQuaternion {
    pub p: u64,
    pub a0: Rat,
    pub a1: Rat,
    pub b0: Rat,
    pub b1: Rat,
}

/// F = Q_p(u) scalar helper: (f0 + f1 u).
fn f_mul(p: u64, f: (&Rat, &Rat), g: (&Rat, &Rat)) -> (Rat, Rat) {
    let eps = rat_i(non_residue(p) as i64);
    (f.0 * g.0 + &eps * f.1 * g.1, f.0 * g.1 + f.1 * g.0)
}

fn f_conj(f: (&Rat, &Rat)) -> (Rat, Rat) {
    (f.0.clone(), -f.1.clone())
}

impl RamifiedQuaternion {
    pub fn new(p: u64, a0: Rat, a1: Rat, b0: Rat, b1: Rat) -> Self {
        assert!(p % 2 == 1, "ramified model needs an odd prime");
        RamifiedQuaternion { p, a0, a1, b0, b1 }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn one(p: u64) -> Self {
        Self::from_rat(p, Rat::one())
    }

    pub fn from_rat(p: u64, r: Rat) -> Self {
        Self::new(p, r, Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn gen_u(p: u64) -> Self {
        Self::new(p, Rat::zero(), Rat::one(), Rat::zero(), Rat::zero())
    }

    pub fn gen_pi(p: u64) -> Self {
        Self::new(p, Rat::zero(), Rat::zero(), Rat::one(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero() && self.b0.is_zero() && self.b1.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.p,
            &self.a0 + &o.a0,
            &self.a1 + &o.a1,
            &self.b0 + &o.b0,
            &self.b1 + &o.b1,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.p,
            &self.a0 - &o.a0,
            &self.a1 - &o.a1,
            &self.b0 - &o.b0,
            &self.b1 - &o.b1,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.p,
            -self.a0.clone(),
            -self.a1.clone(),
            -self.b0.clone(),
            -self.b1.clone(),
        )
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::new(self.p, &self.a0 * r, &self.a1 * r, &self.b0 * r, &self.b1 * r)
    }

    /// (a + b Pi)(c + d Pi) = (ac + p b conj(d)) + (ad + b conj(c)) Pi.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let p = self.p;
        let a = (&self.a0, &self.a1);
        let b = (&self.b0, &self.b1);
        let c = (&o.a0, &o.a1);
        let d = (&o.b0, &o.b1);
        let dbar = f_conj(d);
        let cbar = f_conj(c);
        let ac = f_mul(p, a, c);
        let bdbar = f_mul(p, b, (&dbar.0, &dbar.1));
        let ad = f_mul(p, a, d);
        let bcbar = f_mul(p, b, (&cbar.0, &cbar.1));
        let pr = rat_i(p as i64);
        Self::new(
            p,
            ac.0 + &pr * &bdbar.0,
            ac.1 + &pr * &bdbar.1,
            ad.0 + bcbar.0,
            ad.1 + bcbar.1,
        )
    }

    /// Main involution: (a + b Pi) -> (conj(a) - b Pi).
    pub fn conj(&self) -> Self {
        Self::new(
            self.p,
            self.a0.clone(),
            -self.a1.clone(),
            -self.b0.clone(),
            -self.b1.clone(),
        )
    }

    /// Reduced norm N(x) = x conj(x) = N_F(a) - p N_F(b), a rational.
    pub fn norm(&self) -> Rat {
        let eps = rat_i(non_residue(self.p) as i64);
        let na = &self.a0 * &self.a0 - &eps * &self.a1 * &self.a1;
        let nb = &self.b0 * &self.b0 - &eps * &self.b1 * &self.b1;
        na - rat_i(self.p as i64) * nb
    }

    /// Reduced trace tr(x) = x + conj(x) = 2 a0.
    pub fn trace(&self) -> Rat {
        rat_i(2) * &self.a0
    }

    pub fn inverse(&self) -> Result<Self, QuatError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(QuatError::DivisionByZero);
        }
        Ok(self.conj().scale(&(Rat::one() / n)))
    }

    /// ord_Pi(x) = min(2 val_F(a), 1 + 2 val_F(b)); Val::Inf at 0.
    pub fn ord_pi(&self) -> Val {
        let va = f_val(&self.a0, &self.a1, self.p).map(|v| 2 * v);
        let vb = f_val(&self.b0, &self.b1, self.p).map(|v| 1 + 2 * v);
        match (va, vb) {
            (None, None) => Val::Inf,
            (Some(v), None) | (None, Some(v)) => Val::Fin(v),
            (Some(v), Some(w)) => Val::Fin(v.min(w)),
        }
    }

    /// x in O iff ord_Pi(x) >= 0.
    pub fn is_integral(&self) -> bool {
        self.ord_pi().ge(0)
    }

    /// Trace-zero part test (membership in B^-).
    pub fn is_trace_zero(&self) -> bool {
        self.a0.is_zero()
    }
}

fn f_val(f0: &Rat, f1: &Rat, p: u64) -> Option<i64> {
    let v0 = val_p(f0, p).finite();
    let v1 = val_p(f1, p).finite();
    match (v0, v1) {
        (None, None) => None,
        (Some(v), None) | (None, Some(v)) => Some(v),
        (Some(v), Some(w)) => Some(v.min(w)),
    }
}

/// ord_Pi as a free function, mirroring the split-side val_p.
pub fn ord_pi(x: &RamifiedQuaternion) -> Val {
    x.ord_pi()
}

/// Reduced norm and trace in either local model.
pub enum LocalQuaternion<'a> {
    Split(&'a Mat2),
    Ramified(&'a RamifiedQuaternion),
}

pub fn quat_norm_trace(x: LocalQuaternion<'_>) -> (Rat, Rat) {
    match x {
        LocalQuaternion::Split(m) => (m.det(), m.trace()),
        LocalQuaternion::Ramified(q) => (q.norm(), q.trace()),
    }
}

/// The lattice pair (L_p, L_p') entering the standard test function:
/// L_p = (O_p, P_p^{-1}) at a ramified prime and (O_p, O_p) = M_2(Z_p)^2
/// at a split prime.
#[derive(Clone, Copy, Debug)]
pub enum LatticePair {
    Split { p: u64 },
    Ramified { p: u64 },
}

impl LatticePair {
    /// Characteristic function of L_p at (x, y), split model.
    pub fn contains_split(p: u64, x: &Mat2, y: &Mat2) -> bool {
        x.is_integral(p) && y.is_integral(p)
    }

    /// Characteristic function of L_p at (x, y), ramified model:
    /// x in O and y in P^{-1}.
    pub fn contains_ramified(x: &RamifiedQuaternion, y: &RamifiedQuaternion) -> bool {
        x.ord_pi().ge(0) && y.ord_pi().ge(-1)
    }
}

/// Kinds of residue-class enumerations over the ramified order and the
/// trace-zero filtration X_n = { beta in B^- : ord_Pi(beta) >= n }.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    /// O / pi O (p^4 classes).
    OrderModP,
    /// O / Pi O (p^2 classes).
    OrderModPi,
    /// X_n / X_m for n < m.
    XnModXm(i64, i64),
    /// X_n / pi X_n = X_n / X_{n+2} (p^3 classes).
    XnModPiXn(i64),
    /// X_n^0 / X_m: classes meeting ord_Pi = n exactly, m >= n+1.
    Xn0ModXm(i64, i64),
}

fn ra(n: i64) -> i64 {
    // ceil(n/2)
    n.div_euclid(2) + if n.rem_euclid(2) == 1 { 1 } else { 0 }
}

fn rb(n: i64) -> i64 {
    ra(n - 1)
}

/// Exact coset representatives in basis coordinates.
pub fn enumerate_quotient(
    p: u64,
    kind: QuotientKind,
) -> Result<Vec<RamifiedQuaternion>, QuatError> {
    if p % 2 == 0 {
        return Err(QuatError::UnsupportedPrime(p));
    }
    let digits = |emin: i64, emax: i64| -> Vec<Rat> {
        // p^emin * {0, .., p^(emax-emin) - 1}
        let count = p.pow((emax - emin) as u32);
        (0..count).map(|k| p_pow(p, emin) * rat_i(k as i64)).collect()
    };
    let tz = |a1s: Vec<Rat>, b0s: Vec<Rat>, b1s: Vec<Rat>| -> Vec<RamifiedQuaternion> {
        let mut out = Vec::new();
        for a1 in &a1s {
            for b0 in &b0s {
                for b1 in &b1s {
                    out.push(RamifiedQuaternion::new(
                        p,
                        Rat::zero(),
                        a1.clone(),
                        b0.clone(),
                        b1.clone(),
                    ));
                }
            }
        }
        out
    };
    Ok(match kind {
        QuotientKind::OrderModP => {
            let d = digits(0, 1);
            let mut out = Vec::new();
            for a0 in &d {
                for a1 in &d {
                    for b0 in &d {
                        for b1 in &d {
                            out.push(RamifiedQuaternion::new(
                                p,
                                a0.clone(),
                                a1.clone(),
                                b0.clone(),
                                b1.clone(),
                            ));
                        }
                    }
                }
            }
            out
        }
        QuotientKind::OrderModPi => {
            let d = digits(0, 1);
            let mut out = Vec::new();
            for a0 in &d {
                for a1 in &d {
                    out.push(RamifiedQuaternion::new(
                        p,
                        a0.clone(),
                        a1.clone(),
                        Rat::zero(),
                        Rat::zero(),
                    ));
                }
            }
            out
        }
        QuotientKind::XnModXm(n, m) => {
            assert!(n < m, "need n < m for X_n/X_m");
            tz(
                digits(ra(n), ra(m)),
                digits(rb(n), rb(m)),
                digits(rb(n), rb(m)),
            )
        }
        QuotientKind::XnModPiXn(n) => {
            tz(
                digits(ra(n), ra(n) + 1),
                digits(rb(n), rb(n) + 1),
                digits(rb(n), rb(n) + 1),
            )
        }
        QuotientKind::Xn0ModXm(n, m) => {
            assert!(m >= n + 1, "need m >= n+1 for X_n^0/X_m");
            tz(
                digits(ra(n), ra(m)),
                digits(rb(n), rb(m)),
                digits(rb(n), rb(m)),
            )
            .into_iter()
            .filter(|q| q.ord_pi() == Val::Fin(n))
            .collect()
        }
    })
}
