//! The representation-theoretic kernels at the Archimedean place:
//! Phi_kappa, the transform M_kappa (closed form and 3-D quadrature),
//! the spherical functions on H_infty and G_infty, the standard test
//! functions, and the Hecke-averaged closed forms.

use crate::polyv::{sigma_kappa, sigma_kappa_real, EndV};
use crate::quad::Axis;
use crate::quaternion::{C64, CQuat, Quat};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Phi_kappa(x) = N(x)^{-1} sigma_kappa(x)^{-1} = N(x)^{-kappa-1} sigma_kappa(conj x).
pub fn phi_kappa(x: CQuat, kappa: usize) -> EndV {
    let n = x.norm();
    sigma_kappa(x.conj_quat(), kappa).scale(n.powi(-(kappa as i32) - 1))
}

pub fn phi_kappa_real(x: Quat, kappa: usize) -> EndV {
    phi_kappa(x.complexify(), kappa)
}

/// lambda(kappa) = 2^(2 kappa - 1) pi^(kappa + 1) / kappa!.
pub fn lambda_const(kappa: usize) -> f64 {
    let mut v = 2.0f64.powi(2 * kappa as i32 - 1) * PI.powi(kappa as i32 + 1);
    for k in 2..=kappa {
        v /= k as f64;
    }
    v
}

/// Matrix unit sending P_kappa to c P_kappa and killing the rest.
fn top_unit(kappa: usize, c: C64) -> EndV {
    let mut m = EndV::zero(kappa);
    *m.at_mut(kappa, kappa) = c;
    m
}

/// Closed form of M_kappa: vanishes on the real axis, and on
/// xi = u (s + i t) u^{-1} equals
/// sigma(u) [P_r -> delta_{r kappa} lambda t^{kappa-1} e^{-4 pi t} P_kappa] sigma(u)^{-1}.
pub fn m_kappa_closed(xi: Quat, kappa: usize) -> EndV {
    let t = xi.imag().abs();
    if t == 0.0 {
        return EndV::zero(kappa);
    }
    let u = xi.rotation_to_imag_axis();
    let c = lambda_const(kappa) * t.powi(kappa as i32 - 1) * (-4.0 * PI * t).exp();
    let su = sigma_kappa_real(u, kappa);
    let su_inv = sigma_kappa_real(u.inverse(), kappa);
    su.mul(&top_unit(kappa, C64::new(c, 0.0))).mul(&su_inv)
}

/// Node counts for the 3-D M_kappa quadrature.
#[derive(Clone, Copy, Debug)]
pub struct MKappaQuadSpec {
    pub radius: f64,
    pub osc_nodes_per_period: usize,
    pub graded_first: f64,
    pub nodes_per_panel: usize,
}

impl Default for MKappaQuadSpec {
    fn default() -> Self {
        MKappaQuadSpec {
            radius: 34.0,
            osc_nodes_per_period: 10,
            graded_first: 0.4,
            nodes_per_panel: 18,
        }
    }
}

impl MKappaQuadSpec {
    /// Radius tuned to the (1 + |b|^2)^(-kappa/2-1) tail at weight kappa.
    pub fn for_kappa(kappa: usize) -> Self {
        let radius = if kappa <= 5 { 34.0 } else if kappa <= 8 { 20.0 } else { 14.0 };
        MKappaQuadSpec {
            radius,
            ..Default::default()
        }
    }
}

/// Direct 3-D quadrature of M_kappa(xi) = int_{H^-} e(-tr(xi b)) Phi(1+b) dLb.
///
/// The character is e(2 (xi_im . b)) so each axis oscillates with the
/// matching component of xi; axes are uniform panels sized by the local
/// period where oscillatory and geometrically graded otherwise.
pub fn m_kappa_numeric(xi: Quat, kappa: usize, spec: &MKappaQuadSpec) -> EndV {
    let freqs = [xi.c[1], xi.c[2], xi.c[3]];
    let axis = |f: f64| -> Axis {
        if f.abs() > 1e-12 {
            let period = 1.0 / (2.0 * f.abs());
            let width = (period / spec.osc_nodes_per_period as f64 * spec.nodes_per_panel as f64)
                .min(2.0);
            Axis::uniform(-spec.radius, spec.radius, width, spec.nodes_per_panel)
        } else {
            Axis::graded_symmetric(spec.radius, spec.graded_first, spec.nodes_per_panel)
        }
    };
    let (a1, a2, a3) = (axis(freqs[0]), axis(freqs[1]), axis(freqs[2]));
    let dim = kappa + 1;
    let flat = a1
        .nodes
        .par_iter()
        .zip(a1.weights.par_iter())
        .map(|(&b1, &w1)| {
            let mut acc = vec![C64::ZERO; dim * dim];
            for (&b2, &w2) in a2.nodes.iter().zip(&a2.weights) {
                for (&b3, &w3) in a3.nodes.iter().zip(&a3.weights) {
                    let beta = Quat::new(0.0, b1, b2, b3);
                    // -tr(xi beta) = 2 (xi_1 b1 + xi_2 b2 + xi_3 b3)
                    let phase = 2.0 * PI * 2.0 * (freqs[0] * b1 + freqs[1] * b2 + freqs[2] * b3);
                    let w = C64::from_polar(w1 * w2 * w3, phase);
                    let phi = phi_kappa_real(Quat::ONE + beta, kappa);
                    for (a, p) in acc.iter_mut().zip(phi.m.iter()) {
                        *a += w * p;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![C64::ZERO; dim * dim],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    EndV { kappa, m: flat }
}

/// 2x2 matrices over the real quaternions: elements of H_infty, G_infty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QMat2(pub [[Quat; 2]; 2]);

impl QMat2 {
    pub fn identity() -> Self {
        QMat2([[Quat::ONE, Quat::ZERO], [Quat::ZERO, Quat::ONE]])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = [[Quat::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j];
            }
        }
        QMat2(out)
    }

    pub fn scale(&self, t: f64) -> Self {
        let mut out = self.0;
        for row in &mut out {
            for x in row.iter_mut() {
                *x = x.scale(t);
            }
        }
        QMat2(out)
    }

    /// Entrywise distance, for sample assertions.
    pub fn dist(&self, o: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d += (self.0[i][j] - o.0[i][j]).norm();
            }
        }
        d.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularArgument;

/// omega_kappa(h) = sigma_kappa(1/2 (-s, 1) h (s; 1))^{-1}, s = sqrt(-1).
pub fn omega_spherical(h: &QMat2, kappa: usize) -> Result<EndV, SingularArgument> {
    // 1/2 (h11 + h22 + s (h21 - h12)) in H (x) C.
    let arg = CQuat::mix(h.0[0][0] + h.0[1][1], h.0[1][0] - h.0[0][1]).scale(C64::new(0.5, 0.0));
    let n = arg.norm();
    if n.norm() < 1e-300 {
        return Err(SingularArgument);
    }
    // sigma(arg)^{-1} = sigma(arg^{-1}) with arg^{-1} = conj(arg)/N(arg).
    Ok(sigma_kappa(arg.conj_quat().scale(n.inv()), kappa))
}

/// Delta_g = (a + b + c + d)/2 for g = (a b; c d).
pub fn delta_g(g: &QMat2) -> Quat {
    (g.0[0][0] + g.0[0][1] + g.0[1][0] + g.0[1][1]).scale(0.5)
}

/// Omega_kappa(g) = N(Delta_g)^{-1} sigma_kappa(Delta_g)^{-1} = Phi_kappa(Delta_g).
pub fn omega_big(g: &QMat2, kappa: usize) -> Result<EndV, SingularArgument> {
    let d = delta_g(g);
    if d.norm() < 1e-300 {
        return Err(SingularArgument);
    }
    Ok(phi_kappa_real(d, kappa))
}

/// u = t R(theta) in U_infty, together with the data for rho_kappa.
#[derive(Clone, Copy, Debug)]
pub struct UElement {
    pub t: Quat,
    pub theta: f64,
}

impl UElement {
    pub fn matrix(&self) -> QMat2 {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        QMat2([
            [self.t.scale(c), self.t.scale(s)],
            [self.t.scale(-s), self.t.scale(c)],
        ])
    }

    /// rho_kappa(t R(theta)) = e^{-s kappa theta} sigma_kappa(t).
    pub fn rho(&self, kappa: usize) -> EndV {
        let phase = C64::from_polar(1.0, -(kappa as f64) * self.theta);
        sigma_kappa_real(self.t, kappa).scale(phase)
    }
}

/// k = (a b; b a) in K_infty built from (s, t) in H^1 x H^1 via
/// a = (s+t)/2, b = (s-t)/2; tau_kappa(k) = sigma(s), tau_kappa^-(k) = sigma(t).
#[derive(Clone, Copy, Debug)]
pub struct KElement {
    pub s: Quat,
    pub t: Quat,
}

impl KElement {
    pub fn matrix(&self) -> QMat2 {
        let a = (self.s + self.t).scale(0.5);
        let b = (self.s - self.t).scale(0.5);
        QMat2([[a, b], [b, a]])
    }

    pub fn tau(&self, kappa: usize) -> EndV {
        sigma_kappa_real(self.s, kappa)
    }

    pub fn tau_minus(&self, kappa: usize) -> EndV {
        sigma_kappa_real(self.t, kappa)
    }
}

/// phi_{0,infty} on H^(2,1): e(s tXbar X) sigma_kappa((1, -s) Xbar).
pub fn testfn_phi0_col(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let gauss = (-2.0 * PI * (x1.norm() + x2.norm())).exp();
    sigma_kappa(CQuat::mix(x1.conj(), -x2.conj()), kappa).scale(C64::new(gauss, 0.0))
}

/// phi_{0,infty} on H^(1,2): e(s X' tX'bar) sigma_kappa((1,1) tX'bar).
pub fn testfn_phi0_row(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let gauss = (-2.0 * PI * (x1.norm() + x2.norm())).exp();
    sigma_kappa_real(x1.conj() + x2.conj(), kappa).scale(C64::new(gauss, 0.0))
}

/// phi*_{0,infty} on H^(2,1): sigma_kappa((1, s) X).
pub fn testfn_phi0_star_col(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let gauss = (-2.0 * PI * (x1.norm() + x2.norm())).exp();
    sigma_kappa(CQuat::mix(x1, x2), kappa).scale(C64::new(gauss, 0.0))
}

/// phi*_{0,infty} on H^(1,2): sigma_kappa((1,-1) tX').
pub fn testfn_phi0_star_row(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let gauss = (-2.0 * PI * (x1.norm() + x2.norm())).exp();
    sigma_kappa_real(x1 - x2, kappa).scale(C64::new(gauss, 0.0))
}

/// Hecke-averaged test function on the H side, closed form:
/// phi_omega(x1, x2) = 2^(kappa-2) pi^{-1} kappa delta(T > 0) T^(kappa-1)
/// e^(-2 pi T) Phi_kappa(x1 + x2) with T = tr(conj(x1) x2).
pub fn phi_omega(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let t = (x1.conj() * x2).trace();
    if t <= 0.0 {
        return EndV::zero(kappa);
    }
    let c = 2.0f64.powi(kappa as i32 - 2) / PI
        * kappa as f64
        * t.powi(kappa as i32 - 1)
        * (-2.0 * PI * t).exp();
    phi_kappa_real(x1 + x2, kappa).scale(C64::new(c, 0.0))
}

/// Adjoint counterpart: supported on T < 0 with Phi_kappa(conj(x1 - x2)).
pub fn phi_omega_star(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    let t = (x1.conj() * x2).trace();
    if t >= 0.0 {
        return EndV::zero(kappa);
    }
    let c = 2.0f64.powi(kappa as i32 - 2) / PI
        * kappa as f64
        * (-t).powi(kappa as i32 - 1)
        * (2.0 * PI * t).exp();
    phi_kappa_real((x1 - x2).conj(), kappa).scale(C64::new(c, 0.0))
}

/// Threshold below which x2 + x1 i is treated as the singular branch.
const SINGULAR_EPS: f64 = 1e-12;

/// G-side Hecke-averaged test function in closed form, on all of
/// H^(2,1). A unit rotation alpha moves conj(x1) x2 onto s - i t with
/// t >= 0; the value is rank one with image spanned by P_kappa.
pub fn phi_omega_big(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    if x1.norm() + x2.norm() == 0.0 {
        return EndV::zero(kappa);
    }
    let xi = x1.conj() * x2;
    let t = xi.imag().abs();
    // alpha with conj(alpha) xi alpha = s - i t.
    let alpha = rotation_to_minus_i(xi);
    let y1 = x1 * alpha;
    let y2 = x2 * alpha;
    let norm2 = x1.norm() + x2.norm();
    let inner = if (y2 + y1 * Quat::I).abs() <= SINGULAR_EPS * norm2.sqrt().max(1.0) {
        // Singular branch y2 = -y1 i: value on sigma(y1)^{-1}.
        if y1.norm() == 0.0 {
            return EndV::zero(kappa);
        }
        let c = 2.0 * PI / kappa as f64
            * norm2.powi(kappa as i32 - 1)
            * (-2.0 * PI * norm2).exp();
        top_unit(kappa, C64::new(c, 0.0))
            .mul(&sigma_kappa_real(y1.inverse(), kappa))
    } else {
        if t == 0.0 {
            return EndV::zero(kappa);
        }
        let c = 2.0f64.powi(2 * kappa as i32) * PI / kappa as f64
            * t.powi(kappa as i32 - 1)
            * (-4.0 * PI * t).exp()
            * (norm2 + 2.0 * t).powi(-(kappa as i32));
        top_unit(kappa, C64::new(c, 0.0)).mul(&sigma_kappa(
            CQuat::mix(y1.conj(), -y2.conj()),
            kappa,
        ))
    };
    sigma_kappa_real(alpha, kappa).mul(&inner)
}

/// Adjoint counterpart phi*_Omega; zero at t = 0, otherwise a rank-one
/// matrix supported on the P_kappa column.
pub fn phi_omega_big_star(x1: Quat, x2: Quat, kappa: usize) -> EndV {
    if x1.norm() + x2.norm() == 0.0 {
        return EndV::zero(kappa);
    }
    let xi = x1.conj() * x2;
    let t = xi.imag().abs();
    if t <= SINGULAR_EPS {
        return EndV::zero(kappa);
    }
    let alpha = rotation_to_minus_i(xi);
    let y1 = x1 * alpha;
    let y2 = x2 * alpha;
    let norm2 = x1.norm() + x2.norm();
    let c = 2.0f64.powi(2 * kappa as i32) * PI / kappa as f64
        * t.powi(kappa as i32 - 1)
        * (-4.0 * PI * t).exp()
        * (norm2 + 2.0 * t).powi(-(kappa as i32));
    // Column kappa only: image of P_kappa is c sigma(y1 + s y2) P_kappa.
    let s = sigma_kappa(CQuat::mix(y1, y2), kappa);
    let mut inner = EndV::zero(kappa);
    for a in 0..=kappa {
        *inner.at_mut(a, kappa) = s.at(a, kappa) * c;
    }
    // Undo the rotation: phi*(X) = phi*(X alpha) sigma(alpha)^{-1}.
    inner.mul(&sigma_kappa_real(alpha.inverse(), kappa))
}

/// Unit alpha with conj(alpha) xi alpha = Re(xi) - i |Im(xi)|.
fn rotation_to_minus_i(xi: Quat) -> Quat {
    let v = xi.imag();
    let t = v.abs();
    if t < 1e-300 {
        return Quat::ONE;
    }
    let vhat = v.scale(1.0 / t);
    // conj-by-q sends a to b for q = 1 - b a; here a = vhat, b = -i,
    // and the conjugating alpha acts as alpha^{-1} v alpha, so take
    // alpha = conj(q)/|q|.
    let q = Quat::ONE - (-Quat::I) * vhat;
    if q.abs() < 1e-8 {
        // vhat = -i already... then q degenerates only for vhat = i.
        return Quat::J;
    }
    q.conj().normalized()
}

/// c_kappa^G / c_kappa^H = kappa / (4 pi).
pub fn c_ratio(kappa: usize) -> f64 {
    kappa as f64 / (4.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_kappa_closed_matches_display() {
        let kappa = 5;
        let t = 0.7;
        let m = m_kappa_closed(Quat::I.scale(t), kappa);
        let expect = lambda_const(kappa) * t.powi(kappa as i32 - 1) * (-4.0 * PI * t).exp();
        for a in 0..=kappa {
            for b in 0..=kappa {
                let want = if (a, b) == (kappa, kappa) {
                    C64::new(expect, 0.0)
                } else {
                    C64::ZERO
                };
                assert!((m.at(a, b) - want).norm() < 1e-12 * expect);
            }
        }
        // M(0) = 0 and invariance under the real part.
        assert_eq!(m_kappa_closed(Quat::real(3.0), kappa).frobenius(), 0.0);
        let shifted = m_kappa_closed(Quat::I.scale(t) + Quat::real(2.0), kappa);
        assert!(shifted.rel_dev(&m) < 1e-12);
    }

    #[test]
    fn m_kappa_conjugation_covariance() {
        let kappa = 6;
        let xi = Quat::new(0.3, 0.8, -0.5, 0.2);
        let alpha = Quat::new(1.0, 0.7, -0.4, 0.3).normalized();
        let lhs = m_kappa_closed(alpha * xi * alpha.inverse(), kappa);
        let s = sigma_kappa_real(alpha, kappa);
        let rhs = s.mul(&m_kappa_closed(xi, kappa)).mul(&s.inverse());
        assert!(lhs.rel_dev(&rhs) < 1e-10);
    }

    #[test]
    fn spherical_at_identity() {
        let kappa = 5;
        let id = QMat2::identity();
        assert!(omega_spherical(&id, kappa)
            .unwrap()
            .rel_dev(&EndV::identity(kappa))
            < 1e-13);
        assert!(omega_big(&id, kappa)
            .unwrap()
            .rel_dev(&EndV::identity(kappa))
            < 1e-13);
    }

    #[test]
    fn phi_kappa_properties() {
        let kappa = 5;
        let x = Quat::new(0.5, -0.2, 1.0, 0.3);
        let y = Quat::new(-1.0, 0.4, 0.2, 0.8);
        // Anti-homomorphism.
        let lhs = phi_kappa_real(x * y, kappa);
        let rhs = phi_kappa_real(y, kappa).mul(&phi_kappa_real(x, kappa));
        assert!(lhs.rel_dev(&rhs) < 1e-12);
        // Homogeneity a^{-kappa-2}.
        let a = 1.7f64;
        let lhs = phi_kappa_real(x.scale(a), kappa);
        let rhs = phi_kappa_real(x, kappa).scale(C64::new(a.powi(-(kappa as i32) - 2), 0.0));
        assert!(lhs.rel_dev(&rhs) < 1e-12);
        // sigma(conj x) = N^{kappa+1} Phi(x).
        let lhs = sigma_kappa_real(x.conj(), kappa);
        let rhs = phi_kappa_real(x, kappa).scale(C64::new(x.norm().powi(kappa as i32 + 1), 0.0));
        assert!(lhs.rel_dev(&rhs) < 1e-12);
    }

    #[test]
    fn phi_omega_guard() {
        let kappa = 6;
        // tr(conj(x1) x2) <= 0 kills the value.
        let x1 = Quat::ONE;
        let x2 = -Quat::ONE;
        assert_eq!(phi_omega(x1, x2, kappa).frobenius(), 0.0);
        assert_eq!(phi_omega(Quat::ZERO, Quat::ZERO, kappa).frobenius(), 0.0);
        assert_eq!(phi_omega_big(Quat::ZERO, Quat::ZERO, kappa).frobenius(), 0.0);
        assert!(phi_omega(Quat::ONE, Quat::ONE.scale(0.5), kappa).frobenius() > 0.0);
    }

    #[test]
    fn phi_omega_big_rank_one() {
        let kappa = 6;
        let m = phi_omega_big(Quat::ONE, Quat::J.scale(0.5), kappa);
        assert!(m.frobenius() > 0.0);
        // All 2x2 minors vanish.
        let n = kappa + 1;
        let mut max_minor = 0.0f64;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in 0..n {
                    for d in (c + 1)..n {
                        let det = m.at(a, c) * m.at(b, d) - m.at(a, d) * m.at(b, c);
                        max_minor = max_minor.max(det.norm());
                    }
                }
            }
        }
        let scale = m.m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_minor < 1e-10 * scale * scale);
    }

    #[test]
    fn singular_branch_continuity() {
        // Approaching x2 = -x1 i, the regular branch converges to the
        // singular value.
        let kappa = 8;
        let x1 = Quat::new(0.8, 0.1, -0.3, 0.2);
        let x2 = -(x1 * Quat::I);
        let singular = phi_omega_big(x1, x2, kappa);
        let nearby = phi_omega_big(x1, x2 + Quat::J.scale(1e-6), kappa);
        assert!(singular.frobenius() > 0.0);
        assert!(singular.rel_dev(&nearby) < 1e-3);
    }
}
