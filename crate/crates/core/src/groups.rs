//! Local realizations of the quaternion unitary groups H and G,
//! generator constructors, membership predicates for the maximal compact
//! subgroups and the Hecke double cosets T_i, and the explicit coset
//! tables with structural verification (membership, pairwise
//! distinctness and cardinality).
//!
//! Split primes use the 4x4 matrix models
//!   H = { h : th (0 J; -J 0) h = (0 J; -J 0) },
//!   G = Sp_2 = { g : tg (0 1; -1 0) g = (0 1; -1 0) },
//! with U = H cap GL_4(Z_p) and K = G cap GL_4(Z_p). Ramified primes use
//! 2x2 matrices over the division algebra, with
//! K = G cap (O P^{-1}; P O).

use crate::mat::{rank_fp, Mat2, Mat4};
use crate::padic::{p_pow, rat_i, val_p, Rat, Val};
use crate::quat::{enumerate_quotient, QuotientKind, RamifiedQuaternion};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    H,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    SplitH,
    SplitG,
    RamH,
    RamG,
}

impl Model {
    pub fn side(self) -> Side {
        match self {
            Model::SplitH | Model::RamH => Side::H,
            Model::SplitG | Model::RamG => Side::G,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    ModelMismatch,
    InvalidParameter(String),
    UnsupportedPrime(u64),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::ModelMismatch => write!(f, "element does not match the requested model"),
            GroupError::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            GroupError::UnsupportedPrime(p) => write!(f, "unsupported prime {p}"),
        }
    }
}

impl std::error::Error for GroupError {}

/// 2x2 matrix over the ramified division algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamMat2(pub [[RamifiedQuaternion; 2]; 2]);

impl RamMat2 {
    pub fn from_fn(f: impl Fn(usize, usize) -> RamifiedQuaternion) -> Self {
        RamMat2([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn identity(p: u64) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                RamifiedQuaternion::one(p)
            } else {
                RamifiedQuaternion::zero(p)
            }
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| {
            self.0[i][0]
                .mul(&o.0[0][j])
                .add(&self.0[i][1].mul(&o.0[1][j]))
        })
    }

    /// Conjugate transpose under the main involution.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn min_ord(&self) -> Val {
        let mut best: Option<i64> = None;
        for row in &self.0 {
            for x in row {
                if let Val::Fin(v) = x.ord_pi() {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        best.map_or(Val::Inf, Val::Fin)
    }
}

/// An element of a local group in one of the four models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Split { model: Model, p: u64, m: Mat4 },
    Ram { model: Model, p: u64, m: RamMat2 },
}

fn split_form(model: Model) -> Mat4 {
    // (0 J; -J 0) for H, (0 1_2; -1_2 0) for G.
    let j = Mat2::new(rat_i(0), rat_i(1), rat_i(-1), rat_i(0));
    let one = Mat2::identity();
    let z = Mat2::zero();
    match model {
        Model::SplitH => Mat4::from_blocks(&z, &j, &j.scale(&rat_i(-1)), &z),
        Model::SplitG => Mat4::from_blocks(&z, &one, &one.scale(&rat_i(-1)), &z),
        _ => unreachable!("split form of a ramified model"),
    }
}

fn ram_form(p: u64, model: Model) -> RamMat2 {
    // (0 1; -1 0) for H, (0 1; 1 0) for G.
    let one = RamifiedQuaternion::one(p);
    let z = RamifiedQuaternion::zero(p);
    let low = match model {
        Model::RamH => one.neg(),
        Model::RamG => one.clone(),
        _ => unreachable!("ramified form of a split model"),
    };
    RamMat2([[z.clone(), one], [low, z]])
}

impl GroupElement {
    pub fn model(&self) -> Model {
        match self {
            GroupElement::Split { model, .. } | GroupElement::Ram { model, .. } => *model,
        }
    }

    pub fn prime(&self) -> u64 {
        match self {
            GroupElement::Split { p, .. } | GroupElement::Ram { p, .. } => *p,
        }
    }

    pub fn identity(model: Model, p: u64) -> Self {
        match model {
            Model::SplitH | Model::SplitG => GroupElement::Split {
                model,
                p,
                m: Mat4::identity(),
            },
            Model::RamH | Model::RamG => GroupElement::Ram {
                model,
                p,
                m: RamMat2::identity(p),
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (
                GroupElement::Split { model, p, m },
                GroupElement::Split { model: m2, m: n, .. },
            ) => {
                assert_eq!(model, m2, "product across models");
                GroupElement::Split {
                    model: *model,
                    p: *p,
                    m: m.mul(n),
                }
            }
            (GroupElement::Ram { model, p, m }, GroupElement::Ram { model: m2, m: n, .. }) => {
                assert_eq!(model, m2, "product across models");
                GroupElement::Ram {
                    model: *model,
                    p: *p,
                    m: m.mul(n),
                }
            }
            _ => panic!("product across split/ramified models"),
        }
    }

    /// Exact inverse through the invariant form: h^{-1} = S^{-1} th S
    /// (with the main involution applied entrywise at a ramified prime).
    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Split { model, p, m } => {
                let s = split_form(*model);
                // The H-side form squares to the identity, the G-side to -1.
                let s_inv = match model {
                    Model::SplitH => s.clone(),
                    _ => s.scale(&rat_i(-1)),
                };
                GroupElement::Split {
                    model: *model,
                    p: *p,
                    m: s_inv.mul(&m.transpose()).mul(&s),
                }
            }
            GroupElement::Ram { model, p, m } => {
                let s = ram_form(*p, *model);
                let s_inv = match model {
                    Model::RamH => RamMat2([
                        [
                            RamifiedQuaternion::zero(*p),
                            RamifiedQuaternion::one(*p).neg(),
                        ],
                        [RamifiedQuaternion::one(*p), RamifiedQuaternion::zero(*p)],
                    ]),
                    _ => s.clone(),
                };
                GroupElement::Ram {
                    model: *model,
                    p: *p,
                    m: s_inv.mul(&m.conj_transpose()).mul(&s),
                }
            }
        }
    }

    /// Exact check of the defining form invariance.
    pub fn satisfies_form(&self) -> bool {
        match self {
            GroupElement::Split { model, m, .. } => {
                let s = split_form(*model);
                m.transpose().mul(&s).mul(m) == s
            }
            GroupElement::Ram { model, p, m } => {
                let s = ram_form(*p, *model);
                m.conj_transpose().mul(&s).mul(m) == s
            }
        }
    }
}

/// Generator constructors.
pub mod gen {
    use super::*;

    /// n_H(b): (1_2  b 1_2; 0  1_2), split model.
    pub fn n_h(p: u64, b: &Rat) -> GroupElement {
        let one = Mat2::identity();
        let z = Mat2::zero();
        GroupElement::Split {
            model: Model::SplitH,
            p,
            m: Mat4::from_blocks(&one, &one.scale(b), &z, &one),
        }
    }

    /// d_H(A) = (A 0; 0 J^{-1} tA^{-1} J).
    pub fn d_h(p: u64, a: &Mat2) -> GroupElement {
        let j = Mat2::new(rat_i(0), rat_i(1), rat_i(-1), rat_i(0));
        let j_inv = Mat2::new(rat_i(0), rat_i(-1), rat_i(1), rat_i(0));
        let lower = j_inv
            .mul(&a.inverse().expect("d_H of a singular matrix").transpose())
            .mul(&j);
        let z = Mat2::zero();
        GroupElement::Split {
            model: Model::SplitH,
            p,
            m: Mat4::from_blocks(a, &z, &z, &lower),
        }
    }

    /// nu_H(a) = d_H(1 a; 0 1).
    pub fn nu_h(p: u64, a: &Rat) -> GroupElement {
        d_h(p, &Mat2::new(rat_i(1), a.clone(), rat_i(0), rat_i(1)))
    }

    /// n_G(b,c,d): (1_2 S; 0 1_2) with S = (b c; c d) symmetric.
    pub fn n_g(p: u64, b: &Rat, c: &Rat, d: &Rat) -> GroupElement {
        let one = Mat2::identity();
        let z = Mat2::zero();
        let s = Mat2::new(b.clone(), c.clone(), c.clone(), d.clone());
        GroupElement::Split {
            model: Model::SplitG,
            p,
            m: Mat4::from_blocks(&one, &s, &z, &one),
        }
    }

    /// d_G(A) = (A 0; 0 tA^{-1}).
    pub fn d_g(p: u64, a: &Mat2) -> GroupElement {
        let lower = a.inverse().expect("d_G of a singular matrix").transpose();
        let z = Mat2::zero();
        GroupElement::Split {
            model: Model::SplitG,
            p,
            m: Mat4::from_blocks(a, &z, &z, &lower),
        }
    }

    /// nu_G(a) = d_G(1 a; 0 1); its only lower off-pattern entry is -a at (4,3).
    pub fn nu_g(p: u64, a: &Rat) -> GroupElement {
        d_g(p, &Mat2::new(rat_i(1), a.clone(), rat_i(0), rat_i(1)))
    }

    /// Ramified n_H(b), b a scalar.
    pub fn n_h_ram(p: u64, b: &Rat) -> GroupElement {
        let one = RamifiedQuaternion::one(p);
        let z = RamifiedQuaternion::zero(p);
        GroupElement::Ram {
            model: Model::RamH,
            p,
            m: RamMat2([
                [one.clone(), RamifiedQuaternion::from_rat(p, b.clone())],
                [z, one],
            ]),
        }
    }

    /// Ramified d(alpha) = (alpha 0; 0 conj(alpha)^{-1}), on either side.
    pub fn d_ram(p: u64, model: Model, alpha: &RamifiedQuaternion) -> GroupElement {
        let lower = alpha
            .conj()
            .inverse()
            .expect("d of a non-invertible quaternion");
        let z = RamifiedQuaternion::zero(p);
        GroupElement::Ram {
            model,
            p,
            m: RamMat2([[alpha.clone(), z.clone()], [z, lower]]),
        }
    }

    /// d_n = d(Pi^n).
    pub fn d_pi_pow(p: u64, model: Model, n: i64) -> GroupElement {
        let pi = RamifiedQuaternion::gen_pi(p);
        let mut alpha = RamifiedQuaternion::one(p);
        for _ in 0..n.unsigned_abs() {
            alpha = alpha.mul(&pi);
        }
        if n < 0 {
            alpha = alpha.inverse().unwrap();
        }
        d_ram(p, model, &alpha)
    }

    /// Ramified n_G(beta) for trace-zero beta.
    pub fn n_g_ram(p: u64, beta: &RamifiedQuaternion) -> Result<GroupElement, GroupError> {
        if !beta.is_trace_zero() {
            return Err(GroupError::InvalidParameter(
                "n_G parameter must be trace zero".into(),
            ));
        }
        let one = RamifiedQuaternion::one(p);
        let z = RamifiedQuaternion::zero(p);
        Ok(GroupElement::Ram {
            model: Model::RamG,
            p,
            m: RamMat2([[one.clone(), beta.clone()], [z, one]]),
        })
    }
}

/// Sets a local element can be tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetLabel {
    /// Maximal compact of H.
    U,
    /// Maximal compact of G.
    K,
    /// Double coset of F_p-rank i on side H (U d_1 U when ramified).
    TH(u8),
    /// Double coset on side G.
    TG(u8),
}

/// Exact membership predicate.
///
/// Split T_i is "p g integral and rank_{F_p}(p g) = i". Ramified T_1 is
/// characterized by the minimal entry ord_Pi being -1, after moving to
/// GL_2(O)-stable coordinates on the G side.
pub fn membership(g: &GroupElement, set: SetLabel) -> Result<bool, GroupError> {
    let p = g.prime();
    match (g, set) {
        (GroupElement::Split { model: Model::SplitH, m, .. }, SetLabel::U)
        | (GroupElement::Split { model: Model::SplitG, m, .. }, SetLabel::K) => {
            Ok(m.is_integral(p) && g.satisfies_form())
        }
        (GroupElement::Split { model: Model::SplitH, m, .. }, SetLabel::TH(i))
        | (GroupElement::Split { model: Model::SplitG, m, .. }, SetLabel::TG(i)) => {
            if !g.satisfies_form() {
                return Ok(false);
            }
            let pg = m.scale(&rat_i(p as i64));
            if !pg.is_integral(p) {
                return Ok(false);
            }
            Ok(rank_fp(&pg, p) == i as usize)
        }
        (GroupElement::Ram { model: Model::RamH, m, .. }, SetLabel::U) => {
            Ok(g.satisfies_form() && m.0.iter().flatten().all(|x| x.is_integral()))
        }
        (GroupElement::Ram { model: Model::RamG, m, .. }, SetLabel::K) => {
            let blocks_ok = m.0[0][0].ord_pi().ge(0)
                && m.0[0][1].ord_pi().ge(-1)
                && m.0[1][0].ord_pi().ge(1)
                && m.0[1][1].ord_pi().ge(0);
            Ok(g.satisfies_form() && blocks_ok)
        }
        (GroupElement::Ram { model: Model::RamH, m, .. }, SetLabel::TH(1)) => {
            Ok(g.satisfies_form() && m.min_ord() == Val::Fin(-1))
        }
        (GroupElement::Ram { model: Model::RamG, m, .. }, SetLabel::TG(1)) => {
            let pi = RamifiedQuaternion::gen_pi(p);
            let pi_inv = pi.inverse().unwrap();
            let dm = RamMat2::from_fn(|i, j| {
                let mut x = m.0[i][j].clone();
                if i == 1 {
                    x = pi_inv.mul(&x);
                }
                if j == 1 {
                    x = x.mul(&pi);
                }
                x
            });
            Ok(g.satisfies_form() && dm.min_ord() == Val::Fin(-1))
        }
        _ => Err(GroupError::ModelMismatch),
    }
}

/// Labels for the explicit Hecke coset tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableLabel {
    T1H,
    T2H,
    T1G,
    T2G,
    T1HRam,
    T1GRam,
}

impl TableLabel {
    pub fn side(self) -> Side {
        match self {
            TableLabel::T1H | TableLabel::T2H | TableLabel::T1HRam => Side::H,
            TableLabel::T1G | TableLabel::T2G | TableLabel::T1GRam => Side::G,
        }
    }

    pub fn is_ramified(self) -> bool {
        matches!(self, TableLabel::T1HRam | TableLabel::T1GRam)
    }

    /// Number of cosets read off the block structure of the lemma.
    pub fn expected_size(self, p: u64) -> usize {
        let p = p as usize;
        match self {
            TableLabel::T1H => p * p + 2 * p + 1,
            TableLabel::T2H => 2 * p * p + 2 * p,
            TableLabel::T1G => p.pow(4) + p.pow(3) + p.pow(2) + p,
            TableLabel::T2G => p.pow(6) + p.pow(5) + p.pow(4) + p.pow(3),
            TableLabel::T1HRam => p + 1,
            TableLabel::T1GRam => p.pow(3) + p,
        }
    }

    pub fn membership_set(self) -> SetLabel {
        match self {
            TableLabel::T1H => SetLabel::TH(1),
            TableLabel::T2H => SetLabel::TH(2),
            TableLabel::T1G => SetLabel::TG(1),
            TableLabel::T2G => SetLabel::TG(2),
            TableLabel::T1HRam => SetLabel::TH(1),
            TableLabel::T1GRam => SetLabel::TG(1),
        }
    }
}

/// The structured word behind a coset representative; the realized
/// element is the product of the word in the displayed order.
#[derive(Clone, Debug)]
pub enum RepWord {
    /// h = n_H(b) d_H(levi); any nu part is folded into the Levi matrix.
    SplitH { b: Rat, levi: Mat2 },
    /// g = n_G(b,c,d) d_G(levi).
    SplitG { n: (Rat, Rat, Rat), levi: Mat2 },
    /// h = n_H(b) d_H(Pi^n).
    RamH { b: Rat, n: i64 },
    /// g = n_G(beta) d_G(Pi^n).
    RamG { beta: RamifiedQuaternion, n: i64 },
}

/// One coset representative: its word (carrying the Iwasawa data used by
/// the Satake character) and the realized group element.
#[derive(Clone, Debug)]
pub struct CosetRep {
    pub word: RepWord,
    pub elt: GroupElement,
}

impl CosetRep {
    /// p-exponents (e1, e2) of the Levi diagonal, split models.
    pub fn levi_exponents(&self) -> Option<(i64, i64)> {
        match &self.word {
            RepWord::SplitH { levi, .. } | RepWord::SplitG { levi, .. } => {
                let e1 = val_p(levi.at(0, 0), self.elt.prime()).finite()?;
                let e2 = val_p(levi.at(1, 1), self.elt.prime()).finite()?;
                Some((e1, e2))
            }
            _ => None,
        }
    }

    /// Pi-exponent of the Levi part, ramified models.
    pub fn levi_pi_exponent(&self) -> Option<i64> {
        match &self.word {
            RepWord::RamH { n, .. } | RepWord::RamG { n, .. } => Some(*n),
            _ => None,
        }
    }

    fn rebuild(&self, p: u64) -> GroupElement {
        match &self.word {
            RepWord::SplitH { b, levi } => gen::n_h(p, b).mul(&gen::d_h(p, levi)),
            RepWord::SplitG { n, levi } => {
                gen::n_g(p, &n.0, &n.1, &n.2).mul(&gen::d_g(p, levi))
            }
            RepWord::RamH { b, n } => {
                gen::n_h_ram(p, b).mul(&gen::d_pi_pow(p, Model::RamH, *n))
            }
            RepWord::RamG { beta, n } => gen::n_g_ram(p, beta)
                .expect("table betas are trace zero")
                .mul(&gen::d_pi_pow(p, Model::RamG, *n)),
        }
    }
}

/// An explicit left-coset table h U (resp. g K) for one double coset.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub label: TableLabel,
    pub prime: u64,
    pub reps: Vec<CosetRep>,
}

fn units(p: u64) -> Vec<i64> {
    (1..p as i64).collect()
}

fn residues(p: u64, k: u32) -> Vec<i64> {
    (0..p.pow(k) as i64).collect()
}

/// (b,c,d) in (Z/p)^3 with rank of (b c; c d) over F_p equal to i.
pub fn lambda_set(p: u64, i: u8) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for b in 0..p as i64 {
        for c in 0..p as i64 {
            for d in 0..p as i64 {
                let det = (b * d - c * c).rem_euclid(p as i64);
                let rank = if (b | c | d) == 0 {
                    0
                } else if det == 0 {
                    1
                } else {
                    2
                };
                if rank == i as i64 {
                    out.push((b, c, d));
                }
            }
        }
    }
    out
}

/// The explicit representative list of one decomposition lemma, with
/// residue systems expanded to canonical lifts.
pub fn coset_table(label: TableLabel, p: u64) -> Result<CosetTable, GroupError> {
    if label.is_ramified() && p % 2 == 0 {
        return Err(GroupError::UnsupportedPrime(p));
    }
    let upper = |a: i64, e1: i64, e2: i64| -> Mat2 {
        Mat2::new(rat_i(1), rat_i(a), rat_i(0), rat_i(1))
            .mul(&Mat2::diag(p_pow(p, e1), p_pow(p, e2)))
    };
    let mut reps: Vec<CosetRep> = Vec::new();
    match label {
        TableLabel::T1H | TableLabel::T2H => {
            let mut push_h = |b: Rat, levi: Mat2| {
                let elt = gen::n_h(p, &b).mul(&gen::d_h(p, &levi));
                reps.push(CosetRep {
                    word: RepWord::SplitH { b, levi },
                    elt,
                });
            };
            if label == TableLabel::T1H {
                for a in residues(p, 1) {
                    for b in residues(p, 1) {
                        push_h(rat_i(b), upper(a, 1, 0));
                    }
                }
                for b in residues(p, 1) {
                    push_h(rat_i(b), upper(0, 0, 1));
                }
                for a in residues(p, 1) {
                    push_h(rat_i(0), upper(a, 0, -1));
                }
                push_h(rat_i(0), upper(0, -1, 0));
            } else {
                for a in residues(p, 2) {
                    push_h(rat_i(0), upper(a, 1, -1));
                }
                push_h(rat_i(0), upper(0, -1, 1));
                for b in residues(p, 2) {
                    push_h(rat_i(b), upper(0, 1, 1));
                }
                push_h(rat_i(0), upper(0, -1, -1));
                for a in units(p) {
                    let levi =
                        Mat2::new(rat_i(1), rat_i(a) * p_pow(p, -1), rat_i(0), rat_i(1));
                    push_h(rat_i(0), levi);
                }
                for b in units(p) {
                    push_h(rat_i(b) * p_pow(p, -1), Mat2::identity());
                }
            }
        }
        TableLabel::T1G | TableLabel::T2G => {
            let mut push_g = |n: (Rat, Rat, Rat), levi: Mat2| {
                let elt = gen::n_g(p, &n.0, &n.1, &n.2).mul(&gen::d_g(p, &levi));
                reps.push(CosetRep {
                    word: RepWord::SplitG { n, levi },
                    elt,
                });
            };
            let r = rat_i;
            if label == TableLabel::T1G {
                for a in residues(p, 1) {
                    for c in residues(p, 1) {
                        for b in residues(p, 2) {
                            push_g((r(b), r(c), r(0)), upper(a, 1, 0));
                        }
                    }
                }
                for c in residues(p, 1) {
                    for d in residues(p, 2) {
                        push_g((r(0), r(c), r(d)), upper(0, 0, 1));
                    }
                }
                for (b, c, d) in lambda_set(p, 1) {
                    push_g(
                        (
                            r(b) * p_pow(p, -1),
                            r(c) * p_pow(p, -1),
                            r(d) * p_pow(p, -1),
                        ),
                        Mat2::identity(),
                    );
                }
                for a in residues(p, 1) {
                    push_g((r(0), r(0), r(0)), upper(a, 0, -1));
                }
                push_g((r(0), r(0), r(0)), upper(0, -1, 0));
            } else {
                for b in residues(p, 2) {
                    for c in residues(p, 2) {
                        for d in residues(p, 2) {
                            push_g((r(b), r(c), r(d)), upper(0, 1, 1));
                        }
                    }
                }
                for a in residues(p, 2) {
                    for b in residues(p, 2) {
                        push_g((r(b), r(0), r(0)), upper(a, 1, -1));
                    }
                }
                for d in residues(p, 2) {
                    push_g((r(0), r(0), r(d)), upper(0, -1, 1));
                }
                push_g((r(0), r(0), r(0)), upper(0, -1, -1));
                for a in residues(p, 1) {
                    for m in residues(p, 1) {
                        for d in units(p) {
                            for l in residues(p, 2) {
                                let b = r(a * a * d) * p_pow(p, -1) + r(l);
                                let c = r(a * d) * p_pow(p, -1) + r(m);
                                let dd = r(d) * p_pow(p, -1);
                                push_g((b, c, dd), upper(a, 1, 0));
                            }
                        }
                    }
                }
                for b in units(p) {
                    for c in residues(p, 1) {
                        for d in residues(p, 2) {
                            push_g((r(b) * p_pow(p, -1), r(c), r(d)), upper(0, 0, 1));
                        }
                    }
                }
                for a in residues(p, 1) {
                    for b in units(p) {
                        push_g((r(b) * p_pow(p, -1), r(0), r(0)), upper(a, 0, -1));
                    }
                }
                for d in units(p) {
                    push_g((r(0), r(0), r(d) * p_pow(p, -1)), upper(0, -1, 0));
                }
                for a in units(p) {
                    for c in residues(p, 1) {
                        for m in residues(p, 1) {
                            let b = r(a * c + p as i64 * m) * p_pow(p, -2);
                            let levi =
                                Mat2::new(rat_i(1), r(a) * p_pow(p, -1), rat_i(0), rat_i(1));
                            push_g((b, r(c) * p_pow(p, -1), r(0)), levi);
                        }
                    }
                }
                for (b, c, d) in lambda_set(p, 2) {
                    push_g(
                        (
                            r(b) * p_pow(p, -1),
                            r(c) * p_pow(p, -1),
                            r(d) * p_pow(p, -1),
                        ),
                        Mat2::identity(),
                    );
                }
            }
        }
        TableLabel::T1HRam => {
            for b in residues(p, 1) {
                let b = rat_i(b);
                let elt = gen::n_h_ram(p, &b).mul(&gen::d_pi_pow(p, Model::RamH, 1));
                reps.push(CosetRep {
                    word: RepWord::RamH { b, n: 1 },
                    elt,
                });
            }
            let elt = gen::d_pi_pow(p, Model::RamH, -1);
            reps.push(CosetRep {
                word: RepWord::RamH {
                    b: Rat::zero(),
                    n: -1,
                },
                elt,
            });
        }
        TableLabel::T1GRam => {
            for beta in enumerate_quotient(p, QuotientKind::XnModPiXn(-1)).unwrap() {
                let elt = gen::n_g_ram(p, &beta)
                    .unwrap()
                    .mul(&gen::d_pi_pow(p, Model::RamG, 1));
                reps.push(CosetRep {
                    word: RepWord::RamG { beta, n: 1 },
                    elt,
                });
            }
            for beta in enumerate_quotient(p, QuotientKind::Xn0ModXm(-2, -1)).unwrap() {
                let elt = gen::n_g_ram(p, &beta).unwrap();
                reps.push(CosetRep {
                    word: RepWord::RamG { beta, n: 0 },
                    elt,
                });
            }
            let elt = gen::d_pi_pow(p, Model::RamG, -1);
            reps.push(CosetRep {
                word: RepWord::RamG {
                    beta: RamifiedQuaternion::zero(p),
                    n: -1,
                },
                elt,
            });
        }
    }
    Ok(CosetTable {
        label,
        prime: p,
        reps,
    })
}

/// Outcome of the structural verification of one table.
#[derive(Clone, Debug)]
pub struct TableReport {
    pub label: TableLabel,
    pub prime: u64,
    pub size: usize,
    pub expected_size: usize,
    pub membership_failures: Vec<usize>,
    pub word_failures: Vec<usize>,
    pub distinctness_failures: Vec<(usize, usize)>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.size == self.expected_size
            && self.membership_failures.is_empty()
            && self.word_failures.is_empty()
            && self.distinctness_failures.is_empty()
    }
}

/// Check that every representative lies in the double coset, that the
/// realized element equals the product of its word, and that the listed
/// cosets h U (resp. g K) are pairwise distinct, i.e. h_j^{-1} h_i is
/// never in the compact subgroup.
pub fn verify_coset_table(t: &CosetTable) -> TableReport {
    let p = t.prime;
    let set = t.label.membership_set();

    let mut membership_failures = Vec::new();
    let mut word_failures = Vec::new();
    for (i, rep) in t.reps.iter().enumerate() {
        if !membership(&rep.elt, set).unwrap_or(false) {
            membership_failures.push(i);
        }
        if rep.rebuild(p) != rep.elt {
            word_failures.push(i);
        }
    }

    // Pairwise distinctness: h_j^{-1} h_i is a group element by
    // construction, so membership in the compact reduces to the
    // integrality conditions; test entries lazily and bail early.
    let inverses: Vec<GroupElement> = t.reps.iter().map(|r| r.elt.inverse()).collect();
    let in_compact = |inv_j: &GroupElement, h_i: &GroupElement| -> bool {
        match (inv_j, h_i) {
            (GroupElement::Split { m: a, .. }, GroupElement::Split { m: b, .. }) => {
                for r in 0..4 {
                    for c in 0..4 {
                        let e: Rat = (0..4).map(|k| a.at(r, k) * b.at(k, c)).sum();
                        if !crate::padic::sigma(&e, p) {
                            return false;
                        }
                    }
                }
                true
            }
            (GroupElement::Ram { m: a, model, .. }, GroupElement::Ram { m: b, .. }) => {
                for r in 0..2 {
                    for c in 0..2 {
                        let e = a.0[r][0].mul(&b.0[0][c]).add(&a.0[r][1].mul(&b.0[1][c]));
                        let bound = match (model, r, c) {
                            (Model::RamG, 0, 1) => -1,
                            (Model::RamG, 1, 0) => 1,
                            _ => 0,
                        };
                        if !e.ord_pi().ge(bound) {
                            return false;
                        }
                    }
                }
                true
            }
            _ => false,
        }
    };
    let mut distinctness_failures = Vec::new();
    for i in 0..t.reps.len() {
        for (j, inv_j) in inverses.iter().enumerate().skip(i + 1) {
            if in_compact(inv_j, &t.reps[i].elt) {
                distinctness_failures.push((i, j));
            }
        }
    }

    TableReport {
        label: t.label,
        prime: p,
        size: t.reps.len(),
        expected_size: t.label.expected_size(p),
        membership_failures,
        word_failures,
        distinctness_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    #[test]
    fn generator_forms() {
        let p = 3;
        for g in [
            gen::n_h(p, &rat_i(2)),
            gen::d_h(p, &Mat2::diag(rat_i(3), rat_i(1))),
            gen::nu_h(p, &rat(1, 3)),
            gen::n_g(p, &rat_i(1), &rat_i(2), &rat_i(4)),
            gen::d_g(p, &Mat2::new(rat_i(3), rat_i(1), rat_i(0), rat(1, 3))),
            gen::nu_g(p, &rat_i(2)),
        ] {
            assert!(g.satisfies_form(), "{g:?}");
            assert!(g.mul(&g.inverse()) == GroupElement::identity(g.model(), p));
        }
        for g in [
            gen::n_h_ram(p, &rat(1, 3)),
            gen::d_pi_pow(p, Model::RamH, 2),
            gen::d_pi_pow(p, Model::RamG, -1),
            gen::n_g_ram(p, &RamifiedQuaternion::gen_u(p)).unwrap(),
        ] {
            assert!(g.satisfies_form(), "{g:?}");
            assert!(g.mul(&g.inverse()) == GroupElement::identity(g.model(), p));
        }
    }

    #[test]
    fn unipotent_group_law() {
        let p = 5;
        let lhs = gen::n_h(p, &rat_i(2)).mul(&gen::n_h(p, &rat_i(7)));
        assert_eq!(lhs, gen::n_h(p, &rat_i(9)));
    }

    #[test]
    fn nu_g_matrix_shape() {
        let g = gen::nu_g(7, &rat_i(2));
        let GroupElement::Split { m, .. } = &g else { panic!() };
        assert_eq!(m.at(3, 2), &rat_i(-2));
        assert_eq!(m.at(0, 1), &rat_i(2));
    }

    #[test]
    fn n_g_ram_rejects_nonzero_trace() {
        let bad = RamifiedQuaternion::one(3);
        assert!(matches!(
            gen::n_g_ram(3, &bad),
            Err(GroupError::InvalidParameter(_))
        ));
    }

    #[test]
    fn compact_membership() {
        let p = 3;
        assert!(membership(&GroupElement::identity(Model::SplitH, p), SetLabel::U).unwrap());
        assert!(membership(&GroupElement::identity(Model::SplitG, p), SetLabel::K).unwrap());
        assert!(
            !membership(&gen::d_g(p, &Mat2::diag(rat_i(3), rat_i(1))), SetLabel::K).unwrap()
        );
        assert!(membership(&GroupElement::identity(Model::RamH, p), SetLabel::U).unwrap());
        assert!(membership(&GroupElement::identity(Model::RamG, p), SetLabel::K).unwrap());
        assert!(matches!(
            membership(&GroupElement::identity(Model::SplitH, p), SetLabel::K),
            Err(GroupError::ModelMismatch)
        ));
    }

    #[test]
    fn rank_separates_double_cosets() {
        let p = 3;
        let g1 = gen::d_g(p, &Mat2::diag(rat_i(3), rat_i(1)));
        assert!(membership(&g1, SetLabel::TG(1)).unwrap());
        assert!(!membership(&g1, SetLabel::TG(2)).unwrap());
        // d_G(diag(p,p)): p*g has F_p-rank 2, so it lies in T_2^G.
        let g2 = gen::d_g(p, &Mat2::diag(rat_i(3), rat_i(3)));
        assert!(!membership(&g2, SetLabel::TG(1)).unwrap());
        assert!(membership(&g2, SetLabel::TG(2)).unwrap());
    }

    #[test]
    fn table_sizes_p3() {
        assert_eq!(coset_table(TableLabel::T1H, 3).unwrap().reps.len(), 16);
        assert_eq!(coset_table(TableLabel::T2H, 3).unwrap().reps.len(), 24);
        assert_eq!(coset_table(TableLabel::T1G, 3).unwrap().reps.len(), 120);
        assert_eq!(coset_table(TableLabel::T2G, 3).unwrap().reps.len(), 1080);
        assert_eq!(coset_table(TableLabel::T1HRam, 3).unwrap().reps.len(), 4);
        assert_eq!(coset_table(TableLabel::T1GRam, 3).unwrap().reps.len(), 30);
        assert!(matches!(
            coset_table(TableLabel::T1GRam, 2),
            Err(GroupError::UnsupportedPrime(2))
        ));
    }

    #[test]
    fn verify_small_tables() {
        for p in [2u64, 3] {
            for label in [TableLabel::T1H, TableLabel::T2H, TableLabel::T1G] {
                let rep = verify_coset_table(&coset_table(label, p).unwrap());
                assert!(rep.passed(), "{label:?} at p={p}: {rep:?}");
            }
        }
        for label in [TableLabel::T1HRam, TableLabel::T1GRam] {
            let rep = verify_coset_table(&coset_table(label, 3).unwrap());
            assert!(rep.passed(), "{label:?}: {rep:?}");
        }
    }

    #[test]
    fn adversarial_duplicate_is_caught() {
        let mut t = coset_table(TableLabel::T1H, 3).unwrap();
        let dup = t.reps[0].clone();
        t.reps[1] = dup;
        let rep = verify_coset_table(&t);
        assert!(!rep.passed());
        assert!(rep.distinctness_failures.contains(&(0, 1)));
    }

    #[test]
    fn left_translation_by_compact_preserves_membership() {
        let p = 3;
        let t = coset_table(TableLabel::T1G, p).unwrap();
        let samples = [
            gen::n_g(p, &rat_i(1), &rat_i(2), &rat_i(1)),
            gen::d_g(p, &Mat2::new(rat_i(1), rat_i(2), rat_i(0), rat_i(1))),
            gen::d_g(p, &Mat2::new(rat_i(2), rat_i(0), rat_i(0), rat_i(2))),
        ];
        for u in &samples {
            assert!(membership(u, SetLabel::K).unwrap());
            for rep in t.reps.iter().step_by(17) {
                let moved = u.mul(&rep.elt);
                assert!(membership(&moved, SetLabel::TG(1)).unwrap());
            }
        }
    }

    #[test]
    fn form_invariance_under_words() {
        let p = 5;
        let gens = [
            gen::n_h(p, &rat(2, 5)),
            gen::nu_h(p, &rat_i(3)),
            gen::d_h(p, &Mat2::diag(rat_i(5), rat(1, 5))),
            gen::d_h(p, &Mat2::new(rat_i(1), rat_i(4), rat_i(0), rat_i(1))),
        ];
        let mut acc = GroupElement::identity(Model::SplitH, p);
        for (i, g) in gens.iter().cycle().take(12).enumerate() {
            acc = if i % 3 == 0 {
                acc.mul(&g.inverse())
            } else {
                acc.mul(g)
            };
            assert!(acc.satisfies_form());
        }
    }

    #[test]
    fn ramified_table_membership_invariant() {
        let p = 5;
        let t = coset_table(TableLabel::T1GRam, p).unwrap();
        assert_eq!(t.reps.len(), 130);
        for rep in &t.reps {
            assert!(membership(&rep.elt, SetLabel::TG(1)).unwrap());
        }
    }
}
