//! Satake transforms over the coset tables, the Hecke-algebra
//! homomorphism upsilon carried by the commutation relations, and local
//! standard L-factors.
//!
//! Unramified eigenvalues are Laurent polynomials in the Satake
//! variables X1 = chi_1(p), X2 = chi_2(p); ramified ones live in one
//! variable T = chi(Pi) with coefficients in Q[sqrt(p)], kept exact as
//! pairs (a, b) = a + b sqrt(p).

use crate::groups::{CosetTable, Side, TableLabel};
use crate::padic::{p_pow, rat_i, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in (X1, X2) over Q.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent2 {
    terms: BTreeMap<(i64, i64), Rat>,
}

impl Laurent2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(e1: i64, e2: i64, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((e1, e2), c);
        }
        Laurent2 { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let e = terms.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Laurent2 { terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<(i64, i64), Rat> = BTreeMap::new();
        for ((a1, a2), u) in &self.terms {
            for ((b1, b2), v) in &o.terms {
                let k = (a1 + b1, a2 + b2);
                let e = terms.entry(k).or_insert_with(Rat::zero);
                *e += u * v;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Laurent2 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e1: i64, e2: i64) -> Rat {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Apply a map on exponents (Weyl-group action).
    pub fn map_exponents(&self, f: impl Fn(i64, i64) -> (i64, i64)) -> Self {
        let mut out = Self::zero();
        for ((e1, e2), c) in &self.terms {
            let (f1, f2) = f(*e1, *e2);
            out = out.add(&Self::monomial(f1, f2, c.clone()));
        }
        out
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((e1, e2), c)| format!("{c} X1^{e1} X2^{e2}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact element a + b sqrt(p) of Q[sqrt(p)].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtP {
    pub p: u64,
    pub a: Rat,
    pub b: Rat,
}

impl SqrtP {
    pub fn zero(p: u64) -> Self {
        SqrtP {
            p,
            a: Rat::zero(),
            b: Rat::zero(),
        }
    }

    pub fn rational(p: u64, a: Rat) -> Self {
        SqrtP {
            p,
            a,
            b: Rat::zero(),
        }
    }

    pub fn sqrt_p(p: u64) -> Self {
        SqrtP {
            p,
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    /// p^(k/2) for an integer k of either parity and sign.
    pub fn half_power(p: u64, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::rational(p, p_pow(p, k / 2))
        } else {
            // p^(k/2) = p^((k-1)/2) sqrt(p)
            SqrtP {
                p,
                a: Rat::zero(),
                b: p_pow(p, (k - 1) / 2),
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        SqrtP {
            p: self.p,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let pr = rat_i(self.p as i64);
        SqrtP {
            p: self.p,
            a: &self.a * &o.a + &pr * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn neg(&self) -> Self {
        SqrtP {
            p: self.p,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for SqrtP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} sqrt({})", self.a, self.b, self.p)
    }
}

/// Laurent polynomial in T = chi(Pi) with Q[sqrt(p)] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSqrt {
    pub p: u64,
    terms: BTreeMap<i64, SqrtP>,
}

impl LaurentSqrt {
    pub fn zero(p: u64) -> Self {
        LaurentSqrt {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(p: u64, e: i64, c: SqrtP) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentSqrt { p, terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let e = terms
                .entry(*k)
                .or_insert_with(|| SqrtP::zero(self.p));
            *e = e.add(v);
            if e.is_zero() {
                terms.remove(k);
            }
        }
        LaurentSqrt { p: self.p, terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.p);
        for (a, u) in &self.terms {
            for (b, v) in &o.terms {
                out = out.add(&Self::monomial(self.p, a + b, u.mul(v)));
            }
        }
        out
    }

    pub fn scale(&self, c: &SqrtP) -> Self {
        let mut out = Self::zero(self.p);
        for (e, u) in &self.terms {
            out = out.add(&Self::monomial(self.p, *e, u.mul(c)));
        }
        out
    }

    pub fn coeff(&self, e: i64) -> SqrtP {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| SqrtP::zero(self.p))
    }

    pub fn map_exponents(&self, f: impl Fn(i64) -> i64) -> Self {
        let mut out = Self::zero(self.p);
        for (e, c) in &self.terms {
            out = out.add(&Self::monomial(self.p, f(*e), c.clone()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Eigenvalue of a single coset table under the Satake character.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Unram(Laurent2),
    Ram(LaurentSqrt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatakeError {
    MissingLeviData,
    UnsupportedLabel(String),
}

impl fmt::Display for SatakeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatakeError::MissingLeviData => write!(f, "representative lacks Levi data"),
            SatakeError::UnsupportedLabel(s) => write!(f, "unsupported Hecke label {s}"),
        }
    }
}

impl std::error::Error for SatakeError {}

/// lambda(T) = sum over representatives of the unramified or ramified
/// Satake character evaluated on the Levi data, with vol(U) = vol(K) = 1.
pub fn satake_eigenvalue(table: &CosetTable) -> Result<Eigenvalue, SatakeError> {
    let p = table.prime;
    if table.label.is_ramified() {
        let mut acc = LaurentSqrt::zero(p);
        for rep in &table.reps {
            let n = rep.levi_pi_exponent().ok_or(SatakeError::MissingLeviData)?;
            // |N(Pi^n)|^(1/2) on side H, |N(Pi^n)|^(3/2) on side G.
            let half_powers = match table.label.side() {
                Side::H => -n,
                Side::G => -3 * n,
            };
            let c = SqrtP::half_power(p, half_powers);
            acc = acc.add(&LaurentSqrt::monomial(p, n, c));
        }
        Ok(Eigenvalue::Ram(acc))
    } else {
        let mut acc = Laurent2::zero();
        for rep in &table.reps {
            let (e1, e2) = rep.levi_exponents().ok_or(SatakeError::MissingLeviData)?;
            // |a1|_p on side H, |a1|^2 |a2|_p on side G.
            let weight = match table.label.side() {
                Side::H => p_pow(p, -e1),
                Side::G => p_pow(p, -2 * e1 - e2),
            };
            acc = acc.add(&Laurent2::monomial(e1, e2, weight));
        }
        Ok(Eigenvalue::Unram(acc))
    }
}

/// e1-type symmetric sum X1 + X2 + X1^{-1} + X2^{-1}.
pub fn sym_e1() -> Laurent2 {
    [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .fold(Laurent2::zero(), |acc, (a, b)| {
            acc.add(&Laurent2::monomial(*a, *b, Rat::one()))
        })
}

/// e2-type symmetric sum over X1^(+-1) X2^(+-1).
pub fn sym_e2() -> Laurent2 {
    [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .fold(Laurent2::zero(), |acc, (a, b)| {
            acc.add(&Laurent2::monomial(*a, *b, Rat::one()))
        })
}

/// The closed eigenvalue displays, used as the expected values.
pub fn expected_eigenvalue(label: TableLabel, p: u64) -> Eigenvalue {
    let pr = rat_i(p as i64);
    match label {
        TableLabel::T1H => Eigenvalue::Unram(sym_e1().scale(&pr)),
        TableLabel::T2H => Eigenvalue::Unram(
            sym_e2()
                .scale(&pr)
                .add(&Laurent2::constant(rat_i(2 * p as i64 - 2))),
        ),
        TableLabel::T1G => Eigenvalue::Unram(
            sym_e1()
                .scale(&(&pr * &pr))
                .add(&Laurent2::constant(&pr * &pr - Rat::one())),
        ),
        TableLabel::T2G => Eigenvalue::Unram(
            sym_e2()
                .scale(&p_pow(p, 3))
                .add(&sym_e1().scale(&(&pr * &pr * (&pr - Rat::one()))))
                .add(&Laurent2::constant(
                    rat_i(2) * p_pow(p, 3) - rat_i(2) * &pr * &pr,
                )),
        ),
        TableLabel::T1HRam => {
            // sqrt(p) (T + T^{-1})
            let c = SqrtP::sqrt_p(p);
            LaurentSqrt::monomial(p, 1, c.clone())
                .add(&LaurentSqrt::monomial(p, -1, c))
                .pipe_ram()
        }
        TableLabel::T1GRam => {
            // p^(3/2) (T + T^{-1}) + (p - 1)
            let c = SqrtP::half_power(p, 3);
            LaurentSqrt::monomial(p, 1, c.clone())
                .add(&LaurentSqrt::monomial(p, -1, c))
                .add(&LaurentSqrt::monomial(
                    p,
                    0,
                    SqrtP::rational(p, &pr - Rat::one()),
                ))
                .pipe_ram()
        }
    }
}

impl LaurentSqrt {
    fn pipe_ram(self) -> Eigenvalue {
        Eigenvalue::Ram(self)
    }
}

/// Formal Q-linear combination of Hecke generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HeckeLabel {
    /// Characteristic function of the compact subgroup itself.
    Unit(Side),
    /// T_i on the given side (unramified), or T_1 when ramified.
    Coset(TableLabel),
}

#[derive(Clone, Debug, Default)]
pub struct HeckeElement {
    pub terms: BTreeMap<HeckeLabel, Rat>,
}

impl HeckeElement {
    pub fn generator(label: TableLabel) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(HeckeLabel::Coset(label), Rat::one());
        HeckeElement { terms }
    }

    pub fn push(&mut self, label: HeckeLabel, c: Rat) {
        let e = self.terms.entry(label).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&label);
        }
    }
}

/// The homomorphism upsilon transporting G-side Hecke operators to the
/// H side through the theta kernel, at a fixed prime.
pub fn upsilon_image_at(elt: &HeckeElement, p: u64) -> Result<HeckeElement, SatakeError> {
    let pr = rat_i(p as i64);
    let mut out = HeckeElement::default();
    for (label, c) in &elt.terms {
        match label {
            HeckeLabel::Unit(Side::G) => out.push(HeckeLabel::Unit(Side::H), c.clone()),
            HeckeLabel::Coset(TableLabel::T1G) => {
                out.push(HeckeLabel::Coset(TableLabel::T1H), c * &pr);
                out.push(HeckeLabel::Unit(Side::H), c * (&pr * &pr - Rat::one()));
            }
            HeckeLabel::Coset(TableLabel::T2G) => {
                out.push(
                    HeckeLabel::Coset(TableLabel::T1H),
                    c * (&pr * &pr - &pr),
                );
                out.push(HeckeLabel::Coset(TableLabel::T2H), c * &pr * &pr);
            }
            HeckeLabel::Coset(TableLabel::T1GRam) => {
                out.push(HeckeLabel::Coset(TableLabel::T1HRam), c * &pr);
                out.push(HeckeLabel::Unit(Side::H), c * (&pr - Rat::one()));
            }
            other => {
                return Err(SatakeError::UnsupportedLabel(format!("{other:?}")));
            }
        }
    }
    Ok(out)
}

/// Eigenvalue of a Hecke element on the H side, unramified.
pub fn h_eigenvalue_unram(elt: &HeckeElement, p: u64) -> Result<Laurent2, SatakeError> {
    let mut acc = Laurent2::zero();
    for (label, c) in &elt.terms {
        let contrib = match label {
            HeckeLabel::Unit(Side::H) => Laurent2::constant(Rat::one()),
            HeckeLabel::Coset(l @ (TableLabel::T1H | TableLabel::T2H)) => {
                match expected_eigenvalue(*l, p) {
                    Eigenvalue::Unram(v) => v,
                    _ => unreachable!(),
                }
            }
            other => return Err(SatakeError::UnsupportedLabel(format!("{other:?}"))),
        };
        acc = acc.add(&contrib.scale(c));
    }
    Ok(acc)
}

/// Eigenvalue of a Hecke element on the H side, ramified.
pub fn h_eigenvalue_ram(elt: &HeckeElement, p: u64) -> Result<LaurentSqrt, SatakeError> {
    let mut acc = LaurentSqrt::zero(p);
    for (label, c) in &elt.terms {
        let contrib = match label {
            HeckeLabel::Unit(Side::H) => {
                LaurentSqrt::monomial(p, 0, SqrtP::rational(p, Rat::one()))
            }
            HeckeLabel::Coset(TableLabel::T1HRam) => match expected_eigenvalue(TableLabel::T1HRam, p)
            {
                Eigenvalue::Ram(v) => v,
                _ => unreachable!(),
            },
            other => return Err(SatakeError::UnsupportedLabel(format!("{other:?}"))),
        };
        acc = acc.add(&contrib.scale(&SqrtP::rational(p, c.clone())));
    }
    Ok(acc)
}

/// Polynomial in q = p^{-s} with coefficients in a Satake ring; the
/// inverse numerator of a local L-factor.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly<T> {
    pub coeffs: Vec<T>,
}

impl QPoly<Laurent2> {
    pub fn one() -> Self {
        QPoly {
            coeffs: vec![Laurent2::constant(Rat::one())],
        }
    }

    /// Multiply by (1 - c q).
    pub fn times_linear(&self, c: &Laurent2) -> Self {
        let mut out = vec![Laurent2::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] = out[i].add(a);
            out[i + 1] = out[i + 1].sub(&a.mul(c));
        }
        QPoly { coeffs: out }
    }
}

impl QPoly<LaurentSqrt> {
    pub fn one(p: u64) -> Self {
        QPoly {
            coeffs: vec![LaurentSqrt::monomial(
                p,
                0,
                SqrtP::rational(p, Rat::one()),
            )],
        }
    }

    pub fn times_linear(&self, p: u64, c: &LaurentSqrt) -> Self {
        let mut out = vec![LaurentSqrt::zero(p); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] = out[i].add(a);
            out[i + 1] = out[i + 1].add(&a.mul(c).scale(&SqrtP::rational(
                p,
                -Rat::one(),
            )));
        }
        QPoly { coeffs: out }
    }
}

/// Inverse numerator of the degree-4 standard L-factor on the H side,
/// unramified: prod_i (1 - X_i q)(1 - X_i^{-1} q).
pub fn l_factor_h_unram() -> QPoly<Laurent2> {
    let mut out = QPoly::<Laurent2>::one();
    for (e1, e2) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        out = out.times_linear(&Laurent2::monomial(e1, e2, Rat::one()));
    }
    out
}

/// G side, unramified: the extra local zeta factor contributes (1 - q).
pub fn l_factor_g_unram() -> QPoly<Laurent2> {
    let mut out = QPoly::<Laurent2>::one();
    out = out.times_linear(&Laurent2::constant(Rat::one()));
    for (e1, e2) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        out = out.times_linear(&Laurent2::monomial(e1, e2, Rat::one()));
    }
    out
}

/// H side, ramified: (1 - T p^{-1/2} q)(1 - T^{-1} p^{-1/2} q).
pub fn l_factor_h_ram(p: u64) -> QPoly<LaurentSqrt> {
    let mut out = QPoly::<LaurentSqrt>::one(p);
    for e in [1i64, -1] {
        out = out.times_linear(p, &LaurentSqrt::monomial(p, e, SqrtP::half_power(p, -1)));
    }
    out
}

/// G side, ramified: zeta factor times the H-side shape.
pub fn l_factor_g_ram(p: u64) -> QPoly<LaurentSqrt> {
    let mut out = QPoly::<LaurentSqrt>::one(p);
    out = out.times_linear(p, &LaurentSqrt::monomial(p, 0, SqrtP::rational(p, Rat::one())));
    for e in [1i64, -1] {
        out = out.times_linear(p, &LaurentSqrt::monomial(p, e, SqrtP::half_power(p, -1)));
    }
    out
}

/// Outcome of the functoriality verification at one prime.
#[derive(Clone, Debug)]
pub struct FunctorialityOutcome {
    pub prime: u64,
    pub ramified: bool,
    pub eigenvalue_identities: bool,
    pub l_factor_identity: bool,
}

impl FunctorialityOutcome {
    pub fn passed(&self) -> bool {
        self.eigenvalue_identities && self.l_factor_identity
    }
}

/// Substitute Xi := chi and verify the eigenvalue identities
/// Lambda(T_i^G) = lambda(upsilon(T_i^G)) coefficient-wise, then the
/// L-factor relation L_G = zeta_p * L_H as polynomials in q.
pub fn functoriality_check(p: u64, ramified: bool) -> Result<FunctorialityOutcome, SatakeError> {
    let eig_ok = if ramified {
        let lhs = match expected_eigenvalue(TableLabel::T1GRam, p) {
            Eigenvalue::Ram(v) => v,
            _ => unreachable!(),
        };
        let rhs = h_eigenvalue_ram(
            &upsilon_image_at(&HeckeElement::generator(TableLabel::T1GRam), p)?,
            p,
        )?;
        lhs == rhs
    } else {
        let mut ok = true;
        for label in [TableLabel::T1G, TableLabel::T2G] {
            let lhs = match expected_eigenvalue(label, p) {
                Eigenvalue::Unram(v) => v,
                _ => unreachable!(),
            };
            let rhs = h_eigenvalue_unram(
                &upsilon_image_at(&HeckeElement::generator(label), p)?,
                p,
            )?;
            ok &= lhs == rhs;
        }
        ok
    };
    let l_ok = if ramified {
        let h = l_factor_h_ram(p);
        let g = l_factor_g_ram(p);
        let one = LaurentSqrt::monomial(p, 0, SqrtP::rational(p, Rat::one()));
        g == h.times_linear(p, &one)
    } else {
        let h = l_factor_h_unram();
        let g = l_factor_g_unram();
        let zeta_h = h.times_linear(&Laurent2::constant(Rat::one()));
        g == zeta_h
    };
    Ok(FunctorialityOutcome {
        prime: p,
        ramified,
        eigenvalue_identities: eig_ok,
        l_factor_identity: l_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::coset_table;
    use crate::padic::rat;

    #[test]
    fn eigenvalues_match_displays() {
        for p in [2u64, 3, 5, 7] {
            for label in [
                TableLabel::T1H,
                TableLabel::T2H,
                TableLabel::T1G,
                TableLabel::T2G,
            ] {
                let table = coset_table(label, p).unwrap();
                let got = satake_eigenvalue(&table).unwrap();
                assert_eq!(got, expected_eigenvalue(label, p), "{label:?} p={p}");
            }
        }
        for p in [3u64, 5, 7] {
            for label in [TableLabel::T1HRam, TableLabel::T1GRam] {
                let table = coset_table(label, p).unwrap();
                let got = satake_eigenvalue(&table).unwrap();
                assert_eq!(got, expected_eigenvalue(label, p), "{label:?} p={p}");
            }
        }
    }

    #[test]
    fn weyl_symmetry() {
        for p in [2u64, 5] {
            for label in [TableLabel::T1H, TableLabel::T2H, TableLabel::T1G, TableLabel::T2G] {
                let Eigenvalue::Unram(v) =
                    satake_eigenvalue(&coset_table(label, p).unwrap()).unwrap()
                else {
                    panic!()
                };
                assert_eq!(v, v.map_exponents(|a, b| (-a, -b)), "{label:?} inversion");
                assert_eq!(v, v.map_exponents(|a, b| (b, a)), "{label:?} swap");
                assert_eq!(v, v.map_exponents(|a, b| (-a, b)), "{label:?} X1 inversion");
            }
        }
        let Eigenvalue::Ram(v) =
            satake_eigenvalue(&coset_table(TableLabel::T1GRam, 5).unwrap()).unwrap()
        else {
            panic!()
        };
        assert_eq!(v, v.map_exponents(|e| -e));
    }

    #[test]
    fn upsilon_images() {
        let p = 3u64;
        let img = upsilon_image_at(&HeckeElement::generator(TableLabel::T1G), p).unwrap();
        assert_eq!(
            img.terms.get(&HeckeLabel::Coset(TableLabel::T1H)),
            Some(&rat_i(3))
        );
        assert_eq!(img.terms.get(&HeckeLabel::Unit(Side::H)), Some(&rat_i(8)));
        let img2 = upsilon_image_at(&HeckeElement::generator(TableLabel::T2G), p).unwrap();
        assert_eq!(
            img2.terms.get(&HeckeLabel::Coset(TableLabel::T1H)),
            Some(&rat_i(6))
        );
        assert_eq!(
            img2.terms.get(&HeckeLabel::Coset(TableLabel::T2H)),
            Some(&rat_i(9))
        );
        let img3 = upsilon_image_at(&HeckeElement::generator(TableLabel::T1GRam), p).unwrap();
        assert_eq!(
            img3.terms.get(&HeckeLabel::Coset(TableLabel::T1HRam)),
            Some(&rat_i(3))
        );
        assert_eq!(img3.terms.get(&HeckeLabel::Unit(Side::H)), Some(&rat_i(2)));
        assert!(matches!(
            upsilon_image_at(&HeckeElement::generator(TableLabel::T1H), p),
            Err(SatakeError::UnsupportedLabel(_))
        ));
    }

    #[test]
    fn functoriality_all_primes() {
        for p in [2u64, 3, 5, 7] {
            let out = functoriality_check(p, false).unwrap();
            assert!(out.passed(), "unramified p={p}: {out:?}");
        }
        for p in [3u64, 5, 7] {
            let out = functoriality_check(p, true).unwrap();
            assert!(out.passed(), "ramified p={p}: {out:?}");
        }
    }

    #[test]
    fn l_factor_shapes() {
        // Substituting X1 = X2 = 1 into the H-side numerator gives (1-q)^4.
        let h = l_factor_h_unram();
        let at_one: Vec<Rat> = h
            .coeffs
            .iter()
            .map(|c| {
                let mut total = Rat::zero();
                for e1 in -4..=4 {
                    for e2 in -4..=4 {
                        total += c.coeff(e1, e2);
                    }
                }
                total
            })
            .collect();
        assert_eq!(
            at_one,
            vec![rat_i(1), rat_i(-4), rat_i(6), rat_i(-4), rat_i(1)]
        );
        // The G side carries the explicit extra zeta factor: degree 5.
        assert_eq!(l_factor_g_unram().coeffs.len(), 6);
        // Ramified G side with T = 1: (1-q)(1 - q p^{-1/2})^2 shape; check
        // the q-coefficient is -(1 + 2 p^{-1/2}).
        let p = 3;
        let g = l_factor_g_ram(p);
        let c1: SqrtP = g.coeffs[1].coeff(1).add(&g.coeffs[1].coeff(-1)).add(&g.coeffs[1].coeff(0));
        assert_eq!(c1.a, rat_i(-1));
        assert_eq!(c1.b, rat(-2, 3));
    }

    #[test]
    fn generators_algebraically_independent() {
        // The leading-coefficient matrix of (lambda(T_1^H), lambda(T_2^H))
        // against the symmetric sums (e1, e2) is diagonal and nonsingular.
        for p in [2u64, 3, 5, 7] {
            let Eigenvalue::Unram(l1) =
                satake_eigenvalue(&coset_table(TableLabel::T1H, p).unwrap()).unwrap()
            else {
                panic!()
            };
            let Eigenvalue::Unram(l2) =
                satake_eigenvalue(&coset_table(TableLabel::T2H, p).unwrap()).unwrap()
            else {
                panic!()
            };
            let m = [
                [l1.coeff(1, 0), l1.coeff(1, 1)],
                [l2.coeff(1, 0), l2.coeff(1, 1)],
            ];
            let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
            assert!(!det.is_zero(), "p={p}");
        }
    }

    #[test]
    fn functoriality_worked_identity() {
        // p lambda(T_1^H) + (p^2 - 1) = p^2 (sym e1) + p^2 - 1.
        let p = 5u64;
        let pr = rat_i(p as i64);
        let lhs = h_eigenvalue_unram(
            &upsilon_image_at(&HeckeElement::generator(TableLabel::T1G), p).unwrap(),
            p,
        )
        .unwrap();
        let rhs = sym_e1()
            .scale(&(&pr * &pr))
            .add(&Laurent2::constant(&pr * &pr - Rat::one()));
        assert_eq!(lhs, rhs);
    }
}
