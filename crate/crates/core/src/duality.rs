//! Weight enumerators, character spectra and exact formal-duality checks.
//!
//! Characters are indexed by group elements through a [`PairingMatrix`]:
//! `t` stands for `chi_t(x) = zeta_m^B(t, x)`. A pair `(S, T)` is formally
//! dual when, for every `t`,
//!
//! ```text
//! |T| * |chi_t(S)|^2 == |S|^2 * nu_T(t)
//! ```
//!
//! which is the division-free form of the defining identity. Every verdict
//! comes from exact integer comparisons.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::{AbelianGroup, ElementSet, GroupSpec, PairingMatrix};
use crate::cyclotomic::{cyclotomic_poly, ClassVector, CyclotomicPoly};
use crate::primitivity::is_primitive;
use crate::Error;

/// `counts[d] = #{(a, b) in S x S : a - b = d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    counts: Vec<u32>,
}

impl WeightEnumerator {
    pub fn new(group: &AbelianGroup, set: &ElementSet) -> Result<Self, Error> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut counts = vec![0u32; group.order()];
        for a in set.iter() {
            for b in set.iter() {
                counts[group.sub(a, b)] += 1;
            }
        }
        Ok(WeightEnumerator { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, d: usize) -> u32 {
        self.counts[d]
    }
}

/// Why a duality check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// `|S| * |T| != N`; no pair of these sizes can be dual.
    SizeLaw { size_s: usize, size_t: usize, order: usize },
    /// The squared character sum at `index` is not a rational integer.
    NotInteger { index: usize },
    /// Cross-multiplied identity fails at `index`.
    Mismatch { index: usize, expected: i64, actual: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub holds: bool,
    pub first_failure: Option<Failure>,
    /// Characters examined before stopping.
    pub checked_count: usize,
}

impl DualityReport {
    fn pass(checked_count: usize) -> Self {
        DualityReport { holds: true, first_failure: None, checked_count }
    }

    fn fail(failure: Failure, checked_count: usize) -> Self {
        DualityReport { holds: false, first_failure: Some(failure), checked_count }
    }
}

/// A group together with a nondegenerate pairing and the tables needed to
/// evaluate characters exactly.
#[derive(Clone, Debug)]
pub struct DualityChecker<'g> {
    group: &'g AbelianGroup,
    pairing: PairingMatrix,
    table: Vec<u8>,
    phi: CyclotomicPoly,
}

impl<'g> DualityChecker<'g> {
    /// Rejects ill-defined or degenerate pairings.
    pub fn new(group: &'g AbelianGroup, pairing: PairingMatrix) -> Result<Self, Error> {
        if !group.pairing_is_nondegenerate(&pairing)? {
            return Err(Error::DegeneratePairing);
        }
        let table = group.pairing_table(&pairing);
        let phi = cyclotomic_poly(group.exponent() as usize);
        Ok(DualityChecker { group, pairing, table, phi })
    }

    pub fn standard(group: &'g AbelianGroup) -> Self {
        Self::new(group, group.spec().standard_pairing()).expect("standard pairing is nondegenerate")
    }

    pub fn group(&self) -> &'g AbelianGroup {
        self.group
    }

    pub fn pairing(&self) -> &PairingMatrix {
        &self.pairing
    }

    pub fn phi(&self) -> &CyclotomicPoly {
        &self.phi
    }

    /// `B(t, x)`.
    #[inline]
    pub fn exponent_of(&self, t: usize, x: usize) -> usize {
        self.table[t * self.group.order() + x] as usize
    }

    fn modulus(&self) -> usize {
        self.group.exponent() as usize
    }

    /// `chi_t(S)`: `coeffs[k] = #{x in S : B(t, x) = k}`.
    pub fn char_sum(&self, set: &ElementSet, t: usize) -> ClassVector {
        let mut v = ClassVector::zero(self.modulus());
        for x in set.iter() {
            v.add_term(self.exponent_of(t, x), 1);
        }
        v
    }

    /// `g(T) = sum_{u in T} chi_u(g)`, the character sum on the dual side.
    pub fn dual_char_sum(&self, set: &ElementSet, g: usize) -> ClassVector {
        let mut v = ClassVector::zero(self.modulus());
        for u in set.iter() {
            v.add_term(self.exponent_of(u, g), 1);
        }
        v
    }

    /// `|chi_t(S)|^2` as a class vector.
    pub fn spectrum_entry(&self, set: &ElementSet, t: usize) -> ClassVector {
        self.char_sum(set, t).norm_sq()
    }

    /// `sum_d nu_S(d) zeta^B(t, d)`; equal to [`Self::spectrum_entry`] after reduction mod `Phi_m`.
    pub fn spectrum_entry_via_nu(&self, nu: &WeightEnumerator, t: usize) -> ClassVector {
        let mut v = ClassVector::zero(self.modulus());
        for (d, &c) in nu.counts().iter().enumerate() {
            if c != 0 {
                v.add_term(self.exponent_of(t, d), c as i64);
            }
        }
        v
    }

    /// Exact integer value of `|chi_t(S)|^2`, if it is one.
    pub fn spectrum_integer(&self, set: &ElementSet, t: usize) -> Option<i64> {
        self.spectrum_entry(set, t).as_integer_with(&self.phi)
    }

    /// Exact spectrum over all characters, `None` where not an integer.
    pub fn spectrum(&self, set: &ElementSet) -> Vec<Option<i64>> {
        (0..self.group.order()).map(|t| self.spectrum_integer(set, t)).collect()
    }

    fn check_identities(
        &self,
        s: &ElementSet,
        t: &ElementSet,
        entry: impl Fn(usize) -> ClassVector,
        nu: &WeightEnumerator,
    ) -> DualityReport {
        let n = self.group.order();
        let (size_s, size_t) = (s.len(), t.len());
        if size_s * size_t != n {
            return DualityReport::fail(Failure::SizeLaw { size_s, size_t, order: n }, 0);
        }
        for idx in 0..n {
            let Some(value) = entry(idx).as_integer_with(&self.phi) else {
                return DualityReport::fail(Failure::NotInteger { index: idx }, idx + 1);
            };
            let actual = value * size_t as i64;
            let expected = (size_s * size_s) as i64 * nu.get(idx) as i64;
            if actual != expected {
                return DualityReport::fail(Failure::Mismatch { index: idx, expected, actual }, idx + 1);
            }
        }
        DualityReport::pass(n)
    }

    /// `|T| |chi_t(S)|^2 = |S|^2 nu_T(t)` for every `t`.
    pub fn check_pair(&self, s: &ElementSet, t: &ElementSet) -> Result<DualityReport, Error> {
        let nu_t = WeightEnumerator::new(self.group, t)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.check_identities(s, t, |i| self.spectrum_entry(s, i), &nu_t))
    }

    /// `|S| |g(T)|^2 = |T|^2 nu_S(g)` for every `g`.
    pub fn check_pair_dual_side(&self, s: &ElementSet, t: &ElementSet) -> Result<DualityReport, Error> {
        let nu_s = WeightEnumerator::new(self.group, s)?;
        if t.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.check_identities(t, s, |g| self.dual_char_sum(t, g).norm_sq(), &nu_s))
    }

    /// `S` dual to its own image under the isomorphism carried by the pairing.
    pub fn check_self_dual(&self, s: &ElementSet) -> Result<DualityReport, Error> {
        self.check_pair(s, s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    Pair,
    SelfDual,
}

/// A verified formally dual instance with every table needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub group: GroupSpec,
    pub pairing: PairingMatrix,
    pub s: ElementSet,
    pub t: ElementSet,
    pub nu_s: Vec<u32>,
    pub nu_t: Vec<u32>,
    /// `|chi_t(S)|^2` for every `t`.
    pub spectrum_s: Vec<i64>,
    /// `|g(T)|^2` for every `g`.
    pub spectrum_t: Vec<i64>,
    pub primitive_s: bool,
    pub primitive_t: bool,
    /// Set when the pairing was found by trying only part of the automorphism group.
    pub pairing_search_partial: bool,
    pub version: String,
}

/// Reasons a certificate fails to re-verify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateError {
    Group(Error),
    Duality(DualityReport),
    DualSide(DualityReport),
    TableMismatch(&'static str),
    SelfDualSetsDiffer,
}

impl core::fmt::Display for CertificateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CertificateError::Group(e) => write!(f, "{e}"),
            CertificateError::Duality(r) => write!(f, "duality identities fail: {:?}", r.first_failure),
            CertificateError::DualSide(r) => write!(f, "dual-side identities fail: {:?}", r.first_failure),
            CertificateError::TableMismatch(what) => write!(f, "recorded {what} does not match recomputation"),
            CertificateError::SelfDualSetsDiffer => f.write_str("self-dual certificate with S != T"),
        }
    }
}

impl From<Error> for CertificateError {
    fn from(e: Error) -> Self {
        CertificateError::Group(e)
    }
}

impl Certificate {
    /// Checks both forms of the identity and assembles the record.
    pub fn build(
        checker: &DualityChecker<'_>,
        kind: CertificateKind,
        s: &ElementSet,
        t: &ElementSet,
        pairing_search_partial: bool,
    ) -> Result<Certificate, CertificateError> {
        let group = checker.group();
        let report = checker.check_pair(s, t)?;
        if !report.holds {
            return Err(CertificateError::Duality(report));
        }
        let dual = checker.check_pair_dual_side(s, t)?;
        if !dual.holds {
            return Err(CertificateError::DualSide(dual));
        }
        let n = group.order();
        let spectrum_s = (0..n).map(|i| checker.spectrum_integer(s, i).expect("verified integral")).collect();
        let spectrum_t = (0..n)
            .map(|g| checker.dual_char_sum(t, g).norm_sq().as_integer_with(checker.phi()).expect("verified integral"))
            .collect();
        Ok(Certificate {
            kind,
            group: group.spec().clone(),
            pairing: checker.pairing().clone(),
            s: *s,
            t: *t,
            nu_s: WeightEnumerator::new(group, s)?.counts,
            nu_t: WeightEnumerator::new(group, t)?.counts,
            spectrum_s,
            spectrum_t,
            primitive_s: is_primitive(group, s)?.primitive,
            primitive_t: is_primitive(group, t)?.primitive,
            pairing_search_partial,
            version: String::from(crate::VERSION),
        })
    }

    /// Recomputes every recorded table from scratch and compares.
    pub fn verify(&self) -> Result<(), CertificateError> {
        if self.kind == CertificateKind::SelfDual && self.s != self.t {
            return Err(CertificateError::SelfDualSetsDiffer);
        }
        let group = AbelianGroup::new(self.group.clone());
        let checker = DualityChecker::new(&group, self.pairing.clone())?;
        let fresh = Certificate::build(&checker, self.kind, &self.s, &self.t, self.pairing_search_partial)?;
        let checks: [(&'static str, bool); 6] = [
            ("nu_S", fresh.nu_s == self.nu_s),
            ("nu_T", fresh.nu_t == self.nu_t),
            ("spectrum of S", fresh.spectrum_s == self.spectrum_s),
            ("spectrum of T", fresh.spectrum_t == self.spectrum_t),
            ("primitivity of S", fresh.primitive_s == self.primitive_s),
            ("primitivity of T", fresh.primitive_t == self.primitive_t),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((what, _)) => Err(CertificateError::TableMismatch(what)),
            None => Ok(()),
        }
    }
}
