//! The four torus-labeled bases and their phase relations.
//!
//! Every basis is labeled by `(q1, k2)`, `q1 ∈ [0, M1)`, `k2 ∈ [0, M2)`, and
//! its vectors are simultaneous eigenvectors of `τ(M1) = clock(M, M1)`
//! (eigenvalue `ω_{M1}^{q1}`) and `T(L2) = translate(M, M1)` (eigenvalue
//! `ω_{M2}^{k2}`):
//!
//! | kind     | construction                                                   |
//! |----------|----------------------------------------------------------------|
//! | `C1`     | `M1^{-1/2} Σ_{k1} ω_{M1}^{-k1 q1 N1} |k = k1 N1 L1 + k2 N2 L2⟩` |
//! | `C2`     | `M2^{-1/2} Σ_{q2} ω_{M2}^{+k2 q2 N2} |q = q1 N1 L1 + q2 N2 L2⟩` |
//! | `EMom`   | `M1^{-1/2} Σ_{k1} ω_{M1}^{-k1 q1} |k = k2 + k1 M2⟩`             |
//! | `EPos`   | `M2^{-1/2} Σ_{q2} ω_{M2}^{+k2 q2} |q = q1 + q2 M1⟩`             |
//!
//! `C1` and `C2` need a coprime split; the `E` kinds only need `M1 | M`.
//! Basis vectors are stored densely, index `q1 · M2 + k2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::number_theory::{gcd, CoprimeSplit};
use crate::phase_space::{
    clock, inner, momentum_state, position_momentum_kernel, position_state, root_of_unity,
    same_dim, translate, StateVector,
};
use crate::report::CheckStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisKind {
    C1,
    C2,
    EMom,
    EPos,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] = [BasisKind::C1, BasisKind::C2, BasisKind::EMom, BasisKind::EPos];

    pub fn requires_coprime(self) -> bool {
        matches!(self, BasisKind::C1 | BasisKind::C2)
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::C1 => "C1",
            BasisKind::C2 => "C2",
            BasisKind::EMom => "Emom",
            BasisKind::EPos => "Epos",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(BasisKind::C1),
            "c2" => Ok(BasisKind::C2),
            "emom" | "e_mom" => Ok(BasisKind::EMom),
            "epos" | "e_pos" => Ok(BasisKind::EPos),
            _ => Err(format!("unknown basis kind `{s}` (expected C1, C2, Epos, Emom)")),
        }
    }
}

/// `M = M1 · M2` with no coprimality requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorPair {
    pub m: u64,
    pub m1: u64,
    pub m2: u64,
}

impl FactorPair {
    pub fn new(m: u64, m1: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension(m));
        }
        if m1 == 0 || m % m1 != 0 {
            return Err(Error::NotDivisor { m, divisor: m1 });
        }
        Ok(Self { m, m1, m2: m / m1 })
    }

    pub fn is_coprime(&self) -> bool {
        gcd(self.m1, self.m2) == 1
    }
}

impl From<CoprimeSplit> for FactorPair {
    fn from(s: CoprimeSplit) -> Self {
        Self {
            m: s.m(),
            m1: s.m1(),
            m2: s.m2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusLabel {
    pub q1: u64,
    pub k2: u64,
}

impl fmt::Display for TorusLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q1, self.k2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepBasis {
    kind: BasisKind,
    factors: FactorPair,
    split: Option<CoprimeSplit>,
    conjugated: bool,
    vectors: Vec<StateVector>,
}

impl RepBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }
    pub fn factors(&self) -> FactorPair {
        self.factors
    }
    pub fn split(&self) -> Option<CoprimeSplit> {
        self.split
    }
    pub fn is_conjugated(&self) -> bool {
        self.conjugated
    }
    pub fn dim(&self) -> u64 {
        self.factors.m
    }
    pub fn len(&self) -> usize {
        self.vectors.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index_of(&self, label: TorusLabel) -> Result<usize> {
        check_range("q1", label.q1, self.factors.m1)?;
        check_range("k2", label.k2, self.factors.m2)?;
        Ok((label.q1 * self.factors.m2 + label.k2) as usize)
    }

    pub fn label_at(&self, index: usize) -> TorusLabel {
        let i = index as u64;
        TorusLabel {
            q1: i / self.factors.m2,
            k2: i % self.factors.m2,
        }
    }

    pub fn vector(&self, label: TorusLabel) -> Result<&StateVector> {
        Ok(&self.vectors[self.index_of(label)?])
    }

    pub fn labels(&self) -> impl Iterator<Item = TorusLabel> + '_ {
        (0..self.vectors.len()).map(|i| self.label_at(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (TorusLabel, &StateVector)> + '_ {
        self.vectors.iter().enumerate().map(|(i, v)| (self.label_at(i), v))
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// `max_{ij} |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let g = inner(a.amplitudes(), b.amplitudes());
                worst = worst.max((g - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest `‖τ(M1) v − ω_{M1}^{q1} v‖` and `‖T(L2) v − ω_{M2}^{k2} v‖` over
    /// all vectors. A conjugated basis is mapped back through the (involutive)
    /// conjugation before checking.
    pub fn eigen_residuals(&self) -> (f64, f64) {
        let FactorPair { m, m1, m2 } = self.factors;
        let tau = clock(m, m1).expect("m1 divides m");
        let shift = translate(m, m1 % m).expect("in range");
        let mut worst = (0.0f64, 0.0f64);
        for (label, v) in self.iter() {
            let v = if self.conjugated { conjugate_state(v) } else { v.clone() };
            let a = tau.apply(&v).expect("same dim");
            let b = shift.apply(&v).expect("same dim");
            let ea = v.scaled(root_of_unity(m1, label.q1 as i64));
            let eb = v.scaled(root_of_unity(m2, label.k2 as i64));
            worst.0 = worst.0.max(a.distance(&ea).expect("same dim"));
            worst.1 = worst.1.max(b.distance(&eb).expect("same dim"));
        }
        worst
    }
}

fn superpose(m: u64, terms: impl Iterator<Item = (Complex64, StateVector)>) -> StateVector {
    let mut acc = vec![Complex64::new(0.0, 0.0); m as usize];
    for (c, v) in terms {
        for (a, x) in acc.iter_mut().zip(v.amplitudes()) {
            *a += c * x;
        }
    }
    StateVector::new(acc).expect("m >= 2")
}

fn basis_from_fn(
    kind: BasisKind,
    factors: FactorPair,
    split: Option<CoprimeSplit>,
    f: impl Fn(u64, u64) -> StateVector,
) -> RepBasis {
    let vectors = (0..factors.m1)
        .flat_map(|q1| (0..factors.m2).map(move |k2| (q1, k2)))
        .map(|(q1, k2)| f(q1, k2))
        .collect();
    RepBasis {
        kind,
        factors,
        split,
        conjugated: false,
        vectors,
    }
}

fn c1_vector(split: &CoprimeSplit, q1: u64, k2: u64) -> StateVector {
    let (m, m1) = (split.m(), split.m1());
    let norm = 1.0 / (m1 as f64).sqrt();
    superpose(
        m,
        (0..m1).map(|k1| {
            let phase = root_of_unity(m1, -((k1 * q1 * split.n1()) as i64)) * norm;
            let k = split.compose_unchecked(k1, k2);
            (phase, momentum_state(m, k).expect("k < m"))
        }),
    )
}

fn c2_vector(split: &CoprimeSplit, q1: u64, k2: u64) -> StateVector {
    let (m, m2) = (split.m(), split.m2());
    let norm = 1.0 / (m2 as f64).sqrt();
    superpose(
        m,
        (0..m2).map(|q2| {
            let phase = root_of_unity(m2, (k2 * q2 * split.n2()) as i64) * norm;
            let q = split.compose_unchecked(q1, q2);
            (phase, position_state(m, q).expect("q < m"))
        }),
    )
}

pub fn build_c1(split: &CoprimeSplit) -> RepBasis {
    basis_from_fn(BasisKind::C1, (*split).into(), Some(*split), |q1, k2| {
        c1_vector(split, q1, k2)
    })
}

pub fn build_c2(split: &CoprimeSplit) -> RepBasis {
    basis_from_fn(BasisKind::C2, (*split).into(), Some(*split), |q1, k2| {
        c2_vector(split, q1, k2)
    })
}

/// Partially localized state: localized at `q1 = q01`, quasi-momentum `k2 = k02`.
/// Torus amplitudes `⟨q1 q2|ψ⟩ = Δ^{M1}(q1 − q01) ω_{M2}^{k02 q2 N2} / √M2`.
pub fn build_pls(split: &CoprimeSplit, q01: u64, k02: u64) -> Result<StateVector> {
    check_range("q01", q01, split.m1())?;
    check_range("k02", k02, split.m2())?;
    Ok(c2_vector(split, q01, k02))
}

pub fn build_e_pos(m: u64, m1: u64) -> Result<RepBasis> {
    let fp = FactorPair::new(m, m1)?;
    let norm = 1.0 / (fp.m2 as f64).sqrt();
    Ok(basis_from_fn(BasisKind::EPos, fp, None, |q1, k2| {
        superpose(
            m,
            (0..fp.m2).map(|q2| {
                let phase = root_of_unity(fp.m2, (k2 * q2) as i64) * norm;
                (phase, position_state(m, q1 + q2 * fp.m1).expect("q < m"))
            }),
        )
    }))
}

pub fn build_e_mom(m: u64, m1: u64) -> Result<RepBasis> {
    let fp = FactorPair::new(m, m1)?;
    let norm = 1.0 / (fp.m1 as f64).sqrt();
    Ok(basis_from_fn(BasisKind::EMom, fp, None, |q1, k2| {
        superpose(
            m,
            (0..fp.m1).map(|k1| {
                let phase = root_of_unity(fp.m1, -((k1 * q1) as i64)) * norm;
                (phase, momentum_state(m, k2 + k1 * fp.m2).expect("k < m"))
            }),
        )
    }))
}

/// Builds any of the four kinds. `C` kinds fail with [`Error::RequiresCoprime`]
/// when `gcd(M1, M/M1) ≠ 1`.
pub fn build_basis(kind: BasisKind, m: u64, m1: u64) -> Result<RepBasis> {
    match kind {
        BasisKind::C1 | BasisKind::C2 => {
            let fp = FactorPair::new(m, m1)?;
            if !fp.is_coprime() {
                return Err(Error::RequiresCoprime { kind: kind.name() });
            }
            let split = CoprimeSplit::new(m, m1)?;
            Ok(if kind == BasisKind::C1 {
                build_c1(&split)
            } else {
                build_c2(&split)
            })
        }
        BasisKind::EMom => build_e_mom(m, m1),
        BasisKind::EPos => build_e_pos(m, m1),
    }
}

/// Exchanges the roles of position and momentum: the new position
/// wavefunction is the complex conjugate of the old momentum wavefunction,
/// and the new momentum wavefunction is the conjugate of the old position
/// wavefunction. The map is antiunitary and its own inverse, so
/// `|⟨q|ρ'|k⟩| = |⟨k|ρ|q⟩|` for the mixed representation.
pub fn conjugate_state(v: &StateVector) -> StateVector {
    StateVector::new(v.momentum_amplitudes().into_iter().map(|a| a.conj()).collect())
        .expect("same dim")
}

pub fn conjugate_basis(basis: &RepBasis) -> RepBasis {
    RepBasis {
        kind: basis.kind,
        factors: basis.factors,
        split: basis.split,
        conjugated: !basis.conjugated,
        vectors: basis.vectors.iter().map(conjugate_state).collect(),
    }
}

/// Factor Fourier kernel `⟨k1|q1⟩ = ω_{M1}^{-q1 k1 N1} / √M1`. For the second
/// factor pass `split.swapped()`.
pub fn factor_kernel(split: &CoprimeSplit, k1: u64, q1: u64) -> Result<Complex64> {
    check_range("k1", k1, split.m1())?;
    check_range("q1", q1, split.m1())?;
    let e = (q1 * k1 * split.n1()) % split.m1();
    Ok(root_of_unity(split.m1(), -(e as i64)) / (split.m1() as f64).sqrt())
}

/// Torus kernel written without the CRT inverses:
/// `ω_M^{q1 k1 L1 + q2 k2 L2} / √M`.
pub fn unadjusted_torus_kernel(split: &CoprimeSplit, q: (u64, u64), k: (u64, u64)) -> Complex64 {
    let m = split.m();
    let e = (q.0 * k.0 * split.l1() + q.1 * k.1 * split.l2()) % m;
    root_of_unity(m, e as i64) / (m as f64).sqrt()
}

/// `max |⟨k|q⟩ − ⟨k1|q1⟩⟨k2|q2⟩|` over all label pairs.
pub fn kernel_product_residual(split: &CoprimeSplit) -> f64 {
    let m = split.m();
    let other = split.swapped();
    let mut worst: f64 = 0.0;
    for q in 0..m {
        for k in 0..m {
            let (q1, q2) = split.decompose(q).expect("q < m");
            let (k1, k2) = split.decompose(k).expect("k < m");
            let lhs = position_momentum_kernel(m, q, k).conj();
            let rhs = factor_kernel(split, k1, q1).expect("in range")
                * factor_kernel(&other, k2, q2).expect("in range");
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `max |⟨q|k⟩ − ω_M^{q1 k1 L1 + q2 k2 L2}/√M|` over all label pairs.
pub fn unadjusted_kernel_residual(split: &CoprimeSplit) -> f64 {
    let m = split.m();
    let mut worst: f64 = 0.0;
    for q in 0..m {
        for k in 0..m {
            let qs = split.decompose(q).expect("q < m");
            let ks = split.decompose(k).expect("k < m");
            let d = position_momentum_kernel(m, q, k) - unadjusted_torus_kernel(split, qs, ks);
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Full overlap matrix `⟨A_a|B_b⟩`, rows and columns in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    pub left: BasisKind,
    pub right: BasisKind,
    pub factors: FactorPair,
    entries: Vec<Complex64>,
}

impl OverlapTable {
    pub fn size(&self) -> usize {
        self.factors.m as usize
    }

    pub fn get(&self, row: TorusLabel, col: TorusLabel) -> Complex64 {
        let m2 = self.factors.m2;
        let r = (row.q1 * m2 + row.k2) as usize;
        let c = (col.q1 * m2 + col.k2) as usize;
        self.entries[r * self.size() + c]
    }

    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.size() + c]
    }

    /// Largest distance of any overlap modulus from the set `{0, 1}`.
    pub fn modulus_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| {
                let r = z.norm();
                r.min((r - 1.0).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `true` when the unit-modulus entries sit exactly on equal labels.
    pub fn has_delta_structure(&self, eps: f64) -> bool {
        let n = self.size();
        (0..n).all(|r| {
            (0..n).all(|c| {
                let z = self.at(r, c).norm();
                if r == c {
                    (z - 1.0).abs() < eps
                } else {
                    z < eps
                }
            })
        })
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.size()).map(|i| self.at(i, i)).collect()
    }
}

pub fn overlap_phase_table(a: &RepBasis, b: &RepBasis) -> Result<OverlapTable> {
    same_dim(a.dim() as usize, b.dim() as usize)?;
    if a.factors != b.factors {
        return Err(Error::FactorMismatch {
            left: format!("{}x{}", a.factors.m1, a.factors.m2),
            right: format!("{}x{}", b.factors.m1, b.factors.m2),
        });
    }
    let n = a.len();
    let mut entries = Vec::with_capacity(n * n);
    for va in a.vectors() {
        for vb in b.vectors() {
            entries.push(inner(va.amplitudes(), vb.amplitudes()));
        }
    }
    Ok(OverlapTable {
        left: a.kind,
        right: b.kind,
        factors: a.factors,
        entries,
    })
}

/// A closed-form diagonal phase `⟨A(q1,k2)|B(q1,k2)⟩ = ω_M^{coefficient · k2 · q1}`
/// as printed for a basis pair, stated in units of `ω_M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedPhase {
    pub left: BasisKind,
    pub right: BasisKind,
    /// Human-readable form as printed.
    pub formula: &'static str,
    /// Exponent coefficient of `k2·q1` in units of `ω_M`, reduced mod `M`.
    pub coefficient: u64,
}

/// The printed closed forms for a split, in check order.
pub fn printed_phases(split: &CoprimeSplit) -> Vec<PrintedPhase> {
    let m = split.m();
    // ω_{M1}^{x} = ω_M^{x·M2}, ω_{M2}^{y} = ω_M^{y·M1}.
    let c1_emom = (split.n1() * split.m2()) % m;
    let c2_epos = (m - (split.n2() * split.m1()) % m) % m;
    vec![
        PrintedPhase {
            left: BasisKind::C1,
            right: BasisKind::C2,
            formula: "<C1'|C2> = dd",
            coefficient: 0,
        },
        PrintedPhase {
            left: BasisKind::C1,
            right: BasisKind::EMom,
            formula: "<C1'|Emom> = dd w_M1^(k2 q1 N1)",
            coefficient: c1_emom,
        },
        PrintedPhase {
            left: BasisKind::C2,
            right: BasisKind::EMom,
            formula: "<C2'|Emom> = <C1'|Emom>",
            coefficient: c1_emom,
        },
        PrintedPhase {
            left: BasisKind::C2,
            right: BasisKind::EPos,
            formula: "<C2'|Epos> = dd w_M2^(-k2 q1 N2)",
            coefficient: c2_epos,
        },
        PrintedPhase {
            left: BasisKind::EMom,
            right: BasisKind::EPos,
            formula: "<Emom'|Epos> = dd w_M^(k2 q1)",
            coefficient: 1,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseMismatch {
    pub label: TorusLabel,
    pub measured: u64,
    pub printed: u64,
}

/// Brute-force overlap table compared with a printed closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseComparison {
    pub printed: PrintedPhase,
    pub modulus_residual: f64,
    pub delta_structure: bool,
    /// Largest `|arg·M/2π − round(arg·M/2π)|` over the diagonal.
    pub exponent_residual: f64,
    /// Measured diagonal exponents in units of `ω_M`, label order.
    pub measured: Vec<u64>,
    /// Coefficient `c` with `measured = c·k2·q1 mod M` for every label, if one exists.
    pub fitted_coefficient: Option<u64>,
    pub mismatches: Vec<PhaseMismatch>,
}

impl PhaseComparison {
    pub fn is_consistent(&self, eps: f64) -> bool {
        self.modulus_residual < eps && self.delta_structure && self.exponent_residual < 1e-6
    }

    /// Pass when consistent and matching, discrepancy when consistent but
    /// the exponents differ from the printed form, fail otherwise.
    pub fn status(&self, eps: f64) -> CheckStatus {
        if !self.is_consistent(eps) {
            CheckStatus::Fail
        } else if self.mismatches.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Discrepancy
        }
    }
}

/// Exponent `e` with `z ≈ |z| ω_M^e`, plus the rounding residual.
pub fn phase_exponent(z: Complex64, m: u64) -> (u64, f64) {
    let x = z.arg() * m as f64 / (2.0 * std::f64::consts::PI);
    let r = x.round();
    ((r as i64).rem_euclid(m as i64) as u64, (x - r).abs())
}

pub fn compare_printed_phase(
    split: &CoprimeSplit,
    printed: &PrintedPhase,
    eps: f64,
) -> Result<PhaseComparison> {
    let a = build_basis(printed.left, split.m(), split.m1())?;
    let b = build_basis(printed.right, split.m(), split.m1())?;
    let table = overlap_phase_table(&a, &b)?;
    let m = split.m();
    let mut measured = Vec::with_capacity(m as usize);
    let mut exponent_residual: f64 = 0.0;
    let mut mismatches = Vec::new();
    for (i, z) in table.diagonal().into_iter().enumerate() {
        let label = a.label_at(i);
        let (e, res) = phase_exponent(z, m);
        exponent_residual = exponent_residual.max(res);
        let want = (printed.coefficient * label.k2 % m) * label.q1 % m;
        if e != want {
            mismatches.push(PhaseMismatch {
                label,
                measured: e,
                printed: want,
            });
        }
        measured.push(e);
    }
    let fitted_coefficient = (0..m).find(|&c| {
        measured.iter().enumerate().all(|(i, &e)| {
            let l = a.label_at(i);
            (c * l.k2 % m) * l.q1 % m == e
        })
    });
    Ok(PhaseComparison {
        printed: printed.clone(),
        modulus_residual: table.modulus_residual(),
        delta_structure: table.has_delta_structure(eps),
        exponent_residual,
        measured,
        fitted_coefficient,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::make_split;

    const EPS: f64 = 1e-9;

    fn split15() -> CoprimeSplit {
        make_split(15, 3).unwrap()
    }

    fn support(v: &StateVector) -> Vec<usize> {
        (0..v.dim()).filter(|&q| v.amplitude(q).norm() > 1e-9).collect()
    }

    #[test]
    fn c1_and_c2_are_orthonormal_eigenbases() {
        for (m, m1) in [(15, 3), (6, 2), (12, 4), (35, 5)] {
            let s = make_split(m, m1).unwrap();
            for b in [build_c1(&s), build_c2(&s)] {
                assert_eq!(b.len(), m as usize);
                assert!(b.gram_residual() < EPS, "{} {m}", b.kind());
                let (a, t) = b.eigen_residuals();
                assert!(a < EPS && t < EPS);
            }
        }
    }

    #[test]
    fn c1_equals_c2_vectorwise() {
        let s = split15();
        let (c1, c2) = (build_c1(&s), build_c2(&s));
        for (l, v) in c1.iter() {
            let o = inner(v.amplitudes(), c2.vector(l).unwrap().amplitudes());
            assert!((o - Complex64::new(1.0, 0.0)).norm() < EPS);
        }
    }

    #[test]
    fn c2_origin_support() {
        let v = build_c2(&split15()).vector(TorusLabel { q1: 0, k2: 0 }).unwrap().clone();
        assert_eq!(support(&v), vec![0, 3, 6, 9, 12]);
        for q in [0, 3, 6, 9, 12] {
            assert!((v.amplitude(q).norm() - 1.0 / 5f64.sqrt()).abs() < EPS);
        }
    }

    #[test]
    fn pls_matches_c2_and_torus_amplitudes() {
        let s = split15();
        let c2 = build_c2(&s);
        assert_eq!(&build_pls(&s, 0, 0).unwrap(), c2.vector(TorusLabel { q1: 0, k2: 0 }).unwrap());
        let v = build_pls(&s, 1, 2).unwrap();
        assert_eq!(support(&v), vec![1, 4, 7, 10, 13]);
        for q1 in 0..3 {
            for q2 in 0..5 {
                let q = s.compose(q1, q2).unwrap() as usize;
                let want = if q1 == 1 {
                    root_of_unity(5, (2 * q2 * s.n2()) as i64) / 5f64.sqrt()
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((v.amplitude(q) - want).norm() < EPS);
            }
        }
        assert!(build_pls(&s, 3, 0).is_err());
        assert!(build_pls(&s, 0, 5).is_err());
    }

    #[test]
    fn e_bases_without_coprimality() {
        for (m, m1) in [(4, 2), (12, 4), (8, 2), (15, 3), (9, 3)] {
            for b in [build_e_pos(m, m1).unwrap(), build_e_mom(m, m1).unwrap()] {
                assert!(b.gram_residual() < EPS);
                let (a, t) = b.eigen_residuals();
                assert!(a < EPS && t < EPS, "{} {m} {m1}", b.kind());
            }
        }
        let v = build_e_pos(12, 4).unwrap().vector(TorusLabel { q1: 0, k2: 0 }).unwrap().clone();
        assert_eq!(support(&v), vec![0, 4, 8]);
        assert!(build_e_pos(12, 5).is_err());
        assert!(build_e_mom(12, 7).is_err());
    }

    #[test]
    fn c_kinds_require_coprime() {
        assert_eq!(
            build_basis(BasisKind::C1, 4, 2),
            Err(Error::RequiresCoprime { kind: "C1" })
        );
        assert!(build_basis(BasisKind::EPos, 4, 2).is_ok());
    }

    #[test]
    fn conjugation_is_an_involution_and_swaps_supports() {
        let s = split15();
        let c2 = build_c2(&s);
        let conj = conjugate_basis(&c2);
        assert!(conj.is_conjugated());
        assert!(conj.gram_residual() < EPS);
        let (a, t) = conj.eigen_residuals();
        assert!(a < EPS && t < EPS);
        let back = conjugate_basis(&conj);
        for (l, v) in c2.iter() {
            assert!(v.max_abs_diff(back.vector(l).unwrap()).unwrap() < EPS);
        }
        let v0 = conj.vector(TorusLabel { q1: 0, k2: 0 }).unwrap();
        assert_eq!(support(v0), vec![0, 5, 10]);
        let mom = StateVector::new(v0.momentum_amplitudes()).unwrap();
        assert_eq!(support(&mom), vec![0, 3, 6, 9, 12]);
    }

    #[test]
    fn factor_kernel_examples() {
        let s = split15();
        let z = factor_kernel(&s, 1, 1).unwrap();
        assert!((z - root_of_unity(3, -2) / 3f64.sqrt()).norm() < 1e-15);
        for x in 0..3 {
            let r = 1.0 / 3f64.sqrt();
            assert!((factor_kernel(&s, 0, x).unwrap() - Complex64::new(r, 0.0)).norm() < 1e-15);
            assert!((factor_kernel(&s, x, 0).unwrap() - Complex64::new(r, 0.0)).norm() < 1e-15);
        }
        assert!(factor_kernel(&s, 3, 0).is_err());
        assert!(kernel_product_residual(&s) < EPS);
        // The inverse-free torus kernel would need N1 = N2 = 1, which no
        // nontrivial split satisfies.
        for (m, m1) in [(15, 3), (6, 2), (10, 2), (12, 3), (35, 7)] {
            assert!(unadjusted_kernel_residual(&make_split(m, m1).unwrap()) > 0.1);
        }
    }

    #[test]
    fn overlap_moduli_are_zero_or_one() {
        let s = split15();
        let bases: Vec<_> = BasisKind::ALL.iter().map(|&k| build_basis(k, 15, 3).unwrap()).collect();
        for a in &bases {
            for b in &bases {
                let t = overlap_phase_table(a, b).unwrap();
                assert!(t.modulus_residual() < EPS);
                assert!(t.has_delta_structure(EPS));
            }
        }
        let t = overlap_phase_table(&bases[0], &bases[1]).unwrap();
        assert!(t.diagonal().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < EPS));
        let c2e = overlap_phase_table(&bases[1], &bases[3]).unwrap();
        let z = c2e.get(TorusLabel { q1: 1, k2: 1 }, TorusLabel { q1: 1, k2: 1 });
        assert!((z - root_of_unity(5, -2)).norm() < EPS);
        let e = build_e_pos(15, 5).unwrap();
        assert!(matches!(
            overlap_phase_table(&bases[0], &e),
            Err(Error::FactorMismatch { .. })
        ));
        let _ = s;
    }

    #[test]
    fn printed_phase_comparisons_at_fifteen() {
        let s = split15();
        let statuses: Vec<_> = printed_phases(&s)
            .iter()
            .map(|p| {
                let c = compare_printed_phase(&s, p, EPS).unwrap();
                (p.left, p.right, c.status(EPS), c.fitted_coefficient)
            })
            .collect();
        use BasisKind::*;
        assert_eq!(
            statuses,
            vec![
                (C1, C2, CheckStatus::Pass, Some(0)),
                (C1, EMom, CheckStatus::Pass, Some(10)),
                (C2, EMom, CheckStatus::Pass, Some(10)),
                (C2, EPos, CheckStatus::Pass, Some(9)),
                // Brute force gives ω_M^{-k2 q1}; the printed sign is +.
                (EMom, EPos, CheckStatus::Discrepancy, Some(14)),
            ]
        );
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("C2".parse::<BasisKind>(), Ok(BasisKind::C2));
        assert_eq!("epos".parse::<BasisKind>(), Ok(BasisKind::EPos));
        assert_eq!("Emom".parse::<BasisKind>(), Ok(BasisKind::EMom));
        assert!("X".parse::<BasisKind>().is_err());
    }
}
