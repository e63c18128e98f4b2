//! States and structured unitaries of the M-dimensional space.
//!
//! Conventions (units `c = ħ = 1`, 0-based labels):
//!
//! * `ω_M = exp(2πi / M)`.
//! * Position kets `|q⟩` are the standard basis.
//! * Momentum kets `|k⟩` stand for `p = 2πk/M` and have position amplitudes
//!   `⟨q|k⟩ = ω_M^{+qk} / √M`, so `⟨k|q⟩ = ω_M^{-qk} / √M`.
//!
//! Monomial operators keep every phase as an integer exponent of `ω_M`, so
//! operator identities are checked as integer equalities.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};

/// Sign of the exponent in `⟨q|k⟩ = ω_M^{FOURIER_SIGN · qk} / √M`.
pub const FOURIER_SIGN: i64 = 1;

/// `ω_m^e`, with the exponent reduced modulo `m` before conversion.
pub fn root_of_unity(m: u64, exponent: i64) -> Complex64 {
    let e = exponent.rem_euclid(m as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * e / m as f64)
}

/// `⟨q|k⟩` in dimension `m`.
pub fn position_momentum_kernel(m: u64, q: u64, k: u64) -> Complex64 {
    root_of_unity(m, FOURIER_SIGN * ((q * k) % m) as i64) / (m as f64).sqrt()
}

/// Default amplitude tolerance `1e-9 · √M`.
pub fn amplitude_tolerance(m: u64) -> f64 {
    1e-9 * (m as f64).sqrt()
}

/// Default normalization tolerance `1e-12 · M`.
pub fn norm_tolerance(m: u64) -> f64 {
    1e-12 * m as f64
}

/// Amplitudes over the position basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::Dimension(amplitudes.len() as u64));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::StateFile("non-finite amplitude".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn zeros(m: u64) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); m as usize])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, q: usize) -> Complex64 {
        self.amplitudes[q]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < norm_tolerance(self.dim() as u64)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    /// Momentum-space wavefunction `⟨k|ψ⟩` for every `k`.
    pub fn momentum_amplitudes(&self) -> Vec<Complex64> {
        let m = self.dim() as u64;
        (0..m)
            .map(|k| {
                self.amplitudes
                    .iter()
                    .enumerate()
                    .map(|(q, a)| position_momentum_kernel(m, q as u64, k).conj() * a)
                    .sum()
            })
            .collect()
    }

    /// Largest componentwise distance `max_q |v_q - w_q|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Euclidean distance `‖v - w‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

pub(crate) fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

pub fn position_state(m: u64, q0: u64) -> Result<StateVector> {
    if m < 2 {
        return Err(Error::Dimension(m));
    }
    check_range("q0", q0, m)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); m as usize];
    amps[q0 as usize] = Complex64::new(1.0, 0.0);
    StateVector::new(amps)
}

pub fn momentum_state(m: u64, k0: u64) -> Result<StateVector> {
    if m < 2 {
        return Err(Error::Dimension(m));
    }
    check_range("k0", k0, m)?;
    StateVector::new((0..m).map(|q| position_momentum_kernel(m, q, k0)).collect())
}

/// `⟨v|w⟩ = Σ conj(v_q) w_q`.
pub fn overlap(v: &StateVector, w: &StateVector) -> Result<Complex64> {
    same_dim(v.dim(), w.dim())?;
    Ok(inner(v.amplitudes(), w.amplitudes()))
}

pub(crate) fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// `|q⟩ ↦ ω_M^{slope·q + offset} |q − shift⟩`, all exponents mod `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialOperator {
    dim: u64,
    shift: u64,
    slope: u64,
    offset: u64,
}

impl MonomialOperator {
    pub fn new(dim: u64, shift: i64, slope: i64, offset: i64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        let r = |x: i64| x.rem_euclid(dim as i64) as u64;
        Ok(Self {
            dim,
            shift: r(shift),
            slope: r(slope),
            offset: r(offset),
        })
    }

    pub fn identity(dim: u64) -> Result<Self> {
        Self::new(dim, 0, 0, 0)
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }
    pub fn shift(&self) -> u64 {
        self.shift
    }
    pub fn slope(&self) -> u64 {
        self.slope
    }
    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.slope == 0 && self.offset == 0
    }

    /// Equal as operators up to a global phase `ω_M^e`.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.dim == other.dim && self.shift == other.shift && self.slope == other.slope
    }

    /// Exponent `e` with `self = ω_M^e · other`, if the two differ only by a global phase.
    pub fn global_phase_relative_to(&self, other: &Self) -> Option<u64> {
        self.eq_up_to_phase(other)
            .then(|| (self.offset + self.dim - other.offset) % self.dim)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim as usize, other.dim as usize)?;
        let m = self.dim;
        // other: |q⟩ ↦ ω^{a_o q + b_o}|q − s_o⟩; then self picks up ω^{a_s (q − s_o) + b_s}.
        let cross = (self.slope * other.shift) % m;
        Ok(Self {
            dim: m,
            shift: (self.shift + other.shift) % m,
            slope: (self.slope + other.slope) % m,
            offset: (self.offset + other.offset + m - cross) % m,
        })
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(self.dim).expect("dim validated");
        for _ in 0..n {
            acc = self.compose(&acc).expect("same dim");
        }
        acc
    }

    /// Smallest `n ≥ 1` with `A^n` the exact identity.
    pub fn order(&self) -> u64 {
        let mut acc = *self;
        let mut n = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc).expect("same dim");
            n += 1;
        }
        n
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        same_dim(self.dim as usize, v.dim())?;
        let m = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); m as usize];
        for (q, a) in v.amplitudes().iter().enumerate() {
            let q = q as u64;
            let target = (q + m - self.shift) % m;
            let e = (self.slope * q + self.offset) % m;
            out[target as usize] = root_of_unity(m, e as i64) * a;
        }
        StateVector::new(out)
    }

    pub fn to_dense(&self) -> DenseOperator {
        let m = self.dim as usize;
        let mut d = DenseOperator::zeros(m);
        for q in 0..m {
            let target = (q + m - self.shift as usize) % m;
            let e = (self.slope * q as u64 + self.offset) % self.dim;
            d.set(target, q, root_of_unity(self.dim, e as i64));
        }
        d
    }
}

impl fmt::Display for MonomialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|q> -> w_{}^({}q+{})|q-{}>",
            self.dim, self.slope, self.offset, self.shift
        )
    }
}

/// `τ(d) = exp(i 2π x / d)` on the M-dimensional space: diagonal `ω_M^{q·M/d}`.
pub fn clock(m: u64, d: u64) -> Result<MonomialOperator> {
    if d == 0 || m % d != 0 {
        return Err(Error::NotDivisor { m, divisor: d });
    }
    MonomialOperator::new(m, 0, (m / d) as i64, 0)
}

/// `T(L) = exp(i p L)`: `|q⟩ ↦ |q − L⟩`.
pub fn translate(m: u64, l: u64) -> Result<MonomialOperator> {
    check_range("L", l, m)?;
    MonomialOperator::new(m, l as i64, 0, 0)
}

/// Schwinger `U = τ(M)`.
pub fn schwinger_u(m: u64) -> Result<MonomialOperator> {
    clock(m, m)
}

/// Schwinger `V = T(1)`.
pub fn schwinger_v(m: u64) -> Result<MonomialOperator> {
    translate(m, 1)
}

pub fn compose(a: &MonomialOperator, b: &MonomialOperator) -> Result<MonomialOperator> {
    a.compose(b)
}

pub fn operator_order(a: &MonomialOperator) -> u64 {
    a.order()
}

/// Dense `M×M` complex matrix, row-major. Used for generic numerical checks only.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut d = Self::zeros(dim);
        for i in 0..dim {
            d.set(i, i, Complex64::new(1.0, 0.0));
        }
        d
    }

    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        same_dim(entries.len(), dim * dim)?;
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        same_dim(self.dim, v.dim())?;
        let n = self.dim;
        StateVector::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.get(i, j) * v.amplitude(j)).sum())
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |(A†A − I)_{ij}|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .and_then(|g| g.max_abs_diff(&Self::identity(self.dim)))
            .expect("square")
    }
}

/// Either operator flavor, for [`apply`].
#[derive(Debug, Clone, Copy)]
pub enum Operator<'a> {
    Monomial(&'a MonomialOperator),
    Dense(&'a DenseOperator),
}

pub fn apply(op: Operator<'_>, v: &StateVector) -> Result<StateVector> {
    match op {
        Operator::Monomial(a) => a.apply(v),
        Operator::Dense(a) => a.apply(v),
    }
}
