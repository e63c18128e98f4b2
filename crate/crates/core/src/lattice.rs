//! Von Neumann lattices on the `M × M` phase-space grid.
//!
//! Point `(q, k)` stands for a cell of area `2π/M` (`ħ = 1`). For a split
//! `M = M1 · M2` the lattice shifted to `(q01, k02)` is
//!
//! ```text
//! { (q01 + n M1 mod M, k02 + m M2 mod M) : n < M2, m < M1 }
//! ```
//!
//! i.e. `q ≡ q01 (mod M1)` and `k ≡ k02 (mod M2)`: q-spacing `M1`, k-spacing
//! `M2`. The lattice with the spacings exchanged belongs to the swapped split.
//!
//! A state lies over a lattice when its mixed elements `⟨q|ρ|k⟩` have modulus
//! `1/√M` on the lattice points and vanish elsewhere.

use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::number_theory::{enumerate_splits, CoprimeSplit};
use crate::phase_space::{amplitude_tolerance, position_momentum_kernel, same_dim, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PhasePoint {
    pub q: u64,
    pub k: u64,
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={},k={})", self.q, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VNLattice {
    split: CoprimeSplit,
    shift_q: u64,
    shift_k: u64,
}

impl VNLattice {
    /// Shifts are canonical residues: `shift_q < M1`, `shift_k < M2`.
    pub fn new(split: CoprimeSplit, shift_q: u64, shift_k: u64) -> Result<Self> {
        check_range("shift_q", shift_q, split.m1())?;
        check_range("shift_k", shift_k, split.m2())?;
        Ok(Self {
            split,
            shift_q,
            shift_k,
        })
    }

    pub fn split(&self) -> CoprimeSplit {
        self.split
    }
    pub fn shift(&self) -> (u64, u64) {
        (self.shift_q, self.shift_k)
    }

    pub fn contains(&self, p: PhasePoint) -> bool {
        p.q % self.split.m1() == self.shift_q && p.k % self.split.m2() == self.shift_k
    }

    pub fn points(&self) -> Vec<PhasePoint> {
        lattice_points_with(self.split.m(), self.split.m1(), self.split.m2(), self.shift_q, self.shift_k)
    }
}

impl fmt::Display for VNLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vN lattice {} shift ({},{})",
            self.split, self.shift_q, self.shift_k
        )
    }
}

fn lattice_points_with(m: u64, dq: u64, dk: u64, sq: u64, sk: u64) -> Vec<PhasePoint> {
    let mut pts: Vec<PhasePoint> = (0..m / dq)
        .flat_map(|n| {
            (0..m / dk).map(move |j| PhasePoint {
                q: (sq + n * dq) % m,
                k: (sk + j * dk) % m,
            })
        })
        .collect();
    pts.sort();
    pts
}

/// Row-major sorted lattice points.
pub fn lattice_points(lattice: &VNLattice) -> Vec<PhasePoint> {
    lattice.points()
}

/// Hermitian, unit-trace `M×M` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim as u64));
        }
        same_dim(entries.len(), dim * dim)?;
        Ok(Self { dim, entries })
    }

    pub fn from_pure(v: &StateVector) -> Self {
        let a = v.amplitudes();
        let n = a.len();
        let entries = (0..n * n).map(|i| a[i / n] * a[i % n].conj()).collect();
        Self { dim: n, entries }
    }

    /// `I / M`.
    pub fn maximally_mixed(m: u64) -> Result<Self> {
        let n = m as usize;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0 / m as f64, 0.0);
        }
        Self::from_entries(n, entries)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Access to the mixed position/momentum representation `⟨q|ρ|k⟩`.
pub trait MixedRepresentation {
    fn dim(&self) -> usize;

    fn mixed_element(&self, q: u64, k: u64) -> Result<Complex64>;

    /// All `M²` elements, index `q · M + k`.
    fn mixed_grid(&self) -> Vec<Complex64> {
        let m = self.dim() as u64;
        (0..m)
            .flat_map(|q| (0..m).map(move |k| (q, k)))
            .map(|(q, k)| self.mixed_element(q, k).expect("in range"))
            .collect()
    }
}

impl MixedRepresentation for StateVector {
    fn dim(&self) -> usize {
        StateVector::dim(self)
    }

    /// `⟨q|ψ⟩⟨ψ|k⟩`.
    fn mixed_element(&self, q: u64, k: u64) -> Result<Complex64> {
        let m = self.dim() as u64;
        check_range("q", q, m)?;
        check_range("k", k, m)?;
        let psi_k: Complex64 = self
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(x, a)| a.conj() * position_momentum_kernel(m, x as u64, k))
            .sum();
        Ok(self.amplitude(q as usize) * psi_k)
    }

    fn mixed_grid(&self) -> Vec<Complex64> {
        let bra_k: Vec<Complex64> = self.momentum_amplitudes().iter().map(|a| a.conj()).collect();
        self.amplitudes()
            .iter()
            .flat_map(|a| bra_k.iter().map(move |b| a * b))
            .collect()
    }
}

impl MixedRepresentation for DensityMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    /// Row `q` of `ρ` contracted with `|k⟩`.
    fn mixed_element(&self, q: u64, k: u64) -> Result<Complex64> {
        let m = self.dim as u64;
        check_range("q", q, m)?;
        check_range("k", k, m)?;
        Ok((0..m)
            .map(|x| self.get(q as usize, x as usize) * position_momentum_kernel(m, x, k))
            .sum())
    }
}

pub fn mixed_element<R: MixedRepresentation + ?Sized>(rho: &R, q: u64, k: u64) -> Result<Complex64> {
    rho.mixed_element(q, k)
}

/// `1e-6 / √M`.
pub fn default_threshold(m: u64) -> f64 {
    1e-6 / (m as f64).sqrt()
}

fn support_of_grid(grid: &[Complex64], m: u64, threshold: f64) -> Vec<PhasePoint> {
    grid.iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > threshold)
        .map(|(i, _)| PhasePoint {
            q: i as u64 / m,
            k: i as u64 % m,
        })
        .collect()
}

/// Points with `|⟨q|ρ|k⟩| > threshold`, row-major.
pub fn support<R: MixedRepresentation + ?Sized>(rho: &R, threshold: f64) -> Result<Vec<PhasePoint>> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Threshold(threshold));
    }
    Ok(support_of_grid(&rho.mixed_grid(), rho.dim() as u64, threshold))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum NotVnReason {
    /// Support is a strict subset of a lattice, or empty.
    WrongCount { found: usize, expected: usize },
    /// Support is not a shifted lattice of the requested spacing.
    WrongGeometry { offending: PhasePoint },
    /// Support is right but a magnitude differs from `1/√M`.
    NonUniformMagnitude { point: PhasePoint, magnitude: f64 },
}

impl fmt::Display for NotVnReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotVnReason::WrongCount { found, expected } => {
                write!(f, "wrong count: {found} supported points, expected {expected}")
            }
            NotVnReason::WrongGeometry { offending } => {
                write!(f, "support geometry: {offending} breaks the lattice pattern")
            }
            NotVnReason::NonUniformMagnitude { point, magnitude } => {
                write!(f, "non-uniform magnitude {magnitude:.11e} at {point}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Lattice(VNLattice),
    NotVn(NotVnReason),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Lattice(l) => {
                write!(f, "vN lattice, shift ({},{})", l.shift_q, l.shift_k)
            }
            Classification::NotVn(r) => write!(f, "NotVN ({r})"),
        }
    }
}

/// Checks a grid against lattices with q-spacing `dq` and k-spacing `dk`.
fn match_grid(
    grid: &[Complex64],
    m: u64,
    dq: u64,
    dk: u64,
    threshold: f64,
    eps: f64,
) -> std::result::Result<(u64, u64), NotVnReason> {
    let sup = support_of_grid(grid, m, threshold);
    let expected = m as usize;
    let Some(first) = sup.first() else {
        return Err(NotVnReason::WrongCount { found: 0, expected });
    };
    let (sq, sk) = (first.q % dq, first.k % dk);
    let on = |p: &PhasePoint| p.q % dq == sq && p.k % dk == sk;
    if let Some(bad) = sup.iter().find(|p| !on(p)) {
        return Err(NotVnReason::WrongGeometry { offending: *bad });
    }
    if sup.len() != expected {
        return Err(NotVnReason::WrongCount {
            found: sup.len(),
            expected,
        });
    }
    let target = 1.0 / (m as f64).sqrt();
    for p in &sup {
        let r = grid[(p.q * m + p.k) as usize].norm();
        if (r - target).abs() >= eps {
            return Err(NotVnReason::NonUniformMagnitude {
                point: *p,
                magnitude: r,
            });
        }
    }
    Ok((sq, sk))
}

/// Classifies `rho` against the shifted lattices of `split`.
pub fn classify_vn_state<R: MixedRepresentation + ?Sized>(
    rho: &R,
    split: &CoprimeSplit,
    threshold: f64,
) -> Result<Classification> {
    same_dim(rho.dim(), split.m() as usize)?;
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Threshold(threshold));
    }
    let m = split.m();
    let grid = rho.mixed_grid();
    Ok(
        match match_grid(&grid, m, split.m1(), split.m2(), threshold, amplitude_tolerance(m)) {
            Ok((sq, sk)) => Classification::Lattice(VNLattice::new(*split, sq, sk)?),
            Err(r) => Classification::NotVn(r),
        },
    )
}

/// A lattice found by [`classify_any`]. `q_spacing = M` (single row) and
/// `k_spacing = M` (single column) are the trivial-split lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeMatch {
    pub q_spacing: u64,
    pub k_spacing: u64,
    pub shift_q: u64,
    pub shift_k: u64,
}

/// Tries every enumerated split in both orientations, then the trivial split
/// in both orientations.
pub fn classify_any<R: MixedRepresentation + ?Sized>(
    rho: &R,
    threshold: f64,
) -> Result<Option<LatticeMatch>> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Threshold(threshold));
    }
    let m = rho.dim() as u64;
    let grid = rho.mixed_grid();
    let mut spacings = Vec::new();
    for s in enumerate_splits(m)? {
        spacings.push((s.m1(), s.m2()));
        spacings.push((s.m2(), s.m1()));
    }
    spacings.push((m, 1));
    spacings.push((1, m));
    for (dq, dk) in spacings {
        if let Ok((sq, sk)) = match_grid(&grid, m, dq, dk, threshold, amplitude_tolerance(m)) {
            return Ok(Some(LatticeMatch {
                q_spacing: dq,
                k_spacing: dk,
                shift_q: sq,
                shift_k: sk,
            }));
        }
    }
    Ok(None)
}

/// Phase-space areas in units of `2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AreaReport {
    pub cell_area: Ratio<u64>,
    pub points_per_state: u64,
    pub state_area: Ratio<u64>,
}

pub fn area_report(m: u64, split: &CoprimeSplit) -> Result<AreaReport> {
    same_dim(m as usize, split.m() as usize)?;
    let cell_area = Ratio::new(1, m);
    let lattice = VNLattice::new(*split, 0, 0)?;
    let points = lattice.points();
    let state_area = points.iter().fold(Ratio::from_integer(0), |acc, _| acc + cell_area);
    Ok(AreaReport {
        cell_area,
        points_per_state: points.len() as u64,
        state_area,
    })
}
