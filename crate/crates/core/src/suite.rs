//! The full identity suite, run per dimension and per coprime split.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;

use crate::lattice::{area_report, classify_vn_state, default_threshold, support, Classification};
use crate::number_theory::{enumerate_splits, factorize, kronecker_mod, CoprimeSplit};
use crate::phase_space::{
    amplitude_tolerance, clock, inner, momentum_state, position_momentum_kernel, position_state,
    schwinger_u, schwinger_v, translate, MonomialOperator,
};
use crate::report::{fmt_float, CheckRecord, CheckStatus, VerificationReport};
use crate::representations::{
    build_basis, build_c1, build_c2, build_pls, compare_printed_phase, conjugate_basis,
    conjugate_state, kernel_product_residual, overlap_phase_table, printed_phases,
    unadjusted_kernel_residual, BasisKind, RepBasis,
};

/// Environment variable overriding the amplitude tolerance.
pub const TOLERANCE_ENV: &str = "PHASECRT_TOLERANCE";

/// Tolerances used by one suite run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tolerance {
    /// Absolute override for every residual check; `None` means `1e-9·√M`
    /// (and `1e-12·√M` for mutual unbiasedness).
    pub absolute: Option<f64>,
}

impl Tolerance {
    pub fn from_env() -> std::result::Result<Self, String> {
        match std::env::var(TOLERANCE_ENV) {
            Err(_) => Ok(Self { absolute: None }),
            Ok(s) => match s.trim().parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(Self { absolute: Some(x) }),
                _ => Err(format!("{TOLERANCE_ENV} must be a positive number, got `{s}`")),
            },
        }
    }

    pub fn amplitude(&self, m: u64) -> f64 {
        self.absolute.unwrap_or_else(|| amplitude_tolerance(m))
    }

    pub fn unbiasedness(&self, m: u64) -> f64 {
        self.absolute.unwrap_or(1e-12 * (m as f64).sqrt())
    }
}

/// Runs every check for every dimension in `dims`, in the given order.
pub fn run_suite(dims: &[u64], tol: Tolerance) -> crate::Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::default();
    for &m in dims {
        if m < 2 {
            return Err(crate::Error::Dimension(m));
        }
        report.dims.push(m);
        fourier_checks(&mut report, m, tol);
        let splits = enumerate_splits(m)?;
        report
            .splits
            .insert(m, splits.iter().map(|s| s.to_string()).collect());
        if splits.is_empty() {
            report.notes.push(format!(
                "M={m}: {} has no nontrivial coprime split; only Fourier-level checks ran",
                factorize(m)?
            ));
        }
        for s in &splits {
            split_checks(&mut report, s, tol)?;
        }
    }
    report.duration = start.elapsed();
    Ok(report)
}

fn fourier_checks(report: &mut VerificationReport, m: u64, tol: Tolerance) {
    let p = |id: &str| format!("M{m}/{id}");
    let target = 1.0 / (m as f64).sqrt();
    let mut worst: f64 = 0.0;
    for q in 0..m {
        for k in 0..m {
            worst = worst.max((position_momentum_kernel(m, q, k).norm() - target).abs());
        }
    }
    report.push(CheckRecord::residual(
        p("mub"),
        "|<q|k>| = 1/sqrt(M) for all q, k",
        worst,
        tol.unbiasedness(m),
    ));

    let u = schwinger_u(m).expect("m >= 2");
    let v = schwinger_v(m).expect("m >= 2");
    report.push(CheckRecord::exact(p("period.U"), "U^M = 1, M minimal", u.order(), m));
    report.push(CheckRecord::exact(p("period.V"), "V^M = 1, M minimal", v.order(), m));
    let uv = u.compose(&v).expect("same dim");
    let vu = v.compose(&u).expect("same dim");
    report.push(CheckRecord::exact(
        p("commutator"),
        "UV = VU w_M^-1 (global phase exponent)",
        uv.global_phase_relative_to(&vu).map_or(-1, |e| e as i64),
        (m - 1) as i64,
    ));

    let eps = tol.amplitude(m);
    let mut worst: f64 = 0.0;
    for k in 0..m {
        let out = u.apply(&momentum_state(m, k).expect("k < m")).expect("same dim");
        let want = momentum_state(m, (k + 1) % m).expect("k < m");
        worst = worst.max(out.max_abs_diff(&want).expect("same dim"));
    }
    report.push(CheckRecord::residual(
        p("shift.clock_raises_momentum"),
        "U|k> = |k+1>",
        worst,
        eps,
    ));
    let exact = (0..m).all(|q| {
        v.apply(&position_state(m, q).expect("q < m")).expect("same dim")
            == position_state(m, (q + m - 1) % m).expect("q < m")
    });
    report.push(CheckRecord::exact(
        p("shift.translate_lowers_position"),
        "V|q> = |q-1>",
        exact,
        true,
    ));
}

fn gram_of(vectors: &[crate::phase_space::StateVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a.amplitudes(), b.amplitudes()) - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

fn split_checks(report: &mut VerificationReport, s: &CoprimeSplit, tol: Tolerance) -> crate::Result<()> {
    let m = s.m();
    let (m1, m2) = (s.m1(), s.m2());
    let p = |id: &str| format!("M{m}/{s}/{id}");
    let eps = tol.amplitude(m);

    report.push(CheckRecord::exact(
        p("crt.constants"),
        "L1 = M2, L2 = M1, N1 L1 = 1 mod M1, N2 L2 = 1 mod M2",
        format!(
            "L=({},{}) N1L1%M1={} N2L2%M2={}",
            s.l1(),
            s.l2(),
            s.n1() * s.l1() % m1,
            s.n2() * s.l2() % m2
        ),
        format!("L=({m2},{m1}) N1L1%M1=1 N2L2%M2=1"),
    ));

    let mut hits = vec![0u32; m as usize];
    for q1 in 0..m1 {
        for q2 in 0..m2 {
            hits[s.compose(q1, q2)? as usize] += 1;
        }
    }
    report.push(CheckRecord::exact(
        p("crt.bijection"),
        "q = q1 N1 L1 + q2 N2 L2 mod M is a bijection",
        hits.iter().all(|&h| h == 1),
        true,
    ));
    let round_trip = (0..m).all(|q| {
        let (a, b) = s.decompose(q).expect("q < m");
        s.compose(a, b) == Ok(q)
    });
    report.push(CheckRecord::exact(p("crt.round_trip"), "compose(decompose(q)) = q", round_trip, true));

    let mut mismatches = 0u64;
    for q in 0..m {
        for q1 in 0..m1 {
            for q2 in 0..m2 {
                let lhs = kronecker_mod(q as i64 - (q1 * s.n1() * s.l1() + q2 * s.n2() * s.l2()) as i64, m);
                let rhs = kronecker_mod(q as i64 - q1 as i64, m1) * kronecker_mod(q as i64 - q2 as i64, m2);
                mismatches += u64::from(lhs != rhs);
            }
        }
    }
    report.push(CheckRecord::exact(
        p("crt.delta_identity"),
        "D^M(q - q1N1L1 - q2N2L2) = D^M1(q - q1) D^M2(q - q2)",
        mismatches,
        0,
    ));

    let plain: BTreeSet<u64> = (0..m1)
        .flat_map(|q1| (0..m2).map(move |q2| (q1 * s.l1() + q2 * s.l2()) % m))
        .collect();
    report.push(CheckRecord::exact(
        p("crt.inverse_free_bijection"),
        "q = q1 L1 + q2 L2 mod M has a unique solution",
        plain.len() as u64,
        m,
    ));

    let pow = |a: MonomialOperator, n: u64| a.pow(n);
    let tau_m = clock(m, m)?;
    let tau1 = clock(m, m1)?;
    let tau2 = clock(m, m2)?;
    report.push(CheckRecord::exact(
        p("operators.clock_product_with_inverses"),
        "tau(M) = tau(M1)^N1 tau(M2)^N2",
        pow(tau1, s.n1()).compose(&pow(tau2, s.n2()))?.to_string(),
        tau_m.to_string(),
    ));
    report.push(CheckRecord::claimed(
        p("operators.clock_product_plain"),
        "tau(M) -> tau(M1) tau(M2)",
        tau1.compose(&tau2)?.to_string(),
        tau_m.to_string(),
    ));
    let t1 = translate(m, 1)?;
    report.push(CheckRecord::exact(
        p("operators.translate_product_with_inverses"),
        "T(1) = T(N1 L1) T(N2 L2)",
        translate(m, s.n1() * s.l1() % m)?
            .compose(&translate(m, s.n2() * s.l2() % m)?)?
            .to_string(),
        t1.to_string(),
    ));
    report.push(CheckRecord::claimed(
        p("operators.translate_product_plain"),
        "T(1) -> T(L1) T(L2)",
        translate(m, s.l1())?.compose(&translate(m, s.l2())?)?.to_string(),
        t1.to_string(),
    ));
    report.push(CheckRecord::exact(
        p("operators.kq_pair_commutes"),
        "tau(M1) T(L2) = T(L2) tau(M1)",
        tau1.compose(&translate(m, s.l2())?)?.to_string(),
        translate(m, s.l2())?.compose(&tau1)?.to_string(),
    ));

    let bases: Vec<RepBasis> = BasisKind::ALL
        .iter()
        .map(|&k| build_basis(k, m, m1))
        .collect::<crate::Result<_>>()?;
    for b in &bases {
        report.push(CheckRecord::residual(
            p(&format!("gram.{}", b.kind())),
            "Gram matrix = identity",
            b.gram_residual(),
            eps,
        ));
        let (a, t) = b.eigen_residuals();
        report.push(CheckRecord::residual(
            p(&format!("eigen.{}.clock", b.kind())),
            "tau(M1) v = w_M1^q1 v",
            a,
            eps,
        ));
        report.push(CheckRecord::residual(
            p(&format!("eigen.{}.translate", b.kind())),
            "T(L2) v = w_M2^k2 v",
            t,
            eps,
        ));
    }

    let c1 = build_c1(s);
    let c2 = build_c2(s);
    let worst = c1
        .vectors()
        .iter()
        .zip(c2.vectors())
        .map(|(a, b)| (inner(a.amplitudes(), b.amplitudes()) - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    report.push(CheckRecord::residual(
        p("c1_equals_c2"),
        "<C1(q1,k2)|C2(q1,k2)> = 1",
        worst,
        eps,
    ));

    report.push(CheckRecord::residual(
        p("kernel.factor_product"),
        "<k|q> = <k1|q1><k2|q2>, <k1|q1> = w_M1^(-q1 k1 N1)/sqrt(M1)",
        kernel_product_residual(s),
        eps,
    ));
    let r = unadjusted_kernel_residual(s);
    let mut rec = CheckRecord::residual(
        p("kernel.inverse_free_torus_form"),
        "<q1|<q2||k1>|k2> = w_M^(q1k1L1 + q2k2L2)/sqrt(M)",
        r,
        eps,
    );
    if rec.status == CheckStatus::Fail {
        rec.status = CheckStatus::Discrepancy;
    }
    report.push(rec);

    let mut modulus: f64 = 0.0;
    let mut deltas = true;
    for a in &bases {
        for b in &bases {
            let t = overlap_phase_table(a, b)?;
            modulus = modulus.max(t.modulus_residual());
            deltas &= t.has_delta_structure(eps);
        }
    }
    report.push(CheckRecord::residual(
        p("overlap.moduli_zero_or_one"),
        "|<A'|B>| in {0, 1} for A, B in {C1, C2, Emom, Epos}",
        modulus,
        eps,
    ));
    report.push(CheckRecord::exact(
        p("overlap.delta_structure"),
        "|<A(q1',k2')|B(q1,k2)>| = D(q1-q1') D(k2-k2')",
        deltas,
        true,
    ));

    for printed in printed_phases(s) {
        let cmp = compare_printed_phase(s, &printed, eps)?;
        let status = cmp.status(eps);
        let measured = match cmp.fitted_coefficient {
            Some(c) => format!("w_M^({c} k2 q1)"),
            None => format!("unfitted, exponent residual {}", fmt_float(cmp.exponent_residual)),
        };
        report.push(CheckRecord {
            id: p(&format!("phase.{}_{}", printed.left, printed.right)),
            anchor: printed.formula.to_string(),
            status,
            measured,
            expected: format!("w_M^({} k2 q1)", printed.coefficient),
            tolerance: "integer exponent, residual < 1e-6".into(),
        });
    }

    let conj = conjugate_basis(&c2);
    report.push(CheckRecord::residual(
        p("conjugate.gram"),
        "q<->k exchange preserves orthonormality",
        conj.gram_residual(),
        eps,
    ));
    let back = conjugate_basis(&conj);
    let worst = c2
        .vectors()
        .iter()
        .zip(back.vectors())
        .map(|(a, b)| a.max_abs_diff(b).expect("same dim"))
        .fold(0.0, f64::max);
    report.push(CheckRecord::residual(
        p("conjugate.involution"),
        "conjugate(conjugate(B)) = B",
        worst,
        eps,
    ));

    let th = default_threshold(m);
    let mut pls = Vec::with_capacity(m as usize);
    for q01 in 0..m1 {
        for k02 in 0..m2 {
            pls.push(((q01, k02), build_pls(s, q01, k02)?));
        }
    }
    let states: Vec<_> = pls.iter().map(|(_, v)| v.clone()).collect();
    report.push(CheckRecord::residual(
        p("pls.orthonormal"),
        "<PLS(q01',k02')|PLS(q01,k02)> = D D",
        gram_of(&states),
        eps,
    ));

    let mut recovered = 0u64;
    let mut cover = vec![0u32; (m * m) as usize];
    let mut dual = 0u64;
    let mut uniform: f64 = 0.0;
    let target = 1.0 / (m as f64).sqrt();
    let swapped = s.swapped();
    for ((q01, k02), v) in &pls {
        if let Classification::Lattice(l) = classify_vn_state(v, s, th)? {
            recovered += u64::from(l.shift() == (*q01, *k02));
        }
        for pt in support(v, th)? {
            cover[(pt.q * m + pt.k) as usize] += 1;
            let z = crate::lattice::mixed_element(v, pt.q, pt.k)?;
            uniform = uniform.max((z.norm() - target).abs());
        }
        let c = conjugate_state(v);
        if let Classification::Lattice(l) = classify_vn_state(&c, &swapped, th)? {
            dual += u64::from(l.shift() == (*k02, *q01));
        }
    }
    report.push(CheckRecord::exact(
        p("lattice.pls_bijection"),
        "PLS(q01,k02) lies over the lattice shifted to (q01,k02)",
        recovered,
        m,
    ));
    report.push(CheckRecord::exact(
        p("lattice.partition"),
        "the M lattice supports partition the M^2 phase cells",
        cover.iter().all(|&c| c == 1),
        true,
    ));
    report.push(CheckRecord::residual(
        p("lattice.uniform_magnitude"),
        "|<q|rho|k>| = 1/sqrt(M) on the lattice",
        uniform,
        eps,
    ));
    report.push(CheckRecord::exact(
        p("lattice.conjugate_duality"),
        "conjugate PLS lies over the lattice with q/k spacings exchanged",
        dual,
        m,
    ));

    let area = area_report(m, s)?;
    report.push(CheckRecord::exact(
        p("area.cell"),
        "cell area = 2pi/M",
        area.cell_area.to_string(),
        format!("1/{m}"),
    ));
    report.push(CheckRecord::exact(
        p("area.state"),
        "state area = M * 2pi/M = 2pi (units of 2pi)",
        area.state_area.to_string(),
        "1".to_string(),
    ));
    Ok(())
}
