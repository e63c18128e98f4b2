//! Exact clock/translation algebra with integer phase exponents.

use phasecrt::number_theory::make_split;
use phasecrt::phase_space::{clock, schwinger_u, schwinger_v, translate};

fn main() -> phasecrt::Result<()> {
    let s = make_split(15, 3)?;
    let (m, m1, m2) = (s.m(), s.m1(), s.m2());
    let u = schwinger_u(m)?;
    let v = schwinger_v(m)?;
    println!("U = {u}");
    println!("V = {v}");
    println!("order(U) = {}, order(V) = {}", u.order(), v.order());

    let uv = u.compose(&v)?;
    let vu = v.compose(&u)?;
    println!("UV = w^{} VU", uv.global_phase_relative_to(&vu).unwrap());

    // Clock powers on the two factors multiply back to U only with the inverses.
    let plain = clock(m, m1)?.compose(&clock(m, m2)?)?;
    let fixed = clock(m, m1)?.pow(s.n1()).compose(&clock(m, m2)?.pow(s.n2()))?;
    println!("tau(M1) tau(M2)          = {plain}");
    println!("tau(M1)^N1 tau(M2)^N2    = {fixed}  (== U: {})", fixed == u);

    let t = translate(m, s.n1() * s.l1())?.compose(&translate(m, s.n2() * s.l2())?)?;
    println!("T(N1 L1) T(N2 L2)        = {t}  (== V: {})", t == v);

    // The M1-clock and the M1-translation commute exactly.
    let (a, b) = (clock(m, m1)?, translate(m, m1)?);
    println!("[tau(M1), T(M1)] = 0: {}", a.compose(&b)? == b.compose(&a)?);

    let dense = uv.to_dense();
    println!("unitarity residual of UV: {:.3e}", dense.unitarity_residual());
    Ok(())
}
