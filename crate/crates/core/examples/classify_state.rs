//! Classifies a few states against the von Neumann lattices of a split.

use num_complex::Complex64;
use phasecrt::lattice::{classify_any, classify_vn_state, default_threshold};
use phasecrt::number_theory::make_split;
use phasecrt::phase_space::{momentum_state, StateVector};
use phasecrt::representations::{build_pls, conjugate_state};

fn main() -> phasecrt::Result<()> {
    let s = make_split(15, 3)?;
    let th = default_threshold(15);
    let pls = build_pls(&s, 1, 2)?;

    // A fixed, dense, non-lattice state.
    let dense = StateVector::new(
        (0..15)
            .map(|q| Complex64::new(1.0 + q as f64, (q * q % 7) as f64))
            .collect(),
    )?
    .normalized();

    let cases = [
        ("PLS(1,2)", pls.clone()),
        ("conjugate PLS(1,2)", conjugate_state(&pls)),
        ("momentum eigenstate", momentum_state(15, 4)?),
        ("dense state", dense),
    ];
    for (name, v) in &cases {
        let verdict = classify_vn_state(v, &s, th)?;
        let any = classify_any(v, th)?;
        println!("{name:<20} split {s}: {verdict}");
        match any {
            Some(l) => println!(
                "{:<20} any lattice: spacing ({},{}) shift ({},{})",
                "", l.q_spacing, l.k_spacing, l.shift_q, l.shift_k
            ),
            None => println!("{:<20} any lattice: none", ""),
        }
    }
    Ok(())
}
