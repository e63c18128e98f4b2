//! Brute-force overlaps between representation pairs against their closed forms.

use phasecrt::number_theory::make_split;
use phasecrt::phase_space::amplitude_tolerance;
use phasecrt::representations::{compare_printed_phase, printed_phases};

fn main() -> phasecrt::Result<()> {
    let s = make_split(15, 3)?;
    let eps = amplitude_tolerance(s.m());
    for p in printed_phases(&s) {
        let c = compare_printed_phase(&s, &p, eps)?;
        let fitted = c
            .fitted_coefficient
            .map_or("none".to_string(), |x| x.to_string());
        println!(
            "{:<34} closed form c={:<2} fitted c={:<4} {} ({} mismatched labels)",
            p.formula,
            p.coefficient,
            fitted,
            c.status(eps),
            c.mismatches.len()
        );
    }
    Ok(())
}
