//! ASCII support map of a partially localized state and its q<->k exchange.

use phasecrt::lattice::{area_report, default_threshold, support};
use phasecrt::number_theory::make_split;
use phasecrt::representations::{build_pls, conjugate_state};
use phasecrt::phase_space::StateVector;

fn draw(v: &StateVector, m: u64) -> phasecrt::Result<()> {
    let sup = support(v, default_threshold(m))?;
    for k in (0..m).rev() {
        let row: String = (0..m)
            .map(|q| if sup.iter().any(|p| p.q == q && p.k == k) { '#' } else { '.' })
            .collect();
        println!("{k:>3} {row}");
    }
    Ok(())
}

fn main() -> phasecrt::Result<()> {
    let s = make_split(15, 3)?;
    let v = build_pls(&s, 1, 2)?;
    println!("PLS(1,2) for split {s}:");
    draw(&v, s.m())?;
    println!("\nq<->k exchanged:");
    draw(&conjugate_state(&v), s.m())?;

    let a = area_report(s.m(), &s)?;
    println!(
        "\n{} cells of area 2pi*{} give 2pi*{}",
        a.points_per_state, a.cell_area, a.state_area
    );
    Ok(())
}
