//! CRT relabeling of Z_M as a discrete torus Z_M1 x Z_M2.
//!
//! Run with `cargo run --example crt_torus -- 15`.

use phasecrt::number_theory::{enumerate_splits, factorize};

fn main() -> phasecrt::Result<()> {
    let m: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(15);
    let f = factorize(m)?;
    println!("{f}, chi = {}", f.chi());

    for s in enumerate_splits(m)? {
        println!(
            "\nsplit {s}: L1={} L2={} N1={} N2={}",
            s.l1(),
            s.l2(),
            s.n1(),
            s.n2()
        );
        // q1 along rows, q2 along columns, entry is the composed label.
        for q1 in 0..s.m1() {
            let row: Vec<String> = (0..s.m2())
                .map(|q2| format!("{:>3}", s.compose(q1, q2).unwrap()))
                .collect();
            println!("  q1={q1:<2} {}", row.join(""));
        }
        let ok = (0..m).all(|q| {
            let (q1, q2) = s.decompose(q).unwrap();
            s.compose(q1, q2).unwrap() == q
        });
        println!("  round trip over all {m} labels: {}", if ok { "ok" } else { "BROKEN" });
    }
    Ok(())
}
