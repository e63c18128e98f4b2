//! The four kq representation bases and their Gram / eigen residuals.

use phasecrt::number_theory::enumerate_splits;
use phasecrt::representations::{build_basis, conjugate_basis, BasisKind};

fn main() -> phasecrt::Result<()> {
    for m in [6u64, 12, 15] {
        for s in enumerate_splits(m)? {
            println!("M={m} split {s}");
            for kind in BasisKind::ALL {
                let b = build_basis(kind, m, s.m1())?;
                let (clock_res, trans_res) = b.eigen_residuals();
                let conj = conjugate_basis(&b);
                println!(
                    "  {:<5} gram {:.2e}  eigen {:.2e} / {:.2e}  conjugate gram {:.2e}",
                    kind.name(),
                    b.gram_residual(),
                    clock_res,
                    trans_res,
                    conj.gram_residual()
                );
            }
        }
    }

    // E kinds exist without coprimality; C kinds do not.
    let e = build_basis(BasisKind::EMom, 4, 2)?;
    println!("Emom for M=4, M1=2: gram {:.2e}", e.gram_residual());
    match build_basis(BasisKind::C1, 4, 2) {
        Err(err) => println!("C1 for M=4, M1=2: {err}"),
        Ok(_) => println!("C1 for M=4, M1=2 unexpectedly built"),
    }
    Ok(())
}
