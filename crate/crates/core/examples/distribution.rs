//! Density, distribution function, tail and quantile of a generalized F law,
//! each with the number of terms used and its truncation bound.

use genf::genf::default_pdf_tol;
use genf::GeneralizedF;

pub fn run_example() -> genf::Result<()> {
    // weights 2, 2, 1/2 with unit dofs; the repeated weight is merged
    let law = GeneralizedF::new(&[2.0, 2.0, 0.5], &[1.0, 1.0, 1.0], 9.0)?;
    println!("canonical weights {:?} with dofs {:?}", law.alphas(), law.dofs());

    let y = 3.8625;
    let pdf = law.pdf_series(y, default_pdf_tol(y))?;
    let cdf = law.cdf_series(y, 1e-4)?;
    let tight = law.survival(y, 1e-12)?;
    println!("h({y}) = {:.6}  (tau {}, bound {:.2e})", pdf.value, pdf.tau_used, pdf.error_bound);
    println!("H({y}) = {:.6}  (tau {}, bound {:.2e})", cdf.value, cdf.tau_used, cdf.error_bound);
    println!("P[W > {y}] = {:.8}  (tau {})", tight.value, tight.tau_used);

    for p in [0.5, 0.9, 0.95, 0.99] {
        let q = law.quantile(p, 1e-10)?;
        println!("quantile({p}) = {q:.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("distribution example failed");
}
