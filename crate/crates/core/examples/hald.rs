//! Joint outliers in the Hald cement data: screen every pair of rows with
//! the cheap p-value bounds, then compute exact p-values for the survivors.

use genf::diagnostics::{canonical_leverages, screen_subsets, subset_p_value, CsvOptions, RegressionData};

pub fn run_example() -> genf::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/hald.csv");
    let data = RegressionData::from_csv(path, &CsvOptions::default())?;
    println!("N = {}, k = {}", data.n(), data.k());

    println!("leverages of {{6, 8}}: {:?}", canonical_leverages(&data, &[6, 8])?);
    for rep in screen_subsets(&data, 2, 0.05, 1e-8)? {
        let p = rep.p_exact.expect("screened subsets carry exact p-values");
        println!(
            "I = {:?}: D = {:.5}, {:.5} <= p = {:.5} <= {:.5}",
            rep.subset, rep.d_stat, rep.p_lower, p.value, rep.p_upper
        );
    }

    let single = subset_p_value(&data, &[6], 1e-10)?;
    println!("single deletion of row 6: p = {:.6}", single.p_exact.map_or(f64::NAN, |e| e.value));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("hald example failed");
}
