//! Pairs of influential years in the Longley employment regression.

use genf::diagnostics::{screen_subsets, subset_p_value, CsvOptions, RegressionData, ResponseColumn};

pub fn run_example() -> genf::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/longley.csv");
    let opts = CsvOptions {
        response: ResponseColumn::Name("employed".into()),
        ..CsvOptions::default()
    };
    let data = RegressionData::from_csv(path, &opts)?;

    let rep = subset_p_value(&data, &[5, 16], 1e-8)?;
    println!(
        "I = {:?}: leverages {:?}, D = {:.6}, p = {:.5}",
        rep.subset,
        rep.leverages,
        rep.d_stat,
        rep.p_exact.map_or(f64::NAN, |e| e.value)
    );

    println!("pairs whose lower bound clears 0.05:");
    for rep in screen_subsets(&data, 2, 0.05, 1e-8)? {
        println!(
            "  {:?}: D = {:.5}, p = {:.5}, bounds ({:.5}, {:.5})",
            rep.subset,
            rep.d_stat,
            rep.p_exact.map_or(f64::NAN, |e| e.value),
            rep.p_lower,
            rep.p_upper
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("longley example failed");
}
