//! Two distinct weights: the closed-form density against the series.

use genf::GeneralizedF;

pub fn run_example() -> genf::Result<()> {
    let law = GeneralizedF::new(&[2.0, 1.0], &[1.0, 1.0], 6.0)?;
    println!("{:>8} {:>14} {:>14} {:>10}", "w", "closed form", "series", "diff");
    for w in [0.1, 0.5, 1.0, 2.19331, 5.0, 10.0] {
        let exact = law.pdf_exact_r2(w)?;
        let series = law.pdf_series(w, 1e-12)?;
        println!(
            "{w:>8} {exact:>14.10} {:>14.10} {:>10.1e}",
            series.value,
            (exact - series.value).abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("exact_r2 example failed");
}
