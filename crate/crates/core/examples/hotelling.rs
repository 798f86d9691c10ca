//! Type I error of Hotelling's T^2 when the equicorrelated dispersion is
//! wrongly assumed, and the term counts each truncation bound needs.

use genf::hotelling::{equicorrelated, misspecified_tail, table1, HotellingScenario};
use genf::linalg::SymMatrix;

pub fn run_example() -> genf::Result<()> {
    let scen = HotellingScenario::new(SymMatrix::identity(3), equicorrelated(3, 0.5)?, 12)?;
    println!("roots {:?}, nu = {}", scen.pis(), scen.nu());
    let tail = misspecified_tail(&scen, 3.8625, 1e-10)?;
    println!("P[statistic >= 3.8625] = {:.5}", tail.value);

    println!("{:>4} {:>5} {:>5} {:>5} {:>8}", "rho", "tau1", "tau2", "tau3", "tail");
    for row in table1(1e-4)? {
        println!(
            "{:>4.1} {:>5} {:>5} {:>5} {:>8.5}",
            row.rho, row.tau1, row.tau2, row.tau3, row.tail
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("hotelling example failed");
}
