//! The limiting gap density ρ(σ; y) for a sign-changing σ, printed as CSV.
//!
//! cargo run --release --example rho_curve > rho.csv

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::density::rho_curve;
use robin_clusters::report::{fmt17, Table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(0.3, &[(2, 1.0)], &[])?;
    let mut t = Table::new(&["y", "rho"]);
    for (y, r) in rho_curve(&sigma, -3.0, 4.0, 141)? {
        t.push(vec![fmt17(y), fmt17(r)]);
    }
    print!("{}", t.to_csv_string()?);
    Ok(())
}
