//! Parsimonizes a tiny document against a background that favours "the".
//!
//!     cargo run --example parsimonize_document

use hitr::parsimony::parsimonize_traced;
use hitr::{initialize, CountVector, EmConfig, SparseDistribution};

fn main() -> hitr::Result<()> {
    let terms = ["the", "brain", "neurons"];
    let counts = CountVector::new(3, vec![(0, 50.0), (1, 10.0), (2, 10.0)])?;
    let background = SparseDistribution::new(3, vec![(0, 0.9), (1, 0.05), (2, 0.05)])?;

    let ml = initialize(&counts)?;
    println!("{:<8} {:>8} {:>8} {:>8}", "term", "ml", "λ=0.5", "λ=0.1");
    let mut fits = Vec::new();
    for lambda in [0.5, 0.1] {
        let fit = parsimonize_traced(&counts, &background, &EmConfig { lambda, ..EmConfig::default() })?;
        println!("λ={lambda}: {} iterations, converged: {}", fit.iterations, fit.converged);
        fits.push(fit.distribution);
    }
    for (i, t) in terms.iter().enumerate() {
        println!("{t:<8} {:>8.4} {:>8.4} {:>8.4}", ml.get(i), fits[0].get(i), fits[1].get(i));
    }
    Ok(())
}
