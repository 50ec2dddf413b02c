//! Declaring jump measures, checking their admissibility, and evaluating
//! the integral functionals every downstream formula consumes.
//!
//! Run with: cargo run --example measure_validation

use levy_radner::{Atom, JumpCovariance, LevyMeasure, Tilt};

fn report(label: &str, measure: &LevyMeasure) {
    println!("{label}");
    for c in measure.validate().conditions {
        let status = if c.passed { "ok  " } else { "FAIL" };
        println!("  [{status}] {}: {}", c.name, c.message);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Compound Poisson with standard Gaussian marks: every admissibility
    // condition holds analytically.
    let gaussian = LevyMeasure::gaussian(JumpCovariance::flat(3, 0.4)?, 1.0)?;
    report("Gaussian compound Poisson (rho = 0.4, intensity 1):", &gaussian);

    // A symmetric two-atom measure charges both signs of the dividend
    // coordinate, so it is admissible too.
    let symmetric = LevyMeasure::atomic(vec![
        Atom::new(1.0, vec![0.5, 0.0, 0.0]),
        Atom::new(1.0, vec![-0.5, 0.0, 0.0]),
    ])?;
    report("Symmetric two-atom measure:", &symmetric);

    // One-sided dividend jumps break the surjectivity of the tilted-mean
    // map; the report pinpoints the failing condition.
    let one_sided = LevyMeasure::atomic(vec![Atom::new(1.0, vec![0.5, 0.0, 0.0])])?;
    report("One-sided atom (expected to fail):", &one_sided);

    // The integral functionals behind the solver, evaluated in closed
    // form for the Gaussian measure and as exact sums for atoms.
    println!("\nIntegral functionals of the Gaussian measure:");
    let tilt = Tilt::pair(-0.4, 1, -0.2)?;
    println!("  mass                 = {}", gaussian.total_mass());
    println!("  mean z0              = {}", gaussian.mean_z0());
    println!("  second moment z0     = {}", gaussian.second_moment_z0()?);
    println!(
        "  tilted mean z0       = {}   (tilt u0 = -0.4 on dividends, ui = -0.2 on income 1)",
        gaussian.tilted_mean_z0(&tilt)?
    );
    println!(
        "  convexity integral   = {}   (always nonnegative)",
        gaussian.convexity_integral(&tilt)?
    );
    Ok(())
}
