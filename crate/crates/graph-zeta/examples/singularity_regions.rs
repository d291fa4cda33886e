//! Geometry of the singularity sets Omega_w = {z : (1 + w z^2)/z in [-d, d]}.
//!
//! Whether the completed zeta extends past its convergence disc depends on
//! whether this set disconnects the plane, which happens exactly for real w
//! with 0 < w <= d^2/4. The example runs the analytic classifier against an
//! independent flood-fill oracle and dumps curve samples for plotting.
//!
//!     cargo run --example singularity_regions

use graph_zeta::funceq::{omega_disconnection_oracle, omega_w_curve, omega_w_disconnects};
use num_complex::Complex64;

fn main() {
    let d = 2.0;
    println!("d = {d}, critical threshold d^2/4 = {}", d * d / 4.0);
    println!("{:>14} {:>10} {:>10}", "w", "analytic", "flood fill");
    for w in [
        Complex64::new(0.3, 0.0),  // real, below threshold: disconnects
        Complex64::new(1.0, 0.0),  // exactly the threshold: still disconnects
        Complex64::new(1.8, 0.0),  // beyond: the circle opens up
        Complex64::new(-0.6, 0.0), // negative: a bounded sliver on the axis
        Complex64::new(0.4, 0.3),  // complex: a simple curve, no enclosure
        Complex64::new(0.0, 0.0),  // w = 0: two half-lines
    ] {
        let analytic = omega_w_disconnects(w, d).unwrap();
        let flood = omega_disconnection_oracle(w, d, 256).unwrap();
        println!(
            "{:>14} {:>10} {:>10}",
            format!("{w}"),
            analytic,
            flood
        );
        assert_eq!(analytic, flood);
    }

    // curve samples, ready for a plotting tool
    let w = Complex64::new(0.5, 0.0);
    let branches = omega_w_curve(w, d, 0.02, 10.0);
    let total: usize = branches.iter().map(Vec::len).sum();
    println!("\nsampled Omega_w for w = {w}: {total} points in {} branches", branches.len());
    for branch in &branches {
        let (lo, hi) = branch.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), z| (lo.min(z.norm()), hi.max(z.norm())),
        );
        println!("  branch radius range [{lo:.4}, {hi:.4}]");
    }
    println!("\n(the circle |z| = 1/sqrt(w) plus two real wings; the circle is");
    println!(" what separates the origin component from infinity)");
}
