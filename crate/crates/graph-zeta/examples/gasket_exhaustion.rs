//! Self-similar graphs through the Sierpinski gasket: amenable exhaustion,
//! the trace state as a limit of level averages, the average Euler
//! characteristic, and cycle counting by G-equivalence classes weighted with
//! average multiplicities.
//!
//!     cargo run --example gasket_exhaustion

use graph_zeta::builders::{gasket_exhaustion, ExhaustionScheme};
use graph_zeta::operators::tn_sequence;
use graph_zeta::zeta::euler_characteristic;
use num_complex::Complex64;

fn main() {
    let scheme = ExhaustionScheme::gasket();

    println!("level  |V|    |E|    |F_G|/|V|   chi(K_n)/|K_n|");
    for level in 1..=7 {
        let ratio = scheme.amenability_ratio(level).unwrap();
        let ctx = gasket_exhaustion(level, 1e-6).unwrap();
        let chi = euler_characteristic(&ctx).unwrap();
        println!(
            "{level:>4} {:>6} {:>6}   {ratio:>9.6}   {:>12.8}",
            scheme.level_vertex_count(level),
            scheme.level_edge_count(level),
            chi.value
        );
    }
    println!("the amenability ratio tends to 0, the characteristic to -1\n");

    // traces of the weighted path operators stabilize across levels
    let u = Complex64::new(0.5, 0.0);
    println!("tau_n(A_m(u)) at u = {u}:");
    println!("{:>5} {:>14} {:>14} {:>14}", "level", "m=2", "m=4", "m=6");
    let mut last: Option<Vec<Complex64>> = None;
    for level in 3..=7 {
        let ctx = gasket_exhaustion(level, 1e-6).unwrap();
        let seq = tn_sequence(&ctx, u, 6).unwrap();
        println!(
            "{level:>5} {:>14.8} {:>14.8} {:>14.8}",
            seq.tau_a[2].re, seq.tau_a[4].re, seq.tau_a[6].re
        );
        last = Some(seq.n.clone());
    }

    // N_m as a sum over G-classes of cycles, mu(C) = lim |G(s,n)|/|K_n|
    println!("\ncycle classes with average multiplicities (m = 3):");
    for s in 1..=4 {
        let classes = scheme.cycle_classes_at_size(3, s).unwrap();
        if !classes.is_empty() {
            println!(
                "  size {s}: {} classes, mu = {:.6}",
                classes.len(),
                scheme.multiplicity_for_size(s)
            );
        }
    }
    let class_sum = scheme.cycle_class_sum(3, u, 5).unwrap();
    println!("sum over classes of mu ell u^cbc = {:.8}", class_sum.re);
    println!(
        "level-7 trace estimate of N_3     = {:.8}",
        last.unwrap()[3].re
    );
    println!("(the class sum is the exact limit; the trace converges to it");
    println!(" geometrically with ratio 1/3 per level)");
}
