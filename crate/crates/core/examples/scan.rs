use anosov_core::{
    bowen_constant_exact, build_partition, cylinder_potential, eigen_data, equilibrium,
    pressure_curve_on, uniform_grid, Potential, PressureMethod,
};

fn main() {
    let aut = eigen_data([[1, 1], [1, 0]]).unwrap();
    let coding = build_partition(&aut).unwrap();
    let phi = Potential::cosine([1, 0], 0.3);
    let phi2 = phi.compose_mul_k(2);
    let grid = uniform_grid(-2.0, 2.0, 0.05).unwrap();

    for (name, p) in [("phi ", &phi), ("phi2", &phi2)] {
        for order in [12usize, 15, 18] {
            let r = pressure_curve_on(&coding, p, &grid, PressureMethod::OrbitRatio, order, None);
            match r {
                Ok(c) => {
                    // worst (most negative) second difference, for headroom
                    let mut worst = f64::INFINITY;
                    for w in c.values.windows(3) {
                        worst = worst.min(w[2] - 2.0 * w[1] + w[0]);
                    }
                    println!("{name} ratio order {order}: OK, min d2 = {worst:.3e}");
                }
                Err(e) => println!("{name} ratio order {order}: FAILED {e:?}"),
            }
        }
    }

    // Exact-orbit Bowen constants for both potentials.
    for (name, p) in [("phi ", &phi), ("phi2", &phi2)] {
        let psi = cylinder_potential(p, &coding);
        let g = equilibrium(&psi, &coding.sft, 10).unwrap();
        let c6 = bowen_constant_exact(&g, p, &coding, &[6]).unwrap();
        let c10 = bowen_constant_exact(&g, p, &coding, &[10]).unwrap();
        println!(
            "{name}: exact Bowen c6 = {c6:.4}, c10 = {c10:.4}, ratio = {:.4}",
            c10 / c6
        );
    }

    // Gap between the two curves where both construct.
    for order in [12usize, 14, 16, 18] {
        let c1 = pressure_curve_on(&coding, &phi, &grid, PressureMethod::OrbitRatio, order, None);
        let c2 = pressure_curve_on(&coding, &phi2, &grid, PressureMethod::OrbitRatio, order, None);
        if let (Ok(c1), Ok(c2)) = (c1, c2) {
            let mut max_gap = 0.0f64;
            let mut arg = 0.0;
            for ((v1, v2), &t) in c1.values.iter().zip(&c2.values).zip(&grid) {
                let g = (v1 - v2).abs();
                if g > max_gap {
                    max_gap = g;
                    arg = t;
                }
            }
            println!("ratio order {order}: max |P1-P2| = {max_gap:.3e} at t={arg}");
        }
    }

    for depth in [8usize, 10] {
        let c1 = pressure_curve_on(
            &coding,
            &phi,
            &grid,
            PressureMethod::TransferOperator,
            depth,
            None,
        )
        .unwrap();
        let c2 = pressure_curve_on(
            &coding,
            &phi2,
            &grid,
            PressureMethod::TransferOperator,
            depth,
            None,
        )
        .unwrap();
        let mut max_gap = 0.0f64;
        let mut arg = 0.0;
        for ((v1, v2), &t) in c1.values.iter().zip(&c2.values).zip(&grid) {
            let g = (v1 - v2).abs();
            if g > max_gap {
                max_gap = g;
                arg = t;
            }
        }
        println!("transfer depth {depth}: max |P1-P2| = {max_gap:.3e} at t={arg}");
    }
}
