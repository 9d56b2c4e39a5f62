//! Runs the binary swarm on a toy objective: the number of zero bits in a
//! 15-bit string. Shows the convergence curve and the hit rate over seeds.
use narx_select::bpsogsa::{optimize, FnObjective, OptimizerConfig};

fn main() -> narx_select::Result<()> {
    let zeros = FnObjective::new(15, |bits: &[bool]| bits.iter().filter(|b| !**b).count() as f64);

    let result = optimize(&zeros, &OptimizerConfig::default())?;
    println!("seed 0 curve: {:?}", result.curve);
    let bits: String = result.best_bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    println!("best {bits} cost {}", result.best_cost);

    let mut hits = 0;
    for seed in 0..100 {
        let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
        hits += usize::from(optimize(&zeros, &cfg)?.best_cost == 0.0);
    }
    println!("optimum reached on {hits}/100 seeds (10 agents, 30 iterations)");

    let longer = OptimizerConfig { max_iter: 100, ..OptimizerConfig::default() };
    let mut hits = 0;
    for seed in 0..100 {
        hits += usize::from(optimize(&zeros, &OptimizerConfig { seed, ..longer })?.best_cost == 0.0);
    }
    println!("optimum reached on {hits}/100 seeds (10 agents, 100 iterations)");
    Ok(())
}
