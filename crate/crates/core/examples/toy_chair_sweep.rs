//! Sweeps the learning rate on the toy chair and prints the ρ = 0.5 vertex
//! clustering count and intersecting-face count per loss variant.
//!
//! cargo run --release -p cd2-core --example toy_chair_sweep -- ITERS LR [LR ...]

use cd2_core::deform::{run_toy_chair, OptConfig};
use cd2_core::losses::LossConfig;

const SEEDS: u64 = 5;

fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v[v.len() / 2]
}

fn main() {
    let mut args = std::env::args().skip(1);
    let usage = "usage: toy_chair_sweep ITERS LR [LR ...]";
    let iters: usize = args.next().and_then(|s| s.parse().ok()).expect(usage);
    let rates: Vec<f64> = args.map(|s| s.parse().expect(usage)).collect();
    let variants = [
        ("cd", LossConfig::cd()),
        ("cd2_distance", LossConfig::cd2_distance(0.3, 1e-7)),
        ("cd2_threshold", LossConfig::cd2_threshold(2)),
        ("cd2_percent", LossConfig::cd2_percent(0.08, 0.01)),
    ];
    println!("lr,variant,median_vc,median_it,diverged");
    for lr in rates {
        for (name, loss) in &variants {
            let (mut vc, mut it, mut diverged) = (Vec::new(), Vec::new(), 0);
            for seed in 0..SEEDS {
                let opt = OptConfig { learning_rate: lr, max_iters: iters, snapshot_every: iters, seed, ..OptConfig::default() };
                match run_toy_chair::<f64>(loss, &opt) {
                    Ok(trace) => {
                        let m = trace.final_metrics().expect("metrics attached");
                        vc.push(m.vc.iter().find(|r| r.rho == 0.5).expect("rho 0.5").n_vc);
                        it.push(m.it.f_it);
                    }
                    Err(_) => diverged += 1,
                }
            }
            if vc.is_empty() {
                println!("{lr},{name},,,{diverged}");
            } else {
                println!("{lr},{name},{},{},{diverged}", median(vc), median(it));
            }
        }
    }
}
