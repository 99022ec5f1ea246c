// Scratch calibration driver: randomized mark-level dive on the m=74 residual.
use golomb::cover::{dive, DiveConfig};
use golomb::ruler::MarkUniverse;
use std::time::Instant;

fn main() {
    let m: u32 = 74;
    // Seed ruler {12,13,18,22,35,38,46,53,65,67} shifted by -2.
    let carried: Vec<u32> = vec![10, 11, 16, 20, 33, 36, 44, 51, 63, 65];
    let residual = MarkUniverse::range(m).without(&carried);

    let clock = Instant::now();
    // (nodes, restarts, skip_bias, seed)
    let matrix: Vec<(u64, u32, f64, u64)> = vec![
        (2_000_000, 64, 0.25, 1),
        (10_000_000, 16, 0.25, 1),
        (500_000, 256, 0.25, 1),
        (2_000_000, 64, 0.1, 2),
        (2_000_000, 64, 0.4, 3),
    ];
    for (nodes, restarts, skip_bias, seed) in matrix {
        let t = Instant::now();
        let config = DiveConfig {
            seed,
            nodes_per_restart: nodes,
            restarts,
            time_budget: Some(std::time::Duration::from_secs(90)),
            skip_bias,
        };
        let report = dive(&residual, 6, 10, &config);
        let secs = t.elapsed().as_secs_f64();
        match &report.witness {
            Some(dgr) => {
                println!(
                    "nodes={nodes} restarts={restarts} bias={skip_bias} seed={seed}: \
                     FOUND after {} restarts, {} nodes, {secs:.2}s",
                    report.restarts_tried, report.nodes
                );
                for r in dgr.rulers() {
                    println!("    {:?}", r.marks());
                }
            }
            None => {
                println!(
                    "nodes={nodes} restarts={restarts} bias={skip_bias} seed={seed}: \
                     miss ({} restarts, {} nodes, {secs:.1}s)",
                    report.restarts_tried, report.nodes
                );
            }
        }
    }
    println!("total wall: {:.1}s", clock.elapsed().as_secs_f64());
}
