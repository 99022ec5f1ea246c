use golomb::exact::{search_disjoint, SearchConfig, SearchOutcome};
use golomb::ruler::MarkUniverse;
use std::time::Instant;
fn main() {
    let carried: Vec<u32> = vec![10, 11, 16, 20, 33, 36, 44, 51, 63, 65];
    let residual = MarkUniverse::range(74).without(&carried);
    let t = Instant::now();
    let config = SearchConfig::with_node_budget(50_000_000);
    match search_disjoint(&residual, 6, 10, &config).expect("no frontier replay") {
        SearchOutcome::Witness(dgr) => {
            println!("WITNESS in {:.1}s", t.elapsed().as_secs_f64());
            for r in dgr.rulers() {
                println!("  {:?}", r.marks());
            }
        }
        SearchOutcome::ProvenAbsent => println!("ABSENT?! {:.1}s", t.elapsed().as_secs_f64()),
        SearchOutcome::BudgetExhausted(f) => println!(
            "budget out at {} nodes, {:.1}s",
            f.nodes,
            t.elapsed().as_secs_f64()
        ),
    }
}
