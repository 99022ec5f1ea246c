use golomb::exact::{find_dgr_exact, SearchConfig, SearchOutcome};
use golomb::format::emit_dgr_file;

fn main() {
    let shapes = [(4u32, 5u32), (5, 5), (6, 5), (5, 6), (6, 6), (6, 7)];
    let mut blocks = Vec::new();
    for (i, j) in shapes {
        match find_dgr_exact(i, j, i * j, &SearchConfig::default()).unwrap() {
            SearchOutcome::Witness(w) => blocks.push(w),
            other => panic!("({i},{j}): {other:?}"),
        }
    }
    print!("{}", emit_dgr_file(&blocks));
}
