//! Correlates a few coordinate vectors and prints the thresholded graph.
//!
//!     cargo run --example correlation_graph -- 0.9

use elacomp::analysis::{build_graph, pearson_matrix};
use elacomp::problem::ProblemId;

fn main() -> elacomp::error::Result<()> {
    let threshold: f64 = std::env::args().nth(1).map_or(0.9, |a| a.parse().expect("threshold"));
    let coords = vec![
        vec![1.0, 2.0, 3.0, 4.0],
        vec![2.0, 4.1, 6.0, 8.2],
        vec![4.0, 3.0, 2.0, 1.0],
        vec![0.5, 0.1, 0.9, 0.2],
    ];
    let ids = vec![ProblemId::coco(1), ProblemId::generated(0), ProblemId::generated(1), ProblemId::coco(2)];
    let m = pearson_matrix(&coords)?;
    for (id, row) in ids.iter().zip(&m.values) {
        let cells: Vec<String> = row.iter().map(|v| v.map_or("NA".into(), |r| format!("{r:+.3}"))).collect();
        println!("{id:<14} {}", cells.join(" "));
    }
    let g = build_graph(&m, &ids, threshold)?;
    for e in &g.edges {
        println!("{} -- {}  r={:+.4}", ids[e.i], ids[e.j], e.r);
    }
    Ok(())
}
