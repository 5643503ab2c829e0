//! Embeds two Gaussian clusters with t-SNE and writes the scatter plot.
//!
//!     cargo run --release --example tsne_embedding -- /tmp/tsne.svg

use elacomp::analysis::{plot_embedding, silhouette, tsne, TsneParams};
use elacomp::problem::ProblemId;
use elacomp::rng;
use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> elacomp::error::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "tsne.svg".into());
    let mut r = rng::stream(&[3]);
    let mut ids = Vec::new();
    let mut coords = Vec::new();
    for i in 0..60u64 {
        let (id, centre) = if i < 20 { (ProblemId::coco(i as u32 + 1), 4.0) } else { (ProblemId::generated(i), 0.0) };
        ids.push(id);
        coords.push((0..4).map(|_| centre + r.sample::<f64, _>(StandardNormal)).collect::<Vec<f64>>());
    }
    let params = TsneParams {
        perplexity: 10.0,
        ..TsneParams::default()
    };
    let e = tsne(&ids, &coords, &params)?;
    println!("KL {:.4} -> {:.4}", e.initial_kl, e.final_kl);
    let xy: Vec<Vec<f64>> = e.rows.iter().map(|r| vec![r.x, r.y]).collect();
    let row_ids: Vec<ProblemId> = e.rows.iter().map(|r| r.id).collect();
    let report = silhouette(&xy, &row_ids, "example")?;
    println!("silhouette {:.3}", report.silhouette);
    elacomp::io::write_bytes(out.as_ref(), plot_embedding(&e, "two clusters")?.as_bytes())?;
    println!("wrote {out}");
    Ok(())
}
