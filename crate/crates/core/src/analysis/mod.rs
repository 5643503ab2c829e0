//! Complementarity analysis over subspace coordinates: t-SNE embedding,
//! Pearson correlation graph, silhouette separation and SVG figures.

pub mod correlation;
pub mod plot;
pub mod silhouette;
pub mod tsne;

pub use correlation::{build_graph, pearson_matrix, CorrMatrix, CorrelationGraph, Edge};
pub use plot::{plot_embedding, plot_graph};
pub use silhouette::{silhouette, SeparationReport};
pub use tsne::{tsne, Embedding2D, EmbeddingRow, TsneParams};
