//! Static SVG figures for embeddings and correlation graphs.
//!
//! Generated problems are drawn black and COCO problems red. Graph edges are
//! blue for positive and red for negative correlation, with stroke width
//! proportional to `|r|`. Coordinates are printed with a fixed precision so
//! the output is byte-stable.

use std::f64::consts::PI;
use std::fmt::Write;

use super::correlation::CorrelationGraph;
use super::tsne::Embedding2D;
use crate::error::{Error, Result};
use crate::problem::SetLabel;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
const NODE_RADIUS: f64 = 4.0;
const MAX_STROKE: f64 = 3.0;

pub fn label_colour(l: SetLabel) -> &'static str {
    match l {
        SetLabel::Coco => "red",
        SetLabel::Generated => "black",
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        SIZE / 2.0
    );
}

fn legend(out: &mut String) {
    for (row, (l, name)) in [(SetLabel::Generated, "generated"), (SetLabel::Coco, "COCO")]
        .into_iter()
        .enumerate()
    {
        let y = SIZE - 30.0 + 14.0 * row as f64;
        let _ = writeln!(
            out,
            r#"<rect x="12" y="{:.1}" width="8" height="8" fill="{}"/><text x="26" y="{:.1}" font-family="sans-serif" font-size="11">{name}</text>"#,
            y - 7.0,
            label_colour(l),
            y
        );
    }
}

/// Scatter plot of the embedding; one `<circle>` per row.
pub fn plot_embedding(e: &Embedding2D, title: &str) -> Result<String> {
    if e.rows.is_empty() {
        return Err(Error::InvalidInput("cannot plot an empty embedding".into()));
    }
    let span = |f: fn(&super::tsne::EmbeddingRow) -> f64| {
        let lo = e.rows.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = e.rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        (lo, if hi > lo { hi - lo } else { 1.0 })
    };
    let (x0, xw) = span(|r| r.x);
    let (y0, yw) = span(|r| r.y);
    let inner = SIZE - 2.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, title);
    // generated first so COCO points stay visible on top
    for label in [SetLabel::Generated, SetLabel::Coco] {
        for r in e.rows.iter().filter(|r| r.id.set_label == label) {
            let cx = MARGIN + (r.x - x0) / xw * inner;
            let cy = SIZE - MARGIN - (r.y - y0) / yw * inner;
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{NODE_RADIUS}" fill="{}"><title>{}</title></circle>"#,
                label_colour(label),
                r.id
            );
        }
    }
    legend(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Node positions: COCO on the left arc, generated on the right arc, each
/// in ascending index order.
pub fn arc_layout(g: &CorrelationGraph) -> Vec<(f64, f64)> {
    let centre = SIZE / 2.0;
    let radius = SIZE / 2.0 - MARGIN;
    let mut pos = vec![(0.0, 0.0); g.nodes.len()];
    for (label, from, to) in [
        (SetLabel::Coco, 0.6 * PI, 1.4 * PI),
        (SetLabel::Generated, -0.4 * PI, 0.4 * PI),
    ] {
        let mut members: Vec<usize> = (0..g.nodes.len()).filter(|&i| g.nodes[i].set_label == label).collect();
        members.sort_by_key(|&i| g.nodes[i]);
        let m = members.len();
        for (k, &i) in members.iter().enumerate() {
            let t = if m > 1 { k as f64 / (m - 1) as f64 } else { 0.5 };
            let a = from + t * (to - from);
            pos[i] = (centre + radius * a.cos(), centre - radius * a.sin());
        }
    }
    pos
}

pub fn plot_graph(g: &CorrelationGraph, title: &str) -> Result<String> {
    if g.nodes.is_empty() {
        return Err(Error::InvalidInput("cannot plot an empty graph".into()));
    }
    let pos = arc_layout(g);
    let mut out = String::new();
    header(&mut out, title);
    for e in &g.edges {
        let (a, b) = (pos[e.i], pos[e.j]);
        let colour = if e.r >= 0.0 { "blue" } else { "red" };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="{:.3}" stroke-opacity="0.5"/>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            MAX_STROKE * e.r.abs()
        );
    }
    for (i, id) in g.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{NODE_RADIUS}" fill="{}"><title>{id}</title></circle>"#,
            pos[i].0,
            pos[i].1,
            label_colour(id.set_label)
        );
    }
    legend(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}
