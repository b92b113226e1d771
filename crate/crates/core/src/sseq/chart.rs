//! SVG and plain-text charts of pages.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::sseq::page::PageSnapshot;

#[derive(Clone, Debug)]
pub struct ChartOptions {
    /// Grid spacing in pixels.
    pub cell: u32,
    pub max_stem: Option<i64>,
    pub max_filtration: Option<u32>,
}

impl Default for ChartOptions {
    fn default() -> Self {
        ChartOptions {
            cell: 16,
            max_stem: None,
            max_filtration: None,
        }
    }
}

struct Frame {
    min_x: i64,
    max_x: i64,
    max_s: u32,
}

fn frame(pages: &[PageSnapshot], opts: &ChartOptions) -> Frame {
    let xs = pages.iter().flat_map(|p| p.entries.iter().map(|e| e.0));
    let min_x = xs.clone().min().unwrap_or(0).min(0);
    let max_x = opts
        .max_stem
        .unwrap_or_else(|| pages.iter().map(|p| p.stem_bound).max().unwrap_or(0));
    let max_s = opts.max_filtration.unwrap_or_else(|| {
        pages
            .iter()
            .flat_map(|p| p.entries.iter().map(|e| e.1))
            .max()
            .unwrap_or(0)
    });
    Frame { min_x, max_x, max_s }
}

/// One panel per page, stacked vertically. Each class is a dot at
/// `(stem, filtration)`; each unit of differential rank is a line from
/// source to target; stems past the trusted region are shaded.
pub fn render_svg(pages: &[PageSnapshot], opts: &ChartOptions) -> String {
    let f = frame(pages, opts);
    let c = opts.cell as i64;
    let margin = 2 * c;
    let panel_w = (f.max_x - f.min_x + 1) * c;
    let panel_h = (f.max_s as i64 + 1) * c;
    let width = panel_w + 2 * margin;
    let height = (panel_h + 2 * margin) * pages.len().max(1) as i64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="10">"#
    );
    for (pi, page) in pages.iter().enumerate() {
        let top = pi as i64 * (panel_h + 2 * margin) + margin;
        let cx = |x: i64| margin + (x - f.min_x) * c + c / 2;
        let cy = |y: u32| top + (f.max_s as i64 - y as i64) * c + c / 2;
        let _ = writeln!(s, r#"<g class="page" data-r="{}">"#, page.r);
        let _ = writeln!(s, r#"<text x="{}" y="{}">E{}</text>"#, margin, top - 4, page.r);
        if page.trusted_max_stem < f.max_x {
            let x0 = margin + (page.trusted_max_stem + 1 - f.min_x) * c;
            let w = (f.max_x - page.trusted_max_stem) * c;
            let _ = writeln!(
                s,
                r##"<rect class="boundary" x="{x0}" y="{top}" width="{w}" height="{panel_h}" fill="#eeeeee"/>"##
            );
        }
        for x in f.min_x..=f.max_x {
            let gx = margin + (x - f.min_x) * c;
            let stroke = if x % 4 == 0 { "#cccccc" } else { "#f0f0f0" };
            let _ = writeln!(
                s,
                r#"<line x1="{gx}" y1="{top}" x2="{gx}" y2="{}" stroke="{stroke}"/>"#,
                top + panel_h
            );
            if x % 4 == 0 {
                let _ = writeln!(s, r#"<text x="{gx}" y="{}">{x}</text>"#, top + panel_h + 12);
            }
        }
        for &(x, y, d) in &page.entries {
            if x > f.max_x || y > f.max_s {
                continue;
            }
            let cols = (d as f64).sqrt().ceil() as i64;
            let step = c / (cols + 1);
            for i in 0..d as i64 {
                let (col, row) = (i % cols, i / cols);
                let px = cx(x) - c / 2 + step * (col + 1);
                let py = cy(y) - c / 2 + step * (row + 1);
                let _ = writeln!(s, r#"<circle cx="{px}" cy="{py}" r="2"/>"#);
            }
        }
        for &((x, y), (tx, ty)) in &page.differentials {
            if x > f.max_x || tx > f.max_x || y > f.max_s || ty > f.max_s {
                continue;
            }
            let _ = writeln!(
                s,
                r#"<line class="d" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
                cx(x),
                cy(y),
                cx(tx),
                cy(ty)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Per-bidegree counts; `.` for zero, `#` marks untrusted stems in the header.
pub fn render_text(page: &PageSnapshot) -> String {
    let f = frame(std::slice::from_ref(page), &ChartOptions::default());
    let dims: BTreeMap<(i64, u32), usize> =
        page.entries.iter().map(|&(x, s, d)| ((x, s), d)).collect();
    let mut out = format!("E{}  stems {}..{}, trusted through {}\n", page.r, f.min_x, f.max_x, page.trusted_max_stem);
    for s in (0..=f.max_s).rev() {
        let _ = write!(out, "{s:>3} |");
        for x in f.min_x..=f.max_x {
            match dims.get(&(x, s)) {
                Some(d) => {
                    let _ = write!(out, "{d:>3}");
                }
                None => out.push_str("  ."),
            }
        }
        out.push('\n');
    }
    out.push_str("    +");
    for x in f.min_x..=f.max_x {
        out.push_str(if x > page.trusted_max_stem { "  #" } else { "---" });
    }
    out.push_str("\n     ");
    for x in f.min_x..=f.max_x {
        let _ = write!(out, "{:>3}", x);
    }
    out.push('\n');
    out
}
