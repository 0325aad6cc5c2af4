//! Ratio tables as aligned text, comma-separated values or an SVG bar chart.

use std::fmt::Write as _;

use clap::ValueEnum;
use gyrobench_core::report::RatioTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dsv,
    Svg,
}

pub fn render(table: &RatioTable, format: Format) -> String {
    match format {
        Format::Text => text(table),
        Format::Dsv => dsv(table),
        Format::Svg => svg(table),
    }
}

/// `x` to three significant digits.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (2 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn caption(table: &RatioTable) -> String {
    format!(
        "sections {} = {}, baseline {}, normalized {}",
        table.sections.name,
        table.sections.describe(),
        table.baseline,
        table.norm
    )
}

pub fn text(table: &RatioTable) -> String {
    let head = [
        "input",
        "system",
        "processor",
        "xpu",
        "nodes",
        "seconds",
        "ratio",
    ];
    let rows: Vec<[String; 7]> = table
        .rows
        .iter()
        .map(|r| {
            [
                r.input.clone(),
                r.system.clone(),
                r.label.clone(),
                r.n_xpu.to_string(),
                r.n_nodes.to_string(),
                format!("{:.3}", r.seconds),
                r.ratio.map_or_else(|| "n/a".into(), sig3),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = format!("# {}\n", caption(table));
    let mut line = |cells: &[&str]| {
        let mut s = String::new();
        for (k, (cell, w)) in cells.iter().zip(width).enumerate() {
            // text columns left, numbers right
            if k < 3 {
                let _ = write!(s, "{cell:<w$}  ");
            } else {
                let _ = write!(s, "{cell:>w$}  ");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&head);
    for r in &rows {
        line(&r.each_ref().map(String::as_str));
    }
    out
}

pub const DSV_HEADER: [&str; 8] = [
    "input", "system", "xpu_type", "n_xpu", "n_nodes", "sections", "seconds", "ratio",
];

pub fn dsv(table: &RatioTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DSV_HEADER).expect("writing to memory");
    let sections = table.sections.describe();
    for r in &table.rows {
        w.write_record([
            r.input.as_str(),
            &r.system,
            &r.xpu_type,
            &r.n_xpu.to_string(),
            &r.n_nodes.to_string(),
            &sections,
            &format!("{:.6}", r.seconds),
            &r.ratio.map_or_else(|| "n/a".into(), |x| format!("{x}")),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];

/// Grouped bar chart: one group per input, one `<rect>` per row with a
/// ratio. Rows without a ratio get an "n/a" mark instead of a bar.
pub fn svg(table: &RatioTable) -> String {
    const BAR: f64 = 16.0;
    const GAP: f64 = 24.0;
    const LEFT: f64 = 56.0;
    const TOP: f64 = 40.0;
    const PLOT_H: f64 = 240.0;

    let inputs = table.inputs();
    let mut labels: Vec<&str> = Vec::new();
    for r in &table.rows {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    let color = |label: &str| {
        let k = labels.iter().position(|l| *l == label).unwrap_or(0);
        PALETTE[k % PALETTE.len()]
    };
    let top = table
        .rows
        .iter()
        .filter_map(|r| r.ratio)
        .fold(1.0f64, f64::max)
        * 1.1;
    let y = |v: f64| TOP + PLOT_H * (1.0 - v / top);
    let group_w: Vec<f64> = inputs
        .iter()
        .map(|i| table.rows.iter().filter(|r| r.input == *i).count() as f64 * BAR)
        .collect();
    let plot_w = group_w.iter().sum::<f64>() + GAP * (inputs.len() as f64 + 1.0);
    let legend_x = LEFT + plot_w + 20.0;
    let width = legend_x + 140.0;
    let height = TOP + PLOT_H + 50.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="20" font-size="13">Relative performance: {}</text>"#,
        xml_escape(&caption(table))
    );
    let base = y(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="#000"/>"##,
        LEFT + plot_w
    );
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base:.1}" stroke="#000"/>"##
    );
    let one = y(1.0);
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{one:.1}" x2="{:.1}" y2="{one:.1}" stroke="#888" stroke-dasharray="4 3"/>"##,
        LEFT + plot_w
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1.0</text>"#,
        LEFT - 4.0,
        one + 4.0
    );

    let mut x = LEFT + GAP;
    for (input, w) in inputs.iter().zip(&group_w) {
        let _ = writeln!(s, r#"<g class="group" data-input="{}">"#, xml_escape(input));
        for r in table.rows.iter().filter(|r| r.input == *input) {
            match r.ratio {
                Some(v) => {
                    let _ = writeln!(
                        s,
                        r#"<rect x="{x:.1}" y="{:.1}" width="{BAR}" height="{:.1}" fill="{}"><title>{} {}: {}</title></rect>"#,
                        y(v),
                        base - y(v),
                        color(&r.label),
                        xml_escape(input),
                        xml_escape(&r.label),
                        sig3(v)
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="8">n/a</text>"#,
                        x + BAR / 2.0,
                        base - 3.0
                    );
                }
            }
            x += BAR;
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x - w / 2.0,
            base + 16.0,
            xml_escape(input)
        );
        s.push_str("</g>\n");
        x += GAP;
    }

    for (k, label) in labels.iter().enumerate() {
        let ly = TOP + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{legend_x:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="8"/>"#,
            legend_x + 14.0,
            color(label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            legend_x + 20.0,
            ly + 4.0,
            xml_escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}
