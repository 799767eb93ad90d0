//! CSV, JSON and SVG writers. Floats in CSV carry 17 significant digits.

use std::fmt::Write as _;

use explab::analysis::SampleTable;
use explab::{ConditionReport, GridClassification, GridLabel, Point, Rect};
use serde_json::{json, Map, Value};

/// `{:.16e}`, with `nan`, `inf` and `-inf` spelled out.
pub fn float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => float(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// CSV text with a header row.
#[derive(Clone, Debug)]
pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: format!("{}\n", header.join(",")),
            width: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.width);
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Columns listed in `integer_columns` are written without an exponent.
pub fn table_csv(table: &SampleTable, integer_columns: &[&str]) -> String {
    let header: Vec<&str> = table.columns.iter().map(String::as_str).collect();
    let is_int: Vec<bool> = header.iter().map(|c| integer_columns.contains(c)).collect();
    let mut csv = Csv::new(&header);
    for row in &table.rows {
        let cells: Vec<Cell> = row
            .iter()
            .zip(&is_int)
            .map(|(&v, &int)| if int { Cell::I(v as i64) } else { Cell::F(v) })
            .collect();
        csv.row(&cells);
    }
    csv.into_string()
}

/// `{condition_id, parameters, columns, samples, verdict}` with `extra`
/// merged into the parameters.
pub fn report_json(report: &ConditionReport, extra: &Map<String, Value>) -> Value {
    let mut parameters = report.parameters.clone();
    for (k, v) in extra {
        parameters.insert(k.clone(), v.clone());
    }
    json!({
        "condition_id": report.condition_id,
        "parameters": parameters,
        "columns": report.samples.columns,
        "samples": report.samples.rows,
        "verdict": report.verdict,
    })
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn label_color(label: GridLabel) -> &'static str {
    match label {
        GridLabel::MemberInComponent => "#1f77b4",
        GridLabel::MemberOffComponent => "#9ecae1",
        GridLabel::Escapes => "#f2f2f2",
        GridLabel::Undecided => "#ffbf00",
        GridLabel::OutOfDomain => "#808080",
    }
}

fn svg_open(view: Rect) -> String {
    let (w, h) = (view.xmax - view.xmin, view.ymax - view.ymin);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="{}">"#,
        view.xmin,
        -view.ymax,
        w,
        h,
        if w > 0.0 {
            (600.0 * h / w).round().max(1.0)
        } else {
            600.0
        }
    )
    .unwrap();
    // Flip y so the plot reads with y pointing up.
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    s
}

fn svg_close(mut s: String) -> String {
    s.push_str("</g>\n</svg>\n");
    s
}

/// One `<path>` per curve.
pub fn svg_curves(view: Rect, curves: &[(&str, &[Point])]) -> String {
    let mut s = svg_open(view);
    for (name, pts) in curves {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, p.x, p.y);
        }
        writeln!(
            s,
            r#"<path id="{name}" d="{d}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#
        )
        .unwrap();
    }
    svg_close(s)
}

/// One `<rect>` per grid node, centered on it and colored by label.
pub fn svg_grid(g: &GridClassification) -> String {
    let half = g.resolution / 2.0;
    let first = g.node(0, 0);
    let last = g.node(g.nx - 1, g.ny - 1);
    let view = Rect {
        xmin: first.x - half,
        xmax: last.x + half,
        ymin: first.y - half,
        ymax: last.y + half,
    };
    let mut s = svg_open(view);
    for (_, _, p, label) in g.cells() {
        writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" class="{}"/>"#,
            p.x - half,
            p.y - half,
            g.resolution,
            g.resolution,
            label_color(label),
            label.as_str()
        )
        .unwrap();
    }
    svg_close(s)
}

/// CSV `ix,iy,x,y,label`.
pub fn grid_csv(g: &GridClassification) -> String {
    let mut csv = Csv::new(&["ix", "iy", "x", "y", "label"]);
    for (ix, iy, p, label) in g.cells() {
        csv.row(&[
            Cell::I(ix as i64),
            Cell::I(iy as i64),
            Cell::F(p.x),
            Cell::F(p.y),
            Cell::S(label.as_str().into()),
        ]);
    }
    csv.into_string()
}

pub fn points_csv(header: [&str; 2], pts: &[Point]) -> String {
    let mut csv = Csv::new(&header);
    for p in pts {
        csv.row(&[Cell::F(p.x), Cell::F(p.y)]);
    }
    csv.into_string()
}
