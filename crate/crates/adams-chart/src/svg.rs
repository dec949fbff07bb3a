//! Deterministic SVG rendering of a chart page.
//!
//! Coordinates are kept as integers in hundredths of a pixel until they are
//! formatted, so output bytes never depend on float printing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    ChartPage, ClassId, ClassNode, EdgeCell, ExtensionKind, Point, Provenance, TauOrder, TowerKind,
    Variant,
};

/// Everything the renderer assigns a color to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticKind {
    Grid,
    Label,
    ClassicalClass,
    FreeClass,
    /// M2/τ^k, k in 1..=4.
    TorsionClass(u32),
    BottomCellClass,
    TopCellClass,
    HiddenTauMarker,
    Struct(EdgeCell),
    /// Struct lines with coefficient τ^p, p in 1..=4.
    TauStruct(u8),
    /// Differentials by page, 2..=5.
    Differential(u8),
    /// Differentials with coefficient τ^p, p in 1..=4.
    TauDifferential(u8),
    Extension(ExtensionKind),
    Tower,
}

impl SemanticKind {
    /// Every kind a chart can contain.
    pub fn all() -> Vec<SemanticKind> {
        let mut v = vec![
            SemanticKind::Grid,
            SemanticKind::Label,
            SemanticKind::ClassicalClass,
            SemanticKind::FreeClass,
        ];
        v.extend((1..=4).map(SemanticKind::TorsionClass));
        v.extend([
            SemanticKind::BottomCellClass,
            SemanticKind::TopCellClass,
            SemanticKind::HiddenTauMarker,
        ]);
        v.extend(
            [
                EdgeCell::Plain,
                EdgeCell::BottomCell,
                EdgeCell::TopCell,
                EdgeCell::Undetected,
            ]
            .map(SemanticKind::Struct),
        );
        v.extend((1..=4).map(SemanticKind::TauStruct));
        v.extend((2..=5).map(SemanticKind::Differential));
        v.extend((1..=4).map(SemanticKind::TauDifferential));
        v.extend(
            [
                ExtensionKind::Two,
                ExtensionKind::Eta,
                ExtensionKind::Nu,
                ExtensionKind::Tau,
            ]
            .map(SemanticKind::Extension),
        );
        v.push(SemanticKind::Tower);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("style has no entry for {0:?}")]
    IncompleteStyle(SemanticKind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleProfile {
    /// Pixels per chart unit.
    pub unit: i64,
    /// In pixels.
    pub dot_radius: i64,
    pub colors: BTreeMap<SemanticKind, String>,
    /// stroke-dasharray for uncertain edges.
    pub dash: String,
    /// stroke-dasharray for may-be-hidden products.
    pub dot: String,
    pub font_size: i64,
    /// Chart units between grid lines.
    pub grid_spacing: i32,
}

impl Default for StyleProfile {
    fn default() -> Self {
        let mut colors = BTreeMap::new();
        let mut set = |k, c: &str| {
            colors.insert(k, c.to_string());
        };
        set(SemanticKind::Grid, "#dddddd");
        set(SemanticKind::Label, "#000000");
        set(SemanticKind::ClassicalClass, "#000000");
        set(SemanticKind::FreeClass, "#000000");
        set(SemanticKind::TorsionClass(1), "#d62728");
        set(SemanticKind::TorsionClass(2), "#1f77b4");
        set(SemanticKind::TorsionClass(3), "#2ca02c");
        set(SemanticKind::TorsionClass(4), "#9467bd");
        set(SemanticKind::BottomCellClass, "#000000");
        set(SemanticKind::TopCellClass, "#d62728");
        set(SemanticKind::HiddenTauMarker, "#000000");
        set(SemanticKind::Struct(EdgeCell::Plain), "#555555");
        set(SemanticKind::Struct(EdgeCell::BottomCell), "#555555");
        set(SemanticKind::Struct(EdgeCell::TopCell), "#d62728");
        set(SemanticKind::Struct(EdgeCell::Undetected), "#1f77b4");
        set(SemanticKind::TauStruct(1), "#e377c2");
        set(SemanticKind::TauStruct(2), "#ff7f0e");
        set(SemanticKind::TauStruct(3), "#8c564b");
        set(SemanticKind::TauStruct(4), "#bcbd22");
        set(SemanticKind::Differential(2), "#17becf");
        set(SemanticKind::Differential(3), "#d62728");
        set(SemanticKind::Differential(4), "#2ca02c");
        set(SemanticKind::Differential(5), "#9467bd");
        set(SemanticKind::TauDifferential(1), "#1f77b4");
        set(SemanticKind::TauDifferential(2), "#ff7f0e");
        set(SemanticKind::TauDifferential(3), "#8c564b");
        set(SemanticKind::TauDifferential(4), "#e377c2");
        set(SemanticKind::Extension(ExtensionKind::Two), "#ff00ff");
        set(SemanticKind::Extension(ExtensionKind::Eta), "#ff00ff");
        set(SemanticKind::Extension(ExtensionKind::Nu), "#ff00ff");
        set(SemanticKind::Extension(ExtensionKind::Tau), "#7f7f7f");
        set(SemanticKind::Tower, "#555555");
        StyleProfile {
            unit: 20,
            dot_radius: 3,
            colors,
            dash: "4 3".to_string(),
            dot: "1 2".to_string(),
            font_size: 7,
            grid_spacing: 2,
        }
    }
}

const MARGIN: i64 = 20;
/// Label distance from its class, in hundredths of a unit.
const LABEL_OFFSET: f64 = 30.0;
/// Length of a tower arrow in chart steps.
const TOWER_STEPS: i32 = 2;
/// Fraction (in hundredths) of a d_r drawn for an arrow without a target.
const ARROW_FRACTION: i32 = 60;

/// Fixed-point hundredths with trailing zeros trimmed.
fn fixed(v: i64) -> String {
    let sign = if v < 0 { "-" } else { "" };
    let a = v.abs();
    let (int, frac) = (a / 100, a % 100);
    match frac {
        0 => format!("{sign}{int}"),
        f if f % 10 == 0 => format!("{sign}{int}.{}", f / 10),
        f => format!("{sign}{int}.{f:02}"),
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

struct Frame<'a> {
    style: &'a StyleProfile,
    max_f: i32,
}

impl Frame<'_> {
    /// Chart position in hundredths of a unit to pixel hundredths, y up.
    fn px(&self, p: Point) -> (i64, i64) {
        let u = self.style.unit;
        let x = MARGIN * 100 + i64::from(p.x) * u;
        let y = MARGIN * 100 + (i64::from(self.max_f) * 100 - i64::from(p.y)) * u;
        (x, y)
    }

    fn at(&self, p: Point) -> String {
        let (x, y) = self.px(p);
        format!("{} {}", fixed(x), fixed(y))
    }

    fn color(&self, kind: SemanticKind) -> &str {
        &self.style.colors[&kind]
    }
}

fn pos(id: &ClassId) -> Point {
    Point {
        x: id.stem * 100 + i32::from(id.nudge) * 10,
        y: id.filtration * 100,
    }
}

fn class_kind(variant: Variant, node: &ClassNode) -> SemanticKind {
    if node.hidden_tau_marker {
        return SemanticKind::HiddenTauMarker;
    }
    match (variant, node.provenance, node.tau_order) {
        (_, Provenance::BottomCell, _) => SemanticKind::BottomCellClass,
        (_, Provenance::TopCell, _) => SemanticKind::TopCellClass,
        (Variant::Classical, _, _) => SemanticKind::ClassicalClass,
        (_, _, TauOrder::Free) => SemanticKind::FreeClass,
        (_, _, TauOrder::Torsion(k)) => SemanticKind::TorsionClass(k),
    }
}

fn stroke(frame: &Frame, kind: SemanticKind, uncertain: bool, may_hidden: bool) -> String {
    let mut s = format!("stroke=\"{}\"", frame.color(kind));
    if uncertain {
        let _ = write!(s, " stroke-dasharray=\"{}\"", frame.style.dash);
    } else if may_hidden {
        let _ = write!(s, " stroke-dasharray=\"{}\"", frame.style.dot);
    }
    s
}

/// Checks that `style` covers every kind the chart uses and every kind in
/// [`SemanticKind::all`].
fn check_style(chart: &ChartPage, style: &StyleProfile) -> Result<(), RenderError> {
    let mut needed = SemanticKind::all();
    needed.extend(chart.classes.values().map(|n| class_kind(chart.variant, n)));
    needed.extend(
        chart
            .struct_edges
            .iter()
            .filter(|e| e.tau_power > 0)
            .map(|e| SemanticKind::TauStruct(e.tau_power)),
    );
    needed.extend(
        chart
            .diff_edges
            .iter()
            .map(|e| SemanticKind::Differential(e.page)),
    );
    needed.extend(
        chart
            .diff_arrows
            .iter()
            .map(|e| SemanticKind::Differential(e.page)),
    );
    needed.extend(
        chart
            .diff_edges
            .iter()
            .filter(|e| e.tau_power > 0)
            .map(|e| SemanticKind::TauDifferential(e.tau_power)),
    );
    needed.extend(
        chart
            .diff_arrows
            .iter()
            .filter(|e| e.tau_power > 0)
            .map(|e| SemanticKind::TauDifferential(e.tau_power)),
    );
    match needed.into_iter().find(|k| !style.colors.contains_key(k)) {
        Some(k) => Err(RenderError::IncompleteStyle(k)),
        None => Ok(()),
    }
}

/// Renders `chart` as a standalone SVG 1.1 document.
///
/// Each class becomes one `circle` (or `rect` for a hidden-τ marker) and
/// each edge, arrow and tower one `path`; grid lines are `line` elements.
pub fn render(chart: &ChartPage, style: &StyleProfile) -> Result<String, RenderError> {
    check_style(chart, style)?;
    let spacing = style.grid_spacing.max(1);
    let round_up = |v: i32| (v.max(0) + spacing) / spacing * spacing;
    let max_s = round_up(chart.classes.keys().map(|id| id.stem).max().unwrap_or(0));
    let max_f = round_up(
        chart
            .classes
            .keys()
            .map(|id| id.filtration)
            .max()
            .unwrap_or(0),
    );
    let frame = Frame { style, max_f };
    let u = style.unit;
    let width = 2 * MARGIN + i64::from(max_s) * u;
    let height = 2 * MARGIN + i64::from(max_f) * u;

    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "<title>{} {}</title>",
        chart.tag(),
        chart.page.as_str()
    );
    let _ = writeln!(
        out,
        "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\"><polygon points=\"0 0 6 3 0 6\" fill=\"context-stroke\"/></marker></defs>"
    );

    let _ = writeln!(
        out,
        "<g id=\"grid\" stroke=\"{}\" stroke-width=\"0.5\">",
        frame.color(SemanticKind::Grid)
    );
    for s in (0..=max_s).step_by(spacing as usize) {
        let (a, b) = (
            frame.at(Point { x: s * 100, y: 0 }),
            frame.at(Point {
                x: s * 100,
                y: max_f * 100,
            }),
        );
        let (a, b) = (a.split_once(' ').unwrap(), b.split_once(' ').unwrap());
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    for f in (0..=max_f).step_by(spacing as usize) {
        let (a, b) = (
            frame.at(Point { x: 0, y: f * 100 }),
            frame.at(Point {
                x: max_s * 100,
                y: f * 100,
            }),
        );
        let (a, b) = (a.split_once(' ').unwrap(), b.split_once(' ').unwrap());
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    for s in (0..=max_s).step_by(spacing as usize) {
        let (x, y) = frame.px(Point { x: s * 100, y: 0 });
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" stroke=\"none\" fill=\"{}\">{s}</text>",
            fixed(x),
            fixed(y + 12 * 100),
            style.font_size,
            frame.color(SemanticKind::Label)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, "<g id=\"edges\" fill=\"none\" stroke-width=\"1\">");
    for e in &chart.struct_edges {
        let kind = if e.tau_power > 0 {
            SemanticKind::TauStruct(e.tau_power)
        } else {
            SemanticKind::Struct(e.cell)
        };
        let _ = writeln!(
            out,
            "<path d=\"M {} L {}\" {}/>",
            frame.at(pos(&e.source)),
            frame.at(pos(&e.target)),
            stroke(&frame, kind, e.uncertain, e.may_hidden)
        );
    }
    for e in &chart.diff_edges {
        let kind = if e.tau_power > 0 {
            SemanticKind::TauDifferential(e.tau_power)
        } else {
            SemanticKind::Differential(e.page)
        };
        let _ = writeln!(
            out,
            "<path d=\"M {} L {}\" {}/>",
            frame.at(pos(&e.source)),
            frame.at(pos(&e.target)),
            stroke(&frame, kind, e.uncertain, false)
        );
    }
    for a in &chart.diff_arrows {
        let kind = if a.tau_power > 0 {
            SemanticKind::TauDifferential(a.tau_power)
        } else {
            SemanticKind::Differential(a.page)
        };
        let p = pos(&a.source);
        let q = Point {
            x: p.x - ARROW_FRACTION,
            y: p.y + i32::from(a.page) * ARROW_FRACTION,
        };
        let _ = writeln!(
            out,
            "<path d=\"M {} L {}\" {} marker-end=\"url(#head)\"/>",
            frame.at(p),
            frame.at(q),
            stroke(&frame, kind, a.uncertain, false)
        );
    }
    for e in &chart.extension_edges {
        let kind = SemanticKind::Extension(e.kind);
        let d = match e.via {
            Some([c1, c2]) => {
                format!(
                    "M {} C {} {} {}",
                    frame.at(pos(&e.source)),
                    frame.at(c1),
                    frame.at(c2),
                    frame.at(pos(&e.target))
                )
            }
            None => format!(
                "M {} L {}",
                frame.at(pos(&e.source)),
                frame.at(pos(&e.target))
            ),
        };
        let _ = writeln!(
            out,
            "<path d=\"{d}\" {}/>",
            stroke(&frame, kind, e.uncertain, false)
        );
    }
    for t in &chart.towers {
        let p = pos(&t.base);
        let (ds, df) = match t.kind {
            TowerKind::H0 => (0, 1),
            TowerKind::H1 => (1, 1),
        };
        let q = Point {
            x: p.x + ds * TOWER_STEPS * 100,
            y: p.y + df * TOWER_STEPS * 100,
        };
        let _ = writeln!(
            out,
            "<path d=\"M {} L {}\" {} marker-end=\"url(#head)\"/>",
            frame.at(p),
            frame.at(q),
            stroke(&frame, SemanticKind::Tower, false, false)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, "<g id=\"classes\" stroke=\"none\">");
    let r = style.dot_radius;
    for node in chart.classes.values() {
        let color = frame.color(class_kind(chart.variant, node));
        let (x, y) = frame.px(pos(&node.id));
        if node.hidden_tau_marker {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\"/>",
                fixed(x - r * 100),
                fixed(y - r * 100),
                2 * r,
                2 * r
            );
        } else {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{color}\"/>",
                fixed(x),
                fixed(y)
            );
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        "<g id=\"labels\" font-size=\"{}\" fill=\"{}\" text-anchor=\"middle\">",
        style.font_size,
        frame.color(SemanticKind::Label)
    );
    for node in chart.classes.values() {
        let Some(label) = &node.label else { continue };
        let theta = f64::from(label.angle).to_radians();
        let p = pos(&node.id);
        let q = Point {
            x: p.x + (LABEL_OFFSET * theta.cos()).round() as i32,
            y: p.y + (LABEL_OFFSET * theta.sin()).round() as i32,
        };
        let (x, y) = frame.px(q);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            fixed(x),
            fixed(y),
            xml_escape(&label.text)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
