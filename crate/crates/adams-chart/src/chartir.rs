//! `chartir`: a canonical, line-oriented text form of a [`ChartPage`].
//!
//! ```text
//! chartir 1
//! variant motivic
//! page E2
//! window classes 70
//! class 0,0,0 free none - 0 $h_0$
//! struct 0,0,0 0,1,0 h0 0 plain -
//! diff 41,4,0 40,6,0 2 1 -
//! arrow 40,4,0 2 0 uncertain
//! ext 3,2,0 3,3,0 two - 280,230;290,290
//! tower 0,0,0 h0_tower -
//! ```
//!
//! Fields are separated by one space. `-` stands for "none" (no flags, no
//! label, straight extension). Label text is percent-escaped; the empty label
//! is written `%`. Classes come first in id order, then edges by species and
//! then by their own ordering.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    ChartPage, ClassId, ClassNode, CompletenessWindow, DiffArrow, DiffEdge, EdgeCell,
    ExtensionEdge, ExtensionKind, Label, PageKind, Point, Provenance, StructEdge, StructKind,
    TowerArrow, TowerKind, Variant,
};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartirError {
    #[error("missing 'chartir {VERSION}' header")]
    MissingHeader,
    #[error("unsupported chartir version {0}")]
    VersionMismatch(String),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: record is out of canonical order")]
    NonCanonical { line: usize },
}

fn flags(set: &[(&str, bool)]) -> String {
    let on: Vec<&str> = set.iter().filter(|(_, b)| *b).map(|(n, _)| *n).collect();
    if on.is_empty() {
        "-".to_string()
    } else {
        on.join(",")
    }
}

pub fn escape(text: &str) -> String {
    if text.is_empty() {
        return "%".to_string();
    }
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if c == '%' || c == '-' || c.is_control() || c.is_whitespace() {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "%{b:02X}");
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn unescape(field: &str) -> Option<String> {
    if field == "%" {
        return Some(String::new());
    }
    let bytes = field.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = field.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

fn class_record(n: &ClassNode) -> String {
    let (angle, name) = match &n.label {
        Some(l) => (l.angle.to_string(), escape(&l.text)),
        None => ("-".to_string(), "-".to_string()),
    };
    format!(
        "class {} {} {} {} {} {}",
        n.id,
        n.tau_order,
        n.provenance.as_str(),
        flags(&[("marker", n.hidden_tau_marker)]),
        angle,
        name
    )
}

fn struct_record(e: &StructEdge) -> String {
    format!(
        "struct {} {} {} {} {} {}",
        e.source,
        e.target,
        e.kind.as_str(),
        e.tau_power,
        e.cell.as_str(),
        flags(&[("may_hidden", e.may_hidden), ("uncertain", e.uncertain)])
    )
}

fn diff_record(e: &DiffEdge) -> String {
    format!(
        "diff {} {} {} {} {}",
        e.source,
        e.target,
        e.page,
        e.tau_power,
        flags(&[("uncertain", e.uncertain)])
    )
}

fn arrow_record(e: &DiffArrow) -> String {
    format!(
        "arrow {} {} {} {}",
        e.source,
        e.page,
        e.tau_power,
        flags(&[("uncertain", e.uncertain)])
    )
}

fn ext_record(e: &ExtensionEdge) -> String {
    let via = match e.via {
        Some([a, b]) => format!("{},{};{},{}", a.x, a.y, b.x, b.y),
        None => "-".to_string(),
    };
    format!(
        "ext {} {} {} {} {}",
        e.source,
        e.target,
        e.kind.as_str(),
        flags(&[("uncertain", e.uncertain)]),
        via
    )
}

fn tower_record(t: &TowerArrow) -> String {
    format!(
        "tower {} {} {}",
        t.base,
        t.kind.as_str(),
        flags(&[("tau_annihilated", t.tau_annihilated)])
    )
}

/// Writes the canonical text of `chart`. Edge lists are emitted sorted
/// regardless of the order they are stored in.
pub fn serialize(chart: &ChartPage) -> String {
    let mut c = chart.clone();
    c.normalize();
    let mut out = format!(
        "chartir {VERSION}\nvariant {}\npage {}\n",
        c.variant.as_str(),
        c.page.as_str()
    );
    for w in &c.windows {
        let _ = writeln!(out, "window {} {}", w.feature.as_str(), w.max_stem);
    }
    let lines = c
        .classes
        .values()
        .map(class_record)
        .chain(c.struct_edges.iter().map(struct_record))
        .chain(c.diff_edges.iter().map(diff_record))
        .chain(c.diff_arrows.iter().map(arrow_record))
        .chain(c.extension_edges.iter().map(ext_record))
        .chain(c.towers.iter().map(tower_record));
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// One parsed body record, ordered the way canonical documents list them.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Record {
    Window(CompletenessWindow),
    Class(ClassId),
    Struct(StructEdge),
    Diff(DiffEdge),
    Arrow(DiffArrow),
    Ext(ExtensionEdge),
    Tower(TowerArrow),
}

struct Fields<'a> {
    line: usize,
    parts: std::str::SplitN<'a, char>,
}

impl<'a> Fields<'a> {
    fn err(&self, message: impl Into<String>) -> ChartirError {
        ChartirError::Malformed {
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ChartirError> {
        match self.parts.next() {
            Some(s) if !s.is_empty() => Ok(s),
            _ => Err(self.err(format!("missing {what}"))),
        }
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ChartirError> {
        let s = self.next(what)?;
        s.parse().map_err(|_| self.err(format!("bad {what} '{s}'")))
    }

    fn id(&mut self, what: &str) -> Result<ClassId, ChartirError> {
        let s = self.next(what)?;
        s.parse().map_err(|e: String| self.err(e))
    }

    fn flags(&mut self, allowed: &[&str]) -> Result<Vec<bool>, ChartirError> {
        let s = self.next("flags")?;
        let mut on = vec![false; allowed.len()];
        if s == "-" {
            return Ok(on);
        }
        let mut last = None;
        for f in s.split(',') {
            let Some(i) = allowed.iter().position(|a| *a == f) else {
                return Err(self.err(format!("unknown flag '{f}'")));
            };
            if last.is_some_and(|l| l >= i) {
                return Err(self.err("flags must be listed once each in canonical order"));
            }
            last = Some(i);
            on[i] = true;
        }
        Ok(on)
    }

    fn end(mut self) -> Result<(), ChartirError> {
        match self.parts.next() {
            None => Ok(()),
            Some(_) => Err(self.err("trailing fields")),
        }
    }
}

fn parse_struct_kind(s: &str) -> Option<StructKind> {
    [StructKind::H0, StructKind::H1, StructKind::H2]
        .into_iter()
        .find(|k| k.as_str() == s)
}

fn parse_cell(s: &str) -> Option<EdgeCell> {
    [
        EdgeCell::Plain,
        EdgeCell::BottomCell,
        EdgeCell::TopCell,
        EdgeCell::Undetected,
    ]
    .into_iter()
    .find(|k| k.as_str() == s)
}

fn parse_provenance(s: &str) -> Option<Provenance> {
    [
        Provenance::None,
        Provenance::BottomCell,
        Provenance::TopCell,
    ]
    .into_iter()
    .find(|k| k.as_str() == s)
}

fn parse_ext_kind(s: &str) -> Option<ExtensionKind> {
    [
        ExtensionKind::Two,
        ExtensionKind::Eta,
        ExtensionKind::Nu,
        ExtensionKind::Tau,
    ]
    .into_iter()
    .find(|k| k.as_str() == s)
}

fn parse_tower_kind(s: &str) -> Option<TowerKind> {
    [TowerKind::H0, TowerKind::H1]
        .into_iter()
        .find(|k| k.as_str() == s)
}

fn parse_via(s: &str) -> Option<[Point; 2]> {
    let (a, b) = s.split_once(';')?;
    let point = |p: &str| {
        let (x, y) = p.split_once(',')?;
        Some(Point {
            x: x.parse().ok()?,
            y: y.parse().ok()?,
        })
    };
    Some([point(a)?, point(b)?])
}

fn parse_record(line: usize, text: &str) -> Result<(Record, Option<ClassNode>), ChartirError> {
    let (head, rest) = text.split_once(' ').unwrap_or((text, ""));
    let mut f = Fields {
        line,
        parts: rest.splitn(16, ' '),
    };
    if rest.is_empty() {
        return Err(f.err(format!("record '{head}' has no fields")));
    }
    let mut node = None;
    let rec = match head {
        "window" => {
            let feature = f.parse("window feature")?;
            let max_stem = f.parse("window stem")?;
            Record::Window(CompletenessWindow { feature, max_stem })
        }
        "class" => {
            let id = f.id("class id")?;
            let tau_order = f.parse("tau order")?;
            let p = f.next("provenance")?;
            let provenance =
                parse_provenance(p).ok_or_else(|| f.err(format!("bad provenance '{p}'")))?;
            let [marker] = f.flags(&["marker"])?[..] else {
                unreachable!()
            };
            let angle = f.next("label angle")?;
            let name = f.next("label")?;
            let label = match (angle, name) {
                ("-", "-") => None,
                ("-", _) | (_, "-") => {
                    return Err(f.err("label angle and text must both be present or both '-'"))
                }
                (a, n) => Some(Label {
                    angle: a
                        .parse()
                        .map_err(|_| f.err(format!("bad label angle '{a}'")))?,
                    text: unescape(n).ok_or_else(|| f.err(format!("bad escape in '{n}'")))?,
                }),
            };
            node = Some(ClassNode {
                id,
                tau_order,
                label,
                hidden_tau_marker: marker,
                provenance,
            });
            Record::Class(id)
        }
        "struct" => {
            let source = f.id("source")?;
            let target = f.id("target")?;
            let k = f.next("kind")?;
            let kind =
                parse_struct_kind(k).ok_or_else(|| f.err(format!("bad struct kind '{k}'")))?;
            let tau_power = f.parse("tau power")?;
            let c = f.next("cell")?;
            let cell = parse_cell(c).ok_or_else(|| f.err(format!("bad cell '{c}'")))?;
            let [may_hidden, uncertain] = f.flags(&["may_hidden", "uncertain"])?[..] else {
                unreachable!()
            };
            Record::Struct(StructEdge {
                source,
                target,
                kind,
                tau_power,
                may_hidden,
                uncertain,
                cell,
            })
        }
        "diff" => {
            let source = f.id("source")?;
            let target = f.id("target")?;
            let page = f.parse("page")?;
            let tau_power = f.parse("tau power")?;
            let [uncertain] = f.flags(&["uncertain"])?[..] else {
                unreachable!()
            };
            Record::Diff(DiffEdge {
                source,
                target,
                page,
                tau_power,
                uncertain,
            })
        }
        "arrow" => {
            let source = f.id("source")?;
            let page = f.parse("page")?;
            let tau_power = f.parse("tau power")?;
            let [uncertain] = f.flags(&["uncertain"])?[..] else {
                unreachable!()
            };
            Record::Arrow(DiffArrow {
                source,
                page,
                tau_power,
                uncertain,
            })
        }
        "ext" => {
            let source = f.id("source")?;
            let target = f.id("target")?;
            let k = f.next("kind")?;
            let kind =
                parse_ext_kind(k).ok_or_else(|| f.err(format!("bad extension kind '{k}'")))?;
            let [uncertain] = f.flags(&["uncertain"])?[..] else {
                unreachable!()
            };
            let v = f.next("via")?;
            let via = match v {
                "-" => None,
                _ => Some(parse_via(v).ok_or_else(|| f.err(format!("bad control points '{v}'")))?),
            };
            Record::Ext(ExtensionEdge {
                source,
                target,
                kind,
                uncertain,
                via,
            })
        }
        "tower" => {
            let base = f.id("base")?;
            let k = f.next("kind")?;
            let kind = parse_tower_kind(k).ok_or_else(|| f.err(format!("bad tower kind '{k}'")))?;
            let [tau_annihilated] = f.flags(&["tau_annihilated"])?[..] else {
                unreachable!()
            };
            Record::Tower(TowerArrow {
                base,
                kind,
                tau_annihilated,
            })
        }
        other => return Err(f.err(format!("unknown record '{other}'"))),
    };
    f.end()?;
    Ok((rec, node))
}

fn header_value<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<&'a str, ChartirError> {
    match lines.next() {
        Some((n, l)) => l
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .filter(|v| !v.is_empty() && !v.contains(' '))
            .ok_or_else(|| ChartirError::Malformed {
                line: n,
                message: format!("expected '{key} <value>'"),
            }),
        None => Err(ChartirError::MissingHeader),
    }
}

/// Parses a canonical chartir document.
pub fn parse(text: &str) -> Result<ChartPage, ChartirError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.starts_with("chartir ") => {
            let v = &l["chartir ".len()..];
            if v != VERSION.to_string() {
                return Err(ChartirError::VersionMismatch(v.to_string()));
            }
        }
        _ => return Err(ChartirError::MissingHeader),
    }
    let variant: Variant = header_value(&mut lines, "variant")?
        .parse()
        .map_err(|message| ChartirError::Malformed { line: 2, message })?;
    let page: PageKind = header_value(&mut lines, "page")?
        .parse()
        .map_err(|message| ChartirError::Malformed { line: 3, message })?;

    let mut chart = ChartPage::new(variant, page);
    let mut prev: Option<Record> = None;
    for (n, l) in lines {
        if l.is_empty() || l.ends_with(' ') || l.ends_with('\t') {
            return Err(ChartirError::Malformed {
                line: n,
                message: "empty line or trailing whitespace".into(),
            });
        }
        let (rec, node) = parse_record(n, l)?;
        if prev.as_ref().is_some_and(|p| *p >= rec) {
            return Err(ChartirError::NonCanonical { line: n });
        }
        match &rec {
            Record::Window(w) => chart.windows.push(*w),
            Record::Class(_) => chart.add_class(node.expect("class records carry a node")),
            Record::Struct(e) => chart.struct_edges.push(e.clone()),
            Record::Diff(e) => chart.diff_edges.push(e.clone()),
            Record::Arrow(e) => chart.diff_arrows.push(e.clone()),
            Record::Ext(e) => chart.extension_edges.push(e.clone()),
            Record::Tower(t) => chart.towers.push(t.clone()),
        }
        prev = Some(rec);
    }
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(ChartirError::Malformed {
            line: text.lines().count(),
            message: "missing final newline".into(),
        });
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TauOrder;

    fn sample() -> ChartPage {
        let mut c = ChartPage::new(Variant::Motivic, PageKind::E2);
        c.windows.push(CompletenessWindow {
            feature: crate::model::Feature::Classes,
            max_stem: 70,
        });
        for (id, order, label) in [
            (ClassId::drawn(0, 0, 0), TauOrder::Free, Some("$h_0$ x")),
            (ClassId::drawn(0, 1, 0), TauOrder::Torsion(1), None),
            (
                ClassId::drawn(1, 1, 0),
                TauOrder::Torsion(2),
                Some("50% - off"),
            ),
        ] {
            c.add_class(ClassNode {
                id,
                tau_order: order,
                label: label.map(|t| Label {
                    text: t.into(),
                    angle: -90,
                }),
                hidden_tau_marker: false,
                provenance: Provenance::None,
            });
        }
        c.struct_edges.push(StructEdge {
            source: ClassId::drawn(0, 0, 0),
            target: ClassId::drawn(0, 1, 0),
            kind: StructKind::H0,
            tau_power: 0,
            may_hidden: true,
            uncertain: true,
            cell: EdgeCell::Plain,
        });
        c.extension_edges.push(ExtensionEdge {
            source: ClassId::drawn(0, 0, 0),
            target: ClassId::drawn(1, 1, 0),
            kind: ExtensionKind::Eta,
            uncertain: false,
            via: Some([Point { x: 10, y: -20 }, Point { x: 30, y: 40 }]),
        });
        c
    }

    #[test]
    fn empty_chart_is_header_only() {
        let text = serialize(&ChartPage::new(Variant::Classical, PageKind::Einf));
        assert_eq!(text, "chartir 1\nvariant classical\npage Einf\n");
        assert_eq!(
            parse(&text).unwrap(),
            ChartPage::new(Variant::Classical, PageKind::Einf)
        );
    }

    #[test]
    fn single_class() {
        let mut c = ChartPage::new(Variant::Motivic, PageKind::E2);
        c.add_class(ClassNode {
            id: ClassId::drawn(0, 0, 0),
            tau_order: TauOrder::Free,
            label: None,
            hidden_tau_marker: false,
            provenance: Provenance::None,
        });
        assert_eq!(
            serialize(&c),
            "chartir 1\nvariant motivic\npage E2\nclass 0,0,0 free none - - -\n"
        );
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let text = serialize(&c);
        assert!(text.contains("struct 0,0,0 0,1,0 h0 0 plain may_hidden,uncertain\n"));
        assert!(text.contains("class 1,1,0 2 none - -90 50%25%20%2D%20off\n"));
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn escaping_round_trips() {
        for s in ["", "-", "%", "a b", "\u{3c4}h_1", "x\ty"] {
            assert_eq!(unescape(&escape(s)).as_deref(), Some(s));
            assert!(!escape(s).contains(' '));
        }
    }

    #[test]
    fn rejects_bad_headers() {
        assert_eq!(parse(""), Err(ChartirError::MissingHeader));
        assert_eq!(
            parse("chartir 2\n"),
            Err(ChartirError::VersionMismatch("2".into()))
        );
        assert!(matches!(
            parse("chartir 1\nvariant nope\npage E2\n"),
            Err(ChartirError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_out_of_order_records() {
        let text = serialize(&sample());
        let mut lines: Vec<&str> = text.lines().collect();
        lines.swap(4, 5);
        let swapped = lines.join("\n") + "\n";
        assert_eq!(parse(&swapped), Err(ChartirError::NonCanonical { line: 6 }));
    }

    #[test]
    fn malformed_records_carry_line_numbers() {
        let text = "chartir 1\nvariant motivic\npage E2\nclass 0,0,0 free none - -\n";
        assert!(matches!(
            parse(text),
            Err(ChartirError::Malformed { line: 4, .. })
        ));
        let text = "chartir 1\nvariant motivic\npage E2\nclass 0,0,0 free none - - - extra\n";
        assert!(matches!(
            parse(text),
            Err(ChartirError::Malformed { line: 4, .. })
        ));
        let text = "chartir 1\nvariant motivic\npage E2\nbogus 1\n";
        assert!(matches!(
            parse(text),
            Err(ChartirError::Malformed { line: 4, .. })
        ));
    }
}
