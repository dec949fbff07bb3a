use super::ExtractError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimitiveKind {
    Dot,
    Square,
    Line,
    ArrowLine,
    Curve,
    Label,
    Grid,
    /// The chart title; kept only so that every drawing command is accounted for.
    Title,
    /// An axis numeral.
    AxisLabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineStyle {
    Solid,
    Dashed,
    Dotted,
}

/// A coordinate in hundredths of a chart unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primitive {
    pub kind: PrimitiveKind,
    pub coordinates: Vec<Coord>,
    /// Color macro; for the extension macros this is the macro name itself.
    pub color: String,
    pub linestyle: LineStyle,
    pub text: Option<String>,
    /// Angular offset of a label, in degrees.
    pub angle: Option<i32>,
    /// Dot radius or label distance, in hundredths.
    pub radius: Option<i32>,
    /// 1-based source line of the command.
    pub line: usize,
}

/// Parses a decimal such as `30.90` or `-1` into hundredths, exactly.
pub fn parse_hundredths(token: &str) -> Option<i32> {
    let t = token.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if (int.is_empty() && frac.is_empty())
        || frac.len() > 2
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let whole: i32 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let mut f: i32 = if frac.is_empty() {
        0
    } else {
        frac.parse().ok()?
    };
    if frac.len() == 1 {
        f *= 10;
    }
    let v = whole.checked_mul(100)?.checked_add(f)?;
    Some(if neg { -v } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GroupKind {
    Square,
    Paren,
    Brace,
}

#[derive(Debug, Clone)]
struct Group {
    kind: GroupKind,
    text: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_inline_space(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t') | Some('\r')) {
            self.bump();
        }
    }

    fn read_group(&mut self, open: char, close: char) -> Result<String, ExtractError> {
        let start_line = self.line;
        self.bump();
        let start = self.pos;
        let mut depth = 1usize;
        while let Some(c) = self.bump() {
            if c == open && open == '{' {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    return Ok(self.src[start..self.pos - 1].to_string());
                }
            }
        }
        Err(ExtractError::UnbalancedDelimiter {
            line: start_line,
            delimiter: open,
        })
    }
}

/// Splits one chart block into drawing primitives, in source order.
///
/// `first_line` is the document line on which `block` starts.
pub fn parse_commands(block: &str, first_line: usize) -> Result<Vec<Primitive>, ExtractError> {
    let mut cur = Cursor {
        src: block,
        pos: 0,
        line: first_line,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            '%' => {
                while let Some(c) = cur.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '\\' => {
                let line = cur.line;
                cur.bump();
                let start = cur.pos;
                while matches!(cur.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    cur.bump();
                }
                let name = block[start..cur.pos].to_string();
                if name.is_empty() {
                    return Err(ExtractError::MalformedCommand {
                        line,
                        message: "empty command name".into(),
                    });
                }
                let star = if cur.peek() == Some('*') {
                    cur.bump();
                    true
                } else {
                    false
                };
                let mut groups = Vec::new();
                loop {
                    cur.skip_inline_space();
                    match cur.peek() {
                        Some('[') => groups.push(Group {
                            kind: GroupKind::Square,
                            text: cur.read_group('[', ']')?,
                        }),
                        Some('(') => groups.push(Group {
                            kind: GroupKind::Paren,
                            text: cur.read_group('(', ')')?,
                        }),
                        Some('{') => groups.push(Group {
                            kind: GroupKind::Brace,
                            text: cur.read_group('{', '}')?,
                        }),
                        _ => break,
                    }
                }
                if let Some(p) = interpret(&name, star, &groups, line)? {
                    out.push(p);
                }
            }
            _ => {
                let rest: String = block[cur.pos..].chars().take(20).collect();
                return Err(ExtractError::MalformedCommand {
                    line: cur.line,
                    message: format!("unexpected text '{rest}'"),
                });
            }
        }
    }
    Ok(out)
}

fn coord(text: &str, line: usize) -> Result<Coord, ExtractError> {
    let bad = || ExtractError::MalformedCoordinate {
        line,
        token: format!("({text})"),
    };
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    Ok(Coord {
        x: parse_hundredths(x).ok_or_else(bad)?,
        y: parse_hundredths(y).ok_or_else(bad)?,
    })
}

fn options(text: &str) -> Vec<(String, String)> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => (kv.trim().to_string(), String::new()),
        })
        .collect()
}

fn option<'a>(opts: &'a [(String, String)], key: &str) -> Option<&'a str> {
    opts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn style(opts: &[(String, String)], line: usize) -> Result<LineStyle, ExtractError> {
    match option(opts, "linestyle") {
        None | Some("solid") => Ok(LineStyle::Solid),
        Some("dashed") => Ok(LineStyle::Dashed),
        Some("dotted") => Ok(LineStyle::Dotted),
        Some(other) => Err(ExtractError::MalformedCommand {
            line,
            message: format!("unknown line style '{other}'"),
        }),
    }
}

/// Command arguments sorted by bracket type.
struct Parts {
    opts: Vec<(String, String)>,
    braces: Vec<String>,
    points: Vec<Coord>,
}

fn parts(groups: &[Group], line: usize) -> Result<Parts, ExtractError> {
    let mut p = Parts {
        opts: Vec::new(),
        braces: Vec::new(),
        points: Vec::new(),
    };
    for g in groups {
        match g.kind {
            GroupKind::Square => p.opts.extend(options(&g.text)),
            GroupKind::Brace => p.braces.push(g.text.clone()),
            GroupKind::Paren => p.points.push(coord(&g.text, line)?),
        }
    }
    Ok(p)
}

fn expect_points(name: &str, p: &Parts, n: usize, line: usize) -> Result<(), ExtractError> {
    if p.points.len() != n {
        return Err(ExtractError::MalformedCommand {
            line,
            message: format!("\\{name} expects {n} points, found {}", p.points.len()),
        });
    }
    Ok(())
}

const EXTENSION_MACROS: [&str; 4] = ["twoextn", "etaextn", "nuextn", "tauextn"];

fn interpret(
    name: &str,
    star: bool,
    groups: &[Group],
    line: usize,
) -> Result<Option<Primitive>, ExtractError> {
    let p = parts(groups, line)?;
    let prim =
        |kind, coordinates: Vec<Coord>, color: &str, linestyle, text: Option<String>, angle| {
            Primitive {
                kind,
                coordinates,
                color: color.to_string(),
                linestyle,
                text,
                angle,
                radius: None,
                line,
            }
        };
    let color = option(&p.opts, "linecolor").unwrap_or("black").to_string();
    Ok(Some(match name {
        "psset" | "scriptsize" => return Ok(None),
        "pscircle" => {
            if !star {
                return Err(ExtractError::MalformedCommand {
                    line,
                    message: "open circles are not chart classes".into(),
                });
            }
            expect_points(name, &p, 1, line)?;
            let mut d = prim(
                PrimitiveKind::Dot,
                p.points.clone(),
                &color,
                LineStyle::Solid,
                None,
                None,
            );
            d.radius = p.braces.first().and_then(|r| parse_hundredths(r));
            d
        }
        "psframe" => {
            expect_points(name, &p, 2, line)?;
            prim(
                PrimitiveKind::Square,
                p.points.clone(),
                &color,
                LineStyle::Solid,
                None,
                None,
            )
        }
        "psline" => {
            expect_points(name, &p, 2, line)?;
            let arrow = match p.braces.as_slice() {
                [] => false,
                [a] if a == "->" => true,
                _ => {
                    return Err(ExtractError::MalformedCommand {
                        line,
                        message: "unsupported line decoration".into(),
                    })
                }
            };
            let kind = if arrow {
                PrimitiveKind::ArrowLine
            } else {
                PrimitiveKind::Line
            };
            prim(
                kind,
                p.points.clone(),
                &color,
                style(&p.opts, line)?,
                None,
                None,
            )
        }
        "psgrid" => {
            expect_points(name, &p, 2, line)?;
            // Grid corners are given in grid units; store them in chart units.
            let unit = option(&p.opts, "unit")
                .and_then(parse_hundredths)
                .unwrap_or(100);
            let scaled = p
                .points
                .iter()
                .map(|c| Coord {
                    x: c.x * unit / 100,
                    y: c.y * unit / 100,
                })
                .collect();
            prim(
                PrimitiveKind::Grid,
                scaled,
                "gridline",
                LineStyle::Solid,
                None,
                None,
            )
        }
        "rput" => {
            expect_points(name, &p, 1, line)?;
            prim(
                PrimitiveKind::AxisLabel,
                p.points.clone(),
                "black",
                LineStyle::Solid,
                p.braces.last().cloned(),
                None,
            )
        }
        "uput" => {
            expect_points(name, &p, 1, line)?;
            let angle = groups
                .iter()
                .find(|g| g.kind == GroupKind::Square)
                .and_then(|g| g.text.trim().parse::<i32>().ok());
            // A leading brace group is the label distance; the title has none.
            let has_radius = groups.first().map(|g| g.kind) == Some(GroupKind::Brace);
            let text = p.braces.last().cloned();
            if has_radius {
                let mut l = prim(
                    PrimitiveKind::Label,
                    p.points.clone(),
                    "black",
                    LineStyle::Solid,
                    text,
                    angle,
                );
                l.radius = p.braces.first().and_then(|r| parse_hundredths(r));
                l
            } else {
                prim(
                    PrimitiveKind::Title,
                    p.points.clone(),
                    "black",
                    LineStyle::Solid,
                    text,
                    angle,
                )
            }
        }
        n if EXTENSION_MACROS.contains(&n) => {
            expect_points(name, &p, 2, line)?;
            prim(
                PrimitiveKind::Line,
                p.points.clone(),
                n,
                style(&p.opts, line)?,
                None,
                None,
            )
        }
        n if n
            .strip_suffix("curve")
            .is_some_and(|b| EXTENSION_MACROS.contains(&b)) =>
        {
            expect_points(name, &p, 4, line)?;
            let base = n.strip_suffix("curve").unwrap_or(n);
            prim(
                PrimitiveKind::Curve,
                p.points.clone(),
                base,
                style(&p.opts, line)?,
                None,
                None,
            )
        }
        other => {
            return Err(ExtractError::UnknownCommand {
                line,
                name: other.to_string(),
            })
        }
    }))
}
