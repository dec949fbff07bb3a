use super::ExtractError;

const BEGIN: &str = "\\begin{pspicture}";
const END: &str = "\\end{pspicture}";

/// One picture environment of the source document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Label of the section the block belongs to, e.g. `E3-mot`.
    pub tag: String,
    pub title: String,
    /// 1-based line of the opening delimiter.
    pub begin_line: usize,
    /// Text between the delimiters; its first line is `begin_line + 1`.
    pub text: String,
}

#[derive(Clone, Debug)]
struct Section {
    title: String,
    label: String,
    line: usize,
}

/// Splits the document into chart blocks and tags each with its section.
///
/// A block is matched to the section whose heading equals the block's drawn
/// title; failing that, to the nearest section above it.
pub fn scan_blocks(document: &str) -> Result<Vec<(String, String)>, ExtractError> {
    Ok(scan_blocks_detailed(document)?
        .into_iter()
        .map(|b| (b.tag, b.text))
        .collect())
}

pub fn scan_blocks_detailed(document: &str) -> Result<Vec<Block>, ExtractError> {
    let sections = find_sections(document);
    let mut blocks = Vec::new();
    let mut open: Option<(usize, Vec<&str>)> = None;
    let section_at = |line: usize| {
        sections
            .iter()
            .rfind(|s| s.line < line)
            .map_or_else(|| "?".to_string(), |s| s.label.clone())
    };
    for (idx, line) in document.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with(BEGIN) {
            if let Some((start, _)) = open {
                return Err(ExtractError::UnbalancedBlock {
                    line: start,
                    delimiter: BEGIN.to_string(),
                    section: section_at(start),
                });
            }
            open = Some((lineno, Vec::new()));
        } else if trimmed.starts_with(END) {
            let Some((start, body)) = open.take() else {
                return Err(ExtractError::UnbalancedBlock {
                    line: lineno,
                    delimiter: END.to_string(),
                    section: section_at(lineno),
                });
            };
            let text = body.join("\n");
            let title = drawn_title(&text).unwrap_or_default();
            let tag = sections
                .iter()
                .find(|s| !title.is_empty() && s.title == title)
                .or_else(|| sections.iter().rfind(|s| s.line < start))
                .map(|s| s.label.clone())
                .ok_or(ExtractError::UntaggedBlock { line: start })?;
            blocks.push(Block {
                tag,
                title,
                begin_line: start,
                text,
            });
        } else if let Some((_, body)) = open.as_mut() {
            body.push(line);
        }
    }
    if let Some((start, body)) = open {
        let title = drawn_title(&body.join("\n")).unwrap_or_default();
        let section = match sections
            .iter()
            .find(|s| !title.is_empty() && s.title == title)
        {
            Some(s) => s.label.clone(),
            None => section_at(start),
        };
        return Err(ExtractError::UnbalancedBlock {
            line: start,
            delimiter: BEGIN.to_string(),
            section,
        });
    }
    Ok(blocks)
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Contents of the balanced brace group starting at byte `open` (which must be `{`).
fn brace_group(s: &str, open: usize) -> Option<(&str, usize)> {
    let mut depth = 0usize;
    for (i, c) in s[open..].char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some((&s[open + 1..open + i], open + i + 1));
                }
            }
            _ => {}
        }
    }
    None
}

fn find_sections(document: &str) -> Vec<Section> {
    let mut out = Vec::new();
    let line_of = |pos: usize| document[..pos].matches('\n').count() + 1;
    let mut from = 0;
    while let Some(rel) = document[from..].find("\\section{") {
        let at = from + rel;
        let open = at + "\\section".len();
        let Some((title, after)) = brace_group(document, open) else {
            break;
        };
        from = after;
        let rest = document[after..].trim_start();
        if let Some(stripped) = rest.strip_prefix("\\label") {
            let lstart = document.len() - stripped.len();
            if let Some((label, _)) = brace_group(document, lstart) {
                out.push(Section {
                    title: normalize(title),
                    label: label.trim().to_string(),
                    line: line_of(at),
                });
            }
        }
    }
    out
}

/// The small-caps title drawn inside a chart block.
fn drawn_title(block: &str) -> Option<String> {
    let at = block.find("\\textsc")?;
    let open = at + "\\textsc".len();
    let (t, _) = brace_group(block, open)?;
    Some(normalize(t))
}
