//! Extraction of chart blocks from the source document into [`ChartPage`]s.

mod assemble;
mod legend;
mod lex;
mod scan;

use thiserror::Error;

use crate::model::ChartPage;

pub use assemble::{assemble, snap, Assembled, AssemblyNote};
pub use legend::{
    profile, semantics, ArrowMeaning, DotMeaning, LegendProfile, LineMeaning, Semantic, TauOverride,
};
pub use lex::{parse_commands, parse_hundredths, Coord, LineStyle, Primitive, PrimitiveKind};
pub use scan::{scan_blocks, scan_blocks_detailed, Block};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("line {line}: unbalanced block delimiter {delimiter} in section '{section}'")]
    UnbalancedBlock {
        line: usize,
        delimiter: String,
        section: String,
    },
    #[error("line {line}: chart block has no section")]
    UntaggedBlock { line: usize },
    #[error("line {line}: unbalanced '{delimiter}'")]
    UnbalancedDelimiter { line: usize, delimiter: char },
    #[error("line {line}: {message}")]
    MalformedCommand { line: usize, message: String },
    #[error("line {line}: malformed coordinate pair {token}")]
    MalformedCoordinate { line: usize, token: String },
    #[error("line {line}: unknown command \\{name}")]
    UnknownCommand { line: usize, name: String },
    #[error("line {line}: color '{color}' is not in the {tag} legend")]
    UnmappedColor {
        line: usize,
        color: String,
        tag: String,
    },
    #[error("line {line}: line style of '{color}' has no meaning in the {tag} legend")]
    UnmappedStyle {
        line: usize,
        color: String,
        tag: String,
    },
    #[error("no legend profile for section '{tag}'")]
    UnknownSection { tag: String },
    #[error("line {line}: coordinate {value} is too far from a grid point")]
    AmbiguousCoordinate { line: usize, value: String },
    #[error("line {line}: class position {coordinate} is off the draw grid")]
    OffGrid { line: usize, coordinate: String },
    #[error("line {line}: dangling edge from {from} to {to}")]
    DanglingEdge {
        line: usize,
        from: String,
        to: String,
    },
    #[error("line {line}: class {id} is drawn twice with different meanings")]
    DuplicateClass { line: usize, id: String },
    #[error("line {line}: '{color}' drawn with shift ({ds},{df}) matches no legend shape")]
    ShapeMismatch {
        line: usize,
        color: String,
        ds: i32,
        df: i32,
    },
    #[error("line {line}: '{color}' line ends on {target} of order {order}")]
    ColorLaw {
        line: usize,
        color: String,
        target: String,
        order: String,
    },
    #[error("line {line}: class {id} lies outside the chart grid")]
    OutOfBounds { line: usize, id: String },
}

/// One extracted chart with its provenance in the source document.
#[derive(Clone, Debug)]
pub struct ExtractedChart {
    pub tag: String,
    pub begin_line: usize,
    pub chart: ChartPage,
    pub notes: Vec<AssemblyNote>,
    pub primitives: Vec<Primitive>,
}

/// Scans, parses and assembles every chart block of the document.
pub fn extract_document(document: &str) -> Result<Vec<ExtractedChart>, ExtractError> {
    scan_blocks_detailed(document)?
        .into_iter()
        .map(extract_block)
        .collect()
}

pub fn extract_block(block: Block) -> Result<ExtractedChart, ExtractError> {
    let prof = profile(&block.tag).ok_or_else(|| ExtractError::UnknownSection {
        tag: block.tag.clone(),
    })?;
    let primitives = parse_commands(&block.text, block.begin_line + 1)?;
    let Assembled { chart, notes } = assemble(&primitives, &prof)?;
    Ok(ExtractedChart {
        tag: block.tag,
        begin_line: block.begin_line,
        chart,
        notes,
        primitives,
    })
}
