//! Browser demo: draw a chart, turn its pages against the next published
//! chart, and check the cofiber-of-τ counts. The source document is built in.

use adams_chart::extract::extract_document;
use adams_chart::model::{materialize_towers, ChartPage, DEFAULT_F_CAP};
use adams_chart::pages::{check_chain, default_compare_stems, Window, CHAINS};
use adams_chart::svg::{render, StyleProfile};
use adams_chart::validate::{ctau_check, report};
use wasm_bindgen::prelude::*;

const DOCUMENT: &str = include_str!("../../../paper.md");

#[wasm_bindgen]
pub struct Corpus {
    charts: Vec<ChartPage>,
}

impl Corpus {
    pub fn parse(document: &str) -> Result<Corpus, String> {
        let charts = extract_document(document).map_err(|e| e.to_string())?;
        Ok(Corpus {
            charts: charts.into_iter().map(|c| c.chart).collect(),
        })
    }

    fn chart(&self, tag: &str) -> Result<&ChartPage, String> {
        self.charts
            .iter()
            .find(|c| c.tag() == tag)
            .ok_or_else(|| format!("no chart '{tag}'"))
    }

    pub fn svg(&self, tag: &str, max_stem: i32) -> Result<String, String> {
        let chart = self.chart(tag)?.excerpt(max_stem);
        render(&chart, &StyleProfile::default()).map_err(|e| e.to_string())
    }

    /// Discrepancy report for the published chain starting at `tag`.
    pub fn turn_report(&self, tag: &str, include_uncertain: bool) -> Result<String, String> {
        let chain = CHAINS
            .iter()
            .find(|c| c.source == tag)
            .ok_or_else(|| format!("no published page follows {tag}"))?;
        let (src, dst) = (self.chart(chain.source)?, self.chart(chain.target)?);
        let stems = default_compare_stems(src, dst);
        let (_, r) = check_chain(src, chain.pages, dst, stems, include_uncertain)
            .map_err(|e| e.to_string())?;
        let pages: Vec<String> = chain.pages.iter().map(|p| format!("d{p}")).collect();
        Ok(format!(
            "{} after {} against {}, stems <= {stems}\n{}",
            chain.source,
            pages.join(","),
            chain.target,
            r.to_text()
        ))
    }

    pub fn ctau_report(&self, max_stem: i32) -> Result<String, String> {
        let mat = |tag| -> Result<ChartPage, String> {
            materialize_towers(self.chart(tag)?, DEFAULT_F_CAP).map_err(|e| e.to_string())
        };
        let (sphere, ctau) = (mat("E2-mot")?, mat("E2-Ctau")?);
        let out = ctau_check(&sphere, &ctau, Window::new(max_stem, DEFAULT_F_CAP))
            .map_err(|e| e.to_string())?;
        Ok(format!(
            "shift ({},{}) checked {} bidegrees, {} findings\n{}",
            out.shift.0,
            out.shift.1,
            out.checked,
            out.findings.len(),
            report(&out.findings, false)
        ))
    }
}

#[wasm_bindgen]
impl Corpus {
    /// Extracts every chart of the built-in document.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Corpus, JsError> {
        Corpus::parse(DOCUMENT).map_err(|e| JsError::new(&e))
    }

    pub fn tags(&self) -> Vec<String> {
        self.charts.iter().map(|c| c.tag().to_string()).collect()
    }

    /// Tags of charts whose next page is published.
    pub fn turnable(&self) -> Vec<String> {
        CHAINS.iter().map(|c| c.source.to_string()).collect()
    }

    pub fn render(&self, tag: &str, max_stem: i32) -> Result<String, JsError> {
        self.svg(tag, max_stem).map_err(|e| JsError::new(&e))
    }

    pub fn turn(&self, tag: &str, include_uncertain: bool) -> Result<String, JsError> {
        self.turn_report(tag, include_uncertain)
            .map_err(|e| JsError::new(&e))
    }

    pub fn ctau(&self, max_stem: i32) -> Result<String, JsError> {
        self.ctau_report(max_stem).map_err(|e| JsError::new(&e))
    }
}
