//! Structured reports and their text / JSON / CSV renderings.
//!
//! Every command produces a [`Report`]: an ordered list of titled sections,
//! each holding labelled rows. Numeric rows always carry a unit so the same
//! report can be rendered for humans (text, three decimals) or machines
//! (JSON and CSV, full precision). The JSON rendering round-trips: parsing
//! it back and re-rendering yields byte-identical output.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Output format selected with the global `--format` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Human-readable sections, numbers rounded to three decimals.
    Text,
    /// Pretty-printed JSON at full precision.
    Json,
    /// Flat `section,label,value,unit` rows at full precision.
    Csv,
}

/// Unit attached to every numeric row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "bits")]
    Bits,
    #[serde(rename = "bits/s")]
    BitsPerSecond,
    #[serde(rename = "s")]
    Seconds,
    #[serde(rename = "ratio")]
    Ratio,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::Bits => "bits",
            Unit::BitsPerSecond => "bits/s",
            Unit::Seconds => "s",
            Unit::Ratio => "ratio",
        };
        f.write_str(s)
    }
}

/// One labelled row: either a measured quantity or free-form text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Row {
    Number { label: String, value: f64, unit: Unit },
    Text { label: String, text: String },
}

impl Row {
    pub fn number(label: impl Into<String>, value: f64, unit: Unit) -> Self {
        Row::Number {
            label: label.into(),
            value,
            unit,
        }
    }

    pub fn text(label: impl Into<String>, text: impl Into<String>) -> Self {
        Row::Text {
            label: label.into(),
            text: text.into(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Row::Number { label, .. } | Row::Text { label, .. } => label,
        }
    }
}

/// A titled group of rows; sections appear in the report in the order the
/// underlying entities appear in the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub rows: Vec<Row>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// Numeric value of the first row with this exact label.
    pub fn number(&self, label: &str) -> Option<f64> {
        self.rows.iter().find_map(|row| match row {
            Row::Number { label: l, value, .. } if l == label => Some(*value),
            _ => None,
        })
    }

    /// Text of the first text row with this exact label.
    pub fn text(&self, label: &str) -> Option<&str> {
        self.rows.iter().find_map(|row| match row {
            Row::Text { label: l, text } if l == label => Some(text.as_str()),
            _ => None,
        })
    }
}

/// The complete output of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new() -> Self {
        Report {
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    /// First section whose title contains the given fragment.
    pub fn section_containing(&self, fragment: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title.contains(fragment))
    }

    /// Render for the requested output format. The result always ends with a
    /// newline so it can be written to a stream verbatim.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.to_text(),
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, section) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str("== ");
            out.push_str(&section.title);
            out.push_str(" ==\n");
            for row in &section.rows {
                match row {
                    Row::Number { label, value, unit } => {
                        out.push_str(&format!(
                            "{label}: {} {unit}\n",
                            format_number(*value)
                        ));
                    }
                    Row::Text { label, text } => {
                        out.push_str(&format!("{label}: {text}\n"));
                    }
                }
            }
        }
        out
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self)
            .expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["section", "label", "value", "unit"])
            .expect("csv write to memory cannot fail");
        for section in &self.sections {
            for row in &section.rows {
                let record: [String; 4] = match row {
                    Row::Number { label, value, unit } => [
                        section.title.clone(),
                        label.clone(),
                        format!("{value}"),
                        unit.to_string(),
                    ],
                    Row::Text { label, text } => [
                        section.title.clone(),
                        label.clone(),
                        text.clone(),
                        String::new(),
                    ],
                };
                writer
                    .write_record(&record)
                    .expect("csv write to memory cannot fail");
            }
        }
        let bytes = writer.into_inner().expect("csv writer flush cannot fail");
        String::from_utf8(bytes).expect("csv output is UTF-8")
    }
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

/// Three-decimal fixed-point rendering, falling back to scientific notation
/// for magnitudes that would otherwise collapse to `0.000`.
fn format_number(value: f64) -> String {
    if value != 0.0 && value.abs() < 0.0005 {
        format!("{value:.3e}")
    } else {
        format!("{value:.3}")
    }
}

/// Render a ratio as a percentage with up to four decimal places, trailing
/// zeros trimmed (`0.000625` becomes `0.0625%`).
pub(crate) fn percent_string(ratio: f64) -> String {
    let fixed = format!("{:.4}", ratio * 100.0);
    let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
    format!("{trimmed}%")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let mut section = Section::new("device: mouse");
        section.push(Row::number("instantaneous capacity", 22.983706192659348, Unit::Bits));
        section.push(Row::number("bandwidth", 2298.3706192659347, Unit::BitsPerSecond));
        section.push(Row::text("sampling rate", "100 Hz"));
        let mut report = Report::new();
        report.push(section);
        report
    }

    #[test]
    fn text_rendering_rounds_to_three_decimals() {
        let text = sample_report().render(OutputFormat::Text);
        assert!(text.contains("== device: mouse ==\n"));
        assert!(text.contains("instantaneous capacity: 22.984 bits\n"));
        assert!(text.contains("bandwidth: 2298.371 bits/s\n"));
        assert!(text.contains("sampling rate: 100 Hz\n"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn tiny_magnitudes_switch_to_scientific_notation() {
        assert_eq!(format_number(0.000625), "0.001");
        assert_eq!(format_number(0.0004), "4.000e-4");
        assert_eq!(format_number(0.0005), "0.001");
        assert_eq!(format_number(0.0), "0.000");
        assert_eq!(format_number(-0.0001), "-1.000e-4");
        assert_eq!(format_number(360.0000055), "360.000");
    }

    #[test]
    fn json_rendering_round_trips_byte_identically() {
        let report = sample_report();
        let first = report.render(OutputFormat::Json);
        let reparsed: Report = serde_json::from_str(&first).unwrap();
        assert_eq!(reparsed, report);
        let second = reparsed.render(OutputFormat::Json);
        assert_eq!(first, second);
    }

    #[test]
    fn json_preserves_full_precision() {
        let report = sample_report();
        let json = report.render(OutputFormat::Json);
        assert!(json.contains("22.983706192659348"));
        assert!(json.contains("\"unit\": \"bits/s\""));
    }

    #[test]
    fn csv_rendering_has_header_and_units() {
        let csv_text = sample_report().render(OutputFormat::Csv);
        let mut lines = csv_text.lines();
        assert_eq!(lines.next(), Some("section,label,value,unit"));
        assert_eq!(
            lines.next(),
            Some("device: mouse,instantaneous capacity,22.983706192659348,bits")
        );
        assert_eq!(
            lines.next(),
            Some("device: mouse,bandwidth,2298.3706192659347,bits/s")
        );
        assert_eq!(lines.next(), Some("device: mouse,sampling rate,100 Hz,"));
    }

    #[test]
    fn section_lookup_finds_rows_by_label() {
        let report = sample_report();
        let section = report.section_containing("mouse").unwrap();
        assert_eq!(section.number("bandwidth"), Some(2298.3706192659347));
        assert_eq!(section.text("sampling rate"), Some("100 Hz"));
        assert_eq!(section.number("missing"), None);
    }

    #[test]
    fn percent_strings_trim_trailing_zeros() {
        assert_eq!(percent_string(0.000625), "0.0625%");
        assert_eq!(percent_string(0.0025), "0.25%");
        assert_eq!(percent_string(0.875), "87.5%");
        assert_eq!(percent_string(0.00018367843805115286), "0.0184%");
    }
}
