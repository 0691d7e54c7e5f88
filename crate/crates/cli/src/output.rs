use std::fmt::Write as _;

use crate::args::Format;

/// A block of tabular output: `#` comment lines, an optional header and rows.
#[derive(Debug, Default)]
pub struct Block {
    pub comments: Vec<String>,
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
}

impl Block {
    pub fn with_header(header: &[&str]) -> Self {
        Block {
            header: Some(header.iter().map(|s| s.to_string()).collect()),
            ..Block::default()
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, out: &mut String) {
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let lines = self.header.iter().chain(self.rows.iter());
        match format {
            Format::Csv => {
                for line in lines {
                    let _ = writeln!(out, "{}", line.join(","));
                }
            }
            Format::Pretty => {
                let cols = self.header.iter().chain(self.rows.iter()).map(Vec::len).max().unwrap_or(0);
                let mut width = vec![0; cols];
                for line in self.header.iter().chain(self.rows.iter()) {
                    for (w, cell) in width.iter_mut().zip(line) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                for line in lines {
                    let cells: Vec<String> = line
                        .iter()
                        .zip(&width)
                        .map(|(cell, &w)| format!("{cell:>w$}"))
                        .collect();
                    let _ = writeln!(out, "{}", cells.join("  ").trim_end());
                }
            }
        }
    }
}

pub fn render_all(blocks: &[Block], format: Format) -> String {
    let mut out = String::new();
    for b in blocks {
        b.render(format, &mut out);
    }
    out
}
