//! Static per-instance heatmaps of explainer rankings.
//!
//! One row per explainer. Only the `top_k` ranked tokens are colored, with
//! intensity `(top_k - r) / top_k` for 0-based rank `r`, so rank 1 is fully
//! saturated and intensity drops linearly. Selected tokens are bold, clearly
//! relevant ones also underlined, the rank-1 token is outlined, and the
//! five best-ranked tokens are listed beside each row.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explain::Ranking;
use crate::harness::{PositionClass, VerifiedInstance};

pub const SIDE_LIST_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapCell {
    pub position: usize,
    pub token: String,
    /// 0-based.
    pub rank: usize,
    pub intensity: Option<f64>,
    pub selected: bool,
    pub relevant: bool,
    pub outlined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapRow {
    pub explainer: String,
    pub cells: Vec<HeatmapCell>,
    pub top_tokens: Vec<String>,
    /// The rank-1 token is non-selected.
    pub first_in_n: bool,
}

impl HeatmapRow {
    pub fn colored(&self) -> usize {
        self.cells.iter().filter(|c| c.intensity.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapDocument {
    pub instance_id: String,
    pub top_k: usize,
    pub rows: Vec<HeatmapRow>,
}

pub fn render_heatmap(
    v: &VerifiedInstance,
    rankings: &BTreeMap<String, Ranking>,
    top_k: usize,
) -> Result<HeatmapDocument> {
    let classes = v.partition.classes(v.len()).ok_or_else(|| {
        Error::InvalidRanking(format!("partition of {:?} does not cover its positions", v.id()))
    })?;
    let mut rows = Vec::new();
    for (name, ranking) in rankings {
        if ranking.len() != v.len() {
            return Err(Error::RankingLength {
                expected: v.len(),
                got: ranking.len(),
            });
        }
        let ranks = ranking.ranks();
        let first = ranking.order()[0];
        let cells = v
            .instance
            .tokens
            .iter()
            .enumerate()
            .map(|(p, tok)| HeatmapCell {
                position: p,
                token: tok.to_string(),
                rank: ranks[p],
                intensity: (ranks[p] < top_k).then(|| (top_k - ranks[p]) as f64 / top_k as f64),
                selected: classes[p] != PositionClass::NonSelected,
                relevant: classes[p] == PositionClass::Relevant,
                outlined: p == first,
            })
            .collect();
        rows.push(HeatmapRow {
            explainer: name.clone(),
            cells,
            top_tokens: ranking
                .order()
                .iter()
                .take(SIDE_LIST_LEN)
                .map(|&p| v.instance.tokens[p].to_string())
                .collect(),
            first_in_n: classes[first] == PositionClass::NonSelected,
        });
    }
    Ok(HeatmapDocument {
        instance_id: v.id().to_string(),
        top_k,
        rows,
    })
}

fn escape(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '<' => "&lt;".to_string(),
            '>' => "&gt;".to_string(),
            '&' => "&amp;".to_string(),
            '"' => "&quot;".to_string(),
            '\'' => "&#39;".to_string(),
            c => c.to_string(),
        })
        .collect()
}

impl HeatmapDocument {
    /// Standalone HTML. `generated_at` adds a timestamp comment.
    pub fn to_html(&self, generated_at: Option<&str>) -> String {
        let mut h = String::new();
        h.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
        let _ = writeln!(h, "<title>Rankings for {}</title>", escape(&self.instance_id));
        let _ = writeln!(
            h,
            "<meta name=\"color-scale\" content=\"linear; rank 1 = 1.0; rank {} = {:.4}; unranked = 0\">",
            self.top_k,
            if self.top_k == 0 { 0.0 } else { 1.0 / self.top_k as f64 }
        );
        if let Some(ts) = generated_at {
            let _ = writeln!(h, "<!-- generated {} -->", escape(ts));
        }
        h.push_str(
            "<style>\n\
             body { font-family: sans-serif; }\n\
             td { padding: 4px 8px; vertical-align: top; }\n\
             .tok { padding: 1px 2px; margin: 0 1px; }\n\
             .sel { font-weight: bold; }\n\
             .sr { text-decoration: underline; }\n\
             .first { outline: 2px solid #000; }\n\
             .first.error { outline: 2px dashed #c00; }\n\
             </style>\n</head>\n<body>\n",
        );
        let _ = writeln!(h, "<h1>{}</h1>", escape(&self.instance_id));
        let _ = writeln!(
            h,
            "<p>Top {} ranks colored. <b>Bold</b>: selected. <b><u>Underlined</u></b>: clearly relevant. \
             Outlined: rank 1 (dashed red when it is a non-selected token, an error).</p>",
            self.top_k
        );
        h.push_str("<table>\n");
        for row in &self.rows {
            h.push_str("<tr>");
            let _ = write!(h, "<td>{}</td><td>", escape(&row.explainer));
            for c in &row.cells {
                let mut class = vec!["tok"];
                if c.selected {
                    class.push("sel");
                }
                if c.relevant {
                    class.push("sr");
                }
                if c.outlined {
                    class.push("first");
                    if row.first_in_n {
                        class.push("error");
                    }
                }
                let style = c
                    .intensity
                    .map(|a| format!(" style=\"background: rgba(214, 39, 40, {a:.4})\""))
                    .unwrap_or_default();
                let _ = write!(
                    h,
                    "<span class=\"{}\" data-rank=\"{}\"{}>{}</span> ",
                    class.join(" "),
                    c.rank + 1,
                    style,
                    escape(&c.token)
                );
            }
            h.push_str("</td><td>");
            let tops: Vec<String> = row.top_tokens.iter().map(|t| escape(t)).collect();
            let _ = write!(h, "{}", tops.join(", "));
            if row.first_in_n {
                h.push_str(" <span class=\"legend-error\">(rank 1 is non-selected: error)</span>");
            }
            h.push_str("</td></tr>\n");
        }
        h.push_str("</table>\n</body>\n</html>\n");
        h
    }
}
