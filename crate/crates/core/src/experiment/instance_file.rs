//! Plain-text instance files.
//!
//! ```text
//! # K L delta
//! 3 1 0
//! # id class Q D, one line per service
//! 0 MCC 3 1
//! 1 MCC 3 1
//! # K lines of `R T` pairs, one pair per service
//! 3 1 3 1
//! 1 1 1 1
//! 2 1 2 1
//! ```
//!
//! `L` is either the longest TTI (menu `1..=L`) or an explicit menu such as
//! `2..=10` or `2,4,8`. The number of services is the number of lines
//! between the header and the last `K` lines, so an instance needs at
//! least one service to be written. `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{ChannelCsi, Instance, ServiceClass, ServiceState};
use crate::sim::config::parse_menu;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn expect_len(&self, n: usize, what: &str) -> Result<(), ParseError> {
        if self.tokens.len() == n {
            return Ok(());
        }
        let column = self
            .tokens
            .get(n)
            .or(self.tokens.last())
            .map_or(1, |t| t.column);
        Err(self.err(
            column,
            format!("expected {n} fields ({what}), found {}", self.tokens.len()),
        ))
    }

    fn field<T: std::str::FromStr>(&self, i: usize, what: &str) -> Result<T, ParseError> {
        let t = &self.tokens[i];
        t.text
            .parse()
            .map_err(|_| self.err(t.column, format!("invalid {what} `{}`", t.text)))
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain([(content.len(), ' ')]) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &content[s..pos],
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line {
                number: idx + 1,
                tokens,
            })
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let lines = tokenize(text);
    let Some(header) = lines.first() else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "empty instance file".into(),
        });
    };
    header.expect_len(3, "K L delta")?;
    let k: usize = header.field(0, "channel count K")?;
    let menu = {
        let t = &header.tokens[1];
        match t.text.parse::<u32>() {
            Ok(l) if l >= 1 => (1..=l).collect(),
            _ => parse_menu(t.text).map_err(|m| header.err(t.column, m))?,
        }
    };
    let delta: f64 = header.field(2, "signaling overhead delta")?;

    let body = &lines[1..];
    let detected = body
        .iter()
        .take_while(|l| l.tokens.len() >= 2 && l.tokens[1].text.parse::<ServiceClass>().is_ok())
        .count();
    if body.len() < detected + k {
        let last = body.last().unwrap_or(header);
        return Err(ParseError {
            line: last.number + 1,
            column: 1,
            message: format!(
                "expected {k} channel lines after {detected} services, found {}",
                body.len() - detected
            ),
        });
    }
    let (service_lines, channel_lines) = body.split_at(body.len() - k);

    let mut services = Vec::with_capacity(service_lines.len());
    for line in service_lines {
        line.expect_len(4, "id class Q D")?;
        let svc = ServiceState::new(
            line.field(0, "service id")?,
            line.field(1, "service class")?,
            line.field(2, "demand Q")?,
            line.field(3, "deadline D")?,
        );
        if let Some(dup) = services.iter().position(|s: &ServiceState| s.id == svc.id) {
            return Err(line.err(
                1,
                format!("service id {} repeats service {}", svc.id, dup + 1),
            ));
        }
        services.push(svc);
    }

    let n = services.len();
    let mut csi = Vec::with_capacity(k);
    for line in channel_lines {
        line.expect_len(2 * n, "R T per service")?;
        let row = (0..n)
            .map(|s| {
                Ok(ChannelCsi::new(
                    line.field(2 * s, "rate R")?,
                    line.field(2 * s + 1, "validity T")?,
                ))
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        csi.push(row);
    }

    Instance::new(services, csi, menu, delta).map_err(|e| ParseError {
        line: header.number,
        column: 1,
        message: e.to_string(),
    })
}

/// Render an instance so that [`parse_instance`] reproduces it exactly.
pub fn format_instance(instance: &Instance) -> String {
    let menu = instance.tti_menu();
    let l = match (menu.first(), menu.last()) {
        (Some(1), Some(&hi)) if menu.len() == hi as usize => hi.to_string(),
        (Some(&lo), Some(&hi)) if menu.len() == (hi - lo + 1) as usize => format!("{lo}..={hi}"),
        _ => menu
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(","),
    };
    let mut s = String::new();
    let _ = writeln!(s, "# K L delta");
    let _ = writeln!(s, "{} {l} {}", instance.num_channels(), instance.overhead());
    let _ = writeln!(s, "# id class Q D");
    for svc in instance.services() {
        let _ = writeln!(
            s,
            "{} {} {} {}",
            svc.id, svc.class, svc.demand, svc.deadline
        );
    }
    let _ = writeln!(s, "# R T per service, one line per channel");
    for row in instance.csi_rows() {
        let pairs: Vec<String> = row
            .iter()
            .map(|c| format!("{} {}", c.rate, c.valid_for))
            .collect();
        let _ = writeln!(s, "{}", pairs.join(" "));
    }
    s
}
