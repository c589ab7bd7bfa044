//! Task tables: which processing element runs what.
//!
//! Text form, one entry per line, `#` starts a comment:
//!
//! ```text
//! # pe, task, conversion, path
//! 0, master, -, -
//! 1, rgb_to_ycc, ycc, q88
//! ```

use std::collections::HashSet;
use std::fmt;

use crate::colorspace::{ArithPath, ColorSpace};

use super::ScpaError;

/// Index of a processing element. PE0 is always the master.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeId(pub usize);

impl PeId {
    pub const MASTER: PeId = PeId(0);
}

impl fmt::Display for PeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pe{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskRole {
    Master,
    Convert { space: ColorSpace, path: ArithPath },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskEntry {
    pub pe: PeId,
    pub name: String,
    pub role: TaskRole,
}

impl TaskEntry {
    pub fn master() -> Self {
        Self {
            pe: PeId::MASTER,
            name: "master".into(),
            role: TaskRole::Master,
        }
    }

    pub fn convert(pe: usize, space: ColorSpace, path: ArithPath) -> Self {
        Self {
            pe: PeId(pe),
            name: format!("rgb_to_{}", space.name()),
            role: TaskRole::Convert { space, path },
        }
    }
}

/// Validated, ordered task table. Entry order is start order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskTable {
    entries: Vec<TaskEntry>,
}

fn malformed(line: Option<usize>, reason: impl Into<String>) -> ScpaError {
    ScpaError::MalformedTable {
        line,
        reason: reason.into(),
    }
}

impl TaskTable {
    pub fn new(entries: Vec<TaskEntry>) -> Result<Self, ScpaError> {
        match entries.first() {
            Some(e) if e.pe == PeId::MASTER && e.role == TaskRole::Master => {}
            Some(_) => return Err(malformed(None, "first entry must be the PE0 master task")),
            None => return Err(malformed(None, "table is empty")),
        }
        if entries.len() < 2 {
            return Err(malformed(None, "an array needs at least one worker"));
        }
        let mut seen_pe = HashSet::new();
        let mut seen_space = HashSet::new();
        for e in &entries {
            if !seen_pe.insert(e.pe) {
                return Err(malformed(None, format!("duplicate entry for {}", e.pe)));
            }
            match e.role {
                TaskRole::Master if e.pe != PeId::MASTER => {
                    return Err(malformed(None, format!("only pe0 may be the master, not {}", e.pe)))
                }
                TaskRole::Master => {}
                TaskRole::Convert { space, .. } => {
                    if e.pe == PeId::MASTER {
                        return Err(malformed(None, "pe0 is reserved for the master"));
                    }
                    if !seen_space.insert(space) {
                        return Err(malformed(None, format!("conversion {space} assigned twice")));
                    }
                }
            }
        }
        let n = entries.len();
        if let Some(e) = entries.iter().find(|e| e.pe.0 >= n) {
            return Err(malformed(
                None,
                format!("{} is outside a {n}-PE array (PE indices must be 0..{n})", e.pe),
            ));
        }
        Ok(Self { entries })
    }

    /// PE0 master plus one worker per conversion, numbered from PE1.
    pub fn with_workers(conversions: &[(ColorSpace, ArithPath)]) -> Result<Self, ScpaError> {
        let mut entries = vec![TaskEntry::master()];
        entries.extend(
            conversions
                .iter()
                .enumerate()
                .map(|(i, &(space, path))| TaskEntry::convert(i + 1, space, path)),
        );
        Self::new(entries)
    }

    /// The four-PE array: PE1 YCC, PE2 YIQ, PE3 CMY.
    pub fn default_array() -> Self {
        Self::with_workers(&[
            (ColorSpace::Ycc, ArithPath::Q88),
            (ColorSpace::Yiq, ArithPath::Q88),
            (ColorSpace::Cmy, ArithPath::Q88),
        ])
        .expect("default table is valid")
    }

    pub fn parse(text: &str) -> Result<Self, ScpaError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = Some(idx + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [pe, name, conversion, path] = fields[..] else {
                return Err(malformed(lineno, format!("expected 4 fields, found {}", fields.len())));
            };
            let pe: usize = pe
                .parse()
                .map_err(|_| malformed(lineno, format!("bad PE index '{pe}'")))?;
            if name.is_empty() {
                return Err(malformed(lineno, "empty task name"));
            }
            let role = match (conversion, path) {
                ("-", "-") => TaskRole::Master,
                _ => TaskRole::Convert {
                    space: conversion.parse().map_err(|e| malformed(lineno, format!("{e}")))?,
                    path: path.parse().map_err(|e| malformed(lineno, format!("{e}")))?,
                },
            };
            entries.push(TaskEntry {
                pe: PeId(pe),
                name: name.to_string(),
                role,
            });
        }
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# pe, task, conversion, path\n");
        for e in &self.entries {
            let (conv, path) = match e.role {
                TaskRole::Master => ("-", "-"),
                TaskRole::Convert { space, path } => (space.name(), path.name()),
            };
            out.push_str(&format!("{}, {}, {conv}, {path}\n", e.pe.0, e.name));
        }
        out
    }

    pub fn entries(&self) -> &[TaskEntry] {
        &self.entries
    }

    pub fn pe_count(&self) -> usize {
        self.entries.len()
    }

    /// Worker entries in start order.
    pub fn workers(&self) -> impl Iterator<Item = &TaskEntry> {
        self.entries.iter().skip(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_array_layout() {
        let t = TaskTable::default_array();
        assert_eq!(t.pe_count(), 4);
        let spaces: Vec<_> = t
            .workers()
            .map(|e| match e.role {
                TaskRole::Convert { space, .. } => (e.pe.0, space),
                TaskRole::Master => unreachable!(),
            })
            .collect();
        assert_eq!(
            spaces,
            vec![(1, ColorSpace::Ycc), (2, ColorSpace::Yiq), (3, ColorSpace::Cmy)]
        );
    }

    #[test]
    fn text_round_trip() {
        let t = TaskTable::default_array();
        assert_eq!(TaskTable::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn two_pe_array_is_valid() {
        let t = TaskTable::parse("0, master, -, -\n1, only, cmy, real\n").unwrap();
        assert_eq!(t.pe_count(), 2);
    }

    #[test]
    fn malformed_tables() {
        let cases = [
            "",
            "0, master, -, -\n",
            "1, w, cmy, q88\n0, master, -, -\n",
            "0, master, -, -\n1, a, ycc, q88\n1, b, yiq, q88\n",
            "0, master, -, -\n1, a, ycc, q88\n2, b, ycc, real\n",
            "0, master, -, -\n2, a, ycc, q88\n",
            "0, master, -, -\n1, a, hsv, q88\n",
            "0, master, -, -\n1, a, ycc\n",
            "0, master, -, -\nx, a, ycc, q88\n",
            "0, master, -, -\n1, again, -, -\n",
        ];
        for text in cases {
            assert!(
                matches!(TaskTable::parse(text), Err(ScpaError::MalformedTable { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn parse_error_carries_line() {
        match TaskTable::parse("# header\n0, master, -, -\n1, a, hsv, q88\n") {
            Err(ScpaError::MalformedTable { line, .. }) => assert_eq!(line, Some(3)),
            other => panic!("{other:?}"),
        }
    }
}
