//! Line-oriented machine reports.
//!
//! Every line is one record: a kind followed by space-separated `key=value` fields.
//! Values escape `%`, space, `=`, tab, newline and carriage return as `%25`, `%20`, `%3D`,
//! `%09`, `%0A`, `%0D`.
//!
//! ```text
//! path index=0 name=@v length=0
//! summary status=pass count=15
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("report line {line}: {message}")]
pub struct ReportError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self { kind: kind.to_string(), fields: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '%' => out.push_str("%25"),
            ' ' => out.push_str("%20"),
            '=' => out.push_str("%3D"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str, line: usize) -> Result<String, ReportError> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(ch) = it.next() {
        if ch != '%' {
            out.push(ch);
            continue;
        }
        let code: String = it.by_ref().take(2).collect();
        let c = match code.as_str() {
            "25" => '%',
            "20" => ' ',
            "3D" => '=',
            "09" => '\t',
            "0A" => '\n',
            "0D" => '\r',
            _ => return Err(ReportError { line, message: format!("bad escape %{code}") }),
        };
        out.push(c);
    }
    Ok(out)
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={}", escape(v))?;
        }
        Ok(())
    }
}

pub fn write_records(records: &[Record]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}

/// Reads what [`write_records`] writes. Blank lines are skipped.
pub fn read_records(text: &str) -> Result<Vec<Record>, ReportError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let mut parts = l.split(' ').filter(|p| !p.is_empty());
        let Some(kind) = parts.next() else { continue };
        if kind.contains('=') {
            return Err(ReportError { line, message: "record has no kind".into() });
        }
        let mut rec = Record::new(kind);
        for p in parts {
            let Some((k, v)) = p.split_once('=') else {
                return Err(ReportError { line, message: format!("field `{p}` has no `=`") });
            };
            if k.is_empty() {
                return Err(ReportError { line, message: "empty key".into() });
            }
            rec.fields.push((k.to_string(), unescape(v, line)?));
        }
        out.push(rec);
    }
    Ok(out)
}
