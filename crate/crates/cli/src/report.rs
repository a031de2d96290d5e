use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    result: &'a T,
}

/// Everything a command produces; printing and writing happen in `main`.
pub struct Output {
    pub command: String,
    pub json: String,
    pub table: String,
    /// `Some(false)` turns into exit code 2.
    pub pass: Option<bool>,
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

impl Output {
    pub fn new<T: Serialize>(command: &str, result: &T, table: String) -> anyhow::Result<Self> {
        let env = Envelope { schema_version: SCHEMA_VERSION, command, result };
        Ok(Output {
            command: command.to_string(),
            json: serde_json::to_string_pretty(&env)? + "\n",
            table,
            pass: None,
            files: Vec::new(),
        })
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn file(mut self, path: PathBuf, bytes: Vec<u8>) -> Self {
        self.files.push((path, bytes));
        self
    }

    /// File stem used under `--out`.
    pub fn slug(&self) -> String {
        self.command.replace(' ', "_")
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .enumerate()
            .map(|(i, c)| format!("{c}{}", " ".repeat(w[i] - c.chars().count())))
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&mut s, &mut header.iter().copied());
    for r in rows {
        line(&mut s, &mut r.iter().map(String::as_str));
    }
    s
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn f(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let t = table(&["m", "tan"], &[vec!["12".into(), "5/12".into()], vec!["2".into(), "3/4".into()]]);
        assert_eq!(t, "m   tan\n12  5/12\n2   3/4\n");
    }

    #[test]
    fn envelope_leads_with_schema_version() {
        let o = Output::new("angles", &vec![1, 2], String::new()).unwrap();
        assert!(o.json.starts_with("{\n  \"schema_version\": 1,\n  \"command\": \"angles\""));
        assert_eq!(o.slug(), "angles");
    }
}
