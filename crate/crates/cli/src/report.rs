//! Reports as ordered `key: value` pairs, rendered for people or machines.

use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Negative,
    Inconclusive,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Success => "success",
            Status::Negative => "negative",
            Status::Inconclusive => "inconclusive",
            Status::InputError => "input-error",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// One entry per line of `text`.
    pub fn push_lines(&mut self, key: &str, text: &str) {
        for line in text.lines() {
            self.push(key, line);
        }
    }

    #[allow(dead_code)]
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    #[allow(dead_code)]
    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.entries.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn machine(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}: {v}");
        }
        s
    }

    #[allow(dead_code)]
    pub fn parse_machine(text: &str) -> Option<Report> {
        let mut r = Report::default();
        for line in text.lines() {
            let (k, v) = line.split_once(": ")?;
            r.entries.push((k.to_string(), v.to_string()));
        }
        Some(r)
    }

    pub fn human(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s = String::new();
        let mut last = "";
        for (k, v) in &self.entries {
            if k == last {
                let _ = writeln!(s, "{:width$}  {v}", "");
            } else {
                let _ = writeln!(s, "{k:width$}  {v}");
            }
            last = k;
        }
        s
    }
}
