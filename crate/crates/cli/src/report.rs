use std::fmt::Write as _;

/// Collects output in one of two styles: prose for people, or `key=value` records.
pub struct Report {
    machine: bool,
    out: String,
}

fn value(v: &str) -> String {
    if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '\\') {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

impl Report {
    pub fn new(machine: bool) -> Report {
        Report {
            machine,
            out: String::new(),
        }
    }

    /// A line shown only in prose mode.
    pub fn text(&mut self, line: impl AsRef<str>) {
        if !self.machine {
            self.out.push_str(line.as_ref());
            if !line.as_ref().ends_with('\n') {
                self.out.push('\n');
            }
        }
    }

    /// A record shown only in machine mode.
    pub fn record(&mut self, fields: &[(&str, &str)]) {
        if self.machine {
            let items: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", value(v))).collect();
            let _ = writeln!(self.out, "{}", items.join(" "));
        }
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        let mut r = Report::new(true);
        r.text("hidden");
        r.record(&[("a", "x"), ("f", "p -> q"), ("e", "")]);
        assert_eq!(r.finish(), "a=x f=\"p -> q\" e=\"\"\n");
        let mut r = Report::new(false);
        r.text("shown");
        r.record(&[("a", "x")]);
        assert_eq!(r.finish(), "shown\n");
    }
}
