//! Plain-text reports: `key = value` lines grouped under `[section]`
//! headers, rendered byte-stably in insertion order.

#[derive(Clone, Debug, Default)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Append an entry, opening the section if this is its first key.
    /// Section and key order is insertion order; keys are unique per
    /// section.
    pub fn entry(&mut self, section: &str, key: &str, value: impl std::fmt::Display) {
        let entries = match self.sections.iter_mut().position(|(name, _)| name == section) {
            Some(i) => &mut self.sections[i].1,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                &mut self.sections.last_mut().expect("just pushed").1
            }
        };
        debug_assert!(
            entries.iter().all(|(k, _)| k != key),
            "duplicate key {key:?} in section {section:?}"
        );
        entries.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{name}]\n"));
            for (key, value) in entries {
                out.push_str(&format!("{key} = {value}\n"));
            }
        }
        out
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}
