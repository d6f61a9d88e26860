use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "sailkit/1";

/// Result of one command: JSON fields plus a plain-text rendering.
pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub text: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, fields: Map::new(), text: None }
    }

    pub fn field<T: Serialize>(mut self, key: &str, v: T) -> Self {
        self.fields.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
        self
    }

    /// Copies the fields of a serializable struct.
    pub fn merge<T: Serialize>(mut self, v: &T) -> Self {
        if let Value::Object(m) = serde_json::to_value(v).expect("serializable") {
            self.fields.extend(m);
        }
        self
    }

    pub fn text(mut self, t: impl Into<String>) -> Self {
        self.text = Some(t.into());
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut m = Map::new();
            m.insert("schema".into(), Value::from(SCHEMA));
            m.insert("command".into(), Value::from(self.command));
            m.extend(self.fields.clone());
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
            s.push('\n');
            return s;
        }
        if let Some(t) = &self.text {
            let mut t = t.clone();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            return t;
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_f64() => n.as_f64().expect("f64").to_string(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }
}
