use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub const SCHEMA: &str = "neutral-geom/1";

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
}

impl Check {
    /// Non-finite actual values never pass.
    pub fn pass(&self) -> bool {
        (self.expected - self.actual).abs() <= self.tolerance
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Check", 5)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("expected", &self.expected)?;
        st.serialize_field("actual", &finite_or_none(self.actual))?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("pass", &self.pass())?;
        st.end()
    }
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            schema: SCHEMA,
            command: command.to_string(),
            timestamp: None,
            inputs,
            results: Value::Object(Default::default()),
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, expected: f64, actual: f64, tolerance: f64) {
        self.checks.push(Check { name: name.to_string(), expected, actual, tolerance });
    }

    /// Records a library failure as a non-finite actual value.
    pub fn check_result(&mut self, name: &str, expected: f64, actual: neutral_geom::Result<f64>, tolerance: f64) {
        self.check(name, expected, actual.unwrap_or(f64::NAN), tolerance);
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut self.results {
            m.insert(key.to_string(), v);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_recomputed() {
        let mut r = RunReport::new("x", Value::Null);
        r.check("a", 1.0, 1.0 + 1e-9, 1e-8);
        r.check("b", 0.0, f64::NAN, 1.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][0]["pass"], true);
        assert_eq!(v["checks"][1]["pass"], false);
        assert_eq!(v["checks"][1]["actual"], Value::Null);
        assert_eq!(v["schema"], SCHEMA);
        assert!(!r.all_pass());
    }
}
