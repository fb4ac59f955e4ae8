use serde::Serialize;
use serde_json::{Map, Value};

use super::round_sig;
use crate::error::{Error, ErrorClass};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportVerdict {
    Certified,
    NotCertified,
    Infeasible,
    InvalidInput,
    NumericalFailure,
}

impl ReportVerdict {
    pub fn exit_code(self) -> i32 {
        match self {
            ReportVerdict::Certified => 0,
            ReportVerdict::NotCertified | ReportVerdict::Infeasible => 1,
            ReportVerdict::InvalidInput => 2,
            ReportVerdict::NumericalFailure => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            ReportVerdict::Certified
        } else {
            ReportVerdict::NotCertified
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e.class() {
            ErrorClass::InvalidInput => ReportVerdict::InvalidInput,
            ErrorClass::Infeasible => ReportVerdict::Infeasible,
            ErrorClass::Numerical => ReportVerdict::NumericalFailure,
        }
    }
}

/// Top-level JSON report written by every command.
#[derive(Debug, Clone)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub verdict: ReportVerdict,
}

impl ReportEnvelope {
    pub fn new(command: &str, inputs: impl Serialize, results: impl Serialize, verdict: ReportVerdict) -> Self {
        Self {
            command: command.into(),
            inputs: serde_json::to_value(inputs).unwrap_or(Value::Null),
            results: serde_json::to_value(results).unwrap_or(Value::Null),
            verdict,
        }
    }

    pub fn from_error(command: &str, inputs: impl Serialize, e: &Error) -> Self {
        let mut results = Map::new();
        results.insert("error".into(), Value::String(e.to_string()));
        Self::new(command, inputs, Value::Object(results), ReportVerdict::from_error(e))
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), canonical(&self.inputs));
        m.insert("results".into(), canonical(&self.results));
        m.insert("verdict".into(), serde_json::to_value(self.verdict).expect("verdict"));
        m.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
        m.insert("tolerances".into(), canonical(&serde_json::to_value(tolerance::current()).expect("tol")));
        Value::Object(m)
    }

    /// Pretty JSON with sorted keys and floats cut to 12 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }
}

/// Rounds every float; object keys come out sorted because `Map` is ordered.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), canonical(v))).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_rounded() {
        let r = ReportEnvelope::new(
            "x",
            serde_json::json!({"b": 1, "a": 2}),
            serde_json::json!({"pi": std::f64::consts::PI}),
            ReportVerdict::Certified,
        );
        let s = r.to_json();
        assert!(s.contains("3.14159265359"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"command\"").unwrap() < s.find("\"verdict\"").unwrap());
        assert_eq!(s, r.to_json());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(ReportVerdict::Certified.exit_code(), 0);
        assert_eq!(ReportVerdict::NotCertified.exit_code(), 1);
        assert_eq!(ReportVerdict::Infeasible.exit_code(), 1);
        assert_eq!(ReportVerdict::InvalidInput.exit_code(), 2);
        assert_eq!(ReportVerdict::NumericalFailure.exit_code(), 3);
    }
}
