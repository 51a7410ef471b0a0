use cakecut::rational::format_decimal;
use cakecut::valuation::Cut;
use cakecut::{format_rational, CdfValue, IntervalSet, Rational};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

pub fn rational(r: &Rational) -> String {
    format_rational(r)
}

/// JSON form of a value: `{"exact": "p/q"}` or `{"bracket": {"lo", "hi"}}`.
fn value_json(v: &CdfValue) -> Value {
    match v {
        CdfValue::Exact(x) => json!({ "exact": rational(x) }),
        CdfValue::Bracket { lo, hi } => json!({ "bracket": { "lo": rational(lo), "hi": rational(hi) } }),
    }
}

pub struct Render {
    json: bool,
    approx: Option<usize>,
}

impl Render {
    pub fn new(json: bool, approx: Option<usize>) -> Self {
        Render { json, approx }
    }

    fn decimal(&self, r: &Rational) -> Option<String> {
        self.approx.map(|k| format_decimal(r, k))
    }

    fn value_decimal(&self, v: &CdfValue) -> Option<String> {
        match v {
            CdfValue::Exact(x) => self.decimal(x),
            CdfValue::Bracket { lo, hi } => {
                let (lo, hi) = (self.decimal(lo)?, self.decimal(hi)?);
                Some(format!("[{lo}, {hi}]"))
            }
        }
    }

    /// Text line `exact` or `exact<TAB>decimal` when `--approx` is set.
    fn line(&self, exact: String, approx: Option<String>) -> String {
        match approx {
            Some(a) => format!("{exact}\t{a}"),
            None => exact,
        }
    }

    fn emit(&self, command: &str, mut body: Map<String, Value>) {
        body.insert("command".into(), json!(command));
        println!("{}", Value::Object(body));
    }

    fn with_approx(&self, mut value: Value, v: &CdfValue) -> Value {
        if let (Some(a), Value::Object(map)) = (self.value_decimal(v), &mut value) {
            map.insert("approx".into(), json!(a));
        }
        value
    }

    pub fn value(&self, command: &str, context: Value, v: &CdfValue) {
        if self.json {
            let mut body = match context {
                Value::Object(map) => map,
                _ => Map::new(),
            };
            body.insert("value".into(), self.with_approx(value_json(v), v));
            self.emit(command, body);
        } else {
            println!("{}", self.line(v.to_string(), self.value_decimal(v)));
        }
    }

    pub fn cut(&self, cut: &Cut, v: &CdfValue) {
        if self.json {
            let body = json!({
                "piece": cut.piece.to_string(),
                "point": rational(&cut.point),
                "closed": cut.closed,
                "value": self.with_approx(value_json(v), v),
            });
            self.emit("cut", body.as_object().cloned().unwrap_or_default());
        } else {
            println!("{}", cut.piece);
        }
    }

    pub fn slice(&self, epsilon: &Rational, pieces: &[(IntervalSet, CdfValue)]) {
        if self.json {
            let rows: Vec<Value> = pieces
                .iter()
                .map(|(p, v)| json!({ "piece": p.to_string(), "value": self.with_approx(value_json(v), v) }))
                .collect();
            let body = json!({ "epsilon": rational(epsilon), "pieces": rows });
            self.emit("slice", body.as_object().cloned().unwrap_or_default());
        } else {
            for (p, v) in pieces {
                println!("{p}\t{}", self.line(v.to_string(), self.value_decimal(v)));
            }
        }
    }

    pub fn protocol(&self, report: &Value) {
        if self.json {
            let mut body = report.as_object().cloned().unwrap_or_default();
            body.insert("command".into(), json!("protocol"));
            println!("{}", Value::Object(body));
            return;
        }
        println!("protocol: {}", report["protocol"].as_str().unwrap_or_default());
        let pieces = report["pieces"].as_object().cloned().unwrap_or_default();
        let values = report["values"].as_array().cloned().unwrap_or_default();
        println!("player\tpiece\tvalue");
        for (i, row) in values.iter().enumerate() {
            let piece = pieces
                .get(&i.to_string())
                .and_then(Value::as_str)
                .unwrap_or("{}");
            let own = row[i].as_str().unwrap_or_default();
            println!("{i}\t{piece}\t{own}");
        }
        let verdict = |b: &Value| if b.as_bool() == Some(true) { "yes" } else { "no" };
        println!("proportional: {}", verdict(&report["proportional"]));
        println!("envy-free: {}", verdict(&report["envy_free"]));
    }

    pub fn cantor(&self, p: &Rational, rows: &[(u32, BigInt, Rational, Rational)]) {
        if self.json {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, components, remaining, removed)| {
                    let mut row = json!({
                        "n": n,
                        "components": components.to_string(),
                        "remaining": rational(remaining),
                        "removed": rational(removed),
                    });
                    if let Some(a) = self.decimal(remaining) {
                        row["remaining_approx"] = json!(a);
                    }
                    row
                })
                .collect();
            let body = json!({ "p": rational(p), "rows": rows });
            self.emit("cantor", body.as_object().cloned().unwrap_or_default());
            return;
        }
        let approx = if self.approx.is_some() { "\tapprox" } else { "" };
        println!("n\tcomponents\tremaining\tremoved{approx}");
        for (n, components, remaining, removed) in rows {
            let line = format!("{n}\t{components}\t{}\t{}", rational(remaining), rational(removed));
            println!("{}", self.line(line, self.decimal(remaining)));
        }
    }

    pub fn witness(&self, n: u32, set: &IntervalSet) {
        if self.json {
            let body = json!({ "n": n, "components": set.len(), "set": set.to_string() });
            self.emit("witness", body.as_object().cloned().unwrap_or_default());
        } else {
            println!("{set}");
        }
    }
}
