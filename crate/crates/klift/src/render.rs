//! Output assembly: the versioned result document, plus small shared
//! renderers for graded dimensions, flags, windows, and witnesses.
//!
//! Determinism contract: the document depends only on the script, the
//! seed, and the bounds. No paths, no timestamps, no map iteration with
//! unstable order. JSON object keys keep insertion order, so emit and
//! re-emit of the same document are byte identical.

use serde_json::{json, Map, Value};

use klift_core::ext::DerivedEntry;
use klift_core::lifting::{LiftFlags, LimitChecks, ObstructionWindow, ObstructionWitness};
use klift_core::module::FPModule;
use klift_core::ring::Ring;

use crate::eval::{Bounds, CmdOutput};

/// Schema tag stamped on every document.
pub const SCHEMA: &str = "klift-result-v1";

/// Graded dimensions of a module from its minimal generator degree up
/// to `bound`, with trailing zeros trimmed.
pub fn dims_value(m: &FPModule, bound: i64) -> Value {
    let Some(start) = m.min_gen_degree() else {
        return json!({"start": 0, "dims": []});
    };
    let mut dims: Vec<usize> = Vec::new();
    let mut d = start;
    while d <= bound {
        dims.push(m.graded_dim(d));
        d += 1;
    }
    while dims.last() == Some(&0) {
        dims.pop();
    }
    json!({"start": start, "dims": dims})
}

/// Text form of `dims_value`; a module with no dimensions in the window
/// prints as `zero`.
pub fn dims_text(m: &FPModule, bound: i64) -> String {
    let v = dims_value(m, bound);
    let dims = v["dims"].as_array().expect("dims array");
    if dims.is_empty() {
        return "zero".to_string();
    }
    let start = v["start"].as_i64().expect("start");
    let list: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("start {start}, dims [{}]", list.join(", "))
}

/// JSON rows for a run of derived entries.
pub fn entries_value(entries: &[DerivedEntry], bound: i64) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| json!({"index": e.index, "group": dims_value(&e.module, bound)}))
            .collect(),
    )
}

/// Text lines `label^i: ...` for a run of derived entries.
pub fn entries_text(label: &str, entries: &[DerivedEntry], bound: i64) -> Vec<String> {
    entries
        .iter()
        .map(|e| format!("{label}^{}: {}", e.index, dims_text(&e.module, bound)))
        .collect()
}

/// All step acceptance flags as a JSON object.
pub fn flags_value(f: &LiftFlags) -> Value {
    json!({
        "annihilated": f.annihilated,
        "extension_exact": f.extension_exact,
        "reduces_to_base": f.reduces_to_base,
        "truncates_to_previous": f.truncates_to_previous,
        "deep_torsion_matches": f.deep_torsion_matches,
        "socle_matches": f.socle_matches,
        "all_ok": f.all_ok(),
    })
}

/// Short text for step flags: `all ok` or the failing names.
pub fn flags_text(f: &LiftFlags) -> String {
    if f.all_ok() {
        return "all ok".to_string();
    }
    let mut failing = Vec::new();
    if !f.annihilated {
        failing.push("annihilated");
    }
    if !f.extension_exact {
        failing.push("extension_exact");
    }
    if !f.reduces_to_base {
        failing.push("reduces_to_base");
    }
    if !f.truncates_to_previous {
        failing.push("truncates_to_previous");
    }
    if !f.deep_torsion_matches {
        failing.push("deep_torsion_matches");
    }
    if !f.socle_matches {
        failing.push("socle_matches");
    }
    format!("failing: {}", failing.join(", "))
}

/// Limit reconstruction checks as JSON.
pub fn checks_value(c: &LimitChecks) -> Value {
    json!({
        "truncation_dims_match": c.truncation_dims_match,
        "torsion_free_window": c.torsion_free_window,
        "power_kernels_vanish": c.power_kernels_vanish,
        "all_ok": c.all_ok(),
    })
}

/// Obstruction window: the scanned range, its nonzero entries, and the
/// vanishing verdict.
pub fn window_value(w: &ObstructionWindow) -> Value {
    let range = match (w.dims.first(), w.dims.last()) {
        (Some((lo, _)), Some((hi, _))) => json!([lo, hi]),
        _ => Value::Null,
    };
    let nonzero: Vec<Value> = w
        .dims
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|(d, n)| json!([d, n]))
        .collect();
    json!({"range": range, "nonzero": nonzero, "vanishes": w.vanishes})
}

/// One line summary of an obstruction window.
pub fn window_text(w: &ObstructionWindow) -> String {
    let range = match (w.dims.first(), w.dims.last()) {
        (Some((lo, _)), Some((hi, _))) => format!("[{lo}, {hi}]"),
        _ => "[]".to_string(),
    };
    let nonzero: Vec<String> = w
        .dims
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|(d, n)| format!("{d}: {n}"))
        .collect();
    if nonzero.is_empty() {
        format!("window {range}: zero, vanishes: {}", w.vanishes)
    } else {
        format!(
            "window {range}: {{{}}}, vanishes: {}",
            nonzero.join(", "),
            w.vanishes
        )
    }
}

fn vect_string(ring: &Ring, v: &[klift_core::poly::Poly]) -> String {
    let parts: Vec<String> = v.iter().map(|p| ring.poly_string(p)).collect();
    format!("({})", parts.join(", "))
}

/// Obstruction witness as JSON. The class witness carries the level it
/// lives in and the class rendered in that level's presentation.
pub fn witness_value(ring: &Ring, w: &ObstructionWitness, bound: i64) -> Value {
    match w {
        ObstructionWitness::NonsplitClass { entry, class } => json!({
            "type": "nonsplit_class",
            "index": entry.index,
            "group": dims_value(&entry.module, bound),
            "class": entry.module.elem_string(class),
        }),
        ObstructionWitness::ReductionKernel { element } => json!({
            "type": "reduction_kernel",
            "element": vect_string(ring, element),
        }),
        ObstructionWitness::CollapsedElement => json!({"type": "collapsed_element"}),
    }
}

/// One line description of an obstruction witness.
pub fn witness_text(ring: &Ring, w: &ObstructionWitness) -> String {
    match w {
        ObstructionWitness::NonsplitClass { entry, class } => format!(
            "nonsplit class {} at level {}",
            entry.module.elem_string(class),
            entry.index
        ),
        ObstructionWitness::ReductionKernel { element } => format!(
            "reduction kernel element {}",
            vect_string(ring, element)
        ),
        ObstructionWitness::CollapsedElement => "collapsed element".to_string(),
    }
}

/// One executed command with its source text.
pub struct CommandRecord {
    /// Zero based position in the script.
    pub index: usize,
    /// The command as written, whitespace collapsed.
    pub echo: String,
    /// Its output.
    pub out: CmdOutput,
}

/// Assemble the full result document.
pub fn document_json(bounds: &Bounds, records: &[CommandRecord]) -> Value {
    let all_ok = records.iter().all(|r| r.out.ok);
    let commands: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("index".to_string(), json!(r.index));
            obj.insert("command".to_string(), json!(r.echo));
            obj.insert(
                "status".to_string(),
                json!(if r.out.ok { "ok" } else { "error" }),
            );
            if let Some(p) = &r.out.payload {
                obj.insert("payload".to_string(), p.clone());
            }
            if let Some(e) = &r.out.error {
                obj.insert("error".to_string(), json!(e));
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "tool": "klift",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": bounds.seed,
        "bounds": {
            "order": bounds.order,
            "degree_bound": bounds.degree_bound,
            "i_max": bounds.i_max,
            "retry_breadth": bounds.retry_breadth,
        },
        "status": if all_ok { "ok" } else { "error" },
        "commands": commands,
    })
}

/// Serialize a document with a trailing newline.
pub fn document_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document is valid JSON");
    s.push('\n');
    s
}

/// Plain text report for terminal use.
pub fn document_text(bounds: &Bounds, records: &[CommandRecord]) -> String {
    let all_ok = records.iter().all(|r| r.out.ok);
    let mut out = String::new();
    out.push_str(&format!("klift {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!(
        "seed {}, order {}, degree bound {}, ext bound {}, retry breadth {}\n\n",
        bounds.seed, bounds.order, bounds.degree_bound, bounds.i_max, bounds.retry_breadth
    ));
    for r in records {
        out.push_str(&format!("[{}] {}\n", r.index, r.echo));
        for line in &r.out.text {
            out.push_str("    ");
            out.push_str(line);
            out.push('\n');
        }
        if let Some(e) = &r.out.error {
            out.push_str("    error: ");
            out.push_str(e);
            out.push('\n');
        }
        out.push('\n');
    }
    out.push_str(if all_ok { "status: ok\n" } else { "status: error\n" });
    out
}
