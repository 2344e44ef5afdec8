//! Evaluation: binding declarations into an environment, resolving
//! command arguments against it, and dispatching commands to the engine.
//!
//! Every constructor argument can be a previously declared name or an
//! inline constructor with the same syntax as a declaration right-hand
//! side, so `lift(A=poly(F3; u:1); x=u; ...)` works without separate
//! `ring` lines. Errors carry the source position of the statement they
//! came from.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde_json::{json, Value};

use klift_core::complex::ChainComplex;
use klift_core::dg::{dg_ext, dg_tor};
use klift_core::ext::{ext_disc, tor_disc};
use klift_core::formulas::{
    direct_summand_check, periodic_tensor_complex, power_quotient_tensor_closed_form,
    summand_check_from_complex, SummandReport,
};
use klift_core::gb::Vect;
use klift_core::koszul::{regular_on_ring, KoszulAlgebra};
use klift_core::lifting::{
    check_lci, lift_multi, lift_step_with, lift_to_order, obstruction_window, reconstruct_limit,
    stage_reduction, step_certificates, LciVerdict, LiftOptions, StepOutcome,
};
use klift_core::module::{FPModule, ModuleMap};
use klift_core::mono::MonoOrder;
use klift_core::poly::Poly;
use klift_core::resolution::FreeResolution;
use klift_core::ring::Ring;
use klift_core::scalar::FieldSpec;
use klift_core::Error as CoreError;

use crate::render::{
    checks_value, dims_text, dims_value, entries_text, entries_value, flags_text, flags_value,
    window_text, window_value, witness_text, witness_value,
};
use crate::script::{bracket_items, key_value, split_top, strip_call, DeclKind, Group, Pos, Raw};
use crate::fixtures;

/// Global bounds a run operates under. Commands may override the
/// relevant ones per call (`N=`, `D=`, `i=`, `breadth=`).
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    /// Default lift order (`N`).
    pub order: usize,
    /// Default internal degree bound (`D`).
    pub degree_bound: i64,
    /// Default homological bound (`i`).
    pub i_max: usize,
    /// Default retraction search breadth.
    pub retry_breadth: usize,
    /// Seed for isomorphism searches.
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            order: 5,
            degree_bound: 12,
            i_max: 4,
            retry_breadth: 1,
            seed: 0,
        }
    }
}

#[derive(Clone)]
enum Binding {
    Ring(Ring),
    Elem(Ring, Poly),
    Module(FPModule),
    Complex(ChainComplex),
}

impl Binding {
    fn kind(&self) -> &'static str {
        match self {
            Binding::Ring(_) => "ring",
            Binding::Elem(..) => "element",
            Binding::Module(_) => "module",
            Binding::Complex(_) => "complex",
        }
    }
}

/// Name environment built up by declarations. One namespace for all
/// binding kinds, so diagnostics can say what a misused name actually is.
#[derive(Clone, Default)]
pub struct Env {
    names: BTreeMap<String, Binding>,
}

fn at(pos: Pos, msg: impl std::fmt::Display) -> String {
    format!("{pos}: {msg}")
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Env {
    fn lookup(&self, name: &str, want: &'static str, pos: Pos) -> Result<&Binding, String> {
        let b = self
            .names
            .get(name)
            .ok_or_else(|| at(pos, format!("unbound name '{name}'")))?;
        if b.kind() != want {
            return Err(at(
                pos,
                format!("'{name}' is a {}, not a {want}", b.kind()),
            ));
        }
        Ok(b)
    }

    fn ring(&self, name: &str, pos: Pos) -> Result<Ring, String> {
        match self.lookup(name, "ring", pos)? {
            Binding::Ring(r) => Ok(r.clone()),
            _ => unreachable!(),
        }
    }

    fn module(&self, name: &str, pos: Pos) -> Result<FPModule, String> {
        match self.lookup(name, "module", pos)? {
            Binding::Module(m) => Ok(m.clone()),
            _ => unreachable!(),
        }
    }

    fn complex(&self, name: &str, pos: Pos) -> Result<ChainComplex, String> {
        match self.lookup(name, "complex", pos)? {
            Binding::Complex(c) => Ok(c.clone()),
            _ => unreachable!(),
        }
    }

    fn binding_kind(&self, name: &str) -> Option<&'static str> {
        self.names.get(name).map(Binding::kind)
    }
}

/// Evaluate one declaration into the environment.
pub fn eval_decl(env: &mut Env, kind: DeclKind, name: &str, rhs: &Raw) -> Result<(), String> {
    if let Some(k) = env.binding_kind(name) {
        return Err(at(rhs.pos, format!("'{name}' is already bound as a {k}")));
    }
    let binding = match kind {
        DeclKind::Ring => Binding::Ring(eval_ring_expr(env, rhs)?),
        DeclKind::Elem => {
            let (r, p) = eval_elem_decl(env, rhs)?;
            Binding::Elem(r, p)
        }
        DeclKind::Module => Binding::Module(eval_module_expr(env, rhs)?),
        DeclKind::Complex => Binding::Complex(eval_complex_expr(env, rhs)?),
    };
    env.names.insert(name.to_string(), binding);
    Ok(())
}

fn eval_ring_expr(env: &Env, raw: &Raw) -> Result<Ring, String> {
    let parts = split_top(&raw.text, '/');
    if parts.is_empty() {
        return Err(at(raw.pos, "empty ring expression"));
    }
    let mut ring = ring_base(env, parts[0], raw.pos)?;
    for part in &parts[1..] {
        let inner = strip_call(part, "ideal").ok_or_else(|| {
            at(
                raw.pos,
                format!("expected ideal(...) after '/', got '{part}'"),
            )
        })?;
        let gens_txt = split_top(inner, ',');
        if gens_txt.is_empty() {
            return Err(at(raw.pos, "ideal(...) needs at least one generator"));
        }
        let mut gens = Vec::with_capacity(gens_txt.len());
        for t in gens_txt {
            gens.push(ring.parse_poly(t).map_err(|e| at(raw.pos, e))?);
        }
        ring = ring.quotient(&gens).map_err(|e| at(raw.pos, e))?;
    }
    Ok(ring)
}

fn ring_base(env: &Env, text: &str, pos: Pos) -> Result<Ring, String> {
    if is_ident(text) {
        return env.ring(text, pos);
    }
    if let Some(inner) = strip_call(text, "poly") {
        return poly_ring_ctor(inner, pos);
    }
    Err(at(
        pos,
        format!("expected a ring name or poly(FIELD; var:weight, ...), got '{text}'"),
    ))
}

fn poly_ring_ctor(inner: &str, pos: Pos) -> Result<Ring, String> {
    let groups = split_top(inner, ';');
    if groups.len() != 2 {
        return Err(at(
            pos,
            "poly takes two groups: poly(FIELD; var:weight, ...)",
        ));
    }
    let field = parse_field(groups[0], pos)?;
    let vars_txt = split_top(groups[1], ',');
    if vars_txt.is_empty() {
        return Err(at(pos, "poly(...) needs at least one variable"));
    }
    let mut pairs: Vec<(String, i64)> = Vec::with_capacity(vars_txt.len());
    for v in vars_txt {
        let Some((name, deg)) = v.split_once(':') else {
            return Err(at(pos, format!("expected var:weight, got '{v}'")));
        };
        let name = name.trim();
        let deg = deg.trim();
        let d: i64 = deg
            .parse()
            .map_err(|_| at(pos, format!("bad weight '{deg}' for variable '{name}'")))?;
        if d < 1 {
            return Err(at(pos, "degrees must be \u{2265} 1"));
        }
        pairs.push((name.to_string(), d));
    }
    let borrowed: Vec<(&str, i64)> = pairs.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    Ring::polynomial_ring(field, &borrowed, MonoOrder::GrevLex).map_err(|e| at(pos, e))
}

fn parse_field(text: &str, pos: Pos) -> Result<FieldSpec, String> {
    let t = text.trim();
    if t == "Q" {
        return Ok(FieldSpec::Q);
    }
    if let Some(digits) = t.strip_prefix('F') {
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let p: u64 = digits
                .parse()
                .map_err(|_| at(pos, format!("field characteristic '{digits}' out of range")))?;
            return FieldSpec::prime_field(p).map_err(|e| at(pos, e));
        }
    }
    Err(at(pos, format!("unknown field '{t}'; use F<p> or Q")))
}

fn eval_module_expr(env: &Env, raw: &Raw) -> Result<FPModule, String> {
    let t = raw.text.trim();
    if is_ident(t) {
        return env.module(t, raw.pos);
    }
    if let Some(inner) = strip_call(t, "coker") {
        return coker_ctor(env, inner, raw.pos);
    }
    if let Some(inner) = strip_call(t, "free") {
        return free_ctor(env, inner, raw.pos);
    }
    Err(at(
        raw.pos,
        format!("expected a module name, coker(...), or free(...), got '{t}'"),
    ))
}

/// Split constructor groups after the leading positional one into a
/// key -> value map, rejecting unknown and duplicate keys.
fn named_groups<'a>(
    groups: &[&'a str],
    allowed: &[&str],
    ctor: &str,
    pos: Pos,
) -> Result<BTreeMap<String, &'a str>, String> {
    let mut out = BTreeMap::new();
    for g in groups {
        let Some((k, v)) = key_value(g) else {
            return Err(at(pos, format!("expected key=value in {ctor}, got '{g}'")));
        };
        if !allowed.contains(&k) {
            return Err(at(pos, format!("unknown argument '{k}' for {ctor}")));
        }
        if out.insert(k.to_string(), v).is_some() {
            return Err(at(pos, format!("duplicate argument '{k}' for {ctor}")));
        }
    }
    Ok(out)
}

fn int_list(text: &str, pos: Pos, what: &str) -> Result<Vec<i64>, String> {
    let items = bracket_items(text)
        .ok_or_else(|| at(pos, format!("{what} must be a bracketed list, got '{text}'")))?;
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        out.push(
            it.parse::<i64>()
                .map_err(|_| at(pos, format!("bad integer '{it}' in {what}")))?,
        );
    }
    Ok(out)
}

fn poly_vect(ring: &Ring, text: &str, pos: Pos, what: &str) -> Result<Vect, String> {
    let items = bracket_items(text)
        .ok_or_else(|| at(pos, format!("{what} must be a bracketed list, got '{text}'")))?;
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        out.push(ring.parse_poly(it).map_err(|e| at(pos, e))?);
    }
    Ok(out)
}

fn coker_ctor(env: &Env, inner: &str, pos: Pos) -> Result<FPModule, String> {
    let groups = split_top(inner, ';');
    if groups.is_empty() {
        return Err(at(pos, "coker(RING; shifts=[...]; rels=[[...], ...])"));
    }
    let ring = eval_ring_expr(
        env,
        &Raw {
            text: groups[0].to_string(),
            pos,
        },
    )?;
    let named = named_groups(&groups[1..], &["shifts", "rels"], "coker", pos)?;
    let shifts = match named.get("shifts") {
        Some(v) => int_list(v, pos, "shifts")?,
        None => return Err(at(pos, "coker needs shifts=[...]")),
    };
    let mut rels: Vec<Vect> = Vec::new();
    if let Some(v) = named.get("rels") {
        let items = bracket_items(v)
            .ok_or_else(|| at(pos, format!("rels must be a bracketed list, got '{v}'")))?;
        for (j, it) in items.iter().enumerate() {
            let rel = poly_vect(&ring, it, pos, "each relation")?;
            if rel.len() != shifts.len() {
                return Err(at(
                    pos,
                    format!(
                        "relation {j} has {} entries, expected {}",
                        rel.len(),
                        shifts.len()
                    ),
                ));
            }
            rels.push(rel);
        }
    }
    FPModule::new(&ring, shifts, rels).map_err(|e| at(pos, e))
}

fn free_ctor(env: &Env, inner: &str, pos: Pos) -> Result<FPModule, String> {
    let groups = split_top(inner, ';');
    if groups.is_empty() {
        return Err(at(pos, "free(RING; shifts=[...])"));
    }
    let ring = eval_ring_expr(
        env,
        &Raw {
            text: groups[0].to_string(),
            pos,
        },
    )?;
    let named = named_groups(&groups[1..], &["shifts"], "free", pos)?;
    let shifts = match named.get("shifts") {
        Some(v) => int_list(v, pos, "shifts")?,
        None => return Err(at(pos, "free needs shifts=[...]")),
    };
    Ok(FPModule::free(&ring, &shifts))
}

fn eval_elem_decl(env: &Env, raw: &Raw) -> Result<(Ring, Poly), String> {
    let Some(inner) = strip_call(&raw.text, "el") else {
        return Err(at(
            raw.pos,
            format!("expected el(RING; polynomial), got '{}'", raw.text),
        ));
    };
    let groups = split_top(inner, ';');
    if groups.len() != 2 {
        return Err(at(raw.pos, "el takes two groups: el(RING; polynomial)"));
    }
    let ring = eval_ring_expr(
        env,
        &Raw {
            text: groups[0].to_string(),
            pos: raw.pos,
        },
    )?;
    let p = ring.parse_poly(groups[1]).map_err(|e| at(raw.pos, e))?;
    Ok((ring, p))
}

fn eval_complex_expr(env: &Env, raw: &Raw) -> Result<ChainComplex, String> {
    let t = raw.text.trim();
    if is_ident(t) {
        return env.complex(t, raw.pos);
    }
    let Some(inner) = strip_call(t, "complex") else {
        return Err(at(
            raw.pos,
            format!("expected a complex name or complex(...), got '{t}'"),
        ));
    };
    let pos = raw.pos;
    let groups = split_top(inner, ';');
    if groups.is_empty() {
        return Err(at(pos, "complex(RING; at=INT; shifts=[[...]]; maps=[...])"));
    }
    let ring = eval_ring_expr(
        env,
        &Raw {
            text: groups[0].to_string(),
            pos,
        },
    )?;
    let named = named_groups(&groups[1..], &["at", "shifts", "maps"], "complex", pos)?;
    let lo: i64 = match named.get("at") {
        Some(v) => v
            .parse()
            .map_err(|_| at(pos, format!("bad integer '{v}' for at")))?,
        None => 0,
    };
    let shift_rows: Vec<Vec<i64>> = match named.get("shifts") {
        Some(v) => {
            let items = bracket_items(v)
                .ok_or_else(|| at(pos, format!("shifts must be a bracketed list, got '{v}'")))?;
            let mut rows = Vec::with_capacity(items.len());
            for it in items {
                rows.push(int_list(it, pos, "each term's shifts")?);
            }
            rows
        }
        None => return Err(at(pos, "complex needs shifts=[[...], ...]")),
    };
    if shift_rows.is_empty() {
        return Err(at(pos, "complex needs at least one term"));
    }
    let terms: Vec<FPModule> = shift_rows
        .iter()
        .map(|row| FPModule::free(&ring, row))
        .collect();
    let maps_txt: Vec<&str> = match named.get("maps") {
        Some(v) => bracket_items(v)
            .ok_or_else(|| at(pos, format!("maps must be a bracketed list, got '{v}'")))?,
        None => Vec::new(),
    };
    if maps_txt.len() + 1 != terms.len() {
        return Err(at(
            pos,
            format!(
                "expected {} differentials for {} terms, got {}",
                terms.len() - 1,
                terms.len(),
                maps_txt.len()
            ),
        ));
    }
    let mut maps = Vec::with_capacity(maps_txt.len());
    for (j, mtxt) in maps_txt.iter().enumerate() {
        let cols_txt = bracket_items(mtxt).ok_or_else(|| {
            at(
                pos,
                format!("differential {} must be a list of columns", j + 1),
            )
        })?;
        if cols_txt.len() != terms[j + 1].rank() {
            return Err(at(
                pos,
                format!(
                    "differential {} has {} columns, expected {} (one per generator of the higher term)",
                    j + 1,
                    cols_txt.len(),
                    terms[j + 1].rank()
                ),
            ));
        }
        let mut cols = Vec::with_capacity(cols_txt.len());
        for c in cols_txt {
            let col = poly_vect(&ring, c, pos, "each column")?;
            if col.len() != terms[j].rank() {
                return Err(at(
                    pos,
                    format!(
                        "a column of differential {} has {} entries, expected {}",
                        j + 1,
                        col.len(),
                        terms[j].rank()
                    ),
                ));
            }
            cols.push(col);
        }
        maps.push(
            ModuleMap::new(terms[j + 1].clone(), terms[j].clone(), 0, cols)
                .map_err(|e| at(pos, format!("differential {}: {e}", j + 1)))?,
        );
    }
    ChainComplex::new(lo, terms, maps).map_err(|e| at(pos, e))
}

/// Result of one command: status, machine payload, and text lines.
#[derive(Debug, Clone)]
pub struct CmdOutput {
    /// The command succeeded and all internal assertions held.
    pub ok: bool,
    /// Structured payload, present on success and on checked failures
    /// that still produced comparison data.
    pub payload: Option<Value>,
    /// Human readable lines (without indentation).
    pub text: Vec<String>,
    /// Error message when not ok.
    pub error: Option<String>,
}

impl CmdOutput {
    fn done(payload: Value, text: Vec<String>) -> CmdOutput {
        CmdOutput {
            ok: true,
            payload: Some(payload),
            text,
            error: None,
        }
    }

    fn fail(msg: String) -> CmdOutput {
        CmdOutput {
            ok: false,
            payload: None,
            text: Vec::new(),
            error: Some(msg),
        }
    }

    fn fail_with(msg: String, payload: Value, text: Vec<String>) -> CmdOutput {
        CmdOutput {
            ok: false,
            payload: Some(payload),
            text,
            error: Some(msg),
        }
    }
}

struct Args<'a> {
    pos: Pos,
    positional: Vec<&'a Group>,
    named: BTreeMap<String, &'a Raw>,
}

impl<'a> Args<'a> {
    fn new(groups: &'a [Group], pos: Pos) -> Result<Args<'a>, String> {
        let mut positional = Vec::new();
        let mut named = BTreeMap::new();
        for g in groups {
            match &g.key {
                None => positional.push(g),
                Some(k) => {
                    if named.insert(k.clone(), &g.items[0]).is_some() {
                        return Err(at(g.pos, format!("duplicate argument '{k}'")));
                    }
                }
            }
        }
        Ok(Args {
            pos,
            positional,
            named,
        })
    }

    fn check(&self, positional: RangeInclusive<usize>, allowed: &[&str]) -> Result<(), String> {
        if !positional.contains(&self.positional.len()) {
            return Err(at(
                self.pos,
                format!(
                    "expected {} positional group(s), got {}",
                    if positional.start() == positional.end() {
                        positional.start().to_string()
                    } else {
                        format!("{} to {}", positional.start(), positional.end())
                    },
                    self.positional.len()
                ),
            ));
        }
        for k in self.named.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(at(self.pos, format!("unknown argument '{k}'")));
            }
        }
        Ok(())
    }

    /// The items of positional group `i`, which must have exactly
    /// `count` of them.
    fn items(&self, i: usize, count: usize) -> Result<&[Raw], String> {
        let g = self.positional[i];
        if g.items.len() != count {
            return Err(at(
                g.pos,
                format!("expected {count} item(s) in this group, got {}", g.items.len()),
            ));
        }
        Ok(&g.items)
    }

    fn named(&self, key: &str) -> Option<&Raw> {
        self.named.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<&Raw, String> {
        self.named(key)
            .ok_or_else(|| at(self.pos, format!("missing required argument '{key}='")))
    }

    fn usize_opt(&self, key: &str, default: usize) -> Result<usize, String> {
        match self.named(key) {
            None => Ok(default),
            Some(raw) => raw.text.parse::<usize>().map_err(|_| {
                at(
                    raw.pos,
                    format!("expected a nonnegative integer for '{key}', got '{}'", raw.text),
                )
            }),
        }
    }

    fn usize_req(&self, key: &str) -> Result<usize, String> {
        let raw = self.require(key)?;
        raw.text.parse::<usize>().map_err(|_| {
            at(
                raw.pos,
                format!("expected a nonnegative integer for '{key}', got '{}'", raw.text),
            )
        })
    }

    fn i64_opt(&self, key: &str, default: i64) -> Result<i64, String> {
        match self.named(key) {
            None => Ok(default),
            Some(raw) => raw.text.parse::<i64>().map_err(|_| {
                at(
                    raw.pos,
                    format!("expected an integer for '{key}', got '{}'", raw.text),
                )
            }),
        }
    }
}

fn module_arg(env: &Env, raw: &Raw) -> Result<FPModule, String> {
    eval_module_expr(env, raw)
}

fn elem_arg(env: &Env, ring: &Ring, raw: &Raw) -> Result<Poly, String> {
    let t = raw.text.trim();
    if is_ident(t) {
        if let Some(Binding::Elem(r, p)) = env.names.get(t) {
            if r != ring {
                return Err(at(
                    raw.pos,
                    format!("element '{t}' was declared over a different ring"),
                ));
            }
            return Ok(ring.nf_poly(p));
        }
    }
    if t.starts_with("el") && strip_call(t, "el").is_some() {
        let (r, p) = eval_elem_decl(env, raw)?;
        if &r != ring {
            return Err(at(raw.pos, "element constructor names a different ring"));
        }
        return Ok(ring.nf_poly(&p));
    }
    ring.parse_poly(t).map_err(|e| at(raw.pos, e))
}

fn seq_arg(env: &Env, ring: &Ring, raw: &Raw) -> Result<Vec<Poly>, String> {
    let items = bracket_items(&raw.text).ok_or_else(|| {
        at(
            raw.pos,
            format!("expected a bracketed list of elements, got '{}'", raw.text),
        )
    })?;
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        out.push(elem_arg(
            env,
            ring,
            &Raw {
                text: it.to_string(),
                pos: raw.pos,
            },
        )?);
    }
    Ok(out)
}

/// Positive degree of a homogeneous nonzero element, for window bounds.
fn elem_degree(ring: &Ring, x: &Poly, pos: Pos) -> Result<i64, String> {
    match ring.poly_degree(x) {
        Ok(Some(d)) if d > 0 => Ok(d),
        Ok(_) => Err(at(
            pos,
            "the element must be nonzero of positive degree in this ring",
        )),
        Err(e) => Err(at(pos, e)),
    }
}

fn cyclic_quotient(ring: &Ring, f: &Poly) -> Result<FPModule, String> {
    let free = FPModule::free(ring, &[0]);
    let mult = ModuleMap::mult_by(&free, f).map_err(|e| e.to_string())?;
    Ok(mult.cokernel().map_err(|e| e.to_string())?.0)
}

/// Default obstruction window range for a module and element degree.
fn window_range(m: &FPModule, xdeg: i64, bound: i64) -> RangeInclusive<i64> {
    let lo = m.min_gen_degree().unwrap_or(0) - 2 * xdeg - 2;
    lo..=bound.max(lo)
}

/// Execute one command against the environment.
pub fn run_command(
    env: &Env,
    bounds: &Bounds,
    name: &str,
    groups: &[Group],
    pos: Pos,
) -> CmdOutput {
    let args = match Args::new(groups, pos) {
        Ok(a) => a,
        Err(e) => return CmdOutput::fail(e),
    };
    let result = match name {
        "resolve" => cmd_resolve(env, bounds, &args),
        "ext" => cmd_ext_tor(env, bounds, &args, true),
        "tor" => cmd_ext_tor(env, bounds, &args, false),
        "koszul" => cmd_koszul(env, bounds, &args),
        "regseq" => cmd_regseq(env, &args),
        "dtensor" => return cmd_dtensor(env, bounds, &args),
        "dgext" => cmd_dgext(env, bounds, &args),
        "summand" => cmd_summand(env, bounds, &args),
        "liftstep" => cmd_liftstep(env, bounds, &args),
        "lift" => cmd_lift(env, bounds, &args),
        "liftmulti" => cmd_liftmulti(env, bounds, &args),
        "checklci" => cmd_checklci(env, bounds, &args),
        "paper-examples" => return cmd_fixture_suite(bounds, &args),
        other => Err(at(pos, format!("unknown command '{other}'"))),
    };
    match result {
        Ok((payload, text)) => CmdOutput::done(payload, text),
        Err(e) => CmdOutput::fail(e),
    }
}

type Handled = Result<(Value, Vec<String>), String>;

fn core_err(pos: Pos) -> impl Fn(CoreError) -> String {
    move |e| at(pos, e)
}

fn cmd_resolve(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(1..=1, &["len"])?;
    let m = module_arg(env, &args.items(0, 1)?[0])?;
    let ring = m.ring().clone();
    let len = args.usize_opt("len", bounds.i_max + 2)?;
    let res = FreeResolution::minimal(&m, len).map_err(core_err(args.pos))?;
    let top = res.len();
    let mut terms = Vec::new();
    let mut text = Vec::new();
    for i in 0..=top {
        let rank = res.betti(i).map_err(core_err(args.pos))?;
        let degs = res.betti_degrees(i).map_err(core_err(args.pos))?;
        // Differentials are emitted row major: rows indexed by the
        // generators of F_{i-1}, columns by the generators of F_i.
        let matrix: Option<Vec<Vec<String>>> = if i >= 1 {
            let d = res.diff(i).map_err(core_err(args.pos))?;
            let rows = d.dst().rank();
            Some(
                (0..rows)
                    .map(|r| d.cols().iter().map(|c| ring.poly_string(&c[r])).collect())
                    .collect(),
            )
        } else {
            None
        };
        terms.push(json!({"index": i, "rank": rank, "degrees": degs, "matrix": matrix}));
        text.push(format!("F_{i}: rank {rank}, degrees {degs:?}"));
    }
    let periodicity = res.periodicity().map(|p| {
        json!({"start": p.start, "period": p.period, "shift": p.shift})
    });
    text.push(format!(
        "terminated: {}, minimal: {}",
        res.terminated(),
        res.is_minimal()
    ));
    if let Some(p) = res.periodicity() {
        text.push(format!(
            "periodicity: start {}, period {}, shift {}",
            p.start, p.period, p.shift
        ));
    }
    let payload = json!({
        "length": top,
        "minimal": res.is_minimal(),
        "terminated": res.terminated(),
        "periodicity": periodicity,
        "terms": terms,
    });
    Ok((payload, text))
}

fn cmd_ext_tor(env: &Env, bounds: &Bounds, args: &Args, ext_side: bool) -> Handled {
    args.check(1..=1, &["i", "D"])?;
    let items = args.items(0, 2)?;
    let m = module_arg(env, &items[0])?;
    let n = module_arg(env, &items[1])?;
    if m.ring() != n.ring() {
        return Err(at(args.pos, "the two modules live over different rings"));
    }
    let i_max = args.usize_opt("i", bounds.i_max)?;
    let bound = args.i64_opt("D", bounds.degree_bound)?;
    let (label, entries) = if ext_side {
        ("ext", ext_disc(&m, &n, i_max).map_err(core_err(args.pos))?)
    } else {
        ("tor", tor_disc(&m, &n, i_max).map_err(core_err(args.pos))?)
    };
    let payload = json!({
        "kind": label,
        "i_max": i_max,
        "levels": entries_value(&entries, bound),
    });
    Ok((payload, entries_text(label, &entries, bound)))
}

fn cmd_koszul(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(2..=2, &["M", "levels", "D"])?;
    let ring = eval_ring_expr(env, &args.items(0, 1)?[0])?;
    let seq_items = &args.positional[1].items;
    let mut seq = Vec::with_capacity(seq_items.len());
    for raw in seq_items {
        seq.push(elem_arg(env, &ring, raw)?);
    }
    let kz = KoszulAlgebra::new(&ring, &seq).map_err(core_err(args.pos))?;
    let coeffs = match args.named("M") {
        Some(raw) => {
            let m = module_arg(env, raw)?;
            if m.ring() != &ring {
                return Err(at(raw.pos, "coefficient module lives over a different ring"));
            }
            m
        }
        None => FPModule::free(&ring, &[0]),
    };
    let levels = args.usize_opt("levels", kz.len())?;
    let bound = args.i64_opt("D", bounds.degree_bound)?;
    let mut rows = Vec::new();
    let mut text = vec![format!(
        "generators: {}",
        seq.iter()
            .map(|f| ring.poly_string(f))
            .collect::<Vec<_>>()
            .join(", ")
    )];
    for h in 0..=levels {
        let hom = kz.homology_with_coeffs(&coeffs, h).map_err(core_err(args.pos))?;
        rows.push(json!({
            "level": h,
            "group": dims_value(&hom, bound),
            "zero": hom.is_zero(),
        }));
        text.push(format!("H_{h}: {}", dims_text(&hom, bound)));
    }
    let discrete = kz.is_discrete().map_err(core_err(args.pos))?;
    text.push(format!("discrete: {discrete}"));
    let payload = json!({
        "generators": seq.iter().map(|f| ring.poly_string(f)).collect::<Vec<_>>(),
        "levels": rows,
        "discrete": discrete,
    });
    Ok((payload, text))
}

fn cmd_regseq(env: &Env, args: &Args) -> Handled {
    args.check(2..=2, &[])?;
    let ring = eval_ring_expr(env, &args.items(0, 1)?[0])?;
    let seq_items = &args.positional[1].items;
    let mut seq = Vec::with_capacity(seq_items.len());
    for raw in seq_items {
        seq.push(elem_arg(env, &ring, raw)?);
    }
    let failure = regular_on_ring(&ring, &seq).map_err(core_err(args.pos))?;
    let (payload, text) = match &failure {
        None => (json!({"regular": true, "failure": null}), vec!["true".to_string()]),
        Some(f) => (
            json!({
                "regular": false,
                "failure": {
                    "stage": f.stage,
                    "witness": f.quotient.elem_string(&f.witness),
                },
            }),
            vec![
                "false".to_string(),
                format!(
                    "fails at stage {}: nonzero {} is killed",
                    f.stage,
                    f.quotient.elem_string(&f.witness)
                ),
            ],
        ),
    };
    Ok((payload, text))
}

fn cmd_dtensor(env: &Env, bounds: &Bounds, args: &Args) -> CmdOutput {
    let inner = || -> Result<(Value, Vec<String>, bool), String> {
        args.check(1..=1, &["x", "n", "i", "k", "D"])?;
        let m = module_arg(env, &args.items(0, 1)?[0])?;
        let ring = m.ring().clone();
        let x = elem_arg(env, &ring, args.require("x")?)?;
        let n_pow = args.usize_req("n")?;
        let i_pow = args.usize_req("i")?;
        let kmax = args.usize_opt("k", bounds.i_max)?;
        let bound = args.i64_opt("D", bounds.degree_bound)?;
        let d = elem_degree(&ring, &x, args.pos)?;
        let c = periodic_tensor_complex(&m, &x, n_pow, i_pow, kmax + 2)
            .map_err(core_err(args.pos))?;
        let kz = KoszulAlgebra::new(&ring, &[ring.pow(&x, n_pow as u32)])
            .map_err(core_err(args.pos))?;
        // The dg leg tensors against the discrete stage ring; that is
        // only the stage itself when the algebra is discrete.  For a
        // zerodivisor power the stage's free realization over the
        // algebra is the periodic complex already computed above, so
        // the leg is skipped rather than compared against the wrong
        // coefficient.
        let dg_applies = kz.is_discrete().map_err(core_err(args.pos))?;
        let tor = if dg_applies {
            let coeff = cyclic_quotient(&ring, &ring.pow(&x, i_pow as u32))?;
            Some(dg_tor(&kz, &m, &coeff, kmax).map_err(core_err(args.pos))?)
        } else {
            None
        };
        let lo = m.min_gen_degree().unwrap_or(0);
        let mut rows = Vec::new();
        let mut text = Vec::new();
        let mut agree_all = true;
        for kk in 0..=kmax {
            let tw = ((kk / 2) * n_pow + if kk % 2 == 1 { i_pow } else { 0 }) as i64 * d;
            let closed = power_quotient_tensor_closed_form(&m, &x, n_pow, i_pow, kk)
                .map_err(core_err(args.pos))?;
            let h = c.homology(kk as i64).map_err(core_err(args.pos))?.module;
            let mut closed_dims = Vec::new();
            let mut periodic_dims = Vec::new();
            let mut dg_dims = Vec::new();
            let mut agree = true;
            let mut dd = lo;
            while dd <= bound {
                let cd = closed.graded_dim(dd - tw);
                let pd = h.graded_dim(dd);
                agree &= cd == pd;
                if let Some(tor) = &tor {
                    let gd = tor[kk].graded_dim(dd);
                    agree &= pd == gd;
                    dg_dims.push(gd);
                }
                closed_dims.push(cd);
                periodic_dims.push(pd);
                dd += 1;
            }
            agree_all &= agree;
            text.push(format!(
                "level {kk}: {}, periodic dims {periodic_dims:?} from degree {lo}",
                if agree { "agree" } else { "DISAGREE" }
            ));
            rows.push(json!({
                "level": kk,
                "start": lo,
                "twist": tw,
                "closed": closed_dims,
                "periodic": periodic_dims,
                "dg": if tor.is_some() { json!(dg_dims) } else { Value::Null },
                "agree": agree,
            }));
        }
        if !dg_applies {
            text.push("dg leg skipped: the algebra is not discrete".to_string());
        }
        text.push(format!("agreement: {agree_all}"));
        let payload = json!({
            "rows": rows,
            "dg_checked": dg_applies,
            "agree": agree_all,
        });
        Ok((payload, text, agree_all))
    };
    match inner() {
        Ok((payload, text, true)) => CmdOutput::done(payload, text),
        Ok((payload, text, false)) => CmdOutput::fail_with(
            "closed form, periodic complex, and dg sides disagree".to_string(),
            payload,
            text,
        ),
        Err(e) => CmdOutput::fail(e),
    }
}

fn cmd_dgext(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(1..=1, &["seq", "i", "D"])?;
    let items = args.items(0, 2)?;
    let m = module_arg(env, &items[0])?;
    let n = module_arg(env, &items[1])?;
    let ring = m.ring().clone();
    if n.ring() != &ring {
        return Err(at(args.pos, "the two modules live over different rings"));
    }
    let seq = seq_arg(env, &ring, args.require("seq")?)?;
    let i_max = args.usize_opt("i", bounds.i_max)?;
    let bound = args.i64_opt("D", bounds.degree_bound)?;
    let kz = KoszulAlgebra::new(&ring, &seq).map_err(core_err(args.pos))?;
    let entries = dg_ext(&kz, &m, &n, i_max).map_err(core_err(args.pos))?;
    let payload = json!({
        "generators": seq.iter().map(|f| ring.poly_string(f)).collect::<Vec<_>>(),
        "i_max": i_max,
        "levels": entries_value(&entries, bound),
    });
    Ok((payload, entries_text("dgext", &entries, bound)))
}

fn summand_payload(report: &SummandReport) -> (Value, Vec<String>) {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .filter(|r| r.quotient_dim > 0 || r.ambient_dim > 0)
        .map(|r| {
            json!({
                "index": r.index,
                "degree": r.degree,
                "quotient_dim": r.quotient_dim,
                "ambient_dim": r.ambient_dim,
            })
        })
        .collect();
    let mut text: Vec<String> = report
        .rows
        .iter()
        .filter(|r| r.quotient_dim > 0 || r.ambient_dim > 0)
        .map(|r| {
            format!(
                "i={} d={}: quotient {} <= ambient {}",
                r.index, r.degree, r.quotient_dim, r.ambient_dim
            )
        })
        .collect();
    text.push(format!(
        "bounded: {}, strict: {}, section levels: {}",
        report.bounded,
        report.strict,
        report.section.len()
    ));
    let payload = json!({
        "rows": rows,
        "bounded": report.bounded,
        "strict": report.strict,
        "section_levels": report.section.len(),
    });
    (payload, text)
}

fn cmd_summand(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(1..=1, &["seq", "i", "lo", "hi"])?;
    let items = args.items(0, 2)?;
    let i_max = args.usize_opt("i", bounds.i_max)?;
    let lo = args.i64_opt("lo", -bounds.degree_bound)?;
    let hi = args.i64_opt("hi", bounds.degree_bound)?;
    if lo > hi {
        return Err(at(args.pos, "window is empty: lo > hi"));
    }
    let first = items[0].text.trim();
    let complex_form = env.binding_kind(first) == Some("complex")
        || strip_call(first, "complex").is_some();
    let report = if complex_form {
        if args.named("seq").is_some() {
            return Err(at(
                args.pos,
                "seq= is not accepted when the first argument is a complex",
            ));
        }
        let cx = eval_complex_expr(env, &items[0])?;
        let n = module_arg(env, &items[1])?;
        summand_check_from_complex(&cx, &n, i_max, lo..=hi).map_err(core_err(args.pos))?
    } else {
        let l = module_arg(env, &items[0])?;
        let n = module_arg(env, &items[1])?;
        let ring = l.ring().clone();
        let seq = seq_arg(env, &ring, args.require("seq")?)?;
        let kz = KoszulAlgebra::new(&ring, &seq).map_err(core_err(args.pos))?;
        direct_summand_check(&kz, &l, &n, i_max, lo..=hi).map_err(core_err(args.pos))?
    };
    Ok(summand_payload(&report))
}

fn cmd_liftstep(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(1..=1, &["x", "n", "D"])?;
    let items = args.items(0, 2)?;
    let m = module_arg(env, &items[0])?;
    let l = module_arg(env, &items[1])?;
    let ring = m.ring().clone();
    if l.ring() != &ring {
        return Err(at(args.pos, "base and stage live over different rings"));
    }
    let x = elem_arg(env, &ring, args.require("x")?)?;
    let n = args.usize_req("n")?;
    if n == 0 {
        return Err(at(args.pos, "n must be at least 1"));
    }
    let bound = args.i64_opt("D", bounds.degree_bound)?;
    let d = elem_degree(&ring, &x, args.pos)?;
    let reduction = stage_reduction(&m, &l, &x, bounds.seed).map_err(core_err(args.pos))?;
    let certs = step_certificates(&reduction, &x, n).map_err(core_err(args.pos))?;
    let outcome = lift_step_with(&reduction, &x, n, 0).map_err(core_err(args.pos))?;
    let kz = KoszulAlgebra::new(&ring, std::slice::from_ref(&x)).map_err(core_err(args.pos))?;
    let window =
        obstruction_window(&kz, &m, window_range(&m, d, bound)).map_err(core_err(args.pos))?;
    let mut text = vec![format!(
        "splits: {}, class vanishes: {}, kernel: {}, exact: {}",
        certs.splits, certs.class_vanishes, certs.kernel_obstructed, certs.sequence_exact
    )];
    let certs_value = json!({
        "splits": certs.splits,
        "class_vanishes": certs.class_vanishes,
        "kernel_obstructed": certs.kernel_obstructed,
        "sequence_exact": certs.sequence_exact,
        "flags": certs.flags.as_ref().map(flags_value),
    });
    let (outcome_label, extension, witness) = match &outcome {
        StepOutcome::Lifted(step) => {
            text.push("outcome: lifted".to_string());
            text.push(format!("extension: {}", dims_text(&step.extension, bound)));
            text.push(format!("flags: {}", flags_text(&step.flags)));
            let ext = json!({
                "module": dims_value(&step.extension, bound),
                "flags": flags_value(&step.flags),
                "alternatives": step.alternatives,
                "choice": step.choice,
            });
            ("lifted", Some(ext), None)
        }
        StepOutcome::Obstructed(w) => {
            text.push("outcome: obstructed".to_string());
            text.push(format!("witness: {}", witness_text(&ring, w)));
            ("obstructed", None, Some(witness_value(&ring, w, bound)))
        }
    };
    text.push(window_text(&window));
    let payload = json!({
        "certificates": certs_value,
        "outcome": outcome_label,
        "extension": extension,
        "witness": witness,
        "window": window_value(&window),
    });
    Ok((payload, text))
}

fn lift_options(bounds: &Bounds, args: &Args) -> Result<LiftOptions, String> {
    Ok(LiftOptions {
        order: args.usize_opt("N", bounds.order)?,
        degree_bound: args.i64_opt("D", bounds.degree_bound)?,
        seed: bounds.seed,
        retry_breadth: args.usize_opt("breadth", bounds.retry_breadth)?.max(1),
    })
}

fn cmd_lift(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(0..=1, &["A", "x", "M", "N", "D", "breadth"])?;
    let m = match (args.named("M"), args.positional.len()) {
        (Some(raw), _) => module_arg(env, raw)?,
        (None, 1) => module_arg(env, &args.items(0, 1)?[0])?,
        (None, _) => return Err(at(args.pos, "lift needs a module, M=... or positional")),
    };
    let ring = m.ring().clone();
    if let Some(raw) = args.named("A") {
        let a = eval_ring_expr(env, raw)?;
        if &a != &ring {
            return Err(at(raw.pos, "A= names a ring different from the module's"));
        }
    }
    let x = elem_arg(env, &ring, args.require("x")?)?;
    let opts = lift_options(bounds, args)?;
    let d = elem_degree(&ring, &x, args.pos)?;
    let chain = lift_to_order(&m, &x, &opts).map_err(core_err(args.pos))?;
    let mut text = vec![format!(
        "element {}, requested {}, target {}, reached {}",
        ring.poly_string(&chain.element),
        chain.requested,
        chain.target,
        chain.reached
    )];
    let stages: Vec<Value> = chain
        .stages
        .iter()
        .map(|s| json!({"order": s.order, "module": dims_value(&s.module, opts.degree_bound)}))
        .collect();
    for s in &chain.stages {
        text.push(format!(
            "stage {}: {}",
            s.order,
            dims_text(&s.module, opts.degree_bound)
        ));
    }
    let steps: Vec<Value> = chain
        .records
        .iter()
        .map(|r| {
            json!({
                "order": r.order,
                "flags_ok": r.flags.all_ok(),
                "alternatives": r.alternatives,
                "choice": r.choice,
            })
        })
        .collect();
    if let (Some(o), Some(w)) = (chain.obstructed_at, chain.obstruction.as_ref()) {
        text.push(format!(
            "obstructed at order {o}: {}",
            witness_text(&ring, w)
        ));
    }
    let (limit_value, limit_note) = match reconstruct_limit(&chain, opts.degree_bound) {
        Ok(limit) => {
            text.push(format!(
                "limit: {}, cutoff {}, order used {}, checks {}",
                dims_text(&limit.module, opts.degree_bound),
                limit.cutoff,
                limit.order_used,
                if limit.checks.all_ok() { "ok" } else { "FAILED" }
            ));
            let v = json!({
                "module": dims_value(&limit.module, opts.degree_bound),
                "cutoff": limit.cutoff,
                "order_used": limit.order_used,
                "checks": checks_value(&limit.checks),
            });
            (v, None)
        }
        Err(CoreError::ChainTooShort { needed, got }) => {
            let note = format!("no limit: the chain reached order {got} but {needed} is needed");
            text.push(note.clone());
            (Value::Null, Some(note))
        }
        Err(e) => return Err(at(args.pos, e)),
    };
    let kz = KoszulAlgebra::new(&ring, std::slice::from_ref(&x)).map_err(core_err(args.pos))?;
    let window = obstruction_window(&kz, &m, window_range(&m, d, opts.degree_bound))
        .map_err(core_err(args.pos))?;
    text.push(window_text(&window));
    let payload = json!({
        "element": ring.poly_string(&chain.element),
        "requested": chain.requested,
        "target": chain.target,
        "reached": chain.reached,
        "stages": stages,
        "steps": steps,
        "obstructed_at": chain.obstructed_at,
        "obstruction": chain.obstruction.as_ref().map(|w| witness_value(&ring, w, opts.degree_bound)),
        "limit": limit_value,
        "limit_note": limit_note,
        "window": window_value(&window),
    });
    Ok((payload, text))
}

fn cmd_liftmulti(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(1..=1, &["seq", "N", "D", "breadth"])?;
    let m = module_arg(env, &args.items(0, 1)?[0])?;
    let ring = m.ring().clone();
    let seq = seq_arg(env, &ring, args.require("seq")?)?;
    let opts = lift_options(bounds, args)?;
    let ml = lift_multi(&ring, &seq, &m, &opts).map_err(core_err(args.pos))?;
    let mut text = Vec::new();
    let stages: Vec<Value> = ml
        .stages
        .iter()
        .map(|s| {
            text.push(format!(
                "stage {}: {}, chain reached {}, completed: {}",
                s.stage,
                window_text(&s.window),
                s.chain_reached,
                s.completed
            ));
            json!({
                "stage": s.stage,
                "window": window_value(&s.window),
                "chain_reached": s.chain_reached,
                "completed": s.completed,
            })
        })
        .collect();
    text.push(format!(
        "final: {}",
        dims_text(&ml.final_module, opts.degree_bound)
    ));
    if let Some((stage, w)) = &ml.obstruction {
        text.push(format!(
            "obstructed at stage {stage}: {}",
            witness_text(&ring, w)
        ));
    }
    text.push(format!(
        "roundtrip: dims match {}, iso {}, higher vanish {}",
        ml.roundtrip_h0_dims_match,
        match ml.roundtrip_h0_isomorphic {
            Some(b) => b.to_string(),
            None => "inconclusive".to_string(),
        },
        ml.roundtrip_higher_vanish
    ));
    text.push(format!("completed: {}", ml.completed));
    let payload = json!({
        "stages": stages,
        "final_module": dims_value(&ml.final_module, opts.degree_bound),
        "completed": ml.completed,
        "obstruction": ml.obstruction.as_ref().map(|(stage, w)| {
            json!({"stage": stage, "witness": witness_value(&ring, w, opts.degree_bound)})
        }),
        "roundtrip": {
            "h0_dims_match": ml.roundtrip_h0_dims_match,
            "h0_isomorphic": ml.roundtrip_h0_isomorphic,
            "higher_vanish": ml.roundtrip_higher_vanish,
        },
    });
    Ok((payload, text))
}

fn cmd_checklci(env: &Env, bounds: &Bounds, args: &Args) -> Handled {
    args.check(2..=2, &["N", "D", "breadth"])?;
    let ring = eval_ring_expr(env, &args.items(0, 1)?[0])?;
    let seq_items = &args.positional[1].items;
    let mut seq = Vec::with_capacity(seq_items.len());
    for raw in seq_items {
        seq.push(elem_arg(env, &ring, raw)?);
    }
    let opts = lift_options(bounds, args)?;
    let report = check_lci(&ring, &seq, &opts).map_err(core_err(args.pos))?;
    let verdict = match report.verdict {
        LciVerdict::Regular => "regular",
        LciVerdict::NotRegular => "not_regular",
    };
    let mut text = vec![verdict.replace('_', " ")];
    text.push(window_text(&report.window));
    if let Some(f) = &report.regularity {
        text.push(format!("direct check fails at stage {}", f.stage));
    }
    if let Some(l) = &report.lift {
        text.push(format!("lift completed: {}", l.completed));
    }
    let payload = json!({
        "verdict": verdict,
        "window": window_value(&report.window),
        "regularity_failure": report.regularity.as_ref().map(|f| json!({"stage": f.stage})),
        "lift": report.lift.as_ref().map(|l| {
            json!({"completed": l.completed, "stages": l.stages.len()})
        }),
    });
    Ok((payload, text))
}

fn cmd_fixture_suite(bounds: &Bounds, args: &Args) -> CmdOutput {
    if let Err(e) = args.check(0..=0, &[]) {
        return CmdOutput::fail(e);
    }
    let outcomes = fixtures::run_all(bounds);
    let all_pass = outcomes.iter().all(|o| o.pass);
    let mut text = Vec::new();
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            text.push(format!(
                "{}: {}",
                o.name,
                if o.pass { "pass" } else { "FAIL" }
            ));
            for line in &o.text {
                text.push(format!("  {line}"));
            }
            json!({"name": o.name, "pass": o.pass, "details": o.details})
        })
        .collect();
    let payload = json!({"fixtures": rows, "all_pass": all_pass});
    if all_pass {
        CmdOutput::done(payload, text)
    } else {
        let failing: Vec<&str> = outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.name)
            .collect();
        CmdOutput::fail_with(
            format!("fixture(s) failed: {}", failing.join(", ")),
            payload,
            text,
        )
    }
}
