//! Canonical identifier grammar.
//!
//! Every element of every poset built by this crate carries a string id
//! derived from its construction history, so that repeated runs produce
//! byte-identical output. The grammar reserves a small set of characters;
//! user-supplied labels must avoid them (enforced when parsing JSON).
//!
//! - simplex on vertices a, b, c: `{a,b,c}` (sorted)
//! - order interval from x to y:  `[x|y]`
//! - product cell:                `(x,y,...)`
//! - tree edge between u and w:   `u~w` (sorted)
//! - dual-cone bottom element:    `*`
//! - disjoint-union tag:          `0:x`, `1:x`

pub const RESERVED: &[char] = &['{', '}', '[', ']', '(', ')', '|', ',', '*', '~', ':'];

/// True when `label` is usable as a raw vertex label.
pub fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(|c| RESERVED.contains(&c) || c.is_whitespace())
}

pub fn simplex_id<S: AsRef<str>>(vertices: &[S]) -> String {
    let mut vs: Vec<&str> = vertices.iter().map(|s| s.as_ref()).collect();
    vs.sort_unstable();
    format!("{{{}}}", vs.join(","))
}

pub fn interval_id(lower: &str, upper: &str) -> String {
    format!("[{lower}|{upper}]")
}

pub fn pair_id(left: &str, right: &str) -> String {
    format!("({left},{right})")
}

pub fn tuple_id<S: AsRef<str>>(parts: &[S]) -> String {
    let parts: Vec<&str> = parts.iter().map(|s| s.as_ref()).collect();
    format!("({})", parts.join(","))
}

pub fn edge_id(u: &str, w: &str) -> String {
    if u <= w {
        format!("{u}~{w}")
    } else {
        format!("{w}~{u}")
    }
}

pub fn tagged_id(side: usize, id: &str) -> String {
    format!("{side}:{id}")
}

pub const BOTTOM: &str = "*";

/// Inverse of [`simplex_id`] for single-vertex ids: `{label}` -> `label`.
pub fn raw_vertex_label(id: &str) -> Option<&str> {
    let inner = id.strip_prefix('{')?.strip_suffix('}')?;
    valid_label(inner).then_some(inner)
}
