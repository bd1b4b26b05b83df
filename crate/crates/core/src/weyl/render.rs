use crate::scalars::Coeff;

pub(crate) fn power(var: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(var.to_string()),
        _ => Some(format!("{var}^{e}")),
    }
}

/// Joins signed terms `coeff*mono` into `t1 + t2 - t3`. Terms are emitted in
/// the given order; an empty monomial stands for 1.
pub(crate) fn join_terms<'a, C: Coeff>(terms: impl Iterator<Item = (&'a C, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let (neg, mag, _) = c.term_text();
        let body = match (mono.is_empty(), mag == "1") {
            (true, _) => mag,
            (false, true) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
        let sep = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sep);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
