//! Line-oriented text form.
//!
//! ```text
//! sig: i:2 j:1
//! vdeg: 1
//! (3) / (1) * z[i,1]^2 * z[j,1]^-1
//! (3) / (1) * z[i,2]^2 * z[j,1]^-1
//! ```
//! The `vdeg:` line only appears for [`SymLaurent`]. Terms are printed in
//! descending lexicographic order of exponent vectors, one per line, and a
//! zero polynomial has no term lines.

use smallvec::SmallVec;

use super::{ColorSignature, Exps, LaurentPoly, SymLaurent, Var};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalars::parse_expr;

impl<F: Field> LaurentPoly<F> {
    pub fn to_text(&self, names: &[String]) -> String {
        let mut out = self.sig().to_text(names);
        out.push('\n');
        self.write_terms(names, &mut out);
        out
    }

    fn write_terms(&self, names: &[String], out: &mut String) {
        for (e, c) in self.terms().rev() {
            out.push_str(&c.to_text());
            for (k, &x) in e.iter().enumerate() {
                if x != 0 {
                    let v = self.sig().var_at(k);
                    out.push_str(&format!(" * z[{},{}]^{}", names[v.vertex], v.slot + 1, x));
                }
            }
            out.push('\n');
        }
    }

    /// Parses the text form; `resolve` maps parameter symbols to scalars.
    pub fn parse(text: &str, names: &[String], resolve: &dyn Fn(&str) -> Option<F>) -> Result<Self> {
        let (p, vdeg) = parse_lines(text, names, resolve)?;
        if let Some((line, _)) = vdeg {
            return Err(Error::parse(line, 1, "unexpected `vdeg:` line for a plain polynomial"));
        }
        Ok(p)
    }
}

impl<F: Field> SymLaurent<F> {
    pub fn to_text(&self, names: &[String]) -> String {
        let mut out = self.poly.sig().to_text(names);
        out.push_str(&format!("\nvdeg: {}\n", self.vdeg));
        self.poly.write_terms(names, &mut out);
        out
    }

    /// Parses the text form. Without a `vdeg:` line the degree is read off
    /// the terms.
    pub fn parse(text: &str, names: &[String], resolve: &dyn Fn(&str) -> Option<F>) -> Result<Self> {
        let (p, vdeg) = parse_lines(text, names, resolve)?;
        let d = match vdeg {
            Some((_, d)) => d,
            None => p.homogeneous_degree().unwrap_or(0),
        };
        SymLaurent::new(p, d).map_err(|e| Error::parse(1, 1, e.to_string()))
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_sig(body: &str, names: &[String], line: usize) -> Result<ColorSignature> {
    let mut counts = vec![0usize; names.len()];
    for item in body.split_whitespace() {
        let (name, n) = item.split_once(':').ok_or_else(|| Error::parse(line, 1, format!("expected `vertex:count`, got `{item}`")))?;
        let v = names.iter().position(|x| x == name).ok_or_else(|| Error::parse(line, 1, format!("unknown vertex `{name}`")))?;
        counts[v] = n.parse().map_err(|_| Error::parse(line, 1, format!("bad count `{n}`")))?;
    }
    Ok(ColorSignature::new(counts))
}

/// Parses `z[name,slot]` with an optional `^e`.
fn parse_var(s: &str, names: &[String], line: usize, col: usize) -> Result<(Var, i32)> {
    let err = |m: &str| Error::parse(line, col, m.to_string());
    let rest = s.strip_prefix("z[").ok_or_else(|| err("expected `z[`"))?;
    let close = rest.find(']').ok_or_else(|| err("missing `]`"))?;
    let inner = &rest[..close];
    let (name, slot) = inner.split_once(',').ok_or_else(|| err("expected `z[vertex,slot]`"))?;
    let vertex = names.iter().position(|x| x == name.trim()).ok_or_else(|| err(&format!("unknown vertex `{}`", name.trim())))?;
    let slot: usize = slot.trim().parse().map_err(|_| err("bad slot"))?;
    if slot == 0 {
        return Err(err("slots are numbered from 1"));
    }
    let tail = rest[close + 1..].trim();
    let e = if tail.is_empty() {
        1
    } else {
        let t = tail.strip_prefix('^').ok_or_else(|| err("expected `^`"))?.trim();
        let t = t.trim_start_matches('(').trim_end_matches(')');
        t.parse().map_err(|_| err("bad exponent"))?
    };
    Ok((Var::new(vertex, slot - 1), e))
}

type Parsed<F> = (LaurentPoly<F>, Option<(usize, i64)>);
/// Source line, variable powers, coefficient.
type TermLine<F> = (usize, Vec<(Var, i32)>, F);

fn parse_lines<F: Field>(text: &str, names: &[String], resolve: &dyn Fn(&str) -> Option<F>) -> Result<Parsed<F>> {
    let mut sig: Option<ColorSignature> = None;
    let mut vdeg = None;
    let mut terms: Vec<TermLine<F>> = Vec::new();
    for (k, raw_line) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw_line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(body) = l.strip_prefix("sig:") {
            if sig.is_some() {
                return Err(Error::parse(line, 1, "duplicate `sig:` line"));
            }
            sig = Some(parse_sig(body, names, line)?);
            continue;
        }
        if let Some(body) = l.strip_prefix("vdeg:") {
            let d = body.trim().parse().map_err(|_| Error::parse(line, 6, "bad vertical degree"))?;
            vdeg = Some((line, d));
            continue;
        }
        let mut vars = Vec::new();
        let mut coef = F::one();
        let offset = raw_line.len() - raw_line.trim_start().len();
        for (start, factor) in split_top_level(l, '*') {
            let f = factor.trim();
            let col = offset + start + (factor.len() - factor.trim_start().len()) + 1;
            if f.is_empty() {
                return Err(Error::parse(line, col, "empty factor"));
            }
            if f.starts_with("z[") {
                vars.push(parse_var(f, names, line, col)?);
            } else {
                let c = parse_expr(f, line, resolve).map_err(|e| match e {
                    Error::Parse { line, column, message } => Error::Parse { line, column: column + col - 1, message },
                    other => other,
                })?;
                coef = coef.mul_ref(&c);
            }
        }
        terms.push((line, vars, coef));
    }
    let sig = sig.ok_or_else(|| Error::parse(1, 1, "missing `sig:` line"))?;
    let mut p = LaurentPoly::zero(sig.clone());
    for (line, vars, coef) in terms {
        let mut e: Exps = SmallVec::from_elem(0, sig.total());
        for (v, x) in vars {
            if v.slot >= sig.count(v.vertex) {
                return Err(Error::parse(line, 1, format!("slot {} exceeds signature", v.slot + 1)));
            }
            e[sig.var_index(v)] += x;
        }
        p.add_term(e, coef);
    }
    Ok((p, vdeg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ParamRing, ParamScalar};

    #[test]
    fn round_trip_with_parameters() {
        let ring = ParamRing::new(&["q", "t"]).unwrap();
        let names = vec!["i".to_string(), "j".to_string()];
        let resolve = |s: &str| ring.var(s).ok();
        let text = "sig: i:2 j:1\n(q - t) * z[i,1]^2 * z[j,1]^-1\n(q - t) * z[i,2]^2 * z[j,1]^-1\n3\n";
        let p = LaurentPoly::<ParamScalar>::parse(text, &names, &resolve).unwrap();
        assert_eq!(p.len(), 3);
        let printed = p.to_text(&names);
        let again = LaurentPoly::<ParamScalar>::parse(&printed, &names, &resolve).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_text(&names), printed);
        assert!(SymLaurent::parse(text, &names, &resolve).is_err(), "not homogeneous");
    }

    #[test]
    fn errors_report_lines() {
        let names = vec!["i".to_string()];
        let resolve = |_: &str| None::<ParamScalar>;
        let err = LaurentPoly::<ParamScalar>::parse("sig: i:1\n2 * z[k,1]\n", &names, &resolve).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = LaurentPoly::<ParamScalar>::parse("sig: i:1\n\n2 * (q\n", &names, &resolve).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }
}
