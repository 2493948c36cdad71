//! Text formats: scalars, representatives, function files and coefficient
//! tables.
//!
//! Scalars:
//!
//! ```text
//! scalar  := "0" | "O(pi^" int ")" | "v:" int " u:" digits | literal ["/" literal]
//! literal := ["-"] term (("+" | "-") term)*
//! term    := uint ["*" pi ["^" uint]] | pi ["^" uint]
//! pi      := "pi" | "p" | "t"
//! digits  := digit ("," digit)*
//! ```
//!
//! A literal is a polynomial in the uniformizer with integer coefficients, so
//! `2+pi^2` is 11 in `Z_3` and `2 + t^2` in `F_3[[t]]`.
//!
//! Function file:
//!
//! ```text
//! field <zp|fpt> p=<int> prec=<int>
//! level <n> depth <m>
//! term r=<digits> j=<int> c=<scalar>
//! ```
//!
//! Coefficient tables use the same two header lines followed by
//! `b r=<digits> j=<int> v=<scalar>` lines. Blank lines and `#` comments are
//! ignored, entry lines may come in any order, and a repeated `(r, j)` key is
//! an error. Output is always in canonical `(length, lex, j)` order.

use std::fmt::Write as _;

use crate::calculus::CoeffTable;
use crate::error::{Error, Result};
use crate::field::{Backend, FieldParams, Scalar};
use crate::funcspace::CnCombo;
use crate::reps::Rep;

/// Parses a scalar written on its own (positions are reported as line 1).
pub fn parse_scalar(params: FieldParams, s: &str) -> Result<Scalar> {
    scalar_at(params, s, 1, 1)
}

/// Parses the digits of a representative, `0` or `d0,d1,...`; trailing zero
/// digits are dropped.
pub fn parse_rep(p: u32, s: &str) -> Result<Rep> {
    rep_at(p, s, 1, 1)
}

pub fn write_function(f: &CnCombo) -> String {
    let mut out = header(f.params(), f.level(), f.depth());
    for (r, j, c) in f.terms() {
        writeln!(out, "term {r} j={j} c={c}").unwrap();
    }
    out
}

pub fn write_table(t: &CoeffTable) -> String {
    let mut out = header(t.params(), t.level(), t.depth());
    for (r, j, v) in t.entries() {
        writeln!(out, "b {r} j={j} v={v}").unwrap();
    }
    out
}

fn header(params: FieldParams, level: usize, depth: usize) -> String {
    format!("{params}\nlevel {level} depth {depth}\n")
}

pub fn parse_function(text: &str) -> Result<CnCombo> {
    let doc = parse_document(text, "term", "c")?;
    let mut f = CnCombo::new(doc.params, doc.level, doc.depth).map_err(|e| doc.header_err(e))?;
    for e in doc.entries {
        f.add_term(e.r, e.j, e.value)
            .map_err(|err| located(err, e.line, 1))?;
    }
    Ok(f)
}

pub fn parse_table(text: &str) -> Result<CoeffTable> {
    let doc = parse_document(text, "b", "v")?;
    doc.params
        .check_order(doc.level)
        .map_err(|e| doc.header_err(e))?;
    let mut t = CoeffTable::new(doc.params, doc.level, doc.depth);
    for e in doc.entries {
        t.set(e.r, e.j, e.value)
            .map_err(|err| located(err, e.line, 1))?;
    }
    Ok(t)
}

/// Keeps characteristic and precision errors as they are (they carry their
/// own exit codes) and turns everything else into a positioned parse error.
fn located(err: Error, line: usize, column: usize) -> Error {
    match err {
        Error::CharacteristicViolation { .. }
        | Error::PrecisionExhausted(_)
        | Error::Parse { .. } => err,
        other => Error::parse(line, column, other.to_string()),
    }
}

struct Entry {
    line: usize,
    r: Rep,
    j: usize,
    value: Scalar,
}

struct Document {
    params: FieldParams,
    level: usize,
    depth: usize,
    level_line: usize,
    entries: Vec<Entry>,
}

impl Document {
    fn header_err(&self, e: Error) -> Error {
        located(e, self.level_line, 1)
    }
}

/// Splits a line into whitespace-separated words with 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, w)| (s + 1, w)).collect()
}

fn key_value<'a>(word: (usize, &'a str), key: &str, line: usize) -> Result<(usize, &'a str)> {
    let (col, w) = word;
    match w.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')) {
        Some(v) => Ok((col + key.len() + 1, v)),
        None => Err(Error::parse(
            line,
            col,
            format!("expected `{key}=`, found `{w}`"),
        )),
    }
}

fn uint_at(s: &str, line: usize, col: usize) -> Result<u64> {
    s.parse::<u64>().map_err(|_| {
        Error::parse(
            line,
            col,
            format!("expected a non-negative integer, found `{s}`"),
        )
    })
}

fn parse_document(text: &str, entry_kw: &str, value_key: &str) -> Result<Document> {
    let mut params: Option<FieldParams> = None;
    let mut level: Option<(usize, usize, usize)> = None;
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let ws = words(content);
        let Some(&(col, kw)) = ws.first() else {
            continue;
        };
        match kw {
            "field" => {
                if params.is_some() {
                    return Err(Error::parse(line_no, col, "duplicate `field` line"));
                }
                params = Some(field_line(&ws, line_no)?);
            }
            "level" => {
                if params.is_none() {
                    return Err(Error::parse(line_no, col, "`level` before `field`"));
                }
                if level.is_some() {
                    return Err(Error::parse(line_no, col, "duplicate `level` line"));
                }
                if ws.len() != 4 || ws[2].1 != "depth" {
                    return Err(Error::parse(line_no, col, "expected `level <n> depth <m>`"));
                }
                let n = uint_at(ws[1].1, line_no, ws[1].0)? as usize;
                let m = uint_at(ws[3].1, line_no, ws[3].0)? as usize;
                level = Some((n, m, line_no));
            }
            k if k == entry_kw => {
                let Some(params) = params else {
                    return Err(Error::parse(
                        line_no,
                        col,
                        format!("`{entry_kw}` before `field`"),
                    ));
                };
                if level.is_none() {
                    return Err(Error::parse(
                        line_no,
                        col,
                        format!("`{entry_kw}` before `level`"),
                    ));
                }
                if ws.len() < 4 {
                    return Err(Error::parse(
                        line_no,
                        col,
                        format!("expected `{entry_kw} r=<digits> j=<int> {value_key}=<scalar>`"),
                    ));
                }
                let (rc, rs) = key_value(ws[1], "r", line_no)?;
                let r = rep_at(params.p(), rs, line_no, rc)?;
                let (jc, js) = key_value(ws[2], "j", line_no)?;
                let j = uint_at(js, line_no, jc)? as usize;
                // The value runs to the end of the line; `v:<v> u:<digits>`
                // contains a space.
                let (vc, _) = key_value(ws[3], value_key, line_no)?;
                let value_text = content[vc - 1..].trim_end();
                let value = scalar_at(params, value_text, line_no, vc)?;
                if let Some(prev) = seen.insert((r.clone(), j), line_no) {
                    return Err(Error::parse(
                        line_no,
                        rc,
                        format!("duplicate key ({r}, j={j}), first given on line {prev}"),
                    ));
                }
                entries.push(Entry {
                    line: line_no,
                    r,
                    j,
                    value,
                });
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    col,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }
    let params = params.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `field` line"))?;
    let (level, depth, level_line) =
        level.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `level` line"))?;
    Ok(Document {
        params,
        level,
        depth,
        level_line,
        entries,
    })
}

/// `field <zp|fpt> p=<int> [prec=<int>]`; the precision defaults to the
/// backend's default for `p`.
pub fn parse_field_line(line: &str) -> Result<FieldParams> {
    field_line(&words(line), 1)
}

fn field_line(ws: &[(usize, &str)], line: usize) -> Result<FieldParams> {
    if ws.len() < 3 || ws.len() > 4 || ws[0].1 != "field" {
        let col = ws.first().map_or(1, |w| w.0);
        return Err(Error::parse(
            line,
            col,
            "expected `field <zp|fpt> p=<int> prec=<int>`",
        ));
    }
    let backend = Backend::from_name(ws[1].1)
        .ok_or_else(|| Error::parse(line, ws[1].0, format!("unknown backend `{}`", ws[1].1)))?;
    let (pc, ps) = key_value(ws[2], "p", line)?;
    let p = u32::try_from(uint_at(ps, line, pc)?)
        .map_err(|_| Error::parse(line, pc, "p out of range"))?;
    let params = match ws.get(3) {
        Some(&w) => {
            let (nc, ns) = key_value(w, "prec", line)?;
            let n = u32::try_from(uint_at(ns, line, nc)?)
                .map_err(|_| Error::parse(line, nc, "prec out of range"))?;
            FieldParams::new(backend, p, n).map_err(|e| Error::parse(line, pc, e.to_string()))?
        }
        None => FieldParams::with_default_precision(backend, p)
            .map_err(|e| Error::parse(line, pc, e.to_string()))?,
    };
    Ok(params)
}

fn rep_at(p: u32, s: &str, line: usize, col: usize) -> Result<Rep> {
    if s.is_empty() {
        return Err(Error::parse(line, col, "expected digits"));
    }
    let digits = digit_list(p, s, line, col)?;
    Ok(Rep::from_digits(&digits))
}

fn digit_list(p: u32, s: &str, line: usize, col: usize) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        let c = col + offset;
        let d = part
            .parse::<u32>()
            .map_err(|_| Error::parse(line, c, format!("expected a digit, found `{part}`")))?;
        if d >= p {
            return Err(Error::parse(
                line,
                c,
                format!("digit {d} out of range for p = {p}"),
            ));
        }
        out.push(d as u8);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn scalar_at(params: FieldParams, s: &str, line: usize, col: usize) -> Result<Scalar> {
    let s_trim = s.trim();
    let col = col + (s.len() - s.trim_start().len());
    if s_trim.is_empty() {
        return Err(Error::parse(line, col, "expected a scalar"));
    }
    if s_trim == "0" {
        return Ok(Scalar::zero(params));
    }
    if let Some(rest) = s_trim.strip_prefix("O(pi^") {
        let Some(a) = rest.strip_suffix(')') else {
            return Err(Error::parse(line, col + s_trim.len(), "expected `)`"));
        };
        let a = a.parse::<i64>().map_err(|_| {
            Error::parse(line, col + 5, format!("expected an integer, found `{a}`"))
        })?;
        return Ok(Scalar::zero_at(params, a));
    }
    if let Some(rest) = s_trim.strip_prefix("v:") {
        let ws = words(rest);
        if ws.len() != 2 {
            return Err(Error::parse(line, col, "expected `v:<int> u:<digits>`"));
        }
        let v = ws[0].1.parse::<i64>().map_err(|_| {
            Error::parse(
                line,
                col + 2,
                format!("expected an integer, found `{}`", ws[0].1),
            )
        })?;
        let ucol = col + 1 + ws[1].0;
        let Some(ds) = ws[1].1.strip_prefix("u:") else {
            return Err(Error::parse(line, ucol, "expected `u:`"));
        };
        let digits = digit_list(params.p(), ds, line, ucol + 2)?;
        return Scalar::from_unit_digits(params, v, &digits)
            .map_err(|e| located(e, line, ucol + 2));
    }
    let (num, den) = match s_trim.find('/') {
        Some(i) => (&s_trim[..i], Some((&s_trim[i + 1..], col + i + 1))),
        None => (s_trim, None),
    };
    let mut value = literal(params, num, line, col)?;
    if let Some((den, dcol)) = den {
        let d = literal(params, den, line, dcol)?;
        if d.is_zero() {
            return Err(Error::parse(line, dcol, "division by zero"));
        }
        value = value.div(&d).map_err(|e| located(e, line, dcol))?;
    }
    Ok(value)
}

/// A polynomial in the uniformizer with integer coefficients.
fn literal(params: FieldParams, s: &str, line: usize, col: usize) -> Result<Scalar> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        s[start..*i].parse().ok()
    };
    let pi_word = |i: &mut usize| -> bool {
        for w in ["pi", "p", "t"] {
            if s[*i..].starts_with(w) {
                *i += w.len();
                return true;
            }
        }
        false
    };
    let mut acc = Scalar::zero(params);
    let mut first = true;
    loop {
        skip_ws(&mut i);
        let mut negative = false;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if first && bytes[i] == b'+' {
                return Err(Error::parse(line, col + i, "unexpected `+`"));
            }
            negative = bytes[i] == b'-';
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            let found = &s[i..];
            return Err(Error::parse(
                line,
                col + i,
                format!("expected `+` or `-`, found `{found}`"),
            ));
        }
        first = false;
        let term_col = col + i;
        let coeff = if i < bytes.len() && bytes[i].is_ascii_digit() {
            let c =
                number(&mut i).ok_or_else(|| Error::parse(line, term_col, "integer too large"))?;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                skip_ws(&mut i);
                if !pi_word(&mut i) {
                    return Err(Error::parse(line, col + i, "expected `pi` after `*`"));
                }
                Some((c, true))
            } else {
                Some((c, false))
            }
        } else if pi_word(&mut i) {
            Some((1, true))
        } else {
            None
        };
        let Some((c, has_pi)) = coeff else {
            let msg = if i < bytes.len() {
                format!(
                    "unexpected `{}`",
                    &s[i..i + s[i..].chars().next().map_or(1, char::len_utf8)]
                )
            } else {
                "unexpected end of scalar".to_string()
            };
            return Err(Error::parse(line, col + i, msg));
        };
        let mut e = 0i64;
        if has_pi {
            e = 1;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                skip_ws(&mut i);
                let ecol = col + i;
                e = number(&mut i)
                    .ok_or_else(|| Error::parse(line, ecol, "expected an exponent"))?
                    as i64;
            }
        }
        let c = i64::try_from(c).map_err(|_| Error::parse(line, term_col, "integer too large"))?;
        let mut t = Scalar::from_i64(params, c);
        if e > 0 {
            t = &t * &Scalar::pi_pow(params, e);
        }
        acc = if negative { &acc - &t } else { &acc + &t };
        skip_ws(&mut i);
        if i >= bytes.len() {
            return Ok(acc);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp3() -> FieldParams {
        FieldParams::new(Backend::Zp, 3, 12).unwrap()
    }

    #[test]
    fn scalar_literals() {
        let f = zp3();
        assert_eq!(parse_scalar(f, "0").unwrap(), Scalar::zero(f));
        assert_eq!(
            parse_scalar(f, "11").unwrap(),
            parse_scalar(f, "2+pi^2").unwrap()
        );
        assert_eq!(parse_scalar(f, "-1").unwrap(), -Scalar::one(f));
        assert_eq!(parse_scalar(f, "3").unwrap(), Scalar::pi_pow(f, 1));
        let half = parse_scalar(f, "1/2").unwrap();
        assert!((&half * &Scalar::from_i64(f, 2)).agrees(&Scalar::one(f)));
        assert_eq!(parse_scalar(f, "1/3").unwrap().valuation(), Some(-1));
        assert_eq!(parse_scalar(f, "O(pi^5)").unwrap(), Scalar::zero_at(f, 5));

        let g = FieldParams::new(Backend::FpT, 3, 8).unwrap();
        let x = parse_scalar(g, "2 + t^2").unwrap();
        assert_eq!(x.ring_digits(4).unwrap(), vec![2, 0, 1, 0]);
        assert_eq!(parse_scalar(g, "4").unwrap(), Scalar::one(g));
    }

    #[test]
    fn scalar_round_trip() {
        let f = zp3();
        for s in [
            Scalar::from_i64(f, 7),
            Scalar::from_i64(f, -45),
            Scalar::zero_at(f, 3),
            Scalar::from_unit_digits(f, -2, &[1, 2]).unwrap(),
        ] {
            assert_eq!(parse_scalar(f, &s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn scalar_errors_have_columns() {
        let f = zp3();
        match parse_scalar(f, "1+x") {
            Err(Error::Parse {
                line: 1, column: 3, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_scalar(f, "1/0").is_err());
        assert!(parse_scalar(f, "v:0 u:0,1").is_err());
        assert!(parse_scalar(f, "v:0 u:1,3").is_err());
    }

    #[test]
    fn function_file_round_trip() {
        let text = "field zp p=3 prec=12\nlevel 1 depth 1\nterm r=1 j=0 c=1\n";
        let f = parse_function(text).unwrap();
        assert_eq!(f.coeff(&Rep::from_u64(3, 1), 0), Scalar::one(f.params()));
        let canon = write_function(&f);
        assert_eq!(write_function(&parse_function(&canon).unwrap()), canon);
        assert!(canon.starts_with("field zp p=3 prec=12\nlevel 1 depth 1\nterm r=1 j=0 c=v:0 u:1"));
    }

    #[test]
    fn input_order_is_irrelevant() {
        let a = "field zp p=3\nlevel 1 depth 1\nterm r=2 j=1 c=5\n# note\n\nterm r=0 j=1 c=1\n";
        let b = "field zp p=3\nlevel 1 depth 1\nterm r=0 j=1 c=1\nterm r=2 j=1 c=5\n";
        assert_eq!(parse_function(a).unwrap(), parse_function(b).unwrap());
    }

    #[test]
    fn file_errors() {
        let dup = "field zp p=3 prec=10\nlevel 1 depth 0\nterm r=0 j=1 c=1\nterm r=0 j=1 c=2\n";
        assert!(matches!(
            parse_function(dup),
            Err(Error::Parse {
                line: 4,
                column: 8,
                ..
            })
        ));
        let bad_digit = "field zp p=3 prec=10\nlevel 1 depth 1\nterm r=3 j=0 c=1\n";
        assert!(matches!(
            parse_function(bad_digit),
            Err(Error::Parse {
                line: 3,
                column: 8,
                ..
            })
        ));
        let missing = "level 1 depth 1\n";
        assert!(matches!(
            parse_function(missing),
            Err(Error::Parse { line: 1, .. })
        ));
        let high_j = "field zp p=3 prec=10\nlevel 1 depth 0\nterm r=0 j=2 c=1\n";
        assert!(matches!(
            parse_function(high_j),
            Err(Error::Parse { line: 3, .. })
        ));
        let char_p = "field fpt p=3 prec=10\nlevel 3 depth 0\n";
        assert!(matches!(
            parse_function(char_p),
            Err(Error::CharacteristicViolation { .. })
        ));
        assert!(matches!(
            parse_function("field zp p=4 prec=10\nlevel 0 depth 0\n"),
            Err(Error::Parse {
                line: 1,
                column: 12,
                ..
            })
        ));
    }

    #[test]
    fn table_round_trip() {
        let text = "field fpt p=5 prec=6\nlevel 2 depth 1\nb r=0 j=2 v=1\nb r=3 j=0 v=2+t\n";
        let t = parse_table(text).unwrap();
        assert_eq!(t.len(), 2);
        let canon = write_table(&t);
        assert_eq!(write_table(&parse_table(&canon).unwrap()), canon);
    }
}
