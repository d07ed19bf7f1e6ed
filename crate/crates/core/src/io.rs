//! Line-oriented text formats for spaces, profiles, weights and tie orders.
//!
//! Blank lines and lines starting with `#` are ignored. Errors carry the
//! 1-based line number of the offending line.

use crate::error::{Error, Result};
use crate::metric::{TieOrder, WeightVector};
use crate::space::{make_space, Evaluation, EvaluationSpace, Profile, SpaceSpec};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn parse_row(line: usize, text: &str, m: usize) -> Result<Evaluation> {
    let x: Evaluation = text
        .parse()
        .map_err(|e: Error| Error::parse(line, format!("`{text}`: {}", strip_line(e))))?;
    if x.len() != m {
        return Err(Error::parse(
            line,
            format!("`{text}` has {} positions, expected {m}", x.len()),
        ));
    }
    Ok(x)
}

fn strip_line(e: Error) -> String {
    match e {
        Error::Parse { msg, .. } => msg,
        other => other.to_string(),
    }
}

fn parse_pair(line: usize, tok: &str, k: usize) -> Result<(usize, usize)> {
    let letters: Vec<char> = tok.chars().collect();
    let index = |c: char| {
        (c.is_ascii_lowercase() && ((c as u8 - b'a') as usize) < k).then(|| (c as u8 - b'a') as usize)
    };
    match letters.as_slice() {
        [p, q] => match (index(*p), index(*q)) {
            (Some(p), Some(q)) => Ok((p, q)),
            _ => Err(Error::parse(line, format!("pair `{tok}` names an unknown alternative"))),
        },
        _ => Err(Error::parse(line, format!("pair `{tok}` must be two letters"))),
    }
}

fn parse_generator(line: usize, header: &str) -> Result<Option<SpaceSpec>> {
    let mut toks = header.split_whitespace();
    if toks.next() != Some("space") {
        return Err(Error::parse(line, "expected `space <generator>`"));
    }
    let spec = match toks.next() {
        Some("explicit") => None,
        Some("pref") => {
            let k = parse_number(line, toks.next(), "alternative count")?;
            let pairs: Vec<&str> = toks.by_ref().collect();
            let orientation = if pairs.is_empty() {
                None
            } else {
                Some(pairs.iter().map(|p| parse_pair(line, p, k)).collect::<Result<_>>()?)
            };
            Some(SpaceSpec::Pref { k, orientation })
        }
        Some("choose") => {
            let m = parse_number(line, toks.next(), "issue count")?;
            let k = parse_number(line, toks.next(), "subset size")?;
            Some(SpaceSpec::Choose { m, k })
        }
        Some("cycle") => Some(SpaceSpec::Cycle {
            vertices: parse_number(line, toks.next(), "cycle length")?,
        }),
        Some("doctrinal") => Some(SpaceSpec::Doctrinal),
        Some(other) => return Err(Error::parse(line, format!("unknown generator `{other}`"))),
        None => return Err(Error::parse(line, "missing generator")),
    };
    if let Some(extra) = toks.next() {
        return Err(Error::parse(line, format!("unexpected `{extra}`")));
    }
    Ok(spec)
}

/// Parses a space file: `space <generator>` followed, for `explicit`, by
/// one 0/1 string per feasible evaluation.
pub fn parse_space(text: &str) -> Result<EvaluationSpace> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty space file"))?;
    match parse_generator(line, header)? {
        Some(spec) => {
            if let Some((l, extra)) = lines.next() {
                return Err(Error::parse(l, format!("unexpected `{extra}` after generator")));
            }
            make_space(&spec).map_err(|e| Error::parse(line, e.to_string()))
        }
        None => {
            let mut members = Vec::new();
            let mut m = None;
            for (l, row) in lines {
                let width = *m.get_or_insert(row.len());
                members.push(parse_row(l, row, width)?);
            }
            let m = m.ok_or_else(|| Error::parse(line, "explicit space lists no evaluations"))?;
            make_space(&SpaceSpec::Explicit { m, members }).map_err(|e| Error::parse(line, e.to_string()))
        }
    }
}

/// Writes `space` in the format read by [`parse_space`].
pub fn format_space(space: &EvaluationSpace) -> String {
    use crate::space::Provenance;
    match space.provenance() {
        Provenance::Explicit => {
            let mut out = String::from("space explicit\n");
            for x in space.feasible() {
                out.push_str(&x.to_string());
                out.push('\n');
            }
            out
        }
        p => format!("space {p}\n"),
    }
}

/// Parses a profile file: `profile <n> <m>` followed by `n` rows.
pub fn parse_profile(text: &str, space: &EvaluationSpace) -> Result<Profile> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty profile file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("profile") {
        return Err(Error::parse(line, "expected `profile <n> <m>`"));
    }
    let n = parse_number(line, toks.next(), "voter count")?;
    let m = parse_number(line, toks.next(), "issue count")?;
    if m != space.m() {
        return Err(Error::parse(line, format!("profile has {m} issues, space has {}", space.m())));
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = line;
    for (l, row) in lines {
        if rows.len() == n {
            return Err(Error::parse(l, format!("more than {n} rows")));
        }
        let x = parse_row(l, row, m)?;
        if !space.is_feasible(&x)? {
            return Err(Error::parse(l, format!("row {x} is not feasible")));
        }
        rows.push(x);
        last = l;
    }
    if rows.len() != n || n == 0 {
        return Err(Error::parse(last, format!("expected {n} rows, found {}", rows.len())));
    }
    Profile::new(space, rows)
}

/// Parses comma- or space-separated rows given inline.
pub fn parse_inline_profile(text: &str, space: &EvaluationSpace) -> Result<Profile> {
    let rows: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(Error::parse(1, "empty profile"));
    }
    let rows = rows
        .iter()
        .map(|r| {
            let x = parse_row(1, r, space.m())?;
            if space.is_feasible(&x)? {
                Ok(x)
            } else {
                Err(Error::parse(1, format!("row {x} is not feasible")))
            }
        })
        .collect::<Result<_>>()?;
    Profile::new(space, rows)
}

/// Parses a weights file: one line of `m` positive integers.
pub fn parse_weights(text: &str, m: usize) -> Result<WeightVector> {
    let mut lines = content_lines(text);
    let (line, row) = lines.next().ok_or_else(|| Error::parse(1, "empty weights file"))?;
    if let Some((l, _)) = lines.next() {
        return Err(Error::parse(l, "weights must be on a single line"));
    }
    let weights = row
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::parse(line, format!("bad weight `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if weights.len() != m {
        return Err(Error::parse(line, format!("expected {m} weights, found {}", weights.len())));
    }
    WeightVector::new(weights).map_err(|e| Error::parse(line, e.to_string()))
}

/// Parses a tie-order file: every feasible evaluation once, best first.
pub fn parse_tie_order(text: &str, space: &EvaluationSpace) -> Result<TieOrder> {
    let mut seq = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last = 1;
    for (l, row) in content_lines(text) {
        let x = parse_row(l, row, space.m())?;
        if !space.is_feasible(&x)? {
            return Err(Error::parse(l, format!("{x} is not feasible")));
        }
        if !seen.insert(x) {
            return Err(Error::parse(l, format!("{x} listed twice")));
        }
        seq.push(x);
        last = l;
    }
    if seq.len() != space.len() {
        return Err(Error::parse(
            last,
            format!("expected {} evaluations, found {}", space.len(), seq.len()),
        ));
    }
    TieOrder::from_sequence(space, &seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_files() {
        let s = parse_space("space pref 3 ab bc ca\n").unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(format_space(&s), "space pref 3 ab bc ca\n");
        let s = parse_space("# classifier\nspace explicit\n0000\n0001\n\n1111\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(parse_space(&format_space(&s)).unwrap(), s);
        assert_eq!(parse_space("space choose 4 2").unwrap().len(), 6);
        assert_eq!(parse_space("space cycle 6").unwrap().len(), 6);
        assert_eq!(parse_space("space doctrinal").unwrap().len(), 4);
    }

    #[test]
    fn space_errors_carry_lines() {
        let err = |t: &str| match parse_space(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("space explicit\n000\n0a0\n"), 3);
        assert_eq!(err("space explicit\n000\n00\n"), 3);
        assert_eq!(err("\nspace cycle 5\n"), 2);
        assert_eq!(err("space pref 3 ab ab ca\n"), 1);
        assert_eq!(err("space pref 3 ab bz ca\n"), 1);
        assert_eq!(err("space explicit\n"), 1);
        assert_eq!(err("spaces doctrinal\n"), 1);
        assert_eq!(err("space doctrinal\n101\n"), 2);
        assert_eq!(err(""), 1);
    }

    #[test]
    fn profiles() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let p = parse_profile("profile 3 3\n010\n100\n111\n", &d).unwrap();
        assert_eq!(p.to_string(), "010 100 111");
        assert_eq!(parse_inline_profile("010,100, 111", &d).unwrap(), p);
        let line = |t: &str| match parse_profile(t, &d) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("profile 3 3\n010\n110\n111\n"), 3);
        assert_eq!(line("profile 2 3\n010\n100\n111\n"), 4);
        assert_eq!(line("profile 3 3\n010\n100\n"), 3);
        assert_eq!(line("profile 3 4\n"), 1);
        assert!(parse_inline_profile("110", &d).is_err());
    }

    #[test]
    fn weights_and_ties() {
        assert_eq!(parse_weights("3 2 1\n", 3).unwrap().weights(), &[3, 2, 1]);
        assert!(parse_weights("3 0 1\n", 3).is_err());
        assert!(parse_weights("3 2\n", 3).is_err());
        assert!(parse_weights("1 1 1\n1 1 1\n", 3).is_err());
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let t = parse_tie_order("111\n000\n010\n100\n", &d).unwrap();
        assert_eq!(t.sequence(&d).next().unwrap().to_string(), "111");
        assert!(parse_tie_order("111\n000\n010\n", &d).is_err());
        assert!(parse_tie_order("111\n000\n010\n010\n", &d).is_err());
        assert!(parse_tie_order("111\n000\n010\n110\n", &d).is_err());
    }
}
