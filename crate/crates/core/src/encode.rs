//! Text formats: the native instance and matching formats, an ASP rendering
//! (facts plus a fixed program with optional weak constraints per
//! objective), and an LP-file rendering of the integer model.
//!
//! Native files start with a `#smti-v1` header line (optional when
//! parsing). An instance file then carries `n`, followed by `n` men lines
//! and `n` women lines of the form `index : (tie-group) (tie-group) ...`,
//! where a tie group lists the partner indices sharing one rank level and
//! groups appear in ascending rank. A matching file carries one `man woman`
//! pair per line; unlisted men are single. All indices are 0-based, also in
//! the ASP and LP renderings.
//!
//! Every emitter is deterministic: the same value always produces the same
//! bytes.

use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::Instance;
use crate::matching::Matching;
use crate::stability::Objective;

/// Version header carried by native instance and matching files.
pub const FORMAT_HEADER: &str = "#smti-v1";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Non-blank lines with their 1-based numbers, the header line skipped.
fn content_lines(text: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut rows = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if first && line == FORMAT_HEADER {
            first = false;
            continue;
        }
        if line.starts_with('#') {
            return Err(ParseError::new(
                i + 1,
                format!("unknown directive `{line}`"),
            ));
        }
        first = false;
        rows.push((i + 1, line));
    }
    Ok(rows)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let rows = content_lines(text)?;
    let Some(&(n_line, n_text)) = rows.first() else {
        return Err(ParseError::new(1, "empty instance file"));
    };
    let n: usize = n_text.parse().map_err(|_| {
        ParseError::new(n_line, format!("expected instance size, found `{n_text}`"))
    })?;
    if n == 0 {
        return Err(ParseError::new(n_line, "instance size must be positive"));
    }
    if rows.len() != 1 + 2 * n {
        let (line, message) = match rows.get(1 + 2 * n) {
            Some(&(line, text)) => (line, format!("unexpected trailing content `{text}`")),
            None => (
                rows.last().map(|&(l, _)| l).unwrap_or(n_line),
                format!("expected {} agent lines, found {}", 2 * n, rows.len() - 1),
            ),
        };
        return Err(ParseError::new(line, message));
    }
    let parse_side = |offset: usize| -> Result<Vec<Vec<Vec<usize>>>, ParseError> {
        (0..n)
            .map(|a| {
                let (line, text) = rows[1 + offset + a];
                parse_agent_line(line, text, a, n)
            })
            .collect()
    };
    let men = parse_side(0)?;
    let women = parse_side(n)?;
    Instance::from_lists(men, women)
        .map_err(|e| ParseError::new(n_line, format!("invalid instance: {e}")))
}

fn parse_agent_line(
    line: usize,
    text: &str,
    expected: usize,
    n: usize,
) -> Result<Vec<Vec<usize>>, ParseError> {
    let err = |message: String| ParseError::new(line, message);
    let (head, rest) = text
        .split_once(':')
        .ok_or_else(|| err("expected `index : (group) ...`".into()))?;
    let index: usize = head
        .trim()
        .parse()
        .map_err(|_| err(format!("expected agent index, found `{}`", head.trim())))?;
    if index != expected {
        return Err(err(format!("expected agent {expected}, found {index}")));
    }
    let spaced = rest.replace('(', " ( ").replace(')', " ) ");
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut open: Option<Vec<usize>> = None;
    let mut listed = vec![false; n];
    for token in spaced.split_whitespace() {
        match token {
            "(" => {
                if open.is_some() {
                    return Err(err("nested `(`".into()));
                }
                open = Some(Vec::new());
            }
            ")" => match open.take() {
                None => return Err(err("`)` without matching `(`".into())),
                Some(group) if group.is_empty() => return Err(err("empty tie group".into())),
                Some(group) => groups.push(group),
            },
            entry => {
                let partner: usize = entry
                    .parse()
                    .map_err(|_| err(format!("expected partner index, found `{entry}`")))?;
                if partner >= n {
                    return Err(err(format!("partner {partner} out of range for n={n}")));
                }
                if listed[partner] {
                    return Err(err(format!("partner {partner} listed twice")));
                }
                listed[partner] = true;
                match open.as_mut() {
                    Some(group) => group.push(partner),
                    None => return Err(err(format!("entry `{entry}` outside a tie group"))),
                }
            }
        }
    }
    if open.is_some() {
        return Err(err("unclosed tie group".into()));
    }
    if groups.is_empty() {
        return Err(err("empty preference list".into()));
    }
    Ok(groups)
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let _ = writeln!(out, "{}", inst.n());
    let mut side = |groups_of: &dyn Fn(usize) -> Vec<Vec<usize>>| {
        for a in 0..inst.n() {
            let _ = write!(out, "{a} :");
            for group in groups_of(a) {
                let entries: Vec<String> = group.iter().map(usize::to_string).collect();
                let _ = write!(out, " ({})", entries.join(" "));
            }
            out.push('\n');
        }
    };
    side(&|a| inst.man_groups(a).to_vec());
    side(&|a| inst.woman_groups(a).to_vec());
    out
}

/// Parses a matching against its instance; pairs must be in range,
/// injective on both sides, and mutually acceptable.
pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching, ParseError> {
    let n = inst.n();
    let mut mu = Matching::empty(n);
    for (line, row) in content_lines(text)? {
        let err = |message: String| ParseError::new(line, message);
        let mut fields = row.split_whitespace();
        let (Some(m_text), Some(w_text), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(err(format!("expected `man woman`, found `{row}`")));
        };
        let man: usize = m_text
            .parse()
            .map_err(|_| err(format!("expected man index, found `{m_text}`")))?;
        let woman: usize = w_text
            .parse()
            .map_err(|_| err(format!("expected woman index, found `{w_text}`")))?;
        if man >= n {
            return Err(err(format!("man {man} out of range for n={n}")));
        }
        if woman >= n {
            return Err(err(format!("woman {woman} out of range for n={n}")));
        }
        if !mu.is_single_man(man) {
            return Err(err(format!("man {man} matched twice")));
        }
        if !mu.is_single_woman(woman) {
            return Err(err(format!("woman {woman} matched twice")));
        }
        mu.match_pair(inst, man, woman)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(mu)
}

pub fn emit_matching(mu: &Matching) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    for (m, w) in mu.pairs() {
        let _ = writeln!(out, "{m} {w}");
    }
    out
}

/// The fixed ASP program over the instance facts: acceptability, preference,
/// the matching choice with its capacity constraint, and one constraint per
/// blocking-pair case.
const ASP_PROGRAM: &str = "\
maccept(X,Y) :- mrank(X,Y,R).
waccept(Y,X) :- wrank(Y,X,R).
acceptable(X,Y) :- maccept(X,Y), waccept(Y,X).
mprefer(X,Y,Y1) :- mrank(X,Y1,R), mrank(X,Y,R1), R > R1.
wprefer(Y,X,X1) :- wrank(Y,X1,R), wrank(Y,X,R1), R > R1.
{ marry(X,Y) : acceptable(X,Y) } 1 :- man(X).
:- { marry(X,Y) : man(X) } > 1, woman(Y).
msingle(X) :- man(X), { marry(X,Y) : woman(Y) } 0.
wsingle(Y) :- woman(Y), { marry(X,Y) : man(X) } 0.
:- acceptable(X,Y), msingle(X), wsingle(Y).
:- wsingle(Y), marry(X,Y1), mprefer(X,Y,Y1), acceptable(X,Y).
:- msingle(X), marry(X1,Y), wprefer(Y,X,X1), acceptable(X,Y).
:- marry(X,Y1), marry(X1,Y), mprefer(X,Y,Y1), wprefer(Y,X,X1).
#show marry/2.
";

/// Emits the instance as ASP facts followed by the program; passing an
/// objective appends its weak constraints, no objective emits the decision
/// version. Men and women are rendered as constants `m<i>` / `w<j>` and one
/// fact is emitted per defined rank entry, whether or not it is mutual.
pub fn emit_asp(inst: &Instance, variant: Option<Objective>) -> String {
    let n = inst.n();
    let mut out = String::new();
    for m in 0..n {
        let _ = writeln!(out, "man(m{m}).");
    }
    for w in 0..n {
        let _ = writeln!(out, "woman(w{w}).");
    }
    for m in 0..n {
        for w in 0..n {
            if let Some(r) = inst.mrank(m, w) {
                let _ = writeln!(out, "mrank(m{m},w{w},{r}).");
            }
        }
    }
    for w in 0..n {
        for m in 0..n {
            if let Some(r) = inst.wrank(w, m) {
                let _ = writeln!(out, "wrank(w{w},m{m},{r}).");
            }
        }
    }
    out.push('\n');
    out.push_str(ASP_PROGRAM);
    if let Some(objective) = variant {
        out.push('\n');
        match objective {
            Objective::MaxCardinality => {
                out.push_str(":~ msingle(X). [1@1,m,X]\n");
                out.push_str(":~ wsingle(Y). [1@1,w,Y]\n");
            }
            Objective::Egalitarian => {
                out.push_str(":~ marry(X,Y), mrank(X,Y,R1), wrank(Y,X,R2). [R1+R2@1,X,Y]\n");
            }
            Objective::SexEqual => {
                out.push_str(
                    ":~ T = #sum { R1-R2,X,Y : marry(X,Y), mrank(X,Y,R1), wrank(Y,X,R2) }. [|T|@1]\n",
                );
            }
        }
    }
    out
}

fn var_name(man: usize, woman: usize) -> String {
    format!("x_{man}_{woman}")
}

/// Joins pre-signed terms under a `name:` prefix, wrapping long rows.
fn wrap_row(prefix: &str, terms: &[String], suffix: &str) -> String {
    let mut out = String::new();
    let mut line = prefix.to_string();
    for term in terms {
        if line.len() + term.len() + 1 > 72 {
            out.push_str(&line);
            out.push('\n');
            line = format!("   {term}");
        } else {
            let _ = write!(line, " {term}");
        }
    }
    if !suffix.is_empty() {
        let _ = write!(line, " {suffix}");
    }
    out.push_str(&line);
    out.push('\n');
    out
}

/// Terms with explicit coefficients: the first term carries its own sign,
/// later ones join with `+`/`-`.
fn signed_terms(parts: &[(i64, String)]) -> Vec<String> {
    let mut terms = Vec::new();
    for (i, (coef, name)) in parts.iter().enumerate() {
        let magnitude = coef.abs();
        let body = if magnitude == 1 {
            name.clone()
        } else {
            format!("{magnitude} {name}")
        };
        let term = if i == 0 {
            if *coef < 0 {
                format!("- {body}")
            } else {
                body
            }
        } else if *coef < 0 {
            format!("- {body}")
        } else {
            format!("+ {body}")
        };
        terms.push(term);
    }
    terms
}

/// Emits the integer model in LP-file format: one binary variable per
/// mutually acceptable pair, at-most-one rows per man and woman, and one
/// stability row per pair requiring that the man is matched at least as
/// well as the woman or she is matched at least as well as him. The
/// sex-equal objective is linearized through one auxiliary variable `t`
/// bounding the signed rank gap from both sides.
pub fn emit_lp(inst: &Instance, objective: Objective) -> String {
    let n = inst.n();
    let pairs: Vec<(usize, usize)> = inst.acceptable_pairs().collect();
    let mut out = String::new();
    let _ = writeln!(out, "\\ smti-v1 n={n} objective={objective}");

    let objective_parts: Vec<(i64, String)> = match objective {
        Objective::MaxCardinality => pairs.iter().map(|&(m, w)| (1, var_name(m, w))).collect(),
        Objective::Egalitarian => pairs
            .iter()
            .map(|&(m, w)| {
                let c = (inst.mrank(m, w).unwrap() + inst.wrank(w, m).unwrap()) as i64;
                (c, var_name(m, w))
            })
            .collect(),
        Objective::SexEqual => vec![(1, "t".to_string())],
    };
    out.push_str(if objective.maximizing() {
        "Maximize\n"
    } else {
        "Minimize\n"
    });
    out.push_str(&wrap_row(" obj:", &signed_terms(&objective_parts), ""));

    out.push_str("Subject To\n");
    for m in 0..n {
        let parts: Vec<(i64, String)> = pairs
            .iter()
            .filter(|&&(i, _)| i == m)
            .map(|&(i, j)| (1, var_name(i, j)))
            .collect();
        if !parts.is_empty() {
            out.push_str(&wrap_row(
                &format!(" cap_m_{m}:"),
                &signed_terms(&parts),
                "<= 1",
            ));
        }
    }
    for w in 0..n {
        let parts: Vec<(i64, String)> = pairs
            .iter()
            .filter(|&&(_, j)| j == w)
            .map(|&(i, j)| (1, var_name(i, j)))
            .collect();
        if !parts.is_empty() {
            out.push_str(&wrap_row(
                &format!(" cap_w_{w}:"),
                &signed_terms(&parts),
                "<= 1",
            ));
        }
    }
    for &(i, j) in &pairs {
        let mut parts: Vec<(i64, String)> = Vec::new();
        let bar_m = inst.mrank(i, j).unwrap();
        for q in 0..n {
            if inst.acceptable(i, q) && inst.mrank(i, q).unwrap() <= bar_m {
                parts.push((1, var_name(i, q)));
            }
        }
        let bar_w = inst.wrank(j, i).unwrap();
        for p in 0..n {
            if p != i && inst.acceptable(p, j) && inst.wrank(j, p).unwrap() <= bar_w {
                parts.push((1, var_name(p, j)));
            }
        }
        out.push_str(&wrap_row(
            &format!(" stab_{i}_{j}:"),
            &signed_terms(&parts),
            ">= 1",
        ));
    }
    if objective == Objective::SexEqual {
        let gap: Vec<(i64, (usize, usize))> = pairs
            .iter()
            .map(|&(m, w)| {
                let c = inst.mrank(m, w).unwrap() as i64 - inst.wrank(w, m).unwrap() as i64;
                (c, (m, w))
            })
            .filter(|&(c, _)| c != 0)
            .collect();
        let mut pos: Vec<(i64, String)> = vec![(1, "t".to_string())];
        let mut neg: Vec<(i64, String)> = vec![(1, "t".to_string())];
        for &(c, (m, w)) in &gap {
            pos.push((-c, var_name(m, w)));
            neg.push((c, var_name(m, w)));
        }
        out.push_str(&wrap_row(" gap_pos:", &signed_terms(&pos), ">= 0"));
        out.push_str(&wrap_row(" gap_neg:", &signed_terms(&neg), ">= 0"));
    }

    out.push_str("Binary\n");
    for &(m, w) in &pairs {
        let _ = writeln!(out, " {}", var_name(m, w));
    }
    out.push_str("End\n");
    out
}
