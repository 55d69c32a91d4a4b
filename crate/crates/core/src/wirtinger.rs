//! Knot diagrams and their Wirtinger presentations.
//!
//! A diagram is a list of arcs `1..=n` (maximal overpassing strands) and
//! crossings. At each crossing the strand passing underneath leaves arc
//! `under_in` and continues as arc `under_out`, while arc `over` passes above.
//! The arc orientation is the one induced by this `in -> out` chaining.

use std::fmt;

use thiserror::Error;

use crate::presentation::Presentation;
use crate::words::{Alphabet, GenId, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("unknown builtin diagram `{0}` (expected unknot, trefoil or paper-5crossing)")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn as_char(self) -> char {
        match self {
            CrossingSign::Positive => '+',
            CrossingSign::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: CrossingSign,
}

impl Crossing {
    pub fn new(over: usize, under_in: usize, under_out: usize, sign: CrossingSign) -> Self {
        Crossing {
            over,
            under_in,
            under_out,
            sign,
        }
    }

    pub fn positive(over: usize, under_in: usize, under_out: usize) -> Self {
        Crossing::new(over, under_in, under_out, CrossingSign::Positive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotDiagram {
    arc_count: usize,
    crossings: Vec<Crossing>,
}

impl KnotDiagram {
    pub fn new(arc_count: usize, crossings: Vec<Crossing>) -> Result<Self, DiagramError> {
        let invalid = |msg: String| Err(DiagramError::Invalid(msg));
        if arc_count == 0 {
            return invalid("a diagram needs at least one arc".into());
        }
        if crossings.is_empty() {
            if arc_count != 1 {
                return invalid(format!(
                    "a diagram without crossings must have exactly 1 arc, found {arc_count}"
                ));
            }
            return Ok(KnotDiagram {
                arc_count,
                crossings,
            });
        }
        for (i, c) in crossings.iter().enumerate() {
            for (role, arc) in [("over", c.over), ("in", c.under_in), ("out", c.under_out)] {
                if arc == 0 || arc > arc_count {
                    return invalid(format!(
                        "crossing {}: {role}={arc} is outside 1..{arc_count}",
                        i + 1
                    ));
                }
            }
        }
        if arc_count != crossings.len() {
            return invalid(format!(
                "arc count {arc_count} does not match the number of crossings {}",
                crossings.len()
            ));
        }
        let mut next = vec![0usize; arc_count + 1];
        let mut seen_out = vec![false; arc_count + 1];
        for c in &crossings {
            if next[c.under_in] != 0 {
                return invalid(format!("arc {} appears twice as under_in", c.under_in));
            }
            next[c.under_in] = c.under_out;
            if std::mem::replace(&mut seen_out[c.under_out], true) {
                return invalid(format!("arc {} appears twice as under_out", c.under_out));
            }
        }
        // in -> out is now a permutation of the arcs; it must be one cycle
        let mut cycle_len = 1;
        let mut walk = next[1];
        while walk != 1 {
            walk = next[walk];
            cycle_len += 1;
        }
        if cycle_len != arc_count {
            return invalid(format!(
                "the arcs do not close up into a single strand (the loop through arc 1 has {cycle_len} of {arc_count} arcs)"
            ));
        }
        Ok(KnotDiagram {
            arc_count,
            crossings,
        })
    }

    pub fn unknot() -> Self {
        KnotDiagram {
            arc_count: 1,
            crossings: Vec::new(),
        }
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Renames arc `i` to `perm[i - 1]`. `perm` must be a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, DiagramError> {
        if perm.len() != self.arc_count {
            return Err(DiagramError::Invalid(format!(
                "relabeling has {} entries for {} arcs",
                perm.len(),
                self.arc_count
            )));
        }
        let map = |arc: usize| perm[arc - 1];
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new(map(c.over), map(c.under_in), map(c.under_out), c.sign))
            .collect();
        KnotDiagram::new(self.arc_count, crossings)
    }

    /// Parses the diagram file format:
    ///
    /// ```text
    /// arcs 3
    /// crossing over=1 in=2 out=3 sign=+
    /// ```
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut arc_count: Option<usize> = None;
        let mut crossings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| DiagramError::Syntax {
                line: line_no,
                message,
            };
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap_or("");
            match (keyword, arc_count) {
                ("arcs", None) => {
                    let n = parts
                        .next()
                        .ok_or_else(|| syntax("`arcs` needs a count".into()))?;
                    let n = n
                        .parse::<usize>()
                        .map_err(|_| syntax(format!("bad arc count `{n}`")))?;
                    if let Some(extra) = parts.next() {
                        return Err(syntax(format!("unexpected `{extra}` after arc count")));
                    }
                    arc_count = Some(n);
                }
                ("arcs", Some(_)) => return Err(syntax("duplicate `arcs` line".into())),
                ("crossing", Some(_)) => {
                    let mut fields: [Option<&str>; 4] = [None; 4];
                    for part in parts {
                        let (key, value) = part
                            .split_once('=')
                            .ok_or_else(|| syntax(format!("expected key=value, found `{part}`")))?;
                        let slot = match key {
                            "over" => 0,
                            "in" => 1,
                            "out" => 2,
                            "sign" => 3,
                            _ => return Err(syntax(format!("unknown field `{key}`"))),
                        };
                        if fields[slot].replace(value).is_some() {
                            return Err(syntax(format!("field `{key}` given twice")));
                        }
                    }
                    let names = ["over", "in", "out", "sign"];
                    let get = |i: usize| {
                        fields[i].ok_or_else(|| syntax(format!("missing field `{}`", names[i])))
                    };
                    let arc = |i: usize| -> Result<usize, DiagramError> {
                        let v = get(i)?;
                        v.parse()
                            .map_err(|_| syntax(format!("bad arc label `{v}` for `{}`", names[i])))
                    };
                    let sign = match get(3)? {
                        "+" | "+1" => CrossingSign::Positive,
                        "-" | "-1" => CrossingSign::Negative,
                        other => return Err(syntax(format!("bad sign `{other}`"))),
                    };
                    crossings.push(Crossing::new(arc(0)?, arc(1)?, arc(2)?, sign));
                }
                ("crossing", None) => {
                    return Err(syntax("`crossing` before the `arcs` line".into()))
                }
                (other, _) => return Err(syntax(format!("unknown keyword `{other}`"))),
            }
        }
        let arc_count = arc_count.ok_or(DiagramError::Syntax {
            line: 1,
            message: "missing `arcs` line".into(),
        })?;
        KnotDiagram::new(arc_count, crossings)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arcs {}", self.arc_count)?;
        for c in &self.crossings {
            writeln!(
                f,
                "crossing over={} in={} out={} sign={}",
                c.over,
                c.under_in,
                c.under_out,
                c.sign.as_char()
            )?;
        }
        Ok(())
    }
}

pub fn parse_diagram(text: &str) -> Result<KnotDiagram, DiagramError> {
    KnotDiagram::parse(text)
}

/// Names accepted by [`builtin_diagram`].
pub const BUILTIN_DIAGRAMS: &[&str] = &["unknot", "trefoil", "paper-5crossing"];

/// Hardcoded diagrams. The trefoil gives the relations
/// `a1a2=a3a1, a2a3=a1a2, a3a1=a2a3`; the five-crossing knot gives
/// `a4a1=a2a4, a1a3=a4a1, a2a5=a1a2, a5a2=a3a5, a3a4=a5a3`.
pub fn builtin_diagram(name: &str) -> Result<KnotDiagram, DiagramError> {
    let p = Crossing::positive;
    match name {
        "unknot" => Ok(KnotDiagram::unknot()),
        "trefoil" => KnotDiagram::new(3, vec![p(1, 2, 3), p(2, 3, 1), p(3, 1, 2)]),
        "paper-5crossing" => KnotDiagram::new(
            5,
            vec![p(4, 1, 2), p(1, 3, 4), p(2, 5, 1), p(5, 2, 3), p(3, 4, 5)],
        ),
        _ => Err(DiagramError::UnknownBuiltin(name.to_string())),
    }
}

/// One generator `a_i` per arc and one relator per crossing:
/// a positive crossing gives `a_out = a_over a_in a_over^-1`, a negative one
/// `a_out = a_over^-1 a_in a_over`, stored as the relator
/// `a_over^{±1} a_in a_over^{∓1} a_out^-1`.
pub fn wirtinger_presentation(d: &KnotDiagram) -> Presentation {
    let alphabet = Alphabet::new((1..=d.arc_count).map(|i| format!("a{i}")))
        .expect("a1..an are valid distinct names");
    // Alphabet::new assigns ids 0..n in order
    let gen = |arc: usize| GenId((arc - 1) as u32);
    let relators = d
        .crossings
        .iter()
        .map(|c| {
            let e = match c.sign {
                CrossingSign::Positive => 1,
                CrossingSign::Negative => -1,
            };
            Word::reduce([
                (gen(c.over), e),
                (gen(c.under_in), 1),
                (gen(c.over), -e),
                (gen(c.under_out), -1),
            ])
            .expect("unit exponents cannot overflow")
        })
        .collect();
    Presentation::new(alphabet, relators).expect("relators use only a1..an")
}
