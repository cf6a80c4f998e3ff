//! The `.crn` network format.
//!
//! ```text
//! # comment
//! species: T M C0          (optional; fixes species order)
//! T + M <-> C0 ; k = 1, 2  (forward and backward rates)
//! 0 -> 3/2 X ; k = 0.5
//! ```
//!
//! A complex is `0` or a `+`-separated list of `[coefficient] species`
//! terms. Without a `species:` header, species are numbered in order of first
//! appearance. [`format_network`] writes one reaction per line in canonical
//! order, always with a header, so its output is a fixed point of
//! parse-then-format.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{Signed, Zero};

use super::{content_lines, is_identifier, ParseError, Scanner, SourceLocation};
use crate::{Complex, MassActionSystem, RatVector, Rational};

/// A parsed network together with where each reaction came from.
#[derive(Clone, Debug)]
pub struct NetworkDocument {
    pub source_text: String,
    pub system: MassActionSystem,
    /// Source location of each edge, indexed like `system.network().edges()`.
    pub line_map: Vec<SourceLocation>,
}

type Terms = Vec<(Rational, String)>;

struct RawReaction {
    lhs: Terms,
    rhs: Terms,
    rate: Rational,
    location: SourceLocation,
}

fn complex_terms(sc: &mut Scanner<'_>) -> Result<Terms, ParseError> {
    let mut terms = Vec::new();
    loop {
        let loc = sc.location();
        let coeff = sc.number()?;
        match sc.ident() {
            Some(name) => terms.push((coeff.unwrap_or_else(|| Rational::from_integer(1.into())), name.to_string())),
            None => match coeff {
                Some(c) if c.is_zero() && terms.is_empty() => return Ok(terms),
                Some(_) => return Err(ParseError::new(loc, "expected a species name after the coefficient")),
                None => return Err(sc.error(format!("expected a complex, found {}", sc.describe_next()))),
            },
        }
        if !sc.eat("+") {
            return Ok(terms);
        }
    }
}

fn rate(sc: &mut Scanner<'_>) -> Result<Rational, ParseError> {
    let loc = sc.location();
    let negative = sc.eat("-");
    let value = sc
        .number()?
        .ok_or_else(|| sc.error(format!("expected a rate constant, found {}", sc.describe_next())))?;
    if negative || value.is_zero() {
        let shown = if negative { -value } else { value };
        return Err(ParseError::new(loc, format!("rate constant must be positive, got {shown}")));
    }
    Ok(value)
}

fn species_header(sc: &mut Scanner<'_>) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    while !sc.at_end() {
        let loc = sc.location();
        let name = sc.ident().ok_or_else(|| sc.error(format!("expected a species name, found {}", sc.describe_next())))?;
        if names.iter().any(|n| n == name) {
            return Err(ParseError::new(loc, format!("species `{name}` declared twice")));
        }
        names.push(name.to_string());
    }
    Ok(names)
}

pub fn parse_network_document(text: &str) -> Result<NetworkDocument, ParseError> {
    let mut header: Option<Vec<String>> = None;
    let mut raw = Vec::new();
    for (line_no, content) in content_lines(text) {
        let mut sc = Scanner::new(line_no, content);
        if sc.at_end() {
            continue;
        }
        if sc.eat("species:") {
            if header.is_some() || !raw.is_empty() {
                return Err(ParseError::new(
                    SourceLocation { line: line_no, column: 1 },
                    "the species header must appear once, before any reaction",
                ));
            }
            header = Some(species_header(&mut sc)?);
            continue;
        }
        let location = sc.location();
        let lhs = complex_terms(&mut sc)?;
        let reversible = if sc.eat("<->") {
            true
        } else if sc.eat("->") {
            false
        } else {
            return Err(sc.error(format!("expected `->` or `<->`, found {}", sc.describe_next())));
        };
        let rhs = complex_terms(&mut sc)?;
        sc.expect(";")?;
        sc.expect("k")?;
        sc.expect("=")?;
        let forward = rate(&mut sc)?;
        let backward = if reversible {
            sc.expect(",")?;
            Some(rate(&mut sc)?)
        } else {
            None
        };
        if !sc.at_end() {
            return Err(sc.error(format!("unexpected {} after the rate clause", sc.describe_next())));
        }
        if let Some(k) = backward {
            raw.push(RawReaction { lhs: lhs.clone(), rhs: rhs.clone(), rate: forward, location });
            raw.push(RawReaction { lhs: rhs, rhs: lhs, rate: k, location });
        } else {
            raw.push(RawReaction { lhs, rhs, rate: forward, location });
        }
    }
    if raw.is_empty() {
        return Err(ParseError::new(SourceLocation { line: 1, column: 1 }, "network has no reactions"));
    }

    let species = match header {
        Some(names) => {
            for r in &raw {
                if let Some((_, name)) = r.lhs.iter().chain(&r.rhs).find(|(_, n)| !names.contains(n)) {
                    return Err(ParseError::new(r.location, format!("species `{name}` is not declared in the header")));
                }
            }
            names
        }
        None => {
            let mut names: Vec<String> = Vec::new();
            for (_, name) in raw.iter().flat_map(|r| r.lhs.iter().chain(&r.rhs)) {
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
            names
        }
    };

    let build = |terms: &Terms| {
        let mut e = vec![Rational::zero(); species.len()];
        for (coeff, name) in terms {
            let i = species.iter().position(|s| s == name).expect("species resolved above");
            e[i] += coeff.clone();
        }
        Complex::new(RatVector::new(e)).expect("coefficients are non-negative")
    };

    let mut seen: BTreeMap<(Complex, Complex), SourceLocation> = BTreeMap::new();
    let mut reactions = Vec::with_capacity(raw.len());
    for r in &raw {
        let (s, t) = (build(&r.lhs), build(&r.rhs));
        if s == t {
            return Err(ParseError::new(r.location, format!("self-loop at complex {}", s.display(&species))));
        }
        if seen.insert((s.clone(), t.clone()), r.location).is_some() {
            return Err(ParseError::new(
                r.location,
                format!("duplicate reaction {} -> {}", s.display(&species), t.display(&species)),
            ));
        }
        reactions.push((s, t, r.rate.clone()));
    }

    let first = raw[0].location;
    let system = MassActionSystem::from_reactions(species, reactions).map_err(|e| ParseError::new(first, e.to_string()))?;
    let line_map = system.reactions().map(|(s, t, _)| seen[&(s.clone(), t.clone())]).collect();
    Ok(NetworkDocument { source_text: text.to_string(), system, line_map })
}

pub fn parse_network(text: &str) -> Result<MassActionSystem, ParseError> {
    parse_network_document(text).map(|doc| doc.system)
}

/// Parse a single complex such as `2 X + Y` against a fixed species list.
pub fn parse_complex(text: &str, species: &[String]) -> Result<Complex, ParseError> {
    let mut sc = Scanner::new(1, text);
    let terms = complex_terms(&mut sc)?;
    if !sc.at_end() {
        return Err(sc.error(format!("unexpected {} after the complex", sc.describe_next())));
    }
    let mut e = vec![Rational::zero(); species.len()];
    for (coeff, name) in terms {
        let i = species
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| ParseError::new(SourceLocation { line: 1, column: 1 }, format!("unknown species `{name}`")))?;
        e[i] += coeff;
    }
    Ok(Complex::new(RatVector::new(e)).expect("coefficients are non-negative"))
}

/// Canonical text: a species header, then one irreversible reaction per line
/// in canonical edge order.
pub fn format_network(sys: &MassActionSystem) -> String {
    let species = sys.species();
    debug_assert!(species.iter().all(|s| is_identifier(s)));
    let mut out = String::new();
    writeln!(out, "species: {}", species.join(" ")).unwrap();
    for (s, t, k) in sys.reactions() {
        debug_assert!(k.is_positive());
        writeln!(out, "{} -> {} ; k = {}", s.display(species), t.display(species), k).unwrap();
    }
    out
}
