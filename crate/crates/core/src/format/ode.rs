//! The `.ode` polynomial-system format.
//!
//! ```text
//! vars: x y              (optional; otherwise the order of the d<var>/dt lines)
//! dx/dt = 1 + 2*y^2
//! dy/dt = 1 - 2*y^2
//! ```
//!
//! A term is a `*`-separated product of numbers and `var[^exponent]`
//! factors. Exponents are non-negative integers, or rationals in
//! parentheses such as `x^(1/2)`. Like terms are combined on parse.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::{content_lines, ParseError, Scanner, SourceLocation};
use crate::dynamics::PolynomialMap;
use crate::realization::OdeSystem;
use crate::{Complex, RatVector, Rational};

#[derive(Clone, Debug)]
pub struct OdeDocument {
    pub source_text: String,
    pub system: OdeSystem,
}

struct Term {
    coeff: Rational,
    exponents: BTreeMap<String, Rational>,
    location: SourceLocation,
}

fn exponent(sc: &mut Scanner<'_>) -> Result<Rational, ParseError> {
    let loc = sc.location();
    let parenthesized = sc.eat("(");
    let negative = sc.eat("-");
    let value = sc
        .number()?
        .ok_or_else(|| sc.error(format!("expected an exponent, found {}", sc.describe_next())))?;
    if parenthesized {
        sc.expect(")")?;
    } else if !value.is_integer() {
        return Err(ParseError::new(loc, "fractional exponents must be parenthesized, as in x^(1/2)"));
    }
    if negative && !value.is_zero() {
        return Err(ParseError::new(loc, format!("negative exponent -{value}")));
    }
    Ok(value)
}

fn term(sc: &mut Scanner<'_>, sign: Rational) -> Result<Term, ParseError> {
    let location = sc.location();
    let mut coeff = sign;
    let mut exponents: BTreeMap<String, Rational> = BTreeMap::new();
    loop {
        if let Some(c) = sc.number()? {
            coeff *= c;
        } else if let Some(name) = sc.ident() {
            let e = if sc.eat("^") { exponent(sc)? } else { Rational::one() };
            *exponents.entry(name.to_string()).or_insert_with(Rational::zero) += e;
        } else {
            return Err(sc.error(format!("expected a number or variable, found {}", sc.describe_next())));
        }
        if !sc.eat("*") {
            return Ok(Term { coeff, exponents, location });
        }
    }
}

fn polynomial(sc: &mut Scanner<'_>) -> Result<Vec<Term>, ParseError> {
    let mut terms = Vec::new();
    let mut sign = if sc.eat("-") {
        -Rational::one()
    } else {
        sc.eat("+");
        Rational::one()
    };
    loop {
        terms.push(term(sc, sign)?);
        sign = if sc.eat("+") {
            Rational::one()
        } else if sc.eat("-") {
            -Rational::one()
        } else if sc.at_end() {
            return Ok(terms);
        } else {
            return Err(sc.error(format!("expected `+`, `-` or end of line, found {}", sc.describe_next())));
        };
    }
}

pub fn parse_ode_document(text: &str) -> Result<OdeDocument, ParseError> {
    let mut header: Option<Vec<String>> = None;
    let mut lines: Vec<(String, SourceLocation, Vec<Term>)> = Vec::new();
    for (line_no, content) in content_lines(text) {
        let mut sc = Scanner::new(line_no, content);
        if sc.at_end() {
            continue;
        }
        let start = sc.location();
        if sc.eat("vars:") {
            if header.is_some() || !lines.is_empty() {
                return Err(ParseError::new(start, "the vars header must appear once, before any equation"));
            }
            let mut names: Vec<String> = Vec::new();
            while !sc.at_end() {
                let loc = sc.location();
                let name = sc.ident().ok_or_else(|| sc.error(format!("expected a variable name, found {}", sc.describe_next())))?;
                if names.iter().any(|n| n == name) {
                    return Err(ParseError::new(loc, format!("variable `{name}` declared twice")));
                }
                names.push(name.to_string());
            }
            header = Some(names);
            continue;
        }
        let var = match sc.ident() {
            Some(word) if word.len() > 1 && word.starts_with('d') => word[1..].to_string(),
            _ => return Err(ParseError::new(start, "expected an equation of the form d<var>/dt = <polynomial>")),
        };
        sc.expect("/")?;
        if sc.ident() != Some("dt") {
            return Err(sc.error("expected `dt`"));
        }
        sc.expect("=")?;
        if lines.iter().any(|(v, _, _)| *v == var) {
            return Err(ParseError::new(start, format!("second equation for `{var}`")));
        }
        let terms = polynomial(&mut sc)?;
        lines.push((var, start, terms));
    }
    if lines.is_empty() {
        return Err(ParseError::new(SourceLocation { line: 1, column: 1 }, "no equations"));
    }

    let names = match header {
        Some(names) => {
            for (var, loc, _) in &lines {
                if !names.contains(var) {
                    return Err(ParseError::new(*loc, format!("variable `{var}` is not declared in the header")));
                }
            }
            if let Some(missing) = names.iter().find(|n| !lines.iter().any(|(v, _, _)| v == *n)) {
                return Err(ParseError::new(SourceLocation { line: 1, column: 1 }, format!("no equation for `{missing}`")));
            }
            names
        }
        None => lines.iter().map(|(v, _, _)| v.clone()).collect(),
    };

    let n = names.len();
    let mut all_terms = Vec::new();
    for (var, _, terms) in &lines {
        let row = names.iter().position(|v| v == var).expect("checked above");
        for t in terms {
            let mut e = vec![Rational::zero(); n];
            for (name, power) in &t.exponents {
                let i = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| ParseError::new(t.location, format!("undeclared variable `{name}`")))?;
                e[i] = power.clone();
            }
            let mut coeff = vec![Rational::zero(); n];
            coeff[row] = t.coeff.clone();
            let monomial = Complex::new(RatVector::new(e)).expect("exponents are non-negative");
            all_terms.push((monomial, RatVector::new(coeff)));
        }
    }
    let poly = PolynomialMap::from_terms(n, all_terms).expect("dimensions agree by construction");
    let system = OdeSystem::new(names, poly).expect("dimensions agree by construction");
    Ok(OdeDocument { source_text: text.to_string(), system })
}

pub fn parse_ode(text: &str) -> Result<OdeSystem, ParseError> {
    parse_ode_document(text).map(|doc| doc.system)
}

fn write_monomial(out: &mut String, names: &[String], monomial: &Complex) {
    let mut first = true;
    for (name, e) in names.iter().zip(monomial.exponents().iter()) {
        if e.is_zero() {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(name);
        if e.is_one() {
            continue;
        }
        if e.is_integer() {
            write!(out, "^{e}").unwrap();
        } else {
            write!(out, "^({e})").unwrap();
        }
    }
}

/// Canonical text: a `vars:` header, then one equation per variable with
/// terms in ascending monomial order.
pub fn format_ode(ode: &OdeSystem) -> String {
    let names = ode.variable_names();
    let mut out = String::new();
    writeln!(out, "vars: {}", names.join(" ")).unwrap();
    for (row, name) in names.iter().enumerate() {
        write!(out, "d{name}/dt = ").unwrap();
        let mut first = true;
        for (monomial, coeff) in ode.poly().terms() {
            let c = &coeff[row];
            if c.is_zero() {
                continue;
            }
            match (first, c.is_negative()) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            first = false;
            let magnitude = c.abs();
            let constant = monomial.exponents().is_zero();
            if constant {
                write!(out, "{magnitude}").unwrap();
            } else {
                if !magnitude.is_one() {
                    write!(out, "{magnitude}*").unwrap();
                }
                write_monomial(&mut out, names, monomial);
            }
        }
        if first {
            out.push('0');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::rhs_polynomial;
    use crate::fixtures;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn v(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn c(xs: &[i64]) -> Complex {
        Complex::from_integers(xs)
    }

    #[test]
    fn parses_the_cubic() {
        let ode = parse_ode("dx/dt = 3 - 3*x^3").unwrap();
        assert_eq!(ode.variable_names(), ["x"]);
        assert_eq!(ode.poly().terms(), &BTreeMap::from([(c(&[0]), v(&[3])), (c(&[3]), v(&[-3]))]));
    }

    #[test]
    fn cancellation_gives_the_zero_polynomial() {
        assert!(parse_ode("dx/dt = x - x").unwrap().poly().is_zero());
        assert_eq!(format_ode(&parse_ode("dx/dt = x - x").unwrap()), "vars: x\ndx/dt = 0\n");
    }

    #[test]
    fn two_variable_system() {
        let ode = parse_ode("dx/dt = 1 + 2*y^2\ndy/dt = 1 - 2*y^2").unwrap();
        assert_eq!(ode.variable_names(), ["x", "y"]);
        assert_eq!(ode.poly().monomials().cloned().collect::<Vec<_>>(), vec![c(&[0, 0]), c(&[0, 2])]);
        assert_eq!(ode.poly().terms()[&c(&[0, 2])], v(&[2, -2]));
    }

    #[test]
    fn term_order_does_not_matter() {
        let a = parse_ode("dx/dt = 2 - x + x^2 - 2*x^3").unwrap();
        let b = parse_ode("dx/dt = -2*x^3 + x^2 + 2 - x").unwrap();
        let c = parse_ode("dx/dt = x*x - x*2*x*x + 1 + 1 - x").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn header_reorders_variables() {
        let a = parse_ode("vars: y x\ndx/dt = y\ndy/dt = x").unwrap();
        assert_eq!(a.variable_names(), ["y", "x"]);
        assert_eq!(a.poly().terms()[&c(&[1, 0])], v(&[0, 1]));
    }

    #[test]
    fn fractional_exponents() {
        let ode = parse_ode("dx/dt = x^(1/2) - 1/2*x^(3/2)").unwrap();
        assert_eq!(format_ode(&ode), "vars: x\ndx/dt = x^(1/2) - 1/2*x^(3/2)\n");
    }

    #[test]
    fn errors() {
        let err = parse_ode("dx/dt = y").unwrap_err();
        assert!(err.message.contains("undeclared"), "{err}");
        let err = parse_ode("dx/dt = x^-1").unwrap_err();
        assert!(err.message.contains("negative"), "{err}");
        let err = parse_ode("dx/dt = x^(-1/2)").unwrap_err();
        assert!(err.message.contains("negative"), "{err}");
        let err = parse_ode("dx/dt = 2 x").unwrap_err();
        assert_eq!(err.location, SourceLocation { line: 1, column: 11 });
        assert!(parse_ode("dx/dt = x^1/2").is_err());
        assert!(parse_ode("vars: x y\ndx/dt = 1").unwrap_err().message.contains("no equation for `y`"));
        assert!(parse_ode("dx/dt = 1\ndx/dt = 2").is_err());
        assert!(parse_ode("x = 1").is_err());
        assert!(parse_ode("").is_err());
    }

    #[test]
    fn format_round_trips() {
        for (name, sys) in fixtures::all() {
            let ode = OdeSystem::from_system(&sys);
            let text = format_ode(&ode);
            let again = parse_ode(&text).unwrap();
            assert_eq!(again, ode, "{name}");
            assert_eq!(format_ode(&again), text, "{name}");
        }
    }

    #[test]
    fn data_files_match_their_networks() {
        let cases = [
            (include_str!("../../data/cubic.ode"), fixtures::cubic_reversible_pair()),
            (include_str!("../../data/diagonal.ode"), fixtures::diagonal_reversible_pair()),
            (include_str!("../../data/planar_irreversible.ode"), fixtures::planar_irreversible_split()),
            (include_str!("../../data/line_cubic.ode"), fixtures::line_two_pairs()),
            (include_str!("../../data/t_cell_receptor_n1.ode"), fixtures::t_cell_receptor(1)),
        ];
        for (text, sys) in cases {
            assert_eq!(parse_ode(text).unwrap().poly(), &rhs_polynomial(&sys));
        }
    }
}
