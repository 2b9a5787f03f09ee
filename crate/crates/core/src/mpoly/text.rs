//! Textual polynomial format.
//!
//! ```text
//! ring: GF(2^2):modulus=0x7; q: 4; vars: 2
//! x1^2*x2 + 0x2*x1*x2^2
//! ```

use num_bigint::BigInt;
use smallvec::smallvec;

use super::{MPoly, Monomial, PolyRing};
use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Gf, Integers, RingTag, ZMod};

pub(super) fn format_terms<R: CoeffRing>(p: &MPoly<R>, name: impl Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let k = p.ring().coeffs();
    let one = k.one();
    let minus_one = k.neg(&one);
    let signed = k.to_bigint(&minus_one).is_some_and(|v| v < BigInt::from(0));
    let clauses: Vec<String> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(slot, &e)| if e == 1 { name(slot) } else { format!("{}^{e}", name(slot)) })
                .collect();
            if factors.is_empty() {
                return k.fmt_coeff(c);
            }
            let body = factors.join("*");
            if *c == one {
                body
            } else if signed && *c == minus_one {
                format!("-{body}")
            } else {
                format!("{}*{body}", k.fmt_coeff(c))
            }
        })
        .collect();
    clauses.join(" + ")
}

fn header<R: CoeffRing>(ring: &PolyRing<R>) -> String {
    format!(
        "ring: {}; q: {}; vars: {}{}",
        ring.coeffs().tag(),
        ring.q(),
        ring.nvars(),
        if ring.has_alpha() { "+alpha" } else { "" }
    )
}

struct Header {
    tag: RingTag,
    q: u64,
    nvars: usize,
    alpha: bool,
}

fn parse_header(line: &str) -> Result<Header> {
    let bad = || Error::Parse(format!("malformed header '{line}'"));
    let mut tag = None;
    let mut q = None;
    let mut vars = None;
    for part in line.split(';') {
        let (key, value) = part.split_once(':').ok_or_else(bad)?;
        let value = value.trim();
        match key.trim() {
            "ring" => tag = Some(RingTag::parse(value)?),
            "q" => q = Some(value.parse::<u64>().map_err(|_| bad())?),
            "vars" => vars = Some(value.to_string()),
            _ => return Err(bad()),
        }
    }
    let vars = vars.ok_or_else(bad)?;
    let (n, alpha) = match vars.strip_suffix("+alpha") {
        Some(n) => (n, true),
        None => (vars.as_str(), false),
    };
    Ok(Header {
        tag: tag.ok_or_else(bad)?,
        q: q.ok_or_else(bad)?,
        nvars: n.trim().parse().map_err(|_| bad())?,
        alpha,
    })
}

impl<R: CoeffRing> PolyRing<R> {
    /// The header line of the textual format.
    pub fn header(&self) -> String {
        header(self)
    }

    /// Parses a term list such as `x1^2*x2 + -3*x1 + 5`.
    pub fn parse(&self, body: &str) -> Result<MPoly<R>> {
        let body = body.trim();
        if body == "0" {
            return Ok(self.zero());
        }
        let mut terms = Vec::new();
        for clause in body.split(" + ") {
            terms.push(self.parse_clause(clause.trim())?);
        }
        Ok(self.from_terms(terms))
    }

    fn parse_clause(&self, clause: &str) -> Result<(Monomial, R::Elem)> {
        if clause.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let k = self.coeffs();
        let mut exps: Monomial = smallvec![0; self.slots()];
        let mut coeff = k.one();
        let (negate, rest) = match clause.strip_prefix('-') {
            Some(r) if r.starts_with('x') || r.starts_with("alpha") => (true, r),
            _ => (false, clause),
        };
        for (idx, factor) in rest.split('*').enumerate() {
            let factor = factor.trim();
            match self.parse_factor(factor)? {
                Some((slot, e)) => {
                    exps[slot] = exps[slot]
                        .checked_add(e)
                        .ok_or(Error::ExponentOverflow)?;
                }
                None if idx == 0 => coeff = k.parse_coeff(factor)?,
                None => return Err(Error::Parse(format!("unexpected factor '{factor}' in '{clause}'"))),
            }
        }
        if negate {
            coeff = k.neg(&coeff);
        }
        Ok((exps, coeff))
    }

    fn parse_factor(&self, factor: &str) -> Result<Option<(usize, u64)>> {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e = e.parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                (b, e)
            }
            None => (factor, 1),
        };
        let slot = if base == "alpha" {
            self.alpha_slot().ok_or_else(|| Error::Parse("alpha used in a ring without alpha".into()))?
        } else if let Some(idx) = base.strip_prefix('x').filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())) {
            let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable '{base}'")))?;
            if i == 0 || i > self.nvars() {
                return Err(Error::Parse(format!("variable '{base}' outside x1..x{}", self.nvars())));
            }
            i - 1
        } else {
            return Ok(None);
        };
        Ok(Some((slot, exp)))
    }
}

impl<R: CoeffRing> MPoly<R> {
    /// Header line plus term list.
    pub fn to_text(&self) -> String {
        format!("{}\n{}", header(self.ring()), self)
    }

    /// Parses header plus term list, checking the header against `coeffs`.
    pub fn from_text(coeffs: &R, text: &str) -> Result<MPoly<R>> {
        let (head, body) = split_text(text)?;
        let h = parse_header(head)?;
        if h.tag != coeffs.tag() {
            return Err(Error::Parse(format!("expected ring {}, found {}", coeffs.tag(), h.tag)));
        }
        PolyRing::new(coeffs.clone(), h.nvars, h.q, h.alpha)?.parse(body)
    }
}

fn split_text(text: &str) -> Result<(&str, &str)> {
    let text = text.trim();
    text.split_once('\n')
        .map(|(h, b)| (h.trim(), b.trim()))
        .ok_or_else(|| Error::Parse("expected a header line and a term line".into()))
}

/// A polynomial over whichever ring its header names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyPoly {
    Z(MPoly<Integers>),
    Z4(MPoly<ZMod>),
    Z2(MPoly<ZMod>),
    Gf(MPoly<Gf>),
}

impl AnyPoly {
    pub fn to_text(&self) -> String {
        match self {
            AnyPoly::Z(p) => p.to_text(),
            AnyPoly::Z4(p) | AnyPoly::Z2(p) => p.to_text(),
            AnyPoly::Gf(p) => p.to_text(),
        }
    }
}

/// Parses the textual format without knowing the ring in advance.
pub fn parse_any(text: &str) -> Result<AnyPoly> {
    let (head, _) = split_text(text)?;
    let h = parse_header(head)?;
    Ok(match h.tag {
        RingTag::Z => AnyPoly::Z(MPoly::from_text(&Integers, text)?),
        RingTag::Z4 => AnyPoly::Z4(MPoly::from_text(&ZMod::Z4, text)?),
        RingTag::Z2 => AnyPoly::Z2(MPoly::from_text(&ZMod::Z2, text)?),
        RingTag::Gf { m, modulus } => AnyPoly::Gf(MPoly::from_text(&Gf::new(m, Some(modulus))?, text)?),
    })
}
