//! Order-token grammar.
//!
//! ```text
//! occlusion := id "<" id                    first occludes second
//!            | id "<" id "&" id "<" id      bidirectional, ids mirrored
//!            | id "|" id                    no occlusion
//! depth     := id "<" id                    first is closer
//!            | id "=" id                    equal depth
//! id        := [0-9]+                       fits in u32
//! ```
//!
//! ASCII whitespace is allowed around every symbol. Errors carry the byte
//! offset into the token text.

use std::fmt;

use thiserror::Error;

use crate::model::{DepthOrder, InstanceId, OcclusionRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Occlusion,
    Depth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenErrorKind {
    ExpectedId,
    IdOverflow,
    ExpectedOperator(&'static str),
    TrailingInput,
    SelfPair(InstanceId),
    MismatchedBidirectional,
}

impl fmt::Display for TokenErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExpectedId => write!(f, "expected an instance id"),
            Self::IdOverflow => write!(f, "instance id does not fit in 32 bits"),
            Self::ExpectedOperator(ops) => write!(f, "expected one of {ops}"),
            Self::TrailingInput => write!(f, "unexpected trailing input"),
            Self::SelfPair(id) => write!(f, "instance {id} ordered against itself"),
            Self::MismatchedBidirectional => {
                write!(
                    f,
                    "bidirectional form must mirror the first clause (A<B & B<A)"
                )
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at byte {offset}")]
pub struct TokenError {
    pub offset: usize,
    pub kind: TokenErrorKind,
}

/// A parsed token, oriented as written: the relation reads "first relative
/// to second".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParsedOrder<R> {
    pub first: InstanceId,
    pub second: InstanceId,
    pub relation: R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderRelation {
    Occlusion(OcclusionRelation),
    Depth(DepthOrder),
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.text.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, kind: TokenErrorKind) -> Result<T, TokenError> {
        Err(TokenError {
            offset: self.pos,
            kind,
        })
    }

    fn id(&mut self) -> Result<(InstanceId, usize), TokenError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.text.get(self.pos).filter(|c| c.is_ascii_digit()) {
            value = value * 10 + u64::from(d - b'0');
            if value > u64::from(u32::MAX) {
                return Err(TokenError {
                    offset: start,
                    kind: TokenErrorKind::IdOverflow,
                });
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(TokenErrorKind::ExpectedId);
        }
        Ok((value as InstanceId, start))
    }

    fn operator(&mut self, allowed: &[u8], expected: &'static str) -> Result<u8, TokenError> {
        self.skip_ws();
        match self.text.get(self.pos) {
            Some(c) if allowed.contains(c) => {
                self.pos += 1;
                Ok(*c)
            }
            _ => self.err(TokenErrorKind::ExpectedOperator(expected)),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn distinct_pair(
        &mut self,
        ops: &[u8],
        expected: &'static str,
    ) -> Result<(InstanceId, InstanceId, u8), TokenError> {
        let (first, _) = self.id()?;
        let op = self.operator(ops, expected)?;
        let (second, at) = self.id()?;
        if first == second {
            return Err(TokenError {
                offset: at,
                kind: TokenErrorKind::SelfPair(first),
            });
        }
        Ok((first, second, op))
    }
}

pub fn parse_occlusion_token(text: &str) -> Result<ParsedOrder<OcclusionRelation>, TokenError> {
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let (first, second, op) = cur.distinct_pair(b"<|", "'<' or '|'")?;
    let relation = if op == b'|' {
        OcclusionRelation::None
    } else if cur.at_end() {
        OcclusionRelation::AoccludesB
    } else {
        cur.operator(b"&", "'&'")?;
        let clause_start = {
            cur.skip_ws();
            cur.pos
        };
        let (third, fourth, _) = cur.distinct_pair(b"<", "'<'")?;
        if (third, fourth) != (second, first) {
            return Err(TokenError {
                offset: clause_start,
                kind: TokenErrorKind::MismatchedBidirectional,
            });
        }
        OcclusionRelation::Bidirectional
    };
    if !cur.at_end() {
        return cur.err(TokenErrorKind::TrailingInput);
    }
    Ok(ParsedOrder {
        first,
        second,
        relation,
    })
}

pub fn parse_depth_token(text: &str) -> Result<ParsedOrder<DepthOrder>, TokenError> {
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let (first, second, op) = cur.distinct_pair(b"<=", "'<' or '='")?;
    if !cur.at_end() {
        return cur.err(TokenErrorKind::TrailingInput);
    }
    let relation = if op == b'<' {
        DepthOrder::Closer
    } else {
        DepthOrder::Equal
    };
    Ok(ParsedOrder {
        first,
        second,
        relation,
    })
}

pub fn parse_order_token(
    kind: OrderKind,
    text: &str,
) -> Result<ParsedOrder<OrderRelation>, TokenError> {
    Ok(match kind {
        OrderKind::Occlusion => {
            let p = parse_occlusion_token(text)?;
            ParsedOrder {
                first: p.first,
                second: p.second,
                relation: OrderRelation::Occlusion(p.relation),
            }
        }
        OrderKind::Depth => {
            let p = parse_depth_token(text)?;
            ParsedOrder {
                first: p.first,
                second: p.second,
                relation: OrderRelation::Depth(p.relation),
            }
        }
    })
}

/// Renders the occlusion relation of pair `(a, b)`.
pub fn format_occlusion(a: InstanceId, b: InstanceId, rel: OcclusionRelation) -> String {
    match rel {
        OcclusionRelation::None => format!("{a}|{b}"),
        OcclusionRelation::AoccludesB => format!("{a}<{b}"),
        OcclusionRelation::BoccludesA => format!("{b}<{a}"),
        OcclusionRelation::Bidirectional => format!("{a}<{b} & {b}<{a}"),
    }
}

/// Renders the depth relation of pair `(a, b)`; the closer id comes first.
pub fn format_depth(a: InstanceId, b: InstanceId, order: DepthOrder) -> String {
    match order {
        DepthOrder::Closer => format!("{a}<{b}"),
        DepthOrder::Farther => format!("{b}<{a}"),
        DepthOrder::Equal => format!("{a}={b}"),
    }
}
