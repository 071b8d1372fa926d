//! Recursive-descent parser for the series expression language.
//!
//! The grammar, whitespace-insensitive throughout:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' sint)?
//! atom    := 'P' '(' uint ',' uint ',' sint ')'
//!          | 'Pneg' '(' uint ',' uint ',' sint ')'
//!          | 'phi' '(' uint ')'
//!          | 'psi' '(' uint ')'
//!          | 'dsum' '(' uint ',' uint ')'
//!          | 'inv' '(' expr ')'
//!          | 'sub' '(' expr ',' uint ')'
//!          | 'dissect' '(' expr ',' uint ',' uint ')'
//!          | 'mod' '(' expr ',' uint ')'
//!          | '@' name
//!          | 'q'
//!          | uint
//!          | '(' expr ')'
//! ```
//!
//! Semantic constraints are enforced while parsing so a bad expression is
//! rejected with a position: Pochhammer offsets and steps are at least 1 and
//! exponents nonzero, theta and substitution arguments are at least 1,
//! dissection residues are smaller than their steps, and moduli are at
//! least 2. Error offsets are 1-based byte positions; an error at
//! end-of-input points one past the last byte, so `P(1,1,4` reports its
//! missing parenthesis at offset 8.
//!
//! A second entry point, [`parse_completed_square`], reads sums of two
//! completed squares such as `3*(2k+1)^2+(6m-1)^2`, with the first square
//! in the variable k and the second in m.

use crate::error::ParseError;
use crate::expr::{CompletedSquareForm, SeriesExpr};
use crate::products::{DoubleSumForm, PochhammerFactor};

/// Parses a series expression. See the module documentation for the
/// grammar.
pub fn parse_expr(input: &str) -> Result<SeriesExpr, ParseError> {
    let mut parser = Parser::new(input);
    let expr = parser.expr()?;
    parser.finish()?;
    Ok(expr)
}

/// Parses a sum of two completed squares: an optional positive multiplier,
/// then a squared linear form in k, a plus sign, and the same in m, as in
/// `3*(2k+1)^2+(6m-1)^2` or `(2k+1)^2+8*(m-1)^2`.
pub fn parse_completed_square(input: &str) -> Result<CompletedSquareForm, ParseError> {
    let mut parser = Parser::new(input);
    let (k_mult, k_scale, k_shift) = parser.square_term(b'k')?;
    parser.expect(b'+')?;
    let (m_mult, m_scale, m_shift) = parser.square_term(b'm')?;
    parser.finish()?;
    Ok(CompletedSquareForm {
        k_mult,
        k_scale,
        k_shift,
        m_mult,
        m_scale,
        m_shift,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Parser<'a> {
        Parser {
            src: input.as_bytes(),
            pos: 0,
        }
    }

    /// 1-based offset of the next byte to be read.
    fn offset(&self) -> usize {
        self.pos + 1
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(format!("expected '{}'", c as char)))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            Err(self.error_here("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    // ------------------------------------------------------------------
    // expression grammar
    // ------------------------------------------------------------------

    fn expr(&mut self) -> Result<SeriesExpr, ParseError> {
        let mut node = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    node = node.add(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    node = node.sub(self.term()?);
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<SeriesExpr, ParseError> {
        let mut node = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                node = node.mul(self.factor()?);
            } else {
                return Ok(node);
            }
        }
    }

    fn factor(&mut self) -> Result<SeriesExpr, ParseError> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (exponent, _) = self.i32_arg()?;
            Ok(atom.pow(exponent))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<SeriesExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'@') => {
                self.pos += 1;
                Ok(SeriesExpr::Named(self.name()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let (value, offset) = self.unsigned_int()?;
                let value = i64::try_from(value)
                    .map_err(|_| self.error_at(offset, "integer literal out of range"))?;
                Ok(SeriesExpr::Integer(value))
            }
            Some(c) if c.is_ascii_alphabetic() => self.keyword_atom(),
            _ => Err(self.error_here("expected an expression")),
        }
    }

    fn keyword_atom(&mut self) -> Result<SeriesExpr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii letters");
        match word {
            "P" => self.pochhammer(false),
            "Pneg" => self.pochhammer(true),
            "phi" => {
                let t = self.theta_argument()?;
                Ok(SeriesExpr::ThetaPhi(t))
            }
            "psi" => {
                let t = self.theta_argument()?;
                Ok(SeriesExpr::ThetaPsi(t))
            }
            "dsum" => self.double_sum(),
            "inv" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(SeriesExpr::Invert(Box::new(inner)))
            }
            "sub" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let (t, offset) = self.u32_arg()?;
                if t == 0 {
                    return Err(self.error_at(offset, "substitution power must be at least 1"));
                }
                self.expect(b')')?;
                Ok(SeriesExpr::Substitute(Box::new(inner), t))
            }
            "dissect" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let (t, t_offset) = self.u32_arg()?;
                if t == 0 {
                    return Err(self.error_at(t_offset, "step must be at least 1"));
                }
                self.expect(b',')?;
                let (r, r_offset) = self.u32_arg()?;
                if r >= t {
                    return Err(self.error_at(r_offset, "residue must be less than the step"));
                }
                self.expect(b')')?;
                Ok(SeriesExpr::Dissect(Box::new(inner), t, r))
            }
            "mod" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let (m, offset) = self.unsigned_int()?;
                if m < 2 {
                    return Err(self.error_at(offset, "modulus must be at least 2"));
                }
                self.expect(b')')?;
                Ok(SeriesExpr::ReduceMod(Box::new(inner), m))
            }
            "q" => Ok(SeriesExpr::Q),
            "" => Err(self.error_here("expected an expression")),
            _ => Err(self.error_at(start + 1, format!("unknown name '{word}'"))),
        }
    }

    fn pochhammer(&mut self, negated: bool) -> Result<SeriesExpr, ParseError> {
        self.expect(b'(')?;
        let (offset_arg, a_pos) = self.u32_arg()?;
        if offset_arg == 0 {
            return Err(self.error_at(a_pos, "offset must be at least 1"));
        }
        self.expect(b',')?;
        let (step, b_pos) = self.u32_arg()?;
        if step == 0 {
            return Err(self.error_at(b_pos, "step must be at least 1"));
        }
        self.expect(b',')?;
        let (exponent, e_pos) = self.i32_arg()?;
        if exponent == 0 {
            return Err(self.error_at(e_pos, "exponent must be nonzero"));
        }
        self.expect(b')')?;
        let factor = PochhammerFactor::new(negated, offset_arg, step, exponent)
            .expect("arguments were validated");
        Ok(SeriesExpr::Pochhammer(factor))
    }

    fn theta_argument(&mut self) -> Result<u32, ParseError> {
        self.expect(b'(')?;
        let (t, offset) = self.u32_arg()?;
        if t == 0 {
            return Err(self.error_at(offset, "theta argument must be at least 1"));
        }
        self.expect(b')')?;
        Ok(t)
    }

    fn double_sum(&mut self) -> Result<SeriesExpr, ParseError> {
        self.expect(b'(')?;
        let (tri, tri_pos) = self.u32_arg()?;
        if tri == 0 {
            return Err(self.error_at(tri_pos, "double sum multiplier must be at least 1"));
        }
        self.expect(b',')?;
        let (pent, pent_pos) = self.u32_arg()?;
        if pent == 0 {
            return Err(self.error_at(pent_pos, "double sum multiplier must be at least 1"));
        }
        self.expect(b')')?;
        let form = DoubleSumForm::new(tri, pent).expect("arguments were validated");
        Ok(SeriesExpr::DoubleSum(form))
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
            self.pos += 1;
        } else {
            return Err(self.error_here("expected a name after '@'"));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii name")
            .to_string())
    }

    // ------------------------------------------------------------------
    // numeric literals
    // ------------------------------------------------------------------

    /// Unsigned integer; returns the value and its 1-based offset.
    fn unsigned_int(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let offset = self.offset();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error_at(offset, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<u64>()
            .map(|value| (value, offset))
            .map_err(|_| self.error_at(offset, "integer literal out of range"))
    }

    /// Optionally negated integer; returns the value and the offset of its
    /// first byte (the sign, if present).
    fn signed_int(&mut self) -> Result<(i64, usize), ParseError> {
        self.skip_ws();
        let offset = self.offset();
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let (magnitude, _) = self.unsigned_int()?;
        if magnitude > i64::MAX as u64 {
            return Err(self.error_at(offset, "integer literal out of range"));
        }
        let value = if negative {
            -(magnitude as i64)
        } else {
            magnitude as i64
        };
        Ok((value, offset))
    }

    fn u32_arg(&mut self) -> Result<(u32, usize), ParseError> {
        let (value, offset) = self.unsigned_int()?;
        u32::try_from(value)
            .map(|value| (value, offset))
            .map_err(|_| self.error_at(offset, "argument out of range"))
    }

    fn i32_arg(&mut self) -> Result<(i32, usize), ParseError> {
        let (value, offset) = self.signed_int()?;
        i32::try_from(value)
            .map(|value| (value, offset))
            .map_err(|_| self.error_at(offset, "exponent out of range"))
    }

    // ------------------------------------------------------------------
    // completed squares
    // ------------------------------------------------------------------

    /// One squared linear form: `[uint '*'] '(' [uint ['*']] var [sign
    /// uint] ')' '^' '2'`, returning (multiplier, scale, shift).
    fn square_term(&mut self, var: u8) -> Result<(i64, i64, i64), ParseError> {
        self.skip_ws();
        let mut mult = 1i64;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let (value, offset) = self.unsigned_int()?;
            mult = i64::try_from(value)
                .map_err(|_| self.error_at(offset, "integer literal out of range"))?;
            self.expect(b'*')?;
        }
        self.expect(b'(')?;
        self.skip_ws();
        let mut scale = 1i64;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let (value, offset) = self.unsigned_int()?;
            scale = i64::try_from(value)
                .map_err(|_| self.error_at(offset, "integer literal out of range"))?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        self.skip_ws();
        if self.peek() == Some(var) {
            self.pos += 1;
        } else {
            return Err(self.error_here(format!("expected the variable '{}'", var as char)));
        }
        self.skip_ws();
        let mut shift = 0i64;
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                let (value, offset) = self.unsigned_int()?;
                shift = i64::try_from(value)
                    .map_err(|_| self.error_at(offset, "integer literal out of range"))?;
            }
            Some(b'-') => {
                self.pos += 1;
                let (value, offset) = self.unsigned_int()?;
                shift = -i64::try_from(value)
                    .map_err(|_| self.error_at(offset, "integer literal out of range"))?;
            }
            _ => {}
        }
        self.expect(b')')?;
        self.expect(b'^')?;
        let (exponent, offset) = self.unsigned_int()?;
        if exponent != 2 {
            return Err(self.error_at(offset, "the exponent must be 2"));
        }
        Ok((mult, scale, shift))
    }
}
