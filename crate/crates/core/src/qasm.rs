//! Minimal OpenQASM-2-style text format for circuit interchange.
//!
//! Supported surface: optional `OPENQASM 2.0;` header and `include`
//! statements, one `qreg` and one `creg`, the gate set of [`crate::circuit`],
//! `barrier`, `measure`, `reset`, and single-gate `if (c[k] == 1)`
//! conditions. Comments (`// ...`) and arbitrary whitespace are tolerated.
//! Gate parameters accept decimal literals and multiples of pi
//! (`pi`, `-pi/2`, `3*pi/4`, `0.5*pi`).
//!
//! Serialization is canonical: one instruction per line, parameters printed
//! to 12 significant digits. Non-Z measurement bases are lowered to their
//! basis-change gates followed by a computational-basis measurement, so
//! parse(serialize(c)) == c holds on circuits already in that lowered form.

use crate::circuit::{Circuit, Gate, Instruction, MeasureBasis};
use std::fmt::Write as _;
use thiserror::Error;

/// Position-tagged parse error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for SourceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum QasmError {
    #[error("parse error at {0}")]
    Parse(SourceError),
}

impl QasmError {
    pub fn source_error(&self) -> &SourceError {
        match self {
            QasmError::Parse(e) => e,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Int(usize),
    Sym(char),
    Arrow,
    Str(String),
    Eq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tl, tc) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if ch.is_whitespace() {
            chars.next();
            bump(ch, &mut line, &mut col);
            continue;
        }
        if ch == '/' {
            // comment or error
            chars.next();
            bump('/', &mut line, &mut col);
            if chars.peek() == Some(&'/') {
                for c in chars.by_ref() {
                    bump(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            out.push(Token {
                tok: Tok::Sym('/'),
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(c);
                    chars.next();
                    bump(c, &mut line, &mut col);
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(ident),
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let mut num = String::new();
            let mut is_float = false;
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    num.push(c);
                } else if c == '.' || c == 'e' || c == 'E' {
                    is_float = true;
                    num.push(c);
                } else if (c == '+' || c == '-')
                    && matches!(num.chars().last(), Some('e') | Some('E'))
                {
                    num.push(c);
                } else {
                    break;
                }
                chars.next();
                bump(c, &mut line, &mut col);
            }
            let tok = if is_float {
                Tok::Number(num.parse().map_err(|_| {
                    QasmError::Parse(SourceError {
                        line: tl,
                        column: tc,
                        message: format!("malformed number '{num}'"),
                    })
                })?)
            } else {
                Tok::Int(num.parse().map_err(|_| {
                    QasmError::Parse(SourceError {
                        line: tl,
                        column: tc,
                        message: format!("malformed integer '{num}'"),
                    })
                })?)
            };
            out.push(Token { tok, line: tl, col: tc });
            continue;
        }
        if ch == '"' {
            chars.next();
            bump('"', &mut line, &mut col);
            let mut s = String::new();
            let mut closed = false;
            while let Some(c) = chars.next() {
                bump(c, &mut line, &mut col);
                if c == '"' {
                    closed = true;
                    break;
                }
                s.push(c);
            }
            if !closed {
                return Err(QasmError::Parse(SourceError {
                    line: tl,
                    column: tc,
                    message: "unterminated string literal".into(),
                }));
            }
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch == '-' {
            chars.next();
            bump('-', &mut line, &mut col);
            if chars.peek() == Some(&'>') {
                chars.next();
                bump('>', &mut line, &mut col);
                out.push(Token {
                    tok: Tok::Arrow,
                    line: tl,
                    col: tc,
                });
            } else {
                out.push(Token {
                    tok: Tok::Sym('-'),
                    line: tl,
                    col: tc,
                });
            }
            continue;
        }
        if ch == '=' {
            chars.next();
            bump('=', &mut line, &mut col);
            if chars.peek() == Some(&'=') {
                chars.next();
                bump('=', &mut line, &mut col);
                out.push(Token {
                    tok: Tok::Eq,
                    line: tl,
                    col: tc,
                });
                continue;
            }
            return Err(QasmError::Parse(SourceError {
                line: tl,
                column: tc,
                message: "expected '=='".into(),
            }));
        }
        if "[](),;*+".contains(ch) {
            chars.next();
            bump(ch, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Sym(ch),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(QasmError::Parse(SourceError {
            line: tl,
            column: tc,
            message: format!("unexpected character '{ch}'"),
        }));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qreg: Option<(String, usize)>,
    creg: Option<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err_here(&self, message: impl Into<String>) -> QasmError {
        let (line, column) = self
            .peek()
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| {
                self.tokens
                    .last()
                    .map(|t| (t.line, t.col + 1))
                    .unwrap_or((1, 1))
            });
        QasmError::Parse(SourceError {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, sym: char) -> Result<(), QasmError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Sym(c)) if c == sym => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(format!("expected '{sym}'"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), QasmError> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.pos += 1;
                Ok((name, line, col))
            }
            _ => Err(self.err_here("expected identifier")),
        }
    }

    fn expect_int(&mut self) -> Result<usize, QasmError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err_here("expected integer")),
        }
    }

    /// `name[idx]` against the named register, returning the index.
    fn indexed_ref(&mut self, expect_quantum: bool) -> Result<usize, QasmError> {
        let (name, line, col) = self.expect_ident()?;
        let reg = if expect_quantum { &self.qreg } else { &self.creg };
        let (reg_name, width) = match reg {
            Some((n, w)) => (n.clone(), *w),
            None => {
                return Err(QasmError::Parse(SourceError {
                    line,
                    column: col,
                    message: format!(
                        "register '{name}' referenced before any {} declaration",
                        if expect_quantum { "qreg" } else { "creg" }
                    ),
                }))
            }
        };
        if name != reg_name {
            return Err(QasmError::Parse(SourceError {
                line,
                column: col,
                message: format!("undeclared register '{name}'"),
            }));
        }
        self.expect_sym('[')?;
        let idx = self.expect_int()?;
        self.expect_sym(']')?;
        if idx >= width {
            return Err(QasmError::Parse(SourceError {
                line,
                column: col,
                message: format!("index {idx} out of range for register '{name}[{width}]'"),
            }));
        }
        Ok(idx)
    }

    /// Parameter expression: [sign] (number | int | pi-term) [/ divisor].
    fn param(&mut self) -> Result<f64, QasmError> {
        let mut sign = 1.0;
        while let Some(Tok::Sym(c)) = self.peek().map(|t| t.tok.clone()) {
            match c {
                '-' => {
                    sign = -sign;
                    self.pos += 1;
                }
                '+' => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut value = match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Number(v)) => {
                self.pos += 1;
                v
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                v as f64
            }
            Some(Tok::Ident(id)) if id == "pi" => {
                self.pos += 1;
                std::f64::consts::PI
            }
            _ => return Err(self.err_here("expected parameter value")),
        };
        // optional '* pi' or '* number'
        if let Some(Tok::Sym('*')) = self.peek().map(|t| t.tok.clone()) {
            self.pos += 1;
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Ident(id)) if id == "pi" => {
                    self.pos += 1;
                    value *= std::f64::consts::PI;
                }
                Some(Tok::Number(v)) => {
                    self.pos += 1;
                    value *= v;
                }
                Some(Tok::Int(v)) => {
                    self.pos += 1;
                    value *= v as f64;
                }
                _ => return Err(self.err_here("expected factor after '*'")),
            }
        }
        if let Some(Tok::Sym('/')) = self.peek().map(|t| t.tok.clone()) {
            self.pos += 1;
            let div = match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Number(v)) => {
                    self.pos += 1;
                    v
                }
                Some(Tok::Int(v)) => {
                    self.pos += 1;
                    v as f64
                }
                _ => return Err(self.err_here("expected divisor after '/'")),
            };
            value /= div;
        }
        Ok(sign * value)
    }

    fn gate_call(&mut self, name: String, line: usize, col: usize) -> Result<(Gate, Vec<usize>), QasmError> {
        let mut params = Vec::new();
        if let Some(Tok::Sym('(')) = self.peek().map(|t| t.tok.clone()) {
            self.pos += 1;
            loop {
                params.push(self.param()?);
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Sym(',')) => {
                        self.pos += 1;
                    }
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err_here("malformed parameter list")),
                }
            }
        }
        let gate = Gate::from_name(&name, &params).map_err(|e| {
            QasmError::Parse(SourceError {
                line,
                column: col,
                message: e.to_string(),
            })
        })?;
        let mut qubits = Vec::new();
        loop {
            qubits.push(self.indexed_ref(true)?);
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Sym(',')) => {
                    self.pos += 1;
                }
                Some(Tok::Sym(';')) => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err_here("malformed argument list")),
            }
        }
        if qubits.len() != gate.arity() {
            return Err(QasmError::Parse(SourceError {
                line,
                column: col,
                message: format!(
                    "gate '{name}' expects {} qubit argument(s), got {}",
                    gate.arity(),
                    qubits.len()
                ),
            }));
        }
        Ok((gate, qubits))
    }
}

/// Parse the text format into a [`Circuit`].
pub fn parse(text: &str) -> Result<Circuit, QasmError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        qreg: None,
        creg: None,
    };
    let mut instructions: Vec<(Instruction, usize, usize)> = Vec::new();

    while let Some(tok) = p.peek().cloned() {
        match tok.tok {
            Tok::Ident(name) => match name.as_str() {
                "OPENQASM" => {
                    p.pos += 1;
                    // version number: float or int.int
                    match p.next().map(|t| t.tok) {
                        Some(Tok::Number(_)) | Some(Tok::Int(_)) => {}
                        _ => {
                            return Err(QasmError::Parse(SourceError {
                                line: tok.line,
                                column: tok.col,
                                message: "expected version after OPENQASM".into(),
                            }))
                        }
                    }
                    p.expect_sym(';')?;
                }
                "include" => {
                    p.pos += 1;
                    match p.next().map(|t| t.tok) {
                        Some(Tok::Str(_)) => {}
                        _ => {
                            return Err(QasmError::Parse(SourceError {
                                line: tok.line,
                                column: tok.col,
                                message: "expected filename string after include".into(),
                            }))
                        }
                    }
                    p.expect_sym(';')?;
                }
                "qreg" => {
                    p.pos += 1;
                    let (name, line, col) = p.expect_ident()?;
                    if p.qreg.is_some() {
                        return Err(QasmError::Parse(SourceError {
                            line,
                            column: col,
                            message: "only one qreg is supported".into(),
                        }));
                    }
                    p.expect_sym('[')?;
                    let width = p.expect_int()?;
                    p.expect_sym(']')?;
                    p.expect_sym(';')?;
                    p.qreg = Some((name, width));
                }
                "creg" => {
                    p.pos += 1;
                    let (name, line, col) = p.expect_ident()?;
                    if p.creg.is_some() {
                        return Err(QasmError::Parse(SourceError {
                            line,
                            column: col,
                            message: "only one creg is supported".into(),
                        }));
                    }
                    p.expect_sym('[')?;
                    let width = p.expect_int()?;
                    p.expect_sym(']')?;
                    p.expect_sym(';')?;
                    p.creg = Some((name, width));
                }
                "barrier" => {
                    p.pos += 1;
                    let mut qubits = Vec::new();
                    // bare register name fences every qubit
                    if let (Some(Token { tok: Tok::Ident(n), .. }), Some((qn, qw))) =
                        (p.peek().cloned(), p.qreg.clone())
                    {
                        let after = p.tokens.get(p.pos + 1).map(|t| t.tok.clone());
                        if n == qn && after == Some(Tok::Sym(';')) {
                            p.pos += 2;
                            instructions.push((
                                Instruction::Barrier {
                                    qubits: (0..qw).collect(),
                                },
                                tok.line,
                                tok.col,
                            ));
                            continue;
                        }
                    }
                    loop {
                        qubits.push(p.indexed_ref(true)?);
                        match p.peek().map(|t| t.tok.clone()) {
                            Some(Tok::Sym(',')) => {
                                p.pos += 1;
                            }
                            Some(Tok::Sym(';')) => {
                                p.pos += 1;
                                break;
                            }
                            _ => return Err(p.err_here("malformed barrier argument list")),
                        }
                    }
                    instructions.push((Instruction::Barrier { qubits }, tok.line, tok.col));
                }
                "measure" => {
                    p.pos += 1;
                    let qubit = p.indexed_ref(true)?;
                    match p.next().map(|t| t.tok) {
                        Some(Tok::Arrow) => {}
                        _ => {
                            return Err(QasmError::Parse(SourceError {
                                line: tok.line,
                                column: tok.col,
                                message: "expected '->' in measure".into(),
                            }))
                        }
                    }
                    let clbit = p.indexed_ref(false)?;
                    p.expect_sym(';')?;
                    instructions.push((
                        Instruction::Measure {
                            qubit,
                            clbit,
                            basis: MeasureBasis::Z,
                        },
                        tok.line,
                        tok.col,
                    ));
                }
                "reset" => {
                    p.pos += 1;
                    let qubit = p.indexed_ref(true)?;
                    p.expect_sym(';')?;
                    instructions.push((Instruction::Reset { qubit }, tok.line, tok.col));
                }
                "if" => {
                    p.pos += 1;
                    p.expect_sym('(')?;
                    let clbit = p.indexed_ref(false)?;
                    match p.next().map(|t| t.tok) {
                        Some(Tok::Eq) => {}
                        _ => {
                            return Err(QasmError::Parse(SourceError {
                                line: tok.line,
                                column: tok.col,
                                message: "expected '==' in if condition".into(),
                            }))
                        }
                    }
                    let value = p.expect_int()?;
                    if value != 1 {
                        return Err(QasmError::Parse(SourceError {
                            line: tok.line,
                            column: tok.col,
                            message: "only '== 1' conditions are supported".into(),
                        }));
                    }
                    p.expect_sym(')')?;
                    let (gname, gline, gcol) = p.expect_ident()?;
                    let (gate, qubits) = p.gate_call(gname, gline, gcol)?;
                    instructions.push((
                        Instruction::Conditional {
                            clbit,
                            gate,
                            qubits,
                        },
                        tok.line,
                        tok.col,
                    ));
                }
                _ => {
                    p.pos += 1;
                    let (gate, qubits) = p.gate_call(name.clone(), tok.line, tok.col)?;
                    instructions.push((Instruction::Gate { gate, qubits }, tok.line, tok.col));
                }
            },
            _ => return Err(p.err_here("expected statement")),
        }
    }

    let num_qubits = p.qreg.map(|(_, w)| w).unwrap_or(0);
    let num_clbits = p.creg.map(|(_, w)| w).unwrap_or(0);
    let mut circuit = Circuit::new(num_qubits, num_clbits);
    for (instr, line, col) in instructions {
        circuit.try_push(instr).map_err(|e| {
            QasmError::Parse(SourceError {
                line,
                column: col,
                message: e.to_string(),
            })
        })?;
    }
    Ok(circuit)
}

fn fmt_param(v: f64) -> String {
    // 12 significant digits
    let s = format!("{v:.11e}");
    s
}

/// Serialize a circuit to the canonical text form.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    let _ = writeln!(out, "creg c[{}];", c.num_clbits);
    for instr in &c.instructions {
        match instr {
            Instruction::Gate { gate, qubits } => {
                let _ = writeln!(out, "{};", gate_text(gate, qubits));
            }
            Instruction::Barrier { qubits } => {
                let args: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(out, "barrier {};", args.join(","));
            }
            Instruction::Reset { qubit } => {
                let _ = writeln!(out, "reset q[{qubit}];");
            }
            Instruction::Conditional {
                clbit,
                gate,
                qubits,
            } => {
                let _ = writeln!(out, "if(c[{clbit}]==1) {};", gate_text(gate, qubits));
            }
            Instruction::Measure {
                qubit,
                clbit,
                basis,
            } => {
                match basis {
                    MeasureBasis::Z => {}
                    MeasureBasis::X => {
                        let _ = writeln!(out, "h q[{qubit}];");
                    }
                    MeasureBasis::Y => {
                        let _ = writeln!(out, "sdg q[{qubit}];");
                        let _ = writeln!(out, "h q[{qubit}];");
                    }
                }
                let _ = writeln!(out, "measure q[{qubit}] -> c[{clbit}];");
            }
        }
    }
    out
}

fn gate_text(gate: &Gate, qubits: &[usize]) -> String {
    let params = gate.params();
    let args: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
    if params.is_empty() {
        format!("{} {}", gate.name(), args.join(","))
    } else {
        let ps: Vec<String> = params.iter().map(|p| fmt_param(*p)).collect();
        format!("{}({}) {}", gate.name(), ps.join(","), args.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_program() {
        let c = parse("qreg q[2]; creg c[2]; cx q[0],q[1];").unwrap();
        assert_eq!(c.num_qubits, 2);
        assert_eq!(c.num_clbits, 2);
        assert_eq!(c.instructions.len(), 1);
    }

    #[test]
    fn unknown_gate_reports_position() {
        let err = parse("qreg q[1];\nfoo q[0];").unwrap_err();
        let se = err.source_error();
        assert!(se.message.contains("foo"));
        assert_eq!(se.line, 2);
        assert_eq!(se.column, 1);
    }

    #[test]
    fn undeclared_register_reported() {
        let err = parse("qreg q[1]; h r[0];").unwrap_err();
        assert!(err.source_error().message.contains("undeclared register 'r'"));
    }

    #[test]
    fn malformed_argument_list_reported() {
        let err = parse("qreg q[2]; cx q[0] q[1];").unwrap_err();
        assert!(err.source_error().message.contains("malformed argument list"));
    }

    #[test]
    fn pi_expressions() {
        let c = parse("qreg q[1]; u2(0,pi) q[0]; u1(-pi/2) q[0]; u1(3*pi/4) q[0]; u1(0.5*pi) q[0];")
            .unwrap();
        let params: Vec<f64> = c
            .instructions
            .iter()
            .flat_map(|i| match i {
                Instruction::Gate { gate, .. } => gate.params(),
                _ => vec![],
            })
            .collect();
        use std::f64::consts::PI;
        let expect = [0.0, PI, -PI / 2.0, 3.0 * PI / 4.0, 0.5 * PI];
        for (a, b) in params.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn roundtrip_structural_identity() {
        let text = "OPENQASM 2.0;\nqreg q[3]; creg c[3];\nh q[0]; cx q[0],q[1]; barrier q[0],q[1];\nu3(1.25,-0.5,3.1) q[2]; measure q[2] -> c[0]; if(c[0]==1) x q[1]; reset q[0];";
        let c = parse(text).unwrap();
        let re = parse(&serialize(&c)).unwrap();
        assert!(c.approx_eq(&re, 1e-11));
    }

    #[test]
    fn serialize_is_deterministic() {
        let c = parse("qreg q[2]; creg c[1]; h q[0]; cx q[0],q[1]; measure q[1] -> c[0];").unwrap();
        assert_eq!(serialize(&c), serialize(&c));
    }

    #[test]
    fn x_basis_measure_lowers_to_h() {
        let mut c = Circuit::new(1, 1);
        c.measure_in(0, 0, MeasureBasis::X);
        let text = serialize(&c);
        assert!(text.contains("h q[0];\nmeasure q[0] -> c[0];"));
        let re = parse(&text).unwrap();
        assert_eq!(re.instructions.len(), 2);
    }

    #[test]
    fn comments_and_whitespace_tolerated() {
        let c = parse("// a prep\nqreg q[1];\n  h q[0]; // comment\n").unwrap();
        assert_eq!(c.instructions.len(), 1);
    }

    #[test]
    fn empty_circuit_serializes_header_only() {
        let c = Circuit::new(1, 0);
        let text = serialize(&c);
        assert_eq!(
            text,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[0];\n"
        );
    }

    #[test]
    fn param_precision_roundtrip() {
        let mut c = Circuit::new(1, 0);
        c.gate(Gate::U3(1.234567890123456, -0.000012345, 2.718281828459045), &[0]);
        let re = parse(&serialize(&c)).unwrap();
        match (&c.instructions[0], &re.instructions[0]) {
            (
                Instruction::Gate { gate: a, .. },
                Instruction::Gate { gate: b, .. },
            ) => {
                for (x, y) in a.params().iter().zip(b.params()) {
                    assert!((x - y).abs() < 1e-11 * x.abs().max(1.0));
                }
            }
            _ => panic!("expected gates"),
        }
    }
}
