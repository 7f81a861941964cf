//! Parser for an OpenQASM-2.0-style subset.
//!
//! Supported statements: `OPENQASM`, `include` (ignored), `qreg`, `creg`,
//! gate applications with optional real parameters, `measure`, `barrier`,
//! `reset` and `gate` definitions. Measurements, barriers and resets are
//! dropped from the gate list and counted in [`ParseMetadata`]. Gates acting
//! on three or more qubits are expanded through a fixed rule table (or through
//! their in-file definition) when decomposition is enabled.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Expand 3+-qubit gates; when false they are rejected.
    pub decompose: bool,
    pub name: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            decompose: true,
            name: "circuit".to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParseMetadata {
    pub quantum_registers: Vec<(String, usize)>,
    pub classical_bits: usize,
    pub measurements: usize,
    pub barriers: usize,
    pub resets: usize,
    /// Number of expansions applied per multi-qubit gate name.
    pub decompositions: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub circuit: Circuit,
    pub metadata: ParseMetadata,
}

pub fn parse_qasm(text: &str) -> Result<Circuit> {
    parse_qasm_with(text, &ParseOptions::default()).map(|p| p.circuit)
}

pub fn parse_qasm_with(text: &str, options: &ParseOptions) -> Result<Parsed> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        options,
        qregs: Vec::new(),
        qreg_index: HashMap::new(),
        cregs: HashMap::new(),
        definitions: HashMap::new(),
        gates: Vec::new(),
        metadata: ParseMetadata::default(),
    };
    parser.program()?;
    let n_qubits = parser.qregs.iter().map(|r| r.size).sum();
    let circuit = Circuit::from_gates(options.name.clone(), n_qubits, parser.gates)?;
    Ok(Parsed {
        circuit,
        metadata: parser.metadata,
    })
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: &[&str] = &[
    "->", "==", ";", ",", "[", "]", "(", ")", "{", "}", "+", "-", "*", "/", "^",
];

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    macro_rules! advance {
        ($c:expr) => {{
            let ch: char = $c;
            i += 1;
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(c);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(chars[i]);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            advance!('/');
            advance!('*');
            loop {
                if i + 1 >= chars.len() {
                    return Err(Error::Syntax {
                        line: l0,
                        column: c0,
                        message: "unterminated block comment".into(),
                    });
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance!('*');
                    advance!('/');
                    break;
                }
                advance!(chars[i]);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance!(chars[i]);
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                advance!(chars[i]);
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = (i, line, col);
                advance!(chars[i]);
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    advance!(chars[i]);
                }
                if i < chars.len() && chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        advance!(chars[i]);
                    }
                } else {
                    (i, line, col) = save;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let value = s.parse::<f64>().map_err(|_| Error::Syntax {
                line: tl,
                column: tc,
                message: format!("invalid number `{s}`"),
            })?;
            out.push(Token {
                tok: Tok::Number(value),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '"' {
            advance!(c);
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                advance!(chars[i]);
            }
            if i >= chars.len() {
                return Err(Error::Syntax {
                    line: tl,
                    column: tc,
                    message: "unterminated string".into(),
                });
            }
            let s = chars[start..i].iter().collect();
            advance!('"');
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                column: tc,
            });
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(Error::Syntax {
                line: tl,
                column: tc,
                message: format!("unexpected character `{c}`"),
            });
        };
        for ch in sym.chars() {
            advance!(ch);
        }
        out.push(Token {
            tok: Tok::Sym(sym),
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expressions

#[derive(Debug, Clone)]
enum Expr {
    Num(f64),
    Param(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

impl Expr {
    fn eval(&self, env: &HashMap<String, f64>) -> std::result::Result<f64, String> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Param(name) => *env
                .get(name)
                .ok_or_else(|| format!("unknown parameter `{name}`"))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    _ => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(env)?;
                match f.as_str() {
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    "tan" => x.tan(),
                    "exp" => x.exp(),
                    "ln" => x.ln(),
                    "sqrt" => x.sqrt(),
                    _ => return Err(format!("unknown function `{f}`")),
                }
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Decomposition rules for 3-qubit gates

/// Operand slots in rule bodies index the expanded gate's operand list.
const CCX_RULE: &[(&str, &[usize])] = &[
    ("h", &[2]),
    ("cx", &[1, 2]),
    ("tdg", &[2]),
    ("cx", &[0, 2]),
    ("t", &[2]),
    ("cx", &[1, 2]),
    ("tdg", &[2]),
    ("cx", &[0, 2]),
    ("t", &[1]),
    ("t", &[2]),
    ("h", &[2]),
    ("cx", &[0, 1]),
    ("t", &[0]),
    ("tdg", &[1]),
    ("cx", &[0, 1]),
];

/// Standard Toffoli expansion (15 gates) on `(c0, c1, target)`.
pub fn toffoli_decomposition(c0: usize, c1: usize, target: usize) -> Vec<Gate> {
    let ops = [c0, c1, target];
    CCX_RULE
        .iter()
        .map(|(name, slots)| {
            let qs: Vec<usize> = slots.iter().map(|&s| ops[s]).collect();
            Gate::new(*name, &qs)
        })
        .collect()
}

fn builtin_decomposition(name: &str, qubits: &[usize]) -> Option<Vec<Gate>> {
    match (name, qubits) {
        ("ccx" | "toffoli", &[a, b, c]) => Some(toffoli_decomposition(a, b, c)),
        ("cswap" | "fredkin", &[a, b, c]) => {
            let mut gates = vec![Gate::new("cx", &[c, b])];
            gates.extend(toffoli_decomposition(a, b, c));
            gates.push(Gate::new("cx", &[c, b]));
            Some(gates)
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug)]
struct Register {
    name: String,
    offset: usize,
    size: usize,
}

#[derive(Debug, Clone)]
struct Definition {
    params: Vec<String>,
    args: Vec<String>,
    body: Vec<BodyOp>,
}

#[derive(Debug, Clone)]
struct BodyOp {
    name: String,
    params: Vec<Expr>,
    args: Vec<String>,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
enum Operand {
    Whole(usize),
    Single(usize),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    options: &'a ParseOptions,
    qregs: Vec<Register>,
    qreg_index: HashMap<String, usize>,
    cregs: HashMap<String, usize>,
    definitions: HashMap<String, Definition>,
    gates: Vec<Gate>,
    metadata: ParseMetadata,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, t: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<Token> {
        let t = self.next();
        if t.tok == Tok::Sym(sym) {
            Ok(t)
        } else {
            self.syntax(&t, format!("expected `{sym}`, found {}", describe(&t.tok)))
        }
    }

    fn eat_sym(&mut self, sym: &'static str) -> bool {
        if self.peek().tok == Tok::Sym(sym) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            other => self.syntax(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn integer(&mut self) -> Result<usize> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            ref other => self.syntax(&t, format!("expected integer, found {}", describe(other))),
        }
    }

    fn program(&mut self) -> Result<()> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) => match kw.as_str() {
                    "OPENQASM" => {
                        self.next();
                        match self.next().tok {
                            Tok::Number(_) => {}
                            _ => return self.syntax(&t, "expected version after OPENQASM"),
                        }
                        self.expect_sym(";")?;
                    }
                    "include" => {
                        self.next();
                        let s = self.next();
                        if !matches!(s.tok, Tok::Str(_)) {
                            return self.syntax(&s, "expected file name after include");
                        }
                        self.expect_sym(";")?;
                    }
                    "qreg" | "creg" => self.register_decl()?,
                    "gate" => self.gate_definition()?,
                    "measure" => {
                        self.next();
                        self.skip_statement()?;
                        self.metadata.measurements += 1;
                    }
                    "barrier" => {
                        self.next();
                        self.skip_statement()?;
                        self.metadata.barriers += 1;
                    }
                    "reset" => {
                        self.next();
                        self.skip_statement()?;
                        self.metadata.resets += 1;
                    }
                    "opaque" | "if" => {
                        return Err(Error::Unsupported {
                            line: t.line,
                            column: t.column,
                            message: format!("`{kw}` statements are not supported"),
                        })
                    }
                    _ => self.application()?,
                },
                other => return self.syntax(&t, format!("unexpected {}", describe(other))),
            }
        }
    }

    fn skip_statement(&mut self) -> Result<()> {
        loop {
            let t = self.next();
            match t.tok {
                Tok::Sym(";") => return Ok(()),
                Tok::Eof => return self.syntax(&t, "unexpected end of input, expected `;`"),
                _ => {}
            }
        }
    }

    fn register_decl(&mut self) -> Result<()> {
        let (kind, _) = self.ident()?;
        let (name, t) = self.ident()?;
        self.expect_sym("[")?;
        let size = self.integer()?;
        self.expect_sym("]")?;
        self.expect_sym(";")?;
        if self.qreg_index.contains_key(&name) || self.cregs.contains_key(&name) {
            return self.syntax(&t, format!("register `{name}` declared twice"));
        }
        if kind == "qreg" {
            let offset = self.qregs.iter().map(|r| r.size).sum();
            self.qreg_index.insert(name.clone(), self.qregs.len());
            self.metadata.quantum_registers.push((name.clone(), size));
            self.qregs.push(Register { name, offset, size });
        } else {
            self.metadata.classical_bits += size;
            self.cregs.insert(name, size);
        }
        Ok(())
    }

    fn gate_definition(&mut self) -> Result<()> {
        self.next();
        let (name, _) = self.ident()?;
        let mut params = Vec::new();
        if self.eat_sym("(")
            && !self.eat_sym(")") {
                loop {
                    params.push(self.ident()?.0);
                    if self.eat_sym(")") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
        let mut args = vec![self.ident()?.0];
        while self.eat_sym(",") {
            args.push(self.ident()?.0);
        }
        self.expect_sym("{")?;
        let mut body = Vec::new();
        while !self.eat_sym("}") {
            let (op, t) = self.ident()?;
            if op == "barrier" {
                self.skip_statement()?;
                continue;
            }
            let p = self.param_list()?;
            let mut op_args = vec![self.ident()?.0];
            while self.eat_sym(",") {
                op_args.push(self.ident()?.0);
            }
            self.expect_sym(";")?;
            for a in &op_args {
                if !args.contains(a) {
                    return self.syntax(&t, format!("unknown gate argument `{a}` in `{name}`"));
                }
            }
            body.push(BodyOp {
                name: op,
                params: p,
                args: op_args,
                line: t.line,
                column: t.column,
            });
        }
        self.definitions.insert(name, Definition { params, args, body });
        Ok(())
    }

    fn param_list(&mut self) -> Result<Vec<Expr>> {
        let mut params = Vec::new();
        if self.eat_sym("(") {
            if self.eat_sym(")") {
                return Ok(params);
            }
            loop {
                params.push(self.expr()?);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(params)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym("+") => '+',
                Tok::Sym("-") => '-',
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym("*") => '*',
                Tok::Sym("/") => '/',
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        let base = self.primary()?;
        if self.eat_sym("^") {
            let exp = self.unary()?;
            return Ok(Expr::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Number(v) => Ok(Expr::Num(*v)),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(id) if id == "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            Tok::Ident(id) => {
                if self.eat_sym("(") {
                    let arg = self.expr()?;
                    self.expect_sym(")")?;
                    Ok(Expr::Call(id.clone(), Box::new(arg)))
                } else {
                    Ok(Expr::Param(id.clone()))
                }
            }
            other => self.syntax(&t, format!("expected expression, found {}", describe(other))),
        }
    }

    fn operand(&mut self) -> Result<Operand> {
        let (name, t) = self.ident()?;
        let Some(&reg) = self.qreg_index.get(&name) else {
            return self.syntax(&t, format!("unknown quantum register `{name}`"));
        };
        if self.eat_sym("[") {
            let index = self.integer()?;
            self.expect_sym("]")?;
            let r = &self.qregs[reg];
            if index >= r.size {
                return Err(Error::QubitOutOfRange {
                    register: r.name.clone(),
                    index,
                    size: r.size,
                    line: t.line,
                });
            }
            Ok(Operand::Single(r.offset + index))
        } else {
            Ok(Operand::Whole(reg))
        }
    }

    fn application(&mut self) -> Result<()> {
        let (name, t) = self.ident()?;
        let params = self.param_list()?;
        let mut operands = vec![self.operand()?];
        while self.eat_sym(",") {
            operands.push(self.operand()?);
        }
        self.expect_sym(";")?;

        let empty = HashMap::new();
        let values = params
            .iter()
            .map(|e| e.eval(&empty))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|m| Error::Syntax {
                line: t.line,
                column: t.column,
                message: m,
            })?;

        // register broadcasting
        let width = operands
            .iter()
            .filter_map(|o| match o {
                Operand::Whole(r) => Some(self.qregs[*r].size),
                Operand::Single(_) => None,
            })
            .try_fold(None, |acc: Option<usize>, w| match acc {
                Some(a) if a != w => Err(()),
                _ => Ok(Some(w)),
            });
        let width = match width {
            Ok(w) => w,
            Err(()) => return self.syntax(&t, "register operands have different sizes"),
        };
        let repeat = width.unwrap_or(1);
        for i in 0..repeat {
            let qubits: Vec<usize> = operands
                .iter()
                .map(|o| match o {
                    Operand::Whole(r) => self.qregs[*r].offset + i,
                    Operand::Single(q) => *q,
                })
                .collect();
            self.emit(&name, &values, &qubits, t.line, t.column, 0)?;
        }
        Ok(())
    }

    fn emit(
        &mut self,
        name: &str,
        params: &[f64],
        qubits: &[usize],
        line: usize,
        column: usize,
        nesting: usize,
    ) -> Result<()> {
        for (i, a) in qubits.iter().enumerate() {
            if qubits[..i].contains(a) {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("gate `{name}` repeats qubit {a}"),
                });
            }
        }
        if nesting > 64 {
            return Err(Error::Unsupported {
                line,
                column,
                message: format!("gate definition `{name}` nests too deeply"),
            });
        }
        if qubits.len() <= 2 {
            self.gates.push(Gate::with_params(name, qubits, params));
            return Ok(());
        }
        if !self.options.decompose {
            return Err(Error::Unsupported {
                line,
                column,
                message: format!(
                    "`{name}` acts on {} qubits and decomposition is disabled",
                    qubits.len()
                ),
            });
        }
        if let Some(gates) = builtin_decomposition(name, qubits) {
            *self.metadata.decompositions.entry(name.to_string()).or_default() += 1;
            self.gates.extend(gates);
            return Ok(());
        }
        let Some(def) = self.definitions.get(name).cloned() else {
            return Err(Error::Unsupported {
                line,
                column,
                message: format!(
                    "no decomposition rule for {}-qubit gate `{name}`",
                    qubits.len()
                ),
            });
        };
        if def.args.len() != qubits.len() || def.params.len() != params.len() {
            return Err(Error::Syntax {
                line,
                column,
                message: format!("gate `{name}` applied with wrong number of arguments"),
            });
        }
        *self.metadata.decompositions.entry(name.to_string()).or_default() += 1;
        let env: HashMap<String, f64> = def.params.iter().cloned().zip(params.iter().copied()).collect();
        for op in &def.body {
            let vals = op
                .params
                .iter()
                .map(|e| e.eval(&env))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|m| Error::Syntax {
                    line: op.line,
                    column: op.column,
                    message: m,
                })?;
            let qs: Vec<usize> = op
                .args
                .iter()
                .map(|a| qubits[def.args.iter().position(|d| d == a).unwrap_or(0)])
                .collect();
            self.emit(&op.name, &vals, &qs, op.line, op.column, nesting + 1)?;
        }
        Ok(())
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(v) => format!("number {v}"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_program() {
        let c = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        assert_eq!(c.n_qubits(), 2);
        assert_eq!(c.gates(), &[Gate::new("h", &[0]), Gate::new("cx", &[0, 1])]);
    }

    #[test]
    fn empty_program() {
        let c = parse_qasm("qreg q[1];").unwrap();
        assert_eq!(c.n_qubits(), 1);
        assert!(c.gates().is_empty());
    }

    #[test]
    fn strips_measure_and_barrier() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n\
                   h q[0];\nbarrier q;\ncx q[0],q[1];\nmeasure q -> c;\nmeasure q[0] -> c[0];\n";
        let p = parse_qasm_with(src, &ParseOptions::default()).unwrap();
        assert_eq!(p.circuit.n_gates(), 2);
        assert_eq!(p.metadata.measurements, 2);
        assert_eq!(p.metadata.barriers, 1);
        assert_eq!(p.metadata.classical_bits, 2);
    }

    #[test]
    fn toffoli_expands_to_fifteen_gates() {
        let p = parse_qasm_with("qreg q[3]; ccx q[0],q[1],q[2];", &ParseOptions::default()).unwrap();
        assert_eq!(p.circuit.n_gates(), 15);
        assert_eq!(p.metadata.decompositions.get("ccx"), Some(&1));
        assert!(p.circuit.gates().iter().all(|g| g.qubits.len() <= 2));
    }

    #[test]
    fn toffoli_rejected_without_decomposition() {
        let opts = ParseOptions {
            decompose: false,
            ..ParseOptions::default()
        };
        let err = parse_qasm_with("qreg q[3];\nccx q[0],q[1],q[2];", &opts).unwrap_err();
        assert!(matches!(err, Error::Unsupported { line: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_three_qubit_gate_is_unsupported() {
        let err = parse_qasm("qreg q[3]; foo q[0],q[1],q[2];").unwrap_err();
        assert!(matches!(err, Error::Unsupported { .. }));
    }

    #[test]
    fn out_of_range_index() {
        let err = parse_qasm("qreg q[2];\nx q[2];").unwrap_err();
        assert!(matches!(err, Error::QubitOutOfRange { index: 2, size: 2, line: 2, .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_qasm("qreg q[2];\nh q[0]\ncx q[0],q[1];").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (3, 1)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn parameter_expressions() {
        let c = parse_qasm("qreg q[1]; rz(-pi/2) q[0]; u3(2*pi, 0.5e1, -(1+1)^2) q[0];").unwrap();
        assert!((c.gates()[0].params[0] + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let p = &c.gates()[1].params;
        assert!((p[0] - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(p[1], 5.0);
        assert_eq!(p[2], -4.0);
    }

    #[test]
    fn register_broadcast_and_offsets() {
        let c = parse_qasm("qreg a[2]; qreg b[2]; h a; cx a, b; x b[1];").unwrap();
        assert_eq!(c.n_qubits(), 4);
        let got: Vec<_> = c.gates().iter().map(|g| g.token()).collect();
        assert_eq!(got, ["h:0", "h:1", "cx:0,2", "cx:1,3", "x:3"]);
    }

    #[test]
    fn custom_three_qubit_definition_is_inlined() {
        let src = "qreg q[3];\ngate maj a,b,c { cx c,b; cx c,a; ccx a,b,c; }\nmaj q[0],q[1],q[2];";
        let p = parse_qasm_with(src, &ParseOptions::default()).unwrap();
        assert_eq!(p.circuit.n_gates(), 17);
        assert_eq!(p.metadata.decompositions.get("maj"), Some(&1));
        assert_eq!(p.metadata.decompositions.get("ccx"), Some(&1));
    }

    #[test]
    fn custom_two_qubit_gate_is_kept_opaque() {
        let src = "qreg q[2]; gate mygate(theta) a,b { cx a,b; rz(theta) b; cx a,b; } mygate(0.5) q[0],q[1];";
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.gates(), &[Gate::with_params("mygate", &[0, 1], &[0.5])]);
    }

    #[test]
    fn classical_control_is_unsupported() {
        let err = parse_qasm("qreg q[1]; creg c[1]; if (c==1) x q[0];").unwrap_err();
        assert!(matches!(err, Error::Unsupported { .. }));
    }

    #[test]
    fn round_trip_is_identical() {
        let src = "qreg q[3]; h q[0]; rz(0.1) q[1]; cx q[0],q[2]; ccx q[0],q[1],q[2]; u3(1,2,3) q[2];";
        let c1 = parse_qasm(src).unwrap();
        let c2 = parse_qasm(&c1.to_qasm()).unwrap();
        assert_eq!(c1.gates(), c2.gates());
        assert_eq!(c1.n_qubits(), c2.n_qubits());
    }
}
