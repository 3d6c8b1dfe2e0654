//! Line-oriented machine file format.
//!
//! ```text
//! vpt                                   # header: vpa | vpt | fst
//! alphabet calls c1 c2                  # call symbols (fst: `alphabet inputs`)
//! alphabet returns r1 r2
//! alphabet internals a                  # sugar, see below
//! alphabet outputs a b c                # single-character output letters
//! stack g1 g2
//! states q0 q1
//! initial q0
//! final q1
//! call q0 c1 / ab push g1 -> q1         # vpa: `call q0 c1 push g1 -> q1`
//! return q1 r1 / eps pop g1 -> q0       # `eps` is the empty output
//! internal q0 a / x -> q1
//! trans q0 a / x -> q1                  # fst only
//! ```
//!
//! Everything after `#` is a comment. Names must be declared before use.
//! An internal symbol `a` declares the call `<a` and the return `a>`; an
//! `internal` transition becomes a call pushing `[a]` into a fresh state
//! `q0.a.k` followed by the return popping `[a]` into the target, with the
//! output on the call half.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::{OutWord, StructuredAlphabet, Sym};
use crate::error::{AlphabetError, ParseError, ParseErrorKind};
use crate::machine::{
    CallTransition, Fst, FstParts, FstTransition, Label, Machine, Pushdown, PushdownParts,
    ReturnTransition, StackSym, StateId, Vpa, Vpt,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Vpa,
    Vpt,
    Fst,
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                let column = line[..s].chars().count() + 1;
                tokens.push(Token { column, text: &line[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    tokens
}

struct Names {
    what: &'static str,
    list: Vec<String>,
    index: HashMap<String, u32>,
}

impl Names {
    fn new(what: &'static str) -> Self {
        Names { what, list: Vec::new(), index: HashMap::new() }
    }

    fn declare(&mut self, name: &str) -> Result<u32, ParseErrorKind> {
        if self.index.contains_key(name) {
            return Err(ParseErrorKind::Duplicate { what: self.what, name: name.to_string() });
        }
        let id = self.list.len() as u32;
        self.index.insert(name.to_string(), id);
        self.list.push(name.to_string());
        Ok(id)
    }

    fn get(&self, name: &str) -> Result<u32, ParseErrorKind> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ParseErrorKind::Undeclared { what: self.what, name: name.to_string() })
    }
}

struct Parser {
    kind: Kind,
    alphabet: StructuredAlphabet,
    states: Names,
    stack: Names,
    initial: Vec<StateId>,
    finals: Vec<StateId>,
    calls: Vec<CallTransition<OutWord>>,
    returns: Vec<ReturnTransition<OutWord>>,
    trans: Vec<FstTransition>,
    internal_count: usize,
}

type LineResult<T> = Result<T, (usize, ParseErrorKind)>;

fn syntax(column: usize, msg: impl Into<String>) -> (usize, ParseErrorKind) {
    (column, ParseErrorKind::Syntax(msg.into()))
}

fn alphabet_error(column: usize, e: AlphabetError) -> (usize, ParseErrorKind) {
    match e {
        AlphabetError::Duplicate(name) => (column, ParseErrorKind::Duplicate { what: "symbol", name }),
        other => (column, ParseErrorKind::Syntax(other.to_string())),
    }
}

impl Parser {
    fn at<T>(column: usize, r: Result<T, ParseErrorKind>) -> LineResult<T> {
        r.map_err(|k| (column, k))
    }

    fn state(&self, t: &Token<'_>) -> LineResult<StateId> {
        Self::at(t.column, self.states.get(t.text)).map(StateId)
    }

    fn stack_sym(&self, t: &Token<'_>) -> LineResult<StackSym> {
        Self::at(t.column, self.stack.get(t.text)).map(StackSym)
    }

    fn symbol(&self, t: &Token<'_>) -> LineResult<Sym> {
        self.alphabet.lookup(t.text).ok_or_else(|| {
            (t.column, ParseErrorKind::Undeclared { what: "input symbol", name: t.text.to_string() })
        })
    }

    fn output(&self, t: &Token<'_>) -> LineResult<OutWord> {
        if t.text == "eps" {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        for (i, ch) in t.text.chars().enumerate() {
            if !self.alphabet.has_output(ch) {
                return Err((
                    t.column + i,
                    ParseErrorKind::Undeclared { what: "output letter", name: ch.to_string() },
                ));
            }
            word.push(ch);
        }
        Ok(word)
    }

    fn expect(t: Option<&Token<'_>>, keyword: &str, end_column: usize) -> LineResult<()> {
        match t {
            Some(t) if t.text == keyword => Ok(()),
            Some(t) => Err(syntax(t.column, format!("expected `{keyword}`, found `{}`", t.text))),
            None => Err(syntax(end_column, format!("expected `{keyword}`"))),
        }
    }

    fn line(&mut self, tokens: &[Token<'_>], end_column: usize) -> LineResult<()> {
        let head = &tokens[0];
        let rest = &tokens[1..];
        match head.text {
            "alphabet" => {
                let Some(class) = rest.first() else {
                    return Err(syntax(end_column, "expected alphabet class"));
                };
                for t in &rest[1..] {
                    let r = match (class.text, self.kind) {
                        ("calls", _) | ("inputs", Kind::Fst) => self.alphabet.add_call(t.text.to_string()).map(drop),
                        ("returns", _) => self.alphabet.add_return(t.text.to_string()).map(drop),
                        ("internals", Kind::Vpa | Kind::Vpt) => {
                            self.alphabet.add_internal(t.text.to_string()).map(drop)
                        }
                        ("outputs", Kind::Vpt | Kind::Fst) => {
                            let mut chars = t.text.chars();
                            match (chars.next(), chars.next()) {
                                (Some(ch), None) => self.alphabet.add_output(ch),
                                _ => return Err(syntax(t.column, "output symbols are single characters")),
                            }
                        }
                        _ => {
                            return Err(syntax(class.column, format!("unknown alphabet class `{}`", class.text)))
                        }
                    };
                    r.map_err(|e| alphabet_error(t.column, e))?;
                }
                Ok(())
            }
            "stack" if self.kind != Kind::Fst => {
                for t in rest {
                    Self::at(t.column, self.stack.declare(t.text))?;
                }
                Ok(())
            }
            "states" => {
                for t in rest {
                    Self::at(t.column, self.states.declare(t.text))?;
                }
                Ok(())
            }
            "initial" | "final" => {
                for t in rest {
                    let q = self.state(t)?;
                    if head.text == "initial" {
                        self.initial.push(q);
                    } else {
                        self.finals.push(q);
                    }
                }
                Ok(())
            }
            "call" | "return" if self.kind != Kind::Fst => self.pushdown_transition(head.text == "call", rest, end_column),
            "internal" if self.kind != Kind::Fst => self.internal_transition(rest, end_column),
            "trans" if self.kind == Kind::Fst => {
                // trans q a / out -> q'
                if rest.len() != 6 {
                    return Err(syntax(head.column, "expected `trans <q> <a> / <out> -> <q'>`"));
                }
                let from = self.state(&rest[0])?;
                let input = self.symbol(&rest[1])?;
                Self::expect(rest.get(2), "/", end_column)?;
                let output = self.output(&rest[3])?;
                Self::expect(rest.get(4), "->", end_column)?;
                let to = self.state(&rest[5])?;
                self.trans.push(FstTransition { from, input, output, to });
                Ok(())
            }
            other => Err(syntax(head.column, format!("unexpected `{other}`"))),
        }
    }

    fn pushdown_transition(&mut self, is_call: bool, rest: &[Token<'_>], end_column: usize) -> LineResult<()> {
        // q sym [/ out] push|pop g -> q'
        let with_output = self.kind == Kind::Vpt;
        let expected_len = if with_output { 8 } else { 6 };
        let keyword = if is_call { "push" } else { "pop" };
        if rest.len() != expected_len {
            let shape = if with_output {
                format!("<q> <sym> / <out> {keyword} <stack> -> <q'>")
            } else {
                format!("<q> <sym> {keyword} <stack> -> <q'>")
            };
            let column = rest.first().map(|t| t.column).unwrap_or(end_column);
            return Err(syntax(column, format!("expected {shape}")));
        }
        let from = self.state(&rest[0])?;
        let sym = self.symbol(&rest[1])?;
        let mut i = 2;
        let output = if with_output {
            Self::expect(rest.get(2), "/", end_column)?;
            i = 4;
            self.output(&rest[3])?
        } else {
            Vec::new()
        };
        Self::expect(rest.get(i), keyword, end_column)?;
        let g = self.stack_sym(&rest[i + 1])?;
        Self::expect(rest.get(i + 2), "->", end_column)?;
        let to = self.state(&rest[i + 3])?;
        match (is_call, sym) {
            (true, Sym::Call(call)) => self.calls.push(CallTransition { from, call, output, push: g, to }),
            (false, Sym::Return(ret)) => self.returns.push(ReturnTransition { from, ret, output, pop: g, to }),
            _ => {
                let what = if is_call { "a call" } else { "a return" };
                return Err(syntax(rest[1].column, format!("`{}` is not {what} symbol", rest[1].text)));
            }
        }
        Ok(())
    }

    fn internal_transition(&mut self, rest: &[Token<'_>], end_column: usize) -> LineResult<()> {
        // q a [/ out] -> q'
        let with_output = self.kind == Kind::Vpt;
        let expected_len = if with_output { 6 } else { 4 };
        if rest.len() != expected_len {
            let column = rest.first().map(|t| t.column).unwrap_or(end_column);
            return Err(syntax(column, "expected `internal <q> <a> [/ <out>] -> <q'>`"));
        }
        let from = self.state(&rest[0])?;
        let name = rest[1].text;
        let Some((Sym::Call(call), Sym::Return(ret))) = self.alphabet.internal(name) else {
            return Err((rest[1].column, ParseErrorKind::Undeclared { what: "internal symbol", name: name.into() }));
        };
        let output = if with_output {
            Self::expect(rest.get(2), "/", end_column)?;
            self.output(&rest[3])?
        } else {
            Vec::new()
        };
        Self::expect(rest.get(expected_len - 2), "->", end_column)?;
        let to = self.state(&rest[expected_len - 1])?;
        let frame = format!("[{name}]");
        let g = match self.stack.get(&frame) {
            Ok(g) => StackSym(g),
            Err(_) => StackSym(Self::at(rest[1].column, self.stack.declare(&frame))?),
        };
        let mid_name = format!("{}.{name}.{}", rest[0].text, self.internal_count);
        self.internal_count += 1;
        let mid = StateId(Self::at(rest[0].column, self.states.declare(&mid_name))?);
        self.calls.push(CallTransition { from, call, output, push: g, to: mid });
        self.returns.push(ReturnTransition { from: mid, ret, output: Vec::new(), pop: g, to });
        Ok(())
    }

    fn finish(self) -> Machine {
        match self.kind {
            Kind::Fst => Machine::Fst(Fst::new(FstParts {
                alphabet: self.alphabet,
                states: self.states.list,
                initial: self.initial,
                finals: self.finals,
                transitions: self.trans,
            })),
            Kind::Vpt => Machine::Vpt(Pushdown::new(PushdownParts {
                alphabet: self.alphabet,
                states: self.states.list,
                stack: self.stack.list,
                initial: self.initial,
                finals: self.finals,
                calls: self.calls,
                returns: self.returns,
            })),
            Kind::Vpa => {
                let vpt = Pushdown::new(PushdownParts {
                    alphabet: self.alphabet,
                    states: self.states.list,
                    stack: self.stack.list,
                    initial: self.initial,
                    finals: self.finals,
                    calls: self.calls,
                    returns: self.returns,
                });
                Machine::Vpa(vpt.domain_automaton())
            }
        }
    }
}

pub fn parse_machine(text: &str) -> Result<Machine, ParseError> {
    let mut parser: Option<Parser> = None;
    let mut last_line = 0;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let end_column = line.chars().count() + 1;
        let err = |(column, kind)| ParseError { line: line_no, column, kind };
        match parser.as_mut() {
            None => {
                let kind = match tokens[0].text {
                    "vpa" => Kind::Vpa,
                    "vpt" => Kind::Vpt,
                    "fst" => Kind::Fst,
                    other => {
                        return Err(err(syntax(tokens[0].column, format!("expected header vpa|vpt|fst, found `{other}`"))))
                    }
                };
                if let Some(t) = tokens.get(1) {
                    return Err(err(syntax(t.column, "unexpected token after header")));
                }
                parser = Some(Parser {
                    kind,
                    alphabet: StructuredAlphabet::new([] as [&str; 0], [] as [&str; 0], &[]).expect("empty"),
                    states: Names::new("state"),
                    stack: Names::new("stack symbol"),
                    initial: Vec::new(),
                    finals: Vec::new(),
                    calls: Vec::new(),
                    returns: Vec::new(),
                    trans: Vec::new(),
                    internal_count: 0,
                });
            }
            Some(p) => p.line(&tokens, end_column).map_err(err)?,
        }
    }
    parser.map(Parser::finish).ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        kind: ParseErrorKind::Syntax("missing header vpa|vpt|fst".into()),
    })
}

fn wrong_kind(found: &Machine, want: &str) -> ParseError {
    ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::Syntax(format!("expected a {want} file, found {}", found.kind())),
    }
}

pub fn parse_vpt(text: &str) -> Result<Vpt, ParseError> {
    match parse_machine(text)? {
        Machine::Vpt(m) => Ok(m),
        other => Err(wrong_kind(&other, "vpt")),
    }
}

pub fn parse_vpa(text: &str) -> Result<Vpa, ParseError> {
    match parse_machine(text)? {
        Machine::Vpa(m) => Ok(m),
        other => Err(wrong_kind(&other, "vpa")),
    }
}

pub fn parse_fst(text: &str) -> Result<Fst, ParseError> {
    match parse_machine(text)? {
        Machine::Fst(m) => Ok(m),
        other => Err(wrong_kind(&other, "fst")),
    }
}

fn out_token(word: &[char]) -> String {
    if word.is_empty() {
        "eps".to_string()
    } else {
        word.iter().collect()
    }
}

/// Emits the alphabet declarations so that re-parsing assigns the same ids.
fn write_alphabet(s: &mut String, a: &StructuredAlphabet, call_keyword: &'static str) {
    let internal_call = |c: usize| a.calls()[c].strip_prefix('<').and_then(|n| a.internal(n)).filter(|(ic, _)| *ic == Sym::Call(c as u32));
    let internal_ret = |r: usize| a.returns()[r].strip_suffix('>').and_then(|n| a.internal(n)).filter(|(_, ir)| *ir == Sym::Return(r as u32));
    let mut lines: Vec<(&str, Vec<String>)> = Vec::new();
    let mut emit = |class: &'static str, name: String| match lines.last_mut() {
        Some((c, names)) if *c == class => names.push(name),
        _ => lines.push((class, vec![name])),
    };
    let (mut ci, mut ri) = (0, 0);
    while ci < a.call_count() || ri < a.return_count() {
        if ci < a.call_count() && internal_call(ci).is_none() {
            emit(call_keyword, a.calls()[ci].clone());
            ci += 1;
        } else if ri < a.return_count() && internal_ret(ri).is_none() {
            emit("returns", a.returns()[ri].clone());
            ri += 1;
        } else if ci < a.call_count() {
            let name = a.calls()[ci][1..].to_string();
            emit("internals", name);
            ci += 1;
            ri += 1;
        } else {
            emit("returns", a.returns()[ri].clone());
            ri += 1;
        }
    }
    for (class, names) in lines {
        let _ = writeln!(s, "alphabet {class} {}", names.join(" "));
    }
    if !a.outputs().is_empty() {
        let letters: Vec<String> = a.outputs().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "alphabet outputs {}", letters.join(" "));
    }
}

fn write_states(s: &mut String, states: &[String], initial: &[StateId], finals: &[StateId]) {
    let names = |ids: &[StateId]| ids.iter().map(|q| states[q.index()].as_str()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "states {}", states.join(" "));
    if !initial.is_empty() {
        let _ = writeln!(s, "initial {}", names(initial));
    }
    if !finals.is_empty() {
        let _ = writeln!(s, "final {}", names(finals));
    }
}

fn write_pushdown<L: Label>(s: &mut String, m: &Pushdown<L>, with_output: bool) {
    let p = m.parts();
    write_alphabet(s, &p.alphabet, "calls");
    if !p.stack.is_empty() {
        let _ = writeln!(s, "stack {}", p.stack.join(" "));
    }
    write_states(s, &p.states, &p.initial, &p.finals);
    let out = |l: &L| {
        if with_output {
            format!(" / {}", out_token(l.output()))
        } else {
            String::new()
        }
    };
    for t in &p.calls {
        let _ = writeln!(
            s,
            "call {} {}{} push {} -> {}",
            p.states[t.from.index()],
            p.alphabet.calls()[t.call as usize],
            out(&t.output),
            p.stack[t.push.index()],
            p.states[t.to.index()]
        );
    }
    for t in &p.returns {
        let _ = writeln!(
            s,
            "return {} {}{} pop {} -> {}",
            p.states[t.from.index()],
            p.alphabet.returns()[t.ret as usize],
            out(&t.output),
            p.stack[t.pop.index()],
            p.states[t.to.index()]
        );
    }
}

/// Renders a machine in the file format. The machine must validate cleanly.
pub fn serialize(m: &Machine) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", m.kind());
    match m {
        Machine::Vpa(m) => write_pushdown(&mut s, m, false),
        Machine::Vpt(m) => write_pushdown(&mut s, m, true),
        Machine::Fst(f) => {
            let p = f.parts();
            write_alphabet(&mut s, &p.alphabet, "inputs");
            write_states(&mut s, &p.states, &p.initial, &p.finals);
            for t in &p.transitions {
                let _ = writeln!(
                    s,
                    "trans {} {} / {} -> {}",
                    p.states[t.from.index()],
                    p.alphabet.name(t.input),
                    out_token(&t.output),
                    p.states[t.to.index()]
                );
            }
        }
    }
    s
}
