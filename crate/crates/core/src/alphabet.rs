//! Structured input alphabets and output letters.
//!
//! Input symbols are split into calls and returns and interned to dense ids
//! at construction time. A [`Sym`] carries its class, so nested-word
//! operations never need the alphabet itself. Output symbols are single
//! characters and output words are plain `Vec<char>`.

use std::collections::HashMap;
use std::fmt;

use crate::error::AlphabetError;

/// An input symbol: a call or a return, identified by its dense index
/// within its class.
///
/// The derived ordering puts every call before every return, and orders
/// symbols of the same class by declaration. Enumerations that need a
/// canonical symbol order use this one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Call(u32),
    Return(u32),
}

impl Sym {
    pub fn is_call(self) -> bool {
        matches!(self, Sym::Call(_))
    }

    pub fn is_return(self) -> bool {
        matches!(self, Sym::Return(_))
    }
}

/// A word over the input alphabet. Well-nestedness is a property checked by
/// [`crate::nested`], not an invariant of the type.
pub type InputWord = Vec<Sym>;

/// A word over the output alphabet.
pub type OutWord = Vec<char>;

/// Renders an output word as a string.
pub fn out_string(word: &[char]) -> String {
    word.iter().collect()
}

/// Input alphabet partitioned into calls and returns, plus an unconstrained
/// output alphabet of single characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredAlphabet {
    calls: Vec<String>,
    returns: Vec<String>,
    outputs: Vec<char>,
    // internal symbol name -> (call id, return id) it desugars to
    internals: Vec<(String, u32, u32)>,
    index: HashMap<String, Sym>,
}

impl StructuredAlphabet {
    pub fn new<C, R, S, T>(calls: C, returns: R, outputs: &[char]) -> Result<Self, AlphabetError>
    where
        C: IntoIterator<Item = S>,
        R: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut alphabet = StructuredAlphabet {
            calls: Vec::new(),
            returns: Vec::new(),
            outputs: Vec::new(),
            internals: Vec::new(),
            index: HashMap::new(),
        };
        for c in calls {
            alphabet.add_call(c.into())?;
        }
        for r in returns {
            alphabet.add_return(r.into())?;
        }
        for &o in outputs {
            alphabet.add_output(o)?;
        }
        Ok(alphabet)
    }

    fn check_token(name: &str) -> Result<(), AlphabetError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(AlphabetError::BadToken(name.to_string()));
        }
        Ok(())
    }

    pub fn add_call(&mut self, name: String) -> Result<Sym, AlphabetError> {
        Self::check_token(&name)?;
        if self.index.contains_key(&name) {
            return Err(AlphabetError::Duplicate(name));
        }
        let sym = Sym::Call(self.calls.len() as u32);
        self.index.insert(name.clone(), sym);
        self.calls.push(name);
        Ok(sym)
    }

    pub fn add_return(&mut self, name: String) -> Result<Sym, AlphabetError> {
        Self::check_token(&name)?;
        if self.index.contains_key(&name) {
            return Err(AlphabetError::Duplicate(name));
        }
        let sym = Sym::Return(self.returns.len() as u32);
        self.index.insert(name.clone(), sym);
        self.returns.push(name);
        Ok(sym)
    }

    pub fn add_output(&mut self, letter: char) -> Result<(), AlphabetError> {
        if letter.is_whitespace() {
            return Err(AlphabetError::BadToken(letter.to_string()));
        }
        if self.outputs.contains(&letter) {
            return Err(AlphabetError::Duplicate(letter.to_string()));
        }
        self.outputs.push(letter);
        Ok(())
    }

    /// Declares an internal symbol `name`. It is not a symbol of the
    /// alphabet: it desugars to the call `<name` followed by the return
    /// `name>`, both of which are added here.
    pub fn add_internal(&mut self, name: String) -> Result<(Sym, Sym), AlphabetError> {
        Self::check_token(&name)?;
        if self.internals.iter().any(|(n, _, _)| *n == name) {
            return Err(AlphabetError::Duplicate(name));
        }
        let call = self.add_call(format!("<{name}"))?;
        let ret = self.add_return(format!("{name}>"))?;
        let (Sym::Call(c), Sym::Return(r)) = (call, ret) else {
            unreachable!()
        };
        self.internals.push((name, c, r));
        Ok((call, ret))
    }

    pub fn calls(&self) -> &[String] {
        &self.calls
    }

    pub fn returns(&self) -> &[String] {
        &self.returns
    }

    pub fn outputs(&self) -> &[char] {
        &self.outputs
    }

    pub fn call_count(&self) -> usize {
        self.calls.len()
    }

    pub fn return_count(&self) -> usize {
        self.returns.len()
    }

    /// Every input symbol in canonical order (calls, then returns).
    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.calls.len() as u32)
            .map(Sym::Call)
            .chain((0..self.returns.len() as u32).map(Sym::Return))
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn internal(&self, name: &str) -> Option<(Sym, Sym)> {
        self.internals
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|&(_, c, r)| (Sym::Call(c), Sym::Return(r)))
    }

    pub fn contains(&self, sym: Sym) -> bool {
        match sym {
            Sym::Call(c) => (c as usize) < self.calls.len(),
            Sym::Return(r) => (r as usize) < self.returns.len(),
        }
    }

    pub fn has_output(&self, letter: char) -> bool {
        self.outputs.contains(&letter)
    }

    pub fn name(&self, sym: Sym) -> &str {
        match sym {
            Sym::Call(c) => &self.calls[c as usize],
            Sym::Return(r) => &self.returns[r as usize],
        }
    }

    /// Parses a whitespace-separated list of symbol names. Internal symbols
    /// expand to their call/return pair.
    pub fn parse_word(&self, text: &str) -> Result<InputWord, AlphabetError> {
        let mut word = Vec::new();
        for token in text.split_whitespace() {
            if let Some(sym) = self.lookup(token) {
                word.push(sym);
            } else if let Some((c, r)) = self.internal(token) {
                word.push(c);
                word.push(r);
            } else {
                return Err(AlphabetError::UnknownSymbol(token.to_string()));
            }
        }
        Ok(word)
    }

    pub fn display_word<'a>(&'a self, word: &'a [Sym]) -> DisplayWord<'a> {
        DisplayWord {
            alphabet: self,
            word,
        }
    }

    /// The alphabet containing the symbols of both `self` and `other`.
    /// Symbols of `self` keep their ids.
    pub fn merge(&self, other: &StructuredAlphabet) -> Result<StructuredAlphabet, AlphabetError> {
        let mut merged = self.clone();
        for sym in other.symbols() {
            let name = other.name(sym);
            match (merged.lookup(name), sym) {
                (Some(Sym::Call(_)), Sym::Call(_)) | (Some(Sym::Return(_)), Sym::Return(_)) => {}
                (Some(_), _) => return Err(AlphabetError::ClassConflict(name.to_string())),
                (None, Sym::Call(_)) => {
                    merged.add_call(name.to_string())?;
                }
                (None, Sym::Return(_)) => {
                    merged.add_return(name.to_string())?;
                }
            }
        }
        for (name, c, r) in &other.internals {
            let (pc, pr) = (Sym::Call(*c), Sym::Return(*r));
            if merged.internal(name).is_none() {
                if let (Some(Sym::Call(mc)), Some(Sym::Return(mr))) =
                    (merged.lookup(other.name(pc)), merged.lookup(other.name(pr)))
                {
                    merged.internals.push((name.clone(), mc, mr));
                }
            }
        }
        for &o in &other.outputs {
            if !merged.has_output(o) {
                merged.outputs.push(o);
            }
        }
        Ok(merged)
    }

    /// Maps a symbol of `self` to the symbol with the same name in `target`.
    pub fn translate(&self, sym: Sym, target: &StructuredAlphabet) -> Option<Sym> {
        target.lookup(self.name(sym))
    }
}

/// Space-separated rendering of an input word.
pub struct DisplayWord<'a> {
    alphabet: &'a StructuredAlphabet,
    word: &'a [Sym],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &sym) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(sym))?;
        }
        Ok(())
    }
}
