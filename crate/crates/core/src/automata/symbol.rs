use std::fmt;

use crate::error::{Error, Result};

/// Input alphabet, including the endmarkers the runner adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    LeftEnd,
    Bit0,
    Bit1,
    Sharp,
    RightEnd,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [
        Symbol::LeftEnd,
        Symbol::Bit0,
        Symbol::Bit1,
        Symbol::Sharp,
        Symbol::RightEnd,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn bit(b: u8) -> Symbol {
        match b {
            0 => Symbol::Bit0,
            1 => Symbol::Bit1,
            _ => panic!("bit must be 0 or 1, got {b}"),
        }
    }

    pub fn as_bit(self) -> Option<u8> {
        match self {
            Symbol::Bit0 => Some(0),
            Symbol::Bit1 => Some(1),
            _ => None,
        }
    }

    /// Key used in spec dumps.
    pub fn dump_name(self) -> &'static str {
        match self {
            Symbol::LeftEnd => "LEFT_END",
            Symbol::Bit0 => "0",
            Symbol::Bit1 => "1",
            Symbol::Sharp => "SHARP",
            Symbol::RightEnd => "RIGHT_END",
        }
    }

    pub fn from_dump_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| s.dump_name() == name)
    }

    pub fn is_endmarker(self) -> bool {
        matches!(self, Symbol::LeftEnd | Symbol::RightEnd)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::LeftEnd => "¢",
            Symbol::Bit0 => "0",
            Symbol::Bit1 => "1",
            Symbol::Sharp => "#",
            Symbol::RightEnd => "$",
        })
    }
}

/// Parses a user word over `{0, 1, #}`. `♯` is accepted as a synonym of `#`.
pub fn parse_word(word: &str) -> Result<Vec<Symbol>> {
    word.chars()
        .enumerate()
        .map(|(position, ch)| match ch {
            '0' => Ok(Symbol::Bit0),
            '1' => Ok(Symbol::Bit1),
            '#' | '♯' => Ok(Symbol::Sharp),
            _ => Err(Error::Format {
                ch,
                position,
                context: "word",
            }),
        })
        .collect()
}

pub fn format_word(word: &[Symbol]) -> String {
    word.iter().map(|s| s.to_string()).collect()
}
