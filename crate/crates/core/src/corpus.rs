//! The ring files shipped under `corpus/`.

use crate::field::Field;
use crate::input::{InputError, ParsedInput, RingFile};
use crate::rings::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

/// Cohen-Macaulay rings of dimension 1 to 3 and multiplicity 1 to 4.
pub const CORPUS: [CorpusEntry; 6] = [
    CorpusEntry {
        name: "plane",
        text: include_str!("../../../corpus/plane.ring"),
    },
    CorpusEntry {
        name: "space",
        text: include_str!("../../../corpus/space.ring"),
    },
    CorpusEntry {
        name: "quadric",
        text: include_str!("../../../corpus/quadric.ring"),
    },
    CorpusEntry {
        name: "cubic",
        text: include_str!("../../../corpus/cubic.ring"),
    },
    CorpusEntry {
        name: "curve345",
        text: include_str!("../../../corpus/curve345.ring"),
    },
    CorpusEntry {
        name: "curve4567",
        text: include_str!("../../../corpus/curve4567.ring"),
    },
];

/// `k[x,y]` with `I = (x^7, x^6y, x^2y^5, y^7)` and two of its minimal
/// reductions `J1`, `J2`.
pub const HUCKABA: CorpusEntry = CorpusEntry {
    name: "huckaba",
    text: include_str!("../../../corpus/huckaba.ring"),
};

pub fn entry(name: &str) -> Option<CorpusEntry> {
    CORPUS
        .iter()
        .chain(std::iter::once(&HUCKABA))
        .find(|e| e.name == name)
        .copied()
}

impl CorpusEntry {
    pub fn ring_file(&self) -> RingFile {
        RingFile::parse(self.text).expect("shipped corpus files parse")
    }

    /// Builds the ring over `field`, replacing the declared characteristic.
    pub fn load<F: Field>(&self, field: F) -> Result<ParsedInput<F>, InputError> {
        let mut file = self.ring_file();
        file.field = field.spec();
        file.build(field, Some(self.name.to_string()), Limits::default())
    }
}
