//! Penn-Treebank-style part-of-speech tags.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

macro_rules! pos_tags {
    ($($variant:ident => $text:literal),+ $(,)?) => {
        /// A Penn Treebank part-of-speech tag.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PosTag {
            $($variant),+
        }

        impl PosTag {
            pub const ALL: &'static [PosTag] = &[$(PosTag::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(PosTag::$variant => $text),+
                }
            }
        }

        impl FromStr for PosTag {
            type Err = UnknownTag;

            fn from_str(s: &str) -> Result<Self, UnknownTag> {
                match s {
                    $($text => Ok(PosTag::$variant),)+
                    _ => Err(UnknownTag(s.to_string())),
                }
            }
        }
    };
}

pos_tags! {
    Cc => "CC",
    Cd => "CD",
    Dt => "DT",
    Ex => "EX",
    Fw => "FW",
    In => "IN",
    Jj => "JJ",
    Jjr => "JJR",
    Jjs => "JJS",
    Ls => "LS",
    Md => "MD",
    Nn => "NN",
    Nns => "NNS",
    Nnp => "NNP",
    Nnps => "NNPS",
    Pdt => "PDT",
    Pos => "POS",
    Prp => "PRP",
    PrpPoss => "PRP$",
    Rb => "RB",
    Rbr => "RBR",
    Rbs => "RBS",
    Rp => "RP",
    Sym => "SYM",
    To => "TO",
    Uh => "UH",
    Vb => "VB",
    Vbd => "VBD",
    Vbg => "VBG",
    Vbn => "VBN",
    Vbp => "VBP",
    Vbz => "VBZ",
    Wdt => "WDT",
    Wp => "WP",
    WpPoss => "WP$",
    Wrb => "WRB",
    SentClose => ".",
    Comma => ",",
    MidPunct => ":",
}

#[derive(Debug, thiserror::Error)]
#[error("unknown POS tag {0:?}")]
pub struct UnknownTag(pub String);

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for PosTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PosTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Coarse class used for POS-aware lemmatization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosClass {
    Noun,
    Verb,
    Adjective,
    Other,
}

impl PosTag {
    pub fn class(&self) -> PosClass {
        use PosTag::*;
        match self {
            Nn | Nns | Nnp | Nnps => PosClass::Noun,
            Vb | Vbd | Vbg | Vbn | Vbp | Vbz => PosClass::Verb,
            Jj | Jjr | Jjs => PosClass::Adjective,
            _ => PosClass::Other,
        }
    }

    /// True for the inflected forms whose suffixes the lemmatizer strips.
    pub fn is_inflected(&self) -> bool {
        use PosTag::*;
        matches!(self, Nns | Nnps | Vbd | Vbg | Vbn | Vbz | Jjr | Jjs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_tag_strings() {
        for tag in PosTag::ALL {
            assert_eq!(tag.as_str().parse::<PosTag>().unwrap(), *tag);
        }
        assert!("XYZ".parse::<PosTag>().is_err());
    }

    #[test]
    fn classes() {
        assert_eq!(PosTag::Nns.class(), PosClass::Noun);
        assert_eq!(PosTag::Vbg.class(), PosClass::Verb);
        assert_eq!(PosTag::Jjr.class(), PosClass::Adjective);
        assert_eq!(PosTag::Dt.class(), PosClass::Other);
    }
}
