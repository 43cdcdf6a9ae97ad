//! Expected tables shipped with the binary. Each file is tab-separated with a
//! `#` header line; empty cells mean "absent".

use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum TableId {
    Threepairs,
    Fourpairs,
    Induct,
    Onepair,
    Twopairs,
    LctKashiwara,
    LctTono,
    LctOrevkov,
    All,
}

pub const ALL_TABLES: [TableId; 8] = [
    TableId::Threepairs,
    TableId::Fourpairs,
    TableId::Induct,
    TableId::Onepair,
    TableId::Twopairs,
    TableId::LctKashiwara,
    TableId::LctTono,
    TableId::LctOrevkov,
];

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::Threepairs => "threepairs",
            TableId::Fourpairs => "fourpairs",
            TableId::Induct => "induct",
            TableId::Onepair => "onepair",
            TableId::Twopairs => "twopairs",
            TableId::LctKashiwara => "lct-kashiwara",
            TableId::LctTono => "lct-tono",
            TableId::LctOrevkov => "lct-orevkov",
            TableId::All => "all",
        }
    }

    /// Raw embedded text; `all` has no table of its own.
    pub fn source(self) -> Option<&'static str> {
        Some(match self {
            TableId::Threepairs => include_str!("../tables/threepairs.tsv"),
            TableId::Fourpairs => include_str!("../tables/fourpairs.tsv"),
            TableId::Induct => include_str!("../tables/induct.tsv"),
            TableId::Onepair => include_str!("../tables/onepair.tsv"),
            TableId::Twopairs => include_str!("../tables/twopairs.tsv"),
            TableId::LctKashiwara => include_str!("../tables/lct_kashiwara.tsv"),
            TableId::LctTono => include_str!("../tables/lct_tono.tsv"),
            TableId::LctOrevkov => include_str!("../tables/lct_orevkov.tsv"),
            TableId::All => return None,
        })
    }

    pub fn expected(self) -> Option<ExpectedTable> {
        self.source().map(|src| ExpectedTable::parse(self, src))
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ALL_TABLES
            .iter()
            .chain(std::iter::once(&TableId::All))
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown table {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedTable {
    pub id: TableId,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ExpectedTable {
    /// The embedded files are fixed at build time, so a malformed one is a
    /// packaging bug and panics.
    fn parse(id: TableId, src: &str) -> Self {
        let mut lines = src.lines();
        let header = lines.next().and_then(|h| h.strip_prefix("# ")).expect("table header");
        let columns: Vec<String> = header.split('\t').map(str::to_string).collect();
        let rows = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let mut cells: Vec<String> = l.split('\t').map(|c| c.trim().to_string()).collect();
                assert!(cells.len() <= columns.len(), "{id}: too many cells in {l:?}");
                cells.resize(columns.len(), String::new());
                cells
            })
            .collect();
        ExpectedTable { id, columns, rows }
    }

    pub fn column(&self, name: &str) -> usize {
        self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("{}: no column {name}", self.id))
    }
}
