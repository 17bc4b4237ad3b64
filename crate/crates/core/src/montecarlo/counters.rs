use crate::error::{Error, Result};
use crate::inequalities::SettingPair;
use crate::outcome::Outcome;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

/// Cell order of counter dumps.
pub const CELL_ORDER: [(Outcome, Outcome); 9] = [
    (Outcome::Plus, Outcome::Plus),
    (Outcome::Plus, Outcome::Minus),
    (Outcome::Minus, Outcome::Plus),
    (Outcome::Minus, Outcome::Minus),
    (Outcome::Plus, Outcome::Zero),
    (Outcome::Zero, Outcome::Plus),
    (Outcome::Minus, Outcome::Zero),
    (Outcome::Zero, Outcome::Minus),
    (Outcome::Zero, Outcome::Zero),
];

pub fn cell_name(first: Outcome, second: Outcome) -> String {
    format!("{}{}", first.cell_letter(), second.cell_letter())
}

/// Outcome counts `N^{ij}` for `N` emitted pairs at one setting pair.
/// The cell counts always sum to `n_emitted`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CoincidenceCounters {
    n_emitted: u64,
    cells: [[u64; 3]; 3],
}

impl CoincidenceCounters {
    pub fn new(cells: [[u64; 3]; 3]) -> Self {
        let n_emitted = cells.iter().flatten().sum();
        CoincidenceCounters { n_emitted, cells }
    }

    pub fn n_emitted(&self) -> u64 {
        self.n_emitted
    }

    pub fn get(&self, first: Outcome, second: Outcome) -> u64 {
        self.cells[first.index()][second.index()]
    }

    pub fn cells(&self) -> &[[u64; 3]; 3] {
        &self.cells
    }

    pub(crate) fn add_to(&mut self, first: Outcome, second: Outcome, count: u64) {
        self.cells[first.index()][second.index()] += count;
        self.n_emitted += count;
    }

    /// Number of first photons with outcome `o`.
    pub fn first_singles(&self, o: Outcome) -> u64 {
        self.cells[o.index()].iter().sum()
    }

    /// Number of second photons with outcome `o`.
    pub fn second_singles(&self, o: Outcome) -> u64 {
        self.cells.iter().map(|row| row[o.index()]).sum()
    }

    /// Number of pairs where both photons emerged.
    pub fn coincidences(&self) -> u64 {
        Outcome::DETECTED
            .iter()
            .flat_map(|&i| Outcome::DETECTED.iter().map(move |&j| self.get(i, j)))
            .sum()
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        CoincidenceCounters::new(self.cells.map(|row| row.map(|c| c * factor)))
    }

    pub fn merge(&self, other: &Self) -> Self {
        *self + *other
    }
}

impl Add for CoincidenceCounters {
    type Output = CoincidenceCounters;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for CoincidenceCounters {
    fn add_assign(&mut self, rhs: Self) {
        for (row, other) in self.cells.iter_mut().zip(rhs.cells.iter()) {
            for (c, o) in row.iter_mut().zip(other) {
                *c += o;
            }
        }
        self.n_emitted += rhs.n_emitted;
    }
}

/// Counter dump as `pair,cell,count` rows, pairs in run order and cells in
/// [`CELL_ORDER`].
pub fn counters_csv(runs: &BTreeMap<SettingPair, CoincidenceCounters>) -> String {
    let mut out = String::from("pair,cell,count\n");
    for (pair, counters) in runs {
        for (i, j) in CELL_ORDER {
            out.push_str(&format!(
                "{},{},{}\n",
                pair.label(),
                cell_name(i, j),
                counters.get(i, j)
            ));
        }
    }
    out
}

/// Reads a dump written by [`counters_csv`].
pub fn parse_counters_csv(text: &str) -> Result<BTreeMap<SettingPair, CoincidenceCounters>> {
    let mut runs: BTreeMap<SettingPair, CoincidenceCounters> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if n == 0 || line.is_empty() {
            if n == 0 && line != "pair,cell,count" {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `pair,cell,count`".into(),
                });
            }
            continue;
        }
        let err = |message: String| Error::Parse {
            line: n + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        let [pair, cell, count] = fields.as_slice() else {
            return Err(err("expected three fields".into()));
        };
        let pair = SettingPair::ALL
            .into_iter()
            .find(|p| p.label() == *pair)
            .ok_or_else(|| err(format!("unknown pair {pair:?}")))?;
        let (i, j) = CELL_ORDER
            .into_iter()
            .find(|&(i, j)| cell_name(i, j) == *cell)
            .ok_or_else(|| err(format!("unknown cell {cell:?}")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| err(format!("bad count {count:?}")))?;
        if !seen.insert((pair, i, j)) {
            return Err(err(format!("duplicate cell {}", cell_name(i, j))));
        }
        runs.entry(pair).or_default().add_to(i, j, count);
    }
    Ok(runs)
}
