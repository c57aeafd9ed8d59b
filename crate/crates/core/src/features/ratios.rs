use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Gender, MovieBundle};
use crate::text::PosCounts;

/// Male and female tallies of one quantity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub male: u64,
    pub female: u64,
}

impl Counts {
    fn add(&mut self, gender: Gender, n: u64) {
        match gender {
            Gender::Male => self.male += n,
            Gender::Female => self.female += n,
            Gender::Unknown => {}
        }
    }

    /// Male count over female count; `None` when there are no females.
    pub fn ratio(&self) -> Option<f64> {
        (self.female > 0).then(|| self.male as f64 / self.female as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct YearRatios {
    pub year: i32,
    pub movies: usize,
    pub cast: Counts,
    pub crew: Counts,
    pub dialogue: Counts,
    /// Noun, verb and adjective tags in each gender's lines.
    pub pos: Counts,
}

/// Per-year gender tallies. `line_pos[i]` is aligned with `bundles[i].lines`.
pub fn ratio_reports(bundles: &[MovieBundle], line_pos: &[Vec<PosCounts>]) -> Vec<YearRatios> {
    let mut years: BTreeMap<i32, YearRatios> = BTreeMap::new();
    for (i, bundle) in bundles.iter().enumerate() {
        let year = bundle.movie.release_year;
        let row = years.entry(year).or_insert_with(|| YearRatios {
            year,
            ..YearRatios::default()
        });
        row.movies += 1;
        for c in &bundle.characters {
            row.cast.add(c.gender, 1);
        }
        for c in &bundle.crew {
            row.crew.add(c.gender, 1);
        }
        let pos = line_pos.get(i).map(Vec::as_slice).unwrap_or_default();
        for (j, speaker) in bundle.speaker_genders().into_iter().enumerate() {
            row.dialogue.add(speaker, 1);
            if let Some(p) = pos.get(j) {
                row.pos.add(speaker, p.content());
            }
        }
    }
    years.into_values().collect()
}
