//! Published corpus figures and scores, for consistency checks and reports.

/// `(docs, EDUs, relation instances, tokens)`.
pub const GUM_V8_TOTALS: (usize, usize, usize, usize) = (193, 23_107, 21_903, 180_851);
pub const RSTDT_TOTALS: (usize, usize, usize, usize) = (385, 21_789, 20_163, 203_352);

/// GUM train/dev/test document counts.
pub const GUM_V8_SPLIT: (usize, usize, usize) = (145, 24, 24);

/// Share of NS relation instances.
pub const NS_SHARE_GUM: f64 = 0.701;
pub const NS_SHARE_RSTDT: f64 = 0.777;

/// Instance-weighted share of GUM relations whose RST-DT mapping leaves the
/// aligned class.
pub const MAPPING_MISMATCH_RATE: f64 = 0.133;

/// `(genre, docs, tokens, EDUs)` per GUM V8 genre. The travel genre is
/// listed under its file-name prefix, `voyage`.
pub const GUM_V8_GENRES: [(&str, usize, usize, usize); 12] = [
    ("academic", 18, 17_168, 1_969),
    ("bio", 20, 18_209, 2_066),
    ("fiction", 19, 17_508, 2_458),
    ("how-to", 19, 17_085, 2_367),
    ("interview", 19, 18_189, 2_404),
    ("news", 23, 16_140, 1_760),
    ("reddit", 18, 16_364, 2_231),
    ("voyage", 18, 16_513, 1_785),
    ("conversation", 9, 10_451, 1_878),
    ("speech", 10, 10_827, 1_249),
    ("textbook", 10, 11_190, 1_397),
    ("vlog", 10, 11_200, 1_543),
];

/// Training sets of the held-out-genre models: `(held out, genres, docs, EDUs)`.
pub const OVA_TRAIN_SIZES: [(&str, usize, usize, usize); 8] = [
    ("academic", 11, 131, 16_088),
    ("bio", 11, 129, 15_901),
    ("fiction", 11, 130, 15_640),
    ("interview", 11, 130, 15_599),
    ("news", 11, 126, 16_252),
    ("reddit", 11, 131, 15_892),
    ("voyage", 11, 131, 16_133),
    ("how-to", 11, 130, 15_672),
];

/// `(genres, docs, EDUs)` of the eight-large-genre training set.
pub const ALL_LARGE_TRAIN_SIZE: (usize, usize, usize) = (8, 122, 13_703);

/// `(genres, docs, EDUs)` of the full GUM training partition.
pub const GUM_TRAIN_SIZE: (usize, usize, usize) = (12, 145, 17_610);

/// Fixed-size cohorts: `(cohort, genre, docs, EDUs)` rows.
pub const FIXED_COHORTS: [(&str, &str, usize, usize); 12] = [
    ("C1", "academic", 18, 1_970),
    ("C1", "bio", 19, 1_981),
    ("C1", "news", 23, 1_760),
    ("C2", "fiction", 15, 1_941),
    ("C2", "interview", 15, 1_931),
    ("C2", "how-to", 15, 1_840),
    ("C3", "academic", 9, 1_004),
    ("C3", "bio", 9, 930),
    ("C3", "news", 10, 635),
    ("C3", "fiction", 8, 1_027),
    ("C3", "interview", 8, 1_199),
    ("C3", "how-to", 8, 917),
];

/// Published cohort totals `(cohort, docs, EDUs)`.
pub const FIXED_COHORT_TOTALS: [(&str, usize, usize); 3] = [("C1", 60, 5_711), ("C2", 45, 5_712), ("C3", 52, 5_712)];

/// Per-genre scores `(genre, in-domain S/N/R, held-out S/N/R, degradation S/N/R)`.
/// The last four rows compare against the eight-large-genre model. Values are
/// as printed, including the reddit S delta whose sign is inverted.
pub type GenreScores = (&'static str, [f64; 3], [f64; 3], [f64; 3]);

pub const GENRE_DEGRADATION: [GenreScores; 12] = [
    ("academic", [77.0, 68.5, 59.8], [75.2, 66.2, 55.7], [1.7, 2.3, 4.1]),
    ("bio", [70.4, 58.2, 51.2], [68.8, 53.9, 43.2], [1.6, 4.3, 8.0]),
    ("fiction", [66.3, 53.1, 43.7], [64.5, 50.1, 42.1], [1.8, 3.0, 1.7]),
    ("interview", [73.3, 59.0, 50.9], [73.0, 56.7, 49.7], [0.3, 2.2, 1.2]),
    ("news", [71.7, 58.4, 49.1], [72.2, 59.2, 51.3], [-0.5, -0.8, -2.2]),
    ("reddit", [66.0, 52.3, 44.2], [66.6, 51.9, 43.3], [0.6, 0.4, 0.8]),
    ("voyage", [78.3, 62.1, 51.8], [77.4, 59.7, 49.3], [0.9, 2.4, 2.4]),
    ("how-to", [76.5, 63.6, 54.6], [67.1, 54.3, 44.8], [9.3, 9.3, 9.9]),
    ("conversation", [45.4, 34.5, 26.7], [42.7, 31.4, 21.8], [2.7, 3.1, 4.9]),
    ("speech", [76.0, 64.4, 55.2], [76.4, 62.9, 54.8], [-0.4, 1.5, 0.4]),
    ("textbook", [77.4, 66.8, 57.3], [76.2, 64.3, 54.5], [1.2, 2.6, 2.9]),
    ("vlog", [64.8, 49.0, 42.8], [63.3, 49.0, 40.4], [1.5, 0.0, 2.5]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genre_rows_sum_to_corpus_totals() {
        let docs: usize = GUM_V8_GENRES.iter().map(|g| g.1).sum();
        let edus: usize = GUM_V8_GENRES.iter().map(|g| g.3).sum();
        assert_eq!((docs, edus), (GUM_V8_TOTALS.0, GUM_V8_TOTALS.1));
        let (tr, dv, te) = GUM_V8_SPLIT;
        assert_eq!(tr + dv + te, GUM_V8_TOTALS.0);
    }

    #[test]
    fn cohort_rows_sum_to_totals() {
        for (c, docs, edus) in FIXED_COHORT_TOTALS {
            let rows = FIXED_COHORTS.iter().filter(|r| r.0 == c);
            let (d, e) = rows.fold((0, 0), |(d, e), r| (d + r.2, e + r.3));
            assert_eq!((d, e), (docs, edus), "{c}");
        }
    }

    #[test]
    fn held_out_training_sets_drop_four_documents_per_genre_split() {
        // Each held-out genre gives up its train documents: all docs minus
        // its two dev and two test documents.
        for (g, _, docs, _) in OVA_TRAIN_SIZES {
            let total = GUM_V8_GENRES.iter().find(|r| r.0 == g).unwrap().1;
            assert_eq!(docs, GUM_TRAIN_SIZE.1 - (total - 4), "{g}");
        }
    }

    #[test]
    fn degradation_is_in_domain_minus_held_out() {
        // The printed reddit S delta lost its sign: 66.0 - 66.6 is an
        // improvement, as the accompanying text also says.
        let sign_flipped = [("reddit", 0)];
        for (g, base, ova, deg) in GENRE_DEGRADATION {
            for k in 0..3 {
                let d = base[k] - ova[k];
                if sign_flipped.contains(&(g, k)) {
                    assert!((d + deg[k]).abs() <= 0.11, "{g} column {k}");
                } else {
                    assert!((d - deg[k]).abs() <= 0.11, "{g} column {k}");
                }
            }
        }
    }
}
