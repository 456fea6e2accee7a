//! Constants and word lists of the VADER-compatible rule set.
//!
//! Every tunable number used by the scorer lives here so tests can pin them.

/// Intensity added by a booster word ("very", "extremely").
pub const BOOSTER_INCREMENT: f64 = 0.293;
/// Intensity added by a dampener word ("barely", "kinda").
pub const DAMPENER_INCREMENT: f64 = -0.293;
/// Intensity added to an ALL-CAPS token when the text is not entirely capitalised.
pub const ALL_CAPS_INCREMENT: f64 = 0.733;
/// Valence multiplier applied by a preceding negation.
pub const NEGATION_SCALAR: f64 = -0.74;
/// Booster weight by distance from the sentiment word (1, 2, 3 tokens back).
pub const BOOSTER_DISTANCE_WEIGHTS: [f64; 3] = [1.0, 0.95, 0.9];
/// Number of preceding tokens inspected for boosters and negations.
pub const LOOKBACK: usize = 3;
/// Multiplier for "never so/this ..." constructions.
pub const NEVER_SO_SCALAR: f64 = 1.25;

/// Intensity added per '!' in the text.
pub const EXCLAMATION_INCREMENT: f64 = 0.292;
/// At most this many '!' contribute.
pub const MAX_EXCLAMATIONS: usize = 4;
/// Intensity per '?' once at least two are present.
pub const QUESTION_INCREMENT: f64 = 0.18;
/// Question marks beyond this count contribute [`QUESTION_CAP`] in total.
pub const MAX_COUNTED_QUESTIONS: usize = 3;
pub const QUESTION_CAP: f64 = 0.96;

/// Weight of sentiment before a contrastive conjunction.
pub const BUT_BEFORE_WEIGHT: f64 = 0.5;
/// Weight of sentiment after a contrastive conjunction.
pub const BUT_AFTER_WEIGHT: f64 = 1.5;

/// Compound normalisation constant: `s / sqrt(s^2 + alpha)`.
pub const NORMALIZATION_ALPHA: f64 = 15.0;

pub const NEGATIONS: &[&str] = &[
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't", "aren't",
    "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt", "havent",
    "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't", "isn't",
    "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent", "oughtn't", "shan't",
    "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont", "wouldnt", "won't", "wouldn't",
    "rarely", "seldom", "despite",
];

pub const BUT_WORDS: &[&str] = &["but"];

const B_INCR: f64 = BOOSTER_INCREMENT;
const B_DECR: f64 = DAMPENER_INCREMENT;

/// Degree adverbs. Multi-word entries only fire through the n-gram check.
pub const BOOSTERS: &[(&str, f64)] = &[
    ("absolutely", B_INCR),
    ("amazingly", B_INCR),
    ("awfully", B_INCR),
    ("completely", B_INCR),
    ("considerable", B_INCR),
    ("considerably", B_INCR),
    ("decidedly", B_INCR),
    ("deeply", B_INCR),
    ("effing", B_INCR),
    ("enormous", B_INCR),
    ("enormously", B_INCR),
    ("entirely", B_INCR),
    ("especially", B_INCR),
    ("exceptional", B_INCR),
    ("exceptionally", B_INCR),
    ("extreme", B_INCR),
    ("extremely", B_INCR),
    ("fabulously", B_INCR),
    ("flipping", B_INCR),
    ("flippin", B_INCR),
    ("frackin", B_INCR),
    ("fracking", B_INCR),
    ("fricking", B_INCR),
    ("frickin", B_INCR),
    ("frigging", B_INCR),
    ("friggin", B_INCR),
    ("fully", B_INCR),
    ("fuckin", B_INCR),
    ("fucking", B_INCR),
    ("fuggin", B_INCR),
    ("fugging", B_INCR),
    ("greatly", B_INCR),
    ("hella", B_INCR),
    ("highly", B_INCR),
    ("hugely", B_INCR),
    ("incredible", B_INCR),
    ("incredibly", B_INCR),
    ("intensely", B_INCR),
    ("major", B_INCR),
    ("majorly", B_INCR),
    ("more", B_INCR),
    ("most", B_INCR),
    ("particularly", B_INCR),
    ("purely", B_INCR),
    ("quite", B_INCR),
    ("really", B_INCR),
    ("remarkably", B_INCR),
    ("so", B_INCR),
    ("substantially", B_INCR),
    ("thoroughly", B_INCR),
    ("total", B_INCR),
    ("totally", B_INCR),
    ("tremendous", B_INCR),
    ("tremendously", B_INCR),
    ("uber", B_INCR),
    ("unbelievably", B_INCR),
    ("unusually", B_INCR),
    ("utter", B_INCR),
    ("utterly", B_INCR),
    ("very", B_INCR),
    ("almost", B_DECR),
    ("barely", B_DECR),
    ("hardly", B_DECR),
    ("just enough", B_DECR),
    ("kind of", B_DECR),
    ("kinda", B_DECR),
    ("kindof", B_DECR),
    ("kind-of", B_DECR),
    ("less", B_DECR),
    ("little", B_DECR),
    ("marginal", B_DECR),
    ("marginally", B_DECR),
    ("occasional", B_DECR),
    ("occasionally", B_DECR),
    ("partly", B_DECR),
    ("scarce", B_DECR),
    ("scarcely", B_DECR),
    ("slight", B_DECR),
    ("slightly", B_DECR),
    ("somewhat", B_DECR),
    ("sort of", B_DECR),
    ("sorta", B_DECR),
    ("sortof", B_DECR),
    ("sort-of", B_DECR),
];

/// Phrases whose valence replaces that of the lexicon word they contain.
pub const SPECIAL_CASES: &[(&str, f64)] = &[
    ("the shit", 3.0),
    ("the bomb", 3.0),
    ("bad ass", 1.5),
    ("badass", 1.5),
    ("bus stop", 0.0),
    ("yeah right", -2.0),
    ("kiss of death", -1.5),
    ("to die for", 3.0),
    ("beating heart", 3.5),
];

pub(crate) fn special_case(phrase: &str) -> Option<f64> {
    SPECIAL_CASES
        .iter()
        .find(|(p, _)| *p == phrase)
        .map(|(_, v)| *v)
}

/// True when `word` (lowercase) is a negation or contains "n't".
pub(crate) fn is_negation(word: &str) -> bool {
    NEGATIONS.contains(&word) || word.contains("n't")
}
