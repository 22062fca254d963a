//! Rule-based tagger: closed-class lexicon, a small open-class lexicon,
//! suffix heuristics and a handful of left-context rules. Unknown words
//! default to NOUN.

use super::{Pos, Token};

const PRONOUNS: &[&str] = &[
    "i", "me", "myself", "you", "yourself", "yourselves", "he", "him", "himself", "she", "herself", "it", "itself",
    "we", "us", "ourselves", "they", "them", "themselves", "i'm", "i've", "i'll", "i'd", "im", "ive", "you're",
    "you've", "you'll", "he's", "she's", "it's", "we're", "we've", "we'll", "they're", "they've", "that's", "there's",
    "let's", "lets", "something", "anything", "nothing", "everything", "someone", "anyone", "everyone", "nobody",
    "somebody", "everybody", "who", "what", "which", "there", "mine", "yours", "ours", "theirs",
];

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "some", "any", "every", "each", "all", "both", "another", "no", "several", "either", "neither",
];

pub(crate) const POSSESSIVES: &[&str] = &["my", "your", "his", "her", "its", "our", "their"];

const PREPOSITIONS: &[&str] = &[
    "with", "in", "on", "at", "for", "of", "from", "about", "by", "into", "onto", "after", "before", "during", "up",
    "off", "out", "through", "over", "under", "around", "without", "across", "along", "behind", "near", "toward",
    "towards", "upon", "within", "against", "between", "among", "down", "per", "via", "except", "inside", "outside",
    "beside", "beyond", "throughout", "underneath",
];

const CONJUNCTIONS: &[&str] = &[
    "and", "or", "but", "nor", "because", "if", "when", "while", "since", "although", "though", "whether", "than",
    "until", "unless", "as", "where", "whereas", "cause",
];

const AUXILIARIES: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "do", "does", "did", "can", "could", "will", "would",
    "shall", "should", "may", "might", "must", "can't", "cannot", "don't", "doesn't", "didn't", "won't", "wouldn't",
    "shouldn't", "couldn't", "isn't", "aren't", "wasn't", "weren't", "haven't", "hasn't", "hadn't", "mustn't",
    "ain't", "dont", "didnt", "doesnt", "cant", "wont", "wouldnt", "shouldnt", "couldnt", "isnt", "arent", "wasnt",
    "werent", "havent", "hasnt", "hadnt",
];

const ADVERBS: &[&str] = &[
    "so", "very", "really", "just", "also", "too", "still", "already", "always", "never", "often", "sometimes", "now",
    "then", "here", "today", "tonight", "tomorrow", "yesterday", "lately", "again", "almost", "even", "only", "much",
    "more", "most", "less", "least", "quite", "rather", "soon", "sooner", "later", "ever", "anymore", "once", "twice",
    "maybe", "perhaps", "away", "back", "yet", "instead", "together", "ago", "else", "how", "why", "well", "otherwise",
    "somehow", "anyway", "online", "super", "pretty", "kinda", "sorta", "tho", "finally", "early", "fast", "hard-core",
];

const NUMBERS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve", "fifteen",
    "twenty", "thirty", "forty", "fifty", "hundred", "thousand", "million",
];

const ADJECTIVES: &[&str] = &[
    "good", "bad", "great", "nice", "happy", "sad", "busy", "sick", "tired", "sleepy", "hungry", "old", "new", "long",
    "short", "big", "small", "little", "hard", "easy", "difficult", "tough", "important", "special", "favorite",
    "favourite", "best", "better", "worse", "worst", "amazing", "awesome", "beautiful", "lovely", "wonderful",
    "horrible", "terrible", "awful", "fun", "funny", "glad", "mad", "angry", "upset", "sure", "ready", "able", "unable",
    "late", "free", "full", "whole", "own", "real", "right", "wrong", "last", "next", "first", "second", "other",
    "same", "different", "scary", "vibrant", "happier", "healthy", "delicious", "yummy", "tasty", "sweet", "weird",
    "nervous", "cool", "hot", "cold", "warm", "fresh", "clean", "dirty", "quiet", "loud", "calm", "lazy", "sore",
    "empty", "huge", "tiny", "young", "early", "proud", "lucky", "sorry", "okay", "ok", "fine", "boring", "interesting",
    "exciting", "relaxing", "annoying", "disappointing", "embarrassing", "frustrating", "stressful", "productive",
    "crazy", "pleasant", "unpleasant", "smaller", "bigger", "nicer", "harder", "easier", "hardest", "impossible",
    "entire", "open", "alone", "alive", "awake", "homemade", "german", "italian", "exhausted", "stressed", "worried",
    "excited", "bored", "annoyed", "irritated", "sunny", "rainy", "many", "few", "such", "extra", "major", "main",
    "final", "enough", "wet", "dry", "hilarious", "traumatic", "sleepless", "rough",
];

const NOUNS: &[&str] = &[
    "thing", "morning", "evening", "family", "belly", "jelly", "rally", "july", "italy", "bus", "gas", "class",
    "glass", "grass", "boss", "dress", "stress", "business", "news", "series", "wedding", "ceiling", "pudding",
    "building", "ring", "king", "spring", "string", "sibling", "bed", "table", "vegetable", "cable", "olive",
    "relative", "detective", "motive", "hw", "bf", "gf", "mom", "dad", "time", "day", "night", "week", "weekend",
    "friend", "friends", "people", "girl", "man", "breakfast", "lunch", "dinner", "food", "coffee", "party", "home",
    "school", "homework", "paper", "project", "test", "exam", "midterm", "midterms", "finals", "movie", "minutes",
    "hours", "hike", "attitude", "experience", "lots", "lot", "ally", "sally", "kelly", "emily", "holly", "lily",
    "birthday", "picnic", "roommate", "sister", "cousin", "parents", "aunt", "uncle", "husband", "wife", "kids",
    "outdoors", "effort", "efforts", "ability", "pleasure", "relaxation", "alcohol", "weed", "drugs", "dope",
    "senses", "bread", "cheese", "goals", "purpose", "intention", "complaints", "answers", "answer", "rehearsal",
    "breeze", "something", "chore", "kitchen", "wine", "cookie", "dough", "burgers", "sides", "rain", "life",
    "teeth", "others", "hours", "lecture", "quarter", "professor", "schedule", "grades", "water", "corners",
    "packaging", "recipe", "book", "stuff", "colors", "housemates", "pancake", "ice", "cream", "chemo", "biopsy",
    "marrow", "bone", "test", "scholarship", "chunk", "section", "support", "students", "list", "things", "hours",
    "ceremony", "nights", "textbook", "office", "traffic", "line", "car", "phone", "boyfriend", "girlfriend",
];

/// Base forms and irregular inflections of common open-class verbs.
const VERB_BASES: &[&str] = &[
    "go", "eat", "take", "make", "get", "see", "come", "find", "tell", "say", "think", "know", "feel", "keep",
    "leave", "buy", "bring", "teach", "catch", "sleep", "spend", "meet", "run", "sit", "stand", "write", "read",
    "hear", "give", "forget", "begin", "drive", "win", "lose", "pay", "send", "build", "hang", "fall", "grow", "wake",
    "wear", "drink", "swim", "sing", "put", "cut", "hit", "hurt", "let", "set", "shut", "quit", "become", "want",
    "need", "love", "like", "hate", "enjoy", "talk", "walk", "play", "work", "study", "clean", "start", "stop",
    "finish", "try", "use", "avoid", "help", "watch", "wait", "hope", "wish", "plan", "cook", "call", "text", "chat",
    "visit", "miss", "relax", "rest", "learn", "listen", "move", "open", "close", "turn", "pick", "look", "seem",
    "happen", "live", "stay", "ride", "hike", "shop", "wash", "cry", "laugh", "smile", "complain", "realize",
    "remember", "decide", "practice", "exercise", "complete", "achieve", "attempt", "mess", "screw", "ruin", "reply",
    "react", "celebrate", "dance", "travel", "share", "check", "fix", "change", "pass", "fail", "care", "matter",
    "prepare", "apply", "show", "ask", "join", "hold", "sound", "smell", "taste", "save", "cancel", "wonder", "hug",
    "kiss", "bake", "fight", "argue", "yell", "worry", "stress", "hang", "chill", "clean", "cuddle", "text", "punish",
    "suppose", "waste", "wipe", "smoke", "bump", "behave", "cram", "apply", "require", "inform", "befriend", "marry",
    "grumble", "duck", "rehearse", "accomplish", "answer", "experience", "seem", "owe", "sell",
];

const VERB_PAST: &[&str] = &[
    "went", "gone", "ate", "eaten", "took", "taken", "made", "got", "gotten", "saw", "seen", "came", "found", "told",
    "said", "thought", "knew", "known", "felt", "kept", "left", "bought", "brought", "taught", "caught", "slept",
    "spent", "met", "ran", "sat", "stood", "wrote", "written", "heard", "gave", "given", "forgot", "forgotten",
    "began", "begun", "drove", "driven", "won", "lost", "paid", "sent", "built", "hung", "fell", "grew", "woke",
    "woken", "wore", "worn", "drank", "drunk", "swam", "sang", "became", "done", "stuck", "born", "sold", "held",
    "broke", "broken", "chose", "chosen", "fought", "meant", "understood", "used", "died", "lied",
];

/// Participles for passive detection that don't end in -ed/-en.
pub(crate) const IRREGULAR_PARTICIPLES: &[&str] = &[
    "done", "made", "told", "taken", "seen", "gone", "been", "got", "gotten", "known", "given", "written", "eaten",
    "found", "left", "felt", "held", "kept", "brought", "bought", "thought", "caught", "taught", "sold", "paid",
    "said", "lost", "built", "sent", "spent", "hurt", "put", "set", "cut", "shut", "hit", "let", "read", "won", "met",
    "driven", "forgotten", "begun", "stuck", "born", "worn", "woken", "drunk", "hung", "fought", "meant",
    "understood", "broken", "chosen",
];

/// Verbs after which `to <work|school|...>` is a destination, not an infinitive.
const MOTION_VERBS: &[&str] = &[
    "go", "goes", "going", "went", "gone", "come", "comes", "came", "coming", "drive", "drove", "driving", "walk",
    "walked", "walking", "ran", "run", "running", "back", "headed", "head", "ride", "rode", "biked", "get", "got",
];

const DESTINATIONS: &[&str] = &["work", "bed", "school", "church", "class", "practice", "sleep", "rest"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VerbForm {
    Base,
    Past,
    Ing,
    ThirdPerson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lexical {
    Fixed(Pos),
    Possessive,
    Her,
    Demonstrative,
    That,
    To,
    Have,
    Like,
    Verb(VerbForm),
    Unknown,
}

fn key(surface: &str) -> String {
    surface.to_lowercase().replace('’', "'")
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

fn verb_stem_is_base(word: &str) -> bool {
    let candidates = [
        word.strip_suffix("ies").map(|s| format!("{s}y")),
        word.strip_suffix("es").map(str::to_string),
        word.strip_suffix('s').map(str::to_string),
    ];
    candidates
        .into_iter()
        .flatten()
        .any(|stem| VERB_BASES.contains(&stem.as_str()))
}

fn lexical(token: &Token) -> Lexical {
    if matches!(token.pos, Pos::Punct | Pos::Other) && !token.surface.chars().any(char::is_alphanumeric) {
        return Lexical::Fixed(token.pos);
    }
    let w = key(&token.surface);
    let w = w.as_str();
    match w {
        "to" => return Lexical::To,
        "her" => return Lexical::Her,
        "this" | "these" | "those" => return Lexical::Demonstrative,
        "that" => return Lexical::That,
        "have" | "has" | "had" | "having" => return Lexical::Have,
        "like" => return Lexical::Like,
        "not" | "n't" => return Lexical::Fixed(Pos::Part),
        _ => {}
    }
    if PRONOUNS.contains(&w) {
        return Lexical::Fixed(Pos::Pron);
    }
    if POSSESSIVES.contains(&w) {
        return Lexical::Possessive;
    }
    if DETERMINERS.contains(&w) {
        return Lexical::Fixed(Pos::Det);
    }
    if PREPOSITIONS.contains(&w) {
        return Lexical::Fixed(Pos::Prep);
    }
    if CONJUNCTIONS.contains(&w) {
        return Lexical::Fixed(Pos::Conj);
    }
    if AUXILIARIES.contains(&w) {
        return Lexical::Fixed(Pos::Aux);
    }
    if ADVERBS.contains(&w) {
        return Lexical::Fixed(Pos::Adv);
    }
    if NUMBERS.contains(&w) || w.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return Lexical::Fixed(Pos::Num);
    }
    if ADJECTIVES.contains(&w) {
        return Lexical::Fixed(Pos::Adj);
    }
    if NOUNS.contains(&w) {
        return Lexical::Fixed(Pos::Noun);
    }
    if VERB_PAST.contains(&w) {
        return Lexical::Verb(VerbForm::Past);
    }
    if VERB_BASES.contains(&w) {
        return Lexical::Verb(VerbForm::Base);
    }
    let len = w.chars().count();
    if len >= 4 && w.ends_with("ly") {
        return Lexical::Fixed(Pos::Adv);
    }
    if len >= 5 && w.ends_with("ed") {
        return Lexical::Verb(VerbForm::Past);
    }
    if len >= 5 && w.ends_with("ing") {
        return Lexical::Verb(VerbForm::Ing);
    }
    if len >= 3 && w.ends_with('s') && !w.ends_with("ss") && verb_stem_is_base(w) {
        return Lexical::Verb(VerbForm::ThirdPerson);
    }
    if len >= 5 && ["ful", "ous", "ive", "able", "ible", "less"].iter().any(|s| w.ends_with(s)) {
        return Lexical::Fixed(Pos::Adj);
    }
    Lexical::Unknown
}

/// Word classes that can head or modify a following noun phrase.
fn nominal_next(lex: Option<Lexical>) -> bool {
    matches!(
        lex,
        Some(Lexical::Fixed(Pos::Noun | Pos::Adj | Pos::Num))
            | Some(Lexical::Unknown)
            | Some(Lexical::Verb(VerbForm::Base | VerbForm::ThirdPerson | VerbForm::Ing))
    )
}

fn is_possessive(t: &Token) -> bool {
    t.pos == Pos::Det && POSSESSIVES.contains(&t.norm.as_str())
}

/// Fills in `pos` for every token. Punctuation tags set by the tokenizer are kept.
pub fn pos_tag(mut tokens: Vec<Token>) -> Vec<Token> {
    let lex: Vec<Lexical> = tokens.iter().map(lexical).collect();
    let mut forced: Vec<Option<Pos>> = vec![None; tokens.len()];
    for i in 0..tokens.len() {
        let prev = if i == 0 { None } else { Some(&tokens[i - 1]) };
        let prev_pos = prev.map(|t| t.pos);
        let at_start = prev.is_none_or(|t| t.pos == Pos::Punct);
        let next_lex = lex.get(i + 1).copied();
        let after_nominal_modifier =
            matches!(prev_pos, Some(Pos::Det | Pos::Adj | Pos::Num)) || prev.is_some_and(is_possessive);

        let proper_run = !at_start
            && starts_upper(&tokens[i].surface)
            && tokens.get(i + 1).is_some_and(|t| starts_upper(&t.surface))
            && matches!(lex[i], Lexical::Fixed(Pos::Adj | Pos::Adv) | Lexical::Verb(_) | Lexical::Unknown);

        let pos = match (forced[i], lex[i]) {
            (Some(p), _) => p,
            _ if proper_run => Pos::Noun,
            (None, Lexical::Fixed(p)) => p,
            (None, Lexical::Possessive) => Pos::Det,
            (None, Lexical::Unknown) => Pos::Noun,
            (None, Lexical::Her) => {
                if nominal_next(next_lex) {
                    Pos::Det
                } else {
                    Pos::Pron
                }
            }
            (None, Lexical::Demonstrative) => {
                if nominal_next(next_lex) {
                    Pos::Det
                } else {
                    Pos::Pron
                }
            }
            (None, Lexical::That) => match next_lex {
                Some(Lexical::Fixed(Pos::Noun | Pos::Adj) | Lexical::Unknown) => Pos::Det,
                Some(
                    Lexical::Fixed(Pos::Pron | Pos::Det | Pos::Num)
                    | Lexical::Her
                    | Lexical::Demonstrative
                    | Lexical::Possessive,
                ) => Pos::Conj,
                _ => Pos::Pron,
            },
            (None, Lexical::Have) => {
                if tokens.get(i + 1).is_some_and(|t| key(&t.surface) == "to") {
                    Pos::Verb
                } else {
                    Pos::Aux
                }
            }
            (None, Lexical::Like) => {
                if matches!(prev_pos, Some(Pos::Pron | Pos::Aux | Pos::Part | Pos::Adv)) {
                    Pos::Verb
                } else {
                    Pos::Prep
                }
            }
            (None, Lexical::To) => {
                // skip adverbs to find the word the marker governs
                let mut j = i + 1;
                while j < tokens.len() && matches!(lex[j], Lexical::Fixed(Pos::Adv | Pos::Part)) {
                    j += 1;
                }
                let governs_verb = match lex.get(j) {
                    Some(Lexical::Verb(VerbForm::Base)) | Some(Lexical::Have) | Some(Lexical::Like) => true,
                    Some(Lexical::Fixed(Pos::Aux)) => matches!(key(&tokens[j].surface).as_str(), "be" | "do"),
                    Some(Lexical::Fixed(Pos::Adj | Pos::Noun) | Lexical::Unknown) => {
                        VERB_BASES.contains(&key(&tokens[j].surface).as_str())
                    }
                    _ => false,
                };
                let destination = j == i + 1
                    && prev.is_some_and(|t| MOTION_VERBS.contains(&t.norm.as_str()))
                    && DESTINATIONS.contains(&tokens[j].norm.as_str());
                if governs_verb && !destination {
                    if key(&tokens[j].surface) != "be" {
                        forced[j] = Some(Pos::Verb);
                    }
                    Pos::Part
                } else {
                    Pos::Prep
                }
            }
            (None, Lexical::Verb(form)) => match form {
                VerbForm::Base | VerbForm::ThirdPerson => {
                    if prev.is_some_and(|t| t.norm == "better") {
                        Pos::Verb
                    } else if after_nominal_modifier || prev_pos == Some(Pos::Prep) {
                        Pos::Noun
                    } else {
                        Pos::Verb
                    }
                }
                VerbForm::Past => {
                    if prev_pos == Some(Pos::Det) || prev.is_some_and(is_possessive) {
                        Pos::Adj
                    } else {
                        Pos::Verb
                    }
                }
                VerbForm::Ing => {
                    let compound_object =
                        prev_pos == Some(Pos::Noun) && i >= 2 && tokens[i - 2].pos == Pos::Verb;
                    if at_start || after_nominal_modifier || prev_pos == Some(Pos::Verb) || compound_object {
                        Pos::Noun
                    } else {
                        Pos::Verb
                    }
                }
            },
        };
        tokens[i].pos = pos;
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn tags(text: &str) -> Vec<(String, Pos)> {
        pos_tag(tokenize(text)).into_iter().map(|t| (t.surface, t.pos)).collect()
    }

    fn tag_of(text: &str, word: &str) -> Pos {
        tags(text).into_iter().find(|(s, _)| s == word).unwrap().1
    }

    #[test]
    fn closed_class_and_suffixes() {
        assert_eq!(tag_of("finished", "finished"), Pos::Verb);
        assert_eq!(tag_of("with", "with"), Pos::Prep);
        assert_eq!(tag_of("quickly", "quickly"), Pos::Adv);
        assert_eq!(tag_of("zorblax", "zorblax"), Pos::Noun);
        assert_eq!(tag_of("I can't", "can't"), Pos::Aux);
    }

    #[test]
    fn infinitive_marker() {
        assert_eq!(tag_of("I want to keep them", "to"), Pos::Part);
        assert_eq!(tag_of("I want to keep them", "keep"), Pos::Verb);
        assert_eq!(tag_of("can't talk to me", "to"), Pos::Prep);
        assert_eq!(tag_of("Happy to simply spend time", "to"), Pos::Part);
        assert_eq!(tag_of("I went to work", "to"), Pos::Prep);
        assert_eq!(tag_of("I went to work", "work"), Pos::Noun);
        assert_eq!(tag_of("I have to work", "work"), Pos::Verb);
        assert_eq!(tag_of("I have to work", "have"), Pos::Verb);
        assert_eq!(tag_of("We had a glass", "had"), Pos::Aux);
    }

    #[test]
    fn noun_verb_context() {
        assert_eq!(tag_of("a really nice talk", "talk"), Pos::Noun);
        assert_eq!(tag_of("I can't talk", "talk"), Pos::Verb);
        assert_eq!(tag_of("Got off work", "work"), Pos::Noun);
        assert_eq!(tag_of("Driving in the rain", "Driving"), Pos::Noun);
        assert_eq!(tag_of("I need to stop smoking", "smoking"), Pos::Noun);
        assert_eq!(tag_of("while eating this", "eating"), Pos::Verb);
        assert_eq!(tag_of("while eating this.", "this"), Pos::Pron);
        assert_eq!(tag_of("this weekend", "this"), Pos::Det);
    }

    #[test]
    fn her_and_that() {
        assert_eq!(tag_of("Her attitude is bad", "Her"), Pos::Det);
        assert_eq!(tag_of("I told her about it", "her"), Pos::Pron);
        assert_eq!(tag_of("I realized that I have to go", "that"), Pos::Conj);
        assert_eq!(tag_of("that was fun", "that"), Pos::Pron);
        assert_eq!(tag_of("that dog", "that"), Pos::Det);
    }

    #[test]
    fn tagging_is_deterministic() {
        let s = "And now my bf is busy and can't talk to me.";
        assert_eq!(tags(s), tags(s));
    }
}
